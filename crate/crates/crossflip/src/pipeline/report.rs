use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloring::{is_proper, Coloring};
use crate::core::classify::{is_closed_pseudomanifold, is_closed_surface};
use crate::core::{canonical_form, labeled_digest, Complex, VertexId};
use crate::error::{Error, Result};
use crate::flips::{apply_bistellar_flip, apply_cross_flip, CrossFlipMove, FlipMove};

/// One step of a reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Move {
    Cross {
        #[serde(flatten)]
        mv: CrossFlipMove,
    },
    /// A bistellar flip; `colors` gives the color of every vertex it creates.
    Bistellar {
        flip: FlipMove,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        colors: BTreeMap<VertexId, usize>,
    },
}

impl Move {
    pub fn bistellar(flip: FlipMove) -> Move {
        Move::Bistellar { flip, colors: BTreeMap::new() }
    }

    /// `(removed facets, inserted facets)`.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Move::Cross { mv } => mv.template.shape(),
            Move::Bistellar { flip, .. } => (flip.b.len(), flip.a.len()),
        }
    }

    /// Applies the move, transporting the coloring when there is one.
    pub fn apply(&self, c: &Complex, k: Option<&Coloring>) -> Result<(Complex, Option<Coloring>)> {
        match self {
            Move::Cross { mv } => apply_cross_flip(c, mv, k),
            Move::Bistellar { flip, colors } => {
                let out = apply_bistellar_flip(c, flip)?;
                let Some(k) = k else { return Ok((out, None)) };
                let mut nk = k.restrict(out.vertices().iter());
                for v in flip.b.vertices().iter().filter(|v| !c.has_vertex(v)) {
                    let col = *colors.get(v).ok_or_else(|| Error::Uncolored(v.to_string()))?;
                    nk.set(v.clone(), col);
                }
                nk.set_m(k.m());
                Ok((out, Some(nk)))
            }
        }
    }

    /// The move undoing this one, given the states before and after it.
    pub fn inverse(&self, before: &(Complex, Option<Coloring>), after: &Complex) -> Result<Move> {
        Ok(match self {
            Move::Cross { mv } => Move::Cross { mv: mv.inverse()? },
            Move::Bistellar { flip, .. } => {
                let mut colors = BTreeMap::new();
                if let Some(k) = &before.1 {
                    for v in flip.a.vertices().iter().filter(|v| !after.has_vertex(v)) {
                        colors.insert(v.clone(), k.get(v).ok_or_else(|| Error::Uncolored(v.to_string()))?);
                    }
                }
                Move::Bistellar { flip: flip.inverse(), colors }
            }
        })
    }

    /// The same move with every vertex label passed through `f`.
    pub fn relabel(&self, f: &impl Fn(&VertexId) -> VertexId) -> Move {
        match self {
            Move::Cross { mv } => {
                let mut mv = mv.clone();
                for w in mv.embedding.map.values_mut() {
                    *w = f(w);
                }
                for w in mv.fresh.values_mut() {
                    *w = f(w);
                }
                Move::Cross { mv }
            }
            Move::Bistellar { flip, colors } => Move::Bistellar {
                flip: FlipMove::new(flip.a.map(f), flip.b.map(f)),
                colors: colors.iter().map(|(v, &c)| (f(v), c)).collect(),
            },
        }
    }
}

/// Checks recorded for the complex produced by one move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCertificate {
    pub step: usize,
    pub shape: (usize, usize),
    pub facets: usize,
    pub vertices: usize,
    pub euler_characteristic: i64,
    /// Closed surface for dimension 2, closed pseudomanifold otherwise.
    pub manifold: bool,
    /// Properness of the transported coloring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proper: Option<bool>,
    /// No vertex kept by the move changed color.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors_kept: Option<bool>,
    /// Shellability and co-shellability of a cross-flip's ball.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_certified: Option<bool>,
}

impl StepCertificate {
    pub fn ok(&self) -> bool {
        self.manifold
            && self.proper != Some(false)
            && self.colors_kept != Some(false)
            && self.template_certified != Some(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The construction finished or the search reached its target.
    Reached,
    /// No move was available.
    Stalled,
    /// The search budget ran out; the report ends at the best complex seen.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outcome: Outcome,
    /// Moves proposed by a search, accepted or not.
    #[serde(default)]
    pub proposals: u64,
}

/// A certified sequence of moves from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub start: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_coloring: Option<Coloring>,
    pub end: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_coloring: Option<Coloring>,
    /// Canonical keys of the two ends.
    pub start_key: String,
    pub end_key: String,
    pub moves: Vec<Move>,
    /// Labeled digest of every complex along the way, `start` and `end` included.
    pub intermediates: Vec<String>,
    pub certificates: Vec<StepCertificate>,
    pub stats: ReportStats,
}

impl ReductionReport {
    pub fn success(&self) -> bool {
        self.stats.outcome == Outcome::Reached
    }

    /// Replays the moves from `start`, checking every intermediate digest and
    /// the end. Returns every state.
    pub fn replay(&self) -> Result<Vec<(Complex, Option<Coloring>)>> {
        if self.intermediates.len() != self.moves.len() + 1 {
            return Err(Error::Internal("digest count does not match the move count".into()));
        }
        let mut states = vec![(self.start.clone(), self.start_coloring.clone())];
        for (i, mv) in self.moves.iter().enumerate() {
            let (c, k) = states.last().expect("nonempty");
            let next = mv.apply(c, k.as_ref())?;
            if labeled_digest(&next.0) != self.intermediates[i + 1] {
                return Err(Error::Internal(format!("replay diverges at step {}", i + 1)));
            }
            states.push(next);
        }
        let (c, k) = states.last().expect("nonempty");
        if *c != self.end || *k != self.end_coloring {
            return Err(Error::Internal("replay does not reach the recorded end".into()));
        }
        Ok(states)
    }

    /// The same path walked backwards.
    pub fn reversed(&self) -> Result<ReductionReport> {
        let states = self.replay()?;
        let mut trace = Trace::new(self.end.clone(), self.end_coloring.clone());
        for i in (0..self.moves.len()).rev() {
            trace.push(self.moves[i].inverse(&states[i], &states[i + 1].0)?)?;
        }
        let stats = ReportStats { steps: self.moves.len(), ..self.stats.clone() };
        trace.finish(stats)
    }
}

fn certify_complex(c: &Complex) -> bool {
    if c.dim() == Some(2) {
        is_closed_surface(c)
    } else {
        is_closed_pseudomanifold(c)
    }
}

/// Builds a report move by move, applying and certifying each one.
#[derive(Clone, Debug)]
pub(crate) struct Trace {
    states: Vec<(Complex, Option<Coloring>)>,
    moves: Vec<Move>,
    digests: Vec<String>,
    certificates: Vec<StepCertificate>,
    templates: HashMap<String, bool>,
}

impl Trace {
    pub fn new(start: Complex, k: Option<Coloring>) -> Self {
        let digest = labeled_digest(&start);
        Trace {
            states: vec![(start, k)],
            moves: Vec::new(),
            digests: vec![digest],
            certificates: Vec::new(),
            templates: HashMap::new(),
        }
    }

    pub fn current(&self) -> &(Complex, Option<Coloring>) {
        self.states.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn push(&mut self, mv: Move) -> Result<()> {
        let (c, k) = self.current();
        let next = mv.apply(c, k.as_ref())?;
        self.push_applied(mv, next)
    }

    /// Records a move whose result is already known.
    pub fn push_applied(&mut self, mv: Move, next: (Complex, Option<Coloring>)) -> Result<()> {
        let template_certified = match &mv {
            Move::Cross { mv } => Some(match self.templates.get(&mv.template.key) {
                Some(&ok) => ok,
                None => {
                    let ok = mv.template.certify().is_ok();
                    self.templates.insert(mv.template.key.clone(), ok);
                    ok
                }
            }),
            Move::Bistellar { .. } => None,
        };
        let (out, nk) = &next;
        let (_, k) = self.current();
        let colors_kept = match (k, nk) {
            (Some(k), Some(nk)) => Some(nk.iter().all(|(v, c)| k.get(v).is_none_or(|old| old == c))),
            _ => None,
        };
        let cert = StepCertificate {
            step: self.moves.len() + 1,
            shape: mv.shape(),
            facets: out.num_facets(),
            vertices: out.num_vertices(),
            euler_characteristic: out.euler_characteristic(),
            manifold: certify_complex(out),
            proper: nk.as_ref().map(|nk| is_proper(out, nk)).transpose()?,
            colors_kept,
            template_certified,
        };
        if !cert.ok() {
            return Err(Error::Internal(format!("step {} failed certification: {cert:?}", cert.step)));
        }
        self.digests.push(labeled_digest(out));
        self.certificates.push(cert);
        self.moves.push(mv);
        self.states.push(next);
        Ok(())
    }

    /// Drops every move after the first `n`.
    pub fn truncate(&mut self, n: usize) {
        self.moves.truncate(n);
        self.certificates.truncate(n);
        self.digests.truncate(n + 1);
        self.states.truncate(n + 1);
    }

    pub fn states(&self) -> &[(Complex, Option<Coloring>)] {
        &self.states
    }

    pub fn finish(self, mut stats: ReportStats) -> Result<ReductionReport> {
        let (start, start_coloring) = self.states.first().cloned().expect("nonempty");
        let (end, end_coloring) = self.states.last().cloned().expect("nonempty");
        stats.steps = self.moves.len();
        Ok(ReductionReport {
            start_key: canonical_form(&start)?.digest(),
            end_key: canonical_form(&end)?.digest(),
            start,
            start_coloring,
            end,
            end_coloring,
            moves: self.moves,
            intermediates: self.digests,
            certificates: self.certificates,
            stats,
        })
    }
}
