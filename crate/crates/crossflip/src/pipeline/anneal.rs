use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{find_proper_coloring, Coloring};
use crate::core::classify::{is_closed_pseudomanifold, is_closed_surface};
use crate::core::generate::cross_polytope_boundary;
use crate::core::{canonical_form, CanonicalKey, Complex};
use crate::error::{Error, Result};
use crate::flips::{available_bistellar_flips, available_cross_flips, CrossFlipTemplate};

use super::balanced::check_coloring;
use super::report::{Move, Outcome, ReductionReport, ReportStats, Trace};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    Facets,
    Vertices,
}

impl Objective {
    fn eval(self, c: &Complex) -> f64 {
        match self {
            Objective::Facets => c.num_facets() as f64,
            Objective::Vertices => c.num_vertices() as f64,
        }
    }
}

/// Simulated annealing settings. The temperature after `n` proposals is
/// `t0 * decay^n`; `budget` counts applied moves and `max_proposals` bounds
/// the total work.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub budget: usize,
    pub seed: u64,
    pub t0: f64,
    pub decay: f64,
    pub objective: Objective,
    pub max_proposals: u64,
    /// Cap on placements enumerated per template and step.
    pub placements_per_template: Option<usize>,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            budget: 2000,
            seed: 0,
            t0: 1.0,
            decay: 0.999,
            objective: Objective::Facets,
            max_proposals: 20_000,
            placements_per_template: None,
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: u64) -> Self {
        AnnealConfig { seed, ..Default::default() }
    }
}

fn check_manifold(c: &Complex) -> Result<usize> {
    let d = c
        .dim()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Precondition("the complex must have dimension at least 1".into()))?;
    let ok = if d == 2 { is_closed_surface(c) } else { is_closed_pseudomanifold(c) };
    if !ok {
        return Err(Error::Precondition("the complex is not a closed manifold".into()));
    }
    Ok(d as usize)
}

/// Runs the annealing loop. `target` recognizes success; on failure the trace
/// is cut back to the first complex of least objective.
fn anneal(
    mut trace: Trace,
    cfg: &AnnealConfig,
    candidates: impl Fn(&Complex) -> Vec<Move>,
    target: impl Fn(&Complex) -> Result<bool>,
) -> Result<ReductionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut proposals = 0u64;
    let mut temp = cfg.t0;
    let mut best = (cfg.objective.eval(&trace.current().0), 0usize);
    let outcome = loop {
        let (c, k) = trace.current().clone();
        if target(&c)? {
            break Outcome::Reached;
        }
        if trace.len() >= cfg.budget || proposals >= cfg.max_proposals {
            break Outcome::BudgetExhausted;
        }
        let moves = candidates(&c);
        if moves.is_empty() {
            break Outcome::Stalled;
        }
        proposals += 1;
        temp *= cfg.decay;
        let mv = &moves[rng.gen_range(0..moves.len())];
        let Ok(next) = mv.apply(&c, k.as_ref()) else { continue };
        let delta = cfg.objective.eval(&next.0) - cfg.objective.eval(&c);
        let u: f64 = rng.gen();
        if delta > 0.0 && u >= (-delta / temp.max(f64::MIN_POSITIVE)).exp() {
            continue;
        }
        let value = cfg.objective.eval(&next.0);
        trace.push_applied(mv.clone(), next)?;
        if value < best.0 {
            best = (value, trace.len());
        }
    };
    if outcome != Outcome::Reached {
        trace.truncate(best.1);
    }
    trace.finish(ReportStats { steps: 0, seed: Some(cfg.seed), outcome, proposals })
}

fn resolve_coloring(c: &Complex, k: Option<&Coloring>, d: usize) -> Result<Coloring> {
    match k {
        Some(k) => {
            check_coloring(c, k, d + 1)?;
            Ok(k.clone())
        }
        None => find_proper_coloring(c, d + 1).ok_or_else(|| Error::Precondition("the complex is not balanced".into())),
    }
}

/// Anneals over the catalog's cross-flips towards `C_d`, minimizing the objective.
///
/// The coloring is transported along the way; without one, a balanced
/// coloring is searched for first.
pub fn heuristic_reduce(
    c: &Complex,
    k: Option<&Coloring>,
    catalog: &[CrossFlipTemplate],
    cfg: &AnnealConfig,
) -> Result<ReductionReport> {
    let d = check_manifold(c)?;
    if catalog.iter().any(|t| t.dim != d) {
        return Err(Error::InvalidParameter(format!("catalog templates must have dimension {d}")));
    }
    let k = resolve_coloring(c, k, d)?;
    let (cd, _) = cross_polytope_boundary(d)?;
    let key: CanonicalKey = canonical_form(&cd)?;
    let trace = Trace::new(c.clone(), Some(k));
    let limit = cfg.placements_per_template;
    anneal(
        trace,
        cfg,
        |x| available_cross_flips(x, catalog, limit).into_iter().map(|mv| Move::Cross { mv }).collect(),
        |x| Ok(x.num_facets() == cd.num_facets() && x.num_vertices() == cd.num_vertices() && canonical_form(x)? == key),
    )
}

/// Anneals over bistellar flips towards the boundary of a simplex.
pub fn bistellar_reduce(c: &Complex, cfg: &AnnealConfig) -> Result<ReductionReport> {
    let d = check_manifold(c)?;
    let trace = Trace::new(c.clone(), None);
    anneal(
        trace,
        cfg,
        |x| available_bistellar_flips(x).into_iter().map(Move::bistellar).collect(),
        |x| Ok(x.num_vertices() == d + 2 && x.num_facets() == d + 2),
    )
}
