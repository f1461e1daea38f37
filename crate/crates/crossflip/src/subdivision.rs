//! Stellar subdivisions and welds, flag subdivisions and the diamond operation.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::coloring::{improper_edges, Coloring};
use crate::core::{Complex, Face, LabelGen, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionStep {
    pub face: Face,
    pub apex: VertexId,
}

/// Ordered stellar subdivisions; replaying reproduces the result exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct SubdivisionLog(pub Vec<SubdivisionStep>);

impl SubdivisionLog {
    pub fn push(&mut self, face: Face, apex: VertexId) {
        self.0.push(SubdivisionStep { face, apex });
    }

    pub fn steps(&self) -> &[SubdivisionStep] {
        &self.0
    }

    /// Applies every step; each target face must be present when reached.
    pub fn replay(&self, c: &Complex) -> Result<Complex> {
        let mut out = c.clone();
        for s in &self.0 {
            out = stellar_subdivide(&out, &s.face, s.apex.clone())?;
        }
        Ok(out)
    }

    /// Applies the steps whose target face is present, skipping the others.
    pub fn replay_where_present(&self, c: &Complex) -> Result<Complex> {
        let mut out = c.clone();
        for s in &self.0 {
            if out.contains(&s.face) {
                out = stellar_subdivide(&out, &s.face, s.apex.clone())?;
            }
        }
        Ok(out)
    }
}

/// `sd_F(Δ) = (Δ \ F) ∪ (a * ∂F̄ * lk(F))`.
pub fn stellar_subdivide(c: &Complex, f: &Face, apex: VertexId) -> Result<Complex> {
    if !c.contains(f) {
        return Err(Error::FaceNotInComplex(f.clone()));
    }
    if f.len() < 2 {
        return Err(Error::NoOpSubdivision(f.clone()));
    }
    if c.has_vertex(&apex) {
        return Err(Error::LabelCollision(apex.to_string()));
    }
    let mut out = Vec::with_capacity(c.num_facets() + f.len());
    for g in c.facets() {
        if f.is_subset(g) {
            for v in f.vertices() {
                out.push(g.without(v).with(apex.clone()));
            }
        } else {
            out.push(g.clone());
        }
    }
    Ok(Complex::from_facets(out))
}

/// Faces `F` with `F ∉ Δ`, `|F| >= 2` and `lk(apex) = ∂F̄ * L` for some `L` on vertices disjoint from `F`.
fn weld_candidates(c: &Complex, apex: &VertexId) -> Result<Vec<(Face, Complex)>> {
    let lk = c.link(&Face::vertex(apex.clone()))?;
    let Some(h0) = lk.facets().next().cloned() else { return Ok(Vec::new()) };
    let lv = lk.vertices();
    let mut found = Vec::new();
    for s in h0.subsets() {
        for w in lv.iter().filter(|w| !h0.contains(w)) {
            let f = s.with(w.clone());
            if f.len() < 2 || c.contains(&f) {
                continue;
            }
            let rest: BTreeSet<Face> = lk.facets().map(|h| h.difference(&f)).collect();
            let l = Complex::from_facets(rest.iter().cloned());
            if l.facets().any(|m| !m.is_disjoint(&f)) {
                continue;
            }
            let rebuilt =
                Complex::from_facets(f.vertices().iter().flat_map(|v| l.facets().map(|m| f.without(v).union(m))));
            if rebuilt == lk && !found.iter().any(|(g, _): &(Face, Complex)| *g == f) {
                found.push((f, l));
            }
        }
    }
    Ok(found)
}

/// Inverse of a stellar subdivision: removes `apex` and restores the face it subdivided.
///
/// Returns the welded complex and the restored face. Errors if no face fits,
/// and also if several do (the weld would be ambiguous).
pub fn stellar_weld(c: &Complex, apex: &VertexId) -> Result<(Complex, Face)> {
    if !c.has_vertex(apex) {
        return Err(Error::VertexNotInComplex(apex.to_string()));
    }
    let candidates = weld_candidates(c, apex)?;
    match candidates.len() {
        0 => Err(Error::NotSubdivisionVertex(apex.to_string())),
        1 => {
            let (f, l) = candidates.into_iter().next().expect("one candidate");
            Ok((weld_with(c, apex, &f, &l), f))
        }
        n => Err(Error::AmbiguousWeld(apex.to_string(), n)),
    }
}

/// Faces that `apex` could be welded back into.
pub fn stellar_weld_candidates(c: &Complex, apex: &VertexId) -> Result<Vec<Face>> {
    if !c.has_vertex(apex) {
        return Err(Error::VertexNotInComplex(apex.to_string()));
    }
    Ok(weld_candidates(c, apex)?.into_iter().map(|(f, _)| f).collect())
}

/// Welds `apex` back into the given face, for when [`stellar_weld`] is ambiguous.
pub fn stellar_weld_at(c: &Complex, apex: &VertexId, f: &Face) -> Result<Complex> {
    if !c.has_vertex(apex) {
        return Err(Error::VertexNotInComplex(apex.to_string()));
    }
    let (_, l) = weld_candidates(c, apex)?
        .into_iter()
        .find(|(g, _)| g == f)
        .ok_or_else(|| Error::NotSubdivisionVertex(format!("{apex} does not weld into {f}")))?;
    Ok(weld_with(c, apex, f, &l))
}

fn weld_with(c: &Complex, apex: &VertexId, f: &Face, l: &Complex) -> Complex {
    let mut out: Vec<Face> = c.facets().filter(|g| !g.contains(apex)).cloned().collect();
    out.extend(l.facets().map(|m| f.union(m)));
    Complex::from_facets(out)
}

/// Subdivides the faces of a flag `F_1 ⊂ ... ⊂ F_d` (`dim F_i = i`), starting with `F_d`.
///
/// Applied to `∂σ^{d+1}` this yields a complex isomorphic to `C_d`.
pub fn flag_subdivide(c: &Complex, flag: &[Face], labels: &mut LabelGen) -> Result<(Complex, SubdivisionLog)> {
    for (i, f) in flag.iter().enumerate() {
        if f.dim() != i as isize + 1 {
            return Err(Error::InvalidParameter(format!("flag face {f} should have dimension {}", i + 1)));
        }
        if i > 0 && !flag[i - 1].is_subset(f) {
            return Err(Error::InvalidParameter(format!("flag is not nested at {f}")));
        }
        if !c.contains(f) {
            return Err(Error::FaceNotInComplex(f.clone()));
        }
    }
    labels.skip_past(c.vertices().iter());
    let mut log = SubdivisionLog::default();
    let mut out = c.clone();
    for f in flag.iter().rev() {
        let a = labels.fresh();
        out = stellar_subdivide(&out, f, a.clone())?;
        log.push(f.clone(), a);
    }
    Ok((out, log))
}

/// The cross-polytopal complex produced by the diamond operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondResult {
    /// `d`, one less than the dimension of the input.
    pub d: usize,
    /// The subdivided `d`-skeleton: the union of all cell boundaries.
    pub complex: Complex,
    /// Each input facet with its subdivided boundary, isomorphic to `C_d`.
    pub cells: BTreeMap<Face, Complex>,
    /// Each `d`-face of the input with the `d`-faces it was subdivided into.
    /// These sets partition the facets of `complex`.
    pub pieces: BTreeMap<Face, BTreeSet<Face>>,
    /// Proper coloring with palette `0..=d`: an apex at a `k`-face gets color
    /// `d - k`, and input color `d + 1` becomes `d`.
    pub coloring: Coloring,
    pub log: SubdivisionLog,
}

impl DiamondResult {
    /// The diamond image of a subcomplex of the input's `d`-skeleton.
    pub fn image(&self, sub: &Complex) -> Result<Complex> {
        self.log.replay_where_present(sub)
    }
}

/// Label of the apex placed at `f` by the diamond operation.
pub fn diamond_apex_label(f: &Face) -> VertexId {
    VertexId::from(format!("<{}>", f.vertices().iter().map(|v| v.as_str()).join(".")))
}

/// The diamond operation on a pure `(d+1)`-dimensional complex properly colored with `0..=d+1`.
///
/// In descending order `k = d, ..., 1`, every `k`-face whose colors are
/// exactly `{d-k+1, ..., d+1}` is stellarly subdivided inside the
/// `d`-skeleton (lexicographic order within each dimension), which turns the
/// boundary of each facet into a copy of `C_d`.
pub fn diamond(c: &Complex, k: &Coloring) -> Result<DiamondResult> {
    let top = c
        .dim()
        .filter(|&t| t >= 1 && c.is_pure())
        .ok_or_else(|| Error::Precondition("diamond needs a pure complex of dimension at least 1".into()))?;
    let d = (top - 1) as usize;
    if let Some(e) = improper_edges(c, k)?.into_iter().next() {
        return Err(Error::ImproperColoring(e));
    }
    for v in c.vertices() {
        let col = k.get(&v).expect("checked by improper_edges");
        if col > d + 1 {
            return Err(Error::Precondition(format!("color {col} of {v} exceeds {}", d + 1)));
        }
    }
    let verts = c.vertices();
    let mut log = SubdivisionLog::default();
    let mut coloring = Coloring::new(d + 1);
    for kdim in (1..=d).rev() {
        let want: BTreeSet<usize> = (d - kdim + 1..=d + 1).collect();
        for f in c.faces_of_dim(kdim as isize) {
            if k.colors_of(&f)? == want {
                let a = diamond_apex_label(&f);
                if verts.contains(&a) {
                    return Err(Error::LabelCollision(a.to_string()));
                }
                coloring.set(a.clone(), d - kdim);
                log.push(f, a);
            }
        }
    }
    for v in &verts {
        let col = k.get(v).expect("colored");
        coloring.set(v.clone(), col.min(d));
    }
    coloring.set_m(d + 1);
    let complex = log.replay(&c.skeleton(d as isize))?;
    let mut cells = BTreeMap::new();
    for g in c.facets() {
        let boundary = Complex::from_facets(g.ridges());
        cells.insert(g.clone(), log.replay_where_present(&boundary)?);
    }
    let mut pieces = BTreeMap::new();
    for t in c.faces_of_dim(d as isize) {
        let sub = log.replay_where_present(&Complex::simplex(t.clone()))?;
        pieces.insert(t, sub.facet_set().clone());
    }
    Ok(DiamondResult { d, complex, cells, pieces, coloring, log })
}
