//! Proper colorings, balancedness, and coloring extension by stellar subdivision.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::core::{Complex, Face, LabelGen, VertexId};
use crate::error::{Error, Result};
use crate::subdivision::stellar_subdivide;

/// An assignment of colors `0..m` to vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Coloring {
    m: usize,
    colors: BTreeMap<VertexId, usize>,
}

impl Coloring {
    pub fn new(m: usize) -> Self {
        Coloring { m, colors: BTreeMap::new() }
    }

    pub fn from_map(m: usize, colors: BTreeMap<VertexId, usize>) -> Result<Self> {
        if let Some((v, c)) = colors.iter().find(|(_, &c)| c >= m) {
            return Err(Error::InvalidParameter(format!("color {c} of {v} is not below m = {m}")));
        }
        Ok(Coloring { m, colors })
    }

    /// Palette size.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn set_m(&mut self, m: usize) {
        self.m = m;
    }

    pub fn get(&self, v: &VertexId) -> Option<usize> {
        self.colors.get(v).copied()
    }

    /// Assigns a color, growing the palette if needed.
    pub fn set(&mut self, v: VertexId, c: usize) {
        self.m = self.m.max(c + 1);
        self.colors.insert(v, c);
    }

    pub fn remove(&mut self, v: &VertexId) -> Option<usize> {
        self.colors.remove(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, usize)> {
        self.colors.iter().map(|(v, &c)| (v, c))
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, usize> {
        &self.colors
    }

    /// Colors actually used.
    pub fn palette(&self) -> BTreeSet<usize> {
        self.colors.values().copied().collect()
    }

    pub fn restrict<'a>(&self, vertices: impl IntoIterator<Item = &'a VertexId>) -> Coloring {
        let colors = vertices.into_iter().filter_map(|v| self.colors.get(v).map(|&c| (v.clone(), c))).collect();
        Coloring { m: self.m, colors }
    }

    /// Color set of a face; error if a vertex is uncolored.
    pub fn colors_of(&self, f: &Face) -> Result<BTreeSet<usize>> {
        f.vertices().iter().map(|v| self.get(v).ok_or_else(|| Error::Uncolored(v.to_string()))).collect()
    }

    fn require_all(&self, c: &Complex) -> Result<()> {
        for v in c.vertices() {
            if !self.colors.contains_key(&v) {
                return Err(Error::Uncolored(v.to_string()));
            }
        }
        Ok(())
    }
}

/// Monochromatic edges of `c` under `k`.
pub fn improper_edges(c: &Complex, k: &Coloring) -> Result<Vec<Face>> {
    k.require_all(c)?;
    Ok(c.edges().into_iter().filter(|e| k.get(&e.vertices()[0]) == k.get(&e.vertices()[1])).collect())
}

/// Whether no edge is monochromatic. Every vertex must be colored.
pub fn is_proper(c: &Complex, k: &Coloring) -> Result<bool> {
    Ok(improper_edges(c, k)?.is_empty())
}

/// Whether `k` is a proper coloring of the `d`-dimensional complex with colors `0..=d`.
pub fn is_balanced_coloring(c: &Complex, k: &Coloring) -> Result<bool> {
    let d = c.dim().unwrap_or(-1);
    Ok(is_proper(c, k)? && k.restrict(c.vertices().iter()).palette().iter().all(|&x| (x as isize) <= d))
}

/// Exact backtracking search for a proper `m`-coloring.
pub fn find_proper_coloring(c: &Complex, m: usize) -> Option<Coloring> {
    if m == 0 {
        return c.is_void().then(|| Coloring::new(0));
    }
    let adj = c.adjacency();
    let mut order: Vec<VertexId> = c.vertices().into_iter().collect();
    order.sort_by(|a, b| adj[b].len().cmp(&adj[a].len()).then_with(|| a.cmp(b)));
    let pos: BTreeMap<&VertexId, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let nbrs: Vec<Vec<usize>> = order.iter().map(|v| adj[v].iter().map(|w| pos[w]).collect()).collect();
    let mut assign: Vec<Option<usize>> = vec![None; order.len()];

    fn go(i: usize, used: usize, m: usize, nbrs: &[Vec<usize>], assign: &mut Vec<Option<usize>>) -> bool {
        if i == assign.len() {
            return true;
        }
        // Symmetry breaking: a vertex may open at most one new color.
        for col in 0..m.min(used + 1) {
            if nbrs[i].iter().any(|&j| assign[j] == Some(col)) {
                continue;
            }
            assign[i] = Some(col);
            if go(i + 1, used.max(col + 1), m, nbrs, assign) {
                return true;
            }
            assign[i] = None;
        }
        false
    }

    if !go(0, 0, m, &nbrs, &mut assign) {
        return None;
    }
    let mut k = Coloring::new(m);
    for (v, c) in order.into_iter().zip(assign) {
        k.set(v, c.expect("assigned"));
    }
    Some(k)
}

/// A pair `(L, K)` with `K` a subcomplex of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeComplex {
    pub l: Complex,
    pub k: Complex,
}

impl RelativeComplex {
    pub fn new(l: Complex, k: Complex) -> Result<Self> {
        if let Some(f) = k.facets().find(|f| !l.contains(f)) {
            return Err(Error::NotSubcomplex(format!("face {f} of K is not in L")));
        }
        Ok(RelativeComplex { l, k })
    }

    /// Largest dimension of a face of `L` not in `K`; `None` if `K = L`.
    pub fn dim(&self) -> Option<isize> {
        self.l.faces().iter().filter(|f| !self.k.contains(f)).map(Face::dim).max()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Subdividing an edge outside `K` whose endpoints in `K` share a color.
    EdgeSplit,
    /// Starring an inclusion-maximal dull face.
    DullStar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringStep {
    pub kind: StepKind,
    pub face: Face,
    pub vertex: VertexId,
    pub color: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub complex: Complex,
    pub coloring: Coloring,
    pub log: Vec<ColoringStep>,
}

/// A face whose every vertex color is below its dimension.
pub fn is_dull(f: &Face, k: &Coloring) -> bool {
    let d = f.dim();
    d > 0 && f.vertices().iter().all(|v| k.get(v).map(|c| (c as isize) < d).unwrap_or(false))
}

pub fn dull_faces(c: &Complex, k: &Coloring) -> Vec<Face> {
    c.faces().iter().filter(|f| is_dull(f, k)).cloned().collect()
}

/// Lexicographically least inclusion-maximal dull face.
fn maximal_dull_face(c: &Complex, k: &Coloring) -> Option<Face> {
    let dull = dull_faces(c, k);
    let set: BTreeSet<&Face> = dull.iter().collect();
    dull.iter().filter(|f| !set.iter().any(|g| g.len() > f.len() && f.is_subset(g))).min().cloned()
}

/// Extends a proper coloring of `K` to a proper coloring of a stellar subdivision of `L`.
///
/// Edges of `L \ K` whose endpoints are equally colored vertices of `K` are
/// subdivided first; then every vertex outside `K` gets color 0, and the
/// lexicographically least inclusion-maximal dull face is starred repeatedly,
/// the new apex getting color `dim F`, until no dull face remains. Faces of `K`
/// are never subdivided and colors of `K` are never changed. The returned
/// palette size is `max(m, d + 1)` for `d = dim(L, K)`.
pub fn extend_coloring(rel: &RelativeComplex, k: &Coloring, m: usize) -> Result<Extension> {
    extend_coloring_with(rel, k, m, &mut LabelGen::default())
}

pub fn extend_coloring_with(rel: &RelativeComplex, k: &Coloring, m: usize, labels: &mut LabelGen) -> Result<Extension> {
    if m == 0 {
        return Err(Error::InvalidParameter("palette size must be at least 1".into()));
    }
    let kv = rel.k.vertices();
    let mut kappa = k.restrict(kv.iter());
    kappa.set_m(m);
    for v in &kv {
        match kappa.get(v) {
            None => return Err(Error::Uncolored(v.to_string())),
            Some(c) if c >= m => return Err(Error::InvalidParameter(format!("color {c} of {v} is not below m = {m}"))),
            _ => {}
        }
    }
    if let Some(e) = improper_edges(&rel.k, &kappa)?.into_iter().next() {
        return Err(Error::ImproperColoring(e));
    }
    let Some(d) = rel.dim() else {
        return Ok(Extension { complex: rel.l.clone(), coloring: kappa, log: Vec::new() });
    };
    let d = d.max(0) as usize;
    labels.skip_past(rel.l.vertices().iter());
    let mut l = rel.l.clone();
    let mut log = Vec::new();

    let splits: Vec<Face> = rel
        .l
        .edges()
        .into_iter()
        .filter(|e| {
            !rel.k.contains(e)
                && e.vertices().iter().all(|v| kv.contains(v))
                && kappa.get(&e.vertices()[0]) == kappa.get(&e.vertices()[1])
        })
        .collect();
    for e in splits {
        let a = labels.fresh();
        l = stellar_subdivide(&l, &e, a.clone())?;
        log.push(ColoringStep { kind: StepKind::EdgeSplit, face: e, vertex: a, color: 0 });
    }
    for v in l.vertices() {
        if !kv.contains(&v) {
            kappa.set(v, 0);
        }
    }
    while let Some(f) = maximal_dull_face(&l, &kappa) {
        if rel.k.contains(&f) {
            return Err(Error::Internal(format!("dull face {f} lies in K")));
        }
        let a = labels.fresh();
        let color = f.dim() as usize;
        l = stellar_subdivide(&l, &f, a.clone())?;
        kappa.set(a.clone(), color);
        log.push(ColoringStep { kind: StepKind::DullStar, face: f, vertex: a, color });
    }
    if let Some(e) = improper_edges(&l, &kappa)?.into_iter().next() {
        return Err(Error::Internal(format!("extension left improper edge {e}")));
    }
    kappa.set_m(m.max(d + 1));
    Ok(Extension { complex: l, coloring: kappa, log })
}
