//! Simplicial posets, relative shellings and shellable pseudo-cobordisms.
//!
//! Elements are stored with their sorted vertex labels and, for each vertex
//! position `i`, the element covered by removing that vertex. Rank-1 elements
//! are unique per label; higher elements may be parallel (equal label sets).

mod cobordism;
mod shelling;

pub use cobordism::{
    compose, compose_with, decompose, disjoint_ends_cobordism, elementary_cobordism, eliminate_face,
    eliminate_vertices, subdivide_cobordism, Decomposition, DecompositionStep, Elimination, PseudoCobordism,
};
pub use shelling::{
    find_bidirectional_shelling, relative_shelling_verify, verify_bidirectional, BidirectionalShelling, RelativeVerdict,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::core::{Complex, Face, LabelGen, VertexId};
use crate::error::{Error, Result};

pub type ElemId = usize;

/// The bottom element `∅`.
pub const BOTTOM: ElemId = 0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub id: ElemId,
    pub rank: usize,
    pub vertices: Vec<VertexId>,
    /// `covers[i]` is the element obtained by removing `vertices[i]`.
    pub covers: Vec<ElemId>,
}

/// A simplicial poset; every element's covers have smaller ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Element>", into = "Vec<Element>")]
pub struct SimplicialPoset {
    elems: Vec<Element>,
    by_vertex: BTreeMap<VertexId, ElemId>,
    cofaces: Vec<Vec<ElemId>>,
}

impl TryFrom<Vec<Element>> for SimplicialPoset {
    type Error = Error;

    fn try_from(elems: Vec<Element>) -> Result<Self> {
        let mut p = SimplicialPoset::new();
        for (i, e) in elems.into_iter().enumerate() {
            if e.id != i {
                return Err(Error::InvalidPoset(format!("element {} is listed at position {i}", e.id)));
            }
            if i == 0 {
                if e.rank != 0 || !e.vertices.is_empty() || !e.covers.is_empty() {
                    return Err(Error::InvalidPoset("element 0 must be the empty face".into()));
                }
                continue;
            }
            if e.rank != e.vertices.len() {
                return Err(Error::InvalidPoset(format!(
                    "element {i} has rank {} but {} vertices",
                    e.rank,
                    e.vertices.len()
                )));
            }
            p.push_checked(e.vertices.into_iter().zip(e.covers).collect())?;
        }
        p.validate()?;
        Ok(p)
    }
}

impl From<SimplicialPoset> for Vec<Element> {
    fn from(p: SimplicialPoset) -> Self {
        p.elems
    }
}

impl Default for SimplicialPoset {
    fn default() -> Self {
        Self::new()
    }
}

impl SimplicialPoset {
    /// The poset with only `∅`.
    pub fn new() -> Self {
        SimplicialPoset {
            elems: vec![Element { id: 0, rank: 0, vertices: Vec::new(), covers: Vec::new() }],
            by_vertex: BTreeMap::new(),
            cofaces: vec![Vec::new()],
        }
    }

    /// The face poset of a simplicial complex, with the element of each face.
    pub fn from_complex(c: &Complex) -> (Self, BTreeMap<Face, ElemId>) {
        let mut p = SimplicialPoset::new();
        let mut ids = BTreeMap::new();
        if c.is_void() {
            return (p, ids);
        }
        let mut faces: Vec<Face> = c.faces().iter().cloned().collect();
        faces.sort_by_key(Face::len);
        ids.insert(Face::empty(), BOTTOM);
        for f in faces.into_iter().filter(|f| !f.is_empty()) {
            let pairs = f.vertices().iter().map(|v| (v.clone(), ids[&f.without(v)])).collect();
            let id = p.push_checked(pairs).expect("faces of a complex form a simplicial poset");
            ids.insert(f, id);
        }
        (p, ids)
    }

    /// Adds an element from (vertex, covered element) pairs in any order.
    fn push_checked(&mut self, mut pairs: Vec<(VertexId, ElemId)>) -> Result<ElemId> {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let id = self.elems.len();
        let rank = pairs.len();
        if rank == 0 {
            return Err(Error::InvalidPoset("only element 0 may be empty".into()));
        }
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPoset(format!("element {id} repeats a vertex (a loop)")));
        }
        for (i, (_, c)) in pairs.iter().enumerate() {
            let Some(ce) = self.elems.get(*c) else {
                return Err(Error::InvalidPoset(format!("element {id} covers unknown element {c}")));
            };
            let expect: Vec<&VertexId> = pairs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| &p.0).collect();
            if ce.vertices.iter().collect::<Vec<_>>() != expect {
                return Err(Error::InvalidPoset(format!("element {id}: cover {c} has the wrong vertices")));
            }
        }
        let (vertices, covers): (Vec<VertexId>, Vec<ElemId>) = pairs.into_iter().unzip();
        if rank == 1 {
            if self.by_vertex.contains_key(&vertices[0]) {
                return Err(Error::InvalidPoset(format!("vertex {} appears twice", vertices[0])));
            }
            self.by_vertex.insert(vertices[0].clone(), id);
        }
        for &c in &covers {
            self.cofaces[c].push(id);
        }
        self.elems.push(Element { id, rank, vertices, covers });
        self.cofaces.push(Vec::new());
        self.check_boolean(id)?;
        Ok(id)
    }

    /// Boolean-interval check at one element, assuming it holds below.
    fn check_boolean(&self, id: ElemId) -> Result<()> {
        let e = &self.elems[id];
        for i in 0..e.rank {
            for j in i + 1..e.rank {
                // Remove i then j (which sits at j - 1), or j then i.
                let a = self.elems[e.covers[i]].covers[j - 1];
                let b = self.elems[e.covers[j]].covers[i];
                if a != b {
                    return Err(Error::InvalidPoset(format!("interval below element {id} is not Boolean")));
                }
            }
        }
        Ok(())
    }

    /// Full invariant check.
    pub fn validate(&self) -> Result<()> {
        let bottom = &self.elems[0];
        if bottom.rank != 0 || !bottom.vertices.is_empty() {
            return Err(Error::InvalidPoset("element 0 must be the empty face".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &self.elems[1..] {
            if e.rank != e.vertices.len() || e.covers.len() != e.rank || e.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPoset(format!("element {} is malformed", e.id)));
            }
            for (i, &c) in e.covers.iter().enumerate() {
                let mut expect = e.vertices.clone();
                expect.remove(i);
                if c >= e.id || self.elems[c].vertices != expect {
                    return Err(Error::InvalidPoset(format!("element {} has a bad cover {c}", e.id)));
                }
            }
            if e.rank == 1 && !seen.insert(&e.vertices[0]) {
                return Err(Error::InvalidPoset(format!("vertex {} appears twice", e.vertices[0])));
            }
            self.check_boolean(e.id)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn element(&self, id: ElemId) -> &Element {
        &self.elems[id]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    pub fn rank(&self, id: ElemId) -> usize {
        self.elems[id].rank
    }

    pub fn labels(&self, id: ElemId) -> Face {
        Face::from_set(self.elems[id].vertices.iter().cloned())
    }

    pub fn vertex(&self, v: &VertexId) -> Option<ElemId> {
        self.by_vertex.get(v).copied()
    }

    pub fn vertex_labels(&self) -> impl Iterator<Item = &VertexId> {
        self.by_vertex.keys()
    }

    /// Elements covering `id`.
    pub fn cofaces(&self, id: ElemId) -> &[ElemId] {
        &self.cofaces[id]
    }

    pub fn max_rank(&self) -> usize {
        self.elems.iter().map(|e| e.rank).max().unwrap_or(0)
    }

    pub fn elements_of_rank(&self, r: usize) -> impl Iterator<Item = ElemId> + '_ {
        self.elems.iter().filter(move |e| e.rank == r).map(|e| e.id)
    }

    pub fn maximal_elements(&self) -> Vec<ElemId> {
        (0..self.len()).filter(|&i| self.cofaces[i].is_empty()).collect()
    }

    /// `[∅, e]` indexed by bitmasks over the positions of `e`'s vertices.
    pub fn lower_interval(&self, e: ElemId) -> Vec<ElemId> {
        let r = self.elems[e].rank;
        let full = (1usize << r) - 1;
        let mut out = vec![usize::MAX; 1 << r];
        out[full] = e;
        let mut masks: Vec<usize> = (0..full).collect();
        masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        for m in masks {
            let i = (!m).trailing_zeros() as usize;
            let parent = m | 1 << i;
            let pos = (parent & ((1 << i) - 1)).count_ones() as usize;
            out[m] = self.elems[out[parent]].covers[pos];
        }
        out
    }

    /// The element below `e` with the given labels.
    pub fn descend(&self, e: ElemId, labels: &Face) -> Option<ElemId> {
        let mut cur = e;
        loop {
            let el = &self.elems[cur];
            match el.vertices.iter().position(|v| !labels.contains(v)) {
                Some(i) => cur = el.covers[i],
                None => return (el.vertices.len() == labels.len()).then_some(cur),
            }
        }
    }

    /// All elements `>= e`.
    pub fn up_set(&self, e: ElemId) -> BTreeSet<ElemId> {
        let mut out = BTreeSet::from([e]);
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            for &y in &self.cofaces[x] {
                if out.insert(y) {
                    stack.push(y);
                }
            }
        }
        out
    }

    /// The order ideal generated by `ids`.
    pub fn ideal<I: IntoIterator<Item = ElemId>>(&self, ids: I) -> BTreeSet<ElemId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<ElemId> = ids.into_iter().collect();
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(self.elems[x].covers.iter().copied());
            }
        }
        if !out.is_empty() {
            out.insert(BOTTOM);
        }
        out
    }

    pub fn is_ideal(&self, set: &BTreeSet<ElemId>) -> bool {
        set.iter().all(|&x| x < self.len() && self.elems[x].covers.iter().all(|c| set.contains(c)))
    }

    /// The ideal as a simplicial complex; errors if two of its elements have equal labels.
    pub fn to_complex(&self, ideal: &BTreeSet<ElemId>) -> Result<Complex> {
        let mut seen = BTreeSet::new();
        for &x in ideal {
            if !seen.insert(&self.elems[x].vertices) {
                return Err(Error::InvalidPoset(format!("parallel faces with labels {}", self.labels(x))));
            }
        }
        Ok(Complex::from_facets(ideal.iter().map(|&x| self.labels(x))))
    }

    /// Whether the whole poset is a simplicial complex.
    pub fn is_complex(&self) -> bool {
        self.to_complex(&(0..self.len()).collect()).is_ok()
    }

    /// Glues a new simplex on `vertices` onto the poset. Each element of `glue`
    /// is identified with the face of the new simplex carrying its labels, and
    /// so is everything below it; vertices are identified by label. Returns the
    /// new poset and the id of the new top element.
    pub fn attach_cell(&self, vertices: &Face, glue: &[ElemId]) -> Result<(SimplicialPoset, ElemId)> {
        if vertices.is_empty() {
            return Err(Error::InvalidPoset("cannot attach an empty cell".into()));
        }
        for &g in glue {
            if g >= self.len() || !self.labels(g).is_subset(vertices) {
                return Err(Error::InvalidPoset(format!("glue element {g} is not a face of {vertices}")));
            }
        }
        let n = vertices.len();
        let mut p = self.clone();
        let mut at: Vec<ElemId> = vec![usize::MAX; 1 << n];
        let mut masks: Vec<usize> = (0..1usize << n).collect();
        masks.sort_by_key(|m| m.count_ones());
        let sub = |m: usize| Face::from_set((0..n).filter(|i| m >> i & 1 == 1).map(|i| vertices.vertices()[i].clone()));
        for m in masks {
            let s = sub(m);
            let glued: BTreeSet<ElemId> = glue
                .iter()
                .filter(|&&g| s.is_subset(&self.labels(g)))
                .map(|&g| self.descend(g, &s).expect("below glue"))
                .collect();
            if glued.len() > 1 {
                return Err(Error::InvalidPoset(format!("glue elements disagree on the face {s}")));
            }
            at[m] = if m == 0 {
                BOTTOM
            } else if let Some(&g) = glued.iter().next() {
                g
            } else if m.count_ones() == 1 && p.vertex(&s.vertices()[0]).is_some() {
                p.vertex(&s.vertices()[0]).expect("checked")
            } else {
                let pairs = (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| (vertices.vertices()[i].clone(), at[m ^ 1 << i]))
                    .collect();
                p.push_checked(pairs)?
            };
        }
        let top = at[(1 << n) - 1];
        if glue.contains(&top) {
            return Err(Error::InvalidPoset("the new cell is already present".into()));
        }
        Ok((p, top))
    }

    /// Stellar subdivision at `s` with a new vertex `apex`. Returns the new
    /// poset, the new id of every surviving old element, and the new id of
    /// `apex * g` for every `g` in the subdivided region.
    pub fn stellar_subdivide(&self, s: ElemId, apex: &VertexId) -> Result<PosetSubdivision> {
        if s == BOTTOM || s >= self.len() {
            return Err(Error::InvalidParameter(format!("cannot subdivide element {s}")));
        }
        if self.by_vertex.contains_key(apex) {
            return Err(Error::LabelCollision(apex.to_string()));
        }
        let removed = self.up_set(s);
        let region: BTreeSet<ElemId> =
            removed.iter().flat_map(|&e| self.lower_interval(e)).filter(|g| !removed.contains(g)).collect();
        let mut p = SimplicialPoset::new();
        let mut old_to_new: Vec<Option<ElemId>> = vec![None; self.len()];
        old_to_new[BOTTOM] = Some(BOTTOM);
        for e in &self.elems[1..] {
            if removed.contains(&e.id) {
                continue;
            }
            let pairs =
                e.vertices.iter().cloned().zip(e.covers.iter().map(|&c| old_to_new[c].expect("kept"))).collect();
            old_to_new[e.id] = Some(p.push_checked(pairs)?);
        }
        let mut cone: BTreeMap<ElemId, ElemId> = BTreeMap::new();
        let mut order: Vec<ElemId> = region.iter().copied().collect();
        order.sort_by_key(|&g| (self.elems[g].rank, g));
        for g in order {
            let el = &self.elems[g];
            let mut pairs = vec![(apex.clone(), old_to_new[g].expect("region elements are kept"))];
            for (v, c) in el.vertices.iter().zip(&el.covers) {
                pairs.push((v.clone(), cone[c]));
            }
            cone.insert(g, p.push_checked(pairs)?);
        }
        Ok(PosetSubdivision { poset: p, old_to_new, cone, removed })
    }
}

/// Result of [`SimplicialPoset::stellar_subdivide`].
#[derive(Clone, Debug)]
pub struct PosetSubdivision {
    pub poset: SimplicialPoset,
    pub old_to_new: Vec<Option<ElemId>>,
    /// `g -> apex * g`.
    pub cone: BTreeMap<ElemId, ElemId>,
    /// The old elements `>= s`.
    pub removed: BTreeSet<ElemId>,
}

impl PosetSubdivision {
    /// Image of an ideal: surviving elements plus the apex cones over the part
    /// of the region that lies in the ideal, when the ideal contained `s`.
    pub fn map_ideal(&self, old: &SimplicialPoset, ideal: &BTreeSet<ElemId>) -> BTreeSet<ElemId> {
        let mut out: BTreeSet<ElemId> = ideal.iter().filter_map(|&e| self.old_to_new[e]).collect();
        let hit: Vec<ElemId> = ideal.iter().copied().filter(|e| self.removed.contains(e)).collect();
        if !hit.is_empty() {
            for e in hit {
                for g in old.lower_interval(e) {
                    if let Some(&c) = self.cone.get(&g) {
                        out.insert(c);
                    }
                }
            }
        }
        out
    }
}

/// A step of the poset coloring extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetColoringStep {
    pub face: Face,
    pub vertex: VertexId,
    pub color: usize,
}

fn poset_is_dull(p: &SimplicialPoset, e: ElemId, k: &Coloring) -> bool {
    let el = p.element(e);
    el.rank >= 2 && el.vertices.iter().all(|v| k.get(v).is_some_and(|c| c + 1 < el.rank))
}

/// Extends a proper coloring of the ideal `q` to a subdivision of `p`, by the
/// same dull-face loop as for simplicial complexes (edge splits first, then
/// starring maximal dull elements). Returns the subdivided poset, the image of
/// `q`, the coloring and the log.
pub fn extend_coloring(
    p: &SimplicialPoset,
    q: &BTreeSet<ElemId>,
    k: &Coloring,
    m: usize,
    labels: &mut LabelGen,
) -> Result<(SimplicialPoset, BTreeSet<ElemId>, Coloring, Vec<PosetColoringStep>)> {
    if !p.is_ideal(q) {
        return Err(Error::InvalidParameter("the fixed part must be an order ideal".into()));
    }
    let qv: BTreeSet<VertexId> =
        q.iter().filter(|&&e| p.rank(e) == 1).map(|&e| p.element(e).vertices[0].clone()).collect();
    let mut kappa = k.restrict(qv.iter());
    kappa.set_m(m);
    for v in &qv {
        if kappa.get(v).is_none_or(|c| c >= m) {
            return Err(Error::Uncolored(v.to_string()));
        }
    }
    for &e in q.iter().filter(|&&e| p.rank(e) == 2) {
        let vs = &p.element(e).vertices;
        if kappa.get(&vs[0]) == kappa.get(&vs[1]) {
            return Err(Error::ImproperColoring(p.labels(e)));
        }
    }
    labels.skip_past(p.vertex_labels());
    let mut cur = p.clone();
    let mut fixed = q.clone();
    let mut log = Vec::new();
    let top = cur.max_rank();
    let mut step = |cur: &mut SimplicialPoset,
                    fixed: &mut BTreeSet<ElemId>,
                    e: ElemId,
                    color: usize,
                    kappa: &mut Coloring|
     -> Result<()> {
        let a = labels.fresh();
        let face = cur.labels(e);
        let sd = cur.stellar_subdivide(e, &a)?;
        *fixed = sd.map_ideal(cur, fixed);
        *cur = sd.poset;
        kappa.set(a.clone(), color);
        log.push(PosetColoringStep { face, vertex: a, color });
        Ok(())
    };
    // Edges outside q joining equally colored vertices of q.
    loop {
        let next = cur.elements_of_rank(2).find(|&e| {
            let vs = &cur.element(e).vertices;
            !fixed.contains(&e) && vs.iter().all(|v| qv.contains(v)) && kappa.get(&vs[0]) == kappa.get(&vs[1])
        });
        let Some(e) = next else { break };
        step(&mut cur, &mut fixed, e, 0, &mut kappa)?;
    }
    for v in cur.vertex_labels().cloned().collect::<Vec<_>>() {
        if kappa.get(&v).is_none() {
            kappa.set(v, 0);
        }
    }
    loop {
        let dull: Vec<ElemId> = (0..cur.len()).filter(|&e| poset_is_dull(&cur, e, &kappa)).collect();
        let dull_set: BTreeSet<ElemId> = dull.iter().copied().collect();
        let maximal = dull
            .iter()
            .copied()
            .filter(|&e| cur.cofaces(e).iter().all(|&f| !cur.up_set(f).iter().any(|g| dull_set.contains(g))))
            .min_by_key(|&e| (cur.labels(e), e));
        let Some(e) = maximal else { break };
        if fixed.contains(&e) {
            return Err(Error::Internal(format!("dull element {} lies in the fixed part", cur.labels(e))));
        }
        let color = cur.rank(e) - 1;
        step(&mut cur, &mut fixed, e, color, &mut kappa)?;
    }
    for e in cur.elements_of_rank(2) {
        let vs = &cur.element(e).vertices;
        if kappa.get(&vs[0]) == kappa.get(&vs[1]) {
            return Err(Error::Internal(format!("extension left improper edge {}", cur.labels(e))));
        }
    }
    kappa.set_m(m.max(top));
    Ok((cur, fixed, kappa, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::generate;

    fn f(s: &[&str]) -> Face {
        Face::new(s.iter().copied()).unwrap()
    }

    #[test]
    fn three_cycle_has_seven_elements() {
        let c = Complex::from_labels([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&c);
        assert_eq!(p.len(), 7);
        assert_eq!(ids.len(), 7);
        p.validate().unwrap();
        assert!(p.is_complex());
    }

    #[test]
    fn lower_interval_is_boolean() {
        let t = Complex::from_labels([["a", "b", "c", "d"]]).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&t);
        let iv = p.lower_interval(ids[&f(&["a", "b", "c", "d"])]);
        assert_eq!(iv.len(), 16);
        assert_eq!(iv.iter().collect::<BTreeSet<_>>().len(), 16);
        assert_eq!(iv[0b0101], ids[&f(&["a", "c"])]);
        assert_eq!(p.descend(iv[15], &f(&["b", "d"])), Some(ids[&f(&["b", "d"])]));
    }

    #[test]
    fn parallel_two_cells_on_an_edge() {
        let e = Complex::from_labels([["a", "b"]]).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&e);
        let ab = ids[&f(&["a", "b"])];
        let (p, t1) = p.attach_cell(&f(&["a", "b", "c"]), &[ab]).unwrap();
        // A second triangle with the same labels, glued only along ab: it gets its own ac and bc.
        let (p, t2) = p.attach_cell(&f(&["a", "b", "c"]), &[ab]).unwrap();
        assert_ne!(t1, t2);
        p.validate().unwrap();
        assert!(!p.is_complex());
        assert_eq!(p.elements_of_rank(1).count(), 3);
        assert_eq!(p.elements_of_rank(2).count(), 5);
    }

    #[test]
    fn undone_edge_flip_is_a_poset_not_a_complex() {
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&c2);
        let glue1: Vec<ElemId> = [["x0", "x1", "x2"], ["x0", "x1", "y2"]].iter().map(|g| ids[&f(g)]).collect();
        let (p, t1) = p.attach_cell(&f(&["x0", "x1", "x2", "y2"]), &glue1).unwrap();
        let iv = p.lower_interval(t1);
        let glue2: Vec<ElemId> = [f(&["x0", "x2", "y2"]), f(&["x1", "x2", "y2"])]
            .iter()
            .map(|g| iv[(0..4).filter(|&i| g.contains(&p.element(t1).vertices[i])).fold(0, |m, i| m | 1 << i)])
            .collect();
        let (p, _) = p.attach_cell(&f(&["x0", "x1", "x2", "y2"]), &glue2).unwrap();
        p.validate().unwrap();
        assert!(!p.is_complex());
    }

    #[test]
    fn disagreeing_glue_is_rejected() {
        let e = Complex::from_labels([["a", "b"]]).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&e);
        let (p, t) = p.attach_cell(&f(&["a", "b", "c"]), &[ids[&f(&["a", "b"])]]).unwrap();
        let (p, _) = p.attach_cell(&f(&["a", "b", "c"]), &[ids[&f(&["a", "b"])]]).unwrap();
        let bc_new = p.elements_of_rank(2).filter(|&e| p.labels(e) == f(&["b", "c"])).max().unwrap();
        assert!(p.attach_cell(&f(&["a", "b", "c", "d"]), &[t, bc_new]).is_err());
    }

    #[test]
    fn serde_roundtrip_and_validation() {
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        let (p, _) = SimplicialPoset::from_complex(&c2);
        let s = serde_json::to_string(&p).unwrap();
        let q: SimplicialPoset = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let mut raw: Vec<Element> = p.into();
        raw[8].covers.swap(0, 1);
        assert!(SimplicialPoset::try_from(raw).is_err());
    }

    #[test]
    fn subdivision_matches_complex_subdivision() {
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&c2);
        for face in [f(&["x0", "x1"]), f(&["x0", "x1", "x2"])] {
            let sd = p.stellar_subdivide(ids[&face], &"z".into()).unwrap();
            sd.poset.validate().unwrap();
            let all: BTreeSet<ElemId> = (0..sd.poset.len()).collect();
            let expect = crate::subdivision::stellar_subdivide(&c2, &face, "z".into()).unwrap();
            assert_eq!(sd.poset.to_complex(&all).unwrap(), expect);
        }
    }

    #[test]
    fn poset_coloring_extension_of_cone() {
        let (c2, k) = generate::cross_polytope_boundary(2).unwrap();
        let cone = c2.cone("apex".into()).unwrap();
        let (p, ids) = SimplicialPoset::from_complex(&cone);
        let q: BTreeSet<ElemId> = c2.faces().iter().map(|g| ids[g]).collect();
        let (out, fixed, kappa, log) = extend_coloring(&p, &q, &k, 4, &mut LabelGen::default()).unwrap();
        out.validate().unwrap();
        assert!(log.is_empty() || log.iter().all(|s| s.color <= 3));
        for e in out.elements_of_rank(2) {
            let vs = &out.element(e).vertices;
            assert_ne!(kappa.get(&vs[0]), kappa.get(&vs[1]));
        }
        assert_eq!(out.to_complex(&fixed).unwrap(), c2);
        for (v, c) in k.iter() {
            assert_eq!(kappa.get(v), Some(c));
        }
    }
}
