use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::shelling::{find_bidirectional_shelling, verify_bidirectional, BidirectionalShelling};
use super::{ElemId, SimplicialPoset, BOTTOM};
use crate::core::{Complex, Face, Isomorphism, LabelGen, VertexId};
use crate::error::{Error, Result};
use crate::flips::{apply_bistellar_flip, check_bistellar_flip, FlipMove};
use crate::shelling::{find_shelling_with, DEFAULT_SHELLING_BUDGET};

/// A poset `Ω` of dimension `dim + 1` with two marked ends of dimension `dim`.
/// `witness`, when present, is a candidate bidirectional shelling order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoCobordism {
    pub omega: SimplicialPoset,
    pub dim: usize,
    pub left: BTreeSet<ElemId>,
    pub right: BTreeSet<ElemId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<ElemId>>,
}

impl PseudoCobordism {
    /// Number of top cells containing each element of rank `dim + 1`.
    pub fn degrees(&self) -> BTreeMap<ElemId, usize> {
        let p = &self.omega;
        p.elements_of_rank(self.dim + 1)
            .map(|e| (e, p.cofaces(e).iter().filter(|&&c| p.rank(c) == self.dim + 2).count()))
            .collect()
    }

    /// Checks the poset, the ends and the degree trichotomy of the pseudoboundary.
    pub fn verify(&self) -> Result<()> {
        let p = &self.omega;
        let bad = |m: String| Err(Error::InvalidCobordism(m));
        p.validate()?;
        if p.max_rank() > self.dim + 2 {
            return bad(format!("an element has rank above {}", self.dim + 2));
        }
        for (name, end) in [("left", &self.left), ("right", &self.right)] {
            if !p.is_ideal(end) || !end.contains(&BOTTOM) {
                return bad(format!("the {name} end is not an order ideal"));
            }
            let pure = end.iter().all(|&e| p.rank(e) == self.dim + 1 || p.cofaces(e).iter().any(|c| end.contains(c)));
            if !pure || end.iter().any(|&e| p.rank(e) > self.dim + 1) {
                return bad(format!("the {name} end is not pure of dimension {}", self.dim));
            }
            p.to_complex(end).map_err(|_| Error::InvalidCobordism(format!("the {name} end has parallel faces")))?;
        }
        for (e, deg) in self.degrees() {
            let (l, r) = (self.left.contains(&e), self.right.contains(&e));
            let labels = p.labels(e);
            match deg {
                0 if !(l && r) => return bad(format!("{labels} has degree 0 but is not in both ends")),
                1 if !(l ^ r) => return bad(format!("{labels} has degree 1 but is not in exactly one end")),
                2 if l || r => return bad(format!("{labels} has degree 2 but lies in an end")),
                d if d > 2 => return bad(format!("{labels} has degree {d}")),
                _ => {}
            }
        }
        for e in 0..p.len() {
            let r = p.rank(e);
            if r <= self.dim + 1 && p.cofaces(e).is_empty() && !self.left.contains(&e) && !self.right.contains(&e) {
                return bad(format!("{} is a maximal element outside both ends", p.labels(e)));
            }
        }
        Ok(())
    }

    pub fn left_complex(&self) -> Result<Complex> {
        self.omega.to_complex(&self.left)
    }

    pub fn right_complex(&self) -> Result<Complex> {
        self.omega.to_complex(&self.right)
    }

    pub fn top_cells(&self) -> Vec<ElemId> {
        self.omega.elements_of_rank(self.dim + 2).collect()
    }

    /// The same poset with the ends swapped and the witness reversed.
    pub fn reverse(&self) -> PseudoCobordism {
        PseudoCobordism {
            omega: self.omega.clone(),
            dim: self.dim,
            left: self.right.clone(),
            right: self.left.clone(),
            witness: self.witness.as_ref().map(|w| w.iter().rev().copied().collect()),
        }
    }
}

fn end_dim(c: &Complex) -> Result<usize> {
    match c.dim() {
        Some(d) if d >= 0 && c.is_pure() => Ok(d as usize),
        _ => Err(Error::InvalidParameter("the end must be a nonempty pure complex".into())),
    }
}

/// `Δ` with the simplex on `A ∪ B` glued on top along `Ā * ∂B̄`.
pub fn elementary_cobordism(delta: &Complex, mv: &FlipMove) -> Result<PseudoCobordism> {
    check_bistellar_flip(delta, mv)?;
    let dim = end_dim(delta)?;
    let (p, ids) = SimplicialPoset::from_complex(delta);
    let glue: Vec<ElemId> = mv.b.vertices().iter().map(|b| ids[&mv.a.union(&mv.b.without(b))]).collect();
    let (omega, top) = p.attach_cell(&mv.a.union(&mv.b), &glue)?;
    let left: BTreeSet<ElemId> = ids.values().copied().collect();
    let right = (0..omega.len()).filter(|&e| e != top && !mv.a.is_subset(&omega.labels(e))).collect();
    let cob = PseudoCobordism { omega, dim, left, right, witness: Some(vec![top]) };
    cob.verify()?;
    Ok(cob)
}

/// Label-set lookup inside an end, which is a simplicial complex.
fn end_index(p: &SimplicialPoset, end: &BTreeSet<ElemId>) -> BTreeMap<Face, ElemId> {
    end.iter().map(|&e| (p.labels(e), e)).collect()
}

/// Glues the left end of `c2` onto the right end of `c1`. `ident` maps the
/// vertex labels of `c2`'s left end to those of `c1`'s right end (identity
/// when omitted). Other vertices of `c2` keep their labels unless these are
/// taken in `c1`, in which case they are renamed with `labels`. Returns the
/// composite and the label of every vertex of `c2` in it.
pub fn compose_with(
    c1: &PseudoCobordism,
    c2: &PseudoCobordism,
    ident: Option<&Isomorphism>,
    labels: &mut LabelGen,
) -> Result<(PseudoCobordism, BTreeMap<VertexId, VertexId>)> {
    if c1.dim != c2.dim {
        return Err(Error::InvalidParameter(format!("dimensions {} and {} differ", c1.dim, c2.dim)));
    }
    let (p1, p2) = (&c1.omega, &c2.omega);
    let left2 = c2.left_complex()?;
    let right1 = c1.right_complex()?;
    let ident = match ident {
        Some(i) => i.clone(),
        None => Isomorphism::identity(left2.vertices().iter()),
    };
    if !ident.is_isomorphism(&left2, &right1) {
        return Err(Error::InvalidParameter("the identification is not an isomorphism of the ends".into()));
    }
    let taken: BTreeSet<VertexId> = p1.vertex_labels().cloned().collect();
    labels.skip_past(taken.iter());
    let mut renames: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for v in p2.vertex_labels() {
        let new = match ident.get(v) {
            Some(w) if left2.has_vertex(v) => w.clone(),
            _ if taken.contains(v) || ident.map.values().any(|w| w == v) => labels.fresh(),
            _ => v.clone(),
        };
        renames.insert(v.clone(), new);
    }
    let right_ids = end_index(p1, &c1.right);
    let mut omega = p1.clone();
    let mut map: Vec<ElemId> = vec![usize::MAX; p2.len()];
    map[BOTTOM] = BOTTOM;
    for e in p2.elements().iter().skip(1) {
        map[e.id] = if c2.left.contains(&e.id) {
            let f = p2.labels(e.id).map(|v| renames[v].clone());
            *right_ids.get(&f).ok_or_else(|| Error::Internal(format!("{f} missing from the right end")))?
        } else {
            let pairs = e.vertices.iter().map(|v| renames[v].clone()).zip(e.covers.iter().map(|&c| map[c])).collect();
            omega.push_checked(pairs)?
        };
    }
    let witness = match (&c1.witness, &c2.witness) {
        (Some(w1), Some(w2)) => Some(w1.iter().copied().chain(w2.iter().map(|&e| map[e])).collect()),
        _ => None,
    };
    let cob = PseudoCobordism {
        omega,
        dim: c1.dim,
        left: c1.left.clone(),
        right: c2.right.iter().map(|&e| map[e]).collect(),
        witness,
    };
    cob.verify()?;
    Ok((cob, renames))
}

/// [`compose_with`] identifying the ends by label.
pub fn compose(c1: &PseudoCobordism, c2: &PseudoCobordism) -> Result<PseudoCobordism> {
    let mut labels = LabelGen::default();
    Ok(compose_with(c1, c2, None, &mut labels)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStep {
    pub cell: ElemId,
    pub flip: FlipMove,
    /// `Δ_j`.
    pub complex: Complex,
}

/// `Δ_0` and the flips `(A_j, B_j)` leading to each `Δ_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub start: Complex,
    pub steps: Vec<DecompositionStep>,
}

impl Decomposition {
    pub fn flips(&self) -> Vec<FlipMove> {
        self.steps.iter().map(|s| s.flip.clone()).collect()
    }

    pub fn end(&self) -> &Complex {
        self.steps.last().map_or(&self.start, |s| &s.complex)
    }
}

/// Splits a bidirectionally shelled cobordism into bistellar flips, checking
/// at every cell that `A_j` and `B_j` meet in `∅` and join to `F_j`, that
/// `A_j ∈ Δ_{j−1} ∖ Δ_j` and that its star in `Δ_{j−1}` is `[A_j, F_j)`.
pub fn decompose(cob: &PseudoCobordism, bs: &BidirectionalShelling) -> Result<Decomposition> {
    let p = &cob.omega;
    if verify_bidirectional(cob, &bs.order)?.as_ref() != Some(bs) {
        return Err(Error::Precondition("the bidirectional shelling does not verify".into()));
    }
    let internal = |m: String| Error::Internal(m);
    let mut current = cob.left.clone();
    let start = p.to_complex(&current).map_err(|e| internal(e.to_string()))?;
    let mut complex = start.clone();
    let mut steps = Vec::with_capacity(bs.order.len());
    for (j, &cell) in bs.order.iter().enumerate() {
        let (a, b) = (&bs.backward[j], &bs.forward[j]);
        let labels = p.labels(cell);
        if !a.is_disjoint(b) || a.union(b) != labels || a.is_empty() || b.is_empty() {
            return Err(internal(format!("position {j}: A and B do not split the cell {labels}")));
        }
        let iv = p.lower_interval(cell);
        let mask = |f: &Face| {
            labels.vertices().iter().enumerate().filter(|(_, v)| f.contains(v)).fold(0, |m, (i, _)| m | 1 << i)
        };
        let (ma, mb) = (mask(a), mask(b));
        let ea = iv[ma];
        if !current.contains(&ea) {
            return Err(internal(format!("position {j}: A is not in the previous end")));
        }
        let star: BTreeSet<ElemId> = p.up_set(ea).intersection(&current).copied().collect();
        let expect: BTreeSet<ElemId> = (0..iv.len() - 1).filter(|m| m & ma == ma).map(|m| iv[m]).collect();
        if star != expect {
            return Err(internal(format!("position {j}: the star of A is not [A, F)")));
        }
        current.retain(|e| !star.contains(e));
        current.extend((0..iv.len() - 1).filter(|m| m & mb == mb).map(|m| iv[m]));
        let next = p.to_complex(&current).map_err(|e| internal(format!("position {j}: {e}")))?;
        let flip = FlipMove::new(a.clone(), b.clone());
        let flipped = apply_bistellar_flip(&complex, &flip).map_err(|e| internal(format!("position {j}: {e}")))?;
        if flipped != next || next.contains(a) {
            return Err(internal(format!("position {j}: the flip disagrees with the poset")));
        }
        complex = next.clone();
        steps.push(DecompositionStep { cell, flip, complex: next });
    }
    if current != cob.right {
        return Err(internal("the last complex is not the right end".into()));
    }
    Ok(Decomposition { start, steps })
}

/// Output of [`eliminate_face`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    /// `Δ′`, which no longer contains the face.
    pub complex: Complex,
    /// The ball `K` replacing the star.
    pub ball: Complex,
    pub cobordism: PseudoCobordism,
}

/// Replaces the star of `tau` by `∂τ̄ * K` for a shellable ball `K` with
/// `∂K = lk(τ)`; `K` defaults to the cone over the link with a fresh apex.
pub fn eliminate_face(
    delta: &Complex,
    tau: &Face,
    ball: Option<&Complex>,
    labels: &mut LabelGen,
) -> Result<Elimination> {
    if tau.is_empty() || !delta.contains(tau) {
        return Err(Error::FaceNotInComplex(tau.clone()));
    }
    let dim = end_dim(delta)?;
    let lk = delta.link(tau)?;
    labels.skip_past(delta.vertices().iter());
    let k = match ball {
        Some(k) => {
            if k.boundary() != lk {
                return Err(Error::Precondition("the boundary of K is not the link".into()));
            }
            if !lk.is_induced(k) {
                return Err(Error::Precondition("the boundary of K is not induced in K".into()));
            }
            if let Some(v) = k.vertices().into_iter().find(|v| !lk.has_vertex(v) && delta.has_vertex(v)) {
                return Err(Error::LabelCollision(v.to_string()));
            }
            k.clone()
        }
        None => {
            if find_shelling_with(&lk, &[], DEFAULT_SHELLING_BUDGET)?.is_none() {
                return Err(Error::Precondition(format!("the link of {tau} is not shellable")));
            }
            lk.cone(labels.fresh())?
        }
    };
    let order = find_shelling_with(&k, &[], DEFAULT_SHELLING_BUDGET)?
        .ok_or_else(|| Error::Precondition("K is not shellable".into()))?;
    let omega_c = delta.union(&Complex::from_facets(k.facets().map(|g| g.union(tau))));
    let (omega, ids) = SimplicialPoset::from_complex(&omega_c);
    let left: BTreeSet<ElemId> = delta.faces().iter().map(|f| ids[f]).collect();
    let right: BTreeSet<ElemId> = ids.iter().filter(|(f, _)| !tau.is_subset(f)).map(|(_, &e)| e).collect();
    let witness: Vec<ElemId> = order.facets.iter().rev().map(|g| ids[&g.union(tau)]).collect();
    let cob = PseudoCobordism { omega, dim, left, right, witness: Some(witness.clone()) };
    cob.verify()?;
    if verify_bidirectional(&cob, &witness)?.is_none() {
        return Err(Error::Internal(format!("the constructed order does not shell the elimination of {tau}")));
    }
    let complex = cob.right_complex()?;
    Ok(Elimination { complex, ball: k, cobordism: cob })
}

/// Eliminates every vertex of `delta` in ascending label order, composing the
/// cobordisms. Returns the final complex and the composite.
pub fn eliminate_vertices(delta: &Complex, labels: &mut LabelGen) -> Result<(Complex, PseudoCobordism)> {
    let mut current = delta.clone();
    let mut acc: Option<PseudoCobordism> = None;
    for v in delta.vertices() {
        let el = eliminate_face(&current, &Face::vertex(v), None, labels)?;
        acc = Some(match acc {
            None => el.cobordism,
            Some(c) => compose_with(&c, &el.cobordism, None, labels)?.0,
        });
        current = el.complex;
    }
    let cob = acc.ok_or_else(|| Error::InvalidParameter("the complex has no vertices".into()))?;
    Ok((current, cob))
}

/// A shellable pseudo-cobordism from `delta` to the end of `path`, whose ends
/// share only `∅`. `path` starts at the complex returned by
/// [`eliminate_vertices`] for the same generator state.
pub fn disjoint_ends_cobordism(delta: &Complex, path: &[FlipMove], labels: &mut LabelGen) -> Result<PseudoCobordism> {
    let (mut current, mut acc) = eliminate_vertices(delta, labels)?;
    // Labels of the path's complexes as they appear in the composite.
    let mut trans: BTreeMap<VertexId, VertexId> = current.vertices().into_iter().map(|v| (v.clone(), v)).collect();
    for mv in path {
        let step = elementary_cobordism(&current, mv)?;
        let ident =
            Isomorphism { map: current.vertices().into_iter().map(|v| (v.clone(), trans[&v].clone())).collect() };
        let (next, renames) = compose_with(&acc, &step, Some(&ident), labels)?;
        trans.extend(renames);
        acc = next;
        current = apply_bistellar_flip(&current, mv)?;
    }
    if acc.left.intersection(&acc.right).any(|&e| e != BOTTOM) {
        return Err(Error::Internal("the ends share a nonempty face".into()));
    }
    Ok(acc)
}

/// Stellar subdivision of the cobordism at `s`, with a bidirectional shelling
/// of the result found by search.
pub fn subdivide_cobordism(cob: &PseudoCobordism, s: ElemId, apex: &VertexId, budget: u64) -> Result<PseudoCobordism> {
    if s == BOTTOM || s >= cob.omega.len() {
        return Err(Error::InvalidParameter(format!("{s} is not a nonempty element of the cobordism")));
    }
    let sd = cob.omega.stellar_subdivide(s, apex)?;
    let mut out = PseudoCobordism {
        left: sd.map_ideal(&cob.omega, &cob.left),
        right: sd.map_ideal(&cob.omega, &cob.right),
        omega: sd.poset,
        dim: cob.dim,
        witness: None,
    };
    out.verify()?;
    let bs = find_bidirectional_shelling(&out, budget)?
        .ok_or_else(|| Error::Internal("the subdivided cobordism has no bidirectional shelling".into()))?;
    out.witness = Some(bs.order);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{canonical_form, generate};
    use crate::flips::available_bistellar_flips;
    use itertools::Itertools;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(s: &[&str]) -> Face {
        Face::new(s.iter().copied()).unwrap()
    }

    fn octahedron() -> Complex {
        generate::cross_polytope_boundary(2).unwrap().0
    }

    #[test]
    fn edge_flip_cobordism() {
        let c2 = octahedron();
        let mv = FlipMove::new(f(&["x0", "x1"]), f(&["x2", "y2"]));
        let cob = elementary_cobordism(&c2, &mv).unwrap();
        assert_eq!(cob.top_cells().len(), 1);
        assert_eq!(cob.left_complex().unwrap(), c2);
        assert_eq!(cob.right_complex().unwrap(), apply_bistellar_flip(&c2, &mv).unwrap());
        // Degree-0 triangles are exactly those away from the flipped edge.
        let deg0: BTreeSet<Face> =
            cob.degrees().into_iter().filter(|&(_, d)| d == 0).map(|(e, _)| cob.omega.labels(e)).collect();
        let expect: BTreeSet<Face> = c2.facets().filter(|g| !mv.a.is_subset(g)).cloned().collect();
        assert_eq!(deg0, expect);
        let bs = find_bidirectional_shelling(&cob, 1000).unwrap().unwrap();
        assert_eq!(bs.order, cob.top_cells());
        let dec = decompose(&cob, &bs).unwrap();
        assert_eq!(dec.flips(), vec![mv]);
    }

    #[test]
    fn one_to_three_cobordism() {
        let s = generate::simplex_boundary(3).unwrap();
        let mv = FlipMove::new(f(&["x0", "x1", "x2"]), f(&["z"]));
        let cob = elementary_cobordism(&s, &mv).unwrap();
        assert_eq!(cob.right_complex().unwrap().num_facets(), 6);
        let bs = find_bidirectional_shelling(&cob, 1000).unwrap().unwrap();
        assert_eq!(decompose(&cob, &bs).unwrap().flips(), vec![mv]);
    }

    #[test]
    fn undoing_an_edge_flip_gives_parallel_edges() {
        let c2 = octahedron();
        let mv = FlipMove::new(f(&["x0", "x1"]), f(&["x2", "y2"]));
        let there = elementary_cobordism(&c2, &mv).unwrap();
        let back = elementary_cobordism(&apply_bistellar_flip(&c2, &mv).unwrap(), &mv.inverse()).unwrap();
        let round = compose(&there, &back).unwrap();
        assert!(!round.omega.is_complex());
        assert_eq!(round.left_complex().unwrap(), round.right_complex().unwrap());
        let bs = find_bidirectional_shelling(&round, 1000).unwrap().unwrap();
        assert_eq!(decompose(&round, &bs).unwrap().flips(), vec![mv.clone(), mv.inverse()]);
    }

    #[test]
    fn compose_with_reverse_has_isomorphic_ends() {
        let s = generate::simplex_boundary(3).unwrap();
        let cob = elementary_cobordism(&s, &FlipMove::new(f(&["x0", "x1", "x2"]), f(&["z"]))).unwrap();
        let round = compose(&cob, &cob.reverse()).unwrap();
        assert_eq!(
            canonical_form(&round.left_complex().unwrap()).unwrap(),
            canonical_form(&round.right_complex().unwrap()).unwrap()
        );
    }

    #[test]
    fn degree_three_ridge_is_rejected() {
        let c2 = octahedron();
        let mv = FlipMove::new(f(&["x0", "x1", "x2"]), f(&["z"]));
        let cob = elementary_cobordism(&c2, &mv).unwrap();
        // Two more tetrahedra on the same triangle.
        let tri = cob.omega.descend(cob.top_cells()[0], &f(&["x0", "x1", "x2"])).unwrap();
        let (p, _) = cob.omega.attach_cell(&f(&["w", "x0", "x1", "x2"]), &[tri]).unwrap();
        let (p, _) = p.attach_cell(&f(&["u", "x0", "x1", "x2"]), &[tri]).unwrap();
        let bad = PseudoCobordism { omega: p, ..cob };
        assert!(matches!(bad.verify(), Err(Error::InvalidCobordism(_))));
    }

    /// A random walk of flips on a 2-sphere, with labels never reused.
    fn random_walk(start: &Complex, len: usize, rng: &mut ChaCha8Rng, next: &mut usize) -> Vec<FlipMove> {
        let mut c = start.clone();
        let mut out = Vec::new();
        for _ in 0..len {
            let mut moves: Vec<FlipMove> = available_bistellar_flips(&c)
                .into_iter()
                .filter(|m| !out.last().is_some_and(|p: &FlipMove| *p == m.inverse()))
                .collect();
            moves.shuffle(rng);
            let Some(mut mv) = moves.into_iter().next() else { break };
            if mv.b.len() == 1 && !c.has_vertex(&mv.b.vertices()[0]) {
                mv.b = Face::vertex(format!("n{next}"));
                *next += 1;
            }
            c = apply_bistellar_flip(&c, &mv).unwrap();
            out.push(mv);
        }
        out
    }

    #[test]
    fn composed_elementaries_decompose_to_the_same_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut next = 0;
        for _ in 0..20 {
            let start = octahedron();
            let path = random_walk(&start, 6, &mut rng, &mut next);
            let mut c = start.clone();
            let mut acc: Option<PseudoCobordism> = None;
            for mv in &path {
                let step = elementary_cobordism(&c, mv).unwrap();
                acc = Some(match acc {
                    None => step,
                    Some(a) => compose(&a, &step).unwrap(),
                });
                c = apply_bistellar_flip(&c, mv).unwrap();
            }
            let cob = acc.unwrap();
            let bs = find_bidirectional_shelling(&cob, 10_000).unwrap().unwrap();
            let dec = decompose(&cob, &bs).unwrap();
            assert_eq!(dec.flips(), path);
            assert_eq!(dec.end(), &c);
        }
    }

    #[test]
    fn eliminating_a_vertex_of_a_triangle() {
        let tri = Complex::from_labels([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let mut labels = LabelGen::default();
        let el = eliminate_face(&tri, &f(&["a"]), None, &mut labels).unwrap();
        assert!(!el.complex.has_vertex(&"a".into()));
        assert_eq!(el.complex.num_facets(), 3);
        assert_eq!(el.complex.num_vertices(), 3);
        let bs = find_bidirectional_shelling(&el.cobordism, 1000).unwrap().unwrap();
        let dec = decompose(&el.cobordism, &bs).unwrap();
        assert_eq!(dec.end(), &el.complex);
    }

    #[test]
    fn eliminating_a_vertex_of_the_tetrahedron() {
        let s = generate::simplex_boundary(3).unwrap();
        let mut labels = LabelGen::default();
        let el = eliminate_face(&s, &f(&["x0"]), None, &mut labels).unwrap();
        assert_eq!(canonical_form(&el.complex).unwrap(), canonical_form(&s).unwrap());
    }

    #[test]
    fn eliminating_an_edge() {
        let c2 = octahedron();
        let tau = f(&["x0", "x1"]);
        let mut labels = LabelGen::default();
        let el = eliminate_face(&c2, &tau, None, &mut labels).unwrap();
        assert!(!el.complex.contains(&tau));
        assert!(find_bidirectional_shelling(&el.cobordism, 1000).unwrap().is_some());
    }

    #[test]
    fn eliminate_rejects_a_wrong_ball() {
        let c2 = octahedron();
        let k = Complex::from_labels([["y1", "o"], ["x1", "o"]]).unwrap();
        let mut labels = LabelGen::default();
        let err = eliminate_face(&c2, &f(&["x0", "x2"]), Some(&k), &mut labels).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err}");
        // An edge whose boundary is the link, but not induced.
        let k = Complex::from_labels([["y1", "x1"]]).unwrap();
        let err = eliminate_face(&c2, &f(&["x0", "x2"]), Some(&k), &mut labels).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err}");
    }

    #[test]
    fn disjoint_ends_for_the_triangle() {
        let tri = Complex::from_labels([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let mut labels = LabelGen::default();
        let cob = disjoint_ends_cobordism(&tri, &[], &mut labels).unwrap();
        assert_eq!(cob.left.intersection(&cob.right).collect_vec(), vec![&BOTTOM]);
        assert_eq!(canonical_form(&cob.right_complex().unwrap()).unwrap(), canonical_form(&tri).unwrap());
    }

    #[test]
    fn disjoint_ends_with_a_path() {
        let s = generate::simplex_boundary(3).unwrap();
        let mut labels = LabelGen::default();
        let (end, _) = eliminate_vertices(&s, &mut labels.clone()).unwrap();
        let g = end.facets().next().unwrap().clone();
        // Reusing an original label for the new vertex is legal.
        let first = FlipMove::new(g, f(&["x0"]));
        let after = apply_bistellar_flip(&end, &first).unwrap();
        let second = available_bistellar_flips(&after).into_iter().find(|m| m.shape() == (2, 2)).unwrap();
        let cob = disjoint_ends_cobordism(&s, &[first, second], &mut labels).unwrap();
        assert_eq!(cob.left.intersection(&cob.right).collect_vec(), vec![&BOTTOM]);
        let bs = find_bidirectional_shelling(&cob, 100_000).unwrap().unwrap();
        assert_eq!(decompose(&cob, &bs).unwrap().start, s);
    }

    #[test]
    fn subdividing_an_edge_flip_cobordism() {
        let c2 = octahedron();
        let mv = FlipMove::new(f(&["x0", "x1"]), f(&["x2", "y2"]));
        let cob = elementary_cobordism(&c2, &mv).unwrap();
        let top = cob.top_cells()[0];
        for sigma in mv.a.union(&mv.b).subsets().filter(|s| !s.is_empty()) {
            let s = cob.omega.descend(top, &sigma).unwrap();
            let sd = subdivide_cobordism(&cob, s, &"p".into(), 100_000).unwrap();
            let expect = |c: &Complex| {
                if sigma.len() == 1 && c.contains(&sigma) {
                    // Starring a vertex only renames it.
                    c.relabel(|v| if sigma.contains(v) { "p".into() } else { v.clone() })
                } else if c.contains(&sigma) {
                    crate::subdivision::stellar_subdivide(c, &sigma, "p".into()).unwrap()
                } else {
                    c.clone()
                }
            };
            assert_eq!(sd.left_complex().unwrap(), expect(&cob.left_complex().unwrap()), "{sigma}");
            assert_eq!(sd.right_complex().unwrap(), expect(&cob.right_complex().unwrap()), "{sigma}");
        }
    }

    #[test]
    fn subdividing_at_a_shows_every_order_shells() {
        let c2 = octahedron();
        let mv = FlipMove::new(f(&["x0", "x1"]), f(&["x2", "y2"]));
        let cob = elementary_cobordism(&c2, &mv).unwrap();
        let s = cob.omega.descend(cob.top_cells()[0], &mv.a).unwrap();
        let sd = subdivide_cobordism(&cob, s, &"p".into(), 1000).unwrap();
        let tops = sd.top_cells();
        assert_eq!(tops.len(), 2);
        for order in tops.iter().copied().permutations(tops.len()) {
            assert!(verify_bidirectional(&sd, &order).unwrap().is_some());
        }
    }

    #[test]
    fn serde_roundtrip() {
        let c2 = octahedron();
        let cob = elementary_cobordism(&c2, &FlipMove::new(f(&["x0", "x1"]), f(&["x2", "y2"]))).unwrap();
        let json = serde_json::to_string(&cob).unwrap();
        let back: PseudoCobordism = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cob);
    }
}
