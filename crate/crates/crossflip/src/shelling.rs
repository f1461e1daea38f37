//! Shellings of pure complexes, co-shellability inside `C_d`, and the step from shellings to flips.
//!
//! A step adding `F` to the union `U` of the previous facets is checked with
//! the vertex criterion: with `R = {v ∈ F : F \ v ∈ U}`, the step is valid iff
//! every `G ⊆ F` satisfies `G ∈ U ⇔ R ⊄ G`. Then `r(F) = R` and
//! `F̄ ∩ U = ∂F̄ \ [R, F]`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::core::{Complex, Face};
use crate::error::{Error, Result};
use crate::flips::FlipMove;

pub const DEFAULT_SHELLING_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingOrder {
    pub facets: Vec<Face>,
    /// `restrictions[j]` is `r(F_j)`; the first is always empty.
    pub restrictions: Vec<Face>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellingVerdict {
    Valid(ShellingOrder),
    /// The facet at `position` meets the previous ones in a non-pure or wrong-dimensional complex.
    Violation {
        position: usize,
    },
}

impl ShellingVerdict {
    pub fn into_order(self) -> Option<ShellingOrder> {
        match self {
            ShellingVerdict::Valid(o) => Some(o),
            ShellingVerdict::Violation { .. } => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, ShellingVerdict::Valid(_))
    }
}

/// Fixed-width set of facet indices, usable as a memo key.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
}

/// Facets of a pure complex with, for every facet, the local bitmasks of its
/// intersections with the other facets.
struct ShellIndex {
    facets: Vec<Face>,
    width: usize,
    meets: Vec<Vec<(usize, u32)>>,
}

impl ShellIndex {
    fn new(facets: Vec<Face>) -> Result<Self> {
        let width = facets.first().map_or(0, Face::len);
        if facets.iter().any(|f| f.len() != width) {
            return Err(Error::Precondition("shellings are only defined for pure complexes".into()));
        }
        if width > 24 {
            return Err(Error::InvalidParameter(format!("facets with {width} vertices are too large")));
        }
        let mut meets = vec![Vec::new(); facets.len()];
        for (i, f) in facets.iter().enumerate() {
            for (j, g) in facets.iter().enumerate() {
                if i != j {
                    meets[i].push((j, local_mask(f, g)));
                }
            }
        }
        Ok(ShellIndex { facets, width, meets })
    }

    /// `Some(R)` (as a local mask) when adding facet `i` after `used` is a valid step.
    fn step(&self, i: usize, used: &Bits, any_used: bool) -> Option<u32> {
        let masks = self.meets[i].iter().filter(|(j, _)| used.get(*j)).map(|&(_, m)| m);
        step_from_masks(self.width, masks, any_used)
    }

    fn restriction_face(&self, i: usize, r: u32) -> Face {
        Face::from_set(
            self.facets[i].vertices().iter().enumerate().filter(|(k, _)| r >> k & 1 == 1).map(|(_, v)| v.clone()),
        )
    }
}

fn local_mask(f: &Face, g: &Face) -> u32 {
    f.vertices().iter().enumerate().filter(|(_, v)| g.contains(v)).fold(0, |m, (k, _)| m | 1 << k)
}

/// Vertex criterion on a facet of `width` vertices whose intersection with the
/// previous union is generated by `masks`. `nonempty` says whether the union
/// is nonempty (so contains the empty face).
fn step_from_masks(width: usize, masks: impl Iterator<Item = u32>, nonempty: bool) -> Option<u32> {
    let size = 1usize << width;
    let mut closure = vec![false; size];
    if nonempty {
        closure[0] = true;
    }
    for m in masks {
        if closure[m as usize] {
            continue;
        }
        let mut sub = m;
        loop {
            closure[sub as usize] = true;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & m;
        }
    }
    let full = (size - 1) as u32;
    let r = (0..width).filter(|&k| closure[(full ^ (1 << k)) as usize]).fold(0u32, |r, k| r | 1 << k);
    (0..size as u32).all(|g| closure[g as usize] == (g & r != r)).then_some(r)
}

/// Checks `order` with the vertex criterion and fills in the restriction faces.
pub fn verify_shelling(c: &Complex, order: &[Face]) -> Result<ShellingVerdict> {
    let expected: HashSet<&Face> = c.facets().collect();
    let given: HashSet<&Face> = order.iter().collect();
    if given.len() != order.len() || given != expected {
        return Err(Error::InvalidParameter("order is not a permutation of the facets".into()));
    }
    let idx = ShellIndex::new(order.to_vec())?;
    let mut used = Bits::new(order.len());
    let mut restrictions = Vec::with_capacity(order.len());
    for i in 0..order.len() {
        match idx.step(i, &used, i > 0) {
            Some(r) => restrictions.push(idx.restriction_face(i, r)),
            None => return Ok(ShellingVerdict::Violation { position: i }),
        }
        used.set(i);
    }
    Ok(ShellingVerdict::Valid(ShellingOrder { facets: order.to_vec(), restrictions }))
}

struct Search<'a> {
    idx: &'a ShellIndex,
    failed: HashSet<Bits>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn dfs(&mut self, used: &mut Bits, count: usize, order: &mut Vec<(usize, u32)>) -> Result<bool> {
        let n = self.idx.facets.len();
        if count == n {
            return Ok(true);
        }
        if self.failed.contains(used) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        let mut cands: Vec<(usize, u32)> =
            (0..n).filter(|&i| !used.get(i)).filter_map(|i| Some((i, self.idx.step(i, used, count > 0)?))).collect();
        // Facets that meet the union in more ridges first: they close up holes.
        cands.sort_by_key(|&(i, r)| (std::cmp::Reverse(r.count_ones()), i));
        for (i, r) in cands {
            used.set(i);
            order.push((i, r));
            if self.dfs(used, count + 1, order)? {
                return Ok(true);
            }
            order.pop();
            used.clear(i);
        }
        self.failed.insert(used.clone());
        Ok(false)
    }
}

/// Exact search for a shelling order extending `prefix`.
///
/// `Ok(None)` means no shelling exists (with this prefix); running out of
/// `budget` search nodes is an error.
pub fn find_shelling_with(c: &Complex, prefix: &[Face], budget: u64) -> Result<Option<ShellingOrder>> {
    let mut facets: Vec<Face> = prefix.to_vec();
    for f in prefix {
        if !c.has_facet(f) {
            return Err(Error::FaceNotInComplex(f.clone()));
        }
    }
    facets.extend(c.facets().filter(|f| !prefix.contains(f)).cloned());
    if facets.len() != c.num_facets() {
        return Err(Error::InvalidParameter("prefix repeats a facet".into()));
    }
    let idx = ShellIndex::new(facets)?;
    let mut used = Bits::new(idx.facets.len());
    let mut order = Vec::new();
    for i in 0..prefix.len() {
        let Some(r) = idx.step(i, &used, i > 0) else {
            return Err(Error::Precondition(format!("prefix is not a partial shelling at position {i}")));
        };
        used.set(i);
        order.push((i, r));
    }
    let mut search = Search { idx: &idx, failed: HashSet::new(), nodes: 0, budget };
    if !search.dfs(&mut used, prefix.len(), &mut order)? {
        return Ok(None);
    }
    Ok(Some(ShellingOrder {
        facets: order.iter().map(|&(i, _)| idx.facets[i].clone()).collect(),
        restrictions: order.iter().map(|&(i, r)| idx.restriction_face(i, r)).collect(),
    }))
}

pub fn find_shelling(c: &Complex, prefix: &[Face]) -> Result<Option<ShellingOrder>> {
    find_shelling_with(c, prefix, DEFAULT_SHELLING_BUDGET)
}

pub fn is_shellable(c: &Complex) -> Result<bool> {
    Ok(find_shelling(c, &[])?.is_some())
}

/// Whether the facets of `cd` outside `d` form a shellable complex.
///
/// `d` must be a proper, nonempty, pure subcomplex of `cd` of full dimension.
pub fn is_co_shellable(cd: &Complex, d: &Complex) -> Result<bool> {
    is_co_shellable_with(cd, d, DEFAULT_SHELLING_BUDGET)
}

pub fn is_co_shellable_with(cd: &Complex, d: &Complex, budget: u64) -> Result<bool> {
    if d.is_void() || !d.is_pure() || d.dim() != cd.dim() {
        return Err(Error::Precondition("subcomplex must be pure of full dimension".into()));
    }
    if !d.facets().all(|f| cd.has_facet(f)) {
        return Err(Error::NotSubcomplex("facets of the subcomplex must be facets of the ambient complex".into()));
    }
    if d.num_facets() == cd.num_facets() {
        return Err(Error::Precondition("subcomplex must be proper".into()));
    }
    Ok(find_shelling_with(&cd.facet_complement(d), &[], budget)?.is_some())
}

/// Restriction face of adding `f` to `omega`, if that is a valid shelling step.
pub fn restriction_face(omega: &Complex, f: &Face) -> Option<Face> {
    let verts = f.vertices();
    let masks = omega.facets().map(|g| local_mask(f, g));
    let r = step_from_masks(verts.len(), masks, !omega.is_void())?;
    Some(Face::from_set(verts.iter().enumerate().filter(|(k, _)| r >> k & 1 == 1).map(|(_, v)| v.clone())))
}

/// Adds `f` to the shellable ball `omega` and returns the bistellar flip taking
/// `∂omega` to the boundary of the result: `A = F \ r(F)`, `B = r(F)`.
pub fn shelling_step_boundary(omega: &Complex, f: &Face) -> Result<(Complex, FlipMove)> {
    if omega.is_void() {
        return Err(Error::NotElementaryShelling("the first facet has no boundary flip".into()));
    }
    if omega.has_facet(f) || omega.dim() != Some(f.dim()) {
        return Err(Error::NotElementaryShelling(format!("{f} cannot be attached to the complex")));
    }
    let r = restriction_face(omega, f).ok_or_else(|| {
        Error::NotElementaryShelling(format!("{f} meets the complex in a non-pure or wrong-dimensional part"))
    })?;
    if r.len() == f.len() {
        return Err(Error::NotElementaryShelling(format!("{f} meets the complex in its whole boundary")));
    }
    let grown = Complex::from_facets(omega.facets().cloned().chain([f.clone()]));
    Ok((grown, FlipMove::new(f.difference(&r), r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{generate, Complex};
    use crate::flips::apply_bistellar_flip;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn f(s: &[&str]) -> Face {
        Face::new(s.iter().copied()).unwrap()
    }

    /// Brute-force definition check: each new facet meets the previous union in
    /// a pure `(d-1)`-dimensional complex.
    fn brute_is_shelling(order: &[Face]) -> bool {
        let d = order[0].dim();
        (1..order.len()).all(|j| {
            let prev = Complex::from_facets(order[..j].iter().cloned());
            let inter = Complex::from_facets(order[j].subsets().filter(|g| prev.contains(g)));
            inter.is_pure() && inter.dim() == Some(d - 1)
        })
    }

    fn brute_shellable(c: &Complex) -> bool {
        let facets: Vec<Face> = c.facets().cloned().collect();
        facets.iter().cloned().permutations(facets.len()).any(|p| brute_is_shelling(&p))
    }

    #[test]
    fn single_facet() {
        let c = Complex::from_labels([["a", "b", "c"]]).unwrap();
        let v = verify_shelling(&c, &[f(&["a", "b", "c"])]).unwrap().into_order().unwrap();
        assert_eq!(v.restrictions, vec![Face::empty()]);
    }

    #[test]
    fn every_order_on_tetrahedron_boundary() {
        let s = generate::simplex_boundary(3).unwrap();
        let facets: Vec<Face> = s.facets().cloned().collect();
        for p in facets.iter().cloned().permutations(4) {
            let o = verify_shelling(&s, &p).unwrap().into_order().unwrap();
            let sizes: Vec<usize> = o.restrictions.iter().map(Face::len).collect();
            assert_eq!(sizes, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn bowtie_is_not_shellable() {
        let c = Complex::from_labels([["a", "b", "c"], ["a", "d", "e"]]).unwrap();
        assert!(!brute_shellable(&c));
        assert!(find_shelling(&c, &[]).unwrap().is_none());
    }

    #[test]
    fn octahedron_and_cross_polytopes() {
        for d in 1..=3 {
            let (c, _) = generate::cross_polytope_boundary(d).unwrap();
            let o = find_shelling(&c, &[]).unwrap().unwrap();
            assert!(verify_shelling(&c, &o.facets).unwrap().is_valid());
            assert!(brute_is_shelling(&o.facets));
        }
    }

    #[test]
    fn bad_order_on_a_disk() {
        // Hexagon fan around a centre: two opposite triangles first meet only in the centre.
        let c = Complex::from_labels((0..6).map(|i| ["c".to_string(), format!("r{i}"), format!("r{}", (i + 1) % 6)]))
            .unwrap();
        let tri = |i: usize| Face::from_set(["c".to_string(), format!("r{i}"), format!("r{}", (i + 1) % 6)]);
        let order = vec![tri(0), tri(3), tri(1), tri(2), tri(4), tri(5)];
        assert!(!brute_is_shelling(&order[..2]));
        assert_eq!(verify_shelling(&c, &order).unwrap(), ShellingVerdict::Violation { position: 1 });
        let good: Vec<Face> = (0..6).map(tri).collect();
        assert!(verify_shelling(&c, &good).unwrap().is_valid());
        assert!(verify_shelling(&c, &good[..5]).is_err());
    }

    #[test]
    fn co_shellability_in_octahedron() {
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        let one = Complex::from_labels([["x0", "x1", "x2"]]).unwrap();
        assert!(is_co_shellable(&c2, &one).unwrap());
        assert!(brute_shellable(&c2.facet_complement(&one)));
        let star = c2.star(&Face::vertex("x0")).unwrap();
        let comp = c2.facet_complement(&star);
        assert_eq!(comp, c2.star(&Face::vertex("y0")).unwrap());
        assert!(is_co_shellable(&c2, &star).unwrap());
        assert!(is_co_shellable(&c2, &c2).is_err());
    }

    #[test]
    fn concatenation_with_prefix() {
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        let star = c2.star(&Face::vertex("x0")).unwrap();
        let d_order = find_shelling(&star, &[]).unwrap().unwrap();
        let full = find_shelling(&c2, &d_order.facets).unwrap().unwrap();
        assert_eq!(&full.facets[..4], &d_order.facets[..]);
    }

    #[test]
    fn prefix_must_be_partial_shelling() {
        let c = Complex::from_labels([["a", "b", "c"], ["a", "d", "e"], ["a", "c", "d"]]).unwrap();
        assert!(find_shelling(&c, &[f(&["a", "b", "c"]), f(&["a", "d", "e"])]).is_err());
        assert!(find_shelling(&c, &[f(&["a", "b", "c"])]).unwrap().is_some());
    }

    #[test]
    fn boundary_flip_of_attached_tetrahedron() {
        let t = Complex::from_labels([["a", "b", "c", "d"]]).unwrap();
        let next = f(&["b", "c", "d", "e"]);
        let (grown, mv) = shelling_step_boundary(&t, &next).unwrap();
        assert_eq!(mv.a, f(&["b", "c", "d"]));
        assert_eq!(mv.b, f(&["e"]));
        assert_eq!(apply_bistellar_flip(&t.boundary(), &mv).unwrap(), grown.boundary());
    }

    #[test]
    fn boundary_flip_along_d_facets() {
        // Three tetrahedra around the edge ad; a fourth meets them in three triangles.
        let omega = Complex::from_labels([["a", "b", "c", "d"], ["a", "b", "d", "e"], ["a", "c", "d", "e"]]).unwrap();
        let next = f(&["b", "c", "d", "e"]);
        let (grown, mv) = shelling_step_boundary(&omega, &next).unwrap();
        assert_eq!(mv.a, f(&["d"]));
        assert_eq!(mv.b, f(&["b", "c", "e"]));
        assert_eq!(apply_bistellar_flip(&omega.boundary(), &mv).unwrap(), grown.boundary());
    }

    #[test]
    fn closing_a_sphere_is_rejected() {
        let s = generate::simplex_boundary(3).unwrap();
        let facets: Vec<Face> = s.facets().cloned().collect();
        let omega = Complex::from_facets(facets[..3].iter().cloned());
        assert!(matches!(shelling_step_boundary(&omega, &facets[3]), Err(Error::NotElementaryShelling(_))));
    }

    #[test]
    fn budget_is_distinct_from_absence() {
        let (c3, _) = generate::cross_polytope_boundary(3).unwrap();
        assert!(matches!(find_shelling_with(&c3, &[], 2), Err(Error::BudgetExhausted(2))));
    }

    fn small_complex() -> impl Strategy<Value = Complex> {
        let tri = proptest::sample::subsequence((0..6).collect::<Vec<usize>>(), 3);
        proptest::collection::vec(tri, 1..6)
            .prop_map(|ts| {
                Complex::from_facets(
                    ts.into_iter().map(|t| Face::from_set(t.into_iter().map(|i| i.to_string()))).collect::<Vec<_>>(),
                )
            })
            .prop_filter("pure", |c| c.is_pure())
    }

    proptest! {
        #[test]
        fn search_agrees_with_brute_force(c in small_complex()) {
            let found = find_shelling(&c, &[]).unwrap();
            prop_assert_eq!(found.is_some(), brute_shellable(&c));
            if let Some(o) = found {
                prop_assert!(verify_shelling(&c, &o.facets).unwrap().is_valid());
                prop_assert!(brute_is_shelling(&o.facets));
            }
        }

        #[test]
        fn restriction_is_the_minimal_new_face(c in small_complex()) {
            if let Some(o) = find_shelling(&c, &[]).unwrap() {
                for j in 1..o.facets.len() {
                    let prev = Complex::from_facets(o.facets[..j].iter().cloned());
                    let new: Vec<Face> = o.facets[j].subsets().filter(|g| !prev.contains(g)).collect();
                    prop_assert!(new.iter().all(|g| o.restrictions[j].is_subset(g)));
                    prop_assert!(new.contains(&o.restrictions[j]));
                }
            }
        }
    }
}
