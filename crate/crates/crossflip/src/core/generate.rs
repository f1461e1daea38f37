//! Standard complexes with fixed, documented labelings.
//!
//! * `simplex(n)`, `simplex_boundary(n)`: vertices `x0..xn`.
//! * `cross_polytope_boundary(d)`: vertices `x0..xd, y0..yd`, a face may not
//!   contain both `xi` and `yi`; colored by `κ(xi) = κ(yi) = i`.
//! * `bipyramid(n)`: equator `e0..e{2n-1}` colored alternately 0/1, apexes
//!   `p0, p1` colored 2.
//! * `barycentric_subdivision(Δ)`: one vertex per nonempty face, labeled by the
//!   face's vertices joined with `+` (a single vertex keeps its label), colored
//!   by the dimension of the face.
//! * `grid_torus(p, q)`: vertices `t{i}_{j}` on a `p × q` grid with one
//!   diagonal per square; colored by `(i + j) mod 3` when `3 | p` and `3 | q`.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Complex, Face, VertexId};
use crate::coloring::Coloring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Simplex(usize),
    SimplexBoundary(usize),
    CrossPolytopeBoundary(usize),
    Bipyramid(usize),
    BarycentricSubdivision(Complex),
    GridTorus(usize, usize),
}

/// Builds the complex of the given kind, with its standard coloring when it has one.
pub fn generate(kind: &Kind) -> Result<(Complex, Option<Coloring>)> {
    Ok(match kind {
        Kind::Simplex(n) => (simplex(*n)?, None),
        Kind::SimplexBoundary(n) => (simplex_boundary(*n)?, None),
        Kind::CrossPolytopeBoundary(d) => {
            let (c, k) = cross_polytope_boundary(*d)?;
            (c, Some(k))
        }
        Kind::Bipyramid(n) => {
            let (c, k) = bipyramid(*n)?;
            (c, Some(k))
        }
        Kind::BarycentricSubdivision(c) => {
            let (c, k) = barycentric_subdivision(c)?;
            (c, Some(k))
        }
        Kind::GridTorus(p, q) => {
            let (c, k) = grid_torus(*p, *q)?;
            (c, k)
        }
    })
}

fn positive(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

fn x(i: usize) -> VertexId {
    VertexId::from(format!("x{i}"))
}

fn y(i: usize) -> VertexId {
    VertexId::from(format!("y{i}"))
}

/// The full `n`-simplex on `x0..xn`.
pub fn simplex(n: usize) -> Result<Complex> {
    positive("simplex dimension", n)?;
    Ok(Complex::simplex(Face::from_set((0..=n).map(x))))
}

/// `∂σ^n` on `x0..xn`.
pub fn simplex_boundary(n: usize) -> Result<Complex> {
    positive("simplex dimension", n)?;
    let all = Face::from_set((0..=n).map(x));
    Ok(Complex::from_facets(all.ridges()))
}

/// `C_d`, the boundary of the `(d+1)`-dimensional cross-polytope, with its canonical coloring.
pub fn cross_polytope_boundary(d: usize) -> Result<(Complex, Coloring)> {
    positive("cross-polytope dimension", d)?;
    let facets = (0u64..(1u64 << (d + 1)))
        .map(|mask| Face::from_set((0..=d).map(|i| if mask >> i & 1 == 1 { y(i) } else { x(i) })));
    let mut k = Coloring::new(d + 1);
    for i in 0..=d {
        k.set(x(i), i);
        k.set(y(i), i);
    }
    Ok((Complex::from_facets(facets), k))
}

/// The partner of a cross-polytope vertex: `xi <-> yi`.
pub fn cross_partner(v: &VertexId) -> Option<VertexId> {
    let s = v.as_str();
    let (head, tail) = s.split_at(1);
    tail.parse::<usize>().ok()?;
    match head {
        "x" => Some(VertexId::from(format!("y{tail}"))),
        "y" => Some(VertexId::from(format!("x{tail}"))),
        _ => None,
    }
}

/// Bipyramid over a `2n`-gon, `n >= 2`.
pub fn bipyramid(n: usize) -> Result<(Complex, Coloring)> {
    if n < 2 {
        return Err(Error::InvalidParameter("bipyramid needs n >= 2 (a 2n-gon with 2n >= 4)".into()));
    }
    let m = 2 * n;
    let e = |i: usize| VertexId::from(format!("e{}", i % m));
    let mut facets = Vec::new();
    for i in 0..m {
        for p in ["p0", "p1"] {
            facets.push(Face::from_set([e(i), e(i + 1), VertexId::from(p)]));
        }
    }
    let mut k = Coloring::new(3);
    for i in 0..m {
        k.set(e(i), i % 2);
    }
    k.set("p0".into(), 2);
    k.set("p1".into(), 2);
    Ok((Complex::from_facets(facets), k))
}

fn bary_label(f: &Face) -> VertexId {
    VertexId::from(f.vertices().iter().map(|v| v.as_str()).join("+"))
}

/// Barycentric subdivision: facets are the maximal chains of nonempty faces.
pub fn barycentric_subdivision(c: &Complex) -> Result<(Complex, Coloring)> {
    if c.is_void() || c.dim() == Some(-1) {
        return Err(Error::InvalidParameter("barycentric subdivision of an empty complex".into()));
    }
    let faces = c.faces();
    let mut labels: BTreeMap<VertexId, Face> = BTreeMap::new();
    for f in faces.iter().filter(|f| !f.is_empty()) {
        let l = bary_label(f);
        if let Some(prev) = labels.insert(l.clone(), f.clone()) {
            return Err(Error::LabelCollision(format!("{l} names both {prev} and {f}")));
        }
    }
    let mut facets = Vec::new();
    for top in c.facets() {
        for perm in top.vertices().iter().permutations(top.len()) {
            let mut chain = Vec::new();
            let mut acc = Face::empty();
            for v in perm {
                acc = acc.with(v.clone());
                chain.push(bary_label(&acc));
            }
            facets.push(Face::from_set(chain));
        }
    }
    let mut k = Coloring::new(c.dim().unwrap_or(0).max(0) as usize + 1);
    for (l, f) in &labels {
        k.set(l.clone(), f.len() - 1);
    }
    Ok((Complex::from_facets(facets), k))
}

/// A `p × q` grid torus, `p, q >= 3`; balanced (3-colored) when both are multiples of 3.
pub fn grid_torus(p: usize, q: usize) -> Result<(Complex, Option<Coloring>)> {
    if p < 3 || q < 3 {
        return Err(Error::InvalidParameter("grid torus needs p, q >= 3".into()));
    }
    let t = |i: usize, j: usize| VertexId::from(format!("t{}_{}", i % p, j % q));
    let mut facets = Vec::new();
    for i in 0..p {
        for j in 0..q {
            facets.push(Face::from_set([t(i, j), t(i + 1, j), t(i + 1, j + 1)]));
            facets.push(Face::from_set([t(i, j), t(i, j + 1), t(i + 1, j + 1)]));
        }
    }
    let coloring = (p.is_multiple_of(3) && q.is_multiple_of(3)).then(|| {
        let mut k = Coloring::new(3);
        for i in 0..p {
            for j in 0..q {
                k.set(t(i, j), (i + j) % 3);
            }
        }
        k
    });
    Ok((Complex::from_facets(facets), coloring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper;

    #[test]
    fn cross_polytope_is_balanced() {
        let (c, k) = cross_polytope_boundary(2).unwrap();
        assert_eq!(c.num_facets(), 8);
        assert_eq!(k.m(), 3);
        assert!(is_proper(&c, &k).unwrap());
        assert_eq!(cross_partner(&"x3".into()), Some("y3".into()));
        assert_eq!(cross_partner(&"q3".into()), None);
    }

    #[test]
    fn simplex_boundary_facets() {
        assert_eq!(simplex_boundary(3).unwrap().num_facets(), 4);
        assert!(simplex_boundary(0).is_err());
        assert!(cross_polytope_boundary(0).is_err());
    }

    #[test]
    fn hexagon_bipyramid() {
        let (c, k) = bipyramid(3).unwrap();
        assert_eq!(c.num_facets(), 12);
        assert_eq!(c.euler_characteristic(), 2);
        let edges = c.edges();
        assert!(edges.iter().all(|e| k.get(&e.vertices()[0]) != k.get(&e.vertices()[1])));
        assert!(bipyramid(1).is_err());
    }

    #[test]
    fn barycentric_of_boundary_tetrahedron() {
        let (c, k) = barycentric_subdivision(&simplex_boundary(3).unwrap()).unwrap();
        assert_eq!(c.num_vertices(), 14);
        assert_eq!(c.num_facets(), 24);
        assert_eq!(c.euler_characteristic(), 2);
        assert!(is_proper(&c, &k).unwrap());
    }

    #[test]
    fn torus_is_balanced() {
        let (c, k) = grid_torus(3, 3).unwrap();
        let k = k.unwrap();
        assert_eq!(c.num_facets(), 18);
        assert_eq!(c.euler_characteristic(), 0);
        assert!(is_proper(&c, &k).unwrap());
        assert!(grid_torus(4, 3).unwrap().1.is_none());
    }
}
