//! Seeded random spheres for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{find_proper_coloring, Coloring};
use crate::core::generate::{cross_polytope_boundary, simplex_boundary};
use crate::core::{Complex, Face, VertexId};
use crate::error::{Error, Result};
use crate::flips::{
    apply_bistellar_flip, apply_cross_flip, available_bistellar_flips, available_cross_flips, CrossFlipTemplate,
    FlipMove,
};

/// A balanced 2-sphere from `moves` random cross-flips of the catalog applied to `C_2`.
pub fn random_balanced_sphere(moves: usize, catalog: &[CrossFlipTemplate], seed: u64) -> Result<(Complex, Coloring)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut c, k) = cross_polytope_boundary(2)?;
    let mut k = k;
    for _ in 0..moves {
        let options = available_cross_flips(&c, catalog, Some(8));
        let Some(mv) = options.choose(&mut rng) else { break };
        let (nc, nk) = apply_cross_flip(&c, mv, Some(&k))?;
        c = nc;
        k = nk.expect("colored");
    }
    Ok((c, k))
}

/// A 2-sphere on `n >= 4` vertices: random facet subdivisions of the
/// tetrahedron, then as many random edge flips. New vertices are `v0, v1, ...`.
pub fn random_sphere(n: usize, seed: u64) -> Result<Complex> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("a 2-sphere needs at least 4 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = simplex_boundary(3)?;
    for i in 0..n - 4 {
        let facets: Vec<Face> = c.facets().cloned().collect();
        let f = facets.choose(&mut rng).expect("nonempty").clone();
        c = apply_bistellar_flip(&c, &FlipMove::new(f, Face::vertex(VertexId::from(format!("v{i}")))))?;
    }
    for _ in 0..n {
        let flips: Vec<FlipMove> = available_bistellar_flips(&c).into_iter().filter(|f| f.a.len() == 2).collect();
        if let Some(f) = flips.choose(&mut rng) {
            c = apply_bistellar_flip(&c, f)?;
        }
    }
    Ok(c)
}

/// A 2-sphere with a proper coloring using colors below `m`, retrying seeds
/// derived from `seed` until a coloring exists.
pub fn random_colored_sphere(n: usize, m: usize, seed: u64) -> Result<(Complex, Coloring)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let c = random_sphere(n, rng.gen())?;
        if let Some(k) = find_proper_coloring(&c, m) {
            return Ok((c, k));
        }
    }
    Err(Error::BudgetExhausted(64))
}
