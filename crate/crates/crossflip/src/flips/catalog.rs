use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cross::{CrossFlipTemplate, TemplateOrigin};
use crate::coloring::Coloring;
use crate::core::generate::{cross_polytope_boundary, simplex};
use crate::core::{canonical_form, find_colored_isomorphism, Complex, Face};
use crate::error::{Error, Result};
use crate::shelling::{find_shelling_with, is_co_shellable_with};
use crate::subdivision::diamond;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogMode {
    Basic,
    General,
}

/// Facet `s` of `C_d`: coordinate `i` is `y_i` when bit `i` of `s` is set, else `x_i`.
fn cd_facet(d: usize, s: usize) -> Face {
    Face::from_set((0..=d).map(|i| if s >> i & 1 == 1 { format!("y{i}") } else { format!("x{i}") }))
}

/// The hyperoctahedral group acting on facet indices: coordinate permutations
/// followed by swaps `x_i <-> y_i`.
fn facet_symmetries(d: usize) -> Vec<Vec<usize>> {
    let n = 1usize << (d + 1);
    let mut out = Vec::new();
    for perm in (0..=d).permutations(d + 1) {
        for flip in 0..n {
            out.push(
                (0..n).map(|s| (0..=d).filter(|&i| s >> i & 1 == 1).fold(0, |t, i| t | 1 << perm[i]) ^ flip).collect(),
            );
        }
    }
    out
}

/// One facet subset per symmetry class, excluding the empty and the full set.
fn orbit_representatives(d: usize) -> Vec<u64> {
    let n = 1usize << (d + 1);
    let syms = facet_symmetries(d);
    let total = 1u64 << n;
    let mut seen = vec![false; total as usize];
    let mut reps = Vec::new();
    for subset in 1..total - 1 {
        if seen[subset as usize] {
            continue;
        }
        reps.push(subset);
        for g in &syms {
            let image = (0..n).filter(|&s| subset >> s & 1 == 1).fold(0u64, |m, s| m | 1 << g[s]);
            seen[image as usize] = true;
        }
    }
    reps
}

/// Cross-flip templates in dimension `d`, one per isomorphism type of `D`, ordered by shape then key.
///
/// General mode enumerates all facet subsets of `C_d` up to symmetry (`d <= 3`);
/// basic mode takes the diamond images of balls in `∂σ^{d+1}`. Every template
/// is certified shellable and co-shellable.
pub fn enumerate_cross_flip_templates(d: usize, mode: CatalogMode, budget: u64) -> Result<Vec<CrossFlipTemplate>> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let candidates: Vec<(Complex, TemplateOrigin)> = match mode {
        CatalogMode::General => {
            if d > 3 {
                return Err(Error::InvalidParameter("general catalogs are exhaustive and limited to d <= 3".into()));
            }
            orbit_representatives(d)
                .into_iter()
                .map(|m| {
                    let facets = (0..1usize << (d + 1)).filter(|&s| m >> s & 1 == 1).map(|s| cd_facet(d, s));
                    (Complex::from_facets(facets), TemplateOrigin::General)
                })
                .collect()
        }
        CatalogMode::Basic => basic_balls(d)?.into_iter().map(|b| (b, TemplateOrigin::Basic)).collect(),
    };
    let (cd, _) = cross_polytope_boundary(d)?;
    let checked: Vec<Result<Option<CrossFlipTemplate>>> = candidates
        .into_par_iter()
        .map(|(ball, origin)| {
            let ok = find_shelling_with(&ball, &[], budget)?.is_some() && is_co_shellable_with(&cd, &ball, budget)?;
            match (ok, origin) {
                (true, _) => Ok(Some(CrossFlipTemplate::from_ball(d, ball, origin)?)),
                (false, TemplateOrigin::General) => Ok(None),
                (false, TemplateOrigin::Basic) => {
                    Err(Error::Internal("a basic template failed the shellability checks".into()))
                }
            }
        })
        .collect();
    let mut by_key: BTreeMap<String, CrossFlipTemplate> = BTreeMap::new();
    for t in checked {
        let Some(t) = t? else { continue };
        match by_key.get(&t.key) {
            Some(prev) => {
                if canonical_form(&prev.complement)? != canonical_form(&t.complement)? {
                    return Err(Error::Internal(format!(
                        "isomorphic balls with non-isomorphic complements (key {})",
                        t.key
                    )));
                }
            }
            None => {
                by_key.insert(t.key.clone(), t);
            }
        }
    }
    let mut out: Vec<CrossFlipTemplate> = by_key.into_values().collect();
    out.sort_by(|a, b| (a.shape(), &a.key).cmp(&(b.shape(), &b.key)));
    Ok(out)
}

/// `♦(Γ)` for every ball `Γ ⊂ ∂σ^{d+1}` spanned by a proper nonempty set of facets, mapped into `C_d`.
fn basic_balls(d: usize) -> Result<Vec<Complex>> {
    let s = simplex(d + 1)?;
    let mut k = Coloring::new(d + 2);
    for (i, v) in s.vertices().into_iter().enumerate() {
        k.set(v, i);
    }
    let dm = diamond(&s, &k)?;
    let cell = dm.cells.values().next().expect("one facet").clone();
    let (cd, ck) = cross_polytope_boundary(d)?;
    let phi = find_colored_isomorphism(&cell, &dm.coloring.restrict(cell.vertices().iter()), &cd, &ck)?
        .ok_or_else(|| Error::Internal("diamond of a simplex is not a cross-polytope boundary".into()))?;
    let boundary: Vec<Face> = dm.pieces.keys().cloned().collect();
    let mut out = Vec::new();
    for size in 1..boundary.len() {
        for gamma in boundary.iter().combinations(size) {
            let pieces = gamma.iter().flat_map(|t| dm.pieces[*t].iter().cloned());
            out.push(phi.apply_complex(&Complex::from_facets(pieces)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::generate;
    use crate::shelling::DEFAULT_SHELLING_BUDGET;
    use std::collections::BTreeSet;

    #[test]
    fn symmetry_group_order() {
        assert_eq!(facet_symmetries(2).len(), 48);
        assert_eq!(facet_symmetries(2).iter().collect::<BTreeSet<_>>().len(), 48);
    }

    #[test]
    fn one_dimensional_catalog() {
        let ts = enumerate_cross_flip_templates(1, CatalogMode::General, DEFAULT_SHELLING_BUDGET).unwrap();
        let shapes: Vec<(usize, usize)> = ts.iter().map(CrossFlipTemplate::shape).collect();
        assert_eq!(shapes, vec![(1, 3), (2, 2), (3, 1)]);
    }

    #[test]
    fn octahedron_catalog_shapes() {
        let ts = enumerate_cross_flip_templates(2, CatalogMode::General, DEFAULT_SHELLING_BUDGET).unwrap();
        let shapes: BTreeSet<(usize, usize)> = ts.iter().map(CrossFlipTemplate::shape).collect();
        for p in [(1, 7), (2, 6), (3, 5), (4, 4)] {
            assert!(shapes.contains(&p), "{p:?}");
        }
        for t in &ts {
            t.certify().unwrap();
        }
    }

    #[test]
    fn basic_is_contained_in_general() {
        let general = enumerate_cross_flip_templates(2, CatalogMode::General, DEFAULT_SHELLING_BUDGET).unwrap();
        let basic = enumerate_cross_flip_templates(2, CatalogMode::Basic, DEFAULT_SHELLING_BUDGET).unwrap();
        let keys: BTreeSet<&String> = general.iter().map(|t| &t.key).collect();
        assert!(basic.iter().all(|t| keys.contains(&t.key)));
        let shapes: BTreeSet<(usize, usize)> = basic.iter().map(CrossFlipTemplate::shape).collect();
        assert!(shapes.contains(&(3, 5)));
        assert!(shapes.contains(&(4, 4)));
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        assert!(basic.iter().all(|t| t.ball.is_subcomplex_of(&c2)));
    }
}
