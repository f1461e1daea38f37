use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Complex, FVector, Face};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereStatus {
    Yes,
    No,
    /// Local conditions hold but global sphere recognition is not implemented.
    HeuristicUnknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `None` for the void complex.
    pub dim: Option<isize>,
    pub f_vector: FVector,
    pub euler_characteristic: i64,
    pub pure: bool,
    pub connected: bool,
    /// Pure, and every ridge lies in exactly two facets.
    pub closed_pseudomanifold: bool,
    /// For dimension 2: every vertex link is a single cycle.
    pub surface: Option<bool>,
    /// For dimension 3: every vertex link is a 2-sphere.
    pub vertex_links_spheres: Option<bool>,
    /// For closed pseudomanifolds: whether the facets admit a coherent orientation.
    pub orientable: Option<bool>,
    pub sphere: SphereStatus,
}

impl Classification {
    pub fn is_closed_surface(&self) -> bool {
        self.surface == Some(true)
    }

    pub fn is_2_sphere(&self) -> bool {
        self.dim == Some(2) && self.sphere == SphereStatus::Yes
    }
}

/// Whether `c` is a single cycle (a combinatorial 1-sphere).
pub fn is_cycle(c: &Complex) -> bool {
    if c.dim() != Some(1) || !c.is_pure() || !c.is_connected() {
        return false;
    }
    let mut deg: BTreeMap<&super::VertexId, usize> = BTreeMap::new();
    for e in c.facets() {
        for v in e.vertices() {
            *deg.entry(v).or_default() += 1;
        }
    }
    deg.len() >= 3 && deg.values().all(|&d| d == 2)
}

/// Whether `c` is a closed surface (every vertex link a cycle).
pub fn is_closed_surface(c: &Complex) -> bool {
    c.dim() == Some(2)
        && c.is_pure()
        && c.vertices().into_iter().all(|v| is_cycle(&c.link(&Face::vertex(v)).expect("vertex is present")))
}

/// Exact 2-sphere test: closed connected surface with Euler characteristic 2.
pub fn is_2_sphere(c: &Complex) -> bool {
    is_closed_surface(c) && c.is_connected() && c.euler_characteristic() == 2
}

pub fn is_closed_pseudomanifold(c: &Complex) -> bool {
    if c.is_void() || !c.is_pure() || c.dim() < Some(1) {
        return c.dim() == Some(0) && c.num_facets() == 2;
    }
    c.ridge_degrees().values().all(|&k| k == 2)
}

/// Orientability of a closed pseudomanifold, by propagating orientations across ridges.
///
/// Returns `None` when `c` is not a closed pseudomanifold.
pub fn orientable(c: &Complex) -> Option<bool> {
    if !is_closed_pseudomanifold(c) || c.dim() < Some(1) {
        return None;
    }
    let facets: Vec<&Face> = c.facets().collect();
    let mut by_ridge: BTreeMap<Face, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        for (pos, v) in f.vertices().iter().enumerate() {
            by_ridge.entry(f.without(v)).or_default().push((i, pos));
        }
    }
    // Orientation sign s(i) in {+1,-1} relative to sorted order. Two facets
    // sharing ridge R, missing positions p and q, induce opposite orientations
    // on R iff s(i)(-1)^p = -s(j)(-1)^q.
    let mut sign: Vec<i8> = vec![0; facets.len()];
    for start in 0..facets.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for (pos, v) in facets[i].vertices().iter().enumerate() {
                let r = facets[i].without(v);
                for &(j, q) in &by_ridge[&r] {
                    if j == i {
                        continue;
                    }
                    let pi = if pos % 2 == 0 { 1 } else { -1 };
                    let pj = if q % 2 == 0 { 1 } else { -1 };
                    let want = -sign[i] * pi * pj;
                    if sign[j] == 0 {
                        sign[j] = want;
                        queue.push_back(j);
                    } else if sign[j] != want {
                        return Some(false);
                    }
                }
            }
        }
    }
    Some(true)
}

pub fn classify(c: &Complex) -> Classification {
    let dim = c.dim();
    let f_vector = c.f_vector();
    let euler_characteristic = f_vector.euler_characteristic();
    let pure = c.is_pure();
    let connected = c.is_connected();
    let closed_pseudomanifold = is_closed_pseudomanifold(c);
    let surface = (dim == Some(2)).then(|| is_closed_surface(c));
    let vertex_links_spheres = (dim == Some(3)).then(|| {
        pure && c.vertices().into_iter().all(|v| is_2_sphere(&c.link(&Face::vertex(v)).expect("vertex is present")))
    });
    let orientable = orientable(c);
    let sphere = match dim {
        Some(0) => yes_no(c.num_facets() == 2),
        Some(1) => yes_no(is_cycle(c)),
        Some(2) => yes_no(surface == Some(true) && connected && euler_characteristic == 2),
        Some(d) if d >= 3 => {
            let locally_ok = closed_pseudomanifold && connected && vertex_links_spheres != Some(false);
            let euler_ok = euler_characteristic == if d % 2 == 0 { 2 } else { 0 };
            if locally_ok && euler_ok {
                SphereStatus::HeuristicUnknown
            } else {
                SphereStatus::No
            }
        }
        _ => SphereStatus::No,
    };
    Classification {
        dim,
        f_vector,
        euler_characteristic,
        pure,
        connected,
        closed_pseudomanifold,
        surface,
        vertex_links_spheres,
        orientable,
        sphere,
    }
}

fn yes_no(b: bool) -> SphereStatus {
    if b {
        SphereStatus::Yes
    } else {
        SphereStatus::No
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::generate;

    #[test]
    fn octahedron() {
        let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
        let r = classify(&c2);
        assert!(r.pure && r.connected && r.closed_pseudomanifold);
        assert_eq!(r.surface, Some(true));
        assert_eq!(r.sphere, SphereStatus::Yes);
        assert_eq!(r.orientable, Some(true));
    }

    #[test]
    fn bowtie_fails_surface_check() {
        let c = Complex::from_labels([["a", "b", "c"], ["a", "d", "e"]]).unwrap();
        let r = classify(&c);
        assert!(r.pure && r.connected);
        assert!(!r.closed_pseudomanifold);
        // Direct inspection: the link of the shared vertex is two disjoint edges.
        let lk = c.link(&Face::vertex("a")).unwrap();
        assert_eq!(lk.num_facets(), 2);
        assert!(!lk.is_connected());
        assert_eq!(r.surface, Some(false));
        assert_eq!(r.sphere, SphereStatus::No);
    }

    #[test]
    fn three_cross_polytope() {
        let (c3, _) = generate::cross_polytope_boundary(3).unwrap();
        let r = classify(&c3);
        assert!(r.closed_pseudomanifold);
        assert_eq!(r.vertex_links_spheres, Some(true));
        for v in c3.vertices() {
            let lk = c3.link(&Face::vertex(v)).unwrap();
            assert_eq!(lk.f_vector().0, vec![1, 6, 12, 8]);
        }
        assert_eq!(r.sphere, SphereStatus::HeuristicUnknown);
    }

    #[test]
    fn torus_and_projective_plane() {
        let (t, _) = generate::grid_torus(3, 3).unwrap();
        let r = classify(&t);
        assert_eq!(r.surface, Some(true));
        assert_eq!(r.euler_characteristic, 0);
        assert_eq!(r.orientable, Some(true));
        assert_eq!(r.sphere, SphereStatus::No);
        // 6-vertex projective plane.
        let rp2 = Complex::from_labels(
            [
                [1, 2, 3],
                [1, 3, 4],
                [1, 4, 5],
                [1, 5, 6],
                [1, 6, 2],
                [2, 3, 5],
                [3, 4, 6],
                [4, 5, 2],
                [5, 6, 3],
                [6, 2, 4],
            ]
            .map(|f| f.map(|i: usize| crate::core::VertexId::from(i))),
        )
        .unwrap();
        let r = classify(&rp2);
        assert_eq!(r.surface, Some(true));
        assert_eq!(r.euler_characteristic, 1);
        assert_eq!(r.orientable, Some(false));
    }
}
