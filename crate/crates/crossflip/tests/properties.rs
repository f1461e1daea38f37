use std::collections::BTreeSet;

use proptest::prelude::*;

use crossflip::coloring::{extend_coloring, is_proper, Coloring, RelativeComplex, StepKind};
use crossflip::core::classify::{classify, is_closed_pseudomanifold, is_closed_surface};
use crossflip::core::generate;
use crossflip::core::LabelGen;
use crossflip::core::{canonical_form, Complex, Face, VertexId};
use crossflip::error::Error;
use crossflip::flips::{
    apply_bistellar_flip, apply_cross_flip, available_bistellar_flips, available_cross_flips,
    enumerate_cross_flip_templates, CatalogMode, CrossFlipTemplate,
};
use crossflip::pipeline::random::{random_balanced_sphere, random_sphere};
use crossflip::pipeline::{colored_connect, reduce_balanced_2sphere};
use crossflip::poset::{
    compose, decompose, elementary_cobordism, eliminate_face, find_bidirectional_shelling, verify_bidirectional,
};
use crossflip::shelling::{find_shelling, shelling_step_boundary, DEFAULT_SHELLING_BUDGET};
use crossflip::subdivision::{stellar_subdivide, stellar_weld, stellar_weld_at, stellar_weld_candidates};

fn label(prefix: &str, i: usize) -> VertexId {
    VertexId::from(format!("{prefix}{i}"))
}

fn complex_from_masks(prefix: &str, masks: &[u32]) -> Complex {
    Complex::from_facets(
        masks.iter().map(|m| Face::from_set((0..8).filter(|i| m >> i & 1 == 1).map(|i| label(prefix, i)))),
    )
}

/// Up to 6 random faces of size 1..=4 on 7 vertices.
fn small_complex(prefix: &'static str) -> impl Strategy<Value = Complex> {
    prop::collection::vec((1u32..128).prop_filter("size", |m| m.count_ones() <= 4), 1..6)
        .prop_map(move |masks| complex_from_masks(prefix, &masks))
}

/// Independent enumeration of the closure of the facets.
fn closure(c: &Complex) -> BTreeSet<Face> {
    c.facets().flat_map(|f| f.subsets().collect::<Vec<_>>()).collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn edge_scan(c: &Complex, k: &Coloring) -> bool {
    closure(c).iter().filter(|f| f.len() == 2).all(|e| k.get(&e.vertices()[0]) != k.get(&e.vertices()[1]))
}

fn dull_count(c: &Complex, k: &Coloring) -> usize {
    closure(c)
        .iter()
        .filter(|f| f.len() >= 2 && f.vertices().iter().all(|v| k.get(v).is_some_and(|x| (x as isize) < f.dim())))
        .count()
}

fn basic_catalog() -> Vec<CrossFlipTemplate> {
    enumerate_cross_flip_templates(2, CatalogMode::Basic, DEFAULT_SHELLING_BUDGET).unwrap()
}

fn fast() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn star_is_face_join_link(c in small_complex("v")) {
        for f in closure(&c).into_iter().filter(|f| !f.is_empty()) {
            let star: BTreeSet<Face> = closure(&c.star(&f).unwrap());
            let link = closure(&c.link(&f).unwrap());
            let join: BTreeSet<Face> = f.subsets().flat_map(|g| link.iter().map(move |h| g.union(h))).collect();
            prop_assert_eq!(star, join);
        }
    }

    #[test]
    fn deletion_is_idempotent(c in small_complex("v"), pick in any::<prop::sample::Index>()) {
        let faces: Vec<Face> = closure(&c).into_iter().filter(|f| !f.is_empty()).collect();
        let f = pick.get(&faces);
        let once = c.delete_face(f);
        prop_assert_eq!(once.delete_face(f), once.clone());
        prop_assert!(!once.contains(f));
    }

    #[test]
    fn join_is_associative(a in small_complex("a"), b in small_complex("b"), c in small_complex("c")) {
        let left = a.join(&b).unwrap().join(&c).unwrap();
        let right = a.join(&b.join(&c).unwrap()).unwrap();
        prop_assert_eq!(canonical_form(&left).unwrap(), canonical_form(&right).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn weld_undoes_subdivision(c in small_complex("v"), pick in any::<prop::sample::Index>()) {
        let faces: Vec<Face> = closure(&c).into_iter().filter(|f| f.len() >= 2).collect();
        prop_assume!(!faces.is_empty());
        let f = pick.get(&faces).clone();
        let sub = stellar_subdivide(&c, &f, "z".into()).unwrap();
        let z: VertexId = "z".into();
        prop_assert_eq!(stellar_weld_at(&sub, &z, &f).unwrap(), c.clone());
        match stellar_weld(&sub, &z) {
            Ok((back, welded)) => {
                prop_assert_eq!(back, c);
                prop_assert_eq!(welded, f);
            }
            Err(Error::AmbiguousWeld(_, n)) => {
                let candidates = stellar_weld_candidates(&sub, &z).unwrap();
                prop_assert_eq!(candidates.len(), n);
                prop_assert!(candidates.contains(&f));
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn subdivision_keeps_induced_subcomplexes_induced(
        c in small_complex("v"),
        w in prop::collection::btree_set(0usize..7, 1..7),
        pick in any::<prop::sample::Index>(),
    ) {
        let w: BTreeSet<VertexId> = w.into_iter().map(|i| label("v", i)).filter(|v| c.has_vertex(v)).collect();
        prop_assume!(!w.is_empty());
        let d = c.induced(&w).unwrap();
        let faces: Vec<Face> = closure(&c).into_iter().filter(|f| f.len() >= 2).collect();
        prop_assume!(!faces.is_empty());
        let f = pick.get(&faces);
        let sub = stellar_subdivide(&c, f, "z".into()).unwrap();
        let image = if d.contains(f) { stellar_subdivide(&d, f, "z".into()).unwrap() } else { d };
        prop_assert!(sub.is_induced(&image));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Random `(L, K)` with `K` induced on a vertex subset and a proper
    /// coloring of `K` from a greedy pass.
    #[test]
    fn coloring_extension_invariants(
        l in small_complex("v"),
        w in prop::collection::btree_set(0usize..7, 0..7),
        m in 1usize..=5,
        shift in 0usize..5,
    ) {
        let w: BTreeSet<VertexId> = w.into_iter().map(|i| label("v", i)).filter(|v| l.has_vertex(v)).collect();
        let k = if w.is_empty() { Complex::void() } else { l.induced(&w).unwrap() };
        let mut kappa = Coloring::new(usize::MAX);
        for v in k.vertices() {
            let adj = k.adjacency();
            let used: BTreeSet<usize> = adj.get(&v).into_iter().flatten().filter_map(|u| kappa.get(u)).collect();
            let c = (0..).map(|i| (i + shift) % (k.num_vertices() + 1)).find(|c| !used.contains(c)).unwrap();
            kappa.set(v, c);
        }
        let m = m.max(kappa.palette().iter().max().map_or(0, |x| x + 1));
        kappa.set_m(m);
        let rel = RelativeComplex::new(l.clone(), k.clone()).unwrap();
        let ext = extend_coloring(&rel, &kappa, m).unwrap();
        let d = rel.dim().unwrap_or(0).max(0) as usize;

        prop_assert!(edge_scan(&ext.complex, &ext.coloring));
        prop_assert!(is_proper(&ext.complex, &ext.coloring).unwrap());
        prop_assert_eq!(dull_count(&ext.complex, &ext.coloring), 0);
        prop_assert!(k.is_subcomplex_of(&ext.complex));
        for v in k.vertices() {
            prop_assert_eq!(ext.coloring.get(&v), kappa.get(&v));
        }
        for s in &ext.log {
            prop_assert!(!k.contains(&s.face));
        }
        let bound = (m - 1).max(d);
        prop_assert!(ext.coloring.palette().iter().all(|&c| c <= bound));
        for v in ext.complex.vertices().into_iter().filter(|v| !k.has_vertex(v)) {
            prop_assert!(ext.coloring.get(&v).unwrap() <= d);
        }

        // Replay: dull faces strictly decrease along the starrings.
        let mut cur = l.clone();
        for s in ext.log.iter().filter(|s| s.kind == StepKind::EdgeSplit) {
            cur = stellar_subdivide(&cur, &s.face, s.vertex.clone()).unwrap();
        }
        let mut col = kappa.clone();
        for v in cur.vertices().into_iter().filter(|v| !k.has_vertex(v)) {
            col.set(v, 0);
        }
        let mut count = dull_count(&cur, &col);
        for s in ext.log.iter().filter(|s| s.kind == StepKind::DullStar) {
            cur = stellar_subdivide(&cur, &s.face, s.vertex.clone()).unwrap();
            col.set(s.vertex.clone(), s.color);
            let next = dull_count(&cur, &col);
            prop_assert!(next < count, "dull faces went from {} to {}", count, next);
            count = next;
        }
        prop_assert_eq!(cur, ext.complex);
    }
}

proptest! {
    #![proptest_config(fast())]

    #[test]
    fn bistellar_round_trips_on_spheres(n in 4usize..12, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let c = random_sphere(n, seed).unwrap();
        let flips = available_bistellar_flips(&c);
        let mv = pick.get(&flips);
        let out = apply_bistellar_flip(&c, mv).unwrap();
        prop_assert!(is_closed_surface(&out));
        prop_assert_eq!(out.euler_characteristic(), 2);
        let back = apply_bistellar_flip(&out, &mv.inverse()).unwrap();
        prop_assert_eq!(canonical_form(&back).unwrap(), canonical_form(&c).unwrap());
        prop_assert_eq!(back, c);
    }

    #[test]
    fn elementary_cobordisms_decompose_to_their_flip(n in 4usize..10, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let c = random_sphere(n, seed).unwrap();
        let flips = available_bistellar_flips(&c);
        let mv = pick.get(&flips);
        let cob = elementary_cobordism(&c, mv).unwrap();
        let bs = find_bidirectional_shelling(&cob, DEFAULT_SHELLING_BUDGET).unwrap().unwrap();
        let dec = decompose(&cob, &bs).unwrap();
        prop_assert_eq!(dec.flips(), vec![mv.clone()]);
        prop_assert_eq!(dec.end(), &apply_bistellar_flip(&c, mv).unwrap());
    }

    #[test]
    fn composed_walks_decompose_back(n in 5usize..9, seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let mut c = random_sphere(n, seed).unwrap();
        let mut path = Vec::new();
        let mut cob: Option<crossflip::poset::PseudoCobordism> = None;
        for (i, p) in picks.iter().enumerate() {
            let flips: Vec<_> = available_bistellar_flips(&c)
                .into_iter()
                .map(|f| if f.b.len() == 1 { crossflip::flips::FlipMove::new(f.a, Face::vertex(label("w", i))) } else { f })
                .collect();
            let mv = p.get(&flips).clone();
            let e = elementary_cobordism(&c, &mv).unwrap();
            cob = Some(match cob { None => e, Some(prev) => compose(&prev, &e).unwrap() });
            c = apply_bistellar_flip(&c, &mv).unwrap();
            path.push(mv);
        }
        let cob = cob.unwrap();
        cob.verify().unwrap();
        let bs = verify_bidirectional(&cob, cob.witness.as_ref().unwrap()).unwrap().unwrap();
        for (j, step) in bs.order.iter().enumerate() {
            let (a, b) = (&bs.backward[j], &bs.forward[j]);
            prop_assert!(!a.is_empty() && !b.is_empty());
            prop_assert!(a.is_disjoint(b));
            prop_assert_eq!(a.union(b), cob.omega.labels(*step));
        }
        let dec = decompose(&cob, &bs).unwrap();
        prop_assert_eq!(dec.flips(), path);
        prop_assert_eq!(dec.end(), &c);
    }

    #[test]
    fn eliminated_faces_are_gone(n in 5usize..10, seed in any::<u64>(), pick in any::<prop::sample::Index>(), edge in any::<bool>()) {
        let c = random_sphere(n, seed).unwrap();
        let faces = if edge { c.edges() } else { c.vertices().into_iter().map(Face::vertex).collect() };
        let tau = pick.get(&faces);
        let mut labels = LabelGen::avoiding(c.vertices().iter());
        let el = eliminate_face(&c, tau, None, &mut labels).unwrap();
        prop_assert!(!el.complex.contains(tau));
        prop_assert!(is_closed_surface(&el.complex));
        let w = el.cobordism.witness.clone().unwrap();
        prop_assert!(verify_bidirectional(&el.cobordism, &w).unwrap().is_some());
    }

    #[test]
    fn shelling_steps_move_the_boundary_by_one_flip(n in 4usize..12, seed in any::<u64>()) {
        let c = random_sphere(n, seed).unwrap();
        let ball = c.cone("o".into()).unwrap();
        let order = find_shelling(&ball, &[]).unwrap().unwrap().facets;
        let mut grown = Complex::from_facets([order[0].clone()]);
        for g in &order[1..] {
            let (next, flip) = shelling_step_boundary(&grown, g).unwrap();
            let flipped = apply_bistellar_flip(&grown.boundary(), &flip).unwrap();
            prop_assert_eq!(canonical_form(&flipped).unwrap(), canonical_form(&next.boundary()).unwrap());
            grown = next;
        }
        prop_assert_eq!(grown.boundary(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn cross_flips_keep_surfaces_balanced(moves in 0usize..8, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let catalog = basic_catalog();
        let (c, k) = random_balanced_sphere(moves, &catalog, seed).unwrap();
        for (c, k) in [(c, Some(k)), {
            let (t, kt) = generate::grid_torus(3, 3).unwrap();
            (t, kt)
        }] {
            let k = k.unwrap();
            let options = available_cross_flips(&c, &catalog, Some(4));
            prop_assume!(!options.is_empty());
            let mv = pick.get(&options);
            let (out, nk) = apply_cross_flip(&c, mv, Some(&k)).unwrap();
            let nk = nk.unwrap();
            prop_assert!(is_closed_surface(&out));
            prop_assert!(is_proper(&out, &nk).unwrap());
            prop_assert!(nk.palette().iter().all(|&x| x < 3));
            prop_assert_eq!(out.euler_characteristic(), c.euler_characteristic());
            let (back, bk) = apply_cross_flip(&out, &mv.inverse().unwrap(), Some(&nk)).unwrap();
            prop_assert_eq!(canonical_form(&back).unwrap(), canonical_form(&c).unwrap());
            prop_assert_eq!(bk.unwrap().restrict(c.vertices().iter()), k.restrict(c.vertices().iter()));
        }
    }

    #[test]
    fn balanced_reductions_replay(moves in 0usize..10, seed in any::<u64>()) {
        let (c, k) = random_balanced_sphere(moves, &basic_catalog(), seed).unwrap();
        let r = reduce_balanced_2sphere(&c, &k).unwrap();
        let states = r.replay().unwrap();
        prop_assert_eq!(&r.end, &c);
        for (s, sk) in &states {
            prop_assert!(is_closed_surface(s));
            prop_assert!(is_proper(s, sk.as_ref().unwrap()).unwrap());
        }
        prop_assert!(r.certificates.iter().all(|c| c.template_certified == Some(true)));
    }

    #[test]
    fn colored_connect_never_recolors(n1 in 4usize..10, n2 in 4usize..10, seed in any::<u64>()) {
        let (a, ka) = crossflip::pipeline::random::random_colored_sphere(n1, 4, seed).unwrap();
        let (b, kb) = crossflip::pipeline::random::random_colored_sphere(n2, 4, seed ^ 1).unwrap();
        let r = colored_connect(&a, &ka, &b, &kb, 4).unwrap();
        let states = r.replay().unwrap();
        for w in states.windows(2) {
            let (k0, k1) = (w[0].1.as_ref().unwrap(), w[1].1.as_ref().unwrap());
            for (v, c) in k1.iter() {
                prop_assert!(k0.get(v).is_none_or(|old| old == c));
            }
            prop_assert!(is_proper(&w[1].0, k1).unwrap());
        }
        prop_assert_eq!(r.end, b);
    }
}

#[test]
fn cross_polytopes_up_to_dimension_five() {
    for d in 1..=5 {
        let (c, k) = generate::cross_polytope_boundary(d).unwrap();
        let cl = classify(&c);
        assert!(cl.closed_pseudomanifold);
        assert!(is_closed_pseudomanifold(&c));
        for i in 0..=(d as u64 + 1) {
            assert_eq!(cl.f_vector.get(i as isize - 1), (1 << i) * binomial(d as u64 + 1, i));
        }
        assert!(is_proper(&c, &k).unwrap());
    }
}

#[test]
fn template_boundaries_agree() {
    let general = enumerate_cross_flip_templates(2, CatalogMode::General, DEFAULT_SHELLING_BUDGET).unwrap();
    for t in general.iter().chain(basic_catalog().iter()) {
        assert_eq!(t.ball.boundary(), t.complement.boundary());
    }
}
