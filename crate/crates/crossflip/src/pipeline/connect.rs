use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::coloring::{extend_coloring_with, find_proper_coloring, Coloring, RelativeComplex};
use crate::core::classify::{is_2_sphere, is_closed_surface, orientable};
use crate::core::generate::{cross_partner, cross_polytope_boundary};
use crate::core::{canonical_form_colored, find_colored_isomorphism, Complex, Face, Isomorphism, LabelGen, VertexId};
use crate::error::{Error, Result};
use crate::flips::{CrossFlipMove, CrossFlipTemplate, FlipMove, TemplateOrigin};
use crate::shelling::{find_shelling, shelling_step_boundary};

use super::anneal::{heuristic_reduce, AnnealConfig};
use super::balanced::{check_coloring, reduce_balanced_2sphere};
use super::report::{Move, Outcome, ReductionReport, ReportStats, Trace};

fn reached() -> ReportStats {
    ReportStats { steps: 0, seed: None, outcome: Outcome::Reached, proposals: 0 }
}

/// Color-preserving flips from the boundary of a simplex to `delta`, read off
/// a shelling of a properly `m`-colored subdivision of the cone over `delta`.
fn colored_sphere_path(delta: &Complex, kappa: &Coloring, m: usize) -> Result<ReductionReport> {
    if delta.num_vertices() == 4 {
        return Trace::new(delta.clone(), Some(kappa.clone())).finish(reached());
    }
    let mut labels = LabelGen::avoiding(delta.vertices().iter());
    let apex = labels.fresh();
    let cone = delta.cone(apex.clone())?;
    let used: BTreeSet<usize> = delta.vertices().iter().filter_map(|v| kappa.get(v)).collect();
    let (ball, coloring, order) = match (0..m).find(|c| !used.contains(c)) {
        Some(free) => {
            let mut k0 = kappa.restrict(delta.vertices().iter());
            k0.set(apex.clone(), free);
            let fixed = Complex::from_facets(delta.facets().cloned().chain([Face::vertex(apex.clone())]));
            let ext = extend_coloring_with(&RelativeComplex::new(cone.clone(), fixed)?, &k0, m, &mut labels)?;
            let order =
                find_shelling(delta, &[])?.ok_or_else(|| Error::Internal("a 2-sphere has no shelling".into()))?;
            let order: Vec<Face> = order.facets.iter().map(|f| f.with(apex.clone())).collect();
            (ext.complex, ext.coloring, order)
        }
        None => {
            let ext = extend_coloring_with(&RelativeComplex::new(cone, delta.clone())?, kappa, m, &mut labels)?;
            let order = find_shelling(&ext.complex, &[])?
                .ok_or_else(|| Error::Internal("no shelling of the colored ball was found".into()))?;
            (ext.complex, ext.coloring, order.facets)
        }
    };
    let first = Complex::from_facets(order[0].ridges());
    let mut trace = Trace::new(first.clone(), Some(coloring.restrict(first.vertices().iter())));
    let mut grown = Complex::from_facets([order[0].clone()]);
    for g in &order[1..] {
        let (next, flip) = shelling_step_boundary(&grown, g)?;
        let colors = flip
            .b
            .vertices()
            .iter()
            .filter(|v| !trace.current().0.has_vertex(v))
            .map(|v| (v.clone(), coloring.get(v).expect("the ball is colored")))
            .collect();
        trace.push(Move::Bistellar { flip, colors })?;
        grown = next;
    }
    if trace.current().0 != *delta || ball.boundary() != *delta {
        return Err(Error::Internal("the shelling walk does not end at the sphere".into()));
    }
    trace.finish(reached())
}

/// Replaces vertex `v` of a simplex boundary by `w` colored `color`:
/// subdivide the facet opposite `v`, then remove `v`.
fn replace_vertex(trace: &mut Trace, v: &VertexId, w: VertexId, color: usize) -> Result<()> {
    let opposite = Face::from_set(trace.current().0.vertices().into_iter().filter(|u| u != v));
    let w_face = Face::vertex(w.clone());
    trace.push(Move::Bistellar {
        flip: FlipMove::new(opposite.clone(), w_face),
        colors: BTreeMap::from([(w, color)]),
    })?;
    trace.push(Move::bistellar(FlipMove::new(Face::vertex(v.clone()), opposite)))
}

/// Color-preserving flips between two colored boundaries of the same simplex
/// dimension, by replacing one vertex at a time: first every vertex whose
/// color the target lacks, then every vertex with the wrong label, going
/// through temporary labels where the wanted one is still in use.
pub(crate) fn simplex_boundary_bridge(trace: &mut Trace, target: &Complex, kt: &Coloring) -> Result<()> {
    let by_color: BTreeMap<usize, VertexId> =
        target.vertices().into_iter().map(|v| (kt.get(&v).expect("target is colored"), v)).collect();
    let (cur, _) = trace.current();
    let mut temps = LabelGen::avoiding(cur.vertices().iter().chain(target.vertices().iter()));
    temps.skip_past(trace.states().iter().flat_map(|(c, _)| c.vertices()).collect::<Vec<_>>().iter());
    let color_of = |t: &Trace, v: &VertexId| t.current().1.as_ref().and_then(|k| k.get(v)).expect("colored");
    let label_for = |t: &Trace, color: usize, temps: &mut LabelGen| {
        let want = &by_color[&color];
        if t.current().0.has_vertex(want) {
            temps.fresh()
        } else {
            want.clone()
        }
    };
    // Colors.
    loop {
        let cur_colors: BTreeSet<usize> = trace.current().0.vertices().iter().map(|v| color_of(trace, v)).collect();
        let Some(v) = trace.current().0.vertices().into_iter().find(|v| !by_color.contains_key(&color_of(trace, v)))
        else {
            break;
        };
        let color = *by_color.keys().find(|c| !cur_colors.contains(c)).expect("a target color is missing");
        let w = label_for(trace, color, &mut temps);
        replace_vertex(trace, &v, w, color)?;
    }
    // Labels.
    for _ in 0..2 {
        for v in trace.current().0.vertices() {
            let color = color_of(trace, &v);
            if by_color[&color] != v {
                let w = label_for(trace, color, &mut temps);
                replace_vertex(trace, &v, w, color)?;
            }
        }
    }
    let (c, k) = trace.current();
    if c != target || k.as_ref().map(|k| k.as_map() != kt.as_map()) != Some(false) {
        return Err(Error::Internal("the bridge does not reach the target".into()));
    }
    Ok(())
}

/// A path of color-preserving bistellar flips from `delta` to `gamma`, both
/// 2-spheres properly colored with `m >= 4` colors.
///
/// Each sphere is reached from the boundary of a simplex by a shelled colored
/// cone; the two simplex boundaries are joined by
/// [`simplex_boundary_bridge`]. Existing vertices never change color.
pub fn colored_connect(
    delta: &Complex,
    kd: &Coloring,
    gamma: &Complex,
    kg: &Coloring,
    m: usize,
) -> Result<ReductionReport> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!("colored connection needs at least 4 colors, got {m}")));
    }
    for c in [delta, gamma] {
        if !is_2_sphere(c) {
            return Err(Error::Precondition("both complexes must be 2-spheres".into()));
        }
    }
    check_coloring(delta, kd, m)?;
    check_coloring(gamma, kg, m)?;
    let with_m = |k: &Coloring| {
        let mut k = k.clone();
        k.set_m(m);
        k
    };
    let (kd, kg) = (with_m(kd), with_m(kg));
    let to_delta = colored_sphere_path(delta, &kd, m)?;
    let to_gamma = colored_sphere_path(gamma, &kg, m)?;
    let mut trace = Trace::new(delta.clone(), Some(kd));
    for mv in to_delta.reversed()?.moves {
        trace.push(mv)?;
    }
    let kt = to_gamma.start_coloring.clone().expect("colored");
    simplex_boundary_bridge(&mut trace, &to_gamma.start, &kt)?;
    for mv in to_gamma.moves {
        trace.push(mv)?;
    }
    trace.finish(reached())
}

/// The (4,4) cross-flip on the star of `v` in a copy of `C_2`: `v` is replaced
/// by `w` with the same link and color.
fn rename_in_octahedron(x: &Complex, kx: &Coloring, v: &VertexId, w: VertexId) -> Result<Move> {
    let (c2, k2) = cross_polytope_boundary(2)?;
    let theta = find_colored_isomorphism(x, kx, &c2, &k2)?
        .ok_or_else(|| Error::Internal("the meeting complex is not a colored octahedron".into()))?;
    let s = theta.apply_vertex(v);
    let template = CrossFlipTemplate::from_ball(2, c2.star(&Face::vertex(s.clone()))?, TemplateOrigin::General)?;
    let back = theta.inverse();
    let embedding =
        Isomorphism { map: template.ball.vertices().into_iter().map(|u| (u.clone(), back.apply_vertex(&u))).collect() };
    let partner = cross_partner(&s).expect("cross-polytope label");
    Ok(Move::Cross { mv: CrossFlipMove { template, embedding, fresh: BTreeMap::from([(partner, w)]) } })
}

/// Cross-flips relabeling the current copy of `C_2` into `target` along a
/// colored isomorphism, through temporary labels where needed.
fn octahedron_bridge(trace: &mut Trace, target: &Complex, kt: &Coloring) -> Result<()> {
    let (x, kx) = trace.current().clone();
    let kx = kx.expect("colored");
    let psi = if x == *target && kx.as_map() == kt.as_map() {
        Isomorphism::identity(x.vertices().iter())
    } else {
        find_colored_isomorphism(&x, &kx, target, kt)?
            .ok_or_else(|| Error::Internal("the two octahedra are not colored-isomorphic".into()))?
    };
    let mut temps = LabelGen::avoiding(x.vertices().iter().chain(target.vertices().iter()));
    let mut pending: Vec<(VertexId, VertexId)> = Vec::new();
    for (v, t) in psi.map.iter().filter(|(v, t)| v != t) {
        let (c, k) = trace.current().clone();
        if c.has_vertex(t) {
            let tmp = temps.fresh();
            trace.push(rename_in_octahedron(&c, k.as_ref().expect("colored"), v, tmp.clone())?)?;
            pending.push((tmp, t.clone()));
        } else {
            trace.push(rename_in_octahedron(&c, k.as_ref().expect("colored"), v, t.clone())?)?;
        }
    }
    for (tmp, t) in pending {
        let (c, k) = trace.current().clone();
        trace.push(rename_in_octahedron(&c, k.as_ref().expect("colored"), &tmp, t)?)?;
    }
    let (c, k) = trace.current();
    if c != target || k.as_ref().map(|k| k.as_map() != kt.as_map()) != Some(false) {
        return Err(Error::Internal("the octahedron bridge does not reach the target".into()));
    }
    Ok(())
}

fn pl_signature(c: &Complex) -> Result<(i64, bool, Option<bool>)> {
    if !is_closed_surface(c) {
        return Err(Error::Precondition("both complexes must be closed surfaces".into()));
    }
    Ok((c.euler_characteristic(), c.is_connected(), orientable(c)))
}

fn balanced_coloring(c: &Complex, k: Option<&Coloring>) -> Result<Coloring> {
    match k {
        Some(k) => {
            check_coloring(c, k, 3)?;
            Ok(k.clone())
        }
        None => find_proper_coloring(c, 3).ok_or_else(|| Error::Precondition("the complex is not balanced".into())),
    }
}

/// Cross-flips from `delta` to `gamma`, two balanced closed surfaces of the same type.
///
/// Spheres are both reduced to `C_2` exactly and the two paths are spliced
/// through a relabeling bridge, so the end is `gamma` with its coloring. For
/// other surfaces both are annealed and the paths are joined at the first
/// pair of colored-isomorphic complexes; the second half is relabeled along
/// that isomorphism, so the end is isomorphic to `gamma`.
pub fn connect_balanced(
    delta: &Complex,
    kd: Option<&Coloring>,
    gamma: &Complex,
    kg: Option<&Coloring>,
    catalog: &[CrossFlipTemplate],
    cfg: &AnnealConfig,
) -> Result<ReductionReport> {
    let (sd, sg) = (pl_signature(delta)?, pl_signature(gamma)?);
    if sd != sg {
        return Err(Error::PlTypeMismatch(format!(
            "Euler characteristic {} vs {}, orientable {:?} vs {:?}",
            sd.0, sg.0, sd.2, sg.2
        )));
    }
    let kd = balanced_coloring(delta, kd)?;
    let kg = balanced_coloring(gamma, kg)?;
    if is_2_sphere(delta) {
        let to_delta = reduce_balanced_2sphere(delta, &kd)?;
        let to_gamma = reduce_balanced_2sphere(gamma, &kg)?;
        let mut trace = Trace::new(delta.clone(), Some(kd));
        for mv in to_delta.reversed()?.moves {
            trace.push(mv)?;
        }
        octahedron_bridge(&mut trace, &to_gamma.start, to_gamma.start_coloring.as_ref().expect("colored"))?;
        for mv in to_gamma.moves {
            trace.push(mv)?;
        }
        return trace.finish(reached());
    }
    meet_in_the_middle(delta, &kd, gamma, &kg, catalog, cfg)
}

fn meet_in_the_middle(
    delta: &Complex,
    kd: &Coloring,
    gamma: &Complex,
    kg: &Coloring,
    catalog: &[CrossFlipTemplate],
    cfg: &AnnealConfig,
) -> Result<ReductionReport> {
    let left = heuristic_reduce(delta, Some(kd), catalog, cfg)?.replay()?;
    let cfg2 = AnnealConfig { seed: cfg.seed.wrapping_add(1), ..cfg.clone() };
    let right_report = heuristic_reduce(gamma, Some(kg), catalog, &cfg2)?;
    let right = right_report.replay()?;
    let key = |(c, k): &(Complex, Option<Coloring>)| canonical_form_colored(c, k.as_ref().expect("colored"));
    let mut seen: HashMap<_, usize> = HashMap::new();
    for (i, s) in left.iter().enumerate() {
        seen.entry(key(s)?).or_insert(i);
    }
    let mut meet = None;
    for (j, s) in right.iter().enumerate() {
        if let Some(&i) = seen.get(&key(s)?) {
            if meet.is_none_or(|(a, b)| i + j < a + b) {
                meet = Some((i, j));
            }
        }
    }
    let (i, j) = meet.ok_or(Error::BudgetExhausted(cfg.budget as u64))?;
    let mut trace = Trace::new(delta.clone(), Some(kd.clone()));
    let left_report = heuristic_reduce(delta, Some(kd), catalog, cfg)?;
    for mv in left_report.moves.into_iter().take(i) {
        trace.push(mv)?;
    }
    // Second half: right[j] back to gamma, relabeled onto the meeting complex.
    let (mx, mk) = trace.current().clone();
    let (rx, rk) = &right[j];
    let psi = find_colored_isomorphism(rx, rk.as_ref().expect("colored"), &mx, mk.as_ref().expect("colored"))?
        .ok_or_else(|| Error::Internal("meeting complexes are not isomorphic".into()))?;
    let mut prefix = right_report.clone();
    prefix.moves.truncate(j);
    prefix.intermediates.truncate(j + 1);
    prefix.certificates.truncate(j);
    prefix.end = rx.clone();
    prefix.end_coloring = rk.clone();
    let back = prefix.reversed()?;
    let mut taken: BTreeSet<VertexId> = psi.map.values().cloned().collect();
    taken.extend(right.iter().take(j + 1).flat_map(|(c, _)| c.vertices()));
    let mut fresh = LabelGen::avoiding(
        taken.iter().chain(trace.states().iter().flat_map(|(c, _)| c.vertices()).collect::<Vec<_>>().iter()),
    );
    let mut rename: BTreeMap<VertexId, VertexId> = psi.map.clone();
    for (c, _) in &right[..=j] {
        for v in c.vertices() {
            rename.entry(v).or_insert_with(|| fresh.fresh());
        }
    }
    for mv in back.moves {
        trace.push(mv.relabel(&|v: &VertexId| rename.get(v).cloned().unwrap_or_else(|| v.clone())))?;
    }
    trace.finish(reached())
}
