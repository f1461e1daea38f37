use crate::coloring::{extend_coloring_with, is_proper, Coloring, RelativeComplex};
use crate::core::classify::is_2_sphere;
use crate::core::generate::cross_polytope_boundary;
use crate::core::{find_colored_isomorphism, Complex, Face, Isomorphism, LabelGen};
use crate::error::{Error, Result};
use crate::flips::{CrossFlipMove, CrossFlipTemplate, TemplateOrigin};
use crate::shelling::{find_shelling, restriction_face, verify_shelling};
use crate::subdivision::diamond;

use super::report::{Move, Outcome, ReductionReport, ReportStats, Trace};

/// Checks that `kappa` properly colors `c` with colors below `m`.
pub(crate) fn check_coloring(c: &Complex, kappa: &Coloring, m: usize) -> Result<()> {
    for v in c.vertices() {
        match kappa.get(&v) {
            None => return Err(Error::Uncolored(v.to_string())),
            Some(col) if col >= m => {
                return Err(Error::Precondition(format!("color {col} of {v} is not below {m}")));
            }
            _ => {}
        }
    }
    if !is_proper(c, kappa)? {
        return Err(Error::Precondition("the coloring is not proper".into()));
    }
    Ok(())
}

/// A certified sequence of cross-flips from a copy of `C_2` to `delta`.
///
/// The cone over `delta` is a 3-ball with boundary `delta`; its apex takes
/// color 3, so the coloring extension is trivial. A shelling `G_1, ..., G_t`
/// of the cone comes from one of `delta`. After the diamond operation, the
/// boundary of `♦(G_1 ∪ ... ∪ G_j)` is the start for `j = 1` and `delta` for
/// `j = t`; step `j` swaps `♦(Γ_j)` for its complement in the cell of `G_j`,
/// where `Γ_j` is where `G_j` meets the earlier facets.
pub fn reduce_balanced_2sphere(delta: &Complex, kappa: &Coloring) -> Result<ReductionReport> {
    if !is_2_sphere(delta) {
        return Err(Error::Precondition("the complex is not a 2-sphere".into()));
    }
    check_coloring(delta, kappa, 3)?;
    let mut labels = LabelGen::avoiding(delta.vertices().iter());
    let apex = labels.fresh();
    let ball = delta.cone(apex.clone())?;
    let mut k0 = kappa.restrict(delta.vertices().iter());
    k0.set(apex.clone(), 3);
    let fixed = Complex::from_facets(delta.facets().cloned().chain([Face::vertex(apex.clone())]));
    let ext = extend_coloring_with(&RelativeComplex::new(ball.clone(), fixed)?, &k0, 4, &mut labels)?;
    if ext.complex != ball {
        return Err(Error::Internal("coloring the cone subdivided it".into()));
    }
    let order = find_shelling(delta, &[])?.ok_or_else(|| Error::Internal("a 2-sphere has no shelling".into()))?;
    let facets: Vec<Face> = order.facets.iter().map(|f| f.with(apex.clone())).collect();
    if !verify_shelling(&ball, &facets)?.is_valid() {
        return Err(Error::Internal("the coned order does not shell the cone".into()));
    }

    let dm = diamond(&ball, &ext.coloring)?;
    let (c2, k2) = cross_polytope_boundary(2)?;
    let first = &facets[0];
    let start = dm.cells[first].clone();
    let mut trace = Trace::new(start.clone(), Some(dm.coloring.restrict(start.vertices().iter())));
    let mut grown = Complex::from_facets([first.clone()]);
    for g in &facets[1..] {
        let r = restriction_face(&grown, g).ok_or_else(|| Error::Internal(format!("{g} is not a shelling step")))?;
        let removed = Complex::from_facets(r.vertices().iter().flat_map(|v| dm.pieces[&g.without(v)].iter().cloned()));
        let cell = &dm.cells[g];
        let psi = find_colored_isomorphism(cell, &dm.coloring.restrict(cell.vertices().iter()), &c2, &k2)?
            .ok_or_else(|| Error::Internal(format!("the cell of {g} is not a colored cross-polytope")))?;
        let back = psi.inverse();
        let template = CrossFlipTemplate::from_ball(2, psi.apply_complex(&removed), TemplateOrigin::Basic)?;
        let embedding = Isomorphism {
            map: template.ball.vertices().into_iter().map(|v| (v.clone(), back.apply_vertex(&v))).collect(),
        };
        let fresh =
            template.interior_complement_vertices().into_iter().map(|v| (v.clone(), back.apply_vertex(&v))).collect();
        trace.push(Move::Cross { mv: CrossFlipMove { template, embedding, fresh } })?;
        grown = Complex::from_facets(grown.facets().cloned().chain([g.clone()]));
    }
    let (end, end_k) = trace.current();
    let colors_match = end_k.as_ref().is_some_and(|k| delta.vertices().iter().all(|v| k.get(v) == kappa.get(v)));
    if end != delta || !colors_match {
        return Err(Error::Internal("the walk does not end at the input".into()));
    }
    trace.finish(ReportStats { steps: 0, seed: None, outcome: Outcome::Reached, proposals: 0 })
}
