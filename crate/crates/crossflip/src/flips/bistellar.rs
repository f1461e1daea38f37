use serde::{Deserialize, Serialize};

use crate::core::{Complex, Face, LabelGen};
use crate::error::{Error, Result};

/// The bistellar flip replacing `Ā * ∂B̄` by `∂Ā * B̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlipMove {
    pub a: Face,
    pub b: Face,
}

impl FlipMove {
    pub fn new(a: Face, b: Face) -> Self {
        FlipMove { a, b }
    }

    /// The flip undoing this one.
    pub fn inverse(&self) -> FlipMove {
        FlipMove { a: self.b.clone(), b: self.a.clone() }
    }

    /// `(|A|, |B|)`; a `1 -> 3` flip on a surface is `(3, 1)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.a.len(), self.b.len())
    }
}

/// `∂B̄`, which is `{∅}` when `B` is a single vertex.
fn simplex_boundary(b: &Face) -> Complex {
    Complex::from_facets(b.ridges())
}

/// Checks the flip conditions `A ∈ Δ`, `B ∉ Δ`, `A ∩ B = ∅` and `lk(A) = ∂B̄`.
pub fn check_bistellar_flip(c: &Complex, mv: &FlipMove) -> Result<()> {
    let fail = |reason: &str| Error::InapplicableFlip { a: mv.a.clone(), b: mv.b.clone(), reason: reason.into() };
    if mv.a.is_empty() || mv.b.is_empty() {
        return Err(fail("A and B must be nonempty"));
    }
    if !mv.a.is_disjoint(&mv.b) {
        return Err(fail("A and B intersect"));
    }
    if !c.contains(&mv.a) {
        return Err(fail("A is not a face"));
    }
    if c.contains(&mv.b) {
        return Err(fail("B is already a face"));
    }
    if c.link(&mv.a)? != simplex_boundary(&mv.b) {
        return Err(fail("the link of A is not the boundary of B"));
    }
    Ok(())
}

/// `(Δ \ Ā * ∂B̄) ∪ (∂Ā * B̄)`.
pub fn apply_bistellar_flip(c: &Complex, mv: &FlipMove) -> Result<Complex> {
    check_bistellar_flip(c, mv)?;
    let mut out: Vec<Face> = c.facets().filter(|g| !mv.a.is_subset(g)).cloned().collect();
    out.extend(mv.a.vertices().iter().map(|v| mv.a.without(v).union(&mv.b)));
    Ok(Complex::from_facets(out))
}

/// Every applicable flip, in face order. For a facet `A` the new vertex gets
/// the first label of the default fresh generator not used in `c`.
pub fn available_bistellar_flips(c: &Complex) -> Vec<FlipMove> {
    let fresh = LabelGen::avoiding(c.vertices().iter()).peek();
    let faces = c.faces();
    let mut out = Vec::new();
    for a in faces.iter().filter(|f| !f.is_empty()) {
        let lk = c.link(a).expect("face of the complex");
        let b = if lk.vertices().is_empty() { Face::vertex(fresh.clone()) } else { Face::from_set(lk.vertices()) };
        if !faces.contains(&b) && lk == simplex_boundary(&b) {
            out.push(FlipMove::new(a.clone(), b));
        }
    }
    out
}
