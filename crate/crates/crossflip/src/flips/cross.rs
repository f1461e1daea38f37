use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::core::classify::{is_closed_pseudomanifold, is_cycle};
use crate::core::generate::{cross_partner, cross_polytope_boundary};
use crate::core::{canonical_form, find_induced_embeddings, Complex, Face, Isomorphism, LabelGen, VertexId};
use crate::error::{Error, Result};
use crate::shelling::{find_shelling, is_co_shellable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateOrigin {
    /// The diamond image of a ball in the boundary of a simplex.
    Basic,
    General,
}

/// A ball `D ⊂ C_d` together with `C_d \ D`, both over the standard `x_i, y_i` labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossFlipTemplate {
    pub dim: usize,
    pub ball: Complex,
    pub complement: Complex,
    /// Digest of the canonical form of `ball`.
    pub key: String,
    pub origin: TemplateOrigin,
}

impl CrossFlipTemplate {
    /// Builds the template for a set of facets of `C_dim`. Does not check shellability; see [`Self::certify`].
    pub fn from_ball(dim: usize, ball: Complex, origin: TemplateOrigin) -> Result<Self> {
        let (cd, _) = cross_polytope_boundary(dim)?;
        if ball.is_void() || ball.dim() != cd.dim() || !ball.is_pure() {
            return Err(Error::Precondition(format!("template ball must be pure of dimension {dim}")));
        }
        if !ball.facets().all(|f| cd.has_facet(f)) {
            return Err(Error::NotSubcomplex(format!("template ball is not a subcomplex of C_{dim}")));
        }
        if ball.num_facets() == cd.num_facets() {
            return Err(Error::Precondition("template ball must be a proper subcomplex".into()));
        }
        let complement = cd.facet_complement(&ball);
        let key = canonical_form(&ball)?.digest();
        Ok(CrossFlipTemplate { dim, ball, complement, key, origin })
    }

    /// The template of the inverse move: ball and complement swapped.
    pub fn inverse(&self) -> Result<Self> {
        let key = canonical_form(&self.complement)?.digest();
        Ok(CrossFlipTemplate {
            dim: self.dim,
            ball: self.complement.clone(),
            complement: self.ball.clone(),
            key,
            origin: self.origin,
        })
    }

    /// `(#facets of D, #facets of the complement)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.ball.num_facets(), self.complement.num_facets())
    }

    /// Vertices of the complement not on `∂D`; they receive fresh labels when the move is applied.
    pub fn interior_complement_vertices(&self) -> BTreeSet<VertexId> {
        let bv = self.ball.vertices();
        self.complement.vertices().into_iter().filter(|v| !bv.contains(v)).collect()
    }

    /// Checks that `D` is shellable and co-shellable and that `∂D = ∂(C_d \ D)`.
    pub fn certify(&self) -> Result<()> {
        let (cd, _) = cross_polytope_boundary(self.dim)?;
        if find_shelling(&self.ball, &[])?.is_none() {
            return Err(Error::Precondition(format!("template {} is not shellable", self.key)));
        }
        if !is_co_shellable(&cd, &self.ball)? {
            return Err(Error::Precondition(format!("template {} is not co-shellable", self.key)));
        }
        if self.ball.boundary() != self.complement.boundary() {
            return Err(Error::Internal(format!("template {} has mismatched boundaries", self.key)));
        }
        Ok(())
    }
}

/// A template placed in a complex: `embedding` sends `D` onto an induced
/// subcomplex, and `fresh` names the interior vertices of the complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossFlipMove {
    pub template: CrossFlipTemplate,
    pub embedding: Isomorphism,
    pub fresh: BTreeMap<VertexId, VertexId>,
}

impl CrossFlipMove {
    /// Places `template` via `embedding`, drawing labels for the new vertices from `labels`.
    pub fn new(template: CrossFlipTemplate, embedding: Isomorphism, labels: &mut LabelGen) -> Self {
        let fresh = template.interior_complement_vertices().into_iter().map(|v| (v, labels.fresh())).collect();
        CrossFlipMove { template, embedding, fresh }
    }

    /// The removed subcomplex `φ(D)`.
    pub fn image(&self) -> Complex {
        self.embedding.apply_complex(&self.template.ball)
    }

    /// Where a complement vertex lands in the result.
    fn place(&self, v: &VertexId) -> Option<VertexId> {
        self.embedding.get(v).or_else(|| self.fresh.get(v)).cloned()
    }

    /// The inserted subcomplex.
    pub fn replacement(&self) -> Result<Complex> {
        let mut out = Vec::new();
        for f in self.template.complement.facets() {
            let vs: Option<Vec<VertexId>> = f.vertices().iter().map(|v| self.place(v)).collect();
            let vs = vs.ok_or_else(|| Error::InapplicableCrossFlip("a complement vertex has no label".into()))?;
            out.push(Face::from_set(vs));
        }
        Ok(Complex::from_facets(out))
    }

    /// The move undoing this one on the result; interior vertices of `D` get their old labels back.
    pub fn inverse(&self) -> Result<Self> {
        let template = self.template.inverse()?;
        let mut map = BTreeMap::new();
        for v in self.template.complement.vertices() {
            let w = self.place(&v).ok_or_else(|| Error::InapplicableCrossFlip(format!("vertex {v} is unplaced")))?;
            map.insert(v, w);
        }
        let cv = self.template.complement.vertices();
        let fresh = self
            .template
            .ball
            .vertices()
            .into_iter()
            .filter(|v| !cv.contains(v))
            .map(|v| {
                let w = self.embedding.apply_vertex(&v);
                (v, w)
            })
            .collect();
        Ok(CrossFlipMove { template, embedding: Isomorphism { map }, fresh })
    }
}

/// Replaces `φ(D)` by the complement, glued along `φ(∂D)`.
///
/// With a coloring, a new vertex `v` gets the color of `φ(v')` where `v'` is
/// the cross-polytope partner of `v` (`x_i <-> y_i`); the result is checked
/// to be proper.
pub fn apply_cross_flip(c: &Complex, mv: &CrossFlipMove, k: Option<&Coloring>) -> Result<(Complex, Option<Coloring>)> {
    let bad = |m: String| Error::InapplicableCrossFlip(m);
    let t = &mv.template;
    let ball_v = t.ball.vertices();
    if ball_v.iter().any(|v| mv.embedding.get(v).is_none()) || mv.embedding.map.len() != ball_v.len() {
        return Err(bad("embedding domain differs from the ball's vertices".into()));
    }
    if !mv.embedding.is_injective() {
        return Err(bad("embedding is not injective".into()));
    }
    let image = mv.image();
    if !image.facets().all(|f| c.has_facet(f)) {
        return Err(bad("image of the ball is not made of facets of the complex".into()));
    }
    if !c.is_induced(&image) {
        return Err(bad("image of the ball is not an induced subcomplex".into()));
    }
    let interior = t.interior_complement_vertices();
    if mv.fresh.keys().cloned().collect::<BTreeSet<_>>() != interior {
        return Err(bad("fresh labels must name exactly the interior vertices of the complement".into()));
    }
    if t.dim <= 2 {
        for v in image.vertices() {
            let lk = c.link(&Face::vertex(v.clone()))?;
            let ok = if t.dim == 2 { is_cycle(&lk) } else { is_closed_pseudomanifold(&lk) && lk.dim() == Some(0) };
            if !ok {
                return Err(bad(format!("the complex is not a manifold at {v}")));
            }
        }
    }
    let remaining = c.facet_complement(&image);
    let kept_v = remaining.vertices();
    let mut seen = BTreeSet::new();
    for w in mv.fresh.values() {
        if kept_v.contains(w) || !seen.insert(w.clone()) || mv.embedding.map.values().any(|u| u == w) {
            return Err(Error::LabelCollision(w.to_string()));
        }
    }
    let replacement = mv.replacement()?;
    let out = Complex::from_facets(remaining.facets().cloned().chain(replacement.facets().cloned()));
    let coloring = match k {
        None => None,
        Some(k) => {
            let out_v = out.vertices();
            let mut nk = k.restrict(out_v.iter().filter(|v| !mv.fresh.values().any(|w| w == *v)));
            for (u, w) in &mv.fresh {
                let partner = cross_partner(u)
                    .filter(|p| ball_v.contains(p))
                    .ok_or_else(|| bad(format!("{u} has no partner in the ball")))?;
                let src = mv.embedding.apply_vertex(&partner);
                let col = k.get(&src).ok_or_else(|| Error::Uncolored(src.to_string()))?;
                nk.set(w.clone(), col);
            }
            nk.set_m(k.m());
            for f in replacement.facets() {
                for (a, b) in pairs(f) {
                    if nk.get(a) == nk.get(b) {
                        return Err(Error::ImproperColoring(Face::from_set([a.clone(), b.clone()])));
                    }
                }
            }
            Some(nk)
        }
    };
    Ok((out, coloring))
}

fn pairs(f: &Face) -> impl Iterator<Item = (&VertexId, &VertexId)> {
    let v = f.vertices();
    (0..v.len()).flat_map(move |i| (i + 1..v.len()).map(move |j| (&v[i], &v[j])))
}

/// All placements of the catalog's templates as induced subcomplexes, at most
/// `limit` per template. Fresh labels avoid every label of `c`.
pub fn available_cross_flips(c: &Complex, catalog: &[CrossFlipTemplate], limit: Option<usize>) -> Vec<CrossFlipMove> {
    let mut out = Vec::new();
    for t in catalog {
        for emb in find_induced_embeddings(&t.ball, c, limit) {
            let mut labels = LabelGen::avoiding(c.vertices().iter());
            out.push(CrossFlipMove::new(t.clone(), emb, &mut labels));
        }
    }
    out
}
