use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Face, LabelGen, VertexId};
use crate::error::{Error, Result};

/// Largest face count for which the full face set is enumerated and cached.
pub const FACE_CACHE_LIMIT: u64 = 1 << 20;

/// A finite simplicial complex stored by its facets.
///
/// Membership is answered by subset tests against the facets. The full face
/// set is computed lazily on first use and shared between clones; values are
/// never mutated after construction, so the cache is never stale.
#[derive(Clone, Default)]
pub struct Complex {
    facets: BTreeSet<Face>,
    faces: OnceLock<Arc<BTreeSet<Face>>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for Complex {}

impl PartialOrd for Complex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Complex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.facets.cmp(&other.facets)
    }
}

impl std::hash::Hash for Complex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.facets.hash(state)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.facets.iter()).finish()
    }
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.facets.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let facets = Vec::<Face>::deserialize(d)?;
        Ok(Complex::from_facets(facets))
    }
}

/// Face counts `f_{-1}, f_0, ..., f_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    /// `f_{i}` for `i >= -1`; zero beyond the top dimension.
    pub fn get(&self, i: isize) -> u64 {
        self.0.get((i + 1) as usize).copied().unwrap_or(0)
    }

    /// Alternating sum `f_0 - f_1 + f_2 - ...`.
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().skip(1).enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }
}

impl Complex {
    /// Keeps the inclusion-maximal faces of the input.
    pub fn from_facets<I: IntoIterator<Item = Face>>(faces: I) -> Complex {
        let mut by_size: Vec<Face> = faces.into_iter().collect();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        by_size.dedup();
        let mut kept: Vec<Face> = Vec::new();
        let mut index: HashMap<&VertexId, Vec<usize>> = HashMap::new();
        for f in &by_size {
            let dominated = match f.vertices().first() {
                None => !kept.is_empty(),
                Some(v0) => index.get(v0).map(|ids| ids.iter().any(|&i| f.is_subset(&kept[i]))).unwrap_or(false),
            };
            if !dominated {
                let id = kept.len();
                kept.push(f.clone());
                for v in f.vertices() {
                    index.entry(v).or_default().push(id);
                }
            }
        }
        drop(index);
        Complex { facets: kept.into_iter().collect(), faces: OnceLock::new() }
    }

    /// Parses facets given as label lists; a repeated vertex is an error.
    pub fn from_labels<I, F, S>(faces: I) -> Result<Complex>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = S>,
        S: Into<VertexId>,
    {
        let faces = faces.into_iter().map(Face::new).collect::<Result<Vec<_>>>()?;
        Ok(Complex::from_facets(faces))
    }

    /// The complex with no faces at all.
    pub fn void() -> Complex {
        Complex::default()
    }

    pub fn simplex(face: Face) -> Complex {
        Complex::from_facets([face])
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension, or `None` for the void complex. `{∅}` has dimension -1.
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(Face::dim).max()
    }

    pub fn facets(&self) -> impl ExactSizeIterator<Item = &Face> + DoubleEndedIterator + Clone {
        self.facets.iter()
    }

    pub fn facet_set(&self) -> &BTreeSet<Face> {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn has_facet(&self, f: &Face) -> bool {
        self.facets.contains(f)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.facets.iter().flat_map(|f| f.vertices().iter().cloned()).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices().len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.facets.iter().any(|f| f.contains(v))
    }

    pub fn contains(&self, face: &Face) -> bool {
        if let Some(faces) = self.faces.get() {
            return faces.contains(face);
        }
        self.facets.iter().any(|f| face.is_subset(f))
    }

    pub fn is_pure(&self) -> bool {
        let mut dims = self.facets.iter().map(Face::dim);
        match dims.next() {
            None => true,
            Some(d) => dims.all(|e| e == d),
        }
    }

    /// Every face, including the empty face when the complex is not void.
    ///
    /// Panics if the face count exceeds [`FACE_CACHE_LIMIT`]; use
    /// [`Complex::f_vector`] for counts on large complexes.
    pub fn faces(&self) -> Arc<BTreeSet<Face>> {
        self.faces
            .get_or_init(|| {
                let mut all = BTreeSet::new();
                for f in &self.facets {
                    for g in f.subsets() {
                        all.insert(g);
                    }
                    assert!(all.len() as u64 <= FACE_CACHE_LIMIT, "complex too large for full face enumeration");
                }
                Arc::new(all)
            })
            .clone()
    }

    /// Faces of dimension `k`, sorted.
    pub fn faces_of_dim(&self, k: isize) -> Vec<Face> {
        if k < -1 {
            return Vec::new();
        }
        let size = (k + 1) as usize;
        let mut out: BTreeSet<Face> = BTreeSet::new();
        for f in &self.facets {
            if f.len() >= size {
                for c in itertools::Itertools::combinations(f.vertices().iter().cloned(), size) {
                    out.insert(Face::from_set(c));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn edges(&self) -> Vec<Face> {
        self.faces_of_dim(1)
    }

    /// Exact face numbers, computed by counting distinct subsets per size.
    pub fn f_vector(&self) -> FVector {
        let Some(d) = self.dim() else {
            return FVector(Vec::new());
        };
        let mut counts = vec![0u64; (d + 2) as usize];
        counts[0] = 1;
        for k in 0..=d {
            counts[(k + 1) as usize] = self.faces_of_dim(k).len() as u64;
        }
        FVector(counts)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    fn require(&self, f: &Face) -> Result<()> {
        if self.contains(f) {
            Ok(())
        } else {
            Err(Error::FaceNotInComplex(f.clone()))
        }
    }

    /// `lk(F) = {G ∈ Δ : F ∩ G = ∅, F ∪ G ∈ Δ}`.
    pub fn link(&self, f: &Face) -> Result<Complex> {
        self.require(f)?;
        Ok(Complex::from_facets(self.facets.iter().filter(|g| f.is_subset(g)).map(|g| g.difference(f))))
    }

    /// The closed star `F̄ * lk(F)`: every facet containing `F`, with its faces.
    pub fn star(&self, f: &Face) -> Result<Complex> {
        self.require(f)?;
        Ok(Complex::from_facets(self.facets.iter().filter(|g| f.is_subset(g)).cloned()))
    }

    /// Facets containing `f`.
    pub fn facets_containing<'a>(&'a self, f: &'a Face) -> impl Iterator<Item = &'a Face> + 'a {
        self.facets.iter().filter(move |g| f.is_subset(g))
    }

    /// `{G ∈ Δ : F ⊄ G}`; deleting an absent face is the identity.
    pub fn delete_face(&self, f: &Face) -> Complex {
        if f.is_empty() {
            return Complex::void();
        }
        let mut out = Vec::with_capacity(self.facets.len());
        for g in &self.facets {
            if f.is_subset(g) {
                for v in f.vertices() {
                    out.push(g.without(v));
                }
            } else {
                out.push(g.clone());
            }
        }
        Complex::from_facets(out)
    }

    /// Deletes a vertex together with every face containing it.
    pub fn delete_vertex(&self, v: &VertexId) -> Complex {
        self.delete_face(&Face::vertex(v.clone()))
    }

    /// Join with a complex on a disjoint vertex set.
    pub fn join(&self, other: &Complex) -> Result<Complex> {
        let mine = self.vertices();
        let shared: Vec<String> =
            other.vertices().into_iter().filter(|v| mine.contains(v)).map(|v| v.to_string()).collect();
        if !shared.is_empty() {
            return Err(Error::OverlappingLabels(shared.join(" ")));
        }
        Ok(self.join_unchecked(other))
    }

    fn join_unchecked(&self, other: &Complex) -> Complex {
        let mut out = Vec::new();
        for f in &self.facets {
            for g in &other.facets {
                out.push(f.union(g));
            }
        }
        Complex::from_facets(out)
    }

    /// Join after renaming every vertex of `other` that clashes with this
    /// complex; returns the renaming that was applied.
    pub fn join_relabeled(&self, other: &Complex, labels: &mut LabelGen) -> (Complex, BTreeMap<VertexId, VertexId>) {
        let mine = self.vertices();
        labels.skip_past(mine.iter());
        labels.skip_past(other.vertices().iter());
        let mut map = BTreeMap::new();
        for v in other.vertices() {
            if mine.contains(&v) {
                map.insert(v.clone(), labels.fresh());
            }
        }
        let renamed = other.relabel(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()));
        (self.join_unchecked(&renamed), map)
    }

    /// `apex * Δ`.
    pub fn cone(&self, apex: VertexId) -> Result<Complex> {
        if self.has_vertex(&apex) {
            return Err(Error::LabelCollision(apex.to_string()));
        }
        if self.is_void() {
            return Ok(Complex::simplex(Face::vertex(apex)));
        }
        Ok(Complex::from_facets(self.facets.iter().map(|f| f.with(apex.clone()))))
    }

    /// `Δ_W = {F ∈ Δ : F ⊆ W}`.
    pub fn induced(&self, w: &BTreeSet<VertexId>) -> Result<Complex> {
        let verts = self.vertices();
        if let Some(v) = w.iter().find(|v| !verts.contains(*v)) {
            return Err(Error::VertexNotInComplex(v.to_string()));
        }
        Ok(self.induced_unchecked(w))
    }

    pub(crate) fn induced_unchecked(&self, w: &BTreeSet<VertexId>) -> Complex {
        Complex::from_facets(
            self.facets.iter().map(|f| Face::from_set(f.vertices().iter().filter(|v| w.contains(*v)).cloned())),
        )
    }

    /// Whether every face of `d` is a face of this complex.
    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }

    /// Whether `d` is a subcomplex equal to `Δ_{V(d)}`.
    pub fn is_induced(&self, d: &Complex) -> bool {
        if !d.is_subcomplex_of(self) {
            return false;
        }
        let w = d.vertices();
        let ind = self.induced_unchecked(&w);
        ind == *d || (d.is_void() && w.is_empty())
    }

    pub fn skeleton(&self, k: isize) -> Complex {
        if k < -1 {
            return Complex::void();
        }
        let size = (k + 1) as usize;
        let mut out = Vec::new();
        for f in &self.facets {
            if f.len() <= size {
                out.push(f.clone());
            } else {
                for c in itertools::Itertools::combinations(f.vertices().iter().cloned(), size) {
                    out.push(Face::from_set(c));
                }
            }
        }
        Complex::from_facets(out)
    }

    /// Codimension-one faces lying in exactly one facet, for a pure complex.
    pub fn boundary(&self) -> Complex {
        let mut count: BTreeMap<Face, usize> = BTreeMap::new();
        for f in &self.facets {
            for r in f.ridges() {
                *count.entry(r).or_default() += 1;
            }
        }
        let ridges: Vec<Face> = count.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        if ridges.is_empty() {
            Complex::void()
        } else {
            Complex::from_facets(ridges)
        }
    }

    /// Number of facets containing each codimension-one face.
    pub fn ridge_degrees(&self) -> BTreeMap<Face, usize> {
        let mut count: BTreeMap<Face, usize> = BTreeMap::new();
        let Some(d) = self.dim() else { return count };
        for f in self.facets.iter().filter(|f| f.dim() == d) {
            for r in f.ridges() {
                *count.entry(r).or_default() += 1;
            }
        }
        count
    }

    pub fn relabel<F: Fn(&VertexId) -> VertexId>(&self, f: F) -> Complex {
        Complex::from_facets(self.facets.iter().map(|g| g.map(&f)))
    }

    pub fn relabel_map(&self, map: &BTreeMap<VertexId, VertexId>) -> Complex {
        self.relabel(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
    }

    pub fn union(&self, other: &Complex) -> Complex {
        Complex::from_facets(self.facets.iter().chain(other.facets.iter()).cloned())
    }

    /// The pure complex generated by the facets of `self` that are not facets of `d`.
    pub fn facet_complement(&self, d: &Complex) -> Complex {
        Complex::from_facets(self.facets.iter().filter(|f| !d.facets.contains(*f)).cloned())
    }

    /// Connected components of the 1-skeleton, as vertex sets.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let verts: Vec<VertexId> = self.vertices().into_iter().collect();
        let idx: HashMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in &self.facets {
            let vs = f.vertices();
            for w in vs.windows(2) {
                let (a, b) = (find(&mut parent, idx[&w[0]]), find(&mut parent, idx[&w[1]]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for (i, v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().insert(v.clone());
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Neighbours of each vertex in the 1-skeleton.
    pub fn adjacency(&self) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for f in &self.facets {
            for v in f.vertices() {
                let e = adj.entry(v.clone()).or_default();
                for w in f.vertices() {
                    if w != v {
                        e.insert(w.clone());
                    }
                }
            }
        }
        adj
    }
}
