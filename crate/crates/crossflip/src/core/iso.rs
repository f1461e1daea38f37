//! Canonical forms, isomorphism tests and induced embeddings.
//!
//! Canonical labeling follows the individualization/refinement scheme: vertex
//! classes are refined by the multiset of class patterns of the facets through
//! each vertex; a non-discrete partition is split by individualizing each
//! vertex of one class in turn. Leaves give labelings; the canonical form is
//! the lexicographically least relabeled facet list. Automorphisms discovered
//! along the way prune sibling branches. The search is exact and fails loudly
//! when it exceeds its node budget.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Complex, Face, VertexId};
use crate::coloring::Coloring;
use crate::error::{Error, Result};

pub const DEFAULT_ISO_BUDGET: u64 = 2_000_000;

/// A bijection between vertex sets, stored as label pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct Isomorphism {
    pub map: BTreeMap<VertexId, VertexId>,
}

impl Isomorphism {
    pub fn identity<'a>(vertices: impl IntoIterator<Item = &'a VertexId>) -> Self {
        Isomorphism { map: vertices.into_iter().map(|v| (v.clone(), v.clone())).collect() }
    }

    pub fn get(&self, v: &VertexId) -> Option<&VertexId> {
        self.map.get(v)
    }

    /// Image of `v`; vertices outside the domain map to themselves.
    pub fn apply_vertex(&self, v: &VertexId) -> VertexId {
        self.map.get(v).cloned().unwrap_or_else(|| v.clone())
    }

    pub fn apply_face(&self, f: &Face) -> Face {
        f.map(|v| self.apply_vertex(v))
    }

    pub fn apply_complex(&self, c: &Complex) -> Complex {
        c.relabel(|v| self.apply_vertex(v))
    }

    pub fn inverse(&self) -> Isomorphism {
        Isomorphism { map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Isomorphism) -> Isomorphism {
        Isomorphism { map: self.map.iter().map(|(a, b)| (a.clone(), other.apply_vertex(b))).collect() }
    }

    pub fn is_injective(&self) -> bool {
        self.map.values().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    /// Whether this map is a bijection `V(a) -> V(b)` carrying faces onto faces.
    pub fn is_isomorphism(&self, a: &Complex, b: &Complex) -> bool {
        let va = a.vertices();
        self.map.keys().cloned().collect::<BTreeSet<_>>() == va
            && self.map.values().cloned().collect::<BTreeSet<_>>() == b.vertices()
            && self.is_injective()
            && self.apply_complex(a) == *b
    }
}

/// A complete isomorphism invariant: equal keys iff isomorphic complexes
/// (and, for colored keys, iff isomorphic by a color-preserving map).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub vertices: usize,
    pub facets: Vec<Vec<u32>>,
    pub colors: Vec<u64>,
}

impl CanonicalKey {
    /// Short stable hex digest of the key.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("key serializes");
        hex_prefix(&Sha256::digest(&bytes), 16)
    }
}

pub(crate) fn hex_prefix(bytes: &[u8], n: usize) -> String {
    bytes.iter().take(n).map(|b| format!("{b:02x}")).collect()
}

/// Stable digest of the labeled complex itself (not an isomorphism invariant).
pub fn labeled_digest(c: &Complex) -> String {
    let bytes = serde_json::to_vec(c).expect("complex serializes");
    hex_prefix(&Sha256::digest(&bytes), 16)
}

struct Indexed {
    labels: Vec<VertexId>,
    facets: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
    init: Vec<u64>,
}

impl Indexed {
    fn new(c: &Complex, colors: Option<&Coloring>) -> Result<Indexed> {
        let labels: Vec<VertexId> = c.vertices().into_iter().collect();
        let idx: HashMap<&VertexId, u32> = labels.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let facets: Vec<Vec<u32>> = c.facets().map(|f| f.vertices().iter().map(|v| idx[v]).collect()).collect();
        let mut incidence = vec![Vec::new(); labels.len()];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                incidence[v as usize].push(i as u32);
            }
        }
        let init = match colors {
            None => vec![0; labels.len()],
            Some(k) => labels
                .iter()
                .map(|v| k.get(v).map(|c| c as u64).ok_or_else(|| Error::Uncolored(v.to_string())))
                .collect::<Result<_>>()?,
        };
        Ok(Indexed { labels, facets, incidence, init })
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn initial_partition(&self) -> Vec<u32> {
        renumber(&self.init)
    }

    /// Refines to the coarsest equitable-style partition finer than `colors`.
    fn refine(&self, colors: &mut Vec<u32>) {
        let mut classes = count_classes(colors);
        loop {
            let mut sigs: Vec<(u32, Vec<Vec<u32>>)> = Vec::with_capacity(self.n());
            for v in 0..self.n() {
                let mut around: Vec<Vec<u32>> = self.incidence[v]
                    .iter()
                    .map(|&f| {
                        let mut p: Vec<u32> = self.facets[f as usize]
                            .iter()
                            .filter(|&&w| w as usize != v)
                            .map(|&w| colors[w as usize])
                            .collect();
                        p.sort_unstable();
                        p
                    })
                    .collect();
                around.sort_unstable();
                sigs.push((colors[v], around));
            }
            let new = renumber(&sigs);
            let k = count_classes(&new);
            *colors = new;
            if k == classes {
                return;
            }
            classes = k;
        }
    }

    fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
        let c = colors[v];
        let raw: Vec<u64> =
            colors.iter().enumerate().map(|(u, &x)| 2 * x as u64 + u64::from(x == c && u != v)).collect();
        renumber(&raw)
    }

    /// Canonically chosen non-singleton class to split: smallest size, then lowest color.
    fn target_cell(colors: &[u32]) -> Option<Vec<usize>> {
        let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        cells.into_values().filter(|c| c.len() > 1).min_by_key(|c| c.len())
    }

    fn certificate(&self, colors: &[u32]) -> CanonicalKey {
        let mut facets: Vec<Vec<u32>> = self
            .facets
            .iter()
            .map(|f| {
                let mut g: Vec<u32> = f.iter().map(|&v| colors[v as usize]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        facets.sort_unstable();
        let mut by_pos = vec![0u64; self.n()];
        for v in 0..self.n() {
            by_pos[colors[v] as usize] = self.init[v];
        }
        CanonicalKey { vertices: self.n(), facets, colors: by_pos }
    }

    /// A label-independent summary of a partition, used to prune non-matching branches.
    fn shape(&self, colors: &[u32]) -> Vec<u32> {
        let mut sizes = vec![0u32; count_classes(colors)];
        for &c in colors {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

fn renumber<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<&T> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).expect("present") as u32).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0)
}

struct CanonSearch<'a> {
    g: &'a Indexed,
    budget: u64,
    nodes: u64,
    best: Option<(CanonicalKey, Vec<u32>)>,
    automorphisms: Vec<Vec<u32>>,
}

impl CanonSearch<'_> {
    fn run(&mut self, colors: Vec<u32>, fixed: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        let Some(cell) = Indexed::target_cell(&colors) else {
            let cert = self.g.certificate(&colors);
            match &self.best {
                None => self.best = Some((cert, colors)),
                Some((b, bcol)) => {
                    if cert == *b {
                        // Same relabeled complex: record the automorphism.
                        let mut inv = vec![0u32; colors.len()];
                        for (v, &p) in colors.iter().enumerate() {
                            inv[p as usize] = v as u32;
                        }
                        let aut: Vec<u32> = bcol.iter().map(|&p| inv[p as usize]).collect();
                        self.automorphisms.push(aut);
                    } else if cert < *b {
                        self.best = Some((cert, colors));
                    }
                }
            }
            return Ok(());
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if self.equivalent_to_explored(v, &explored, fixed) {
                continue;
            }
            let mut child = Indexed::individualize(&colors, v);
            self.g.refine(&mut child);
            fixed.push(v);
            self.run(child, fixed)?;
            fixed.pop();
            explored.push(v);
        }
        Ok(())
    }

    /// Whether `v` lies in the orbit of an explored sibling under the
    /// automorphisms found so far that fix every individualized vertex.
    fn equivalent_to_explored(&self, v: usize, explored: &[usize], fixed: &[usize]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let gens: Vec<&Vec<u32>> =
            self.automorphisms.iter().filter(|a| fixed.iter().all(|&f| a[f] as usize == f)).collect();
        if gens.is_empty() {
            return false;
        }
        let mut orbit: HashSet<usize> = HashSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for a in &gens {
                let w = a[u] as usize;
                if orbit.insert(w) {
                    stack.push(w);
                }
            }
        }
        explored.iter().any(|e| orbit.contains(e))
    }
}

fn canonical_labeling(g: &Indexed, budget: u64) -> Result<(CanonicalKey, Vec<u32>)> {
    let mut colors = g.initial_partition();
    g.refine(&mut colors);
    let mut s = CanonSearch { g, budget, nodes: 0, best: None, automorphisms: Vec::new() };
    s.run(colors, &mut Vec::new())?;
    Ok(s.best.unwrap_or_else(|| (g.certificate(&[]), Vec::new())))
}

/// Canonical form of a complex.
pub fn canonical_form(c: &Complex) -> Result<CanonicalKey> {
    canonical_form_with_budget(c, None, DEFAULT_ISO_BUDGET)
}

/// Canonical form of a colored complex; equal keys iff a color-preserving isomorphism exists.
pub fn canonical_form_colored(c: &Complex, k: &Coloring) -> Result<CanonicalKey> {
    canonical_form_with_budget(c, Some(k), DEFAULT_ISO_BUDGET)
}

pub fn canonical_form_with_budget(c: &Complex, k: Option<&Coloring>, budget: u64) -> Result<CanonicalKey> {
    let g = Indexed::new(c, k)?;
    Ok(canonical_labeling(&g, budget)?.0)
}

/// An isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &Complex, b: &Complex) -> Result<Option<Isomorphism>> {
    find_isomorphism_with(a, None, b, None, DEFAULT_ISO_BUDGET)
}

/// A color-preserving isomorphism `a -> b`, if one exists.
pub fn find_colored_isomorphism(a: &Complex, ka: &Coloring, b: &Complex, kb: &Coloring) -> Result<Option<Isomorphism>> {
    find_isomorphism_with(a, Some(ka), b, Some(kb), DEFAULT_ISO_BUDGET)
}

pub fn find_isomorphism_with(
    a: &Complex,
    ka: Option<&Coloring>,
    b: &Complex,
    kb: Option<&Coloring>,
    budget: u64,
) -> Result<Option<Isomorphism>> {
    if a.num_facets() != b.num_facets() || a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    let ga = Indexed::new(a, ka)?;
    let gb = Indexed::new(b, kb)?;
    if ga.n() != gb.n() {
        return Ok(None);
    }
    let mut init_a = ga.init.clone();
    init_a.sort_unstable();
    let mut init_b = gb.init.clone();
    init_b.sort_unstable();
    if init_a != init_b {
        return Ok(None);
    }
    // Path of first choices through a's tree, with partition shapes per level.
    let mut colors = ga.initial_partition();
    ga.refine(&mut colors);
    let mut shapes = vec![ga.shape(&colors)];
    while let Some(cell) = Indexed::target_cell(&colors) {
        colors = Indexed::individualize(&colors, cell[0]);
        ga.refine(&mut colors);
        shapes.push(ga.shape(&colors));
    }
    let target = ga.certificate(&colors);
    let a_colors = colors;

    let mut nodes = 0u64;
    let mut cb = gb.initial_partition();
    gb.refine(&mut cb);
    // Refinement numbers classes by sorted signatures that involve the
    // initial colors, so corresponding classes get corresponding numbers;
    // we still compare shapes and the final certificate to be safe.
    let found = match_search(&gb, cb, 0, &shapes, &target, budget, &mut nodes)?;
    let Some(b_colors) = found else { return Ok(None) };
    let mut inv = vec![0usize; gb.n()];
    for (v, &p) in b_colors.iter().enumerate() {
        inv[p as usize] = v;
    }
    let map = (0..ga.n()).map(|v| (ga.labels[v].clone(), gb.labels[inv[a_colors[v] as usize]].clone())).collect();
    let iso = Isomorphism { map };
    if !iso.is_isomorphism(a, b) {
        return Err(Error::Internal("isomorphism witness failed verification".into()));
    }
    Ok(Some(iso))
}

fn match_search(
    g: &Indexed,
    colors: Vec<u32>,
    depth: usize,
    shapes: &[Vec<u32>],
    target: &CanonicalKey,
    budget: u64,
    nodes: &mut u64,
) -> Result<Option<Vec<u32>>> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExhausted(budget));
    }
    if depth >= shapes.len() || g.shape(&colors) != shapes[depth] {
        return Ok(None);
    }
    let Some(cell) = Indexed::target_cell(&colors) else {
        return Ok((g.certificate(&colors) == *target).then_some(colors));
    };
    for &v in &cell {
        let mut child = Indexed::individualize(&colors, v);
        g.refine(&mut child);
        if let Some(found) = match_search(g, child, depth + 1, shapes, target, budget, nodes)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Vertex injections `φ` with `φ(D)` an induced subcomplex of `Δ` isomorphic to `D` via `φ`.
///
/// Order is deterministic (vertices of `D` in breadth-first order from the
/// least label, candidates in label order); at most `limit` results.
pub fn find_induced_embeddings(d: &Complex, delta: &Complex, limit: Option<usize>) -> Vec<Isomorphism> {
    let limit = limit.unwrap_or(usize::MAX);
    if limit == 0 || d.num_vertices() > delta.num_vertices() {
        return Vec::new();
    }
    let dv: Vec<VertexId> = bfs_order(d);
    let tv: Vec<VertexId> = delta.vertices().into_iter().collect();
    let tidx: HashMap<&VertexId, usize> = tv.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let didx: HashMap<&VertexId, usize> = dv.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = tv.len();
    let mut tadj = vec![false; n * n];
    let mut tnbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, nb) in delta.adjacency() {
        let i = tidx[&v];
        for w in nb {
            let j = tidx[&w];
            tadj[i * n + j] = true;
            tnbrs[i].push(j);
        }
    }
    let m = dv.len();
    let mut dadj = vec![false; m * m];
    for (v, nb) in d.adjacency() {
        for w in nb {
            dadj[didx[&v] * m + didx[&w]] = true;
        }
    }
    // Facets of D become checkable once their last vertex (in order) is placed.
    let mut facets_at: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m];
    for f in d.facets() {
        let ids: Vec<usize> = f.vertices().iter().map(|v| didx[v]).collect();
        if let Some(&last) = ids.iter().max() {
            facets_at[last].push(ids);
        }
    }
    let mut out = Vec::new();
    let mut assign: Vec<usize> = Vec::with_capacity(m);
    let mut used = vec![false; n];
    let ctx =
        EmbedCtx { d, delta, dv: &dv, tv: &tv, tadj: &tadj, tnbrs: &tnbrs, dadj: &dadj, facets_at: &facets_at, n, m };
    ctx.extend(&mut assign, &mut used, &mut out, limit);
    out
}

struct EmbedCtx<'a> {
    d: &'a Complex,
    delta: &'a Complex,
    dv: &'a [VertexId],
    tv: &'a [VertexId],
    tadj: &'a [bool],
    tnbrs: &'a [Vec<usize>],
    dadj: &'a [bool],
    facets_at: &'a [Vec<Vec<usize>>],
    n: usize,
    m: usize,
}

impl EmbedCtx<'_> {
    fn extend(&self, assign: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Isomorphism>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let k = assign.len();
        if k == self.m {
            let iso =
                Isomorphism { map: (0..self.m).map(|i| (self.dv[i].clone(), self.tv[assign[i]].clone())).collect() };
            let img = iso.apply_complex(self.d);
            let w: BTreeSet<VertexId> = assign.iter().map(|&j| self.tv[j].clone()).collect();
            if img.is_subcomplex_of(self.delta) && self.delta.induced_unchecked(&w) == img {
                out.push(iso);
            }
            return;
        }
        let anchor = (0..k).find(|&i| self.dadj[k * self.m + i]);
        let mut candidates: Vec<usize> = match anchor {
            Some(i) => self.tnbrs[assign[i]].clone(),
            None => (0..self.n).collect(),
        };
        candidates.sort_unstable();
        for c in candidates {
            if used[c] {
                continue;
            }
            if (0..k).any(|i| self.dadj[k * self.m + i] != self.tadj[c * self.n + assign[i]]) {
                continue;
            }
            assign.push(c);
            let faces_ok = self.facets_at[k].iter().all(|f| {
                let img = Face::from_set(f.iter().map(|&i| self.tv[assign[i]].clone()));
                self.delta.contains(&img)
            });
            if faces_ok {
                used[c] = true;
                self.extend(assign, used, out, limit);
                used[c] = false;
            }
            assign.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
}

fn bfs_order(c: &Complex) -> Vec<VertexId> {
    let adj = c.adjacency();
    let mut order = Vec::new();
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for start in c.vertices() {
        if !seen.insert(start.clone()) {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v.clone());
            if let Some(nb) = adj.get(&v) {
                for w in nb {
                    if seen.insert(w.clone()) {
                        queue.push_back(w.clone());
                    }
                }
            }
        }
    }
    order
}

/// Distinct image complexes among a list of embeddings of `d`
/// (the count of embeddings up to automorphisms of `d`).
// The face cache does not take part in ordering.
#[allow(clippy::mutable_key_type)]
pub fn distinct_images(d: &Complex, embeddings: &[Isomorphism]) -> BTreeSet<Complex> {
    embeddings.iter().map(|e| e.apply_complex(d)).collect()
}
