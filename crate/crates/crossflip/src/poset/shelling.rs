use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{ElemId, PseudoCobordism, SimplicialPoset};
use crate::core::Face;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeVerdict {
    /// Restriction face of every position.
    Valid(Vec<Face>),
    Violation {
        position: usize,
    },
}

impl RelativeVerdict {
    pub fn into_restrictions(self) -> Option<Vec<Face>> {
        match self {
            RelativeVerdict::Valid(r) => Some(r),
            RelativeVerdict::Violation { .. } => None,
        }
    }
}

/// Vertex criterion on the Boolean interval below a cell, given which of its
/// elements are already present. Returns the restriction as a local mask.
fn interval_step(interval: &[ElemId], present: impl Fn(ElemId) -> bool) -> Option<usize> {
    let full = interval.len() - 1;
    let width = full.count_ones() as usize;
    let r = (0..width).filter(|&i| present(interval[full ^ 1 << i])).fold(0, |r, i| r | 1 << i);
    (0..=full).all(|g| present(interval[g]) == (g & r != r)).then_some(r)
}

fn mask_face(p: &SimplicialPoset, cell: ElemId, mask: usize) -> Face {
    let vs = &p.element(cell).vertices;
    Face::from_set((0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i].clone()))
}

/// Checks that `order` shells `(p, q)`: each cell meets the ideal generated by
/// `q` and the earlier cells in the boundary of its interval minus `[r, F]`.
pub fn relative_shelling_verify(
    p: &SimplicialPoset,
    q: &BTreeSet<ElemId>,
    order: &[ElemId],
) -> Result<RelativeVerdict> {
    if !p.is_ideal(q) {
        return Err(Error::InvalidParameter("the relative part must be an order ideal".into()));
    }
    let facets: BTreeSet<ElemId> = p.maximal_elements().into_iter().filter(|e| !q.contains(e)).collect();
    let given: BTreeSet<ElemId> = order.iter().copied().collect();
    if given.len() != order.len() || given != facets {
        return Err(Error::InvalidParameter("order is not a permutation of the relative facets".into()));
    }
    let mut present = vec![false; p.len()];
    for &e in q {
        present[e] = true;
    }
    let mut out = Vec::with_capacity(order.len());
    for (j, &cell) in order.iter().enumerate() {
        let iv = p.lower_interval(cell);
        let Some(r) = interval_step(&iv, |e| present[e]) else {
            return Ok(RelativeVerdict::Violation { position: j });
        };
        out.push(mask_face(p, cell, r));
        for e in iv {
            present[e] = true;
        }
    }
    Ok(RelativeVerdict::Valid(out))
}

/// An order of the top cells shelling the cobordism relative to its left end,
/// whose reverse shells it relative to the right end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidirectionalShelling {
    pub order: Vec<ElemId>,
    /// `B_j`: restriction faces of the forward shelling.
    pub forward: Vec<Face>,
    /// `A_j`: restriction faces of the backward shelling, listed in forward order.
    pub backward: Vec<Face>,
}

/// Top cells and, for every element, the top cells above it.
struct Tops {
    cells: Vec<ElemId>,
    above: Vec<Vec<usize>>,
    intervals: Vec<Vec<ElemId>>,
}

impl Tops {
    fn new(cob: &PseudoCobordism) -> Self {
        let p = &cob.omega;
        let cells: Vec<ElemId> = p.elements_of_rank(cob.dim + 2).collect();
        let mut above = vec![Vec::new(); p.len()];
        let intervals: Vec<Vec<ElemId>> = cells.iter().map(|&c| p.lower_interval(c)).collect();
        for (t, iv) in intervals.iter().enumerate() {
            for &e in iv {
                above[e].push(t);
            }
        }
        Tops { cells, above, intervals }
    }

    /// `(B, A)` masks for placing cell `t` right after the cells in `used`.
    fn step(&self, left: &[bool], right: &[bool], used: &[bool], t: usize) -> Option<(usize, usize)> {
        let iv = &self.intervals[t];
        let fwd = interval_step(iv, |e| left[e] || self.above[e].iter().any(|&s| used[s]))?;
        let bwd = interval_step(iv, |e| right[e] || self.above[e].iter().any(|&s| s != t && !used[s]))?;
        Some((fwd, bwd))
    }
}

fn end_flags(cob: &PseudoCobordism) -> (Vec<bool>, Vec<bool>) {
    let mut left = vec![false; cob.omega.len()];
    let mut right = vec![false; cob.omega.len()];
    for &e in &cob.left {
        left[e] = true;
    }
    for &e in &cob.right {
        right[e] = true;
    }
    (left, right)
}

/// Checks a candidate order of the top cells in both directions.
pub fn verify_bidirectional(cob: &PseudoCobordism, order: &[ElemId]) -> Result<Option<BidirectionalShelling>> {
    let tops = Tops::new(cob);
    let index: std::collections::HashMap<ElemId, usize> = tops.cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut seen = BTreeSet::new();
    for c in order {
        if !index.contains_key(c) || !seen.insert(*c) {
            return Err(Error::InvalidParameter(format!("{c} is not a top cell or is repeated")));
        }
    }
    if seen.len() != tops.cells.len() {
        return Err(Error::InvalidParameter("order misses top cells".into()));
    }
    let (left, right) = end_flags(cob);
    let mut used = vec![false; tops.cells.len()];
    let mut fwd = Vec::new();
    let mut bwd = Vec::new();
    for &c in order {
        let t = index[&c];
        let Some((b, a)) = tops.step(&left, &right, &used, t) else { return Ok(None) };
        fwd.push(mask_face(&cob.omega, c, b));
        bwd.push(mask_face(&cob.omega, c, a));
        used[t] = true;
    }
    if !covers_everything(cob, &tops, &left) || !covers_everything(cob, &tops, &right) {
        return Ok(None);
    }
    Ok(Some(BidirectionalShelling { order: order.to_vec(), forward: fwd, backward: bwd }))
}

/// Every element lies in the end or below a top cell.
fn covers_everything(cob: &PseudoCobordism, tops: &Tops, end: &[bool]) -> bool {
    (0..cob.omega.len()).all(|e| end[e] || !tops.above[e].is_empty())
}

struct Search<'a> {
    tops: &'a Tops,
    left: Vec<bool>,
    right: Vec<bool>,
    failed: HashSet<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn dfs(&mut self, used: &mut Vec<bool>, order: &mut Vec<usize>) -> Result<bool> {
        let n = self.tops.cells.len();
        if order.len() == n {
            return Ok(true);
        }
        if self.failed.contains(used) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        for t in 0..n {
            if used[t] || self.tops.step(&self.left, &self.right, used, t).is_none() {
                continue;
            }
            used[t] = true;
            order.push(t);
            if self.dfs(used, order)? {
                return Ok(true);
            }
            order.pop();
            used[t] = false;
        }
        self.failed.insert(used.clone());
        Ok(false)
    }
}

/// Exact search for a bidirectional shelling; a stored witness that verifies is returned directly.
pub fn find_bidirectional_shelling(cob: &PseudoCobordism, budget: u64) -> Result<Option<BidirectionalShelling>> {
    if let Some(w) = &cob.witness {
        if let Some(bs) = verify_bidirectional(cob, w)? {
            return Ok(Some(bs));
        }
    }
    let tops = Tops::new(cob);
    let (left, right) = end_flags(cob);
    if !covers_everything(cob, &tops, &left) || !covers_everything(cob, &tops, &right) {
        return Ok(None);
    }
    let mut search = Search { tops: &tops, left, right, failed: HashSet::new(), nodes: 0, budget };
    let mut used = vec![false; tops.cells.len()];
    let mut order = Vec::new();
    if !search.dfs(&mut used, &mut order)? {
        return Ok(None);
    }
    let order: Vec<ElemId> = order.into_iter().map(|t| tops.cells[t]).collect();
    verify_bidirectional(cob, &order)
}
