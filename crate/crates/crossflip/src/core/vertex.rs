use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label.
///
/// Labels are ordered "naturally": maximal digit runs compare as numbers, so
/// `x2 < x10`. Ties fall back to plain byte order, which keeps the order total
/// and consistent with equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    /// Builds a label, rejecting empty strings, whitespace and a leading `#`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() || s.starts_with('#') || s.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        Ok(VertexId(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i.to_string())
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (a, b) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].is_ascii_digit() && b[j].is_ascii_digit() {
            let si = i;
            while i < a.len() && a[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let da = trim_zeros(&a[si..i]);
            let db = trim_zeros(&b[sj..j]);
            let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            if a[i] != b[j] {
                return a[i].cmp(&b[j]);
            }
            i += 1;
            j += 1;
        }
    }
    (a.len() - i).cmp(&(b.len() - j))
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().position(|&c| c != b'0').unwrap_or(s.len());
    &s[k..]
}

/// Source of fresh vertex labels: a reserved prefix plus a monotone counter.
///
/// The counter never goes backwards, so a label handed out once is never
/// handed out again by the same generator, even after its vertex is removed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelGen {
    prefix: String,
    next: u64,
}

pub const FRESH_PREFIX: &str = "~";

impl Default for LabelGen {
    fn default() -> Self {
        LabelGen { prefix: FRESH_PREFIX.to_string(), next: 0 }
    }
}

impl LabelGen {
    pub fn with_prefix(prefix: &str) -> Self {
        LabelGen { prefix: prefix.to_string(), next: 0 }
    }

    /// A generator whose labels avoid every label in `taken`.
    pub fn avoiding<'a>(taken: impl IntoIterator<Item = &'a VertexId>) -> Self {
        let mut g = LabelGen::default();
        g.skip_past(taken);
        g
    }

    /// Advances the counter beyond every label of the form `prefix<number>` in `taken`.
    pub fn skip_past<'a>(&mut self, taken: impl IntoIterator<Item = &'a VertexId>) {
        for v in taken {
            if let Some(rest) = v.as_str().strip_prefix(&self.prefix) {
                if let Ok(k) = rest.parse::<u64>() {
                    self.next = self.next.max(k + 1);
                }
            }
        }
    }

    pub fn fresh(&mut self) -> VertexId {
        let v = VertexId(format!("{}{}", self.prefix, self.next));
        self.next += 1;
        v
    }

    pub fn peek(&self) -> VertexId {
        VertexId(format!("{}{}", self.prefix, self.next))
    }
}
