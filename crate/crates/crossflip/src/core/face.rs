use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::VertexId;
use crate::error::{Error, Result};

/// A face: a sorted, duplicate-free set of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Default)]
#[serde(transparent)]
pub struct Face(Vec<VertexId>);

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<VertexId>::deserialize(d)?;
        Face::new(v).map_err(serde::de::Error::custom)
    }
}

impl Face {
    /// Builds a face, rejecting repeated vertices.
    pub fn new<I, V>(vertices: I) -> Result<Face>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let mut v: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        v.sort();
        if v.windows(2).any(|w| w[0] == w[1]) {
            let shown = v.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(" ");
            return Err(Error::MalformedFace(format!("{{{shown}}}")));
        }
        Ok(Face(v))
    }

    /// Builds a face from vertices that may repeat; duplicates collapse.
    pub fn from_set<I, V>(vertices: I) -> Face
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let mut v: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        Face(v)
    }

    pub fn empty() -> Face {
        Face(Vec::new())
    }

    pub fn vertex(v: impl Into<VertexId>) -> Face {
        Face(vec![v.into()])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<VertexId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|F| - 1`; the empty face has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| !other.contains(v))
    }

    pub fn union(&self, other: &Face) -> Face {
        Face::from_set(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().filter(|v| other.contains(v)).cloned().collect())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().filter(|v| !other.contains(v)).cloned().collect())
    }

    pub fn without(&self, v: &VertexId) -> Face {
        Face(self.0.iter().filter(|w| *w != v).cloned().collect())
    }

    pub fn with(&self, v: VertexId) -> Face {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Face(out)
    }

    /// All subsets, including the empty face and the face itself.
    pub fn subsets(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        assert!(n < 64, "face too large to enumerate subsets");
        (0u64..(1u64 << n))
            .map(move |mask| Face((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i].clone()).collect()))
    }

    /// The codimension-one faces `F \ v`.
    pub fn ridges(&self) -> impl Iterator<Item = Face> + '_ {
        self.0.iter().map(move |v| self.without(v))
    }

    pub fn map<F: Fn(&VertexId) -> VertexId>(&self, f: F) -> Face {
        Face::from_set(self.0.iter().map(f))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(v.as_str())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> IntoIterator for &'a Face {
    type Item = &'a VertexId;
    type IntoIter = std::slice::Iter<'a, VertexId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &[&str]) -> Face {
        Face::new(s.iter().copied()).unwrap()
    }

    #[test]
    fn construction_sorts_and_rejects_duplicates() {
        assert_eq!(f(&["b", "a"]).vertices(), f(&["a", "b"]).vertices());
        assert!(Face::new(["a", "b", "a"]).is_err());
        assert_eq!(Face::empty().dim(), -1);
        assert_eq!(f(&["a", "b", "c"]).dim(), 2);
    }

    #[test]
    fn subset_relations() {
        assert!(f(&["a", "c"]).is_subset(&f(&["a", "b", "c"])));
        assert!(!f(&["a", "d"]).is_subset(&f(&["a", "b", "c"])));
        assert!(Face::empty().is_subset(&f(&["a"])));
        assert_eq!(f(&["a", "b", "c"]).subsets().count(), 8);
        assert_eq!(f(&["a", "b"]).union(&f(&["b", "c"])), f(&["a", "b", "c"]));
        assert_eq!(f(&["a", "b"]).difference(&f(&["b", "c"])), f(&["a"]));
    }
}
