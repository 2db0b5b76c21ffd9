//! Finite 2-structures.
//!
//! A 2-structure on `n` vertices assigns a label id in `0..k` to every ordered
//! pair `(v, w)` with `v != w`. Two pairs are equivalent exactly when they carry
//! the same label, so label ids stand for the equivalence classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};

pub type Label = u16;

/// Stored on the diagonal; never observable through the public API.
const DIAGONAL: Label = Label::MAX;

/// Default vertex cap for inputs read from files or the CLI.
pub const DEFAULT_MAX_N: usize = 24;

/// The ordered label pair `((v,w), (w,v))` of two distinct vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Label; 2]", into = "[Label; 2]")]
pub struct PairClass {
    pub forward: Label,
    pub backward: Label,
}

impl PairClass {
    pub const fn new(forward: Label, backward: Label) -> Self {
        PairClass { forward, backward }
    }

    pub const fn reversed(self) -> Self {
        PairClass { forward: self.backward, backward: self.forward }
    }

    pub const fn is_symmetric(self) -> bool {
        self.forward == self.backward
    }
}

impl From<[Label; 2]> for PairClass {
    fn from(a: [Label; 2]) -> Self {
        PairClass::new(a[0], a[1])
    }
}

impl From<PairClass> for [Label; 2] {
    fn from(p: PairClass) -> Self {
        [p.forward, p.backward]
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.forward, self.backward)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "LabelTable", try_from = "LabelTable")]
pub struct TwoStructure {
    n: usize,
    k: usize,
    labels: Vec<Label>,
    // same[v * n + r]: vertices x != v with [v,x] == [v,r]. Lets a splitter test
    // against a candidate module run as one word operation.
    same: Vec<u64>,
}

/// Serialized form: the label table with `null` on the diagonal.
#[derive(Serialize, Deserialize)]
struct LabelTable {
    n: usize,
    k: usize,
    rows: Vec<Vec<Option<Label>>>,
}

impl From<TwoStructure> for LabelTable {
    fn from(s: TwoStructure) -> Self {
        LabelTable { n: s.n, k: s.k, rows: s.to_matrix() }
    }
}

impl TryFrom<LabelTable> for TwoStructure {
    type Error = Error;

    fn try_from(t: LabelTable) -> Result<Self> {
        TwoStructure::from_matrix(t.n, t.k, &t.rows)
    }
}

impl TwoStructure {
    /// Builds a structure from a label function on ordered off-diagonal pairs.
    ///
    /// Panics if `n` exceeds [`MAX_VERTICES`] or a label is out of range; the
    /// fallible constructors validate before calling this.
    pub fn from_fn(n: usize, k: usize, mut label: impl FnMut(usize, usize) -> Label) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        let mut labels = vec![DIAGONAL; n * n];
        for v in 0..n {
            for w in 0..n {
                if v != w {
                    let l = label(v, w);
                    assert!((l as usize) < k, "label {l} out of range for k={k}");
                    labels[v * n + w] = l;
                }
            }
        }
        Self::from_parts(n, k, labels)
    }

    fn from_parts(n: usize, k: usize, labels: Vec<Label>) -> Self {
        let mut same = vec![0u64; n * n];
        for v in 0..n {
            for r in 0..n {
                if r == v {
                    continue;
                }
                let out = labels[v * n + r];
                let inc = labels[r * n + v];
                let mut bits = 0u64;
                for x in 0..n {
                    if x != v && labels[v * n + x] == out && labels[x * n + v] == inc {
                        bits |= 1 << x;
                    }
                }
                same[v * n + r] = bits;
            }
        }
        TwoStructure { n, k, labels, same }
    }

    /// The empty structure.
    pub fn empty() -> Self {
        Self::from_parts(0, 1, Vec::new())
    }

    /// Builds a structure from an `n x n` table whose diagonal is `None`.
    pub fn from_matrix(n: usize, k: usize, rows: &[Vec<Option<Label>>]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::SizeLimitExceeded { what: "vertex count", size: n, limit: MAX_VERTICES });
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch(format!("{} rows for n={n}", rows.len())));
        }
        if n >= 2 && k == 0 {
            return Err(Error::DimensionMismatch("k must be at least 1".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries", row.len())));
            }
            for (j, cell) in row.iter().enumerate() {
                match (i == j, cell) {
                    (true, Some(_)) => return Err(Error::DiagonalLabeled(i)),
                    (false, None) => return Err(Error::MissingLabel(i, j)),
                    (false, Some(l)) if *l as usize >= k => {
                        return Err(Error::LabelOutOfRange { row: i, col: j, label: *l, k })
                    }
                    _ => {}
                }
            }
        }
        Ok(Self::from_fn(n, k.max(1), |v, w| rows[v][w].unwrap()))
    }

    /// Identifies a graph (symmetric, label 1 on edges) or a tournament (label 1
    /// on arcs, 0 on reversed arcs) with a 2-structure over two labels.
    pub fn from_graph(n: usize, edges: &[(usize, usize)], as_tournament: bool) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::SizeLimitExceeded { what: "vertex count", size: n, limit: MAX_VERTICES });
        }
        let mut adj = vec![false; n * n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            if as_tournament {
                if adj[u * n + v] || adj[v * n + u] {
                    return Err(Error::NotATournament(format!("pair {{{u},{v}}} given twice")));
                }
                adj[u * n + v] = true;
            } else {
                adj[u * n + v] = true;
                adj[v * n + u] = true;
            }
        }
        if as_tournament {
            for u in 0..n {
                for v in u + 1..n {
                    if !adj[u * n + v] && !adj[v * n + u] {
                        return Err(Error::NotATournament(format!("no arc between {u} and {v}")));
                    }
                }
            }
        }
        Ok(Self::from_fn(n, 2, |v, w| adj[v * n + w] as Label))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Label of the ordered pair `(v, w)`. `v != w` is a caller invariant.
    #[inline]
    pub fn label(&self, v: usize, w: usize) -> Label {
        debug_assert!(v != w && v < self.n && w < self.n);
        self.labels[v * self.n + w]
    }

    #[inline]
    pub fn class(&self, v: usize, w: usize) -> PairClass {
        PairClass::new(self.label(v, w), self.label(w, v))
    }

    pub fn pair_class(&self, v: usize, w: usize) -> Result<PairClass> {
        for x in [v, w] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if v == w {
            return Err(Error::SameVertex(v));
        }
        Ok(self.class(v, w))
    }

    /// Vertices `x != v` that `v` sees exactly as it sees `r`, in both directions.
    #[inline]
    pub(crate) fn same_as(&self, v: usize, r: usize) -> VertexSet {
        VertexSet::from_bits(self.same[v * self.n + r])
    }

    /// Does `v` (outside `m`) distinguish two members of `m`?
    #[inline]
    pub(crate) fn splits(&self, v: usize, m: VertexSet) -> bool {
        match m.min() {
            Some(r) => !(m - self.same_as(v, r)).is_empty(),
            None => false,
        }
    }

    /// The induced substructure on `w`, relabelled to `0..|w|` in increasing id
    /// order, and the table mapping new ids back to the old ones.
    pub fn induced(&self, w: VertexSet) -> Result<(TwoStructure, Vec<usize>)> {
        if let Some(bad) = w.max().filter(|&m| m >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.n });
        }
        let ids = w.to_vec();
        let sub = TwoStructure::from_fn(ids.len(), self.k, |a, b| self.label(ids[a], ids[b]));
        Ok((sub, ids))
    }

    /// `σ - w`.
    pub fn remove(&self, w: VertexSet) -> Result<(TwoStructure, Vec<usize>)> {
        self.induced(self.vertices() - w)
    }

    /// Label ids that actually occur.
    pub fn used_labels(&self) -> Vec<Label> {
        let mut seen = vec![false; self.k];
        for v in 0..self.n {
            for w in 0..self.n {
                if v != w {
                    seen[self.label(v, w) as usize] = true;
                }
            }
        }
        (0..self.k as Label).filter(|&l| seen[l as usize]).collect()
    }

    /// Per-pair equality that ignores the declared label count.
    pub fn same_labels(&self, other: &TwoStructure) -> bool {
        self.n == other.n && self.labels == other.labels
    }

    /// `true` when every pair class is symmetric and only labels 0/1 occur.
    pub fn is_graph(&self) -> bool {
        (0..self.n).all(|v| {
            (v + 1..self.n).all(|w| self.label(v, w) == self.label(w, v) && self.label(v, w) <= 1)
        })
    }

    /// `true` when every pair class is `(0,1)` or `(1,0)`.
    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|v| {
            (v + 1..self.n).all(|w| {
                let c = self.class(v, w);
                c == PairClass::new(0, 1) || c == PairClass::new(1, 0)
            })
        })
    }

    /// Same labels with a different declared label count.
    pub fn with_k(&self, k: usize) -> Result<TwoStructure> {
        if let Some(&l) = self.used_labels().last() {
            if l as usize >= k {
                return Err(Error::LabelOutOfRange { row: 0, col: 0, label: l, k });
            }
        }
        Ok(TwoStructure { k, ..self.clone() })
    }

    /// Rows of the label table with `None` on the diagonal.
    pub fn to_matrix(&self) -> Vec<Vec<Option<Label>>> {
        (0..self.n)
            .map(|v| (0..self.n).map(|w| (v != w).then(|| self.label(v, w))).collect())
            .collect()
    }
}

impl fmt::Debug for TwoStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TwoStructure(n={}, k={})", self.n, self.k)?;
        for v in 0..self.n {
            for w in 0..self.n {
                if v == w {
                    write!(f, " -")?;
                } else {
                    write!(f, " {}", self.label(v, w))?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> TwoStructure {
        TwoStructure::from_graph(4, &[(0, 1), (1, 2), (2, 3)], false).unwrap()
    }

    #[test]
    fn smallest_matrix() {
        let s = TwoStructure::from_matrix(2, 2, &[vec![None, Some(0)], vec![Some(1), None]]).unwrap();
        assert_eq!((s.n(), s.k()), (2, 2));
        assert_eq!(s.class(0, 1), PairClass::new(0, 1));
    }

    #[test]
    fn matrix_errors() {
        let bad = TwoStructure::from_matrix(2, 2, &[vec![None, Some(2)], vec![Some(1), None]]);
        assert!(matches!(bad, Err(Error::LabelOutOfRange { label: 2, .. })));
        let diag = TwoStructure::from_matrix(2, 2, &[vec![Some(0), Some(0)], vec![Some(1), None]]);
        assert_eq!(diag, Err(Error::DiagonalLabeled(0)));
        let short = TwoStructure::from_matrix(2, 2, &[vec![None, Some(0)]]);
        assert!(matches!(short, Err(Error::DimensionMismatch(_))));
        let missing = TwoStructure::from_matrix(2, 2, &[vec![None, None], vec![Some(0), None]]);
        assert_eq!(missing, Err(Error::MissingLabel(0, 1)));
    }

    #[test]
    fn constant_structure() {
        let rows: Vec<Vec<Option<Label>>> =
            (0..3).map(|i| (0..3).map(|j| (i != j).then_some(0)).collect()).collect();
        let s = TwoStructure::from_matrix(3, 1, &rows).unwrap();
        for v in 0..3 {
            for w in 0..3 {
                if v != w {
                    assert_eq!(s.pair_class(v, w).unwrap(), PairClass::new(0, 0));
                }
            }
        }
    }

    #[test]
    fn graph_and_tournament_identification() {
        let s = p4();
        assert_eq!(s.pair_class(0, 1).unwrap(), PairClass::new(1, 1));
        assert_eq!(s.pair_class(0, 2).unwrap(), PairClass::new(0, 0));
        assert_eq!(s.pair_class(1, 2).unwrap(), PairClass::new(1, 1));
        assert_eq!(s.pair_class(0, 3).unwrap(), PairClass::new(0, 0));
        assert!(s.is_graph());

        let t = TwoStructure::from_graph(3, &[(0, 1), (1, 2), (2, 0)], true).unwrap();
        assert_eq!(t.pair_class(0, 1).unwrap(), PairClass::new(1, 0));
        assert!(t.is_tournament());

        assert!(matches!(
            TwoStructure::from_graph(3, &[(0, 1), (1, 2)], true),
            Err(Error::NotATournament(_))
        ));
        assert!(matches!(
            TwoStructure::from_graph(3, &[(0, 1), (1, 0), (1, 2), (2, 0)], true),
            Err(Error::NotATournament(_))
        ));
        assert_eq!(TwoStructure::from_graph(3, &[(0, 3)], false), Err(Error::InvalidEdge(0, 3)));
        assert_eq!(TwoStructure::from_graph(3, &[(1, 1)], false), Err(Error::InvalidEdge(1, 1)));
    }

    #[test]
    fn linear_order_pair_class() {
        // (v,w) gets label 1 when v < w.
        let s = TwoStructure::from_fn(3, 2, |v, w| (v < w) as Label);
        assert_eq!(s.pair_class(0, 2).unwrap(), PairClass::new(1, 0));
    }

    #[test]
    fn pair_class_errors() {
        let s = p4();
        assert_eq!(s.pair_class(1, 1), Err(Error::SameVertex(1)));
        assert!(matches!(s.pair_class(0, 9), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn induced_identity_and_path() {
        let s = p4();
        let (same, ids) = s.induced(s.vertices()).unwrap();
        assert_eq!(same, s);
        assert_eq!(ids, vec![0, 1, 2, 3]);

        let (p3, ids) = s.induced([0, 1, 2].iter().collect()).unwrap();
        assert_eq!(p3, TwoStructure::from_graph(3, &[(0, 1), (1, 2)], false).unwrap());
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn same_as_table() {
        let s = p4();
        // 0 sees 2 and 3 identically (non-edges) and 1 differently.
        assert_eq!(s.same_as(0, 2), [2, 3].iter().collect());
        assert!(s.splits(0, [1, 2].iter().collect()));
        assert!(!s.splits(0, [2, 3].iter().collect()));
    }
}
