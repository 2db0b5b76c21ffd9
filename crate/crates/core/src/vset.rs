//! Fixed-width vertex sets.
//!
//! Vertices are dense ids `0..n` with `n <= 64`, so a set is one `u64` word.
//! Every exhaustive loop in the crate (closures, subset enumeration, the
//! outside graph) runs on these words.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Hard upper bound on the number of vertices a [`VertexSet`] can hold.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn pair(v: usize, w: usize) -> Self {
        Self::singleton(v) | Self::singleton(w)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        self | Self::singleton(v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Least element.
    #[inline]
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    #[inline]
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement relative to `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0) & Self::full(n)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of `v` among the members, in increasing order.
    pub fn rank(self, v: usize) -> usize {
        (self.0 & ((1u64 << v) - 1)).count_ones() as usize
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident, $op:tt) => {
        impl $tr for VertexSet {
            type Output = VertexSet;
            #[inline]
            fn $f(self, rhs: VertexSet) -> VertexSet {
                VertexSet(self.0 $op rhs.0)
            }
        }
        impl $atr for VertexSet {
            #[inline]
            fn $af(&mut self, rhs: VertexSet) {
                self.0 = self.0 $op rhs.0;
            }
        }
    };
}

binop!(BitOr, bitor, BitOrAssign, bitor_assign, |);
binop!(BitAnd, bitand, BitAndAssign, bitand_assign, &);

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl SubAssign for VertexSet {
    #[inline]
    fn sub_assign(&mut self, rhs: VertexSet) {
        self.0 &= !rhs.0;
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as a sorted list of ids.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = ids.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex id {bad} out of range")));
        }
        Ok(ids.into_iter().collect())
    }
}

/// All `k`-subsets of `members`, in lexicographic order of their sorted id lists.
pub fn subsets_of_size(members: VertexSet, k: usize) -> impl Iterator<Item = VertexSet> {
    use itertools::Itertools;
    members
        .to_vec()
        .into_iter()
        .combinations(k)
        .map(|c| c.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: VertexSet = [0, 2, 5].iter().collect();
        assert_eq!(a.len(), 3);
        assert_eq!(a.min(), Some(0));
        assert_eq!(a.max(), Some(5));
        assert!(a.contains(2) && !a.contains(1));
        assert_eq!(a.complement(6).to_vec(), vec![1, 3, 4]);
        assert_eq!(a.rank(5), 2);
        assert_eq!(format!("{a}"), "{0,2,5}");
        assert_eq!(VertexSet::full(64).len(), 64);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let s: Vec<_> = subsets_of_size(VertexSet::full(4), 2).map(|s| s.to_vec()).collect();
        assert_eq!(
            s,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets_of_size(VertexSet::full(10), 5).count(), 252);
    }

    #[test]
    fn serde_round_trip() {
        let a: VertexSet = [1, 3].iter().collect();
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, "[1,3]");
        assert_eq!(serde_json::from_str::<VertexSet>(&j).unwrap(), a);
        assert!(serde_json::from_str::<VertexSet>("[64]").is_err());
    }
}
