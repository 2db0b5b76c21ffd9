//! Modules, primality, criticality and the primality graph.
//!
//! Most functions come in two forms: one on the whole structure and an `_in`
//! form that works on the substructure induced by a vertex set without
//! materialising it. Witnesses are always reported in the caller's ids.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;
use crate::structure::TwoStructure;
use crate::vset::VertexSet;

/// Default vertex cap for [`enumerate_modules`].
pub const ORACLE_MAX_N: usize = 16;

pub type PrimalityGraph = Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "module", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Primality {
    Prime,
    /// Fewer than three vertices.
    TooSmall,
    /// A nontrivial module.
    Module(VertexSet),
}

impl Primality {
    pub fn is_prime(self) -> bool {
        self == Primality::Prime
    }

    pub fn witness(self) -> Option<VertexSet> {
        match self {
            Primality::Module(m) => Some(m),
            _ => None,
        }
    }
}

/// Checks the module condition within `domain`. Returns the least splitter `v`
/// together with `x = min(m)` and the least `y` in `m` that `v` tells apart from `x`.
pub fn module_violation_in(s: &TwoStructure, domain: VertexSet, m: VertexSet) -> Option<(usize, usize, usize)> {
    let x = m.min()?;
    for v in domain - m {
        for y in m {
            if s.label(x, v) != s.label(y, v) || s.label(v, x) != s.label(v, y) {
                return Some((x, y, v));
            }
        }
    }
    None
}

pub fn module_violation(s: &TwoStructure, m: VertexSet) -> Option<(usize, usize, usize)> {
    module_violation_in(s, s.vertices(), m)
}

pub fn is_module_in(s: &TwoStructure, domain: VertexSet, m: VertexSet) -> bool {
    module_violation_in(s, domain, m).is_none()
}

pub fn is_module(s: &TwoStructure, m: VertexSet) -> bool {
    is_module_in(s, s.vertices(), m)
}

/// Smallest module of `s[domain]` containing `seed`.
pub fn minimal_module_in(s: &TwoStructure, domain: VertexSet, seed: VertexSet) -> VertexSet {
    let mut m = seed;
    loop {
        let mut add = VertexSet::EMPTY;
        for v in domain - m {
            if s.splits(v, m) {
                add.insert(v);
            }
        }
        if add.is_empty() {
            return m;
        }
        m |= add;
    }
}

pub fn minimal_module_containing(s: &TwoStructure, seed: VertexSet) -> VertexSet {
    minimal_module_in(s, s.vertices(), seed)
}

pub fn primality_in(s: &TwoStructure, domain: VertexSet) -> Primality {
    if domain.len() < 3 {
        return Primality::TooSmall;
    }
    let ids = domain.to_vec();
    for (i, &u) in ids.iter().enumerate() {
        for &v in &ids[i + 1..] {
            let c = minimal_module_in(s, domain, VertexSet::pair(u, v));
            if c != domain {
                return Primality::Module(c);
            }
        }
    }
    Primality::Prime
}

pub fn primality(s: &TwoStructure) -> Primality {
    primality_in(s, s.vertices())
}

#[inline]
pub fn is_prime_in(s: &TwoStructure, domain: VertexSet) -> bool {
    primality_in(s, domain).is_prime()
}

pub fn is_prime(s: &TwoStructure) -> bool {
    is_prime_in(s, s.vertices())
}

/// All modules, by brute force over every subset, in increasing bitmask order.
pub fn enumerate_modules_capped(s: &TwoStructure, cap: usize) -> Result<Vec<VertexSet>> {
    if s.n() > cap {
        return Err(Error::SizeLimitExceeded { what: "module enumeration", size: s.n(), limit: cap });
    }
    Ok((0..1u64 << s.n()).map(VertexSet::from_bits).filter(|&m| is_module(s, m)).collect())
}

pub fn enumerate_modules(s: &TwoStructure) -> Result<Vec<VertexSet>> {
    enumerate_modules_capped(s, ORACLE_MAX_N)
}

pub fn is_trivial_module(m: VertexSet, domain: VertexSet) -> bool {
    m.len() <= 1 || m == domain
}

/// The unique nontrivial module of `s[domain]`, if there is exactly one.
pub fn unique_nontrivial_module_in(s: &TwoStructure, domain: VertexSet) -> Option<VertexSet> {
    // Every nontrivial module contains the closure of one of its pairs, so the
    // module is unique exactly when all proper pair closures coincide.
    let ids = domain.to_vec();
    let mut found: Option<VertexSet> = None;
    for (i, &u) in ids.iter().enumerate() {
        for &v in &ids[i + 1..] {
            let c = minimal_module_in(s, domain, VertexSet::pair(u, v));
            if c != domain {
                match found {
                    None => found = Some(c),
                    Some(m) if m != c => return None,
                    _ => {}
                }
            }
        }
    }
    found
}

/// Vertices `v` of `domain` with `s[domain - v]` not prime. Requires `s[domain]` prime.
pub fn critical_vertices_in(s: &TwoStructure, domain: VertexSet) -> Result<VertexSet> {
    if !is_prime_in(s, domain) {
        return Err(Error::NotPrime);
    }
    let ids = domain.to_vec();
    Ok(par::filter_map(&ids, |&v| (!is_prime_in(s, domain.without(v))).then_some(v)).into_iter().collect())
}

pub fn critical_vertices(s: &TwoStructure) -> Result<VertexSet> {
    critical_vertices_in(s, s.vertices())
}

pub fn is_w_critical_in(s: &TwoStructure, domain: VertexSet, w: VertexSet) -> Result<bool> {
    if !is_prime_in(s, domain) {
        return Err(Error::NotPrime);
    }
    let ids = (w & domain).to_vec();
    Ok(par::all(&ids, |&v| !is_prime_in(s, domain.without(v))))
}

pub fn is_w_critical(s: &TwoStructure, w: VertexSet) -> Result<bool> {
    is_w_critical_in(s, s.vertices(), w)
}

pub fn is_critical(s: &TwoStructure) -> Result<bool> {
    is_w_critical(s, s.vertices())
}

/// Pairs `{v,w}` of `domain` with `s[domain - {v,w}]` prime, as a graph on the
/// ids of `s`. Requires `s[domain]` prime.
pub fn primality_graph_in(s: &TwoStructure, domain: VertexSet) -> Result<PrimalityGraph> {
    if !is_prime_in(s, domain) {
        return Err(Error::NotPrime);
    }
    let ids = domain.to_vec();
    let pairs: Vec<(usize, usize)> = ids
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| ids[i + 1..].iter().map(move |&v| (u, v)))
        .collect();
    let edges = par::filter_map(&pairs, |&(u, v)| {
        is_prime_in(s, domain - VertexSet::pair(u, v)).then_some((u, v))
    });
    let mut g = Graph::new(s.n());
    for (u, v) in edges {
        g.add_edge(u, v);
    }
    Ok(g)
}

pub fn primality_graph(s: &TwoStructure) -> Result<PrimalityGraph> {
    primality_graph_in(s, s.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> TwoStructure {
        TwoStructure::from_graph(n, e, false).unwrap()
    }

    fn p4() -> TwoStructure {
        graph(4, &[(0, 1), (1, 2), (2, 3)])
    }

    fn c4() -> TwoStructure {
        graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    #[test]
    fn module_checks() {
        assert!(is_module(&c4(), set(&[0, 2])));
        assert_eq!(module_violation(&p4(), set(&[1, 2])), Some((1, 2, 0)));
        for m in [VertexSet::EMPTY, set(&[2]), VertexSet::full(4)] {
            assert!(is_module(&p4(), m));
        }
    }

    #[test]
    fn closures() {
        assert_eq!(minimal_module_containing(&c4(), set(&[0])), set(&[0]));
        assert_eq!(minimal_module_containing(&c4(), set(&[0, 1])), VertexSet::full(4));
        assert_eq!(minimal_module_containing(&p4(), set(&[1, 2])), VertexSet::full(4));
    }

    #[test]
    fn primality_witnesses() {
        assert_eq!(primality(&p4()), Primality::Prime);
        assert_eq!(primality(&c4()), Primality::Module(set(&[0, 2])));
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(primality(&k3), Primality::Module(set(&[0, 1])));
        assert_eq!(primality(&graph(2, &[(0, 1)])), Primality::TooSmall);
    }

    #[test]
    fn module_enumeration() {
        let trivial = [0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b1111];
        let got: Vec<u64> = enumerate_modules(&p4()).unwrap().iter().map(|m| m.bits()).collect();
        let mut want = trivial.to_vec();
        want.sort();
        assert_eq!(got, want);

        let got = enumerate_modules(&c4()).unwrap();
        assert_eq!(got.len(), 8);
        assert!(got.contains(&set(&[0, 2])) && got.contains(&set(&[1, 3])));

        let one = TwoStructure::from_fn(1, 1, |_, _| 0);
        assert_eq!(enumerate_modules(&one).unwrap(), vec![VertexSet::EMPTY, set(&[0])]);

        let big = TwoStructure::from_fn(17, 1, |_, _| 0);
        assert!(matches!(enumerate_modules(&big), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn criticality() {
        let p5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(critical_vertices(&p5).unwrap(), set(&[1, 2, 3]));
        assert!(!is_w_critical(&p5, set(&[0])).unwrap());
        assert!(is_w_critical(&p5, VertexSet::EMPTY).unwrap());
        assert_eq!(critical_vertices(&c4()), Err(Error::NotPrime));
    }

    #[test]
    fn primality_graphs() {
        // H_4: edges {0,1},{0,3},{2,3}
        // Deleting a pair leaves two vertices, which is never prime.
        let h4 = graph(4, &[(0, 1), (0, 3), (2, 3)]);
        assert!(primality_graph(&h4).unwrap().edges().is_empty());
        assert_eq!(critical_vertices(&h4).unwrap(), VertexSet::full(4));

        let h6 = graph(6, &[(0, 1), (0, 3), (0, 5), (2, 3), (2, 5), (4, 5)]);
        let path: Vec<_> = (0..5).map(|i| (i, i + 1)).collect();
        assert_eq!(primality_graph(&h6).unwrap().edges(), path);
        assert_eq!(critical_vertices(&h6).unwrap(), VertexSet::full(6));
    }

    #[test]
    fn unique_module() {
        // P4 plus a twin of vertex 0: {0,4} is the only nontrivial module.
        let s = graph(5, &[(0, 1), (1, 2), (2, 3), (4, 1)]);
        assert_eq!(unique_nontrivial_module_in(&s, s.vertices()), Some(set(&[0, 4])));
        assert_eq!(unique_nontrivial_module_in(&p4(), p4().vertices()), None);
        assert_eq!(unique_nontrivial_module_in(&c4(), c4().vertices()), None);
    }
}
