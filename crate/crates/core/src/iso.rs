//! Isomorphism of small 2-structures by backtracking with signature pruning.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structure::{Label, PairClass, TwoStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoOptions {
    pub max_n: usize,
    /// Allow a bijection between label ids as well.
    pub relabel: bool,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { max_n: 16, relabel: false }
    }
}

fn signature(s: &TwoStructure, v: usize) -> Vec<PairClass> {
    let mut sig: Vec<PairClass> = (0..s.n()).filter(|&w| w != v).map(|w| s.class(v, w)).collect();
    sig.sort_unstable();
    sig
}

// Label-free signature: sorted multiplicities of the pair classes seen from v.
fn shape(s: &TwoStructure, v: usize) -> Vec<usize> {
    let mut counts: HashMap<PairClass, usize> = HashMap::new();
    for w in (0..s.n()).filter(|&w| w != v) {
        *counts.entry(s.class(v, w)).or_default() += 1;
    }
    let mut c: Vec<usize> = counts.into_values().collect();
    c.sort_unstable();
    c
}

struct Search<'a> {
    a: &'a TwoStructure,
    b: &'a TwoStructure,
    relabel: bool,
    cand: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    fwd: HashMap<Label, Label>,
    back: HashMap<Label, Label>,
}

impl Search<'_> {
    fn bind(&mut self, la: Label, lb: Label, log: &mut Vec<Label>) -> bool {
        match (self.fwd.get(&la), self.back.get(&lb)) {
            (Some(&x), _) => x == lb,
            (None, Some(_)) => false,
            (None, None) => {
                self.fwd.insert(la, lb);
                self.back.insert(lb, la);
                log.push(la);
                true
            }
        }
    }

    fn unbind(&mut self, log: &[Label]) {
        for la in log {
            if let Some(lb) = self.fwd.remove(la) {
                self.back.remove(&lb);
            }
        }
    }

    fn go(&mut self, v: usize) -> bool {
        if v == self.a.n() {
            return true;
        }
        for ci in 0..self.cand[v].len() {
            let w = self.cand[v][ci];
            if self.used[w] {
                continue;
            }
            let mut log = Vec::new();
            let mut ok = true;
            for u in 0..v {
                let mu = self.map[u];
                let (x, y) = (self.a.label(u, v), self.b.label(mu, w));
                let (x2, y2) = (self.a.label(v, u), self.b.label(w, mu));
                ok = if self.relabel {
                    self.bind(x, y, &mut log) && self.bind(x2, y2, &mut log)
                } else {
                    x == y && x2 == y2
                };
                if !ok {
                    break;
                }
            }
            if ok {
                self.map[v] = w;
                self.used[w] = true;
                if self.go(v + 1) {
                    return true;
                }
                self.used[w] = false;
            }
            self.unbind(&log);
        }
        false
    }
}

/// A vertex bijection `p` with `label_a(u,v)` matching `label_b(p[u],p[v])`,
/// exactly or, with `relabel`, up to a bijection of label ids.
pub fn are_isomorphic(a: &TwoStructure, b: &TwoStructure, opts: IsoOptions) -> Result<Option<Vec<usize>>> {
    for s in [a, b] {
        if s.n() > opts.max_n {
            return Err(Error::SizeLimitExceeded { what: "isomorphism test", size: s.n(), limit: opts.max_n });
        }
    }
    if a.n() != b.n() {
        return Ok(None);
    }
    let n = a.n();
    let cand: Vec<Vec<usize>> = if opts.relabel {
        let sb: Vec<_> = (0..n).map(|w| shape(b, w)).collect();
        (0..n).map(|v| {
            let sa = shape(a, v);
            (0..n).filter(|&w| sb[w] == sa).collect()
        }).collect()
    } else {
        let sb: Vec<_> = (0..n).map(|w| signature(b, w)).collect();
        (0..n).map(|v| {
            let sa = signature(a, v);
            (0..n).filter(|&w| sb[w] == sa).collect()
        }).collect()
    };
    if cand.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    let mut search = Search {
        a,
        b,
        relabel: opts.relabel,
        cand,
        map: vec![0; n],
        used: vec![false; n],
        fwd: HashMap::new(),
        back: HashMap::new(),
    };
    Ok(search.go(0).then_some(search.map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> TwoStructure {
        TwoStructure::from_graph(n, e, false).unwrap()
    }

    #[test]
    fn self_and_paths() {
        let p4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let id = are_isomorphic(&p4, &p4, IsoOptions::default()).unwrap().unwrap();
        assert_eq!(id, vec![0, 1, 2, 3]);
        let h4 = graph(4, &[(0, 1), (0, 3), (2, 3)]);
        let p = are_isomorphic(&p4, &h4, IsoOptions::default()).unwrap().unwrap();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(p4.label(u, v), h4.label(p[u], p[v]));
                }
            }
        }
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(are_isomorphic(&p4, &c4, IsoOptions::default()).unwrap(), None);
    }

    #[test]
    fn relabelling() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let swapped = TwoStructure::from_fn(3, 2, |u, v| 1 - p3.label(u, v));
        assert_eq!(are_isomorphic(&p3, &swapped, IsoOptions::default()).unwrap(), None);
        let opts = IsoOptions { relabel: true, ..Default::default() };
        assert!(are_isomorphic(&p3, &swapped, opts).unwrap().is_some());
    }

    #[test]
    fn size_cap() {
        let big = TwoStructure::from_fn(17, 1, |_, _| 0);
        assert!(matches!(are_isomorphic(&big, &big, IsoOptions::default()), Err(Error::SizeLimitExceeded { .. })));
    }
}
