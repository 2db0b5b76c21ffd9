//! Small undirected graphs over dense ids, stored as neighbourhood bitsets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::TwoStructure;
use crate::vset::{VertexSet, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        Graph { n, adj: vec![VertexSet::EMPTY; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::SizeLimitExceeded { what: "vertex count", size: n, limit: MAX_VERTICES });
        }
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Graph on the same ids where `{v,w}` is an edge iff `label(v,w) == label(w,v) == 1`.
    /// Only meaningful for graph-like structures.
    pub fn from_two_structure(s: &TwoStructure) -> Self {
        let mut g = Graph::new(s.n());
        for v in 0..s.n() {
            for w in v + 1..s.n() {
                if s.label(v, w) == 1 && s.label(w, v) == 1 {
                    g.add_edge(v, w);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges `(u,v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Subgraph induced on `w`, relabelled in increasing id order.
    pub fn induced(&self, w: VertexSet) -> (Graph, Vec<usize>) {
        let ids = w.to_vec();
        let mut g = Graph::new(ids.len());
        for (a, &u) in ids.iter().enumerate() {
            for (b, &v) in ids.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        (g, ids)
    }

    /// Connected components of the subgraph induced on `mask`, ordered by least vertex.
    pub fn components_within(&self, mask: VertexSet) -> Vec<VertexSet> {
        let mut left = mask;
        let mut out = Vec::new();
        while let Some(start) = left.min() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier {
                    next |= self.adj[v] & mask;
                }
                frontier = next - comp;
                comp |= next;
            }
            left -= comp;
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Proper 2-colouring of the subgraph on `mask`: the colour class containing
    /// the least vertex of each component comes first.
    pub fn two_coloring_within(&self, mask: VertexSet) -> Option<(VertexSet, VertexSet)> {
        let mut a = VertexSet::EMPTY;
        let mut b = VertexSet::EMPTY;
        for comp in self.components_within(mask) {
            let start = comp.min().unwrap();
            let mut ca = VertexSet::singleton(start);
            let mut cb = VertexSet::EMPTY;
            let mut frontier = ca;
            let mut side_a = true;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier {
                    next |= self.adj[v] & mask;
                }
                let (own, other) = if side_a { (ca, cb) } else { (cb, ca) };
                if !(next & own).is_empty() {
                    return None;
                }
                let fresh = next - other;
                if side_a {
                    cb |= fresh;
                } else {
                    ca |= fresh;
                }
                frontier = fresh;
                side_a = !side_a;
            }
            a |= ca;
            b |= cb;
        }
        Some((a, b))
    }

    pub fn two_coloring(&self) -> Option<(VertexSet, VertexSet)> {
        self.two_coloring_within(self.vertices())
    }

    /// The symmetric 2-structure with label 1 on edges and 0 elsewhere.
    pub fn to_two_structure(&self) -> TwoStructure {
        TwoStructure::from_fn(self.n, 2, |v, w| self.has_edge(v, w) as u16)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            g.adj[u] = self.adj[u].complement(self.n).without(u);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn components_and_coloring() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let comps: Vec<_> = g.components().iter().map(|c| c.to_vec()).collect();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
        let (a, b) = g.two_coloring().unwrap();
        assert_eq!(a.to_vec(), vec![0, 2, 3, 5]);
        assert_eq!(b.to_vec(), vec![1, 4]);
        assert!(cycle(5).two_coloring().is_none());
        assert!(cycle(6).two_coloring().is_some());
    }

    #[test]
    fn induced_and_structure() {
        let c4 = cycle(4);
        let (p, ids) = c4.induced([0, 1, 2].iter().collect());
        assert_eq!(p.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(ids, vec![0, 1, 2]);
        let s = c4.to_two_structure();
        assert_eq!(Graph::from_two_structure(&s), c4);
        assert_eq!(c4.complement().edges(), vec![(0, 2), (1, 3)]);
    }
}
