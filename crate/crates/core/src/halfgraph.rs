//! Half graphs: construction, recognition with the forced order and
//! bijection, and induced P5 / 2K2 search.
//!
//! Every finite linear order is discrete, so recognising a finite half graph
//! needs no separate discreteness test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;
use crate::vset::{subsets_of_size, VertexSet};

/// Vertex cap for the 5-subset scans.
pub const P5_SCAN_MAX_N: usize = 40;

/// `H_2n`: vertices `0..2n`, edges `{2p, 2q+1}` for `p <= q`.
pub fn build_h2n(n: usize) -> Graph {
    let mut g = Graph::new(2 * n);
    for p in 0..n {
        for q in p..n {
            g.add_edge(2 * p, 2 * q + 1);
        }
    }
    g
}

/// The order `L` on one side (listed increasingly) and `φ` onto the other side,
/// with `phi[i]` the image of `side_x[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfGraphCertificate {
    pub side_x: Vec<usize>,
    pub phi: Vec<usize>,
}

impl HalfGraphCertificate {
    pub fn phi_of(&self, u: usize) -> Option<usize> {
        self.position(u).map(|i| self.phi[i])
    }

    pub fn phi_inverse(&self, w: usize) -> Option<usize> {
        self.phi.iter().position(|&p| p == w).map(|i| self.side_x[i])
    }

    pub fn position(&self, u: usize) -> Option<usize> {
        self.side_x.iter().position(|&x| x == u)
    }

    /// Predecessor of `u` in `L`.
    pub fn predecessor(&self, u: usize) -> Option<usize> {
        self.position(u).filter(|&i| i > 0).map(|i| self.side_x[i - 1])
    }

    pub fn smallest(&self) -> usize {
        self.side_x[0]
    }

    /// `{x, φ(x')}` for `x <= x'`, as sorted pairs.
    pub fn rebuild_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &x) in self.side_x.iter().enumerate() {
            for &y in &self.phi[i..] {
                out.push((x.min(y), x.max(y)));
            }
        }
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rejection {
    Empty,
    OddOrder,
    Disconnected,
    NotBipartite,
    SizeMismatch,
    NeighborhoodsNotChain,
}

fn edges_within(g: &Graph, mask: VertexSet) -> Vec<(usize, usize)> {
    g.edges().into_iter().filter(|&(u, v)| mask.contains(u) && mask.contains(v)).collect()
}

/// Recognises the subgraph of `g` induced on `mask`, ordering the side that
/// contains the least vertex of `mask`.
pub fn recognize_in(g: &Graph, mask: VertexSet) -> std::result::Result<HalfGraphCertificate, Rejection> {
    if mask.is_empty() {
        return Err(Rejection::Empty);
    }
    if mask.len() % 2 == 1 {
        return Err(Rejection::OddOrder);
    }
    if g.components_within(mask).len() != 1 {
        return Err(Rejection::Disconnected);
    }
    let (a, _) = g.two_coloring_within(mask).ok_or(Rejection::NotBipartite)?;
    recognize_with_side(g, mask, a)
}

/// Recognition with the ordered side fixed to `side_x`.
pub fn recognize_with_side(
    g: &Graph,
    mask: VertexSet,
    side_x: VertexSet,
) -> std::result::Result<HalfGraphCertificate, Rejection> {
    let side_y = mask - side_x;
    if side_x.len() != side_y.len() || side_x.is_empty() {
        return Err(Rejection::SizeMismatch);
    }
    let m = side_x.len();
    let mut order: Vec<(usize, usize)> = side_x.iter().map(|x| (g.neighbors(x).len(), x)).collect();
    order.sort_by(|p, q| q.cmp(p));
    for (i, &(_, x)) in order.iter().enumerate() {
        let n = g.neighbors(x) & mask;
        if n != g.neighbors(x) & (mask - side_x) || n.len() != m - i {
            return Err(Rejection::NeighborhoodsNotChain);
        }
        if i > 0 && !n.is_subset(g.neighbors(order[i - 1].1)) {
            return Err(Rejection::NeighborhoodsNotChain);
        }
    }
    let xs: Vec<usize> = order.iter().map(|&(_, x)| x).collect();
    let phi: Vec<usize> = (0..m)
        .map(|i| {
            let here = g.neighbors(xs[i]) & mask;
            let next = if i + 1 < m { g.neighbors(xs[i + 1]) & mask } else { VertexSet::EMPTY };
            (here - next).min().expect("strict chain")
        })
        .collect();
    let cert = HalfGraphCertificate { side_x: xs, phi };
    if cert.rebuild_edges() != edges_within(g, mask) {
        return Err(Rejection::NeighborhoodsNotChain);
    }
    Ok(cert)
}

pub fn recognize_half_graph(g: &Graph) -> std::result::Result<HalfGraphCertificate, Rejection> {
    recognize_in(g, g.vertices())
}

pub fn is_half_graph(g: &Graph) -> bool {
    recognize_half_graph(g).is_ok()
}

fn is_induced_p5(g: &Graph, s: VertexSet) -> bool {
    let degs: Vec<usize> = s.iter().map(|v| (g.neighbors(v) & s).len()).collect();
    degs.iter().sum::<usize>() == 8 && degs.iter().all(|&d| d == 1 || d == 2) && g.components_within(s).len() == 1
}

fn is_induced_2k2(g: &Graph, s: VertexSet) -> bool {
    s.iter().all(|v| (g.neighbors(v) & s).len() == 1)
}

fn scan(g: &Graph, size: usize, pred: impl Fn(&Graph, VertexSet) -> bool + Sync + Send) -> Result<Option<VertexSet>> {
    if g.n() > P5_SCAN_MAX_N {
        return Err(Error::SizeLimitExceeded { what: "induced subgraph scan", size: g.n(), limit: P5_SCAN_MAX_N });
    }
    let cand: Vec<VertexSet> = subsets_of_size(g.vertices(), size).collect();
    Ok(par::find_map_first(&cand, |&s| pred(g, s).then_some(s)))
}

/// Least 5-set (lexicographically) inducing a path.
pub fn find_induced_p5(g: &Graph) -> Result<Option<VertexSet>> {
    scan(g, 5, is_induced_p5)
}

pub fn is_p5_free(g: &Graph) -> Result<bool> {
    Ok(find_induced_p5(g)?.is_none())
}

/// Least 4-set inducing two disjoint edges.
pub fn find_induced_2k2(g: &Graph) -> Result<Option<VertexSet>> {
    scan(g, 4, is_induced_2k2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn h2n_shapes() {
        assert_eq!(build_h2n(1).edges(), vec![(0, 1)]);
        assert_eq!(build_h2n(2).edges(), vec![(0, 1), (0, 3), (2, 3)]);
        let h6 = build_h2n(3);
        assert_eq!(h6.edge_count(), 6);
        assert_eq!([h6.degree(0), h6.degree(2), h6.degree(4)], [3, 2, 1]);
    }

    #[test]
    fn h6_certificate() {
        let c = recognize_half_graph(&build_h2n(3)).unwrap();
        assert_eq!(c.side_x, vec![0, 2, 4]);
        assert_eq!(c.phi, vec![1, 3, 5]);
        assert_eq!(c.rebuild_edges(), build_h2n(3).edges());
        assert_eq!(c.predecessor(2), Some(0));
        assert_eq!(c.phi_inverse(3), Some(2));
    }

    #[test]
    fn rejections() {
        assert_eq!(recognize_half_graph(&path(5)), Err(Rejection::OddOrder));
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(recognize_half_graph(&c4), Err(Rejection::NeighborhoodsNotChain));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(recognize_half_graph(&k4), Err(Rejection::NotBipartite));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(recognize_half_graph(&two), Err(Rejection::Disconnected));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(recognize_half_graph(&star), Err(Rejection::SizeMismatch));
        assert_eq!(recognize_half_graph(&Graph::new(0)), Err(Rejection::Empty));
        assert!(recognize_half_graph(&path(4)).is_ok());
        assert!(recognize_half_graph(&path(6)).is_err());
    }

    #[test]
    fn p5_scans() {
        assert!(is_p5_free(&build_h2n(4)).unwrap());
        assert_eq!(find_induced_p5(&path(5)).unwrap(), Some(VertexSet::full(5)));
        assert!(!is_p5_free(&path(6)).unwrap());
        assert!(find_induced_2k2(&path(5)).unwrap().is_some());
        assert!(find_induced_2k2(&build_h2n(4)).unwrap().is_none());
        assert!(matches!(find_induced_p5(&Graph::new(41)), Err(Error::SizeLimitExceeded { .. })));
    }
}
