//! The outside machinery for a prime substructure `σ[X]`: the partitions p and
//! q of `X̄`, ε-sets, Statements (Sk), the outside graph Γ and its components.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modular::{is_module_in, is_prime_in};
use crate::par;
use crate::structure::{Label, PairClass, TwoStructure};
use crate::vset::{subsets_of_size, VertexSet};

/// Key of a block of the refined outside partition q.
///
/// The derived order (`Ext < Angle < Alpha`, then `alpha, e, f`) decides which
/// side of a component is called B and which D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QBlockKey {
    Ext,
    /// `⟨X⟩^(e,f)`: `[v,α] = (e,f)` for every `α ∈ X`.
    Angle { e: Label, f: Label },
    /// `X^(e,f)(α)`: `{α,v}` is a module of `σ[X ∪ v]` and `[v,α] = (e,f)`.
    Alpha { alpha: usize, e: Label, f: Label },
}

impl QBlockKey {
    pub fn p_key(self) -> PBlockKey {
        match self {
            QBlockKey::Ext => PBlockKey::Ext,
            QBlockKey::Angle { .. } => PBlockKey::Angle,
            QBlockKey::Alpha { alpha, .. } => PBlockKey::Alpha(alpha),
        }
    }

    /// `(e,f)` for ANGLE/ALPHA keys.
    pub fn class(self) -> Option<PairClass> {
        match self {
            QBlockKey::Ext => None,
            QBlockKey::Angle { e, f } | QBlockKey::Alpha { e, f, .. } => Some(PairClass::new(e, f)),
        }
    }

    pub fn is_symmetric(self) -> bool {
        self.class().is_some_and(PairClass::is_symmetric)
    }

    pub fn is_asymmetric(self) -> bool {
        self.class().is_some_and(|c| !c.is_symmetric())
    }

    /// Same p-block, with `(e,f)` swapped.
    pub fn mirrored(self) -> Self {
        match self {
            QBlockKey::Ext => QBlockKey::Ext,
            QBlockKey::Angle { e, f } => QBlockKey::Angle { e: f, f: e },
            QBlockKey::Alpha { alpha, e, f } => QBlockKey::Alpha { alpha, e: f, f: e },
        }
    }
}

impl fmt::Display for QBlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            QBlockKey::Ext => write!(f, "EXT"),
            QBlockKey::Angle { e, f: g } => write!(f, "ANGLE({e},{g})"),
            QBlockKey::Alpha { alpha, e, f: g } => write!(f, "ALPHA({alpha},{e},{g})"),
        }
    }
}

/// Key of a block of the outside partition p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PBlockKey {
    Ext,
    Angle,
    Alpha(usize),
}

impl fmt::Display for PBlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PBlockKey::Ext => write!(f, "EXT"),
            PBlockKey::Angle => write!(f, "ANGLE"),
            PBlockKey::Alpha(a) => write!(f, "ALPHA({a})"),
        }
    }
}

/// Limits on exhaustive ε enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_eps: usize,
    pub max_outside: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_eps: 6, max_outside: 20 }
    }
}

pub(crate) fn check_base(s: &TwoStructure, x: VertexSet) -> Result<()> {
    if let Some(m) = x.max().filter(|&m| m >= s.n()) {
        return Err(Error::VertexOutOfRange { vertex: m, n: s.n() });
    }
    if !is_prime_in(s, x) {
        return Err(Error::BaseNotPrime);
    }
    Ok(())
}

/// The refined outside partition q, with p available as a view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutsidePartition {
    pub x: VertexSet,
    pub outside: VertexSet,
    /// Nonempty blocks only.
    pub blocks: BTreeMap<QBlockKey, VertexSet>,
}

impl OutsidePartition {
    pub fn block(&self, key: QBlockKey) -> VertexSet {
        self.blocks.get(&key).copied().unwrap_or_default()
    }

    pub fn ext(&self) -> VertexSet {
        self.block(QBlockKey::Ext)
    }

    /// `⟨X⟩`.
    pub fn angle_union(&self) -> VertexSet {
        self.p_block(PBlockKey::Angle)
    }

    /// `X(α)`.
    pub fn alpha_union(&self, alpha: usize) -> VertexSet {
        self.p_block(PBlockKey::Alpha(alpha))
    }

    pub fn p_block(&self, key: PBlockKey) -> VertexSet {
        self.blocks
            .iter()
            .filter(|(k, _)| k.p_key() == key)
            .fold(VertexSet::EMPTY, |acc, (_, &b)| acc | b)
    }

    /// Nonempty p-blocks in key order.
    pub fn p_blocks(&self) -> BTreeMap<PBlockKey, VertexSet> {
        let mut out: BTreeMap<PBlockKey, VertexSet> = BTreeMap::new();
        for (k, &b) in &self.blocks {
            *out.entry(k.p_key()).or_default() |= b;
        }
        out
    }

    /// Blocks of q^s (`e = f`).
    pub fn q_s(&self) -> impl Iterator<Item = (QBlockKey, VertexSet)> + '_ {
        self.blocks.iter().filter(|(k, _)| k.is_symmetric()).map(|(&k, &b)| (k, b))
    }

    /// Blocks of q^a (`e != f`).
    pub fn q_a(&self) -> impl Iterator<Item = (QBlockKey, VertexSet)> + '_ {
        self.blocks.iter().filter(|(k, _)| k.is_asymmetric()).map(|(&k, &b)| (k, b))
    }

    pub fn key_of(&self, v: usize) -> Option<QBlockKey> {
        self.blocks.iter().find(|(_, b)| b.contains(v)).map(|(&k, _)| k)
    }
}

/// Classifies one outside vertex.
pub fn classify(s: &TwoStructure, x: VertexSet, v: usize) -> QBlockKey {
    let Some(a0) = x.min() else { return QBlockKey::Ext };
    let c = s.class(v, a0);
    if x.iter().all(|a| s.class(v, a) == c) {
        return QBlockKey::Angle { e: c.forward, f: c.backward };
    }
    let dom = x.with(v);
    for alpha in x {
        if is_module_in(s, dom, VertexSet::pair(alpha, v)) {
            let c = s.class(v, alpha);
            return QBlockKey::Alpha { alpha, e: c.forward, f: c.backward };
        }
    }
    QBlockKey::Ext
}

pub fn outside_partition(s: &TwoStructure, x: VertexSet) -> Result<OutsidePartition> {
    check_base(s, x)?;
    let outside = x.complement(s.n());
    let mut blocks: BTreeMap<QBlockKey, VertexSet> = BTreeMap::new();
    for v in outside {
        blocks.entry(classify(s, x, v)).or_default().insert(v);
    }
    Ok(OutsidePartition { x, outside, blocks })
}

fn check_caps(outside: VertexSet, max_size: usize, caps: &Caps) -> Result<()> {
    if max_size > caps.max_eps {
        return Err(Error::SizeLimitExceeded { what: "ε subset size", size: max_size, limit: caps.max_eps });
    }
    if outside.len() > caps.max_outside && max_size > 2 {
        return Err(Error::SizeLimitExceeded {
            what: "outside set for ε enumeration",
            size: outside.len(),
            limit: caps.max_outside,
        });
    }
    Ok(())
}

/// Members of ε with at most `max_size` elements, by size and then lexicographically.
pub fn epsilon_sets(s: &TwoStructure, x: VertexSet, max_size: usize, caps: &Caps) -> Result<Vec<VertexSet>> {
    check_base(s, x)?;
    let outside = x.complement(s.n());
    check_caps(outside, max_size, caps)?;
    let mut out = Vec::new();
    for k in 1..=max_size.min(outside.len()) {
        let cand: Vec<VertexSet> = subsets_of_size(outside, k).collect();
        out.extend(par::filter_map(&cand, |&y| is_prime_in(s, x | y).then_some(y)));
    }
    Ok(out)
}

/// Outcome of testing Statement (Sk).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkReport {
    pub k: usize,
    /// No `k`-subset of `X̄` is in ε.
    pub holds: bool,
    /// `k > |X̄|`, so there is nothing to test.
    pub vacuous: bool,
    /// Least `k`-subset in ε.
    pub witness: Option<VertexSet>,
    /// (Sm) holds for every odd `m <= k`.
    pub closed: bool,
    /// When (Sk) holds: does (Sm) hold for every odd `m <= k-2`?
    pub monotone: bool,
}

pub(crate) fn least_eps_of_size(s: &TwoStructure, x: VertexSet, outside: VertexSet, k: usize) -> Option<VertexSet> {
    if k > outside.len() {
        return None;
    }
    let cand: Vec<VertexSet> = subsets_of_size(outside, k).collect();
    par::find_map_first(&cand, |&y| is_prime_in(s, x | y).then_some(y))
}

pub fn statement_sk(s: &TwoStructure, x: VertexSet, k: usize, caps: &Caps) -> Result<SkReport> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenK(k));
    }
    check_base(s, x)?;
    let outside = x.complement(s.n());
    check_caps(outside, k, caps)?;
    let witness = least_eps_of_size(s, x, outside, k);
    let holds = witness.is_none();
    let lower_hold = (1..k).step_by(2).all(|m| least_eps_of_size(s, x, outside, m).is_none());
    Ok(SkReport {
        k,
        holds,
        vacuous: k > outside.len(),
        witness,
        closed: holds && lower_hold,
        monotone: !holds || lower_hold,
    })
}

/// Γ: an edge `{v,w}` of `X̄` whenever `σ[X ∪ {v,w}]` is prime. Ids are those of σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutsideGraph {
    pub vertices: VertexSet,
    pub graph: Graph,
}

impl OutsideGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges()
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.graph.has_edge(v, w)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.graph.neighbors(v)
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.graph.components_within(self.vertices)
    }

    pub fn isolated(&self) -> VertexSet {
        self.vertices.iter().filter(|&v| self.graph.neighbors(v).is_empty()).collect()
    }
}

pub fn outside_graph(s: &TwoStructure, x: VertexSet) -> Result<OutsideGraph> {
    check_base(s, x)?;
    let outside = x.complement(s.n());
    let pairs: Vec<VertexSet> = subsets_of_size(outside, 2).collect();
    let edges = par::filter_map(&pairs, |&p| is_prime_in(s, x | p).then_some(p));
    let mut graph = Graph::new(s.n());
    for p in edges {
        let (a, b) = (p.min().unwrap(), p.max().unwrap());
        graph.add_edge(a, b);
    }
    Ok(OutsideGraph { vertices: outside, graph })
}

/// A component of Γ with its bipartition into q-blocks.
///
/// For an isolated vertex `v`: `side_b = {v}`, `side_d = ∅`, no `key_d` and no `s_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentRecord {
    pub vertices: VertexSet,
    pub side_b: VertexSet,
    pub side_d: VertexSet,
    pub key_b: QBlockKey,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key_d: Option<QBlockKey>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_c: Option<PairClass>,
}

impl ComponentRecord {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_isolated(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// Components of Γ, ordered by least vertex, each split into its two q-block
/// sides. Fails when a component is not bipartite along q or its edges carry
/// different pair classes.
pub fn components_with_bipartition(s: &TwoStructure, x: VertexSet) -> Result<Vec<ComponentRecord>> {
    let part = outside_partition(s, x)?;
    let gamma = outside_graph(s, x)?;
    components_from(s, &part, &gamma)
}

pub fn components_from(s: &TwoStructure, part: &OutsidePartition, gamma: &OutsideGraph) -> Result<Vec<ComponentRecord>> {
    let mut out = Vec::new();
    for (i, comp) in gamma.components().into_iter().enumerate() {
        let key_of = |v: usize| part.key_of(v).expect("outside vertex has a block");
        if comp.len() == 1 {
            let v = comp.min().unwrap();
            out.push(ComponentRecord {
                vertices: comp,
                side_b: comp,
                side_d: VertexSet::EMPTY,
                key_b: key_of(v),
                key_d: None,
                s_c: None,
            });
            continue;
        }
        let Some((a, b)) = gamma.graph.two_coloring_within(comp) else {
            return Err(Error::NotQBipartite { component: i, detail: "odd cycle".into() });
        };
        let side_key = |side: VertexSet| -> Result<QBlockKey> {
            let k = key_of(side.min().unwrap());
            match side.iter().find(|&v| key_of(v) != k) {
                None => Ok(k),
                Some(v) => Err(Error::NotQBipartite {
                    component: i,
                    detail: format!("side {side} meets blocks {k} and {}", key_of(v)),
                }),
            }
        };
        let (ka, kb) = (side_key(a)?, side_key(b)?);
        if ka == kb {
            return Err(Error::NotQBipartite { component: i, detail: format!("both sides in {ka}") });
        }
        let (side_b, side_d, key_b, key_d) = if ka < kb { (a, b, ka, kb) } else { (b, a, kb, ka) };
        let mut s_c = None;
        for u in side_b {
            for w in gamma.neighbors(u) & comp {
                let c = s.class(u, w);
                match s_c {
                    None => s_c = Some(c),
                    Some(prev) if prev != c => return Err(Error::InconsistentSC { component: i }),
                    _ => {}
                }
            }
        }
        out.push(ComponentRecord { vertices: comp, side_b, side_d, key_b, key_d: Some(key_d), s_c });
    }
    Ok(out)
}

/// Shape of the substructure induced on a p-block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BlockStructure {
    /// All internal pairs carry `(e,e)`; `None` when the block has fewer than two vertices.
    Constant { e: Option<Label> },
    /// `u` before `v` in `order` iff `[u,v] = (e,f)`; `e < f`.
    Linear { e: Label, f: Label, order: Vec<usize> },
    Other,
}

pub fn classify_block(s: &TwoStructure, block: VertexSet) -> BlockStructure {
    let ids = block.to_vec();
    if ids.len() < 2 {
        return BlockStructure::Constant { e: None };
    }
    let c0 = s.class(ids[0], ids[1]);
    let all = |pred: &dyn Fn(PairClass) -> bool| {
        ids.iter().enumerate().all(|(i, &u)| ids[i + 1..].iter().all(|&v| pred(s.class(u, v))))
    };
    if c0.is_symmetric() {
        return if all(&|c| c == c0) { BlockStructure::Constant { e: Some(c0.forward) } } else { BlockStructure::Other };
    }
    let (e, f) = (c0.forward.min(c0.backward), c0.forward.max(c0.backward));
    let fwd = PairClass::new(e, f);
    if !all(&|c| c == fwd || c == fwd.reversed()) {
        return BlockStructure::Other;
    }
    // u < v iff [u,v] = (e,f); transitive iff the out-degrees are 0..m-1.
    let mut scored: Vec<(usize, usize)> = ids
        .iter()
        .map(|&u| (ids.iter().filter(|&&v| v != u && s.class(u, v) == fwd).count(), u))
        .collect();
    scored.sort_by(|a, b| b.cmp(a));
    let m = ids.len();
    if scored.iter().enumerate().any(|(i, &(d, _))| d != m - 1 - i) {
        return BlockStructure::Other;
    }
    BlockStructure::Linear { e, f, order: scored.into_iter().map(|(_, u)| u).collect() }
}

pub fn block_structure(s: &TwoStructure, x: VertexSet, key: PBlockKey) -> Result<BlockStructure> {
    let part = outside_partition(s, x)?;
    match key {
        PBlockKey::Ext => return Err(Error::UnknownBlock("EXT".into())),
        PBlockKey::Alpha(a) if !x.contains(a) => return Err(Error::UnknownBlock(key.to_string())),
        _ => {}
    }
    Ok(classify_block(s, part.p_block(key)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockEntry {
    #[serde(flatten)]
    pub key: QBlockKey,
    pub members: VertexSet,
}

/// The JSON fragment describing the outside of `σ[X]`.
#[derive(Clone, Debug, Serialize)]
pub struct OutsideReport {
    pub ext: VertexSet,
    pub blocks: Vec<BlockEntry>,
    pub gamma_edges: Vec<(usize, usize)>,
    pub components: Vec<ComponentRecord>,
}

impl OutsideReport {
    pub fn new(part: &OutsidePartition, gamma: &OutsideGraph, components: Vec<ComponentRecord>) -> Self {
        OutsideReport {
            ext: part.ext(),
            blocks: part
                .blocks
                .iter()
                .filter(|(k, _)| **k != QBlockKey::Ext)
                .map(|(&key, &members)| BlockEntry { key, members })
                .collect(),
            gamma_edges: gamma.edges(),
            components,
        }
    }
}
