use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use super::checks::require_partial_criticality;
use super::{json_set, Instance, TheoremReport};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::halfgraph::recognize_with_side;
use crate::modular::{is_prime_in, primality_graph, primality_graph_in, unique_nontrivial_module_in};
use crate::outside::{classify, BlockEntry, QBlockKey};
use crate::structure::{Label, PairClass, TwoStructure};
use crate::vset::VertexSet;

/// A component of Γ with its two sides and edge class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleComponent {
    pub vertices: VertexSet,
    pub side_b: VertexSet,
    pub side_d: VertexSet,
    pub s_c: PairClass,
}

/// `σ[X]`, the q-blocks, Γ and the edge classes `s_C`: enough to rebuild a
/// partially critical σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescriptionBundle {
    pub n: usize,
    pub k: usize,
    pub sigma_x: TwoStructure,
    /// Ids in σ of the vertices of `sigma_x`, increasing.
    pub x_ids: Vec<usize>,
    pub q_spec: Vec<BlockEntry>,
    pub gamma_edges: Vec<(usize, usize)>,
    pub components: Vec<BundleComponent>,
}

impl DescriptionBundle {
    pub fn x(&self) -> VertexSet {
        self.x_ids.iter().copied().collect()
    }

    pub fn s_map(&self) -> BTreeMap<usize, PairClass> {
        self.components.iter().enumerate().map(|(i, c)| (i, c.s_c)).collect()
    }

    fn key_of(&self, v: usize) -> Option<QBlockKey> {
        self.q_spec.iter().find(|b| b.members.contains(v)).map(|b| b.key)
    }

    /// `[α,β]` in σ for `α, β ∈ X`.
    fn base_class(&self, a: usize, b: usize) -> PairClass {
        let pa = self.x_ids.binary_search(&a).expect("vertex of X");
        let pb = self.x_ids.binary_search(&b).expect("vertex of X");
        self.sigma_x.class(pa, pb)
    }
}

pub fn describe(s: &TwoStructure, x: VertexSet) -> Result<DescriptionBundle> {
    let inst = Instance::new(s, x)?;
    describe_instance(&inst)
}

pub fn describe_instance(inst: &Instance) -> Result<DescriptionBundle> {
    require_partial_criticality(inst)?;
    let (sigma_x, x_ids) = inst.s.induced(inst.x)?;
    let components = inst
        .components()?
        .iter()
        .map(|c| {
            let s_c = c.s_c.ok_or_else(|| Error::HypothesesFailed(format!("isolated outside vertex in {}", c.vertices)))?;
            Ok(BundleComponent { vertices: c.vertices, side_b: c.side_b, side_d: c.side_d, s_c })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescriptionBundle {
        n: inst.s.n(),
        k: inst.s.k(),
        sigma_x,
        x_ids,
        q_spec: inst
            .partition()
            .blocks
            .iter()
            .map(|(&key, &members)| BlockEntry { key, members })
            .collect(),
        gamma_edges: inst.gamma().edges(),
        components,
    })
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InconsistentBundle(msg.into())
}

fn unordered(c: PairClass) -> (Label, Label) {
    (c.forward.min(c.backward), c.forward.max(c.backward))
}

/// The class `[y,z]` forced on a non-edge between distinct p-blocks.
pub fn forced_nonedge_class(
    base: impl Fn(usize, usize) -> PairClass,
    ky: QBlockKey,
    kz: QBlockKey,
) -> Option<PairClass> {
    match (ky, kz) {
        (QBlockKey::Angle { e, f }, _) => Some(PairClass::new(e, f)),
        (_, QBlockKey::Angle { e, f }) => Some(PairClass::new(f, e)),
        (QBlockKey::Alpha { alpha: a, .. }, QBlockKey::Alpha { alpha: b, .. }) if a != b => Some(base(a, b)),
        _ => None,
    }
}

/// Checks the bundle constraints in order, naming the first one violated.
fn validate(b: &DescriptionBundle) -> Result<(VertexSet, Graph)> {
    // base
    if b.sigma_x.n() != b.x_ids.len() || b.x_ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("base: x_ids must list one increasing id per vertex of sigma_x"));
    }
    if b.x_ids.last().is_some_and(|&m| m >= b.n) || b.n > crate::vset::MAX_VERTICES {
        return Err(bad("base: vertex ids out of range"));
    }
    if b.sigma_x.used_labels().last().is_some_and(|&l| l as usize >= b.k) {
        return Err(bad("base: label out of range"));
    }
    if !is_prime_in(&b.sigma_x, b.sigma_x.vertices()) {
        return Err(bad("base: sigma_x is not prime"));
    }
    let x = b.x();
    let outside = x.complement(b.n);
    // q partition
    let mut seen = VertexSet::EMPTY;
    for entry in &b.q_spec {
        if entry.members.is_empty() || !(entry.members & seen).is_empty() {
            return Err(bad(format!("q_partition: block {} empty or overlapping", entry.key)));
        }
        seen |= entry.members;
        let ok = match entry.key {
            QBlockKey::Ext => false,
            QBlockKey::Angle { e, f } => (e as usize) < b.k && (f as usize) < b.k,
            QBlockKey::Alpha { alpha, e, f } => x.contains(alpha) && (e as usize) < b.k && (f as usize) < b.k,
        };
        if !ok {
            return Err(bad(format!("q_partition: block key {} not allowed", entry.key)));
        }
    }
    if seen != outside {
        return Err(bad("q_partition: blocks do not cover the outside set exactly"));
    }
    // one unordered pair per p-block
    for e1 in &b.q_spec {
        for e2 in &b.q_spec {
            if e1.key.p_key() == e2.key.p_key()
                && unordered(e1.key.class().unwrap()) != unordered(e2.key.class().unwrap())
            {
                return Err(bad(format!("one_pair_per_p_block: {} and {}", e1.key, e2.key)));
            }
        }
    }
    // gamma edges
    let mut g = Graph::new(b.n);
    for &(u, v) in &b.gamma_edges {
        if u == v || !outside.contains(u) || !outside.contains(v) {
            return Err(bad(format!("gamma_edges: ({u},{v}) is not a pair of outside vertices")));
        }
        if b.key_of(u).unwrap().p_key() == b.key_of(v).unwrap().p_key() {
            return Err(bad(format!("gamma_edges: ({u},{v}) lies inside one p-block")));
        }
        g.add_edge(u, v);
    }
    if let Some(v) = outside.iter().find(|&v| g.neighbors(v).is_empty()) {
        return Err(bad(format!("no_isolated: outside vertex {v} has no Γ-neighbour")));
    }
    // components
    let comps = g.components_within(outside);
    if comps.len() != b.components.len() {
        return Err(bad("components: count differs from the components of Γ"));
    }
    for (i, c) in b.components.iter().enumerate() {
        if !comps.contains(&c.vertices) {
            return Err(bad(format!("components: {} is not a component of Γ", c.vertices)));
        }
        if (c.side_b | c.side_d) != c.vertices || !(c.side_b & c.side_d).is_empty() || c.side_b.is_empty() || c.side_d.is_empty() {
            return Err(bad(format!("components: sides of component {i} do not split it")));
        }
        let kb = b.key_of(c.side_b.min().unwrap()).unwrap();
        let kd = b.key_of(c.side_d.min().unwrap()).unwrap();
        if c.side_b.iter().any(|v| b.key_of(v) != Some(kb)) || c.side_d.iter().any(|v| b.key_of(v) != Some(kd)) {
            return Err(bad(format!("components: a side of component {i} meets two q-blocks")));
        }
        if kb.p_key() == kd.p_key() {
            return Err(bad(format!("components: both sides of component {i} in one p-block")));
        }
        if c.side_b.iter().any(|v| !(g.neighbors(v) & c.side_b).is_empty()) {
            return Err(bad(format!("components: an edge of component {i} lies inside a side")));
        }
        if c.s_c.forward as usize >= b.k || c.s_c.backward as usize >= b.k {
            return Err(bad(format!("s_c: class of component {i} out of range")));
        }
    }
    // asymmetric blocks inside one component
    for entry in &b.q_spec {
        if entry.key.is_asymmetric() && !comps.iter().any(|c| entry.members.is_subset(*c)) {
            return Err(bad(format!("asymmetric_block_split: {} meets two components", entry.key)));
        }
    }
    Ok((outside, g))
}

/// Rebuilds σ from a bundle.
pub fn reconstruct(b: &DescriptionBundle) -> Result<TwoStructure> {
    let (outside, g) = validate(b)?;
    let x = b.x();
    let n = b.n;
    let mut table = vec![0 as Label; n * n];
    let mut put = |u: usize, v: usize, c: PairClass| {
        table[u * n + v] = c.forward;
        table[v * n + u] = c.backward;
    };
    for (i, &u) in b.x_ids.iter().enumerate() {
        for (j, &v) in b.x_ids.iter().enumerate().skip(i + 1) {
            put(u, v, b.sigma_x.class(i, j));
        }
    }
    for y in outside {
        let key = b.key_of(y).unwrap();
        for a in x {
            let c = match key {
                QBlockKey::Angle { e, f } => PairClass::new(e, f),
                QBlockKey::Alpha { alpha, e, f } if alpha == a => PairClass::new(e, f),
                QBlockKey::Alpha { alpha, .. } => b.base_class(alpha, a),
                QBlockKey::Ext => unreachable!("validated"),
            };
            put(y, a, c);
        }
    }
    let comp_of = |v: usize| b.components.iter().find(|c| c.vertices.contains(v)).unwrap();
    for y in outside {
        for z in outside.iter().filter(|&z| z > y) {
            let (ky, kz) = (b.key_of(y).unwrap(), b.key_of(z).unwrap());
            let c = if ky.p_key() == kz.p_key() {
                let cy = ky.class().unwrap();
                if ky != kz || cy.is_symmetric() {
                    cy
                } else {
                    let (ny, nz) = (g.neighbors(y), g.neighbors(z));
                    let angle = matches!(ky, QBlockKey::Angle { .. });
                    if nz.is_subset(ny) && nz != ny {
                        if angle { cy.reversed() } else { cy }
                    } else if ny.is_subset(nz) && ny != nz {
                        if angle { cy } else { cy.reversed() }
                    } else {
                        return Err(Error::UnresolvedCase(y, z));
                    }
                }
            } else if g.has_edge(y, z) {
                let comp = comp_of(y);
                if comp.side_b.contains(y) { comp.s_c } else { comp.s_c.reversed() }
            } else {
                forced_nonedge_class(|a, c| b.base_class(a, c), ky, kz).ok_or(Error::UnresolvedCase(y, z))?
            };
            put(y, z, c);
        }
    }
    // Non-edges across the sides of a component with more than two vertices avoid s_C.
    for (i, c) in b.components.iter().enumerate().filter(|(_, c)| c.vertices.len() > 2) {
        for u in c.side_b {
            for v in c.side_d - g.neighbors(u) {
                if PairClass::new(table[u * n + v], table[v * n + u]) == c.s_c {
                    return Err(bad(format!("s_c: non-edge ({u},{v}) of component {i} carries s_C")));
                }
            }
        }
    }
    Ok(TwoStructure::from_fn(n, b.k, |u, v| table[u * n + v]))
}

/// Which description of the modules of `σ - x` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleCase {
    /// `φ(x) ∈ ⟨Y⟩`.
    Angle,
    /// `φ(x) ∈ Y(α)` with `α ∈ X`.
    AlphaInX,
    /// `φ(x) ∈ Y(φ(x⁻))`.
    Predecessor,
    Unclassified,
}

/// Per-vertex outcome of the module description.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleCaseRow {
    pub vertex: usize,
    pub phi: usize,
    pub case: ModuleCase,
    pub pair_prime: bool,
    pub conditions: bool,
}

/// Module and primality-graph descriptions for every component side.
pub fn check_description_facts(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    require_partial_criticality(&inst)?;
    description_facts(&inst)
}

pub fn description_facts(inst: &Instance) -> Result<TheoremReport> {
    let s = inst.s;
    let all = s.vertices();
    let g = inst.graph();
    let comps = inst.components()?;
    let needs_pg = comps.iter().any(|c| c.size() >= 6);
    let pg_sigma = if needs_pg { Some(primality_graph(s)?) } else { None };
    let gs = inst.gamma_structure();
    let mut rows = Vec::new();
    let (mut certified, mut pairs_prime, mut cases_ok) = (true, true, true);
    let (mut restrict_ok, mut nbhd_ok) = (true, true);
    for c in comps {
        let Some(side_d) = c.key_d.map(|_| c.side_d) else {
            certified = false;
            continue;
        };
        let pg_c = match (&pg_sigma, c.size() >= 6) {
            (Some(pg), true) => {
                let pc = primality_graph_in(gs, c.vertices)?;
                restrict_ok &= pg.induced(c.vertices).0.edges() == pc.induced(c.vertices).0.edges();
                Some((pg, pc))
            }
            _ => None,
        };
        for side in [c.side_b, side_d] {
            let Ok(cert) = recognize_with_side(g, c.vertices, side) else {
                certified = false;
                continue;
            };
            for (i, &v) in cert.side_x.iter().enumerate() {
                let phi = cert.phi[i];
                let pair = VertexSet::pair(v, phi);
                let y_set = all - pair;
                let pair_prime = is_prime_in(s, y_set);
                let module = unique_nontrivial_module_in(s, all.without(v));
                let c_minus = c.vertices.without(v);
                let disconnected = c.size() == 2 || g.components_within(c_minus).len() > 1;
                let smallest = i == 0;
                let (case, conditions) = match pair_prime.then(|| classify(s, y_set, phi)) {
                    Some(QBlockKey::Angle { .. }) => {
                        (ModuleCase::Angle, disconnected && smallest && module == Some(y_set))
                    }
                    Some(QBlockKey::Alpha { alpha, .. }) if inst.x.contains(alpha) => (
                        ModuleCase::AlphaInX,
                        disconnected && smallest && module == Some(VertexSet::pair(alpha, phi)),
                    ),
                    Some(QBlockKey::Alpha { alpha, .. }) if i > 0 && alpha == cert.phi[i - 1] => (
                        ModuleCase::Predecessor,
                        c.size() > 2 && !disconnected && module == Some(VertexSet::pair(alpha, phi)),
                    ),
                    _ => (ModuleCase::Unclassified, false),
                };
                pairs_prime &= pair_prime;
                cases_ok &= conditions;
                if let Some((pg, pc)) = &pg_c {
                    let n_c = pc.neighbors(v) & c.vertices;
                    let n_s = pg.neighbors(v);
                    let ok = match (case, pair_prime.then(|| classify(s, y_set, phi))) {
                        (ModuleCase::AlphaInX, Some(QBlockKey::Alpha { alpha, .. })) => {
                            n_c == VertexSet::singleton(phi) && n_s == VertexSet::pair(alpha, phi)
                        }
                        _ => n_c == n_s,
                    };
                    nbhd_ok &= ok;
                }
                rows.push(ModuleCaseRow { vertex: v, phi, case, pair_prime, conditions });
            }
        }
    }
    Ok(TheoremReport::new("description_facts")
        .hyp("S5", inst.sk(5)?)
        .hyp("x_critical", inst.x_critical())
        .assert("half_graph_certificates", certified)
        .assert("phi_pair_prime", pairs_prime)
        .assert("module_cases", cases_ok)
        .assert("primality_restriction", restrict_ok)
        .assert("primality_neighbourhoods", nbhd_ok)
        .witness(json!({
            "rows": rows,
            "components": comps.iter().map(|c| json_set(c.vertices)).collect::<Vec<_>>(),
        }))
        .conclude_all())
}
