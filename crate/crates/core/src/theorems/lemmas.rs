use serde_json::json;

use super::{json_set, Instance, TheoremReport};
use crate::error::Result;
use crate::graph::Graph;
use crate::halfgraph::{find_induced_2k2, find_induced_p5, is_half_graph};
use crate::modular::{enumerate_modules_capped, is_critical, is_module_in, is_prime, is_prime_in, ORACLE_MAX_N};
use crate::outside::{classify_block, BlockStructure, PBlockKey, QBlockKey};
use crate::structure::PairClass;
use crate::vset::{subsets_of_size, VertexSet};

/// Largest block whose subsets are enumerated exhaustively.
pub const SUBSET_MAX: usize = 12;

fn is_module_of_graph(g: &Graph, domain: VertexSet, m: VertexSet) -> bool {
    (domain - m).iter().all(|v| {
        let n = g.neighbors(v) & m;
        n.is_empty() || n == m
    })
}

fn pairs(s: VertexSet) -> impl Iterator<Item = (usize, usize)> {
    subsets_of_size(s, 2).map(|p| (p.min().unwrap(), p.max().unwrap()))
}

/// p is a partition of X̄, with the three assertions on non-prime extensions by a pair.
pub fn lem_ehr(inst: &Instance) -> TheoremReport {
    let (s, x) = (inst.s, inst.x);
    let mut partition_ok = true;
    for v in inst.outside {
        let dom = x.with(v);
        let ext = is_prime_in(s, dom);
        let angle = is_module_in(s, dom, x);
        let alphas = x.iter().filter(|&a| is_module_in(s, dom, VertexSet::pair(a, v))).count();
        partition_ok &= (ext as usize + angle as usize + (alphas > 0) as usize) == 1 && alphas <= 1;
    }
    let part = inst.partition();
    let angle = part.angle_union();
    let ext = part.ext();
    let (mut a1, mut a2, mut a3) = (true, true, true);
    let mut failure = None;
    for (v, w) in pairs(inst.outside) {
        let dom = x | VertexSet::pair(v, w);
        if is_prime_in(s, dom) {
            continue;
        }
        let before = (a1, a2, a3);
        for (p, q) in [(v, w), (w, v)] {
            if angle.contains(p) && !angle.contains(q) {
                a1 &= is_module_in(s, dom, x.with(q));
            }
            if let Some(QBlockKey::Alpha { alpha, .. }) = part.key_of(p) {
                if part.key_of(q).map(QBlockKey::p_key) != Some(PBlockKey::Alpha(alpha)) {
                    a2 &= is_module_in(s, dom, VertexSet::pair(alpha, p));
                }
            }
        }
        if ext.contains(v) && ext.contains(w) {
            a3 &= is_module_in(s, dom, VertexSet::pair(v, w));
        }
        if before != (a1, a2, a3) && failure.is_none() {
            failure = Some([v, w]);
        }
    }
    TheoremReport::new("lem_EHR")
        .assert("partition", partition_ok)
        .assert("a1", a1)
        .assert("a2", a2)
        .assert("a3", a3)
        .witness(json!({ "failing_pair": failure }))
        .conclude_all()
}

/// Pairs inside ⟨X⟩ leave X a module, pairs inside X(α) leave `{α,x,y}` a
/// module, so Γ has no edge inside a non-Ext p-block.
pub fn rem_p(inst: &Instance) -> TheoremReport {
    let (s, x) = (inst.s, inst.x);
    let part = inst.partition();
    let mut modules_ok = true;
    let mut empty_ok = true;
    for (key, block) in part.p_blocks() {
        for (a, b) in pairs(block) {
            let pair = VertexSet::pair(a, b);
            let dom = x | pair;
            match key {
                PBlockKey::Ext => continue,
                PBlockKey::Angle => modules_ok &= is_module_in(s, dom, x),
                PBlockKey::Alpha(alpha) => modules_ok &= is_module_in(s, dom, pair.with(alpha)),
            }
            empty_ok &= !inst.gamma().has_edge(a, b);
        }
    }
    TheoremReport::new("rem_p").assert("modules", modules_ok).assert("blocks_independent", empty_ok).conclude_all()
}

/// Modules of σ through X isolate the vertices outside them in Γ; a module
/// meeting X in one vertex α isolates its other members. Hence a nontrivial
/// module meeting X forces isolated vertices.
pub fn lem1_modules(inst: &Instance) -> Result<TheoremReport> {
    let (s, x) = (inst.s, inst.x);
    let isolated = inst.isolated();
    let all = s.vertices();
    let modules = enumerate_modules_capped(s, ORACLE_MAX_N)?;
    let (mut a1, mut a2, mut meets_x) = (true, true, false);
    for &m in &modules {
        if x.is_subset(m) {
            a1 &= (all - m).is_subset(isolated);
        }
        if (m & x).len() == 1 {
            a2 &= (m - x).is_subset(isolated);
        }
        if m.len() > 1 && m != all && !(m & x).is_empty() {
            meets_x = true;
        }
    }
    Ok(TheoremReport::new("lem1_modules")
        .assert("a1", a1)
        .assert("a2", a2)
        .assert("cor_isolated", !meets_x || !isolated.is_empty())
        .conclude_all())
}

/// Under (S1): a module `M ⊆ X̄` of σ is a module of Γ, lies in one q-block, and
/// is a module of `σ[B_p]`.
pub fn lem2_modules(inst: &Instance) -> Result<TheoremReport> {
    let s = inst.s;
    let part = inst.partition();
    let g = inst.graph();
    let mut ok = true;
    let mut failure = None;
    if inst.outside.len() <= SUBSET_MAX {
        for bits in 1..1u64 << inst.outside.len() {
            let m: VertexSet = inst.outside.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, v)| v).collect();
            if m.len() < 2 || !is_module_in(s, s.vertices(), m) {
                continue;
            }
            let key = part.key_of(m.min().unwrap()).unwrap();
            let bq = part.block(key);
            let bp = part.p_block(key.p_key());
            let good = is_module_of_graph(g, inst.outside, m) && m.is_subset(bq) && is_module_in(s, bp, m);
            if !good && failure.is_none() {
                failure = Some(m);
            }
            ok &= good;
        }
    }
    Ok(TheoremReport::new("lem2_modules")
        .hyp("S1", inst.sk(1)?)
        .hyp("outside_enumerable", inst.outside.len() <= SUBSET_MAX)
        .assert("module_conditions", ok)
        .witness(json!({ "failing_module": failure.map(json_set) }))
        .conclude_all())
}

/// Under (S3): `M ⊆ B_q` that is a module of `σ[B_p]` and of Γ is a module of σ.
pub fn cor1_oppo_modules(inst: &Instance) -> Result<TheoremReport> {
    let s = inst.s;
    let part = inst.partition();
    let g = inst.graph();
    let mut ok = true;
    let mut enumerable = true;
    let mut failure = None;
    for (&key, &bq) in &part.blocks {
        if key == QBlockKey::Ext {
            continue;
        }
        if bq.len() > SUBSET_MAX {
            enumerable = false;
            continue;
        }
        let bp = part.p_block(key.p_key());
        for k in 2..=bq.len() {
            for m in subsets_of_size(bq, k) {
                if is_module_in(s, bp, m) && is_module_of_graph(g, inst.outside, m) && !is_module_in(s, s.vertices(), m) {
                    ok = false;
                    failure.get_or_insert(m);
                }
            }
        }
    }
    Ok(TheoremReport::new("cor1_oppo_modules")
        .hyp("S3", inst.sk(3)?)
        .hyp("blocks_enumerable", enumerable)
        .assert("converse", ok)
        .witness(json!({ "failing_set": failure.map(json_set) }))
        .conclude_all())
}

/// Under (S3): two Γ-neighbours `y,z` of `x` form a module of `σ[X ∪ {x,y,z}]`
/// and share a q-block.
pub fn fac1(inst: &Instance) -> Result<TheoremReport> {
    let (s, x) = (inst.s, inst.x);
    let part = inst.partition();
    let mut ok = true;
    let mut failure = None;
    for v in inst.outside {
        for (y, z) in pairs(inst.gamma().neighbors(v)) {
            let dom = x | VertexSet::pair(y, z).with(v);
            let good = is_module_in(s, dom, VertexSet::pair(y, z)) && part.key_of(y) == part.key_of(z);
            if !good {
                ok = false;
                failure.get_or_insert([v, y, z]);
            }
        }
    }
    Ok(TheoremReport::new("fac1")
        .hyp("S3", inst.sk(3)?)
        .assert("common_neighbours_module", ok)
        .witness(json!({ "failing_triple": failure }))
        .conclude_all())
}

/// Under (S3): for `x`, `y,z` in one p-block `D_p` with `{x,y}` an edge and
/// `{x,z}` not, `X ∪ {x,y}` (for ⟨X⟩) or `{α,z}` (for X(α)) is a module of
/// `σ[X ∪ {x,y,z}]`.
pub fn fac2(inst: &Instance) -> Result<TheoremReport> {
    let (s, x) = (inst.s, inst.x);
    let part = inst.partition();
    let gamma = inst.gamma();
    let mut ok = true;
    let mut failure = None;
    for (dkey, dp) in part.p_blocks() {
        if dkey == PBlockKey::Ext {
            continue;
        }
        for v in inst.outside - dp {
            let nb = gamma.neighbors(v) & dp;
            for y in nb {
                for z in dp - nb {
                    let dom = x | VertexSet::pair(y, z).with(v);
                    let good = match dkey {
                        PBlockKey::Angle => is_module_in(s, dom, x | VertexSet::pair(v, y)),
                        PBlockKey::Alpha(a) => is_module_in(s, dom, VertexSet::pair(a, z)),
                        PBlockKey::Ext => true,
                    };
                    if !good {
                        ok = false;
                        failure.get_or_insert([v, y, z]);
                    }
                }
            }
        }
    }
    Ok(TheoremReport::new("fac2")
        .hyp("S3", inst.sk(3)?)
        .assert("modules", ok)
        .witness(json!({ "failing_triple": failure }))
        .conclude_all())
}

/// Under (S3): an induced 2K2 `{x,y},{x',y'}` with `y,y'` in one q-block puts
/// that block in q^s.
pub fn fac3(inst: &Instance) -> Result<TheoremReport> {
    let part = inst.partition();
    let gamma = inst.gamma();
    let mut ok = true;
    let mut failure = None;
    for (&key, &b) in &part.blocks {
        if key == QBlockKey::Ext || key.is_symmetric() {
            continue;
        }
        for (y, yp) in pairs(b) {
            let only_y = gamma.neighbors(y) - gamma.neighbors(yp) - VertexSet::pair(y, yp);
            let only_yp = gamma.neighbors(yp) - gamma.neighbors(y) - VertexSet::pair(y, yp);
            if !only_y.is_empty() && !only_yp.is_empty() {
                ok = false;
                failure.get_or_insert([only_y.min().unwrap(), y, only_yp.min().unwrap(), yp]);
            }
        }
    }
    Ok(TheoremReport::new("fac3")
        .hyp("S3", inst.sk(3)?)
        .assert("asymmetric_blocks_nested", ok)
        .witness(json!({ "failing_quadruple": failure }))
        .conclude_all())
}

/// Under (S3): for a q-block `B` and `v ∉ B`, the Γ-neighbours and
/// non-neighbours of `v` in `B` are modules of `σ[B]`, related by `(e,f)` for
/// ⟨X⟩ blocks and `(f,e)` for X(α) blocks.
pub fn cor0(inst: &Instance) -> Result<TheoremReport> {
    let s = inst.s;
    let part = inst.partition();
    let gamma = inst.gamma();
    let (mut modules_ok, mut labels_ok) = (true, true);
    let mut failure = None;
    for (&key, &b) in &part.blocks {
        let Some(c) = key.class() else { continue };
        let expect = match key {
            QBlockKey::Angle { .. } => c,
            _ => c.reversed(),
        };
        for v in inst.outside - b {
            let nb = gamma.neighbors(v) & b;
            let non = b - nb;
            let m = is_module_in(s, b, nb) && is_module_in(s, b, non);
            let l = nb.is_empty()
                || non.is_empty()
                || non.iter().all(|u| nb.iter().all(|w| s.class(u, w) == expect));
            if !(m && l) {
                failure.get_or_insert(json!({ "block": key.to_string(), "vertex": v }));
            }
            modules_ok &= m;
            labels_ok &= l;
        }
    }
    Ok(TheoremReport::new("cor0")
        .hyp("S3", inst.sk(3)?)
        .assert("modules", modules_ok)
        .assert("labels", labels_ok)
        .witness(json!({ "failure": failure }))
        .conclude_all())
}

/// Under (S3), σ prime leaves no isolated vertex in Γ.
pub fn cor1_first_results(inst: &Instance) -> Result<TheoremReport> {
    let iso = inst.isolated();
    Ok(TheoremReport::new("cor1_first_results")
        .hyp("S3", inst.sk(3)?)
        .hyp("sigma_prime", inst.sigma_prime())
        .assert("no_isolated", iso.is_empty())
        .witness(json!({ "isolated": json_set(iso) }))
        .conclude_all())
}

fn unordered(c: PairClass) -> (u16, u16) {
    (c.forward.min(c.backward), c.forward.max(c.backward))
}

/// Under (S3) with no isolated vertex: each p-block carries one unordered
/// `{e,f}`, and mirrored q-blocks are related by `(e,f)`.
pub fn l1_l2(inst: &Instance) -> Result<TheoremReport> {
    let s = inst.s;
    let part = inst.partition();
    let mut l1 = true;
    let mut l2 = true;
    for (pkey, _) in part.p_blocks() {
        if pkey == PBlockKey::Ext {
            continue;
        }
        let keys: Vec<QBlockKey> = part.blocks.keys().copied().filter(|k| k.p_key() == pkey).collect();
        let first = unordered(keys[0].class().unwrap());
        l1 &= keys.iter().all(|k| unordered(k.class().unwrap()) == first);
        for &k in &keys {
            let c = k.class().unwrap();
            if c.is_symmetric() || !keys.contains(&k.mirrored()) {
                continue;
            }
            let (b, d) = (part.block(k), part.block(k.mirrored()));
            l2 &= b.iter().all(|u| d.iter().all(|w| s.class(u, w) == c));
        }
    }
    Ok(TheoremReport::new("l1_l2")
        .hyp("S3", inst.sk(3)?)
        .hyp("no_isolated", inst.isolated().is_empty())
        .assert("l1_one_pair_per_p_block", l1)
        .assert("l2_mirrored_blocks", l2)
        .conclude_all())
}

/// Under (S3) with σ prime: a symmetric q-block of size >= 2 makes its p-block
/// constant; an asymmetric one makes it linear with the same two labels.
pub fn l3(inst: &Instance) -> Result<TheoremReport> {
    let s = inst.s;
    let part = inst.partition();
    let mut ok = true;
    let mut failure = None;
    for (&key, &b) in &part.blocks {
        let Some(c) = key.class() else { continue };
        if b.len() < 2 {
            continue;
        }
        let shape = classify_block(s, part.p_block(key.p_key()));
        let good = match shape {
            BlockStructure::Constant { e: Some(e) } => c.is_symmetric() && e == c.forward,
            BlockStructure::Linear { e, f, .. } => !c.is_symmetric() && (e, f) == unordered(c),
            _ => false,
        };
        if !good {
            ok = false;
            failure.get_or_insert(key.to_string());
        }
    }
    Ok(TheoremReport::new("l3")
        .hyp("S3", inst.sk(3)?)
        .hyp("sigma_prime", inst.sigma_prime())
        .assert("block_shapes", ok)
        .witness(json!({ "failing_block": failure }))
        .conclude_all())
}

/// Under (S3) with no isolated vertex: each component is bipartite between
/// q-blocks of distinct p-blocks, and a q^a block meeting a component lies in it.
pub fn prop_component(inst: &Instance) -> Result<TheoremReport> {
    let part = inst.partition();
    let (bipartite, detail) = match inst.components() {
        Ok(cs) => {
            let ok = cs.iter().all(|c| c.key_d.is_none_or(|d| d.p_key() != c.key_b.p_key()));
            (ok, None)
        }
        Err(e) => (false, Some(e.to_string())),
    };
    let comps = inst.gamma().components();
    let contained = part
        .q_a()
        .all(|(_, b)| comps.iter().all(|&c| (c & b).is_empty() || b.is_subset(c)));
    Ok(TheoremReport::new("prop_component")
        .hyp("S3", inst.sk(3)?)
        .hyp("no_isolated", inst.isolated().is_empty())
        .assert("bipartite_between_p_blocks", bipartite)
        .assert("asymmetric_blocks_inside", contained)
        .witness(json!({ "error": detail }))
        .conclude_all())
}

/// Under (S5) no component of Γ contains an induced P5.
pub fn lem1_component(inst: &Instance) -> Result<TheoremReport> {
    let g = inst.graph();
    let mut found = None;
    for c in inst.gamma().components() {
        let (sub, ids) = g.induced(c);
        if let Some(p) = find_induced_p5(&sub)? {
            found = Some(p.iter().map(|i| ids[i]).collect::<Vec<_>>());
            break;
        }
    }
    Ok(TheoremReport::new("lem1_component")
        .hyp("S5", inst.sk(5)?)
        .assert("p5_free", found.is_none())
        .witness(json!({ "p5": found }))
        .conclude_all())
}

/// Every lemma-level check on one instance.
pub fn all_lemmas(inst: &Instance) -> Result<Vec<TheoremReport>> {
    let mut out = vec![
        lem_ehr(inst),
        rem_p(inst),
        lem2_modules(inst)?,
        cor1_oppo_modules(inst)?,
        fac1(inst)?,
        fac2(inst)?,
        fac3(inst)?,
        cor0(inst)?,
        cor1_first_results(inst)?,
        l1_l2(inst)?,
        l3(inst)?,
        prop_component(inst)?,
        lem1_component(inst)?,
    ];
    if inst.s.n() <= ORACLE_MAX_N {
        out.push(lem1_modules(inst)?);
    }
    Ok(out)
}

/// For a connected bipartite graph: an induced 2K2 exists iff an induced P5 does.
///
/// Without bipartiteness the equivalence fails (the bowtie has a 2K2 and no P5),
/// so bipartiteness is a hypothesis here.
pub fn check_2k2_p5(g: &Graph) -> Result<TheoremReport> {
    let two = find_induced_2k2(g)?;
    let p5 = find_induced_p5(g)?;
    Ok(TheoremReport::new("lem_2k2_p5")
        .hyp("connected", g.n() > 0 && g.is_connected())
        .hyp("bipartite", g.two_coloring().is_some())
        .assert("has_2k2", two.is_some())
        .assert("has_p5", p5.is_some())
        .conclude_equivalent(&["has_2k2", "has_p5"]))
}

/// For a bipartite graph on at least 4 vertices: (P5-free and prime) ⇔ critical ⇔ half graph.
pub fn check_half_graph_prop(g: &Graph) -> Result<TheoremReport> {
    let s = g.to_two_structure();
    let prime = is_prime(&s);
    let p5_free = find_induced_p5(g)?.is_none();
    let critical = prime && is_critical(&s).unwrap_or(false);
    Ok(TheoremReport::new("prop_half_graph")
        .hyp("bipartite", g.two_coloring().is_some())
        .hyp("n_ge_4", g.n() >= 4)
        .assert("p5_free_and_prime", p5_free && prime)
        .assert("critical", critical)
        .assert("half_graph", is_half_graph(g))
        .conclude_equivalent(&["p5_free_and_prime", "critical", "half_graph"]))
}

/// For a prime graph: critical ⇔ no prime induced subgraph on 5 vertices.
pub fn check_prime_five(g: &Graph) -> Result<TheoremReport> {
    let s = g.to_two_structure();
    let prime = is_prime(&s);
    let critical = prime && is_critical(&s).unwrap_or(false);
    let five = subsets_of_size(s.vertices(), 5).find(|&w| is_prime_in(&s, w));
    Ok(TheoremReport::new("fact_prime_five")
        .hyp("prime", prime)
        .assert("critical", critical)
        .assert("no_prime_5_subset", five.is_none())
        .witness(json!({ "prime_5_subset": five.map(json_set) }))
        .conclude_equivalent(&["critical", "no_prime_5_subset"]))
}
