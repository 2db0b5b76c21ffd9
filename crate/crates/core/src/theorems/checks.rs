use serde_json::json;

use super::{json_set, partially_critical_in, Instance, TheoremReport};
use crate::error::{Error, Result};
use crate::halfgraph::recognize_with_side;
use crate::modular::{is_module_in, is_prime, is_prime_in, is_w_critical_in, primality_graph};
use crate::par;
use crate::structure::TwoStructure;
use crate::vset::{subsets_of_size, VertexSet};

/// Largest outside set for which every subset is tested for the ε parity claim.
pub const EPS_FULL_MAX_OUTSIDE: usize = 14;

/// Parity: a prime σ with `|X̄| >= 2` has an edge in Γ.
pub fn check_parity(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    Ok(parity(&inst))
}

pub fn parity(inst: &Instance) -> TheoremReport {
    let edge = inst.gamma().edges().into_iter().next();
    let mut r = TheoremReport::new("parity")
        .hyp("sigma_prime", inst.sigma_prime())
        .hyp("outside_ge_2", inst.outside.len() >= 2)
        .assert("gamma_has_edge", edge.is_some());
    if let Some((v, w)) = edge {
        r = r.witness(json!({ "edge": [v, w] }));
    }
    r.conclude_all()
}

/// Assertion 3 of the component theorems for one component.
fn component_shape_ok(inst: &Instance, comp: VertexSet, critical: bool) -> bool {
    match comp.len() {
        2 => true,
        n if n >= 4 => {
            let g = inst.gamma_structure();
            if critical {
                partially_critical_in(g, comp, comp)
            } else {
                is_prime_in(g, comp)
            }
        }
        _ => false,
    }
}

/// Under (S1) and (S3): σ prime ⇔ every `σ[X ∪ V(C)]` prime ⇔ every component
/// has two vertices or is prime with at least four.
pub fn check_thm_main_1(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    thm_main_1(&inst)
}

pub fn thm_main_1(inst: &Instance) -> Result<TheoremReport> {
    let comps = inst.gamma().components();
    let bad2 = comps.iter().copied().find(|&c| !is_prime_in(inst.s, inst.x | c));
    let bad3 = comps.iter().copied().find(|&c| !component_shape_ok(inst, c, false));
    let r = TheoremReport::new("thm_main_1")
        .hyp("S3", inst.sk(3)?)
        .assert("a1", inst.sigma_prime())
        .assert("a2", bad2.is_none())
        .assert("a3", bad3.is_none())
        .witness(json!({
            "components": comps.iter().map(|&c| json_set(c)).collect::<Vec<_>>(),
            "a2_failure": bad2.map(json_set),
            "a3_failure": bad3.map(json_set),
        }));
    Ok(r.conclude_equivalent(&["a1", "a2", "a3"]))
}

/// Under (S1), (S3) and (S5): σ is X̄-critical ⇔ every `σ[X ∪ V(C)]` is
/// `V(C)`-critical ⇔ every component has two vertices or is critical with at least four.
pub fn check_thm_main_2(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    thm_main_2(&inst)
}

pub fn thm_main_2(inst: &Instance) -> Result<TheoremReport> {
    let comps = inst.gamma().components();
    let bad2 = comps.iter().copied().find(|&c| !partially_critical_in(inst.s, inst.x | c, c));
    let bad3 = comps.iter().copied().find(|&c| !component_shape_ok(inst, c, true));
    let r = TheoremReport::new("thm_main_2")
        .hyp("S5", inst.sk(5)?)
        .assert("a1", inst.x_critical())
        .assert("a2", bad2.is_none())
        .assert("a3", bad3.is_none())
        .witness(json!({
            "a2_failure": bad2.map(json_set),
            "a3_failure": bad3.map(json_set),
        }));
    Ok(r.conclude_equivalent(&["a1", "a2", "a3"]))
}

/// Least odd-size member of ε, searching all sizes when `|X̄|` is small and up
/// to `max_eps` otherwise.
fn odd_eps_member(inst: &Instance) -> Option<VertexSet> {
    let limit = if inst.outside.len() <= EPS_FULL_MAX_OUTSIDE { inst.outside.len() } else { inst.caps.max_eps };
    (1..=limit).step_by(2).find_map(|k| {
        let cand: Vec<VertexSet> = subsets_of_size(inst.outside, k).collect();
        par::find_map_first(&cand, |&y| is_prime_in(inst.s, inst.x | y).then_some(y))
    })
}

/// ((S5) and σ prime) ⇔ σ is X̄-critical; when it is, `|X̄|` and every member of ε are even.
pub fn check_cor_main_2(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    cor_main_2(&inst)
}

pub fn cor_main_2(inst: &Instance) -> Result<TheoremReport> {
    let left = inst.sk(5)? && inst.sigma_prime();
    let right = inst.x_critical();
    let odd = odd_eps_member(inst);
    let outside_even = inst.outside.len().is_multiple_of(2);
    let r = TheoremReport::new("cor_main_2")
        .assert("left", left)
        .assert("right", right)
        .assert("outside_even", outside_even)
        .assert("eps_even", odd.is_none())
        .witness(json!({ "odd_eps_member": odd.map(json_set) }));
    let ok = left == right && (!right || (outside_even && odd.is_none()));
    Ok(r.conclude(ok))
}

/// Is `σ - {v,y}` prime and `(X̄ - {v,y})`-critical?
pub fn is_partner(inst: &Instance, v: usize, y: usize) -> bool {
    let pair = VertexSet::pair(v, y);
    let domain = inst.s.vertices() - pair;
    is_prime_in(inst.s, domain) && is_w_critical_in(inst.s, domain, inst.outside - pair).unwrap_or(false)
}

pub(crate) fn require_partial_criticality(inst: &Instance) -> Result<()> {
    if !inst.sk(5)? {
        return Err(Error::HypothesesFailed("(S1), (S3) and (S5) do not all hold".into()));
    }
    if !inst.x_critical() {
        return Err(Error::HypothesesFailed("σ is not X̄-critical".into()));
    }
    Ok(())
}

/// Least `y` in `X̄ - {v}` with `σ - {v,y}` prime and `(X̄ - {v,y})`-critical.
pub fn find_partner(s: &TwoStructure, x: VertexSet, v: usize) -> Result<usize> {
    let inst = Instance::new(s, x)?;
    require_partial_criticality(&inst)?;
    partner(&inst, v)
}

pub fn partner(inst: &Instance, v: usize) -> Result<usize> {
    if !inst.outside.contains(v) {
        return Err(Error::HypothesesFailed(format!("{v} is not an outside vertex")));
    }
    let cand = inst.outside.without(v).to_vec();
    par::find_map_first(&cand, |&y| is_partner(inst, v, y).then_some(y)).ok_or(Error::NoPartner(v))
}

/// The partner read off the half-graph certificate of the component of `v`:
/// `φ_C(v)` on the B side and `φ_C⁻¹(v)` on the D side.
pub fn phi_prediction(inst: &Instance, v: usize) -> Option<usize> {
    let comps = inst.components().ok()?;
    let c = comps.iter().find(|c| c.vertices.contains(v))?;
    let cert = recognize_with_side(inst.graph(), c.vertices, c.side_b).ok()?;
    if c.side_b.contains(v) {
        cert.phi_of(v)
    } else {
        cert.phi_inverse(v)
    }
}

/// Under (S5) and X̄-criticality every outside vertex has a partner, and the
/// `φ_C` prediction is one.
pub fn check_thm_main_4(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    thm_main_4(&inst)
}

pub fn thm_main_4(inst: &Instance) -> Result<TheoremReport> {
    let ids = inst.outside.to_vec();
    let rows: Vec<(usize, Option<usize>, Option<usize>, bool)> = ids
        .iter()
        .map(|&v| {
            let p = partner(inst, v).ok();
            let phi = phi_prediction(inst, v);
            let phi_ok = phi.is_some_and(|y| is_partner(inst, v, y));
            (v, p, phi, phi_ok)
        })
        .collect();
    let r = TheoremReport::new("thm_main_4")
        .hyp("S5", inst.sk(5)?)
        .hyp("x_critical", inst.x_critical())
        .assert("all_have_partner", rows.iter().all(|r| r.1.is_some()))
        .assert("phi_prediction_valid", rows.iter().all(|r| r.3))
        .assert("least_partner_is_phi", rows.iter().all(|r| r.1.is_some() && r.1 == r.2))
        .witness(json!(rows
            .iter()
            .map(|&(v, p, phi, _)| json!({ "vertex": v, "partner": p, "phi": phi }))
            .collect::<Vec<_>>()));
    let ok = r.get("all_have_partner") && r.get("phi_prediction_valid");
    Ok(r.conclude(ok))
}

/// Least `{v,w} ⊆ X̄` with `σ - {v,w}` prime.
pub fn least_noncritical_pair(inst: &Instance) -> Option<(usize, usize)> {
    let pairs: Vec<VertexSet> = subsets_of_size(inst.outside, 2).collect();
    par::find_map_first(&pairs, |&p| is_prime_in(inst.s, inst.s.vertices() - p).then_some(p))
        .map(|p| (p.min().unwrap(), p.max().unwrap()))
}

/// For prime σ with `|X̄| >= 6`, the least pair `{v,w} ⊆ X̄` with `σ - {v,w}` prime.
pub fn find_noncritical_pair(s: &TwoStructure, x: VertexSet) -> Result<(usize, usize)> {
    let inst = Instance::new(s, x)?;
    if inst.outside.len() < 6 {
        return Err(Error::HypothesesFailed(format!("|X̄| = {} < 6", inst.outside.len())));
    }
    if !inst.sigma_prime() {
        return Err(Error::HypothesesFailed("σ is not prime".into()));
    }
    least_noncritical_pair(&inst).ok_or(Error::NoPair)
}

fn pair_report(name: &str, inst: &Instance, hyps: &[(&str, bool)]) -> TheoremReport {
    let pair = least_noncritical_pair(inst);
    let mut r = TheoremReport::new(name).hyp("sigma_prime", inst.sigma_prime());
    for &(h, v) in hyps {
        r = r.hyp(h, v);
    }
    r = r.assert("pair_exists", pair.is_some());
    if let Some((v, w)) = pair {
        r = r.witness(json!({ "pair": [v, w] }));
    }
    r.conclude_all()
}

pub fn check_thm_pi(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    Ok(thm_pi(&inst))
}

pub fn thm_pi(inst: &Instance) -> TheoremReport {
    pair_report("thm_pi", inst, &[("outside_ge_6", inst.outside.len() >= 6)])
}

/// Tournament version: `|X̄| >= 4` suffices.
pub fn check_thm_mys(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    Ok(thm_mys(&inst))
}

pub fn thm_mys(inst: &Instance) -> TheoremReport {
    pair_report(
        "thm_mys",
        inst,
        &[("tournament", inst.s.is_tournament()), ("outside_ge_4", inst.outside.len() >= 4)],
    )
}

/// `q^a ≠ ∅` and `|X̄| >= 4` suffice.
pub fn check_thm_mys_ext(s: &TwoStructure, x: VertexSet) -> Result<TheoremReport> {
    let inst = Instance::new(s, x)?;
    Ok(thm_mys_ext(&inst))
}

pub fn thm_mys_ext(inst: &Instance) -> TheoremReport {
    pair_report(
        "thm_mys_ext",
        inst,
        &[
            ("q_a_nonempty", inst.partition().q_a().next().is_some()),
            ("outside_ge_4", inst.outside.len() >= 4),
        ],
    )
}

/// A prime σ with at least 7 vertices has a nonempty primality graph.
pub fn check_schmerl_trotter(s: &TwoStructure) -> Result<TheoremReport> {
    let prime = is_prime(s);
    let mut r = TheoremReport::new("schmerl_trotter").hyp("sigma_prime", prime).hyp("n_ge_7", s.n() >= 7);
    let edge = if prime { primality_graph(s)?.edges().into_iter().next() } else { None };
    r = r.assert("primality_graph_nonempty", edge.is_some());
    if let Some((v, w)) = edge {
        r = r.witness(json!({ "edge": [v, w] }));
    }
    Ok(r.conclude_all())
}

/// For prime σ with at least 5 vertices and a critical vertex `v`: `v` has
/// degree at most 2 in ℙ(σ); degree 1 makes `V - ({v} ∪ N(v))` a module of
/// `σ - v`; degree 2 makes `N(v)` a module of `σ - v`.
pub fn check_primality_graph_lemma(s: &TwoStructure) -> Result<TheoremReport> {
    let prime = is_prime(s);
    let r = TheoremReport::new("lem_primality_graph").hyp("sigma_prime", prime).hyp("n_ge_5", s.n() >= 5);
    if !prime {
        return Ok(r.assert("degree_le_2", true).assert("degree_1_module", true).assert("degree_2_module", true));
    }
    let pg = primality_graph(s)?;
    let all = s.vertices();
    let (mut deg_ok, mut one_ok, mut two_ok) = (true, true, true);
    let mut failure = None;
    for v in all {
        if is_prime_in(s, all.without(v)) {
            continue;
        }
        let nb = pg.neighbors(v);
        let dom = all.without(v);
        let ok = match nb.len() {
            0 => true,
            1 => {
                let ok = is_module_in(s, dom, dom - nb);
                one_ok &= ok;
                ok
            }
            2 => {
                let ok = is_module_in(s, dom, nb);
                two_ok &= ok;
                ok
            }
            _ => {
                deg_ok = false;
                false
            }
        };
        if !ok && failure.is_none() {
            failure = Some(v);
        }
    }
    Ok(r.assert("degree_le_2", deg_ok)
        .assert("degree_1_module", one_ok)
        .assert("degree_2_module", two_ok)
        .witness(json!({ "failing_vertex": failure }))
        .conclude_all())
}

/// Every applicable instance-level check, in a fixed order.
pub fn check_all(s: &TwoStructure, x: VertexSet) -> Result<Vec<TheoremReport>> {
    all_checks(&Instance::new(s, x)?)
}

pub fn all_checks(inst: &Instance) -> Result<Vec<TheoremReport>> {
    let mut out = vec![
        parity(inst),
        thm_main_1(inst)?,
        thm_main_2(inst)?,
        cor_main_2(inst)?,
        thm_main_4(inst)?,
        thm_pi(inst),
        thm_mys(inst),
        thm_mys_ext(inst),
    ];
    if inst.sk(5)? && inst.x_critical() {
        out.push(super::description_facts(inst)?);
    }
    out.extend(super::all_lemmas(inst)?);
    out.push(check_schmerl_trotter(inst.s)?);
    out.push(check_primality_graph_lemma(inst.s)?);
    Ok(out)
}

/// Names accepted by [`run_check`].
pub const CHECK_NAMES: [&str; 13] = [
    "all",
    "parity",
    "thm-main-1",
    "thm-main-2",
    "cor-main-2",
    "thm-main-4",
    "thm-pi",
    "thm-mys",
    "thm-mys-ext",
    "description-facts",
    "lemmas",
    "schmerl-trotter",
    "primality-graph",
];

/// Runs the check called `name`; `all` runs [`all_checks`].
pub fn run_check(inst: &Instance, name: &str) -> Result<Vec<TheoremReport>> {
    Ok(match name {
        "all" => all_checks(inst)?,
        "parity" => vec![parity(inst)],
        "thm-main-1" => vec![thm_main_1(inst)?],
        "thm-main-2" => vec![thm_main_2(inst)?],
        "cor-main-2" => vec![cor_main_2(inst)?],
        "thm-main-4" => vec![thm_main_4(inst)?],
        "thm-pi" => vec![thm_pi(inst)],
        "thm-mys" => vec![thm_mys(inst)],
        "thm-mys-ext" => vec![thm_mys_ext(inst)],
        "description-facts" => {
            require_partial_criticality(inst)?;
            vec![super::description_facts(inst)?]
        }
        "lemmas" => super::all_lemmas(inst)?,
        "schmerl-trotter" => vec![check_schmerl_trotter(inst.s)?],
        "primality-graph" => vec![check_primality_graph_lemma(inst.s)?],
        other => return Err(Error::HypothesesFailed(format!("unknown check `{other}`"))),
    })
}
