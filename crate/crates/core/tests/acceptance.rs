//! One pass/fail line per acceptance criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twostruct::corpus::*;
use twostruct::format::{parse, to_2s};
use twostruct::graph::Graph;
use twostruct::halfgraph::{build_h2n, recognize_half_graph, is_p5_free};
use twostruct::modular::{enumerate_modules, is_critical, is_prime, primality_graph, primality_graph_in};
use twostruct::outside::{epsilon_sets, outside_partition, Caps, QBlockKey};
use twostruct::synth::random_two_structure;
use twostruct::theorems::*;
use twostruct::{TwoStructure, VertexSet};

const CRIT1_LIMIT: Duration = Duration::from_secs(1);
const CRIT2_LIMIT: Duration = Duration::from_secs(300);
const CRIT5_LIMIT: Duration = Duration::from_secs(600);
const CRIT3_RANDOM: usize = 10_000;
const SYNTH_GRAPH: usize = 250;
const SYNTH_TOURNAMENT: usize = 250;
const SYNTH_MIXED: usize = 100;
const RANDOM_PRIMES: usize = 1000;

fn line(id: u32, name: &str, ok: bool, detail: String) -> bool {
    println!("criterion {id} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn set(v: &[usize]) -> VertexSet {
    v.iter().collect()
}

/// Subsets that are modules, by the definition.
fn brute_modules(s: &TwoStructure) -> Vec<VertexSet> {
    let n = s.n();
    (0..1u64 << n)
        .map(|bits| (0..n).filter(|&v| bits >> v & 1 == 1).collect::<VertexSet>())
        .filter(|&m| {
            (0..n).filter(|&v| !m.contains(v)).all(|v| {
                let mut it = m.iter();
                let Some(a) = it.next() else { return true };
                it.all(|b| s.label(v, a) == s.label(v, b) && s.label(a, v) == s.label(b, v))
            })
        })
        .collect()
}

fn brute_prime(s: &TwoStructure) -> bool {
    s.n() >= 3 && brute_modules(s).iter().all(|m| m.len() <= 1 || m.len() == s.n())
}

/// Equal sides, nested neighbourhoods of sizes |Y|, ..., 1.
fn brute_half_graph(g: &Graph) -> bool {
    let Some((a, b)) = g.two_coloring() else { return false };
    if !g.is_connected() || a.len() != b.len() {
        return false;
    }
    let mut sizes: Vec<usize> = a.iter().map(|v| g.neighbors(v).len()).collect();
    sizes.sort_unstable();
    let mut nbhds: Vec<VertexSet> = a.iter().map(|v| g.neighbors(v)).collect();
    nbhds.sort_by_key(|s| s.len());
    sizes == (1..=b.len()).collect::<Vec<_>>() && nbhds.windows(2).all(|w| w[0].is_subset(w[1]))
}

fn criterion_1() -> bool {
    let t = Instant::now();
    let mut ok = true;
    for n in 1..=6 {
        let g = build_h2n(n);
        let s = g.to_two_structure();
        if n >= 2 {
            ok &= is_prime(&s) && is_critical(&s).unwrap();
        }
        let cert = recognize_half_graph(&g).unwrap();
        ok &= cert.side_x == (0..n).map(|i| 2 * i).collect::<Vec<_>>();
        ok &= cert.rebuild_edges() == g.edges();
    }
    let el = t.elapsed();
    line(1, "half-graph pillar", ok && el < CRIT1_LIMIT, format!("n=1..6, {el:?} (limit {CRIT1_LIMIT:?})"))
}

fn criterion_2() -> bool {
    let t = Instant::now();
    let mut total = 0;
    let mut bad = 0;
    for n in 4..=8 {
        let graphs = connected_bipartite_graphs(n);
        total += graphs.len();
        bad += sweep(&graphs, |g| {
            let s = g.to_two_structure();
            let prime = is_prime(&s);
            let left = prime && is_p5_free(g).unwrap();
            let critical = prime && is_critical(&s).unwrap();
            let half = recognize_half_graph(g).is_ok();
            !(left == critical && critical == half && half == brute_half_graph(g))
        })
        .into_iter()
        .filter(|&b| b)
        .count();
    }
    let el = t.elapsed();
    line(
        2,
        "bipartite equivalence",
        bad == 0 && el < CRIT2_LIMIT,
        format!("{total} graphs, {bad} discrepancies, {el:?} (limit {CRIT2_LIMIT:?})"),
    )
}

fn criterion_3() -> bool {
    let mut pool: Vec<TwoStructure> = all_structures(3, 2).chain(all_structures(4, 2)).collect();
    let exhaustive = pool.len();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..CRIT3_RANDOM {
        pool.push(random_two_structure(rng.gen_range(1..=6), rng.gen_range(1..=3), rng.gen()));
    }
    let bad = sweep(&pool, |s| {
        let lib: BTreeSet<VertexSet> = enumerate_modules(s).unwrap().into_iter().collect();
        let brute: BTreeSet<VertexSet> = brute_modules(s).into_iter().collect();
        let trivial = lib.iter().all(|m| m.len() <= 1 || m.len() == s.n());
        lib != brute || is_prime(s) != (s.n() >= 3 && trivial) || is_prime(s) != brute_prime(s)
    })
    .into_iter()
    .filter(|&b| b)
    .count();
    line(3, "oracle equivalence", bad == 0, format!("{exhaustive} exhaustive + {CRIT3_RANDOM} random, {bad} discrepancies"))
}

fn g8() -> TwoStructure {
    let e = [(0, 1), (1, 2), (2, 3), (1, 6), (1, 7), (4, 6), (4, 7), (5, 7)];
    TwoStructure::from_graph(8, &e, false).unwrap()
}

fn criterion_4() -> bool {
    let s = g8();
    let x = set(&[0, 1, 2, 3]);
    let p = outside_partition(&s, x).unwrap();
    let mut ok = p.ext().is_empty()
        && p.angle_union() == set(&[4, 5])
        && p.alpha_union(0) == set(&[6, 7])
        && p.block(QBlockKey::Angle { e: 0, f: 0 }) == set(&[4, 5])
        && p.blocks.len() == 2;
    let inst = Instance::new(&s, x).unwrap();
    ok &= recognize_half_graph(&inst.graph().induced(set(&[4, 5, 6, 7])).0).is_ok();
    ok &= inst.graph().edge_count() == 3;
    let eps = epsilon_sets(&s, x, 5, &Caps::default()).unwrap();
    ok &= !eps.is_empty() && eps.iter().all(|y| y.len() % 2 == 0);
    for r in [check_thm_main_1(&s, x), check_thm_main_2(&s, x), check_cor_main_2(&s, x)] {
        let r = r.unwrap();
        ok &= r.is_consistent() && r.assertions.values().all(|&a| a);
    }
    ok &= reconstruct(&describe(&s, x).unwrap()).unwrap() == s;
    ok &= parse(&to_2s(&s)).unwrap() == s;
    line(4, "G8 fixture", ok, format!("{} ε members up to size 5", eps.len()))
}

struct Case {
    inst: CorpusInstance,
    synthesized: bool,
}

fn corpus() -> (Vec<Case>, String) {
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    for (regime, count, seed) in
        [(Regime::Graph, SYNTH_GRAPH, 10_000), (Regime::Tournament, SYNTH_TOURNAMENT, 20_000), (Regime::Mixed, SYNTH_MIXED, 30_000)]
    {
        let (built, stats) = synthesized_corpus(regime, count, seed);
        notes.push(format!("{regime:?} {}/{} built", stats.built, stats.attempts));
        for (i, (_, pc)) in built.iter().enumerate() {
            cases.push(Case { inst: synth_instance(format!("{regime:?}-{i}"), pc), synthesized: true });
        }
    }
    for inst in random_prime_instances(RANDOM_PRIMES, 5) {
        cases.push(Case { inst, synthesized: false });
    }
    (cases, notes.join(", "))
}

#[derive(Default)]
struct SweepOutcome {
    counterexamples: Vec<String>,
    partner_failures: Vec<String>,
    pair_failures: Vec<String>,
    pairs_checked: usize,
    facts_checked: usize,
}

fn criterion_5(cases: &[Case]) -> bool {
    let t = Instant::now();
    let rows = sweep(cases, |c| {
        let (s, x) = (&c.inst.sigma, c.inst.x);
        let mut out = SweepOutcome::default();
        let inst = Instance::new(s, x).unwrap();
        let mut reports = vec![
            check_parity(s, x).unwrap(),
            check_thm_main_1(s, x).unwrap(),
            check_thm_main_2(s, x).unwrap(),
            check_cor_main_2(s, x).unwrap(),
            check_thm_mys_ext(s, x).unwrap(),
        ];
        let qualifies = inst.sigma_prime() && inst.sk(5).unwrap() && inst.x_critical();
        if qualifies {
            reports.push(check_description_facts(s, x).unwrap());
            out.facts_checked += 1;
        }
        for r in reports.iter().filter(|r| !r.is_consistent()) {
            out.counterexamples.push(format!("{} {}", c.inst.name, r.theorem));
        }
        if c.synthesized {
            let r = check_thm_main_4(s, x).unwrap();
            let ok = r.get("all_have_partner") && r.get("phi_prediction_valid");
            let each = inst.outside.iter().all(|v| find_partner(s, x, v).is_ok());
            if !(ok && each) {
                out.partner_failures.push(c.inst.name.clone());
            }
        }
        if inst.outside.len() >= 6 {
            out.pairs_checked += 1;
            if find_noncritical_pair(s, x).is_err() {
                out.pair_failures.push(c.inst.name.clone());
            }
        }
        out
    });
    let el = t.elapsed();
    let count = |f: fn(&SweepOutcome) -> usize| rows.iter().map(f).sum::<usize>();
    let cex = count(|o| o.counterexamples.len());
    let partner = count(|o| o.partner_failures.len());
    let pair = count(|o| o.pair_failures.len());
    for o in &rows {
        for s in o.counterexamples.iter().chain(&o.partner_failures).chain(&o.pair_failures) {
            println!("  failure: {s}");
        }
    }
    let synth = cases.iter().filter(|c| c.synthesized).count();
    line(
        5,
        "theorem sweep",
        synth >= 500 && cex + partner + pair == 0 && el < CRIT5_LIMIT,
        format!(
            "{synth} synthesized + {} random prime, {cex} counterexamples, {partner} partner failures, \
             {pair}/{} pair failures, {} description checks, {el:?} (limit {CRIT5_LIMIT:?})",
            cases.len() - synth,
            count(|o| o.pairs_checked),
            count(|o| o.facts_checked),
        ),
    )
}

fn criterion_6(cases: &[Case]) -> bool {
    let mut pool: Vec<(String, TwoStructure, Option<VertexSet>)> =
        cases.iter().map(|c| (c.inst.name.clone(), c.inst.sigma.clone(), c.synthesized.then_some(c.inst.x))).collect();
    pool.extend(all_graphs(6).map(|g| g.to_two_structure()).filter(is_prime).map(|s| ("graph6".into(), s, None)));
    pool.extend(all_tournaments(6).filter(is_prime).map(|s| ("tournament6".into(), s, None)));
    let rows = sweep(&pool, |(name, s, x)| {
        let mut fails = Vec::new();
        if !is_prime(s) {
            return (fails, 0);
        }
        if s.n() >= 7 && primality_graph(s).unwrap().edge_count() == 0 {
            fails.push(format!("{name}: empty primality graph"));
        }
        if !check_primality_graph_lemma(s).unwrap().is_consistent() {
            fails.push(format!("{name}: degree lemma"));
        }
        let mut restricted = 0;
        if let Some(x) = x {
            let inst = Instance::new(s, *x).unwrap();
            let comps: Vec<VertexSet> = inst.components().unwrap().iter().filter(|c| c.size() >= 6).map(|c| c.vertices).collect();
            if !comps.is_empty() {
                let pg = primality_graph(s).unwrap();
                let gs = inst.graph().to_two_structure();
                for c in comps {
                    restricted += 1;
                    let pc = primality_graph_in(&gs, c).unwrap();
                    if pg.induced(c).0.edges() != pc.induced(c).0.edges() {
                        fails.push(format!("{name}: restriction to {c}"));
                    }
                }
            }
        }
        (fails, restricted)
    });
    let fails: Vec<&String> = rows.iter().flat_map(|r| &r.0).collect();
    for f in &fails {
        println!("  failure: {f}");
    }
    let restricted: usize = rows.iter().map(|r| r.1).sum();
    line(6, "primality graph", fails.is_empty() && restricted > 0, format!("{} prime structures, {restricted} components with v(C) >= 6, {} failures", pool.len(), fails.len()))
}

fn criterion_7(cases: &[Case]) -> bool {
    let rows = sweep(cases, |c| {
        let inst = Instance::new(&c.inst.sigma, c.inst.x).unwrap();
        if !(inst.sigma_prime() && inst.sk(5).unwrap() && inst.x_critical()) {
            return None;
        }
        Some(reconstruct(&describe(&c.inst.sigma, c.inst.x).unwrap()).unwrap() == c.inst.sigma)
    });
    let qualifying = rows.iter().flatten().count();
    let exact = rows.iter().flatten().filter(|&&b| b).count();
    line(7, "round trip", qualifying > 0 && exact == qualifying, format!("{exact}/{qualifying} qualifying instances exact"))
}

fn main() {
    let mut ok = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4()];
    let (cases, notes) = corpus();
    println!("corpus: {notes}");
    ok.push(criterion_5(&cases));
    ok.push(criterion_6(&cases));
    ok.push(criterion_7(&cases));
    let passed = ok.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
