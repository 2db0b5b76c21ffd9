use proptest::prelude::*;
use twostruct::corpus::{first_prime_subset, random_spec, Regime};
use twostruct::format::{parse, to_2s};
use twostruct::graph::Graph;
use twostruct::halfgraph::{build_h2n, recognize_half_graph};
use twostruct::iso::{are_isomorphic, IsoOptions};
use twostruct::modular::{enumerate_modules, is_module, is_prime, is_prime_in, primality_graph};
use twostruct::outside::outside_partition;
use twostruct::synth::{build_partially_critical, random_prime, random_two_structure};
use twostruct::theorems::*;
use twostruct::{TwoStructure, VertexSet};

fn structure() -> impl Strategy<Value = TwoStructure> {
    (1usize..=6, 1usize..=3, any::<u64>()).prop_map(|(n, k, seed)| random_two_structure(n, k, seed))
}

fn prime_instance() -> impl Strategy<Value = (TwoStructure, VertexSet)> {
    (5usize..=8, 2usize..=3, any::<u64>()).prop_filter_map("no prime subset", |(n, k, seed)| {
        let s = random_prime(n, k, seed, 2000).ok()?;
        let x = first_prime_subset(&s)?;
        Some((s, x))
    })
}

fn brute_is_module(s: &TwoStructure, m: VertexSet) -> bool {
    let Some(a) = m.min() else { return true };
    (0..s.n())
        .filter(|&v| !m.contains(v))
        .all(|v| m.iter().all(|b| s.label(v, a) == s.label(v, b) && s.label(a, v) == s.label(b, v)))
}

fn permuted(s: &TwoStructure, perm: &[usize]) -> TwoStructure {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    TwoStructure::from_fn(s.n(), s.k(), |u, v| s.label(inv[u], inv[v]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn modules_match_definition(s in structure()) {
        let mods = enumerate_modules(&s).unwrap();
        let n = s.n();
        let brute: Vec<VertexSet> = (0..1u64 << n)
            .map(|b| (0..n).filter(|&v| b >> v & 1 == 1).collect::<VertexSet>())
            .filter(|&m| brute_is_module(&s, m))
            .collect();
        prop_assert_eq!(mods.len(), brute.len());
        for m in &brute {
            prop_assert!(is_module(&s, *m));
        }
    }

    #[test]
    fn overlapping_modules_close(s in structure()) {
        let mods = enumerate_modules(&s).unwrap();
        for &a in &mods {
            for &b in &mods {
                if !(a & b).is_empty() {
                    prop_assert!(is_module(&s, a | b));
                    prop_assert!(is_module(&s, a & b));
                    if !a.is_subset(b) {
                        prop_assert!(is_module(&s, b - a));
                    }
                }
            }
        }
    }

    #[test]
    fn primality_is_label_invariant(s in structure(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..s.n()).collect();
        let mut rng = seed;
        for i in (1..perm.len()).rev() {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (rng >> 33) as usize % (i + 1));
        }
        let t = permuted(&s, &perm);
        prop_assert_eq!(is_prime(&s), is_prime(&t));
        prop_assert!(are_isomorphic(&s, &t, IsoOptions::default()).unwrap().is_some());
    }

    #[test]
    fn text_and_json_round_trip(s in structure()) {
        prop_assert_eq!(parse(&to_2s(&s)).unwrap(), s.clone());
        let j = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<TwoStructure>(&j).unwrap(), s);
    }

    #[test]
    fn half_graphs_recognized_under_relabeling(n in 1usize..=7, shift in 0usize..14) {
        let h = build_h2n(n);
        let m = 2 * n;
        let g = Graph::from_edges(m, &h.edges().iter().map(|&(u, v)| ((u + shift) % m, (v + shift) % m)).collect::<Vec<_>>()).unwrap();
        let cert = recognize_half_graph(&g).unwrap();
        prop_assert_eq!(cert.rebuild_edges(), g.edges());
        prop_assert_eq!(cert.side_x.len(), n);
    }

    #[test]
    fn outside_partition_covers_outside((s, x) in prime_instance()) {
        let p = outside_partition(&s, x).unwrap();
        let mut seen = VertexSet::EMPTY;
        for b in p.blocks.values() {
            prop_assert!((seen & *b).is_empty());
            seen |= *b;
        }
        prop_assert_eq!(seen, x.complement(s.n()));
        prop_assert_eq!(p.ext().iter().all(|v| is_prime_in(&s, x.with(v))), true);
    }

    #[test]
    fn gamma_edges_are_prime_extensions((s, x) in prime_instance()) {
        let inst = Instance::new(&s, x).unwrap();
        let out = x.complement(s.n()).to_vec();
        for (i, &v) in out.iter().enumerate() {
            for &w in &out[i + 1..] {
                let (sub, _) = s.induced(x.with(v).with(w)).unwrap();
                prop_assert_eq!(inst.gamma().has_edge(v, w), is_prime(&sub));
            }
        }
    }

    #[test]
    fn random_instances_never_contradict((s, x) in prime_instance()) {
        for r in check_all(&s, x).unwrap() {
            prop_assert!(r.is_consistent(), "{:?}", r);
        }
    }

    #[test]
    fn prime_structures_have_small_primality_degree(s in (5usize..=8, any::<u64>()).prop_filter_map("not prime", |(n, seed)| random_prime(n, 2, seed, 2000).ok())) {
        prop_assert!(check_primality_graph_lemma(&s).unwrap().is_consistent());
        if s.n() >= 7 {
            prop_assert!(primality_graph(&s).unwrap().edge_count() > 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesized_structures_round_trip(regime in prop::sample::select(Regime::ALL.to_vec()), seed in any::<u64>()) {
        let spec = random_spec(regime, seed);
        prop_assert!(spec.validate().is_ok());
        if let Ok(pc) = build_partially_critical(&spec) {
            let bundle = describe(&pc.sigma, pc.x).unwrap();
            prop_assert_eq!(reconstruct(&bundle).unwrap(), pc.sigma.clone());
            prop_assert_eq!(bundle.components.len(), spec.components.len());
            for r in check_all(&pc.sigma, pc.x).unwrap() {
                prop_assert!(r.is_consistent(), "{:?}", r);
            }
        }
    }
}
