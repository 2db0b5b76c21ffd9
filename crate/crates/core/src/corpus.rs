//! CorpusInstance corpora: exhaustive small families, random primes with a prime
//! substructure, and random synthesis specs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;
use crate::modular::{is_prime, is_prime_in};
use crate::outside::{PBlockKey, QBlockKey};
use crate::par;
use crate::structure::{Label, PairClass, TwoStructure};
use crate::synth::{build_partially_critical, random_prime, ComponentSpec, PartiallyCritical, SynthSpec};
use crate::vset::{subsets_of_size, VertexSet};

/// Every structure on `n` vertices with labels below `k`, in counting order.
pub fn all_structures(n: usize, k: usize) -> impl Iterator<Item = TwoStructure> {
    let slots = n * n.saturating_sub(1);
    let total = (k as u64).pow(slots as u32);
    (0..total).map(move |mut code| {
        let mut labels = vec![0 as Label; n * n];
        for v in 0..n {
            for w in 0..n {
                if v != w {
                    labels[v * n + w] = (code % k as u64) as Label;
                    code /= k as u64;
                }
            }
        }
        TwoStructure::from_fn(n, k, |v, w| labels[v * n + w])
    })
}

/// Every graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        let mut g = Graph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

/// Every tournament on `n` vertices, as a 2-structure.
pub fn all_tournaments(n: usize) -> impl Iterator<Item = TwoStructure> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        let mut arc = vec![false; n * n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            let fwd = mask >> i & 1 == 1;
            arc[u * n + v] = fwd;
            arc[v * n + u] = !fwd;
        }
        TwoStructure::from_fn(n, 2, |u, v| arc[u * n + v] as Label)
    })
}

/// Connected bipartite graphs on `n` vertices: sides `0..a` and `a..n` for
/// every `a <= n/2` and every edge set between them. Each isomorphism class
/// appears at least once.
pub fn connected_bipartite_graphs(n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for a in 1..=n / 2 {
        let cross: Vec<(usize, usize)> = (0..a).flat_map(|u| (a..n).map(move |v| (u, v))).collect();
        for mask in 0..1u64 << cross.len() {
            let mut g = Graph::new(n);
            for (i, &(u, v)) in cross.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

/// The lexicographically first prime subset of least size, proper in `V`.
pub fn first_prime_subset(s: &TwoStructure) -> Option<VertexSet> {
    (3..s.n()).find_map(|k| subsets_of_size(s.vertices(), k).find(|&w| is_prime_in(s, w)))
}

/// A structure with its designated X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusInstance {
    pub name: String,
    pub sigma: TwoStructure,
    pub x: VertexSet,
}

/// Random prime structures with `5 <= n <= 9` and `k` in `{2,3}`, each with
/// X the lexicographically first minimal prime subset.
pub fn random_prime_instances(count: usize, seed: u64) -> Vec<CorpusInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(5..=9);
        let k = rng.gen_range(2..=3);
        let Ok(s) = random_prime(n, k, rng.gen(), 1000) else { continue };
        if let Some(x) = first_prime_subset(&s) {
            out.push(CorpusInstance { name: format!("random-prime-{}", out.len()), sigma: s, x });
        }
    }
    out
}

/// Label regime of a synthesized instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Graph,
    Tournament,
    Mixed,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Graph, Regime::Tournament, Regime::Mixed];

    pub fn k(self) -> usize {
        match self {
            Regime::Mixed => 3,
            _ => 2,
        }
    }

    fn classes(self) -> Vec<PairClass> {
        match self {
            Regime::Graph => vec![PairClass::new(0, 0), PairClass::new(1, 1)],
            Regime::Tournament => vec![PairClass::new(0, 1), PairClass::new(1, 0)],
            Regime::Mixed => (0..3).flat_map(|e| (0..3).map(move |f| PairClass::new(e, f))).collect(),
        }
    }

    fn base_sizes(self) -> std::ops::RangeInclusive<usize> {
        match self {
            Regime::Tournament => 5..=7,
            _ => 4..=7,
        }
    }
}

/// A random prime base of the regime on `n` vertices.
pub fn random_base(regime: Regime, n: usize, rng: &mut ChaCha8Rng) -> TwoStructure {
    let classes = regime.classes();
    loop {
        let mut table = vec![0 as Label; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let c = *classes.choose(rng).unwrap();
                table[u * n + v] = c.forward;
                table[v * n + u] = c.backward;
            }
        }
        let s = TwoStructure::from_fn(n, regime.k(), |u, v| table[u * n + v]);
        if is_prime(&s) {
            return s;
        }
    }
}

fn random_key(regime: Regime, nx: usize, pair_of: &[(PBlockKey, PairClass)], avoid: Option<PBlockKey>, rng: &mut ChaCha8Rng) -> Option<QBlockKey> {
    let p = match rng.gen_range(0..=nx) {
        0 => PBlockKey::Angle,
        a => PBlockKey::Alpha(a - 1),
    };
    if Some(p) == avoid {
        return None;
    }
    let c = match pair_of.iter().find(|(k, _)| *k == p) {
        Some(&(_, c)) if rng.gen_bool(0.5) => c.reversed(),
        Some(&(_, c)) => c,
        None => *regime.classes().choose(rng).unwrap(),
    };
    Some(match p {
        PBlockKey::Angle => QBlockKey::Angle { e: c.forward, f: c.backward },
        PBlockKey::Alpha(alpha) => QBlockKey::Alpha { alpha, e: c.forward, f: c.backward },
        PBlockKey::Ext => unreachable!(),
    })
}

/// A random spec that passes validation: 1 to 3 components, at most 12 outside vertices.
pub fn random_spec(regime: Regime, seed: u64) -> SynthSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = rng.gen_range(regime.base_sizes());
    let base = random_base(regime, nx, &mut rng);
    loop {
        let count = rng.gen_range(1..=3);
        let mut budget = 6;
        let mut pair_of: Vec<(PBlockKey, PairClass)> = Vec::new();
        let mut components = Vec::new();
        for _ in 0..count {
            if budget == 0 {
                break;
            }
            let m = rng.gen_range(1..=budget.min(3));
            let mut placed = None;
            for _ in 0..50 {
                let Some(b) = random_key(regime, nx, &pair_of, None, &mut rng) else { continue };
                let Some(d) = random_key(regime, nx, &pair_of, Some(b.p_key()), &mut rng) else { continue };
                let s_c = *regime.classes().choose(&mut rng).unwrap();
                let mut trial = components.clone();
                trial.push(ComponentSpec { m, b, d, s_c });
                let spec = SynthSpec { base: base.clone(), k: regime.k(), components: trial };
                if spec.validate().is_ok() {
                    placed = Some((spec.components, b, d));
                    break;
                }
            }
            if let Some((cs, b, d)) = placed {
                components = cs;
                for key in [b, d] {
                    if !pair_of.iter().any(|(p, _)| *p == key.p_key()) {
                        pair_of.push((key.p_key(), key.class().unwrap()));
                    }
                }
                budget -= m;
            }
        }
        if !components.is_empty() {
            return SynthSpec { base, k: regime.k(), components };
        }
    }
}

/// Outcome counts of a synthesis corpus run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SynthStats {
    pub attempts: usize,
    pub built: usize,
    pub unrealizable: usize,
}

/// Up to `count` synthesized instances of the regime from consecutive seeds,
/// skipping specs that fail post-verification. Gives up after `20 * count` attempts.
pub fn synthesized_corpus(regime: Regime, count: usize, seed: u64) -> (Vec<(SynthSpec, PartiallyCritical)>, SynthStats) {
    let mut out = Vec::with_capacity(count);
    let mut stats = SynthStats::default();
    let batch = 64;
    let mut next = seed;
    while out.len() < count && stats.attempts < 20 * count.max(1) {
        let seeds: Vec<u64> = (next..next + batch).collect();
        next += batch;
        let results = par::map(&seeds, |&sd| {
            let spec = random_spec(regime, sd);
            let built = build_partially_critical(&spec);
            (spec, built)
        });
        for (spec, built) in results {
            if out.len() == count {
                break;
            }
            stats.attempts += 1;
            match built {
                Ok(pc) => {
                    stats.built += 1;
                    out.push((spec, pc));
                }
                Err(Error::PostVerificationFailed(_)) | Err(Error::SpecInvalid(_)) => stats.unrealizable += 1,
                Err(e) => panic!("unexpected synthesis error: {e}"),
            }
        }
    }
    (out, stats)
}

/// Runs `f` on every instance, in parallel when enabled, keeping input order.
pub fn sweep<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    par::map(items, f)
}

pub fn synth_instance(name: String, pc: &PartiallyCritical) -> CorpusInstance {
    CorpusInstance { name, sigma: pc.sigma.clone(), x: pc.x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfgraph::build_h2n;

    #[test]
    fn family_sizes() {
        assert_eq!(all_structures(3, 2).count(), 64);
        assert_eq!(all_graphs(4).count(), 64);
        assert_eq!(all_tournaments(4).count(), 64);
        assert_eq!(all_graphs(4).filter(|g| is_prime(&g.to_two_structure())).count(), 12);
        assert_eq!(all_tournaments(4).filter(is_prime).count(), 0);
    }

    #[test]
    fn bipartite_family_contains_half_graphs() {
        for n in 2..=4 {
            let h = build_h2n(n);
            let edges = h.edges();
            let graphs = connected_bipartite_graphs(2 * n);
            assert!(graphs.iter().all(|g| g.is_connected() && g.two_coloring().is_some()));
            assert!(graphs.iter().any(|g| crate::iso::are_isomorphic(
                &g.to_two_structure(),
                &Graph::from_edges(2 * n, &edges).unwrap().to_two_structure(),
                Default::default()
            )
            .unwrap()
            .is_some()));
        }
    }

    #[test]
    fn first_prime_subset_is_least() {
        let p5 = TwoStructure::from_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], false).unwrap();
        assert_eq!(first_prime_subset(&p5), Some([0, 1, 2, 3].into_iter().collect()));
        let p4 = TwoStructure::from_graph(4, &[(0, 1), (1, 2), (2, 3)], false).unwrap();
        assert_eq!(first_prime_subset(&p4), None);
    }

    #[test]
    fn random_specs_validate() {
        for r in Regime::ALL {
            for seed in 0..20 {
                let spec = random_spec(r, seed);
                assert!(spec.validate().is_ok());
                assert!(spec.outside_size() <= 12 && !spec.components.is_empty() && spec.components.len() <= 3);
                assert_eq!(spec, random_spec(r, seed));
            }
        }
    }
}
