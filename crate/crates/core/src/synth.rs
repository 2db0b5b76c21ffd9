//! Random generators and the constructive synthesis of partially critical structures.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::is_prime;
use crate::outside::{BlockEntry, PBlockKey, QBlockKey};
use crate::structure::{Label, PairClass, TwoStructure};
use crate::theorems::{forced_nonedge_class, reconstruct, BundleComponent, DescriptionBundle, Instance};
use crate::vset::{VertexSet, MAX_VERTICES};

/// Labels drawn independently and uniformly from `0..k` by ChaCha8 seeded with `seed`,
/// row by row.
pub fn random_two_structure(n: usize, k: usize, seed: u64) -> TwoStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = k.max(1);
    TwoStructure::from_fn(n, k, |_, _| rng.gen_range(0..k) as Label)
}

/// Rejection sampling of a prime structure; try `i` uses seed `seed + i`.
pub fn random_prime(n: usize, k: usize, seed: u64, max_tries: usize) -> Result<TwoStructure> {
    for i in 0..max_tries {
        let s = random_two_structure(n, k, seed.wrapping_add(i as u64));
        if is_prime(&s) {
            return Ok(s);
        }
    }
    Err(Error::GiveUp(max_tries))
}

/// One component: `K_2` when `m = 1`, `H_2m` otherwise, with its B side in
/// block `b`, its D side in block `d` and edge class `s_c` from B to D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub m: usize,
    pub b: QBlockKey,
    pub d: QBlockKey,
    pub s_c: PairClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub base: TwoStructure,
    pub k: usize,
    pub components: Vec<ComponentSpec>,
}

/// A synthesized structure with its designated X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiallyCritical {
    pub sigma: TwoStructure,
    pub x: VertexSet,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::SpecInvalid(msg.into())
}

fn unordered(c: PairClass) -> (Label, Label) {
    (c.forward.min(c.backward), c.forward.max(c.backward))
}

impl SynthSpec {
    pub fn outside_size(&self) -> usize {
        self.components.iter().map(|c| 2 * c.m).sum()
    }

    pub fn n(&self) -> usize {
        self.base.n() + self.outside_size()
    }

    pub fn validate(&self) -> Result<()> {
        let nx = self.base.n();
        if self.n() > MAX_VERTICES {
            return Err(invalid(format!("{} vertices exceed {MAX_VERTICES}", self.n())));
        }
        if self.base.used_labels().last().is_some_and(|&l| l as usize >= self.k) {
            return Err(invalid("base uses a label not below k"));
        }
        if !is_prime(&self.base) {
            return Err(invalid("base is not prime"));
        }
        let label_ok = |c: PairClass| (c.forward as usize) < self.k && (c.backward as usize) < self.k;
        let mut pair_of: BTreeMap<PBlockKey, (Label, Label)> = BTreeMap::new();
        let mut asym_used: BTreeSet<QBlockKey> = BTreeSet::new();
        for (i, c) in self.components.iter().enumerate() {
            if c.m == 0 {
                return Err(invalid(format!("component {i} has m = 0")));
            }
            for key in [c.b, c.d] {
                let Some(cl) = key.class() else {
                    return Err(invalid(format!("component {i} uses EXT")));
                };
                if let QBlockKey::Alpha { alpha, .. } = key {
                    if alpha >= nx {
                        return Err(invalid(format!("component {i}: α = {alpha} is not a base vertex")));
                    }
                }
                if !label_ok(cl) {
                    return Err(invalid(format!("component {i}: label of {key} not below k")));
                }
                let u = unordered(cl);
                if *pair_of.entry(key.p_key()).or_insert(u) != u {
                    return Err(invalid(format!("p-block {} carries two label pairs", key.p_key())));
                }
                if key.is_asymmetric() && !asym_used.insert(key) {
                    return Err(invalid(format!("asymmetric block {key} used twice")));
                }
            }
            if c.b.p_key() == c.d.p_key() {
                return Err(invalid(format!("component {i}: both sides in p-block {}", c.b.p_key())));
            }
            if !label_ok(c.s_c) {
                return Err(invalid(format!("component {i}: s_c not below k")));
            }
            if c.m >= 2 {
                let forced = forced_nonedge_class(|a, b| self.base.class(a, b), c.b, c.d);
                if forced == Some(c.s_c) {
                    return Err(invalid(format!("component {i}: s_c equals the forced non-edge class")));
                }
            }
        }
        Ok(())
    }

    /// The bundle that the structure should have: X first, then for each
    /// component its B side `b_0..b_{m-1}` followed by its D side, with
    /// `b_p ~ d_q` for `p <= q`.
    pub fn bundle(&self) -> DescriptionBundle {
        let nx = self.base.n();
        let mut next = nx;
        let mut blocks: BTreeMap<QBlockKey, VertexSet> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut components = Vec::new();
        for c in &self.components {
            let bs: Vec<usize> = (next..next + c.m).collect();
            let ds: Vec<usize> = (next + c.m..next + 2 * c.m).collect();
            next += 2 * c.m;
            for (p, &b) in bs.iter().enumerate() {
                edges.extend(ds[p..].iter().map(|&d| (b, d)));
            }
            let side_b: VertexSet = bs.iter().copied().collect();
            let side_d: VertexSet = ds.iter().copied().collect();
            *blocks.entry(c.b).or_default() |= side_b;
            *blocks.entry(c.d).or_default() |= side_d;
            components.push(BundleComponent { vertices: side_b | side_d, side_b, side_d, s_c: c.s_c });
        }
        edges.sort_unstable();
        DescriptionBundle {
            n: next,
            k: self.k,
            sigma_x: self.base.clone(),
            x_ids: (0..nx).collect(),
            q_spec: blocks.into_iter().map(|(key, members)| BlockEntry { key, members }).collect(),
            gamma_edges: edges,
            components,
        }
    }
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::PostVerificationFailed(msg.into())
}

/// Builds the structure described by `spec` and checks it: `σ[X]` is the base,
/// (S1), (S3) and (S5) hold, σ is X̄-critical, and the q-blocks and Γ are the
/// ones requested.
pub fn build_partially_critical(spec: &SynthSpec) -> Result<PartiallyCritical> {
    spec.validate()?;
    let bundle = spec.bundle();
    let sigma = reconstruct(&bundle).map_err(|e| match e {
        Error::InconsistentBundle(m) => invalid(m),
        other => other,
    })?;
    let x = bundle.x();
    let inst = Instance::new(&sigma, x).map_err(|e| mismatch(e.to_string()))?;
    let part = inst.partition();
    for entry in &bundle.q_spec {
        if part.block(entry.key) != entry.members {
            return Err(mismatch(format!(
                "block {} is {} instead of {}",
                entry.key,
                part.block(entry.key),
                entry.members
            )));
        }
    }
    if part.blocks.len() != bundle.q_spec.len() {
        return Err(mismatch("extra outside blocks"));
    }
    if inst.gamma().edges() != bundle.gamma_edges {
        let extra: Vec<_> = inst.gamma().edges().into_iter().filter(|e| !bundle.gamma_edges.contains(e)).collect();
        let missing: Vec<_> = bundle.gamma_edges.iter().filter(|e| !inst.gamma().has_edge(e.0, e.1)).collect();
        return Err(mismatch(format!("outside graph differs: extra {extra:?}, missing {missing:?}")));
    }
    if !inst.sk(5).map_err(|e| mismatch(e.to_string()))? {
        return Err(mismatch("(S5) fails"));
    }
    if !inst.x_critical() {
        return Err(mismatch("σ is not X̄-critical"));
    }
    Ok(PartiallyCritical { sigma, x })
}
