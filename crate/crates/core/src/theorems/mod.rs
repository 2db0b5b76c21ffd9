//! Executable checks of the structural results on concrete instances, and the
//! description/reconstruction of partially critical structures.

mod checks;
mod description;
mod lemmas;
mod report;

use std::sync::OnceLock;

pub use checks::*;
pub use description::*;
pub use lemmas::*;
pub use report::{TheoremReport, Verdict};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modular::{is_prime, is_prime_in, is_w_critical, is_w_critical_in};
use crate::outside::{
    check_base, components_from, least_eps_of_size, outside_graph, outside_partition, Caps, ComponentRecord,
    OutsideGraph, OutsidePartition,
};
use crate::structure::TwoStructure;
use crate::vset::VertexSet;

/// A structure with a prime substructure `σ[X]`, caching the outside analysis.
pub struct Instance<'a> {
    pub s: &'a TwoStructure,
    pub x: VertexSet,
    pub outside: VertexSet,
    pub caps: Caps,
    part: OnceLock<OutsidePartition>,
    gamma: OnceLock<OutsideGraph>,
    gamma_s: OnceLock<TwoStructure>,
    components: OnceLock<Result<Vec<ComponentRecord>>>,
    raw_sk: [OnceLock<Result<bool>>; 3],
    prime: OnceLock<bool>,
    x_critical: OnceLock<bool>,
}

impl<'a> Instance<'a> {
    pub fn new(s: &'a TwoStructure, x: VertexSet) -> Result<Self> {
        Self::with_caps(s, x, Caps::default())
    }

    pub fn with_caps(s: &'a TwoStructure, x: VertexSet, caps: Caps) -> Result<Self> {
        check_base(s, x)?;
        Ok(Instance {
            s,
            x,
            outside: x.complement(s.n()),
            caps,
            part: OnceLock::new(),
            gamma: OnceLock::new(),
            gamma_s: OnceLock::new(),
            components: OnceLock::new(),
            raw_sk: Default::default(),
            prime: OnceLock::new(),
            x_critical: OnceLock::new(),
        })
    }

    pub fn partition(&self) -> &OutsidePartition {
        self.part.get_or_init(|| outside_partition(self.s, self.x).expect("base checked"))
    }

    pub fn gamma(&self) -> &OutsideGraph {
        self.gamma.get_or_init(|| outside_graph(self.s, self.x).expect("base checked"))
    }

    pub fn graph(&self) -> &Graph {
        &self.gamma().graph
    }

    /// Γ as a 2-structure on the ids of σ.
    pub fn gamma_structure(&self) -> &TwoStructure {
        self.gamma_s.get_or_init(|| self.graph().to_two_structure())
    }

    pub fn components(&self) -> Result<&[ComponentRecord]> {
        self.components
            .get_or_init(|| components_from(self.s, self.partition(), self.gamma()))
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Does (Sk) hold for this one odd `k`?
    pub fn sk_raw(&self, k: usize) -> Result<bool> {
        if k.is_multiple_of(2) || k > 5 {
            return Err(Error::EvenK(k));
        }
        self.raw_sk[k / 2]
            .get_or_init(|| {
                if k > 2 && self.outside.len() > self.caps.max_outside {
                    return Err(Error::SizeLimitExceeded {
                        what: "outside set for ε enumeration",
                        size: self.outside.len(),
                        limit: self.caps.max_outside,
                    });
                }
                Ok(least_eps_of_size(self.s, self.x, self.outside, k).is_none())
            })
            .clone()
    }

    /// (Sm) for every odd `m <= k`.
    pub fn sk(&self, k: usize) -> Result<bool> {
        for m in (1..=k).step_by(2) {
            if !self.sk_raw(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sigma_prime(&self) -> bool {
        *self.prime.get_or_init(|| is_prime(self.s))
    }

    pub fn x_critical(&self) -> bool {
        *self
            .x_critical
            .get_or_init(|| self.sigma_prime() && is_w_critical(self.s, self.outside).unwrap_or(false))
    }

    pub fn isolated(&self) -> VertexSet {
        self.gamma().isolated()
    }

    pub fn component_of(&self, v: usize) -> Option<VertexSet> {
        self.gamma().components().into_iter().find(|c| c.contains(v))
    }
}

/// Is `σ[domain]` prime with every member of `w` critical? `false` when not prime.
pub(crate) fn partially_critical_in(s: &TwoStructure, domain: VertexSet, w: VertexSet) -> bool {
    is_prime_in(s, domain) && is_w_critical_in(s, domain, w).unwrap_or(false)
}

pub(crate) fn json_set(s: VertexSet) -> serde_json::Value {
    serde_json::Value::from(s.to_vec())
}
