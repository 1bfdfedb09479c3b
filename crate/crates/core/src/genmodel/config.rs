use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gwt::TypeSampler;
use super::types::TypeVector;
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, MultiHypergraph};

/// Per-vertex types for the configuration model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSequence {
    pub types: Vec<TypeVector>,
}

impl TypeSequence {
    pub fn new(types: Vec<TypeVector>) -> Result<Self> {
        let s = TypeSequence { types };
        s.validate()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// `Σ_i γ_i(k)` per edge size.
    pub fn stub_totals(&self) -> BTreeMap<usize, u64> {
        let mut totals = BTreeMap::new();
        for t in &self.types {
            for (k, c) in t.iter() {
                *totals.entry(k).or_default() += c as u64;
            }
        }
        totals
    }

    /// Sizes valid and `k | Σ_i γ_i(k)` for every `k`.
    pub fn validate(&self) -> Result<()> {
        for t in &self.types {
            t.validate()?;
        }
        match self.stub_totals().into_iter().find(|&(k, total)| total % k as u64 != 0) {
            Some((size, total)) => Err(Error::Divisibility { size, total }),
            None => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TypeSequence = serde_json::from_str(text)?;
        Self::new(raw.types)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("type sequence serializes")
    }
}

/// Configuration model: for each size `k`, the size-`k` partial edges are
/// split uniformly at random into blocks of `k`, one edge per block. Edges are
/// emitted by increasing size.
pub fn sample_config<R: Rng + ?Sized>(seq: &TypeSequence, rng: &mut R) -> Result<MultiHypergraph> {
    seq.validate()?;
    let mut edges = Vec::new();
    for (k, _) in seq.stub_totals() {
        let mut stubs: Vec<usize> = seq
            .types
            .iter()
            .enumerate()
            .flat_map(|(v, t)| std::iter::repeat_n(v, t.get(k) as usize))
            .collect();
        stubs.shuffle(rng);
        edges.extend(stubs.chunks_exact(k).map(<[usize]>::to_vec));
    }
    MultiHypergraph::new(seq.len(), edges)
}

/// `n` i.i.d. types from `P`, then for every size `k` whose stub total leaves
/// remainder `r ≠ 0` mod `k`, `k − r` distinct uniformly chosen vertices each
/// get one extra size-`k` edge.
pub fn draw_type_sequence<R: Rng + ?Sized>(sampler: &TypeSampler, n: usize, rng: &mut R) -> Result<TypeSequence> {
    if n == 0 {
        return Err(Error::InvalidParam("type sequence needs at least one vertex".into()));
    }
    let mut types: Vec<TypeVector> = (0..n).map(|_| sampler.sample(rng).clone()).collect();
    let totals = TypeSequence { types: types.clone() }.stub_totals();
    for (k, total) in totals {
        let r = (total % k as u64) as usize;
        if r == 0 {
            continue;
        }
        if k - r > n {
            return Err(Error::InvalidParam(format!("cannot repair size {k} stubs with {n} vertices")));
        }
        for v in index::sample(rng, n, k - r) {
            types[v].add(k, 1);
        }
    }
    TypeSequence::new(types)
}

/// `H^e_n`: a configuration-model draw on `n` i.i.d. types, erased.
pub fn sample_erased<R: Rng + ?Sized>(sampler: &TypeSampler, n: usize, rng: &mut R) -> Result<Hypergraph> {
    let seq = draw_type_sequence(sampler, n, rng)?;
    Ok(sample_config(&seq, rng)?.erase())
}
