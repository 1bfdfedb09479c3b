use std::collections::{BTreeMap, VecDeque};

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::types::{size_biased, TypeDistribution, TypeVector};
use crate::hypercore::{Hypergraph, RootedHypertree};

/// Draws from `P` and from every size-biased law `P̂_k` it needs.
#[derive(Debug, Clone)]
pub struct TypeSampler {
    base: Table,
    biased: BTreeMap<usize, Table>,
}

#[derive(Debug, Clone)]
struct Table {
    types: Vec<TypeVector>,
    index: WeightedIndex<f64>,
}

impl Table {
    fn new(p: &TypeDistribution) -> Self {
        let types = p.table().iter().map(|(t, _)| t.clone()).collect();
        let index = WeightedIndex::new(p.table().iter().map(|(_, w)| *w)).expect("positive weights");
        Table { types, index }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &TypeVector {
        &self.types[self.index.sample(rng)]
    }
}

impl TypeSampler {
    pub fn new(p: &TypeDistribution) -> Self {
        let biased = p.sizes().into_iter().map(|k| (k, Table::new(&size_biased(p, k)))).collect();
        TypeSampler { base: Table::new(p), biased }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &TypeVector {
        self.base.sample(rng)
    }

    /// A draw from `P̂_k`; the zero type when `E[Γ(k)] = 0`.
    pub fn sample_biased<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> TypeVector {
        self.biased.get(&k).map_or_else(TypeVector::zero, |t| t.sample(rng).clone())
    }
}

/// Grows a Galton-Watson hypertree from a root of type `root` down to depth `depth`.
/// Vertices are numbered in breadth-first order; edges hanging off a vertex
/// come in increasing size.
pub fn grow<R: Rng + ?Sized>(sampler: &TypeSampler, root: TypeVector, depth: usize, rng: &mut R) -> RootedHypertree {
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut n = 1;
    let mut queue = VecDeque::from([(0usize, 0usize, root)]);
    while let Some((v, dv, ty)) = queue.pop_front() {
        if dv == depth {
            continue;
        }
        for (k, count) in ty.iter() {
            for _ in 0..count {
                let mut edge = Vec::with_capacity(k);
                edge.push(v);
                for _ in 1..k {
                    let w = n;
                    n += 1;
                    edge.push(w);
                    let child = if dv + 1 < depth { sampler.sample_biased(k, rng) } else { TypeVector::zero() };
                    queue.push_back((w, dv + 1, child));
                }
                edges.push(edge);
            }
        }
    }
    let graph = Hypergraph::new(n, edges).expect("fresh vertices make a simple hypergraph");
    RootedHypertree::from_parts_unchecked(graph, 0, depth)
}

/// `UGWT(P)` truncated at `depth`.
pub fn sample_ugwt<R: Rng + ?Sized>(sampler: &TypeSampler, depth: usize, rng: &mut R) -> RootedHypertree {
    let root = sampler.sample(rng).clone();
    grow(sampler, root, depth, rng)
}

/// `GWT_k(P)` truncated at `depth`: as [`sample_ugwt`] but the root type is drawn from `P̂_k`.
pub fn sample_gwt_k<R: Rng + ?Sized>(sampler: &TypeSampler, k: usize, depth: usize, rng: &mut R) -> RootedHypertree {
    let root = sampler.sample_biased(k, rng);
    grow(sampler, root, depth, rng)
}
