use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of incident edges per edge size; zero counts are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "BTreeMap<usize, u32>", into = "BTreeMap<usize, u32>")]
pub struct TypeVector(BTreeMap<usize, u32>);

impl From<BTreeMap<usize, u32>> for TypeVector {
    fn from(m: BTreeMap<usize, u32>) -> Self {
        Self::from_counts(m)
    }
}

impl From<TypeVector> for BTreeMap<usize, u32> {
    fn from(t: TypeVector) -> Self {
        t.0
    }
}

impl TypeVector {
    pub fn zero() -> Self {
        TypeVector(BTreeMap::new())
    }

    /// `e_k`: one edge of size `k`.
    pub fn unit(k: usize) -> Self {
        Self::from_counts([(k, 1)])
    }

    pub fn from_counts<I: IntoIterator<Item = (usize, u32)>>(counts: I) -> Self {
        let mut t = Self::zero();
        for (k, c) in counts {
            t.add(k, c);
        }
        t
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn add(&mut self, k: usize, c: u32) {
        if c > 0 {
            *self.0.entry(k).or_default() += c;
        }
    }

    /// `self − e_k`, if `self(k) > 0`.
    pub fn minus_unit(&self, k: usize) -> Option<Self> {
        let c = self.get(k);
        (c > 0).then(|| {
            let mut t = self.clone();
            if c == 1 {
                t.0.remove(&k);
            } else {
                t.0.insert(k, c - 1);
            }
            t
        })
    }

    /// `‖γ‖₁`, the degree.
    pub fn norm1(&self) -> u32 {
        self.0.values().sum()
    }

    /// Largest edge size present, `0` for the zero type.
    pub fn max_size(&self) -> usize {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `(size, count)` pairs in increasing size.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&k, &c)| (k, c))
    }

    pub fn validate(&self) -> Result<()> {
        match self.0.keys().find(|&&k| k < 2) {
            Some(k) => Err(Error::Distribution(format!("edge size {k} below 2"))),
            None => Ok(()),
        }
    }
}

/// A finitely supported probability table over types.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeDistribution {
    table: Vec<(TypeVector, f64)>,
}

#[derive(Serialize, Deserialize)]
struct TypeEntry {
    counts: TypeVector,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct TypeDistributionFile {
    types: Vec<TypeEntry>,
}

impl TypeDistribution {
    /// Merges repeated types and renormalizes; weights must be positive and
    /// already sum to 1 within `1e-9`.
    pub fn new(entries: Vec<(TypeVector, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Distribution("empty table".into()));
        }
        let mut merged: BTreeMap<TypeVector, f64> = BTreeMap::new();
        for (t, p) in entries {
            t.validate()?;
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::Distribution(format!("probability {p} is not positive")));
            }
            *merged.entry(t).or_default() += p;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Distribution(format!("probabilities sum to {total}")));
        }
        Ok(TypeDistribution { table: merged.into_iter().map(|(t, p)| (t, p / total)).collect() })
    }

    pub fn point(t: TypeVector) -> Self {
        TypeDistribution { table: vec![(t, 1.0)] }
    }

    pub fn table(&self) -> &[(TypeVector, f64)] {
        &self.table
    }

    pub fn prob(&self, t: &TypeVector) -> f64 {
        self.table.iter().find(|(u, _)| u == t).map_or(0.0, |(_, p)| *p)
    }

    /// `E[Γ(k)]`.
    pub fn mean(&self, k: usize) -> f64 {
        self.table.iter().map(|(t, p)| p * t.get(k) as f64).sum()
    }

    /// Edge sizes `k` with `E[Γ(k)] > 0`, increasing.
    pub fn sizes(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self.table.iter().flat_map(|(t, _)| t.iter().map(|(k, _)| k)).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// Largest degree in the support.
    pub fn max_degree(&self) -> u32 {
        self.table.iter().map(|(t, _)| t.norm1()).max().unwrap_or(0)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: TypeDistributionFile = serde_json::from_str(text)?;
        Self::new(f.types.into_iter().map(|e| (e.counts, e.p)).collect())
    }

    pub fn to_json(&self) -> String {
        let f = TypeDistributionFile {
            types: self.table.iter().map(|(t, p)| TypeEntry { counts: t.clone(), p: *p }).collect(),
        };
        serde_json::to_string(&f).expect("type distribution serializes")
    }
}

/// `P̂_m(γ) = (γ(m)+1) P(γ+e_m) / E[Γ(m)]`; the point mass on the zero type
/// when `E[Γ(m)] = 0`.
pub fn size_biased(p: &TypeDistribution, m: usize) -> TypeDistribution {
    let mean = p.mean(m);
    if mean <= 0.0 {
        return TypeDistribution::point(TypeVector::zero());
    }
    let mut merged: BTreeMap<TypeVector, f64> = BTreeMap::new();
    for (t, w) in p.table() {
        if let Some(reduced) = t.minus_unit(m) {
            *merged.entry(reduced).or_default() += t.get(m) as f64 * w / mean;
        }
    }
    TypeDistribution { table: merged.into_iter().collect() }
}
