use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercore::{Baseload, Hypergraph};

/// Per-edge split of the unit load, in the edge's own vertex order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub theta: Vec<Vec<f64>>,
}

impl Allocation {
    pub fn uniform(h: &Hypergraph) -> Self {
        let theta = h.edges().iter().map(|e| vec![1.0 / e.len() as f64; e.len()]).collect();
        Allocation { theta }
    }

    /// Each edge split by an independent flat Dirichlet draw.
    pub fn random<R: Rng + ?Sized>(h: &Hypergraph, rng: &mut R) -> Self {
        let theta = h
            .edges()
            .iter()
            .map(|e| {
                let w: Vec<f64> = (0..e.len()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect();
        Allocation { theta }
    }

    /// Checks shape, nonnegativity and unit row sums (within `1e-9`).
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        if self.theta.len() != h.num_edges() {
            return Err(Error::Shape(format!("{} rows for {} edges", self.theta.len(), h.num_edges())));
        }
        for (ei, (row, e)) in self.theta.iter().zip(h.edges()).enumerate() {
            if row.len() != e.len() {
                return Err(Error::Shape(format!("edge {ei}: {} entries for size {}", row.len(), e.len())));
            }
            if row.iter().any(|&x| !(x >= 0.0)) {
                return Err(Error::Shape(format!("edge {ei}: negative or NaN entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::Shape(format!("edge {ei}: row sums to {s}")));
            }
        }
        Ok(())
    }

    pub fn max_row_error(&self) -> f64 {
        self.theta.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("allocation serializes")
    }
}

/// Total load `∂_bθ(i)` per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadVector {
    pub loads: Vec<f64>,
}

impl LoadVector {
    pub fn max(&self) -> f64 {
        self.loads.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.loads.iter().sum()
    }

    pub fn sup_distance(&self, other: &LoadVector) -> f64 {
        self.loads.iter().zip(&other.loads).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn l1_distance(&self, other: &LoadVector) -> f64 {
        self.loads.iter().zip(&other.loads).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("loads serialize")
    }
}

pub(crate) fn loads_into(h: &Hypergraph, theta: &[Vec<f64>], b: &[f64], out: &mut [f64]) {
    out.copy_from_slice(b);
    for (e, row) in h.edges().iter().zip(theta) {
        for (&v, &x) in e.iter().zip(row) {
            out[v] += x;
        }
    }
}

/// `∂_bθ(i) = b(i) + Σ_{e∋i} θ(e,i)`.
pub fn loads(h: &Hypergraph, theta: &Allocation, b: &Baseload) -> Result<LoadVector> {
    if b.len() != h.n() {
        return Err(Error::Shape(format!("baseload has {} entries for {} vertices", b.len(), h.n())));
    }
    if theta.theta.len() != h.num_edges() || theta.theta.iter().zip(h.edges()).any(|(r, e)| r.len() != e.len()) {
        return Err(Error::Shape("allocation does not match hypergraph".into()));
    }
    let mut out = vec![0.0; h.n()];
    loads_into(h, &theta.theta, &b.b, &mut out);
    Ok(LoadVector { loads: out })
}
