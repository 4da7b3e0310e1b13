//! Synthetic data from known LC or 2PL parameters.
//!
//! Every subject draws from its own ChaCha8 stream (`seed`, stream = subject
//! index), so output depends only on the spec and not on scheduling.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::ResponseMatrix;
use crate::error::{Error, Result};
use crate::exec;
use crate::lc::LcParams;
use crate::twopl::{implied_lambda, TwoPlParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params")]
pub enum TrueParams {
    #[serde(rename = "lc")]
    Lc(LcParams),
    #[serde(rename = "2pl")]
    TwoPl(TwoPlParams),
}

impl TrueParams {
    pub fn validate(&self) -> Result<()> {
        match self {
            TrueParams::Lc(p) => p.validate(),
            TrueParams::TwoPl(p) => p.validate(),
        }
    }

    /// Class weights and the J × k success-probability matrix.
    pub fn lambda(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        match self {
            TrueParams::Lc(p) => (p.weights.clone(), p.success_probs.clone()),
            TrueParams::TwoPl(p) => (p.weights.clone(), implied_lambda(p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub params: TrueParams,
    pub n: usize,
    pub seed: u64,
    /// Item codes; `V1..VJ` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codes: Option<Vec<String>>,
}

impl GeneratorSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone)]
pub struct Simulated {
    pub data: ResponseMatrix,
    /// 0-based generating class of each subject.
    pub classes: Vec<usize>,
}

fn draw_class(u: f64, weights: &[f64]) -> usize {
    let mut acc = 0.0;
    for (c, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return c;
        }
    }
    // rounding in the cumulative sum: last class with positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

pub fn simulate(spec: &GeneratorSpec) -> Result<Simulated> {
    if spec.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    spec.params.validate()?;
    let (weights, lambda) = spec.params.lambda();
    let n_items = lambda.len();
    if n_items == 0 {
        return Err(Error::Empty("generator has no items".into()));
    }
    let codes = match &spec.codes {
        Some(c) if c.len() != n_items => {
            return Err(Error::DimensionMismatch(format!(
                "{} codes for {n_items} items",
                c.len()
            )))
        }
        Some(c) => c.clone(),
        None => (1..=n_items).map(|j| format!("V{j}")).collect(),
    };
    let rows = exec::map_indices(cfg!(feature = "parallel"), spec.n, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i as u64);
        let c = draw_class(rng.random::<f64>(), &weights);
        let row: Vec<u8> = lambda
            .iter()
            .map(|l| u8::from(rng.random::<f64>() < l[c]))
            .collect();
        (c, row)
    });
    let classes = rows.iter().map(|(c, _)| *c).collect();
    let values = rows.into_iter().flat_map(|(_, r)| r).collect();
    Ok(Simulated {
        data: ResponseMatrix::new(codes, values)?,
        classes,
    })
}

/// Observed frequency n(y) of every distinct response pattern.
pub fn pattern_table(data: &ResponseMatrix) -> BTreeMap<Vec<u8>, usize> {
    let mut table = BTreeMap::new();
    for row in data.rows() {
        *table.entry(row.to_vec()).or_insert(0) += 1;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc_spec(weights: Vec<f64>, lambda: Vec<Vec<f64>>, n: usize, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            params: TrueParams::Lc(LcParams::new(weights, lambda).unwrap()),
            n,
            seed,
            codes: None,
        }
    }

    #[test]
    fn degenerate_bernoulli() {
        let s = simulate(&lc_spec(vec![1.0], vec![vec![1.0]; 4], 20, 3)).unwrap();
        assert!(s.data.values().iter().all(|&v| v == 1));
        assert!(s.classes.iter().all(|&c| c == 0));
    }

    #[test]
    fn same_seed_same_data() {
        let spec = lc_spec(vec![0.3, 0.7], vec![vec![0.2, 0.9]; 5], 500, 42);
        let a = simulate(&spec).unwrap();
        let b = simulate(&spec).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.classes, b.classes);
        let c = simulate(&GeneratorSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn rejects_empty_sample() {
        assert!(simulate(&lc_spec(vec![1.0], vec![vec![0.5]], 0, 1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = lc_spec(vec![0.5, 0.5], vec![vec![0.1, 0.8]], 10, 7);
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"model\":\"lc\""));
        assert_eq!(GeneratorSpec::from_json(&text).unwrap(), spec);
    }

    #[test]
    fn pattern_counts() {
        let d = ResponseMatrix::from_rows(&[vec![1, 0], vec![1, 0], vec![0, 0]]).unwrap();
        let t = pattern_table(&d);
        assert_eq!(t.len(), 2);
        assert_eq!(t[&vec![1, 0]], 2);
        assert_eq!(t.values().sum::<usize>(), 3);
    }
}
