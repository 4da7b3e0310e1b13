#![allow(dead_code)]

pub mod fixtures;

use lcirt::{DimensionPartition, FitConfig, GeneratorSpec, LcParams, ResponseMatrix, TrueParams, TwoPlParams};

/// Fewer random starts than the default, for test runtime.
pub fn quick_config(starts: usize) -> FitConfig {
    FitConfig {
        n_random_starts: starts,
        ..FitConfig::default()
    }
}

pub fn generate(params: TrueParams, n: usize, seed: u64) -> ResponseMatrix {
    lcirt::simulate(&GeneratorSpec {
        params,
        n,
        seed,
        codes: None,
    })
    .unwrap()
    .data
}

/// Three well separated classes over 15 items.
pub fn separated_lc() -> LcParams {
    let lambda = (0..15)
        .map(|j| {
            let low = 0.1 + 0.01 * (j % 5) as f64;
            let mid = if j % 2 == 0 { 0.8 } else { 0.2 };
            vec![low, mid, 1.0 - low]
        })
        .collect();
    LcParams::new(vec![0.3, 0.3, 0.4], lambda).unwrap()
}

const GAMMA: [f64; 6] = [1.0, 1.5, 0.8, 1.2, 2.0, 0.7];
const BETA: [f64; 6] = [0.0, 0.5, -0.5, 1.0, -1.0, 0.3];

/// k = 3 two-trait 2PL model: the given partition decides which trait each
/// item measures, item parameters cycle through fixed lists restarting at
/// every group so that each group's first item is an anchor.
pub fn twopl_truth(partition: DimensionPartition) -> TwoPlParams {
    let s = partition.n_groups();
    let mut position = vec![0usize; s];
    let mut discrimination = Vec::new();
    let mut difficulty = Vec::new();
    for j in 0..partition.n_items() {
        let g = partition.group_of(j);
        let p = position[g] % GAMMA.len();
        position[g] += 1;
        discrimination.push(GAMMA[p]);
        difficulty.push(BETA[p]);
    }
    let traits = [[-2.0, 1.0], [0.0, -1.5], [2.0, 0.5]];
    TwoPlParams {
        weights: vec![0.3, 0.4, 0.3],
        discrimination,
        difficulty,
        abilities: traits.iter().map(|t| t[..s].to_vec()).collect(),
        partition,
    }
}

/// `sizes[g]` consecutive items in group g.
pub fn blocks(sizes: &[usize]) -> DimensionPartition {
    DimensionPartition::new(
        sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &n)| std::iter::repeat_n(g, n))
            .collect(),
    )
    .unwrap()
}

pub fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Naive log-likelihood: probabilities multiplied in linear space.
pub fn naive_loglik(weights: &[f64], lambda: &[Vec<f64>], data: &ResponseMatrix) -> f64 {
    data.rows()
        .map(|y| {
            let p: f64 = (0..weights.len())
                .map(|c| {
                    let mut prod = weights[c];
                    for (j, &v) in y.iter().enumerate() {
                        prod *= if v == 1 { lambda[j][c] } else { 1.0 - lambda[j][c] };
                    }
                    prod
                })
                .sum();
            p.ln()
        })
        .sum()
}
