#![allow(dead_code)]

use std::sync::Arc;

use ldpc_lab::{AddressTable, LdpcCode, SparseParityCheck};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small eIRA code: n = 480, k = 240, group size 24, three addresses per group.
pub fn toy_eira_table() -> AddressTable {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let groups: Vec<Vec<usize>> = (0..10).map(|_| sample(&mut rng, 240, 3).into_vec()).collect();
    AddressTable::new(480, 240, 24, groups, "toy-eira").unwrap()
}

pub fn toy_eira_code() -> Arc<LdpcCode> {
    Arc::new(LdpcCode::from_table(&toy_eira_table()).unwrap())
}

/// Random Tanner tree: every check joins one existing variable to 1..=3 new ones.
/// Returns the checks as variable lists; `n_vars` is at most `max_vars`.
pub fn random_tree_code<R: Rng>(rng: &mut R, max_vars: usize) -> SparseParityCheck {
    let target = rng.random_range(4..=max_vars);
    let mut n = 1;
    let mut checks = Vec::new();
    while n < target {
        let anchor = rng.random_range(0..n);
        let fresh = rng.random_range(1..=3).min(target - n);
        let mut row = vec![anchor];
        row.extend(n..n + fresh);
        n += fresh;
        checks.push(row);
    }
    SparseParityCheck::from_checks(n, checks).unwrap()
}

/// Longest path between two variables, counted in checks crossed.
pub fn tree_diameter(h: &SparseParityCheck) -> usize {
    let bfs = |start: usize| -> (usize, usize) {
        let mut dist = vec![usize::MAX; h.n_vars()];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut far = (start, 0);
        while let Some(v) = queue.pop_front() {
            if dist[v] > far.1 {
                far = (v, dist[v]);
            }
            for &m in h.var_checks(v) {
                for &u in h.check_vars(m) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        far
    };
    let (a, _) = bfs(0);
    bfs(a).1
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Bitwise MAP LLRs `ln P(c_n = 0 | y) - ln P(c_n = 1 | y)` by enumerating every codeword.
pub fn exhaustive_map(h: &SparseParityCheck, llr: &[f64]) -> Vec<f64> {
    let n = h.n_vars();
    assert!(n <= 20);
    let mut zero: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut one: Vec<Vec<f64>> = vec![Vec::new(); n];
    for word in 0u32..(1 << n) {
        let bits: Vec<u8> = (0..n).map(|b| ((word >> b) & 1) as u8).collect();
        let valid = h.check_adj().iter().all(|row| row.iter().map(|&v| bits[v]).sum::<u8>() % 2 == 0);
        if !valid {
            continue;
        }
        let metric: f64 = bits.iter().zip(llr).filter(|(b, _)| **b == 1).map(|(_, y)| -y).sum();
        for (i, &b) in bits.iter().enumerate() {
            if b == 0 { zero[i].push(metric) } else { one[i].push(metric) }
        }
    }
    (0..n).map(|i| log_sum_exp(&zero[i]) - log_sum_exp(&one[i])).collect()
}

/// BPSK channel LLRs `2y / sigma^2` for the all-zero word.
pub fn bpsk_llrs<R: Rng>(rng: &mut R, n: usize, sigma: f64) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            2.0 * (1.0 + sigma * z) / (sigma * sigma)
        })
        .collect()
}
