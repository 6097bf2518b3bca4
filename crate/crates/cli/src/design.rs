use oibdp::{Dataset, ResponseKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::failure::Outcome;

/// `n x p` regressors drawn uniformly from `[-1, 1]`.
pub fn seeded_design(n: usize, p: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect()
}

/// `x_i = i` for `i = 1..=n`.
pub fn counting_design(n: usize) -> Vec<Vec<f64>> {
    (1..=n).map(|i| vec![i as f64]).collect()
}

/// The counting design for `p = 1`, a seeded design otherwise.
pub fn default_design(n: usize, p: usize, seed: u64) -> Vec<Vec<f64>> {
    if p == 1 {
        counting_design(n)
    } else {
        seeded_design(n, p, seed)
    }
}

/// Responses `X beta` without noise.
pub fn linear_responses(rows: &[Vec<f64>], beta: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|r| r.iter().zip(beta).map(|(a, b)| a * b).sum())
        .collect()
}

/// Noise-free synthetic sample for the given response kind. Categorical
/// labels split the instances into equal groups by their signal.
pub fn synthetic(
    n: usize,
    p: usize,
    seed: u64,
    beta: &[f64],
    kind: ResponseKind,
) -> Outcome<Dataset> {
    let rows = default_design(n, p, seed);
    let signal = linear_responses(&rows, beta);
    let y = match kind {
        ResponseKind::Continuous => signal,
        ResponseKind::Binary => ranked_labels(&signal, 2)
            .into_iter()
            .map(|l| if l == 1.0 { -1.0 } else { 1.0 })
            .collect(),
        ResponseKind::DPartite(d) => ranked_labels(&signal, d),
    };
    Ok(Dataset::relaxed(rows, y, kind)?)
}

/// Labels `1..=d` assigned by rank of `signal` in equal-size groups.
fn ranked_labels(signal: &[f64], d: u32) -> Vec<f64> {
    let n = signal.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| signal[a].total_cmp(&signal[b]).then(a.cmp(&b)));
    let mut labels = vec![0.0; n];
    for (rank, &i) in order.iter().enumerate() {
        labels[i] = (1 + rank * d as usize / n) as f64;
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn designs_are_reproducible() {
        assert_eq!(seeded_design(5, 3, 9), seeded_design(5, 3, 9));
        assert_ne!(seeded_design(5, 3, 9), seeded_design(5, 3, 10));
        assert_eq!(counting_design(3), vec![vec![1.0], vec![2.0], vec![3.0]]);
    }

    #[test]
    fn categorical_labels_follow_the_signal() {
        let d = synthetic(6, 1, 0, &[1.0], ResponseKind::Binary).unwrap();
        assert_eq!(d.y(), &[-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]);
        let d = synthetic(6, 1, 0, &[-1.0], ResponseKind::DPartite(3)).unwrap();
        assert_eq!(d.y(), &[3.0, 3.0, 2.0, 2.0, 1.0, 1.0]);
    }
}
