//! Finite families of unit search directions.

use std::f64::consts::{FRAC_PI_2, PI};

/// Unit directions with every coordinate nonzero: each coordinate takes a
/// signed level `tan((i - 1/2) / r * pi/2)`, `i = 1..=r`. Covers all `2^p`
/// orthants with `(2r)^p` directions.
pub fn orthant_grid(p: usize, resolution: usize) -> Vec<Vec<f64>> {
    let r = resolution.max(1);
    let levels: Vec<f64> = (1..=r)
        .flat_map(|i| {
            let t = ((i as f64 - 0.5) / r as f64 * FRAC_PI_2).tan();
            [t, -t]
        })
        .collect();
    let mut out = Vec::with_capacity(levels.len().pow(p as u32));
    let mut idx = vec![0usize; p];
    loop {
        let v: Vec<f64> = idx.iter().map(|&i| levels[i]).collect();
        out.push(normalize(v));
        let mut axis = 0;
        while axis < p {
            idx[axis] += 1;
            if idx[axis] < levels.len() {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
        if axis == p {
            break;
        }
    }
    out
}

/// For `p = 2`: every direction orthogonal to one of `diffs` plus the
/// midpoints between consecutive such directions. Any piecewise-constant
/// function of the score ordering attains all of its values on this set.
pub fn angular_sweep(diffs: &[[f64; 2]]) -> Vec<Vec<f64>> {
    let mut angles: Vec<f64> = diffs
        .iter()
        .filter(|d| d[0] != 0.0 || d[1] != 0.0)
        .flat_map(|d| {
            let a = d[1].atan2(d[0]);
            [wrap(a + FRAC_PI_2), wrap(a - FRAC_PI_2)]
        })
        .collect();
    if angles.is_empty() {
        angles.extend([0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]);
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut out = Vec::with_capacity(2 * angles.len());
    for (k, &a) in angles.iter().enumerate() {
        let next = if k + 1 < angles.len() {
            angles[k + 1]
        } else {
            angles[0] + 2.0 * PI
        };
        out.push(vec![a.cos(), a.sin()]);
        let mid = 0.5 * (a + next);
        out.push(vec![mid.cos(), mid.sin()]);
    }
    out
}

fn wrap(a: f64) -> f64 {
    a.rem_euclid(2.0 * PI)
}

pub(crate) fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}
