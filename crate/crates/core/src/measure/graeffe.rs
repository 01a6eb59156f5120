//! Mahler measure by exact Graeffe root squaring.

use num_bigint::BigInt;
use num_traits::Zero;

use super::real::log2_abs;
use crate::zfactor::UniIntPoly;

/// Stop squaring once a coefficient would exceed this many bits.
pub const MAX_COEFF_BITS: u64 = 1 << 24;

/// `g(y)` whose roots are the squares of the roots of `f`:
/// `f(x) = E(x^2) + x O(x^2)` gives `g = E^2 - y O^2`.
pub fn graeffe_step(f: &[BigInt]) -> Vec<BigInt> {
    let even: Vec<BigInt> = f.iter().step_by(2).cloned().collect();
    let odd: Vec<BigInt> = f.iter().skip(1).step_by(2).cloned().collect();
    let e2 = square(&even);
    let o2 = square(&odd);
    let mut g = vec![BigInt::zero(); f.len()];
    for (k, c) in e2.into_iter().enumerate() {
        g[k] += c;
    }
    for (k, c) in o2.into_iter().enumerate() {
        g[k + 1] -= c;
    }
    g
}

fn square(a: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); 2 * a.len() - 1];
    for i in 0..a.len() {
        if a[i].is_zero() {
            continue;
        }
        c[2 * i] += &a[i] * &a[i];
        let twice = &a[i] << 1;
        for j in i + 1..a.len() {
            c[i + j] += &twice * &a[j];
        }
    }
    c
}

fn log2_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64 / (i + 1) as f64).log2())
        .sum()
}

/// `log2 M(f)` after `k` squarings: a rigorous enclosure and a point
/// estimate clamped into it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraeffeBounds {
    pub log2_lower: f64,
    pub log2_upper: f64,
    pub log2_estimate: f64,
    pub iterations: u32,
}

pub fn graeffe_bounds(f: &UniIntPoly, iterations: u32) -> GraeffeBounds {
    assert!(!f.is_zero());
    let f = f.shift_down(f.trailing_zeros());
    let n = f.deg0();
    let mut g: Vec<BigInt> = f.coeffs().to_vec();
    let mut k = 0u32;
    while k < iterations.min(64) {
        let max_bits = g.iter().map(|c| c.bits()).max().unwrap_or(0);
        if 2 * max_bits + 64 > MAX_COEFF_BITS {
            break;
        }
        g = graeffe_step(&g);
        k += 1;
    }
    let scale = (k as f64).exp2();
    let logs: Vec<Option<f64>> = g
        .iter()
        .map(|c| (!c.is_zero()).then(|| log2_abs(c)))
        .collect();

    // |c_j| <= C(n, j) M(g) and M(g) <= sum |c_j|
    let lower = logs
        .iter()
        .enumerate()
        .filter_map(|(j, l)| l.map(|l| l - log2_binomial(n, j)))
        .fold(f64::NEG_INFINITY, f64::max);
    let lmax = logs
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let upper = lmax
        + logs
            .iter()
            .flatten()
            .map(|l| (l - lmax).exp2())
            .sum::<f64>()
            .log2();

    // Upper hull of (j, log2|c_j|): a segment of slope -s over m indices
    // stands for m roots of log2-modulus about s / 2^k.
    let pts: Vec<(usize, f64)> = logs
        .iter()
        .enumerate()
        .filter_map(|(j, l)| l.map(|l| (j, l)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as f64 * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let tau = 2.0 * n as f64 / scale;
    let mut j_star = n;
    for w in hull.windows(2).rev() {
        let per_root = (w[0].1 - w[1].1) / (w[1].0 - w[0].0) as f64 / scale;
        if per_root > tau {
            j_star = w[0].0;
        } else {
            break;
        }
    }
    let est = logs[j_star].expect("hull vertex has a nonzero coefficient");
    let clamp = |x: f64| x.clamp(lower, upper);
    GraeffeBounds {
        log2_lower: lower / scale,
        log2_upper: upper / scale,
        log2_estimate: clamp(est) / scale,
        iterations: k,
    }
}
