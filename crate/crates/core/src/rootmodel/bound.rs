//! Product bounds `prod_{l<=k} (1 + d log(x/l) / x)^e`, `x = p/q`, for the
//! `2kq` largest moduli, and the fitting of the constants involved.

use serde::{Deserialize, Serialize};

use super::RootGeometryReport;

/// Moduli sorted by decreasing size, and the exponent of the bound.
pub trait ProductSource {
    fn pq(&self) -> (i64, i64);
    fn top_moduli(&self) -> &[f64];
    fn exponent(&self) -> i32;
}

/// Filling-polynomial roots use exponent 2.
impl ProductSource for RootGeometryReport {
    fn pq(&self) -> (i64, i64) {
        (self.p, self.q)
    }
    fn top_moduli(&self) -> &[f64] {
        &self.moduli
    }
    fn exponent(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductRow {
    pub k: usize,
    /// `None` when fewer than `2k|q|` moduli exist.
    pub lhs: Option<f64>,
    pub rhs: f64,
    pub passed: Option<bool>,
}

/// `prod_{l=1..k} (1 + d ln(x/l) / x)^e`.
pub fn product_rhs(x: f64, d: f64, k: usize, e: i32) -> f64 {
    log_rhs(x, d, k, e).exp()
}

fn log_rhs(x: f64, d: f64, k: usize, e: i32) -> f64 {
    (1..=k)
        .map(|l| e as f64 * (d * (x / l as f64).ln() / x).ln_1p())
        .sum()
}

/// `ceil(c |p| / (scale |q|))`.
pub fn k_max(c: f64, p: i64, q: i64, scale: f64) -> usize {
    (c * p.unsigned_abs() as f64 / (scale * q.unsigned_abs() as f64)).ceil() as usize
}

/// `2 ceil(c |p| / (scale |q|)) |q|`.
pub fn count_bound(c: f64, p: i64, q: i64, scale: f64) -> usize {
    2 * k_max(c, p, q, scale) * q.unsigned_abs() as usize
}

/// Rows `k = 1..=k_max`. Rounding slack of a few ulps per factor is
/// allowed on the comparison.
pub fn product_bound_check<S: ProductSource + ?Sized>(
    s: &S,
    d: f64,
    k_max: usize,
) -> Vec<ProductRow> {
    let (p, q) = s.pq();
    let qa = q.unsigned_abs() as usize;
    let x = p.unsigned_abs() as f64 / qa as f64;
    let m = s.top_moduli();
    (1..=k_max)
        .map(|k| {
            let n = 2 * k * qa;
            let rhs_log = log_rhs(x, d, k, s.exponent());
            let lhs_log = (n <= m.len()).then(|| m[..n].iter().map(|v| v.ln()).sum::<f64>());
            let slack = 4.0 * f64::EPSILON * (n as f64 + 1.0);
            ProductRow {
                k,
                lhs: lhs_log.map(f64::exp),
                rhs: rhs_log.exp(),
                passed: lhs_log.map(|l| l <= rhs_log + slack),
            }
        })
        .collect()
}

fn all_pass<S: ProductSource + ?Sized>(cases: &[(&S, usize)], d: f64) -> bool {
    cases.iter().all(|(s, k)| {
        product_bound_check(*s, d, *k)
            .iter()
            .all(|r| r.passed != Some(false))
    })
}

/// Smallest `d` in `[0, 1e6]` (to bisection accuracy, rounded up) for which
/// every row of every case passes; `None` if even `1e6` fails.
pub fn fit_product_d<S: ProductSource + ?Sized>(cases: &[(&S, usize)]) -> Option<f64> {
    if all_pass(cases, 0.0) {
        return Some(0.0);
    }
    let mut hi = 1.0;
    while !all_pass(cases, hi) {
        hi *= 2.0;
        if hi > 1e6 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if all_pass(cases, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Smallest `c` with `count <= 2 c |p| / (scale |q|) |q|` on every cell,
/// hence `count <= 2 ceil(c p / (scale q)) q`. The ceiling is not used to
/// shrink `c`: a constant tuned to the ceiling steps of one grid misses
/// the steps of interleaved cells.
pub fn fit_count_constant(cells: &[(i64, i64, usize)], scale: f64) -> f64 {
    cells
        .iter()
        .map(|&(p, _, count)| scale * count as f64 / (2.0 * p.unsigned_abs() as f64))
        .fold(0.0, f64::max)
}
