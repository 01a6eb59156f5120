//! Mahler measure and length of integer polynomials.
//!
//! The primary value comes from certified root approximations of the
//! non-cyclotomic irreducible factors; cyclotomic factors are removed exactly
//! and contribute 1. Graeffe root squaring gives an independent estimate with
//! a loose rigorous enclosure.

mod graeffe;
pub mod real;
pub mod roots;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use graeffe::{graeffe_bounds, graeffe_step, GraeffeBounds};
pub use roots::{solve_ladder, DenseProblem, Evaluator, Root, RootProblem, RootSet, LADDER};

use crate::zfactor::{cyclotomic_split, factor, FactorError, Factorization, UniIntPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("measure of the zero polynomial")]
    ZeroPolynomial,
    #[error("root iteration did not converge at {} bits", .0.bits)]
    NonConvergence(Box<RootSet>),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Roots,
    Graeffe,
    Both,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "roots" => Ok(Method::Roots),
            "graeffe" => Ok(Method::Graeffe),
            "both" => Ok(Method::Both),
            _ => Err(format!("unknown method '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    /// Lowest rung of the precision ladder.
    pub min_bits: usize,
    pub max_bits: usize,
    /// Escalate precision while the enclosure is wider than this, relative.
    pub rel_tol: f64,
    pub graeffe_iterations: u32,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            min_bits: 53,
            max_bits: 512,
            rel_tol: 1e-12,
            graeffe_iterations: 12,
        }
    }
}

impl MeasureConfig {
    /// Defaults with the precision floor taken from `DEHNFILL_BITS` when set.
    pub fn from_env() -> Self {
        let mut c = Self::default();
        if let Some(b) = std::env::var("DEHNFILL_BITS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            c.min_bits = b.clamp(53, 512);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahlerEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
    /// Highest precision used by the root method (0 for Graeffe alone).
    pub bits: usize,
    /// With `Method::Both`, whether the two methods agree within their
    /// combined error.
    pub agreement: Option<bool>,
}

impl MahlerEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.abs_error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_error
    }

    /// The bounds are widened for the rounding of `ln` inputs and of `exp`.
    fn from_log_bounds(lo: f64, point: f64, hi: f64, method: Method, bits: usize) -> Self {
        let widen = |x: f64| 4.0 * f64::EPSILON * (1.0 + x.abs());
        let (lo, hi) = ((lo - widen(lo)).exp(), (hi + widen(hi)).exp());
        let value = point.exp().clamp(lo, hi);
        MahlerEstimate {
            value,
            abs_error: (value - lo).max(hi - value),
            method,
            bits,
            agreement: None,
        }
    }
}

/// `ln` bounds `(lower, point, upper)` for `M(h)` from a root set.
fn log_measure_from_roots(h: &UniIntPoly, rs: &RootSet) -> (f64, f64, f64) {
    let lead = real::log2_abs(h.leading().unwrap()) * std::f64::consts::LN_2;
    let (mut lo, mut pt, mut hi) = (lead, lead, lead);
    for (i, r) in rs.roots.iter().enumerate() {
        let (a, b) = rs.modulus_bounds(i);
        lo += a.max(1.0).ln();
        hi += b.max(1.0).ln();
        pt += r.modulus().max(1.0).ln();
    }
    // rounding in the accumulation above
    let slack = 8.0 * f64::EPSILON * (rs.roots.len() as f64 + 1.0) * (1.0 + pt.abs());
    (lo - slack, pt, hi + slack)
}

/// Measure of an irreducible non-cyclotomic factor by the root method.
fn mahler_irreducible(
    h: &UniIntPoly,
    cfg: &MeasureConfig,
) -> Result<(f64, f64, f64, usize), MeasureError> {
    if h.deg0() == 0 {
        let l = real::log2_abs(h.leading().unwrap()) * std::f64::consts::LN_2;
        return Ok((l, l, l, 0));
    }
    let prob = DenseProblem { poly: h };
    let rs = solve_ladder(&prob, cfg.min_bits, cfg.max_bits, |rs| {
        let (lo, pt, hi) = log_measure_from_roots(h, rs);
        (hi - lo) <= cfg.rel_tol * pt.exp().max(1.0) || (hi.exp() - lo.exp()) <= cfg.rel_tol
    });
    if !rs.converged {
        return Err(MeasureError::NonConvergence(Box::new(rs)));
    }
    let (lo, pt, hi) = log_measure_from_roots(h, &rs);
    Ok((lo, pt, hi, rs.bits))
}

/// Root-method measure of a classified factorization.
pub fn mahler_of_factorization(
    fac: &Factorization,
    cfg: &MeasureConfig,
) -> Result<MahlerEstimate, MeasureError> {
    let mut bits = cfg.min_bits.max(53);
    let cyc: Vec<usize> = fac.cyclotomic_part.iter().map(|m| m.index).collect();
    let only_cyclotomic = fac.classified && (0..fac.factors.len()).all(|i| cyc.contains(&i));
    if only_cyclotomic && fac.content.bits() <= f64::MANTISSA_DIGITS as u64 {
        return Ok(MahlerEstimate {
            value: fac.content.to_f64().unwrap().abs(),
            abs_error: 0.0,
            method: Method::Roots,
            bits,
            agreement: None,
        });
    }
    let base = fac.content.to_f64().unwrap_or(f64::INFINITY).abs().ln();
    let (mut lo, mut pt, mut hi) = (base, base, base);
    for (i, f) in fac.factors.iter().enumerate() {
        if fac.classified && cyc.contains(&i) {
            continue;
        }
        let (a, b, c, used) = mahler_irreducible(&f.poly, cfg)?;
        let e = f.multiplicity as f64;
        lo += e * a;
        pt += e * b;
        hi += e * c;
        bits = bits.max(used);
    }
    // summands are nonnegative up to their own slack
    let sum_err = f64::EPSILON * (fac.factors.len() as f64 + 1.0) * hi.abs();
    Ok(MahlerEstimate::from_log_bounds(
        lo - sum_err,
        pt,
        hi + sum_err,
        Method::Roots,
        bits,
    ))
}

/// Individual measures for each factor of a classified factorization, in
/// factor order; cyclotomic factors get exactly 1.
pub fn factor_measures(
    fac: &Factorization,
    cfg: &MeasureConfig,
) -> Result<Vec<MahlerEstimate>, MeasureError> {
    let cyc: Vec<usize> = fac.cyclotomic_part.iter().map(|m| m.index).collect();
    fac.factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if fac.classified && cyc.contains(&i) {
                Ok(MahlerEstimate {
                    value: 1.0,
                    abs_error: 0.0,
                    method: Method::Roots,
                    bits: 0,
                    agreement: None,
                })
            } else {
                let (a, b, c, bits) = mahler_irreducible(&f.poly, cfg)?;
                Ok(MahlerEstimate::from_log_bounds(
                    a,
                    b,
                    c,
                    Method::Roots,
                    bits,
                ))
            }
        })
        .collect()
}

pub fn mahler(f: &UniIntPoly) -> Result<MahlerEstimate, MeasureError> {
    mahler_with(f, Method::Roots, &MeasureConfig::default())
}

pub fn mahler_with(
    f: &UniIntPoly,
    method: Method,
    cfg: &MeasureConfig,
) -> Result<MahlerEstimate, MeasureError> {
    if f.is_zero() {
        return Err(MeasureError::ZeroPolynomial);
    }
    match method {
        Method::Graeffe => Ok(mahler_graeffe(f, cfg.graeffe_iterations)),
        Method::Roots => {
            let fac = cyclotomic_split(factor(f)?);
            mahler_of_factorization(&fac, cfg)
        }
        Method::Both => {
            let fac = cyclotomic_split(factor(f)?);
            let mut r = mahler_of_factorization(&fac, cfg)?;
            let g = mahler_graeffe(f, cfg.graeffe_iterations);
            let slack = 1e-9 * r.value;
            r.agreement = Some((r.value - g.value).abs() <= r.abs_error + g.abs_error + slack);
            r.method = Method::Both;
            Ok(r)
        }
    }
}

/// Graeffe estimate after `iterations` squarings (capped at 64 and by
/// coefficient size). The error is the distance to the far end of the
/// rigorous enclosure.
pub fn mahler_graeffe(f: &UniIntPoly, iterations: u32) -> MahlerEstimate {
    assert!(!f.is_zero(), "measure of the zero polynomial");
    let b = graeffe_bounds(f, iterations);
    let ln2 = std::f64::consts::LN_2;
    MahlerEstimate::from_log_bounds(
        b.log2_lower * ln2,
        b.log2_estimate * ln2,
        b.log2_upper * ln2,
        Method::Graeffe,
        0,
    )
}

/// Sum of absolute values of the coefficients.
pub fn length(f: &UniIntPoly) -> BigInt {
    f.l1_norm()
}

/// Certified roots of a squarefree polynomial, escalating precision until
/// every inclusion radius is at most `tol` relative to `max(1, |z|)`.
pub fn find_roots(f: &UniIntPoly, tol: f64) -> Result<RootSet, MeasureError> {
    if f.is_zero() {
        return Err(MeasureError::ZeroPolynomial);
    }
    let zeros = f.trailing_zeros();
    let g = f.shift_down(zeros);
    if g.deg0() == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            clusters: Vec::new(),
            degree_accounted: 0,
            zero_roots: zeros,
            bits: 53,
            converged: true,
            iterations: 0,
        });
    }
    let prob = DenseProblem { poly: &g };
    let mut rs = solve_ladder(&prob, 53, 512, |rs| {
        rs.all_isolated()
            && rs
                .roots
                .iter()
                .all(|r| r.radius <= tol * r.modulus().max(1.0))
    });
    rs.zero_roots = zeros;
    if !rs.converged {
        return Err(MeasureError::NonConvergence(Box::new(rs)));
    }
    Ok(rs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LehmerEntry {
    pub factor_index: usize,
    pub degree: usize,
    pub mahler: f64,
    pub abs_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LehmerReport {
    pub c: f64,
    pub tolerance: f64,
    pub entries: Vec<LehmerEntry>,
    pub violations: Vec<usize>,
    pub passed: bool,
}

/// Default constant: the smallest known Salem number, truncated.
pub const LEHMER_C: f64 = 1.17628;

/// Check `M(g) >= c - tolerance` for every non-cyclotomic factor `g`.
pub fn lehmer_check(fac: &Factorization, c: f64) -> Result<LehmerReport, MeasureError> {
    let fac = if fac.classified {
        fac.clone()
    } else {
        cyclotomic_split(fac.clone())
    };
    let cfg = MeasureConfig::default();
    let tolerance = 1e-9;
    let mut entries = Vec::new();
    for &i in &fac.non_cyclotomic_part {
        let h = &fac.factors[i].poly;
        if h.deg0() == 0 {
            continue;
        }
        let (lo, pt, hi, _) = mahler_irreducible(h, &cfg)?;
        let est = MahlerEstimate::from_log_bounds(lo, pt, hi, Method::Roots, 0);
        entries.push(LehmerEntry {
            factor_index: i,
            degree: h.deg0(),
            mahler: est.value,
            abs_error: est.abs_error,
            passed: est.upper() >= c - tolerance,
        });
    }
    let violations: Vec<usize> = entries
        .iter()
        .filter(|e| !e.passed)
        .map(|e| e.factor_index)
        .collect();
    Ok(LehmerReport {
        c,
        tolerance,
        passed: violations.is_empty(),
        entries,
        violations,
    })
}

/// Sign-independent helper used by reports: `|a_n|` as a double.
pub fn abs_leading_f64(f: &UniIntPoly) -> f64 {
    f.leading()
        .map(|c| real::bigint_to_f64(&c.abs()))
        .unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniIntPoly {
        UniIntPoly::from_i64s(c)
    }

    const LEHMER: [i64; 11] = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];
    const SALEM: f64 = 1.176_280_818_259_917_5;

    #[test]
    fn basic_values() {
        let m = mahler(&p(&[-2, 1])).unwrap();
        assert!((m.value - 2.0).abs() < 1e-12);
        let m = mahler(&p(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!((m.value, m.abs_error), (1.0, 0.0));
        let m = mahler(&p(&LEHMER)).unwrap();
        assert!((m.value - SALEM).abs() < 1e-12, "{m:?}");
        assert!(m.abs_error < 1e-9);
    }

    #[test]
    fn enclosure_survives_log_round_trip() {
        for c in [&[5][..], &[0, 5], &[0, 0, -5], &[5, 5], &[3, 0, 6]] {
            let f = p(c);
            let m = mahler(&f).unwrap();
            let exact = eigen_free_measure(c);
            assert!(m.lower() <= exact && exact <= m.upper(), "{c:?}: {m:?}");
        }
    }

    /// Measures known in closed form for the inputs above.
    fn eigen_free_measure(c: &[i64]) -> f64 {
        match c {
            [5] | [0, 5] | [0, 0, -5] | [5, 5] => 5.0,
            // 3 (1 + 2 x^2): roots of modulus 1/sqrt(2)
            [3, 0, 6] => 6.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn graeffe_agrees_on_lehmer() {
        let g = mahler_graeffe(&p(&LEHMER), 10);
        assert!((g.value - SALEM).abs() < 1e-10, "{g:?}");
        let both = mahler_with(&p(&LEHMER), Method::Both, &MeasureConfig::default()).unwrap();
        assert_eq!(both.agreement, Some(true));
    }

    #[test]
    fn lengths() {
        assert_eq!(length(&p(&[-1, -1, 1])), BigInt::from(3));
        // nine nonzero coefficients, all +-1
        assert_eq!(length(&p(&LEHMER)), BigInt::from(9));
        assert_eq!(length(&UniIntPoly::zero()), BigInt::from(0));
    }

    #[test]
    fn lehmer_reports() {
        let r = lehmer_check(&factor(&p(&[-1, -1, 1])).unwrap(), LEHMER_C).unwrap();
        assert!(r.passed);
        let r = lehmer_check(&factor(&p(&[-1, 0, 0, 0, 1])).unwrap(), LEHMER_C).unwrap();
        assert!(r.passed && r.entries.is_empty());
        let r = lehmer_check(&factor(&p(&LEHMER)).unwrap(), LEHMER_C).unwrap();
        assert!(r.passed);
        assert!((r.entries[0].mahler - LEHMER_C).abs() < 1e-5);
    }

    #[test]
    fn find_roots_counts_zero_roots() {
        let rs = find_roots(&p(&[0, 0, -1, 0, 1]), 1e-12).unwrap();
        assert_eq!(rs.zero_roots, 2);
        assert_eq!(rs.degree_accounted, 2);
    }
}
