//! Roots of `z^q (1+z)^p - 1` with `|1+z| > 1` and `|z| < eps`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{bound::ProductSource, RootModelError, ROOT_TOL};
use crate::measure::real::{Cx, Real};
use crate::measure::roots::{solve_ladder, Evaluator, RootProblem, RootSet};
use crate::measure::MeasureError;

/// Largest admissible `p + q`.
pub const MAX_MODEL_DEGREE: usize = 4096;

/// Evaluates `z^q w^p - 1`, `w = 1 + z`, in product form. Expanding the
/// binomial would lose everything near `z = 0` to cancellation.
pub struct ModelEval {
    p: u32,
    q: u32,
    bits: usize,
}

fn cpow<R: Real>(z: &Cx<R>, mut k: u32, bits: usize) -> Cx<R> {
    let mut acc = Cx::from_f64(1.0, 0.0, bits);
    let mut base = z.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

impl<R: Real> Evaluator<R> for ModelEval {
    fn eval(&self, z: &Cx<R>) -> (Cx<R>, Cx<R>, f64) {
        let one = Cx::from_f64(1.0, 0.0, self.bits);
        let w = z.add(&one);
        let zq1 = cpow(z, self.q - 1, self.bits);
        let wp1 = cpow(&w, self.p - 1, self.bits);
        let head = zq1.mul(&wp1);
        let prod = head.mul(z).mul(&w);
        let val = prod.sub(&one);
        // d/dz = z^(q-1) w^(p-1) (q w + p z)
        let qw = w.scale(&R::from_f64(self.q as f64, self.bits));
        let pz = z.scale(&R::from_f64(self.p as f64, self.bits));
        let dval = head.mul(&qw.add(&pz));
        let u = z.re.epsilon();
        // rounding `1 + z` is amplified p-fold by the power
        let steps = 2.0 * (32 - self.p.leading_zeros() + 32 - self.q.leading_zeros()) as f64 + 6.0;
        let err = 4.0 * (steps + (self.p + self.q) as f64) * u * prod.abs_f64() + 2.0 * u;
        (val, dval, err)
    }
}

pub struct ModelProblem {
    pub p: u32,
    pub q: u32,
}

impl RootProblem for ModelProblem {
    type AtF64 = ModelEval;
    type AtBig = ModelEval;

    fn degree(&self) -> usize {
        (self.p + self.q) as usize
    }

    fn log_abs_leading(&self) -> f64 {
        0.0
    }

    /// Half-step offset points on `|1+z| = 1`, the curve the roots hug,
    /// avoiding the multiple point `z = 0` of `z^q (1+z)^p`.
    fn initial_guesses(&self) -> Vec<(f64, f64)> {
        let n = self.degree();
        (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
                let r = 1.0 + 0.5 / n as f64;
                (r * th.cos() - 1.0, r * th.sin())
            })
            .collect()
    }

    fn at_f64(&self) -> ModelEval {
        ModelEval {
            p: self.p,
            q: self.q,
            bits: 53,
        }
    }

    fn at_bits(&self, bits: usize) -> ModelEval {
        ModelEval {
            p: self.p,
            q: self.q,
            bits,
        }
    }
}

fn check_pair(p: i64, q: i64) -> Result<(u32, u32), RootModelError> {
    if p < 1 || q < 1 || p.gcd(&q) != 1 {
        return Err(RootModelError::BadPair(p, q));
    }
    let n = (p as u128 + q as u128) as usize;
    if n > MAX_MODEL_DEGREE {
        return Err(RootModelError::DegreeBoundExceeded(n, MAX_MODEL_DEGREE));
    }
    Ok((p as u32, q as u32))
}

/// Certified roots of `z^q (1+z)^p - 1`, all `p + q` of them.
pub fn model_roots(p: i64, q: i64) -> Result<RootSet, RootModelError> {
    let (p, q) = check_pair(p, q)?;
    let prob = ModelProblem { p, q };
    let rs = solve_ladder(&prob, 53, 512, |rs| {
        rs.all_isolated()
            && rs
                .roots
                .iter()
                .all(|r| r.radius <= ROOT_TOL * r.modulus().max(1.0))
    });
    if !rs.converged || rs.roots.len() != prob.degree() {
        return Err(MeasureError::NonConvergence(Box::new(rs)).into());
    }
    Ok(rs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSolution {
    pub z: (f64, f64),
    pub w: (f64, f64),
    pub w_modulus: f64,
    /// `|z^q w^p - 1|` at the reported `z`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSolveReport {
    pub p: i64,
    pub q: i64,
    pub epsilon: f64,
    /// `p/q > 1/eps`.
    pub in_regime: bool,
    pub degree: usize,
    /// By decreasing `|w|`.
    pub solutions: Vec<ModelSolution>,
    pub count: usize,
    pub w_moduli: Vec<f64>,
    pub max_residual: f64,
}

impl ProductSource for ModelSolveReport {
    fn pq(&self) -> (i64, i64) {
        (self.p, self.q)
    }
    fn top_moduli(&self) -> &[f64] {
        &self.w_moduli
    }
    fn exponent(&self) -> i32 {
        2 * self.q as i32
    }
}

fn residual(z: (f64, f64), p: u32, q: u32) -> f64 {
    let e = ModelEval { p, q, bits: 53 };
    let (v, _, _) = Evaluator::<f64>::eval(&e, &Cx::new(z.0, z.1));
    v.abs_f64()
}

/// Keep the roots with `|1+z| > 1` and `|z| < eps`.
pub fn filter_model(
    p: i64,
    q: i64,
    roots: &RootSet,
    epsilon: f64,
) -> Result<ModelSolveReport, RootModelError> {
    let (pu, qu) = check_pair(p, q)?;
    if !(epsilon > 0.0 && epsilon <= 0.2) {
        return Err(RootModelError::BadEpsilon(epsilon));
    }
    let mut solutions: Vec<ModelSolution> = roots
        .roots
        .iter()
        .filter_map(|r| {
            let w = (r.re + 1.0, r.im);
            let wm = w.0.hypot(w.1);
            (wm > 1.0 && r.modulus() < epsilon).then(|| ModelSolution {
                z: (r.re, r.im),
                w,
                w_modulus: wm,
                residual: residual((r.re, r.im), pu, qu),
            })
        })
        .collect();
    solutions.sort_by(|a, b| b.w_modulus.total_cmp(&a.w_modulus));
    Ok(ModelSolveReport {
        p,
        q,
        epsilon,
        in_regime: p as f64 / q as f64 > 1.0 / epsilon,
        degree: roots.roots.len(),
        count: solutions.len(),
        w_moduli: solutions.iter().map(|s| s.w_modulus).collect(),
        max_residual: solutions.iter().map(|s| s.residual).fold(0.0, f64::max),
        solutions,
    })
}

pub fn solve_model(p: i64, q: i64, epsilon: f64) -> Result<ModelSolveReport, RootModelError> {
    if !(epsilon > 0.0 && epsilon <= 0.2) {
        return Err(RootModelError::BadEpsilon(epsilon));
    }
    let rs = model_roots(p, q)?;
    filter_model(p, q, &rs, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_has_no_small_solution() {
        let r = solve_model(2, 1, 0.2).unwrap();
        assert_eq!(r.degree, 3);
        assert_eq!(r.count, 0);
        assert!(!r.in_regime);
        let rs = model_roots(2, 1).unwrap();
        let real: Vec<f64> = rs
            .roots
            .iter()
            .filter(|r| r.im.abs() < 1e-12)
            .map(|r| r.re)
            .collect();
        assert_eq!(real.len(), 1);
        assert!((real[0] - 0.465_571_231_876_768).abs() < 1e-12);
    }

    #[test]
    fn residuals_are_small() {
        for (p, q) in [(30, 1), (61, 2), (150, 7)] {
            let r = solve_model(p, q, 0.15).unwrap();
            assert_eq!(r.degree, (p + q) as usize);
            assert!(r.count > 0);
            assert!(r.max_residual < 1e-9, "{p} {q} {}", r.max_residual);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(solve_model(4, 2, 0.1), Err(RootModelError::BadPair(4, 2)));
        assert_eq!(solve_model(5, 2, 0.5), Err(RootModelError::BadEpsilon(0.5)));
        assert!(matches!(
            solve_model(4000, 97, 0.1),
            Err(RootModelError::DegreeBoundExceeded(4097, _))
        ));
    }
}
