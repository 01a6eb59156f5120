//! Simultaneous root finding (Aberth–Ehrlich, Gauss–Seidel updates) with
//! a posteriori inclusion disks, over `f64` or big-floats.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::real::{log2_abs, BigFloat, Cx, Real};
use crate::zfactor::UniIntPoly;

/// Value, derivative and a bound on the rounding error of the value.
pub trait Evaluator<R: Real> {
    fn eval(&self, z: &Cx<R>) -> (Cx<R>, Cx<R>, f64);
}

/// A polynomial whose roots are wanted, at any working precision.
pub trait RootProblem {
    type AtF64: Evaluator<f64>;
    type AtBig: Evaluator<BigFloat>;
    fn degree(&self) -> usize;
    /// `ln |leading coefficient|`.
    fn log_abs_leading(&self) -> f64;
    fn initial_guesses(&self) -> Vec<(f64, f64)>;
    fn at_f64(&self) -> Self::AtF64;
    fn at_bits(&self, bits: usize) -> Self::AtBig;
}

/// Dense Horner evaluation of an integer polynomial.
pub struct DenseEval<R> {
    coeffs: Vec<R>,
    abs: Vec<f64>,
    u: f64,
}

impl<R: Real> DenseEval<R> {
    pub fn new(f: &UniIntPoly, bits: usize) -> Self {
        let coeffs: Vec<R> = f.coeffs().iter().map(|c| R::from_bigint(c, bits)).collect();
        let abs = coeffs.iter().map(|c| c.to_f64().abs()).collect();
        let u = coeffs[0].epsilon();
        DenseEval { coeffs, abs, u }
    }
}

impl<R: Real> Evaluator<R> for DenseEval<R> {
    fn eval(&self, z: &Cx<R>) -> (Cx<R>, Cx<R>, f64) {
        let n = self.coeffs.len() - 1;
        let bits = self.coeffs[0].bits();
        let mut p = Cx::real(self.coeffs[n].clone());
        let mut dp = Cx::from_f64(0.0, 0.0, bits);
        let az = z.abs_f64();
        let mut bound = self.abs[n];
        for k in (0..n).rev() {
            dp = dp.mul(z).add(&p);
            p = p.mul(z).add(&Cx::real(self.coeffs[k].clone()));
            bound = bound * az + self.abs[k];
        }
        let err = (4 * n + 2) as f64 * self.u * bound;
        (p, dp, err)
    }
}

/// Integer polynomial root problem.
pub struct DenseProblem<'a> {
    pub poly: &'a UniIntPoly,
}

impl RootProblem for DenseProblem<'_> {
    type AtF64 = DenseEval<f64>;
    type AtBig = DenseEval<BigFloat>;

    fn degree(&self) -> usize {
        self.poly.deg0()
    }

    fn log_abs_leading(&self) -> f64 {
        log2_abs(self.poly.leading().unwrap()) * std::f64::consts::LN_2
    }

    fn initial_guesses(&self) -> Vec<(f64, f64)> {
        newton_polygon_guesses(self.poly)
    }

    fn at_f64(&self) -> DenseEval<f64> {
        DenseEval::new(self.poly, 53)
    }

    fn at_bits(&self, bits: usize) -> DenseEval<BigFloat> {
        DenseEval::new(self.poly, bits)
    }
}

/// Starting points on circles read off the upper hull of `(k, ln|a_k|)`,
/// with a fixed angular offset and a small deterministic jitter.
pub fn newton_polygon_guesses(f: &UniIntPoly) -> Vec<(f64, f64)> {
    let n = f.deg0();
    let pts: Vec<(usize, f64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(k, c)| (k, log2_abs(c) * std::f64::consts::LN_2))
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
    let mut rng = ChaCha8Rng::seed_from_u64(0xab3 ^ n as u64);
    let mut out = Vec::with_capacity(n);
    // roots at zero (missing low coefficients) start near the origin
    for k in 0..pts[0].0 {
        let th = 2.0 * std::f64::consts::PI * k as f64 / pts[0].0 as f64 + 0.3;
        out.push((1e-3 * th.cos(), 1e-3 * th.sin()));
    }
    for w in hull.windows(2) {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let m = k2 - k1;
        let r = ((l1 - l2) / m as f64).exp();
        let offset = 0.7 + out.len() as f64;
        for k in 0..m {
            let jitter = rng.gen_range(-0.05..0.05);
            let th = 2.0 * std::f64::consts::PI * (k as f64 + jitter) / m as f64 + offset;
            out.push((r * th.cos(), r * th.sin()));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    /// Certified inclusion radius (disk components count roots).
    pub radius: f64,
    /// Index into `RootSet::clusters`.
    pub cluster: usize,
}

impl Root {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Overlapping inclusion disks; a cluster of `k` disks holds `k` roots.
    pub clusters: Vec<Vec<usize>>,
    pub degree_accounted: usize,
    /// Roots at the origin, not included in `roots`.
    pub zero_roots: usize,
    pub bits: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl RootSet {
    /// Modulus interval guaranteed to contain each root of the cluster of
    /// root `i`.
    pub fn modulus_bounds(&self, i: usize) -> (f64, f64) {
        let members = &self.clusters[self.roots[i].cluster];
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for &k in members {
            let r = &self.roots[k];
            let m = r.modulus();
            let span: f64 = if members.len() == 1 {
                r.radius
            } else {
                members.iter().map(|&j| 2.0 * self.roots[j].radius).sum()
            };
            lo = lo.min((m - span).max(0.0));
            hi = hi.max(m + span);
        }
        (lo, hi)
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.radius).fold(0.0, f64::max)
    }

    pub fn all_isolated(&self) -> bool {
        self.clusters.iter().all(|c| c.len() == 1)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AberthConfig {
    pub max_iter: usize,
}

impl Default for AberthConfig {
    fn default() -> Self {
        AberthConfig { max_iter: 800 }
    }
}

/// Aberth iteration from the given start; returns approximations, final
/// `(|p(z)|, error bound)` per root, convergence flag and iteration count.
fn aberth<R: Real, E: Evaluator<R>>(
    e: &E,
    mut z: Vec<Cx<R>>,
    cfg: &AberthConfig,
) -> (Vec<Cx<R>>, bool, usize) {
    let n = z.len();
    let bits = z[0].re.bits();
    let u = z[0].re.epsilon();
    let one = Cx::<R>::from_f64(1.0, 0.0, bits);
    let mut done = vec![false; n];
    let mut iters = 0;
    let mut all_done = n == 0;
    while iters < cfg.max_iter && !all_done {
        iters += 1;
        all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, err) = e.eval(&z[i]);
            if p.abs_f64() <= err {
                done[i] = true;
                continue;
            }
            let mut sum = Cx::from_f64(0.0, 0.0, bits);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !d.is_zero() {
                        sum = sum.add(&d.recip());
                    }
                }
            }
            let w = if dp.is_zero() {
                Cx::from_f64(u.sqrt(), u.sqrt(), bits)
            } else {
                let ratio = p.div(&dp);
                let den = one.sub(&ratio.mul(&sum));
                if den.is_zero() {
                    ratio
                } else {
                    ratio.div(&den)
                }
            };
            z[i] = z[i].sub(&w);
            if w.abs_f64() <= 4.0 * u * z[i].abs_f64() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
    }
    (z, all_done, iters)
}

/// Inclusion radii `n (|p(z_i)| + err) / (|a_n| prod |z_i - z_j|)` in log
/// space, and the disk clusters.
fn certify<R: Real, E: Evaluator<R>>(
    e: &E,
    z: &[Cx<R>],
    log_lead: f64,
) -> (Vec<Root>, Vec<Vec<usize>>) {
    let n = z.len();
    let u = z.first().map_or(f64::EPSILON, |w| w.re.epsilon());
    let mut roots = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _, err) = e.eval(&z[i]);
        let num = p.abs_f64() + err;
        let mut log_r = (n as f64).ln() + num.ln() - log_lead;
        for j in 0..n {
            if j != i {
                log_r -= z[i].sub(&z[j]).abs_f64().ln();
            }
        }
        let (re, im) = z[i].to_f64();
        // rounding the center to a double
        let radius = log_r.exp() + 2.0 * f64::EPSILON * re.hypot(im) + u;
        roots.push(Root {
            re,
            im,
            radius: if radius.is_nan() {
                f64::INFINITY
            } else {
                radius
            },
            cluster: 0,
        });
    }
    // union-find over overlapping disks
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (roots[i].re - roots[j].re).hypot(roots[i].im - roots[j].im);
            if d <= roots[i].radius + roots[j].radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for (i, root) in roots.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[label[r]].push(i);
        root.cluster = label[r];
    }
    (roots, clusters)
}

/// Precision rungs in bits.
pub const LADDER: [usize; 4] = [53, 128, 256, 512];

/// Solve at one precision, seeded by `start`.
pub fn solve_at<P: RootProblem>(
    prob: &P,
    start: &[(f64, f64)],
    bits: usize,
    cfg: &AberthConfig,
) -> RootSet {
    let log_lead = prob.log_abs_leading();
    let (roots, clusters, conv, iters, bits) = if bits <= 53 {
        let e = prob.at_f64();
        let z0: Vec<Cx<f64>> = start.iter().map(|&(a, b)| Cx::new(a, b)).collect();
        let (z, conv, it) = aberth(&e, z0, cfg);
        let (r, c) = certify(&e, &z, log_lead);
        (r, c, conv, it, 53)
    } else {
        let e = prob.at_bits(bits);
        let z0: Vec<Cx<BigFloat>> = start
            .iter()
            .map(|&(a, b)| Cx::from_f64(a, b, bits))
            .collect();
        let (z, conv, it) = aberth(&e, z0, cfg);
        let (r, c) = certify(&e, &z, log_lead);
        (r, c, conv, it, bits)
    };
    RootSet {
        degree_accounted: roots.len(),
        roots,
        clusters,
        zero_roots: 0,
        bits,
        converged: conv,
        iterations: iters,
    }
}

/// Climb the precision ladder from `min_bits` until `accept` holds or the
/// top rung is reached. Each rung is seeded with the previous roots.
pub fn solve_ladder<P, F>(prob: &P, min_bits: usize, max_bits: usize, accept: F) -> RootSet
where
    P: RootProblem,
    F: Fn(&RootSet) -> bool,
{
    let cfg = AberthConfig::default();
    let mut start = prob.initial_guesses();
    let mut last: Option<RootSet> = None;
    for &bits in LADDER.iter().filter(|&&b| b <= max_bits.max(53)) {
        if bits < min_bits && bits != *LADDER.last().unwrap() {
            continue;
        }
        let rs = solve_at(prob, &start, bits, &cfg);
        if rs.converged && accept(&rs) {
            return rs;
        }
        if rs.converged || last.is_none() {
            start = rs.roots.iter().map(|r| (r.re, r.im)).collect();
        }
        last = Some(rs);
    }
    last.expect("at least one rung")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniIntPoly {
        UniIntPoly::from_i64s(c)
    }

    fn sorted_moduli(rs: &RootSet) -> Vec<f64> {
        let mut v: Vec<f64> = rs.roots.iter().map(Root::modulus).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn quadratics() {
        let f = p(&[-1, 0, 1]);
        let rs = solve_ladder(&DenseProblem { poly: &f }, 53, 53, |_| true);
        let mut re: Vec<f64> = rs.roots.iter().map(|r| r.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);
        let f = p(&[-1, -1, 1]);
        let rs = solve_ladder(&DenseProblem { poly: &f }, 53, 53, |_| true);
        let m = sorted_moduli(&rs);
        assert!((m[0] - 0.6180339887498949).abs() < 1e-12);
        assert!((m[1] - 1.618033988749895).abs() < 1e-12);
        assert!(rs.roots.iter().all(|r| r.radius < 1e-12));
    }

    #[test]
    fn big_precision_tightens_radii() {
        let f = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let rs = solve_ladder(&DenseProblem { poly: &f }, 256, 256, |_| true);
        assert_eq!(rs.bits, 256);
        assert!(rs.converged);
        // centers are reported as doubles, so radii bottom out at their rounding
        assert!(rs.max_radius() < 1e-15, "{}", rs.max_radius());
        let big = sorted_moduli(&rs)[9];
        assert!((big - 1.1762808182599176).abs() < 1e-14);
    }

    #[test]
    fn spread_out_roots() {
        // roots 1e-3, 1, 1e3 and a few more scales
        let mut f = UniIntPoly::one();
        for r in [1i64, 7, 1000, 100_000, -3] {
            f = &f * &p(&[-r, 1]);
        }
        f = &f * &p(&[1, 0, 0, 0, 1]);
        let rs = solve_ladder(&DenseProblem { poly: &f }, 53, 512, |rs| rs.all_isolated());
        assert!(rs.converged);
        assert_eq!(rs.degree_accounted, 9);
        let m = sorted_moduli(&rs);
        assert!((m[8] - 1e5).abs() < 1e-6);
    }
}
