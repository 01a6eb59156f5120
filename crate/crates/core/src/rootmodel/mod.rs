//! Root moduli of filling polynomials near the unit circle, the model
//! equation `z^q (1+z)^p = 1`, and the product bounds for their largest
//! roots. Every constant is fitted from data, never assumed.

mod bound;
mod model;

use serde::{Deserialize, Serialize};

pub use bound::{
    count_bound, fit_count_constant, fit_product_d, k_max, product_bound_check, product_rhs,
    ProductRow, ProductSource,
};
pub use model::{
    filter_model, model_roots, solve_model, ModelProblem, ModelSolution, ModelSolveReport,
};

use crate::bivar::{newton_polygon, BivarLaurentPoly};
use crate::fill::FillingPoly;
use crate::measure::{find_roots, MeasureError};
use crate::zfactor::{cyclotomic_split, factor, FactorError, Factorization, UniIntPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootModelError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("({0}, {1}) is not a coprime pair of positive integers")]
    BadPair(i64, i64),
    #[error("epsilon {0} outside (0, 0.2]")]
    BadEpsilon(f64),
    #[error("degree {0} exceeds the bound {1}")]
    DegreeBoundExceeded(usize, usize),
}

/// Inclusion radius requested for every root, relative to `max(1, |z|)`.
pub const ROOT_TOL: f64 = 1e-10;

/// Multiples `c` of `1/|q|` in the default `count_beyond` table.
pub const BEYOND_STEPS: [f64; 6] = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCount {
    pub threshold: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootGeometryReport {
    pub p: i64,
    pub q: i64,
    /// Degree of the squarefree part: one entry per distinct root.
    pub degree: usize,
    /// Distinct roots, by decreasing modulus.
    pub roots: Vec<(f64, f64)>,
    pub moduli: Vec<f64>,
    pub max_modulus: f64,
    pub max_radius: f64,
    /// Smallest `D` with `max_modulus <= 1 + D/|q|` (`|q|` read as 1 when `q = 0`).
    #[serde(rename = "fitted_D")]
    pub fitted_d: f64,
    pub count_beyond: Vec<ThresholdCount>,
    /// `product_top[k-1]` is the product of the `2k|q|` largest moduli.
    pub product_top: Vec<f64>,
}

impl RootGeometryReport {
    pub fn count_beyond_at(&self, threshold: f64) -> usize {
        self.moduli.iter().take_while(|&&m| m > threshold).count()
    }

    fn q_scale(&self) -> f64 {
        if self.q == 0 {
            1.0
        } else {
            self.q.unsigned_abs() as f64
        }
    }
}

/// Roots of `Phi_n` as `(re, im, modulus)`, with modulus exactly 1.
fn cyclotomic_roots(n: usize) -> Vec<(f64, f64, f64)> {
    use num_integer::Integer;
    (1..=n)
        .filter(|k| k.gcd(&n) == 1)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (th.cos(), th.sin(), 1.0)
        })
        .collect()
}

/// `(re, im, modulus)`.
pub type PolarRoot = (f64, f64, f64);

/// Distinct roots of every factor, and the largest inclusion radius.
/// Cyclotomic factors are placed exactly.
pub fn distinct_roots(fac: &Factorization) -> Result<(Vec<PolarRoot>, f64), RootModelError> {
    let mut roots = Vec::new();
    let mut max_radius: f64 = 0.0;
    for (i, f) in fac.factors.iter().enumerate() {
        let order = fac
            .classified
            .then(|| fac.cyclotomic_part.iter().find(|m| m.index == i))
            .flatten();
        if let Some(m) = order {
            roots.extend(cyclotomic_roots(m.order));
            continue;
        }
        if f.poly.deg0() == 0 {
            continue;
        }
        let rs = find_roots(&f.poly, ROOT_TOL)?;
        roots.extend(std::iter::repeat((0.0, 0.0, 0.0)).take(rs.zero_roots));
        max_radius = max_radius.max(rs.max_radius());
        roots.extend(rs.roots.iter().map(|r| (r.re, r.im, r.modulus())));
    }
    Ok((roots, max_radius))
}

pub fn root_geometry(fp: &FillingPoly) -> Result<RootGeometryReport, RootModelError> {
    let fac = cyclotomic_split(factor(&fp.poly)?);
    root_geometry_with(fp, &fac)
}

/// As `root_geometry`, reusing a classified factorization of `fp.poly`.
pub fn root_geometry_with(
    fp: &FillingPoly,
    fac: &Factorization,
) -> Result<RootGeometryReport, RootModelError> {
    let (mut found, max_radius) = distinct_roots(fac)?;
    found.sort_by(|a, b| b.2.total_cmp(&a.2));
    let moduli: Vec<f64> = found.iter().map(|z| z.2).collect();
    let roots: Vec<(f64, f64)> = found.iter().map(|z| (z.0, z.1)).collect();
    let max_modulus = moduli.first().copied().unwrap_or(0.0);
    let (p, q) = (fp.slope.p, fp.slope.q);
    let mut rep = RootGeometryReport {
        p,
        q,
        degree: roots.len(),
        roots,
        moduli,
        max_modulus,
        max_radius,
        fitted_d: 0.0,
        count_beyond: Vec::new(),
        product_top: Vec::new(),
    };
    let qs = rep.q_scale();
    rep.fitted_d = if rep.degree == 0 {
        0.0
    } else {
        qs * (max_modulus - 1.0)
    };
    rep.count_beyond = BEYOND_STEPS
        .iter()
        .map(|c| {
            let threshold = 1.0 + c / qs;
            ThresholdCount {
                threshold,
                count: rep.count_beyond_at(threshold),
            }
        })
        .collect();
    let step = 2 * (qs as usize);
    let mut acc = 0.0;
    for (n, m) in rep.moduli.iter().enumerate() {
        acc += m.ln();
        if (n + 1) % step == 0 {
            rep.product_top.push(acc.exp());
        }
    }
    Ok(rep)
}

/// Partition of roots by the two hypotheses bounding `|t|` by `1 + C_1/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    /// `|t| <= 1`.
    Inside,
    /// `1 < |t|^|p| < 1/eps`.
    SmallPower,
    /// `|t| > 1`, not `SmallPower`, and `|t^q - zeta| > eps` for every root
    /// `zeta` of the top-row polynomial (vacuous when it has none).
    AwayFromTop,
    /// Everything else: `|t|^|p| >= 1/eps` and `t^q` within `eps` of some `zeta`.
    NearTop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStat {
    pub class: RootClass,
    pub count: usize,
    pub max_modulus: Option<f64>,
    /// `max(0, |p| (max_modulus - 1))`; 0 for an empty class.
    pub fitted_c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearUnitStats {
    pub p: i64,
    pub q: i64,
    pub epsilon: f64,
    pub total: usize,
    /// Roots of `sum_i c_{i,n} zeta^{-i}` over the top row.
    pub top_row_roots: Vec<(f64, f64)>,
    /// The top row is a single monomial, so `AwayFromTop` only excludes
    /// `SmallPower` roots.
    pub top_row_roots_empty: bool,
    pub classes: Vec<ClassStat>,
    /// Largest `fitted_c1` over `SmallPower` and `AwayFromTop`.
    pub fitted_c1: f64,
}

impl NearUnitStats {
    pub fn class(&self, c: RootClass) -> &ClassStat {
        self.classes
            .iter()
            .find(|s| s.class == c)
            .expect("all classes listed")
    }
}

/// Roots of the top-row polynomial `sum_i c_{i,n} zeta^{-i}`, cleared of
/// negative powers.
pub fn top_row_roots(f: &BivarLaurentPoly) -> Result<Vec<(f64, f64)>, RootModelError> {
    let np = newton_polygon(f);
    let row = np.top_row();
    let coeffs: Vec<_> = (row.a..=row.b)
        .rev()
        .map(|i| f.coeff(i, row.j).cloned().unwrap_or_default())
        .collect();
    let g = UniIntPoly::new(coeffs);
    let g = g.shift_down(g.trailing_zeros());
    if g.deg0() == 0 {
        return Ok(Vec::new());
    }
    let rs = find_roots(&g, ROOT_TOL)?;
    Ok(rs.roots.iter().map(|r| (r.re, r.im)).collect())
}

fn cpow(z: (f64, f64), k: i64) -> (f64, f64) {
    let r = z.0.hypot(z.1).powi(k as i32);
    let th = z.1.atan2(z.0) * k as f64;
    (r * th.cos(), r * th.sin())
}

pub fn near_unit_threshold_stats(
    f: &BivarLaurentPoly,
    geo: &RootGeometryReport,
    epsilon: f64,
) -> Result<NearUnitStats, RootModelError> {
    let zetas = top_row_roots(f)?;
    Ok(classify_near_unit(geo, &zetas, epsilon))
}

/// The classification with precomputed top-row roots.
pub fn classify_near_unit(
    geo: &RootGeometryReport,
    zetas: &[(f64, f64)],
    epsilon: f64,
) -> NearUnitStats {
    let pa = if geo.p == 0 {
        1.0
    } else {
        geo.p.unsigned_abs() as f64
    };
    let order = [
        RootClass::Inside,
        RootClass::SmallPower,
        RootClass::AwayFromTop,
        RootClass::NearTop,
    ];
    let mut stats: Vec<ClassStat> = order
        .iter()
        .map(|&class| ClassStat {
            class,
            count: 0,
            max_modulus: None,
            fitted_c1: 0.0,
        })
        .collect();
    for (&z, &m) in geo.roots.iter().zip(&geo.moduli) {
        let class = if m <= 1.0 {
            RootClass::Inside
        } else if pa * m.ln() < -epsilon.ln() {
            RootClass::SmallPower
        } else {
            let tq = cpow(z, geo.q);
            if zetas
                .iter()
                .all(|w| (tq.0 - w.0).hypot(tq.1 - w.1) > epsilon)
            {
                RootClass::AwayFromTop
            } else {
                RootClass::NearTop
            }
        };
        let s = &mut stats[order.iter().position(|&c| c == class).unwrap()];
        s.count += 1;
        s.max_modulus = Some(s.max_modulus.map_or(m, |x: f64| x.max(m)));
    }
    for s in &mut stats {
        if s.class != RootClass::Inside {
            s.fitted_c1 = s.max_modulus.map_or(0.0, |m| (pa * (m - 1.0)).max(0.0));
        }
    }
    let fitted_c1 = stats[1].fitted_c1.max(stats[2].fitted_c1);
    NearUnitStats {
        p: geo.p,
        q: geo.q,
        epsilon,
        total: geo.roots.len(),
        top_row_roots: zetas.to_vec(),
        top_row_roots_empty: zetas.is_empty(),
        classes: stats,
        fitted_c1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fill::FillingSlope;

    fn filling(c: &[i64], p: i64, q: i64) -> FillingPoly {
        filling_of(UniIntPoly::from_i64s(c), p, q)
    }

    fn filling_of(poly: UniIntPoly, p: i64, q: i64) -> FillingPoly {
        FillingPoly {
            slope: FillingSlope::new(p, q).unwrap(),
            poly,
            t_shift: 0,
            sign: 1,
            collision: false,
            predicted_leading: None,
        }
    }

    #[test]
    fn linear_and_quadratic() {
        let g = root_geometry(&filling(&[-1, 1], 1, 1)).unwrap();
        assert_eq!(g.moduli.len(), 1);
        assert!((g.moduli[0] - 1.0).abs() < 1e-15);
        assert!(g.fitted_d.abs() < 1e-12);
        let g = root_geometry(&filling(&[-2, 0, 1], 3, 1)).unwrap();
        assert!((g.max_modulus - 2f64.sqrt()).abs() < 1e-12);
        assert!((g.fitted_d - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(g.product_top.len(), 1);
        assert!((g.product_top[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn squarefree_part_only() {
        // (t - 2)^2 (t^2 + t + 1)
        let f = &UniIntPoly::from_i64s(&[4, -4, 1]) * &UniIntPoly::from_i64s(&[1, 1, 1]);
        let g = root_geometry(&filling_of(f, 1, 2)).unwrap();
        assert_eq!(g.degree, 3);
        assert!((g.moduli[0] - 2.0).abs() < 1e-12);
        assert_eq!(&g.moduli[1..], &[1.0, 1.0]);
        assert_eq!(g.count_beyond_at(1.0), 1);
    }

    #[test]
    fn unit_circle_classes_fit_zero() {
        let g = root_geometry(&filling(&[-1, 0, 0, 0, 0, 1], 5, 1)).unwrap();
        let f = BivarLaurentPoly::from_i64_terms(&[(0, 0, 1), (1, 1, 1)]).unwrap();
        let s = near_unit_threshold_stats(&f, &g, 0.1).unwrap();
        assert_eq!(s.class(RootClass::Inside).count, 5);
        assert_eq!(s.fitted_c1, 0.0);
        assert!(s.top_row_roots_empty);
    }
}
