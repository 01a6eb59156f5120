//! Dehn-filling specialization `A_{p,q}(t) = A(t^-q, t^p)`, leading-term
//! prediction from the Newton polygon, and the unimodular basis changes that
//! move every slope sector into the dominant one.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bivar::{
    monomial_substitute, normalize, BivarLaurentPoly, Exponent, Matrix2, NewtonPolygon, Slope,
};
use crate::zfactor::UniIntPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FillError {
    #[error("({0}, {1}) is not a coprime pair")]
    NotCoprime(i64, i64),
    #[error("specialization at ({0}, {1}) cancels to zero")]
    Degenerate(i64, i64),
    #[error("corners {0:?} tie for the leading term")]
    Tie(Vec<Exponent>),
    #[error("exponent overflow")]
    ExponentOverflow,
}

/// Coprime `(p, q) != (0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FillingSlope {
    pub p: i64,
    pub q: i64,
}

impl FillingSlope {
    pub fn new(p: i64, q: i64) -> Result<Self, FillError> {
        if p.gcd(&q) != 1 {
            return Err(FillError::NotCoprime(p, q));
        }
        Ok(FillingSlope { p, q })
    }

    /// Representative of `{(p, q), (-p, -q)}` with `q > 0`, or `(1, 0)`.
    pub fn upper(self) -> Self {
        if self.q < 0 || (self.q == 0 && self.p < 0) {
            FillingSlope {
                p: -self.p,
                q: -self.q,
            }
        } else {
            self
        }
    }

    /// Representative with `p > 0`, or `(0, 1)`.
    pub fn canonical(self) -> Self {
        if self.p < 0 || (self.p == 0 && self.q < 0) {
            FillingSlope {
                p: -self.p,
                q: -self.q,
            }
        } else {
            self
        }
    }

    pub fn slope(&self) -> Slope {
        Slope::of_pq(self.p, self.q)
    }

    pub fn max_abs(&self) -> i64 {
        self.p.abs().max(self.q.abs())
    }
}

/// Position of `p/q` (with `q > 0`) among the slopes `s_1 > s_2 > ...` of
/// the left chain of the Newton polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    /// `p/q > s_A`.
    AboveTop,
    /// `s_{k+1} < p/q <= s_k`; `edge` indexes `NewtonPolygon::edges` and
    /// `chain` is `k` (1-based).
    Between { chain: usize, edge: usize },
    /// `p/q <=` the last left-chain slope.
    BelowAll,
    /// `p = 0` or `q = 0`.
    Axis,
}

impl Sector {
    pub fn label(&self) -> String {
        match self {
            Sector::AboveTop => "above_top".into(),
            Sector::Between { chain, .. } => format!("between_{chain}"),
            Sector::BelowAll => "below_all".into(),
            Sector::Axis => "axis".into(),
        }
    }

    /// Left-chain corner whose term leads in this sector, as an index into
    /// `NewtonPolygon::left_chain`.
    pub fn chain_corner(&self, chain_len: usize) -> Option<usize> {
        match self {
            Sector::AboveTop => Some(0),
            Sector::Between { chain, .. } => Some(*chain),
            Sector::BelowAll => Some(chain_len - 1),
            Sector::Axis => None,
        }
    }
}

/// Slopes of consecutive left-chain edges, from the top.
pub fn left_chain_slopes(np: &NewtonPolygon) -> Vec<Ratio<i64>> {
    np.left_chain()
        .windows(2)
        .map(|w| Ratio::new(w[0].0 - w[1].0, w[0].1 - w[1].1))
        .collect()
}

pub fn classify_sector(np: &NewtonPolygon, s: FillingSlope) -> Sector {
    let s = s.upper();
    if s.p == 0 || s.q == 0 {
        return Sector::Axis;
    }
    let x = Ratio::new(s.p, s.q);
    let chain = np.left_chain();
    let slopes = left_chain_slopes(np);
    if slopes.is_empty() || x > slopes[0] {
        return Sector::AboveTop;
    }
    for k in 1..slopes.len() {
        if x > slopes[k] {
            let edge = np
                .edge_index(chain[k - 1], chain[k])
                .expect("left-chain edge");
            return Sector::Between { chain: k, edge };
        }
    }
    Sector::BelowAll
}

/// Exact `A(t^-q, t^p)` with normalization data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingPoly {
    pub slope: FillingSlope,
    /// Nonzero constant term, positive leading coefficient.
    pub poly: UniIntPoly,
    /// `sign * t^t_shift * poly(t)` is the raw substitution.
    pub t_shift: i64,
    pub sign: i8,
    /// Two support points share an exponent `-q i + p j`.
    pub collision: bool,
    /// Raw coefficient and exponent of the predicted leading term; `None`
    /// on a corner tie.
    #[serde(with = "crate::decimal::opt_pair")]
    pub predicted_leading: Option<(BigInt, i64)>,
}

impl FillingPoly {
    pub fn degree(&self) -> usize {
        self.poly.deg0()
    }

    /// Raw Laurent coefficients keyed by exponent.
    pub fn raw_terms(&self) -> BTreeMap<i64, BigInt> {
        let s = BigInt::from(self.sign);
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64 + self.t_shift, c * &s))
            .collect()
    }
}

fn exponent(s: FillingSlope, (i, j): Exponent) -> Result<i64, FillError> {
    let a = s.q.checked_mul(i).ok_or(FillError::ExponentOverflow)?;
    let b = s.p.checked_mul(j).ok_or(FillError::ExponentOverflow)?;
    b.checked_sub(a).ok_or(FillError::ExponentOverflow)
}

pub fn specialize(f: &BivarLaurentPoly, s: FillingSlope) -> Result<FillingPoly, FillError> {
    let mut raw: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut collision = false;
    let mut best: Option<(i64, Vec<Exponent>)> = None;
    for (e, c) in f.terms() {
        let k = exponent(s, e)?;
        match raw.get_mut(&k) {
            Some(v) => {
                collision = true;
                *v += c;
            }
            None => {
                raw.insert(k, c.clone());
            }
        }
        match &mut best {
            Some((m, at)) if *m == k => at.push(e),
            Some((m, _)) if *m > k => {}
            _ => best = Some((k, vec![e])),
        }
    }
    raw.retain(|_, c| !c.is_zero());
    let (&lo, _) = raw.iter().next().ok_or(FillError::Degenerate(s.p, s.q))?;
    let (&hi, lead) = raw.iter().next_back().unwrap();
    let sign: i8 = if lead.is_negative() { -1 } else { 1 };
    let sb = BigInt::from(sign);
    let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
    for (k, c) in &raw {
        coeffs[(k - lo) as usize] = c * &sb;
    }
    let predicted_leading = best.and_then(|(k, at)| {
        (at.len() == 1).then(|| (f.coeff(at[0].0, at[0].1).unwrap().clone(), k))
    });
    Ok(FillingPoly {
        slope: s,
        poly: UniIntPoly::new(coeffs),
        t_shift: lo,
        sign,
        collision,
        predicted_leading,
    })
}

/// Corner maximizing `-q i + p j` and the maximum.
pub fn predict_leading(np: &NewtonPolygon, s: FillingSlope) -> Result<(Exponent, i64), FillError> {
    let mut best: Option<(i64, Vec<Exponent>)> = None;
    for &c in &np.corners {
        let k = exponent(s, c)?;
        match &mut best {
            Some((m, at)) if *m == k => at.push(c),
            Some((m, _)) if *m > k => {}
            _ => best = Some((k, vec![c])),
        }
    }
    let (k, at) = best.expect("polygon has corners");
    if at.len() > 1 {
        return Err(FillError::Tie(at));
    }
    Ok((at[0], k))
}

/// The `p/q` at which two support exponents can coincide.
pub fn collision_slopes(f: &BivarLaurentPoly) -> BTreeSet<Slope> {
    let pts = f.support();
    let mut out = BTreeSet::new();
    for (n, a) in pts.iter().enumerate() {
        for b in &pts[n + 1..] {
            out.insert(Slope::from_delta(b.0 - a.0, b.1 - a.1));
        }
    }
    out
}

/// `(r, s)` with `a r + b s = 1`, `|s|` minimal (then `|r|`, then `s >= 0`).
pub fn bezout_min_s(a: i64, b: i64) -> (i64, i64) {
    let e = a.extended_gcd(&b);
    assert_eq!(e.gcd.abs(), 1, "({a}, {b}) not coprime");
    let (r0, s0) = (e.x * e.gcd, e.y * e.gcd);
    if a == 0 {
        // b = +-1
        return (0, b);
    }
    // s = s0 + a t, r = r0 - b t
    let t = -Ratio::new(s0, a).round().to_integer();
    let mut best: Option<(i64, i64)> = None;
    for dt in -1..=1 {
        let tt = t + dt;
        let (r, s) = (r0 - b * tt, s0 + a * tt);
        let key = (s.abs(), r.abs(), -s.signum());
        if best.map_or(true, |(br, bs)| key < (bs.abs(), br.abs(), -bs.signum())) {
            best = Some((r, s));
        }
    }
    best.unwrap()
}

/// Maps `p/q` in one sector to the dominant sector of a transformed
/// polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorTransform {
    pub sector: Sector,
    /// Corner that becomes the top-left corner after the change of basis.
    pub corner: Exponent,
    /// Edge direction `(a, b)` with `b > 0`; `(0, 0)` for the identity.
    pub direction: (i64, i64),
    /// `[[r, s], [-b, a]]`; slopes move by `(p', q') = U (p, q)`.
    pub matrix: Matrix2,
    /// Normalized transformed polynomial.
    pub poly: BivarLaurentPoly,
    pub description: String,
}

impl SectorTransform {
    pub fn map_slope(&self, s: FillingSlope) -> FillingSlope {
        let u = &self.matrix;
        let s = s.upper();
        FillingSlope {
            p: u[0][0] * s.p + u[0][1] * s.q,
            q: u[1][0] * s.p + u[1][1] * s.q,
        }
    }
}

/// Identity for the dominant sector, then one basis change per left-chain
/// edge. For a slope in sector `k`, the transformed pair has `q' > 0` and
/// lies above the top slope of the transformed polygon.
pub fn sector_transform(f: &BivarLaurentPoly, np: &NewtonPolygon) -> Vec<SectorTransform> {
    let chain = np.left_chain();
    let (f_norm, _) = normalize(f).expect("nonzero polynomial");
    let mut out = vec![SectorTransform {
        sector: Sector::AboveTop,
        corner: chain[0],
        direction: (0, 0),
        matrix: [[1, 0], [0, 1]],
        poly: f_norm,
        description: "identity".into(),
    }];
    for k in 1..chain.len() {
        let (di, dj) = (chain[k - 1].0 - chain[k].0, chain[k - 1].1 - chain[k].1);
        let g = di.gcd(&dj);
        let (a, b) = (di / g, dj / g);
        let (r, s) = bezout_min_s(a, b);
        let u: Matrix2 = [[r, s], [-b, a]];
        let g = monomial_substitute(f, &u).expect("unimodular by construction");
        let (poly, _) = normalize(&g).expect("nonzero polynomial");
        let sector = if k + 1 == chain.len() {
            Sector::BelowAll
        } else {
            Sector::Between {
                chain: k,
                edge: np
                    .edge_index(chain[k - 1], chain[k])
                    .expect("left-chain edge"),
            }
        };
        out.push(SectorTransform {
            sector,
            corner: chain[k],
            direction: (a, b),
            matrix: u,
            poly,
            description: format!("slopes below {a}/{b} led by corner {:?}", chain[k]),
        });
    }
    out
}

/// Transform whose sector contains `s`; `None` on an axis slope.
pub fn transform_for<'a>(
    transforms: &'a [SectorTransform],
    np: &NewtonPolygon,
    s: FillingSlope,
) -> Option<&'a SectorTransform> {
    let chain_len = np.left_chain().len();
    let idx = classify_sector(np, s).chain_corner(chain_len)?;
    transforms.get(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivar::newton_polygon;

    fn poly(t: &[(i64, i64, i64)]) -> BivarLaurentPoly {
        BivarLaurentPoly::from_i64_terms(t).unwrap()
    }

    fn fs(p: i64, q: i64) -> FillingSlope {
        FillingSlope::new(p, q).unwrap()
    }

    #[test]
    fn specialization_examples() {
        let f = poly(&[(2, 1, 1), (0, 0, -1)]);
        let a = specialize(&f, fs(3, 2)).unwrap();
        assert_eq!(a.poly, UniIntPoly::from_i64s(&[-1, 1]));
        assert_eq!((a.sign, a.t_shift, a.collision), (-1, -1, false));
        let a = specialize(&f, fs(1, 0)).unwrap();
        assert_eq!(a.poly, UniIntPoly::from_i64s(&[-1, 1]));
        let g = poly(&[(0, 1, 1), (1, 0, 1), (0, 0, 1)]);
        let a = specialize(&g, fs(2, 1)).unwrap();
        assert_eq!(a.poly, UniIntPoly::from_i64s(&[1, 1, 0, 1]));
        assert_eq!(a.t_shift, -1);
    }

    #[test]
    fn collisions_can_cancel() {
        let f = poly(&[(2, 1, 1), (0, 0, -1)]);
        assert_eq!(specialize(&f, fs(2, 1)), Err(FillError::Degenerate(2, 1)));
        assert_eq!(
            collision_slopes(&f),
            BTreeSet::from([Slope::Finite(Ratio::from_integer(2))])
        );
        assert!(collision_slopes(&poly(&[(1, 1, 3)])).is_empty());
    }

    #[test]
    fn unit_square_leading_corner() {
        let np = newton_polygon(&poly(&[(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]));
        assert_eq!(predict_leading(&np, fs(1, 1)).unwrap(), ((0, 1), 1));
    }

    #[test]
    fn bezout_choices() {
        assert_eq!(bezout_min_s(4, 1), (0, 1));
        assert_eq!(bezout_min_s(1, 1), (1, 0));
        assert_eq!(bezout_min_s(0, 1), (0, 1));
        assert_eq!(bezout_min_s(-4, 1), (0, 1));
        for (a, b) in [(3, 5), (-7, 2), (5, 3), (1, 9), (-1, 1)] {
            let (r, s) = bezout_min_s(a, b);
            assert_eq!(a * r + b * s, 1);
        }
    }

    #[test]
    fn slope_normal_forms() {
        assert_eq!(fs(-3, -2).upper(), fs(3, 2));
        assert_eq!(fs(3, -2).upper(), fs(-3, 2));
        assert_eq!(fs(-3, 2).canonical(), fs(3, -2));
        assert_eq!(fs(0, -1).canonical(), fs(0, 1));
        assert!(FillingSlope::new(4, 2).is_err());
        assert!(FillingSlope::new(0, 0).is_err());
    }
}
