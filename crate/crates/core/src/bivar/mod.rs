//! Bivariate integer Laurent polynomials in `m` and `l`, their Newton
//! polygons, and the structural checks satisfied by A-polynomials.

mod newton;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::termparse::parse_terms;

pub use newton::{edge_polynomial, newton_polygon, Edge, NewtonPolygon, PolygonKind, Row, Slope};
pub use validate::{validate_apoly, ValidationReport};

pub type Exponent = (i64, i64);
/// Integer 2x2 matrix, row major.
pub type Matrix2 = [[i64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BivarError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("conflicting coefficients for m^{0} l^{1}")]
    DuplicateTerm(i64, i64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("matrix {0:?} is not unimodular")]
    NotUnimodular(Matrix2),
    #[error("exponent overflow")]
    ExponentOverflow,
}

/// Finite sum of `c * m^i * l^j` with nonzero integer `c`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivarLaurentPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

/// What `normalize` removed: `f = sign * content * m^i_shift l^j_shift * g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extracted {
    #[serde(with = "crate::decimal")]
    pub content: BigInt,
    pub i_shift: i64,
    pub j_shift: i64,
    pub sign: i8,
}

/// On-disk fixture layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    #[serde(default = "default_vars")]
    pub variables: Vec<String>,
    pub terms: Vec<(i64, i64, String)>,
}

fn default_vars() -> Vec<String> {
    vec!["m".into(), "l".into()]
}

impl BivarLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Build from terms; zero coefficients are skipped and repeated
    /// exponents must carry equal coefficients.
    pub fn from_terms<I>(terms: I) -> Result<Self, BivarError>
    where
        I: IntoIterator<Item = (i64, i64, BigInt)>,
    {
        let mut map = BTreeMap::new();
        for (i, j, c) in terms {
            if c.is_zero() {
                continue;
            }
            if let Some(old) = map.insert((i, j), c.clone()) {
                if old != c {
                    return Err(BivarError::DuplicateTerm(i, j));
                }
            }
        }
        Ok(BivarLaurentPoly { terms: map })
    }

    /// Build by adding coefficients of repeated exponents.
    pub fn from_sum<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64, BigInt)>,
    {
        let mut map: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (i, j, c) in terms {
            *map.entry((i, j)).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        BivarLaurentPoly { terms: map }
    }

    pub fn from_i64_terms(terms: &[(i64, i64, i64)]) -> Result<Self, BivarError> {
        Self::from_terms(terms.iter().map(|&(i, j, c)| (i, j, BigInt::from(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, i: i64, j: i64) -> Option<&BigInt> {
        self.terms.get(&(i, j))
    }

    /// `(min_i, max_i, min_j, max_j)`; `None` for zero.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.terms.keys();
        let &(i0, j0) = it.next()?;
        let mut b = (i0, i0, j0, j0);
        for &(i, j) in it {
            b.0 = b.0.min(i);
            b.1 = b.1.max(i);
            b.2 = b.2.min(j);
            b.3 = b.3.max(j);
        }
        Some(b)
    }

    /// Term with the largest `(j, i)`, used to fix the overall sign.
    pub fn leading_term(&self) -> Option<(Exponent, &BigInt)> {
        self.terms
            .iter()
            .max_by_key(|((i, j), _)| (*j, *i))
            .map(|(k, v)| (*k, v))
    }

    /// Value at integer `(m, l)`; only meaningful when no exponent is
    /// negative or the inputs are units.
    pub fn eval_at_units(&self, m: i8, l: i8) -> BigInt {
        assert!(m.abs() == 1 && l.abs() == 1, "evaluation only at +-1");
        self.terms
            .iter()
            .map(|(&(i, j), c)| {
                let s = if (m < 0 && i.rem_euclid(2) == 1) ^ (l < 0 && j.rem_euclid(2) == 1) {
                    -1
                } else {
                    1
                };
                c * s
            })
            .sum()
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn negate(&self) -> Self {
        BivarLaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    /// Multiply by `m^di l^dj`.
    pub fn shift(&self, di: i64, dj: i64) -> Result<Self, BivarError> {
        let mut terms = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let ni = i.checked_add(di).ok_or(BivarError::ExponentOverflow)?;
            let nj = j.checked_add(dj).ok_or(BivarError::ExponentOverflow)?;
            terms.insert((ni, nj), c.clone());
        }
        Ok(BivarLaurentPoly { terms })
    }

    /// `f(1/m, 1/l)`.
    pub fn reciprocal(&self) -> Self {
        BivarLaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((-i, -j), c.clone()))
                .collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        match self.bounds() {
            None => false,
            Some((i0, _, j0, _)) => {
                i0 == 0
                    && j0 == 0
                    && self.content().is_one()
                    && self.leading_term().unwrap().1.is_positive()
            }
        }
    }

    /// Parse either the JSON fixture format or the human syntax
    /// `c*m^i*l^j + ...` (`ℓ` is accepted for `l`).
    pub fn parse(text: &str) -> Result<Self, BivarError> {
        let t = text.trim();
        let f = if t.starts_with('{') {
            let fx: Fixture =
                serde_json::from_str(t).map_err(|e| BivarError::Parse(e.to_string()))?;
            fx.to_poly()?
        } else {
            let t = t.replace('ℓ', "l");
            let terms = parse_terms(&t, &["m", "l"]).map_err(BivarError::Parse)?;
            let mut out = Vec::with_capacity(terms.len());
            let mut seen = std::collections::BTreeSet::new();
            for term in terms {
                let (mut i, mut j) = (0i64, 0i64);
                for (v, e) in term.factors {
                    let slot = if v == "m" { &mut i } else { &mut j };
                    *slot = slot.checked_add(e).ok_or(BivarError::ExponentOverflow)?;
                }
                // a repeated monomial in a sum is ambiguous with the fixture's
                // restated-term rule, so it is rejected outright
                if !seen.insert((i, j)) {
                    return Err(BivarError::DuplicateTerm(i, j));
                }
                out.push((i, j, term.coeff));
            }
            Self::from_terms(out)?
        };
        if f.is_zero() {
            return Err(BivarError::ZeroPolynomial);
        }
        Ok(f)
    }

    /// Human syntax, terms by decreasing `(j, i)`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| std::cmp::Reverse((j, i)));
        let mut out = String::new();
        for (n, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let mut mono = Vec::new();
            for (v, e) in [("m", k.0), ("l", k.1)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    e => mono.push(format!("{v}^{e}")),
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&format!("{a}*"));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    pub fn to_fixture(&self, name: &str) -> Fixture {
        Fixture {
            name: name.into(),
            variables: default_vars(),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| (i, j, c.to_string()))
                .collect(),
        }
    }
}

impl Fixture {
    pub fn to_poly(&self) -> Result<BivarLaurentPoly, BivarError> {
        if self.variables.len() != 2 {
            return Err(BivarError::Parse("fixture must name two variables".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, j, c) in &self.terms {
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| BivarError::Parse(format!("bad coefficient '{c}'")))?;
            terms.push((*i, *j, c));
        }
        BivarLaurentPoly::from_terms(terms)
    }
}

impl fmt::Display for BivarLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for BivarLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarLaurentPoly({})", self.render())
    }
}

impl Serialize for BivarLaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(i64, i64, String)> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| (i, j, c.to_string()))
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivarLaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<(i64, i64, String)> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(v.len());
        for (i, j, c) in v {
            let c: BigInt = c.parse().map_err(serde::de::Error::custom)?;
            terms.push((i, j, c));
        }
        BivarLaurentPoly::from_terms(terms).map_err(serde::de::Error::custom)
    }
}

/// Remove content, the monomial factor and the sign of the `(j, i)`-largest
/// term.
pub fn normalize(f: &BivarLaurentPoly) -> Result<(BivarLaurentPoly, Extracted), BivarError> {
    let (i0, _, j0, _) = f.bounds().ok_or(BivarError::ZeroPolynomial)?;
    let content = f.content();
    let sign: i8 = if f.leading_term().unwrap().1.is_negative() {
        -1
    } else {
        1
    };
    let div = &content * BigInt::from(sign);
    let mut terms = BTreeMap::new();
    for (&(i, j), c) in &f.terms {
        terms.insert((i - i0, j - j0), c / &div);
    }
    Ok((
        BivarLaurentPoly { terms },
        Extracted {
            content,
            i_shift: i0,
            j_shift: j0,
            sign,
        },
    ))
}

pub fn det(u: &Matrix2) -> i64 {
    u[0][0] * u[1][1] - u[0][1] * u[1][0]
}

pub fn is_unimodular(u: &Matrix2) -> bool {
    det(u).abs() == 1
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &Matrix2) -> Result<Matrix2, BivarError> {
    let d = det(u);
    if d.abs() != 1 {
        return Err(BivarError::NotUnimodular(*u));
    }
    Ok([[d * u[1][1], -d * u[0][1]], [-d * u[1][0], d * u[0][0]]])
}

pub fn apply_matrix(u: &Matrix2, v: (i64, i64)) -> Option<(i64, i64)> {
    let a = u[0][0]
        .checked_mul(v.0)?
        .checked_add(u[0][1].checked_mul(v.1)?)?;
    let b = u[1][0]
        .checked_mul(v.0)?
        .checked_add(u[1][1].checked_mul(v.1)?)?;
    Some((a, b))
}

/// Change of variables `m = m'^r l'^-b`, `l = m'^s l'^a` for
/// `U = [[r, s], [-b, a]]`: the exponent `(i, j)` moves to `U (i, j)`.
/// Slopes `(p, q)` move by the same `U`, which preserves `p j - q i` when
/// `det U = 1` and negates it when `det U = -1`.
pub fn monomial_substitute(
    f: &BivarLaurentPoly,
    u: &Matrix2,
) -> Result<BivarLaurentPoly, BivarError> {
    if !is_unimodular(u) {
        return Err(BivarError::NotUnimodular(*u));
    }
    let mut terms = BTreeMap::new();
    for (&e, c) in &f.terms {
        let e2 = apply_matrix(u, e).ok_or(BivarError::ExponentOverflow)?;
        terms.insert(e2, c.clone());
    }
    Ok(BivarLaurentPoly { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(t: &[(i64, i64, i64)]) -> BivarLaurentPoly {
        BivarLaurentPoly::from_i64_terms(t).unwrap()
    }

    #[test]
    fn parses_human_syntax() {
        let f = BivarLaurentPoly::parse("l*m^2 - 1").unwrap();
        assert_eq!(f, poly(&[(2, 1, 1), (0, 0, -1)]));
        assert_eq!(
            BivarLaurentPoly::parse("0"),
            Err(BivarError::ZeroPolynomial)
        );
        assert!(matches!(
            BivarLaurentPoly::parse("m + 2*m"),
            Err(BivarError::DuplicateTerm(1, 0))
        ));
        assert!(BivarLaurentPoly::parse("m + m").is_err());
        assert_eq!(
            BivarLaurentPoly::parse("ℓ − 3m^-1").unwrap(),
            poly(&[(0, 1, 1), (-1, 0, -3)])
        );
    }

    #[test]
    fn render_round_trips() {
        let f = poly(&[
            (4, 0, 1),
            (0, 1, 1),
            (2, 1, -1),
            (4, 1, -2),
            (4, 2, 1),
            (-3, 5, 12),
        ]);
        let s = f.render();
        assert_eq!(BivarLaurentPoly::parse(&s).unwrap(), f);
        assert_eq!(poly(&[(2, 1, 1), (0, 0, -1)]).render(), "m^2*l - 1");
    }

    #[test]
    fn normalize_examples() {
        let (g, ex) = normalize(&poly(&[(2, 1, 2), (1, 1, -2)])).unwrap();
        assert_eq!(g, poly(&[(1, 0, 1), (0, 0, -1)]));
        assert_eq!(
            ex,
            Extracted {
                content: 2.into(),
                i_shift: 1,
                j_shift: 1,
                sign: 1
            }
        );
        let (g, ex) = normalize(&poly(&[(-1, 2, -3)])).unwrap();
        assert_eq!(g, poly(&[(0, 0, 1)]));
        assert_eq!(
            (ex.content, ex.i_shift, ex.j_shift, ex.sign),
            (3.into(), -1, 2, -1)
        );
        let m1 = poly(&[(1, 0, 1), (0, 0, -1)]);
        let (g, ex) = normalize(&m1).unwrap();
        assert_eq!(g, m1);
        assert_eq!((ex.i_shift, ex.j_shift, ex.sign), (0, 0, 1));
        assert!(normalize(&BivarLaurentPoly::zero()).is_err());
    }

    #[test]
    fn substitution_examples() {
        let f = poly(&[(2, 1, 1), (0, 0, -1)]);
        assert_eq!(monomial_substitute(&f, &[[1, 0], [0, 1]]).unwrap(), f);
        assert_eq!(
            monomial_substitute(&f, &[[0, 1], [1, 0]]).unwrap(),
            poly(&[(1, 2, 1), (0, 0, -1)])
        );
        let g = poly(&[(0, 1, 1), (1, 0, 1)]);
        let h = monomial_substitute(&g, &[[1, 1], [0, 1]]).unwrap();
        assert_eq!(h.support(), vec![(1, 0), (1, 1)]);
        let (hn, _) = normalize(&h).unwrap();
        assert_eq!(hn, poly(&[(0, 0, 1), (0, 1, 1)]));
        assert!(monomial_substitute(&f, &[[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn evaluation_at_units() {
        let f = poly(&[(1, 1, 1), (0, 0, -1)]);
        assert_eq!(f.eval_at_units(1, 1), BigInt::zero());
        assert_eq!(f.eval_at_units(-1, 1), BigInt::from(-2));
    }
}
