//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FactorError;

/// Exact integer polynomial. `coeffs[i]` is the coefficient of `x^i`; the
/// last stored coefficient is never zero, and the zero polynomial has no
/// stored coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniIntPoly {
    coeffs: Vec<BigInt>,
}

impl UniIntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniIntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniIntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^d`
    pub fn monomial(c: BigInt, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiplicity of the root `x = 0`.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide by `x^k`; the low coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// `x^deg f(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `f(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content removed and sign fixed so the leading coefficient is positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        UniIntPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divide every coefficient by `k`, which must divide all of them.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        UniIntPoly {
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn l2_norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Exact quotient `self / d` over the integers, or `None` when `d` does
    /// not divide `self` in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_integral(d)?;
        r.is_zero().then_some(q)
    }

    /// Long division that only succeeds when every quotient step is integral.
    fn div_rem_integral(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.leading()?;
        if self.len() < d.len() {
            return Some((Self::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let dn = d.len();
        let mut q = vec![BigInt::zero(); r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dn - 1];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qk * dc;
            }
            q[k] = qk;
        }
        Some((Self::new(q), Self::new(r)))
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dl = d.leading().expect("pseudo_rem by zero polynomial").clone();
        let dn = d.len();
        let mut r = self.coeffs.clone();
        while r.len() >= dn && !r.is_empty() {
            let shift = r.len() - dn;
            let top = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &dl;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= &top * dc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Greatest common divisor in `Z[x]`, normalized to a positive leading
    /// coefficient. Primitive polynomial remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    fn normalize_sign(&self) -> Self {
        if self.leading().is_some_and(Signed::is_negative) {
            -self
        } else {
            self.clone()
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Render with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }

    /// Parse a univariate polynomial: either a JSON array of coefficients
    /// (integers or decimal strings, index = exponent) or the human syntax
    /// `3*x^2 - x + 1` in a single variable (`x`, `t` or `z`).
    pub fn parse(text: &str) -> Result<Self, FactorError> {
        let s = text.trim();
        if s.starts_with('[') {
            let v: serde_json::Value =
                serde_json::from_str(s).map_err(|e| FactorError::Parse(e.to_string()))?;
            let arr = v
                .as_array()
                .ok_or_else(|| FactorError::Parse("expected an array".into()))?;
            let mut coeffs = Vec::with_capacity(arr.len());
            for item in arr {
                let c = match item {
                    serde_json::Value::String(s) => s.trim().parse::<BigInt>().ok(),
                    serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
                    _ => None,
                }
                .ok_or_else(|| FactorError::Parse(format!("bad coefficient {item}")))?;
                coeffs.push(c);
            }
            return Ok(Self::new(coeffs));
        }
        let terms =
            crate::termparse::parse_terms(s, &["x", "t", "z"]).map_err(FactorError::Parse)?;
        let mut var: Option<String> = None;
        let mut coeffs: Vec<BigInt> = Vec::new();
        for t in terms {
            let mut exp: i64 = 0;
            for (name, e) in t.factors {
                match &var {
                    Some(v) if *v != name => {
                        return Err(FactorError::Parse(format!(
                            "mixed variables {v} and {name}"
                        )))
                    }
                    _ => var = Some(name),
                }
                exp += e;
            }
            let exp =
                usize::try_from(exp).map_err(|_| FactorError::Parse("negative exponent".into()))?;
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += t.coeff;
        }
        Ok(Self::new(coeffs))
    }

    /// Coefficients as `f64` (lossy for huge values).
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Debug for UniIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniIntPoly({})", self.render("x"))
    }
}

impl fmt::Display for UniIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Serialize for UniIntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniIntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UniIntPoly::new(coeffs))
    }
}

impl Add for &UniIntPoly {
    type Output = UniIntPoly;
    fn add(self, rhs: &UniIntPoly) -> UniIntPoly {
        let n = self.len().max(rhs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                v += r;
            }
            c.push(v);
        }
        UniIntPoly::new(c)
    }
}

impl Sub for &UniIntPoly {
    type Output = UniIntPoly;
    fn sub(self, rhs: &UniIntPoly) -> UniIntPoly {
        let n = self.len().max(rhs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                v -= r;
            }
            c.push(v);
        }
        UniIntPoly::new(c)
    }
}

impl Mul for &UniIntPoly {
    type Output = UniIntPoly;
    fn mul(self, rhs: &UniIntPoly) -> UniIntPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniIntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.len() + rhs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        UniIntPoly::new(c)
    }
}

impl Neg for &UniIntPoly {
    type Output = UniIntPoly;
    fn neg(self) -> UniIntPoly {
        UniIntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for UniIntPoly {
    type Output = UniIntPoly;
    fn add(self, rhs: UniIntPoly) -> UniIntPoly {
        &self + &rhs
    }
}

impl Sub for UniIntPoly {
    type Output = UniIntPoly;
    fn sub(self, rhs: UniIntPoly) -> UniIntPoly {
        &self - &rhs
    }
}

impl Mul for UniIntPoly {
    type Output = UniIntPoly;
    fn mul(self, rhs: UniIntPoly) -> UniIntPoly {
        &self * &rhs
    }
}

impl Neg for UniIntPoly {
    type Output = UniIntPoly;
    fn neg(self) -> UniIntPoly {
        -&self
    }
}
