//! Scalar backends for the root finder: machine doubles and binary
//! big-floats at a fixed working precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;

pub trait Real:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Working precision in bits.
    fn bits(&self) -> usize;
    fn from_f64(x: f64, bits: usize) -> Self;
    fn from_bigint(x: &BigInt, bits: usize) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;

    fn zero_like(&self) -> Self {
        Self::from_f64(0.0, self.bits())
    }

    fn abs(&self) -> Self {
        if *self < self.zero_like() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Unit roundoff.
    fn epsilon(&self) -> f64 {
        (-(self.bits() as f64)).exp2()
    }
}

impl Real for f64 {
    fn bits(&self) -> usize {
        53
    }
    fn from_f64(x: f64, _: usize) -> Self {
        x
    }
    fn from_bigint(x: &BigInt, _: usize) -> Self {
        bigint_to_f64(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn epsilon(&self) -> f64 {
        f64::EPSILON / 2.0
    }
}

/// Nearest double, also for integers beyond `2^1023` (saturating to inf).
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64()
        .unwrap_or(if x.sign() == num_bigint::Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
}

/// `log2 |x|` for nonzero `x` without overflow.
pub fn log2_abs(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().abs().log2();
    }
    let shift = bits - 64;
    let top: BigInt = x.magnitude().clone().into();
    let top = (top >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// Binary floating point number with round-half-even arithmetic.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigFloat(FBig<HalfEven, 2>);

impl BigFloat {
    fn wrap(x: FBig<HalfEven, 2>) -> Self {
        BigFloat(x)
    }
}

impl Real for BigFloat {
    fn bits(&self) -> usize {
        self.0.precision()
    }

    fn from_f64(x: f64, bits: usize) -> Self {
        let f = FBig::<HalfEven, 2>::try_from(x).expect("finite double");
        BigFloat(f.with_precision(bits).value())
    }

    fn from_bigint(x: &BigInt, bits: usize) -> Self {
        let i = IBig::from_le_bytes(&x.to_signed_bytes_le());
        BigFloat(FBig::<HalfEven, 2>::from(i).with_precision(bits).value())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn sqrt(&self) -> Self {
        BigFloat(self.0.sqrt())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat::wrap($tr::$m(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

/// Complex number over a `Real` backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        Cx::new(R::from_f64(re, bits), R::from_f64(im, bits))
    }

    pub fn real(re: R) -> Self {
        let im = re.zero_like();
        Cx { re, im }
    }

    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> R {
        self.norm_sqr().sqrt()
    }

    /// Modulus rounded to a double; avoids squaring overflow in `f64`.
    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &Self) -> Self {
        Cx::new(
            self.re.clone() + o.re.clone(),
            self.im.clone() + o.im.clone(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Cx::new(
            self.re.clone() - o.re.clone(),
            self.im.clone() - o.im.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Cx::new(
            self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            self.re.clone() * o.im.clone() + self.im.clone() * o.re.clone(),
        )
    }

    pub fn scale(&self, k: &R) -> Self {
        Cx::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn div(&self, o: &Self) -> Self {
        // Smith's algorithm keeps doubles from overflowing on large inputs
        let (a, b, c, d) = (&self.re, &self.im, &o.re, &o.im);
        if c.abs() >= d.abs() {
            let r = d.clone() / c.clone();
            let den = c.clone() + d.clone() * r.clone();
            Cx::new(
                (a.clone() + b.clone() * r.clone()) / den.clone(),
                (b.clone() - a.clone() * r) / den,
            )
        } else {
            let r = c.clone() / d.clone();
            let den = c.clone() * r.clone() + d.clone();
            Cx::new(
                (a.clone() * r.clone() + b.clone()) / den.clone(),
                (b.clone() * r - a.clone()) / den,
            )
        }
    }

    pub fn recip(&self) -> Self {
        let one = Cx::from_f64(1.0, 0.0, self.re.bits());
        one.div(self)
    }

    pub fn is_zero(&self) -> bool {
        let z = self.re.zero_like();
        self.re == z && self.im == z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigfloat_basics() {
        let two = BigFloat::from_f64(2.0, 256);
        let r = two.sqrt();
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let back = (r.clone() * r).to_f64();
        assert_eq!(back, 2.0);
        let third = BigFloat::from_f64(1.0, 256) / BigFloat::from_f64(3.0, 256);
        assert_eq!(third.bits(), 256);
        let big = BigInt::from(-3) * BigInt::from(10).pow(40);
        assert!((BigFloat::from_bigint(&big, 128).to_f64() / -3e40 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_division() {
        let a = Cx::<f64>::from_f64(1.0, 2.0, 53);
        let b = Cx::<f64>::from_f64(3.0, -4.0, 53);
        let q = a.div(&b);
        let back = q.mul(&b);
        assert!((back.re - 1.0).abs() < 1e-15 && (back.im - 2.0).abs() < 1e-15);
    }

    #[test]
    fn huge_logs() {
        let x = BigInt::from(3).pow(2000);
        assert!((log2_abs(&x) - 2000.0 * 3f64.log2()).abs() < 1e-9);
        assert_eq!(log2_abs(&BigInt::from(8)), 3.0);
    }
}
