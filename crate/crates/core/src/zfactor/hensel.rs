//! Multifactor Hensel lifting from `F_p` to `Z/p^k`.
//!
//! Factors are split into a balanced binary tree; each node is lifted with
//! the quadratic Hensel step, so the modulus doubles in its exponent at
//! every iteration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modp::{Fp, PolyP};
use super::poly::UniIntPoly;

type ZPoly = Vec<BigInt>;

fn trim(v: &mut ZPoly) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn reduce(v: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out: ZPoly = v.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut out);
    out
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    trim(&mut c);
    c
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut c: ZPoly = (0..n)
        .map(|i| {
            let mut v = a.get(i).cloned().unwrap_or_default();
            if let Some(y) = b.get(i) {
                v += y;
            }
            v
        })
        .collect();
    trim(&mut c);
    c
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut c: ZPoly = (0..n)
        .map(|i| {
            let mut v = a.get(i).cloned().unwrap_or_default();
            if let Some(y) = b.get(i) {
                v -= y;
            }
            v
        })
        .collect();
    trim(&mut c);
    c
}

/// Division by a monic polynomial, exact over `Z`.
fn div_rem_monic(a: &ZPoly, h: &ZPoly) -> (ZPoly, ZPoly) {
    debug_assert!(h.last().is_some_and(One::is_one));
    if a.len() < h.len() {
        return (Vec::new(), a.clone());
    }
    let mut r = a.clone();
    let hn = h.len();
    let mut q = vec![BigInt::zero(); a.len() - hn + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + hn - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (j, hc) in h.iter().enumerate() {
            r[k + j] -= &c * hc;
        }
        q[k] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn from_p(f: &PolyP) -> ZPoly {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step. Given `f = g h (mod m)`, `s g + t h = 1
/// (mod m)` with `h` monic, returns the same data modulo `m2` where
/// `m | m2 | m^2`.
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = reduce(&zsub(f, &zmul(g, h)), m2);
    let (q, r) = div_rem_monic(&reduce(&zmul(s, &e), m2), h);
    let q = reduce(&q, m2);
    let g2 = reduce(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), m2);
    let h2 = reduce(&zadd(h, &r), m2);

    let b = reduce(
        &zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &vec![BigInt::one()]),
        m2,
    );
    let (c, d) = div_rem_monic(&reduce(&zmul(s, &b), m2), &h2);
    let c = reduce(&c, m2);
    let s2 = reduce(&zsub(s, &d), m2);
    let t2 = reduce(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), m2);
    (g2, h2, s2, t2)
}

/// Lift the monic modular factorization `f = lc(f) * prod(factors) (mod p)`
/// to modulus `p^k`. Returns monic factors with coefficients in `[0, p^k)`,
/// in the same order as `factors`.
pub(crate) fn lift_factors(f: &UniIntPoly, factors: &[PolyP], fp: Fp, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(fp.p).pow(k);
    let fz = reduce(&f.coeffs().to_vec(), &pk);
    let mut out = Vec::with_capacity(factors.len());
    lift_node(&fz, factors, fp, k, &pk, &mut out);
    out
}

fn lift_node(f: &ZPoly, factors: &[PolyP], fp: Fp, k: u32, pk: &BigInt, out: &mut Vec<ZPoly>) {
    if factors.len() == 1 {
        let lc = f.last().expect("lifted node is zero");
        let inv = lc
            .modinv(pk)
            .expect("leading coefficient not invertible mod p^k");
        let v: ZPoly = f.iter().map(|c| (c * &inv).mod_floor(pk)).collect();
        out.push(v);
        return;
    }
    let mid = factors.len() / 2;
    let h0 = factors[..mid]
        .iter()
        .fold(vec![1u64], |acc, u| fp.poly_mul(&acc, u));
    let lc_p = fp.reduce_int(f.last().unwrap());
    let g0 = fp.scale(
        &factors[mid..]
            .iter()
            .fold(vec![1u64], |acc, u| fp.poly_mul(&acc, u)),
        lc_p,
    );
    let (one, s0, t0) = fp.ext_gcd(&g0, &h0);
    debug_assert_eq!(one, vec![1]);

    let p = BigInt::from(fp.p);
    let (mut g, mut h, mut s, mut t) = (from_p(&g0), from_p(&h0), from_p(&s0), from_p(&t0));
    let mut e = 1u32;
    while e < k {
        let e2 = (2 * e).min(k);
        let m2 = p.pow(e2);
        let fm = reduce(f, &m2);
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m2);
        e = e2;
    }
    lift_node(&h, &factors[..mid], fp, k, pk, out);
    lift_node(&g, &factors[mid..], fp, k, pk, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifts_quadratic_split() {
        // (x^2 - 2)(x + 1) is irreducible-times-linear over Z but splits
        // into three distinct linear factors mod 7.
        let f = &UniIntPoly::from_i64s(&[-2, 0, 1]) * &UniIntPoly::from_i64s(&[1, 1]);
        let fp = Fp::new(7);
        let fm = fp.reduce_poly(&f);
        let mut facs: Vec<PolyP> = Vec::new();
        for (d, g) in fp.distinct_degree(&fp.monic(&fm)) {
            assert_eq!(d, 1);
            for r in 0..7u64 {
                let lin = vec![(7 - r) % 7, 1];
                if fp.rem(&g, &lin).is_empty() {
                    facs.push(lin);
                }
            }
        }
        assert_eq!(facs.len(), 3);
        let k = 6;
        let lifted = lift_factors(&f, &facs, fp, k);
        let pk = BigInt::from(7).pow(k);
        let prod = lifted
            .iter()
            .fold(vec![BigInt::one()], |acc, u| zmul(&acc, u));
        assert_eq!(reduce(&prod, &pk), reduce(&f.coeffs().to_vec(), &pk));
        for (u, u0) in lifted.iter().zip(&facs) {
            assert_eq!(fp.reduce_poly(&UniIntPoly::new(u.clone())), *u0);
        }
    }
}
