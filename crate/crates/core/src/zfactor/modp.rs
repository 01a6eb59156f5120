//! Polynomial arithmetic over a prime field `F_p` (small word-sized `p`),
//! with distinct-degree and equal-degree factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::poly::UniIntPoly;

/// Dense coefficients in `[0, p)`, lowest degree first, no trailing zeros.
pub(crate) type PolyP = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 31));
        Fp { p }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    pub fn reduce_int(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn reduce_poly(self, f: &UniIntPoly) -> PolyP {
        let mut v: PolyP = f.coeffs().iter().map(|c| self.reduce_int(c)).collect();
        trim(&mut v);
        v
    }

    pub fn monic(self, f: &PolyP) -> PolyP {
        match f.last() {
            None => Vec::new(),
            Some(&l) => {
                let li = self.inv(l);
                f.iter().map(|&c| self.mul(c, li)).collect()
            }
        }
    }

    pub fn poly_sub(self, a: &PolyP, b: &PolyP) -> PolyP {
        let n = a.len().max(b.len());
        let mut v: PolyP = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(&mut v);
        v
    }

    pub fn poly_mul(self, a: &PolyP, b: &PolyP) -> PolyP {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // accumulate unreduced; p < 2^31 so each product < 2^62 and we reduce
        // every few additions
        let mut acc = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = acc[i + j] + x * y;
                acc[i + j] = if t >= (1 << 62) { t % self.p } else { t };
            }
        }
        for c in acc.iter_mut() {
            *c %= self.p;
        }
        trim(&mut acc);
        acc
    }

    pub fn scale(self, a: &PolyP, k: u64) -> PolyP {
        let mut v: PolyP = a.iter().map(|&c| self.mul(c, k)).collect();
        trim(&mut v);
        v
    }

    /// Quotient and remainder; `b` nonzero.
    pub fn div_rem(self, a: &PolyP, b: &PolyP) -> (PolyP, PolyP) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        if a.len() < b.len() {
            return (Vec::new(), a.clone());
        }
        let inv = self.inv(*b.last().unwrap());
        let mut r = a.clone();
        let bn = b.len();
        let mut q = vec![0u64; a.len() - bn + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + bn - 1];
            if top == 0 {
                continue;
            }
            let c = self.mul(top, inv);
            q[k] = c;
            for (j, &bc) in b.iter().enumerate() {
                r[k + j] = self.sub(r[k + j], self.mul(c, bc));
            }
        }
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    pub fn rem(self, a: &PolyP, b: &PolyP) -> PolyP {
        if a.len() < b.len() {
            return a.clone();
        }
        self.div_rem(a, b).1
    }

    /// Monic gcd (empty for gcd(0, 0)).
    pub fn gcd(self, a: &PolyP, b: &PolyP) -> PolyP {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(self, a: &PolyP, b: &PolyP) -> (PolyP, PolyP, PolyP) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (PolyP, PolyP) = (vec![1], Vec::new());
        let (mut t0, mut t1): (PolyP, PolyP) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let l = *r0.last().expect("ext_gcd of zero polynomials");
        let li = self.inv(l);
        (
            self.scale(&r0, li),
            self.scale(&s0, li),
            self.scale(&t0, li),
        )
    }

    pub fn derivative(self, a: &PolyP) -> PolyP {
        let mut v: PolyP = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        trim(&mut v);
        v
    }

    /// `base^e mod m` with a big exponent.
    pub fn pow_mod(self, base: &PolyP, e: &BigUint, m: &PolyP) -> PolyP {
        let mut acc: PolyP = self.rem(&vec![1], m);
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.poly_mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.poly_mul(&acc, &b), m);
            }
        }
        acc
    }

    pub fn is_squarefree(self, f: &PolyP) -> bool {
        let d = self.derivative(f);
        if d.is_empty() {
            return false;
        }
        self.gcd(f, &d).len() == 1
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(d, g)` where `g` is the product of all irreducible factors of
    /// degree `d`.
    pub fn distinct_degree(self, f: &PolyP) -> Vec<(usize, PolyP)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x: PolyP = vec![0, 1];
        let mut h = self.rem(&x, &f);
        let pe = BigUint::from(self.p);
        let mut d = 0usize;
        while f.len() > 2 * (d + 1) {
            d += 1;
            h = self.pow_mod(&h, &pe, &f);
            let g = self.gcd(&f, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((d, g));
            }
        }
        if f.len() > 1 {
            out.push((f.len() - 1, f));
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a monic product of distinct degree-`d`
    /// irreducibles. `p` must be odd.
    pub fn equal_degree<R: Rng>(self, g: &PolyP, d: usize, rng: &mut R) -> Vec<PolyP> {
        let n = g.len() - 1;
        if n == d {
            return vec![g.clone()];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let mut a: PolyP = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
            trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let b = self.poly_sub(&self.pow_mod(&a, &e, g), &vec![1]);
            let h = self.gcd(g, &b);
            if h.len() > 1 && h.len() < g.len() {
                let other = self.monic(&self.div_rem(g, &h).0);
                let mut out = self.equal_degree(&h, d, rng);
                out.extend(self.equal_degree(&other, d, rng));
                return out;
            }
        }
    }
}

pub(crate) fn trim(v: &mut PolyP) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ext_gcd_identity() {
        let fp = Fp::new(101);
        let a = vec![1, 0, 1]; // x^2 + 1
        let b = vec![3, 1]; // x + 3
        let (g, s, t) = fp.ext_gcd(&a, &b);
        assert_eq!(g, vec![1]);
        let lhs = fp.poly_sub(
            &fp.poly_mul(&s, &a),
            &fp.scale(&fp.poly_mul(&t, &b), fp.p - 1),
        );
        assert_eq!(lhs, vec![1]);
    }

    #[test]
    fn ddf_and_edf_split_x_pow_minus_one() {
        // x^8 - 1 mod 101: 101 = 1 mod 4 but not 1 mod 8, so
        // x^8 - 1 = (x^4 - 1)(x^4 + 1) with x^4 - 1 splitting and x^4 + 1
        // splitting into quadratics.
        let fp = Fp::new(101);
        let mut f = vec![0u64; 9];
        f[0] = 100;
        f[8] = 1;
        let ddf = fp.distinct_degree(&f);
        let pattern: Vec<(usize, usize)> =
            ddf.iter().map(|(d, g)| (*d, (g.len() - 1) / d)).collect();
        assert_eq!(pattern, vec![(1, 4), (2, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut all = Vec::new();
        for (d, g) in &ddf {
            let parts = fp.equal_degree(g, *d, &mut rng);
            assert!(parts.iter().all(|h| h.len() - 1 == *d));
            all.extend(parts);
        }
        let prod = all.iter().fold(vec![1u64], |acc, h| fp.poly_mul(&acc, h));
        assert_eq!(prod, f);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (100..140).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![101, 103, 107, 109, 113, 127, 131, 137, 139]);
    }
}
