use num_bigint::BigUint;
use num_traits::Signed;

use super::modp::Fp;
use super::poly::UniIntPoly;

/// Prime used to screen candidate orders before exact division.
const SCREEN_PRIME: u64 = 2_147_483_647;

/// Euler's totient for `0..=n`.
pub(crate) fn totients(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

fn mobius(mut n: usize) -> i32 {
    let mut m = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            m = -m;
        }
        d += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// The `n`-th cyclotomic polynomial, `prod_{d | n} (x^d - 1)^mu(n/d)`.
pub fn cyclotomic_polynomial(n: usize) -> UniIntPoly {
    assert!(n >= 1);
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = UniIntPoly::one();
    for &d in &divisors {
        if mobius(n / d) == 1 {
            num = &num * &UniIntPoly::x_pow_minus_one(d);
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            num = num
                .div_exact(&UniIntPoly::x_pow_minus_one(d))
                .expect("cyclotomic quotient is exact");
        }
    }
    num
}

/// Order `n` with `h = Phi_n`, for an irreducible primitive `h` with positive
/// leading coefficient; `None` if `h` is not cyclotomic.
pub fn cyclotomic_order(h: &UniIntPoly) -> Option<usize> {
    let d = h.degree()?;
    if d == 0 || !h.leading().unwrap().is_positive() || !h.leading().unwrap().eq(&1.into()) {
        return None;
    }
    let c0 = h.constant_term();
    if c0 != 1.into() && c0 != (-1).into() {
        return None;
    }
    if d >= 2 && h.reversed() != *h {
        return None;
    }
    // phi(n) >= sqrt(n / 2)
    let bound = (2 * d * d).max(6);
    let phi = totients(bound);
    let fp = Fp::new(SCREEN_PRIME);
    let hm = fp.reduce_poly(h);
    let x = vec![0u64, 1];
    for (n, &phi_n) in phi.iter().enumerate().take(bound + 1).skip(1) {
        if phi_n != d as u64 {
            continue;
        }
        if fp.pow_mod(&x, &BigUint::from(n), &hm) != vec![1] {
            continue;
        }
        if UniIntPoly::x_pow_minus_one(n).div_exact(h).is_some() {
            return Some(n);
        }
    }
    None
}
