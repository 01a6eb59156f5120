//! Independent oracles and generators shared by the integration targets.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use dehnfill_core::zfactor::{Factorization, UniIntPoly};

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn poly(c: &[i64]) -> UniIntPoly {
    UniIntPoly::from_i64s(c)
}

pub fn rand_dense<R: Rng>(rng: &mut R, max_deg: usize, bound: i64) -> UniIntPoly {
    loop {
        let d = rng.gen_range(1..=max_deg);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-bound..=bound)).collect();
        while c[d] == 0 {
            c[d] = rng.gen_range(-bound..=bound);
        }
        let f = poly(&c);
        if f.deg0() > 0 {
            return f;
        }
    }
}

/// A product of small random factors, some repeated, of degree at most
/// `max_deg` and coefficients at most `bound`; `None` if the draw overflows
/// either limit.
pub fn rand_product<R: Rng>(rng: &mut R, max_deg: usize, bound: i64) -> Option<UniIntPoly> {
    let mut acc = UniIntPoly::one();
    let pieces = rng.gen_range(1..=4);
    for _ in 0..pieces {
        let g = rand_dense(rng, 4, 4);
        let times = if rng.gen_bool(0.25) { 2 } else { 1 };
        for _ in 0..times {
            acc = &acc * &g;
        }
    }
    if rng.gen_bool(0.3) {
        acc = acc.shift_up(rng.gen_range(1..=2));
    }
    if rng.gen_bool(0.3) {
        acc = acc.scale(&BigInt::from(rng.gen_range(-6..=6i64).max(1)));
    }
    let ok = acc.deg0() >= 1 && acc.deg0() <= max_deg && acc.max_abs_coeff() <= BigInt::from(bound);
    ok.then_some(acc)
}

/// Complex roots as eigenvalues of the companion matrix.
pub fn eigen_roots(f: &UniIntPoly) -> Vec<Complex<f64>> {
    let c = f.to_f64_coeffs();
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// `|lead| prod max(1, |root|)` from companion eigenvalues.
pub fn eigen_mahler(f: &UniIntPoly) -> f64 {
    let z = f.trailing_zeros();
    let g = f.shift_down(z);
    let lead = g.leading().unwrap().to_f64().unwrap().abs();
    eigen_roots(&g)
        .iter()
        .fold(lead, |acc, r| acc * r.norm().max(1.0))
}

fn positive_divisors(n: &BigInt) -> Vec<i64> {
    let n = n.abs().to_i64().expect("small leading coefficient");
    let mut out: Vec<i64> = (1..=n)
        .take_while(|d| d * d <= n)
        .filter(|d| n % d == 0)
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Round `a * prod (x - r)` to an integer polynomial when it is within
/// rounding of a real one. Clustered roots of high multiplicity carry large
/// imaginary noise, so only exact division certifies the result.
fn rounded_product(roots: &[Complex<f64>], a: f64) -> Option<UniIntPoly> {
    let mut c = vec![Complex::new(a, 0.0)];
    for r in roots {
        let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
        for (k, v) in c.iter().enumerate() {
            next[k + 1] += v;
            next[k] -= v * r;
        }
        c = next;
    }
    let scale = c.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if c.iter().any(|v| v.im.abs() > 0.25) || scale > 1e15 {
        return None;
    }
    Some(poly(
        &c.iter().map(|v| v.re.round() as i64).collect::<Vec<_>>(),
    ))
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::new(), f)
}

/// Smallest-degree nonconstant divisor of primitive `h`, found by trying
/// every subset of its numerical roots with every admissible leading
/// coefficient and testing exact division. Minimal degree makes it
/// irreducible.
fn smallest_divisor(h: &UniIntPoly) -> UniIntPoly {
    let roots = eigen_roots(h);
    let n = roots.len();
    let leads = positive_divisors(h.leading().unwrap());
    let mut found: Option<UniIntPoly> = None;
    for k in 1..=n / 2 {
        let hit = combinations(n, k, &mut |idx| {
            let sub: Vec<Complex<f64>> = idx.iter().map(|&i| roots[i]).collect();
            for &a in &leads {
                if let Some(g) = rounded_product(&sub, a as f64) {
                    if g.deg0() == k && h.div_exact(&g).is_some() {
                        found = Some(g.primitive_part());
                        return true;
                    }
                }
            }
            false
        });
        if hit {
            break;
        }
    }
    found.unwrap_or_else(|| h.clone())
}

/// Oracle factorization: `(signed content, power of x, sorted (factor,
/// multiplicity))`.
pub fn oracle_factor(f: &UniIntPoly) -> (BigInt, usize, Vec<(UniIntPoly, u32)>) {
    let t = f.trailing_zeros();
    let mut h = f.shift_down(t);
    let mut c = h.content();
    if h.leading().unwrap().is_negative() {
        c = -c;
    }
    h = h.div_scalar_exact(&c);
    let mut out: Vec<(UniIntPoly, u32)> = Vec::new();
    while h.deg0() > 0 {
        let mut g = smallest_divisor(&h);
        if g.leading().unwrap().is_negative() {
            g = g.scale(&BigInt::from(-1));
        }
        let mut m = 0;
        while let Some(q) = h.div_exact(&g) {
            h = q;
            m += 1;
        }
        assert!(m > 0, "oracle divisor does not divide");
        out.push((g, m));
    }
    out.sort_by(|a, b| (a.0.deg0(), a.0.coeffs()).cmp(&(b.0.deg0(), b.0.coeffs())));
    (c, t, out)
}

/// `zfactor` output in the oracle's shape.
pub fn as_oracle_shape(fac: &Factorization) -> (BigInt, usize, Vec<(UniIntPoly, u32)>) {
    let mut fs: Vec<(UniIntPoly, u32)> = fac
        .factors
        .iter()
        .map(|f| (f.poly.clone(), f.multiplicity))
        .collect();
    fs.sort_by(|a, b| (a.0.deg0(), a.0.coeffs()).cmp(&(b.0.deg0(), b.0.coeffs())));
    (BigInt::from(fac.unit) * &fac.content, fac.t_power, fs)
}

pub fn is_unit_gcd(a: &UniIntPoly, b: &UniIntPoly) -> bool {
    a.gcd(b).deg0() == 0
}
