use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::modp::{is_prime, Fp};
use super::poly::UniIntPoly;

/// Yun decomposition of a nonzero polynomial.
///
/// `unit * content * x^t_power * prod(part^mult)` reconstructs the input.
/// Parts are primitive, positive leading coefficient, pairwise coprime,
/// squarefree and coprime to `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquarefreeParts {
    pub unit: i8,
    #[serde(with = "crate::decimal")]
    pub content: BigInt,
    pub t_power: usize,
    pub parts: Vec<(UniIntPoly, u32)>,
}

pub fn squarefree_decompose(f: &UniIntPoly) -> SquarefreeParts {
    assert!(!f.is_zero(), "squarefree_decompose of the zero polynomial");
    let t_power = f.trailing_zeros();
    let g = f.shift_down(t_power);
    let unit = if g.leading().unwrap().is_negative() {
        -1
    } else {
        1
    };
    let content = g.content();
    let g = g.primitive_part();
    let parts = if g.deg0() == 0 {
        Vec::new()
    } else if squarefree_mod_small_prime(&g) {
        vec![(g, 1)]
    } else {
        yun(&g)
    };
    SquarefreeParts {
        unit,
        content,
        t_power,
        parts,
    }
}

/// A squarefree image modulo a prime not dividing the leading coefficient
/// certifies squarefreeness over `Z`. A few primes are tried; failure is
/// inconclusive.
fn squarefree_mod_small_prime(g: &UniIntPoly) -> bool {
    let lc = g.leading().unwrap();
    let mut tried = 0;
    let mut p = 101u64;
    while tried < 3 {
        if is_prime(p) {
            let fp = Fp::new(p);
            if fp.reduce_int(lc) != 0 {
                tried += 1;
                if fp.is_squarefree(&fp.reduce_poly(g)) {
                    return true;
                }
            }
        }
        p += 2;
    }
    false
}

/// Yun's algorithm on a primitive polynomial with positive leading
/// coefficient. All divisions are exact over `Z` by Gauss's lemma.
fn yun(g: &UniIntPoly) -> Vec<(UniIntPoly, u32)> {
    let d = g.derivative();
    let a0 = g.gcd(&d).primitive_part();
    if a0.deg0() == 0 {
        return vec![(g.clone(), 1)];
    }
    let mut b = g.div_exact(&a0).expect("gcd divides f");
    let c = exact_over_q(&d, &a0);
    let mut dd = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1u32;
    while b.deg0() > 0 {
        let a = b.gcd(&dd).primitive_part();
        let b_next = b.div_exact(&a).expect("gcd divides b");
        let c_next = exact_over_q(&dd, &a);
        dd = &c_next - &b_next.derivative();
        if a.deg0() > 0 {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    out
}

/// `num / den` where `den` is primitive and divides `num` over `Q`.
fn exact_over_q(num: &UniIntPoly, den: &UniIntPoly) -> UniIntPoly {
    if num.is_zero() {
        return UniIntPoly::zero();
    }
    num.div_exact(den)
        .expect("primitive divisor over Q divides over Z")
}
