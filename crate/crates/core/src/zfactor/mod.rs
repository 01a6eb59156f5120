//! Exact factorization of univariate integer polynomials.
//!
//! Pipeline: content and sign, power of `x`, squarefree decomposition, then
//! for each squarefree part a modular factorization at a small prime,
//! Hensel lifting above the Mignotte bound and Zassenhaus recombination.
//! Degree patterns from several primes prune both the recombination search
//! and the whole lift when they already prove irreducibility.

mod cyclotomic;
mod hensel;
pub(crate) mod modp;
mod poly;
mod squarefree;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use cyclotomic::{cyclotomic_order, cyclotomic_polynomial};
pub use poly::UniIntPoly;
pub use squarefree::{squarefree_decompose, SquarefreeParts};

use modp::{is_prime, Fp, PolyP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("degree bound exceeded: {0}")]
    DegreeBoundExceeded(String),
    #[error("internal check failed: {0}")]
    InternalCheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone)]
pub struct FactorConfig {
    pub max_degree: usize,
    /// Cap on recombination subsets tested per squarefree part.
    pub max_subsets: u64,
    /// Admissible primes whose degree patterns are intersected.
    pub pattern_primes: usize,
    pub rng_seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            max_degree: 4096,
            max_subsets: 1 << 20,
            pattern_primes: 4,
            rng_seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub poly: UniIntPoly,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicMark {
    /// Index into `Factorization::factors`.
    pub index: usize,
    pub order: usize,
}

/// `unit * content * x^t_power * prod(poly^multiplicity)` equals the input.
/// Factors are irreducible, primitive, with positive leading coefficient,
/// sorted by degree then coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: i8,
    #[serde(with = "crate::decimal")]
    pub content: BigInt,
    pub t_power: usize,
    pub factors: Vec<Factor>,
    pub cyclotomic_part: Vec<CyclotomicMark>,
    pub non_cyclotomic_part: Vec<usize>,
    /// Whether `cyclotomic_split` has run.
    pub classified: bool,
}

impl Factorization {
    pub fn expand(&self) -> UniIntPoly {
        let mut acc = UniIntPoly::monomial(BigInt::from(self.unit) * &self.content, self.t_power);
        for f in &self.factors {
            acc = &acc * &f.poly.pow(f.multiplicity);
        }
        acc
    }

    /// Degree of the input minus `t_power`.
    pub fn factored_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|f| f.poly.deg0() * f.multiplicity as usize)
            .sum()
    }

    pub fn cyclotomic_factors(&self) -> impl Iterator<Item = (&Factor, usize)> {
        self.cyclotomic_part
            .iter()
            .map(move |m| (&self.factors[m.index], m.order))
    }

    pub fn non_cyclotomic_factors(&self) -> impl Iterator<Item = &Factor> {
        self.non_cyclotomic_part
            .iter()
            .map(move |&i| &self.factors[i])
    }

    /// Largest degree among non-cyclotomic factors (0 if none).
    pub fn max_non_cyclotomic_degree(&self) -> usize {
        self.non_cyclotomic_factors()
            .map(|f| f.poly.deg0())
            .max()
            .unwrap_or(0)
    }
}

pub fn factor(f: &UniIntPoly) -> Result<Factorization, FactorError> {
    factor_with(f, &FactorConfig::default())
}

pub fn factor_with(f: &UniIntPoly, cfg: &FactorConfig) -> Result<Factorization, FactorError> {
    let deg = f.degree().ok_or(FactorError::ZeroPolynomial)?;
    if deg > cfg.max_degree {
        return Err(FactorError::DegreeBoundExceeded(format!(
            "degree {deg} above configured bound {}",
            cfg.max_degree
        )));
    }
    let sq = squarefree_decompose(f);
    let mut factors = Vec::new();
    for (part, mult) in &sq.parts {
        for h in factor_squarefree(part, cfg)? {
            factors.push(Factor {
                poly: h,
                multiplicity: *mult,
            });
        }
    }
    factors.sort_by(|a, b| {
        a.poly
            .deg0()
            .cmp(&b.poly.deg0())
            .then_with(|| {
                a.poly
                    .coeffs()
                    .iter()
                    .rev()
                    .cmp(b.poly.coeffs().iter().rev())
            })
            .then(a.multiplicity.cmp(&b.multiplicity))
    });
    let out = Factorization {
        unit: sq.unit,
        content: sq.content,
        t_power: sq.t_power,
        non_cyclotomic_part: (0..factors.len()).collect(),
        factors,
        cyclotomic_part: Vec::new(),
        classified: false,
    };
    if out.expand() != *f {
        return Err(FactorError::InternalCheckFailed(format!(
            "product of factors does not reproduce {f}"
        )));
    }
    Ok(out)
}

/// Mark each factor as cyclotomic (with its order) or not.
pub fn cyclotomic_split(mut fac: Factorization) -> Factorization {
    fac.cyclotomic_part.clear();
    fac.non_cyclotomic_part.clear();
    for (i, f) in fac.factors.iter().enumerate() {
        match cyclotomic_order(&f.poly) {
            Some(order) => fac.cyclotomic_part.push(CyclotomicMark { index: i, order }),
            None => fac.non_cyclotomic_part.push(i),
        }
    }
    fac.classified = true;
    fac
}

/// Factor and classify in one call.
pub fn factor_classified(f: &UniIntPoly) -> Result<Factorization, FactorError> {
    factor(f).map(cyclotomic_split)
}

/// Whether `f = +-x^k * (product of cyclotomic polynomials)`.
pub fn is_cyclotomic_product(f: &UniIntPoly) -> Result<bool, FactorError> {
    let fac = factor_classified(f)?;
    Ok(fac.content.is_one() && fac.non_cyclotomic_part.is_empty())
}

/// Per-prime data used to pick the lifting prime.
struct PrimeData {
    fp: Fp,
    ddf: Vec<(usize, PolyP)>,
    count: usize,
}

/// Bitset of subset sums of the factor degrees in a distinct-degree split.
fn degree_pattern(ddf: &[(usize, PolyP)], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for (d, g) in ddf {
        let k = (g.len() - 1) / d;
        for _ in 0..k {
            for s in (0..=n - d).rev() {
                if reach[s] {
                    reach[s + d] = true;
                }
            }
        }
    }
    reach
}

/// Irreducible factors of a squarefree primitive polynomial with positive
/// leading coefficient and nonzero constant term.
fn factor_squarefree(g: &UniIntPoly, cfg: &FactorConfig) -> Result<Vec<UniIntPoly>, FactorError> {
    let n = g.deg0();
    if n <= 1 {
        return Ok(vec![g.clone()]);
    }
    let lc = g.leading().unwrap().clone();

    let mut allowed = vec![true; n + 1];
    let mut best: Option<PrimeData> = None;
    let mut admitted = 0;
    let mut p = 99u64;
    while admitted < cfg.pattern_primes {
        p += 2;
        if !is_prime(p) {
            continue;
        }
        let fp = Fp::new(p);
        if fp.reduce_int(&lc) == 0 {
            continue;
        }
        let gm = fp.reduce_poly(g);
        if !fp.is_squarefree(&gm) {
            continue;
        }
        admitted += 1;
        let ddf = fp.distinct_degree(&fp.monic(&gm));
        let pat = degree_pattern(&ddf, n);
        for (a, b) in allowed.iter_mut().zip(&pat) {
            *a &= *b;
        }
        let count: usize = ddf.iter().map(|(d, h)| (h.len() - 1) / d).sum();
        if best.as_ref().map_or(true, |b| count < b.count) {
            best = Some(PrimeData { fp, ddf, count });
        }
        if allowed[1..n].iter().all(|a| !a) {
            return Ok(vec![g.clone()]);
        }
    }
    let best = best.expect("at least one admissible prime");
    let fp = best.fp;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ fp.p);
    let mut local: Vec<PolyP> = Vec::with_capacity(best.count);
    for (d, h) in &best.ddf {
        local.extend(fp.equal_degree(h, *d, &mut rng));
    }
    local.sort();
    if local.len() == 1 {
        return Ok(vec![g.clone()]);
    }

    // Any factor of g (scaled to leading coefficient lc) has coefficients
    // bounded by |lc| * 2^n * ||g||_2.
    let norm = g.l2_norm_sq().sqrt() + BigInt::one();
    let bound: BigInt = lc.abs() * (BigInt::one() << n) * norm * 2;
    let pb = BigInt::from(fp.p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel::lift_factors(g, &local, fp, k);
    recombine(g, lifted, &pk, &allowed, cfg)
}

fn symmetric(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r > half {
        r - m
    } else {
        r
    }
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c.iter().map(|v| v.mod_floor(m)).collect()
}

/// Next `s`-subset of `0..r` in lexicographic order.
fn next_combination(idx: &mut [usize], r: usize) -> bool {
    let s = idx.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if idx[i] < r - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn recombine(
    g: &UniIntPoly,
    lifted: Vec<Vec<BigInt>>,
    pk: &BigInt,
    allowed: &[bool],
    cfg: &FactorConfig,
) -> Result<Vec<UniIntPoly>, FactorError> {
    let half: BigInt = pk / 2;
    let mut remaining = lifted;
    let mut cur = g.clone();
    let mut found = Vec::new();
    let mut tested = 0u64;
    let mut s = 1;
    'sizes: while 2 * s <= remaining.len() {
        let r = remaining.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let deg: usize = idx.iter().map(|&i| remaining[i].len() - 1).sum();
            if allowed[deg] && deg < cur.deg0() {
                tested += 1;
                if tested > cfg.max_subsets {
                    return Err(FactorError::DegreeBoundExceeded(format!(
                        "recombination exceeded {} subsets",
                        cfg.max_subsets
                    )));
                }
                let lc = cur.leading().unwrap().clone();
                // constant-term screen
                let mut c0 = lc.clone();
                for &i in &idx {
                    c0 = (c0 * &remaining[i][0]).mod_floor(pk);
                }
                let c0 = symmetric(&c0, pk, &half);
                let target = &lc * cur.constant_term();
                if !c0.is_zero() && (&target % &c0).is_zero() {
                    let mut prod = vec![lc.clone()];
                    for &i in &idx {
                        prod = mul_mod(&prod, &remaining[i], pk);
                    }
                    let cand =
                        UniIntPoly::new(prod.iter().map(|c| symmetric(c, pk, &half)).collect())
                            .primitive_part();
                    if let Some(q) = cur.div_exact(&cand) {
                        found.push(cand);
                        cur = q;
                        let mut keep = Vec::with_capacity(r - s);
                        for (i, u) in remaining.into_iter().enumerate() {
                            if !idx.contains(&i) {
                                keep.push(u);
                            }
                        }
                        remaining = keep;
                        continue 'sizes;
                    }
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        s += 1;
    }
    if cur.deg0() > 0 {
        found.push(cur.primitive_part());
    }
    Ok(found)
}
