use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::newton::newton_polygon;
use super::{BivarLaurentPoly, Exponent};
use crate::zfactor::is_cyclotomic_product;

/// Structural checks expected of an A-polynomial. Failures are data, not
/// errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `f(1/m, 1/l) = +-m^a l^b f(m, l)`.
    pub reciprocal: bool,
    /// The sign in the reciprocity relation when it holds.
    pub reciprocity_sign: Option<i8>,
    /// Every corner coefficient is `+-1`.
    pub corner_units: bool,
    pub bad_corners: Vec<Exponent>,
    /// Every edge polynomial is a unit times a product of cyclotomics.
    pub edges_cyclotomic: bool,
    /// Indices into the polygon's edges that failed.
    pub bad_edges: Vec<usize>,
    /// `f(1, 1) = 0`.
    pub vanishes_at_one: bool,
    pub passed: bool,
}

/// Sign `s` with `f(1/m, 1/l) = s * (monomial) * f`, if any.
fn reciprocity_sign(f: &BivarLaurentPoly) -> Option<i8> {
    let (i0, i1, j0, j1) = f.bounds()?;
    let mut sign: Option<i8> = None;
    for ((i, j), c) in f.terms() {
        let mirror = f.coeff(i0 + i1 - i, j0 + j1 - j)?;
        let s: i8 = if mirror == c {
            1
        } else if &-mirror == c {
            -1
        } else {
            return None;
        };
        match sign {
            None => sign = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    sign
}

pub fn validate_apoly(f: &BivarLaurentPoly) -> ValidationReport {
    let np = newton_polygon(f);
    let reciprocity_sign = reciprocity_sign(f);
    let bad_corners: Vec<Exponent> = np
        .corners
        .iter()
        .copied()
        .filter(|&(i, j)| !f.coeff(i, j).is_some_and(|c| c.abs().is_one()))
        .collect();
    let bad_edges: Vec<usize> = np
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| !is_cyclotomic_product(&e.polynomial).unwrap_or(false))
        .map(|(k, _)| k)
        .collect();
    let at_one: BigInt = f.terms().map(|(_, c)| c.clone()).sum();
    let vanishes_at_one = at_one.is_zero();
    let reciprocal = reciprocity_sign.is_some();
    let corner_units = bad_corners.is_empty();
    let edges_cyclotomic = bad_edges.is_empty();
    ValidationReport {
        reciprocal,
        reciprocity_sign,
        corner_units,
        bad_corners,
        edges_cyclotomic,
        bad_edges,
        vanishes_at_one,
        passed: reciprocal && corner_units && edges_cyclotomic && vanishes_at_one,
    }
}
