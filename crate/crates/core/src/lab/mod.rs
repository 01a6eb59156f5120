//! Sweeps over coprime `(p, q)`: specialize, factor, split off cyclotomic
//! factors, measure, locate roots, and record one row per cell.

mod band;
mod output;
mod plan;

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use band::{degree_band, DegreeBand, SubBand, TrendBin};
pub use output::{emit_plotdata, fmt_sig, records_csv, records_jsonl, write_outputs, PlotKind};
pub use plan::{IntRange, Quadrant, SectorStrategy, SweepPlan, DEFAULT_EPSILONS};

use crate::bivar::{
    newton_polygon, validate_apoly, BivarError, BivarLaurentPoly, Fixture, Matrix2, NewtonPolygon,
};
use crate::fill::{
    classify_sector, sector_transform, specialize, transform_for, FillError, FillingPoly,
    FillingSlope, Sector, SectorTransform,
};
use crate::measure::{factor_measures, MeasureConfig};
use crate::rootmodel::{classify_near_unit, root_geometry_with, top_row_roots};
use crate::zfactor::{cyclotomic_split, factor, Factorization};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LabError {
    #[error("fixture: {0}")]
    Fixture(#[from] BivarError),
    #[error("fixture '{0}' fails validation (use force to run anyway)")]
    Invalid(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("need at least {needed} records with non-cyclotomic factors, have {have}")]
    InsufficientData { needed: usize, have: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    /// On a collision slope: two support points share an exponent.
    Degenerate,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub degree: usize,
    pub multiplicity: u32,
    pub cyclotomic: bool,
    /// `n` for a factor equal to `Phi_n`.
    pub order: Option<usize>,
    pub mahler: f64,
    pub mahler_error: f64,
}

/// Direct versus basis-changed specialization of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorCheck {
    pub p_prime: i64,
    pub q_prime: i64,
    pub matrix: Matrix2,
    /// `(degree, multiplicity)`, sorted.
    pub direct_degrees: Vec<(usize, u32)>,
    pub transformed_degrees: Vec<(usize, u32)>,
    pub degrees_match: bool,
    /// The two normalized univariate polynomials coincide.
    pub polys_equal: bool,
}

/// Per-cell values of the fitted constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedSnapshot {
    /// `|q| (max modulus - 1)`.
    #[serde(rename = "fitted_D")]
    pub fitted_d: f64,
    /// `(eps, C_1)` from the near-unit classes.
    pub c1: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub fixture_name: String,
    pub p: i64,
    pub q: i64,
    pub sector: String,
    pub status: CellStatus,
    pub error: Option<String>,
    /// Degree of `A_{p,q}` after removing the power of `t`.
    pub degree_total: usize,
    /// Spread of `p j - q i` over the Newton polygon corners.
    pub predicted_degree: usize,
    pub term_count: usize,
    pub collision: bool,
    /// Top coefficient of the raw `A_{p,q}`.
    pub leading_coeff: Option<String>,
    pub t_power: usize,
    pub factors: Vec<FactorRecord>,
    /// `deg g / max(|p|, |q|)` for each non-cyclotomic factor `g`.
    pub ratios: Vec<f64>,
    pub max_modulus: Option<f64>,
    pub fitted: Option<FittedSnapshot>,
    pub sector_check: Option<SectorCheck>,
}

impl SurveyRecord {
    pub fn non_cyclotomic(&self) -> impl Iterator<Item = &FactorRecord> {
        self.factors.iter().filter(|f| !f.cyclotomic)
    }

    pub fn max_pq(&self) -> i64 {
        self.p.abs().max(self.q.abs())
    }

    /// A record for `(p, q)` with nothing computed yet.
    pub fn empty(name: &str, p: i64, q: i64) -> Self {
        SurveyRecord {
            fixture_name: name.to_string(),
            p,
            q,
            sector: String::new(),
            status: CellStatus::Ok,
            error: None,
            degree_total: 0,
            predicted_degree: 0,
            term_count: 0,
            collision: false,
            leading_coeff: None,
            t_power: 0,
            factors: Vec::new(),
            ratios: Vec::new(),
            max_modulus: None,
            fitted: None,
            sector_check: None,
        }
    }
}

/// A path to a JSON or human-syntax fixture, or an inline polynomial.
pub fn load_fixture(source: &str) -> Result<(String, BivarLaurentPoly), LabError> {
    let path = Path::new(source);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| LabError::Io(format!("{source}: {e}")))?;
        if text.trim_start().starts_with('{') {
            let fx: Fixture =
                serde_json::from_str(&text).map_err(|e| BivarError::Parse(e.to_string()))?;
            return Ok((fx.name.clone(), fx.to_poly()?));
        }
        let stem = path
            .file_stem()
            .map_or(source.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((stem, BivarLaurentPoly::parse(&text)?));
    }
    let f = BivarLaurentPoly::parse(source)?;
    Ok((f.render(), f))
}

struct Context<'a> {
    name: &'a str,
    f: &'a BivarLaurentPoly,
    np: NewtonPolygon,
    transforms: Option<Vec<SectorTransform>>,
    zetas: Vec<(f64, f64)>,
    epsilons: &'a [f64],
    measure: MeasureConfig,
}

fn degree_multiset(fac: &Factorization) -> Vec<(usize, u32)> {
    let mut v: Vec<(usize, u32)> = fac
        .factors
        .iter()
        .map(|f| (f.poly.deg0(), f.multiplicity))
        .collect();
    v.sort_unstable();
    v
}

fn predicted_degree(np: &NewtonPolygon, s: FillingSlope) -> usize {
    let e: Vec<i128> = np
        .corners
        .iter()
        .map(|&(i, j)| s.p as i128 * j as i128 - s.q as i128 * i as i128)
        .collect();
    (e.iter().max().unwrap() - e.iter().min().unwrap()) as usize
}

fn survey_cell(ctx: &Context<'_>, p: i64, q: i64) -> SurveyRecord {
    let mut rec = SurveyRecord::empty(ctx.name, p, q);
    let s = match FillingSlope::new(p, q) {
        Ok(s) => s,
        Err(e) => {
            rec.status = CellStatus::Error;
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let sector = classify_sector(&ctx.np, s);
    rec.sector = sector.label();
    rec.predicted_degree = predicted_degree(&ctx.np, s);
    let direct = match specialize(ctx.f, s) {
        Ok(fp) => fp,
        Err(e) => {
            rec.status = if matches!(e, FillError::Degenerate(..)) {
                rec.collision = true;
                CellStatus::Degenerate
            } else {
                CellStatus::Error
            };
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.collision = direct.collision;
    if direct.collision {
        rec.status = CellStatus::Degenerate;
    }
    rec.degree_total = direct.degree();
    rec.term_count = direct.raw_terms().len();
    rec.leading_coeff = direct.poly.leading().map(|c| (c * direct.sign).to_string());
    if let Err(e) = fill_cell(ctx, s, sector, &direct, &mut rec) {
        rec.status = CellStatus::Error;
        rec.error = Some(e);
    }
    rec
}

fn fill_cell(
    ctx: &Context<'_>,
    s: FillingSlope,
    sector: Sector,
    direct: &FillingPoly,
    rec: &mut SurveyRecord,
) -> Result<(), String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let transformed = match (&ctx.transforms, sector) {
        (Some(ts), Sector::Between { .. } | Sector::BelowAll) => {
            let t = transform_for(ts, &ctx.np, s).expect("non-axis sector");
            let s2 = t.map_slope(s);
            let fp = specialize(&t.poly, s2).map_err(|e| err(&e))?;
            Some((t.matrix, s2, fp))
        }
        _ => None,
    };
    let work = transformed.as_ref().map_or(direct, |(_, _, fp)| fp);
    let fac = cyclotomic_split(factor(&work.poly).map_err(|e| err(&e))?);
    if let Some((matrix, s2, fp)) = &transformed {
        let direct_fac = factor(&direct.poly).map_err(|e| err(&e))?;
        let (a, b) = (degree_multiset(&direct_fac), degree_multiset(&fac));
        rec.sector_check = Some(SectorCheck {
            p_prime: s2.p,
            q_prime: s2.q,
            matrix: *matrix,
            degrees_match: a == b,
            direct_degrees: a,
            transformed_degrees: b,
            polys_equal: fp.poly == direct.poly,
        });
    }
    rec.t_power = fac.t_power;
    let measures = factor_measures(&fac, &ctx.measure).map_err(|e| err(&e))?;
    let max_pq = s.max_abs() as f64;
    for (i, (g, m)) in fac.factors.iter().zip(&measures).enumerate() {
        let order = fac
            .cyclotomic_part
            .iter()
            .find(|c| c.index == i)
            .map(|c| c.order);
        rec.factors.push(FactorRecord {
            degree: g.poly.deg0(),
            multiplicity: g.multiplicity,
            cyclotomic: order.is_some(),
            order,
            mahler: m.value,
            mahler_error: m.abs_error,
        });
        if order.is_none() && g.poly.deg0() > 0 {
            rec.ratios.push(g.poly.deg0() as f64 / max_pq);
        }
    }
    // Geometry is reported against the surveyed (p, q) even when the
    // polynomial came from the transformed side; the two coincide.
    let mut at_s = work.clone();
    at_s.slope = s;
    let geo = root_geometry_with(&at_s, &fac).map_err(|e| err(&e))?;
    rec.max_modulus = Some(geo.max_modulus);
    rec.fitted = Some(FittedSnapshot {
        fitted_d: geo.fitted_d,
        c1: ctx
            .epsilons
            .iter()
            .map(|&e| (e, classify_near_unit(&geo, &ctx.zetas, e).fitted_c1))
            .collect(),
    });
    Ok(())
}

fn measure_config(plan: &SweepPlan) -> MeasureConfig {
    let mut cfg = MeasureConfig::from_env();
    if let Some(b) = plan.min_bits {
        cfg.min_bits = b.clamp(53, cfg.max_bits);
    }
    cfg
}

/// Survey an already-parsed polynomial. Cells never abort the sweep; a
/// failing cell becomes a record with status `error`.
pub fn survey_poly(
    name: &str,
    f: &BivarLaurentPoly,
    plan: &SweepPlan,
) -> Result<Vec<SurveyRecord>, LabError> {
    if !plan.force && !validate_apoly(f).passed {
        return Err(LabError::Invalid(name.to_string()));
    }
    let np = newton_polygon(f);
    let transforms = (plan.sector == SectorStrategy::BasisChange).then(|| sector_transform(f, &np));
    let zetas = top_row_roots(f).map_err(|e| LabError::Config(format!("top-row roots: {e}")))?;
    let ctx = Context {
        name,
        f,
        np,
        transforms,
        zetas,
        epsilons: &plan.epsilons,
        measure: measure_config(plan),
    };
    let cells = plan.cells();
    let run = || -> Vec<SurveyRecord> {
        cells
            .par_iter()
            .map(|&(p, q)| survey_cell(&ctx, p, q))
            .collect()
    };
    let mut records = if plan.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(plan.jobs)
            .build()
            .map_err(|e| LabError::Config(e.to_string()))?
            .install(run)
    };
    records.sort_by_key(|r| (r.p, r.q));
    Ok(records)
}

/// Load the fixture, survey it, and write the outputs when the plan names
/// a directory.
pub fn run_survey(plan: &SweepPlan) -> Result<Vec<SurveyRecord>, LabError> {
    let (name, f) = load_fixture(&plan.fixture)?;
    let records = survey_poly(&name, &f, plan)?;
    if let Some(dir) = &plan.output {
        write_outputs(dir, &records)?;
    }
    Ok(records)
}

/// `run_survey` with the basis-change strategy.
pub fn sector_survey(plan: &SweepPlan) -> Result<Vec<SurveyRecord>, LabError> {
    let mut plan = plan.clone();
    plan.sector = SectorStrategy::BasisChange;
    run_survey(&plan)
}

/// Records grouped by sector label.
pub fn by_sector(records: &[SurveyRecord]) -> BTreeMap<&str, Vec<&SurveyRecord>> {
    let mut m: BTreeMap<&str, Vec<&SurveyRecord>> = BTreeMap::new();
    for r in records {
        m.entry(r.sector.as_str()).or_default().push(r);
    }
    m
}

/// Nonzero raw leading coefficient is `+-1`.
pub fn leading_is_unit(r: &SurveyRecord) -> Option<bool> {
    r.leading_coeff.as_ref().map(|c| {
        c.parse::<num_bigint::BigInt>()
            .map(|v| v.abs() == 1.into())
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn binomial_fixture_is_all_cyclotomic() {
        let mut plan = SweepPlan::new(
            fixture("lm2_minus_1.json"),
            IntRange::new(1, 5).unwrap(),
            IntRange::new(1, 5).unwrap(),
        );
        plan.quadrants = vec![Quadrant::PlusPlus];
        let recs = run_survey(&plan).unwrap();
        assert!(!recs.is_empty());
        for r in &recs {
            if r.status == CellStatus::Degenerate {
                // t^(p - 2q) - 1 vanishes identically at (2, 1)
                assert_eq!((r.p, r.q), (2, 1));
                continue;
            }
            assert!(r.ratios.is_empty(), "{r:?}");
            assert!(r.factors.iter().all(|f| f.cyclotomic));
            assert_eq!(r.term_count, 2);
        }
    }

    #[test]
    fn empty_cell_set() {
        let plan = SweepPlan::new(
            fixture("figure_eight.json"),
            IntRange::new(2, 2).unwrap(),
            IntRange::new(2, 2).unwrap(),
        );
        assert!(run_survey(&plan).unwrap().is_empty());
    }

    #[test]
    fn collision_slope_is_degenerate() {
        let mut plan = SweepPlan::new(
            fixture("figure_eight.json"),
            IntRange::new(4, 4).unwrap(),
            IntRange::new(1, 1).unwrap(),
        );
        plan.quadrants = vec![Quadrant::PlusPlus];
        plan.sector = SectorStrategy::BasisChange;
        let recs = run_survey(&plan).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].collision);
        assert_eq!(recs[0].status, CellStatus::Degenerate);
    }
}
