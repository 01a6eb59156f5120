//! Empirical band `c1_hat <= deg g / max(|p|, |q|) <= c2_hat` over all
//! non-cyclotomic factors of a sweep, and a trend diagnostic for the lower
//! edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LabError, SurveyRecord};

/// Records with at least one non-cyclotomic factor needed for a band.
pub const MIN_RECORDS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubBand {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub factors: usize,
}

/// Ratios of cells with `|p| + |q|` in `[lo, 2 lo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendBin {
    pub lo: i64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub factors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeBand {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub records: usize,
    pub factors: usize,
    pub per_sector: BTreeMap<String, SubBand>,
    pub trend: Vec<TrendBin>,
    /// The minimum ratio in the top bin is below half the minimum over
    /// every lower bin: the lower edge is drifting toward 0.
    pub trend_flag: bool,
}

fn widen(b: &mut SubBand, r: f64) {
    b.c1_hat = b.c1_hat.min(r);
    b.c2_hat = b.c2_hat.max(r);
    b.factors += 1;
}

fn fresh() -> SubBand {
    SubBand {
        c1_hat: f64::INFINITY,
        c2_hat: f64::NEG_INFINITY,
        factors: 0,
    }
}

pub fn degree_band(records: &[SurveyRecord]) -> Result<DegreeBand, LabError> {
    let with: Vec<&SurveyRecord> = records.iter().filter(|r| !r.ratios.is_empty()).collect();
    if with.len() < MIN_RECORDS {
        return Err(LabError::InsufficientData {
            needed: MIN_RECORDS,
            have: with.len(),
        });
    }
    let mut all = fresh();
    let mut per_sector: BTreeMap<String, SubBand> = BTreeMap::new();
    let mut bins: BTreeMap<i64, SubBand> = BTreeMap::new();
    for r in &with {
        let size = r.p.abs() + r.q.abs();
        let lo = 1i64 << (63 - size.max(1).leading_zeros());
        for &x in &r.ratios {
            widen(&mut all, x);
            widen(per_sector.entry(r.sector.clone()).or_insert_with(fresh), x);
            widen(bins.entry(lo).or_insert_with(fresh), x);
        }
    }
    let trend: Vec<TrendBin> = bins
        .iter()
        .map(|(&lo, b)| TrendBin {
            lo,
            min_ratio: b.c1_hat,
            max_ratio: b.c2_hat,
            factors: b.factors,
        })
        .collect();
    let trend_flag = match trend.split_last() {
        Some((top, rest)) if !rest.is_empty() => {
            let below = rest
                .iter()
                .map(|b| b.min_ratio)
                .fold(f64::INFINITY, f64::min);
            top.min_ratio < 0.5 * below
        }
        _ => false,
    };
    Ok(DegreeBand {
        c1_hat: all.c1_hat,
        c2_hat: all.c2_hat,
        records: with.len(),
        factors: all.factors,
        per_sector,
        trend,
        trend_flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::CellStatus;

    fn rec(p: i64, q: i64, ratios: &[f64]) -> SurveyRecord {
        let mut r = SurveyRecord::empty("t", p, q);
        r.status = CellStatus::Ok;
        r.sector = "above_top".into();
        r.ratios = ratios.to_vec();
        r
    }

    #[test]
    fn aggregates_extremes() {
        let recs: Vec<SurveyRecord> = [
            (5, 1, 0.8),
            (7, 1, 2.2),
            (9, 2, 1.0),
            (11, 2, 1.5),
            (13, 3, 1.2),
        ]
        .iter()
        .map(|&(p, q, x)| rec(p, q, &[x]))
        .collect();
        let b = degree_band(&recs).unwrap();
        assert_eq!((b.c1_hat, b.c2_hat), (0.8, 2.2));
        assert!(!b.trend_flag);
        assert_eq!(b.factors, 5);
    }

    #[test]
    fn too_few_records() {
        let e = degree_band(&[rec(3, 1, &[1.0])]).unwrap_err();
        assert_eq!(e, LabError::InsufficientData { needed: 5, have: 1 });
    }

    #[test]
    fn shrinking_lower_edge_is_flagged() {
        let recs: Vec<SurveyRecord> = [
            (3, 1, 1.0),
            (5, 2, 1.0),
            (9, 4, 0.9),
            (20, 9, 0.8),
            (60, 7, 0.2),
        ]
        .iter()
        .map(|&(p, q, x)| rec(p, q, &[x]))
        .collect();
        assert!(degree_band(&recs).unwrap().trend_flag);
    }
}
