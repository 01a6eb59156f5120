//! Persistence: JSON lines, a flat CSV, the band, and plot tables.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{degree_band, LabError, SurveyRecord};

/// Shortest decimal that round-trips the value rounded to 12 significant
/// digits.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    rounded.to_string()
}

fn io(e: impl std::fmt::Display) -> LabError {
    LabError::Io(e.to_string())
}

pub fn records_jsonl(records: &[SurveyRecord]) -> Result<String, LabError> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).map_err(io)?);
        out.push('\n');
    }
    Ok(out)
}

const RECORD_COLUMNS: [&str; 20] = [
    "fixture_name",
    "p",
    "q",
    "sector",
    "status",
    "degree_total",
    "predicted_degree",
    "term_count",
    "collision",
    "leading_coeff",
    "t_power",
    "factors",
    "noncyclotomic_degrees",
    "min_ratio",
    "max_ratio",
    "min_noncyclotomic_mahler",
    "max_modulus",
    "fitted_D",
    "sector_check",
    "error",
];

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, LabError> {
    String::from_utf8(w.into_inner().map_err(io)?).map_err(io)
}

/// Factors are written `degree^multiplicity`, with a `c` suffix for
/// cyclotomic ones, separated by `;`.
pub fn records_csv(records: &[SurveyRecord]) -> Result<String, LabError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_COLUMNS).map_err(io)?;
    for r in records {
        let factors: Vec<String> = r
            .factors
            .iter()
            .map(|f| {
                format!(
                    "{}^{}{}",
                    f.degree,
                    f.multiplicity,
                    if f.cyclotomic { "c" } else { "" }
                )
            })
            .collect();
        let nc: Vec<String> = r.non_cyclotomic().map(|f| f.degree.to_string()).collect();
        let min_ratio = r.ratios.iter().copied().reduce(f64::min);
        let max_ratio = r.ratios.iter().copied().reduce(f64::max);
        let min_mahler = r.non_cyclotomic().map(|f| f.mahler).reduce(f64::min);
        let check = r.sector_check.as_ref().map_or(String::new(), |c| {
            if c.degrees_match { "match" } else { "mismatch" }.to_string()
        });
        w.write_record([
            r.fixture_name.clone(),
            r.p.to_string(),
            r.q.to_string(),
            r.sector.clone(),
            serde_json::to_value(r.status)
                .map_err(io)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
            r.degree_total.to_string(),
            r.predicted_degree.to_string(),
            r.term_count.to_string(),
            r.collision.to_string(),
            r.leading_coeff.clone().unwrap_or_default(),
            r.t_power.to_string(),
            factors.join(";"),
            nc.join(";"),
            opt(min_ratio),
            opt(max_ratio),
            opt(min_mahler),
            opt(r.max_modulus),
            opt(r.fitted.as_ref().map(|f| f.fitted_d)),
            check,
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    csv_string(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    RatioVsMax,
    ModulusVsQ,
    MeasureHist,
}

impl PlotKind {
    pub const ALL: [PlotKind; 3] = [
        PlotKind::RatioVsMax,
        PlotKind::ModulusVsQ,
        PlotKind::MeasureHist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::RatioVsMax => "ratio_vs_max",
            PlotKind::ModulusVsQ => "modulus_vs_q",
            PlotKind::MeasureHist => "measure_hist",
        }
    }
}

impl FromStr for PlotKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown plot kind '{s}'"))
    }
}

/// Stable-schema CSV; header only when nothing qualifies.
pub fn emit_plotdata(records: &[SurveyRecord], kind: PlotKind) -> Result<String, LabError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match kind {
        PlotKind::RatioVsMax => {
            w.write_record(["p", "q", "max_pq", "deg_g", "ratio"])
                .map_err(io)?;
            for r in records {
                for f in r.non_cyclotomic() {
                    let m = r.max_pq();
                    w.write_record([
                        r.p.to_string(),
                        r.q.to_string(),
                        m.to_string(),
                        f.degree.to_string(),
                        fmt_sig(f.degree as f64 / m as f64),
                    ])
                    .map_err(io)?;
                }
            }
        }
        PlotKind::ModulusVsQ => {
            w.write_record(["p", "q", "max_modulus", "fitted_D"])
                .map_err(io)?;
            for r in records {
                if let (Some(m), Some(f)) = (r.max_modulus, &r.fitted) {
                    w.write_record([
                        r.p.to_string(),
                        r.q.to_string(),
                        fmt_sig(m),
                        fmt_sig(f.fitted_d),
                    ])
                    .map_err(io)?;
                }
            }
        }
        PlotKind::MeasureHist => {
            w.write_record(["p", "q", "deg_g", "mahler"]).map_err(io)?;
            for r in records {
                for f in r.non_cyclotomic() {
                    w.write_record([
                        r.p.to_string(),
                        r.q.to_string(),
                        f.degree.to_string(),
                        fmt_sig(f.mahler),
                    ])
                    .map_err(io)?;
                }
            }
        }
    }
    csv_string(w)
}

/// `records.jsonl`, `records.csv`, `band.json` (or the band error) and one
/// `plot_<kind>.csv` per plot kind.
pub fn write_outputs(dir: &Path, records: &[SurveyRecord]) -> Result<(), LabError> {
    std::fs::create_dir_all(dir).map_err(io)?;
    let write = |name: &str, body: String| std::fs::write(dir.join(name), body).map_err(io);
    write("records.jsonl", records_jsonl(records)?)?;
    write("records.csv", records_csv(records)?)?;
    let band = match degree_band(records) {
        Ok(b) => serde_json::to_value(b).map_err(io)?,
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    write(
        "band.json",
        serde_json::to_string_pretty(&band).map_err(io)? + "\n",
    )?;
    for k in PlotKind::ALL {
        write(
            &format!("plot_{}.csv", k.name()),
            emit_plotdata(records, k)?,
        )?;
    }
    Ok(())
}
