//! Sweep plans: ranges, quadrants and strategy, loadable from TOML or JSON.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::LabError;

/// Inclusive integer range, written `a..b`, `a..=b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RangeRepr", into = "String")]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RangeRepr {
    Text(String),
    Single(i64),
    Pair([i64; 2]),
}

impl TryFrom<RangeRepr> for IntRange {
    type Error = String;
    fn try_from(r: RangeRepr) -> Result<Self, String> {
        match r {
            RangeRepr::Text(s) => s.parse(),
            RangeRepr::Single(v) => Ok(IntRange { lo: v, hi: v }),
            RangeRepr::Pair([lo, hi]) => IntRange::new(lo, hi),
        }
    }
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self, String> {
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(IntRange { lo, hi })
    }
}

impl FromStr for IntRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad range bound '{t}' in '{s}'"))
        };
        match s.split_once("..") {
            Some((a, b)) => IntRange::new(num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                Ok(IntRange { lo: v, hi: v })
            }
        }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl From<IntRange> for String {
    fn from(r: IntRange) -> String {
        r.to_string()
    }
}

/// Sign pattern applied to `(p, q)` drawn from the ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    #[serde(rename = "++")]
    PlusPlus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "-+")]
    MinusPlus,
    #[serde(rename = "--")]
    MinusMinus,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant::PlusPlus,
        Quadrant::PlusMinus,
        Quadrant::MinusPlus,
        Quadrant::MinusMinus,
    ];

    fn signs(self) -> (i64, i64) {
        match self {
            Quadrant::PlusPlus => (1, 1),
            Quadrant::PlusMinus => (1, -1),
            Quadrant::MinusPlus => (-1, 1),
            Quadrant::MinusMinus => (-1, -1),
        }
    }
}

impl FromStr for Quadrant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "++" => Ok(Quadrant::PlusPlus),
            "+-" => Ok(Quadrant::PlusMinus),
            "-+" => Ok(Quadrant::MinusPlus),
            "--" => Ok(Quadrant::MinusMinus),
            o => Err(format!(
                "unknown quadrant '{o}' (expected ++, +-, -+ or --)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorStrategy {
    /// Specialize the fixture itself at every slope.
    #[default]
    Direct,
    /// Below the top slope, specialize the basis-changed polynomial and
    /// cross-check against the direct factor degrees.
    BasisChange,
}

fn default_true() -> bool {
    true
}

fn default_quadrants() -> Vec<Quadrant> {
    Quadrant::ALL.to_vec()
}

pub const DEFAULT_EPSILONS: [f64; 4] = [0.02, 0.05, 0.1, 0.2];

fn default_epsilons() -> Vec<f64> {
    DEFAULT_EPSILONS.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    /// Path to a fixture file, or a polynomial in human syntax.
    pub fixture: String,
    #[serde(rename = "p")]
    pub p_range: IntRange,
    #[serde(rename = "q")]
    pub q_range: IntRange,
    /// Skip non-coprime pairs; when off they are recorded as failed cells.
    #[serde(default = "default_true")]
    pub coprime_only: bool,
    #[serde(default = "default_quadrants")]
    pub quadrants: Vec<Quadrant>,
    #[serde(default)]
    pub sector: SectorStrategy,
    /// Worker threads; 0 picks the available parallelism.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Run even if the fixture fails validation.
    #[serde(default)]
    pub force: bool,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// Measure precision floor; `DEHNFILL_BITS` applies when unset.
    #[serde(default)]
    pub min_bits: Option<usize>,
}

impl SweepPlan {
    pub fn new(fixture: impl Into<String>, p_range: IntRange, q_range: IntRange) -> Self {
        SweepPlan {
            fixture: fixture.into(),
            p_range,
            q_range,
            coprime_only: true,
            quadrants: default_quadrants(),
            sector: SectorStrategy::Direct,
            jobs: 0,
            output: None,
            force: false,
            epsilons: default_epsilons(),
            min_bits: None,
        }
    }

    /// TOML unless the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self, LabError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Distinct cells in lexicographic order, each canonical (`p > 0`, or
    /// `(0, 1)`). Non-coprime pairs appear only when `coprime_only` is off.
    pub fn cells(&self) -> Vec<(i64, i64)> {
        let mut out = BTreeSet::new();
        for p in self.p_range.lo..=self.p_range.hi {
            for q in self.q_range.lo..=self.q_range.hi {
                for quad in &self.quadrants {
                    let (sp, sq) = quad.signs();
                    let (mut a, mut b) = (sp * p, sq * q);
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    if self.coprime_only && a.gcd(&b) != 1 {
                        continue;
                    }
                    if a < 0 || (a == 0 && b < 0) {
                        a = -a;
                        b = -b;
                    }
                    out.insert((a, b));
                }
            }
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!(
            "1..60".parse::<IntRange>().unwrap(),
            IntRange { lo: 1, hi: 60 }
        );
        assert_eq!(
            "-3..=4".parse::<IntRange>().unwrap(),
            IntRange { lo: -3, hi: 4 }
        );
        assert_eq!("7".parse::<IntRange>().unwrap(), IntRange { lo: 7, hi: 7 });
        assert!("5..2".parse::<IntRange>().is_err());
    }

    #[test]
    fn cells_are_canonical_and_coprime() {
        let mut plan = SweepPlan::new(
            "x",
            IntRange::new(1, 2).unwrap(),
            IntRange::new(1, 2).unwrap(),
        );
        assert_eq!(
            plan.cells(),
            vec![(1, -2), (1, -1), (1, 1), (1, 2), (2, -1), (2, 1)]
        );
        plan.quadrants = vec![Quadrant::PlusPlus];
        assert_eq!(plan.cells(), vec![(1, 1), (1, 2), (2, 1)]);
        let plan = SweepPlan::new(
            "x",
            IntRange::new(2, 2).unwrap(),
            IntRange::new(2, 2).unwrap(),
        );
        assert!(plan.cells().is_empty());
    }

    #[test]
    fn toml_and_json_agree() {
        let t = SweepPlan::parse(
            "fixture = \"f.json\"\np = \"1..5\"\nq = [1, 3]\nsector = \"basis_change\"\njobs = 2\n",
        )
        .unwrap();
        let j = SweepPlan::parse(r#"{"fixture": "f.json", "p": "1..5", "q": "1..3", "sector": "basis_change", "jobs": 2}"#).unwrap();
        assert_eq!(t, j);
        assert_eq!(t.epsilons, DEFAULT_EPSILONS.to_vec());
        assert!(SweepPlan::parse("fixture = \"f\"\np = 1\nq = 1\nbogus = 3\n").is_err());
    }
}
