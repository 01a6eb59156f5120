use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{BivarLaurentPoly, Exponent};
use crate::zfactor::UniIntPoly;

/// `di / dj` of a lattice direction; horizontal directions are `Infinite`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Ratio<i64>),
    Infinite,
}

impl Slope {
    pub fn from_delta(di: i64, dj: i64) -> Slope {
        if dj == 0 {
            Slope::Infinite
        } else {
            Slope::Finite(Ratio::new(di, dj))
        }
    }

    /// Slope of the filling `(p, q)`, i.e. `p / q`.
    pub fn of_pq(p: i64, q: i64) -> Slope {
        Slope::from_delta(p, q)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Slope::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Slope::Infinite => f64::INFINITY,
        }
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
            (Slope::Finite(_), Slope::Infinite) => Ordering::Less,
            (Slope::Infinite, Slope::Finite(_)) => Ordering::Greater,
            (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Slope::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(Slope::Infinite);
        }
        let bad = || serde::de::Error::custom(format!("bad slope '{s}'"));
        match s.split_once('/') {
            None => Ok(Slope::Finite(Ratio::from_integer(
                s.parse().map_err(|_| bad())?,
            ))),
            Some((a, b)) => {
                let (a, b): (i64, i64) =
                    (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if b == 0 {
                    return Err(bad());
                }
                Ok(Slope::Finite(Ratio::new(a, b)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolygonKind {
    /// Single support point; no edges.
    Point,
    /// All support collinear; one edge.
    Segment,
    Polygon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: Exponent,
    pub to: Exponent,
    pub slope: Slope,
    /// Coefficients along the edge from its lexicographically smaller
    /// endpoint, one per lattice point.
    pub polynomial: UniIntPoly,
}

/// Extent `a..=b` of the support in row `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub j: i64,
    pub a: i64,
    pub b: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub kind: PolygonKind,
    /// Extreme points, counterclockwise from the lexicographically smallest.
    pub corners: Vec<Exponent>,
    /// `corners[k] -> corners[k+1]` (cyclically); a segment has one edge.
    pub edges: Vec<Edge>,
    /// Nonempty rows in increasing `j`.
    pub rows: Vec<Row>,
    /// Largest `(a_n - a_j) / (n - j)` over rows below the top; `None` with a
    /// single row.
    pub top_slope: Option<Ratio<i64>>,
}

impl NewtonPolygon {
    pub fn top_row(&self) -> Row {
        *self.rows.last().expect("polygon has rows")
    }

    /// Corners on the left chain: `(a_n, n)` first, then counterclockwise
    /// down to the leftmost point of the bottom row.
    pub fn left_chain(&self) -> Vec<Exponent> {
        let top = self.top_row();
        let bottom = self.rows[0];
        let start = (top.a, top.j);
        let end = (bottom.a, bottom.j);
        let k0 = self
            .corners
            .iter()
            .position(|&c| c == start)
            .expect("top-left point is a corner");
        let mut out = vec![start];
        if start == end {
            return out;
        }
        let n = self.corners.len();
        let mut k = k0;
        loop {
            k = (k + 1) % n;
            out.push(self.corners[k]);
            if self.corners[k] == end {
                break;
            }
        }
        out
    }

    /// Index in `edges` of the edge joining two corners, in either order.
    pub fn edge_index(&self, a: Exponent, b: Exponent) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }
}

fn cross(o: Exponent, a: Exponent, b: Exponent) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(points: &[Exponent]) -> Vec<Exponent> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Exponent> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Exponent> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Coefficients of `f` at the lattice points of the segment `a`–`b`, read
/// from the lexicographically smaller endpoint.
pub fn edge_polynomial(f: &BivarLaurentPoly, a: Exponent, b: Exponent) -> UniIntPoly {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (di, dj) = (hi.0 - lo.0, hi.1 - lo.1);
    let g = di.gcd(&dj);
    if g == 0 {
        return UniIntPoly::constant(f.coeff(lo.0, lo.1).cloned().unwrap_or_default());
    }
    let (si, sj) = (di / g, dj / g);
    let coeffs: Vec<BigInt> = (0..=g)
        .map(|k| {
            f.coeff(lo.0 + k * si, lo.1 + k * sj)
                .cloned()
                .unwrap_or_default()
        })
        .collect();
    UniIntPoly::new(coeffs)
}

fn rows_of(f: &BivarLaurentPoly) -> Vec<Row> {
    let mut rows: Vec<Row> = Vec::new();
    let mut support = f.support();
    support.sort_by_key(|&(i, j)| (j, i));
    for (i, j) in support {
        match rows.last_mut() {
            Some(r) if r.j == j => r.b = i,
            _ => rows.push(Row { j, a: i, b: i }),
        }
    }
    rows
}

/// Largest `(a_n - a_j) / (n - j)` over rows `j < n`.
pub(crate) fn top_slope_of(rows: &[Row]) -> Option<Ratio<i64>> {
    let top = rows.last()?;
    rows[..rows.len() - 1]
        .iter()
        .map(|r| Ratio::new(top.a - r.a, top.j - r.j))
        .max()
}

pub fn newton_polygon(f: &BivarLaurentPoly) -> NewtonPolygon {
    assert!(!f.is_zero(), "Newton polygon of the zero polynomial");
    let corners = convex_hull(&f.support());
    let rows = rows_of(f);
    let top_slope = top_slope_of(&rows);
    let kind = match corners.len() {
        1 => PolygonKind::Point,
        2 => PolygonKind::Segment,
        _ => PolygonKind::Polygon,
    };
    let pairs: Vec<(Exponent, Exponent)> = match kind {
        PolygonKind::Point => Vec::new(),
        PolygonKind::Segment => vec![(corners[0], corners[1])],
        PolygonKind::Polygon => (0..corners.len())
            .map(|k| (corners[k], corners[(k + 1) % corners.len()]))
            .collect(),
    };
    let edges = pairs
        .into_iter()
        .map(|(a, b)| Edge {
            from: a,
            to: b,
            slope: Slope::from_delta(b.0 - a.0, b.1 - a.1),
            polynomial: edge_polynomial(f, a, b),
        })
        .collect();
    NewtonPolygon {
        kind,
        corners,
        edges,
        rows,
        top_slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(t: &[(i64, i64, i64)]) -> BivarLaurentPoly {
        BivarLaurentPoly::from_i64_terms(t).unwrap()
    }

    #[test]
    fn segment_and_point() {
        let np = newton_polygon(&poly(&[(0, 0, -1), (2, 1, 1)]));
        assert_eq!(np.kind, PolygonKind::Segment);
        assert_eq!(np.corners, vec![(0, 0), (2, 1)]);
        assert_eq!(np.top_slope, Some(Ratio::from_integer(2)));
        assert_eq!(np.edges.len(), 1);
        let np = newton_polygon(&poly(&[(3, 1, 5)]));
        assert_eq!(np.kind, PolygonKind::Point);
        assert!(np.edges.is_empty());
        assert_eq!(np.top_slope, None);
    }

    #[test]
    fn unit_square() {
        let np = newton_polygon(&poly(&[(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]));
        assert_eq!(np.corners, vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(np.edges[0].polynomial, UniIntPoly::from_i64s(&[1, 1]));
        assert_eq!(np.left_chain(), vec![(0, 1), (0, 0)]);
    }

    #[test]
    fn collinear_points_stay_on_edge() {
        let f = poly(&[(0, 0, 1), (1, 0, 2), (2, 0, 1)]);
        let np = newton_polygon(&f);
        assert_eq!(np.corners, vec![(0, 0), (2, 0)]);
        assert_eq!(np.edges[0].polynomial, UniIntPoly::from_i64s(&[1, 2, 1]));
        assert_eq!(np.edges[0].slope, Slope::Infinite);
    }

    #[test]
    fn slope_order_and_text() {
        let a = Slope::Finite(Ratio::new(9, 2));
        assert!(a > Slope::Finite(Ratio::from_integer(4)));
        assert!(a < Slope::Infinite);
        let s: Slope = serde_json::from_str("\"-7/3\"").unwrap();
        assert_eq!(s.to_string(), "-7/3");
    }
}
