//! Newton polygons of coefficient lists `(j, v(c_j))`.

use log::warn;
use num_integer::Integer;
use serde::Serialize;

use super::Valuation;
use crate::error::{Error, Result};

/// A hull edge with exact slope `slope_num / slope_den` (reduced, positive
/// denominator) spanning `length` indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub slope_num: i64,
    pub slope_den: i64,
    pub length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
    /// Indices whose coefficient was zero to precision or exactly zero.
    pub skipped: Vec<usize>,
}

/// Lower convex hull of the points with known finite valuation. Slopes come
/// out nondecreasing.
pub fn newton_polygon(vals: &[(usize, Valuation)]) -> Result<NewtonPolygon> {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let mut skipped = Vec::new();
    for &(j, v) in vals {
        match v {
            Valuation::Finite(v) => pts.push((j as i64, v)),
            Valuation::AtLeast(b) => {
                warn!("coefficient {j} vanishes to O(θ^-{b}); skipped in Newton polygon");
                skipped.push(j);
            }
            Valuation::Infinite => skipped.push(j),
        }
    }
    if pts.is_empty() {
        return Err(Error::Hypothesis("all coefficients vanish".into()));
    }
    pts.sort();
    if pts[0].0 != 0 {
        return Err(Error::Hypothesis("the constant coefficient vanishes".into()));
    }
    // monotone chain, keeping only strict left turns from below
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128 - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments: Vec<Segment> = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let g = dy.gcd(&dx);
        let (num, den) = (dy / g, dx / g);
        match segments.last_mut() {
            Some(s) if s.slope_num == num && s.slope_den == den => s.length += dx as u64,
            _ => segments.push(Segment { slope_num: num, slope_den: den, length: dx as u64 }),
        }
    }
    Ok(NewtonPolygon { segments, skipped })
}
