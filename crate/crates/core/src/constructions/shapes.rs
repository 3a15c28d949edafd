//! Reference shapes used by tests and examples.

use std::f64::consts::PI;

use crate::arcgeom::{ArcEdge, ArcGon, Point};
use crate::error::{Error, Result};

/// Counter-clockwise arc of the circle `(c, r)` from angle `a0` to `a1`
/// (`a1 > a0`), split into pieces of at most a quarter turn.
pub fn circle_arc(c: Point, r: f64, a0: f64, a1: f64) -> Vec<ArcEdge> {
    let pieces = ((a1 - a0) / (0.5 * PI)).ceil().max(1.0) as usize;
    (0..pieces)
        .map(|i| {
            let s = a0 + (a1 - a0) * i as f64 / pieces as f64;
            let e = a0 + (a1 - a0) * (i + 1) as f64 / pieces as f64;
            ArcEdge::arc(c + Point::polar(s) * r, c + Point::polar(e) * r, 1.0 / r)
        })
        .collect()
}

/// Two discs of radius `r` centered at `(±sep/2, 0)` joined by the bridge
/// `|y| ≤ half_width`.
pub fn dumbbell(r: f64, sep: f64, half_width: f64) -> Result<ArcGon> {
    if !(r > 0.0 && half_width > 0.0 && half_width < r && sep > 2.0 * (r * r - half_width * half_width).sqrt()) {
        return Err(Error::InvalidParameter("dumbbell needs 0 < half_width < r and disjoint-enough discs".into()));
    }
    let phi = (half_width / r).asin();
    let cx = 0.5 * sep;
    let foot = cx - r * phi.cos();
    let mut edges = vec![ArcEdge::segment(Point::new(-foot, -half_width), Point::new(foot, -half_width))];
    edges.extend(circle_arc(Point::new(cx, 0.0), r, -PI + phi, PI - phi));
    edges.push(ArcEdge::segment(Point::new(foot, half_width), Point::new(-foot, half_width)));
    edges.extend(circle_arc(Point::new(-cx, 0.0), r, phi, 2.0 * PI - phi));
    ArcGon::new(edges)
}

/// The standard neck example: unit discs at `(±2, 0)` and a bridge of half-width 0.1.
pub fn standard_dumbbell() -> ArcGon {
    dumbbell(1.0, 4.0, 0.1).expect("valid parameters")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dumbbell_area() {
        let g = standard_dumbbell();
        g.check_simple().unwrap();
        let phi = 0.1f64.asin();
        // each disc minus the small segment cut off by the bridge opening
        let cap = phi - phi.sin() * phi.cos();
        let bridge = 2.0 * (2.0 - phi.cos()) * 0.2;
        let want = 2.0 * (PI - cap) + bridge;
        assert!((g.area() - want).abs() < 1e-12);
    }
}
