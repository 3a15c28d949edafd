//! The C^{1,α} example: four copies of the staircase profile around a square
//! of side ℓ, joined by quarter circles of radius 1/H.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arcgeom::{inner_parallel, ArcEdge, ArcGon, Point};
use crate::cantor::StaircaseParams;
use crate::cmcprofile::u_arc_chain;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorDomainSpec {
    pub params: StaircaseParams,
    pub corner_radius: f64,
}

impl CantorDomainSpec {
    pub fn new(params: StaircaseParams) -> Self {
        CantorDomainSpec { params, corner_radius: 1.0 / params.h }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.check()?;
        if (self.corner_radius * self.params.h - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "corner radius must be 1/H = {}, got {}",
                1.0 / self.params.h,
                self.corner_radius
            )));
        }
        Ok(())
    }
}

/// Maps a point `(t, v)` of the profile frame (t along the side, v the
/// outward height above the offset square) onto side `side` (0 = top,
/// 1 = left, 2 = bottom, 3 = right). Each side is the previous one rotated
/// by a quarter turn about the square's center.
pub(crate) fn side_point(side: usize, ell: f64, d: f64, t: f64, v: f64) -> Point {
    let w = d + v;
    match side {
        0 => Point::new(t, ell + w),
        1 => Point::new(-w, t),
        2 => Point::new(ell - t, -w),
        _ => Point::new(ell + w, ell - t),
    }
}

/// Corner of the square at which side `side` ends, and the quarter arc from
/// the end of that side to the start of the next.
pub(crate) fn corner_arc(side: usize, ell: f64, d: f64) -> ArcEdge {
    let a = side_point(side, ell, d, 0.0, 0.0);
    let b = side_point((side + 1) % 4, ell, d, ell, 0.0);
    ArcEdge::arc(a, b, 1.0 / d)
}

pub(crate) fn corner_center(side: usize, ell: f64) -> Point {
    side_point(side, ell, 0.0, 0.0, 0.0)
}

/// Assembles a closed boundary from a graph chain `(t, v)` over `[0, ℓ]`
/// (left to right) and a corner chain builder. Sides are traversed with `t`
/// decreasing so the boundary is counter-clockwise.
pub(crate) fn assemble(
    chain: &[ArcEdge],
    ell: f64,
    d: f64,
    corner: impl Fn(usize) -> Vec<ArcEdge>,
) -> Vec<ArcEdge> {
    let mut edges = Vec::with_capacity(4 * chain.len() + 8);
    for side in 0..4 {
        for e in chain.iter().rev() {
            let s = side_point(side, ell, d, e.end.x, e.end.y);
            let f = side_point(side, ell, d, e.start.x, e.start.y);
            edges.push(ArcEdge::arc(s, f, -e.curvature));
        }
        edges.extend(corner(side));
    }
    edges
}

pub fn build_cantor_domain(s: &CantorDomainSpec) -> Result<ArcGon> {
    s.validate()?;
    let profile = u_arc_chain(&s.params)?;
    let ell = s.params.ell;
    let d = s.corner_radius;
    ArcGon::new(assemble(&profile.arc_chain, ell, d, |side| vec![corner_arc(side, ell, d)]))
}

/// Area of the inner parallel set at distance 1/H of the domain with side ℓ.
pub fn cantor_inner_area(tau: f64, n: u32, h: f64, ell: f64) -> Result<f64> {
    let spec = CantorDomainSpec::new(StaircaseParams::new(h, ell, tau, n));
    let g = build_cantor_domain(&spec)?;
    Ok(inner_parallel(&g, 1.0 / h)?.area())
}

/// Side ℓ₀ at which the eroded area is exactly πH⁻², found by bisection on
/// `[1/(H√2), √π/H]` with a residual tolerance on the area.
pub fn solve_ell0(tau: f64, n: u32, h: f64, tol: f64) -> Result<f64> {
    StaircaseParams::new(h, 1.0 / h, tau, n).check()?;
    let target = PI / (h * h);
    let f = |ell: f64| cantor_inner_area(tau, n, h, ell).map(|a| a - target);
    let mut lo = 1.0 / (h * 2f64.sqrt());
    let mut hi = PI.sqrt() / h;
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo.abs() <= tol {
        return Ok(lo);
    }
    if fhi.abs() <= tol {
        return Ok(hi);
    }
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::NumericalFailure(format!(
            "no sign change of the area residual on [{lo}, {hi}]: f(lo) = {flo:.3e}, f(hi) = {fhi:.3e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() <= tol || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NumericalFailure(format!("ℓ₀ bisection did not reach tolerance {tol}")))
}
