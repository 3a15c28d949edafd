//! The Lipschitz example: a regular k-gon of edge ϱ with an outward arc of
//! radius 1/H on every edge.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::arcgeom::{ArcEdge, ArcGon, Point};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KgonSpec {
    pub k: u32,
    #[serde(rename = "H")]
    pub h: f64,
    pub rho: f64,
}

/// Edges shorter than this are rejected as a degenerate polygon.
pub const MIN_RHO: f64 = 1e-9;

impl KgonSpec {
    pub fn new(k: u32, h: f64, rho: f64) -> Self {
        KgonSpec { k, h, rho }
    }

    pub fn validate(&self) -> Result<()> {
        check_k_h(self.k, self.h)?;
        if !(self.rho >= MIN_RHO && self.rho < 2.0 / self.h) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in [{MIN_RHO}, 2/H = {}), got {}",
                2.0 / self.h,
                self.rho
            )));
        }
        Ok(())
    }

    /// Angle spanned by each edge arc: `ϱ = (2/H) sin(β/2)`.
    pub fn beta(&self) -> f64 {
        2.0 * (0.5 * self.h * self.rho).asin()
    }

    /// Vertices of the underlying polygon, counter-clockwise.
    pub fn vertices(&self) -> Vec<Point> {
        let k = self.k as usize;
        let circ = self.rho / (2.0 * (PI / k as f64).sin());
        // first edge at the bottom, parallel to the x axis
        let a0 = -0.5 * PI - PI / k as f64;
        (0..k).map(|i| Point::polar(a0 + TAU * i as f64 / k as f64) * circ).collect()
    }
}

fn check_k_h(k: u32, h: f64) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be at least 3, got {k}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("H must be positive, got {h}")));
    }
    Ok(())
}

pub fn build_kgon_domain(s: &KgonSpec) -> Result<ArcGon> {
    s.validate()?;
    let v = s.vertices();
    let k = v.len();
    ArcGon::new((0..k).map(|i| ArcEdge::arc(v[i], v[(i + 1) % k], s.h)).collect())
}

/// Area of the inner parallel set at distance 1/H.
///
/// While `β > 2π/k` the eroded set is the star polygon of arc centers minus
/// the k vertex wedges, giving
/// `πH⁻² + (ϱ²k/4)(cot(π/k) − cot(β/2) − β/(2 sin²(β/2)))`; below that it is
/// empty.
pub fn inner_area_kgon(s: &KgonSpec) -> Result<f64> {
    s.validate()?;
    let k = s.k as f64;
    let beta = s.beta();
    if beta <= TAU / k {
        return Ok(0.0);
    }
    let half = 0.5 * beta;
    let bracket = 1.0 / (PI / k).tan() - 1.0 / half.tan() - beta / (2.0 * half.sin().powi(2));
    Ok(PI / (s.h * s.h) + 0.25 * s.rho * s.rho * k * bracket)
}

/// Limit of [`inner_area_kgon`] as ϱ → 2/H.
pub fn critical_inner_area(k: u32, h: f64) -> f64 {
    let k = k as f64;
    (PI + k * (1.0 / (PI / k).tan() - 0.5 * PI)) / (h * h)
}

/// Edge length ϱ₀ at which the eroded area is exactly πH⁻² (so that the
/// domain is its own Cheeger set with h = H).
pub fn solve_rho0(k: u32, h: f64, tol: f64) -> Result<f64> {
    check_k_h(k, h)?;
    let target = PI / (h * h);
    if critical_inner_area(k, h) <= target {
        let threshold = PI / (2.0 / PI).atan();
        return Err(Error::NoSolution(format!(
            "no admissible edge length for k = {k}: the construction needs k ≥ π/atan(2/π) ≈ {threshold:.3}, i.e. k ≥ 6"
        )));
    }
    let f = |rho: f64| inner_area_kgon(&KgonSpec::new(k, h, rho)).map(|a| a - target);
    let mut lo = (2.0 / h) * (PI / k as f64).sin();
    let mut hi = 2.0 / h * (1.0 - f64::EPSILON);
    if f(hi)? < 0.0 {
        return Err(Error::NumericalFailure("eroded area stays below πH⁻² up to ϱ = 2/H".into()));
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
    Err(Error::NumericalFailure(format!("ϱ₀ bisection did not reach tolerance {tol}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_with_unit_edges() {
        let s = KgonSpec::new(6, 1.0, 1.0);
        assert!((s.beta() - PI / 3.0).abs() < 1e-15);
        let g = build_kgon_domain(&s).unwrap();
        assert!((g.perimeter() - TAU).abs() < 1e-13);
        let hex = 1.5 * 3f64.sqrt();
        let seg = 6.0 * (s.beta() - s.beta().sin()) / 2.0;
        assert!((g.area() - hex - seg).abs() < 1e-13);
        assert!((g.edges()[0].start.y - g.edges()[0].end.y).abs() < 1e-15);
    }

    #[test]
    fn parameter_guards() {
        assert!(build_kgon_domain(&KgonSpec::new(6, 1.0, 2.0)).is_err());
        assert!(build_kgon_domain(&KgonSpec::new(6, 1.0, 1e-10)).is_err());
        assert!(build_kgon_domain(&KgonSpec::new(2, 1.0, 1.0)).is_err());
    }

    #[test]
    fn root_for_hexagon() {
        let r = solve_rho0(6, 1.0, 1e-13).unwrap();
        assert!((r - 1.889_932_340_991_186_3).abs() < 1e-9);
        let g = build_kgon_domain(&KgonSpec::new(6, 1.0, r)).unwrap();
        assert!((g.area() / g.perimeter() - 1.0).abs() < 1e-9);
        let r2 = solve_rho0(6, 2.0, 1e-13).unwrap();
        assert!((r2 - r / 2.0).abs() < 1e-9);
    }

    #[test]
    fn pentagon_has_no_root() {
        assert!(matches!(solve_rho0(5, 1.0, 1e-12), Err(Error::NoSolution(_))));
        assert!(critical_inner_area(5, 1.0) < PI);
        assert!(critical_inner_area(6, 1.0) > PI);
    }
}
