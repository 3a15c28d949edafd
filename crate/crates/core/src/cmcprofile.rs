//! The constant-mean-curvature staircase profile
//! `u(t) = ∫₀ᵗ φ/√(1−φ²)`, `φ(r) = s(r) − H r`, as an exact arc chain and as
//! a quadrature evaluator, with tangent-ball and arc-angle certificates.
//!
//! At a finite stage the flux φ is piecewise linear, so the graph of `u` is
//! piecewise circular: a piece where φ has slope `m` is an arc of signed
//! curvature `m` (graph traversed left to right). Gaps have `m = −H`; stage
//! intervals have `m = H((1−τ)^{−n} − 1)`.

use serde::{Deserialize, Serialize};

use crate::arcgeom::{ArcEdge, Point, STRAIGHT_EPS};
use crate::cantor::{alpha, Staircase, StaircaseParams};
use crate::error::{Error, Result};

/// How strictly `Hℓ` is bounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Admissibility {
    /// The standing assumption `Hℓ < 2`.
    #[default]
    Strict,
    /// Override: accept any parameters whose stage-`n` flux stays in (−1, 1).
    StageExact,
}

fn check(p: &StaircaseParams, adm: Admissibility) -> Result<Staircase> {
    match adm {
        Admissibility::Strict => p.check()?,
        Admissibility::StageExact => p.check_basic()?,
    }
    let s = Staircase::new(*p)?;
    if adm == Admissibility::StageExact {
        let worst = s.breakpoints().iter().map(|&t| s.flux(t).abs()).fold(0.0, f64::max);
        if worst >= 1.0 {
            return Err(Error::InvalidParameter(format!("flux reaches {worst} ≥ 1; profile undefined")));
        }
    }
    Ok(s)
}

#[inline]
fn increment(a: f64, b: f64, fa: f64, fb: f64) -> f64 {
    // ∫_a^b φ/√(1−φ²) for linear φ, written without dividing by the slope
    (b - a) * (fa + fb) / ((1.0 - fa * fa).sqrt() + (1.0 - fb * fb).sqrt())
}

/// Exact stage-`n` profile: breakpoints, values and the graph as arcs.
#[derive(Clone, Debug)]
pub struct Profile {
    pub params: StaircaseParams,
    stair: Staircase,
    knots: Vec<f64>,
    values: Vec<f64>,
    pub arc_chain: Vec<ArcEdge>,
}

/// The graph of `u` as an open edge chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenChain {
    pub edges: Vec<ArcEdge>,
    pub closed: bool,
}

pub fn u_arc_chain(p: &StaircaseParams) -> Result<Profile> {
    u_arc_chain_with(p, Admissibility::Strict)
}

pub fn u_arc_chain_with(p: &StaircaseParams, adm: Admissibility) -> Result<Profile> {
    let stair = check(p, adm)?;
    let knots = stair.breakpoints();
    let phis: Vec<f64> = knots.iter().map(|&t| stair.flux(t)).collect();
    let mut values = vec![0.0; knots.len()];
    for i in 1..knots.len() {
        values[i] = values[i - 1] + increment(knots[i - 1], knots[i], phis[i - 1], phis[i]);
    }
    // u(ℓ) = 0 by symmetry; remove the round-off residue
    let n_last = values.len() - 1;
    values[n_last] = 0.0;
    let stage_slope = p.h * ((1.0 - p.tau).powi(-(p.n as i32)) - 1.0);
    let mut arc_chain = Vec::with_capacity(knots.len() - 1);
    for i in 0..knots.len() - 1 {
        let a = Point::new(knots[i], values[i]);
        let b = Point::new(knots[i + 1], values[i + 1]);
        // exact slopes of the flux: −H on gaps, H((1−τ)^{−n} − 1) on stage intervals
        let m = if p.n == 0 {
            0.0
        } else if i % 2 == 1 {
            -p.h
        } else {
            stage_slope
        };
        let mut e = ArcEdge::arc(a, b, m);
        if m.abs() * a.dist(b) < STRAIGHT_EPS {
            e.curvature = 0.0;
        }
        arc_chain.push(e);
    }
    Ok(Profile { params: *p, stair, knots, values, arc_chain })
}

impl Profile {
    pub fn staircase(&self) -> &Staircase {
        &self.stair
    }

    /// Breakpoints of the chain (stage-interval endpoints, scaled by ℓ).
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// `u` at the knots.
    pub fn knot_values(&self) -> &[f64] {
        &self.values
    }

    fn piece(&self, t: f64) -> usize {
        self.knots.partition_point(|&k| k <= t).saturating_sub(1).min(self.knots.len() - 2)
    }

    /// Exact `u(t)` from the closed-form arc increments.
    pub fn u(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.params.ell);
        let i = self.piece(t);
        let a = self.knots[i];
        self.values[i] + increment(a, t, self.stair.flux(a), self.stair.flux(t))
    }

    /// `u′(t) = φ/√(1−φ²)`.
    pub fn du(&self, t: f64) -> f64 {
        let f = self.stair.flux(t);
        f / (1.0 - f * f).sqrt()
    }

    /// Flux read back from the geometry of the arc chain: for a graph arc of
    /// curvature `m` about center `c`, `sin θ = m·(t − c_x)`.
    pub fn chain_flux(&self, t: f64) -> f64 {
        let e = &self.arc_chain[self.piece(t)];
        match e.center() {
            None => {
                let d = e.end - e.start;
                d.y / d.norm()
            }
            Some(c) => e.curvature * (t - c.x),
        }
    }

    /// `u(t)` read back from the arc chain geometry.
    pub fn chain_value(&self, t: f64) -> f64 {
        let e = &self.arc_chain[self.piece(t)];
        match e.center() {
            None => e.start.y + (t - e.start.x) * (e.end.y - e.start.y) / (e.end.x - e.start.x),
            Some(c) => {
                let r = 1.0 / e.curvature.abs();
                let h = (r * r - (t - c.x) * (t - c.x)).max(0.0).sqrt();
                // a left-turning (convex) graph arc lies below its center
                if e.curvature > 0.0 {
                    c.y - h
                } else {
                    c.y + h
                }
            }
        }
    }

    pub fn to_chain(&self) -> OpenChain {
        OpenChain { edges: self.arc_chain.clone(), closed: false }
    }

    /// Graph arcs lying over gaps, left to right.
    pub fn gap_arcs(&self) -> Vec<ArcEdge> {
        self.arc_chain.iter().skip(1).step_by(2).copied().collect()
    }
}

/// Cached quadrature evaluator, split at every breakpoint.
pub struct QuadratureProfile {
    stair: Staircase,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    tol: f64,
}

impl QuadratureProfile {
    pub fn new(p: &StaircaseParams, tol: f64) -> Result<Self> {
        Self::with(p, tol, Admissibility::Strict)
    }

    pub fn with(p: &StaircaseParams, tol: f64, adm: Admissibility) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("quadrature tolerance must be positive, got {tol}")));
        }
        let stair = check(p, adm)?;
        let knots = stair.breakpoints();
        let per = tol / knots.len() as f64;
        let mut cumulative = vec![0.0; knots.len()];
        for i in 1..knots.len() {
            cumulative[i] = cumulative[i - 1] + integrate_piece(&stair, knots[i - 1], knots[i], per);
        }
        Ok(QuadratureProfile { stair, knots, cumulative, tol: per })
    }

    pub fn u(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.stair.params.ell);
        let i = self.knots.partition_point(|&k| k <= t).saturating_sub(1).min(self.knots.len() - 2);
        self.cumulative[i] + integrate_piece(&self.stair, self.knots[i], t, self.tol)
    }
}

fn integrate_piece(stair: &Staircase, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // φ is linear on [a,b]; evaluate it from the endpoint values so the
    // integrand is smooth even where the staircase lookup would switch pieces
    let fa = stair.flux(a);
    let fb = stair.flux(b);
    let f = |t: f64| {
        let phi = fa + (fb - fa) * (t - a) / (b - a);
        phi / (1.0 - phi * phi).sqrt()
    };
    quadrature::double_exponential::integrate(f, a, b, tol).integral
}

/// `u(t)` by adaptive quadrature (independent of the closed-form arc chain).
pub fn u_quadrature(p: &StaircaseParams, t: f64, tol: f64) -> Result<f64> {
    if !(0.0..=p.ell).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, {}]", p.ell)));
    }
    Ok(QuadratureProfile::new(p, tol)?.u(t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentBallCertificate {
    pub t: f64,
    pub center: Point,
    pub radius: f64,
    pub contained: bool,
    pub clearance: f64,
}

/// Default number of abscissae in the containment test.
pub const CONTAINMENT_GRID: usize = 1 << 12;
/// Containment tolerance on the clearance.
pub const CONTAINMENT_TOL: f64 = 1e-9;

pub fn tangent_ball(profile: &Profile, t: f64) -> TangentBallCertificate {
    tangent_ball_with(profile, t, CONTAINMENT_GRID, CONTAINMENT_TOL)
}

/// Ball of radius `1/H` below the graph, tangent at `(t, u(t))`; the
/// clearance is `min_r u(r) − top_of_ball(r)` over a grid of abscissae.
pub fn tangent_ball_with(profile: &Profile, t: f64, grid: usize, tol: f64) -> TangentBallCertificate {
    let p = &profile.params;
    let h = p.h;
    let s_t = profile.stair.eval(t);
    let phi = s_t - h * t;
    let u_t = profile.u(t);
    let center = Point::new(s_t / h, u_t - (1.0 - phi * phi).sqrt() / h);
    let lo = ((s_t - 1.0) / h).max(0.0);
    let hi = ((s_t + 1.0) / h).min(p.ell);
    let mut clearance = f64::INFINITY;
    let grid = grid.max(2);
    for k in 0..grid {
        // open interval (lo, hi): midpoints of a uniform partition
        let r = lo + (hi - lo) * (k as f64 + 0.5) / grid as f64;
        let w = s_t - h * r;
        let top = u_t - (1.0 - phi * phi).sqrt() / h + (1.0 - w * w).max(0.0).sqrt() / h;
        clearance = clearance.min(profile.u(r) - top);
    }
    TangentBallCertificate { t, center, radius: 1.0 / h, contained: clearance >= -tol, clearance }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    /// angle spanned by each gap arc, left to right
    pub angles: Vec<f64>,
    /// the same angles recomputed from chord lengths, `2 asin(H c / 2)`
    pub chord_angles: Vec<f64>,
    pub central_angle: f64,
    pub max_noncentral: f64,
}

pub fn arc_angles(profile: &Profile) -> Result<AngleReport> {
    let p = &profile.params;
    if p.n == 0 {
        return Err(Error::InvalidParameter("arc angles need a stage n ≥ 1".into()));
    }
    let gaps = profile.stair.stage.gaps();
    let mut angles = Vec::with_capacity(gaps.len());
    let mut chord_angles = Vec::with_capacity(gaps.len());
    for [a, b] in &gaps {
        let (ta, tb) = (a * p.ell, b * p.ell);
        let fa = profile.stair.flux(ta);
        let fb = profile.stair.flux(tb);
        angles.push(fa.asin() - fb.asin());
        let c = Point::new(ta, profile.u(ta)).dist(Point::new(tb, profile.u(tb)));
        chord_angles.push(2.0 * (0.5 * p.h * c).min(1.0).asin());
    }
    let mid = gaps.len() / 2;
    let central_angle = angles[mid];
    let max_noncentral =
        angles.iter().enumerate().filter(|(i, _)| *i != mid).map(|(_, a)| *a).fold(0.0, f64::max);
    Ok(AngleReport { angles, chord_angles, central_angle, max_noncentral })
}

/// Hölder quotient `|u′(a) − u′(b)| / |a − b|^e`, maximized over the stage-`j`
/// intervals `[a, b]`, for `j = 1..=n`. Bounded in `j` for `e ≤ α(τ)`,
/// growing for larger exponents.
pub fn holder_probe(profile: &Profile, exponent: f64) -> Vec<f64> {
    let p = &profile.params;
    (1..=p.n)
        .map(|j| {
            let st = crate::cantor::cantor_stage(p.tau, j).expect("validated tau");
            st.intervals
                .iter()
                .map(|[a, b]| {
                    let (ta, tb) = (a * p.ell, b * p.ell);
                    (profile.du(ta) - profile.du(tb)).abs() / (tb - ta).powf(exponent)
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Exponent at which [`holder_probe`] is expected to stay bounded.
pub fn holder_exponent(p: &StaircaseParams) -> Result<f64> {
    alpha(p.tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> StaircaseParams {
        StaircaseParams::new(1.0, 1.5, 1.0 / 3.0, 4)
    }

    #[test]
    fn flat_profile_at_stage_zero() {
        let p = StaircaseParams::new(1.0, 1.5, 0.3, 0);
        let pr = u_arc_chain(&p).unwrap();
        assert_eq!(pr.arc_chain.len(), 1);
        assert_eq!(pr.arc_chain[0].curvature, 0.0);
        assert_eq!(pr.u(0.7), 0.0);
    }

    #[test]
    fn chain_shape_and_curvatures() {
        let p = params();
        let pr = u_arc_chain(&p).unwrap();
        assert_eq!(pr.arc_chain.len(), 2 * 16 - 1);
        for g in pr.gap_arcs() {
            assert!((g.curvature + 1.0).abs() < 1e-12);
        }
        let m = 1.5f64.powi(4) - 1.0;
        assert!((pr.arc_chain[0].curvature - m).abs() < 1e-9);
        for w in pr.arc_chain.windows(2) {
            assert_eq!(w[0].end, w[1].start);
            assert!((w[0].tangent_at(1.0) - w[1].tangent_at(0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn endpoint_and_symmetry() {
        let p = params();
        let pr = u_arc_chain(&p).unwrap();
        assert_eq!(pr.u(0.0), 0.0);
        assert!(pr.u(1.5).abs() < 1e-15);
        for k in 1..50 {
            let d = 0.75 * k as f64 / 50.0;
            assert!((pr.u(0.75 - d) - pr.u(0.75 + d)).abs() < 1e-13);
            assert!(pr.u(0.75 - d) > 0.0);
        }
    }

    #[test]
    fn quadrature_agrees_with_chain() {
        let p = params();
        let pr = u_arc_chain(&p).unwrap();
        let q = QuadratureProfile::new(&p, 1e-13).unwrap();
        for k in 0..=200 {
            let t = 1.5 * k as f64 / 200.0;
            assert!((q.u(t) - pr.u(t)).abs() < 1e-10, "t={t}");
        }
        assert!(u_quadrature(&StaircaseParams::new(1.0, 2.0, 0.3, 2), 0.5, 1e-9).is_err());
    }

    #[test]
    fn center_of_ball_at_midpoint_and_ends() {
        let p = params();
        let pr = u_arc_chain(&p).unwrap();
        let c = tangent_ball(&pr, 0.75);
        assert!((c.center.x - 0.75).abs() < 1e-14);
        assert!((c.center.y - (pr.u(0.75) - 1.0)).abs() < 1e-14);
        assert!(c.contained);
        let c0 = tangent_ball(&pr, 1e-9);
        assert!(c0.center.dist(Point::new(0.0, -1.0)) < 1e-6);
    }

    #[test]
    fn central_angle_identity() {
        let p = StaircaseParams::new(1.0, 1.5, 1.0 / 3.0, 3);
        let rep = arc_angles(&u_arc_chain(&p).unwrap()).unwrap();
        assert!((2.0 * (rep.central_angle / 2.0).sin() - 0.5).abs() < 1e-12);
        assert!((rep.central_angle - 0.505_360_510_284_157).abs() < 1e-12);
        assert!(rep.max_noncentral <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn wide_override() {
        let p = StaircaseParams::new(5.5, 1.0, 1.0 / 3.0, 3);
        assert!(u_arc_chain(&p).is_err());
        assert!(u_arc_chain_with(&p, Admissibility::StageExact).is_ok());
        let bad = StaircaseParams::new(9.0, 1.0, 1.0 / 3.0, 3);
        assert!(u_arc_chain_with(&bad, Admissibility::StageExact).is_err());
    }
}
