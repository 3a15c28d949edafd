//! Ambient domains Ω_δ ⊇ E that touch E exactly on a prescribed set.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::arcgeom::{fit_biarcs, ArcEdge, ArcGon, Point};
use crate::cmcprofile::{arc_angles, u_arc_chain};
use crate::error::{Error, Result};

use super::cantor_domain::{assemble, build_cantor_domain, corner_center, side_point, CantorDomainSpec};
use super::kgon::{build_kgon_domain, KgonSpec};

/// Smooth bump on `[0, 1]`, vanishing to all orders at both ends, peak 1 at 1/2.
pub fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (4.0 - 1.0 / (x * (1.0 - x))).exp()
    }
}

/// Derivative of [`bump`].
pub fn bump_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let q = x * (1.0 - x);
        bump(x) * (1.0 - 2.0 * x) / (q * q)
    }
}

/// Upper bound on δ from the sector geometry: `2r sin((π − β_max)/2)` over
/// boundary sectors of radius r = 1/H spanning β_max > π/2, capped by r.
pub fn sector_delta_max(h: f64, sector_angles: impl IntoIterator<Item = f64>) -> f64 {
    let r = 1.0 / h;
    sector_angles
        .into_iter()
        .filter(|&b| b > FRAC_PI_2)
        .map(|b| 2.0 * r * (0.5 * (PI - b)).sin())
        .fold(r, f64::min)
}

pub fn kgon_delta_max(s: &KgonSpec) -> f64 {
    sector_delta_max(s.h, [s.beta()])
}

fn check_delta(delta: f64, delta_max: f64) -> Result<()> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be nonnegative, got {delta}")));
    }
    if delta >= delta_max {
        return Err(Error::DeltaTooLarge { delta, delta_max });
    }
    Ok(())
}

/// Raises every edge arc of E(ϱ) by δ at its midpoint, keeping the vertices:
/// each edge becomes two arcs of a common circle through both vertices and
/// the raised apex, split at the apex so both stay minor.
pub fn perturb_kgon(s: &KgonSpec, delta: f64) -> Result<ArcGon> {
    let base = build_kgon_domain(s)?;
    check_delta(delta, kgon_delta_max(s))?;
    if delta == 0.0 {
        return Ok(base);
    }
    let r = 1.0 / s.h;
    let c = s.rho;
    let sag = r * (1.0 - (0.5 * s.beta()).cos()) + delta;
    let radius = (0.25 * c * c + sag * sag) / (2.0 * sag);
    let mut edges = Vec::with_capacity(2 * base.len());
    for e in base.edges() {
        let dir = (e.end - e.start).normalized();
        let outward = -dir.perp();
        let apex = e.start.midpoint(e.end) + outward * sag;
        edges.push(ArcEdge::arc(e.start, apex, 1.0 / radius));
        edges.push(ArcEdge::arc(apex, e.end, 1.0 / radius));
    }
    ArcGon::new(edges)
}

/// Largest δ for the Cantor construction: every profile gap arc and corner
/// quarter circle spans at most π/2 unless the central gap is wider.
pub fn cantor_delta_max(s: &CantorDomainSpec) -> Result<f64> {
    let p = u_arc_chain(&s.params)?;
    let mut angles = vec![FRAC_PI_2];
    if s.params.n > 0 {
        angles.extend(arc_angles(&p)?.angles);
    }
    Ok(sector_delta_max(s.params.h, angles))
}

/// Smallest bump height at the quarter points of a gap, used to pick a
/// contact tolerance that separates raised gaps from touching intervals.
pub fn cantor_min_quarter_bump(s: &CantorDomainSpec, delta: f64) -> f64 {
    let st = crate::cantor::cantor_stage(s.params.tau, s.params.n).expect("validated tau");
    let gaps = st.gaps();
    if gaps.is_empty() {
        return delta * bump(0.25);
    }
    let wc = gaps[gaps.len() / 2][1] - gaps[gaps.len() / 2][0];
    let wmin = gaps.iter().map(|[a, b]| b - a).fold(f64::INFINITY, f64::min);
    delta * (wmin / wc).powi(2) * bump(0.25)
}

/// Profile of the perturbed side over one gap: `f_δ = u + δ g`, with `g`
/// on the gap `(a, b)` equal to `(w/w_c)² bump((t − a)/w)` (w the gap width,
/// w_c the central one). The quadratic width factor keeps `g″` bounded
/// uniformly over all gaps, so `f_δ` is as regular as `u`. Over a gap `u` is
/// the arc of radius 1/H about `center`, evaluated from the circle itself so
/// the ends match the unperturbed arc exactly.
struct RaisedGap {
    a: f64,
    w: f64,
    amp: f64,
    center: Point,
    radius: f64,
}

impl RaisedGap {
    fn eval(&self, t: f64) -> (Point, Point) {
        let x = (t - self.a) / self.w;
        let dx = t - self.center.x;
        let root = (self.radius * self.radius - dx * dx).max(0.0).sqrt();
        let v = self.center.y + root + self.amp * bump(x);
        let dv = -dx / root + self.amp * bump_deriv(x) / self.w;
        (Point::new(t, v), Point::new(1.0, dv).normalized())
    }

    fn circle_point(&self, t: f64) -> Point {
        self.circle_eval(t).0
    }

    fn circle_eval(&self, t: f64) -> (Point, Point) {
        let dx = t - self.center.x;
        let root = (self.radius * self.radius - dx * dx).max(0.0).sqrt();
        (Point::new(t, self.center.y + root), Point::new(root, -dx).normalized())
    }
}

/// Accuracy of the fitted bump shape relative to its height; containment in
/// the unperturbed circle is enforced separately at the caller's tolerance.
const SHAPE_REL_TOL: f64 = 1e-4;

/// Fraction of a unit interval near each end where `amp·bump` stays below `floor`.
fn flat_margin(amp: f64, floor: f64) -> f64 {
    if amp <= floor {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if amp * bump(m) <= floor {
            lo = m;
        } else {
            hi = m;
        }
    }
    lo
}

/// Fits `f` on `[s0, s1]` with biarcs, pinning the exact end points.
fn fit_between<F, A>(f: &F, s0: f64, s1: f64, p0: Point, p1: Point, tol: f64, accept: &A) -> Vec<ArcEdge>
where
    F: Fn(f64) -> (Point, Point),
    A: Fn(&[ArcEdge; 2]) -> bool,
{
    let mut fit = fit_biarcs(f, s0, s1, tol, accept);
    fit.first_mut().unwrap().start = p0;
    fit.last_mut().unwrap().end = p1;
    fit
}

/// Ω_δ for the Cantor domain: stage-interval arcs are kept, the raised part
/// of each gap is a biarc fit of `f_δ` (the flat ends stay on the original
/// circle), and each corner quarter circle is pushed out radially by
/// `δ·bump`. Fitted arcs may not dip inside the original circles by more
/// than `fit_tol`; the bump shape itself is matched to a relative accuracy.
pub fn perturb_cantor(s: &CantorDomainSpec, delta: f64, fit_tol: f64) -> Result<ArcGon> {
    let base = build_cantor_domain(s)?;
    check_delta(delta, cantor_delta_max(s)?)?;
    if delta == 0.0 {
        return Ok(base);
    }
    let profile = u_arc_chain(&s.params)?;
    let ell = s.params.ell;
    let d = s.corner_radius;
    let knots = profile.knots();
    let gaps_t: Vec<(f64, f64)> = (1..knots.len() - 1).step_by(2).map(|i| (knots[i], knots[i + 1])).collect();
    let wc = gaps_t.get(gaps_t.len() / 2).map_or(1.0, |(a, b)| b - a);
    let floor = 1e-3 * fit_tol;
    let mut chain = Vec::with_capacity(profile.arc_chain.len() * 4);
    for (i, e) in profile.arc_chain.iter().enumerate() {
        if i % 2 == 0 {
            chain.push(*e);
            continue;
        }
        let (a, b) = (e.start.x, e.end.x);
        let w = b - a;
        let gap = RaisedGap { a, w, amp: delta * (w / wc).powi(2), center: e.center().expect("gap pieces are arcs"), radius: 1.0 / e.curvature.abs() };
        let m = flat_margin(gap.amp, floor);
        if m >= 0.5 {
            chain.push(*e);
            continue;
        }
        let (t1, t2) = (a + m * w, b - m * w);
        let (q1, q2) = (gap.circle_point(t1), gap.circle_point(t2));
        let flat = m * w > 1e-9 * w;
        if flat {
            chain.push(ArcEdge::arc(e.start, q1, e.curvature));
        }
        let (s0, s1) = if flat { (t1, t2) } else { (a, b) };
        // the ends coincide with the circle pieces, tangents included
        let f = |t: f64| if t == s0 || t == s1 { gap.circle_eval(t) } else { gap.eval(t) };
        let accept = |pair: &[ArcEdge; 2]| pair.iter().all(|q| q.distance(gap.center) >= gap.radius - fit_tol);
        let (p0, p1) = if flat { (q1, q2) } else { (e.start, e.end) };
        let shape_tol = fit_tol.max(SHAPE_REL_TOL * gap.amp);
        chain.extend(fit_between(&f, s0, s1, p0, p1, shape_tol, &accept));
        if flat {
            chain.push(ArcEdge::arc(q2, e.end, e.curvature));
        }
    }
    let corner = |side: usize| {
        let cc = corner_center(side, ell);
        let p0 = side_point(side, ell, d, 0.0, 0.0);
        let p1 = side_point((side + 1) % 4, ell, d, ell, 0.0);
        let th0 = (p0 - cc).angle();
        let g = |th: f64| {
            let x = (th - th0) / FRAC_PI_2;
            let rr = d + delta * bump(x);
            let dr = delta * bump_deriv(x) / FRAC_PI_2;
            let u = Point::polar(th);
            (cc + u * rr, (u * dr + u.perp() * rr).normalized())
        };
        let accept = |pair: &[ArcEdge; 2]| pair.iter().all(|q| q.distance(cc) >= d - fit_tol);
        fit_between(&g, th0, th0 + FRAC_PI_2, p0, p1, fit_tol.max(SHAPE_REL_TOL * delta), &accept)
    };
    ArcGon::new(assemble(&chain, ell, d, corner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcgeom::contains_disc;
    use crate::cantor::StaircaseParams;

    #[test]
    fn bump_shape() {
        assert_eq!(bump(0.5), 1.0);
        assert_eq!(bump(0.0), 0.0);
        let h = 1e-6;
        let fd = (bump(0.3 + h) - bump(0.3 - h)) / (2.0 * h);
        assert!((fd - bump_deriv(0.3)).abs() < 1e-6);
    }

    #[test]
    fn kgon_perturbation_contains_base() {
        let s = KgonSpec::new(6, 1.0, 1.889_932_340_991_186_3);
        let dm = kgon_delta_max(&s);
        assert!((dm - 0.654).abs() < 1e-3);
        let om = perturb_kgon(&s, 0.5 * dm).unwrap();
        om.check_simple().unwrap();
        let base = build_kgon_domain(&s).unwrap();
        assert!(om.area() > base.area());
        for e in base.edges() {
            assert!(om.contains_point(e.point_at(0.5)));
        }
        assert!(matches!(perturb_kgon(&s, dm), Err(Error::DeltaTooLarge { .. })));
        assert_eq!(perturb_kgon(&s, 0.0).unwrap(), base);
    }

    #[test]
    fn cantor_perturbation_is_c1_and_contains_base() {
        let s = CantorDomainSpec::new(StaircaseParams::new(1.0, 1.6, 1.0 / 3.0, 3));
        let dm = cantor_delta_max(&s).unwrap();
        assert_eq!(dm, 1.0);
        let om = perturb_cantor(&s, 0.5, 1e-12).unwrap();
        om.check_simple().unwrap();
        assert!(om.max_tangent_jump() < 1e-6);
        let base = build_cantor_domain(&s).unwrap();
        for e in base.edges() {
            let p = e.point_at(0.5);
            assert!(om.contains_point(p) || om.boundary_distance(p) < 1e-12);
        }
        assert!(contains_disc(&om, Point::new(0.8, 0.8), 1.0));
    }
}
