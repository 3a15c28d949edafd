//! Tangent-continuous two-arc interpolation and adaptive curve fitting.

use super::point::Point;
use super::ArcEdge;

/// Biarc from `a` (unit tangent `ta`) to `b` (unit tangent `tb`) with equal
/// control distances. Returns `None` if the configuration is degenerate.
pub fn biarc(a: Point, ta: Point, b: Point, tb: Point) -> Option<[ArcEdge; 2]> {
    let v = b - a;
    let vv = v.norm_sq();
    if vv == 0.0 {
        return None;
    }
    let t = ta + tb;
    let vt = v.dot(t);
    let tt = t.norm_sq();
    let den = tt - 4.0;
    let d = if den.abs() < 1e-12 {
        if vt <= 0.0 {
            return None;
        }
        vv / (2.0 * vt)
    } else {
        let disc = vt * vt - den * vv;
        (vt - disc.max(0.0).sqrt()) / den
    };
    if !(d > 0.0 && d.is_finite()) {
        return None;
    }
    let m = ((a + ta * d) + (b - tb * d)) * 0.5;
    let c1 = m - a;
    let c2 = b - m;
    if c1.norm_sq() == 0.0 || c2.norm_sq() == 0.0 {
        return None;
    }
    let k1 = 2.0 * ta.cross(c1) / c1.norm_sq();
    let k2 = 2.0 * c2.cross(tb) / c2.norm_sq();
    // both pieces must be minor arcs: tangent within a right angle of the chord
    if ta.dot(c1) <= 0.0 || c2.dot(tb) <= 0.0 {
        return None;
    }
    Some([ArcEdge::arc(a, m, k1), ArcEdge::arc(m, b, k2)])
}

/// Approximates the curve `s ↦ f(s) = (point, unit tangent)` on `[s0, s1]`
/// by biarcs, bisecting the parameter range until every probe point is
/// within `tol` of the fitted arcs and `accept` approves the piece.
pub fn fit_biarcs<F, A>(f: &F, s0: f64, s1: f64, tol: f64, accept: &A) -> Vec<ArcEdge>
where
    F: Fn(f64) -> (Point, Point),
    A: Fn(&[ArcEdge; 2]) -> bool,
{
    let mut out = Vec::new();
    fit_rec(f, s0, s1, tol, accept, 0, &mut out);
    out
}

fn fit_rec<F, A>(f: &F, s0: f64, s1: f64, tol: f64, accept: &A, depth: u32, out: &mut Vec<ArcEdge>)
where
    F: Fn(f64) -> (Point, Point),
    A: Fn(&[ArcEdge; 2]) -> bool,
{
    let (a, ta) = f(s0);
    let (b, tb) = f(s1);
    if let Some(pair) = biarc(a, ta, b, tb) {
        let ok = depth >= 40
            || ((1..8).all(|k| {
                let s = s0 + (s1 - s0) * k as f64 / 8.0;
                let p = f(s).0;
                pair[0].distance(p).min(pair[1].distance(p)) <= tol
            }) && accept(&pair));
        if ok {
            out.extend(pair);
            return;
        }
    } else if depth >= 40 {
        out.push(ArcEdge::segment(a, b));
        return;
    }
    let sm = 0.5 * (s0 + s1);
    fit_rec(f, s0, sm, tol, accept, depth + 1, out);
    fit_rec(f, sm, s1, tol, accept, depth + 1, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn biarc_reproduces_a_circle() {
        let a = Point::new(1.0, 0.0);
        let b = Point::new(0.0, 1.0);
        let [e1, e2] = biarc(a, Point::new(0.0, 1.0), b, Point::new(-1.0, 0.0)).unwrap();
        assert!((e1.curvature - 1.0).abs() < 1e-12);
        assert!((e2.curvature - 1.0).abs() < 1e-12);
        assert!((e1.end.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn biarc_is_tangent_continuous() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.3);
        let ta = Point::polar(0.4);
        let tb = Point::polar(-0.2);
        let [e1, e2] = biarc(a, ta, b, tb).unwrap();
        assert!((e1.tangent_at(0.0) - ta).norm() < 1e-12);
        assert!((e1.tangent_at(1.0) - e2.tangent_at(0.0)).norm() < 1e-12);
        assert!((e2.tangent_at(1.0) - tb).norm() < 1e-12);
    }

    #[test]
    fn fit_sine_curve() {
        let f = |s: f64| {
            let p = Point::new(s, 0.2 * (PI * s).sin());
            let t = Point::new(1.0, 0.2 * PI * (PI * s).cos()).normalized();
            (p, t)
        };
        let arcs = fit_biarcs(&f, 0.0, 1.0, 1e-6, &|_| true);
        assert!(arcs.len() >= 2);
        for w in arcs.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
        for k in 0..=100 {
            let p = f(k as f64 / 100.0).0;
            let d = arcs.iter().map(|e| e.distance(p)).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-6);
        }
    }
}
