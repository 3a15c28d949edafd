//! Center-explicit curve primitives used internally by the offset engine and
//! the distance queries. Public types store arcs as endpoints + curvature;
//! these carry the derived center so intersections are well conditioned.

use std::f64::consts::{PI, TAU};

use super::point::{BBox, Point};
use super::ArcEdge;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Prim {
    Seg { a: Point, b: Point },
    /// Arc of radius `r` about `c`, starting at angle `a0` and sweeping `sw`
    /// (positive = counter-clockwise). `p0`/`p1` are the exact endpoints.
    Arc { c: Point, r: f64, a0: f64, sw: f64, p0: Point, p1: Point },
}

#[inline]
fn wrap_pos(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

impl Prim {
    pub fn from_edge(e: &ArcEdge) -> Prim {
        if e.curvature == 0.0 {
            return Prim::Seg { a: e.start, b: e.end };
        }
        let k = e.curvature;
        let r = 1.0 / k.abs();
        let chord = e.end - e.start;
        let c_len = chord.norm();
        let half = 0.5 * c_len;
        let h = (r * r - half * half).max(0.0).sqrt();
        let c = e.start.midpoint(e.end) + chord.perp() * (k.signum() * h / c_len);
        let beta = 2.0 * (half / r).min(1.0).asin();
        Prim::Arc { c, r, a0: (e.start - c).angle(), sw: k.signum() * beta, p0: e.start, p1: e.end }
    }

    pub fn arc(c: Point, r: f64, a0: f64, sw: f64) -> Prim {
        Prim::Arc {
            c,
            r,
            a0,
            sw,
            p0: c + Point::polar(a0) * r,
            p1: c + Point::polar(a0 + sw) * r,
        }
    }

    /// Arc through two known points on the circle, keeping them exact.
    pub fn arc_between(c: Point, r: f64, p0: Point, p1: Point, sw: f64) -> Prim {
        Prim::Arc { c, r, a0: (p0 - c).angle(), sw, p0, p1 }
    }

    pub fn to_edge(&self) -> ArcEdge {
        match *self {
            Prim::Seg { a, b } => ArcEdge { start: a, end: b, curvature: 0.0 },
            Prim::Arc { r, sw, p0, p1, .. } => ArcEdge { start: p0, end: p1, curvature: sw.signum() / r },
        }
    }

    #[inline]
    pub fn start(&self) -> Point {
        match *self {
            Prim::Seg { a, .. } => a,
            Prim::Arc { p0, .. } => p0,
        }
    }

    #[inline]
    pub fn end(&self) -> Point {
        match *self {
            Prim::Seg { b, .. } => b,
            Prim::Arc { p1, .. } => p1,
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Prim::Seg { a, b } => a.dist(b),
            Prim::Arc { r, sw, .. } => r * sw.abs(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match *self {
            Prim::Seg { a, b } => a.lerp(b, t),
            Prim::Arc { c, r, a0, sw, p0, p1 } => {
                if t == 0.0 {
                    p0
                } else if t == 1.0 {
                    p1
                } else {
                    c + Point::polar(a0 + t * sw) * r
                }
            }
        }
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_at(&self, t: f64) -> Point {
        match *self {
            Prim::Seg { a, b } => (b - a).normalized(),
            Prim::Arc { a0, sw, .. } => Point::polar(a0 + t * sw).perp() * sw.signum(),
        }
    }

    /// Signed curvature (positive = turning left).
    pub fn curvature(&self) -> f64 {
        match *self {
            Prim::Seg { .. } => 0.0,
            Prim::Arc { r, sw, .. } => sw.signum() / r,
        }
    }

    pub fn reversed(&self) -> Prim {
        match *self {
            Prim::Seg { a, b } => Prim::Seg { a: b, b: a },
            Prim::Arc { c, r, a0, sw, p0, p1 } => Prim::Arc { c, r, a0: a0 + sw, sw: -sw, p0: p1, p1: p0 },
        }
    }

    pub fn bbox(&self) -> BBox {
        match *self {
            Prim::Seg { a, b } => {
                let mut bb = BBox::from_point(a);
                bb.include(b);
                bb
            }
            Prim::Arc { c, r, a0, sw, p0, p1 } => {
                let mut bb = BBox::from_point(p0);
                bb.include(p1);
                // axis extremes at multiples of pi/2 inside the swept range
                let (lo, hi) = if sw >= 0.0 { (a0, a0 + sw) } else { (a0 + sw, a0) };
                let mut k = (lo / (0.5 * PI)).ceil();
                while k * 0.5 * PI <= hi {
                    bb.include(c + Point::polar(k * 0.5 * PI) * r);
                    k += 1.0;
                }
                bb
            }
        }
    }

    /// Parameter of a point assumed to lie on the carrier line/circle.
    /// Arc parameters outside [0,1] are folded to the nearer end.
    pub fn param_of(&self, q: Point) -> f64 {
        match *self {
            Prim::Seg { a, b } => {
                let d = b - a;
                (q - a).dot(d) / d.norm_sq()
            }
            Prim::Arc { c, a0, sw, .. } => {
                let ang = (q - c).angle() - a0;
                let d = if sw >= 0.0 { wrap_pos(ang) } else { wrap_pos(-ang) };
                let s = sw.abs();
                if d > s + 0.5 * (TAU - s) {
                    (d - TAU) / s
                } else {
                    d / s
                }
            }
        }
    }

    /// Distance from `p` and the clamped parameter of the closest point.
    pub fn closest(&self, p: Point) -> (f64, f64) {
        match *self {
            Prim::Seg { a, b } => {
                let d = b - a;
                let t = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                (p.dist(a.lerp(b, t)), t)
            }
            Prim::Arc { c, r, p0, p1, .. } => {
                let v = p - c;
                let rho = v.norm();
                if rho > 0.0 {
                    let t = self.param_of(p);
                    if (0.0..=1.0).contains(&t) {
                        return ((rho - r).abs(), t);
                    }
                }
                let d0 = p.dist(p0);
                let d1 = p.dist(p1);
                if d0 <= d1 {
                    (d0, 0.0)
                } else {
                    (d1, 1.0)
                }
            }
        }
    }

    /// Is `p` on the left of the primitive near parameter `t` (interior of edge)?
    pub fn left_of(&self, p: Point, t: f64) -> bool {
        match *self {
            Prim::Seg { a, b } => {
                let _ = t;
                (b - a).cross(p - a) > 0.0
            }
            Prim::Arc { c, r, sw, .. } => {
                let rho = p.dist(c);
                if sw > 0.0 {
                    rho < r
                } else {
                    rho > r
                }
            }
        }
    }

    /// Sub-primitive between parameters `t0 < t1`, with supplied exact endpoints.
    pub fn sub(&self, t0: f64, t1: f64, q0: Point, q1: Point) -> Prim {
        match *self {
            Prim::Seg { .. } => Prim::Seg { a: q0, b: q1 },
            Prim::Arc { c, r, a0, sw, .. } => {
                Prim::Arc { c, r, a0: a0 + t0 * sw, sw: (t1 - t0) * sw, p0: q0, p1: q1 }
            }
        }
    }
}

/// Relative round-off allowance for tangency decisions.
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// Intersections of two primitives as parameter pairs `(ta, tb)`.
/// `eps` is an absolute length tolerance for tangency and range tests.
pub(crate) fn intersect(pa: &Prim, pb: &Prim, eps: f64, out: &mut Vec<(f64, f64)>) {
    out.clear();
    let la = pa.length().max(1e-300);
    let lb = pb.length().max(1e-300);
    let tol_a = eps / la;
    let tol_b = eps / lb;
    let push = |q: Point, out: &mut Vec<(f64, f64)>| {
        let ta = pa.param_of(q);
        let tb = pb.param_of(q);
        if ta >= -tol_a && ta <= 1.0 + tol_a && tb >= -tol_b && tb <= 1.0 + tol_b {
            out.push((ta.clamp(0.0, 1.0), tb.clamp(0.0, 1.0)));
        }
    };
    match (*pa, *pb) {
        (Prim::Seg { a: a1, b: b1 }, Prim::Seg { a: a2, b: b2 }) => {
            let d1 = b1 - a1;
            let d2 = b2 - a2;
            let den = d1.cross(d2);
            let w = a2 - a1;
            if den.abs() <= 1e-14 * la * lb {
                if d1.cross(w).abs() / la <= eps {
                    // collinear: split at overlap ends
                    for q in [a2, b2] {
                        push(q, out);
                    }
                    for q in [a1, b1] {
                        push(q, out);
                    }
                }
                return;
            }
            let t = w.cross(d2) / den;
            let u = w.cross(d1) / den;
            if t >= -tol_a && t <= 1.0 + tol_a && u >= -tol_b && u <= 1.0 + tol_b {
                out.push((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)));
            }
        }
        (Prim::Seg { a, b }, Prim::Arc { c, r, .. }) => {
            line_circle(a, b, c, r, eps, |q| push(q, out));
        }
        (Prim::Arc { c, r, .. }, Prim::Seg { a, b }) => {
            line_circle(a, b, c, r, eps, |q| push(q, out));
        }
        (Prim::Arc { c: c1, r: r1, p0: s1, p1: e1, .. }, Prim::Arc { c: c2, r: r2, p0: s2, p1: e2, .. }) => {
            let dv = c2 - c1;
            let d = dv.norm();
            if d <= eps && (r1 - r2).abs() <= eps {
                for q in [s2, e2, s1, e1] {
                    push(q, out);
                }
                return;
            }
            if d <= eps {
                return;
            }
            let u = dv / d;
            if d > r1 + r2 + eps || d < (r1 - r2).abs() - eps {
                return;
            }
            // tangency is decided at round-off level: crossings of nearly
            // tangent circles can be far apart
            let tan_eps = ROUNDOFF * (c1.norm() + c2.norm() + r1 + r2);
            if (d - (r1 + r2)).abs() <= tan_eps {
                push(c1 + u * r1, out);
                return;
            }
            if (d - (r1 - r2).abs()).abs() <= tan_eps {
                let s = if r1 >= r2 { 1.0 } else { -1.0 };
                push(c1 + u * (s * r1), out);
                return;
            }
            let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            let h = (r1 * r1 - a * a).max(0.0).sqrt();
            let m = c1 + u * a;
            if h <= eps {
                push(m, out);
            } else {
                push(m + u.perp() * h, out);
                push(m - u.perp() * h, out);
            }
        }
    }
}

fn line_circle(a: Point, b: Point, c: Point, r: f64, eps: f64, mut f: impl FnMut(Point)) {
    let d = b - a;
    let len = d.norm();
    let u = d / len;
    let t0 = (c - a).dot(u);
    let foot = a + u * t0;
    let dist = u.cross(c - a).abs();
    if dist > r + eps {
        return;
    }
    if (dist - r).abs() <= ROUNDOFF * (a.norm() + c.norm() + r + len) {
        f(foot);
        return;
    }
    let h = (r * r - dist * dist).max(0.0).sqrt();
    if h <= eps {
        f(foot);
    } else {
        f(foot + u * h);
        f(foot - u * h);
    }
}
