//! Closed curves made of line segments and circular arcs: measures, inner
//! parallel sets, disc dilation and containment queries.
//!
//! Curvature sign convention: a positive curvature arc turns left
//! (counter-clockwise) along its direction of travel, so on a
//! counter-clockwise domain it bulges outward. Arcs are always minor
//! (sweep at most π).

mod biarc;
pub(crate) mod index;
pub(crate) mod offset;
mod point;
pub(crate) mod prim;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use biarc::{biarc, fit_biarcs};
pub use point::{BBox, Point};
pub(crate) use prim::Prim;

use crate::error::{Error, Result};
use offset::{loop_area, offset_left, Tolerances};

/// Curvatures with `|κ|·chord` below this are stored as straight segments.
pub const STRAIGHT_EPS: f64 = 1e-12;
/// Default absolute tolerance of [`contains_disc`].
pub const CONTAINS_TOL: f64 = 1e-9;

/// One boundary piece: a segment (`curvature == 0`) or a minor circular arc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcEdge {
    pub start: Point,
    pub end: Point,
    pub curvature: f64,
}

impl ArcEdge {
    pub fn segment(start: Point, end: Point) -> Self {
        ArcEdge { start, end, curvature: 0.0 }
    }

    pub fn arc(start: Point, end: Point, curvature: f64) -> Self {
        ArcEdge { start, end, curvature }
    }

    pub fn chord(&self) -> f64 {
        self.start.dist(self.end)
    }

    /// Unsigned swept angle (0 for segments).
    pub fn sweep(&self) -> f64 {
        if self.curvature == 0.0 {
            0.0
        } else {
            2.0 * (0.5 * self.curvature.abs() * self.chord()).min(1.0).asin()
        }
    }

    pub fn length(&self) -> f64 {
        if self.curvature == 0.0 {
            self.chord()
        } else {
            self.sweep() / self.curvature.abs()
        }
    }

    /// Center of the carrier circle, `None` for segments.
    pub fn center(&self) -> Option<Point> {
        match Prim::from_edge(self) {
            Prim::Arc { c, .. } => Some(c),
            Prim::Seg { .. } => None,
        }
    }

    pub fn reversed(&self) -> ArcEdge {
        ArcEdge { start: self.end, end: self.start, curvature: -self.curvature }
    }

    pub fn point_at(&self, t: f64) -> Point {
        Prim::from_edge(self).point_at(t)
    }

    /// Unit tangent along the direction of travel at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> Point {
        Prim::from_edge(self).tangent_at(t)
    }

    pub fn distance(&self, p: Point) -> f64 {
        Prim::from_edge(self).closest(p).0
    }

    fn canonical(mut self) -> Self {
        if self.curvature.abs() * self.chord() < STRAIGHT_EPS {
            self.curvature = 0.0;
        }
        self
    }
}

/// A closed, counter-clockwise, simple chain of [`ArcEdge`]s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcGonRepr", into = "ArcGonRepr")]
pub struct ArcGon {
    edges: Vec<ArcEdge>,
}

#[derive(Serialize, Deserialize)]
struct ArcGonRepr {
    edges: Vec<ArcEdge>,
}

impl TryFrom<ArcGonRepr> for ArcGon {
    type Error = Error;
    fn try_from(r: ArcGonRepr) -> Result<Self> {
        let g = ArcGon::new(r.edges)?;
        g.check_simple()?;
        Ok(g)
    }
}

impl From<ArcGon> for ArcGonRepr {
    fn from(g: ArcGon) -> Self {
        ArcGonRepr { edges: g.edges }
    }
}

fn bbox_of(edges: &[ArcEdge]) -> BBox {
    let mut bb = BBox::empty();
    for e in edges {
        bb = bb.union(&Prim::from_edge(e).bbox());
    }
    bb
}

impl ArcGon {
    /// Validates closure, chord fit and orientation. Endpoints that close up
    /// within round-off are snapped so the chain is exactly closed.
    /// Simplicity is checked separately by [`ArcGon::check_simple`].
    pub fn new(edges: Vec<ArcEdge>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidGeometry("an arc-gon needs at least two edges".into()));
        }
        let mut edges: Vec<ArcEdge> = edges.into_iter().map(ArcEdge::canonical).collect();
        let mut scale = 0.0f64;
        for e in &edges {
            if !(e.start.is_finite() && e.end.is_finite() && e.curvature.is_finite()) {
                return Err(Error::InvalidGeometry("non-finite edge data".into()));
            }
            scale = scale.max(e.start.x.abs()).max(e.start.y.abs());
        }
        let close_tol = 1e-9 * (1.0 + scale);
        let n = edges.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let gap = edges[i].end.dist(edges[j].start);
            if gap > close_tol {
                return Err(Error::InvalidGeometry(format!("edge {i} does not meet edge {j} (gap {gap:.3e})")));
            }
            let end = edges[i].end;
            edges[j].start = end;
        }
        for (i, e) in edges.iter().enumerate() {
            let c = e.chord();
            if c == 0.0 {
                return Err(Error::InvalidGeometry(format!("edge {i} has coincident endpoints")));
            }
            if e.curvature.abs() * c > 2.0 * (1.0 + 1e-9) {
                return Err(Error::InvalidGeometry(format!("edge {i}: chord does not fit on its circle")));
            }
        }
        let g = ArcGon { edges };
        if g.signed_area() <= 0.0 {
            return Err(Error::InvalidGeometry("arc-gon must be counter-clockwise".into()));
        }
        Ok(g)
    }

    pub(crate) fn from_prims(prims: &[Prim]) -> Result<Self> {
        ArcGon::new(prims.iter().map(|p| p.to_edge()).collect())
    }

    pub fn polygon(pts: &[Point]) -> Result<Self> {
        let n = pts.len();
        ArcGon::new((0..n).map(|i| ArcEdge::segment(pts[i], pts[(i + 1) % n])).collect())
    }

    pub fn rectangle(min: Point, max: Point) -> Result<Self> {
        ArcGon::polygon(&[min, Point::new(max.x, min.y), max, Point::new(min.x, max.y)])
    }

    /// Disc as four quarter arcs (well conditioned, unlike two half arcs).
    pub fn disc(center: Point, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("disc radius must be positive, got {r}")));
        }
        let pts = [Point::new(r, 0.0), Point::new(0.0, r), Point::new(-r, 0.0), Point::new(0.0, -r)];
        ArcGon::new((0..4).map(|i| ArcEdge::arc(center + pts[i], center + pts[(i + 1) % 4], 1.0 / r)).collect())
    }

    pub fn edges(&self) -> &[ArcEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub(crate) fn prims(&self) -> Vec<Prim> {
        self.edges.iter().map(Prim::from_edge).collect()
    }

    pub fn bbox(&self) -> BBox {
        bbox_of(&self.edges)
    }

    fn signed_area(&self) -> f64 {
        let mut a = 0.0;
        for e in &self.edges {
            a += 0.5 * e.start.cross(e.end);
            if e.curvature != 0.0 {
                let b = e.sweep();
                a += e.curvature.signum() * (b - b.sin()) / (2.0 * e.curvature * e.curvature);
            }
        }
        a
    }

    pub fn area(&self) -> f64 {
        self.signed_area()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(ArcEdge::length).sum()
    }

    /// Verifies that no two edges meet except adjacent ones at their shared endpoint.
    pub fn check_simple(&self) -> Result<()> {
        let prims = self.prims();
        let n = prims.len();
        let scale = self.bbox().diagonal();
        let eps = 1e-10 * scale;
        let boxes: Vec<BBox> = prims.iter().map(|p| p.bbox().expanded(eps)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x));
        let bad = (0..n).into_par_iter().find_any(|&oi| {
            let i = order[oi];
            let mut buf = Vec::new();
            for &j in &order[oi + 1..] {
                if boxes[j].min.x > boxes[i].max.x {
                    break;
                }
                if !boxes[i].overlaps(&boxes[j]) {
                    continue;
                }
                prim::intersect(&prims[i], &prims[j], eps, &mut buf);
                let (a, b) = (i.min(j), i.max(j));
                let adjacent_fwd = b == a + 1;
                let adjacent_wrap = a == 0 && b == n - 1;
                for &(ti, tj) in &buf {
                    let (ta, tb) = if i == a { (ti, tj) } else { (tj, ti) };
                    let la = prims[a].length();
                    let lb = prims[b].length();
                    let shared_fwd = adjacent_fwd && (1.0 - ta) * la <= eps && tb * lb <= eps;
                    let shared_wrap = adjacent_wrap && ta * la <= eps && (1.0 - tb) * lb <= eps;
                    let shared_both = n == 2 && ((1.0 - ta) * la <= eps && tb * lb <= eps || ta * la <= eps && (1.0 - tb) * lb <= eps);
                    if !(shared_fwd || shared_wrap || shared_both) {
                        return true;
                    }
                }
            }
            false
        });
        match bad {
            Some(_) => Err(Error::InvalidGeometry("boundary self-intersects".into())),
            None => Ok(()),
        }
    }

    pub fn scaled(&self, s: f64) -> ArcGon {
        self.map_points(|p| p * s, 1.0 / s)
    }

    pub fn translated(&self, v: Point) -> ArcGon {
        self.map_points(|p| p + v, 1.0)
    }

    pub fn rotated(&self, theta: f64) -> ArcGon {
        self.map_points(|p| p.rotated(theta), 1.0)
    }

    fn map_points(&self, f: impl Fn(Point) -> Point, kscale: f64) -> ArcGon {
        ArcGon {
            edges: self
                .edges
                .iter()
                .map(|e| ArcEdge { start: f(e.start), end: f(e.end), curvature: e.curvature * kscale })
                .collect(),
        }
    }

    /// Even-odd membership: chord polygon parity flipped inside each circular segment.
    pub fn contains_point(&self, p: Point) -> bool {
        let mut inside = false;
        for e in &self.edges {
            let (a, b) = (e.start, e.end);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            if e.curvature != 0.0 {
                let side = (b - a).cross(p - a);
                let bulge_side = if e.curvature > 0.0 { side < 0.0 } else { side > 0.0 };
                if bulge_side {
                    let c = e.center().unwrap();
                    if p.dist(c) < 1.0 / e.curvature.abs() {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges.iter().map(|e| e.distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// Point at arclength `s` from the start of the first edge (wrapping).
    pub fn point_at_arclength(&self, s: f64) -> Point {
        let total = self.perimeter();
        let mut s = s.rem_euclid(total);
        for e in &self.edges {
            let l = e.length();
            if s <= l {
                return e.point_at(s / l);
            }
            s -= l;
        }
        self.edges[0].start
    }

    /// `n` boundary samples equally spaced in arclength, each with the
    /// outward unit normal (averaged at edge junctions).
    pub fn boundary_samples(&self, n: usize) -> Vec<(Point, Point)> {
        let lens: Vec<f64> = self.edges.iter().map(ArcEdge::length).collect();
        let total: f64 = lens.iter().sum();
        let m = self.edges.len();
        let mut out = Vec::with_capacity(n);
        let mut ei = 0usize;
        let mut acc = 0.0;
        for k in 0..n {
            let s = total * k as f64 / n as f64;
            while ei + 1 < m && acc + lens[ei] < s {
                acc += lens[ei];
                ei += 1;
            }
            let e = &self.edges[ei];
            let t = ((s - acc) / lens[ei]).clamp(0.0, 1.0);
            let p = e.point_at(t);
            let outward = |tg: Point| -tg.perp();
            let mut nrm = outward(e.tangent_at(t));
            let jt = 1e-12;
            if t <= jt {
                let prev = &self.edges[(ei + m - 1) % m];
                nrm = (nrm + outward(prev.tangent_at(1.0))).normalized();
            } else if t >= 1.0 - jt {
                let next = &self.edges[(ei + 1) % m];
                nrm = (nrm + outward(next.tangent_at(0.0))).normalized();
            }
            out.push((p, nrm));
        }
        out
    }

    /// Maximum turning angle between consecutive edge tangents (0 for C¹ curves).
    pub fn max_tangent_jump(&self) -> f64 {
        let n = self.edges.len();
        (0..n)
            .map(|i| {
                let a = self.edges[i].tangent_at(1.0);
                let b = self.edges[(i + 1) % n].tangent_at(0.0);
                a.cross(b).atan2(a.dot(b)).abs()
            })
            .fold(0.0, f64::max)
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::for_scale(self.bbox().diagonal().max(1e-300))
    }
}

/// Pairwise disjoint arc-gons, e.g. the components of an inner parallel set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionSet {
    pub components: Vec<ArcGon>,
}

impl RegionSet {
    pub fn single(g: ArcGon) -> Self {
        RegionSet { components: vec![g] }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn area(&self) -> f64 {
        self.components.iter().map(ArcGon::area).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.components.iter().map(ArcGon::perimeter).sum()
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.components.iter().any(|g| g.contains_point(p))
    }

    pub fn bbox(&self) -> BBox {
        self.components.iter().fold(BBox::empty(), |b, g| b.union(&g.bbox()))
    }
}

pub fn area(g: &ArcGon) -> f64 {
    g.area()
}

pub fn perimeter(g: &ArcGon) -> f64 {
    g.perimeter()
}

pub fn boundary_distance(g: &ArcGon, p: Point) -> f64 {
    g.boundary_distance(p)
}

/// True iff `c` is interior and `dist(c, ∂g) ≥ r − 1e-9`.
pub fn contains_disc(g: &ArcGon, c: Point, r: f64) -> bool {
    contains_disc_tol(g, c, r, CONTAINS_TOL)
}

pub fn contains_disc_tol(g: &ArcGon, c: Point, r: f64, tol: f64) -> bool {
    r > 0.0 && g.contains_point(c) && g.boundary_distance(c) >= r - tol
}

/// `{x ∈ g : dist(x, ∂g) > r}` as disjoint components.
pub fn inner_parallel(g: &ArcGon, r: f64) -> Result<RegionSet> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("erosion radius must be positive, got {r}")));
    }
    let loops = offset_left(&[g.prims()], r, &g.tolerances())?;
    let mut components = Vec::with_capacity(loops.len());
    for lp in loops {
        if loop_area(&lp) <= 0.0 {
            return Err(Error::FallbackRequired("erosion produced a clockwise loop".into()));
        }
        components.push(ArcGon::from_prims(&lp).map_err(|e| Error::FallbackRequired(format!("erosion output: {e}")))?);
    }
    Ok(RegionSet { components })
}

/// Dilation `s ⊕ B_r`; the result must be a single simply connected arc-gon.
pub fn minkowski_disc(s: &RegionSet, r: f64) -> Result<ArcGon> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("dilation radius must be positive, got {r}")));
    }
    if s.is_empty() {
        return Err(Error::InvalidGeometry("cannot dilate an empty region set".into()));
    }
    let rev: Vec<Vec<Prim>> = s
        .components
        .iter()
        .map(|g| g.prims().iter().rev().map(Prim::reversed).collect())
        .collect();
    let scale = s.bbox().diagonal() + 2.0 * r;
    let loops = offset_left(&rev, r, &Tolerances::for_scale(scale))?;
    let mut outer = Vec::new();
    let mut holes = 0usize;
    for lp in loops {
        let fwd: Vec<Prim> = lp.iter().rev().map(Prim::reversed).collect();
        if loop_area(&fwd) > 0.0 {
            outer.push(fwd);
        } else {
            holes += 1;
        }
    }
    if outer.len() != 1 {
        return Err(Error::NotConnected { components: outer.len() });
    }
    if holes > 0 {
        return Err(Error::InvalidGeometry(format!("dilation encloses {holes} hole(s)")));
    }
    ArcGon::from_prims(&outer[0])
}

/// Disc of radius `r` about `p` (the dilation of a single point).
pub fn dilate_point(p: Point, r: f64) -> Result<ArcGon> {
    ArcGon::disc(p, r)
}

/// Symmetric Hausdorff distance between two boundaries, estimated by
/// sampling `per_edge` points on every edge of each curve.
pub fn hausdorff_distance(a: &ArcGon, b: &ArcGon, per_edge: usize) -> f64 {
    let one_way = |x: &ArcGon, y: &ArcGon| {
        let idx = index::BoundaryIndex::new(&[y.prims()], x.bbox().union(&y.bbox()).diagonal());
        x.edges
            .par_iter()
            .map(|e| {
                (0..=per_edge)
                    .map(|k| idx.nearest(e.point_at(k as f64 / per_edge as f64)).dist)
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
