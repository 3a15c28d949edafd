//! Cheeger constants from inner parallel sets: `h(Ω) = 1/r` where `r` is the
//! root of `πr² = |Ω^r|`, the maximal Cheeger set `Ω^r ⊕ B_r`, the
//! self-Cheeger certificate and the Steiner identities.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcgeom::index::BoundaryIndex;
use crate::arcgeom::{inner_parallel, minkowski_disc, ArcGon, Point, RegionSet, CONTAINS_TOL};
use crate::error::{Error, Result};

/// Default residual tolerance on `|πr² − |Ω^r||`.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Bisection iteration cap.
pub const MAX_ITER: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerSolution {
    pub r: f64,
    pub h: f64,
    pub cheeger_set: ArcGon,
    pub no_neck_certified: bool,
    pub residual: f64,
    /// number of components of Ω^r
    pub components: usize,
    pub iterations: usize,
}

/// `πr² − |Ω^r|`, strictly increasing in r.
pub fn area_gap(omega: &ArcGon, r: f64) -> Result<(f64, RegionSet)> {
    let er = inner_parallel(omega, r)?;
    Ok((PI * r * r - er.area(), er))
}

pub fn cheeger_constant(omega: &ArcGon, tol: f64) -> Result<CheegerSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut lo = 0.0;
    let mut hi = (omega.area() / PI).sqrt();
    let mut best: Option<(f64, f64, RegionSet)> = None;
    let mut iterations = 0;
    for it in 1..=MAX_ITER {
        iterations = it;
        let mid = 0.5 * (lo + hi);
        let (f, er) = area_gap(omega, mid)?;
        let better = best.as_ref().is_none_or(|(_, bf, _)| f.abs() < bf.abs());
        if better && !er.is_empty() {
            best = Some((mid, f, er));
        }
        if f.abs() <= tol && best.as_ref().is_some_and(|(r, _, _)| *r == mid) {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    let Some((r, f, er)) = best else {
        return Err(Error::NumericalFailure("inner parallel set empty at every probed radius".into()));
    };
    if f.abs() > tol {
        return Err(Error::NumericalFailure(format!(
            "bisection stalled at r = {r} with residual {:.3e} > {tol:.1e}",
            f.abs()
        )));
    }
    let components = er.components.len();
    let no_neck_certified = components == 1;
    let cheeger_set = if no_neck_certified { minkowski_disc(&er, r)? } else { uncertified_set(&er, r)? };
    Ok(CheegerSolution { r, h: 1.0 / r, cheeger_set, no_neck_certified, residual: f.abs(), components, iterations })
}

/// With a disconnected Ω^r the dilation may split; keep the component
/// dilation with the smallest perimeter-to-area ratio.
fn uncertified_set(er: &RegionSet, r: f64) -> Result<ArcGon> {
    match minkowski_disc(er, r) {
        Ok(g) => Ok(g),
        Err(Error::NotConnected { .. }) => {
            let mut best: Option<ArcGon> = None;
            for c in &er.components {
                let g = minkowski_disc(&RegionSet::single(c.clone()), r)?;
                if best.as_ref().is_none_or(|b| cheeger_ratio_unchecked(&g) < cheeger_ratio_unchecked(b)) {
                    best = Some(g);
                }
            }
            Ok(best.expect("at least one component"))
        }
        Err(e) => Err(e),
    }
}

/// Cheeger constant of a disjoint union: the minimum over its components.
pub fn cheeger_constant_set(set: &RegionSet, tol: f64) -> Result<CheegerSolution> {
    let mut best: Option<CheegerSolution> = None;
    for g in &set.components {
        let s = cheeger_constant(g, tol)?;
        if best.as_ref().is_none_or(|b| s.h < b.h) {
            best = Some(s);
        }
    }
    best.ok_or_else(|| Error::InvalidGeometry("empty region set".into()))
}

fn cheeger_ratio_unchecked(g: &ArcGon) -> f64 {
    g.perimeter() / g.area()
}

pub fn cheeger_ratio(e: &ArcGon) -> Result<f64> {
    let a = e.area();
    if !(a > 0.0) {
        return Err(Error::InvalidGeometry("zero area".into()));
    }
    Ok(e.perimeter() / a)
}

/// Smallest perimeter-to-area ratio over the components of a region set.
pub fn cheeger_ratio_set(set: &RegionSet) -> Result<f64> {
    set.components
        .iter()
        .map(cheeger_ratio)
        .try_fold(f64::INFINITY, |m, r| r.map(|r| m.min(r)))
        .and_then(|m| if m.is_finite() { Ok(m) } else { Err(Error::InvalidGeometry("empty region set".into())) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfCheegerReport {
    pub r_star: f64,
    pub samples: usize,
    pub failures: Vec<Point>,
    pub pass: bool,
}

/// Checks that a disc of radius `r* = |E|/P(E)` fits inside E tangent at
/// every sampled boundary point. At edge junctions the averaged normal is
/// tried first, then each one-sided normal.
pub fn verify_self_cheeger(e: &ArcGon, samples: usize) -> SelfCheegerReport {
    verify_self_cheeger_tol(e, samples, CONTAINS_TOL)
}

pub fn verify_self_cheeger_tol(e: &ArcGon, samples: usize, tol: f64) -> SelfCheegerReport {
    let r_star = e.area() / e.perimeter();
    let idx = BoundaryIndex::new(&[e.prims()], r_star);
    let eps_len = 1e-12 * e.bbox().diagonal();
    let fits = |c: Point| {
        let nr = idx.nearest(c);
        nr.dist >= r_star - tol && idx.left_at(c, &nr, eps_len)
    };
    let pts = normal_samples(e, samples);
    let failures: Vec<Point> = pts
        .par_iter()
        .filter_map(|(p, normals)| (!normals.iter().any(|n| fits(*p - *n * r_star))).then_some(*p))
        .collect();
    SelfCheegerReport { r_star, samples, pass: failures.is_empty(), failures }
}

/// `n` points equally spaced in arclength with candidate outward normals.
fn normal_samples(e: &ArcGon, n: usize) -> Vec<(Point, Vec<Point>)> {
    let edges = e.edges();
    let m = edges.len();
    let lens: Vec<f64> = edges.iter().map(|ed| ed.length()).collect();
    let total: f64 = lens.iter().sum();
    let outward = |t: Point| -t.perp();
    let mut out = Vec::with_capacity(n);
    let (mut ei, mut acc) = (0usize, 0.0);
    for k in 0..n {
        let s = total * k as f64 / n as f64;
        while ei + 1 < m && acc + lens[ei] < s {
            acc += lens[ei];
            ei += 1;
        }
        let ed = &edges[ei];
        let t = ((s - acc) / lens[ei]).clamp(0.0, 1.0);
        let here = outward(ed.tangent_at(t));
        let other = if t <= 1e-12 {
            Some(outward(edges[(ei + m - 1) % m].tangent_at(1.0)))
        } else if t >= 1.0 - 1e-12 {
            Some(outward(edges[(ei + 1) % m].tangent_at(0.0)))
        } else {
            None
        };
        let normals = match other {
            Some(o) => vec![(here + o).normalized(), here, o],
            None => vec![here],
        };
        out.push((ed.point_at(t), normals));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerResiduals {
    pub area: f64,
    pub perimeter: f64,
}

/// Residuals of `|G ⊕ B_r| = |G| + P(G) r + πr²` and
/// `P(G ⊕ B_r) = P(G) + 2πr`, with the perimeter as Minkowski content.
pub fn steiner_check(g: &ArcGon, r: f64) -> Result<SteinerResiduals> {
    let d = minkowski_disc(&RegionSet::single(g.clone()), r)?;
    let (a, p) = (g.area(), g.perimeter());
    Ok(SteinerResiduals {
        area: (d.area() - a - p * r - PI * r * r).abs(),
        perimeter: (d.perimeter() - p - 2.0 * PI * r).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::shapes::standard_dumbbell;

    #[test]
    fn unit_disc() {
        let d = ArcGon::disc(Point::ORIGIN, 1.0).unwrap();
        let s = cheeger_constant(&d, 1e-12).unwrap();
        assert!((s.h - 2.0).abs() < 1e-10);
        assert!(s.no_neck_certified);
        assert!((s.cheeger_set.area() - PI).abs() < 1e-9);
    }

    #[test]
    fn unit_square() {
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let s = cheeger_constant(&sq, DEFAULT_TOL).unwrap();
        let want = 2.0 + PI.sqrt();
        assert!((s.h - want).abs() < 1e-8);
        assert!((cheeger_ratio(&s.cheeger_set).unwrap() - s.h).abs() < 1e-6 * s.h);
        assert_eq!(s.cheeger_set.len(), 8);
    }

    #[test]
    fn dumbbell_is_uncertified() {
        let s = cheeger_constant(&standard_dumbbell(), DEFAULT_TOL).unwrap();
        assert!(!s.no_neck_certified);
        assert_eq!(s.components, 2);
        // two eroded discs, slightly enlarged toward the bridge openings
        let discs_only = 2f64.sqrt() / (1.0 + 2f64.sqrt());
        assert!(s.r > discs_only && s.r - discs_only < 1e-4);
        assert!((cheeger_ratio(&s.cheeger_set).unwrap() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn self_cheeger_disc_and_square() {
        let d = ArcGon::disc(Point::new(0.3, -0.2), 2.0).unwrap();
        let rep = verify_self_cheeger(&d, 500);
        assert!(rep.pass && (rep.r_star - 1.0).abs() < 1e-14);
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let rep = verify_self_cheeger(&sq, 400);
        assert!(!rep.pass);
        assert!(rep.failures.iter().all(|p| p.x.min(1.0 - p.x).min(p.y.min(1.0 - p.y)) < 1e-12));
        assert!(rep.failures.iter().any(|p| p.dist(Point::new(1.0, 1.0)) < 0.3));
    }

    #[test]
    fn steiner_on_convex_shapes() {
        let d = ArcGon::disc(Point::ORIGIN, 0.5).unwrap();
        let res = steiner_check(&d, 0.5).unwrap();
        assert!(res.area < 1e-10 && res.perimeter < 1e-10);
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let res = steiner_check(&sq, 0.2).unwrap();
        assert!(res.area < 1e-10 && res.perimeter < 1e-10);
    }

    #[test]
    fn ratio_of_union_is_min() {
        let a = ArcGon::disc(Point::ORIGIN, 1.0).unwrap();
        let b = ArcGon::rectangle(Point::new(3.0, 0.0), Point::new(4.0, 1.0)).unwrap();
        let set = RegionSet { components: vec![a.clone(), b.clone()] };
        assert!((cheeger_ratio_set(&set).unwrap() - 2.0).abs() < 1e-12);
        let s = cheeger_constant_set(&set, DEFAULT_TOL).unwrap();
        assert!((s.h - 2.0).abs() < 1e-9);
    }
}
