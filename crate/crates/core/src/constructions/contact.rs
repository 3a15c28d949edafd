//! Extraction of the contact set ∂E ∩ ∂Ω between a domain and a subset.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcgeom::index::BoundaryIndex;
use crate::arcgeom::{ArcGon, Point};
use crate::cantor::DyadicSet;
use crate::error::{Error, Result};

/// Where the two boundaries coincide: isolated points and arclength
/// intervals of ∂E (measured from the start of E's first edge; an interval
/// that wraps past the start ends beyond the perimeter).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContactSet {
    pub points: Vec<Point>,
    pub intervals_param: Vec<[f64; 2]>,
}

impl ContactSet {
    /// Number of contact elements (points plus maximal intervals).
    pub fn count(&self) -> usize {
        self.points.len() + self.intervals_param.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn total_length(&self) -> f64 {
        self.intervals_param.iter().map(|[a, b]| b - a).sum()
    }
}

const SAMPLES: [f64; 3] = [0.25, 0.5, 0.75];

/// An edge of E is in contact when its interior samples at 1/4, 1/2 and 3/4
/// all lie within `tol` of ∂Ω; a vertex when it does. Runs of contact edges
/// merge into intervals, and contact vertices outside any run are points.
pub fn contact_set(e: &ArcGon, omega: &ArcGon, tol: f64) -> Result<ContactSet> {
    let idx = BoundaryIndex::new(&[omega.prims()], tol.max(0.0) + 1e-9 * omega.bbox().diagonal());
    let eps_len = 1e-12 * omega.bbox().diagonal();
    let probe = |p: Point| -> Result<bool> {
        let nr = idx.nearest(p);
        if nr.dist <= tol {
            return Ok(true);
        }
        if !idx.left_at(p, &nr, eps_len) {
            return Err(Error::InvalidInput(format!(
                "E is not contained in Omega: ({:.6}, {:.6}) lies {:.3e} outside",
                p.x, p.y, nr.dist
            )));
        }
        Ok(false)
    };
    let edges = e.edges();
    let flags: Vec<(bool, bool)> = edges
        .par_iter()
        .map(|ed| {
            let vertex = probe(ed.start)?;
            let mut all = true;
            for &t in &SAMPLES {
                all &= probe(ed.point_at(t))?;
            }
            Ok((vertex, all))
        })
        .collect::<Result<_>>()?;
    let n = edges.len();
    let lens: Vec<f64> = edges.iter().map(|ed| ed.length()).collect();
    let mut cum = vec![0.0; n + 1];
    for i in 0..n {
        cum[i + 1] = cum[i] + lens[i];
    }
    let total = cum[n];
    let contact_edge = |i: usize| flags[i % n].1;
    let mut out = ContactSet::default();
    if (0..n).all(contact_edge) {
        out.intervals_param.push([0.0, total]);
        return Ok(out);
    }
    // start scanning just after a non-contact edge so no run wraps
    let first_free = (0..n).find(|&i| !contact_edge(i)).unwrap();
    let mut i = first_free + 1;
    let stop = first_free + 1 + n;
    while i < stop {
        if contact_edge(i) {
            let s = i;
            while contact_edge(i) {
                i += 1;
            }
            let a = cum[s % n] + if s >= n { total } else { 0.0 };
            let b = a + (s..i).map(|k| lens[k % n]).sum::<f64>();
            let (a, b) = if a >= total { (a - total, b - total) } else { (a, b) };
            out.intervals_param.push([a, b]);
        } else {
            i += 1;
        }
    }
    out.intervals_param.sort_by(|x, y| x[0].total_cmp(&y[0]));
    for v in 0..n {
        let prev = (v + n - 1) % n;
        if flags[v].0 && !contact_edge(v) && !contact_edge(prev) {
            out.points.push(edges[v].start);
        }
    }
    Ok(out)
}

/// Contact intervals lying on the top side of a Cantor-type domain (side ℓ,
/// corner radius `d`), as fractions of ℓ sorted left to right.
pub fn top_side_fractions(e: &ArcGon, cs: &ContactSet, ell: f64, d: f64) -> DyadicSet {
    let level = ell + 0.5 * d;
    let mut iv: Vec<[f64; 2]> = cs
        .intervals_param
        .iter()
        .filter_map(|&[a, b]| {
            let (p, q) = (e.point_at_arclength(a), e.point_at_arclength(b));
            (p.y >= level && q.y >= level).then(|| {
                let (x0, x1) = (q.x.min(p.x), q.x.max(p.x));
                [(x0 / ell).clamp(0.0, 1.0), (x1 / ell).clamp(0.0, 1.0)]
            })
        })
        .collect();
    iv.sort_by(|x, y| x[0].total_cmp(&y[0]));
    DyadicSet::Intervals(iv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_domains_touch_everywhere() {
        let g = ArcGon::disc(Point::ORIGIN, 1.0).unwrap();
        let cs = contact_set(&g, &g, 1e-12).unwrap();
        assert_eq!(cs.intervals_param, vec![[0.0, g.perimeter()]]);
        assert!(cs.points.is_empty());
    }

    #[test]
    fn concentric_discs_do_not_touch() {
        let a = ArcGon::disc(Point::ORIGIN, 1.0).unwrap();
        let b = ArcGon::disc(Point::ORIGIN, 2.0).unwrap();
        assert!(contact_set(&a, &b, 1e-9).unwrap().is_empty());
        assert!(matches!(contact_set(&b, &a, 1e-9), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn square_in_rectangle_shares_one_side() {
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let big = ArcGon::rectangle(Point::new(-1.0, 0.0), Point::new(2.0, 3.0)).unwrap();
        let cs = contact_set(&sq, &big, 1e-12).unwrap();
        assert_eq!(cs.intervals_param, vec![[0.0, 1.0]]);
        assert!(cs.points.is_empty());
    }

    #[test]
    fn wrapping_run_is_one_interval() {
        let sq = ArcGon::polygon(&[
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.0, 0.0),
        ])
        .unwrap();
        let big = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(3.0, 3.0)).unwrap();
        let cs = contact_set(&sq, &big, 1e-12).unwrap();
        assert_eq!(cs.count(), 1);
        let [a, b] = cs.intervals_param[0];
        assert!((a - 2.5).abs() < 1e-12 && (b - 4.5).abs() < 1e-12);
    }
}
