//! Uniform-grid bucket index over boundary primitives for nearest-distance
//! queries, plus the side test used to classify offset pieces.

use std::f64::consts::TAU;

use super::point::{BBox, Point};
use super::prim::Prim;

pub(crate) struct BoundaryIndex {
    pub prims: Vec<Prim>,
    boxes: Vec<BBox>,
    prev: Vec<usize>,
    next: Vec<usize>,
    bb: BBox,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

/// Result of a nearest-boundary query.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Nearest {
    pub dist: f64,
    pub prim: usize,
    pub t: f64,
}

impl BoundaryIndex {
    /// Builds the index over closed loops. `margin` enlarges the indexed
    /// window so that queries up to that far outside stay accelerated.
    pub fn new(loops: &[Vec<Prim>], margin: f64) -> Self {
        let mut prims = Vec::new();
        let mut prev = Vec::new();
        let mut next = Vec::new();
        for lp in loops {
            let base = prims.len();
            let n = lp.len();
            for i in 0..n {
                prims.push(lp[i]);
                prev.push(base + (i + n - 1) % n);
                next.push(base + (i + 1) % n);
            }
        }
        let mut bb = BBox::empty();
        let boxes: Vec<BBox> = prims.iter().map(|p| p.bbox()).collect();
        for b in &boxes {
            bb = bb.union(b);
        }
        let bb = bb.expanded(margin.max(1e-12 * (1.0 + bb.diagonal())));
        let n = prims.len().max(1) as f64;
        let target = (bb.width() * bb.height() / n).sqrt() * 1.5;
        let cell = target.max(bb.width().max(bb.height()) / 2048.0).max(1e-300);
        let nx = ((bb.width() / cell).ceil() as usize).max(1);
        let ny = ((bb.height() / cell).ceil() as usize).max(1);
        let mut cells = vec![Vec::new(); nx * ny];
        for (i, b) in boxes.iter().enumerate() {
            let (x0, y0) = Self::cell_of_raw(&bb, cell, nx, ny, b.min);
            let (x1, y1) = Self::cell_of_raw(&bb, cell, nx, ny, b.max);
            for y in y0..=y1 {
                for x in x0..=x1 {
                    cells[y * nx + x].push(i as u32);
                }
            }
        }
        BoundaryIndex { prims, boxes, prev, next, bb, cell, nx, ny, cells }
    }

    fn cell_of_raw(bb: &BBox, cell: f64, nx: usize, ny: usize, p: Point) -> (usize, usize) {
        let x = ((p.x - bb.min.x) / cell).floor().clamp(0.0, (nx - 1) as f64) as usize;
        let y = ((p.y - bb.min.y) / cell).floor().clamp(0.0, (ny - 1) as f64) as usize;
        (x, y)
    }

    pub fn nearest(&self, p: Point) -> Nearest {
        self.nearest_unless_closer(p, f64::NEG_INFINITY).expect("no lower bound")
    }

    /// Nearest boundary point, or `None` as soon as some primitive is found
    /// closer than `bound` (rings are searched nearest first, so points deep
    /// inside the offset band exit early).
    pub fn nearest_unless_closer(&self, p: Point, bound: f64) -> Option<Nearest> {
        let mut best = Nearest { dist: f64::INFINITY, prim: 0, t: 0.0 };
        let outside = self.bb.dist(p);
        if outside > 0.0 || self.prims.len() < 32 {
            for (i, pr) in self.prims.iter().enumerate() {
                let (d, t) = pr.closest(p);
                if d < bound {
                    return None;
                }
                if d < best.dist {
                    best = Nearest { dist: d, prim: i, t };
                }
            }
            return Some(best);
        }
        let (cx, cy) = Self::cell_of_raw(&self.bb, self.cell, self.nx, self.ny, p);
        let max_ring = self.nx.max(self.ny);
        for k in 0..=max_ring {
            let x0 = cx as isize - k as isize;
            let x1 = cx as isize + k as isize;
            let y0 = cy as isize - k as isize;
            let y1 = cy as isize + k as isize;
            let mut too_close = false;
            let mut visit = |x: isize, y: isize| {
                if too_close || x < 0 || y < 0 || x >= self.nx as isize || y >= self.ny as isize {
                    return;
                }
                for &i in &self.cells[y as usize * self.nx + x as usize] {
                    if self.boxes[i as usize].dist(p) > best.dist {
                        continue;
                    }
                    let (d, t) = self.prims[i as usize].closest(p);
                    if d < bound {
                        too_close = true;
                        return;
                    }
                    if d < best.dist || (d == best.dist && (i as usize) < best.prim) {
                        best = Nearest { dist: d, prim: i as usize, t };
                    }
                }
            };
            if k == 0 {
                visit(cx as isize, cy as isize);
            } else {
                for x in x0..=x1 {
                    visit(x, y0);
                    visit(x, y1);
                }
                for y in (y0 + 1)..y1 {
                    visit(x0, y);
                    visit(x1, y);
                }
            }
            if too_close {
                return None;
            }
            if best.dist <= k as f64 * self.cell {
                break;
            }
        }
        Some(best)
    }

    /// Is `p` on the left of the boundary, judged at its nearest foot?
    /// `eps_t` is the parameter-space tolerance below which a foot is treated
    /// as the shared vertex of two primitives.
    pub fn left_at(&self, p: Point, nr: &Nearest, eps_len: f64) -> bool {
        let pr = &self.prims[nr.prim];
        let len = pr.length().max(1e-300);
        let at_start = nr.t * len <= eps_len;
        let at_end = (1.0 - nr.t) * len <= eps_len;
        if !at_start && !at_end {
            return pr.left_of(p, nr.t);
        }
        let (e_in, e_out) = if at_start { (self.prev[nr.prim], nr.prim) } else { (nr.prim, self.next[nr.prim]) };
        let v = if at_start { pr.start() } else { pr.end() };
        let t_in = self.prims[e_in].tangent_at(1.0);
        let t_out = self.prims[e_out].tangent_at(0.0);
        let w = p - v;
        if w.norm() <= eps_len {
            return false;
        }
        let ccw = |from: Point, to: Point| (from.cross(to)).atan2(from.dot(to)).rem_euclid(TAU);
        let total = ccw(t_out, -t_in);
        let total = if total == 0.0 { TAU } else { total };
        ccw(t_out, w) < total
    }
}
