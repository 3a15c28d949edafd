//! Raster verification oracle: cell-centre rasterization, exact Euclidean
//! distance transform, erosion areas, a raster Cheeger solver and
//! 4-connectivity checks. Shares no code with the exact offset engine.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use crate::arcgeom::{ArcEdge, ArcGon, BBox, Point, RegionSet};
use crate::error::{Error, Result};

/// Default resolution: bounding-box diagonal divided by this many steps.
pub const DEFAULT_RESOLUTION: f64 = 2048.0;
/// Minimum number of cells across the longer side of the domain.
pub const MIN_CELLS: f64 = 16.0;
/// Empty cells added around the bounding box on every side.
const PAD: usize = 2;

#[derive(Clone, Debug)]
pub struct Grid {
    pub origin: Point,
    pub step: f64,
    pub width: usize,
    pub height: usize,
    /// row-major, row 0 at the bottom
    pub occupancy: Vec<bool>,
    pub distance: Option<Vec<f64>>,
}

impl Grid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        Point::new(self.origin.x + (i as f64 + 0.5) * self.step, self.origin.y + (j as f64 + 0.5) * self.step)
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    pub fn area(&self) -> f64 {
        self.occupied_count() as f64 * self.step * self.step
    }

    fn distances(&self) -> Result<&[f64]> {
        self.distance
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("distance transform has not been computed".into()))
    }

    /// Writes the occupancy as a binary PBM (occupied cells black).
    pub fn write_pbm(&self, mut w: impl Write) -> Result<()> {
        write!(w, "P4\n{} {}\n", self.width, self.height)?;
        let row_bytes = self.width.div_ceil(8);
        let mut buf = vec![0u8; row_bytes];
        for j in (0..self.height).rev() {
            buf.fill(0);
            for i in 0..self.width {
                if self.occupancy[self.index(i, j)] {
                    buf[i / 8] |= 0x80 >> (i % 8);
                }
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    /// Writes the distance field as a 16-bit PGM scaled to its maximum.
    pub fn write_pgm(&self, mut w: impl Write) -> Result<()> {
        let d = self.distances()?;
        let max = d.iter().copied().fold(0.0, f64::max);
        let scale = if max > 0.0 { 65535.0 / max } else { 0.0 };
        write!(w, "P5\n{} {}\n65535\n", self.width, self.height)?;
        for j in (0..self.height).rev() {
            for i in 0..self.width {
                let v = (d[self.index(i, j)] * scale).round() as u16;
                w.write_all(&v.to_be_bytes())?;
            }
        }
        Ok(())
    }
}

pub fn default_step(bbox: &BBox) -> f64 {
    bbox.diagonal() / DEFAULT_RESOLUTION
}

/// A y-monotone boundary piece used by the scanline fill.
#[derive(Clone, Copy, Debug)]
enum Mono {
    Seg { a: Point, b: Point },
    /// arc lying in the right (`right`) or left half of its circle
    Arc { c: Point, r: f64, ylo: f64, yhi: f64, right: bool },
}

impl Mono {
    fn y_range(&self) -> (f64, f64) {
        match *self {
            Mono::Seg { a, b } => (a.y.min(b.y), a.y.max(b.y)),
            Mono::Arc { ylo, yhi, .. } => (ylo, yhi),
        }
    }

    fn x_at(&self, y: f64) -> f64 {
        match *self {
            Mono::Seg { a, b } => a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y),
            Mono::Arc { c, r, right, .. } => {
                let dx = (r * r - (y - c.y) * (y - c.y)).max(0.0).sqrt();
                if right {
                    c.x + dx
                } else {
                    c.x - dx
                }
            }
        }
    }
}

fn monotone_pieces(e: &ArcEdge, out: &mut Vec<Mono>) {
    let Some(c) = e.center() else {
        if e.start.y != e.end.y {
            out.push(Mono::Seg { a: e.start, b: e.end });
        }
        return;
    };
    let r = 1.0 / e.curvature.abs();
    let a0 = (e.start - c).angle();
    let sw = e.sweep().copysign(e.curvature);
    // split where the tangent is horizontal: angle ≡ π/2 (mod π)
    let mut cuts = vec![0.0];
    let k_lo = ((a0.min(a0 + sw) - PI / 2.0) / PI).ceil() as i64;
    let k_hi = ((a0.max(a0 + sw) - PI / 2.0) / PI).floor() as i64;
    for k in k_lo..=k_hi {
        let t = (PI / 2.0 + k as f64 * PI - a0) / sw;
        if t > 0.0 && t < 1.0 {
            cuts.push(t);
        }
    }
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    let at = |t: f64| {
        if t == 0.0 {
            e.start
        } else if t == 1.0 {
            e.end
        } else {
            c + Point::polar(a0 + t * sw) * r
        }
    };
    for w in cuts.windows(2) {
        let (p, q) = (at(w[0]), at(w[1]));
        if p.y == q.y {
            continue;
        }
        let mid = a0 + 0.5 * (w[0] + w[1]) * sw;
        out.push(Mono::Arc { c, r, ylo: p.y.min(q.y), yhi: p.y.max(q.y), right: mid.cos() > 0.0 });
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid step must be positive, got {step}")));
    }
    Ok(())
}

/// Rasterizes `g` on a grid covering its bounding box plus a margin of two
/// empty cells. A cell is occupied iff its centre is inside (even-odd rule
/// with half-open edge spans).
pub fn rasterize(g: &ArcGon, step: f64) -> Result<Grid> {
    rasterize_loops(std::slice::from_ref(g), step)
}

/// Rasterizes the union of disjoint components.
pub fn rasterize_set(s: &RegionSet, step: f64) -> Result<Grid> {
    rasterize_loops(&s.components, step)
}

fn rasterize_loops(loops: &[ArcGon], step: f64) -> Result<Grid> {
    check_step(step)?;
    let bb = loops.iter().fold(BBox::empty(), |b, g| b.union(&g.bbox()));
    let span = bb.width().max(bb.height());
    if !(span / step >= MIN_CELLS) {
        return Err(Error::ResolutionTooCoarse(format!(
            "{:.1} cells across the domain, need at least {MIN_CELLS}",
            span / step
        )));
    }
    let origin = Point::new(bb.min.x - PAD as f64 * step, bb.min.y - PAD as f64 * step);
    let width = (bb.width() / step).ceil() as usize + 2 * PAD + 1;
    let height = (bb.height() / step).ceil() as usize + 2 * PAD + 1;
    Ok(rasterize_in(loops, origin, step, width, height))
}

/// Rasterizes onto a caller-chosen frame, so several regions can share
/// cells exactly. Parts outside the frame are clipped.
pub fn rasterize_in(loops: &[ArcGon], origin: Point, step: f64, width: usize, height: usize) -> Grid {
    let mut pieces = Vec::new();
    for g in loops {
        for e in g.edges() {
            monotone_pieces(e, &mut pieces);
        }
    }
    // bucket pieces by the rows whose centre line they span
    let row_of = |y: f64| ((y - origin.y) / step - 0.5).ceil();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); height];
    for (k, p) in pieces.iter().enumerate() {
        let (lo, hi) = p.y_range();
        let j0 = row_of(lo).max(0.0) as usize;
        let j1 = (row_of(hi).min(height as f64)).max(0.0) as usize;
        for row in rows.iter_mut().take(j1).skip(j0) {
            row.push(k);
        }
    }
    let occupancy: Vec<bool> = rows
        .par_iter()
        .enumerate()
        .flat_map_iter(|(j, ids)| {
            let y = origin.y + (j as f64 + 0.5) * step;
            let mut xs: Vec<f64> = ids
                .iter()
                .filter_map(|&k| {
                    let (lo, hi) = pieces[k].y_range();
                    (lo <= y && y < hi).then(|| pieces[k].x_at(y))
                })
                .collect();
            xs.sort_by(f64::total_cmp);
            let mut row = vec![false; width];
            for pair in xs.chunks_exact(2) {
                // cells with centre strictly inside [x0, x1)
                let i0 = ((pair[0] - origin.x) / step - 0.5).ceil().max(0.0) as usize;
                let i1 = (((pair[1] - origin.x) / step - 0.5).ceil().max(0.0) as usize).min(width);
                for cell in row.iter_mut().take(i1).skip(i0) {
                    *cell = true;
                }
            }
            row
        })
        .collect();
    Grid { origin, step, width, height, occupancy, distance: None }
}

/// Exact squared distance transform of a sampled function in one dimension
/// (lower envelope of parabolas).
fn dt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    let mut first = None;
    for q in 0..n {
        if f[q].is_finite() {
            first = Some(q);
            break;
        }
    }
    let Some(q0) = first else {
        d.fill(f64::INFINITY);
        return;
    };
    v[0] = q0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in q0 + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        let qf = q as f64;
        loop {
            let p = v[k] as f64;
            let s = ((f[q] + qf * qf) - (f[v[k]] + p * p)) / (2.0 * qf - 2.0 * p);
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let p = v[k] as f64;
        *dq = (qf - p) * (qf - p) + f[v[k]];
    }
}

/// Squared lattice distances (in cells²) from every cell to the nearest
/// unoccupied cell, by separable passes over columns then rows.
fn squared_dt(grid: &Grid) -> Vec<f64> {
    let (w, h) = (grid.width, grid.height);
    // column pass, stored column-major
    let cols: Vec<f64> = (0..w)
        .into_par_iter()
        .flat_map_iter(|i| {
            let f: Vec<f64> =
                (0..h).map(|j| if grid.occupancy[j * w + i] { f64::INFINITY } else { 0.0 }).collect();
            let mut d = vec![0.0; h];
            let mut v = vec![0usize; h];
            let mut z = vec![0.0; h + 1];
            dt_1d(&f, &mut d, &mut v, &mut z);
            d
        })
        .collect();
    (0..h)
        .into_par_iter()
        .flat_map_iter(|j| {
            let f: Vec<f64> = (0..w).map(|i| cols[i * h + j]).collect();
            let mut d = vec![0.0; w];
            let mut v = vec![0usize; w];
            let mut z = vec![0.0; w + 1];
            dt_1d(&f, &mut d, &mut v, &mut z);
            d
        })
        .collect()
}

/// Fills `grid.distance` with the Euclidean distance from each cell centre
/// to the nearest unoccupied cell centre (zero on unoccupied cells).
pub fn distance_transform(mut grid: Grid) -> Grid {
    let step = grid.step;
    grid.distance = Some(squared_dt(&grid).into_iter().map(|d2| d2.sqrt() * step).collect());
    grid
}

/// `step² · #{cells with distance > r}`.
pub fn grid_inner_area(grid: &Grid, r: f64) -> Result<f64> {
    let d = grid.distances()?;
    let n = d.par_iter().filter(|&&x| x > r).count();
    Ok(n as f64 * grid.step * grid.step)
}

/// Bisection root of `πr² − grid_inner_area(r)` on `[0, max distance]`.
/// Returns `(r, h = 1/r)`.
pub fn grid_cheeger(grid: &Grid, tol: f64) -> Result<(f64, f64)> {
    let d = grid.distances()?;
    let mut sorted: Vec<f64> = d.iter().copied().filter(|&x| x > 0.0).collect();
    if sorted.is_empty() {
        return Err(Error::EmptyRegion);
    }
    sorted.par_sort_unstable_by(f64::total_cmp);
    let cell = grid.step * grid.step;
    let f = |r: f64| {
        let above = sorted.len() - sorted.partition_point(|&x| x <= r);
        PI * r * r - above as f64 * cell
    };
    let (mut lo, mut hi) = (0.0, *sorted.last().unwrap());
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol * hi {
            break;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok((r, 1.0 / r))
}

/// Number of 4-connected components of `{distance > r}`.
pub fn grid_components(grid: &Grid, r: f64) -> Result<usize> {
    let d = grid.distances()?;
    let (w, h) = (grid.width, grid.height);
    let inside: Vec<bool> = d.iter().map(|&x| x > r).collect();
    let mut seen = vec![false; inside.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..inside.len() {
        if !inside[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        queue.push_back(s);
        while let Some(c) = queue.pop_front() {
            let (i, j) = (c % w, c / w);
            let mut visit = |n: usize| {
                if inside[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            };
            if i > 0 {
                visit(c - 1);
            }
            if i + 1 < w {
                visit(c + 1);
            }
            if j > 0 {
                visit(c - w);
            }
            if j + 1 < h {
                visit(c + w);
            }
        }
    }
    Ok(count)
}

/// Whether `{distance > r}` is 4-connected.
pub fn grid_connected(grid: &Grid, r: f64) -> Result<bool> {
    match grid_components(grid, r)? {
        0 => Err(Error::EmptyRegion),
        n => Ok(n == 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::shapes::standard_dumbbell;

    fn unit_square() -> ArcGon {
        ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn concave_and_convex_arcs() {
        let (a, b, c, d) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0));
        for k in [-1.9, -0.3, 0.3, 1.9] {
            let top = ArcGon::new(vec![ArcEdge::segment(a, b), ArcEdge::segment(b, c), ArcEdge::arc(c, d, k), ArcEdge::segment(d, a)]).unwrap();
            let side = ArcGon::new(vec![ArcEdge::segment(a, b), ArcEdge::arc(b, c, k), ArcEdge::segment(c, d), ArcEdge::segment(d, a)]).unwrap();
            for g in [top, side] {
                let step = 1.0 / 1024.0;
                assert!((rasterize(&g, step).unwrap().area() - g.area()).abs() < 0.1 * step);
            }
        }
    }

    #[test]
    fn square_and_disc_areas() {
        let g = rasterize(&unit_square(), 1.0 / 256.0).unwrap();
        assert!((g.area() - 1.0).abs() <= 4.0 / 256.0);
        let d = ArcGon::disc(Point::new(0.1, -0.3), 1.0).unwrap();
        let step = 1.0 / 512.0;
        let g = rasterize(&d, step).unwrap();
        assert!((g.area() - PI).abs() <= 2.0 * PI * step);
    }

    #[test]
    fn too_coarse() {
        assert!(matches!(rasterize(&unit_square(), 0.1), Err(Error::ResolutionTooCoarse(_))));
    }

    #[test]
    fn frame_outside_region_is_empty() {
        let g = rasterize_in(&[unit_square()], Point::new(5.0, 5.0), 0.01, 50, 50);
        assert_eq!(g.occupied_count(), 0);
    }

    #[test]
    fn half_plane_distances_are_row_indices() {
        let (w, h) = (7, 9);
        let occupancy = (0..w * h).map(|k| k / w >= 1).collect();
        let g = distance_transform(Grid { origin: Point::ORIGIN, step: 0.5, width: w, height: h, occupancy, distance: None });
        let d = g.distance.as_ref().unwrap();
        for j in 0..h {
            for i in 0..w {
                assert_eq!(d[j * w + i], j as f64 * 0.5);
            }
        }
    }

    #[test]
    fn single_cell_pattern() {
        let (w, h) = (5, 5);
        let occupancy = (0..w * h).map(|k| k == 12).collect();
        let g = distance_transform(Grid { origin: Point::ORIGIN, step: 1.0, width: w, height: h, occupancy, distance: None });
        let d = g.distance.unwrap();
        assert_eq!(d[12], 1.0);
        assert_eq!(d.iter().filter(|&&x| x > 0.0).count(), 1);
    }

    #[test]
    fn disc_erosion_and_cheeger() {
        let step = 1.0 / 256.0;
        let g = distance_transform(rasterize(&ArcGon::disc(Point::ORIGIN, 1.0).unwrap(), step).unwrap());
        let max = g.distance.as_ref().unwrap().iter().copied().fold(0.0, f64::max);
        assert!((max - 1.0).abs() <= step);
        let a = grid_inner_area(&g, 0.5).unwrap();
        assert!((a - PI / 4.0).abs() <= 4.0 * PI * step);
        let (_, h) = grid_cheeger(&g, 1e-12).unwrap();
        assert!((h - 2.0).abs() <= 4.0 * step);
    }

    #[test]
    fn square_cheeger() {
        let step = 1.0 / 512.0;
        let g = distance_transform(rasterize(&unit_square(), step).unwrap());
        let a = grid_inner_area(&g, 0.25).unwrap();
        assert!((a - 0.25).abs() <= 4.0 * step);
        let (_, h) = grid_cheeger(&g, 1e-12).unwrap();
        assert!((h - (2.0 + PI.sqrt())).abs() <= 8.0 * step);
    }

    #[test]
    fn connectivity() {
        let g = distance_transform(rasterize(&ArcGon::disc(Point::ORIGIN, 1.0).unwrap(), 1.0 / 128.0).unwrap());
        assert!(grid_connected(&g, 0.5).unwrap());
        assert!(matches!(grid_connected(&g, 2.0), Err(Error::EmptyRegion)));
        let db = distance_transform(rasterize(&standard_dumbbell(), 1.0 / 128.0).unwrap());
        assert!(!grid_connected(&db, 0.2).unwrap());
        assert_eq!(grid_components(&db, 0.2).unwrap(), 2);
    }

    #[test]
    fn dumps_have_expected_sizes() {
        let g = distance_transform(rasterize(&unit_square(), 1.0 / 32.0).unwrap());
        let mut pbm = Vec::new();
        g.write_pbm(&mut pbm).unwrap();
        let header = format!("P4\n{} {}\n", g.width, g.height);
        assert_eq!(pbm.len(), header.len() + g.width.div_ceil(8) * g.height);
        let mut pgm = Vec::new();
        g.write_pgm(&mut pgm).unwrap();
        let header = format!("P5\n{} {}\n65535\n", g.width, g.height);
        assert_eq!(pgm.len(), header.len() + 2 * g.width * g.height);
    }
}
