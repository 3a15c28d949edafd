//! Golden values: the unit disc has h = 2, the unit square h = 2 + √π.

use std::f64::consts::PI;

use cheeger_forge::arcgeom::{ArcGon, Point};
use cheeger_forge::solver::{cheeger_constant, cheeger_ratio, DEFAULT_TOL};

fn main() -> cheeger_forge::Result<()> {
    let disc = ArcGon::disc(Point::ORIGIN, 1.0)?;
    let s = cheeger_constant(&disc, DEFAULT_TOL)?;
    println!("disc:   h = {:.12}  (expected 2, residual {:.1e})", s.h, s.residual);

    let square = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0))?;
    let s = cheeger_constant(&square, DEFAULT_TOL)?;
    println!("square: h = {:.12}  (expected {:.12})", s.h, 2.0 + PI.sqrt());
    // the Cheeger set is the square with its corners rounded at radius 1/h
    println!(
        "        Cheeger set: {} edges, P/|E| = {:.12}, certified = {}",
        s.cheeger_set.len(),
        cheeger_ratio(&s.cheeger_set)?,
        s.no_neck_certified
    );
    Ok(())
}
