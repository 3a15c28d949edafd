//! The raster oracle: distance transform, erosion areas and a grid Cheeger
//! solve compared with the exact engine, plus first-order convergence.

use cheeger_forge::arcgeom::{inner_parallel, ArcGon, Point};
use cheeger_forge::constructions::shapes::standard_dumbbell;
use cheeger_forge::gridoracle::{distance_transform, grid_cheeger, grid_connected, grid_inner_area, rasterize};
use cheeger_forge::solver::{cheeger_constant, DEFAULT_TOL};

fn main() -> cheeger_forge::Result<()> {
    let square = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0))?;
    let exact = cheeger_constant(&square, DEFAULT_TOL)?;
    let r = 0.2;
    let exact_area = inner_parallel(&square, r)?.area();
    for step in [1.0 / 256.0, 1.0 / 512.0, 1.0 / 1024.0] {
        let g = distance_transform(rasterize(&square, step)?);
        let (_, h) = grid_cheeger(&g, 1e-12)?;
        let a = grid_inner_area(&g, r)?;
        println!(
            "step 1/{:<4}: grid h = {h:.6} (exact {:.6}), |area error at r = {r}| = {:.2e}",
            (1.0 / step) as u32,
            exact.h,
            (a - exact_area).abs()
        );
    }

    let db = standard_dumbbell();
    let g = distance_transform(rasterize(&db, db.bbox().diagonal() / 1024.0)?);
    let sol = cheeger_constant(&db, DEFAULT_TOL)?;
    println!(
        "dumbbell: exact r = {:.6}, certified = {}, grid Ω^r connected = {}",
        sol.r,
        sol.no_neck_certified,
        grid_connected(&g, sol.r)?
    );

    let path = std::env::temp_dir().join("dumbbell.pbm");
    g.write_pbm(std::fs::File::create(&path)?)?;
    println!("occupancy written to {}", path.display());
    Ok(())
}
