//! Inner parallel sets, Minkowski dilation and the Steiner identities on a
//! rounded slot.

use cheeger_forge::arcgeom::{inner_parallel, minkowski_disc, ArcEdge, ArcGon, Point};
use cheeger_forge::solver::steiner_check;

fn main() -> cheeger_forge::Result<()> {
    // a 3×1 slot with semicircular ends, each end split into two quarter arcs
    let (a, b, c, d) = (Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(3.0, 1.0), Point::new(0.0, 1.0));
    let slot = ArcGon::new(vec![
        ArcEdge::segment(a, b),
        ArcEdge::arc(b, Point::new(3.5, 0.5), 2.0),
        ArcEdge::arc(Point::new(3.5, 0.5), c, 2.0),
        ArcEdge::segment(c, d),
        ArcEdge::arc(d, Point::new(-0.5, 0.5), 2.0),
        ArcEdge::arc(Point::new(-0.5, 0.5), a, 2.0),
    ])?;
    println!("slot: area {:.6}, perimeter {:.6}", slot.area(), slot.perimeter());

    for r in [0.1, 0.25, 0.4] {
        let er = inner_parallel(&slot, r)?;
        println!("  Ω^{r}: {} component(s), area {:.6}", er.components.len(), er.area());
        // a convex set is recovered by eroding then dilating
        let back = minkowski_disc(&er, r)?;
        println!("    opening recovers the area: {:.3e} off", (back.area() - slot.area()).abs());
    }

    let res = steiner_check(&slot, 0.3)?;
    println!("Steiner residuals at r = 0.3: area {:.1e}, perimeter {:.1e}", res.area, res.perimeter);
    Ok(())
}
