//! Box-counting dimension of Cantor stages against α(τ) = log 2 / log(2/(1−τ)).

use cheeger_forge::cantor::{alpha, cantor_stage, estimate_dimension, DyadicSet};

fn main() -> cheeger_forge::Result<()> {
    for tau in [1.0 / 3.0, 0.5, 0.2] {
        let st = cantor_stage(tau, 14)?;
        let d = estimate_dimension(&DyadicSet::Intervals(st.intervals.clone()), 4, 12)?;
        println!("tau = {tau:.4}: slope {:.4}, r2 {:.5}, alpha {:.4}", d.slope, d.r2, alpha(tau)?);
    }
    // sanity: a segment and a point
    let seg = DyadicSet::Intervals(vec![[0.0, 1.0]]);
    let pt = DyadicSet::Points(vec![0.3]);
    println!("segment {:.3}, point {:.3}", estimate_dimension(&seg, 2, 10)?.slope, estimate_dimension(&pt, 2, 10)?.slope);
    Ok(())
}
