//! The CMC staircase profile: flux identity, arc chain vs quadrature,
//! tangent balls and arc angles.

use std::f64::consts::FRAC_PI_2;

use cheeger_forge::cantor::StaircaseParams;
use cheeger_forge::cmcprofile::{arc_angles, tangent_ball, u_arc_chain, QuadratureProfile};

fn main() -> cheeger_forge::Result<()> {
    let p = StaircaseParams::new(1.0, 1.5, 0.3, 5);
    let prof = u_arc_chain(&p)?;
    let quad = QuadratureProfile::new(&p, 1e-12)?;
    let stair = prof.staircase();

    let (mut flux_err, mut quad_err, mut balls_ok) = (0.0f64, 0.0f64, true);
    let samples = 2000;
    for k in 0..samples {
        let t = p.ell * (k as f64 + 0.5) / samples as f64;
        let du = prof.du(t);
        flux_err = flux_err.max((du / (1.0 + du * du).sqrt() - (stair.eval(t) - p.h * t)).abs());
        quad_err = quad_err.max((prof.u(t) - quad.u(t)).abs());
        if k % 20 == 0 {
            balls_ok &= tangent_ball(&prof, t).contained;
        }
    }
    println!("{} arcs; flux identity error {flux_err:.1e}; chain vs quadrature {quad_err:.1e}", prof.arc_chain.len());
    println!("tangent balls of radius 1/H below the graph: {}", if balls_ok { "all contained" } else { "FAIL" });

    let a = arc_angles(&prof)?;
    let central = 2.0 * (0.5 * a.central_angle).sin();
    println!(
        "largest non-central angle {:.6} (≤ π/2 = {:.6}); 2 sin(β/2) = {:.15} vs Hℓτ = {:.15}",
        a.max_noncentral,
        FRAC_PI_2,
        central,
        p.h * p.ell * p.tau
    );
    Ok(())
}
