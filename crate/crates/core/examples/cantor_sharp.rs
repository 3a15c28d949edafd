//! The C^{1,α} example: a square with CMC staircase sides whose contact set
//! with the perturbed ambient domain is a Cantor set.
//!
//! `cargo run --release --example cantor_sharp -- [n]` (default n = 3).

use cheeger_forge::cantor::{alpha, estimate_dimension};
use cheeger_forge::constructions::{build_perturbed_domain, cantor_contact_fractions, sharp_cantor, DomainKind};
use cheeger_forge::solver::{cheeger_constant, DEFAULT_TOL};

fn main() -> cheeger_forge::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let tau = 1.0 / 3.0;
    let spec = sharp_cantor(tau, n, 1.0)?;
    println!("tau = 1/3, n = {n}: ell0 = {:.12}", spec.params.ell);

    let kind = DomainKind::Cantor(spec);
    let pair = build_perturbed_domain(&kind, None)?;
    println!(
        "E has {} edges; Omega_delta (delta = {:.3e}) has {}; contact: {} elements, length {:.6}",
        pair.base.len(),
        pair.delta,
        pair.omega.len(),
        pair.contact.count(),
        pair.contact.total_length()
    );

    let fr = cantor_contact_fractions(&spec, &pair);
    let jmax = (2 * n).clamp(6, 12);
    let d = estimate_dimension(&fr, 2, jmax)?;
    println!("box-count slope over j = 2..={jmax}: {:.4} (alpha = {:.4})", d.slope, alpha(tau)?);

    let sol = cheeger_constant(&pair.omega, DEFAULT_TOL)?;
    println!("h(Omega_delta) = {:.12}, certified = {}", sol.h, sol.no_neck_certified);
    Ok(())
}
