//! The Lipschitz example: a k-gon of circular arcs that is its own Cheeger
//! set, touching a perturbed ambient domain at exactly k points.

use cheeger_forge::constructions::{build_perturbed_domain, sharp_kgon, solve_rho0, DomainKind};
use cheeger_forge::solver::{cheeger_constant, cheeger_ratio, verify_self_cheeger, DEFAULT_TOL};

fn main() -> cheeger_forge::Result<()> {
    let h = 1.0;
    match solve_rho0(5, h, 1e-12) {
        Err(e) => println!("k = 5: {e}"),
        Ok(rho) => println!("k = 5: unexpected root {rho}"),
    }

    for k in [6, 8, 12] {
        let spec = sharp_kgon(k, h)?;
        let kind = DomainKind::Kgon(spec);
        let e = kind.build()?;
        let rep = verify_self_cheeger(&e, 1000);
        let pair = build_perturbed_domain(&kind, None)?;
        let sol = cheeger_constant(&pair.omega, DEFAULT_TOL)?;
        println!(
            "k = {k:2}: rho0 = {:.12}  P/|E| = {:.12}  self-Cheeger {}  h(Omega_delta) = {:.12}  contacts = {}",
            spec.rho,
            cheeger_ratio(&e)?,
            if rep.pass { "yes" } else { "NO" },
            sol.h,
            pair.contact.count()
        );
    }
    Ok(())
}
