//! Builders for the sharp examples: the Lipschitz k-gon domain E(ϱ), the
//! C^{1,α} Cantor domain E(ℓ), their roots ϱ₀ and ℓ₀, the perturbed ambient
//! domains Ω_δ and the contact sets ∂E ∩ ∂Ω.

mod cantor_domain;
mod contact;
mod kgon;
mod perturb;
pub mod shapes;

use serde::{Deserialize, Serialize};

pub use cantor_domain::{build_cantor_domain, cantor_inner_area, solve_ell0, CantorDomainSpec};
pub use contact::{contact_set, top_side_fractions, ContactSet};
pub use kgon::{build_kgon_domain, critical_inner_area, inner_area_kgon, solve_rho0, KgonSpec, MIN_RHO};
pub use perturb::{
    bump, bump_deriv, cantor_delta_max, cantor_min_quarter_bump, kgon_delta_max, perturb_cantor, perturb_kgon,
    sector_delta_max,
};

use crate::arcgeom::ArcGon;
use crate::cantor::{DyadicSet, StaircaseParams};
use crate::error::Result;

/// Default residual tolerance for the ϱ₀ / ℓ₀ root solvers.
pub const ROOT_TOL: f64 = 1e-12;

/// The two sharp examples, with fully determined parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    Kgon(KgonSpec),
    Cantor(CantorDomainSpec),
}

impl DomainKind {
    pub fn h(&self) -> f64 {
        match self {
            DomainKind::Kgon(s) => s.h,
            DomainKind::Cantor(s) => s.params.h,
        }
    }

    pub fn build(&self) -> Result<ArcGon> {
        match self {
            DomainKind::Kgon(s) => build_kgon_domain(s),
            DomainKind::Cantor(s) => build_cantor_domain(s),
        }
    }

    pub fn delta_max(&self) -> Result<f64> {
        match self {
            DomainKind::Kgon(s) => Ok(kgon_delta_max(s)),
            DomainKind::Cantor(s) => cantor_delta_max(s),
        }
    }
}

/// A base domain E, its perturbed ambient domain Ω_δ and their contact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Perturbed {
    pub base: ArcGon,
    pub omega: ArcGon,
    pub delta: f64,
    pub delta_max: f64,
    pub contact_tol: f64,
    pub contact: ContactSet,
}

/// Builds Ω_δ around the example (δ defaults to δ_max/2) and extracts the
/// contact set.
pub fn build_perturbed_domain(kind: &DomainKind, delta: Option<f64>) -> Result<Perturbed> {
    let base = kind.build()?;
    let delta_max = kind.delta_max()?;
    let delta = delta.unwrap_or(0.5 * delta_max);
    let scale = base.bbox().diagonal();
    let (omega, contact_tol) = match kind {
        DomainKind::Kgon(s) => (perturb_kgon(s, delta)?, 1e-9 * scale),
        DomainKind::Cantor(s) => {
            // must separate the lowest raised gap from the touching intervals
            let tol = (0.1 * cantor_min_quarter_bump(s, delta)).clamp(1e-13 * scale, 1e-9 * scale);
            (perturb_cantor(s, delta, 0.1 * tol)?, tol)
        }
    };
    let contact = if delta == 0.0 {
        contact_set(&base, &base, contact_tol)?
    } else {
        contact_set(&base, &omega, contact_tol)?
    };
    Ok(Perturbed { base, omega, delta, delta_max, contact_tol, contact })
}

/// The k-gon example at its root ϱ₀.
pub fn sharp_kgon(k: u32, h: f64) -> Result<KgonSpec> {
    Ok(KgonSpec::new(k, h, solve_rho0(k, h, ROOT_TOL * (1.0 / (h * h)).max(1.0))?))
}

/// The Cantor example at its root ℓ₀.
pub fn sharp_cantor(tau: f64, n: u32, h: f64) -> Result<CantorDomainSpec> {
    let ell = solve_ell0(tau, n, h, 1e-11 / (h * h))?;
    Ok(CantorDomainSpec::new(StaircaseParams::new(h, ell, tau, n)))
}

/// Contact parameters on the top side of a Cantor pair as fractions of ℓ,
/// ready for box counting.
pub fn cantor_contact_fractions(spec: &CantorDomainSpec, pair: &Perturbed) -> DyadicSet {
    top_side_fractions(&pair.base, &pair.contact, spec.params.ell, spec.corner_radius)
}
