//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::io::Write;
use std::time::{Duration, Instant};

use cheeger_forge::arcgeom::{inner_parallel, ArcGon, Point};
use cheeger_forge::cantor::{alpha, estimate_dimension, staircase_eval, StaircaseParams};
use cheeger_forge::cmcprofile::{arc_angles, tangent_ball, u_arc_chain, QuadratureProfile};
use cheeger_forge::constructions::shapes::standard_dumbbell;
use cheeger_forge::constructions::{
    build_perturbed_domain, cantor_contact_fractions, sharp_cantor, sharp_kgon, solve_ell0, solve_rho0, DomainKind,
};
use cheeger_forge::gridoracle::{default_step, distance_transform, grid_cheeger, grid_inner_area, rasterize};
use cheeger_forge::solver::{cheeger_constant, steiner_check, verify_self_cheeger, DEFAULT_TOL};
use cheeger_forge::Error;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    if e <= limit {
        Ok(())
    } else {
        Err(format!("took {e:.1?}, limit {limit:?}"))
    }
}

fn unit_disc() -> ArcGon {
    ArcGon::disc(Point::ORIGIN, 1.0).unwrap()
}

fn unit_square() -> ArcGon {
    ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()
}

/// Domains exercised by the oracle and scaling criteria.
fn suite() -> Vec<(&'static str, ArcGon)> {
    let kgon = DomainKind::Kgon(sharp_kgon(6, 1.0).unwrap());
    let cantor = DomainKind::Cantor(sharp_cantor(1.0 / 3.0, 3, 1.0).unwrap());
    vec![
        ("disc", unit_disc()),
        ("square", unit_square()),
        ("dumbbell", standard_dumbbell()),
        ("kgon E", kgon.build().unwrap()),
        ("kgon Omega", build_perturbed_domain(&kgon, None).unwrap().omega),
        ("cantor E", cantor.build().unwrap()),
        ("cantor Omega", build_perturbed_domain(&cantor, None).unwrap().omega),
    ]
}

fn c1_disc() -> Outcome {
    let t = Instant::now();
    let s = cheeger_constant(&unit_disc(), DEFAULT_TOL).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1))?;
    check(
        (s.h - 2.0).abs() <= 1e-9 && s.residual <= 1e-9,
        format!("h = {:.12}, residual {:.1e}", s.h, s.residual),
    )
}

fn c2_square() -> Outcome {
    let t = Instant::now();
    let sq = unit_square();
    let s = cheeger_constant(&sq, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let g = distance_transform(rasterize(&sq, 1.0 / 1024.0).map_err(|e| e.to_string())?);
    let (_, hg) = grid_cheeger(&g, 1e-12).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(30))?;
    let want = 2.0 + PI.sqrt();
    check(
        (s.h - want).abs() <= 1e-8 && (hg - s.h).abs() <= 1e-2,
        format!("h = {:.12} (2+√π = {want:.12}), grid h = {hg:.6}", s.h),
    )
}

fn c3_kgon() -> Outcome {
    let t = Instant::now();
    let five = matches!(solve_rho0(5, 1.0, 1e-12), Err(Error::NoSolution(_)));
    let spec = sharp_kgon(6, 1.0).map_err(|e| e.to_string())?;
    let kind = DomainKind::Kgon(spec);
    let e = kind.build().map_err(|e| e.to_string())?;
    let rep = verify_self_cheeger(&e, 1000);
    let pair = build_perturbed_domain(&kind, None).map_err(|e| e.to_string())?;
    let s = cheeger_constant(&pair.omega, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let step = default_step(&pair.omega.bbox());
    let g = distance_transform(rasterize(&pair.omega, step).map_err(|e| e.to_string())?);
    let (_, hg) = grid_cheeger(&g, 1e-12).map_err(|e| e.to_string())?;
    let budget = 8.0 * step;
    within(t, Duration::from_secs(120))?;
    let contact = &pair.contact;
    check(
        five && rep.pass
            && (s.h - 1.0).abs() <= budget
            && (hg - 1.0).abs() <= budget
            && contact.points.len() == 6
            && contact.intervals_param.is_empty(),
        format!(
            "k=5 NoSolution: {five}; rho0 = {:.10}; self-Cheeger failures {}/1000; h(Omega_delta) = {:.12}, grid {hg:.6} (budget {budget:.1e}); contact points {}",
            spec.rho,
            rep.failures.len(),
            s.h,
            contact.points.len()
        ),
    )
}

fn c4_cantor() -> Outcome {
    let t = Instant::now();
    let tau = 1.0 / 3.0;
    let ell = solve_ell0(tau, 10, 1.0, 1e-11).map_err(|e| e.to_string())?;
    let spec = sharp_cantor(tau, 10, 1.0).map_err(|e| e.to_string())?;
    let pair = build_perturbed_domain(&DomainKind::Cantor(spec), None).map_err(|e| e.to_string())?;
    let d = estimate_dimension(&cantor_contact_fractions(&spec, &pair), 4, 10).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(300))?;
    let a = alpha(tau).unwrap();
    check(
        ell >= 1.0 / SQRT_2 && ell <= PI.sqrt() && (d.slope - a).abs() <= 0.08,
        format!("ell0 = {ell:.12} in [1/√2, √π]; slope {:.4} vs alpha {a:.4} (R² {:.4})", d.slope, d.r2),
    )
}

fn c5_profiles() -> Outcome {
    let t = Instant::now();
    let (mut flux, mut quad, mut balls, mut angle, mut central) = (0.0f64, 0.0f64, 0usize, 0.0f64, 0.0f64);
    let mut configs = 0;
    for tau in [0.2, 1.0 / 3.0, 0.5] {
        for n in [2u32, 4, 6] {
            for (h, ell) in [(1.0, 0.5), (2.0, 0.75), (0.5, 3.8)] {
                configs += 1;
                let p = StaircaseParams::new(h, ell, tau, n);
                let prof = u_arc_chain(&p).map_err(|e| e.to_string())?;
                for k in 0..10_000 {
                    let x = ell * (k as f64 + 0.5) / 1e4;
                    let want = staircase_eval(&p, x).unwrap() - h * x;
                    flux = flux.max((prof.chain_flux(x) - want).abs());
                }
                let qp = QuadratureProfile::new(&p, 1e-13).map_err(|e| e.to_string())?;
                for k in 0..=1000 {
                    let x = ell * k as f64 / 1000.0;
                    quad = quad.max((prof.u(x) - qp.u(x)).abs());
                }
                balls += (0..1000).filter(|k| !tangent_ball(&prof, ell * (*k as f64 + 0.5) / 1000.0).contained).count();
                let a = arc_angles(&prof).map_err(|e| e.to_string())?;
                angle = angle.max(a.max_noncentral);
                central = central.max((2.0 * (0.5 * a.central_angle).sin() - h * ell * tau).abs());
            }
        }
    }
    within(t, Duration::from_secs(180))?;
    check(
        flux <= 1e-10 && quad <= 1e-8 && balls == 0 && angle <= FRAC_PI_2 + 1e-9 && central <= 1e-12,
        format!(
            "{configs} configs: flux {flux:.1e}, chain vs quadrature {quad:.1e}, uncontained balls {balls}, max non-central angle {angle:.4}, central identity {central:.1e}"
        ),
    )
}

fn c6_steiner() -> Outcome {
    let kgon = DomainKind::Kgon(sharp_kgon(6, 1.0).unwrap());
    let cantor = DomainKind::Cantor(sharp_cantor(1.0 / 3.0, 6, 1.0).unwrap());
    let eroded = |k: &DomainKind| -> Result<ArcGon, String> {
        let er = inner_parallel(&k.build().map_err(|e| e.to_string())?, 1.0 / k.h()).map_err(|e| e.to_string())?;
        er.components.into_iter().next().ok_or_else(|| "empty erosion".to_string())
    };
    let cases = [
        ("disc", unit_disc(), 0.5),
        ("square", unit_square(), 0.3),
        ("E(rho0)^1", eroded(&kgon)?, 1.0),
        ("E(ell0)^1", eroded(&cantor)?, 1.0),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, g, r) in cases {
        let res = steiner_check(&g, r).map_err(|e| e.to_string())?;
        let m = res.area.max(res.perimeter);
        worst = worst.max(m);
        parts.push(format!("{name} {m:.1e}"));
    }
    check(worst <= 1e-8, format!("residuals: {}", parts.join(", ")))
}

fn c7_staircase() -> Outcome {
    let mut worst_eq = 0.0f64;
    let mut sign_ok = true;
    let mut bound_ok = true;
    let mut configs = 0;
    for (h, ell, tau, n) in [(1.0, 1.0, 1.0 / 3.0, 5), (2.0, 0.9, 0.2, 8), (0.5, 3.0, 0.6, 3), (1.0, 1.68, 1.0 / 3.0, 12)] {
        configs += 1;
        let p = StaircaseParams::new(h, ell, tau, n);
        let s = |x: f64| staircase_eval(&p, x).unwrap();
        // endpoint and midpoint values
        for (x, v) in [(0.0, 0.0), (ell, h * ell), (0.5 * ell, 0.5 * h * ell)] {
            worst_eq = worst_eq.max((s(x) - v).abs());
        }
        for k in 1..10_000 {
            let x = ell * k as f64 / 10_000.0;
            let d = s(x) - h * x;
            // sign on either half
            if 2 * k < 10_000 {
                sign_ok &= d > 0.0;
            } else if 2 * k > 10_000 {
                sign_ok &= d < 0.0;
            }
            // reflection
            worst_eq = worst_eq.max((s(x) - (h * ell - s(ell - x))).abs());
            // strict bound
            bound_ok &= d.abs() < 0.5 * h * ell;
        }
    }
    check(
        worst_eq <= 1e-12 && sign_ok && bound_ok,
        format!("{configs} configs × 10⁴ samples: equalities {worst_eq:.1e}, sign {sign_ok}, strict bound {bound_ok}"),
    )
}

/// Mean |exact − grid| erosion area over five radii spread below the
/// Cheeger radius.
fn erosion_discrepancy(g: &ArcGon, radii: &[f64], exact: &[f64], step: f64) -> Result<f64, String> {
    let grid = distance_transform(rasterize(g, step).map_err(|e| e.to_string())?);
    let mut sum = 0.0;
    for (r, a) in radii.iter().zip(exact) {
        sum += (grid_inner_area(&grid, *r).map_err(|e| e.to_string())? - a).abs();
    }
    Ok(sum / radii.len() as f64)
}

fn c8_oracle(suite: &[(&str, ArcGon)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g) in suite {
        let rc = cheeger_constant(g, DEFAULT_TOL).map_err(|e| e.to_string())?.r;
        let radii: Vec<f64> = (1..=5).map(|i| rc * i as f64 / 6.0).collect();
        let exact: Vec<f64> =
            radii.iter().map(|r| inner_parallel(g, *r).map(|s| s.area())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let s0 = g.bbox().diagonal() / 256.0;
        let mut d = Vec::new();
        for step in [s0, s0 / 2.0, s0 / 4.0] {
            let e = erosion_discrepancy(g, &radii, &exact, step)?;
            let raster = (rasterize(g, step).map_err(|e| e.to_string())?.area() - g.area()).abs();
            let bound = 2.0 * step * g.perimeter();
            ok &= e <= bound && raster <= bound;
            d.push(e);
        }
        // observed order over two refinements
        let order = 0.5 * (d[0] / d[2]).log2();
        ok &= order >= 0.9;
        parts.push(format!("{name}: ratios {:.2}/{:.2}, order {order:.2}", d[1] / d[0], d[2] / d[1]));
    }
    check(ok, parts.join("; "))
}

fn c9_scaling(suite: &[(&str, ArcGon)]) -> Outcome {
    let mut worst = 0.0f64;
    for (_, g) in suite {
        let h = cheeger_constant(g, DEFAULT_TOL).map_err(|e| e.to_string())?.h;
        for lambda in [0.5, 2.0, 10.0] {
            let tol = DEFAULT_TOL * lambda * lambda;
            let hl = cheeger_constant(&g.scaled(lambda), tol).map_err(|e| e.to_string())?.h;
            worst = worst.max((hl * lambda - h).abs() / h);
        }
    }
    check(worst <= 1e-6, format!("{} domains × λ ∈ {{0.5, 2, 10}}: worst relative deviation {worst:.1e}", suite.len()))
}

fn c10_contacts() -> Outcome {
    let mut counts = Vec::new();
    let kinds = [
        ("kgon k=6", DomainKind::Kgon(sharp_kgon(6, 1.0).unwrap())),
        ("kgon k=9", DomainKind::Kgon(sharp_kgon(9, 2.0).unwrap())),
        ("cantor n=3", DomainKind::Cantor(sharp_cantor(1.0 / 3.0, 3, 1.0).unwrap())),
        ("cantor n=5 tau=0.4", DomainKind::Cantor(sharp_cantor(0.4, 5, 1.5).unwrap())),
    ];
    let mut ok = true;
    for (name, k) in kinds {
        let c = build_perturbed_domain(&k, None).map_err(|e| e.to_string())?.contact.count();
        ok &= c >= 2;
        counts.push(format!("{name}: {c}"));
    }
    let db = cheeger_constant(&standard_dumbbell(), DEFAULT_TOL).map_err(|e| e.to_string())?;
    ok &= !db.no_neck_certified;
    check(ok, format!("contacts {}; dumbbell no_neck_certified = {}", counts.join(", "), db.no_neck_certified))
}

#[test]
fn acceptance() {
    let suite = suite();
    let results: Vec<(usize, Outcome)> = vec![
        (1, c1_disc()),
        (2, c2_square()),
        (3, c3_kgon()),
        (4, c4_cantor()),
        (5, c5_profiles()),
        (6, c6_steiner()),
        (7, c7_staircase()),
        (8, c8_oracle(&suite)),
        (9, c9_scaling(&suite)),
        (10, c10_contacts()),
    ];
    // straight to the handle: the harness only captures print! output, and
    // these lines should show up even when the run passes
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (n, r) in &results {
        let line = match r {
            Ok(d) => format!("criterion {n:2}: PASS  {d}"),
            Err(d) => {
                failed.push(*n);
                format!("criterion {n:2}: FAIL  {d}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
