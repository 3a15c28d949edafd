//! Writes SVG figures of both sharp examples: ambient domain, Cheeger set,
//! inner parallel set and contact set.
//!
//! `cargo run --release --example render_figures -- [out-dir]`

use std::path::PathBuf;

use cheeger_forge::arcgeom::inner_parallel;
use cheeger_forge::constructions::{build_perturbed_domain, sharp_cantor, sharp_kgon, DomainKind};
use cheeger_forge::svg::{render, Layer, Style};

fn main() -> cheeger_forge::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let examples = [("kgon", DomainKind::Kgon(sharp_kgon(6, 1.0)?)), ("cantor", DomainKind::Cantor(sharp_cantor(1.0 / 3.0, 3, 1.0)?))];
    for (name, kind) in examples {
        let pair = build_perturbed_domain(&kind, None)?;
        // at exactly 1/H the Cantor erosion pinches to nothing; stay just inside
        let inner = inner_parallel(&pair.omega, 0.95 / kind.h())?;
        let layers = vec![
            Layer::loops("omega", Style::Domain, vec![pair.omega.clone()]),
            Layer::loops("cheeger-set", Style::Cheeger, vec![pair.base.clone()]),
            Layer::loops("inner-parallel", Style::Inner, inner.components),
            Layer::points("contact", pair.contact.points.clone()),
        ];
        let path = dir.join(format!("{name}.svg"));
        std::fs::write(&path, render(&layers)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
