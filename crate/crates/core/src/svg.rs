//! Deterministic SVG figures: arc-gons as path arc commands, contact points
//! as markers. Display only; nothing here feeds back into computation.

use std::fmt::Write as _;

use crate::arcgeom::{ArcGon, BBox, Point};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// ambient domain: dark outline
    Domain,
    /// Cheeger set: filled
    Cheeger,
    /// inner parallel set: dashed outline
    Inner,
    /// contact set: red markers and strokes
    Contact,
}

impl Style {
    fn attrs(self, w: f64) -> String {
        match self {
            Style::Domain => format!(r##"fill="none" stroke="#222" stroke-width="{}""##, num(w)),
            Style::Cheeger => format!(r##"fill="#9cc3e6" fill-opacity="0.6" stroke="#1f5f99" stroke-width="{}""##, num(w)),
            Style::Inner => {
                format!(r##"fill="none" stroke="#555" stroke-width="{}" stroke-dasharray="{} {}""##, num(w), num(4.0 * w), num(3.0 * w))
            }
            Style::Contact => format!(r##"fill="#d62728" stroke="#d62728" stroke-width="{}""##, num(2.0 * w)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub name: String,
    pub style: Style,
    pub loops: Vec<ArcGon>,
    pub points: Vec<Point>,
}

impl Layer {
    pub fn loops(name: &str, style: Style, loops: Vec<ArcGon>) -> Self {
        Layer { name: name.into(), style, loops, points: Vec::new() }
    }

    pub fn points(name: &str, points: Vec<Point>) -> Self {
        Layer { name: name.into(), style: Style::Contact, loops: Vec::new(), points }
    }

    fn bbox(&self) -> BBox {
        let mut bb = BBox::empty();
        for g in &self.loops {
            bb = bb.union(&g.bbox());
        }
        for p in &self.points {
            bb.include(*p);
        }
        bb
    }
}

/// Fixed six significant decimals after the point keeps output byte-stable.
fn num(x: f64) -> String {
    let s = format!("{:.6}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn pt(p: Point) -> String {
    // SVG's y axis points down
    format!("{} {}", num(p.x), num(-p.y))
}

/// Path data for one closed arc-gon. Arcs are minor, so the large-arc flag
/// is always 0; a left-turning arc becomes clockwise once y is flipped.
pub fn path_data(g: &ArcGon) -> String {
    let edges = g.edges();
    let mut d = String::new();
    if let Some(e0) = edges.first() {
        write!(d, "M {}", pt(e0.start)).unwrap();
    }
    for e in edges {
        if e.curvature == 0.0 {
            write!(d, " L {}", pt(e.end)).unwrap();
        } else {
            let r = 1.0 / e.curvature.abs();
            let sweep = if e.curvature > 0.0 { 0 } else { 1 };
            write!(d, " A {} {} 0 0 {} {}", num(r), num(r), sweep, pt(e.end)).unwrap();
        }
    }
    d.push_str(" Z");
    d
}

/// Renders the layers bottom to top. An empty layer list is a usage error.
pub fn render(layers: &[Layer]) -> Result<String> {
    if layers.is_empty() {
        return Err(Error::Usage("nothing to render: empty layer list".into()));
    }
    let mut bb = BBox::empty();
    for l in layers {
        bb = bb.union(&l.bbox());
    }
    if bb.is_empty() {
        return Err(Error::Usage("nothing to render: all layers are empty".into()));
    }
    let size = bb.width().max(bb.height()).max(1e-9);
    let bb = bb.expanded(0.05 * size);
    let w = 0.003 * size;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(bb.min.x),
        num(-bb.max.y),
        num(bb.width()),
        num(bb.height()),
        (800.0 * bb.height() / bb.width()).round() as i64
    )
    .unwrap();
    for l in layers {
        writeln!(s, r#"  <g id="{}" {}>"#, l.name, l.style.attrs(w)).unwrap();
        for g in &l.loops {
            writeln!(s, r#"    <path d="{}"/>"#, path_data(g)).unwrap();
        }
        for p in &l.points {
            writeln!(s, r#"    <circle cx="{}" cy="{}" r="{}"/>"#, num(p.x), num(-p.y), num(1.5 * w)).unwrap();
        }
        writeln!(s, "  </g>").unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcgeom::ArcEdge;

    #[test]
    fn square_path() {
        let sq = ArcGon::rectangle(Point::new(0.0, 0.0), Point::new(1.0, 2.0)).unwrap();
        assert_eq!(path_data(&sq), "M 0 0 L 1 0 L 1 -2 L 0 -2 L 0 0 Z");
    }

    #[test]
    fn arc_sweep_follows_curvature() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        let lens = ArcGon::new(vec![ArcEdge::arc(a, b, 1.0), ArcEdge::arc(b, a, 1.0)]).unwrap();
        let d = path_data(&lens);
        assert_eq!(d.matches(" A 1 1 0 0 0 ").count(), 2);
    }

    #[test]
    fn render_is_deterministic() {
        let d = ArcGon::disc(Point::new(0.0, 0.0), 1.0).unwrap();
        let layers = vec![
            Layer::loops("omega", Style::Domain, vec![d.clone()]),
            Layer::points("contact", vec![Point::new(1.0, 0.0)]),
        ];
        let a = render(&layers).unwrap();
        assert_eq!(a, render(&layers).unwrap());
        assert!(a.starts_with("<svg"));
        assert_eq!(a.matches("<g ").count(), 2);
        assert!(a.contains(r#"<circle cx="1" cy="0""#));
    }

    #[test]
    fn empty_is_usage_error() {
        assert!(matches!(render(&[]), Err(Error::Usage(_))));
        assert!(matches!(render(&[Layer::points("p", vec![])]), Err(Error::Usage(_))));
    }

    #[test]
    fn empty_layer_does_not_poison_viewbox() {
        let d = ArcGon::disc(Point::new(0.0, 0.0), 1.0).unwrap();
        let layers = vec![Layer::loops("omega", Style::Domain, vec![d]), Layer::loops("inner", Style::Inner, vec![])];
        let s = render(&layers).unwrap();
        assert!(s.contains(r#"viewBox="-1.1 -1.1 2.2 2.2""#), "{s}");
    }
}
