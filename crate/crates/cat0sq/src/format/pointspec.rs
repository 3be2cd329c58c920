//! Point specs: the one-token grammar naming a point of a complex.
//!
//! `v:<id>` names a vertex, `e:<id>:<t>` a point at parameter `t` along an
//! edge, `s:<id>:<x>,<y>` a point in unit-square coordinates; `t`, `x`, `y`
//! are rational literals (`p` or `p/q`). Specs appear on the command line
//! and as breakpoints inside axis documents.

use crate::complex::SquareComplex;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::rational::{format_q, parse_q, Q};

/// A parsed but unresolved point spec: the cell is still a name and the
/// coordinates are unchecked against any complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawPoint {
    Vertex(String),
    Edge(String, Q),
    Square(String, Q, Q),
}

fn bad(spec: &str, why: &str) -> Error {
    Error::Domain(format!("bad point spec `{spec}`: {why}"))
}

/// Parses the spec grammar without resolving names. Cell ids may themselves
/// contain `:`, so coordinates are split off from the right.
pub fn parse_point(spec: &str) -> Result<RawPoint> {
    let spec = spec.trim();
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected a `v:`, `e:` or `s:` prefix"))?;
    match kind {
        "v" => {
            if rest.is_empty() {
                return Err(bad(spec, "empty vertex id"));
            }
            Ok(RawPoint::Vertex(rest.to_string()))
        }
        "e" => {
            let (id, t) = rest
                .rsplit_once(':')
                .filter(|(id, _)| !id.is_empty())
                .ok_or_else(|| bad(spec, "edge form is `e:<id>:<t>`"))?;
            let t = parse_q(t).ok_or_else(|| bad(spec, "bad rational parameter"))?;
            Ok(RawPoint::Edge(id.to_string(), t))
        }
        "s" => {
            let (id, coords) = rest
                .rsplit_once(':')
                .filter(|(id, _)| !id.is_empty())
                .ok_or_else(|| bad(spec, "square form is `s:<id>:<x>,<y>`"))?;
            let (xs, ys) = coords
                .split_once(',')
                .ok_or_else(|| bad(spec, "square coordinates are `<x>,<y>`"))?;
            let px = parse_q(xs).ok_or_else(|| bad(spec, "bad rational coordinate"))?;
            let py = parse_q(ys).ok_or_else(|| bad(spec, "bad rational coordinate"))?;
            Ok(RawPoint::Square(id.to_string(), px, py))
        }
        _ => Err(bad(spec, "unknown kind, expected `v`, `e` or `s`")),
    }
}

/// Resolves a raw spec against a complex. Boundary coordinates collapse to
/// the open cell that actually contains the point.
pub fn point_from_raw(x: &SquareComplex, raw: &RawPoint) -> Result<Point> {
    match raw {
        RawPoint::Vertex(name) => {
            let v = x
                .vertex_by_name(name)
                .ok_or_else(|| Error::UnknownCell(name.clone()))?;
            Ok(Point::vertex(v))
        }
        RawPoint::Edge(name, t) => {
            let e = x
                .edge_by_name(name)
                .ok_or_else(|| Error::UnknownCell(name.clone()))?;
            Point::on_edge(x, e, t.clone())
        }
        RawPoint::Square(name, px, py) => {
            let s = x
                .square_by_name(name)
                .ok_or_else(|| Error::UnknownCell(name.clone()))?;
            Point::in_square(x, s, px.clone(), py.clone())
        }
    }
}

/// Parses and resolves in one step.
pub fn point_from_spec(x: &SquareComplex, spec: &str) -> Result<Point> {
    point_from_raw(x, &parse_point(spec)?)
}

/// Renders a point in the same grammar `parse_point` accepts. Points are
/// kept in normal form, so the output never names a boundary coordinate.
pub fn write_point(x: &SquareComplex, p: &Point) -> String {
    match p {
        Point::Vertex(v) => format!("v:{}", x.vertex_name(*v)),
        Point::Edge(e, t) => format!("e:{}:{}", x.edge_name(*e), format_q(t)),
        Point::Square(s, px, py) => {
            format!("s:{}:{},{}", x.square_name(*s), format_q(px), format_q(py))
        }
    }
}
