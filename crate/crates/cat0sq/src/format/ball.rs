//! Ball documents: a developed ball together with its base complex and the
//! covering map between them, format version `cat0sq/1 ball`.
//!
//! Layout: `radius`, `center` and `whole` fields, the base complex body
//! under a `base` marker, the ball body under a `ball` marker, then three
//! `cover-*` sections listing the covering correspondence per cell. Square
//! correspondences carry the corner alignment as `<rot> <flip>`. Depths and
//! completeness are not stored; the loader re-derives them and re-checks
//! every development invariant, so a file that loads is a genuine ball.

use std::fmt::Write as _;
use std::path::Path;

use super::{parse_complex_body, perr, section, write_complex_body, LineCursor};
use crate::complex::{CellularMap, RawComplex, SquareComplex, D4};
use crate::cover::DevelopedBall;
use crate::error::{Error, Result};

/// An unvalidated ball document: names not yet resolved, maps not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawBall {
    pub radius: usize,
    pub center: String,
    pub whole: bool,
    pub base: RawComplex,
    pub ball: RawComplex,
    pub cover_vertices: Vec<(String, String)>,
    pub cover_edges: Vec<(String, String)>,
    pub cover_squares: Vec<(String, String, D4)>,
}

fn field<'a>(cur: &mut LineCursor<'a>, name: &str) -> Result<(usize, &'a str)> {
    let (n, toks) = cur.tokens(&format!("`{name} <value>`"))?;
    if toks.len() != 2 || toks[0] != name {
        return Err(perr(n, format!("expected `{name} <value>`, found `{}`", toks.join(" "))));
    }
    Ok((n, toks[1]))
}

fn marker(cur: &mut LineCursor, name: &str) -> Result<()> {
    let (n, toks) = cur.tokens(&format!("marker `{name}`"))?;
    if toks != vec![name] {
        return Err(perr(n, format!("expected marker `{name}`, found `{}`", toks.join(" "))));
    }
    Ok(())
}

fn pair_section(cur: &mut LineCursor, name: &str) -> Result<Vec<(String, String)>> {
    let count = section(cur, name)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, toks) = cur.tokens("a correspondence pair")?;
        if toks.len() != 2 {
            return Err(perr(n, format!("`{name}` entry must be `<ball-cell> <base-cell>`")));
        }
        out.push((toks[0].to_string(), toks[1].to_string()));
    }
    Ok(out)
}

pub(crate) fn parse_ball_body(cur: &mut LineCursor) -> Result<RawBall> {
    let mut raw = RawBall::default();

    let (n, tok) = field(cur, "radius")?;
    raw.radius = tok.parse().map_err(|_| perr(n, format!("bad radius `{tok}`")))?;
    let (_, tok) = field(cur, "center")?;
    raw.center = tok.to_string();
    let (n, tok) = field(cur, "whole")?;
    raw.whole = match tok {
        "0" => false,
        "1" => true,
        _ => return Err(perr(n, format!("`whole` must be 0 or 1, found `{tok}`"))),
    };

    marker(cur, "base")?;
    raw.base = parse_complex_body(cur)?;
    marker(cur, "ball")?;
    raw.ball = parse_complex_body(cur)?;

    raw.cover_vertices = pair_section(cur, "cover-vertices")?;
    raw.cover_edges = pair_section(cur, "cover-edges")?;
    let count = section(cur, "cover-squares")?;
    for _ in 0..count {
        let (n, toks) = cur.tokens("a square correspondence")?;
        if toks.len() != 4 {
            return Err(perr(
                n,
                "`cover-squares` entry must be `<ball-square> <base-square> <rot> <flip>`",
            ));
        }
        let rot: u8 = toks[2]
            .parse()
            .ok()
            .filter(|&r| r < 4)
            .ok_or_else(|| perr(n, format!("rotation must be 0..3, found `{}`", toks[2])))?;
        let flip = match toks[3] {
            "0" => false,
            "1" => true,
            _ => return Err(perr(n, format!("flip must be 0 or 1, found `{}`", toks[3]))),
        };
        raw.cover_squares
            .push((toks[0].to_string(), toks[1].to_string(), D4::new(rot, flip)));
    }
    Ok(raw)
}

/// Parses a ball document into its raw (unvalidated) description.
pub fn parse_ball(text: &str) -> Result<RawBall> {
    let mut cur = LineCursor::new(text);
    super::expect_header(&mut cur, "ball")?;
    let raw = parse_ball_body(&mut cur)?;
    super::expect_end(&mut cur)?;
    Ok(raw)
}

/// Validates a raw ball document: builds both complexes, resolves the
/// covering by name, then re-runs the development checks.
pub fn ball_from_raw(raw: &RawBall) -> Result<DevelopedBall> {
    let base = SquareComplex::from_raw(&raw.base)?;
    let ball = SquareComplex::from_raw(&raw.ball)?;
    let center = ball
        .vertex_by_name(&raw.center)
        .ok_or_else(|| Error::Domain(format!("center `{}` is not a ball vertex", raw.center)))?;

    let misses = |kind: &str, name: &str| Error::Domain(format!("unknown {kind} `{name}` in the covering"));
    let twice = |kind: &str, name: &str| Error::Domain(format!("ball {kind} `{name}` is mapped twice"));

    let mut covering = CellularMap::default();
    for (a, b) in &raw.cover_vertices {
        let va = ball.vertex_by_name(a).ok_or_else(|| misses("ball vertex", a))?;
        let vb = base.vertex_by_name(b).ok_or_else(|| misses("base vertex", b))?;
        if covering.v.insert(va, vb).is_some() {
            return Err(twice("vertex", a));
        }
    }
    for (a, b) in &raw.cover_edges {
        let ea = ball.edge_by_name(a).ok_or_else(|| misses("ball edge", a))?;
        let eb = base.edge_by_name(b).ok_or_else(|| misses("base edge", b))?;
        if covering.e.insert(ea, eb).is_some() {
            return Err(twice("edge", a));
        }
    }
    for (a, b, sym) in &raw.cover_squares {
        let sa = ball.square_by_name(a).ok_or_else(|| misses("ball square", a))?;
        let sb = base.square_by_name(b).ok_or_else(|| misses("base square", b))?;
        if covering.s.insert(sa, (sb, *sym)).is_some() {
            return Err(twice("square", a));
        }
    }

    crate::cover::assemble_ball(ball, base, center, raw.radius, covering, raw.whole)
}

/// Canonical serialization of a developed ball.
pub fn write_ball(b: &DevelopedBall) -> String {
    let ball = b.ball();
    let base = b.base();
    let f = b.covering();
    let mut out = String::from("cat0sq/1 ball\n");
    let _ = writeln!(out, "radius {}", b.radius());
    let _ = writeln!(out, "center {}", ball.vertex_name(b.center()));
    let _ = writeln!(out, "whole {}", b.is_whole() as u8);
    out.push_str("base\n");
    write_complex_body(base, &mut out);
    out.push_str("ball\n");
    write_complex_body(ball, &mut out);
    let _ = writeln!(out, "cover-vertices {}", f.v.len());
    for (&v, &tv) in &f.v {
        let _ = writeln!(out, "  {} {}", ball.vertex_name(v), base.vertex_name(tv));
    }
    let _ = writeln!(out, "cover-edges {}", f.e.len());
    for (&e, &te) in &f.e {
        let _ = writeln!(out, "  {} {}", ball.edge_name(e), base.edge_name(te));
    }
    let _ = writeln!(out, "cover-squares {}", f.s.len());
    for (&s, &(ts, sym)) in &f.s {
        let _ = writeln!(
            out,
            "  {} {} {} {}",
            ball.square_name(s),
            base.square_name(ts),
            sym.rot,
            sym.flip as u8
        );
    }
    out
}

/// Loads and fully revalidates a ball file.
pub fn load_ball(path: impl AsRef<Path>) -> Result<DevelopedBall> {
    let text = std::fs::read_to_string(path)?;
    ball_from_raw(&parse_ball(&text)?)
}

/// Saves a ball in canonical form.
pub fn save_ball(b: &DevelopedBall, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_ball(b))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cover::{develop, from_simply_connected};

    #[test]
    fn ball_round_trip_is_canonical() {
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v01x02").unwrap();
        let b = develop(&base, c, 4).unwrap();
        let text = write_ball(&b);
        let loaded = ball_from_raw(&parse_ball(&text).unwrap()).unwrap();
        assert_eq!(write_ball(&loaded), text);
        assert_eq!(loaded.radius(), 4);
        assert!(!loaded.is_whole());
        assert_eq!(loaded.max_depth(), b.max_depth());
    }

    #[test]
    fn whole_flag_survives_and_is_verified() {
        let x = corpus::grid(3);
        let c = x.vertex_by_name("v00x00").unwrap();
        let b = from_simply_connected(&x, c).unwrap();
        let text = write_ball(&b);
        let loaded = ball_from_raw(&parse_ball(&text).unwrap()).unwrap();
        assert!(loaded.is_whole());
        assert!(loaded.complete_vertex(loaded.center()));

        // A truncated ball cannot claim to be the whole space.
        let b = develop(&corpus::torus3x3(), c, 3).unwrap();
        let lying = write_ball(&b).replace("whole 0", "whole 1");
        assert!(ball_from_raw(&parse_ball(&lying).unwrap()).is_err());
    }

    #[test]
    fn tampered_covering_is_rejected() {
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v00x00").unwrap();
        let good = parse_ball(&write_ball(&develop(&base, c, 3).unwrap())).unwrap();
        assert!(ball_from_raw(&good).is_ok());

        // Swapping two base images breaks incidence somewhere.
        let mut swapped = good.clone();
        let img = swapped.cover_vertices[1].1.clone();
        swapped.cover_vertices[0].1 = img;
        assert!(ball_from_raw(&swapped).is_err());

        // Dropping an entry leaves the covering partial.
        let mut short = good.clone();
        short.cover_edges.pop();
        assert!(ball_from_raw(&short).is_err());

        // A flipped square alignment no longer matches the corner chain.
        let mut twisted = good.clone();
        twisted.cover_squares[0].2 = D4::new(1, true);
        assert!(ball_from_raw(&twisted).is_err());
    }

    #[test]
    fn stored_radius_is_verified() {
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v00x00").unwrap();
        let text = write_ball(&develop(&base, c, 3).unwrap());
        for wrong in ["radius 2", "radius 4", "radius 9"] {
            let doc = text.replacen("radius 3", wrong, 1);
            assert!(
                ball_from_raw(&parse_ball(&doc).unwrap()).is_err(),
                "accepted {wrong}"
            );
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_ball("cat0sq/1 complex\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let err = parse_ball("cat0sq/1 ball\nradius x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let text = "cat0sq/1 ball\nradius 1\ncenter a\nwhole 2\n";
        let err = parse_ball(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn unknown_center_is_reported() {
        let base = corpus::torus3x3();
        let c = base.vertex_by_name("v00x00").unwrap();
        let text = write_ball(&develop(&base, c, 2).unwrap());
        let doc = text.replacen("center v00000", "center nowhere", 1);
        let err = ball_from_raw(&parse_ball(&doc).unwrap()).unwrap_err();
        assert!(err.to_string().contains("nowhere"), "{err}");
    }
}
