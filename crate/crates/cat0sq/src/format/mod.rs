//! Structured-text serialization, format version `cat0sq/1`.
//!
//! One document per file. The canonical form (the only form writers emit) is
//! byte-deterministic: cells sorted by id, two spaces of indentation per
//! nesting level, single spaces between tokens. Parsers are lenient about
//! extra whitespace, blank lines, and `#` comment lines; writers never emit
//! them. See FORMAT.md at the repository root for the grammar.

mod ball;
mod pointspec;

pub use ball::{ball_from_raw, load_ball, parse_ball, save_ball, write_ball, RawBall};
pub use pointspec::{parse_point, point_from_raw, point_from_spec, write_point, RawPoint};

use std::fmt::Write as _;
use std::path::Path;

use crate::complex::{RawComplex, RawCorner, RawEdge, RawSquare, SquareComplex};
use crate::error::{Error, Result};

pub(crate) fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Line-oriented cursor over a document: skips blanks and `#` comments,
/// keeps 1-based line numbers for errors.
pub(crate) struct LineCursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    pub fn new(text: &'a str) -> LineCursor<'a> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        LineCursor { lines, pos: 0 }
    }

    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let r = self.lines.get(self.pos).copied();
        if r.is_some() {
            self.pos += 1;
        }
        r
    }

    pub fn last_line_no(&self) -> usize {
        self.lines.last().map(|&(n, _)| n).unwrap_or(0)
    }

    /// Next line split into whitespace tokens; errors at EOF.
    pub fn tokens(&mut self, expecting: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.next_line() {
            Some((n, l)) => Ok((n, l.split_whitespace().collect())),
            None => Err(perr(
                self.last_line_no() + 1,
                format!("unexpected end of file, expected {expecting}"),
            )),
        }
    }

}

/// Reads a section header `<name> <count>` and returns the count.
pub(crate) fn section(cur: &mut LineCursor, name: &str) -> Result<usize> {
    let (n, toks) = cur.tokens(&format!("section `{name}`"))?;
    if toks.len() != 2 || toks[0] != name {
        return Err(perr(n, format!("expected `{name} <count>`, found `{}`", toks.join(" "))));
    }
    toks[1]
        .parse()
        .map_err(|_| perr(n, format!("bad count `{}` in section `{name}`", toks[1])))
}

pub(crate) fn parse_complex_body(cur: &mut LineCursor) -> Result<RawComplex> {
    let mut raw = RawComplex::default();
    let nv = section(cur, "vertices")?;
    for _ in 0..nv {
        let (n, toks) = cur.tokens("a vertex id")?;
        if toks.len() != 1 {
            return Err(perr(n, "vertex entry must be a single id"));
        }
        raw.vertices.push(toks[0].to_string());
    }
    let ne = section(cur, "edges")?;
    for _ in 0..ne {
        let (n, toks) = cur.tokens("an edge entry")?;
        if toks.len() != 3 {
            return Err(perr(n, "edge entry must be `<id> <end0> <end1>`"));
        }
        raw.edges.push(RawEdge {
            id: toks[0].to_string(),
            ends: [toks[1].to_string(), toks[2].to_string()],
        });
    }
    let ns = section(cur, "squares")?;
    for _ in 0..ns {
        let (n, toks) = cur.tokens("a square id")?;
        if toks.len() != 1 {
            return Err(perr(n, "square entry must start with a single id line"));
        }
        let id = toks[0].to_string();
        let mut corners = Vec::with_capacity(4);
        for k in 0..4 {
            let (n, toks) = cur.tokens("a corner record")?;
            if toks.len() != 3 {
                return Err(perr(
                    n,
                    format!("corner {k} of square `{id}` must be `<vertex> <in-edge> <out-edge>`"),
                ));
            }
            corners.push(RawCorner {
                vertex: toks[0].to_string(),
                edge_in: toks[1].to_string(),
                edge_out: toks[2].to_string(),
            });
        }
        raw.squares.push(RawSquare {
            id,
            corners: corners.try_into().unwrap(),
        });
    }
    Ok(raw)
}

pub(crate) fn write_complex_body(x: &SquareComplex, out: &mut String) {
    let raw = x.to_raw();
    let _ = writeln!(out, "vertices {}", raw.vertices.len());
    for v in &raw.vertices {
        let _ = writeln!(out, "  {v}");
    }
    let _ = writeln!(out, "edges {}", raw.edges.len());
    for e in &raw.edges {
        let _ = writeln!(out, "  {} {} {}", e.id, e.ends[0], e.ends[1]);
    }
    let _ = writeln!(out, "squares {}", raw.squares.len());
    for s in &raw.squares {
        let _ = writeln!(out, "  {}", s.id);
        for c in &s.corners {
            let _ = writeln!(out, "    {} {} {}", c.vertex, c.edge_in, c.edge_out);
        }
    }
}

fn expect_header(cur: &mut LineCursor, kind: &str) -> Result<()> {
    let (n, toks) = cur.tokens("the format header")?;
    if toks != vec!["cat0sq/1", kind] {
        return Err(perr(
            n,
            format!("expected header `cat0sq/1 {kind}`, found `{}`", toks.join(" ")),
        ));
    }
    Ok(())
}

fn expect_end(cur: &mut LineCursor) -> Result<()> {
    if let Some((n, l)) = cur.next_line() {
        return Err(perr(n, format!("trailing content `{l}` after document end")));
    }
    Ok(())
}

/// Parses a complex document into its raw (unvalidated) description.
pub fn parse_complex(text: &str) -> Result<RawComplex> {
    let mut cur = LineCursor::new(text);
    expect_header(&mut cur, "complex")?;
    let raw = parse_complex_body(&mut cur)?;
    expect_end(&mut cur)?;
    Ok(raw)
}

/// Canonical serialization of a complex.
pub fn write_complex(x: &SquareComplex) -> String {
    let mut out = String::from("cat0sq/1 complex\n");
    write_complex_body(x, &mut out);
    out
}

/// Loads and validates a complex file.
pub fn load_complex(path: impl AsRef<Path>) -> Result<SquareComplex> {
    let text = std::fs::read_to_string(path)?;
    SquareComplex::from_raw(&parse_complex(&text)?)
}

/// Saves a complex in canonical form.
pub fn save_complex(x: &SquareComplex, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_complex(x))?;
    Ok(())
}
