//! The polygonal axioms for square complexes.
//!
//! The load-bearing axiom is "two closed cells meet in at most one closed
//! cell". It rules out doubled edges, squares sharing two edges (or an edge
//! plus a stray vertex, or two vertices without an edge), and edges running
//! as chords between two corners of a square. Together with embedded square
//! boundaries it forces every vertex link to be a simple graph, which the
//! link and curvature machinery silently relies on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::RawComplex;

pub const AX_DUPLICATE_ID: &str = "duplicate-id";
pub const AX_UNRESOLVED: &str = "unresolved-reference";
pub const AX_EDGE_ENDPOINTS: &str = "edge-endpoints-distinct";
pub const AX_CORNER_CHAIN: &str = "corner-chain";
pub const AX_BOUNDARY_EMBEDDED: &str = "square-boundary-embedded";
pub const AX_CELLS_MEET_ONCE: &str = "cells-meet-once";

/// One axiom violation: stable axiom id, the offending cell ids, and a
/// human-readable description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub cells: Vec<String>,
    pub message: String,
}

/// Outcome of [`validate`]: passes iff no violations were found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Sorted, deduplicated list of violated axiom ids.
    pub fn violated_axioms(&self) -> Vec<&'static str> {
        let set: BTreeSet<&'static str> = self.violations.iter().map(|v| v.axiom).collect();
        set.into_iter().collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; [{}] {}", v.axiom, v.message)?;
        }
        Ok(())
    }
}

/// Checks every polygonal axiom on a raw description and reports all
/// violations found. Deterministic: identical input yields an identical
/// report. A passing report guarantees [`super::SquareComplex::from_raw`]
/// succeeds.
pub fn validate(raw: &RawComplex) -> ValidationReport {
    let mut out: Vec<Violation> = Vec::new();

    check_duplicates(raw, &mut out);

    // Resolution maps (first occurrence wins when ids are duplicated, so the
    // remaining checks still run on a best-effort interpretation).
    let vmap: BTreeMap<&str, usize> = index_first(raw.vertices.iter().map(|s| s.as_str()));
    let emap: BTreeMap<&str, usize> = index_first(raw.edges.iter().map(|e| e.id.as_str()));

    // Edges with resolved, recorded endpoints.
    let mut edge_ends: Vec<Option<[usize; 2]>> = vec![None; raw.edges.len()];
    for (i, e) in raw.edges.iter().enumerate() {
        let mut ends = [0usize; 2];
        let mut ok = true;
        for (slot, name) in e.ends.iter().enumerate() {
            match vmap.get(name.as_str()) {
                Some(&v) => ends[slot] = v,
                None => {
                    ok = false;
                    out.push(Violation {
                        axiom: AX_UNRESOLVED,
                        cells: vec![e.id.clone(), name.clone()],
                        message: format!("edge `{}` references unknown vertex `{}`", e.id, name),
                    });
                }
            }
        }
        if ok {
            edge_ends[i] = Some(ends);
            if ends[0] == ends[1] {
                out.push(Violation {
                    axiom: AX_EDGE_ENDPOINTS,
                    cells: vec![e.id.clone()],
                    message: format!(
                        "edge `{}` has equal endpoints `{}` (attaching map must be injective)",
                        e.id, e.ends[0]
                    ),
                });
            }
        }
    }

    // Squares with resolved corners and sides (sides = out-edges).
    struct RSquare {
        raw: usize,
        corners: [usize; 4],
        sides: [usize; 4],
    }
    let mut rsquares: Vec<RSquare> = Vec::new();
    for (i, s) in raw.squares.iter().enumerate() {
        let mut corners = [0usize; 4];
        let mut sides = [0usize; 4];
        let mut ins = [0usize; 4];
        let mut ok = true;
        for k in 0..4 {
            let c = &s.corners[k];
            match vmap.get(c.vertex.as_str()) {
                Some(&v) => corners[k] = v,
                None => {
                    ok = false;
                    out.push(Violation {
                        axiom: AX_UNRESOLVED,
                        cells: vec![s.id.clone(), c.vertex.clone()],
                        message: format!(
                            "square `{}` references unknown vertex `{}`",
                            s.id, c.vertex
                        ),
                    });
                }
            }
            for name in [&c.edge_in, &c.edge_out] {
                if !emap.contains_key(name.as_str()) {
                    ok = false;
                    out.push(Violation {
                        axiom: AX_UNRESOLVED,
                        cells: vec![s.id.clone(), name.clone()],
                        message: format!("square `{}` references unknown edge `{}`", s.id, name),
                    });
                }
            }
            if ok {
                sides[k] = emap[s.corners[k].edge_out.as_str()];
                ins[k] = emap[s.corners[k].edge_in.as_str()];
            }
        }
        if !ok {
            continue;
        }

        // Corner chain: out-edge of corner k is the in-edge of corner k+1,
        // and that edge joins exactly the two corner vertices.
        let mut chain_ok = true;
        for k in 0..4 {
            if sides[k] != ins[(k + 1) % 4] {
                chain_ok = false;
                out.push(Violation {
                    axiom: AX_CORNER_CHAIN,
                    cells: vec![s.id.clone()],
                    message: format!(
                        "square `{}`: corner {} leaves via `{}` but corner {} enters via `{}`",
                        s.id,
                        k,
                        raw.edges[sides[k]].id,
                        (k + 1) % 4,
                        raw.edges[ins[(k + 1) % 4]].id
                    ),
                });
            }
            if let Some(ends) = edge_ends[sides[k]] {
                let want = [corners[k], corners[(k + 1) % 4]];
                if !(ends == want || ends == [want[1], want[0]]) {
                    chain_ok = false;
                    out.push(Violation {
                        axiom: AX_CORNER_CHAIN,
                        cells: vec![s.id.clone(), raw.edges[sides[k]].id.clone()],
                        message: format!(
                            "square `{}`: side `{}` does not join corners {} and {}",
                            s.id,
                            raw.edges[sides[k]].id,
                            k,
                            (k + 1) % 4
                        ),
                    });
                }
            }
        }

        // Embedded boundary: 4 distinct corner vertices, 4 distinct sides.
        let vset: BTreeSet<usize> = corners.iter().copied().collect();
        let eset: BTreeSet<usize> = sides.iter().copied().collect();
        if vset.len() != 4 || eset.len() != 4 {
            out.push(Violation {
                axiom: AX_BOUNDARY_EMBEDDED,
                cells: vec![s.id.clone()],
                message: format!(
                    "square `{}` boundary is not an embedded 4-cycle ({} distinct vertices, {} distinct edges)",
                    s.id,
                    vset.len(),
                    eset.len()
                ),
            });
        }

        if chain_ok {
            rsquares.push(RSquare {
                raw: i,
                corners,
                sides,
            });
        }
    }

    // --- cells-meet-once ---

    // Edges sharing the same unordered endpoint pair.
    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, ends) in edge_ends.iter().enumerate() {
        if let Some([a, b]) = ends {
            by_pair
                .entry((*a.min(b), *a.max(b)))
                .or_default()
                .push(i);
        }
    }
    for ((_, _), group) in by_pair.iter() {
        if group.len() > 1 {
            let ids: Vec<String> = group.iter().map(|&i| raw.edges[i].id.clone()).collect();
            out.push(Violation {
                axiom: AX_CELLS_MEET_ONCE,
                cells: ids.clone(),
                message: format!(
                    "edges {} share both endpoints (closed cells meet in two vertices)",
                    ids.join(", ")
                ),
            });
        }
    }

    // Index squares by side edge and by corner vertex.
    let mut sq_at_edge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut sq_at_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (si, rs) in rsquares.iter().enumerate() {
        for &e in &rs.sides {
            let list = sq_at_edge.entry(e).or_default();
            if !list.contains(&si) {
                list.push(si);
            }
        }
        for &v in &rs.corners {
            let list = sq_at_vertex.entry(v).or_default();
            if !list.contains(&si) {
                list.push(si);
            }
        }
    }

    // Candidate square pairs: those sharing at least one vertex (sharing an
    // edge implies sharing its endpoints, so this catches everything).
    let mut candidates: BTreeSet<(usize, usize)> = BTreeSet::new();
    for list in sq_at_vertex.values() {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                candidates.insert((list[i].min(list[j]), list[i].max(list[j])));
            }
        }
    }
    for (i, j) in candidates {
        let (a, b) = (&rsquares[i], &rsquares[j]);
        let ea: BTreeSet<usize> = a.sides.iter().copied().collect();
        let eb: BTreeSet<usize> = b.sides.iter().copied().collect();
        let shared_edges: Vec<usize> = ea.intersection(&eb).copied().collect();
        let va: BTreeSet<usize> = a.corners.iter().copied().collect();
        let vb: BTreeSet<usize> = b.corners.iter().copied().collect();
        let shared_vertices: Vec<usize> = va.intersection(&vb).copied().collect();
        let ida = &raw.squares[a.raw].id;
        let idb = &raw.squares[b.raw].id;
        let bad = match shared_edges.len() {
            0 => shared_vertices.len() > 1,
            1 => shared_vertices.len() > 2,
            _ => true,
        };
        if bad {
            out.push(Violation {
                axiom: AX_CELLS_MEET_ONCE,
                cells: vec![ida.clone(), idb.clone()],
                message: format!(
                    "squares `{ida}` and `{idb}` meet in {} shared edge(s) and {} shared vertice(s)",
                    shared_edges.len(),
                    shared_vertices.len()
                ),
            });
        }
    }

    // Edge running as a chord of a square: both endpoints are corners but
    // the edge is not a side.
    for (ei, ends) in edge_ends.iter().enumerate() {
        let Some([u, v]) = ends else { continue };
        if u == v {
            continue;
        }
        let empty = Vec::new();
        let su = sq_at_vertex.get(u).unwrap_or(&empty);
        let sv = sq_at_vertex.get(v).unwrap_or(&empty);
        for si in su {
            if !sv.contains(si) {
                continue;
            }
            if !rsquares[*si].sides.contains(&ei) {
                out.push(Violation {
                    axiom: AX_CELLS_MEET_ONCE,
                    cells: vec![
                        raw.edges[ei].id.clone(),
                        raw.squares[rsquares[*si].raw].id.clone(),
                    ],
                    message: format!(
                        "edge `{}` joins two corners of square `{}` without being one of its sides",
                        raw.edges[ei].id, raw.squares[rsquares[*si].raw].id
                    ),
                });
            }
        }
    }

    ValidationReport { violations: out }
}

fn check_duplicates(raw: &RawComplex, out: &mut Vec<Violation>) {
    for (kind, names) in [
        ("vertex", raw.vertices.clone()),
        ("edge", raw.edges.iter().map(|e| e.id.clone()).collect()),
        ("square", raw.squares.iter().map(|s| s.id.clone()).collect()),
    ] {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for n in &names {
            *seen.entry(n.clone()).or_insert(0) += 1;
        }
        for (n, count) in seen {
            if count > 1 {
                out.push(Violation {
                    axiom: AX_DUPLICATE_ID,
                    cells: vec![n.clone()],
                    message: format!("{kind} id `{n}` declared {count} times"),
                });
            }
        }
    }
}

fn index_first<'a>(names: impl Iterator<Item = &'a str>) -> BTreeMap<&'a str, usize> {
    let mut map = BTreeMap::new();
    for (i, n) in names.enumerate() {
        map.entry(n).or_insert(i);
    }
    map
}
