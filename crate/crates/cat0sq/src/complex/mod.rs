//! Finite square complexes: the data model and its derived adjacency.
//!
//! A complex is described textually (or programmatically) as a [`RawComplex`]
//! with string ids; [`SquareComplex::from_raw`] validates the polygonal
//! axioms and interns everything into dense indices. All downstream
//! algorithms work on the interned form and never see strings except for
//! reporting.

mod map;
mod validate;

pub use map::{
    compose, grow_deck_map, grow_equivariant_map, identity_map, inverse, is_isomorphism,
    links_agree, verify_map, CellularMap, D4,
};
pub use validate::{
    validate, ValidationReport, Violation, AX_BOUNDARY_EMBEDDED, AX_CELLS_MEET_ONCE,
    AX_CORNER_CHAIN, AX_DUPLICATE_ID, AX_EDGE_ENDPOINTS, AX_UNRESOLVED,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ids::{EdgeId, End, SquareId, VertexId};

/// One corner of a square as written in the input: the vertex sitting at the
/// corner, the boundary edge entering it, and the boundary edge leaving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCorner {
    pub vertex: String,
    pub edge_in: String,
    pub edge_out: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSquare {
    pub id: String,
    pub corners: [RawCorner; 4],
}

/// Unchecked complex description. May contain dangling references, duplicate
/// ids, or axiom violations; [`validate`] reports all of them at once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawComplex {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
    pub squares: Vec<RawSquare>,
}

/// The boundary chain of one square, interned. Side `k` is the edge between
/// `corners[k]` and `corners[(k+1) % 4]`; in the square's own Euclidean
/// frame, corner `k` sits at `(0,0), (1,0), (1,1), (0,1)` for `k = 0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareChain {
    pub corners: [VertexId; 4],
    pub sides: [EdgeId; 4],
}

impl SquareChain {
    /// Position of corner `k` in the unit-square frame.
    pub const CORNER_POS: [(u8, u8); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];
}

/// Incremental construction of a [`RawComplex`]. Endpoint vertices are added
/// on demand; redeclaring a cell with identical content is a no-op, with
/// conflicting redeclarations rejected loudly (they are always builder bugs,
/// not input errors).
#[derive(Default)]
pub struct ComplexBuilder {
    raw: RawComplex,
    vseen: std::collections::BTreeSet<String>,
    eseen: BTreeMap<String, usize>,
    sseen: std::collections::BTreeSet<String>,
}

impl ComplexBuilder {
    pub fn new() -> ComplexBuilder {
        ComplexBuilder::default()
    }

    pub fn vertex(&mut self, name: &str) -> &mut Self {
        if self.vseen.insert(name.to_string()) {
            self.raw.vertices.push(name.to_string());
        }
        self
    }

    pub fn edge(&mut self, id: &str, a: &str, b: &str) -> &mut Self {
        self.vertex(a).vertex(b);
        if let Some(&i) = self.eseen.get(id) {
            assert_eq!(
                self.raw.edges[i].ends,
                [a.to_string(), b.to_string()],
                "edge `{id}` redeclared with different endpoints"
            );
            return self;
        }
        self.eseen.insert(id.to_string(), self.raw.edges.len());
        self.raw.edges.push(RawEdge {
            id: id.to_string(),
            ends: [a.to_string(), b.to_string()],
        });
        self
    }

    /// Adds a square from its corner vertices and its sides in boundary
    /// order (side `k` joins corners `k` and `k+1`).
    pub fn square(&mut self, id: &str, corners: [&str; 4], sides: [&str; 4]) -> &mut Self {
        assert!(
            self.sseen.insert(id.to_string()),
            "square `{id}` declared twice"
        );
        self.raw.squares.push(RawSquare {
            id: id.to_string(),
            corners: std::array::from_fn(|k| RawCorner {
                vertex: corners[k].to_string(),
                edge_in: sides[(k + 3) % 4].to_string(),
                edge_out: sides[k].to_string(),
            }),
        });
        self
    }

    pub fn raw(self) -> RawComplex {
        self.raw
    }

    pub fn build(self) -> Result<SquareComplex> {
        SquareComplex::from_raw(&self.raw)
    }
}

/// A validated finite square complex.
///
/// Construction goes through [`SquareComplex::from_raw`], which enforces the
/// polygonal axioms; every instance of this type satisfies them. Cells are
/// numbered in lexicographic order of their input ids, so two loads of the
/// same file produce identical indices.
#[derive(Clone, Debug)]
pub struct SquareComplex {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    square_names: Vec<String>,
    vertex_index: BTreeMap<String, VertexId>,
    edge_index: BTreeMap<String, EdgeId>,
    square_index: BTreeMap<String, SquareId>,
    edges: Vec<[VertexId; 2]>,
    squares: Vec<SquareChain>,
    edges_at: Vec<Vec<(EdgeId, End)>>,
    corners_at: Vec<Vec<(SquareId, u8)>>,
    squares_at_edge: Vec<Vec<(SquareId, u8)>>,
}

impl SquareComplex {
    /// Validates `raw` and interns it. On any violation the full report is
    /// returned inside [`Error::Invalid`].
    pub fn from_raw(raw: &RawComplex) -> Result<SquareComplex> {
        let report = validate(raw);
        if !report.passed() {
            return Err(Error::Invalid(report));
        }
        Ok(Self::from_raw_unchecked(raw))
    }

    /// Interns a description that is already known to pass validation.
    /// Only `validate` (which needs the interner for its own bookkeeping)
    /// and tests should call this.
    pub(crate) fn from_raw_unchecked(raw: &RawComplex) -> SquareComplex {
        let mut vertex_names: Vec<String> = raw.vertices.clone();
        vertex_names.sort();
        let mut edge_sorted: Vec<&RawEdge> = raw.edges.iter().collect();
        edge_sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let mut square_sorted: Vec<&RawSquare> = raw.squares.iter().collect();
        square_sorted.sort_by(|a, b| a.id.cmp(&b.id));

        let vertex_index: BTreeMap<String, VertexId> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();
        let edge_index: BTreeMap<String, EdgeId> = edge_sorted
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), EdgeId(i as u32)))
            .collect();
        let square_index: BTreeMap<String, SquareId> = square_sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), SquareId(i as u32)))
            .collect();

        let edges: Vec<[VertexId; 2]> = edge_sorted
            .iter()
            .map(|e| [vertex_index[&e.ends[0]], vertex_index[&e.ends[1]]])
            .collect();
        let squares: Vec<SquareChain> = square_sorted
            .iter()
            .map(|s| SquareChain {
                corners: [
                    vertex_index[&s.corners[0].vertex],
                    vertex_index[&s.corners[1].vertex],
                    vertex_index[&s.corners[2].vertex],
                    vertex_index[&s.corners[3].vertex],
                ],
                sides: [
                    edge_index[&s.corners[0].edge_out],
                    edge_index[&s.corners[1].edge_out],
                    edge_index[&s.corners[2].edge_out],
                    edge_index[&s.corners[3].edge_out],
                ],
            })
            .collect();

        let mut edges_at = vec![Vec::new(); vertex_names.len()];
        for (i, ends) in edges.iter().enumerate() {
            edges_at[ends[0].index()].push((EdgeId(i as u32), End::Zero));
            edges_at[ends[1].index()].push((EdgeId(i as u32), End::One));
        }
        let mut corners_at = vec![Vec::new(); vertex_names.len()];
        let mut squares_at_edge = vec![Vec::new(); edges.len()];
        for (i, sq) in squares.iter().enumerate() {
            for k in 0..4 {
                corners_at[sq.corners[k].index()].push((SquareId(i as u32), k as u8));
                squares_at_edge[sq.sides[k].index()].push((SquareId(i as u32), k as u8));
            }
        }

        let edge_names = edge_sorted.iter().map(|e| e.id.clone()).collect();
        let square_names = square_sorted.iter().map(|s| s.id.clone()).collect();

        SquareComplex {
            vertex_names,
            edge_names,
            square_names,
            vertex_index,
            edge_index,
            square_index,
            edges,
            squares,
            edges_at,
            corners_at,
            squares_at_edge,
        }
    }

    /// Exports the complex back to its raw description (canonical order).
    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, ends)| RawEdge {
                    id: self.edge_names[i].clone(),
                    ends: [
                        self.vertex_names[ends[0].index()].clone(),
                        self.vertex_names[ends[1].index()].clone(),
                    ],
                })
                .collect(),
            squares: self
                .squares
                .iter()
                .enumerate()
                .map(|(i, sq)| RawSquare {
                    id: self.square_names[i].clone(),
                    corners: std::array::from_fn(|k| RawCorner {
                        vertex: self.vertex_names[sq.corners[k].index()].clone(),
                        edge_in: self.edge_names[sq.sides[(k + 3) % 4].index()].clone(),
                        edge_out: self.edge_names[sq.sides[k].index()].clone(),
                    }),
                })
                .collect(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_squares(&self) -> usize {
        self.squares.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn square_ids(&self) -> impl Iterator<Item = SquareId> {
        (0..self.squares.len() as u32).map(SquareId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.index()]
    }

    pub fn square_name(&self, s: SquareId) -> &str {
        &self.square_names[s.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn square_by_name(&self, name: &str) -> Option<SquareId> {
        self.square_index.get(name).copied()
    }

    /// The two (distinct) endpoints of `e`, in stored orientation.
    pub fn edge_ends(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e.index()]
    }

    pub fn edge_end(&self, e: EdgeId, end: End) -> VertexId {
        self.edges[e.index()][end.as_index()]
    }

    /// Which end of `e` touches `v`; panics if `v` is not an endpoint.
    pub fn end_at(&self, e: EdgeId, v: VertexId) -> End {
        let ends = self.edges[e.index()];
        if ends[0] == v {
            End::Zero
        } else if ends[1] == v {
            End::One
        } else {
            panic!("vertex {v:?} is not an endpoint of {e:?}")
        }
    }

    pub fn square(&self, s: SquareId) -> &SquareChain {
        &self.squares[s.index()]
    }

    pub fn corner_vertex(&self, s: SquareId, k: u8) -> VertexId {
        self.squares[s.index()].corners[k as usize % 4]
    }

    pub fn side_edge(&self, s: SquareId, k: u8) -> EdgeId {
        self.squares[s.index()].sides[k as usize % 4]
    }

    /// Edge-ends incident to `v`, in edge-id order.
    pub fn edges_at(&self, v: VertexId) -> &[(EdgeId, End)] {
        &self.edges_at[v.index()]
    }

    /// Square corners sitting at `v`, in square-id order.
    pub fn corners_at(&self, v: VertexId) -> &[(SquareId, u8)] {
        &self.corners_at[v.index()]
    }

    /// Squares carried by `e` (with the side index where `e` appears).
    pub fn squares_at_edge(&self, e: EdgeId) -> &[(SquareId, u8)] {
        &self.squares_at_edge[e.index()]
    }

    /// The two boundary edges of square `s` meeting at its corner `k`:
    /// `(incoming side, outgoing side)` = sides `k−1` and `k`.
    pub fn corner_edges(&self, s: SquareId, k: u8) -> (EdgeId, EdgeId) {
        let sq = &self.squares[s.index()];
        (sq.sides[(k as usize + 3) % 4], sq.sides[k as usize % 4])
    }

    /// Looks up the square corner at `v` formed by unordered boundary edge
    /// pair `{e1, e2}`. The polygonal axioms guarantee at most one match.
    pub fn corner_by_edges(&self, v: VertexId, e1: EdgeId, e2: EdgeId) -> Option<(SquareId, u8)> {
        self.corners_at(v).iter().copied().find(|&(s, k)| {
            let (a, b) = self.corner_edges(s, k);
            (a, b) == (e1, e2) || (a, b) == (e2, e1)
        })
    }

    /// Euler characteristic V − E + F.
    pub fn euler(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_squares() as i64
    }

    /// Resolves a vertex name or errors with the unknown-cell payload.
    pub fn require_vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_by_name(name)
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }

    pub fn require_edge(&self, name: &str) -> Result<EdgeId> {
        self.edge_by_name(name)
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }

    pub fn require_square(&self, name: &str) -> Result<SquareId> {
        self.square_by_name(name)
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn single_square_interning() {
        let x = corpus::square1();
        assert_eq!(x.n_vertices(), 4);
        assert_eq!(x.n_edges(), 4);
        assert_eq!(x.n_squares(), 1);
        assert_eq!(x.euler(), 1);
        let s = SquareId(0);
        for k in 0..4u8 {
            let (e_in, e_out) = x.corner_edges(s, k);
            let v = x.corner_vertex(s, k);
            // both corner edges touch the corner vertex
            assert!(x.edge_ends(e_in).contains(&v));
            assert!(x.edge_ends(e_out).contains(&v));
            assert_eq!(x.corner_by_edges(v, e_in, e_out), Some((s, k)));
        }
    }

    #[test]
    fn adjacency_double_counts() {
        let x = corpus::grid(3);
        let corner_total: usize = x.vertices().map(|v| x.corners_at(v).len()).sum();
        assert_eq!(corner_total, 4 * x.n_squares());
        let end_total: usize = x.vertices().map(|v| x.edges_at(v).len()).sum();
        assert_eq!(end_total, 2 * x.n_edges());
        let side_total: usize = x.edge_ids().map(|e| x.squares_at_edge(e).len()).sum();
        assert_eq!(side_total, 4 * x.n_squares());
    }

    #[test]
    fn to_raw_round_trips() {
        let x = corpus::torus3x3();
        let raw = x.to_raw();
        let y = SquareComplex::from_raw(&raw).unwrap();
        assert_eq!(y.to_raw(), raw);
    }
}
