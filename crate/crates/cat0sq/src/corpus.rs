//! Built-in model complexes.
//!
//! These are the complexes the test suite, the shipped corpus files, and the
//! documentation all refer to. Cell names are stable: files regenerated from
//! these builders are byte-identical.
//!
//! Naming scheme for grid-like complexes: vertex `v03x07` sits at (3, 7),
//! `h03x07` is the edge from it to (4, 7), `u03x07` the edge to (3, 8), and
//! square `s03x07` has its lower-left corner there. Corner order inside each
//! square is counterclockwise starting at the lower-left.

use crate::complex::{CellularMap, ComplexBuilder, D4, RawComplex, SquareComplex};

fn vn(i: usize, j: usize) -> String {
    format!("v{i:02}x{j:02}")
}

fn hn(i: usize, j: usize) -> String {
    format!("h{i:02}x{j:02}")
}

fn un(i: usize, j: usize) -> String {
    format!("u{i:02}x{j:02}")
}

fn sn(i: usize, j: usize) -> String {
    format!("s{i:02}x{j:02}")
}

/// A single unit square: the smallest legal complex.
pub fn square1() -> SquareComplex {
    grid(1)
}

/// The flat n×n grid patch on [0,n]².
pub fn grid(n: usize) -> SquareComplex {
    assert!(n >= 1);
    let mut b = ComplexBuilder::new();
    for j in 0..=n {
        for i in 0..n {
            b.edge(&hn(i, j), &vn(i, j), &vn(i + 1, j));
        }
    }
    for j in 0..n {
        for i in 0..=n {
            b.edge(&un(i, j), &vn(i, j), &vn(i, j + 1));
        }
    }
    for j in 0..n {
        for i in 0..n {
            b.square(
                &sn(i, j),
                [&vn(i, j), &vn(i + 1, j), &vn(i + 1, j + 1), &vn(i, j + 1)],
                [&hn(i, j), &un(i + 1, j), &hn(i, j + 1), &un(i, j)],
            );
        }
    }
    b.build().expect("grid is a valid complex")
}

/// The n×n torus identification as a raw description. Valid only for n ≥ 3:
/// n = 1 makes the edges loops, n = 2 doubles them up.
pub fn torus_raw(n: usize) -> RawComplex {
    assert!(n >= 1);
    let mut b = ComplexBuilder::new();
    let m = |k: usize| k % n;
    for j in 0..n {
        for i in 0..n {
            b.edge(&hn(i, j), &vn(i, j), &vn(m(i + 1), j));
            b.edge(&un(i, j), &vn(i, j), &vn(i, m(j + 1)));
        }
    }
    for j in 0..n {
        for i in 0..n {
            b.square(
                &sn(i, j),
                [
                    &vn(i, j),
                    &vn(m(i + 1), j),
                    &vn(m(i + 1), m(j + 1)),
                    &vn(i, m(j + 1)),
                ],
                [&hn(i, j), &un(m(i + 1), j), &hn(i, m(j + 1)), &un(i, j)],
            );
        }
    }
    b.raw()
}

/// One-square torus: fails validation (loop edges).
pub fn torus1_raw() -> RawComplex {
    torus_raw(1)
}

/// Four-square torus: fails validation (doubled edges, square overlaps).
pub fn torus2x2_raw() -> RawComplex {
    torus_raw(2)
}

/// The smallest valid torus: 9 vertices, 18 edges, 9 squares. Its universal
/// cover is the standard square grid on ℤ².
pub fn torus3x3() -> SquareComplex {
    SquareComplex::from_raw(&torus_raw(3)).expect("3x3 torus is a valid complex")
}

/// The torus symmetry shifting every cell one row up ((i,j) → (i, j+1)).
pub fn torus3x3_shift() -> CellularMap {
    let x = torus3x3();
    let mut f = CellularMap::default();
    for i in 0..3 {
        for j in 0..3 {
            let j2 = (j + 1) % 3;
            f.v.insert(
                x.vertex_by_name(&vn(i, j)).unwrap(),
                x.vertex_by_name(&vn(i, j2)).unwrap(),
            );
            f.e.insert(
                x.edge_by_name(&hn(i, j)).unwrap(),
                x.edge_by_name(&hn(i, j2)).unwrap(),
            );
            f.e.insert(
                x.edge_by_name(&un(i, j)).unwrap(),
                x.edge_by_name(&un(i, j2)).unwrap(),
            );
            f.s.insert(
                x.square_by_name(&sn(i, j)).unwrap(),
                (x.square_by_name(&sn(i, j2)).unwrap(), D4::IDENTITY),
            );
        }
    }
    f
}

/// Three squares around a common corner, pairwise sharing one edge: the
/// corner of a cube. Valid, but the corner link is a 3-cycle, so not NPC.
pub fn cube_corner() -> SquareComplex {
    let mut b = ComplexBuilder::new();
    b.edge("ex", "o", "x");
    b.edge("ey", "o", "y");
    b.edge("ez", "o", "z");
    b.edge("exy", "x", "xy");
    b.edge("eyx", "y", "xy");
    b.edge("eyz", "y", "yz");
    b.edge("ezy", "z", "yz");
    b.edge("ezx", "z", "zx");
    b.edge("exz", "x", "zx");
    b.square("sxy", ["o", "x", "xy", "y"], ["ex", "exy", "eyx", "ey"]);
    b.square("syz", ["o", "y", "yz", "z"], ["ey", "eyz", "ezy", "ez"]);
    b.square("szx", ["o", "z", "zx", "x"], ["ez", "ezx", "exz", "ex"]);
    b.build().expect("cube corner is a valid complex")
}

/// Nine squares fanned around one central vertex `o` so that the link at `o`
/// is the complete bipartite graph K(3,3): square `(i,j)` spans the corner
/// between arm `a{i}` and arm `b{j}`, with its own far vertex.
pub fn k33_fan() -> SquareComplex {
    let mut b = ComplexBuilder::new();
    for i in 0..3 {
        b.edge(&format!("ea{i}"), "o", &format!("a{i}"));
        b.edge(&format!("eb{i}"), "o", &format!("b{i}"));
    }
    for i in 0..3 {
        for j in 0..3 {
            let far = format!("c{i}x{j}");
            b.edge(&format!("ca{i}x{j}"), &format!("a{i}"), &far);
            b.edge(&format!("cb{i}x{j}"), &format!("b{j}"), &far);
            b.square(
                &format!("s{i}x{j}"),
                [
                    "o",
                    &format!("a{i}"),
                    &far,
                    &format!("b{j}"),
                ],
                [
                    &format!("ea{i}"),
                    &format!("ca{i}x{j}"),
                    &format!("cb{i}x{j}"),
                    &format!("eb{j}"),
                ],
            );
        }
    }
    b.build().expect("K33 fan is a valid complex")
}

/// Radius-r truncation of a fake plane: five r×r quarter grids glued
/// cyclically along their boundary rays at a common cone vertex. Sheet q is
/// bounded by ray q (its x-axis) and ray (q+1) mod 5 (its y-axis).
///
/// Counts: 5r²+5r+1 vertices, 10r²+5r edges, 5r² squares; the cone link is a
/// simple 5-cycle and every interior vertex link is a 4-cycle.
pub fn fake_disk(r: usize) -> SquareComplex {
    assert!(r >= 1);
    let vname = |q: usize, x: usize, y: usize| -> String {
        match (x, y) {
            (0, 0) => "cone".to_string(),
            (_, 0) => format!("ray{q}t{x:02}"),
            (0, _) => format!("ray{}t{y:02}", (q + 1) % 5),
            _ => format!("sh{q}v{x:02}x{y:02}"),
        }
    };
    let hname = |q: usize, x: usize, y: usize| -> String {
        if y == 0 {
            format!("ray{q}s{x:02}")
        } else {
            format!("sh{q}h{x:02}x{y:02}")
        }
    };
    let uname = |q: usize, x: usize, y: usize| -> String {
        if x == 0 {
            format!("ray{}s{y:02}", (q + 1) % 5)
        } else {
            format!("sh{q}u{x:02}x{y:02}")
        }
    };
    let mut b = ComplexBuilder::new();
    for q in 0..5 {
        for y in 0..=r {
            for x in 0..r {
                b.edge(&hname(q, x, y), &vname(q, x, y), &vname(q, x + 1, y));
            }
        }
        for y in 0..r {
            for x in 0..=r {
                b.edge(&uname(q, x, y), &vname(q, x, y), &vname(q, x, y + 1));
            }
        }
        for y in 0..r {
            for x in 0..r {
                b.square(
                    &format!("sh{q}s{x:02}x{y:02}"),
                    [
                        &vname(q, x, y),
                        &vname(q, x + 1, y),
                        &vname(q, x + 1, y + 1),
                        &vname(q, x, y + 1),
                    ],
                    [
                        &hname(q, x, y),
                        &uname(q, x + 1, y),
                        &hname(q, x, y + 1),
                        &uname(q, x, y),
                    ],
                );
            }
        }
    }
    b.build().expect("fake disk is a valid complex")
}

/// Name of the fake-disk cone vertex.
pub const FAKE_DISK_CONE: &str = "cone";

/// Two 3×3 tori glued at a single vertex `w`. Its universal cover is a
/// tree of flats: ℤ²-planes branching at every lift of `w`, and the deck
/// group contains the free product ℤ² ∗ ℤ².
pub fn wedge_tori() -> SquareComplex {
    let a = rename_cells(&torus_raw(3), "a-");
    let b = rename_cells(&torus_raw(3), "b-");
    let mut raw = RawComplex::default();
    raw.vertices.extend(a.vertices);
    raw.vertices.extend(b.vertices);
    raw.vertices.retain(|v| v != "w");
    raw.vertices.push("w".to_string());
    raw.edges.extend(a.edges);
    raw.edges.extend(b.edges);
    raw.squares.extend(a.squares);
    raw.squares.extend(b.squares);
    SquareComplex::from_raw(&raw).expect("wedge of tori is a valid complex")
}

/// Name of the wedge vertex of [`wedge_tori`].
pub const WEDGE_POINT: &str = "w";

/// Prefixes every cell name of a torus description, except the base vertex
/// `v00x00` which becomes the shared wedge point `w`.
fn rename_cells(raw: &RawComplex, prefix: &str) -> RawComplex {
    let v = |name: &str| -> String {
        if name == "v00x00" {
            "w".to_string()
        } else {
            format!("{prefix}{name}")
        }
    };
    let c = |name: &str| format!("{prefix}{name}");
    RawComplex {
        vertices: raw.vertices.iter().map(|n| v(n)).collect(),
        edges: raw
            .edges
            .iter()
            .map(|e| crate::complex::RawEdge {
                id: c(&e.id),
                ends: [v(&e.ends[0]), v(&e.ends[1])],
            })
            .collect(),
        squares: raw
            .squares
            .iter()
            .map(|s| crate::complex::RawSquare {
                id: c(&s.id),
                corners: std::array::from_fn(|k| crate::complex::RawCorner {
                    vertex: v(&s.corners[k].vertex),
                    edge_in: c(&s.corners[k].edge_in),
                    edge_out: c(&s.corners[k].edge_out),
                }),
            })
            .collect(),
    }
}

/// Two edges joining the same vertex pair: the minimal meet-once violation.
pub fn doubled_edge_raw() -> RawComplex {
    let mut b = ComplexBuilder::new();
    b.edge("e1", "a", "b");
    b.edge("e2", "b", "a");
    b.raw()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fake_disk_counts() {
        for r in 1..=5 {
            let x = fake_disk(r);
            assert_eq!(x.n_vertices(), 5 * r * r + 5 * r + 1, "r={r}");
            assert_eq!(x.n_edges(), 10 * r * r + 5 * r, "r={r}");
            assert_eq!(x.n_squares(), 5 * r * r, "r={r}");
            assert_eq!(x.euler(), 1);
            let cone = x.vertex_by_name(FAKE_DISK_CONE).unwrap();
            assert_eq!(x.edges_at(cone).len(), 5);
            assert_eq!(x.corners_at(cone).len(), 5);
        }
    }

    #[test]
    fn wedge_counts() {
        let x = wedge_tori();
        assert_eq!(x.n_vertices(), 17); // 9 + 9 − 1
        assert_eq!(x.n_edges(), 36);
        assert_eq!(x.n_squares(), 18);
        let w = x.vertex_by_name(WEDGE_POINT).unwrap();
        assert_eq!(x.edges_at(w).len(), 8);
        assert_eq!(x.corners_at(w).len(), 8);
    }

    #[test]
    fn grid_counts() {
        let x = grid(5);
        assert_eq!(x.n_vertices(), 36);
        assert_eq!(x.n_edges(), 60);
        assert_eq!(x.n_squares(), 25);
        assert_eq!(x.euler(), 1);
    }

    #[test]
    fn k33_fan_central_degree() {
        let x = k33_fan();
        let o = x.vertex_by_name("o").unwrap();
        assert_eq!(x.edges_at(o).len(), 6);
        assert_eq!(x.corners_at(o).len(), 9);
    }
}
