//! Shortest paths between points of a developed ball.
//!
//! A developed ball is simply connected and nonpositively curved, so the
//! geodesic between two points is unique and every locally geodesic path
//! between them is it. The strategy is therefore: find any reasonable
//! seed path (a cheapest chain of vertices through the one skeleton,
//! bridged to the endpoints), then straighten it. The seed only affects
//! how much straightening work happens, never the answer.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::link_metric::OrdF64;
use super::straighten::{normalize_points, straighten};
use super::{segment_carrier, PLPath, Point};
use crate::complex::{SquareChain, SquareComplex};
use crate::cover::DevelopedBall;
use crate::error::{Error, Result};
use crate::ids::{EdgeId, VertexId};
use crate::rational::to_f64;

/// Edge adjacency of a developed ball restricted to edges whose endpoints
/// are both complete, so that a chain through it survives the region
/// checks of the straightener.
pub(crate) struct Skeleton {
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Skeleton {
    pub(crate) fn new(ball: &DevelopedBall) -> Skeleton {
        let x = ball.ball();
        let mut adj = vec![Vec::new(); x.n_vertices()];
        for e in x.edge_ids() {
            let [a, b] = x.edge_ends(e);
            if ball.complete_vertex(a) && ball.complete_vertex(b) {
                adj[a.index()].push((b, e));
                adj[b.index()].push((a, e));
            }
        }
        Skeleton { adj }
    }

    /// Cheapest vertex chain from one weighted anchor set to another, or
    /// `None` when no chain exists. Ties break toward the smaller vertex
    /// id so the chain is deterministic.
    fn route(
        &self,
        starts: &[(VertexId, f64)],
        goals: &[(VertexId, f64)],
        jitter: Option<u64>,
    ) -> Option<Vec<VertexId>> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent: Vec<Option<VertexId>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        for &(v, w) in starts {
            if w < dist[v.index()] {
                dist[v.index()] = w;
                heap.push(Reverse((OrdF64(w), v.index())));
            }
        }
        while let Some(Reverse((OrdF64(d), vi))) = heap.pop() {
            if d > dist[vi] {
                continue;
            }
            for &(u, e) in &self.adj[vi] {
                let w = d + edge_weight(e, jitter);
                if w < dist[u.index()] {
                    dist[u.index()] = w;
                    parent[u.index()] = Some(VertexId(vi as u32));
                    heap.push(Reverse((OrdF64(w), u.index())));
                }
            }
        }
        let (_, best) = goals
            .iter()
            .filter(|(v, _)| dist[v.index()].is_finite())
            .map(|&(v, w)| (OrdF64(dist[v.index()] + w), v))
            .min()?;
        let mut chain = vec![best];
        while let Some(p) = parent[chain.last().unwrap().index()] {
            chain.push(p);
        }
        chain.reverse();
        Some(chain)
    }
}

/// Unit edge weights, optionally perturbed by about one part in a million
/// so different seeds break Dijkstra ties differently.
fn edge_weight(e: EdgeId, jitter: Option<u64>) -> f64 {
    match jitter {
        None => 1.0,
        Some(seed) => {
            let h = splitmix64(seed ^ (e.index() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            1.0 + (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * 1e-6
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Skeleton vertices a point can hand off to, with the exact cost of the
/// straight hand off segment.
fn anchors(x: &SquareComplex, p: &Point) -> Vec<(VertexId, f64)> {
    match p {
        Point::Vertex(v) => vec![(*v, 0.0)],
        Point::Edge(e, t) => {
            let [a, b] = x.edge_ends(*e);
            let t = to_f64(t);
            vec![(a, t), (b, 1.0 - t)]
        }
        Point::Square(s, px, py) => {
            let (px, py) = (to_f64(px), to_f64(py));
            (0..4u8)
                .map(|k| {
                    let (cx, cy) = SquareChain::CORNER_POS[k as usize];
                    let d = (px - cx as f64).hypot(py - cy as f64);
                    (x.corner_vertex(*s, k), d)
                })
                .collect()
        }
    }
}

/// The geodesic from `p` to `q` in the ball, as an exact piecewise linear
/// path. Fails with `BallTooSmall` when either point's geometry is not
/// certified at the ball's radius.
pub fn shortest_path(ball: &DevelopedBall, p: &Point, q: &Point, eps: f64) -> Result<PLPath> {
    let skel = Skeleton::new(ball);
    shortest_path_seeded(ball, &skel, p, q, eps, None)
}

/// Same geodesic, different seed chain: the jitter perturbs the seed
/// search, not the metric, so any seed must straighten to the same path.
pub fn shortest_path_jittered(
    ball: &DevelopedBall,
    p: &Point,
    q: &Point,
    eps: f64,
    seed: u64,
) -> Result<PLPath> {
    let skel = Skeleton::new(ball);
    shortest_path_seeded(ball, &skel, p, q, eps, Some(seed))
}

/// Geodesic distance from `p` to `q` in the ball.
pub fn distance(ball: &DevelopedBall, p: &Point, q: &Point, eps: f64) -> Result<f64> {
    Ok(shortest_path(ball, p, q, eps)?.length())
}

pub(crate) fn shortest_path_seeded(
    ball: &DevelopedBall,
    skel: &Skeleton,
    p: &Point,
    q: &Point,
    eps: f64,
    jitter: Option<u64>,
) -> Result<PLPath> {
    let x = ball.ball();
    if p == q {
        return PLPath::new(x, vec![p.clone()]);
    }
    // Co-cellular points: the straight segment in the shared cell is the
    // geodesic, the straightener only has to vouch for the region.
    if segment_carrier(x, p, q).is_some() {
        let direct = PLPath::new(x, vec![p.clone(), q.clone()])?;
        return straighten(ball, &direct, eps);
    }
    let chain = skel
        .route(&anchors(x, p), &anchors(x, q), jitter)
        .ok_or(Error::BallTooSmall {
            achieved: ball.radius(),
            needed: ball.radius() + 1,
        })?;
    let mut pts = vec![p.clone()];
    pts.extend(chain.into_iter().map(Point::Vertex));
    pts.push(q.clone());
    let seed = normalize_points(x, &pts)?;
    straighten(ball, &seed, eps)
}

#[cfg(test)]
mod tests {
    use super::super::straighten::{local_geodesic_check, r_geodesic_check};
    use super::*;
    use crate::corpus;
    use crate::cover::{develop, from_simply_connected};
    use crate::rational::q;

    fn whole(x: SquareComplex, base: &str) -> DevelopedBall {
        let v = x.vertex_by_name(base).unwrap();
        from_simply_connected(&x, v).unwrap()
    }

    fn vp(ball: &DevelopedBall, name: &str) -> Point {
        Point::Vertex(ball.ball().vertex_by_name(name).unwrap())
    }

    #[test]
    fn grid_distances_match_the_euclidean_plane() {
        let ball = whole(corpus::grid(6), "v00x00");
        let x = ball.ball();

        let a = vp(&ball, "v00x00");
        let b = vp(&ball, "v03x02");
        let g = shortest_path(&ball, &a, &b, 1e-9).unwrap();
        assert!((g.length() - 13f64.sqrt()).abs() < 1e-9);
        assert_eq!(g.first(), &a);
        assert_eq!(g.last(), &b);
        assert!(r_geodesic_check(&ball, &g, 1e-9).unwrap());

        // Square interior to square interior: (0.5, 0.5) to (3.75, 2.25).
        let s0 = x.square_by_name("s00x00").unwrap();
        let s1 = x.square_by_name("s03x02").unwrap();
        let a = Point::in_square(x, s0, q(1, 2), q(1, 2)).unwrap();
        let b = Point::in_square(x, s1, q(3, 4), q(1, 4)).unwrap();
        let d = distance(&ball, &a, &b, 1e-9).unwrap();
        assert!((d - (3.25f64.powi(2) + 1.75f64.powi(2)).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn cone_geometry_matches_the_law_of_cosines() {
        let ball = whole(corpus::fake_disk(3), "cone");

        // Sheet 1 sits 3/4 pi around the cone from ray 0: one flat
        // geodesic crossing two sheets, length sqrt(9 + 8 - 12 sqrt2 cos(3pi/4)).
        let a = vp(&ball, "ray0t03");
        let g1 = shortest_path(&ball, &a, &vp(&ball, "sh1v02x02"), 1e-9).unwrap();
        assert!((g1.length() - 29f64.sqrt()).abs() < 1e-9);
        assert!(r_geodesic_check(&ball, &g1, 1e-9).unwrap());

        // Sheet 2 sits 5/4 pi around: the geodesic passes the cone point
        // and is locally geodesic there without being a plane geodesic.
        let g2 = shortest_path(&ball, &a, &vp(&ball, "sh2v02x02"), 1e-9).unwrap();
        assert!((g2.length() - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-9);
        assert!(g2.points().contains(&vp(&ball, "cone")));
        assert!(local_geodesic_check(&ball, &g2).unwrap().passes(1e-9));
        assert!(!r_geodesic_check(&ball, &g2, 1e-9).unwrap());
    }

    #[test]
    fn jittered_seeds_straighten_to_the_same_geodesic() {
        let ball = whole(corpus::grid(5), "v00x00");
        let a = vp(&ball, "v00x00");
        let b = vp(&ball, "v04x04");
        let base = shortest_path(&ball, &a, &b, 1e-9).unwrap();
        assert!((base.length() - 32f64.sqrt()).abs() < 1e-9);
        for seed in [1u64, 7, 42] {
            let g = shortest_path_jittered(&ball, &a, &b, 1e-9, seed).unwrap();
            assert!((g.length() - base.length()).abs() < 1e-9);
            assert_eq!(g.first(), base.first());
            assert_eq!(g.last(), base.last());
        }
    }

    #[test]
    fn uncertified_targets_report_ball_too_small() {
        let x = corpus::torus3x3();
        let c = x.vertex_by_name("v00x00").unwrap();
        let ball = develop(&x, c, 3).unwrap();
        let b = ball.ball();
        let center = Point::Vertex(ball.center());

        // Straight line distance two: present in the ball, geometry not
        // certified, and no complete chain reaches it.
        let far = (0..b.n_vertices() as u32)
            .map(VertexId)
            .find(|&v| {
                ball.depth(v) == 2 && segment_carrier(b, &center, &Point::Vertex(v)).is_none()
            })
            .unwrap();
        assert!(matches!(
            shortest_path(&ball, &center, &Point::Vertex(far), 1e-9),
            Err(Error::BallTooSmall { .. })
        ));

        // Depth one neighbors are fine.
        let (e, _) = b.edges_at(ball.center())[0];
        let near = b
            .edge_ends(e)
            .into_iter()
            .find(|&v| v != ball.center())
            .unwrap();
        let d = distance(&ball, &center, &Point::Vertex(near), 1e-9).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn trivial_and_cocellular_queries_stay_exact() {
        let ball = whole(corpus::grid(2), "v00x00");
        let x = ball.ball();
        let s = x.square_by_name("s00x00").unwrap();
        let a = Point::in_square(x, s, q(1, 4), q(1, 4)).unwrap();
        let b = Point::in_square(x, s, q(3, 4), q(3, 4)).unwrap();

        assert_eq!(distance(&ball, &a, &a, 1e-9).unwrap(), 0.0);

        let g = shortest_path(&ball, &a, &b, 1e-9).unwrap();
        assert_eq!(g.n_segments(), 1);
        assert_eq!(g.seg_len2(0), &q(1, 2));
    }
}
