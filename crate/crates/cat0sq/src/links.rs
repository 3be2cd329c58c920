//! Vertex links and the nonpositive-curvature condition.
//!
//! The link of a vertex is a graph: one node per incident edge-end, one
//! link-edge per incident square corner. Every link-edge represents an angle
//! of π/2, so metric statements about links reduce to integer edge counts:
//! the complex is nonpositively curved exactly when no link contains a
//! simple cycle shorter than 4 edges (= 2π).
//!
//! Validated complexes always have simple links: a loop would need a square
//! corner on one edge, a parallel pair would need two squares sharing two
//! edges, both excluded by the meet-once axiom.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::complex::SquareComplex;
use crate::ids::{EdgeId, End, SquareId, VertexId};

/// The link graph at one vertex.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    pub owner: VertexId,
    nodes: Vec<(EdgeId, End)>,
    corners: Vec<LinkCorner>,
    adj: Vec<Vec<(usize, usize)>>,
}

/// One link-edge: the corner of `square` at corner index `k`, joining link
/// nodes `a` and `b`. Its metric length is π/2.
#[derive(Clone, Copy, Debug)]
pub struct LinkCorner {
    pub square: SquareId,
    pub k: u8,
    pub a: usize,
    pub b: usize,
}

impl LinkGraph {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_corners(&self) -> usize {
        self.corners.len()
    }

    /// The edge-end a node stands for.
    pub fn node(&self, i: usize) -> (EdgeId, End) {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[(EdgeId, End)] {
        &self.nodes
    }

    pub fn corners(&self) -> &[LinkCorner] {
        &self.corners
    }

    pub fn corner(&self, i: usize) -> LinkCorner {
        self.corners[i]
    }

    pub fn node_of(&self, e: EdgeId, end: End) -> Option<usize> {
        self.nodes.iter().position(|&n| n == (e, end))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Neighbors of node `i` as `(corner index, other node)`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[i]
    }

    /// The link-edge joining `a` and `b`, if present (unique in a simple graph).
    pub fn corner_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a]
            .iter()
            .find(|&&(_, other)| other == b)
            .map(|&(c, _)| c)
    }

    /// Hop distances from `from` to every node (None = unreachable).
    pub fn bfs_dist(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[from] = Some(0);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(_, v) in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Exact girth in edge count; None when the link is a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.nodes.len();
        let mut best: Option<usize> = None;
        for root in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| dist[u] * 2 >= b) {
                    continue;
                }
                for &(_, v) in &self.adj[u] {
                    if v == parent[u] {
                        continue;
                    }
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else {
                        let len = dist[u] + dist[v] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Every simple cycle with at most `max_edges` edges, canonically
    /// rotated/reflected and sorted by (length, node sequence). Girth is
    /// computed independently of the bound.
    pub fn simple_cycles(&self, max_edges: usize) -> LoopReport {
        assert!(max_edges >= 3, "cycles of a simple graph have length >= 3");
        let n = self.nodes.len();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut path: Vec<usize> = Vec::new();
        let mut visited = vec![false; n];
        for s in 0..n {
            path.push(s);
            visited[s] = true;
            self.cycle_dfs(s, s, max_edges, &mut path, &mut visited, &mut found);
            visited[s] = false;
            path.pop();
        }
        let mut cycles: Vec<Vec<usize>> = found.into_iter().collect();
        cycles.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        LoopReport {
            girth: self.girth(),
            cycles,
        }
    }

    fn cycle_dfs(
        &self,
        s: usize,
        u: usize,
        budget: usize,
        path: &mut Vec<usize>,
        visited: &mut [bool],
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        for &(_, v) in &self.adj[u] {
            if v == s && path.len() >= 3 {
                found.insert(canonical_cycle(path));
            }
            if v > s && !visited[v] && path.len() < budget {
                path.push(v);
                visited[v] = true;
                self.cycle_dfs(s, v, budget, path, visited, found);
                visited[v] = false;
                path.pop();
            }
        }
    }
}

/// Minimal rotation of the lexicographically smaller orientation.
fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    for dir in [false, true] {
        let seq: Vec<usize> = if dir {
            cycle.iter().rev().copied().collect()
        } else {
            cycle.to_vec()
        };
        for r in 0..n {
            let rot: Vec<usize> = (0..n).map(|i| seq[(i + r) % n]).collect();
            if best.as_ref().is_none_or(|b| &rot < b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

/// Cycle census of one link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopReport {
    /// Shortest cycle length in edges; None when the link is a forest.
    pub girth: Option<usize>,
    /// Canonical simple cycles with length ≤ the requested bound,
    /// as node-index sequences.
    pub cycles: Vec<Vec<usize>>,
}

impl LoopReport {
    pub fn cycles_of_len(&self, len: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.cycles.iter().filter(move |c| c.len() == len)
    }
}

/// Builds the link graph at `v`. Node order follows the (sorted) incident
/// edge list, so the result is deterministic.
pub fn link(x: &SquareComplex, v: VertexId) -> LinkGraph {
    let nodes: Vec<(EdgeId, End)> = x.edges_at(v).to_vec();
    let index = |e: EdgeId, end: End| -> usize {
        nodes
            .iter()
            .position(|&n| n == (e, end))
            .expect("corner edge is incident to the vertex")
    };
    let mut corners = Vec::new();
    let mut adj = vec![Vec::new(); nodes.len()];
    for &(s, k) in x.corners_at(v) {
        let (e_in, e_out) = x.corner_edges(s, k);
        let a = index(e_in, x.end_at(e_in, v));
        let b = index(e_out, x.end_at(e_out, v));
        debug_assert_ne!(a, b, "corner edges of an embedded square differ");
        let ci = corners.len();
        corners.push(LinkCorner { square: s, k, a, b });
        adj[a].push((ci, b));
        adj[b].push((ci, a));
    }
    LinkGraph {
        owner: v,
        nodes,
        corners,
        adj,
    }
}

/// A too-short link cycle: the witness that a complex is not NPC.
#[derive(Clone, Debug)]
pub struct NpcWitness {
    pub vertex: VertexId,
    /// The short cycle as edge-ends around the vertex.
    pub cycle: Vec<(EdgeId, End)>,
}

/// Checks the link condition everywhere: every vertex link must have girth
/// at least 4 (no simple loop shorter than 2π). On failure returns the
/// lowest-id violating vertex with a shortest cycle there.
pub fn check_npc(x: &SquareComplex) -> Result<(), NpcWitness> {
    let verdicts: Vec<Option<NpcWitness>> = x
        .vertices()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&v| {
            let l = link(x, v);
            match l.girth() {
                Some(g) if g < 4 => {
                    let report = l.simple_cycles(3);
                    let cycle = report.cycles[0].iter().map(|&i| l.node(i)).collect();
                    Some(NpcWitness { vertex: v, cycle })
                }
                _ => None,
            }
        })
        .collect();
    match verdicts.into_iter().flatten().next() {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

pub fn is_npc(x: &SquareComplex) -> bool {
    check_npc(x).is_ok()
}

/// A simple 5-cycle in a vertex link, the signature of a fake-plane cone.
#[derive(Clone, Debug)]
pub struct FiveLoop {
    pub vertex: VertexId,
    pub cycle: Vec<(EdgeId, End)>,
}

/// All vertices whose link contains a simple 5-edge loop, each with its
/// canonically-first witness loop, in vertex order.
pub fn has_five_loop(x: &SquareComplex) -> Vec<FiveLoop> {
    x.vertices()
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|&v| {
            let l = link(x, v);
            let report = l.simple_cycles(5);
            let witness = report.cycles_of_len(5).next()?;
            Some(FiveLoop {
                vertex: v,
                cycle: witness.iter().map(|&i| l.node(i)).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use std::collections::BTreeMap;

    /// Independent cycle census: every subset of link-edges that forms a
    /// connected 2-regular subgraph is one simple cycle. Exponential in the
    /// corner count, fine for links this size.
    fn cycles_by_edge_subsets(l: &LinkGraph) -> BTreeMap<usize, usize> {
        let m = l.n_corners();
        assert!(m <= 20, "subset oracle only meant for small links");
        let mut census: BTreeMap<usize, usize> = BTreeMap::new();
        for mask in 1u32..(1 << m) {
            let chosen: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let mut deg = vec![0usize; l.n_nodes()];
            for &c in &chosen {
                deg[l.corner(c).a] += 1;
                deg[l.corner(c).b] += 1;
            }
            if deg.iter().any(|&d| d != 0 && d != 2) {
                continue;
            }
            // connectivity over the chosen edges
            let touched: Vec<usize> =
                (0..l.n_nodes()).filter(|&i| deg[i] == 2).collect();
            if touched.len() != chosen.len() {
                continue;
            }
            let mut seen = vec![false; l.n_nodes()];
            let mut stack = vec![touched[0]];
            seen[touched[0]] = true;
            let mut count = 1;
            while let Some(u) = stack.pop() {
                for &(ci, v) in l.neighbors(u) {
                    if chosen.contains(&ci) && !seen[v] {
                        seen[v] = true;
                        count += 1;
                        stack.push(v);
                    }
                }
            }
            if count == touched.len() {
                *census.entry(chosen.len()).or_insert(0) += 1;
            }
        }
        census
    }

    #[test]
    fn grid_links() {
        let x = corpus::grid(2);
        let center = x.vertex_by_name("v01x01").unwrap();
        let l = link(&x, center);
        assert_eq!(l.n_nodes(), 4);
        assert_eq!(l.n_corners(), 4);
        assert_eq!(l.girth(), Some(4));
        let report = l.simple_cycles(6);
        assert_eq!(report.cycles.len(), 1);
        assert_eq!(report.cycles[0].len(), 4);

        let corner = x.vertex_by_name("v00x00").unwrap();
        let lc = link(&x, corner);
        assert_eq!(lc.n_nodes(), 2);
        assert_eq!(lc.n_corners(), 1);
        assert_eq!(lc.girth(), None);
    }

    #[test]
    fn cone_link_is_a_five_cycle() {
        let x = corpus::fake_disk(2);
        let cone = x.vertex_by_name(corpus::FAKE_DISK_CONE).unwrap();
        let l = link(&x, cone);
        assert_eq!(l.n_nodes(), 5);
        assert_eq!(l.n_corners(), 5);
        assert_eq!(l.girth(), Some(5));
        let report = l.simple_cycles(5);
        assert_eq!(report.cycles.len(), 1);
        assert_eq!(report.cycles[0].len(), 5);
    }

    #[test]
    fn cube_corner_fails_npc_with_triangle() {
        let x = corpus::cube_corner();
        let w = check_npc(&x).unwrap_err();
        assert_eq!(x.vertex_name(w.vertex), "o");
        assert_eq!(w.cycle.len(), 3);
        assert!(!is_npc(&x));
    }

    #[test]
    fn npc_holds_on_flat_and_fake_corpora() {
        assert!(is_npc(&corpus::grid(4)));
        assert!(is_npc(&corpus::torus3x3()));
        assert!(is_npc(&corpus::fake_disk(3)));
        assert!(is_npc(&corpus::wedge_tori()));
        assert!(is_npc(&corpus::k33_fan()));
    }

    #[test]
    fn k33_cycle_census() {
        let x = corpus::k33_fan();
        let o = x.vertex_by_name("o").unwrap();
        let l = link(&x, o);
        assert_eq!(l.n_nodes(), 6);
        assert_eq!(l.n_corners(), 9);
        assert_eq!(l.girth(), Some(4));
        let report = l.simple_cycles(8);
        // frozen counts for K(3,3): nine 4-cycles, six 6-cycles
        assert_eq!(report.cycles_of_len(4).count(), 9);
        assert_eq!(report.cycles_of_len(6).count(), 6);
        assert_eq!(report.cycles.len(), 15);
        let census = cycles_by_edge_subsets(&l);
        assert_eq!(census.get(&4), Some(&9));
        assert_eq!(census.get(&6), Some(&6));
        assert_eq!(census.get(&5), None);
        // bipartite: five-loop search stays empty
        assert!(has_five_loop(&x).is_empty());
    }

    #[test]
    fn five_loops_exactly_at_the_cone() {
        for r in [2, 3] {
            let x = corpus::fake_disk(r);
            let loops = has_five_loop(&x);
            assert_eq!(loops.len(), 1, "r={r}");
            assert_eq!(x.vertex_name(loops[0].vertex), corpus::FAKE_DISK_CONE);
            assert_eq!(loops[0].cycle.len(), 5);
        }
        assert!(has_five_loop(&corpus::grid(3)).is_empty());
        assert!(has_five_loop(&corpus::torus3x3()).is_empty());
    }

    #[test]
    fn enumeration_matches_subset_oracle_on_corpus_links() {
        let complexes = [
            corpus::grid(3),
            corpus::torus3x3(),
            corpus::fake_disk(2),
            corpus::cube_corner(),
            corpus::wedge_tori(),
        ];
        for x in &complexes {
            for v in x.vertices() {
                let l = link(x, v);
                if l.n_corners() > 16 {
                    continue;
                }
                let report = l.simple_cycles(12);
                let mut mine: BTreeMap<usize, usize> = BTreeMap::new();
                for c in &report.cycles {
                    *mine.entry(c.len()).or_insert(0) += 1;
                }
                assert_eq!(mine, cycles_by_edge_subsets(&l));
                // girth agrees with the smallest enumerated length
                assert_eq!(report.girth, report.cycles.first().map(|c| c.len()));
            }
        }
    }

    #[test]
    fn girth_is_isomorphism_invariant() {
        let x = corpus::torus3x3();
        let f = corpus::torus3x3_shift();
        for v in x.vertices() {
            let fv = f.vertex(v).unwrap();
            assert_eq!(link(&x, v).girth(), link(&x, fv).girth());
        }
    }

    #[test]
    fn node_degrees_double_count_corners() {
        for x in [corpus::fake_disk(2), corpus::wedge_tori()] {
            for v in x.vertices() {
                let l = link(&x, v);
                let degree_sum: usize = (0..l.n_nodes()).map(|i| l.degree(i)).sum();
                assert_eq!(degree_sum, 2 * x.corners_at(v).len());
                for i in 0..l.n_nodes() {
                    let (e, end) = l.node(i);
                    let by_corners = x
                        .corners_at(v)
                        .iter()
                        .filter(|&&(s, k)| {
                            let (a, b) = x.corner_edges(s, k);
                            (a == e && x.end_at(a, v) == end)
                                || (b == e && x.end_at(b, v) == end)
                        })
                        .count();
                    assert_eq!(l.degree(i), by_corners);
                }
            }
        }
    }
}
