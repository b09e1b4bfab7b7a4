//! Hop-limited distances: a hybrid of Dijkstra rounds over the non-negative
//! plain edges and single relaxations across the designated negative edges.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{VertexId, Weight, WeightedDigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Forward,
    Backward,
}

struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<Weight>,
}

impl Csr {
    fn build(n: usize, edges: &[(u32, u32, Weight)]) -> Csr {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in edges {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut targets = vec![0u32; edges.len()];
        let mut weights = vec![0 as Weight; edges.len()];
        let mut cursor = offsets.clone();
        for &(u, v, w) in edges {
            let slot = cursor[u as usize];
            targets[slot] = v;
            weights[slot] = w;
            cursor[u as usize] += 1;
        }
        Csr { offsets, targets, weights }
    }

    #[inline]
    fn edges(&self, v: usize) -> impl Iterator<Item = (usize, Weight)> + '_ {
        let lo = self.offsets[v];
        let hi = self.offsets[v + 1];
        self.targets[lo..hi]
            .iter()
            .zip(&self.weights[lo..hi])
            .map(|(&t, &w)| (t as usize, w))
    }
}

/// Immutable snapshot of the graph for distance computations. Plain edges
/// must be non-negative when a view is taken; designated edges may not.
pub struct GraphView {
    pub n: usize,
    fwd: Csr,
    rev: Csr,
    /// Designated edges oriented forward.
    neg: Vec<(u32, u32, Weight)>,
}

impl GraphView {
    pub fn new(g: &WeightedDigraph) -> GraphView {
        let n = g.n();
        let mut plain = Vec::new();
        let mut plain_rev = Vec::new();
        let mut neg = Vec::new();
        for u in 0..n {
            for (v, s) in g.out_edges(u) {
                if let Some(w) = s.plain {
                    debug_assert!(w >= 0, "plain edge ({u},{v}) negative in a distance view");
                    plain.push((u as u32, v as u32, w));
                    plain_rev.push((v as u32, u as u32, w));
                }
                if let Some(w) = s.neg {
                    neg.push((u as u32, v as u32, w));
                }
            }
        }
        GraphView { n, fwd: Csr::build(n, &plain), rev: Csr::build(n, &plain_rev), neg }
    }

    fn csr(&self, dir: Dir) -> &Csr {
        match dir {
            Dir::Forward => &self.fwd,
            Dir::Backward => &self.rev,
        }
    }

    fn neg_edges(&self, dir: Dir) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        self.neg.iter().map(move |&(u, v, w)| match dir {
            Dir::Forward => (u as usize, v as usize, w),
            Dir::Backward => (v as usize, u as usize, w),
        })
    }
}

pub struct HopDistArray {
    pub dist: Vec<Option<Weight>>,
    pub hops_budget: usize,
    pub relaxations: u64,
}

/// d^h(S, v) for every v (or d^h(v, S) with `Dir::Backward`): exactly h+1
/// Dijkstra passes over the plain edges interleaved with h relaxations of
/// every designated edge.
pub fn hop_sssp(view: &GraphView, sources: &[VertexId], h: usize, dir: Dir) -> HopDistArray {
    let mut dist: Vec<Option<Weight>> = vec![None; view.n];
    let mut heap: BinaryHeap<Reverse<(Weight, u32)>> = BinaryHeap::new();
    let mut relaxations = 0u64;
    for &s in sources {
        if dist[s].map_or(true, |d| d > 0) {
            dist[s] = Some(0);
            heap.push(Reverse((0, s as u32)));
        }
    }
    let csr = view.csr(dir);
    let mut drain = |dist: &mut Vec<Option<Weight>>, heap: &mut BinaryHeap<Reverse<(Weight, u32)>>| {
        while let Some(Reverse((d, v))) = heap.pop() {
            let v = v as usize;
            if dist[v] != Some(d) {
                continue;
            }
            for (t, w) in csr.edges(v) {
                relaxations += 1;
                let cand = d + w;
                if dist[t].map_or(true, |dt| cand < dt) {
                    dist[t] = Some(cand);
                    heap.push(Reverse((cand, t as u32)));
                }
            }
        }
    };
    drain(&mut dist, &mut heap);
    for _ in 0..h {
        let mut any = false;
        for (x, y, w) in view.neg_edges(dir) {
            if let Some(dx) = dist[x] {
                let cand = dx + w;
                if dist[y].map_or(true, |dy| cand < dy) {
                    dist[y] = Some(cand);
                    heap.push(Reverse((cand, y as u32)));
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
        drain(&mut dist, &mut heap);
    }
    HopDistArray { dist, hops_budget: h, relaxations }
}

/// Lexicographically extended distance: the weight plus the identity of the
/// source-set endpoint as a tie-breaker. Comparisons order missing paths
/// last, then by endpoint index, giving a strict total order on distinct
/// vertex pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtDist {
    pub d: Option<Weight>,
    pub via: VertexId,
}

impl Ord for ExtDist {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        match (self.d, o.d) {
            (Some(a), Some(b)) => a.cmp(&b).then(self.via.cmp(&o.via)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => self.via.cmp(&o.via),
        }
    }
}

impl PartialOrd for ExtDist {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Extended-distance single source over a set: for each v the lexicographic
/// minimum of (d^h(u, v), u) over u in S (mirrored under `Dir::Backward`).
/// Also returns the number of edge relaxations performed.
pub fn hop_sssp_extended(
    view: &GraphView,
    sources: &[VertexId],
    h: usize,
    dir: Dir,
) -> (Vec<ExtDist>, u64) {
    assert!(!sources.is_empty(), "extended distances need a non-empty source set");
    let mut relaxations = 0u64;
    let mut dist: Vec<Option<(Weight, u32)>> = vec![None; view.n];
    let mut heap: BinaryHeap<Reverse<(Weight, u32, u32)>> = BinaryHeap::new();
    for &s in sources {
        let key = (0, s as u32);
        if dist[s].map_or(true, |cur| key < cur) {
            dist[s] = Some(key);
            heap.push(Reverse((0, s as u32, s as u32)));
        }
    }
    let csr = view.csr(dir);
    let mut drain = |dist: &mut Vec<Option<(Weight, u32)>>,
                     heap: &mut BinaryHeap<Reverse<(Weight, u32, u32)>>| {
        while let Some(Reverse((d, src, v))) = heap.pop() {
            let v = v as usize;
            if dist[v] != Some((d, src)) {
                continue;
            }
            for (t, w) in csr.edges(v) {
                relaxations += 1;
                let cand = (d + w, src);
                if dist[t].map_or(true, |cur| cand < cur) {
                    dist[t] = Some(cand);
                    heap.push(Reverse((cand.0, cand.1, t as u32)));
                }
            }
        }
    };
    drain(&mut dist, &mut heap);
    for _ in 0..h {
        let mut any = false;
        for (x, y, w) in view.neg_edges(dir) {
            if let Some((dx, src)) = dist[x] {
                let cand = (dx + w, src);
                if dist[y].map_or(true, |cur| cand < cur) {
                    dist[y] = Some(cand);
                    heap.push(Reverse((cand.0, cand.1, y as u32)));
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
        drain(&mut dist, &mut heap);
    }
    let smin = *sources.iter().min().unwrap();
    let out = dist
        .into_iter()
        .map(|e| match e {
            Some((d, src)) => ExtDist { d: Some(d), via: src as VertexId },
            None => ExtDist { d: None, via: smin },
        })
        .collect();
    (out, relaxations)
}

/// Early-cutoff Dijkstra over plain edges: settles vertices strictly below
/// `limit` (or everything reachable when `limit` is `None`). Returns the
/// settled set sorted by vertex index.
pub fn bounded_dijkstra(
    view: &GraphView,
    dir: Dir,
    seeds: &[(VertexId, Weight)],
    limit: Option<Weight>,
) -> (Vec<(VertexId, Weight)>, u64) {
    let mut dist: Vec<Option<Weight>> = vec![None; view.n];
    let mut settled: Vec<(VertexId, Weight)> = Vec::new();
    let mut heap: BinaryHeap<Reverse<(Weight, u32)>> = BinaryHeap::new();
    let mut relaxations = 0u64;
    for &(v, w) in seeds {
        if dist[v].map_or(true, |d| w < d) {
            dist[v] = Some(w);
            heap.push(Reverse((w, v as u32)));
        }
    }
    let csr = view.csr(dir);
    while let Some(Reverse((d, v))) = heap.pop() {
        if let Some(lim) = limit {
            if d >= lim {
                break;
            }
        }
        let v = v as usize;
        if dist[v] != Some(d) {
            continue;
        }
        settled.push((v, d));
        for (t, w) in csr.edges(v) {
            relaxations += 1;
            let cand = d + w;
            if dist[t].map_or(true, |dt| cand < dt) {
                dist[t] = Some(cand);
                heap.push(Reverse((cand, t as u32)));
            }
        }
    }
    settled.sort_unstable();
    (settled, relaxations)
}

/// The in-ball of r: every v with d^0(v, r) strictly below `delta`, with its
/// zero-hop distance.
pub fn bounded_ball_in(
    view: &GraphView,
    r: VertexId,
    delta: Option<Weight>,
) -> (Vec<(VertexId, Weight)>, u64) {
    bounded_dijkstra(view, Dir::Backward, &[(r, 0)], delta)
}

/// The out-ball of r: every v with d^1(r, v) strictly below `-delta`. Seeded
/// at r (weight 0) and at its copy through the designated edge, so it stays
/// correct even if r carries extra plain out-edges.
pub fn bounded_ball_out(
    view: &GraphView,
    r: VertexId,
    rbar: VertexId,
    pair_w: Weight,
    neg_delta: Option<Weight>,
) -> (Vec<(VertexId, Weight)>, u64) {
    bounded_dijkstra(view, Dir::Forward, &[(r, 0), (rbar, pair_w)], neg_delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_well_behaved, InputGraph, WeightedDigraph};
    use crate::oracle::{brute_hop_levels, generate_solvable, Family, GraphSpec};

    #[test]
    fn zero_hops_equals_plain_dijkstra() {
        let mut g = WeightedDigraph::with_pairs(4, vec![]);
        g.insert_edge(0, 1, 2, false).unwrap();
        g.insert_edge(1, 2, 3, false).unwrap();
        g.insert_edge(0, 2, 9, false).unwrap();
        let view = GraphView::new(&g);
        let run = hop_sssp(&view, &[0], 0, Dir::Forward);
        assert_eq!(run.dist, vec![Some(0), Some(2), Some(5), None]);
    }

    #[test]
    fn one_hop_crosses_a_designated_edge() {
        // a -> r -> r-bar -> b with the middle edge designated at -5.
        let mut g = WeightedDigraph::with_pairs(4, vec![(1, 2)]);
        g.insert_edge(0, 1, 1, false).unwrap();
        g.insert_edge(1, 2, -5, true).unwrap();
        g.insert_edge(2, 1, 5, false).unwrap();
        g.insert_edge(2, 3, 2, false).unwrap();
        let view = GraphView::new(&g);
        let h0 = hop_sssp(&view, &[0], 0, Dir::Forward);
        assert_eq!(h0.dist[3], None);
        let h1 = hop_sssp(&view, &[0], 1, Dir::Forward);
        assert_eq!(h1.dist[3], Some(-2));
        // Backward from b.
        let b1 = hop_sssp(&view, &[3], 1, Dir::Backward);
        assert_eq!(b1.dist[0], Some(-2));
    }

    #[test]
    fn matches_dp_oracle_on_random_graphs() {
        for seed in 0..60u64 {
            let spec = GraphSpec {
                family: Family::Erdos,
                n: 12,
                avg_degree: 2.5,
                weight_lo: -4,
                weight_hi: 9,
                negative_edges: 4,
                seed,
            };
            let input = generate_solvable(&spec);
            let g = to_well_behaved(&input);
            let view = GraphView::new(&g);
            for h in 0..=4usize {
                let run = hop_sssp(&view, &[0], h, Dir::Forward);
                let oracle = brute_hop_levels(&g, 0, h).pop().unwrap();
                assert_eq!(run.dist, oracle, "seed {seed} h {h}");
            }
        }
    }

    #[test]
    fn extended_singleton_matches_plain() {
        let input = InputGraph { n: 5, edges: vec![(0, 1, -2), (1, 2, 3), (2, 3, 1), (0, 4, 7)] };
        let g = to_well_behaved(&input);
        let view = GraphView::new(&g);
        let plain = hop_sssp(&view, &[0], 3, Dir::Forward);
        let (ext, _) = hop_sssp_extended(&view, &[0], 3, Dir::Forward);
        for v in 0..g.n() {
            assert_eq!(ext[v].d, plain.dist[v]);
        }
    }

    #[test]
    fn extended_breaks_ties_by_source_index() {
        let mut g = WeightedDigraph::with_pairs(4, vec![]);
        g.insert_edge(2, 0, 5, false).unwrap();
        g.insert_edge(3, 0, 5, false).unwrap();
        let view = GraphView::new(&g);
        let (ext, _) = hop_sssp_extended(&view, &[3, 2], 0, Dir::Forward);
        assert_eq!(ext[0], ExtDist { d: Some(5), via: 2 });
        // Unreached vertices fall back to the smallest source index.
        assert_eq!(ext[1], ExtDist { d: None, via: 2 });
    }

    #[test]
    fn extended_matches_bruteforce_lex_min() {
        for seed in 300..320u64 {
            let spec = GraphSpec {
                family: Family::Erdos,
                n: 10,
                avg_degree: 2.0,
                weight_lo: -3,
                weight_hi: 8,
                negative_edges: 3,
                seed,
            };
            let input = generate_solvable(&spec);
            let g = to_well_behaved(&input);
            let view = GraphView::new(&g);
            let sources = vec![0, 3, 7];
            let h = 2;
            let (ext, _) = hop_sssp_extended(&view, &sources, h, Dir::Forward);
            let per_source: Vec<Vec<Option<Weight>>> =
                sources.iter().map(|&s| brute_hop_levels(&g, s, h).pop().unwrap()).collect();
            for v in 0..g.n() {
                let mut best = ExtDist { d: None, via: *sources.iter().min().unwrap() };
                for (i, &s) in sources.iter().enumerate() {
                    let cand = ExtDist { d: per_source[i][v], via: s };
                    if cand.d.is_some() && cand < best {
                        best = cand;
                    }
                }
                assert_eq!(ext[v], best, "seed {seed} v {v}");
            }
        }
    }

    #[test]
    fn ball_in_chain_fixture() {
        // a -> b -> r with weights 1, 1 and delta 3.
        let mut g = WeightedDigraph::with_pairs(3, vec![]);
        g.insert_edge(0, 1, 1, false).unwrap();
        g.insert_edge(1, 2, 1, false).unwrap();
        let view = GraphView::new(&g);
        let (ball, _) = bounded_ball_in(&view, 2, Some(3));
        assert_eq!(ball, vec![(0, 2), (1, 1), (2, 0)]);
        // Strictness: delta equal to an exact distance excludes that vertex.
        let (ball, _) = bounded_ball_in(&view, 2, Some(2));
        assert_eq!(ball, vec![(1, 1), (2, 0)]);
        // Non-positive delta gives an empty ball.
        let (ball, _) = bounded_ball_in(&view, 2, Some(-1));
        assert!(ball.is_empty());
    }

    #[test]
    fn ball_out_fixture() {
        let mut g = WeightedDigraph::with_pairs(4, vec![(0, 1)]);
        g.insert_edge(0, 1, -5, true).unwrap();
        g.insert_edge(1, 0, 5, false).unwrap();
        g.insert_edge(1, 2, 2, false).unwrap();
        let view = GraphView::new(&g);
        let (ball, _) = bounded_ball_out(&view, 0, 1, -5, Some(1i64.wrapping_neg()));
        assert_eq!(ball, vec![(1, -5), (2, -3)]);
        // delta >= 5 excludes the copy and empties the ball.
        let (ball, _) = bounded_ball_out(&view, 0, 1, -5, Some(-5));
        assert!(ball.is_empty());
    }

    #[test]
    fn balls_match_bruteforce_sublevel_sets() {
        for seed in 400..430u64 {
            let spec = GraphSpec {
                family: Family::Erdos,
                n: 10,
                avg_degree: 2.5,
                weight_lo: -4,
                weight_hi: 9,
                negative_edges: 3,
                seed,
            };
            let input = generate_solvable(&spec);
            let g = to_well_behaved(&input);
            let view = GraphView::new(&g);
            for r in g.negative_vertices().take(4) {
                let rb = g.partner(r).unwrap();
                let pw = g.pair_weight(r);
                for delta in [-2, 0, 1, 3, 7] {
                    let (ball, _) = bounded_ball_in(&view, r, Some(delta));
                    for v in 0..g.n() {
                        let d0 = brute_hop_levels(&g, v, 0)[0][r];
                        let expect = d0.map_or(false, |d| d < delta);
                        assert_eq!(ball.iter().any(|&(x, _)| x == v), expect);
                        if let Some(&(_, got)) = ball.iter().find(|&&(x, _)| x == v) {
                            assert_eq!(Some(got), d0);
                        }
                    }
                    let (ball, _) = bounded_ball_out(&view, r, rb, pw, Some(-delta));
                    let lv = brute_hop_levels(&g, r, 1).pop().unwrap();
                    for v in 0..g.n() {
                        let expect = lv[v].map_or(false, |d| d < -delta);
                        assert_eq!(ball.iter().any(|&(x, _)| x == v), expect, "seed {seed}");
                    }
                }
            }
        }
    }
}
