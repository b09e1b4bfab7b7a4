//! Graph representation: vertex taxonomy, negative pairs, potential
//! reweighting, the well-behaved input transform, and frozen adjacency
//! snapshots used by the shortcutting phases.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, NegCycle, NegCycleEdge};

/// Exact edge weight. All pipeline arithmetic is integer-exact; absence of a
/// path is represented by `Option::None`, never by a large finite value.
pub type Weight = i64;

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    /// Original vertices and their copies from the input transform.
    Regular,
    /// Compresses a prefix of some heavy vertex's incoming adjacency.
    InSteiner,
    /// Compresses a prefix of some heavy vertex's outgoing adjacency.
    OutSteiner,
    /// Per-(negative vertex, iteration) hub collecting shortcut edges.
    Hub,
}

#[derive(Clone, Copy, Debug)]
pub struct VertexMeta {
    pub kind: VertexKind,
    /// Iteration in which the vertex was created; original vertices are level 0.
    pub level: u32,
    /// Owner for Steiner vertices, negative vertex for hubs.
    pub parent: Option<VertexId>,
    pub heavy: bool,
}

/// Per ordered pair we keep at most one stored edge per negativity class
/// (minimum weight wins). `neg` is the designated-negative class: it marks
/// edges that count as hops, independent of the sign of their weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Slots {
    pub plain: Option<Weight>,
    pub neg: Option<Weight>,
}

impl Slots {
    pub fn min_weight(&self) -> Option<Weight> {
        match (self.plain, self.neg) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        }
    }
    pub fn is_empty(&self) -> bool {
        self.plain.is_none() && self.neg.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRole {
    /// The vertex owns the designated negative edge (it is a negative vertex).
    Tail(usize),
    /// The vertex is the copy that receives the designated edge.
    Head(usize),
}

/// Directed multigraph with designated negative pairs and min-weight
/// deduplication per ordered pair and negativity class.
#[derive(Clone)]
pub struct WeightedDigraph {
    metas: Vec<VertexMeta>,
    out: Vec<HashMap<VertexId, Slots>>,
    /// Tails of in-edges per vertex (class-agnostic index used for scans and
    /// the restore step; weights live in `out`).
    in_tails: Vec<HashSet<VertexId>>,
    /// Frozen (r, r-bar) pairs; index is the pair id.
    pairs: Vec<(VertexId, VertexId)>,
    pair_role: Vec<Option<PairRole>>,
    pub edge_insertions: u64,
}

impl WeightedDigraph {
    pub fn with_pairs(n: usize, pairs: Vec<(VertexId, VertexId)>) -> Self {
        let mut pair_role = vec![None; n];
        for (i, &(r, rb)) in pairs.iter().enumerate() {
            pair_role[r] = Some(PairRole::Tail(i));
            pair_role[rb] = Some(PairRole::Head(i));
        }
        WeightedDigraph {
            metas: vec![
                VertexMeta { kind: VertexKind::Regular, level: 0, parent: None, heavy: true };
                n
            ],
            out: vec![HashMap::new(); n],
            in_tails: vec![HashSet::new(); n],
            pairs,
            pair_role,
            edge_insertions: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.metas.len()
    }

    pub fn meta(&self, v: VertexId) -> &VertexMeta {
        &self.metas[v]
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.metas[v].kind
    }

    pub fn level(&self, v: VertexId) -> u32 {
        self.metas[v].level
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.metas[v].parent
    }

    pub fn is_heavy(&self, v: VertexId) -> bool {
        self.metas[v].heavy
    }

    pub fn set_heavy(&mut self, v: VertexId, heavy: bool) {
        self.metas[v].heavy = heavy;
    }

    pub fn add_vertex(&mut self, kind: VertexKind, level: u32, parent: Option<VertexId>) -> VertexId {
        let id = self.metas.len();
        // Hubs stay heavy for good; in/out-Steiners are classified at the end
        // of their creation iteration and must not test as light before then.
        self.metas.push(VertexMeta { kind, level, parent, heavy: true });
        self.out.push(HashMap::new());
        self.in_tails.push(HashSet::new());
        self.pair_role.push(None);
        id
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, i: usize) -> (VertexId, VertexId) {
        self.pairs[i]
    }

    pub fn pair_role(&self, v: VertexId) -> Option<PairRole> {
        self.pair_role[v]
    }

    pub fn is_neg_tail(&self, v: VertexId) -> bool {
        matches!(self.pair_role[v], Some(PairRole::Tail(_)))
    }

    pub fn is_neg_head(&self, v: VertexId) -> bool {
        matches!(self.pair_role[v], Some(PairRole::Head(_)))
    }

    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        match self.pair_role[v] {
            Some(PairRole::Tail(i)) => Some(self.pairs[i].1),
            Some(PairRole::Head(i)) => Some(self.pairs[i].0),
            None => None,
        }
    }

    pub fn negative_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.pairs.iter().map(|&(r, _)| r)
    }

    /// Weight of the designated negative edge of pair tail `r`.
    pub fn pair_weight(&self, r: VertexId) -> Weight {
        let rb = self.partner(r).expect("pair tail");
        self.out[r].get(&rb).and_then(|s| s.neg).expect("designated edge present")
    }

    pub fn slots(&self, u: VertexId, v: VertexId) -> Slots {
        self.out[u].get(&v).copied().unwrap_or_default()
    }

    pub fn out_edges(&self, u: VertexId) -> impl Iterator<Item = (VertexId, Slots)> + '_ {
        self.out[u].iter().map(|(&v, &s)| (v, s))
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out[u].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_tails[v].len()
    }

    pub fn in_tails(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.in_tails[v].iter().copied()
    }

    /// Minimum weight of the connection u -> v, reading through the
    /// convention that a non-negative edge out of a negative vertex is stored
    /// as a two-edge path through its copy.
    pub fn conv_weight(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        let mut best = self.slots(u, v).min_weight();
        if self.is_neg_tail(u) {
            let ub = self.partner(u).unwrap();
            if v != ub {
                if let Some(w2) = self.slots(ub, v).min_weight() {
                    let via = self.pair_weight(u) + w2;
                    best = Some(best.map_or(via, |b| b.min(via)));
                }
            }
        }
        best
    }

    /// Insert an edge with min-weight dedup per (pair, class). Non-negative
    /// plain insertions whose tail is a negative vertex are routed through the
    /// partner copy so the tail keeps out-degree 1 between iterations.
    /// Negative plain insertions stay literal; the restore step lifts them.
    pub fn insert_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        w: Weight,
        negative: bool,
    ) -> Result<(), Error> {
        self.edge_insertions += 1;
        if u == v {
            if w < 0 {
                return Err(Error::NegativeCycle(NegCycle {
                    edges: vec![NegCycleEdge { from: u, to: u, weight: w }],
                    total: w,
                    input_coordinates: false,
                }));
            }
            return Ok(());
        }
        if !negative && w >= 0 && self.is_neg_tail(u) {
            let ub = self.partner(u).unwrap();
            if v != ub {
                let w2 = w - self.pair_weight(u);
                return self.insert_edge(ub, v, w2, false);
            }
        }
        let slot = self.out[u].entry(v).or_default();
        let cell = if negative { &mut slot.neg } else { &mut slot.plain };
        match cell {
            Some(old) => *old = (*old).min(w),
            None => *cell = Some(w),
        }
        self.in_tails[v].insert(u);
        Ok(())
    }

    /// Remove one class slot of (u, v); drops the in-index entry when both
    /// classes are gone.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId, negative: bool) {
        if let Some(slot) = self.out[u].get_mut(&v) {
            if negative {
                slot.neg = None;
            } else {
                slot.plain = None;
            }
            if slot.is_empty() {
                self.out[u].remove(&v);
                self.in_tails[v].remove(&u);
            }
        }
    }

    pub fn set_slot_weight(&mut self, u: VertexId, v: VertexId, negative: bool, w: Weight) {
        let slot = self.out[u].entry(v).or_default();
        if negative {
            slot.neg = Some(w);
        } else {
            slot.plain = Some(w);
        }
        self.in_tails[v].insert(u);
    }

    pub fn total_edge_slots(&self) -> u64 {
        self.out
            .iter()
            .map(|m| {
                m.values()
                    .map(|s| s.plain.is_some() as u64 + s.neg.is_some() as u64)
                    .sum::<u64>()
            })
            .sum()
    }
}

/// Input digraph prior to the well-behaved transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, Weight)>,
}

/// Convert an arbitrary weighted digraph into the equivalent well-behaved
/// form: every vertex v gets a copy v-bar one designated negative edge apart,
/// and each original edge (u, v) is re-hung as (u-bar, v). Distances between
/// original vertices are preserved exactly.
pub fn to_well_behaved(input: &InputGraph) -> WeightedDigraph {
    let n = input.n;
    let pairs: Vec<(VertexId, VertexId)> = (0..n).map(|v| (v, v + n)).collect();
    let mut g = WeightedDigraph::with_pairs(2 * n, pairs);
    let mut w_min = vec![0i64; n];
    for &(u, _, w) in &input.edges {
        w_min[u] = w_min[u].min(w);
    }
    for v in 0..n {
        g.insert_edge(v, v + n, w_min[v], true).expect("pair edge");
        g.insert_edge(v + n, v, -w_min[v], false).expect("companion edge");
    }
    for &(u, v, w) in &input.edges {
        g.insert_edge(u + n, v, w - w_min[u], false).expect("transformed edge");
    }
    g
}

/// Cumulative valid potential per vertex plus the anchor bookkeeping used by
/// the distance-preservation checks.
#[derive(Clone)]
pub struct PotentialLedger {
    pub phi: Vec<Weight>,
    pub psi: Vec<Weight>,
    pub anchor: Vec<VertexId>,
    /// Creation-time records for consistency replay: (parent edge weight,
    /// phi of the vertex, phi of its anchor at creation).
    pub creation: Vec<(Weight, Weight, Weight)>,
}

impl PotentialLedger {
    pub fn for_graph(g: &WeightedDigraph) -> Self {
        let n = g.n();
        let mut anchor = vec![0; n];
        let mut psi = vec![0; n];
        for i in 0..g.pair_count() {
            let (r, rb) = g.pair(i);
            anchor[r] = r;
            psi[r] = 0;
            anchor[rb] = r;
            psi[rb] = -g.pair_weight(r);
        }
        PotentialLedger {
            phi: vec![0; n],
            psi,
            anchor,
            creation: vec![(0, 0, 0); n],
        }
    }

    pub fn push_steiner(&mut self, kind: VertexKind, parent: VertexId, parent_edge_w: Weight) {
        let anc = self.anchor[parent];
        let psi = match kind {
            VertexKind::InSteiner => parent_edge_w + self.psi[parent],
            VertexKind::OutSteiner => -parent_edge_w + self.psi[parent],
            VertexKind::Hub => parent_edge_w,
            VertexKind::Regular => unreachable!("regular vertices exist from the start"),
        };
        let anc = if kind == VertexKind::Hub { parent } else { anc };
        self.anchor.push(anc);
        self.psi.push(psi);
        self.phi.push(0);
        self.creation.push((parent_edge_w, 0, self.phi[anc]));
    }

    /// Fold a potential increment into phi and the analysis potential.
    pub fn apply_delta(&mut self, delta: &[Weight]) {
        for v in 0..self.phi.len() {
            let a = self.anchor[v];
            self.psi[v] += delta[v] - delta[a];
            self.phi[v] += delta[v];
        }
    }
}

/// Reweight every stored edge by `w + phi(u) - phi(v)`. Fails if a previously
/// non-negative plain edge would become negative (the potential is invalid).
pub fn apply_potential(
    g: &mut WeightedDigraph,
    ledger: &mut PotentialLedger,
    delta: &[Weight],
) -> Result<(), Error> {
    assert_eq!(delta.len(), g.n());
    for u in 0..g.n() {
        for (&v, slot) in g.out[u].iter() {
            if let Some(w) = slot.plain {
                if w >= 0 && w + delta[u] - delta[v] < 0 {
                    return Err(Error::PotentialInvalid { from: u, to: v });
                }
            }
        }
    }
    for u in 0..g.n() {
        let du = delta[u];
        // Safe to mutate values in place: keys are untouched.
        let adj = &mut g.out[u];
        let heads: Vec<VertexId> = adj.keys().copied().collect();
        for v in heads {
            let dv = delta[v];
            let slot = adj.get_mut(&v).unwrap();
            if let Some(w) = slot.plain.as_mut() {
                *w += du - dv;
            }
            if let Some(w) = slot.neg.as_mut() {
                *w += du - dv;
            }
        }
    }
    ledger.apply_delta(delta);
    Ok(())
}

/// Frozen per-iteration adjacency views: only non-negative-weight edges, with
/// the Steiner parent/child exclusions applied. Heavy vertices' lists are
/// sorted by weight non-increasing, ties by vertex index.
pub struct AuxLists {
    pub a_in: Vec<Vec<(VertexId, Weight)>>,
    pub a_out: Vec<Vec<(VertexId, Weight)>>,
}

pub fn snapshot_aux_lists(g: &WeightedDigraph) -> AuxLists {
    let n = g.n();
    let mut a_in: Vec<Vec<(VertexId, Weight)>> = vec![Vec::new(); n];
    let mut a_out: Vec<Vec<(VertexId, Weight)>> = vec![Vec::new(); n];
    for u in 0..n {
        for (v, slot) in g.out_edges(u) {
            // Admit the cheapest non-negative connection for this ordered pair.
            let mut w_ok: Option<Weight> = None;
            for w in [slot.plain, slot.neg].into_iter().flatten() {
                if w >= 0 {
                    w_ok = Some(w_ok.map_or(w, |b: Weight| b.min(w)));
                }
            }
            if let Some(w) = w_ok {
                a_out[u].push((v, w));
                a_in[v].push((u, w));
            }
        }
    }
    for v in 0..n {
        match g.kind(v) {
            VertexKind::InSteiner => {
                a_in[v].clear();
                let p = g.parent(v).unwrap();
                a_out[v].retain(|&(u, _)| u != p);
            }
            VertexKind::OutSteiner => {
                a_out[v].clear();
                let p = g.parent(v).unwrap();
                a_in[v].retain(|&(u, _)| u != p);
            }
            _ => {
                // A heavy vertex does not list its own Steiner children.
                a_in[v].retain(|&(u, _)| {
                    !(g.kind(u) == VertexKind::InSteiner && g.parent(u) == Some(v))
                });
                a_out[v].retain(|&(u, _)| {
                    !(g.kind(u) == VertexKind::OutSteiner && g.parent(u) == Some(v))
                });
            }
        }
        a_in[v].sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        a_out[v].sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    }
    AuxLists { a_in, a_out }
}
