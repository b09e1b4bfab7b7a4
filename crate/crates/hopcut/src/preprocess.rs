//! Iteration preprocessing: reweighting via betweenness reduction, randomized
//! scale estimation of per-vertex thresholds, monotone repair, the four-case
//! threshold selection, and the bounded-ball computation.

use rayon::prelude::*;

use crate::config::BetweennessMode;
use crate::counters::IterationCounters;
use crate::engine::{replay_deferred, Pipeline};
use crate::error::{Error, NegCycle, NegCycleEdge};
use crate::graph::{apply_potential, VertexId, Weight, WeightedDigraph};
use crate::hops::{bounded_ball_in, bounded_ball_out, hop_sssp_extended, Dir, ExtDist, GraphView};

/// Bellman-Ford from a virtual super-source over the whole graph: returns a
/// valid potential that zeroes every reduced weight (hence every hop
/// betweenness), or a negative-cycle certificate. This is the exact-oracle
/// realization of the reduction contract.
pub fn exact_reduction(g: &WeightedDigraph) -> Result<Vec<Weight>, Error> {
    let n = g.n();
    let mut edges: Vec<(usize, usize, Weight)> = Vec::new();
    for u in 0..n {
        for (v, s) in g.out_edges(u) {
            if let Some(w) = s.plain {
                edges.push((u, v, w));
            }
            if let Some(w) = s.neg {
                edges.push((u, v, w));
            }
        }
    }
    let mut dist = vec![0 as Weight; n];
    let mut pred: Vec<Option<(usize, Weight)>> = vec![None; n];
    for round in 0..=n {
        let mut witness = None;
        for &(u, v, w) in &edges {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                pred[v] = Some((u, w));
                witness = Some(v);
            }
        }
        match witness {
            None => return Ok(dist),
            Some(x) if round == n => {
                let mut cur = x;
                for _ in 0..n {
                    cur = pred[cur].expect("improved vertex has predecessor").0;
                }
                let start = cur;
                let mut rev = Vec::new();
                loop {
                    let (p, w) = pred[cur].expect("cycle predecessor");
                    rev.push(NegCycleEdge { from: p, to: cur, weight: w });
                    cur = p;
                    if cur == start {
                        break;
                    }
                }
                rev.reverse();
                let total = rev.iter().map(|e| e.weight).sum();
                return Err(Error::NegativeCycle(NegCycle {
                    edges: rev,
                    total,
                    input_coordinates: false,
                }));
            }
            Some(_) => {}
        }
    }
    Ok(dist)
}

/// Dispatch on the configured reduction mode.
pub fn betweenness_reduce(
    g: &WeightedDigraph,
    mode: &BetweennessMode,
    b: f64,
    h: usize,
) -> Result<Vec<Weight>, Error> {
    match mode {
        BetweennessMode::ExactOracle => exact_reduction(g),
        BetweennessMode::Sampled(hook) => hook.reduce(g, b, h),
    }
}

/// Estimated radii at every dyadic scale, per negative vertex.
pub struct ScaleTable {
    /// `din[pair][scale-1]`, scales 1..=l_scale.
    pub din: Vec<Vec<ExtDist>>,
    pub dout: Vec<Vec<ExtDist>>,
}

fn mix_seed(seed: u64, a: u64, b: u64, c: u64) -> u64 {
    let mut x = seed ^ (a << 42) ^ (b << 21) ^ c;
    // splitmix64 finalizer
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// One scale of the estimation algorithm: sample vertex sets with inclusion
/// probability 2^-scale, compute extended hop distances from and to the
/// sample, and take per-vertex lower medians across repetitions.
pub fn estimate_scale(
    view: &GraphView,
    negs: &[VertexId],
    scale: u32,
    reps: usize,
    h: usize,
    seed: u64,
) -> Result<(Vec<ExtDist>, Vec<ExtDist>, u64), Error> {
    use rand::{RngCore, SeedableRng};
    let n = view.n;
    let mask: u64 = (1u64 << scale.min(63)) - 1;
    let runs: Vec<Result<(Vec<ExtDist>, Vec<ExtDist>, u64), Error>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut sample: Vec<VertexId> = Vec::new();
            for retry in 0..20u64 {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mix_seed(
                    seed,
                    scale as u64,
                    rep as u64,
                    retry,
                ));
                sample = (0..n).filter(|_| rng.next_u64() & mask == 0).collect();
                if !sample.is_empty() {
                    break;
                }
            }
            if sample.is_empty() {
                return Err(Error::EmptySampleRetry(20));
            }
            let (fwd, r1) = hop_sssp_extended(view, &sample, h, Dir::Forward);
            let (bwd, r2) = hop_sssp_extended(view, &sample, h, Dir::Backward);
            let fin: Vec<ExtDist> = negs.iter().map(|&r| fwd[r]).collect();
            let fout: Vec<ExtDist> = negs.iter().map(|&r| bwd[r]).collect();
            Ok((fin, fout, r1 + r2))
        })
        .collect();
    let mut per_rep_in: Vec<Vec<ExtDist>> = Vec::with_capacity(reps);
    let mut per_rep_out: Vec<Vec<ExtDist>> = Vec::with_capacity(reps);
    let mut relax = 0u64;
    for r in runs {
        let (fin, fout, rx) = r?;
        per_rep_in.push(fin);
        per_rep_out.push(fout);
        relax += rx;
    }
    let lower_median = |mut xs: Vec<ExtDist>| -> ExtDist {
        xs.sort_unstable();
        xs[(xs.len() - 1) / 2]
    };
    let din = (0..negs.len())
        .map(|i| lower_median(per_rep_in.iter().map(|rep| rep[i]).collect()))
        .collect();
    let dout = (0..negs.len())
        .map(|i| lower_median(per_rep_out.iter().map(|rep| rep[i]).collect()))
        .collect();
    Ok((din, dout, relax))
}

/// Prefix-maximum under the lexicographic order, independently per vertex and
/// side; idempotent.
pub fn monotone_repair(table: &mut ScaleTable) {
    for row in table.din.iter_mut().chain(table.dout.iter_mut()) {
        for i in 1..row.len() {
            if row[i] < row[i - 1] {
                row[i] = row[i - 1];
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaChoice {
    Finite(Weight),
    /// The in-side estimate saturated at infinity: take the whole reachable
    /// in-ball and leave the out-ball empty.
    AllIn,
}

/// The four exhaustive threshold cases over the repaired scale sequences.
pub fn choose_delta(din: &[ExtDist], dout: &[ExtDist]) -> DeltaChoice {
    let l = din.len();
    assert!(l >= 1 && dout.len() == l);
    let sum_ge0 = |a: Option<Weight>, b: Option<Weight>| match (a, b) {
        (Some(x), Some(y)) => x + y >= 0,
        _ => true,
    };
    let lt = |a: Option<Weight>, b: Option<Weight>| match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    };
    let crossing = (0..l).find(|&i| sum_ge0(din[i].d, dout[i].d));
    match crossing {
        None => DeltaChoice::Finite(din[l - 1].d.expect("no crossing forces a finite last radius")),
        Some(0) => match din[0].d {
            Some(d) => DeltaChoice::Finite(d),
            None => DeltaChoice::AllIn,
        },
        Some(i) => {
            let din_prev = din[i - 1].d.expect("pre-crossing sums are finite");
            let dout_prev = dout[i - 1].d.expect("pre-crossing sums are finite");
            if lt(Some(din_prev), din[i].d) {
                // In-radius strictly grew at the crossing.
                let ok = match din[i].d {
                    Some(d) => -dout_prev <= d,
                    None => true,
                };
                if ok {
                    DeltaChoice::Finite(-dout_prev)
                } else {
                    DeltaChoice::Finite(din[i].d.unwrap())
                }
            } else if lt(Some(dout_prev), dout[i].d) {
                let ok = match dout[i].d {
                    Some(d) => din_prev >= -d,
                    None => false,
                };
                if ok || dout[i].d.is_none() {
                    DeltaChoice::Finite(din_prev)
                } else {
                    DeltaChoice::Finite(-dout[i].d.unwrap())
                }
            } else {
                unreachable!("the repaired sums strictly increased at the crossing index")
            }
        }
    }
}

/// Per negative vertex: the chosen threshold and its bounded balls, with the
/// hop distances of every member.
pub struct ThresholdTable {
    pub delta: Vec<Weight>,
    pub ball_in: Vec<Vec<(VertexId, Weight)>>,
    pub ball_out: Vec<Vec<(VertexId, Weight)>>,
}

pub fn resolve_thresholds(
    view: &GraphView,
    g: &WeightedDigraph,
    choices: &[DeltaChoice],
) -> (ThresholdTable, u64) {
    let per_pair: Vec<(Weight, Vec<(VertexId, Weight)>, Vec<(VertexId, Weight)>, u64)> = (0..g
        .pair_count())
        .into_par_iter()
        .map(|i| {
            let (r, rb) = g.pair(i);
            let pw = g.pair_weight(r);
            match choices[i] {
                DeltaChoice::Finite(d) => {
                    let (bin, x1) = bounded_ball_in(view, r, Some(d));
                    let (bout, x2) = bounded_ball_out(view, r, rb, pw, Some(-d));
                    (d, bin, bout, x1 + x2)
                }
                DeltaChoice::AllIn => {
                    let (bin, x1) = bounded_ball_in(view, r, None);
                    let d = bin.iter().map(|&(_, w)| w).max().unwrap_or(0) + 1;
                    (d, bin, Vec::new(), x1)
                }
            }
        })
        .collect();
    let mut table = ThresholdTable {
        delta: Vec::with_capacity(per_pair.len()),
        ball_in: Vec::with_capacity(per_pair.len()),
        ball_out: Vec::with_capacity(per_pair.len()),
    };
    let mut relax = 0;
    for (d, bin, bout, x) in per_pair {
        table.delta.push(d);
        table.ball_in.push(bin);
        table.ball_out.push(bout);
        relax += x;
    }
    (table, relax)
}

/// Number of dyadic scales for the current vertex count.
pub fn scale_count(n: usize) -> u32 {
    ((n.max(8) as f64).log2().floor() as u32).saturating_sub(2).max(1)
}

pub fn estimate_reps(n: usize, reps_const: f64) -> usize {
    ((reps_const * (n.max(3) as f64).ln()).ceil() as usize).max(1)
}

/// Phase 1 of one iteration: reweight, replay deferred insertions, estimate
/// the scale radii, repair them, choose thresholds, and compute the balls.
pub fn phase1(
    pipe: &mut Pipeline,
    t: u32,
    ic: &mut IterationCounters,
) -> Result<(ThresholdTable, f64), Error> {
    let eta = pipe.g.pair_count() as f64;
    let b = (eta / pipe.gamma as f64).max(1.0);
    let phi = betweenness_reduce(&pipe.g, &pipe.cfg.mode, b, pipe.h)?;
    apply_potential(&mut pipe.g, &mut pipe.ledger, &phi)?;
    replay_deferred(pipe, ic)?;
    pipe.cfg.check_deadline()?;

    let n = pipe.g.n();
    let lambda = n as f64 / b.sqrt();
    ic.lambda = lambda;
    ic.b_param = b;

    let view = GraphView::new(&pipe.g);
    let negs: Vec<VertexId> = pipe.g.negative_vertices().collect();
    let l_scale = scale_count(n);
    let reps = estimate_reps(n, pipe.cfg.reps_const);
    let mut table = ScaleTable {
        din: vec![Vec::with_capacity(l_scale as usize); negs.len()],
        dout: vec![Vec::with_capacity(l_scale as usize); negs.len()],
    };
    for scale in 1..=l_scale {
        let (din, dout, rx) =
            estimate_scale(&view, &negs, scale, reps, pipe.h, mix_seed(pipe.cfg.seed, t as u64, 0, 0))?;
        for (i, (a, b)) in din.into_iter().zip(dout).enumerate() {
            table.din[i].push(a);
            table.dout[i].push(b);
        }
        ic.estimate_relaxations += rx;
        pipe.cfg.check_deadline()?;
    }
    monotone_repair(&mut table);
    let choices: Vec<DeltaChoice> =
        (0..negs.len()).map(|i| choose_delta(&table.din[i], &table.dout[i])).collect();
    let (thresholds, rx) = resolve_thresholds(&view, &pipe.g, &choices);
    ic.ball_relaxations += rx;
    for i in 0..negs.len() {
        let s = (thresholds.ball_in[i].len() + thresholds.ball_out[i].len()) as u64;
        ic.ball_sum += s;
        ic.ball_sum_sq += s * s;
    }
    Ok((thresholds, lambda))
}
