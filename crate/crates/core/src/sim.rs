//! Iteration-limited belief-propagation decoding and bit-error-rate
//! simulation over the erasure and binary-input AWGN channels.
//!
//! Transmission always uses the all-zero codeword. On the AWGN channel BPSK
//! maps bit 0 to `+1`, and LLRs are positive for bit 0.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::component::{CodeKind, ComponentCodeSpec};
use crate::construct::{ParityCheckMatrix, TannerGraph};
use crate::error::{Error, Result};
use crate::exit::{ChannelKind, ChannelParameter};

/// Message magnitude limit of the sum-product decoder.
pub const LLR_CLAMP: f64 = 30.0;
/// Default stopping rule per grid point.
pub const DEFAULT_TARGET_BIT_ERRORS: u64 = 200;
pub const DEFAULT_MAX_WORDS: u64 = 1_000_000;
/// Largest batch of words simulated between two checks of the stopping rule.
const MAX_BATCH: u64 = 1024;

const ERASED: u8 = 2;

/// Flattened graph for the decoders: edges are numbered in check-socket
/// order.
#[derive(Debug, Clone)]
pub struct DecoderGraph {
    n: usize,
    cn_offsets: Vec<usize>,
    edge_vn: Vec<u32>,
    vn_offsets: Vec<usize>,
    /// Edge ids of each variable node.
    vn_edges: Vec<u32>,
    /// Check index of each entry of `vn_edges`.
    vn_checks: Vec<u32>,
    codes: Vec<Arc<ComponentCodeSpec>>,
    spc: Vec<bool>,
}

impl DecoderGraph {
    pub fn new(graph: &TannerGraph) -> Self {
        let n = graph.block_length();
        let mut cn_offsets = vec![0];
        let mut edge_vn = Vec::with_capacity(graph.edge_count());
        for c in graph.checks() {
            edge_vn.extend(c.sockets.iter().map(|&v| v as u32));
            cn_offsets.push(edge_vn.len());
        }
        let mut vn_offsets = vec![0];
        let mut vn_edges = Vec::with_capacity(edge_vn.len());
        let mut vn_checks = Vec::with_capacity(edge_vn.len());
        for v in 0..n {
            for &(c, socket) in graph.vn_neighbors(v) {
                vn_edges.push((cn_offsets[c] + socket) as u32);
                vn_checks.push(c as u32);
            }
            vn_offsets.push(vn_edges.len());
        }
        let codes: Vec<Arc<ComponentCodeSpec>> = graph.checks().iter().map(|c| Arc::clone(&c.code)).collect();
        let spc = codes.iter().map(|c| c.kind().is_spc()).collect();
        Self { n, cn_offsets, edge_vn, vn_offsets, vn_edges, vn_checks, codes, spc }
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    fn check_count(&self) -> usize {
        self.codes.len()
    }

    fn sockets(&self, c: usize) -> &[u32] {
        &self.edge_vn[self.cn_offsets[c]..self.cn_offsets[c + 1]]
    }

    fn checks_of(&self, v: usize) -> &[u32] {
        &self.vn_checks[self.vn_offsets[v]..self.vn_offsets[v + 1]]
    }
}

/// Reusable buffers of the erasure decoder.
#[derive(Debug, Default)]
struct BecScratch {
    frontier: Vec<u32>,
    next: Vec<u32>,
    stamp: Vec<u32>,
    pending: Vec<(u32, u8)>,
}

/// Flooding erasure decoding in place on `state` (0, 1 or [`ERASED`]).
/// Returns the number of rounds that resolved at least one bit.
fn bec_rounds(g: &DecoderGraph, state: &mut [u8], i_max: usize, s: &mut BecScratch) -> usize {
    s.stamp.clear();
    s.stamp.resize(g.check_count(), 0);
    s.frontier.clear();
    for v in 0..g.n {
        if state[v] == ERASED {
            for &c in g.checks_of(v) {
                if s.stamp[c as usize] == 0 {
                    s.stamp[c as usize] = 1;
                    s.frontier.push(c);
                }
            }
        }
    }
    let mut rounds = 0;
    while rounds < i_max && !s.frontier.is_empty() {
        s.pending.clear();
        for &c in &s.frontier {
            let c = c as usize;
            let sockets = g.sockets(c);
            if g.spc[c] {
                let mut erased = None;
                let mut count = 0;
                let mut parity = 0u8;
                for &v in sockets {
                    match state[v as usize] {
                        ERASED => {
                            count += 1;
                            erased = Some(v);
                            if count > 1 {
                                break;
                            }
                        }
                        b => parity ^= b,
                    }
                }
                if count == 1 {
                    s.pending.push((erased.expect("one erasure"), parity));
                }
            } else {
                let (mut erased, mut values) = (0u64, 0u64);
                for (j, &v) in sockets.iter().enumerate() {
                    match state[v as usize] {
                        ERASED => erased |= 1 << j,
                        1 => values |= 1 << j,
                        _ => {}
                    }
                }
                let (resolved, vals) = g.codes[c].resolve_masks(erased, values);
                let mut r = resolved;
                while r != 0 {
                    let j = r.trailing_zeros() as usize;
                    s.pending.push((sockets[j], ((vals >> j) & 1) as u8));
                    r &= r - 1;
                }
            }
        }
        if s.pending.is_empty() {
            break;
        }
        rounds += 1;
        let mark = rounds as u32 + 1;
        s.next.clear();
        for &(v, b) in &s.pending {
            let v = v as usize;
            if state[v] != ERASED {
                continue;
            }
            state[v] = b;
            for &c in g.checks_of(v) {
                if s.stamp[c as usize] != mark {
                    s.stamp[c as usize] = mark;
                    s.next.push(c);
                }
            }
        }
        std::mem::swap(&mut s.frontier, &mut s.next);
    }
    rounds
}

/// Output of the erasure decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct BecDecoding {
    pub word: Vec<Option<bool>>,
    pub iterations: usize,
}

/// Iterative erasure decoding: in each round every check node applies MAP
/// erasure decoding of its component code to its sockets. Stops after
/// `i_max` rounds or when a round resolves nothing.
pub fn decode_bec(graph: &TannerGraph, received: &[Option<bool>], i_max: usize) -> BecDecoding {
    let g = DecoderGraph::new(graph);
    assert_eq!(received.len(), g.n, "received word length");
    let mut state: Vec<u8> = received.iter().map(|b| b.map_or(ERASED, u8::from)).collect();
    let iterations = bec_rounds(&g, &mut state, i_max, &mut BecScratch::default());
    BecDecoding {
        word: state.iter().map(|&b| (b != ERASED).then_some(b == 1)).collect(),
        iterations,
    }
}

/// `a ⊞ b`, the LLR of the XOR of two independent bits.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Reusable buffers of the sum-product decoder.
#[derive(Debug, Default)]
struct AwgnScratch {
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    forward: Vec<f64>,
    app: Vec<f64>,
    hard: Vec<u8>,
}

fn spa_iterations(g: &DecoderGraph, llr: &[f64], i_max: usize, s: &mut AwgnScratch) -> usize {
    let e = g.edge_vn.len();
    s.app.clear();
    s.app.extend_from_slice(llr);
    s.hard.clear();
    s.hard.extend(llr.iter().map(|&l| u8::from(l < 0.0)));
    if i_max == 0 {
        return 0;
    }
    s.v2c.clear();
    s.v2c.extend(g.edge_vn.iter().map(|&v| llr[v as usize].clamp(-LLR_CLAMP, LLR_CLAMP)));
    s.c2v.clear();
    s.c2v.resize(e, 0.0);
    for it in 1..=i_max {
        for c in 0..g.check_count() {
            let (lo, hi) = (g.cn_offsets[c], g.cn_offsets[c + 1]);
            let msgs = &s.v2c[lo..hi];
            s.forward.clear();
            let mut acc = f64::INFINITY;
            for &m in msgs {
                s.forward.push(acc);
                acc = if acc.is_infinite() { m } else { boxplus(acc, m) };
            }
            let mut back = f64::INFINITY;
            for j in (0..msgs.len()).rev() {
                let f = s.forward[j];
                let out = match (f.is_infinite(), back.is_infinite()) {
                    (true, true) => LLR_CLAMP,
                    (true, false) => back,
                    (false, true) => f,
                    (false, false) => boxplus(f, back),
                };
                s.c2v[lo + j] = out.clamp(-LLR_CLAMP, LLR_CLAMP);
                back = if back.is_infinite() { msgs[j] } else { boxplus(back, msgs[j]) };
            }
        }
        for v in 0..g.n {
            let edges = &g.vn_edges[g.vn_offsets[v]..g.vn_offsets[v + 1]];
            let total = llr[v] + edges.iter().map(|&k| s.c2v[k as usize]).sum::<f64>();
            s.app[v] = total;
            s.hard[v] = u8::from(total < 0.0);
            for &k in edges {
                s.v2c[k as usize] = (total - s.c2v[k as usize]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
        let satisfied = (0..g.check_count()).all(|c| g.sockets(c).iter().fold(0u8, |p, &v| p ^ s.hard[v as usize]) == 0);
        if satisfied {
            return it;
        }
    }
    i_max
}

/// Output of the sum-product decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct AwgnDecoding {
    pub decisions: Vec<u8>,
    /// A-posteriori LLRs after the last iteration.
    pub app: Vec<f64>,
    pub iterations: usize,
}

/// Flooding sum-product decoding for SPC check nodes. Decides on the
/// a-posteriori LLR sign after `i_max` iterations, or earlier once every
/// check is satisfied.
pub fn decode_awgn(graph: &TannerGraph, channel_llrs: &[f64], i_max: usize) -> Result<AwgnDecoding> {
    if !graph.all_spc() {
        return Err(Error::UnsupportedAwgnGeneralized);
    }
    let g = DecoderGraph::new(graph);
    assert_eq!(channel_llrs.len(), g.n, "LLR vector length");
    let mut s = AwgnScratch::default();
    let iterations = spa_iterations(&g, channel_llrs, i_max, &mut s);
    Ok(AwgnDecoding { decisions: s.hard, app: s.app, iterations })
}

/// Systematic encoder built from a parity-check matrix.
#[derive(Debug, Clone)]
pub struct Encoder {
    generator: crate::gf2::BitMatrix,
}

impl Encoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        Self { generator: h.to_dense().null_space() }
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    /// Codeword for the given information bits (one bit per byte).
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        assert_eq!(info.len(), self.dimension());
        let mut word = vec![0u8; self.generator.cols()];
        for (i, &b) in info.iter().enumerate() {
            if b & 1 == 1 {
                for (j, w) in word.iter_mut().enumerate() {
                    *w ^= self.generator.get(i, j) as u8;
                }
            }
        }
        word
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        let info: Vec<u8> = (0..self.dimension()).map(|_| rng.gen::<bool>() as u8).collect();
        self.encode(&info)
    }
}

/// A bit-error-rate experiment on one code.
#[derive(Debug, Clone)]
pub struct SimulationTask {
    pub graph: Arc<TannerGraph>,
    pub grid: Vec<ChannelParameter>,
    pub i_max: usize,
    pub target_bit_errors: u64,
    pub max_words: u64,
    pub seed: u64,
}

impl SimulationTask {
    pub fn new(graph: Arc<TannerGraph>, grid: Vec<ChannelParameter>, i_max: usize, seed: u64) -> Self {
        Self {
            graph,
            grid,
            i_max,
            target_bit_errors: DEFAULT_TARGET_BIT_ERRORS,
            max_words: DEFAULT_MAX_WORDS,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.i_max == 0 {
            return Err(Error::InvalidConfig("i_max must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig("empty channel grid".into()));
        }
        if self.max_words == 0 {
            return Err(Error::InvalidConfig("max_words must be positive".into()));
        }
        let kind = self.grid[0].kind();
        if self.grid.iter().any(|p| p.kind() != kind) {
            return Err(Error::InvalidConfig("channel grid mixes channel kinds".into()));
        }
        if kind == ChannelKind::Awgn && !self.graph.all_spc() {
            return Err(Error::UnsupportedAwgnGeneralized);
        }
        Ok(())
    }
}

/// Counters of one grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BerPoint {
    pub words: u64,
    pub word_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub iterations: u64,
    /// `iteration_histogram[i]`: words that stopped after `i` iterations.
    pub iteration_histogram: Vec<u64>,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits as f64
        }
    }

    pub fn cer(&self) -> f64 {
        if self.words == 0 {
            0.0
        } else {
            self.word_errors as f64 / self.words as f64
        }
    }

    pub fn mean_iterations(&self) -> f64 {
        if self.words == 0 {
            0.0
        } else {
            self.iterations as f64 / self.words as f64
        }
    }
}

/// Simulated error rates over a channel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub params: Vec<ChannelParameter>,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,words,word_errors,bits,bit_errors,ber,cer,mean_iterations\n");
        for (p, q) in self.params.iter().zip(&self.points) {
            s.push_str(&format!(
                "{},{},{},{},{},{:.6e},{:.6e},{:.4}\n",
                p.value(),
                q.words,
                q.word_errors,
                q.bits,
                q.bit_errors,
                q.ber(),
                q.cer(),
                q.mean_iterations()
            ));
        }
        s
    }

    /// Long-form iteration histogram: `param,iterations,words`.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("param,iterations,words\n");
        for (p, q) in self.params.iter().zip(&self.points) {
            for (i, &w) in q.iteration_histogram.iter().enumerate() {
                if w > 0 {
                    s.push_str(&format!("{},{},{}\n", p.value(), i, w));
                }
            }
        }
        s
    }
}

/// Random source of word `word` at grid point `point`.
fn word_rng(seed: u64, point: usize, word: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) | word);
    rng
}

#[derive(Default)]
struct Scratch {
    bec: BecScratch,
    awgn: AwgnScratch,
    state: Vec<u8>,
    llr: Vec<f64>,
}

/// `(bit errors, iterations)` of one simulated word.
fn simulate_word(g: &DecoderGraph, channel: &ChannelParameter, i_max: usize, rng: &mut ChaCha8Rng, s: &mut Scratch) -> (u64, usize) {
    match *channel {
        ChannelParameter::Bec { epsilon } => {
            s.state.clear();
            s.state.extend((0..g.n).map(|_| if rng.gen::<f64>() < epsilon { ERASED } else { 0 }));
            let it = bec_rounds(g, &mut s.state, i_max, &mut s.bec);
            (s.state.iter().filter(|&&b| b != 0).count() as u64, it)
        }
        ChannelParameter::Awgn { .. } => {
            let sigma = channel.noise_sigma();
            let scale = 2.0 / (sigma * sigma);
            s.llr.clear();
            s.llr.extend((0..g.n).map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                scale * (1.0 + sigma * z)
            }));
            let it = spa_iterations(g, &s.llr, i_max, &mut s.awgn);
            (s.awgn.hard.iter().filter(|&&b| b != 0).count() as u64, it)
        }
    }
}

/// Runs every grid point until `target_bit_errors` bit errors or
/// `max_words` words, whichever comes first. Words are drawn in batches of
/// 1, 2, 4, ... up to 1024; the stopping rule is checked between batches,
/// so results do not depend on the number of worker threads.
pub fn monte_carlo(task: &SimulationTask) -> Result<BerCurve> {
    task.validate()?;
    let g = DecoderGraph::new(&task.graph);
    let n = g.n as u64;
    let mut points = Vec::with_capacity(task.grid.len());
    for (pi, channel) in task.grid.iter().enumerate() {
        let mut p = BerPoint {
            words: 0,
            word_errors: 0,
            bits: 0,
            bit_errors: 0,
            iterations: 0,
            iteration_histogram: vec![0; task.i_max + 1],
        };
        let mut batch = 1u64;
        while p.words < task.max_words && p.bit_errors < task.target_bit_errors {
            let count = batch.min(task.max_words - p.words);
            let start = p.words;
            let results: Vec<(u64, usize)> = (start..start + count)
                .into_par_iter()
                .map_init(Scratch::default, |s, w| {
                    let mut rng = word_rng(task.seed, pi, w);
                    simulate_word(&g, channel, task.i_max, &mut rng, s)
                })
                .collect();
            for (errors, it) in results {
                p.words += 1;
                p.bits += n;
                p.bit_errors += errors;
                p.word_errors += u64::from(errors > 0);
                p.iterations += it as u64;
                p.iteration_histogram[it] += 1;
            }
            batch = (batch * 2).min(MAX_BATCH);
        }
        points.push(p);
    }
    Ok(BerCurve { params: task.grid.clone(), points })
}

/// Graph for a single check node over `s` variables, used in examples and
/// tests.
pub fn single_check_graph(kind: CodeKind) -> Result<TannerGraph> {
    let code = ComponentCodeSpec::get(kind)?;
    let s = code.length();
    TannerGraph::new(s, vec![crate::construct::CheckNode { code, sockets: (0..s).collect() }])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::sample_random_code;
    use crate::ensemble::published;

    #[test]
    fn no_erasures_no_iterations() {
        let g = sample_random_code(&published::ensemble_b(), 200, 1).unwrap();
        let r = decode_bec(&g, &[Some(false); 200], 10);
        assert_eq!(r.iterations, 0);
        assert!(r.word.iter().all(|&b| b == Some(false)));
    }

    #[test]
    fn single_spc_erasure_resolves_in_one_round() {
        let g = single_check_graph(CodeKind::Spc(3)).unwrap();
        let r = decode_bec(&g, &[Some(true), None, Some(false)], 10);
        assert_eq!(r.word, vec![Some(true), Some(true), Some(false)]);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn hamming_check_resolves_two_erasures() {
        let g = single_check_graph(CodeKind::Hamming(3)).unwrap();
        let mut rx = vec![Some(false); 7];
        rx[0] = None;
        rx[1] = None;
        let r = decode_bec(&g, &rx, 5);
        assert!(r.word.iter().all(|&b| b == Some(false)));
    }

    #[test]
    fn boxplus_matches_tanh_rule() {
        for (a, b) in [(1.0, 2.0), (-0.5, 3.0), (4.0, -4.0), (0.1, 0.1)] {
            let exact = 2.0 * ((a / 2.0f64).tanh() * (b / 2.0f64).tanh()).atanh();
            assert!((boxplus(a, b) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn awgn_channel_sign_without_iterations() {
        let g = single_check_graph(CodeKind::Spc(3)).unwrap();
        let r = decode_awgn(&g, &[1.0, -0.2, 0.5], 0).unwrap();
        assert_eq!(r.decisions, vec![0, 1, 0]);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn confident_llrs_decode_in_one_iteration() {
        let g = sample_random_code(&published::ensemble_d(), 300, 2).unwrap();
        let r = decode_awgn(&g, &vec![1e6; 300], 10).unwrap();
        assert!(r.decisions.iter().all(|&b| b == 0));
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn awgn_rejects_generalized_checks() {
        let g = single_check_graph(CodeKind::Hamming(3)).unwrap();
        assert!(matches!(decode_awgn(&g, &[1.0; 7], 3), Err(Error::UnsupportedAwgnGeneralized)));
    }

    #[test]
    fn extreme_erasure_probabilities() {
        let g = Arc::new(sample_random_code(&published::ensemble_b(), 100, 3).unwrap());
        let mut task = SimulationTask::new(g, vec![ChannelParameter::bec(0.0).unwrap(), ChannelParameter::bec(1.0).unwrap()], 10, 5);
        task.max_words = 20;
        let c = monte_carlo(&task).unwrap();
        assert_eq!(c.points[0].bit_errors, 0);
        assert_eq!(c.points[0].words, 20);
        assert_eq!(c.points[1].ber(), 1.0);
    }

    #[test]
    fn invalid_tasks_rejected() {
        let g = Arc::new(single_check_graph(CodeKind::Spc(3)).unwrap());
        let t = SimulationTask::new(Arc::clone(&g), vec![], 10, 0);
        assert!(matches!(monte_carlo(&t), Err(Error::InvalidConfig(_))));
        let t = SimulationTask::new(g, vec![ChannelParameter::bec(0.1).unwrap()], 0, 0);
        assert!(matches!(monte_carlo(&t), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn encoder_produces_codewords() {
        let g = sample_random_code(&published::ensemble_a(), 60, 4).unwrap();
        let h = crate::construct::expand_parity_check(&g);
        let enc = Encoder::new(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(h.is_codeword(&enc.random_codeword(&mut rng)));
        }
    }
}
