//! Finite-length Tanner graphs: random socket matching, progressive edge
//! growth, parity-check expansion and small-code distance and girth oracles.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::component::{CodeKind, ComponentCodeSpec};
use crate::ensemble::{DegreeDistributionPair, NodeCounts};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// One check node: its component code and the variable node bound to each
/// socket. Column `j` of the local parity-check matrix binds to socket `j`.
#[derive(Debug, Clone)]
pub struct CheckNode {
    pub code: Arc<ComponentCodeSpec>,
    pub sockets: Vec<usize>,
}

/// One edge of a Tanner graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub vn: usize,
    pub cn: usize,
    pub socket: usize,
}

/// Bipartite graph of variable nodes and generalized check nodes.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    vn_degrees: Vec<usize>,
    checks: Vec<CheckNode>,
    /// `(cn, socket)` pairs of each variable node.
    vn_edges: Vec<Vec<(usize, usize)>>,
}

impl TannerGraph {
    /// Builds a graph and checks all structural invariants.
    pub fn new(block_length: usize, checks: Vec<CheckNode>) -> Result<Self> {
        let mut vn_edges = vec![Vec::new(); block_length];
        for (c, check) in checks.iter().enumerate() {
            if check.sockets.len() != check.code.length() {
                return Err(Error::InvalidConfig(format!(
                    "check {c} has {} sockets for a length-{} code",
                    check.sockets.len(),
                    check.code.length()
                )));
            }
            for (j, &v) in check.sockets.iter().enumerate() {
                if v >= block_length {
                    return Err(Error::InvalidConfig(format!("check {c} socket {j} names variable {v}")));
                }
                if vn_edges[v].iter().any(|&(cc, _)| cc == c) {
                    return Err(Error::InvalidConfig(format!("duplicate edge between variable {v} and check {c}")));
                }
                vn_edges[v].push((c, j));
            }
        }
        let vn_degrees = vn_edges.iter().map(Vec::len).collect();
        Ok(Self { vn_degrees, checks, vn_edges })
    }

    /// Every row of `h` becomes an SPC check node over its support.
    pub fn from_spc_rows(h: &ParityCheckMatrix) -> Result<Self> {
        let checks = h
            .rows
            .iter()
            .map(|r| Ok(CheckNode { code: ComponentCodeSpec::get(CodeKind::Spc(r.len()))?, sockets: r.clone() }))
            .collect::<Result<_>>()?;
        Self::new(h.cols, checks)
    }

    pub fn block_length(&self) -> usize {
        self.vn_degrees.len()
    }

    pub fn vn_degrees(&self) -> &[usize] {
        &self.vn_degrees
    }

    pub fn checks(&self) -> &[CheckNode] {
        &self.checks
    }

    pub fn check_count(&self) -> usize {
        self.checks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vn_degrees.iter().sum()
    }

    /// `(cn, socket)` pairs of variable node `v`.
    pub fn vn_neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.vn_edges[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.checks
            .iter()
            .enumerate()
            .flat_map(|(cn, c)| c.sockets.iter().enumerate().map(move |(socket, &vn)| Edge { vn, cn, socket }))
    }

    pub fn all_spc(&self) -> bool {
        self.checks.iter().all(|c| c.code.kind().is_spc())
    }

    /// Design rate of the realized graph, `1 - Σ (s_t - k_t) / N`.
    pub fn design_rate(&self) -> f64 {
        let redundancy: usize = self.checks.iter().map(|c| c.code.length() - c.code.dimension()).sum();
        1.0 - redundancy as f64 / self.block_length() as f64
    }

    /// Length of the shortest cycle, by breadth-first search from every
    /// variable node; `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.block_length();
        let m = self.check_count();
        // Nodes 0..n are variables, n..n+m are checks.
        let neighbors = |x: usize| -> Vec<usize> {
            if x < n {
                self.vn_edges[x].iter().map(|&(c, _)| n + c).collect()
            } else {
                self.checks[x - n].sockets.clone()
            }
        };
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n + m];
        let mut parent = vec![usize::MAX; n + m];
        for root in 0..n {
            let mut touched = vec![root];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            'bfs: while let Some(x) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[x] + 1 >= b {
                        break;
                    }
                }
                for y in neighbors(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        touched.push(y);
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                        if len <= 4 {
                            break 'bfs;
                        }
                    }
                }
            }
            for t in touched {
                dist[t] = usize::MAX;
                parent[t] = usize::MAX;
            }
        }
        best
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            block_length: self.block_length(),
            checks: self
                .checks
                .iter()
                .map(|c| CheckEntry { code: c.code.kind().to_string(), sockets: c.sockets.clone() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: GraphFile = serde_json::from_str(text)?;
        let checks = f
            .checks
            .into_iter()
            .map(|c| Ok(CheckNode { code: ComponentCodeSpec::get(c.code.parse()?)?, sockets: c.sockets }))
            .collect::<Result<_>>()?;
        Self::new(f.block_length, checks)
    }
}

/// On-disk JSON form of a Tanner graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub block_length: usize,
    pub checks: Vec<CheckEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckEntry {
    pub code: String,
    pub sockets: Vec<usize>,
}

/// Check-node codes in index order: type blocks as listed by `counts`.
fn check_codes(counts: &NodeCounts) -> Vec<Arc<ComponentCodeSpec>> {
    counts
        .check_codes
        .iter()
        .zip(&counts.check_counts)
        .flat_map(|(code, &m)| std::iter::repeat_n(Arc::clone(code), m))
        .collect()
}

/// Resampling rounds before [`sample_random_code`] gives up.
const RANDOM_RESAMPLES: usize = 20;

/// Uniform random socket matching with local swap repair of repeated
/// variable/check pairs.
pub fn sample_random_code(ddp: &DegreeDistributionPair, n: usize, seed: u64) -> Result<TannerGraph> {
    let counts = ddp.node_counts(n)?;
    let codes = check_codes(&counts);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // socket -> check index, in check order
    let socket_cn: Vec<usize> =
        codes.iter().enumerate().flat_map(|(c, code)| std::iter::repeat_n(c, code.length())).collect();
    let mut vn_sockets: Vec<usize> =
        counts.vn_degrees.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat_n(v, d)).collect();
    let e = vn_sockets.len();
    for _ in 0..RANDOM_RESAMPLES {
        vn_sockets.shuffle(&mut rng);
        if repair_duplicates(&mut vn_sockets, &socket_cn, &mut rng) {
            let mut checks: Vec<CheckNode> =
                codes.iter().map(|code| CheckNode { code: Arc::clone(code), sockets: Vec::new() }).collect();
            for (k, &v) in vn_sockets.iter().enumerate() {
                checks[socket_cn[k]].sockets.push(v);
            }
            return TannerGraph::new(n, checks);
        }
    }
    Err(Error::RepairStall(10 * e))
}

/// Swaps variable endpoints between a repeated edge and a random other edge
/// until no pair repeats; gives up after `10 E` attempts.
fn repair_duplicates<R: Rng>(vn_of: &mut [usize], cn_of: &[usize], rng: &mut R) -> bool {
    let e = vn_of.len();
    let mut count: HashMap<(usize, usize), u32> = HashMap::with_capacity(e);
    let mut dups: Vec<usize> = Vec::new();
    for k in 0..e {
        let c = count.entry((vn_of[k], cn_of[k])).or_insert(0);
        *c += 1;
        if *c > 1 {
            dups.push(k);
        }
    }
    let present = |count: &HashMap<(usize, usize), u32>, p| count.get(&p).is_some_and(|&c| c > 0);
    let mut attempts = 0;
    while let Some(&i) = dups.last() {
        if count[&(vn_of[i], cn_of[i])] < 2 {
            dups.pop();
            continue;
        }
        if attempts >= 10 * e {
            return false;
        }
        attempts += 1;
        let j = rng.gen_range(0..e);
        let (vi, ci, vj, cj) = (vn_of[i], cn_of[i], vn_of[j], cn_of[j]);
        if ci == cj || vi == vj || present(&count, (vj, ci)) || present(&count, (vi, cj)) {
            continue;
        }
        *count.get_mut(&(vi, ci)).unwrap() -= 1;
        *count.get_mut(&(vj, cj)).unwrap() -= 1;
        *count.entry((vj, ci)).or_insert(0) += 1;
        *count.entry((vi, cj)).or_insert(0) += 1;
        vn_of.swap(i, j);
        dups.pop();
    }
    true
}

/// Progressive edge growth.
///
/// Variable nodes are processed in nondecreasing degree order; each new edge
/// goes to a check node with a free socket at maximal distance from the
/// current variable node (unreachable counts as farthest), ties broken by
/// lowest fill, then lowest index. The seed permutes the assignment of
/// check types to indices and the order within each degree class.
///
/// When socket capacities force an edge that closes a 4-cycle (which
/// happens in the last few placements), that edge is exchanged with the first
/// edge, in check order, whose swap closes no 4-cycle. When a variable node
/// finds no check with a free socket outside its neighborhood, an existing
/// edge is moved to make room.
pub fn peg_construct(ddp: &DegreeDistributionPair, n: usize, seed: u64) -> Result<TannerGraph> {
    let counts = ddp.node_counts(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    peg_attempt(&counts, &mut rng)
}

/// Whether adding the edge `(v, c)` would close a 4-cycle.
fn closes_four_cycle(v: usize, c: usize, cn_vns: &[Vec<usize>], vn_cns: &[Vec<usize>]) -> bool {
    cn_vns[c]
        .iter()
        .filter(|&&u| u != v)
        .any(|&u| vn_cns[u].iter().any(|&c2| c2 != c && vn_cns[v].contains(&c2)))
}

fn remove_item(list: &mut Vec<usize>, x: usize) {
    if let Some(p) = list.iter().position(|&y| y == x) {
        list.remove(p);
    }
}

/// Exchanges the forced edge `(v, c)` with some `(w, d)` so that `(v, d)`
/// and `(w, c)` close no 4-cycle; socket positions are kept.
fn swap_out_four_cycle(v: usize, c: usize, cn_vns: &mut [Vec<usize>], vn_cns: &mut [Vec<usize>]) -> bool {
    remove_item(&mut vn_cns[v], c);
    for d in 0..cn_vns.len() {
        if d == c || vn_cns[v].contains(&d) {
            continue;
        }
        for j in 0..cn_vns[d].len() {
            let w = cn_vns[d][j];
            if w == v || vn_cns[w].contains(&c) {
                continue;
            }
            remove_item(&mut vn_cns[w], d);
            let ok = !closes_four_cycle(v, d, cn_vns, vn_cns) && !closes_four_cycle(w, c, cn_vns, vn_cns);
            if ok {
                let i = cn_vns[c].iter().position(|&x| x == v).expect("edge present");
                cn_vns[c][i] = w;
                cn_vns[d][j] = v;
                vn_cns[v].push(d);
                vn_cns[w].push(c);
                return true;
            }
            vn_cns[w].push(d);
        }
    }
    vn_cns[v].push(c);
    false
}

/// Frees a socket for `v` when every check with spare capacity is already
/// adjacent to it: some `w` on a full check `d` not adjacent to `v` moves to
/// a spare socket of a check `c` adjacent to `v` but not to `w`. Returns `d`.
fn make_room(
    v: usize,
    codes: &[Arc<ComponentCodeSpec>],
    cn_vns: &mut [Vec<usize>],
    vn_cns: &mut [Vec<usize>],
) -> Option<usize> {
    let spare: Vec<usize> = (0..cn_vns.len()).filter(|&c| cn_vns[c].len() < codes[c].length()).collect();
    for d in 0..cn_vns.len() {
        if vn_cns[v].contains(&d) {
            continue;
        }
        for j in 0..cn_vns[d].len() {
            let w = cn_vns[d][j];
            if let Some(&c) = spare.iter().find(|&&c| !vn_cns[w].contains(&c)) {
                cn_vns[d].remove(j);
                remove_item(&mut vn_cns[w], d);
                cn_vns[c].push(w);
                vn_cns[w].push(c);
                return Some(d);
            }
        }
    }
    None
}

fn peg_attempt(counts: &NodeCounts, rng: &mut ChaCha8Rng) -> Result<TannerGraph> {
    let n = counts.block_length();
    let mut codes = check_codes(counts);
    codes.shuffle(rng);
    let m = codes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by_key(|&v| counts.vn_degrees[v]);

    let mut cn_vns: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut vn_cns: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dist = vec![usize::MAX; m];
    let mut seen_vn = vec![false; n];
    let mut forced = Vec::new();
    for &v in &order {
        for _ in 0..counts.vn_degrees[v] {
            // Breadth-first distances from v to every check node.
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            let mut frontier: Vec<usize> = Vec::new();
            for &c in &vn_cns[v] {
                dist[c] = 0;
                frontier.push(c);
            }
            let mut touched = vec![v];
            seen_vn[v] = true;
            let mut depth = 0;
            while !frontier.is_empty() {
                depth += 1;
                let mut next = Vec::new();
                for &c in &frontier {
                    for &u in &cn_vns[c] {
                        if !seen_vn[u] {
                            seen_vn[u] = true;
                            touched.push(u);
                            for &c2 in &vn_cns[u] {
                                if dist[c2] == usize::MAX {
                                    dist[c2] = depth;
                                    next.push(c2);
                                }
                            }
                        }
                    }
                }
                frontier = next;
            }
            for u in touched {
                seen_vn[u] = false;
            }
            let pick = (0..m)
                .filter(|&c| cn_vns[c].len() < codes[c].length() && dist[c] != 0)
                .max_by(|&a, &b| {
                    dist[a].cmp(&dist[b]).then(cn_vns[b].len().cmp(&cn_vns[a].len())).then(b.cmp(&a))
                })
                .or_else(|| make_room(v, &codes, &mut cn_vns, &mut vn_cns))
                .ok_or(Error::NoEligibleCn(v))?;
            if dist[pick] == 1 {
                forced.push((v, pick));
            }
            cn_vns[pick].push(v);
            vn_cns[v].push(pick);
        }
    }
    for (v, c) in forced {
        if cn_vns[c].contains(&v) && closes_four_cycle(v, c, &cn_vns, &vn_cns) {
            swap_out_four_cycle(v, c, &mut cn_vns, &mut vn_cns);
        }
    }
    let checks = codes.into_iter().zip(cn_vns).map(|(code, sockets)| CheckNode { code, sockets }).collect();
    TannerGraph::new(n, checks)
}

/// Sparse binary parity-check matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Rows are sorted column-index lists; empty rows are rejected.
    pub fn new(cols: usize, mut rows: Vec<Vec<usize>>) -> Result<Self> {
        for (i, r) in rows.iter_mut().enumerate() {
            r.sort_unstable();
            r.dedup();
            if r.is_empty() {
                return Err(Error::InvalidConfig(format!("row {i} of the parity-check matrix is empty")));
            }
            if r.last().is_some_and(|&c| c >= cols) {
                return Err(Error::InvalidConfig(format!("row {i} names a column beyond {cols}")));
            }
        }
        Ok(Self { cols, rows })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Row indices of every column.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut c = vec![Vec::new(); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for &j in r {
                c[j].push(i);
            }
        }
        c
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for &j in r {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }

    /// Code dimension `N - rank(H)`.
    pub fn dimension(&self) -> usize {
        self.cols - self.rank()
    }

    /// Whether `word` (one bit per byte) satisfies every row.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.rows.iter().all(|r| r.iter().fold(0u8, |acc, &j| acc ^ (word[j] & 1)) == 0)
    }
}

/// Binary parity-check matrix of a graph: each check node contributes the
/// rows of its local parity-check matrix, mapped through its sockets.
pub fn expand_parity_check(graph: &TannerGraph) -> ParityCheckMatrix {
    let mut rows = Vec::new();
    for check in graph.checks() {
        let h = check.code.parity_check();
        for i in 0..h.rows() {
            rows.push((0..h.cols()).filter(|&j| h.get(i, j)).map(|j| check.sockets[j]).collect());
        }
    }
    ParityCheckMatrix::new(graph.block_length(), rows).expect("local parity-check rows are nonempty")
}

/// Largest dimension accepted by [`brute_force_min_distance`].
pub const MAX_BRUTE_FORCE_DIMENSION: usize = 25;

/// Minimum nonzero codeword weight by enumerating all `2^k` codewords in
/// Gray-code order; `None` when the code has no nonzero codeword.
pub fn brute_force_min_distance(h: &ParityCheckMatrix) -> Result<Option<usize>> {
    let g = h.to_dense().null_space();
    let k = g.rows();
    if k > MAX_BRUTE_FORCE_DIMENSION {
        return Err(Error::DimensionTooLarge(k));
    }
    if k == 0 {
        return Ok(None);
    }
    let words = g.row_words(0).len();
    let mut current = vec![0u64; words];
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        for (c, &r) in current.iter_mut().zip(g.row_words(flip)) {
            *c ^= r;
        }
        let w: usize = current.iter().map(|x| x.count_ones() as usize).sum();
        best = best.min(w);
    }
    Ok(Some(best))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::ensemble::{published, CheckDistribution, VariableDistribution};

    fn check_invariants(g: &TannerGraph, counts: &NodeCounts) {
        let mut degs = g.vn_degrees().to_vec();
        degs.sort_unstable();
        assert_eq!(degs, counts.vn_degrees);
        assert_eq!(g.check_count(), counts.total_checks());
        let mut pairs = HashSet::new();
        for e in g.edges() {
            assert!(pairs.insert((e.vn, e.cn)), "repeated pair {e:?}");
        }
        for c in g.checks() {
            assert_eq!(c.sockets.len(), c.code.length());
        }
    }

    #[test]
    fn random_ensemble_b_counts() {
        let ddp = published::ensemble_b();
        let g = sample_random_code(&ddp, 10_000, 7).unwrap();
        assert_eq!(g.check_count(), 5000);
        assert_eq!(g.edge_count(), 35_000);
        check_invariants(&g, &ddp.node_counts(10_000).unwrap());
    }

    #[test]
    fn random_tiny_regular() {
        let ddp = published::regular(3, 6);
        for seed in 0..5 {
            let g = sample_random_code(&ddp, 6, seed).unwrap();
            assert_eq!(g.check_count(), 3);
            assert_eq!(g.edge_count(), 18);
            assert!(g.vn_degrees().iter().all(|&d| d == 3));
        }
    }

    #[test]
    fn constructions_are_deterministic() {
        let ddp = published::ensemble_a();
        for build in [sample_random_code, peg_construct] {
            let a: Vec<Edge> = build(&ddp, 300, 11).unwrap().edges().collect();
            let b: Vec<Edge> = build(&ddp, 300, 11).unwrap().edges().collect();
            let c: Vec<Edge> = build(&ddp, 300, 12).unwrap().edges().collect();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn peg_cycle_code_forces_four_cycles() {
        let ddp = DegreeDistributionPair::new(
            VariableDistribution::new([(2, 1.0)]).unwrap(),
            CheckDistribution::new([(CodeKind::Spc(4), 1.0)]).unwrap(),
        );
        let g = peg_construct(&ddp, 4, 0).unwrap();
        assert_eq!(g.check_count(), 2);
        // Two checks of four sockets over four degree-2 variables: every
        // variable meets both checks, so the only cycles have length 4.
        assert_eq!(g.girth(), Some(4));
    }

    #[test]
    fn peg_regular_has_no_four_cycles() {
        let ddp = published::regular(3, 6);
        for seed in 0..20 {
            let g = peg_construct(&ddp, 96, seed).unwrap();
            check_invariants(&g, &ddp.node_counts(96).unwrap());
            assert!(g.girth().unwrap() >= 6, "seed {seed}");
        }
    }

    #[test]
    fn peg_girth_beats_random() {
        let ddp = published::regular(3, 6);
        let wins = (0..50)
            .filter(|&s| peg_construct(&ddp, 96, s).unwrap().girth() >= sample_random_code(&ddp, 96, s).unwrap().girth())
            .count();
        assert!(wins >= 45, "{wins}");
    }

    #[test]
    fn expansion_of_hamming_check() {
        let ham = ComponentCodeSpec::get(CodeKind::Hamming(3)).unwrap();
        let g = TannerGraph::new(7, vec![CheckNode { code: ham, sockets: vec![6, 5, 4, 3, 2, 1, 0] }]).unwrap();
        let h = expand_parity_check(&g);
        assert_eq!(h.row_count(), 3);
        assert_eq!(brute_force_min_distance(&h).unwrap(), Some(3));
    }

    #[test]
    fn ldpc_expansion_has_one_row_per_check() {
        let g = sample_random_code(&published::ensemble_b(), 500, 1).unwrap();
        assert_eq!(expand_parity_check(&g).row_count(), g.check_count());
    }

    #[test]
    fn ensemble_a_rank_matches_rate() {
        let g = sample_random_code(&published::ensemble_a(), 1500, 3).unwrap();
        let h = expand_parity_check(&g);
        let r = 1.0 - h.rank() as f64 / 1500.0;
        assert!((r - 0.5).abs() < 0.01, "{r}");
    }

    #[test]
    fn expanded_codewords_are_local_codewords() {
        let g = sample_random_code(&published::ensemble_a(), 24, 5).unwrap();
        let h = expand_parity_check(&g);
        let gen = h.to_dense().null_space();
        assert!(gen.rows() <= 16);
        for mask in 0u32..(1 << gen.rows()) {
            let mut word = [0u8; 24];
            for i in 0..gen.rows() {
                if mask >> i & 1 == 1 {
                    for (j, w) in word.iter_mut().enumerate() {
                        *w ^= gen.get(i, j) as u8;
                    }
                }
            }
            for c in g.checks() {
                let local: Vec<u8> = c.sockets.iter().map(|&v| word[v]).collect();
                assert!(c.code.parity_check().mul_vec(&local).iter().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        let spc5 = ParityCheckMatrix::new(5, vec![vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(brute_force_min_distance(&spc5).unwrap(), Some(2));
        let identity = ParityCheckMatrix::new(4, (0..4).map(|i| vec![i]).collect()).unwrap();
        assert_eq!(brute_force_min_distance(&identity).unwrap(), None);
        let wide = ParityCheckMatrix::new(40, vec![vec![0, 1]]).unwrap();
        assert!(matches!(brute_force_min_distance(&wide), Err(Error::DimensionTooLarge(39))));
    }

    #[test]
    fn json_round_trip() {
        let g = peg_construct(&published::ensemble_a(), 60, 2).unwrap();
        let back = TannerGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), back.edges().collect::<Vec<_>>());
    }

    #[test]
    fn rejects_repeated_pairs() {
        let spc3 = ComponentCodeSpec::get(CodeKind::Spc(3)).unwrap();
        let r = TannerGraph::new(3, vec![CheckNode { code: spc3, sockets: vec![0, 0, 1] }]);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }
}
