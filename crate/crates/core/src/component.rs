//! Local linear block codes placed at check nodes.
//!
//! Two families are supported: single parity-check (SPC) codes of any length
//! `s >= 3` and the (7,4) / (15,11) Hamming codes. Each code carries its
//! generator and parity-check matrices, its weight enumerator and the data
//! needed for MAP erasure decoding and exact BEC EXIT evaluation.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf2::{mask_rank, BitMatrix};

/// Identifier of a supported component code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeKind {
    /// Single parity-check code of the given length.
    Spc(usize),
    /// Hamming code with `m` parity bits, length `2^m - 1`.
    Hamming(usize),
}

impl CodeKind {
    pub fn length(self) -> usize {
        match self {
            CodeKind::Spc(s) => s,
            CodeKind::Hamming(m) => (1 << m) - 1,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            CodeKind::Spc(s) => s - 1,
            CodeKind::Hamming(m) => (1 << m) - 1 - m,
        }
    }

    pub fn is_spc(self) -> bool {
        matches!(self, CodeKind::Spc(_))
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CodeKind::Spc(s) => write!(f, "spc-{s}"),
            CodeKind::Hamming(m) => write!(f, "hamming-{}-{}", self.length(), (1 << m) - 1 - m),
        }
    }
}

impl FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "hamming-7-4" => return Ok(CodeKind::Hamming(3)),
            "hamming-15-11" => return Ok(CodeKind::Hamming(4)),
            _ => {}
        }
        if let Some(len) = t.strip_prefix("spc-") {
            let len: usize = len.parse().map_err(|_| Error::UnknownCode(s.to_string()))?;
            if len < 3 {
                return Err(Error::LengthTooSmall(len));
            }
            return Ok(CodeKind::Spc(len));
        }
        Err(Error::UnknownCode(s.to_string()))
    }
}

/// A binary linear block code used as a check-node constraint.
#[derive(Debug, Clone)]
pub struct ComponentCodeSpec {
    kind: CodeKind,
    min_distance: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    weight_enumerator: Vec<u64>,
    /// Nonzero dual codewords as position masks; empty for SPC (all-ones is implied).
    dual_words: Vec<u64>,
    /// `exit_counts[k]`: number of (position, pattern of the other `s-1` positions
    /// with exactly `k` known) pairs for which MAP erasure decoding resolves the position.
    exit_counts: Vec<f64>,
}

/// Largest SPC length for which the BEC EXIT pattern enumeration is run
/// explicitly; longer SPC codes use the closed form.
const SPC_ENUMERATION_LIMIT: usize = 16;

impl ComponentCodeSpec {
    /// The `(s, s-1)` even-weight code.
    pub fn spc(s: usize) -> Result<Self> {
        if s < 3 {
            return Err(Error::LengthTooSmall(s));
        }
        let mut h = BitMatrix::zeros(1, s);
        for j in 0..s {
            h.set(0, j, true);
        }
        Ok(Self::from_parity_check(CodeKind::Spc(s), h))
    }

    /// The `(2^m - 1, 2^m - 1 - m)` Hamming code with parity-check columns in
    /// natural binary counting order.
    pub fn hamming(m: usize) -> Result<Self> {
        if !(3..=4).contains(&m) {
            return Err(Error::UnsupportedHamming(m));
        }
        let s = (1 << m) - 1;
        let mut h = BitMatrix::zeros(m, s);
        for j in 0..s {
            for i in 0..m {
                h.set(i, j, ((j + 1) >> i) & 1 == 1);
            }
        }
        Ok(Self::from_parity_check(CodeKind::Hamming(m), h))
    }

    /// Builds a code of the given kind from an arbitrary full-rank parity-check
    /// matrix. Used for the natural constructors and for column-order checks.
    pub fn from_parity_check(kind: CodeKind, parity_check: BitMatrix) -> Self {
        let s = parity_check.cols();
        let generator = parity_check.null_space();
        let column_masks: Vec<u32> = (0..s)
            .map(|j| {
                (0..parity_check.rows())
                    .filter(|&i| parity_check.get(i, j))
                    .fold(0u32, |acc, i| acc | (1 << i))
            })
            .collect();
        let weight_enumerator = match kind {
            CodeKind::Spc(s) => (0..=s)
                .map(|w| if w % 2 == 0 { binomial_u64(s, w) } else { 0 })
                .collect(),
            CodeKind::Hamming(_) => enumerate_weights(&generator),
        };
        let min_distance = weight_enumerator
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &a)| a > 0)
            .map(|(w, _)| w)
            .unwrap_or(0);
        let dual_words = match kind {
            CodeKind::Spc(_) => Vec::new(),
            CodeKind::Hamming(_) => codewords(&parity_check).into_iter().filter(|&c| c != 0).collect(),
        };
        let exit_counts = match kind {
            CodeKind::Spc(s) if s > SPC_ENUMERATION_LIMIT => {
                let mut c = vec![0.0; s];
                c[s - 1] = s as f64;
                c
            }
            _ => enumerate_exit_counts(&column_masks),
        };
        Self {
            kind,
            min_distance,
            generator,
            parity_check,
            weight_enumerator,
            dual_words,
            exit_counts,
        }
    }

    /// Shared, lazily built instance for `kind`.
    pub fn get(kind: CodeKind) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<CodeKind, Arc<ComponentCodeSpec>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(c) = cache.lock().expect("code cache poisoned").get(&kind) {
            return Ok(Arc::clone(c));
        }
        let built = Arc::new(match kind {
            CodeKind::Spc(s) => Self::spc(s)?,
            CodeKind::Hamming(m) => Self::hamming(m)?,
        });
        let mut guard = cache.lock().expect("code cache poisoned");
        Ok(Arc::clone(guard.entry(kind).or_insert(built)))
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn length(&self) -> usize {
        self.parity_check.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.length() as f64
    }

    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// `A_w` for `w = 0..=s`.
    pub fn weight_enumerator(&self) -> &[u64] {
        &self.weight_enumerator
    }

    /// Number of weight-2 codewords.
    pub fn a2(&self) -> u64 {
        self.weight_enumerator.get(2).copied().unwrap_or(0)
    }

    /// Largest codeword weight.
    pub fn max_weight(&self) -> usize {
        self.weight_enumerator.iter().rposition(|&a| a > 0).unwrap_or(0)
    }

    /// `ln A(z)` for `z = exp(log_z)`, evaluated with log-sum-exp.
    pub fn log_enumerator(&self, log_z: f64) -> f64 {
        log_sum_exp(
            self.weight_enumerator
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(w, &a)| (a as f64).ln() + w as f64 * log_z),
        )
    }

    /// Mean weight `z A'(z) / A(z)` under the exponentially tilted distribution.
    pub fn tilted_mean_weight(&self, log_z: f64) -> f64 {
        let terms: Vec<(f64, f64)> = self
            .weight_enumerator
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(w, &a)| (w as f64, (a as f64).ln() + w as f64 * log_z))
            .collect();
        let m = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let (num, den) = terms.iter().fold((0.0, 0.0), |(n, d), &(w, l)| {
            let e = (l - m).exp();
            (n + w * e, d + e)
        });
        num / den
    }

    /// MAP erasure decoding by Gaussian elimination on the parity-check
    /// columns of the erased positions.
    ///
    /// Every erased position whose value is forced by the known positions is
    /// filled in; the others stay erased.
    pub fn map_erasure_decode(&self, word: &[Option<bool>]) -> Result<Vec<Option<bool>>> {
        let s = self.length();
        assert_eq!(word.len(), s, "word length must equal the code length");
        let erased: Vec<usize> = (0..s).filter(|&j| word[j].is_none()).collect();
        let r = self.parity_check.rows();
        // Augmented system [H_E | H_K x_K].
        let mut aug = BitMatrix::zeros(r, erased.len() + 1);
        for i in 0..r {
            let mut syn = false;
            for j in 0..s {
                if self.parity_check.get(i, j) {
                    if let Some(b) = word[j] {
                        syn ^= b;
                    }
                }
            }
            for (c, &j) in erased.iter().enumerate() {
                aug.set(i, c, self.parity_check.get(i, j));
            }
            aug.set(i, erased.len(), syn);
        }
        let pivots = aug.reduce();
        if pivots.last() == Some(&erased.len()) {
            return Err(Error::InconsistentWord);
        }
        let mut out = word.to_vec();
        for (row, &pc) in pivots.iter().enumerate() {
            let free_in_row = (0..erased.len()).any(|c| c != pc && aug.get(row, c));
            if !free_in_row {
                out[erased[pc]] = Some(aug.get(row, erased.len()));
            }
        }
        Ok(out)
    }

    /// One MAP erasure-resolution pass over packed masks, used by the
    /// iterative decoder. `erased` and `values` are position masks (bit `j`
    /// for position `j`). Returns `(resolved_mask, resolved_values)`.
    #[inline]
    pub fn resolve_masks(&self, erased: u64, values: u64) -> (u64, u64) {
        if erased == 0 {
            return (0, 0);
        }
        match self.kind {
            CodeKind::Spc(_) => {
                if erased.count_ones() == 1 {
                    let v = (values & !erased).count_ones() & 1;
                    (erased, if v == 1 { erased } else { 0 })
                } else {
                    (0, 0)
                }
            }
            CodeKind::Hamming(_) => {
                let mut resolved = 0u64;
                let mut vals = 0u64;
                for &c in &self.dual_words {
                    let e = c & erased;
                    if e.count_ones() == 1 && resolved & e == 0 {
                        resolved |= e;
                        if (c & values & !erased).count_ones() & 1 == 1 {
                            vals |= e;
                        }
                    }
                }
                (resolved, vals)
            }
        }
    }

    /// Exact BEC EXIT function: probability that MAP decoding of the other
    /// `s-1` positions, each known independently with probability `i_a`,
    /// resolves a uniformly chosen position.
    pub fn bec_exit(&self, i_a: f64) -> f64 {
        let s = self.length();
        if i_a >= 1.0 {
            return 1.0;
        }
        if let CodeKind::Spc(_) = self.kind {
            return i_a.max(0.0).powi(s as i32 - 1);
        }
        self.bec_exit_enumerated(i_a)
    }

    /// BEC EXIT function from the enumerated resolution counts, without any
    /// closed-form shortcut.
    pub fn bec_exit_enumerated(&self, i_a: f64) -> f64 {
        let s = self.length();
        let i_a = i_a.clamp(0.0, 1.0);
        let p = 1.0 - i_a;
        let total: f64 = self
            .exit_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .map(|(k, &c)| c * i_a.powi(k as i32) * p.powi((s - 1 - k) as i32))
            .sum();
        (total / s as f64).clamp(0.0, 1.0)
    }
}

fn enumerate_exit_counts(column_masks: &[u32]) -> Vec<f64> {
    let s = column_masks.len();
    let mut counts = vec![0.0; s];
    for j in 0..s {
        let others: Vec<usize> = (0..s).filter(|&i| i != j).collect();
        for pattern in 0u32..(1 << (s - 1)) {
            // bit b of `pattern` set => others[b] erased
            let erased = others
                .iter()
                .enumerate()
                .filter(|(b, _)| (pattern >> b) & 1 == 1)
                .map(|(_, &i)| column_masks[i]);
            let base = mask_rank(erased.clone());
            let with_j = mask_rank(erased.chain(std::iter::once(column_masks[j])));
            if with_j > base {
                let known = s - 1 - pattern.count_ones() as usize;
                counts[known] += 1.0;
            }
        }
    }
    counts
}

/// All codewords of the row space of `g` as position masks.
fn codewords(g: &BitMatrix) -> Vec<u64> {
    assert!(g.cols() <= 64 && g.rows() <= 20);
    let rows: Vec<u64> = (0..g.rows())
        .map(|r| (0..g.cols()).filter(|&c| g.get(r, c)).fold(0u64, |m, c| m | (1 << c)))
        .collect();
    (0u32..(1 << rows.len()))
        .map(|msg| {
            rows.iter()
                .enumerate()
                .filter(|(i, _)| (msg >> i) & 1 == 1)
                .fold(0u64, |acc, (_, &r)| acc ^ r)
        })
        .collect()
}

fn enumerate_weights(g: &BitMatrix) -> Vec<u64> {
    let mut a = vec![0u64; g.cols() + 1];
    for c in codewords(g) {
        a[c.count_ones() as usize] += 1;
    }
    a
}

pub(crate) fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

pub(crate) fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Codebook-filtering oracle: a position is resolved iff every codeword
    /// agreeing with the known positions has the same value there.
    fn brute_force_decode(code: &ComponentCodeSpec, word: &[Option<bool>]) -> Option<Vec<Option<bool>>> {
        let matching: Vec<u64> = codewords(code.generator())
            .into_iter()
            .filter(|&c| word.iter().enumerate().all(|(j, w)| w.is_none_or(|b| ((c >> j) & 1 == 1) == b)))
            .collect();
        if matching.is_empty() {
            return None;
        }
        Some(
            (0..word.len())
                .map(|j| {
                    let ones = matching.iter().filter(|&&c| (c >> j) & 1 == 1).count();
                    if ones == 0 {
                        Some(false)
                    } else if ones == matching.len() {
                        Some(true)
                    } else {
                        None
                    }
                })
                .collect(),
        )
    }

    fn all_words(s: usize) -> impl Iterator<Item = Vec<Option<bool>>> {
        (0..3usize.pow(s as u32)).map(move |mut n| {
            (0..s)
                .map(|_| {
                    let t = n % 3;
                    n /= 3;
                    match t {
                        0 => Some(false),
                        1 => Some(true),
                        _ => None,
                    }
                })
                .collect()
        })
    }

    #[test]
    fn spc3_enumerator() {
        let c = ComponentCodeSpec::spc(3).unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.weight_enumerator(), &[1, 0, 3, 0]);
        assert_eq!(c.min_distance(), 2);
    }

    #[test]
    fn spc_enumerator_matches_codebook() {
        for s in 3..=9 {
            let c = ComponentCodeSpec::spc(s).unwrap();
            assert_eq!(enumerate_weights(c.generator()), c.weight_enumerator());
            assert_eq!(c.weight_enumerator()[1], 0);
        }
        assert_eq!(ComponentCodeSpec::spc(7).unwrap().a2(), 21);
    }

    #[test]
    fn spc_too_short() {
        assert!(matches!(ComponentCodeSpec::spc(2), Err(Error::LengthTooSmall(2))));
    }

    #[test]
    fn hamming_enumerators() {
        let h7 = ComponentCodeSpec::hamming(3).unwrap();
        assert_eq!(h7.weight_enumerator(), &[1, 0, 0, 7, 7, 0, 0, 1]);
        assert_eq!((h7.length(), h7.dimension(), h7.min_distance()), (7, 4, 3));
        let h15 = ComponentCodeSpec::hamming(4).unwrap();
        assert_eq!((h15.length(), h15.dimension(), h15.min_distance()), (15, 11, 3));
        assert_eq!(h15.a2(), 0);
        assert_eq!(h15.weight_enumerator()[0], 1);
        assert_eq!(h15.weight_enumerator().iter().sum::<u64>(), 1 << 11);
        assert!(matches!(ComponentCodeSpec::hamming(5), Err(Error::UnsupportedHamming(5))));
    }

    #[test]
    fn matrices_are_consistent() {
        for kind in [CodeKind::Spc(3), CodeKind::Spc(8), CodeKind::Hamming(3), CodeKind::Hamming(4)] {
            let c = ComponentCodeSpec::get(kind).unwrap();
            let g = c.generator();
            let h = c.parity_check();
            assert!(g.mul(&h.transpose()).is_zero(), "{kind}");
            assert_eq!(g.rank(), c.dimension());
            assert_eq!(h.rank(), c.length() - c.dimension());
        }
    }

    #[test]
    fn macwilliams_hamming7() {
        // Dual of Hamming(7,4) is the simplex code: A = 1 + 7 z^4.
        let c = ComponentCodeSpec::hamming(3).unwrap();
        let n = 7i64;
        let a = c.weight_enumerator();
        let krawtchouk = |k: i64, x: i64| -> i64 {
            (0..=k)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * binomial_u64(x as usize, j as usize) as i64
                        * binomial_u64((n - x) as usize, (k - j) as usize) as i64
                })
                .sum()
        };
        let dual: Vec<i64> = (0..=n)
            .map(|k| (0..=n).map(|i| a[i as usize] as i64 * krawtchouk(k, i)).sum::<i64>() / 16)
            .collect();
        assert_eq!(dual, vec![1, 0, 0, 0, 7, 0, 0, 0]);
        assert_eq!(enumerate_weights(c.parity_check()).iter().map(|&x| x as i64).collect::<Vec<_>>(), dual);
    }

    #[test]
    fn spc3_decode_examples() {
        let c = ComponentCodeSpec::spc(3).unwrap();
        assert_eq!(
            c.map_erasure_decode(&[Some(true), None, Some(false)]).unwrap(),
            vec![Some(true), Some(true), Some(false)]
        );
        assert_eq!(
            c.map_erasure_decode(&[None, None, Some(false)]).unwrap(),
            vec![None, None, Some(false)]
        );
        assert!(matches!(
            c.map_erasure_decode(&[Some(true), Some(false), Some(false)]),
            Err(Error::InconsistentWord)
        ));
    }

    #[test]
    fn decode_matches_codebook_filtering_exhaustively() {
        let mut codes: Vec<ComponentCodeSpec> = (3..=7).map(|s| ComponentCodeSpec::spc(s).unwrap()).collect();
        codes.push(ComponentCodeSpec::hamming(3).unwrap());
        for c in &codes {
            for w in all_words(c.length()) {
                let oracle = brute_force_decode(c, &w);
                match (c.map_erasure_decode(&w), oracle) {
                    (Ok(got), Some(want)) => {
                        assert_eq!(got, want, "{} {:?}", c.kind(), w);
                        // idempotent and never flips known bits
                        assert_eq!(c.map_erasure_decode(&got).unwrap(), got);
                        for (a, b) in w.iter().zip(&got) {
                            if a.is_some() {
                                assert_eq!(a, b);
                            }
                        }
                        // packed fast path agrees
                        let erased = w.iter().enumerate().filter(|(_, b)| b.is_none()).fold(0u64, |m, (j, _)| m | 1 << j);
                        let values = w.iter().enumerate().filter(|(_, b)| **b == Some(true)).fold(0u64, |m, (j, _)| m | 1 << j);
                        let (res, vals) = c.resolve_masks(erased, values);
                        for j in 0..c.length() {
                            if (res >> j) & 1 == 1 {
                                assert_eq!(got[j], Some((vals >> j) & 1 == 1));
                            } else if w[j].is_none() {
                                assert_eq!(got[j], None);
                            }
                        }
                    }
                    (Err(Error::InconsistentWord), None) => {}
                    (got, want) => panic!("{} {:?}: {:?} vs {:?}", c.kind(), w, got, want),
                }
            }
        }
    }

    #[test]
    fn hamming7_single_erasure_always_resolved() {
        let c = ComponentCodeSpec::hamming(3).unwrap();
        for cw in codewords(c.generator()) {
            for j in 0..7 {
                let mut w: Vec<Option<bool>> = (0..7).map(|i| Some((cw >> i) & 1 == 1)).collect();
                w[j] = None;
                let out = c.map_erasure_decode(&w).unwrap();
                assert_eq!(out[j], Some((cw >> j) & 1 == 1));
            }
        }
    }

    #[test]
    fn exit_function_values() {
        for kind in [CodeKind::Spc(3), CodeKind::Spc(7), CodeKind::Hamming(3), CodeKind::Hamming(4)] {
            let c = ComponentCodeSpec::get(kind).unwrap();
            assert!((c.bec_exit(1.0) - 1.0).abs() < 1e-15);
            assert!((c.bec_exit_enumerated(1.0) - 1.0).abs() < 1e-12);
        }
        let spc7 = ComponentCodeSpec::spc(7).unwrap();
        assert!((spc7.bec_exit(0.5) - 0.015625).abs() < 1e-15);
        assert_eq!(ComponentCodeSpec::hamming(3).unwrap().bec_exit(0.0), 0.0);
    }

    #[test]
    fn spc_enumeration_matches_closed_form() {
        for s in 3..=10 {
            let c = ComponentCodeSpec::spc(s).unwrap();
            for k in 0..=100 {
                let x = k as f64 / 100.0;
                assert!((c.bec_exit_enumerated(x) - x.powi(s as i32 - 1)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exit_is_monotone() {
        for kind in [CodeKind::Spc(3), CodeKind::Spc(7), CodeKind::Spc(15), CodeKind::Hamming(3), CodeKind::Hamming(4)] {
            let c = ComponentCodeSpec::get(kind).unwrap();
            let ys: Vec<f64> = (0..=100).map(|k| c.bec_exit(k as f64 / 100.0)).collect();
            assert!(ys.windows(2).all(|w| w[1] >= w[0] - 1e-15), "{kind}");
        }
    }

    #[test]
    fn hamming_column_order_is_irrelevant() {
        // Systematic [A | I] ordering versus natural counting order.
        let h = BitMatrix::from_rows(&[
            vec![1, 1, 0, 1, 1, 0, 0],
            vec![1, 0, 1, 1, 0, 1, 0],
            vec![0, 1, 1, 1, 0, 0, 1],
        ]);
        let alt = ComponentCodeSpec::from_parity_check(CodeKind::Hamming(3), h);
        let nat = ComponentCodeSpec::hamming(3).unwrap();
        assert_eq!(alt.weight_enumerator(), nat.weight_enumerator());
        for k in 0..=50 {
            let x = k as f64 / 50.0;
            assert!((alt.bec_exit(x) - nat.bec_exit(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn code_identifiers_round_trip() {
        for id in ["spc-3", "spc-7", "spc-15", "hamming-7-4", "hamming-15-11"] {
            let k: CodeKind = id.parse().unwrap();
            assert_eq!(k.to_string(), id);
        }
        assert!("hamming-31-26".parse::<CodeKind>().is_err());
        assert!("spc-2".parse::<CodeKind>().is_err());
    }
}
