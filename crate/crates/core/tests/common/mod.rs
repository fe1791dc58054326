#![allow(dead_code)]

use std::sync::Arc;

use fastldpc::component::{CodeKind, ComponentCodeSpec};
use fastldpc::construct::{CheckNode, ParityCheckMatrix, TannerGraph};
use fastldpc::gf2::BitMatrix;

/// 14 variable nodes, two Hamming(7,4) checks and four SPC checks.
pub fn tiny_gldpc() -> TannerGraph {
    let hamming = ComponentCodeSpec::get(CodeKind::Hamming(3)).unwrap();
    let spc = |s: usize| ComponentCodeSpec::get(CodeKind::Spc(s)).unwrap();
    let node = |code: Arc<ComponentCodeSpec>, sockets: Vec<usize>| CheckNode { code, sockets };
    TannerGraph::new(
        14,
        vec![
            node(hamming.clone(), vec![0, 1, 2, 3, 4, 5, 6]),
            node(hamming, vec![13, 7, 11, 9, 8, 12, 10]),
            node(spc(4), vec![0, 8, 4, 12]),
            node(spc(4), vec![1, 9, 5, 13]),
            node(spc(4), vec![2, 10, 6, 11]),
            node(spc(3), vec![3, 7, 12]),
        ],
    )
    .unwrap()
}

/// Positions fixed by every codeword consistent with the unerased bits:
/// an erased bit is determined iff it is zero in every null-space vector of
/// the erased columns.
pub fn ml_determined(h: &ParityCheckMatrix, erased: &[usize]) -> Vec<bool> {
    let mut determined = vec![true; h.cols()];
    let basis = h.to_dense().select_columns(erased).null_space();
    for r in 0..basis.rows() {
        for (j, &v) in erased.iter().enumerate() {
            if basis.get(r, j) {
                determined[v] = false;
            }
        }
    }
    determined
}

/// Bitwise MAP LLRs `ln P(x_i=0|y) / P(x_i=1|y)` by enumerating all words.
pub fn exhaustive_map(h: &ParityCheckMatrix, llrs: &[f64]) -> Vec<f64> {
    let n = h.cols();
    let dense: BitMatrix = h.to_dense();
    let mut p0 = vec![0.0; n];
    let mut p1 = vec![0.0; n];
    for w in 0u32..(1 << n) {
        let word: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
        if dense.mul_vec(&word).iter().any(|&s| s != 0) {
            continue;
        }
        let weight: f64 = word.iter().zip(llrs).map(|(&b, &l)| if b == 1 { -l } else { 0.0 }).sum::<f64>().exp();
        for i in 0..n {
            if word[i] == 0 {
                p0[i] += weight;
            } else {
                p1[i] += weight;
            }
        }
    }
    p0.iter().zip(&p1).map(|(a, b)| (a / b).ln()).collect()
}

/// Asymptotic BEC threshold of the `(dv, dc)`-regular ensemble by bisection
/// on the erasure recursion `x <- eps (1 - (1 - x)^(dc-1))^(dv-1)`.
pub fn regular_bec_threshold(dv: i32, dc: i32) -> f64 {
    let converges = |eps: f64| {
        let mut x = eps;
        for _ in 0..200_000 {
            x = eps * (1.0 - (1.0 - x).powi(dc - 1)).powi(dv - 1);
            if x < 1e-12 {
                return true;
            }
        }
        false
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if converges(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Intercept at `x = 0` of the least-squares line through `points`.
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    my - sxy / sxx * mx
}

pub fn median(values: &[usize]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) as f64 / 2.0
    } else {
        v[m] as f64
    }
}
