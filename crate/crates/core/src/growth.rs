//! Asymptotic growth rate of the ensemble-average weight distribution.
//!
//! For the edge-matching ensemble with `n_d` variable nodes of degree `d`,
//! `m_t` check nodes of type `t` and `E` edges,
//!
//! ```text
//! E[A_w] = Σ_ℓ coef[x^w y^ℓ] Π_d (1 + x y^d)^{n_d} · coef[z^ℓ] Π_t A_t(z)^{m_t} / C(E, ℓ)
//! ```
//!
//! and `G(α) = lim (1/N) ln E[A_{αN}]` is obtained by a saddle-point
//! evaluation of each factor, maximized over the normalized edge weight
//! `β = ℓ / E`.

use std::sync::Arc;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive, Zero};

use crate::component::ComponentCodeSpec;
use crate::ensemble::DegreeDistributionPair;
use crate::error::{Error, Result};

/// Tolerance of the inner stationarity solves.
pub const INNER_TOL: f64 = 1e-10;
const MAX_ROOT_ITERATIONS: usize = 400;
/// Grid over the feasible `β` interval before refining local maxima.
const BETA_GRID: usize = 57;
const BETA_GRID_SPAN: f64 = 14.0;

/// Default `α` grid of [`GrowthRateCurve::compute`]: log-spaced on `[1e-4, 0.5]`.
pub const CURVE_POINTS: usize = 200;
pub const CURVE_ALPHA_MIN: f64 = 1e-4;
pub const CURVE_ALPHA_MAX: f64 = 0.5;
/// Bisection tolerance of [`alpha_star`].
pub const ALPHA_STAR_TOL: f64 = 1e-6;

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Natural-log binary entropy.
fn entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
    }
}

/// Root of an increasing function by Newton steps kept inside a bracket,
/// falling back to bisection. `f` returns the value and derivative.
fn safeguarded_root(f: impl Fn(f64) -> (f64, f64), guess: f64, what: &str) -> Result<f64> {
    // Expand a bracket around the guess.
    let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
    let mut step = 1.0;
    let mut expansions = 0;
    while f(lo).0 > 0.0 {
        step *= 2.0;
        lo = guess - step;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::NonConvergence(format!("{what}: no lower bracket")));
        }
    }
    step = 1.0;
    while f(hi).0 < 0.0 {
        step *= 2.0;
        hi = guess + step;
        expansions += 1;
        if expansions > 120 {
            return Err(Error::NonConvergence(format!("{what}: no upper bracket")));
        }
    }
    let mut x = guess.clamp(lo, hi);
    for _ in 0..MAX_ROOT_ITERATIONS {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo < INNER_TOL {
            return Ok(0.5 * (lo + hi));
        }
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() < INNER_TOL * 0.5 {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NonConvergence(format!("{what}: root not found in {MAX_ROOT_ITERATIONS} iterations")))
}

/// Log-enumerator statistics of a component code under tilt `e^w`:
/// `ln A(e^w)`, mean weight and weight variance.
fn tilt_stats(enumerator: &[(f64, f64)], w: f64) -> (f64, f64, f64) {
    let m = enumerator.iter().map(|&(k, la)| la + k * w).fold(f64::NEG_INFINITY, f64::max);
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for &(k, la) in enumerator {
        let e = (la + k * w - m).exp();
        s0 += e;
        s1 += k * e;
        s2 += k * k * e;
    }
    let mean = s1 / s0;
    (m + s0.ln(), mean, (s2 / s0 - mean * mean).max(0.0))
}

/// Per-node densities of an ensemble, normalized by the block length.
#[derive(Debug, Clone)]
pub struct GrowthModel {
    /// `(d, n_d / N)`, ascending in `d`.
    vn: Vec<(f64, f64)>,
    /// `(m_t / N, [(w, ln A_w)])` over nonzero enumerator entries.
    cn: Vec<(f64, Vec<(f64, f64)>)>,
    /// `E / N`.
    edges: f64,
}

impl GrowthModel {
    pub fn new(ddp: &DegreeDistributionPair) -> Self {
        let integral = ddp.lambda.integral();
        let vn = ddp.lambda.iter().map(|(d, f)| (d as f64, f / d as f64 / integral)).collect();
        let cn = ddp
            .rho
            .types()
            .iter()
            .map(|t| {
                let en = t
                    .code
                    .weight_enumerator()
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(k, &a)| (k as f64, (a as f64).ln()))
                    .collect();
                (t.fraction / t.code.length() as f64 / integral, en)
            })
            .collect();
        Self { vn, cn, edges: 1.0 / integral }
    }

    /// Open interval of `β` values compatible with a weight fraction `α`.
    fn beta_range(&self, alpha: f64) -> (f64, f64) {
        let fill = |order: &mut dyn Iterator<Item = &(f64, f64)>| {
            let mut left = alpha;
            let mut sockets = 0.0;
            for &(d, p) in order {
                let take = left.min(p);
                sockets += take * d;
                left -= take;
                if left <= 0.0 {
                    break;
                }
            }
            sockets / self.edges
        };
        let lo = fill(&mut self.vn.iter());
        let hi = fill(&mut self.vn.iter().rev());
        (lo, hi.min(self.beta_cap()))
    }

    /// Largest `β` the check nodes can carry.
    fn beta_cap(&self) -> f64 {
        self.cn.iter().map(|(q, en)| q * en.last().map_or(0.0, |e| e.0)).sum::<f64>() / self.edges
    }

    /// `inf_{u,v} Σ p_d ln(1 + e^{u+dv}) - α u - (E/N) β v` and the optimal `v`.
    fn vn_term(&self, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        let target = self.edges * beta;
        let solve_u = |v: f64| -> Result<f64> {
            let d0 = self.vn[0].0;
            let guess = (alpha / (1.0 - alpha)).ln() - d0 * v;
            safeguarded_root(
                |u| {
                    self.vn.iter().fold((-alpha, 0.0), |(f, df), &(d, p)| {
                        let s = sigmoid(u + d * v);
                        (f + p * s, df + p * s * (1.0 - s))
                    })
                },
                guess,
                "variable-node weight equation",
            )
        };
        let edge_equation = |v: f64| -> (f64, f64) {
            let Ok(u) = solve_u(v) else {
                return (f64::NAN, f64::NAN);
            };
            let (mut a, mut b, mut c, mut g) = (0.0, 0.0, 0.0, -target);
            for &(d, p) in &self.vn {
                let s = sigmoid(u + d * v);
                let ds = p * s * (1.0 - s);
                a += ds;
                b += ds * d;
                c += ds * d * d;
                g += p * d * s;
            }
            // total derivative with du/dv = -b/a
            (g, c - b * b / a)
        };
        let v = safeguarded_root(edge_equation, 0.0, "variable-node edge equation")?;
        let u = solve_u(v)?;
        let value = self.vn.iter().map(|&(d, p)| p * softplus(u + d * v)).sum::<f64>() - alpha * u - target * v;
        Ok((value, v))
    }

    /// `inf_w Σ q_t ln A_t(e^w) - (E/N) β w` and the optimal `w`.
    fn cn_term(&self, beta: f64) -> Result<(f64, f64)> {
        let target = self.edges * beta;
        let w = safeguarded_root(
            |w| {
                self.cn.iter().fold((-target, 0.0), |(f, df), (q, en)| {
                    let (_, mean, var) = tilt_stats(en, w);
                    (f + q * mean, df + q * var)
                })
            },
            0.0,
            "check-node edge equation",
        )?;
        let value = self.cn.iter().map(|(q, en)| q * tilt_stats(en, w).0).sum::<f64>() - target * w;
        Ok((value, w))
    }

    /// Exponent at fixed `(α, β)` and its derivative in `β`.
    fn exponent(&self, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        let (vn, v) = self.vn_term(alpha, beta)?;
        let (cn, w) = self.cn_term(beta)?;
        let value = vn + cn - self.edges * entropy(beta);
        let slope = self.edges * (-v - w + (beta / (1.0 - beta)).ln());
        Ok((value, slope))
    }

    /// `G(α)`.
    pub fn growth_rate(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("growth rate needs 0 < alpha < 1, got {alpha}")));
        }
        if self.vn.len() == 1 {
            // A single degree fixes the edge weight at β = α.
            let beta = alpha;
            if beta >= self.beta_cap() {
                return Err(Error::Domain(format!("no admissible edge weight at alpha = {alpha}")));
            }
            return Ok(entropy(alpha) + self.cn_term(beta)?.0 - self.edges * entropy(beta));
        }
        let (lo, hi) = self.beta_range(alpha);
        if !(hi > lo) {
            return Err(Error::Domain(format!("no admissible edge weight at alpha = {alpha}")));
        }
        let at = |t: f64| lo + (hi - lo) * t;
        let grid: Vec<(f64, f64, f64)> = (0..BETA_GRID)
            .map(|k| {
                let s = -BETA_GRID_SPAN + 2.0 * BETA_GRID_SPAN * k as f64 / (BETA_GRID - 1) as f64;
                let t = sigmoid(s);
                self.exponent(alpha, at(t)).map(|(g, dg)| (t, g, dg))
            })
            .collect::<Result<_>>()?;
        let mut best = grid.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        for pair in grid.windows(2) {
            let (mut a, mut b) = (pair[0].0, pair[1].0);
            if !(pair[0].2 > 0.0 && pair[1].2 < 0.0) {
                continue;
            }
            // Bisect the stationarity condition in t.
            while b - a > 1e-13 * (1.0 + a) {
                let mid = 0.5 * (a + b);
                if self.exponent(alpha, at(mid))?.1 > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            best = best.max(self.exponent(alpha, at(0.5 * (a + b)))?.0);
        }
        Ok(best)
    }
}

/// `G(α)` of the ensemble.
pub fn growth_rate(ddp: &DegreeDistributionPair, alpha: f64) -> Result<f64> {
    GrowthModel::new(ddp).growth_rate(alpha)
}

/// Negative initial slope of `G`: `λ'(0)ρ'(1) < 1`, or `λ'(0)C < 1` when
/// some check node is not an SPC code.
pub fn good_growth(ddp: &DegreeDistributionPair) -> bool {
    ddp.growth_functional() < 1.0
}

fn log_grid(points: usize) -> Vec<f64> {
    let (a, b) = (CURVE_ALPHA_MIN.ln(), CURVE_ALPHA_MAX.ln());
    (0..points).map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp()).collect()
}

/// Smallest positive zero of `G`; `None` for bad-growth ensembles and when
/// `G` stays negative up to `α = 0.5`.
pub fn alpha_star(ddp: &DegreeDistributionPair) -> Result<Option<f64>> {
    if !good_growth(ddp) {
        return Ok(None);
    }
    let model = GrowthModel::new(ddp);
    let mut prev: Option<(f64, f64)> = None;
    for alpha in log_grid(CURVE_POINTS) {
        let g = model.growth_rate(alpha)?;
        if let Some((a0, g0)) = prev {
            if g0 < 0.0 && g >= 0.0 {
                return bisect_zero(&model, a0, alpha).map(Some);
            }
        }
        prev = Some((alpha, g));
    }
    Ok(None)
}

fn bisect_zero(model: &GrowthModel, mut lo: f64, mut hi: f64) -> Result<f64> {
    while hi - lo > ALPHA_STAR_TOL {
        let mid = 0.5 * (lo + hi);
        if model.growth_rate(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sampled `G(α)` with its classification.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRateCurve {
    pub samples: Vec<(f64, f64)>,
    pub alpha_star: Option<f64>,
    pub good_growth: bool,
}

impl GrowthRateCurve {
    /// Samples `G` on `points` log-spaced values in `[1e-4, 0.5]` and locates
    /// the first sign change from negative to nonnegative.
    pub fn compute(ddp: &DegreeDistributionPair, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidConfig("growth curve needs at least 2 points".into()));
        }
        let model = GrowthModel::new(ddp);
        let good = good_growth(ddp);
        let samples: Vec<(f64, f64)> =
            log_grid(points).into_iter().map(|a| model.growth_rate(a).map(|g| (a, g))).collect::<Result<_>>()?;
        let mut alpha_star = None;
        if good {
            if let Some(w) = samples.windows(2).find(|w| w[0].1 < 0.0 && w[1].1 >= 0.0) {
                alpha_star = Some(bisect_zero(&model, w[0].0, w[1].0)?);
            }
        }
        Ok(Self { samples, alpha_star, good_growth: good })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("alpha,growth_rate\n");
        for (a, g) in &self.samples {
            s.push_str(&format!("{a:.8e},{g:.10e}\n"));
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Exact finite-length oracle

fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 0..n {
        let next = &row[k] * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(next);
    }
    row
}

/// Exact `E[A_w]`, `w = 0..=N`, for raw node lists: the degree of every
/// variable node and `(code, count)` for every check-node type.
pub fn average_enumerator_from_counts(
    vn_degrees: &[usize],
    checks: &[(Arc<ComponentCodeSpec>, usize)],
) -> Result<Vec<BigRational>> {
    let n = vn_degrees.len();
    let edges: usize = vn_degrees.iter().sum();
    let sockets: usize = checks.iter().map(|(c, m)| c.length() * m).sum();
    if edges != sockets || edges == 0 {
        return Err(Error::UnrealizableLength(n));
    }
    // vn[w][ℓ] = coef[x^w y^ℓ] Π (1 + x y^d)
    let mut vn = vec![vec![BigUint::zero(); edges + 1]; n + 1];
    vn[0][0] = BigUint::one();
    let mut placed = 0;
    let mut used = 0;
    for &d in vn_degrees {
        for w in (0..=placed).rev() {
            for l in (0..=used).rev() {
                if !vn[w][l].is_zero() {
                    let add = vn[w][l].clone();
                    vn[w + 1][l + d] += add;
                }
            }
        }
        placed += 1;
        used += d;
    }
    // cn[ℓ] = coef[z^ℓ] Π A_t(z)^{m_t}
    let mut cn = vec![BigUint::zero(); edges + 1];
    cn[0] = BigUint::one();
    let mut degree = 0;
    for (code, m) in checks {
        let a = code.weight_enumerator();
        for _ in 0..*m {
            let mut next = vec![BigUint::zero(); edges + 1];
            for (l, c) in cn.iter().enumerate().take(degree + 1) {
                if c.is_zero() {
                    continue;
                }
                for (k, &ak) in a.iter().enumerate() {
                    if ak > 0 {
                        next[l + k] += c * BigUint::from(ak);
                    }
                }
            }
            cn = next;
            degree += code.length();
        }
    }
    let binom = binomial_row(edges);
    Ok((0..=n)
        .map(|w| {
            let mut acc = BigRational::zero();
            for l in 0..=edges {
                if vn[w][l].is_zero() || cn[l].is_zero() {
                    continue;
                }
                let num = BigInt::from(&vn[w][l] * &cn[l]);
                acc += BigRational::new(num, BigInt::from(binom[l].clone()));
            }
            acc
        })
        .collect())
}

/// Largest block length accepted by [`brute_force_average_enumerator`].
pub const BRUTE_FORCE_MAX_N: usize = 64;

/// `E[A_w]` of the integer realization of `ddp` at block length `n`.
pub fn brute_force_average_enumerator(ddp: &DegreeDistributionPair, n: usize) -> Result<Vec<f64>> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidConfig(format!("brute-force enumerator limited to N <= {BRUTE_FORCE_MAX_N}")));
    }
    let counts = ddp.node_counts(n)?;
    let checks: Vec<(Arc<ComponentCodeSpec>, usize)> =
        counts.check_codes.iter().cloned().zip(counts.check_counts.iter().copied()).collect();
    Ok(average_enumerator_from_counts(&counts.vn_degrees, &checks)?
        .iter()
        .map(|r| r.to_f64().unwrap_or(f64::NAN))
        .collect())
}
