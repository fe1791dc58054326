//! Degree-distribution pairs and their closed-form functionals.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::component::{CodeKind, ComponentCodeSpec};
use crate::error::{Error, Result};

/// Sums must equal one within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Fractions below this are dropped.
pub const PRUNE_BELOW: f64 = 1e-12;

/// Edge-perspective variable-node degree distribution `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableDistribution {
    entries: BTreeMap<usize, f64>,
}

impl VariableDistribution {
    pub fn new(entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (d, f) in entries {
            if d < 2 {
                return Err(Error::InvalidDistribution(format!("variable degree {d} < 2")));
            }
            if !(0.0..=1.0).contains(&f) || !f.is_finite() {
                return Err(Error::InvalidDistribution(format!("lambda_{d} = {f} outside [0,1]")));
            }
            if f >= PRUNE_BELOW {
                *map.entry(d).or_insert(0.0) += f;
            }
        }
        let sum: f64 = map.values().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("sum of lambda is {sum}, expected 1")));
        }
        Ok(Self { entries: map })
    }

    /// Accepts printed (rounded) fractions and rescales them to sum to one.
    pub fn renormalized(entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let v: Vec<(usize, f64)> = entries.into_iter().collect();
        let sum: f64 = v.iter().map(|e| e.1).sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("empty lambda".into()));
        }
        Self::new(v.into_iter().map(|(d, f)| (d, f / sum)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&d, &f)| (d, f))
    }

    pub fn fraction(&self, degree: usize) -> f64 {
        self.entries.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn max_degree(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    /// `∫λ = Σ λ_d / d`.
    pub fn integral(&self) -> f64 {
        self.iter().map(|(d, f)| f / d as f64).sum()
    }

    /// `λ(x) = Σ λ_d x^(d-1)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.iter().map(|(d, f)| f * x.powi(d as i32 - 1)).sum()
    }
}

/// One check-node type: a component code and its edge fraction.
#[derive(Debug, Clone)]
pub struct CheckType {
    pub label: u32,
    pub fraction: f64,
    pub code: Arc<ComponentCodeSpec>,
}

/// Edge-perspective check-node type mixture `ρ`.
#[derive(Debug, Clone)]
pub struct CheckDistribution {
    types: Vec<CheckType>,
}

impl CheckDistribution {
    pub fn new(types: impl IntoIterator<Item = (CodeKind, f64)>) -> Result<Self> {
        let types: Vec<CheckType> = types
            .into_iter()
            .enumerate()
            .map(|(i, (k, f))| Ok(CheckType { label: i as u32 + 1, fraction: f, code: ComponentCodeSpec::get(k)? }))
            .collect::<Result<_>>()?;
        Self::from_types(types)
    }

    pub fn from_types(types: Vec<CheckType>) -> Result<Self> {
        let mut kept = Vec::with_capacity(types.len());
        for t in types {
            if !(0.0..=1.0).contains(&t.fraction) || !t.fraction.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "rho fraction {} for {} outside [0,1]",
                    t.fraction,
                    t.code.kind()
                )));
            }
            if t.code.length() < 3 {
                return Err(Error::LengthTooSmall(t.code.length()));
            }
            if t.fraction >= PRUNE_BELOW {
                kept.push(t);
            }
        }
        let sum: f64 = kept.iter().map(|t| t.fraction).sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("sum of rho is {sum}, expected 1")));
        }
        Ok(Self { types: kept })
    }

    pub fn renormalized(types: impl IntoIterator<Item = (CodeKind, f64)>) -> Result<Self> {
        let v: Vec<(CodeKind, f64)> = types.into_iter().collect();
        let sum: f64 = v.iter().map(|e| e.1).sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("empty rho".into()));
        }
        Self::new(v.into_iter().map(|(k, f)| (k, f / sum)))
    }

    pub fn types(&self) -> &[CheckType] {
        &self.types
    }

    pub fn all_spc(&self) -> bool {
        self.types.iter().all(|t| t.code.kind().is_spc())
    }

    /// `Σ ρ_t (1 - R_t)`.
    pub fn redundancy(&self) -> f64 {
        self.types.iter().map(|t| t.fraction * (1.0 - t.code.rate())).sum()
    }

    /// `Σ ρ_t / s_t`.
    pub fn integral(&self) -> f64 {
        self.types.iter().map(|t| t.fraction / t.code.length() as f64).sum()
    }
}

/// An ensemble given by its edge-perspective distributions.
#[derive(Debug, Clone)]
pub struct DegreeDistributionPair {
    pub lambda: VariableDistribution,
    pub rho: CheckDistribution,
}

impl DegreeDistributionPair {
    pub fn new(lambda: VariableDistribution, rho: CheckDistribution) -> Self {
        Self { lambda, rho }
    }

    /// `R = 1 - Σ ρ_t (1 - R_t) / Σ λ_d / d`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.rho.redundancy() / self.lambda.integral()
    }

    /// Edge count for block length `n`, with the (real-valued) number of check
    /// nodes per type.
    pub fn edge_count(&self, n: usize) -> Result<EdgeCount> {
        if n == 0 {
            return Err(Error::UnrealizableLength(0));
        }
        let e = n as f64 / self.lambda.integral();
        Ok(EdgeCount {
            edges: e.round() as usize,
            checks_per_type: self.rho.types().iter().map(|t| e * t.fraction / t.code.length() as f64).collect(),
        })
    }

    /// `λ_2 Σ_t ρ_t (s_t - 1)`, i.e. `λ'(0) ρ'(1)`, for SPC-only ensembles.
    pub fn stability_product(&self) -> Result<f64> {
        if !self.rho.all_spc() {
            return Err(Error::WrongVariant(
                "stability product requires SPC check nodes; use weight2_functional".into(),
            ));
        }
        let rho_prime: f64 = self.rho.types().iter().map(|t| t.fraction * (t.code.length() as f64 - 1.0)).sum();
        Ok(self.lambda.fraction(2) * rho_prime)
    }

    /// `λ_2 C` with `C = 2 Σ_{t: r_t = 2} ρ_t A_2^(t) / s_t`.
    pub fn weight2_functional(&self) -> f64 {
        let c: f64 = self
            .rho
            .types()
            .iter()
            .filter(|t| t.code.min_distance() == 2)
            .map(|t| 2.0 * t.fraction * t.code.a2() as f64 / t.code.length() as f64)
            .sum();
        self.lambda.fraction(2) * c
    }

    /// The functional that governs the initial slope of the growth rate:
    /// `λ'(0)ρ'(1)` for LDPC ensembles and `λ'(0)C` otherwise.
    pub fn growth_functional(&self) -> f64 {
        self.stability_product().unwrap_or_else(|_| self.weight2_functional())
    }

    /// Integer node counts realizing this ensemble at block length `n`.
    ///
    /// Variable-node counts use largest-remainder rounding, check-node counts
    /// round to nearest. Degrees larger than the number of check nodes are
    /// clamped, and the residual socket mismatch is absorbed by moving single
    /// edges on nodes of the largest-fraction variable degrees.
    pub fn node_counts(&self, n: usize) -> Result<NodeCounts> {
        if n == 0 {
            return Err(Error::UnrealizableLength(n));
        }
        let integral = self.lambda.integral();
        let targets: Vec<(usize, f64)> =
            self.lambda.iter().map(|(d, f)| (d, n as f64 * (f / d as f64) / integral)).collect();
        let counts = largest_remainder(&targets.iter().map(|t| t.1).collect::<Vec<_>>(), n);

        let e_real = n as f64 / integral;
        let check_targets: Vec<f64> =
            self.rho.types().iter().map(|t| e_real * t.fraction / t.code.length() as f64).collect();
        let lengths: Vec<usize> = self.rho.types().iter().map(|t| t.code.length()).collect();
        let vn_sockets = |m: usize| -> usize { targets.iter().zip(&counts).map(|(&(d, _), &c)| c * d.min(m)).sum() };
        let check_counts =
            choose_check_counts(&check_targets, &lengths, n, vn_sockets).ok_or(Error::UnrealizableLength(n))?;
        let m: usize = check_counts.iter().sum();
        let edges: usize = check_counts.iter().zip(&lengths).map(|(&c, &s)| c * s).sum();

        // Variable degrees, grouped by class in order of decreasing fraction.
        let mut classes: Vec<(usize, f64, usize)> =
            targets.iter().zip(&counts).map(|(&(d, _), &c)| (d, self.lambda.fraction(d), c)).collect();
        classes.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut vn_degrees: Vec<usize> = Vec::with_capacity(n);
        for &(d, _, c) in &classes {
            vn_degrees.extend(std::iter::repeat_n(d.min(m), c));
        }
        let mut residue = edges as i64 - vn_degrees.iter().sum::<usize>() as i64;
        while residue != 0 {
            let before = residue;
            for deg in vn_degrees.iter_mut() {
                if residue > 0 && *deg < m {
                    *deg += 1;
                    residue -= 1;
                } else if residue < 0 && *deg > 2 {
                    *deg -= 1;
                    residue += 1;
                }
                if residue == 0 {
                    break;
                }
            }
            if residue == before {
                return Err(Error::UnrealizableLength(n));
            }
        }
        // Restore ascending degree order for reproducible construction.
        vn_degrees.sort_unstable();
        Ok(NodeCounts {
            vn_degrees,
            check_codes: self.rho.types().iter().map(|t| Arc::clone(&t.code)).collect(),
            check_counts,
        })
    }

    pub fn to_file(&self) -> DdpFile {
        DdpFile {
            rate: self.design_rate(),
            lambda: self.lambda.iter().map(|(d, f)| (d.to_string(), f)).collect(),
            rho: self
                .rho
                .types()
                .iter()
                .map(|t| RhoEntry { label: t.label, code: t.code.kind().to_string(), fraction: t.fraction })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DdpFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_ddp()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Integer realization of an ensemble at a fixed block length.
#[derive(Debug, Clone)]
pub struct NodeCounts {
    /// Degree of each variable node, ascending.
    pub vn_degrees: Vec<usize>,
    pub check_codes: Vec<Arc<ComponentCodeSpec>>,
    pub check_counts: Vec<usize>,
}

impl NodeCounts {
    pub fn block_length(&self) -> usize {
        self.vn_degrees.len()
    }

    pub fn edges(&self) -> usize {
        self.vn_degrees.iter().sum()
    }

    pub fn total_checks(&self) -> usize {
        self.check_counts.iter().sum()
    }

    /// Count of variable nodes per degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &d in &self.vn_degrees {
            *h.entry(d).or_insert(0) += 1;
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCount {
    pub edges: usize,
    pub checks_per_type: Vec<f64>,
}

/// On-disk JSON form of a degree-distribution pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DdpFile {
    pub rate: f64,
    pub lambda: BTreeMap<String, f64>,
    pub rho: Vec<RhoEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhoEntry {
    #[serde(rename = "type")]
    pub label: u32,
    pub code: String,
    pub fraction: f64,
}

/// Tolerance between the declared `rate` and the computed design rate.
const FILE_RATE_TOL: f64 = 1e-3;

impl DdpFile {
    pub fn into_ddp(self) -> Result<DegreeDistributionPair> {
        let lambda = VariableDistribution::new(
            self.lambda
                .iter()
                .map(|(d, &f)| {
                    d.trim().parse::<usize>().map(|d| (d, f)).map_err(|_| Error::Parse(format!("bad degree `{d}`")))
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let types = self
            .rho
            .iter()
            .map(|r| Ok(CheckType { label: r.label, fraction: r.fraction, code: ComponentCodeSpec::get(r.code.parse()?)? }))
            .collect::<Result<Vec<_>>>()?;
        let ddp = DegreeDistributionPair::new(lambda, CheckDistribution::from_types(types)?);
        let rate = ddp.design_rate();
        if (rate - self.rate).abs() > FILE_RATE_TOL {
            return Err(Error::InvalidDistribution(format!(
                "declared rate {} differs from design rate {rate:.6}",
                self.rate
            )));
        }
        Ok(ddp)
    }
}

/// Picks integer check-node counts near `targets` whose socket total can be
/// matched by `n` variable nodes of degree between 2 and the check count.
/// Nearest rounding wins whenever it is realizable; otherwise nearby counts
/// are scored by their deviation plus a penalty on the socket residue that
/// variable degrees would have to absorb.
fn choose_check_counts(
    targets: &[f64],
    lengths: &[usize],
    n: usize,
    vn_sockets: impl Fn(usize) -> usize,
) -> Option<Vec<usize>> {
    const RADIUS: i64 = 4;
    const RESIDUE_WEIGHT: f64 = 10.0;
    let rounded: Vec<i64> = targets.iter().map(|t| t.round() as i64).collect();
    let realizable = |counts: &[i64]| {
        let m: i64 = counts.iter().sum();
        let sockets: i64 = counts.iter().zip(lengths).map(|(&x, &s)| x * s as i64).sum();
        counts.iter().all(|&x| x >= 0) && m > 0 && sockets >= 2 * n as i64 && sockets <= n as i64 * m
    };
    if realizable(&rounded) {
        return Some(rounded.iter().map(|&x| x as usize).collect());
    }
    // Only the three largest types are perturbed.
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| targets[b].total_cmp(&targets[a]));
    let varied: Vec<usize> = order.into_iter().take(3).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let combos = (2 * RADIUS + 1).pow(varied.len() as u32);
    for code in 0..combos {
        let mut counts = rounded.clone();
        let mut c = code;
        for &i in &varied {
            counts[i] += c % (2 * RADIUS + 1) - RADIUS;
            c /= 2 * RADIUS + 1;
        }
        if !realizable(&counts) {
            continue;
        }
        let m = counts.iter().sum::<i64>() as usize;
        let sockets: i64 = counts.iter().zip(lengths).map(|(&x, &s)| x * s as i64).sum();
        let residue = (sockets - vn_sockets(m) as i64).abs() as f64;
        let cost: f64 = counts.iter().zip(targets).zip(lengths).map(|((&x, &t), &s)| (x as f64 - t).abs() * s as f64).sum::<f64>()
            + RESIDUE_WEIGHT * residue;
        if best.as_ref().is_none_or(|(b, _)| cost < *b - 1e-12) {
            best = Some((cost, counts.iter().map(|&x| x as usize).collect()));
        }
    }
    best.map(|b| b.1)
}

fn largest_remainder(targets: &[f64], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = targets.iter().map(|t| t.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| (targets[b] - targets[b].floor()).total_cmp(&(targets[a] - targets[a].floor())).then(a.cmp(&b)));
    for &i in order.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Ensembles with published degree distributions. Printed fractions are
/// rounded to six decimals, so these are rescaled to sum to one.
pub mod published {
    use super::*;

    fn build(lambda: &[(usize, f64)], rho: &[(CodeKind, f64)]) -> DegreeDistributionPair {
        DegreeDistributionPair::new(
            VariableDistribution::renormalized(lambda.iter().copied()).expect("valid lambda"),
            CheckDistribution::renormalized(rho.iter().copied()).expect("valid rho"),
        )
    }

    /// GLDPC ensemble optimized for 10 BEC iterations.
    pub fn ensemble_a() -> DegreeDistributionPair {
        build(&[(2, 1.0)], &[(CodeKind::Spc(7), 0.134313), (CodeKind::Hamming(4), 0.865687)])
    }

    /// LDPC ensemble optimized for 10 BEC iterations.
    pub fn ensemble_b() -> DegreeDistributionPair {
        build(&[(3, 0.841365), (30, 0.158635)], &[(CodeKind::Spc(7), 1.0)])
    }

    /// Ensemble optimized for 200 BEC iterations.
    pub fn ensemble_c() -> DegreeDistributionPair {
        build(
            &[(2, 0.318057), (3, 0.202714), (4, 0.058171), (6, 0.147257), (13, 0.173086), (15, 0.100714)],
            &[(CodeKind::Spc(7), 1.0)],
        )
    }

    /// AWGN ensemble for unlimited iterations.
    pub fn ensemble_d() -> DegreeDistributionPair {
        build(
            &[(2, 0.244010), (3, 0.154621), (4, 0.065721), (5, 0.084352), (6, 0.088753), (8, 0.039511), (18, 0.323032)],
            &[(CodeKind::Spc(8), 0.803716), (CodeKind::Spc(9), 0.196284)],
        )
    }

    /// AWGN ensemble for 10 iterations.
    pub fn ensemble_e() -> DegreeDistributionPair {
        build(
            &[(2, 0.033563), (3, 0.567888), (4, 0.068026), (12, 0.283606), (14, 0.046918)],
            &[(CodeKind::Spc(7), 0.001226), (CodeKind::Spc(8), 0.998775)],
        )
    }

    /// AWGN ensemble for 20 iterations.
    pub fn ensemble_f() -> DegreeDistributionPair {
        build(
            &[(2, 0.19128), (4, 0.307464), (5, 0.061890), (6, 0.083437), (8, 0.083481), (30, 0.272447)],
            &[(CodeKind::Spc(9), 0.902024), (CodeKind::Spc(11), 0.097976)],
        )
    }

    /// AWGN ensemble for 30 iterations.
    pub fn ensemble_g() -> DegreeDistributionPair {
        build(
            &[(2, 0.175711), (3, 0.037810), (4, 0.279311), (5, 0.068726), (7, 0.048109), (30, 0.390333)],
            &[(CodeKind::Spc(9), 0.177118), (CodeKind::Spc(10), 0.822882)],
        )
    }

    /// Unlimited-iteration design constrained to `λ'(0)ρ'(1) < 0.5`.
    pub fn stability_constrained() -> DegreeDistributionPair {
        build(
            &[(2, 0.062498), (3, 0.479743), (6, 0.049808), (9, 0.117758), (30, 0.290192)],
            &[(CodeKind::Spc(9), 1.0)],
        )
    }

    /// `(dv, dc)`-regular LDPC ensemble.
    pub fn regular(dv: usize, dc: usize) -> DegreeDistributionPair {
        build(&[(dv, 1.0)], &[(CodeKind::Spc(dc), 1.0)])
    }

    /// The seven tabulated ensembles, labelled `A`..`G`.
    pub fn all() -> Vec<(&'static str, DegreeDistributionPair)> {
        vec![
            ("A", ensemble_a()),
            ("B", ensemble_b()),
            ("C", ensemble_c()),
            ("D", ensemble_d()),
            ("E", ensemble_e()),
            ("F", ensemble_f()),
            ("G", ensemble_g()),
        ]
    }

    pub fn by_name(name: &str) -> Option<DegreeDistributionPair> {
        match name.to_ascii_lowercase().as_str() {
            "a" => Some(ensemble_a()),
            "b" => Some(ensemble_b()),
            "c" => Some(ensemble_c()),
            "d" => Some(ensemble_d()),
            "e" => Some(ensemble_e()),
            "f" => Some(ensemble_f()),
            "g" => Some(ensemble_g()),
            "constrained" => Some(stability_constrained()),
            "regular-3-6" => Some(regular(3, 6)),
            _ => None,
        }
    }
}
