//! EXIT functions, iteration-limited decoding trajectories and the
//! iteration-constrained threshold search.
//!
//! A trajectory starts with no a-priori information at the variable nodes and
//! alternates one VN update and one CN update per iteration. It never stops
//! early on an intersection of the two curves: what matters is only the
//! mutual information reached after the iteration budget is spent.

use std::sync::{Arc, OnceLock};

use crate::component::ComponentCodeSpec;
use crate::ensemble::DegreeDistributionPair;
use crate::error::{Error, Result};

/// Channel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Bec,
    Awgn,
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bec" => Ok(ChannelKind::Bec),
            "awgn" | "biawgn" | "bi-awgn" => Ok(ChannelKind::Awgn),
            _ => Err(Error::Parse(format!("unknown channel `{s}` (expected bec or awgn)"))),
        }
    }
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Awgn => "awgn",
        })
    }
}

/// A concrete channel: erasure probability or `Eb/N0` in dB at a code rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelParameter {
    Bec { epsilon: f64 },
    Awgn { eb_n0_db: f64, code_rate: f64 },
}

impl ChannelParameter {
    pub fn bec(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidChannel(format!("erasure probability {epsilon} outside [0,1]")));
        }
        Ok(Self::Bec { epsilon })
    }

    pub fn awgn(eb_n0_db: f64, code_rate: f64) -> Result<Self> {
        if !(code_rate > 0.0 && code_rate < 1.0) {
            return Err(Error::InvalidChannel(format!("code rate {code_rate} outside (0,1)")));
        }
        if !eb_n0_db.is_finite() {
            return Err(Error::InvalidChannel("Eb/N0 must be finite".into()));
        }
        Ok(Self::Awgn { eb_n0_db, code_rate })
    }

    pub fn kind(&self) -> ChannelKind {
        match self {
            ChannelParameter::Bec { .. } => ChannelKind::Bec,
            ChannelParameter::Awgn { .. } => ChannelKind::Awgn,
        }
    }

    /// The scalar parameter: `ε` or `Eb/N0` in dB.
    pub fn value(&self) -> f64 {
        match *self {
            ChannelParameter::Bec { epsilon } => epsilon,
            ChannelParameter::Awgn { eb_n0_db, .. } => eb_n0_db,
        }
    }

    /// Standard deviation of the channel LLR, `sqrt(8 R Eb/N0)`.
    pub fn sigma_ch(&self) -> f64 {
        match *self {
            ChannelParameter::Bec { .. } => 0.0,
            ChannelParameter::Awgn { eb_n0_db, code_rate } => (8.0 * code_rate * 10f64.powf(eb_n0_db / 10.0)).sqrt(),
        }
    }

    /// Noise standard deviation of unit-energy BPSK, `1 / sqrt(2 R Eb/N0)`.
    pub fn noise_sigma(&self) -> f64 {
        match *self {
            ChannelParameter::Bec { .. } => 0.0,
            ChannelParameter::Awgn { eb_n0_db, code_rate } => (2.0 * code_rate * 10f64.powf(eb_n0_db / 10.0)).sqrt().recip(),
        }
    }
}

// ---------------------------------------------------------------------------
// J function

const J_SIMPSON_INTERVALS: usize = 2000;
const J_T_RANGE: f64 = 12.0;
const J_SIGMA_MAX: f64 = 100.0;

/// Mutual information between a uniform bit and a consistent Gaussian LLR
/// with mean `σ²/2` and variance `σ²`.
pub fn j_function(sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::Domain(format!("J is defined for sigma >= 0, got {sigma}")));
    }
    Ok(j_quadrature(sigma))
}

fn j_quadrature(sigma: f64) -> f64 {
    if sigma < 1e-6 {
        return 0.0;
    }
    let mu = sigma * sigma / 2.0;
    let h = 2.0 * J_T_RANGE / J_SIMPSON_INTERVALS as f64;
    let f = |t: f64| {
        let l = mu + sigma * t;
        // log2(1 + e^{-l}) in a form that does not overflow for large |l|
        let soft = if l > 0.0 { (-l).exp().ln_1p() } else { -l + l.exp().ln_1p() };
        (-0.5 * t * t).exp() * soft
    };
    let mut acc = f(-J_T_RANGE) + f(J_T_RANGE);
    for k in 1..J_SIMPSON_INTERVALS {
        let t = -J_T_RANGE + k as f64 * h;
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(t);
    }
    let expectation = acc * h / 3.0 / (2.0 * std::f64::consts::PI).sqrt() / std::f64::consts::LN_2;
    (1.0 - expectation).clamp(0.0, 1.0)
}

/// Inverse of [`j_function`] by bisection to `1e-10`.
pub fn j_inverse(i: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&i) {
        return Err(Error::Domain(format!("J^-1 is defined on [0,1), got {i}")));
    }
    if i == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, J_SIGMA_MAX);
    if j_quadrature(hi) <= i {
        return Ok(hi);
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if j_quadrature(mid) < i {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Tabulated `J` and `J^-1` with linear interpolation, for the optimizer's
/// inner loop.
struct JTable {
    step: f64,
    values: Vec<f64>,
}

const J_TABLE_SIGMA_MAX: f64 = 60.0;
const J_TABLE_STEP: f64 = 1.0 / 256.0;

impl JTable {
    fn get() -> &'static JTable {
        static TABLE: OnceLock<JTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let n = (J_TABLE_SIGMA_MAX / J_TABLE_STEP) as usize;
            let mut values: Vec<f64> = (0..=n).map(|k| j_quadrature(k as f64 * J_TABLE_STEP)).collect();
            // enforce monotonicity against rounding at the saturated end
            for k in 1..values.len() {
                if values[k] < values[k - 1] {
                    values[k] = values[k - 1];
                }
            }
            JTable { step: J_TABLE_STEP, values }
        })
    }

    fn j(&self, sigma: f64) -> f64 {
        if !(sigma > 0.0) {
            return 0.0;
        }
        let x = sigma / self.step;
        let k = x.floor() as usize;
        if k + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let f = x - k as f64;
        self.values[k] * (1.0 - f) + self.values[k + 1] * f
    }

    fn j_inv(&self, i: f64) -> f64 {
        if i <= 0.0 {
            return 0.0;
        }
        let v = &self.values;
        if i >= *v.last().unwrap() {
            return (v.len() - 1) as f64 * self.step;
        }
        let k = v.partition_point(|&x| x < i).max(1);
        let (a, b) = (v[k - 1], v[k]);
        let f = if b > a { (i - a) / (b - a) } else { 0.0 };
        ((k - 1) as f64 + f) * self.step
    }
}

/// How EXIT functions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluation {
    /// Direct quadrature for every `J` evaluation.
    Exact,
    /// Tabulated `J` with linear interpolation.
    #[default]
    Tabulated,
}

fn j_eval(sigma: f64, mode: Evaluation) -> f64 {
    match mode {
        Evaluation::Exact => j_quadrature(sigma),
        Evaluation::Tabulated => JTable::get().j(sigma),
    }
}

fn j_inv_eval(i: f64, mode: Evaluation) -> f64 {
    match mode {
        Evaluation::Exact => j_inverse(i.clamp(0.0, 1.0 - 1e-16)).unwrap_or(J_SIGMA_MAX),
        Evaluation::Tabulated => JTable::get().j_inv(i),
    }
}

// ---------------------------------------------------------------------------
// EXIT functions

/// Extrinsic information out of a degree-`degree` variable node.
pub fn vn_exit(degree: usize, channel: &ChannelParameter, i_a: f64) -> f64 {
    vn_exit_with(degree, channel, i_a, Evaluation::Exact)
}

pub fn vn_exit_with(degree: usize, channel: &ChannelParameter, i_a: f64, mode: Evaluation) -> f64 {
    let i_a = i_a.clamp(0.0, 1.0);
    if i_a >= 1.0 {
        return 1.0;
    }
    match *channel {
        ChannelParameter::Bec { epsilon } => 1.0 - epsilon * (1.0 - i_a).powi(degree as i32 - 1),
        ChannelParameter::Awgn { .. } => {
            let s = j_inv_eval(i_a, mode);
            let sc = channel.sigma_ch();
            j_eval(((degree as f64 - 1.0) * s * s + sc * sc).sqrt(), mode)
        }
    }
}

/// Extrinsic information out of a check node with the given component code.
pub fn cn_exit(code: &ComponentCodeSpec, kind: ChannelKind, i_a: f64) -> Result<f64> {
    cn_exit_with(code, kind, i_a, Evaluation::Exact)
}

pub fn cn_exit_with(code: &ComponentCodeSpec, kind: ChannelKind, i_a: f64, mode: Evaluation) -> Result<f64> {
    let i_a = i_a.clamp(0.0, 1.0);
    match kind {
        ChannelKind::Bec => Ok(code.bec_exit(i_a)),
        ChannelKind::Awgn => {
            if !code.kind().is_spc() {
                return Err(Error::UnsupportedAwgnGeneralized);
            }
            if i_a <= 0.0 {
                return Ok(0.0);
            }
            if i_a >= 1.0 {
                return Ok(1.0);
            }
            let s = code.length() as f64;
            Ok((1.0 - j_eval((s - 1.0).sqrt() * j_inv_eval(1.0 - i_a, mode), mode)).clamp(0.0, 1.0))
        }
    }
}

// ---------------------------------------------------------------------------
// Trajectories

/// Mutual information exchanged during one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitRecord {
    pub i_av: f64,
    pub i_ev: f64,
    pub i_ac: f64,
    pub i_ec: f64,
}

/// Which quantity is compared against `ξ` after the iteration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMeasure {
    /// VN extrinsic information of the `i_max`-th VN update.
    LastVnUpdate,
    /// VN extrinsic information after the `i_max`-th CN update.
    AfterLastCnUpdate,
    /// Bit-level a-posteriori information after the `i_max`-th CN update.
    APosteriori,
}

impl OutputMeasure {
    /// Default measure for each channel; see the crate README.
    pub fn default_for(kind: ChannelKind) -> Self {
        match kind {
            ChannelKind::Bec => OutputMeasure::LastVnUpdate,
            ChannelKind::Awgn => OutputMeasure::AfterLastCnUpdate,
        }
    }
}

impl std::str::FromStr for OutputMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last-vn" => Ok(Self::LastVnUpdate),
            "after-cn" => Ok(Self::AfterLastCnUpdate),
            "app" => Ok(Self::APosteriori),
            _ => Err(Error::Parse(format!("unknown output measure `{s}` (last-vn, after-cn, app)"))),
        }
    }
}

/// Per-iteration record of an iteration-limited decoding path.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitTrajectory {
    pub records: Vec<ExitRecord>,
    pub i_max: usize,
    /// Whether the output reached `ξ`; `None` when no target was given or
    /// the budget is zero.
    pub achieved: Option<bool>,
    /// The output quantity selected by the [`OutputMeasure`].
    pub output: f64,
}

impl ExitTrajectory {
    pub fn final_i_ev(&self) -> Option<f64> {
        self.records.last().map(|r| r.i_ev)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,i_av,i_ev,i_ac,i_ec\n");
        for (k, r) in self.records.iter().enumerate() {
            s.push_str(&format!("{},{:.12},{:.12},{:.12},{:.12}\n", k + 1, r.i_av, r.i_ev, r.i_ac, r.i_ec));
        }
        s
    }
}

/// The pair of EXIT curves of an ensemble, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ExitCurves {
    lambda: Vec<(usize, f64)>,
    node_fractions: Vec<(usize, f64)>,
    checks: Vec<(f64, Arc<ComponentCodeSpec>)>,
    mode: Evaluation,
}

impl ExitCurves {
    pub fn new(ddp: &DegreeDistributionPair, mode: Evaluation) -> Self {
        let integral = ddp.lambda.integral();
        Self {
            lambda: ddp.lambda.iter().collect(),
            node_fractions: ddp.lambda.iter().map(|(d, f)| (d, f / d as f64 / integral)).collect(),
            checks: ddp.rho.types().iter().map(|t| (t.fraction, Arc::clone(&t.code))).collect(),
            mode,
        }
    }

    pub fn check_supported(&self, kind: ChannelKind) -> Result<()> {
        if kind == ChannelKind::Awgn && self.checks.iter().any(|(_, c)| !c.kind().is_spc()) {
            return Err(Error::UnsupportedAwgnGeneralized);
        }
        Ok(())
    }

    /// `Σ_d λ_d I_E,V(d, I_A)`.
    pub fn vn_curve(&self, channel: &ChannelParameter, i_a: f64) -> f64 {
        match *channel {
            // one pass without per-degree clamping overhead
            ChannelParameter::Bec { epsilon } => {
                let e = 1.0 - i_a.clamp(0.0, 1.0);
                1.0 - epsilon * self.lambda.iter().map(|&(d, f)| f * e.powi(d as i32 - 1)).sum::<f64>()
            }
            ChannelParameter::Awgn { .. } => {
                self.lambda.iter().map(|&(d, f)| f * vn_exit_with(d, channel, i_a, self.mode)).sum()
            }
        }
    }

    /// `Σ_t ρ_t I_E,C(t, I_A)`.
    pub fn cn_curve(&self, kind: ChannelKind, i_a: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (f, code) in &self.checks {
            acc += f * cn_exit_with(code, kind, i_a, self.mode)?;
        }
        Ok(acc.clamp(0.0, 1.0))
    }

    fn app(&self, channel: &ChannelParameter, i_ec: f64) -> f64 {
        match *channel {
            ChannelParameter::Bec { epsilon } => {
                1.0 - epsilon * self.node_fractions.iter().map(|&(d, f)| f * (1.0 - i_ec).powi(d as i32)).sum::<f64>()
            }
            ChannelParameter::Awgn { .. } => {
                if i_ec >= 1.0 {
                    return 1.0;
                }
                let s = j_inv_eval(i_ec, self.mode);
                let sc = channel.sigma_ch();
                self.node_fractions.iter().map(|&(d, f)| f * j_eval((d as f64 * s * s + sc * sc).sqrt(), self.mode)).sum()
            }
        }
    }

    /// Runs exactly `i_max` iterations from zero a-priori information.
    pub fn trajectory(&self, channel: &ChannelParameter, i_max: usize, output: OutputMeasure) -> Result<ExitTrajectory> {
        self.check_supported(channel.kind())?;
        let mut records = Vec::with_capacity(i_max);
        let mut i_av = 0.0;
        for _ in 0..i_max {
            let i_ev = self.vn_curve(channel, i_av).clamp(0.0, 1.0);
            let i_ac = i_ev;
            let i_ec = self.cn_curve(channel.kind(), i_ac)?;
            records.push(ExitRecord { i_av, i_ev, i_ac, i_ec });
            i_av = i_ec;
        }
        let output = match (records.last(), output) {
            (None, _) => 0.0,
            (Some(r), OutputMeasure::LastVnUpdate) => r.i_ev,
            (Some(r), OutputMeasure::AfterLastCnUpdate) => self.vn_curve(channel, r.i_ec).clamp(0.0, 1.0),
            (Some(r), OutputMeasure::APosteriori) => self.app(channel, r.i_ec).clamp(0.0, 1.0),
        };
        Ok(ExitTrajectory { records, i_max, achieved: None, output })
    }

    /// Output information after `i_max` iterations, without recording the path.
    pub fn final_output(&self, channel: &ChannelParameter, i_max: usize, output: OutputMeasure) -> Result<f64> {
        if i_max == 0 {
            return Ok(0.0);
        }
        let kind = channel.kind();
        let mut i_av = 0.0;
        let mut last = (0.0, 0.0);
        for _ in 0..i_max {
            let i_ev = self.vn_curve(channel, i_av).clamp(0.0, 1.0);
            let i_ec = self.cn_curve(kind, i_ev)?;
            last = (i_ev, i_ec);
            i_av = i_ec;
        }
        Ok(match output {
            OutputMeasure::LastVnUpdate => last.0,
            OutputMeasure::AfterLastCnUpdate => self.vn_curve(channel, last.1).clamp(0.0, 1.0),
            OutputMeasure::APosteriori => self.app(channel, last.1).clamp(0.0, 1.0),
        })
    }
}

/// Runs an `i_max`-iteration trajectory with the default output measure.
pub fn run_trajectory(ddp: &DegreeDistributionPair, channel: &ChannelParameter, i_max: usize) -> Result<ExitTrajectory> {
    ExitCurves::new(ddp, Evaluation::Exact).trajectory(channel, i_max, OutputMeasure::default_for(channel.kind()))
}

// ---------------------------------------------------------------------------
// Threshold search

/// Default target information.
pub const DEFAULT_XI: f64 = 0.99;
pub const DEFAULT_BEC_TOL: f64 = 1e-6;
pub const DEFAULT_AWGN_TOL_DB: f64 = 1e-3;
pub const AWGN_BRACKET_DB: (f64, f64) = (-2.0, 10.0);
const MAX_BISECTION_STEPS: usize = 40;

/// An iteration-constrained threshold request.
#[derive(Debug, Clone)]
pub struct ThresholdQuery {
    pub ddp: DegreeDistributionPair,
    pub kind: ChannelKind,
    pub i_max: usize,
    pub xi: f64,
    pub tolerance: f64,
    pub output: OutputMeasure,
    pub evaluation: Evaluation,
}

impl ThresholdQuery {
    pub fn new(ddp: DegreeDistributionPair, kind: ChannelKind, i_max: usize) -> Self {
        Self {
            ddp,
            kind,
            i_max,
            xi: DEFAULT_XI,
            tolerance: match kind {
                ChannelKind::Bec => DEFAULT_BEC_TOL,
                ChannelKind::Awgn => DEFAULT_AWGN_TOL_DB,
            },
            output: OutputMeasure::default_for(kind),
            evaluation: Evaluation::Tabulated,
        }
    }

    pub fn with_xi(mut self, xi: f64) -> Self {
        self.xi = xi;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_output(mut self, output: OutputMeasure) -> Self {
        self.output = output;
        self
    }

    pub fn with_evaluation(mut self, evaluation: Evaluation) -> Self {
        self.evaluation = evaluation;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(Error::Domain(format!("xi must lie in (0,1), got {}", self.xi)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.i_max == 0 {
            return Err(Error::Domain("i_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Evaluates thresholds for many ensembles of the same channel setting.
pub fn iteration_constrained_threshold(query: &ThresholdQuery) -> Result<ChannelParameter> {
    query.validate()?;
    let curves = ExitCurves::new(&query.ddp, query.evaluation);
    curves.check_supported(query.kind)?;
    let rate = query.ddp.design_rate();
    threshold_with(&curves, query.kind, rate, query.i_max, query.xi, query.tolerance, query.output)
}

pub(crate) fn threshold_with(
    curves: &ExitCurves,
    kind: ChannelKind,
    rate: f64,
    i_max: usize,
    xi: f64,
    tol: f64,
    output: OutputMeasure,
) -> Result<ChannelParameter> {
    // `good` is the favourable end of the bracket, `bad` the unfavourable one.
    let make = |x: f64| -> Result<ChannelParameter> {
        match kind {
            ChannelKind::Bec => ChannelParameter::bec(x),
            ChannelKind::Awgn => ChannelParameter::awgn(x, rate.clamp(1e-9, 1.0 - 1e-9)),
        }
    };
    let passes = |x: f64| -> Result<bool> { Ok(curves.final_output(&make(x)?, i_max, output)? >= xi) };
    let (mut good, mut bad) = match kind {
        ChannelKind::Bec => (0.0, 1.0),
        ChannelKind::Awgn => (AWGN_BRACKET_DB.1, AWGN_BRACKET_DB.0),
    };
    if !passes(good)? {
        return Err(Error::UnsatisfiableBracket);
    }
    if passes(bad)? {
        return make(bad);
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if (good - bad).abs() <= tol {
            break;
        }
        let mid = 0.5 * (good + bad);
        if passes(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    debug_assert!(passes(good)? && !passes(bad)?, "threshold predicate is not monotone");
    make(good)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::component::CodeKind;
    use crate::ensemble::published::*;

    /// Independent J oracle: trapezoid rule on a different grid and window.
    fn j_trapezoid(sigma: f64) -> f64 {
        if sigma == 0.0 {
            return 0.0;
        }
        let mu = sigma * sigma / 2.0;
        let (a, b, n) = (mu - 15.0 * sigma, mu + 15.0 * sigma, 30_000);
        let h = (b - a) / n as f64;
        let g = |l: f64| {
            let pdf = (-(l - mu).powi(2) / (2.0 * sigma * sigma)).exp() / (2.0 * std::f64::consts::PI * sigma * sigma).sqrt();
            pdf * (1.0 + (-l).exp()).log2()
        };
        let mut acc = 0.5 * (g(a) + g(b));
        for k in 1..n {
            acc += g(a + k as f64 * h);
        }
        1.0 - acc * h
    }

    #[test]
    fn j_basic_values() {
        assert_eq!(j_function(0.0).unwrap(), 0.0);
        assert!(j_function(50.0).unwrap() > 1.0 - 1e-9);
        assert!(j_function(-1.0).is_err());
        assert!(j_inverse(1.0).is_err());
        // oracle: bisection on the trapezoid J
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if j_trapezoid(m) < 0.5 {
                lo = m
            } else {
                hi = m
            }
        }
        let oracle = 0.5 * (lo + hi);
        // capacity-0.5 point of the BI-AWGN channel: Eb/N0 = 0.187 dB at rate 1/2
        assert!((oracle - 2.0435).abs() < 1e-3);
        assert!((j_inverse(0.5).unwrap() - oracle).abs() < 1e-6);
        for s in [0.1, 0.7, 1.6, 3.0, 6.0] {
            assert!((j_function(s).unwrap() - j_trapezoid(s)).abs() < 1e-8, "sigma {s}");
        }
    }

    #[test]
    fn j_inverse_round_trip() {
        for k in 0..=100 {
            let s = 0.01 + k as f64 * (10.0 - 0.01) / 100.0;
            let back = j_inverse(j_function(s).unwrap()).unwrap();
            assert!((back - s).abs() < 1e-6, "sigma {s} -> {back}");
        }
    }

    #[test]
    fn table_tracks_quadrature() {
        let t = JTable::get();
        for k in 0..200 {
            let s = k as f64 * 0.05;
            assert!((t.j(s) - j_quadrature(s)).abs() < 1e-5);
        }
        for k in 1..99 {
            let i = k as f64 / 100.0;
            assert!((t.j_inv(i) - j_inverse(i).unwrap()).abs() < 1e-3);
        }
    }

    #[test]
    fn vn_exit_examples() {
        let b5 = ChannelParameter::bec(0.5).unwrap();
        assert!((vn_exit(3, &b5, 0.0) - 0.5).abs() < 1e-15);
        assert_eq!(vn_exit(3, &b5, 1.0), 1.0);
        let b4 = ChannelParameter::bec(0.4).unwrap();
        // erasure DE: outgoing erasure probability ε(1 - i_a)
        assert!((vn_exit(2, &b4, 0.5) - (1.0 - 0.4 * 0.5)).abs() < 1e-15);
        let a = ChannelParameter::awgn(1.0, 0.5).unwrap();
        assert_eq!(vn_exit(4, &a, 1.0), 1.0);
        assert!((vn_exit(4, &a, 0.0) - j_function(a.sigma_ch()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cn_exit_examples() {
        let spc7 = ComponentCodeSpec::get(CodeKind::Spc(7)).unwrap();
        assert!((cn_exit(&spc7, ChannelKind::Bec, 0.5).unwrap() - 0.5f64.powi(6)).abs() < 1e-15);
        assert_eq!(cn_exit(&spc7, ChannelKind::Bec, 1.0).unwrap(), 1.0);
        assert_eq!(cn_exit(&spc7, ChannelKind::Awgn, 0.0).unwrap(), 0.0);
        assert_eq!(cn_exit(&spc7, ChannelKind::Awgn, 1.0).unwrap(), 1.0);
        let h = ComponentCodeSpec::get(CodeKind::Hamming(3)).unwrap();
        assert_eq!(cn_exit(&h, ChannelKind::Bec, 1.0).unwrap(), 1.0);
        assert!(matches!(cn_exit(&h, ChannelKind::Awgn, 0.5), Err(Error::UnsupportedAwgnGeneralized)));
    }

    #[test]
    fn exit_functions_stay_in_unit_interval() {
        let chans = [
            ChannelParameter::bec(0.0).unwrap(),
            ChannelParameter::bec(0.7).unwrap(),
            ChannelParameter::bec(1.0).unwrap(),
            ChannelParameter::awgn(-2.0, 0.5).unwrap(),
            ChannelParameter::awgn(4.0, 0.9).unwrap(),
        ];
        let codes: Vec<_> = [CodeKind::Spc(3), CodeKind::Spc(9), CodeKind::Hamming(4)]
            .into_iter()
            .map(|k| ComponentCodeSpec::get(k).unwrap())
            .collect();
        for k in 0..=40 {
            let x = k as f64 / 40.0;
            for ch in &chans {
                for d in [2, 3, 10, 30] {
                    let y = vn_exit_with(d, ch, x, Evaluation::Tabulated);
                    assert!((0.0..=1.0).contains(&y));
                }
            }
            for c in &codes {
                for kind in [ChannelKind::Bec, ChannelKind::Awgn] {
                    if let Ok(y) = cn_exit_with(c, kind, x, Evaluation::Tabulated) {
                        assert!((0.0..=1.0).contains(&y));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_iterations_gives_empty_trajectory() {
        let t = run_trajectory(&regular(3, 6), &ChannelParameter::bec(0.3).unwrap(), 0).unwrap();
        assert!(t.records.is_empty());
        assert_eq!(t.achieved, None);
    }

    #[test]
    fn regular_above_threshold_stalls_at_de_fixed_point() {
        let eps = 0.5;
        let t = run_trajectory(&regular(3, 6), &ChannelParameter::bec(eps).unwrap(), 2000).unwrap();
        // erasure DE oracle: x <- ε (1 - (1 - x)^5)^2 from x = ε
        let mut x = eps;
        for _ in 0..1999 {
            x = eps * (1.0 - (1.0 - x).powi(5)).powi(2);
        }
        let last = t.final_i_ev().unwrap();
        assert!(last < 0.9);
        assert!((last - (1.0 - x)).abs() < 1e-9);
    }

    #[test]
    fn bec_trajectory_is_monotone() {
        let t = run_trajectory(&ensemble_c(), &ChannelParameter::bec(0.47).unwrap(), 200).unwrap();
        for w in t.records.windows(2) {
            assert!(w[1].i_ev >= w[0].i_ev - 1e-15);
            assert!(w[1].i_ec >= w[0].i_ec - 1e-15);
        }
        let c = run_trajectory(&ensemble_c(), &ChannelParameter::bec(0.485).unwrap(), 200).unwrap();
        assert!(c.final_i_ev().unwrap() >= 0.99);
    }

    #[test]
    fn final_output_is_monotone_in_channel() {
        let curves = ExitCurves::new(&ensemble_b(), Evaluation::Tabulated);
        let mut prev = f64::INFINITY;
        for k in 0..=50 {
            let eps = k as f64 / 50.0;
            let v = curves
                .final_output(&ChannelParameter::bec(eps).unwrap(), 10, OutputMeasure::LastVnUpdate)
                .unwrap();
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        let curves = ExitCurves::new(&ensemble_e(), Evaluation::Tabulated);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=24 {
            let db = -2.0 + k as f64 * 0.5;
            let v = curves
                .final_output(&ChannelParameter::awgn(db, 0.5).unwrap(), 10, OutputMeasure::AfterLastCnUpdate)
                .unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn published_bec_thresholds() {
        let b = iteration_constrained_threshold(&ThresholdQuery::new(ensemble_b(), ChannelKind::Bec, 10)).unwrap();
        assert!((b.value() - 0.365436).abs() < 1e-5, "{b:?}");
        let a = iteration_constrained_threshold(&ThresholdQuery::new(ensemble_a(), ChannelKind::Bec, 10)).unwrap();
        assert!((a.value() - 0.390459).abs() < 1e-5, "{a:?}");
    }

    #[test]
    fn threshold_errors() {
        let q = ThresholdQuery::new(ensemble_a(), ChannelKind::Awgn, 10);
        assert!(matches!(iteration_constrained_threshold(&q), Err(Error::UnsupportedAwgnGeneralized)));
        let q = ThresholdQuery::new(regular(3, 6), ChannelKind::Bec, 10).with_xi(1.0);
        assert!(iteration_constrained_threshold(&q).is_err());
        // one iteration of a degree-2 heavy ensemble cannot reach ξ on the AWGN bracket
        let q = ThresholdQuery::new(ensemble_d(), ChannelKind::Awgn, 1).with_xi(0.999999);
        assert!(matches!(iteration_constrained_threshold(&q), Err(Error::UnsatisfiableBracket)));
    }
}
