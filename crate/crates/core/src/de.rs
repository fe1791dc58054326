//! Differential evolution over rate-constrained degree-distribution vectors.
//!
//! A design vector concatenates the `λ` fractions over the allowed
//! variable-node degrees and the `ρ` fractions over the allowed check-node
//! codes. Trial vectors are built with the classic `rand/1/bin` scheme and
//! then repaired: three designated entries are solved for so that both
//! distributions sum to one and the design rate hits its target. Trials with
//! entries outside `[0,1]` after repair are discarded and regenerated.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::component::{CodeKind, ComponentCodeSpec};
use crate::ensemble::{CheckDistribution, DegreeDistributionPair, VariableDistribution};
use crate::error::{Error, Result};
use crate::exit::{threshold_with, ChannelKind, ChannelParameter, Evaluation, ExitCurves, OutputMeasure, AWGN_BRACKET_DB, DEFAULT_XI};

/// Constraint tolerance on sums and rate after repair.
pub const CONSTRAINT_TOL: f64 = 1e-6;

/// Concatenated `λ` and `ρ` fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector {
    pub values: Vec<f64>,
}

/// Optimizer settings.
#[derive(Debug, Clone)]
pub struct DeConfig {
    pub population: usize,
    pub f: f64,
    pub eta: f64,
    pub rate: f64,
    pub i_max: usize,
    pub xi: f64,
    pub channel: ChannelKind,
    pub output: OutputMeasure,
    pub vn_degrees: Vec<usize>,
    pub cn_codes: Vec<CodeKind>,
    pub max_generations: usize,
    pub stall_generations: usize,
    pub min_improvement: f64,
    pub retry_cap: usize,
    pub threshold_tol: f64,
    pub seed: u64,
}

impl DeConfig {
    /// Defaults: `F = 0.5`, `η = 0.8`, 500 generations, stop after 50
    /// generations without a `1e-4` improvement, 20 regenerations per member.
    pub fn new(channel: ChannelKind, rate: f64, i_max: usize, vn_degrees: Vec<usize>, cn_codes: Vec<CodeKind>) -> Self {
        Self {
            population: 70,
            f: 0.5,
            eta: 0.8,
            rate,
            i_max,
            xi: DEFAULT_XI,
            channel,
            output: OutputMeasure::default_for(channel),
            vn_degrees,
            cn_codes,
            max_generations: 500,
            stall_generations: 50,
            min_improvement: 1e-4,
            retry_cap: 20,
            threshold_tol: match channel {
                ChannelKind::Bec => 1e-6,
                ChannelKind::Awgn => 1e-3,
            },
            seed: 0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.vn_degrees.len() + self.cn_codes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 5 {
            return Err(Error::InvalidConfig(format!(
                "population size {} < 5; mutation needs the member plus three distinct others",
                self.population
            )));
        }
        if !(self.f >= 0.0 && self.f.is_finite()) {
            return Err(Error::InvalidConfig(format!("mutation weight F = {} must be >= 0", self.f)));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidConfig(format!("crossover rate {} outside [0,1]", self.eta)));
        }
        if !(self.rate > 0.0 && self.rate < 1.0) {
            return Err(Error::InvalidConfig(format!("target rate {} outside (0,1)", self.rate)));
        }
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(Error::InvalidConfig(format!("xi {} outside (0,1)", self.xi)));
        }
        if self.i_max == 0 {
            return Err(Error::InvalidConfig("i_max must be at least 1".into()));
        }
        if self.vn_degrees.is_empty() || self.cn_codes.is_empty() {
            return Err(Error::InfeasibleSupport("empty degree or code support".into()));
        }
        let mut d = self.vn_degrees.clone();
        d.sort_unstable();
        d.dedup();
        if d.len() != self.vn_degrees.len() || d[0] < 2 {
            return Err(Error::InvalidConfig("variable degrees must be distinct and >= 2".into()));
        }
        if self.channel == ChannelKind::Awgn && self.cn_codes.iter().any(|k| !k.is_spc()) {
            return Err(Error::UnsupportedAwgnGeneralized);
        }
        Ok(())
    }

    fn split<'a>(&self, v: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        v.split_at(self.vn_degrees.len())
    }

    /// Builds the ensemble described by a (repaired) design vector.
    pub fn to_ddp(&self, x: &DesignVector) -> Result<DegreeDistributionPair> {
        let (l, r) = self.split(&x.values);
        let lambda = VariableDistribution::new(self.vn_degrees.iter().copied().zip(l.iter().copied()))?;
        let rho = CheckDistribution::new(self.cn_codes.iter().copied().zip(r.iter().copied()))?;
        Ok(DegreeDistributionPair::new(lambda, rho))
    }

    fn code_redundancy(&self, k: CodeKind) -> f64 {
        1.0 - k.dimension() as f64 / k.length() as f64
    }

    /// Residuals of the three equality constraints.
    pub fn residuals(&self, v: &[f64]) -> [f64; 3] {
        let (l, r) = self.split(v);
        let sum_l: f64 = l.iter().sum();
        let sum_r: f64 = r.iter().sum();
        let int_l: f64 = l.iter().zip(&self.vn_degrees).map(|(f, &d)| f / d as f64).sum();
        let red: f64 = r.iter().zip(&self.cn_codes).map(|(f, &k)| f * self.code_redundancy(k)).sum();
        [sum_l - 1.0, sum_r - 1.0, red - (1.0 - self.rate) * int_l]
    }

    pub fn is_feasible(&self, x: &DesignVector) -> bool {
        x.values.len() == self.dimension()
            && x.values.iter().all(|&v| (0.0..=1.0).contains(&v))
            && self.residuals(&x.values).iter().all(|r| r.abs() <= CONSTRAINT_TOL)
    }
}

/// `v = x_r1 + F (x_r2 - x_r3)`.
pub fn mutant(x1: &DesignVector, x2: &DesignVector, x3: &DesignVector, f: f64) -> Vec<f64> {
    x1.values.iter().zip(&x2.values).zip(&x3.values).map(|((a, b), c)| a + f * (b - c)).collect()
}

/// Binomial crossover: coordinate `j` comes from `v` when `X[j] <= η` or
/// `j` is the forced index `Y`.
pub fn crossover<R: Rng + ?Sized>(x: &[f64], v: &[f64], eta: f64, rng: &mut R) -> Vec<f64> {
    assert_eq!(x.len(), v.len());
    let forced = rng.gen_range(0..x.len());
    x.iter()
        .zip(v)
        .enumerate()
        .map(|(j, (&xj, &vj))| {
            let draw: f64 = rng.gen();
            if draw <= eta || j == forced {
                vj
            } else {
                xj
            }
        })
        .collect()
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn solve3(mut a: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let p = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, p);
        for r in 0..3 {
            if r != col {
                let k = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= k * a[col][c];
                }
            }
        }
    }
    Some([a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]])
}

/// Adjusts three designated entries so the vector satisfies both sum
/// constraints and the rate equation. Returns `None` when the linear system
/// is singular or any entry ends up outside `[0,1]`.
///
/// The designated entries are the largest `λ` entry, the `λ` entry of the
/// smallest other allowed degree, and the largest `ρ` entry. With a single
/// allowed degree the second-largest `ρ` entry replaces the second `λ` entry.
pub fn repair(raw: &[f64], config: &DeConfig) -> Option<DesignVector> {
    let nv = config.vn_degrees.len();
    let nc = config.cn_codes.len();
    if raw.len() != nv + nc || raw.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let mut v = raw.to_vec();
    let [r_l, r_r, r_rate] = config.residuals(&v);
    let one_minus_r = 1.0 - config.rate;
    // Coefficients of each entry in the three constraints.
    let coeff = |idx: usize| -> [f64; 3] {
        if idx < nv {
            [1.0, 0.0, -one_minus_r / config.vn_degrees[idx] as f64]
        } else {
            [0.0, 1.0, config.code_redundancy(config.cn_codes[idx - nv])]
        }
    };
    let (l, r) = v.split_at(nv);
    let a = argmax(l);
    let b = nv + argmax(r);
    let unknowns: Vec<usize> = if nv >= 2 {
        let c = (0..nv)
            .filter(|&i| i != a)
            .min_by_key(|&i| config.vn_degrees[i])
            .expect("at least two degrees");
        vec![a, c, b]
    } else if nc >= 2 {
        let mut order: Vec<usize> = (0..nc).collect();
        order.sort_by(|&i, &j| r[j].total_cmp(&r[i]).then(i.cmp(&j)));
        vec![a, b, nv + order[1]]
    } else {
        // Both supports are single entries: the vector is fully determined.
        v[0] = 1.0;
        v[1] = 1.0;
        let x = DesignVector { values: v };
        return config.is_feasible(&x).then_some(x);
    };
    let mut m = [[0.0; 4]; 3];
    let rhs = [-r_l, -r_r, -r_rate];
    for (col, &idx) in unknowns.iter().enumerate() {
        let c = coeff(idx);
        for row in 0..3 {
            m[row][col] = c[row];
        }
    }
    for row in 0..3 {
        m[row][3] = rhs[row];
    }
    let delta = solve3(m)?;
    for (k, &idx) in unknowns.iter().enumerate() {
        v[idx] += delta[k];
    }
    for x in v.iter_mut() {
        if x.abs() < 1e-13 {
            *x = 0.0;
        }
        if (*x - 1.0).abs() < 1e-13 {
            *x = 1.0;
        }
    }
    let x = DesignVector { values: v };
    config.is_feasible(&x).then_some(x)
}

/// Flat Dirichlet sample on a random face of the simplex.
fn sample_simplex<R: Rng + ?Sized>(len: usize, max_support: usize, rng: &mut R) -> Vec<f64> {
    let k = rng.gen_range(1..=len.min(max_support));
    let idx = sample(rng, len, k);
    let mut out = vec![0.0; len];
    let mut total = 0.0;
    for i in idx.iter() {
        let e: f64 = Exp1.sample(rng);
        out[i] = e;
        total += e;
    }
    out.iter_mut().for_each(|x| *x /= total);
    out
}

const POPULATION_RETRIES: usize = 100_000;
/// Largest number of nonzero entries drawn per distribution in the initial
/// population.
const INITIAL_SUPPORT: usize = 6;

fn member_rng(seed: u64, generation: u64, member: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((generation << 32) | member);
    rng
}

/// Samples `N_p` feasible design vectors.
pub fn random_population(config: &DeConfig) -> Result<Vec<DesignVector>> {
    config.validate()?;
    let nv = config.vn_degrees.len();
    let nc = config.cn_codes.len();
    (0..config.population)
        .map(|i| {
            let mut rng = member_rng(config.seed, u32::MAX as u64, i as u64);
            for _ in 0..POPULATION_RETRIES {
                let mut raw = sample_simplex(nv, INITIAL_SUPPORT, &mut rng);
                raw.extend(sample_simplex(nc, INITIAL_SUPPORT, &mut rng));
                if let Some(x) = repair(&raw, config) {
                    return Ok(x);
                }
            }
            Err(Error::InfeasibleSupport(format!(
                "no rate-{} vector found after {POPULATION_RETRIES} draws",
                config.rate
            )))
        })
        .collect()
}

/// Threshold of a member as a ChannelParameter, plus a score where larger
/// is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub threshold: Option<ChannelParameter>,
    pub score: f64,
}

/// Iteration-constrained threshold of a design vector.
pub fn fitness(config: &DeConfig, x: &DesignVector) -> Result<Fitness> {
    let ddp = config.to_ddp(x)?;
    let curves = ExitCurves::new(&ddp, Evaluation::Tabulated);
    let t = threshold_with(&curves, config.channel, config.rate, config.i_max, config.xi, config.threshold_tol, config.output);
    Ok(match (t, config.channel) {
        (Ok(p), ChannelKind::Bec) => Fitness { threshold: Some(p), score: p.value() },
        (Ok(p), ChannelKind::Awgn) => Fitness { threshold: Some(p), score: -p.value() },
        (Err(Error::UnsatisfiableBracket), ChannelKind::Bec) => Fitness { threshold: None, score: 0.0 },
        (Err(Error::UnsatisfiableBracket), ChannelKind::Awgn) => Fitness { threshold: None, score: -AWGN_BRACKET_DB.1 },
        (Err(e), _) => return Err(e),
    })
}

/// Channel parameter value corresponding to a score.
pub fn score_to_value(kind: ChannelKind, score: f64) -> f64 {
    match kind {
        ChannelKind::Bec => score,
        ChannelKind::Awgn => -score,
    }
}

/// Per-generation progress.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationReport {
    pub generation: usize,
    /// Best threshold in the population (`ε` or dB).
    pub best: f64,
    pub best_score: f64,
    pub accepted_trials: usize,
    pub rejected_members: usize,
}

/// Result of a run.
#[derive(Debug, Clone)]
pub struct DeOutcome {
    pub best: DesignVector,
    pub ddp: DegreeDistributionPair,
    pub threshold: f64,
    pub history: Vec<GenerationReport>,
    pub population: Vec<DesignVector>,
}

fn evaluate_all(config: &DeConfig, pop: &[DesignVector]) -> Result<Vec<f64>> {
    pop.par_iter().map(|x| fitness(config, x).map(|f| f.score)).collect()
}

fn make_trial(config: &DeConfig, pop: &[DesignVector], i: usize, rng: &mut ChaCha8Rng) -> Option<DesignVector> {
    let n = pop.len();
    for _ in 0..config.retry_cap {
        let mut picks = sample(rng, n - 1, 3).into_vec();
        for p in picks.iter_mut() {
            if *p >= i {
                *p += 1;
            }
        }
        let v = mutant(&pop[picks[0]], &pop[picks[1]], &pop[picks[2]], config.f);
        let u = crossover(&pop[i].values, &v, config.eta, rng);
        if let Some(x) = repair(&u, config) {
            return Some(x);
        }
    }
    None
}

/// Runs the optimizer; `progress` is called once per generation, starting
/// with generation 0 (the initial population).
pub fn evolve(config: &DeConfig, progress: &mut dyn FnMut(&GenerationReport)) -> Result<DeOutcome> {
    config.validate()?;
    let mut pop = random_population(config)?;
    let mut scores = evaluate_all(config, &pop)?;
    let mut history = Vec::new();
    let report = |generation: usize, scores: &[f64], accepted: usize, rejected: usize| {
        let b = argmax(scores);
        GenerationReport {
            generation,
            best: score_to_value(config.channel, scores[b]),
            best_score: scores[b],
            accepted_trials: accepted,
            rejected_members: rejected,
        }
    };
    let r0 = report(0, &scores, 0, 0);
    progress(&r0);
    history.push(r0);
    let mut reference = scores[argmax(&scores)];
    let mut stall = 0;
    for generation in 1..=config.max_generations {
        let trials: Vec<Option<DesignVector>> = (0..pop.len())
            .into_par_iter()
            .map(|i| {
                let mut rng = member_rng(config.seed, generation as u64, i as u64);
                make_trial(config, &pop, i, &mut rng)
            })
            .collect();
        let trial_scores: Vec<Option<f64>> = trials
            .par_iter()
            .map(|t| t.as_ref().map(|x| fitness(config, x).map(|f| f.score)).transpose())
            .collect::<Result<_>>()?;
        let mut accepted = 0;
        let mut rejected = 0;
        for (i, (trial, score)) in trials.into_iter().zip(trial_scores).enumerate() {
            match (trial, score) {
                (Some(t), Some(s)) if s > scores[i] => {
                    pop[i] = t;
                    scores[i] = s;
                    accepted += 1;
                }
                (None, _) => rejected += 1,
                _ => {}
            }
        }
        let r = report(generation, &scores, accepted, rejected);
        progress(&r);
        let best = r.best_score;
        history.push(r);
        if best - reference >= config.min_improvement {
            reference = best;
            stall = 0;
        } else {
            stall += 1;
            if stall >= config.stall_generations {
                break;
            }
        }
    }
    let b = argmax(&scores);
    Ok(DeOutcome {
        ddp: config.to_ddp(&pop[b])?,
        best: pop[b].clone(),
        threshold: score_to_value(config.channel, scores[b]),
        history,
        population: pop,
    })
}

/// Looks up the component codes so configuration errors surface early.
pub fn parse_code_support(ids: &[String]) -> Result<Vec<CodeKind>> {
    ids.iter()
        .map(|s| {
            let k: CodeKind = s.parse()?;
            ComponentCodeSpec::get(k)?;
            Ok(k)
        })
        .collect()
}
