//! The four subcommands. Each returns plain data; writing is left to the caller.

use serde::{Deserialize, Serialize};
use semimarkov_core::measures::{
    blp_measure, blp_measure_search, classify, default_horizon, parity_zeros, rhp_measure, Contribution,
    DivisibilityClass, Measure, MeasureValue,
};
use semimarkov_core::montecarlo::{
    chapman_kolmogorov_residual, estimate_conditional, estimate_parity, ChunkExecutor, RngStream,
};
use semimarkov_core::quantum::QubitState;
use semimarkov_core::renewal::{Family, WaitingTime};
use semimarkov_core::Error as CoreError;

use crate::config::RunConfig;
use crate::table::Table;
use crate::CliError;

/// Default number of time-grid points for table commands.
pub const DEFAULT_GRID: usize = 401;

/// Default number of grid points for the divisibility classification.
pub const DEFAULT_CLASSIFY_GRID: usize = 200;

// RNG streams for draws made by the commands themselves, far above the
// streams used by the estimators.
const STREAM_INITIAL_VALUES: u64 = 1 << 62;
const STREAM_PARITY_TIMES: u64 = (1 << 62) + 1;

fn table_horizon(cfg: &RunConfig) -> f64 {
    cfg.tmax.unwrap_or(5.0 * cfg.waiting.mean())
}

fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

/// Name of the relaxation column for jump probability `pi`.
fn relaxation_name(pi: f64) -> &'static str {
    if pi == 1.0 {
        "q"
    } else if pi == 0.5 {
        "g"
    } else {
        "m"
    }
}

/// Columns `t`, the relaxation function, and `w_1 .. w_k` for the given
/// initial values, or `count` uniform draws from the seed when none are given.
pub fn trajectories(cfg: &RunConfig, count: usize, w0: &[f64]) -> Result<Table, CliError> {
    let spec = cfg.classical()?;
    let initial: Vec<f64> = if w0.is_empty() {
        let mut rng = RngStream::new(cfg.seed, STREAM_INITIAL_VALUES);
        (0..count).map(|_| rng.uniform()).collect()
    } else {
        w0.to_vec()
    };
    let grid = time_grid(table_horizon(cfg), cfg.grid.unwrap_or(DEFAULT_GRID));
    let columns = initial
        .iter()
        .map(|&w| spec.trajectory(w, &grid))
        .collect::<Result<Vec<_>, _>>()?;

    let mut names = vec!["t".to_string(), relaxation_name(cfg.pi).to_string()];
    names.extend((1..=initial.len()).map(|k| format!("w_{k}")));
    let mut table = Table::new(names);
    for (i, &t) in grid.iter().enumerate() {
        let mut row = vec![Some(t), Some(spec.relaxation(t))];
        row.extend(columns.iter().map(|c| Some(c[i])));
        table.push(row);
    }
    Ok(table)
}

/// Columns `t, q, gamma, delta, gap`. A row with `gap = 1` and empty rates
/// is inserted at every zero of `q`, where both rates diverge.
pub fn rates(cfg: &RunConfig) -> Result<Table, CliError> {
    let w = &cfg.waiting;
    let t_max = table_horizon(cfg);
    let mut times: Vec<(f64, bool)> = time_grid(t_max, cfg.grid.unwrap_or(DEFAULT_GRID))
        .into_iter()
        .map(|t| (t, false))
        .collect();
    times.extend(parity_zeros(w, t_max).into_iter().map(|t| (t, true)));
    times.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut table = Table::new(["t", "q", "gamma", "delta", "gap"]);
    for (t, at_zero) in times {
        let rates = if at_zero {
            None
        } else {
            match (w.gamma_rate(t), w.delta_rate(t)) {
                (Ok(g), Ok(d)) => Some((g, d)),
                (Err(CoreError::Singularity { .. }), _) | (_, Err(CoreError::Singularity { .. })) => None,
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            }
        };
        let q = if at_zero { 0.0 } else { w.parity(t) };
        match rates {
            Some((g, d)) => table.push(vec![Some(t), Some(q), Some(g), Some(d), Some(0.0)]),
            None => table.push(vec![Some(t), Some(q), None, None, Some(1.0)]),
        }
    }
    Ok(table)
}

/// One term of a measure; `end` is `None` for the analytic tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub start: f64,
    pub end: Option<f64>,
    pub value: f64,
}

impl From<&Contribution> for Term {
    fn from(c: &Contribution) -> Self {
        Term {
            start: c.start,
            end: (!c.is_tail()).then_some(c.end),
            value: c.value,
        }
    }
}

/// A measure with an explicit `"finite"` / `"infinite"` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub tag: String,
    pub value: Option<f64>,
    pub witnesses: Vec<f64>,
    pub breakdown: Vec<Term>,
}

impl From<&MeasureValue> for MeasureReport {
    fn from(m: &MeasureValue) -> Self {
        let (tag, value) = match m.measure {
            Measure::Finite(v) => ("finite", Some(v)),
            Measure::Infinite => ("infinite", None),
        };
        MeasureReport {
            tag: tag.into(),
            value,
            witnesses: m.witnesses.clone(),
            breakdown: m.breakdown.iter().map(Term::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub value: f64,
    /// `(θ₁, φ₁, θ₂, φ₂)`
    pub angles: [f64; 4],
    pub pair: [[f64; 3]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuresReport {
    pub dist: String,
    pub rate1: f64,
    pub rate2: Option<f64>,
    pub weight: Option<f64>,
    pub model: String,
    pub t_max: f64,
    pub blp: MeasureReport,
    /// Bloch vectors of the maximizing pair.
    pub blp_pair: [[f64; 3]; 2],
    pub rhp: MeasureReport,
    pub class: String,
    pub not_positive: Option<[f64; 2]>,
    pub not_cp: Option<[f64; 2]>,
    pub search: Option<SearchReport>,
}

/// `(rate1, rate2, weight)` of a waiting-time law.
pub fn family_parameters(w: &WaitingTime) -> (f64, Option<f64>, Option<f64>) {
    match *w.family() {
        Family::Exponential { rate } | Family::ErlangTwo { rate } => (rate, None, None),
        Family::Hypoexponential { rate1, rate2 } => (rate1, Some(rate2), None),
        Family::Mixture { rate1, rate2, weight } => (rate1, Some(rate2), Some(weight)),
    }
}

fn bloch_pair(pair: &(QubitState, QubitState)) -> [[f64; 3]; 2] {
    [pair.0.bloch(), pair.1.bloch()]
}

pub fn measures<E: ChunkExecutor>(
    cfg: &RunConfig,
    search: Option<usize>,
    executor: &E,
) -> Result<MeasuresReport, CliError> {
    let model = cfg.quantum();
    let t_max = cfg.tmax.unwrap_or_else(|| default_horizon(&cfg.waiting));
    let blp = blp_measure(&model, t_max)?;
    let rhp = rhp_measure(&model, t_max)?;
    let class = classify(&model, t_max, cfg.grid.unwrap_or(DEFAULT_CLASSIFY_GRID))?;
    let (not_positive, not_cp) = match class {
        DivisibilityClass::CpDivisible => (None, None),
        DivisibilityClass::PDivisibleOnly { not_cp } => (None, Some(not_cp)),
        DivisibilityClass::Indivisible { not_positive, not_cp } => (Some(not_positive), Some(not_cp)),
    };
    let search = search
        .map(|density| -> Result<SearchReport, CliError> {
            let s = blp_measure_search(&model, t_max, density, executor)?;
            Ok(SearchReport {
                value: s.value,
                angles: s.angles,
                pair: bloch_pair(&s.pair),
            })
        })
        .transpose()?;
    let (rate1, rate2, weight) = family_parameters(&cfg.waiting);
    Ok(MeasuresReport {
        dist: cfg.dist_name().into(),
        rate1,
        rate2,
        weight,
        model: model.variant.name().into(),
        t_max,
        blp: MeasureReport::from(&blp.value),
        blp_pair: bloch_pair(&blp.pair),
        rhp: MeasureReport::from(&rhp),
        class: class.name().into(),
        not_positive: not_positive.map(|(s, t)| [s, t]),
        not_cp: not_cp.map(|(s, t)| [s, t]),
        search,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityCheck {
    pub t: f64,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub exact: f64,
    pub z: Option<f64>,
    pub status: String,
}

/// Outcome of a Markov-property test. `status` is `pass` or `fail` when the
/// process is Markovian, `violation` or `undetected` otherwise, and
/// `insufficient-samples` when the conditioning event was too rare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovCheck {
    pub times: [f64; 3],
    pub statistic: Option<f64>,
    pub std_error: Option<f64>,
    pub z: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub dist: String,
    pub rate1: f64,
    pub rate2: Option<f64>,
    pub weight: Option<f64>,
    pub pi: f64,
    pub seed: u64,
    pub samples: u64,
    pub sigma: f64,
    pub detect_sigma: f64,
    pub markov_expected: bool,
    pub parity: Vec<ParityCheck>,
    pub conditional: MarkovCheck,
    pub chapman_kolmogorov: MarkovCheck,
    pub passed: bool,
}

impl McReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .parity
            .iter()
            .filter(|p| p.status == "fail")
            .map(|p| format!("parity at t = {} (z = {:.2})", p.t, p.z.unwrap_or(f64::INFINITY)))
            .collect();
        for (name, c) in [("conditional", &self.conditional), ("chapman-kolmogorov", &self.chapman_kolmogorov)] {
            if c.status == "fail" {
                out.push(format!("{name} test (z = {:.2})", c.z.unwrap_or(f64::INFINITY)));
            }
        }
        out
    }
}

/// Seed for the `k`-th independent estimate of a run.
fn derived_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k + 1))
}

fn markov_check(
    times: [f64; 3],
    outcome: Result<(f64, f64, f64), CoreError>,
    markov_expected: bool,
    sigma: f64,
    detect_sigma: f64,
) -> Result<MarkovCheck, CliError> {
    match outcome {
        Ok((statistic, std_error, z)) => {
            let status = match (markov_expected, z.abs()) {
                (true, a) if a <= sigma => "pass",
                (true, _) => "fail",
                (false, a) if a > detect_sigma => "violation",
                (false, _) => "undetected",
            };
            Ok(MarkovCheck {
                times,
                statistic: Some(statistic),
                std_error: Some(std_error),
                z: z.is_finite().then_some(z),
                status: status.into(),
            })
        }
        Err(CoreError::InsufficientSamples { .. }) => Ok(MarkovCheck {
            times,
            statistic: None,
            std_error: None,
            z: None,
            status: "insufficient-samples".into(),
        }),
        Err(e) => Err(e.into()),
    }
}

/// Parity estimates at `points` random times in `(0, t_max]` (default: two
/// mean waiting times) and the conditional and Chapman-Kolmogorov Markov
/// tests at times `0, τ/2, τ` with `τ` the mean waiting time.
pub fn mc_verify<E: ChunkExecutor>(
    cfg: &RunConfig,
    sigma: f64,
    detect_sigma: f64,
    points: usize,
    executor: &E,
) -> Result<McReport, CliError> {
    if !(sigma > 0.0 && detect_sigma > 0.0) {
        return Err(CliError::Config("σ thresholds must be positive".into()));
    }
    let spec = cfg.classical()?;
    let w = cfg.waiting;
    let mean = w.mean();
    let t_max = cfg.tmax.unwrap_or(2.0 * mean);
    let n = cfg.samples;

    let mut rng = RngStream::new(cfg.seed, STREAM_PARITY_TIMES);
    let mut times: Vec<f64> = (0..points).map(|_| t_max * (1.0 - rng.uniform())).collect();
    times.sort_by(f64::total_cmp);
    let mut parity = Vec::with_capacity(points);
    for (k, &t) in times.iter().enumerate() {
        let exact = w.parity(t);
        let check = match estimate_parity(&spec, t, n, derived_seed(cfg.seed, k as u64), executor) {
            Ok(est) => {
                let z = if est.std_error > 0.0 {
                    (est.value - exact) / est.std_error
                } else if est.value == exact {
                    0.0
                } else {
                    f64::INFINITY
                };
                ParityCheck {
                    t,
                    estimate: Some(est.value),
                    std_error: Some(est.std_error),
                    exact,
                    z: z.is_finite().then_some(z),
                    status: if z.abs() <= sigma { "pass" } else { "fail" }.into(),
                }
            }
            Err(CoreError::InsufficientSamples { .. }) => ParityCheck {
                t,
                estimate: None,
                std_error: None,
                exact,
                z: None,
                status: "insufficient-samples".into(),
            },
            Err(e) => return Err(e.into()),
        };
        parity.push(check);
    }

    let markov_expected = matches!(w.family(), Family::Exponential { .. }) || cfg.pi == 0.0;
    let three = [0.0, 0.5 * mean, mean];
    let cond = estimate_conditional(&spec, three, [0, 0, 0], n, derived_seed(cfg.seed, 1000), executor)
        .map(|c| (c.difference(), c.three_point.std_error.hypot(c.two_point.std_error), c.z_score()));
    let conditional = markov_check(three, cond, markov_expected, sigma, detect_sigma)?;
    let ck = chapman_kolmogorov_residual(&spec, three[0], three[1], three[2], n, derived_seed(cfg.seed, 1001), executor)
        .map(|r| (r.residual, r.std_error, r.z_score()));
    let chapman_kolmogorov = markov_check(three, ck, markov_expected, sigma, detect_sigma)?;

    let (rate1, rate2, weight) = family_parameters(&w);
    let mut report = McReport {
        dist: cfg.dist_name().into(),
        rate1,
        rate2,
        weight,
        pi: cfg.pi,
        seed: cfg.seed,
        samples: n,
        sigma,
        detect_sigma,
        markov_expected,
        parity,
        conditional,
        chapman_kolmogorov,
        passed: true,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}
