//! Generation pipelines and the statistics collectors behind the
//! experiment tables.
//!
//! [`Pipeline::sample_rdpda`] composes structure sampling, final states and
//! decoration. The rejection samplers on top of it keep uniformity on the
//! conditioned subset since they only discard draws.

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::alphabet::Alphabets;
use crate::counting::Lambda;
use crate::decorator::{decorate, decorate_min_pops};
use crate::dfa_sampler::{attach_finals, sample_accessible_dfa, RecursiveDfaSampler, SamplerReport};
use crate::error::{invalid, Error, Result};
use crate::rdpda::{AcceptanceMode, Rdpda};
use crate::reachability::analyze;
use crate::rng::stream_rng;

pub const DEFAULT_MAX_REJECTS: u64 = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputSize {
    /// `m = λ·ρ·n`, which must be an integer.
    Lambda(Lambda),
    Explicit(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DfaStrategy {
    /// Uniform labelled draws, rejecting inaccessible ones.
    #[default]
    Rejection,
    /// Exact recursive sampling from a precomputed count table.
    Recursive,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n: usize,
    pub alphabets: Arc<Alphabets>,
    pub size: OutputSize,
    pub mode: AcceptanceMode,
    /// Fraction of transitions forced to pop, `k = ⌈fraction·s⌉`.
    pub min_pop_fraction: Option<Ratio<u64>>,
    pub max_rejects: u64,
    pub seed: u64,
    pub dfa_strategy: DfaStrategy,
    /// Test hook: make every state final instead of drawing `F`.
    pub force_all_final: bool,
}

impl PipelineConfig {
    pub fn new(n: usize, alphabets: impl Into<Arc<Alphabets>>, size: OutputSize) -> Self {
        Self {
            n,
            alphabets: alphabets.into(),
            size,
            mode: AcceptanceMode::FinalState,
            min_pop_fraction: None,
            max_rejects: DEFAULT_MAX_REJECTS,
            seed: 0,
            dfa_strategy: DfaStrategy::default(),
            force_all_final: false,
        }
    }

    pub fn with_lambda(n: usize, alpha: usize, beta: usize, lambda: Lambda) -> Result<Self> {
        Ok(Self::new(
            n,
            Alphabets::generic(alpha, beta)?,
            OutputSize::Lambda(lambda),
        ))
    }

    /// s = ρ·n.
    pub fn transition_count(&self) -> usize {
        self.alphabets.rho() * self.n
    }

    pub fn output_size(&self) -> Result<usize> {
        match self.size {
            OutputSize::Explicit(m) => Ok(m),
            OutputSize::Lambda(l) => {
                if *l.numer() == 0 {
                    return Err(invalid("lambda must be positive"));
                }
                let m = l * Ratio::from_integer(self.transition_count() as u64);
                if m.is_integer() {
                    Ok(m.to_integer() as usize)
                } else {
                    Err(invalid(format!(
                        "m = lambda*rho*n = {m} is not an integer (lambda={l}, rho={}, n={})",
                        self.alphabets.rho(),
                        self.n
                    )))
                }
            }
        }
    }

    pub fn forced_pops(&self) -> usize {
        match self.min_pop_fraction {
            None => 0,
            Some(f) => (f * Ratio::from_integer(self.transition_count() as u64))
                .ceil()
                .to_integer() as usize,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be positive"));
        }
        if self.alphabets.rho() < 2 {
            return Err(Error::Unsupported(
                "accessible structure sampling needs alpha*beta >= 2".into(),
            ));
        }
        if self.max_rejects == 0 {
            return Err(invalid("max_rejects must be positive"));
        }
        let m = self.output_size()?;
        if let Some(f) = self.min_pop_fraction {
            if f > Ratio::from_integer(1) {
                return Err(invalid("min_pop_fraction must lie in [0, 1]"));
            }
            if self.forced_pops() == self.transition_count() && m > 0 {
                return Err(invalid("every transition forced to pop but m > 0"));
            }
        }
        Ok(())
    }
}

/// A validated configuration with its derived quantities.
#[derive(Clone, Debug)]
pub struct Pipeline {
    cfg: PipelineConfig,
    m: usize,
    forced_pops: usize,
    recursive: Option<RecursiveDfaSampler>,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        let m = cfg.output_size()?;
        let forced_pops = cfg.forced_pops();
        let recursive = match cfg.dfa_strategy {
            DfaStrategy::Rejection => None,
            DfaStrategy::Recursive => {
                Some(RecursiveDfaSampler::new(cfg.n, Arc::clone(&cfg.alphabets))?)
            }
        };
        Ok(Self {
            cfg,
            m,
            forced_pops,
            recursive,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn output_size(&self) -> usize {
        self.m
    }

    /// Structure, final states, then decoration.
    pub fn sample_rdpda<R: Rng + ?Sized>(&self, rng: &mut R) -> Rdpda {
        let dfa = match &self.recursive {
            Some(s) => s.sample(rng),
            None => {
                sample_accessible_dfa(self.cfg.n, Arc::clone(&self.cfg.alphabets), rng)
                    .expect("validated configuration")
                    .0
            }
        };
        let dfa = if self.cfg.force_all_final {
            dfa.with_finals(vec![true; self.cfg.n]).unwrap()
        } else {
            attach_finals(&dfa, rng)
        };
        let result = if self.cfg.min_pop_fraction.is_some() {
            decorate_min_pops(&dfa, self.m, self.forced_pops, rng)
        } else {
            decorate(&dfa, self.m, rng)
        };
        result.expect("validated configuration")
    }

    fn reject_until<R, F>(&self, rng: &mut R, accept: F) -> Result<(Rdpda, SamplerReport)>
    where
        R: Rng + ?Sized,
        F: Fn(&Rdpda) -> bool,
    {
        let mut report = SamplerReport::default();
        loop {
            let a = self.sample_rdpda(rng);
            if accept(&a) {
                return Ok((a, report));
            }
            report.rejects += 1;
            if report.rejects >= self.cfg.max_rejects {
                return Err(Error::GaveUp(report));
            }
        }
    }

    /// Rejection until the language under `cfg.mode` is non-empty.
    pub fn sample_nonempty<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Rdpda, SamplerReport)> {
        let mode = self.cfg.mode;
        self.reject_until(rng, |a| !analyze(a).is_language_empty(a, mode))
    }

    /// Rejection until every state is reachable.
    pub fn sample_reachable<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Rdpda, SamplerReport)> {
        self.reject_until(rng, |a| analyze(a).reachable.iter().all(|&b| b))
    }
}

pub fn sample_rdpda<R: Rng + ?Sized>(cfg: &PipelineConfig, rng: &mut R) -> Result<Rdpda> {
    Ok(Pipeline::new(cfg.clone())?.sample_rdpda(rng))
}

pub fn sample_nonempty<R: Rng + ?Sized>(
    cfg: &PipelineConfig,
    rng: &mut R,
) -> Result<(Rdpda, SamplerReport)> {
    Pipeline::new(cfg.clone())?.sample_nonempty(rng)
}

pub fn sample_reachable<R: Rng + ?Sized>(
    cfg: &PipelineConfig,
    rng: &mut R,
) -> Result<(Rdpda, SamplerReport)> {
    Pipeline::new(cfg.clone())?.sample_reachable(rng)
}

/// Quantity aggregated per table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Reachable,
    EmptyStackReachable,
    /// Draws per reachable automaton (rejects + 1), give-ups counted apart.
    Rejects,
    NonemptyFraction,
    PopCount,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Reachable => "reachable",
            Metric::EmptyStackReachable => "empty-stack-reachable",
            Metric::Rejects => "rejects",
            Metric::NonemptyFraction => "nonempty-fraction",
            Metric::PopCount => "pop-count",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "reachable" => Metric::Reachable,
            "empty-stack-reachable" => Metric::EmptyStackReachable,
            "rejects" | "generations" => Metric::Rejects,
            "nonempty-fraction" => Metric::NonemptyFraction,
            "pop-count" => Metric::PopCount,
            other => return Err(invalid(format!("unknown metric '{other}'"))),
        })
    }
}

/// Running mean and variance (Welford).
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    /// Standard error of the mean from the sample variance.
    pub fn std_err(&self) -> f64 {
        match self.count {
            0 => f64::NAN,
            1 => 0.0,
            n => (self.m2 / (n - 1) as f64 / n as f64).sqrt(),
        }
    }
}

fn lambda_as_f64<S: Serializer>(l: &Lambda, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(*l.numer() as f64 / *l.denom() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellStats {
    #[serde(serialize_with = "lambda_as_f64")]
    pub lambda: Lambda,
    pub n: usize,
    pub m: Option<usize>,
    /// Samples contributing to the mean.
    pub samples: usize,
    pub mean: f64,
    pub std_err: f64,
    /// Rejection runs that hit `max_rejects` (only for [`Metric::Rejects`]).
    pub gave_up: usize,
    /// Set when the cell could not be run, e.g. non-integral `m`.
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableStats {
    pub metric: Metric,
    pub alpha: usize,
    pub beta: usize,
    pub min_pop_fraction: Option<f64>,
    pub ns: Vec<usize>,
    /// One row per λ, one column per `n`.
    pub rows: Vec<Vec<CellStats>>,
}

pub fn format_lambda(l: Lambda) -> String {
    format!("{}", *l.numer() as f64 / *l.denom() as f64)
}

impl TableStats {
    pub fn cell(&self, lambda: Lambda, n: usize) -> Option<&CellStats> {
        self.rows.iter().flatten().find(|c| c.lambda == lambda && c.n == n)
    }

    /// One row per λ, one column per `n`; cells are `mean±stderr` with two
    /// decimals, `-` when no sample succeeded and `skipped` for cells whose
    /// `m` is not integral.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("lambda\\n");
        for n in &self.ns {
            write!(out, "\t{n}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format_lambda(row[0].lambda));
            for c in row {
                out.push('\t');
                if c.skipped.is_some() {
                    out.push_str("skipped");
                } else if c.samples == 0 {
                    out.push('-');
                } else {
                    write!(out, "{:.2}±{:.2}", c.mean, c.std_err).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

fn run_cell(
    metric: Metric,
    cfg: PipelineConfig,
    samples: usize,
    stream: u64,
) -> Result<CellStats, String> {
    let lambda = match cfg.size {
        OutputSize::Lambda(l) => l,
        OutputSize::Explicit(_) => unreachable!("cells are built from lambda"),
    };
    let n = cfg.n;
    let pipeline = Pipeline::new(cfg.clone()).map_err(|e| e.to_string())?;
    let mut rng = stream_rng(cfg.seed, stream);
    let mut acc = Accumulator::default();
    let mut gave_up = 0;
    for _ in 0..samples {
        match metric {
            Metric::Rejects => match pipeline.sample_reachable(&mut rng) {
                Ok((_, report)) => acc.push(report.generations() as f64),
                Err(Error::GaveUp(_)) => gave_up += 1,
                Err(e) => return Err(e.to_string()),
            },
            _ => {
                let a = pipeline.sample_rdpda(&mut rng);
                let x = match metric {
                    Metric::PopCount => a.pop_count() as f64,
                    Metric::Reachable => analyze(&a).reachable_count() as f64,
                    Metric::EmptyStackReachable => analyze(&a).empty_stack_count() as f64,
                    Metric::NonemptyFraction => {
                        let empty = analyze(&a).is_language_empty(&a, cfg.mode);
                        (!empty) as u8 as f64
                    }
                    Metric::Rejects => unreachable!(),
                };
                acc.push(x);
            }
        }
    }
    Ok(CellStats {
        lambda,
        n,
        m: Some(pipeline.output_size()),
        samples: acc.count(),
        mean: acc.mean(),
        std_err: acc.std_err(),
        gave_up,
        skipped: None,
    })
}

/// Runs `samples_per_cell` draws for every `(λ, n)` cell, in parallel, each
/// cell on its own random stream derived from `defaults.seed` and the cell
/// position. `defaults` supplies alphabets, mode, forced pops and
/// `max_rejects`; its `n` and size are overridden per cell.
pub fn collect_table(
    metric: Metric,
    lambdas: &[Lambda],
    ns: &[usize],
    samples_per_cell: usize,
    defaults: &PipelineConfig,
) -> TableStats {
    let jobs: Vec<(usize, usize)> = (0..lambdas.len())
        .flat_map(|i| (0..ns.len()).map(move |j| (i, j)))
        .collect();
    let cells: Vec<CellStats> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let mut cfg = defaults.clone();
            cfg.n = ns[j];
            cfg.size = OutputSize::Lambda(lambdas[i]);
            let stream = (i * ns.len() + j) as u64;
            let m = cfg.output_size().ok();
            run_cell(metric, cfg, samples_per_cell, stream).unwrap_or_else(|reason| CellStats {
                lambda: lambdas[i],
                n: ns[j],
                m,
                samples: 0,
                mean: f64::NAN,
                std_err: f64::NAN,
                gave_up: 0,
                skipped: Some(reason),
            })
        })
        .collect();
    let mut rows: Vec<Vec<CellStats>> = Vec::with_capacity(lambdas.len());
    let mut it = cells.into_iter();
    for _ in lambdas {
        rows.push(it.by_ref().take(ns.len()).collect());
    }
    TableStats {
        metric,
        alpha: defaults.alphabets.alpha(),
        beta: defaults.alphabets.beta(),
        min_pop_fraction: defaults
            .min_pop_fraction
            .map(|f| *f.numer() as f64 / *f.denom() as f64),
        ns: ns.to_vec(),
        rows,
    }
}

/// Parses `"1.5"`, `"3/2"` or `"2"` into an exact rational.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let text = text.trim();
    let bad = || invalid(format!("'{text}' is not a nonnegative rational"));
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 9 {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Ratio::new(int * den + frac, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("1.5").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_ratio("0.5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_ratio("2").unwrap(), Ratio::from_integer(2));
        assert_eq!(parse_ratio("3/4").unwrap(), Ratio::new(3, 4));
        assert_eq!(parse_ratio(".4").unwrap(), Ratio::new(2, 5));
        for bad in ["", "x", "1/0", "-1", "1.2.3", "."] {
            assert!(parse_ratio(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn output_size_integrality() {
        let cfg = PipelineConfig::with_lambda(5, 2, 2, Ratio::new(1, 2)).unwrap();
        assert_eq!(cfg.output_size().unwrap(), 10);
        let cfg = PipelineConfig::with_lambda(5, 2, 2, Ratio::new(1, 3)).unwrap();
        assert!(cfg.output_size().is_err());
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn forced_pop_count_rounds_up() {
        let mut cfg = PipelineConfig::with_lambda(10, 2, 2, Ratio::from_integer(1)).unwrap();
        cfg.min_pop_fraction = Some(Ratio::new(2, 5));
        assert_eq!(cfg.forced_pops(), 16);
        cfg.n = 3;
        assert_eq!(cfg.forced_pops(), 5);
        cfg.min_pop_fraction = Some(Ratio::new(3, 2));
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn single_state_pipeline() {
        let mut cfg = PipelineConfig::new(1, Alphabets::generic(2, 1).unwrap(), OutputSize::Explicit(0));
        cfg.seed = 3;
        let mut rng = stream_rng(3, 0);
        let a = sample_rdpda(&cfg, &mut rng).unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.pop_count(), 2);
        let (_, report) = sample_reachable(&cfg, &mut rng).unwrap();
        assert_eq!(report.rejects, 0);
    }

    #[test]
    fn all_final_makes_final_state_language_nonempty() {
        let mut cfg = PipelineConfig::with_lambda(6, 2, 2, Ratio::from_integer(2)).unwrap();
        cfg.force_all_final = true;
        cfg.max_rejects = 1;
        let mut rng = stream_rng(4, 0);
        for _ in 0..50 {
            let (_, report) = sample_nonempty(&cfg, &mut rng).unwrap();
            assert_eq!(report.rejects, 0);
        }
    }

    #[test]
    fn give_up_is_reported() {
        // Pop-free automata never empty their stack.
        let mut cfg = PipelineConfig::with_lambda(4, 2, 2, Ratio::from_integer(1)).unwrap();
        cfg.mode = AcceptanceMode::EmptyStack;
        cfg.max_rejects = 5;
        cfg.size = OutputSize::Explicit(1000);
        let pipeline = Pipeline::new(cfg).unwrap();
        let mut rng = stream_rng(5, 0);
        let mut gave_up = 0;
        for _ in 0..20 {
            match pipeline.sample_nonempty(&mut rng) {
                Err(Error::GaveUp(r)) => {
                    assert_eq!(r.rejects, 5);
                    gave_up += 1;
                }
                Ok((a, _)) => assert!(a.pop_count() > 0),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(gave_up > 0);
    }

    #[test]
    fn accumulator_statistics() {
        let mut acc = Accumulator::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            acc.push(x);
        }
        assert_eq!(acc.mean(), 2.5);
        let var = (2.25 + 0.25 + 0.25 + 2.25) / 3.0;
        assert!((acc.std_err() - (var / 4.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn table_layout_and_skips() {
        let defaults = PipelineConfig::with_lambda(1, 2, 2, Ratio::from_integer(1)).unwrap();
        let lambdas = [Ratio::new(1, 3), Ratio::from_integer(1)];
        let table = collect_table(Metric::PopCount, &lambdas, &[3, 4], 20, &defaults);
        assert_eq!(table.rows.len(), 2);
        assert!(table.rows.iter().all(|r| r.len() == 2));
        // λ=1/3: m = 4 for n=3, 16/3 for n=4
        assert!(table.rows[0][0].skipped.is_none());
        assert!(table.rows[0][1].skipped.is_some());
        let tsv = table.to_tsv();
        let lines: Vec<_> = tsv.lines().collect();
        assert_eq!(lines[0], "lambda\\n\t3\t4");
        assert!(lines[1].starts_with("0.3333333333333333\t"));
        assert!(lines[1].ends_with("\tskipped"));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn tables_are_reproducible() {
        let mut defaults = PipelineConfig::with_lambda(1, 2, 2, Ratio::from_integer(1)).unwrap();
        defaults.seed = 11;
        let l = [Ratio::from_integer(1), Ratio::from_integer(2)];
        let a = collect_table(Metric::Reachable, &l, &[4, 6], 30, &defaults);
        let b = collect_table(Metric::Reachable, &l, &[4, 6], 30, &defaults);
        assert_eq!(a, b);
    }
}
