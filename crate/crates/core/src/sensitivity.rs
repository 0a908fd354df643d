//! Parameter-space exploration around a scenario: one-at-a-time sweeps,
//! tornado rankings and seeded Monte Carlo.
//!
//! Parameters are addressed by dotted paths into [`CategoryScenario`]
//! (`crow.beta`, `prod_reg_years.stage3`, ...); see [`PARAMETER_PATHS`].
//!
//! Monte Carlo sample `i` draws from its own ChaCha8 stream: the generator
//! is seeded with the run seed and positioned on stream `i`, and one uniform
//! variate is taken per distribution in declaration order. Samples can
//! therefore be evaluated in any order or in parallel and the report is
//! unchanged.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{project, CategoryScenario, ChiSetting, ProjectionResult};
use crate::timeline::{Gating, Stage};

/// Every sweepable parameter path.
pub const PARAMETER_PATHS: [&str; 19] = [
    "n_objects",
    "cycle_time_s",
    "chi.stage2",
    "chi.stage3",
    "compute_env.current_capacity_log10",
    "compute_env.doubling_period_years",
    "crow.alpha",
    "crow.beta",
    "crow.severity",
    "crow_lambda_target",
    "poisson.confidence",
    "poisson.safety_factor",
    "poisson.lambda_target",
    "annual_miles",
    "gamma_override",
    "base_delta",
    "f",
    "prod_reg_years.stage2",
    "prod_reg_years.stage3",
];

/// Percentiles reported for Monte Carlo runs.
pub const PERCENTILES: [u8; 5] = [5, 25, 50, 75, 95];

fn unknown_path(path: &str) -> Error {
    Error::UnknownParameter {
        path: path.to_string(),
        valid: PARAMETER_PATHS.iter().map(|p| p.to_string()).collect(),
    }
}

fn is_integer_path(path: &str) -> bool {
    path == "n_objects"
}

/// Current value of a parameter.
pub fn get_parameter(scenario: &CategoryScenario, path: &str) -> Result<f64> {
    Ok(match path {
        "n_objects" => scenario.n_objects as f64,
        "cycle_time_s" => scenario.cycle_time_s,
        "chi.stage2" => scenario.chi_value(Stage::RevenueService)?,
        "chi.stage3" => scenario.chi_value(Stage::BroadCommercial)?,
        "compute_env.current_capacity_log10" => scenario.compute_env.current_capacity_log10,
        "compute_env.doubling_period_years" => scenario.compute_env.doubling_period_years,
        "crow.alpha" => scenario.crow.alpha,
        "crow.beta" => scenario.crow.beta,
        "crow.severity" => scenario.crow.severity,
        "crow_lambda_target" => scenario.crow_lambda_target,
        "poisson.confidence" => scenario.poisson.confidence,
        "poisson.safety_factor" => scenario.poisson.safety_factor,
        "poisson.lambda_target" => scenario.poisson.lambda_target,
        "annual_miles" => scenario.annual_miles,
        "gamma_override" => scenario.gamma()?,
        "base_delta" => scenario.base_delta,
        "f" => scenario.f,
        "prod_reg_years.stage2" => scenario.prod_reg_years.stage2,
        "prod_reg_years.stage3" => scenario.prod_reg_years.stage3,
        _ => return Err(unknown_path(path)),
    })
}

/// Sets a parameter without validating the result.
///
/// Setting `chi.*` replaces a factor list with a direct value; setting
/// `gamma_override` drops any weighted ODD dimensions.
pub fn set_parameter(scenario: &mut CategoryScenario, path: &str, value: f64) -> Result<()> {
    match path {
        "n_objects" => {
            if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                return Err(Error::validation(path, value, "be a positive integer"));
            }
            scenario.n_objects = value as u64;
        }
        "cycle_time_s" => scenario.cycle_time_s = value,
        "chi.stage2" => scenario.chi.stage2 = ChiSetting::Direct(value),
        "chi.stage3" => scenario.chi.stage3 = ChiSetting::Direct(value),
        "compute_env.current_capacity_log10" => scenario.compute_env.current_capacity_log10 = value,
        "compute_env.doubling_period_years" => scenario.compute_env.doubling_period_years = value,
        "crow.alpha" => scenario.crow.alpha = value,
        "crow.beta" => scenario.crow.beta = value,
        "crow.severity" => scenario.crow.severity = value,
        "crow_lambda_target" => scenario.crow_lambda_target = value,
        "poisson.confidence" => scenario.poisson.confidence = value,
        "poisson.safety_factor" => scenario.poisson.safety_factor = value,
        "poisson.lambda_target" => scenario.poisson.lambda_target = value,
        "annual_miles" => scenario.annual_miles = value,
        "gamma_override" => {
            scenario.gamma_override = Some(value);
            scenario.odd_dimensions = None;
        }
        "base_delta" => scenario.base_delta = value,
        "f" => scenario.f = value,
        "prod_reg_years.stage2" => scenario.prod_reg_years.stage2 = value,
        "prod_reg_years.stage3" => scenario.prod_reg_years.stage3 = value,
        _ => return Err(unknown_path(path)),
    }
    Ok(())
}

/// Copy of `scenario` with one parameter changed, validated.
pub fn with_parameter(scenario: &CategoryScenario, path: &str, value: f64) -> Result<CategoryScenario> {
    let mut out = scenario.clone();
    set_parameter(&mut out, path, value)?;
    out.validate()?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepValues {
    Values(Vec<f64>),
    /// `steps` evenly spaced values from `low` to `high` inclusive.
    Grid { low: f64, high: f64, steps: usize },
}

impl SweepValues {
    pub fn expand(&self) -> Result<Vec<f64>> {
        match self {
            SweepValues::Values(v) if v.is_empty() => {
                Err(Error::validation("values", "[]", "list at least one value"))
            }
            SweepValues::Values(v) => Ok(v.clone()),
            SweepValues::Grid { steps: 0, .. } => Err(Error::validation("grid.steps", 0, "be at least 1")),
            SweepValues::Grid { low, steps: 1, .. } => Ok(vec![*low]),
            SweepValues::Grid { low, high, steps } => {
                let last = (*steps - 1) as f64;
                Ok((0..*steps)
                    .map(|i| if i + 1 == *steps { *high } else { low + (high - low) * i as f64 / last })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter_path: String,
    #[serde(flatten)]
    pub values: SweepValues,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    Uniform { low: f64, high: f64 },
    Triangular { low: f64, mode: f64, high: f64 },
}

impl Distribution {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            Distribution::Uniform { low, high } => (low, high),
            Distribution::Triangular { low, high, .. } => (low, high),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ordered = match *self {
            Distribution::Uniform { low, high } => low <= high,
            Distribution::Triangular { low, mode, high } => low <= mode && mode <= high,
        };
        let (low, high) = self.bounds();
        if !ordered || !low.is_finite() || !high.is_finite() {
            return Err(Error::validation(
                "distribution",
                format!("{self:?}"),
                "satisfy low <= mode <= high with finite bounds",
            ));
        }
        Ok(())
    }

    /// Inverse CDF at `u` in [0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            Distribution::Uniform { low, high } => low + (high - low) * u,
            Distribution::Triangular { low, mode, high } => {
                let width = high - low;
                if width == 0.0 {
                    return low;
                }
                let split = (mode - low) / width;
                if u < split {
                    low + (u * width * (mode - low)).sqrt()
                } else {
                    high - ((1.0 - u) * width * (high - mode)).sqrt()
                }
            }
        }
    }
}

/// Distribution over one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub parameter_path: String,
    #[serde(flatten)]
    pub kind: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamBound {
    pub parameter_path: String,
    pub low: f64,
    pub high: f64,
}

/// Sweep, tornado and Monte Carlo specs as a JSON document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<ParamBound>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distributions: Vec<DistributionSpec>,
}

impl SensitivityDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamValue {
    pub parameter_path: String,
    pub value: f64,
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub inputs: Vec<ParamValue>,
    pub t_crow_total: f64,
    pub t_total: f64,
    pub calendar_year: i32,
    pub gating: Gating,
}

impl SampleRecord {
    fn from_projection(inputs: Vec<ParamValue>, result: &ProjectionResult) -> Self {
        Self {
            inputs,
            t_crow_total: result.breakdown.t_crow_total,
            t_total: result.breakdown.t_total,
            calendar_year: result.breakdown.calendar_year,
            gating: result.breakdown.gating,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Some(Self { min, max, mean })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TornadoEntry {
    pub parameter_path: String,
    pub low: f64,
    pub high: f64,
    pub t_total_low: f64,
    pub t_total_high: f64,
    /// `|t_total_high - t_total_low|`
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentileValue {
    pub percentile: u8,
    pub t_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloStats {
    pub seed: u64,
    pub sample_count: usize,
    pub percentiles: Vec<PercentileValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisKind {
    Sweep,
    Tornado,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub analysis: AnalysisKind,
    pub category: String,
    pub stage: Stage,
    pub baseline_t_total: f64,
    pub records: Vec<SampleRecord>,
    pub summary: Option<Summary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tornado: Vec<TornadoEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloStats>,
}

impl SensitivityReport {
    fn new(analysis: AnalysisKind, scenario: &CategoryScenario, stage: Stage, baseline: f64, records: Vec<SampleRecord>) -> Self {
        let totals: Vec<f64> = records.iter().map(|r| r.t_total).collect();
        Self {
            analysis,
            category: scenario.name.clone(),
            stage,
            baseline_t_total: baseline,
            summary: Summary::of(&totals),
            records,
            tornado: Vec::new(),
            monte_carlo: None,
        }
    }
}

/// Linear interpolation between closest ranks of an ascending slice.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty sample");
    let rank = (p / 100.0).clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
}

/// Projects the scenario once per swept value, all else unchanged.
pub fn one_at_a_time(scenario: &CategoryScenario, stage: Stage, sweep: &SweepSpec) -> Result<SensitivityReport> {
    let baseline = project(scenario, stage)?;
    get_parameter(scenario, &sweep.parameter_path)?;
    let values = sweep.values.expand()?;
    let variants = values
        .iter()
        .map(|&v| with_parameter(scenario, &sweep.parameter_path, v))
        .collect::<Result<Vec<_>>>()?;
    let records = values
        .iter()
        .zip(&variants)
        .map(|(&value, variant)| {
            let result = project(variant, stage)?;
            let inputs = vec![ParamValue {
                parameter_path: sweep.parameter_path.clone(),
                value,
            }];
            Ok(SampleRecord::from_projection(inputs, &result))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SensitivityReport::new(
        AnalysisKind::Sweep,
        scenario,
        stage,
        baseline.breakdown.t_total,
        records,
    ))
}

/// Low/high projections per parameter, ranked by descending spread.
pub fn tornado(scenario: &CategoryScenario, stage: Stage, bounds: &[ParamBound]) -> Result<SensitivityReport> {
    let baseline = project(scenario, stage)?;
    let mut entries = Vec::with_capacity(bounds.len());
    for bound in bounds {
        get_parameter(scenario, &bound.parameter_path)?;
        let low = project(&with_parameter(scenario, &bound.parameter_path, bound.low)?, stage)?;
        let high = project(&with_parameter(scenario, &bound.parameter_path, bound.high)?, stage)?;
        entries.push((bound, low, high));
    }
    entries.sort_by(|a, b| {
        let spread = |e: &(&ParamBound, ProjectionResult, ProjectionResult)| {
            (e.2.breakdown.t_total - e.1.breakdown.t_total).abs()
        };
        spread(b).total_cmp(&spread(a))
    });

    let mut records = Vec::with_capacity(entries.len() * 2);
    let mut ranked = Vec::with_capacity(entries.len());
    for (bound, low, high) in &entries {
        for (value, result) in [(bound.low, low), (bound.high, high)] {
            let inputs = vec![ParamValue {
                parameter_path: bound.parameter_path.clone(),
                value,
            }];
            records.push(SampleRecord::from_projection(inputs, result));
        }
        ranked.push(TornadoEntry {
            parameter_path: bound.parameter_path.clone(),
            low: bound.low,
            high: bound.high,
            t_total_low: low.breakdown.t_total,
            t_total_high: high.breakdown.t_total,
            spread: (high.breakdown.t_total - low.breakdown.t_total).abs(),
        });
    }
    let mut report = SensitivityReport::new(
        AnalysisKind::Tornado,
        scenario,
        stage,
        baseline.breakdown.t_total,
        records,
    );
    report.tornado = ranked;
    Ok(report)
}

fn sampled_value(path: &str, dist: &Distribution, u: f64) -> f64 {
    let x = dist.quantile(u);
    if is_integer_path(path) {
        x.round()
    } else {
        x
    }
}

/// Seeded Monte Carlo over independent per-parameter distributions.
pub fn monte_carlo(
    scenario: &CategoryScenario,
    stage: Stage,
    distributions: &[DistributionSpec],
    sample_count: usize,
    seed: u64,
) -> Result<SensitivityReport> {
    if sample_count == 0 {
        return Err(Error::validation("sample_count", 0, "be at least 1"));
    }
    let baseline = project(scenario, stage)?;
    for dist in distributions {
        get_parameter(scenario, &dist.parameter_path)?;
        dist.kind.validate().map_err(|e| e.under(&dist.parameter_path))?;
        let (low, high) = dist.kind.bounds();
        for end in [low, high] {
            let end = if is_integer_path(&dist.parameter_path) { end.round() } else { end };
            with_parameter(scenario, &dist.parameter_path, end)?;
        }
    }

    let records = (0..sample_count)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let mut variant = scenario.clone();
            let mut inputs = Vec::with_capacity(distributions.len());
            for dist in distributions {
                let u: f64 = rng.random();
                let value = sampled_value(&dist.parameter_path, &dist.kind, u);
                set_parameter(&mut variant, &dist.parameter_path, value)?;
                inputs.push(ParamValue {
                    parameter_path: dist.parameter_path.clone(),
                    value,
                });
            }
            let result = project(&variant, stage)?;
            Ok(SampleRecord::from_projection(inputs, &result))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sorted: Vec<f64> = records.iter().map(|r| r.t_total).collect();
    sorted.sort_by(f64::total_cmp);
    let percentiles = PERCENTILES
        .iter()
        .map(|&p| PercentileValue {
            percentile: p,
            t_total: percentile(&sorted, p as f64),
        })
        .collect();

    let mut report = SensitivityReport::new(
        AnalysisKind::MonteCarlo,
        scenario,
        stage,
        baseline.breakdown.t_total,
        records,
    );
    report.monte_carlo = Some(MonteCarloStats {
        seed,
        sample_count,
        percentiles,
    });
    Ok(report)
}

fn parse_numbers(field: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation(field, t.trim(), "be a number"))
        })
        .collect()
}

fn split_assignment<'a>(field: &str, text: &'a str) -> Result<(&'a str, &'a str)> {
    text.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::validation(field, text, "have the form PATH=VALUE"))
}

/// `PATH=uniform:LOW,HIGH` or `PATH=triangular:LOW,MODE,HIGH`.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (path, spec) = split_assignment("dist", s)?;
        let (kind, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::validation("dist", s, "have the form PATH=KIND:ARGS"))?;
        let nums = parse_numbers("dist", args)?;
        let kind = match (kind.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("uniform", &[low, high]) => Distribution::Uniform { low, high },
            ("triangular", &[low, mode, high]) => Distribution::Triangular { low, mode, high },
            _ => {
                return Err(Error::validation(
                    "dist",
                    s,
                    "be uniform:LOW,HIGH or triangular:LOW,MODE,HIGH",
                ))
            }
        };
        Ok(Self {
            parameter_path: path.to_string(),
            kind,
        })
    }
}

/// `PATH=LOW,HIGH`.
impl FromStr for ParamBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (path, range) = split_assignment("bound", s)?;
        match parse_numbers("bound", range)?.as_slice() {
            &[low, high] => Ok(Self {
                parameter_path: path.to_string(),
                low,
                high,
            }),
            _ => Err(Error::validation("bound", s, "have the form PATH=LOW,HIGH")),
        }
    }
}

impl SweepValues {
    pub fn parse_list(text: &str) -> Result<Self> {
        Ok(SweepValues::Values(parse_numbers("values", text)?))
    }

    /// `LOW,HIGH,STEPS`.
    pub fn parse_grid(text: &str) -> Result<Self> {
        match parse_numbers("grid", text)?.as_slice() {
            &[low, high, steps] if steps >= 1.0 && steps.fract() == 0.0 => Ok(SweepValues::Grid {
                low,
                high,
                steps: steps as usize,
            }),
            _ => Err(Error::validation("grid", text, "have the form LOW,HIGH,STEPS")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::find_category;

    #[test]
    fn every_path_round_trips() {
        let s = find_category("Robo-Taxis").unwrap();
        for path in PARAMETER_PATHS {
            let v = get_parameter(&s, path).unwrap();
            let back = with_parameter(&s, path, v).unwrap();
            assert_eq!(get_parameter(&back, path).unwrap(), v, "{path}");
        }
        assert!(matches!(
            get_parameter(&s, "crow.gamma"),
            Err(Error::UnknownParameter { .. })
        ));
    }

    #[test]
    fn grid_expansion() {
        let g = SweepValues::Grid { low: 0.3, high: 0.5, steps: 3 }.expand().unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[1] - 0.4).abs() < 1e-15);
        assert_eq!(g[2], 0.5);
        assert_eq!(SweepValues::Grid { low: 2.0, high: 9.0, steps: 1 }.expand().unwrap(), vec![2.0]);
        assert!(SweepValues::Grid { low: 0.0, high: 1.0, steps: 0 }.expand().is_err());
        assert!(SweepValues::Values(vec![]).expand().is_err());
    }

    #[test]
    fn triangular_quantiles() {
        let d = Distribution::Triangular { low: 0.0, mode: 1.0, high: 2.0 };
        assert_eq!(d.quantile(0.0), 0.0);
        assert!((d.quantile(0.5) - 1.0).abs() < 1e-12);
        assert!((d.quantile(0.125) - 0.5).abs() < 1e-12);
        let skew = Distribution::Triangular { low: 1.0, mode: 1.0, high: 3.0 };
        assert_eq!(skew.quantile(0.0), 1.0);
        let flat = Distribution::Triangular { low: 0.4, mode: 0.4, high: 0.4 };
        assert_eq!(flat.quantile(0.7), 0.4);
        assert!(Distribution::Triangular { low: 1.0, mode: 0.5, high: 2.0 }.validate().is_err());
    }

    #[test]
    fn percentile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 50.0), 3.0);
        assert_eq!(percentile(&v, 100.0), 5.0);
        assert!((percentile(&v, 5.0) - 1.2).abs() < 1e-12);
        assert_eq!(percentile(&[7.0], 95.0), 7.0);
    }

    #[test]
    fn inline_spec_parsing() {
        let d: DistributionSpec = "crow.beta=uniform:0.3,0.5".parse().unwrap();
        assert_eq!(d.parameter_path, "crow.beta");
        assert_eq!(d.kind, Distribution::Uniform { low: 0.3, high: 0.5 });
        let d: DistributionSpec = "f = triangular:0.5,0.7,0.8".parse().unwrap();
        assert_eq!(d.kind, Distribution::Triangular { low: 0.5, mode: 0.7, high: 0.8 });
        assert!("crow.beta=normal:0,1".parse::<DistributionSpec>().is_err());
        assert!("crow.beta".parse::<DistributionSpec>().is_err());
        let b: ParamBound = "crow.severity=1,5".parse().unwrap();
        assert_eq!((b.low, b.high), (1.0, 5.0));
        assert!("crow.severity=1".parse::<ParamBound>().is_err());
        assert_eq!(
            SweepValues::parse_grid("0.3,0.5,5").unwrap(),
            SweepValues::Grid { low: 0.3, high: 0.5, steps: 5 }
        );
        assert!(SweepValues::parse_grid("0.3,0.5,2.5").is_err());
    }

    #[test]
    fn document_specs() {
        let doc = SensitivityDocument::from_json(
            r#"{"sweep": {"parameter_path": "crow.beta", "values": [0.3, 0.4]},
                "bounds": [{"parameter_path": "f", "low": 0.5, "high": 0.8}],
                "distributions": [{"parameter_path": "crow.beta", "kind": "triangular", "low": 0.3, "mode": 0.4, "high": 0.5}]}"#,
        )
        .unwrap();
        assert_eq!(doc.sweep.unwrap().values, SweepValues::Values(vec![0.3, 0.4]));
        assert_eq!(doc.bounds.len(), 1);
        assert_eq!(
            doc.distributions[0].kind,
            Distribution::Triangular { low: 0.3, mode: 0.4, high: 0.5 }
        );
        let grid = SensitivityDocument::from_json(
            r#"{"sweep": {"parameter_path": "f", "grid": {"low": 0, "high": 1, "steps": 3}}}"#,
        )
        .unwrap();
        assert_eq!(grid.sweep.unwrap().values.expand().unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(SensitivityDocument::from_json(r#"{"sweeps": []}"#).is_err());
    }

    #[test]
    fn invalid_sweep_values_fail_before_running() {
        let s = find_category("Robo-Taxis").unwrap();
        let sweep = SweepSpec {
            parameter_path: "crow.beta".into(),
            values: SweepValues::Values(vec![0.4, 1.2]),
        };
        let err = one_at_a_time(&s, Stage::BroadCommercial, &sweep).unwrap_err().to_string();
        assert!(err.contains("crow.beta must lie in (0,1)"), "{err}");
        let sweep = SweepSpec {
            parameter_path: "crow.gamma".into(),
            values: SweepValues::Values(vec![0.4]),
        };
        let err = one_at_a_time(&s, Stage::BroadCommercial, &sweep).unwrap_err().to_string();
        assert!(err.contains("crow.beta") && err.contains("crow.gamma"), "{err}");
    }

    #[test]
    fn monte_carlo_rejects_bad_bounds() {
        let s = find_category("Robo-Taxis").unwrap();
        let dists = vec!["crow.beta=uniform:0.3,1.5".parse::<DistributionSpec>().unwrap()];
        assert!(monte_carlo(&s, Stage::BroadCommercial, &dists, 10, 1).is_err());
        let dists = vec!["crow.beta=uniform:0.5,0.3".parse::<DistributionSpec>().unwrap()];
        assert!(monte_carlo(&s, Stage::BroadCommercial, &dists, 10, 1).is_err());
        assert!(monte_carlo(&s, Stage::BroadCommercial, &[], 0, 1).is_err());
    }

    #[test]
    fn integer_parameter_is_rounded_in_sampling() {
        let s = find_category("Robo-Taxis").unwrap();
        let dists = vec!["n_objects=uniform:40,60".parse::<DistributionSpec>().unwrap()];
        let r = monte_carlo(&s, Stage::BroadCommercial, &dists, 50, 3).unwrap();
        assert!(r.records.iter().all(|rec| rec.inputs[0].value.fract() == 0.0));
    }
}
