//! State-space size, naive multi-agent planning demand, heuristic reduction
//! factors and the HPC feasibility horizon.
//!
//! Counts such as the joint state space of fifty tracked objects (10^1000)
//! overflow every native float, so they are carried as base-10 exponents in
//! [`Magnitude`].

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{check_half_open, check_positive, Error, Result};

/// A positive quantity stored as its base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Magnitude {
    log10_value: f64,
}

impl Magnitude {
    pub const ONE: Magnitude = Magnitude { log10_value: 0.0 };

    /// Wraps a positive, finite value.
    pub fn from_value(value: f64) -> Result<Self> {
        check_positive("value", value)?;
        Ok(Self {
            log10_value: value.log10(),
        })
    }

    pub fn from_log10(log10_value: f64) -> Result<Self> {
        if !log10_value.is_finite() {
            return Err(Error::validation(
                "log10_value",
                log10_value,
                "be finite",
            ));
        }
        Ok(Self { log10_value })
    }

    /// `base^exponent` without ever forming the power.
    pub fn from_power(base: f64, exponent: f64) -> Result<Self> {
        check_positive("base", base)?;
        Self::from_log10(exponent * base.log10())
    }

    pub fn log10(self) -> f64 {
        self.log10_value
    }

    pub fn log2(self) -> f64 {
        self.log10_value / std::f64::consts::LOG10_2
    }

    /// Linear value; `inf` once the exponent passes ~308.
    pub fn value(self) -> f64 {
        10f64.powf(self.log10_value)
    }

    pub fn scale(self, factor: f64) -> Result<Self> {
        check_positive("factor", factor)?;
        Ok(Self {
            log10_value: self.log10_value + factor.log10(),
        })
    }
}

// products add exponents
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Magnitude {
    type Output = Magnitude;

    fn mul(self, rhs: Magnitude) -> Magnitude {
        Magnitude {
            log10_value: self.log10_value + rhs.log10_value,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Magnitude {
    type Output = Magnitude;

    fn div(self, rhs: Magnitude) -> Magnitude {
        Magnitude {
            log10_value: self.log10_value - rhs.log10_value,
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "10^{:.2}", self.log10_value)
    }
}

/// Discretisation of the scene: `n` objects, `d` parameters each, `m` levels
/// per parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpaceSpec {
    pub n_objects: u64,
    pub params_per_object: u64,
    pub levels_per_param: u64,
}

impl StateSpaceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_objects < 1 {
            return Err(Error::validation("n_objects", self.n_objects, "be at least 1"));
        }
        if self.params_per_object < 1 {
            return Err(Error::validation(
                "params_per_object",
                self.params_per_object,
                "be at least 1",
            ));
        }
        if self.levels_per_param < 2 {
            return Err(Error::validation(
                "levels_per_param",
                self.levels_per_param,
                "be at least 2",
            ));
        }
        Ok(())
    }
}

/// On-vehicle compute today and how fast it grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeEnv {
    /// Current capacity in ops/s.
    pub current_capacity: Magnitude,
    pub doubling_period_years: f64,
    /// Planning cycle in seconds.
    pub cycle_time_s: f64,
}

impl ComputeEnv {
    pub const DEFAULT_CYCLE_TIME_S: f64 = 0.1;

    pub fn new(current_capacity: Magnitude, doubling_period_years: f64, cycle_time_s: f64) -> Result<Self> {
        let env = Self {
            current_capacity,
            doubling_period_years,
            cycle_time_s,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("doubling_period_years", self.doubling_period_years)?;
        check_positive("cycle_time_s", self.cycle_time_s)
    }

    /// Capacity `years` from now: `C_c * 2^(years / T_d)`.
    pub fn capacity_at(&self, years: f64) -> Magnitude {
        Magnitude {
            log10_value: self.current_capacity.log10_value
                + years / self.doubling_period_years * std::f64::consts::LOG10_2,
        }
    }
}

impl Default for ComputeEnv {
    fn default() -> Self {
        Self {
            current_capacity: Magnitude { log10_value: 13.0 },
            doubling_period_years: 2.5,
            cycle_time_s: Self::DEFAULT_CYCLE_TIME_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionFactor {
    pub name: String,
    pub value: f64,
    /// Inclusive `[low, high]` bounds the value must respect.
    pub documented_range: [f64; 2],
}

impl ReductionFactor {
    pub fn new(name: impl Into<String>, value: f64, low: f64, high: f64) -> Self {
        Self {
            name: name.into(),
            value,
            documented_range: [low, high],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [low, high] = self.documented_range;
        let field = format!("factors.{}", self.name);
        if !(low > 0.0 && low <= high && high <= 1.0) {
            return Err(Error::validation(
                format!("{field}.documented_range"),
                format!("[{low}, {high}]"),
                "be a sub-interval of (0,1]",
            ));
        }
        check_half_open(&field, self.value, 0.0, 1.0)?;
        if self.value < low || self.value > high {
            return Err(Error::validation(
                field,
                self.value,
                format!("lie in its documented range [{low},{high}]"),
            ));
        }
        Ok(())
    }
}

/// Ordered multiplicative reductions applied to the naive compute demand.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReductionFactors(pub Vec<ReductionFactor>);

impl ReductionFactors {
    /// The five heuristics commonly applied to multi-agent planning, at their
    /// nominal values.
    pub fn nominal() -> Self {
        Self(vec![
            ReductionFactor::new("active_object_limit", 0.33, 0.2, 0.5),
            ReductionFactor::new("temporal_slicing", 0.2, 0.1, 0.3),
            ReductionFactor::new("distant_agent_coarsening", 0.2, 0.1, 0.3),
            ReductionFactor::new("local_vs_global_planning", 0.1, 0.1, 0.3),
            ReductionFactor::new("odd_restriction", 0.5, 0.1, 1.0),
        ])
    }

    pub fn validate(&self) -> Result<()> {
        self.0.iter().try_for_each(ReductionFactor::validate)
    }
}

/// Log10 of the joint state space `(m^d)^n`.
pub fn state_space_size(spec: &StateSpaceSpec) -> Result<Magnitude> {
    spec.validate()?;
    let exponent = spec.n_objects as f64 * spec.params_per_object as f64;
    Magnitude::from_log10(exponent * (spec.levels_per_param as f64).log10())
}

/// Worst-case `2^n` operations per planning cycle.
pub fn naive_mapf_ops_per_cycle(n_objects: u64) -> Magnitude {
    Magnitude {
        log10_value: n_objects as f64 * std::f64::consts::LOG10_2,
    }
}

/// Naive demand in ops/s: `2^n` operations every `cycle_time_s`.
pub fn compute_demand(n_objects: u64, cycle_time_s: f64) -> Result<Magnitude> {
    check_positive("cycle_time_s", cycle_time_s)?;
    Ok(Magnitude {
        log10_value: naive_mapf_ops_per_cycle(n_objects).log10_value - cycle_time_s.log10(),
    })
}

/// Product of the reduction factors; 1 for an empty list.
pub fn chi_eff(factors: &ReductionFactors) -> Result<f64> {
    factors.validate()?;
    Ok(factors.0.iter().map(|p| p.value).product())
}

pub fn effective_demand(naive: Magnitude, chi: f64) -> Result<Magnitude> {
    check_half_open("chi", chi, 0.0, 1.0)?;
    Ok(Magnitude {
        log10_value: naive.log10_value + chi.log10(),
    })
}

/// Years until `C_c * 2^(t/T_d)` reaches `effective`; zero once demand is met.
pub fn hpc_horizon_years(effective: Magnitude, env: &ComputeEnv) -> Result<f64> {
    env.validate()?;
    let gap = effective.log10_value - env.current_capacity.log10_value;
    if gap <= 0.0 {
        return Ok(0.0);
    }
    Ok(env.doubling_period_years * gap / std::f64::consts::LOG10_2)
}

/// The χ that puts the HPC horizon exactly `t_comp_years` out, capped at 1
/// when even the unreduced demand is already met.
pub fn chi_for_horizon(naive: Magnitude, env: &ComputeEnv, t_comp_years: f64) -> Result<f64> {
    env.validate()?;
    if !(t_comp_years >= 0.0 && t_comp_years.is_finite()) {
        return Err(Error::validation("t_comp_years", t_comp_years, "be finite and nonnegative"));
    }
    let log_chi = env.capacity_at(t_comp_years).log10_value - naive.log10_value;
    Ok(10f64.powf(log_chi.min(0.0)))
}
