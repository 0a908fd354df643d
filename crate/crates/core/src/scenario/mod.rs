//! Vehicle-category scenarios: the built-in catalog, scenario documents and
//! the projection pipeline (complexity, then reliability, then timeline).

mod catalog;
mod document;

use serde::{Deserialize, Serialize};

use crate::complexity::{
    chi_eff, compute_demand, effective_demand, hpc_horizon_years, ComputeEnv, Magnitude,
    ReductionFactors,
};
use crate::error::{
    check_at_least, check_closed, check_half_open, check_positive, Error, Result,
};
use crate::reliability::{
    crow_required_miles, demonstration_years, gamma, poisson_required_miles,
    validate_dimensions, CrowAmsaaParams, OddDimension, OddProfile, PoissonParams,
};
use crate::timeline::{compose_total, PhaseDurations, Stage, StageSpec, TimelineBreakdown};

pub use catalog::{builtin_catalog, catalog_names, find_category};
pub use document::{load_scenarios, load_scenarios_file, scenario_schema, serialize_scenarios};

/// A value for each projected stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerStage<T> {
    pub stage2: T,
    pub stage3: T,
}

impl<T> PerStage<T> {
    pub fn get(&self, stage: Stage) -> Result<&T> {
        match stage {
            Stage::Pilot => Err(Error::UnsupportedStage(stage)),
            Stage::RevenueService => Ok(&self.stage2),
            Stage::BroadCommercial => Ok(&self.stage3),
        }
    }

    pub fn get_mut(&mut self, stage: Stage) -> Result<&mut T> {
        match stage {
            Stage::Pilot => Err(Error::UnsupportedStage(stage)),
            Stage::RevenueService => Ok(&mut self.stage2),
            Stage::BroadCommercial => Ok(&mut self.stage3),
        }
    }
}

/// Compute-demand reduction for one stage: a direct χ, or a product of
/// documented reduction factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChiSetting {
    Direct(f64),
    Factors(FactorList),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorList {
    pub factors: ReductionFactors,
}

impl ChiSetting {
    pub fn value(&self) -> Result<f64> {
        match self {
            ChiSetting::Direct(chi) => {
                check_half_open("chi", *chi, 0.0, 1.0)?;
                Ok(*chi)
            }
            ChiSetting::Factors(list) => chi_eff(&list.factors),
        }
    }
}

/// Current on-vehicle compute and its doubling period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeGrowth {
    pub current_capacity_log10: f64,
    pub doubling_period_years: f64,
}

/// One vehicle category's full parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryScenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub n_objects: u64,
    pub cycle_time_s: f64,
    pub chi: PerStage<ChiSetting>,
    pub compute_env: ComputeGrowth,
    pub crow: CrowAmsaaParams,
    pub crow_lambda_target: f64,
    pub poisson: PoissonParams,
    pub annual_miles: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_dimensions: Option<Vec<OddDimension>>,
    pub base_delta: f64,
    pub f: f64,
    pub prod_reg_years: PerStage<f64>,
    pub baseline_year: i32,
}

impl CategoryScenario {
    pub fn validate(&self) -> Result<()> {
        self.validate_fields().map_err(|e| e.in_scenario(&self.name))
    }

    fn validate_fields(&self) -> Result<()> {
        if self.n_objects < 1 {
            return Err(Error::validation("n_objects", self.n_objects, "be at least 1"));
        }
        check_positive("cycle_time_s", self.cycle_time_s)?;
        for stage in Stage::PROJECTED {
            self.chi
                .get(stage)?
                .value()
                .map_err(|e| e.under(&format!("chi.{}", stage.key())))?;
            check_at_least(
                &format!("prod_reg_years.{}", stage.key()),
                *self.prod_reg_years.get(stage)?,
                0.0,
            )?;
        }
        if !self.compute_env.current_capacity_log10.is_finite() {
            return Err(Error::validation(
                "compute_env.current_capacity_log10",
                self.compute_env.current_capacity_log10,
                "be finite",
            ));
        }
        check_positive(
            "compute_env.doubling_period_years",
            self.compute_env.doubling_period_years,
        )?;
        self.crow.validate().map_err(|e| e.under("crow"))?;
        check_positive("crow_lambda_target", self.crow_lambda_target)?;
        self.poisson.validate().map_err(|e| e.under("poisson"))?;
        check_positive("annual_miles", self.annual_miles)?;
        match (&self.gamma_override, &self.odd_dimensions) {
            (Some(g), None) => check_positive("gamma_override", *g)?,
            (None, Some(dims)) => {
                validate_dimensions(dims).map_err(|e| e.under("odd_dimensions"))?;
                check_positive("odd_dimensions (weighted gamma)", self.gamma()?)?;
            }
            (Some(_), Some(_)) => {
                return Err(Error::validation(
                    "gamma_override",
                    "set together with odd_dimensions",
                    "be null when odd_dimensions is given",
                ))
            }
            (None, None) => {
                return Err(Error::validation(
                    "gamma_override",
                    "missing",
                    "be given unless odd_dimensions is",
                ))
            }
        }
        check_half_open("base_delta", self.base_delta, 0.0, 1.0)?;
        check_closed("f", self.f, 0.0, 1.0)
    }

    pub fn compute_env(&self) -> Result<ComputeEnv> {
        ComputeEnv::new(
            Magnitude::from_log10(self.compute_env.current_capacity_log10)?,
            self.compute_env.doubling_period_years,
            self.cycle_time_s,
        )
    }

    pub fn chi_value(&self, stage: Stage) -> Result<f64> {
        self.chi.get(stage)?.value()
    }

    /// The explicit γ, or the weighted sum over `odd_dimensions`.
    pub fn gamma(&self) -> Result<f64> {
        match (&self.gamma_override, &self.odd_dimensions) {
            (Some(g), _) => Ok(*g),
            (None, Some(dims)) => gamma(&OddProfile {
                dimensions: dims.clone(),
                delta: self.base_delta,
            }),
            (None, None) => Err(Error::validation(
                "gamma_override",
                "missing",
                "be given unless odd_dimensions is",
            )),
        }
    }

    /// ODD reduction after the stage's multiplier is applied.
    pub fn delta_for(&self, stage: Stage) -> Result<f64> {
        if stage == Stage::Pilot {
            return Err(Error::UnsupportedStage(stage));
        }
        Ok(self.base_delta * StageSpec::standard(stage).delta_multiplier)
    }
}

/// Pipeline values that feed the breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intermediate {
    pub naive_demand: Magnitude,
    pub chi: f64,
    pub effective_demand: Magnitude,
    pub crow_miles: f64,
    pub poisson_miles: f64,
    pub gamma: f64,
    pub delta_effective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub category: String,
    pub stage: Stage,
    pub breakdown: TimelineBreakdown,
    pub intermediate: Intermediate,
}

/// Runs the full projection for one category at one stage.
pub fn project(scenario: &CategoryScenario, stage: Stage) -> Result<ProjectionResult> {
    if stage == Stage::Pilot {
        return Err(Error::UnsupportedStage(stage));
    }
    scenario.validate()?;
    let in_scenario = |e: Error| e.in_scenario(&scenario.name);

    let env = scenario.compute_env().map_err(in_scenario)?;
    let naive = compute_demand(scenario.n_objects, scenario.cycle_time_s).map_err(in_scenario)?;
    let chi = scenario.chi_value(stage).map_err(in_scenario)?;
    let effective = effective_demand(naive, chi).map_err(in_scenario)?;
    let t_comp = hpc_horizon_years(effective, &env).map_err(in_scenario)?;

    let gamma = scenario.gamma().map_err(in_scenario)?;
    let delta = scenario.delta_for(stage)?;
    let crow_miles =
        crow_required_miles(&scenario.crow, scenario.crow_lambda_target).map_err(in_scenario)?;
    let t_crow_total =
        demonstration_years(crow_miles, gamma, delta, scenario.annual_miles).map_err(in_scenario)?;
    let poisson_miles = poisson_required_miles(&scenario.poisson).map_err(in_scenario)?;
    let t_poisson =
        demonstration_years(poisson_miles, gamma, delta, scenario.annual_miles).map_err(in_scenario)?;

    let breakdown = compose_total(
        &PhaseDurations {
            t_comp,
            t_crow_total,
            f: scenario.f,
            t_poisson,
            t_prod_reg: *scenario.prod_reg_years.get(stage)?,
        },
        scenario.baseline_year,
    )
    .map_err(in_scenario)?;

    Ok(ProjectionResult {
        category: scenario.name.clone(),
        stage,
        breakdown,
        intermediate: Intermediate {
            naive_demand: naive,
            chi,
            effective_demand: effective,
            crow_miles,
            poisson_miles,
            gamma,
            delta_effective: delta,
        },
    })
}

/// Projects every scenario at every requested stage, scenario-major.
pub fn project_all(scenarios: &[CategoryScenario], stages: &[Stage]) -> Result<Vec<ProjectionResult>> {
    scenarios
        .iter()
        .flat_map(|s| stages.iter().map(move |&stage| project(s, stage)))
        .collect()
}
