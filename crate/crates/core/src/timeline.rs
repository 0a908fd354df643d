//! Composition of phase durations into a deployment timeline.
//!
//! The hybrid model lets a fraction `f` of growth testing overlap the compute
//! ramp; the rest, the Poisson QA run and production/regulatory lead time are
//! serial:
//!
//! ```text
//! total = max(f * crow, comp) + (1 - f) * crow + poisson + prod_reg
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_closed, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    #[serde(rename = "stage1")]
    Pilot,
    #[serde(rename = "stage2")]
    RevenueService,
    #[serde(rename = "stage3")]
    BroadCommercial,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::Pilot, Stage::RevenueService, Stage::BroadCommercial];
    pub const PROJECTED: [Stage; 2] = [Stage::RevenueService, Stage::BroadCommercial];

    pub fn number(self) -> u8 {
        match self {
            Stage::Pilot => 1,
            Stage::RevenueService => 2,
            Stage::BroadCommercial => 3,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Stage::Pilot => "stage1",
            Stage::RevenueService => "stage2",
            Stage::BroadCommercial => "stage3",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Stage::Pilot => "Pilot",
            Stage::RevenueService => "Revenue Service",
            Stage::BroadCommercial => "Broad Commercialization",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} ({})", self.number(), self.label().to_lowercase())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "stage1" | "pilot" => Ok(Stage::Pilot),
            "2" | "stage2" | "revenue" | "revenue-service" => Ok(Stage::RevenueService),
            "3" | "stage3" | "broad" | "broad-commercial" => Ok(Stage::BroadCommercial),
            _ => Err(Error::validation("stage", s, "be one of 1, 2, 3")),
        }
    }
}

/// Per-stage reference parameters.
///
/// `failure_threshold_per_hour` is carried as metadata; projections always
/// work from per-mile rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageSpec {
    pub stage_id: Stage,
    pub failure_threshold_per_hour: f64,
    pub lambda_target_per_mile: f64,
    /// Multiplies a scenario's base ODD reduction fraction.
    pub delta_multiplier: f64,
    pub prod_reg_years: f64,
}

impl StageSpec {
    pub fn standard(stage: Stage) -> Self {
        match stage {
            Stage::Pilot => StageSpec {
                stage_id: stage,
                failure_threshold_per_hour: 1e-7,
                lambda_target_per_mile: 1e-8,
                delta_multiplier: 0.5,
                prod_reg_years: 1.5,
            },
            // outfitting 6-12 months plus waivers 1-6 months, upper ends
            Stage::RevenueService => StageSpec {
                stage_id: stage,
                failure_threshold_per_hour: 1e-8,
                lambda_target_per_mile: 1e-8,
                delta_multiplier: 0.5,
                prod_reg_years: 1.5,
            },
            Stage::BroadCommercial => StageSpec {
                stage_id: stage,
                failure_threshold_per_hour: 1e-9,
                lambda_target_per_mile: 1e-8,
                delta_multiplier: 1.0,
                prod_reg_years: 5.0,
            },
        }
    }

    pub fn standard_ladder() -> [StageSpec; 3] {
        Stage::ALL.map(StageSpec::standard)
    }

    pub fn validate(&self) -> Result<()> {
        crate::error::check_positive("failure_threshold_per_hour", self.failure_threshold_per_hour)?;
        crate::error::check_positive("lambda_target_per_mile", self.lambda_target_per_mile)?;
        crate::error::check_half_open("delta_multiplier", self.delta_multiplier, 0.0, 1.0)?;
        crate::error::check_at_least("prod_reg_years", self.prod_reg_years, 0.0)
    }
}

/// Checks that stages appear in order with strictly tightening thresholds.
pub fn validate_ladder(specs: &[StageSpec]) -> Result<()> {
    for spec in specs {
        spec.validate()?;
    }
    for pair in specs.windows(2) {
        if pair[1].stage_id <= pair[0].stage_id {
            return Err(Error::validation(
                "stage_id",
                pair[1].stage_id,
                "follow the preceding stage",
            ));
        }
        if pair[1].failure_threshold_per_hour >= pair[0].failure_threshold_per_hour {
            return Err(Error::validation(
                format!("{}.failure_threshold_per_hour", pair[1].stage_id.key()),
                pair[1].failure_threshold_per_hour,
                format!("be below the {} threshold", pair[0].stage_id.key()),
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gating {
    ComputeGated,
    ReliabilityGated,
}

impl fmt::Display for Gating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gating::ComputeGated => "compute-gated",
            Gating::ReliabilityGated => "reliability-gated",
        })
    }
}

/// Inputs to [`compose_total`], all in years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDurations {
    pub t_comp: f64,
    pub t_crow_total: f64,
    /// Share of growth testing that can overlap the compute ramp.
    pub f: f64,
    pub t_poisson: f64,
    pub t_prod_reg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimelineBreakdown {
    pub t_comp: f64,
    pub t_crow_total: f64,
    pub t_crow_partial: f64,
    pub t_crow_final: f64,
    pub t_poisson: f64,
    pub t_prod_reg: f64,
    pub f: f64,
    pub t_total: f64,
    pub gating: Gating,
    pub calendar_year: i32,
}

/// Splits growth testing into the part overlapping the compute ramp and the
/// part that must follow it.
pub fn split_crow(t_crow_total: f64, f: f64) -> Result<(f64, f64)> {
    check_duration("t_crow_total", t_crow_total)?;
    check_closed("f", f, 0.0, 1.0)?;
    let partial = f * t_crow_total;
    Ok((partial, t_crow_total - partial))
}

pub fn compose_total(phases: &PhaseDurations, baseline_year: i32) -> Result<TimelineBreakdown> {
    check_duration("t_comp", phases.t_comp)?;
    check_duration("t_poisson", phases.t_poisson)?;
    check_duration("t_prod_reg", phases.t_prod_reg)?;
    let (partial, final_) = split_crow(phases.t_crow_total, phases.f)?;
    let gating = if phases.t_comp > partial {
        Gating::ComputeGated
    } else {
        Gating::ReliabilityGated
    };
    let t_total = partial.max(phases.t_comp) + final_ + phases.t_poisson + phases.t_prod_reg;
    Ok(TimelineBreakdown {
        t_comp: phases.t_comp,
        t_crow_total: phases.t_crow_total,
        t_crow_partial: partial,
        t_crow_final: final_,
        t_poisson: phases.t_poisson,
        t_prod_reg: phases.t_prod_reg,
        f: phases.f,
        t_total,
        gating,
        calendar_year: calendar_date(baseline_year, t_total)?,
    })
}

/// `baseline_year` plus the total rounded half-up to whole years.
pub fn calendar_date(baseline_year: i32, t_total: f64) -> Result<i32> {
    check_duration("t_total", t_total)?;
    let offset = (t_total + 0.5).floor();
    if offset > (i32::MAX - baseline_year.max(0)) as f64 {
        return Err(Error::NonFinite {
            quantity: "calendar year",
        });
    }
    Ok(baseline_year + offset as i32)
}

fn check_duration(field: &str, years: f64) -> Result<()> {
    crate::error::check_at_least(field, years, 0.0)
}
