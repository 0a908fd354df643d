use crate::complexity::{chi_for_horizon, compute_demand, ComputeEnv};
use crate::error::{Error, Result};
use crate::reliability::{CrowAmsaaParams, PoissonParams};

use super::{CategoryScenario, ChiSetting, ComputeGrowth, PerStage};

const BASELINE_YEAR: i32 = 2024;
const CYCLE_TIME_S: f64 = 0.1;
const CURRENT_CAPACITY_LOG10: f64 = 13.0;
const DOUBLING_PERIOD_YEARS: f64 = 2.5;
const ALPHA: f64 = 1e-4;
const BETA: f64 = 0.4;
/// One fatal incident per 1e8 miles.
const CROW_LAMBDA_TARGET: f64 = 1e-8;
const CONFIDENCE: f64 = 0.95;
const SAFETY_FACTOR: f64 = 2.0;
/// Half the human baseline of 1.42e-8.
const POISSON_LAMBDA_TARGET: f64 = 7.1e-9;
const ANNUAL_MILES: f64 = 1e9;
const OVERLAP_FRACTION: f64 = 0.7;
const STAGE3_DELTA: f64 = 1.0;

/// Retrofit outfitting (up to 12 months) plus waivers (up to 6 months).
const OUTFITTED_STAGE2_PROD_REG: f64 = 1.5;
/// Purpose-built low-volume runs (up to 3 years) plus limited approvals (up to 9 months).
const BESPOKE_STAGE2_PROD_REG: f64 = 3.75;

struct CategoryDef {
    name: &'static str,
    n_objects: u64,
    severity: f64,
    gamma: f64,
    /// Target compute horizons (stage 2, stage 3) the stored χ reproduces.
    t_comp: (f64, f64),
    prod_reg: (f64, f64),
}

const CATEGORIES: [CategoryDef; 8] = [
    CategoryDef {
        name: "Consumer Automotive",
        n_objects: 60,
        severity: 1.0,
        gamma: 1.0,
        t_comp: (25.0, 35.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 5.0),
    },
    CategoryDef {
        name: "Robo-Taxis",
        n_objects: 55,
        severity: 2.0,
        gamma: 0.9,
        t_comp: (15.0, 20.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 5.0),
    },
    CategoryDef {
        name: "Geo-fenced Vans/Buses",
        n_objects: 35,
        severity: 1.0,
        gamma: 0.5,
        t_comp: (0.0, 0.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 2.5),
    },
    CategoryDef {
        name: "Highway Trucking",
        n_objects: 25,
        severity: 5.0,
        gamma: 0.4,
        t_comp: (0.0, 0.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 5.0),
    },
    CategoryDef {
        name: "Delivery Vans",
        n_objects: 35,
        severity: 1.0,
        gamma: 0.5,
        t_comp: (0.0, 0.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 2.5),
    },
    CategoryDef {
        name: "Bespoke Shuttles",
        n_objects: 35,
        severity: 2.0,
        gamma: 0.5,
        t_comp: (0.0, 0.0),
        prod_reg: (BESPOKE_STAGE2_PROD_REG, 7.0),
    },
    CategoryDef {
        name: "Military/Defense",
        n_objects: 35,
        severity: 1.0,
        gamma: 0.3,
        t_comp: (0.0, 0.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 2.5),
    },
    CategoryDef {
        name: "Industrial/Mining",
        n_objects: 25,
        severity: 1.0,
        gamma: 0.2,
        t_comp: (0.0, 0.0),
        prod_reg: (OUTFITTED_STAGE2_PROD_REG, 2.5),
    },
];

impl CategoryDef {
    fn build(&self) -> CategoryScenario {
        let env = ComputeEnv::default();
        let naive = compute_demand(self.n_objects, CYCLE_TIME_S).expect("catalog cycle time is positive");
        let chi = |years| chi_for_horizon(naive, &env, years).expect("catalog horizon is finite");
        let notes = if self.t_comp == (0.0, 0.0) {
            "chi set so effective demand does not exceed current capacity (T_comp = 0)".to_string()
        } else {
            format!(
                "chi back-derived as C_c * 2^(T_comp/T_d) / C_d for T_comp = {} (stage 2) and {} (stage 3) years",
                self.t_comp.0, self.t_comp.1
            )
        };
        CategoryScenario {
            name: self.name.to_string(),
            notes: Some(notes),
            n_objects: self.n_objects,
            cycle_time_s: CYCLE_TIME_S,
            chi: PerStage {
                stage2: ChiSetting::Direct(chi(self.t_comp.0)),
                stage3: ChiSetting::Direct(chi(self.t_comp.1)),
            },
            compute_env: ComputeGrowth {
                current_capacity_log10: CURRENT_CAPACITY_LOG10,
                doubling_period_years: DOUBLING_PERIOD_YEARS,
            },
            crow: CrowAmsaaParams {
                alpha: ALPHA,
                beta: BETA,
                severity: self.severity,
            },
            crow_lambda_target: CROW_LAMBDA_TARGET,
            poisson: PoissonParams {
                confidence: CONFIDENCE,
                safety_factor: SAFETY_FACTOR,
                lambda_target: POISSON_LAMBDA_TARGET,
            },
            annual_miles: ANNUAL_MILES,
            gamma_override: Some(self.gamma),
            odd_dimensions: None,
            base_delta: STAGE3_DELTA,
            f: OVERLAP_FRACTION,
            prod_reg_years: PerStage {
                stage2: self.prod_reg.0,
                stage3: self.prod_reg.1,
            },
            baseline_year: BASELINE_YEAR,
        }
    }
}

/// The eight reference vehicle categories.
pub fn builtin_catalog() -> Vec<CategoryScenario> {
    CATEGORIES.iter().map(CategoryDef::build).collect()
}

pub fn catalog_names() -> Vec<String> {
    CATEGORIES.iter().map(|c| c.name.to_string()).collect()
}

/// Looks up a catalog category by name, ignoring ASCII case.
pub fn find_category(name: &str) -> Result<CategoryScenario> {
    CATEGORIES
        .iter()
        .find(|c| c.name.eq_ignore_ascii_case(name.trim()))
        .map(CategoryDef::build)
        .ok_or_else(|| Error::UnknownCategory {
            name: name.to_string(),
            valid: catalog_names(),
        })
}
