//! Required demonstration mileage under the Crow-AMSAA power law and the
//! Poisson zero-failure test, the ODD complexity factor, and conversion of
//! mileage into calendar years.
//!
//! All failure rates are per mile.

use serde::{Deserialize, Serialize};

use crate::error::{
    check_at_least, check_closed, check_half_open, check_open, check_positive, Error, Result,
};

/// Tolerance on the sum of ODD dimension weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Crow-AMSAA growth parameters: `lambda(t) = alpha * t^-beta * severity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrowAmsaaParams {
    pub alpha: f64,
    pub beta: f64,
    /// Mean fatalities per fatal incident.
    pub severity: f64,
}

impl CrowAmsaaParams {
    pub fn new(alpha: f64, beta: f64, severity: f64) -> Result<Self> {
        let params = Self {
            alpha,
            beta,
            severity,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_half_open("alpha", self.alpha, 0.0, 1.0)?;
        check_open("beta", self.beta, 0.0, 1.0)?;
        check_at_least("severity", self.severity, 1.0)
    }

    /// Failure rate at unit mileage, `alpha * severity`.
    pub fn initial_rate(&self) -> f64 {
        self.alpha * self.severity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonParams {
    pub confidence: f64,
    pub safety_factor: f64,
    pub lambda_target: f64,
}

impl PoissonParams {
    pub fn new(confidence: f64, safety_factor: f64, lambda_target: f64) -> Result<Self> {
        let params = Self {
            confidence,
            safety_factor,
            lambda_target,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_open("confidence", self.confidence, 0.0, 1.0)?;
        check_at_least("safety_factor", self.safety_factor, 1.0)?;
        check_positive("lambda_target", self.lambda_target)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddDimension {
    pub name: String,
    pub weight: f64,
    /// Difficulty score, 0 (benign) to 1 (hardest).
    pub score: f64,
}

impl OddDimension {
    pub fn new(name: impl Into<String>, weight: f64, score: f64) -> Self {
        Self {
            name: name.into(),
            weight,
            score,
        }
    }
}

/// Weighted ODD difficulty dimensions plus the fraction `delta` of the
/// scenario space retained after intentional restriction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddProfile {
    pub dimensions: Vec<OddDimension>,
    pub delta: f64,
}

impl OddProfile {
    /// Weather, traffic density, road complexity and speed range with the
    /// given scores.
    pub fn standard(weather: f64, traffic: f64, road: f64, speed: f64, delta: f64) -> Self {
        Self {
            dimensions: vec![
                OddDimension::new("weather", 0.3, weather),
                OddDimension::new("traffic_density", 0.25, traffic),
                OddDimension::new("road_complexity", 0.25, road),
                OddDimension::new("speed_range", 0.2, speed),
            ],
            delta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_dimensions(&self.dimensions)?;
        check_half_open("delta", self.delta, 0.0, 1.0)
    }
}

pub(crate) fn validate_dimensions(dimensions: &[OddDimension]) -> Result<()> {
    for dim in dimensions {
        check_closed(&format!("dimensions.{}.weight", dim.name), dim.weight, 0.0, 1.0)?;
        check_closed(&format!("dimensions.{}.score", dim.name), dim.score, 0.0, 1.0)?;
    }
    let residual = dimensions.iter().map(|d| d.weight).sum::<f64>() - 1.0;
    if residual.abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::WeightSum { residual });
    }
    Ok(())
}

/// Miles of growth testing until the failure rate reaches `lambda_target`.
///
/// Returns 0 when `lambda_target >= alpha * severity`: the target already
/// holds at any positive mileage.
pub fn crow_required_miles(params: &CrowAmsaaParams, lambda_target: f64) -> Result<f64> {
    params.validate()?;
    check_positive("lambda_target", lambda_target)?;
    let ratio = params.initial_rate() / lambda_target;
    if ratio <= 1.0 {
        return Ok(0.0);
    }
    let miles = ratio.powf(1.0 / params.beta);
    if !miles.is_finite() {
        return Err(Error::NonFinite {
            quantity: "crow-amsaa required mileage",
        });
    }
    Ok(miles)
}

/// Instantaneous failure rate after `miles` of growth testing.
pub fn crow_failure_rate(params: &CrowAmsaaParams, miles: f64) -> Result<f64> {
    params.validate()?;
    check_positive("miles", miles)?;
    Ok(params.alpha * miles.powf(-params.beta) * params.severity)
}

/// Failure-free miles needed to claim `lambda <= lambda_target` at the given
/// confidence, inflated by the safety factor.
pub fn poisson_required_miles(params: &PoissonParams) -> Result<f64> {
    params.validate()?;
    Ok(-(1.0 - params.confidence).ln() * params.safety_factor / params.lambda_target)
}

/// Weighted ODD complexity `sum(w_i * c_i)`.
pub fn gamma(profile: &OddProfile) -> Result<f64> {
    validate_dimensions(&profile.dimensions)?;
    Ok(profile.dimensions.iter().map(|d| d.weight * d.score).sum())
}

/// Calendar years to accumulate `required_miles * gamma * delta` at
/// `annual_miles` per year.
pub fn demonstration_years(required_miles: f64, gamma: f64, delta: f64, annual_miles: f64) -> Result<f64> {
    check_at_least("required_miles", required_miles, 0.0)?;
    check_positive("gamma", gamma)?;
    check_half_open("delta", delta, 0.0, 1.0)?;
    check_positive("annual_miles", annual_miles)?;
    Ok(required_miles * gamma * delta / annual_miles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn crow_worked_examples() {
        let p = CrowAmsaaParams::new(0.01, 0.5, 2.0).unwrap();
        assert!(rel(crow_required_miles(&p, 1e-8).unwrap(), 4e12) < 1e-9);

        let p = CrowAmsaaParams::new(0.01, 0.3, 2.0).unwrap();
        let miles = crow_required_miles(&p, 1e-8).unwrap();
        assert!(rel(miles, 2e6f64.powf(10.0 / 3.0)) < 1e-12);
        assert!(miles / 1e21 < 1.1 && 1e21 / miles < 1.1, "{miles:e}");

        // (1e4)^2.5
        let p = CrowAmsaaParams::new(1e-4, 0.4, 1.0).unwrap();
        assert!(rel(crow_required_miles(&p, 1e-8).unwrap(), 1e10) < 1e-9);
    }

    #[test]
    fn crow_target_already_met() {
        let p = CrowAmsaaParams::new(1e-4, 0.4, 1.0).unwrap();
        assert_eq!(crow_required_miles(&p, 1e-4).unwrap(), 0.0);
        assert_eq!(crow_required_miles(&p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn crow_rejects_bad_params() {
        let err = CrowAmsaaParams::new(1e-4, 1.2, 1.0).unwrap_err().to_string();
        assert!(err.contains("beta must lie in (0,1)"), "{err}");
        assert!(CrowAmsaaParams::new(0.0, 0.4, 1.0).is_err());
        assert!(CrowAmsaaParams::new(1.5, 0.4, 1.0).is_err());
        assert!(CrowAmsaaParams::new(1e-4, 0.0, 1.0).is_err());
        assert!(CrowAmsaaParams::new(1e-4, 0.4, 0.5).is_err());
        let p = CrowAmsaaParams::new(1e-4, 0.4, 1.0).unwrap();
        assert!(crow_required_miles(&p, 0.0).is_err());
    }

    #[test]
    fn crow_rate_examples() {
        let p = CrowAmsaaParams::new(1e-4, 0.4, 1.0).unwrap();
        assert!(rel(crow_failure_rate(&p, 1e10).unwrap(), 1e-8) < 1e-9);
        let p = CrowAmsaaParams::new(0.5, 0.5, 1.0).unwrap();
        assert_eq!(crow_failure_rate(&p, 1.0).unwrap(), 0.5);
        let p = CrowAmsaaParams::new(0.01, 0.5, 2.0).unwrap();
        assert!(rel(crow_failure_rate(&p, 4e12).unwrap(), 1e-8) < 1e-9);
        assert!(crow_failure_rate(&p, 0.0).is_err());
        assert!(crow_failure_rate(&p, -3.0).is_err());
    }

    #[test]
    fn poisson_examples() {
        let p = PoissonParams::new(0.95, 2.0, 7.1e-9).unwrap();
        let miles = poisson_required_miles(&p).unwrap();
        assert!(rel(miles, 8.438e8) < 1e-3, "{miles:e}");

        let c = 1.0 - (-1f64).exp();
        let p = PoissonParams::new(c, 1.0, 1e-8).unwrap();
        assert!(rel(poisson_required_miles(&p).unwrap(), 1e8) < 1e-12);

        let p1 = PoissonParams::new(0.95, 1.0, 7.1e-9).unwrap();
        let half = poisson_required_miles(&p1).unwrap();
        assert!(rel(half, -(0.05f64).ln() / 7.1e-9) < 1e-12);
        assert!(rel(half, miles / 2.0) < 1e-12);
        assert!(rel(half, 4.219e8) < 1e-3);
    }

    #[test]
    fn poisson_rejects_bad_params() {
        assert!(PoissonParams::new(1.0, 2.0, 1e-8).is_err());
        assert!(PoissonParams::new(0.0, 2.0, 1e-8).is_err());
        assert!(PoissonParams::new(0.95, 0.9, 1e-8).is_err());
        assert!(PoissonParams::new(0.95, 2.0, 0.0).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&OddProfile::standard(1.0, 1.0, 1.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(gamma(&OddProfile::standard(0.0, 0.0, 0.0, 0.0, 1.0)).unwrap(), 0.0);
        let g = gamma(&OddProfile::standard(0.2, 0.2, 0.2, 0.2, 1.0)).unwrap();
        assert!((g - 0.2).abs() < 1e-12);
    }

    #[test]
    fn gamma_reports_weight_residual() {
        let mut profile = OddProfile::standard(1.0, 1.0, 1.0, 1.0, 1.0);
        profile.dimensions[0].weight = 0.4;
        let err = gamma(&profile).unwrap_err();
        match err {
            Error::WeightSum { residual } => assert!((residual - 0.1).abs() < 1e-12),
            other => panic!("unexpected {other}"),
        }
        assert!(gamma(&OddProfile { dimensions: vec![], delta: 1.0 }).is_err());
        profile.dimensions[0].weight = 0.3;
        profile.dimensions[1].score = 1.5;
        assert!(gamma(&profile).is_err());
    }

    #[test]
    fn demonstration_examples() {
        let r = 2e4f64.powf(2.5);
        let t = demonstration_years(r, 0.9, 1.0, 1e9).unwrap();
        assert!((t - 50.91).abs() < 0.01, "{t}");
        assert_eq!(demonstration_years(1e9, 1.0, 1.0, 1e9).unwrap(), 1.0);
        let t = demonstration_years(8.438e8, 0.4, 1.0, 1e9).unwrap();
        assert!((t - 0.3375).abs() < 1e-4);
        assert!((t * 12.0 - 4.05).abs() < 0.01);
        assert!(demonstration_years(1e9, 1.0, 1.0, 0.0).is_err());
        assert!(demonstration_years(1e9, 1.0, 0.0, 1e9).is_err());
    }
}
