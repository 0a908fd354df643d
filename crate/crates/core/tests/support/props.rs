use av_horizon::complexity::{hpc_horizon_years, ComputeEnv, Magnitude};
use av_horizon::reliability::{
    crow_failure_rate, crow_required_miles, demonstration_years, gamma, poisson_required_miles,
    CrowAmsaaParams, OddDimension, OddProfile, PoissonParams,
};
use av_horizon::timeline::{compose_total, PhaseDurations};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Cases generated per property.
pub const CASES: u32 = 256;

pub type Outcome = Result<(), String>;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(CASES)
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn crow(alpha: f64, beta: f64, severity: f64) -> CrowAmsaaParams {
    CrowAmsaaParams::new(alpha, beta, severity).unwrap()
}

/// Crow parameters with a target rate below the initial rate; `log_ratio`
/// is log10(alpha * s / lambda).
fn crow_case() -> impl Strategy<Value = (CrowAmsaaParams, f64)> {
    (-6.0f64..0.0, 0.2f64..0.9, 1.0f64..10.0, 0.1f64..8.0).prop_map(
        |(log_alpha, beta, s, log_ratio)| {
            let p = crow(10f64.powf(log_alpha), beta, s);
            let lambda = p.initial_rate() / 10f64.powf(log_ratio);
            (p, lambda)
        },
    )
}

fn phases() -> impl Strategy<Value = PhaseDurations> {
    (
        0.0f64..100.0,
        0.0f64..300.0,
        0.0f64..=1.0,
        0.0f64..5.0,
        0.0f64..10.0,
    )
        .prop_map(
            |(t_comp, t_crow_total, f, t_poisson, t_prod_reg)| PhaseDurations {
                t_comp,
                t_crow_total,
                f,
                t_poisson,
                t_prod_reg,
            },
        )
}

fn total(p: &PhaseDurations) -> f64 {
    compose_total(p, 2024).unwrap().t_total
}

pub fn crow_round_trip() -> Outcome {
    runner()
        .run(&crow_case(), |(p, lambda)| {
            let miles = crow_required_miles(&p, lambda).unwrap();
            let back = crow_failure_rate(&p, miles).unwrap();
            prop_assert!(rel(back, lambda) < 1e-9, "{back} vs {lambda}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn crow_monotone_in_alpha_and_severity() -> Outcome {
    runner()
        .run(&(crow_case(), 1.01f64..10.0), |((p, lambda), k)| {
            let base = crow_required_miles(&p, lambda).unwrap();
            let alpha_up = crow(p.alpha.min(1.0 / k) * k, p.beta, p.severity);
            if alpha_up.alpha > p.alpha {
                prop_assert!(crow_required_miles(&alpha_up, lambda).unwrap() > base);
            }
            let s_up = crow(p.alpha, p.beta, p.severity * k);
            prop_assert!(crow_required_miles(&s_up, lambda).unwrap() > base);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn crow_decreasing_in_beta_and_lambda() -> Outcome {
    runner()
        .run(
            &(crow_case(), 0.001f64..0.09, 1.01f64..10.0),
            |((p, lambda), db, k)| {
                let base = crow_required_miles(&p, lambda).unwrap();
                let beta_up = crow(p.alpha, p.beta + db, p.severity);
                prop_assert!(crow_required_miles(&beta_up, lambda).unwrap() < base);
                prop_assert!(crow_required_miles(&p, lambda * k).unwrap() < base);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn poisson_linear_in_safety_factor_and_inverse_rate() -> Outcome {
    runner()
        .run(
            &(0.5f64..0.999, 1.0f64..5.0, -10.0f64..-6.0, 1.0f64..20.0),
            |(confidence, sf, log_lambda, k)| {
                let lambda = 10f64.powf(log_lambda);
                let base =
                    poisson_required_miles(&PoissonParams::new(confidence, sf, lambda).unwrap())
                        .unwrap();
                let sf_k = poisson_required_miles(
                    &PoissonParams::new(confidence, sf * k, lambda).unwrap(),
                )
                .unwrap();
                let lambda_k = poisson_required_miles(
                    &PoissonParams::new(confidence, sf, lambda / k).unwrap(),
                )
                .unwrap();
                prop_assert!(rel(sf_k, k * base) < 1e-12);
                prop_assert!(rel(lambda_k, k * base) < 1e-12);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn horizon_doubling_law() -> Outcome {
    runner()
        .run(&(0.0f64..20.0, 0u32..40, 0.5f64..5.0), |(excess, k, td)| {
            let env = ComputeEnv::new(Magnitude::from_log10(13.0).unwrap(), td, 0.1).unwrap();
            let demand = Magnitude::from_log10(13.0 + excess).unwrap();
            let doubled = demand * Magnitude::from_power(2.0, f64::from(k)).unwrap();
            let t0 = hpc_horizon_years(demand, &env).unwrap();
            let tk = hpc_horizon_years(doubled, &env).unwrap();
            prop_assert!((tk - t0 - f64::from(k) * td).abs() < 1e-9, "{t0} {tk}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn compose_monotone_in_every_phase() -> Outcome {
    runner()
        .run(&(phases(), 0usize..4, 0.0f64..50.0), |(p, which, bump)| {
            let mut q = p;
            match which {
                0 => q.t_comp += bump,
                1 => q.t_crow_total += bump,
                2 => q.t_poisson += bump,
                _ => q.t_prod_reg += bump,
            }
            prop_assert!(total(&q) >= total(&p));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn compose_f_identities() -> Outcome {
    runner()
        .run(&phases(), |p| {
            let serial = PhaseDurations { f: 0.0, ..p };
            let overlapped = PhaseDurations { f: 1.0, ..p };
            let tail = p.t_poisson + p.t_prod_reg;
            prop_assert!((total(&serial) - (p.t_comp + p.t_crow_total + tail)).abs() < 1e-9);
            prop_assert!((total(&overlapped) - (p.t_comp.max(p.t_crow_total) + tail)).abs() < 1e-9);
            // any overlap only helps
            prop_assert!(total(&p) <= total(&serial) + 1e-9);
            prop_assert!(total(&p) >= total(&overlapped) - 1e-9);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn gating_ignores_tail_phases() -> Outcome {
    runner()
        .run(&(phases(), 0.0f64..10.0, 0.0f64..10.0), |(p, dp, dr)| {
            let q = PhaseDurations {
                t_poisson: p.t_poisson + dp,
                t_prod_reg: p.t_prod_reg + dr,
                ..p
            };
            prop_assert_eq!(
                compose_total(&p, 2024).unwrap().gating,
                compose_total(&q, 2024).unwrap().gating
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn gamma_invariant_under_permutation() -> Outcome {
    runner()
        .run(
            &(
                prop::collection::vec((0.01f64..1.0, 0.0f64..=1.0), 1..8),
                any::<u64>(),
            ),
            |(raw, seed)| {
                let sum: f64 = raw.iter().map(|(w, _)| w).sum();
                let dims: Vec<OddDimension> = raw
                    .iter()
                    .enumerate()
                    .map(|(i, (w, c))| OddDimension::new(format!("d{i}"), w / sum, *c))
                    .collect();
                let mut shuffled = dims.clone();
                let len = shuffled.len();
                for i in (1..len).rev() {
                    shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
                }
                let profile = |dimensions| OddProfile {
                    dimensions,
                    delta: 1.0,
                };
                let a = gamma(&profile(dims)).unwrap();
                let b = gamma(&profile(shuffled)).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn annual_miles_scaling() -> Outcome {
    runner()
        .run(
            &(6.0f64..15.0, 0.01f64..2.0, 0.01f64..=1.0, 6.0f64..11.0),
            |(log_miles, g, delta, log_m)| {
                let miles = 10f64.powf(log_miles);
                let m = 10f64.powf(log_m);
                let base = demonstration_years(miles, g, delta, m).unwrap();
                let faster = demonstration_years(miles, g, delta, m * 10.0).unwrap();
                prop_assert!(rel(faster, base / 10.0) < 1e-12);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub type Property = (&'static str, fn() -> Outcome);

pub const ALL: [Property; 10] = [
    ("crow_round_trip", crow_round_trip),
    (
        "crow_monotone_in_alpha_and_severity",
        crow_monotone_in_alpha_and_severity,
    ),
    (
        "crow_decreasing_in_beta_and_lambda",
        crow_decreasing_in_beta_and_lambda,
    ),
    (
        "poisson_linear_in_safety_factor_and_inverse_rate",
        poisson_linear_in_safety_factor_and_inverse_rate,
    ),
    ("horizon_doubling_law", horizon_doubling_law),
    (
        "compose_monotone_in_every_phase",
        compose_monotone_in_every_phase,
    ),
    ("compose_f_identities", compose_f_identities),
    ("gating_ignores_tail_phases", gating_ignores_tail_phases),
    (
        "gamma_invariant_under_permutation",
        gamma_invariant_under_permutation,
    ),
    ("annual_miles_scaling", annual_miles_scaling),
];
