//! Finsler checks: the flat case, closed metric expansions against the
//! Cartesian Hessian, the inverse, and homogeneity of the builtin models.

use num_complex::Complex64;

use crate::finsler::{finsler_metric, hessian_oracle, inverse_metric, momenta, LagrangianModel};
use crate::geometry::cylindrical_to_cartesian;

use super::geometry::random_cylindrical;
use super::{check, CheckResult, VerifyConfig};

fn builtin_models() -> Vec<(&'static str, LagrangianModel)> {
    vec![
        ("euclidean", LagrangianModel::euclidean()),
        ("anisotropic-quadratic", LagrangianModel::anisotropic_quadratic()),
        ("quartic", LagrangianModel::quartic()),
    ]
}

/// The flat Lagrangian must give the identity metric and inverse.
fn euclidean_identity(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "14a");
    let model = LagrangianModel::euclidean();
    let g = finsler_metric(&model);
    let inv = inverse_metric(&model);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let chart = random_cylindrical(&mut rng);
        for tensor in [g.evaluate(&chart), inv.evaluate(&chart)] {
            let tensor = tensor.expect("flat metric is regular");
            for a in 0..3 {
                for b in 0..3 {
                    let want = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((tensor.get(&[a, b]) - want).norm());
                }
            }
        }
    }
    check(
        cfg,
        "14a",
        "flat Lagrangian gives the identity metric and inverse",
        worst,
        1e-12,
        "10 sampled charts".to_string(),
    )
}

/// Harmonic metric expansions against the Cartesian fiber Hessian.
fn metric_routes(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "14b");
    let mut worst = 0.0f64;
    for (_, model) in builtin_models().into_iter().skip(1) {
        let g = finsler_metric(&model);
        for _ in 0..10 {
            let chart = random_cylindrical(&mut rng);
            let closed = g.evaluate(&chart).expect("rhobar > 0");
            let oracle = hessian_oracle(&model, &cylindrical_to_cartesian(&chart), 1e-4)
                .expect("interior point");
            worst = worst.max(closed.distance(&oracle));
        }
    }
    check(
        cfg,
        "14b",
        "harmonic metric expansion matches the Cartesian fiber Hessian",
        worst,
        1e-5,
        "2 curved models, 10 charts each, oracle step 1e-4".to_string(),
    )
}

/// The closed inverse really inverts the metric componentwise.
fn inverse_routes(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "14c");
    let mut worst = 0.0f64;
    for (_, model) in builtin_models().into_iter().skip(1) {
        let g = finsler_metric(&model);
        let inv = inverse_metric(&model);
        for _ in 0..25 {
            let chart = random_cylindrical(&mut rng);
            let g_t = g.evaluate(&chart).expect("rhobar > 0");
            let inv_t = inv.evaluate(&chart).expect("metric is regular here");
            for a in 0..3 {
                for c in 0..3 {
                    let mut entry = Complex64::new(0.0, 0.0);
                    for b in 0..3 {
                        entry += g_t.get(&[a, b]) * inv_t.get(&[b, c]);
                    }
                    let want = if a == c { 1.0 } else { 0.0 };
                    worst = worst.max((entry - want).norm());
                }
            }
        }
    }
    check(
        cfg,
        "14c",
        "inverse metric inverts the metric at sampled charts",
        worst,
        1e-8,
        "2 curved models, 25 charts each".to_string(),
    )
}

/// Spherical symmetry confines every emitted signature to a vanishing
/// final label.
fn signature_degrees(cfg: &VerifyConfig) -> CheckResult {
    let mut violations = 0u32;
    let mut total = 0u32;
    for (_, model) in builtin_models() {
        for combination in [momenta(&model), finsler_metric(&model), inverse_metric(&model)] {
            for sig in combination.signatures() {
                total += 1;
                if sig.last_label() != 0 {
                    violations += 1;
                }
            }
        }
    }
    check(
        cfg,
        "14d",
        "momenta, metric, and inverse emit only final-label-zero signatures",
        f64::from(violations),
        0.0,
        format!("{total} signatures across 3 models"),
    )
}

/// Metric symmetry for the non-quadratic model.
fn metric_symmetry(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "f1");
    let g = finsler_metric(&LagrangianModel::quartic());
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let chart = random_cylindrical(&mut rng);
        let t = g.evaluate(&chart).expect("rhobar > 0");
        for a in 0..3 {
            for b in 0..3 {
                worst = worst.max((t.get(&[a, b]) - t.get(&[b, a])).norm());
            }
        }
    }
    check(
        cfg,
        "f1",
        "quartic metric is symmetric",
        worst,
        1e-10,
        "20 sampled charts".to_string(),
    )
}

/// Fiber 2-homogeneity of every builtin model.
fn homogeneity(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "f2");
    let mut worst = 0.0f64;
    for (_, model) in builtin_models() {
        for _ in 0..10 {
            let chart = random_cylindrical(&mut rng);
            let base = model.value(chart.r, chart.rhobar, chart.zbar);
            for s in [0.5, 2.0, 10.0] {
                let scaled = model.value(chart.r, s * chart.rhobar, s * chart.zbar);
                worst = worst.max((scaled - s * s * base).abs() / (1.0 + scaled.abs()));
            }
        }
    }
    check(
        cfg,
        "f2",
        "builtin Lagrangians are fiber 2-homogeneous",
        worst,
        1e-6,
        "3 models, 10 samples, scalings 0.5, 2, 10".to_string(),
    )
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        euclidean_identity(cfg),
        metric_routes(cfg),
        inverse_routes(cfg),
        signature_degrees(cfg),
        metric_symmetry(cfg),
        homogeneity(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finsler_suite_is_green() {
        let cfg = VerifyConfig::default();
        for result in checks(&cfg) {
            assert!(
                result.passed,
                "{}: measured {:.3e} vs tolerance {:.3e}",
                result.id, result.measured, result.tolerance
            );
        }
    }
}
