//! Geometry checks: chart consistency, exact flow invariants, the
//! finite-difference flow operators against the algebraic eigenvalues and
//! ladder coefficients, and the vertical differential against fiber
//! differences.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dtensor::{DTensorSignature, Variance};
use crate::geometry::{
    cartesian_to_cylindrical, casimir_rotation, casimir_rotation_dtensor, corotation_flow_angles,
    corotation_operator, cylindrical_to_cartesian, lie_derivative_function, rotation_flow,
    rotation_operator, rotation_operator_dtensor, spherical_to_cartesian, vertical_differential_fd,
    CylindricalChart, RadialFunction, SphericalChart, VerticalDifferential,
};
use crate::scalar::{eval_harmonic, AnglePoint, AngularTriple};

use super::{check, random_angles, CheckResult, VerifyConfig};

pub(super) fn random_cylindrical(rng: &mut ChaCha8Rng) -> CylindricalChart {
    CylindricalChart::new(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.1..(std::f64::consts::PI - 0.1)),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(0.4..1.6),
        rng.gen_range(-1.2..1.2),
        rng.gen_range(-3.0..3.0),
    )
    .expect("sampled ranges are valid")
}

fn random_spherical(rng: &mut ChaCha8Rng) -> SphericalChart {
    SphericalChart::new(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.1..(std::f64::consts::PI - 0.1)),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(0.3..1.8),
        rng.gen_range(0.1..(std::f64::consts::PI - 0.1)),
        rng.gen_range(-3.0..3.0),
    )
    .expect("sampled ranges are valid")
}

/// Ladder coefficient `sqrt((l -+ m)(l +- m + 1))` toward `m +- 1`.
fn ladder_coefficient(l: u32, m: i32, up: bool) -> f64 {
    let l = l as f64;
    let m = m as f64;
    let value = if up {
        (l - m) * (l + m + 1.0)
    } else {
        (l + m) * (l - m + 1.0)
    };
    value.max(0.0).sqrt()
}

/// Flow operators on scalar harmonics: Casimir eigenvalue, both axial
/// eigenvalues, and all four ladder actions.
fn scalar_flow_operators(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "05a");
    let h = cfg.fd_step;
    // second differences divide by h^2, so the Casimir needs the wider step
    let h2 = cfg.fd_step.sqrt();
    let points: Vec<_> = (0..3).map(|_| random_angles(&mut rng, 0.4)).collect();
    let mut worst = 0.0f64;
    for l in 0..=3u32 {
        for m in -(l as i32)..=(l as i32) {
            for n in -(l as i32)..=(l as i32) {
                let t = AngularTriple::new(l, m, n).unwrap();
                let f = |p: AnglePoint| eval_harmonic(t, p);
                let scale = 1.0 + (l * (l + 1)) as f64;
                for &p in &points {
                    let value = f(p);
                    let casimir = casimir_rotation(f, p, h2).expect("point is off the axis");
                    worst = worst
                        .max((casimir - (l * (l + 1)) as f64 * value).norm() / scale);
                    let r_z = rotation_operator(f, 3, p, h).expect("point is off the axis");
                    worst = worst.max((r_z - m as f64 * value).norm() / scale);
                    let b_z = corotation_operator(f, 3, p, h).expect("point is off the axis");
                    worst = worst.max((b_z - n as f64 * value).norm() / scale);
                    let r_1 = rotation_operator(f, 1, p, h).expect("off axis");
                    let r_2 = rotation_operator(f, 2, p, h).expect("off axis");
                    let b_1 = corotation_operator(f, 1, p, h).expect("off axis");
                    let b_2 = corotation_operator(f, 2, p, h).expect("off axis");
                    for up in [true, false] {
                        let shift = if up { 1 } else { -1 };
                        let i_unit = Complex64::new(0.0, if up { 1.0 } else { -1.0 });
                        let coeff = ladder_coefficient(l, m, up);
                        let target = if coeff == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            coeff * eval_harmonic(AngularTriple::new(l, m + shift, n).unwrap(), p)
                        };
                        worst = worst.max((r_1 + i_unit * r_2 - target).norm() / scale);
                        let coeff = ladder_coefficient(l, n, up);
                        let target = if coeff == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            coeff * eval_harmonic(AngularTriple::new(l, m, n + shift).unwrap(), p)
                        };
                        worst = worst.max((b_1 + i_unit * b_2 - target).norm() / scale);
                    }
                }
            }
        }
    }
    check(
        cfg,
        "05a",
        "flow operators reproduce scalar eigenvalues and ladder coefficients",
        worst,
        1e-5,
        format!("84 triples, l <= 3, 3 points, steps {h:.0e} and {h2:.1e}"),
    )
}

/// The same flow operators on d-tensor fields: Casimir and axial
/// eigenvalues from the last chain label, rotation ladders in `m`.
fn dtensor_flow_operators(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "05b");
    let h = cfg.fd_step;
    let h2 = cfg.fd_step.sqrt();
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for rank in 0..=2usize {
        for sig in super::dtensor::cores(rank, 3, Variance::Vector) {
            count += 1;
            let p = random_angles(&mut rng, 0.4);
            let field = |q: AnglePoint| {
                crate::dtensor::ExpandedDTensor::build_explicit(&sig).evaluate(q)
            };
            let l_k = sig.last_label();
            let scale = 1.0 + (l_k * (l_k + 1)) as f64;
            let base = field(p);

            let mut residual = casimir_rotation_dtensor(field, p, h2).expect("off axis");
            residual.add_scaled(&base, Complex64::new(-((l_k * (l_k + 1)) as f64), 0.0));
            worst = worst.max(residual.max_abs() / scale);

            let mut residual = rotation_operator_dtensor(field, 3, p, h).expect("off axis");
            residual.add_scaled(&base, Complex64::new(-(sig.m() as f64), 0.0));
            worst = worst.max(residual.max_abs() / scale);

            // co-rotations act componentwise in this frame; no pullback
            let b_plus = field(corotation_flow_angles(3, h, p).expect("off axis"));
            let mut b_z = b_plus;
            b_z.add_scaled(
                &field(corotation_flow_angles(3, -h, p).expect("off axis")),
                Complex64::new(-1.0, 0.0),
            );
            b_z.scale(Complex64::new(0.0, 1.0 / (2.0 * h)));
            b_z.add_scaled(&base, Complex64::new(-(sig.n() as f64), 0.0));
            worst = worst.max(b_z.max_abs() / scale);

            let r_1 = rotation_operator_dtensor(field, 1, p, h).expect("off axis");
            let r_2 = rotation_operator_dtensor(field, 2, p, h).expect("off axis");
            for up in [true, false] {
                let shift = if up { 1 } else { -1 };
                let mut stepped = r_1.clone();
                stepped.add_scaled(&r_2, Complex64::new(0.0, if up { 1.0 } else { -1.0 }));
                let coeff = ladder_coefficient(l_k, sig.m(), up);
                if coeff != 0.0 {
                    let target = sig
                        .with_magnetics(sig.m() + shift, sig.n())
                        .expect("ladder target stays in range");
                    let target_field =
                        crate::dtensor::ExpandedDTensor::build_explicit(&target).evaluate(p);
                    stepped.add_scaled(&target_field, Complex64::new(-coeff, 0.0));
                }
                worst = worst.max(stepped.max_abs() / scale);
            }
        }
    }
    check(
        cfg,
        "05b",
        "flow operators reproduce d-tensor eigenvalues and rotation ladders",
        worst,
        1e-5,
        format!("{count} signatures, rank <= 2, labels <= 3, steps {h:.0e} and {h2:.1e}"),
    )
}

/// Cylindrical chart round trip through Cartesian coordinates.
fn chart_round_trip(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "g1");
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = random_cylindrical(&mut rng);
        let p = cylindrical_to_cartesian(&c);
        let back = cartesian_to_cylindrical(&p).expect("point is off the axis");
        for (a, b) in [
            (c.r, back.r),
            (c.theta, back.theta),
            (c.phi, back.phi),
            (c.rhobar, back.rhobar),
            (c.zbar, back.zbar),
            (c.beta, back.beta),
        ] {
            worst = worst.max((a - b).abs());
        }
    }
    check(
        cfg,
        "g1",
        "cylindrical chart round trips through Cartesian coordinates",
        worst,
        1e-12,
        "50 sampled charts".to_string(),
    )
}

/// Spherical and cylindrical fiber charts place the same points.
fn chart_agreement(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "g2");
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = random_spherical(&mut rng);
        let direct = spherical_to_cartesian(&s);
        let via_cylindrical = cylindrical_to_cartesian(&s.to_cylindrical());
        for a in 0..3 {
            worst = worst.max((direct.x[a] - via_cylindrical.x[a]).abs());
            worst = worst.max((direct.xdot[a] - via_cylindrical.xdot[a]).abs());
        }
    }
    check(
        cfg,
        "g2",
        "spherical and cylindrical charts agree through Cartesian coordinates",
        worst,
        1e-12,
        "50 sampled charts".to_string(),
    )
}

/// Nested commutators close the rotation algebra and the two families
/// commute.
fn flow_algebra(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "g3");
    let inner = cfg.fd_step;
    let outer = 1e-3;
    let t1 = AngularTriple::new(2, 1, -1).unwrap();
    let t2 = AngularTriple::new(3, -2, 1).unwrap();
    let f = |p: AnglePoint| eval_harmonic(t1, p) + 0.6 * eval_harmonic(t2, p);
    let points: Vec<_> = (0..3).map(|_| random_angles(&mut rng, 0.5)).collect();
    let mut worst = 0.0f64;
    for &p in &points {
        for (j, k, l) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
            let r_after_r = |q: AnglePoint| {
                rotation_operator(f, k, q, inner).expect("interior point")
            };
            let r_after_r_swapped = |q: AnglePoint| {
                rotation_operator(f, j, q, inner).expect("interior point")
            };
            let commutator = rotation_operator(r_after_r, j, p, outer).expect("interior point")
                - rotation_operator(r_after_r_swapped, k, p, outer).expect("interior point");
            let expected =
                Complex64::new(0.0, 1.0) * rotation_operator(f, l, p, inner).expect("interior");
            worst = worst.max((commutator - expected).norm());
        }
        for j in 1..=3usize {
            for k in 1..=3usize {
                let b_then_r = |q: AnglePoint| {
                    rotation_operator(f, k, q, inner).expect("interior point")
                };
                let r_then_b = |q: AnglePoint| {
                    corotation_operator(f, j, q, inner).expect("interior point")
                };
                let commutator = corotation_operator(b_then_r, j, p, outer).expect("interior")
                    - rotation_operator(r_then_b, k, p, outer).expect("interior");
                worst = worst.max(commutator.norm());
            }
        }
    }
    check(
        cfg,
        "g3",
        "rotation flows close the so(3) algebra and commute with co-rotations",
        worst,
        1e-4,
        format!("3 points, nested steps {inner:.0e} and {outer:.0e}"),
    )
}

/// Functions of the radial coordinates alone are annihilated by the
/// lifted rotations.
fn radial_invariance(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "g4");
    let f = |p: &crate::geometry::CartesianPoint| -> Complex64 {
        let c = cartesian_to_cylindrical(p).expect("point is off the axis");
        let rbar = c.rhobar.hypot(c.zbar);
        let alpha = c.rhobar.atan2(c.zbar);
        Complex64::new(
            0.7 * c.r - 1.3 * rbar + alpha.cos() + 0.4 * c.r * rbar * rbar * alpha.sin(),
            0.0,
        )
    };
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p = cylindrical_to_cartesian(&random_cylindrical(&mut rng));
        for j in 1..=3 {
            worst = worst.max(lie_derivative_function(f, j, &p, cfg.fd_step).norm());
        }
    }
    check(
        cfg,
        "g4",
        "rotation flows annihilate functions of the radial coordinates",
        worst,
        1e-6,
        "5 points, all three flows".to_string(),
    )
}

/// The exact flows preserve both norms and the fiber pairing.
fn flow_isometry(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "g5");
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = cylindrical_to_cartesian(&random_cylindrical(&mut rng));
        let j = rng.gen_range(1..=3);
        let t = rng.gen_range(-3.0..3.0);
        let q = rotation_flow(j, t, &p);
        let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        worst = worst.max((dot(&p.x, &p.x) - dot(&q.x, &q.x)).abs());
        worst = worst.max((dot(&p.xdot, &p.xdot) - dot(&q.xdot, &q.xdot)).abs());
        worst = worst.max((dot(&p.x, &p.xdot) - dot(&q.x, &q.xdot)).abs());
    }
    check(
        cfg,
        "g5",
        "rotation flows preserve norms and the fiber pairing",
        worst,
        1e-12,
        "50 sampled flows".to_string(),
    )
}

/// Halving the step divides the central-difference error by about four.
fn convergence_order(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "g6");
    let t = AngularTriple::new(3, 2, -1).unwrap();
    let f = |p: AnglePoint| eval_harmonic(t, p);
    let error_at = |h: f64, points: &[AnglePoint]| -> f64 {
        points
            .iter()
            .map(|&p| {
                (rotation_operator(f, 3, p, h).expect("interior point") - 2.0 * f(p)).norm()
            })
            .fold(0.0, f64::max)
    };
    let points: Vec<_> = (0..3).map(|_| random_angles(&mut rng, 0.5)).collect();
    let fine = error_at(1e-3, &points);
    let coarse = error_at(2e-3, &points);
    let ratio = coarse / fine;
    check(
        cfg,
        "g6",
        "central differences converge at second order",
        (ratio - 4.0).abs(),
        0.5,
        format!("error ratio {coarse:.3e} / {fine:.3e} = {ratio:.3}"),
    )
}

/// Closed vertical differentials against Cartesian fiber differences.
fn vertical_routes(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "13");
    let functions: Vec<(&str, RadialFunction)> = vec![
        (
            "rhobar^2",
            RadialFunction::new(
                Arc::new(|_, rho, _| rho * rho),
                Arc::new(|_, rho, _| 2.0 * rho),
                Arc::new(|_, _, _| 0.0),
            ),
        ),
        (
            "zbar^2 + r rhobar",
            RadialFunction::new(
                Arc::new(|r, rho, z| z * z + r * rho),
                Arc::new(|r, _, _| r),
                Arc::new(|_, _, z| 2.0 * z),
            ),
        ),
        (
            "rhobar^2 zbar - 2 zbar^3",
            RadialFunction::new(
                Arc::new(|_, rho, z| rho * rho * z - 2.0 * z * z * z),
                Arc::new(|_, rho, z| 2.0 * rho * z),
                Arc::new(|_, rho, z| rho * rho - 6.0 * z * z),
            ),
        ),
    ];
    let signatures = [
        "0|;0,0;",
        "1|;0,1;",
        "2|;0,-1;",
        "1|0;0,1;c",
        "1|2;2,1;v",
        "2|1;1,0;v",
        "0|1;1,0;c",
    ];
    let charts: Vec<_> = (0..5).map(|_| random_cylindrical(&mut rng)).collect();
    let mut worst = 0.0f64;
    for (_, f) in &functions {
        for s in signatures {
            let sig: DTensorSignature = s.parse().expect("valid signature");
            let vd = VerticalDifferential::new(f.clone(), sig.clone());
            for chart in &charts {
                let closed = vd.evaluate(chart).expect("rhobar > 0");
                let expanded = vd
                    .expand(chart.r, chart.rhobar, chart.zbar)
                    .expect("rhobar > 0")
                    .evaluate(chart.angles().expect("interior point"));
                let p = cylindrical_to_cartesian(chart);
                let oracle = vertical_differential_fd(f, &sig, &p, 1e-4).expect("off axis");
                worst = worst.max(closed.distance(&oracle));
                worst = worst.max(expanded.distance(&oracle));
            }
        }
    }
    check(
        cfg,
        "13",
        "vertical differentials match Cartesian fiber differences",
        worst,
        1e-5,
        format!(
            "{} radial functions x {} signatures x {} charts, both closed routes",
            functions.len(),
            signatures.len(),
            charts.len()
        ),
    )
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        scalar_flow_operators(cfg),
        dtensor_flow_operators(cfg),
        vertical_routes(cfg),
        chart_round_trip(cfg),
        chart_agreement(cfg),
        flow_algebra(cfg),
        radial_invariance(cfg),
        flow_isometry(cfg),
        convergence_order(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_checks_are_green() {
        let cfg = VerifyConfig::default();
        for result in [
            chart_round_trip(&cfg),
            chart_agreement(&cfg),
            flow_isometry(&cfg),
            radial_invariance(&cfg),
        ] {
            assert!(
                result.passed,
                "{}: measured {:.3e} vs tolerance {:.3e}",
                result.id, result.measured, result.tolerance
            );
        }
    }
}
