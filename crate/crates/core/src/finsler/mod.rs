//! Spherically symmetric Finsler Lagrangians and their harmonic d-tensor
//! expansions: canonical momenta, the metric, and its inverse.
//!
//! A symmetric Lagrangian depends on the fiber only through `rhobar` and
//! `zbar`; every derived object then closes over degree 0 and 2 harmonic
//! d-tensors with radial coefficient functions. Coefficients stay
//! unevaluated until a chart point binds them.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dtensor::{ComponentTensor, DTensorSignature, HarmonicCombination, Variance};
use crate::geometry::{cartesian_to_cylindrical, CartesianPoint, CylindricalChart, RadialFn};
use crate::{Error, Result};

/// Degeneracy guard threshold for the inverse metric: the denominator is
/// compared against this fraction of the second-derivative scale.
pub const DEFAULT_DEGENERACY_THRESHOLD: f64 = 1e-10;

fn richardson_first(f: &RadialFn, r: f64, rho: f64, z: f64, axis: usize, h: f64) -> f64 {
    let shift = |s: f64| match axis {
        0 => (f)(r, rho + s, z),
        _ => (f)(r, rho, z + s),
    };
    let d = |s: f64| (shift(s) - shift(-s)) / (2.0 * s);
    (4.0 * d(h) - d(2.0 * h)) / 3.0
}

fn richardson_second(f: &RadialFn, r: f64, rho: f64, z: f64, ax: usize, bx: usize, h: f64) -> f64 {
    let at = |drho: f64, dz: f64| (f)(r, rho + drho, z + dz);
    let d = |s: f64| {
        if ax == bx {
            let (p, c, m) = match ax {
                0 => (at(s, 0.0), at(0.0, 0.0), at(-s, 0.0)),
                _ => (at(0.0, s), at(0.0, 0.0), at(0.0, -s)),
            };
            (p - 2.0 * c + m) / (s * s)
        } else {
            (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s)
        }
    };
    (4.0 * d(h) - d(2.0 * h)) / 3.0
}

/// A fiber-spherically-symmetric Lagrangian with its five fiber partials.
#[derive(Clone)]
pub struct LagrangianModel {
    value: RadialFn,
    l_rho: RadialFn,
    l_z: RadialFn,
    l_rho_rho: RadialFn,
    l_rho_z: RadialFn,
    l_z_z: RadialFn,
}

impl std::fmt::Debug for LagrangianModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LagrangianModel").finish_non_exhaustive()
    }
}

impl LagrangianModel {
    pub fn new(
        value: RadialFn,
        l_rho: RadialFn,
        l_z: RadialFn,
        l_rho_rho: RadialFn,
        l_rho_z: RadialFn,
        l_z_z: RadialFn,
    ) -> Self {
        LagrangianModel { value, l_rho, l_z, l_rho_rho, l_rho_z, l_z_z }
    }

    /// Derives all partials from the value by Richardson-extrapolated
    /// central differences. First derivatives use the base step, second
    /// derivatives its square root, both scaled to the fiber magnitude.
    pub fn from_value(value: RadialFn, step: f64) -> Self {
        let scaled = move |rho: f64, z: f64, s: f64| s * rho.hypot(z).max(1.0);
        let first = |axis: usize| {
            let v = Arc::clone(&value);
            let f: RadialFn = Arc::new(move |r, rho, z| {
                richardson_first(&v, r, rho, z, axis, scaled(rho, z, step))
            });
            f
        };
        let second = |ax: usize, bx: usize| {
            let v = Arc::clone(&value);
            let f: RadialFn = Arc::new(move |r, rho, z| {
                richardson_second(&v, r, rho, z, ax, bx, scaled(rho, z, step.sqrt()))
            });
            f
        };
        LagrangianModel {
            l_rho: first(0),
            l_z: first(1),
            l_rho_rho: second(0, 0),
            l_rho_z: second(0, 1),
            l_z_z: second(1, 1),
            value,
        }
    }

    /// Flat Lagrangian `rhobar^2 + zbar^2`.
    pub fn euclidean() -> Self {
        LagrangianModel::new(
            Arc::new(|_, rho, z| rho * rho + z * z),
            Arc::new(|_, rho, _| 2.0 * rho),
            Arc::new(|_, _, z| 2.0 * z),
            Arc::new(|_, _, _| 2.0),
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, _| 2.0),
        )
    }

    /// Quadratic model `rhobar^2 + 2 zbar^2` with a direction-dependent
    /// weight on the radial fiber axis.
    pub fn anisotropic_quadratic() -> Self {
        LagrangianModel::new(
            Arc::new(|_, rho, z| rho * rho + 2.0 * z * z),
            Arc::new(|_, rho, _| 2.0 * rho),
            Arc::new(|_, _, z| 4.0 * z),
            Arc::new(|_, _, _| 2.0),
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, _| 4.0),
        )
    }

    /// Genuinely non-quadratic model `sqrt(rhobar^4 + rhobar^2 zbar^2 + zbar^4)`.
    pub fn quartic() -> Self {
        let q = |rho: f64, z: f64| rho.powi(4) + rho * rho * z * z + z.powi(4);
        let q_rho = |rho: f64, z: f64| 2.0 * rho.powi(3) + rho * z * z;
        let q_z = |rho: f64, z: f64| 2.0 * z.powi(3) + rho * rho * z;
        LagrangianModel::new(
            Arc::new(move |_, rho, z| q(rho, z).sqrt()),
            Arc::new(move |_, rho, z| q_rho(rho, z) / q(rho, z).sqrt()),
            Arc::new(move |_, rho, z| q_z(rho, z) / q(rho, z).sqrt()),
            Arc::new(move |_, rho, z| {
                (6.0 * rho * rho + z * z) / q(rho, z).sqrt()
                    - q_rho(rho, z).powi(2) / q(rho, z).powf(1.5)
            }),
            Arc::new(move |_, rho, z| {
                2.0 * rho * z / q(rho, z).sqrt()
                    - q_rho(rho, z) * q_z(rho, z) / q(rho, z).powf(1.5)
            }),
            Arc::new(move |_, rho, z| {
                (6.0 * z * z + rho * rho) / q(rho, z).sqrt()
                    - q_z(rho, z).powi(2) / q(rho, z).powf(1.5)
            }),
        )
    }

    pub fn value(&self, r: f64, rho: f64, z: f64) -> f64 {
        (self.value)(r, rho, z)
    }

    pub fn l_rho(&self, r: f64, rho: f64, z: f64) -> f64 {
        (self.l_rho)(r, rho, z)
    }

    pub fn l_z(&self, r: f64, rho: f64, z: f64) -> f64 {
        (self.l_z)(r, rho, z)
    }

    pub fn l_rho_rho(&self, r: f64, rho: f64, z: f64) -> f64 {
        (self.l_rho_rho)(r, rho, z)
    }

    pub fn l_rho_z(&self, r: f64, rho: f64, z: f64) -> f64 {
        (self.l_rho_z)(r, rho, z)
    }

    pub fn l_z_z(&self, r: f64, rho: f64, z: f64) -> f64 {
        (self.l_z_z)(r, rho, z)
    }

    /// Checks fiber 2-homogeneity `L(r, s*rho, s*z) = s^2 L(r, rho, z)` at
    /// the given samples and scalings.
    pub fn check_homogeneity(
        &self,
        samples: &[(f64, f64, f64)],
        scalings: &[f64],
        tol: f64,
    ) -> Result<()> {
        for &(r, rho, z) in samples {
            let base = self.value(r, rho, z);
            for &s in scalings {
                let scaled = self.value(r, s * rho, s * z);
                let err = (scaled - s * s * base).abs();
                if err > tol * (1.0 + scaled.abs()) {
                    return Err(Error::NotHomogeneous(format!(
                        "L(r, {s}*rhobar, {s}*zbar) deviates from {s}^2 L by {err:.3e} \
                         at (r, rhobar, zbar) = ({r}, {rho}, {z})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cross-checks the stored partials against central differences of the
    /// value and of the first partials.
    pub fn check_partials(&self, samples: &[(f64, f64, f64)], tol: f64) -> Result<()> {
        for &(r, rho, z) in samples {
            let h = 1e-5 * rho.hypot(z).max(1.0);
            let checks = [
                ("l_rho", self.l_rho(r, rho, z), richardson_first(&self.value, r, rho, z, 0, h)),
                ("l_z", self.l_z(r, rho, z), richardson_first(&self.value, r, rho, z, 1, h)),
                (
                    "l_rho_rho",
                    self.l_rho_rho(r, rho, z),
                    richardson_first(&self.l_rho, r, rho, z, 0, h),
                ),
                (
                    "l_rho_z",
                    self.l_rho_z(r, rho, z),
                    richardson_first(&self.l_rho, r, rho, z, 1, h),
                ),
                (
                    "l_z_z",
                    self.l_z_z(r, rho, z),
                    richardson_first(&self.l_z, r, rho, z, 1, h),
                ),
            ];
            let scale = 1.0 + self.value(r, rho, z).abs();
            for (name, stored, fd) in checks {
                if (stored - fd).abs() > tol * scale {
                    return Err(Error::InconsistentPartials(format!(
                        "{name} deviates from the finite-difference value by {:.3e} \
                         at (r, rhobar, zbar) = ({r}, {rho}, {z})",
                        (stored - fd).abs()
                    )));
                }
            }
        }
        Ok(())
    }
}

type RadialCoefficient = Arc<dyn Fn(f64, f64, f64) -> Result<f64> + Send + Sync>;

/// Harmonic d-tensor combination whose coefficients are functions of the
/// radial coordinates. Evaluation binds `(r, rhobar, zbar)`.
#[derive(Clone)]
pub struct RadialCombination {
    variances: Vec<Variance>,
    terms: Vec<(DTensorSignature, RadialCoefficient)>,
}

impl std::fmt::Debug for RadialCombination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialCombination")
            .field("variances", &self.variances)
            .field("terms", &self.terms.iter().map(|(s, _)| s).collect::<Vec<_>>())
            .finish()
    }
}

impl RadialCombination {
    pub fn new(variances: Vec<Variance>) -> Self {
        RadialCombination { variances, terms: Vec::new() }
    }

    pub fn push(&mut self, sig: DTensorSignature, coefficient: RadialCoefficient) -> Result<()> {
        if sig.variances() != self.variances {
            return Err(Error::VarianceMismatch(format!(
                "term {sig} does not match the combination pattern"
            )));
        }
        self.terms.push((sig, coefficient));
        Ok(())
    }

    pub fn variances(&self) -> &[Variance] {
        &self.variances
    }

    pub fn signatures(&self) -> impl Iterator<Item = &DTensorSignature> {
        self.terms.iter().map(|(s, _)| s)
    }

    /// Binds the radial coordinates, producing a numeric combination.
    pub fn at(&self, r: f64, rhobar: f64, zbar: f64) -> Result<HarmonicCombination> {
        let mut out = HarmonicCombination::zero(self.variances.clone());
        for (sig, coefficient) in &self.terms {
            let c = coefficient(r, rhobar, zbar)?;
            if c != 0.0 {
                out.add_term(sig.clone(), Complex64::new(c, 0.0))?;
            }
        }
        Ok(out)
    }

    /// Componentwise value at a chart point.
    pub fn evaluate(&self, chart: &CylindricalChart) -> Result<ComponentTensor> {
        Ok(self
            .at(chart.r, chart.rhobar, chart.zbar)?
            .evaluate(chart.angles()?))
    }
}

fn metric_signature(l0: u32, n: i32, variance: Variance) -> DTensorSignature {
    DTensorSignature::new(l0, vec![1, 0], 0, n, vec![variance; 2])
        .expect("degree 0 and 2 metric signatures are always valid")
}

fn momentum_signature(n: i32) -> DTensorSignature {
    DTensorSignature::new(1, vec![0], 0, n, vec![Variance::Covector])
        .expect("degree-1 covector signatures are always valid")
}

/// Canonical momenta: half the vertical differential of the Lagrangian.
pub fn momenta(model: &LagrangianModel) -> RadialCombination {
    let mut out = RadialCombination::new(vec![Variance::Covector]);
    let m = model.clone();
    out.push(
        momentum_signature(0),
        Arc::new(move |r, rho, z| Ok(-0.5 * m.l_z(r, rho, z))),
    )
    .expect("covector pattern matches");
    for n in [1i32, -1] {
        let m = model.clone();
        let sign = -f64::from(n);
        out.push(
            momentum_signature(n),
            Arc::new(move |r, rho, z| Ok(sign * m.l_rho(r, rho, z) / (2.0 * SQRT_2))),
        )
        .expect("covector pattern matches");
    }
    out
}

/// The Finsler metric: half the fiber Hessian of the Lagrangian in
/// harmonic form. Binding requires `rhobar > 0`.
pub fn finsler_metric(model: &LagrangianModel) -> RadialCombination {
    let mut out = RadialCombination::new(vec![Variance::Covector; 2]);
    let cov = Variance::Covector;
    let guard = |rho: f64| -> Result<()> {
        if rho <= 0.0 {
            Err(Error::ChartSingularity(
                "the metric expansion needs rhobar > 0".into(),
            ))
        } else {
            Ok(())
        }
    };
    let m = model.clone();
    out.push(
        metric_signature(0, 0, cov),
        Arc::new(move |r, rho, z| {
            guard(rho)?;
            Ok(-(m.l_rho(r, rho, z) / rho + m.l_rho_rho(r, rho, z) + m.l_z_z(r, rho, z))
                / (2.0 * 3.0f64.sqrt()))
        }),
    )
    .expect("pattern matches");
    let m = model.clone();
    out.push(
        metric_signature(2, 0, cov),
        Arc::new(move |r, rho, z| {
            guard(rho)?;
            Ok(
                -(m.l_rho(r, rho, z) / rho + m.l_rho_rho(r, rho, z)
                    - 2.0 * m.l_z_z(r, rho, z))
                    / (2.0 * 6.0f64.sqrt()),
            )
        }),
    )
    .expect("pattern matches");
    for n in [1i32, -1] {
        let m = model.clone();
        let sign = f64::from(n);
        out.push(
            metric_signature(2, n, cov),
            Arc::new(move |r, rho, z| Ok(sign * 0.5 * m.l_rho_z(r, rho, z))),
        )
        .expect("pattern matches");
    }
    for n in [2i32, -2] {
        let m = model.clone();
        out.push(
            metric_signature(2, n, cov),
            Arc::new(move |r, rho, z| {
                guard(rho)?;
                Ok(0.25 * (m.l_rho_rho(r, rho, z) - m.l_rho(r, rho, z) / rho))
            }),
        )
        .expect("pattern matches");
    }
    out
}

/// The inverse Finsler metric with the default degeneracy threshold.
pub fn inverse_metric(model: &LagrangianModel) -> RadialCombination {
    inverse_metric_with_threshold(model, DEFAULT_DEGENERACY_THRESHOLD)
}

/// The inverse Finsler metric. Binding rejects points where the
/// denominator `L_rho * (L_rhoz^2 - L_rhorho * L_zz)` falls below
/// `threshold` relative to the second-derivative scale.
pub fn inverse_metric_with_threshold(
    model: &LagrangianModel,
    threshold: f64,
) -> RadialCombination {
    let mut out = RadialCombination::new(vec![Variance::Vector; 2]);
    let vec = Variance::Vector;
    let denominator = move |m: &LagrangianModel, r: f64, rho: f64, z: f64| -> Result<(f64, f64)> {
        if rho <= 0.0 {
            return Err(Error::ChartSingularity(
                "the inverse metric expansion needs rhobar > 0".into(),
            ));
        }
        let d = m.l_rho_z(r, rho, z).powi(2) - m.l_rho_rho(r, rho, z) * m.l_z_z(r, rho, z);
        let l_rho = m.l_rho(r, rho, z);
        let scale = (m.l_rho(r, rho, z) / rho).abs()
            + m.l_rho_rho(r, rho, z).abs()
            + m.l_z_z(r, rho, z).abs()
            + m.l_rho_z(r, rho, z).abs();
        // <= keeps the identically zero metric caught, where scale is 0 too
        if !(l_rho * d).is_finite() || (l_rho * d).abs() <= threshold * rho * scale.powi(3) {
            return Err(Error::DegenerateMetric(format!(
                "denominator {:.3e} below threshold at (r, rhobar, zbar) = ({r}, {rho}, {z})",
                l_rho * d
            )));
        }
        Ok((l_rho, d))
    };
    let m = model.clone();
    out.push(
        metric_signature(0, 0, vec),
        Arc::new(move |r, rho, z| {
            let (l_rho, d) = denominator(&m, r, rho, z)?;
            let num = l_rho * (m.l_rho_rho(r, rho, z) + m.l_z_z(r, rho, z)) - rho * d;
            Ok(2.0 / 3.0f64.sqrt() * num / (l_rho * d))
        }),
    )
    .expect("pattern matches");
    let m = model.clone();
    out.push(
        metric_signature(2, 0, vec),
        Arc::new(move |r, rho, z| {
            let (l_rho, d) = denominator(&m, r, rho, z)?;
            let num = l_rho * (2.0 * m.l_rho_rho(r, rho, z) - m.l_z_z(r, rho, z)) + rho * d;
            Ok(-(2.0f64.sqrt() / 3.0f64.sqrt()) * num / (l_rho * d))
        }),
    )
    .expect("pattern matches");
    for n in [1i32, -1] {
        let m = model.clone();
        let sign = f64::from(n);
        out.push(
            metric_signature(2, n, vec),
            Arc::new(move |r, rho, z| {
                let (_, d) = denominator(&m, r, rho, z)?;
                Ok(sign * 2.0 * m.l_rho_z(r, rho, z) / d)
            }),
        )
        .expect("pattern matches");
    }
    for n in [2i32, -2] {
        let m = model.clone();
        out.push(
            metric_signature(2, n, vec),
            Arc::new(move |r, rho, z| {
                let (l_rho, d) = denominator(&m, r, rho, z)?;
                let num = l_rho * m.l_z_z(r, rho, z) + rho * d;
                Ok(-num / (l_rho * d))
            }),
        )
        .expect("pattern matches");
    }
    out
}

/// Independent check value for the metric: half the fiber Hessian of the
/// Lagrangian by Cartesian central differences in `xdot`, one Richardson
/// level. Works directly from the value, bypassing the stored partials
/// and the harmonic expansion.
pub fn hessian_oracle(model: &LagrangianModel, p: &CartesianPoint, step: f64) -> Result<ComponentTensor> {
    let value = |xdot: [f64; 3]| -> Result<f64> {
        let q = CartesianPoint { x: p.x, xdot };
        let c = cartesian_to_cylindrical(&q)?;
        Ok(model.value(c.r, c.rhobar, c.zbar))
    };
    let fiber_norm = (p.xdot[0].powi(2) + p.xdot[1].powi(2) + p.xdot[2].powi(2)).sqrt();
    let h = step * fiber_norm.max(1.0);
    let mut out = ComponentTensor::zeros(vec![Variance::Covector; 2]);
    for a in 0..3 {
        for b in a..3 {
            let d = |s: f64| -> Result<f64> {
                let mut shifted = p.xdot;
                if a == b {
                    shifted[a] += s;
                    let plus = value(shifted)?;
                    shifted[a] -= 2.0 * s;
                    let minus = value(shifted)?;
                    Ok((plus - 2.0 * value(p.xdot)? + minus) / (s * s))
                } else {
                    let mut total = 0.0;
                    for (sa, sb, w) in [(s, s, 1.0), (s, -s, -1.0), (-s, s, -1.0), (-s, -s, 1.0)] {
                        shifted = p.xdot;
                        shifted[a] += sa;
                        shifted[b] += sb;
                        total += w * value(shifted)?;
                    }
                    Ok(total / (4.0 * s * s))
                }
            };
            let second = (4.0 * d(h)? - d(2.0 * h)?) / 3.0;
            let g = Complex64::new(0.5 * second, 0.0);
            out.set(&[a, b], g);
            if a != b {
                out.set(&[b, a], g);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_chart() -> CylindricalChart {
        CylindricalChart::new(1.7, 1.1, 0.6, 0.9, -0.4, 2.3).unwrap()
    }

    fn unit_direction(p: &CartesianPoint) -> [f64; 3] {
        let r = (p.x[0].powi(2) + p.x[1].powi(2) + p.x[2].powi(2)).sqrt();
        [p.x[0] / r, p.x[1] / r, p.x[2] / r]
    }

    #[test]
    fn euclidean_metric_is_the_identity() {
        let g = finsler_metric(&LagrangianModel::euclidean());
        let t = g.evaluate(&sample_chart()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((t.get(&[a, b]) - want).norm() < 1e-13, "g[{a}{b}] = {}", t.get(&[a, b]));
            }
        }
        let inv = inverse_metric(&LagrangianModel::euclidean());
        let t = inv.evaluate(&sample_chart()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((t.get(&[a, b]) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn anisotropic_metric_matches_its_closed_form() {
        let chart = sample_chart();
        let g = finsler_metric(&LagrangianModel::anisotropic_quadratic());
        let t = g.evaluate(&chart).unwrap();
        let p = crate::geometry::cylindrical_to_cartesian(&chart);
        let u = unit_direction(&p);
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 } + u[a] * u[b];
                assert!(
                    (t.get(&[a, b]) - want).norm() < 1e-12,
                    "g[{a}{b}] = {} vs {want}",
                    t.get(&[a, b])
                );
            }
        }
    }

    #[test]
    fn quartic_metric_matches_the_hessian_oracle() {
        let model = LagrangianModel::quartic();
        let chart = sample_chart();
        let g = finsler_metric(&model).evaluate(&chart).unwrap();
        let p = crate::geometry::cylindrical_to_cartesian(&chart);
        let oracle = hessian_oracle(&model, &p, 1e-4).unwrap();
        assert!(g.distance(&oracle) < 1e-7, "distance {}", g.distance(&oracle));
    }

    #[test]
    fn metric_times_inverse_is_the_identity() {
        for model in [LagrangianModel::anisotropic_quadratic(), LagrangianModel::quartic()] {
            let chart = sample_chart();
            let g = finsler_metric(&model).evaluate(&chart).unwrap();
            let inv = inverse_metric(&model).evaluate(&chart).unwrap();
            for a in 0..3 {
                for c in 0..3 {
                    let mut entry = Complex64::new(0.0, 0.0);
                    for b in 0..3 {
                        entry += g.get(&[a, b]) * inv.get(&[b, c]);
                    }
                    let want = if a == c { 1.0 } else { 0.0 };
                    assert!((entry - want).norm() < 1e-9, "(g g^-1)[{a}{c}] = {entry}");
                }
            }
        }
    }

    #[test]
    fn momenta_recover_the_flat_fiber_covector() {
        let chart = sample_chart();
        let p = momenta(&LagrangianModel::euclidean()).evaluate(&chart).unwrap();
        let cart = crate::geometry::cylindrical_to_cartesian(&chart);
        for a in 0..3 {
            assert!(
                (p.get(&[a]) - cart.xdot[a]).norm() < 1e-12,
                "p[{a}] = {} vs {}",
                p.get(&[a]),
                cart.xdot[a]
            );
        }
    }

    #[test]
    fn homogeneity_check_rejects_a_cubic_term() {
        let bad = LagrangianModel::from_value(Arc::new(|_, rho, z| rho * rho + z * z * z), 1e-5);
        let samples = [(1.0, 0.8, 0.5)];
        assert!(matches!(
            bad.check_homogeneity(&samples, &[0.5, 2.0, 10.0], 1e-6),
            Err(Error::NotHomogeneous(_))
        ));
        LagrangianModel::quartic()
            .check_homogeneity(&samples, &[0.5, 2.0, 10.0], 1e-6)
            .unwrap();
    }

    #[test]
    fn partial_check_accepts_fd_models_and_rejects_lies() {
        let samples = [(1.0, 0.7, 0.4), (2.0, 1.3, -0.9)];
        let fd = LagrangianModel::from_value(Arc::new(|_, rho, z| rho * rho + 0.3 * rho * z), 1e-5);
        fd.check_partials(&samples, 1e-6).unwrap();
        let mut lying = LagrangianModel::euclidean();
        lying.l_rho_z = Arc::new(|_, _, _| 1.0);
        assert!(matches!(
            lying.check_partials(&samples, 1e-6),
            Err(Error::InconsistentPartials(_))
        ));
    }

    #[test]
    fn degenerate_directions_are_rejected() {
        let flat_in_rho = LagrangianModel::new(
            Arc::new(|_, _, z| z * z),
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, z| 2.0 * z),
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, _| 2.0),
        );
        let inv = inverse_metric(&flat_in_rho);
        assert!(matches!(
            inv.at(1.0, 0.8, 0.5),
            Err(Error::DegenerateMetric(_))
        ));

        let zero = LagrangianModel::from_value(Arc::new(|_, _, _| 0.0), 1e-5);
        assert!(matches!(
            inverse_metric(&zero).at(1.0, 0.8, 0.5),
            Err(Error::DegenerateMetric(_))
        ));
    }

    #[test]
    fn quartic_fd_partials_agree_with_the_closed_forms() {
        let closed = LagrangianModel::quartic();
        let value = Arc::new(|_r: f64, rho: f64, z: f64| {
            (rho.powi(4) + rho * rho * z * z + z.powi(4)).sqrt()
        });
        let fd = LagrangianModel::from_value(value, 1e-5);
        for (r, rho, z) in [(1.0, 0.9, 0.7), (1.0, 0.4, -1.2)] {
            assert!((closed.l_rho(r, rho, z) - fd.l_rho(r, rho, z)).abs() < 1e-8);
            assert!((closed.l_z(r, rho, z) - fd.l_z(r, rho, z)).abs() < 1e-8);
            assert!((closed.l_rho_rho(r, rho, z) - fd.l_rho_rho(r, rho, z)).abs() < 1e-6);
            assert!((closed.l_rho_z(r, rho, z) - fd.l_rho_z(r, rho, z)).abs() < 1e-6);
            assert!((closed.l_z_z(r, rho, z) - fd.l_z_z(r, rho, z)).abs() < 1e-6);
        }
    }
}
