//! Vertical differential of radially weighted harmonic d-tensors.
//!
//! The fiber gradient of `f(r, rhobar, zbar) * Y_sig` closes over three
//! degree-1 covector harmonics prepended to the signature. Coefficients
//! stay symbolic in the radial coordinates until evaluation binds them.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use super::{cartesian_to_cylindrical, CartesianPoint, CylindricalChart};
use crate::dtensor::{
    tensor_product_combinations, ComponentTensor, DTensorSignature, ExpandedDTensor,
    HarmonicCombination, Variance,
};
use crate::{Error, Result};

/// Shared evaluable function of `(r, rhobar, zbar)`.
pub type RadialFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

fn central_fd(f: &RadialFn, r: f64, rhobar: f64, zbar: f64, axis: usize, step: f64) -> f64 {
    let h = step * rhobar.hypot(zbar).max(1.0);
    let shift = |s: f64| match axis {
        0 => (f)(r, rhobar + s, zbar),
        _ => (f)(r, rhobar, zbar + s),
    };
    let d = |s: f64| (shift(s) - shift(-s)) / (2.0 * s);
    (4.0 * d(h) - d(2.0 * h)) / 3.0
}

/// Function of the radial coordinates together with its two fiber
/// partials. Partials may be supplied in closed form or generated by
/// finite differences from the value.
#[derive(Clone)]
pub struct RadialFunction {
    value: RadialFn,
    d_rhobar: RadialFn,
    d_zbar: RadialFn,
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction").finish_non_exhaustive()
    }
}

impl RadialFunction {
    pub fn new(value: RadialFn, d_rhobar: RadialFn, d_zbar: RadialFn) -> Self {
        RadialFunction { value, d_rhobar, d_zbar }
    }

    /// Builds the partials by Richardson-extrapolated central differences
    /// with base step `step` scaled to the fiber magnitude.
    pub fn from_value(value: RadialFn, step: f64) -> Self {
        let v0 = Arc::clone(&value);
        let v1 = Arc::clone(&value);
        RadialFunction {
            value,
            d_rhobar: Arc::new(move |r, rho, z| central_fd(&v0, r, rho, z, 0, step)),
            d_zbar: Arc::new(move |r, rho, z| central_fd(&v1, r, rho, z, 1, step)),
        }
    }

    pub fn value(&self, r: f64, rhobar: f64, zbar: f64) -> f64 {
        (self.value)(r, rhobar, zbar)
    }

    pub fn d_rhobar(&self, r: f64, rhobar: f64, zbar: f64) -> f64 {
        (self.d_rhobar)(r, rhobar, zbar)
    }

    pub fn d_zbar(&self, r: f64, rhobar: f64, zbar: f64) -> f64 {
        (self.d_zbar)(r, rhobar, zbar)
    }

    /// Cross-checks the stored partials against central differences of the
    /// value at the given sample points.
    pub fn check_partials(&self, samples: &[(f64, f64, f64)], tol: f64) -> Result<()> {
        for &(r, rho, z) in samples {
            let scale = 1.0 + self.value(r, rho, z).abs();
            let fd_rho = central_fd(&self.value, r, rho, z, 0, 1e-5);
            let fd_z = central_fd(&self.value, r, rho, z, 1, 1e-5);
            let err_rho = (self.d_rhobar(r, rho, z) - fd_rho).abs();
            let err_z = (self.d_zbar(r, rho, z) - fd_z).abs();
            if err_rho > tol * scale || err_z > tol * scale {
                return Err(Error::InconsistentPartials(format!(
                    "at (r, rhobar, zbar) = ({r}, {rho}, {z}): \
                     partial deviations ({err_rho:.3e}, {err_z:.3e}) exceed {tol:.1e}"
                )));
            }
        }
        Ok(())
    }
}

fn prefactor_signature(n: i32) -> DTensorSignature {
    DTensorSignature::new(1, vec![0], 0, n, vec![Variance::Covector])
        .expect("degree-1 covector prefactor is always valid")
}

fn bracket_coefficients(f: &RadialFunction, n: i32, r: f64, rhobar: f64, zbar: f64) -> Result<[f64; 3]> {
    let d_rho = f.d_rhobar(r, rhobar, zbar);
    let d_z = f.d_zbar(r, rhobar, zbar);
    let winding = if n == 0 {
        0.0
    } else {
        if rhobar == 0.0 {
            return Err(Error::ChartSingularity(
                "vertical differential needs rhobar > 0 when the fiber winding is nonzero".into(),
            ));
        }
        f64::from(n) * f.value(r, rhobar, zbar) / rhobar
    };
    Ok([
        (winding - d_rho) / SQRT_2,
        -d_z,
        (winding + d_rho) / SQRT_2,
    ])
}

/// Fiber gradient of a radial function times a harmonic d-tensor. Keeps
/// the radial dependence unevaluated; `evaluate` binds a chart point
/// directly, `expand` closes the result over signatures at bound radial
/// coordinates.
#[derive(Debug, Clone)]
pub struct VerticalDifferential {
    f: RadialFunction,
    sig: DTensorSignature,
}

impl VerticalDifferential {
    pub fn new(f: RadialFunction, sig: DTensorSignature) -> Self {
        VerticalDifferential { f, sig }
    }

    pub fn signature(&self) -> &DTensorSignature {
        &self.sig
    }

    /// Variance pattern of the result: one covector slot prepended.
    pub fn variances(&self) -> Vec<Variance> {
        let mut v = vec![Variance::Covector];
        v.extend_from_slice(self.sig.variances());
        v
    }

    /// Componentwise value at a chart point.
    pub fn evaluate(&self, chart: &CylindricalChart) -> Result<ComponentTensor> {
        let coeffs =
            bracket_coefficients(&self.f, self.sig.n(), chart.r, chart.rhobar, chart.zbar)?;
        let angles = chart.angles()?;
        let mut bracket = ComponentTensor::zeros(vec![Variance::Covector]);
        for (c, mu) in coeffs.iter().zip([1i32, 0, -1]) {
            if *c == 0.0 {
                continue;
            }
            let part = ExpandedDTensor::build_explicit(&prefactor_signature(mu)).evaluate(angles);
            bracket.add_scaled(&part, Complex64::new(*c, 0.0));
        }
        let base = ExpandedDTensor::build_explicit(&self.sig).evaluate(angles);
        Ok(bracket.tensor_product(&base))
    }

    /// Closed harmonic form at bound radial coordinates.
    pub fn expand(&self, r: f64, rhobar: f64, zbar: f64) -> Result<HarmonicCombination> {
        let coeffs = bracket_coefficients(&self.f, self.sig.n(), r, rhobar, zbar)?;
        let mut bracket = HarmonicCombination::zero(vec![Variance::Covector]);
        for (c, mu) in coeffs.iter().zip([1i32, 0, -1]) {
            if *c == 0.0 {
                continue;
            }
            bracket.add_term(prefactor_signature(mu), Complex64::new(*c, 0.0))?;
        }
        tensor_product_combinations(&bracket, &HarmonicCombination::from_signature(&self.sig))
    }
}

/// Independent check value: the fiber gradient computed by Cartesian
/// central differences in `xdot`, one Richardson level, gradient slot
/// first.
pub fn vertical_differential_fd(
    f: &RadialFunction,
    sig: &DTensorSignature,
    p: &CartesianPoint,
    step: f64,
) -> Result<ComponentTensor> {
    let field = |q: &CartesianPoint| -> Result<ComponentTensor> {
        let chart = cartesian_to_cylindrical(q)?;
        let mut t = ExpandedDTensor::build_explicit(sig).evaluate(chart.angles()?);
        let w = f.value(chart.r, chart.rhobar, chart.zbar);
        t.scale(Complex64::new(w, 0.0));
        Ok(t)
    };
    let fiber_norm = (p.xdot[0].powi(2) + p.xdot[1].powi(2) + p.xdot[2].powi(2)).sqrt();
    let h = step * fiber_norm.max(1.0);
    let mut variances = vec![Variance::Covector];
    variances.extend_from_slice(sig.variances());
    let mut out = ComponentTensor::zeros(variances.clone());
    for axis in 0..3 {
        let diff = |s: f64| -> Result<ComponentTensor> {
            let mut shifted = *p;
            shifted.xdot[axis] += s;
            let mut d = field(&shifted)?;
            shifted.xdot[axis] -= 2.0 * s;
            d.add_scaled(&field(&shifted)?, Complex64::new(-1.0, 0.0));
            d.scale(Complex64::new(1.0 / (2.0 * s), 0.0));
            Ok(d)
        };
        let mut grad = diff(h)?;
        grad.scale(Complex64::new(4.0 / 3.0, 0.0));
        grad.add_scaled(&diff(2.0 * h)?, Complex64::new(-1.0 / 3.0, 0.0));
        for idx in ComponentTensor::indices(sig.rank()) {
            let mut full = vec![axis];
            full.extend_from_slice(&idx);
            out.set(&full, grad.get(&idx));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cylindrical_to_cartesian;

    fn quadratic_zbar() -> RadialFunction {
        RadialFunction::new(
            Arc::new(|_, _, z| z * z),
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, z| 2.0 * z),
        )
    }

    #[test]
    fn zbar_squared_scalar_case_reduces_to_one_term() {
        let vd = VerticalDifferential::new(quadratic_zbar(), DTensorSignature::scalar(0, 0, 0).unwrap());
        let comb = vd.expand(1.0, 0.8, 0.5).unwrap();
        assert_eq!(comb.len(), 1);
        let sig: DTensorSignature = "1|0;0,0;c".parse().unwrap();
        let c = comb.coefficient(&sig);
        assert!((c - Complex64::new(-1.0, 0.0)).norm() < 1e-14, "coefficient {c}");
    }

    #[test]
    fn expansion_matches_direct_evaluation() {
        let f = RadialFunction::new(
            Arc::new(|_, rho, z| rho * rho + 0.5 * rho * z),
            Arc::new(|_, rho, z| 2.0 * rho + 0.5 * z),
            Arc::new(|_, rho, _| 0.5 * rho),
        );
        for sig_text in ["0|;0,0;", "1|1;1,1;v", "1|2;-1,0;c"] {
            let sig: DTensorSignature = sig_text.parse().unwrap();
            let vd = VerticalDifferential::new(f.clone(), sig);
            let chart = CylindricalChart::new(1.3, 1.0, 0.4, 0.9, -0.6, 2.1).unwrap();
            let direct = vd.evaluate(&chart).unwrap();
            let closed = vd
                .expand(chart.r, chart.rhobar, chart.zbar)
                .unwrap()
                .evaluate(chart.angles().unwrap());
            assert!(direct.distance(&closed) < 1e-12, "{sig_text}: {}", direct.distance(&closed));
        }
    }

    #[test]
    fn matches_cartesian_fiber_differences() {
        let f = RadialFunction::new(
            Arc::new(|_, rho, z| rho * rho * z),
            Arc::new(|_, rho, z| 2.0 * rho * z),
            Arc::new(|_, rho, _| rho * rho),
        );
        for sig_text in ["0|;0,0;", "1|1;0,1;v"] {
            let sig: DTensorSignature = sig_text.parse().unwrap();
            let vd = VerticalDifferential::new(f.clone(), sig.clone());
            let chart = CylindricalChart::new(1.1, 0.9, -0.3, 1.2, 0.7, 0.8).unwrap();
            let direct = vd.evaluate(&chart).unwrap();
            let p = cylindrical_to_cartesian(&chart);
            let fd = vertical_differential_fd(&f, &sig, &p, 1e-4).unwrap();
            assert!(direct.distance(&fd) < 1e-7, "{sig_text}: {}", direct.distance(&fd));
        }
    }

    #[test]
    fn winding_terms_need_positive_rhobar() {
        let f = quadratic_zbar();
        let sig: DTensorSignature = "1|1;0,1;v".parse().unwrap();
        let vd = VerticalDifferential::new(f, sig);
        let chart = CylindricalChart::new(1.0, 1.2, 0.3, 0.0, 0.9, 0.0).unwrap();
        assert!(matches!(vd.evaluate(&chart), Err(Error::ChartSingularity(_))));
    }

    #[test]
    fn partial_check_flags_a_wrong_derivative() {
        let wrong = RadialFunction::new(
            Arc::new(|_, rho, z| rho * z),
            Arc::new(|_, _, z| z + 0.5),
            Arc::new(|_, rho, _| rho),
        );
        let samples = [(1.0, 0.7, 0.4), (2.0, 1.1, -0.8)];
        assert!(matches!(
            wrong.check_partials(&samples, 1e-6),
            Err(Error::InconsistentPartials(_))
        ));
        let fixed = RadialFunction::from_value(Arc::new(|_, rho, z| rho * z), 1e-5);
        fixed.check_partials(&samples, 1e-6).unwrap();
    }
}
