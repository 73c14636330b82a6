//! Tangent-bundle geometry: co-rotated charts, rotation and co-rotation
//! flows, and finite-difference Lie derivative operators.
//!
//! Rotations act through exact finite flow matrices; only the derivative in
//! the flow parameter is numerical. The lifted rotation fields and the
//! co-rotation fields take the same chart expressions with `phi` and `beta`
//! exchanged, which is how the co-rotation flow is evaluated here.

mod vertical;

pub use vertical::{vertical_differential_fd, RadialFn, RadialFunction, VerticalDifferential};

use num_complex::Complex64;

use crate::dtensor::ComponentTensor;
use crate::scalar::AnglePoint;
use crate::{Error, Result};

/// Base position and fiber velocity in Cartesian induced coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPoint {
    pub x: [f64; 3],
    pub xdot: [f64; 3],
}

/// Co-rotated spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalChart {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub rbar: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Co-rotated cylindrical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalChart {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub rhobar: f64,
    pub zbar: f64,
    pub beta: f64,
}

impl SphericalChart {
    pub fn new(r: f64, theta: f64, phi: f64, rbar: f64, alpha: f64, beta: f64) -> Result<Self> {
        if r <= 0.0 || rbar <= 0.0 {
            return Err(Error::InvalidAngle(format!(
                "radial coordinates must be positive, got r={r}, rbar={rbar}"
            )));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta)
            || !(0.0..=std::f64::consts::PI).contains(&alpha)
        {
            return Err(Error::InvalidAngle(format!(
                "polar angles must lie in [0, pi], got theta={theta}, alpha={alpha}"
            )));
        }
        Ok(SphericalChart { r, theta, phi, rbar, alpha, beta })
    }

    pub fn to_cylindrical(&self) -> CylindricalChart {
        CylindricalChart {
            r: self.r,
            theta: self.theta,
            phi: self.phi,
            rhobar: self.rbar * self.alpha.sin(),
            zbar: self.rbar * self.alpha.cos(),
            beta: self.beta,
        }
    }
}

impl CylindricalChart {
    pub fn new(r: f64, theta: f64, phi: f64, rhobar: f64, zbar: f64, beta: f64) -> Result<Self> {
        if r <= 0.0 {
            return Err(Error::InvalidAngle(format!("r must be positive, got {r}")));
        }
        if rhobar < 0.0 {
            return Err(Error::InvalidAngle(format!(
                "rhobar must be nonnegative, got {rhobar}"
            )));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidAngle(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        Ok(CylindricalChart { r, theta, phi, rhobar, zbar, beta })
    }

    pub fn angles(&self) -> Result<AnglePoint> {
        AnglePoint::new(self.theta, self.phi, self.beta)
    }
}

type Mat3 = [[f64; 3]; 3];

fn rot_z(t: f64) -> Mat3 {
    let (s, c) = t.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn rot_y(t: f64) -> Mat3 {
    let (s, c) = t.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

fn mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (row, o) in m.iter().zip(out.iter_mut()) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

pub fn spherical_to_cartesian(c: &SphericalChart) -> CartesianPoint {
    let frame_z = rot_z(c.phi);
    let frame_y = rot_y(c.theta);
    let x = mat_vec(&frame_z, mat_vec(&frame_y, [0.0, 0.0, c.r]));
    let fiber = mat_vec(
        &rot_z(c.beta),
        mat_vec(&rot_y(c.alpha), [0.0, 0.0, c.rbar]),
    );
    let xdot = mat_vec(&frame_z, mat_vec(&frame_y, fiber));
    CartesianPoint { x, xdot }
}

pub fn cylindrical_to_cartesian(c: &CylindricalChart) -> CartesianPoint {
    let frame_z = rot_z(c.phi);
    let frame_y = rot_y(c.theta);
    let x = mat_vec(&frame_z, mat_vec(&frame_y, [0.0, 0.0, c.r]));
    let fiber = [
        c.rhobar * c.beta.cos(),
        c.rhobar * c.beta.sin(),
        c.zbar,
    ];
    let xdot = mat_vec(&frame_z, mat_vec(&frame_y, fiber));
    CartesianPoint { x, xdot }
}

/// Inverts the cylindrical chart map. Rejects the polar axis, where `phi`
/// is undefined. `beta` defaults to 0 when the fiber has no transverse
/// part.
pub fn cartesian_to_cylindrical(p: &CartesianPoint) -> Result<CylindricalChart> {
    let r = (p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.x[2] * p.x[2]).sqrt();
    if r == 0.0 {
        return Err(Error::ChartSingularity("base point at the origin".into()));
    }
    if p.x[0] == 0.0 && p.x[1] == 0.0 {
        return Err(Error::ChartSingularity(
            "base point on the polar axis; phi is undefined".into(),
        ));
    }
    let theta = (p.x[2] / r).clamp(-1.0, 1.0).acos();
    let phi = p.x[1].atan2(p.x[0]);
    let w = mat_vec(&rot_y(-theta), mat_vec(&rot_z(-phi), p.xdot));
    let rhobar = w[0].hypot(w[1]);
    let beta = if rhobar == 0.0 { 0.0 } else { w[1].atan2(w[0]) };
    CylindricalChart::new(r, theta, phi, rhobar, w[2], beta)
}

/// The finite rotation generated by `r_j`, `j` in 1..=3, at parameter `t`.
pub fn flow_matrix(j: usize, t: f64) -> Mat3 {
    let (s, c) = t.sin_cos();
    match j {
        1 => [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]],
        2 => [[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]],
        3 => [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]],
        _ => panic!("rotation axis must be 1, 2 or 3, got {j}"),
    }
}

/// Complete-lift rotation flow: the same finite rotation applied to base
/// and fiber.
pub fn rotation_flow(j: usize, t: f64, p: &CartesianPoint) -> CartesianPoint {
    let m = flow_matrix(j, t);
    CartesianPoint {
        x: mat_vec(&m, p.x),
        xdot: mat_vec(&m, p.xdot),
    }
}

/// Embeds angles on the unit sphere with a unit transverse fiber, the
/// section on which rotation and co-rotation flows act faithfully.
pub fn embed_angles(a: AnglePoint) -> CartesianPoint {
    cylindrical_to_cartesian(&CylindricalChart {
        r: 1.0,
        theta: a.theta,
        phi: a.phi,
        rhobar: 1.0,
        zbar: 0.0,
        beta: a.beta,
    })
}

pub fn extract_angles(p: &CartesianPoint) -> Result<AnglePoint> {
    cartesian_to_cylindrical(p)?.angles()
}

/// Rotation flow restricted to the angle coordinates; the radial
/// coordinates are invariant. Errors when the flowed point crosses the
/// polar axis.
pub fn rotation_flow_angles(j: usize, t: f64, a: AnglePoint) -> Result<AnglePoint> {
    extract_angles(&rotation_flow(j, t, &embed_angles(a)))
}

/// Co-rotation flow on angles: the generator fields match the lifted
/// rotations with `phi` and `beta` exchanged, so the flow conjugates the
/// rotation flow by that swap.
pub fn corotation_flow_angles(j: usize, t: f64, a: AnglePoint) -> Result<AnglePoint> {
    let swapped = AnglePoint { theta: a.theta, phi: a.beta, beta: a.phi };
    let flowed = rotation_flow_angles(j, t, swapped)?;
    Ok(AnglePoint { theta: flowed.theta, phi: flowed.beta, beta: flowed.phi })
}

/// Central-difference Lie derivative along the lifted rotation `r_j` of a
/// function on the tangent bundle.
pub fn lie_derivative_function<F>(f: F, j: usize, p: &CartesianPoint, h: f64) -> Complex64
where
    F: Fn(&CartesianPoint) -> Complex64,
{
    (f(&rotation_flow(j, h, p)) - f(&rotation_flow(j, -h, p))) / (2.0 * h)
}

/// `R_j = i L_{r_j}` acting on a function of the angles.
pub fn rotation_operator<F>(f: F, j: usize, a: AnglePoint, h: f64) -> Result<Complex64>
where
    F: Fn(AnglePoint) -> Complex64,
{
    let plus = f(rotation_flow_angles(j, h, a)?);
    let minus = f(rotation_flow_angles(j, -h, a)?);
    Ok(Complex64::new(0.0, 1.0) * (plus - minus) / (2.0 * h))
}

/// `B_j = i L_{b_j}` acting on a function of the angles.
pub fn corotation_operator<F>(f: F, j: usize, a: AnglePoint, h: f64) -> Result<Complex64>
where
    F: Fn(AnglePoint) -> Complex64,
{
    let plus = f(corotation_flow_angles(j, h, a)?);
    let minus = f(corotation_flow_angles(j, -h, a)?);
    Ok(Complex64::new(0.0, 1.0) * (plus - minus) / (2.0 * h))
}

/// Second derivative in the flow parameter at 0 with one Richardson level:
/// combines the centered second differences at steps `h` and `2h`.
pub fn second_flow_derivative<F>(f: F, j: usize, a: AnglePoint, h: f64) -> Result<Complex64>
where
    F: Fn(AnglePoint) -> Complex64,
{
    let center = f(a);
    let d = |s: f64| -> Result<Complex64> {
        let plus = f(rotation_flow_angles(j, s, a)?);
        let minus = f(rotation_flow_angles(j, -s, a)?);
        Ok((plus - 2.0 * center + minus) / (s * s))
    };
    let fine = d(h)?;
    let coarse = d(2.0 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// The rotation Casimir `R^2 = -sum_j d^2/dt^2` along the three flows.
pub fn casimir_rotation<F>(f: F, a: AnglePoint, h: f64) -> Result<Complex64>
where
    F: Fn(AnglePoint) -> Complex64 + Copy,
{
    let mut total = Complex64::new(0.0, 0.0);
    for j in 1..=3 {
        total -= second_flow_derivative(f, j, a, h)?;
    }
    Ok(total)
}

/// Pulls back a componentwise d-tensor under the rotation with matrix `m`:
/// every slot contracts as `new[a] = sum_c m[c][a] old[c]`, which covers
/// vector and covector slots alike since rotations are orthogonal.
pub fn pullback_rotation(t: &ComponentTensor, m: &Mat3) -> ComponentTensor {
    let k = t.rank();
    let mut out = ComponentTensor::zeros(t.variances().to_vec());
    for idx in ComponentTensor::indices(k) {
        let mut v = Complex64::new(0.0, 0.0);
        for src in ComponentTensor::indices(k) {
            let mut w = 1.0;
            for (&a, &c) in idx.iter().zip(src.iter()) {
                w *= m[c][a];
                if w == 0.0 {
                    break;
                }
            }
            if w != 0.0 {
                v += t.get(&src) * w;
            }
        }
        out.set(&idx, v);
    }
    out
}

/// Central-difference Lie derivative of a d-tensor field given by its
/// components over the angles.
pub fn lie_derivative_dtensor<F>(
    field: F,
    j: usize,
    a: AnglePoint,
    h: f64,
) -> Result<ComponentTensor>
where
    F: Fn(AnglePoint) -> ComponentTensor,
{
    let plus = pullback_rotation(&field(rotation_flow_angles(j, h, a)?), &flow_matrix(j, h));
    let minus = pullback_rotation(&field(rotation_flow_angles(j, -h, a)?), &flow_matrix(j, -h));
    let mut out = plus;
    out.add_scaled(&minus, Complex64::new(-1.0, 0.0));
    out.scale(Complex64::new(1.0 / (2.0 * h), 0.0));
    Ok(out)
}

/// `R_j` on a d-tensor field: `i` times the flow derivative with pullback.
pub fn rotation_operator_dtensor<F>(
    field: F,
    j: usize,
    a: AnglePoint,
    h: f64,
) -> Result<ComponentTensor>
where
    F: Fn(AnglePoint) -> ComponentTensor,
{
    let mut out = lie_derivative_dtensor(field, j, a, h)?;
    out.scale(Complex64::new(0.0, 1.0));
    Ok(out)
}

/// Second flow derivative of a d-tensor field with pullback, one
/// Richardson level.
pub fn second_flow_derivative_dtensor<F>(
    field: F,
    j: usize,
    a: AnglePoint,
    h: f64,
) -> Result<ComponentTensor>
where
    F: Fn(AnglePoint) -> ComponentTensor + Copy,
{
    let center = field(a);
    let d = |s: f64| -> Result<ComponentTensor> {
        let plus = pullback_rotation(&field(rotation_flow_angles(j, s, a)?), &flow_matrix(j, s));
        let minus =
            pullback_rotation(&field(rotation_flow_angles(j, -s, a)?), &flow_matrix(j, -s));
        let mut out = plus;
        out.add_scaled(&center, Complex64::new(-2.0, 0.0));
        out.add_scaled(&minus, Complex64::new(1.0, 0.0));
        out.scale(Complex64::new(1.0 / (s * s), 0.0));
        Ok(out)
    };
    let fine = d(h)?;
    let coarse = d(2.0 * h)?;
    let mut out = fine;
    out.scale(Complex64::new(4.0 / 3.0, 0.0));
    out.add_scaled(&coarse, Complex64::new(-1.0 / 3.0, 0.0));
    Ok(out)
}

/// `R^2` on a d-tensor field.
pub fn casimir_rotation_dtensor<F>(field: F, a: AnglePoint, h: f64) -> Result<ComponentTensor>
where
    F: Fn(AnglePoint) -> ComponentTensor + Copy,
{
    let mut total = ComponentTensor::zeros(field(a).variances().to_vec());
    for j in 1..=3 {
        total.add_scaled(&second_flow_derivative_dtensor(field, j, a, h)?, Complex64::new(-1.0, 0.0));
    }
    Ok(total)
}
