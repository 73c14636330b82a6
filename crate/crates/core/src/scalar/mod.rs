//! Scalar harmonics on the angle space `(theta, phi, beta)`.
//!
//! Each basis function is a normalization factor (exact radical rational), a
//! polynomial profile in the half-angle trig of `theta`, and plane waves in
//! the two azimuths. The profile is a terminating Gauss series; for negative
//! total azimuthal weight the series is evaluated through its Euler
//! transform, which swaps the singular prefactor for a regular one without
//! leaving polynomial arithmetic.

pub mod legendre;
pub mod wigner_d;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::coupling::{clebsch_gordan, PrimePowers, RadicalRational};
use crate::quadrature::{GaussLegendre, QuadratureSpec};
use crate::{Error, Result};

/// Labels `(l, m, n)` with `|m| <= l` and `|n| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AngularTriple {
    l: u32,
    m: i32,
    n: i32,
}

impl AngularTriple {
    pub fn new(l: u32, m: i32, n: i32) -> Result<Self> {
        if m.unsigned_abs() > l || n.unsigned_abs() > l {
            return Err(Error::InvalidTriple(format!(
                "need |m| <= l and |n| <= l, got l={l}, m={m}, n={n}"
            )));
        }
        Ok(AngularTriple { l, m, n })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn n(&self) -> i32 {
        self.n
    }
}

impl fmt::Display for AngularTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.l, self.m, self.n)
    }
}

/// A point of the angle space. `theta` is the polar angle in `[0, pi]`;
/// `phi` and `beta` are periodic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePoint {
    pub theta: f64,
    pub phi: f64,
    pub beta: f64,
}

impl AnglePoint {
    pub fn new(theta: f64, phi: f64, beta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidAngle(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        Ok(AnglePoint { theta, phi, beta })
    }
}

/// Exact normalization factor; its square is rational.
pub fn normalization(t: AngularTriple) -> RadicalRational {
    let l = t.l as i64;
    let (hi, lo) = (t.m.max(t.n) as i64, t.m.min(t.n) as i64);
    let d = (hi - lo) as u32;
    let mut radicand = PrimePowers::one();
    radicand.mul_int(2 * t.l as u64 + 1);
    radicand.mul_factorial((l - lo) as u32);
    radicand.mul_factorial((l + hi) as u32);
    radicand.div_factorial((l - hi) as u32);
    radicand.div_factorial((l + lo) as u32);
    radicand.div_factorial(d);
    radicand.div_factorial(d);
    let sign = if hi.rem_euclid(2) == 0 { 1 } else { -1 };
    RadicalRational::new(sign, radicand.to_rational())
}

fn hyp2f1_poly(a: i64, b: i64, c: i64, z: f64) -> f64 {
    let k_max = [a, b]
        .into_iter()
        .filter(|&p| p <= 0)
        .map(|p| -p)
        .min()
        .expect("a terminating parameter");
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..k_max {
        let kf = k as f64;
        term *= (a as f64 + kf) * (b as f64 + kf) / ((c as f64 + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Unnormalized polar profile evaluated from `cos(theta)`.
///
/// For `m + n >= 0` this is
/// `cos^{m+n}(t/2) sin^{|m-n|}(t/2) 2F1(max-l, max+l+1; |m-n|+1; sin^2(t/2))`;
/// for `m + n < 0` the Euler transform replaces the negative cosine power by
/// `cos^{-(m+n)}(t/2)` and the series by `2F1(l-min+1, -(l+min); |m-n|+1; .)`,
/// still terminating.
pub fn theta_profile(t: AngularTriple, cos_theta: f64) -> f64 {
    let l = t.l as i64;
    let (hi, lo) = (t.m.max(t.n) as i64, t.m.min(t.n) as i64);
    let d = hi - lo;
    let s2 = ((1.0 - cos_theta) / 2.0).max(0.0);
    let c2 = ((1.0 + cos_theta) / 2.0).max(0.0);
    let s = s2.sqrt();
    let c = c2.sqrt();
    let total = t.m + t.n;
    if total >= 0 {
        c.powi(total) * s.powi(d as i32) * hyp2f1_poly(hi - l, hi + l + 1, d + 1, s2)
    } else {
        c.powi(-total) * s.powi(d as i32) * hyp2f1_poly(l - lo + 1, -(l + lo), d + 1, s2)
    }
}

/// Value of the harmonic with labels `t` at `p`.
pub fn eval_harmonic(t: AngularTriple, p: AnglePoint) -> Complex64 {
    let amp = normalization(t).to_f64() * theta_profile(t, p.theta.cos());
    amp * Complex64::new(0.0, t.m as f64 * p.phi + t.n as f64 * p.beta).exp()
}

/// Conjugation sends `(l, m, n)` to `(l, -m, -n)` with sign `(-1)^(m+n)`.
pub fn conjugate_triple(t: AngularTriple) -> (i8, AngularTriple) {
    let sign = if (t.m + t.n).rem_euclid(2) == 0 { 1 } else { -1 };
    (
        sign,
        AngularTriple {
            l: t.l,
            m: -t.m,
            n: -t.n,
        },
    )
}

/// Ladder action in `m`: returns the exact coefficient and the shifted
/// labels, or `None` when the ladder annihilates the state.
pub fn raise_m(t: AngularTriple) -> Option<(RadicalRational, AngularTriple)> {
    ladder(t.l, t.m, 1).map(|(c, m)| (c, AngularTriple { m, ..t }))
}

pub fn lower_m(t: AngularTriple) -> Option<(RadicalRational, AngularTriple)> {
    ladder(t.l, t.m, -1).map(|(c, m)| (c, AngularTriple { m, ..t }))
}

pub fn raise_n(t: AngularTriple) -> Option<(RadicalRational, AngularTriple)> {
    ladder(t.l, t.n, 1).map(|(c, n)| (c, AngularTriple { n, ..t }))
}

pub fn lower_n(t: AngularTriple) -> Option<(RadicalRational, AngularTriple)> {
    ladder(t.l, t.n, -1).map(|(c, n)| (c, AngularTriple { n, ..t }))
}

fn ladder(l: u32, m: i32, step: i32) -> Option<(RadicalRational, i32)> {
    let target = m + step;
    if target.unsigned_abs() > l {
        return None;
    }
    let li = l as i64;
    let mi = m as i64;
    // sqrt((l -+ m)(l +- m + 1)) for step = +-1
    let value = if step > 0 {
        (li - mi) * (li + mi + 1)
    } else {
        (li + mi) * (li - mi + 1)
    };
    Some((
        RadicalRational::sqrt_of(BigRational::from_integer(value.into())),
        target,
    ))
}

/// Finite linear combination of scalar harmonics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HarmonicExpansion {
    terms: BTreeMap<AngularTriple, Complex64>,
}

impl HarmonicExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, t: AngularTriple, c: Complex64) {
        *self.terms.entry(t).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn coefficient(&self, t: AngularTriple) -> Complex64 {
        self.terms.get(&t).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AngularTriple, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }

    pub fn evaluate(&self, p: AnglePoint) -> Complex64 {
        self.terms
            .iter()
            .map(|(t, c)| c * eval_harmonic(*t, p))
            .sum()
    }

    pub fn conjugated(&self) -> HarmonicExpansion {
        let mut out = HarmonicExpansion::new();
        for (&t, &c) in &self.terms {
            let (sign, ct) = conjugate_triple(t);
            out.add_term(ct, f64::from(sign) * c.conj());
        }
        out
    }
}

/// Expands the pointwise product of two harmonics. The coupled labels run
/// over `|l1-l2| <= l <= l1+l2`, further clipped by `|m1+m2|, |n1+n2| <= l`
/// through vanishing coefficients.
pub fn product_expand(t1: AngularTriple, t2: AngularTriple) -> HarmonicExpansion {
    let mut out = HarmonicExpansion::new();
    let m = t1.m + t2.m;
    let n = t1.n + t2.n;
    let dim = BigRational::from_integer(((2 * t1.l as i64 + 1) * (2 * t2.l as i64 + 1)).into());
    for l in t1.l.abs_diff(t2.l)..=(t1.l + t2.l) {
        if m.unsigned_abs() > l || n.unsigned_abs() > l {
            continue;
        }
        let cg_m = clebsch_gordan(t1.l, -t1.m, t2.l, -t2.m, l, -m);
        if cg_m.is_zero() {
            continue;
        }
        let cg_n = clebsch_gordan(t1.l, -t1.n, t2.l, -t2.n, l, -n);
        if cg_n.is_zero() {
            continue;
        }
        let scale = RadicalRational::sqrt_of(
            dim.clone() / BigRational::from_integer((2 * l as i64 + 1).into()),
        );
        let coeff = scale * cg_m * cg_n;
        out.add_term(
            AngularTriple { l, m, n },
            Complex64::new(coeff.to_f64(), 0.0),
        );
    }
    out
}

/// `integral of conj(Y_{t1}) Y_{t2}` over the angle space with measure
/// `sin(theta) dtheta dphi dbeta`, by the factored product rule. The basis
/// is orthogonal with norm `8 pi^2`; this function measures that honestly
/// rather than assuming it, but exploits that the azimuthal integrals
/// vanish by symmetry for distinct `(m, n)` once the rule is fine enough.
pub fn orthogonality_integral(
    t1: AngularTriple,
    t2: AngularTriple,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    spec.check_capacity(
        (t1.l + t2.l) as usize,
        t1.m.abs_diff(t2.m) as usize,
        t1.n.abs_diff(t2.n) as usize,
    )?;
    if t1.m != t2.m || t1.n != t2.n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let gl = GaussLegendre::cached(spec.theta_order);
    let amp = normalization(t1).to_f64() * normalization(t2).to_f64();
    let theta_int: f64 = gl
        .nodes()
        .iter()
        .zip(gl.weights())
        .map(|(&u, &w)| w * theta_profile(t1, u) * theta_profile(t2, u))
        .sum();
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(Complex64::new(amp * theta_int * two_pi * two_pi, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn triple(l: u32, m: i32, n: i32) -> AngularTriple {
        AngularTriple::new(l, m, n).expect("valid labels")
    }

    #[test]
    fn label_validation() {
        assert!(AngularTriple::new(1, 2, 0).is_err());
        assert!(AngularTriple::new(1, 0, -2).is_err());
        assert!(AngularTriple::new(0, 0, 0).is_ok());
        assert!(AnglePoint::new(-0.1, 0.0, 0.0).is_err());
        assert!(AnglePoint::new(PI, 1.0, 2.0).is_ok());
    }

    #[test]
    fn frozen_normalizations() {
        assert_eq!(normalization(triple(1, 0, 0)).to_string(), "sqrt(3)");
        assert_eq!(normalization(triple(1, 1, 1)).to_string(), "-sqrt(3)");
        assert_eq!(normalization(triple(1, 1, 0)).to_string(), "-sqrt(6)");
        assert_eq!(normalization(triple(1, -1, -1)).to_string(), "-sqrt(3)");
    }

    #[test]
    fn frozen_profiles() {
        // (1,0,0) profile is cos(theta)
        for u in [-0.9, -0.3, 0.0, 0.4, 1.0] {
            assert!((theta_profile(triple(1, 0, 0), u) - u).abs() < 1e-15);
        }
        // (2,1,-1) at theta = pi/2
        assert!((theta_profile(triple(2, 1, -1), 0.0) - 1.0 / 6.0).abs() < 1e-15);
        // stretched labels give cos^{2l}(theta/2)
        for l in 1..=4u32 {
            let theta = 1.234f64;
            let expect = (theta / 2.0).cos().powi(2 * l as i32);
            let got = theta_profile(triple(l, l as i32, l as i32), theta.cos());
            assert!((got - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn euler_branch_joins_smoothly() {
        // (l, m, n) and (l, -m, -n) profiles satisfy the conjugation
        // identity N T = (-1)^(m+n) N' T' pointwise
        for l in 0..=4u32 {
            for m in -(l as i32)..=(l as i32) {
                for n in -(l as i32)..=(l as i32) {
                    let a = triple(l, m, n);
                    let (sign, b) = conjugate_triple(a);
                    for u in [-0.8, -0.2, 0.3, 0.9] {
                        let lhs = normalization(a).to_f64() * theta_profile(a, u);
                        let rhs = f64::from(sign)
                            * normalization(b).to_f64()
                            * theta_profile(b, u);
                        assert!(
                            (lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0),
                            "l={l} m={m} n={n} u={u}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matches_rotation_matrix_elements() {
        let points = [
            AnglePoint { theta: 0.7, phi: 0.3, beta: 1.1 },
            AnglePoint { theta: 2.2, phi: 4.0, beta: 0.0 },
            AnglePoint { theta: 1.3, phi: 5.9, beta: 3.3 },
        ];
        for l in 0..=4u32 {
            for m in -(l as i32)..=(l as i32) {
                for n in -(l as i32)..=(l as i32) {
                    for p in points {
                        let direct = eval_harmonic(triple(l, m, n), p);
                        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        let via_d = sign
                            * ((2 * l + 1) as f64).sqrt()
                            * wigner_d::wigner_d_element(l, -m, -n, p.phi, p.theta, p.beta);
                        assert!(
                            (direct - via_d).norm() < 1e-12,
                            "l={l} m={m} n={n}: {direct} vs {via_d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reduces_to_surface_harmonics() {
        let sqrt_4pi = (4.0 * PI).sqrt();
        for l in 0..=4u32 {
            for m in -(l as i32)..=(l as i32) {
                for (theta, phi) in [(0.4, 1.2), (1.9, 5.5), (2.8, 0.1)] {
                    let p = AnglePoint { theta, phi, beta: 2.7 };
                    // n = 0: a surface harmonic in (theta, phi)
                    let lhs = eval_harmonic(triple(l, m, 0), p);
                    let rhs = sqrt_4pi * legendre::spherical_harmonic(l, m, theta, phi);
                    assert!((lhs - rhs).norm() < 1e-12, "n=0 l={l} m={m}");
                    // m = 0: the same function of (theta, beta)
                    let q = AnglePoint { theta, phi: 1.8, beta: phi };
                    let lhs = eval_harmonic(triple(l, 0, m), q);
                    assert!((lhs - rhs).norm() < 1e-12, "m=0 l={l} n={m}");
                }
            }
        }
    }

    #[test]
    fn polar_equation_residual() {
        // T'' + T'/tan + [ (2 m n cos - m^2 - n^2)/sin^2 + l(l+1) ] T = 0
        let h = 1e-4;
        for l in 0..=3u32 {
            for m in -(l as i32)..=(l as i32) {
                for n in -(l as i32)..=(l as i32) {
                    let t = triple(l, m, n);
                    let f = |theta: f64| theta_profile(t, theta.cos());
                    let scale = (1..20)
                        .map(|k| f(PI * k as f64 / 20.0).abs())
                        .fold(0.0f64, f64::max);
                    for theta in [0.6, 1.3, 2.0, 2.7] {
                        let d1 = (f(theta + h) - f(theta - h)) / (2.0 * h);
                        let d2 = (f(theta + h) - 2.0 * f(theta) + f(theta - h)) / (h * h);
                        let (mf, nf) = (m as f64, n as f64);
                        let pot = (2.0 * mf * nf * theta.cos() - mf * mf - nf * nf)
                            / theta.sin().powi(2)
                            + (l * (l + 1)) as f64;
                        let residual = d2 + d1 / theta.tan() + pot * f(theta);
                        assert!(
                            residual.abs() < 1e-6 * scale.max(1e-3),
                            "l={l} m={m} n={n} theta={theta}: {residual}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_frozen_value() {
        // lowering n on (2,0,1) gives sqrt(6) times (2,0,0)
        let (c, t) = lower_n(triple(2, 0, 1)).expect("not annihilated");
        assert_eq!(t, triple(2, 0, 0));
        assert_eq!(c.to_string(), "sqrt(6)");
        // annihilation at the edge
        assert!(raise_m(triple(2, 2, 0)).is_none());
    }

    #[test]
    fn ladder_coefficients_are_exact() {
        // the numeric side of the ladder lives with the flow oracles; here
        // the exact coefficients are pinned
        for (t, up) in [
            (triple(1, 0, 0), triple(1, 1, 0)),
            (triple(2, -1, 1), triple(2, 0, 1)),
            (triple(3, 2, -2), triple(3, 3, -2)),
        ] {
            let (c, shifted) = raise_m(t).expect("inside the band");
            assert_eq!(shifted, up);
            // |coeff|^2 = (l-m)(l+m+1) exactly
            let li = t.l() as i64;
            let mi = t.m() as i64;
            assert_eq!(
                c.squared(),
                &BigRational::from_integer(((li - mi) * (li + mi + 1)).into())
            );
        }
    }

    #[test]
    fn products_expand_exactly() {
        let e = product_expand(triple(1, 0, 0), triple(1, 0, 0));
        assert_eq!(e.len(), 2);
        assert!((e.coefficient(triple(0, 0, 0)).re - 1.0).abs() < 1e-15);
        assert!((e.coefficient(triple(2, 0, 0)).re - 2.0 / 5.0f64.sqrt()).abs() < 1e-15);

        // pointwise agreement for mixed labels
        let pairs = [
            (triple(1, 1, 0), triple(1, -1, 1)),
            (triple(2, 1, -1), triple(1, 0, 1)),
            (triple(2, 2, 2), triple(2, -1, 0)),
        ];
        let points = [
            AnglePoint { theta: 0.9, phi: 0.4, beta: 2.0 },
            AnglePoint { theta: 2.1, phi: 3.3, beta: 5.1 },
        ];
        for (a, b) in pairs {
            let e = product_expand(a, b);
            for p in points {
                let direct = eval_harmonic(a, p) * eval_harmonic(b, p);
                let expanded = e.evaluate(p);
                assert!(
                    (direct - expanded).norm() < 1e-12,
                    "{a} * {b} at {p:?}: {direct} vs {expanded}"
                );
            }
        }
    }

    #[test]
    fn orthogonality_on_a_small_family() {
        let spec = QuadratureSpec::default();
        let family = [
            triple(0, 0, 0),
            triple(1, 0, 0),
            triple(1, 1, -1),
            triple(2, 1, -1),
            triple(2, -2, 0),
        ];
        let norm = 8.0 * PI * PI;
        for a in family {
            for b in family {
                let got = orthogonality_integral(a, b, &spec).expect("capacity ok");
                let expect = if a == b { norm } else { 0.0 };
                assert!(
                    (got.re - expect).abs() < 1e-9 * norm && got.im.abs() < 1e-12,
                    "<{a},{b}> = {got}"
                );
            }
        }
    }

    #[test]
    fn factored_integral_matches_node_loop() {
        let spec = QuadratureSpec {
            theta_order: 8,
            phi_points: 16,
            beta_points: 16,
        };
        for (a, b) in [
            (triple(1, 1, 0), triple(1, 1, 0)),
            (triple(2, 1, -1), triple(2, 1, -1)),
            (triple(2, 1, 0), triple(1, 1, 0)),
        ] {
            let fast = orthogonality_integral(a, b, &spec).expect("capacity ok");
            let slow = spec.integrate(|theta, phi, beta| {
                let p = AnglePoint { theta, phi, beta };
                eval_harmonic(a, p).conj() * eval_harmonic(b, p)
            });
            assert!((fast - slow).norm() < 1e-9, "<{a},{b}>: {fast} vs {slow}");
        }
    }

    #[test]
    fn conjugation_identity_pointwise() {
        for l in 0..=3u32 {
            for m in -(l as i32)..=(l as i32) {
                for n in -(l as i32)..=(l as i32) {
                    let t = triple(l, m, n);
                    let (sign, ct) = conjugate_triple(t);
                    let p = AnglePoint { theta: 1.1, phi: 2.9, beta: 0.8 };
                    let lhs = eval_harmonic(t, p).conj();
                    let rhs = f64::from(sign) * eval_harmonic(ct, p);
                    assert!((lhs - rhs).norm() < 1e-13, "{t}");
                }
            }
        }
    }
}
