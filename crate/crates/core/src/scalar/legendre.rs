//! Complex spherical harmonics via the associated Legendre recurrence.
//!
//! Oracle path for the azimuthally reduced cases; independent of both the
//! hypergeometric profile and the rotation-matrix sum.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `P_l^m(x)` for `m >= 0`, Condon-Shortley phase included.
fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    debug_assert!(m <= l);
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = pmm;
    let mut p = x * (2.0 * m as f64 + 1.0) * pmm;
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        let mf = m as f64;
        let next = ((2.0 * llf - 1.0) * x * p - (llf + mf - 1.0) * pm1) / (llf - mf);
        pm1 = p;
        p = next;
    }
    p
}

/// `Y_{l m}(theta, phi)` with the physics normalization
/// `int |Y|^2 dOmega = 1`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    if m.unsigned_abs() > l {
        return Complex64::new(0.0, 0.0);
    }
    if m < 0 {
        let pos = spherical_harmonic(l, -m, theta, phi);
        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return sign * pos.conj();
    }
    let mu = m as u32;
    let mut norm = (2.0 * l as f64 + 1.0) / (4.0 * PI);
    for k in (l - mu + 1)..=(l + mu) {
        norm /= k as f64;
    }
    let plm = assoc_legendre(l, mu, theta.cos());
    norm.sqrt() * plm * Complex64::new(0.0, m as f64 * phi).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        let (theta, phi) = (1.1, 0.6);
        let y00 = spherical_harmonic(0, 0, theta, phi);
        assert!((y00.re - 0.5 / PI.sqrt()).abs() < 1e-14);

        let y10 = spherical_harmonic(1, 0, theta, phi);
        let expect = (3.0 / (4.0 * PI)).sqrt() * theta.cos();
        assert!((y10.re - expect).abs() < 1e-14);

        let y11 = spherical_harmonic(1, 1, theta, phi);
        let amp = -(3.0 / (8.0 * PI)).sqrt() * theta.sin();
        let expect = amp * Complex64::new(0.0, phi).exp();
        assert!((y11 - expect).norm() < 1e-14);

        let y22 = spherical_harmonic(2, 2, theta, phi);
        let amp = 0.25 * (15.0 / (2.0 * PI)).sqrt() * theta.sin() * theta.sin();
        let expect = amp * Complex64::new(0.0, 2.0 * phi).exp();
        assert!((y22 - expect).norm() < 1e-14);
    }

    #[test]
    fn negative_m_symmetry() {
        let (theta, phi) = (0.8, 2.3);
        for l in 0..=4u32 {
            for m in 1..=(l as i32) {
                let plus = spherical_harmonic(l, m, theta, phi);
                let minus = spherical_harmonic(l, -m, theta, phi);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus - sign * plus.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn addition_theorem() {
        // sum_m |Y_{l m}|^2 = (2l+1)/(4 pi)
        let (theta, phi) = (1.4, 0.2);
        for l in 0..=5u32 {
            let total: f64 = (-(l as i32)..=(l as i32))
                .map(|m| spherical_harmonic(l, m, theta, phi).norm_sqr())
                .sum();
            let expect = (2.0 * l as f64 + 1.0) / (4.0 * PI);
            assert!((total - expect).abs() < 1e-13, "l={l}");
        }
    }
}
