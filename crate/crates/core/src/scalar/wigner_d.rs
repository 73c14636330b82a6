//! Rotation-matrix elements by the explicit half-angle factorial sum.
//!
//! Oracle path: shares no code with the hypergeometric profile evaluation,
//! so agreement between the two is evidence, not tautology.

use num_complex::Complex64;

fn fact(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (2..=n).map(|k| k as f64).product()
}

/// `D^l_{m,n}(phi, theta, beta)` for the z-y-z angle convention.
pub fn wigner_d_element(l: u32, m: i32, n: i32, phi: f64, theta: f64, beta: f64) -> Complex64 {
    let li = l as i64;
    let (mi, ni) = (m as i64, n as i64);
    if mi.abs() > li || ni.abs() > li {
        return Complex64::new(0.0, 0.0);
    }
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let s_min = 0i64.max(ni - mi);
    let s_max = (li + ni).min(li - mi);
    let mut small_d = 0.0;
    for t in s_min..=s_max {
        let den = fact(t) * fact(li + ni - t) * fact(li - mi - t) * fact(mi - ni + t);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        small_d += sign / den
            * c.powi((2 * li + ni - mi - 2 * t) as i32)
            * s.powi((mi - ni + 2 * t) as i32);
    }
    let amp = (fact(li + mi) * fact(li - mi) * fact(li + ni) * fact(li - ni)).sqrt();
    let phase_sign = if (mi - ni).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let azimuth = Complex64::new(0.0, -(m as f64) * phi - (n as f64) * beta).exp();
    phase_sign * amp * small_d * azimuth
}
