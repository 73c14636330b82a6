//! Exact angular-momentum coupling: Wigner 3j and 6j symbols and
//! Clebsch-Gordan coefficients over [`RadicalRational`] arithmetic.
//!
//! The closed forms are single alternating sums of factorial ratios under a
//! square root. Factorials are kept as prime-exponent vectors so every ratio
//! reduces exactly; the rational prefactor and the radicand never touch
//! floating point. [`six_j_from_contraction`] recomputes the 6j symbol by the
//! four-3j magnetic sum and serves as an independent cross-check of the
//! closed form.

mod primes;
mod radical;

pub use radical::RadicalRational;

pub(crate) use primes::PrimePowers;
pub(crate) use radical::RadicalSum;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Arguments of a Wigner 3j symbol with integer momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub j1: u32,
    pub j2: u32,
    pub j3: u32,
    pub m1: i32,
    pub m2: i32,
    pub m3: i32,
}

impl ThreeJArgs {
    pub fn new(j1: u32, j2: u32, j3: u32, m1: i32, m2: i32, m3: i32) -> Self {
        ThreeJArgs { j1, j2, j3, m1, m2, m3 }
    }
}

/// Arguments of a Wigner 6j symbol with integer momenta, row-major:
/// `{j1 j2 j3; j4 j5 j6}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SixJArgs {
    pub j1: u32,
    pub j2: u32,
    pub j3: u32,
    pub j4: u32,
    pub j5: u32,
    pub j6: u32,
}

impl SixJArgs {
    pub fn new(j1: u32, j2: u32, j3: u32, j4: u32, j5: u32, j6: u32) -> Self {
        SixJArgs { j1, j2, j3, j4, j5, j6 }
    }
}

pub(crate) fn triangle_ok(a: u32, b: u32, c: u32) -> bool {
    c as i64 >= (a as i64 - b as i64).abs() && c <= a + b
}

fn parity_sign(e: i64) -> i8 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

/// Triangle coefficient `(a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!` as prime
/// powers. Caller guarantees the triangle condition.
fn delta_powers(a: u32, b: u32, c: u32) -> PrimePowers {
    let mut p = PrimePowers::one();
    p.mul_factorial(a + b - c);
    p.mul_factorial(a + c - b);
    p.mul_factorial(b + c - a);
    p.div_factorial(a + b + c + 1);
    p
}

static FACTORED_3J: OnceLock<Mutex<HashMap<ThreeJArgs, (BigRational, PrimePowers)>>> =
    OnceLock::new();

/// 3j symbol as `coeff * sqrt(radical)` with exact rational `coeff` and the
/// radical held in factored form. Zero is `(0, 1)`.
pub(crate) fn three_j_factored(args: ThreeJArgs) -> (BigRational, PrimePowers) {
    let cache = FACTORED_3J.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&args) {
        return hit.clone();
    }
    let value = compute_three_j_factored(args);
    cache.lock().unwrap().insert(args, value.clone());
    value
}

fn compute_three_j_factored(args: ThreeJArgs) -> (BigRational, PrimePowers) {
    let ThreeJArgs { j1, j2, j3, m1, m2, m3 } = args;
    let zero = (BigRational::zero(), PrimePowers::one());
    if m1 + m2 + m3 != 0 {
        return zero;
    }
    if m1.unsigned_abs() > j1 || m2.unsigned_abs() > j2 || m3.unsigned_abs() > j3 {
        return zero;
    }
    if !triangle_ok(j1, j2, j3) {
        return zero;
    }

    let mut radical = delta_powers(j1, j2, j3);
    radical.mul_factorial((j1 as i64 + m1 as i64) as u32);
    radical.mul_factorial((j1 as i64 - m1 as i64) as u32);
    radical.mul_factorial((j2 as i64 + m2 as i64) as u32);
    radical.mul_factorial((j2 as i64 - m2 as i64) as u32);
    radical.mul_factorial((j3 as i64 + m3 as i64) as u32);
    radical.mul_factorial((j3 as i64 - m3 as i64) as u32);

    let (j1, j2, j3) = (j1 as i64, j2 as i64, j3 as i64);
    let (m1, m2, m3) = (m1 as i64, m2 as i64, m3 as i64);
    let t_min = 0i64.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let t_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);

    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let mut den = PrimePowers::one();
        den.div_factorial(t as u32);
        den.div_factorial((j3 - j2 + m1 + t) as u32);
        den.div_factorial((j3 - j1 - m2 + t) as u32);
        den.div_factorial((j1 + j2 - j3 - t) as u32);
        den.div_factorial((j1 - m1 - t) as u32);
        den.div_factorial((j2 + m2 - t) as u32);
        let mut term = den.to_rational();
        if parity_sign(t) < 0 {
            term = -term;
        }
        sum += term;
    }
    if sum.is_zero() {
        return zero;
    }
    if parity_sign(j1 - j2 - m3) < 0 {
        sum = -sum;
    }
    (sum, radical)
}

fn collapse(coeff: BigRational, radical: &PrimePowers) -> RadicalRational {
    if coeff.is_zero() {
        return RadicalRational::zero();
    }
    let sign = rational_sign(&coeff);
    RadicalRational::new(sign, &coeff * &coeff * radical.to_rational())
}

/// Wigner 3j symbol, exact.
pub fn three_j(args: ThreeJArgs) -> RadicalRational {
    let (coeff, radical) = three_j_factored(args);
    collapse(coeff, &radical)
}

static SIX_J: OnceLock<Mutex<HashMap<SixJArgs, RadicalRational>>> = OnceLock::new();

/// Wigner 6j symbol by the single-sum closed form, exact.
pub fn six_j(args: SixJArgs) -> RadicalRational {
    let cache = SIX_J.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&args) {
        return hit.clone();
    }
    let value = compute_six_j(args);
    cache.lock().unwrap().insert(args, value.clone());
    value
}

fn compute_six_j(args: SixJArgs) -> RadicalRational {
    let SixJArgs { j1, j2, j3, j4, j5, j6 } = args;
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle_ok(a, b, c)) {
        return RadicalRational::zero();
    }
    let mut radical = PrimePowers::one();
    for &(a, b, c) in &triads {
        radical.mul_assign(&delta_powers(a, b, c));
    }

    let (j1, j2, j3) = (j1 as i64, j2 as i64, j3 as i64);
    let (j4, j5, j6) = (j4 as i64, j5 as i64, j6 as i64);
    let s = [j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3];
    let p = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4];
    let t_min = *s.iter().max().expect("nonempty");
    let t_max = *p.iter().min().expect("nonempty");

    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let mut num = PrimePowers::one();
        num.mul_factorial((t + 1) as u32);
        for &sk in &s {
            num.div_factorial((t - sk) as u32);
        }
        for &pk in &p {
            num.div_factorial((pk - t) as u32);
        }
        let mut term = num.to_rational();
        if parity_sign(t) < 0 {
            term = -term;
        }
        sum += term;
    }
    collapse(sum, &radical)
}

/// 6j symbol recomputed as the magnetic contraction of four 3j symbols:
///
/// `sum over m1..m6 of (-1)^(sum_k (j_k - m_k))`
/// `  * 3j(j1 j2 j3; -m1 -m2 -m3) * 3j(j1 j5 j6; m1 -m5 m6)`
/// `  * 3j(j4 j2 j6; m4 m2 -m6) * 3j(j4 j5 j3; -m4 m5 m3)`
///
/// with three free magnetic indices after the zero-sum constraints. The sum
/// is carried exactly over squarefree radical kernels; the theory guarantees
/// a single kernel survives, and this function panics otherwise rather than
/// return an approximate value.
pub fn six_j_from_contraction(args: SixJArgs) -> RadicalRational {
    let SixJArgs { j1, j2, j3, j4, j5, j6 } = args;
    let j_total = (j1 + j2 + j3 + j4 + j5 + j6) as i64;
    let mut acc = RadicalSum::new();
    for m1 in -(j1 as i32)..=(j1 as i32) {
        for m2 in -(j2 as i32)..=(j2 as i32) {
            let m3 = -m1 - m2;
            if m3.unsigned_abs() > j3 {
                continue;
            }
            for m5 in -(j5 as i32)..=(j5 as i32) {
                let m6 = m5 - m1;
                if m6.unsigned_abs() > j6 {
                    continue;
                }
                let m4 = m6 - m2;
                if m4.unsigned_abs() > j4 {
                    continue;
                }
                let (c1, r1) =
                    three_j_factored(ThreeJArgs::new(j1, j2, j3, -m1, -m2, -m3));
                if c1.is_zero() {
                    continue;
                }
                let (c2, r2) = three_j_factored(ThreeJArgs::new(j1, j5, j6, m1, -m5, m6));
                if c2.is_zero() {
                    continue;
                }
                let (c3, r3) = three_j_factored(ThreeJArgs::new(j4, j2, j6, m4, m2, -m6));
                if c3.is_zero() {
                    continue;
                }
                let (c4, r4) = three_j_factored(ThreeJArgs::new(j4, j5, j3, -m4, m5, m3));
                if c4.is_zero() {
                    continue;
                }
                let m_total = (m1 + m2 + m3 + m4 + m5 + m6) as i64;
                let mut coeff = c1 * c2 * c3 * c4;
                if parity_sign(j_total - m_total) < 0 {
                    coeff = -coeff;
                }
                let mut radical = r1;
                radical.mul_assign(&r2);
                radical.mul_assign(&r3);
                radical.mul_assign(&r4);
                let (scale, kernel) = radical.split_square();
                acc.add_term(kernel, coeff * scale);
            }
        }
    }
    acc.into_radical().expect(
        "four-3j contraction left incommensurable radicals; coupling arithmetic is inconsistent",
    )
}

/// Clebsch-Gordan coefficient `<j1 m1, j2 m2 | j3 m3>`, exact.
pub fn clebsch_gordan(j1: u32, m1: i32, j2: u32, m2: i32, j3: u32, m3: i32) -> RadicalRational {
    let symbol = three_j(ThreeJArgs::new(j1, j2, j3, m1, m2, -m3));
    if symbol.is_zero() {
        return RadicalRational::zero();
    }
    let scaled = RadicalRational::sqrt_of(BigRational::from_integer((2 * j3 as i64 + 1).into()))
        * symbol;
    if parity_sign(j1 as i64 - j2 as i64 + m3 as i64) < 0 {
        -scaled
    } else {
        scaled
    }
}

/// Exact value of `(2 j3 + 1) * sum_{m1,m2} 3j(j1 j2 j3; m1 m2 m3)
/// * 3j(j1 j2 j3'; m1 m2 m3')`, which the orthogonality relations pin to
/// `delta(j3,j3') * delta(m3,m3')` whenever `(j1,j2,j3)` is a triangle.
/// `None` if the radical sum fails to collapse (which would falsify the
/// closed form).
pub fn three_j_orthogonality_sum(
    j1: u32,
    j2: u32,
    j3: u32,
    j3p: u32,
    m3: i32,
    m3p: i32,
) -> Option<RadicalRational> {
    let mut acc = RadicalSum::new();
    for m1 in -(j1 as i32)..=(j1 as i32) {
        for m2 in -(j2 as i32)..=(j2 as i32) {
            let (c1, r1) = three_j_factored(ThreeJArgs::new(j1, j2, j3, m1, m2, m3));
            if c1.is_zero() {
                continue;
            }
            let (c2, r2) = three_j_factored(ThreeJArgs::new(j1, j2, j3p, m1, m2, m3p));
            if c2.is_zero() {
                continue;
            }
            let mut radical = r1;
            radical.mul_assign(&r2);
            let (scale, kernel) = radical.split_square();
            acc.add_term(kernel, c1 * c2 * scale);
        }
    }
    let sum = acc.into_radical()?;
    Some(sum.scale(&BigRational::from_integer((2 * j3 as i64 + 1).into())))
}
