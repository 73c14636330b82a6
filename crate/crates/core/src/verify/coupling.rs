//! Exact coupling checks: orthogonality, column symmetry, and the
//! four-3j contraction route to the 6j symbol. Everything here compares
//! radical-rational values for equality; `measured` is a violation count.

use num_rational::BigRational;
use num_traits::One;

use crate::coupling::{
    six_j, six_j_from_contraction, three_j, three_j_orthogonality_sum, RadicalRational, SixJArgs,
    ThreeJArgs,
};

use super::{check, CheckResult, VerifyConfig};

const J_MAX: u32 = 6;
const SIX_J_MAX: u32 = 4;

fn triangle_range(j1: u32, j2: u32, cap: u32) -> std::ops::RangeInclusive<u32> {
    j1.abs_diff(j2)..=cap.min(j1 + j2)
}

/// Sum over `m1, m2` of paired 3j symbols against the Kronecker target,
/// all `j <= 6`, every magnetic pair.
fn orthogonality(cfg: &VerifyConfig) -> CheckResult {
    let one = RadicalRational::from_rational(&BigRational::one());
    let zero = RadicalRational::zero();
    let mut cases = 0u64;
    let mut violations = 0u64;
    for j1 in 0..=J_MAX {
        for j2 in 0..=J_MAX {
            for j3 in triangle_range(j1, j2, J_MAX) {
                for j3p in triangle_range(j1, j2, J_MAX) {
                    for m3 in -(j3 as i32)..=(j3 as i32) {
                        for m3p in -(j3p as i32)..=(j3p as i32) {
                            cases += 1;
                            let expected = if j3 == j3p && m3 == m3p { &one } else { &zero };
                            match three_j_orthogonality_sum(j1, j2, j3, j3p, m3, m3p) {
                                Some(sum) if sum == *expected => {}
                                _ => violations += 1,
                            }
                        }
                    }
                }
            }
        }
    }
    check(
        cfg,
        "01a",
        "3j orthogonality sums collapse to Kronecker deltas exactly",
        violations as f64,
        0.0,
        format!("{cases} sums, all j <= {J_MAX}"),
    )
}

/// Column exchange picks up `(-1)^(j1+j2+j3)`; cyclic rotation is free.
fn column_symmetry(cfg: &VerifyConfig) -> CheckResult {
    let mut cases = 0u64;
    let mut violations = 0u64;
    for j1 in 0..=J_MAX {
        for j2 in 0..=J_MAX {
            for j3 in triangle_range(j1, j2, J_MAX) {
                for m1 in -(j1 as i32)..=(j1 as i32) {
                    for m2 in -(j2 as i32)..=(j2 as i32) {
                        let m3 = -m1 - m2;
                        if m3.unsigned_abs() > j3 {
                            continue;
                        }
                        cases += 1;
                        let base = three_j(ThreeJArgs::new(j1, j2, j3, m1, m2, m3));
                        let swapped = three_j(ThreeJArgs::new(j2, j1, j3, m2, m1, m3));
                        let cycled = three_j(ThreeJArgs::new(j2, j3, j1, m2, m3, m1));
                        let signed = if (j1 + j2 + j3) % 2 == 1 { -base.clone() } else { base.clone() };
                        if swapped != signed || cycled != base {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    check(
        cfg,
        "01b",
        "3j column exchange and cyclic symmetries hold exactly",
        violations as f64,
        0.0,
        format!("{cases} symbols, all j <= {J_MAX}"),
    )
}

/// Closed-form 6j equals the four-3j magnetic contraction, entry by entry.
fn six_j_routes(cfg: &VerifyConfig) -> CheckResult {
    let mut cases = 0u64;
    let mut violations = 0u64;
    for j1 in 0..=SIX_J_MAX {
        for j2 in 0..=SIX_J_MAX {
            for j3 in 0..=SIX_J_MAX {
                for j4 in 0..=SIX_J_MAX {
                    for j5 in 0..=SIX_J_MAX {
                        for j6 in 0..=SIX_J_MAX {
                            cases += 1;
                            let args = SixJArgs::new(j1, j2, j3, j4, j5, j6);
                            if six_j(args) != six_j_from_contraction(args) {
                                violations += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    check(
        cfg,
        "01c",
        "6j closed form equals the four-3j contraction exactly",
        violations as f64,
        0.0,
        format!("{cases} argument tuples, all j <= {SIX_J_MAX}"),
    )
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![orthogonality(cfg), column_symmetry(cfg), six_j_routes(cfg)]
}
