//! Verification suites: every identity the crate implements, checked
//! against an independent route at a stated tolerance.
//!
//! Each check owns a stable id and reports the measured defect next to its
//! tolerance, so a report stays meaningful when it fails. Randomness is
//! deterministic per check: the run seed is folded with the check id, which
//! keeps reports byte-stable for a fixed configuration.

mod coupling;
mod dtensor;
mod finsler;
mod geometry;
mod scalar;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::quadrature::QuadratureSpec;
use crate::scalar::AnglePoint;
use crate::{Error, Result};

/// Knobs shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Base seed for the sampled checks.
    pub seed: u64,
    /// Gauss-Legendre order in `cos(theta)`.
    pub theta_order: usize,
    /// Uniform points on the `phi` circle.
    pub phi_points: usize,
    /// Uniform points on the `beta` circle.
    pub beta_points: usize,
    /// Step for first-order flow differences; also the Richardson base
    /// step of the Casimir checks.
    pub fd_step: f64,
    /// Coefficients below this norm are dropped when combinations are
    /// compared.
    pub prune_tol: f64,
    /// Multiplies every check tolerance; 1 runs the suites as specified.
    pub tol_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            theta_order: 32,
            phi_points: 64,
            beta_points: 64,
            fd_step: 1e-5,
            prune_tol: 1e-12,
            tol_scale: 1.0,
        }
    }
}

impl VerifyConfig {
    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            theta_order: self.theta_order,
            phi_points: self.phi_points,
            beta_points: self.beta_points,
        }
    }
}

/// One verified identity: what was measured against what bound.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

/// All checks of one suite, ordered by id.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Coupling,
    Scalar,
    DTensor,
    Geometry,
    Finsler,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coupling" => Ok(Suite::Coupling),
            "scalar" => Ok(Suite::Scalar),
            "dtensor" => Ok(Suite::DTensor),
            "geometry" => Ok(Suite::Geometry),
            "finsler" => Ok(Suite::Finsler),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!(
                "unknown suite '{other}'; expected coupling|scalar|dtensor|geometry|finsler|all"
            ))),
        }
    }
}

/// Runs one suite (or all of them) and returns the canonically ordered
/// report.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let (name, mut checks) = match suite {
        Suite::Coupling => ("coupling", coupling::checks(cfg)),
        Suite::Scalar => ("scalar", scalar::checks(cfg)),
        Suite::DTensor => ("dtensor", dtensor::checks(cfg)),
        Suite::Geometry => ("geometry", geometry::checks(cfg)),
        Suite::Finsler => ("finsler", finsler::checks(cfg)),
        Suite::All => {
            let mut all = coupling::checks(cfg);
            all.extend(scalar::checks(cfg));
            all.extend(dtensor::checks(cfg));
            all.extend(geometry::checks(cfg));
            all.extend(finsler::checks(cfg));
            ("all", all)
        }
    };
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport {
        suite: name.to_string(),
        checks,
    }
}

fn fnv1a(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Deterministic generator for one check, independent of check order.
fn rng_for(cfg: &VerifyConfig, id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ fnv1a(id))
}

fn check(
    cfg: &VerifyConfig,
    id: &str,
    description: &str,
    measured: f64,
    base_tolerance: f64,
    detail: String,
) -> CheckResult {
    let tolerance = base_tolerance * cfg.tol_scale;
    CheckResult {
        id: id.to_string(),
        description: description.to_string(),
        measured,
        tolerance,
        passed: measured.is_finite() && measured <= tolerance,
        detail,
    }
}

/// Uniform point on the angle space, with the polar angle kept `margin`
/// away from the poles so chart-based flows stay regular.
fn random_angles(rng: &mut ChaCha8Rng, margin: f64) -> AnglePoint {
    let theta = rng.gen_range(margin..(std::f64::consts::PI - margin));
    let phi = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
    let beta = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
    AnglePoint { theta, phi, beta }
}
