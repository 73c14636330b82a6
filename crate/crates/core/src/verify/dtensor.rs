//! D-tensor checks: expansion routes, the frame tensors, recoupling
//! operations against componentwise algebra, products against the
//! expansion oracle, and the Gram matrix of the tensor basis.

use num_complex::Complex64;

use crate::dtensor::{
    epsilon, inner_product_integral, kronecker, scalar_product, tensor_product_closed_with,
    tensor_product_oracle, DTensorSignature, ExpandedDTensor, HarmonicCombination,
    ProductPairing, Variance,
};
use crate::geometry::rotation_operator_dtensor;

use super::{check, random_angles, CheckResult, VerifyConfig};

/// All spin-1 coupling chains of the given length from `l0` with labels
/// capped at `cap`.
fn chains(l0: u32, len: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for chain in &out {
            let prev = chain.last().copied().unwrap_or(l0);
            for l in prev.saturating_sub(1)..=(prev + 1).min(cap) {
                if crate::coupling::triangle_ok(prev, 1, l) {
                    let mut c = chain.clone();
                    c.push(l);
                    next.push(c);
                }
            }
        }
        out = next;
    }
    out
}

/// Every valid signature of the given rank with all labels capped at
/// `cap`, in a uniform variance pattern.
pub(super) fn cores(rank: usize, cap: u32, var: Variance) -> Vec<DTensorSignature> {
    let mut out = Vec::new();
    for l0 in 0..=cap {
        for chain in chains(l0, rank, cap) {
            let last = chain.last().copied().unwrap_or(l0);
            for m in -(last as i32)..=(last as i32) {
                for n in -(l0 as i32)..=(l0 as i32) {
                    out.push(
                        DTensorSignature::new(l0, chain.clone(), m, n, vec![var; rank])
                            .expect("enumerated labels are valid"),
                    );
                }
            }
        }
    }
    out
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    ((b as i32 - a as i32) * (c as i32 - b as i32) * (c as i32 - a as i32)) as f64 / 2.0
}

/// The two expansion builders agree coefficient by coefficient.
fn expansion_routes(cfg: &VerifyConfig) -> CheckResult {
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for rank in 0..=3usize {
        for sig in cores(rank, 3, Variance::Vector) {
            count += 1;
            let recursive = ExpandedDTensor::build_recursive(&sig);
            let explicit = ExpandedDTensor::build_explicit(&sig);
            worst = worst.max(recursive.distance(&explicit));
        }
    }
    check(
        cfg,
        "08",
        "recursive and explicit expansions agree",
        worst,
        1e-12,
        format!("{count} signatures, rank <= 3, labels <= 3"),
    )
}

/// The Kronecker combination evaluates to the identity matrix.
fn kronecker_components(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "09a");
    let field = kronecker();
    let mut worst = 0.0f64;
    for _ in 0..2 {
        let p = random_angles(&mut rng, 0.2);
        let t = field.evaluate(p);
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((t.get(&[a, b]) - expected).norm());
            }
        }
    }
    check(
        cfg,
        "09a",
        "Kronecker combination evaluates to the identity",
        worst,
        1e-14,
        "9 components at 2 points".to_string(),
    )
}

/// The antisymmetric combination evaluates to the Levi-Civita symbol.
fn epsilon_components(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "09b");
    let field = epsilon();
    let mut worst = 0.0f64;
    for _ in 0..2 {
        let p = random_angles(&mut rng, 0.2);
        let t = field.evaluate(p);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let expected = levi_civita(a, b, c);
                    worst = worst.max((t.get(&[a, b, c]) - expected).norm());
                }
            }
        }
    }
    check(
        cfg,
        "09b",
        "antisymmetric combination evaluates to the Levi-Civita symbol",
        worst,
        1e-14,
        "27 components at 2 points".to_string(),
    )
}

/// Both frame tensors are annihilated by every rotation operator.
fn frame_invariance(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "09c");
    let p = random_angles(&mut rng, 0.4);
    let mut worst = 0.0f64;
    for field in [kronecker(), epsilon()] {
        for j in 1..=3 {
            let derivative = rotation_operator_dtensor(|q| field.evaluate(q), j, p, cfg.fd_step)
                .expect("point stays away from the axis");
            worst = worst.max(derivative.max_abs());
        }
    }
    check(
        cfg,
        "09c",
        "rotation operators annihilate the frame tensors",
        worst,
        1e-6,
        "Kronecker and Levi-Civita, all three flows".to_string(),
    )
}

/// Slot transposes and adjacent contractions match plain componentwise
/// index shuffles and traces.
fn recoupling_pointwise(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "10a");
    let points: Vec<_> = (0..50).map(|_| random_angles(&mut rng, 1e-3)).collect();
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for rank in 2..=3usize {
        for core in cores(rank, 2, Variance::Vector) {
            count += 1;
            // transposes on a uniform pattern, every adjacent pair
            let combi = HarmonicCombination::from_signature(&core);
            let mut swapped = Vec::new();
            for i in 0..rank - 1 {
                let mut perm: Vec<usize> = (0..rank).collect();
                perm.swap(i, i + 1);
                swapped.push((perm, combi.transpose_adjacent(i).expect("uniform pattern")));
            }
            // adjacent contraction on the mixed pattern with the pair first
            let mut mixed = vec![Variance::Vector; rank];
            mixed[1] = Variance::Covector;
            let mixed_sig = core.with_variances(mixed).expect("same arity");
            let mixed_combi = HarmonicCombination::from_signature(&mixed_sig);
            let contracted = mixed_combi.contract_adjacent(0).expect("opposite pair");
            for &p in &points {
                let base = combi.evaluate(p);
                for (perm, transposed) in &swapped {
                    worst = worst.max(transposed.evaluate(p).distance(&base.permuted(perm)));
                }
                worst = worst.max(contracted.evaluate(p).distance(&base.traced(0, 1)));
            }
        }
    }
    check(
        cfg,
        "10a",
        "transposes and contractions match componentwise shuffles and traces",
        worst,
        1e-10,
        format!("{count} signatures, rank 2 and 3, labels <= 2, 50 points"),
    )
}

/// Rank-2 traces collapse to a single scalar harmonic with the dimension
/// ratio coefficient, and vanish when the outer labels differ.
fn rank_two_trace(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "10b");
    let points: Vec<_> = (0..3).map(|_| random_angles(&mut rng, 1e-3)).collect();
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for core in cores(2, 3, Variance::Vector) {
        count += 1;
        let sig = core
            .with_variances(vec![Variance::Vector, Variance::Covector])
            .expect("rank 2");
        let traced = HarmonicCombination::from_signature(&sig)
            .contract_adjacent(0)
            .expect("opposite pair");
        let mut expected = HarmonicCombination::zero(Vec::new());
        if sig.label(2) == sig.l0() {
            let (l0, l1) = (sig.l0(), sig.label(1));
            let ratio = ((2 * l1 as i64 + 1) as f64 / (2 * l0 as i64 + 1) as f64).sqrt();
            let sign = if (l1 + l0) % 2 == 1 { -1.0 } else { 1.0 };
            expected
                .add_term(
                    DTensorSignature::scalar(l0, sig.m(), sig.n()).expect("|m| <= l2 = l0"),
                    Complex64::new(sign * ratio, 0.0),
                )
                .expect("scalar pattern");
        }
        worst = worst.max(traced.distance(&expected));
        for &p in &points {
            let numeric = HarmonicCombination::from_signature(&sig)
                .evaluate(p)
                .traced(0, 1);
            worst = worst.max((numeric.get(&[]) - expected.evaluate(p).get(&[])).norm());
        }
    }
    check(
        cfg,
        "10b",
        "rank-2 traces reduce to the closed one-term formula",
        worst,
        1e-12,
        format!("{count} signatures, labels <= 3, coefficients and 3 points"),
    )
}

/// Closed-form tensor products against the expansion oracle, for both
/// pairing conventions.
fn product_routes(cfg: &VerifyConfig) -> CheckResult {
    let mut leading = 0.0f64;
    let mut trailing = 0.0f64;
    let mut count = 0u32;
    for (ka, kb) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
        let left = cores(ka, 2, Variance::Vector);
        let right = cores(kb, 2, Variance::Vector);
        for a in &left {
            for b in &right {
                count += 1;
                let oracle = tensor_product_oracle(a, b).expect("valid operands");
                let close =
                    tensor_product_closed_with(a, b, ProductPairing::FirstOperandLeading)
                        .expect("valid operands");
                leading = leading.max(close.distance(&oracle));
                let other =
                    tensor_product_closed_with(a, b, ProductPairing::FirstOperandTrailing)
                        .expect("valid operands");
                trailing = trailing.max(other.distance(&oracle));
            }
        }
    }
    check(
        cfg,
        "11a",
        "closed tensor products match the expansion oracle",
        leading,
        1e-10,
        format!(
            "{count} operand pairs, ranks summing to <= 2, labels <= 2; \
             first-operand-leading measured {leading:.3e}, trailing variant {trailing:.3e}"
        ),
    )
}

/// The 6j scalar product of rank-1 tensors matches pointwise dots.
fn scalar_product_pointwise(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "11b");
    let points: Vec<_> = (0..20).map(|_| random_angles(&mut rng, 1e-3)).collect();
    let vectors = cores(1, 2, Variance::Vector);
    let covectors = cores(1, 2, Variance::Covector);
    let mut worst = 0.0f64;
    for a in &vectors {
        for b in &covectors {
            let product = scalar_product(a, b).expect("rank 1, opposite variances");
            for &p in &points {
                let ta = HarmonicCombination::from_signature(a).evaluate(p);
                let tb = HarmonicCombination::from_signature(b).evaluate(p);
                let dot: Complex64 = (0..3).map(|i| ta.get(&[i]) * tb.get(&[i])).sum();
                worst = worst.max((product.evaluate(p).get(&[]) - dot).norm());
            }
        }
    }
    check(
        cfg,
        "11b",
        "6j scalar products match pointwise dots",
        worst,
        1e-10,
        format!(
            "{} x {} rank-1 pairs, labels <= 2, 20 points",
            vectors.len(),
            covectors.len()
        ),
    )
}

/// The orthogonality pairing makes the tensor basis a scaled orthonormal
/// system, rank by rank. The bracket contracts slots in reversed order,
/// so aligning slots means pairing against the slot-reversed second
/// factor; the reversal itself goes through the closed recoupling.
fn gram(cfg: &VerifyConfig) -> CheckResult {
    let spec = cfg.quadrature();
    let norm = 8.0 * std::f64::consts::PI.powi(2);
    let mut worst = 0.0f64;
    let mut pairs = 0u64;
    for rank in 0..=2usize {
        let reversal: Vec<usize> = (0..rank).rev().collect();
        let lhs = cores(rank, 3, Variance::Vector);
        let rhs: Vec<HarmonicCombination> = cores(rank, 3, Variance::Covector)
            .iter()
            .map(|b| {
                HarmonicCombination::from_signature(b)
                    .permute(&reversal)
                    .expect("uniform pattern")
            })
            .collect();
        for (i, a) in lhs.iter().enumerate() {
            let ca = HarmonicCombination::from_signature(a);
            for (j, cb) in rhs.iter().enumerate() {
                pairs += 1;
                let value =
                    inner_product_integral(&ca, cb, &spec).expect("orders cover labels <= 3");
                let expected = if i == j { norm } else { 0.0 };
                worst = worst.max((value - expected).norm() / norm);
            }
        }
    }
    check(
        cfg,
        "12",
        "tensor harmonic Gram matrix is 8 pi^2 times the identity",
        worst,
        1e-8,
        format!("{pairs} pairs, rank <= 2, labels <= 3, relative"),
    )
}

/// Permutations compose: applying a 3-cycle twice equals the inverse
/// cycle, and the identity permutation is inert.
fn permutation_composition(cfg: &VerifyConfig) -> CheckResult {
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for core in cores(3, 2, Variance::Vector) {
        count += 1;
        let combi = HarmonicCombination::from_signature(&core);
        let cycle = combi
            .permute(&[1, 2, 0])
            .and_then(|c| c.permute(&[1, 2, 0]))
            .expect("uniform pattern");
        let direct = combi.permute(&[2, 0, 1]).expect("uniform pattern");
        worst = worst.max(cycle.distance(&direct));
        let identity = combi.permute(&[0, 1, 2]).expect("uniform pattern");
        worst = worst.max(identity.distance(&combi));
    }
    check(
        cfg,
        "d1",
        "slot permutations compose",
        worst,
        1e-10,
        format!("{count} rank-3 signatures, labels <= 2"),
    )
}

/// Non-adjacent contraction is independent of the transpose path and
/// matches the componentwise trace.
fn contraction_paths(cfg: &VerifyConfig) -> CheckResult {
    let mut rng = super::rng_for(cfg, "d2");
    let points: Vec<_> = (0..20).map(|_| random_angles(&mut rng, 1e-3)).collect();
    let patterns = [
        // the interior slot shares the right end's variance
        vec![Variance::Vector, Variance::Covector, Variance::Covector],
        // the interior slot shares the left end's variance
        vec![Variance::Vector, Variance::Vector, Variance::Covector],
    ];
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for core in cores(3, 2, Variance::Vector) {
        for pattern in &patterns {
            count += 1;
            let sig = core.with_variances(pattern.clone()).expect("rank 3");
            let combi = HarmonicCombination::from_signature(&sig);
            let contracted = combi.contract(0, 2).expect("opposite end variances");
            for &p in &points {
                let numeric = combi.evaluate(p).traced(0, 2);
                worst = worst.max(contracted.evaluate(p).distance(&numeric));
            }
        }
    }
    check(
        cfg,
        "d2",
        "non-adjacent contraction agrees with the componentwise trace",
        worst,
        1e-10,
        format!("{count} signature patterns, both transpose paths, 20 points"),
    )
}

/// Adjacent transposes satisfy the braid relation.
fn braid_relation(cfg: &VerifyConfig) -> CheckResult {
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for core in cores(3, 2, Variance::Covector) {
        count += 1;
        let combi = HarmonicCombination::from_signature(&core);
        let aba = combi
            .transpose_adjacent(0)
            .and_then(|c| c.transpose_adjacent(1))
            .and_then(|c| c.transpose_adjacent(0))
            .expect("uniform pattern");
        let bab = combi
            .transpose_adjacent(1)
            .and_then(|c| c.transpose_adjacent(0))
            .and_then(|c| c.transpose_adjacent(1))
            .expect("uniform pattern");
        worst = worst.max(aba.distance(&bab));
    }
    check(
        cfg,
        "d3",
        "adjacent transposes satisfy the braid relation",
        worst,
        1e-10,
        format!("{count} rank-3 signatures, labels <= 2"),
    )
}

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        expansion_routes(cfg),
        kronecker_components(cfg),
        epsilon_components(cfg),
        frame_invariance(cfg),
        recoupling_pointwise(cfg),
        rank_two_trace(cfg),
        product_routes(cfg),
        scalar_product_pointwise(cfg),
        gram(cfg),
        permutation_composition(cfg),
        contraction_paths(cfg),
        braid_relation(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_enumeration_counts_are_frozen() {
        assert_eq!(cores(0, 3, Variance::Vector).len(), 84);
        assert_eq!(cores(1, 3, Variance::Vector).len(), 189);
        assert_eq!(cores(2, 3, Variance::Vector).len(), 459);
    }

    #[test]
    fn frame_checks_are_green() {
        let cfg = VerifyConfig::default();
        for result in [
            kronecker_components(&cfg),
            epsilon_components(&cfg),
            frame_invariance(&cfg),
        ] {
            assert!(
                result.passed,
                "{}: measured {:.3e} vs tolerance {:.3e}",
                result.id, result.measured, result.tolerance
            );
        }
    }
}
