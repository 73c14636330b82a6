//! Harmonic d-tensors: tensor fields on the angle space whose components
//! are finite combinations of scalar harmonics times basis monomials.
//!
//! A signature couples a leading label through a spin-1 chain, one step per
//! tensor slot. All algebraic operations (transposition, contraction,
//! products) stay inside finite signature combinations with closed-form
//! coefficients; the expansion into monomials provides an independent
//! pointwise route used to cross-check every one of them.

mod combination;
mod component;
mod expansion;
mod ops;
mod signature;

pub use combination::{epsilon, kronecker, HarmonicCombination};
pub use component::{basis_vector, ComponentTensor};
pub use expansion::ExpandedDTensor;
pub use ops::{
    inner_product_integral, scalar_product, tensor_product_closed,
    tensor_product_closed_with, tensor_product_combinations, tensor_product_oracle,
    ProductPairing,
};
pub use signature::{DTensorSignature, Variance};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureSpec;
    use crate::scalar::AnglePoint;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn sig(s: &str) -> DTensorSignature {
        s.parse().expect("valid signature")
    }

    fn points() -> Vec<AnglePoint> {
        vec![
            AnglePoint { theta: 0.7, phi: 1.1, beta: 2.4 },
            AnglePoint { theta: 1.9, phi: 4.0, beta: 0.3 },
            AnglePoint { theta: 2.6, phi: 0.2, beta: 5.1 },
        ]
    }

    #[test]
    fn kronecker_is_the_identity_and_traces_to_three() {
        let delta = kronecker();
        for p in points() {
            let t = delta.evaluate(p);
            for a in 0..3 {
                for b in 0..3 {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((t.get(&[a, b]) - Complex64::new(want, 0.0)).norm() < 1e-14);
                }
            }
        }
        let traced = delta.contract_adjacent(0).unwrap();
        for p in points() {
            let v = traced.evaluate(p).get(&[]);
            assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn epsilon_changes_sign_under_adjacent_transposes() {
        let eps = epsilon();
        for i in [0, 1] {
            let swapped = eps.transpose_adjacent(i).unwrap();
            let mut negated = eps.clone();
            negated.scale(Complex64::new(-1.0, 0.0));
            assert!(
                swapped.distance(&negated) < 1e-14,
                "slot {i}: distance {}",
                swapped.distance(&negated)
            );
        }
    }

    #[test]
    fn transpose_matches_componentwise_swap() {
        for s in ["1|1,1;1,0;v,v", "2|2,1;0,1;c,c", "0|1,1,0;0,0;c,c,c"] {
            let comb = HarmonicCombination::from_signature(&sig(s));
            let k = comb.rank();
            for i in 0..k - 1 {
                let swapped = comb.transpose_adjacent(i).unwrap();
                let mut perm: Vec<usize> = (0..k).collect();
                perm.swap(i, i + 1);
                for p in points() {
                    let direct = comb.evaluate(p).permuted(&perm);
                    let routed = swapped.evaluate(p);
                    assert!(
                        routed.distance(&direct) < 1e-12,
                        "{s} slot {i}: {}",
                        routed.distance(&direct)
                    );
                }
            }
        }
    }

    #[test]
    fn transpose_is_an_involution() {
        let comb = HarmonicCombination::from_signature(&sig("2|1,2;1,-1;v,v"));
        let back = comb
            .transpose_adjacent(0)
            .unwrap()
            .transpose_adjacent(0)
            .unwrap();
        assert!(back.distance(&comb) < 1e-13);
    }

    #[test]
    fn permutation_composition_and_pattern_guard() {
        let comb = HarmonicCombination::from_signature(&sig("1|1,1,0;0,1;c,c,c"));
        // three-cycle applied twice equals the inverse three-cycle
        let cycle = [1usize, 2, 0];
        let twice = comb.permute(&cycle).unwrap().permute(&cycle).unwrap();
        let inverse = comb.permute(&[2, 0, 1]).unwrap();
        assert!(twice.distance(&inverse) < 1e-12);

        let mixed = HarmonicCombination::from_signature(&sig("1|1,1;0,0;v,c"));
        assert!(mixed.permute(&[1, 0]).is_err());
    }

    #[test]
    fn contraction_matches_componentwise_trace() {
        for (s, i) in [("0|1,0;0,0;v,c", 0), ("1|2,1;1,1;c,v", 0), ("2|1,1,2;1,0;c,v,c", 1)] {
            let comb = HarmonicCombination::from_signature(&sig(s));
            let closed = comb.contract_adjacent(i).unwrap();
            for p in points() {
                let direct = comb.evaluate(p).traced(i, i + 1);
                let routed = closed.evaluate(p);
                assert!(
                    routed.distance(&direct) < 1e-12,
                    "{s} pair ({i},{}): {}",
                    i + 1,
                    routed.distance(&direct)
                );
            }
        }
    }

    #[test]
    fn distant_contraction_agrees_with_numeric_trace() {
        let comb = HarmonicCombination::from_signature(&sig("1|2,2,1;1,0;v,c,c"));
        let closed = comb.contract(0, 2).unwrap();
        for p in points() {
            let direct = comb.evaluate(p).traced(0, 2);
            let routed = closed.evaluate(p);
            assert!(routed.distance(&direct) < 1e-12, "{}", routed.distance(&direct));
        }
    }

    #[test]
    fn conjugation_matches_componentwise_conjugate() {
        for s in ["2|;1,-1;", "1|1;1,0;v", "2|1,1;0,1;c,v"] {
            let comb = HarmonicCombination::from_signature(&sig(s));
            let conj = comb.conjugated();
            for p in points() {
                let direct = comb.evaluate(p).conjugated();
                let routed = conj.evaluate(p);
                assert!(
                    routed.distance(&direct) < 1e-12,
                    "{s}: {}",
                    routed.distance(&direct)
                );
            }
        }
    }

    #[test]
    fn closed_product_matches_oracle_and_components() {
        let pairs = [
            ("1|;0,0;", "1|;1,1;"),
            ("1|;1,-1;", "0|1;0,0;v"),
            ("0|1;1,0;c", "1|;0,1;"),
            ("0|1;1,0;v", "0|1;-1,0;c"),
            ("1|1;0,0;v", "1|2;1,1;v"),
            ("1|0;0,1;c", "2|1;1,0;v"),
        ];
        for (sa, sb) in pairs {
            let a = sig(sa);
            let b = sig(sb);
            let closed = tensor_product_closed(&a, &b).unwrap();
            let oracle = tensor_product_oracle(&a, &b).unwrap();
            assert!(
                closed.distance(&oracle) < 1e-12,
                "{sa} x {sb}: closed vs oracle {}",
                closed.distance(&oracle)
            );
            let ca = HarmonicCombination::from_signature(&a);
            let cb = HarmonicCombination::from_signature(&b);
            for p in points() {
                let direct = ca.evaluate(p).tensor_product(&cb.evaluate(p));
                let routed = closed.evaluate(p);
                assert!(
                    routed.distance(&direct) < 1e-11,
                    "{sa} x {sb} at {p:?}: {}",
                    routed.distance(&direct)
                );
            }
        }
    }

    #[test]
    fn scalar_factor_product_reduces_to_harmonic_expansion() {
        let a = sig("1|;1,0;");
        let b = sig("2|;-1,1;");
        let prod = tensor_product_closed(&a, &b).unwrap();
        for p in points() {
            let want = crate::scalar::product_expand(
                crate::scalar::AngularTriple::new(1, 1, 0).unwrap(),
                crate::scalar::AngularTriple::new(2, -1, 1).unwrap(),
            )
            .evaluate(p);
            let got = prod.evaluate(p).get(&[]);
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn scalar_product_is_the_traced_tensor_product() {
        let cases = [
            ("0|1;1,0;v", "0|1;-1,0;c"),
            ("0|1;0,0;v", "0|1;0,0;c"),
            ("1|1;1,-1;c", "1|2;0,1;v"),
            ("2|1;0,1;v", "1|0;0,0;c"),
        ];
        for (sa, sb) in cases {
            let a = sig(sa);
            let b = sig(sb);
            let collapsed = scalar_product(&a, &b).unwrap();
            let traced = tensor_product_closed(&a, &b)
                .unwrap()
                .contract_adjacent(0)
                .unwrap();
            assert!(
                collapsed.distance(&traced) < 1e-12,
                "{sa} . {sb}: {}",
                collapsed.distance(&traced)
            );
        }
    }

    #[test]
    fn basis_pairing_under_scalar_product() {
        // e_{m} . e^{m'} = (-1)^m delta_{m,-m'}
        for m in -1..=1i32 {
            for mp in -1..=1i32 {
                let a = DTensorSignature::new(0, vec![1], m, 0, vec![Variance::Vector]).unwrap();
                let b = DTensorSignature::new(0, vec![1], mp, 0, vec![Variance::Covector]).unwrap();
                let prod = scalar_product(&a, &b).unwrap();
                let got = prod.evaluate(points()[0]).get(&[]);
                let want = if m == -mp {
                    Complex64::new(if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((got - want).norm() < 1e-13, "m={m} m'={mp}: {got}");
            }
        }
    }

    #[test]
    fn orthogonality_pairing_is_diagonal_with_full_norm() {
        let spec = QuadratureSpec::default();
        let norm = 8.0 * PI * PI;
        let sigs = ["1|1;1,0;v", "1|1;0,0;v", "1|2;1,1;v", "2|1;1,0;v", "1|1;1,1;v"];
        for (i, si) in sigs.iter().enumerate() {
            for sj in sigs.iter().skip(i) {
                let a = HarmonicCombination::from_signature(&sig(si));
                let dual_sig = sig(&sj.replace(";v", ";c"));
                let b = HarmonicCombination::from_signature(&dual_sig);
                let got = inner_product_integral(&a, &b, &spec).unwrap();
                let want = if si == sj { norm } else { 0.0 };
                assert!(
                    (got - Complex64::new(want, 0.0)).norm() < 1e-8,
                    "<{si}, {sj}> = {got}"
                );
            }
        }
    }

    #[test]
    fn orthogonality_pairing_matches_node_by_node_quadrature() {
        let spec = QuadratureSpec::default();
        let a = HarmonicCombination::from_signature(&sig("1|1,2;1,0;v,c"));
        let b = HarmonicCombination::from_signature(&sig("1|1,2;1,0;v,c"));
        // dual pattern: reversed opposite of (v, c) is (v, c)
        let closed = inner_product_integral(&a, &b, &spec).unwrap();
        let numeric = spec.integrate(|theta, phi, beta| {
            let p = AnglePoint { theta, phi, beta };
            a.evaluate(p)
                .paired_reversed(&b.evaluate(p))
                .expect("patterns are dual")
        });
        assert!(
            (closed - numeric).norm() < 1e-8,
            "closed {closed} vs numeric {numeric}"
        );
    }
}
