//! Expansion of a harmonic d-tensor over scalar harmonics times basis
//! monomials.
//!
//! Keys are `(m0, mu-vector)`: the magnetic index of the scalar factor and
//! one basis label per slot. The chain magnetics are determined by the key
//! (`m_i = m0 + mu_1 + ... + mu_i`), so every key receives exactly one
//! product of coupling coefficients and the stored weight is a single
//! radical evaluated to floating point, not a rounded sum.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::BigRational;

use super::component::{basis_vector, ComponentTensor};
use super::signature::DTensorSignature;
use crate::coupling::{three_j, RadicalRational, ThreeJArgs};
use crate::scalar::{eval_harmonic, AngularTriple, AnglePoint};

pub(crate) type TermMap = BTreeMap<(i32, Vec<i8>), f64>;

/// One coupling step: the exact weight attaching `e_mu` when the chain
/// moves from `l_prev` (magnetic `m_prev`) to `l_next` (magnetic `m_next`).
fn step_weight(l_next: u32, l_prev: u32, m_next: i32, m_prev: i32, mu: i8) -> RadicalRational {
    let symbol = three_j(ThreeJArgs::new(
        l_next,
        l_prev,
        1,
        m_next,
        -m_prev,
        -(mu as i32),
    ));
    if symbol.is_zero() {
        return RadicalRational::zero();
    }
    let dim = RadicalRational::sqrt_of(BigRational::from_integer((2 * l_next as i64 + 1).into()));
    let value = dim * symbol;
    if (l_next as i64 - m_next as i64).rem_euclid(2) == 0 {
        value
    } else {
        -value
    }
}

/// Recursive construction: expand the one-step-shorter signature for every
/// reachable intermediate magnetic index, then attach the last slot.
fn recursive_terms(l0: u32, chain: &[u32], m: i32) -> TermMap {
    let mut out = TermMap::new();
    match chain.split_last() {
        None => {
            out.insert((m, Vec::new()), 1.0);
        }
        Some((&lk, rest)) => {
            let l_prev = rest.last().copied().unwrap_or(l0);
            for m_prev in -(l_prev as i32)..=(l_prev as i32) {
                let mu = m - m_prev;
                if mu.abs() > 1 {
                    continue;
                }
                let w = step_weight(lk, l_prev, m, m_prev, mu as i8);
                if w.is_zero() {
                    continue;
                }
                let wf = w.to_f64();
                for ((m0, mus), c) in recursive_terms(l0, rest, m_prev) {
                    let mut key = mus;
                    key.push(mu as i8);
                    *out.entry((m0, key)).or_insert(0.0) += wf * c;
                }
            }
        }
    }
    out
}

/// Explicit construction: enumerate `(m0, mu-vector)` keys directly and form
/// the full coefficient product in exact arithmetic. No recursion shared
/// with `recursive_terms`.
fn explicit_terms(l0: u32, chain: &[u32], m: i32) -> TermMap {
    let k = chain.len();
    let mut out = TermMap::new();
    let mut mus = vec![-1i8; k];
    'keys: loop {
        for m0 in -(l0 as i32)..=(l0 as i32) {
            // chain magnetics are prefix sums; the last must hit m
            let mut weight = RadicalRational::one();
            let mut m_prev = m0;
            let mut l_prev = l0;
            let mut dead = false;
            for (i, &mu) in mus.iter().enumerate() {
                let m_i = m_prev + mu as i32;
                let l_i = chain[i];
                if m_i.unsigned_abs() > l_i {
                    dead = true;
                    break;
                }
                weight = weight * step_weight(l_i, l_prev, m_i, m_prev, mu);
                if weight.is_zero() {
                    dead = true;
                    break;
                }
                m_prev = m_i;
                l_prev = l_i;
            }
            if !dead && m_prev == m {
                out.insert((m0, mus.clone()), weight.to_f64());
            }
        }
        // odometer over mu-vectors
        for slot in (0..k).rev() {
            if mus[slot] < 1 {
                mus[slot] += 1;
                continue 'keys;
            }
            mus[slot] = -1;
        }
        break;
    }
    if k == 0 {
        // the loop above ran its single empty iteration; keep only m0 = m
        out.retain(|(m0, _), _| *m0 == m);
    }
    out
}

static EXPLICIT_CACHE: OnceLock<Mutex<HashMap<(u32, Vec<u32>, i32), Arc<TermMap>>>> =
    OnceLock::new();

pub(crate) fn cached_explicit(l0: u32, chain: &[u32], m: i32) -> Arc<TermMap> {
    let cache = EXPLICIT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (l0, chain.to_vec(), m);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let value = Arc::new(explicit_terms(l0, chain, m));
    cache.lock().unwrap().insert(key, Arc::clone(&value));
    value
}

/// A signature expanded over `(m0, mu-vector)` keys with complex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedDTensor {
    sig: DTensorSignature,
    terms: BTreeMap<(i32, Vec<i8>), Complex64>,
}

impl ExpandedDTensor {
    /// Builds by the one-slot-at-a-time recursion.
    pub fn build_recursive(sig: &DTensorSignature) -> Self {
        let terms = recursive_terms(sig.l0(), sig.chain(), sig.m())
            .into_iter()
            .map(|(k, v)| (k, Complex64::new(v, 0.0)))
            .collect();
        ExpandedDTensor {
            sig: sig.clone(),
            terms,
        }
    }

    /// Builds from the closed per-key coefficient product.
    pub fn build_explicit(sig: &DTensorSignature) -> Self {
        let terms = cached_explicit(sig.l0(), sig.chain(), sig.m())
            .iter()
            .map(|(k, &v)| (k.clone(), Complex64::new(v, 0.0)))
            .collect();
        ExpandedDTensor {
            sig: sig.clone(),
            terms,
        }
    }

    pub fn signature(&self) -> &DTensorSignature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, Vec<i8>), &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m0: i32, mus: &[i8]) -> Complex64 {
        self.terms
            .get(&(m0, mus.to_vec()))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient difference, for cross-checking the two builders.
    pub fn distance(&self, other: &ExpandedDTensor) -> f64 {
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let a = self.terms.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0));
                let b = other.terms.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0));
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Componentwise value at a point: scalar harmonic values times basis
    /// monomial components.
    pub fn evaluate(&self, p: AnglePoint) -> ComponentTensor {
        let k = self.sig.rank();
        let n = self.sig.n();
        let variances = self.sig.variances().to_vec();
        let mut out = ComponentTensor::zeros(variances);
        // basis components are variance-independent; one table serves all slots
        let basis_values: [[Complex64; 3]; 3] = {
            let mut table = [[Complex64::new(0.0, 0.0); 3]; 3];
            for (j, mu) in [-1i8, 0, 1].into_iter().enumerate() {
                let b = basis_vector(mu, super::signature::Variance::Vector);
                for a in 0..3 {
                    table[j][a] = b.values()[a];
                }
            }
            table
        };
        for ((m0, mus), c) in &self.terms {
            let triple = AngularTriple::new(self.sig.l0(), *m0, n).expect("stored key is valid");
            let amp = c * eval_harmonic(triple, p);
            if amp.norm() == 0.0 {
                continue;
            }
            for idx in ComponentTensor::indices(k) {
                let mut v = amp;
                for (slot, &a) in idx.iter().enumerate() {
                    v *= basis_values[(mus[slot] + 1) as usize][a];
                }
                out.add_at(&idx, v);
            }
        }
        out
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ExpandedTermRepr {
    m0: i32,
    mu: Vec<i8>,
    coefficient: [f64; 2],
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ExpandedRepr {
    signature: DTensorSignature,
    terms: Vec<ExpandedTermRepr>,
}

impl serde::Serialize for ExpandedDTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpandedRepr {
            signature: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|((m0, mu), c)| ExpandedTermRepr {
                    m0: *m0,
                    mu: mu.clone(),
                    coefficient: [c.re, c.im],
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for ExpandedDTensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ExpandedRepr::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for t in repr.terms {
            if t.mu.len() != repr.signature.rank() {
                return Err(serde::de::Error::custom(format!(
                    "term has {} basis labels but the signature has rank {}",
                    t.mu.len(),
                    repr.signature.rank()
                )));
            }
            if t.mu.iter().any(|mu| !(-1..=1).contains(mu))
                || t.m0.unsigned_abs() > repr.signature.l0()
            {
                return Err(serde::de::Error::custom(format!(
                    "term key ({}, {:?}) is out of range for {}",
                    t.m0, t.mu, repr.signature
                )));
            }
            terms.insert(
                (t.m0, t.mu),
                Complex64::new(t.coefficient[0], t.coefficient[1]),
            );
        }
        Ok(ExpandedDTensor {
            sig: repr.signature,
            terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtensor::signature::Variance;

    fn sig(s: &str) -> DTensorSignature {
        s.parse().expect("valid signature")
    }

    #[test]
    fn rank_zero_is_the_scalar_harmonic() {
        let x = ExpandedDTensor::build_explicit(&sig("2|;1,-1;"));
        assert_eq!(x.len(), 1);
        assert_eq!(x.coefficient(1, &[]), Complex64::new(1.0, 0.0));
        let p = AnglePoint { theta: 1.0, phi: 0.5, beta: 2.2 };
        let v = x.evaluate(p);
        let direct = eval_harmonic(AngularTriple::new(2, 1, -1).unwrap(), p);
        assert!((v.get(&[]) - direct).norm() < 1e-15);
    }

    #[test]
    fn unit_chain_recovers_basis_vectors() {
        // (0 | 1; m, 0) is e_m up to nothing: coefficient on Y_{0,0,0} e_m
        for m in -1..=1i32 {
            let s = DTensorSignature::new(0, vec![1], m, 0, vec![Variance::Vector]).unwrap();
            let x = ExpandedDTensor::build_explicit(&s);
            let p = AnglePoint { theta: 0.8, phi: 1.9, beta: 0.3 };
            let v = x.evaluate(p);
            let e = basis_vector(m as i8, Variance::Vector);
            for a in 0..3 {
                assert!(
                    (v.get(&[a]) - e.values()[a]).norm() < 1e-14,
                    "m={m} component {a}"
                );
            }
        }
    }

    #[test]
    fn recursive_and_explicit_builders_agree() {
        let sigs = [
            "0|1,0;0,0;v,c",
            "1|1,1;1,-1;v,v",
            "2|3,2;2,1;c,v",
            "0|1,1,0;0,0;c,c,c",
            "1|2,2,1;1,0;v,c,v",
            "3|2,1;0,-2;c,c",
        ];
        for s in sigs {
            let a = ExpandedDTensor::build_recursive(&sig(s));
            let b = ExpandedDTensor::build_explicit(&sig(s));
            assert!(a.distance(&b) < 1e-12, "{s}: distance {}", a.distance(&b));
            assert!(!a.is_empty(), "{s} expanded to nothing");
        }
    }

    #[test]
    fn kronecker_signature_is_the_identity() {
        // -sqrt(3) * (0 | 1,0; 0,0; v,c) has identity components everywhere
        let s = sig("0|1,0;0,0;v,c");
        let x = ExpandedDTensor::build_explicit(&s);
        for p in [
            AnglePoint { theta: 0.4, phi: 0.0, beta: 1.0 },
            AnglePoint { theta: 2.0, phi: 3.1, beta: 5.0 },
        ] {
            let t = x.evaluate(p);
            for a in 0..3 {
                for b in 0..3 {
                    let expect = if a == b {
                        // identity divided by the -sqrt(3) prefactor
                        -1.0 / 3.0f64.sqrt()
                    } else {
                        0.0
                    };
                    assert!(
                        (t.get(&[a, b]) - Complex64::new(expect, 0.0)).norm() < 1e-14,
                        "({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn epsilon_signature_is_totally_antisymmetric() {
        // i sqrt(6) * (0 | 1,1,0; 0,0; c,c,c) = Levi-Civita
        let s = sig("0|1,1,0;0,0;c,c,c");
        let x = ExpandedDTensor::build_explicit(&s);
        let p = AnglePoint { theta: 1.3, phi: 2.0, beta: 0.7 };
        let t = x.evaluate(p);
        let scale = Complex64::new(0.0, 6.0f64.sqrt());
        for idx in ComponentTensor::indices(3) {
            let (a, b, c) = (idx[0] as i32, idx[1] as i32, idx[2] as i32);
            let eps = ((a - b) * (b - c) * (c - a)) as f64 / 2.0;
            let got = scale * t.get(&idx);
            assert!(
                (got - Complex64::new(eps, 0.0)).norm() < 1e-14,
                "index {idx:?}: {got} vs {eps}"
            );
        }
    }
}
