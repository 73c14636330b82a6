//! Linear combinations of harmonic d-tensor signatures and the recoupling
//! operations that are closed on them: conjugation, slot transposition and
//! permutation, and contraction.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use super::component::ComponentTensor;
use super::expansion::ExpandedDTensor;
use super::signature::{DTensorSignature, Variance};
use crate::coupling::{six_j, RadicalRational, SixJArgs};
use crate::scalar::AnglePoint;
use crate::{Error, Result};

/// Complex linear combination of signatures sharing one variance pattern.
///
/// All closed-form operations act term by term, so they apply unchanged to
/// single harmonics (a one-term combination) and to sums such as a Finsler
/// metric.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCombination {
    variances: Vec<Variance>,
    terms: BTreeMap<DTensorSignature, Complex64>,
}

impl HarmonicCombination {
    pub fn zero(variances: Vec<Variance>) -> Self {
        HarmonicCombination {
            variances,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_signature(sig: &DTensorSignature) -> Self {
        HarmonicCombination {
            variances: sig.variances().to_vec(),
            terms: BTreeMap::from([(sig.clone(), Complex64::new(1.0, 0.0))]),
        }
    }

    pub fn single(sig: &DTensorSignature, c: Complex64) -> Self {
        let mut out = Self::zero(sig.variances().to_vec());
        out.add_term(sig.clone(), c).expect("pattern taken from sig");
        out
    }

    pub fn variances(&self) -> &[Variance] {
        &self.variances
    }

    pub fn rank(&self) -> usize {
        self.variances.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DTensorSignature, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sig: &DTensorSignature) -> Complex64 {
        self.terms.get(sig).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, sig: DTensorSignature, c: Complex64) -> Result<()> {
        if sig.variances() != self.variances {
            return Err(Error::VarianceMismatch(format!(
                "term {sig} does not match the combination pattern"
            )));
        }
        *self.terms.entry(sig).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &HarmonicCombination, c: Complex64) -> Result<()> {
        if other.variances != self.variances {
            return Err(Error::VarianceMismatch(
                "cannot add combinations with different slot patterns".into(),
            ));
        }
        for (sig, &w) in &other.terms {
            *self.terms.entry(sig.clone()).or_insert(Complex64::new(0.0, 0.0)) += c * w;
        }
        Ok(())
    }

    pub fn scale(&mut self, c: Complex64) {
        for w in self.terms.values_mut() {
            *w *= c;
        }
    }

    /// Drops terms with coefficient magnitude at or below `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference over the union of terms.
    pub fn distance(&self, other: &HarmonicCombination) -> f64 {
        let mut d: f64 = 0.0;
        for (sig, &c) in &self.terms {
            d = d.max((c - other.coefficient(sig)).norm());
        }
        for (sig, &c) in &other.terms {
            d = d.max((c - self.coefficient(sig)).norm());
        }
        d
    }

    pub fn evaluate(&self, p: AnglePoint) -> ComponentTensor {
        let mut out = ComponentTensor::zeros(self.variances.clone());
        for (sig, &c) in &self.terms {
            let x = ExpandedDTensor::build_explicit(sig);
            out.add_scaled(&x.evaluate(p), c);
        }
        out
    }

    /// Relabels variances without touching coefficients. Components are
    /// variance independent, so this is exact.
    pub fn with_variances(&self, variances: Vec<Variance>) -> Result<Self> {
        let mut out = HarmonicCombination::zero(variances.clone());
        for (sig, &c) in &self.terms {
            out.add_term(sig.with_variances(variances.clone())?, c)?;
        }
        Ok(out)
    }

    /// Complex conjugate: negated magnetics with the phase
    /// `(-1)^(l0 + lk + m + n + k)` and conjugated coefficients.
    pub fn conjugated(&self) -> Self {
        let mut out = HarmonicCombination::zero(self.variances.clone());
        for (sig, &c) in &self.terms {
            let sign = sig.l0() as i64
                + sig.last_label() as i64
                + sig.m() as i64
                + sig.n() as i64
                + sig.rank() as i64;
            let phase = if sign.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let conj_sig = sig
                .with_magnetics(-sig.m(), -sig.n())
                .expect("mirrored magnetics stay in range");
            out.add_term(conj_sig, c.conj() * phase)
                .expect("pattern unchanged");
        }
        out
    }

    /// Swaps tensor slots `i` and `i + 1` (0-indexed). Both slots must carry
    /// the same variance; the swap resums the chain label between them over
    /// a 6j-weighted range.
    pub fn transpose_adjacent(&self, i: usize) -> Result<Self> {
        let k = self.rank();
        if i + 1 >= k {
            return Err(Error::InvalidSignature(format!(
                "transpose slot {i} out of range for rank {k}"
            )));
        }
        if self.variances[i] != self.variances[i + 1] {
            return Err(Error::VarianceMismatch(format!(
                "adjacent transpose needs equal variances at slots {i} and {}",
                i + 1
            )));
        }
        let mut out = HarmonicCombination::zero(self.variances.clone());
        for (sig, &c) in &self.terms {
            let prev = sig.label(i);
            let old = sig.label(i + 1);
            let next = sig.label(i + 2);
            let lo = prev.abs_diff(1).max(next.abs_diff(1));
            let hi = (prev + 1).min(next + 1);
            for l in lo..=hi {
                let w = six_j(SixJArgs::new(prev, old, 1, next, l, 1));
                if w.is_zero() {
                    continue;
                }
                let dims = RadicalRational::sqrt_of(BigRational::from_integer(
                    ((2 * l as i64 + 1) * (2 * old as i64 + 1)).into(),
                ));
                let mut coeff = (dims * w).to_f64();
                if (l + old) % 2 == 1 {
                    coeff = -coeff;
                }
                let new_sig = sig
                    .with_chain_label(i + 1, l)
                    .expect("resummed label satisfies both triangles");
                out.add_term(new_sig, c * coeff)?;
            }
        }
        Ok(out)
    }

    /// General slot permutation: result slot `j` carries input slot
    /// `perm[j]`. The pattern must be preserved slotwise, and the bubble
    /// decomposition must never swap a vector past a covector; patterns that
    /// require such a crossing are rejected.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let k = self.rank();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidSignature(format!(
                "{perm:?} is not a permutation of 0..{k}"
            )));
        }
        for j in 0..k {
            if self.variances[perm[j]] != self.variances[j] {
                return Err(Error::VarianceMismatch(format!(
                    "permutation moves slot {} across variances",
                    perm[j]
                )));
            }
        }
        // Bubble-sort perm to identity; the recorded swaps, replayed in
        // reverse, compose to perm.
        let mut work = perm.to_vec();
        let mut swaps = Vec::new();
        loop {
            let mut moved = false;
            for q in 0..k.saturating_sub(1) {
                if work[q] > work[q + 1] {
                    work.swap(q, q + 1);
                    swaps.push(q);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        let mut out = self.clone();
        for &q in swaps.iter().rev() {
            out = out.transpose_adjacent(q)?;
        }
        Ok(out)
    }

    /// Contracts adjacent slots `i` and `i + 1` (0-indexed), which must have
    /// opposite variances. Terms survive only when the labels flanking the
    /// pair agree.
    pub fn contract_adjacent(&self, i: usize) -> Result<Self> {
        let k = self.rank();
        if i + 1 >= k {
            return Err(Error::InvalidSignature(format!(
                "contraction slot {i} out of range for rank {k}"
            )));
        }
        if self.variances[i] == self.variances[i + 1] {
            return Err(Error::VarianceMismatch(format!(
                "contraction needs opposite variances at slots {i} and {}",
                i + 1
            )));
        }
        let mut reduced = self.variances.clone();
        reduced.drain(i..=i + 1);
        let mut out = HarmonicCombination::zero(reduced);
        for (sig, &c) in &self.terms {
            let prev = sig.label(i);
            let a = sig.label(i + 1);
            let b = sig.label(i + 2);
            if prev != b {
                continue;
            }
            let ratio = BigRational::new(
                (2 * a as i64 + 1).into(),
                (2 * b as i64 + 1).into(),
            );
            let mut coeff = RadicalRational::sqrt_of(ratio).to_f64();
            if a.abs_diff(b) % 2 == 1 {
                coeff = -coeff;
            }
            let new_sig = sig
                .with_pair_removed(i)
                .expect("flanking labels agree so the shortened chain couples");
            out.add_term(new_sig, c * coeff)?;
        }
        Ok(out)
    }

    /// Contracts slots `i` and `j` of opposite variance. Non-adjacent pairs
    /// are first brought together by adjacent transposes, which requires the
    /// slots strictly between them to share a variance with one end.
    pub fn contract(&self, i: usize, j: usize) -> Result<Self> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let k = self.rank();
        if i == j || j >= k {
            return Err(Error::InvalidSignature(format!(
                "cannot contract slots {i} and {j} of a rank {k} tensor"
            )));
        }
        if self.variances[i] == self.variances[j] {
            return Err(Error::VarianceMismatch(format!(
                "contraction needs opposite variances at slots {i} and {j}"
            )));
        }
        if j == i + 1 {
            return self.contract_adjacent(i);
        }
        let interior = &self.variances[i + 1..j];
        if interior.iter().all(|&v| v == self.variances[j]) {
            // walk slot j down to i + 1
            let mut cur = self.clone();
            for q in (i + 1..j).rev() {
                cur = cur.transpose_adjacent(q)?;
            }
            cur.contract_adjacent(i)
        } else if interior.iter().all(|&v| v == self.variances[i]) {
            // walk slot i up to j - 1
            let mut cur = self.clone();
            for q in i..j - 1 {
                cur = cur.transpose_adjacent(q)?;
            }
            cur.contract_adjacent(j - 1)
        } else {
            Err(Error::VarianceMismatch(format!(
                "slots between {i} and {j} mix variances; no transpose path exists"
            )))
        }
    }
}

/// The Kronecker tensor as a one-term combination: the identity matrix with
/// one vector and one covector slot.
pub fn kronecker() -> HarmonicCombination {
    let sig = DTensorSignature::new(
        0,
        vec![1, 0],
        0,
        0,
        vec![Variance::Vector, Variance::Covector],
    )
    .expect("static signature");
    HarmonicCombination::single(&sig, Complex64::new(-(3.0f64.sqrt()), 0.0))
}

/// The totally antisymmetric tensor with three covector slots.
pub fn epsilon() -> HarmonicCombination {
    let sig = DTensorSignature::new(
        0,
        vec![1, 1, 0],
        0,
        0,
        vec![Variance::Covector; 3],
    )
    .expect("static signature");
    HarmonicCombination::single(&sig, Complex64::new(0.0, 6.0f64.sqrt()))
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CombinationTermRepr {
    signature: DTensorSignature,
    coefficient: [f64; 2],
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CombinationRepr {
    variances: Vec<Variance>,
    terms: Vec<CombinationTermRepr>,
}

impl serde::Serialize for HarmonicCombination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CombinationRepr {
            variances: self.variances.clone(),
            terms: self
                .terms
                .iter()
                .map(|(sig, c)| CombinationTermRepr {
                    signature: sig.clone(),
                    coefficient: [c.re, c.im],
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for HarmonicCombination {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CombinationRepr::deserialize(d)?;
        let mut out = HarmonicCombination::zero(repr.variances);
        for term in repr.terms {
            let c = Complex64::new(term.coefficient[0], term.coefficient[1]);
            out.add_term(term.signature, c)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}
