//! Products of harmonic d-tensors.
//!
//! The closed tensor product is a multiple sum over coupling paths of both
//! operands and of the result chain. The result keeps the first operand's
//! slots first; the alternative reading in which the first operand's path
//! drives the trailing result steps is kept selectable so the two can be
//! compared against the expansion oracle, which recouples through explicit
//! monomials and scalar product expansions and shares no path enumeration
//! with the closed form.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::combination::HarmonicCombination;
use super::expansion::cached_explicit;
use super::signature::DTensorSignature;
use crate::coupling::{six_j, three_j, RadicalRational, SixJArgs, ThreeJArgs};
use crate::quadrature::QuadratureSpec;
use crate::scalar::{orthogonality_integral, product_expand, AngularTriple};
use crate::{Error, Result};

/// Which operand's slots the leading result chain steps couple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductPairing {
    /// Result steps `1..=k` couple the first operand's slots. This is the
    /// ordering consistent with the result carrying the first operand's
    /// slots first, and is the default.
    FirstOperandLeading,
    /// Result steps `1..=k'` couple the second operand's slots.
    FirstOperandTrailing,
}

fn parity(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One coupling path of an operand: initial magnetic index, per-step basis
/// labels, the product of the operand's own step 3j values, and the parity
/// exponent `sum(l_i - m_i)` it contributes.
struct OperandPath {
    m0: i32,
    mus: Vec<i8>,
    weight: f64,
    phase: i64,
}

fn operand_paths(sig: &DTensorSignature) -> Vec<OperandPath> {
    let k = sig.rank();
    let mut out = Vec::new();
    let mut mus = vec![-1i8; k];
    loop {
        'm0: for m0 in -(sig.l0() as i32)..=(sig.l0() as i32) {
            let mut weight = 1.0;
            let mut phase = 0i64;
            let mut m_prev = m0;
            for i in 0..k {
                let m_i = m_prev + mus[i] as i32;
                let l_i = sig.label(i + 1);
                if m_i.unsigned_abs() > l_i {
                    continue 'm0;
                }
                let w = three_j(ThreeJArgs::new(
                    l_i,
                    sig.label(i),
                    1,
                    m_i,
                    -m_prev,
                    -(mus[i] as i32),
                ));
                if w.is_zero() {
                    continue 'm0;
                }
                weight *= w.to_f64();
                phase += l_i as i64 - m_i as i64;
                m_prev = m_i;
            }
            if m_prev == sig.m() {
                out.push(OperandPath {
                    m0,
                    mus: mus.clone(),
                    weight,
                    phase,
                });
            }
        }
        let mut slot = k;
        while slot > 0 {
            if mus[slot - 1] < 1 {
                mus[slot - 1] += 1;
                break;
            }
            mus[slot - 1] = -1;
            slot -= 1;
        }
        if slot == 0 {
            break;
        }
    }
    out
}

/// All label chains of the given length starting from `l0` in which each
/// step couples through spin 1.
fn chains_from(l0: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for chain in &out {
            let prev = chain.last().copied().unwrap_or(l0);
            for l in prev.saturating_sub(1)..=prev + 1 {
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

/// Closed-form tensor product with an explicit pairing choice.
pub fn tensor_product_closed_with(
    a: &DTensorSignature,
    b: &DTensorSignature,
    pairing: ProductPairing,
) -> Result<HarmonicCombination> {
    let (ka, kb) = (a.rank(), b.rank());
    let mut variances = a.variances().to_vec();
    variances.extend_from_slice(b.variances());
    let mut out = HarmonicCombination::zero(variances.clone());

    let paths_a = operand_paths(a);
    let paths_b = operand_paths(b);
    let m_out = a.m() + b.m();
    let n_out = a.n() + b.n();
    let own_dims: f64 = (0..=ka)
        .map(|i| 2.0 * a.label(i) as f64 + 1.0)
        .chain((0..=kb).map(|i| 2.0 * b.label(i) as f64 + 1.0))
        .product();

    for l0_out in a.l0().abs_diff(b.l0())..=(a.l0() + b.l0()) {
        if n_out.unsigned_abs() > l0_out {
            continue;
        }
        let n_pair = three_j(ThreeJArgs::new(
            a.l0(),
            b.l0(),
            l0_out,
            a.n(),
            b.n(),
            -n_out,
        ));
        if n_pair.is_zero() {
            continue;
        }
        let n_pair = n_pair.to_f64();
        for chain in chains_from(l0_out, ka + kb) {
            let last = chain.last().copied().unwrap_or(l0_out);
            if m_out.unsigned_abs() > last {
                continue;
            }
            let mut coeff = 0.0f64;
            for pa in &paths_a {
                for pb in &paths_b {
                    let m0_out = pa.m0 + pb.m0;
                    if m0_out.unsigned_abs() > l0_out {
                        continue;
                    }
                    let m_pair = three_j(ThreeJArgs::new(
                        a.l0(),
                        b.l0(),
                        l0_out,
                        pa.m0,
                        pb.m0,
                        -m0_out,
                    ));
                    if m_pair.is_zero() {
                        continue;
                    }
                    let nus: Vec<i8> = match pairing {
                        ProductPairing::FirstOperandLeading => {
                            pa.mus.iter().chain(pb.mus.iter()).copied().collect()
                        }
                        ProductPairing::FirstOperandTrailing => {
                            pb.mus.iter().chain(pa.mus.iter()).copied().collect()
                        }
                    };
                    let mut step_weight = 1.0;
                    let mut phase =
                        -(pa.m0 as i64) - pb.m0 as i64 - a.n() as i64 - b.n() as i64
                            + pa.phase
                            + pb.phase;
                    let mut m_prev = m0_out;
                    let mut l_prev = l0_out;
                    let mut dead = false;
                    for (j, &nu) in nus.iter().enumerate() {
                        let m_j = m_prev + nu as i32;
                        let l_j = chain[j];
                        if m_j.unsigned_abs() > l_j {
                            dead = true;
                            break;
                        }
                        let w = three_j(ThreeJArgs::new(
                            l_j,
                            l_prev,
                            1,
                            m_j,
                            -m_prev,
                            -(nu as i32),
                        ));
                        if w.is_zero() {
                            dead = true;
                            break;
                        }
                        step_weight *= w.to_f64();
                        phase += l_j as i64 - m_j as i64;
                        m_prev = m_j;
                        l_prev = l_j;
                    }
                    if dead {
                        continue;
                    }
                    coeff += parity(phase)
                        * m_pair.to_f64()
                        * n_pair
                        * pa.weight
                        * pb.weight
                        * step_weight;
                }
            }
            if coeff == 0.0 {
                continue;
            }
            let chain_dims: f64 = (2.0 * l0_out as f64 + 1.0)
                * chain
                    .iter()
                    .map(|&l| 2.0 * l as f64 + 1.0)
                    .product::<f64>();
            let sig = DTensorSignature::new(l0_out, chain, m_out, n_out, variances.clone())
                .expect("enumerated result chain is valid");
            out.add_term(
                sig,
                Complex64::new(coeff * (own_dims * chain_dims).sqrt(), 0.0),
            )?;
        }
    }
    Ok(out)
}

/// Closed-form tensor product; the first operand's slots come first in the
/// result.
pub fn tensor_product_closed(
    a: &DTensorSignature,
    b: &DTensorSignature,
) -> Result<HarmonicCombination> {
    tensor_product_closed_with(a, b, ProductPairing::FirstOperandLeading)
}

/// Bilinear extension of the closed tensor product to combinations.
pub fn tensor_product_combinations(
    a: &HarmonicCombination,
    b: &HarmonicCombination,
) -> Result<HarmonicCombination> {
    let mut variances = a.variances().to_vec();
    variances.extend_from_slice(b.variances());
    let mut out = HarmonicCombination::zero(variances);
    for (sig_a, &ca) in a.terms() {
        for (sig_b, &cb) in b.terms() {
            out.add_scaled(&tensor_product_closed(sig_a, sig_b)?, ca * cb)?;
        }
    }
    Ok(out)
}

/// Tensor product through explicit expansions: multiply monomials, expand
/// scalar harmonic products, and reproject onto result signatures. Serves
/// as an independent check on the closed form.
pub fn tensor_product_oracle(
    a: &DTensorSignature,
    b: &DTensorSignature,
) -> Result<HarmonicCombination> {
    let (ka, kb) = (a.rank(), b.rank());
    let mut variances = a.variances().to_vec();
    variances.extend_from_slice(b.variances());
    let mut out = HarmonicCombination::zero(variances.clone());
    let m_out = a.m() + b.m();
    let n_out = a.n() + b.n();

    // (l0'', m0'', joined mu vector) -> accumulated monomial coefficient
    let mut monomials: BTreeMap<(u32, i32, Vec<i8>), Complex64> = BTreeMap::new();
    let xa = cached_explicit(a.l0(), a.chain(), a.m());
    let xb = cached_explicit(b.l0(), b.chain(), b.m());
    for ((m0a, mua), &cab) in xa.iter() {
        let ta = AngularTriple::new(a.l0(), *m0a, a.n()).expect("valid key");
        for ((m0b, mub), &cbb) in xb.iter() {
            let tb = AngularTriple::new(b.l0(), *m0b, b.n()).expect("valid key");
            let mut nu = mua.clone();
            nu.extend_from_slice(mub);
            for (t, c) in product_expand(ta, tb).terms() {
                let key = (t.l(), t.m(), nu.clone());
                *monomials.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c * cab * cbb;
            }
        }
    }

    let support: Vec<u32> = {
        let mut ls: Vec<u32> = monomials.keys().map(|k| k.0).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    };
    for l0_out in support {
        if n_out.unsigned_abs() > l0_out {
            continue;
        }
        for chain in chains_from(l0_out, ka + kb) {
            let last = chain.last().copied().unwrap_or(l0_out);
            if m_out.unsigned_abs() > last {
                continue;
            }
            let proj = cached_explicit(l0_out, &chain, m_out);
            let mut alpha = Complex64::new(0.0, 0.0);
            for ((m0, nu), &w) in proj.iter() {
                if let Some(&mono) = monomials.get(&(l0_out, *m0, nu.clone())) {
                    alpha += mono * w;
                }
            }
            if alpha.norm() == 0.0 {
                continue;
            }
            let sig = DTensorSignature::new(l0_out, chain, m_out, n_out, variances.clone())
                .expect("enumerated result chain is valid");
            out.add_term(sig, alpha)?;
        }
    }
    Ok(out)
}

/// Scalar product of two rank-1 tensors of opposite variance: the trace of
/// their tensor product, collapsed to a single 6j sum over scalar
/// harmonics.
pub fn scalar_product(
    a: &DTensorSignature,
    b: &DTensorSignature,
) -> Result<HarmonicCombination> {
    if a.rank() != 1 || b.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            got: a.rank().max(b.rank()),
        });
    }
    if a.variances()[0] == b.variances()[0] {
        return Err(Error::VarianceMismatch(
            "scalar product pairs a vector slot with a covector slot".into(),
        ));
    }
    let (l0a, l1a) = (a.l0(), a.label(1));
    let (l0b, l1b) = (b.l0(), b.label(1));
    let m_out = a.m() + b.m();
    let n_out = a.n() + b.n();
    let mut out = HarmonicCombination::zero(Vec::new());
    let lo = l0a.abs_diff(l0b).max(l1a.abs_diff(l1b));
    let hi = (l0a + l0b).min(l1a + l1b);
    for l in lo..=hi {
        if m_out.unsigned_abs() > l || n_out.unsigned_abs() > l {
            continue;
        }
        let tj_n = three_j(ThreeJArgs::new(l, l0b, l0a, -n_out, b.n(), a.n()));
        let tj_m = three_j(ThreeJArgs::new(l, l1b, l1a, -m_out, b.m(), a.m()));
        let sj = six_j(SixJArgs::new(1, l0a, l1a, l, l1b, l0b));
        if tj_n.is_zero() || tj_m.is_zero() || sj.is_zero() {
            continue;
        }
        let dims = (2 * l0a as u64 + 1)
            * (2 * l1a as u64 + 1)
            * (2 * l0b as u64 + 1)
            * (2 * l1b as u64 + 1)
            * (2 * l as u64 + 1);
        let dims = RadicalRational::sqrt_of(num_rational::BigRational::from_integer(dims.into()));
        let value = (dims * tj_n * tj_m * sj).to_f64();
        let phase = parity(
            l0a as i64
                + l1b as i64
                + l as i64
                + a.m() as i64
                + b.m() as i64
                + a.n() as i64
                + b.n() as i64,
        );
        out.add_term(
            DTensorSignature::scalar(l, m_out, n_out)?,
            Complex64::new(phase * value, 0.0),
        )?;
    }
    Ok(out)
}

/// Orthogonality pairing: integrates `<A, B>` over the angle space, where
/// the bracket conjugates the first argument and contracts slots in
/// reversed order. `B`'s variance pattern must be the reversed opposite of
/// `A`'s. The scalar factors integrate by quadrature; the basis monomial
/// pairing collapses exactly.
pub fn inner_product_integral(
    a: &HarmonicCombination,
    b: &HarmonicCombination,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let k = a.rank();
    if b.rank() != k {
        return Err(Error::RankMismatch {
            expected: k,
            got: b.rank(),
        });
    }
    for j in 0..k {
        if b.variances()[k - 1 - j] != a.variances()[j].opposite() {
            return Err(Error::VarianceMismatch(
                "second factor must have the reversed opposite slot pattern".into(),
            ));
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (sig_a, &ca) in a.terms() {
        let xa = cached_explicit(sig_a.l0(), sig_a.chain(), sig_a.m());
        for (sig_b, &cb) in b.terms() {
            let xb = cached_explicit(sig_b.l0(), sig_b.chain(), sig_b.m());
            let mut pair = Complex64::new(0.0, 0.0);
            for ((m0a, mua), &wa) in xa.iter() {
                let mirrored: Vec<i8> = mua.iter().rev().copied().collect();
                for m0b in -(sig_b.l0() as i32)..=(sig_b.l0() as i32) {
                    let Some(&wb) = xb.get(&(m0b, mirrored.clone())) else {
                        continue;
                    };
                    let ta = AngularTriple::new(sig_a.l0(), *m0a, sig_a.n()).expect("valid key");
                    let tb = AngularTriple::new(sig_b.l0(), m0b, sig_b.n()).expect("valid key");
                    pair += orthogonality_integral(ta, tb, spec)? * wa * wb;
                }
            }
            total += ca.conj() * cb * pair;
        }
    }
    Ok(total)
}
