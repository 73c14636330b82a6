//! Dense complex tensors of small rank in the Cartesian frame.
//!
//! Values are stored row-major over base-3 multi-indices. These carry the
//! pointwise side of every identity check: algebraic operations on
//! signatures are compared against plain index shuffling here.

use num_complex::Complex64;

use super::signature::Variance;
use crate::{Error, Result};

const DIM: usize = 3;

/// Rank-`k` complex tensor with a variance flag per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTensor {
    variances: Vec<Variance>,
    values: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl ComponentTensor {
    pub fn zeros(variances: Vec<Variance>) -> Self {
        let len = DIM.pow(variances.len() as u32);
        ComponentTensor {
            variances,
            values: vec![zero(); len],
        }
    }

    /// Rank-0 tensor holding one scalar.
    pub fn scalar(value: Complex64) -> Self {
        ComponentTensor {
            variances: Vec::new(),
            values: vec![value],
        }
    }

    pub fn rank(&self) -> usize {
        self.variances.len()
    }

    pub fn variances(&self) -> &[Variance] {
        &self.variances
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < DIM);
            acc * DIM + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.values[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Complex64) {
        let o = self.offset(idx);
        self.values[o] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: Complex64) {
        let o = self.offset(idx);
        self.values[o] += v;
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn add_scaled(&mut self, other: &ComponentTensor, c: Complex64) {
        assert_eq!(self.variances, other.variances, "incompatible shapes");
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn conjugated(&self) -> ComponentTensor {
        ComponentTensor {
            variances: self.variances.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Largest absolute componentwise difference.
    pub fn distance(&self, other: &ComponentTensor) -> f64 {
        assert_eq!(self.variances.len(), other.variances.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// All base-3 multi-indices of the given rank in row-major order.
    pub fn indices(rank: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..DIM.pow(rank as u32)).map(move |mut flat| {
            let mut idx = vec![0; rank];
            for slot in (0..rank).rev() {
                idx[slot] = flat % DIM;
                flat /= DIM;
            }
            idx
        })
    }

    /// Rearranged tensor: result slot `j` carries source slot `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> ComponentTensor {
        let k = self.rank();
        assert_eq!(perm.len(), k, "permutation length");
        let mut seen = vec![false; k];
        for &p in perm {
            assert!(p < k && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let variances = perm.iter().map(|&p| self.variances[p]).collect();
        let mut out = ComponentTensor {
            variances,
            values: vec![zero(); self.values.len()],
        };
        let mut src = vec![0usize; k];
        for idx in Self::indices(k) {
            for j in 0..k {
                src[perm[j]] = idx[j];
            }
            let v = self.get(&src);
            out.set(&idx, v);
        }
        out
    }

    /// Numeric trace over slots `i` and `j` (0-based), summing equal
    /// Cartesian indices. Variance bookkeeping is the caller's business;
    /// the sum itself is plain index arithmetic.
    pub fn traced(&self, i: usize, j: usize) -> ComponentTensor {
        let k = self.rank();
        assert!(i < j && j < k, "trace slots out of range");
        let variances: Vec<Variance> = self
            .variances
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != i && *s != j)
            .map(|(_, &v)| v)
            .collect();
        let mut out = ComponentTensor::zeros(variances);
        for idx in Self::indices(k - 2) {
            let mut total = zero();
            for a in 0..DIM {
                let mut full = Vec::with_capacity(k);
                let mut rest = idx.iter();
                for s in 0..k {
                    if s == i || s == j {
                        full.push(a);
                    } else {
                        full.push(*rest.next().expect("index arity"));
                    }
                }
                total += self.get(&full);
            }
            out.set(&idx, total);
        }
        out
    }

    pub fn tensor_product(&self, other: &ComponentTensor) -> ComponentTensor {
        let mut variances = self.variances.clone();
        variances.extend_from_slice(&other.variances);
        let mut values = Vec::with_capacity(self.values.len() * other.values.len());
        for a in &self.values {
            for b in &other.values {
                values.push(a * b);
            }
        }
        ComponentTensor { variances, values }
    }

    /// Pairing `sum conj(A_{a1..ak}) B^{ak..a1}` with reversed slot order.
    pub fn paired_reversed(&self, other: &ComponentTensor) -> Result<Complex64> {
        let k = self.rank();
        if other.rank() != k {
            return Err(Error::RankMismatch {
                expected: k,
                got: other.rank(),
            });
        }
        for j in 0..k {
            if other.variances[k - 1 - j] != self.variances[j].opposite() {
                return Err(Error::VarianceMismatch(format!(
                    "slot {} of the first factor must pair a slot of opposite variance \
                     at mirrored position {} of the second",
                    j + 1,
                    k - j
                )));
            }
        }
        let mut total = zero();
        let mut rev = vec![0usize; k];
        for idx in Self::indices(k) {
            for j in 0..k {
                rev[j] = idx[k - 1 - j];
            }
            total += self.get(&idx).conj() * other.get(&rev);
        }
        Ok(total)
    }
}

/// Basis vectors spanning the spin-1 representation: `e_0` along the third
/// axis, `e_{+-1}` the complex combinations of the first two. Covectors have
/// the same Cartesian components.
pub fn basis_vector(mu: i8, variance: Variance) -> ComponentTensor {
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let comps: [Complex64; 3] = match mu {
        0 => [zero(), zero(), Complex64::new(1.0, 0.0)],
        1 => [
            Complex64::new(-inv_sqrt2, 0.0),
            Complex64::new(0.0, -inv_sqrt2),
            zero(),
        ],
        -1 => [
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(0.0, -inv_sqrt2),
            zero(),
        ],
        other => panic!("basis label must be -1, 0, or +1, got {other}"),
    };
    ComponentTensor {
        variances: vec![variance],
        values: comps.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_orthonormality() {
        // sum_a conj(e_mu)_a (e_nu)_a = delta
        for mu in [-1i8, 0, 1] {
            for nu in [-1i8, 0, 1] {
                let a = basis_vector(mu, Variance::Vector);
                let b = basis_vector(nu, Variance::Vector);
                let dot: Complex64 = a
                    .values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let expect = if mu == nu { 1.0 } else { 0.0 };
                assert!((dot - expect).norm() < 1e-15, "mu={mu} nu={nu}");
            }
        }
    }

    #[test]
    fn permutation_moves_slots() {
        let mut t = ComponentTensor::zeros(vec![Variance::Vector, Variance::Covector]);
        t.set(&[0, 2], c(1.0, 0.0));
        t.set(&[1, 0], c(0.0, 2.0));
        let p = t.permuted(&[1, 0]);
        assert_eq!(p.get(&[2, 0]), c(1.0, 0.0));
        assert_eq!(p.get(&[0, 1]), c(0.0, 2.0));
        assert_eq!(p.variances(), &[Variance::Covector, Variance::Vector]);

        // composing a permutation with its inverse restores the tensor
        let mut r3 = ComponentTensor::zeros(vec![Variance::Vector; 3]);
        r3.set(&[0, 1, 2], c(1.0, -1.0));
        r3.set(&[2, 2, 0], c(0.5, 0.0));
        let cycled = r3.permuted(&[2, 0, 1]).permuted(&[1, 2, 0]);
        assert_eq!(cycled, r3);
    }

    #[test]
    fn trace_and_product() {
        // identity (x) identity traced in the middle gives 3 * identity
        let mut id = ComponentTensor::zeros(vec![Variance::Vector, Variance::Covector]);
        for a in 0..3 {
            id.set(&[a, a], c(1.0, 0.0));
        }
        let prod = id.tensor_product(&id);
        let traced = prod.traced(1, 2);
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_eq!(traced.get(&[a, b]), c(expect, 0.0));
            }
        }
        // full trace of identity is 3
        let tr = id.traced(0, 1);
        assert_eq!(tr.get(&[]), c(3.0, 0.0));
    }

    #[test]
    fn reversed_pairing_checks_variances() {
        let v = basis_vector(1, Variance::Vector);
        let w = basis_vector(1, Variance::Covector);
        assert!(v.paired_reversed(&w).is_ok());
        assert!(v.paired_reversed(&v).is_err());
        let vv = v.tensor_product(&v);
        let wc = w.tensor_product(&w);
        assert!(vv.paired_reversed(&wc).is_ok());
        assert!(vv.paired_reversed(&v).is_err());
    }
}
