//! Factorials as prime-exponent vectors.
//!
//! Ratios of factorial products reduce exactly by exponent arithmetic, so the
//! radicands assembled for 3j/6j symbols never see a gcd of huge integers.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

/// Largest factorial argument the table supports. Angular momenta in this
/// crate stay far below it; the bound exists so the prime list is fixed.
pub const MAX_FACTORIAL: usize = 512;

struct FactorialTable {
    primes: Vec<u64>,
    /// `rows[n][i]` is the exponent of `primes[i]` in `n!`.
    rows: Vec<Vec<i32>>,
}

static TABLE: OnceLock<FactorialTable> = OnceLock::new();

fn sieve(limit: usize) -> Vec<u64> {
    let mut is_prime = vec![true; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if is_prime[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= limit {
                is_prime[q] = false;
                q += p;
            }
        }
    }
    primes
}

fn table() -> &'static FactorialTable {
    TABLE.get_or_init(|| {
        let primes = sieve(MAX_FACTORIAL);
        let np = primes.len();
        let mut rows = Vec::with_capacity(MAX_FACTORIAL + 1);
        rows.push(vec![0i32; np]);
        for n in 1..=MAX_FACTORIAL {
            let mut row = rows[n - 1].clone();
            let mut rest = n as u64;
            for (i, &p) in primes.iter().enumerate() {
                if p * p > rest {
                    break;
                }
                while rest % p == 0 {
                    row[i] += 1;
                    rest /= p;
                }
            }
            if rest > 1 {
                let i = primes.binary_search(&rest).expect("prime within sieve");
                row[i] += 1;
            }
            rows.push(row);
        }
        FactorialTable { primes, rows }
    })
}

/// Product of prime powers with integer (possibly negative) exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowers {
    exps: Vec<i32>,
}

impl PrimePowers {
    pub fn one() -> Self {
        PrimePowers {
            exps: vec![0; table().primes.len()],
        }
    }

    /// `n!` looked up from the table. Panics past [`MAX_FACTORIAL`]; the
    /// coupling routines never get there for physically sized momenta.
    #[cfg(test)]
    pub fn factorial(n: u32) -> Self {
        let t = table();
        let n = n as usize;
        assert!(
            n <= MAX_FACTORIAL,
            "factorial({n}) exceeds the supported angular-momentum table (max {MAX_FACTORIAL})"
        );
        PrimePowers {
            exps: t.rows[n].clone(),
        }
    }

    pub fn mul_factorial(&mut self, n: u32) {
        let t = table();
        let n = n as usize;
        assert!(n <= MAX_FACTORIAL, "factorial({n}) exceeds the supported table");
        for (e, d) in self.exps.iter_mut().zip(&t.rows[n]) {
            *e += d;
        }
    }

    pub fn div_factorial(&mut self, n: u32) {
        let t = table();
        let n = n as usize;
        assert!(n <= MAX_FACTORIAL, "factorial({n}) exceeds the supported table");
        for (e, d) in self.exps.iter_mut().zip(&t.rows[n]) {
            *e -= d;
        }
    }

    /// Multiply by a plain positive integer (factored by trial division).
    pub fn mul_int(&mut self, mut x: u64) {
        assert!(x > 0, "PrimePowers::mul_int needs a positive factor");
        let t = table();
        for (i, &p) in t.primes.iter().enumerate() {
            if p * p > x {
                break;
            }
            while x % p == 0 {
                self.exps[i] += 1;
                x /= p;
            }
        }
        if x > 1 {
            let i = t
                .primes
                .binary_search(&x)
                .unwrap_or_else(|_| panic!("factor {x} exceeds the supported prime table"));
            self.exps[i] += 1;
        }
    }

    pub fn mul_assign(&mut self, other: &PrimePowers) {
        for (e, d) in self.exps.iter_mut().zip(&other.exps) {
            *e += d;
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let t = table();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&e, &p) in self.exps.iter().zip(&t.primes) {
            if e > 0 {
                num *= BigUint::from(p).pow(e as u32);
            } else if e < 0 {
                den *= BigUint::from(p).pow((-e) as u32);
            }
        }
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// Split into `s^2 * k` with `k` squarefree: returns `(s, k)` where `s`
    /// is rational and `k` a positive squarefree integer, so the value's
    /// square root is `s * sqrt(k)`.
    pub fn split_square(&self) -> (BigRational, BigUint) {
        let t = table();
        let mut s_num = BigUint::one();
        let mut s_den = BigUint::one();
        let mut kernel = BigUint::one();
        for (&e, &p) in self.exps.iter().zip(&t.primes) {
            if e == 0 {
                continue;
            }
            let q = e.div_euclid(2);
            let r = e.rem_euclid(2);
            if q > 0 {
                s_num *= BigUint::from(p).pow(q as u32);
            } else if q < 0 {
                s_den *= BigUint::from(p).pow((-q) as u32);
            }
            if r == 1 {
                kernel *= BigUint::from(p);
            }
        }
        (
            BigRational::new(BigInt::from(s_num), BigInt::from(s_den)),
            kernel,
        )
    }
}
