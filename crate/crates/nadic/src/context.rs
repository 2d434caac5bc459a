use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest base accepted for context creation. Precision carries the size;
/// bases stay small enough for trial-division factorization.
pub const MAX_BASE: u64 = 1 << 31;

#[derive(Debug)]
struct ContextInner {
    base: u64,
    precision: u32,
    factorization: Vec<(u64, u32)>,
    modulus: BigUint,
    /// p_i^(alpha_i * k), pairwise coprime, product = n^k.
    component_moduli: Vec<BigUint>,
}

/// Working ring Z/n^kZ: base n, its prime factorization and the number k of
/// base-n digits carried. Immutable and cheap to clone.
#[derive(Clone, Debug)]
pub struct NadicContext(Arc<ContextInner>);

impl PartialEq for NadicContext {
    fn eq(&self, other: &Self) -> bool {
        self.0.base == other.0.base && self.0.precision == other.0.precision
    }
}
impl Eq for NadicContext {}

impl NadicContext {
    pub fn new(base: u64, precision: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} must be >= 2")));
        }
        if base > MAX_BASE {
            return Err(Error::InvalidArgument(format!(
                "base {base} exceeds the maximum {MAX_BASE}"
            )));
        }
        if precision < 1 {
            return Err(Error::InvalidArgument("precision must be >= 1".into()));
        }
        let factorization = factorize(base);
        let modulus = BigUint::from(base).pow(precision);
        let component_moduli = factorization
            .iter()
            .map(|&(p, a)| BigUint::from(p).pow(a * precision))
            .collect();
        Ok(NadicContext(Arc::new(ContextInner {
            base,
            precision,
            factorization,
            modulus,
            component_moduli,
        })))
    }

    pub fn base(&self) -> u64 {
        self.0.base
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    /// Prime factorization of the base, primes strictly increasing.
    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.0.factorization
    }

    /// n^k.
    pub fn modulus(&self) -> &BigUint {
        &self.0.modulus
    }

    /// The pairwise-coprime moduli p_i^(alpha_i * k).
    pub fn component_moduli(&self) -> &[BigUint] {
        &self.0.component_moduli
    }

    /// Context of the i-th prime-power component: base p_i, precision alpha_i * k.
    pub fn component_context(&self, i: usize) -> Result<NadicContext> {
        let (p, a) = self.0.factorization[i];
        NadicContext::new(p, a * self.0.precision)
    }

    pub fn has_even_prime(&self) -> bool {
        self.0.factorization.first().map(|&(p, _)| p == 2).unwrap_or(false)
    }

    /// Fails with `unsupported-prime-2` when 2 divides the base.
    pub fn require_odd_primes(&self) -> Result<()> {
        if self.has_even_prime() {
            Err(Error::UnsupportedPrime2)
        } else {
            Ok(())
        }
    }

    /// Context with the same base at a (usually smaller) precision.
    pub fn with_precision(&self, precision: u32) -> Result<NadicContext> {
        NadicContext::new(self.0.base, precision)
    }
}

impl fmt::Display for NadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}Z", self.0.base, self.0.precision)
    }
}

/// Trial division; bases are capped at 2^31 so this is always fast.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0u32;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// v_p(n) for a u64.
pub(crate) fn valuation_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// v_p of a BigUint; returns (valuation, n / p^valuation).
pub(crate) fn valuation_big(n: &BigUint, p: u64) -> (u32, BigUint) {
    use num_integer::Integer;
    use num_traits::Zero;
    if n.is_zero() {
        return (0, BigUint::zero());
    }
    let p = BigUint::from(p);
    let mut v = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if r.is_zero() {
            m = q;
            v += 1;
        } else {
            break;
        }
    }
    (v, m)
}
