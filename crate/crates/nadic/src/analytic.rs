//! Hensel-lifted operations: square roots with quadratic convergence and
//! exponential/logarithm by truncated power series.
//!
//! The even prime is rejected throughout (Hensel at 2 needs mod-8 side
//! conditions and exp needs valuation >= 2 there).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::context::valuation_u64;
use crate::error::{Error, Result};
use crate::int::{mod_inverse, NadicInt};

/// Result of a square-root lift: the root and the number of Newton
/// corrections spent on the slowest prime component.
#[derive(Clone, Debug)]
pub struct SqrtResult {
    pub root: NadicInt,
    pub iterations: u32,
}

/// Square root of a unit `a` in Z/n^kZ for odd n, lifted per prime component
/// and recombined. `branch` picks the seed residue modulo each prime; when
/// omitted the smallest square root modulo p is used.
pub fn nadic_sqrt(a: &NadicInt, branch: Option<&BTreeMap<u64, u64>>) -> Result<SqrtResult> {
    let ctx = a.context();
    ctx.require_odd_primes()?;
    if !a.is_unit() {
        return Err(Error::NonUnit);
    }
    let mut components = Vec::new();
    let mut worst = 0u32;
    for (i, &(p, alpha)) in ctx.factorization().iter().enumerate() {
        let cctx = ctx.component_context(i)?;
        let target = alpha * ctx.precision();
        let a_mod_p = biguint_rem_u64(a.residue(), p);
        let seed = match branch.and_then(|b| b.get(&p)) {
            Some(&r) => {
                if r >= p || mulmod(r, r, p) != a_mod_p {
                    return Err(Error::InvalidArgument(format!(
                        "branch residue {r} is not a square root of the argument modulo {p}"
                    )));
                }
                r
            }
            None => {
                let r = sqrt_mod_prime(a_mod_p, p).ok_or(Error::NoSquareRoot { prime: p })?;
                r.min(p - r)
            }
        };
        let (root, iters) = lift_sqrt(a.residue(), p, seed, target);
        worst = worst.max(iters);
        components.push(NadicInt::from_biguint(&cctx, root));
    }
    let root = NadicInt::crt_join(ctx, &components)?;
    Ok(SqrtResult { root, iterations: worst })
}

/// Newton lift x <- x - (x^2 - a) * (2x)^{-1} with precision doubling,
/// the inverse refined incrementally alongside the root.
fn lift_sqrt(a: &BigUint, p: u64, seed: u64, target_digits: u32) -> (BigUint, u32) {
    let pb = BigUint::from(p);
    let mut m = 1u32;
    let mut modulus = pb.clone();
    let mut x = BigUint::from(seed);
    let mut inv = mod_inverse(&((&x << 1u32) % &modulus), &modulus).expect("2x is a unit mod p");
    let mut iterations = 0u32;
    while m < target_digits {
        m = (m * 2).min(target_digits);
        modulus = pb.pow(m);
        let x2 = (&x * &x) % &modulus;
        let diff = sub_mod(&x2, &(a % &modulus), &modulus);
        x = sub_mod(&x, &((diff * &inv) % &modulus), &modulus);
        iterations += 1;
        // one Newton step on the inverse restores full precision
        let two_x = (&x << 1u32) % &modulus;
        let correction = sub_mod(&BigUint::from(2u32), &((&two_x * &inv) % &modulus), &modulus);
        inv = (&inv * correction) % &modulus;
    }
    (x, iterations)
}

/// Square root modulo an odd prime by Tonelli-Shanks; None for non-residues.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a % 2);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks: p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// exp by the truncated series sum x^t / t!, valid when x = 0 mod p for
/// every (odd) prime p of the base.
pub fn nadic_exp(x: &NadicInt) -> Result<NadicInt> {
    let ctx = x.context();
    ctx.require_odd_primes()?;
    for &(p, _) in ctx.factorization() {
        if biguint_rem_u64(x.residue(), p) != 0 {
            return Err(Error::OutsideConvergenceRadius { prime: p });
        }
    }
    let mut components = Vec::new();
    for (i, &(p, alpha)) in ctx.factorization().iter().enumerate() {
        let cctx = ctx.component_context(i)?;
        let target = alpha * ctx.precision();
        let sum = exp_component(x.residue(), p, target);
        components.push(NadicInt::from_biguint(&cctx, sum));
    }
    NadicInt::crt_join(ctx, &components)
}

/// log by the truncated series sum (-1)^{t+1} (u-1)^t / t, valid when
/// u = 1 mod p for every (odd) prime p of the base.
pub fn nadic_log(u: &NadicInt) -> Result<NadicInt> {
    let ctx = u.context();
    ctx.require_odd_primes()?;
    for &(p, _) in ctx.factorization() {
        if biguint_rem_u64(u.residue(), p) != 1 {
            return Err(Error::OutsideConvergenceRadius { prime: p });
        }
    }
    let mut components = Vec::new();
    for (i, &(p, alpha)) in ctx.factorization().iter().enumerate() {
        let cctx = ctx.component_context(i)?;
        let target = alpha * ctx.precision();
        let sum = log_component(u.residue(), p, target);
        components.push(NadicInt::from_biguint(&cctx, sum));
    }
    NadicInt::crt_join(ctx, &components)
}

/// Worst-case term count: past this index every term of exp/log vanishes
/// modulo p^target (term valuation grows like t(p-2)/(p-1)).
fn term_bound(p: u64, target: u32) -> u64 {
    let t = (target as u64 * (p - 1)).div_ceil(p - 2);
    t + 4
}

fn exp_component(x: &BigUint, p: u64, target: u32) -> BigUint {
    let t_max = term_bound(p, target);
    let guard = vp_factorial(t_max, p);
    let pb = BigUint::from(p);
    let big_mod = pb.pow(target + guard as u32);
    let out_mod = pb.pow(target);
    let x0 = x % &big_mod;

    let mut pow = BigUint::one(); // x^t mod big_mod
    let mut fact_unit = BigUint::one(); // prime-to-p part of t! mod big_mod
    let mut fact_val = 0u64; // v_p(t!)
    let mut sum = BigUint::zero();
    for t in 0..=t_max {
        if t > 0 {
            pow = (&pow * &x0) % &big_mod;
            let v = valuation_u64(t, p);
            fact_val += v as u64;
            fact_unit = (&fact_unit * BigUint::from(t / p.pow(v))) % &big_mod;
        }
        let term = series_term(&pow, fact_val, &fact_unit, p, &out_mod);
        if t == t_max {
            debug_assert!(term.is_zero(), "term bound too small for exp");
        }
        sum = (sum + term) % &out_mod;
    }
    sum
}

fn log_component(u: &BigUint, p: u64, target: u32) -> BigUint {
    let t_max = term_bound(p, target);
    let guard = (t_max as f64).log(p as f64).ceil() as u32 + 1;
    let pb = BigUint::from(p);
    let big_mod = pb.pow(target + guard);
    let out_mod = pb.pow(target);
    let z = sub_mod(&(u % &big_mod), &BigUint::one(), &big_mod);

    let mut pow = BigUint::one(); // z^t mod big_mod
    let mut sum = BigUint::zero();
    for t in 1..=t_max {
        pow = (&pow * &z) % &big_mod;
        let v = valuation_u64(t, p);
        let unit = BigUint::from(t / p.pow(v));
        let term = series_term(&pow, v as u64, &unit, p, &out_mod);
        if t == t_max {
            debug_assert!(term.is_zero(), "term bound too small for log");
        }
        // signs alternate: +, -, +, ...
        if t % 2 == 1 {
            sum = (sum + term) % &out_mod;
        } else {
            sum = sub_mod(&sum, &term, &out_mod);
        }
    }
    sum
}

/// numerator / (p^val * unit) reduced modulo out_mod. The numerator is
/// exactly divisible by p^val by the convergence-domain preconditions.
fn series_term(
    numerator: &BigUint,
    val: u64,
    unit: &BigUint,
    p: u64,
    out_mod: &BigUint,
) -> BigUint {
    let pv = BigUint::from(p).pow(val as u32);
    let (q, r) = numerator.div_rem(&pv);
    debug_assert!(r.is_zero(), "series numerator not divisible by p-part");
    let inv = mod_inverse(&(unit % out_mod), out_mod).expect("unit part is coprime to p");
    (q % out_mod) * inv % out_mod
}

/// v_p(t!) by Legendre's formula.
fn vp_factorial(t: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = p;
    loop {
        total += t / q;
        match q.checked_mul(p) {
            Some(next) if next <= t => q = next,
            _ => break,
        }
    }
    total
}

fn sub_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        m - b + a
    }
}

fn biguint_rem_u64(a: &BigUint, m: u64) -> u64 {
    let r = a % BigUint::from(m);
    r.to_u64_digits().first().copied().unwrap_or(0)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}
