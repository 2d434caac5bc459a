//! Last-digit machinery: idempotents of Z/n^kZ, modular power towers via the
//! generalized Euler step b^e = b^(e mod lambda(m) + lambda(m)) (valid for
//! e >= log2 m, no coprimality needed), n-adic tetration limits, the x = b^x
//! fixed point and Graham's-number last digits.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::context::{factorize, NadicContext};
use crate::digits::DigitString;
use crate::error::{Error, Result};
use crate::int::NadicInt;

/// Towers whose exact value fits below this cutoff are evaluated directly.
const EXACT_CUTOFF: u64 = u64::MAX;

/// Practical cap on requested digit counts.
pub const MAX_DIGITS: u32 = 10_000;

/// A modulus kept in factored form so Carmichael lambdas stay cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored(BTreeMap<u64, u64>);

impl Factored {
    pub fn from_u64(m: u64) -> Result<Factored> {
        if m < 1 {
            return Err(Error::InvalidArgument("modulus must be >= 1".into()));
        }
        Ok(Factored(
            factorize(m).into_iter().map(|(p, e)| (p, e as u64)).collect(),
        ))
    }

    /// n^k in factored form.
    pub fn from_context(ctx: &NadicContext) -> Factored {
        Factored(
            ctx.factorization()
                .iter()
                .map(|&(p, a)| (p, a as u64 * ctx.precision() as u64))
                .collect(),
        )
    }

    pub fn value(&self) -> BigUint {
        self.0
            .iter()
            .map(|(&p, &e)| BigUint::from(p).pow(e as u32))
            .product()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn merge_lcm(&mut self, p: u64, e: u64) {
        if e == 0 {
            return;
        }
        let cur = self.0.entry(p).or_insert(0);
        *cur = (*cur).max(e);
    }

    /// Carmichael function: lcm over lambda(p^e), with lambda(2^e) = 2^(e-2)
    /// for e >= 3 and lambda(p^e) = p^(e-1)(p-1) for odd p.
    pub fn carmichael(&self) -> Factored {
        let mut out = Factored(BTreeMap::new());
        for (&p, &e) in &self.0 {
            if p == 2 {
                match e {
                    1 => {}
                    2 => out.merge_lcm(2, 1),
                    _ => out.merge_lcm(2, e - 2),
                }
            } else {
                out.merge_lcm(p, e - 1);
                for (q, f) in factorize(p - 1) {
                    out.merge_lcm(q, f as u64);
                }
            }
        }
        out
    }
}

/// Carmichael function of a u64 modulus.
pub fn carmichael(m: u64) -> Result<BigUint> {
    Ok(Factored::from_u64(m)?.carmichael().value())
}

/// b tetrated h times, evaluated exactly when it fits the cutoff.
fn exact_tower(b: u64, h: u64) -> Option<u64> {
    let mut t = b;
    for _ in 1..h {
        t = checked_pow_u64(b, t)?;
    }
    Some(t)
}

/// a^e when it fits in the cutoff.
fn checked_pow_u64(a: u64, e: u64) -> Option<u64> {
    if a == 0 {
        return Some(if e == 0 { 1 } else { 0 });
    }
    if a == 1 {
        return Some(1);
    }
    if e > 64 {
        return None;
    }
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(a)?;
        if acc > EXACT_CUTOFF {
            return None;
        }
    }
    Some(acc)
}

fn tower_rec(b: u64, h: u64, m: &Factored) -> BigUint {
    let mv = m.value();
    if mv.is_one() {
        return BigUint::zero();
    }
    if let Some(t) = exact_tower(b, h) {
        return BigUint::from(t) % mv;
    }
    // h >= 2 here since b itself always fits
    let e = match exact_tower(b, h - 1) {
        Some(t) => BigUint::from(t),
        None => {
            // generalized Euler: the true exponent b^^(h-1) exceeds the
            // cutoff, hence certainly log2(m)
            let lam = m.carmichael();
            tower_rec(b, h - 1, &lam) + lam.value()
        }
    };
    BigUint::from(b).modpow(&e, &mv)
}

/// b^^h modulo the factored modulus; the flag reports whether the true tower
/// value fit below the exactness cutoff.
pub fn tower_mod_factored(b: u64, h: u64, m: &Factored) -> (BigUint, bool) {
    (tower_rec(b, h, m), exact_tower(b, h).is_some())
}

/// b^^h mod m for a plain u64 modulus (factored by trial division).
pub fn tower_mod(b: u64, h: u64, modulus: u64) -> Result<(BigUint, bool)> {
    if b < 2 || h < 1 || modulus < 2 {
        return Err(Error::InvalidArgument("need b >= 2, h >= 1, modulus >= 2".into()));
    }
    Ok(tower_mod_factored(b, h, &Factored::from_u64(modulus)?))
}

/// All 2^t - 2 nontrivial idempotents of Z/n^kZ, obtained by recombining the
/// 0/1 patterns across the prime-power components. Empty for prime-power
/// bases. Ordered by the component bit pattern.
pub fn idempotents(ctx: &NadicContext) -> Vec<NadicInt> {
    let t = ctx.factorization().len();
    if t < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((1usize << t) - 2);
    for pattern in 1..((1u32 << t) - 1) {
        let components: Vec<NadicInt> = (0..t)
            .map(|i| {
                let cctx = ctx.component_context(i).expect("component context is valid");
                if pattern >> i & 1 == 1 {
                    NadicInt::one(&cctx)
                } else {
                    NadicInt::zero(&cctx)
                }
            })
            .collect();
        out.push(NadicInt::crt_join(ctx, &components).expect("component moduli are coprime"));
    }
    out
}

/// Height at which towers have provably stabilized modulo n^k (validated by
/// the stabilization tests; slack of 2 over the digit count).
fn stabilization_height(ctx: &NadicContext) -> u64 {
    let max_digits = ctx
        .factorization()
        .iter()
        .map(|&(_, a)| a as u64 * ctx.precision() as u64)
        .max()
        .unwrap_or(1);
    max_digits + 2
}

/// The n-adic limit of the infinite tetration b^^oo: components at primes
/// dividing b converge to 0, coprime components to the fixed point of
/// exponentiation.
pub fn tetration_limit(ctx: &NadicContext, b: u64) -> Result<NadicInt> {
    if b < 2 {
        return Err(Error::InvalidArgument("tower base must be >= 2".into()));
    }
    let m = Factored::from_context(ctx);
    let h0 = stabilization_height(ctx);
    let cap = ctx.precision() as u64 + 64;
    let mut h = h0;
    let mut prev = tower_rec(b, h, &m);
    while h <= cap {
        let next = tower_rec(b, h + 1, &m);
        if next == prev {
            // one extra confirmation height
            let confirm = tower_rec(b, h + 2, &m);
            if confirm == prev {
                return Ok(NadicInt::from_biguint(ctx, prev));
            }
        }
        prev = next;
        h += 1;
    }
    Err(Error::Internal(format!(
        "tetration of {b} did not stabilize modulo {ctx} within height {cap}"
    )))
}

/// The fixed point of x = b^x in Z/n^kZ for gcd(b, n) = 1, computed as the
/// tetration limit and verified through the generalized Euler step.
pub fn exp_fixed_point(ctx: &NadicContext, b: u64) -> Result<NadicInt> {
    if b < 2 {
        return Err(Error::InvalidArgument("base must be >= 2".into()));
    }
    if ctx.factorization().iter().any(|&(p, _)| b % p == 0) {
        return Err(Error::NotCoprime);
    }
    let x = tetration_limit(ctx, b)?;
    let m = ctx.modulus();
    let exponent = if x.residue().bits() as u64 >= m.bits() {
        // x >= log2(n^k): the literal exponent already satisfies Euler
        x.residue().clone()
    } else {
        x.residue() + Factored::from_context(ctx).carmichael().value()
    };
    let check = BigUint::from(b).modpow(&exponent, m);
    if &check != x.residue() {
        return Err(Error::Internal(format!(
            "fixed point verification failed: {b}^x != x modulo {ctx}"
        )));
    }
    Ok(x)
}

/// Last k decimal digits of Graham's number: equal to the 10-adic fixed
/// point of x = 3^x, and to 3^^h mod 10^k for any sufficiently large h.
pub fn graham_last_digits(k: u32) -> Result<DigitString> {
    if k < 1 || k > MAX_DIGITS {
        return Err(Error::InvalidArgument(format!("digits must be in 1..={MAX_DIGITS}")));
    }
    let ctx = NadicContext::new(10, k)?;
    let x = exp_fixed_point(&ctx, 3)?;
    let m = Factored::from_context(&ctx);
    let (a, _) = tower_mod_factored(3, k as u64 + 2, &m);
    let (b, _) = tower_mod_factored(3, k as u64 + 5, &m);
    if a != b || &a != x.residue() {
        return Err(Error::Internal("tower stabilization mismatch for base 3".into()));
    }
    Ok(x.digits())
}

/// A Knuth up-arrow expression base ^(arrows) height.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub base: u64,
    pub arrows: u32,
    pub height: u64,
}

/// a ^(m) b exactly when every intermediate stays below the cutoff.
fn hyper_exact(a: u64, m: u32, b: u64) -> Option<u64> {
    if a == 1 {
        return Some(1);
    }
    if b == 0 {
        return Some(1);
    }
    if b == 1 {
        return Some(a);
    }
    if a == 2 && b == 2 {
        return Some(4); // 2 ^(m) 2 = 4 for every arrow count
    }
    if m >= 4 {
        // every remaining case already exceeds the cutoff
        // (a >= 3, b = 2 gives a ^(m-1) a; b >= 3 gives at least 2^^65536)
        return None;
    }
    if m == 1 {
        return checked_pow_u64(a, b);
    }
    // values explode within a handful of steps, so this loop exits quickly
    let mut v = a;
    for _ in 1..b {
        v = hyper_exact(a, m - 1, v)?;
    }
    Some(v)
}

/// Last k digits (base of `ctx`) of the up-arrow expression. Exact small
/// values are evaluated directly; for two arrows the tower recursion is
/// exact modulo n^k at any height; for three or more arrows the expression
/// unwinds to a tetration of certified height >= the stabilization bound,
/// whose digits are the tetration limit's.
pub fn knuth_last_digits(spec: &TowerSpec, ctx: &NadicContext) -> Result<DigitString> {
    if spec.base < 2 {
        return Err(Error::InvalidArgument("tower base must be >= 2".into()));
    }
    if spec.arrows < 1 || spec.height < 1 {
        return Err(Error::InvalidArgument("arrows and height must be >= 1".into()));
    }
    let x = knuth_rec(spec.base, spec.arrows, spec.height, ctx)?;
    Ok(x.digits())
}

fn knuth_rec(a: u64, m: u32, b: u64, ctx: &NadicContext) -> Result<NadicInt> {
    if let Some(v) = hyper_exact(a, m, b) {
        return Ok(NadicInt::from_biguint(ctx, BigUint::from(v)));
    }
    match m {
        1 => Ok(NadicInt::from_biguint(
            ctx,
            BigUint::from(a).modpow(&BigUint::from(b), ctx.modulus()),
        )),
        2 => {
            let f = Factored::from_context(ctx);
            Ok(NadicInt::from_biguint(ctx, tower_rec(a, b, &f)))
        }
        _ => match hyper_exact(a, m, b - 1) {
            // a ^(m) b = a ^(m-1) (a ^(m) (b-1))
            Some(inner) => knuth_rec(a, m - 1, inner, ctx),
            // the inner expression exceeds the cutoff, so the full value is
            // a tetration of height far beyond the stabilization bound
            None => tetration_limit(ctx, a),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u64, k: u32) -> NadicContext {
        NadicContext::new(n, k).unwrap()
    }

    #[test]
    fn idempotents_match_known_strings() {
        let c = ctx(10, 20);
        let es = idempotents(&c);
        assert_eq!(es.len(), 2);
        let strings: Vec<String> = es.iter().map(|e| e.digits().to_string()).collect();
        assert!(strings.contains(&"07743740081787109376".to_string()));
        assert!(strings.contains(&"92256259918212890625".to_string()));
        // sum 1, product 0
        assert_eq!(es[0].add(&es[1]).unwrap(), NadicInt::one(&c));
        assert!(es[0].mul(&es[1]).unwrap().is_zero());
        // prime base: none
        assert!(idempotents(&ctx(7, 3)).is_empty());
    }

    #[test]
    fn idempotent_agrees_with_squaring_oracle() {
        // 5^(2^j) mod 10^k stabilizes onto the 5-component idempotent
        let k = 12u32;
        let c = ctx(10, k);
        let m = c.modulus().clone();
        // 5^(2^j) is idempotent mod 10^k once 2^j kills the order of 5
        // mod 2^k, which is 2^(k-2); j = k is comfortably past that
        let mut v = BigUint::from(5u32);
        for _ in 0..k {
            v = (&v * &v) % &m;
        }
        let es = idempotents(&c);
        assert!(es.iter().any(|e| e.residue() == &v));
    }

    #[test]
    fn tower_mod_examples() {
        assert_eq!(tower_mod(3, 2, 1_000_000).unwrap(), (BigUint::from(27u32), true));
        // 3^^3 = 3^27 = 7625597484987
        assert_eq!(tower_mod(3, 3, 1_000_000).unwrap(), (BigUint::from(484987u32), true));
        // 2^^4 = 65536
        assert_eq!(tower_mod(2, 4, 10_000).unwrap(), (BigUint::from(5536u32), true));
        for h in 5..10 {
            let (r, exact) = tower_mod(3, h, 1_000).unwrap();
            assert_eq!(r, BigUint::from(387u32));
            assert!(!exact);
        }
        // cross-check the stabilized value: 3^387 mod 1000 = 387
        assert_eq!(
            BigUint::from(3u32).modpow(&BigUint::from(387u32), &BigUint::from(1000u32)),
            BigUint::from(387u32)
        );
    }

    #[test]
    fn carmichael_values() {
        assert_eq!(carmichael(8).unwrap(), BigUint::from(2u32));
        assert_eq!(carmichael(10).unwrap(), BigUint::from(4u32));
        assert_eq!(carmichael(1000).unwrap(), BigUint::from(100u32));
        assert_eq!(carmichael(561).unwrap(), BigUint::from(80u32));
    }

    #[test]
    fn tetration_limits() {
        // powers of the base vanish
        let c = ctx(10, 4);
        assert!(tetration_limit(&c, 10).unwrap().is_zero());
        assert_eq!(
            tetration_limit(&ctx(10, 3), 3).unwrap().residue(),
            &BigUint::from(387u32)
        );
        // mixed: 2 shares the prime 2 with 10
        let v = tetration_limit(&ctx(10, 4), 2).unwrap();
        let parts = v.crt_split();
        assert!(parts[0].is_zero()); // 2-component
        assert!(!parts[1].is_zero()); // 5-component is a fixed point
    }

    #[test]
    fn fixed_points() {
        let x = exp_fixed_point(&ctx(10, 3), 3).unwrap();
        assert_eq!(x.residue(), &BigUint::from(387u32));
        assert_eq!(exp_fixed_point(&ctx(10, 2), 2).unwrap_err().name(), "not-coprime");
        // b = 7, k = 2: brute-force scan with the lifted exponent
        let x = exp_fixed_point(&ctx(10, 2), 7).unwrap();
        let lam = carmichael(100).unwrap();
        let found: Vec<u64> = (0..100u64)
            .filter(|&r| {
                let e = BigUint::from(r) + &lam;
                BigUint::from(7u32).modpow(&e, &BigUint::from(100u32)) == BigUint::from(r)
            })
            .collect();
        assert_eq!(found.len(), 1);
        assert_eq!(x.residue(), &BigUint::from(found[0]));
    }

    #[test]
    fn graham_digits() {
        assert_eq!(graham_last_digits(3).unwrap().to_string(), "387");
        assert_eq!(graham_last_digits(1).unwrap().to_string(), "7");
        // truncation coherence
        let d10 = graham_last_digits(10).unwrap().to_string();
        let d12 = graham_last_digits(12).unwrap().to_string();
        assert!(d12.ends_with(&d10));
    }

    #[test]
    fn knuth_expressions() {
        let c3 = ctx(10, 3);
        // g_1 = 3^^^^3 dominates: last three digits match the fixed point
        let g1 = knuth_last_digits(&TowerSpec { base: 3, arrows: 4, height: 3 }, &c3).unwrap();
        assert_eq!(g1.to_string(), "387");
        // exact small case, zero-padded to k digits
        let v = knuth_last_digits(&TowerSpec { base: 2, arrows: 1, height: 4 }, &c3).unwrap();
        assert_eq!(v.to_string(), "016");
        // 2^^9 is already stabilized at k=2, matching the tetration limit
        let c2 = ctx(10, 2);
        let t = knuth_last_digits(&TowerSpec { base: 2, arrows: 2, height: 9 }, &c2).unwrap();
        let lim = tetration_limit(&c2, 2).unwrap();
        assert_eq!(t, lim.digits());
    }
}
