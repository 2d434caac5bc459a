use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::context::NadicContext;
use crate::digits::DigitString;
use crate::error::{Error, Result};

/// An n-adic integer known to k base-n digits: the canonical residue in
/// [0, n^k), together with its context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NadicInt {
    ctx: NadicContext,
    residue: BigUint,
}

impl NadicInt {
    pub fn from_biguint(ctx: &NadicContext, value: BigUint) -> NadicInt {
        let residue = value % ctx.modulus();
        NadicInt { ctx: ctx.clone(), residue }
    }

    /// Embed a signed integer; negative values wrap modulo n^k.
    pub fn from_integer(ctx: &NadicContext, z: &BigInt) -> NadicInt {
        let m = BigInt::from(ctx.modulus().clone());
        let r = z.mod_floor(&m);
        NadicInt::from_biguint(ctx, r.to_biguint().expect("mod_floor is nonnegative"))
    }

    pub fn from_i64(ctx: &NadicContext, z: i64) -> NadicInt {
        NadicInt::from_integer(ctx, &BigInt::from(z))
    }

    /// Embed the rational a/b, which requires gcd(b, n) = 1.
    pub fn from_rational(ctx: &NadicContext, a: &BigInt, b: &BigInt) -> Result<NadicInt> {
        if b.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        for &(p, _) in ctx.factorization() {
            if (b % BigInt::from(p)).is_zero() {
                return Err(Error::DenominatorNotUnit { prime: p });
            }
        }
        let bi = NadicInt::from_integer(ctx, b).invert()?;
        Ok(NadicInt::from_integer(ctx, a).mul(&bi)?)
    }

    pub fn context(&self) -> &NadicContext {
        &self.ctx
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn zero(ctx: &NadicContext) -> NadicInt {
        NadicInt { ctx: ctx.clone(), residue: BigUint::zero() }
    }

    pub fn one(ctx: &NadicContext) -> NadicInt {
        NadicInt::from_biguint(ctx, BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    fn check_context(&self, other: &NadicInt) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::InvalidArgument(format!(
                "context mismatch: {} vs {}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &NadicInt) -> Result<NadicInt> {
        self.check_context(other)?;
        Ok(NadicInt::from_biguint(&self.ctx, &self.residue + &other.residue))
    }

    pub fn neg(&self) -> NadicInt {
        if self.residue.is_zero() {
            self.clone()
        } else {
            NadicInt { ctx: self.ctx.clone(), residue: self.ctx.modulus() - &self.residue }
        }
    }

    pub fn sub(&self, other: &NadicInt) -> Result<NadicInt> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &NadicInt) -> Result<NadicInt> {
        self.check_context(other)?;
        Ok(NadicInt::from_biguint(&self.ctx, &self.residue * &other.residue))
    }

    pub fn pow(&self, e: &BigUint) -> NadicInt {
        NadicInt {
            ctx: self.ctx.clone(),
            residue: self.residue.modpow(e, self.ctx.modulus()),
        }
    }

    /// True when the residue is a unit of Z/n^kZ, i.e. coprime to n.
    pub fn is_unit(&self) -> bool {
        self.offending_prime().is_none()
    }

    /// Smallest prime of the base dividing the residue, if any.
    pub fn offending_prime(&self) -> Option<u64> {
        self.ctx
            .factorization()
            .iter()
            .map(|&(p, _)| p)
            .find(|&p| (&self.residue % BigUint::from(p)).is_zero())
    }

    /// Multiplicative inverse by extended gcd modulo n^k.
    pub fn invert(&self) -> Result<NadicInt> {
        if let Some(p) = self.offending_prime() {
            return Err(Error::NotInvertible { prime: p });
        }
        let inv = mod_inverse(&self.residue, self.ctx.modulus())
            .ok_or_else(|| Error::Internal("unit had no inverse".into()))?;
        Ok(NadicInt { ctx: self.ctx.clone(), residue: inv })
    }

    /// The k base-n digits of the residue, least-significant first.
    pub fn digits(&self) -> DigitString {
        let base = BigUint::from(self.ctx.base());
        let mut digits = Vec::with_capacity(self.ctx.precision() as usize);
        let mut r = self.residue.clone();
        for _ in 0..self.ctx.precision() {
            let (q, d) = r.div_rem(&base);
            digits.push(biguint_to_u64(&d));
            r = q;
        }
        DigitString::new(self.ctx.base(), digits).expect("digits are reduced")
    }

    pub fn from_digits(ctx: &NadicContext, d: &DigitString) -> Result<NadicInt> {
        if d.base() != ctx.base() {
            return Err(Error::InvalidArgument(format!(
                "digit base {} does not match context base {}",
                d.base(),
                ctx.base()
            )));
        }
        if d.len() > ctx.precision() as usize {
            return Err(Error::InvalidArgument(format!(
                "{} digits exceed precision {}",
                d.len(),
                ctx.precision()
            )));
        }
        let base = BigUint::from(ctx.base());
        let mut acc = BigUint::zero();
        for &digit in d.digits().iter().rev() {
            acc = acc * &base + BigUint::from(digit);
        }
        Ok(NadicInt::from_biguint(ctx, acc))
    }

    /// Project onto the prime-power components p_i^(alpha_i * k).
    pub fn crt_split(&self) -> Vec<NadicInt> {
        (0..self.ctx.factorization().len())
            .map(|i| {
                let cctx = self.ctx.component_context(i).expect("component context is valid");
                NadicInt::from_biguint(&cctx, self.residue.clone())
            })
            .collect()
    }

    /// Recombine prime-power components into the ring Z/n^kZ.
    pub fn crt_join(ctx: &NadicContext, components: &[NadicInt]) -> Result<NadicInt> {
        let expected = ctx.component_moduli();
        if components.len() != expected.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                expected.len(),
                components.len()
            )));
        }
        for (c, m) in components.iter().zip(expected) {
            if c.ctx.modulus() != m {
                return Err(Error::InvalidArgument(format!(
                    "component modulus {} does not match {}",
                    c.ctx.modulus(),
                    m
                )));
            }
        }
        let mut x = BigUint::zero();
        let mut m = BigUint::one();
        for c in components {
            let mi = c.ctx.modulus();
            // x' = x + m * ((r - x) * m^{-1} mod mi)
            let minv = mod_inverse(&(&m % mi), mi)
                .ok_or_else(|| Error::InvalidArgument("component moduli not coprime".into()))?;
            let diff = sub_mod(&c.residue, &(&x % mi), mi);
            let t = (diff * minv) % mi;
            x += &m * t;
            m *= mi;
        }
        Ok(NadicInt::from_biguint(ctx, x))
    }

    /// The same value truncated to fewer digits.
    pub fn truncate(&self, k: u32) -> Result<NadicInt> {
        let ctx = self.ctx.with_precision(k)?;
        Ok(NadicInt::from_biguint(&ctx, self.residue.clone()))
    }
}

impl fmt::Display for NadicInt {
    /// Canonical serialized form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mod {}^{}",
            self.residue,
            self.ctx.base(),
            self.ctx.precision()
        )
    }
}

fn biguint_to_u64(b: &BigUint) -> u64 {
    let ds = b.to_u64_digits();
    match ds.len() {
        0 => 0,
        1 => ds[0],
        _ => unreachable!("digit exceeds u64"),
    }
}

/// (a - b) mod m for reduced a, b.
fn sub_mod(a: &BigUint, b: &BigUint, m: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        m - b + a
    }
}

/// Inverse of a modulo m via extended gcd, None when gcd != 1.
pub(crate) fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let m_int = BigInt::from_biguint(Sign::Plus, m.clone());
    let ext = a.extended_gcd(&m_int);
    if !ext.gcd.is_one() {
        return None;
    }
    let mut x = ext.x % &m_int;
    if x.is_negative() {
        x += &m_int;
    }
    x.to_biguint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u64, k: u32) -> NadicContext {
        NadicContext::new(n, k).unwrap()
    }

    #[test]
    fn minus_one_is_all_nines() {
        let c = ctx(10, 6);
        let x = NadicInt::from_i64(&c, -1);
        assert_eq!(x.residue(), &BigUint::from(999_999u64));
        assert!(x.digits().digits().iter().all(|&d| d == 9));
        // ...999999 + 1 = ...000000
        let one = NadicInt::one(&c);
        assert!(x.add(&one).unwrap().is_zero());
    }

    #[test]
    fn small_embeddings() {
        let c = ctx(5, 3);
        let x = NadicInt::from_i64(&c, 14);
        assert_eq!(x.residue(), &BigUint::from(14u64));
        assert_eq!(x.digits().digits(), &[4, 2, 0]);
        assert!(NadicInt::from_i64(&ctx(10, 4), 0).is_zero());
    }

    #[test]
    fn invert_golden_key() {
        let c = ctx(10, 4);
        let x = NadicInt::from_i64(&c, 73);
        assert_eq!(x.invert().unwrap().residue(), &BigUint::from(137u64));
        let one = NadicInt::one(&c);
        assert_eq!(one.invert().unwrap(), one);
        // oracle: 3 * 6667 = 20001 = 1 mod 10^4
        assert_eq!(
            NadicInt::from_i64(&c, 3).invert().unwrap().residue(),
            &BigUint::from(6667u64)
        );
    }

    #[test]
    fn invert_names_offending_prime() {
        let c = ctx(10, 4);
        match NadicInt::from_i64(&c, 35).invert() {
            Err(Error::NotInvertible { prime }) => assert_eq!(prime, 5),
            other => panic!("expected not-invertible, got {other:?}"),
        }
    }

    #[test]
    fn rational_embeddings() {
        let c = ctx(10, 4);
        let third = NadicInt::from_rational(&c, &BigInt::from(1), &BigInt::from(3)).unwrap();
        assert_eq!(third.residue(), &BigUint::from(6667u64));
        // brute-force oracle: 6r = 23 mod 125
        let c5 = ctx(5, 3);
        let r = NadicInt::from_rational(&c5, &BigInt::from(23), &BigInt::from(6)).unwrap();
        let expected = (0..125u64).find(|r| (6 * r) % 125 == 23 % 125).unwrap();
        assert_eq!(r.residue(), &BigUint::from(expected));
        let seven = NadicInt::from_rational(&c, &BigInt::from(7), &BigInt::from(1)).unwrap();
        assert_eq!(seven.residue(), &BigUint::from(7u64));
        assert_eq!(
            NadicInt::from_rational(&c, &BigInt::from(1), &BigInt::from(5))
                .unwrap_err()
                .name(),
            "denominator-not-unit"
        );
    }

    #[test]
    fn rgb_digit_grouping() {
        // yellow: FF FF 00 in hex, 24 bits in binary
        let hex = ctx(16, 6);
        let v = NadicInt::from_i64(&hex, 0xFFFF00);
        assert_eq!(v.digits().to_string(), "FFFF00");
        let bits = ctx(2, 24);
        let b = NadicInt::from_i64(&bits, 0xFFFF00);
        assert_eq!(b.digits().to_string(), "111111111111111100000000");
    }

    #[test]
    fn crt_split_small() {
        let c = ctx(10, 1);
        let parts = NadicInt::from_i64(&c, 7).crt_split();
        assert_eq!(parts[0].residue(), &BigUint::from(1u64)); // mod 2
        assert_eq!(parts[1].residue(), &BigUint::from(2u64)); // mod 5
        let back = NadicInt::crt_join(&c, &parts).unwrap();
        assert_eq!(back.residue(), &BigUint::from(7u64));
    }

    #[test]
    fn zero_divisor_39_digits() {
        // ...890625 * ...890624 = 0 mod 10^39
        let c = ctx(10, 39);
        let e: BigUint = "896109004106619977392256259918212890625".parse().unwrap();
        let x = NadicInt::from_biguint(&c, e.clone());
        let y = NadicInt::from_biguint(&c, e - 1u32);
        assert!(x.mul(&y).unwrap().is_zero());
    }
}
