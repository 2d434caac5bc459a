//! Toy multiplicative cipher on Z/n^kZ with a unit key (x -> x*y, decrypted
//! by y^{-1}), the base-37 alphanumeric codec and power-of-two digit codecs.
//!
//! This cipher is linearly malleable and offers no real security; it is kept
//! for its arithmetic content only.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::context::NadicContext;
use crate::digits::{char_value, digit_char, DigitString};
use crate::error::{Error, Result};
use crate::int::NadicInt;

/// A unit key y with its cached inverse.
#[derive(Clone, Debug)]
pub struct CipherKey {
    y: NadicInt,
    y_inv: NadicInt,
}

impl CipherKey {
    pub fn new(y: NadicInt) -> Result<CipherKey> {
        let y_inv = y.invert()?;
        Ok(CipherKey { y, y_inv })
    }

    pub fn key(&self) -> &NadicInt {
        &self.y
    }

    pub fn inverse(&self) -> &NadicInt {
        &self.y_inv
    }

    pub fn context(&self) -> &NadicContext {
        self.y.context()
    }
}

pub fn encrypt(key: &CipherKey, x: &NadicInt) -> Result<NadicInt> {
    x.mul(&key.y)
}

pub fn decrypt(key: &CipherKey, c: &NadicInt) -> Result<NadicInt> {
    c.mul(&key.y_inv)
}

/// Derive a unit key deterministically from seed bytes: the bytes are read
/// big-endian modulo n^k and the candidate is incremented until its last
/// digit is coprime to n.
pub fn keygen(ctx: &NadicContext, seed: &[u8]) -> Result<CipherKey> {
    let mut candidate = BigUint::from_bytes_be(seed) % ctx.modulus();
    loop {
        let x = NadicInt::from_biguint(ctx, candidate.clone());
        if x.is_unit() {
            return CipherKey::new(x);
        }
        candidate = (candidate + BigUint::one()) % ctx.modulus();
    }
}

/// Base-37 alphabet: 0-9, A-Z, then '_' as separator (value 36).
pub const BASE37: u64 = 37;

/// Encode an alphanumeric string as a base-37 integer: the last character is
/// the least-significant digit. The context precision equals the string
/// length.
pub fn encode_base37(s: &str) -> Result<NadicInt> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty message".into()));
    }
    let mut digits = Vec::with_capacity(s.len());
    for (i, ch) in s.chars().enumerate() {
        let d = char_value(ch).filter(|&d| d < BASE37).ok_or(Error::InvalidCharacter {
            ch,
            position: i,
        })?;
        digits.push(d);
    }
    digits.reverse();
    let ctx = NadicContext::new(BASE37, digits.len() as u32)?;
    NadicInt::from_digits(&ctx, &DigitString::new(BASE37, digits)?)
}

/// Inverse of [`encode_base37`]: renders exactly k characters, keeping
/// leading zero digits as '0'.
pub fn decode_base37(x: &NadicInt) -> Result<String> {
    if x.context().base() != BASE37 {
        return Err(Error::InvalidArgument(format!(
            "expected a base-37 value, got base {}",
            x.context().base()
        )));
    }
    Ok(x.digits().digits().iter().rev().map(|&d| digit_char(d)).collect())
}

/// Pack bytes (big-endian) into base-2^m digits, least-significant first.
pub fn pack_pow2(bytes: &[u8], bits_per_digit: u32) -> Result<DigitString> {
    if bits_per_digit < 1 || bits_per_digit > 63 {
        return Err(Error::InvalidArgument("bits per digit must be in 1..=63".into()));
    }
    let base = 1u64 << bits_per_digit;
    let total_bits = 8 * bytes.len() as u64;
    let count = total_bits.div_ceil(bits_per_digit as u64) as usize;
    let value = BigUint::from_bytes_be(bytes);
    let mut digits = Vec::with_capacity(count);
    let mask = BigUint::from(base - 1);
    let mut v = value;
    for _ in 0..count.max(1) {
        digits.push(
            (&v & &mask).to_u64_digits().first().copied().unwrap_or(0),
        );
        v >>= bits_per_digit;
    }
    DigitString::new(base, digits)
}

/// Inverse of [`pack_pow2`], restoring `byte_len` bytes.
pub fn unpack_pow2(d: &DigitString, byte_len: usize) -> Result<Vec<u8>> {
    let base = d.base();
    if !base.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("base {base} is not a power of two")));
    }
    let bits = base.trailing_zeros();
    let mut value = BigUint::zero();
    for &digit in d.digits().iter().rev() {
        value = (value << bits) | BigUint::from(digit);
    }
    let mut bytes = value.to_bytes_be();
    if bytes.len() > byte_len {
        return Err(Error::InvalidArgument(format!(
            "value needs {} bytes, {byte_len} requested",
            bytes.len()
        )));
    }
    let mut out = vec![0u8; byte_len - bytes.len()];
    out.append(&mut bytes);
    Ok(out)
}

/// Inverse of an odd digit modulo 2^m by the self-correcting 2-adic Newton
/// iteration t <- t(2 - dt), seeded with t = d (correct to three bits).
pub fn last_digit_inverse(d: u64, bits_per_digit: u32) -> Result<u64> {
    if bits_per_digit < 1 || bits_per_digit > 63 {
        return Err(Error::InvalidArgument("bits per digit must be in 1..=63".into()));
    }
    let base = 1u64 << bits_per_digit;
    if d >= base {
        return Err(Error::InvalidDigit { digit: d, base });
    }
    if d % 2 == 0 {
        return Err(Error::NotInvertible { prime: 2 });
    }
    let mask = (base - 1) as u128;
    let mut t = d as u128;
    let d = d as u128;
    loop {
        let next = (t * ((2u128.wrapping_sub(d.wrapping_mul(t) & mask)) & mask)) & mask;
        if next == t {
            break;
        }
        t = next;
    }
    Ok(t as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u64, k: u32) -> NadicContext {
        NadicContext::new(n, k).unwrap()
    }

    #[test]
    fn golden_key_roundtrip() {
        let c = ctx(10, 4);
        let key = CipherKey::new(NadicInt::from_i64(&c, 73)).unwrap();
        assert_eq!(key.inverse().residue(), &BigUint::from(137u64));
        // 1234 * 73 = 90082 -> 0082; 82 * 137 = 11234 -> 1234
        let m = NadicInt::from_i64(&c, 1234);
        let e = encrypt(&key, &m).unwrap();
        assert_eq!(e.residue(), &BigUint::from(82u64));
        assert_eq!(decrypt(&key, &e).unwrap(), m);
        assert!(encrypt(&key, &NadicInt::zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn keygen_is_deterministic_and_adjusts_non_units() {
        let c = ctx(10, 4);
        let k1 = keygen(&c, b"some seed").unwrap();
        let k2 = keygen(&c, b"some seed").unwrap();
        assert_eq!(k1.key(), k2.key());
        // candidate ending in 0 is bumped to end in 1
        let k = keygen(&c, &[0x03, 0xE8]).unwrap(); // 1000
        assert_eq!(k.key().residue(), &BigUint::from(1001u64));
        // candidate already a unit is accepted unchanged
        let k = keygen(&c, &[0x03, 0xE9]).unwrap(); // 1001
        assert_eq!(k.key().residue(), &BigUint::from(1001u64));
    }

    #[test]
    fn base37_alphabet() {
        assert_eq!(encode_base37("A").unwrap().residue(), &BigUint::from(10u64));
        assert_eq!(encode_base37("_").unwrap().residue(), &BigUint::from(36u64));
        let x = encode_base37("HELLO_WORLD").unwrap();
        assert_eq!(decode_base37(&x).unwrap(), "HELLO_WORLD");
        match encode_base37("AB!C") {
            Err(Error::InvalidCharacter { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected invalid-character, got {other:?}"),
        }
    }

    #[test]
    fn base37_keeps_leading_zeros() {
        let x = encode_base37("0A").unwrap();
        assert_eq!(decode_base37(&x).unwrap(), "0A");
    }

    #[test]
    fn pow2_codec() {
        // RGB triple groups into one 24-bit digit
        let d = pack_pow2(&[0xFF, 0xFF, 0x00], 24).unwrap();
        assert_eq!(d.digits(), &[0xFFFF00]);
        assert_eq!(unpack_pow2(&d, 3).unwrap(), vec![0xFF, 0xFF, 0x00]);
        // byte identity at m = 8
        let d = pack_pow2(&[1, 2, 3], 8).unwrap();
        assert_eq!(d.digits(), &[3, 2, 1]);
    }

    #[test]
    fn last_digit_inverses() {
        assert_eq!(last_digit_inverse(3, 8).unwrap(), 171); // 3*171 = 513 = 1 mod 256
        assert_eq!(last_digit_inverse(1, 24).unwrap(), 1);
        assert_eq!(last_digit_inverse(4, 8).unwrap_err().name(), "not-invertible");
    }
}
