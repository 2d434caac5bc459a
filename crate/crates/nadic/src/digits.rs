use std::fmt;

use crate::error::{Error, Result};

/// Alphabet shared by bases up to 36 plus the base-37 separator digit.
const ALPHABET: &[u8; 37] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ_";

/// A digit expansion in a fixed base, least-significant digit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitString {
    base: u64,
    digits: Vec<u64>,
}

impl DigitString {
    pub fn new(base: u64, digits: Vec<u64>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} must be >= 2")));
        }
        for &d in &digits {
            if d >= base {
                return Err(Error::InvalidDigit { digit: d, base });
            }
        }
        Ok(DigitString { base, digits })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Least-significant first.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Keep only the `k` least significant digits.
    pub fn truncate(&self, k: usize) -> DigitString {
        DigitString {
            base: self.base,
            digits: self.digits.iter().take(k).copied().collect(),
        }
    }

    /// Parse the CLI text format: most-significant digit first, an optional
    /// leading "…" (or "...") ignored, underscores ignored as group
    /// separators except in base 37 where '_' is a digit.
    pub fn parse(base: u64, s: &str) -> Result<DigitString> {
        let s = s.trim();
        let s = s.strip_prefix('…').or_else(|| s.strip_prefix("...")).unwrap_or(s);
        let mut digits = Vec::new();
        if base > 37 {
            for part in s.split(',') {
                let part = part.trim();
                let d: u64 = part
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad digit value {part:?}")))?;
                if d >= base {
                    return Err(Error::InvalidDigit { digit: d, base });
                }
                digits.push(d);
            }
        } else {
            for (i, ch) in s.chars().enumerate() {
                if ch == '_' && base != 37 {
                    continue;
                }
                if ch == '\'' {
                    continue;
                }
                let d = char_value(ch).ok_or(Error::InvalidCharacter { ch, position: i })?;
                if d >= base {
                    return Err(Error::InvalidDigit { digit: d, base });
                }
                digits.push(d);
            }
        }
        digits.reverse();
        DigitString::new(base, digits)
    }
}

pub(crate) fn char_value(ch: char) -> Option<u64> {
    let b = ch.to_ascii_uppercase() as u8;
    ALPHABET.iter().position(|&a| a == b).map(|i| i as u64)
}

pub(crate) fn digit_char(d: u64) -> char {
    ALPHABET[d as usize] as char
}

impl fmt::Display for DigitString {
    /// Most-significant digit first; comma-separated decimal values above base 37.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base > 37 {
            let parts: Vec<String> = self.digits.iter().rev().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join(","))
        } else {
            for &d in self.digits.iter().rev() {
                write!(f, "{}", digit_char(d))?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse_hex() {
        let d = DigitString::new(16, vec![0, 0, 15, 15, 15, 15]).unwrap();
        assert_eq!(d.to_string(), "FFFF00");
        assert_eq!(DigitString::parse(16, "FFFF00").unwrap(), d);
        assert_eq!(DigitString::parse(16, "…FF_FF_00").unwrap(), d);
    }

    #[test]
    fn underscore_is_a_digit_in_base_37() {
        let d = DigitString::parse(37, "A_").unwrap();
        assert_eq!(d.digits(), &[36, 10]);
        assert_eq!(d.to_string(), "A_");
    }

    #[test]
    fn large_base_renders_decimal_values() {
        let d = DigitString::new(256, vec![0, 255, 255]).unwrap();
        assert_eq!(d.to_string(), "255,255,0");
        assert_eq!(DigitString::parse(256, "255,255,0").unwrap(), d);
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            DigitString::new(5, vec![5]).unwrap_err().name(),
            "invalid-digit"
        );
        assert_eq!(
            DigitString::parse(10, "1X2").unwrap_err().name(),
            "invalid-digit"
        );
        assert_eq!(
            DigitString::parse(10, "1?2").unwrap_err().name(),
            "invalid-character"
        );
    }
}
