use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact quadratic irrational (u + w*sqrt(d)) / v with d > 0 nonsquare.
///
/// Normal form: gcd(u, w, v) = 1, v > 0, and square factors of d pulled
/// into w (so 3 + sqrt(56)/2 style inputs reduce to their canonical shape).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    u: BigInt,
    w: BigInt,
    d: BigInt,
    v: BigInt,
}

impl QuadraticSurd {
    pub fn new(u: BigInt, w: BigInt, d: BigInt, v: BigInt) -> Result<QuadraticSurd> {
        if v.is_zero() {
            return Err(Error::InvalidArgument("surd denominator is zero".into()));
        }
        if w.is_zero() {
            return Err(Error::InvalidArgument("surd has no radical part".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidArgument("radicand must be positive".into()));
        }
        let (square, reduced) = extract_square(&d);
        let d = reduced;
        let w = w * square;
        if is_perfect_square(&d) {
            return Err(Error::DegenerateSquare(d.to_string()));
        }
        let (mut u, mut w, mut v) = (u, w, v);
        if v.is_negative() {
            u = -u;
            w = -w;
            v = -v;
        }
        let g = u.gcd(&w).gcd(&v);
        if !g.is_one() {
            u /= &g;
            w /= &g;
            v /= &g;
        }
        Ok(QuadraticSurd { u, w, d, v })
    }

    pub fn rational_part(&self) -> (&BigInt, &BigInt) {
        (&self.u, &self.v)
    }

    pub fn radical_coeff(&self) -> &BigInt {
        &self.w
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn denominator(&self) -> &BigInt {
        &self.v
    }

    /// The conjugate (u - w*sqrt(d)) / v.
    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd {
            u: self.u.clone(),
            w: -self.w.clone(),
            d: self.d.clone(),
            v: self.v.clone(),
        }
    }

    /// The Moebius step y -> a + n / y used to fold preperiod digits.
    pub fn mobius_shift(&self, a: &BigInt, n: &BigInt) -> Result<QuadraticSurd> {
        // n / y = n*v*(u - w*sqrt(d)) / (u^2 - w^2 d)
        let norm = &self.u * &self.u - &self.w * &self.w * &self.d;
        if norm.is_zero() {
            return Err(Error::Internal("surd with zero norm".into()));
        }
        let nu = a * &norm + n * &self.v * &self.u;
        let nw = -(n * &self.v * &self.w);
        QuadraticSurd::new(nu, nw, self.d.clone(), norm)
    }

    /// Rational enclosure (lower, upper) with upper - lower <= 10^(-decimal_digits).
    pub fn real_enclosure(&self, decimal_digits: u32) -> (BigRational, BigRational) {
        // extra scale covers |w| and |v| so the final width meets the bound
        let extra = (self.w.magnitude().bits() / 3 + 2) as u32;
        let m = decimal_digits + extra;
        let scale = BigUint::from(10u32).pow(m);
        let t = (self.d.magnitude() * &scale * &scale).sqrt();
        let t = BigInt::from(t);
        let lo_r = &self.w * if self.w.is_positive() { t.clone() } else { &t + 1 };
        let hi_r = &self.w * if self.w.is_positive() { &t + 1 } else { t.clone() };
        let scale = BigInt::from(scale);
        let lo = BigRational::new(&self.u * &scale + lo_r, &self.v * &scale);
        let hi = BigRational::new(&self.u * &scale + hi_r, &self.v * &scale);
        (lo, hi)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = if self.w.is_one() {
            format!("sqrt({})", self.d)
        } else if self.w == BigInt::from(-1) {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.w, self.d)
        };
        let numerator = if self.u.is_zero() {
            radical
        } else if self.w.is_negative() {
            format!("{} {}", self.u, radical.replacen('-', "- ", 1))
        } else {
            format!("{} + {}", self.u, radical)
        };
        if self.v.is_one() {
            write!(f, "{numerator}")
        } else {
            write!(f, "({numerator})/{}", self.v)
        }
    }
}

/// Split n = s^2 * r with r squarefree up to a trial-division bound; any
/// remaining large square factor is caught by the perfect-square check.
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.magnitude().clone();
    let mut square_root = BigUint::one();
    let mut p = 2u64;
    while p <= 100_000 && BigUint::from(p) * BigUint::from(p) <= rest {
        let pb = BigUint::from(p);
        let p2 = &pb * &pb;
        loop {
            let (q, r) = rest.div_rem(&p2);
            if r.is_zero() {
                rest = q;
                square_root *= &pb;
            } else {
                break;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // remaining part may itself be a perfect square (e.g. p^2 for large p)
    let s = rest.sqrt();
    if &s * &s == rest {
        square_root *= &s;
        rest = BigUint::one();
    }
    (BigInt::from(square_root), BigInt::from(rest))
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.magnitude().sqrt();
    &s * &s == *n.magnitude()
}
