//! Hybrid n-continued fractions: expressions a_0 + n/(a_1 + n/(a_2 + ...))
//! with digits a_i >= |n| coprime to n (a_0 exempt). Periodic expansions are
//! solved exactly to quadratic surds, and convergence is checked both in the
//! reals and in every p-adic completion for p dividing n.

mod surd;

pub use surd::QuadraticSurd;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::analytic::nadic_sqrt;
use crate::context::NadicContext;
use crate::error::{Error, Result};
use crate::int::NadicInt;

/// A hybrid n-continued fraction: constant numerator n, a preperiod digit
/// list and a (possibly empty) period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybridCF {
    numerator: i64,
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl HybridCF {
    pub fn new(numerator: i64, preperiod: Vec<i64>, period: Vec<i64>) -> Result<HybridCF> {
        if numerator == 0 {
            return Err(Error::InvalidArgument("numerator n must be nonzero".into()));
        }
        if preperiod.is_empty() && period.is_empty() {
            return Err(Error::InvalidArgument("continued fraction has no digits".into()));
        }
        // a_0 is exempt from the digit constraints; every later digit and
        // every period digit must satisfy a >= |n| and gcd(a, n) = 1
        for &d in preperiod.iter().skip(1).chain(period.iter()) {
            check_digit(d, numerator)?;
        }
        Ok(HybridCF { numerator, preperiod, period })
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Digit at position j, unrolling the period; None past the end of a
    /// finite expansion.
    pub fn digit(&self, j: usize) -> Option<i64> {
        if j < self.preperiod.len() {
            Some(self.preperiod[j])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(j - self.preperiod.len()) % self.period.len()])
        }
    }

    /// First digit of the whole expansion; it fixes the p-adic branch.
    pub fn first_digit(&self) -> i64 {
        self.digit(0).expect("validated nonempty")
    }

    /// Unreduced convergent pairs (p_j, q_j) for j = 0..count-1; the j-th
    /// convergent uses j+1 digits.
    pub fn convergent_pairs(&self, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
        if count < 1 {
            return Err(Error::InvalidArgument("count must be >= 1".into()));
        }
        let n = BigInt::from(self.numerator);
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let a = BigInt::from(self.digit(j).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "finite expansion has only {} digits, {count} requested",
                    self.preperiod.len()
                ))
            })?);
            let (p, q) = if j == 0 {
                (a, BigInt::one())
            } else {
                let (p_last, q_last) = out.last().cloned().expect("j >= 1");
                let p = &a * &p_last + &n * &p_prev;
                let q = &a * &q_last + &n * &q_prev;
                p_prev = p_last;
                q_prev = q_last;
                (p, q)
            };
            out.push((p, q));
        }
        Ok(out)
    }

    /// Reduced convergents p_j/q_j.
    pub fn convergents(&self, count: usize) -> Result<Vec<BigRational>> {
        Ok(self
            .convergent_pairs(count)?
            .into_iter()
            .map(|(p, q)| BigRational::new(p, q))
            .collect())
    }

    /// Parse the CLI syntax "[a0; a1, a2, ...]_n" with an optional trailing
    /// "(b1, ..., bm)*" periodic group, e.g. "[3; (6)*]_5" or "[(11)*]_10".
    pub fn parse(s: &str) -> Result<HybridCF> {
        parse_cf(s)
    }
}

impl fmt::Display for HybridCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let head = if self.preperiod.is_empty() {
            None
        } else {
            parts.extend(self.preperiod.iter().skip(1).map(|d| d.to_string()));
            Some(self.preperiod[0].to_string())
        };
        if !self.period.is_empty() {
            let inner: Vec<String> = self.period.iter().map(|d| d.to_string()).collect();
            parts.push(format!("({})*", inner.join(", ")));
        }
        match head {
            Some(a0) if parts.is_empty() => write!(f, "[{a0}]_{}", self.numerator),
            Some(a0) => write!(f, "[{a0}; {}]_{}", parts.join(", "), self.numerator),
            None => write!(f, "[{}]_{}", parts.join(", "), self.numerator),
        }
    }
}

fn check_digit(d: i64, n: i64) -> Result<()> {
    if d < n.abs() || gcd_i64(d, n) != 1 {
        return Err(Error::InvalidDigit {
            digit: d.unsigned_abs(),
            base: n.unsigned_abs(),
        });
    }
    Ok(())
}

fn gcd_i64(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

fn parse_cf(s: &str) -> Result<HybridCF> {
    let s = s.trim();
    let err = |m: &str| Error::Parse(format!("{m} in {s:?}"));
    let body = s.strip_prefix('[').ok_or_else(|| err("expected '['"))?;
    let close = body.rfind(']').ok_or_else(|| err("expected ']'"))?;
    let (inner, tail) = body.split_at(close);
    let tail = &tail[1..];
    let n: i64 = tail
        .strip_prefix('_')
        .ok_or_else(|| err("expected '_n' suffix"))?
        .trim()
        .parse()
        .map_err(|_| err("bad numerator"))?;

    // split off a trailing "(...)*" periodic group if present
    let (head, period_src) = match inner.find('(') {
        Some(open) => {
            let rest = &inner[open..];
            let close = rest.find(')').ok_or_else(|| err("unclosed period group"))?;
            if rest[close + 1..].trim() != "*" {
                return Err(err("period group must end with ')*'"));
            }
            (inner[..open].trim_end_matches([',', ';', ' ']), rest[1..close].trim())
        }
        None => (inner, ""),
    };

    let mut preperiod = Vec::new();
    let head = head.trim();
    if !head.is_empty() {
        let head = head.replace(';', ",");
        for part in head.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            preperiod.push(part.parse::<i64>().map_err(|_| err("bad digit"))?);
        }
    }
    let mut period = Vec::new();
    if !period_src.is_empty() {
        for part in period_src.split(',') {
            let part = part.trim();
            period.push(part.parse::<i64>().map_err(|_| err("bad period digit"))?);
        }
    }
    HybridCF::new(n, preperiod, period)
}

/// Exact solution of a periodic hybrid continued fraction.
#[derive(Clone, Debug)]
pub struct PeriodicSurd {
    /// Integer quadratic A y^2 + B y + C = 0 satisfied by both roots,
    /// reduced and with A > 0.
    pub quadratic: (BigInt, BigInt, BigInt),
    /// The root the real convergents approach (for positive digits).
    pub real_root: QuadraticSurd,
    /// The other root of the same quadratic.
    pub conjugate_root: QuadraticSurd,
    /// Per-prime branch residues: the limit is = first digit mod p.
    pub nadic_root_residues: BTreeMap<u64, u64>,
}

/// Solve a periodic hybrid continued fraction exactly. The purely periodic
/// tail y satisfies Q y^2 + (Q' - P) y - P' = 0 where the 2x2 digit matrix
/// product over the period is [[P, P'], [Q, Q']]; preperiod digits are then
/// folded in as Moebius steps y -> a + n/y.
pub fn periodic_to_surd(cf: &HybridCF) -> Result<PeriodicSurd> {
    if !cf.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    let n = BigInt::from(cf.numerator());
    let (mut p00, mut p01, mut p10, mut p11) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for &c in cf.period() {
        let c = BigInt::from(c);
        // right-multiply by [[c, n], [1, 0]]
        let (a, b) = (&p00 * &c + &p01, &p00 * &n);
        let (cc, d) = (&p10 * &c + &p11, &p10 * &n);
        p00 = a;
        p01 = b;
        p10 = cc;
        p11 = d;
    }
    let (big_p, big_p1, big_q, big_q1) = (p00, p01, p10, p11);
    assert!(!big_q.is_zero(), "digit invariants force Q != 0");
    // roots of Q y^2 + (Q' - P) y - P' = 0
    let b = &big_q1 - &big_p;
    let disc = &b * &b + BigInt::from(4) * &big_q * &big_p1;
    if !disc.is_positive() {
        return Err(Error::InvalidArgument(
            "period does not determine a real quadratic irrational".into(),
        ));
    }
    let tail_plus = QuadraticSurd::new(-&b, BigInt::one(), disc, BigInt::from(2) * &big_q)?;
    // for positive digits the real limit of the purely periodic tail is the
    // larger root, i.e. the one with positive radical coefficient
    let mut root = if tail_plus.radical_coeff().is_positive() {
        tail_plus
    } else {
        tail_plus.conjugate()
    };
    for &a in cf.preperiod().iter().rev() {
        root = root.mobius_shift(&BigInt::from(a), &n)?;
    }
    let conjugate_root = root.conjugate();

    // monic-cleared quadratic from the folded root (u + w sqrt(d))/v:
    // v^2 y^2 - 2uv y + (u^2 - w^2 d) = 0
    let (u, v) = {
        let (u, v) = root.rational_part();
        (u.clone(), v.clone())
    };
    let w = root.radical_coeff().clone();
    let d = root.radicand().clone();
    let mut qa = &v * &v;
    let mut qb = BigInt::from(-2) * &u * &v;
    let mut qc = &u * &u - &w * &w * &d;
    let g = qa.gcd(&qb).gcd(&qc);
    if !g.is_one() {
        qa /= &g;
        qb /= &g;
        qc /= &g;
    }
    if qa.is_negative() {
        qa = -qa;
        qb = -qb;
        qc = -qc;
    }

    let mut residues = BTreeMap::new();
    let base = cf.numerator().unsigned_abs();
    if base >= 2 {
        let ctx = NadicContext::new(base, 1)?;
        for &(p, _) in ctx.factorization() {
            let f = cf.first_digit().rem_euclid(p as i64) as u64;
            residues.insert(p, f);
        }
    }

    Ok(PeriodicSurd {
        quadratic: (qa, qb, qc),
        real_root: root,
        conjugate_root,
        nadic_root_residues: residues,
    })
}

/// The family sqrt(x) = [a; (b, 2a)*]_n: returns x = a^2 + 2an/b.
pub fn surd_family(a: i64, b: i64, n: i64) -> Result<i64> {
    if a < 1 {
        return Err(Error::InvalidFamily(format!("a = {a} must be >= 1")));
    }
    check_digit(b, n).map_err(|_| {
        Error::InvalidFamily(format!("b = {b} violates the digit constraints for n = {n}"))
    })?;
    check_digit(2 * a, n).map_err(|_| {
        Error::InvalidFamily(format!("2a = {} violates the digit constraints for n = {n}", 2 * a))
    })?;
    let num = 2 * a * n;
    if num % b != 0 {
        return Err(Error::InvalidFamily(format!("{b} does not divide 2an = {num}")));
    }
    let x = a * a + num / b;
    if x <= 0 {
        return Err(Error::InvalidFamily(format!("x = {x} is not positive")));
    }
    if surd::is_perfect_square(&BigInt::from(x)) {
        return Err(Error::DegenerateSquare(x.to_string()));
    }
    Ok(x)
}

/// Heron iterates a_0, ..., a_steps for sqrt(x): a <- (a + x/a)/2 in exact
/// rationals.
pub fn heron_sequence(x: u64, a0: u64, steps: usize) -> Result<Vec<BigRational>> {
    if a0 < 1 {
        return Err(Error::InvalidArgument("a0 must be >= 1".into()));
    }
    if a0 * a0 > x {
        return Err(Error::InvalidArgument(format!("a0 = {a0} exceeds sqrt({x})")));
    }
    let x = BigRational::from(BigInt::from(x));
    let two = BigRational::from(BigInt::from(2));
    let mut a = BigRational::from(BigInt::from(a0));
    let mut out = vec![a.clone()];
    for _ in 0..steps {
        a = (&a + &x / &a) / &two;
        out.push(a.clone());
    }
    Ok(out)
}

/// One row of the correspondence witness table.
#[derive(Clone, Debug)]
pub struct HeronRow {
    pub index: usize,
    pub heron: BigRational,
    pub convergent: BigRational,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct HeronWitness {
    pub x: u64,
    pub all_match: bool,
    pub rows: Vec<HeronRow>,
}

/// Compare Heron iterates for sqrt(x) seeded at a0 against the convergents
/// of `cf`: the i-th iterate should be the convergent built from 2^i digits.
pub fn heron_matches(cf: &HybridCF, x: u64, a0: u64, depth: usize) -> Result<HeronWitness> {
    let heron = heron_sequence(x, a0, depth)?;
    let max_terms = 1usize << depth;
    let convergents = cf.convergents(max_terms)?;
    let mut rows = Vec::with_capacity(depth + 1);
    let mut all = true;
    for (i, h) in heron.iter().enumerate() {
        let c = convergents[(1usize << i) - 1].clone();
        let matches = *h == c;
        all &= matches;
        rows.push(HeronRow { index: i, heron: h.clone(), convergent: c, matches });
    }
    Ok(HeronWitness { x, all_match: all, rows })
}

/// The correspondence theorem for the family sqrt(x) = [a; (b, 2a)*]_n.
pub fn verify_heron_correspondence(a: i64, b: i64, n: i64, depth: usize) -> Result<HeronWitness> {
    let x = surd_family(a, b, n)?;
    let cf = HybridCF::new(n, vec![a], vec![b, 2 * a])?;
    heron_matches(&cf, x as u64, a as u64, depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Failed,
    /// No claim is made (mixed-sign digits or negative n on the real side).
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Verified => "verified",
            Verdict::Failed => "failed",
            Verdict::Unverified => "unverified",
        };
        write!(f, "{s}")
    }
}

/// Evidence that a periodic hybrid CF converges simultaneously in the reals
/// and in every p-adic completion for p | n.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    /// Upper bounds on |limit - p_j/q_j|, one per convergent.
    pub real_widths: Vec<BigRational>,
    pub real_verdict: Verdict,
    /// v_p(c_{j+1} - c_j) per prime, one entry per consecutive pair.
    pub difference_valuations: Vec<BTreeMap<u64, u64>>,
    pub valuation_verdict: Verdict,
    /// Stabilized limit residue per prime, modulo p^(alpha*k).
    pub limit_residues: BTreeMap<u64, BigUint>,
    pub stabilization_verdict: Verdict,
}

/// Check both sides of the hybrid convergence theorem on a periodic CF:
/// shrinking real enclosures, the exact valuation law
/// v_p(c_{j+1} - c_j) = (j+1) * alpha, and p-adic stabilization of the
/// convergents onto a root of the limit quadratic.
pub fn dual_convergence_report(cf: &HybridCF, depth: usize, k: u32) -> Result<ConvergenceReport> {
    if !cf.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    if depth < 1 || k < 1 {
        return Err(Error::InvalidArgument("depth and k must be >= 1".into()));
    }
    let solved = periodic_to_surd(cf)?;
    let pairs = cf.convergent_pairs(depth)?;
    let convergents: Vec<BigRational> = pairs
        .iter()
        .map(|(p, q)| BigRational::new(p.clone(), q.clone()))
        .collect();
    let positive_case = cf.numerator() >= 1
        && (0..depth).all(|j| cf.digit(j).map(|d| d > 0).unwrap_or(false));

    // real side
    let (real_widths, real_verdict) = if positive_case {
        let q_last_bits = pairs.last().expect("depth >= 1").1.magnitude().bits();
        let digits = 12 + (2 * q_last_bits) / 3;
        let (lo, hi) = solved.real_root.real_enclosure(digits as u32);
        let mut widths = Vec::with_capacity(depth);
        let mut lowers = Vec::with_capacity(depth);
        for c in &convergents {
            let d1 = (&hi - c).abs();
            let d2 = (&lo - c).abs();
            widths.push(d1.clone().max(d2.clone()));
            let contains = &lo <= c && c <= &hi;
            lowers.push(if contains { BigRational::zero() } else { d1.min(d2) });
        }
        let decreasing = (1..depth).all(|j| widths[j] < lowers[j - 1]);
        (widths, if decreasing { Verdict::Verified } else { Verdict::Failed })
    } else {
        (Vec::new(), Verdict::Unverified)
    };

    // valuation law
    let base = cf.numerator().unsigned_abs();
    if base < 2 {
        return Err(Error::InvalidArgument(
            "n-adic side needs |n| >= 2; use plain convergents for n = +-1".into(),
        ));
    }
    let ctx = NadicContext::new(base, k)?;
    let mut difference_valuations = Vec::new();
    let mut valuation_ok = true;
    for j in 0..depth.saturating_sub(1) {
        let diff = &convergents[j + 1] - &convergents[j];
        let mut per_prime = BTreeMap::new();
        for &(p, alpha) in ctx.factorization() {
            let v = crate::context::valuation_big(diff.numer().magnitude(), p).0 as u64;
            let v_den = crate::context::valuation_big(diff.denom().magnitude(), p).0;
            debug_assert_eq!(v_den, 0, "denominators stay coprime to n");
            per_prime.insert(p, v);
            valuation_ok &= v == (j as u64 + 1) * alpha as u64;
        }
        difference_valuations.push(per_prime);
    }

    // p-adic stabilization: the convergents must approach, component by
    // component, a residue that is a root of the limit quadratic and sits on
    // the branch fixed by the first digit
    let mut limit_residues = BTreeMap::new();
    let mut stabilization = Verdict::Verified;
    let deep = depth.max(k as usize * ctx.factorization().len().max(1) + 2);
    let deep_pairs = cf.convergent_pairs(deep)?;
    for (i, &(p, alpha)) in ctx.factorization().iter().enumerate() {
        let cctx = ctx.component_context(i)?;
        let (p_last, q_last) = deep_pairs.last().expect("deep >= 1");
        let limit = match NadicInt::from_rational(&cctx, p_last, q_last) {
            Ok(x) => x,
            Err(_) => {
                stabilization = Verdict::Failed;
                continue;
            }
        };
        // branch check
        let f = solved.nadic_root_residues[&p];
        let lim_mod_p = (limit.residue() % BigUint::from(p))
            .to_u64_digits()
            .first()
            .copied()
            .unwrap_or(0);
        if lim_mod_p != f {
            stabilization = Verdict::Failed;
        }
        // root of the limit quadratic mod p^(alpha k)
        let (qa, qb, qc) = &solved.quadratic;
        let y = NadicInt::from_integer(&cctx, &BigInt::from_biguint(num_bigint::Sign::Plus, limit.residue().clone()));
        let qa_i = NadicInt::from_integer(&cctx, qa);
        let qb_i = NadicInt::from_integer(&cctx, qb);
        let qc_i = NadicInt::from_integer(&cctx, qc);
        let val = qa_i
            .mul(&y)
            .and_then(|t| t.mul(&y))
            .and_then(|t| t.add(&qb_i.mul(&y)?))
            .and_then(|t| t.add(&qc_i));
        match val {
            Ok(v) if v.is_zero() => {}
            _ => stabilization = Verdict::Failed,
        }
        // cross-check against a Hensel sqrt lift when the radicand is a unit
        // (odd primes only; at p = 2 the quadratic-root check above stands in)
        if p != 2 {
            if let Some(sqrt_limit) = sqrt_route_limit(&solved, &cctx, p, f) {
                if sqrt_limit != limit {
                    stabilization = Verdict::Failed;
                }
            }
        }
        // convergents approach the limit with the expected speed
        for (j, (pj, qj)) in deep_pairs.iter().take(depth).enumerate() {
            let c = NadicInt::from_rational(&cctx, pj, qj)
                .expect("q_j is a unit by the digit invariants");
            let diff = c.sub(&limit).expect("same context");
            let expected = ((j as u64 + 1) * alpha as u64).min((alpha * k) as u64);
            if !diff.is_zero() {
                let v = crate::context::valuation_big(diff.residue(), p).0 as u64;
                if v < expected {
                    stabilization = Verdict::Failed;
                }
            }
        }
        limit_residues.insert(p, limit.residue().clone());
    }

    Ok(ConvergenceReport {
        real_widths,
        real_verdict,
        difference_valuations,
        valuation_verdict: if valuation_ok { Verdict::Verified } else { Verdict::Failed },
        limit_residues,
        stabilization_verdict: stabilization,
    })
}

/// Independent route to the component limit: (u + w sqrt(d))/v evaluated with
/// a Hensel-lifted sqrt on the branch matching the first digit. None when the
/// radicand or denominator is not a unit at p.
fn sqrt_route_limit(
    solved: &PeriodicSurd,
    cctx: &NadicContext,
    p: u64,
    first_digit_mod_p: u64,
) -> Option<NadicInt> {
    let root = &solved.real_root;
    let d = NadicInt::from_integer(cctx, root.radicand());
    if !d.is_unit() {
        return None;
    }
    let s = nadic_sqrt(&d, None).ok()?.root;
    let (u, v) = root.rational_part();
    let u = NadicInt::from_integer(cctx, u);
    let w = NadicInt::from_integer(cctx, root.radical_coeff());
    let v_inv = NadicInt::from_integer(cctx, v).invert().ok()?;
    for cand_s in [s.clone(), s.neg()] {
        let val = u.add(&w.mul(&cand_s).ok()?).ok()?.mul(&v_inv).ok()?;
        let r = (val.residue() % BigUint::from(p)).to_u64_digits().first().copied().unwrap_or(0);
        if r == first_digit_mod_p {
            return Some(val);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn golden_convergents_example_1() {
        let cf = HybridCF::new(5, vec![3], vec![6]).unwrap();
        let c = cf.convergents(4).unwrap();
        assert_eq!(c[1], rat(23, 6));
        assert_eq!(c[3], rat(1033, 276));
    }

    #[test]
    fn single_digit_is_a0() {
        let cf = HybridCF::new(7, vec![42], vec![]).unwrap();
        assert_eq!(cf.convergents(1).unwrap()[0], rat(42, 1));
    }

    #[test]
    fn digit_constraints_enforced() {
        // 4 < 5 violates a_i >= |n|
        assert_eq!(
            HybridCF::new(5, vec![3], vec![4]).unwrap_err().name(),
            "invalid-digit"
        );
        // 10 shares a factor with 5
        assert_eq!(
            HybridCF::new(5, vec![3, 10], vec![]).unwrap_err().name(),
            "invalid-digit"
        );
        // a_0 is exempt
        assert!(HybridCF::new(5, vec![3], vec![6]).is_ok());
    }

    #[test]
    fn parse_roundtrip() {
        let cf = HybridCF::parse("[3;6,6,6]_5").unwrap();
        assert_eq!(cf.preperiod(), &[3, 6, 6, 6]);
        let cf = HybridCF::parse("[3; (6)*]_5").unwrap();
        assert_eq!(cf.preperiod(), &[3]);
        assert_eq!(cf.period(), &[6]);
        let cf = HybridCF::parse("[(8, 4)*]_3").unwrap();
        assert_eq!(cf.period(), &[8, 4]);
        assert_eq!(cf.to_string(), "[(8, 4)*]_3");
        assert!(HybridCF::parse("[3;6]").is_err());
    }

    #[test]
    fn periodic_surds_match_known_values() {
        let surd = |cf: &str| periodic_to_surd(&HybridCF::parse(cf).unwrap()).unwrap();
        assert_eq!(surd("[(6)*]_5").real_root.to_string(), "3 + sqrt(14)");
        assert_eq!(surd("[(11)*]_10").real_root.to_string(), "(11 + sqrt(161))/2");
        assert_eq!(surd("[(8,4)*]_3").real_root.to_string(), "4 + sqrt(22)");
        assert_eq!(surd("[(16)*]_15").real_root.to_string(), "8 + sqrt(79)");
        // quadratic for [(6)*]_5 is y^2 - 6y - 5
        let s = surd("[(6)*]_5");
        assert_eq!(
            s.quadratic,
            (BigInt::from(1), BigInt::from(-6), BigInt::from(-5))
        );
    }

    #[test]
    fn surd_family_examples() {
        assert_eq!(surd_family(3, 6, 5).unwrap(), 14);
        assert_eq!(surd_family(4, 4, 3).unwrap(), 22);
        assert_eq!(surd_family(8, 16, 15).unwrap(), 79);
        assert_eq!(surd_family(4, 8, 5).unwrap(), 21);
        assert_eq!(surd_family(1, 2, 2).unwrap_err().name(), "invalid-family"); // 2 | n
        // x = 4 + 2*2*2/4 ... pick a case landing on a perfect square:
        // a=2, b=8, n=8 -> digit 8 not coprime; use a=3, b=18, n=9? gcd(18,9)=9.
        // a=4, b=16, n=2 -> x = 16 + 16/16 = 17 fine; craft square via a=2,b=4,n=... skip
    }

    #[test]
    fn heron_sequences_match_reference_tables() {
        let h = heron_sequence(14, 3, 2).unwrap();
        assert_eq!(h, vec![rat(3, 1), rat(23, 6), rat(1033, 276)]);
        let h = heron_sequence(21, 4, 2).unwrap();
        assert_eq!(h, vec![rat(4, 1), rat(37, 8), rat(2713, 592)]);
        let h = heron_sequence(22, 4, 2).unwrap();
        assert_eq!(h, vec![rat(4, 1), rat(19, 4), rat(713, 152)]);
        // perfect square allowed for the raw iteration: fixed point
        let h = heron_sequence(4, 2, 3).unwrap();
        assert!(h.iter().all(|a| *a == rat(2, 1)));
    }

    #[test]
    fn heron_correspondence_positive_cases() {
        for (a, b, n) in [(3, 6, 5), (4, 4, 3), (4, 8, 5), (8, 16, 15)] {
            let w = verify_heron_correspondence(a, b, n, 2).unwrap();
            assert!(w.all_match, "({a},{b},{n}) should correspond");
        }
        let w = verify_heron_correspondence(3, 6, 5, 2).unwrap();
        assert_eq!(w.rows[2].heron, rat(1033, 276));
    }

    #[test]
    fn heron_negative_control_sqrt_7() {
        // classical n=1 expansion of sqrt(7) has period length 4
        let cf = HybridCF::new(1, vec![2], vec![1, 1, 1, 4]).unwrap();
        let w = heron_matches(&cf, 7, 2, 2).unwrap();
        assert!(!w.all_match);
        assert_eq!(w.rows[1].heron, rat(11, 4));
        assert_eq!(w.rows[1].convergent, rat(3, 1));
    }

    #[test]
    fn determinant_identity_example_1() {
        // j = 1: p1*q0 - p0*q1 = 23*1 - 3*6 = 5 = (-1)^2 * 5^1
        let cf = HybridCF::new(5, vec![3], vec![6]).unwrap();
        let pairs = cf.convergent_pairs(2).unwrap();
        let det = &pairs[1].0 * &pairs[0].1 - &pairs[0].0 * &pairs[1].1;
        assert_eq!(det, BigInt::from(5));
    }

    #[test]
    fn report_on_golden_example() {
        let cf = HybridCF::parse("[(6)*]_5").unwrap();
        let r = dual_convergence_report(&cf, 8, 8).unwrap();
        assert_eq!(r.real_verdict, Verdict::Verified);
        assert_eq!(r.valuation_verdict, Verdict::Verified);
        assert_eq!(r.stabilization_verdict, Verdict::Verified);
        assert_eq!(r.difference_valuations[0][&5], 1);
        assert_eq!(r.difference_valuations[6][&5], 7);
    }

    #[test]
    fn report_on_composite_base() {
        let cf = HybridCF::parse("[(11)*]_10").unwrap();
        let r = dual_convergence_report(&cf, 6, 6).unwrap();
        assert_eq!(r.real_verdict, Verdict::Verified);
        assert_eq!(r.valuation_verdict, Verdict::Verified);
        assert_eq!(r.stabilization_verdict, Verdict::Verified);
        assert!(r.limit_residues.contains_key(&2));
        assert!(r.limit_residues.contains_key(&5));
    }

    #[test]
    fn report_depth_one_is_vacuous() {
        let cf = HybridCF::parse("[(6)*]_5").unwrap();
        let r = dual_convergence_report(&cf, 1, 4).unwrap();
        assert!(r.difference_valuations.is_empty());
        assert_eq!(r.valuation_verdict, Verdict::Verified);
    }
}
