//! Exact coefficients: Laurent polynomials in `v` (with `v^2 = q` kept
//! symbolic), numbers `a + b v` in `Q[v]/(v^2 - q)` for a fixed prime `q`,
//! and recovery of polynomial-in-`q` coefficients from prime samples.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HallError, Result};
use crate::ring::is_prime;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_pow(base: u32, e: i64) -> Rational {
    let p = num::pow(BigInt::from(base), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(rat(1), 0)
    }

    pub fn v() -> Self {
        LaurentPoly::monomial(rat(1), 1)
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// `q^k = v^(2k)`.
    pub fn q_pow(k: i64) -> Self {
        LaurentPoly::monomial(rat(1), 2 * k)
    }

    /// Quantum integer `[k] = (v^k - v^-k) / (v - v^-1)`.
    pub fn quantum_int(k: u32) -> Self {
        let mut p = LaurentPoly::zero();
        for j in 0..k {
            p.add_term(2 * j as i64 - (k as i64 - 1), rat(1));
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: i64, c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (e + k, x.clone())).collect() }
    }

    /// Substitutes `v^2 = q` for a prime `q`.
    pub fn eval_at_prime(&self, q: u32) -> Result<SqrtQNumber> {
        check_prime(q)?;
        let mut out = SqrtQNumber::zero(q);
        for (e, c) in &self.terms {
            let half = e.div_euclid(2);
            let val = c * rat_pow(q, half);
            if e.rem_euclid(2) == 0 {
                out.a += val;
            } else {
                out.b += val;
            }
        }
        Ok(out)
    }
}

fn check_prime(q: u32) -> Result<()> {
    if is_prime(q as u64) {
        Ok(())
    } else {
        Err(HallError::InvalidParams(format!("q = {q} is not prime")))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match *e {
                0 => String::new(),
                1 => "v".to_string(),
                e => format!("v^{e}"),
            };
            if var.is_empty() {
                write!(f, "{}", fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rat(&abs))?;
            }
        }
        Ok(())
    }
}

fn parse_rat(s: &str) -> Result<Rational> {
    let bad = || HallError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_term(s: &str) -> Result<(i64, Rational)> {
    let bad = || HallError::Parse(format!("bad term `{s}`"));
    let (coef, var) = match s.find('v') {
        None => return Ok((0, parse_rat(s)?)),
        Some(0) => (rat(1), s),
        Some(i) => {
            let c = s[..i].strip_suffix('*').ok_or_else(bad)?;
            (parse_rat(c)?, &s[i..])
        }
    };
    let exp = match var {
        "v" => 1,
        _ => var.strip_prefix("v^").ok_or_else(bad)?.parse().map_err(|_| bad())?,
    };
    Ok((exp, coef))
}

impl FromStr for LaurentPoly {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(HallError::Parse("empty polynomial".into()));
        }
        let mut out = LaurentPoly::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i <= bytes.len() {
            let at_sign = i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^';
            if i == bytes.len() || at_sign {
                let chunk = &compact[start..i];
                let (neg, body) = match chunk.as_bytes().first() {
                    Some(b'-') => (true, &chunk[1..]),
                    Some(b'+') => (false, &chunk[1..]),
                    _ => (false, chunk),
                };
                if body.is_empty() {
                    return Err(HallError::Parse(format!("dangling sign in `{s}`")));
                }
                let (e, c) = parse_term(body)?;
                out.add_term(e, if neg { -c } else { c });
                start = i;
            }
            i += 1;
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&rat(-1))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(LaurentPoly);
owned_ops!(SqrtQNumber);

/// `a + b v` with `v^2 = q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtQNumber {
    pub q: u32,
    pub a: Rational,
    pub b: Rational,
}

impl SqrtQNumber {
    pub fn zero(q: u32) -> Self {
        SqrtQNumber { q, a: Rational::zero(), b: Rational::zero() }
    }

    pub fn one(q: u32) -> Self {
        SqrtQNumber::from_rational(q, rat(1))
    }

    pub fn from_rational(q: u32, a: Rational) -> Self {
        SqrtQNumber { q, a, b: Rational::zero() }
    }

    pub fn from_int(q: u32, a: i64) -> Self {
        SqrtQNumber::from_rational(q, rat(a))
    }

    /// `v^k`.
    pub fn v_pow(q: u32, k: i64) -> Self {
        let val = rat_pow(q, k.div_euclid(2));
        if k.rem_euclid(2) == 0 {
            SqrtQNumber { q, a: val, b: Rational::zero() }
        } else {
            SqrtQNumber { q, a: Rational::zero(), b: val }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SqrtQNumber { q: self.q, a: &self.a * c, b: &self.b * c }
    }

    /// `(a + b v)^-1 = (a - b v) / (a^2 - q b^2)`; the norm only vanishes at zero
    /// because `q` is not a square.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(HallError::NotInvertible);
        }
        let norm = &self.a * &self.a - rat(self.q as i64) * &self.b * &self.b;
        Ok(SqrtQNumber { q: self.q, a: &self.a / &norm, b: -&self.b / &norm })
    }

    fn same_q(&self, other: &Self) {
        assert_eq!(self.q, other.q, "mixing numbers over different q");
    }
}

impl fmt::Display for SqrtQNumber {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let mut p = LaurentPoly::constant(self.a.clone());
        p.add_term(1, self.b.clone());
        write!(f, "{p}")
    }
}

impl Add for &SqrtQNumber {
    type Output = SqrtQNumber;
    fn add(self, rhs: &SqrtQNumber) -> SqrtQNumber {
        self.same_q(rhs);
        SqrtQNumber { q: self.q, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Neg for &SqrtQNumber {
    type Output = SqrtQNumber;
    fn neg(self) -> SqrtQNumber {
        SqrtQNumber { q: self.q, a: -&self.a, b: -&self.b }
    }
}

impl Sub for &SqrtQNumber {
    type Output = SqrtQNumber;
    fn sub(self, rhs: &SqrtQNumber) -> SqrtQNumber {
        self + &(-rhs)
    }
}

impl Mul for &SqrtQNumber {
    type Output = SqrtQNumber;
    fn mul(self, rhs: &SqrtQNumber) -> SqrtQNumber {
        self.same_q(rhs);
        let q = rat(self.q as i64);
        SqrtQNumber {
            q: self.q,
            a: &self.a * &rhs.a + q * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Recovers `f = sum_k c_k v^(2k + p)` from its values at several primes,
/// where `c` is a polynomial in `q` of degree at most `degree_bound`.
///
/// The first `degree_bound + 1` samples determine the fit; every remaining
/// sample (at least one is required) must agree with it.
pub fn interpolate_in_q(
    samples: &[(u32, SqrtQNumber)],
    parity: Parity,
    degree_bound: usize,
) -> Result<LaurentPoly> {
    if samples.len() < degree_bound + 2 {
        return Err(HallError::Interpolation(format!(
            "{} samples for degree bound {degree_bound}; need at least {}",
            samples.len(),
            degree_bound + 2
        )));
    }
    let mut points = Vec::with_capacity(samples.len());
    for (q, x) in samples {
        check_prime(*q)?;
        if x.q != *q {
            return Err(HallError::ParamMismatch(format!("sample at q = {q} carries q = {}", x.q)));
        }
        if points.iter().any(|(p, _): &(u32, Rational)| p == q) {
            return Err(HallError::Interpolation(format!("repeated prime {q}")));
        }
        let (keep, other) = match parity {
            Parity::Even => (&x.a, &x.b),
            Parity::Odd => (&x.b, &x.a),
        };
        if !other.is_zero() {
            return Err(HallError::Parity(format!("sample at q = {q} is {x}, expected {parity:?} parity")));
        }
        points.push((*q, keep.clone()));
    }
    let (fit, held) = points.split_at(degree_bound + 1);
    let coeffs = lagrange_coefficients(fit);
    for (q, y) in held {
        let mut val = Rational::zero();
        for c in coeffs.iter().rev() {
            val = val * rat(*q as i64) + c;
        }
        if &val != y {
            return Err(HallError::Interpolation(format!(
                "held-out prime {q}: fit predicts {}, sample is {}",
                fmt_rat(&val),
                fmt_rat(y)
            )));
        }
    }
    let offset = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut out = LaurentPoly::zero();
    for (k, c) in coeffs.into_iter().enumerate() {
        out.add_term(2 * k as i64 + offset, c);
    }
    Ok(out)
}

/// Coefficients (constant first) of the interpolating polynomial.
fn lagrange_coefficients(points: &[(u32, Rational)]) -> Vec<Rational> {
    let m = points.len();
    let mut out = vec![Rational::zero(); m];
    for (i, (qi, yi)) in points.iter().enumerate() {
        // basis = prod_{j != i} (x - q_j) / (q_i - q_j)
        let mut basis = vec![rat(1)];
        let mut denom = rat(1);
        for (j, (qj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * rat(*qj as i64);
            }
            basis = next;
            denom *= rat(*qi as i64 - *qj as i64);
        }
        for (k, c) in basis.into_iter().enumerate() {
            out[k] += c * yi / &denom;
        }
    }
    out
}
