//! Exact scalars: arbitrary-precision rationals, elements `p + q·√d` of a real
//! quadratic field, and the projective line over them.
//!
//! Every fixed-point condition in the case analysis is decided with these
//! types, so equality is always exact. Arithmetic mixing two different
//! radicands is rejected; a rational operand is promoted into the other
//! operand's field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3/2"`, `"-7"`, or a decimal such as `"0.6"` (which becomes `3/5`).
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::parse(input, "empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num.trim()).ok_or_else(|| Error::parse(input, "bad numerator"))?;
        let d = parse_decimal(den.trim()).ok_or_else(|| Error::parse(input, "bad denominator"))?;
        if d.is_zero() {
            return Err(Error::parse(input, "zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal(s).ok_or_else(|| Error::parse(input, "not a rational number"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

pub(crate) fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter writing a [`Rational`] as an exact string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Splits `n > 0` as `s² · d` with `d` square-free.
///
/// Trial division only runs while `p³ ≤ remaining`; the cofactor left over then
/// has at most two prime factors, so it is square-free unless it is a perfect
/// square.
fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    if let Some(small) = n.to_u128() {
        let (s, d) = square_free_split_u128(small);
        return (BigUint::from(s), BigUint::from(d));
    }
    let mut rem = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= rem {
        let mut exp = 0u32;
        while (&rem % &p).is_zero() {
            rem /= &p;
            exp += 1;
        }
        if exp > 0 {
            square *= num_traits::pow(p.clone(), (exp / 2) as usize);
            if exp % 2 == 1 {
                free *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if rem > BigUint::one() {
        let root = rem.sqrt();
        if &root * &root == rem {
            square *= root;
        } else {
            free *= rem;
        }
    }
    (square, free)
}

fn square_free_split_u128(n: u128) -> (u128, u128) {
    let mut rem = n;
    let mut square: u128 = 1;
    let mut free: u128 = 1;
    let mut p: u128 = 2;
    while p.saturating_mul(p).saturating_mul(p) <= rem {
        let mut exp = 0u32;
        while rem.is_multiple_of(p) {
            rem /= p;
            exp += 1;
        }
        if exp > 0 {
            square *= p.pow(exp / 2);
            if exp % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rem > 1 {
        let root = rem.sqrt();
        if root * root == rem {
            square *= root;
        } else {
            free *= rem;
        }
    }
    (square, free)
}

/// An element `rational + surd·√radicand` of `Q(√radicand)`.
///
/// The radicand is square-free and at least 2, or 0 when the value is rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    rational: Rational,
    surd: Rational,
    radicand: BigInt,
}

impl QuadExt {
    /// Builds `rational + surd·√radicand`, pulling square factors out of the radicand.
    pub fn new(rational: Rational, surd: Rational, radicand: BigInt) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::NegativeRadicand(radicand.to_string()));
        }
        if surd.is_zero() || radicand.is_zero() {
            return Ok(Self::from_rational(rational));
        }
        let (square, free) = square_free_split(radicand.magnitude());
        let surd = surd * Rational::from_integer(BigInt::from(square));
        let free = BigInt::from(free);
        if free.is_one() {
            return Ok(Self::from_rational(rational + surd));
        }
        Ok(Self {
            rational,
            surd,
            radicand: free,
        })
    }

    pub fn from_rational(value: Rational) -> Self {
        Self {
            rational: value,
            surd: Rational::zero(),
            radicand: BigInt::zero(),
        }
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(rational_int(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(rational(numer, denom))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.rational.is_one()
    }

    /// Radicand of the smallest field containing both operands.
    pub fn join_radicand(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.radicand.clone()),
            (_, true) => Ok(self.radicand.clone()),
            _ if self.radicand == other.radicand => Ok(self.radicand.clone()),
            _ => Err(Error::IncompatibleRadicands(
                self.radicand.clone(),
                other.radicand.clone(),
            )),
        }
    }

    fn normalized(rational: Rational, surd: Rational, radicand: BigInt) -> Self {
        if surd.is_zero() {
            Self::from_rational(rational)
        } else {
            Self {
                rational,
                surd,
                radicand,
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.join_radicand(other)?;
        Ok(Self::normalized(
            &self.rational + &other.rational,
            &self.surd + &other.surd,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.join_radicand(other)?;
        let d_rat = Rational::from_integer(d.clone());
        let rational = &self.rational * &other.rational + &self.surd * &other.surd * d_rat;
        let surd = &self.rational * &other.surd + &self.surd * &other.rational;
        Ok(Self::normalized(rational, surd, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.join_radicand(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// `1 / (p + q√d) = (p − q√d) / (p² − q²d)`; the norm vanishes only at zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = self.norm();
        Ok(Self::normalized(
            &self.rational / &norm,
            -&self.surd / &norm,
            self.radicand.clone(),
        ))
    }

    /// Field norm `p² − q²d`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_integer(self.radicand.clone());
        &self.rational * &self.rational - &self.surd * &self.surd * d
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Exact sign of `p + q√d`.
    pub fn signum(&self) -> i8 {
        let sp = sign_of(&self.rational);
        let sq = sign_of(&self.surd);
        if sq == 0 || self.is_rational() {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // Opposite signs: compare p² with q²d.
        let d = Rational::from_integer(self.radicand.clone());
        let lhs = &self.rational * &self.rational;
        let rhs = &self.surd * &self.surd * d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return p;
        }
        let q = self.surd.to_f64().unwrap_or(f64::NAN);
        let d = self.radicand.to_f64().unwrap_or(f64::NAN);
        p + q * d.sqrt()
    }

    /// Exact comparison; fails when the two values live in different fields.
    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering> {
        let diff = self.checked_sub(other)?;
        Ok(diff.signum().cmp(&0))
    }

    pub fn min_max(a: &Self, b: &Self) -> Result<(Self, Self)> {
        Ok(match a.checked_cmp(b)? {
            Ordering::Greater => (b.clone(), a.clone()),
            _ => (a.clone(), b.clone()),
        })
    }
}

fn sign_of(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Exact `√x` inside the appropriate quadratic field.
pub fn sqrt_adjoin(x: &Rational) -> Result<QuadExt> {
    if x.is_negative() {
        return Err(Error::NegativeRadicand(rational_to_string(x)));
    }
    if x.is_zero() {
        return Ok(QuadExt::zero());
    }
    // √(p/q) = √(pq) / q
    let n = x.numer() * x.denom();
    let coeff = Rational::new(BigInt::one(), x.denom().clone());
    QuadExt::new(Rational::zero(), coeff, n)
}

impl From<Rational> for QuadExt {
    fn from(value: Rational) -> Self {
        Self::from_rational(value)
    }
}

impl From<&Rational> for QuadExt {
    fn from(value: &Rational) -> Self {
        Self::from_rational(value.clone())
    }
}

impl From<i64> for QuadExt {
    fn from(value: i64) -> Self {
        Self::from_int(value)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::normalized(-&self.rational, -&self.surd, self.radicand.clone())
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

// Operator forms panic on mixed radicands; use the `checked_*` methods where
// the operands may come from different fields.
macro_rules! quad_binop {
    ($Trait:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $Trait<&'b QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &'b QuadExt) -> QuadExt {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("QuadExt::{}: {e}", stringify!($method)))
            }
        }
        impl $Trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $Trait<&'a QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &'a QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl<'a> $Trait<QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

quad_binop!(Add, add, checked_add);
quad_binop!(Sub, sub, checked_sub);
quad_binop!(Mul, mul, checked_mul);
quad_binop!(Div, div, checked_div);

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_cmp(other).ok()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&rational_to_string(&self.rational));
        }
        // (p + q*sqrt(d))/r over a common denominator r
        let r = self.rational.denom().lcm(self.surd.denom());
        let p = (&self.rational * Rational::from_integer(r.clone())).to_integer();
        let q = (&self.surd * Rational::from_integer(r.clone())).to_integer();
        let (op, q_abs) = if q.is_negative() { ("-", -q) } else { ("+", q) };
        let q_text = if q_abs.is_one() {
            String::new()
        } else {
            format!("{q_abs}*")
        };
        write!(f, "({p} {op} {q_text}sqrt({}))", self.radicand)?;
        if !r.is_one() {
            write!(f, "/{r}")?;
        }
        Ok(())
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Accepts rationals, decimals and the rendered surd form
    /// `(p + q*sqrt(d))/r` (spaces optional, `q*` optional).
    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if !s.contains("sqrt(") {
            return parse_rational(&s).map(QuadExt::from_rational);
        }
        let (inner, denom) = split_outer_denominator(&s, input)?;
        let k = inner
            .find("sqrt(")
            .ok_or_else(|| Error::parse(input, "missing sqrt"))?;
        let split = inner[..k]
            .char_indices()
            .rev()
            .find(|&(i, c)| (c == '+' || c == '-') && i > 0)
            .map(|(i, _)| i);
        let (rational_text, surd_text) = match split {
            Some(i) => (&inner[..i], &inner[i..]),
            None => ("0", inner),
        };
        let p = parse_rational(rational_text)?;
        let (negative, surd_body) = match surd_text.as_bytes().first() {
            Some(b'-') => (true, &surd_text[1..]),
            Some(b'+') => (false, &surd_text[1..]),
            _ => (false, surd_text),
        };
        let (coeff, radical) = match surd_body.find("*sqrt(") {
            Some(i) => (parse_rational(&surd_body[..i])?, &surd_body[i + 1..]),
            None => (Rational::one(), surd_body),
        };
        let radicand_text = radical
            .strip_prefix("sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(input, "malformed sqrt(...) term"))?;
        let radicand: BigInt = radicand_text
            .parse()
            .map_err(|_| Error::parse(input, "radicand must be an integer"))?;
        let q = if negative { -coeff } else { coeff };
        QuadExt::new(p / &denom, q / &denom, radicand)
    }
}

fn split_outer_denominator<'a>(s: &'a str, input: &str) -> Result<(&'a str, Rational)> {
    if !s.starts_with('(') {
        return Ok((s, Rational::one()));
    }
    // matching parenthesis of the leading '('
    let mut depth = 0i32;
    let mut close = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let close = close.ok_or_else(|| Error::parse(input, "unbalanced parentheses"))?;
    let inner = &s[1..close];
    let rest = &s[close + 1..];
    if rest.is_empty() {
        return Ok((inner, Rational::one()));
    }
    let den_text = rest
        .strip_prefix('/')
        .ok_or_else(|| Error::parse(input, "expected '/' after ')'"))?;
    let den = parse_rational(den_text)?;
    if den.is_zero() {
        return Err(Error::parse(input, "zero denominator"));
    }
    Ok((inner, den))
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the projective line over a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjectiveScalar {
    Finite(QuadExt),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

impl ProjectiveScalar {
    pub fn finite(value: impl Into<QuadExt>) -> Self {
        ProjectiveScalar::Finite(value.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjectiveScalar::Infinity)
    }

    pub fn as_finite(&self) -> Option<&QuadExt> {
        match self {
            ProjectiveScalar::Finite(v) => Some(v),
            ProjectiveScalar::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ProjectiveScalar::Finite(v) => v.to_f64(),
            ProjectiveScalar::Infinity => f64::INFINITY,
        }
    }

    /// Applies `op` with projective conventions. `Neg` ignores `y`.
    pub fn arith(op: ArithOp, x: &Self, y: &Self) -> Result<Self> {
        use ProjectiveScalar::{Finite, Infinity};
        match op {
            ArithOp::Neg => Ok(match x {
                Finite(v) => Finite(-v),
                Infinity => Infinity,
            }),
            ArithOp::Add | ArithOp::Sub => match (x, y) {
                (Finite(a), Finite(b)) => Ok(Finite(if op == ArithOp::Add {
                    a.checked_add(b)?
                } else {
                    a.checked_sub(b)?
                })),
                (Infinity, Infinity) => Err(Error::IndeterminateForm("∞ ± ∞")),
                _ => Ok(Infinity),
            },
            ArithOp::Mul => match (x, y) {
                (Finite(a), Finite(b)) => Ok(Finite(a.checked_mul(b)?)),
                (Finite(a), Infinity) | (Infinity, Finite(a)) if a.is_zero() => {
                    Err(Error::IndeterminateForm("0 · ∞"))
                }
                _ => Ok(Infinity),
            },
            ArithOp::Div => match (x, y) {
                (_, Finite(b)) if b.is_zero() => Err(Error::DivisionByZero),
                (Finite(a), Finite(b)) => Ok(Finite(a.checked_div(b)?)),
                (Finite(_), Infinity) => Ok(Finite(QuadExt::zero())),
                (Infinity, Finite(_)) => Ok(Infinity),
                (Infinity, Infinity) => Err(Error::IndeterminateForm("∞ / ∞")),
            },
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::arith(ArithOp::Add, self, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::arith(ArithOp::Sub, self, other)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::arith(ArithOp::Mul, self, other)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Self::arith(ArithOp::Div, self, other)
    }

    pub fn neg(&self) -> Self {
        match self {
            ProjectiveScalar::Finite(v) => ProjectiveScalar::Finite(-v),
            ProjectiveScalar::Infinity => ProjectiveScalar::Infinity,
        }
    }
}

impl From<QuadExt> for ProjectiveScalar {
    fn from(value: QuadExt) -> Self {
        ProjectiveScalar::Finite(value)
    }
}

impl fmt::Display for ProjectiveScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveScalar::Finite(v) => v.fmt(f),
            ProjectiveScalar::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ProjectiveScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "Infinity" => Ok(ProjectiveScalar::Infinity),
            other => other.parse().map(ProjectiveScalar::Finite),
        }
    }
}

impl Serialize for ProjectiveScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjectiveScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden() -> QuadExt {
        QuadExt::new(rational(1, 2), rational(1, 2), BigInt::from(5)).unwrap()
    }

    #[test]
    fn golden_ratio_squares_to_itself_plus_one() {
        let sigma = golden();
        let expected = QuadExt::new(rational(3, 2), rational(1, 2), BigInt::from(5)).unwrap();
        assert_eq!(&sigma * &sigma, expected);
        assert_eq!(&sigma * &sigma, &sigma + QuadExt::one());
    }

    #[test]
    fn rationals_promote_into_surd_fields() {
        let a = QuadExt::new(rational(1, 2), Rational::zero(), BigInt::from(5)).unwrap();
        assert!(a.is_rational());
        assert_eq!(a + QuadExt::from_ratio(1, 3), QuadExt::from_ratio(5, 6));
        let mixed = golden() + QuadExt::from_int(1);
        assert_eq!(mixed.radicand(), &BigInt::from(5));
    }

    #[test]
    fn projective_conventions() {
        let one = ProjectiveScalar::finite(1);
        let inf = ProjectiveScalar::Infinity;
        assert_eq!(one.div(&inf).unwrap(), ProjectiveScalar::finite(0));
        assert_eq!(one.add(&inf).unwrap(), inf);
        assert_eq!(inf.div(&one).unwrap(), inf);
        assert_eq!(inf.sub(&inf), Err(Error::IndeterminateForm("∞ ± ∞")));
        assert_eq!(
            ProjectiveScalar::finite(0).mul(&inf),
            Err(Error::IndeterminateForm("0 · ∞"))
        );
        assert_eq!(inf.div(&inf), Err(Error::IndeterminateForm("∞ / ∞")));
        assert_eq!(one.div(&ProjectiveScalar::finite(0)), Err(Error::DivisionByZero));
        assert_ne!(inf, ProjectiveScalar::finite(0));
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let r2 = sqrt_adjoin(&rational_int(2)).unwrap();
        let r3 = sqrt_adjoin(&rational_int(3)).unwrap();
        assert!(matches!(
            r2.checked_add(&r3),
            Err(Error::IncompatibleRadicands(_, _))
        ));
        assert_eq!(r2.partial_cmp(&r3), None);
    }

    #[test]
    fn sqrt_adjoin_examples() {
        assert_eq!(
            sqrt_adjoin(&rational(25, 4)).unwrap(),
            QuadExt::from_ratio(5, 2)
        );
        assert!(sqrt_adjoin(&rational(25, 4)).unwrap().radicand().is_zero());
        let r5 = sqrt_adjoin(&rational_int(5)).unwrap();
        assert_eq!(r5.rational_part(), &Rational::zero());
        assert_eq!(r5.surd_part(), &Rational::one());
        assert_eq!(r5.radicand(), &BigInt::from(5));
        let r = sqrt_adjoin(&rational(20, 9)).unwrap();
        assert_eq!(r.surd_part(), &rational(2, 3));
        assert_eq!(r.radicand(), &BigInt::from(5));
        assert_eq!(
            sqrt_adjoin(&rational(-1, 2)),
            Err(Error::NegativeRadicand("-1/2".into()))
        );
    }

    #[test]
    fn square_free_split_matches_trial_factorisation() {
        // oracle: remove every square p² by brute force
        for n in 1u32..3000 {
            let mut d = n;
            let mut s = 1u32;
            let mut p = 2u32;
            while p * p <= d {
                while d % (p * p) == 0 {
                    d /= p * p;
                    s *= p;
                }
                p += 1;
            }
            let (bs, bd) = square_free_split(&BigUint::from(n));
            assert_eq!((bs, bd), (BigUint::from(s), BigUint::from(d)), "n = {n}");
        }
        // large cofactor that is a perfect square of a prime above the trial bound
        let p = BigUint::from(1_000_000_007u64);
        let n = &p * &p * BigUint::from(6u32);
        assert_eq!(square_free_split(&n), (p.clone(), BigUint::from(6u32)));
        let big = BigUint::from(u128::MAX) * BigUint::from(4u32);
        let (s, d) = square_free_split(&big);
        assert_eq!(&s * &s * &d, big);
    }

    #[test]
    fn sign_examples() {
        let xi = QuadExt::new(rational(-3, 2), rational(1, 2), BigInt::from(5)).unwrap();
        assert_eq!(xi.signum(), -1);
        assert_eq!(QuadExt::zero().signum(), 0);
        let s = QuadExt::new(rational_int(-1), Rational::one(), BigInt::from(2)).unwrap();
        assert_eq!(s.signum(), 1);
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("0.6").unwrap(), rational(3, 5));
        assert_eq!(parse_rational("3/2").unwrap(), rational(3, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), rational(-5, 4));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        let xi = QuadExt::new(rational(-3, 2), rational(1, 2), BigInt::from(5)).unwrap();
        assert_eq!(xi.to_string(), "(-3 + sqrt(5))/2");
        assert_eq!(xi.to_string().parse::<QuadExt>().unwrap(), xi);
        let y = QuadExt::new(rational(1, 3), rational(-4, 5), BigInt::from(7)).unwrap();
        assert_eq!(y.to_string(), "(5 - 12*sqrt(7))/15");
        assert_eq!(y.to_string().parse::<QuadExt>().unwrap(), y);
        assert_eq!("sqrt(8)".parse::<QuadExt>().unwrap().to_string(), "(0 + 2*sqrt(2))");
        assert_eq!(
            "inf".parse::<ProjectiveScalar>().unwrap(),
            ProjectiveScalar::Infinity
        );
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rational(n, d))
    }

    fn field_element(d: i64) -> impl Strategy<Value = QuadExt> {
        (small_rational(), small_rational())
            .prop_map(move |(p, q)| QuadExt::new(p, q, BigInt::from(d)).unwrap())
    }

    fn shared_field_triple() -> impl Strategy<Value = (QuadExt, QuadExt, QuadExt)> {
        prop::sample::select(vec![2i64, 3, 5, 7, 13, 17])
            .prop_flat_map(|d| (field_element(d), field_element(d), field_element(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn field_axioms((x, y, z) in shared_field_triple()) {
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
            prop_assert_eq!(&x + &y, &y + &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * x.inverse().unwrap(), QuadExt::one());
            }
            prop_assert_eq!(&x - &x, QuadExt::zero());
        }

        #[test]
        fn sign_is_multiplicative(x in field_element(5), y in field_element(5)) {
            prop_assert_eq!((&x * &y).signum(), x.signum() * y.signum());
        }

        #[test]
        fn sign_agrees_with_float(x in field_element(11)) {
            let f = x.to_f64();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), if f > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn sqrt_adjoin_squares_back(n in 0i64..5000, d in 1i64..500) {
            let x = rational(n, d);
            let r = sqrt_adjoin(&x).unwrap();
            prop_assert_eq!(r.square(), QuadExt::from_rational(x));
        }

        #[test]
        fn display_round_trips(x in field_element(6)) {
            let text = x.to_string();
            prop_assert_eq!(text.parse::<QuadExt>().unwrap(), x);
        }
    }
}
