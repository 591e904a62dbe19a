//! Möbius branches stored as 2×2 matrices.
//!
//! A branch with entries `(a, b, c, d)` acts as `x ↦ (c + d·x)/(a + b·x)`. In
//! homogeneous coordinates the point `x` is `(1 : x)`, the matrix maps it to
//! `(a + b·x : c + d·x)`, and the value is read as second over first. With this
//! reading composition is the ordinary matrix product and the adjoint (dual)
//! branch is the transpose.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sqrt_adjoin, ProjectiveScalar, QuadExt, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBranch", into = "RawBranch")]
pub struct MoebiusBranch {
    a: QuadExt,
    b: QuadExt,
    c: QuadExt,
    d: QuadExt,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawBranch {
    a: QuadExt,
    b: QuadExt,
    c: QuadExt,
    d: QuadExt,
}

impl TryFrom<RawBranch> for MoebiusBranch {
    type Error = Error;
    fn try_from(raw: RawBranch) -> Result<Self> {
        MoebiusBranch::new(raw.a, raw.b, raw.c, raw.d)
    }
}

impl From<MoebiusBranch> for RawBranch {
    fn from(m: MoebiusBranch) -> Self {
        RawBranch {
            a: m.a,
            b: m.b,
            c: m.c,
            d: m.d,
        }
    }
}

/// One fixed point, with multiplicity 2 for a double root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub value: ProjectiveScalar,
    pub multiplicity: u8,
}

impl MoebiusBranch {
    pub fn new(a: QuadExt, b: QuadExt, c: QuadExt, d: QuadExt) -> Result<Self> {
        let det = a.checked_mul(&d)?.checked_sub(&b.checked_mul(&c)?)?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_rationals(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self {
            a: QuadExt::one(),
            b: QuadExt::zero(),
            c: QuadExt::zero(),
            d: QuadExt::one(),
        }
    }

    pub fn a(&self) -> &QuadExt {
        &self.a
    }

    pub fn b(&self) -> &QuadExt {
        &self.b
    }

    pub fn c(&self) -> &QuadExt {
        &self.c
    }

    pub fn d(&self) -> &QuadExt {
        &self.d
    }

    pub fn entries(&self) -> [&QuadExt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> QuadExt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_increasing(&self) -> bool {
        self.det().signum() > 0
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Denominator `a + b·x` at a finite point.
    pub fn denominator_at(&self, x: &QuadExt) -> Result<QuadExt> {
        self.a.checked_add(&self.b.checked_mul(x)?)
    }

    pub fn eval(&self, x: &ProjectiveScalar) -> Result<ProjectiveScalar> {
        match x {
            ProjectiveScalar::Finite(v) => {
                let den = self.denominator_at(v)?;
                let num = self.c.checked_add(&self.d.checked_mul(v)?)?;
                if den.is_zero() {
                    Ok(ProjectiveScalar::Infinity)
                } else {
                    Ok(ProjectiveScalar::Finite(num.checked_div(&den)?))
                }
            }
            ProjectiveScalar::Infinity => {
                if self.b.is_zero() {
                    Ok(ProjectiveScalar::Infinity)
                } else {
                    Ok(ProjectiveScalar::Finite(self.d.checked_div(&self.b)?))
                }
            }
        }
    }

    /// Evaluation at a finite point that must not be the pole.
    pub fn eval_finite(&self, x: &QuadExt) -> Result<QuadExt> {
        match self.eval(&ProjectiveScalar::Finite(x.clone()))? {
            ProjectiveScalar::Finite(v) => Ok(v),
            ProjectiveScalar::Infinity => Err(Error::PoleAtPoint(x.to_string())),
        }
    }

    /// `ω(x) = det / (a + b·x)²`, or its absolute value.
    pub fn jacobian(&self, x: &QuadExt, absolute: bool) -> Result<QuadExt> {
        let den = self.denominator_at(x)?;
        if den.is_zero() {
            return Err(Error::PoleAtPoint(x.to_string()));
        }
        let det = if absolute { self.det().abs() } else { self.det() };
        det.checked_div(&den.square())
    }

    /// `self ∘ inner`, normalised.
    pub fn compose(&self, inner: &Self) -> Self {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&inner.a, &inner.b, &inner.c, &inner.d);
        Self {
            a: a1 * a2 + b1 * c2,
            b: a1 * b2 + b1 * d2,
            c: c1 * a2 + d1 * c2,
            d: c1 * b2 + d1 * d2,
        }
        .normalized()
    }

    /// `n`-fold composition by binary powering; `iterate(0)` is the identity.
    pub fn iterate(&self, n: u64) -> Self {
        let mut result = Self::identity();
        let mut base = self.normalized();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base);
            }
        }
        result
    }

    /// Transposed matrix `(a, c, b, d)`: `y ↦ (b + d·y)/(a + c·y)`.
    pub fn adjoint(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Inverse map, matrix `(d, −b, −c, a)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
        .normalized()
    }

    /// Scales the matrix to a canonical representative: primitive integer
    /// entries with a positive leading entry when all entries are rational,
    /// otherwise leading entry 1.
    pub fn normalized(&self) -> Self {
        let entries = [&self.a, &self.b, &self.c, &self.d];
        if entries.iter().all(|e| e.is_rational()) {
            let rats: Vec<&Rational> = entries.iter().map(|e| e.rational_part()).collect();
            let lcm = rats
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints: Vec<BigInt> = rats
                .iter()
                .map(|r| (*r * Rational::from_integer(lcm.clone())).to_integer())
                .collect();
            let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            let lead_negative = ints
                .iter()
                .find(|v| !v.is_zero())
                .is_some_and(|v| v.is_negative());
            let scale = if lead_negative { -gcd } else { gcd };
            let e: Vec<QuadExt> = ints
                .into_iter()
                .map(|v| QuadExt::from_rational(Rational::new(v, scale.clone())))
                .collect();
            return Self {
                a: e[0].clone(),
                b: e[1].clone(),
                c: e[2].clone(),
                d: e[3].clone(),
            };
        }
        let lead = entries
            .iter()
            .find(|e| !e.is_zero())
            .map(|e| (*e).clone())
            .unwrap_or_else(QuadExt::one);
        Self {
            a: &self.a / &lead,
            b: &self.b / &lead,
            c: &self.c / &lead,
            d: &self.d / &lead,
        }
    }

    /// Same map, i.e. proportional matrices.
    pub fn equivalent(&self, other: &Self) -> bool {
        let x = self.entries();
        let y = other.entries();
        for i in 0..4 {
            for j in (i + 1)..4 {
                match (x[i].checked_mul(y[j]), x[j].checked_mul(y[i])) {
                    (Ok(p), Ok(q)) if p == q => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Solutions of `b·y² + (a − d)·y − c = 0` on the projective line.
    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>> {
        if self.is_identity() {
            return Err(Error::IdentityMap);
        }
        let a_minus_d = self.a.checked_sub(&self.d)?;
        if self.b.is_zero() {
            if a_minus_d.is_zero() {
                return Ok(vec![FixedPoint {
                    value: ProjectiveScalar::Infinity,
                    multiplicity: 2,
                }]);
            }
            return Ok(vec![
                FixedPoint {
                    value: ProjectiveScalar::Finite(self.c.checked_div(&a_minus_d)?),
                    multiplicity: 1,
                },
                FixedPoint {
                    value: ProjectiveScalar::Infinity,
                    multiplicity: 1,
                },
            ]);
        }
        let four_bc = QuadExt::from_int(4).checked_mul(&self.b.checked_mul(&self.c)?)?;
        let disc = a_minus_d.square().checked_add(&four_bc)?;
        let disc_rat = disc
            .as_rational()
            .ok_or_else(|| Error::NonRationalDiscriminant(disc.to_string()))?;
        if disc_rat.is_negative() {
            return Err(Error::NegativeDiscriminant(disc.to_string()));
        }
        let two_b = QuadExt::from_int(2).checked_mul(&self.b)?;
        if disc_rat.is_zero() {
            let root = (-&a_minus_d).checked_div(&two_b)?;
            return Ok(vec![FixedPoint {
                value: ProjectiveScalar::Finite(root),
                multiplicity: 2,
            }]);
        }
        let sq = sqrt_adjoin(disc_rat)?;
        let r1 = (-&a_minus_d).checked_sub(&sq)?.checked_div(&two_b)?;
        let r2 = (-&a_minus_d).checked_add(&sq)?.checked_div(&two_b)?;
        let (lo, hi) = QuadExt::min_max(&r1, &r2)?;
        Ok(vec![
            FixedPoint {
                value: ProjectiveScalar::Finite(lo),
                multiplicity: 1,
            },
            FixedPoint {
                value: ProjectiveScalar::Finite(hi),
                multiplicity: 1,
            },
        ])
    }

    pub fn to_f64(&self) -> MoebiusF64 {
        MoebiusF64 {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
            d: self.d.to_f64(),
        }
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, constant: &QuadExt, slope: &QuadExt, var: &str) -> fmt::Result {
    let (op, slope) = if slope.signum() < 0 { ("-", slope.abs()) } else { ("+", slope.clone()) };
    if slope.is_one() {
        write!(f, "{constant} {op} {var}")
    } else {
        write!(f, "{constant} {op} {slope}*{var}")
    }
}

impl fmt::Display for MoebiusBranch {
    /// `(c + d x)/(a + b x)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_linear(f, &self.c, &self.d, "x")?;
        f.write_str(")/(")?;
        write_linear(f, &self.a, &self.b, "x")?;
        f.write_str(")")
    }
}

/// Floating-point copy of a branch for hot numerical loops.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusF64 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MoebiusF64 {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.c + self.d * x) / (self.a + self.b * x)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn jacobian_abs(&self, x: f64) -> f64 {
        let den = self.a + self.b * x;
        self.det().abs() / (den * den)
    }

    /// Inverse map `(d, −b, −c, a)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}
