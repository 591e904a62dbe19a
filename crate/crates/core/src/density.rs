//! Invariant-density representations.
//!
//! Closed forms are sums of terms `c / Π (p_i + q_i·x)` and evaluate exactly.
//! Series densities are generated from a base density `h`, a jump branch `V`
//! and an exponent pattern: term `k` is `±h(Vᵉ x)·|ωᵉ(x)|`. They evaluate in
//! `f64` with a tail bound.
//!
//! Densities are never normalised; invariant measures here may be infinite.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{MoebiusBranch, MoebiusF64};
use crate::scalar::{ProjectiveScalar, QuadExt};

/// The affine factor `constant + slope·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFactor {
    pub constant: QuadExt,
    pub slope: QuadExt,
}

impl LinearFactor {
    pub fn new(constant: impl Into<QuadExt>, slope: impl Into<QuadExt>) -> Result<Self> {
        let (constant, slope) = (constant.into(), slope.into());
        if constant.is_zero() && slope.is_zero() {
            return Err(Error::UnsupportedDensity("zero linear factor".into()));
        }
        Ok(Self { constant, slope })
    }

    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt> {
        self.constant.checked_add(&self.slope.checked_mul(x)?)
    }

    /// Root `−constant/slope`, if the factor is not constant.
    pub fn root(&self) -> Option<QuadExt> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-(&self.constant / &self.slope))
        }
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            return write!(f, "{}", self.constant);
        }
        let (op, slope) = if self.slope.signum() < 0 { ("-", self.slope.abs()) } else { ("+", self.slope.clone()) };
        if slope.is_one() {
            write!(f, "{} {op} x", self.constant)
        } else {
            write!(f, "{} {op} {slope}*x", self.constant)
        }
    }
}

/// `coefficient / Π factors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTerm {
    pub coefficient: QuadExt,
    pub factors: Vec<LinearFactor>,
}

impl FactorTerm {
    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt> {
        let mut den = QuadExt::one();
        for factor in &self.factors {
            den = den.checked_mul(&factor.eval(x)?)?;
        }
        if den.is_zero() {
            return Err(Error::PoleAtPoint(x.to_string()));
        }
        self.coefficient.checked_div(&den)
    }
}

/// A finite sum of [`FactorTerm`]s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFactorDensity {
    pub terms: Vec<FactorTerm>,
}

impl LinearFactorDensity {
    pub fn constant(value: impl Into<QuadExt>) -> Self {
        Self::single(value, Vec::new())
    }

    pub fn single(coefficient: impl Into<QuadExt>, factors: Vec<LinearFactor>) -> Self {
        Self {
            terms: vec![FactorTerm {
                coefficient: coefficient.into(),
                factors,
            }],
        }
    }

    /// `coefficient / Π (p + q·x)` from `(p, q)` pairs.
    pub fn product(coefficient: impl Into<QuadExt>, factors: Vec<(QuadExt, QuadExt)>) -> Result<Self> {
        let factors = factors
            .into_iter()
            .map(|(p, q)| LinearFactor::new(p, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::single(coefficient, factors))
    }

    pub fn eval(&self, x: &QuadExt) -> Result<QuadExt> {
        let mut sum = QuadExt::zero();
        for term in &self.terms {
            sum = sum.checked_add(&term.eval(x)?)?;
        }
        Ok(sum)
    }

    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        self.compile().eval(x)
    }

    pub fn compile(&self) -> CompiledFactors {
        CompiledFactors {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    (
                        t.coefficient.to_f64(),
                        t.factors
                            .iter()
                            .map(|f| (f.constant.to_f64(), f.slope.to_f64()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn scaled(&self, factor: &QuadExt) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| FactorTerm {
                    coefficient: &t.coefficient * factor,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }

    /// `x ↦ self(V x)·|ω_V(x)|` as a closed form.
    ///
    /// Each term with `k` factors picks up `(a + b·x)^(k−2)`; only `k ≤ 2` stays
    /// inside the factored representation.
    pub fn pullback(&self, branch: &MoebiusBranch) -> Result<Self> {
        let det_abs = branch.det().abs();
        let (a, b, c, d) = (branch.a(), branch.b(), branch.c(), branch.d());
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let k = term.factors.len();
            if k > 2 {
                return Err(Error::UnsupportedDensity(format!(
                    "pullback of a term with {k} linear factors"
                )));
            }
            let mut factors = Vec::with_capacity(2);
            for f in &term.factors {
                let constant = f.constant.checked_mul(a)?.checked_add(&f.slope.checked_mul(c)?)?;
                let slope = f.constant.checked_mul(b)?.checked_add(&f.slope.checked_mul(d)?)?;
                factors.push(LinearFactor::new(constant, slope)?);
            }
            for _ in k..2 {
                factors.push(LinearFactor::new(a.clone(), b.clone())?);
            }
            terms.push(FactorTerm {
                coefficient: term.coefficient.checked_mul(&det_abs)?,
                factors,
            });
        }
        Ok(Self { terms })
    }

    /// Roots of the factors lying strictly inside (0, 1).
    pub fn interior_poles(&self) -> Vec<QuadExt> {
        let zero = QuadExt::zero();
        let one = QuadExt::one();
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .filter_map(|f| f.root())
            .filter(|r| r.checked_cmp(&zero).is_ok_and(|o| o.is_gt()) && r.checked_cmp(&one).is_ok_and(|o| o.is_lt()))
            .collect()
    }
}

impl fmt::Display for LinearFactorDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if term.factors.is_empty() {
                write!(f, "{}", term.coefficient)?;
                continue;
            }
            let coefficient = term.coefficient.to_string();
            if coefficient.contains('/') {
                write!(f, "({coefficient})/")?;
            } else {
                write!(f, "{coefficient}/")?;
            }
            if term.factors.len() > 1 {
                f.write_str("(")?;
            }
            for factor in &term.factors {
                write!(f, "({factor})")?;
            }
            if term.factors.len() > 1 {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

/// Floating-point form of a [`LinearFactorDensity`].
#[derive(Clone, Debug)]
pub struct CompiledFactors {
    terms: Vec<(f64, Vec<(f64, f64)>)>,
}

impl CompiledFactors {
    pub fn eval(&self, x: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (coefficient, factors) in &self.terms {
            let mut den = 1.0;
            for (p, q) in factors {
                den *= p + q * x;
            }
            if den == 0.0 || !den.is_finite() {
                return Err(Error::PoleAtPoint(format!("{x}")));
            }
            sum += coefficient / den;
        }
        Ok(sum)
    }
}

/// Exponents `period·k + offset` with a sign per offset, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPattern {
    pub period: u64,
    pub block: Vec<(u64, i8)>,
}

impl IndexPattern {
    /// `0, 1, 2, 3, …` with signs `+, −, +, −, …`.
    pub fn alternating() -> Self {
        Self::paired(2)
    }

    /// `0, 1, M, M+1, 2M, 2M+1, …` with signs `+, −` in each pair.
    pub fn paired(period: u64) -> Self {
        Self {
            period,
            block: vec![(0, 1), (1, -1)],
        }
    }

    pub fn is_plain_alternating(&self) -> bool {
        self.period == 2 && self.block == [(0, 1), (1, -1)]
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        (0u64..).flat_map(move |k| self.block.iter().map(move |&(off, sign)| (k * self.period + off, sign)))
    }
}

/// Truncation for series evaluation.
///
/// `averaging_depth > 0` replaces the last partial sum of a plain alternating
/// series by `averaging_depth` rounds of pairwise averaging over the trailing
/// partial sums (the Euler transform of the tail). Other patterns are summed
/// plainly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub tail_tolerance: f64,
    pub averaging_depth: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 1000,
            tail_tolerance: 1e-10,
            averaging_depth: 12,
        }
    }
}

impl TruncationPolicy {
    pub fn plain(max_terms: usize) -> Self {
        Self {
            max_terms,
            tail_tolerance: 0.0,
            averaging_depth: 0,
        }
    }

    pub fn fixed(max_terms: usize) -> Self {
        Self {
            max_terms,
            tail_tolerance: 0.0,
            ..Self::default()
        }
    }
}

/// A floating-point evaluation together with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxValue {
    pub value: f64,
    pub tail_bound: f64,
    /// False when the tail-monotonicity check failed (the bound is then a guess).
    pub bound_verified: bool,
    pub terms: usize,
}

impl ApproxValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            tail_bound: 0.0,
            bound_verified: true,
            terms: 0,
        }
    }
}

const MONOTONE_WINDOW: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDensity {
    pub base: LinearFactorDensity,
    pub jump_branch: MoebiusBranch,
    pub prefactor: Option<LinearFactorDensity>,
    pub pattern: IndexPattern,
    pub truncation: TruncationPolicy,
}

impl SeriesDensity {
    /// `Σ (−1)ⁿ h(Vⁿ x)|ωⁿ(x)|`, the density of a one-step extension.
    pub fn alternating(base: LinearFactorDensity, jump_branch: MoebiusBranch) -> Self {
        Self {
            base,
            jump_branch,
            prefactor: None,
            pattern: IndexPattern::alternating(),
            truncation: TruncationPolicy::default(),
        }
    }

    pub fn with_truncation(mut self, truncation: TruncationPolicy) -> Self {
        self.truncation = truncation;
        self
    }

    /// Exact value of the term with exponent `e` and sign `sign`.
    pub fn term_exact(&self, exponent: u64, sign: i8, x: &QuadExt) -> Result<QuadExt> {
        let iterate = self.jump_branch.iterate(exponent);
        let y = iterate.eval_finite(x)?;
        let value = self.base.eval(&y)?.checked_mul(&iterate.jacobian(x, true)?)?;
        let value = match &self.prefactor {
            Some(p) => value.checked_mul(&p.eval(x)?)?,
            None => value,
        };
        Ok(if sign < 0 { -value } else { value })
    }

    /// Signed term values in floating point, first `count` of them.
    pub fn terms_f64(&self, x: f64, count: usize) -> Result<Vec<f64>> {
        let base = self.base.compile();
        let jump = self.jump_branch.to_f64();
        let mut walker = IterateWalker::new(jump, x);
        let mut out = Vec::with_capacity(count);
        for (e, sign) in self.pattern.exponents().take(count) {
            let (y, w) = walker.advance_to(e);
            out.push(f64::from(sign) * base.eval(y)? * w);
        }
        Ok(out)
    }

    /// Partial sums `S_1, …, S_count`.
    pub fn partial_sums(&self, x: f64, count: usize) -> Result<Vec<f64>> {
        let mut acc = Neumaier::default();
        Ok(self
            .terms_f64(x, count)?
            .into_iter()
            .map(|t| {
                acc.add(t);
                acc.total()
            })
            .collect())
    }

    pub fn eval_f64(&self, x: f64) -> Result<ApproxValue> {
        let policy = self.truncation;
        let base = self.base.compile();
        let jump = self.jump_branch.to_f64();
        let averaging = if self.pattern.is_plain_alternating() {
            policy.averaging_depth
        } else {
            0
        };
        let mut walker = IterateWalker::new(jump, x);
        let mut acc = Neumaier::default();
        // trailing partial sums, at most averaging + 2 kept
        let mut trail: Vec<f64> = Vec::with_capacity(averaging + 3);
        let mut magnitudes: Vec<f64> = Vec::with_capacity(MONOTONE_WINDOW + 1);
        let mut used = 0usize;
        let mut omitted: Option<f64> = None;

        for (e, sign) in self.pattern.exponents() {
            let (y, w) = walker.advance_to(e);
            let term = if w == 0.0 { 0.0 } else { f64::from(sign) * base.eval(y)? * w };
            if !term.is_finite() {
                return Err(Error::PoleAtPoint(format!("{x}")));
            }
            let small = term.abs() < policy.tail_tolerance || term == 0.0;
            if used >= policy.max_terms || (averaging == 0 && small && used > 0) {
                omitted = Some(term.abs());
                break;
            }
            acc.add(term);
            used += 1;
            trail.push(acc.total());
            if trail.len() > averaging + 2 {
                trail.remove(0);
            }
            magnitudes.push(term.abs());
            if magnitudes.len() > MONOTONE_WINDOW {
                magnitudes.remove(0);
            }
            if averaging > 0 && trail.len() == averaging + 2 && used.is_multiple_of(8) {
                let (_, bound) = euler_average(&trail, averaging);
                if bound < policy.tail_tolerance || term == 0.0 {
                    break;
                }
            }
        }

        let monotone = magnitudes.windows(2).all(|w| w[1] <= w[0]);
        let (value, bound) = if averaging > 0 && trail.len() == averaging + 2 {
            euler_average(&trail, averaging)
        } else {
            (acc.total(), omitted.unwrap_or(0.0))
        };
        let scale = match &self.prefactor {
            Some(p) => p.eval_f64(x)?,
            None => 1.0,
        };
        Ok(ApproxValue {
            value: value * scale,
            tail_bound: bound * scale.abs(),
            bound_verified: monotone,
            terms: used,
        })
    }
}

/// Euler-averages the last `depth + 1` entries of `trail` and the `depth + 1`
/// entries before the last; returns the first result and their difference.
fn euler_average(trail: &[f64], depth: usize) -> (f64, f64) {
    let average = |window: &[f64]| {
        let mut level = window.to_vec();
        for _ in 0..depth {
            level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        level[0]
    };
    let n = trail.len();
    let current = average(&trail[n - depth - 1..]);
    let previous = average(&trail[n - depth - 2..n - 1]);
    (current, (current - previous).abs())
}

/// Walks `x, Vx, V²x, …` accumulating `|ωᵉ(x)|` by the chain rule.
struct IterateWalker {
    branch: MoebiusF64,
    exponent: u64,
    point: f64,
    weight: f64,
}

impl IterateWalker {
    fn new(branch: MoebiusF64, x: f64) -> Self {
        Self {
            branch,
            exponent: 0,
            point: x,
            weight: 1.0,
        }
    }

    fn advance_to(&mut self, exponent: u64) -> (f64, f64) {
        while self.exponent < exponent {
            self.weight *= self.branch.jacobian_abs(self.point);
            self.point = self.branch.eval(self.point);
            self.exponent += 1;
        }
        (self.point, self.weight)
    }
}

/// Compensated summation.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// The value of a density at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityValue {
    Exact(QuadExt),
    Approx(ApproxValue),
}

impl DensityValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            DensityValue::Exact(v) => v.to_f64(),
            DensityValue::Approx(a) => a.value,
        }
    }

    pub fn tail_bound(&self) -> f64 {
        match self {
            DensityValue::Exact(_) => 0.0,
            DensityValue::Approx(a) => a.tail_bound,
        }
    }

    pub fn bound_verified(&self) -> bool {
        match self {
            DensityValue::Exact(_) => true,
            DensityValue::Approx(a) => a.bound_verified,
        }
    }

    pub fn as_exact(&self) -> Option<&QuadExt> {
        match self {
            DensityValue::Exact(v) => Some(v),
            DensityValue::Approx(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    Closed(LinearFactorDensity),
    Series(SeriesDensity),
    Sum { parts: Vec<Density> },
}

impl Density {
    pub fn is_exact(&self) -> bool {
        match self {
            Density::Closed(_) => true,
            Density::Series(_) => false,
            Density::Sum { parts } => parts.iter().all(Density::is_exact),
        }
    }

    pub fn as_closed(&self) -> Option<&LinearFactorDensity> {
        match self {
            Density::Closed(c) => Some(c),
            _ => None,
        }
    }

    pub fn with_truncation(&self, truncation: TruncationPolicy) -> Self {
        match self {
            Density::Closed(c) => Density::Closed(c.clone()),
            Density::Series(s) => Density::Series(s.clone().with_truncation(truncation)),
            Density::Sum { parts } => Density::Sum {
                parts: parts.iter().map(|p| p.with_truncation(truncation)).collect(),
            },
        }
    }

    /// Exact for closed forms, floating point with a tail bound otherwise.
    pub fn eval(&self, x: &QuadExt) -> Result<DensityValue> {
        match self {
            Density::Closed(c) => c.eval(x).map(DensityValue::Exact),
            Density::Series(s) => s.eval_f64(x.to_f64()).map(DensityValue::Approx),
            Density::Sum { parts } => {
                if self.is_exact() {
                    let mut sum = QuadExt::zero();
                    for p in parts {
                        if let DensityValue::Exact(v) = p.eval(x)? {
                            sum = sum.checked_add(&v)?;
                        }
                    }
                    return Ok(DensityValue::Exact(sum));
                }
                self.eval_f64(x.to_f64()).map(DensityValue::Approx)
            }
        }
    }

    pub fn eval_f64(&self, x: f64) -> Result<ApproxValue> {
        match self {
            Density::Closed(c) => c.eval_f64(x).map(ApproxValue::exact),
            Density::Series(s) => s.eval_f64(x),
            Density::Sum { parts } => {
                let mut total = ApproxValue::exact(0.0);
                for p in parts {
                    let v = p.eval_f64(x)?;
                    total.value += v.value;
                    total.tail_bound += v.tail_bound;
                    total.bound_verified &= v.bound_verified;
                    total.terms += v.terms;
                }
                Ok(total)
            }
        }
    }
}

impl From<LinearFactorDensity> for Density {
    fn from(value: LinearFactorDensity) -> Self {
        Density::Closed(value)
    }
}

impl From<SeriesDensity> for Density {
    fn from(value: SeriesDensity) -> Self {
        Density::Series(value)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Closed(c) => c.fmt(f),
            Density::Series(s) => {
                let signs: String = s
                    .pattern
                    .block
                    .iter()
                    .map(|&(off, sign)| format!("{}{}", if sign < 0 { "-" } else { "+" }, off))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(
                    f,
                    "sum_k sum_(o in [{signs}]) ±h(V^({}k+o) x)|w^({}k+o)(x)| with h = {}, V = {}",
                    s.pattern.period, s.pattern.period, s.base, s.jump_branch
                )
            }
            Density::Sum { parts } => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "[{p}]")?;
                }
                Ok(())
            }
        }
    }
}

const GAUSS_LEGENDRE_5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// `∫_lo^hi g(x) dx` by composite Gauss-Legendre quadrature.
///
/// Densities are never normalised implicitly; this is the explicit call for
/// normalising over a subinterval where the mass is finite.
pub fn mass_over(g: &Density, lo: f64, hi: f64, panels: usize) -> Result<f64> {
    let panels = panels.max(1);
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = lo + (i as f64 + 0.5) * h;
        for (t, w) in GAUSS_LEGENDRE_5 {
            total += w * g.eval_f64(mid + 0.5 * h * t)?.value * 0.5 * h;
        }
    }
    Ok(total)
}

fn check_pole_free(endpoint: &QuadExt) -> Result<()> {
    // 1 + p·x vanishes at x = −1/p, inside (0, 1) exactly when p < −1
    if endpoint.checked_cmp(&QuadExt::from_int(-1))?.is_lt() {
        return Err(Error::PoleInsideDomain((-endpoint.inverse()?).to_string()));
    }
    Ok(())
}

/// `∫_p^q dy/(1 + xy)² = (q − p)/((1 + px)(1 + qx))`.
///
/// The endpoints may be given in either order.
pub fn dual_interval_density(p: &QuadExt, q: &QuadExt) -> Result<LinearFactorDensity> {
    let (lo, hi) = QuadExt::min_max(p, q)?;
    if lo == hi {
        return Err(Error::DegenerateInterval(lo.to_string()));
    }
    check_pole_free(&lo)?;
    check_pole_free(&hi)?;
    LinearFactorDensity::product(
        hi.checked_sub(&lo)?,
        vec![(QuadExt::one(), lo), (QuadExt::one(), hi)],
    )
}

/// `∫_p^∞ dy/(1 + xy)² = 1/(x(1 + px))`.
pub fn dual_ray_density(p: &QuadExt) -> Result<LinearFactorDensity> {
    check_pole_free(p)?;
    LinearFactorDensity::product(
        QuadExt::one(),
        vec![(QuadExt::zero(), QuadExt::one()), (QuadExt::one(), p.clone())],
    )
}

/// `1/(1 + ξx)²`, and `1/x²` for `ξ = ∞`.
pub fn point_dual_density(xi: &ProjectiveScalar) -> Result<LinearFactorDensity> {
    match xi {
        ProjectiveScalar::Infinity => LinearFactorDensity::product(
            QuadExt::one(),
            vec![(QuadExt::zero(), QuadExt::one()), (QuadExt::zero(), QuadExt::one())],
        ),
        ProjectiveScalar::Finite(xi) => {
            check_pole_free(xi)?;
            if xi.is_zero() {
                return Ok(LinearFactorDensity::constant(1));
            }
            LinearFactorDensity::product(
                QuadExt::one(),
                vec![(QuadExt::one(), xi.clone()), (QuadExt::one(), xi.clone())],
            )
        }
    }
}
