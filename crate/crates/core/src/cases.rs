//! The three three-branch families `(+,+,+)`, `(+,−,−)` and `(−,+,+)`.
//!
//! Every condition is decided exactly: `ξ` and `θ` live in `Q(√d)` and the
//! fixed point `ξ = ∞` (at `λ = 1`) is handled on the projective line.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::density::{dual_interval_density, point_dual_density, Density, TruncationPolicy};
use crate::error::{Error, Result};
use crate::extensions::{g_n_series, TwoBranchBase};
use crate::interval_map::{default_grid, PiecewiseMoebiusMap, ResidualReport};
use crate::moebius::MoebiusBranch;
use crate::scalar::{serde_rational, sqrt_adjoin, ProjectiveScalar, QuadExt, Rational};

/// Residual tolerance for series densities in classification certificates.
pub const SERIES_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ppp,
    Pmm,
    Mpp,
}

impl Family {
    pub fn expected_signature(self) -> &'static str {
        match self {
            Family::Ppp => "(+,+,+)",
            Family::Pmm => "(+,-,-)",
            Family::Mpp => "(-,+,+)",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ppp" | "(+,+,+)" => Ok(Family::Ppp),
            "pmm" | "(+,-,-)" => Ok(Family::Pmm),
            "mpp" | "(-,+,+)" => Ok(Family::Mpp),
            _ => Err(Error::parse(s, "expected ppp, pmm or mpp")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ppp => "ppp",
            Family::Pmm => "pmm",
            Family::Mpp => "mpp",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseParams {
    pub family: Family,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    #[serde(with = "serde_rational")]
    pub mu: Rational,
    #[serde(with = "serde_rational")]
    pub nu: Rational,
}

impl CaseParams {
    pub fn new(family: Family, lambda: Rational, mu: Rational, nu: Rational) -> Result<Self> {
        let p = Self {
            family,
            lambda,
            mu,
            nu,
        };
        p.check_box()?;
        Ok(p)
    }

    pub fn from_strs(family: Family, lambda: &str, mu: &str, nu: &str) -> Result<Self> {
        use crate::scalar::parse_rational;
        Self::new(family, parse_rational(lambda)?, parse_rational(mu)?, parse_rational(nu)?)
    }

    fn check_box(&self) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        let out = |what: &str| Err(Error::ParameterOutOfRange(format!("{} for {}", what, self.family)));
        if self.lambda <= zero || self.mu <= zero || self.nu <= zero {
            return out("parameters must be positive");
        }
        match self.family {
            Family::Ppp if self.lambda > one => out("lambda must be at most 1"),
            Family::Ppp if self.nu < one => out("nu must be at least 1"),
            Family::Pmm if self.lambda > one => out("lambda must be at most 1"),
            _ => Ok(()),
        }
    }

    fn q(&self) -> (QuadExt, QuadExt, QuadExt) {
        (
            QuadExt::from(&self.lambda),
            QuadExt::from(&self.mu),
            QuadExt::from(&self.nu),
        )
    }
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(lambda = {}, mu = {}, nu = {})",
            self.family,
            QuadExt::from(&self.lambda),
            QuadExt::from(&self.mu),
            QuadExt::from(&self.nu)
        )
    }
}

fn branch(a: QuadExt, b: QuadExt, c: QuadExt, d: QuadExt) -> Result<MoebiusBranch> {
    MoebiusBranch::new(a, b, c, d)
}

fn int(n: i64) -> QuadExt {
    QuadExt::from(n)
}

/// The inverse branches `V_λ, V_μ, V_ν` in cell order.
pub fn branches(p: &CaseParams) -> Result<[MoebiusBranch; 3]> {
    let (l, m, n) = p.q();
    Ok(match p.family {
        Family::Ppp => [
            branch(int(1), &l * int(2) - int(1), int(0), l.clone())?,
            branch(int(2), &m * int(3) - int(2), int(1), &m * int(2) - int(1))?,
            branch(int(3), &n - int(3), int(2), &n - int(2))?,
        ],
        Family::Pmm => [
            branch(int(1), &l * int(3) - int(1), int(0), l.clone())?,
            branch(int(2), &m * int(3) - int(2), int(1), &m - int(1))?,
            branch(int(1), &n * int(2) - int(1), int(1), &n - int(1))?,
        ],
        Family::Mpp => [
            branch(int(3), &l - int(3), int(1), int(-1))?,
            branch(int(3), &m * int(2) - int(3), int(1), &m - int(1))?,
            branch(int(2), &n - int(2), int(1), &n - int(1))?,
        ],
    })
}

pub fn build_map(p: &CaseParams) -> Result<PiecewiseMoebiusMap> {
    p.check_box()?;
    let partition = match p.family {
        Family::Ppp => vec![QuadExt::zero(), QuadExt::from_ratio(1, 2), QuadExt::from_ratio(2, 3), QuadExt::one()],
        Family::Pmm | Family::Mpp => {
            vec![QuadExt::zero(), QuadExt::from_ratio(1, 3), QuadExt::from_ratio(1, 2), QuadExt::one()]
        }
    };
    let map = PiecewiseMoebiusMap::new(
        partition,
        branches(p)?.to_vec(),
        vec!["lambda".into(), "mu".into(), "nu".into()],
    )?;
    map.validate().into_result()?;
    Ok(map)
}

/// Adjoints `V*_λ, V*_μ, V*_ν`.
pub fn dual_map(p: &CaseParams) -> Result<[MoebiusBranch; 3]> {
    Ok(branches(p)?.map(|b| b.adjoint()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseFixedPoints {
    pub xi: ProjectiveScalar,
    pub eta_candidates: Vec<ProjectiveScalar>,
    pub theta: Option<QuadExt>,
}

fn half(x: QuadExt) -> QuadExt {
    x / QuadExt::from(2)
}

pub fn case_fixed_points(p: &CaseParams) -> Result<CaseFixedPoints> {
    let (l, m, n) = p.q();
    let one = QuadExt::one();
    Ok(match p.family {
        Family::Ppp => {
            let xi = if l == one {
                ProjectiveScalar::Infinity
            } else {
                ProjectiveScalar::Finite((&l * int(2) - int(1)) / (&one - &l))
            };
            let root = sqrt_adjoin(&(&p.mu * &p.mu * Rational::from_integer(BigInt::from(4)) + Rational::one()))?;
            CaseFixedPoints {
                xi,
                eta_candidates: vec![ProjectiveScalar::finite(-1), ProjectiveScalar::Finite(half(&n - int(3)))],
                theta: Some(half(&m * int(2) - int(3) + root)),
            }
        }
        Family::Pmm => {
            let xi = if l == one {
                ProjectiveScalar::Infinity
            } else {
                ProjectiveScalar::Finite((&l * int(3) - int(1)) / (&one - &l))
            };
            let eta = dual_map(p)?[1].eval(&xi)?;
            CaseFixedPoints {
                xi,
                eta_candidates: vec![eta],
                theta: None,
            }
        }
        Family::Mpp => {
            let root = sqrt_adjoin(&(&p.mu * &p.mu + Rational::from_integer(BigInt::from(4))))?;
            CaseFixedPoints {
                xi: ProjectiveScalar::Finite(half(&m - int(4) + root)),
                eta_candidates: vec![ProjectiveScalar::finite(-1), ProjectiveScalar::Finite(&n - int(2))],
                theta: None,
            }
        }
    })
}

/// A named equality with both sides evaluated exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    /// The `η` candidate the condition was evaluated at, if it depends on one.
    pub eta: Option<ProjectiveScalar>,
    pub holds: bool,
    pub lhs: ProjectiveScalar,
    pub rhs: ProjectiveScalar,
}

impl Condition {
    fn new(name: &str, eta: Option<&ProjectiveScalar>, lhs: ProjectiveScalar, rhs: ProjectiveScalar) -> Self {
        Self {
            name: name.to_string(),
            eta: eta.cloned(),
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }

    fn rational(name: &str, lhs: QuadExt, rhs: QuadExt) -> Self {
        Self::new(name, None, ProjectiveScalar::Finite(lhs), ProjectiveScalar::Finite(rhs))
    }

    /// `"lhs = rhs"` or `"lhs != rhs"` with the exact values.
    pub fn witness(&self) -> String {
        let op = if self.holds { "=" } else { "!=" };
        match &self.eta {
            Some(eta) => format!("{} at eta = {eta}: {} {op} {}", self.name, self.lhs, self.rhs),
            None => format!("{}: {} {op} {}", self.name, self.lhs, self.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub fixed_points: CaseFixedPoints,
    /// Dual-map conditions, per `η` candidate where they depend on one.
    pub conditions: Vec<Condition>,
    /// Derived algebraic relations, reported independently.
    pub relations: Vec<Condition>,
}

impl ConditionReport {
    pub fn condition(&self, name: &str, eta: Option<&ProjectiveScalar>) -> Option<&Condition> {
        self.conditions
            .iter()
            .find(|c| c.name == name && (eta.is_none() || c.eta.as_ref() == eta))
    }

    pub fn relation(&self, name: &str) -> Option<&Condition> {
        self.relations.iter().find(|c| c.name == name)
    }

    /// `η` candidates at which every condition holds.
    pub fn satisfied_etas(&self) -> Vec<ProjectiveScalar> {
        let mut out: Vec<ProjectiveScalar> = Vec::new();
        for eta in &self.fixed_points.eta_candidates {
            let all = self
                .conditions
                .iter()
                .filter(|c| c.eta.is_none() || c.eta.as_ref() == Some(eta))
                .all(|c| c.holds);
            if all && !out.contains(eta) {
                out.push(eta.clone());
            }
        }
        out
    }
}

pub fn check_conditions(p: &CaseParams) -> Result<ConditionReport> {
    let fp = case_fixed_points(p)?;
    let [dl, dm, dn] = dual_map(p)?;
    let (l, m, n) = p.q();
    let one = QuadExt::one();
    let mut conditions = Vec::new();
    let mut relations = Vec::new();
    match p.family {
        Family::Ppp => {
            let dll = dl.compose(&dl);
            for eta in &fp.eta_candidates {
                conditions.push(Condition::new("V*_mu(eta) = V*_lambda(eta)", Some(eta), dm.eval(eta)?, dl.eval(eta)?));
                conditions.push(Condition::new(
                    "V*_mu(xi) = V*_lambda_lambda(eta)",
                    Some(eta),
                    dm.eval(&fp.xi)?,
                    dll.eval(eta)?,
                ));
            }
            relations.push(Condition::rational("lambda = mu", l.clone(), m.clone()));
            relations.push(Condition::rational("nu = 1", n.clone(), one.clone()));
            relations.push(Condition::rational(
                "4 mu nu = lambda (nu + 1)^2",
                &m * &n * int(4),
                &l * (&n + &one).square(),
            ));
            relations.push(Condition::rational("lambda^2 mu + lambda = mu", &l * &l * &m + &l, m.clone()));
            if let Some(theta) = &fp.theta {
                relations.push(Condition::new(
                    "theta = xi",
                    None,
                    ProjectiveScalar::Finite(theta.clone()),
                    fp.xi.clone(),
                ));
            }
        }
        Family::Pmm => {
            let dnn = dn.compose(&dn);
            let eta = &fp.eta_candidates[0];
            conditions.push(Condition::new("V*_mu(xi) = V*_nu(xi)", None, dm.eval(&fp.xi)?, dn.eval(&fp.xi)?));
            conditions.push(Condition::new("V*_mu(eta) = V*_nu_nu(eta)", Some(eta), dm.eval(eta)?, dnn.eval(eta)?));
            relations.push(Condition::rational("mu = nu", m.clone(), n.clone()));
            relations.push(Condition::rational("lambda = 1", l.clone(), one.clone()));
            relations.push(Condition::rational(
                "4 mu^2 - 4 mu nu + mu^2 nu - mu nu^2 = nu",
                &m * &m * int(4) - &m * &n * int(4) + &m * &m * &n - &m * &n * &n,
                n.clone(),
            ));
            relations.push(Condition::new("eta = xi", None, eta.clone(), fp.xi.clone()));
        }
        Family::Mpp => {
            for eta in &fp.eta_candidates {
                conditions.push(Condition::new("V*_lambda(eta) = V*_mu(eta)", Some(eta), dl.eval(eta)?, dm.eval(eta)?));
            }
            conditions.push(Condition::new("V*_lambda(xi) = V*_nu(xi)", None, dl.eval(&fp.xi)?, dn.eval(&fp.xi)?));
            relations.push(Condition::rational("lambda = mu nu", l.clone(), &m * &n));
            relations.push(Condition::rational("lambda = nu^2 - 1", l.clone(), &n * &n - &one));
            relations.push(Condition::rational("lambda = mu", l.clone(), m.clone()));
            relations.push(Condition::rational("nu = 1", n.clone(), one.clone()));
            relations.push(Condition::rational("mu = 1", m.clone(), one.clone()));
        }
    }
    Ok(ConditionReport {
        fixed_points: fp,
        conditions,
        relations,
    })
}

/// `ψ(t) = (c + d t)/(a + b t)` with `a = 1 − λ`, `b = c = 2λ − 1`,
/// `d = λμ + μ − 4λ + 1`.
///
/// `det ψ = μ − λ − λ²μ`, so `ψ` collapses to a constant exactly when
/// `μ − λ = λ²μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiMap {
    pub a: QuadExt,
    pub b: QuadExt,
    pub c: QuadExt,
    pub d: QuadExt,
    pub degenerate: bool,
    /// The constant value of a degenerate `ψ`.
    pub constant: Option<ProjectiveScalar>,
}

impl PsiMap {
    pub fn branch(&self) -> Option<MoebiusBranch> {
        MoebiusBranch::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()).ok()
    }
}

pub fn psi_map(lambda: &Rational, mu: &Rational) -> PsiMap {
    let l = QuadExt::from(lambda);
    let m = QuadExt::from(mu);
    let a = QuadExt::one() - &l;
    let b = &l * int(2) - int(1);
    let c = b.clone();
    let d = &l * &m + &m - &l * int(4) + int(1);
    let det = &a * &d - &b * &c;
    let degenerate = det.is_zero();
    let constant = degenerate.then(|| {
        if !a.is_zero() {
            ProjectiveScalar::Finite(&c / &a)
        } else if !b.is_zero() {
            ProjectiveScalar::Finite(&d / &b)
        } else {
            ProjectiveScalar::Infinity
        }
    });
    PsiMap {
        a,
        b,
        c,
        d,
        degenerate,
        constant,
    }
}

/// `ψ∘V ∝ V*∘ψ` as matrices.
pub fn verify_conjugacy(psi: &PsiMap, v: &MoebiusBranch, v_star: &MoebiusBranch) -> Result<bool> {
    let Some(psi) = psi.branch() else {
        let constant = psi.constant.as_ref().map(ToString::to_string).unwrap_or_default();
        return Err(Error::DegeneratePsi(constant));
    };
    Ok(psi.compose(v).equivalent(&v_star.compose(&psi)))
}

/// Fibonacci numbers extended backwards with `F₋₂ = 1`, `F₋₁ = 0`.
pub fn fibonacci(n: i64) -> BigInt {
    assert!(n >= -2, "fibonacci index below -2");
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    for _ in -2..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `V_αⁿ x = (F_{n−1} − F_{n−3} x)/(F_{n+1} − F_{n−1} x)` for `V_α x = (1 − x)/(2 − x)`.
pub fn fibonacci_iterate_check(n_max: u64) -> bool {
    let v = MoebiusBranch::from_ints(2, -1, 1, -1).expect("nonsingular");
    (1..=n_max).all(|n| {
        let k = n as i64;
        let f = |i: i64| QuadExt::from_rational(Rational::from_integer(fibonacci(i)));
        let expected = MoebiusBranch::new(f(k + 1), -f(k - 1), f(k - 1), -f(k - 3)).expect("nonsingular");
        v.iterate(n).equivalent(&expected)
    })
}

/// `V_βⁿ x = (n − (n − 1)x)/(n + 1 − n x)` for `V_β x = 1/(2 − x)`.
pub fn parabolic_iterate_check(n_max: u64) -> bool {
    let v = MoebiusBranch::from_ints(2, -1, 1, 0).expect("nonsingular");
    (1..=n_max).all(|n| {
        let k = n as i64;
        let expected = MoebiusBranch::from_ints(k + 1, -k, k, -(k - 1)).expect("nonsingular");
        v.iterate(n).equivalent(&expected)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    PointDual {
        xi: ProjectiveScalar,
    },
    NaturalDualDegenerate {
        xi: ProjectiveScalar,
        psi_constant: Option<ProjectiveScalar>,
    },
    OneStepExtension {
        base: String,
        jumped_branch: String,
    },
    ExceptionalDual {
        lower: QuadExt,
        upper: QuadExt,
        degenerate: bool,
        one_step_extension: bool,
    },
    NoConditionMet {
        witness: String,
    },
}

impl Outcome {
    /// Point duals, including the natural duals whose `ψ` is constant and
    /// degenerate exceptional duals.
    pub fn is_point_dual(&self) -> bool {
        matches!(
            self,
            Outcome::PointDual { .. }
                | Outcome::NaturalDualDegenerate { .. }
                | Outcome::ExceptionalDual { degenerate: true, .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::PointDual { .. } => "point_dual",
            Outcome::NaturalDualDegenerate { .. } => "natural_dual_degenerate",
            Outcome::OneStepExtension { .. } => "one_step_extension",
            Outcome::ExceptionalDual { .. } => "exceptional_dual",
            Outcome::NoConditionMet { .. } => "no_condition_met",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub params: CaseParams,
    pub type_signature: String,
    pub conditions: ConditionReport,
    pub outcome: Outcome,
    pub density: Option<Density>,
    pub psi: Option<PsiMap>,
    pub certificate: Option<ResidualReport>,
    pub certificate_passed: bool,
    pub truncation: TruncationPolicy,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    /// A condition was met and the density passed its invariance certificate.
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::NoConditionMet { .. }) && self.certificate_passed
    }
}

pub fn classify(p: &CaseParams) -> Result<ClassificationReport> {
    classify_with(p, TruncationPolicy::default(), &default_grid(101))
}

pub fn classify_with(p: &CaseParams, truncation: TruncationPolicy, grid: &[QuadExt]) -> Result<ClassificationReport> {
    let map = build_map(p)?;
    let conditions = check_conditions(p)?;
    let xi = conditions.fixed_points.xi.clone();
    let etas = conditions.satisfied_etas();
    let mut notes = Vec::new();
    let mut psi = None;

    let (outcome, density) = match p.family {
        Family::Ppp | Family::Pmm if etas.is_empty() => (no_condition(&conditions), None),
        Family::Ppp | Family::Pmm if etas.contains(&xi) => {
            let density = Density::Closed(point_dual_density(&xi)?);
            if p.family == Family::Ppp {
                let ps = psi_map(&p.lambda, &p.mu);
                if !ps.degenerate {
                    notes.push("psi is not degenerate although xi = eta".into());
                }
                let outcome = Outcome::NaturalDualDegenerate {
                    xi: xi.clone(),
                    psi_constant: ps.constant.clone(),
                };
                psi = Some(ps);
                (outcome, Some(density))
            } else {
                (Outcome::PointDual { xi: xi.clone() }, Some(density))
            }
        }
        Family::Ppp => {
            if p.lambda == p.mu && p.nu == Rational::one() {
                let base = TwoBranchBase::ppp(&p.lambda)?;
                let density = Density::Series(g_n_series(&base, 1).with_truncation(truncation));
                (
                    Outcome::OneStepExtension {
                        base: format!("ppp2(lambda = {})", QuadExt::from(&p.lambda)),
                        jumped_branch: "beta".into(),
                    },
                    Some(density),
                )
            } else {
                let witness = "conditions hold with xi != eta but (lambda, nu) != (mu, 1)".to_string();
                (Outcome::NoConditionMet { witness }, None)
            }
        }
        Family::Pmm => {
            if p.mu == p.nu && p.lambda == Rational::one() {
                let base = TwoBranchBase::pmm(&p.nu)?;
                let density = Density::Series(g_n_series(&base, 1).with_truncation(truncation));
                (
                    Outcome::OneStepExtension {
                        base: format!("pmm2(nu = {})", QuadExt::from(&p.nu)),
                        jumped_branch: "alpha".into(),
                    },
                    Some(density),
                )
            } else {
                let witness = "conditions hold with xi != eta but (mu, lambda) != (nu, 1)".to_string();
                (Outcome::NoConditionMet { witness }, None)
            }
        }
        Family::Mpp => classify_mpp(p, &conditions, &etas, &mut notes)?,
    };

    if p.family == Family::Mpp {
        for name in ["lambda = mu nu", "lambda = nu^2 - 1"] {
            if conditions.relation(name).is_some_and(|r| r.holds) {
                notes.push(format!("relation holds: {name}"));
            }
        }
    }

    let (certificate, certificate_passed) = match &density {
        Some(d) => {
            let report = map.invariance_residual(d, grid);
            let passed = report.passes(SERIES_TOLERANCE);
            (Some(report), passed)
        }
        None => (None, false),
    };
    Ok(ClassificationReport {
        params: p.clone(),
        type_signature: map.type_signature().to_string(),
        conditions,
        outcome,
        density,
        psi,
        certificate,
        certificate_passed,
        truncation,
        notes,
    })
}

fn no_condition(conditions: &ConditionReport) -> Outcome {
    let witness = conditions
        .conditions
        .iter()
        .filter(|c| !c.holds)
        .map(Condition::witness)
        .collect::<Vec<_>>()
        .join("; ");
    Outcome::NoConditionMet { witness }
}

fn classify_mpp(
    p: &CaseParams,
    conditions: &ConditionReport,
    etas: &[ProjectiveScalar],
    notes: &mut Vec<String>,
) -> Result<(Outcome, Option<Density>)> {
    let Some(eta) = etas.last() else {
        return Ok((no_condition(conditions), None));
    };
    let eta = eta
        .as_finite()
        .cloned()
        .ok_or_else(|| Error::InvalidMap("infinite eta".into()))?;
    let xi = conditions
        .fixed_points
        .xi
        .as_finite()
        .cloned()
        .ok_or_else(|| Error::InvalidMap("infinite xi".into()))?;
    if eta == QuadExt::from(-1) {
        notes.push("conditions hold at eta = -1".into());
    }
    let one_step_extension = p.mu == Rational::one();
    if eta == xi {
        return Ok((
            Outcome::ExceptionalDual {
                lower: xi.clone(),
                upper: xi.clone(),
                degenerate: true,
                one_step_extension,
            },
            Some(Density::Closed(point_dual_density(&ProjectiveScalar::Finite(xi))?)),
        ));
    }
    let (lower, upper) = QuadExt::min_max(&eta, &xi)?;
    let density = dual_interval_density(&lower, &upper)?;
    Ok((
        Outcome::ExceptionalDual {
            lower,
            upper,
            degenerate: false,
            one_step_extension,
        },
        Some(Density::Closed(density)),
    ))
}
