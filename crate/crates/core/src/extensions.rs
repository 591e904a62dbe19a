//! One-step and n-step extensions of two-branch maps by the jump construction.
//!
//! Jumping over the branch `J` of a map with transfer operator `P` replaces
//! `J` by the compositions `J∘W` for every branch `W`. If `h` is invariant for
//! the base map, the extension has density `g = Σ (−1)ᵉ P_Jᵉ h` and
//! `h = g + P_J g`. Iterating on the deepest branch `J^(2^k)` gives the
//! n-step extension with `2ⁿ + 1` branches and density
//! `g_n = Σ_k (P_J^(2ⁿk) − P_J^(2ⁿk+1)) h`.

use serde::{Deserialize, Serialize};

use crate::density::{IndexPattern, LinearFactorDensity, SeriesDensity, TruncationPolicy};
use crate::density::{dual_interval_density, Density};
use crate::error::{Error, Result};
use crate::interval_map::{interior_grid, PiecewiseMoebiusMap, ResidualPoint, ResidualReport, SkippedPoint};
use crate::moebius::MoebiusBranch;
use crate::scalar::{sqrt_adjoin, QuadExt, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Ppp,
    Pmm,
    Mpp,
    Custom,
}

/// A two-branch map, its invariant density `h`, and the branch to jump over.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoBranchBase {
    pub kind: BaseKind,
    pub map: PiecewiseMoebiusMap,
    pub density: LinearFactorDensity,
    pub jump_label: String,
}

impl TwoBranchBase {
    pub fn new(map: PiecewiseMoebiusMap, density: LinearFactorDensity, jump_label: &str) -> Result<Self> {
        Self::with_kind(BaseKind::Custom, map, density, jump_label)
    }

    fn with_kind(kind: BaseKind, map: PiecewiseMoebiusMap, density: LinearFactorDensity, jump_label: &str) -> Result<Self> {
        if map.len() != 2 {
            return Err(Error::InvalidBase(format!("expected 2 branches, found {}", map.len())));
        }
        if map.index_of(jump_label).is_none() {
            return Err(Error::InvalidBase(format!("no branch labelled {jump_label:?}")));
        }
        map.validate()
            .into_result()
            .map_err(|e| Error::InvalidBase(e.to_string()))?;
        Ok(Self {
            kind,
            map,
            density,
            jump_label: jump_label.to_string(),
        })
    }

    /// `V_λ x = λx/(1 + (2λ − 1)x)`, `V_β x = 1/(2 − x)`, jumping `β`.
    pub fn ppp(lambda: &Rational) -> Result<Self> {
        let l = QuadExt::from(lambda);
        if l.signum() <= 0 || l.checked_cmp(&QuadExt::one())?.is_gt() {
            return Err(Error::ParameterOutOfRange(format!("lambda = {l} outside (0, 1]")));
        }
        let two_l_minus_1 = &l * QuadExt::from(2) - QuadExt::one();
        let map = PiecewiseMoebiusMap::from_branches(vec![
            (
                "lambda".into(),
                MoebiusBranch::new(QuadExt::one(), two_l_minus_1.clone(), QuadExt::zero(), l.clone())?,
            ),
            ("beta".into(), MoebiusBranch::from_ints(2, -1, 1, 0)?),
        ])?;
        let h = LinearFactorDensity::product(
            1,
            vec![
                (QuadExt::one() - &l, two_l_minus_1),
                (QuadExt::one(), QuadExt::from(-1)),
            ],
        )?;
        Self::with_kind(BaseKind::Ppp, map, h, "beta")
    }

    /// `V_α x = x/(1 + x)`, `V_ν x = (1 + (ν − 1)x)/(1 + (2ν − 1)x)`, jumping `α`.
    pub fn pmm(nu: &Rational) -> Result<Self> {
        let n = QuadExt::from(nu);
        if n.signum() <= 0 {
            return Err(Error::ParameterOutOfRange(format!("nu = {n} must be positive")));
        }
        let map = PiecewiseMoebiusMap::from_branches(vec![
            ("alpha".into(), MoebiusBranch::from_ints(1, 1, 0, 1)?),
            (
                "nu".into(),
                MoebiusBranch::new(
                    QuadExt::one(),
                    &n * QuadExt::from(2) - QuadExt::one(),
                    QuadExt::one(),
                    &n - QuadExt::one(),
                )?,
            ),
        ])?;
        let h = LinearFactorDensity::product(
            1,
            vec![(QuadExt::zero(), QuadExt::one()), (QuadExt::one(), &n - QuadExt::one())],
        )?;
        Self::with_kind(BaseKind::Pmm, map, h, "alpha")
    }

    /// `V_α x = (1 − x)/(2 − x)`, `V_ν x = (1 + (ν − 1)x)/(2 + (ν − 2)x)`, jumping `α`.
    ///
    /// `h` has a pole inside (0, 1) unless `ν ≥ 1`.
    pub fn mpp(nu: &Rational) -> Result<Self> {
        let n = QuadExt::from(nu);
        if n.checked_cmp(&QuadExt::one())?.is_lt() {
            return Err(Error::ParameterOutOfRange(format!("nu = {n} must be at least 1")));
        }
        let map = PiecewiseMoebiusMap::from_branches(vec![
            ("alpha".into(), MoebiusBranch::from_ints(2, -1, 1, -1)?),
            (
                "nu".into(),
                MoebiusBranch::new(QuadExt::from(2), &n - QuadExt::from(2), QuadExt::one(), &n - QuadExt::one())?,
            ),
        ])?;
        let h = LinearFactorDensity::product(
            1,
            vec![
                (QuadExt::one(), &n - QuadExt::from(2)),
                (n.clone(), QuadExt::one() - &n),
            ],
        )?;
        Self::with_kind(BaseKind::Mpp, map, h, "alpha")
    }

    pub fn jump_branch(&self) -> &MoebiusBranch {
        self.map.branch(&self.jump_label).expect("checked on construction")
    }

    pub fn kept_label(&self) -> &str {
        self.map
            .labels()
            .iter()
            .find(|l| **l != self.jump_label)
            .expect("two distinct labels")
    }

    pub fn kept_branch(&self) -> &MoebiusBranch {
        self.map.branch(self.kept_label()).expect("two branches")
    }

    /// `ν` for the PMM and MPP bases, read off the second branch.
    fn nu(&self) -> Option<QuadExt> {
        let v = self.map.branch("nu")?;
        Some(v.d() / v.c() + QuadExt::one())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub base_kind: BaseKind,
    pub base_map: PiecewiseMoebiusMap,
    pub jumped_branch: String,
    pub steps: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionResult {
    pub map: PiecewiseMoebiusMap,
    pub density: Density,
    /// `h` for one step, `g_{n−1}` otherwise.
    pub parent_density: Density,
    /// The branch jumped over in the last step, `J^(2^(n−1))`.
    pub last_jump: MoebiusBranch,
    pub provenance: Provenance,
}

/// Replaces the branch `label` by its compositions with every branch.
pub fn jump_once(map: &PiecewiseMoebiusMap, label: &str) -> Result<PiecewiseMoebiusMap> {
    let jump = map
        .branch(label)
        .ok_or_else(|| Error::InvalidBase(format!("no branch labelled {label:?}")))?;
    let mut branches = Vec::with_capacity(2 * map.len() - 1);
    for (l, w) in map.labels().iter().zip(map.branches()) {
        if l != label {
            branches.push((l.clone(), w.clone()));
        }
    }
    for (l, w) in map.labels().iter().zip(map.branches()) {
        branches.push((compose_labels(label, l), jump.compose(w)));
    }
    PiecewiseMoebiusMap::from_branches(branches)
}

/// `"beta^2" ∘ "beta.lambda"` is `"beta^3.lambda"`.
pub fn compose_labels(outer: &str, inner: &str) -> String {
    let mut tokens: Vec<(String, u64)> = Vec::new();
    for part in outer.split('.').chain(inner.split('.')) {
        let (name, power) = match part.split_once('^') {
            Some((n, p)) => (n.to_string(), p.parse().unwrap_or(1)),
            None => (part.to_string(), 1),
        };
        match tokens.last_mut() {
            Some((last, k)) if *last == name => *k += power,
            _ => tokens.push((name, power)),
        }
    }
    tokens
        .into_iter()
        .map(|(n, k)| if k == 1 { n } else { format!("{n}^{k}") })
        .collect::<Vec<_>>()
        .join(".")
}

pub fn jump_extension(base: &TwoBranchBase) -> Result<ExtensionResult> {
    n_step_extension(base, 1)
}

pub fn n_step_extension(base: &TwoBranchBase, n: u32) -> Result<ExtensionResult> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("extension steps must be at least 1".into()));
    }
    if n > 20 {
        return Err(Error::ParameterOutOfRange(format!("{n} steps would need 2^{n} + 1 branches")));
    }
    let jump = base.jump_branch();
    let mut map = base.map.clone();
    let mut label = base.jump_label.clone();
    for _ in 0..n {
        map = jump_once(&map, &label)?;
        label = compose_labels(&label, &label);
    }
    map.validate()
        .into_result()
        .map_err(|e| Error::InvalidBase(e.to_string()))?;
    let density = if n == 1 && base.kind == BaseKind::Mpp {
        Density::Closed(mpp_extension_density(base)?)
    } else {
        Density::Series(g_n_series(base, n))
    };
    let parent_density = if n == 1 {
        Density::Closed(base.density.clone())
    } else {
        Density::Series(g_n_series(base, n - 1))
    };
    Ok(ExtensionResult {
        map,
        density,
        parent_density,
        last_jump: jump.iterate(1 << (n - 1)),
        provenance: Provenance {
            base_kind: base.kind,
            base_map: base.map.clone(),
            jumped_branch: base.jump_label.clone(),
            steps: n,
        },
    })
}

/// `g_n` expanded in `h`: exponents `2ⁿk` with sign `+` and `2ⁿk + 1` with sign `−`.
pub fn g_n_series(base: &TwoBranchBase, n: u32) -> SeriesDensity {
    SeriesDensity {
        base: base.density.clone(),
        jump_branch: base.jump_branch().clone(),
        prefactor: None,
        pattern: IndexPattern::paired(1 << n),
        truncation: TruncationPolicy::default(),
    }
}

/// The one-step extension of the MPP base is MPP(ν, 1, ν), which has the
/// closed-form density `C/((1 + (ν − 2)x)(1 + ξx))` with `ξ = (−3 + √5)/2`.
///
/// The constant `C` is fixed by matching `h = g + P_J g` at `x = 1/2`;
/// every other point is then checked by the caller.
pub fn mpp_extension_density(base: &TwoBranchBase) -> Result<LinearFactorDensity> {
    let nu = base
        .nu()
        .ok_or_else(|| Error::InvalidBase("MPP base needs a nu branch".into()))?;
    let xi = (sqrt_adjoin(&Rational::from_integer(5.into()))? - QuadExt::from(3)) / QuadExt::from(2);
    let shape = dual_interval_density(&(nu - QuadExt::from(2)), &xi)?;
    let x0 = QuadExt::from_ratio(1, 2);
    let jump = base.jump_branch();
    let lhs = base.density.eval(&x0)?;
    let rhs = shape
        .eval(&x0)?
        .checked_add(&shape.eval(&jump.eval_finite(&x0)?)?.checked_mul(&jump.jacobian(&x0, true)?)?)?;
    Ok(shape.scaled(&lhs.checked_div(&rhs)?))
}

/// `g_∞ = h(V_kept x)|ω_kept(x)|`, checked against `h − h(V_jump x)|ω_jump(x)|`
/// at 50 interior points.
pub fn g_infinity(base: &TwoBranchBase) -> Result<LinearFactorDensity> {
    let kept_form = base.density.pullback(base.kept_branch())?;
    let difference_form = base
        .density
        .sum(&base.density.pullback(base.jump_branch())?.scaled(&QuadExt::from(-1)));
    for x in interior_grid(50) {
        let (a, b) = match (kept_form.eval(&x), difference_form.eval(&x)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::PoleAtPoint(_)), _) | (_, Err(Error::PoleAtPoint(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if a != b {
            return Err(Error::ValidationFailed(format!(
                "g_inf forms differ at x = {x}: {a} vs {b}"
            )));
        }
    }
    Ok(kept_form)
}

/// Relative residual of `parent(x) = child(x) + child(Jx)|ω_J(x)|` on a grid.
pub fn jump_relation_residual(
    parent: &Density,
    jump: &MoebiusBranch,
    child: &Density,
    grid: &[QuadExt],
) -> ResidualReport {
    let mut points = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for x in grid {
        match jump_relation_at(parent, jump, child, x) {
            Ok(p) => points.push(p),
            Err(e) => skipped.push(SkippedPoint {
                x: x.clone(),
                reason: e.to_string(),
            }),
        }
    }
    ResidualReport::from_points(points, skipped)
}

fn jump_relation_at(parent: &Density, jump: &MoebiusBranch, child: &Density, x: &QuadExt) -> Result<ResidualPoint> {
    let y = jump.eval_finite(x)?;
    let w = jump.jacobian(x, true)?;
    let p = parent.eval(x)?;
    let g = child.eval(x)?;
    let gy = child.eval(&y)?;
    if let (Some(p), Some(g), Some(gy)) = (p.as_exact(), g.as_exact(), gy.as_exact()) {
        if p.is_zero() {
            return Err(Error::PoleAtPoint(format!("{x} (density vanishes)")));
        }
        let rhs = g.checked_add(&gy.checked_mul(&w)?)?;
        let rel = p.checked_sub(&rhs)?.checked_div(p)?.abs();
        return Ok(ResidualPoint {
            x: x.clone(),
            density: p.to_f64(),
            transfer: rhs.to_f64(),
            residual: rel.to_f64(),
            exact_zero: Some(rel.is_zero()),
            tail_bound: 0.0,
            bound_verified: true,
        });
    }
    let wf = w.to_f64();
    let pv = p.to_f64();
    if pv == 0.0 {
        return Err(Error::PoleAtPoint(format!("{x} (density vanishes)")));
    }
    let rhs = g.to_f64() + gy.to_f64() * wf;
    Ok(ResidualPoint {
        x: x.clone(),
        density: pv,
        transfer: rhs,
        residual: ((pv - rhs) / pv).abs(),
        exact_zero: None,
        tail_bound: (p.tail_bound() + g.tail_bound() + gy.tail_bound() * wf) / pv.abs(),
        bound_verified: p.bound_verified() && g.bound_verified() && gy.bound_verified(),
    })
}

/// `h(x) − [g(x) + g(V x)|ω(x)|]` relative to `h(x)`, for the extension's
/// density against its parent and the branch jumped in the last step.
pub fn verify_jump_relation(extension: &ExtensionResult, grid: &[QuadExt]) -> ResidualReport {
    jump_relation_residual(
        &extension.parent_density,
        &extension.last_jump,
        &extension.density,
        grid,
    )
}

/// Checks that `g_∞` is invariant for the jump transformation whose inverse
/// branches are `Jⁿ∘K`, `n ≥ 0`.
///
/// The first `terms` branches sum to `g_∞(x)` minus the exact remainder
/// `h(J^terms K x)|ω(x)|`; the identity is tested in exact arithmetic.
pub fn jump_transformation_check(base: &TwoBranchBase, x: &QuadExt, terms: u64) -> Result<bool> {
    let g_inf = g_infinity(base)?;
    let kept = base.kept_branch();
    let jump = base.jump_branch();
    let mut branch = kept.clone();
    let mut sum = QuadExt::zero();
    for _ in 0..terms {
        let y = branch.eval_finite(x)?;
        sum = sum.checked_add(&g_inf.eval(&y)?.checked_mul(&branch.jacobian(x, true)?)?)?;
        branch = jump.compose(&branch);
    }
    let remainder = base
        .density
        .eval(&branch.eval_finite(x)?)?
        .checked_mul(&branch.jacobian(x, true)?)?;
    Ok(sum.checked_add(&remainder)? == g_inf.eval(x)?)
}

/// The six Fibonacci terms of `g₂` for the MPP base at `ν = 1`:
/// `1/(1−x) − 1/(2−x) + 2/(5−2x) − 5/(13−5x) + 13/(34−13x) − 34/(89−34x)`.
pub fn fibonacci_g2_six_terms(x: &QuadExt) -> Result<QuadExt> {
    let terms: [(i64, i64, i64); 6] = [
        (1, 1, 1),
        (-1, 2, 1),
        (2, 5, 2),
        (-5, 13, 5),
        (13, 34, 13),
        (-34, 89, 34),
    ];
    let mut sum = QuadExt::zero();
    for (num, p, q) in terms {
        let den = QuadExt::from(p) - QuadExt::from(q) * x;
        sum = sum.checked_add(&QuadExt::from(num).checked_div(&den)?)?;
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibonacciSeriesPoint {
    pub x: QuadExt,
    pub fibonacci: QuadExt,
    pub constructed_six: QuadExt,
    /// The Fibonacci terms equal the first six constructed terms exactly.
    pub six_terms_agree: bool,
    pub constructed_full: f64,
    pub tail_bound: f64,
}

/// Compares the six-term Fibonacci `g₂` with the constructed `g₂` of the MPP
/// base at `ν = 1`.
pub fn compare_fibonacci_g2(points: &[QuadExt]) -> Result<Vec<FibonacciSeriesPoint>> {
    let base = TwoBranchBase::mpp(&Rational::from_integer(1.into()))?;
    let g2 = g_n_series(&base, 2);
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let fibonacci = fibonacci_g2_six_terms(x)?;
        let mut six = QuadExt::zero();
        for (e, sign) in g2.pattern.exponents().take(6) {
            six = six.checked_add(&g2.term_exact(e, sign, x)?)?;
        }
        let full = g2.eval_f64(x.to_f64())?;
        out.push(FibonacciSeriesPoint {
            x: x.clone(),
            six_terms_agree: six == fibonacci,
            fibonacci,
            constructed_six: six,
            constructed_full: full.value,
            tail_bound: full.tail_bound,
        });
    }
    Ok(out)
}
