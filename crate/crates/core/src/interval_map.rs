//! Piecewise Möbius maps of [0, 1], stored by their inverse branches.
//!
//! Cell `k` is `[a_k, a_{k+1})` (the last cell is closed) and `V_k` maps
//! [0, 1] onto it. The transfer operator always uses `|ω_k|`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::{mass_over, ApproxValue, Density, DensityValue};
use crate::error::{Error, Result};
use crate::moebius::{MoebiusBranch, MoebiusF64};
use crate::scalar::{ProjectiveScalar, QuadExt};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct PiecewiseMoebiusMap {
    partition: Vec<QuadExt>,
    branches: Vec<MoebiusBranch>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    partition: Vec<QuadExt>,
    branches: Vec<MoebiusBranch>,
    labels: Vec<String>,
}

impl TryFrom<RawMap> for PiecewiseMoebiusMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        Self::new(raw.partition, raw.branches, raw.labels)
    }
}

impl From<PiecewiseMoebiusMap> for RawMap {
    fn from(map: PiecewiseMoebiusMap) -> Self {
        RawMap {
            partition: map.partition,
            branches: map.branches,
            labels: map.labels,
        }
    }
}

impl PiecewiseMoebiusMap {
    /// Checks only the shape (lengths); use [`validate`](Self::validate) for the rest.
    pub fn new(partition: Vec<QuadExt>, branches: Vec<MoebiusBranch>, labels: Vec<String>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidMap("no branches".into()));
        }
        if partition.len() != branches.len() + 1 {
            return Err(Error::InvalidMap(format!(
                "{} partition points for {} branches",
                partition.len(),
                branches.len()
            )));
        }
        if labels.len() != branches.len() {
            return Err(Error::InvalidMap(format!(
                "{} labels for {} branches",
                labels.len(),
                branches.len()
            )));
        }
        Ok(Self {
            partition,
            branches,
            labels,
        })
    }

    /// Builds the partition from the branch images, ordering branches by image.
    pub fn from_branches(mut branches: Vec<(String, MoebiusBranch)>) -> Result<Self> {
        let mut keyed = Vec::with_capacity(branches.len());
        for (label, branch) in branches.drain(..) {
            let (lo, hi) = image_of_unit(&branch)?;
            keyed.push((lo, hi, label, branch));
        }
        keyed.sort_by(|x, y| x.0.checked_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut partition = vec![keyed[0].0.clone()];
        partition.extend(keyed.iter().map(|k| k.1.clone()));
        let (labels, branches) = keyed.into_iter().map(|k| (k.2, k.3)).unzip();
        Self::new(partition, branches, labels)
    }

    pub fn partition(&self) -> &[QuadExt] {
        &self.partition
    }

    pub fn branches(&self) -> &[MoebiusBranch] {
        &self.branches
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branch(&self, label: &str) -> Option<&MoebiusBranch> {
        self.index_of(label).map(|i| &self.branches[i])
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let zero = QuadExt::zero();
        let one = QuadExt::one();
        if self.partition.first() != Some(&zero) {
            issues.push(format!("partition starts at {} instead of 0", self.partition[0]));
        }
        if self.partition.last() != Some(&one) {
            issues.push(format!("partition ends at {} instead of 1", self.partition[self.partition.len() - 1]));
        }
        for w in self.partition.windows(2) {
            match w[0].checked_cmp(&w[1]) {
                Ok(o) if o.is_lt() => {}
                Ok(_) => issues.push(format!("partition not increasing at {} >= {}", w[0], w[1])),
                Err(e) => issues.push(format!("partition points {} and {} not comparable: {e}", w[0], w[1])),
            }
        }
        let branches = self
            .branches
            .iter()
            .enumerate()
            .map(|(k, v)| self.check_branch(k, v))
            .collect::<Vec<_>>();
        ValidationReport {
            valid: issues.is_empty() && branches.iter().all(|b| b.passed),
            issues,
            branches,
        }
    }

    fn check_branch(&self, k: usize, v: &MoebiusBranch) -> BranchCheck {
        let mut issues = Vec::new();
        let (left, right) = (&self.partition[k], &self.partition[k + 1]);
        // a + b·x keeps its sign on [0, 1] iff it does at both ends
        let d0 = v.a().signum();
        let d1 = (v.a() + v.b()).signum();
        if d0 == 0 || d1 == 0 || d0 != d1 {
            issues.push(format!("denominator {} + {}x vanishes on [0, 1]", v.a(), v.b()));
        }
        let increasing = v.is_increasing();
        let (at0, at1) = if increasing { (left, right) } else { (right, left) };
        for (x, expected) in [(0, at0), (1, at1)] {
            match v.eval(&ProjectiveScalar::finite(x)) {
                Ok(ProjectiveScalar::Finite(y)) if &y == expected => {}
                Ok(y) => issues.push(format!(
                    "V_{}({x}) = {y} but expected {expected}",
                    self.labels[k]
                )),
                Err(e) => issues.push(format!("V_{}({x}) failed: {e}", self.labels[k])),
            }
        }
        BranchCheck {
            index: k,
            label: self.labels[k].clone(),
            increasing,
            passed: issues.is_empty(),
            issues,
        }
    }

    pub fn type_signature(&self) -> TypeSignature {
        TypeSignature(
            self.branches
                .iter()
                .map(|b| if b.is_increasing() { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    }

    /// `T(x)` and the index of the cell containing `x`.
    pub fn forward(&self, x: &QuadExt) -> Result<(QuadExt, usize)> {
        let zero = QuadExt::zero();
        let one = QuadExt::one();
        if x.checked_cmp(&zero)?.is_lt() || x.checked_cmp(&one)?.is_gt() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let mut k = self.len() - 1;
        for i in 0..self.len() {
            if x.checked_cmp(&self.partition[i + 1])?.is_lt() {
                k = i;
                break;
            }
        }
        let y = self.branches[k].inverse().eval_finite(x)?;
        Ok((y, k))
    }

    pub fn to_f64(&self) -> MapF64 {
        MapF64 {
            partition: self.partition.iter().map(QuadExt::to_f64).collect(),
            branches: self.branches.iter().map(MoebiusBranch::to_f64).collect(),
            inverses: self.branches.iter().map(|b| b.to_f64().inverse()).collect(),
        }
    }

    /// `(P g)(x) = Σ_k g(V_k x)·|ω_k(x)|`.
    pub fn transfer_eval(&self, g: &Density, x: &QuadExt) -> Result<DensityValue> {
        let mut exact = Some(QuadExt::zero());
        let mut approx = ApproxValue::exact(0.0);
        for v in &self.branches {
            let y = v.eval_finite(x)?;
            let w = v.jacobian(x, true)?;
            match g.eval(&y)? {
                DensityValue::Exact(value) => {
                    let term = value.checked_mul(&w)?;
                    approx.value += term.to_f64();
                    if let Some(sum) = exact.as_mut() {
                        *sum = sum.checked_add(&term)?;
                    }
                }
                DensityValue::Approx(a) => {
                    let wf = w.to_f64();
                    exact = None;
                    approx.value += a.value * wf;
                    approx.tail_bound += a.tail_bound * wf;
                    approx.bound_verified &= a.bound_verified;
                    approx.terms += a.terms;
                }
            }
        }
        Ok(match exact {
            Some(v) => DensityValue::Exact(v),
            None => DensityValue::Approx(approx),
        })
    }

    /// Relative residual `|P g − g| / |g|` on a grid; poles are skipped and listed.
    pub fn invariance_residual(&self, g: &Density, grid: &[QuadExt]) -> ResidualReport {
        let mut points = Vec::with_capacity(grid.len());
        let mut skipped = Vec::new();
        for x in grid {
            match self.residual_at(g, x) {
                Ok(p) => points.push(p),
                Err(e) => skipped.push(SkippedPoint {
                    x: x.clone(),
                    reason: e.to_string(),
                }),
            }
        }
        ResidualReport::from_points(points, skipped)
    }

    fn residual_at(&self, g: &Density, x: &QuadExt) -> Result<ResidualPoint> {
        let value = g.eval(x)?;
        let transfer = self.transfer_eval(g, x)?;
        Ok(match (&value, &transfer) {
            (DensityValue::Exact(gv), DensityValue::Exact(pv)) => {
                if gv.is_zero() {
                    return Err(Error::PoleAtPoint(format!("{x} (density vanishes)")));
                }
                let rel = pv.checked_sub(gv)?.checked_div(gv)?.abs();
                ResidualPoint {
                    x: x.clone(),
                    density: gv.to_f64(),
                    transfer: pv.to_f64(),
                    residual: rel.to_f64(),
                    exact_zero: Some(rel.is_zero()),
                    tail_bound: 0.0,
                    bound_verified: true,
                }
            }
            _ => {
                let (gv, pv) = (value.to_f64(), transfer.to_f64());
                if gv == 0.0 {
                    return Err(Error::PoleAtPoint(format!("{x} (density vanishes)")));
                }
                ResidualPoint {
                    x: x.clone(),
                    density: gv,
                    transfer: pv,
                    residual: ((pv - gv) / gv).abs(),
                    exact_zero: None,
                    tail_bound: (value.tail_bound() + transfer.tail_bound()) / gv.abs(),
                    bound_verified: value.bound_verified() && transfer.bound_verified(),
                }
            }
        })
    }

    /// Normalised histogram of a dithered floating-point orbit.
    ///
    /// Plain `f64` orbits of these maps lock onto short cycles after a few
    /// dozen steps, so each step adds a uniform perturbation of size
    /// `options.dither` drawn from a seeded generator.
    pub fn orbit_histogram(&self, x0: f64, options: &OrbitOptions) -> Result<Histogram> {
        let map = self.to_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut counts = vec![0u64; options.bins];
        let mut x = x0;
        let total = options.burn_in + options.iterations;
        for i in 0..total {
            let mut y = map.forward(x);
            if !y.is_finite() || !(-ESCAPE_TOLERANCE..=1.0 + ESCAPE_TOLERANCE).contains(&y) {
                return Err(Error::OrbitEscaped { iteration: i, value: y });
            }
            if options.dither > 0.0 {
                y += options.dither * rng.gen_range(-1.0..=1.0);
            }
            // reflect back into [0, 1]
            if y < 0.0 {
                y = -y;
            }
            if y > 1.0 {
                y = 2.0 - y;
            }
            x = y.clamp(0.0, 1.0);
            if i >= options.burn_in && options.bins > 0 {
                let bin = ((x * options.bins as f64) as usize).min(options.bins - 1);
                counts[bin] += 1;
            }
        }
        Ok(Histogram::from_counts(counts, options.iterations))
    }
}

const ESCAPE_TOLERANCE: f64 = 1e-9;

/// Image of [0, 1] under a branch, as an ordered pair.
pub(crate) fn image_of_unit(v: &MoebiusBranch) -> Result<(QuadExt, QuadExt)> {
    let y0 = v.eval_finite(&QuadExt::zero())?;
    let y1 = v.eval_finite(&QuadExt::one())?;
    QuadExt::min_max(&y0, &y1)
}

impl fmt::Display for PiecewiseMoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<_> = self.partition.iter().map(ToString::to_string).collect();
        writeln!(f, "partition {}", cells.join(" < "))?;
        for (label, v) in self.labels.iter().zip(&self.branches) {
            writeln!(f, "  V_{label} x = {v}")?;
        }
        Ok(())
    }
}

/// Floating-point copy of a map for orbit simulation.
#[derive(Clone, Debug)]
pub struct MapF64 {
    pub partition: Vec<f64>,
    pub branches: Vec<MoebiusF64>,
    pub inverses: Vec<MoebiusF64>,
}

impl MapF64 {
    pub fn cell(&self, x: f64) -> usize {
        let interior = &self.partition[1..self.partition.len() - 1];
        interior.partition_point(|a| *a <= x)
    }

    pub fn forward(&self, x: f64) -> f64 {
        self.inverses[self.cell(x)].eval(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSignature(pub Vec<Sign>);

impl TypeSignature {
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        inner
            .split(',')
            .map(|t| match t.trim() {
                "+" => Ok(Sign::Plus),
                "-" | "−" => Ok(Sign::Minus),
                other => Err(Error::parse(s, format!("bad sign {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TypeSignature)
    }
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: Vec<_> = self
            .0
            .iter()
            .map(|s| match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })
            .collect();
        write!(f, "({})", signs.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchCheck {
    pub index: usize,
    pub label: String,
    pub increasing: bool,
    pub passed: bool,
    pub issues: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<String>,
    pub branches: Vec<BranchCheck>,
}

impl ValidationReport {
    pub fn into_result(self) -> Result<()> {
        if self.valid {
            return Ok(());
        }
        let mut all = self.issues;
        all.extend(self.branches.into_iter().flat_map(|b| b.issues));
        Err(Error::ValidationFailed(all.join("; ")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub x: QuadExt,
    pub density: f64,
    pub transfer: f64,
    pub residual: f64,
    /// `Some` when the residual was computed exactly.
    pub exact_zero: Option<bool>,
    /// Relative error bound carried over from series truncation.
    pub tail_bound: f64,
    pub bound_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub x: QuadExt,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub points: Vec<ResidualPoint>,
    pub skipped: Vec<SkippedPoint>,
    pub max_residual: f64,
    pub max_tail_bound: f64,
    /// Every point was evaluated in exact arithmetic.
    pub exact: bool,
    /// Every point was evaluated exactly and its residual is 0.
    pub exact_zero: bool,
}

impl ResidualReport {
    pub fn from_points(points: Vec<ResidualPoint>, skipped: Vec<SkippedPoint>) -> Self {
        let exact = !points.is_empty() && points.iter().all(|p| p.exact_zero.is_some());
        Self {
            max_residual: points.iter().map(|p| p.residual).fold(0.0, f64::max),
            max_tail_bound: points.iter().map(|p| p.tail_bound).fold(0.0, f64::max),
            exact_zero: exact && points.iter().all(|p| p.exact_zero == Some(true)),
            exact,
            points,
            skipped,
        }
    }

    /// Exactly zero for exact evaluations, below `tolerance` otherwise.
    pub fn passes(&self, tolerance: f64) -> bool {
        if self.points.is_empty() {
            return false;
        }
        if self.exact {
            self.exact_zero
        } else {
            self.max_residual < tolerance
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value,transfer,residual,tail_bound\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e}\n",
                p.x.to_f64(),
                p.density,
                p.transfer,
                p.residual,
                p.tail_bound
            ));
        }
        out
    }
}

/// `k/(n − 1)` for `k = 0..n`.
pub fn default_grid(n: usize) -> Vec<QuadExt> {
    let n = n.max(2);
    (0..n)
        .map(|k| QuadExt::from_ratio(k as i64, (n - 1) as i64))
        .collect()
}

/// Points strictly inside (0, 1) only.
pub fn interior_grid(n: usize) -> Vec<QuadExt> {
    (1..=n)
        .map(|k| QuadExt::from_ratio(k as i64, (n + 1) as i64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitOptions {
    pub iterations: u64,
    pub bins: usize,
    pub burn_in: u64,
    pub seed: u64,
    pub dither: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            iterations: 1_000_000,
            bins: 10,
            burn_in: 1000,
            seed: 0,
            dither: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
    /// Normalised masses; all zero for an empty orbit.
    pub masses: Vec<f64>,
    pub samples: u64,
}

impl Histogram {
    pub fn from_counts(counts: Vec<u64>, samples: u64) -> Self {
        let masses = counts
            .iter()
            .map(|&c| if samples == 0 { 0.0 } else { c as f64 / samples as f64 })
            .collect();
        Self { counts, masses, samples }
    }

    pub fn is_empty(&self) -> bool {
        self.samples == 0
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Empirical bin masses against the density's masses over the bins
    /// inside `[window, 1 − window]`, both renormalised to 1 there.
    ///
    /// The renormalisation makes the comparison meaningful for infinite
    /// invariant measures.
    pub fn compare(&self, g: &Density, window: f64) -> Result<HistogramComparison> {
        let n = self.bins();
        let width = 1.0 / n as f64;
        let eps = 1e-12;
        let inside: Vec<usize> = (0..n)
            .filter(|&i| i as f64 * width >= window - eps && (i + 1) as f64 * width <= 1.0 - window + eps)
            .collect();
        let mut expected = Vec::with_capacity(inside.len());
        for &i in &inside {
            expected.push(mass_over(g, i as f64 * width, (i + 1) as f64 * width, 64)?);
        }
        let expected_total: f64 = expected.iter().sum();
        let empirical_total: f64 = inside.iter().map(|&i| self.masses[i]).sum();
        let bins = inside
            .iter()
            .zip(expected)
            .map(|(&i, e)| {
                let e = e / expected_total;
                let m = if empirical_total > 0.0 { self.masses[i] / empirical_total } else { 0.0 };
                BinComparison {
                    left: i as f64 * width,
                    right: (i + 1) as f64 * width,
                    empirical: m,
                    expected: e,
                    absolute_error: (m - e).abs(),
                    relative_error: (m - e).abs() / e.abs(),
                }
            })
            .collect::<Vec<_>>();
        Ok(HistogramComparison {
            window,
            max_absolute_error: bins.iter().map(|b| b.absolute_error).fold(0.0, f64::max),
            max_relative_error: bins.iter().map(|b| b.relative_error).fold(0.0, f64::max),
            bins,
        })
    }

    pub fn to_csv(&self) -> String {
        let n = self.bins();
        let mut out = String::from("bin_left,value\n");
        for (i, m) in self.masses.iter().enumerate() {
            out.push_str(&format!("{},{m}\n", i as f64 / n as f64));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinComparison {
    pub left: f64,
    pub right: f64,
    pub empirical: f64,
    pub expected: f64,
    pub absolute_error: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramComparison {
    pub window: f64,
    pub bins: Vec<BinComparison>,
    pub max_absolute_error: f64,
    pub max_relative_error: f64,
}

impl HistogramComparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,value,expected,relative_error\n");
        for b in &self.bins {
            out.push_str(&format!("{},{},{},{}\n", b.left, b.empirical, b.expected, b.relative_error));
        }
        out
    }
}
