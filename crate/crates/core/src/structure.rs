//! Extreme points, Hadamard convolution and convex combinations of the
//! negative-coefficient class.
//!
//! Every closed-class member `f` (coefficient sum `≤ 1 − β`) is the convex
//! combination `t_1 z + Σ t_n f_n + Σ s_n g_n` of
//! `f_n = z − (1−β)/φ(n) z^n` and `g_n = z + (1−β)/|ψ(n)| conj(z)^n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classes::{coefficient_deficiency, phi, psi, PSI_EPS};
use crate::error::{Error, Result};
use crate::params::ClassParams;
use crate::series::NegativeCoefficientForm;
use crate::TOLERANCE;

/// Weights of the extreme-point representation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightDecomposition {
    pub t1: f64,
    pub t: BTreeMap<u32, f64>,
    pub s: BTreeMap<u32, f64>,
}

impl WeightDecomposition {
    pub fn total(&self) -> f64 {
        self.t1 + self.t.values().sum::<f64>() + self.s.values().sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = std::iter::once(&self.t1)
            .chain(self.t.values())
            .chain(self.s.values())
            .all(|&w| w >= -1e-15 && w.is_finite());
        let total = self.total();
        if !nonneg || (total - 1.0).abs() > TOLERANCE {
            return Err(Error::WeightSum {
                expected: 1.0,
                actual: total,
            });
        }
        if self.t.keys().any(|&n| n < 2) || self.s.keys().any(|&n| n < 1) {
            return Err(Error::domain("t indices start at 2, s indices at 1"));
        }
        Ok(())
    }
}

/// `f_n(z) = z − (1−β)/φ(n) z^n`, `n ≥ 2`.
pub fn extreme_point_f(n: u32, p: &ClassParams) -> Result<NegativeCoefficientForm> {
    p.validate()?;
    let w = phi(n, p)?;
    NegativeCoefficientForm::new([(n, p.budget() / w)], [])
}

/// `g_n(z) = z + (1−β)/|ψ(n)| conj(z)^n`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoAnalyticExtremePoint {
    pub function: NegativeCoefficientForm,
    /// Set when `n = 1` and the coefficient reaches 1, so `|b_1| < 1` fails.
    pub univalence_violated: bool,
}

pub fn extreme_point_g(n: u32, p: &ClassParams) -> Result<CoAnalyticExtremePoint> {
    p.validate()?;
    let w = psi(n, p)?.abs();
    if w < PSI_EPS {
        return Err(Error::DegeneratePsi { n });
    }
    let coeff = p.budget() / w;
    Ok(CoAnalyticExtremePoint {
        function: NegativeCoefficientForm::new([], [(n, coeff)])?,
        univalence_violated: n == 1 && coeff >= 1.0,
    })
}

/// Weights `t_n = φ(n)|a_n|/(1−β)`, `s_n = |ψ(n)||b_n|/(1−β)` and
/// `t_1 = 1 − Σt − Σs`.
///
/// Accepts the closed class (sum `≤ 1 − β`), so extreme points decompose to
/// a single unit weight.
pub fn decompose(f: &NegativeCoefficientForm, p: &ClassParams) -> Result<WeightDecomposition> {
    p.validate()?;
    let budget = p.budget();
    let mut out = WeightDecomposition::default();
    for (&n, &m) in f.a_abs() {
        out.t.insert(n, phi(n, p)? * m / budget);
    }
    for (&n, &m) in f.b_abs() {
        let w = psi(n, p)?.abs();
        if w < PSI_EPS {
            return Err(Error::DegeneratePsi { n });
        }
        out.s.insert(n, w * m / budget);
    }
    let used = out.t.values().sum::<f64>() + out.s.values().sum::<f64>();
    if used > 1.0 + TOLERANCE / budget {
        return Err(Error::NotInClass {
            sum: used * budget,
            bound: budget,
        });
    }
    out.t1 = 1.0 - used;
    Ok(out)
}

/// Expands `t_1 z + Σ t_n f_n + Σ s_n g_n` back to coefficient form.
pub fn reconstruct(w: &WeightDecomposition, p: &ClassParams) -> Result<NegativeCoefficientForm> {
    p.validate()?;
    w.validate()?;
    let budget = p.budget();
    let mut a = Vec::with_capacity(w.t.len());
    for (&n, &t) in &w.t {
        a.push((n, budget * t.max(0.0) / phi(n, p)?));
    }
    let mut b = Vec::with_capacity(w.s.len());
    for (&n, &s) in &w.s {
        let weight = psi(n, p)?.abs();
        if weight < PSI_EPS {
            return Err(Error::DegeneratePsi { n });
        }
        b.push((n, budget * s.max(0.0) / weight));
    }
    NegativeCoefficientForm::new(a, b)
}

/// Hadamard product of magnitudes at matching indices.
pub fn convolve(f1: &NegativeCoefficientForm, f2: &NegativeCoefficientForm) -> NegativeCoefficientForm {
    let a = f1
        .a_abs()
        .iter()
        .filter_map(|(&n, &m)| f2.a_abs().get(&n).map(|&c| (n, m * c)));
    let b = f1
        .b_abs()
        .iter()
        .filter_map(|(&n, &m)| f2.b_abs().get(&n).map(|&d| (n, m * d)));
    NegativeCoefficientForm::new(a, b).expect("products of valid magnitudes are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionParams {
    pub lambda: f64,
    pub k: f64,
    pub nu: f64,
}

impl From<&ClassParams> for ConvolutionParams {
    fn from(p: &ClassParams) -> Self {
        ConvolutionParams {
            lambda: p.lambda,
            k: p.k,
            nu: p.nu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    pub alpha: f64,
    pub beta: f64,
    /// Deficiencies of the two factors at level α.
    pub factor_deficiency: [f64; 2],
    /// Deficiency of the product at level α.
    pub deficiency_alpha: f64,
    /// Deficiency of the product at level β.
    pub deficiency_beta: f64,
    /// Unmet hypotheses; when non-empty no closure claim is made.
    pub violations: Vec<String>,
    /// Closure holds at α (and hence at β). `None` when a hypothesis fails.
    pub closure_holds: Option<bool>,
}

/// Checks closure of the class at level `α` under convolution, and inclusion
/// in the class at level `β < α`.
///
/// Requires both factors in the class at level α and `|c_n|, |d_n| < 1` for
/// the second factor (both factors with `strict`).
pub fn check_convolution_closure(
    f1: &NegativeCoefficientForm,
    f2: &NegativeCoefficientForm,
    alpha: f64,
    beta: f64,
    params: ConvolutionParams,
    strict: bool,
) -> Result<ConvolutionReport> {
    if !(0.0 <= beta && beta < alpha && alpha < 1.0) {
        return Err(Error::Hypothesis(format!("need 0 <= beta < alpha < 1, got beta = {beta}, alpha = {alpha}")));
    }
    let at_alpha = ClassParams::new(alpha, params.lambda, params.k, params.nu)?;
    let at_beta = at_alpha.with_beta(beta)?;

    let mut violations = Vec::new();
    let mut bounded = vec![("second", f2)];
    if strict {
        bounded.insert(0, ("first", f1));
    }
    for (name, f) in bounded {
        if let Some((n, m)) = f.a_abs().iter().chain(f.b_abs()).find(|(_, &m)| m >= 1.0) {
            violations.push(format!("{name} factor has coefficient magnitude {m} >= 1 at index {n}"));
        }
    }
    let factor_deficiency = [
        coefficient_deficiency(f1, &at_alpha)?,
        coefficient_deficiency(f2, &at_alpha)?,
    ];
    for (name, d) in ["first", "second"].iter().zip(factor_deficiency) {
        if d <= TOLERANCE {
            violations.push(format!("{name} factor is not in the class at alpha (deficiency {d})"));
        }
    }
    let product = convolve(f1, f2);
    let deficiency_alpha = coefficient_deficiency(&product, &at_alpha)?;
    let deficiency_beta = coefficient_deficiency(&product, &at_beta)?;
    let closure_holds = violations
        .is_empty()
        .then_some(deficiency_alpha > TOLERANCE && deficiency_beta > TOLERANCE);
    Ok(ConvolutionReport {
        alpha,
        beta,
        factor_deficiency,
        deficiency_alpha,
        deficiency_beta,
        violations,
        closure_holds,
    })
}

/// `Σ t_i f_i` with `t_i ≥ 0`, `Σ t_i = 1`. Magnitudes combine linearly since
/// all members share the same sign pattern.
pub fn convex_combine(fs: &[NegativeCoefficientForm], ts: &[f64]) -> Result<NegativeCoefficientForm> {
    if fs.len() != ts.len() || fs.is_empty() {
        return Err(Error::domain(format!(
            "need one weight per function, got {} functions and {} weights",
            fs.len(),
            ts.len()
        )));
    }
    let total: f64 = ts.iter().sum();
    if ts.iter().any(|&t| !(t >= 0.0)) || (total - 1.0).abs() > TOLERANCE {
        return Err(Error::WeightSum {
            expected: 1.0,
            actual: total,
        });
    }
    let mut a: BTreeMap<u32, f64> = BTreeMap::new();
    let mut b: BTreeMap<u32, f64> = BTreeMap::new();
    for (f, &t) in fs.iter().zip(ts) {
        for (&n, &m) in f.a_abs() {
            *a.entry(n).or_default() += t * m;
        }
        for (&n, &m) in f.b_abs() {
            *b.entry(n).or_default() += t * m;
        }
    }
    NegativeCoefficientForm::new(a, b)
}
