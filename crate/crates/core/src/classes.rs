//! Coefficient weights φ, ψ and the membership certificates built on them.
//!
//! For `f = h + conj(g)` the class functional expands as
//! `E(z) = 1 + Σ φ(n) a_n z^{n−1} + Σ ψ(n) b_n conj(z)^n / z`, with
//!
//! ```text
//! φ(n) = [1 + λ(n−1)(1+nk)] · Γ(2−ν)Γ(n+1)/Γ(n+1−ν)
//! ψ(n) = [1 − λ(n+1)(1−nk)] · Γ(2−ν)Γ(n+1)/Γ(n+1−ν)
//! ```
//!
//! so `Σ φ|a_n| + Σ |ψ||b_n| < 1 − β` forces `Re E > β`. For the
//! negative-coefficient form the converse also holds.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ClassParams;
use crate::series::{HarmonicFunction, NegativeCoefficientForm};
use crate::specfn::{beta, gamma_ratio};
use crate::TOLERANCE;

/// Below this `|ψ(n)|` the co-analytic index `n` carries no constraint.
pub const PSI_EPS: f64 = 1e-14;

/// `φ(n)` for `n ≥ 2`.
pub fn phi(n: u32, p: &ClassParams) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("phi is defined for n >= 2, got {n}")));
    }
    let nf = f64::from(n);
    let bracket = 1.0 + p.lambda * (nf - 1.0) * (1.0 + nf * p.k);
    Ok(bracket * gamma_ratio(n, p.nu)?)
}

/// Signed `ψ(n)` for `n ≥ 1`. The coefficient bounds use `|ψ|`.
pub fn psi(n: u32, p: &ClassParams) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain(format!("psi is defined for n >= 1, got {n}")));
    }
    let nf = f64::from(n);
    let bracket = 1.0 - p.lambda * (nf + 1.0) * (1.0 - nf * p.k);
    Ok(bracket * gamma_ratio(n, p.nu)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    pub n: u32,
    /// Absent at `n = 1`, where the analytic part has the fixed leading term.
    pub phi: Option<f64>,
    pub psi_signed: f64,
}

pub fn weight_pair(n: u32, p: &ClassParams) -> Result<WeightPair> {
    Ok(WeightPair {
        n,
        phi: if n >= 2 { Some(phi(n, p)?) } else { None },
        psi_signed: psi(n, p)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    A,
    B,
}

/// One weighted term `φ(n)|a_n|` or `|ψ(n)||b_n|` of the coefficient sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermContribution {
    pub n: u32,
    pub part: Part,
    pub contribution: f64,
    /// `ψ(n) = 0`: the coefficient does not enter the bound.
    pub unconstrained: bool,
}

/// Anything with coefficient magnitudes `|a_n|`, `|b_n|`.
pub trait CoefficientMagnitudes {
    fn a_magnitudes(&self) -> Vec<(u32, f64)>;
    fn b_magnitudes(&self) -> Vec<(u32, f64)>;
}

impl CoefficientMagnitudes for HarmonicFunction {
    fn a_magnitudes(&self) -> Vec<(u32, f64)> {
        self.a().iter().map(|(&n, c)| (n, c.norm())).collect()
    }

    fn b_magnitudes(&self) -> Vec<(u32, f64)> {
        self.b().iter().map(|(&n, c)| (n, c.norm())).collect()
    }
}

impl CoefficientMagnitudes for NegativeCoefficientForm {
    fn a_magnitudes(&self) -> Vec<(u32, f64)> {
        self.a_abs().iter().map(|(&n, &m)| (n, m)).collect()
    }

    fn b_magnitudes(&self) -> Vec<(u32, f64)> {
        self.b_abs().iter().map(|(&n, &m)| (n, m)).collect()
    }
}

/// Per-term contributions to `Σ φ|a_n| + Σ |ψ||b_n|`, ordered a-part first.
pub fn weighted_terms<F: CoefficientMagnitudes + ?Sized>(
    f: &F,
    p: &ClassParams,
) -> Result<Vec<TermContribution>> {
    p.validate()?;
    let mut terms = Vec::new();
    for (n, m) in f.a_magnitudes() {
        terms.push(TermContribution {
            n,
            part: Part::A,
            contribution: phi(n, p)? * m,
            unconstrained: false,
        });
    }
    for (n, m) in f.b_magnitudes() {
        let w = psi(n, p)?.abs();
        let unconstrained = w < PSI_EPS;
        terms.push(TermContribution {
            n,
            part: Part::B,
            contribution: if unconstrained { 0.0 } else { w * m },
            unconstrained,
        });
    }
    Ok(terms)
}

/// `(1 − β) − [Σ φ(n)|a_n| + Σ |ψ(n)||b_n|]`. Positive means the bound holds
/// strictly.
pub fn coefficient_deficiency<F: CoefficientMagnitudes + ?Sized>(
    f: &F,
    p: &ClassParams,
) -> Result<f64> {
    let terms = weighted_terms(f, p)?;
    Ok(p.budget() - terms.iter().map(|t| t.contribution).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The sufficient bound holds for a general-form function.
    MemberSufficient,
    /// The exact bound holds for a negative-coefficient function.
    MemberIff,
    /// The exact bound fails for a negative-coefficient function.
    NonMember,
    /// The coefficient sum equals `1 − β` within tolerance.
    Boundary,
    /// The sufficient bound fails for a general-form function; no claim.
    Inconclusive,
}

impl Verdict {
    pub fn is_member(self) -> bool {
        matches!(self, Verdict::MemberSufficient | Verdict::MemberIff)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::MemberSufficient => "member_sufficient",
            Verdict::MemberIff => "member_iff",
            Verdict::NonMember => "non_member",
            Verdict::Boundary => "boundary",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub deficiency: f64,
    pub verdict: Verdict,
    pub per_term: Vec<TermContribution>,
    pub params: ClassParams,
}

impl MembershipReport {
    pub fn unconstrained_indices(&self) -> Vec<u32> {
        self.per_term
            .iter()
            .filter(|t| t.unconstrained)
            .map(|t| t.n)
            .collect()
    }
}

fn report<F: CoefficientMagnitudes + ?Sized>(
    f: &F,
    p: &ClassParams,
    classify: impl Fn(f64) -> Verdict,
) -> Result<MembershipReport> {
    let per_term = weighted_terms(f, p)?;
    let deficiency = p.budget() - per_term.iter().map(|t| t.contribution).sum::<f64>();
    Ok(MembershipReport {
        deficiency,
        verdict: classify(deficiency),
        per_term,
        params: *p,
    })
}

/// One-sided certificate for a general (complex-coefficient) function.
///
/// A failed bound yields [`Verdict::Inconclusive`], never `NonMember`.
pub fn is_member_sufficient(f: &HarmonicFunction, p: &ClassParams) -> Result<MembershipReport> {
    if !f.univalence_candidate() {
        return Err(Error::NotUnivalenceCandidate(f.b_coeff(1).norm()));
    }
    report(f, p, |d| {
        if d > TOLERANCE {
            Verdict::MemberSufficient
        } else if d >= -TOLERANCE {
            Verdict::Boundary
        } else {
            Verdict::Inconclusive
        }
    })
}

/// Exact membership test for the negative-coefficient subclass.
pub fn is_member_negative_class(
    f: &NegativeCoefficientForm,
    p: &ClassParams,
) -> Result<MembershipReport> {
    if !f.univalence_candidate() {
        return Err(Error::NotUnivalenceCandidate(f.b_mag(1)));
    }
    report(f, p, |d| {
        if d > TOLERANCE {
            Verdict::MemberIff
        } else if d < -TOLERANCE {
            Verdict::NonMember
        } else {
            Verdict::Boundary
        }
    })
}

/// Parameter specialisations with their own closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Specialization {
    /// `λ = 0`: plain `Re Ω^ν f / z > β`.
    Lambda0,
    /// `λ = 1`: only the θ-derivative quotients.
    Lambda1,
    /// `k = 1`: first and second quotients coincide in weight.
    K1,
    /// `k = 0`: no second θ-derivative.
    K0,
}

impl std::str::FromStr for Specialization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda0" => Ok(Specialization::Lambda0),
            "lambda1" => Ok(Specialization::Lambda1),
            "k1" => Ok(Specialization::K1),
            "k0" => Ok(Specialization::K0),
            other => Err(Error::Parse(format!("unknown specialization {other:?}"))),
        }
    }
}

/// Evaluates the specialised weight formulas, written through
/// `n(n−1)B(n−1, 2−ν)` (taken as 1 at `n = 1`):
///
/// | variant | φ bracket | ψ bracket |
/// |---|---|---|
/// | λ = 0 | 1 | 1 |
/// | λ = 1 | n(1 − k + nk) | n(nk + k − 1) |
/// | k = 1 | 1 + λ(n² − 1) | 1 + λ(n² − 1) |
/// | k = 0 | 1 + λ(n − 1) | 1 − λ(n + 1) |
pub fn specialized_weights(variant: Specialization, n: u32, p: &ClassParams) -> Result<WeightPair> {
    p.validate()?;
    if n < 1 {
        return Err(Error::domain("specialized weights need n >= 1"));
    }
    let pinned = match variant {
        Specialization::Lambda0 => (p.lambda == 0.0, "lambda = 0"),
        Specialization::Lambda1 => (p.lambda == 1.0, "lambda = 1"),
        Specialization::K1 => (p.k == 1.0, "k = 1"),
        Specialization::K0 => (p.k == 0.0, "k = 0"),
    };
    if !pinned.0 {
        return Err(Error::VariantMismatch {
            variant: variant_name(variant),
            requirement: pinned.1,
        });
    }
    let nf = f64::from(n);
    let base = if n == 1 {
        1.0
    } else {
        nf * (nf - 1.0) * beta(nf - 1.0, 2.0 - p.nu)?
    };
    let (l, k) = (p.lambda, p.k);
    let (phi_bracket, psi_bracket) = match variant {
        Specialization::Lambda0 => (1.0, 1.0),
        Specialization::Lambda1 => (nf * (1.0 - k + nf * k), nf * (nf * k + k - 1.0)),
        Specialization::K1 => {
            let w = 1.0 + l * (nf * nf - 1.0);
            (w, w)
        }
        Specialization::K0 => (1.0 + l * (nf - 1.0), 1.0 - l * (nf + 1.0)),
    };
    Ok(WeightPair {
        n,
        phi: if n >= 2 { Some(phi_bracket * base) } else { None },
        psi_signed: psi_bracket * base,
    })
}

fn variant_name(v: Specialization) -> &'static str {
    match v {
        Specialization::Lambda0 => "lambda0",
        Specialization::Lambda1 => "lambda1",
        Specialization::K1 => "k1",
        Specialization::K0 => "k0",
    }
}

/// Boundary function `a_n = γ_n/φ(n)`, `b_n = δ_n/|ψ(n)|` for weights with
/// `Σ|γ_n| + Σ|δ_n| = 1 − β`; its coefficient sum is exactly `1 − β`.
pub fn sharp_function(
    p: &ClassParams,
    gamma: &BTreeMap<u32, Complex64>,
    delta: &BTreeMap<u32, Complex64>,
) -> Result<HarmonicFunction> {
    p.validate()?;
    let total: f64 = gamma.values().chain(delta.values()).map(|c| c.norm()).sum();
    if (total - p.budget()).abs() > TOLERANCE {
        return Err(Error::WeightSum {
            expected: p.budget(),
            actual: total,
        });
    }
    let mut a = Vec::with_capacity(gamma.len());
    for (&n, &g) in gamma {
        a.push((n, g / phi(n, p)?));
    }
    let mut b = Vec::with_capacity(delta.len());
    for (&n, &d) in delta {
        let w = psi(n, p)?.abs();
        if w < PSI_EPS {
            if d != Complex64::default() {
                return Err(Error::DegeneratePsi { n });
            }
            continue;
        }
        b.push((n, d / w));
    }
    HarmonicFunction::new(a, b)
}
