//! Truncated harmonic series `f = h + conj(g)` with
//! `h(z) = z + Σ_{n≥2} a_n z^n` and `g(z) = Σ_{n≥1} b_n z^n`.
//!
//! Functions are finitely supported coefficient maps; there is no implicit
//! tail, so every coefficient sum in the crate is exact.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ClassParams;
use crate::specfn::gamma_ratio;

/// Default θ-step of the finite-difference functional.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Below this modulus `h'(z)` is treated as zero.
const SINGULAR_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HarmonicFunction {
    a: BTreeMap<u32, Complex64>,
    b: BTreeMap<u32, Complex64>,
}

impl HarmonicFunction {
    /// The identity `f(z) = z`.
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds `f` from `(n, a_n)` and `(n, b_n)` pairs. Zero coefficients are
    /// dropped; repeated indices are rejected.
    pub fn new(
        a: impl IntoIterator<Item = (u32, Complex64)>,
        b: impl IntoIterator<Item = (u32, Complex64)>,
    ) -> Result<Self> {
        Ok(HarmonicFunction {
            a: collect_coeffs(a, 2, "a")?,
            b: collect_coeffs(b, 1, "b")?,
        })
    }

    /// Shorthand for real coefficients.
    pub fn from_real(a: &[(u32, f64)], b: &[(u32, f64)]) -> Result<Self> {
        Self::new(
            a.iter().map(|&(n, c)| (n, Complex64::new(c, 0.0))),
            b.iter().map(|&(n, c)| (n, Complex64::new(c, 0.0))),
        )
    }

    pub fn a(&self) -> &BTreeMap<u32, Complex64> {
        &self.a
    }

    pub fn b(&self) -> &BTreeMap<u32, Complex64> {
        &self.b
    }

    pub fn a_coeff(&self, n: u32) -> Complex64 {
        self.a.get(&n).copied().unwrap_or_default()
    }

    pub fn b_coeff(&self, n: u32) -> Complex64 {
        self.b.get(&n).copied().unwrap_or_default()
    }

    /// Largest stored index in either part (1 for the identity).
    pub fn max_index(&self) -> u32 {
        let a = self.a.keys().next_back().copied().unwrap_or(1);
        let b = self.b.keys().next_back().copied().unwrap_or(1);
        a.max(b)
    }

    /// `|b_1| < 1`, the side condition on the co-analytic part.
    pub fn univalence_candidate(&self) -> bool {
        self.b_coeff(1).norm() < 1.0
    }

    /// `h(z)`.
    pub fn h(&self, z: Complex64) -> Complex64 {
        z + sparse_horner(&self.a, z)
    }

    /// `g(z)`.
    pub fn g(&self, z: Complex64) -> Complex64 {
        sparse_horner(&self.b, z)
    }

    /// Applies `c ↦ m(n)·c` to every stored coefficient.
    fn scale_by(&self, mut m: impl FnMut(u32) -> Result<f64>) -> Result<Self> {
        let mut out = HarmonicFunction::default();
        for (&n, &c) in &self.a {
            insert_nonzero(&mut out.a, n, c * m(n)?);
        }
        for (&n, &c) in &self.b {
            insert_nonzero(&mut out.b, n, c * m(n)?);
        }
        Ok(out)
    }
}

impl Add for &HarmonicFunction {
    type Output = HarmonicFunction;

    /// Adds the coefficient maps; the shared leading `z` is kept once.
    fn add(self, rhs: &HarmonicFunction) -> HarmonicFunction {
        let mut out = self.clone();
        for (&n, &c) in &rhs.a {
            let sum = out.a_coeff(n) + c;
            out.a.remove(&n);
            insert_nonzero(&mut out.a, n, sum);
        }
        for (&n, &c) in &rhs.b {
            let sum = out.b_coeff(n) + c;
            out.b.remove(&n);
            insert_nonzero(&mut out.b, n, sum);
        }
        out
    }
}

/// A function with the fixed sign pattern `a_n = −|a_n|`, `b_n = +|b_n|`,
/// stored by magnitudes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NegativeCoefficientForm {
    a_abs: BTreeMap<u32, f64>,
    b_abs: BTreeMap<u32, f64>,
}

impl NegativeCoefficientForm {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(
        a_abs: impl IntoIterator<Item = (u32, f64)>,
        b_abs: impl IntoIterator<Item = (u32, f64)>,
    ) -> Result<Self> {
        Ok(NegativeCoefficientForm {
            a_abs: collect_magnitudes(a_abs, 2, "a_abs")?,
            b_abs: collect_magnitudes(b_abs, 1, "b_abs")?,
        })
    }

    pub fn a_abs(&self) -> &BTreeMap<u32, f64> {
        &self.a_abs
    }

    pub fn b_abs(&self) -> &BTreeMap<u32, f64> {
        &self.b_abs
    }

    pub fn a_mag(&self, n: u32) -> f64 {
        self.a_abs.get(&n).copied().unwrap_or(0.0)
    }

    pub fn b_mag(&self, n: u32) -> f64 {
        self.b_abs.get(&n).copied().unwrap_or(0.0)
    }

    pub fn univalence_candidate(&self) -> bool {
        self.b_mag(1) < 1.0
    }

    pub fn max_index(&self) -> u32 {
        let a = self.a_abs.keys().next_back().copied().unwrap_or(1);
        let b = self.b_abs.keys().next_back().copied().unwrap_or(1);
        a.max(b)
    }

    /// The general-form view with `a_n = −|a_n|`, `b_n = |b_n|`.
    pub fn to_harmonic(&self) -> HarmonicFunction {
        HarmonicFunction {
            a: self
                .a_abs
                .iter()
                .map(|(&n, &m)| (n, Complex64::new(-m, 0.0)))
                .collect(),
            b: self
                .b_abs
                .iter()
                .map(|(&n, &m)| (n, Complex64::new(m, 0.0)))
                .collect(),
        }
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = |x: &BTreeMap<u32, f64>, y: &BTreeMap<u32, f64>| {
            x.keys()
                .chain(y.keys())
                .map(|n| {
                    (x.get(n).copied().unwrap_or(0.0) - y.get(n).copied().unwrap_or(0.0)).abs()
                })
                .fold(0.0, f64::max)
        };
        diff(&self.a_abs, &other.a_abs).max(diff(&self.b_abs, &other.b_abs))
    }
}

impl From<&NegativeCoefficientForm> for HarmonicFunction {
    fn from(f: &NegativeCoefficientForm) -> Self {
        f.to_harmonic()
    }
}

/// A point `z = r e^{iθ}` of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    z: Complex64,
    r: f64,
    theta: f64,
}

impl EvalPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if !(r < 1.0) {
            return Err(Error::OutsideDisk { re: z.re, im: z.im });
        }
        let mut theta = z.arg();
        if theta < 0.0 {
            theta += TAU;
        }
        if theta >= TAU {
            theta = 0.0;
        }
        Ok(EvalPoint { z, r, theta })
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::OutsideDisk {
                re: r * theta.cos(),
                im: r * theta.sin(),
            });
        }
        let theta = theta.rem_euclid(TAU);
        Ok(EvalPoint {
            z: Complex64::from_polar(r, theta),
            r,
            theta,
        })
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `f(z) = h(z) + conj(g(z))`.
pub fn evaluate(f: &HarmonicFunction, z: &EvalPoint) -> Complex64 {
    f.h(z.z) + f.g(z.z).conj()
}

/// `(h'(z), g'(z))`.
pub fn derivatives(f: &HarmonicFunction, z: &EvalPoint) -> (Complex64, Complex64) {
    let z = z.z;
    let dh = Complex64::new(1.0, 0.0) + sparse_horner_derivative(&f.a, z);
    let dg = sparse_horner_derivative(&f.b, z);
    (dh, dg)
}

/// `J_f(z) = |h'(z)|² − |g'(z)|²`.
pub fn jacobian(f: &HarmonicFunction, z: &EvalPoint) -> f64 {
    let (dh, dg) = derivatives(f, z);
    dh.norm_sqr() - dg.norm_sqr()
}

/// The dilatation `w(z) = g'(z)/h'(z)`.
pub fn dilatation(f: &HarmonicFunction, z: &EvalPoint) -> Result<Complex64> {
    let (dh, dg) = derivatives(f, z);
    if dh.norm() < SINGULAR_EPS {
        return Err(Error::Singular);
    }
    Ok(dg / dh)
}

/// The fractional operator: each `a_n`, `b_n` is multiplied by
/// `Γ(2−ν)Γ(n+1)/Γ(n+1−ν)`. The leading `z` is fixed since the weight at
/// `n = 1` is 1.
pub fn apply_operator(f: &HarmonicFunction, nu: f64) -> Result<HarmonicFunction> {
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::domain(format!("fractional order nu must lie in [0, 1), got {nu}")));
    }
    if nu == 0.0 {
        return Ok(f.clone());
    }
    f.scale_by(|n| gamma_ratio(n, nu))
}

/// The class functional
/// `E(z) = (1−λ) F/z + λ(1−k) F_θ/z_θ + λk F_θθ/z_θθ` with `F = Ω^ν f`,
/// summed in closed form.
///
/// Each of the three quotients is expanded separately: with `A_n`, `B_n` the
/// coefficients of `F`, a θ-derivative multiplies `z^n` by `i n` and
/// `conj(z)^n` by `−i n`, while `z_θ = iz`, `z_θθ = −z`.
///
/// `E(0)` is 1 when `b_1 = 0`; otherwise `conj(z)/z` has no limit and
/// [`Error::UndefinedAtOrigin`] is returned.
pub fn functional_e(f: &HarmonicFunction, p: &ClassParams, z: &EvalPoint) -> Result<Complex64> {
    PreparedFunctional::new(f, p)?.eval(z)
}

/// [`functional_e`] with the operator image and the mixing of the three
/// quotients folded into one coefficient list, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PreparedFunctional {
    // (n, mixed coefficient of z^{n-1})
    a: Vec<(u32, Complex64)>,
    // (n, mixed coefficient of conj(z)^n / z), already conjugated
    b: Vec<(u32, Complex64)>,
    b1_nonzero: bool,
}

impl PreparedFunctional {
    pub fn new(f: &HarmonicFunction, p: &ClassParams) -> Result<Self> {
        p.validate()?;
        let op = apply_operator(f, p.nu)?;
        let (w0, w1, w2) = (1.0 - p.lambda, p.lambda * (1.0 - p.k), p.lambda * p.k);
        // F/z, F_θ/z_θ and F_θθ/z_θθ carry the factors 1, ±n, n² per term
        let a = op
            .a
            .iter()
            .map(|(&n, &c)| {
                let nf = f64::from(n);
                (n, c * (w0 + w1 * nf + w2 * nf * nf))
            })
            .collect();
        let b = op
            .b
            .iter()
            .map(|(&n, &c)| {
                let nf = f64::from(n);
                (n, c.conj() * (w0 - w1 * nf + w2 * nf * nf))
            })
            .collect();
        Ok(PreparedFunctional {
            a,
            b,
            b1_nonzero: f.b_coeff(1) != Complex64::default(),
        })
    }

    pub fn eval(&self, z: &EvalPoint) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        if z.r == 0.0 {
            return if self.b1_nonzero {
                Err(Error::UndefinedAtOrigin)
            } else {
                Ok(one)
            };
        }
        let zc = z.z;
        let mut e = one;

        let mut pow = one; // z^{n-1}
        let mut last = 1u32;
        for &(n, c) in &self.a {
            pow *= zc.powu(n - last);
            last = n;
            e += c * pow;
        }

        let mut pow = zc.conj() / zc; // conj(z)^n / z
        let mut last = 1u32;
        for &(n, c) in &self.b {
            pow *= zc.conj().powu(n - last);
            last = n;
            e += c * pow;
        }
        Ok(e)
    }
}

/// [`functional_e`] with the θ-derivatives of `Ω^ν f` replaced by
/// five-point central differences at fixed `r`.
///
/// Only the non-trivial part `Ω^ν f − z` is differenced; the leading `z`
/// contributes `z/z = z_θ/z_θ = z_θθ/z_θθ = 1` exactly. Agrees with the closed
/// form to `O(step⁴)` plus roundoff of order `ε/step²`.
pub fn functional_e_fd(
    f: &HarmonicFunction,
    p: &ClassParams,
    z: &EvalPoint,
    step: f64,
) -> Result<Complex64> {
    p.validate()?;
    if !(step > 0.0 && step <= 1e-3) {
        return Err(Error::domain(format!("finite-difference step must lie in (0, 1e-3], got {step}")));
    }
    if z.r == 0.0 {
        return Err(Error::domain("finite-difference functional needs z != 0"));
    }
    let op = apply_operator(f, p.nu)?;
    let rest = |theta: f64| {
        let w = Complex64::from_polar(z.r, theta);
        sparse_horner(&op.a, w) + sparse_horner(&op.b, w).conj()
    };
    let t = z.theta;
    let (m2, m1, c0, p1, p2) = (
        rest(t - 2.0 * step),
        rest(t - step),
        rest(t),
        rest(t + step),
        rest(t + 2.0 * step),
    );
    let d1 = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * step);
    let d2 = (-m2 - p2 + (p1 + m1) * 16.0 - c0 * 30.0) / (12.0 * step * step);

    let zc = z.z;
    let (dz, ddz) = (Complex64::new(0.0, 1.0) * zc, -zc);
    let one = Complex64::new(1.0, 0.0);
    Ok(one + c0 / zc * (1.0 - p.lambda) + d1 / dz * (p.lambda * (1.0 - p.k)) + d2 / ddz * (p.lambda * p.k))
}

/// `Σ c_n z^n` over a sparse map, by nested multiplication from the top
/// index down.
fn sparse_horner(coeffs: &BTreeMap<u32, Complex64>, z: Complex64) -> Complex64 {
    let mut acc = Complex64::default();
    let mut prev: Option<u32> = None;
    for (&n, &c) in coeffs.iter().rev() {
        if let Some(p) = prev {
            acc *= z.powu(p - n);
        }
        acc += c;
        prev = Some(n);
    }
    match prev {
        Some(lowest) => acc * z.powu(lowest),
        None => acc,
    }
}

/// `Σ n c_n z^{n−1}` over a sparse map.
fn sparse_horner_derivative(coeffs: &BTreeMap<u32, Complex64>, z: Complex64) -> Complex64 {
    let mut acc = Complex64::default();
    let mut prev: Option<u32> = None;
    for (&n, &c) in coeffs.iter().rev() {
        if let Some(p) = prev {
            acc *= z.powu(p - n);
        }
        acc += c * f64::from(n);
        prev = Some(n);
    }
    match prev {
        Some(lowest) => acc * z.powu(lowest - 1),
        None => acc,
    }
}

fn insert_nonzero(map: &mut BTreeMap<u32, Complex64>, n: u32, c: Complex64) {
    if c != Complex64::default() {
        map.insert(n, c);
    }
}

fn collect_coeffs(
    items: impl IntoIterator<Item = (u32, Complex64)>,
    min_index: u32,
    part: &str,
) -> Result<BTreeMap<u32, Complex64>> {
    let mut out = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (n, c) in items {
        if n < min_index {
            return Err(Error::domain(format!("{part}: index {n} below minimum {min_index}")));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::domain(format!("{part}: coefficient {n} is not finite")));
        }
        if !seen.insert(n) {
            return Err(Error::domain(format!("{part}: duplicate index {n}")));
        }
        insert_nonzero(&mut out, n, c);
    }
    Ok(out)
}

fn collect_magnitudes(
    items: impl IntoIterator<Item = (u32, f64)>,
    min_index: u32,
    part: &str,
) -> Result<BTreeMap<u32, f64>> {
    let mut out = BTreeMap::new();
    for (n, m) in items {
        if n < min_index {
            return Err(Error::domain(format!("{part}: index {n} below minimum {min_index}")));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::domain(format!("{part}: magnitude at {n} must be finite and >= 0, got {m}")));
        }
        if out.contains_key(&n) {
            return Err(Error::domain(format!("{part}: duplicate index {n}")));
        }
        if m > 0.0 {
            out.insert(n, m);
        }
    }
    Ok(out)
}
