//! Numerical checks of the coefficient bounds: grid minimisation of
//! `Re E(z)`, seeded generation of members and violators, and the radial
//! witness search for the necessity direction.
//!
//! Sampling never proves anything; a passing report means no counterexample
//! was found on the stated grid.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::{coefficient_deficiency, phi, psi, weighted_terms, Part, PSI_EPS};
use crate::error::{Error, Result};
use crate::params::ClassParams;
use crate::series::{jacobian, EvalPoint, HarmonicFunction, NegativeCoefficientForm, PreparedFunctional};

/// Polar sampling lattice `r_i e^{2πij/A}` of the open unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles: u32,
    tag: String,
}

impl DiskGrid {
    pub const STANDARD_TAG: &'static str = "standard-v1";

    pub fn new(radii: Vec<f64>, angles: u32, tag: impl Into<String>) -> Result<Self> {
        if angles < 8 {
            return Err(Error::domain(format!("grid needs at least 8 angles, got {angles}")));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::domain("grid radii must lie in (0, 1)"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("grid radii must be strictly increasing"));
        }
        Ok(DiskGrid {
            radii,
            angles,
            tag: tag.into(),
        })
    }

    /// Radii `0.1, 0.2, …, 0.9, 0.95, 0.995` with 128 angles.
    pub fn standard() -> Self {
        let mut radii: Vec<f64> = (1..=9).map(|i| f64::from(i) / 10.0).collect();
        radii.extend([0.95, 0.995]);
        DiskGrid {
            radii,
            angles: 128,
            tag: Self::STANDARD_TAG.to_string(),
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> u32 {
        self.angles
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles as usize
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Grid points in index order: radius-major, then increasing angle.
    pub fn points(&self) -> impl Iterator<Item = EvalPoint> + '_ {
        let a = self.angles;
        self.radii.iter().flat_map(move |&r| {
            (0..a).map(move |j| {
                EvalPoint::from_polar(r, TAU * f64::from(j) / f64::from(a))
                    .expect("grid radii lie in (0, 1)")
            })
        })
    }
}

/// Minimum of `Re E` over the grid and the first point attaining it.
///
/// Returns `(+∞, None)` on an empty grid.
pub fn min_real_e(
    f: &HarmonicFunction,
    p: &ClassParams,
    grid: &DiskGrid,
) -> Result<(f64, Option<EvalPoint>)> {
    let functional = PreparedFunctional::new(f, p)?;
    let mut best = (f64::INFINITY, None);
    for z in grid.points() {
        let v = functional.eval(&z)?.re;
        if v < best.0 {
            best = (v, Some(z));
        }
    }
    Ok(best)
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub r: f64,
    pub theta: f64,
    pub e: Complex64,
    pub jacobian: f64,
}

/// `E(z)` and the Jacobian of `f` at every grid point, in grid order.
pub fn sample_grid(f: &HarmonicFunction, p: &ClassParams, grid: &DiskGrid) -> Result<Vec<GridSample>> {
    let functional = PreparedFunctional::new(f, p)?;
    grid.points()
        .map(|z| {
            Ok(GridSample {
                r: z.r(),
                theta: z.theta(),
                e: functional.eval(&z)?,
                jacobian: jacobian(f, &z),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub case: usize,
    pub r: f64,
    pub theta: f64,
    pub re_e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub cases_run: usize,
    pub cases_passed: usize,
    /// Minimum over cases of `min_z Re E − β`.
    pub worst_margin: f64,
    /// First failing case, present iff some case failed.
    pub witness: Option<Witness>,
    pub seed: u64,
    pub grid: String,
    pub params: ClassParams,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.cases_passed == self.cases_run
    }
}

/// Seed of case `i` in a suite seeded with `seed`.
pub fn case_seed(seed: u64, i: usize) -> u64 {
    // splitmix64 finaliser
    let mut x = seed ^ (i as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Default highest index drawn by the suites.
pub const SUITE_MAX_INDEX: u32 = 8;

/// Draws `cases` random functions with positive deficiency, rotates every
/// coefficient by a random phase (the deficiency only sees magnitudes) and
/// checks `min Re E > β` on the grid.
pub fn verify_sufficiency(
    p: &ClassParams,
    cases: usize,
    seed: u64,
    grid: &DiskGrid,
) -> Result<VerificationReport> {
    p.validate()?;
    if cases == 0 {
        return Err(Error::domain("verification needs at least one case"));
    }
    let mut report = VerificationReport {
        cases_run: 0,
        cases_passed: 0,
        worst_margin: f64::INFINITY,
        witness: None,
        seed,
        grid: grid.tag().to_string(),
        params: *p,
    };
    for i in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, i));
        let member = draw_member(p, &mut rng, SUITE_MAX_INDEX, 0.5);
        let f = with_random_phases(&member, &mut rng);
        let (min, at) = min_real_e(&f, p, grid)?;
        let margin = min - p.beta;
        report.cases_run += 1;
        if margin > 0.0 {
            report.cases_passed += 1;
        } else if report.witness.is_none() {
            let z = at.expect("non-empty grid");
            report.witness = Some(Witness {
                case: i,
                r: z.r(),
                theta: z.theta(),
                re_e: min,
            });
        }
        report.worst_margin = report.worst_margin.min(margin);
    }
    Ok(report)
}

/// Seeded function with `0 < Σ φ|a_n| + Σ |ψ||b_n| = u(1−β) < 1 − β`.
///
/// Draws up to six distinct indices `≤ max_index`; each lands in the
/// co-analytic part with probability `part_mix`. Indices with `ψ(n) = 0` are
/// never used for the co-analytic part.
pub fn random_member(
    p: &ClassParams,
    seed: u64,
    max_index: u32,
    part_mix: f64,
) -> Result<NegativeCoefficientForm> {
    p.validate()?;
    if max_index < 2 {
        return Err(Error::domain("random_member needs max_index >= 2"));
    }
    if !(0.0..=1.0).contains(&part_mix) {
        return Err(Error::domain("part_mix must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(draw_member(p, &mut rng, max_index, part_mix))
}

fn open_unit(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return u;
        }
    }
}

pub(crate) fn draw_member(
    p: &ClassParams,
    rng: &mut impl Rng,
    max_index: u32,
    part_mix: f64,
) -> NegativeCoefficientForm {
    let b_ok: Vec<u32> = (1..=max_index)
        .filter(|&n| psi(n, p).map(|w| w.abs() >= PSI_EPS).unwrap_or(false))
        .collect();
    let slots = (max_index as usize - 1) + b_ok.len();
    let count = rng.gen_range(1..=slots.min(6));

    let mut free_a: Vec<u32> = (2..=max_index).collect();
    let mut free_b = b_ok;
    let mut chosen: Vec<(Part, u32)> = Vec::with_capacity(count);
    while chosen.len() < count {
        let want_b = rng.gen_bool(part_mix);
        let use_b = !free_b.is_empty() && (want_b || free_a.is_empty());
        let pool = if use_b { &mut free_b } else { &mut free_a };
        let n = pool.swap_remove(rng.gen_range(0..pool.len()));
        chosen.push((if use_b { Part::B } else { Part::A }, n));
    }
    chosen.sort();

    let budget = open_unit(rng) * p.budget();
    let shares: Vec<f64> = chosen.iter().map(|_| -open_unit(rng).ln()).collect();
    let total: f64 = shares.iter().sum();

    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&(part, n), share) in chosen.iter().zip(&shares) {
        let spend = budget * share / total;
        match part {
            Part::A => a.push((n, spend / phi(n, p).expect("n >= 2"))),
            Part::B => {
                let m = spend / psi(n, p).expect("n >= 1").abs();
                // shrinking a term only raises the deficiency
                let m = if n == 1 { m.min(0.999) } else { m };
                b.push((n, m));
            }
        }
    }
    NegativeCoefficientForm::new(a, b).expect("valid by construction")
}

fn with_random_phases(f: &NegativeCoefficientForm, rng: &mut impl Rng) -> HarmonicFunction {
    let mut phase = || Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    let a: Vec<_> = f.a_abs().iter().map(|(&n, &m)| (n, phase() * m)).collect();
    let b: Vec<_> = f.b_abs().iter().map(|(&n, &m)| (n, phase() * m)).collect();
    HarmonicFunction::new(a, b).expect("valid by construction")
}

/// Seeded negative-coefficient function with deficiency `< −0.01`.
///
/// Starts from [`random_member`] and inflates its largest weighted term. If
/// that term is `b_1` and inflating it would break `|b_1| < 1`, the largest
/// analytic term is inflated instead (adding `a_2` if there is none).
pub fn random_violator(
    p: &ClassParams,
    seed: u64,
    max_index: u32,
    part_mix: f64,
) -> Result<NegativeCoefficientForm> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if max_index < 2 {
        return Err(Error::domain("random_violator needs max_index >= 2"));
    }
    let member = draw_member(p, &mut rng, max_index, part_mix);
    let excess = 0.01 + 0.5 * open_unit(&mut rng);
    Ok(inflate(&member, p, excess))
}

/// Scales one term so that the deficiency becomes exactly `−excess`.
fn inflate(f: &NegativeCoefficientForm, p: &ClassParams, excess: f64) -> NegativeCoefficientForm {
    let terms = weighted_terms(f, p).expect("validated params");
    let deficiency = p.budget() - terms.iter().map(|t| t.contribution).sum::<f64>();
    let gap = deficiency + excess;

    let mut a: Vec<(u32, f64)> = f.a_abs().iter().map(|(&n, &m)| (n, m)).collect();
    let mut b: Vec<(u32, f64)> = f.b_abs().iter().map(|(&n, &m)| (n, m)).collect();

    let largest = terms
        .iter()
        .filter(|t| !t.unconstrained)
        .max_by(|x, y| x.contribution.total_cmp(&y.contribution));
    let target_b1 = match largest {
        Some(t) if t.part == Part::B => {
            let w = psi(t.n, p).expect("n >= 1").abs();
            let m = (t.contribution + gap) / w;
            if t.n != 1 || m < 1.0 {
                let slot = b.iter_mut().find(|(n, _)| *n == t.n).expect("term exists");
                slot.1 = m;
                None
            } else {
                Some(())
            }
        }
        _ => Some(()),
    };
    if target_b1.is_some() {
        // inflate the analytic part instead
        let best_a = terms
            .iter()
            .filter(|t| t.part == Part::A)
            .max_by(|x, y| x.contribution.total_cmp(&y.contribution))
            .map(|t| (t.n, t.contribution))
            .unwrap_or((2, 0.0));
        let w = phi(best_a.0, p).expect("n >= 2");
        let m = (best_a.1 + gap) / w;
        match a.iter_mut().find(|(n, _)| *n == best_a.0) {
            Some(slot) => slot.1 = m,
            None => a.push((best_a.0, m)),
        }
    }
    NegativeCoefficientForm::new(a, b).expect("valid by construction")
}

/// `Q(r) = 1 − β − Σ φ(n)|a_n| r^{n−1} − Σ |ψ(n)||b_n| r^{n−1}`, the radial
/// lower bound used in the necessity argument.
pub fn radial_q(f: &NegativeCoefficientForm, p: &ClassParams, r: f64) -> Result<f64> {
    let mut q = p.budget();
    for t in weighted_terms(f, p)? {
        q -= t.contribution * r.powi(t.n as i32 - 1);
    }
    Ok(q)
}

/// Radii `1 − 10^{−j}`, `j = 1..=8`, searched for a necessity witness.
pub fn witness_radii() -> impl Iterator<Item = f64> {
    (1..=8).map(|j| 1.0 - 10f64.powi(-j))
}

/// First `r` in `0.9, 0.99, …, 1 − 1e−8` with `Q(r) < 0`.
///
/// A function violating the coefficient bound must have one since
/// `Q(r) → deficiency < 0` as `r → 1`; `None` means the bound holds or the
/// violation is below the resolution of the search.
pub fn find_necessity_witness(f: &NegativeCoefficientForm, p: &ClassParams) -> Result<Option<f64>> {
    p.validate()?;
    for r in witness_radii() {
        if radial_q(f, p, r)? < 0.0 {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityReport {
    pub cases_run: usize,
    pub witnesses_found: usize,
    /// Largest witness radius needed over all cases.
    pub max_witness_r: f64,
    /// Largest (least negative) deficiency among the violators.
    pub max_deficiency: f64,
    /// Cases where no witness was found.
    pub missing: Vec<usize>,
    pub seed: u64,
    pub params: ClassParams,
}

/// Draws `cases` violators and searches each for a radial witness.
pub fn verify_necessity(p: &ClassParams, cases: usize, seed: u64) -> Result<NecessityReport> {
    p.validate()?;
    if cases == 0 {
        return Err(Error::domain("verification needs at least one case"));
    }
    let mut report = NecessityReport {
        cases_run: 0,
        witnesses_found: 0,
        max_witness_r: 0.0,
        max_deficiency: f64::NEG_INFINITY,
        missing: Vec::new(),
        seed,
        params: *p,
    };
    for i in 0..cases {
        let f = random_violator(p, case_seed(seed, i), SUITE_MAX_INDEX, 0.5)?;
        report.max_deficiency = report.max_deficiency.max(coefficient_deficiency(&f, p)?);
        report.cases_run += 1;
        match find_necessity_witness(&f, p)? {
            Some(r) => {
                report.witnesses_found += 1;
                report.max_witness_r = report.max_witness_r.max(r);
            }
            None => report.missing.push(i),
        }
    }
    Ok(report)
}
