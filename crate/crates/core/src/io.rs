//! File formats: coefficient files (JSON) and grid samples (CSV).
//!
//! A coefficient file is one of
//!
//! ```json
//! {"kind":"general","a":[[2,-0.2,0.0]],"b":[[1,0.2,0.0]]}
//! {"kind":"negative_form","a_abs":[[2,0.2]],"b_abs":[[1,0.2]]}
//! ```
//!
//! Indices must be strictly increasing, at least 2 in `a`/`a_abs` and at
//! least 1 in `b`/`b_abs`.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{HarmonicFunction, NegativeCoefficientForm};
use crate::verify::GridSample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawCoefficients {
    General {
        #[serde(default)]
        a: Vec<(u32, f64, f64)>,
        #[serde(default)]
        b: Vec<(u32, f64, f64)>,
    },
    NegativeForm {
        #[serde(default)]
        a_abs: Vec<(u32, f64)>,
        #[serde(default)]
        b_abs: Vec<(u32, f64)>,
    },
}

/// Contents of a coefficient file.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientFile {
    General(HarmonicFunction),
    NegativeForm(NegativeCoefficientForm),
}

impl CoefficientFile {
    /// The general-form view of either variant.
    pub fn to_harmonic(&self) -> HarmonicFunction {
        match self {
            CoefficientFile::General(f) => f.clone(),
            CoefficientFile::NegativeForm(f) => f.to_harmonic(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoefficientFile::General(_) => "general",
            CoefficientFile::NegativeForm(_) => "negative_form",
        }
    }
}

fn check_increasing(part: &str, indices: impl Iterator<Item = u32>) -> Result<()> {
    let mut prev: Option<u32> = None;
    for n in indices {
        if let Some(p) = prev {
            if n == p {
                return Err(Error::Parse(format!("{part}: duplicate index {n}")));
            }
            if n < p {
                return Err(Error::Parse(format!("{part}: indices must be strictly increasing ({p} then {n})")));
            }
        }
        prev = Some(n);
    }
    Ok(())
}

fn domain_to_parse(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Parse(msg),
        other => other,
    }
}

impl TryFrom<RawCoefficients> for CoefficientFile {
    type Error = Error;

    fn try_from(raw: RawCoefficients) -> Result<Self> {
        match raw {
            RawCoefficients::General { a, b } => {
                check_increasing("a", a.iter().map(|t| t.0))?;
                check_increasing("b", b.iter().map(|t| t.0))?;
                let f = HarmonicFunction::new(
                    a.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im))),
                    b.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im))),
                )
                .map_err(domain_to_parse)?;
                Ok(CoefficientFile::General(f))
            }
            RawCoefficients::NegativeForm { a_abs, b_abs } => {
                check_increasing("a_abs", a_abs.iter().map(|t| t.0))?;
                check_increasing("b_abs", b_abs.iter().map(|t| t.0))?;
                let f = NegativeCoefficientForm::new(a_abs, b_abs).map_err(domain_to_parse)?;
                Ok(CoefficientFile::NegativeForm(f))
            }
        }
    }
}

impl From<&CoefficientFile> for RawCoefficients {
    fn from(file: &CoefficientFile) -> Self {
        match file {
            CoefficientFile::General(f) => RawCoefficients::General {
                a: f.a().iter().map(|(&n, c)| (n, c.re, c.im)).collect(),
                b: f.b().iter().map(|(&n, c)| (n, c.re, c.im)).collect(),
            },
            CoefficientFile::NegativeForm(f) => RawCoefficients::NegativeForm {
                a_abs: f.a_abs().iter().map(|(&n, &m)| (n, m)).collect(),
                b_abs: f.b_abs().iter().map(|(&n, &m)| (n, m)).collect(),
            },
        }
    }
}

impl Serialize for CoefficientFile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawCoefficients::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCoefficients::deserialize(d)?;
        CoefficientFile::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl From<NegativeCoefficientForm> for CoefficientFile {
    fn from(f: NegativeCoefficientForm) -> Self {
        CoefficientFile::NegativeForm(f)
    }
}

impl From<HarmonicFunction> for CoefficientFile {
    fn from(f: HarmonicFunction) -> Self {
        CoefficientFile::General(f)
    }
}

pub fn parse_coefficients(text: &str) -> Result<CoefficientFile> {
    let raw: RawCoefficients =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    CoefficientFile::try_from(raw)
}

pub fn to_json(file: &CoefficientFile) -> String {
    serde_json::to_string_pretty(file).expect("coefficient files always serialise")
}

/// Formats with 17 significant digits, which round-trips every `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const GRID_CSV_HEADER: &str = "r,theta,re_E,im_E,jacobian";

/// Writes grid samples as CSV with header `r,theta,re_E,im_E,jacobian`.
pub fn write_grid_csv<W: Write>(mut out: W, samples: &[GridSample]) -> std::io::Result<()> {
    writeln!(out, "{GRID_CSV_HEADER}")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_f64(s.r),
            format_f64(s.theta),
            format_f64(s.e.re),
            format_f64(s.e.im),
            format_f64(s.jacobian)
        )?;
    }
    Ok(())
}

/// [`write_grid_csv`] to a file; I/O errors carry the path.
pub fn emit_grid_csv(path: &Path, samples: &[GridSample]) -> std::result::Result<(), String> {
    let file = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    write_grid_csv(&mut w, samples)
        .and_then(|_| w.flush())
        .map_err(|e| format!("{}: {e}", path.display()))
}
