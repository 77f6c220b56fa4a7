//! `hmcheck`: certify coefficient files, generate extreme points, run the
//! seeded suites and sample `E(z)` on a disk grid.
//!
//! Exit codes: 0 on success, 1 when `check` does not certify membership,
//! 2 on usage, parse, I/O or domain errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_classes::classes::{
    is_member_negative_class, is_member_sufficient, specialized_weights, weight_pair, Specialization,
};
use harmonic_classes::io::{emit_grid_csv, parse_coefficients, to_json, CoefficientFile};
use harmonic_classes::structure::{
    check_convolution_closure, convex_combine, decompose, extreme_point_f, extreme_point_g,
    ConvolutionParams,
};
use harmonic_classes::verify::{min_real_e, sample_grid, verify_necessity, verify_sufficiency};
use harmonic_classes::{ClassParams, DiskGrid, NegativeCoefficientForm, WeightDecomposition};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "hmcheck", version, about = "Membership checks for fractional-operator harmonic classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify membership of the function in a coefficient file.
    Check {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the coefficient weights φ(n), ψ(n).
    Weights {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u32,
        /// Print every index from `--n` up to this one.
        #[arg(long)]
        max_n: Option<u32>,
        /// Use the closed form of a pinned specialisation.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the extreme point f_n (`--fn`) or g_n (`--gn`).
    Extremal {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "fn", conflicts_with = "gn", required_unless_present = "gn")]
        f_index: Option<u32>,
        #[arg(long = "gn")]
        gn: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Split a negative-form function into extreme-point weights.
    Decompose {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Combine the weighted parts written by `decompose`.
    Combine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convolve two negative-form functions and check closure at `--alpha`.
    Convolve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        input: PathBuf,
        /// Second factor.
        #[arg(long)]
        with: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Require `|c_n|, |d_n| < 1` for both factors, not only the second.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimise Re E over a grid; optionally write every sample as CSV.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a seeded sufficiency or necessity suite.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Suite::Sufficiency)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ClassParams, String> {
        ClassParams::new(self.beta, self.lambda, self.k, self.nu).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Comma-separated radii in (0, 1); empty for no points.
    #[arg(long)]
    grid_radii: Option<String>,
    #[arg(long)]
    grid_angles: Option<u32>,
}

impl GridArgs {
    fn resolve(&self) -> Result<DiskGrid, String> {
        let standard = DiskGrid::standard();
        if self.grid_radii.is_none() && self.grid_angles.is_none() {
            return Ok(standard);
        }
        let radii = match &self.grid_radii {
            None => standard.radii().to_vec(),
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|e| format!("bad grid radius {s:?}: {e}")))
                .collect::<Result<_, _>>()?,
        };
        let angles = self.grid_angles.unwrap_or(standard.angles());
        DiskGrid::new(radii, angles, "custom").map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Lambda0,
    Lambda1,
    K1,
    K0,
}

impl From<VariantArg> for Specialization {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lambda0 => Specialization::Lambda0,
            VariantArg::Lambda1 => Specialization::Lambda1,
            VariantArg::K1 => Specialization::K1,
            VariantArg::K0 => Specialization::K0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Sufficiency,
    Necessity,
}

/// One weighted term of an extreme-point decomposition.
#[derive(Debug, Serialize, Deserialize)]
pub struct Part {
    pub label: String,
    pub weight: f64,
    pub function: CoefficientFile,
}

#[derive(Debug, Serialize, Deserialize)]
struct PartsFile {
    parts: Vec<Part>,
}

#[derive(Debug, Serialize)]
struct DecomposeOutput<'a> {
    params: ClassParams,
    weights: &'a WeightDecomposition,
    parts: Vec<Part>,
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    params: ClassParams,
    grid: DiskGrid,
    points: usize,
    min_re_e: Option<f64>,
    at: Option<(f64, f64)>,
    above_beta: Option<bool>,
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn run<S: AsRef<str>>(argv: &[S]) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn read_file(path: &Path) -> Result<CoefficientFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_coefficients(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_negative(path: &Path) -> Result<NegativeCoefficientForm, String> {
    match read_file(path)? {
        CoefficientFile::NegativeForm(f) => Ok(f),
        CoefficientFile::General(_) => Err(format!("{}: expected a negative_form file", path.display())),
    }
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), String> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn write_coefficients(path: &Option<PathBuf>, file: &CoefficientFile) -> Result<(), String> {
    if let Some(path) = path {
        fs::write(path, to_json(file) + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn describe(f: &NegativeCoefficientForm) -> String {
    let mut s = String::from("z");
    for (n, m) in f.a_abs() {
        s += &format!(" - {m}*z^{n}");
    }
    for (n, m) in f.b_abs() {
        s += &format!(" + {m}*conj(z)^{n}");
    }
    s
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Check { params, input, output } => {
            let p = params.resolve()?;
            let file = read_file(&input)?;
            let report = match &file {
                CoefficientFile::NegativeForm(f) => is_member_negative_class(f, &p),
                CoefficientFile::General(f) => is_member_sufficient(f, &p),
            }
            .map_err(|e| e.to_string())?;
            println!("input: {} ({})", input.display(), file.kind());
            println!("deficiency: {:.6e}", report.deficiency);
            println!("verdict: {}", report.verdict);
            let free = report.unconstrained_indices();
            if !free.is_empty() {
                println!("unconstrained co-analytic indices (psi = 0): {free:?}");
            }
            write_json(&output, &report)?;
            Ok(if report.verdict.is_member() { 0 } else { 1 })
        }
        Command::Weights {
            params,
            n,
            max_n,
            variant,
            output,
        } => {
            let p = params.resolve()?;
            let last = max_n.unwrap_or(n);
            if last < n {
                return Err(format!("--max-n {last} is below --n {n}"));
            }
            let mut rows = Vec::new();
            println!("{:>4} {:>24} {:>24}", "n", "phi", "psi");
            for i in n..=last {
                let w = match variant {
                    Some(v) => specialized_weights(v.into(), i, &p),
                    None => weight_pair(i, &p),
                }
                .map_err(|e| e.to_string())?;
                let phi = w.phi.map_or("-".to_string(), |x| format!("{x}"));
                println!("{:>4} {:>24} {:>24}", i, phi, w.psi_signed);
                rows.push(w);
            }
            write_json(&output, &rows)?;
            Ok(0)
        }
        Command::Extremal {
            params,
            f_index,
            gn,
            output,
        } => {
            let p = params.resolve()?;
            let f = match (f_index, gn) {
                (Some(n), _) => extreme_point_f(n, &p).map_err(|e| e.to_string())?,
                (None, Some(n)) => {
                    let g = extreme_point_g(n, &p).map_err(|e| e.to_string())?;
                    if g.univalence_violated {
                        eprintln!("warning: |b_1| >= 1, so g_1 is not sense-preserving");
                    }
                    g.function
                }
                (None, None) => return Err("one of --fn or --gn is required".into()),
            };
            println!("{}", describe(&f));
            write_coefficients(&output, &CoefficientFile::NegativeForm(f))?;
            Ok(0)
        }
        Command::Decompose { params, input, output } => {
            let p = params.resolve()?;
            let f = read_negative(&input)?;
            let w = decompose(&f, &p).map_err(|e| e.to_string())?;
            let mut parts = vec![Part {
                label: "z".into(),
                weight: w.t1,
                function: NegativeCoefficientForm::identity().into(),
            }];
            for (&n, &t) in &w.t {
                let fnn = extreme_point_f(n, &p).map_err(|e| e.to_string())?;
                parts.push(Part {
                    label: format!("f_{n}"),
                    weight: t,
                    function: fnn.into(),
                });
            }
            for (&n, &s) in &w.s {
                let gnn = extreme_point_g(n, &p).map_err(|e| e.to_string())?;
                parts.push(Part {
                    label: format!("g_{n}"),
                    weight: s,
                    function: gnn.function.into(),
                });
            }
            for part in &parts {
                println!("{:>6} {:.16e}", part.label, part.weight);
            }
            write_json(
                &output,
                &DecomposeOutput {
                    params: p,
                    weights: &w,
                    parts,
                },
            )?;
            Ok(0)
        }
        Command::Combine { input, output } => {
            let text = fs::read_to_string(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            let file: PartsFile =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", input.display()))?;
            let mut functions = Vec::with_capacity(file.parts.len());
            let mut ts = Vec::with_capacity(file.parts.len());
            for part in file.parts {
                match part.function {
                    CoefficientFile::NegativeForm(f) => functions.push(f),
                    CoefficientFile::General(_) => {
                        return Err(format!("part {} is not in negative form", part.label))
                    }
                }
                ts.push(part.weight);
            }
            let combo = convex_combine(&functions, &ts).map_err(|e| e.to_string())?;
            println!("{}", describe(&combo));
            write_coefficients(&output, &CoefficientFile::NegativeForm(combo))?;
            Ok(0)
        }
        Command::Convolve {
            params,
            input,
            with,
            alpha,
            strict,
            output,
        } => {
            params.resolve()?;
            let f1 = read_negative(&input)?;
            let f2 = read_negative(&with)?;
            let conv = ConvolutionParams {
                lambda: params.lambda,
                k: params.k,
                nu: params.nu,
            };
            let report =
                check_convolution_closure(&f1, &f2, alpha, params.beta, conv, strict).map_err(|e| e.to_string())?;
            for v in &report.violations {
                println!("hypothesis not met: {v}");
            }
            println!("deficiency at alpha: {:.6e}", report.deficiency_alpha);
            println!("deficiency at beta:  {:.6e}", report.deficiency_beta);
            match report.closure_holds {
                Some(true) => println!("closure: holds"),
                Some(false) => println!("closure: FAILS"),
                None => println!("closure: not applicable"),
            }
            #[derive(Serialize)]
            struct Out<'a> {
                report: &'a harmonic_classes::structure::ConvolutionReport,
                product: CoefficientFile,
            }
            let product = harmonic_classes::structure::convolve(&f1, &f2).into();
            write_json(&output, &Out { report: &report, product })?;
            Ok(0)
        }
        Command::Eval {
            params,
            grid,
            input,
            csv,
            output,
        } => {
            let p = params.resolve()?;
            let g = grid.resolve()?;
            let f = read_file(&input)?.to_harmonic();
            if let Some(path) = &csv {
                let samples = sample_grid(&f, &p, &g).map_err(|e| e.to_string())?;
                emit_grid_csv(path, &samples)?;
                println!("wrote {} samples to {}", samples.len(), path.display());
            }
            let (min, at) = min_real_e(&f, &p, &g).map_err(|e| e.to_string())?;
            let out = EvalOutput {
                params: p,
                points: g.len(),
                min_re_e: at.map(|_| min),
                at: at.map(|z| (z.r(), z.theta())),
                above_beta: at.map(|_| min > p.beta),
                grid: g,
            };
            match (out.min_re_e, out.at) {
                (Some(m), Some((r, t))) => println!("min Re E = {m:.12} at r = {r}, theta = {t:.6} (beta = {})", p.beta),
                _ => println!("empty grid"),
            }
            write_json(&output, &out)?;
            Ok(0)
        }
        Command::Verify {
            params,
            grid,
            suite,
            cases,
            seed,
            output,
        } => {
            let p = params.resolve()?;
            match suite {
                Suite::Sufficiency => {
                    let g = grid.resolve()?;
                    if g.is_empty() {
                        return Err("sufficiency suite needs a non-empty grid".into());
                    }
                    let r = verify_sufficiency(&p, cases, seed, &g).map_err(|e| e.to_string())?;
                    println!(
                        "sufficiency: {}/{} passed on {} (worst margin {:.6e})",
                        r.cases_passed, r.cases_run, r.grid, r.worst_margin
                    );
                    if let Some(w) = &r.witness {
                        println!("counterexample: case {} at r = {}, theta = {}, Re E = {}", w.case, w.r, w.theta, w.re_e);
                    }
                    write_json(&output, &r)?;
                }
                Suite::Necessity => {
                    let r = verify_necessity(&p, cases, seed).map_err(|e| e.to_string())?;
                    println!(
                        "necessity: {}/{} violators with a radial witness (max r {})",
                        r.witnesses_found, r.cases_run, r.max_witness_r
                    );
                    if !r.missing.is_empty() {
                        println!("no witness for cases {:?}", r.missing);
                    }
                    write_json(&output, &r)?;
                }
            }
            Ok(0)
        }
    }
}
