//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;

use harmonic_classes::classes::{coefficient_deficiency, phi, psi, specialized_weights, Specialization};
use harmonic_classes::series::{apply_operator, functional_e, functional_e_fd};
use harmonic_classes::specfn::{beta, gamma_ratio};
use harmonic_classes::structure::{
    check_convolution_closure, convex_combine, decompose, reconstruct, ConvolutionParams,
};
use harmonic_classes::verify::{
    case_seed, find_necessity_witness, radial_q, random_member, random_violator,
    verify_sufficiency, DiskGrid, SUITE_MAX_INDEX,
};
use harmonic_classes::{ClassParams, NegativeCoefficientForm, WeightDecomposition};
use rand::Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c1_beta_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=40u32 {
        for j in 0..10 {
            let nu = f64::from(j) / 10.0;
            let g = gamma_ratio(n, nu).unwrap();
            let nf = f64::from(n);
            let b = nf * (nf - 1.0) * beta(nf - 1.0, 2.0 - nu).unwrap();
            worst = worst.max(((g - b) / g).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max relative error {worst:.2e} (tol 1e-10)"))
}

fn c2_functional_cross_oracle() -> Outcome {
    let mut rng = common::rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = common::random_general(&mut rng, 6);
        let p = common::random_params(&mut rng);
        let z = common::random_point(&mut rng, 0.05, 0.9);
        let exact = functional_e(&f, &p, &z).unwrap();
        let fd = functional_e_fd(&f, &p, &z, 1e-4).unwrap();
        worst = worst.max((exact - fd).norm() / exact.norm());
    }
    outcome(worst <= 1e-6, format!("100 triples, max relative error {worst:.2e} (tol 1e-6)"))
}

fn c3_sufficiency() -> Outcome {
    let grid = DiskGrid::standard();
    let mut run = 0;
    let mut passed = 0;
    let mut worst = f64::INFINITY;
    for (i, p) in common::suite_params().iter().enumerate() {
        let r = verify_sufficiency(p, 200, 3000 + i as u64, &grid).unwrap();
        run += r.cases_run;
        passed += r.cases_passed;
        worst = worst.min(r.worst_margin);
    }
    outcome(
        run == 1000 && passed == run && worst > 0.0,
        format!("{passed}/{run} members with min Re E > beta on {}, worst margin {worst:.3e}", grid.tag()),
    )
}

fn c4_necessity() -> Outcome {
    let mut run = 0;
    let mut found = 0;
    let mut max_def = f64::NEG_INFINITY;
    for (i, p) in common::suite_params().iter().enumerate() {
        for case in 0..40 {
            let f = random_violator(p, case_seed(4000 + i as u64, case), SUITE_MAX_INDEX, 0.5).unwrap();
            let d = coefficient_deficiency(&f, p).unwrap();
            max_def = max_def.max(d);
            run += 1;
            if let Some(r0) = find_necessity_witness(&f, p).unwrap() {
                if r0 > 0.0 && r0 < 1.0 && radial_q(&f, p, r0).unwrap() < 0.0 {
                    found += 1;
                }
            }
        }
    }
    outcome(
        run == 200 && found == run && max_def < -0.01,
        format!("{found}/{run} violators with a radial witness, max deficiency {max_def:.4}"),
    )
}

fn random_weights(rng: &mut impl Rng, p: &ClassParams, on_boundary: bool) -> WeightDecomposition {
    let mut t = BTreeMap::new();
    let mut s = BTreeMap::new();
    let mut raw = Vec::new();
    for n in 2..=6u32 {
        if rng.gen_bool(0.5) {
            raw.push((true, n, -rng.gen_range(1e-9f64..1.0).ln()));
        }
    }
    for n in 1..=6u32 {
        if psi(n, p).unwrap().abs() > 1e-14 && rng.gen_bool(0.5) {
            raw.push((false, n, -rng.gen_range(1e-9f64..1.0).ln()));
        }
    }
    let t1_raw = if on_boundary || raw.is_empty() { 0.0 } else { -rng.gen_range(1e-9f64..1.0).ln() };
    let total = t1_raw + raw.iter().map(|r| r.2).sum::<f64>();
    if total == 0.0 {
        return WeightDecomposition { t1: 1.0, t, s };
    }
    for (is_t, n, w) in raw {
        if is_t {
            t.insert(n, w / total);
        } else {
            s.insert(n, w / total);
        }
    }
    let used: f64 = t.values().sum::<f64>() + s.values().sum::<f64>();
    WeightDecomposition { t1: 1.0 - used, t, s }
}

fn weight_diff(x: &WeightDecomposition, y: &WeightDecomposition) -> f64 {
    let d = |a: &BTreeMap<u32, f64>, b: &BTreeMap<u32, f64>| {
        a.keys()
            .chain(b.keys())
            .map(|n| (a.get(n).unwrap_or(&0.0) - b.get(n).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    };
    (x.t1 - y.t1).abs().max(d(&x.t, &y.t)).max(d(&x.s, &y.s))
}

fn c5_extreme_point_round_trip() -> Outcome {
    let mut rng = common::rng(5);
    let params = common::suite_params();
    let mut worst_f: f64 = 0.0;
    let mut worst_w: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut min_weight = f64::INFINITY;
    for i in 0..200u64 {
        let p = params[i as usize % params.len()];
        // decompose then reconstruct, on members and on boundary functions
        let f = if i % 2 == 0 {
            random_member(&p, case_seed(5000, i as usize), 6, 0.5).unwrap()
        } else {
            reconstruct(&random_weights(&mut rng, &p, true), &p).unwrap()
        };
        let w = decompose(&f, &p).unwrap();
        worst_sum = worst_sum.max((w.total() - 1.0).abs());
        min_weight = min_weight
            .min(w.t1)
            .min(w.t.values().copied().fold(f64::INFINITY, f64::min))
            .min(w.s.values().copied().fold(f64::INFINITY, f64::min));
        worst_f = worst_f.max(reconstruct(&w, &p).unwrap().max_abs_diff(&f));

        // reconstruct then decompose
        let w = random_weights(&mut rng, &p, i % 3 == 0);
        let back = decompose(&reconstruct(&w, &p).unwrap(), &p).unwrap();
        worst_w = worst_w.max(weight_diff(&w, &back));
    }
    outcome(
        worst_f <= 1e-12 && worst_w <= 1e-12 && worst_sum <= 1e-12 && min_weight >= -1e-15,
        format!(
            "coefficient err {worst_f:.1e}, weight err {worst_w:.1e}, weight-sum err {worst_sum:.1e}, min weight {min_weight:.1e}"
        ),
    )
}

fn c6_specialised_weights() -> Outcome {
    let mut worst: f64 = 0.0;
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { ((a - b) / b.abs().max(f64::MIN_POSITIVE)).abs() };
    for &nu in &[0.0, 0.25, 0.5, 0.75] {
        for &(variant, lambda, k) in &[
            (Specialization::Lambda0, 0.0, 0.3),
            (Specialization::Lambda0, 0.0, 1.0),
            (Specialization::Lambda1, 1.0, 0.0),
            (Specialization::Lambda1, 1.0, 0.6),
            (Specialization::K1, 0.4, 1.0),
            (Specialization::K1, 2.5, 1.0),
            (Specialization::K0, 0.3, 0.0),
            (Specialization::K0, 1.7, 0.0),
        ] {
            let p = ClassParams::new(0.2, lambda, k, nu).unwrap();
            for n in 1..=20u32 {
                let w = specialized_weights(variant, n, &p).unwrap();
                let s = psi(n, &p).unwrap();
                // ψ can vanish exactly (e.g. k = 0, λ(n+1) = 1); compare absolutely there
                let e = if s.abs() < 1e-12 { (w.psi_signed - s).abs() } else { rel(w.psi_signed, s) };
                worst = worst.max(e);
                if n >= 2 {
                    worst = worst.max(rel(w.phi.unwrap(), phi(n, &p).unwrap()));
                }
            }
        }
    }
    outcome(worst <= 1e-12, format!("max relative error {worst:.2e} over n <= 20 (tol 1e-12)"))
}

fn c7_convolution() -> Outcome {
    let mut rng = common::rng(7);
    let params = common::suite_params();
    let mut holds = 0;
    let mut min_def = f64::INFINITY;
    let mut run = 0;
    let mut draws = 0usize;
    while run < 500 {
        let base = params[run % params.len()];
        let alpha = rng.gen_range(0.05..0.95);
        let beta = rng.gen_range(0.0..alpha);
        let at_alpha = base.with_beta(alpha).unwrap();
        let f1 = random_member(&at_alpha, case_seed(7000, draws), 6, 0.5).unwrap();
        let f2 = random_member(&at_alpha, case_seed(7001, draws), 6, 0.5).unwrap();
        draws += 1;
        if f2.a_abs().values().chain(f2.b_abs().values()).any(|&m| m >= 1.0) {
            continue;
        }
        run += 1;
        let r = check_convolution_closure(&f1, &f2, alpha, beta, ConvolutionParams::from(&base), false).unwrap();
        min_def = min_def.min(r.deficiency_alpha).min(r.deficiency_beta);
        if r.closure_holds == Some(true) && r.deficiency_alpha > 0.0 {
            holds += 1;
        }
    }
    outcome(
        holds == 500,
        format!("{holds}/500 products in the class at alpha and beta, min deficiency {min_def:.3e} ({draws} draws)"),
    )
}

fn c8_convex_combination() -> Outcome {
    let mut rng = common::rng(8);
    let params = common::suite_params();
    let mut ok = 0;
    let mut min_def = f64::INFINITY;
    for i in 0..500usize {
        let p = params[i % params.len()];
        let m = rng.gen_range(1..=5);
        let fs: Vec<NegativeCoefficientForm> = (0..m)
            .map(|j| random_member(&p, case_seed(8000 + j as u64, i), 6, 0.5).unwrap())
            .collect();
        let raw: Vec<f64> = (0..m).map(|_| -rng.gen_range(1e-9f64..1.0).ln()).collect();
        let total: f64 = raw.iter().sum();
        let ts: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let combo = convex_combine(&fs, &ts).unwrap();
        let d = coefficient_deficiency(&combo, &p).unwrap();
        min_def = min_def.min(d);
        if d > 0.0 {
            ok += 1;
        }
    }
    outcome(ok == 500, format!("{ok}/500 combinations with positive deficiency, min {min_def:.3e}"))
}

fn c9_operator_sanity() -> Outcome {
    let mut rng = common::rng(9);
    let mut identity_exact = true;
    for _ in 0..50 {
        let f = common::random_general(&mut rng, 10);
        identity_exact &= apply_operator(&f, 0.0).unwrap() == f;
    }
    let mut worst: f64 = 0.0;
    for j in 0..100 {
        let nu = f64::from(j) / 100.0;
        worst = worst.max((gamma_ratio(1, nu).unwrap() - 1.0).abs());
    }
    outcome(
        identity_exact && worst <= 1e-13,
        format!("nu = 0 exact: {identity_exact}; max |gamma_ratio(1, nu) - 1| = {worst:.1e}"),
    )
}

fn c10_hand_values() -> Outcome {
    let checks = [
        ("phi(2; lambda=1, k=1, nu=0)", phi(2, &ClassParams::new(0.5, 1.0, 1.0, 0.0).unwrap()).unwrap(), 4.0),
        ("psi(2; lambda=1, k=0, nu=0)", psi(2, &ClassParams::new(0.5, 1.0, 0.0, 0.0).unwrap()).unwrap(), -2.0),
        ("gamma_ratio(2, 0.5)", gamma_ratio(2, 0.5).unwrap(), 4.0 / 3.0),
        ("gamma_ratio(3, 0.5)", gamma_ratio(3, 0.5).unwrap(), 1.6),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, got, want) in checks {
        let err = (got - want).abs();
        pass &= err <= 1e-12;
        parts.push(format!("{name} = {got} (err {err:.0e})"));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("beta identity for the operator weight", c1_beta_identity),
        ("closed-form E vs finite-difference E", c2_functional_cross_oracle),
        ("sufficiency on the standard grid", c3_sufficiency),
        ("necessity radial witness", c4_necessity),
        ("extreme-point round trip", c5_extreme_point_round_trip),
        ("specialised weights", c6_specialised_weights),
        ("convolution closure", c7_convolution),
        ("convex-combination closure", c8_convex_combination),
        ("operator sanity", c9_operator_sanity),
        ("hand values", c10_hand_values),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
