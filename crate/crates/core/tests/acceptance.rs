//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! The process fails if any criterion outside `KNOWN_RED` fails.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::Value;

use common::{constants, data_dir, lagrange, run_cli};
use hydrogenic_se::dataset::synthetic::{bundled_models, RemainderModel, SyntheticState};
use hydrogenic_se::dataset::{format_real, parse_coefficients, BUNDLED_COEFFICIENTS};
use hydrogenic_se::extrap::{cascade, estimate_limit, neville_at, ConvergencePolicy, Grid};
use hydrogenic_se::pipeline::{self, Agreement, Variable, ZTarget};
use hydrogenic_se::quantities::{format_parenthesis, parse_state, StateLabel};
use hydrogenic_se::reduction::{self, CoefficientSet, RemainderKind};
use hydrogenic_se::{NuclearCharge, UncertainValue};

/// Criteria that are expected to fail, with the reason recorded alongside.
const KNOWN_RED: &[u32] = &[2];

const ALPHA: f64 = 7.2973525693e-3;
/// α²·(α/π)(Zα)⁴/n³·m_e c²/h for n = 4, Z = 1, computed by hand from the
/// bundled constants.
const BOUND_TWO_TERM_HZ: f64 = 677.176_428_250_589_2;
const BOUND_THREE_TERM_HZ: f64 = 4.941_595_148_563_835;

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

fn z(n: u32) -> NuclearCharge {
    NuclearCharge::new(n).unwrap()
}

fn state(s: &str) -> StateLabel {
    parse_state(s).unwrap()
}

fn jsonl_record(stdout: &str) -> Value {
    serde_json::from_str(stdout.lines().next().expect("one record")).expect("valid json")
}

fn estimate_cli(order: &str) -> (i32, String, Value) {
    let (code, text, _) = run_cli(&["estimate", "--state", "4P1/2", "--order", order]);
    let (_, json, _) = run_cli(&[
        "estimate", "--state", "4P1/2", "--order", order, "--format", "jsonl",
    ]);
    (code, text, jsonl_record(&json))
}

fn criterion_1() -> Outcome {
    let c = constants();
    let p = reduction::prefactor(state("4P1/2"), z(1), &c).unwrap();
    let oracle_ok = ((ALPHA * ALPHA * p) - BOUND_TWO_TERM_HZ).abs() < 1e-9;

    let (code, text, rec) = estimate_cli("two_term");
    let central_khz = rec["energy_hz"].as_f64().unwrap() / 1e3;
    let bound_khz = rec["bound_sigma_hz"].as_f64().unwrap() / 1e3;
    let printed = text.contains("-1403.5(7) kHz");
    let pass = code == 0
        && oracle_ok
        && (central_khz - -1403.5).abs() <= 0.05
        && (bound_khz - 0.677).abs() <= 0.002
        && printed;
    outcome(
        pass,
        format!(
            "central {central_khz:.4} kHz, bound {bound_khz:.5} kHz (oracle {:.5}), printed \"-1403.5(7) kHz\": {printed}",
            BOUND_TWO_TERM_HZ / 1e3
        ),
    )
}

fn criterion_2() -> Outcome {
    let table = parse_coefficients(BUNDLED_COEFFICIENTS).unwrap();
    let k = &table[&state("4P1/2")];
    let bracket = k.a61.value() * (ALPHA.powi(-2)).ln() + k.a60.unwrap().value();
    outcome(
        (bracket - -1.122).abs() <= 0.01,
        format!(
            "A61 ln(alpha^-2) + A60 = {bracket:.4}, target -1.122 +- 0.01; literature A61 = 499/720 and A60 = {} cannot meet it",
            k.a60.unwrap().value()
        ),
    )
}

fn criterion_3() -> Outcome {
    let c = constants();
    let p = reduction::prefactor(state("4P1/2"), z(1), &c).unwrap();
    let oracle_ok = ((ALPHA.powi(3) * p) - BOUND_THREE_TERM_HZ).abs() < 1e-11;
    let (code, text, rec) = estimate_cli("three_term");
    let central_khz = rec["energy_hz"].as_f64().unwrap() / 1e3;
    let bound_khz = rec["bound_sigma_hz"].as_f64().unwrap() / 1e3;
    let pass = code == 0
        && oracle_ok
        && (central_khz - -1404.260).abs() <= 0.005
        && (0.004..=0.007).contains(&bound_khz)
        && text.contains("-1404.260(5) kHz");
    outcome(
        pass,
        format!(
            "central {central_khz:.4} kHz, bound {bound_khz:.5} kHz, printed \"-1404.260(5) kHz\""
        ),
    )
}

/// Random remainder model: G_SE,7 = c0 + c1 x + c2 x² + w/(1 + b x).
fn random_model(rng: &mut ChaCha8Rng, base: &SyntheticState) -> SyntheticState {
    SyntheticState {
        remainder: RemainderModel {
            c0: rng.random_range(-1.0..1.0),
            c1: rng.random_range(-1.0..1.0),
            c2: rng.random_range(-1.0..1.0),
            pole_weight: rng.random_range(-1.0..1.0),
            pole_rate: rng.random_range(0.5..2.0),
        },
        ..*base
    }
}

fn literature_4p() -> SyntheticState {
    bundled_models()
        .into_iter()
        .find(|m| m.model.state == state("4P1/2"))
        .unwrap()
        .model
}

fn criterion_4() -> Outcome {
    let c = constants();
    let base = literature_4p();
    let zs: Vec<u32> = (10..=60).step_by(5).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 1000;
    let (mut g7_hit, mut mag_hit, mut agree, mut errors) = (0, 0, 0, 0);

    for _ in 0..trials {
        let m = random_model(&mut rng, &base);
        let series = m.series(&zs, &c, 1e-15);
        let coeffs = m.coefficients();
        let truth = m.energy_hz(z(1), &c);
        let run = |v| {
            pipeline::extrapolate_series(
                &series,
                v,
                Some(&coeffs),
                ZTarget::Charge(z(1)),
                8,
                ConvergencePolicy::default(),
            )
            .map(|r| r.energy_hz.unwrap())
        };
        match (run(Variable::Gse7), run(Variable::Magnifier)) {
            (Ok(e7), Ok(em)) => {
                g7_hit += usize::from((e7.value() - truth).abs() <= e7.sigma());
                mag_hit += usize::from((em.value() - truth).abs() <= em.sigma());
                agree += usize::from(Agreement::between(e7, em).agrees());
            }
            _ => errors += 1,
        }
    }

    // the bundled demonstration table through the command-line tool
    let table = data_dir().join("synthetic/4P1_2.ftab");
    let (code, out, _) = run_cli(&[
        "extrapolate",
        "--table",
        table.to_str().unwrap(),
        "--variable",
        "gse7",
        "--variable",
        "magnifier",
        "--format",
        "jsonl",
    ]);
    let truth = base.energy_hz(z(1), &c);
    let cli_hits = out
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["variable"] == "gse7" || r["variable"] == "magnifier")
        .filter(|r| {
            let e = r["energy_hz"].as_f64().unwrap();
            (e - truth).abs() <= r["energy_sigma_hz"].as_f64().unwrap()
        })
        .count();

    let rate = |k: usize| k as f64 / trials as f64;
    let pass = errors == 0
        && rate(g7_hit) >= 0.95
        && rate(mag_hit) >= 0.95
        && rate(agree) >= 0.95
        && code == 0
        && cli_hits == 2;
    outcome(
        pass,
        format!(
            "{trials} models: gse7 within sigma {:.1}%, magnifier {:.1}%, agree {:.1}%, failures {errors}; bundled table via CLI {cli_hits}/2",
            100.0 * rate(g7_hit),
            100.0 * rate(mag_hit),
            100.0 * rate(agree)
        ),
    )
}

fn exact_grid(nodes: &[f64], values: &[f64]) -> Grid {
    Grid::new(
        nodes.to_vec(),
        values.iter().map(|&v| UncertainValue::exact(v)).collect(),
        "Z",
    )
    .unwrap()
}

fn distinct_nodes(rng: &mut ChaCha8Rng, n: usize, lo: u32, hi: u32) -> Vec<f64> {
    let mut nodes: Vec<u32> = Vec::with_capacity(n);
    while nodes.len() < n {
        let z = rng.random_range(lo..=hi);
        if !nodes.contains(&z) {
            nodes.push(z);
        }
    }
    nodes.sort_unstable();
    nodes.into_iter().map(f64::from).collect()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let target = 1.0;

    // Extrapolating from [10, 110] to 1 amplifies the rounding of the
    // inputs by Σ|L_i(t)|, so errors are measured against Σ|L_i(t) y_i|.
    let mut worst_poly: f64 = 0.0;
    let mut worst_literal: f64 = 0.0;
    for _ in 0..1000 {
        let degree = rng.random_range(0..=4usize);
        let n = rng.random_range((degree + 1).max(2)..=10);
        let nodes = distinct_nodes(&mut rng, n, 10, 110);
        let coef: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = |x: f64| coef.iter().rev().fold(0.0, |acc, &c| acc * (x / 50.0) + c);
        let values: Vec<f64> = nodes.iter().map(|&x| p(x)).collect();
        let exact = p(target);
        let tableau = cascade(&exact_grid(&nodes, &values), target, n - 1).unwrap();
        for col in tableau.columns().iter().filter(|c| c.order >= degree) {
            for e in &col.entries {
                let w = e.window_start..e.window_start + col.order + 1;
                let (_, scale) = lagrange(&nodes[w.clone()], &values[w], target);
                let err = (e.value.value() - exact).abs();
                worst_poly = worst_poly.max(err / scale.max(exact.abs()));
                worst_literal = worst_literal.max(err / exact.abs());
            }
        }
    }

    let mut worst_oracle: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=10);
        let nodes = distinct_nodes(&mut rng, n, 5, 110);
        let values: Vec<f64> = nodes.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = rng.random_range(0.0..5.0);
        let got = neville_at(&exact_grid(&nodes, &values), t).unwrap().value();
        let (want, _) = lagrange(&nodes, &values, t);
        worst_oracle = worst_oracle.max((got - want).abs() / want.abs());
    }

    outcome(
        worst_poly <= 1e-12 && worst_oracle <= 1e-12,
        format!(
            "polynomials: worst error {worst_poly:.2e} of sum|L_i y_i| ({worst_literal:.2e} of |p(t)|); Lagrange oracle: worst relative {worst_oracle:.2e}"
        ),
    )
}

fn random_coefficients(rng: &mut ChaCha8Rng, st: StateLabel) -> CoefficientSet {
    let mut u = || UncertainValue::exact(rng.random_range(-2.0..2.0));
    CoefficientSet {
        state: st,
        a40: u(),
        a61: u(),
        a60: Some(u()),
        gse_limit: None,
        source: "random".into(),
    }
}

fn criterion_6() -> Outcome {
    let c = constants();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_energy, mut worst_r, mut worst_f): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..10_000 {
        let n = rng.random_range(2..=12);
        let l = rng.random_range(1..n);
        let j2 = if rng.random_bool(0.5) {
            2 * l + 1
        } else {
            2 * l - 1
        };
        let st = StateLabel::new(n, l, j2).unwrap();
        let zc = z(rng.random_range(1..=110));

        let f =
            UncertainValue::new(rng.random_range(-10.0..10.0), rng.random_range(0.0..1.0)).unwrap();
        let e = reduction::f_to_energy(f, st, zc, &c).unwrap();
        let back = reduction::energy_to_f(e, st, zc, &c).unwrap();
        worst_energy = worst_energy.max((back.value() - f.value()).abs() / f.value().abs());

        let coeffs = random_coefficients(&mut rng, st);
        let za = c.z_alpha(zc).unwrap();
        for kind in [
            RemainderKind::Gse,
            RemainderKind::Gse7,
            RemainderKind::Magnifier,
        ] {
            let r = UncertainValue::exact(rng.random_range(-100.0..100.0));
            let f = reduction::reconstruct_f(r, kind, zc, &coeffs, &c).unwrap();
            let r2 = reduction::extract(kind, f, zc, &coeffs, &c).unwrap();
            // F carries ~1 ulp, which becomes |F| ulp / (Zα)^p in the remainder
            let scale = r
                .value()
                .abs()
                .max(f.value().abs() / za.powi(kind.zalpha_power()));
            worst_r = worst_r.max((r2.value() - r.value()).abs() / scale);
            let f2 = reduction::reconstruct_f(r2, kind, zc, &coeffs, &c).unwrap();
            // F is a sum of terms that may cancel; compare against their size
            let log = -2.0 * za.ln();
            let mut terms = coeffs.a40.value().abs() + za * za * (coeffs.a61.value() * log).abs();
            terms += match kind {
                RemainderKind::Gse7 => {
                    za * za * coeffs.a60.unwrap().value().abs() + za.powi(3) * r.value().abs()
                }
                _ => za * za * r.value().abs(),
            };
            worst_f = worst_f.max((f2.value() - f.value()).abs() / terms);
        }
    }
    outcome(
        worst_energy <= 1e-13 && worst_r <= 1e-12 && worst_f <= 1e-12,
        format!(
            "F->E->F worst {worst_energy:.2e}; remainder->F->remainder worst {worst_r:.2e}; F->remainder->F worst {worst_f:.2e}"
        ),
    )
}

fn coefficient_line(k: &CoefficientSet) -> String {
    let pair = |u: Option<UncertainValue>| match u {
        Some(u) => format!("{} {}", format_real(u.value()), format_real(u.sigma())),
        None => "- -".into(),
    };
    format!(
        "{} {} {} {} {} \"{}\"\n",
        k.state,
        pair(Some(k.a40)),
        pair(Some(k.a61)),
        pair(k.a60),
        pair(k.gse_limit),
        k.source
    )
}

fn criterion_7() -> Outcome {
    let c = constants();
    let dir = tempfile::tempdir().unwrap();
    let table = data_dir().join("synthetic/4P1_2.ftab");
    let table = table.to_str().unwrap();

    let (code_ok, _, _) = run_cli(&["verify-limit", "--table", table]);

    let bundled = parse_coefficients(BUNDLED_COEFFICIENTS).unwrap();
    let mut k = bundled[&state("4P1/2")].clone();
    let series = hydrogenic_se::dataset::load_f_table(
        data_dir().join("synthetic/4P1_2.ftab"),
        &c,
        Default::default(),
    )
    .unwrap()
    .series;
    let check = pipeline::verify_limit(&series, &k, 2.0, 8, ConvergencePolicy::default()).unwrap();
    let limit = k.gse_limit.unwrap();
    k.gse_limit = Some(limit.offset(10.0 * check.combined_sigma()));
    let coef_path = dir.path().join("biased.coef");
    std::fs::write(&coef_path, coefficient_line(&k)).unwrap();
    let (code_biased, _, _) = run_cli(&[
        "verify-limit",
        "--table",
        table,
        "--coefficients",
        coef_path.to_str().unwrap(),
    ]);

    // Smooth G_SE series against a reference limit known to 1e-3.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sigma_limit = 1e-3;
    let noise = Normal::new(0.0, sigma_limit).unwrap();
    let base = literature_4p();
    let zs: Vec<u32> = (20..=60).step_by(5).collect();
    let draws = 1000;
    let (mut failures, mut errors) = (0, 0);
    for _ in 0..draws {
        let m = random_model(&mut rng, &base);
        let series = m.series(&zs, &c, 1e-15);
        let mut coeffs = m.coefficients();
        coeffs.gse_limit =
            Some(UncertainValue::new(m.gse_limit() + noise.sample(&mut rng), sigma_limit).unwrap());
        match pipeline::verify_limit(&series, &coeffs, 2.0, 8, ConvergencePolicy::default()) {
            Ok(check) => failures += usize::from(!check.consistent()),
            Err(_) => errors += 1,
        }
    }
    let rate = failures as f64 / draws as f64;
    outcome(
        code_ok == 0 && code_biased == 4 && errors == 0 && (0.03..=0.07).contains(&rate),
        format!(
            "constructed series exit {code_ok}; 10-sigma bias exit {code_biased}; false-failure rate {:.1}% over {draws} draws ({errors} errors)",
            100.0 * rate
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bit_identical = true;
    let mut worst_ratio: f64 = 0.0;
    let mut exact_for_powers_of_two = true;
    for _ in 0..200 {
        let n = rng.random_range(4..=11);
        let nodes = distinct_nodes(&mut rng, n, 10, 110);
        let a = rng.random_range(-1.0..1.0);
        let b = rng.random_range(-1.0..1.0);
        let values = nodes
            .iter()
            .map(|&x: &f64| {
                UncertainValue::new(a + b * x.ln() + 1.0 / x, rng.random_range(1e-9..1e-6)).unwrap()
            })
            .collect();
        let grid = Grid::new(nodes, values, "Z").unwrap();
        let base_t = cascade(&grid, 1.0, n - 1).unwrap();
        let base = match estimate_limit(&base_t, ConvergencePolicy::default()) {
            Ok(r) => r,
            Err(_) => continue,
        };
        for scale in [0.5, 2.0, 10.0] {
            let t = cascade(&grid.scale_sigmas(scale).unwrap(), 1.0, n - 1).unwrap();
            let r = estimate_limit(&t, ConvergencePolicy::default()).unwrap();
            bit_identical &= r.estimate.value().to_bits() == base.estimate.value().to_bits()
                && r.order_used == base.order_used;
            let mut check = |s: f64, s0: f64| {
                let dev = (s / (scale * s0) - 1.0).abs();
                worst_ratio = worst_ratio.max(dev);
                if scale != 10.0 {
                    exact_for_powers_of_two &= s == scale * s0;
                }
            };
            check(r.data_sigma, base.data_sigma);
            for (col, col0) in t.columns().iter().zip(base_t.columns()) {
                for (e, e0) in col.entries.iter().zip(&col0.entries) {
                    bit_identical &= e.value.value().to_bits() == e0.value.value().to_bits();
                    check(e.value.sigma(), e0.value.sigma());
                }
            }
        }
    }
    outcome(
        bit_identical && exact_for_powers_of_two && worst_ratio <= 4.0 * f64::EPSILON,
        format!(
            "centers bit-identical: {bit_identical}; exact for c = 0.5, 2: {exact_for_powers_of_two}; worst relative deviation {worst_ratio:.1e} (c = 10 rounds)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let cases = [
        (
            UncertainValue::new(-1404.240, 0.002).unwrap(),
            "kHz",
            "-1404.240(2) kHz",
        ),
        (
            UncertainValue::new(-1403.5, 0.7).unwrap(),
            "kHz",
            "-1403.5(7) kHz",
        ),
        (
            UncertainValue::new(-1_403.450_697_053_347_5, BOUND_TWO_TERM_HZ / 1e3).unwrap(),
            "kHz",
            "-1403.5(7) kHz",
        ),
    ];
    let mut bad = Vec::new();
    for (u, unit, want) in cases {
        let got = format_parenthesis(u, unit);
        if got != want {
            bad.push(format!("{got} != {want}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "\"-1404.240(2) kHz\", \"-1403.5(7) kHz\" reproduced".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "two-term estimate for 4P1/2", criterion_1),
        (2, "three-term bracket consistency", criterion_2),
        (3, "three-term estimate for 4P1/2", criterion_3),
        (4, "extrapolation pipeline on synthetic models", criterion_4),
        (5, "extrapolation exactness", criterion_5),
        (6, "round trips", criterion_6),
        (7, "limit verdict logic", criterion_7),
        (8, "sigma linearity", criterion_8),
        (9, "parenthesis formatting", criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if KNOWN_RED.contains(&id) && !o.pass {
            " [known red]"
        } else {
            ""
        };
        println!("criterion {id} {verdict}{note}: {name}: {}", o.detail);
        if !o.pass && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
