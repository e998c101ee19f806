//! Acceptance criteria. Each prints one PASS/FAIL line; run with
//! `cargo test -p cframe --test acceptance -- --nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use cframe::presets::preset;
use cframe_core::duality::{
    canonical_dual, dual_distance, nonvanishing_check, probes, range_complement, riesz_type_check,
};
use cframe_core::frame::{bound_witness_for_moment, bounds_of_moment, frame_operator, moment_matrix, AnalysisOptions};
use cframe_core::measure::{Sample, DEFAULT_PANELS};
use cframe_core::module::quadratic_form;
use cframe_core::random::random_poly_frame;
use cframe_core::{
    AlgebraDescriptor, AlgebraElement, AlgebraKind, FrameMap, IntegrationMode, MeasureSpace, ModuleDescriptor,
    ModuleElement, Rational, Scalar, ToleranceConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn cframe(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cframe"))
        .args(args)
        .env_remove("CFRAME_TOLERANCE")
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        elapsed,
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or(Value::Null)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn first_example<T: Scalar>() -> FrameMap<T> {
    preset("paper-2.8").unwrap().frame::<T>().unwrap()
}

fn exact_bounds() -> Verdict {
    let (code, out, t) = cframe(&["analyze", "--example", "paper-2.8", "--exact"]);
    let r = json(&out);
    let b = &r["bounds"];
    let pass =
        code == 0 && b["lower"] == "1/3" && b["upper"] == "4/3" && b["exact"] == true && t < Duration::from_secs(1);
    verdict(
        pass,
        format!(
            "lower {} upper {} exact {} in {t:.2?}",
            b["lower"], b["upper"], b["exact"]
        ),
    )
}

fn exact_dual_pair() -> Verdict {
    let (code, out, t) = cframe(&["verify-pair", "--example", "paper-3.4", "--exact"]);
    let r = json(&out);
    let p = &r["pair"];
    let identity = json(r#"[["1", "0"], ["0", "1"]]"#);
    let pass = code == 0
        && p["is_dual_pair"] == true
        && p["exact"] == true
        && p["cross_moment"] == identity
        && p["identity_residual"] == 0.0
        && r["bounds"]["lower"] == "3/4"
        && r["bounds"]["upper"] == "31/9"
        && r["bounds"]["exact"] == true
        && t < Duration::from_secs(1);
    verdict(
        pass,
        format!(
            "cross moment {} dual {} G bounds ({}, {}) in {t:.2?}",
            p["cross_moment"], p["is_dual_pair"], r["bounds"]["lower"], r["bounds"]["upper"]
        ),
    )
}

fn canonical_dual_bounds() -> Verdict {
    let (_, out, _) = cframe(&["dual", "--example", "paper-2.8"]);
    let numeric = &json(&out)["dual"]["bounds"];
    let (lo, hi) = (
        numeric["lower"].as_f64().unwrap_or(f64::NAN),
        numeric["upper"].as_f64().unwrap_or(f64::NAN),
    );
    let numeric_ok = (lo - 0.75).abs() <= 1e-12 && (hi - 3.0).abs() <= 1e-12;

    let (_, out, _) = cframe(&["dual", "--example", "paper-2.8", "--exact"]);
    let exact = &json(&out)["dual"]["bounds"];
    let exact_ok = exact["lower"] == "3/4" && exact["upper"] == "3" && exact["exact"] == true;

    let f = first_example::<f64>();
    let opts = AnalysisOptions::new::<f64>();
    let mode = opts.mode;
    let s_inv = frame_operator(&f, mode).unwrap().invert(&opts.tolerances).unwrap();
    let sg = frame_operator(&canonical_dual(&f, &opts).unwrap(), mode).unwrap();
    let residual = sg.max_abs_diff(&s_inv);
    verdict(
        numeric_ok && exact_ok && residual <= 1e-9,
        format!(
            "numeric ({lo}, {hi}), exact ({}, {}), |S_G - S^-1| = {residual:e}",
            exact["lower"], exact["upper"]
        ),
    )
}

/// Runs the full suite once; criteria 4 and 5 both read it.
fn suite_run() -> (i32, String, Duration) {
    cframe(&["check", "--suite", "all", "--seed", "42", "--cases", "100"])
}

fn property_line<'a>(text: &'a str, name: &str) -> Option<(usize, usize, &'a str)> {
    text.lines().find_map(|l| {
        let mut it = l.split_whitespace();
        let _suite = it.next()?;
        if it.next()? != name {
            return None;
        }
        let (p, t) = it.next()?.split_once('/')?;
        Some((p.parse().ok()?, t.parse().ok()?, l))
    })
}

fn property_suite(run: &(i32, String, Duration)) -> Verdict {
    let (code, text, t) = run;
    let required = [
        "inner_product_axioms",
        "cauchy_schwarz",
        "frame_operator_basics",
        "s_equals_tt_star",
        "bounds_from_norms",
        "transform_ksk",
        "canonical_dual_reconstruction",
        "norm_criterion",
    ];
    let mut missing = Vec::new();
    for name in required {
        match property_line(text, name) {
            Some((p, total, _)) if p == total && total >= 100 => {}
            _ => missing.push(name),
        }
    }
    let pass = *code == 0 && missing.is_empty() && text.contains("result: pass") && *t < Duration::from_secs(60);
    verdict(
        pass,
        format!("exit {code}, {} failing or missing {missing:?}, {t:.2?}", missing.len()),
    )
}

fn bound_optimality(run: &(i32, String, Duration)) -> Verdict {
    let suite = property_line(&run.1, "bound_optimality");
    let suite_ok = matches!(suite, Some((p, t, _)) if p == t && t >= 100);

    // The two fixed examples, directly.
    let cfg = ToleranceConfig::default();
    let mut direct_ok = true;
    for name in ["paper-2.8", "paper-3.4"] {
        let f = preset(name).unwrap().frame::<Rational>().unwrap();
        let m = moment_matrix(&f, IntegrationMode::Exact).unwrap();
        let b = bounds_of_moment(&m, &cfg).unwrap();
        let (lower, upper) = (b.lower.as_f64(), b.upper.as_f64());
        let above = Rational::of_f64(lower + 1e-3 * (upper - lower) + 1e-6);
        let below = Rational::of_f64(lower - 1e-6);
        let w = bound_witness_for_moment(&m, &above, &cfg).unwrap();
        direct_ok &= w.is_some_and(|w| {
            let lhs = w.inner_product(&w).unwrap().scale_real(&above);
            !lhs.order_leq(&quadratic_form(&m, &w).unwrap(), &cfg).unwrap()
        });
        direct_ok &= bound_witness_for_moment(&m, &below, &cfg).unwrap().is_none();
    }
    verdict(
        suite_ok && direct_ok,
        format!(
            "suite {}, examples {}",
            suite.map_or("missing", |s| s.2.trim()),
            direct_ok
        ),
    )
}

fn riesz_dichotomy() -> Verdict {
    let opts = AnalysisOptions::new::<Rational>();
    let alg = AlgebraDescriptor::new::<Rational>(AlgebraKind::Full, 2).unwrap();
    let desc = ModuleDescriptor::new(alg, 1).unwrap();
    let id = ModuleElement::new(desc, vec![AlgebraElement::identity(alg)]).unwrap();
    let atoms = |m: usize| MeasureSpace::atoms((0..m as i64).map(|i| q(i, 1)).collect(), vec![q(1, 1); m]).unwrap();

    // Two atoms carrying the same value.
    let twin = FrameMap::constant(atoms(2), &id);
    let r = riesz_type_check(&twin, &opts).unwrap();
    let g = canonical_dual(&twin, &opts).unwrap();
    let twin_ok = r.riesz_type == Some(false)
        && r.is_dual_pair
        && r.second_dual
            .as_ref()
            .is_some_and(|s| dual_distance(&g, s, 0).unwrap() > 0.0);

    // One atom: every perturbation attempt collapses to zero.
    let single = FrameMap::constant(atoms(1), &id);
    let r = riesz_type_check(&single, &opts).unwrap();
    let zero_perturbations = probes(&single)
        .unwrap()
        .iter()
        .all(|p| range_complement(&single, p, &opts).unwrap().is_zero());
    let single_ok = r.riesz_type == Some(true) && r.second_dual.is_none() && zero_perturbations;

    // An identity atom next to a vanishing one.
    let measure = MeasureSpace::atoms(vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(1, 2)]).unwrap();
    let samples = vec![
        Sample {
            point: q(0, 1),
            weight: q(1, 1),
            value: id.clone(),
        },
        Sample {
            point: q(1, 1),
            weight: q(1, 2),
            value: ModuleElement::zero(desc),
        },
    ];
    let with_zero = FrameMap::sampled(desc, measure, samples).unwrap();
    let nv = nonvanishing_check(&with_zero, &opts).unwrap();
    let zero_ok = !nv.all_nonzero
        && nv.zero_atoms == vec![1]
        && nv.second_dual_verified
        && riesz_type_check(&with_zero, &opts).unwrap().riesz_type == Some(false);

    verdict(
        twin_ok && single_ok && zero_ok,
        format!("two identical atoms {twin_ok}, single atom {single_ok}, zero atom {zero_ok}"),
    )
}

fn quadrature_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let kind = if rng.gen_bool(0.5) {
            AlgebraKind::Full
        } else {
            AlgebraKind::Diagonal
        };
        let alg = AlgebraDescriptor::new::<Rational>(kind, rng.gen_range(1..=3)).unwrap();
        let desc = ModuleDescriptor::new(alg, rng.gen_range(1..=3)).unwrap();
        let degree = rng.gen_range(0..=9);
        let measure = MeasureSpace::lebesgue(q(0, 1), q(1, 1)).unwrap();
        let f = random_poly_frame::<Rational, _>(desc, measure, degree, &mut rng).unwrap();
        let exact = moment_matrix(&f, IntegrationMode::Exact).unwrap().to_f64();
        let numeric = moment_matrix(&f.to_f64(), IntegrationMode::Quadrature { panels: DEFAULT_PANELS }).unwrap();
        worst = worst.max(exact.max_abs_diff(&numeric));
    }
    verdict(
        worst <= 1e-12,
        format!("worst entrywise difference {worst:e} over 50 frames"),
    )
}

#[test]
fn acceptance_criteria() {
    let suite = suite_run();
    let results = [
        ("1 exact frame bounds of the first example", exact_bounds()),
        ("2 exact dual pair of the second example", exact_dual_pair()),
        ("3 canonical dual bounds", canonical_dual_bounds()),
        ("4 property suite, seed 42, 100 cases", property_suite(&suite)),
        ("5 bound optimality witnesses", bound_optimality(&suite)),
        ("6 Riesz-type dichotomy on atoms", riesz_dichotomy()),
        ("7 quadrature vs exact moments", quadrature_oracle()),
    ];
    for (name, v) in &results {
        println!(
            "{} criterion {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let failed: Vec<_> = results.iter().filter(|(_, v)| !v.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
