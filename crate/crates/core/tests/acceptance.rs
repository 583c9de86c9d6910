//! Acceptance suite. Each criterion prints one `[PASS]`/`[FAIL]` line; the test fails if
//! any criterion fails.
//!
//! Run with `cargo test -p slm-dqc1 --test acceptance -- --nocapture` to see the lines.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;
use slm_dqc1::deutsch_jozsa::{run_dj, Verdict};
use slm_dqc1::dqc1::{analytic_trace, apply_slm, exact_normalized_trace, propagate_systematics};
use slm_dqc1::measurement::monte_carlo_trace;
use slm_dqc1::rng::rng_from_seed;
use slm_dqc1::summation::CompensatedSum;
use slm_dqc1::{
    CellSpec, Counts, Dephasing, Mask, MeasurementConfig, PanelDims, Profile, Scalar,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Ramp endpoints in units of π with the flat-beam, dephasing-free trace reported for
/// each: `(start, end, Re, Im)`.
const REFERENCE_RAMPS: [(f64, f64, f64, f64); 4] = [
    (0.75, 1.25, -0.903, 0.012),
    (1.0, 2.0, -0.004, -0.637),
    (0.5, 1.5, -0.644, -0.003),
    (0.5, 1.0, -0.638, 0.639),
];

fn ramp(start: f64, end: f64) -> Mask {
    Mask::linear_ramp(PanelDims::full_hd(), start * PI, end * PI)
}

fn dephasing(p: f64) -> Dephasing {
    Dephasing::new(p).unwrap()
}

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn ac1_reference_ramp_traces() -> Outcome {
    const TOL: f64 = 0.012;
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for &(a, b, re, im) in &REFERENCE_RAMPS {
        let t0 = Instant::now();
        let trace = exact_normalized_trace(&ramp(a, b));
        let dt = t0.elapsed();
        slowest = slowest.max(dt);
        let dev = (trace.re - re).abs().max((trace.im - im).abs());
        worst = worst.max(dev);
        check(
            dev <= TOL,
            format!("({a}π, {b}π): got ({:.4}, {:.4}), want ({re}, {im}) ± {TOL}", trace.re, trace.im),
        )?;
        check(dt < Duration::from_secs(1), format!("({a}π, {b}π) took {dt:?}"))?;
    }
    Ok(format!("max deviation {worst:.4} ≤ {TOL}, slowest mask {slowest:?} < 1 s"))
}

fn ac2_dephasing_factorization() -> Outcome {
    let mut rng = rng_from_seed(2);
    let dims = PanelDims::new(64, 48).unwrap();
    let ps = [0.0, 0.04, 0.08, 0.25, 0.5];
    for m in 0..50 {
        let mask = common::random_mask(&mut rng, dims);
        let profile = common::random_profile(&mut rng, dims);
        let base = analytic_trace(&mask, &profile, dephasing(0.0)).unwrap();
        for &p in &ps {
            let k = 1.0 - 2.0 * p;
            let est = analytic_trace(&mask, &profile, dephasing(p)).unwrap();
            check(
                est.re.to_bits() == (k * base.re).to_bits() && est.im.to_bits() == (k * base.im).to_bits(),
                format!("mask {m}, p = {p}: ({}, {}) vs ({}, {})", est.re, est.im, k * base.re, k * base.im),
            )?;
        }
    }
    Ok("50 masks x 5 dephasing values bitwise equal".into())
}

fn ac3_deutsch_jozsa_full_resolution() -> Outcome {
    let dims = PanelDims::full_hd();
    let flat = Profile::flat(dims);
    let p = dephasing(0.08);
    let threshold = 0.42;
    let t0 = Instant::now();
    let mut correct = 0;
    let mut worst_balanced = 0.0f64;
    let mut classify = |mask: &Mask, seed: u64, want: Verdict| {
        let cfg = MeasurementConfig::per_photon(100_000, seed).unwrap();
        let v = run_dj(mask, &flat, p, Some(&cfg), threshold).unwrap();
        if want == Verdict::Balanced {
            worst_balanced = worst_balanced.max(v.statistic.abs());
        }
        correct += usize::from(v.verdict == want);
    };
    classify(&Mask::constant(dims, 0.0), 1, Verdict::ConstantPlus);
    classify(&Mask::constant(dims, PI), 2, Verdict::ConstantMinus);
    let cells = CellSpec::square(1).unwrap();
    for trial in 0..100u64 {
        let mask = Mask::random_balanced(dims, cells, 1000 + trial).unwrap();
        classify(&mask, 5000 + trial, Verdict::Balanced);
    }
    let dt = t0.elapsed();
    check(correct == 102, format!("{correct}/102 correct verdicts"))?;
    check(dt < Duration::from_secs(60), format!("took {dt:?}"))?;
    Ok(format!(
        "102/102 correct, max |⟨σx⟩| over balanced oracles {worst_balanced:.4}, {dt:.2?} < 60 s"
    ))
}

fn ac4_monte_carlo_convergence() -> Outcome {
    let dims = PanelDims::full_hd();
    let mask = ramp(0.5, 1.0);
    let flat = Profile::flat(dims);
    let p = dephasing(0.0);
    let exact = analytic_trace(&mask, &flat, p).unwrap();
    let n = 1_000_000u64;
    let runs: Vec<_> = (0..100u64)
        .map(|seed| monte_carlo_trace(&mask, &flat, p, &MeasurementConfig::binomial(n, seed).unwrap()).unwrap())
        .collect();

    let mut summary = Vec::new();
    for (name, truth, pick) in [
        ("re", exact.re, (|e: &slm_dqc1::Estimate| (e.re, e.stat_err_re)) as fn(&_) -> _),
        ("im", exact.im, |e: &slm_dqc1::Estimate| (e.im, e.stat_err_im)),
    ] {
        let inside = runs
            .iter()
            .filter(|e| {
                let (v, se) = pick(e);
                (v - truth).abs() <= 4.0 * se
            })
            .count();
        let values: Vec<f64> = runs.iter().map(|e| pick(e).0).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt();
        let predicted = ((1.0 - truth * truth) / n as f64).sqrt();
        let ratio = sd / predicted;
        check(inside >= 99, format!("{name}: only {inside}/100 within 4 SE"))?;
        check(
            (1.0 / 1.3..=1.3).contains(&ratio),
            format!("{name}: sd {sd:.3e} vs predicted {predicted:.3e} (ratio {ratio:.3})"),
        )?;
        summary.push(format!("{name} {inside}/100 within 4 SE, sd ratio {ratio:.3}"));
    }
    Ok(summary.join("; "))
}

fn ac5_brute_force_oracle() -> Outcome {
    let mut rng = rng_from_seed(5);
    let dims = PanelDims::new(96, 96).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mask = common::random_mask(&mut rng, dims);
        let profile = common::random_profile(&mut rng, dims);
        let p: f64 = rng.random::<f64>() * 0.5;
        let (sx, sy) = common::naive_expectations(&mask, &profile, p);
        let est = analytic_trace(&mask, &profile, dephasing(p)).unwrap();
        worst = worst.max((est.re - sx).abs()).max((est.im - sy).abs());
    }
    check(worst <= 1e-12, format!("max deviation {worst:e} > 1e-12"))?;
    Ok(format!("20 masks, max deviation {worst:.2e} ≤ 1e-12"))
}

fn ac6_ingestion() -> Outcome {
    let grid = Counts::new(2, 1, 80, vec![300.0, 100.0]).unwrap();
    let profile = Profile::from_counts(&grid, PanelDims::new(160, 80).unwrap()).unwrap();
    let mass = |x0: usize| {
        let mut acc = CompensatedSum::new();
        for y in 0..80 {
            for x in x0..x0 + 80 {
                acc += profile.weights()[y * 160 + x];
            }
        }
        acc.value()
    };
    let (left, right) = (mass(0), mass(80));
    check(left == 0.75 && right == 0.25, format!("cell masses {left}, {right}"))?;

    let hd = PanelDims::full_hd();
    let mut rng = rng_from_seed(6);
    let measured = Counts::new(48, 27, 40, (0..48 * 27).map(|_| rng.random::<f64>() * 1e3).collect()).unwrap();
    let loaded = Profile::from_reader(
        Profile::gaussian(PanelDims::new(50, 40).unwrap(), 20.0, 22.0, 9.0)
            .unwrap()
            .to_text()
            .as_bytes(),
    )
    .unwrap()
    .profile;
    let profiles = [
        ("flat", Profile::flat(hd)),
        ("gaussian", Profile::gaussian(hd, 960.0, 540.0, 300.0).unwrap()),
        ("counts", Profile::from_counts(&measured, hd).unwrap()),
        ("weights", common::random_profile(&mut rng, hd)),
        ("loaded", loaded),
        ("two-cell", profile.clone()),
    ];
    let mut worst = 0.0f64;
    for (name, prof) in &profiles {
        let dev = (prof.total() - 1.0).abs();
        worst = worst.max(dev);
        check(dev <= 1e-12, format!("{name}: |Σc − 1| = {dev:e}"))?;
    }
    Ok(format!("cell masses 0.75/0.25 exact, max |Σc − 1| = {worst:.1e}"))
}

fn ac7_systematic_magnitude() -> Outcome {
    let hd = PanelDims::full_hd();
    // 48 x 27 cells of 40 px, 100 000 counts in total.
    let cells = 48 * 27;
    let grid = Counts::uniform(48, 27, 40, 1e5 / cells as f64).unwrap();
    let profile = Profile::from_counts(&grid, hd).unwrap();
    let mut lo = f64::MAX;
    let mut hi = 0.0f64;
    for &(a, b, _, _) in &REFERENCE_RAMPS {
        let sys = propagate_systematics(&ramp(a, b), &profile, dephasing(0.08), 256, Some(&grid)).unwrap();
        for (name, v) in [("re", sys.total_re()), ("im", sys.total_im())] {
            lo = lo.min(v);
            hi = hi.max(v);
            check(
                (0.001..=0.02).contains(&v),
                format!("({a}π, {b}π) {name}: {v:.5} outside [0.001, 0.02]"),
            )?;
        }
    }
    Ok(format!("8 components in [{lo:.5}, {hi:.5}] ⊂ [0.001, 0.02]"))
}

fn small_case() -> impl Strategy<Value = (usize, usize, u64, f64)> {
    (1usize..24, 1usize..24, any::<u64>(), 0.0f64..=0.5)
}

fn run_property<S, F>(name: &str, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 1000,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn ac8_invariants() -> Outcome {
    run_property("bloch norm", small_case(), |(w, h, seed, p)| {
        let dims = PanelDims::new(w, h).unwrap();
        let mut rng = rng_from_seed(seed);
        let est = analytic_trace(&common::random_mask(&mut rng, dims), &common::random_profile(&mut rng, dims), dephasing(p)).unwrap();
        prop_assert!(est.value().norm() <= 1.0 - 2.0 * p + 1e-12);
        Ok(())
    })?;
    run_property("conjugation", small_case(), |(w, h, seed, p)| {
        let dims = PanelDims::new(w, h).unwrap();
        let mut rng = rng_from_seed(seed);
        let (mask, prof) = (common::random_mask(&mut rng, dims), common::random_profile(&mut rng, dims));
        let a = analytic_trace(&mask, &prof, dephasing(p)).unwrap();
        let b = analytic_trace(&mask.conjugate(), &prof, dephasing(p)).unwrap();
        prop_assert!((a.re - b.re).abs() <= 1e-12 && (a.im + b.im).abs() <= 1e-12);
        Ok(())
    })?;
    run_property("global phase", (small_case(), -10.0f64..10.0), |((w, h, seed, p), delta)| {
        let dims = PanelDims::new(w, h).unwrap();
        let mut rng = rng_from_seed(seed);
        let (mask, prof) = (common::random_mask(&mut rng, dims), common::random_profile(&mut rng, dims));
        let a = analytic_trace(&mask, &prof, dephasing(p)).unwrap().value();
        let b = analytic_trace(&mask.shifted(delta), &prof, dephasing(p)).unwrap().value();
        let want = a * num_complex::Complex::from_polar(1.0, delta);
        prop_assert!((b - want).norm() <= 1e-12, "{b} vs {want}");
        Ok(())
    })?;
    run_property("density matrix", small_case(), |(w, h, seed, p)| {
        let dims = PanelDims::new(w, h).unwrap();
        let mut rng = rng_from_seed(seed);
        let rho = apply_slm(&common::random_mask(&mut rng, dims), &common::random_profile(&mut rng, dims), dephasing(p)).unwrap();
        prop_assert!(rho.is_valid(f64::unit_tolerance()));
        let m = rho.entries();
        prop_assert_eq!(m[1][0], m[0][1].conj());
        prop_assert_eq!(m[0][0].im, 0.0);
        Ok(())
    })?;
    run_property("quantization", (small_case(), 2u32..1025), |((w, h, seed, _), levels)| {
        let dims = PanelDims::new(w, h).unwrap();
        let mask = common::random_mask(&mut rng_from_seed(seed), dims);
        let once = mask.quantize(levels).unwrap();
        prop_assert_eq!(once.quantize(levels).unwrap(), once);
        Ok(())
    })?;
    run_property("determinism", (1usize..16, 1usize..8, any::<u64>()), |(w, h, seed)| {
        let dims = PanelDims::new(w, 2 * h).unwrap();
        let cells = CellSpec::square(1).unwrap();
        let a = Mask::random_balanced(dims, cells, seed).unwrap();
        prop_assert_eq!(&a, &Mask::random_balanced(dims, cells, seed).unwrap());
        let flat = Profile::flat(dims);
        let cfg = MeasurementConfig::per_photon(500, seed).unwrap();
        let x = monte_carlo_trace(&a, &flat, dephasing(0.08), &cfg).unwrap();
        prop_assert_eq!(x, monte_carlo_trace(&a, &flat, dephasing(0.08), &cfg).unwrap());
        Ok(())
    })?;
    Ok("6 properties x 1000 cases".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("AC1 reference ramp traces, flat beam", ac1_reference_ramp_traces),
        ("AC2 dephasing factorization", ac2_dephasing_factorization),
        ("AC3 Deutsch-Jozsa at full resolution", ac3_deutsch_jozsa_full_resolution),
        ("AC4 Monte Carlo convergence", ac4_monte_carlo_convergence),
        ("AC5 brute-force oracle agreement", ac5_brute_force_oracle),
        ("AC6 beam ingestion", ac6_ingestion),
        ("AC7 systematic-error magnitude", ac7_systematic_magnitude),
        ("AC8 invariant suite", ac8_invariants),
    ];
    let mut failed = Vec::new();
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                println!("[FAIL] {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
