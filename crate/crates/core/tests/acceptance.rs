//! Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p vega-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vega_core::harness::{
    angular_mean_witness, decomposition_suite, diminishing_transfer_grid, dominance_suite, generate,
    oracle, pigou_dalton_suite, population_invariance_suite, scale_invariance_suite, Family,
    GeneratorSpec, SuiteOutcome,
};
use vega_core::report::RunReport;
use vega_core::{evaluate, gini, vega, ComputePlan, Measure, Sample};

const SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite(outcome: SuiteOutcome) -> Outcome {
    let detail = format!(
        "{}: {} cases, {} failures, {} skipped, worst {:e}",
        outcome.name, outcome.cases, outcome.failures, outcome.skipped, outcome.worst
    );
    if outcome.passed() {
        Ok(detail)
    } else {
        Err(format!("{detail}; first failure: {}", outcome.first_failure.unwrap_or_default()))
    }
}

fn within_time(limit: Duration, started: Instant, detail: String) -> Outcome {
    let took = started.elapsed();
    if took <= limit {
        Ok(format!("{detail} in {:.2?}", took))
    } else {
        Err(format!("{detail} but took {:.2?} (limit {:?})", took, limit))
    }
}

fn equality_null() -> Outcome {
    let mut worst: f64 = 0.0;
    for (c, n) in [(1.0, 2), (0.001, 17), (42.5, 500), (1e9, 1000), (3.0, 1)] {
        let s = Sample::new(vec![c; n]);
        worst = worst.max(vega(&s).map_err(|e| e.to_string())?.value.abs());
        worst = worst.max(gini(&s).map_err(|e| e.to_string())?.value.abs());
        let weighted = Sample::weighted(vec![c; n], (0..n).map(|i| 1.0 + i as f64).collect());
        worst = worst.max(vega(&weighted).map_err(|e| e.to_string())?.value.abs());
    }
    let detail = format!("max |index| on constant samples {worst:e}");
    if worst <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn upper_bound() -> Outcome {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2usize, 10, 1000] {
        let mut ys = vec![0.0; n - 1];
        ys.push(7.5);
        let got = vega(&Sample::new(ys)).map_err(|e| e.to_string())?.value;
        let dev = (got - (n as f64 - 1.0) / n as f64).abs();
        worst = worst.max(dev);
        if dev > 1e-12 {
            return Err(format!("n={n}: V={got}, deviation {dev:e}"));
        }
    }
    within_time(
        Duration::from_secs(1),
        started,
        format!("V = (n-1)/n for n in {{2, 10, 1000}}, worst deviation {worst:e}"),
    )
}

fn invariance() -> Outcome {
    let started = Instant::now();
    let scale = suite(scale_invariance_suite(1000, SEED))?;
    let population = suite(population_invariance_suite(1000, SEED + 1))?;
    within_time(Duration::from_secs(30), started, format!("{scale}; {population}"))
}

/// Samples for the oracle comparison: mostly positive, some with zeros, some
/// weighted, some with a minority of negative values.
fn oracle_sample(rng: &mut ChaCha8Rng) -> Sample {
    let n = rng.random_range(2..=2000);
    let family = match rng.random_range(0..3) {
        0 => Family::LogNormal {
            mu: 0.0,
            sigma: rng.random_range(0.3..2.0),
        },
        1 => Family::Pareto {
            alpha: rng.random_range(1.2..3.0),
            x_min: 1.0,
        },
        _ => Family::Uniform { lo: 0.5, hi: 50.0 },
    };
    let (mut ys, _) = generate(&GeneratorSpec::new(family, n, rng.random()))
        .expect("valid generator")
        .into_parts();
    match rng.random_range(0..4) {
        0 => ys.iter_mut().take(n / 3).for_each(|y| *y = 0.0),
        1 => ys.iter_mut().take(n / 5).for_each(|y| *y = -*y * 0.1),
        _ => {}
    }
    if rng.random_range(0..3) == 0 {
        let ws = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
        Sample::weighted(ys, ws)
    } else {
        Sample::new(ys)
    }
}

fn engine_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut worst: f64 = 0.0;
    let mut largest = 0;
    for case in 0..100 {
        let s = oracle_sample(&mut rng);
        largest = largest.max(s.len());
        for measure in Measure::ALL {
            let reference = oracle(&s, measure).map_err(|e| format!("case {case}: oracle: {e}"))?;
            let mut bits = None;
            for threads in [1, 2, 8] {
                let plan = ComputePlan::exact().with_threads(threads);
                let got = evaluate(&s, measure, &plan)
                    .map_err(|e| format!("case {case}: {measure:?}: {e}"))?
                    .value;
                let dev = (got - reference).abs();
                worst = worst.max(dev);
                if dev > 1e-12 {
                    return Err(format!(
                        "case {case} (n={}): {measure:?} engine {got} vs oracle {reference}",
                        s.len()
                    ));
                }
                match bits {
                    None => bits = Some(got.to_bits()),
                    Some(b) if b != got.to_bits() => {
                        return Err(format!("case {case}: {measure:?} differs at {threads} threads"));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(format!(
        "100 samples x 3 measures (n <= {largest}), worst deviation {worst:e}, bit-identical at 1/2/8 threads"
    ))
}

fn quantile_sanity() -> Outcome {
    let spec = GeneratorSpec::new(Family::LogNormal { mu: 0.0, sigma: 1.0 }, 100_000, SEED);
    let s = generate(&spec).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let exact = evaluate(&s, Measure::Vega, &ComputePlan::exact())
        .map_err(|e| e.to_string())?
        .value;
    let took = started.elapsed();
    let mut errors = Vec::new();
    for q in [10, 100, 1000] {
        let approx = evaluate(&s, Measure::Vega, &ComputePlan::quantile(q))
            .map_err(|e| e.to_string())?
            .value;
        errors.push((approx - exact).abs());
    }
    let detail = format!(
        "exact V={exact:.12}, |Vq - V| at q=10/100/1000: {:.3e} {:.3e} {:.3e}, exact run {:.2?}",
        errors[0], errors[1], errors[2], took
    );
    if errors.windows(2).any(|w| w[1] > w[0]) {
        return Err(format!("not monotone: {detail}"));
    }
    if took > Duration::from_secs(10) {
        return Err(format!("too slow: {detail}"));
    }
    Ok(detail)
}

fn cli_end_to_end() -> Outcome {
    // Frozen from an independent pairwise evaluation of the income column.
    const GINI: f64 = 0.4114942528735633;
    const VEGA: f64 = 0.2791742131609267;
    let golden = include_str!("data/five_rows.expected.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_vega"))
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .args(["--input", "tests/data/five_rows.csv", "--column", "income"])
            .args(["--measure", "gini", "--measure", "vega"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    if !first.status.success() {
        return Err(format!("exit {:?}: {}", first.status.code(), String::from_utf8_lossy(&first.stderr)));
    }
    let second = run()?;
    if first.stdout != second.stdout {
        return Err("two runs produced different bytes".into());
    }
    let text = String::from_utf8(first.stdout).map_err(|e| e.to_string())?;
    if text != golden {
        return Err("output differs from tests/data/five_rows.expected.json".into());
    }
    let report = RunReport::from_json(&text).map_err(|e| e.to_string())?;
    let value = |m: Measure| report.measures.iter().find(|r| r.measure == m).map(|r| r.value);
    let (Some(g), Some(v)) = (value(Measure::Gini), value(Measure::Vega)) else {
        return Err("report lacks gini or vega".into());
    };
    let dev = (g - GINI).abs().max((v - VEGA).abs());
    if dev > 1e-12 {
        return Err(format!("gini {g}, vega {v}: deviation {dev:e}"));
    }
    Ok(format!("byte-stable JSON, gini {g}, vega {v}, deviation {dev:e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("equality null", equality_null),
        ("upper bound (n-1)/n", upper_bound),
        ("dominance V <= G", || suite(dominance_suite(1000, SEED + 2))),
        ("scale and population invariance", invariance),
        ("pigou-dalton transfers", || suite(pigou_dalton_suite(1000, SEED + 3, false))),
        ("diminishing transfer grid", || suite(diminishing_transfer_grid())),
        ("angular-mean witness", || {
            let w = angular_mean_witness();
            let detail = format!(
                "angular mean {:.6} -> {:.6}, V {:.6} -> {:.6}, G {:.6} -> {:.6}",
                w.angular_mean[0], w.angular_mean[1], w.vega[0], w.vega[1], w.gini[0], w.gini[1]
            );
            let holds = w.angular_mean[1] > w.angular_mean[0] && w.vega[1] < w.vega[0] && w.gini[1] < w.gini[0];
            if holds {
                Ok(detail)
            } else {
                Err(detail)
            }
        }),
        ("decomposition identity", || {
            let outcome = decomposition_suite(200, SEED + 4);
            if outcome.skipped > 0 {
                return Err(format!("{} of 200 samples skipped", outcome.skipped));
            }
            suite(outcome)
        }),
        ("engine oracle equivalence and determinism", engine_equivalence),
        ("quantile approximation sanity", quantile_sanity),
        ("cli end-to-end", cli_end_to_end),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{took:.2?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{took:.2?}]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
