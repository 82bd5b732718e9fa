//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use causalab::cli::ReportFile;
use causalab::estimators::{
    backdoor_adjust, erm_predictor, irm_fit, irm_penalty, irm_penalty_gradient, iv_estimate,
    ols_effect, IrmConfig,
};
use causalab::experiments::{
    default_plan, read_long_csv, run_demo, write_long_csv, DemoReport, ReplicationStats,
};
use causalab::numerics::{
    fd_gradient, logistic_gradient, logistic_objective, ols_fit, LinearFit, LossKind,
};
use causalab::scm::{demo1_env, demo1_spec, Dataset, RngHandle};
use causalab::validate::fisher_z_test;
use common::*;
use nalgebra::DMatrix;
use rand::Rng;

const SEED: u64 = 42;

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn within(&mut self, label: &str, value: f64, lo: f64, hi: f64) {
        self.expect(
            (lo..=hi).contains(&value),
            format!("{label} = {value:.4} not in [{lo}, {hi}]"),
        );
    }
}

fn stats<'a>(
    r: &'a DemoReport,
    scenario: &str,
    method: &str,
    metric: &str,
) -> &'a ReplicationStats {
    r.get(scenario, method, metric)
        .unwrap_or_else(|| panic!("missing {scenario}/{method}/{metric}"))
}

fn timed_demo(id: u8) -> (DemoReport, Duration) {
    let start = Instant::now();
    let report = run_demo(id, &default_plan(id, SEED).unwrap()).unwrap();
    (report, start.elapsed())
}

fn demo1(c: &mut Check) -> String {
    let (r, took) = timed_demo(1);
    for s in r.scenarios() {
        c.within(
            &format!("erm ratio {s}"),
            stats(&r, s, "erm", "ratio").mean,
            12.0,
            25.0,
        );
        c.within(
            &format!("causal ratio {s}"),
            stats(&r, s, "causal", "ratio").mean,
            0.95,
            1.25,
        );
    }
    let (r500, r5000) = (
        stats(&r, "n500", "erm", "ratio").mean,
        stats(&r, "n5000", "erm", "ratio").mean,
    );
    c.within("erm ratio n5000 / n500", r5000 / r500, 0.8, 1.2);
    c.expect(took < Duration::from_secs(30), format!("runtime {took:?}"));
    format!(
        "erm ratio {:.2} (n=1000), causal {:.2}, {:.1}s",
        stats(&r, "n1000", "erm", "ratio").mean,
        stats(&r, "n1000", "causal", "ratio").mean,
        took.as_secs_f64()
    )
}

fn demo2(c: &mut Check) -> String {
    let (r, took) = timed_demo(2);
    c.expect(
        stats(&r, "p0.98", "erm", "train_acc").mean >= 0.95,
        "erm train acc at p=0.98 < 0.95",
    );
    c.within(
        "erm ood acc p0.98",
        stats(&r, "p0.98", "erm", "ood_acc").mean,
        0.05,
        0.25,
    );
    let scenarios = r.scenarios();
    for s in &scenarios {
        c.within(
            &format!("causal train {s}"),
            stats(&r, s, "causal", "train_acc").mean,
            0.82,
            0.88,
        );
        c.within(
            &format!("causal ood {s}"),
            stats(&r, s, "causal", "ood_acc").mean,
            0.82,
            0.88,
        );
    }
    let mut inversions = 0;
    for w in scenarios.windows(2) {
        let (a, b) = (stats(&r, w[0], "erm", "gap"), stats(&r, w[1], "erm", "gap"));
        if b.mean < a.mean {
            inversions += 1;
            let se =
                (a.std_dev.powi(2) / a.n_reps as f64 + b.std_dev.powi(2) / b.n_reps as f64).sqrt();
            c.expect(
                a.mean - b.mean <= se,
                format!("gap inversion {} -> {} beyond 1 se", w[0], w[1]),
            );
        }
    }
    c.expect(inversions <= 1, format!("{inversions} gap inversions"));
    c.expect(took < Duration::from_secs(120), format!("runtime {took:?}"));
    format!(
        "p=0.98 erm train {:.3} ood {:.3}, causal ood {:.3}, {:.1}s",
        stats(&r, "p0.98", "erm", "train_acc").mean,
        stats(&r, "p0.98", "erm", "ood_acc").mean,
        stats(&r, "p0.98", "causal", "ood_acc").mean,
        took.as_secs_f64()
    )
}

fn demo3(c: &mut Check) -> String {
    let (r, took) = timed_demo(3);
    for n in [100, 200, 400, 800, 1600] {
        let s = format!("n{n}");
        let ols = stats(&r, &s, "ols", "tau_hat");
        let dml = stats(&r, &s, "dml", "tau_hat");
        c.within(
            &format!("ols |bias| {s}"),
            ols.bias.unwrap().abs(),
            0.25,
            0.37,
        );
        if n >= 400 {
            c.expect(
                ols.coverage.unwrap() <= 0.05,
                format!("ols coverage {s} = {:?}", ols.coverage),
            );
        }
        c.within(
            &format!("dml coverage {s}"),
            dml.coverage.unwrap(),
            0.90,
            0.98,
        );
    }
    let d100 = stats(&r, "n100", "dml", "tau_hat").bias.unwrap().abs();
    let d1600 = stats(&r, "n1600", "dml", "tau_hat").bias.unwrap().abs();
    c.expect(d100 <= 0.03, format!("dml |bias| n100 = {d100:.4}"));
    c.expect(d1600 <= 0.015, format!("dml |bias| n1600 = {d1600:.4}"));
    let rate = stats(&r, "n400", "dml", "tau_hat").rmse.unwrap()
        / stats(&r, "n1600", "dml", "tau_hat").rmse.unwrap();
    c.within("dml rmse(400)/rmse(1600)", rate, 1.5, 2.5);
    c.expect(took < Duration::from_secs(180), format!("runtime {took:?}"));
    format!(
        "ols bias {:.3}, dml coverage n100 {:.3} n1600 {:.3}, rmse ratio {rate:.2}, {:.1}s",
        stats(&r, "n1600", "ols", "tau_hat").bias.unwrap(),
        stats(&r, "n100", "dml", "tau_hat").coverage.unwrap(),
        stats(&r, "n1600", "dml", "tau_hat").coverage.unwrap(),
        took.as_secs_f64()
    )
}

fn demo4(c: &mut Check) -> String {
    let plan = default_plan(4, SEED).unwrap();
    let start = Instant::now();
    let r = run_demo(4, &plan).unwrap();
    let took = start.elapsed();
    let standard = stats(&r, "weights", "standard_reward", "length_weight");
    c.within("mean standard w_L", standard.mean, 0.48, 0.58);
    // Every replication's weight: rerun the per-replication fits and check the minimum.
    let spec = causalab::scm::demo4_spec();
    let min_w = (0..plan.replications)
        .map(|rep| {
            let h = plan.handle(0.0, rep).derive("data");
            let data = spec.sample(&Default::default(), 5000, h).unwrap();
            causalab::estimators::reward_fit(&data, causalab::estimators::RewardKind::Standard)
                .unwrap()
                .length_weight
        })
        .fold(f64::INFINITY, f64::min);
    c.expect(min_w > 0.35, format!("min standard w_L = {min_w:.4}"));
    let causal = stats(&r, "weights", "causal_reward", "length_weight");
    c.expect(
        causal.mean == 0.0 && causal.std_dev == 0.0,
        "causal w_L not exactly 0",
    );
    c.within(
        "standard gain dl3",
        stats(&r, "dl3", "standard_reward", "gain").mean,
        1.3,
        1.9,
    );
    for dl in &plan.grid {
        let g = stats(&r, &format!("dl{dl}"), "causal_reward", "gain");
        c.expect(
            g.mean == 0.0 && g.std_dev == 0.0,
            format!("causal gain at dl{dl} not 0"),
        );
    }
    c.expect(took < Duration::from_secs(30), format!("runtime {took:?}"));
    format!(
        "standard w_L {:.3} (min {min_w:.3}), gain at dL=3 {:.3}, causal w_L 0, {:.1}s",
        standard.mean,
        stats(&r, "dl3", "standard_reward", "gain").mean,
        took.as_secs_f64()
    )
}

fn estimators(c: &mut Check) -> String {
    let (truth, _) = discrete_backdoor_truth();
    let data = sample(&discrete_backdoor_spec(), 100_000, SEED);
    let bd = backdoor_adjust(&data, "X", "Y", "Z", 10).unwrap().ate();
    c.expect(
        (bd - truth).abs() <= 0.02,
        format!("backdoor {bd:.4} vs {truth}"),
    );

    let data = sample(&confounded_iv_spec(0.5), 100_000, SEED);
    let (z, d, y) = (
        data.column("Z").unwrap(),
        data.column("D").unwrap(),
        data.column("Y").unwrap(),
    );
    let iv = iv_estimate(z, d, y).unwrap().tau_hat;
    let ols = ols_effect(d, y).unwrap().tau_hat;
    c.expect((iv - 0.5).abs() <= 0.02, format!("iv {iv:.4}"));
    c.expect(
        (ols - 0.5).abs() > 0.2,
        format!("ols {ols:.4} not confounded"),
    );

    let spec = confounded_iv_spec(0.0);
    let root = RngHandle::new(SEED, 0).derive("iv-null");
    let covered = (0..100)
        .filter(|&rep| {
            let data = spec
                .sample(&Default::default(), 10_000, root.derive_u64(rep))
                .unwrap();
            let est = iv_estimate(
                data.column("Z").unwrap(),
                data.column("D").unwrap(),
                data.column("Y").unwrap(),
            );
            est.unwrap().covers(0.0)
        })
        .count() as f64
        / 100.0;
    c.within("iv null coverage", covered, 0.90, 0.99);
    format!("backdoor {bd:.4} (truth {truth}), iv {iv:.4} (ols {ols:.3}), iv coverage {covered:.2}")
}

fn two_envs(n: usize) -> Vec<Dataset> {
    let spec = demo1_spec();
    [1.0, -1.0]
        .iter()
        .map(|&s| {
            spec.sample(
                &demo1_env(s),
                n,
                RngHandle::new(SEED, 0).derive(&format!("env{s}")),
            )
            .unwrap()
        })
        .collect()
}

fn irm(c: &mut Check) -> String {
    let envs = two_envs(5000);
    let features = ["X_causal", "X_spur"];
    let free = irm_fit(
        &envs,
        &features,
        &IrmConfig {
            penalty_weight: 0.0,
            ..IrmConfig::default()
        },
    )
    .unwrap();
    let pooled = erm_predictor(&Dataset::concat(&envs).unwrap(), &features).unwrap();
    let sup = free
        .fit
        .coefficients
        .iter()
        .zip(&pooled.coefficients)
        .map(|(a, b)| (a - b).abs())
        .fold((free.fit.intercept - pooled.intercept).abs(), f64::max);
    c.expect(
        sup <= 1e-4,
        format!("lambda=0 vs pooled ERM sup-norm {sup:.2e}"),
    );

    let penalised = irm_fit(&envs, &features, &IrmConfig::default()).unwrap();
    let spur = penalised.fit.coefficient("X_spur").unwrap();
    c.expect(
        spur.abs() <= 0.05,
        format!("spurious coefficient {spur:.4}"),
    );

    let own = erm_predictor(&envs[0], &features).unwrap();
    let pen = irm_penalty(&own, &envs[..1]).unwrap();
    c.expect(pen <= 1e-10, format!("penalty at optimum {pen:.2e}"));

    let names: Vec<String> = features.iter().map(|s| s.to_string()).collect();
    let at = |t: &[f64]| LinearFit {
        coefficients: t[1..].to_vec(),
        intercept: t[0],
        residuals: Vec::new(),
        loss_kind: LossKind::Squared,
        std_errors: Vec::new(),
        features: names.clone(),
    };
    let mut worst: f64 = 0.0;
    for point in [[0.1, 1.5, 0.4], [-0.2, 2.0, 0.9], [0.3, 0.5, -0.7]] {
        let analytic = irm_penalty_gradient(&at(&point), &envs).unwrap();
        let fd = fd_gradient(|t| irm_penalty(&at(t), &envs).unwrap(), &point, 1e-5).unwrap();
        for (a, b) in analytic.iter().zip(&fd) {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-8));
        }
    }
    c.expect(
        worst <= 1e-4,
        format!("penalty gradient rel err {worst:.2e}"),
    );
    format!("sup-norm {sup:.1e}, spurious {spur:.4}, penalty {pen:.1e}, grad rel err {worst:.1e}")
}

fn numerics(c: &mut Check) -> String {
    let mut rng = RngHandle::new(SEED, 0).derive("numerics").rng();
    let (n, k) = (200, 3);
    let x = DMatrix::from_fn(n, k, |_, _| rng.random::<f64>() * 4.0 - 2.0);
    let labels: Vec<f64> = (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { 0.0 })
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let point: Vec<f64> = (0..=k).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let analytic = logistic_gradient(&x, &labels, &point, 0.0);
        let fd = fd_gradient(|t| logistic_objective(&x, &labels, t, 0.0), &point, 1e-6).unwrap();
        for (a, b) in analytic.iter().zip(&fd) {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-8));
        }
    }
    c.expect(
        worst <= 1e-4,
        format!("logistic gradient rel err {worst:.2e}"),
    );

    let xs = DMatrix::from_fn(50, 3, |i, j| ((i * (j + 2)) as f64 * 0.37).sin());
    let target: Vec<f64> = (0..50)
        .map(|i| 1.5 - 2.0 * xs[(i, 0)] + 0.3 * xs[(i, 1)] + 4.0 * xs[(i, 2)])
        .collect();
    let max_res = ols_fit(&xs, &target)
        .unwrap()
        .residuals
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    c.expect(
        max_res <= 1e-10,
        format!("ols interpolation residual {max_res:.2e}"),
    );

    let spec = chain_spec();
    let rejected = (0..500)
        .filter(|&rep| {
            let data = spec
                .sample(&Default::default(), 500, RngHandle::new(SEED, rep))
                .unwrap();
            fisher_z_test(&data, "X", "Y", &["Z"]).unwrap().p_value < 0.05
        })
        .count() as f64
        / 500.0;
    c.within("fisher-z null rejection rate", rejected, 0.02, 0.08);
    format!("logistic grad rel err {worst:.1e}, ols residual {max_res:.1e}, fisher-z rate {rejected:.3}")
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn csv_bytes(r: &DemoReport) -> Vec<u8> {
    let mut buf = Vec::new();
    write_long_csv(&r.long_rows(), &mut buf).unwrap();
    buf
}

fn plumbing(c: &mut Check) -> String {
    for id in 1..=4u8 {
        let plan = default_plan(id, SEED).unwrap();
        let a = in_pool(1, || run_demo(id, &plan).unwrap());
        let b = in_pool(1, || run_demo(id, &plan).unwrap());
        let t = in_pool(4, || run_demo(id, &plan).unwrap());
        let bytes = csv_bytes(&a);
        c.expect(
            bytes == csv_bytes(&b) && bytes == csv_bytes(&t),
            format!("demo {id} not byte-identical"),
        );
        let json = serde_json::to_string(&a).unwrap();
        c.expect(
            json == serde_json::to_string(&t).unwrap(),
            format!("demo {id} json differs across threads"),
        );

        let rows = read_long_csv(bytes.as_slice()).unwrap();
        let mut again = Vec::new();
        write_long_csv(&rows, &mut again).unwrap();
        c.expect(again == bytes, format!("demo {id} csv round trip"));
        let back: DemoReport = serde_json::from_str(&json).unwrap();
        c.expect(
            serde_json::to_string(&back).unwrap() == json,
            format!("demo {id} json round trip"),
        );
    }

    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_causalab");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("CAUSALAB_SEED")
            .output()
            .unwrap()
    };
    let report_path = dir.path().join("r.json");
    let ok = run(&[
        "run",
        "--demo",
        "4",
        "--reps",
        "2",
        "--format",
        "json",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&report_path).unwrap_or_default();
    let json_fixed = ReportFile::from_json(&text)
        .map(|r| r.to_json().unwrap() == text)
        .unwrap_or(false);
    c.expect(json_fixed, "report file round trip");
    let usage = run(&["run", "--demo", "9"]);
    let io = run(&[
        "run",
        "--demo",
        "1",
        "--reps",
        "1",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    let weak = Dataset::from_columns([
        ("Z", vec![1.0, -1.0, 1.0, -1.0]),
        ("D", vec![2.0, 2.0, 3.0, 3.0]),
        ("Y", vec![0.0, 1.0, 0.0, 1.0]),
    ])
    .unwrap();
    let input = write_csv(&weak, dir.path(), "weak.csv");
    let stat = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "iv",
        "--treatment",
        "D",
        "--outcome",
        "Y",
        "--instrument",
        "Z",
    ]);
    let codes: Vec<i32> = [&ok, &usage, &io, &stat]
        .iter()
        .map(|o| o.status.code().unwrap_or(-1))
        .collect();
    c.expect(codes == [0, 1, 2, 3], format!("exit codes {codes:?}"));
    format!("4 demos identical across runs and 1/4 threads, round trips ok, exit codes {codes:?}")
}

type Criterion = (&'static str, fn(&mut Check) -> String);

fn main() {
    let criteria: [Criterion; 8] = [
        ("environment shift", demo1),
        ("spurious colour", demo2),
        ("double machine learning", demo3),
        ("reward hacking", demo4),
        ("estimator oracles", estimators),
        ("invariant risk minimisation", irm),
        ("numerics", numerics),
        ("determinism and plumbing", plumbing),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut check = Check::new();
        let summary = run(&mut check);
        if check.failures.is_empty() {
            println!("criterion {} ({name}): PASS  {summary}", i + 1);
        } else {
            failed += 1;
            println!("criterion {} ({name}): FAIL  {summary}", i + 1);
            for f in &check.failures {
                println!("    {f}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
