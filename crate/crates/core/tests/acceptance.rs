//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to
//! see the lines.

use std::time::Instant;

use euler_stab::stability::{classify_equilibrium, default_window, instability_bound_threshold, lambda_star, Window};
use euler_stab::verify::{run_suite, Suite, SuiteReport};
use euler_stab::{ClassSystem, DomainSpec, ModeIndex};

// Frozen oracle values.
const LAMBDA_STAR_EXAMPLE: f64 = 0.167156;
const BOUND_THRESHOLD_K1: f64 = 4.570810086342819;
const BOUND_THRESHOLD_K2: f64 = 7.227085312457099;
const FIG_LOCATIONS: usize = 16;
const FIG_CLUSTER: usize = 2;

struct Tally {
    failures: Vec<String>,
}

impl Tally {
    fn line(&mut self, label: &str, ok: bool, detail: String) {
        println!("{label:<34} {}  {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    fn suite(&mut self, label: &str, suite: Suite, extra: Option<(bool, String)>) -> SuiteReport {
        let start = Instant::now();
        let r = run_suite(suite);
        let mut detail = format!("{} [{:.1}s]", metrics(&r), start.elapsed().as_secs_f64());
        let mut ok = r.passed;
        if let Some((e, d)) = extra {
            ok &= e;
            detail = format!("{d}; {detail}");
        }
        for f in &r.failures {
            detail.push_str(&format!("\n    {f}"));
        }
        self.line(label, ok, detail);
        r
    }
}

fn metrics(r: &SuiteReport) -> String {
    r.metrics.iter().map(|(k, v)| format!("{k}={v:.4e}")).collect::<Vec<_>>().join(" ")
}

fn spec(p: (i64, i64), kappa: f64) -> DomainSpec<f64> {
    DomainSpec::new(kappa, ModeIndex::new(p.0, p.1), 1.0).unwrap()
}

fn figure_counts(t: &mut Tally) {
    let start = Instant::now();
    let s = spec((3, 1), 2.0);
    let mut ok = true;
    let mut detail = Vec::new();
    for w in [100, 150] {
        let r = classify_equilibrium(&s, Window::symmetric(w), 1e-8).unwrap();
        let c = &r.counts;
        ok &= r.verdict.is_unstable()
            && c.distinct_locations == FIG_LOCATIONS
            && c.cluster_sizes.iter().all(|&n| n == FIG_CLUSTER);
        detail.push(format!("±{w}: {} locations, sizes {:?}", c.distinct_locations, c.cluster_sizes));
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 300.0;
    t.line("2 discrete spectrum p=(3,1) κ=2", ok, format!("{} [{elapsed:.1}s]", detail.join("; ")));
}

fn kappa_monotonicity(t: &mut Tally) {
    let mut counts = Vec::new();
    for kappa in [0.5, 0.2, 0.1] {
        let s = spec((3, 1), kappa);
        let r = classify_equilibrium(&s, default_window(&s), 1e-8).unwrap();
        counts.push((kappa, r.counts.nu, r.counts.with_multiplicity));
    }
    let ok = counts.windows(2).all(|w| w[1].2 > w[0].2);
    let detail: Vec<String> =
        counts.iter().map(|(k, nu, m)| format!("κ={k}: ν={nu} discrete={m}")).collect();
    t.line("κ-monotone discrete count", ok, detail.join(", "));
}

#[test]
fn acceptance() {
    let mut t = Tally { failures: Vec::new() };

    let start = Instant::now();
    let r = run_suite(Suite::Stable);
    let elapsed = start.elapsed().as_secs_f64();
    t.line("1 stable shear flows", r.passed && elapsed < 120.0, format!("{} [{elapsed:.1}s]", metrics(&r)));

    figure_counts(&mut t);

    let example = ClassSystem::new(ModeIndex::new(0, 1), &spec((2, 0), 1.0));
    let ls = lambda_star(&example).map(|l| l.value).unwrap_or(f64::NAN);
    t.suite(
        "3 λ* lower bound",
        Suite::LambdaStar,
        Some(((ls - LAMBDA_STAR_EXAMPLE).abs() <= 1e-6, format!("λ*(a=(0,1), p=(2,0), κ=1) = {ls:.7}"))),
    );

    t.suite("4 char-poly oracle", Suite::Charpoly, None);
    t.suite("5 symmetry", Suite::Symmetry, None);
    t.suite("6 essential interval", Suite::Essential, None);

    let th = (instability_bound_threshold(1.0), instability_bound_threshold(2.0));
    let frozen = (th.0 - BOUND_THRESHOLD_K1).abs() < 1e-12 && (th.1 - BOUND_THRESHOLD_K2).abs() < 1e-12;
    t.suite("7 instability bound", Suite::Bound, Some((frozen, format!("thresholds {:.12} {:.12}", th.0, th.1))));

    let start = Instant::now();
    let c = run_suite(Suite::Conservation);
    let o = run_suite(Suite::Order);
    let elapsed = start.elapsed().as_secs_f64();
    t.line(
        "8 integrator conservation",
        c.passed && o.passed && elapsed < 60.0,
        format!("{} {} [{elapsed:.1}s]", metrics(&c), metrics(&o)),
    );

    t.suite("9 linear-nonlinear growth", Suite::CrossValidation, None);

    // Non-fatal: reported, never fails the run.
    let r = run_suite(Suite::Conjecture);
    println!("{:<34} {}  {}", "10 conjecture probes", if r.passed { "PASS" } else { "NOTE" }, metrics(&r));
    for n in r.notes.iter().chain(&r.failures) {
        println!("    {n}");
    }

    kappa_monotonicity(&mut t);

    assert!(t.failures.is_empty(), "failed: {:?}", t.failures);
}
