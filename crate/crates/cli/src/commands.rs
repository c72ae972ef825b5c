use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use euler_stab::stability::{
    boxed_growth_rate, classify_equilibrium, default_window, energy_casimir_diagnosis, instability_bound_check,
    instability_bound_threshold, SpectrumReport, Verdict,
};
use euler_stab::verify::{run_suites, Suite, SuiteReport};
use euler_stab::zeitlin::{
    fit_growth_rate, perturbed_equilibrium, simulate, vorticity_grid, wrapped_casimir_stability_probe,
    ConservationRecord, GrowthFit, LiePoissonIntegrator, SimulationOptions, TruncatedState, TruncationSpec,
};
use euler_stab::{enumerate_unstable_candidate_classes, lattice_points_in_ellipse, ModeIndex};
use serde::{Deserialize, Serialize};

use crate::config::{Format, LatticeArgs, RunConfig, SimulateArgs, SpectrumArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{write_csv, write_json, SpectrumFileRecord, SCHEMA_VERSION};

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassSummary {
    pub representative: ModeIndex,
    pub alpha: f64,
    pub interior_offsets: Vec<i64>,
    pub lambda_star: Option<f64>,
    pub max_real_part: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundSummary {
    pub p_norm: f64,
    pub threshold: f64,
    pub holds: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnergyCasimirSummary {
    pub definite: bool,
    pub witness_modes: Vec<ModeIndex>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassifyFile {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub window: (i64, i64),
    pub verdict: String,
    pub witness: Option<ModeIndex>,
    pub max_real_part: f64,
    pub nu: usize,
    pub nu_with_origin: usize,
    pub candidate_classes: Vec<ClassSummary>,
    pub instability_bound: BoundSummary,
    pub energy_casimir: EnergyCasimirSummary,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub verdict: String,
    pub nu: usize,
    pub nu_with_origin: usize,
    pub non_imaginary: usize,
    pub distinct_locations: usize,
    pub cluster_sizes: Vec<usize>,
    /// Cluster centres as `(re, im)`.
    pub locations: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub window: (i64, i64),
    pub summary: SpectrumSummary,
    pub classes: Vec<SpectrumFileRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub p_norm: f64,
    pub nu: usize,
    pub interior_points: Vec<ModeIndex>,
    pub candidate_representatives: Vec<ModeIndex>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    /// `(re, im)` of `ω_k`, in the order of `modes`.
    pub omega: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    pub initial_deviation: f64,
    pub max_deviation_ratio: f64,
    /// Least-squares rate of `ln‖ω − ω*‖` while the deviation lies in `fit_window`.
    pub fit: Option<GrowthFit<f64>>,
    pub fit_window: [f64; 2],
    /// Largest real part of the linearisation, classes truncated to the lattice.
    pub linear_rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateFile {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub epsilon: f64,
    pub steps: usize,
    pub warnings: Vec<String>,
    pub modes: Vec<ModeIndex>,
    pub snapshots: Vec<Snapshot>,
    pub conservation: Vec<ConservationRecord<f64>>,
    pub max_hamiltonian_drift: f64,
    pub max_casimir_drift: Vec<f64>,
    pub growth: GrowthReport,
}

#[derive(Debug, Serialize)]
pub struct VerifyFile<'a> {
    pub schema_version: u32,
    pub command: &'a str,
    pub passed: bool,
    pub suites: &'a [SuiteReport],
}

fn spectrum_report(args: &SpectrumArgs) -> Result<(RunConfig, SpectrumReport<f64>), CliError> {
    let config = RunConfig::spectrum(args)?;
    let spec = config.domain()?;
    let window = config.window().unwrap_or_else(|| default_window(&spec));
    let report = classify_equilibrium(&spec, window, args.tol)?;
    Ok((config, report))
}

fn records(report: &SpectrumReport<f64>) -> Result<Vec<SpectrumFileRecord>, CliError> {
    report.classes.iter().map(SpectrumFileRecord::from_class).collect()
}

pub fn classify(args: &SpectrumArgs) -> Result<(), CliError> {
    let (config, report) = spectrum_report(args)?;
    let spec = report.spec;
    let out = args.output.out.as_deref();
    eprintln!(
        "{}: ν = {}, {} candidate classes, window [{}, {}]",
        report.verdict.name(),
        report.counts.nu,
        report.classes.len(),
        report.window.m,
        report.window.n
    );
    if config.format == Format::Csv {
        return write_csv(&records(&report)?, out);
    }
    let (witness, max_real_part) = match report.verdict {
        Verdict::LinearlyUnstable {
            witness, max_real_part, ..
        } => (Some(witness), max_real_part),
        _ => (None, 0.0),
    };
    let diagnosis = energy_casimir_diagnosis(&spec);
    let doc = ClassifyFile {
        schema_version: SCHEMA_VERSION,
        command: "classify".into(),
        window: (report.window.m, report.window.n),
        verdict: report.verdict.name().into(),
        witness,
        max_real_part,
        nu: report.counts.nu,
        nu_with_origin: report.counts.nu_with_origin,
        candidate_classes: report
            .classes
            .iter()
            .map(|c| ClassSummary {
                representative: c.representative,
                alpha: c.alpha,
                interior_offsets: c.interior_offsets.clone(),
                lambda_star: c.lambda_star.map(|l| l.value),
                max_real_part: c.max_real_part,
            })
            .collect(),
        instability_bound: BoundSummary {
            p_norm: spec.p_norm_sq().sqrt(),
            threshold: instability_bound_threshold(spec.kappa),
            holds: instability_bound_check(&spec),
        },
        energy_casimir: EnergyCasimirSummary {
            definite: diagnosis.definite,
            witness_modes: diagnosis.witness_modes,
        },
        config,
    };
    write_json(&doc, out)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let (config, report) = spectrum_report(args)?;
    let out = args.output.out.as_deref();
    let recs = records(&report)?;
    eprintln!(
        "{}: {} non-imaginary eigenvalues at {} locations",
        report.verdict.name(),
        report.counts.with_multiplicity,
        report.counts.distinct_locations
    );
    if config.format == Format::Csv {
        return write_csv(&recs, out);
    }
    let doc = SpectrumFile {
        schema_version: SCHEMA_VERSION,
        command: "spectrum".into(),
        window: (report.window.m, report.window.n),
        summary: SpectrumSummary {
            verdict: report.verdict.name().into(),
            nu: report.counts.nu,
            nu_with_origin: report.counts.nu_with_origin,
            non_imaginary: report.counts.with_multiplicity,
            distinct_locations: report.counts.distinct_locations,
            cluster_sizes: report.counts.cluster_sizes.clone(),
            locations: report.discrete_clusters.iter().map(|c| [c.center.re, c.center.im]).collect(),
        },
        classes: recs,
        config,
    };
    write_json(&doc, out)
}

fn json_only(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Invalid(format!(
            "csv holds eigenvalues only; use --format json for {command}"
        ))),
    }
}

pub fn lattice(args: &LatticeArgs) -> Result<(), CliError> {
    let config = RunConfig::lattice(args)?;
    json_only(config.format, "lattice")?;
    let spec = config.domain()?;
    let points = lattice_points_in_ellipse(&spec);
    eprintln!("ν = {}", points.len());
    let doc = LatticeFile {
        schema_version: SCHEMA_VERSION,
        command: "lattice".into(),
        p_norm: spec.p_norm_sq().sqrt(),
        nu: points.len(),
        interior_points: points,
        candidate_representatives: enumerate_unstable_candidate_classes(&spec).iter().map(|c| c.a).collect(),
        config,
    };
    write_json(&doc, args.output.out.as_deref())
}

/// Deviation window used for the growth fit, relative to the initial
/// deviation `d0` and the equilibrium norm.
fn fit_window(d0: f64, eq_norm: f64) -> [f64; 2] {
    [20.0 * d0, 1e-2 * eq_norm]
}

pub fn run_simulation(args: &SimulateArgs) -> Result<SimulateFile, CliError> {
    let config = RunConfig::simulate(args)?;
    json_only(config.format, "simulate")?;
    let sim = config.simulation.clone().expect("set by RunConfig::simulate");
    let spec = config.domain()?;
    let trunc = TruncationSpec::new(sim.n, spec.kappa)?;
    let equilibrium = TruncatedState::equilibrium(&spec, &trunc)?;
    let mut warnings = Vec::new();
    if spec.p.k2 == 0 && wrapped_casimir_stability_probe(&spec, &trunc)? {
        warnings.push(format!(
            "gcd(2N+1, |p1|) = 1 and κ ≥ |p1|: the truncated flow is Casimir-stable at N = {}, so bounded \
             perturbations do not indicate stability of the full flow",
            sim.n
        ));
    }
    let initial = perturbed_equilibrium(&spec, &trunc, sim.delta, sim.seed)?;
    let integ = LiePoissonIntegrator::new(&trunc);
    let opts = SimulationOptions {
        snapshot_every: sim.snapshot_every,
        log_every: sim.log_every,
        reference: Some(equilibrium.clone()),
        ..Default::default()
    };
    let traj = simulate(&initial, sim.t_end, sim.dt, &integ, &opts)?;

    let samples = traj.log.deviations();
    let d0 = samples.first().map_or(0.0, |s| s.1);
    let window = fit_window(d0, equilibrium.norm());
    let fit = if d0 > 0.0 {
        fit_growth_rate(&samples, window[0], window[1])
    } else {
        None
    };
    let max_dev = samples.iter().fold(0.0f64, |m, s| m.max(s.1));
    let growth = GrowthReport {
        initial_deviation: d0,
        max_deviation_ratio: if d0 > 0.0 { max_dev / d0 } else { 0.0 },
        fit,
        fit_window: window,
        linear_rate: boxed_growth_rate(&spec, sim.n as i64)?,
    };

    let modes: Vec<ModeIndex> = (0..trunc.len()).map(|i| trunc.mode(i)).collect();
    let snapshots = traj
        .snapshots
        .iter()
        .map(|s| Snapshot {
            time: s.time,
            omega: s.omega.iter().map(|z| [z.re, z.im]).collect(),
        })
        .collect();
    if let Some(res) = sim.grid {
        let path = grid_path(args)?;
        write_grids(&traj.snapshots, &trunc, res, &path)?;
    }
    Ok(SimulateFile {
        schema_version: SCHEMA_VERSION,
        command: "simulate".into(),
        epsilon: trunc.epsilon,
        steps: traj.steps,
        warnings,
        modes,
        snapshots,
        max_hamiltonian_drift: traj.log.max_hamiltonian_drift(),
        max_casimir_drift: traj.log.max_casimir_drift(),
        conservation: traj.log.records,
        growth,
        config,
    })
}

pub fn simulate_cmd(args: &SimulateArgs) -> Result<(), CliError> {
    let doc = run_simulation(args)?;
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    match &doc.growth.fit {
        Some(f) => eprintln!(
            "growth rate {:.6} (linear {:.6}) over t ∈ [{:.3}, {:.3}]",
            f.rate, doc.growth.linear_rate, f.t_start, f.t_end
        ),
        None => eprintln!(
            "no exponential growth fitted; max deviation {:.3}× initial",
            doc.growth.max_deviation_ratio
        ),
    }
    write_json(&doc, args.output.out.as_deref())
}

fn grid_path(args: &SimulateArgs) -> Result<PathBuf, CliError> {
    if let Some(p) = &args.grid_out {
        return Ok(p.clone());
    }
    match &args.output.out {
        Some(out) => {
            let mut s = out.clone().into_os_string();
            s.push(".grid");
            Ok(s.into())
        }
        None => Err(CliError::Invalid("--grid needs --grid-out or --out".into())),
    }
}

/// One block per snapshot: a header line `resolution kappa time`, then
/// `resolution` rows of vorticity values.
fn write_grids(
    snapshots: &[TruncatedState<f64>],
    trunc: &TruncationSpec<f64>,
    res: usize,
    path: &Path,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    for s in snapshots {
        let grid = vorticity_grid(s, trunc, res)?;
        writeln!(w, "{res} {:e} {:e}", trunc.kappa, s.time)?;
        for row in grid {
            let line: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite.clone()
    };
    let reports = run_suites(&suites);
    for r in &reports {
        println!("{}", r.summary_line());
        for n in &r.notes {
            println!("    {n}");
        }
        for f in &r.failures {
            println!("    {f}");
        }
    }
    let blocking: Vec<&str> = reports.iter().filter(|r| r.blocks()).map(|r| r.suite.name()).collect();
    if let Some(path) = &args.out {
        let doc = VerifyFile {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            passed: blocking.is_empty(),
            suites: &reports,
        };
        write_json(&doc, Some(path))?;
    }
    if blocking.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(blocking.join(", ")))
    }
}
