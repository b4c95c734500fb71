use std::io::Write;

use anyhow::{Context, Result};
use antiratio::coulomb::{
    bound_scan, classify_state, dirac_1s_energy, dirac_1s_ratio_closed, dirac_1s_ratio_quadrature,
    kg_1s_energy, kg_1s_ratio_closed, kg_1s_ratio_quadrature, kg_1s_state, StateClass,
};
use antiratio::diracfree::dirac_free_ratio;
use antiratio::evolve::{
    charge, continuity_check, current_density, periodic_lattice, stability_bound, step, ContinuityReport,
    EvolutionState,
};
use antiratio::kgfree::kg_free_ratio;
use antiratio::packets::{packet_report, synthesize_packet, PacketSpec, DEFAULT_SIGMA, PROFILE_NODES};
use antiratio::{FineStructure, ModelKind, RatioMethod, RatioResult, Zeta};
use serde::Serialize;

use crate::args::{Command, CouplingArgs, EvolveArgs, FigureArgs, Method, Model, PacketArgs, RatioArgs, ScanArgs};
use crate::error::CliError;
use crate::figures::{
    check_samples, packet_spec, profile_csv, scan_csv, FigurePlan, DEFAULT_SCAN_SAMPLES,
};
use crate::output::{csv, OutputSet, RunContext};
use crate::scenario::Scenario;
use crate::Cli;

/// Most snapshots an evolution run may keep.
pub const MAX_SNAPSHOTS: usize = 1000;
/// Snapshot intervals used when the scenario gives no cadence.
pub const DEFAULT_INTERVALS: usize = 10;

pub fn run(cli: Cli, ctx: &RunContext, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Ratio(args) => cmd_ratio(&args, out),
        Command::Figure(args) => cmd_figure(&args, ctx, out),
        Command::Scan(args) => cmd_scan(&args, ctx, out),
        Command::Evolve(args) => cmd_evolve(&args, ctx, out),
        Command::Packet(args) => cmd_packet(&args, ctx, out),
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn checked_beta(beta: Option<f64>) -> Result<f64, CliError> {
    let b = beta.ok_or_else(|| CliError::Domain("--beta is required for a free state".into()))?;
    if !(b.is_finite() && (0.0..1.0).contains(&b)) {
        return Err(CliError::Domain(format!(
            "beta = {b} is outside [0, 1): speeds must stay below the speed of light (critical point beta = 1)"
        )));
    }
    Ok(b)
}

/// ζ from `--zeta`, or from `--z` and `--alpha`, checked against the model's critical coupling.
fn checked_zeta(model: Model, coupling: &CouplingArgs) -> Result<f64, CliError> {
    let zeta = match (coupling.zeta, coupling.z) {
        (Some(zeta), _) => zeta,
        (None, Some(z)) => {
            let alpha = match coupling.alpha {
                Some(a) => FineStructure::new(a).map_err(|e| CliError::Domain(e.to_string()))?,
                None => FineStructure::default(),
            };
            z as f64 * alpha.alpha()
        }
        (None, None) => return Err(CliError::Domain("--zeta or --z is required for a bound state".into())),
    };
    let critical = model.kind().critical_zeta();
    let label = match model {
        Model::Kg => "zeta = 1/2 for Klein-Gordon (Z = 68.5)",
        Model::Dirac => "zeta = 1 for Dirac (Z = 137)",
    };
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(CliError::Domain(format!("zeta = {zeta} must be positive")));
    }
    if zeta > critical {
        return Err(CliError::Domain(format!(
            "zeta = {zeta} exceeds the critical coupling {label}"
        )));
    }
    Ok(zeta)
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub model: &'static str,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    pub ratio: RatioResult,
    pub classification: StateClass,
    /// True when the value is the limit reached at the critical coupling.
    pub limit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_sommerfeld: Option<f64>,
}

pub fn ratio_report(args: &RatioArgs) -> Result<RatioReport> {
    let kind = args.model.kind();
    let mut report = RatioReport {
        model: args.model.name(),
        mode: if args.free { "free" } else { "bound" },
        beta: None,
        zeta: None,
        ratio: RatioResult::closed_form(0.0),
        classification: StateClass::Particle,
        limit: false,
        energy: None,
        energy_sommerfeld: None,
    };
    if args.free {
        if args.method == Method::Quadrature {
            return Err(CliError::Domain("quadrature applies to bound states only".into()).into());
        }
        let beta = checked_beta(args.beta)?;
        report.beta = Some(beta);
        report.ratio = match kind {
            ModelKind::KleinGordon => kg_free_ratio(beta)?,
            ModelKind::Dirac => dirac_free_ratio(beta)?,
        };
    } else {
        let zeta = checked_zeta(args.model, &args.coupling)?;
        report.zeta = Some(zeta);
        let z = Zeta::new(zeta)?;
        if zeta == kind.critical_zeta() {
            report.limit = true;
            report.ratio = RatioResult::closed_form(1.0);
            match kind {
                ModelKind::KleinGordon => report.energy = Some(kg_1s_energy(z)?),
                ModelKind::Dirac => {
                    report.energy = Some(0.0);
                    report.energy_sommerfeld = Some(0.0);
                }
            }
        } else {
            match kind {
                ModelKind::KleinGordon => {
                    report.energy = Some(kg_1s_energy(z)?);
                    report.ratio = match args.method {
                        Method::Closed => kg_1s_ratio_closed(z)?,
                        Method::Quadrature => kg_1s_ratio_quadrature(&kg_1s_state(z)?, args.tol)?,
                    };
                }
                ModelKind::Dirac => {
                    let (energy, sommerfeld) = dirac_1s_energy(z)?;
                    report.energy = Some(energy);
                    report.energy_sommerfeld = Some(sommerfeld);
                    report.ratio = match args.method {
                        Method::Closed => dirac_1s_ratio_closed(z)?,
                        Method::Quadrature => dirac_1s_ratio_quadrature(z, args.tol)?,
                    };
                }
            }
        }
    }
    report.classification = classify_state(&report.ratio)?;
    Ok(report)
}

fn cmd_ratio(args: &RatioArgs, out: &mut dyn Write) -> Result<()> {
    let report = ratio_report(args)?;
    if args.json {
        return print_json(out, &report);
    }
    writeln!(out, "model: {}", report.model)?;
    writeln!(out, "mode: {}", report.mode)?;
    if let Some(beta) = report.beta {
        writeln!(out, "beta: {beta}")?;
    }
    if let Some(zeta) = report.zeta {
        writeln!(out, "zeta: {zeta}")?;
    }
    if let Some(e) = report.energy {
        writeln!(out, "energy: {e}")?;
    }
    if let Some(e) = report.energy_sommerfeld {
        writeln!(out, "energy_sommerfeld: {e}")?;
    }
    let suffix = if report.limit { " (limit at the critical coupling)" } else { "" };
    writeln!(out, "R: {}{suffix}", report.ratio.value)?;
    let method = match report.ratio.method {
        RatioMethod::ClosedForm => "closed_form",
        RatioMethod::Quadrature => "quadrature",
    };
    writeln!(out, "method: {method}")?;
    writeln!(out, "abs_error_estimate: {:e}", report.ratio.abs_error_estimate)?;
    let class = match report.classification {
        StateClass::Particle => "particle",
        StateClass::Antiparticle => "antiparticle",
        StateClass::Boundary => "boundary",
    };
    writeln!(out, "class: {class}")?;
    Ok(())
}

fn cmd_figure(args: &FigureArgs, ctx: &RunContext, out: &mut dyn Write) -> Result<()> {
    let plan = FigurePlan::new(args.figure, args.sigma, args.samples)?;
    let files = plan
        .render()
        .with_context(|| format!("computing {}", args.figure.name()))?;
    let mut set = OutputSet::create(&args.out_dir)?;
    for (name, contents) in &files {
        set.write(name, contents)?;
    }
    let manifest = set.finish(ctx, plan.parameters())?;
    for f in &manifest.files {
        writeln!(out, "{}", args.out_dir.join(&f.path).display())?;
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs, ctx: &RunContext, out: &mut dyn Write) -> Result<()> {
    let samples = check_samples(args.samples.unwrap_or(DEFAULT_SCAN_SAMPLES), 2)?;
    let kind = args.model.kind();
    let rows = bound_scan(kind, samples)?;
    let text = scan_csv(kind, &rows);
    if let Some(dir) = &args.out_dir {
        let mut set = OutputSet::create(dir)?;
        set.write(&format!("scan_{}.csv", args.model.name()), &text)?;
        set.finish(
            ctx,
            serde_json::json!({"model": args.model.name(), "samples": samples}),
        )?;
    }
    if args.json {
        print_json(out, &rows)
    } else if args.out_dir.is_none() {
        out.write_all(text.as_bytes())?;
        Ok(())
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PacketSummary {
    pub model: &'static str,
    pub beta: f64,
    pub sigma: f64,
    pub nodes: usize,
    pub ratio: RatioResult,
    pub closed_form_ratio: f64,
    pub ratio_difference: f64,
    pub fwhm: f64,
    pub peak_rho: f64,
    pub charge: f64,
}

fn cmd_packet(args: &PacketArgs, ctx: &RunContext, out: &mut dyn Write) -> Result<()> {
    let beta = checked_beta(Some(args.beta))?;
    let sigma = args.sigma.unwrap_or(DEFAULT_SIGMA);
    let nodes = check_samples(args.samples.unwrap_or(PROFILE_NODES), 5)?;
    let kind = args.model.kind();
    let field = synthesize_packet(&packet_spec(kind, beta, sigma, nodes)?)?;
    let report = packet_report(&field)?;
    let closed = match kind {
        ModelKind::KleinGordon => kg_free_ratio(beta)?,
        ModelKind::Dirac => dirac_free_ratio(beta)?,
    }
    .value;
    let summary = PacketSummary {
        model: args.model.name(),
        beta,
        sigma,
        nodes,
        ratio: report.ratio,
        closed_form_ratio: closed,
        ratio_difference: (report.ratio.value - closed).abs(),
        fwhm: report.fwhm,
        peak_rho: report.peak_rho,
        charge: report.charge,
    };
    if let Some(dir) = &args.out_dir {
        let mut set = OutputSet::create(dir)?;
        set.write(&format!("packet_{}.csv", args.model.name()), &profile_csv(&field))?;
        set.finish(ctx, serde_json::to_value(&summary)?)?;
    }
    if args.json {
        return print_json(out, &summary);
    }
    writeln!(out, "model: {}", summary.model)?;
    writeln!(out, "beta: {beta}")?;
    writeln!(out, "sigma: {sigma}")?;
    writeln!(out, "R: {}", summary.ratio.value)?;
    writeln!(out, "R_closed_form: {closed}")?;
    writeln!(out, "difference: {:e}", summary.ratio_difference)?;
    writeln!(out, "fwhm: {}", summary.fwhm)?;
    writeln!(out, "peak_rho: {}", summary.peak_rho)?;
    writeln!(out, "charge: {}", summary.charge)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolutionSummary {
    pub report: ContinuityReport,
    pub tolerance: f64,
    pub passed: bool,
    pub steps: usize,
    pub dt: f64,
    pub stability_bound: f64,
    pub cadence: usize,
    pub snapshots: usize,
    pub final_time: f64,
    pub initial_charge: f64,
    pub final_charge: f64,
}

/// Step count and cadence: steps are rounded up to a whole number of
/// snapshot intervals, which shortens dt slightly.
fn schedule(duration: f64, dt: f64, cadence: Option<usize>) -> Result<(usize, usize), CliError> {
    let raw = (duration / dt).ceil().max(1.0);
    if raw > 1e9 {
        return Err(CliError::Domain(format!("duration / dt = {raw:e} steps is too many")));
    }
    let raw = raw as usize;
    let cadence = cadence.unwrap_or_else(|| raw.div_ceil(DEFAULT_INTERVALS));
    let intervals = raw.div_ceil(cadence);
    if intervals < 2 {
        return Err(CliError::Domain(format!(
            "cadence = {cadence} leaves fewer than 3 snapshots over {raw} steps"
        )));
    }
    if intervals + 1 > MAX_SNAPSHOTS {
        return Err(CliError::Domain(format!(
            "cadence = {cadence} gives {} snapshots, more than {MAX_SNAPSHOTS}",
            intervals + 1
        )));
    }
    Ok((intervals * cadence, cadence))
}

fn snapshot_csv(state: &EvolutionState) -> String {
    let theta = state.abs_theta_sq();
    let chi = state.abs_chi_sq();
    let rho = state.rho();
    let current = current_density(state);
    csv(
        &["z", "abs_theta_sq", "abs_chi_sq", "rho", "current"],
        state
            .zgrid()
            .coords()
            .enumerate()
            .map(|(i, z)| vec![z, theta[i], chi[i], rho[i], current[i]]),
    )
}

fn cmd_evolve(args: &EvolveArgs, ctx: &RunContext, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.scenario.display())))?;
    let mut scenario = Scenario::parse(&text)?;
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Domain(format!("tol = {tol} must be positive")).into());
        }
        scenario.tolerance = tol;
    }
    let beta = checked_beta(Some(scenario.beta))?;

    let grid = periodic_lattice(scenario.half_width, scenario.nodes)?;
    let potential: Vec<f64> = grid.coords().map(|z| scenario.potential_at(z)).collect();
    let spec = PacketSpec::new(ModelKind::KleinGordon, antiratio::Beta::new(beta)?, scenario.sigma, grid, 0.0)?;
    let field = synthesize_packet(&spec).context("initial packet does not fit the lattice")?;
    let initial = EvolutionState::from_field(&field, potential)
        .map_err(|e| CliError::Domain(format!("initial packet does not fit the lattice: {e}")))?;

    let bound = stability_bound(&grid, initial.potential());
    let requested = scenario.dt.unwrap_or(0.5 * bound);
    if requested > bound {
        return Err(CliError::Stability(format!(
            "dt = {requested:e} exceeds the stability bound {bound:e}"
        ))
        .into());
    }
    let (steps, cadence) = schedule(scenario.duration, requested, scenario.cadence)?;
    let dt = scenario.duration / steps as f64;

    let mut snapshots = vec![initial.clone()];
    let mut current = initial;
    for n in 1..=steps {
        current = step(&current, dt).with_context(|| format!("step {n} at t = {}", current.time()))?;
        if n % cadence == 0 {
            snapshots.push(current.clone());
        }
    }
    let report = continuity_check(&snapshots)?;
    let initial_charge = charge(&snapshots[0]);
    let final_charge = charge(&current);
    let summary = EvolutionSummary {
        report,
        tolerance: scenario.tolerance,
        passed: report.charge_drift <= scenario.tolerance,
        steps,
        dt,
        stability_bound: bound,
        cadence,
        snapshots: snapshots.len(),
        final_time: current.time(),
        initial_charge,
        final_charge,
    };

    let mut set = OutputSet::create(&args.out_dir)?;
    for (i, s) in snapshots.iter().enumerate() {
        set.write(&format!("snapshot_{i:04}.csv"), &snapshot_csv(s))?;
    }
    set.write(
        "charge.csv",
        &csv(&["t", "charge"], snapshots.iter().map(|s| vec![s.time(), charge(s)])),
    )?;
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    set.write("continuity.json", &json)?;
    set.finish(
        ctx,
        serde_json::json!({"scenario": scenario, "dt": dt, "steps": steps, "cadence": cadence}),
    )?;

    if args.json {
        print_json(out, &summary)?;
    } else {
        writeln!(out, "steps: {steps}")?;
        writeln!(out, "dt: {dt}")?;
        writeln!(out, "charge_drift: {:e}", report.charge_drift)?;
        writeln!(out, "continuity_max_residual: {:e}", report.max_residual)?;
        writeln!(out, "continuity_l2_residual: {:e}", report.l2_residual)?;
    }
    if !summary.passed {
        return Err(CliError::Tolerance(format!(
            "charge drift {:e} exceeds tolerance {:e}",
            report.charge_drift, scenario.tolerance
        ))
        .into());
    }
    Ok(())
}
