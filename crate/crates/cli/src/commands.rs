use std::fs;
use std::path::Path;

use log::info;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use weighted_lane_emden::ckn::{self, check_balance, BalanceVerdict, CknTriple, SweepRow};
use weighted_lane_emden::closed_forms::BubbleProfile;
use weighted_lane_emden::emden_fowler::{fixed_points, to_cylinder, CylinderSystem};
use weighted_lane_emden::io::{cylinder_csv, parse_trajectory_csv, trajectory_csv};
use weighted_lane_emden::pohozaev::{self, PohozaevReport};
use weighted_lane_emden::shooter::{self, RadialTrajectory, ShootConfig, ShotOutcome};
use weighted_lane_emden::{classify as classify_params, derive, ProblemParams};

use crate::artifacts::{io_error, print_json, CliError, CliResult, Plot, Run};
use crate::{Format, Output, Shooting, SweepKind, Weights};

fn params(w: &Weights, p: f64) -> ProblemParams {
    ProblemParams::new(w.n, w.a, w.b, p)
}

fn config(s: &Shooting) -> CliResult<ShootConfig> {
    let config = ShootConfig { beta: s.beta, r_max: s.rmax, rel_tol: s.tol, abs_tol: s.abs_tol, epsilon0: s.epsilon0 };
    config.validate()?;
    Ok(config)
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

fn inconclusive(outcome: &ShotOutcome) -> CliResult<()> {
    match outcome {
        ShotOutcome::Inconclusive { reason } => Err(CliError::Inconclusive(reason.clone())),
        _ => Ok(()),
    }
}

pub fn classify(w: &Weights, p: f64, output: &Output) -> CliResult<()> {
    let params = params(w, p).validate()?;
    let mut run = Run::start("classify", output)?;
    let regime = classify_params(&params)?;
    let mut report = Map::new();
    report.insert("params".into(), to_value(&params));
    if let Ok(Value::Object(derived)) = derive(&params).map(|d| to_value(&d)) {
        report.extend(derived);
    }
    report.insert("regime".into(), to_value(&regime.regime));
    report.insert("witness".into(), to_value(&regime.witness));
    let report = Value::Object(report);
    run.write_json("classify.json", &report)?;
    print_json(&report);
    run.finish(&params, &Value::Null)
}

pub fn shoot(w: &Weights, p: f64, s: &Shooting, output: &Output) -> CliResult<()> {
    let params = params(w, p);
    let config = config(s)?;
    let mut run = Run::start("shoot", output)?;
    let traj = shooter::shoot(&params, &config)?;
    let csv = trajectory_csv(&traj.nodes);
    run.write("trajectory.csv", &csv)?;
    let report = json!({ "params": params, "outcome": traj.outcome, "nodes": traj.nodes.len() });
    run.write_json("outcome.json", &report)?;
    run.plot(Plot { file: "trajectory.csv", using: "1:2", title: "v(r)", logscale: "x" });
    match output.format() {
        Format::Json => print_json(&report),
        Format::Csv => print!("{csv}"),
    }
    run.finish(&params, &config)?;
    inconclusive(&traj.outcome)
}

pub fn threshold(w: &Weights, p_lo: f64, p_hi: f64, tol: f64, rmax: f64, output: &Output) -> CliResult<()> {
    let config = ShootConfig { r_max: rmax, ..ShootConfig::default() };
    config.validate()?;
    let mut run = Run::start("threshold", output)?;
    let result = shooter::threshold_bisect(w.n, w.a, w.b, p_lo, p_hi, tol, &config)?;
    let p_critical = params(w, 2.0).p_critical();
    let report = json!({
        "p_star": result.p_star,
        "p_critical": p_critical,
        "abs_error": (result.p_star - p_critical).abs(),
        "bracket": result.bracket,
        "p_bisect": result.p_bisect,
        "extrapolated": result.extrapolated,
        "probes": result.probes.len(),
    });
    run.write_json("threshold.json", &json!({ "summary": report, "probes": result.probes }))?;
    match output.format() {
        Format::Json => print_json(&report),
        Format::Csv => {
            println!("p_star,p_critical,abs_error");
            println!("{:.16e},{:.16e},{:.16e}", result.p_star, p_critical, (result.p_star - p_critical).abs());
        }
    }
    let echo = json!({ "p_lo": p_lo, "p_hi": p_hi, "tol": tol, "shoot": config });
    run.finish(&json!({ "N": w.n, "a": w.a, "b": w.b }), &echo)
}

pub fn bubble(
    w: &Weights,
    lambda: Option<f64>,
    samples: usize,
    rmin: f64,
    rmax: f64,
    output: &Output,
) -> CliResult<()> {
    if samples < 2 || !(rmin > 0.0 && rmax > rmin) {
        return Err(CliError::Parse(format!("need samples >= 2 and 0 < rmin < rmax, got {samples}, [{rmin}, {rmax}]")));
    }
    let params = params(w, params(w, 2.0).p_critical());
    let bubble = match lambda {
        Some(l) => BubbleProfile::new(&params, l)?,
        None => BubbleProfile::normalized(&params)?,
    };
    let mut run = Run::start("bubble", output)?;
    let mut csv = String::from("r,v,dv,relative_residual\n");
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let r = rmin * (rmax / rmin).powf(i as f64 / (samples - 1) as f64);
        let (v, dv) = bubble.eval(r)?;
        let res = bubble.relative_residual(r);
        worst = worst.max(res.abs());
        csv.push_str(&format!("{r:.16e},{v:.16e},{dv:.16e},{res:.16e}\n"));
    }
    run.write("bubble.csv", &csv)?;
    let report = json!({
        "params": params,
        "amplitude": bubble.amplitude,
        "lambda": bubble.lambda_scale,
        "peak": bubble.peak(),
        "samples": samples,
        "max_relative_residual": worst,
    });
    run.write_json("bubble.json", &report)?;
    run.plot(Plot { file: "bubble.csv", using: "1:2", title: "bubble", logscale: "xy" });
    match output.format() {
        Format::Json => print_json(&report),
        Format::Csv => print!("{csv}"),
    }
    run.finish(&params, &json!({ "lambda": lambda, "samples": samples, "rmin": rmin, "rmax": rmax }))
}

pub fn pohozaev(
    w: &Weights,
    p: f64,
    radii: &[f64],
    trajectory: Option<&Path>,
    s: &Shooting,
    output: &Output,
) -> CliResult<()> {
    let params = params(w, p);
    let (traj, source) = match trajectory {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let nodes = parse_trajectory_csv(&text)?;
            (RadialTrajectory::from_nodes(params, nodes)?, json!({ "trajectory": path }))
        }
        None => {
            let config = config(s)?;
            (shooter::shoot(&params, &config)?, to_value(&config))
        }
    };
    let mut run = Run::start("pohozaev", output)?;
    let reports = radii.iter().map(|&r| pohozaev::evaluate(&traj, r)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = format!("{}\n", PohozaevReport::CSV_HEADER);
    for rep in &reports {
        csv.push_str(&rep.csv_row());
        csv.push('\n');
    }
    run.write("pohozaev.csv", &csv)?;
    let report = json!({ "params": params, "reports": reports });
    run.write_json("pohozaev.json", &report)?;
    run.plot(Plot { file: "pohozaev.csv", using: "1:(abs($7))", title: "|relative residual|", logscale: "xy" });
    match output.format() {
        Format::Json => print_json(&report),
        Format::Csv => print!("{csv}"),
    }
    run.finish(&params, &json!({ "radii": radii, "source": source }))
}

pub fn phase(w: &Weights, p: f64, s: &Shooting, output: &Output) -> CliResult<()> {
    let params = params(w, p);
    let config = config(s)?;
    let mut run = Run::start("phase", output)?;
    let fixed = fixed_points(&params).ok();
    let traj = shooter::shoot(&params, &config)?;
    let cylinder = to_cylinder(&traj)?;
    let system = CylinderSystem::new(&params)?;
    let energies: Vec<f64> = cylinder.nodes.iter().map(|n| system.hamiltonian(n.w, n.dw)).collect();
    let h_span = energies.iter().fold(f64::NEG_INFINITY, |m, h| m.max(*h))
        - energies.iter().fold(f64::INFINITY, |m, h| m.min(*h));
    let csv = cylinder_csv(&cylinder);
    run.write("cylinder.csv", &csv)?;
    let report = json!({
        "params": params,
        "fixed_point": fixed,
        "outcome": traj.outcome,
        "hamiltonian_conserved": params.is_critical(),
        "hamiltonian_first": energies.first(),
        "hamiltonian_last": energies.last(),
        "hamiltonian_span": h_span,
    });
    run.write_json("phase.json", &report)?;
    run.plot(Plot { file: "cylinder.csv", using: "2:3", title: "(w, w')", logscale: "" });
    match output.format() {
        Format::Json => print_json(&report),
        Format::Csv => print!("{csv}"),
    }
    run.finish(&params, &config)?;
    inconclusive(&traj.outcome)
}

pub fn ckn(w: &Weights, q: f64, output: &Output) -> CliResult<()> {
    let triple = CknTriple::new(w.n, w.a, w.b, q);
    let check = check_balance(&triple)?;
    let mut run = Run::start("ckn", output)?;
    let best = match check.verdict {
        BalanceVerdict::Admissible => match ckn::best_constant(&triple) {
            Ok(rep) => to_value(&rep),
            Err(e @ weighted_lane_emden::Error::SymmetryBreakingRegion { .. }) => json!({ "refused": e.to_string() }),
            Err(e) => return Err(e.into()),
        },
        _ => Value::Null,
    };
    let report = json!({
        "triple": triple,
        "balance": check,
        "fs_region": ckn::fs_region(&triple),
        "best_constant": best,
    });
    run.write_json("ckn.json", &report)?;
    print_json(&report);
    run.finish(&triple, &Value::Null)
}

fn read_grid(path: &Path, width: usize) -> CliResult<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|e| CliError::Parse(format!("{}:{}: {e}", path.display(), i + 1))))
            .collect::<CliResult<Vec<f64>>>()?;
        if row.len() != width {
            return Err(CliError::Parse(format!("{}:{}: expected {width} fields", path.display(), i + 1)));
        }
        if row[0].fract() != 0.0 || row[0] < 0.0 {
            return Err(CliError::Parse(format!("{}:{}: N must be a nonnegative integer", path.display(), i + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn shoot_row(row: &[f64], config: &ShootConfig) -> String {
    let params = ProblemParams::new(row[0] as u32, row[1], row[2], row[3]);
    let (kind, r) = match shooter::shoot(&params, config) {
        Ok(traj) => match traj.outcome {
            ShotOutcome::CrossedZero { r0 } => ("crossed_zero".to_string(), r0),
            ShotOutcome::PositiveGlobal { r_reached, .. } | ShotOutcome::ConvergedToSingular { r_reached, .. } => {
                (traj.outcome.kind().to_string(), r_reached)
            }
            ShotOutcome::Inconclusive { .. } => ("inconclusive".to_string(), f64::NAN),
        },
        Err(e) => (format!("error:{}", e.name()), f64::NAN),
    };
    format!("{},{:.16e},{:.16e},{:.16e},{kind},{r:.16e}", params.n, params.a, params.b, params.p)
}

pub fn sweep(grid: &Path, kind: SweepKind, jobs: Option<usize>, s: &Shooting, output: &Output) -> CliResult<()> {
    let config = config(s)?;
    let rows = read_grid(grid, if kind == SweepKind::Shoot { 4 } else { 3 })?;
    let mut run = Run::start("sweep", output)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Parse(format!("thread pool: {e}")))?;
    info!("sweeping {} rows on {} threads", rows.len(), pool.current_num_threads());
    let (header, lines): (&str, Vec<String>) = match kind {
        SweepKind::Shoot => {
            ("N,a,b,p,outcome,r", pool.install(|| rows.par_iter().map(|row| shoot_row(row, &config)).collect()))
        }
        SweepKind::Ckn => (
            SweepRow::CSV_HEADER,
            pool.install(|| {
                rows.par_iter().map(|row| SweepRow::compute(row[0] as u32, row[1], row[2]).csv_row()).collect()
            }),
        ),
    };
    let mut csv = format!("{header}\n");
    for line in &lines {
        csv.push_str(line);
        csv.push('\n');
    }
    run.write("sweep.csv", &csv)?;
    match output.format() {
        Format::Json => print_json(&json!({ "kind": kind, "rows": lines.len() })),
        Format::Csv => print!("{csv}"),
    }
    run.finish(&json!({ "grid": grid }), &json!({ "kind": kind, "shoot": config }))
}
