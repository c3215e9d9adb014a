use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use polya_core::approx::{fit_node, recommend_model, ApproxError, FitReport, DEFAULT_MODEL_THRESHOLD};
use polya_core::exact::{enumerate_joint_from, ExactError, DEFAULT_CAP};
use polya_core::experiments::{fig2, fig4, fig5};
use polya_core::graph::write_edge_list;
use polya_core::montecarlo::{histogram, run_trials, write_histogram_csv, write_trajectory_csv, HeaderInfo};
use polya_core::sis::{sis_run, threshold_classify};
use polya_core::{DeltaSchedule, Mass, MonteCarloError, Network, NetworkState, RunConfig, SisParams};
use serde_json::json;

use crate::args::{Command, EnumerateArgs, Figure, FitArgs, GraphGenArgs, ReproduceArgs, SimulateArgs, SisArgs};
use crate::config::{decimal, ExperimentConfig};
use crate::CliError;

pub fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::GraphGen(a) => graph_gen(a),
        Command::Simulate(a) => simulate(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Fit(a) => fit(a),
        Command::Sis(a) => sis(a),
        Command::Reproduce(a) => reproduce(a),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn mc_error(e: MonteCarloError) -> CliError {
    match e {
        MonteCarloError::InvalidConfig(_) | MonteCarloError::Contagion(_) => CliError::Usage(e.to_string()),
        _ => CliError::Runtime(e.to_string()),
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Hash input for outputs that are not Monte Carlo runs: the effective
/// configuration plus the network itself, since `graph` is only a path.
fn header(cfg: &ExperimentConfig, net: &Network) -> HeaderInfo {
    HeaderInfo::for_text(&format!("{}|edges={:?}", cfg.to_json(), net.edges()), cfg.seed())
}

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(runtime)?;
    writeln!(out)?;
    Ok(())
}

fn graph_gen(a: &GraphGenArgs) -> Result<(), CliError> {
    let spec = a.resolve()?;
    let net = polya_core::graph::generate(&spec.to_kind()?).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = ExperimentConfig {
        network: Some(spec.clone()),
        seed: spec.seed,
        ..Default::default()
    };
    let mut w = sink(a.output.as_deref())?;
    header(&cfg, &net).write(&mut w)?;
    write_edge_list(&net, &mut w)?;
    w.flush()?;
    Ok(())
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let cfg = a.model.resolve(ExperimentConfig {
        trials: a.trials,
        node: a.node,
        ..Default::default()
    })?;
    let net = cfg.network()?;
    let n = net.node_count();
    let mut run = RunConfig::new(
        net,
        cfg.init(n)?.cast(),
        cfg.schedule(n)?.cast(),
        cfg.horizon()?,
        cfg.trials()?,
        cfg.seed(),
    );
    run.memory = cfg.memory_mode()?;
    if let Some(i) = cfg.node {
        if i >= n {
            return Err(CliError::Usage(format!("node {i} out of range for {n} nodes")));
        }
    }
    let stats = run_trials(&run).map_err(mc_error)?;
    let head = HeaderInfo::for_run(&run);

    let mut w = sink(a.output.as_deref())?;
    write_trajectory_csv(&mut w, &head, &stats, a.pairs)?;
    w.flush()?;
    drop(w);

    if let (Some(path), Some(i)) = (&a.histogram_output, cfg.node) {
        let hist = histogram(stats.sample_averages(i), a.bins).map_err(mc_error)?;
        write_histogram_csv(sink(Some(path))?, &head, &hist)?;
    }
    if a.output.is_some() {
        let h = stats.horizon();
        print_json(&json!({
            "config_sha256": head.fingerprint,
            "seed": head.seed,
            "version": head.version,
            "trials": stats.trials(),
            "horizon": h,
            "final_infection_rate": stats.mean_infection()[h - 1],
            "final_susceptibility": stats.mean_susceptibility()[h - 1],
        }))?;
    }
    Ok(())
}

fn enumerate(a: &EnumerateArgs) -> Result<(), CliError> {
    let cfg = a.model.resolve(ExperimentConfig {
        cap: a.cap,
        ..Default::default()
    })?;
    let net = cfg.network()?;
    let n = net.node_count();
    let init = cfg.init(n)?;
    let sched = cfg.schedule(n)?;
    let start = NetworkState::new(&net, &init, cfg.memory_mode()?).map_err(|e| CliError::Usage(e.to_string()))?;
    let table = enumerate_joint_from(&net, &start, &sched, cfg.horizon()?, cfg.cap.unwrap_or(DEFAULT_CAP))
        .map_err(|e| match e {
            ExactError::CapExceeded { .. } => CliError::Usage(e.to_string()),
            _ => runtime(e),
        })?;
    let mut w = sink(a.output.as_deref())?;
    header(&cfg, &net).write(&mut w)?;
    table.write_csv(&mut w, !a.float)?;
    w.flush()?;
    Ok(())
}

fn fit(a: &FitArgs) -> Result<(), CliError> {
    let cfg = a.model.resolve(ExperimentConfig {
        node: a.node,
        ..Default::default()
    })?;
    let net = cfg.network()?;
    let n = net.node_count();
    let init = cfg.init(n)?;
    let delta = match cfg.schedule(n)? {
        DeltaSchedule::Constant { red, black } if red == black => red,
        _ => return Err(CliError::Usage("fit needs delta_red = delta_black".into())),
    };
    let horizon = cfg.horizon()?;
    let nodes: Vec<usize> = match cfg.node {
        Some(i) => vec![i],
        None => (0..n).collect(),
    };
    let init = init.cast::<f64>();
    let delta = delta.to_f64();
    let fits = nodes
        .into_iter()
        .map(|i| fit_node(&net, &init, &delta, i, horizon, None))
        .collect::<Result<Vec<FitReport>, _>>()
        .map_err(|e| match e {
            ApproxError::InvalidInput(_) | ApproxError::Exact(ExactError::CapExceeded { .. }) => {
                CliError::Usage(e.to_string())
            }
            _ => runtime(e),
        })?;
    let head = header(&cfg, &net);
    let report = json!({
        "config_sha256": head.fingerprint,
        "seed": head.seed,
        "version": head.version,
        "recommended_model": recommend_model(n, DEFAULT_MODEL_THRESHOLD),
        "fits": fits,
    });
    match &a.output {
        Some(p) => {
            let mut w = sink(Some(p))?;
            serde_json::to_writer_pretty(&mut w, &report).map_err(runtime)?;
            writeln!(w)?;
            w.flush()?;
            Ok(())
        }
        None => print_json(&report),
    }
}

fn broadcast_probs(values: &[String], n: usize) -> Result<Vec<f64>, CliError> {
    let probs: Vec<f64> = values
        .iter()
        .map(|s| decimal(s, "init_probs").map(|r| r.to_f64()))
        .collect::<Result<_, _>>()?;
    match probs.len() {
        1 => Ok(vec![probs[0]; n]),
        k if k == n => Ok(probs),
        k => Err(CliError::Usage(format!("init_probs has {k} values for {n} nodes"))),
    }
}

fn sis(a: &SisArgs) -> Result<(), CliError> {
    let cfg = a.model.resolve(ExperimentConfig {
        beta: a.beta.clone(),
        delta_sis: a.delta_sis.clone(),
        init_probs: a.init_probs.clone(),
        ..Default::default()
    })?;
    let net = cfg.network()?;
    let n = net.node_count();
    let beta = decimal(&ExperimentConfig::required(&cfg.beta, "beta")?, "beta")?.to_f64();
    let cure = decimal(&ExperimentConfig::required(&cfg.delta_sis, "delta_sis")?, "delta_sis")?.to_f64();
    let params = SisParams::new(beta, cure).map_err(|e| CliError::Usage(e.to_string()))?;
    let init_probs = match (&cfg.init_probs, &cfg.red, &cfg.black) {
        (Some(p), _, _) => broadcast_probs(p, n)?,
        (None, Some(_), Some(_)) => {
            let init = cfg.init(n)?;
            (0..n).map(|i| (init.red()[i].clone() / init.total(i)).to_f64()).collect()
        }
        _ => vec![0.5; n],
    };
    let horizon = cfg.horizon()?;
    let (class, lambda_max) = threshold_classify(&net, &params).map_err(runtime)?;
    let states = sis_run(&net, &init_probs, &params, horizon).map_err(|e| CliError::Usage(e.to_string()))?;
    let head = header(&cfg, &net);

    if let Some(path) = &a.output {
        let mut w = sink(Some(path))?;
        head.write(&mut w)?;
        let cols: Vec<String> = (0..n).map(|i| format!("p_{i}")).collect();
        writeln!(w, "t,mean,{}", cols.join(","))?;
        for s in &states {
            let ps: Vec<String> = s.probs.iter().map(|p| p.to_string()).collect();
            writeln!(w, "{},{},{}", s.time, s.mean(), ps.join(","))?;
        }
        w.flush()?;
    }
    print_json(&json!({
        "config_sha256": head.fingerprint,
        "seed": head.seed,
        "version": head.version,
        "lambda_max": lambda_max,
        "beta": beta,
        "delta_sis": cure,
        "classification": class,
        "horizon": horizon,
        "final_mean": states.last().expect("state at t = 0").mean(),
    }))
}

fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn reproduce(a: &ReproduceArgs) -> Result<(), CliError> {
    fs::create_dir_all(&a.out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", a.out_dir.display())))?;
    let seed = a.seed.unwrap_or(0);
    let horizon = a.horizon.unwrap_or(1000);
    let summary = match a.figure {
        Figure::Fig2 => {
            let trials = a.trials.unwrap_or(50_000);
            let f = fig2(seed, trials, horizon, (horizon / 5).max(1)).map_err(mc_error)?;
            let head = HeaderInfo::for_run(&f.config);
            write_trajectory_csv(sink(Some(&out_file(&a.out_dir, "fig2_trajectory.csv")))?, &head, &f.stats, true)?;
            json!({
                "figure": "fig2",
                "config_sha256": head.fingerprint,
                "seed": seed,
                "version": head.version,
                "trials": trials,
                "horizon": horizon,
                "window": [f.report.window.0, f.report.window.1],
                "max_deviation": f.report.max_deviation,
                "settled_value": f.report.settled_value,
            })
        }
        Figure::Fig4 => {
            let trials = a.trials.unwrap_or(5000);
            let f = fig4(seed, trials, horizon).map_err(mc_error)?;
            let mut fits = Vec::new();
            for (cfg, run_fits) in &f.runs {
                let head = HeaderInfo::for_run(cfg);
                for fit in run_fits {
                    let hist = fit.histogram(a.bins).map_err(mc_error)?;
                    let name = format!("fig4_{}_hist.csv", fit.label);
                    write_histogram_csv(sink(Some(&out_file(&a.out_dir, &name)))?, &head, &hist)?;
                    fits.push(json!({
                        "label": fit.label,
                        "config_sha256": head.fingerprint,
                        "node": fit.node,
                        "model": fit.model,
                        "alpha": fit.beta.alpha,
                        "beta": fit.beta.beta,
                        "ks": fit.ks,
                    }));
                }
            }
            json!({
                "figure": "fig4",
                "seed": seed,
                "version": env!("CARGO_PKG_VERSION"),
                "trials": trials,
                "horizon": horizon,
                "fits": fits,
            })
        }
        Figure::Fig5 => {
            let trials = a.trials.unwrap_or(500);
            let f = fig5(seed, trials, horizon).map_err(mc_error)?;
            let mut runs = Vec::new();
            for r in &f.runs {
                let head = HeaderInfo::for_run(&r.config);
                let name = format!("fig5_{}.csv", r.label);
                write_trajectory_csv(sink(Some(&out_file(&a.out_dir, &name)))?, &head, &r.stats, false)?;
                let mut w = sink(Some(&out_file(&a.out_dir, &format!("fig5_{}_sis.csv", r.label))))?;
                head.write(&mut w)?;
                writeln!(w, "t,sis_mean")?;
                for (t, p) in r.sis_mean.iter().enumerate() {
                    writeln!(w, "{},{p}", t + 1)?;
                }
                w.flush()?;
                runs.push(json!({
                    "label": r.label,
                    "config_sha256": head.fingerprint,
                    "ratio": r.ratio,
                    "final_infection_rate": r.stats.mean_infection()[horizon - 1],
                    "trend_slope": r.trend.slope,
                    "trend_std_error": r.trend.std_error,
                    "sis_final_mean": r.sis_mean.last(),
                }));
            }
            json!({
                "figure": "fig5",
                "seed": seed,
                "version": env!("CARGO_PKG_VERSION"),
                "trials": trials,
                "horizon": horizon,
                "lambda_max": f.lambda_max,
                "runs": runs,
            })
        }
    };
    let name = match a.figure {
        Figure::Fig2 => "fig2_summary.json",
        Figure::Fig4 => "fig4_summary.json",
        Figure::Fig5 => "fig5_summary.json",
    };
    let mut w = sink(Some(&out_file(&a.out_dir, name)))?;
    serde_json::to_writer_pretty(&mut w, &summary).map_err(runtime)?;
    writeln!(w)?;
    w.flush()?;
    print_json(&summary)
}
