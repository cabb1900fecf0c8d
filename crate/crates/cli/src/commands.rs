use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde_json::json;
use tpir_audit::capacity::{capacity, download_cost_per_symbol};
use tpir_audit::grid::{capacity_shape_check, default_grid, rate_depends_on_databases};
use tpir_audit::report::RECORD_SCHEMA;
use tpir_audit::{
    correctness_sweep, rate_vs_capacity_grid, run_audit, structural_layout_check, AuditOptions, AuditReport,
};
use tpir_core::scheme::{answer_batch, Fault};
use tpir_core::{
    build_layout, build_queries, per_layer_counts, sample_secrets, total_download, Decoder, FieldModulus, Matrix,
    MessageStore, SchemeParams, SeededRng,
};
use tpir_simnet::{ingest_messages, run_session, Mode, SessionConfig, Source};

use crate::{AuditArgs, BenchArgs, CliConfig, CliError, Command, Format, Outcome, SimulateArgs};

pub fn dispatch(cli: &CliConfig) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Capacity {
            messages,
            responders,
            colluders,
            databases,
        } => cmd_capacity(*messages, *responders, *colluders, *databases, cli.format),
        Command::Layout { params, desired } => {
            let p = params.resolve().map_err(CliError::Usage)?;
            let desired = desired_index(*desired, &p)?;
            cmd_layout(&p, desired, cli.format)
        }
        Command::Demo { params, desired, seed } => {
            let p = params.resolve().map_err(CliError::Usage)?;
            let desired = desired_index(*desired, &p)?;
            crate::demo::cmd_demo(&p, desired, seed.resolve(), cli.format)
        }
        Command::Audit(args) => cmd_audit(args, cli.format),
        Command::Simulate(args) => cmd_simulate(args, cli.format),
        Command::Bench(args) => cmd_bench(args, cli.format),
    }
}

fn desired_index(one_based: usize, p: &SchemeParams) -> Result<usize, CliError> {
    if one_based == 0 || one_based > p.messages() {
        return Err(CliError::Usage(format!(
            "--desired must be in 1..={}, got {one_based}",
            p.messages()
        )));
    }
    Ok(one_based - 1)
}

fn record(kind: &str, mut body: serde_json::Value) -> String {
    let obj = body.as_object_mut().expect("records are objects");
    obj.insert("schema".into(), json!(RECORD_SCHEMA));
    obj.insert("kind".into(), json!(kind));
    body.to_string()
}

fn ratio_f64(r: Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn cmd_capacity(
    messages: usize,
    responders: usize,
    colluders: usize,
    databases: Option<usize>,
    format: Format,
) -> Result<Outcome, CliError> {
    if let Some(m) = databases {
        if m < responders {
            return Err(CliError::Usage(format!("need N <= M, got N={responders}, M={m}")));
        }
    }
    let c = capacity(messages, responders, colluders).map_err(|e| CliError::Usage(e.to_string()))?;
    let cost = download_cost_per_symbol(messages, responders, colluders).map_err(|e| CliError::Usage(e.to_string()))?;
    match format {
        Format::Table => {
            println!("K={messages} N={responders} T={colluders}");
            println!("capacity            {c}  ({:.6})", ratio_f64(c));
            println!("download per symbol {cost}  ({:.6})", ratio_f64(cost));
        }
        Format::Records => println!(
            "{}",
            record(
                "capacity",
                json!({
                    "messages": messages, "responders": responders, "colluders": colluders,
                    "capacity": c.to_string(), "capacity_decimal": ratio_f64(c),
                    "download_per_symbol": cost.to_string(),
                })
            )
        ),
    }
    Ok(Outcome::Ok)
}

fn cmd_layout(p: &SchemeParams, desired: usize, format: Format) -> Result<Outcome, CliError> {
    let layout = build_layout(p, desired)?;
    match format {
        Format::Table => {
            print!("{}", layout.render_table());
            println!("per layer (per database):");
            for c in per_layer_counts(p) {
                println!("  layer {}: {} equations, {} with the desired message", c.layer, c.per_db, c.per_db_desired);
            }
        }
        Format::Records => {
            println!(
                "{}",
                record("layout", json!({ "desired": desired + 1, "layout": layout, "layers": per_layer_counts(p) }))
            );
        }
    }
    Ok(Outcome::Ok)
}

fn parse_invariance(values: &[String]) -> Result<(usize, FieldModulus), CliError> {
    let mut alpha = None;
    let mut q = None;
    for v in values {
        let (key, val) = v
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got {v:?}")))?;
        let n: u64 = val
            .parse()
            .map_err(|_| CliError::Usage(format!("{key} must be an integer, got {val:?}")))?;
        match key {
            "alpha" => alpha = Some(n as usize),
            "q" => q = Some(n),
            _ => return Err(CliError::Usage(format!("unknown key {key:?}; use alpha= and q="))),
        }
    }
    let alpha = alpha.ok_or_else(|| CliError::Usage("missing alpha=".into()))?;
    let q = FieldModulus::new(q.unwrap_or(2)).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((alpha, q))
}

fn emit_report(report: &AuditReport, format: Format) {
    match format {
        Format::Table => print!("{}", report.render_table()),
        Format::Records => {
            for line in report.to_records() {
                println!("{line}");
            }
        }
    }
}

fn cmd_audit(args: &AuditArgs, format: Format) -> Result<Outcome, CliError> {
    let seed = args.seed.resolve();
    let invariance = args.mixing_invariance.as_deref().map(parse_invariance).transpose()?;
    let fault = if args.break_alignment {
        Fault::UncodedSideInformation
    } else {
        Fault::None
    };
    let report = match (args.messages, args.responders, args.colluders) {
        (Some(k), Some(n), Some(t)) => {
            let params = crate::ParamArgs {
                messages: k,
                responders: n,
                colluders: t,
                databases: args.databases,
                modulus: args.modulus,
            }
            .resolve()
            .map_err(CliError::Usage)?;
            let options = AuditOptions {
                seed,
                trials: args.trials,
                samples: args.samples,
                fault,
                invariance,
            };
            run_audit(&params, &options)?
        }
        (None, None, None) => grid_audit(args, seed, fault, invariance)?,
        _ => return Err(CliError::Usage("give all of -K, -N, -T or none for the default grid".into())),
    };
    emit_report(&report, format);
    Ok(if report.passed() { Outcome::Ok } else { Outcome::CheckFailed })
}

/// Rates, structural privacy and correctness over the default grid.
fn grid_audit(
    args: &AuditArgs,
    seed: u64,
    fault: Fault,
    invariance: Option<(usize, FieldModulus)>,
) -> Result<AuditReport, CliError> {
    let grid = default_grid();
    let mut report = AuditReport::new(None, seed);
    report.rates = rate_vs_capacity_grid(&grid)?;
    let varying = rate_depends_on_databases(&report.rates);
    report.add(if varying.is_empty() {
        tpir_audit::CheckResult::pass("rate independent of M", format!("{} grid points", grid.len()))
    } else {
        tpir_audit::CheckResult::fail("rate independent of M", format!("{varying:?}"))
    })?;
    report.add(capacity_shape_check(12, 8)?)?;

    let mut structural = Vec::new();
    let mut correctness = Vec::new();
    let root = SeededRng::new(seed);
    for (i, p) in grid.iter().enumerate() {
        let r = structural_layout_check(p, fault)?;
        if !r.passed {
            structural.push(r.details);
        }
        let r = correctness_sweep(p, args.trials, &mut root.fork(i as u64))?;
        if !r.passed {
            correctness.push(r.details);
        }
    }
    let summarize = |name: &str, failures: Vec<String>| {
        if failures.is_empty() {
            tpir_audit::CheckResult::pass(name, format!("{} grid points", grid.len()))
        } else {
            tpir_audit::CheckResult::fail(name, failures.join("; "))
        }
    };
    report.add(summarize(tpir_audit::structural::CHECK_NAME, structural))?;
    report.add(summarize(tpir_audit::correctness::CHECK_NAME, correctness))?;

    if let Some(samples) = args.samples {
        let p = SchemeParams::new(2, 2, 1, 2)?;
        report.add(tpir_audit::empirical_privacy_check(&p, &[0], samples, &mut root.fork(u64::MAX), fault)?)?;
    }
    if let Some((alpha, q)) = invariance {
        report.add(tpir_audit::mixing_invariance_check(alpha, q, &mut root.fork(u64::MAX - 1))?)?;
    }
    Ok(report)
}

fn cmd_simulate(args: &SimulateArgs, format: Format) -> Result<Outcome, CliError> {
    let p = args.params.resolve().map_err(CliError::Usage)?;
    let desired = desired_index(args.desired, &p)?;
    let seed = args.seed.resolve();
    let p = p.with_seed(seed);
    let source = if args.store.starts_with("seed:") {
        Source::parse_directive(&args.store).map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        Source::Bytes(std::fs::read(&args.store)?)
    };
    let mode = if args.strict { Mode::Strict } else { Mode::Reduce };
    let store = Arc::new(ingest_messages(&source, &p, mode)?);
    let mut drop_set = Vec::new();
    for &d in &args.drop {
        if d == 0 || d > p.databases() {
            return Err(CliError::Usage(format!("--drop ids must be in 1..={}", p.databases())));
        }
        drop_set.push(d - 1);
    }
    if drop_set.len() > p.databases() - p.responders() {
        return Err(CliError::Usage(format!(
            "{} silent databases but at most M - N = {} may fail",
            drop_set.len(),
            p.databases() - p.responders()
        )));
    }
    let latency = if args.latency_ms.is_empty() {
        None
    } else {
        Some(args.latency_ms.iter().map(|&ms| Duration::from_millis(ms)).collect())
    };
    let config = SessionConfig {
        drop_set,
        latency,
        log_dir: args.log_dir.clone(),
    };
    let out = run_session(&p, desired, store.clone(), &config, &mut SeededRng::new(seed))?;
    let ok = out.decoded == store.message(desired);
    let responders: Vec<usize> = out.metrics.responders.iter().map(|d| d + 1).collect();
    match format {
        Format::Table => {
            println!("{p}  seed={seed}");
            println!("silent databases    {:?}", args.drop);
            println!("decoded from        {responders:?}");
            println!("downloaded symbols  {} (expected {})", out.metrics.downloaded_symbols, total_download(&p));
            println!("upload bytes        {}", out.metrics.upload_bytes);
            println!("download bytes      {}", out.metrics.download_bytes);
            println!("wall time           {:.2?}", out.metrics.wall_time);
            if let Some(path) = &out.log_path {
                println!("session log         {}", path.display());
            }
            println!("result              {}", if ok { "decoded message matches" } else { "MISMATCH" });
        }
        Format::Records => println!(
            "{}",
            record(
                "session",
                json!({
                    "params": p, "seed": seed, "drop_set": args.drop, "responders": responders,
                    "downloaded_symbols": out.metrics.downloaded_symbols,
                    "upload_bytes": out.metrics.upload_bytes, "download_bytes": out.metrics.download_bytes,
                    "wall_seconds": out.metrics.wall_time.as_secs_f64(), "success": ok,
                })
            )
        ),
    }
    Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed })
}

fn cmd_bench(args: &BenchArgs, format: Format) -> Result<Outcome, CliError> {
    let seed = args.seed.resolve();
    let trials = args.trials.max(1);
    if format == Format::Table {
        println!(
            "{:>3} {:>3} {:>3} {:>3} {:>6}  {:<8} {:>12} {:>14}",
            "K", "N", "T", "M", "q", "phase", "seconds", "symbols/s"
        );
    }
    let root = SeededRng::new(seed);
    for (i, p) in default_grid()
        .into_iter()
        .filter(|p| p.messages() <= args.max_messages && p.responders() <= args.max_responders)
        .enumerate()
    {
        let mut rng = root.fork(i as u64);
        let l = p.message_len();
        let timed = |f: &mut dyn FnMut() -> Result<(), CliError>| -> Result<Duration, CliError> {
            let t = Instant::now();
            f()?;
            Ok(t.elapsed())
        };
        let mut secrets = None;
        let t_secrets = timed(&mut || {
            secrets = Some(sample_secrets(&p, &mut rng));
            Ok(())
        })?;
        let secrets = secrets.expect("sampled");
        let mut plan = None;
        let t_build = timed(&mut || {
            plan = Some(build_queries(&p, 0, &secrets)?);
            Ok(())
        })?;
        let plan = plan.expect("built");
        let stores: Vec<MessageStore> = (0..trials).map(|_| MessageStore::random(&p, &mut rng)).collect();
        let stacked = MessageStore::stack_columns(&stores)?;
        let mut answers: Vec<(usize, Matrix)> = Vec::new();
        let t_answer = timed(&mut || {
            answers = plan
                .queries()
                .iter()
                .enumerate()
                .map(|(db, q)| Ok((db, answer_batch(q, &stacked)?)))
                .collect::<Result<_, tpir_core::Error>>()?;
            Ok(())
        })?;
        let mut decoded = None;
        let t_decode = timed(&mut || {
            decoded = Some(Decoder::new(&p, 0, &secrets)?.decode_batch(&answers)?);
            Ok(())
        })?;
        let decoded = decoded.expect("decoded");
        let correct = (0..trials).all(|c| (0..l).all(|r| decoded.raw(r, c) == stores[c].message(0)[r]));
        if !correct {
            return Err(CliError::Runtime(format!("{p}: benchmark decode mismatch")));
        }
        let symbols = (l * trials) as f64;
        for (phase, t) in [
            ("secrets", t_secrets),
            ("build", t_build),
            ("answer", t_answer),
            ("decode", t_decode),
        ] {
            let secs = t.as_secs_f64();
            let rate = if secs > 0.0 { symbols / secs } else { f64::INFINITY };
            match format {
                Format::Table => println!(
                    "{:>3} {:>3} {:>3} {:>3} {:>6}  {:<8} {:>12.6} {:>14.0}",
                    p.messages(),
                    p.responders(),
                    p.colluders(),
                    p.databases(),
                    p.modulus().value(),
                    phase,
                    secs,
                    rate
                ),
                Format::Records => println!(
                    "{}",
                    record(
                        "bench",
                        json!({
                            "messages": p.messages(), "responders": p.responders(),
                            "colluders": p.colluders(), "databases": p.databases(),
                            "modulus": p.modulus().value(), "seed": seed, "trials": trials,
                            "phase": phase, "seconds": secs, "symbols_per_second": rate,
                        })
                    )
                ),
            }
        }
    }
    Ok(Outcome::Ok)
}
