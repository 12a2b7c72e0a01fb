//! Command-line front end for the geometric WOM code library.
//!
//! Machine output (CSV/JSON) goes to stdout or `--out`; diagnostics go to
//! stderr.  Every output format starts with a version line so golden files
//! survive additive change (JSON carries a `format` field instead, since a
//! comment line would break JSON parsers).
//!
//! Exit codes: 0 success, 2 bad flags or unparsable input, 3 unwritable
//! message, 4 erasure required, 5 verification mismatch.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use womgeo::codes::hamming_code;
use womgeo::concat::{
    classical_times_repetition, inject_errors, random_error_pattern, wom_times_repetition,
};
use womgeo::geo_wom::{verify_write_count, EgCode, Pg22Code};
use womgeo::multilevel::{LiftedCode, Scheme};
use womgeo::simulate::{monte_carlo, sweep, SimConfig};
use womgeo::wom::{rivest_shamir, QCellState, WomCode};
use womgeo::{BitVector, Error};

#[derive(Parser)]
#[command(name = "womgeo", version, about = "Write-once-memory codes from finite geometries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a code descriptor (and state table for small codes) as JSON.
    Construct(ConstructArgs),
    /// Encode a message sequence and print the state trajectory as CSV.
    Encode(EncodeArgs),
    /// Decode stored states back to message labels.
    Decode(DecodeArgs),
    /// Check achievable per-write message counts against the declared ones.
    Verify(VerifyArgs),
    /// Rate comparison for the small geometry codes.
    Rates(RatesArgs),
    /// Concatenated error-correcting flash code report and error injection.
    Concat(ConcatArgs),
    /// Monte Carlo write-count simulation sweep.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Code family: rs, pg, or eg.
    #[arg(long)]
    family: String,
    /// Geometry dimension (pg: 2; eg: 3..=5).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Code name: rs, pg22, eg3, eg4, eg5.
    #[arg(long)]
    code: String,
    /// Cell levels.
    #[arg(long, default_value_t = 2)]
    q: u8,
    /// Update scheme: complement, a, or b.  The complement scheme at q=2 is
    /// the plain binary code with its per-write rules.
    #[arg(long, default_value = "complement")]
    strategy: String,
    /// Comma-separated message labels, one per write.
    #[arg(long)]
    messages: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: String,
    #[arg(long, default_value_t = 2)]
    q: u8,
    /// Comma-separated state strings (level digits, cell 1 first).
    #[arg(long)]
    states: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    code: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RatesArgs {
    /// Output format: text or csv.
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConcatArgs {
    /// Outer classical code: hamming7 or hamming15.
    #[arg(long, conflicts_with = "wom")]
    outer: Option<String>,
    /// Inner repetition length (rep3, rep5, ...).
    #[arg(long)]
    inner: Option<String>,
    /// Inner WOM code for a WOM x repetition construction (e.g. rs).
    #[arg(long)]
    wom: Option<String>,
    /// Repetition length for --wom mode.
    #[arg(long)]
    rep: Option<usize>,
    #[arg(long)]
    q: u8,
    /// Number of random error-injection trials (0 = report only).
    #[arg(long, default_value_t = 0)]
    trials: u64,
    /// Errors injected per trial; defaults to the error capability.
    #[arg(long)]
    errors: Option<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    code: String,
    /// Level count or inclusive range, e.g. 4 or 2..8.
    #[arg(long)]
    q: String,
    /// Comma-separated schemes, e.g. complement,a,b.
    #[arg(long, default_value = "complement,a,b")]
    strategies: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Run trials on one thread (results are identical either way).
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_category(&err))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct(args) => construct(args),
        Command::Encode(args) => encode(args),
        Command::Decode(args) => decode(args),
        Command::Verify(args) => verify(args),
        Command::Rates(args) => rates(args),
        Command::Concat(args) => concat(args),
        Command::Simulate(args) => simulate(args),
    }
}

/// Map library errors onto the documented exit-code categories.
fn exit_category(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Unwritable { .. }) => 3,
        Some(Error::EraseRequired { .. }) => 4,
        Some(Error::NoMessage)
        | Some(Error::NotAWomState)
        | Some(Error::CorruptedState { .. }) => 5,
        _ => 2,
    }
}

fn make_code(name: &str) -> Result<Arc<dyn WomCode>> {
    match name.to_ascii_lowercase().as_str() {
        "rs" => Ok(Arc::new(rivest_shamir())),
        "pg22" | "pg" => Ok(Arc::new(Pg22Code::new())),
        "eg3" => Ok(Arc::new(EgCode::new(3)?)),
        "eg4" => Ok(Arc::new(EgCode::new(4)?)),
        "eg5" => Ok(Arc::new(EgCode::new(5)?)),
        other => Err(Error::UnknownCode(other.to_string()).into()),
    }
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(&path, content)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

/// States reachable after each write, grouped by the message they store.
/// Mirrors verify_write_count: a state carries over when its stored message
/// repeats, and proper writes follow the code's per-write rules.
fn reachable_table(code: &dyn WomCode) -> Vec<BTreeMap<String, BTreeSet<String>>> {
    let v = code.message_count();
    let mut layer: HashSet<BitVector> = HashSet::new();
    layer.insert(BitVector::zero(code.cells()));
    let mut table = Vec::new();
    for write in 0..code.writes() {
        let mut next = HashSet::new();
        let mut by_message: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for state in &layer {
            for msg in 0..v {
                if let Ok(s) = code.encode(write, state, msg) {
                    next.insert(s);
                    by_message
                        .entry(code.message_label(msg))
                        .or_default()
                        .insert(s.to_string());
                }
            }
        }
        table.push(by_message);
        layer = next;
    }
    table
}

fn construct(args: ConstructArgs) -> Result<ExitCode> {
    let name = match (args.family.to_ascii_lowercase().as_str(), args.m) {
        ("rs", None) => "rs".to_string(),
        ("rs", Some(_)) => bail!("rs takes no --m"),
        ("pg", None | Some(2)) => "pg22".to_string(),
        ("pg", Some(m)) => bail!("pg supports m=2 only, got m={m}"),
        ("eg", Some(m @ 3..=5)) => format!("eg{m}"),
        ("eg", Some(m)) => bail!("eg supports m in 3..=5, got m={m}"),
        ("eg", None) => bail!("eg requires --m"),
        (other, _) => bail!("unknown family: {other}"),
    };
    let code = make_code(&name)?;
    // Full tables only for codes whose state space is small enough to walk.
    let table = if code.cells() <= 8 {
        let writes = reachable_table(code.as_ref())
            .into_iter()
            .enumerate()
            .map(|(i, by_message)| {
                let map: serde_json::Map<String, serde_json::Value> = by_message
                    .into_iter()
                    .map(|(label, states)| {
                        (
                            label,
                            serde_json::Value::from(
                                states.into_iter().collect::<Vec<String>>(),
                            ),
                        )
                    })
                    .collect();
                serde_json::json!({ "write": i + 1, "messages": map })
            })
            .collect::<Vec<_>>();
        serde_json::Value::from(writes)
    } else {
        serde_json::Value::Null
    };
    let descriptor = serde_json::json!({
        "format": "womgeo-code/1",
        "name": code.name(),
        "n": code.cells(),
        "t": code.writes(),
        "messages_per_write": code.messages_per_write(),
        "rate": code.rate(),
        "table": table,
    });
    emit(args.out, &format!("{}\n", serde_json::to_string_pretty(&descriptor)?))?;
    Ok(ExitCode::SUCCESS)
}

fn encode(args: EncodeArgs) -> Result<ExitCode> {
    let base = make_code(&args.code)?;
    let scheme: Scheme = args.strategy.parse::<Scheme>().map_err(anyhow::Error::from)?;
    let messages: Vec<usize> = args
        .messages
        .split(',')
        .map(|label| base.parse_message(label.trim()).map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;
    let lifted = LiftedCode::new(base.clone(), args.q)?;
    let trace = lifted.encode_sequence(scheme, &messages)?;
    let mut csv = String::from("# womgeo trace v1\nstep,message,state,cells_increased,max_level\n");
    for step in &trace.steps {
        writeln!(
            csv,
            "{},{},{},{},{}",
            step.write,
            base.message_label(step.message),
            step.state,
            step.cells_increased,
            step.state.max_level()
        )?;
    }
    emit(args.out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn decode(args: DecodeArgs) -> Result<ExitCode> {
    let base = make_code(&args.code)?;
    let lifted = LiftedCode::new(base.clone(), args.q)?;
    let mut csv = String::from("# womgeo decode v1\nstate,message\n");
    for raw in args.states.split(',') {
        let parsed: QCellState = raw.trim().parse().map_err(anyhow::Error::from)?;
        // Re-validate against the requested q; FromStr infers the smallest q.
        let state = QCellState::new(args.q, parsed.levels().to_vec())?;
        let msg = lifted.decode(&state)?;
        writeln!(csv, "{},{}", state, base.message_label(msg))?;
    }
    emit(args.out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let code = make_code(&args.code)?;
    if code.cells() > 16 {
        bail!("state space of {} is too large to verify exhaustively", code.name());
    }
    let declared = code.messages_per_write();
    let achieved = verify_write_count(code.as_ref(), code.writes());
    let mut out = String::from("# womgeo verify v1\nwrite,declared,achieved,ok\n");
    let mut ok = true;
    for (i, &d) in declared.iter().enumerate() {
        let a = achieved.get(i).copied().unwrap_or(0);
        writeln!(out, "{},{},{},{}", i + 1, d, a, if a >= d { "yes" } else { "no" })?;
        ok &= a >= d;
    }
    let schedule: Vec<String> = achieved.iter().map(|a| a.to_string()).collect();
    writeln!(out, "# {}: achieved <{}> over {} writes", code.name(), schedule.join(","), code.writes())?;
    emit(args.out, &out)?;
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "{}: achieved counts fall short of the declared <{}>",
            code.name(),
            declared.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(ExitCode::from(5))
    }
}

fn rates(args: RatesArgs) -> Result<ExitCode> {
    let rows = womgeo::analysis::rate_table()?;
    let content = match args.format.as_str() {
        "csv" => {
            let mut csv =
                String::from("# womgeo rates v1\nname,length,writes,rate_computed,rate_paper,matches\n");
            for r in &rows {
                writeln!(
                    csv,
                    "{},{},{},{:.6},{:.2},{}",
                    r.code, r.length, r.writes, r.rate, r.reference_rate, r.matches_reference
                )?;
            }
            csv
        }
        "text" => {
            let mut text = String::from("# womgeo rates v1\n");
            writeln!(text, "{:<10} {:>6} {:>6} {:>6} {:>9}  match", "code", "length", "writes", "rate", "published")?;
            for r in &rows {
                writeln!(
                    text,
                    "{:<10} {:>6} {:>6} {:>6.2} {:>9.2}  {}",
                    r.code,
                    r.length,
                    r.writes,
                    r.rate,
                    r.reference_rate,
                    if r.matches_reference { "yes" } else { "no" }
                )?;
            }
            text
        }
        other => bail!("unknown format: {other}"),
    };
    emit(args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_rep(label: &str) -> Result<usize> {
    label
        .strip_prefix("rep")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| anyhow!("inner code must be repN, got {label}"))
}

fn concat(args: ConcatArgs) -> Result<ExitCode> {
    let mut report = String::from("# womgeo concat v1\n");
    let seed = args.seed;
    enum Built {
        Classical(womgeo::concat::ClassicalFlashCode),
        WomRep(womgeo::concat::WomRepCode),
    }
    let built = match (&args.outer, &args.wom) {
        (Some(outer), None) => {
            let outer_code = match outer.to_ascii_lowercase().as_str() {
                "hamming7" => hamming_code(3)?,
                "hamming15" => hamming_code(4)?,
                other => bail!("unknown outer code: {other}"),
            };
            let rep = parse_rep(args.inner.as_deref().unwrap_or("rep3"))?;
            let code = classical_times_repetition(outer_code, rep, args.q)?;
            writeln!(
                report,
                "outer: {} [{},{},{}]",
                code.outer().name(),
                code.outer().length(),
                code.outer().dimension(),
                code.outer().min_distance()
            )?;
            writeln!(report, "inner: one-bit flash cell x rep{rep} at q={}", args.q)?;
            writeln!(report, "cells: {}", code.cells())?;
            writeln!(report, "messages: {}", code.message_count())?;
            writeln!(report, "guaranteed_writes: {}", code.guaranteed_writes())?;
            writeln!(report, "error_capability: {}", code.error_capability())?;
            Built::Classical(code)
        }
        (None, Some(wom)) => {
            let base = make_code(wom)?;
            let rep = args.rep.unwrap_or(3);
            let code = wom_times_repetition(base, rep, args.q)?;
            writeln!(report, "wom: {} on {} cells", code.inner_wom().name(), code.inner_wom().cells())?;
            writeln!(report, "repetition: {rep} at q={}", args.q)?;
            writeln!(report, "cells: {}", code.cells())?;
            writeln!(report, "guaranteed_writes: {}", code.guaranteed_writes())?;
            writeln!(report, "error_capability: {}", code.error_capability())?;
            Built::WomRep(code)
        }
        _ => bail!("give exactly one of --outer or --wom"),
    };
    if args.trials > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut successes = 0u64;
        let errors = args.errors.unwrap_or(match &built {
            Built::Classical(c) => c.error_capability(),
            Built::WomRep(c) => c.error_capability(),
        });
        for _ in 0..args.trials {
            let ok = match &built {
                Built::Classical(code) => {
                    let writes = rng.gen_range(1..=code.guaranteed_writes());
                    let mut state = code.zero_state();
                    let mut msg = 0;
                    for w in 0..writes {
                        msg = rng.gen_range(0..code.message_count());
                        state = code.encode(w, &state, msg)?;
                    }
                    let noisy = inject_errors(&state, &random_error_pattern(&mut rng, &state, errors))?;
                    code.read_and_correct(writes, &noisy).map(|(m, _)| m) == Ok(msg)
                }
                Built::WomRep(code) => {
                    let writes = rng.gen_range(1..=code.guaranteed_writes());
                    let mut state = code.zero_state();
                    let mut msg = 0;
                    for w in 0..writes {
                        msg = rng.gen_range(0..code.inner_wom().message_count());
                        state = code.encode(w, &state, msg)?;
                    }
                    let noisy = inject_errors(&state, &random_error_pattern(&mut rng, &state, errors))?;
                    code.read_and_correct(writes, &noisy).map(|(m, _)| m) == Ok(msg)
                }
            };
            successes += u64::from(ok);
        }
        writeln!(report, "injection: errors={errors} trials={} seed={seed} decoded={successes}", args.trials)?;
    }
    emit(args.out, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_q_range(spec: &str) -> Result<Vec<u8>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u8 = lo.trim().parse().context("bad q range")?;
        let hi: u8 = hi.trim().trim_start_matches('=').parse().context("bad q range")?;
        if lo < 2 || hi < lo {
            bail!("bad q range: {spec}");
        }
        Ok((lo..=hi).collect())
    } else {
        let q: u8 = spec.trim().parse().context("bad q value")?;
        Ok(vec![q])
    }
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let base = make_code(&args.code)?;
    let q_values = parse_q_range(&args.q)?;
    let schemes: Vec<Scheme> = args
        .strategies
        .split(',')
        .map(|s| s.trim().parse::<Scheme>().map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;
    eprintln!("seed = {}", args.seed);
    let mut csv = String::from("# womgeo sweep v1\ncode,strategy,q,trials,mean_writes,stderr\n");
    if args.serial {
        for &q in &q_values {
            for &scheme in &schemes {
                let config = SimConfig { scheme, q, trials: args.trials, seed: args.seed, parallel: false };
                let r = monte_carlo(base.clone(), &config)?;
                writeln!(
                    csv,
                    "{},{},{},{},{:.6},{:.6}",
                    base.name(), scheme, q, args.trials, r.mean, r.std_error
                )?;
            }
        }
    } else {
        for row in sweep(base.clone(), &schemes, &q_values, args.trials, args.seed)? {
            writeln!(
                csv,
                "{},{},{},{},{:.6},{:.6}",
                row.code, row.scheme, row.q, row.trials, row.mean, row.std_error
            )?;
        }
    }
    emit(args.out, &csv)?;
    Ok(ExitCode::SUCCESS)
}
