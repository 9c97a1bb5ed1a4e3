use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qfhe_core::harness::{
    compare_tables, emit_report, load_table, run_experiment, selftest, ExperimentConfig, Mode,
    SelftestOptions,
};
use qfhe_core::qfhe::Mutation;
use qfhe_core::sim::GateKind;

#[derive(Parser)]
#[command(name = "qfhe", version, about = "Delegated MBQC experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pattern in one mode over a set of classical inputs.
    Run(RunArgs),
    /// Run the built-in oracle checks.
    Selftest {
        /// Inject a known fault to confirm the checks catch it.
        #[arg(long, value_enum, hide = true)]
        mutate: Option<Fault>,
    },
    /// Compare the counts tables of two reports.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Per-cell p-values at or below this fail the comparison.
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    DropHalfPiXTerm,
    ControlPhaseT,
    NoControlPhase,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_mode)]
    mode: Mode,
    #[arg(long)]
    pattern: PathBuf,
    /// Comma-separated input integers; all inputs when omitted.
    #[arg(long)]
    inputs: Option<String>,
    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_SHOTS)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long)]
    coupling: Option<PathBuf>,
    #[arg(long, requires = "coupling")]
    placement: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Write the shot-0 protocol transcript of every input (qfhe mode).
    #[arg(long)]
    dump_transcript: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: qfhe_core::Error| e.to_string())
}

fn parse_inputs(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| format!("`{t}` is not an input integer"))
        })
        .collect()
}

enum Failure {
    Invalid(String),
    Check,
}

impl From<qfhe_core::Error> for Failure {
    fn from(e: qfhe_core::Error) -> Self {
        let mut msg = e.to_string();
        let mut src = std::error::Error::source(&e);
        while let Some(s) = src {
            if !msg.contains(&s.to_string()) {
                msg.push_str(&format!(": {s}"));
            }
            src = s.source();
        }
        Failure::Invalid(msg)
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let inputs = args
        .inputs
        .as_deref()
        .map(parse_inputs)
        .transpose()
        .map_err(Failure::Invalid)?;
    let config = ExperimentConfig {
        mode: args.mode,
        pattern: args.pattern,
        inputs,
        shots: args.shots,
        seed: args.seed,
        noise: args.noise,
        coupling: args.coupling,
        placement: args.placement,
        out: args.out,
        dump_transcript: args.dump_transcript,
    };
    let exp = run_experiment(&config)?;
    emit_report(&exp.report, None, &config.out)?;
    if let Some(t) = &exp.transcripts {
        let path = config.out.join("transcript.txt");
        std::fs::write(&path, t).map_err(|e| qfhe_core::Error::Io { path, source: e })?;
    }
    let timing = config.out.join("timing.txt");
    std::fs::write(
        &timing,
        format!("wall_time_seconds {:.3}\n", exp.wall_time.as_secs_f64()),
    )
    .map_err(|e| qfhe_core::Error::Io {
        path: timing,
        source: e,
    })?;

    let r = &exp.report;
    println!("mode {} seed {} shots {}", r.mode, r.seed, r.shots);
    let header: Vec<String> = (1..=r.table.outputs).map(|k| format!("Q{k}")).collect();
    println!("input\t{}", header.join("\t"));
    for row in &r.table.rows {
        let cells: Vec<String> = row.ones.iter().map(u64::to_string).collect();
        println!("{}\t{}", row.input, cells.join("\t"));
    }
    if let Some(d) = r.noise_deviation {
        println!("mean absolute deviation from noiseless: {d:.3}");
    }
    eprintln!("wall time {:.2}s", exp.wall_time.as_secs_f64());
    Ok(())
}

fn self_check(mutate: Option<Fault>) -> Result<(), Failure> {
    let mut opts = SelftestOptions::default();
    match mutate {
        Some(Fault::DropHalfPiXTerm) => opts.mutation = Mutation::DropHalfPiXTerm,
        Some(Fault::ControlPhaseT) => opts.control_phase = Some(GateKind::T),
        Some(Fault::NoControlPhase) => opts.control_phase = None,
        None => {}
    }
    let summary = selftest(opts);
    for c in &summary.checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if summary.all_passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn compare(a: PathBuf, b: PathBuf, alpha: f64) -> Result<(), Failure> {
    let ta = load_table(&a)?;
    let tb = load_table(&b)?;
    let c = compare_tables(&ta, &tb)?;
    println!("input\toutput\tones_a\tones_b\tp");
    for cell in &c.cells {
        println!(
            "{}\t{}\t{}\t{}\t{:.4}",
            cell.input, cell.output_index, cell.ones_a, cell.ones_b, cell.p_value
        );
    }
    for d in &c.tv {
        println!("input {} tv {:.4}", d.input, d.tv);
    }
    println!("min p {:.4}", c.min_p());
    if c.all_above(alpha) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Selftest { mutate } => self_check(mutate),
        Command::Compare { a, b, alpha } => compare(a, b, alpha),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
