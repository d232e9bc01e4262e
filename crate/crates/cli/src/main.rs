use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bourbaki_cli::{run, Certificate, CliError, InstanceFile, Job, Options, OracleJob, Via};
use clap::{Parser, Subcommand};

/// Fixed points, well-orderings and maximal elements on finite preorders,
/// with checkable certificates.
#[derive(Parser)]
#[command(name = "bourbaki", version)]
struct Cli {
    /// Emit the certificate as JSON instead of prose.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks and for the round-trip choice function.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Close the relation reflexively and transitively before validating.
    #[arg(long, global = true)]
    closure: bool,
    /// Bound for exhaustive scans; also lowers the oracle caps.
    #[arg(long, global = true)]
    max_size: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance and report basic order properties.
    Check { file: PathBuf },
    /// Well-order the carrier from the instance's choice function.
    Wellorder { file: PathBuf },
    /// Climb to a fixed point of the inflationary map `f`.
    Fixpoint {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
    },
    /// Find a maximal element.
    Maximal {
        file: PathBuf,
        #[arg(long, value_enum)]
        via: Via,
    },
    /// Run the recursion engine on the instance's `phi` table.
    Tb { file: PathBuf },
    /// Run the recursion on `psi` and exhibit two subsets it identifies.
    Kanamori { file: PathBuf },
    /// Fixed member of a union-closed family under an expanding map.
    Kuratowski { file: PathBuf },
    /// Choice -> maximal element -> Zorn -> well-order -> choice.
    Equivalence {
        #[arg(long)]
        n: usize,
    },
    /// Brute-force cross-checks.
    Oracle {
        #[command(subcommand)]
        query: OracleCommand,
    },
    /// Replay a JSON certificate and compare it byte for byte.
    Verify { certificate: PathBuf },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Count labelled preorders with two independent filters.
    Preorders {
        #[arg(long)]
        n: usize,
    },
    Fixpoints {
        file: PathBuf,
    },
    Maximal {
        file: PathBuf,
    },
    WellOrdered {
        file: PathBuf,
    },
    Tb {
        file: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<InstanceFile, CliError> {
    InstanceFile::parse(&read(path)?)
}

fn job_of(command: Command) -> (Job, Option<PathBuf>) {
    match command {
        Command::Check { file } => (Job::Check, Some(file)),
        Command::Wellorder { file } => (Job::Wellorder, Some(file)),
        Command::Fixpoint { file, case } => (Job::Fixpoint { case }, Some(file)),
        Command::Maximal { file, via } => (Job::Maximal { via }, Some(file)),
        Command::Tb { file } => (Job::Tb, Some(file)),
        Command::Kanamori { file } => (Job::Kanamori, Some(file)),
        Command::Kuratowski { file } => (Job::Kuratowski, Some(file)),
        Command::Equivalence { n } => (Job::Equivalence { n }, None),
        Command::Oracle { query } => {
            let (query, file) = match query {
                OracleCommand::Preorders { n } => (OracleJob::Preorders { n }, None),
                OracleCommand::Fixpoints { file } => (OracleJob::Fixpoints, Some(file)),
                OracleCommand::Maximal { file } => (OracleJob::Maximal, Some(file)),
                OracleCommand::WellOrdered { file } => (OracleJob::WellOrdered, Some(file)),
                OracleCommand::Tb { file } => (OracleJob::Tb, Some(file)),
            };
            (Job::Oracle { query }, file)
        }
        Command::Verify { .. } => unreachable!("handled separately"),
    }
}

fn emit(cert: &Certificate, json: bool) {
    if json {
        println!("{}", cert.to_json());
    } else {
        println!("{}", cert.to_prose());
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    if let Command::Verify { certificate } = &cli.command {
        let text = read(certificate)?;
        let (replayed, matches) = bourbaki_cli::commands::replay(&text)?;
        if matches {
            println!(
                "verified: {} certificate replays identically",
                replayed.kind
            );
            return Ok(0);
        }
        eprintln!("mismatch: replaying the echoed inputs gives a different certificate");
        emit(&replayed, cli.json);
        return Ok(1);
    }
    let opts = Options {
        closure: cli.closure,
        max_size: cli.max_size,
        seed: cli.seed,
    };
    let (job, file) = job_of(cli.command);
    let instance = file.as_deref().map(load).transpose()?;
    if let Some(inst) = &instance {
        for field in inst.ignored_fields(job.fields()) {
            eprintln!("warning: ignoring field `{field}` for {}", job.kind());
        }
    }
    let cert = run(job, instance.as_ref(), &opts)?;
    emit(&cert, cli.json);
    Ok(cert.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
