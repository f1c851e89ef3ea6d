use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use asvnav::effects::fit;
use asvnav::harness::suite::{rescore_suite, run_suite, write_suite, SuiteSpec, RESOLVED_SUITE};
use asvnav::harness::training::{generate_training_logs, SweepSpec};
use asvnav::harness::{io, rescore_run, run_scenario, write_run, Scenario, RESOLVED_SCENARIO};

// stdout may be a closed pipe (`asvnav suite ... | head`); that is not an error
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! say_raw {
    ($($arg:tt)*) => {{
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "asvnav", version, about = "ASV waypoint guidance simulator")]
struct Cli {
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the scenario seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate one scenario file
    Run { scenario: PathBuf },
    /// Run the eight-orientation comparison suite
    Suite { suite: PathBuf },
    /// Generate training samples from a sweep file
    Train { sweep: PathBuf },
    /// Fit an effect model from a training CSV
    Fit {
        training: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Fit an intercept column as well
        #[arg(long)]
        intercept: bool,
    },
    /// Re-score a run or suite output directory
    Report { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Ok(false) when a run finished without completing its mission.
fn dispatch(cli: &Cli) -> asvnav::Result<bool> {
    match &cli.cmd {
        Cmd::Run { scenario } => {
            let mut sc = Scenario::load(scenario)?;
            if let Some(s) = cli.seed {
                sc.seed = s;
            }
            let out = run_scenario(&sc)?;
            let dir = cli.out.join(&sc.name);
            write_run(&dir, &sc, &out)?;
            say_raw!("{}", io::report_text(&sc.name, out.report.as_ref(), out.complete));
            say!("wrote {}", dir.display());
            Ok(out.complete)
        }
        Cmd::Suite { suite } => {
            let (spec, mut tpl) = SuiteSpec::load(suite)?;
            if let Some(s) = cli.seed {
                tpl.seed = s;
            }
            let out = run_suite(&spec, &tpl)?;
            write_suite(&cli.out, &spec, &tpl, &out)?;
            match &out.table {
                Some(t) => say_raw!("{}", t.to_text()),
                None => say!("table incomplete; see cells.csv"),
            }
            for c in out.cells.iter().filter(|c| !c.outcome.complete) {
                say!("incomplete: {}", c.scenario.name);
            }
            say!("wrote {}", cli.out.display());
            Ok(out.all_complete())
        }
        Cmd::Train { sweep } => {
            let (spec, mut tpl) = SweepSpec::load(sweep)?;
            if let Some(s) = cli.seed {
                tpl.seed = s;
            }
            let (runs, samples) = generate_training_logs(&spec, &tpl)?;
            let path = cli.out.join("training.csv");
            io::write_text(&path, &io::training_csv(&samples)?)?;
            say!("{runs} runs, {} samples -> {}", samples.len(), path.display());
            Ok(true)
        }
        Cmd::Fit { training, output, intercept } => {
            let samples = io::read_training(training)?;
            let model = fit(&samples, *intercept)?;
            io::write_text(output, &(model.to_json() + "\n"))?;
            for (name, rmse) in model.outputs.iter().zip(&model.residual_rmse) {
                say!("{name:<12} rmse {rmse:.6}");
            }
            say!("wrote {}", output.display());
            Ok(true)
        }
        Cmd::Report { dir } => report(dir),
    }
}

fn report(dir: &Path) -> asvnav::Result<bool> {
    if dir.join(RESOLVED_SUITE).exists() {
        let out = rescore_suite(dir)?;
        if let Some(t) = &out.table {
            say_raw!("{}", t.to_text());
        }
        Ok(out.all_complete())
    } else if dir.join(RESOLVED_SCENARIO).exists() {
        let out = rescore_run(dir)?;
        say_raw!("{}", io::report_text(&out.name, out.report.as_ref(), out.complete));
        Ok(out.complete)
    } else {
        Err(asvnav::Error::Config(format!("{} is not a run or suite directory", dir.display())))
    }
}
