use clap::{Parser, Subcommand};
use plemelj_cli::{
    parse_grid, run_domain_map, run_functional, run_verify, write_domain_map, write_report, CliError, DomainMapRequest,
    MapKernel, Suite,
};
use plemelj_core::Kernel;
use std::path::PathBuf;
use std::process::ExitCode;

/// Complex Dirac delta: regularized kernels, wedge domains and Plemelj functionals.
#[derive(Debug, Parser)]
#[command(name = "plemelj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the λ → 0 limit of a kernel over a grid and write CSV.
    DomainMap {
        #[arg(long, value_enum)]
        kernel: MapKernel,
        /// RE_MIN:RE_MAX:N,IM_MIN:IM_MAX:N
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        lambda_start: f64,
        #[arg(long, default_value_t = 13)]
        lambda_steps: usize,
    },
    /// Evaluate a functional on a catalog test function along a JSON contour.
    Functional {
        /// I_plus, I_minus or delta
        #[arg(long)]
        kernel: Kernel,
        /// one, gauss(a), poly_gauss(n,a) or cos_gauss
        #[arg(long, allow_hyphen_values = true)]
        function: String,
        #[arg(long)]
        contour: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also run the λ-route and semicircle route and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::DomainMap { kernel, grid, out, lambda_start, lambda_steps } => {
            let req = DomainMapRequest::new(parse_grid(&grid)?, kernel, lambda_start, lambda_steps)?;
            let rows = run_domain_map(&req)?;
            write_domain_map(&rows, &out)
        }
        Command::Functional { kernel, function, contour, out, cross_check } => {
            let report = run_functional(kernel, &function, &contour, cross_check)?;
            write_report(&report, &out)?;
            if report.agrees() {
                Ok(())
            } else {
                Err(CliError::CheckFailed("formula route and verification routes disagree".into()))
            }
        }
        Command::Verify { suite } => {
            let checks = run_verify(suite);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!("verify: {} passed, {failed} failed", checks.len() - failed);
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!("{failed} check(s) failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
