use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use subcover::cli::{run_and_write, RunConfig, RunVariant, Verdict};

/// Cover a polygonal curve by few segments under the Fréchet distance.
#[derive(Parser, Debug)]
#[command(name = "subcover", version)]
struct Args {
    /// Input trajectory, one point per line.
    #[arg(long)]
    input: PathBuf,
    /// Coverage radius.
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = RunVariant::Explicit)]
    variant: RunVariant,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the sample-size constant.
    #[arg(long)]
    gamma: Option<u64>,
    /// JSON report path.
    #[arg(long)]
    out: PathBuf,
    /// SVG plot path (2-dimensional input only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Check full coverage of the input at the guaranteed radius.
    #[arg(long)]
    verify: bool,
    /// Pick limit for the greedy variant.
    #[arg(long)]
    budget: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = std::env::var("SUBCOVER_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cfg = RunConfig {
        input_path: args.input,
        delta: args.delta,
        variant: args.variant,
        seed: args.seed,
        gamma_override: args.gamma,
        output_json_path: args.out,
        output_svg_path: args.svg,
        verify: args.verify,
        greedy_budget: args.budget,
    };
    match run_and_write(&cfg) {
        Ok(report) => {
            if let Some(e) = &report.error {
                eprintln!("subcover: {e}");
            }
            println!(
                "k_found={} centers={} verification={:?}",
                report.k_found,
                report.centers.len(),
                report.verification
            );
            let ok = report.error.is_none() && (!cfg.verify || report.verification == Verdict::Pass);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("subcover: {e}");
            ExitCode::from(2)
        }
    }
}
