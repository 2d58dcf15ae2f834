//! Parses an experiment file, runs every block and prints the summary table,
//! the same path the `qbc simulate` command takes.

use qbc::cli::{ExperimentResult, RunConfig, SimulationReport, DEFAULT_SEED};
use qbc::montecarlo::run_experiment;

const CONFIG: &str = "\
[link]
g_t = 1
g_r = 1
f_hz = 1e9
r_t = 1
r_r = 1
sigma_q = 1e-4
temperature = 4.8
bandwidth = 1e9
symbol_duration = 1e-2

[experiment sfg]
receiver = sfg
alphabet = bpsk
n_s = 0.01
sweep = 0.5:2:4
trials = 20000

[experiment classical]
receiver = heterodyne
alphabet = bpsk
n_s = 0.01
sweep = 0.5:2:4
trials = 20000
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let run = RunConfig::parse(CONFIG, DEFAULT_SEED)?;
    let mut results = Vec::new();
    for block in run.experiments {
        println!(
            "{}: N_Z = {:.4}, M = {}",
            block.name, block.config.n_z, block.config.m
        );
        let curve = run_experiment(&block.config)?;
        results.push(ExperimentResult {
            name: block.name,
            config: block.config,
            curve,
        });
    }
    print!("{}", SimulationReport::new(results).summary_text());
    Ok(())
}
