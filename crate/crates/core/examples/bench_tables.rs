//! A small benchmark table for local search, written as CSV to stdout, plus
//! the exponential fit of lattices tested against bit length.

use latfac::analysis;
use latfac::cli::{self, BenchSpec};
use latfac::heuristics::Heuristic;
use latfac::solver::FactorConfig;

fn main() -> latfac::Result<()> {
    let spec = BenchSpec {
        bits: vec![15, 20, 25, 30],
        trials: 5,
        heuristics: vec![Heuristic::LocalSearch { k: 4 }],
        config: FactorConfig {
            seed: 1,
            budget_lattices: 10_000,
            ..FactorConfig::default()
        },
    };
    for table in cli::run_bench(&spec)? {
        println!("# {}", table.heuristic);
        print!("{}", table.to_csv()?);
        let fit = analysis::log_linear_fit(&analysis::lattice_scaling(&table.records))?;
        println!(
            "# lattices ~ exp({:.3} + {:.3} bits), r^2 = {:.3}",
            fit.intercept, fit.slope, fit.r_squared
        );
    }
    Ok(())
}
