//! Optimizes standard and multi-angle QAOA on the three-qubit Hamiltonian and
//! samples the optimized states.

use latfac::qaoa::{self, AnsatzConfig};

fn main() -> latfac::Result<()> {
    let h = latfac::cli::demo_instance()?.hamiltonian()?;
    for cfg in [
        AnsatzConfig::standard(1),
        AnsatzConfig::standard(2),
        AnsatzConfig::multi_angle(1),
    ] {
        let best = qaoa::optimize_multistart(&h, &cfg.clone().with_seed(7), 20)?;
        let state = qaoa::evolve(&h, &cfg, &best.params)?;
        let hist = qaoa::sample(&state, 1000, 7)?;
        let top: Vec<String> = qaoa::most_frequent(&hist, 3)
            .iter()
            .map(|(x, count)| format!("{x}:{count}"))
            .collect();
        println!(
            "p = {} multi-angle = {:5}  <H> = {:.4}  iterations = {}  top = {}",
            cfg.layers,
            cfg.multi_angle,
            best.expectation,
            best.trace.len(),
            top.join(" ")
        );
    }
    Ok(())
}
