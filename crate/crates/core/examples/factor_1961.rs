//! End-to-end factorization of 1961 with exact rounding on three-dimensional
//! lattices and a 15-prime factor base.

use latfac::heuristics::Heuristic;
use latfac::solver::{self, FactorConfig};
use num_bigint::BigInt;

fn main() -> latfac::Result<()> {
    let cfg = FactorConfig {
        m: Some(3),
        c: Some(1.5),
        big_m: Some(15),
        ..FactorConfig::with_heuristic(Heuristic::ExactMin)
    };
    let report = solver::factor(&BigInt::from(1961), &cfg)?;
    let (p, q) = report.factors.expect("factor() only returns on success");
    println!("1961 = {p} x {q} after {} lattices", report.record.lattices_tested);
    for r in &report.relations {
        println!("  u = {:>6}  v = {:>3}  u - vn = {:>6}", r.u, r.v, r.s);
    }
    if let Some(c) = &report.congruence {
        println!("{}^2 = {}^2 (mod 1961)", c.x, c.y);
    }
    Ok(())
}
