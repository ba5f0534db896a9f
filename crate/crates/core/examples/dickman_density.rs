//! Dickman's rho and the smooth-number densities that drive relation yield.

use latfac::analysis::{self, DickmanTable, MRule, DEFAULT_STEP};

fn main() -> latfac::Result<()> {
    let table = DickmanTable::new(8.0, DEFAULT_STEP)?;
    for a in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0] {
        println!("rho({a}) = {:.10e}", table.rho(a)?);
    }
    println!("density of p_m-smooth numbers below 2^bits:");
    for (bits, d) in analysis::density_curve(15..=60, MRule::Default)?.into_iter().step_by(5) {
        let m = MRule::Default.m_for_bits(bits as u32)?;
        println!("  {bits:>2} bits, m = {m:>2}: {d:.3e}");
    }
    Ok(())
}
