//! The three-qubit walkthrough for n = 1961, checked against its known values.

fn main() -> latfac::Result<()> {
    let report = latfac::cli::demo3q(true, 0)?;
    print!("{}", report.text);
    if report.mismatches.is_empty() {
        println!("all golden values match");
    } else {
        for m in &report.mismatches {
            println!("mismatch: {m}");
        }
    }
    Ok(())
}
