//! Run one suite of identity checks and print the report.

use fockbridge::verify::{emit_report, run_suite, Suite, VerifyConfig};

fn main() -> fockbridge::Result<()> {
    let config = VerifyConfig { suite: Suite::Frft, ..VerifyConfig::default() };
    let report = run_suite(&config)?;
    for c in &report.checks {
        println!("{:<32} {:>10.3e} <= {:.0e}  {}", c.name, c.max_error.unwrap_or(f64::NAN), c.tolerance, if c.passed { "ok" } else { "FAILED" });
    }
    println!("{}", emit_report(&report, false));
    Ok(())
}
