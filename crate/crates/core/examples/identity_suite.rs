//! Identity reports for a Cayley-Dickson table given on the command line
//! (levels, default 4).

use hypercomplex::cayley_dickson::algebra;
use hypercomplex::identities::{run_suite, CheckOptions, SUITE_NAMES};

fn main() -> hypercomplex::Result<()> {
    let levels = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let t = algebra(levels)?;
    let reports = run_suite(&t, SUITE_NAMES, &CheckOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&reports)?);
    Ok(())
}
