//! Exports a table to JSON, reads it back and compares identity reports.

use hypercomplex::document::{from_json, to_json};
use hypercomplex::forge::forge_octonion_pattern;
use hypercomplex::identities::{run_suite, CheckOptions};

fn main() -> hypercomplex::Result<()> {
    let t = forge_octonion_pattern(8)?;
    let text = to_json(&t)?;
    let back = from_json(&text)?;
    let names = ["alternative", "normalization"];
    let opts = CheckOptions::default();
    let same = run_suite(&t, &names, &opts)? == run_suite(&back, &names, &opts)?;
    println!("{} bytes of JSON, identical reports after re-import: {same}", text.len());
    Ok(())
}
