//! Runs the quick packaged studies and prints their pass/fail reports.
//!
//! `cargo run --release --example reproduce_studies -- [study ...]`

use fastldpc::cli::reproduce::study;

fn main() -> fastldpc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ids: Vec<&str> =
        if args.is_empty() { vec!["table1-checks", "table2-checks", "fig5-curves"] } else { args.iter().map(String::as_str).collect() };
    for id in ids {
        let report = study(id, 2000, 100_000)?;
        println!("== {id}");
        print!("{}", report.to_csv());
        for (name, body) in &report.artifacts {
            println!("-- {name}: {} rows", body.lines().count().saturating_sub(1));
        }
    }
    Ok(())
}
