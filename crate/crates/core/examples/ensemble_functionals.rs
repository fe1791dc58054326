//! Design rate, node counts and stability functionals of the published
//! ensembles. With a directory argument, also writes each ensemble as a DDP
//! JSON file.
//!
//! `cargo run --example ensemble_functionals -- [out_dir]`

use std::path::PathBuf;

use fastldpc::ensemble::published;

fn main() -> fastldpc::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from);
    let mut ensembles: Vec<(String, _)> = published::all().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    ensembles.push(("constrained".into(), published::stability_constrained()));

    println!("{:<12} {:>8} {:>12} {:>12} {:>10}", "ensemble", "rate", "functional", "checks@1e4", "edges@1e4");
    for (name, ddp) in &ensembles {
        let counts = ddp.node_counts(10_000)?;
        println!(
            "{:<12} {:>8.6} {:>12.6} {:>12} {:>10}",
            name,
            ddp.design_rate(),
            ddp.growth_functional(),
            counts.total_checks(),
            counts.edges()
        );
        if let Some(dir) = &out_dir {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("ensemble_{}.json", name.to_lowercase())), ddp.to_json())?;
        }
    }
    Ok(())
}
