//! Bit error rates of codes sampled from Ensembles D to G on the AWGN
//! channel after ten sum-product iterations.
//!
//! `cargo run --release --example simulate_awgn -- [block_length] [max_words]`

use std::sync::Arc;

use fastldpc::construct::sample_random_code;
use fastldpc::ensemble::published;
use fastldpc::exit::ChannelParameter;
use fastldpc::sim::{monte_carlo, SimulationTask};

fn main() -> fastldpc::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let max_words: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let grid = [1.0, 1.5, 2.0, 2.5];

    println!("{:<6}{}", "code", grid.map(|g| format!("{g:>12.1} dB")).join(""));
    for name in ["D", "E", "F", "G"] {
        let ddp = published::by_name(name).expect("published ensemble");
        let graph = Arc::new(sample_random_code(&ddp, n, 1)?);
        let params = grid.iter().map(|&g| ChannelParameter::awgn(g, graph.design_rate())).collect::<Result<_, _>>()?;
        let mut task = SimulationTask::new(graph, params, 10, 7);
        task.max_words = max_words;
        let curve = monte_carlo(&task)?;
        let cells: Vec<String> = curve.points.iter().map(|p| format!("{:>15.3e}", p.ber())).collect();
        println!("{name:<6}{}", cells.join(""));
    }
    Ok(())
}
