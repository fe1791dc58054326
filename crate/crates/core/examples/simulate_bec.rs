//! Bit error rates of codes sampled from Ensembles A, B and C on the erasure
//! channel, at 10 and 200 decoding iterations.
//!
//! `cargo run --release --example simulate_bec -- [block_length] [max_words]`

use std::sync::Arc;

use fastldpc::construct::sample_random_code;
use fastldpc::ensemble::published;
use fastldpc::exit::ChannelParameter;
use fastldpc::sim::{monte_carlo, SimulationTask};

fn main() -> fastldpc::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4000);
    let max_words: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    for (i_max, eps) in [(10, 0.30), (200, 0.45)] {
        println!("i_max = {i_max}, eps = {eps}");
        for name in ["A", "B", "C"] {
            let ddp = published::by_name(name).expect("published ensemble");
            let graph = Arc::new(sample_random_code(&ddp, n, 1)?);
            let mut task = SimulationTask::new(graph, vec![ChannelParameter::bec(eps)?], i_max, 7);
            task.max_words = max_words;
            let start = std::time::Instant::now();
            let curve = monte_carlo(&task)?;
            let p = &curve.points[0];
            println!(
                "  code {name}: BER {:.3e}  CER {:.3e}  words {:>8}  mean iterations {:.1}  ({:.1?})",
                p.ber(),
                p.cer(),
                p.words,
                p.mean_iterations(),
                start.elapsed()
            );
        }
    }
    Ok(())
}
