//! Optimizes a rate-1/2 ensemble with SPC and Hamming check nodes for the
//! erasure channel under a ten-iteration budget.
//!
//! `cargo run --release --example design_bec -- [generations] [seed]`

use fastldpc::component::CodeKind;
use fastldpc::de::{evolve, DeConfig};
use fastldpc::exit::ChannelKind;

fn main() -> fastldpc::Result<()> {
    let mut args = std::env::args().skip(1);
    let generations = args.next().and_then(|s| s.parse().ok()).unwrap_or(300);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let mut config = DeConfig::new(
        ChannelKind::Bec,
        0.5,
        10,
        (2..=30).collect(),
        vec![CodeKind::Spc(7), CodeKind::Hamming(3), CodeKind::Hamming(4)],
    );
    config.max_generations = generations;
    config.seed = seed;

    let start = std::time::Instant::now();
    let outcome = evolve(&config, &mut |r| {
        if r.generation % 10 == 0 {
            println!(
                "gen {:>4}  best eps {:.6}  accepted {:>3}  rejected {:>3}  ({:.1?})",
                r.generation, r.best, r.accepted_trials, r.rejected_members, start.elapsed()
            );
        }
    })?;

    println!("threshold eps* = {:.6}", outcome.threshold);
    println!("design rate    = {:.6}", outcome.ddp.design_rate());
    println!("{}", outcome.ddp.to_json());
    Ok(())
}
