//! Random and progressive-edge-growth codes at a short block length: girth
//! and brute-force minimum distance of each construction.
//!
//! `cargo run --release --example build_codes -- [block_length] [seeds]`

use fastldpc::construct::{brute_force_min_distance, expand_parity_check, peg_construct, sample_random_code};
use fastldpc::ensemble::published;

fn median(v: &mut [usize]) -> f64 {
    v.sort_unstable();
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) as f64 / 2.0
    } else {
        v[m] as f64
    }
}

fn main() -> fastldpc::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(48);
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);

    for (name, ddp) in [("E", published::ensemble_e()), ("constrained", published::stability_constrained())] {
        let mut peg = Vec::new();
        let mut random = Vec::new();
        for seed in 0..seeds {
            let p = peg_construct(&ddp, n, seed)?;
            let r = sample_random_code(&ddp, n, seed)?;
            let dp = brute_force_min_distance(&expand_parity_check(&p))?.unwrap_or(0);
            let dr = brute_force_min_distance(&expand_parity_check(&r))?.unwrap_or(0);
            println!(
                "{name:<12} seed {seed:>3}  peg d={dp:>2} girth={:?}  random d={dr:>2} girth={:?}",
                p.girth(),
                r.girth()
            );
            peg.push(dp);
            random.push(dr);
        }
        println!("{name:<12} median d: peg {}  random {}\n", median(&mut peg), median(&mut random));
    }
    Ok(())
}
