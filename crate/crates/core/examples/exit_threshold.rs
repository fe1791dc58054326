//! Iteration-constrained thresholds of the published ensembles and the
//! decoding trajectory of Ensemble C near its threshold.
//!
//! `cargo run --release --example exit_threshold`

use fastldpc::ensemble::published;
use fastldpc::exit::{
    iteration_constrained_threshold, run_trajectory, ChannelKind, ChannelParameter, ThresholdQuery,
};

fn main() -> fastldpc::Result<()> {
    println!("erasure channel, epsilon*:");
    for (name, ddp) in published::all().into_iter().take(3) {
        let row: Vec<String> = [10, 20, 30, 200]
            .iter()
            .map(|&i_max| {
                let q = ThresholdQuery::new(ddp.clone(), ChannelKind::Bec, i_max);
                iteration_constrained_threshold(&q).map(|p| format!("i_max {i_max:>3}: {:.6}", p.value()))
            })
            .collect::<fastldpc::Result<_>>()?;
        println!("  {name}  {}", row.join("  "));
    }

    println!("AWGN channel, Eb/N0* (dB):");
    for (name, ddp) in published::all().into_iter().skip(3) {
        let row: Vec<String> = [10, 20, 30]
            .iter()
            .map(|&i_max| {
                let q = ThresholdQuery::new(ddp.clone(), ChannelKind::Awgn, i_max);
                iteration_constrained_threshold(&q).map(|p| format!("i_max {i_max:>3}: {:.4}", p.value()))
            })
            .collect::<fastldpc::Result<_>>()?;
        println!("  {name}  {}", row.join("  "));
    }

    let traj = run_trajectory(&published::ensemble_c(), &ChannelParameter::bec(0.485)?, 200)?;
    println!("\nEnsemble C at epsilon 0.485, every 25th iteration:");
    for (i, r) in traj.records.iter().enumerate().step_by(25) {
        println!("  iter {:>3}  i_ev {:.6}", i + 1, r.i_ev);
    }
    println!("  final i_ev {:.6}", traj.final_i_ev().unwrap_or(0.0));
    Ok(())
}
