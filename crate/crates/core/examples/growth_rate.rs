//! Growth rate of the weight distribution for the published ensembles, and a
//! finite-length cross-check of the (3,6)-regular exponent.

use fastldpc::ensemble::published;
use fastldpc::growth::{alpha_star, brute_force_average_enumerator, good_growth, growth_rate};

fn main() -> fastldpc::Result<()> {
    println!("{:<8} {:>10} {:>6} {:>14} {:>10}", "ensemble", "functional", "good", "G(1e-3)", "alpha*");
    for (name, ddp) in published::all() {
        let star = alpha_star(&ddp)?.map_or("-".to_string(), |a| format!("{a:.6}"));
        println!(
            "{:<8} {:>10.6} {:>6} {:>14.6e} {:>10}",
            name,
            ddp.growth_functional(),
            good_growth(&ddp),
            growth_rate(&ddp, 1e-3)?,
            star
        );
    }

    let regular = published::regular(3, 6);
    println!("\n(3,6)-regular: (1/N) ln E[A_(alpha N)] against G(alpha)");
    for alpha in [0.1, 0.2, 0.3] {
        let mut row = format!("alpha {alpha:.1}:");
        let mut points = Vec::new();
        for n in [20usize, 40, 60] {
            let e = brute_force_average_enumerator(&regular, n)?;
            let w = (alpha * n as f64).round() as usize;
            let g = e[w].ln() / n as f64;
            points.push((1.0 / n as f64, g));
            row.push_str(&format!("  N={n}: {g:.5}"));
        }
        let (slope, intercept) = linear_fit(&points);
        let _ = slope;
        println!("{row}  extrapolated {intercept:.5}  G = {:.5}", growth_rate(&regular, alpha)?);
    }
    Ok(())
}

fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
