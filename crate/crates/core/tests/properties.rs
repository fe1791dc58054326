mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fastldpc::component::CodeKind;
use fastldpc::construct::{peg_construct, sample_random_code};
use fastldpc::ensemble::{published, CheckDistribution, DegreeDistributionPair, VariableDistribution};
use fastldpc::exit::{ChannelParameter, ExitCurves, Evaluation, OutputMeasure};
use fastldpc::sim::decode_bec;

fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, len).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

fn spc_ddp(degrees: &[usize], lam: &[f64], checks: &[usize], rho: &[f64]) -> DegreeDistributionPair {
    DegreeDistributionPair::new(
        VariableDistribution::new(degrees.iter().copied().zip(lam.iter().copied())).unwrap(),
        CheckDistribution::new(checks.iter().map(|&s| CodeKind::Spc(s)).zip(rho.iter().copied())).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rate_invariant_under_relabel_and_split(lam in weights(3), rho in weights(2), split in 0.1f64..0.9) {
        let a = spc_ddp(&[2, 3, 8], &lam, &[6, 9], &rho);
        let b = spc_ddp(&[8, 2, 3], &[lam[2], lam[0], lam[1]], &[9, 6], &[rho[1], rho[0]]);
        let c = spc_ddp(&[2, 3, 8], &lam, &[6, 6, 9], &[rho[0] * split, rho[0] * (1.0 - split), rho[1]]);
        prop_assert!((a.design_rate() - b.design_rate()).abs() < 1e-12);
        prop_assert!((a.design_rate() - c.design_rate()).abs() < 1e-12);
    }

    #[test]
    fn stability_product_is_fixed_point_slope(lam in weights(3), rho in weights(2)) {
        let ddp = spc_ddp(&[2, 3, 5], &lam, &[5, 8], &rho);
        let rho_poly = |x: f64| rho[0] * x.powi(4) + rho[1] * x.powi(7);
        let f = |x: f64| ddp_lambda(&lam, 1.0 - rho_poly(1.0 - x));
        let h = 1e-6;
        let slope = (f(h) - f(0.0)) / h;
        prop_assert!((slope - ddp.stability_product().unwrap()).abs() < 1e-4);
    }

    #[test]
    fn bec_decoding_is_monotone_in_erasures(seed in any::<u64>(), eps in 0.2f64..0.5) {
        let graph = sample_random_code(&published::ensemble_b(), 200, seed % 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small: Vec<Option<bool>> = (0..200).map(|_| if rng.gen_bool(eps) { None } else { Some(false) }).collect();
        let large: Vec<Option<bool>> = small.iter().map(|b| if rng.gen_bool(0.1) { None } else { *b }).collect();
        let a = decode_bec(&graph, &small, 500);
        let b = decode_bec(&graph, &large, 500);
        for (x, y) in a.word.iter().zip(&b.word) {
            prop_assert!(!(x.is_none() && y.is_some()), "a larger erasure set resolved more bits");
        }
    }

    #[test]
    fn constructions_are_deterministic(seed in 0u64..1000) {
        let ddp = published::ensemble_c();
        prop_assert_eq!(sample_random_code(&ddp, 300, seed).unwrap().to_json(), sample_random_code(&ddp, 300, seed).unwrap().to_json());
        prop_assert_eq!(peg_construct(&ddp, 70, seed).unwrap().to_json(), peg_construct(&ddp, 70, seed).unwrap().to_json());
    }

    #[test]
    fn bec_trajectory_is_nonincreasing_in_epsilon(e1 in 0.05f64..0.6, e2 in 0.05f64..0.6, i_max in 1usize..40) {
        let curves = ExitCurves::new(&published::ensemble_a(), Evaluation::Exact);
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let f_lo = curves.final_output(&ChannelParameter::bec(lo).unwrap(), i_max, OutputMeasure::LastVnUpdate).unwrap();
        let f_hi = curves.final_output(&ChannelParameter::bec(hi).unwrap(), i_max, OutputMeasure::LastVnUpdate).unwrap();
        prop_assert!(f_hi <= f_lo + 1e-12);
    }
}

fn ddp_lambda(lam: &[f64], x: f64) -> f64 {
    lam[0] * x + lam[1] * x.powi(2) + lam[2] * x.powi(4)
}
