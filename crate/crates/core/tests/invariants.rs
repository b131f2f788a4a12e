use ldspec::interpolation::{k_functional, InterpolationPair};
use ldspec::spectral::{
    scale_norm, Atom, CoefficientVector, ScaleIndex, SpectralMeasure, Tail, VectorSpec,
};
use ldspec::SplitMix64;
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::Arc;

fn vector(lambdas: &[f64], weights: &[f64], coeffs: &[(f64, f64)]) -> CoefficientVector<f64> {
    let mut lambda = 1.0;
    let atoms = lambdas
        .iter()
        .zip(weights)
        .map(|(&step, &weight)| {
            lambda += step;
            Atom { lambda, weight }
        })
        .collect();
    let m = Arc::new(SpectralMeasure::discrete(atoms).unwrap());
    let c = coeffs
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    CoefficientVector::discrete(m, c, Tail::Exact).unwrap()
}

fn finite_vector() -> impl Strategy<Value = CoefficientVector<f64>> {
    (1usize..24).prop_flat_map(|n| {
        (
            prop::collection::vec(0.01f64..5.0, n),
            prop::collection::vec(0.1f64..3.0, n),
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n),
        )
            .prop_map(|(l, w, c)| vector(&l, &w, &c))
    })
}

fn norm(v: &CoefficientVector<f64>, s: f64) -> f64 {
    scale_norm(v, ScaleIndex::new(s).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn norms_increase_with_index(v in finite_vector(), s in 0.0f64..3.0, ds in 0.0f64..2.0) {
        prop_assert!(norm(&v, s) <= norm(&v, s + ds) * (1.0 + 1e-12));
    }

    #[test]
    fn index_zero_is_weighted_l2(v in finite_vector()) {
        let direct: f64 = v.nodes().iter().zip(v.coeffs()).map(|(a, c)| a.weight * c.norm_sqr()).sum();
        prop_assert!((norm(&v, 0.0) - direct.sqrt()).abs() <= 1e-12 * direct.sqrt().max(1.0));
    }

    #[test]
    fn multiplying_by_lambda_shifts_the_index(v in finite_vector(), s in 0.0f64..2.0) {
        let lifted = v.map_lambda(|l| l);
        let a = norm(&lifted, s);
        let b = norm(&v, s + 2.0);
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
    }

    #[test]
    fn vector_json_round_trip(v in finite_vector(), s in 0.0f64..2.0) {
        let spec = VectorSpec::from_vector(&v).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: VectorSpec = serde_json::from_str(&text).unwrap();
        let w = back.build(|_| unreachable!()).unwrap();
        prop_assert_eq!(norm(&v, s).to_bits(), norm(&w, s).to_bits());
    }

    #[test]
    fn k_functional_is_monotone(v in finite_vector(), k in 1u32..4, theta in 0.05f64..0.95, t in 1e-4f64..1e4, r in 1.0f64..100.0) {
        let pair = InterpolationPair::new(k, theta).unwrap();
        prop_assert!(k_functional(&v, &pair, t).unwrap() <= k_functional(&v, &pair, t * r).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn splitmix_streams_repeat(seed in any::<u64>()) {
        let mut a = SplitMix64::new(seed);
        let mut b = SplitMix64::new(seed);
        for _ in 0..32 {
            let x = a.next_f64();
            prop_assert!((0.0..1.0).contains(&x));
            prop_assert_eq!(x.to_bits(), b.next_f64().to_bits());
        }
    }
}
