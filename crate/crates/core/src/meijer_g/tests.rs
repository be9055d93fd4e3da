use super::*;
use crate::special::{bessel_k, gamma};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn exp_instance(z: f64) -> MeijerGParams {
    MeijerGParams::new(vec![], vec![], vec![0.0], vec![], z).unwrap()
}

fn bessel_instance(a: f64, b: f64, z: f64) -> MeijerGParams {
    MeijerGParams::new(vec![], vec![], vec![a, b], vec![], z).unwrap()
}

fn bessel_reference(a: f64, b: f64, z: f64) -> f64 {
    2.0 * z.powf(0.5 * (a + b)) * bessel_k(a - b, 2.0 * z.sqrt()).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn delta_blocks() {
    assert_eq!(delta_block(1, 0.7), vec![0.7]);
    assert_eq!(delta_block(2, 0.0), vec![0.0, 0.5]);
    let d = delta_block(3, 1.0);
    assert!((d[0] - 1.0 / 3.0).abs() < 1e-16 && (d[1] - 2.0 / 3.0).abs() < 1e-16 && d[2] == 1.0);
}

#[test]
fn exponential_reduction() {
    let g = meijer_g(&exp_instance(1.0), &ContourSpec::default()).unwrap();
    assert!(rel(g.value, (-1.0f64).exp()) < 1e-12);
    for z in log_grid(1e-3, 10.0, 25) {
        for spec in [ContourSpec::default(), ContourSpec::vertical()] {
            let g = meijer_g(&exp_instance(z), &spec).unwrap();
            assert!(rel(g.value, (-z).exp()) < 1e-10, "z={z} {spec:?}: {}", g.value);
        }
    }
}

#[test]
fn bessel_reduction() {
    // 2 K0(2), 50-digit reference.
    let g = meijer_g(&bessel_instance(0.0, 0.0, 1.0), &ContourSpec::default()).unwrap();
    assert!(rel(g.value, 0.227_787_745_499_066_871_305_439_149_864_96) < 1e-12);
    for (a, b) in [(0.0, 0.0), (0.3, -0.2), (1.5, 0.5), (2.0, 0.25)] {
        for z in log_grid(1e-3, 10.0, 25) {
            let g = meijer_g(&bessel_instance(a, b, z), &ContourSpec::default()).unwrap();
            let want = bessel_reference(a, b, z);
            assert!(rel(g.value, want) < 1e-10, "a={a} b={b} z={z}: {} vs {want}", g.value);
        }
    }
}

#[test]
fn high_precision_references() {
    // 50-digit references.
    let p = MeijerGParams::new(vec![0.3], vec![], vec![0.0, 0.5], vec![], 2.7).unwrap();
    assert!(rel(meijer_g(&p, &ContourSpec::default()).unwrap().value, 0.476_925_048_842_407_964_43) < 1e-11);
    let p = MeijerGParams::new(vec![0.2, -0.4], vec![1.5], vec![0.0, 0.5, 0.9], vec![], 0.8).unwrap();
    assert!(rel(meijer_g(&p, &ContourSpec::default()).unwrap().value, 0.573_205_823_014_245_165_88) < 1e-11);
    let p = MeijerGParams::new(vec![1.0, 0.5], vec![2.6], vec![3.6, 1.6, 3.2], vec![], 1.5e4).unwrap();
    assert!(rel(meijer_g(&p, &ContourSpec::default()).unwrap().value, 9.598_705_877_125_390_907_4) < 1e-10);
}

#[test]
fn extreme_arguments_use_residues() {
    // Compared against the instance's own small- and large-z expansions.
    let base = MeijerGParams::new(vec![-1.7], vec![], vec![0.0, 0.5], vec![], 1.0).unwrap();
    for z in [1e-12, 1e-8, 1e-5] {
        let p = base.with_z(z);
        let g = meijer_g(&p, &ContourSpec::default()).unwrap();
        let lead = evaluate_terms(&leading_terms(&p).unwrap(), z);
        assert!(rel(g.value, lead) < 10.0 * z, "z={z}: {} vs {lead}", g.value);
        assert!(g.error <= 1e-10 * g.value.abs());
    }
    for z in [1e6, 1e9, 1e12] {
        let p = base.with_z(z);
        let g = meijer_g(&p, &ContourSpec::default()).unwrap();
        let lead = evaluate_terms(&leading_terms_large(&p).unwrap(), z);
        assert!(rel(g.value, lead) < 100.0 / z, "z={z}: {} vs {lead}", g.value);
    }
}

#[test]
fn leading_term_of_exponential() {
    let t = leading_terms(&exp_instance(1.0)).unwrap();
    assert_eq!(t.len(), 1);
    assert!((t[0].coefficient - 1.0).abs() < 1e-15 && t[0].exponent == 0.0);
    assert!(matches!(leading_terms(&bessel_instance(0.0, 1.0, 1.0)), Err(Error::Degenerate(_))));
    let large = leading_terms_large(&MeijerGParams::new(vec![0.3], vec![], vec![0.0], vec![], 1.0).unwrap()).unwrap();
    // G^{1,1}_{1,1}[z | 0.3; 0] = Γ(0.7) (1+z)^{-0.7}
    assert!(rel(large[0].coefficient, gamma(0.7)) < 1e-14 && (large[0].exponent + 0.7).abs() < 1e-15);
}

#[test]
fn vertical_and_shifted_paths_agree() {
    let p = MeijerGParams::new(vec![0.2, -0.4], vec![1.5], vec![0.0, 0.5, 0.9], vec![], 0.8).unwrap();
    let a = meijer_g(&p, &ContourSpec::vertical()).unwrap();
    let b = meijer_g(&p, &ContourSpec::default()).unwrap();
    assert!(rel(a.value, b.value) < 1e-12);
    assert!(a.imag_residue.abs() < 1e-12 * a.value.abs());
}

#[test]
fn halving_is_within_error_estimate() {
    for z in [1e-6, 0.01, 1.0, 30.0, 1e5] {
        let p = MeijerGParams::new(vec![-2.3], vec![], vec![0.0, 0.5], vec![], z).unwrap();
        let h = halving_check(&p, &ContourSpec::default(), 0.0).unwrap();
        assert!(h.passed, "z={z}: {h:?}");
    }
}

#[test]
fn invalid_instances() {
    let p = MeijerGParams::new(vec![], vec![0.5], vec![0.0], vec![], 1.0).unwrap();
    assert!(matches!(meijer_g(&p, &ContourSpec::default()), Err(Error::Convergence(_))));
    let p = MeijerGParams::new(vec![1.5], vec![], vec![0.0], vec![], 1.0).unwrap();
    assert!(matches!(meijer_g(&p, &ContourSpec::default()), Err(Error::Contour(_))));
    let p = exp_instance(1.0);
    let spec = ContourSpec { abscissa: Some(-0.5), ..ContourSpec::default() };
    assert!(matches!(meijer_g(&p, &spec), Err(Error::Contour(_))));
    assert!(MeijerGParams::new(vec![], vec![], vec![0.0], vec![], -1.0).is_err());
    let spec = ContourSpec { max_nodes: 10, ..ContourSpec::default() };
    assert!(meijer_g(&exp_instance(1.0), &spec).is_err());
}

#[test]
fn mellin_builder_matches_direct_instance() {
    // 1/(2πi) ∫ Γ(u) Γ(1/2 + u) Γ(2 − u) x^{−u} du is G^{2,1}_{1,2}[x | −1; 0, 1/2].
    let mb = MellinBarnes {
        factors: vec![
            GammaFactor::numerator(0.0, 1, 1),
            GammaFactor::numerator(0.5, 1, 1),
            GammaFactor::numerator(2.0, -1, 1),
        ],
        ln_x: 0.4f64.ln(),
        ln_prefactor: 0.0,
    };
    let direct = MeijerGParams::new(vec![-1.0], vec![], vec![0.0, 0.5], vec![], 0.4).unwrap();
    let a = mb.evaluate(&ContourSpec::default()).unwrap().value;
    let b = meijer_g(&direct, &ContourSpec::default()).unwrap().value;
    assert!(rel(a, b) < 1e-12);

    // Γ(2u) = 2^{2u−1} Γ(u) Γ(u + 1/2) / √π: same integral written with slope 2.
    let dup = MellinBarnes {
        factors: vec![GammaFactor::numerator(0.0, 2, 1), GammaFactor::numerator(2.0, -1, 1)],
        ln_x: (4.0f64 * 0.4).ln(),
        ln_prefactor: 0.5 * std::f64::consts::PI.ln() + 2f64.ln(),
    };
    assert!(rel(dup.evaluate(&ContourSpec::default()).unwrap().value, b) < 1e-12);

    // Slope 1/2: Γ(u/2) with u = 2v is 2·Γ(v), i.e. 2·e^{−x²}.
    let half = MellinBarnes { factors: vec![GammaFactor::numerator(0.0, 1, 2)], ln_x: 0.7f64.ln(), ln_prefactor: 0.0 };
    assert!(rel(half.evaluate(&ContourSpec::default()).unwrap().value, 2.0 * (-0.49f64).exp()) < 1e-12);
}

#[test]
fn mellin_builder_cancels_identical_factors() {
    // Γ(1.3 − u)/Γ(2.3 − u) with slope 1/2 splits into pairs, one of which cancels.
    let mb = MellinBarnes {
        factors: vec![
            GammaFactor::numerator(0.0, 1, 1),
            GammaFactor::numerator(1.3, -2, 1),
            GammaFactor::denominator(2.3, -2, 1),
        ],
        ln_x: 0.3f64.ln(),
        ln_prefactor: 0.0,
    };
    let (p, _) = mb.to_meijer().unwrap();
    assert_eq!((p.a_front.len(), p.b_back.len()), (1, 1));
    // Γ(u)/(1.3 − 2u) closes left onto Σ (−x)^k/(k!(1.3 + 2k)).
    let x: f64 = 0.3;
    let want: f64 = (0..40).map(|k| (-x).powi(k) / (gamma(k as f64 + 1.0) * (1.3 + 2.0 * k as f64))).sum();
    assert!(rel(mb.evaluate(&ContourSpec::default()).unwrap().value, want) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn bessel_reduction_random(a in -1.5f64..2.5, b in -1.5f64..2.5, lz in -6.9f64..2.3) {
        let z = lz.exp();
        let g = meijer_g(&bessel_instance(a, b, z), &ContourSpec::default()).unwrap();
        let want = bessel_reference(a, b, z);
        prop_assert!(rel(g.value, want) < 1e-9, "{} vs {}", g.value, want);
    }
}
