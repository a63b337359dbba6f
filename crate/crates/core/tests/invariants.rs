mod common;

use proptest::prelude::*;
use torusnoise::linalg::{self, C64};
use torusnoise::random::{random_density, random_unitary, rng_from_seed};
use torusnoise::*;

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn solvable_line(n1: i64, n2: i64, n3: i64, n: usize) -> bool {
    let ni = n as i64;
    let g = gcd(gcd(n1.rem_euclid(ni), n2.rem_euclid(ni)), ni);
    (n1.rem_euclid(ni), n2.rem_euclid(ni)) != (0, 0) && n3.rem_euclid(g) == 0
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn channel_strategy() -> impl Strategy<Value = (String, usize, f64)> {
    let spec = prop_oneof![
        Just("dc".to_string()),
        Just("pdc".to_string()),
        Just("adc".to_string()),
        (0u64..50).prop_map(|s| format!("pdc-rand:{s}")),
        (-3i64..4, -3i64..4, 0i64..4).prop_map(|(a, b, c)| format!("pdc-line:{a},{b},{c}")),
    ];
    (spec, 2usize..7, 0.0f64..=1.0)
}

fn build(spec: &str, n: usize, eps: f64) -> Option<KrausChannel> {
    let eps = if spec == "adc" { 0.1 + eps } else { eps };
    spec.parse::<ChannelSpec>().unwrap().build(dim(n), eps).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn line_points_match_enumeration(n1 in -6i64..7, n2 in -6i64..7, n3 in -6i64..7, n in 2usize..13) {
        let got = line_points(LineSpec::new(n1, n2, n3), dim(n));
        if solvable_line(n1, n2, n3, n) {
            let got: Vec<(usize, usize)> = got.unwrap().iter().map(|c| (c.q, c.p)).collect();
            prop_assert_eq!(got, common::brute_force_line(n1, n2, n3, n));
        } else {
            prop_assert!(got.is_err());
        }
    }

    #[test]
    fn commutation_phase_matches_matrices(aq in 0usize..9, ap in 0usize..9, bq in 0usize..9, bp in 0usize..9, n in 2usize..9) {
        let d = dim(n);
        let (a, b) = ((aq % n, ap % n), (bq % n, bp % n));
        let lib = chord_commutation_phase(
            ChordIndex::new(a.0 as i64, a.1 as i64, d),
            ChordIndex::new(b.0 as i64, b.1 as i64, d),
            d,
        );
        prop_assert!((lib - common::conjugation_phase(a, b, d)).norm() < 1e-12);
    }

    #[test]
    fn line_channel_spectrum_matches_chord_oracle(n1 in -3i64..4, n2 in -3i64..4, n3 in 0i64..4, n in 2usize..7, eps in 0.0f64..=1.0) {
        prop_assume!(solvable_line(n1, n2, n3, n));
        let d = dim(n);
        let ch = phase_damping_line(d, NoiseStrength::new(eps).unwrap(), LineSpec::new(n1, n2, n3)).unwrap();
        let actual = spectrum(&to_matrix(&ch), 1e-8).unwrap().eigenvalues;
        let expected = common::chord_channel_spectrum(&common::brute_force_line(n1, n2, n3, n), eps, d);
        prop_assert!(common::multiset_distance(&expected, &actual) < 1e-9);
    }

    #[test]
    fn channels_are_cptp((spec, n, eps) in channel_strategy()) {
        if let Some(ch) = build(&spec, n, eps) {
            let r = ch.validate_cptp().unwrap();
            prop_assert!(r.pass, "{spec} N={n} eps={eps}: {r:?}");
        }
    }

    #[test]
    fn superoperator_agrees_with_kraus_sum((spec, n, eps) in channel_strategy(), seed in any::<u64>()) {
        let Some(ch) = build(&spec, n, eps) else { return Ok(()) };
        let mut rng = rng_from_seed(seed);
        let rho = random_density(dim(n), &mut rng);
        let direct = ch.apply(&rho).unwrap();
        let via = to_matrix(&ch).apply(&rho).unwrap();
        prop_assert!(linalg::max_abs_diff(direct.matrix(), via.matrix()) < 1e-12);
        prop_assert!((direct.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(direct.check().unwrap().is_valid());
    }

    #[test]
    fn kraus_order_does_not_matter((spec, n, eps) in channel_strategy(), seed in any::<u64>()) {
        let Some(ch) = build(&spec, n, eps) else { return Ok(()) };
        let mut order: Vec<usize> = (0..ch.len()).collect();
        let mut rng = rng_from_seed(seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let a = to_matrix(&ch);
        let b = to_matrix(&ch.permuted(&order).unwrap());
        prop_assert!(linalg::max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn composition_preserves_trace_and_unitality((spec, n, eps) in channel_strategy(), seed in any::<u64>()) {
        let Some(ch) = build(&spec, n, eps) else { return Ok(()) };
        let d = dim(n);
        let mut rng = rng_from_seed(seed);
        let u = random_unitary(d, &mut rng);
        let s = composed_matrix(&ch, &u).unwrap();
        let rho = random_density(d, &mut rng);
        let out = s.apply(&rho).unwrap();
        prop_assert!((out.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        // every channel here is unital, and so is the composition
        let mixed = s.apply(&DensityMatrix::maximally_mixed(d)).unwrap();
        prop_assert!(linalg::max_abs_diff(mixed.matrix(), DensityMatrix::maximally_mixed(d).matrix()) < 1e-12);
        prop_assert!(spectrum(&s, 1e-6).unwrap().spectral_radius() < 1.0 + 1e-9);
    }

    #[test]
    fn wigner_sums_to_one_with_position_marginals(n in 2usize..9, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density(dim(n), &mut rng);
        let w = wigner_function(&rho);
        prop_assert!((w.total() - 1.0).abs() < 1e-10);
        for (q, m) in w.position_marginal().iter().enumerate() {
            prop_assert!((m - rho.get(q, q).re).abs() < 1e-10);
        }
    }

    #[test]
    fn circuits_reproduce_channels(n in 1usize..4, eps in 0.0f64..=1.0, seed in 0u64..1000) {
        for which in [CircuitKind::Dc, CircuitKind::Pdc, CircuitKind::Adc] {
            let r = verify_circuit(which, n, eps, seed).unwrap();
            prop_assert!(r.pass, "{which} n={n} eps={eps}: {r:?}");
        }
    }

    #[test]
    fn power_matches_repeated_steps(n in 2usize..6, k in 0u64..20, seed in any::<u64>()) {
        let d = dim(n);
        let mut rng = rng_from_seed(seed);
        let ch = phase_damping(d, NoiseStrength::new(0.3).unwrap(), &DephasingCoefficients::random(d, seed).unwrap()).unwrap();
        let prop = Propagator::new(&ch, &random_unitary(d, &mut rng)).unwrap();
        let v0 = linalg::vec_row_major(random_density(d, &mut rng).matrix());
        let mut v = v0.clone();
        for _ in 0..k {
            v = prop.advance(&v);
        }
        let w = prop.state_at(&v0, k);
        let dev = v.iter().zip(&w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-12);
    }
}

#[test]
fn entropy_crossing_search_agrees_with_linear_scan() {
    let d = dim(6);
    let ch = amplitude_damping(d, 0.3).unwrap();
    let u = cat_propagator(CatParams::ELLIPTIC, d);
    let prop = Propagator::new(&ch, &u).unwrap();
    let v0 = linalg::vec_row_major(coherent_state(PhasePoint::new(0.25, 0.25), d).projector().matrix());
    for threshold in [0.1, 0.5, 1.0, 1.5] {
        let mut v = v0.clone();
        let mut k = 0u64;
        while vec_entropy(&v) <= threshold {
            v = prop.advance(&v);
            k += 1;
        }
        assert_eq!(prop.first_entropy_exceeding(&v0, threshold, 30), Some(k), "threshold {threshold}");
    }
    assert_eq!(prop.first_entropy_exceeding(&v0, (6f64).ln() + 0.1, 10), None);
}

#[test]
fn evolution_is_bit_reproducible() {
    let cfg = EvolutionConfig {
        map: "cat-hyp".parse().unwrap(),
        channel: "pdc-rand:3".parse().unwrap(),
        dim: dim(16),
        eps: 0.25,
        steps: 12,
        initial: "cat:0.2,0.3,0.7,0.6".parse().unwrap(),
    };
    let a = evolve(&cfg).unwrap();
    let b = evolve(&cfg).unwrap();
    for (x, y) in a.states().iter().zip(b.states()) {
        assert_eq!(x.matrix(), y.matrix());
    }
}

#[test]
fn evolution_against_dense_density_matrix_update() {
    let d = dim(8);
    let ch = depolarizing(d, NoiseStrength::new(0.35).unwrap());
    let u = baker_propagator(d).unwrap();
    let rho0 = momentum_state(2, d).unwrap().projector();
    let traj = evolve_with(&Propagator::new(&ch, &u).unwrap(), &rho0, 5);
    let mut rho = rho0.matrix().clone();
    let mixed = linalg::scale(&linalg::identity(8), C64::new(0.35 / 8.0, 0.0));
    for k in 1..=5 {
        let rotated = u.matrix() * &rho * linalg::adjoint(u.matrix());
        rho = linalg::scale(&rotated, C64::new(0.65, 0.0)) + &mixed;
        assert!(linalg::max_abs_diff(&rho, traj.states()[k].matrix()) < 1e-12);
    }
}
