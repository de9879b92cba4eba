//! Property tests over the randomized invariants.

use proptest::prelude::*;

use ftre::cost;
use ftre::factorize::{self, FactorizedHamiltonian, TwoElectronTensor};
use ftre::overhead::{self, FtParams, NoiseRegime};
use ftre::pauli::{PauliKind, PauliString};
use ftre::ppm;

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(0u8..4, n), proptest::bool::ANY).prop_map(move |(codes, neg)| {
        let kinds: Vec<PauliKind> = codes
            .iter()
            .map(|c| match c {
                0 => PauliKind::I,
                1 => PauliKind::X,
                2 => PauliKind::Y,
                _ => PauliKind::Z,
            })
            .collect();
        let mut p = PauliString::from_kinds(&kinds);
        if neg {
            p = p.negated();
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_multiplication_is_associative(
        a in pauli_strategy(5),
        b in pauli_strategy(5),
        c in pauli_strategy(5),
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pauli_commutation_is_symmetric_and_matches_products(
        a in pauli_strategy(4),
        b in pauli_strategy(4),
    ) {
        prop_assert_eq!(a.commutes_with(&b), b.commutes_with(&a));
        // ab = +-ba with the sign given by the symplectic product.
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        if a.commutes_with(&b) {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, ba.negated());
        }
    }

    #[test]
    fn qrom_optimizer_matches_exhaustive_scan(k in 1u64..3000, b in 1u64..200) {
        let fast = cost::optimize_qrom_lambda(k, b);
        let mut best = (u64::MAX, 0u64);
        for lam in 1..=k {
            let c = cost::qrom_tcount(k, b, lam);
            if c < best.0 {
                best = (c, lam);
            }
        }
        prop_assert_eq!(fast, best.1);
        // Depth never exceeds four T per lookup Toffoli.
        prop_assert!(cost::qrom_tdepth(k, fast) <= 4 * cost::qrom_tcount(k, b, fast));
    }

    #[test]
    fn scheduler_layers_are_valid(paulis in proptest::collection::vec(pauli_strategy(4), 1..20)) {
        let filtered: Vec<PauliString> =
            paulis.into_iter().filter(|p| !p.is_identity()).collect();
        prop_assume!(!filtered.is_empty());
        let schedule = ppm::schedule_layers(&filtered, 4, 8);
        let mut seen = vec![false; filtered.len()];
        for layer in &schedule.layers {
            prop_assert!(layer.len() <= 4);
            for (i, &a) in layer.iter().enumerate() {
                prop_assert!(!seen[a]);
                seen[a] = true;
                for &b in &layer[i + 1..] {
                    prop_assert!(filtered[a].commutes_with(&filtered[b]));
                }
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn footprint_and_time_are_monotone(
        n_t in 1_000_000u64..1_000_000_000_000,
        n_l in 100u64..100_000,
        bump in 2u64..10,
    ) {
        let regime = NoiseRegime::moderate();
        let params = FtParams::default();
        let base = overhead::ft_report(n_t, n_l, &regime, &params).unwrap();
        let more_t = overhead::ft_report(n_t * bump, n_l, &regime, &params).unwrap();
        let more_l = overhead::ft_report(n_t, n_l * bump, &regime, &params).unwrap();
        let tighter = overhead::ft_report(
            n_t,
            n_l,
            &regime,
            &FtParams { eps_total: params.eps_total / bump as f64, ..params },
        )
        .unwrap();
        prop_assert!(more_t.t_algo_seconds > base.t_algo_seconds);
        prop_assert!(more_t.n_rsg >= base.n_rsg);
        prop_assert!(more_l.n_rsg > base.n_rsg);
        prop_assert!(tighter.n_rsg >= base.n_rsg);
        prop_assert!(tighter.t_algo_seconds >= base.t_algo_seconds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factorizer_roundtrip_and_truncation_prefix(
        n in 2usize..6,
        seeds in proptest::collection::vec(proptest::num::f64::NORMAL, 3 * 36),
    ) {
        // Sum of symmetric outer squares: positive semidefinite by
        // construction, every required symmetry holds.
        let mut values = vec![0.0; n * n * n * n];
        for t in 0..3 {
            let flat = &seeds[t * 36..t * 36 + n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let gij = 0.5 * (flat[i * n + j] + flat[j * n + i]).clamp(-3.0, 3.0);
                            let gkl = 0.5 * (flat[k * n + l] + flat[l * n + k]).clamp(-3.0, 3.0);
                            values[((i * n + j) * n + k) * n + l] += gij * gkl;
                        }
                    }
                }
            }
        }
        let h = TwoElectronTensor::new(n, values).unwrap();
        let f = FactorizedHamiltonian::build(&h).unwrap();
        let (max_abs, _) = factorize::reconstruction_error(&f, &h).unwrap();
        prop_assert!(max_abs < 1e-8, "roundtrip error {max_abs}");

        // Larger budgets remove supersets, never exceed the budget, and the
        // actual error stays under the reported bound.
        let mut last_m = usize::MAX;
        let mut last_bound = -1.0f64;
        for eps in [1e-6, 1e-3, 1e-1, 10.0] {
            let t = factorize::truncate(&f, eps).unwrap();
            prop_assert!(t.rank_m() <= last_m);
            prop_assert!(t.truncation_error_bound() >= last_bound);
            prop_assert!(t.truncation_error_bound() <= eps + 1e-12);
            let (_, fro) = factorize::reconstruction_error(&t, &h).unwrap();
            prop_assert!(fro <= t.truncation_error_bound() + 1e-9);
            last_m = t.rank_m();
            last_bound = t.truncation_error_bound();
        }
    }
}
