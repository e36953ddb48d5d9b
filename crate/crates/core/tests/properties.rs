use anderson_levels::eigen::{banded_inertia, count_le, sturm_count, tridiagonalize};
use anderson_levels::free::{all_eigenvalues, enumerate_window};
use anderson_levels::measure::{free_measure, integrate, TestFunction};
use anderson_levels::model::{
    assemble_hamiltonian, site_key, BandedSymmetricMatrix, Cube, DisorderLaw, PotentialProfile, SiteField,
};
use proptest::prelude::*;

fn banded(n: usize, bw: usize, entries: &[f64]) -> BandedSymmetricMatrix {
    let mut m = BandedSymmetricMatrix::zeros(n, bw);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i.saturating_sub(bw)..=i {
            m.set(i, j, *it.next().unwrap());
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inertia_routes_agree(
        n in 2usize..60,
        bw in 1usize..8,
        entries in prop::collection::vec(-1.0f64..1.0, 1..200),
        mu in -4.0f64..4.0,
    ) {
        let m = banded(n, bw.min(n - 1), &entries);
        let t = tridiagonalize(&m).unwrap();
        prop_assert_eq!(banded_inertia(&m, mu).unwrap().count, sturm_count(&t, mu).count);
    }

    #[test]
    fn sturm_count_is_monotone(
        n in 2usize..40,
        entries in prop::collection::vec(-2.0f64..2.0, 1..100),
        a in -6.0f64..6.0,
        gap in 0.0f64..3.0,
    ) {
        let t = tridiagonalize(&banded(n, 2.min(n - 1), &entries)).unwrap();
        prop_assert!(count_le(&t, a) <= count_le(&t, a + gap));
        prop_assert_eq!(count_le(&t, 1e9), n);
        prop_assert_eq!(count_le(&t, -1e9), 0);
    }

    #[test]
    fn free_spectrum_is_symmetric(d in 1usize..4, l in 0usize..5) {
        let mut v = all_eigenvalues(d, l, 100_000).unwrap();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        for i in 0..n {
            prop_assert!((v[i] + v[n - 1 - i]).abs() < 1e-12);
        }
        let trace: f64 = v.iter().sum();
        prop_assert!(trace.abs() < 1e-9);
    }

    #[test]
    fn window_mass_matches_count(d in 1usize..4, l in 1usize..12, e in -5.0f64..5.0, k in 0.5f64..8.0) {
        let e = e.clamp(-2.0 * d as f64, 2.0 * d as f64);
        let list = enumerate_window(d, l, e, k, 10_000_000).unwrap();
        let m = free_measure(d, l, e, k).unwrap();
        let side = (2 * l + 1) as f64;
        let expected = list.total_multiplicity() as f64 * side.powi(1 - d as i32);
        prop_assert!((m.total_mass() - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn integral_is_linear_in_amplitude(l in 2usize..30, e in -2.5f64..2.5, amp in 0.0f64..5.0) {
        let f = TestFunction::bump(0.0, 2.0).unwrap();
        let g = f.with_amplitude(amp).unwrap();
        let m = free_measure(2, l, e, 2.0).unwrap();
        let (a, b) = (integrate(&m, &f), integrate(&m, &g));
        prop_assert!((b - amp * a).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    #[test]
    fn site_keys_depend_on_every_coordinate(seed in any::<u64>(), x in -50i64..50, y in -50i64..50) {
        prop_assert_eq!(site_key(seed, &[x, y]), site_key(seed, &[x, y]));
        prop_assert_ne!(site_key(seed, &[x, y]), site_key(seed, &[x, y + 1]));
        prop_assert_ne!(site_key(seed, &[x, y]), site_key(seed.wrapping_add(1), &[x, y]));
    }

    #[test]
    fn field_is_reproducible_and_bounded(seed in any::<u64>(), l in 1usize..6, w in 0.0f64..3.0) {
        let cube = Cube::new(2, l).unwrap();
        let profile = PotentialProfile::Constant { eta: 1.0 };
        let law = DisorderLaw::UniformSym { half_width: w };
        let a = SiteField::sample(cube, &profile, &law, seed);
        let b = SiteField::sample(cube, &profile, &law, seed);
        prop_assert_eq!(a.potential(), b.potential());
        prop_assert!(a.potential().iter().all(|v| v.abs() <= w));
        let h = assemble_hamiltonian(&cube, Some(&a), None).unwrap();
        prop_assert!(h.norm_inf() <= 4.0 + w + 1e-12);
    }
}
