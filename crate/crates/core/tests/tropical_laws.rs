mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use racelogic::tropical::*;

use common::{random_wavefront, small_grid};

fn time(max: u64) -> impl Strategy<Value = TimeValue> {
    prop_oneof![
        4 => (0..=max).prop_map(TimeValue::Finite),
        1 => Just(TimeValue::Infinity),
    ]
}

fn wavefront(len: usize) -> impl Strategy<Value = Wavefront> {
    prop::collection::vec(time(50), len).prop_map(Wavefront::new)
}

fn pair() -> impl Strategy<Value = (Wavefront, Wavefront)> {
    (1usize..16).prop_flat_map(|n| (wavefront(n), wavefront(n)))
}

fn shift(w: &Wavefront, d: u64) -> Wavefront {
    scale(TimeValue::Finite(d), w)
}

fn brute_vmm(a: &TropicalMatrix, x: &Wavefront) -> Wavefront {
    (0..a.n())
        .map(|j| (0..a.n()).fold(INF, |acc, i| t_add(acc, t_mul(a.get(j, i), x[i]))))
        .collect()
}

#[test]
fn semiring_axioms_exhaustive() {
    let g = small_grid();
    for &a in &g {
        assert_eq!(t_add(a, INF), a);
        assert_eq!(t_add(a, a), a);
        assert_eq!(t_mul(a, TimeValue::ZERO), a);
        assert_eq!(t_mul(a, INF), INF);
        for &b in &g {
            assert_eq!(t_add(a, b), t_add(b, a));
            assert_eq!(t_mul(a, b), t_mul(b, a));
            for &c in &g {
                assert_eq!(t_add(t_add(a, b), c), t_add(a, t_add(b, c)));
                assert_eq!(t_mul(t_mul(a, b), c), t_mul(a, t_mul(b, c)));
                assert_eq!(t_mul(a, t_add(b, c)), t_add(t_mul(a, b), t_mul(a, c)));
            }
        }
    }
}

#[test]
fn vmm_matches_double_loop_on_32x32() {
    let mut rng = StdRng::seed_from_u64(32);
    for _ in 0..200 {
        let a = TropicalMatrix::from_rows((0..32).map(|_| random_wavefront(&mut rng, 32, 31, 0.5).into_vec()).collect())
            .unwrap();
        let x = random_wavefront(&mut rng, 32, 31, 0.3);
        assert_eq!(vmm(&a, &x).unwrap(), brute_vmm(&a, &x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn vmm_matches_double_loop_small(
        (a, x) in (1usize..=5).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(time(3), n), n),
            prop::collection::vec(time(3), n),
        ))
    ) {
        let a = TropicalMatrix::from_rows(a).unwrap();
        let x = Wavefront::new(x);
        prop_assert_eq!(vmm(&a, &x).unwrap(), brute_vmm(&a, &x));
    }

    #[test]
    fn elementwise_ops_are_shift_equivariant((u, v) in pair(), d in 0u64..20) {
        for op in [EwOp::Min, EwOp::Max, EwOp::Inhibit] {
            for tie in [TieMode::StrictBlock, TieMode::PassOnTie] {
                let out = ew(op, &u, &v, tie).unwrap();
                prop_assert_eq!(ew(op, &shift(&u, d), &shift(&v, d), tie).unwrap(), shift(&out, d));
            }
        }
        prop_assert_eq!(ew_mul(&u, &v).unwrap().len(), u.len());
    }

    #[test]
    fn reductions_and_vmm_are_shift_equivariant(
        (a, x) in (1usize..=8).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(time(9), n), n),
            wavefront(n),
        )),
        d in 0u64..20,
    ) {
        let a = TropicalMatrix::from_rows(a).unwrap();
        prop_assert_eq!(vmm(&a, &shift(&x, d)).unwrap(), shift(&vmm(&a, &x).unwrap(), d));
        prop_assert_eq!(min_reduce(&shift(&x, d)), t_mul(min_reduce(&x), TimeValue::Finite(d)));
        prop_assert_eq!(max_reduce(&shift(&x, d)), t_mul(max_reduce(&x), TimeValue::Finite(d)));
        let idx: Vec<_> = argmin_onehot(&x).finite_indices().collect();
        let idx_shifted: Vec<_> = argmin_onehot(&shift(&x, d)).finite_indices().collect();
        prop_assert_eq!(idx, idx_shifted);
    }

    #[test]
    fn outputs_never_precede_inputs((u, v) in pair()) {
        let lo = u.iter().chain(v.iter()).copied().min().unwrap();
        let outputs = [
            ew(EwOp::Min, &u, &v, TieMode::StrictBlock).unwrap(),
            ew(EwOp::Max, &u, &v, TieMode::StrictBlock).unwrap(),
            ew(EwOp::Inhibit, &u, &v, TieMode::StrictBlock).unwrap(),
            ew_mul(&u, &v).unwrap(),
            argmin_onehot(&u),
            Wavefront::new(vec![min_reduce(&u), max_reduce(&v)]),
        ];
        for out in &outputs {
            prop_assert!(out.iter().all(|t| t.is_infinite() || *t >= lo), "{} before {}", out, lo);
        }
    }

    #[test]
    fn normalize_round_trips(x in (1usize..16).prop_flat_map(wavefront)) {
        let n = normalize(&x);
        if x.count_finite() > 0 {
            prop_assert_eq!(min_reduce(&n.shape), TimeValue::ZERO);
            prop_assert_eq!(scale(n.constant, &n.shape), x.clone());
            prop_assert_eq!(n.denormalize(), x);
        } else {
            prop_assert_eq!(n.constant, TimeValue::ZERO);
            prop_assert_eq!(n.shape, x);
        }
    }

    #[test]
    fn argmin_is_single_hot(x in (1usize..16).prop_flat_map(wavefront)) {
        let a = argmin_onehot(&x);
        prop_assert!(a.count_finite() <= 1);
        prop_assert_eq!(min_reduce(&a), min_reduce(&x));
        let winner = a.finite_indices().next();
        if let Some(i) = winner {
            prop_assert!(x.iter().take(i).all(|t| *t > x[i]));
        }
    }

    #[test]
    fn coincidence_matches_window(a in time(40), b in time(40), eps in 1u64..5) {
        let got = coincidence(a, b, eps).unwrap();
        let want = match (a, b) {
            (TimeValue::Finite(x), TimeValue::Finite(y)) if x.abs_diff(y) < eps => TimeValue::Finite(x.max(y)),
            _ => INF,
        };
        prop_assert_eq!(got, want);
    }

    #[test]
    fn binarize_maps_to_tmax(x in (1usize..16).prop_flat_map(wavefront)) {
        let t = TimeValue::Finite(50);
        let b = binarize(&x, t).unwrap();
        for (i, o) in x.iter().zip(b.iter()) {
            prop_assert_eq!(*o, if i.is_finite() { t } else { INF });
        }
    }
}
