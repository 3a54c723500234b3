use proptest::prelude::*;

use permsym::ci::{build_basis, ci_solve, hamiltonian_element, hamiltonian_matrix, run_ci, SlaterDeterminant};
use permsym::oscillator::{bound_window, make_model};
use permsym::spin::HalfInt;
use permsym::symgroup::{character_table, Permutation};

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn three_perms() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (2usize..=7).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))
}

fn coupling(n: usize) -> impl Strategy<Value = f64> {
    let (lo, hi) = bound_window(n);
    (lo + 1e-3)..(hi - 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_a_group_law((p, q, r) in three_perms()) {
        let pq_r = p.compose(&q).unwrap().compose(&r).unwrap();
        let p_qr = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(pq_r, p_qr);
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(p.compose(&q).unwrap().parity(), p.parity() * q.parity());
        for i in 0..p.n() {
            prop_assert_eq!(p.compose(&q).unwrap().apply(i), p.apply(q.apply(i)));
        }
    }

    #[test]
    fn characters_are_class_functions((p, q, _) in (3usize..=4).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))) {
        let t = character_table(p.n()).unwrap();
        let conj = q.compose(&p).unwrap().compose(&q.inverse()).unwrap();
        for i in 0..t.irreps.len() {
            prop_assert_eq!(t.character(i, &p), t.character(i, &conj));
        }
    }

    #[test]
    fn canonical_sign_is_sort_parity(perm in permutation(4), orbitals in proptest::sample::subsequence((0..12).collect::<Vec<_>>(), 4)) {
        let shuffled: Vec<usize> = (0..4).map(|i| orbitals[perm.apply(i)]).collect();
        let (sign, det) = SlaterDeterminant::canonicalize(&shuffled).unwrap();
        prop_assert_eq!(det.occupied(), &orbitals[..]);
        prop_assert_eq!(sign, perm.parity());
        let mut swapped = shuffled.clone();
        swapped.swap(0, 3);
        let (sign2, det2) = SlaterDeterminant::canonicalize(&swapped).unwrap();
        prop_assert_eq!(det2, det);
        prop_assert_eq!(sign2, -sign);
    }

    #[test]
    fn hamiltonian_is_exactly_symmetric(xi in coupling(3), i in 0usize..120, j in 0usize..120) {
        let m = make_model(3, xi).unwrap();
        let basis = build_basis(3, 5, None).unwrap();
        let (a, b) = (&basis[i % basis.len()], &basis[j % basis.len()]);
        prop_assert_eq!(hamiltonian_element(a, b, &m).unwrap(), hamiltonian_element(b, a, &m).unwrap());
    }

    #[test]
    fn ci_energies_ignore_basis_order(xi in coupling(3), shuffled in Just(build_basis(3, 4, None).unwrap()).prop_shuffle()) {
        let m = make_model(3, xi).unwrap();
        let a = ci_solve(&m, &build_basis(3, 4, None).unwrap()).unwrap();
        let b = ci_solve(&m, &shuffled).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn ci_ground_state_respects_the_allowed_floor(xi in coupling(3)) {
        let m = make_model(3, xi).unwrap();
        let res = run_ci(&m, 5, Some(HalfInt(1))).unwrap();
        // lowest allowed level carries one degenerate-mode quantum
        let floor = m.level_energy(1, 0);
        prop_assert!(res.eigenvalues[0] >= floor - 1e-9, "{} < {}", res.eigenvalues[0], floor);
    }
}

#[test]
fn multiplets_are_complete_across_ms_blocks() {
    let m = make_model(3, 0.15).unwrap();
    let res = run_ci(&m, 6, None).unwrap();
    for st in res.states.iter().filter(|s| s.ms == s.s) {
        for twice_ms in (-st.s.0..=st.s.0).step_by(2) {
            let partner = res.states.iter().any(|o| {
                o.ms == HalfInt(twice_ms) && o.s == st.s && o.parity == st.parity && (o.energy - st.energy).abs() < 1e-8
            });
            assert!(partner, "S={} at {} has no Ms={} partner", st.s, st.energy, HalfInt(twice_ms));
        }
    }
}

#[test]
fn hamiltonian_matrix_is_deterministic_across_thread_counts() {
    let m = make_model(4, 0.1).unwrap();
    let basis = build_basis(4, 5, Some(HalfInt(0))).unwrap();
    let with_threads = |k: usize| {
        std::env::set_var("PERMSYM_THREADS", k.to_string());
        hamiltonian_matrix(&m, &basis).unwrap()
    };
    let (one, four) = (with_threads(1), with_threads(4));
    std::env::remove_var("PERMSYM_THREADS");
    assert_eq!(one, four);
}
