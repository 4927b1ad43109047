use hermdens::oracle::{build_s_r, count_representations, normalize_count, Convention, CountJob};
use hermdens::{CanonicalForm, FieldParams, GramMatrix, SType};
use proptest::prelude::*;

fn forms_low() -> Vec<CanonicalForm> {
    let mut v = Vec::new();
    for (a, b) in [(0, 0), (1, 0), (1, 1)] {
        for eps1 in [1, -1] {
            v.push(CanonicalForm::Diagonal { a, b, eps1 });
        }
    }
    v.push(CanonicalForm::AntiDiagonal { a: 1 });
    v
}

#[test]
fn herm_dual_count_is_q_times_herm_count_once_stable() {
    let p = FieldParams::new(3).unwrap();
    for s in [SType::Split, SType::NonSplit] {
        let sm = build_s_r(p, s, 0, 6).unwrap();
        for t in forms_low() {
            let tm = t.representative(p, 6).unwrap();
            let ell = (t.max_pi0_valuation() + 1).max(1) as u32;
            let job = CountJob::new(sm.clone(), tm, ell);
            let dual = count_representations(&job).unwrap();
            let herm = count_representations(&job.clone().with_convention(Convention::Herm)).unwrap();
            assert_eq!(dual, 3 * herm, "S = {s:?}, T = {t}, ℓ = {ell}");
            assert_eq!(
                normalize_count(3, ell, 2, 2, Convention::HermDual, dual),
                normalize_count(3, ell, 2, 2, Convention::Herm, herm)
            );
        }
    }
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let p = FieldParams::new(3).unwrap();
    let cases = [
        (build_s_r(p, SType::Split, 0, 6).unwrap(), CanonicalForm::Diagonal { a: 1, b: 1, eps1: 1 }, 2),
        (build_s_r(p, SType::Hyperbolic, 0, 6).unwrap(), CanonicalForm::AntiDiagonal { a: 1 }, 2),
        (build_s_r(p, SType::NonSplit, 1, 6).unwrap(), CanonicalForm::Diagonal { a: 0, b: 0, eps1: -1 }, 1),
    ];
    for (s, t, ell) in cases {
        let tm = t.representative(p, 6).unwrap();
        let base = count_representations(&CountJob::new(s.clone(), tm.clone(), ell).with_threads(1)).unwrap();
        for threads in [2, 3, 8] {
            let job = CountJob::new(s.clone(), tm.clone(), ell).with_threads(threads);
            assert_eq!(count_representations(&job).unwrap(), base, "T = {t}, threads = {threads}");
        }
    }
}

#[test]
fn counts_do_not_depend_on_working_precision() {
    let p = FieldParams::new(3).unwrap();
    for t in forms_low() {
        let mut seen = Vec::new();
        for prec in [4, 6, 9] {
            let s = build_s_r(p, SType::Split, 0, prec).unwrap();
            let tm = t.representative(p, prec).unwrap();
            seen.push(count_representations(&CountJob::new(s, tm, 2)).unwrap());
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]), "T = {t}: {seen:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_targets_are_deterministic(u1 in 1i128..9, u2 in 1i128..9, k in 0u32..2, threads in 1usize..4) {
        prop_assume!(u1 % 3 != 0 && u2 % 3 != 0);
        let p = FieldParams::new(3).unwrap();
        let s = build_s_r(p, SType::Split, 0, 6).unwrap();
        let t = GramMatrix::diagonal_ints(p, &[u1 * 3i128.pow(k), u2], 6).unwrap();
        let a = count_representations(&CountJob::new(s.clone(), t.clone(), 2).with_threads(threads)).unwrap();
        let b = count_representations(&CountJob::new(s, t, 2)).unwrap();
        prop_assert_eq!(a, b);
    }
}
