mod common;

use gammaforge::amalgam::free_amalgam;
use gammaforge::format::{to_canonical_json, BoundsSpec, PresentationFile};
use gammaforge::gamma::{delta, hull, GammaPresentation, Predim};
use gammaforge::linalg::{IntMatrix, Subspace};
use gammaforge::poly::Budget;
use proptest::prelude::*;

fn presentation(seed: u64, max_n: usize) -> GammaPresentation {
    common::random_presentations(seed, 1, max_n)
        .pop()
        .expect("a valid presentation")
        .1
}

fn rows(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..=n)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn delta_depends_only_on_the_span(seed in any::<u64>(), m in rows(2), k in -2i64..=2) {
        let b = Budget::default();
        let p = presentation(seed, 2);
        let n = p.n();
        let m: Vec<Vec<i64>> = m.into_iter().map(|r| r.into_iter().take(n).chain(std::iter::repeat(0)).take(n).collect()).collect();
        let mut mixed = m.clone();
        if mixed.len() > 1 {
            for j in 0..n {
                mixed[0][j] += k * m[1][j];
            }
        }
        let d1 = delta(&p, Some(&IntMatrix::from_rows(n, &m)), &b).unwrap();
        let d2 = delta(&p, Some(&IntMatrix::from_rows(n, &mixed)), &b).unwrap();
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn addition_formula(seed in any::<u64>(), u in rows(2), w in rows(2)) {
        let b = Budget::default();
        let p = presentation(seed, 2);
        let n = p.n();
        let trim = |m: Vec<Vec<i64>>| m.into_iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>();
        let pd = Predim::new(&p, &b);
        let u = Subspace::span(&IntMatrix::from_rows(n, &trim(u)));
        let w = Subspace::span(&IntMatrix::from_rows(n, &trim(w))).sum(&u);
        prop_assert_eq!(pd.delta(&w).unwrap(), pd.relative(&w, &u).unwrap() + pd.delta(&u).unwrap());
        prop_assert!(pd.relative(&w, &u).unwrap() <= 2 * (w.rank() - u.rank()) as i64);
    }

    #[test]
    fn submodularity(seed in any::<u64>(), u in rows(2), w in rows(2)) {
        let b = Budget::default();
        let p = presentation(seed, 2);
        let n = p.n();
        let trim = |m: Vec<Vec<i64>>| m.into_iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>();
        let pd = Predim::new(&p, &b);
        let u = Subspace::span(&IntMatrix::from_rows(n, &trim(u)));
        let w = Subspace::span(&IntMatrix::from_rows(n, &trim(w)));
        let lhs = pd.delta(&u.sum(&w)).unwrap() + pd.delta(&u.intersection(&w)).unwrap();
        let rhs = pd.delta(&u).unwrap() + pd.delta(&w).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn hull_is_extensive_idempotent_and_monotone(seed in any::<u64>(), x in rows(2), extra in rows(2)) {
        let b = Budget::default();
        let p = presentation(seed, 2);
        let n = p.n();
        let trim = |m: Vec<Vec<i64>>| m.into_iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>();
        let xm = IntMatrix::from_rows(n, &trim(x));
        let xs = Subspace::span(&xm);
        let h = hull(&p, &xm, 2, &b).unwrap();
        prop_assert!(h.subspace.contains(&xs));
        prop_assert!(h.delta_value <= delta(&p, Some(&xm), &b).unwrap());
        let again = hull(&p, h.subspace.basis(), 2, &b).unwrap();
        prop_assert_eq!(&again.subspace, &h.subspace);
        let ys = xs.sum(&Subspace::span(&IntMatrix::from_rows(n, &trim(extra))));
        let hy = hull(&p, ys.basis(), 2, &b).unwrap();
        prop_assert!(hy.subspace.contains(&h.subspace), "{:?} not in {:?}", h.basis, hy.basis);
        prop_assert!(hy.delta_value >= h.delta_value);
    }

    #[test]
    fn amalgam_delta_is_additive(s1 in any::<u64>(), s2 in any::<u64>()) {
        let b = Budget::default();
        let (l, r) = (presentation(s1, 2), presentation(s2, 2));
        let a = free_amalgam(l.base(), &l, &r).unwrap();
        prop_assert_eq!(a.n(), l.n() + r.n());
        prop_assert_eq!(delta(&a, None, &b).unwrap(), delta(&l, None, &b).unwrap() + delta(&r, None, &b).unwrap());
    }

    #[test]
    fn presentation_files_round_trip(seed in any::<u64>()) {
        let b = Budget::default();
        let p = presentation(seed, 2);
        let text = to_canonical_json(&PresentationFile::of(&p, BoundsSpec::default(), &b).unwrap());
        let back = PresentationFile::from_json(&text).unwrap().presentation(&b).unwrap();
        prop_assert_eq!(back.ideal_strings(&b).unwrap(), p.ideal_strings(&b).unwrap());
        let again = to_canonical_json(&PresentationFile::of(&back, BoundsSpec::default(), &b).unwrap());
        prop_assert_eq!(text, again);
    }
}
