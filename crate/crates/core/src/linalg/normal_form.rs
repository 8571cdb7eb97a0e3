//! Hermite and Smith normal forms over the integers.
//!
//! Both algorithms use only unimodular integer row/column operations (extended
//! gcd combinations, swaps, sign flips), so no fractions ever appear.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `H = U * M`, `U` unimodular, pivots positive, entries
/// above each pivot reduced into `[0, pivot)` and zero rows last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        for r in pr + 1..rows {
            if h.get(r, col).is_zero() {
                continue;
            }
            let a = h.get(pr, col).clone();
            let b = h.get(r, col).clone();
            let (g, s, t) = egcd(&a, &b);
            let u_coef = -(&b / &g);
            let v_coef = &a / &g;
            h.combine_rows(pr, r, &s, &t, &u_coef, &v_coef);
            u.combine_rows(pr, r, &s, &t, &u_coef, &v_coef);
        }
        if h.get(pr, col).is_zero() {
            continue;
        }
        if h.get(pr, col).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let pivot = h.get(pr, col).clone();
        for r in 0..pr {
            let q = h.get(r, col).div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                h.add_row_multiple(r, pr, &f);
                u.add_row_multiple(r, pr, &f);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form.
///
/// Returns `(D, L, R)` with `D = L * M * R` diagonal, `d_1 | d_2 | ...`, all
/// diagonal entries non-negative, `L` and `R` unimodular.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut l = IntMatrix::identity(rows);
    let mut r = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = d.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d.get(bi, bj).abs() <= e.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (d, l, r);
            };
            d.swap_rows(t, bi);
            l.swap_rows(t, bi);
            d.swap_cols(t, bj);
            r.swap_cols(t, bj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t) / &pivot;
                if !q.is_zero() {
                    let f = -q;
                    d.add_row_multiple(i, t, &f);
                    l.add_row_multiple(i, t, &f);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d.get(t, j) / &pivot;
                if !q.is_zero() {
                    let f = -q;
                    d.add_col_multiple(j, t, &f);
                    r.add_col_multiple(j, t, &f);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offending =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    l.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            l.negate_row(t);
        }
    }
    (d, l, r)
}

/// Rank via the Smith normal form.
pub fn rank(m: &IntMatrix) -> usize {
    let (d, _, _) = snf(m);
    (0..m.rows().min(m.cols()))
        .filter(|&i| !d.get(i, i).is_zero())
        .count()
}

/// A Z-basis of the integer kernel `{v : M v = 0}`, in Hermite normal form.
///
/// The returned lattice is saturated: it is the full intersection of the
/// rational kernel with `Z^cols`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, u) = hnf(&m.transpose());
    let kernel_rows: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.row(i).to_vec())
        .collect();
    if kernel_rows.is_empty() {
        return Vec::new();
    }
    let k = IntMatrix::from_big_rows(m.cols(), &kernel_rows);
    let (hk, _) = hnf(&k);
    hk.without_zero_rows().row_vecs()
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn is_unimodular(u: &IntMatrix) -> bool {
        u.det().abs() == BigInt::one()
    }

    #[test]
    fn hnf_identity_and_zero() {
        let i = IntMatrix::identity(2);
        assert_eq!(hnf(&i), (i.clone(), i.clone()));
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(hnf(&z), (z.clone(), IntMatrix::identity(2)));
    }

    #[test]
    fn hnf_small_example() {
        let m = IntMatrix::from_rows(2, &[[2, 4], [1, 1]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMatrix::from_rows(2, &[[1, 1], [0, 2]]));
        assert_eq!(u.mul(&m), h);
        assert!(is_unimodular(&u));
    }

    #[test]
    fn hnf_is_idempotent_and_reduced() {
        let m = IntMatrix::from_rows(3, &[[3, 5, 7], [2, 4, 6], [-1, 0, 9], [6, 10, 14]]);
        let (h, u) = hnf(&m);
        assert_eq!(u.mul(&m), h);
        assert!(is_unimodular(&u));
        assert_eq!(hnf(&h).0, h);
        assert!(h.is_zero_row(3));
    }

    #[test]
    fn snf_examples() {
        let i = IntMatrix::identity(3);
        let (d, l, r) = snf(&i);
        assert_eq!(d, i);
        assert_eq!(l.mul(&i).mul(&r), d);

        let m = IntMatrix::from_rows(2, &[[2, 4], [1, 1]]);
        let (d, l, r) = snf(&m);
        assert_eq!(d, IntMatrix::from_rows(2, &[[1, 0], [0, 2]]));
        assert_eq!(l.mul(&m).mul(&r), d);
        assert!(is_unimodular(&l) && is_unimodular(&r));

        let m = IntMatrix::from_rows(2, &[[2, 0], [0, 2]]);
        assert_eq!(snf(&m).0, m);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMatrix::from_rows(3, &[[2, 0, 0], [0, 3, 0], [0, 0, 4]]);
        let (d, l, r) = snf(&m);
        assert_eq!(l.mul(&m).mul(&r), d);
        assert_eq!(
            d,
            IntMatrix::from_rows(3, &[[1, 0, 0], [0, 2, 0], [0, 0, 12]])
        );
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            kernel_basis(&IntMatrix::from_rows(2, &[[1, -1]])),
            vec![big(&[1, 1])]
        );
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
        let k = kernel_basis(&IntMatrix::from_rows(2, &[[2, 4]]));
        assert_eq!(k, vec![big(&[2, -1])]);
        // 2*2 + 4*(-1) = 0 and the vector is primitive
        assert_eq!(k[0][0].gcd(&k[0][1]), BigInt::one());
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of [[2, 2, 0]] contains (1,-1,0) even though 2 divides the row
        let k = kernel_basis(&IntMatrix::from_rows(3, &[[2, 2, 0]]));
        assert_eq!(k.len(), 2);
        let km = IntMatrix::from_big_rows(3, &k);
        let (d, _, _) = snf(&km);
        assert!((0..2).all(|i| d.get(i, i) == &BigInt::one()));
    }

    #[test]
    fn rank_matches_rational_elimination() {
        let m = IntMatrix::from_rows(4, &[[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1], [1, 3, 3, 5]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(QMatrix::from_int(&m).rank(), 2);
    }
}
