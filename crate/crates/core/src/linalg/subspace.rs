//! Rational subspaces of `Q^n`, each stored by one canonical integer basis.
//!
//! The canonical basis of a subspace `W` is the Hermite normal form of the
//! saturated lattice `W ∩ Z^n`. Two integer matrices span the same rational
//! row space exactly when their canonical bases coincide, which lets sweeps
//! visit every subspace once.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{hnf, kernel_basis, snf, IntMatrix, QMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    basis: IntMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: IntMatrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: IntMatrix::identity(n),
        }
    }

    /// Coordinate subspace spanned by the given standard basis vectors.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let rows: Vec<Vec<i64>> = indices
            .iter()
            .map(|&i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::span(&IntMatrix::from_rows(n, &rows))
    }

    /// The rational row space of `m`.
    pub fn span(m: &IntMatrix) -> Self {
        let n = m.cols();
        let reduced = hnf(m).0.without_zero_rows();
        if reduced.rows() == 0 {
            return Self::zero(n);
        }
        let orth = kernel_basis(&reduced);
        if orth.is_empty() {
            return Self::full(n);
        }
        let orth = IntMatrix::from_big_rows(n, &orth);
        let sat = kernel_basis(&orth);
        Subspace {
            basis: IntMatrix::from_big_rows(n, &sat),
        }
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(n: usize, rows: &[R]) -> Self {
        Self::span(&IntMatrix::from_rows(n, rows))
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient()
    }

    pub fn height(&self) -> u64 {
        self.basis.height().to_u64().unwrap_or(u64::MAX)
    }

    /// Canonical basis padded with zero rows to a square matrix.
    pub fn padded(&self) -> IntMatrix {
        self.basis.padded_to(self.ambient())
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        let row = IntMatrix::from_big_rows(self.ambient(), &[v.to_vec()]);
        QMatrix::from_int(&self.basis.vstack(&row)).rank() == self.rank()
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient(), other.ambient());
        (0..other.rank()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::span(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let n = self.ambient();
        if self.rank() == 0 || other.rank() == 0 {
            return Self::zero(n);
        }
        // (a, b) with a*U + b*W = 0 gives a*U in both spaces
        let stacked = self.basis.vstack(&other.basis);
        let rel = kernel_basis(&stacked.transpose());
        if rel.is_empty() {
            return Self::zero(n);
        }
        let r = self.rank();
        let coeffs: Vec<Vec<BigInt>> = rel.iter().map(|v| v[..r].to_vec()).collect();
        let a = IntMatrix::from_big_rows(r, &coeffs);
        Self::span(&a.mul(&self.basis))
    }

    /// All subspaces of rank `rank` in `Q^n` whose canonical basis has entries
    /// bounded by `height`, in canonical order.
    pub fn enumerate(n: usize, height: u64, rank: usize) -> Vec<Subspace> {
        assert!(rank <= n);
        if rank == 0 {
            return vec![Self::zero(n)];
        }
        let h = height as i64;
        let mut out = Vec::new();
        for pivots in combinations(n, rank) {
            let mut cells = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for j in p + 1..n {
                    match pivots.iter().position(|&q| q == j) {
                        Some(k) => cells.push(Cell::Above {
                            row: i,
                            col: j,
                            pivot_row: k,
                        }),
                        None => cells.push(Cell::Free { row: i, col: j }),
                    }
                }
            }
            let mut pivot_vals = vec![1i64; rank];
            loop {
                let mut m = vec![vec![0i64; n]; rank];
                for (i, &p) in pivots.iter().enumerate() {
                    m[i][p] = pivot_vals[i];
                }
                fill_cells(&cells, 0, &mut m, &pivot_vals, h, &mut |m| {
                    let mat = IntMatrix::from_rows(n, m);
                    if is_saturated(&mat) {
                        out.push(Subspace { basis: mat });
                    }
                });
                if !next_pivot_values(&mut pivot_vals, h) {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    /// Every subspace of ranks `1..=n` with height at most `height`.
    pub fn enumerate_nonzero(n: usize, height: u64) -> Vec<Subspace> {
        (1..=n)
            .flat_map(|r| Self::enumerate(n, height, r))
            .collect()
    }

    /// Primitive integer vectors of the subspace with sup-norm at most
    /// `bound` and positive first nonzero entry, sorted by norm then lex.
    pub fn bounded_primitive_vectors(&self, bound: u64) -> Vec<Vec<BigInt>> {
        let n = self.ambient();
        let r = self.rank();
        let b = BigInt::from(bound);
        let rows: Vec<&[BigInt]> = (0..r).map(|i| self.basis.row(i)).collect();
        let pivots: Vec<usize> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .position(|x| !x.is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect();
        let mut out = Vec::new();
        let mut acc = vec![BigInt::zero(); n];
        // HNF rows: the coefficient of row i is pinned by the pivot column of row i
        fn rec(
            i: usize,
            rows: &[&[BigInt]],
            pivots: &[usize],
            b: &BigInt,
            acc: &mut Vec<BigInt>,
            out: &mut Vec<Vec<BigInt>>,
        ) {
            if i == rows.len() {
                if acc.iter().all(|x| x.abs() <= *b) && is_sign_normalized(acc) {
                    let g = acc.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                    if g.is_one() {
                        out.push(acc.clone());
                    }
                }
                return;
            }
            let p = pivots[i];
            let piv = &rows[i][p];
            // need |acc[p] + a*piv| <= b
            let lo = (-b - &acc[p]).div_ceil(piv);
            let hi = (b - &acc[p]).div_floor(piv);
            let mut a = lo;
            while a <= hi {
                for (x, y) in acc.iter_mut().zip(rows[i].iter()) {
                    *x += &a * y;
                }
                rec(i + 1, rows, pivots, b, acc, out);
                for (x, y) in acc.iter_mut().zip(rows[i].iter()) {
                    *x -= &a * y;
                }
                a += 1;
            }
        }
        rec(0, &rows, &pivots, &b, &mut acc, &mut out);
        out.sort_by(|u, v| {
            let nu = u.iter().map(|x| x.abs()).max();
            let nv = v.iter().map(|x| x.abs()).max();
            nu.cmp(&nv).then_with(|| u.cmp(v))
        });
        out
    }

    /// Number of subspaces `enumerate_nonzero` would produce, without building them.
    pub fn count_nonzero_upper_bound(n: usize, height: u64) -> u128 {
        let h = height as u128;
        let mut total = 0u128;
        for r in 1..=n {
            // crude bound: (2h+1)^(r*(n-r)) * h^r per pivot pattern
            let free = (r * (n - r)) as u32;
            total = total.saturating_add(
                binomial(n, r)
                    .saturating_mul((2 * h + 1).saturating_pow(free))
                    .saturating_mul(h.saturating_pow(r as u32)),
            );
        }
        total
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

enum Cell {
    Above {
        row: usize,
        col: usize,
        pivot_row: usize,
    },
    Free {
        row: usize,
        col: usize,
    },
}

fn fill_cells(
    cells: &[Cell],
    idx: usize,
    m: &mut Vec<Vec<i64>>,
    pivots: &[i64],
    h: i64,
    emit: &mut dyn FnMut(&[Vec<i64>]),
) {
    if idx == cells.len() {
        emit(m);
        return;
    }
    match cells[idx] {
        Cell::Above {
            row,
            col,
            pivot_row,
        } => {
            for v in 0..pivots[pivot_row] {
                m[row][col] = v;
                fill_cells(cells, idx + 1, m, pivots, h, emit);
            }
            m[row][col] = 0;
        }
        Cell::Free { row, col } => {
            for v in -h..=h {
                m[row][col] = v;
                fill_cells(cells, idx + 1, m, pivots, h, emit);
            }
            m[row][col] = 0;
        }
    }
}

fn next_pivot_values(vals: &mut [i64], h: i64) -> bool {
    for v in vals.iter_mut().rev() {
        if *v < h {
            *v += 1;
            return true;
        }
        *v = 1;
    }
    false
}

fn is_saturated(m: &IntMatrix) -> bool {
    let (d, _, _) = snf(m);
    (0..m.rows()).all(|i| d.get(i, i).abs().is_one())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// True when `v` is a nonzero vector whose first nonzero entry is positive.
pub fn is_sign_normalized(v: &[BigInt]) -> bool {
    v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_is_canonical() {
        let a = Subspace::from_i64_rows(2, &[[2, 4]]);
        assert_eq!(a.basis(), &IntMatrix::from_rows(2, &[[1, 2]]));
        let b = Subspace::from_i64_rows(2, &[[1, 1], [0, 2]]);
        assert!(b.is_full());
        assert_eq!(b, Subspace::full(2));
        let c = Subspace::from_i64_rows(3, &[[0, 0, 0]]);
        assert_eq!(c.rank(), 0);
    }

    #[test]
    fn enumeration_counts_small() {
        // lines in Q^2 of height <= 2: (1,a) a in [-2,2], (2,±1), (0,1)
        let lines = Subspace::enumerate(2, 2, 1);
        assert_eq!(lines.len(), 8);
        assert_eq!(Subspace::enumerate(2, 2, 2), vec![Subspace::full(2)]);
        assert_eq!(Subspace::enumerate(1, 3, 1), vec![Subspace::full(1)]);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let all = Subspace::enumerate_nonzero(3, 2);
        for w in &all {
            assert_eq!(&Subspace::span(w.basis()), w);
        }
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn intersection_and_sum() {
        let u = Subspace::from_i64_rows(3, &[[1, 0, 0], [0, 1, 0]]);
        let w = Subspace::from_i64_rows(3, &[[0, 1, 0], [0, 0, 1]]);
        assert_eq!(u.intersection(&w), Subspace::from_i64_rows(3, &[[0, 1, 0]]));
        assert!(u.sum(&w).is_full());
        let l1 = Subspace::from_i64_rows(2, &[[1, 1]]);
        let l2 = Subspace::from_i64_rows(2, &[[1, -1]]);
        assert_eq!(l1.intersection(&l2).rank(), 0);
    }

    #[test]
    fn bounded_vectors_match_brute_force() {
        let w = Subspace::from_i64_rows(3, &[[1, 0, -1], [0, 1, 2]]);
        let fast = w.bounded_primitive_vectors(2);
        let mut slow = Vec::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let v: Vec<BigInt> = [a, b, c].iter().map(|&x| BigInt::from(x)).collect();
                    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                    if g.is_one() && is_sign_normalized(&v) && w.contains_vector(&v) {
                        slow.push(v);
                    }
                }
            }
        }
        let mut f2 = fast.clone();
        f2.sort();
        slow.sort();
        assert_eq!(f2, slow);
        assert_eq!(Subspace::full(2).bounded_primitive_vectors(1).len(), 4);
    }

    #[test]
    fn containment() {
        let u = Subspace::from_i64_rows(3, &[[1, 2, 0], [0, 0, 1]]);
        assert!(u.contains(&Subspace::from_i64_rows(3, &[[2, 4, 6]])));
        assert!(!u.contains(&Subspace::from_i64_rows(3, &[[0, 1, 0]])));
    }
}
