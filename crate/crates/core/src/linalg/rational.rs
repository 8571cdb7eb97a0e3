use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, Rational};

/// Small dense matrix over the rationals, used for Gaussian elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        QMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self::from_rows(m.cols(), m.to_rational_rows())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if sel != pr {
                for j in 0..self.cols {
                    self.data.swap(sel * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = self.get(pr, col).recip();
            for j in col..self.cols {
                let v = self.get(pr, j) * &inv;
                self.set(pr, j, v);
            }
            for i in 0..self.rows {
                if i == pr || self.get(i, col).is_zero() {
                    continue;
                }
                let f = self.get(i, col).clone();
                for j in col..self.cols {
                    let v = self.get(i, j) - &f * self.get(pr, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{v : A v = 0}` over Q, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -a.get(r, f).clone();
                }
                v
            })
            .collect()
    }
}

/// Clears denominators and divides out the content; the first nonzero entry
/// becomes positive. The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    ints.into_iter()
        .map(|x| if sign { -(x / &g) } else { x / &g })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn kernel_of_rank_one_row() {
        let m = QMatrix::from_rows(3, vec![vec![q(1), q(2), q(3)]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rational = (0..3).map(|j| m.get(0, j) * &v[j]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![
            Rational::new((-1).into(), 2.into()),
            Rational::new(1.into(), 3.into()),
        ];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(3), BigInt::from(-2)]
        );
    }
}
