//! Rational smooth points and tangent-space bounds.
//!
//! At a smooth point `p` of an irreducible `V`, the rank of the differential
//! of `(x, y) ↦ (M x, y^M)` restricted to `T_p V` is a lower bound for
//! `dim(M·V)`. Together with the trivial upper bound `min(dim V, 2 rk M)` this
//! often settles the image dimension without elimination.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VarietyPresentation;
use crate::linalg::{IntMatrix, QMatrix, Rational};
use crate::poly::{Budget, GroebnerBasis, MonomialOrder, Poly, PolyError};

/// A smooth rational point of a variety together with its tangent space.
#[derive(Clone, Debug)]
pub struct TangentProbe {
    n: usize,
    point: Vec<Rational>,
    /// Rows spanning the conormal space at the point, in reduced echelon form.
    conormal: Vec<Vec<Rational>>,
}

const ATTEMPTS_PER_SET: usize = 3;
const MAX_SETS: usize = 24;

impl TangentProbe {
    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.conormal.len()
    }

    /// Builds a probe at a given point, if the point is a smooth point of `V`
    /// with nonzero multiplicative coordinates.
    pub fn at_point(
        v: &VarietyPresentation,
        point: Vec<Rational>,
        budget: &Budget,
    ) -> Result<Option<Self>, PolyError> {
        let n = v.n();
        if !v.consts().is_empty() || point.len() != 2 * n {
            return Ok(None);
        }
        if point[n..].iter().any(|c| c.is_zero()) {
            return Ok(None);
        }
        let gb = v.basis(budget)?;
        if gb.polys().iter().any(|p| !p.eval(&point).is_zero()) {
            return Ok(None);
        }
        let dim = match v.dim(budget) {
            Ok(d) => d,
            Err(_) => return Ok(None),
        };
        let rows: Vec<Vec<Rational>> = gb
            .polys()
            .iter()
            .map(|p| (0..2 * n).map(|j| p.derivative(j).eval(&point)).collect())
            .collect();
        let mut jac = QMatrix::from_rows(2 * n, rows);
        let pivots = jac.rref();
        if pivots.len() != 2 * n - dim {
            return Ok(None);
        }
        let conormal = (0..pivots.len())
            .map(|i| (0..2 * n).map(|j| jac.get(i, j).clone()).collect())
            .collect();
        Ok(Some(TangentProbe { n, point, conormal }))
    }

    /// Searches for a smooth rational point by specializing a maximal
    /// independent set of coordinates to small random values.
    pub fn find(
        v: &VarietyPresentation,
        seed: u64,
        budget: &Budget,
    ) -> Result<Option<Self>, PolyError> {
        if !v.consts().is_empty() {
            return Ok(None);
        }
        let n = v.n();
        let nvars = 2 * n;
        if n == 0 {
            return Ok(Some(TangentProbe {
                n,
                point: Vec::new(),
                conormal: Vec::new(),
            }));
        }
        let gb = v.basis(budget)?;
        let dim = match v.dim(budget) {
            Ok(d) => d,
            Err(_) => return Ok(None),
        };
        let sets = independent_sets(&gb, nvars, dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for set in sets.iter().take(MAX_SETS) {
            for _ in 0..ATTEMPTS_PER_SET {
                let mut values: Vec<Option<Rational>> = vec![None; nvars];
                for &s in set {
                    let mut k: i64 = 0;
                    while k == 0 {
                        k = rng.random_range(-7..=7);
                    }
                    values[s] = Some(Rational::from_integer(k.into()));
                }
                let Some(point) = solve_specialized(&gb, &values, nvars, budget)? else {
                    continue;
                };
                if let Some(probe) = Self::at_point(v, point, budget)? {
                    return Ok(Some(probe));
                }
            }
        }
        Ok(None)
    }

    /// Lower bound for `dim(M·V)`.
    pub fn image_lower_bound(&self, m: &IntMatrix) -> usize {
        let n = self.n;
        assert_eq!(m.cols(), n);
        let mut stacked = QMatrix::zeros(0, 2 * n);
        for row in &self.conormal {
            stacked.push_row(row.clone());
        }
        for i in 0..m.rows() {
            let mut xr = vec![Rational::zero(); 2 * n];
            let mut yr = vec![Rational::zero(); 2 * n];
            for j in 0..n {
                let e = Rational::from_integer(m.get(i, j).clone());
                yr[n + j] = &e / &self.point[n + j];
                xr[j] = e;
            }
            stacked.push_row(xr);
            stacked.push_row(yr);
        }
        stacked.rank() - self.codim()
    }

    /// Probe of a product variety from probes of its factors.
    pub fn product(&self, other: &TangentProbe) -> TangentProbe {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let place_a = |j: usize| if j < a { j } else { j - a + n };
        let place_b = |j: usize| if j < b { j + a } else { j - b + n + a };
        let mut point = vec![Rational::zero(); 2 * n];
        for (j, c) in self.point.iter().enumerate() {
            point[place_a(j)] = c.clone();
        }
        for (j, c) in other.point.iter().enumerate() {
            point[place_b(j)] = c.clone();
        }
        let mut conormal = Vec::new();
        for row in &self.conormal {
            let mut r = vec![Rational::zero(); 2 * n];
            for (j, c) in row.iter().enumerate() {
                r[place_a(j)] = c.clone();
            }
            conormal.push(r);
        }
        for row in &other.conormal {
            let mut r = vec![Rational::zero(); 2 * n];
            for (j, c) in row.iter().enumerate() {
                r[place_b(j)] = c.clone();
            }
            conormal.push(r);
        }
        TangentProbe { n, point, conormal }
    }

    /// The tangent space, as a basis of column vectors in `Q^{2n}`.
    pub fn tangent_basis(&self) -> Vec<Vec<Rational>> {
        if self.conormal.is_empty() {
            return (0..2 * self.n)
                .map(|i| {
                    (0..2 * self.n)
                        .map(|j| Rational::from_integer(i64::from(i == j).into()))
                        .collect()
                })
                .collect();
        }
        QMatrix::from_rows(2 * self.n, self.conormal.clone()).kernel()
    }
}

/// Variable subsets of size `dim`: those containing no leading monomial
/// support first, then the rest (an algebraically independent set need not be
/// independent for the chosen order).
fn independent_sets(gb: &GroebnerBasis, nvars: usize, dim: usize) -> Vec<Vec<usize>> {
    let supports: Vec<Vec<usize>> = gb
        .leading_monomials()
        .map(|m| m.support().collect())
        .collect();
    let mut all = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        start: usize,
        nvars: usize,
        dim: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= 64 * MAX_SETS {
            return;
        }
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        for v in start..nvars {
            cur.push(v);
            rec(v + 1, nvars, dim, cur, out);
            cur.pop();
        }
    }
    rec(0, nvars, dim, &mut cur, &mut all);
    let (mut out, rest): (Vec<_>, Vec<_>) = all
        .into_iter()
        .partition(|set| !supports.iter().any(|s| s.iter().all(|v| set.contains(v))));
    out.extend(rest);
    out
}

/// Solves the system after fixing some coordinates, accepting only a unique
/// rational solution.
fn solve_specialized(
    gb: &GroebnerBasis,
    values: &[Option<Rational>],
    nvars: usize,
    budget: &Budget,
) -> Result<Option<Vec<Rational>>, PolyError> {
    let gens: Vec<Poly> = gb.polys().iter().map(|p| p.specialize(values)).collect();
    let small = Budget {
        max_basis: budget.max_basis.min(500),
        ..*budget
    };
    let lex = match GroebnerBasis::compute(&gens, nvars, MonomialOrder::Lex, &small) {
        Ok(g) => g,
        Err(PolyError::ResourceLimit(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if lex.is_unit() {
        return Ok(None);
    }
    let mut point: Vec<Option<Rational>> = values.to_vec();
    for p in lex.polys() {
        let (lm, _) = p.leading_term(MonomialOrder::Lex).expect("nonzero");
        if lm.degree() != 1 || p.len() > 2 || p.terms().iter().any(|(m, _)| !m.is_one() && m != lm)
        {
            return Ok(None);
        }
        let var = lm.support().next().expect("degree one");
        let c = p.constant_term();
        point[var] = Some(-c);
    }
    Ok(point.into_iter().collect())
}
