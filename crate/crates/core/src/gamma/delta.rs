use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;

use super::{GammaError, GammaPresentation, D};
use crate::linalg::{IntMatrix, Subspace};
use crate::poly::Budget;
use crate::variety::VarietyPresentation;

/// Memoized predimension of one presentation.
///
/// `image_dim(W) = dim(M_W · V)` is computed only on the product of the
/// factors that `W` touches: the other factors are projected away by `M_W`.
pub struct Predim<'a> {
    p: &'a GammaPresentation,
    budget: Budget,
    dims: Mutex<HashMap<Subspace, usize>>,
    subs: Mutex<HashMap<Vec<usize>, VarietyPresentation>>,
}

impl<'a> Predim<'a> {
    pub fn new(p: &'a GammaPresentation, budget: &Budget) -> Self {
        Predim {
            p,
            budget: *budget,
            dims: Mutex::default(),
            subs: Mutex::default(),
        }
    }

    pub fn presentation(&self) -> &GammaPresentation {
        self.p
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Indices of the factors on which some row of `m` is nonzero.
    fn touched(&self, m: &IntMatrix) -> Vec<usize> {
        self.p
            .factors()
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                (0..m.rows())
                    .any(|i| (f.offset..f.offset + f.locus.n()).any(|j| !m.get(i, j).is_zero()))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Locus of the listed factors together with the column map into it.
    fn restricted(&self, ids: &[usize]) -> Result<(VarietyPresentation, Vec<usize>), GammaError> {
        let factors = self.p.factors();
        let cols: Vec<usize> = ids
            .iter()
            .flat_map(|&i| factors[i].offset..factors[i].offset + factors[i].locus.n())
            .collect();
        if ids.len() == 1 {
            return Ok((factors[ids[0]].locus.clone(), cols));
        }
        if let Some(v) = self.subs.lock().expect("poisoned").get(ids) {
            return Ok((v.clone(), cols));
        }
        // warm the factor caches so the product inherits dimension and probe
        for &i in ids {
            factors[i].locus.dim(&self.budget)?;
            factors[i].locus.tangent_probe(&self.budget);
        }
        let v = self.p.sub_locus(ids);
        let v = self
            .subs
            .lock()
            .expect("poisoned")
            .entry(ids.to_vec())
            .or_insert(v)
            .clone();
        Ok((v, cols))
    }

    /// `dim(M_W · V)`.
    pub fn image_dim(&self, w: &Subspace) -> Result<usize, GammaError> {
        if w.rank() == 0 {
            return Ok(0);
        }
        if let Some(&d) = self.dims.lock().expect("poisoned").get(w) {
            return Ok(d);
        }
        let m = w.basis();
        let ids = self.touched(m);
        let (v, cols) = self.restricted(&ids)?;
        let mut sub = IntMatrix::zeros(m.rows(), cols.len());
        for i in 0..m.rows() {
            for (c, &j) in cols.iter().enumerate() {
                sub.set(i, c, m.get(i, j).clone());
            }
        }
        let d = v.image_dim(&sub, &self.budget)?;
        self.dims.lock().expect("poisoned").insert(w.clone(), d);
        Ok(d)
    }

    /// Cheap certified bounds on `δ(W)`.
    pub fn delta_bounds(&self, w: &Subspace) -> Result<(i64, i64), GammaError> {
        if w.rank() == 0 {
            return Ok((0, 0));
        }
        if let Some(&d) = self.dims.lock().expect("poisoned").get(w) {
            let v = d as i64 - D * w.rank() as i64;
            return Ok((v, v));
        }
        let m = w.basis();
        let ids = self.touched(m);
        let (v, cols) = self.restricted(&ids)?;
        let mut sub = IntMatrix::zeros(m.rows(), cols.len());
        for i in 0..m.rows() {
            for (c, &j) in cols.iter().enumerate() {
                sub.set(i, c, m.get(i, j).clone());
            }
        }
        let (lo, hi) = v.image_dim_bounds(&sub, &self.budget)?;
        let r = D * w.rank() as i64;
        Ok((lo as i64 - r, hi as i64 - r))
    }

    /// `δ(W) = dim(M_W · V) − d·rk W`.
    pub fn delta(&self, w: &Subspace) -> Result<i64, GammaError> {
        Ok(self.image_dim(w)? as i64 - D * w.rank() as i64)
    }

    /// `δ(W over U) = δ(W) − δ(U)` for `U ⊆ W`.
    pub fn relative(&self, w: &Subspace, u: &Subspace) -> Result<i64, GammaError> {
        Ok(self.delta(w)? - self.delta(u)?)
    }

    /// `δ` of the whole extension: the locus dimension is additive over
    /// factors.
    pub fn total(&self) -> Result<i64, GammaError> {
        let mut dim = 0usize;
        for f in self.p.factors() {
            dim += f.locus.dim(&self.budget)?;
        }
        Ok(dim as i64 - D * self.p.n() as i64)
    }
}

/// `δ` of the presentation, or of the subspace spanned by `rows`.
pub fn delta(
    p: &GammaPresentation,
    rows: Option<&IntMatrix>,
    budget: &Budget,
) -> Result<i64, GammaError> {
    let pd = Predim::new(p, budget);
    match rows {
        None => pd.total(),
        Some(m) => {
            if m.cols() != p.n() {
                return Err(GammaError::Shape(format!(
                    "subspace rows have length {}, expected {}",
                    m.cols(),
                    p.n()
                )));
            }
            pd.delta(&Subspace::span(m))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gamma::BasePresentation;

    fn q() -> Arc<BasePresentation> {
        Arc::new(BasePresentation::rational())
    }

    #[test]
    fn generic_and_trivial() {
        let b = Budget::default();
        for n in 0..=3 {
            assert_eq!(
                delta(&GammaPresentation::generic(q(), n), None, &b).unwrap(),
                n as i64
            );
        }
        assert_eq!(
            delta(&GammaPresentation::trivial(q()), None, &b).unwrap(),
            0
        );
    }

    #[test]
    fn curve_has_delta_zero() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 1, &["y1 - x1 - 1"], 3, &b).unwrap();
        assert_eq!(delta(&p, None, &b).unwrap(), 0);
        assert_eq!(
            delta(&p, Some(&IntMatrix::from_rows(1, &[[2]])), &b).unwrap(),
            0
        );
    }

    #[test]
    fn subspace_of_a_product_uses_touched_factors() {
        let b = Budget::default();
        let curve = crate::variety::VarietyPresentation::parse(
            1,
            q().constants().clone(),
            &["y1 - x1 - 1"],
            &b,
        )
        .unwrap();
        let g = crate::variety::VarietyPresentation::generic(1, q().constants().clone());
        let p = GammaPresentation::from_factors(q(), vec![g, curve]);
        let pd = Predim::new(&p, &b);
        assert_eq!(pd.total().unwrap(), 1);
        assert_eq!(pd.delta(&Subspace::coordinate(2, &[1])).unwrap(), 0);
        assert_eq!(pd.delta(&Subspace::coordinate(2, &[0])).unwrap(), 1);
        assert_eq!(pd.delta(&Subspace::from_i64_rows(2, &[[1, 1]])).unwrap(), 1);
        assert_eq!(pd.delta(&Subspace::full(2)).unwrap(), 1);
    }

    #[test]
    fn bounds_bracket_exact_value() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 2, &["y1 - x1 - 1", "x2 - x1^2"], 3, &b).unwrap();
        let pd = Predim::new(&p, &b);
        for w in Subspace::enumerate_nonzero(2, 2) {
            let (lo, hi) = pd.delta_bounds(&w).unwrap();
            let v = pd.delta(&w).unwrap();
            assert!(lo <= v && v <= hi);
        }
    }
}
