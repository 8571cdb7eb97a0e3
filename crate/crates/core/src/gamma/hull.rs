use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::{GammaError, GammaPresentation, Predim};
use crate::linalg::{IntMatrix, Subspace};
use crate::par;
use crate::poly::Budget;

/// The δ-minimal superspace of a seed, certified over superspaces of
/// bounded height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullResult {
    #[serde(skip)]
    pub subspace: Subspace,
    #[serde(rename = "subspace")]
    pub basis: Vec<Vec<i64>>,
    pub delta_value: i64,
    pub certified_up_to: u64,
}

type EnumCache = Mutex<HashMap<(usize, u64), Arc<Vec<Subspace>>>>;

/// Nonzero subspaces of `Q^n` of height `≤ h`, shared across calls.
pub(crate) fn enumerated(n: usize, h: u64) -> Arc<Vec<Subspace>> {
    static CACHE: OnceLock<EnumCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("poisoned").get(&(n, h)) {
        return v.clone();
    }
    let v = Arc::new(Subspace::enumerate_nonzero(n, h));
    cache
        .lock()
        .expect("poisoned")
        .entry((n, h))
        .or_insert(v)
        .clone()
}

pub fn hull(
    p: &GammaPresentation,
    x: &IntMatrix,
    height: u64,
    budget: &Budget,
) -> Result<HullResult, GammaError> {
    if x.cols() != p.n() {
        return Err(GammaError::Shape(format!(
            "seed rows have length {}, expected {}",
            x.cols(),
            p.n()
        )));
    }
    hull_with(&Predim::new(p, budget), &Subspace::span(x), height)
}

pub fn hull_with(pd: &Predim<'_>, x: &Subspace, height: u64) -> Result<HullResult, GammaError> {
    let n = pd.presentation().n();
    let mut cands: Vec<Subspace> = vec![x.clone()];
    cands.extend(
        enumerated(n, height)
            .iter()
            .filter(|w| w.contains(x) && *w != x)
            .cloned(),
    );
    if !x.is_full() && !cands.iter().any(|w| w.is_full()) {
        cands.push(Subspace::full(n));
    }
    let deltas = par::map(&cands, |w| pd.delta(w))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let best = *deltas.iter().min().expect("seed is a candidate");
    let minimizers: Vec<&Subspace> = cands
        .iter()
        .zip(&deltas)
        .filter(|(_, &d)| d == best)
        .map(|(w, _)| w)
        .collect();
    let meet = minimizers
        .iter()
        .skip(1)
        .fold(minimizers[0].clone(), |acc, w| acc.intersection(w));
    let chosen = if pd.delta(&meet)? == best {
        meet
    } else {
        minimizers
            .iter()
            .min_by_key(|w| w.rank())
            .map(|w| (*w).clone())
            .expect("nonempty")
    };
    Ok(HullResult {
        basis: chosen.basis().to_i64_rows().expect("bounded entries"),
        subspace: chosen,
        delta_value: best,
        certified_up_to: height,
    })
}

/// `Γdim(X) = δ(hull(X))`.
pub fn gammadim(
    p: &GammaPresentation,
    x: &IntMatrix,
    height: u64,
    budget: &Budget,
) -> Result<i64, GammaError> {
    Ok(hull(p, x, height, budget)?.delta_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::BasePresentation;

    fn q() -> Arc<BasePresentation> {
        Arc::new(BasePresentation::rational())
    }

    #[test]
    fn hull_jumps_to_full_space() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 2, &["x2 - x1^2", "y2 - 2*y1"], 3, &b).unwrap();
        let e1 = IntMatrix::from_rows(2, &[[1, 0]]);
        let h = hull(&p, &e1, 2, &b).unwrap();
        assert!(h.subspace.is_full());
        assert_eq!(h.delta_value, 0);
        assert_eq!(gammadim(&p, &e1, 2, &b).unwrap(), 0);
        assert_eq!(delta_of(&p, &e1), 1);
    }

    fn delta_of(p: &GammaPresentation, m: &IntMatrix) -> i64 {
        crate::gamma::delta(p, Some(m), &Budget::default()).unwrap()
    }

    #[test]
    fn generic_directions_stay_put() {
        let b = Budget::default();
        let p = GammaPresentation::generic(q(), 2);
        let e1 = IntMatrix::from_rows(2, &[[1, 0]]);
        let h = hull(&p, &e1, 2, &b).unwrap();
        assert_eq!(h.basis, vec![vec![1, 0]]);
        assert_eq!(h.delta_value, 1);
        assert_eq!(gammadim(&p, &IntMatrix::identity(2), 2, &b).unwrap(), 2);
        assert_eq!(gammadim(&p, &IntMatrix::zeros(0, 2), 2, &b).unwrap(), 0);
    }

    #[test]
    fn full_seed_is_its_own_hull() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 1, &["y1 - x1 - 1"], 3, &b).unwrap();
        let h = hull(&p, &IntMatrix::identity(1), 2, &b).unwrap();
        assert!(h.subspace.is_full());
        assert_eq!(h.delta_value, 0);
    }
}
