use serde::Serialize;

use crate::gamma::hull::enumerated;
use crate::gamma::rotund::first_failure;
use crate::gamma::{GammaError, GammaPresentation, Predim};
use crate::poly::Budget;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subspace: Vec<Vec<i64>>,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchanuelReport {
    pub pass: bool,
    pub violation: Option<Violation>,
    pub subspaces_checked: usize,
    pub bound: u64,
}

/// `δ(W) ≥ 0` for every subspace of the basis span with canonical height
/// at most `height`; reports the first failure in canonical order.
pub fn schanuel_sweep(
    p: &GammaPresentation,
    height: u64,
    budget: &Budget,
) -> Result<SchanuelReport, GammaError> {
    let pd = Predim::new(p, budget);
    let subs = enumerated(p.n(), height);
    let violation = first_failure(&pd, &subs, false)?.map(|w| {
        let rows: Vec<Vec<i64>> = w.matrix.into_iter().take(w.rank).collect();
        Violation {
            subspace: rows,
            delta: w.image_dim as i64 - crate::gamma::D * w.rank as i64,
        }
    });
    Ok(SchanuelReport {
        pass: violation.is_none(),
        violation,
        subspaces_checked: subs.len(),
        bound: height,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::amalgam::{build_stage, CatalogOptions};
    use crate::gamma::BasePresentation;
    use crate::variety::VarietyPresentation;

    #[test]
    fn stage_one_passes() {
        let b = Budget::default();
        let a0 = Arc::new(BasePresentation::rational());
        let s = build_stage(&a0, 1, &CatalogOptions::default()).unwrap();
        let r = schanuel_sweep(&s.current, 2, &b).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(
            schanuel_sweep(&GammaPresentation::trivial(a0), 2, &b)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn base_point_as_basis_vector_fails() {
        let b = Budget::default();
        let a0 = Arc::new(BasePresentation::rational());
        let v = VarietyPresentation::parse(1, a0.constants().clone(), &["x1 - 1", "y1 - 3"], &b)
            .unwrap();
        let p = GammaPresentation::new_unchecked(a0, v).unwrap();
        let r = schanuel_sweep(&p, 2, &b).unwrap();
        assert_eq!(
            r.violation,
            Some(Violation {
                subspace: vec![vec![1]],
                delta: -1
            })
        );
    }
}
