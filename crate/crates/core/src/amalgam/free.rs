use super::AmalgamError;
use crate::gamma::{BasePresentation, GammaError, GammaPresentation};
use crate::linalg::Subspace;

/// `L ⊗_{A0} R`: the factors of `L` followed by those of `R`, in disjoint
/// variable blocks, so the ideal is `I_L + I_R`.
pub fn free_amalgam(
    a0: &BasePresentation,
    l: &GammaPresentation,
    r: &GammaPresentation,
) -> Result<GammaPresentation, AmalgamError> {
    if **l.base() != *a0 || **r.base() != *a0 {
        return Err(GammaError::BaseMismatch.into());
    }
    let loci = l
        .factors()
        .iter()
        .chain(r.factors())
        .map(|f| f.locus.clone())
        .collect();
    Ok(GammaPresentation::from_factors(l.base().clone(), loci))
}

/// The spans of the first `n_l` and the last `n_r` basis vectors meet only
/// in zero.
pub fn disjoint(n_l: usize, n_r: usize) -> bool {
    let n = n_l + n_r;
    let left = Subspace::coordinate(n, &(0..n_l).collect::<Vec<_>>());
    let right = Subspace::coordinate(n, &(n_l..n).collect::<Vec<_>>());
    left.intersection(&right).rank() == 0
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gamma::{delta, Config};
    use crate::poly::Budget;
    use crate::variety::BaseConstants;

    #[test]
    fn amalgams_add_delta() {
        let b = Budget::default();
        let a0 = Arc::new(BasePresentation::rational());
        let curve = GammaPresentation::parse(a0.clone(), 1, &["y1 - x1 - 1"], 3, &b).unwrap();
        let gen = GammaPresentation::generic(a0.clone(), 1);
        let cc = free_amalgam(&a0, &curve, &curve).unwrap();
        assert_eq!(cc.n(), 2);
        assert_eq!(delta(&cc, None, &b).unwrap(), 0);
        assert_eq!(cc.locus().dim(&b).unwrap(), 2);
        let gc = free_amalgam(&a0, &gen, &curve).unwrap();
        assert_eq!(delta(&gc, None, &b).unwrap(), 1);
        let t = free_amalgam(&a0, &GammaPresentation::trivial(a0.clone()), &curve).unwrap();
        assert_eq!(
            t.ideal_strings(&b).unwrap(),
            curve.ideal_strings(&b).unwrap()
        );
        assert!(disjoint(1, 1) && disjoint(0, 3));
    }

    #[test]
    fn bases_must_agree() {
        let a0 = BasePresentation::rational();
        let other = Arc::new(
            BasePresentation::new(
                Config::default(),
                BaseConstants::new(&[("s".into(), "s^2 - 2".into())]).unwrap(),
                &[],
            )
            .unwrap(),
        );
        let g = GammaPresentation::generic(other, 1);
        assert!(matches!(
            free_amalgam(&a0, &g, &g),
            Err(AmalgamError::Gamma(GammaError::BaseMismatch))
        ));
    }
}
