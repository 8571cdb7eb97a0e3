use std::fmt;

use serde::{Serialize, Serializer};

use super::{GammaError, GammaPresentation, Predim, D};
use crate::linalg::Subspace;
use crate::par;
use crate::poly::Budget;

/// Outcome of a bounded rotundity sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotRotund,
    RotundUpTo(u64),
    StronglyRotundUpTo(u64),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotRotund => write!(f, "NotRotund"),
            Verdict::RotundUpTo(h) => write!(f, "RotundUpTo({h})"),
            Verdict::StronglyRotundUpTo(h) => write!(f, "StronglyRotundUpTo({h})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A failing matrix `M` (HNF, padded to `n × n`) with `dim(M·V)` and `rk M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub matrix: Vec<Vec<i64>>,
    pub image_dim: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotundityReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub bound: u64,
    pub subspaces_checked: usize,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub height: u64,
    pub skip_freeness: bool,
    pub g2_bound: u64,
    pub budget: Budget,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            height: 3,
            skip_freeness: false,
            g2_bound: 4,
            budget: Budget::default(),
        }
    }
}

impl SweepOptions {
    pub fn with_height(height: u64) -> Self {
        SweepOptions {
            height,
            ..Self::default()
        }
    }
}

fn witness(w: &Subspace, image_dim: usize) -> Witness {
    Witness {
        matrix: w.padded().to_i64_rows().expect("bounded entries"),
        image_dim,
        rank: w.rank(),
    }
}

/// First subspace (rank, then canonical order) with `δ(W) < 0`, or `≤ 0`
/// when `strict`.
pub(crate) fn first_failure(
    pd: &Predim<'_>,
    subspaces: &[Subspace],
    strict: bool,
) -> Result<Option<Witness>, GammaError> {
    let fails = |v: i64| if strict { v <= 0 } else { v < 0 };
    let hit = par::find_first_map(subspaces, |w| {
        let check = || -> Result<Option<Witness>, GammaError> {
            let (lo, _) = pd.delta_bounds(w)?;
            if !fails(lo) {
                return Ok(None);
            }
            let d = pd.image_dim(w)?;
            Ok(fails(d as i64 - D * w.rank() as i64).then(|| witness(w, d)))
        };
        match check() {
            Ok(None) => None,
            other => Some(other),
        }
    });
    match hit {
        None => Ok(None),
        Some((_, r)) => r,
    }
}

fn precheck(p: &GammaPresentation, opts: &SweepOptions) -> Result<(), GammaError> {
    if opts.skip_freeness {
        return Ok(());
    }
    let rep = p.freeness(opts.g2_bound, &opts.budget)?;
    if rep.is_free() {
        Ok(())
    } else {
        Err(GammaError::NotFree(Box::new(rep)))
    }
}

/// Strongness over the base, i.e. rotundity of the locus: `dim(M·V) ≥ rk M`
/// for every HNF matrix of height at most `opts.height`.
pub fn is_strong(
    p: &GammaPresentation,
    opts: &SweepOptions,
) -> Result<RotundityReport, GammaError> {
    precheck(p, opts)?;
    let pd = Predim::new(p, &opts.budget);
    rotundity(&pd, opts.height)
}

pub(crate) fn rotundity(pd: &Predim<'_>, height: u64) -> Result<RotundityReport, GammaError> {
    let subs = super::hull::enumerated(pd.presentation().n(), height);
    let w = first_failure(pd, &subs, false)?;
    Ok(RotundityReport {
        verdict: if w.is_some() {
            Verdict::NotRotund
        } else {
            Verdict::RotundUpTo(height)
        },
        witness: w,
        bound: height,
        subspaces_checked: subs.len(),
    })
}

/// `dim(M·V) > rk M` for every nonzero HNF matrix of height at most
/// `opts.height`. On failure the verdict still says whether the locus is
/// rotund.
pub fn is_strongly_rotund(
    p: &GammaPresentation,
    opts: &SweepOptions,
) -> Result<RotundityReport, GammaError> {
    precheck(p, opts)?;
    let pd = Predim::new(p, &opts.budget);
    strong_rotundity(&pd, opts.height)
}

pub(crate) fn strong_rotundity(
    pd: &Predim<'_>,
    height: u64,
) -> Result<RotundityReport, GammaError> {
    let subs = super::hull::enumerated(pd.presentation().n(), height);
    let Some(w) = first_failure(pd, &subs, true)? else {
        return Ok(RotundityReport {
            verdict: Verdict::StronglyRotundUpTo(height),
            witness: None,
            bound: height,
            subspaces_checked: subs.len(),
        });
    };
    let verdict = if w.image_dim < w.rank || first_failure(pd, &subs, false)?.is_some() {
        Verdict::NotRotund
    } else {
        Verdict::RotundUpTo(height)
    };
    Ok(RotundityReport {
        verdict,
        witness: Some(w),
        bound: height,
        subspaces_checked: subs.len(),
    })
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
    fn curve_is_rotund_not_strongly() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 1, &["y1 - x1 - 1"], 3, &b).unwrap();
        let opts = SweepOptions::with_height(3);
        assert_eq!(
            is_strong(&p, &opts).unwrap().verdict,
            Verdict::RotundUpTo(3)
        );
        let s = is_strongly_rotund(&p, &opts).unwrap();
        assert_eq!(s.verdict, Verdict::RotundUpTo(3));
        assert_eq!(s.witness.unwrap().matrix, vec![vec![1]]);
    }

    #[test]
    fn generic_point_is_strongly_rotund() {
        let p = GammaPresentation::generic(q(), 1);
        let opts = SweepOptions::with_height(3);
        assert_eq!(
            is_strong(&p, &opts).unwrap().verdict,
            Verdict::RotundUpTo(3)
        );
        assert_eq!(
            is_strongly_rotund(&p, &opts).unwrap().verdict,
            Verdict::StronglyRotundUpTo(3)
        );
    }

    #[test]
    fn diagonal() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 2, &["x2 - x1", "y2 - y1"], 3, &b).unwrap();
        let opts = SweepOptions::with_height(1);
        assert!(matches!(is_strong(&p, &opts), Err(GammaError::NotFree(_))));
        let rep = is_strong(
            &p,
            &SweepOptions {
                skip_freeness: true,
                ..opts
            },
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::NotRotund);
        let w = rep.witness.unwrap();
        assert_eq!(w.matrix, vec![vec![1, -1], vec![0, 0]]);
        assert_eq!((w.image_dim, w.rank), (0, 1));
    }

    #[test]
    fn verdict_strings() {
        assert_eq!(
            serde_json::to_string(&Verdict::RotundUpTo(3)).unwrap(),
            "\"RotundUpTo(3)\""
        );
        assert_eq!(Verdict::NotRotund.to_string(), "NotRotund");
    }
}
