use serde::Serialize;

use super::rotund::{rotundity, strong_rotundity, Witness};
use super::{GammaError, GammaPresentation, Predim, SweepOptions, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "detail")]
pub enum Classification {
    Invalid(String),
    NotStrong(Witness),
    StrongGammaAlgebraic,
    StrongMixed,
    PurelyGammaTranscendental,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Invalid(_) => "Invalid",
            Classification::NotStrong(_) => "NotStrong",
            Classification::StrongGammaAlgebraic => "StrongGammaAlgebraic",
            Classification::StrongMixed => "StrongMixed",
            Classification::PurelyGammaTranscendental => "PurelyGammaTranscendental",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub classification: Classification,
    pub delta: i64,
    pub bound: u64,
}

/// Rotundity decides strongness; strong rotundity and `δ = 0` split the
/// strong case.
pub fn classify(
    p: &GammaPresentation,
    opts: &SweepOptions,
) -> Result<ClassificationReport, GammaError> {
    let pd = Predim::new(p, &opts.budget);
    let delta = pd.total()?;
    let report = |classification| {
        Ok(ClassificationReport {
            classification,
            delta,
            bound: opts.height,
        })
    };
    if p.n() == 0 {
        return report(Classification::StrongGammaAlgebraic);
    }
    let rot = rotundity(&pd, opts.height)?;
    if let Some(w) = rot.witness {
        return report(Classification::NotStrong(w));
    }
    if !opts.skip_freeness {
        let free = p.freeness(opts.g2_bound, &opts.budget)?;
        if !free.is_free() {
            let reason = match (&free.g1_witness, &free.g2_witness) {
                (Some(w), _) => format!("additive relation r = {:?} with value {}", w.r, w.c),
                (_, Some(w)) => format!("multiplicative relation r = {:?} with value {}", w.r, w.c),
                _ => unreachable!("non-free report carries a witness"),
            };
            return report(Classification::Invalid(format!(
                "locus is not free: {reason}"
            )));
        }
    }
    if delta == 0 {
        return report(Classification::StrongGammaAlgebraic);
    }
    match strong_rotundity(&pd, opts.height)?.verdict {
        Verdict::StronglyRotundUpTo(_) => report(Classification::PurelyGammaTranscendental),
        _ => report(Classification::StrongMixed),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gamma::BasePresentation;
    use crate::poly::Budget;

    fn q() -> Arc<BasePresentation> {
        Arc::new(BasePresentation::rational())
    }

    fn class(p: &GammaPresentation) -> Classification {
        classify(p, &SweepOptions::with_height(3))
            .unwrap()
            .classification
    }

    #[test]
    fn spec_examples() {
        let b = Budget::default();
        let curve = GammaPresentation::parse(q(), 1, &["y1 - x1 - 1"], 3, &b).unwrap();
        assert_eq!(class(&curve), Classification::StrongGammaAlgebraic);
        assert_eq!(
            class(&GammaPresentation::generic(q(), 1)),
            Classification::PurelyGammaTranscendental
        );
        let diag = GammaPresentation::parse(q(), 2, &["x2 - x1", "y2 - y1"], 3, &b).unwrap();
        assert_eq!(class(&diag).name(), "NotStrong");
    }

    #[test]
    fn mixed_product() {
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
        assert_eq!(class(&p), Classification::StrongMixed);
        assert_eq!(
            class(&GammaPresentation::trivial(q())),
            Classification::StrongGammaAlgebraic
        );
    }
}
