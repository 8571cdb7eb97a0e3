use std::sync::Arc;

use num_traits::ToPrimitive;

use super::{BasePresentation, GammaError};
use crate::poly::{Budget, MonomialOrder, Poly};
use crate::variety::{FreenessReport, LinearRelation, MonomialRelation, VarietyPresentation};

/// One factor of a free product: a locus on the blocks
/// `offset .. offset + locus.n()`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub offset: usize,
    pub locus: VarietyPresentation,
}

/// A finitely generated kernel-preserving extension of a base, given by the
/// locus of a basis `b_1..b_n`. The locus is kept as a product of factors
/// whenever it arose as a free amalgam.
#[derive(Clone, Debug)]
pub struct GammaPresentation {
    base: Arc<BasePresentation>,
    n: usize,
    locus: VarietyPresentation,
    factors: Vec<Factor>,
}

impl GammaPresentation {
    /// The empty extension.
    pub fn trivial(base: Arc<BasePresentation>) -> Self {
        let locus = VarietyPresentation::generic(0, base.constants().clone());
        GammaPresentation {
            base,
            n: 0,
            locus,
            factors: Vec::new(),
        }
    }

    /// A generic point of `G^n`.
    pub fn generic(base: Arc<BasePresentation>, n: usize) -> Self {
        let one = VarietyPresentation::generic(1, base.constants().clone());
        Self::from_factors(base, vec![one; n])
    }

    /// Validated presentation with a single-factor locus.
    pub fn new(
        base: Arc<BasePresentation>,
        locus: VarietyPresentation,
        bound: u64,
        budget: &Budget,
    ) -> Result<Self, GammaError> {
        let p = Self::new_unchecked(base, locus)?;
        p.validate(bound, budget)?;
        Ok(p)
    }

    /// Skips kernel-preservation validation. Used to build deliberately
    /// invalid examples.
    pub fn new_unchecked(
        base: Arc<BasePresentation>,
        locus: VarietyPresentation,
    ) -> Result<Self, GammaError> {
        if locus.consts() != base.constants() {
            return Err(GammaError::BaseMismatch);
        }
        let n = locus.n();
        let factors = if n == 0 {
            Vec::new()
        } else {
            vec![Factor {
                offset: 0,
                locus: locus.clone(),
            }]
        };
        Ok(GammaPresentation {
            base,
            n,
            locus,
            factors,
        })
    }

    pub fn parse(
        base: Arc<BasePresentation>,
        n: usize,
        gens: &[impl AsRef<str>],
        bound: u64,
        budget: &Budget,
    ) -> Result<Self, GammaError> {
        let locus = VarietyPresentation::parse(n, base.constants().clone(), gens, budget)?;
        Self::new(base, locus, bound, budget)
    }

    /// Free product of factor loci, in order.
    pub fn from_factors(base: Arc<BasePresentation>, loci: Vec<VarietyPresentation>) -> Self {
        let mut out = Self::trivial(base);
        for l in loci {
            if l.n() == 0 {
                continue;
            }
            out.locus = if out.n == 0 {
                l.clone()
            } else {
                out.locus.product(&l)
            };
            out.factors.push(Factor {
                offset: out.n,
                locus: l.clone(),
            });
            out.n += l.n();
        }
        out
    }

    pub fn base(&self) -> &Arc<BasePresentation> {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn locus(&self) -> &VarietyPresentation {
        &self.locus
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Product of the listed factors.
    pub fn sub_locus(&self, factor_ids: &[usize]) -> VarietyPresentation {
        let mut it = factor_ids.iter();
        let first = it.next().expect("at least one factor");
        let mut acc = self.factors[*first].locus.clone();
        for &i in it {
            acc = acc.product(&self.factors[i].locus);
        }
        acc
    }

    /// Kernel preservation, checked factor by factor: no primitive `r` with
    /// `‖r‖∞ ≤ bound` makes both `Σ r_j x_j` and `∏ y_j^{r_j}` base elements,
    /// unless the pair lies in `Γ(base)`. Relations on a product split over
    /// its factors, so this covers the whole locus.
    pub fn validate(&self, bound: u64, budget: &Budget) -> Result<(), GammaError> {
        let k = self.base.constants().len();
        for f in &self.factors {
            let v = &f.locus;
            let lin = v.linear_relation_space(budget)?;
            if lin.rank() == 0 {
                continue;
            }
            let both = lin.intersection(&v.monomial_candidate_space(budget));
            if both.rank() == 0 {
                continue;
            }
            for r in both.bounded_primitive_vectors(bound) {
                let Some(c2) = v.monomial_constant(&r, budget)? else {
                    continue;
                };
                let c1 = v
                    .linear_constant(&r, budget)?
                    .expect("r lies in the relation lattice");
                let (c1, c2) = (to_constants(&c1, k), to_constants(&c2, k));
                if let Some(clause) = self.base.violated_clause(&c1, &c2, bound as i64) {
                    let mut global = vec![0i64; self.n];
                    for (j, e) in r.iter().enumerate() {
                        global[f.offset + j] = e.to_i64().expect("bounded");
                    }
                    return Err(GammaError::KernelViolation {
                        clause: clause.to_string(),
                        r: global,
                        x: c1.to_string_with(self.base.constants().names(), MonomialOrder::GrevLex),
                        y: c2.to_string_with(self.base.constants().names(), MonomialOrder::GrevLex),
                    });
                }
            }
        }
        Ok(())
    }

    /// Freeness of the whole locus, decided factor by factor; witnesses are
    /// reported in global coordinates.
    pub fn freeness(&self, g2_bound: u64, budget: &Budget) -> Result<FreenessReport, GammaError> {
        for f in &self.factors {
            let rep = f.locus.freeness(g2_bound, budget)?;
            if rep.is_free() {
                continue;
            }
            let widen = |r: &[i64]| {
                let mut g = vec![0i64; self.n];
                g[f.offset..f.offset + r.len()].copy_from_slice(r);
                g
            };
            return Ok(FreenessReport {
                g1_witness: rep.g1_witness.map(|w| LinearRelation {
                    r: widen(&w.r),
                    c: w.c,
                }),
                g2_witness: rep.g2_witness.map(|w| MonomialRelation {
                    r: widen(&w.r),
                    c: w.c,
                }),
                ..rep
            });
        }
        Ok(FreenessReport {
            g1_free: true,
            g1_witness: None,
            g2_free: true,
            g2_witness: None,
            g2_search_bound: g2_bound,
        })
    }

    /// Generators of the locus ideal as strings, factor by factor in global
    /// coordinates.
    pub fn ideal_strings(&self, budget: &Budget) -> Result<Vec<String>, GammaError> {
        Ok(self.locus.generator_strings(budget)?)
    }
}

/// Moves a polynomial that only involves the trailing `k` constant variables
/// into the constant ring.
pub(crate) fn to_constants(p: &Poly, k: usize) -> Poly {
    let off = p.nvars() - k;
    let map: Vec<Option<usize>> = (0..p.nvars()).map(|v| v.checked_sub(off)).collect();
    p.remap(k, &map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{Config, KernelTag};
    use crate::variety::BaseConstants;

    fn q() -> Arc<BasePresentation> {
        Arc::new(BasePresentation::rational())
    }

    #[test]
    fn curve_validates() {
        let b = Budget::default();
        let p = GammaPresentation::parse(q(), 1, &["y1 - x1 - 1"], 3, &b).unwrap();
        assert_eq!(p.n(), 1);
        assert_eq!(p.factors().len(), 1);
    }

    #[test]
    fn diagonal_is_allowed_by_kernel_check() {
        let b = Budget::default();
        // r = (1,-1) gives the identity element (0, 1)
        assert!(GammaPresentation::parse(q(), 2, &["x2 - x1", "y2 - y1"], 3, &b).is_ok());
    }

    #[test]
    fn kernel_violations_are_named() {
        let b = Budget::default();
        let err = GammaPresentation::parse(q(), 1, &["x1", "y1 - 3"], 3, &b).unwrap_err();
        assert!(
            matches!(err, GammaError::KernelViolation { ref clause, .. } if clause == "ker2"),
            "{err:?}"
        );
        let err = GammaPresentation::parse(q(), 1, &["x1 - 2", "y1 - 1"], 3, &b).unwrap_err();
        assert!(matches!(err, GammaError::KernelViolation { ref clause, .. } if clause == "ker1"));
        let err = GammaPresentation::parse(q(), 1, &["x1 - 1", "y1 - 3"], 3, &b).unwrap_err();
        assert!(
            matches!(err, GammaError::KernelViolation { ref clause, .. } if clause == "base-gamma")
        );
        // torsion is already in the base
        assert!(GammaPresentation::parse(q(), 1, &["x1", "y1 + 1"], 3, &b).is_ok());
    }

    #[test]
    fn declared_points_are_allowed() {
        let b = Budget::default();
        let base = Arc::new(
            BasePresentation::new(
                Config::default(),
                BaseConstants::rational(),
                &[("1".into(), "3".into(), None)],
            )
            .unwrap(),
        );
        assert!(GammaPresentation::parse(base.clone(), 1, &["x1 - 1", "y1 - 3"], 3, &b).is_ok());
        assert!(GammaPresentation::parse(base.clone(), 1, &["x1 + 2", "y1*9 - 1"], 3, &b).is_ok());
        let base2 = Arc::new(
            BasePresentation::new(
                Config::default(),
                BaseConstants::rational(),
                &[("0".into(), "5".into(), Some(KernelTag::Ker2))],
            )
            .unwrap(),
        );
        assert!(GammaPresentation::parse(base2, 1, &["x1", "y1 - 5"], 3, &b).is_ok());
    }

    #[test]
    fn factor_witnesses_are_global() {
        let b = Budget::default();
        let g = VarietyPresentation::generic(1, q().constants().clone());
        let bad = VarietyPresentation::parse(2, q().constants().clone(), &["x1 + x2"], &b).unwrap();
        let p = GammaPresentation::from_factors(q(), vec![g, bad]);
        let rep = p.freeness(2, &b).unwrap();
        assert_eq!(rep.g1_witness.unwrap().r, vec![0, 1, 1]);
    }
}
