use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::catalog::permutations;
use super::{AmalgamError, StagePresentation};
use crate::gamma::rotund::rotundity;
use crate::gamma::{GammaError, GammaPresentation, Predim, Verdict, D};
use crate::linalg::{rank, IntMatrix, Rational, Subspace};
use crate::par;
use crate::poly::{Budget, Poly};
use crate::variety::VarietyPresentation;

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    pub height: u64,
    pub g2_bound: u64,
    pub budget: Budget,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            height: 2,
            g2_bound: 4,
            budget: Budget::default(),
        }
    }
}

/// `M · b` twisted by the base torsion points `(0, torsion_i)` lies in `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointWitness {
    pub matrix: Vec<Vec<i64>>,
    pub torsion: Vec<i64>,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_entry: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum GammaPoint {
    Found(PointWitness),
    NotFoundAtStage { searched: usize, bound: u64 },
}

/// Re-verifies a witness: the rows of `M` are independent over the columns
/// `a`, and every equation of `V` vanishes on the (twisted) image of the
/// stage locus.
pub fn verify_point(
    p: &GammaPresentation,
    v: &VarietyPresentation,
    matrix: &[Vec<i64>],
    torsion: &[i64],
    a: &[usize],
    budget: &Budget,
) -> Result<bool, GammaError> {
    let (m, n) = (v.n(), p.n());
    if matrix.len() != m || torsion.len() != m || matrix.iter().any(|r| r.len() != n) {
        return Err(GammaError::Shape(format!(
            "witness must be {m} x {n} with {m} torsion signs"
        )));
    }
    let mut stacked: Vec<Vec<i64>> = matrix.to_vec();
    stacked.extend(
        a.iter()
            .map(|&j| (0..n).map(|c| i64::from(c == j)).collect()),
    );
    if rank(&IntMatrix::from_rows(n, &stacked)) != m + a.len() {
        return Ok(false);
    }
    let Some((sub, local)) = restrict(p, &IntMatrix::from_rows(n, matrix)) else {
        return Ok(false);
    };
    let image = sub.apply_matrix(&local, budget)?;
    let nv = v.nvars();
    let images: Vec<Poly> = (0..nv)
        .map(|j| {
            let var = Poly::var(nv, j);
            if j >= m && j < 2 * m {
                var.scale(&Rational::from_integer(torsion[j - m].into()))
            } else {
                var
            }
        })
        .collect();
    for g in v.ideal().generators() {
        if !image.ideal().contains(&g.substitute(&images), budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Locus of the factors `m` touches and `m` restricted to their columns.
fn restrict(p: &GammaPresentation, m: &IntMatrix) -> Option<(VarietyPresentation, IntMatrix)> {
    let touched: Vec<usize> = p
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            (0..m.rows())
                .any(|i| (f.offset..f.offset + f.locus.n()).any(|j| !m.get(i, j).is_zero()))
        })
        .map(|(i, _)| i)
        .collect();
    if touched.is_empty() {
        return None;
    }
    let cols: Vec<usize> = touched
        .iter()
        .flat_map(|&i| p.factors()[i].offset..p.factors()[i].offset + p.factors()[i].locus.n())
        .collect();
    let mut local = IntMatrix::zeros(m.rows(), cols.len());
    for i in 0..m.rows() {
        for (c, &j) in cols.iter().enumerate() {
            local.set(i, c, m.get(i, j).clone());
        }
    }
    Some((p.sub_locus(&touched), local))
}

fn precheck(
    stage: &StagePresentation,
    v: &VarietyPresentation,
    opts: &WitnessOptions,
) -> Result<(), AmalgamError> {
    let b = &opts.budget;
    let m = v.n();
    let dim = v.dim(b).map_err(GammaError::from)?;
    if dim as i64 != D * m as i64 {
        return Err(AmalgamError::PrecheckFailed(format!(
            "dim V = {dim}, expected d*m = {}",
            D * m as i64
        )));
    }
    let p = GammaPresentation::new_unchecked(stage.current.base().clone(), v.clone())?;
    let free = p.freeness(opts.g2_bound, b)?;
    if !free.is_free() {
        return Err(AmalgamError::PrecheckFailed("V is not free".into()));
    }
    let rot = rotundity(&Predim::new(&p, b), opts.height)?;
    if rot.verdict == Verdict::NotRotund {
        return Err(AmalgamError::PrecheckFailed(format!(
            "V is not rotund: witness {:?}",
            rot.witness
        )));
    }
    Ok(())
}

/// A point of `V` in `Γ` of the stage, independent over the columns `a`:
/// first through the embedding log, then (for curves) by searching rows of
/// height at most `opts.height`.
pub fn find_gamma_point(
    stage: &StagePresentation,
    v: &VarietyPresentation,
    a: &[usize],
    opts: &WitnessOptions,
) -> Result<GammaPoint, AmalgamError> {
    precheck(stage, v, opts)?;
    let b = &opts.budget;
    let p = &stage.current;
    let n = p.n();
    let m = v.n();
    if a.iter().any(|&j| j >= n) {
        return Err(GammaError::Shape(format!(
            "column subset {a:?} exceeds the stage basis length {n}"
        ))
        .into());
    }
    let mut searched = 0;
    for l in stage.log.iter().filter(|l| l.n == m) {
        for perm in permutations(m) {
            for signs in 0..(1u32 << m) {
                searched += 1;
                let matrix: Vec<Vec<i64>> = perm
                    .iter()
                    .map(|&i| (0..n).map(|c| i64::from(c == l.columns[i])).collect())
                    .collect();
                let torsion: Vec<i64> = (0..m)
                    .map(|i| if signs & (1 << i) != 0 { -1 } else { 1 })
                    .collect();
                if verify_point(p, v, &matrix, &torsion, a, b)? {
                    return Ok(GammaPoint::Found(PointWitness {
                        matrix,
                        torsion,
                        source: "log".into(),
                        log_entry: Some(l.entry),
                    }));
                }
            }
        }
    }
    if m == 1 && n > 0 {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for r in Subspace::full(n).bounded_primitive_vectors(opts.height) {
            let neg: Vec<BigInt> = r.iter().map(|x| -x).collect();
            rows.push(r);
            rows.push(neg);
        }
        let cands: Vec<(Vec<i64>, i64)> = rows
            .iter()
            .flat_map(|r| {
                let r: Vec<i64> = r
                    .iter()
                    .map(|x| i64::try_from(x).expect("bounded"))
                    .collect();
                [(r.clone(), 1), (r, -1)]
            })
            .collect();
        searched += cands.len();
        let hit = par::find_first_map(&cands, |(r, s)| {
            let check = || -> Result<bool, GammaError> {
                let mat = IntMatrix::from_rows(n, std::slice::from_ref(r));
                let Some((sub, local)) = restrict(p, &mat) else {
                    return Ok(false);
                };
                let (lo, _) = sub.image_dim_bounds(&local, b)?;
                if lo > D as usize * m {
                    return Ok(false);
                }
                verify_point(p, v, std::slice::from_ref(r), &[*s], a, b)
            };
            match check() {
                Ok(false) => None,
                other => Some(other),
            }
        });
        if let Some((i, res)) = hit {
            res?;
            let (r, s) = &cands[i];
            return Ok(GammaPoint::Found(PointWitness {
                matrix: vec![r.clone()],
                torsion: vec![*s],
                source: "search".into(),
                log_entry: None,
            }));
        }
    }
    Ok(GammaPoint::NotFoundAtStage {
        searched,
        bound: opts.height,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::amalgam::{build_stage, build_stage_with_cap, Cap, CatalogOptions};
    use crate::gamma::BasePresentation;

    fn curve(s: &str, a0: &Arc<BasePresentation>) -> VarietyPresentation {
        VarietyPresentation::parse(1, a0.constants().clone(), &[s], &Budget::default()).unwrap()
    }

    #[test]
    fn curves_in_stage_one() {
        let a0 = Arc::new(BasePresentation::rational());
        let s = build_stage(&a0, 1, &CatalogOptions::default()).unwrap();
        let opts = WitnessOptions::default();
        for eq in ["y1 - x1 - 1", "y1 + x1 + 1", "y1 - x1"] {
            let GammaPoint::Found(w) = find_gamma_point(&s, &curve(eq, &a0), &[], &opts).unwrap()
            else {
                panic!("no point on {eq}");
            };
            assert_eq!(w.source, "log");
            assert!(verify_point(
                &s.current,
                &curve(eq, &a0),
                &w.matrix,
                &w.torsion,
                &[],
                &opts.budget
            )
            .unwrap());
        }
    }

    #[test]
    fn quadratic_curve_needs_a_later_stage() {
        let a0 = Arc::new(BasePresentation::rational());
        let opts = WitnessOptions::default();
        let v = curve("y1 - x1^2 - 1", &a0);
        let s1 = build_stage(&a0, 1, &CatalogOptions::default()).unwrap();
        assert!(matches!(
            find_gamma_point(&s1, &v, &[], &opts).unwrap(),
            GammaPoint::NotFoundAtStage { .. }
        ));
        let cap = Cap {
            n_max: 1,
            deg_max: 2,
            height_max: 1,
        };
        let s2 = build_stage_with_cap(&a0, 2, cap, &CatalogOptions::default()).unwrap();
        assert!(matches!(
            find_gamma_point(&s2, &v, &[], &opts).unwrap(),
            GammaPoint::Found(_)
        ));
    }

    #[test]
    fn precheck_rejects_non_free_targets() {
        let a0 = Arc::new(BasePresentation::rational());
        let s = build_stage(&a0, 1, &CatalogOptions::default()).unwrap();
        let err = find_gamma_point(&s, &curve("x1 - 2", &a0), &[], &WitnessOptions::default())
            .unwrap_err();
        assert!(matches!(err, AmalgamError::PrecheckFailed(_)));
    }
}
