use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::catalog::{enumerate_extensions, Cap, CatalogOptions, Filter};
use super::{free_amalgam, AmalgamError};
use crate::format::{to_canonical_json, BaseSpec, FactorSpec};
use crate::gamma::{BasePresentation, Config, GammaError, GammaPresentation, Predim};
use crate::poly::Budget;
use crate::variety::VarietyPresentation;

/// Where one catalog entry sits inside the stage basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub entry: usize,
    pub n: usize,
    pub ideal: Vec<String>,
    pub columns: Vec<usize>,
    pub delta: i64,
}

#[derive(Clone, Debug)]
pub struct StagePresentation {
    pub current: GammaPresentation,
    pub log: Vec<LogEntry>,
    pub stage: u32,
    pub cap: Cap,
    pub truncated: Option<String>,
}

/// On-disk form of a stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageFile {
    pub format: String,
    pub config: Config,
    pub base: BaseSpec,
    pub stage: u32,
    pub cap: Cap,
    pub n: usize,
    pub factors: Vec<FactorSpec>,
    pub log: Vec<LogEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
    #[serde(default)]
    pub content_hash: String,
}

const STAGE_FORMAT: &str = "gammaforge-stage/1";

/// Stage `k`: every catalog entry at cap `(k, k, k)` amalgamated over the base.
pub fn build_stage(
    a0: &Arc<BasePresentation>,
    k: u32,
    opts: &CatalogOptions,
) -> Result<StagePresentation, AmalgamError> {
    build_stage_with_cap(a0, k, Cap::uniform(k), opts)
}

pub fn build_stage_with_cap(
    a0: &Arc<BasePresentation>,
    stage: u32,
    cap: Cap,
    opts: &CatalogOptions,
) -> Result<StagePresentation, AmalgamError> {
    let catalog = enumerate_extensions(a0, cap, Filter::All, opts)?;
    let mut current = GammaPresentation::trivial(a0.clone());
    let mut log = Vec::new();
    for (i, e) in catalog.entries.iter().enumerate() {
        if e.n() == 0 {
            continue;
        }
        let start = current.n();
        current = free_amalgam(a0, &current, &e.presentation)?;
        log.push(LogEntry {
            entry: i,
            n: e.n(),
            ideal: e.ideal.clone(),
            columns: (start..start + e.n()).collect(),
            delta: e.delta,
        });
    }
    Ok(StagePresentation {
        current,
        log,
        stage,
        cap,
        truncated: catalog.truncated,
    })
}

impl StagePresentation {
    pub fn delta(&self, budget: &Budget) -> Result<i64, AmalgamError> {
        Ok(Predim::new(&self.current, budget).total()?)
    }

    /// Each logged entry re-verifies: projecting the factors its columns
    /// touch onto those columns gives an ideal containing the entry's ideal,
    /// and `δ(current)` is the sum of the logged deltas.
    pub fn verify(&self, budget: &Budget) -> Result<Vec<String>, AmalgamError> {
        let mut problems = Vec::new();
        let factors = self.current.factors();
        for l in &self.log {
            let touched: Vec<usize> = factors
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    l.columns
                        .iter()
                        .any(|&c| c >= f.offset && c < f.offset + f.locus.n())
                })
                .map(|(i, _)| i)
                .collect();
            let offset = factors[touched[0]].offset;
            let sub = self.current.sub_locus(&touched);
            let local: Vec<usize> = l.columns.iter().map(|c| c - offset).collect();
            let projected =
                if local.len() == sub.n() && local.iter().enumerate().all(|(i, &c)| i == c) {
                    sub
                } else {
                    sub.project(&local, budget).map_err(GammaError::from)?
                };
            let entry = if l.ideal.is_empty() {
                VarietyPresentation::generic(l.n, self.current.base().constants().clone())
            } else {
                VarietyPresentation::parse(
                    l.n,
                    self.current.base().constants().clone(),
                    &l.ideal,
                    budget,
                )
                .map_err(GammaError::from)?
            };
            for g in entry.ideal().generators() {
                if !projected
                    .ideal()
                    .contains(g, budget)
                    .map_err(GammaError::from)?
                {
                    problems.push(format!(
                        "entry {} does not embed at columns {:?}",
                        l.entry, l.columns
                    ));
                    break;
                }
            }
        }
        let sum: i64 = self.log.iter().map(|l| l.delta).sum();
        let total = self.delta(budget)?;
        if sum != total {
            problems.push(format!(
                "delta(current) = {total} but the logged deltas sum to {sum}"
            ));
        }
        Ok(problems)
    }

    pub fn to_file(&self, budget: &Budget) -> Result<StageFile, AmalgamError> {
        let factors = self
            .current
            .factors()
            .iter()
            .map(|f| {
                Ok(FactorSpec {
                    n: f.locus.n(),
                    ideal: f
                        .locus
                        .generator_strings(budget)
                        .map_err(GammaError::from)?,
                })
            })
            .collect::<Result<Vec<_>, AmalgamError>>()?;
        let mut file = StageFile {
            format: STAGE_FORMAT.into(),
            config: self.current.base().config().clone(),
            base: BaseSpec::of(self.current.base()),
            stage: self.stage,
            cap: self.cap,
            n: self.current.n(),
            factors,
            log: self.log.clone(),
            truncated: self.truncated.clone(),
            content_hash: String::new(),
        };
        file.content_hash = file.compute_hash();
        Ok(file)
    }

    pub fn to_json(&self, budget: &Budget) -> Result<String, AmalgamError> {
        Ok(to_canonical_json(&self.to_file(budget)?))
    }

    pub fn from_json(text: &str, budget: &Budget) -> Result<Self, AmalgamError> {
        let file: StageFile =
            serde_json::from_str(text).map_err(crate::format::FormatError::from)?;
        file.into_stage(budget)
    }
}

impl StageFile {
    /// SHA-256 of the canonical serialization with an empty hash field.
    pub fn compute_hash(&self) -> String {
        let mut blank = self.clone();
        blank.content_hash.clear();
        hex::encode(Sha256::digest(to_canonical_json(&blank).as_bytes()))
    }

    pub fn into_stage(self, budget: &Budget) -> Result<StagePresentation, AmalgamError> {
        let computed = self.compute_hash();
        if computed != self.content_hash {
            return Err(AmalgamError::HashMismatch {
                stored: self.content_hash,
                computed,
            });
        }
        let base = Arc::new(self.base.build(&self.config)?);
        let loci = self
            .factors
            .iter()
            .map(|f| {
                if f.ideal.is_empty() {
                    Ok(VarietyPresentation::generic(f.n, base.constants().clone()))
                } else {
                    VarietyPresentation::parse(f.n, base.constants().clone(), &f.ideal, budget)
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(GammaError::from)?;
        let current = GammaPresentation::from_factors(base, loci);
        if current.n() != self.n {
            return Err(GammaError::Shape(format!(
                "factor sizes sum to {}, file says n = {}",
                current.n(),
                self.n
            ))
            .into());
        }
        current.validate(self.cap.height_max.max(1), budget)?;
        Ok(StagePresentation {
            current,
            log: self.log,
            stage: self.stage,
            cap: self.cap,
            truncated: self.truncated,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a0() -> Arc<BasePresentation> {
        Arc::new(BasePresentation::rational())
    }

    #[test]
    fn stage_zero_is_trivial() {
        let s = build_stage(&a0(), 0, &CatalogOptions::default()).unwrap();
        assert_eq!(s.current.n(), 0);
        assert!(s.log.is_empty());
    }

    #[test]
    fn stage_one() {
        let b = Budget::default();
        let s = build_stage(&a0(), 1, &CatalogOptions::default()).unwrap();
        assert_eq!(s.current.n(), 4);
        assert_eq!(s.delta(&b).unwrap(), 1);
        assert!(s.log.iter().any(|l| l.ideal.is_empty()));
        assert!(s
            .log
            .iter()
            .any(|l| l.ideal == vec!["x1 - y1 + 1".to_string()]));
        assert!(s.verify(&b).unwrap().is_empty());
    }

    #[test]
    fn serialization_is_deterministic_and_checked() {
        let b = Budget::default();
        let s1 = build_stage(&a0(), 1, &CatalogOptions::default())
            .unwrap()
            .to_json(&b)
            .unwrap();
        let s2 = build_stage(&a0(), 1, &CatalogOptions::default())
            .unwrap()
            .to_json(&b)
            .unwrap();
        assert_eq!(s1, s2);
        let back = StagePresentation::from_json(&s1, &b).unwrap();
        assert_eq!(back.to_json(&b).unwrap(), s1);
        let tampered = s1.replace("\"stage\": 1", "\"stage\": 2");
        assert!(matches!(
            StagePresentation::from_json(&tampered, &b),
            Err(AmalgamError::HashMismatch { .. })
        ));
    }
}
