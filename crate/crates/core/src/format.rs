//! JSON file formats shared by the command line and stage files.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::gamma::{BasePresentation, Config, GammaError, GammaPresentation, KernelTag};
use crate::poly::{parse_poly, Budget, PolyError};
use crate::variety::{ring_names, BaseConstants, VarietyError, VarietyPresentation};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: column {column}: {message}")]
    Poly {
        path: String,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

impl FormatError {
    fn at(path: String, e: PolyError) -> FormatError {
        match e {
            PolyError::Parse { column, message } => FormatError::Poly {
                path,
                column,
                message,
            },
            other => FormatError::Gamma(other.into()),
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<VarietyError> for FormatError {
    fn from(e: VarietyError) -> Self {
        FormatError::Gamma(e.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantSpec {
    pub name: String,
    pub minpoly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub x: String,
    pub y: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelTag>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    #[serde(default)]
    pub constants: Vec<ConstantSpec>,
    #[serde(default)]
    pub gamma_elements: Vec<GammaSpec>,
}

/// A factor locus written in its own coordinates `x1..xm, y1..ym`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub n: usize,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default)]
    pub ideal: Vec<String>,
    #[serde(default = "yes")]
    pub irreducible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorSpec>>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default = "BoundsSpec::matrix_height")]
    pub matrix_height: u64,
    #[serde(default = "BoundsSpec::subspace_height")]
    pub subspace_height: u64,
    #[serde(default = "BoundsSpec::g2_bound")]
    pub g2_bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

impl BoundsSpec {
    fn matrix_height() -> u64 {
        3
    }
    fn subspace_height() -> u64 {
        2
    }
    fn g2_bound() -> u64 {
        4
    }

    pub fn check(&self) -> Result<(), FormatError> {
        if self.matrix_height == 0
            || self.subspace_height == 0
            || self.g2_bound == 0
            || self.budget == Some(0)
        {
            return Err(FormatError::Shape("bounds must be positive".into()));
        }
        Ok(())
    }
}

impl Default for BoundsSpec {
    fn default() -> Self {
        BoundsSpec {
            matrix_height: Self::matrix_height(),
            subspace_height: Self::subspace_height(),
            g2_bound: Self::g2_bound(),
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    #[serde(default)]
    pub config: Config,
    #[serde(default)]
    pub base: BaseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    #[serde(default)]
    pub bounds: BoundsSpec,
}

impl BaseSpec {
    pub fn build(&self, config: &Config) -> Result<BasePresentation, FormatError> {
        config.check()?;
        let pairs: Vec<(String, String)> = self
            .constants
            .iter()
            .map(|c| (c.name.clone(), c.minpoly.clone()))
            .collect();
        for (i, (name, mp)) in pairs.iter().enumerate() {
            parse_poly(mp, std::slice::from_ref(name))
                .map_err(|e| FormatError::at(format!("base.constants[{i}].minpoly"), e))?;
        }
        let consts =
            BaseConstants::new(&pairs).map_err(|e| FormatError::at("base.constants".into(), e))?;
        let names = consts.names().to_vec();
        for (i, g) in self.gamma_elements.iter().enumerate() {
            parse_poly(&g.x, &names)
                .map_err(|e| FormatError::at(format!("base.gamma_elements[{i}].x"), e))?;
            parse_poly(&g.y, &names)
                .map_err(|e| FormatError::at(format!("base.gamma_elements[{i}].y"), e))?;
        }
        let gamma: Vec<(String, String, Option<KernelTag>)> = self
            .gamma_elements
            .iter()
            .map(|g| (g.x.clone(), g.y.clone(), g.kernel))
            .collect();
        Ok(BasePresentation::new(config.clone(), consts, &gamma)?)
    }

    pub fn of(base: &BasePresentation) -> Self {
        let c = base.constants();
        BaseSpec {
            constants: c
                .names()
                .iter()
                .zip(c.minpolys())
                .map(|(name, minpoly)| ConstantSpec {
                    name: name.clone(),
                    minpoly: minpoly.clone(),
                })
                .collect(),
            gamma_elements: base
                .gamma_elements()
                .iter()
                .map(|g| GammaSpec {
                    x: g.x.clone(),
                    y: g.y.clone(),
                    kernel: g.kernel,
                })
                .collect(),
        }
    }
}

fn parse_locus(
    consts: &Arc<BaseConstants>,
    n: usize,
    names: Option<&[String]>,
    ideal: &[String],
    irreducible: bool,
    path: &str,
    budget: &Budget,
) -> Result<VarietyPresentation, FormatError> {
    let mut ring = ring_names(n, consts);
    if let Some(custom) = names {
        if custom.len() != 2 * n {
            return Err(FormatError::Shape(format!(
                "{path}.variables lists {} names, expected {} (x1..xn, y1..yn)",
                custom.len(),
                2 * n
            )));
        }
        ring[..2 * n].clone_from_slice(custom);
    }
    let gens = ideal
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_poly(s, &ring).map_err(|e| FormatError::at(format!("{path}.ideal[{i}]"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let std_names = ring_names(n, consts);
    Ok(VarietyPresentation::new(
        n,
        consts.clone(),
        std_names,
        gens,
        irreducible,
        budget,
    )?)
}

impl ExtensionSpec {
    /// The locus alone, without kernel validation.
    pub fn locus(
        &self,
        consts: &Arc<BaseConstants>,
        budget: &Budget,
    ) -> Result<VarietyPresentation, FormatError> {
        if self.factors.is_some() {
            return Err(FormatError::Shape(
                "a target variety must be given by a single ideal".into(),
            ));
        }
        parse_locus(
            consts,
            self.n,
            self.variables.as_deref(),
            &self.ideal,
            self.irreducible,
            "extension",
            budget,
        )
    }

    /// Builds the presentation; kernel preservation is checked at `bound`.
    pub fn build(
        &self,
        base: Arc<BasePresentation>,
        bound: u64,
        budget: &Budget,
    ) -> Result<GammaPresentation, FormatError> {
        let consts = base.constants().clone();
        let p = match &self.factors {
            Some(fs) => {
                let total: usize = fs.iter().map(|f| f.n).sum();
                if total != self.n {
                    return Err(FormatError::Shape(format!(
                        "factor sizes sum to {total}, expected n = {}",
                        self.n
                    )));
                }
                let loci = fs
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        parse_locus(
                            &consts,
                            f.n,
                            None,
                            &f.ideal,
                            self.irreducible,
                            &format!("extension.factors[{i}]"),
                            budget,
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GammaPresentation::from_factors(base, loci)
            }
            None => {
                let v = parse_locus(
                    &consts,
                    self.n,
                    self.variables.as_deref(),
                    &self.ideal,
                    self.irreducible,
                    "extension",
                    budget,
                )?;
                GammaPresentation::new_unchecked(base, v)?
            }
        };
        p.validate(bound, budget)?;
        Ok(p)
    }

    pub fn of(p: &GammaPresentation, budget: &Budget) -> Result<Self, FormatError> {
        let factors = if p.factors().len() > 1 {
            Some(
                p.factors()
                    .iter()
                    .map(|f| {
                        Ok(FactorSpec {
                            n: f.locus.n(),
                            ideal: f.locus.generator_strings(budget)?,
                        })
                    })
                    .collect::<Result<Vec<_>, PolyError>>()
                    .map_err(|e| FormatError::Gamma(e.into()))?,
            )
        } else {
            None
        };
        Ok(ExtensionSpec {
            n: p.n(),
            variables: None,
            ideal: if factors.is_some() {
                Vec::new()
            } else {
                p.ideal_strings(budget)?
            },
            irreducible: p.locus().irreducible_asserted(),
            factors,
        })
    }
}

impl PresentationFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let f: PresentationFile = serde_json::from_str(text)?;
        f.bounds.check()?;
        Ok(f)
    }

    pub fn base(&self) -> Result<Arc<BasePresentation>, FormatError> {
        Ok(Arc::new(self.base.build(&self.config)?))
    }

    /// The validated extension; a file without one is the trivial extension.
    pub fn presentation(&self, budget: &Budget) -> Result<GammaPresentation, FormatError> {
        let base = self.base()?;
        match &self.extension {
            Some(e) => e.build(base, self.bounds.matrix_height, budget),
            None => Ok(GammaPresentation::trivial(base)),
        }
    }

    pub fn of(
        p: &GammaPresentation,
        bounds: BoundsSpec,
        budget: &Budget,
    ) -> Result<Self, FormatError> {
        Ok(PresentationFile {
            config: p.base().config().clone(),
            base: BaseSpec::of(p.base()),
            extension: Some(ExtensionSpec::of(p, budget)?),
            bounds,
        })
    }
}

/// Serializes with object keys sorted, two-space indentation and a trailing
/// newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}
