use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GammaError;
use crate::poly::{parse_poly, Budget, GroebnerBasis, MonomialOrder, Poly, PolyError};
use crate::variety::BaseConstants;

/// The fixed ambient setting: `G = Ga × Gm`, endomorphisms `Z`, case DEQ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub d: u32,
    pub case: String,
    pub ground: String,
}

pub const GROUND: &str = "Ga x Gm over Q, O = Z";

/// Group dimension `d`, kept symbolic in formulas.
pub const D: i64 = 1;

impl Default for Config {
    fn default() -> Self {
        Config {
            d: 1,
            case: "DEQ".into(),
            ground: GROUND.into(),
        }
    }
}

impl Config {
    pub fn check(&self) -> Result<(), GammaError> {
        if self.d != 1 {
            return Err(GammaError::UnsupportedConfig(format!(
                "d = {} (only d = 1)",
                self.d
            )));
        }
        if self.case != "DEQ" {
            return Err(GammaError::UnsupportedConfig(format!(
                "case {} (only DEQ)",
                self.case
            )));
        }
        let g = self.ground.to_ascii_lowercase();
        if !(g.contains("ga") && g.contains("gm")) {
            return Err(GammaError::UnsupportedConfig(format!(
                "ground '{}' (only Ga x Gm over Z)",
                self.ground
            )));
        }
        Ok(())
    }
}

/// Which kernel a declared element generates, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelTag {
    Ker1,
    Ker2,
}

/// A declared point `(x, y)` of `Γ(base)`, coordinates written in the
/// constant names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    pub x: String,
    pub y: String,
    pub kernel: Option<KernelTag>,
    px: Poly,
    py: Poly,
}

impl GammaElement {
    pub fn x_poly(&self) -> &Poly {
        &self.px
    }

    pub fn y_poly(&self) -> &Poly {
        &self.py
    }
}

/// A finitely presented base Γ-field: algebraic constants and declared
/// Γ-points.
#[derive(Clone, Debug)]
pub struct BasePresentation {
    config: Config,
    constants: Arc<BaseConstants>,
    gamma: Vec<GammaElement>,
    basis: Arc<GroebnerBasis>,
}

impl PartialEq for BasePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.constants == other.constants
            && self.gamma == other.gamma
    }
}

impl BasePresentation {
    /// The base `Q` with only torsion in `Γ`.
    pub fn rational() -> Self {
        Self::new(Config::default(), BaseConstants::rational(), &[])
            .expect("rational base is valid")
    }

    pub fn new(
        config: Config,
        constants: BaseConstants,
        gamma: &[(String, String, Option<KernelTag>)],
    ) -> Result<Self, GammaError> {
        config.check()?;
        let names = constants.names().to_vec();
        let basis = Arc::new(GroebnerBasis::compute(
            constants.ideal().generators(),
            names.len(),
            MonomialOrder::GrevLex,
            &Budget::default(),
        )?);
        if basis.is_unit() {
            return Err(GammaError::Invalid(
                "base constants are inconsistent".into(),
            ));
        }
        let mut elems = Vec::new();
        for (x, y, kernel) in gamma {
            let px = parse_poly(x, &names)?;
            let py = parse_poly(y, &names)?;
            elems.push(GammaElement {
                x: x.clone(),
                y: y.clone(),
                kernel: *kernel,
                px,
                py,
            });
        }
        let base = BasePresentation {
            config,
            constants: Arc::new(constants),
            gamma: elems,
            basis,
        };
        base.check_kernels()?;
        Ok(base)
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn constants(&self) -> &Arc<BaseConstants> {
        &self.constants
    }

    pub fn gamma_elements(&self) -> &[GammaElement] {
        &self.gamma
    }

    fn check_kernels(&self) -> Result<(), GammaError> {
        for g in &self.gamma {
            let x_zero = self.is_zero(&g.px);
            let y_one = self.is_zero(&(&g.py - &Poly::one(g.py.nvars())));
            if self.is_zero(&g.py) {
                return Err(GammaError::Invalid(format!(
                    "declared point ({}, {}) has y = 0",
                    g.x, g.y
                )));
            }
            if x_zero && !y_one && g.kernel != Some(KernelTag::Ker2) {
                return Err(GammaError::Invalid(format!(
                    "declared point ({}, {}) lies in the second kernel but is not tagged ker2",
                    g.x, g.y
                )));
            }
            if y_one && !x_zero && g.kernel != Some(KernelTag::Ker1) {
                return Err(GammaError::Invalid(format!(
                    "declared point ({}, {}) lies in the first kernel but is not tagged ker1",
                    g.x, g.y
                )));
            }
        }
        Ok(())
    }

    /// `p ≡ 0` in the base, for `p` in the constant ring.
    pub fn is_zero(&self, p: &Poly) -> bool {
        self.basis.contains(p)
    }

    fn is_torsion_ratio(&self, num: &Poly, den: &Poly) -> bool {
        // (num/den)^m = 1 for some small m
        let mut a = num.clone();
        let mut b = den.clone();
        for _ in 1..=MAX_TORSION_ORDER {
            if self.is_zero(&(&a - &b)) {
                return true;
            }
            a = &a * num;
            b = &b * den;
        }
        false
    }

    /// Classifies a pair of base elements found in `Γ` of an extension:
    /// `None` when it already lies in `Γ(base)` (torsion, or a bounded
    /// multiple of a declared point times torsion), otherwise the violated
    /// clause.
    pub fn violated_clause(&self, c1: &Poly, c2: &Poly, mult_bound: i64) -> Option<&'static str> {
        let k = c1.nvars();
        let one = Poly::one(k);
        let x_zero = self.is_zero(c1);
        if x_zero && self.is_torsion_ratio(c2, &one) {
            return None;
        }
        for g in &self.gamma {
            for m in (-mult_bound..=mult_bound).filter(|&m| m != 0) {
                let scaled = g.px.scale(&crate::linalg::Rational::from_integer(m.into()));
                if !self.is_zero(&(c1 - &scaled)) {
                    continue;
                }
                let p = g.py.pow(m.unsigned_abs() as u32);
                let hit = if m > 0 {
                    self.is_torsion_ratio(c2, &p)
                } else {
                    self.is_torsion_ratio(&(c2 * &p), &one)
                };
                if hit {
                    return None;
                }
            }
        }
        if x_zero {
            Some("ker2")
        } else if self.is_torsion_ratio(c2, &one) {
            Some("ker1")
        } else {
            Some("base-gamma")
        }
    }
}

/// Largest root-of-unity order tested when recognising torsion.
pub const MAX_TORSION_ORDER: u32 = 24;

impl From<PolyError> for GammaError {
    fn from(e: PolyError) -> Self {
        GammaError::Variety(e.into())
    }
}
