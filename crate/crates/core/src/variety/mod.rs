//! Subvarieties of `G^n = (Ga × Gm)^n` over a finitely presented base.
//!
//! The coordinate ring of a presentation with `n` blocks and `k` base
//! constants has variables `x1..xn, y1..yn, c1..ck` in that order. Base
//! constants are algebraic numbers given by their minimal polynomials, which
//! are adjoined to every ideal.

mod freeness;
mod image;
mod tangent;

use std::sync::{Arc, OnceLock};

use crate::poly::{
    ideal_dim, parse_poly, saturate, Budget, GroebnerBasis, Ideal, MonomialOrder, Poly, PolyError,
};

pub use freeness::{FreenessReport, LinearRelation, MonomialRelation};
pub use tangent::TangentProbe;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error("the variety is empty (saturated ideal is the unit ideal)")]
    EmptyVariety,
    #[error("matrix has {got} columns, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Named algebraic constants of the base field.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BaseConstants {
    names: Vec<String>,
    minpolys: Vec<String>,
    parsed: Vec<Poly>,
}

impl BaseConstants {
    pub fn rational() -> Self {
        Self::default()
    }

    /// Each constant is a root of its minimal polynomial, written in the
    /// constant names.
    pub fn new(constants: &[(String, String)]) -> Result<Self, PolyError> {
        let names: Vec<String> = constants.iter().map(|(n, _)| n.clone()).collect();
        let parsed = constants
            .iter()
            .map(|(_, p)| parse_poly(p, &names))
            .collect::<Result<Vec<_>, _>>()?;
        let minpolys = constants.iter().map(|(_, p)| p.clone()).collect();
        Ok(BaseConstants {
            names,
            minpolys,
            parsed,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn minpolys(&self) -> &[String] {
        &self.minpolys
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Minimal polynomials moved into a ring whose last `len()` variables are
    /// the constants.
    pub(crate) fn lifted(&self, nvars: usize) -> Vec<Poly> {
        let k = self.len();
        let map: Vec<Option<usize>> = (0..k).map(|i| Some(nvars - k + i)).collect();
        self.parsed.iter().map(|p| p.remap(nvars, &map)).collect()
    }

    /// The ideal of the constants alone.
    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.names.clone(), self.parsed.clone())
    }
}

/// Standard variable names for `n` blocks followed by the constants.
pub fn ring_names(n: usize, consts: &BaseConstants) -> Vec<String> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.extend((1..=n).map(|i| format!("y{i}")));
    names.extend(consts.names().iter().cloned());
    names
}

/// An ideal in the coordinate ring of `G^n` over the base, saturated by the
/// product of the multiplicative coordinates.
#[derive(Clone, Debug)]
pub struct VarietyPresentation {
    n: usize,
    consts: Arc<BaseConstants>,
    ideal: Ideal,
    irreducible_asserted: bool,
    cache: Arc<Derived>,
}

/// Lazily computed data shared between clones.
#[derive(Debug, Default)]
struct Derived {
    dim: OnceLock<usize>,
    probe: OnceLock<Option<TangentProbe>>,
    extra_probes: OnceLock<Vec<TangentProbe>>,
    inverse: OnceLock<Ideal>,
}

impl VarietyPresentation {
    /// Builds from generators in the ring `ring_names(n, consts)`-shaped ring
    /// (any names, same layout). Saturates and rejects the empty variety.
    pub fn new(
        n: usize,
        consts: Arc<BaseConstants>,
        names: Vec<String>,
        gens: Vec<Poly>,
        irreducible_asserted: bool,
        budget: &Budget,
    ) -> Result<Self, VarietyError> {
        let nvars = 2 * n + consts.len();
        assert_eq!(names.len(), nvars, "ring layout mismatch");
        let mut all = gens;
        all.extend(consts.lifted(nvars));
        let raw = Ideal::new(names, all);
        let touches_y = raw.generators().iter().any(|g| {
            let s = g.support();
            s[n..2 * n].iter().any(|&b| b)
        });
        let ideal = if n > 0 && touches_y {
            let prod = (n..2 * n).fold(Poly::one(nvars), |acc, j| &acc * &Poly::var(nvars, j));
            saturate(&raw, &prod, budget)?
        } else {
            raw
        };
        let v = VarietyPresentation {
            n,
            consts,
            ideal,
            irreducible_asserted,
            cache: Arc::default(),
        };
        if v.basis(budget)?.is_unit() {
            return Err(VarietyError::EmptyVariety);
        }
        Ok(v)
    }

    /// Parses generator strings in the standard ring.
    pub fn parse(
        n: usize,
        consts: Arc<BaseConstants>,
        gens: &[impl AsRef<str>],
        budget: &Budget,
    ) -> Result<Self, VarietyError> {
        let names = ring_names(n, &consts);
        let polys = gens
            .iter()
            .map(|g| parse_poly(g.as_ref(), &names))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, consts, names, polys, true, budget)
    }

    /// All of `G^n`.
    pub fn generic(n: usize, consts: Arc<BaseConstants>) -> Self {
        let names = ring_names(n, &consts);
        let nvars = names.len();
        let ideal = Ideal::new(names, consts.lifted(nvars));
        VarietyPresentation {
            n,
            consts,
            ideal,
            irreducible_asserted: true,
            cache: Arc::default(),
        }
    }

    /// Wraps an ideal that is already saturated.
    pub(crate) fn from_saturated(
        n: usize,
        consts: Arc<BaseConstants>,
        ideal: Ideal,
        irreducible_asserted: bool,
    ) -> Self {
        VarietyPresentation {
            n,
            consts,
            ideal,
            irreducible_asserted,
            cache: Arc::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.ideal.nvars()
    }

    pub fn consts(&self) -> &Arc<BaseConstants> {
        &self.consts
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn irreducible_asserted(&self) -> bool {
        self.irreducible_asserted
    }

    pub fn names(&self) -> &[String] {
        self.ideal.names()
    }

    /// Order used for normal forms: coordinates eliminate before constants, so
    /// base elements keep normal forms in the constants alone.
    pub fn order(&self) -> MonomialOrder {
        if self.consts.is_empty() {
            MonomialOrder::GrevLex
        } else {
            MonomialOrder::Block { split: 2 * self.n }
        }
    }

    pub fn basis(&self, budget: &Budget) -> Result<Arc<GroebnerBasis>, PolyError> {
        self.ideal.groebner(self.order(), budget)
    }

    /// Dimension relative to the base.
    pub fn dim(&self, budget: &Budget) -> Result<usize, VarietyError> {
        if let Some(&d) = self.cache.dim.get() {
            return Ok(d);
        }
        self.basis(budget)?;
        // constants are algebraic, so they contribute nothing
        let total = ideal_dim(&self.ideal, budget).map_err(|e| match e {
            PolyError::DimensionOfUnitIdeal => VarietyError::EmptyVariety,
            other => other.into(),
        })?;
        let _ = self.cache.dim.set(total);
        Ok(total)
    }

    /// Generators of the saturated ideal, without the constant relations,
    /// rendered as strings.
    pub fn generator_strings(&self, budget: &Budget) -> Result<Vec<String>, PolyError> {
        let gb = self.basis(budget)?;
        let coord = self.coordinate_mask();
        Ok(gb
            .polys()
            .iter()
            .filter(|p| p.support().iter().zip(&coord).any(|(a, b)| *a && *b))
            .map(|p| {
                p.primitive(self.order())
                    .to_string_with(self.names(), self.order())
            })
            .collect())
    }

    /// `true` at coordinate (non-constant) variables.
    pub(crate) fn coordinate_mask(&self) -> Vec<bool> {
        (0..self.nvars()).map(|v| v < 2 * self.n).collect()
    }

    /// The product `self × other` with `other`'s blocks appended.
    pub fn product(&self, other: &VarietyPresentation) -> VarietyPresentation {
        assert_eq!(self.consts, other.consts, "products need a common base");
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let names = ring_names(n, &self.consts);
        let nvars = names.len();
        let k = self.consts.len();
        let map_a: Vec<Option<usize>> = (0..2 * a + k)
            .map(|v| {
                Some(if v < a {
                    v
                } else if v < 2 * a {
                    v - a + n
                } else {
                    v - 2 * a + 2 * n
                })
            })
            .collect();
        let map_b: Vec<Option<usize>> = (0..2 * b + k)
            .map(|v| {
                Some(if v < b {
                    v + a
                } else if v < 2 * b {
                    v - b + n + a
                } else {
                    v - 2 * b + 2 * n
                })
            })
            .collect();
        let mut gens: Vec<Poly> = self
            .ideal
            .generators()
            .iter()
            .map(|g| g.remap(nvars, &map_a))
            .collect();
        gens.extend(
            other
                .ideal
                .generators()
                .iter()
                .map(|g| g.remap(nvars, &map_b)),
        );
        gens.sort_by(|p, q| p.terms().cmp(q.terms()));
        gens.dedup();
        let out = VarietyPresentation {
            n,
            consts: self.consts.clone(),
            ideal: Ideal::new(names, gens),
            irreducible_asserted: self.irreducible_asserted && other.irreducible_asserted,
            cache: Arc::default(),
        };
        if let (Some(da), Some(db)) = (self.cache.dim.get(), other.cache.dim.get()) {
            let _ = out.cache.dim.set(da + db);
        }
        if let (Some(Some(pa)), Some(Some(pb))) = (self.cache.probe.get(), other.cache.probe.get())
        {
            out.set_tangent_probe(Some(pa.product(pb)));
        }
        out
    }

    /// Keeps the blocks listed in `blocks` (in that order) and projects away
    /// the others.
    pub fn project(
        &self,
        blocks: &[usize],
        budget: &Budget,
    ) -> Result<VarietyPresentation, VarietyError> {
        let n = self.n;
        let k = self.consts.len();
        let elim: Vec<usize> = (0..n)
            .filter(|j| !blocks.contains(j))
            .flat_map(|j| [j, j + n])
            .collect();
        // move kept blocks into the requested order before eliminating
        let m = blocks.len();
        let mut map = vec![None; self.nvars()];
        let mut next = 0;
        for &j in &elim {
            map[j] = Some(next);
            next += 1;
        }
        for (i, &j) in blocks.iter().enumerate() {
            map[j] = Some(next + i);
            map[j + n] = Some(next + m + i);
        }
        for c in 0..k {
            map[2 * n + c] = Some(next + 2 * m + c);
        }
        let mut names = vec![String::new(); self.nvars()];
        for (v, slot) in map.iter().enumerate() {
            names[slot.expect("total map")] = self.names()[v].clone();
        }
        let gens: Vec<Poly> = self
            .ideal
            .generators()
            .iter()
            .map(|g| g.remap(self.nvars(), &map))
            .collect();
        let moved = Ideal::new(names, gens);
        let elim_idx: Vec<usize> = (0..elim.len()).collect();
        let projected = crate::poly::eliminate(&moved, &elim_idx, budget)?;
        let renamed = Ideal::new(ring_names(m, &self.consts), projected.generators().to_vec());
        Ok(VarietyPresentation::from_saturated(
            m,
            self.consts.clone(),
            renamed,
            self.irreducible_asserted,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<BaseConstants> {
        Arc::new(BaseConstants::rational())
    }

    #[test]
    fn dimensions_of_spec_examples() {
        let b = Budget::default();
        assert_eq!(VarietyPresentation::generic(1, q()).dim(&b).unwrap(), 2);
        assert_eq!(
            VarietyPresentation::parse(1, q(), &["y1 - x1 - 1"], &b)
                .unwrap()
                .dim(&b)
                .unwrap(),
            1
        );
        assert_eq!(
            VarietyPresentation::parse(2, q(), &["x2 - x1", "y2 - y1"], &b)
                .unwrap()
                .dim(&b)
                .unwrap(),
            2
        );
    }

    #[test]
    fn saturation_removes_torus_boundary() {
        let b = Budget::default();
        let v = VarietyPresentation::parse(2, q(), &["x1*y1", "x2 - 1"], &b).unwrap();
        let x1 = parse_poly("x1", v.names()).unwrap();
        assert!(v.ideal().contains(&x1, &b).unwrap());
        assert!(matches!(
            VarietyPresentation::parse(1, q(), &["y1^2"], &b),
            Err(VarietyError::EmptyVariety)
        ));
    }

    #[test]
    fn constants_are_adjoined() {
        let b = Budget::default();
        let c = Arc::new(BaseConstants::new(&[("s".into(), "s^2 - 2".into())]).unwrap());
        let v = VarietyPresentation::parse(1, c, &["x1 - s"], &b).unwrap();
        assert_eq!(v.dim(&b).unwrap(), 1);
        let f = parse_poly("x1^2 - 2", v.names()).unwrap();
        assert!(v.ideal().contains(&f, &b).unwrap());
    }

    #[test]
    fn product_and_projection() {
        let b = Budget::default();
        let curve = VarietyPresentation::parse(1, q(), &["y1 - x1 - 1"], &b).unwrap();
        let g = VarietyPresentation::generic(1, q());
        let p = g.product(&curve);
        assert_eq!(p.n(), 2);
        assert_eq!(p.dim(&b).unwrap(), 3);
        let f = parse_poly("y2 - x2 - 1", p.names()).unwrap();
        assert!(p.ideal().contains(&f, &b).unwrap());
        let back = p.project(&[1], &b).unwrap();
        let f = parse_poly("y1 - x1 - 1", back.names()).unwrap();
        assert!(back.ideal().contains(&f, &b).unwrap());
        assert_eq!(back.dim(&b).unwrap(), 1);
    }
}
