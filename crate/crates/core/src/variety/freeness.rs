use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::VarietyPresentation;
use crate::linalg::{QMatrix, Rational, Subspace};
use crate::poly::{Budget, Ideal, Monomial, MonomialOrder, Poly, PolyError};

/// `Σ r_j x_j = c` on `V`, with `c` a base element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearRelation {
    pub r: Vec<i64>,
    pub c: String,
}

/// `∏ y_j^{r_j} = c` on `V`, with `c` a base element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialRelation {
    pub r: Vec<i64>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub g1_free: bool,
    pub g1_witness: Option<LinearRelation>,
    pub g2_free: bool,
    pub g2_witness: Option<MonomialRelation>,
    pub g2_search_bound: u64,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.g1_free && self.g2_free
    }
}

impl VarietyPresentation {
    /// Renders a base element (a polynomial in the constants only, living in
    /// a ring whose last variables are the constants).
    pub(crate) fn render_constant(&self, c: &Poly) -> String {
        let k = self.consts().len();
        let off = c.nvars() - k;
        let map: Vec<Option<usize>> = (0..c.nvars()).map(|v| v.checked_sub(off)).collect();
        c.remap(k, &map)
            .to_string_with(self.consts().names(), MonomialOrder::GrevLex)
    }

    fn in_constants(&self, p: &Poly, first_const: usize) -> bool {
        p.terms()
            .iter()
            .all(|(m, _)| m.exponents()[..first_const].iter().all(|&e| e == 0))
    }

    /// The lattice of integer `r` with `Σ r_j x_j` constant on `V`.
    pub fn linear_relation_space(&self, budget: &Budget) -> Result<Subspace, PolyError> {
        let n = self.n();
        let gb = self.basis(budget)?;
        let nfs: Vec<Poly> = (0..n)
            .map(|j| gb.normal_form(&Poly::var(self.nvars(), j)))
            .collect();
        let monos: BTreeSet<Monomial> = nfs
            .iter()
            .flat_map(|p| p.terms().iter().map(|(m, _)| m.clone()))
            .filter(|m| m.exponents()[..2 * n].iter().any(|&e| e > 0))
            .collect();
        if monos.is_empty() {
            return Ok(Subspace::full(n));
        }
        // columns: basis vectors x_j; rows: non-constant monomials
        let rows: Vec<Vec<Rational>> = monos
            .iter()
            .map(|m| {
                nfs.iter()
                    .map(|p| {
                        p.terms()
                            .iter()
                            .find(|(t, _)| t == m)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(Rational::zero)
                    })
                    .collect()
            })
            .collect();
        let kernel = QMatrix::from_rows(n, rows).kernel();
        let ints: Vec<Vec<BigInt>> = kernel
            .iter()
            .map(|v| crate::linalg::primitive_integer_vector(v))
            .collect();
        Ok(Subspace::span(&crate::linalg::IntMatrix::from_big_rows(
            n, &ints,
        )))
    }

    /// `Some(c)` when `Σ r_j x_j ≡ c` on `V` for a base element `c`.
    pub fn linear_constant(
        &self,
        r: &[BigInt],
        budget: &Budget,
    ) -> Result<Option<Poly>, PolyError> {
        let nv = self.nvars();
        let f = r.iter().enumerate().fold(Poly::zero(nv), |acc, (j, c)| {
            &acc + &Poly::var(nv, j).scale(&Rational::from_integer(c.clone()))
        });
        let nf = self.basis(budget)?.normal_form(&f);
        Ok(self.in_constants(&nf, 2 * self.n()).then_some(nf))
    }

    /// `V` in the ring with inverse variables `z_j` for the `y_j`, laid out as
    /// `x, y, z, constants`.
    fn inverse_ideal(&self) -> &Ideal {
        self.cache.inverse.get_or_init(|| {
            let n = self.n();
            let k = self.consts().len();
            let total = 3 * n + k;
            let map: Vec<Option<usize>> = (0..self.nvars())
                .map(|v| Some(if v < 2 * n { v } else { v + n }))
                .collect();
            let mut gens: Vec<Poly> = self
                .ideal()
                .generators()
                .iter()
                .map(|g| g.remap(total, &map))
                .collect();
            for j in 0..n {
                gens.push(
                    &(&Poly::var(total, n + j) * &Poly::var(total, 2 * n + j)) - &Poly::one(total),
                );
            }
            let mut names: Vec<String> = self.names()[..2 * n].to_vec();
            names.extend((1..=n).map(|j| format!("_z{j}")));
            names.extend(self.consts().names().iter().cloned());
            Ideal::new(names, gens)
        })
    }

    fn inverse_order(&self) -> MonomialOrder {
        if self.consts().is_empty() {
            MonomialOrder::GrevLex
        } else {
            MonomialOrder::Block {
                split: 3 * self.n(),
            }
        }
    }

    /// `Some(c)` when `∏ y_j^{r_j} ≡ c` on `V` for a base element `c`; the
    /// result lives in the ring `x, y, z, constants`.
    pub fn monomial_constant(
        &self,
        r: &[BigInt],
        budget: &Budget,
    ) -> Result<Option<Poly>, PolyError> {
        let n = self.n();
        let ideal = self.inverse_ideal();
        let gb = ideal.groebner(self.inverse_order(), budget)?;
        let mut mono = Monomial::one(ideal.nvars());
        for (j, e) in r.iter().enumerate() {
            let p = e.abs().to_u16().expect("exponent fits");
            let idx = if e.is_negative() { 2 * n + j } else { n + j };
            mono.exponents_mut()[idx] += p;
        }
        let nf = gb.normal_form(&Poly::monomial(mono, Rational::from_integer(1.into())));
        Ok(self.in_constants(&nf, 3 * n).then_some(nf))
    }

    /// Sublattice that can carry monomial relations: at a smooth point, any
    /// relation `y^r = c` makes `Σ r_j dy_j / y_j` vanish on the tangent space.
    pub fn monomial_candidate_space(&self, budget: &Budget) -> Subspace {
        let n = self.n();
        let Some(probe) = (if self.irreducible_asserted() {
            self.tangent_probe(budget)
        } else {
            None
        }) else {
            return Subspace::full(n);
        };
        let pt = probe.point();
        let rows: Vec<Vec<Rational>> = probe
            .tangent_basis()
            .iter()
            .map(|t| (0..n).map(|j| &t[n + j] / &pt[n + j]).collect())
            .collect();
        if rows.is_empty() {
            return Subspace::full(n);
        }
        let kernel = QMatrix::from_rows(n, rows).kernel();
        let ints: Vec<Vec<BigInt>> = kernel
            .iter()
            .map(|v| crate::linalg::primitive_integer_vector(v))
            .collect();
        Subspace::span(&crate::linalg::IntMatrix::from_big_rows(n, &ints))
    }

    /// Exact additive part, monomial part searched up to `g2_bound`.
    pub fn freeness(&self, g2_bound: u64, budget: &Budget) -> Result<FreenessReport, PolyError> {
        let lin = self.linear_relation_space(budget)?;
        let g1_witness = if lin.rank() == 0 {
            None
        } else {
            let r = lin.basis().row(0).to_vec();
            let c = self
                .linear_constant(&r, budget)?
                .expect("relation lattice element");
            Some(LinearRelation {
                c: self.render_constant(&c),
                r: small(&r),
            })
        };
        let mut g2_witness = None;
        let cands = self.monomial_candidate_space(budget);
        if cands.rank() > 0 {
            for r in cands.bounded_primitive_vectors(g2_bound) {
                if let Some(c) = self.monomial_constant(&r, budget)? {
                    g2_witness = Some(MonomialRelation {
                        c: self.render_constant(&c),
                        r: small(&r),
                    });
                    break;
                }
            }
        }
        Ok(FreenessReport {
            g1_free: g1_witness.is_none(),
            g1_witness,
            g2_free: g2_witness.is_none(),
            g2_witness,
            g2_search_bound: g2_bound,
        })
    }
}

fn small(r: &[BigInt]) -> Vec<i64> {
    r.iter()
        .map(|x| x.to_i64().expect("witness entry fits i64"))
        .collect()
}
