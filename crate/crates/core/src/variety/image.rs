use num_traits::{Signed, ToPrimitive, Zero};

use super::{ring_names, TangentProbe, VarietyError, VarietyPresentation};
use crate::linalg::{rank, IntMatrix, Rational};
use crate::poly::{eliminate, Budget, Ideal, Monomial, Poly};

/// Seed for the deterministic smooth-point search.
const PROBE_SEED: u64 = 0x5ee_d0f9_a11a;
const EXTRA_PROBES: u64 = 3;

impl VarietyPresentation {
    /// Zariski closure of `M·V` for an `r × n` integer matrix, as an
    /// `r`-block presentation. `M` acts additively on the `x` block and by
    /// monomials on the `y` block.
    pub fn apply_matrix(
        &self,
        m: &IntMatrix,
        budget: &Budget,
    ) -> Result<VarietyPresentation, VarietyError> {
        let n = self.n();
        if m.cols() != n {
            return Err(VarietyError::Shape {
                expected: n,
                got: m.cols(),
            });
        }
        let r = m.rows();
        let k = self.consts().len();
        // ring: t, x (n), y (n), u (r), v (r), constants (k)
        let total = 1 + 2 * n + 2 * r + k;
        let xi = |j: usize| 1 + j;
        let yi = |j: usize| 1 + n + j;
        let ui = |i: usize| 1 + 2 * n + i;
        let vi = |i: usize| 1 + 2 * n + r + i;
        let lift: Vec<Option<usize>> = (0..self.nvars())
            .map(|v| {
                Some(if v < 2 * n {
                    1 + v
                } else {
                    1 + 2 * n + 2 * r + (v - 2 * n)
                })
            })
            .collect();
        let mut gens: Vec<Poly> = self
            .ideal()
            .generators()
            .iter()
            .map(|g| g.remap(total, &lift))
            .collect();
        for i in 0..r {
            let mut lin = Poly::var(total, ui(i));
            let mut num = Monomial::one(total);
            let mut den = Monomial::var(total, vi(i));
            for j in 0..n {
                let e = m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                lin = &lin - &Poly::var(total, xi(j)).scale(&Rational::from_integer(e.clone()));
                let pow = e.abs().to_u16().expect("matrix entry fits an exponent");
                let target = if e.is_positive() { &mut num } else { &mut den };
                target.exponents_mut()[yi(j)] += pow;
            }
            gens.push(lin);
            gens.push(
                &Poly::monomial(den, Rational::from_integer(1.into()))
                    - &Poly::monomial(num, Rational::from_integer(1.into())),
            );
        }
        // y invertible; v is then a ratio of units, so it needs no separate inverse
        let mut inv = Monomial::var(total, 0);
        for j in 0..n {
            inv.exponents_mut()[yi(j)] += 1;
        }
        gens.push(&Poly::monomial(inv, Rational::from_integer(1.into())) - &Poly::one(total));

        let mut names = vec!["_t".to_string()];
        names.extend((0..n).map(|j| format!("_x{j}")));
        names.extend((0..n).map(|j| format!("_y{j}")));
        names.extend(ring_names(r, self.consts()));
        let elim: Vec<usize> = (0..1 + 2 * n).collect();
        let image = eliminate(&Ideal::new(names, gens), &elim, budget)?;
        Ok(VarietyPresentation::from_saturated(
            r,
            self.consts().clone(),
            image,
            self.irreducible_asserted(),
        ))
    }

    /// A smooth rational point with its tangent space, if one is found.
    pub fn tangent_probe(&self, budget: &Budget) -> Option<&TangentProbe> {
        self.cache
            .probe
            .get_or_init(|| TangentProbe::find(self, PROBE_SEED, budget).ok().flatten())
            .as_ref()
    }

    /// Probes at further random points, for when the first one lands on a
    /// degenerate fibre of some map.
    fn extra_probes(&self, budget: &Budget) -> &[TangentProbe] {
        self.cache.extra_probes.get_or_init(|| {
            (1..=EXTRA_PROBES)
                .filter_map(|i| {
                    TangentProbe::find(self, PROBE_SEED + i, budget)
                        .ok()
                        .flatten()
                })
                .collect()
        })
    }

    /// Installs a probe computed elsewhere (e.g. from the factors of a product).
    pub(crate) fn set_tangent_probe(&self, probe: Option<TangentProbe>) {
        let _ = self.cache.probe.set(probe);
    }

    /// `dim(M·V)`. Exact; uses the tangent bound when it already meets the
    /// trivial upper bound and falls back to elimination otherwise.
    pub fn image_dim(&self, m: &IntMatrix, budget: &Budget) -> Result<usize, VarietyError> {
        let (lo, hi) = self.image_dim_bounds(m, budget)?;
        if lo == hi {
            return Ok(lo);
        }
        let m = m.without_zero_rows();
        self.apply_matrix(&m, budget)?.dim(budget)
    }

    /// Cheap certified bounds `(lo, hi)` on `dim(M·V)`.
    pub fn image_dim_bounds(
        &self,
        m: &IntMatrix,
        budget: &Budget,
    ) -> Result<(usize, usize), VarietyError> {
        let n = self.n();
        if m.cols() != n {
            return Err(VarietyError::Shape {
                expected: n,
                got: m.cols(),
            });
        }
        let dim = self.dim(budget)?;
        let rk = rank(m);
        if rk == 0 {
            return Ok((0, 0));
        }
        if rk == n {
            // an isogeny of G^n has finite fibres
            return Ok((dim, dim));
        }
        let hi = dim.min(2 * rk);
        if !self.irreducible_asserted() {
            return Ok((0, hi));
        }
        let mut lo = self
            .tangent_probe(budget)
            .map(|p| p.image_lower_bound(m))
            .unwrap_or(0);
        if lo < hi {
            for p in self.extra_probes(budget) {
                lo = lo.max(p.image_lower_bound(m));
                if lo >= hi {
                    break;
                }
            }
        }
        Ok((lo.min(hi), hi))
    }
}
