//! Buchberger's algorithm with the Gebauer–Möller pair update and the sugar
//! selection strategy. Coefficients are kept as primitive integer vectors
//! during the computation (fraction-free reduction) and the final basis is
//! reported monic over Q.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, Poly, PolyError};
use crate::linalg::Rational;

/// Resource limits for a single Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of polynomials ever added to the basis.
    pub max_basis: usize,
    /// Maximum total degree of any basis element.
    pub max_degree: u32,
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        let max_basis = std::env::var("GAMMAFORGE_BUDGET")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(5000);
        Budget {
            max_basis,
            max_degree: 64,
            max_pairs: 200_000,
        }
    }
}

impl Budget {
    pub fn with_max_basis(max_basis: usize) -> Self {
        Budget {
            max_basis,
            ..Budget::default()
        }
    }
}

type Term = (Monomial, BigInt);

/// Integer polynomial with terms sorted descending by the engine order.
#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<Term>,
}

impl IPoly {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn make_primitive(&mut self) {
        if self.is_zero() {
            return;
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
    }
}

fn sev(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | (1u64 << (i % 64)))
}

fn from_poly(p: &Poly, order: MonomialOrder) -> (IPoly, BigInt) {
    let lcm = p
        .terms()
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut terms: Vec<Term> = p
        .terms()
        .iter()
        .map(|(m, c)| (m.clone(), c.numer() * (&lcm / c.denom())))
        .collect();
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    (IPoly { terms }, lcm)
}

fn to_poly(nvars: usize, p: &IPoly, scale: &Rational) -> Poly {
    Poly::from_terms(
        nvars,
        p.terms
            .iter()
            .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()) / scale)),
    )
}

#[derive(Debug)]
struct Element {
    poly: IPoly,
    sev: u64,
    sugar: u32,
}

/// `a*f - b*mono*g`, with all lists sorted descending in `order`.
fn sub_scaled(
    order: MonomialOrder,
    f: &[Term],
    a: &BigInt,
    mono: &Monomial,
    b: &BigInt,
    g: &[Term],
) -> Vec<Term> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let mut gm: Option<Monomial> = g.first().map(|(m, _)| m.mul(mono));
    while i < f.len() || j < g.len() {
        let ord = match (i < f.len(), &gm) {
            (true, Some(m)) => order.cmp(&f[i].0, m),
            (true, None) => Ordering::Greater,
            (false, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push((f[i].0.clone(), a * &f[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((gm.take().expect("term"), -(b * &g[j].1)));
                j += 1;
                gm = g.get(j).map(|(m, _)| m.mul(mono));
            }
            Ordering::Equal => {
                let c = a * &f[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((f[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                gm = g.get(j).map(|(m, _)| m.mul(mono));
            }
        }
    }
    out
}

/// Fraction-free top reduction of `f` by `basis`: cancels leading terms until
/// the leading monomial is irreducible. The tail is left for the final
/// interreduction. The result is a nonzero multiple of a polynomial
/// congruent to `f`, up to sign and content.
fn reduce(order: MonomialOrder, f: IPoly, basis: &[&Element]) -> IPoly {
    let mut rest = f.terms;
    let mut steps = 0usize;
    while let Some((m, c)) = rest.first() {
        let s = sev(m);
        let Some(e) = basis
            .iter()
            .find(|e| e.sev & !s == 0 && e.poly.lm().divides(m))
        else {
            break;
        };
        let q = m.div(e.poly.lm());
        let g = c.gcd(e.poly.lc());
        let a = e.poly.lc() / &g;
        let b = c / &g;
        rest = sub_scaled(order, &rest, &a, &q, &b, &e.poly.terms);
        steps += 1;
        if steps.is_multiple_of(8) {
            let mut p = IPoly { terms: rest };
            p.make_primitive();
            rest = p.terms;
        }
    }
    IPoly { terms: rest }
}

/// Like `reduce` but tracks the exact rational multiplier.
fn reduce_exact(order: MonomialOrder, f: IPoly, basis: &[&Element]) -> (IPoly, Rational) {
    let mut rest = f.terms;
    let mut done: Vec<Term> = Vec::new();
    let mut mult = Rational::one();
    while !rest.is_empty() {
        let (m, c) = &rest[0];
        let s = sev(m);
        let div = basis
            .iter()
            .find(|e| e.sev & !s == 0 && e.poly.lm().divides(m));
        match div {
            None => done.push(rest.remove(0)),
            Some(e) => {
                let q = m.div(e.poly.lm());
                let g = c.gcd(e.poly.lc());
                let a = e.poly.lc() / &g;
                let b = c / &g;
                rest = sub_scaled(order, &rest, &a, &q, &b, &e.poly.terms);
                if !a.is_one() {
                    for (_, dc) in &mut done {
                        *dc = &*dc * &a;
                    }
                    mult *= Rational::from_integer(a);
                }
            }
        }
    }
    (IPoly { terms: done }, mult)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// A reduced Gröbner basis: monic, interreduced, sorted ascending by leading
/// monomial.
#[derive(Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<Poly>,
    elements: Vec<Element>,
}

impl GroebnerBasis {
    pub fn compute(
        generators: &[Poly],
        nvars: usize,
        order: MonomialOrder,
        budget: &Budget,
    ) -> Result<Self, PolyError> {
        let mut all: Vec<Element> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut processed = 0usize;

        let mut input: Vec<(IPoly, u32)> = generators
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| {
                let (mut ip, _) = from_poly(p, order);
                ip.make_primitive();
                let d = ip.degree();
                (ip, d)
            })
            .collect();
        input.sort_by(|a, b| order.cmp(a.0.lm(), b.0.lm()));

        let mut queue: Vec<(IPoly, u32)> = input;
        queue.reverse();
        loop {
            let next = if let Some(item) = queue.pop() {
                Some(item)
            } else if !pairs.is_empty() {
                let best = select_pair(&pairs, order);
                let p = pairs.swap_remove(best);
                processed += 1;
                if processed > budget.max_pairs {
                    return Err(PolyError::ResourceLimit(format!(
                        "more than {} S-pairs",
                        budget.max_pairs
                    )));
                }
                Some((
                    spoly(order, &all[p.i].poly, &all[p.j].poly, &p.lcm),
                    p.sugar,
                ))
            } else {
                None
            };
            let Some((f, sugar)) = next else { break };
            let basis: Vec<&Element> = active.iter().map(|&k| &all[k]).collect();
            let mut h = reduce(order, f, &basis);
            if h.is_zero() {
                continue;
            }
            h.make_primitive();
            if h.lm().is_one() {
                let one = IPoly {
                    terms: vec![(Monomial::one(nvars), BigInt::one())],
                };
                all.push(Element {
                    sev: 0,
                    sugar: 0,
                    poly: one,
                });
                active = vec![all.len() - 1];
                break;
            }
            let deg = h.degree();
            if deg > budget.max_degree {
                return Err(PolyError::ResourceLimit(format!(
                    "basis degree above {}",
                    budget.max_degree
                )));
            }
            if all.len() >= budget.max_basis {
                return Err(PolyError::ResourceLimit(format!(
                    "more than {} basis elements",
                    budget.max_basis
                )));
            }
            let idx = all.len();
            all.push(Element {
                sev: sev(h.lm()),
                sugar: sugar.max(deg),
                poly: h,
            });
            gebauer_moller(&all, &mut active, &mut pairs, idx);
        }

        let gens: Vec<&Element> = active.iter().map(|&k| &all[k]).collect();
        Ok(Self::interreduce(nvars, order, &gens))
    }

    fn interreduce(nvars: usize, order: MonomialOrder, gens: &[&Element]) -> Self {
        let mut elements: Vec<Element> = Vec::with_capacity(gens.len());
        for (k, e) in gens.iter().enumerate() {
            let others: Vec<&Element> = gens
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, e)| *e)
                .collect();
            // leading term is not reducible by a minimal basis, so only the tail changes
            let (lm, lc) = e.poly.terms[0].clone();
            let tail = IPoly {
                terms: e.poly.terms[1..].to_vec(),
            };
            let (r, mult) = reduce_exact(order, tail, &others);
            let mut terms = Vec::with_capacity(r.terms.len() + 1);
            terms.push((lm, Rational::from_integer(lc)));
            terms.extend(
                r.terms
                    .into_iter()
                    .map(|(m, c)| (m, Rational::from_integer(c) / &mult)),
            );
            let (mut p, _) = from_poly(&Poly::from_terms(nvars, terms), order);
            p.make_primitive();
            elements.push(Element {
                sev: sev(p.lm()),
                sugar: e.sugar,
                poly: p,
            });
        }
        elements.sort_by(|a, b| order.cmp(a.poly.lm(), b.poly.lm()));
        let polys = elements
            .iter()
            .map(|e| to_poly(nvars, &e.poly, &Rational::from_integer(e.poly.lc().clone())))
            .collect();
        GroebnerBasis {
            nvars,
            order,
            polys,
            elements,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Monic basis elements, ascending by leading monomial.
    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().map(|e| e.poly.lm())
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|e| e.poly.lm().is_one())
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        assert_eq!(f.nvars(), self.nvars, "ring mismatch");
        if f.is_zero() {
            return f.clone();
        }
        let (ip, denom) = from_poly(f, self.order);
        let basis: Vec<&Element> = self.elements.iter().collect();
        let (r, mult) = reduce_exact(self.order, ip, &basis);
        to_poly(self.nvars, &r, &(mult * Rational::from_integer(denom)))
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }
}

fn spoly(order: MonomialOrder, f: &IPoly, g: &IPoly, lcm: &Monomial) -> IPoly {
    let mf = lcm.div(f.lm());
    let mg = lcm.div(g.lm());
    let gc = f.lc().gcd(g.lc());
    let a = g.lc() / &gc;
    let b = f.lc() / &gc;
    // a*mf*f - b*mg*g; the leading terms cancel
    let left: Vec<Term> = f.terms[1..]
        .iter()
        .map(|(m, c)| (m.mul(&mf), c * &a))
        .collect();
    let terms = sub_scaled(order, &left, &BigInt::one(), &mg, &b, &g.terms[1..]);
    IPoly { terms }
}

fn select_pair(pairs: &[Pair], order: MonomialOrder) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (p, q) = (&pairs[k], &pairs[best]);
        let better = match p.sugar.cmp(&q.sugar) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match order.cmp(&p.lcm, &q.lcm) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => (p.i, p.j) < (q.i, q.j),
            },
        };
        if better {
            best = k;
        }
    }
    best
}

fn gebauer_moller(all: &[Element], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = all[h].poly.lm();
    let sh = all[h].sugar;
    let mut cand: Vec<(usize, Monomial, bool, u32)> = active
        .iter()
        .map(|&g| {
            let lg = all[g].poly.lm();
            let lcm = lh.lcm(lg);
            let sugar =
                (sh + lcm.degree() - lh.degree()).max(all[g].sugar + lcm.degree() - lg.degree());
            (g, lcm, lh.coprime(lg), sugar)
        })
        .collect();

    // chain criterion among the new pairs: drop (h,g) if some other new
    // pair's lcm properly divides its lcm (keep one of equal lcms, preferring coprime)
    let mut keep = vec![true; cand.len()];
    for a in 0..cand.len() {
        for b in 0..cand.len() {
            if a == b || !keep[b] {
                continue;
            }
            if cand[b].1.divides(&cand[a].1) {
                let equal = cand[b].1 == cand[a].1;
                if !equal || (cand[b].2 && !cand[a].2) || (cand[b].2 == cand[a].2 && b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
    }
    let mut new_pairs: Vec<Pair> = Vec::new();
    for (k, (g, lcm, coprime, sugar)) in cand.drain(..).enumerate() {
        if keep[k] && !coprime {
            new_pairs.push(Pair {
                i: g,
                j: h,
                lcm,
                sugar,
            });
        }
    }

    // old pairs made redundant by h
    pairs.retain(|p| {
        if !lh.divides(&p.lcm) {
            return true;
        }
        let li = lh.lcm(all[p.i].poly.lm());
        let lj = lh.lcm(all[p.j].poly.lm());
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);

    active.retain(|&g| !lh.divides(all[g].poly.lm()));
    active.push(h);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn gb(gens: &[&str], vars: &[&str], order: MonomialOrder) -> GroebnerBasis {
        let n = names(vars);
        let polys: Vec<Poly> = gens.iter().map(|g| parse_poly(g, &n).unwrap()).collect();
        GroebnerBasis::compute(&polys, n.len(), order, &Budget::default()).unwrap()
    }

    #[test]
    fn twisted_cubic_lex() {
        let n = names(&["t", "x", "y", "z"]);
        let b = gb(
            &["x - t", "y - t^2", "z - t^3"],
            &["t", "x", "y", "z"],
            MonomialOrder::Lex,
        );
        let expect: Vec<Poly> = ["y - x^2", "z - x^3", "x*z - y^2"]
            .iter()
            .map(|s| parse_poly(s, &n).unwrap())
            .collect();
        for e in &expect {
            assert!(b.contains(e));
        }
        let elim: Vec<&Poly> = b.polys().iter().filter(|p| p.degree_in(0) == 0).collect();
        // x^2 - y, x*y - z, x*z - y^2, y^3 - z^2
        assert_eq!(elim.len(), 4);
    }

    #[test]
    fn unit_ideal() {
        let b = gb(&["x*y - 1", "x"], &["x", "y"], MonomialOrder::GrevLex);
        assert!(b.is_unit());
        assert_eq!(b.polys().len(), 1);
    }

    #[test]
    fn reduced_basis_is_canonical() {
        let vars = ["x", "y", "z"];
        let a = gb(
            &["x^2 + y*z", "x*y - z^2", "y^3 - x*z"],
            &vars,
            MonomialOrder::GrevLex,
        );
        let b = gb(
            &[
                "x^2 + y*z + (x*y - z^2)",
                "x*y - z^2",
                "y^3 - x*z + x*(x^2 + y*z)",
            ],
            &vars,
            MonomialOrder::GrevLex,
        );
        assert_eq!(a.polys(), b.polys());
    }

    #[test]
    fn normal_form_is_exact() {
        let n = names(&["x", "y"]);
        let b = gb(&["2*x - 3*y"], &["x", "y"], MonomialOrder::Lex);
        let f = parse_poly("x^2 + 1", &n).unwrap();
        let nf = b.normal_form(&f);
        let expect = parse_poly("9*y^2 + 4", &n)
            .unwrap()
            .scale(&Rational::new(1.into(), 4.into()));
        assert_eq!(nf, expect);
    }

    #[test]
    fn budget_is_enforced() {
        let n = names(&["x", "y", "z"]);
        let polys: Vec<Poly> = ["x^5 + y^4 + z^3 - 1", "x^3 + y^3 + z^2 - 1", "x*y*z - 2"]
            .iter()
            .map(|s| parse_poly(s, &n).unwrap())
            .collect();
        let tiny = Budget {
            max_basis: 2,
            max_degree: 64,
            max_pairs: 10,
        };
        assert!(matches!(
            GroebnerBasis::compute(&polys, 3, MonomialOrder::Lex, &tiny),
            Err(PolyError::ResourceLimit(_))
        ));
    }
}
