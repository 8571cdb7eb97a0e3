use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder};
use crate::linalg::Rational;

/// Sparse polynomial over Q. Terms are kept sorted by descending plain lex
/// (the derived `Monomial` order) with no zero coefficients, so structural
/// equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Poly {
            nvars,
            terms: vec![(Monomial::one(nvars), c)],
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly {
            nvars,
            terms: vec![(Monomial::var(nvars, i), Rational::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Poly {
            nvars,
            terms: vec![(m, c)],
        }
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of the monomial 1.
    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponents()[var])
            .max()
            .unwrap_or(0)
    }

    /// Which variables occur.
    pub fn support(&self) -> Vec<bool> {
        let mut s = vec![false; self.nvars];
        for (m, _) in &self.terms {
            for v in m.support() {
                s[v] = true;
            }
        }
        s
    }

    pub fn uses_only(&self, allowed: &[bool]) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| m.support().all(|v| allowed[v]))
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Terms sorted by `order`, largest first.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        t
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let e = m.exponents()[var];
                let mut d = m.clone();
                d.exponents_mut()[var] -= 1;
                (d, c * Rational::from_integer(BigInt::from(e)))
            });
        Poly::from_terms(self.nvars, terms)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes values for the variables marked `Some`; the result lives in
    /// the same ring with those variables absent.
    pub fn specialize(&self, values: &[Option<Rational>]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut coef = c.clone();
            let mut mono = m.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    let e = mono.exponents()[i];
                    if e > 0 {
                        coef *= num_traits::pow(v.clone(), e as usize);
                        mono.exponents_mut()[i] = 0;
                    }
                }
            }
            (mono, coef)
        });
        Poly::from_terms(self.nvars, terms)
    }

    /// Moves variable `i` to index `map[i]` in a ring with `nvars` variables.
    /// Panics if a variable that occurs maps to `None`.
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one(nvars);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let j = map[i].expect("remap drops a variable that occurs");
                    out.exponents_mut()[j] += e;
                }
            }
            (out, c.clone())
        });
        Poly::from_terms(nvars, terms)
    }

    /// Composition: variable `i` is replaced by `images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(target), p.clone()])
            .collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Scales to integer coefficients with content 1 and positive leading
    /// coefficient under `order`.
    pub fn primitive(&self, order: MonomialOrder) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let gcd = self
            .terms
            .iter()
            .map(|(_, c)| c.numer() * (&lcm / c.denom()))
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
        let mut factor = Rational::new(lcm, gcd);
        let lead = self
            .leading_term(order)
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if lead {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Monic under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Poly {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Renders with the given variable names, terms in `order` (largest first).
    pub fn to_string_with(&self, names: &[String], order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(order).iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(m, names);
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

fn merge(
    a: &[(Monomial, Rational)],
    b: &[(Monomial, Rational)],
    negate_b: bool,
    nvars: usize,
) -> Poly {
    let mut terms = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => y.0.cmp(&x.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Less => {
                terms.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b {
                    -b[j].1.clone()
                } else {
                    b[j].1.clone()
                };
                terms.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    terms.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Poly { nvars, terms }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        merge(&self.terms, &rhs.terms, false, self.nvars)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        merge(&self.terms, &rhs.terms, true, self.nvars)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Poly {
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn arithmetic_identities() {
        let n = names(&["x", "y"]);
        let f = parse_poly("x + y", &n).unwrap();
        let g = parse_poly("x - y", &n).unwrap();
        assert_eq!(&f * &g, parse_poly("x^2 - y^2", &n).unwrap());
        assert!((&f - &f).is_zero());
        assert_eq!(f.pow(3), &(&f * &f) * &f);
    }

    #[test]
    fn derivative_and_eval() {
        let n = names(&["x", "y"]);
        let f = parse_poly("x^3*y - 2*y + 5", &n).unwrap();
        assert_eq!(f.derivative(0), parse_poly("3*x^2*y", &n).unwrap());
        let q = |v: i64| Rational::from_integer(v.into());
        assert_eq!(f.eval(&[q(2), q(3)]), q(24 - 6 + 5));
    }

    #[test]
    fn display_roundtrip() {
        let n = names(&["y1", "x1"]);
        let f = parse_poly("y1 - x1 - 1", &n).unwrap();
        let s = f.to_string_with(&n, MonomialOrder::GrevLex);
        assert_eq!(s, "y1 - x1 - 1");
        assert_eq!(parse_poly(&s, &n).unwrap(), f);
    }

    #[test]
    fn primitive_normalization() {
        let n = names(&["x"]);
        let f = parse_poly("-4*x + 6", &n).unwrap();
        assert_eq!(
            f.primitive(MonomialOrder::GrevLex),
            parse_poly("2*x - 3", &n).unwrap()
        );
    }

    #[test]
    fn substitution() {
        let n = names(&["x", "y"]);
        let f = parse_poly("x*y + 1", &n).unwrap();
        let imgs = vec![parse_poly("y", &n).unwrap(), parse_poly("-x", &n).unwrap()];
        assert_eq!(f.substitute(&imgs), parse_poly("-x*y + 1", &n).unwrap());
    }
}
