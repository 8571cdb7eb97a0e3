use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{Budget, GroebnerBasis, MonomialOrder, Poly, PolyError};

/// An ideal in `Q[names]`, given by generators. Gröbner bases are cached per
/// monomial order and shared between clones.
#[derive(Clone, Debug)]
pub struct Ideal {
    names: Vec<String>,
    gens: Vec<Poly>,
    cache: Arc<Mutex<HashMap<MonomialOrder, Arc<GroebnerBasis>>>>,
}

impl Ideal {
    pub fn new(names: Vec<String>, gens: Vec<Poly>) -> Self {
        debug_assert!(gens.iter().all(|g| g.nvars() == names.len()));
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            names,
            gens,
            cache: Arc::default(),
        }
    }

    pub fn parse(names: &[String], gens: &[impl AsRef<str>]) -> Result<Self, PolyError> {
        let polys = gens
            .iter()
            .map(|g| super::parse_poly(g.as_ref(), names))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(names.to_vec(), polys))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn groebner(
        &self,
        order: MonomialOrder,
        budget: &Budget,
    ) -> Result<Arc<GroebnerBasis>, PolyError> {
        if let Some(gb) = self.cache.lock().expect("cache lock").get(&order) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(GroebnerBasis::compute(
            &self.gens,
            self.nvars(),
            order,
            budget,
        )?);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(order, gb.clone());
        Ok(gb)
    }

    pub(crate) fn seed_cache(&self, gb: GroebnerBasis) {
        self.cache
            .lock()
            .expect("cache lock")
            .insert(gb.order(), Arc::new(gb));
    }

    /// Any cached basis, preferring grevlex; computes a grevlex basis if none.
    pub fn any_basis(&self, budget: &Budget) -> Result<Arc<GroebnerBasis>, PolyError> {
        {
            let cache = self.cache.lock().expect("cache lock");
            if let Some(gb) = cache.get(&MonomialOrder::GrevLex) {
                return Ok(gb.clone());
            }
            let mut keys: Vec<&MonomialOrder> = cache.keys().collect();
            keys.sort_by_key(|o| format!("{o:?}"));
            if let Some(k) = keys.first() {
                return Ok(cache[*k].clone());
            }
        }
        self.groebner(MonomialOrder::GrevLex, budget)
    }

    pub fn contains(&self, f: &Poly, budget: &Budget) -> Result<bool, PolyError> {
        Ok(self.any_basis(budget)?.contains(f))
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool, PolyError> {
        Ok(self.any_basis(budget)?.is_unit())
    }

    /// Sum of two ideals in the same ring.
    pub fn sum(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.names, other.names, "ring mismatch");
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.names.clone(), gens)
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Poly>) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Ideal::new(self.names.clone(), gens)
    }
}

/// Krull dimension of `Q[x]/I`. Errors on the unit ideal.
pub fn ideal_dim(ideal: &Ideal, budget: &Budget) -> Result<usize, PolyError> {
    let gb = ideal.any_basis(budget)?;
    if gb.is_unit() {
        return Err(PolyError::DimensionOfUnitIdeal);
    }
    Ok(max_independent_set(&gb).len())
}

/// A largest set of variables, none of whose monomials is a leading monomial
/// of the basis. Its size is the dimension of the ideal.
pub fn max_independent_set(gb: &GroebnerBasis) -> Vec<usize> {
    let n = gb.nvars();
    let mut supports: Vec<Vec<usize>> = gb
        .leading_monomials()
        .map(|m| m.support().collect())
        .collect();
    supports.sort_by_key(|s| s.len());
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in supports {
        if !minimal.iter().any(|t| t.iter().all(|v| s.contains(v))) {
            minimal.push(s);
        }
    }
    let hitting = min_hitting_set(n, &minimal);
    (0..n).filter(|v| !hitting.contains(v)).collect()
}

/// Minimum set of variables meeting every given set, solved per connected
/// component by branch and bound.
fn min_hitting_set(n: usize, sets: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nxt = p[c];
            p[c] = r;
            c = nxt;
        }
        r
    }
    for s in sets {
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
    for s in sets {
        if let Some(&v) = s.first() {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(s);
        }
    }
    let mut roots: Vec<usize> = groups.keys().copied().collect();
    roots.sort_unstable();
    let mut out = Vec::new();
    for r in roots {
        let comp = &groups[&r];
        let mut best: Option<Vec<usize>> = None;
        branch(comp, &mut Vec::new(), &mut best);
        out.extend(best.expect("a component always has a hitting set"));
    }
    out.sort_unstable();
    out
}

fn branch(sets: &[&Vec<usize>], chosen: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
    if best.as_ref().is_some_and(|b| chosen.len() >= b.len()) {
        return;
    }
    let unhit = sets
        .iter()
        .filter(|s| !s.iter().any(|v| chosen.contains(v)))
        .min_by_key(|s| s.len());
    match unhit {
        None => *best = Some(chosen.clone()),
        Some(s) => {
            if best.as_ref().is_some_and(|b| chosen.len() + 1 >= b.len()) {
                return;
            }
            for &v in s.iter() {
                chosen.push(v);
                branch(sets, chosen, best);
                chosen.pop();
            }
        }
    }
}

/// `I ∩ Q[kept variables]`, as an ideal over the kept variables in their
/// original relative order.
pub fn eliminate(ideal: &Ideal, elim: &[usize], budget: &Budget) -> Result<Ideal, PolyError> {
    let n = ideal.nvars();
    let kept: Vec<usize> = (0..n).filter(|v| !elim.contains(v)).collect();
    // permuted ring: eliminated variables first
    let mut to_perm = vec![None; n];
    for (k, &v) in elim.iter().chain(kept.iter()).enumerate() {
        to_perm[v] = Some(k);
    }
    let gens: Vec<Poly> = ideal
        .generators()
        .iter()
        .map(|g| g.remap(n, &to_perm))
        .collect();
    let gb = GroebnerBasis::compute(&gens, n, MonomialOrder::Block { split: elim.len() }, budget)?;
    let mut back = vec![None; n];
    for (k, slot) in back.iter_mut().enumerate().skip(elim.len()) {
        *slot = Some(k - elim.len());
    }
    let names: Vec<String> = kept.iter().map(|&v| ideal.names()[v].clone()).collect();
    let m = kept.len();
    let remaining: Vec<Poly> = gb
        .polys()
        .iter()
        .filter(|p| {
            p.terms()
                .iter()
                .all(|(mono, _)| mono.exponents()[..elim.len()].iter().all(|&e| e == 0))
        })
        .map(|p| p.remap(m, &back))
        .collect();
    let out = Ideal::new(names, remaining.clone());
    // the surviving elements form the reduced grevlex basis of the elimination ideal
    out.seed_cache(GroebnerBasis::compute(
        &remaining,
        m,
        MonomialOrder::GrevLex,
        budget,
    )?);
    Ok(out)
}

/// `I : f^∞`.
pub fn saturate(ideal: &Ideal, f: &Poly, budget: &Budget) -> Result<Ideal, PolyError> {
    let n = ideal.nvars();
    let shift: Vec<Option<usize>> = (0..n).map(|v| Some(v + 1)).collect();
    let mut names = vec!["_t".to_string()];
    names.extend(ideal.names().iter().cloned());
    let mut gens: Vec<Poly> = ideal
        .generators()
        .iter()
        .map(|g| g.remap(n + 1, &shift))
        .collect();
    let t = Poly::var(n + 1, 0);
    gens.push(&(&t * &f.remap(n + 1, &shift)) - &Poly::one(n + 1));
    let extended = Ideal::new(names, gens);
    eliminate(&extended, &[0], budget)
}
