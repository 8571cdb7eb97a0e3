use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::AmalgamError;
use crate::gamma::rotund::{rotundity, strong_rotundity};
use crate::gamma::{BasePresentation, GammaError, GammaPresentation, Predim, Verdict};
use crate::linalg::{rank, IntMatrix, Rational};
use crate::par;
use crate::poly::{Budget, Monomial, Poly};
use crate::variety::{ring_names, VarietyError, VarietyPresentation};

/// Complexity cap: number of blocks, total degree, coefficient height. The
/// height also bounds kernel validation and the rotundity sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cap {
    pub n_max: usize,
    pub deg_max: u32,
    pub height_max: u64,
}

impl Cap {
    pub fn uniform(k: u32) -> Self {
        Cap {
            n_max: k as usize,
            deg_max: k,
            height_max: u64::from(k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    All,
    GammaAlgebraic,
    PurelyTranscendental,
}

#[derive(Clone, Debug)]
pub struct CatalogOptions {
    pub g2_bound: u64,
    pub budget: Budget,
    /// Raw coefficient vectors examined before the enumeration stops.
    pub max_candidates: usize,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            g2_bound: 4,
            budget: Budget::default(),
            max_candidates: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub presentation: GammaPresentation,
    /// Canonical reduced basis of the locus ideal.
    pub ideal: Vec<String>,
    pub delta: i64,
    pub verdict: Verdict,
}

impl CatalogEntry {
    pub fn n(&self) -> usize {
        self.presentation.n()
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionCatalog {
    pub entries: Vec<CatalogEntry>,
    pub cap: Cap,
    pub filter: Filter,
    /// Why the enumeration is incomplete, if it is.
    pub truncated: Option<String>,
    pub candidates_examined: usize,
}

/// Monomials of degree `≤ deg` in `nvars` variables, constant last.
fn monomials(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    let mut ms: Vec<Monomial> = out.iter().map(|e| Monomial::from_exponents(e)).collect();
    ms.sort_by(|a, b| {
        b.degree()
            .cmp(&a.degree())
            .then_with(|| b.exponents().cmp(a.exponents()))
    });
    ms
}

/// Over `Q̄`: linear polynomials are irreducible, a quadric is irreducible
/// iff its symmetric matrix has rank at least 3.
fn absolutely_irreducible(p: &Poly) -> Option<bool> {
    match p.total_degree() {
        0 => Some(false),
        1 => Some(true),
        2 => {
            let nv = p.nvars();
            let mut q = IntMatrix::zeros(nv + 1, nv + 1);
            for (m, c) in p.terms() {
                let c2 = (c * Rational::from_integer(2.into())).to_integer();
                let vars: Vec<usize> = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                    .collect();
                let (i, j) = match vars.as_slice() {
                    [] => (nv, nv),
                    [a] => (*a, nv),
                    [a, b] => (*a, *b),
                    _ => unreachable!(),
                };
                if i == j {
                    q.set(i, i, c2);
                } else {
                    let half = c.numer().clone();
                    q.set(i, j, half.clone());
                    q.set(j, i, half);
                }
            }
            Some(rank(&q) >= 3)
        }
        _ => None,
    }
}

struct Raw {
    n: usize,
    poly: Poly,
}

/// Coefficient vectors in `[-h, h]^len`, nonzero, content 1, first nonzero
/// entry positive.
fn coefficient_vectors(
    len: usize,
    h: i64,
    limit: usize,
    examined: &mut usize,
) -> (Vec<Vec<i64>>, bool) {
    let mut out = Vec::new();
    let mut v = vec![-h; len];
    loop {
        *examined += 1;
        if *examined > limit {
            return (out, true);
        }
        let first = v.iter().find(|&&c| c != 0);
        if first.is_some_and(|&c| c > 0) && v.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1 {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == len {
                return (out, false);
            }
            if v[i] < h {
                v[i] += 1;
                break;
            }
            v[i] = -h;
            i += 1;
        }
    }
}

fn candidates(cap: Cap, limit: usize) -> (Vec<Raw>, usize, Option<String>) {
    let mut out = Vec::new();
    let mut examined = 0;
    let h = cap.height_max as i64;
    let mut truncated = None;
    if cap.deg_max > 2 {
        truncated = Some(
            "degrees above 2 skipped: absolute irreducibility is certified for quadrics only"
                .into(),
        );
    }
    for n in 1..=cap.n_max {
        let nv = 2 * n;
        let ms = monomials(nv, cap.deg_max.min(2));
        let (vecs, hit) = coefficient_vectors(ms.len(), h, limit, &mut examined);
        for v in vecs {
            let terms = ms
                .iter()
                .zip(&v)
                .filter(|(_, c)| **c != 0)
                .map(|(m, c)| (m.clone(), Rational::from_integer((*c).into())));
            let p = Poly::from_terms(nv, terms);
            let s = p.support();
            if !(0..n).all(|j| s[j] || s[n + j]) {
                continue;
            }
            if absolutely_irreducible(&p) != Some(true) {
                continue;
            }
            out.push(Raw { n, poly: p });
        }
        if hit {
            truncated = Some(format!(
                "candidate limit {limit} reached while enumerating n = {n}"
            ));
            break;
        }
    }
    (out, examined, truncated)
}

/// Torsion twists `y_j -> ±y_j` and block permutations of a polynomial.
fn orbit(p: &Poly, n: usize) -> Vec<Poly> {
    let nv = 2 * n;
    let mut out = Vec::new();
    for perm in permutations(n) {
        for signs in 0..(1u32 << n) {
            let images: Vec<Poly> = (0..nv)
                .map(|v| {
                    let (block, is_y) = (v % n, v >= n);
                    let target = perm[block] + if is_y { n } else { 0 };
                    let var = Poly::var(nv, target);
                    if is_y && signs & (1 << block) != 0 {
                        var.scale(&Rational::from_integer((-1).into()))
                    } else {
                        var
                    }
                })
                .collect();
            out.push(p.substitute(&images));
        }
    }
    out
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Orbit representatives minimize the number of `+` signs, then the strings.
fn orbit_order(key: &[String]) -> (usize, &[String]) {
    (key.iter().map(|s| s.matches(" + ").count()).sum(), key)
}

/// Canonical strings of the orbit representative.
fn canonical_key(
    base: &Arc<BasePresentation>,
    raw: &Raw,
    budget: &Budget,
) -> Result<Option<Vec<String>>, GammaError> {
    let consts = base.constants();
    let names = ring_names(raw.n, consts);
    let mut best: Option<Vec<String>> = None;
    for q in orbit(&raw.poly, raw.n) {
        let lifted = q.remap(names.len(), &(0..q.nvars()).map(Some).collect::<Vec<_>>());
        let v = match VarietyPresentation::new(
            raw.n,
            consts.clone(),
            names.clone(),
            vec![lifted],
            true,
            budget,
        ) {
            Ok(v) => v,
            Err(VarietyError::EmptyVariety) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let key = v.generator_strings(budget).map_err(VarietyError::from)?;
        if best
            .as_ref()
            .is_none_or(|b| orbit_order(&key) < orbit_order(b))
        {
            best = Some(key);
        }
    }
    Ok(best)
}

/// Validity, freeness and strongness of a canonical locus.
fn certify(
    base: &Arc<BasePresentation>,
    n: usize,
    ideal: &[String],
    cap: Cap,
    opts: &CatalogOptions,
) -> Result<Option<CatalogEntry>, GammaError> {
    let b = &opts.budget;
    let p = if ideal.is_empty() {
        GammaPresentation::generic(base.clone(), n)
    } else {
        match GammaPresentation::parse(base.clone(), n, ideal, cap.height_max, b) {
            Ok(p) => p,
            Err(GammaError::KernelViolation { .. })
            | Err(GammaError::Variety(VarietyError::EmptyVariety)) => return Ok(None),
            Err(e) => return Err(e),
        }
    };
    if !p.freeness(opts.g2_bound, b)?.is_free() {
        return Ok(None);
    }
    let pd = Predim::new(&p, b);
    if rotundity(&pd, cap.height_max)?.verdict == Verdict::NotRotund {
        return Ok(None);
    }
    let verdict = strong_rotundity(&pd, cap.height_max)?.verdict;
    let delta = pd.total()?;
    drop(pd);
    Ok(Some(CatalogEntry {
        presentation: p,
        ideal: ideal.to_vec(),
        delta,
        verdict,
    }))
}

/// All valid, free, strong extensions within the cap, one per orbit under
/// torsion twists and block permutations, sorted by `(n, ideal)`. The
/// trivial extension always comes first.
pub fn enumerate_extensions(
    a0: &Arc<BasePresentation>,
    cap: Cap,
    filter: Filter,
    opts: &CatalogOptions,
) -> Result<ExtensionCatalog, AmalgamError> {
    let (raws, examined, truncated) = candidates(cap, opts.max_candidates);
    let keys = par::map(&raws, |r| canonical_key(a0, r, &opts.budget));
    let mut unique: BTreeMap<(usize, Vec<String>), ()> = BTreeMap::new();
    if cap.n_max >= 1 {
        unique.insert((1, Vec::new()), ());
    }
    for (r, k) in raws.iter().zip(keys) {
        if let Some(k) = k? {
            unique.insert((r.n, k), ());
        }
    }
    let keys: Vec<(usize, Vec<String>)> = unique.into_keys().collect();
    let certified = par::map(&keys, |(n, ideal)| certify(a0, *n, ideal, cap, opts));
    let mut entries = vec![CatalogEntry {
        presentation: GammaPresentation::trivial(a0.clone()),
        ideal: Vec::new(),
        delta: 0,
        verdict: Verdict::RotundUpTo(cap.height_max),
    }];
    for c in certified {
        let Some(e) = c? else { continue };
        let keep = match filter {
            Filter::All => true,
            Filter::GammaAlgebraic => e.delta == 0,
            Filter::PurelyTranscendental => matches!(e.verdict, Verdict::StronglyRotundUpTo(_)),
        };
        if keep {
            entries.push(e);
        }
    }
    Ok(ExtensionCatalog {
        entries,
        cap,
        filter,
        truncated,
        candidates_examined: examined,
    })
}
