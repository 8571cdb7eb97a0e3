#![allow(dead_code)]

use std::sync::Arc;

use gammaforge::gamma::{BasePresentation, GammaPresentation};
use gammaforge::poly::Budget;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn base() -> Arc<BasePresentation> {
    Arc::new(BasePresentation::rational())
}

/// Random polynomial of degree at most 2 in `vars`, coefficients in `[-2, 2]`.
pub fn random_quadratic(rng: &mut ChaCha8Rng, vars: &[&str]) -> String {
    let mut monos: Vec<String> = vec!["1".into()];
    for (i, a) in vars.iter().enumerate() {
        monos.push(a.to_string());
        for b in &vars[i..] {
            monos.push(format!("{a}*{b}"));
        }
    }
    let mut terms = Vec::new();
    for m in monos {
        if rng.random_bool(0.35) {
            let c: i64 = rng.random_range(-2..=2);
            if c != 0 {
                terms.push(format!("({c})*{m}"));
            }
        }
    }
    if terms.is_empty() {
        terms.push(vars[rng.random_range(0..vars.len())].to_string());
    }
    terms.join(" + ")
}

/// Generators of a random irreducible locus for `n ∈ {1, 2}`: graphs of
/// quadratic maps, so irreducibility holds by construction.
pub fn random_graph_ideal(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    match (n, rng.random_range(0..4)) {
        (_, 0) => Vec::new(),
        (1, 1) | (1, 3) => vec![format!("y1 - ({})", random_quadratic(rng, &["x1"]))],
        (1, _) => vec![format!("x1 - ({})", random_quadratic(rng, &["y1"]))],
        (_, 1) => vec![format!(
            "x2 - ({})",
            random_quadratic(rng, &["x1", "y1", "y2"])
        )],
        (_, 2) => vec![format!(
            "y2 - ({})",
            random_quadratic(rng, &["x1", "y1", "x2"])
        )],
        _ => vec![
            format!("x2 - ({})", random_quadratic(rng, &["x1", "y1"])),
            format!("y2 - ({})", random_quadratic(rng, &["x1", "y1"])),
        ],
    }
}

/// `count` valid presentations with `n ≤ max_n`, drawn from a fixed seed.
pub fn random_presentations(
    seed: u64,
    count: usize,
    max_n: usize,
) -> Vec<(Vec<String>, GammaPresentation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = base();
    let budget = Budget::default();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let n = rng.random_range(1..=max_n);
        let gens = random_graph_ideal(&mut rng, n);
        if let Ok(p) = GammaPresentation::parse(b.clone(), n, &gens, 3, &budget) {
            out.push((gens, p));
        }
    }
    out
}
