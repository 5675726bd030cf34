//! Seeded generation of test corpora.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use gitmilnor_core::milnor::is_regular_sequence;
use gitmilnor_core::rational::int;
use gitmilnor_core::{ExponentVector, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Attempts per item before a family gives up.
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `x_1^D + ⋯ + x_n^D`.
    Fermat,
    /// Random forms whose gradient is a regular sequence.
    RandomSmooth,
    /// Random forms with few terms; the gradient may be degenerate.
    RandomSparse,
    /// Every binary form of degree `D` with coefficients in `{−2, …, 2}`, up to scaling.
    BinaryCatalog,
    /// Sums of smooth forms in two disjoint blocks of variables.
    DisjointSums,
    /// Random regular sequences of `n` forms of degree `D − 1`.
    RandomRegular,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "fermat" => Family::Fermat,
            "random-smooth" => Family::RandomSmooth,
            "random-sparse" => Family::RandomSparse,
            "binary-catalog" => Family::BinaryCatalog,
            "disjoint-sums" => Family::DisjointSums,
            "random-regular" => Family::RandomRegular,
            other => return Err(CliError::Usage(format!("unknown corpus family '{other}'"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fermat => "fermat",
            Family::RandomSmooth => "random-smooth",
            Family::RandomSparse => "random-sparse",
            Family::BinaryCatalog => "binary-catalog",
            Family::DisjointSums => "disjoint-sums",
            Family::RandomRegular => "random-regular",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub family: Family,
    pub n: usize,
    /// Degree `D = d + 1` of the forms.
    pub degree: u32,
    /// Number of items; for the binary catalog, 0 means all of them.
    pub count: usize,
    pub seed: u64,
    /// Probability that a monomial is used by the random families.
    pub density: f64,
}

impl CorpusSpec {
    pub fn new(family: Family, n: usize, degree: u32, count: usize, seed: u64) -> Self {
        CorpusSpec { family, n, degree, count, seed, density: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusItem {
    Form(Polynomial),
    Generators(Vec<Polynomial>),
}

impl CorpusItem {
    /// The generators whose quotient is studied: the partials of a form, or
    /// the generator list itself.
    pub fn generators(&self) -> Vec<Polynomial> {
        match self {
            CorpusItem::Form(f) => f.gradient(),
            CorpusItem::Generators(g) => g.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CorpusItem::Form(f) => f.to_string(),
            CorpusItem::Generators(g) => g.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        }
    }
}

fn coefficient(rng: &mut ChaCha8Rng) -> i64 {
    let c = rng.random_range(1..=3);
    if rng.random_bool(0.5) {
        c
    } else {
        -c
    }
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, degree: u32, density: f64) -> Polynomial {
    let monomials = ExponentVector::all_of_degree(n, degree);
    loop {
        let mut terms = Vec::new();
        for m in &monomials {
            if rng.random_bool(density) {
                terms.push((m.clone(), int(coefficient(rng))));
            }
        }
        if !terms.is_empty() {
            return Polynomial::from_terms(n, terms).expect("valid terms");
        }
    }
}

fn sparse_form(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> Polynomial {
    let monomials = ExponentVector::all_of_degree(n, degree);
    let k = rng.random_range(1..=n + 2);
    let terms: Vec<(ExponentVector, _)> = (0..k)
        .map(|_| (monomials[rng.random_range(0..monomials.len())].clone(), int(coefficient(rng))))
        .collect();
    let f = Polynomial::from_terms(n, terms).expect("valid terms");
    if f.is_zero() {
        sparse_form(rng, n, degree)
    } else {
        f
    }
}

fn is_smooth(f: &Polynomial) -> bool {
    is_regular_sequence(&f.gradient()).map(|w| w.regular).unwrap_or(false)
}

fn smooth_form(rng: &mut ChaCha8Rng, n: usize, degree: u32, density: f64) -> Result<Polynomial, CliError> {
    for _ in 0..MAX_ATTEMPTS {
        let f = random_form(rng, n, degree, density);
        if is_smooth(&f) {
            return Ok(f);
        }
    }
    Err(CliError::Corpus(format!("no smooth form of degree {degree} in {n} variables after {MAX_ATTEMPTS} attempts")))
}

/// Places a form in a block of variables of a larger ring.
fn embed(f: &Polynomial, n: usize, block: &[usize]) -> Polynomial {
    Polynomial::from_terms(
        n,
        f.terms().map(|(e, c)| {
            let mut v = vec![0; n];
            for (&i, &a) in block.iter().zip(e.as_slice()) {
                v[i] = a;
            }
            (ExponentVector::new(v), c.clone())
        }),
    )
    .expect("valid terms")
}

/// Smooth form in `k` variables; for one variable a pure power.
fn block_form(rng: &mut ChaCha8Rng, k: usize, degree: u32, density: f64) -> Result<Polynomial, CliError> {
    if k == 1 {
        return Ok(Polynomial::monomial(ExponentVector::new(vec![degree]), int(coefficient(rng))));
    }
    smooth_form(rng, k, degree, density)
}

/// All binary forms of degree `degree` with coefficients in `{−2, …, 2}`,
/// primitive with positive leading coefficient, in a fixed order.
pub fn binary_catalog(degree: u32) -> Vec<Polynomial> {
    let len = degree as usize + 1;
    let total = 5usize.pow(len as u32);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for code in 1..total {
        let mut c = code;
        let coeffs: Vec<i64> = (0..len)
            .map(|_| {
                let v = (c % 5) as i64 - 2;
                c /= 5;
                v
            })
            .collect();
        if coeffs.iter().all(|&v| v == 0) {
            continue;
        }
        let lead = *coeffs.iter().rev().find(|&&v| v != 0).expect("nonzero");
        let g = coeffs.iter().fold(0i64, |acc, &v| gcd(acc, v.abs()));
        let canonical: Vec<i64> = coeffs.iter().map(|&v| v * lead.signum() / g).collect();
        if !seen.insert(canonical.clone()) {
            continue;
        }
        // coefficient k belongs to x^k y^(D−k)
        let f = Polynomial::from_terms(
            2,
            canonical
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(k, &v)| (ExponentVector::new(vec![k as u32, degree - k as u32]), int(v))),
        )
        .expect("valid terms");
        debug_assert!(f.leading_term().is_some_and(|(_, c)| *c > int(0)));
        out.push(f);
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generates the corpus described by `spec`, deterministically from its seed.
pub fn generate(spec: &CorpusSpec) -> Result<Vec<CorpusItem>, CliError> {
    let (n, degree) = (spec.n, spec.degree);
    if n == 0 {
        return Err(CliError::Usage("need at least one variable".into()));
    }
    if degree < 2 {
        return Err(CliError::Usage("form degree must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut items = Vec::with_capacity(spec.count);
    match spec.family {
        Family::Fermat => {
            let f = Polynomial::from_terms(
                n,
                (0..n).map(|i| {
                    let mut e = vec![0; n];
                    e[i] = degree;
                    (ExponentVector::new(e), int(1))
                }),
            )
            .expect("valid terms");
            items.push(CorpusItem::Form(f));
        }
        Family::RandomSmooth => {
            for _ in 0..spec.count {
                items.push(CorpusItem::Form(smooth_form(&mut rng, n, degree, spec.density)?));
            }
        }
        Family::RandomSparse => {
            for _ in 0..spec.count {
                items.push(CorpusItem::Form(sparse_form(&mut rng, n, degree)));
            }
        }
        Family::BinaryCatalog => {
            let all = binary_catalog(degree);
            let take = if spec.count == 0 { all.len() } else { spec.count.min(all.len()) };
            items.extend(all.into_iter().take(take).map(CorpusItem::Form));
        }
        Family::DisjointSums => {
            if n < 2 {
                return Err(CliError::Usage("disjoint sums need at least two variables".into()));
            }
            for _ in 0..spec.count {
                let r = rng.random_range(1..n);
                let mut vars: Vec<usize> = (0..n).collect();
                rand::seq::SliceRandom::shuffle(vars.as_mut_slice(), &mut rng);
                let (mut left, mut right) = (vars[..r].to_vec(), vars[r..].to_vec());
                left.sort_unstable();
                right.sort_unstable();
                let g = block_form(&mut rng, left.len(), degree, spec.density)?;
                let h = block_form(&mut rng, right.len(), degree, spec.density)?;
                items.push(CorpusItem::Form(&embed(&g, n, &left) + &embed(&h, n, &right)));
            }
        }
        Family::RandomRegular => {
            for _ in 0..spec.count {
                let mut found = None;
                for _ in 0..MAX_ATTEMPTS {
                    let g: Vec<Polynomial> = (0..n).map(|_| random_form(&mut rng, n, degree - 1, spec.density)).collect();
                    if is_regular_sequence(&g).map(|w| w.regular).unwrap_or(false) {
                        found = Some(g);
                        break;
                    }
                }
                let g = found.ok_or_else(|| {
                    CliError::Corpus(format!("no regular sequence found after {MAX_ATTEMPTS} attempts"))
                })?;
                items.push(CorpusItem::Generators(g));
            }
        }
    }
    Ok(items)
}
