//! Gradient points, Hilbert functions and Hilbert points of `S/(g_1,…,g_n)`,
//! associated forms, and the socle-monomial check.
//!
//! For `n` generators of degree `d` in `n` variables the quotient is Artinian
//! exactly when its Hilbert function vanishes in degree `ν + 1`, `ν = n(d−1)`;
//! then it equals the coefficients of `(1 + t + ⋯ + t^{d−1})^n` and the
//! degree-`ν` piece of the ideal is a hyperplane. The associated form is the
//! dual form cutting out that hyperplane under the polar pairing.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, FramedOnePs, Result};
use crate::lambda::OnePs;
use crate::linalg::{nullspace, span_of_multiples, GradedSubspace};
use crate::poly::{monomial_count, polar_pair, DualPolynomial, ExponentVector, LinearChange, Polynomial};
use crate::rational::Rational;

/// Span of the first partials of a homogeneous `F` of degree at least 2.
///
/// Fails with [`Error::DegenerateGradient`] when the partials are linearly
/// dependent; the error carries a frame in which `F` omits the first
/// variable, together with the 1-PS `(−(n−1), 1, …, 1)` destabilizing it.
pub fn gradient_point(f: &Polynomial) -> Result<GradedSubspace> {
    let degree = f.homogeneous_degree()?;
    if degree < 2 {
        return Err(Error::PreconditionFailed(format!(
            "gradient point needs degree at least 2, found {degree}"
        )));
    }
    let n = f.n_vars();
    let partials = f.gradient();
    let w = GradedSubspace::from_spanning(n, degree - 1, &partials)?;
    if w.rank() < n {
        return Err(Error::DegenerateGradient {
            rank: w.rank(),
            n_vars: n,
            certificate: Box::new(degenerate_certificate(&partials, degree - 1)),
        });
    }
    Ok(w)
}

/// A frame whose first column is a linear dependency among the partials, so
/// that `F∘T` does not involve `x_1`.
fn degenerate_certificate(partials: &[Polynomial], degree: u32) -> FramedOnePs {
    let n = partials.len();
    let mut weights = vec![1i64; n];
    weights[0] = -(n as i64 - 1);
    let lambda = OnePs::new(weights).expect("weights sum to zero");

    if let Some(i) = partials.iter().position(Polynomial::is_zero) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, i);
        let frame = if i == 0 {
            LinearChange::identity(n)
        } else {
            LinearChange::signed_permutation(&perm).expect("transposition")
        };
        return FramedOnePs { frame, lambda };
    }

    // Σ_i c_i ∂F/∂x_i = 0 for every c in the nullspace of the coefficient matrix.
    let monomials = ExponentVector::all_of_degree(n, degree);
    let rows: Vec<Vec<Rational>> = monomials
        .iter()
        .map(|m| partials.iter().map(|p| p.coefficient(m)).collect())
        .collect();
    let kernel = nullspace(rows, n);
    let c = kernel.into_iter().next().expect("rank deficiency gives a kernel vector");
    let p = c.iter().position(|v| !v.is_zero()).expect("nonzero kernel vector");
    let mut columns: Vec<Vec<Rational>> = vec![c];
    for j in (0..n).filter(|&j| j != p) {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        columns.push(e);
    }
    let rows: Vec<Vec<Rational>> = (0..n).map(|i| columns.iter().map(|col| col[i].clone()).collect()).collect();
    let mut frame = LinearChange::from_rows(rows).expect("square");
    let det = frame.determinant();
    if n >= 2 && !det.is_one() {
        let rows: Vec<Vec<Rational>> = frame
            .rows()
            .map(|r| {
                let mut r = r.to_vec();
                r[1] = &r[1] / &det;
                r
            })
            .collect();
        frame = LinearChange::from_rows(rows).expect("square");
    }
    FramedOnePs { frame, lambda }
}

fn generator_shape(generators: &[Polynomial]) -> Result<(usize, u32)> {
    let first = generators
        .first()
        .ok_or_else(|| Error::PreconditionFailed("no generators".into()))?;
    let n = first.n_vars();
    let d = first.homogeneous_degree()?;
    for g in generators {
        if g.n_vars() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.n_vars() });
        }
        let dg = g.homogeneous_degree()?;
        if dg != d {
            return Err(Error::DegreeMismatch { expected: d, found: dg });
        }
    }
    Ok((n, d))
}

/// `dim (S/I)_m` for `m = 0, …, m_max`.
pub fn hilbert_function(generators: &[Polynomial], m_max: u32) -> Result<Vec<usize>> {
    let (n, _) = generator_shape(generators)?;
    (0..=m_max)
        .map(|m| Ok(monomial_count(n, m) - span_of_multiples(generators, m)?.rank()))
        .collect()
}

/// Coefficients of `(1 + t + ⋯ + t^{d−1})^n`.
pub fn expected_hilbert_function(n: usize, d: u32) -> Vec<usize> {
    let mut coeffs = vec![1usize];
    for _ in 0..n {
        let mut next = vec![0usize; coeffs.len() + d as usize - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for k in 0..d as usize {
                next[i + k] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// Socle degree `n(d − 1)`.
pub fn socle_degree(n: usize, d: u32) -> u32 {
    n as u32 * (d.saturating_sub(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityWitness {
    pub regular: bool,
    /// `dim (S/I)_{ν+1}`; zero exactly for regular sequences.
    pub top_dimension: usize,
    /// Full Hilbert function up to `ν + 1`, computed when regular.
    pub hilbert_function: Option<Vec<usize>>,
}

/// Decides whether `n` generators of degree `d` in `n` variables form a regular
/// sequence, via `dim (S/I)_{ν+1} = 0`.
pub fn is_regular_sequence(generators: &[Polynomial]) -> Result<RegularityWitness> {
    let (n, d) = generator_shape(generators)?;
    if generators.len() != n {
        return Err(Error::WrongGeneratorCount { expected: n, found: generators.len() });
    }
    let nu = socle_degree(n, d);
    let top = monomial_count(n, nu + 1) - span_of_multiples(generators, nu + 1)?.rank();
    let regular = top == 0;
    let hilbert_function = if regular { Some(hilbert_function(generators, nu + 1)?) } else { None };
    Ok(RegularityWitness { regular, top_dimension: top, hilbert_function })
}

/// The degree-`m` piece of the ideal, viewed as a point of a Grassmannian.
#[derive(Debug, Clone)]
pub struct HilbertPoint {
    pub m: u32,
    pub generator_degree: u32,
    pub ideal_piece: GradedSubspace,
    pub codim: usize,
}

/// The `m`-th Hilbert point. With `require_regular`, non-regular generator
/// lists are rejected with [`Error::NotRegular`].
pub fn hilbert_point(generators: &[Polynomial], m: u32, require_regular: bool) -> Result<HilbertPoint> {
    let (n, d) = generator_shape(generators)?;
    if require_regular {
        if generators.len() != n {
            return Err(Error::WrongGeneratorCount { expected: n, found: generators.len() });
        }
        let nu = socle_degree(n, d);
        let top = span_of_multiples(generators, nu + 1)?;
        if top.codim() != 0 {
            return Err(Error::NotRegular);
        }
    }
    let ideal_piece = span_of_multiples(generators, m)?;
    let codim = ideal_piece.codim();
    Ok(HilbertPoint { m, generator_degree: d, ideal_piece, codim })
}

/// Result of the socle-monomial check under one 1-PS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleReport {
    /// The unique monomial of degree `ν` that is not an initial monomial of `I_ν`.
    pub missing: ExponentVector,
    /// `x_1^{d−1}⋯x_n^{d−1}`.
    pub balanced: ExponentVector,
    /// Whether `missing ≥_λ balanced`.
    pub dominates: bool,
}

impl HilbertPoint {
    pub fn n_vars(&self) -> usize {
        self.ideal_piece.n_vars()
    }

    /// For the socle-degree Hilbert point of a regular sequence: the missing
    /// initial monomial under a sorted `λ` and its comparison with the
    /// balanced monomial.
    pub fn socle_monomial(&self, lambda: &OnePs) -> Result<SocleReport> {
        if !lambda.is_sorted() {
            return Err(Error::NotSorted);
        }
        let missing = self.ideal_piece.non_pivots(lambda)?;
        if missing.len() != 1 {
            return Err(Error::MultipleMissing(missing.len()));
        }
        let missing = missing.into_iter().next().expect("one element");
        let balanced = ExponentVector::balanced(self.n_vars(), self.generator_degree.saturating_sub(1));
        if balanced.degree() != missing.degree() {
            return Err(Error::PreconditionFailed(format!(
                "Hilbert point in degree {} is not the socle degree {}",
                missing.degree(),
                balanced.degree()
            )));
        }
        let dominates = lambda.compare_unchecked(&missing, &balanced) != Ordering::Less;
        Ok(SocleReport { missing, balanced, dominates })
    }

    /// The dual form vanishing on a codimension-one ideal piece, unnormalized.
    pub fn apolar_form(&self) -> Result<DualPolynomial> {
        if self.codim != 1 {
            return Err(Error::NotRegular);
        }
        let a = self.ideal_piece.annihilator().into_iter().next().expect("codimension one");
        let dual = Polynomial::from_terms(
            a.n_vars(),
            a.terms()
                .map(|(e, c)| (e.clone(), c / Rational::from_integer(e.factorial()))),
        )?;
        Ok(DualPolynomial(dual))
    }
}

/// Socle-monomial report for a regular sequence under a sorted `λ`.
pub fn socle_monomial_report(generators: &[Polynomial], lambda: &OnePs) -> Result<SocleReport> {
    let (n, d) = generator_shape(generators)?;
    let point = hilbert_point(generators, socle_degree(n, d), true)?;
    point.socle_monomial(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `polar_pair(A, hessian(F)) = 1`.
    HessianNormalized,
    /// Graded-lexicographically leading coefficient is 1.
    MonomialNormalized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedForm {
    pub dual_form: DualPolynomial,
    pub normalization: Normalization,
}

/// Associated form of a regular sequence, monomial-normalized.
pub fn associated_form(generators: &[Polynomial]) -> Result<AssociatedForm> {
    let (n, d) = generator_shape(generators)?;
    let point = hilbert_point(generators, socle_degree(n, d), true)?;
    let raw = point.apolar_form()?;
    let (_, lead) = raw.0.leading_term().expect("nonzero apolar form");
    let dual_form = DualPolynomial(raw.0.scale(&(Rational::one() / lead)));
    Ok(AssociatedForm { dual_form, normalization: Normalization::MonomialNormalized })
}

/// Associated form of a smooth `F` (of its gradient), normalized to take the
/// value 1 on the Hessian of `F`.
pub fn associated_form_of(f: &Polynomial) -> Result<AssociatedForm> {
    let partials = f.gradient();
    if partials.iter().any(Polynomial::is_zero) {
        gradient_point(f)?;
    }
    let (n, d) = generator_shape(&partials)?;
    let point = hilbert_point(&partials, socle_degree(n, d), true)?;
    let raw = point.apolar_form()?;
    let value = polar_pair(&raw, &f.hessian()?)?;
    if value.is_zero() {
        return Err(Error::InvariantViolated("Hessian lies in the socle-degree ideal piece".into()));
    }
    let dual_form = DualPolynomial(raw.0.scale(&(Rational::one() / value)));
    Ok(AssociatedForm { dual_form, normalization: Normalization::HessianNormalized })
}
