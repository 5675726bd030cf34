//! Moving destabilizing 1-PS between a form and its gradient point.
//!
//! Forward: if `λ` makes every monomial of `F` positive, every monomial of
//! `∂F/∂x_i` has weight above `−λ_i`, so the gradient point has positive
//! Hilbert-Mumford weight. Backward: after an upper triangular change makes
//! the initial monomials of the partials distinct, the initial weights `w_i`
//! sum to the Plücker weight; shifting them by their mean gives `μ'` with
//! `w_i > μ'_i`, and `Σ (dλ_i − μ'_i) z_i` is positive on the support of `F`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::sorting_frame;
use crate::error::{Error, FramedOnePs, Result};
use crate::lambda::OnePs;
use crate::milnor::gradient_point;
use crate::poly::{ExponentVector, LinearChange, Polynomial, UpperTriangularChange};
use crate::rational::{centered_integer_weights, Rational};

/// Upper triangular change after which the partials of `F∘T` have pairwise
/// distinct `λ`-initial monomials, forming the initial Plücker coordinate of
/// the gradient point. `λ` must be sorted ascending.
pub fn align_initials(f: &Polynomial, lambda: &OnePs) -> Result<UpperTriangularChange> {
    if !lambda.is_sorted() {
        return Err(Error::NotSorted);
    }
    if lambda.n() != f.n_vars() {
        return Err(Error::DimensionMismatch { expected: f.n_vars(), found: lambda.n() });
    }
    let w = gradient_point(f)?;
    let n = f.n_vars();
    let mut g = f.clone();
    let mut total = UpperTriangularChange::identity(n);
    let mut claimed = vec![false; n];
    for _ in 0..n {
        let partials = g.gradient();
        let initial = |j: usize| lambda.initial_unchecked(&partials[j]).expect("independent partials are nonzero");
        let x = (0..n)
            .filter(|&j| !claimed[j])
            .map(initial)
            .min_by(|a, b| lambda.compare_unchecked(a, b))
            .expect("an unclaimed index remains")
            .clone();
        let j = (0..n).find(|&j| !claimed[j] && *initial(j) == x).expect("minimum is attained");
        let pivot = partials[j].coefficient(&x);
        let mut step = UpperTriangularChange::identity(n);
        for k in j + 1..n {
            let c = partials[k].coefficient(&x);
            if !c.is_zero() {
                step.set(j, k, -(c / &pivot))?;
            }
        }
        if !step.is_identity() {
            g = g.apply_substitution(&step)?;
            total = total.then(&step)?;
        }
        claimed[j] = true;
    }

    let initials: BTreeSet<ExponentVector> = g
        .gradient()
        .iter()
        .map(|p| lambda.initial_unchecked(p).expect("nonzero").clone())
        .collect();
    let pivots: BTreeSet<ExponentVector> = w.pivot_set(lambda)?.monomials.into_iter().collect();
    if initials.len() != n || initials != pivots {
        return Err(Error::InvariantViolated("aligned initial monomials differ from the pivot set".into()));
    }
    Ok(total)
}

/// Weight bounds carried from a destabilized form to its gradient point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardTransfer {
    pub form_min_weight: i64,
    /// Smallest `λ`-weight in `∂F/∂x_i`; each exceeds `−λ_i`.
    pub partial_min_weights: Vec<i64>,
    pub hm_weight: i64,
}

/// Given `λ` with every monomial of `F` of positive weight, verifies that `λ`
/// destabilizes the gradient point.
pub fn transfer_form_to_grad(f: &Polynomial, lambda: &OnePs) -> Result<ForwardTransfer> {
    if lambda.n() != f.n_vars() {
        return Err(Error::DimensionMismatch { expected: f.n_vars(), found: lambda.n() });
    }
    let form_min_weight = lambda.min_weight(f).ok_or(Error::ZeroPolynomial)?;
    if form_min_weight <= 0 {
        return Err(Error::PreconditionFailed(format!(
            "λ = ({lambda}) has minimum weight {form_min_weight} on the form"
        )));
    }
    let w = gradient_point(f)?;
    let partial_min_weights: Vec<i64> = f
        .gradient()
        .iter()
        .map(|p| lambda.min_weight(p).expect("independent partials are nonzero"))
        .collect();
    for (i, (&m, &l)) in partial_min_weights.iter().zip(lambda.weights()).enumerate() {
        if m <= -l {
            return Err(Error::InvariantViolated(format!(
                "partial {} has weight {m}, not above {}",
                i + 1,
                -l
            )));
        }
    }
    let hm_weight = w.hm_weight(lambda)?;
    if hm_weight <= 0 {
        return Err(Error::InvariantViolated(format!("gradient point has weight {hm_weight}")));
    }
    Ok(ForwardTransfer { form_min_weight, partial_min_weights, hm_weight })
}

/// Data of the aligned run of the backward transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedRun {
    pub alignment: UpperTriangularChange,
    pub aligned_form: Polynomial,
    /// `w_λ(init(∂_i(F∘T)))`.
    pub initial_weights: Vec<i64>,
    pub mu_prime: Vec<Rational>,
    /// Coefficients `dλ_i − μ'_i` of the linear functional `M`.
    pub normal: Vec<Rational>,
    /// Smallest value of `M` on the support of the aligned form.
    pub min_value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferRoute {
    Aligned(Box<AlignedRun>),
    /// The partials are dependent and `F` omits a variable in a suitable frame.
    DegenerateGradient,
}

/// A destabilizing 1-PS for a form obtained from one for its gradient point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardTransfer {
    /// `F∘frame` is destabilized by `one_ps`.
    pub frame: LinearChange,
    pub one_ps: OnePs,
    /// Smallest `one_ps`-weight on the support of `F∘frame`; positive.
    pub min_weight: i64,
    pub route: TransferRoute,
}

impl BackwardTransfer {
    pub fn certificate(&self) -> FramedOnePs {
        FramedOnePs { frame: self.frame.clone(), lambda: self.one_ps.clone() }
    }
}

fn aligned_run(f: &Polynomial, lambda: &OnePs, strict: bool) -> Result<AlignedRun> {
    let degree = f.homogeneous_degree()?;
    let alignment = align_initials(f, lambda)?;
    let aligned_form = f.apply_substitution(&alignment)?;
    let hm = gradient_point(&aligned_form)?.hm_weight(lambda)?;
    if (strict && hm <= 0) || (!strict && hm != 0) {
        return Err(Error::PreconditionFailed(format!(
            "gradient point has weight {hm} under λ = ({lambda})"
        )));
    }
    let initial_weights: Vec<i64> = aligned_form
        .gradient()
        .iter()
        .map(|p| lambda.weight_unchecked(lambda.initial_unchecked(p).expect("nonzero")))
        .collect();
    if initial_weights.iter().sum::<i64>() != hm {
        return Err(Error::InvariantViolated("initial weights do not sum to the Plücker weight".into()));
    }
    let n = f.n_vars();
    let mean = Rational::new(BigInt::from(hm), BigInt::from(n));
    let mu_prime: Vec<Rational> = initial_weights
        .iter()
        .map(|&w| Rational::from_integer(BigInt::from(w)) - &mean)
        .collect();
    let d = BigInt::from(degree - 1);
    let normal: Vec<Rational> = lambda
        .weights()
        .iter()
        .zip(&mu_prime)
        .map(|(&l, m)| Rational::from_integer(&d * l) - m)
        .collect();
    let min_value = aligned_form
        .support()
        .map(|e| {
            e.as_slice()
                .iter()
                .zip(&normal)
                .map(|(&a, c)| c * Rational::from_integer(BigInt::from(a)))
                .fold(Rational::zero(), |acc, v| acc + v)
        })
        .min()
        .expect("nonzero form");
    let ok = if strict { min_value.is_positive() } else { !min_value.is_negative() };
    if !ok {
        return Err(Error::InvariantViolated(format!("linear functional takes value {min_value} on the support")));
    }
    Ok(AlignedRun { alignment, aligned_form, initial_weights, mu_prime, normal, min_value })
}

/// Backward transfer for a sorted `λ` destabilizing the gradient point of `F`
/// (after alignment, which does not change the Plücker weight).
pub fn transfer_grad_to_form(f: &Polynomial, lambda: &OnePs) -> Result<BackwardTransfer> {
    if !lambda.is_sorted() {
        return Err(Error::NotSorted);
    }
    let run = aligned_run(f, lambda, true)?;
    let one_ps = OnePs::new(centered_integer_weights(&run.normal)?)?;
    let min_weight = one_ps.min_weight(&run.aligned_form).expect("nonzero form");
    if min_weight <= 0 {
        return Err(Error::InvariantViolated("integer 1-PS does not destabilize the aligned form".into()));
    }
    Ok(BackwardTransfer {
        frame: run.alignment.to_linear(),
        one_ps,
        min_weight,
        route: TransferRoute::Aligned(Box::new(run)),
    })
}

/// Backward transfer for `λ` (any order) destabilizing the gradient point of
/// `F∘frame`. Degenerate gradients are answered by the frame in which `F`
/// omits a variable. The returned frame includes `frame`.
pub fn transfer_grad_to_form_framed(f: &Polynomial, frame: &LinearChange, lambda: &OnePs) -> Result<BackwardTransfer> {
    let g = f.substitute(frame)?;
    let (perm_frame, sorted) = sorting_frame(lambda);
    let sorted_form = g.substitute(&perm_frame)?;
    let base = frame.compose(&perm_frame)?;
    match transfer_grad_to_form(&sorted_form, &sorted) {
        Ok(t) => Ok(BackwardTransfer { frame: base.compose(&t.frame)?, ..t }),
        Err(Error::DegenerateGradient { certificate, .. }) => {
            let total = base.compose(&certificate.frame)?;
            let moved = f.substitute(&total)?;
            let min_weight = certificate.lambda.min_weight(&moved).ok_or(Error::ZeroPolynomial)?;
            if min_weight <= 0 {
                return Err(Error::InvariantViolated("degenerate-gradient frame does not destabilize".into()));
            }
            Ok(BackwardTransfer {
                frame: total,
                one_ps: certificate.lambda,
                min_weight,
                route: TransferRoute::DegenerateGradient,
            })
        }
        Err(e) => Err(e),
    }
}

/// The non-strict run for a sorted `λ` with Plücker weight exactly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryAnalysis {
    pub run: AlignedRun,
    /// Nontrivial integer normal of `M` when `M ≢ 0`; it is nonnegative on
    /// the state of the aligned form, so that form is not torus-stable.
    pub supporting_one_ps: Option<OnePs>,
    /// When `M ≡ 0`: the number `r` of leading variables before the final run
    /// of equal weights, and whether the aligned form splits as
    /// `G(x_1..x_r) + H(x_{r+1}..x_n)`.
    pub split: Option<(usize, bool)>,
}

pub fn boundary_analysis(f: &Polynomial, lambda: &OnePs) -> Result<BoundaryAnalysis> {
    if !lambda.is_sorted() {
        return Err(Error::NotSorted);
    }
    if lambda.is_trivial() {
        return Err(Error::InvalidOnePs("trivial 1-PS".into()));
    }
    let run = aligned_run(f, lambda, false)?;
    if run.normal.iter().all(Zero::is_zero) {
        let weights = lambda.weights();
        let last = *weights.last().expect("nonempty");
        let r = weights.iter().position(|&w| w == last).expect("last entry matches");
        let splits = run.aligned_form.support().all(|e| {
            let s = e.as_slice();
            s[..r].iter().all(|&a| a == 0) || s[r..].iter().all(|&a| a == 0)
        });
        Ok(BoundaryAnalysis { run, supporting_one_ps: None, split: Some((r, splits)) })
    } else {
        let one_ps = OnePs::new(centered_integer_weights(&run.normal)?)?;
        Ok(BoundaryAnalysis { run, supporting_one_ps: Some(one_ps), split: None })
    }
}
