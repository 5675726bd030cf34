//! Torus stability through exact state-polytope linear programming,
//! destabilizer search over coordinate frames, the two transfer directions
//! between a form and its gradient point, the binary-form oracle, and
//! disjoint-variable decomposition.

mod binary;
mod decompose;
mod lp;
mod search;
mod transfer;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, FramedOnePs, Result};
use crate::lambda::{full_grid, OnePs};
use crate::linalg::{nullspace, GradedSubspace};
use crate::poly::{binomial, LinearChange, Polynomial};
use crate::rational::{centered_integer_weights, Rational};

pub use binary::{binary_oracle, targeted_frame, BinaryVerdict, ProjectiveRoot};
pub use decompose::{disjoint_decomposition, Decomposition};
pub use search::{
    find_destabilizer, find_gradient_destabilizer, find_subspace_destabilizer, random_frame,
    sorting_frame, subspace_torus_verdict, LambdaStrategy, SearchConfig,
};
pub use transfer::{
    align_initials, boundary_analysis, transfer_form_to_grad, transfer_grad_to_form,
    transfer_grad_to_form_framed, AlignedRun, BackwardTransfer, BoundaryAnalysis, ForwardTransfer, TransferRoute,
};

/// Default limit on the number of Plücker coordinates enumerated for a
/// Grassmannian state.
pub const DEFAULT_STATE_CAP: u128 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSource {
    FormSupport,
    GrassmannianPlucker,
}

/// Weight characters recentered at the barycenter; every point sums to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    points: Vec<Vec<Rational>>,
    source: StateSource,
}

impl StateSet {
    /// Points must be nonempty, of equal length, and each sum to zero.
    pub fn new(points: Vec<Vec<Rational>>, source: StateSource) -> Result<Self> {
        let n = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::PreconditionFailed("empty state".into()))?;
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.len() });
            }
            if !p.iter().fold(Rational::zero(), |acc, v| acc + v).is_zero() {
                return Err(Error::PreconditionFailed("state point does not sum to zero".into()));
            }
        }
        let mut points = points;
        points.sort();
        points.dedup();
        Ok(StateSet { points, source })
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn source(&self) -> StateSource {
        self.source
    }

    pub fn n(&self) -> usize {
        self.points[0].len()
    }

    /// `⟨λ, p⟩` for every point.
    pub fn pairings(&self, lambda: &OnePs) -> Vec<Rational> {
        self.points.iter().map(|p| pair(lambda, p)).collect()
    }

    /// `min_p ⟨λ, p⟩`.
    pub fn min_pairing(&self, lambda: &OnePs) -> Rational {
        self.pairings(lambda).into_iter().min().expect("nonempty state")
    }
}

fn pair(lambda: &OnePs, p: &[Rational]) -> Rational {
    lambda
        .weights()
        .iter()
        .zip(p)
        .filter(|(w, _)| **w != 0)
        .map(|(&w, v)| v * Rational::from_integer(BigInt::from(w)))
        .fold(Rational::zero(), |acc, v| acc + v)
}

fn recenter(sum: Vec<Rational>, total: Rational) -> Vec<Rational> {
    let shift = total / Rational::from_integer(BigInt::from(sum.len()));
    sum.into_iter().map(|v| v - &shift).collect()
}

/// Support exponents of `F` shifted by `−(d+1)/n` in each coordinate.
pub fn form_state(f: &Polynomial) -> Result<StateSet> {
    let degree = f.homogeneous_degree()?;
    let total = Rational::from_integer(BigInt::from(degree));
    let points = f
        .support()
        .map(|e| {
            let raw = e.as_slice().iter().map(|&a| Rational::from_integer(BigInt::from(a))).collect();
            recenter(raw, total.clone())
        })
        .collect();
    StateSet::new(points, StateSource::FormSupport)
}

/// Recentered exponent sums of every basis of monomials with a nonzero
/// Plücker coordinate. Refuses when more than `cap` subsets would be scanned.
pub fn grassmannian_state(w: &GradedSubspace, cap: u128) -> Result<StateSet> {
    let basis = w.monomial_basis();
    let big_n = basis.len();
    let k = w.rank();
    if k == 0 {
        return Err(Error::PreconditionFailed("zero subspace has no Plücker coordinates".into()));
    }
    let needed = binomial(big_n as u128, k as u128);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let rows = w.rows();
    let n = w.n_vars();
    let total = Rational::from_integer(BigInt::from(k as u64 * w.degree() as u64));
    let mut points = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if minor_nonzero(rows, &subset) {
            let mut sum = vec![0u64; n];
            for &c in &subset {
                for (s, &a) in sum.iter_mut().zip(basis.monomials()[c].as_slice()) {
                    *s += a as u64;
                }
            }
            let raw = sum.into_iter().map(|v| Rational::from_integer(BigInt::from(v))).collect();
            points.push(recenter(raw, total.clone()));
        }
        // next k-subset in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return StateSet::new(points, StateSource::GrassmannianPlucker);
            }
            i -= 1;
            if subset[i] < big_n - k + i {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn minor_nonzero(rows: &[Vec<Rational>], columns: &[usize]) -> bool {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| columns.iter().map(|&c| r[c].clone()).collect()).collect();
    let k = columns.len();
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(p, col);
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for c in col..k {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityStatus {
    Stable,
    StrictlySemistable,
    Unstable,
    Unknown,
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityStatus::Stable => "stable",
            StabilityStatus::StrictlySemistable => "strictly-semistable",
            StabilityStatus::Unstable => "unstable",
            StabilityStatus::Unknown => "unknown",
        })
    }
}

/// What a search tried before giving up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetReport {
    pub frames_tried: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `min_p ⟨λ, p⟩ > 0` for the state in the given frame.
    Destabilizing(FramedOnePs),
    /// `⟨λ, p⟩ ≥ 0` for all points, and convex weights (indexed like the
    /// state points) whose combination is the origin.
    Supporting { lambda: OnePs, combination: Vec<Rational> },
    /// Convex weights expressing the origin; no supporting 1-PS exists.
    Interior { combination: Vec<Rational> },
    Budget(BudgetReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub certificate: Certificate,
}

impl StabilityVerdict {
    pub fn is_unstable(&self) -> bool {
        self.status == StabilityStatus::Unstable
    }

    /// The destabilizing frame and 1-PS of an unstable verdict.
    pub fn destabilizer(&self) -> Option<&FramedOnePs> {
        match &self.certificate {
            Certificate::Destabilizing(c) => Some(c),
            _ => None,
        }
    }

    fn with_frame(mut self, frame: &LinearChange) -> Self {
        if let Certificate::Destabilizing(c) = &mut self.certificate {
            c.frame = frame.clone();
        }
        self
    }
}

fn rational_to_one_ps(values: &[Rational]) -> Result<OnePs> {
    OnePs::new(centered_integer_weights(values)?)
}

/// Decides whether the origin lies outside, on the boundary of, or inside
/// the convex hull of the state (within the hyperplane `Σ z_i = 0`).
pub fn torus_verdict(state: &StateSet) -> Result<StabilityVerdict> {
    let n = state.n();
    let points = state.points();
    let m = points.len();
    // Points sum to zero, so λ may be shifted into [0, 1]^n.
    // Variables (μ_1, …, μ_n, t): t − ⟨μ, p_j⟩ ≤ 0, μ_i ≤ 1.
    let mut a = Vec::with_capacity(m + n);
    let mut b = Vec::with_capacity(m + n);
    for p in points {
        let mut row: Vec<Rational> = p.iter().map(|v| -v).collect();
        row.push(Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    for i in 0..n {
        let mut row = vec![Rational::zero(); n + 1];
        row[i] = Rational::one();
        a.push(row);
        b.push(Rational::one());
    }
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let sol = lp::maximize(&a, &b, &c).expect("bounded by the unit box");

    let verdict = if sol.value.is_positive() {
        let lambda = rational_to_one_ps(&sol.x[..n])?;
        StabilityVerdict {
            status: StabilityStatus::Unstable,
            certificate: Certificate::Destabilizing(FramedOnePs { frame: LinearChange::identity(n), lambda }),
        }
    } else {
        let y = &sol.duals[..m];
        let total: Rational = y.iter().fold(Rational::zero(), |acc, v| acc + v);
        let combination: Vec<Rational> = y.iter().map(|v| v / &total).collect();
        match supporting_one_ps(state)? {
            Some(lambda) => StabilityVerdict {
                status: StabilityStatus::StrictlySemistable,
                certificate: Certificate::Supporting { lambda, combination },
            },
            None => StabilityVerdict {
                status: StabilityStatus::Stable,
                certificate: Certificate::Interior { combination },
            },
        }
    };
    verify_torus_certificate(state, &verdict)?;
    Ok(verdict)
}

/// A nontrivial λ with `⟨λ, p⟩ ≥ 0` on the whole state, when the origin (assumed
/// in the hull) is not interior.
fn supporting_one_ps(state: &StateSet) -> Result<Option<OnePs>> {
    let n = state.n();
    if n < 2 {
        return Ok(None);
    }
    let points = state.points();
    let mut rows: Vec<Vec<Rational>> = points.to_vec();
    rows.push(vec![Rational::one(); n]);
    if let Some(v) = nullspace(rows, n).into_iter().next() {
        return rational_to_one_ps(&v).map(Some);
    }
    // Full-dimensional hull: maximize ⟨μ, Σ p⟩ with ⟨μ, p_j⟩ ≥ 0, μ ∈ [0, 1]^n.
    let mut a = Vec::with_capacity(points.len() + n);
    let mut b = Vec::with_capacity(points.len() + n);
    for p in points {
        a.push(p.iter().map(|v| -v).collect::<Vec<_>>());
        b.push(Rational::zero());
    }
    for i in 0..n {
        let mut row = vec![Rational::zero(); n];
        row[i] = Rational::one();
        a.push(row);
        b.push(Rational::one());
    }
    let c: Vec<Rational> = (0..n)
        .map(|i| points.iter().fold(Rational::zero(), |acc, p| acc + &p[i]))
        .collect();
    let sol = lp::maximize(&a, &b, &c).expect("bounded by the unit box");
    if sol.value.is_positive() {
        rational_to_one_ps(&sol.x).map(Some)
    } else {
        Ok(None)
    }
}

fn verify_torus_certificate(state: &StateSet, verdict: &StabilityVerdict) -> Result<()> {
    let fail = |what: &str| Err(Error::InvariantViolated(format!("torus certificate: {what}")));
    let combination_ok = |weights: &[Rational]| {
        let n = state.n();
        weights.len() == state.points().len()
            && weights.iter().all(|w| !w.is_negative())
            && weights.iter().fold(Rational::zero(), |acc, w| acc + w).is_one()
            && (0..n).all(|i| {
                state
                    .points()
                    .iter()
                    .zip(weights)
                    .fold(Rational::zero(), |acc, (p, w)| acc + &p[i] * w)
                    .is_zero()
            })
    };
    match &verdict.certificate {
        Certificate::Destabilizing(c) => {
            if !state.min_pairing(&c.lambda).is_positive() {
                return fail("separating 1-PS is not positive on the state");
            }
        }
        Certificate::Supporting { lambda, combination } => {
            if lambda.is_trivial() || state.min_pairing(lambda).is_negative() {
                return fail("supporting 1-PS is negative on the state");
            }
            if !combination_ok(combination) {
                return fail("convex combination does not reach the origin");
            }
        }
        Certificate::Interior { combination } => {
            if !combination_ok(combination) {
                return fail("convex combination does not reach the origin");
            }
        }
        Certificate::Budget(_) => {}
    }
    Ok(())
}

/// Verdict by exhaustive search over integer 1-PS with `|λ_i| ≤ bound`.
pub fn grid_verdict(state: &StateSet, bound: i64) -> StabilityStatus {
    let mut supported = false;
    for lambda in full_grid(state.n(), bound) {
        let min = state.min_pairing(&lambda);
        if min.is_positive() {
            return StabilityStatus::Unstable;
        }
        if min.is_zero() {
            supported = true;
        }
    }
    if supported {
        StabilityStatus::StrictlySemistable
    } else {
        StabilityStatus::Stable
    }
}

/// Grid bound `2(d+1)n` used by the cross-check oracle.
pub fn grid_bound(form_degree: u32, n: usize) -> i64 {
    2 * form_degree as i64 * n as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, Some(n)).unwrap()
    }

    fn state_of(text: &str, n: usize) -> StateSet {
        form_state(&p(text, n)).unwrap()
    }

    #[test]
    fn form_state_examples() {
        assert_eq!(state_of("x^2*y", 2).points(), &[vec![frac(1, 2), frac(-1, 2)]]);
        let s = state_of("x^3+y^3", 2);
        assert_eq!(s.points().len(), 2);
        assert!(s.points().contains(&vec![frac(3, 2), frac(-3, 2)]));
        assert!(s.points().contains(&vec![frac(-3, 2), frac(3, 2)]));
        let s = state_of("x^2*y - x*y^2", 2);
        assert!(s.points().contains(&vec![frac(1, 2), frac(-1, 2)]));
        assert!(s.points().contains(&vec![frac(-1, 2), frac(1, 2)]));
        assert!(form_state(&Polynomial::zero(2)).is_err());
    }

    #[test]
    fn grassmannian_state_examples() {
        let w = GradedSubspace::from_spanning(2, 2, &[p("x^2", 2), p("y^2", 2)]).unwrap();
        assert_eq!(grassmannian_state(&w, 100).unwrap().points(), &[vec![int(0), int(0)]]);
        let w = GradedSubspace::from_spanning(2, 2, &[p("x*y", 2), p("x^2", 2)]).unwrap();
        assert_eq!(grassmannian_state(&w, 100).unwrap().points(), &[vec![int(1), int(-1)]]);
        let full = GradedSubspace::full(2, 2);
        assert_eq!(grassmannian_state(&full, 100).unwrap().points(), &[vec![int(0), int(0)]]);
        assert!(matches!(grassmannian_state(&full, 0), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn torus_verdict_examples() {
        let v = torus_verdict(&state_of("x^2*y", 2)).unwrap();
        assert_eq!(v.status, StabilityStatus::Unstable);
        assert_eq!(v.destabilizer().unwrap().lambda.weights(), &[1, -1]);

        let v = torus_verdict(&state_of("x^3+y^3", 2)).unwrap();
        assert_eq!(v.status, StabilityStatus::Stable);

        let v = torus_verdict(&state_of("x^2*y^2", 2)).unwrap();
        assert_eq!(v.status, StabilityStatus::StrictlySemistable);
    }

    #[test]
    fn torus_verdict_in_three_variables() {
        assert_eq!(torus_verdict(&state_of("x^3+y^3+z^3", 3)).unwrap().status, StabilityStatus::Stable);
        assert_eq!(torus_verdict(&state_of("x*y*z", 3)).unwrap().status, StabilityStatus::StrictlySemistable);
        // segment through the origin: boundary in the plane
        assert_eq!(
            torus_verdict(&state_of("x^2*z + y^2*z", 3)).unwrap().status,
            StabilityStatus::StrictlySemistable
        );
        assert_eq!(torus_verdict(&state_of("x^3 + y*z^2", 3)).unwrap().status, StabilityStatus::Unstable);
        assert_eq!(
            torus_verdict(&state_of("x^3 + x*y*z", 3)).unwrap().status,
            StabilityStatus::StrictlySemistable
        );
    }

    fn arb_state(n: usize, degree: u32) -> impl Strategy<Value = StateSet> {
        let monomials = crate::poly::ExponentVector::all_of_degree(n, degree);
        let len = monomials.len();
        proptest::collection::btree_set(0..len, 1..=len.min(5)).prop_map(move |picks| {
            let total = Rational::from_integer(BigInt::from(degree));
            let points = picks
                .into_iter()
                .map(|i| {
                    let raw = monomials[i]
                        .as_slice()
                        .iter()
                        .map(|&a| Rational::from_integer(BigInt::from(a)))
                        .collect();
                    recenter(raw, total.clone())
                })
                .collect();
            StateSet::new(points, StateSource::FormSupport).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn lp_agrees_with_grid_in_two_variables(s in arb_state(2, 5)) {
            let v = torus_verdict(&s).unwrap();
            prop_assert_eq!(v.status, grid_verdict(&s, grid_bound(5, 2)));
        }

        #[test]
        fn lp_agrees_with_grid_in_three_variables(s in arb_state(3, 3)) {
            let v = torus_verdict(&s).unwrap();
            prop_assert_eq!(v.status, grid_verdict(&s, grid_bound(3, 3)));
        }
    }
}
