//! Exact multivariate polynomials over the rationals.
//!
//! Variables are indexed from zero in the API (`x1` in text is index 0).
//! Terms are stored in a `BTreeMap` keyed by [`ExponentVector`], whose `Ord`
//! is graded-lexicographic, so iteration order, equality and hashing are
//! deterministic.

mod change;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use change::{LinearChange, UpperTriangularChange};
pub use text::{parse_dual, parse_polynomial, VariableStyle};

/// Exponents `(a_1, …, a_n)` of a monomial `x_1^{a_1}⋯x_n^{a_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(n_vars: usize) -> Self {
        ExponentVector(vec![0; n_vars])
    }

    /// `x_i` as an exponent vector.
    pub fn unit(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        ExponentVector(e)
    }

    /// `(x_1⋯x_n)^power`.
    pub fn balanced(n_vars: usize, power: u32) -> Self {
        ExponentVector(vec![power; n_vars])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn product(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `a! = a_1!⋯a_n!`, the diagonal of the differentiation pairing.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &a in &self.0 {
            for k in 2..=a {
                acc *= k;
            }
        }
        acc
    }

    /// All exponent vectors of total degree `degree` in `n_vars` variables,
    /// ascending in graded-lexicographic order.
    pub fn all_of_degree(n_vars: usize, degree: u32) -> Vec<ExponentVector> {
        fn fill(prefix: &mut Vec<u32>, n_vars: usize, remaining: u32, out: &mut Vec<ExponentVector>) {
            if prefix.len() + 1 == n_vars {
                prefix.push(remaining);
                out.push(ExponentVector(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in 0..=remaining {
                prefix.push(a);
                fill(prefix, n_vars, remaining - a, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n_vars == 0 {
            if degree == 0 {
                out.push(ExponentVector(Vec::new()));
            }
            return out;
        }
        fill(&mut Vec::with_capacity(n_vars), n_vars, degree, &mut out);
        out
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// Number of monomials of degree `degree` in `n_vars` variables.
pub fn monomial_count(n_vars: usize, degree: u32) -> usize {
    if n_vars == 0 {
        return usize::from(degree == 0);
    }
    let top = degree as u128 + n_vars as u128 - 1;
    binomial(top, n_vars as u128 - 1) as usize
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// A polynomial in `n_vars` variables with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zero(n_vars), c)
    }

    /// The variable `x_i` (zero-based).
    pub fn var(n_vars: usize, i: usize) -> Result<Self> {
        if i >= n_vars {
            return Err(Error::IndexOutOfRange { index: i, n_vars });
        }
        Ok(Self::monomial(ExponentVector::unit(n_vars, i), Rational::one()))
    }

    pub fn monomial(exponents: ExponentVector, coefficient: Rational) -> Self {
        let n_vars = exponents.len();
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponents, coefficient);
        }
        Polynomial { n_vars, terms }
    }

    /// Builds a polynomial from possibly repeated terms; coefficients of equal
    /// exponents are summed and zeros dropped.
    pub fn from_terms(
        n_vars: usize,
        terms: impl IntoIterator<Item = (ExponentVector, Rational)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(n_vars);
        for (e, c) in terms {
            if e.len() != n_vars {
                return Err(Error::DimensionMismatch { expected: n_vars, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(n_vars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            n_vars,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(e.to_vec()), Rational::from_integer((*c).into()))),
        )
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Graded-lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(ExponentVector::degree);
        match degrees.next() {
            Some(first) => degrees.all(|d| d == first),
            None => true,
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        let degree = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(degree)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n_vars);
        }
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.n_vars, Rational::one());
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, found: other.n_vars });
        }
        Ok(())
    }

    /// `∂F/∂x_i` (zero-based `i`).
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.n_vars {
            return Err(Error::IndexOutOfRange { index: i, n_vars: self.n_vars });
        }
        let mut out = Polynomial::zero(self.n_vars);
        for (e, c) in &self.terms {
            let a = e.0[i];
            if a == 0 {
                continue;
            }
            let mut lowered = e.0.clone();
            lowered[i] -= 1;
            out.terms
                .insert(ExponentVector(lowered), c * Rational::from_integer(a.into()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.n_vars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// `F(T x)`: every `x_i` replaced by `Σ_j T_ij x_j`.
    pub fn substitute(&self, change: &LinearChange) -> Result<Polynomial> {
        if change.n() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, found: change.n() });
        }
        let n = self.n_vars;
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                let terms = (0..n).map(|j| (ExponentVector::unit(n, j), change.entry(i, j).clone()));
                Polynomial::from_terms(n, terms).expect("matching dimensions")
            })
            .collect();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(n);
        for (e, c) in &self.terms {
            let mut product = Polynomial::constant(n, c.clone());
            for (i, &a) in e.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let power = powers
                    .entry((i, a))
                    .or_insert_with(|| images[i].pow(a));
                product = &product * &*power;
            }
            out = &out + &product;
        }
        Ok(out)
    }

    /// Substitution `x_i ↦ x_i + Σ_{j>i} c_ij x_j`.
    pub fn apply_substitution(&self, change: &UpperTriangularChange) -> Result<Polynomial> {
        self.substitute(&change.to_linear())
    }

    /// Determinant of the matrix of second partials.
    pub fn hessian(&self) -> Result<Polynomial> {
        let n = self.n_vars;
        let first = self.gradient();
        let second: Vec<Vec<Polynomial>> = first
            .iter()
            .map(|p| (0..n).map(|j| p.partial_derivative(j).expect("index in range")).collect())
            .collect();
        Ok(determinant(&second, n))
    }

    /// Exponent-wise sum with `shift`: multiplication by a monomial.
    pub fn shift(&self, by: &ExponentVector) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, c)| (e.product(by), c.clone())).collect(),
        }
    }

    pub fn display_with(&self, style: VariableStyle) -> String {
        text::format_polynomial(self, style)
    }
}

/// Laplace expansion with memoization over column subsets.
fn determinant(matrix: &[Vec<Polynomial>], n: usize) -> Polynomial {
    fn expand(
        matrix: &[Vec<Polynomial>],
        n: usize,
        cols: u32,
        memo: &mut HashMap<u32, Polynomial>,
    ) -> Polynomial {
        let used = cols.count_ones() as usize;
        let row = n - used;
        if used == 0 {
            return Polynomial::constant(n, Rational::one());
        }
        if let Some(hit) = memo.get(&cols) {
            return hit.clone();
        }
        let mut acc = Polynomial::zero(n);
        let mut sign_positive = true;
        for col in 0..n {
            if cols & (1 << col) == 0 {
                continue;
            }
            let entry = &matrix[row][col];
            if !entry.is_zero() {
                let minor = expand(matrix, n, cols & !(1 << col), memo);
                let term = entry * &minor;
                acc = if sign_positive { &acc + &term } else { &acc - &term };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    expand(matrix, n, (1u32 << n) - 1, &mut memo)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_polynomial(self, VariableStyle::Primal))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs).expect("polynomials over the same variables");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs).expect("polynomials over the same variables");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs).expect("polynomials over the same variables");
        let mut out = Polynomial::zero(self.n_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.product(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

/// A form in the dual variables `u_i = ∂/∂x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualPolynomial(pub Polynomial);

impl DualPolynomial {
    pub fn as_polynomial(&self) -> &Polynomial {
        &self.0
    }

    pub fn n_vars(&self) -> usize {
        self.0.n_vars
    }
}

impl fmt::Display for DualPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_polynomial(&self.0, VariableStyle::Dual))
    }
}

/// Applies `a` as a constant-coefficient differential operator to `f`.
///
/// On monomials `⟨u^a, x^b⟩ = a!·[a = b]`. Either side being zero gives zero.
pub fn polar_pair(a: &DualPolynomial, f: &Polynomial) -> Result<Rational> {
    let a = &a.0;
    a.check_compatible(f)?;
    if a.is_zero() || f.is_zero() {
        return Ok(Rational::zero());
    }
    let da = a.homogeneous_degree()?;
    let df = f.homogeneous_degree()?;
    if da != df {
        return Err(Error::DegreeMismatch { expected: da, found: df });
    }
    let mut acc = Rational::zero();
    for (e, c) in a.terms() {
        if let Some(fc) = f.terms.get(e) {
            acc += c * fc * Rational::from_integer(e.factorial());
        }
    }
    Ok(acc)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, Some(n)).unwrap()
    }

    #[test]
    fn partial_derivative_examples() {
        assert_eq!(p("x^3+y^3", 2).partial_derivative(0).unwrap(), p("3*x^2", 2));
        assert_eq!(p("y^3", 2).partial_derivative(0).unwrap(), Polynomial::zero(2));
        assert_eq!(p("x^2*y", 2).partial_derivative(1).unwrap(), p("x^2", 2));
        assert!(matches!(
            p("x", 2).partial_derivative(2),
            Err(Error::IndexOutOfRange { index: 2, n_vars: 2 })
        ));
    }

    #[test]
    fn substitution_examples() {
        let mut c = UpperTriangularChange::identity(2);
        c.set(0, 1, int(1)).unwrap();
        assert_eq!(p("x^2", 2).apply_substitution(&c).unwrap(), p("x^2+2*x*y+y^2", 2));

        let f = p("x^3 - 2*x*y^2 + 1/3*y^3", 2);
        let id = UpperTriangularChange::identity(2);
        assert_eq!(f.apply_substitution(&id).unwrap(), f);

        let mut c = UpperTriangularChange::identity(2);
        c.set(0, 1, int(2)).unwrap();
        assert_eq!(p("x*y", 2).apply_substitution(&c).unwrap(), p("x*y+2*y^2", 2));

        let wrong = UpperTriangularChange::identity(3);
        assert!(matches!(f.apply_substitution(&wrong), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(p("x^3+y^3", 2).hessian().unwrap(), p("36*x*y", 2));
        assert_eq!(p("x^3+y^3+z^3", 3).hessian().unwrap(), p("216*x*y*z", 3));
        assert_eq!(p("x^2*y", 2).hessian().unwrap(), p("-4*x^2", 2));
    }

    #[test]
    fn polar_pair_examples() {
        let uv = DualPolynomial(p("x*y", 2));
        let u2 = DualPolynomial(p("x^2", 2));
        assert_eq!(polar_pair(&uv, &p("x*y", 2)).unwrap(), int(1));
        assert_eq!(polar_pair(&u2, &p("x^2", 2)).unwrap(), int(2));
        assert_eq!(polar_pair(&u2, &p("x*y", 2)).unwrap(), int(0));
        assert!(matches!(
            polar_pair(&u2, &p("x^3", 2)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn polar_pairing_matrix_is_positive_diagonal() {
        let monomials = ExponentVector::all_of_degree(3, 3);
        for a in &monomials {
            for b in &monomials {
                let value = polar_pair(
                    &DualPolynomial(Polynomial::monomial(a.clone(), int(1))),
                    &Polynomial::monomial(b.clone(), int(1)),
                )
                .unwrap();
                if a == b {
                    assert!(value > int(0));
                } else {
                    assert_eq!(value, int(0));
                }
            }
        }
    }

    fn embed(f: &Polynomial, n_total: usize, offset: usize) -> Polynomial {
        Polynomial::from_terms(
            n_total,
            f.terms().map(|(e, c)| {
                let mut v = vec![0; n_total];
                v[offset..offset + e.len()].copy_from_slice(e.as_slice());
                (ExponentVector::new(v), c.clone())
            }),
        )
        .unwrap()
    }

    #[test]
    fn hessian_of_disjoint_blocks_factors() {
        for (left, right) in [("x^3", "x^3+y^3"), ("x^3", "x^2*y+y^3"), ("x^4", "x^3*y+x*y^3")] {
            let g = p(left, 1);
            let h = p(right, 2);
            let whole = &embed(&g, 3, 0) + &embed(&h, 3, 1);
            let product = &embed(&g.hessian().unwrap(), 3, 0) * &embed(&h.hessian().unwrap(), 3, 1);
            assert_eq!(whole.hessian().unwrap(), product);
        }
    }

    #[test]
    fn monomial_enumeration_is_sorted_and_complete() {
        let all = ExponentVector::all_of_degree(3, 4);
        assert_eq!(all.len(), monomial_count(3, 4));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ExponentVector::new(vec![2, 1, 0]).factorial(), BigInt::from(2));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Polynomial::zero(2).homogeneous_degree(), Err(Error::ZeroPolynomial));
        assert_eq!(p("x^2+y", 2).homogeneous_degree(), Err(Error::NotHomogeneous));
        assert_eq!(p("x^2 - x^2", 2), Polynomial::zero(2));
    }

    pub(crate) fn arb_form(n: usize, degree: u32) -> impl Strategy<Value = Polynomial> {
        let monomials = ExponentVector::all_of_degree(n, degree);
        let len = monomials.len();
        proptest::collection::vec(-3i64..=3, len).prop_map(move |coeffs| {
            Polynomial::from_terms(
                n,
                monomials.iter().cloned().zip(coeffs.into_iter().map(int)),
            )
            .unwrap()
        })
    }

    fn arb_change(n: usize) -> impl Strategy<Value = UpperTriangularChange> {
        proptest::collection::vec((-3i64..=3, 1i64..=3), n * n).prop_map(move |entries| {
            let mut c = UpperTriangularChange::identity(n);
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = entries[i * n + j];
                    c.set(i, j, frac(a, b)).unwrap();
                }
            }
            c
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn euler_relation(f in arb_form(3, 3)) {
            let mut euler = Polynomial::zero(3);
            for i in 0..3 {
                let xi = Polynomial::var(3, i).unwrap();
                euler = &euler + &(&xi * &f.partial_derivative(i).unwrap());
            }
            prop_assert_eq!(euler, f.scale(&int(3)));
        }

        #[test]
        fn substitution_is_multiplicative(
            f in arb_form(3, 2),
            g in arb_form(3, 2),
            t in arb_change(3),
        ) {
            let lhs = (&f * &g).apply_substitution(&t).unwrap();
            let rhs = &f.apply_substitution(&t).unwrap() * &g.apply_substitution(&t).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_preserves_degree(f in arb_form(3, 3), t in arb_change(3)) {
            prop_assume!(!f.is_zero());
            let g = f.apply_substitution(&t).unwrap();
            prop_assert_eq!(g.homogeneous_degree().unwrap(), 3);
        }

        #[test]
        fn hessian_is_homogeneous_of_expected_degree(f in arb_form(2, 4)) {
            let h = f.hessian().unwrap();
            if !h.is_zero() {
                prop_assert_eq!(h.homogeneous_degree().unwrap(), 2 * (4 - 2));
            }
        }
    }
}
