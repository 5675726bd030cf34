//! One-parameter subgroups of the diagonal torus and the monomial order
//! they induce.
//!
//! The order `<_λ` compares monomials of equal degree by λ-weight; ties are
//! broken so that the monomial with the larger exponent at the first
//! differing variable is the smaller one.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{ExponentVector, Polynomial};

/// Integer weights `(λ_1, …, λ_n)` with `Σ λ_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OnePs {
    weights: Vec<i64>,
}

impl OnePs {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidOnePs("no weights".into()));
        }
        let sum = weights
            .iter()
            .try_fold(0i64, |acc, &w| acc.checked_add(w))
            .ok_or(Error::Overflow)?;
        if sum != 0 {
            return Err(Error::InvalidOnePs(format!("weights {weights:?} sum to {sum}, not 0")));
        }
        Ok(OnePs { weights })
    }

    pub fn trivial(n: usize) -> Self {
        OnePs { weights: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    pub fn is_sorted(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn negated(&self) -> OnePs {
        OnePs { weights: self.weights.iter().map(|w| -w).collect() }
    }

    /// Permutation `perm` with `weights[perm[0]] ≤ weights[perm[1]] ≤ …`
    /// (stable), and the sorted 1-PS.
    pub fn sorting_permutation(&self) -> (Vec<usize>, OnePs) {
        let mut perm: Vec<usize> = (0..self.n()).collect();
        perm.sort_by_key(|&i| self.weights[i]);
        let sorted = perm.iter().map(|&i| self.weights[i]).collect();
        (perm, OnePs { weights: sorted })
    }

    fn check_len(&self, m: &ExponentVector) -> Result<()> {
        if m.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: m.len() });
        }
        Ok(())
    }

    /// `Σ a_i λ_i`.
    pub fn weight(&self, m: &ExponentVector) -> Result<i64> {
        self.check_len(m)?;
        Ok(self.weight_unchecked(m))
    }

    pub(crate) fn weight_unchecked(&self, m: &ExponentVector) -> i64 {
        m.as_slice()
            .iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as i64 * w)
            .sum()
    }

    /// Compares two monomials of equal degree under `<_λ`.
    pub fn compare(&self, m1: &ExponentVector, m2: &ExponentVector) -> Result<Ordering> {
        self.check_len(m1)?;
        self.check_len(m2)?;
        if m1.degree() != m2.degree() {
            return Err(Error::DegreeMismatch { expected: m1.degree(), found: m2.degree() });
        }
        Ok(self.compare_unchecked(m1, m2))
    }

    pub(crate) fn compare_unchecked(&self, m1: &ExponentVector, m2: &ExponentVector) -> Ordering {
        self.weight_unchecked(m1)
            .cmp(&self.weight_unchecked(m2))
            .then_with(|| {
                // larger exponent at the first difference is smaller
                m2.as_slice().cmp(m1.as_slice())
            })
    }

    /// The `<_λ`-smallest monomial in the support of a nonzero homogeneous `f`.
    pub fn initial_monomial(&self, f: &Polynomial) -> Result<ExponentVector> {
        if f.n_vars() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: f.n_vars() });
        }
        f.homogeneous_degree()?;
        Ok(self.initial_unchecked(f).expect("nonzero").clone())
    }

    pub(crate) fn initial_unchecked<'a>(&self, f: &'a Polynomial) -> Option<&'a ExponentVector> {
        f.support().min_by(|a, b| self.compare_unchecked(a, b))
    }

    /// Smallest λ-weight over the support of `f`.
    pub fn min_weight(&self, f: &Polynomial) -> Option<i64> {
        f.support().map(|e| self.weight_unchecked(e)).min()
    }

    /// Sorts `monomials` ascending under `<_λ`.
    pub fn sort(&self, monomials: &mut [ExponentVector]) {
        monomials.sort_by(|a, b| self.compare_unchecked(a, b));
    }
}

impl fmt::Display for OnePs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for OnePs {
    type Err = Error;

    /// Comma-separated integers, e.g. `-1,1`.
    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidOnePs(format!("'{}' is not an integer", part.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        OnePs::new(weights)
    }
}

/// All sorted integer 1-PS in `n` variables with `|λ_i| ≤ bound`, excluding
/// the trivial one.
pub fn sorted_grid(n: usize, bound: i64) -> Vec<OnePs> {
    fn rec(prefix: &mut Vec<i64>, n: usize, bound: i64, out: &mut Vec<OnePs>) {
        let lo = prefix.last().copied().unwrap_or(-bound);
        if prefix.len() + 1 == n {
            let last = -prefix.iter().sum::<i64>();
            if last >= lo && last <= bound {
                prefix.push(last);
                if prefix.iter().any(|&w| w != 0) {
                    out.push(OnePs { weights: prefix.clone() });
                }
                prefix.pop();
            }
            return;
        }
        for w in lo..=bound {
            prefix.push(w);
            rec(prefix, n, bound, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        rec(&mut Vec::with_capacity(n), n, bound, &mut out);
    }
    out
}

/// All integer 1-PS (not necessarily sorted) with `|λ_i| ≤ bound`, excluding
/// the trivial one.
pub fn full_grid(n: usize, bound: i64) -> Vec<OnePs> {
    let mut out = Vec::new();
    let mut current = vec![-bound; n.saturating_sub(1)];
    if n < 2 {
        return out;
    }
    loop {
        let last = -current.iter().sum::<i64>();
        if last.abs() <= bound {
            let mut w = current.clone();
            w.push(last);
            if w.iter().any(|&x| x != 0) {
                out.push(OnePs { weights: w });
            }
        }
        let mut k = 0;
        loop {
            if k == current.len() {
                return out;
            }
            if current[k] < bound {
                current[k] += 1;
                break;
            }
            current[k] = -bound;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::int;
    use proptest::prelude::*;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn ps(w: &[i64]) -> OnePs {
        OnePs::new(w.to_vec()).unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(ps(&[-1, 1]).weight(&ev(&[2, 1])).unwrap(), -1);
        assert_eq!(ps(&[1, -1]).weight(&ev(&[2, 1])).unwrap(), 1);
        for d in 1..4 {
            let lambda = ps(&[-3, 1, 2]);
            assert_eq!(lambda.weight(&ExponentVector::balanced(3, d - 1)).unwrap(), 0);
        }
        assert!(ps(&[-1, 1]).weight(&ev(&[1, 1, 1])).is_err());
    }

    #[test]
    fn rejects_unbalanced_weights() {
        assert!(OnePs::new(vec![1, 1]).is_err());
        assert!(OnePs::new(vec![]).is_err());
        assert!("-1, 1".parse::<OnePs>().is_ok());
        assert!("-1,a".parse::<OnePs>().is_err());
    }

    #[test]
    fn compare_examples() {
        let l = ps(&[-1, 1]);
        assert_eq!(l.compare(&ev(&[2, 0]), &ev(&[1, 1])).unwrap(), Ordering::Less);
        assert_eq!(l.compare(&ev(&[1, 1]), &ev(&[0, 2])).unwrap(), Ordering::Less);
        let tie = ps(&[-1, -1, 2]);
        assert_eq!(tie.compare(&ev(&[2, 0, 0]), &ev(&[1, 1, 0])).unwrap(), Ordering::Less);
        assert_eq!(l.compare(&ev(&[1, 1]), &ev(&[1, 1])).unwrap(), Ordering::Equal);
        assert!(l.compare(&ev(&[1, 1]), &ev(&[1, 0])).is_err());
    }

    #[test]
    fn initial_monomial_examples() {
        let f = parse_polynomial("3*x^2+2*x*y", None).unwrap();
        assert_eq!(ps(&[1, -1]).initial_monomial(&f).unwrap(), ev(&[1, 1]));
        let g = parse_polynomial("x^3+y^3", None).unwrap();
        assert_eq!(ps(&[-1, 1]).initial_monomial(&g).unwrap(), ev(&[3, 0]));
        let h = parse_polynomial("y^3", Some(2)).unwrap();
        assert_eq!(ps(&[5, -5]).initial_monomial(&h).unwrap(), ev(&[0, 3]));
        assert_eq!(
            ps(&[1, -1]).initial_monomial(&Polynomial::zero(2)),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn grids() {
        let g = sorted_grid(2, 2);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|l| l.is_sorted()));
        assert_eq!(full_grid(2, 1).len(), 2);
        let s3 = sorted_grid(3, 6);
        assert!(s3.iter().all(|l| l.is_sorted() && l.weights().iter().all(|w| w.abs() <= 6)));
        assert!(s3.contains(&ps(&[-6, 0, 6])));
    }

    fn arb_lambda(n: usize) -> impl Strategy<Value = OnePs> {
        proptest::collection::vec(-5i64..=5, n - 1).prop_map(|mut w| {
            let last = -w.iter().sum::<i64>();
            w.push(last);
            OnePs::new(w).unwrap()
        })
    }

    fn arb_monomial(n: usize, degree: u32) -> impl Strategy<Value = ExponentVector> {
        let all = ExponentVector::all_of_degree(n, degree);
        proptest::sample::select(all)
    }

    proptest! {
        #[test]
        fn compare_is_a_total_order(
            lambda in arb_lambda(3),
            a in arb_monomial(3, 4),
            b in arb_monomial(3, 4),
            c in arb_monomial(3, 4),
        ) {
            let ab = lambda.compare(&a, &b).unwrap();
            prop_assert_eq!(ab, lambda.compare(&b, &a).unwrap().reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab != Ordering::Greater && lambda.compare(&b, &c).unwrap() != Ordering::Greater {
                prop_assert_ne!(lambda.compare(&a, &c).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn weight_is_additive(
            lambda in arb_lambda(3),
            a in arb_monomial(3, 2),
            b in arb_monomial(3, 3),
        ) {
            let lhs = lambda.weight(&a.product(&b)).unwrap();
            prop_assert_eq!(lhs, lambda.weight(&a).unwrap() + lambda.weight(&b).unwrap());
        }

        #[test]
        fn initial_monomial_is_scale_invariant(
            lambda in arb_lambda(3),
            f in crate::poly::tests::arb_form(3, 3),
            c in prop_oneof![-4i64..=-1, 1i64..=4],
        ) {
            prop_assume!(!f.is_zero());
            prop_assert_eq!(
                lambda.initial_monomial(&f.scale(&int(c))).unwrap(),
                lambda.initial_monomial(&f).unwrap()
            );
        }

        #[test]
        fn initial_monomial_of_sum(
            lambda in arb_lambda(3),
            f in crate::poly::tests::arb_form(3, 2),
            g in crate::poly::tests::arb_form(3, 2),
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let sum = &f + &g;
            prop_assume!(!sum.is_zero());
            let fi = lambda.initial_monomial(&f).unwrap();
            let gi = lambda.initial_monomial(&g).unwrap();
            let lo = if lambda.compare(&fi, &gi).unwrap() == Ordering::Greater { gi.clone() } else { fi.clone() };
            let si = lambda.initial_monomial(&sum).unwrap();
            prop_assert_ne!(lambda.compare(&si, &lo).unwrap(), Ordering::Less);
            let cancels = fi == gi && f.coefficient(&fi) + g.coefficient(&gi) == int(0);
            if fi != gi || !cancels {
                prop_assert_eq!(si, lo);
            }
        }
    }
}
