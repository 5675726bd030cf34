//! Graded subspaces `W ⊂ Sym^m V` and their initial Plücker data.
//!
//! The initial Plücker coordinate of `W` under `λ` is read off as the pivot
//! set of a row reduction whose columns are sorted ascending by `<_λ`. When
//! `W` has small codimension the pivots are found from the annihilator
//! instead: the non-pivot columns of `W` are exactly the pivot columns of
//! `W^⊥` under the reversed column order (matroid duality of greedy bases).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lambda::OnePs;
use crate::poly::{ExponentVector, LinearChange, Polynomial};
use crate::rational::Rational;

/// The monomials of one degree, ascending in graded-lexicographic order.
#[derive(Debug)]
pub struct MonomialBasis {
    n_vars: usize,
    degree: u32,
    monomials: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
}

impl MonomialBasis {
    pub fn get(n_vars: usize, degree: u32) -> Arc<MonomialBasis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MonomialBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("monomial cache poisoned");
        guard
            .entry((n_vars, degree))
            .or_insert_with(|| {
                let monomials = ExponentVector::all_of_degree(n_vars, degree);
                let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                Arc::new(MonomialBasis { n_vars, degree, monomials, index })
            })
            .clone()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monomials
    }

    pub fn index_of(&self, m: &ExponentVector) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Column indices sorted ascending by `<_λ`.
    pub fn order(&self, lambda: &OnePs) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| lambda.compare_unchecked(&self.monomials[a], &self.monomials[b]));
        order
    }

    fn to_row(&self, f: &Polynomial) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.len()];
        for (e, c) in f.terms() {
            row[self.index[e]] = c.clone();
        }
        row
    }

    fn to_polynomial(&self, row: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            self.n_vars,
            row.iter()
                .zip(&self.monomials)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, m)| (m.clone(), c.clone())),
        )
        .expect("matching dimensions")
    }
}

/// Row reduction with columns visited in `order`. Returns pivot columns in
/// the order found. With `reduced`, pivots are normalized to 1 and cleared
/// above as well as below; otherwise only an echelon form is produced.
pub(crate) fn eliminate(rows: &mut Vec<Vec<Rational>>, order: &[usize], reduced: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &col in order {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        if reduced {
            let inv = Rational::one() / &rows[rank][col];
            for v in rows[rank].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = rows[rank].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&c| !pivot_row[c].is_zero()).collect();
        let targets: Box<dyn Iterator<Item = usize>> = if reduced {
            Box::new((0..rows.len()).filter(move |&r| r != rank))
        } else {
            Box::new(rank + 1..rows.len())
        };
        for r in targets {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_row[col];
            for &c in &nonzero {
                let delta = &factor * &pivot_row[c];
                rows[r][c] -= delta;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Basis of `{c : Σ_i c_i · column_i = 0}` for a matrix given by rows with
/// `n_cols` columns.
pub(crate) fn nullspace(mut rows: Vec<Vec<Rational>>, n_cols: usize) -> Vec<Vec<Rational>> {
    let order: Vec<usize> = (0..n_cols).collect();
    let pivots = eliminate(&mut rows, &order, true);
    let mut is_pivot = vec![false; n_cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n_cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n_cols];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Initial monomials of a subspace under `λ`, ascending, with their total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotSet {
    pub monomials: Vec<ExponentVector>,
    pub weight: i64,
}

impl PivotSet {
    pub fn contains(&self, m: &ExponentVector) -> bool {
        self.monomials.contains(m)
    }
}

/// Output of [`GradedSubspace::reduce_under_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub pivots: PivotSet,
    /// Reduced echelon basis; row `i` has initial monomial `pivots.monomials[i]`.
    pub basis: Vec<Polynomial>,
}

/// A subspace of the degree-`m` forms in `n` variables.
#[derive(Debug, Clone)]
pub struct GradedSubspace {
    basis: Arc<MonomialBasis>,
    /// Reduced echelon rows under the graded-lexicographic reference order.
    rows: Vec<Vec<Rational>>,
    /// Basis of the orthogonal complement under the coefficient dot product.
    annihilator: Vec<Vec<Rational>>,
}

impl PartialEq for GradedSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis.n_vars == other.basis.n_vars
            && self.basis.degree == other.basis.degree
            && self.rows == other.rows
    }
}

impl GradedSubspace {
    /// Span of `generators`, all homogeneous of degree `degree` (zeros allowed).
    pub fn from_spanning(n_vars: usize, degree: u32, generators: &[Polynomial]) -> Result<Self> {
        let basis = MonomialBasis::get(n_vars, degree);
        let mut rows = Vec::with_capacity(generators.len());
        for g in generators {
            if g.n_vars() != n_vars {
                return Err(Error::DimensionMismatch { expected: n_vars, found: g.n_vars() });
            }
            if g.is_zero() {
                continue;
            }
            let d = g.homogeneous_degree()?;
            if d != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: d });
            }
            rows.push(basis.to_row(g));
        }
        Ok(Self::from_rows(basis, rows))
    }

    fn from_rows(basis: Arc<MonomialBasis>, mut rows: Vec<Vec<Rational>>) -> Self {
        let reference: Vec<usize> = (0..basis.len()).collect();
        eliminate(&mut rows, &reference, true);
        let annihilator = nullspace(rows.clone(), basis.len());
        GradedSubspace { basis, rows, annihilator }
    }

    pub fn full(n_vars: usize, degree: u32) -> Self {
        let basis = MonomialBasis::get(n_vars, degree);
        let rows = (0..basis.len())
            .map(|i| {
                let mut r = vec![Rational::zero(); basis.len()];
                r[i] = Rational::one();
                r
            })
            .collect();
        Self::from_rows(basis, rows)
    }

    pub fn n_vars(&self) -> usize {
        self.basis.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree
    }

    /// `dim W`.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `dim Sym^m V`.
    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.rank()
    }

    pub fn monomial_basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Basis in reduced echelon form under graded-lexicographic order.
    pub fn basis(&self) -> Vec<Polynomial> {
        self.rows.iter().map(|r| self.basis.to_polynomial(r)).collect()
    }

    pub(crate) fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Coefficient vectors `a` with `Σ_j a_j g_j = 0` for every `g ∈ W`,
    /// returned as polynomials with those coefficients.
    pub fn annihilator(&self) -> Vec<Polynomial> {
        self.annihilator.iter().map(|r| self.basis.to_polynomial(r)).collect()
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if f.n_vars() != self.n_vars() {
            return Err(Error::DimensionMismatch { expected: self.n_vars(), found: f.n_vars() });
        }
        let d = f.homogeneous_degree()?;
        if d != self.degree() {
            return Ok(false);
        }
        let row = self.basis.to_row(f);
        Ok(self.annihilator.iter().all(|a| {
            a.iter()
                .zip(&row)
                .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
                .is_zero()
        }))
    }

    fn check_lambda(&self, lambda: &OnePs) -> Result<()> {
        if lambda.n() != self.n_vars() {
            return Err(Error::DimensionMismatch { expected: self.n_vars(), found: lambda.n() });
        }
        Ok(())
    }

    fn pivot_set_from_columns(&self, lambda: &OnePs, mut columns: Vec<usize>, order: &[usize]) -> PivotSet {
        let position: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        columns.sort_by_key(|c| position[c]);
        let monomials: Vec<ExponentVector> =
            columns.iter().map(|&c| self.basis.monomials[c].clone()).collect();
        let weight = monomials.iter().map(|m| lambda.weight_unchecked(m)).sum();
        PivotSet { monomials, weight }
    }

    /// The initial monomials of `W` under `λ`.
    pub fn pivot_set(&self, lambda: &OnePs) -> Result<PivotSet> {
        self.check_lambda(lambda)?;
        let order = self.basis.order(lambda);
        let columns = if self.rank() <= self.codim() {
            let mut rows = self.rows.clone();
            eliminate(&mut rows, &order, false)
        } else {
            let mut rows = self.annihilator.clone();
            let reversed: Vec<usize> = order.iter().rev().copied().collect();
            let mut missing = vec![false; self.ambient_dim()];
            for c in eliminate(&mut rows, &reversed, false) {
                missing[c] = true;
            }
            (0..self.ambient_dim()).filter(|&c| !missing[c]).collect()
        };
        Ok(self.pivot_set_from_columns(lambda, columns, &order))
    }

    /// Monomials that are not initial monomials of any element of `W`.
    pub fn non_pivots(&self, lambda: &OnePs) -> Result<Vec<ExponentVector>> {
        let pivots = self.pivot_set(lambda)?;
        let mut rest: Vec<ExponentVector> = self
            .basis
            .monomials
            .iter()
            .filter(|m| !pivots.contains(m))
            .cloned()
            .collect();
        lambda.sort(&mut rest);
        Ok(rest)
    }

    /// Full reduced echelon form with columns ascending under `<_λ`.
    pub fn reduce_under_order(&self, lambda: &OnePs) -> Result<Reduction> {
        self.check_lambda(lambda)?;
        let order = self.basis.order(lambda);
        let mut rows = self.rows.clone();
        let columns = eliminate(&mut rows, &order, true);
        let pivots = self.pivot_set_from_columns(lambda, columns, &order);
        let basis = rows.iter().map(|r| self.basis.to_polynomial(r)).collect();
        Ok(Reduction { pivots, basis })
    }

    /// Weight of the initial Plücker coordinate: positive means `λ`
    /// destabilizes `W`, zero means `W` is strictly `λ`-semistable.
    pub fn hm_weight(&self, lambda: &OnePs) -> Result<i64> {
        Ok(self.pivot_set(lambda)?.weight)
    }

    /// `W∘T`: the span of `g∘T` for `g ∈ W`.
    pub fn transform(&self, change: &LinearChange) -> Result<GradedSubspace> {
        let images = self
            .basis()
            .iter()
            .map(|g| g.substitute(change))
            .collect::<Result<Vec<_>>>()?;
        GradedSubspace::from_spanning(self.n_vars(), self.degree(), &images)
    }
}

/// Degree-`m` piece of the ideal generated by `generators` (all of one degree).
pub fn span_of_multiples(generators: &[Polynomial], m: u32) -> Result<GradedSubspace> {
    let first = generators
        .first()
        .ok_or_else(|| Error::PreconditionFailed("no generators".into()))?;
    let n_vars = first.n_vars();
    let mut degree = None;
    for g in generators {
        if g.n_vars() != n_vars {
            return Err(Error::DimensionMismatch { expected: n_vars, found: g.n_vars() });
        }
        let d = g.homogeneous_degree()?;
        match degree {
            None => degree = Some(d),
            Some(prev) if prev != d => return Err(Error::DegreeMismatch { expected: prev, found: d }),
            _ => {}
        }
    }
    let d = degree.expect("at least one generator");
    let target = MonomialBasis::get(n_vars, m);
    if m < d {
        return Ok(GradedSubspace::from_rows(target, Vec::new()));
    }
    let shifts = ExponentVector::all_of_degree(n_vars, m - d);
    let mut rows = Vec::with_capacity(shifts.len() * generators.len());
    for g in generators {
        for s in &shifts {
            let mut row = vec![Rational::zero(); target.len()];
            for (e, c) in g.terms() {
                row[target.index[&e.product(s)]] = c.clone();
            }
            rows.push(row);
        }
    }
    Ok(GradedSubspace::from_rows(target, rows))
}

/// Whether two subspaces coincide.
pub fn subspace_equal(a: &GradedSubspace, b: &GradedSubspace) -> Result<bool> {
    if a.n_vars() != b.n_vars() {
        return Err(Error::DimensionMismatch { expected: a.n_vars(), found: b.n_vars() });
    }
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch { expected: a.degree(), found: b.degree() });
    }
    Ok(a == b)
}
