use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An `n×n` rational matrix acting on forms by `F ↦ F(T x)`.
///
/// Composition follows substitution order: `F∘A∘B = F∘(A·B)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearChange {
    n: usize,
    entries: Vec<Rational>,
}

impl LinearChange {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        LinearChange { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(LinearChange { n, entries })
    }

    /// `x_i ↦ sign_i · x_{perm[i]}`; signs are chosen so the determinant is 1.
    pub fn signed_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidChange(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let mut entries = vec![Rational::zero(); n * n];
        for (i, &p) in perm.iter().enumerate() {
            entries[i * n + p] = Rational::one();
        }
        let mut change = LinearChange { n, entries };
        if change.determinant() < Rational::zero() {
            let p0 = perm[0];
            change.entries[p0] = -Rational::one();
        }
        Ok(change)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearChange::identity(self.n)
    }

    /// `self · other`, so that `F∘self∘other = F∘(self·other)`.
    pub fn compose(&self, other: &LinearChange) -> Result<LinearChange> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(LinearChange { n, entries })
    }

    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut m: Vec<Vec<Rational>> = self.rows().map(|r| r.to_vec()).collect();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            let p = m[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &p;
                for c in col..n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
        det
    }
}

impl fmt::Display for LinearChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// `x_i ↦ x_i + Σ_{j>i} c_ij x_j`: unipotent upper triangular, determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpperTriangularChange {
    n: usize,
    coefficients: Vec<Rational>,
}

impl UpperTriangularChange {
    pub fn identity(n: usize) -> Self {
        UpperTriangularChange { n, coefficients: vec![Rational::zero(); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &Rational {
        &self.coefficients[i * self.n + j]
    }

    /// Sets `c_ij`; only strictly upper entries (`i < j`) are allowed.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        if i >= j || j >= self.n {
            return Err(Error::InvalidChange(format!(
                "c[{i}][{j}] is not strictly upper triangular in dimension {}",
                self.n
            )));
        }
        self.coefficients[i * self.n + j] = value;
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn to_linear(&self) -> LinearChange {
        let n = self.n;
        let mut entries = self.coefficients.clone();
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        LinearChange { n, entries }
    }

    /// Recovers an upper triangular change from a unipotent upper triangular matrix.
    pub fn from_linear(change: &LinearChange) -> Result<Self> {
        let n = change.n();
        let mut out = UpperTriangularChange::identity(n);
        for i in 0..n {
            for j in 0..n {
                let v = change.entry(i, j);
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => out.coefficients[i * n + j] = v.clone(),
                    std::cmp::Ordering::Equal if !v.is_one() => {
                        return Err(Error::InvalidChange("diagonal entry is not 1".into()))
                    }
                    std::cmp::Ordering::Greater if !v.is_zero() => {
                        return Err(Error::InvalidChange("entry below the diagonal".into()))
                    }
                    _ => {}
                }
            }
        }
        Ok(out)
    }

    /// `self` followed by `other`, i.e. `F∘self∘other`.
    pub fn then(&self, other: &UpperTriangularChange) -> Result<UpperTriangularChange> {
        UpperTriangularChange::from_linear(&self.to_linear().compose(&other.to_linear())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn signed_permutations_have_unit_determinant() {
        for perm in [[0, 1, 2], [1, 0, 2], [2, 0, 1], [2, 1, 0]] {
            let t = LinearChange::signed_permutation(&perm).unwrap();
            assert_eq!(t.determinant(), int(1));
        }
        assert!(LinearChange::signed_permutation(&[0, 0]).is_err());
    }

    #[test]
    fn upper_triangular_rejects_lower_entries() {
        let mut c = UpperTriangularChange::identity(3);
        assert!(c.set(1, 0, int(1)).is_err());
        assert!(c.set(1, 1, int(1)).is_err());
        c.set(0, 2, frac(1, 2)).unwrap();
        assert_eq!(c.to_linear().determinant(), int(1));
        assert_eq!(UpperTriangularChange::from_linear(&c.to_linear()).unwrap(), c);
    }

    #[test]
    fn composition_matches_matrix_product() {
        let a = LinearChange::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(1)]]).unwrap();
        let b = LinearChange::from_rows(vec![vec![int(1), int(0)], vec![int(3), int(1)]]).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(
            ab,
            LinearChange::from_rows(vec![vec![int(7), int(2)], vec![int(3), int(1)]]).unwrap()
        );
    }
}
