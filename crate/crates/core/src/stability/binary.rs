//! Exact stability of binary forms from root multiplicities.
//!
//! A binary form of degree `D` is unstable iff it has a root of multiplicity
//! `> D/2`, strictly semistable iff the largest multiplicity is exactly `D/2`,
//! and stable otherwise. Multiplicities come from a squarefree decomposition
//! of `f(t) = F(t, 1)` over the rationals, the point `[1:0]` accounting for
//! the drop in degree.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::StabilityStatus;
use crate::error::{Error, Result};
use crate::poly::{LinearChange, Polynomial};
use crate::rational::Rational;

/// A rational point `[a : b]` of the projective line with `F(a, b) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveRoot {
    pub a: Rational,
    pub b: Rational,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVerdict {
    pub status: StabilityStatus,
    pub degree: u32,
    pub max_multiplicity: u32,
    /// Every rational root visible from linear squarefree factors, and `[1:0]`.
    pub roots: Vec<ProjectiveRoot>,
}

impl BinaryVerdict {
    /// The unique root of multiplicity above half the degree.
    pub fn destabilizing_root(&self) -> Option<&ProjectiveRoot> {
        if self.status != StabilityStatus::Unstable {
            return None;
        }
        self.roots.iter().find(|r| 2 * r.multiplicity > self.degree)
    }
}

/// Univariate polynomial, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Univariate(Vec<Rational>);

impl Univariate {
    fn normalized(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Univariate(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero")
    }

    fn monic(&self) -> Self {
        let lead = self.lead().clone();
        Univariate(self.0.iter().map(|c| c / &lead).collect())
    }

    fn derivative(&self) -> Self {
        Univariate::normalized(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn sub(&self, other: &Univariate) -> Self {
        let len = self.0.len().max(other.0.len());
        let zero = Rational::zero();
        Univariate::normalized(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    fn div_rem(&self, divisor: &Univariate) -> (Univariate, Univariate) {
        let mut rem = self.0.clone();
        if self.0.len() < divisor.0.len() {
            return (Univariate(Vec::new()), self.clone());
        }
        let dd = divisor.degree();
        let mut quot = vec![Rational::zero(); self.0.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / divisor.lead();
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Univariate::normalized(quot), Univariate::normalized(rem))
    }

    fn exact_div(&self, divisor: &Univariate) -> Univariate {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero());
        q
    }

    fn gcd(&self, other: &Univariate) -> Univariate {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }
}

/// Squarefree factors `a_1, a_2, …` with `f = c · Π a_i^i` (Yun).
fn squarefree_decomposition(f: &Univariate) -> Vec<Univariate> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut d = c.sub(&b.derivative());
    while b.degree() > 0 {
        let a = b.gcd(&d);
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = c.sub(&b.derivative());
        out.push(a);
    }
    out
}

/// Exact status of a nonzero binary form.
pub fn binary_oracle(f: &Polynomial) -> Result<BinaryVerdict> {
    if f.n_vars() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.n_vars() });
    }
    let degree = f.homogeneous_degree()?;
    let mut coeffs = vec![Rational::zero(); degree as usize + 1];
    for (e, c) in f.terms() {
        coeffs[e.get(0) as usize] = c.clone();
    }
    let dehomogenized = Univariate::normalized(coeffs);
    let mut roots = Vec::new();
    let at_infinity = degree - dehomogenized.degree() as u32;
    let mut max_multiplicity = at_infinity;
    if at_infinity > 0 {
        roots.push(ProjectiveRoot { a: Rational::one(), b: Rational::zero(), multiplicity: at_infinity });
    }
    for (i, factor) in squarefree_decomposition(&dehomogenized).iter().enumerate() {
        let multiplicity = i as u32 + 1;
        if factor.degree() == 0 {
            continue;
        }
        max_multiplicity = max_multiplicity.max(multiplicity);
        if factor.degree() == 1 {
            let t = -&factor.0[0] / &factor.0[1];
            roots.push(ProjectiveRoot { a: t, b: Rational::one(), multiplicity });
        }
    }
    let status = match (2 * max_multiplicity).cmp(&degree) {
        std::cmp::Ordering::Greater => StabilityStatus::Unstable,
        std::cmp::Ordering::Equal => StabilityStatus::StrictlySemistable,
        std::cmp::Ordering::Less => StabilityStatus::Stable,
    };
    Ok(BinaryVerdict { status, degree, max_multiplicity, roots })
}

/// A determinant-one frame `T` with `(b x − a y)∘T = −y`, so that the root
/// `[a:b]` of `F` becomes `[1:0]` for `F∘T` and `λ = (−1, 1)` sees it.
pub fn targeted_frame(root: &ProjectiveRoot) -> LinearChange {
    let (a, b) = (&root.a, &root.b);
    let rows = if a.is_zero() {
        vec![vec![Rational::zero(), -(Rational::one() / b)], vec![b.clone(), Rational::zero()]]
    } else {
        vec![vec![a.clone(), Rational::zero()], vec![b.clone(), Rational::one() / a]]
    };
    LinearChange::from_rows(rows).expect("square")
}
