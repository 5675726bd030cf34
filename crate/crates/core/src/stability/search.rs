//! Destabilizer search over coordinate frames.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    binary_oracle, grassmannian_state, targeted_frame, torus_verdict, BudgetReport, Certificate, StabilityStatus,
    StabilityVerdict, form_state, StateSet, DEFAULT_STATE_CAP,
};
use crate::error::{Error, FramedOnePs, Result};
use crate::lambda::{full_grid, OnePs};
use crate::linalg::GradedSubspace;
use crate::milnor::gradient_point;
use crate::poly::{binomial, LinearChange, Polynomial, UpperTriangularChange};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaStrategy {
    /// Exact linear programming on the state.
    Exact,
    /// Integer 1-PS with entries bounded by `bound`.
    Grid { bound: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Number of random frames tried after the identity and targeted frames.
    pub frame_budget: usize,
    /// Bound on numerators and denominators of random frame entries.
    pub entry_bound: i64,
    pub strategy: LambdaStrategy,
    /// Largest number of Plücker coordinates enumerated per subspace state.
    pub state_cap: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            frame_budget: 16,
            entry_bound: 3,
            strategy: LambdaStrategy::Exact,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.entry_bound < 1 {
            return Err(Error::PreconditionFailed("entry bound must be positive".into()));
        }
        if let LambdaStrategy::Grid { bound } = self.strategy {
            if bound < 1 {
                return Err(Error::PreconditionFailed("grid bound must be positive".into()));
            }
        }
        Ok(())
    }
}

/// A permutation frame `P` and sorted `λ'` such that `λ'` on `F∘P` matches
/// `λ` on `F`.
pub fn sorting_frame(lambda: &OnePs) -> (LinearChange, OnePs) {
    let (perm, sorted) = lambda.sorting_permutation();
    let mut inverse = vec![0; perm.len()];
    for (k, &i) in perm.iter().enumerate() {
        inverse[i] = k;
    }
    let frame = LinearChange::signed_permutation(&inverse).expect("permutation");
    (frame, sorted)
}

fn random_entry(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let p = rng.random_range(-bound..=bound);
    let q = rng.random_range(1..=bound);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A signed permutation followed by a unipotent upper triangular change with
/// entries `p/q`, `|p| ≤ entry_bound`, `1 ≤ q ≤ entry_bound`.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, entry_bound: i64) -> LinearChange {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = LinearChange::signed_permutation(&perm).expect("permutation");
    let mut u = UpperTriangularChange::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = random_entry(rng, entry_bound);
            if !v.is_zero() {
                u.set(i, j, v).expect("strictly upper");
            }
        }
    }
    p.compose(&u.to_linear()).expect("same size")
}

fn destabilizing_lambda(state: &StateSet, strategy: LambdaStrategy) -> Result<Option<OnePs>> {
    match strategy {
        LambdaStrategy::Exact => Ok(torus_verdict(state)?.destabilizer().map(|c| c.lambda.clone())),
        LambdaStrategy::Grid { bound } => Ok(full_grid(state.n(), bound)
            .into_iter()
            .find(|l| num_traits::Signed::is_positive(&state.min_pairing(l)))),
    }
}

fn unstable(frame: LinearChange, lambda: OnePs) -> StabilityVerdict {
    StabilityVerdict {
        status: StabilityStatus::Unstable,
        certificate: Certificate::Destabilizing(FramedOnePs { frame, lambda }),
    }
}

fn unknown(frames_tried: usize, seed: u64) -> StabilityVerdict {
    StabilityVerdict {
        status: StabilityStatus::Unknown,
        certificate: Certificate::Budget(BudgetReport { frames_tried, seed }),
    }
}

fn targeted_frames(f: &Polynomial) -> Result<Vec<LinearChange>> {
    if f.n_vars() != 2 {
        return Ok(Vec::new());
    }
    let v = binary_oracle(f)?;
    Ok(v.destabilizing_root().map(targeted_frame).into_iter().collect())
}

/// Tests the torus state of `F∘T` for the identity, the root-targeted frame
/// (binary forms) and `frame_budget` random frames. Returns `unstable` with a
/// verified certificate on the first success, otherwise `unknown`.
pub fn find_destabilizer(f: &Polynomial, cfg: &SearchConfig) -> Result<StabilityVerdict> {
    cfg.validate()?;
    f.homogeneous_degree()?;
    let n = f.n_vars();
    let mut frames = vec![LinearChange::identity(n)];
    frames.extend(targeted_frames(f)?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tried = 0;
    for k in 0..frames.len() + cfg.frame_budget {
        let frame = if k < frames.len() { frames[k].clone() } else { random_frame(&mut rng, n, cfg.entry_bound) };
        tried += 1;
        let moved = f.substitute(&frame)?;
        if let Some(lambda) = destabilizing_lambda(&form_state(&moved)?, cfg.strategy)? {
            if lambda.min_weight(&moved).is_some_and(|w| w > 0) {
                return Ok(unstable(frame, lambda));
            }
            return Err(Error::InvariantViolated("state certificate does not destabilize the form".into()));
        }
    }
    Ok(unknown(tried, cfg.seed))
}

/// Torus verdict for a subspace: exact on the Plücker state when at most
/// `cfg.state_cap` coordinates are involved, otherwise a 1-PS grid search
/// that can only report `unstable` or `unknown`.
pub fn subspace_torus_verdict(w: &GradedSubspace, cfg: &SearchConfig) -> Result<StabilityVerdict> {
    let needed = binomial(w.ambient_dim() as u128, w.rank() as u128);
    let exact = matches!(cfg.strategy, LambdaStrategy::Exact) && needed <= cfg.state_cap;
    let verdict = if exact {
        torus_verdict(&grassmannian_state(w, cfg.state_cap)?)?
    } else {
        let bound = match cfg.strategy {
            LambdaStrategy::Grid { bound } => bound,
            LambdaStrategy::Exact => super::grid_bound(w.degree() + 1, w.n_vars()),
        };
        let mut found = None;
        for lambda in full_grid(w.n_vars(), bound) {
            if w.hm_weight(&lambda)? > 0 {
                found = Some(lambda);
                break;
            }
        }
        match found {
            Some(lambda) => unstable(LinearChange::identity(w.n_vars()), lambda),
            None => unknown(0, cfg.seed),
        }
    };
    if let Some(c) = verdict.destabilizer() {
        if w.hm_weight(&c.lambda)? <= 0 {
            return Err(Error::InvariantViolated("Plücker certificate has nonpositive weight".into()));
        }
    }
    Ok(verdict)
}

/// Frame search for a subspace: identity, `extra_frames`, then random frames.
pub fn find_subspace_destabilizer(
    w: &GradedSubspace,
    cfg: &SearchConfig,
    extra_frames: &[LinearChange],
) -> Result<StabilityVerdict> {
    cfg.validate()?;
    let n = w.n_vars();
    let mut frames = vec![LinearChange::identity(n)];
    frames.extend(extra_frames.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tried = 0;
    for k in 0..frames.len() + cfg.frame_budget {
        let frame = if k < frames.len() { frames[k].clone() } else { random_frame(&mut rng, n, cfg.entry_bound) };
        tried += 1;
        let moved = if frame.is_identity() { w.clone() } else { w.transform(&frame)? };
        let verdict = subspace_torus_verdict(&moved, cfg)?;
        if verdict.is_unstable() {
            return Ok(verdict.with_frame(&frame));
        }
    }
    Ok(unknown(tried, cfg.seed))
}

/// Frame search on the gradient point of `F`, including the root-targeted
/// frame for binary forms.
pub fn find_gradient_destabilizer(f: &Polynomial, cfg: &SearchConfig) -> Result<StabilityVerdict> {
    let w = gradient_point(f)?;
    find_subspace_destabilizer(&w, cfg, &targeted_frames(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, Some(n)).unwrap()
    }

    #[test]
    fn search_examples() {
        let v = find_destabilizer(&p("x^2*y", 2), &SearchConfig { frame_budget: 0, ..Default::default() }).unwrap();
        assert!(v.is_unstable());
        let c = v.destabilizer().unwrap();
        assert!(c.frame.is_identity());
        assert_eq!(c.lambda.weights(), &[1, -1]);

        let v = find_destabilizer(&p("x^3+y^3", 2), &SearchConfig::default()).unwrap();
        assert_eq!(v.status, StabilityStatus::Unknown);
        assert_eq!(v.certificate, Certificate::Budget(BudgetReport { frames_tried: 17, seed: 0 }));

        let cube = p("x^3 + 3*x^2*y + 3*x*y^2 + y^3", 2);
        let v = find_destabilizer(&cube, &SearchConfig { frame_budget: 0, ..Default::default() }).unwrap();
        let c = v.destabilizer().unwrap();
        let moved = cube.substitute(&c.frame).unwrap();
        assert!(c.lambda.min_weight(&moved).unwrap() > 0);
    }

    #[test]
    fn random_frames_are_special_linear_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let t = random_frame(&mut a, 3, 3);
            assert_eq!(t.determinant(), Rational::from_integer(1.into()));
            assert_eq!(t, random_frame(&mut b, 3, 3));
        }
    }

    #[test]
    fn sorting_frame_moves_weights() {
        let lambda = OnePs::new(vec![2, -3, 1]).unwrap();
        let (frame, sorted) = sorting_frame(&lambda);
        assert_eq!(sorted.weights(), &[-3, 1, 2]);
        let f = p("x^2*y + z^3", 3);
        let moved = f.substitute(&frame).unwrap();
        assert_eq!(lambda.min_weight(&f), sorted.min_weight(&moved));
    }

    #[test]
    fn gradient_search_examples() {
        let cfg = SearchConfig { frame_budget: 0, ..Default::default() };
        assert!(find_gradient_destabilizer(&p("x^2*y", 2), &cfg).unwrap().is_unstable());
        let v = find_gradient_destabilizer(&p("x^3 + x^2*y", 2), &cfg).unwrap();
        assert!(v.is_unstable());
        assert_eq!(
            find_gradient_destabilizer(&p("x^3+y^3", 2), &SearchConfig::default()).unwrap().status,
            StabilityStatus::Unknown
        );
        // gradient point is the span of partials in every frame
        let f = p("x^3 + 2*x*y*z - y^2*z", 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_frame(&mut rng, 3, 3);
        assert_eq!(
            gradient_point(&f.substitute(&t).unwrap()).unwrap(),
            gradient_point(&f).unwrap().transform(&t).unwrap()
        );
    }
}
