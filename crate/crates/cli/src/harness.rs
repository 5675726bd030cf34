//! Corpus-wide checks of the two main theorems.
//!
//! Gradient theorem: a form is unstable exactly when its gradient point is,
//! and destabilizers move across in both directions. Associated-form theorem:
//! the missing socle monomial dominates the balanced monomial under every
//! sorted 1-PS, and the associated form is never torus-unstable.

use gitmilnor_core::lambda::sorted_grid;
use gitmilnor_core::milnor::{gradient_point, hilbert_point, is_regular_sequence, socle_degree};
use gitmilnor_core::stability::{
    binary_oracle, boundary_analysis, disjoint_decomposition, find_destabilizer, find_subspace_destabilizer,
    form_state, random_frame, sorting_frame, targeted_frame, torus_verdict, transfer_form_to_grad,
    transfer_grad_to_form_framed, SearchConfig, StabilityStatus,
};
use gitmilnor_core::{Error, LinearChange, Polynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{generate, CorpusItem, CorpusSpec};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Forward,
    Backward,
    BinaryConsistency,
    DegenerateGradient,
    Decomposition,
    SocleDominance,
    AssociatedFormUnstable,
    NotRegular,
    Internal,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub item: usize,
    pub kind: ViolationKind,
    pub input: String,
    pub message: String,
    /// Seed that regenerates the corpus containing the item.
    pub seed: u64,
}

/// Counts of checks performed, by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub items: usize,
    pub degenerate_gradients: usize,
    /// Forms certified unstable by a torus test in some frame.
    pub unstable_forms: usize,
    pub forward_checks: usize,
    pub backward_checks: usize,
    pub binary_checks: usize,
    pub decomposition_checks: usize,
    pub socle_checks: usize,
    pub associated_form_checks: usize,
}

impl Tally {
    fn add(&mut self, other: &Tally) {
        self.items += other.items;
        self.degenerate_gradients += other.degenerate_gradients;
        self.unstable_forms += other.unstable_forms;
        self.forward_checks += other.forward_checks;
        self.backward_checks += other.backward_checks;
        self.binary_checks += other.binary_checks;
        self.decomposition_checks += other.decomposition_checks;
        self.socle_checks += other.socle_checks;
        self.associated_form_checks += other.associated_form_checks;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessReport {
    pub tally: Tally,
    pub violations: Vec<Violation>,
}

impl HarnessReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn merge(&mut self, other: HarnessReport) {
        self.tally.add(&other.tally);
        self.violations.extend(other.violations);
    }
}

/// Runs `f` on a rayon pool capped by `GITMILNOR_THREADS` when set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("GITMILNOR_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match threads {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

struct ItemRun {
    index: usize,
    input: String,
    seed: u64,
    tally: Tally,
    violations: Vec<Violation>,
}

impl ItemRun {
    fn new(index: usize, input: String, seed: u64) -> Self {
        ItemRun { index, input, seed, tally: Tally { items: 1, ..Default::default() }, violations: Vec::new() }
    }

    fn violate(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            item: self.index,
            kind,
            input: self.input.clone(),
            message: message.into(),
            seed: self.seed,
        });
    }

    fn finish(self) -> HarnessReport {
        HarnessReport { tally: self.tally, violations: self.violations }
    }
}

fn run_items(items: Vec<CorpusItem>, seed: u64, check: impl Fn(&mut ItemRun, &CorpusItem) + Sync) -> HarnessReport {
    let reports: Vec<HarnessReport> = with_pool(|| {
        items
            .par_iter()
            .enumerate()
            .map(|(index, item)| {
                let mut run = ItemRun::new(index, item.describe(), seed);
                check(&mut run, item);
                run.finish()
            })
            .collect()
    });
    let mut total = HarnessReport { tally: Tally::default(), violations: Vec::new() };
    for r in reports {
        total.merge(r);
    }
    total
}

/// Checks the gradient theorem on every item of the corpus.
pub fn verify_gradient_theorem(spec: &CorpusSpec, cfg: &SearchConfig) -> Result<HarnessReport, CliError> {
    let items = generate(spec)?;
    Ok(run_items(items, spec.seed, |run, item| {
        if let CorpusItem::Form(f) = item {
            check_gradient_item(run, f, cfg);
        }
    }))
}

/// Checks the gradient theorem on explicitly given forms.
pub fn verify_gradient_theorem_on(forms: Vec<Polynomial>, cfg: &SearchConfig) -> HarnessReport {
    run_items(forms.into_iter().map(CorpusItem::Form).collect(), cfg.seed, |run, item| {
        if let CorpusItem::Form(f) = item {
            check_gradient_item(run, f, cfg);
        }
    })
}

/// Targeted frames for every rational root of a binary form.
fn root_frames(f: &Polynomial) -> Vec<LinearChange> {
    if f.n_vars() != 2 {
        return Vec::new();
    }
    binary_oracle(f).map(|v| v.roots.iter().map(targeted_frame).collect()).unwrap_or_default()
}

fn check_backward(run: &mut ItemRun, f: &Polynomial, frame: &LinearChange, lambda: &gitmilnor_core::OnePs) {
    run.tally.backward_checks += 1;
    match transfer_grad_to_form_framed(f, frame, lambda) {
        Ok(t) => {
            let recertified = f
                .substitute(&t.frame)
                .ok()
                .and_then(|moved| t.one_ps.min_weight(&moved))
                .is_some_and(|w| w > 0);
            if !recertified {
                run.violate(ViolationKind::Backward, format!("emitted 1-PS ({}) does not destabilize", t.one_ps));
            }
        }
        Err(e) => run.violate(ViolationKind::Backward, format!("backward transfer failed for λ = ({lambda}): {e}")),
    }
}

fn check_gradient_item(run: &mut ItemRun, f: &Polynomial, cfg: &SearchConfig) {
    let n = f.n_vars();
    let oracle = if n == 2 {
        match binary_oracle(f) {
            Ok(v) => Some(v),
            Err(e) => return run.violate(ViolationKind::Internal, e.to_string()),
        }
    } else {
        None
    };

    let w = match gradient_point(f) {
        Ok(w) => w,
        Err(Error::DegenerateGradient { certificate, .. }) => {
            run.tally.degenerate_gradients += 1;
            let destabilizes = f
                .substitute(&certificate.frame)
                .ok()
                .and_then(|moved| certificate.lambda.min_weight(&moved))
                .is_some_and(|w| w > 0);
            if !destabilizes {
                run.violate(ViolationKind::DegenerateGradient, "degenerate-gradient certificate does not destabilize");
            }
            if let Some(o) = &oracle {
                run.tally.binary_checks += 1;
                if o.status != StabilityStatus::Unstable {
                    run.violate(ViolationKind::BinaryConsistency, format!("degenerate gradient but oracle says {}", o.status));
                }
            }
            return;
        }
        Err(e) => return run.violate(ViolationKind::Internal, e.to_string()),
    };

    // form side, then forward transfer and the seeded backward transfer
    let form_verdict = match find_destabilizer(f, cfg) {
        Ok(v) => v,
        Err(e) => return run.violate(ViolationKind::Internal, e.to_string()),
    };
    if let Some(c) = form_verdict.destabilizer() {
        run.tally.unstable_forms += 1;
        run.tally.forward_checks += 1;
        let moved = f.substitute(&c.frame).expect("same size");
        match transfer_form_to_grad(&moved, &c.lambda) {
            Ok(t) if t.hm_weight > 0 => {}
            Ok(t) => run.violate(ViolationKind::Forward, format!("gradient weight {}", t.hm_weight)),
            Err(e) => run.violate(ViolationKind::Forward, e.to_string()),
        }
        check_backward(run, f, &c.frame, &c.lambda);
    }

    // gradient side, then backward transfer of whatever was found
    let extra = root_frames(f);
    let grad_verdict = match find_subspace_destabilizer(&w, cfg, &extra) {
        Ok(v) => v,
        Err(e) => return run.violate(ViolationKind::Internal, e.to_string()),
    };
    if let Some(c) = grad_verdict.destabilizer() {
        check_backward(run, f, &c.frame, &c.lambda);
    }

    if let Some(o) = &oracle {
        run.tally.binary_checks += 1;
        let oracle_unstable = o.status == StabilityStatus::Unstable;
        if oracle_unstable != grad_verdict.is_unstable() {
            run.violate(
                ViolationKind::BinaryConsistency,
                format!("oracle says {}, gradient search says {}", o.status, grad_verdict.status),
            );
        }
        if oracle_unstable != form_verdict.is_unstable() {
            run.violate(
                ViolationKind::BinaryConsistency,
                format!("oracle says {}, form search says {}", o.status, form_verdict.status),
            );
        }
    }

    let decomposition = disjoint_decomposition(f);
    if let Some(lambda) = &decomposition.boundary_one_ps {
        run.tally.decomposition_checks += 1;
        let weights = (w.hm_weight(lambda), w.hm_weight(&lambda.negated()));
        if weights != (Ok(0), Ok(0)) {
            run.violate(ViolationKind::Decomposition, format!("boundary 1-PS ({lambda}) gives weights {weights:?}"));
        }
        let (perm, sorted) = sorting_frame(lambda);
        let analysis = f.substitute(&perm).and_then(|g| boundary_analysis(&g, &sorted));
        match analysis {
            Ok(b) if b.split.is_some_and(|(_, splits)| !splits) => {
                run.violate(ViolationKind::Decomposition, "vanishing functional without a split")
            }
            Ok(_) => {}
            Err(e) => run.violate(ViolationKind::Decomposition, format!("boundary analysis failed: {e}")),
        }
    }
}

/// Checks the associated-form theorem on every item of the corpus, using all
/// sorted 1-PS with entries bounded by `lambda_bound` in the given frame and
/// in `frames` random frames.
pub fn verify_assoc_theorem(
    spec: &CorpusSpec,
    cfg: &SearchConfig,
    lambda_bound: i64,
    frames: usize,
) -> Result<HarnessReport, CliError> {
    let items = generate(spec)?;
    Ok(verify_assoc_theorem_on(items, cfg, lambda_bound, frames))
}

pub fn verify_assoc_theorem_on(
    items: Vec<CorpusItem>,
    cfg: &SearchConfig,
    lambda_bound: i64,
    frames: usize,
) -> HarnessReport {
    run_items(items, cfg.seed, |run, item| check_assoc_item(run, &item.generators(), cfg, lambda_bound, frames))
}

fn check_assoc_item(run: &mut ItemRun, generators: &[Polynomial], cfg: &SearchConfig, lambda_bound: i64, frames: usize) {
    match is_regular_sequence(generators) {
        Ok(w) if w.regular => {}
        Ok(_) => return run.violate(ViolationKind::NotRegular, "generators are not a regular sequence"),
        Err(e) => return run.violate(ViolationKind::Internal, e.to_string()),
    }
    let n = generators.len();
    let grid = sorted_grid(n, lambda_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (run.index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    for k in 0..=frames {
        let moved: Vec<Polynomial> = if k == 0 {
            generators.to_vec()
        } else {
            let t = random_frame(&mut rng, n, cfg.entry_bound);
            generators.iter().map(|g| g.substitute(&t).expect("same size")).collect()
        };
        if let Err(e) = check_assoc_frame(run, &moved, &grid) {
            run.violate(ViolationKind::Internal, format!("frame {k}: {e}"));
        }
    }
}

fn check_assoc_frame(run: &mut ItemRun, g: &[Polynomial], grid: &[gitmilnor_core::OnePs]) -> Result<(), Error> {
    let d = g[0].homogeneous_degree()?;
    let point = hilbert_point(g, socle_degree(g.len(), d), false)?;
    for lambda in grid {
        run.tally.socle_checks += 1;
        let report = point.socle_monomial(lambda)?;
        if !report.dominates {
            run.violate(
                ViolationKind::SocleDominance,
                format!("λ = ({lambda}): missing monomial {:?} below the balanced one", report.missing.as_slice()),
            );
        }
    }
    run.tally.associated_form_checks += 1;
    // a scalar multiple of the associated form, with the same state
    let a = point.apolar_form()?;
    let verdict = torus_verdict(&form_state(a.as_polynomial())?)?;
    if verdict.is_unstable() {
        run.violate(ViolationKind::AssociatedFormUnstable, format!("associated form {a} is torus-unstable"));
    }
    Ok(())
}
