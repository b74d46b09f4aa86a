//! The fixed-point driver: nested iteration through a chosen term's branch
//! inverse, stopping criteria, divergence detection, and Newton polishing.
//!
//! Iterating `x ← σₖ⁻¹(uₖ(x))` on an attractive branch walks into one root of
//! the k-th subfield; crossing the primary branch range with the term's
//! root-of-unity indices enumerates the subfield. Failure modes (overflow,
//! domain hits, iteration caps) are encoded in the outcome, never panics.

use crate::equation_model::{
    branch_range, evaluate_scaled, invert_term, u_target, BranchTuple, Equation,
};
use crate::error::SolverResult;
use crate::root_catalog::RootRecord;
use crate::{BranchIndex, ComplexValue};
use num_complex::Complex64;

/// Iteration parameters; `Default` encodes the standard run: x₀ = 1/2,
/// μ = 25, polish on, divergence cut off at 1e12.
///
/// Callers keep `max_iters ≥ 1`, `eps > 0` and `overflow_bound ≥ 1e6`; the
/// engine treats values outside those ranges as "stop immediately" rather
/// than correcting them.
#[derive(Debug, Clone, Copy)]
pub struct IterConfig {
    /// Fixed-point repetition cap (μ).
    pub max_iters: u32,
    /// Stopping tolerance ε for both |x_{j+1} − x_j| and |f(x_j)|.
    pub eps: f64,
    /// Initial value.
    pub x0: ComplexValue,
    /// Apply Newton polishing to the fixed-point output.
    pub polish: bool,
    pub polish_max_iters: u32,
    /// Iterates beyond this magnitude are treated as divergence.
    pub overflow_bound: f64,
    /// Retain the iterate sequence in the outcome.
    pub keep_trace: bool,
    /// Worker threads for enumeration (0 = one per available core).
    pub threads: usize,
}

impl Default for IterConfig {
    fn default() -> Self {
        IterConfig {
            max_iters: 25,
            eps: 1e-12,
            x0: Complex64::new(0.5, 0.0),
            polish: true,
            polish_max_iters: 60,
            overflow_bound: 1e12,
            keep_trace: false,
            threads: 1,
        }
    }
}

/// Why a run stopped without a converged root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// An iterate escaped the overflow bound.
    Overflow,
    /// The map or the equation hit a singularity / domain error.
    DomainHit,
    /// Iteration cap exhausted without meeting a stopping criterion.
    MaxIters,
    /// Newton stalled on a vanishing derivative.
    SingularDerivative,
}

/// Result of one fixed-point (or Newton) run.
#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub final_x: ComplexValue,
    pub iterations_used: u32,
    pub converged: bool,
    /// |f(final_x)|.
    pub residual: f64,
    pub trace: Option<Vec<ComplexValue>>,
    pub failure: Option<FailureReason>,
}

/// Generic fixed-point driver over an arbitrary iteration map and residual.
///
/// The scenarios reuse this with their registered inverse forms; `iterate`
/// instantiates it with the equation's own term inversion.
pub(crate) fn iterate_map<P, F>(phi: P, residual_fn: F, cfg: &IterConfig) -> IterationOutcome
where
    P: Fn(ComplexValue) -> SolverResult<ComplexValue>,
    F: Fn(ComplexValue) -> SolverResult<(ComplexValue, f64)>,
{
    let mut trace = if cfg.keep_trace {
        Some(vec![cfg.x0])
    } else {
        None
    };
    let mut x = cfg.x0;
    let mut iterations = 0u32;
    let mut raw_converged = false;
    let mut failure: Option<FailureReason> = None;

    for _ in 0..cfg.max_iters {
        let next = match phi(x) {
            Ok(v) => v,
            Err(_) => {
                failure = Some(FailureReason::DomainHit);
                break;
            }
        };
        iterations += 1;
        if !next.re.is_finite() || !next.im.is_finite() || next.norm() > cfg.overflow_bound {
            failure = Some(FailureReason::Overflow);
            break;
        }
        let step = (next - x).norm();
        x = next;
        if let Some(t) = trace.as_mut() {
            t.push(x);
        }
        if step < cfg.eps {
            raw_converged = true;
            break;
        }
        if let Ok((f, scale)) = residual_fn(x) {
            // purely scale-relative: a vanishing exponential tail has
            // |f| ~ scale and never passes, while genuine roots sit at
            // rounding level far below it
            if f.norm() < cfg.eps * scale.max(f64::MIN_POSITIVE) {
                raw_converged = true;
                break;
            }
        }
    }
    if !raw_converged && failure.is_none() {
        failure = Some(FailureReason::MaxIters);
    }

    if cfg.polish {
        let polished = newton_polish_fn(&residual_fn, x, cfg.eps, cfg.polish_max_iters);
        let mut outcome = IterationOutcome {
            iterations_used: iterations + polished.iterations_used,
            trace,
            ..polished
        };
        if let Some(t) = outcome.trace.as_mut() {
            t.push(outcome.final_x);
        }
        return outcome;
    }

    let residual = residual_fn(x)
        .map(|(f, _)| f.norm())
        .unwrap_or(f64::INFINITY);
    IterationOutcome {
        final_x: x,
        iterations_used: iterations,
        converged: raw_converged,
        residual,
        trace,
        failure: if raw_converged { None } else { failure },
    }
}

/// Newton refinement of a given approximation against an arbitrary residual
/// function, with the derivative taken by central finite difference.
pub(crate) fn newton_polish_fn<F>(
    residual_fn: &F,
    x0: ComplexValue,
    tol: f64,
    max_iters: u32,
) -> IterationOutcome
where
    F: Fn(ComplexValue) -> SolverResult<(ComplexValue, f64)>,
{
    let fail = |x: ComplexValue, i: u32, why: FailureReason| IterationOutcome {
        final_x: x,
        iterations_used: i,
        converged: false,
        residual: f64::INFINITY,
        trace: None,
        failure: Some(why),
    };
    let mut x = x0;
    let mut prev_step = f64::INFINITY;
    for i in 0..max_iters {
        let (fx, scale) = match residual_fn(x) {
            Ok(v) => v,
            Err(_) => return fail(x, i, FailureReason::DomainHit),
        };
        // derivative first: a vanishing slope is reported even when the
        // residual itself is already tiny (double root)
        let h = 1e-7 * x.norm().max(1.0);
        let f_plus = residual_fn(x + h);
        let f_minus = residual_fn(x - h);
        let derivative = match (f_plus, f_minus) {
            (Ok((p, _)), Ok((m, _))) => (p - m) / (2.0 * h),
            _ => return fail(x, i, FailureReason::DomainHit),
        };
        if derivative.norm() < 1e-300 {
            return fail(x, i, FailureReason::SingularDerivative);
        }
        // the achievable residual scales with the term magnitudes; gating
        // relative to them lets huge-term equations converge and stops
        // vanishing tails (|f| ~ scale -> 0) from faking convergence
        if fx.norm() < tol * scale.max(f64::MIN_POSITIVE) {
            return IterationOutcome {
                final_x: x,
                iterations_used: i,
                converged: true,
                residual: fx.norm(),
                trace: None,
                failure: None,
            };
        }
        let mut step = fx / derivative;
        // basin locality: never jump more than 10x the previous step
        let mut halvings = 0;
        while step.norm() > 10.0 * prev_step && halvings < 20 {
            step *= 0.5;
            halvings += 1;
        }
        x -= step;
        prev_step = step.norm();
        if !x.re.is_finite() || !x.im.is_finite() {
            return fail(x, i + 1, FailureReason::Overflow);
        }
        // position-converged: where the local slope amplifies evaluation
        // noise past any residual gate (steep zeta chains), a collapsed
        // Newton step is the reliable signal, provided the residual is at
        // least plausibly small relative to the term magnitudes
        if step.norm() < 1e-12 * x.norm().max(1.0) {
            let (residual, scale2) = residual_fn(x)
                .map(|(f, s)| (f.norm(), s))
                .unwrap_or((fx.norm(), scale));
            if residual <= 1e-4 * scale2.max(1.0) {
                return IterationOutcome {
                    final_x: x,
                    iterations_used: i + 1,
                    converged: true,
                    residual,
                    trace: None,
                    failure: None,
                };
            }
            return fail(x, i + 1, FailureReason::MaxIters);
        }
    }
    let (residual, scale) = residual_fn(x)
        .map(|(f, s)| (f.norm(), s))
        .unwrap_or((f64::INFINITY, 1.0));
    let converged = residual < tol * scale.max(f64::MIN_POSITIVE);
    IterationOutcome {
        final_x: x,
        iterations_used: max_iters,
        converged,
        residual,
        trace: None,
        failure: if converged {
            None
        } else {
            Some(FailureReason::MaxIters)
        },
    }
}

/// Runs the fixed-point iteration x_{j+1} = σₖ⁻¹(uₖ(x_j)) on one branch
/// tuple, polishing per the config. All failure modes are encoded in the
/// outcome.
pub fn iterate(eq: &Equation, k: usize, b: BranchTuple, cfg: &IterConfig) -> IterationOutcome {
    let term = match eq.term(k) {
        Ok(t) => t.clone(),
        Err(_) => {
            return IterationOutcome {
                final_x: cfg.x0,
                iterations_used: 0,
                converged: false,
                residual: f64::INFINITY,
                trace: None,
                failure: Some(FailureReason::DomainHit),
            }
        }
    };
    let phi = |x: ComplexValue| -> SolverResult<ComplexValue> {
        let u = u_target(eq, k, x)?;
        invert_term(&term, u, b)
    };
    iterate_map(phi, |x| evaluate_scaled(eq, x), cfg)
}

/// Newton polishing against the equation's own residual.
pub fn newton_polish(
    eq: &Equation,
    x0: ComplexValue,
    tol: f64,
    max_iters: u32,
) -> IterationOutcome {
    newton_polish_fn(&|x| evaluate_scaled(eq, x), x0, tol, max_iters)
}

/// A branch run that did not produce a converged root.
#[derive(Debug, Clone)]
pub struct BranchFailure {
    pub branch: BranchTuple,
    pub reason: FailureReason,
}

/// Outcome of enumerating one term's subfield.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub records: Vec<RootRecord>,
    pub failures: Vec<BranchFailure>,
}

/// Enumerates roots of subfield k over `primary_range` crossed with the
/// term's secondary branch range.
///
/// The secondary range takes the worked-case table with the sign hint of the
/// iteration target at x₀ when that target is real. Branch tuples are
/// independent; they may be evaluated concurrently (`cfg.threads`), and the
/// output order is always (primary, then secondary) in the given range
/// order, regardless of scheduling.
pub fn enumerate_roots(
    eq: &Equation,
    k: usize,
    primary_range: &[BranchIndex],
    cfg: &IterConfig,
) -> SolverResult<Enumeration> {
    let term = eq.term(k)?;
    let hint = u_target(eq, k, cfg.x0)
        .ok()
        .filter(|u| u.im.abs() < 1e-12 * u.norm().max(1.0) && u.re != 0.0)
        .map(|u| u.re > 0.0);
    let secondary_range = branch_range(term, hint);

    let mut tasks: Vec<BranchTuple> = Vec::new();
    for &primary in primary_range {
        for &secondary in &secondary_range {
            tasks.push(BranchTuple::new(primary, secondary, 0));
        }
    }

    let outcomes: Vec<(BranchTuple, IterationOutcome)> = if cfg.threads == 1 || tasks.len() <= 1 {
        tasks.iter().map(|&b| (b, iterate(eq, k, b, cfg))).collect()
    } else {
        let workers = if cfg.threads == 0 {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        } else {
            cfg.threads
        }
        .min(tasks.len());
        let chunk_size = tasks.len().div_ceil(workers);
        let mut slots: Vec<Option<(BranchTuple, IterationOutcome)>> = vec![None; tasks.len()];
        std::thread::scope(|scope| {
            for (w, chunk) in slots.chunks_mut(chunk_size).enumerate() {
                let tasks = &tasks;
                let chunk_start = w * chunk_size;
                scope.spawn(move || {
                    for (offset, slot) in chunk.iter_mut().enumerate() {
                        let b = tasks[chunk_start + offset];
                        *slot = Some((b, iterate(eq, k, b, cfg)));
                    }
                });
            }
        });
        slots.into_iter().flatten().collect()
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (b, outcome) in outcomes {
        if outcome.converged {
            records.push(RootRecord {
                value: outcome.final_x,
                term_k: k,
                variant_q: b.variant,
                primary_branch: b.primary,
                secondary_branch: b.secondary,
                residual: outcome.residual,
                iterations: outcome.iterations_used,
                polished: cfg.polish,
            });
        } else {
            failures.push(BranchFailure {
                branch: b,
                reason: outcome.failure.unwrap_or(FailureReason::MaxIters),
            });
        }
    }
    Ok(Enumeration { records, failures })
}
