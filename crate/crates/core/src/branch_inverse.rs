//! Branch-indexed elementary inverse functions on the complex plane.
//!
//! Every inverse here is multivalued; the caller picks one determination with
//! an integer branch index `k`, where `k = 0` is always the principal branch.
//! The principal logarithm has its imaginary part in (−π, π], the Lambert W
//! branches follow the standard layout (cut along the negative real axis,
//! branch 0 real on z > −1/e), matching the conventions of the usual
//! computer-algebra implementations.

use crate::error::{SolverError, SolverResult};
use crate::{BranchIndex, ComplexValue};
use num_complex::Complex64;
use std::f64::consts::{E, PI};

const TWO_PI: f64 = 2.0 * PI;
/// Halley iteration cap for Lambert W.
const LAMBERT_MAX_ITERS: usize = 60;

fn ensure_finite(z: Complex64, what: &str) -> SolverResult<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SolverError::InvalidInput(format!(
            "{what} must be finite, got {z}"
        )))
    }
}

/// Real-axis arguments carry Im = +0.0 so cut values follow the
/// continuous-from-above convention (a negative-zero imaginary part would
/// flip arg() to -pi).
fn normalize_real_axis(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Branch-k complex logarithm: `Log(z) + 2πik` with the principal `Log`.
pub fn log_branch(z: ComplexValue, k: BranchIndex) -> SolverResult<ComplexValue> {
    ensure_finite(z, "log argument")?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(SolverError::Domain("log of zero".into()));
    }
    let z = normalize_real_axis(z);
    Ok(z.ln() + Complex64::new(0.0, TWO_PI * k as f64))
}

/// Branch-k fractional power root: solves `x^alpha = u` as
/// `exp((Log u + 2πik)/alpha)`.
///
/// `alpha` may be any nonzero real, including irrational and negative values;
/// each call computes one branch. `u = 0` is allowed only for positive alpha
/// (the root is 0).
pub fn root_branch(u: ComplexValue, alpha: f64, k: BranchIndex) -> SolverResult<ComplexValue> {
    ensure_finite(u, "root argument")?;
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "root exponent must be finite and nonzero, got {alpha}"
        )));
    }
    if u.re == 0.0 && u.im == 0.0 {
        if alpha < 0.0 {
            return Err(SolverError::Domain(
                "zero has no root for a negative exponent".into(),
            ));
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let shifted_log = normalize_real_axis(u).ln() + Complex64::new(0.0, TWO_PI * k as f64);
    let x = (shifted_log / alpha).exp();
    ensure_finite(x, "root result").map_err(|_| {
        SolverError::Overflow(format!("root_branch overflow for u={u}, alpha={alpha}"))
    })?;
    Ok(x)
}

/// Principal complex arcsine; real on [−1, 1] with range [−π/2, π/2] there.
pub fn arcsin_principal(u: ComplexValue) -> SolverResult<ComplexValue> {
    ensure_finite(u, "arcsin argument")?;
    Ok(u.asin())
}

/// Lambert W on branch `k`: the solution `w` of `w·e^w = z` with
/// `w·e^w = z` holding to relative residual ≤ 1e−13.
///
/// Initial guesses: series around the branch point −1/e for k ∈ {0, −1},
/// a small-z series on the principal branch, and the asymptotic
/// `L − Log L` with `L = Log z + 2πik` everywhere else. Halley iteration
/// then refines to machine precision.
pub fn lambert_w(k: BranchIndex, z: ComplexValue) -> SolverResult<ComplexValue> {
    ensure_finite(z, "lambert_w argument")?;
    if z.re == 0.0 && z.im == 0.0 {
        if k == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(SolverError::Domain(format!(
            "W({k}, 0) is unbounded on branches k != 0"
        )));
    }
    if k == 0 && z.norm() < 1e-300 {
        return Ok(z);
    }
    let z = normalize_real_axis(z);

    let mut w = lambert_initial_guess(k, z);
    let mut converged = false;
    for _ in 0..LAMBERT_MAX_ITERS {
        if w.re > 700.0 {
            // e^w would overflow; the asymptotic guess is already exact
            // to beyond double precision out here.
            converged = true;
            break;
        }
        let ew = w.exp();
        let f = w * ew - z;
        if f.norm() <= 1e-16 * z.norm().max(1e-300) {
            converged = true;
            break;
        }
        let w1 = w + 1.0;
        if w1.norm() < 1e-9 {
            // Derivative vanishes at the branch point w = -1; nudge off it.
            w += Complex64::new(1e-8, 1e-8);
            continue;
        }
        // Halley step: f / (f' - f·f''/(2f')) with f' = (w+1)e^w, f'' = (w+2)e^w.
        let denom = w1 * ew - (w + 2.0) * f / (2.0 * w1);
        if denom.norm() < 1e-300 {
            w -= Complex64::new(0.5, 0.0);
            continue;
        }
        let delta = f / denom;
        w -= delta;
        if delta.norm() <= 1e-15 * (1.0 + w.norm()) {
            converged = true;
            break;
        }
    }

    let residual = if w.re > 700.0 {
        0.0
    } else {
        (w * w.exp() - z).norm()
    };
    if !converged && residual > 1e-13 * z.norm().max(1.0) {
        return Err(SolverError::Convergence(format!(
            "Halley iteration for W({k}, {z}) stalled at w={w}, residual {residual:e}"
        )));
    }
    if residual > 1e-13 * z.norm().max(1.0) {
        return Err(SolverError::Convergence(format!(
            "W({k}, {z}) residual {residual:e} above tolerance"
        )));
    }
    Ok(w)
}

fn lambert_initial_guess(k: BranchIndex, z: Complex64) -> Complex64 {
    // The -1 branch's cut is the whole of (-inf, 0]; strictly below it the
    // branch holds the deep sheet conj(W_1(conj z)), which only the
    // asymptotic start reaches. Series and real-segment starts apply above
    // and on the cut.
    let below_cut = k == -1 && z.im < 0.0;
    // Series around the branch point -1/e, where branches 0 and -1 meet.
    if (k == 0 || (k == -1 && !below_cut)) && (z + 1.0 / E).norm() < 0.3 {
        let p = (2.0 * (E * z + 1.0)).sqrt();
        let p = if k == 0 { p } else { -p };
        return Complex64::new(-1.0, 0.0) + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    }
    // Principal branch near the origin: W(z) = z - z^2 + 3/2 z^3 - ...
    if k == 0 && z.norm() < 0.5 {
        return z * (1.0 + z * (-1.0 + z * 1.5));
    }
    // Moderate principal-branch arguments, where Log z is too small for the
    // asymptotic form; Log(1+z) is within Halley's reach everywhere here.
    if k == 0 && z.norm() <= 3.0 && (z + 1.0).norm() > 0.2 {
        return (z + 1.0).ln();
    }
    // Real segment of the -1 branch (on-cut arguments carry im = +0.0).
    if k == -1 && z.im == 0.0 && z.re < 0.0 && z.re > -1.0 / E {
        let l = z.re.abs().ln();
        return Complex64::new(l - (-l).ln(), 0.0);
    }
    // Asymptotic guess everywhere else.
    let mut l = z.ln() + Complex64::new(0.0, TWO_PI * k as f64);
    if l.norm() < 1e-300 {
        l = Complex64::new(1e-300, 0.0);
    }
    l - l.ln()
}
