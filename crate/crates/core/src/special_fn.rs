//! Complex Gamma and Riemann zeta evaluators.
//!
//! Gamma uses the Lanczos approximation (g = 7, 9 coefficients) with the
//! reflection formula for Re(z) < 1/2. Zeta uses Euler–Maclaurin summation
//! for Re(z) > 1/2 and the functional equation
//! ζ(z) = 2(2π)^(z−1)·sin(πz/2)·Γ(1−z)·ζ(1−z) elsewhere.

use crate::error::{SolverError, SolverResult};
use crate::ComplexValue;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Accuracy knobs for the zeta evaluator.
#[derive(Debug, Clone, Copy)]
pub struct EvalAccuracy {
    /// Number of directly summed series terms (adapted upward with |Im z|).
    pub series_terms: usize,
    /// Euler–Maclaurin correction order (number of Bernoulli terms).
    pub em_order: usize,
    /// Target absolute accuracy.
    pub target_eps: f64,
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        EvalAccuracy {
            series_terms: 24,
            em_order: 12,
            target_eps: 1e-13,
        }
    }
}

impl EvalAccuracy {
    pub fn validate(&self) -> SolverResult<()> {
        if self.series_terms < 10 {
            return Err(SolverError::InvalidInput(
                "series_terms must be at least 10".into(),
            ));
        }
        if !(2..=12).contains(&self.em_order) {
            return Err(SolverError::InvalidInput(
                "em_order must lie between 2 and 12".into(),
            ));
        }
        if self.target_eps <= 0.0 {
            return Err(SolverError::InvalidInput(
                "target_eps must be positive".into(),
            ));
        }
        Ok(())
    }
}

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn near_nonpositive_integer(z: Complex64, tol: f64) -> Option<i64> {
    if z.re > 0.5 {
        return None;
    }
    let n = z.re.round();
    if n <= 0.0 && (z.re - n).abs() < tol && z.im.abs() < tol {
        Some(n as i64)
    } else {
        None
    }
}

/// Complex Gamma function.
pub fn gamma(z: ComplexValue) -> SolverResult<ComplexValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "gamma argument must be finite, got {z}"
        )));
    }
    if let Some(n) = near_nonpositive_integer(z, 1e-12) {
        return Err(SolverError::Pole(format!("Gamma pole at z = {n}")));
    }
    Ok(gamma_lanczos(z))
}

fn gamma_lanczos(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z) = π / (sin(πz)·Γ(1−z)).
        let sin_pi_z = (z * PI).sin();
        return PI / (sin_pi_z * gamma_lanczos(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Natural log of Gamma, continuous only up to 2πi jumps; used where ratios
/// of huge Gamma values would overflow a direct product.
pub fn ln_gamma(z: ComplexValue) -> SolverResult<ComplexValue> {
    if near_nonpositive_integer(z, 1e-12).is_some() {
        return Err(SolverError::Pole(format!("Gamma pole at z = {z}")));
    }
    if z.re < 0.5 {
        let sin_pi_z = (z * PI).sin();
        if sin_pi_z.norm() == 0.0 {
            return Err(SolverError::Pole(format!("Gamma pole at z = {z}")));
        }
        let rest = ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - sin_pi_z.ln() - rest);
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (zm1 + 0.5) * t.ln() - t + acc.ln())
}

// Bernoulli numbers B_2, B_4, ..., B_24 for the Euler-Maclaurin tail.
const BERNOULLI_2K: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Riemann zeta with default accuracy.
///
/// ```
/// use num_complex::Complex64;
/// use rootfield::special_fn::zeta;
///
/// let z2 = zeta(Complex64::new(2.0, 0.0)).unwrap();
/// assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
/// ```
pub fn zeta(z: ComplexValue) -> SolverResult<ComplexValue> {
    zeta_with(z, &EvalAccuracy::default())
}

/// Riemann zeta with explicit accuracy knobs.
pub fn zeta_with(z: ComplexValue, acc: &EvalAccuracy) -> SolverResult<ComplexValue> {
    acc.validate()?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "zeta argument must be finite, got {z}"
        )));
    }
    if (z - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
        return Err(SolverError::Pole("zeta pole at z = 1".into()));
    }
    if z.im.abs() > 1e6 {
        return Err(SolverError::Accuracy(format!(
            "zeta not reliable at |Im z| = {:.3e}",
            z.im.abs()
        )));
    }
    if z.re >= 0.5 {
        return Ok(zeta_euler_maclaurin(z, acc));
    }
    // The reflection formula degenerates to 0·∞ at the origin; expand there.
    if z.norm() < 1e-10 {
        let zeta_prime_0 = -0.5 * (2.0 * PI).ln();
        return Ok(Complex64::new(-0.5, 0.0) + z * zeta_prime_0);
    }
    // Reflection: ζ(z) = 2(2π)^(z−1)·sin(πz/2)·Γ(1−z)·ζ(1−z).
    let one_minus_z = Complex64::new(1.0, 0.0) - z;
    let zeta_reflected = zeta_euler_maclaurin(one_minus_z, acc);
    // At large |z| the Γ and (2π)^z factors leave the double range one by
    // one; combine them in log space there.
    if one_minus_z.re > 140.0 {
        let sin_half = (z * (PI / 2.0)).sin();
        if sin_half.norm() == 0.0 || zeta_reflected.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let ln_value = Complex64::new(2.0f64.ln(), 0.0)
            + (z - 1.0) * (2.0 * PI).ln()
            + sin_half.ln()
            + ln_gamma(one_minus_z)?
            + zeta_reflected.ln();
        if ln_value.re > 700.0 {
            return Err(SolverError::Overflow(format!(
                "zeta({z}) exceeds the double range"
            )));
        }
        return Ok(ln_value.exp());
    }
    let factor = 2.0
        * ((z - 1.0) * (2.0 * PI).ln()).exp()
        * (z * (PI / 2.0)).sin()
        * gamma_lanczos(one_minus_z);
    Ok(factor * zeta_reflected)
}

/// Euler-Maclaurin evaluation, valid for Re(z) >= 0.5.
fn zeta_euler_maclaurin(z: Complex64, acc: &EvalAccuracy) -> Complex64 {
    // N grows with the height so the truncated series stays accurate.
    let n = acc
        .series_terms
        .max((1.3 * z.im.abs()).ceil() as usize + 10);
    let n_f = n as f64;

    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        sum += (-z * (j as f64).ln()).exp();
    }
    let n_pow_minus_z = (-z * n_f.ln()).exp();
    // integral tail N^(1-z)/(z-1) and midpoint correction N^(-z)/2
    sum += n_pow_minus_z * n_f / (z - 1.0);
    sum += n_pow_minus_z * 0.5;

    // Bernoulli corrections: B_{2j}/(2j)! · z(z+1)…(z+2j−2) · N^(−z−2j+1)
    let mut rising = z;
    let mut factorial = 2.0;
    let mut n_power = n_pow_minus_z / n_f;
    #[allow(clippy::needless_range_loop)] // j drives three running products
    for j in 0..acc.em_order.min(BERNOULLI_2K.len()) {
        if j > 0 {
            let two_j = 2.0 * j as f64;
            rising = rising * (z + (two_j - 1.0)) * (z + two_j);
            factorial *= (two_j + 1.0) * (two_j + 2.0);
            n_power /= n_f * n_f;
        }
        let term = BERNOULLI_2K[j] / factorial * rising * n_power;
        sum += term;
        if term.norm() < acc.target_eps * 1e-2 {
            break;
        }
    }
    sum
}

/// First functional-equation residual with ζ(x) = x substituted on the left:
/// `x/ζ(1−x) − 2(2π)^(x−1)·sin(πx/2)·Γ(1−x)` is what the ζ(x) = x scenarios
/// polish against. Called with `substitute_x = false` it evaluates
/// `ζ(x)/ζ(1−x) − …`, which is identically zero.
pub fn riemann_residual_sin(x: ComplexValue) -> SolverResult<ComplexValue> {
    let one_minus_x = Complex64::new(1.0, 0.0) - x;
    let zeta_x = zeta(x)?;
    let zeta_rest = zeta(one_minus_x)?;
    if zeta_rest.norm() == 0.0 {
        return Err(SolverError::Pole(format!(
            "zeta(1-x) vanishes at x = {x}; ratio undefined"
        )));
    }
    Ok(zeta_x / zeta_rest - functional_equation_factor(x)?)
}

/// The factor χ(x) = 2(2π)^(x−1)·sin(πx/2)·Γ(1−x) of the functional
/// equation ζ(x) = χ(x)·ζ(1−x).
///
/// sin(πx/2)·Γ(1−x) as written is 0·∞ at even x ≥ 2; the Γ reflection turns
/// it into π/(2cos(πx/2)Γ(x)), regular exactly where the raw form
/// degenerates. The raw form is kept on Re(x) ≤ 1/2, where it is pole-free.
pub fn functional_equation_factor(x: ComplexValue) -> SolverResult<ComplexValue> {
    let two_pi_pow = ((x - 1.0) * (2.0 * PI).ln()).exp();
    if x.re > 0.5 {
        let cos_half = (x * (PI / 2.0)).cos();
        if cos_half.norm() < 1e-300 {
            return Err(SolverError::Pole(format!(
                "functional-equation factor has a pole at x = {x}"
            )));
        }
        Ok(two_pi_pow * PI / (cos_half * gamma(x)?))
    } else {
        let one_minus_x = Complex64::new(1.0, 0.0) - x;
        Ok(2.0 * two_pi_pow * (x * (PI / 2.0)).sin() * gamma(one_minus_x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    struct Rng(u64);
    impl Rng {
        fn next_f64(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    #[test]
    fn gamma_classical_values() {
        let g5 = gamma(c(5.0, 0.0)).unwrap();
        assert!((g5 - c(24.0, 0.0)).norm() < 1e-12 * 24.0, "Γ(5) = {g5}");
        let gh = gamma(c(0.5, 0.0)).unwrap();
        assert!((gh - c(PI.sqrt(), 0.0)).norm() < 1e-13, "Γ(1/2) = {gh}");
        assert!(matches!(gamma(c(0.0, 0.0)), Err(SolverError::Pole(_))));
        assert!(matches!(gamma(c(-3.0, 0.0)), Err(SolverError::Pole(_))));
    }

    #[test]
    fn gamma_recurrence_random() {
        let mut rng = Rng(0xA5A5_5A5A_1234_5678);
        let mut checked = 0;
        while checked < 100 {
            let re = 40.0 * rng.next_f64() - 20.0;
            let im = 40.0 * rng.next_f64() - 20.0;
            let z = c(re, im);
            if z.norm() > 20.0 {
                continue;
            }
            let near_pole = (-21..=1).any(|n| (z - c(n as f64, 0.0)).norm() < 0.1);
            if near_pole {
                continue;
            }
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-11 * lhs.norm().max(rhs.norm()),
                "Γ(z+1) != zΓ(z) at z = {z}: {lhs} vs {rhs}"
            );
            checked += 1;
        }
    }

    #[test]
    fn gamma_conjugation_symmetry() {
        let z = c(2.3, 4.1);
        let a = gamma(z).unwrap();
        let b = gamma(z.conj()).unwrap();
        assert!((a.conj() - b).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn zeta_classical_values() {
        let z2 = zeta(c(2.0, 0.0)).unwrap();
        assert!(
            (z2 - c(PI * PI / 6.0, 0.0)).norm() < 1e-12,
            "ζ(2) = {z2}, expected π²/6"
        );
        let z0 = zeta(c(0.0, 0.0)).unwrap();
        assert!((z0 - c(-0.5, 0.0)).norm() < 1e-12, "ζ(0) = {z0}");
        let zm1 = zeta(c(-1.0, 0.0)).unwrap();
        assert!((zm1 - c(-1.0 / 12.0, 0.0)).norm() < 1e-12, "ζ(-1) = {zm1}");
        assert!(matches!(zeta(c(1.0, 0.0)), Err(SolverError::Pole(_))));
    }

    #[test]
    fn zeta_trivial_zeros() {
        for n in 1..=8 {
            let z = zeta(c(-2.0 * n as f64, 0.0)).unwrap();
            assert!(z.norm() < 1e-10, "ζ(-{}) = {z}", 2 * n);
        }
    }

    #[test]
    fn zeta_reflection_consistency_random() {
        let mut rng = Rng(0xDEAD_BEEF_CAFE_0001);
        for _ in 0..100 {
            let re = 0.5 + 2.5 * rng.next_f64();
            let im = 60.0 * rng.next_f64() - 30.0;
            let z = c(re, im);
            let direct = zeta(z).unwrap();
            // route the same value through the functional equation at 1-z
            let w = c(1.0, 0.0) - z;
            let zeta_w = zeta(w).unwrap();
            let factor = 2.0
                * ((w - 1.0) * (2.0 * PI).ln()).exp()
                * (w * (PI / 2.0)).sin()
                * gamma(c(1.0, 0.0) - w).unwrap();
            let via_reflection = zeta_w / factor;
            assert!(
                (direct - via_reflection).norm() <= 1e-9 * direct.norm().max(1.0),
                "reflection mismatch at {z}: {direct} vs {via_reflection}"
            );
        }
    }

    #[test]
    fn zeta_schwarz_reflection() {
        for &z in &[c(2.0, 13.0), c(0.7, -4.0), c(-3.2, 8.0), c(5.5, 40.0)] {
            let a = zeta(z).unwrap();
            let b = zeta(z.conj()).unwrap();
            assert!(
                (a.conj() - b).norm() <= 1e-13 * a.norm().max(1.0),
                "Schwarz reflection broken at {z}"
            );
        }
    }

    /// Independent high-N oracle: plain Dirichlet sum plus integral tail,
    /// nothing shared with the production Bernoulli machinery.
    fn zeta_high_n_oracle(z: Complex64) -> Complex64 {
        let n = 20_000usize;
        let mut sum = c(0.0, 0.0);
        for j in 1..n {
            sum += (-z * (j as f64).ln()).exp();
        }
        let nf = n as f64;
        let n_pow = (-z * nf.ln()).exp();
        sum + n_pow * nf / (z - 1.0) + n_pow * 0.5 + z * n_pow / nf / 12.0
    }

    #[test]
    fn zeta_matches_high_n_oracle() {
        for &z in &[c(2.0, 0.0), c(3.5, 10.0), c(1.5, -25.0), c(0.5, 14.13)] {
            let fast = zeta(z).unwrap();
            let slow = zeta_high_n_oracle(z);
            assert!(
                (fast - slow).norm() < 1e-9 * fast.norm().max(1.0),
                "zeta({z}): {fast} vs oracle {slow}"
            );
        }
    }

    #[test]
    fn residual_sin_vanishes_where_defined() {
        // symmetry point of the functional equation
        let r_half = riemann_residual_sin(c(0.5, 0.0)).unwrap();
        assert!(r_half.norm() < 1e-12, "residual at 1/2 = {r_half}");
        let r2 = riemann_residual_sin(c(2.0, 0.0)).unwrap();
        assert!(r2.norm() < 1e-10, "residual at 2 = {r2}");
        let rc = riemann_residual_sin(c(1.7, 3.3)).unwrap();
        assert!(rc.norm() < 1e-9, "residual at 1.7+3.3i = {rc}");
        assert!(matches!(
            riemann_residual_sin(c(1.0, 0.0)),
            Err(SolverError::Pole(_))
        ));
    }

    #[test]
    fn zeta_near_trivial_zero_has_fixed_point_scale() {
        // ζ(x) = x just above x = -34. The slope of ζ there is ~1e11, so the
        // f64 rounding of the sine argument leaves ~1e-3 of noise in the
        // value; the induced error in the root location itself is only
        // noise/slope ~ 1e-14, which is what the solver relies on.
        let x = c(-33.999_999_999_683_44, 0.0);
        let z = zeta(x).unwrap();
        assert!((z - x).norm() < 1e-2, "ζ({x}) = {z} should sit close to x");
    }

    #[test]
    fn zeta_log_space_reflection_for_deep_arguments() {
        // beyond Re(1-z) = 140 the reflection factors overflow one by one
        // and are combined in log space
        let z = zeta(c(-151.5, 0.0)).unwrap();
        assert!(z.re.is_finite() && z.norm() > 1e100, "zeta(-151.5) = {z}");
        // far enough down even the log-space value leaves the double range
        assert!(matches!(
            zeta(c(-401.5, 0.0)),
            Err(SolverError::Overflow(_))
        ));
        assert!(matches!(zeta(c(2.0, 2e6)), Err(SolverError::Accuracy(_))));
    }

    #[test]
    fn accuracy_knobs_validated() {
        let bad = EvalAccuracy {
            series_terms: 5,
            ..EvalAccuracy::default()
        };
        assert!(matches!(
            zeta_with(c(2.0, 0.0), &bad),
            Err(SolverError::InvalidInput(_))
        ));
    }
}
