//! Typed model of f(x) = Σ aᵢ·σᵢ(x) − a₀ and the branch-indexed inversion of
//! its functional factors.

use crate::branch_inverse::{lambert_w, log_branch, root_branch};
use crate::error::{SolverError, SolverResult};
use crate::root_catalog::binomial_branch_table;
use crate::{BranchIndex, ComplexValue};
use num_complex::Complex64;

/// Magnitude above which a term evaluation is reported as overflow.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Scenario-registered functional factors whose inverses live with their
/// scenarios rather than as generic formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFn {
    /// σ(x) = ζ(x), used by the ζ(x) = x scenarios.
    Zeta,
}

/// The shape of one functional factor σ(x).
#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    /// σ(x) = x^r with real r ≠ 0.
    Power { r: f64 },
    /// σ(x) = base^(x^q) with q ≠ 0, base ∉ {0, 1}.
    ExpOfPower { base: ComplexValue, q: f64 },
    /// σ(x) = x^r · base^(x^q); the general transcendental trinomial factor.
    PowerExp { r: f64, base: ComplexValue, q: f64 },
    /// σ(x) = base^x with base ∉ {0, 1}.
    GeoExp { base: ComplexValue },
    /// A scenario-registered factor; inversion is dispatched by the scenario.
    Builtin { name: BuiltinFn },
}

/// One term aᵢ·σᵢ(x) of the equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    coeff: ComplexValue,
    kind: TermKind,
}

impl Term {
    /// Validates the construction rules; a PowerExp with r = 0 degenerates to
    /// ExpOfPower and is normalized here.
    pub fn new(coeff: ComplexValue, kind: TermKind) -> SolverResult<Term> {
        if coeff.norm() == 0.0 {
            return Err(SolverError::InvalidInput(
                "zero-coefficient term must be dropped at construction".into(),
            ));
        }
        let check_base = |base: Complex64| -> SolverResult<()> {
            if base.norm() == 0.0 || (base - Complex64::new(1.0, 0.0)).norm() == 0.0 {
                return Err(SolverError::InvalidInput(format!(
                    "exponential base must not be 0 or 1, got {base}"
                )));
            }
            Ok(())
        };
        let kind = match kind {
            TermKind::Power { r } => {
                if r == 0.0 {
                    return Err(SolverError::InvalidInput("power exponent r = 0".into()));
                }
                TermKind::Power { r }
            }
            TermKind::ExpOfPower { base, q } => {
                check_base(base)?;
                if q == 0.0 {
                    return Err(SolverError::InvalidInput("inner exponent q = 0".into()));
                }
                TermKind::ExpOfPower { base, q }
            }
            TermKind::PowerExp { r, base, q } => {
                check_base(base)?;
                if q == 0.0 {
                    return Err(SolverError::InvalidInput("inner exponent q = 0".into()));
                }
                if r == 0.0 {
                    TermKind::ExpOfPower { base, q }
                } else {
                    TermKind::PowerExp { r, base, q }
                }
            }
            TermKind::GeoExp { base } => {
                check_base(base)?;
                TermKind::GeoExp { base }
            }
            TermKind::Builtin { name } => TermKind::Builtin { name },
        };
        Ok(Term { coeff, kind })
    }

    pub fn coeff(&self) -> ComplexValue {
        self.coeff
    }

    pub fn kind(&self) -> &TermKind {
        &self.kind
    }

    /// σ(x) for this term, coefficient not included.
    pub fn sigma(&self, x: ComplexValue) -> SolverResult<ComplexValue> {
        let value = match &self.kind {
            TermKind::Power { r } => complex_power(x, *r)?,
            TermKind::ExpOfPower { base, q } => {
                let inner = complex_power(x, *q)?;
                exp_checked(inner * base.ln())?
            }
            TermKind::PowerExp { r, base, q } => {
                let inner = complex_power(x, *q)?;
                complex_power(x, *r)? * exp_checked(inner * base.ln())?
            }
            TermKind::GeoExp { base } => exp_checked(x * base.ln())?,
            TermKind::Builtin { name } => match name {
                BuiltinFn::Zeta => crate::special_fn::zeta(x)?,
            },
        };
        if value.norm() > OVERFLOW_LIMIT {
            return Err(SolverError::Overflow(format!(
                "term magnitude {:.3e} exceeds the evaluation bound",
                value.norm()
            )));
        }
        Ok(value)
    }
}

/// Principal power x^r, with integer exponents routed through exact repeated
/// multiplication so real inputs stay exactly real.
fn complex_power(x: Complex64, r: f64) -> SolverResult<Complex64> {
    let is_int = r.fract() == 0.0 && r.abs() <= 64.0;
    if x.norm() == 0.0 {
        if r > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(SolverError::Domain(format!(
            "x = 0 is a singularity of x^{r}"
        )));
    }
    let value = if is_int {
        x.powi(r as i32)
    } else {
        (x.ln() * r).exp()
    };
    if !value.re.is_finite() || !value.im.is_finite() || value.norm() > OVERFLOW_LIMIT {
        return Err(SolverError::Overflow(format!("x^{r} overflow at x = {x}")));
    }
    Ok(value)
}

fn exp_checked(w: Complex64) -> SolverResult<Complex64> {
    if w.re > 690.0 {
        return Err(SolverError::Overflow(format!(
            "exp argument {w} exceeds the double range"
        )));
    }
    Ok(w.exp())
}

/// f(x) = Σ aᵢ·σᵢ(x) − a₀ with the term order fixed at construction; term k
/// (1-based) defines the k-th root subfield.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    terms: Vec<Term>,
    a0: ComplexValue,
}

impl Equation {
    pub fn new(terms: Vec<Term>, a0: ComplexValue) -> SolverResult<Equation> {
        if terms.is_empty() {
            return Err(SolverError::InvalidInput(
                "an equation needs at least one term".into(),
            ));
        }
        Ok(Equation { terms, a0 })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn a0(&self) -> ComplexValue {
        self.a0
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, k: usize) -> SolverResult<&Term> {
        if k == 0 || k > self.terms.len() {
            return Err(SolverError::Index(format!(
                "term index {k} outside 1..={}",
                self.terms.len()
            )));
        }
        Ok(&self.terms[k - 1])
    }
}

/// Evaluates f(x) = Σ aᵢσᵢ(x) − a₀.
pub fn evaluate(eq: &Equation, x: ComplexValue) -> SolverResult<ComplexValue> {
    evaluate_scaled(eq, x).map(|(f, _)| f)
}

/// Evaluates f(x) together with the magnitude scale Σ|aᵢσᵢ(x)| + |a₀|.
///
/// The scale is the natural noise floor of the cancellation in f: residual
/// tolerances are meaningful relative to it, not absolutely, once terms grow
/// past unity.
pub fn evaluate_scaled(eq: &Equation, x: ComplexValue) -> SolverResult<(ComplexValue, f64)> {
    let mut total = -eq.a0;
    let mut scale = eq.a0.norm();
    for term in &eq.terms {
        let contribution = term.coeff() * term.sigma(x)?;
        scale += contribution.norm();
        total += contribution;
    }
    Ok((total, scale))
}

/// σₖᶜ(x): the sum of all terms except k, coefficients included.
pub fn complement(eq: &Equation, k: usize, x: ComplexValue) -> SolverResult<ComplexValue> {
    eq.term(k)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (i, term) in eq.terms.iter().enumerate() {
        if i + 1 != k {
            total += term.coeff() * term.sigma(x)?;
        }
    }
    Ok(total)
}

/// The iteration target uₖ(x) = (a₀ − σₖᶜ(x)) / aₖ; σₖ(x*) = uₖ(x*) exactly
/// when f(x*) = 0.
pub fn u_target(eq: &Equation, k: usize, x: ComplexValue) -> SolverResult<ComplexValue> {
    let comp = complement(eq, k, x)?;
    Ok((eq.a0 - comp) / eq.term(k)?.coeff())
}

/// The integer indices selecting one determination of a multivalued inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchTuple {
    /// Log-shift or Lambert-W branch.
    pub primary: BranchIndex,
    /// Root-of-unity index.
    pub secondary: BranchIndex,
    /// Inverse-formula variant for terms that carry more than one shape.
    pub variant: u8,
}

impl BranchTuple {
    pub fn new(primary: BranchIndex, secondary: BranchIndex, variant: u8) -> BranchTuple {
        BranchTuple {
            primary,
            secondary,
            variant,
        }
    }
}

/// Finite list of secondary (root-of-unity) branch indices for a term.
///
/// Integer exponents give the classical 0..n−1 unity indices; non-integer
/// exponents follow the worked four-case table, taking the widest applicable
/// case when the sign of u is not known.
pub fn branch_range(term: &Term, u_positive_hint: Option<bool>) -> Vec<BranchIndex> {
    let alpha = match term.kind() {
        TermKind::Power { r } => r.abs(),
        TermKind::ExpOfPower { q, .. } => q.abs(),
        TermKind::PowerExp { q, .. } => q.abs(),
        TermKind::GeoExp { .. } | TermKind::Builtin { .. } => return vec![0],
    };
    if (alpha - alpha.round()).abs() < 1e-9 {
        let n = alpha.round() as i64;
        if n <= 1 {
            return vec![0];
        }
        return (0..n as BranchIndex).collect();
    }
    match u_positive_hint {
        Some(pos) => {
            binomial_branch_table(alpha, pos).expect("non-integer alpha accepted by construction")
        }
        None => {
            // widest case: u<0 for odd integer part, u>0 for even
            let odd = (alpha.trunc() as i64) % 2 == 1;
            binomial_branch_table(alpha, !odd).expect("non-integer alpha accepted by construction")
        }
    }
}

/// Inverts σ(x) = u on the branch selected by `b`, so that σ of the returned
/// value reproduces u.
///
/// PowerExp terms use the Lambert-W closed form: with t = (q/r)·Log base,
/// x = root_branch(W(k₁, t·u^(q/r)) / t, q, k₂).
///
/// For non-integer power exponents only part of the unity-index table yields
/// genuine preimages of a given u (the window depends on Arg u); the other
/// indices return rotated preimages whose fixed-point iterations simply fail
/// the residual checks downstream, mirroring how the enumeration treats
/// fractional exponents.
pub fn invert_term(term: &Term, u: ComplexValue, b: BranchTuple) -> SolverResult<ComplexValue> {
    // Integer exponents have a canonical finite unity-index range; enforce
    // it. Irrational exponents have infinitely many branches and the finite
    // selection is the enumerator's job, so any index is accepted there.
    let exponent = match term.kind() {
        TermKind::Power { r } => Some(*r),
        TermKind::ExpOfPower { q, .. } | TermKind::PowerExp { q, .. } => Some(*q),
        _ => None,
    };
    let integer_exponent = exponent.is_none_or(|e| (e.abs() - e.abs().round()).abs() < 1e-9);
    if integer_exponent {
        let range = branch_range(term, None);
        if !range.contains(&b.secondary) {
            return Err(SolverError::Branch(format!(
                "secondary branch {} outside {range:?}",
                b.secondary
            )));
        }
    }
    match term.kind() {
        TermKind::Power { r } => root_branch(u, *r, b.secondary),
        TermKind::GeoExp { base } => Ok(log_branch(u, b.primary)? / base.ln()),
        TermKind::ExpOfPower { base, q } => {
            let y = log_branch(u, b.primary)? / base.ln();
            root_branch(y, *q, b.secondary)
        }
        TermKind::PowerExp { r, base, q } => {
            let t = base.ln() * (q / r);
            let s = t * (u.ln() * (q / r)).exp();
            let y = lambert_w(b.primary, s)? / t;
            root_branch(y, *q, b.secondary)
        }
        TermKind::Builtin { .. } => Err(SolverError::Branch(
            "builtin factors invert through their scenario-registered forms".into(),
        )),
    }
}
