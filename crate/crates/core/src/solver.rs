//! Catalan-series roots of the quadratic congruence `t + a*x + x^2 = 0`
//! in F_p[t]/(t^n), and the independent checks run against them.
//!
//! The series root with zero constant term is
//!
//! ```text
//! x1 = -sum_{k=1}^{n-1} C_{k-1} a^{-(2k-1)} t^k
//! ```
//!
//! and the second root is `x2 = -a - x1`. Roots are never reported on the
//! strength of the formula alone: both are substituted back and the residual
//! must be the zero series.
//!
//! Three oracles are independent of the Catalan formula:
//!
//! * fixed-point iteration of `x <- -a^{-1} (t + x^2)`, a t-adic contraction;
//! * Hensel lifting of the roots `0` and `-a` of `x^2 + a*x + p` from Z/p to
//!   Z/p^n, the numeric reading `t = p`;
//! * exhaustive search over Z/p^n for small moduli.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::catalan::{catalan_ratio, catalan_ratio_mod_p, GenerationPath};
use crate::field::{mod_inverse, with_kernel, Kernel, KernelFn, Prime, Residue};
use crate::trunc::{PrimePowerInt, TruncError, TruncSeries};

/// Default ceiling on `p^n` for the exhaustive oracle.
pub const DEFAULT_BRUTE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("a must be invertible modulo {0}")]
    NonInvertibleA(BigUint),
    #[error("truncation degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("p^n = {modulus} exceeds the search cap {cap}")]
    CapExceeded { modulus: BigUint, cap: u64 },
    #[error("derivative is not invertible modulo p at the starting root")]
    NonInvertibleDerivative,
    #[error("starting point is not a root modulo p")]
    NotARootModP,
    #[error(transparent)]
    Series(#[from] TruncError),
}

/// Which sign the linear term carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Form {
    /// `t + a*x + x^2`
    #[default]
    PlusA,
    /// `t - a*x + x^2`
    MinusA,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::PlusA => "plus-a",
            Form::MinusA => "minus-a",
        }
    }
}

/// The congruence `t ± a*x + x^2 = 0 (mod t^n)` over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticProblem {
    prime: Prime,
    n: usize,
    a: Residue,
    form: Form,
}

impl QuadraticProblem {
    pub fn new(prime: &Prime, n: usize, a: Residue) -> Result<Self, SolveError> {
        Self::with_form(prime, n, a, Form::PlusA)
    }

    pub fn with_form(prime: &Prime, n: usize, a: Residue, form: Form) -> Result<Self, SolveError> {
        if n < 2 {
            return Err(SolveError::DegreeTooSmall(n));
        }
        let a = Residue::new(a.value(), prime);
        if a.is_zero() {
            return Err(SolveError::NonInvertibleA(prime.value().clone()));
        }
        Ok(QuadraticProblem {
            prime: prime.clone(),
            n,
            a,
            form,
        })
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Residue {
        &self.a
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// The coefficient of `x` as written in the equation: `a` or `-a`.
    pub fn linear(&self) -> Residue {
        match self.form {
            Form::PlusA => self.a.clone(),
            Form::MinusA => -&self.a,
        }
    }

    /// The coefficient of `x` in Z/p^n, lifting `a` from its canonical
    /// representative in `[0, p-1]`.
    pub fn linear_lifted(&self) -> BigInt {
        let a = BigInt::from(self.a.value().clone());
        match self.form {
            Form::PlusA => a,
            Form::MinusA => -a,
        }
    }

    /// `p^n`.
    pub fn numeric_modulus(&self) -> BigUint {
        self.prime.pow(self.n)
    }

    fn t(&self) -> TruncSeries {
        TruncSeries::monomial(&self.prime, self.n, 1).expect("n >= 2")
    }

    /// `t + b*x + x^2` for the problem's linear coefficient `b`.
    pub fn residual(&self, x: &TruncSeries) -> Result<TruncSeries, SolveError> {
        let bx = x.scalar_mul(&self.linear())?;
        let x2 = x.try_mul(x)?;
        Ok(self.t().try_add(&bx)?.try_add(&x2)?)
    }
}

/// `H = sum_{k=1}^{n-1} C_{k-1} t^k` in F_p[t]/(t^n).
pub fn catalan_h(n: usize, p: &Prime) -> Result<TruncSeries, SolveError> {
    if n < 2 {
        return Err(SolveError::DegreeTooSmall(n));
    }
    let (catalan, _) = catalan_ratio_mod_p(n - 2, p);
    let mut coeffs = vec![p.zero()];
    coeffs.extend(catalan);
    Ok(TruncSeries::from_residues(p, &coeffs, n)?)
}

/// `H^2 - H + t`.
pub fn lemma_residual(h: &TruncSeries) -> TruncSeries {
    let t = TruncSeries::monomial(h.prime(), h.degree_bound(), 1).expect("shape of h");
    &(&h.square() - h) + &t
}

/// Whether `catalan_h(n, p)` solves `H^2 - H + t = 0 (mod t^n)`.
pub fn lemma_check(n: usize, p: &Prime) -> Result<bool, SolveError> {
    Ok(lemma_residual(&catalan_h(n, p)?).is_zero())
}

/// The zero-constant-term root from the Catalan formula, together with the
/// route taken to reduce the Catalan numbers mod p.
pub fn series_root(prob: &QuadraticProblem) -> (TruncSeries, GenerationPath) {
    let p = &prob.prime;
    let (catalan, path) = catalan_ratio_mod_p(prob.n - 2, p);
    let inv = prob.linear().inverse().expect("a is invertible");
    let inv_sq = &inv * &inv;
    // a^{-(2k-1)} for k = 1, 2, ...
    let mut weight = inv;
    let mut coeffs = Vec::with_capacity(prob.n);
    coeffs.push(BigUint::zero());
    for c in catalan.iter() {
        coeffs.push((-(c * &weight)).into_value());
        weight = &weight * &inv_sq;
    }
    (TruncSeries::from_canonical(p, coeffs), path)
}

/// `-b - root1`, where `b` is the coefficient of `x`.
pub fn second_root(root1: &TruncSeries, linear: &Residue) -> Result<TruncSeries, SolveError> {
    let shift = TruncSeries::constant(linear, root1.degree_bound())?;
    Ok((-root1).try_sub(&shift)?)
}

/// One step of `x <- -b^{-1} (t + x^2)`.
pub fn fixed_point_step(prob: &QuadraticProblem, x: &TruncSeries) -> Result<TruncSeries, SolveError> {
    let neg_inv = -prob.linear().inverse().expect("a is invertible");
    let inner = prob.t().try_add(&x.try_mul(x)?)?;
    Ok(inner.scalar_mul(&neg_inv)?)
}

/// Iterates [`fixed_point_step`] from `start`. Each step fixes one more
/// coefficient, so `n - 1` steps from any zero-constant-term start reach the
/// root exactly.
pub fn fixed_point_iterate(
    prob: &QuadraticProblem,
    start: &TruncSeries,
    iterations: usize,
) -> Result<TruncSeries, SolveError> {
    let mut x = start.clone();
    for _ in 0..iterations {
        x = fixed_point_step(prob, &x)?;
    }
    Ok(x)
}

/// Fixed-point iteration from the zero series, run at increasing precision.
///
/// After iteration `m` the coefficients of degree `< m` no longer move, so
/// iteration `m` only has to produce coefficient `m`: the degree-`m` part of
/// `-b^{-1} (t + x^2)`. This keeps the whole run at O(n^2).
pub fn fixed_point_oracle(prob: &QuadraticProblem) -> TruncSeries {
    let neg_inv = -prob.linear().inverse().expect("a is invertible");
    let coeffs = with_kernel(
        &prob.prime,
        IncrementalFixedPoint {
            neg_inv: neg_inv.value(),
            n: prob.n,
        },
    );
    TruncSeries::from_canonical(&prob.prime, coeffs)
}

struct IncrementalFixedPoint<'a> {
    neg_inv: &'a BigUint,
    n: usize,
}

impl KernelFn<Vec<BigUint>> for IncrementalFixedPoint<'_> {
    fn call<K: Kernel>(self, kernel: &K) -> Vec<BigUint> {
        let neg_inv = kernel.lift(self.neg_inv);
        let one = kernel.lift(&BigUint::one());
        let mut x = vec![kernel.zero(); self.n];
        for m in 1..self.n {
            let mut square = kernel.dot(x[1..m].iter().zip(x[1..m].iter().rev()));
            if m == 1 {
                square = kernel.add(&square, &one);
            }
            x[m] = kernel.mul(&neg_inv, &square);
        }
        x.iter().map(|c| kernel.lower(c)).collect()
    }
}

/// Coefficients of the series root in Z/p^n rather than F_p: the same
/// Catalan formula with exact `C_{k-1}` and `b^{-1}` taken mod p^n. They
/// reduce mod p to the coefficients of [`series_root`].
pub fn lifted_root_coefficients(prob: &QuadraticProblem) -> Vec<BigUint> {
    let modulus = prob.numeric_modulus();
    let m = BigInt::from(modulus.clone());
    let b = prob
        .linear_lifted()
        .mod_floor(&m)
        .to_biguint()
        .expect("non-negative");
    let inv = mod_inverse(&b, &modulus).expect("a is a unit mod p, hence mod p^n");
    let inv_sq = &inv * &inv % &modulus;
    let mut weight = inv;
    let mut coeffs = vec![BigUint::zero()];
    for c in catalan_ratio(prob.n - 2) {
        let term = c % &modulus * &weight % &modulus;
        coeffs.push((&modulus - term) % &modulus);
        weight = weight * &inv_sq % &modulus;
    }
    coeffs
}

/// The two roots in Z/p^n obtained by reading `t = p`: the lifted series
/// root evaluated at `p`, and `-b` minus it.
pub fn numeric_roots(prob: &QuadraticProblem) -> (PrimePowerInt, PrimePowerInt) {
    let modulus = prob.numeric_modulus();
    let p = prob.prime.value();
    let x1 = lifted_root_coefficients(prob)
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, c| (acc * p + c) % &modulus);
    let m = BigInt::from(modulus);
    let x2 = (-prob.linear_lifted() - BigInt::from(x1.clone()))
        .mod_floor(&m)
        .to_biguint()
        .expect("non-negative");
    (
        PrimePowerInt::new(x1, &prob.prime, prob.n),
        PrimePowerInt::new(x2, &prob.prime, prob.n),
    )
}

/// Lifts a simple root `start` of `f(x) = x^2 + b*x + p` modulo p to the
/// unique root modulo `p^exponent` congruent to it, one p-adic digit per
/// step: `x <- x - f(x) * f'(start)^{-1}`.
pub fn hensel_lift(
    prime: &Prime,
    exponent: usize,
    linear: &BigInt,
    start: &BigUint,
) -> Result<PrimePowerInt, SolveError> {
    let p = BigInt::from(prime.value().clone());
    let f = |x: &BigInt| x * x + linear * x + &p;
    let mut x = BigInt::from(start.clone()).mod_floor(&p);
    if !f(&x).mod_floor(&p).is_zero() {
        return Err(SolveError::NotARootModP);
    }
    let derivative = (BigInt::from(2) * &x + linear)
        .mod_floor(&p)
        .to_biguint()
        .expect("non-negative");
    let inv = BigInt::from(
        mod_inverse(&derivative, prime.value()).ok_or(SolveError::NonInvertibleDerivative)?,
    );
    let mut modulus = p.clone();
    for _ in 1..exponent {
        modulus *= &p;
        x = (&x - f(&x) * &inv).mod_floor(&modulus);
    }
    Ok(PrimePowerInt::new(
        x.to_biguint().expect("non-negative"),
        prime,
        exponent,
    ))
}

/// The Hensel-lifted root congruent to 0 mod p.
pub fn hensel_oracle(prob: &QuadraticProblem) -> Result<PrimePowerInt, SolveError> {
    hensel_lift(&prob.prime, prob.n, &prob.linear_lifted(), &BigUint::zero())
}

/// The Hensel-lifted root congruent to `-b` mod p.
pub fn hensel_second_root(prob: &QuadraticProblem) -> Result<PrimePowerInt, SolveError> {
    let start = (-prob.linear()).into_value();
    hensel_lift(&prob.prime, prob.n, &prob.linear_lifted(), &start)
}

/// Every `x` in `[0, p^n)` with `x^2 + b*x + p = 0 (mod p^n)`.
pub fn brute_force_oracle(prob: &QuadraticProblem, cap: u64) -> Result<BTreeSet<BigUint>, SolveError> {
    let modulus = prob.numeric_modulus();
    let m = match modulus.to_u64() {
        Some(m) if m <= cap => m,
        _ => return Err(SolveError::CapExceeded { modulus, cap }),
    };
    let m_big = BigInt::from(m);
    let b = prob
        .linear_lifted()
        .mod_floor(&m_big)
        .to_u64()
        .expect("reduced below a u64 modulus") as u128;
    let p = prob.prime.as_u64().expect("p <= p^n fits") as u128;
    let m = m as u128;
    let roots = (0..m)
        .filter(|&x| (x * x % m + b * x % m + p) % m == 0)
        .map(|x| BigUint::from(x as u64))
        .collect();
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Agree,
    Disagree,
    Skipped,
}

impl OracleStatus {
    fn from_agreement(agree: bool) -> Self {
        if agree {
            OracleStatus::Agree
        } else {
            OracleStatus::Disagree
        }
    }

    pub fn is_failure(self) -> bool {
        self == OracleStatus::Disagree
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleFlags {
    pub fixed_point: bool,
    pub hensel: OracleStatus,
    pub brute_force: OracleStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericRoots {
    pub modulus: BigUint,
    pub x1: PrimePowerInt,
    pub x2: PrimePowerInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Report the roots in Z/p^n and always run the Hensel oracle.
    pub numeric: bool,
    /// Largest `p^n` for which the exhaustive oracle (and, without
    /// `numeric`, the Hensel oracle) runs.
    pub brute_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            numeric: false,
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub problem: QuadraticProblem,
    pub root1: TruncSeries,
    pub root2: TruncSeries,
    pub residual1: TruncSeries,
    pub residual2: TruncSeries,
    pub oracles: OracleFlags,
    pub numeric: Option<NumericRoots>,
    pub catalan_path: GenerationPath,
}

impl SolveReport {
    /// Both residuals vanish.
    pub fn verified(&self) -> bool {
        self.residual1.is_zero() && self.residual2.is_zero()
    }

    /// Verified, and no oracle that ran disagreed.
    pub fn success(&self) -> bool {
        self.verified()
            && self.oracles.fixed_point
            && !self.oracles.hensel.is_failure()
            && !self.oracles.brute_force.is_failure()
    }
}

pub fn solve(prob: &QuadraticProblem, options: &SolveOptions) -> Result<SolveReport, SolveError> {
    let (root1, catalan_path) = series_root(prob);
    let root2 = second_root(&root1, &prob.linear())?;
    let residual1 = prob.residual(&root1)?;
    let residual2 = prob.residual(&root2)?;

    let fixed_point = fixed_point_oracle(prob) == root1;

    let modulus = prob.numeric_modulus();
    let small = modulus <= BigUint::from(options.brute_cap);
    let numeric = if options.numeric || small {
        let (x1, x2) = numeric_roots(prob);
        Some(NumericRoots {
            modulus: modulus.clone(),
            x1,
            x2,
        })
    } else {
        None
    };

    let hensel = match &numeric {
        Some(roots) => OracleStatus::from_agreement(
            hensel_oracle(prob)? == roots.x1 && hensel_second_root(prob)? == roots.x2,
        ),
        None => OracleStatus::Skipped,
    };
    let brute_force = match (&numeric, small) {
        (Some(roots), true) => {
            let found = brute_force_oracle(prob, options.brute_cap)?;
            let expected: BTreeSet<BigUint> =
                [roots.x1.value().clone(), roots.x2.value().clone()].into();
            OracleStatus::from_agreement(found == expected)
        }
        _ => OracleStatus::Skipped,
    };

    Ok(SolveReport {
        problem: prob.clone(),
        root1,
        root2,
        residual1,
        residual2,
        oracles: OracleFlags {
            fixed_point,
            hensel,
            brute_force,
        },
        numeric: numeric.filter(|_| options.numeric),
        catalan_path,
    })
}
