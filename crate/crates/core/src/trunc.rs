//! The quotient ring F_p[t]/(t^n), where every "(mod t^n)" congruence lives.
//!
//! `t` is nilpotent here: products drop every term of degree `>= n`. The
//! numeric reading `t = p` is provided by [`TruncSeries::eval_at_p`], which
//! maps a series with digits in `[0, p-1]` into Z/p^n.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::field::{with_kernel, FieldError, Kernel, KernelFn, Prime, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruncError {
    #[error("truncation degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("{len} coefficients do not fit modulo t^{n}")]
    InputTooLong { len: usize, n: usize },
    #[error("series shapes differ: (p={lp}, n={ln}) vs (p={rp}, n={rn})")]
    ShapeMismatch {
        lp: BigUint,
        ln: usize,
        rp: BigUint,
        rn: usize,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An element of F_p[t]/(t^n), stored densely: `coeffs[k]` is the canonical
/// coefficient of `t^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<BigUint>,
    prime: Prime,
}

impl TruncSeries {
    fn check_degree(n: usize) -> Result<(), TruncError> {
        if n < 2 {
            Err(TruncError::DegreeTooSmall(n))
        } else {
            Ok(())
        }
    }

    pub fn zero(prime: &Prime, n: usize) -> Result<Self, TruncError> {
        Self::check_degree(n)?;
        Ok(TruncSeries {
            coeffs: vec![BigUint::zero(); n],
            prime: prime.clone(),
        })
    }

    /// `t^k`, which is the zero series once `k >= n`.
    pub fn monomial(prime: &Prime, n: usize, k: usize) -> Result<Self, TruncError> {
        let mut s = Self::zero(prime, n)?;
        if k < n {
            s.coeffs[k] = BigUint::from(1u32);
        }
        Ok(s)
    }

    pub fn constant(c: &Residue, n: usize) -> Result<Self, TruncError> {
        Self::from_residues(c.modulus(), std::slice::from_ref(c), n)
    }

    /// Zero-pads `coeffs` to length `n`.
    pub fn from_residues(prime: &Prime, coeffs: &[Residue], n: usize) -> Result<Self, TruncError> {
        Self::check_degree(n)?;
        if coeffs.len() > n {
            return Err(TruncError::InputTooLong {
                len: coeffs.len(),
                n,
            });
        }
        let mut out = Self::zero(prime, n)?;
        for (slot, c) in out.coeffs.iter_mut().zip(coeffs) {
            if c.modulus() != prime {
                return Err(FieldError::ModulusMismatch(
                    prime.value().clone(),
                    c.modulus().value().clone(),
                )
                .into());
            }
            *slot = c.value().clone();
        }
        Ok(out)
    }

    /// Like [`from_residues`](Self::from_residues), reducing arbitrary integers mod p.
    pub fn from_integers(prime: &Prime, coeffs: &[BigInt], n: usize) -> Result<Self, TruncError> {
        let residues: Vec<Residue> = coeffs
            .iter()
            .map(|c| Residue::from_bigint(c, prime))
            .collect();
        Self::from_residues(prime, &residues, n)
    }

    pub(crate) fn from_canonical(prime: &Prime, coeffs: Vec<BigUint>) -> Self {
        debug_assert!(coeffs.len() >= 2);
        debug_assert!(coeffs.iter().all(|c| c < prime.value()));
        TruncSeries {
            coeffs,
            prime: prime.clone(),
        }
    }

    /// The truncation degree `n`.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Residue {
        Residue::from_canonical(self.coeffs[k].clone(), &self.prime)
    }

    pub fn residues(&self) -> Vec<Residue> {
        (0..self.coeffs.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the lowest non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_shape(&self, other: &TruncSeries) -> Result<(), TruncError> {
        if self.prime == other.prime && self.coeffs.len() == other.coeffs.len() {
            Ok(())
        } else {
            Err(TruncError::ShapeMismatch {
                lp: self.prime.value().clone(),
                ln: self.coeffs.len(),
                rp: other.prime.value().clone(),
                rn: other.coeffs.len(),
            })
        }
    }

    fn zip_with(
        &self,
        other: &TruncSeries,
        f: impl Fn(Residue, Residue) -> Residue,
    ) -> Result<TruncSeries, TruncError> {
        self.check_shape(other)?;
        let coeffs = (0..self.coeffs.len())
            .map(|k| f(self.coeff(k), other.coeff(k)).into_value())
            .collect();
        Ok(Self::from_canonical(&self.prime, coeffs))
    }

    pub fn try_add(&self, other: &TruncSeries) -> Result<TruncSeries, TruncError> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn try_sub(&self, other: &TruncSeries) -> Result<TruncSeries, TruncError> {
        self.zip_with(other, |x, y| x - y)
    }

    /// Truncated Cauchy product: `z_m = sum_{i+j=m} x_i y_j` for `m < n`.
    pub fn try_mul(&self, other: &TruncSeries) -> Result<TruncSeries, TruncError> {
        self.check_shape(other)?;
        let coeffs = with_kernel(
            &self.prime,
            TruncatedProduct {
                x: &self.coeffs,
                y: &other.coeffs,
            },
        );
        Ok(Self::from_canonical(&self.prime, coeffs))
    }

    pub fn square(&self) -> TruncSeries {
        self.try_mul(self).expect("a series has its own shape")
    }

    fn check_scalar(&self, c: &Residue) -> Result<(), TruncError> {
        if c.modulus() == &self.prime {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(
                self.prime.value().clone(),
                c.modulus().value().clone(),
            )
            .into())
        }
    }

    /// Every coefficient multiplied by `c`.
    pub fn scalar_mul(&self, c: &Residue) -> Result<TruncSeries, TruncError> {
        self.check_scalar(c)?;
        let coeffs = (0..self.coeffs.len())
            .map(|k| (&self.coeff(k) * c).into_value())
            .collect();
        Ok(Self::from_canonical(&self.prime, coeffs))
    }

    /// The substitution `t -> c*t`: coefficient `k` is multiplied by `c^k`.
    pub fn scale(&self, c: &Residue) -> Result<TruncSeries, TruncError> {
        self.check_scalar(c)?;
        let mut power = self.prime.one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            coeffs.push((&self.coeff(k) * &power).into_value());
            power = &power * c;
        }
        Ok(Self::from_canonical(&self.prime, coeffs))
    }

    /// `sum_k coeffs[k] * p^k` in Z/p^n, with digits taken in `[0, p-1]`.
    pub fn eval_at_p(&self) -> PrimePowerInt {
        let p = self.prime.value();
        let value = self
            .coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| acc * p + c);
        PrimePowerInt::new(value, &self.prime, self.coeffs.len())
    }

    /// A display adapter printing coefficients as signed balanced values.
    pub fn balanced(&self) -> Balanced<'_> {
        Balanced(self)
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, balanced: bool) -> fmt::Result {
        let mut wrote = false;
        for k in 0..self.coeffs.len() {
            if self.coeffs[k].is_zero() {
                continue;
            }
            let signed = if balanced {
                self.coeff(k).signed()
            } else {
                BigInt::from(self.coeffs[k].clone())
            };
            let negative = signed < BigInt::zero();
            let magnitude = signed.magnitude().clone();
            match (wrote, negative) {
                (false, true) => f.write_str("-")?,
                (true, true) => f.write_str(" - ")?,
                (true, false) => f.write_str(" + ")?,
                (false, false) => {}
            }
            let unit = magnitude == BigUint::from(1u32);
            match k {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !unit {
                        write!(f, "{magnitude}*")?;
                    }
                    if k == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

struct TruncatedProduct<'a> {
    x: &'a [BigUint],
    y: &'a [BigUint],
}

impl KernelFn<Vec<BigUint>> for TruncatedProduct<'_> {
    fn call<K: Kernel>(self, kernel: &K) -> Vec<BigUint> {
        let x: Vec<K::Elem> = self.x.iter().map(|c| kernel.lift(c)).collect();
        let y: Vec<K::Elem> = self.y.iter().map(|c| kernel.lift(c)).collect();
        (0..x.len())
            .map(|m| kernel.lower(&kernel.dot(x[..=m].iter().zip(y[..=m].iter().rev()))))
            .collect()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, false)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod t^{}, p = {})", self.coeffs.len(), self.prime)
    }
}

pub struct Balanced<'a>(&'a TruncSeries);

impl fmt::Display for Balanced<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.render(f, true)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        let coeffs = (0..self.coeffs.len())
            .map(|k| (-self.coeff(k)).into_value())
            .collect();
        TruncSeries::from_canonical(&self.prime, coeffs)
    }
}

impl Neg for TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        -&self
    }
}

// Operator forms panic on shape mismatch; `try_*` reports it.
macro_rules! series_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&TruncSeries> for &TruncSeries {
            type Output = TruncSeries;

            fn $method(self, rhs: &TruncSeries) -> TruncSeries {
                self.$checked(rhs).expect("series shapes must match")
            }
        }

        impl $trait<TruncSeries> for TruncSeries {
            type Output = TruncSeries;

            fn $method(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$checked(&rhs).expect("series shapes must match")
            }
        }
    };
}

series_binop!(Add, add, try_add);
series_binop!(Sub, sub, try_sub);
series_binop!(Mul, mul, try_mul);

/// An element of Z/p^n in canonical form `[0, p^n - 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerInt {
    value: BigUint,
    p: BigUint,
    exponent: usize,
}

impl PrimePowerInt {
    pub fn new(value: BigUint, prime: &Prime, exponent: usize) -> Self {
        let modulus = prime.pow(exponent);
        PrimePowerInt {
            value: value % modulus,
            p: prime.value().clone(),
            exponent,
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn modulus(&self) -> BigUint {
        num_traits::pow(self.p.clone(), self.exponent)
    }
}

impl fmt::Debug for PrimePowerInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.exponent)
    }
}

impl fmt::Display for PrimePowerInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}
