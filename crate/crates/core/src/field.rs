//! Arithmetic in the prime field F_p.
//!
//! Residues are stored in canonical form `[0, p-1]`. The balanced view
//! (`|a|_p` together with the half-range classification) is derived on demand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Extra random Miller-Rabin rounds for candidates above 64 bits, on top of
/// the twelve fixed prime bases. The error bound is at most 4^-32.
pub const RANDOM_MR_ROUNDS: usize = 32;

const FIXED_MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(BigUint),
    #[error("modulus must be an odd prime greater than 2, got {0}")]
    TooSmall(BigUint),
    #[error("residues have different moduli ({0} vs {1})")]
    ModulusMismatch(BigUint, BigUint),
    #[error("0 has no inverse modulo {0}")]
    NotInvertible(BigUint),
}

#[derive(Debug)]
struct PrimeInner {
    value: BigUint,
    small: Option<u64>,
}

/// An odd prime modulus, checked at construction.
#[derive(Clone)]
pub struct Prime(Arc<PrimeInner>);

impl Prime {
    pub fn new(p: BigUint) -> Result<Self, FieldError> {
        if p <= BigUint::from(2u32) {
            return Err(FieldError::TooSmall(p));
        }
        if !is_probable_prime(&p) {
            return Err(FieldError::NotPrime(p));
        }
        let small = p.to_u64();
        Ok(Prime(Arc::new(PrimeInner { value: p, small })))
    }

    pub fn from_u64(p: u64) -> Result<Self, FieldError> {
        Self::new(BigUint::from(p))
    }

    pub fn value(&self) -> &BigUint {
        &self.0.value
    }

    /// The modulus as a machine word, when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        self.0.small
    }

    /// `(p - 1) / 2`, the top of the positive half-range.
    pub fn half(&self) -> BigUint {
        (&self.0.value - 1u32) >> 1
    }

    pub fn pow(&self, n: usize) -> BigUint {
        num_traits::pow(self.0.value.clone(), n)
    }

    pub fn zero(&self) -> Residue {
        Residue {
            value: BigUint::zero(),
            modulus: self.clone(),
        }
    }

    pub fn one(&self) -> Residue {
        Residue {
            value: BigUint::one(),
            modulus: self.clone(),
        }
    }

    pub fn residue(&self, value: impl Into<BigInt>) -> Residue {
        Residue::from_bigint(&value.into(), self)
    }
}

impl PartialEq for Prime {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.value == other.0.value
    }
}

impl Eq for Prime {}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.0.value)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.value.fmt(f)
    }
}

/// Position of a residue relative to the balanced half-ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Half {
    Zero,
    /// `[1, (p-1)/2]`
    Positive,
    /// `[(p+1)/2, p-1]`
    Negative,
}

/// An element of F_p in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    modulus: Prime,
}

impl Residue {
    pub fn new(value: &BigUint, modulus: &Prime) -> Self {
        Residue {
            value: value % modulus.value(),
            modulus: modulus.clone(),
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: &Prime) -> Self {
        let p = BigInt::from(modulus.value().clone());
        let reduced = value.mod_floor(&p);
        Residue {
            value: reduced.to_biguint().expect("mod_floor is non-negative"),
            modulus: modulus.clone(),
        }
    }

    pub(crate) fn from_canonical(value: BigUint, modulus: &Prime) -> Self {
        debug_assert!(&value < modulus.value());
        Residue {
            value,
            modulus: modulus.clone(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn modulus(&self) -> &Prime {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn classify(&self) -> Half {
        if self.value.is_zero() {
            Half::Zero
        } else if self.value <= self.modulus.half() {
            Half::Positive
        } else {
            Half::Negative
        }
    }

    /// `|a|_p`: the distance to zero, always in `[0, (p-1)/2]`.
    pub fn balanced_value(&self) -> BigUint {
        match self.classify() {
            Half::Zero => BigUint::zero(),
            Half::Positive => self.value.clone(),
            Half::Negative => self.modulus.value() - &self.value,
        }
    }

    /// The balanced representative with its sign, in `[-(p-1)/2, (p-1)/2]`.
    pub fn signed(&self) -> BigInt {
        let magnitude = BigInt::from(self.balanced_value());
        match self.classify() {
            Half::Negative => -magnitude,
            _ => magnitude,
        }
    }

    fn check_modulus(&self, other: &Residue) -> Result<(), FieldError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(
                self.modulus.value().clone(),
                other.modulus.value().clone(),
            ))
        }
    }

    pub fn try_add(&self, other: &Residue) -> Result<Residue, FieldError> {
        self.check_modulus(other)?;
        let mut sum = &self.value + &other.value;
        if &sum >= self.modulus.value() {
            sum -= self.modulus.value();
        }
        Ok(Residue::from_canonical(sum, &self.modulus))
    }

    pub fn try_sub(&self, other: &Residue) -> Result<Residue, FieldError> {
        self.check_modulus(other)?;
        let diff = if self.value >= other.value {
            &self.value - &other.value
        } else {
            self.modulus.value() - &other.value + &self.value
        };
        Ok(Residue::from_canonical(diff, &self.modulus))
    }

    pub fn try_mul(&self, other: &Residue) -> Result<Residue, FieldError> {
        self.check_modulus(other)?;
        Ok(Residue::new(&(&self.value * &other.value), &self.modulus))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<Residue, FieldError> {
        mod_inverse(&self.value, self.modulus.value())
            .map(|v| Residue::from_canonical(v, &self.modulus))
            .ok_or_else(|| FieldError::NotInvertible(self.modulus.value().clone()))
    }

    pub fn pow(&self, exp: &BigUint) -> Residue {
        Residue::from_canonical(
            self.value.modpow(exp, self.modulus.value()),
            &self.modulus,
        )
    }

    pub fn pow_u64(&self, exp: u64) -> Residue {
        self.pow(&BigUint::from(exp))
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.value())
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Neg for &Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        if self.value.is_zero() {
            self.clone()
        } else {
            Residue::from_canonical(self.modulus.value() - &self.value, &self.modulus)
        }
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        -&self
    }
}

// The operator forms panic on mismatched moduli; the `try_*` methods report it.
macro_rules! residue_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Residue> for &Residue {
            type Output = Residue;

            fn $method(self, rhs: &Residue) -> Residue {
                self.$checked(rhs).expect("residue moduli must match")
            }
        }

        impl $trait<Residue> for Residue {
            type Output = Residue;

            fn $method(self, rhs: Residue) -> Residue {
                (&self).$checked(&rhs).expect("residue moduli must match")
            }
        }
    };
}

residue_binop!(Add, add, try_add);
residue_binop!(Sub, sub, try_sub);
residue_binop!(Mul, mul, try_mul);

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.sign() == Sign::Minus {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let m_int = BigInt::from(m.clone());
    let (g, x, _) = extended_gcd(&BigInt::from(a % m), &m_int);
    if !g.is_one() {
        return None;
    }
    x.mod_floor(&m_int).to_biguint()
}

/// Miller-Rabin. Deterministic below 2^64 (the first twelve prime bases
/// suffice there); above that, the fixed bases plus [`RANDOM_MR_ROUNDS`]
/// random bases.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &b in FIXED_MR_BASES.iter() {
        if (n % b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if FIXED_MR_BASES
        .iter()
        .any(|&b| witness(&BigUint::from(b)))
    {
        return false;
    }
    let mut rng = rand::thread_rng();
    let two = BigUint::from(2u32);
    (0..RANDOM_MR_ROUNDS).all(|_| !witness(&rng.gen_biguint_range(&two, &n_minus_1)))
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in FIXED_MR_BASES.iter() {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in FIXED_MR_BASES.iter() {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Coefficient arithmetic used by the hot loops (truncated products,
/// fixed-point iteration). Word-sized moduli avoid big-integer allocation.
pub(crate) trait Kernel {
    type Elem: Clone;

    fn lift(&self, x: &BigUint) -> Self::Elem;
    fn lower(&self, x: &Self::Elem) -> BigUint;
    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `sum(xs[i] * ys[i])`, reduced.
    fn dot<'a>(&self, pairs: impl Iterator<Item = (&'a Self::Elem, &'a Self::Elem)>) -> Self::Elem
    where
        Self::Elem: 'a;
}

pub(crate) struct WordKernel {
    p: u64,
}

impl Kernel for WordKernel {
    type Elem = u64;

    fn lift(&self, x: &BigUint) -> u64 {
        (x % self.p).to_u64().expect("reduced below a u64 modulus")
    }

    fn lower(&self, x: &u64) -> BigUint {
        BigUint::from(*x)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn add(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 + *y as u128) % self.p as u128) as u64
    }

    fn mul(&self, x: &u64, y: &u64) -> u64 {
        mul_mod_u64(*x, *y, self.p)
    }

    fn dot<'a>(&self, pairs: impl Iterator<Item = (&'a u64, &'a u64)>) -> u64 {
        // Each product is below 2^128 / 64 when p < 2^61, so the accumulator
        // may absorb several before reducing; fall back to per-term reduction
        // for wider moduli.
        let m = self.p as u128;
        let batch = if self.p < (1 << 61) { 32 } else { 1 };
        let mut acc: u128 = 0;
        let mut pending = 0;
        for (x, y) in pairs {
            acc += *x as u128 * *y as u128;
            pending += 1;
            if pending == batch {
                acc %= m;
                pending = 0;
            }
        }
        (acc % m) as u64
    }
}

pub(crate) struct BigKernel {
    p: BigUint,
}

impl Kernel for BigKernel {
    type Elem = BigUint;

    fn lift(&self, x: &BigUint) -> BigUint {
        x % &self.p
    }

    fn lower(&self, x: &BigUint) -> BigUint {
        x.clone()
    }

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn add(&self, x: &BigUint, y: &BigUint) -> BigUint {
        (x + y) % &self.p
    }

    fn mul(&self, x: &BigUint, y: &BigUint) -> BigUint {
        x * y % &self.p
    }

    fn dot<'a>(&self, pairs: impl Iterator<Item = (&'a BigUint, &'a BigUint)>) -> BigUint {
        let mut acc = BigUint::zero();
        for (x, y) in pairs {
            acc += x * y;
        }
        acc % &self.p
    }
}

/// Runs `f` with the cheapest kernel that can represent residues mod `p`.
pub(crate) fn with_kernel<R>(p: &Prime, f: impl KernelFn<R>) -> R {
    match p.as_u64() {
        Some(small) if small < (1 << 63) => f.call(&WordKernel { p: small }),
        _ => f.call(&BigKernel {
            p: p.value().clone(),
        }),
    }
}

/// A computation generic over the coefficient kernel.
pub(crate) trait KernelFn<R> {
    fn call<K: Kernel>(self, kernel: &K) -> R;
}
