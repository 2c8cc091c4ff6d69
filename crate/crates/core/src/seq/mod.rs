//! Polyseries: potentially unbounded, memoized sequences of natural numbers
//! `[a_1, a_2, ...⟩`, together with the sequence procedures defined on them.
//!
//! Positions are 1-based. Unbounded polyseries are lazily generated and
//! memoized behind a mutex, so handles are `Send + Sync` and clones share the
//! memo table. Truncation is the only way to obtain a finite polyseries from
//! an unbounded one; procedures that need every term (sorting, tail minima)
//! require a finite bound, and searches over an unbounded polyseries take an
//! explicit horizon so that every call terminates.

pub mod primes;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use thiserror::Error;

pub use primes::{check_prime1, check_prime2, primes, PrimeSieve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("polyseries positions start at 1")]
    InvalidIndex,
    #[error("position {index} is beyond the polyseries length {bound}")]
    OutOfRange { index: usize, bound: usize },
    #[error("operation needs a finite polyseries")]
    Unbounded,
}

/// Result of [`Polyseries::length`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Unbounded,
}

type Generator = Box<dyn FnMut(usize, &[BigUint]) -> BigUint + Send>;

struct Memo {
    generator: Generator,
    prefix: Vec<BigUint>,
}

impl Memo {
    fn materialize(&mut self, upto: usize) {
        while self.prefix.len() < upto {
            let k = self.prefix.len() + 1;
            let term = (self.generator)(k, &self.prefix);
            self.prefix.push(term);
        }
    }
}

#[derive(Clone)]
enum Source {
    Lazy(Arc<Mutex<Memo>>),
    Terms(Arc<[BigUint]>),
}

#[derive(Clone)]
pub struct Polyseries {
    source: Source,
    bound: Option<usize>,
}

impl Polyseries {
    /// An unbounded polyseries whose `k`-th term (1-indexed) is
    /// `generator(k, prefix)`, where `prefix` holds terms `1..k`.
    pub fn from_fn<F>(generator: F) -> Self
    where
        F: FnMut(usize, &[BigUint]) -> BigUint + Send + 'static,
    {
        Polyseries {
            source: Source::Lazy(Arc::new(Mutex::new(Memo {
                generator: Box::new(generator),
                prefix: Vec::new(),
            }))),
            bound: None,
        }
    }

    /// A finite polyseries holding exactly `terms`.
    pub fn from_terms(terms: Vec<BigUint>) -> Self {
        let bound = terms.len();
        Polyseries {
            source: Source::Terms(terms.into()),
            bound: Some(bound),
        }
    }

    pub fn from_u64s(terms: &[u64]) -> Self {
        Self::from_terms(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn empty() -> Self {
        Self::from_terms(Vec::new())
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn is_finite(&self) -> bool {
        self.bound.is_some()
    }

    /// Number of terms memoized so far (for lazy sources) or held (for
    /// materialized ones).
    pub fn materialized_len(&self) -> usize {
        match &self.source {
            Source::Lazy(memo) => memo.lock().expect("memo lock poisoned").prefix.len(),
            Source::Terms(terms) => terms.len(),
        }
    }

    /// Terms `1..=upto` without bound checks.
    fn prefix(&self, upto: usize) -> Vec<BigUint> {
        match &self.source {
            Source::Lazy(memo) => {
                let mut memo = memo.lock().expect("memo lock poisoned");
                memo.materialize(upto);
                memo.prefix[..upto].to_vec()
            }
            Source::Terms(terms) => terms[..upto].to_vec(),
        }
    }

    fn term(&self, n: usize) -> BigUint {
        match &self.source {
            Source::Lazy(memo) => {
                let mut memo = memo.lock().expect("memo lock poisoned");
                memo.materialize(n);
                memo.prefix[n - 1].clone()
            }
            Source::Terms(terms) => terms[n - 1].clone(),
        }
    }

    fn check_position(&self, n: usize) -> Result<(), SeqError> {
        if n == 0 {
            return Err(SeqError::InvalidIndex);
        }
        match self.bound {
            Some(bound) if n > bound => Err(SeqError::OutOfRange { index: n, bound }),
            _ => Ok(()),
        }
    }

    /// The `n`-th term. Memoizes every term up to `n`.
    pub fn value(&self, n: usize) -> Result<BigUint, SeqError> {
        self.check_position(n)?;
        Ok(self.term(n))
    }

    pub fn length(&self) -> Length {
        match self.bound {
            Some(b) => Length::Finite(b),
            None => Length::Unbounded,
        }
    }

    /// The first `k` terms as a bounded polyseries. Truncating a lazy source
    /// shares its memo table rather than materializing.
    pub fn truncation(&self, k: usize) -> Result<Polyseries, SeqError> {
        if let Some(bound) = self.bound {
            if k > bound {
                return Err(SeqError::OutOfRange { index: k, bound });
            }
        }
        Ok(Polyseries {
            source: self.source.clone(),
            bound: Some(k),
        })
    }

    /// All terms of a finite polyseries.
    pub fn terms(&self) -> Result<Vec<BigUint>, SeqError> {
        let bound = self.bound.ok_or(SeqError::Unbounded)?;
        Ok(self.prefix(bound))
    }

    fn horizon(&self, search_bound: usize) -> usize {
        self.bound.map_or(search_bound, |b| b.min(search_bound))
    }

    /// Position of the first occurrence of `a` among terms `1..=search_bound`.
    pub fn index(&self, a: &BigUint, search_bound: usize) -> Option<usize> {
        let horizon = self.horizon(search_bound);
        self.prefix(horizon)
            .iter()
            .position(|term| term == a)
            .map(|i| i + 1)
    }

    /// The term following the first occurrence of `a`.
    pub fn next(&self, a: &BigUint, search_bound: usize) -> Option<BigUint> {
        let position = self.index(a, search_bound)?;
        self.value(position + 1).ok()
    }

    /// The term preceding the first occurrence of `a`.
    pub fn previous(&self, a: &BigUint, search_bound: usize) -> Option<BigUint> {
        let position = self.index(a, search_bound)?;
        if position == 1 {
            return None;
        }
        Some(self.term(position - 1))
    }

    /// `min { value(k) : n <= k <= bound }`.
    pub fn tailmin(&self, n: usize) -> Result<BigUint, SeqError> {
        let bound = self.bound.ok_or(SeqError::Unbounded)?;
        self.check_position(n)?;
        Ok(self.prefix(bound)[n - 1..]
            .iter()
            .min()
            .expect("tail is non-empty")
            .clone())
    }

    /// The terms in non-decreasing order, duplicates kept.
    pub fn sorted(&self) -> Result<Polyseries, SeqError> {
        let mut terms = self.terms()?;
        terms.sort();
        Ok(Polyseries::from_terms(terms))
    }

    /// Strictly increasing check over the whole finite polyseries.
    pub fn is_sorted(&self) -> Result<bool, SeqError> {
        let bound = self.bound.ok_or(SeqError::Unbounded)?;
        Ok(self.is_sorted_within(bound))
    }

    /// Strictly increasing check over terms `1..=horizon` (clipped to the bound).
    pub fn is_sorted_within(&self, horizon: usize) -> bool {
        self.prefix(self.horizon(horizon))
            .windows(2)
            .all(|w| w[0] < w[1])
    }
}

/// `sorted(a) = sorted(b)` term by term, i.e. multiset equality.
pub fn permutad(a: &Polyseries, b: &Polyseries) -> Result<bool, SeqError> {
    Ok(a.sorted()?.terms()? == b.sorted()?.terms()?)
}

impl fmt::Debug for Polyseries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bound {
            Some(bound) => f.debug_list().entries(self.prefix(bound)).finish(),
            None => write!(f, "Polyseries(unbounded, {} memoized)", self.materialized_len()),
        }
    }
}
