use num_bigint::BigUint;
use num_traits::Zero;

use super::Polyseries;

/// Incremental sieve of Eratosthenes. The sieved range doubles whenever more
/// primes are requested than are currently known.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: usize,
    primes: Vec<u64>,
}

impl Default for PrimeSieve {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeSieve {
    pub fn new() -> Self {
        PrimeSieve {
            limit: 1,
            primes: Vec::new(),
        }
    }

    pub fn known(&self) -> &[u64] {
        &self.primes
    }

    /// The `k`-th prime, 1-indexed.
    pub fn nth(&mut self, k: usize) -> u64 {
        assert!(k >= 1, "prime positions start at 1");
        while self.primes.len() < k {
            self.extend_to((self.limit * 2).max(64));
        }
        self.primes[k - 1]
    }

    /// Sieves the segment `(limit, new_limit]` using the primes already found.
    fn extend_to(&mut self, new_limit: usize) {
        let lo = self.limit + 1;
        let mut composite = vec![false; new_limit - self.limit];
        let mark = |q: usize, composite: &mut Vec<bool>| {
            let start = (q * q).max(lo.div_ceil(q) * q);
            let mut m = start;
            while m <= new_limit {
                composite[m - lo] = true;
                m += q;
            }
        };
        for &q in self.primes.iter() {
            let q = q as usize;
            if q * q > new_limit {
                break;
            }
            mark(q, &mut composite);
        }
        // Primes discovered inside this segment also sieve the rest of it.
        for i in lo.max(2)..=new_limit {
            if !composite[i - lo] {
                self.primes.push(i as u64);
                if i * i <= new_limit {
                    mark(i, &mut composite);
                }
            }
        }
        self.limit = new_limit;
    }
}

/// The polyseries of primes `[2, 3, 5, 7, ...⟩`.
pub fn primes() -> Polyseries {
    let mut sieve = PrimeSieve::new();
    Polyseries::from_fn(move |k, _| BigUint::from(sieve.nth(k)))
}

/// Prime1: strictly increasing terms.
pub fn check_prime1(terms: &[BigUint]) -> bool {
    terms.windows(2).all(|w| w[0] < w[1])
}

/// Prime2: for all positions `u < v`, `term(v) mod term(u) != 0`.
pub fn check_prime2(terms: &[BigUint]) -> bool {
    terms.iter().enumerate().all(|(v, later)| {
        terms[..v]
            .iter()
            .all(|earlier| !(later % earlier).is_zero())
    })
}
