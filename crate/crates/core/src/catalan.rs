//! Catalan numbers `C_n = binom(2n, n) / (n + 1)`.
//!
//! Three generation routes are kept side by side so they can check each
//! other: the binomial closed form, the convolution recurrence
//! `C_{n+1} = sum C_k C_{n-k}`, and the ratio recurrence
//! `(n + 2) C_{n+1} = 2(2n + 1) C_n`. Exact values are always big integers;
//! `C_n` leaves the signed 64-bit range at n = 36 and the unsigned one at n = 37.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::{Prime, Residue};
use crate::trunc::TruncSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Binomial,
    Convolution,
    Ratio,
}

/// How residues mod p were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerationPath {
    /// Ratio recurrence evaluated directly in F_p.
    Ratio,
    /// Exact big-integer values reduced mod p, used when some divisor
    /// `k + 2` would vanish mod p.
    ExactReduce,
}

/// `binom(2n, n) / (n + 1)`, with the division checked to be exact.
pub fn catalan_binomial(n: usize) -> BigUint {
    let central = binomial(2 * n, n);
    let (quotient, remainder) = central.div_rem(&BigUint::from(n + 1));
    assert!(remainder.is_zero(), "n + 1 must divide binom(2n, n)");
    quotient
}

/// `binom(n, k)` by the multiplicative formula; each partial product is itself
/// a binomial coefficient, so every division is exact.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `[C_0, ..., C_up_to]` from the convolution recurrence.
pub fn catalan_convolution(up_to: usize) -> Vec<BigUint> {
    let mut values: Vec<BigUint> = Vec::with_capacity(up_to + 1);
    values.push(BigUint::one());
    for n in 0..up_to {
        let next = (0..=n).fold(BigUint::zero(), |acc, k| acc + &values[k] * &values[n - k]);
        values.push(next);
    }
    values
}

/// `[C_0, ..., C_up_to]` from the ratio recurrence over the integers.
pub fn catalan_ratio(up_to: usize) -> Vec<BigUint> {
    let mut values: Vec<BigUint> = Vec::with_capacity(up_to + 1);
    values.push(BigUint::one());
    for n in 0..up_to {
        let (next, remainder) = (&values[n] * (2 * (2 * n + 1))).div_rem(&BigUint::from(n + 2));
        debug_assert!(remainder.is_zero());
        values.push(next);
    }
    values
}

/// `[C_0 mod p, ..., C_up_to mod p]`.
///
/// Uses the ratio recurrence in F_p when `p > up_to + 2`, so that every
/// divisor `k + 2` is invertible. Otherwise computes exact values and reduces.
pub fn catalan_ratio_mod_p(up_to: usize, p: &Prime) -> (Vec<Residue>, GenerationPath) {
    if p.value() <= &BigUint::from(up_to + 2) {
        let values = catalan_ratio(up_to)
            .iter()
            .map(|c| Residue::new(c, p))
            .collect();
        return (values, GenerationPath::ExactReduce);
    }
    let mut values = Vec::with_capacity(up_to + 1);
    let mut current = p.one();
    values.push(current.clone());
    for n in 0..up_to {
        let divisor = p
            .residue(n as u64 + 2)
            .inverse()
            .expect("p > up_to + 2 keeps divisors invertible");
        current = &(&current * &p.residue(2 * (2 * n as u64 + 1))) * &divisor;
        values.push(current.clone());
    }
    (values, GenerationPath::Ratio)
}

/// Checks `S = 1 + t S^2` in F_p[t]/(t^n) for `S = sum_{k<n} C_k t^k`, the
/// truncated form of the generating-function identity.
pub fn gf_fixed_point_check(n: usize, p: &Prime) -> bool {
    assert!(n >= 1, "need at least one coefficient");
    let (coeffs, _) = catalan_ratio_mod_p(n - 1, p);
    if n == 1 {
        // Modulo t the identity reads S_0 = 1.
        return coeffs[0] == p.one();
    }
    let s = TruncSeries::from_residues(p, &coeffs, n).expect("n >= 2");
    let t = TruncSeries::monomial(p, n, 1).expect("n >= 2");
    let one = TruncSeries::constant(&p.one(), n).expect("n >= 2");
    s == &one + &(&t * &s.square())
}

/// A memoized Catalan sequence produced by a single method.
#[derive(Debug, Clone)]
pub struct CatalanStream {
    method: Method,
    values: Vec<BigUint>,
}

impl CatalanStream {
    pub fn new(method: Method) -> Self {
        CatalanStream {
            method,
            values: vec![BigUint::one()],
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// `C_n`, extending the memo as needed.
    pub fn get(&mut self, n: usize) -> &BigUint {
        while self.values.len() <= n {
            let m = self.values.len();
            let next = match self.method {
                Method::Binomial => catalan_binomial(m),
                Method::Convolution => (0..m).fold(BigUint::zero(), |acc, k| {
                    acc + &self.values[k] * &self.values[m - 1 - k]
                }),
                Method::Ratio => &self.values[m - 1] * (2 * (2 * m - 1)) / (m + 1),
            };
            self.values.push(next);
        }
        &self.values[n]
    }

    pub fn prefix(&mut self, up_to: usize) -> &[BigUint] {
        self.get(up_to);
        &self.values[..=up_to]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: [u64; 10] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn prime(p: u64) -> Prime {
        Prime::from_u64(p).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(catalan_binomial(0), big(1));
        assert_eq!(catalan_binomial(9), big(4862));
        // binom(20, 10) = 184756 by Pascal's triangle; 184756 / 11 = 16796.
        let mut row = vec![big(1)];
        for _ in 0..20 {
            let mut next = vec![big(1)];
            next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
            next.push(big(1));
            row = next;
        }
        assert_eq!(row[10], big(184_756));
        assert_eq!(catalan_binomial(10), &row[10] / 11u32);
        assert_eq!(catalan_binomial(10), big(16796));
    }

    #[test]
    fn convolution_examples() {
        assert_eq!(catalan_convolution(2), vec![big(1), big(1), big(2)]);
        assert_eq!(catalan_convolution(0), vec![big(1)]);
        let expected: Vec<BigUint> = TABLE.iter().map(|&c| big(c)).collect();
        assert_eq!(catalan_convolution(9), expected);
    }

    #[test]
    fn ratio_mod_p_examples() {
        let (vals, path) = catalan_ratio_mod_p(4, &prime(101));
        assert_eq!(path, GenerationPath::Ratio);
        let got: Vec<BigUint> = vals.iter().map(|r| r.value().clone()).collect();
        assert_eq!(got, [1u64, 1, 2, 5, 14].map(big).to_vec());

        let (vals, path) = catalan_ratio_mod_p(9, &prime(7));
        assert_eq!(path, GenerationPath::ExactReduce);
        let reduced: Vec<u64> = TABLE.iter().map(|c| c % 7).collect();
        assert_eq!(reduced, vec![1, 1, 2, 5, 0, 0, 6, 2, 2, 4]);
        let got: Vec<BigUint> = vals.iter().map(|r| r.value().clone()).collect();
        assert_eq!(got, reduced.into_iter().map(big).collect::<Vec<_>>());

        let (vals, _) = catalan_ratio_mod_p(0, &prime(5));
        assert_eq!(vals, vec![prime(5).one()]);
    }

    #[test]
    fn ratio_path_boundary() {
        // p = 13 > 10 + 2 takes the ratio route; p = 11 does not.
        assert_eq!(catalan_ratio_mod_p(10, &prime(13)).1, GenerationPath::Ratio);
        assert_eq!(catalan_ratio_mod_p(10, &prime(11)).1, GenerationPath::ExactReduce);
        assert_eq!(
            catalan_ratio_mod_p(10, &prime(13)).0,
            catalan_ratio(10).iter().map(|c| Residue::new(c, &prime(13))).collect::<Vec<_>>()
        );
    }

    #[test]
    fn gf_identity_examples() {
        assert!(gf_fixed_point_check(1, &prime(7)));
        assert!(gf_fixed_point_check(10, &prime(10007)));
        assert!(gf_fixed_point_check(100, &prime((1 << 61) - 1)));
        assert!(gf_fixed_point_check(30, &prime(5)));
    }

    #[test]
    fn streams_agree() {
        let mut streams = [
            CatalanStream::new(Method::Binomial),
            CatalanStream::new(Method::Convolution),
            CatalanStream::new(Method::Ratio),
        ];
        let reference = catalan_convolution(60);
        for s in streams.iter_mut() {
            assert_eq!(s.prefix(60), &reference[..]);
        }
        assert!(reference[37] > BigUint::from(u64::MAX));
        assert!(reference[36] > BigUint::from(i64::MAX as u64));
        assert!(reference[35] < BigUint::from(i64::MAX as u64));
    }
}
