use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use polyseries::catalan::{catalan_binomial, catalan_convolution, catalan_ratio, catalan_ratio_mod_p};
use polyseries::seq::permutad;
use polyseries::solver::series_root;
use polyseries::{Half, Polyseries, Prime, QuadraticProblem, Residue, TruncSeries};

const MERSENNE_61: u64 = (1 << 61) - 1;

fn prime(p: u64) -> Prime {
    Prime::from_u64(p).unwrap()
}

fn series(p: &Prime, coeffs: &[u64]) -> TruncSeries {
    let ints: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    TruncSeries::from_integers(p, &ints, coeffs.len()).unwrap()
}

fn arb_series(p: u64, n: usize) -> impl Strategy<Value = TruncSeries> {
    proptest::collection::vec(0..p, n).prop_map(move |c| series(&prime(p), &c))
}

fn arb_shape() -> impl Strategy<Value = (u64, usize)> {
    (
        prop::sample::select(vec![7u64, 101, 10007]),
        prop::sample::select(vec![2usize, 5, 16]),
    )
}

fn counts(terms: &[u64]) -> HashMap<u64, usize> {
    let mut m = HashMap::new();
    for &t in terms {
        *m.entry(t).or_insert(0) += 1;
    }
    m
}

// ----- sequences -----

proptest! {
    #[test]
    fn permutad_matches_counting_oracle(
        a in proptest::collection::vec(0u64..100, 0..=12),
        b in proptest::collection::vec(0u64..100, 0..=12),
    ) {
        let expected = a.len() == b.len() && counts(&a) == counts(&b);
        let got = permutad(&Polyseries::from_u64s(&a), &Polyseries::from_u64s(&b)).unwrap();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn permutad_is_an_equivalence(
        (a, b) in proptest::collection::vec(0u64..4, 6)
            .prop_flat_map(|a| (Just(a.clone()), Just(a).prop_shuffle())),
        c in proptest::collection::vec(0u64..4, 6),
    ) {
        let (sa, sb, sc) = (
            Polyseries::from_u64s(&a),
            Polyseries::from_u64s(&b),
            Polyseries::from_u64s(&c),
        );
        prop_assert!(permutad(&sa, &sa).unwrap());
        prop_assert_eq!(permutad(&sa, &sb).unwrap(), permutad(&sb, &sa).unwrap());
        prop_assert!(permutad(&sa, &sb).unwrap());
        if permutad(&sb, &sc).unwrap() {
            prop_assert!(permutad(&sa, &sc).unwrap());
        }
    }

    #[test]
    fn tailmin_is_non_decreasing(terms in proptest::collection::vec(0u64..100, 2..=12)) {
        let s = Polyseries::from_u64s(&terms);
        for n in 1..terms.len() {
            prop_assert!(s.tailmin(n).unwrap() <= s.tailmin(n + 1).unwrap());
        }
    }

    #[test]
    fn truncation_composes(terms in proptest::collection::vec(0u64..100, 0..=12), j in 0usize..=12, k in 0usize..=12) {
        let s = Polyseries::from_u64s(&terms);
        let j = j.min(terms.len());
        let k = k.min(j);
        let twice = s.truncation(j).unwrap().truncation(k).unwrap();
        prop_assert_eq!(twice.terms().unwrap(), s.truncation(k).unwrap().terms().unwrap());
    }

    #[test]
    fn sorted_is_strict_iff_distinct(terms in proptest::collection::vec(0u64..20, 0..=12)) {
        let sorted = Polyseries::from_u64s(&terms).sorted().unwrap().terms().unwrap();
        prop_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        let distinct = counts(&terms).len() == terms.len();
        prop_assert_eq!(Polyseries::from_terms(sorted).is_sorted().unwrap(), distinct);
    }
}

// ----- prime field -----

#[test]
fn balanced_values_agree_up_to_sign() {
    for p in [3u64, 5, 7, 11, 13, 31, 97, 101] {
        let pr = prime(p);
        for a in 0..p {
            let ra = pr.residue(a);
            for b in 0..p {
                let rb = pr.residue(b);
                let same = ra.balanced_value() == rb.balanced_value();
                assert_eq!(same, a == b || (a + b) % p == 0, "p={p} a={a} b={b}");
            }
        }
    }
}

#[test]
fn halves_partition_the_units() {
    for p in (3u64..=101).filter(|&p| polyseries::field::is_prime_u64(p)) {
        let pr = prime(p);
        let classes: Vec<Half> = (1..p).map(|a| pr.residue(a).classify()).collect();
        let pos = classes.iter().filter(|&&h| h == Half::Positive).count();
        let neg = classes.iter().filter(|&&h| h == Half::Negative).count();
        assert_eq!((pos, neg), ((p as usize - 1) / 2, (p as usize - 1) / 2));
        assert_eq!(pr.zero().classify(), Half::Zero);
    }
}

#[test]
fn inverse_is_an_involution() {
    for p in (3u64..=101).filter(|&p| polyseries::field::is_prime_u64(p)) {
        let pr = prime(p);
        for a in 1..p {
            let x = pr.residue(a);
            let inv = x.inverse().unwrap();
            assert!((&x * &inv).value().is_one());
            assert_eq!(inv.inverse().unwrap(), x);
        }
    }
}

fn field_axioms(p: u64, a: u64, b: u64, c: u64) -> Result<(), TestCaseError> {
    let pr = prime(p);
    let (x, y, z) = (pr.residue(a), pr.residue(b), pr.residue(c));
    prop_assert_eq!(&x + &y, &y + &x);
    prop_assert_eq!(&x * &y, &y * &x);
    prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
    prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    prop_assert!((&x + &(-&x)).is_zero());
    Ok(())
}

#[test]
fn field_axioms_hold() {
    use proptest::test_runner::{Config, TestRunner};
    for p in [5u64, 7, 101, 10007, MERSENNE_61] {
        let mut runner = TestRunner::new(Config::with_cases(10_000));
        runner
            .run(&(0..p, 0..p, 0..p), |(a, b, c)| field_axioms(p, a, b, c))
            .unwrap();
    }
}

// ----- truncated series ring -----

proptest! {
    #[test]
    fn series_ring_axioms(
        (p, n) in arb_shape(),
        seed in proptest::collection::vec(any::<u64>(), 48),
    ) {
        let pr = prime(p);
        let pick = |i: usize| series(&pr, &seed[i * 16..i * 16 + n].iter().map(|c| c % p).collect::<Vec<_>>());
        let (x, y, z) = (pick(0), pick(1), pick(2));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
    }

    #[test]
    fn scale_composes(x in arb_series(101, 8), c in 0u64..101, d in 0u64..101) {
        let pr = prime(101);
        let (c, d) = (pr.residue(c), pr.residue(d));
        let twice = x.scale(&c).unwrap().scale(&d).unwrap();
        prop_assert_eq!(twice, x.scale(&(&c * &d)).unwrap());
    }

    #[test]
    fn eval_at_p_factors_through_integer_product(x in arb_series(5, 4), y in arb_series(5, 4)) {
        // The product in Z[t], truncated, read at t = 5 modulo 5^4.
        let m = BigUint::from(625u32);
        let mut z = vec![BigUint::zero(); 4];
        for i in 0..4 {
            for j in 0..4 - i {
                z[i + j] += x.coeffs()[i].clone() * &y.coeffs()[j];
            }
        }
        let lhs = z.iter().rev().fold(BigUint::zero(), |acc, c| acc * 5u32 + c) % &m;
        let rhs = (x.eval_at_p().value() * y.eval_at_p().value()) % &m;
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn eval_at_p_does_not_see_reductions_mod_p() {
    // 4t * 4t = 16t^2 = t^2 in F_5, but 20 * 20 = 400 = 3*5^3 + 1*5^2 in Z/625.
    let pr = prime(5);
    let x = series(&pr, &[0, 4, 0, 0]);
    let product = (&x * &x).eval_at_p();
    let expected = (x.eval_at_p().value() * x.eval_at_p().value()) % 625u32;
    assert_eq!(product.value(), &BigUint::from(25u32));
    assert_eq!(expected, BigUint::from(400u32));
}

#[test]
fn t_is_nilpotent() {
    let pr = prime(7);
    for n in [2usize, 5, 16] {
        for a in 0..n + 2 {
            for b in 0..n + 2 {
                let product = &TruncSeries::monomial(&pr, n, a).unwrap() * &TruncSeries::monomial(&pr, n, b).unwrap();
                assert_eq!(product, TruncSeries::monomial(&pr, n, a + b).unwrap());
                assert_eq!(product.is_zero(), a + b >= n);
            }
        }
    }
}

// ----- roots -----

proptest! {
    #[test]
    fn root_coefficients_scale_with_a(
        p in prop::sample::select(vec![7u64, 101, 10007]),
        n in 2usize..24,
        a in 1u64..10007,
    ) {
        let pr = prime(p);
        prop_assume!(a % p != 0);
        let a = pr.residue(a);
        let one = QuadraticProblem::new(&pr, n, pr.one()).unwrap();
        let general = QuadraticProblem::new(&pr, n, a.clone()).unwrap();
        let (base, _) = series_root(&one);
        let (root, _) = series_root(&general);
        let inv = a.inverse().unwrap();
        for k in 0..n {
            // a^{1-2k} = a * (a^{-1})^{2k}
            let factor = &a * &inv.pow_u64(2 * k as u64);
            prop_assert_eq!(root.coeff(k), &base.coeff(k) * &factor);
        }
        // The same identity phrased through the ring: a * base(t / a^2).
        let conj = base.scale(&(&inv * &inv)).unwrap().scalar_mul(&a).unwrap();
        prop_assert_eq!(root, conj);
    }
}

// ----- Catalan numbers -----

#[test]
fn catalan_routes_agree_and_divide_exactly() {
    let conv = catalan_convolution(500);
    let ratio = catalan_ratio(500);
    assert_eq!(conv, ratio);
    for n in 0..=500usize {
        let central = polyseries::catalan::binomial(2 * n, n);
        assert!(central.is_multiple_of(&BigUint::from(n + 1)), "n={n}");
        assert_eq!(catalan_binomial(n), conv[n]);
        if n < 500 {
            assert_eq!(
                &ratio[n + 1] * BigUint::from(n + 2),
                &ratio[n] * BigUint::from(2 * (2 * n + 1))
            );
        }
    }
    for p in [10007u64, MERSENNE_61] {
        let pr = prime(p);
        let (reduced, _) = catalan_ratio_mod_p(500, &pr);
        let expect: Vec<Residue> = conv.iter().map(|c| Residue::new(c, &pr)).collect();
        assert_eq!(reduced, expect);
    }
}
