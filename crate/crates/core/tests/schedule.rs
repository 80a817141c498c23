use mrpoly::multires::level_schedule;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `N·rho^(r+1) < K <= N·rho^r`, evaluated on exact rationals.
fn sandwich_holds(n: usize, k: usize, rho: f64, r: usize) -> bool {
    let rho = exact(rho);
    let mut upper = int(n);
    for _ in 0..r {
        upper *= &rho;
    }
    let lower = &upper * &rho;
    lower < int(k) && int(k) <= upper
}

#[test]
fn sandwich_over_ten_thousand_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=100_000);
        let k = rng.gen_range(1..n);
        let rho: f64 = match rng.gen_range(0..3) {
            0 => [0.125, 0.25, 0.5, 0.75, 0.875][rng.gen_range(0..5)],
            1 => rng.gen_range(0.01..0.99),
            _ => rng.gen_range(1..16) as f64 / 16.0,
        };
        let s = level_schedule(n, k, rho).unwrap();
        assert!(
            sandwich_holds(n, k, rho, s.r()),
            "N={n} K={k} rho={rho} r={}",
            s.r()
        );
        let levels = s.levels();
        assert_eq!(levels[0], n);
        assert_eq!(*levels.last().unwrap(), k);
        assert!(levels.windows(2).all(|w| w[0] > w[1]));
    }
}

#[test]
fn boundary_cases_are_exact() {
    // K equal to N·rho^r exactly: r must be the larger exponent.
    let s = level_schedule(4096, 16, 0.5).unwrap();
    assert_eq!(s.r(), 8);
    let s = level_schedule(4096, 17, 0.5).unwrap();
    assert_eq!(s.r(), 7);
    // 0.1 is not dyadic; the comparison uses its exact binary value.
    let s = level_schedule(1000, 1, 0.1).unwrap();
    assert!(sandwich_holds(1000, 1, 0.1, s.r()));
}

proptest! {
    #[test]
    fn levels_follow_rounded_powers(n in 64usize..20_000, k in 1usize..64, num in 1u32..8) {
        let rho = num as f64 / 8.0;
        let s = level_schedule(n, k, rho).unwrap();
        let rho_q = exact(rho);
        let mut scaled = int(n);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for (j, &kj) in s.levels().iter().enumerate().skip(1) {
            if j > s.r() {
                prop_assert_eq!(kj, k);
                break;
            }
            scaled *= &rho_q;
            let rounded = (&scaled + &half).floor().to_integer();
            let prev = s.levels()[j - 1];
            let expected = rounded.min(BigInt::from(prev - 1)).max(BigInt::from(k));
            prop_assert_eq!(BigInt::from(kj), expected);
            if kj == k {
                prop_assert_eq!(j, s.levels().len() - 1);
                break;
            }
        }
    }
}
