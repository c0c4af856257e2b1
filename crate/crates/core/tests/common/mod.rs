//! Shared generators and property runners for the integration and acceptance tests.
#![allow(dead_code)]

use cohn_core::characters::{
    autocorrelation, compose_with_linear, gauss_sum, AdditiveIndex, FunctionTable,
};
use cohn_core::cyclotomic::{euler_phi, CycloElement};
use cohn_core::finite_field::{is_prime, make_ext_field, make_prime_field, FFElement, LinearMap};
use cohn_core::search::{
    enumerate_cohn, expected_solution_set, merge_shards, SearchConfig, SearchError, SearchReport,
    Strategy as SearchStrategy,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const PROPERTY_CASES: u32 = 1000;
/// Cap on `m` for `p = 3`, where `m^(p-2) ≤ 10^5` alone would allow `m` up to `10^5`.
pub const P3_MAX_M: u64 = 1000;
pub const EQUIVALENCE_BOUND: u128 = 100_000;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Elements given by random (unreduced) polynomials of length up to `2m`.
pub fn element(m: u64) -> impl Strategy<Value = CycloElement> {
    prop::collection::vec(rational(), 0..=(2 * m as usize).max(1))
        .prop_map(move |poly| CycloElement::from_polynomial(m, &poly))
}

pub fn units(m: u64) -> Vec<i64> {
    (1..=m.max(1) as i64)
        .filter(|t| t.gcd(&(m as i64)) == 1)
        .collect()
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    let strat = (1u64..=30).prop_flat_map(|m| (element(m), element(m), element(m)));
    runner(cases)
        .run(&strat, |(a, b, c)| {
            let m = a.modulus();
            let zero = CycloElement::zero(m);
            let one = CycloElement::one(m);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &zero, a.clone());
            prop_assert_eq!(&a * &one, a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(a.coeffs().len() as u64, euler_phi(m));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn galois_composition(cases: u32) -> Result<(), String> {
    let strat = (1u64..=40).prop_flat_map(|m| {
        let u = units(m);
        (
            element(m),
            prop::sample::select(u.clone()),
            prop::sample::select(u),
        )
    });
    runner(cases)
        .run(&strat, |(z, s, t)| {
            let m = z.modulus() as i64;
            let lhs = z.galois(t).unwrap().galois(s).unwrap();
            prop_assert_eq!(lhs, z.galois((s * t).rem_euclid(m.max(1))).unwrap());
            prop_assert_eq!(z.galois(-1).unwrap(), z.conjugate());
            let w = z.galois(s).unwrap();
            prop_assert_eq!(
                (&z * &w).galois(t).unwrap(),
                &z.galois(t).unwrap() * &w.galois(t).unwrap()
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Random `f` on `F_p` with `f(0) = 0` and root-of-unity values elsewhere.
pub fn unimodular_table(p: u64) -> impl Strategy<Value = FunctionTable> {
    (1u64..=12).prop_flat_map(move |m| {
        prop::collection::vec(0..m as u32, (p - 1) as usize).prop_map(move |exps| {
            let field = make_prime_field(p).unwrap();
            let mut e = vec![None];
            e.extend(exps.into_iter().map(Some));
            FunctionTable::new(&field, m, e).unwrap()
        })
    })
}

/// `Σ_t |G(f, ψ_t)|² = p·Σ_x |f(x)|² = p(p-1)`.
pub fn parseval(cases: u32) -> Result<(), String> {
    let strat = prop_oneof![unimodular_table(5), unimodular_table(7)];
    runner(cases)
        .run(&strat, |f| {
            let p = f.field().p();
            let level = f.m().lcm(&p);
            let mut total = CycloElement::zero(level);
            for t in 0..p {
                let g = gauss_sum(&f, AdditiveIndex::new(t as i64, p)).unwrap();
                total = &total + &(&g * &g.conjugate());
            }
            prop_assert_eq!(
                total,
                CycloElement::from_integer(level, (p * (p - 1)) as i64)
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `autocorrelation(f∘λ, h) = autocorrelation(f, λ(h))` on `F_9`.
pub fn autocorrelation_transport(cases: u32) -> Result<(), String> {
    let field = make_ext_field(3, 2).unwrap();
    let table = (1u64..=8).prop_flat_map(|m| {
        (
            Just(m),
            prop::collection::vec(prop::option::weighted(0.85, 0..m as u32), 9),
        )
    });
    // all 48 elements of GL_2(F_3)
    let invertible: Vec<Vec<Vec<u64>>> = (0..81u64)
        .map(|i| vec![vec![i % 3, i / 3 % 3], vec![i / 9 % 3, i / 27]])
        .filter(|mat| LinearMap::new(&field, mat.clone()).is_ok())
        .collect();
    assert_eq!(invertible.len(), 48);
    let strat = (table, prop::sample::select(invertible), 0u64..9);
    let f9 = field.clone();
    runner(cases)
        .run(&strat, move |((m, exps), matrix, h)| {
            let map = LinearMap::new(&f9, matrix).unwrap();
            let f = FunctionTable::new(&f9, m, exps).unwrap();
            let g = compose_with_linear(&f, &map).unwrap();
            let h = FFElement::from_index(&f9, h).unwrap();
            prop_assert_eq!(
                autocorrelation(&g, &h).unwrap(),
                autocorrelation(&f, &map.apply(&h).unwrap()).unwrap()
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// All `(p, m)` with `m^(p-2) ≤ 10^5`, with `m ≤ P3_MAX_M` at `p = 3` and
/// primes up to 31 (beyond 17 only `m = 1` qualifies).
pub fn equivalence_domain() -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in (3..=31).filter(|&p| is_prime(p)) {
        for m in 1.. {
            let space = (m as u128).pow(p as u32 - 2);
            if space > EQUIVALENCE_BOUND || (p == 3 && m > P3_MAX_M) {
                break;
            }
            out.push((p, m));
        }
    }
    out
}

pub fn strategies_agree(p: u64, m: u64, shards: u64) -> Result<(), String> {
    let run = |strategy| -> Result<SearchReport, SearchError> {
        let base = SearchConfig::new(p, m, strategy);
        if shards == 1 {
            return enumerate_cohn(&base);
        }
        let parts = (0..shards)
            .map(|i| enumerate_cohn(&base.clone().with_shard(i, shards)))
            .collect::<Result<Vec<_>, _>>()?;
        merge_shards(&parts)
    };
    let exact = run(SearchStrategy::Exhaustive).map_err(|e| e.to_string())?;
    let screened = run(SearchStrategy::Screened).map_err(|e| e.to_string())?;
    let expected = expected_solution_set(p, m).map_err(|e| e.to_string())?;
    if exact.solutions != screened.solutions
        || exact.candidates_examined != screened.candidates_examined
    {
        return Err(format!("strategies disagree at p = {p}, m = {m}"));
    }
    if exact.solutions != expected {
        return Err(format!(
            "solution set differs from characters at p = {p}, m = {m}"
        ));
    }
    Ok(())
}

pub fn strategy_equivalence(cases: u32) -> Result<(), String> {
    let domain = equivalence_domain();
    let strat = (prop::sample::select(domain), 1u64..=3);
    runner(cases)
        .run(&strat, |((p, m), shards)| {
            strategies_agree(p, m, shards).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())
}

pub fn sweep_equivalence_domain() -> Result<usize, String> {
    let domain = equivalence_domain();
    for &(p, m) in &domain {
        strategies_agree(p, m, 1)?;
    }
    Ok(domain.len())
}

/// Permutations, drops and duplicates of the four shard reports of `(7, 6)`.
pub fn shard_merge(cases: u32) -> Result<(), String> {
    let base = SearchConfig::new(7, 6, SearchStrategy::Exhaustive);
    let whole = enumerate_cohn(&base).map_err(|e| e.to_string())?;
    let shards: Vec<SearchReport> = (0..4)
        .map(|i| enumerate_cohn(&base.clone().with_shard(i, 4)).unwrap())
        .collect();
    let strat = prop_oneof![
        Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(0..4usize, 1..=6),
    ];
    runner(cases)
        .run(&strat, |picks| {
            let chosen: Vec<SearchReport> = picks.iter().map(|&i| shards[i].clone()).collect();
            let mut sorted = picks.clone();
            sorted.sort_unstable();
            let has_dup = sorted.windows(2).any(|w| w[0] == w[1]);
            sorted.dedup();
            match merge_shards(&chosen) {
                Ok(merged) => {
                    prop_assert!(!has_dup && sorted.len() == 4);
                    prop_assert!(merged.same_result(&whole));
                }
                Err(SearchError::OverlappingShard { .. }) => prop_assert!(has_dup),
                Err(SearchError::MissingShard { .. }) => prop_assert!(!has_dup && sorted.len() < 4),
                Err(e) => prop_assert!(false, "unexpected error {}", e),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
