//! Reduction of root-of-unity values to characteristic `p`, and the sum test
//! whose conclusion is `a_i = i^A`.
//!
//! Fixing `ω ∈ F_{p^d}` of order `n` fixes the reduction `ζ_n^e ↦ ω^e`; no
//! prime ideal is ever built.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::characters::{Character, CharacterError, FunctionTable};
use crate::finite_field::{
    make_field, multiplicative_order, prime_factors, FFElement, Field, FieldError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("n = {n} is not coprime to p = {p}")]
    NotCoprime { n: u64, p: u64 },
    #[error("table takes values in mu_{m}, which is not inside mu_{n}")]
    OrderMismatch { m: u64, n: u64 },
    #[error("reduction is defined for functions on the prime field F_{p}")]
    NotPrimeField { p: u64 },
    #[error("table is not normalized (f(0) = 0, f(1) = 1, f nonzero on units)")]
    NotNormalized,
    #[error("sequence violates a_0 = 0, a_1 = 1, a_i != 0: {0}")]
    BadSequence(String),
    #[error("sum condition holds but no A in [1, {max}] gives a_i = i^A")]
    TheoremViolation { max: u64 },
}

/// `ζ_n^e ↦ ω^e` into `F_{p^d}`, `d = ord_n(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    n: u64,
    p: u64,
    d: u64,
    target: Field,
    omega: FFElement,
}

impl ReductionMap {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn omega(&self) -> &FFElement {
        &self.omega
    }

    /// Image of `ζ_n^e`.
    pub fn reduce_root(&self, e: i64) -> FFElement {
        self.omega.pow(e.rem_euclid(self.n as i64) as u64)
    }
}

fn has_order(x: &FFElement, n: u64, primes: &[u64]) -> bool {
    !x.is_zero()
        && x.pow(n) == FFElement::one(x.field())
        && primes
            .iter()
            .all(|l| x.pow(n / l) != FFElement::one(x.field()))
}

/// `ω` is the element of order `n` with the smallest index, i.e. the smallest
/// coordinate vector compared from the top coefficient down.
pub fn build_reduction(n: u64, p: u64) -> Result<ReductionMap, ReductionError> {
    if n == 0 || n % p == 0 {
        return Err(ReductionError::NotCoprime { n, p });
    }
    let d = if n == 1 {
        1
    } else {
        multiplicative_order(p % n, n).ok_or(ReductionError::NotCoprime { n, p })?
    };
    let target = make_field(p, d as usize)?;
    let primes = prime_factors(n);
    let omega = (1..target.order())
        .map(|i| FFElement::from_index(&target, i).expect("index in range"))
        .find(|x| has_order(x, n, &primes))
        .expect("n divides p^d - 1");
    Ok(ReductionMap {
        n,
        p,
        d,
        target,
        omega,
    })
}

/// `a_0 = 0`, `a_1 = 1`, `a_i ≠ 0` otherwise, in some `F_{p^d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiroSequence {
    p: u64,
    values: Vec<FFElement>,
}

impl BiroSequence {
    pub fn new(p: u64, values: Vec<FFElement>) -> Result<Self, ReductionError> {
        let Some(first) = values.first() else {
            return Err(ReductionError::BadSequence("empty".into()));
        };
        let field = first.field().clone();
        if field.p() != p || values.len() as u64 != p {
            return Err(ReductionError::BadSequence(format!(
                "need {p} values in characteristic {p}"
            )));
        }
        if values.iter().any(|v| v.field() != &field) {
            return Err(ReductionError::BadSequence(
                "values lie in different fields".into(),
            ));
        }
        if !values[0].is_zero() {
            return Err(ReductionError::BadSequence("a_0 != 0".into()));
        }
        if values[1] != FFElement::one(&field) {
            return Err(ReductionError::BadSequence("a_1 != 1".into()));
        }
        if let Some(i) = values.iter().skip(1).position(FFElement::is_zero) {
            return Err(ReductionError::BadSequence(format!("a_{} = 0", i + 1)));
        }
        Ok(BiroSequence { p, values })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &Field {
        self.values[0].field()
    }

    pub fn values(&self) -> &[FFElement] {
        &self.values
    }
}

#[derive(Serialize, Deserialize)]
struct BiroSequenceJson {
    p: u64,
    d: usize,
    modulus: Option<Vec<u64>>,
    values: Vec<Vec<u64>>,
}

impl Serialize for BiroSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let field = self.field();
        BiroSequenceJson {
            p: self.p,
            d: field.k(),
            modulus: field.modulus_poly().map(<[u64]>::to_vec),
            values: self.values.iter().map(|v| v.coords().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiroSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = BiroSequenceJson::deserialize(d)?;
        let field = make_field(j.p, j.d).map_err(D::Error::custom)?;
        if field.modulus_poly().map(<[u64]>::to_vec) != j.modulus {
            return Err(D::Error::custom(
                "modulus differs from the canonical choice",
            ));
        }
        let values = j
            .values
            .into_iter()
            .map(|c| FFElement::from_coords(&field, c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        BiroSequence::new(j.p, values).map_err(D::Error::custom)
    }
}

/// `a_i = ω^(e_i·n/m)` where `f(i) = ζ_m^(e_i)`; needs `m | n`.
pub fn reduce_function(
    f: &FunctionTable,
    map: &ReductionMap,
) -> Result<BiroSequence, ReductionError> {
    let field = f.field();
    if !field.is_prime_field() || field.p() != map.p {
        return Err(ReductionError::NotPrimeField { p: map.p });
    }
    if map.n % f.m() != 0 {
        return Err(ReductionError::OrderMismatch { m: f.m(), n: map.n });
    }
    if !f.is_normalized() || f.exponents()[1..].iter().any(Option::is_none) {
        return Err(ReductionError::NotNormalized);
    }
    let scale = map.n / f.m();
    let values = f
        .exponents()
        .iter()
        .map(|e| match e {
            None => FFElement::zero(&map.target),
            Some(e) => map.reduce_root((*e as u64 * scale) as i64),
        })
        .collect();
    BiroSequence::new(map.p, values)
}

/// `Σ_{i≠0} a_{i+j}/a_i = -1` for every `j ≠ 0`; if so, the `A ∈ [1, p-2]`
/// with `a_i = i^A`.
pub fn biro_check(seq: &BiroSequence) -> Result<Option<u64>, ReductionError> {
    let p = seq.p;
    let field = seq.field();
    let a = &seq.values;
    let inverses = a[1..]
        .iter()
        .map(FFElement::inv)
        .collect::<Result<Vec<_>, _>>()?;
    let minus_one = FFElement::one(field).neg();
    for j in 1..p {
        let mut sum = FFElement::zero(field);
        for i in 1..p {
            let term = a[((i + j) % p) as usize].mul(&inverses[i as usize - 1])?;
            sum = sum.add(&term)?;
        }
        if sum != minus_one {
            return Ok(None);
        }
    }
    let integers: Vec<FFElement> = (0..p)
        .map(|i| FFElement::from_int(field, i as i64))
        .collect();
    let max = p.saturating_sub(2);
    (1..=max)
        .find(|&e| (1..p as usize).all(|i| integers[i].pow(e) == a[i]))
        .map(Some)
        .ok_or(ReductionError::TheoremViolation { max })
}

/// The exponent `B` with `reduce(χ(x)) = x^B`, computed at the generator:
/// `reduce(χ(g)) = g^B`.
pub fn character_power_exponent(chi: &Character, map: &ReductionMap) -> Option<u64> {
    let field = chi.field();
    let group = field.order() - 1;
    if !field.is_prime_field() || map.n % chi.order() != 0 {
        return None;
    }
    // χ(g) = ζ_{p-1}^A = ζ_n^(A·n/(p-1)) once ζ_{p-1}^A lies in μ_n
    let scaled = chi.exponent() as u128 * map.n as u128;
    if scaled % group as u128 != 0 {
        return None;
    }
    let image = map.reduce_root((scaled / group as u128) as i64);
    let g = FFElement::from_int(&map.target, field.generator_coords()[0] as i64);
    (0..group).find(|&b| g.pow(b) == image)
}
