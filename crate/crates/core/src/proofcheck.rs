//! Instance-level checks of the argument that a Cohn function on `F_p` with
//! root-of-unity values is a multiplicative character.
//!
//! Write `m = n·p^k` with `gcd(n, p) = 1`, `l = max(1, k)` and `M = n·p^l`
//! (the level of every Gauss sum here). `σ_t` is the automorphism of
//! `Q(ζ_M)` with `ζ_{p^l} ↦ ζ_{p^l}^t` and `ζ_n ↦ ζ_n`, where `t` is the
//! smallest generator of `(Z/p^l)^×`. `σ_t` generates `Gal(Q(ζ_M)/Q(ζ_n))`,
//! so an element lies in `K = Q(ζ_n)` exactly when `σ_t` fixes it; that
//! fixedness test replaces any ideal-theoretic reasoning.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::characters::{
    autocorrelation, character_table, gauss_sum, is_cohn, is_multiplicative, spectrum_check,
    AdditiveIndex, CharacterError, CohnVerdict, FunctionTable,
};
use crate::cyclotomic::{CycloElement, CycloError};
use crate::finite_field::{mod_inverse, smallest_primitive_root, FFElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("proof checks are defined only over prime fields")]
    NotPrimeField,
    #[error("function is not Cohn: {0}")]
    NotCohn(String),
    #[error("step requires gcd(m, p) = 1, but p = {p} divides m = {m}")]
    CoprimeRequired { m: u64, p: u64 },
    #[error("step requires p | m, but p = {p} does not divide m = {m}")]
    PrimeDivisorRequired { m: u64, p: u64 },
    #[error("G(f, psi) * conj(G(f, psi)) = {value}, not p")]
    GaussNorm { value: CycloElement },
    #[error("sigma_t(G)/G = {value} is not of the form zeta_(p^l)^a * zeta_n^b")]
    RecognitionFailure { value: CycloElement },
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficients must lie in Q(zeta_n) with gcd(n, p) = 1")]
    BadCoefficientField,
    #[error("stage `{stage}` failed: {detail}")]
    StageFailed {
        stage: String,
        detail: String,
        value: Option<CycloElement>,
    },
}

impl ProofError {
    /// Failures that would contradict the theorem rather than reject an input.
    pub fn is_theorem_violation(&self) -> bool {
        matches!(
            self,
            ProofError::GaussNorm { .. }
                | ProofError::RecognitionFailure { .. }
                | ProofError::StageFailed { .. }
        )
    }
}

/// `m = n·p^k` with `gcd(n, p) = 1`.
pub fn factor_m(m: u64, p: u64) -> (u64, u32) {
    assert!(m > 0 && p > 1);
    let mut n = m;
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (n, k)
}

/// The Galois setup for `(m, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisSetup {
    pub p: u64,
    pub n: u64,
    pub k: u32,
    pub l: u32,
    /// `p^l`.
    pub prime_power: u64,
    /// `M = n·p^l`.
    pub level: u64,
    /// Smallest generator of `(Z/p^l)^×`.
    pub t: u64,
    /// The exponent `T mod M` with `T ≡ t (mod p^l)`, `T ≡ 1 (mod n)`.
    pub sigma: u64,
}

impl GaloisSetup {
    pub fn new(m: u64, p: u64) -> Self {
        let (n, k) = factor_m(m, p);
        let l = k.max(1);
        let prime_power = p.pow(l);
        let level = n * prime_power;
        let t = smallest_primitive_root(prime_power).expect("p^l has primitive roots for odd p");
        let sigma = (0..n)
            .map(|j| t + j * prime_power)
            .find(|s| s % n == 1 % n)
            .expect("CRT lift exists");
        GaloisSetup {
            p,
            n,
            k,
            l,
            prime_power,
            level,
            t,
            sigma,
        }
    }

    pub fn apply(&self, z: &CycloElement) -> Result<CycloElement, CycloError> {
        z.galois(self.sigma as i64)
    }

    /// `ζ_{p^l}^a · ζ_n^b` at level `M`.
    pub fn root(&self, a: u64, b: u64) -> CycloElement {
        CycloElement::root_of_unity(self.level, (a * self.n + b * self.prime_power) as i64)
    }
}

/// `σ_t(G) = ζ_{p^l}^a · ζ_n^b · G` for `G = G(f, ψ_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationWitness {
    pub setup: GaloisSetup,
    pub a: u64,
    pub b: u64,
    pub gauss_sum: CycloElement,
    /// `u = σ_t(G) / G`.
    pub unit: CycloElement,
}

impl TransformationWitness {
    /// Recomputes both sides of the transformation rule exactly.
    pub fn verify(&self) -> bool {
        match self.setup.apply(&self.gauss_sum) {
            Ok(lhs) => lhs == &self.setup.root(self.a, self.b) * &self.gauss_sum,
            Err(_) => false,
        }
    }
}

fn require_prime_field(f: &FunctionTable) -> Result<(), ProofError> {
    if f.field().is_prime_field() {
        Ok(())
    } else {
        Err(ProofError::NotPrimeField)
    }
}

fn require_cohn(f: &FunctionTable) -> Result<(), ProofError> {
    require_prime_field(f)?;
    match is_cohn(f) {
        CohnVerdict::Holds => Ok(()),
        other => Err(ProofError::NotCohn(format!("{other:?}"))),
    }
}

/// Finds `(a, b)` with `σ_t(G) = ζ_{p^l}^a ζ_n^b G`.
///
/// The unit `σ_t(G)/G` is computed as `σ_t(G)·conj(G)/p`, which needs
/// `G·conj(G) = p`; that identity is checked first.
pub fn find_transformation(f: &FunctionTable) -> Result<TransformationWitness, ProofError> {
    require_cohn(f)?;
    let p = f.field().p();
    let setup = GaloisSetup::new(f.m(), p);
    let g = gauss_sum(f, AdditiveIndex::new(1, p))?;
    debug_assert_eq!(g.modulus(), setup.level);
    let norm = &g * &g.conjugate();
    if norm != CycloElement::from_integer(setup.level, p as i64) {
        return Err(ProofError::GaussNorm { value: norm });
    }
    let image = setup.apply(&g)?;
    let unit = (&image * &g.conjugate()).scale(&BigRational::new(BigInt::from(1), BigInt::from(p)));
    let root = unit
        .recognize_root_of_unity()
        .ok_or_else(|| ProofError::RecognitionFailure {
            value: unit.clone(),
        })?;
    if setup.level % root.modulus() != 0 {
        return Err(ProofError::RecognitionFailure { value: unit });
    }
    let e = root.exponent() * (setup.level / root.modulus());
    // e ≡ a·n (mod p^l) and e ≡ b·p^l (mod n)
    let a = e % setup.prime_power * mod_inverse(setup.n as i64, setup.prime_power).unwrap()
        % setup.prime_power;
    let b = e % setup.n * mod_inverse(setup.prime_power as i64, setup.n).unwrap() % setup.n.max(1);
    let witness = TransformationWitness {
        setup,
        a,
        b,
        gauss_sum: g,
        unit: unit.clone(),
    };
    if !witness.verify() {
        return Err(ProofError::RecognitionFailure { value: unit });
    }
    Ok(witness)
}

fn require_coprime(f: &FunctionTable) -> Result<(), ProofError> {
    let p = f.field().p();
    if f.m() % p == 0 {
        Err(ProofError::CoprimeRequired { m: f.m(), p })
    } else {
        Ok(())
    }
}

fn require_divisible(f: &FunctionTable) -> Result<(), ProofError> {
    let p = f.field().p();
    if f.m() % p != 0 {
        Err(ProofError::PrimeDivisorRequired { m: f.m(), p })
    } else {
        Ok(())
    }
}

/// For `gcd(m, p) = 1`: the transformation exponent `a` vanishes mod `p`.
pub fn check_a_vanishes(f: &FunctionTable) -> Result<bool, ProofError> {
    require_prime_field(f)?;
    require_coprime(f)?;
    let w = find_transformation(f)?;
    Ok(w.a % f.field().p() == 0)
}

/// `f(t^(-1)·x) = f(x)·ζ_n^b` for all `x ≠ 0`, and `ζ_n^b` has order dividing `p - 1`.
pub fn check_character_relation(
    f: &FunctionTable,
    witness: &TransformationWitness,
) -> Result<bool, ProofError> {
    require_prime_field(f)?;
    require_coprime(f)?;
    let p = f.field().p();
    let m = f.m();
    let n = witness.setup.n;
    let t_inv = mod_inverse(witness.setup.t as i64, p).expect("t is a unit mod p");
    let shift = witness.b * (m / n) % m;
    for x in 1..p {
        let (Some(lhs), Some(rhs)) = (f.at(t_inv * x % p), f.at(x)) else {
            return Ok(false);
        };
        if lhs as u64 != (rhs as u64 + shift) % m {
            return Ok(false);
        }
    }
    let order = n / n.gcd(&witness.b);
    Ok((p - 1) % order == 0)
}

/// `Σ_i a_i ζ_{p^k}^i` at level `n·p^k`, for `a_i ∈ Q(ζ_n)`.
pub fn zeta_pk_sum(a_list: &[CycloElement], p: u64, k: u32) -> Result<CycloElement, ProofError> {
    let n = coefficient_modulus(a_list, p)?;
    let pk = p.pow(k);
    let level = n * pk;
    let mut acc = CycloElement::zero(level);
    for (i, a) in a_list.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let term = &a.embed(level)? * &CycloElement::root_of_unity(level, (i as u64 * n) as i64);
        acc = &acc + &term;
    }
    Ok(acc)
}

fn coefficient_modulus(a_list: &[CycloElement], p: u64) -> Result<u64, ProofError> {
    let n = a_list.first().map(CycloElement::modulus).unwrap_or(1);
    if n % p == 0 {
        return Err(ProofError::BadCoefficientField);
    }
    if let Some(bad) = a_list.iter().find(|a| a.modulus() != n) {
        return Err(CycloError::ModulusMismatch {
            left: n,
            right: bad.modulus(),
        }
        .into());
    }
    Ok(n)
}

/// When `Σ a_i ζ_{p^k}^i ∈ K(ζ_p)`, returns `(a_{p^(k-1)·j})_{j<p}`, whose
/// `ζ_p`-sum is the same element.
///
/// Membership follows the relation test: `a_i = a_{(p-1)p^(k-1)+(i mod p^(k-1))}`
/// for every `i < (p-1)p^(k-1)` not divisible by `p^(k-1)`.
pub fn zp_coefficient_collapse(
    a_list: &[CycloElement],
    p: u64,
    k: u32,
) -> Result<Option<Vec<CycloElement>>, ProofError> {
    if k == 0 {
        return Err(ProofError::PrimeDivisorRequired { m: 1, p });
    }
    let pk = p.pow(k) as usize;
    if a_list.len() != pk {
        return Err(ProofError::LengthMismatch {
            expected: pk,
            got: a_list.len(),
        });
    }
    coefficient_modulus(a_list, p)?;
    let step = pk / p as usize;
    let top = (p as usize - 1) * step;
    for i in (0..top).filter(|i| i % step != 0) {
        if a_list[i] != a_list[top + i % step] {
            return Ok(None);
        }
    }
    Ok(Some(
        (0..p as usize).map(|j| a_list[step * j].clone()).collect(),
    ))
}

/// `true` when no `ζ_{p^k}^s · z`, `0 ≤ s < p^k`, is fixed by `σ_t`.
pub fn no_s_in_k_scan(z: &CycloElement, setup: &GaloisSetup) -> Result<bool, ProofError> {
    let z = z.embed(setup.level)?;
    for s in 0..setup.prime_power {
        let w = &CycloElement::root_of_unity(setup.level, (s * setup.n) as i64) * &z;
        if setup.apply(&w)? == w {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `p | m`: no `ζ_{p^k}^s · G(f, ψ)` lies in `K`.
pub fn check_no_s_in_k(f: &FunctionTable) -> Result<bool, ProofError> {
    require_prime_field(f)?;
    require_divisible(f)?;
    require_cohn(f)?;
    let p = f.field().p();
    let setup = GaloisSetup::new(f.m(), p);
    let g = gauss_sum(f, AdditiveIndex::new(1, p))?;
    no_s_in_k_scan(&g, &setup)
}

/// `f = f1·f2` with `f1` in `μ_{p^k}` and `f2` in `μ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTable {
    pub f1: FunctionTable,
    pub f2: FunctionTable,
}

impl SplitTable {
    /// Recombines `f1·f2` in `μ_m`.
    pub fn product(&self) -> Result<FunctionTable, CharacterError> {
        let pk = self.f1.m();
        let n = self.f2.m();
        let m = pk * n;
        let exponents = self
            .f1
            .exponents()
            .iter()
            .zip(self.f2.exponents())
            .map(|(e1, e2)| match (e1, e2) {
                (Some(e1), Some(e2)) => Some(((*e1 as u64 * n + *e2 as u64 * pk) % m) as u32),
                _ => None,
            })
            .collect();
        FunctionTable::new(self.f1.field(), m, exponents)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub split: SplitTable,
    pub f1_constant: bool,
    /// Shifts `r ≠ 0` for which `{f1(x)·ζ_p^(r·x)}` has fewer than `p-1` distinct values.
    pub collapsing_shifts: Vec<u64>,
}

impl SplitReport {
    pub fn holds(&self) -> bool {
        self.f1_constant && self.collapsing_shifts.is_empty()
    }
}

/// CRT split of the exponents, `μ_m ≅ μ_n × μ_{p^k}`.
pub fn split_exponents(f: &FunctionTable) -> Result<SplitTable, ProofError> {
    require_prime_field(f)?;
    require_divisible(f)?;
    let p = f.field().p();
    let m = f.m();
    let (n, k) = factor_m(m, p);
    let pk = p.pow(k);
    let n_inv = mod_inverse(n as i64, pk).unwrap();
    let pk_inv = mod_inverse(pk as i64, n).unwrap();
    let part = |modulus: u64, inv: u64| {
        f.exponents()
            .iter()
            .map(|e| e.map(|e| ((e as u64 % modulus) * inv % modulus) as u32))
            .collect::<Vec<_>>()
    };
    let f1 = FunctionTable::new(f.field(), pk, part(pk, n_inv))?;
    let f2 = FunctionTable::new(f.field(), n, part(n, pk_inv))?;
    Ok(SplitTable { f1, f2 })
}

/// Splits `f` and checks that `f1 ≡ 1`, and that `f1(x)·ψ_r(x)` runs over
/// `p - 1` distinct values for each `r ≠ 0`.
pub fn split_and_check_f1_constant(f: &FunctionTable) -> Result<SplitReport, ProofError> {
    let split = split_exponents(f)?;
    debug_assert_eq!(split.product().ok().as_ref(), Some(f));
    let p = f.field().p();
    let pk = split.f1.m();
    let step = pk / p;
    let f1_constant = (1..p).all(|x| split.f1.at(x) == Some(0));
    let mut collapsing_shifts = Vec::new();
    for r in 1..p {
        let mut seen: Vec<u64> = (1..p)
            .filter_map(|x| split.f1.at(x).map(|e| (e as u64 + r * x % p * step) % pk))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() as u64 != p - 1 {
            collapsing_shifts.push(r);
        }
    }
    Ok(SplitReport {
        split,
        f1_constant,
        collapsing_shifts,
    })
}

/// For `f1` with values in `μ_p ⊂ μ_{p^k}` and `f1(x1) ≠ f1(x2)`, the shift
/// `r ≡ -(y2 - y1)(x2 - x1)^(-1) (mod p)` where `f1(x_i) = ζ_p^(y_i)`; it makes
/// `f1(x1)ψ_r(x1) = f1(x2)ψ_r(x2)`.
pub fn collapsing_shift(f1: &FunctionTable, x1: u64, x2: u64) -> Option<u64> {
    let p = f1.field().p();
    let step = f1.m() / p;
    let (e1, e2) = (f1.at(x1)? as u64, f1.at(x2)? as u64);
    if e1 == e2 || e1 % step != 0 || e2 % step != 0 || x1 % p == x2 % p {
        return None;
    }
    let (y1, y2) = ((e1 / step) as i64, (e2 / step) as i64);
    let inv = mod_inverse(x2 as i64 - x1 as i64, p)? as i64;
    Some((-(y2 - y1) * inv).rem_euclid(p as i64) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: CycloElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStage {
    pub stage: String,
    pub inputs: serde_json::Value,
    pub values: Vec<NamedValue>,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub function: FunctionTable,
    pub stages: Vec<TraceStage>,
    /// `f = χ_A` for this `A`.
    pub terminal_a: u64,
}

struct Tracer {
    stages: Vec<TraceStage>,
}

impl Tracer {
    fn push(
        &mut self,
        stage: &str,
        inputs: serde_json::Value,
        values: Vec<(&str, CycloElement)>,
        verdict: bool,
    ) -> Result<(), ProofError> {
        let values: Vec<NamedValue> = values
            .into_iter()
            .map(|(name, value)| NamedValue {
                name: name.to_string(),
                value,
            })
            .collect();
        let offending = values.last().map(|v| v.value.clone());
        self.stages.push(TraceStage {
            stage: stage.to_string(),
            inputs: inputs.clone(),
            values,
            verdict,
        });
        if verdict {
            Ok(())
        } else {
            Err(ProofError::StageFailed {
                stage: stage.to_string(),
                detail: inputs.to_string(),
                value: offending,
            })
        }
    }
}

/// Runs the whole argument on one Cohn function and names the character it equals.
pub fn full_trace(f: &FunctionTable) -> Result<TraceReport, ProofError> {
    require_cohn(f)?;
    let p = f.field().p();
    let m = f.m();
    let mut tr = Tracer { stages: Vec::new() };
    let h1 = autocorrelation(f, &FFElement::one(f.field()))?;
    tr.push(
        "cohn",
        json!({ "p": p, "m": m }),
        vec![("autocorrelation_h1", h1)],
        true,
    )?;

    let g0 = gauss_sum(f, AdditiveIndex::new(0, p))?;
    let g1 = gauss_sum(f, AdditiveIndex::new(1, p))?;
    let norm = &g1 * &g1.conjugate();
    let spectrum = spectrum_check(f)?;
    tr.push(
        "spectrum",
        json!({ "t_range": [0, p - 1] }),
        vec![
            ("gauss_sum_t0", g0),
            ("gauss_sum_t1", g1),
            ("norm_t1", norm),
        ],
        spectrum,
    )?;

    let (n, k) = factor_m(m, p);
    tr.push(
        "factor_m",
        json!({ "m": m, "p": p, "n": n, "k": k }),
        vec![],
        true,
    )?;

    let a = if k == 0 {
        trace_coprime(f, &mut tr, "")?
    } else {
        let w = find_transformation(f)?;
        tr.push(
            "transformation",
            json!({ "t": w.setup.t, "sigma": w.setup.sigma, "level": w.setup.level, "a": w.a, "b": w.b }),
            vec![("gauss_sum", w.gauss_sum.clone()), ("unit", w.unit.clone())],
            w.verify(),
        )?;
        let no_s = check_no_s_in_k(f)?;
        tr.push(
            "no_s_in_k",
            json!({ "s_range": [0, w.setup.prime_power - 1] }),
            vec![],
            no_s,
        )?;
        let split = split_and_check_f1_constant(f)?;
        tr.push(
            "split",
            json!({
                "f1": split.split.f1,
                "f2": split.split.f2,
                "f1_constant": split.f1_constant,
                "collapsing_shifts": split.collapsing_shifts,
            }),
            vec![],
            split.holds(),
        )?;
        trace_coprime(&split.split.f2, &mut tr, "residual/")?
    };

    let chi = crate::characters::Character::new(f.field(), a)?;
    let reproduced = character_table(&chi, m)? == *f;
    tr.push(
        "identification",
        json!({ "A": a, "m": m }),
        vec![],
        reproduced,
    )?;
    Ok(TraceReport {
        function: f.clone(),
        stages: tr.stages,
        terminal_a: a,
    })
}

fn trace_coprime(f: &FunctionTable, tr: &mut Tracer, prefix: &str) -> Result<u64, ProofError> {
    let p = f.field().p();
    let name = |s: &str| format!("{prefix}{s}");
    let w = find_transformation(f)?;
    tr.push(
        &name("transformation"),
        json!({ "m": f.m(), "t": w.setup.t, "sigma": w.setup.sigma, "level": w.setup.level, "a": w.a, "b": w.b }),
        vec![("gauss_sum", w.gauss_sum.clone()), ("unit", w.unit.clone())],
        w.verify(),
    )?;
    tr.push(
        &name("a_vanishes"),
        json!({ "a": w.a, "p": p }),
        vec![],
        w.a % p == 0,
    )?;
    let rel = check_character_relation(f, &w)?;
    tr.push(
        &name("character_relation"),
        json!({ "t_inverse": mod_inverse(w.setup.t as i64, p), "b": w.b, "n": w.setup.n }),
        vec![(
            "zeta_n_b",
            CycloElement::root_of_unity(w.setup.n, w.b as i64),
        )],
        rel,
    )?;
    let chi = is_multiplicative(f);
    let a = chi.as_ref().map(|c| c.exponent());
    tr.push(
        &name("multiplicative"),
        json!({ "A": a }),
        vec![],
        chi.is_some(),
    )?;
    Ok(a.expect("verdict checked"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::Character;
    use crate::finite_field::make_prime_field;
    use crate::search::expected_solution_set;

    fn chi_table(p: u64, a: u64, m: u64) -> FunctionTable {
        let f = make_prime_field(p).unwrap();
        character_table(&Character::new(&f, a).unwrap(), m).unwrap()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_m(6, 3), (2, 1));
        assert_eq!(factor_m(4, 5), (4, 0));
        assert_eq!(factor_m(18, 3), (2, 2));
    }

    #[test]
    fn setup_lifts() {
        let s = GaloisSetup::new(4, 5);
        assert_eq!((s.n, s.l, s.t, s.level, s.sigma), (4, 1, 2, 20, 17));
        let s = GaloisSetup::new(18, 3);
        assert_eq!((s.n, s.k, s.prime_power, s.t), (2, 2, 9, 2));
        assert_eq!(s.sigma % 9, 2);
        assert_eq!(s.sigma % 2, 1);
    }

    #[test]
    fn transformation_examples() {
        let w = find_transformation(&chi_table(5, 2, 4)).unwrap();
        assert_eq!((w.setup.t, w.a, w.b), (2, 0, 2));
        assert_eq!(w.unit, CycloElement::from_integer(20, -1));

        let w = find_transformation(&chi_table(7, 1, 6)).unwrap();
        assert_eq!((w.setup.t, w.a, w.b), (3, 0, 5));

        let f = &expected_solution_set(3, 6).unwrap()[0];
        let w = find_transformation(f).unwrap();
        assert!(w.verify());
        assert_eq!(
            w.setup.apply(&w.gauss_sum).unwrap(),
            &w.setup.root(w.a, w.b) * &w.gauss_sum
        );
    }

    #[test]
    fn a_vanishes_and_relation() {
        for (p, m) in [(5, 4), (7, 6)] {
            for f in expected_solution_set(p, m).unwrap() {
                assert!(check_a_vanishes(&f).unwrap());
                let w = find_transformation(&f).unwrap();
                assert!(check_character_relation(&f, &w).unwrap());
            }
        }
        let f3 = make_prime_field(3).unwrap();
        let bad = FunctionTable::from_tail(&f3, 6, &[1]).unwrap();
        assert!(matches!(
            check_a_vanishes(&bad),
            Err(ProofError::CoprimeRequired { .. })
        ));
        let f5 = make_prime_field(5).unwrap();
        let bad = FunctionTable::from_tail(&f5, 4, &[1, 1, 1]).unwrap();
        assert!(matches!(
            check_a_vanishes(&bad),
            Err(ProofError::NotCohn(_))
        ));

        let l5 = chi_table(5, 2, 4);
        let w = find_transformation(&l5).unwrap();
        let mut broken = w.clone();
        broken.b = 1;
        assert!(!check_character_relation(&l5, &broken).unwrap());
    }

    #[test]
    fn collapse_examples() {
        let zero = vec![CycloElement::zero(2); 9];
        assert_eq!(
            zp_coefficient_collapse(&zero, 3, 2).unwrap(),
            Some(vec![CycloElement::zero(2); 3])
        );

        let mut sparse = vec![CycloElement::zero(1); 9];
        sparse[0] = CycloElement::from_integer(1, 4);
        sparse[3] = CycloElement::from_integer(1, -2);
        sparse[6] = CycloElement::from_integer(1, 7);
        let c = zp_coefficient_collapse(&sparse, 3, 2).unwrap().unwrap();
        assert_eq!(
            c,
            vec![sparse[0].clone(), sparse[3].clone(), sparse[6].clone()]
        );

        let mut ind = vec![CycloElement::zero(1); 9];
        ind[1] = CycloElement::one(1);
        assert_eq!(zp_coefficient_collapse(&ind, 3, 2).unwrap(), None);

        assert!(matches!(
            zp_coefficient_collapse(&ind[..8], 3, 2),
            Err(ProofError::LengthMismatch {
                expected: 9,
                got: 8
            })
        ));
    }

    #[test]
    fn no_s_in_k_examples() {
        let f = &expected_solution_set(3, 6).unwrap()[0];
        assert!(check_no_s_in_k(f).unwrap());
        for a in 1..4 {
            assert!(check_no_s_in_k(&chi_table(5, a, 20)).unwrap());
        }
        let setup = GaloisSetup::new(6, 3);
        assert!(!no_s_in_k_scan(&CycloElement::one(6), &setup).unwrap());
        assert!(matches!(
            check_no_s_in_k(&chi_table(5, 2, 4)),
            Err(ProofError::PrimeDivisorRequired { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let f = &expected_solution_set(3, 6).unwrap()[0];
        let r = split_and_check_f1_constant(f).unwrap();
        assert!(r.holds());
        assert_eq!(r.split.f1.exponents(), &[None, Some(0), Some(0)]);
        assert_eq!(r.split.f2.exponents(), &[None, Some(0), Some(1)]);
        assert_eq!(r.split.product().unwrap(), *f);

        for a in 1..4 {
            assert!(split_and_check_f1_constant(&chi_table(5, a, 20))
                .unwrap()
                .holds());
        }

        // f1(2) = ζ_5, f1 = 1 elsewhere on units; values in μ_5 ⊂ μ_25, m = 50
        let field = make_prime_field(5).unwrap();
        let synthetic = FunctionTable::from_tail(&field, 50, &[2 * 5, 0, 0]).unwrap();
        let r = split_and_check_f1_constant(&synthetic).unwrap();
        assert!(!r.f1_constant);
        let shift = collapsing_shift(&r.split.f1, 1, 2).unwrap();
        // y1 = 0, y2 = 1: r = -(1)(1)^(-1) = 4
        assert_eq!(shift, 4);
        assert!(r.collapsing_shifts.contains(&shift));
        assert!(!r.holds());
    }

    #[test]
    fn traces() {
        let report = full_trace(&chi_table(7, 3, 2)).unwrap();
        assert_eq!(report.terminal_a, 3);
        assert!(report.stages.iter().all(|s| s.verdict));
        let report = full_trace(&expected_solution_set(3, 6).unwrap()[0]).unwrap();
        assert_eq!(report.terminal_a, 1);
        assert!(report
            .stages
            .iter()
            .any(|s| s.stage == "residual/multiplicative"));
        let text = serde_json::to_string(&report).unwrap();
        let back: TraceReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);

        let f9 = crate::finite_field::make_ext_field(3, 2).unwrap();
        let inj = character_table(&Character::new(&f9, 1).unwrap(), 8).unwrap();
        assert_eq!(full_trace(&inj).unwrap_err(), ProofError::NotPrimeField);
    }
}
