//! Function tables on finite fields, characters, Gauss sums, autocorrelation
//! and the Cohn predicate.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::CycloElement;
use crate::finite_field::{make_field, same_field, FFElement, Field, FieldError, LinearMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("root-of-unity modulus must be positive")]
    ZeroModulus,
    #[error("table has {got} entries, field has {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("exponent {exponent} is not reduced modulo {m}")]
    UnreducedExponent { exponent: u32, m: u64 },
    #[error("character exponent {a} outside [1, {max}]")]
    TrivialCharacter { a: u64, max: u64 },
    #[error("character of order {order} does not take values in mu_{m}")]
    OrderDoesNotDivide { order: u64, m: u64 },
    #[error("Gauss sums are only defined here over prime fields")]
    ExtensionField,
    #[error("operation needs an extension field (k >= 2)")]
    PrimeField,
}

/// `f: F_q → μ_m ∪ {0}` as a table of exponents indexed by element index;
/// `None` is the value 0 and `Some(e)` is `ζ_m^e`.
#[derive(Clone)]
pub struct FunctionTable {
    field: Field,
    m: u64,
    exponents: Vec<Option<u32>>,
}

impl PartialEq for FunctionTable {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.m == other.m
            && self.exponents == other.exponents
    }
}

impl Eq for FunctionTable {}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionTable(q={}, m={}, [", self.field.order(), self.m)?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match e {
                None => write!(f, "_")?,
                Some(e) => write!(f, "{e}")?,
            }
        }
        write!(f, "])")
    }
}

impl FunctionTable {
    pub fn new(field: &Field, m: u64, exponents: Vec<Option<u32>>) -> Result<Self, CharacterError> {
        if m == 0 {
            return Err(CharacterError::ZeroModulus);
        }
        if exponents.len() as u64 != field.order() {
            return Err(CharacterError::WrongLength {
                expected: field.order() as usize,
                got: exponents.len(),
            });
        }
        if let Some(&e) = exponents.iter().flatten().find(|&&e| e as u64 >= m) {
            return Err(CharacterError::UnreducedExponent { exponent: e, m });
        }
        Ok(FunctionTable {
            field: Arc::clone(field),
            m,
            exponents,
        })
    }

    /// Builds a prime-field table from `f(2), ..., f(p-1)` with `f(0) = 0`, `f(1) = 1`.
    pub fn from_tail(field: &Field, m: u64, tail: &[u32]) -> Result<Self, CharacterError> {
        let mut exponents = Vec::with_capacity(tail.len() + 2);
        exponents.push(None);
        exponents.push(Some(0));
        exponents.extend(tail.iter().map(|&e| Some(e)));
        Self::new(field, m, exponents)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn exponents(&self) -> &[Option<u32>] {
        &self.exponents
    }

    /// Exponent at the element with the given index.
    pub fn at(&self, index: u64) -> Option<u32> {
        self.exponents[index as usize]
    }

    /// `f(x)` as an exact element of `Q(ζ_m)`.
    pub fn value(&self, x: &FFElement) -> CycloElement {
        match self.exponents[x.index() as usize] {
            None => CycloElement::zero(self.m),
            Some(e) => CycloElement::root_of_unity(self.m, e as i64),
        }
    }

    /// `f(0) = 0`, `f(1) = 1` and `|f(x)| = 1` for `x ≠ 0`.
    pub fn is_normalized(&self) -> bool {
        self.normalization_failure().is_none()
    }

    fn normalization_failure(&self) -> Option<NormalizationFailure> {
        if self.exponents[0].is_some() {
            return Some(NormalizationFailure::NonzeroAtZero);
        }
        if self.exponents[1] != Some(0) {
            return Some(NormalizationFailure::NotOneAtOne);
        }
        self.exponents[1..]
            .iter()
            .position(Option::is_none)
            .map(|i| NormalizationFailure::VanishesAt(i as u64 + 1))
    }

    /// The same function with values read in `μ_target`, `m | target`.
    pub fn lift(&self, target: u64) -> Result<Self, CharacterError> {
        if target == 0 || target % self.m != 0 {
            return Err(CharacterError::OrderDoesNotDivide {
                order: self.m,
                m: target,
            });
        }
        let s = (target / self.m) as u32;
        let exponents = self.exponents.iter().map(|e| e.map(|e| e * s)).collect();
        Ok(FunctionTable {
            field: Arc::clone(&self.field),
            m: target,
            exponents,
        })
    }

    /// `f^σ` for `σ: ζ_m ↦ ζ_m^t` applied to the values.
    pub fn apply_galois(&self, t: u64) -> Self {
        let m = self.m;
        let exponents = self
            .exponents
            .iter()
            .map(|e| e.map(|e| ((e as u64 * (t % m)) % m) as u32))
            .collect();
        FunctionTable {
            field: Arc::clone(&self.field),
            m,
            exponents,
        }
    }

    /// The tuple `(f(2), ..., f(p-1))` used by the prime-field search.
    pub fn tail(&self) -> Option<Vec<u32>> {
        self.exponents[2..].iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationFailure {
    NonzeroAtZero,
    NotOneAtOne,
    VanishesAt(u64),
}

/// Nontrivial multiplicative character `χ_A(g^j) = ζ_{q-1}^(A·j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Character {
    field: Field,
    a: u64,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character(q={}, A={})", self.field.order(), self.a)
    }
}

impl Character {
    pub fn new(field: &Field, a: u64) -> Result<Self, CharacterError> {
        let max = field.order() - 2;
        if a == 0 || a > max {
            return Err(CharacterError::TrivialCharacter { a, max });
        }
        Ok(Character {
            field: Arc::clone(field),
            a,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.a
    }

    /// `(q-1) / gcd(A, q-1)`.
    pub fn order(&self) -> u64 {
        let group = self.field.order() - 1;
        group / self.a.gcd(&group)
    }
}

/// Index `t` of the additive character `ψ_t(x) = ζ_p^(t·x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditiveIndex(u64);

impl AdditiveIndex {
    pub fn new(t: i64, p: u64) -> Self {
        AdditiveIndex(t.rem_euclid(p as i64) as u64)
    }

    pub fn get(&self) -> u64 {
        self.0
    }
}

/// The table of `χ` with values in `μ_m`.
pub fn character_table(chi: &Character, m: u64) -> Result<FunctionTable, CharacterError> {
    let order = chi.order();
    if m == 0 || m % order != 0 {
        return Err(CharacterError::OrderDoesNotDivide { order, m });
    }
    let field = &chi.field;
    let group = field.order() - 1;
    // ζ_{q-1}^(A·j) = ζ_m^(j·A·m/(q-1)); A·m/(q-1) is integral since order | m
    let step = (chi.a as u128 * m as u128 / group as u128) as u64 % m;
    let mut exponents = vec![None; field.order() as usize];
    for j in 0..group {
        let idx = field.exp_index(j);
        exponents[idx as usize] = Some(((step as u128 * j as u128) % m as u128) as u32);
    }
    FunctionTable::new(field, m, exponents)
}

/// `G(f, ψ_t) = Σ_x f(x)·ζ_p^(t·x)` in `Q(ζ_M)`, `M = lcm(m, p)`.
pub fn gauss_sum(f: &FunctionTable, t: AdditiveIndex) -> Result<CycloElement, CharacterError> {
    if !f.field.is_prime_field() {
        return Err(CharacterError::ExtensionField);
    }
    let p = f.field.p();
    let level = f.m.lcm(&p);
    let value_step = level / f.m;
    let psi_step = level / p;
    let mut counts = vec![0i64; level as usize];
    for (x, e) in f.exponents.iter().enumerate() {
        if let Some(e) = e {
            let exp = (*e as u64 * value_step + (t.0 * x as u64 % p) * psi_step) % level;
            counts[exp as usize] += 1;
        }
    }
    Ok(CycloElement::from_exponent_counts(level, &counts))
}

/// `Σ_x f(x)·conj(f(x+h))` in `Q(ζ_m)`.
pub fn autocorrelation(f: &FunctionTable, h: &FFElement) -> Result<CycloElement, CharacterError> {
    same_field(&f.field, h.field())?;
    Ok(autocorrelation_at(f, h.index()))
}

fn autocorrelation_counts(f: &FunctionTable, h: u64) -> Vec<i64> {
    let m = f.m;
    let mut counts = vec![0i64; m as usize];
    for x in 0..f.field.order() {
        let y = f.field.add_index(x, h);
        if let (Some(a), Some(b)) = (f.exponents[x as usize], f.exponents[y as usize]) {
            let d = (a as u64 + m - b as u64) % m;
            counts[d as usize] += 1;
        }
    }
    counts
}

fn autocorrelation_at(f: &FunctionTable, h: u64) -> CycloElement {
    CycloElement::from_exponent_counts(f.m, &autocorrelation_counts(f, h))
}

/// Outcome of [`is_cohn`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CohnVerdict {
    Holds,
    NotNormalized(NormalizationFailure),
    /// First shift (in index order) where the autocorrelation is not `-1`.
    Violation {
        shift: FFElement,
        value: CycloElement,
    },
}

impl CohnVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CohnVerdict::Holds)
    }
}

/// Normalization plus `autocorrelation(f, h) = -1` exactly for all `h ≠ 0`.
pub fn is_cohn(f: &FunctionTable) -> CohnVerdict {
    if let Some(fail) = f.normalization_failure() {
        return CohnVerdict::NotNormalized(fail);
    }
    let minus_one = CycloElement::from_integer(f.m, -1);
    for h in 1..f.field.order() {
        let value = autocorrelation_at(f, h);
        if value != minus_one {
            let shift = FFElement::from_index(&f.field, h).expect("index in range");
            return CohnVerdict::Violation { shift, value };
        }
    }
    CohnVerdict::Holds
}

/// The character `f` equals, when `f` is multiplicative on `F_q^×` and nontrivial.
///
/// Every pair `(x, y)` of units is checked, not just powers of the generator.
/// A multiplicative but trivial `f` also yields `None`.
pub fn is_multiplicative(f: &FunctionTable) -> Option<Character> {
    let field = &f.field;
    let q = field.order();
    let m = f.m;
    if f.exponents[0].is_some() || f.exponents[1..].iter().any(Option::is_none) {
        return None;
    }
    for x in 1..q {
        let ex = f.exponents[x as usize].unwrap() as u64;
        for y in 1..q {
            let ey = f.exponents[y as usize].unwrap() as u64;
            let exy = f.exponents[field.mul_index(x, y) as usize].unwrap() as u64;
            if (ex + ey) % m != exy {
                return None;
            }
        }
    }
    let group = q - 1;
    let eg = f.exponents[field.exp_index(1) as usize].unwrap() as u64;
    // f(g) = ζ_m^eg = ζ_{q-1}^A
    let scaled = eg as u128 * group as u128;
    if scaled % m as u128 != 0 {
        return None;
    }
    let a = (scaled / m as u128) as u64 % group;
    Character::new(field, a).ok()
}

/// `|G(f, ψ_t)|² = p` for `t ≠ 0` and `G(f, ψ_0) = 0`, checked exactly.
pub fn spectrum_check(f: &FunctionTable) -> Result<bool, CharacterError> {
    let p = f.field.p();
    let g0 = gauss_sum(f, AdditiveIndex(0))?;
    if !g0.is_zero() {
        return Ok(false);
    }
    let level = g0.modulus();
    let target = CycloElement::from_integer(level, p as i64);
    for t in 1..p {
        let g = gauss_sum(f, AdditiveIndex(t))?;
        if &g * &g.conjugate() != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x ↦ f(λ(x))`.
pub fn compose_with_linear(
    f: &FunctionTable,
    map: &LinearMap,
) -> Result<FunctionTable, CharacterError> {
    if f.field.k() < 2 {
        return Err(CharacterError::PrimeField);
    }
    same_field(&f.field, map.field())?;
    let exponents = (0..f.field.order())
        .map(|x| f.exponents[map.apply_index(x) as usize])
        .collect();
    Ok(FunctionTable {
        field: Arc::clone(&f.field),
        m: f.m,
        exponents,
    })
}

/// Interchange form `{"p", "k", "m", "exponents"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionTableJson {
    pub p: u64,
    pub k: usize,
    pub m: u64,
    pub exponents: Vec<Option<u32>>,
}

impl From<&FunctionTable> for FunctionTableJson {
    fn from(f: &FunctionTable) -> Self {
        FunctionTableJson {
            p: f.field.p(),
            k: f.field.k(),
            m: f.m,
            exponents: f.exponents.clone(),
        }
    }
}

impl TryFrom<FunctionTableJson> for FunctionTable {
    type Error = CharacterError;

    fn try_from(j: FunctionTableJson) -> Result<Self, CharacterError> {
        let field = make_field(j.p, j.k)?;
        FunctionTable::new(&field, j.m, j.exponents)
    }
}

impl Serialize for FunctionTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FunctionTableJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = FunctionTableJson::deserialize(d)?;
        FunctionTable::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::{make_ext_field, make_prime_field, one_stabilizer_maps};

    fn legendre(p: u64) -> FunctionTable {
        let f = make_prime_field(p).unwrap();
        character_table(&Character::new(&f, (p - 1) / 2).unwrap(), 2).unwrap()
    }

    #[test]
    fn character_table_examples() {
        let f5 = make_prime_field(5).unwrap();
        let t = character_table(&Character::new(&f5, 2).unwrap(), 4).unwrap();
        assert_eq!(t.exponents(), &[None, Some(0), Some(2), Some(2), Some(0)]);

        let l7 = legendre(7);
        // QRs mod 7 are {1, 2, 4}
        assert_eq!(
            l7.exponents(),
            &[None, Some(0), Some(0), Some(1), Some(0), Some(1), Some(1)]
        );
        assert!(matches!(
            Character::new(&f5, 0),
            Err(CharacterError::TrivialCharacter { .. })
        ));
        let chi1 = Character::new(&f5, 1).unwrap();
        assert_eq!(
            character_table(&chi1, 2).unwrap_err(),
            CharacterError::OrderDoesNotDivide { order: 4, m: 2 }
        );
    }

    #[test]
    fn gauss_sum_examples() {
        let f5 = make_prime_field(5).unwrap();
        for a in 1..4 {
            let t = character_table(&Character::new(&f5, a).unwrap(), 4).unwrap();
            assert!(gauss_sum(&t, AdditiveIndex(0)).unwrap().is_zero());
        }
        // p = 3: G = ζ_3 - ζ_3², G² = -3
        let l3 = legendre(3);
        let g = gauss_sum(&l3, AdditiveIndex(1)).unwrap();
        assert_eq!(g.modulus(), 6);
        let oracle = (&CycloElement::root_of_unity(3, 1) - &CycloElement::root_of_unity(3, 2))
            .embed(6)
            .unwrap();
        assert_eq!(g, oracle);
        assert_eq!(&g * &g, CycloElement::from_integer(6, -3));

        let l5 = legendre(5);
        let g = gauss_sum(&l5, AdditiveIndex(1)).unwrap();
        assert_eq!(&g * &g.conjugate(), CycloElement::from_integer(10, 5));

        let f9 = make_ext_field(3, 2).unwrap();
        let t = FunctionTable::new(&f9, 2, vec![None; 9]).unwrap();
        assert_eq!(
            gauss_sum(&t, AdditiveIndex(1)).unwrap_err(),
            CharacterError::ExtensionField
        );
    }

    #[test]
    fn autocorrelation_examples() {
        let f7 = make_prime_field(7).unwrap();
        let l7 = legendre(7);
        assert_eq!(
            autocorrelation(&l7, &FFElement::zero(&f7)).unwrap(),
            CycloElement::from_integer(2, 6)
        );
        assert_eq!(
            autocorrelation(&l7, &FFElement::one(&f7)).unwrap(),
            CycloElement::from_integer(2, -1)
        );
        let f3 = make_prime_field(3).unwrap();
        let t = FunctionTable::from_tail(&f3, 6, &[1]).unwrap();
        let v = autocorrelation(&t, &FFElement::one(&f3)).unwrap();
        assert_eq!(v, CycloElement::root_of_unity(6, -1));
        assert_ne!(v, CycloElement::from_integer(6, -1));
        let f5 = make_prime_field(5).unwrap();
        assert!(autocorrelation(&t, &FFElement::one(&f5)).is_err());
    }

    #[test]
    fn cohn_examples() {
        assert!(is_cohn(&legendre(7)).holds());
        let f3 = make_prime_field(3).unwrap();
        let t = FunctionTable::from_tail(&f3, 6, &[1]).unwrap();
        match is_cohn(&t) {
            CohnVerdict::Violation { shift, value } => {
                assert_eq!(shift.index(), 1);
                assert_eq!(value, CycloElement::root_of_unity(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        for p in [3u64, 5, 7, 11] {
            let f = make_prime_field(p).unwrap();
            let ones = FunctionTable::from_tail(&f, 1, &vec![0; p as usize - 2]).unwrap();
            match is_cohn(&ones) {
                CohnVerdict::Violation { value, .. } => {
                    assert_eq!(value, CycloElement::from_integer(1, p as i64 - 2))
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        let mut e = legendre(7).exponents().to_vec();
        e[0] = Some(0);
        let t = FunctionTable::new(&make_prime_field(7).unwrap(), 2, e).unwrap();
        assert_eq!(
            is_cohn(&t),
            CohnVerdict::NotNormalized(NormalizationFailure::NonzeroAtZero)
        );
    }

    #[test]
    fn multiplicativity() {
        for p in [5u64, 7, 11] {
            let f = make_prime_field(p).unwrap();
            for a in 1..p - 1 {
                let chi = Character::new(&f, a).unwrap();
                let t = character_table(&chi, (p - 1) * 3).unwrap();
                assert_eq!(is_multiplicative(&t), Some(chi));
            }
        }
        assert_eq!(is_multiplicative(&legendre(5)).unwrap().exponent(), 2);
        let f3 = make_prime_field(3).unwrap();
        let t = FunctionTable::from_tail(&f3, 6, &[1]).unwrap();
        assert_eq!(is_multiplicative(&t), None);
        let ones = FunctionTable::from_tail(&f3, 6, &[0]).unwrap();
        assert_eq!(is_multiplicative(&ones), None);
    }

    #[test]
    fn spectrum_examples() {
        assert!(spectrum_check(&legendre(5)).unwrap());
        assert!(spectrum_check(&legendre(13)).unwrap());
        let mut e = legendre(5).exponents().to_vec();
        e[0] = Some(0);
        let t = FunctionTable::new(&make_prime_field(5).unwrap(), 2, e).unwrap();
        assert!(!spectrum_check(&t).unwrap());
    }

    #[test]
    fn composition_over_f9() {
        let f9 = make_ext_field(3, 2).unwrap();
        let chi = Character::new(&f9, 1).unwrap();
        let inj = character_table(&chi, 8).unwrap();
        let maps = one_stabilizer_maps(&f9).unwrap();
        let mut non_mult = 0;
        for m in &maps {
            let g = compose_with_linear(&inj, m).unwrap();
            assert!(is_cohn(&g).holds());
            if is_multiplicative(&g).is_none() {
                non_mult += 1;
            }
        }
        assert!(non_mult >= 1);
        let id = LinearMap::identity(&f9).unwrap();
        assert_eq!(compose_with_linear(&inj, &id).unwrap(), inj);
        assert_eq!(
            compose_with_linear(&legendre(5), &id).unwrap_err(),
            CharacterError::PrimeField
        );
    }

    #[test]
    fn json_schema() {
        let t = legendre(5);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"p":5,"k":1,"m":2,"exponents":[null,0,1,1,0]}"#);
        let back: FunctionTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<FunctionTable>(
            r#"{"p":5,"k":1,"m":2,"exponents":[null,0,2,1,0]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<FunctionTable>(
            r#"{"p":4,"k":1,"m":2,"exponents":[null,0,1,1]}"#
        )
        .is_err());
    }
}
