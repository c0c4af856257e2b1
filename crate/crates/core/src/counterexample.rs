//! Cohn functions on `F_{p^k}`, `k ≥ 2`, that are not characters: an injective
//! character composed with an `F_p`-linear bijection fixing 1.

use serde::{Deserialize, Serialize};

use crate::characters::{
    character_table, compose_with_linear, is_cohn, is_multiplicative, Character, CharacterError,
    FunctionTable,
};
use crate::cyclotomic::euler_phi;
use crate::finite_field::{
    gl_order, make_ext_field, one_stabilizer_maps, Field, FieldError, FieldJson,
};

/// `f(g^j) = ζ_{q-1}^j`, written in `μ_m`.
pub fn injective_character(field: &Field, m: u64) -> Result<FunctionTable, CharacterError> {
    if field.k() < 2 {
        return Err(CharacterError::PrimeField);
    }
    character_table(&Character::new(field, 1)?, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub is_cohn: bool,
    pub is_multiplicative: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub stabilizer_maps: u64,
    pub injective_characters: u64,
    /// `|GL_k(F_p)|`.
    pub gl_order: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub field: FieldJson,
    /// Exponent `A` of the base character.
    pub base_character: u64,
    pub matrix: Vec<Vec<u64>>,
    pub function: FunctionTable,
    pub verdicts: Verdicts,
    pub counts: Counts,
}

impl CounterexampleReport {
    pub fn is_counterexample(&self) -> bool {
        self.verdicts.is_cohn && !self.verdicts.is_multiplicative
    }
}

/// One report per stabilizer map, in the maps' enumeration order; `m = p^k - 1`.
pub fn find_counterexamples(p: u64, k: usize) -> Result<Vec<CounterexampleReport>, CharacterError> {
    if k < 2 {
        return Err(FieldError::BadDegree { min: 2, got: k }.into());
    }
    let field = make_ext_field(p, k)?;
    let m = field.order() - 1;
    let base = injective_character(&field, m)?;
    let maps = one_stabilizer_maps(&field)?;
    let counts = Counts {
        stabilizer_maps: maps.len() as u64,
        injective_characters: euler_phi(m),
        gl_order: gl_order(p, k),
    };
    let field_json = FieldJson::from(&*field);
    maps.iter()
        .map(|map| {
            let function = compose_with_linear(&base, map)?;
            let verdicts = Verdicts {
                is_cohn: is_cohn(&function).holds(),
                is_multiplicative: is_multiplicative(&function).is_some(),
            };
            Ok(CounterexampleReport {
                field: field_json.clone(),
                base_character: 1,
                matrix: map.matrix().to_vec(),
                function,
                verdicts,
                counts,
            })
        })
        .collect()
}
