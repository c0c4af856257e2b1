//! Arithmetic in `F_p` and `F_{p^k}`.
//!
//! Elements are coordinate vectors in the polynomial basis `1, x, ..., x^(k-1)`.
//! Every element also has an integer *index* `Σ c_i p^i`; tables over the
//! field (function tables, dlog tables) are laid out by index, so for prime
//! fields the index is just the residue.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which the full dlog table is built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is the trivial case and is not supported")]
    TrivialCase,
    #[error("extension degree must be at least {min}, got {got}")]
    BadDegree { min: usize, got: usize },
    #[error("field of order {0} exceeds the supported size")]
    TooLarge(u128),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("discrete log of zero")]
    ZeroLog,
    #[error("index {index} out of range for field of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("invalid coordinates: {0}")]
    BadCoordinates(String),
    #[error("matrix is not an invertible {0}x{0} matrix")]
    BadMatrix(usize),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = (result as u128 * b as u128 % modulus as u128) as u64;
        }
        b = (b as u128 * b as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: i64, n: u64) -> Option<u64> {
    let a = a.rem_euclid(n as i64);
    let g = a.extended_gcd(&(n as i64));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(n as i64) as u64)
}

/// Multiplicative order of `a` modulo `n` (`gcd(a, n) = 1` required).
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if a.gcd(&n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % n as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// Smallest positive generator of `(Z/n)^×`, when the group is cyclic.
pub fn smallest_primitive_root(n: u64) -> Option<u64> {
    if n == 1 || n == 2 {
        return Some(1);
    }
    let target = (1..n).filter(|a| a.gcd(&n) == 1).count() as u64;
    (1..n).find(|&a| multiplicative_order(a, n) == Some(target))
}

/// An immutable field description together with its dlog/antilog tables.
pub struct FieldDescriptor {
    p: u64,
    k: usize,
    order: u64,
    /// Monic modulus, lowest degree first, length `k + 1`. Absent for `k = 1`.
    modulus: Option<Vec<u64>>,
    generator: Vec<u64>,
    /// `exp_table[e]` = index of `g^e`.
    exp_table: Vec<u32>,
    /// `log_table[index]` = dlog; entry 0 unused.
    log_table: Vec<u32>,
}

pub type Field = Arc<FieldDescriptor>;

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// `F_p` with the smallest primitive root as generator.
pub fn make_prime_field(p: u64) -> Result<Field, FieldError> {
    check_odd_prime(p)?;
    build_field(p, 1, None)
}

/// `F_{p^k}`, `k ≥ 2`, with the lexicographically smallest monic irreducible
/// modulus and the smallest-index generator.
pub fn make_ext_field(p: u64, k: usize) -> Result<Field, FieldError> {
    check_odd_prime(p)?;
    if k < 2 {
        return Err(FieldError::BadDegree { min: 2, got: k });
    }
    let order = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if order > MAX_FIELD_ORDER as u128 {
        return Err(FieldError::TooLarge(order));
    }
    let modulus = smallest_irreducible(p, k);
    build_field(p, k, Some(modulus))
}

/// Dispatches on `k`.
pub fn make_field(p: u64, k: usize) -> Result<Field, FieldError> {
    match k {
        0 => Err(FieldError::BadDegree { min: 1, got: 0 }),
        1 => make_prime_field(p),
        _ => make_ext_field(p, k),
    }
}

fn check_odd_prime(p: u64) -> Result<(), FieldError> {
    if p == 2 {
        return Err(FieldError::TrivialCase);
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p > MAX_FIELD_ORDER {
        return Err(FieldError::TooLarge(p as u128));
    }
    Ok(())
}

// Polynomials over F_p, lowest degree first, no trailing zeros except for zero itself.

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let k = poly.len() - 1;
    // trial division by every monic polynomial of degree 1..=k/2
    for deg in 1..=k / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut cand = index_to_coords(low, p, deg);
            cand.push(1);
            let (_, r) = poly_divmod(poly, &cand, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for low in 0..count {
        let mut cand = index_to_coords(low, p, k);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn index_to_coords(mut index: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = vec![0; k];
    for c in out.iter_mut() {
        *c = index % p;
        index /= p;
    }
    out
}

fn coords_to_index(coords: &[u64], p: u64) -> u64 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn build_field(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Field, FieldError> {
    let order = p.pow(k as u32);
    let mut fd = FieldDescriptor {
        p,
        k,
        order,
        modulus,
        generator: Vec::new(),
        exp_table: Vec::new(),
        log_table: Vec::new(),
    };
    let group = order - 1;
    let factors = prime_factors(group);
    let generator = (1..order)
        .map(|i| index_to_coords(i, p, k))
        .find(|g| {
            factors
                .iter()
                .all(|&l| !fd.is_one(&fd.pow_coords(g, group / l)))
        })
        .expect("multiplicative group is cyclic");
    let mut exp_table = Vec::with_capacity(group as usize);
    let mut log_table = vec![u32::MAX; order as usize];
    let mut cur = fd.one_coords();
    for e in 0..group {
        let idx = coords_to_index(&cur, p);
        exp_table.push(idx as u32);
        log_table[idx as usize] = e as u32;
        cur = fd.mul_coords(&cur, &generator);
    }
    fd.generator = generator;
    fd.exp_table = exp_table;
    fd.log_table = log_table;
    Ok(Arc::new(fd))
}

impl FieldDescriptor {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `q = p^k`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus_poly(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn generator_coords(&self) -> &[u64] {
        &self.generator
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    fn one_coords(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = 1;
        v
    }

    fn is_one(&self, c: &[u64]) -> bool {
        c[0] == 1 && c[1..].iter().all(|&x| x == 0)
    }

    fn mul_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        match &self.modulus {
            None => vec![a[0] * b[0] % p],
            Some(m) => {
                let k = self.k;
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &ai) in a.iter().enumerate() {
                    if ai == 0 {
                        continue;
                    }
                    for (j, &bj) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + ai * bj) % p;
                    }
                }
                for i in (k..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    for j in 0..k {
                        prod[i - k + j] = (prod[i - k + j] + (p - c) * m[j]) % p;
                    }
                }
                prod.truncate(k);
                prod
            }
        }
    }

    fn pow_coords(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let mut result = self.one_coords();
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_coords(&result, &base);
            }
            base = self.mul_coords(&base, &base);
            exp >>= 1;
        }
        result
    }

    /// The generator's `e`-th power as an element index.
    pub fn exp_index(&self, e: u64) -> u64 {
        self.exp_table[(e % (self.order - 1)) as usize] as u64
    }

    /// The dlog of a nonzero element given by index.
    pub fn log_index(&self, index: u64) -> Result<u64, FieldError> {
        if index == 0 {
            return Err(FieldError::ZeroLog);
        }
        self.log_table
            .get(index as usize)
            .map(|&l| l as u64)
            .ok_or(FieldError::IndexOutOfRange {
                index,
                order: self.order,
            })
    }

    pub fn add_index(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg_index(&self, a: u64) -> u64 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul_index(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = self.log_table[a as usize] as u64 + self.log_table[b as usize] as u64;
        self.exp_index(l)
    }
}

/// Element of a [`FieldDescriptor`].
#[derive(Clone)]
pub struct FFElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.coeffs == other.coeffs
    }
}

impl Eq for FFElement {}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

/// `Ok` when both handles describe the same field.
pub fn same_field(a: &Field, b: &Field) -> Result<(), FieldError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(FieldError::FieldMismatch)
    }
}

impl FFElement {
    pub fn from_coords(field: &Field, coeffs: Vec<u64>) -> Result<Self, FieldError> {
        if coeffs.len() != field.k || coeffs.iter().any(|&c| c >= field.p) {
            return Err(FieldError::BadCoordinates(format!("{coeffs:?}")));
        }
        Ok(FFElement {
            field: Arc::clone(field),
            coeffs,
        })
    }

    pub fn from_index(field: &Field, index: u64) -> Result<Self, FieldError> {
        if index >= field.order {
            return Err(FieldError::IndexOutOfRange {
                index,
                order: field.order,
            });
        }
        Ok(FFElement {
            field: Arc::clone(field),
            coeffs: index_to_coords(index, field.p, field.k),
        })
    }

    /// The image of an integer under `Z → F_p ⊂ F_{p^k}`.
    pub fn from_int(field: &Field, n: i64) -> Self {
        let mut coeffs = vec![0; field.k];
        coeffs[0] = n.rem_euclid(field.p as i64) as u64;
        FFElement {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn generator(field: &Field) -> Self {
        FFElement {
            field: Arc::clone(field),
            coeffs: field.generator.clone(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index(&self) -> u64 {
        coords_to_index(&self.coeffs, self.field.p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        same_field(&self.field, &other.field)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(FFElement {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FFElement {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        same_field(&self.field, &other.field)?;
        Ok(FFElement {
            field: Arc::clone(&self.field),
            coeffs: self.field.mul_coords(&self.coeffs, &other.coeffs),
        })
    }

    pub fn scalar_mul(&self, c: u64) -> Self {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&a| a * (c % p) % p).collect();
        FFElement {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn pow(&self, exp: u64) -> Self {
        FFElement {
            field: Arc::clone(&self.field),
            coeffs: self.field.pow_coords(&self.coeffs, exp),
        }
    }

    /// Inverse via the extended Euclidean algorithm (integers for `k = 1`,
    /// polynomials against the modulus otherwise).
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let p = self.field.p;
        let coeffs = match &self.field.modulus {
            None => vec![mod_inverse(self.coeffs[0] as i64, p).ok_or(FieldError::ZeroInverse)?],
            Some(m) => {
                let mut inv = poly_inverse(&self.coeffs, m, p);
                inv.resize(self.field.k, 0);
                inv
            }
        };
        Ok(FFElement {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.mul(&other.inv()?)
    }

    /// Discrete log against the field generator, from the precomputed table.
    pub fn dlog(&self) -> Result<u64, FieldError> {
        self.field.log_index(self.index())
    }
}

fn poly_sub_scaled(a: &[u64], b: &[u64], c: u64, shift: usize, p: u64) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, 0);
    }
    for (j, &bj) in b.iter().enumerate() {
        out[j + shift] = (out[j + shift] + p - c * bj % p) % p;
    }
    trim(out)
}

fn poly_divmod(num: &[u64], den: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let den = trim(den.to_vec());
    let dd = den.len() - 1;
    let lead_inv = mod_inverse(den[dd] as i64, p).expect("division by zero polynomial");
    let mut rem = trim(num.to_vec());
    let mut quot = vec![0u64; rem.len().saturating_sub(dd).max(1)];
    while rem.len() > dd && !(rem.len() == 1 && rem[0] == 0) {
        let shift = rem.len() - 1 - dd;
        let c = rem[rem.len() - 1] * lead_inv % p;
        quot[shift] = c;
        rem = poly_sub_scaled(&rem, &den, c, shift, p);
    }
    (trim(quot), rem)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_sub_scaled(a, b, 1, 0, p)
}

fn poly_inverse(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    // invariant: s_i·a ≡ r_i (mod modulus)
    let (mut r0, mut r1) = (modulus.to_vec(), trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![0u64], vec![1u64]);
    while !(r1.len() == 1 && r1[0] == 0) {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant since the modulus is irreducible
    let c = mod_inverse(r0[0] as i64, p).expect("irreducible modulus");
    s0.iter().map(|&s| s * c % p).collect()
}

/// An `F_p`-linear map on `F_{p^k}` in the polynomial basis, acting on
/// column vectors of coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    field: Field,
    matrix: Vec<Vec<u64>>,
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearMap{:?}", self.matrix)
    }
}

impl LinearMap {
    pub fn new(field: &Field, matrix: Vec<Vec<u64>>) -> Result<Self, FieldError> {
        let k = field.k;
        if k < 2 {
            return Err(FieldError::BadDegree { min: 2, got: k });
        }
        if matrix.len() != k
            || matrix
                .iter()
                .any(|row| row.len() != k || row.iter().any(|&c| c >= field.p))
            || rank_mod_p(&matrix, field.p) != k
        {
            return Err(FieldError::BadMatrix(k));
        }
        Ok(LinearMap {
            field: Arc::clone(field),
            matrix,
        })
    }

    pub fn identity(field: &Field) -> Result<Self, FieldError> {
        let k = field.k;
        let matrix = (0..k)
            .map(|r| (0..k).map(|c| u64::from(r == c)).collect())
            .collect();
        Self::new(field, matrix)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &FFElement) -> Result<FFElement, FieldError> {
        same_field(&self.field, &x.field)?;
        Ok(FFElement {
            field: Arc::clone(&self.field),
            coeffs: self.apply_coords(&x.coeffs),
        })
    }

    fn apply_coords(&self, x: &[u64]) -> Vec<u64> {
        let p = self.field.p;
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).fold(0, |acc, (a, b)| (acc + a * b) % p))
            .collect()
    }

    /// The map on element indices.
    pub fn apply_index(&self, index: u64) -> u64 {
        let x = index_to_coords(index, self.field.p, self.field.k);
        coords_to_index(&self.apply_coords(&x), self.field.p)
    }
}

/// `λ(x)` for an element `x`.
pub fn apply_linear(map: &LinearMap, x: &FFElement) -> Result<FFElement, FieldError> {
    map.apply(x)
}

fn rank_mod_p(matrix: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = matrix.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = mod_inverse(a[rank][col] as i64, p).unwrap();
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col] * inv % p;
                for c in 0..cols {
                    a[r][c] = (a[r][c] + p - f * a[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `|GL_k(F_p)| = Π_{i<k} (p^k - p^i)`.
pub fn gl_order(p: u64, k: usize) -> u128 {
    let q = (p as u128).pow(k as u32);
    (0..k).map(|i| q - (p as u128).pow(i as u32)).product()
}

/// All invertible `F_p`-linear maps with `λ(1) = 1`, in lexicographic order of
/// their row-major matrix entries.
pub fn one_stabilizer_maps(field: &Field) -> Result<Vec<LinearMap>, FieldError> {
    let k = field.k;
    let p = field.p;
    if k < 2 {
        return Err(FieldError::BadDegree { min: 2, got: k });
    }
    // column 0 is e_0; the k·(k-1) remaining entries are free digits
    let free = k * (k - 1);
    let count = (p as u128)
        .checked_pow(free as u32)
        .ok_or(FieldError::TooLarge(u128::MAX))?;
    if count > MAX_FIELD_ORDER as u128 * 64 {
        return Err(FieldError::TooLarge(count));
    }
    let mut out = Vec::new();
    let mut digits = vec![0u64; free];
    for _ in 0..count {
        let mut matrix = vec![vec![0u64; k]; k];
        matrix[0][0] = 1;
        let mut it = digits.iter();
        for row in matrix.iter_mut() {
            for entry in row.iter_mut().skip(1) {
                *entry = *it.next().unwrap();
            }
        }
        if rank_mod_p(&matrix, p) == k {
            out.push(LinearMap {
                field: Arc::clone(field),
                matrix,
            });
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Interchange form `{p, k, modulus, generator}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub k: usize,
    pub modulus: Option<Vec<u64>>,
    pub generator: Vec<u64>,
}

impl From<&FieldDescriptor> for FieldJson {
    fn from(f: &FieldDescriptor) -> Self {
        FieldJson {
            p: f.p,
            k: f.k,
            modulus: f.modulus.clone(),
            generator: f.generator.clone(),
        }
    }
}

impl FieldJson {
    /// Rebuilds the field and checks that the stored choices match.
    pub fn to_field(&self) -> Result<Field, FieldError> {
        let f = make_field(self.p, self.k)?;
        if FieldJson::from(&*f) != *self {
            return Err(FieldError::BadCoordinates(
                "modulus or generator differs from the canonical choice".into(),
            ));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_generators() {
        // order oracle: 2 generates mod 5; mod 7, 2 has order 3 and 3 has order 6
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(3, 7), Some(6));
        let f5 = make_prime_field(5).unwrap();
        assert_eq!(f5.generator_coords(), &[2]);
        let f7 = make_prime_field(7).unwrap();
        assert_eq!(f7.generator_coords(), &[3]);
        let f3 = make_prime_field(3).unwrap();
        assert_eq!(f3.generator_coords(), &[2]);
        assert_eq!(f3.modulus_poly(), None);
    }

    #[test]
    fn prime_field_errors() {
        assert_eq!(make_prime_field(2).unwrap_err(), FieldError::TrivialCase);
        assert_eq!(make_prime_field(9).unwrap_err(), FieldError::NotPrime(9));
        assert_eq!(make_prime_field(1).unwrap_err(), FieldError::NotPrime(1));
        assert_eq!(make_ext_field(4, 2).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(
            make_ext_field(3, 1).unwrap_err(),
            FieldError::BadDegree { min: 2, got: 1 }
        );
    }

    #[test]
    fn extension_moduli() {
        let f9 = make_ext_field(3, 2).unwrap();
        assert_eq!(f9.modulus_poly(), Some(&[1, 0, 1][..]));
        assert_eq!(f9.order(), 9);
        // x + 1 has order 8 in F_3[x]/(x²+1); smaller indices do not
        assert_eq!(f9.generator_coords(), &[1, 1]);
        let g = FFElement::generator(&f9);
        for e in 1..8 {
            assert_ne!(g.pow(e), FFElement::one(&f9));
        }
        assert_eq!(g.pow(8), FFElement::one(&f9));

        let f25 = make_ext_field(5, 2).unwrap();
        assert_eq!(f25.modulus_poly(), Some(&[2, 0, 1][..]));
        assert_eq!(f25.generator_coords(), &[1, 1]);

        let f27 = make_ext_field(3, 3).unwrap();
        let m = f27.modulus_poly().unwrap();
        assert!(is_irreducible(m, 3));
        // x³ + 2x + 1 is the first cubic without roots mod 3
        assert_eq!(m, &[1, 2, 0, 1]);

        // x⁴ + 1 = (x² + x + 2)(x² + 2x + 2) over F_3: no roots but reducible
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3));
    }

    #[test]
    fn arithmetic_examples() {
        let f9 = make_ext_field(3, 2).unwrap();
        let x = FFElement::from_coords(&f9, vec![0, 1]).unwrap();
        assert_eq!(x.mul(&x).unwrap(), FFElement::from_int(&f9, 2));

        let f7 = make_prime_field(7).unwrap();
        assert_eq!(
            FFElement::from_int(&f7, 2).inv().unwrap(),
            FFElement::from_int(&f7, 4)
        );
        assert_eq!(
            FFElement::zero(&f7).inv().unwrap_err(),
            FieldError::ZeroInverse
        );

        for idx in 1..9 {
            let a = FFElement::from_index(&f9, idx).unwrap();
            assert_eq!(a.pow(8), FFElement::one(&f9));
            assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), FFElement::one(&f9));
        }
        let f25 = make_ext_field(5, 2).unwrap();
        for idx in 1..25 {
            let a = FFElement::from_index(&f25, idx).unwrap();
            assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), FFElement::one(&f25));
        }
        let a = FFElement::one(&f7);
        let b = FFElement::one(&f9);
        assert_eq!(a.add(&b).unwrap_err(), FieldError::FieldMismatch);
    }

    #[test]
    fn dlog_examples() {
        let f7 = make_prime_field(7).unwrap();
        assert_eq!(FFElement::generator(&f7).dlog().unwrap(), 1);
        assert_eq!(FFElement::from_int(&f7, 6).dlog().unwrap(), 3);
        assert_eq!(FFElement::one(&f7).dlog().unwrap(), 0);
        assert_eq!(
            FFElement::zero(&f7).dlog().unwrap_err(),
            FieldError::ZeroLog
        );

        let f9 = make_ext_field(3, 2).unwrap();
        for a in 1..9 {
            for b in 1..9 {
                let x = FFElement::from_index(&f9, a).unwrap();
                let y = FFElement::from_index(&f9, b).unwrap();
                let lhs = x.mul(&y).unwrap().dlog().unwrap();
                assert_eq!(lhs, (x.dlog().unwrap() + y.dlog().unwrap()) % 8);
                assert_eq!(f9.mul_index(a, b), x.mul(&y).unwrap().index());
                assert_eq!(f9.add_index(a, b), x.add(&y).unwrap().index());
            }
        }
    }

    #[test]
    fn stabilizer_maps() {
        let f9 = make_ext_field(3, 2).unwrap();
        assert_eq!(gl_order(3, 2), 48);
        let maps = one_stabilizer_maps(&f9).unwrap();
        assert_eq!(maps.len() as u128, gl_order(3, 2) / 8);
        assert_eq!(maps.len(), 6);
        let id = LinearMap::identity(&f9).unwrap();
        assert!(maps.contains(&id));
        for (i, a) in maps.iter().enumerate() {
            for b in &maps[i + 1..] {
                assert_ne!(a, b);
                assert!(a.matrix() < b.matrix(), "lexicographic order");
            }
        }
        let one = FFElement::one(&f9);
        let zero = FFElement::zero(&f9);
        for m in &maps {
            assert_eq!(apply_linear(m, &one).unwrap(), one);
            assert_eq!(apply_linear(m, &zero).unwrap(), zero);
        }
        let x = FFElement::from_index(&f9, 5).unwrap();
        assert_eq!(apply_linear(&id, &x).unwrap(), x);

        let f25 = make_ext_field(5, 2).unwrap();
        assert_eq!(one_stabilizer_maps(&f25).unwrap().len(), 20);
        let f7 = make_prime_field(7).unwrap();
        assert!(one_stabilizer_maps(&f7).is_err());
    }

    #[test]
    fn linear_map_validation() {
        let f9 = make_ext_field(3, 2).unwrap();
        assert!(LinearMap::new(&f9, vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(LinearMap::new(&f9, vec![vec![1, 3], vec![0, 1]]).is_err());
        let f7 = make_prime_field(7).unwrap();
        let m = LinearMap::identity(&f9).unwrap();
        assert_eq!(
            m.apply(&FFElement::one(&f7)).unwrap_err(),
            FieldError::FieldMismatch
        );
    }

    #[test]
    fn field_json_round_trip() {
        let f25 = make_ext_field(5, 2).unwrap();
        let j = FieldJson::from(&*f25);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"p":5,"k":2,"modulus":[2,0,1],"generator":[1,1]}"#);
        let back: FieldJson = serde_json::from_str(&text).unwrap();
        assert_eq!(*back.to_field().unwrap(), *f25);
    }
}
