//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the power basis `1, ζ_m, ..., ζ_m^(φ(m)-1)` with
//! arbitrary-precision rational coefficients, always reduced modulo the
//! cyclotomic polynomial `Φ_m`. Two elements are equal exactly when their
//! moduli and coefficient vectors agree.
//!
//! Per-modulus data (`Φ_m` and the reduced images of `ζ_m^e` for every
//! `e < m`) is computed once and memoized for the lifetime of the process.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("galois exponent {t} is not coprime to modulus {modulus}")]
    NotCoprime { t: i64, modulus: u64 },
    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{to}): {from} does not divide {to}")]
    NotDivisible { from: u64, to: u64 },
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("malformed coefficient: {0}")]
    BadCoefficient(String),
}

/// Memoized data for one modulus.
#[derive(Debug)]
pub struct CycloTables {
    modulus: u64,
    phi: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

impl CycloTables {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `φ(m)`, the dimension of `Q(ζ_m)` over `Q`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `Φ_m`, lowest degree first.
    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.phi
    }

    /// Power-basis coordinates of `ζ_m^e`.
    pub fn power(&self, e: u64) -> &[i64] {
        &self.powers[(e % self.modulus) as usize]
    }
}

fn table_cache() -> &'static Mutex<HashMap<u64, Arc<CycloTables>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloTables>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the memoized tables for `Q(ζ_m)`.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn tables(m: u64) -> Arc<CycloTables> {
    assert!(m > 0, "cyclotomic modulus must be positive");
    if let Some(t) = table_cache().lock().unwrap().get(&m) {
        return Arc::clone(t);
    }
    // Built outside the lock: building recurses into proper divisors.
    let built = Arc::new(build_tables(m));
    let mut cache = table_cache().lock().unwrap();
    Arc::clone(cache.entry(m).or_insert(built))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divides `num` by the monic polynomial `den` in place, asserting a zero remainder.
fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (dd..=nd).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &dj) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] = rem[idx]
                .checked_sub(c.checked_mul(dj).expect("cyclotomic coefficient overflow"))
                .expect("cyclotomic coefficient overflow");
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

fn build_tables(m: u64) -> CycloTables {
    let phi = if m == 1 {
        vec![-1, 1]
    } else {
        let mut poly = vec![0i64; m as usize + 1];
        poly[0] = -1;
        poly[m as usize] = 1;
        for d in divisors(m) {
            if d < m {
                poly = exact_div_monic(&poly, tables(d).cyclotomic_polynomial());
            }
        }
        poly
    };
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; deg];
    cur[0] = 1;
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by ζ_m: shift, then fold the overflow through Φ_m
        let top = cur[deg - 1];
        let mut next = vec![0i64; deg];
        next[1..deg].copy_from_slice(&cur[..(deg - 1)]);
        if top != 0 {
            for j in 0..deg {
                next[j] -= top * phi[j];
            }
        }
        cur = next;
    }
    CycloTables {
        modulus: m,
        phi,
        powers,
    }
}

/// The `m`-th cyclotomic polynomial, coefficients lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    tables(m).cyclotomic_polynomial().to_vec()
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `ζ_m^e` with `e` reduced modulo `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    modulus: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub fn new(modulus: u64, exponent: i64) -> Result<Self, CycloError> {
        if modulus == 0 {
            return Err(CycloError::ZeroModulus);
        }
        let exponent = exponent.rem_euclid(modulus as i64) as u64;
        Ok(RootOfUnity { modulus, exponent })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.modulus / self.modulus.gcd(&self.exponent)
    }

    /// The same root written over its exact order, `ζ_order^e'` with `gcd(e', order) = 1`.
    pub fn normalized(&self) -> Self {
        let g = self.modulus.gcd(&self.exponent);
        RootOfUnity {
            modulus: self.modulus / g,
            exponent: self.exponent / g,
        }
    }

    pub fn to_element(&self) -> CycloElement {
        CycloElement::root_of_unity(self.modulus, self.exponent as i64)
    }

    /// The root as an element of `Q(ζ_level)`; requires `modulus | level`.
    pub fn to_element_at(&self, level: u64) -> Result<CycloElement, CycloError> {
        self.to_element().embed(level)
    }
}

/// Canonical element of `Q(ζ_m)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CycloElementJson", into = "CycloElementJson")]
pub struct CycloElement {
    modulus: u64,
    coeffs: Vec<BigRational>,
}

impl CycloElement {
    pub fn zero(m: u64) -> Self {
        let deg = tables(m).degree();
        CycloElement {
            modulus: m,
            coeffs: vec![BigRational::zero(); deg],
        }
    }

    pub fn one(m: u64) -> Self {
        Self::from_integer(m, 1)
    }

    pub fn from_integer(m: u64, value: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_rational(m: u64, value: BigRational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = value;
        z
    }

    /// `ζ_m^e`.
    pub fn root_of_unity(m: u64, e: i64) -> Self {
        let t = tables(m);
        let e = e.rem_euclid(m as i64) as u64;
        Self::from_small(m, t.power(e))
    }

    fn from_small(m: u64, coeffs: &[i64]) -> Self {
        CycloElement {
            modulus: m,
            coeffs: coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// `Σ counts[e]·ζ_m^e`; `counts` may have any length, indices are read mod `m`.
    pub fn from_exponent_counts(m: u64, counts: &[i64]) -> Self {
        let t = tables(m);
        let mut acc = vec![0i64; t.degree()];
        for (e, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &pw) in acc.iter_mut().zip(t.power(e as u64)) {
                *a = a
                    .checked_add(c.checked_mul(pw).expect("coefficient overflow"))
                    .expect("coefficient overflow");
            }
        }
        Self::from_small(m, &acc)
    }

    /// Builds an element from canonical coordinates; the length must be `φ(m)`.
    pub fn from_coeffs(m: u64, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if m == 0 {
            return Err(CycloError::ZeroModulus);
        }
        let deg = tables(m).degree();
        if coeffs.len() != deg {
            return Err(CycloError::WrongLength {
                expected: deg,
                got: coeffs.len(),
            });
        }
        Ok(CycloElement { modulus: m, coeffs })
    }

    /// Reduces an arbitrary polynomial in `ζ_m` (coefficient of `ζ_m^i` at index `i`).
    pub fn from_polynomial(m: u64, poly: &[BigRational]) -> Self {
        let t = tables(m);
        let mut out = vec![BigRational::zero(); t.degree()];
        for (i, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            accumulate(&mut out, c, t.power(i as u64));
        }
        CycloElement {
            modulus: m,
            coeffs: out,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn check_modulus(&self, other: &Self) -> Result<(), CycloError> {
        if self.modulus != other.modulus {
            Err(CycloError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElement {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElement {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_modulus(other)?;
        let t = tables(self.modulus);
        let deg = t.degree();
        let mut prod = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let phi = t.cyclotomic_polynomial();
        for i in (deg..prod.len()).rev() {
            if prod[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[i]);
            for (j, &pj) in phi[..deg].iter().enumerate() {
                if pj != 0 {
                    prod[i - deg + j] -= &c * BigInt::from(pj);
                }
            }
        }
        prod.truncate(deg);
        Ok(CycloElement {
            modulus: self.modulus,
            coeffs: prod,
        })
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        CycloElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Image under the automorphism `ζ_m ↦ ζ_m^t`.
    pub fn galois(&self, t: i64) -> Result<Self, CycloError> {
        let m = self.modulus;
        let tr = t.rem_euclid(m as i64) as u64;
        if tr.gcd(&m) != 1 {
            return Err(CycloError::NotCoprime { t, modulus: m });
        }
        Ok(self.substitute(m, tr))
    }

    /// `Σ c_i ζ_target^(i·step)`.
    fn substitute(&self, target: u64, step: u64) -> Self {
        let t = tables(target);
        let mut out = vec![BigRational::zero(); t.degree()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                accumulate(&mut out, c, t.power((i as u64 * step) % target));
            }
        }
        CycloElement {
            modulus: target,
            coeffs: out,
        }
    }

    /// Complex conjugation, `ζ_m ↦ ζ_m^(-1)`.
    pub fn conjugate(&self) -> Self {
        self.substitute(self.modulus, self.modulus - 1)
    }

    /// Embeds into `Q(ζ_target)` via `ζ_m ↦ ζ_target^(target/m)`.
    pub fn embed(&self, target: u64) -> Result<Self, CycloError> {
        if target == 0 || target % self.modulus != 0 {
            return Err(CycloError::NotDivisible {
                from: self.modulus,
                to: target,
            });
        }
        if target == self.modulus {
            return Ok(self.clone());
        }
        Ok(self.substitute(target, target / self.modulus))
    }

    /// Value at `ζ_m = e^(2πi/m)` in double precision. Screening only.
    pub fn complex_eval(&self) -> Complex64 {
        let m = self.modulus as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / m;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// Finds `z = ζ^e` among the roots of unity of `Q(ζ_m)` (those are `±ζ_m^e`).
    ///
    /// The result is normalized so its modulus is its exact order.
    pub fn recognize_root_of_unity(&self) -> Option<RootOfUnity> {
        let m = self.modulus;
        let t = tables(m);
        // A root of unity has integer coordinates.
        if !self.is_integral() {
            return None;
        }
        let small: Vec<i64> = self
            .coeffs
            .iter()
            .map(|c| c.to_integer().to_i64())
            .collect::<Option<_>>()?;
        for e in 0..m {
            let pw = t.power(e);
            if pw == small.as_slice() {
                return Some(
                    RootOfUnity {
                        modulus: m,
                        exponent: e,
                    }
                    .normalized(),
                );
            }
            if pw.iter().zip(&small).all(|(a, b)| *a == -*b) {
                // -ζ_m^e = ζ_2m^(2e+m)
                return Some(
                    RootOfUnity {
                        modulus: 2 * m,
                        exponent: (2 * e + m) % (2 * m),
                    }
                    .normalized(),
                );
            }
        }
        None
    }
}

fn accumulate(out: &mut [BigRational], c: &BigRational, row: &[i64]) {
    for (o, &r) in out.iter_mut().zip(row) {
        match r {
            0 => {}
            1 => *o += c,
            -1 => *o -= c,
            _ => *o += c * BigInt::from(r),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&CycloElement> for &CycloElement {
            type Output = CycloElement;
            /// Panics on a modulus mismatch; use the `checked_*` form otherwise.
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                self.$checked(rhs).expect("cyclotomic modulus mismatch")
            }
        }
        impl std::ops::$tr<CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: CycloElement) -> CycloElement {
                (&self).$checked(&rhs).expect("cyclotomic modulus mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        -&self
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (i, mag.is_one()) {
                (0, _) => format!("{mag}"),
                (1, true) => format!("z{}", self.modulus),
                (1, false) => format!("{mag}*z{}", self.modulus),
                (_, true) => format!("z{}^{i}", self.modulus),
                (_, false) => format!("{mag}*z{}^{i}", self.modulus),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (sign, body)) in terms.iter().enumerate() {
            match (k, *sign) {
                (0, "+") => write!(f, "{body}")?,
                (0, _) => write!(f, "-{body}")?,
                _ => write!(f, " {sign} {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElement[{}]({})", self.modulus, self)
    }
}

/// Interchange form: decimal strings keep big coefficients exact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycloElementJson {
    pub modulus: u64,
    pub numerators: Vec<String>,
    pub denominators: Vec<String>,
}

impl From<CycloElement> for CycloElementJson {
    fn from(z: CycloElement) -> Self {
        CycloElementJson {
            modulus: z.modulus,
            numerators: z.coeffs.iter().map(|c| c.numer().to_string()).collect(),
            denominators: z.coeffs.iter().map(|c| c.denom().to_string()).collect(),
        }
    }
}

impl TryFrom<CycloElementJson> for CycloElement {
    type Error = CycloError;

    fn try_from(j: CycloElementJson) -> Result<Self, CycloError> {
        if j.numerators.len() != j.denominators.len() {
            return Err(CycloError::WrongLength {
                expected: j.numerators.len(),
                got: j.denominators.len(),
            });
        }
        let parse =
            |s: &str| BigInt::from_str(s).map_err(|_| CycloError::BadCoefficient(s.to_string()));
        let mut coeffs = Vec::with_capacity(j.numerators.len());
        for (n, d) in j.numerators.iter().zip(&j.denominators) {
            let d = parse(d)?;
            if d.is_zero() {
                return Err(CycloError::BadCoefficient("zero denominator".into()));
            }
            coeffs.push(BigRational::new(parse(n)?, d));
        }
        CycloElement::from_coeffs(j.modulus, coeffs)
    }
}
