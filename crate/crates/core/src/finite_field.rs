//! Finite fields `F_q`, `q = p^e`, with integer-coded elements.
//!
//! Every element is identified by a code in `[0, q)`. The base-`p` digits of
//! the code, lowest first, are the coefficients of the element's
//! representative polynomial modulo the field's defining polynomial. The
//! code `0` is the additive identity and `1` the multiplicative identity.
//!
//! The defining polynomial of `F_{p^e}` is the monic irreducible of degree
//! `e` whose lower coefficients, read as a base-`p` integer, are smallest.
//! Every run therefore builds the same field and prints the same codes.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

/// Default cap on the field size.
pub const DEFAULT_MAX_FIELD: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{e} exceeds the cap {cap}")]
    TooLarge { p: u64, e: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("code {code} is not an element of a field with {q} elements")]
    InvalidCode { code: u64, q: u64 },
    #[error("{k} does not divide q - 1 = {units}")]
    NotADivisor { k: u64, units: u64 },
}

/// An element of some finite field, stored as its integer code.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub(crate) fn from_code(code: u32) -> Self {
        FieldElement(code)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Discrete log/exp tables for extension fields. `exp` is doubled so a sum
/// of two logs indexes it without reduction.
#[derive(Clone)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field `F_{p^e}`.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial, lowest coefficient first, length `e + 1`.
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Builds `F_{p^e}` under the default size cap.
pub fn make_field(p: u64, e: u32) -> Result<Field, FieldError> {
    make_field_capped(p, e, DEFAULT_MAX_FIELD)
}

/// Builds `F_{p^e}`, rejecting fields with more than `cap` elements.
pub fn make_field_capped(p: u64, e: u32, cap: u64) -> Result<Field, FieldError> {
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let too_large = FieldError::TooLarge { p, e, cap };
    let q = p.checked_pow(e).ok_or(too_large.clone())?;
    if q > cap || q > u64::from(u32::MAX) {
        return Err(too_large);
    }
    let p = p as u32;
    let q = q as u32;
    if e == 1 {
        return Ok(Field {
            p,
            e,
            q,
            modulus: vec![0, 1],
            tables: None,
        });
    }
    let modulus = smallest_irreducible(p, e);
    let mut field = Field {
        p,
        e,
        q,
        modulus,
        tables: None,
    };
    field.tables = Some(field.build_tables());
    Ok(field)
}

impl Field {
    /// Builds the field with `q` elements, factoring `q` as a prime power.
    pub fn with_order(q: u64, cap: u64) -> Result<Field, FieldError> {
        let (p, e) = arith::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        make_field_capped(p, e, cap)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, code: u64) -> Result<FieldElement, FieldError> {
        if code < u64::from(self.q) {
            Ok(FieldElement(code as u32))
        } else {
            Err(FieldError::InvalidCode {
                code,
                q: u64::from(self.q),
            })
        }
    }

    /// All `q` elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(i64::from(self.p)) as u32)
    }

    pub fn bind(&self, code: u64) -> Result<Fq<'_>, FieldError> {
        Ok(Fq {
            field: self,
            value: self.element(code)?,
        })
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            let s = a.0 + b.0;
            FieldElement(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else {
            self.digitwise(a.0, b.0, |x, y| (x + y) % self.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.e == 1 {
            FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else if self.p == 2 {
            a
        } else {
            self.digitwise(a.0, 0, |x, _| (self.p - x) % self.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            None => FieldElement(((u64::from(a.0) * u64::from(b.0)) % u64::from(self.p)) as u32),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            None => self.pow(a, u64::from(self.p) - 2),
            Some(t) => {
                let units = self.q - 1;
                FieldElement(t.exp[((units - t.log[a.0 as usize]) % units) as usize])
            }
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(order_in_cyclic_group(u64::from(self.q) - 1, |n| {
            self.pow(a, n) == FieldElement::ONE
        }))
    }

    /// The generator of `F_q^*` with the smallest code.
    pub fn primitive_element(&self) -> FieldElement {
        let units = u64::from(self.q) - 1;
        self.elements()
            .skip(1)
            .find(|&x| self.multiplicative_order(x) == Ok(units))
            .expect("the unit group of a finite field is cyclic")
    }

    /// The unique subgroup of `F_q^*` with `k` elements.
    pub fn subgroup_of_order(&self, k: u64) -> Result<MultiplicativeSubgroup, FieldError> {
        let units = u64::from(self.q) - 1;
        if k == 0 || units % k != 0 {
            return Err(FieldError::NotADivisor { k, units });
        }
        let generator = self.pow(self.primitive_element(), units / k);
        let mut elements = Vec::with_capacity(k as usize);
        let mut x = FieldElement::ONE;
        for _ in 0..k {
            elements.push(x);
            x = self.mul(x, generator);
        }
        elements.sort_unstable();
        Ok(MultiplicativeSubgroup {
            order: k,
            generator,
            elements,
        })
    }

    fn digitwise(&self, mut a: u32, mut b: u32, op: impl Fn(u32, u32) -> u32) -> FieldElement {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            out += op(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    fn digits(&self, mut code: u32) -> Vec<u32> {
        (0..self.e)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Schoolbook product modulo the defining polynomial. Only used to
    /// bootstrap the log tables.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = u64::from(self.p);
        let e = self.e as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        for top in (e..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (k, &m) in self.modulus[..e].iter().enumerate() {
                let idx = top - e + k;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
            prod[top] = 0;
        }
        let reduced: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.undigits(&reduced)
    }

    fn build_tables(&self) -> LogTables {
        let units = self.q - 1;
        let slow_pow = |a: u32, mut n: u64| {
            let (mut base, mut acc) = (a, 1u32);
            while n > 0 {
                if n & 1 == 1 {
                    acc = self.poly_mul(acc, base);
                }
                base = self.poly_mul(base, base);
                n >>= 1;
            }
            acc
        };
        let generator = (2..self.q)
            .find(|&x| {
                order_in_cyclic_group(u64::from(units), |n| slow_pow(x, n) == 1) == u64::from(units)
            })
            .expect("the unit group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * units as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..units {
            exp[i as usize] = x;
            exp[(i + units) as usize] = x;
            log[x as usize] = i;
            x = self.poly_mul(x, generator);
        }
        LogTables { exp, log }
    }
}

/// Order of an element in a cyclic group of order `group_order`, given a
/// predicate telling whether the element raised to `n` is the identity.
fn order_in_cyclic_group(group_order: u64, is_identity: impl Fn(u64) -> bool) -> u64 {
    let mut order = group_order;
    for (r, _) in arith::factorize(group_order) {
        while order.is_multiple_of(r) && is_identity(order / r) {
            order /= r;
        }
    }
    order
}

/// Monic irreducible polynomial of degree `e` over `F_p` whose lower
/// coefficients have the smallest base-`p` code.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = u64::from(p).pow(e);
    (0..count)
        .map(|code| monic_from_code(p, e, code))
        .find(|f| is_irreducible(p, f))
        .expect("irreducible polynomials exist in every degree")
}

fn monic_from_code(p: u32, deg: u32, mut code: u64) -> Vec<u32> {
    let mut f: Vec<u32> = (0..deg)
        .map(|_| {
            let d = (code % u64::from(p)) as u32;
            code /= u64::from(p);
            d
        })
        .collect();
    f.push(1);
    f
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most `deg(f) / 2`.
fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = (f.len() - 1) as u32;
    for k in 1..=deg / 2 {
        for code in 0..u64::from(p).pow(k) {
            let g = monic_from_code(p, k, code);
            if poly_rem_is_zero(p, f, &g) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `g` divides `f` over `F_p`.
fn poly_rem_is_zero(p: u32, f: &[u32], g: &[u32]) -> bool {
    let p64 = u64::from(p);
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    let dg = g.len() - 1;
    for top in (dg..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (k, &m) in g.iter().enumerate() {
            let idx = top - dg + k;
            r[idx] = (r[idx] + (p64 - c) * u64::from(m)) % p64;
        }
    }
    r[..dg].iter().all(|&c| c == 0)
}

/// A cyclic subgroup of `F_q^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeSubgroup {
    order: u64,
    generator: FieldElement,
    elements: Vec<FieldElement>,
}

impl MultiplicativeSubgroup {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Elements sorted by code.
    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<FieldElement> {
        self.elements
    }
}

/// An element paired with its field, for arithmetic that must reject
/// operands from different fields.
#[derive(Debug, Clone, Copy)]
pub struct Fq<'f> {
    field: &'f Field,
    value: FieldElement,
}

// add, sub and mul return a Result, so the operator traits do not fit.
#[allow(clippy::should_implement_trait)]
impl<'f> Fq<'f> {
    pub fn value(self) -> FieldElement {
        self.value
    }

    pub fn field(self) -> &'f Field {
        self.field
    }

    fn same_field(self, other: Fq<'_>) -> Result<(), FieldError> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(self, value: FieldElement) -> Fq<'f> {
        Fq {
            field: self.field,
            value,
        }
    }

    pub fn add(self, other: Fq<'_>) -> Result<Fq<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(self, other: Fq<'_>) -> Result<Fq<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(self, other: Fq<'_>) -> Result<Fq<'f>, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(self) -> Result<Fq<'f>, FieldError> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(self, n: u64) -> Fq<'f> {
        self.with(self.field.pow(self.value, n))
    }
}
