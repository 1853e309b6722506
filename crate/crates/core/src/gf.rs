//! Finite fields GF(p^e).
//!
//! A field is a cheap, shareable handle ([`Field`]) and its elements are plain
//! canonical encodings ([`Elem`]). The element with coefficient vector
//! `(c_0, ..., c_{e-1})` over the generator `x` has encoding `sum c_i p^i`, so
//! the canonical order starts `0, 1, ..., p - 1, x, x + 1, ...`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// Extension fields up to this order get exp/log tables for multiplication.
const TABLE_LIMIT: u32 = 1 << 16;

/// Canonical integer encoding of a field element.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Parameters of GF(p^e). Immutable once built.
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Ascending coefficients of the monic modulus, length `e + 1`; empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

/// Shared handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{}, {:?})", self.0.p, self.0.e, self.0.modulus)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn decode_digits(p: u32, e: u32, a: u32) -> Vec<u32> {
    let mut digits = Vec::with_capacity(e as usize);
    let mut x = a;
    for _ in 0..e {
        digits.push(x % p);
        x /= p;
    }
    digits
}

fn encode_digits(p: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64) as u32
}

/// Schoolbook product in GF(p)[t]/(modulus).
fn poly_mul_mod(p: u32, e: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    let pp = p as u64;
    let da = decode_digits(p, e, a);
    let db = decode_digits(p, e, b);
    let e = e as usize;
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % pp;
        }
    }
    for deg in (e..2 * e - 1).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus[..e].iter().enumerate() {
            let slot = &mut prod[deg - e + i];
            *slot = (*slot + c * (pp - m as u64)) % pp;
        }
        prod[deg] = 0;
    }
    let digits: Vec<u32> = prod[..e].iter().map(|&d| d as u32).collect();
    encode_digits(p, &digits)
}

fn build_tables(p: u32, e: u32, q: u32, modulus: &[u32]) -> Option<LogTables> {
    let order = q - 1;
    for g in 2..q {
        let mut exp = Vec::with_capacity(order as usize);
        let mut x = 1u32;
        let mut primitive = true;
        for i in 0..order {
            if i > 0 && x == 1 {
                primitive = false;
                break;
            }
            exp.push(x);
            x = poly_mul_mod(p, e, modulus, x, g);
        }
        if primitive && x == 1 {
            let mut log = vec![0u32; q as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            return Some(LogTables { exp, log });
        }
    }
    None
}

impl Field {
    /// Builds GF(p^e).
    ///
    /// For `e > 1` without an explicit modulus, the modulus is the least monic
    /// irreducible of degree `e` in ascending-coefficient encoding order. A
    /// modulus passed for `e = 1` is ignored.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::BadModulus("extension degree must be at least 1".into()));
        }
        let q = (0..e).try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&v| v <= MAX_ORDER));
        let q = q.ok_or(Error::FieldTooLarge { p, e })?;
        let (p, q) = (p as u32, q as u32);
        if e == 1 {
            return Ok(Field(Arc::new(FieldSpec { p, e, q, modulus: Vec::new(), tables: None })));
        }
        let prime = Field::prime(p as u64)?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 {
                    return Err(Error::BadModulus(format!("expected {} coefficients, got {}", e + 1, m.len())));
                }
                if m.iter().any(|&c| c >= p as u64) {
                    return Err(Error::BadModulus("coefficient out of range".into()));
                }
                if m[e as usize] != 1 {
                    return Err(Error::BadModulus("modulus is not monic".into()));
                }
                let coeffs: Vec<u32> = m.iter().map(|&c| c as u32).collect();
                let f = Poly::new(&prime, coeffs.iter().map(|&c| Elem(c)).collect());
                if !f.is_irreducible()? {
                    return Err(Error::BadModulus("modulus is reducible".into()));
                }
                coeffs
            }
            None => least_irreducible(&prime, e)?,
        };
        let tables = if q <= TABLE_LIMIT { build_tables(p, e, q, &modulus) } else { None };
        Ok(Field(Arc::new(FieldSpec { p, e, q, modulus, tables })))
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, e) = split_prime_power(q).ok_or(Error::NotPrime(q))?;
        Field::new(p, e, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    /// All elements in ascending canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        decode_digits(self.0.p, self.0.e, a.0)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!("bad coefficient vector {coeffs:?}")));
        }
        Ok(Elem(encode_digits(self.0.p, coeffs)))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let FieldSpec { p, e, .. } = *self.0;
        if e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            Elem(if s >= p as u64 { s - p as u64 } else { s } as u32)
        } else if p == 2 {
            Elem(a.0 ^ b.0)
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut out = 0u64;
            let mut place = 1u64;
            for _ in 0..e {
                out += ((x % p + y % p) % p) as u64 * place;
                x /= p;
                y /= p;
                place *= p as u64;
            }
            Elem(out as u32)
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let FieldSpec { p, e, .. } = *self.0;
        if e == 1 {
            Elem(if a.0 == 0 { 0 } else { p - a.0 })
        } else if p == 2 {
            a
        } else {
            let digits: Vec<u32> = self.coeffs(a).into_iter().map(|d| (p - d) % p).collect();
            Elem(encode_digits(p, &digits))
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let spec = &*self.0;
        if spec.e == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % spec.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &spec.tables {
            Some(t) => {
                let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                Elem(t.exp[(s % (spec.q as u64 - 1)) as usize])
            }
            None => Elem(poly_mul_mod(spec.p, spec.e, &spec.modulus, a.0, b.0)),
        }
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        if self.0.e == 1 {
            return Elem(mod_pow(a.0 as u64, exp, self.0.p as u64) as u32);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let spec = &*self.0;
        Ok(match &spec.tables {
            Some(t) => {
                let order = spec.q - 1;
                Elem(t.exp[((order - t.log[a.0 as usize]) % order) as usize])
            }
            None => self.pow(a, spec.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The unique `y` with `y^p = a`.
    pub fn pth_root(&self, a: Elem) -> Elem {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }
}

/// Splits `q = p^e`, or returns `None` when `q` is not a prime power.
pub fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Parses a field order written as `q` or `p^e`.
pub fn parse_order(text: &str) -> Result<Field> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad field order '{text}'"));
    match text.split_once('^') {
        Some((p, e)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            Field::new(p, e, None)
        }
        None => Field::with_order(text.parse().map_err(|_| bad())?),
    }
}

fn least_irreducible(prime: &Field, e: u32) -> Result<Vec<u32>> {
    let p = prime.p() as u64;
    let count = p.pow(e);
    for code in 0..count {
        let mut coeffs = decode_digits(p as u32, e, code as u32);
        coeffs.push(1);
        let f = Poly::new(prime, coeffs.iter().map(|&c| Elem(c)).collect());
        if f.is_irreducible()? {
            return Ok(coeffs);
        }
    }
    Err(Error::InternalInconsistency(format!("no irreducible of degree {e} over GF({p})")))
}

/// An element bundled with its field, for checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::Parse(format!("element {value} outside {field:?}")));
        }
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Self> {
        Ok(FieldElement { field: field.clone(), value: field.from_coeffs(coeffs)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn creation() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!((f2.p(), f2.e(), f2.q()), (2, 1, 2));
        let f4 = Field::new(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn least_quadratic_over_gf2_is_unique_irreducible() {
        // t^2, t^2+1, t^2+t have roots in GF(2); t^2+t+1 does not.
        let roots = |c0: u32, c1: u32| (0..2u32).any(|x| (x * x + c1 * x + c0) % 2 == 0);
        let irreducible: Vec<_> = (0..4u32).filter(|&code| !roots(code % 2, code / 2)).collect();
        assert_eq!(irreducible, vec![3]);
        assert_eq!(Field::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn bad_moduli() {
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(3, 2, Some(&[1, 0, 2])), Err(Error::BadModulus(_))));
        assert!(Field::new(3, 2, Some(&[2, 2, 1])).is_ok());
        assert!(matches!(Field::new(2, 40, None), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn element_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.add(Elem(1), Elem(1)), Elem(0));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        let f4 = Field::with_order(4).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.coeffs(f4.mul(x, x)), vec![1, 1]);
        assert_eq!(f5.inv(Elem(0)), Err(Error::DivisionByZero));
        assert_eq!(f5.div(Elem(1), Elem(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn checked_elements() {
        let f5 = Field::prime(5).unwrap();
        let f7 = Field::prime(7).unwrap();
        let a = FieldElement::new(&f5, Elem(2)).unwrap();
        let b = FieldElement::new(&f7, Elem(2)).unwrap();
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.inv().unwrap().value(), Elem(3));
        assert!(FieldElement::new(&f5, Elem(5)).is_err());
        let z = FieldElement::new(&f5, Elem(0)).unwrap();
        assert_eq!(a.div(&z), Err(Error::DivisionByZero));
        let f9 = Field::with_order(9).unwrap();
        let y = FieldElement::from_coeffs(&f9, &[2, 1]).unwrap();
        assert_eq!(y.coeffs(), vec![2, 1]);
        assert_eq!(y.value(), Elem(5));
    }

    #[test]
    fn enumeration() {
        for q in [2u64, 3, 4] {
            let f = Field::with_order(q).unwrap();
            let all: Vec<u32> = f.elements().map(|a| a.0).collect();
            assert_eq!(all, (0..q as u32).collect::<Vec<_>>());
        }
        let f4 = Field::with_order(4).unwrap();
        let names: Vec<Vec<u32>> = f4.elements().map(|a| f4.coeffs(a)).collect();
        assert_eq!(names, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn table_and_schoolbook_multiplication_agree() {
        for q in [4u64, 8, 9, 25, 27] {
            let f = Field::with_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let slow = poly_mul_mod(f.p(), f.e(), f.modulus(), a.0, b.0);
                    assert_eq!(f.mul(a, b).0, slow);
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49] {
            let f = Field::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
                assert_eq!(f.pow(f.pth_root(a), f.p() as u64), a);
            }
        }
    }

    #[test]
    fn parse_orders() {
        assert_eq!(parse_order("3^2").unwrap().q(), 9);
        assert_eq!(parse_order("8").unwrap().e(), 3);
        assert!(parse_order("6").is_err());
        assert!(parse_order("x").is_err());
    }

    fn field_and_triple() -> impl Strategy<Value = (u64, u32, u32, u32)> {
        prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]).prop_flat_map(|q| {
            let q32 = q as u32;
            (Just(q), 0..q32, 0..q32, 0..q32)
        })
    }

    proptest! {
        #[test]
        fn field_axioms((q, a, b, c) in field_and_triple()) {
            let f = Field::with_order(q).unwrap();
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
            prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
        }

        #[test]
        fn encoding_round_trips((q, a, _b, _c) in field_and_triple()) {
            let f = Field::with_order(q).unwrap();
            let coeffs = f.coeffs(Elem(a));
            prop_assert_eq!(coeffs.len(), f.e() as usize);
            prop_assert_eq!(f.from_coeffs(&coeffs).unwrap(), Elem(a));
        }
    }
}
