//! Univariate polynomials over GF(q) and their factorization.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Dense polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.0) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "[{c}]t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "[{c}]t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(field: &Field) -> Poly {
        Poly::new(field, vec![Elem::ZERO, Elem::ONE])
    }

    /// `t - root`.
    pub fn linear(field: &Field, root: Elem) -> Poly {
        Poly::new(field, vec![field.neg(root), Elem::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial counted as degree 0.
    fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Elem::ONE]
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Elem::ONE
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Sort key: degree first, then coefficients from the top down.
    pub fn sort_key(&self) -> (usize, Vec<Elem>) {
        (self.coeffs.len(), self.coeffs.iter().rev().copied().collect())
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut exp: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = divisor.deg0();
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], inv_lead);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect())
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, mut exp: u64, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Deterministic irreducibility test (Rabin).
    pub fn is_irreducible(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let m = self.deg0();
        if m == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let q = self.field.q() as u64;
        let t = Poly::t(&self.field).rem(self)?;
        let mut frob = vec![t.clone()];
        for i in 1..=m {
            frob.push(frob[i - 1].pow_mod(q, self)?);
        }
        if frob[m] != t {
            return Ok(false);
        }
        for l in prime_divisors(m) {
            if !gcd(&frob[m / l].sub(&t), self).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Square-free decomposition of the monic part, sorted by multiplicity.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut parts = squarefree_monic(&self.monic());
        parts.sort_by_key(|(_, m)| *m);
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (g, m) in parts {
            match merged.last_mut() {
                Some((h, mm)) if *mm == m => *h = h.mul(&g),
                _ => merged.push((g, m)),
            }
        }
        Ok(merged)
    }

    /// Complete factorization into monic irreducibles.
    ///
    /// Equal-degree splitting is randomized; `seed` fixes the generator, and the
    /// sorted result does not depend on it.
    pub fn factor(&self, seed: u64) -> Result<FactoredPolynomial> {
        match self.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            _ => {}
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors = Vec::new();
        for (g, mult) in self.squarefree_decomposition()? {
            for (h, d) in distinct_degree(&g)? {
                for irr in equal_degree(&h, d, &mut rng)? {
                    factors.push((irr, mult));
                }
            }
        }
        factors.sort_by_key(|(p, _)| p.sort_key());
        Ok(FactoredPolynomial { unit: self.lead(), factors })
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Monic gcd; `gcd(0, 0) = 0`. Both arguments must share a field.
pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    a.monic()
}

/// Monic greatest common divisor.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(gcd(f, g))
}

fn pth_root_poly(f: &Poly) -> Poly {
    let field = &f.field;
    let p = field.p() as usize;
    let coeffs = f.coeffs.iter().step_by(p).map(|&c| field.pth_root(c)).collect();
    Poly::new(field, coeffs)
}

fn squarefree_monic(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.deg0() == 0 {
        return out;
    }
    let mut c = gcd(f, &f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.deg0() > 0 {
        let y = gcd(&w, &c);
        let z = w.div_exact(&y);
        if z.deg0() > 0 {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y);
        w = y;
    }
    if c.deg0() > 0 {
        let p = f.field.p() as usize;
        for (g, m) in squarefree_monic(&pth_root_poly(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = f.field.q() as u64;
    let t = Poly::t(&f.field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut d = 1;
    while rest.deg0() >= 2 * d {
        h = h.pow_mod(q, &rest)?;
        let g = gcd(&h.sub(&t), &rest);
        if g.deg0() > 0 {
            rest = rest.div_exact(&g);
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg0() > 0 {
        let d = rest.deg0();
        out.push((rest, d));
    }
    Ok(out)
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.deg0();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = &f.field;
    let q = field.q() as u64;
    loop {
        let a = Poly::new(field, (0..n).map(|_| gen_elem(field, rng)).collect());
        if a.deg0() == 0 {
            continue;
        }
        let splitter = if field.p() == 2 {
            // absolute trace: sum of a^(2^i) for i < e*d
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..(field.e() as usize * d) {
                term = term.mul(&term).rem(f)?;
                acc = acc.add(&term);
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q - 1)/2)
            let mut term = a.rem(f)?;
            let mut norm = term.clone();
            for _ in 1..d {
                term = term.pow_mod(q, f)?;
                norm = norm.mul(&term).rem(f)?;
            }
            norm.pow_mod((q - 1) / 2, f)?.sub(&Poly::one(field))
        };
        let g = gcd(&splitter, f);
        if g.deg0() > 0 && g.deg0() < n {
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&f.div_exact(&g), d, rng)?);
            return Ok(out);
        }
    }
}

fn gen_elem(field: &Field, rng: &mut ChaCha8Rng) -> Elem {
    Elem(rng.gen_range(0..field.q()))
}

/// `unit * prod(factor^mult)`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPolynomial {
    pub unit: Elem,
    pub factors: Vec<(Poly, usize)>,
}

impl FactoredPolynomial {
    pub fn expand(&self, field: &Field) -> Poly {
        self.factors.iter().fold(Poly::constant(field, self.unit), |acc, (p, m)| acc.mul(&p.pow(*m as u64)))
    }

    pub fn multiplicity(&self, irr: &Poly) -> usize {
        self.factors.iter().find(|(p, _)| p == irr).map_or(0, |(_, m)| *m)
    }
}
