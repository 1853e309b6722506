//! Intertwining codes `C(A, B) = {X : A_i X = X B_i for all i}`.
//!
//! A code is stored as the RREF of its row-major vectorized basis, so two
//! codes are equal exactly when their stored bases are identical.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::canonical::{primary_decomposition, spectral_summary};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::Matrix;
use crate::partition::{conjprod, Partition};
use crate::poly::{poly_gcd, Poly};

/// Default cap on the number of codewords enumerated for a distance search.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwiningCode {
    field: Field,
    r: usize,
    s: usize,
    basis: Vec<Matrix>,
    d: Option<usize>,
    d_budget: Option<u64>,
}

/// `[n, k, d]` together with the rate `k / n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub rate: Ratio<usize>,
}

impl CodeParams {
    pub fn satisfies_singleton(&self) -> bool {
        self.d + self.k <= self.n + 1
    }
}

impl IntertwiningCode {
    /// The span of `generators`, in canonical form.
    pub fn span(field: &Field, r: usize, s: usize, generators: &[Matrix]) -> Result<Self> {
        let n = r * s;
        let mut rows = Vec::with_capacity(generators.len() * n);
        for g in generators {
            if g.shape() != (r, s) {
                return Err(Error::SizeMismatch(format!("generator is {:?}, expected {r}x{s}", g.shape())));
            }
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
            rows.extend_from_slice(g.data());
        }
        let red = Matrix::from_vec(field, generators.len(), n, rows)?.rref();
        let basis = (0..red.rank)
            .map(|i| Matrix::from_vec(field, r, s, red.matrix.row(i).to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntertwiningCode { field: field.clone(), r, s, basis, d: None, d_budget: None })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Code length `r * s`.
    pub fn n(&self) -> usize {
        self.r * self.s
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn d(&self) -> Option<usize> {
        self.d
    }

    pub fn d_budget(&self) -> Option<u64> {
        self.d_budget
    }

    /// Attaches a previously computed distance without re-checking it.
    pub fn with_recorded_distance(mut self, d: Option<usize>, budget: Option<u64>) -> Self {
        self.d = d;
        self.d_budget = budget;
        self
    }

    /// Computes and records the minimum distance.
    pub fn with_distance(mut self, budget: u64) -> Result<Self> {
        self.d = Some(min_distance(&self, budget)?.d);
        self.d_budget = Some(budget);
        Ok(self)
    }

    pub fn params(&self) -> Option<CodeParams> {
        let (n, k, d) = (self.n(), self.k(), self.d?);
        Some(CodeParams { n, k, d, rate: Ratio::new(k, n) })
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        if x.shape() != (self.r, self.s) || x.field() != &self.field {
            return false;
        }
        let mut gens = self.basis.clone();
        gens.push(x.clone());
        IntertwiningCode::span(&self.field, self.r, self.s, &gens).is_ok_and(|c| c.k() == self.k())
    }

    /// `{X^T : X in C}`, which is `C(B^T, A^T)` when `C = C(A, B)`.
    pub fn transpose(&self) -> IntertwiningCode {
        let gens: Vec<Matrix> = self.basis.iter().map(Matrix::transpose).collect();
        IntertwiningCode::span(&self.field, self.s, self.r, &gens)
            .expect("transposed generators are well-formed")
            .with_recorded_distance(self.d, self.d_budget)
    }
}

fn check_pairs(a_list: &[Matrix], b_list: &[Matrix]) -> Result<(Field, usize, usize)> {
    if a_list.len() != b_list.len() {
        return Err(Error::LengthMismatch { a: a_list.len(), b: b_list.len() });
    }
    let (Some(a0), Some(b0)) = (a_list.first(), b_list.first()) else {
        return Err(Error::EmptyList);
    };
    let field = a0.field().clone();
    let (r, s) = (a0.require_square()?, b0.require_square()?);
    for m in a_list.iter().chain(b_list) {
        m.require_square()?;
        if *m.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    if let Some(bad) = a_list.iter().find(|a| a.rows() != r) {
        return Err(Error::SizeMismatch(format!("left matrices are {r}x{r} and {0}x{0}", bad.rows())));
    }
    if let Some(bad) = b_list.iter().find(|b| b.rows() != s) {
        return Err(Error::SizeMismatch(format!("right matrices are {s}x{s} and {0}x{0}", bad.rows())));
    }
    Ok((field, r, s))
}

fn check_single(a: &Matrix, b: &Matrix) -> Result<(usize, usize)> {
    let r = a.require_square()?;
    let s = b.require_square()?;
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    Ok((r, s))
}

/// Solves `A_i X = X B_i` by elimination on the `r * s` entries of `X`.
///
/// This is the ground truth every closed-form result is checked against.
pub fn intertwiner_basis(a_list: &[Matrix], b_list: &[Matrix]) -> Result<IntertwiningCode> {
    let (field, r, s) = check_pairs(a_list, b_list)?;
    let n = r * s;
    let f = &field;
    let mut system = Matrix::zeros(f, a_list.len() * n, n);
    for (pair, (a, b)) in a_list.iter().zip(b_list).enumerate() {
        for i in 0..r {
            for j in 0..s {
                let row = pair * n + i * s + j;
                // (AX)_{ij} = sum_l a_{il} x_{lj}
                for l in 0..r {
                    let col = l * s + j;
                    system.set(row, col, f.add(system.get(row, col), a.get(i, l)));
                }
                // (XB)_{ij} = sum_l x_{il} b_{lj}
                for l in 0..s {
                    let col = i * s + l;
                    system.set(row, col, f.sub(system.get(row, col), b.get(l, j)));
                }
            }
        }
    }
    let kernel: Vec<Matrix> =
        system.nullspace().into_iter().map(|v| Matrix::from_vec(f, r, s, v.data().to_vec())).collect::<Result<_>>()?;
    IntertwiningCode::span(f, r, s, &kernel)
}

/// Contribution of one shared irreducible factor to `dim C(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorContribution {
    pub irr: Poly,
    pub deg: usize,
    pub lambda: Partition,
    pub mu: Partition,
    pub contribution: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaDimension {
    pub total: usize,
    pub ledger: Vec<FactorContribution>,
}

/// `dim C(A, B)` from the primary decompositions of `A` and `B`: each shared
/// irreducible `p` contributes `deg(p) * sum_i lambda'_i mu'_i`.
pub fn dim_via_formula(a: &Matrix, b: &Matrix, seed: u64) -> Result<FormulaDimension> {
    check_single(a, b)?;
    let da = primary_decomposition(a, seed)?;
    let db = primary_decomposition(b, seed)?;
    let ledger: Vec<FactorContribution> = da
        .components
        .iter()
        .filter_map(|ca| {
            let cb = db.component(&ca.irr)?;
            let lambda = ca.partition.clone();
            let mu = cb.partition.clone();
            let contribution = ca.deg * conjprod(&[lambda.clone(), mu.clone()]).ok()?;
            Some(FactorContribution { irr: ca.irr.clone(), deg: ca.deg, lambda, mu, contribution })
        })
        .collect();
    let total = ledger.iter().map(|c| c.contribution).sum();
    Ok(FormulaDimension { total, ledger })
}

/// `C(A, B) = {0}` exactly when the characteristic polynomials are coprime.
pub fn is_zero_code_fast(a: &Matrix, b: &Matrix) -> Result<bool> {
    Ok(char_gcd(a, b)?.is_one())
}

/// `gcd(c_A, c_B)`.
pub fn char_gcd(a: &Matrix, b: &Matrix) -> Result<Poly> {
    check_single(a, b)?;
    poly_gcd(&a.charpoly()?, &b.charpoly()?)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub d: usize,
    /// Number of nonzero codewords examined.
    pub enumerated: u64,
}

fn codeword_count(q: u32, k: usize) -> u128 {
    (0..k).try_fold(1u128, |acc, _| acc.checked_mul(q as u128)).unwrap_or(u128::MAX)
}

/// Exhaustive minimum Hamming weight over all `q^k - 1` nonzero codewords.
///
/// Codewords are indexed by their coefficient vectors read as base-`q`
/// numerals (coefficient of basis element 0 least significant). Disjoint index
/// ranges are searched in parallel; the result does not depend on scheduling.
pub fn min_distance(code: &IntertwiningCode, budget: u64) -> Result<MinDistance> {
    let k = code.k();
    if k == 0 {
        return Err(Error::ZeroCode);
    }
    let f = code.field();
    let q = f.q();
    let required = codeword_count(q, k) - 1;
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let total = required as u64;
    let basis: Vec<&[Elem]> = code.basis.iter().map(Matrix::data).collect();
    let n = code.n();

    const MIN_CHUNK: u64 = 1 << 12;
    let chunks = (total / MIN_CHUNK).clamp(1, 8 * rayon::current_num_threads() as u64);
    let size = total.div_ceil(chunks);
    let d = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = 1 + c * size;
            let end = (start + size).min(total + 1);
            if start >= end {
                return usize::MAX;
            }
            let mut digits = vec![Elem::ZERO; k];
            let mut rest = start;
            for d in digits.iter_mut() {
                *d = Elem((rest % q as u64) as u32);
                rest /= q as u64;
            }
            let mut word = vec![Elem::ZERO; n];
            for (coef, b) in digits.iter().zip(&basis) {
                axpy(f, &mut word, *coef, b);
            }
            let mut best = weight(&word);
            for _ in start + 1..end {
                for (i, digit) in digits.iter_mut().enumerate() {
                    let old = *digit;
                    let new = if old.0 + 1 < q { Elem(old.0 + 1) } else { Elem::ZERO };
                    *digit = new;
                    axpy(f, &mut word, f.sub(new, old), basis[i]);
                    if !new.is_zero() {
                        break;
                    }
                }
                best = best.min(weight(&word));
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(MinDistance { d, enumerated: total })
}

fn axpy(f: &Field, acc: &mut [Elem], c: Elem, x: &[Elem]) {
    if c.is_zero() {
        return;
    }
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = f.add(*a, f.mul(c, b));
    }
}

fn weight(word: &[Elem]) -> usize {
    word.iter().filter(|e| !e.is_zero()).count()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: usize,
    pub hi: usize,
}

impl Bounds {
    pub fn contains(&self, dim: usize) -> bool {
        self.lo <= dim && dim <= self.hi
    }
}

/// `(r - rk A)(s - rk B) <= dim <= (r - rk A)(s - rk B) + rk A * rk B`.
pub fn bounds_rank(a: &Matrix, b: &Matrix) -> Result<Bounds> {
    let (r, s) = check_single(a, b)?;
    let (ra, rb) = (a.rank(), b.rank());
    let lo = (r - ra) * (s - rb);
    Ok(Bounds { lo, hi: lo + ra * rb })
}

/// Eigenspace bounds: summed over shared irreducible factors `p`,
/// `deg p * k_p(A) k_p(B) <= dim <= deg p * m_p(A) m_p(B)`.
pub fn bounds_spectral(a: &Matrix, b: &Matrix, seed: u64) -> Result<Bounds> {
    check_single(a, b)?;
    let sa = spectral_summary(a, seed)?;
    let sb = spectral_summary(b, seed)?;
    let mut bounds = Bounds { lo: 0, hi: 0 };
    for ea in &sa {
        if let Some(eb) = sb.iter().find(|eb| eb.irr == ea.irr) {
            bounds.lo += ea.deg * ea.eigendim_per_root * eb.eigendim_per_root;
            bounds.hi += ea.deg * ea.gendim_per_root * eb.gendim_per_root;
        }
    }
    Ok(bounds)
}

/// `R^{-1} C S`, which equals `C(R^{-1} A R, S^{-1} B S)` when `C = C(A, B)`.
/// The minimum distance is not preserved and is dropped.
pub fn code_conjugate(code: &IntertwiningCode, r_mat: &Matrix, s_mat: &Matrix) -> Result<IntertwiningCode> {
    if r_mat.shape() != (code.r, code.r) || s_mat.shape() != (code.s, code.s) {
        return Err(Error::SizeMismatch(format!("conjugators must be {0}x{0} and {1}x{1}", code.r, code.s)));
    }
    if r_mat.field() != code.field() || s_mat.field() != code.field() {
        return Err(Error::FieldMismatch);
    }
    let r_inv = r_mat.inverse()?;
    s_mat.inverse()?;
    let gens: Vec<Matrix> = code.basis.iter().map(|x| r_inv.mul(x).mul(s_mat)).collect();
    IntertwiningCode::span(code.field(), code.r, code.s, &gens)
}

/// `[A_i X - X B_i]`; all zero exactly when `X` is a codeword.
pub fn syndrome(a_list: &[Matrix], b_list: &[Matrix], x: &Matrix) -> Result<Vec<Matrix>> {
    let (field, r, s) = check_pairs(a_list, b_list)?;
    if x.shape() != (r, s) {
        return Err(Error::SizeMismatch(format!("word is {:?}, expected {r}x{s}", x.shape())));
    }
    if *x.field() != field {
        return Err(Error::FieldMismatch);
    }
    Ok(a_list.iter().zip(b_list).map(|(a, b)| a.mul(x).sub(&x.mul(b))).collect())
}
