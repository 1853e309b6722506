//! Intertwining codes with large minimum distance, built with a witness.
//!
//! Start from diagonal `A0, B0` whose code is `<E_11, ..., E_kk>`, then move
//! the code by `X -> R^{-1} X S`. Choosing the first `k` columns of `R^{-1}`
//! as indicator vectors of consecutive row blocks and the first `k` rows of
//! `S` as vectors with no zero entry makes `R^{-1} E_ll S` a matrix that is
//! fully supported on block `l` and zero elsewhere. Every nonzero codeword
//! then covers at least one whole block, giving distance `floor(r/k) * s`.

use std::fmt;

use crate::code::{intertwiner_basis, min_distance, IntertwiningCode};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::{Matrix, Orientation};

/// Output of the diagonal seed step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSeed {
    pub a0: Matrix,
    pub b0: Matrix,
    pub zetas: Vec<Elem>,
    /// Tail scalar of `A0`; absent when `k = r`.
    pub alpha: Option<Elem>,
    /// Tail scalar of `B0`; absent when `k = s`.
    pub beta: Option<Elem>,
}

/// `A0 = diag(z_1..z_k, alpha, ..)`, `B0 = diag(z_1..z_k, beta, ..)` with
/// scalars taken in canonical field order.
pub fn construct_diagonal_seed(r: usize, s: usize, k: usize, field: &Field) -> Result<DiagonalSeed> {
    check_k(r, s, k)?;
    let need = k + (r - k).min(1) + (s - k).min(1);
    if (field.q() as usize) < need {
        return Err(Error::FieldTooSmall { required: need as u64, actual: field.q() as u64 });
    }
    let mut scalars = field.elements();
    let zetas: Vec<Elem> = scalars.by_ref().take(k).collect();
    let alpha = if r > k { scalars.next() } else { None };
    let beta = if s > k { scalars.next() } else { None };
    let diag = |tail: Option<Elem>, n: usize| {
        let mut d = zetas.clone();
        d.resize(n, tail.unwrap_or(Elem::ZERO));
        Matrix::diagonal(field, &d)
    };
    Ok(DiagonalSeed { a0: diag(alpha, r), b0: diag(beta, s), zetas: zetas.clone(), alpha, beta })
}

fn check_k(r: usize, s: usize, k: usize) -> Result<()> {
    if k == 0 || k > r.min(s) {
        return Err(Error::BadK { k, max: r.min(s) });
    }
    Ok(())
}

/// Consecutive blocks of `{0, .., m-1}`: `k - 1` blocks of size `floor(m/k)`,
/// the last absorbing the remainder.
pub fn row_blocks(m: usize, k: usize) -> Vec<Vec<usize>> {
    let h = m / k;
    (0..k).map(|l| if l + 1 < k { (l * h..(l + 1) * h).collect() } else { (l * h..m).collect() }).collect()
}

/// Least `gamma` outside `{0, 1}`, also avoiding `1 - s` when all `s` rows of
/// `(gamma - 1) I + J` are used.
fn choose_gamma(field: &Field, s: usize, k: usize) -> Result<Elem> {
    let forbidden = field.sub(Elem::ONE, field.from_int(s as i64));
    field
        .elements()
        .find(|&g| g.0 > 1 && (k < s || g != forbidden))
        .ok_or(Error::FieldTooSmall { required: k as u64 + 2, actual: field.q() as u64 })
}

/// Everything needed to re-check a constructed code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionCertificate {
    pub field: Field,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    /// Built for `(s, r)` and transposed: blocks then index columns, the
    /// indicator vectors sit in the rows of `S`, and the no-zero vectors in
    /// the columns of `R^{-1}`.
    pub transposed: bool,
    pub a0: Matrix,
    pub b0: Matrix,
    pub zetas: Vec<Elem>,
    pub alpha: Option<Elem>,
    pub beta: Option<Elem>,
    pub gamma: Elem,
    pub r_mat: Matrix,
    pub r_inv: Matrix,
    pub s_mat: Matrix,
    pub a: Matrix,
    pub b: Matrix,
    pub x: Vec<Matrix>,
    /// 0-based block partition of the rows (columns when transposed).
    pub blocks: Vec<Vec<usize>>,
    pub claimed_d: usize,
}

impl ConstructionCertificate {
    /// The span of the witness codewords.
    pub fn code(&self) -> Result<IntertwiningCode> {
        IntertwiningCode::span(&self.field, self.r, self.s, &self.x)
    }
}

/// A pair `(A, B)` whose code has dimension `k` and distance `floor(r/k) * s`.
pub fn construct_code(r: usize, s: usize, k: usize, field: &Field) -> Result<ConstructionCertificate> {
    check_k(r, s, k)?;
    let q = field.q() as u64;
    if q < k as u64 + 2 {
        return Err(Error::FieldTooSmall { required: k as u64 + 2, actual: q });
    }
    let seed = construct_diagonal_seed(r, s, k, field)?;
    let gamma = choose_gamma(field, s, k)?;

    let u: Vec<Vec<Elem>> = (0..k)
        .map(|l| {
            let mut row = vec![Elem::ONE; s];
            row[l] = gamma;
            row
        })
        .collect();
    let mut s_prime = Matrix::from_vec(field, s, s, vec![Elem::ONE; s * s])?;
    for i in 0..s {
        s_prime.set(i, i, gamma);
    }
    let s_mat =
        if s_prime.rank() == s { s_prime } else { Matrix::complete_invertible(field, &u, s, Orientation::Rows)? };

    let blocks = row_blocks(r, k);
    let v: Vec<Vec<Elem>> = blocks
        .iter()
        .map(|block| (0..r).map(|i| if block.contains(&i) { Elem::ONE } else { Elem::ZERO }).collect())
        .collect();
    let r_inv = Matrix::complete_invertible(field, &v, r, Orientation::Columns)?;
    let r_mat = r_inv.inverse()?;
    let s_inv = s_mat.inverse()?;

    let a = r_inv.mul(&seed.a0).mul(&r_mat);
    let b = s_inv.mul(&seed.b0).mul(&s_mat);
    let x = (0..k)
        .map(|l| {
            let col = Matrix::column_vector(field, &r_inv.column(l));
            let row = Matrix::from_vec(field, 1, s, s_mat.row(l).to_vec())?;
            Ok(col.mul(&row))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ConstructionCertificate {
        field: field.clone(),
        r,
        s,
        k,
        transposed: false,
        a0: seed.a0,
        b0: seed.b0,
        zetas: seed.zetas,
        alpha: seed.alpha,
        beta: seed.beta,
        gamma,
        r_mat,
        r_inv,
        s_mat,
        a,
        b,
        x,
        blocks,
        claimed_d: (r / k) * s,
    })
}

/// Dimension `min(r, s)` and distance `max(r, s)`.
pub fn construct_extremal(r: usize, s: usize, field: &Field) -> Result<ConstructionCertificate> {
    let m = r.min(s);
    let q = field.q() as u64;
    if q < m as u64 + 2 {
        return Err(Error::FieldTooSmall { required: m as u64 + 2, actual: q });
    }
    if r <= s {
        return construct_code(r, s, r, field);
    }
    // C(B^T, A^T) = C(A, B)^T
    let c = construct_code(s, r, s, field)?;
    Ok(ConstructionCertificate {
        field: c.field.clone(),
        r,
        s,
        k: c.k,
        transposed: true,
        a0: c.b0,
        b0: c.a0,
        zetas: c.zetas,
        alpha: c.beta,
        beta: c.alpha,
        gamma: c.gamma,
        r_mat: c.s_mat.inverse()?.transpose(),
        r_inv: c.s_mat.transpose(),
        s_mat: c.r_inv.transpose(),
        a: c.b.transpose(),
        b: c.a.transpose(),
        x: c.x.iter().map(Matrix::transpose).collect(),
        blocks: c.blocks,
        claimed_d: c.claimed_d,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn record(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) -> bool {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.checks.push(Check { name, status, detail: detail.into() });
        ok
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn skipped(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Skipped)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }
}

fn indicator(n: usize, block: &[usize]) -> Vec<Elem> {
    (0..n).map(|i| if block.contains(&i) { Elem::ONE } else { Elem::ZERO }).collect()
}

/// Re-derives every claim of a certificate from its raw matrices.
///
/// Failures are reported, never raised. The distance check is skipped when
/// `q^k - 1` exceeds `budget`.
pub fn verify_certificate(cert: &ConstructionCertificate, budget: u64) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let f = &cert.field;
    let (r, s, k) = (cert.r, cert.s, cert.k);

    let shapes_ok = k >= 1
        && k <= r.min(s)
        && [&cert.a0, &cert.a, &cert.r_mat, &cert.r_inv].iter().all(|m| m.shape() == (r, r))
        && [&cert.b0, &cert.b, &cert.s_mat].iter().all(|m| m.shape() == (s, s))
        && cert.x.len() == k
        && cert.x.iter().all(|x| x.shape() == (r, s))
        && cert.zetas.len() == k
        && cert.blocks.len() == k;
    let fields_ok = [&cert.a0, &cert.a, &cert.r_mat, &cert.r_inv, &cert.b0, &cert.b, &cert.s_mat]
        .into_iter()
        .chain(&cert.x)
        .all(|m| m.field() == f);
    if !rep.record("shapes", shapes_ok && fields_ok, format!("r={r} s={s} k={k}")) {
        return rep;
    }

    let mut scalars = cert.zetas.clone();
    let tails_ok = cert.alpha.is_some() == (r > k) && cert.beta.is_some() == (s > k);
    scalars.extend(cert.alpha);
    scalars.extend(cert.beta);
    let mut sorted = scalars.clone();
    sorted.sort();
    sorted.dedup();
    let distinct = sorted.len() == scalars.len() && scalars.iter().all(|&x| f.contains(x));
    let listed: Vec<u32> = scalars.iter().map(|x| x.0).collect();
    rep.record("scalars", tails_ok && distinct, format!("{listed:?}"));

    let expect_diag = |tail: Option<Elem>, n: usize| {
        let mut d = cert.zetas.clone();
        d.resize(n, tail.unwrap_or(Elem::ZERO));
        Matrix::diagonal(f, &d)
    };
    rep.record(
        "seed",
        cert.a0 == expect_diag(cert.alpha, r) && cert.b0 == expect_diag(cert.beta, s),
        "A0, B0 diagonal with the listed scalars",
    );
    let units: Vec<Matrix> = (0..k).map(|l| Matrix::unit(f, r, s, l, l)).collect();
    let seed_ok = match (
        intertwiner_basis(std::slice::from_ref(&cert.a0), std::slice::from_ref(&cert.b0)),
        IntertwiningCode::span(f, r, s, &units),
    ) {
        (Ok(got), Ok(want)) => got == want,
        _ => false,
    };
    rep.record("seed_code", seed_ok, "C(A0, B0) = <E_11, .., E_kk>");

    // u vectors have the length of the side that is not blocked
    let (blocked, free) = if cert.transposed { (s, r) } else { (r, s) };
    let g = cert.gamma;
    let gamma_ok = f.contains(g) && g.0 > 1 && (k < free || g != f.sub(Elem::ONE, f.from_int(free as i64)));
    rep.record("gamma", gamma_ok, format!("gamma = {g}"));

    let h = blocked / k;
    let mut expected_start = 0;
    let mut blocks_ok = true;
    for (l, block) in cert.blocks.iter().enumerate() {
        let len = if l + 1 < k { h } else { blocked - h * (k - 1) };
        blocks_ok &= *block == (expected_start..expected_start + len).collect::<Vec<_>>();
        expected_start += len;
    }
    blocks_ok &= expected_start == blocked;
    rep.record("blocks", blocks_ok, format!("{:?}", cert.blocks));

    let inv_ok = cert.r_mat.mul(&cert.r_inv) == Matrix::identity(f, r)
        && cert.r_inv.mul(&cert.r_mat) == Matrix::identity(f, r)
        && cert.s_mat.rank() == s;
    rep.record("invertible", inv_ok, "R R^{-1} = I and S nonsingular");

    let mut prefix_ok = true;
    for l in 0..k {
        let mut u = vec![Elem::ONE; free];
        u[l] = g;
        let ind = indicator(blocked, &cert.blocks[l]);
        if cert.transposed {
            prefix_ok &= cert.r_inv.column(l) == u && cert.s_mat.row(l) == ind.as_slice();
        } else {
            prefix_ok &= cert.r_inv.column(l) == ind && cert.s_mat.row(l) == u.as_slice();
        }
    }
    rep.record("prefix", prefix_ok, "leading columns of R^{-1} and rows of S");

    let conj_ok = inv_ok
        && cert.a == cert.r_inv.mul(&cert.a0).mul(&cert.r_mat)
        && cert.s_mat.inverse().is_ok_and(|si| cert.b == si.mul(&cert.b0).mul(&cert.s_mat));
    rep.record("conjugation", conj_ok, "A = R^{-1} A0 R, B = S^{-1} B0 S");

    let mut rank_one_ok = true;
    for (l, x) in cert.x.iter().enumerate() {
        let via_units = cert.r_inv.mul(&Matrix::unit(f, r, s, l, l)).mul(&cert.s_mat);
        let col = Matrix::column_vector(f, &cert.r_inv.column(l));
        let outer = Matrix::from_vec(f, 1, s, cert.s_mat.row(l).to_vec()).map(|row| col.mul(&row));
        rank_one_ok &= via_units == *x && outer.is_ok_and(|o| o == *x);
    }
    rep.record("rank_one", rank_one_ok, "R^{-1} E_ll S = T_{*l} S_{l*} = X_l");

    let intertwines = cert.x.iter().all(|x| cert.a.mul(x) == x.mul(&cert.b));
    rep.record("intertwining", intertwines, "A X_l = X_l B");

    let code = intertwiner_basis(std::slice::from_ref(&cert.a), std::slice::from_ref(&cert.b));
    let witness = IntertwiningCode::span(f, r, s, &cert.x);
    let dim_ok = match (&code, &witness) {
        (Ok(c), Ok(w)) => c.k() == k && c == w,
        _ => false,
    };
    rep.record("dimension", dim_ok, format!("oracle k = {:?}", code.as_ref().map(IntertwiningCode::k).ok()));

    let formula = (blocked / k) * free;
    rep.record("claimed_d", cert.claimed_d == formula, format!("claimed {}, floor-formula {formula}", cert.claimed_d));

    match code.as_ref().map(|c| min_distance(c, budget)) {
        Ok(Ok(md)) => {
            rep.record(
                "distance",
                md.d == cert.claimed_d,
                format!("exhaustive d = {} over {} words", md.d, md.enumerated),
            );
        }
        Ok(Err(Error::BudgetExceeded { required, budget })) => rep.checks.push(Check {
            name: "distance",
            status: CheckStatus::Skipped,
            detail: format!("needs {required} codewords, budget {budget}"),
        }),
        Ok(Err(e)) => {
            rep.record("distance", false, e.to_string());
        }
        Err(e) => {
            rep.record("distance", false, e.to_string());
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::DEFAULT_BUDGET;
    use num_rational::Ratio;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn diag(f: &Field, d: &[u32]) -> Matrix {
        Matrix::diagonal(f, &d.iter().map(|&x| Elem(x)).collect::<Vec<_>>())
    }

    #[test]
    fn seed_examples() {
        let f3 = gf(3);
        let seed = construct_diagonal_seed(2, 2, 1, &f3).unwrap();
        assert_eq!((seed.a0.clone(), seed.b0.clone()), (diag(&f3, &[0, 1]), diag(&f3, &[0, 2])));
        let code = intertwiner_basis(&[seed.a0], &[seed.b0]).unwrap();
        assert_eq!(code.basis(), &[Matrix::unit(&f3, 2, 2, 0, 0)]);
        assert_eq!(min_distance(&code, 100).unwrap().d, 1);

        let f2 = gf(2);
        let seed = construct_diagonal_seed(2, 2, 2, &f2).unwrap();
        assert_eq!(seed.a0, diag(&f2, &[0, 1]));
        assert_eq!(seed.b0, diag(&f2, &[0, 1]));
        assert_eq!((seed.alpha, seed.beta), (None, None));

        assert_eq!(construct_diagonal_seed(2, 2, 1, &f2), Err(Error::FieldTooSmall { required: 3, actual: 2 }));
        assert_eq!(construct_diagonal_seed(2, 3, 3, &f3), Err(Error::BadK { k: 3, max: 2 }));
        assert_eq!(construct_diagonal_seed(2, 3, 0, &f3), Err(Error::BadK { k: 0, max: 2 }));
    }

    #[test]
    fn seed_spans_diagonal_units() {
        for (r, s, k, q) in [(3, 4, 2, 5), (4, 2, 2, 4), (5, 5, 3, 5), (3, 3, 3, 3)] {
            let f = gf(q);
            let seed = construct_diagonal_seed(r, s, k, &f).unwrap();
            let code = intertwiner_basis(&[seed.a0], &[seed.b0]).unwrap();
            let units: Vec<Matrix> = (0..k).map(|l| Matrix::unit(&f, r, s, l, l)).collect();
            assert_eq!(code, IntertwiningCode::span(&f, r, s, &units).unwrap());
        }
    }

    #[test]
    fn construct_3_2_2_over_gf5() {
        let f5 = gf(5);
        let cert = construct_code(3, 2, 2, &f5).unwrap();
        assert_eq!(cert.blocks, vec![vec![0], vec![1, 2]]);
        assert_eq!(cert.claimed_d, 2);
        let code = intertwiner_basis(&[cert.a.clone()], &[cert.b.clone()]).unwrap();
        assert_eq!(code.k(), 2);
        let md = min_distance(&code, DEFAULT_BUDGET).unwrap();
        assert_eq!((md.d, md.enumerated), (2, 24));
        assert!(verify_certificate(&cert, DEFAULT_BUDGET).passed());
    }

    #[test]
    fn construct_square_rate_distance() {
        let f5 = gf(5);
        let cert = construct_code(2, 2, 2, &f5).unwrap();
        let code = cert.code().unwrap().with_distance(DEFAULT_BUDGET).unwrap();
        let params = code.params().unwrap();
        assert_eq!(params.d, 2);
        assert_eq!(params.rate, Ratio::new(1, 2));
        assert_eq!(params.rate * Ratio::from_integer(params.d), Ratio::from_integer(1));
    }

    #[test]
    fn k_one_is_fully_supported() {
        let f3 = gf(3);
        for (r, s) in [(1, 1), (2, 3), (3, 2), (4, 4)] {
            let cert = construct_code(r, s, 1, &f3).unwrap();
            assert_eq!(cert.x[0].weight(), r * s);
            let code = intertwiner_basis(&[cert.a.clone()], &[cert.b.clone()]).unwrap();
            assert_eq!(min_distance(&code, 100).unwrap().d, r * s);
            assert!(verify_certificate(&cert, 100).passed(), "{r}x{s}");
        }
    }

    #[test]
    fn field_too_small() {
        assert_eq!(construct_code(2, 2, 1, &gf(2)), Err(Error::FieldTooSmall { required: 3, actual: 2 }));
        assert_eq!(construct_extremal(3, 4, &gf(4)), Err(Error::FieldTooSmall { required: 5, actual: 4 }));
        assert_eq!(construct_code(2, 2, 3, &gf(5)), Err(Error::BadK { k: 3, max: 2 }));
    }

    #[test]
    fn gamma_avoids_zero_and_one() {
        let f5 = gf(5);
        // 1 - s = 0 for s = 1 mod 5
        assert_eq!(choose_gamma(&f5, 6, 2).unwrap(), Elem(2));
        // k = s = 4: 1 - 4 = 2 is excluded as well
        assert_eq!(choose_gamma(&f5, 4, 4).unwrap(), Elem(3));
        let f3 = gf(3);
        // k < s: the 1 - s exclusion is not needed
        assert_eq!(choose_gamma(&f3, 2, 1).unwrap(), Elem(2));
        assert!(choose_gamma(&f3, 2, 2).is_err());
    }

    #[test]
    fn extremal_examples() {
        let f5 = gf(5);
        for (r, s, k, d) in [(2, 3, 2, 3), (2, 2, 2, 2), (3, 2, 2, 3)] {
            let cert = construct_extremal(r, s, &f5).unwrap();
            let code = intertwiner_basis(&[cert.a.clone()], &[cert.b.clone()]).unwrap();
            assert_eq!(code.k(), k);
            assert_eq!(min_distance(&code, DEFAULT_BUDGET).unwrap().d, d);
            let report = verify_certificate(&cert, DEFAULT_BUDGET);
            assert!(report.passed(), "{r}x{s}: {report:?}");
        }
        let wide = construct_extremal(2, 3, &f5).unwrap();
        let tall = construct_extremal(3, 2, &f5).unwrap();
        assert!(tall.transposed);
        assert_eq!(tall.a, wide.b.transpose());
        assert_eq!(tall.b, wide.a.transpose());
        assert_eq!(tall.code().unwrap(), wide.code().unwrap().transpose());
    }

    #[test]
    fn tampered_certificates_fail() {
        let f5 = gf(5);
        let cert = construct_code(3, 2, 2, &f5).unwrap();

        let mut zeroed = cert.clone();
        zeroed.x[0] = Matrix::zeros(&f5, 3, 2);
        let report = verify_certificate(&zeroed, DEFAULT_BUDGET);
        assert_eq!(report.status("rank_one"), Some(CheckStatus::Fail));
        assert!(!report.passed());

        let mut inflated = cert.clone();
        inflated.claimed_d += 1;
        let report = verify_certificate(&inflated, DEFAULT_BUDGET);
        assert_eq!(report.status("distance"), Some(CheckStatus::Fail));
        assert!(!report.passed());

        let mut bad_shape = cert.clone();
        bad_shape.x.pop();
        let report = verify_certificate(&bad_shape, DEFAULT_BUDGET);
        assert_eq!(report.checks.len(), 1);
        assert!(!report.passed());
    }

    #[test]
    fn distance_check_skipped_over_budget() {
        let cert = construct_code(3, 3, 3, &gf(5)).unwrap();
        let report = verify_certificate(&cert, 10);
        assert_eq!(report.status("distance"), Some(CheckStatus::Skipped));
        assert!(report.passed());
        assert!(report.skipped());
    }

    #[test]
    fn witness_rows_are_block_supported() {
        let f7 = gf(7);
        let cert = construct_code(5, 4, 2, &f7).unwrap();
        for (l, x) in cert.x.iter().enumerate() {
            assert_eq!(x.weight(), cert.blocks[l].len() * 4);
            for i in 0..5 {
                let nonzero = x.row(i).iter().filter(|e| !e.is_zero()).count();
                assert_eq!(nonzero, if cert.blocks[l].contains(&i) { 4 } else { 0 });
            }
        }
    }
}
