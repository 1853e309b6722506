//! Primary decomposition of a square matrix and the generalized Jordan models.
//!
//! Block structure is read off nullities: if `n_j = dim ker p(A)^j` and
//! `d = deg p`, then `(n_j - n_{j-1}) / d` is the number of generalized Jordan
//! blocks of size at least `j`, i.e. the conjugate of the block partition.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::{companion, Matrix};
use crate::partition::Partition;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponent {
    /// Monic irreducible factor of the characteristic polynomial.
    pub irr: Poly,
    pub deg: usize,
    /// Multiplicity of `irr` in the characteristic polynomial.
    pub mult: usize,
    /// Block sizes; weight equals `mult`.
    pub partition: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryDecomposition {
    pub dim: usize,
    /// Sorted by degree, then coefficients.
    pub components: Vec<PrimaryComponent>,
}

impl PrimaryDecomposition {
    pub fn component(&self, irr: &Poly) -> Option<&PrimaryComponent> {
        self.components.iter().find(|c| c.irr == *irr)
    }

    /// The block-diagonal generalized Jordan matrix with this decomposition.
    pub fn model_matrix(&self, field: &Field) -> Result<Matrix> {
        let blocks = self
            .components
            .iter()
            .map(|c| generalized_jordan_matrix(&c.irr, &c.partition))
            .collect::<Result<Vec<_>>>()?;
        Matrix::direct_sum(field, &blocks)
    }
}

/// Per-factor eigenspace data, normalized per root over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralEntry {
    pub irr: Poly,
    pub deg: usize,
    /// `dim ker p(A) / deg p`: the eigenspace dimension at each root of `p`.
    pub eigendim_per_root: usize,
    /// Multiplicity of `p`: the generalized eigenspace dimension at each root.
    pub gendim_per_root: usize,
}

/// Nullities `dim ker p(A)^j` for `j = 1, 2, ...` until they stop growing.
fn nullity_chain(a: &Matrix, p: &Poly, limit: usize) -> Result<Vec<usize>> {
    let r = a.rows();
    let pa = a.poly_eval(p)?;
    let mut power = Matrix::identity(a.field(), r);
    let mut chain = Vec::new();
    let mut prev = 0;
    for _ in 0..=limit {
        power = power.mul(&pa);
        let n = r - power.rank();
        if n < prev {
            return Err(Error::InternalInconsistency(format!("nullity of powers of {p} decreased")));
        }
        if n == prev {
            return Ok(chain);
        }
        chain.push(n);
        prev = n;
    }
    Err(Error::InternalInconsistency(format!("nullities of powers of {p} did not stabilize")))
}

fn component(a: &Matrix, irr: Poly, mult: usize) -> Result<PrimaryComponent> {
    let deg = irr.degree().unwrap_or(0);
    let chain = nullity_chain(a, &irr, mult)?;
    let mut counts = Vec::with_capacity(chain.len());
    let mut prev = 0;
    for n in chain {
        let step = n - prev;
        if step % deg != 0 {
            return Err(Error::InternalInconsistency(format!(
                "nullity step {step} not divisible by deg {irr} = {deg}"
            )));
        }
        counts.push(step / deg);
        prev = n;
    }
    if prev != deg * mult {
        return Err(Error::InternalInconsistency(format!(
            "generalized eigenspace of {irr} has dimension {prev}, expected {}",
            deg * mult
        )));
    }
    let counts = Partition::from_parts(counts)
        .map_err(|_| Error::InternalInconsistency(format!("block counts for {irr} not decreasing")))?;
    let partition = counts.conjugate();
    debug_assert_eq!(partition.weight(), mult);
    Ok(PrimaryComponent { irr, deg, mult, partition })
}

pub fn primary_decomposition(a: &Matrix, seed: u64) -> Result<PrimaryDecomposition> {
    let r = a.require_square()?;
    if r == 0 {
        return Ok(PrimaryDecomposition { dim: 0, components: Vec::new() });
    }
    let factored = a.charpoly()?.factor(seed)?;
    let components =
        factored.factors.into_iter().map(|(irr, mult)| component(a, irr, mult)).collect::<Result<Vec<_>>>()?;
    Ok(PrimaryDecomposition { dim: r, components })
}

/// `N_lambda`: Jordan blocks of sizes `lambda` with ones on the superdiagonal.
pub fn nilpotent_matrix(field: &Field, lambda: &Partition) -> Matrix {
    let r = lambda.weight();
    let mut m = Matrix::zeros(field, r, r);
    let mut start = 0;
    for &size in lambda.parts() {
        for i in start..start + size - 1 {
            m.set(i, i + 1, crate::gf::Elem::ONE);
        }
        start += size;
    }
    m
}

/// `N_{lambda,p}`: for each part `m` a block with `C(p)` repeated `m` times
/// on the diagonal and `d x d` identities on the block superdiagonal.
pub fn generalized_jordan_matrix(p: &Poly, lambda: &Partition) -> Result<Matrix> {
    if !p.is_irreducible()? {
        return Err(Error::NotIrreducible);
    }
    let field = p.field();
    let d = p.degree().unwrap_or(0);
    let comp = companion(p)?;
    let blocks: Vec<Matrix> = lambda
        .parts()
        .iter()
        .map(|&m| {
            let mut block = Matrix::zeros(field, d * m, d * m);
            for b in 0..m {
                for i in 0..d {
                    for j in 0..d {
                        block.set(b * d + i, b * d + j, comp.get(i, j));
                    }
                    if b + 1 < m {
                        block.set(b * d + i, (b + 1) * d + i, crate::gf::Elem::ONE);
                    }
                }
            }
            block
        })
        .collect();
    Matrix::direct_sum(field, &blocks)
}

pub fn spectral_summary(a: &Matrix, seed: u64) -> Result<Vec<SpectralEntry>> {
    let r = a.require_square()?;
    if r == 0 {
        return Ok(Vec::new());
    }
    let factored = a.charpoly()?.factor(seed)?;
    factored
        .factors
        .into_iter()
        .map(|(irr, mult)| {
            let deg = irr.degree().unwrap_or(0);
            let kernel = r - a.poly_eval(&irr)?.rank();
            if kernel % deg != 0 {
                return Err(Error::InternalInconsistency(format!(
                    "dim ker {irr}(A) = {kernel} not divisible by {deg}"
                )));
            }
            Ok(SpectralEntry { irr, deg, eigendim_per_root: kernel / deg, gendim_per_root: mult })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Elem;
    use proptest::prelude::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn poly(field: &Field, coeffs: &[u32]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| Elem(c)).collect())
    }

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    #[test]
    fn nilpotent_examples() {
        let f2 = gf(2);
        assert_eq!(nilpotent_matrix(&f2, &p(&[2])), Matrix::from_u32(&f2, 2, 2, &[0, 1, 0, 0]).unwrap());
        assert!(nilpotent_matrix(&f2, &p(&[1, 1])).is_zero());
        let n21 = nilpotent_matrix(&f2, &p(&[2, 1]));
        assert_eq!(n21, Matrix::from_u32(&f2, 3, 3, &[0, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap());
        let n = nilpotent_matrix(&gf(3), &p(&[4, 2, 1]));
        assert!(n.pow(4).is_zero());
        assert!(!n.pow(3).is_zero());
    }

    #[test]
    fn generalized_jordan_examples() {
        let f2 = gf(2);
        assert_eq!(generalized_jordan_matrix(&Poly::t(&f2), &p(&[2, 1])).unwrap(), nilpotent_matrix(&f2, &p(&[2, 1])));
        let cubic = poly(&f2, &[1, 1, 0, 1]);
        let a = generalized_jordan_matrix(&cubic, &p(&[3])).unwrap();
        assert_eq!(a.shape(), (9, 9));
        assert_eq!(a.charpoly().unwrap(), cubic.pow(3));
        let f3 = gf(3);
        assert_eq!(
            generalized_jordan_matrix(&poly(&f3, &[2, 1]), &p(&[2])).unwrap(),
            Matrix::from_u32(&f3, 2, 2, &[1, 1, 0, 1]).unwrap()
        );
        assert_eq!(generalized_jordan_matrix(&poly(&f2, &[1, 0, 1]), &p(&[1])), Err(Error::NotIrreducible));
    }

    #[test]
    fn decomposition_examples() {
        let f2 = gf(2);
        let dec = primary_decomposition(&nilpotent_matrix(&f2, &p(&[2, 1])), 0).unwrap();
        assert_eq!(
            dec.components,
            vec![PrimaryComponent { irr: Poly::t(&f2), deg: 1, mult: 3, partition: p(&[2, 1]) }]
        );
        let f5 = gf(5);
        let dec = primary_decomposition(&Matrix::diagonal(&f5, &[Elem(1), Elem(2)]), 0).unwrap();
        assert_eq!(
            dec.components,
            vec![
                PrimaryComponent { irr: poly(&f5, &[3, 1]), deg: 1, mult: 1, partition: p(&[1]) },
                PrimaryComponent { irr: poly(&f5, &[4, 1]), deg: 1, mult: 1, partition: p(&[1]) },
            ]
        );
        let cubic = poly(&f2, &[1, 1, 0, 1]);
        let a = generalized_jordan_matrix(&cubic, &p(&[3])).unwrap();
        let dec = primary_decomposition(&a, 0).unwrap();
        assert_eq!(dec.components, vec![PrimaryComponent { irr: cubic, deg: 3, mult: 3, partition: p(&[3]) }]);
        assert!(matches!(primary_decomposition(&Matrix::zeros(&f2, 1, 2), 0), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn spectral_examples() {
        let f2 = gf(2);
        let s = spectral_summary(&nilpotent_matrix(&f2, &p(&[2])), 0).unwrap();
        assert_eq!(s, vec![SpectralEntry { irr: Poly::t(&f2), deg: 1, eigendim_per_root: 1, gendim_per_root: 2 }]);
        let f3 = gf(3);
        let s = spectral_summary(&Matrix::identity(&f3, 2), 0).unwrap();
        assert_eq!(
            s,
            vec![SpectralEntry { irr: poly(&f3, &[2, 1]), deg: 1, eigendim_per_root: 2, gendim_per_root: 2 }]
        );
        let c = companion(&poly(&f3, &[1, 0, 1])).unwrap();
        let s = spectral_summary(&c, 0).unwrap();
        assert_eq!(
            s,
            vec![SpectralEntry { irr: poly(&f3, &[1, 0, 1]), deg: 2, eigendim_per_root: 1, gendim_per_root: 1 }]
        );
    }

    fn square(max_n: usize) -> impl Strategy<Value = (u64, usize, Vec<u32>)> {
        (prop::sample::select(vec![2u64, 3, 4, 5]), 1..=max_n)
            .prop_flat_map(|(q, n)| (Just(q), Just(n), prop::collection::vec(0..q as u32, n * n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn reconstruction_is_idempotent((q, n, data) in square(6), sparse in any::<bool>()) {
            let f = gf(q);
            // sparse inputs have repeated eigenvalues far more often
            let data: Vec<u32> = if sparse {
                data.iter().enumerate().map(|(i, &x)| if i % 3 == 0 { x } else { 0 }).collect()
            } else {
                data
            };
            let a = Matrix::from_u32(&f, n, n, &data).unwrap();
            let dec = primary_decomposition(&a, 0).unwrap();
            let total: usize = dec.components.iter().map(|c| c.deg * c.mult).sum();
            prop_assert_eq!(total, n);
            let model = dec.model_matrix(&f).unwrap();
            prop_assert_eq!(model.charpoly().unwrap(), a.charpoly().unwrap());
            prop_assert_eq!(primary_decomposition(&model, 1).unwrap(), dec);
        }

        #[test]
        fn extracts_partition_of_model(
            parts in prop::collection::vec(1usize..4, 1..4),
            q in prop::sample::select(vec![2u64, 3]),
            pick in 0usize..4,
        ) {
            let f = gf(q);
            let candidates = [&[0, 1][..], &[1, 1], &[1, 0, 1], &[1, 1, 1], &[1, 1, 0, 1]];
            let irr = candidates
                .iter()
                .map(|c| poly(&f, c))
                .filter(|c| c.is_irreducible().unwrap())
                .nth(pick % 3)
                .unwrap();
            let lambda = Partition::new(parts);
            let a = generalized_jordan_matrix(&irr, &lambda).unwrap();
            let dec = primary_decomposition(&a, 3).unwrap();
            prop_assert_eq!(dec.components.len(), 1);
            prop_assert_eq!(&dec.components[0].irr, &irr);
            prop_assert_eq!(&dec.components[0].partition, &lambda);
        }
    }
}
