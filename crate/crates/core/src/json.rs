//! JSON wire formats. Field elements travel as their canonical integer
//! encoding; every matrix and polynomial carries its own field fragment.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::canonical::PrimaryDecomposition;
use crate::code::IntertwiningCode;
use crate::construct::{ConstructionCertificate, VerificationReport};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::poly::Poly;

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let out = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    out.expect("wire structs always serialize")
}

fn elem(field: &Field, value: u64) -> Result<Elem> {
    u32::try_from(value)
        .ok()
        .map(Elem)
        .filter(|&x| field.contains(x))
        .ok_or_else(|| Error::Parse(format!("element {value} outside GF({})", field.q())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u64,
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldJson {
    pub fn from_field(field: &Field) -> FieldJson {
        let modulus = (field.e() > 1).then(|| field.modulus().iter().map(|&c| c as u64).collect());
        FieldJson { p: field.p() as u64, e: field.e(), modulus }
    }

    pub fn to_field(&self) -> Result<Field> {
        Field::new(self.p, self.e, self.modulus.as_deref())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> MatrixJson {
        MatrixJson {
            field: FieldJson::from_field(m.field()),
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows()).map(|i| m.row(i).iter().map(|e| e.0 as u64).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        self.to_matrix_in(&self.field.to_field()?)
    }

    /// Reads the entries over `field`, which must agree with the fragment.
    pub fn to_matrix_in(&self, field: &Field) -> Result<Matrix> {
        if self.field.to_field()? != *field {
            return Err(Error::FieldMismatch);
        }
        if self.entries.len() != self.rows || self.entries.iter().any(|row| row.len() != self.cols) {
            return Err(Error::Parse(format!("entries do not form a {}x{} array", self.rows, self.cols)));
        }
        let data = self.entries.iter().flatten().map(|&v| elem(field, v)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(field, self.rows, self.cols, data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub field: FieldJson,
    pub coeffs: Vec<u64>,
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> PolyJson {
        PolyJson { field: FieldJson::from_field(p.field()), coeffs: p.coeffs().iter().map(|c| c.0 as u64).collect() }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let field = self.field.to_field()?;
        let coeffs = self.coeffs.iter().map(|&c| elem(&field, c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&field, coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub irr: PolyJson,
    pub mult: usize,
    pub partition: Vec<usize>,
}

pub fn decomposition_json(d: &PrimaryDecomposition) -> Vec<ComponentJson> {
    d.components
        .iter()
        .map(|c| ComponentJson {
            irr: PolyJson::from_poly(&c.irr),
            mult: c.mult,
            partition: c.partition.parts().to_vec(),
        })
        .collect()
}

pub fn partition_from_json(parts: Vec<usize>) -> Result<Partition> {
    Partition::from_parts(parts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJson {
    pub field: FieldJson,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub basis: Vec<MatrixJson>,
    pub d: Option<usize>,
    pub d_budget: Option<u64>,
}

impl CodeJson {
    pub fn from_code(code: &IntertwiningCode) -> CodeJson {
        CodeJson {
            field: FieldJson::from_field(code.field()),
            r: code.r(),
            s: code.s(),
            k: code.k(),
            basis: code.basis().iter().map(MatrixJson::from_matrix).collect(),
            d: code.d(),
            d_budget: code.d_budget(),
        }
    }

    /// Rebuilds the code; the basis is re-canonicalized and must have rank `k`.
    pub fn to_code(&self) -> Result<IntertwiningCode> {
        let field = self.field.to_field()?;
        let basis = self.basis.iter().map(|m| m.to_matrix_in(&field)).collect::<Result<Vec<_>>>()?;
        let code = IntertwiningCode::span(&field, self.r, self.s, &basis)?;
        if code.k() != self.k || basis.len() != self.k {
            return Err(Error::Parse(format!(
                "basis of {} matrices has rank {}, k = {}",
                basis.len(),
                code.k(),
                self.k
            )));
        }
        Ok(code.with_recorded_distance(self.d, self.d_budget))
    }
}

/// Certificate layout; struct order fixes the key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub field: FieldJson,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub claimed_d: usize,
    pub transposed: bool,
    pub zetas: Vec<u64>,
    pub alpha: Option<u64>,
    pub beta: Option<u64>,
    pub gamma: u64,
    pub blocks: Vec<Vec<usize>>,
    #[serde(rename = "A0")]
    pub a0: MatrixJson,
    #[serde(rename = "B0")]
    pub b0: MatrixJson,
    #[serde(rename = "R")]
    pub r_mat: MatrixJson,
    #[serde(rename = "R_inv")]
    pub r_inv: MatrixJson,
    #[serde(rename = "S")]
    pub s_mat: MatrixJson,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    #[serde(rename = "X")]
    pub x: Vec<MatrixJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &ConstructionCertificate) -> CertificateJson {
        let enc = |e: Elem| e.0 as u64;
        CertificateJson {
            field: FieldJson::from_field(&c.field),
            r: c.r,
            s: c.s,
            k: c.k,
            claimed_d: c.claimed_d,
            transposed: c.transposed,
            zetas: c.zetas.iter().copied().map(enc).collect(),
            alpha: c.alpha.map(enc),
            beta: c.beta.map(enc),
            gamma: enc(c.gamma),
            blocks: c.blocks.clone(),
            a0: MatrixJson::from_matrix(&c.a0),
            b0: MatrixJson::from_matrix(&c.b0),
            r_mat: MatrixJson::from_matrix(&c.r_mat),
            r_inv: MatrixJson::from_matrix(&c.r_inv),
            s_mat: MatrixJson::from_matrix(&c.s_mat),
            a: MatrixJson::from_matrix(&c.a),
            b: MatrixJson::from_matrix(&c.b),
            x: c.x.iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    /// Parses only; mathematical consistency is left to the verifier.
    pub fn to_certificate(&self) -> Result<ConstructionCertificate> {
        let field = self.field.to_field()?;
        let m = |j: &MatrixJson| j.to_matrix_in(&field);
        let e = |v: u64| elem(&field, v);
        Ok(ConstructionCertificate {
            r: self.r,
            s: self.s,
            k: self.k,
            transposed: self.transposed,
            a0: m(&self.a0)?,
            b0: m(&self.b0)?,
            zetas: self.zetas.iter().map(|&v| e(v)).collect::<Result<_>>()?,
            alpha: self.alpha.map(e).transpose()?,
            beta: self.beta.map(e).transpose()?,
            gamma: e(self.gamma)?,
            r_mat: m(&self.r_mat)?,
            r_inv: m(&self.r_inv)?,
            s_mat: m(&self.s_mat)?,
            a: m(&self.a)?,
            b: m(&self.b)?,
            x: self.x.iter().map(m).collect::<Result<_>>()?,
            blocks: self.blocks.clone(),
            claimed_d: self.claimed_d,
            field,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub passed: bool,
    pub skipped: bool,
    pub checks: Vec<CheckJson>,
}

impl ReportJson {
    pub fn from_report(r: &VerificationReport) -> ReportJson {
        ReportJson {
            passed: r.passed(),
            skipped: r.skipped(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson { name: c.name.to_string(), status: c.status.to_string(), detail: c.detail.clone() })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{nilpotent_matrix, primary_decomposition};
    use crate::code::{intertwiner_basis, DEFAULT_BUDGET};
    use crate::construct::{construct_code, construct_extremal, verify_certificate};

    #[test]
    fn field_fragments() {
        let f9 = Field::with_order(9).unwrap();
        let j = FieldJson::from_field(&f9);
        assert_eq!(render(&j, false), r#"{"p":3,"e":2,"modulus":[1,0,1]}"#);
        assert_eq!(j.to_field().unwrap(), f9);
        let f5: FieldJson = parse(r#"{"p":5,"e":1}"#).unwrap();
        assert_eq!(f5.to_field().unwrap(), Field::prime(5).unwrap());
        assert_eq!(render(&FieldJson::from_field(&Field::prime(5).unwrap()), false), r#"{"p":5,"e":1}"#);
        let bad: FieldJson = parse(r#"{"p":2,"e":2,"modulus":[1,0,1]}"#).unwrap();
        assert!(matches!(bad.to_field(), Err(Error::BadModulus(_))));
    }

    #[test]
    fn matrix_round_trip_and_validation() {
        let f4 = Field::with_order(4).unwrap();
        let m = Matrix::from_u32(&f4, 2, 3, &[0, 1, 2, 3, 2, 1]).unwrap();
        let text = render(&MatrixJson::from_matrix(&m), true);
        assert_eq!(parse::<MatrixJson>(&text).unwrap().to_matrix().unwrap(), m);

        let f2 = r#"{"p":2,"e":1}"#;
        let ragged = format!(r#"{{"field":{f2},"rows":2,"cols":2,"entries":[[1,0],[1]]}}"#);
        assert!(matches!(parse::<MatrixJson>(&ragged).unwrap().to_matrix(), Err(Error::Parse(_))));
        let big = format!(r#"{{"field":{f2},"rows":1,"cols":1,"entries":[[2]]}}"#);
        assert!(matches!(parse::<MatrixJson>(&big).unwrap().to_matrix(), Err(Error::Parse(_))));
        assert!(parse::<MatrixJson>("{").is_err());
        let empty = format!(r#"{{"field":{f2},"rows":0,"cols":0,"entries":[]}}"#);
        assert_eq!(parse::<MatrixJson>(&empty).unwrap().to_matrix().unwrap().shape(), (0, 0));
    }

    #[test]
    fn poly_and_decomposition() {
        let f2 = Field::prime(2).unwrap();
        let p = Poly::new(&f2, vec![Elem(1), Elem(1), Elem(0), Elem(1)]);
        let j = PolyJson::from_poly(&p);
        assert_eq!(render(&j, false), r#"{"field":{"p":2,"e":1},"coeffs":[1,1,0,1]}"#);
        assert_eq!(j.to_poly().unwrap(), p);

        let a = nilpotent_matrix(&f2, &Partition::new(vec![2, 1]));
        let d = decomposition_json(&primary_decomposition(&a, 0).unwrap());
        assert_eq!(render(&d, false), r#"[{"irr":{"field":{"p":2,"e":1},"coeffs":[0,1]},"mult":3,"partition":[2,1]}]"#);
    }

    #[test]
    fn code_round_trip() {
        let f3 = Field::prime(3).unwrap();
        let code = intertwiner_basis(
            &[nilpotent_matrix(&f3, &Partition::new(vec![2, 1]))],
            &[nilpotent_matrix(&f3, &Partition::new(vec![2]))],
        )
        .unwrap()
        .with_distance(DEFAULT_BUDGET)
        .unwrap();
        let j = CodeJson::from_code(&code);
        let back = parse::<CodeJson>(&render(&j, false)).unwrap().to_code().unwrap();
        assert_eq!(back, code);
        assert_eq!(back.d(), code.d());

        let mut short = j.clone();
        short.k = 2;
        assert!(short.to_code().is_err());
    }

    #[test]
    fn certificate_round_trip_is_stable() {
        for cert in [
            construct_code(3, 2, 2, &Field::prime(5).unwrap()).unwrap(),
            construct_extremal(3, 2, &Field::with_order(4).unwrap()).unwrap(),
        ] {
            let text = render(&CertificateJson::from_certificate(&cert), false);
            let back = parse::<CertificateJson>(&text).unwrap().to_certificate().unwrap();
            assert_eq!(back, cert);
            assert_eq!(render(&CertificateJson::from_certificate(&back), false), text);
            assert!(verify_certificate(&back, DEFAULT_BUDGET).passed());
        }
        let text = render(
            &CertificateJson::from_certificate(&construct_code(2, 2, 1, &Field::prime(3).unwrap()).unwrap()),
            false,
        );
        let keys = ["\"field\"", "\"claimed_d\"", "\"gamma\"", "\"A0\"", "\"R_inv\"", "\"X\""];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}
