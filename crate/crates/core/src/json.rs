//! External JSON formats: algebra dumps, multivectors, families, subspaces,
//! sampled r-matrices and classification reports. Exact rationals travel as
//! "p/q" strings, complex numbers as {"re": .., "im": ..}.

use crate::cxla;
use crate::dynr::{Classification, RMatrixFamily};
use crate::error::{CoreError, Result};
use crate::lagrangian::DSubspace;
use crate::multivec::MultiVector;
use crate::ratmat::Rat;
use crate::rootsys::{normalized_basis, BasisRole, CartanType, SimpleLieAlgebra};
use crate::scalar::{rat_from_str, rat_to_f64, rat_to_string};
use num::complex::Complex64;
use num::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ComplexDto {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexDto {
    fn from(z: Complex64) -> Self {
        ComplexDto { re: z.re, im: z.im }
    }
}

impl From<ComplexDto> for Complex64 {
    fn from(z: ComplexDto) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// A coefficient that is either an exact rational string or a float.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoeffDto {
    Exact(String),
    Float(f64),
}

impl CoeffDto {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            CoeffDto::Float(x) => Ok(*x),
            CoeffDto::Exact(s) => rat_from_str(s)
                .map(|r| rat_to_f64(&r))
                .ok_or_else(|| CoreError::InvalidInput(format!("bad rational literal {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiVectorTermDto {
    pub idx: Vec<usize>,
    pub re: CoeffDto,
    pub im: CoeffDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiVectorDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg: Option<usize>,
    pub terms: Vec<MultiVectorTermDto>,
}

pub fn multivector_to_dto_exact(m: &MultiVector<Rat>) -> MultiVectorDto {
    MultiVectorDto {
        deg: m.degree(),
        terms: m
            .terms()
            .map(|(k, c)| MultiVectorTermDto {
                idx: k.clone(),
                re: CoeffDto::Exact(rat_to_string(c)),
                im: CoeffDto::Exact("0".into()),
            })
            .collect(),
    }
}

pub fn multivector_to_dto(m: &MultiVector<Complex64>) -> MultiVectorDto {
    MultiVectorDto {
        deg: m.degree(),
        terms: m
            .terms()
            .map(|(k, c)| MultiVectorTermDto { idx: k.clone(), re: CoeffDto::Float(c.re), im: CoeffDto::Float(c.im) })
            .collect(),
    }
}

pub fn multivector_from_dto(alg: &SimpleLieAlgebra, dto: &MultiVectorDto) -> Result<MultiVector<Complex64>> {
    let mut m = MultiVector::zero(alg);
    for t in &dto.terms {
        if t.idx.iter().any(|&i| i >= alg.dim) {
            return Err(CoreError::InvalidInput(format!("basis index out of range in {:?}", t.idx)));
        }
        m.add_term(&t.idx, Complex64::new(t.re.to_f64()?, t.im.to_f64()?));
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDto {
    pub algebra: CartanType,
    /// 1-based simple-root indices.
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub lambda0: Vec<ComplexDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<ComplexDto>>>,
}

pub fn family_to_dto(fam: &RMatrixFamily) -> FamilyDto {
    let omega_zero = fam.omega.iter().flatten().all(|z| z.is_zero());
    FamilyDto {
        algebra: fam.cartan_type,
        s: fam.s.iter().map(|i| i + 1).collect(),
        lambda0: fam.lambda0.iter().map(|&z| z.into()).collect(),
        omega: if omega_zero {
            None
        } else {
            Some(fam.omega.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect())
        },
    }
}

pub fn family_from_dto(alg: &SimpleLieAlgebra, dto: &FamilyDto) -> Result<RMatrixFamily> {
    if dto.algebra != alg.cartan_type {
        return Err(CoreError::AlgebraMismatch);
    }
    let s: Vec<usize> = dto
        .s
        .iter()
        .map(|&i| {
            if i == 0 {
                Err(CoreError::InvalidInput("simple-root indices are 1-based".into()))
            } else {
                Ok(i - 1)
            }
        })
        .collect::<Result<_>>()?;
    let lambda0: Vec<Complex64> = dto.lambda0.iter().map(|&z| z.into()).collect();
    let omega = dto
        .omega
        .as_ref()
        .map(|w| w.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect());
    RMatrixFamily::new(alg, &s, lambda0, omega)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoubleElementDto {
    pub x: Vec<ComplexDto>,
    pub y: Vec<ComplexDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceDto {
    pub algebra: CartanType,
    pub basis: Vec<DoubleElementDto>,
}

pub fn subspace_to_dto(alg: &SimpleLieAlgebra, w: &DSubspace) -> SubspaceDto {
    let d = alg.dim;
    let basis = (0..w.dim())
        .map(|j| {
            let col = w.basis.column(j);
            DoubleElementDto {
                x: (0..d).map(|i| col[i].into()).collect(),
                y: (0..d).map(|i| col[d + i].into()).collect(),
            }
        })
        .collect();
    SubspaceDto { algebra: alg.cartan_type, basis }
}

pub fn subspace_from_dto(alg: &SimpleLieAlgebra, dto: &SubspaceDto) -> Result<DSubspace> {
    if dto.algebra != alg.cartan_type {
        return Err(CoreError::AlgebraMismatch);
    }
    let d = alg.dim;
    let cols: Vec<Vec<Complex64>> = dto
        .basis
        .iter()
        .map(|e| {
            if e.x.len() != d || e.y.len() != d {
                return Err(CoreError::DimensionMismatch { expected: d, got: e.x.len().max(e.y.len()) });
            }
            let mut v: Vec<Complex64> = e.x.iter().map(|&z| z.into()).collect();
            v.extend(e.y.iter().map(|&z| Complex64::from(z)));
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(DSubspace { cartan_type: alg.cartan_type, basis: cxla::from_columns(2 * d, &cols) })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RSampleDto {
    pub lambda: Vec<ComplexDto>,
    pub r: MultiVectorDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RSamplesDto {
    pub algebra: CartanType,
    pub samples: Vec<RSampleDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenvalueDto {
    pub root: Vec<i64>,
    pub value: ComplexDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationDto {
    pub algebra: CartanType,
    /// 1-based simple-root indices.
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub eigenvalues: Vec<EigenvalueDto>,
    pub lambda0_representative: Vec<ComplexDto>,
    pub omega: Vec<Vec<ComplexDto>>,
    pub residual: f64,
}

pub fn classification_to_dto(alg: &SimpleLieAlgebra, cls: &Classification) -> ClassificationDto {
    ClassificationDto {
        algebra: alg.cartan_type,
        s: cls.s.iter().map(|i| i + 1).collect(),
        eigenvalues: cls
            .eigenvalues
            .iter()
            .map(|(p, c)| EigenvalueDto { root: alg.root(*p).coords.clone(), value: (*c).into() })
            .collect(),
        lambda0_representative: cls.lambda0_rep.iter().map(|&z| z.into()).collect(),
        omega: cls.omega.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect(),
        residual: cls.residual,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisVectorDto {
    pub label: String,
    /// Signed root coordinates; absent for Cartan vectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureConstantDto {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, String)>,
}

/// Full basis dump of an algebra: labels, roots, exact structure constants
/// and the Killing Gram matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDumpDto {
    pub algebra: CartanType,
    pub dimension: usize,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub basis: Vec<BasisVectorDto>,
    /// kappa(e_a, f_a) per positive root, as exact rationals.
    pub kappa_ef: Vec<String>,
    pub killing: Vec<Vec<String>>,
    pub structure_constants: Vec<StructureConstantDto>,
}

pub fn algebra_dump(alg: &SimpleLieAlgebra) -> AlgebraDumpDto {
    let nb = normalized_basis(alg);
    let basis = alg
        .labels
        .iter()
        .enumerate()
        .map(|(i, label)| BasisVectorDto {
            label: label.clone(),
            root: match alg.basis_roles[i] {
                BasisRole::Cartan(_) => None,
                BasisRole::RootVector(p, sign) => {
                    Some(alg.root(p).coords.iter().map(|&c| c * i64::from(sign)).collect())
                }
            },
        })
        .collect();
    let mut structure_constants = Vec::new();
    for i in 0..alg.dim {
        for j in (i + 1)..alg.dim {
            let terms: Vec<(usize, String)> =
                alg.bracket_sparse(i, j).iter().map(|(k, c)| (*k, rat_to_string(c))).collect();
            if !terms.is_empty() {
                structure_constants.push(StructureConstantDto { i, j, terms });
            }
        }
    }
    AlgebraDumpDto {
        algebra: alg.cartan_type,
        dimension: alg.dim,
        rank: alg.rank,
        simple_roots: (0..alg.rank)
            .map(|i| (0..alg.rank).map(|j| i64::from(i == j)).collect())
            .collect(),
        positive_roots: alg.root_data.positive_roots.iter().map(|r| r.coords.clone()).collect(),
        basis,
        kappa_ef: nb.kappa_ef.iter().map(rat_to_string).collect(),
        killing: (0..alg.dim)
            .map(|i| (0..alg.dim).map(|j| rat_to_string(alg.killing_entry(i, j))).collect())
            .collect(),
        structure_constants,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::build_l;
    use crate::multivec::r0;
    use crate::rootsys::build_algebra;

    #[test]
    fn family_json_matches_the_documented_shape() {
        let alg = build_algebra(CartanType::parse("A2").unwrap()).unwrap();
        let fam = RMatrixFamily::new(
            &alg,
            &[0],
            vec![Complex64::new(0.2, 0.0), Complex64::new(0.4, 0.1)],
            None,
        )
        .unwrap();
        let dto = family_to_dto(&fam);
        let json = serde_json::to_value(&dto).unwrap();
        assert_eq!(json["algebra"]["series"], "A");
        assert_eq!(json["algebra"]["rank"], 2);
        assert_eq!(json["S"][0], 1);
        assert_eq!(json["lambda0"][0]["re"], 0.2);
        let back = family_from_dto(&alg, &serde_json::from_value(json).unwrap()).unwrap();
        assert_eq!(back.s, fam.s);
        assert_eq!(back.lambda0, fam.lambda0);
    }

    #[test]
    fn multivector_json_roundtrips_and_reads_exact_strings() {
        let alg = build_algebra(CartanType::parse("A1").unwrap()).unwrap();
        let dto = multivector_to_dto_exact(&r0(&alg));
        let json = serde_json::to_string(&dto).unwrap();
        assert!(json.contains("\"1/4\""));
        let parsed: MultiVectorDto = serde_json::from_str(&json).unwrap();
        let m = multivector_from_dto(&alg, &parsed).unwrap();
        assert!((m.coeff(&[1, 2]).re - 0.25).abs() < 1e-15);
        // floats are accepted too
        let parsed: MultiVectorDto =
            serde_json::from_str(r#"{"deg":2,"terms":[{"idx":[1,2],"re":0.25,"im":0.0}]}"#).unwrap();
        let m2 = multivector_from_dto(&alg, &parsed).unwrap();
        assert_eq!(m2.coeff(&[1, 2]), m.coeff(&[1, 2]));
        // out-of-range indices rejected
        let parsed: MultiVectorDto =
            serde_json::from_str(r#"{"terms":[{"idx":[9],"re":1.0,"im":0.0}]}"#).unwrap();
        assert!(multivector_from_dto(&alg, &parsed).is_err());
    }

    #[test]
    fn subspace_json_roundtrip() {
        let alg = build_algebra(CartanType::parse("A2").unwrap()).unwrap();
        let w = build_l(&alg, &[0], &[Complex64::new(0.4, 0.0), Complex64::new(0.6, 0.1)]).unwrap();
        let dto = subspace_to_dto(&alg, &w);
        let json = serde_json::to_string(&dto).unwrap();
        let parsed: SubspaceDto = serde_json::from_str(&json).unwrap();
        let back = subspace_from_dto(&alg, &parsed).unwrap();
        assert!(w.angle_to(&back) < 1e-12);
    }

    #[test]
    fn algebra_dump_has_exact_strings() {
        let alg = build_algebra(CartanType::parse("A1").unwrap()).unwrap();
        let dump = algebra_dump(&alg);
        assert_eq!(dump.dimension, 3);
        assert_eq!(dump.kappa_ef, vec!["4"]);
        // kappa(h_1, h_1) = 1/2
        assert_eq!(dump.killing[0][0], "1/2");
        let json = serde_json::to_string(&dump).unwrap();
        let parsed: AlgebraDumpDto = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.positive_roots, vec![vec![1]]);
    }
}
