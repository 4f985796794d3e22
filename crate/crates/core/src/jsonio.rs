//! JSON schemas for the domain objects. Field elements are strings ("5",
//! "-3", "2/3") so that exactness survives serialization; the field spec
//! travels alongside the data. Loading performs three stages with distinct
//! error classes: malformed JSON ([`Error::Json`]), schema violations
//! ([`Error::Schema`]), and algebraic invariant violations
//! ([`Error::Axiom`]) with precise locations.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algcore::Algebra;
use crate::braided::{check_algebra_object, AlgebraObject, HopfAlgebra};
use crate::exactlin::{FieldSpec, Mat, Scalar};
use crate::modth::{Filtration, ModuleRep};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDto {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

impl FieldDto {
    pub fn from_spec(f: FieldSpec) -> FieldDto {
        match f {
            FieldSpec::Prime(p) => FieldDto { kind: "prime".into(), p: Some(p) },
            FieldSpec::Rational => FieldDto { kind: "rational".into(), p: None },
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self.kind.as_str() {
            "prime" => {
                let p = self
                    .p
                    .ok_or_else(|| Error::Schema("prime field needs p".into()))?;
                FieldSpec::prime(p)
            }
            "rational" => Ok(FieldSpec::Rational),
            other => Err(Error::Schema(format!("unknown field kind {other:?}"))),
        }
    }
}

/// A standalone matrix file: field spec plus entries as rows of strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatFileDto {
    pub field: FieldDto,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn mat_to_dto(m: &Mat) -> MatFileDto {
    MatFileDto {
        field: FieldDto::from_spec(m.field()),
        rows: m.rows(),
        cols: m.cols(),
        entries: entries_of(m),
    }
}

fn entries_of(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn mat_from_entries(field: FieldSpec, rows: usize, cols: usize, e: &[Vec<String>]) -> Result<Mat> {
    if e.len() != rows {
        return Err(Error::Schema(format!("expected {rows} rows, found {}", e.len())));
    }
    let mut m = Mat::zeros(field, rows, cols);
    for (i, row) in e.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Schema(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, Scalar::parse(field, s)?);
        }
    }
    Ok(m)
}

pub fn mat_from_dto(dto: &MatFileDto) -> Result<Mat> {
    let field = dto.field.to_spec()?;
    mat_from_entries(field, dto.rows, dto.cols, &dto.entries)
}

/// Algebra file: structure constants sc[i][j][k] plus the unit vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDto {
    pub field: FieldDto,
    pub dim: usize,
    pub sc: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
}

pub fn algebra_to_dto(a: &Algebra) -> AlgebraDto {
    let n = a.dim();
    let sc = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a.sc(i, j, k).to_string()).collect())
                .collect()
        })
        .collect();
    AlgebraDto {
        field: FieldDto::from_spec(a.field()),
        dim: n,
        sc,
        unit: (0..n).map(|i| a.unit_row().get(0, i).to_string()).collect(),
    }
}

/// Parse and validate an algebra: shapes first, then the associativity
/// and unit axioms with the violating triples named.
pub fn algebra_from_dto(dto: &AlgebraDto) -> Result<Arc<Algebra>> {
    let field = dto.field.to_spec()?;
    let n = dto.dim;
    if dto.sc.len() != n {
        return Err(Error::Schema(format!("sc has {} slices, expected {n}", dto.sc.len())));
    }
    let mut left = Vec::with_capacity(n);
    for (i, slice) in dto.sc.iter().enumerate() {
        if slice.len() != n {
            return Err(Error::Schema(format!("sc[{i}] has {} rows", slice.len())));
        }
        let mut l = Mat::zeros(field, n, n);
        for (j, prod) in slice.iter().enumerate() {
            if prod.len() != n {
                return Err(Error::Schema(format!("sc[{i}][{j}] has {} entries", prod.len())));
            }
            for (k, s) in prod.iter().enumerate() {
                l.set(k, j, Scalar::parse(field, s)?);
            }
        }
        left.push(l);
    }
    if dto.unit.len() != n {
        return Err(Error::Schema(format!("unit has {} entries, expected {n}", dto.unit.len())));
    }
    let mut unit = Mat::zeros(field, 1, n);
    for (i, s) in dto.unit.iter().enumerate() {
        unit.set(0, i, Scalar::parse(field, s)?);
    }
    let alg = Algebra::new(field, left, unit)?;
    let report = alg.check();
    if !report.is_valid() {
        let mut msg = String::new();
        if let Some(&(i, j, k)) = report.assoc_violations.first() {
            msg.push_str(&format!(
                "associativity fails at triple ({i}, {j}, {k}) [{} total]",
                report.assoc_violations.len()
            ));
        }
        for i in &report.left_unit_violations {
            msg.push_str(&format!(" unit*b_{i} != b_{i};"));
        }
        for i in &report.right_unit_violations {
            msg.push_str(&format!(" b_{i}*unit != b_{i};"));
        }
        return Err(Error::Axiom(msg));
    }
    Ok(Arc::new(alg))
}

/// Module file: inline algebra plus one action matrix per basis element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDto {
    pub algebra: AlgebraDto,
    pub dim: usize,
    pub action: Vec<Vec<Vec<String>>>,
}

pub fn module_to_dto(m: &ModuleRep) -> ModuleDto {
    ModuleDto {
        algebra: algebra_to_dto(m.alg()),
        dim: m.dim(),
        action: (0..m.alg().dim()).map(|i| entries_of(m.action(i))).collect(),
    }
}

pub fn module_from_dto(dto: &ModuleDto) -> Result<ModuleRep> {
    let alg = algebra_from_dto(&dto.algebra)?;
    let field = alg.field();
    if dto.action.len() != alg.dim() {
        return Err(Error::Schema(format!(
            "{} action matrices for an algebra of dimension {}",
            dto.action.len(),
            alg.dim()
        )));
    }
    let mut action = Vec::with_capacity(dto.action.len());
    for e in &dto.action {
        action.push(mat_from_entries(field, dto.dim, dto.dim, e)?);
    }
    let m = ModuleRep::new(alg, action)?;
    m.check_action().map_err(|e| Error::Axiom(e.to_string()))?;
    Ok(m)
}

/// Hopf file: algebra, comultiplication (dim^2 x dim), counit row,
/// antipode and the R-matrix coordinates (flat list of length dim^2).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HopfDto {
    pub algebra: AlgebraDto,
    pub comul: Vec<Vec<String>>,
    pub counit: Vec<String>,
    pub antipode: Vec<Vec<String>>,
    pub rmatrix: Vec<String>,
}

pub fn hopf_to_dto(h: &HopfAlgebra) -> HopfDto {
    let n = h.dim();
    HopfDto {
        algebra: algebra_to_dto(&h.algebra),
        comul: entries_of(&h.comul),
        counit: (0..n).map(|i| h.counit.get(0, i).to_string()).collect(),
        antipode: entries_of(&h.antipode),
        rmatrix: (0..n * n).map(|i| h.rmatrix.get(i, 0).to_string()).collect(),
    }
}

pub fn hopf_from_dto(dto: &HopfDto) -> Result<HopfAlgebra> {
    let alg = algebra_from_dto(&dto.algebra)?;
    let field = alg.field();
    let n = alg.dim();
    let comul = mat_from_entries(field, n * n, n, &dto.comul)?;
    if dto.counit.len() != n {
        return Err(Error::Schema("counit length mismatch".into()));
    }
    let mut counit = Mat::zeros(field, 1, n);
    for (i, s) in dto.counit.iter().enumerate() {
        counit.set(0, i, Scalar::parse(field, s)?);
    }
    let antipode = mat_from_entries(field, n, n, &dto.antipode)?;
    if dto.rmatrix.len() != n * n {
        return Err(Error::Schema("rmatrix length mismatch".into()));
    }
    let mut rmatrix = Mat::zeros(field, n * n, 1);
    for (i, s) in dto.rmatrix.iter().enumerate() {
        rmatrix.set(i, 0, Scalar::parse(field, s)?);
    }
    let h = HopfAlgebra::new(alg, comul, counit, antipode, rmatrix)?;
    let rep = h.check();
    if !rep.is_valid() {
        return Err(Error::Axiom(rep.failures.join("; ")));
    }
    Ok(h)
}

/// Algebra object file: carrier module (over the Hopf algebra, provided
/// separately), multiplication and unit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraObjectDto {
    pub carrier: ModuleDto,
    pub mu: Vec<Vec<String>>,
    pub iota: Vec<String>,
}

pub fn algebra_object_to_dto(a: &AlgebraObject) -> AlgebraObjectDto {
    let d = a.carrier.dim();
    AlgebraObjectDto {
        carrier: module_to_dto(&a.carrier),
        mu: entries_of(&a.mu),
        iota: (0..d).map(|i| a.iota.get(i, 0).to_string()).collect(),
    }
}

/// The carrier must live over the given Hopf algebra; all algebra-object
/// axioms are verified.
pub fn algebra_object_from_dto(dto: &AlgebraObjectDto, h: &HopfAlgebra) -> Result<AlgebraObject> {
    let carrier = module_from_dto(&dto.carrier)?;
    if carrier.alg().as_ref() != h.algebra.as_ref() {
        return Err(Error::Schema(
            "carrier is a module over a different algebra than the Hopf data".into(),
        ));
    }
    // rebind to the shared algebra so downstream identity checks hold
    let carrier = ModuleRep::new(
        Arc::clone(&h.algebra),
        (0..h.dim()).map(|i| carrier.action(i).clone()).collect(),
    )?;
    let d = carrier.dim();
    let field = h.field();
    let mu = mat_from_entries(field, d, d * d, &dto.mu)?;
    if dto.iota.len() != d {
        return Err(Error::Schema("iota length mismatch".into()));
    }
    let mut iota = Mat::zeros(field, d, 1);
    for (i, s) in dto.iota.iter().enumerate() {
        iota.set(i, 0, Scalar::parse(field, s)?);
    }
    let a = AlgebraObject { carrier, mu, iota };
    let rep = check_algebra_object(h, &a)?;
    if !rep.is_valid() {
        return Err(Error::Axiom(rep.failures.join("; ")));
    }
    Ok(a)
}

/// Filtration output: chain of row bases, bottom to top.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiltrationDto {
    pub kind: String,
    pub module_dim: usize,
    pub chain: Vec<Vec<Vec<String>>>,
}

pub fn filtration_to_dto(f: &Filtration) -> FiltrationDto {
    FiltrationDto {
        kind: f.kind.to_string(),
        module_dim: f.module.dim(),
        chain: f.chain.iter().map(entries_of).collect(),
    }
}

pub fn to_json_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialization cannot fail")
}

pub fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn matrix_roundtrip_with_rationals() {
        let q = FieldSpec::Rational;
        let mut m = Mat::zeros(q, 2, 2);
        m.set(0, 0, Scalar::parse(q, "2/3").unwrap());
        m.set(1, 1, Scalar::parse(q, "-5").unwrap());
        let json = to_json_pretty(&mat_to_dto(&m));
        let back = mat_from_dto(&from_json_str(&json).unwrap()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn algebra_roundtrip() {
        let a = corpus::sweedler_algebra(FieldSpec::prime(5).unwrap()).unwrap();
        let json = to_json_pretty(&algebra_to_dto(&a));
        let back = algebra_from_dto(&from_json_str(&json).unwrap()).unwrap();
        assert_eq!(a.as_ref(), back.as_ref());
    }

    #[test]
    fn module_roundtrip_with_validation() {
        let inst = corpus::ModularInstance::new(3, 2, 1).unwrap();
        let m = inst.jordan_module(2, 1).unwrap();
        let json = to_json_pretty(&module_to_dto(&m));
        let back = module_from_dto(&from_json_str(&json).unwrap()).unwrap();
        assert_eq!(back.dim(), m.dim());
        for i in 0..m.alg().dim() {
            assert_eq!(back.action(i), m.action(i));
        }
    }

    #[test]
    fn hopf_roundtrip_with_validation() {
        let h = corpus::sweedler_hopf(5, 1).unwrap();
        let json = to_json_pretty(&hopf_to_dto(&h));
        let back = hopf_from_dto(&from_json_str(&json).unwrap()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn algebra_object_roundtrip() {
        let inst = corpus::SweedlerInstance::new(5, 0).unwrap();
        let dto = algebra_object_to_dto(&inst.ctx.algobj);
        let json = to_json_pretty(&dto);
        let back =
            algebra_object_from_dto(&from_json_str(&json).unwrap(), &inst.ctx.hopf).unwrap();
        assert_eq!(back.mu, inst.ctx.algobj.mu);
        assert_eq!(back.iota, inst.ctx.algobj.iota);
    }

    #[test]
    fn malformed_json_is_a_json_error() {
        let r: Result<AlgebraDto> = from_json_str("{not json");
        assert!(matches!(r, Err(Error::Json(_))));
    }

    #[test]
    fn shape_violation_is_a_schema_error() {
        let a = corpus::sweedler_algebra(FieldSpec::prime(5).unwrap()).unwrap();
        let mut dto = algebra_to_dto(&a);
        dto.unit.pop();
        assert!(matches!(algebra_from_dto(&dto), Err(Error::Schema(_))));
    }

    #[test]
    fn broken_associativity_names_the_triple() {
        let a = corpus::sweedler_algebra(FieldSpec::prime(5).unwrap()).unwrap();
        let mut dto = algebra_to_dto(&a);
        // corrupt x*x from 0 to 1
        dto.sc[2][2][0] = "1".into();
        let err = algebra_from_dto(&dto).unwrap_err();
        match err {
            Error::Axiom(msg) => assert!(msg.contains("triple"), "got: {msg}"),
            other => panic!("expected axiom error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_rmatrix_is_an_axiom_error() {
        let h = corpus::sweedler_hopf(5, 0).unwrap();
        let mut dto = hopf_to_dto(&h);
        // zero out R entirely: not invertible, commutation fails
        for v in dto.rmatrix.iter_mut() {
            *v = "0".into();
        }
        assert!(matches!(hopf_from_dto(&dto), Err(Error::Axiom(_))));
    }

    #[test]
    fn filtration_serializes_as_row_bases() {
        let inst = corpus::NilpotentGen::new(3, 5).unwrap();
        let m = inst.regular_module();
        let f = m.socle_series().unwrap();
        let dto = filtration_to_dto(&f);
        assert_eq!(dto.chain.len(), 4);
        assert_eq!(dto.kind, "socle");
        let _ = to_json_pretty(&dto);
    }
}
