//! Concrete braided categories as module categories of quasitriangular Hopf
//! algebras, commutative simple-current algebra objects, induction to
//! smash-product modules, and the verification suite for filtration and
//! diagram preservation.
//!
//! The vector-space model is strict: associators and unitors are the
//! canonical identifications under the fixed left-factor-major tensor index
//! pairing, so they never appear as matrices. The braiding is
//! `flip . (R-action)`.
//!
//! Modules over the algebra object are materialized as modules over the
//! smash product A # H, which turns the equivariant module axioms into
//! ordinary module theory; everything from [`crate::modth`] then applies
//! unchanged.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algcore::Algebra;
use crate::exactlin::{subspace_eq, FieldSpec, Mat, Scalar};
use crate::loewy::{diagrams_match, loewy_diagram};
use crate::modth::{splits, FiltrationKind, LabelId, LabelRegistry, ModuleRep, SearchCfg};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Hopf data
// ---------------------------------------------------------------------------

/// Quasitriangular Hopf algebra over an exact field.
///
/// * `comul` is the matrix of the comultiplication H -> H (x) H, a column
///   per basis element under the left-major pairing (a,b) -> a*dim + b;
/// * `counit` is a 1 x dim row;
/// * `antipode` is dim x dim, columns are images of basis elements;
/// * `rmatrix` holds the coordinates of R in H (x) H as a dim^2 x 1 column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfAlgebra {
    pub algebra: Arc<Algebra>,
    pub comul: Mat,
    pub counit: Mat,
    pub antipode: Mat,
    pub rmatrix: Mat,
}

/// Result of the full Hopf axiom check; empty `failures` means valid.
#[derive(Debug, Clone, Default, Serialize)]
pub struct HopfReport {
    pub failures: Vec<String>,
}

impl HopfReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Product of two elements of H (x) H given as dim^2 x 1 coordinate
/// columns, exploiting sparsity.
fn tensor2_mul(alg: &Algebra, u: &Mat, v: &Mat) -> Mat {
    let n = alg.dim();
    let field = alg.field();
    let mut out = Mat::zeros(field, n * n, 1);
    for ab in 0..n * n {
        let cu = u.get(ab, 0);
        if cu.is_zero() {
            continue;
        }
        let (a, b) = (ab / n, ab % n);
        for cd in 0..n * n {
            let cv = v.get(cd, 0);
            if cv.is_zero() {
                continue;
            }
            let (c, d) = (cd / n, cd % n);
            // (b_a (x) b_b)(b_c (x) b_d) = (b_a b_c) (x) (b_b b_d)
            let left = alg.left_mult(a).select_cols(&[c]);
            let right = alg.left_mult(b).select_cols(&[d]);
            let coeff = mul_scalar(&cu, &cv, field);
            for i in 0..n {
                let li = left.get(i, 0);
                if li.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let rj = right.get(j, 0);
                    if rj.is_zero() {
                        continue;
                    }
                    let add = mul_scalar(&mul_scalar(&li, &rj, field), &coeff, field);
                    let cur = out.get(i * n + j, 0);
                    out.set(i * n + j, 0, add_scalar(&cur, &add, field));
                }
            }
        }
    }
    out
}

/// Product in H (x) H (x) H for sparse dim^3 x 1 columns.
fn tensor3_mul(alg: &Algebra, u: &Mat, v: &Mat) -> Mat {
    let n = alg.dim();
    let field = alg.field();
    let mut out = Mat::zeros(field, n * n * n, 1);
    for iu in 0..n * n * n {
        let cu = u.get(iu, 0);
        if cu.is_zero() {
            continue;
        }
        let (a, rest) = (iu / (n * n), iu % (n * n));
        let (b, c) = (rest / n, rest % n);
        for iv in 0..n * n * n {
            let cv = v.get(iv, 0);
            if cv.is_zero() {
                continue;
            }
            let (d, rest) = (iv / (n * n), iv % (n * n));
            let (e, f) = (rest / n, rest % n);
            let l1 = alg.left_mult(a).select_cols(&[d]);
            let l2 = alg.left_mult(b).select_cols(&[e]);
            let l3 = alg.left_mult(c).select_cols(&[f]);
            let coeff = mul_scalar(&cu, &cv, field);
            for i in 0..n {
                let x = l1.get(i, 0);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = l2.get(j, 0);
                    if y.is_zero() {
                        continue;
                    }
                    let xy = mul_scalar(&x, &y, field);
                    for k in 0..n {
                        let z = l3.get(k, 0);
                        if z.is_zero() {
                            continue;
                        }
                        let add = mul_scalar(&mul_scalar(&xy, &z, field), &coeff, field);
                        let idx = (i * n + j) * n + k;
                        let cur = out.get(idx, 0);
                        out.set(idx, 0, add_scalar(&cur, &add, field));
                    }
                }
            }
        }
    }
    out
}

fn mul_scalar(a: &Scalar, b: &Scalar, field: FieldSpec) -> Scalar {
    match (a, b) {
        (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x * y) % field.characteristic()),
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
        _ => unreachable!(),
    }
}

fn add_scalar(a: &Scalar, b: &Scalar, field: FieldSpec) -> Scalar {
    match (a, b) {
        (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % field.characteristic()),
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
        _ => unreachable!(),
    }
}

impl HopfAlgebra {
    pub fn new(
        algebra: Arc<Algebra>,
        comul: Mat,
        counit: Mat,
        antipode: Mat,
        rmatrix: Mat,
    ) -> Result<HopfAlgebra> {
        let n = algebra.dim();
        if comul.rows() != n * n || comul.cols() != n {
            return Err(Error::DimMismatch("comultiplication must be dim^2 x dim".into()));
        }
        if counit.rows() != 1 || counit.cols() != n {
            return Err(Error::DimMismatch("counit must be 1 x dim".into()));
        }
        if antipode.rows() != n || antipode.cols() != n {
            return Err(Error::DimMismatch("antipode must be dim x dim".into()));
        }
        if rmatrix.rows() != n * n || rmatrix.cols() != 1 {
            return Err(Error::DimMismatch("rmatrix must be dim^2 x 1".into()));
        }
        Ok(HopfAlgebra { algebra, comul, counit, antipode, rmatrix })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    /// Coordinates of Delta(b_j) as a dim^2 x 1 column.
    fn comul_col(&self, j: usize) -> Mat {
        self.comul.select_cols(&[j])
    }

    /// Full axiom check: coassociativity, counit laws, bialgebra
    /// compatibility, the antipode axiom, and quasitriangularity.
    pub fn check(&self) -> HopfReport {
        let mut failures = Vec::new();
        let n = self.dim();
        let field = self.field();
        let alg = self.algebra.as_ref();
        let id = Mat::identity(field, n);
        // coassociativity
        let lhs = self.comul.kron(&id).matmul(&self.comul);
        let rhs = id.kron(&self.comul).matmul(&self.comul);
        if lhs != rhs {
            failures.push("coassociativity fails".into());
        }
        // counit laws
        if self.counit.kron(&id).matmul(&self.comul) != id {
            failures.push("left counit law fails".into());
        }
        if id.kron(&self.counit).matmul(&self.comul) != id {
            failures.push("right counit law fails".into());
        }
        // Delta and the counit are algebra maps
        let unit = alg.unit_row();
        let delta_unit = self.comul.matmul(&unit.transpose());
        if delta_unit != unit.transpose().kron(&unit.transpose()) {
            failures.push("comultiplication does not preserve the unit".into());
        }
        if self.counit.matmul(&unit.transpose()) != Mat::identity(field, 1) {
            failures.push("counit does not preserve the unit".into());
        }
        for i in 0..n {
            for j in 0..n {
                let prod = alg.left_mult(i).select_cols(&[j]); // b_i b_j coords
                let lhs = self.comul.matmul(&prod);
                let rhs = tensor2_mul(alg, &self.comul_col(i), &self.comul_col(j));
                if lhs != rhs {
                    failures.push(format!("comultiplication not multiplicative at ({i}, {j})"));
                }
                let eps_prod = self.counit.matmul(&prod);
                let want = mul_scalar(&self.counit.get(0, i), &self.counit.get(0, j), field);
                if eps_prod.get(0, 0) != want {
                    failures.push(format!("counit not multiplicative at ({i}, {j})"));
                }
            }
        }
        // antipode axiom on every basis element
        for j in 0..n {
            let mut left_acc = Mat::zeros(field, 1, n);
            let mut right_acc = Mat::zeros(field, 1, n);
            let col = self.comul_col(j);
            for ab in 0..n * n {
                let c = col.get(ab, 0);
                if c.is_zero() {
                    continue;
                }
                let (a, b) = (ab / n, ab % n);
                let sa = self.antipode.select_cols(&[a]).transpose();
                let sb = self.antipode.select_cols(&[b]).transpose();
                let ea = Mat::identity(field, n).row(a);
                let eb = Mat::identity(field, n).row(b);
                left_acc = left_acc.add(&alg.mul_elems(&sa, &eb).scale(&c));
                right_acc = right_acc.add(&alg.mul_elems(&ea, &sb).scale(&c));
            }
            let want = unit.scale(&self.counit.get(0, j));
            if left_acc != want {
                failures.push(format!("antipode axiom (S x id) fails on basis {j}"));
            }
            if right_acc != want {
                failures.push(format!("antipode axiom (id x S) fails on basis {j}"));
            }
        }
        // quasitriangularity: R invertible in H (x) H
        let mut l_r = Mat::zeros(field, n * n, n * n);
        for ab in 0..n * n {
            let c = self.rmatrix.get(ab, 0);
            if c.is_zero() {
                continue;
            }
            let (a, b) = (ab / n, ab % n);
            l_r = l_r.add(&alg.left_mult(a).kron(alg.left_mult(b)).scale(&c));
        }
        if l_r.rank() != n * n {
            failures.push("rmatrix is not invertible".into());
        }
        // (Delta x id) R = R13 R23 and (id x Delta) R = R13 R12
        let r13 = self.embed_r(13);
        let r23 = self.embed_r(23);
        let r12 = self.embed_r(12);
        if self.comul.kron(&id).matmul(&self.rmatrix) != tensor3_mul(alg, &r13, &r23) {
            failures.push("(Delta x id) R != R13 R23".into());
        }
        if id.kron(&self.comul).matmul(&self.rmatrix) != tensor3_mul(alg, &r13, &r12) {
            failures.push("(id x Delta) R != R13 R12".into());
        }
        // R Delta(h) = Delta^op(h) R on every basis element
        let flip2 = flip_matrix(field, n, n);
        for j in 0..n {
            let dj = self.comul_col(j);
            let dop = flip2.matmul(&dj);
            if tensor2_mul(alg, &self.rmatrix, &dj) != tensor2_mul(alg, &dop, &self.rmatrix) {
                failures.push(format!("R-commutation fails on basis {j}"));
            }
        }
        HopfReport { failures }
    }

    /// Embed R into one of the three leg pairs of the triple tensor power.
    fn embed_r(&self, legs: u8) -> Mat {
        let n = self.dim();
        let field = self.field();
        let unit = self.algebra.unit_row();
        let mut out = Mat::zeros(field, n * n * n, 1);
        for ab in 0..n * n {
            let c = self.rmatrix.get(ab, 0);
            if c.is_zero() {
                continue;
            }
            let (a, b) = (ab / n, ab % n);
            for u in 0..n {
                let uc = unit.get(0, u);
                if uc.is_zero() {
                    continue;
                }
                let idx = match legs {
                    12 => (a * n + b) * n + u,
                    13 => (a * n + u) * n + b,
                    23 => (u * n + a) * n + b,
                    _ => unreachable!(),
                };
                let cur = out.get(idx, 0);
                out.set(idx, 0, add_scalar(&cur, &mul_scalar(&c, &uc, field), field));
            }
        }
        out
    }
}

/// Permutation matrix M (x) N -> N (x) M for the fixed index pairing.
fn flip_matrix(field: FieldSpec, dm: usize, dn: usize) -> Mat {
    let mut p = Mat::zeros(field, dn * dm, dm * dn);
    for i in 0..dm {
        for k in 0..dn {
            p.set(k * dm + i, i * dn + k, Scalar::from_i64(field, 1));
        }
    }
    p
}

// ---------------------------------------------------------------------------
// tensor structure on modules
// ---------------------------------------------------------------------------

/// The monoidal unit: the ground field with the counit action.
pub fn unit_object(h: &HopfAlgebra) -> ModuleRep {
    let action = (0..h.dim())
        .map(|j| Mat::from_fn(h.field(), 1, 1, |_, _| h.counit.get(0, j)))
        .collect();
    ModuleRep::new(Arc::clone(&h.algebra), action).expect("counit action is unital")
}

/// Tensor product module: the action through the comultiplication.
pub fn tensor_module(h: &HopfAlgebra, m: &ModuleRep, n: &ModuleRep) -> Result<ModuleRep> {
    if m.alg() != &h.algebra || n.alg() != &h.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let nn = h.dim();
    let field = h.field();
    let d = m.dim() * n.dim();
    let mut action = Vec::with_capacity(nn);
    for j in 0..nn {
        let col = h.comul.select_cols(&[j]);
        let mut acc = Mat::zeros(field, d, d);
        for ab in 0..nn * nn {
            let c = col.get(ab, 0);
            if c.is_zero() {
                continue;
            }
            let (a, b) = (ab / nn, ab % nn);
            acc = acc.add(&m.action(a).kron(n.action(b)).scale(&c));
        }
        action.push(acc);
    }
    ModuleRep::new(Arc::clone(&h.algebra), action)
}

/// Braiding isomorphism M (x) N -> N (x) M: flip composed with the
/// R-matrix action. The result is an invertible intertwiner.
pub fn braiding(h: &HopfAlgebra, m: &ModuleRep, n: &ModuleRep) -> Result<Mat> {
    if m.alg() != &h.algebra || n.alg() != &h.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let nn = h.dim();
    let field = h.field();
    let d = m.dim() * n.dim();
    let mut r_act = Mat::zeros(field, d, d);
    for ab in 0..nn * nn {
        let c = h.rmatrix.get(ab, 0);
        if c.is_zero() {
            continue;
        }
        let (a, b) = (ab / nn, ab % nn);
        r_act = r_act.add(&m.action(a).kron(n.action(b)).scale(&c));
    }
    Ok(flip_matrix(field, m.dim(), n.dim()).matmul(&r_act))
}

/// Naturality square of the braiding for module maps f: M -> M' and
/// g: N -> N': c . (f (x) g) = (g (x) f) . c.
pub fn braiding_is_natural(
    h: &HopfAlgebra,
    m: &ModuleRep,
    n: &ModuleRep,
    m2: &ModuleRep,
    n2: &ModuleRep,
    f: &Mat,
    g: &Mat,
) -> Result<bool> {
    let c1 = braiding(h, m, n)?;
    let c2 = braiding(h, m2, n2)?;
    Ok(c2.matmul(&f.kron(g)) == g.kron(f).matmul(&c1))
}

/// Dual module with evaluation and coevaluation. The dual action is the
/// transpose through the antipode; the snake identities hold by
/// construction and are asserted in tests.
pub fn dual_module(h: &HopfAlgebra, m: &ModuleRep) -> Result<(ModuleRep, Mat, Mat)> {
    if m.alg() != &h.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let d = m.dim();
    let field = h.field();
    let action = (0..h.dim())
        .map(|j| {
            let sj = h.antipode.select_cols(&[j]).transpose();
            m.act_of(&sj).transpose()
        })
        .collect();
    let dual = ModuleRep::new(Arc::clone(&h.algebra), action)?;
    // ev: M* (x) M -> 1 pairs f with v; coev: 1 -> M (x) M* inserts the
    // identity tensor
    let mut ev = Mat::zeros(field, 1, d * d);
    let mut coev = Mat::zeros(field, d * d, 1);
    for i in 0..d {
        ev.set(0, i * d + i, Scalar::from_i64(field, 1));
        coev.set(i * d + i, 0, Scalar::from_i64(field, 1));
    }
    Ok((dual, ev, coev))
}

/// Invertible object test: evaluation and coevaluation are invertible
/// matrices. In this model that is equivalent to the carrier being
/// one-dimensional; both checks run and must agree.
pub fn is_invertible(h: &HopfAlgebra, u: &ModuleRep) -> Result<bool> {
    let (_, ev, coev) = dual_module(h, u)?;
    let by_matrices = ev.is_square()
        && ev.rank() == ev.rows()
        && coev.is_square()
        && coev.rank() == coev.rows();
    let by_dim = u.dim() == 1;
    assert_eq!(by_matrices, by_dim, "invertibility checks disagree");
    Ok(by_dim)
}

/// No non-unit member of the family fixes any of the listed simples:
/// U (x) N is never isomorphic to N. Quantification is over the declared
/// simple list.
pub fn fixed_point_free(
    h: &HopfAlgebra,
    family: &[ModuleRep],
    simples: &[ModuleRep],
    cfg: &SearchCfg,
) -> Result<bool> {
    let one = unit_object(h);
    for u in family {
        if !is_invertible(h, u)? {
            return Err(Error::Invalid("family member is not invertible".into()));
        }
        if u.is_isomorphic(&one, cfg)? {
            continue;
        }
        for n in simples {
            let un = tensor_module(h, u, n)?;
            if un.is_isomorphic(n, cfg)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// algebra objects
// ---------------------------------------------------------------------------

/// Commutative algebra object in the module category: a carrier module
/// with multiplication mu: A (x) A -> A (carrier_dim x carrier_dim^2) and
/// unit iota: 1 -> A (carrier_dim x 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraObject {
    pub carrier: ModuleRep,
    pub mu: Mat,
    pub iota: Mat,
}

/// Axiom report for an algebra object; empty means valid.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AlgebraObjectReport {
    pub failures: Vec<String>,
}

impl AlgebraObjectReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check equivariance of mu and iota, associativity, the unit law, and
/// commutativity with respect to the braiding.
pub fn check_algebra_object(h: &HopfAlgebra, a: &AlgebraObject) -> Result<AlgebraObjectReport> {
    let mut failures = Vec::new();
    let d = a.carrier.dim();
    let field = h.field();
    if a.mu.rows() != d || a.mu.cols() != d * d {
        return Err(Error::DimMismatch("mu must be d x d^2".into()));
    }
    if a.iota.rows() != d || a.iota.cols() != 1 {
        return Err(Error::DimMismatch("iota must be d x 1".into()));
    }
    let aa = tensor_module(h, &a.carrier, &a.carrier)?;
    for j in 0..h.dim() {
        if a.mu.matmul(aa.action(j)) != a.carrier.action(j).matmul(&a.mu) {
            failures.push(format!("mu is not equivariant for basis {j}"));
        }
        let lhs = a.carrier.action(j).matmul(&a.iota);
        let rhs = a.iota.scale(&h.counit.get(0, j));
        if lhs != rhs {
            failures.push(format!("iota is not equivariant for basis {j}"));
        }
    }
    let id = Mat::identity(field, d);
    // associativity mu . (mu (x) id) = mu . (id (x) mu)
    if a.mu.matmul(&a.mu.kron(&id)) != a.mu.matmul(&id.kron(&a.mu)) {
        failures.push("mu is not associative".into());
    }
    // unit law mu . (iota (x) id) = id
    if a.mu.matmul(&a.iota.kron(&id)) != id {
        failures.push("unit law fails".into());
    }
    // commutativity mu . c_{A,A} = mu
    let c = braiding(h, &a.carrier, &a.carrier)?;
    if a.mu.matmul(&c) != a.mu {
        failures.push("mu is not commutative with respect to the braiding".into());
    }
    Ok(AlgebraObjectReport { failures })
}

/// The unit object as a (trivial) commutative algebra object.
pub fn unit_algebra_object(h: &HopfAlgebra) -> AlgebraObject {
    AlgebraObject {
        carrier: unit_object(h),
        mu: Mat::identity(h.field(), 1),
        iota: Mat::identity(h.field(), 1),
    }
}

/// Biproduct decomposition of the carrier into invertible summands.
#[derive(Debug, Clone)]
pub struct CurrentDecomposition {
    /// (summand module, inclusion rows 1 x d, projection 1 x d).
    pub summands: Vec<(ModuleRep, Mat, Mat)>,
    pub unit_index: usize,
    /// Closure table: index k with U_i (x) U_j isomorphic to U_k.
    pub tensor_table: Vec<Vec<usize>>,
}

/// Decompose the carrier into invertible summands, identify the unit
/// summand, and verify closure under tensor products. Fails loudly when a
/// summand is not invertible or the unit is missing.
pub fn current_decomposition(
    h: &HopfAlgebra,
    a: &AlgebraObject,
    cfg: &SearchCfg,
) -> Result<CurrentDecomposition> {
    let carrier = &a.carrier;
    if carrier.radical()?.rows() != 0 {
        return Err(Error::Invalid(
            "carrier is not semisimple, so it is not a sum of invertibles".into(),
        ));
    }
    // peel simple summands keeping their ambient bases
    let mut bases: Vec<Mat> = Vec::new();
    let mut cur_basis = Mat::identity(h.field(), carrier.dim());
    while cur_basis.rows() > 0 {
        let (cur, _) = carrier.submodule(&cur_basis)?;
        let sbasis = crate::modth::find_simple_submodule(&cur, cfg)?;
        let ambient = sbasis.matmul(&cur_basis).row_space();
        let (smod, _) = carrier.submodule(&ambient)?;
        if !is_invertible(h, &smod)? {
            return Err(Error::Invalid(format!(
                "summand of dimension {} is not invertible",
                smod.dim()
            )));
        }
        bases.push(ambient.clone());
        // remove the summand inside current coordinates
        let in_cur = cur_basis
            .transpose()
            .solve(&ambient.transpose())?
            .expect("summand lies inside the current complement")
            .transpose();
        let (sub_in_cur, _) = cur.submodule(&in_cur)?;
        let h_retr = retraction_for(&cur, &sub_in_cur, &in_cur)?;
        let rest = h_retr.kernel();
        cur_basis = rest.matmul(&cur_basis).row_space();
    }
    // assemble inclusions and projections of the biproduct
    let refs: Vec<&Mat> = bases.iter().collect();
    let t = Mat::vstack_all(h.field(), carrier.dim(), &refs);
    let tinv = t
        .inverse()
        .ok_or_else(|| Error::Invalid("summand bases do not span the carrier".into()))?;
    let mut summands = Vec::new();
    for (i, b) in bases.iter().enumerate() {
        let (smod, _) = carrier.submodule(b)?;
        let proj = tinv.select_cols(&[i]).transpose();
        summands.push((smod, b.clone(), proj));
    }
    // identify the unit summand
    let one = unit_object(h);
    let mut unit_index = None;
    for (i, (s, _, _)) in summands.iter().enumerate() {
        if s.is_isomorphic(&one, cfg)? {
            unit_index = Some(i);
            break;
        }
    }
    let unit_index = unit_index
        .ok_or_else(|| Error::Invalid("no summand is isomorphic to the monoidal unit".into()))?;
    // closure under tensor products
    let k = summands.len();
    let mut tensor_table = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in 0..k {
            let uij = tensor_module(h, &summands[i].0, &summands[j].0)?;
            let mut found = None;
            for (l, (s, _, _)) in summands.iter().enumerate() {
                if uij.is_isomorphic(s, cfg)? {
                    found = Some(l);
                    break;
                }
            }
            tensor_table[i][j] = found.ok_or_else(|| {
                Error::Invalid(format!("family is not closed: U_{i} (x) U_{j} escapes"))
            })?;
        }
    }
    Ok(CurrentDecomposition { summands, unit_index, tensor_table })
}

fn retraction_for(m: &ModuleRep, sub: &ModuleRep, incl_rows: &Mat) -> Result<Mat> {
    // a semisimple carrier always splits
    let hom = m.hom_space(sub)?;
    let f = incl_rows.transpose();
    let rows: Vec<Mat> = hom.iter().map(|h| h.matmul(&f).vec_row()).collect();
    let refs: Vec<&Mat> = rows.iter().collect();
    let lhs = Mat::vstack_all(m.field(), sub.dim() * sub.dim(), &refs).transpose();
    let rhs = Mat::identity(m.field(), sub.dim()).vec_row().transpose();
    let c = lhs
        .solve(&rhs)?
        .ok_or_else(|| Error::Invalid("summand does not split off".into()))?;
    let mut acc = Mat::zeros(m.field(), sub.dim(), m.dim());
    for (i, hm) in hom.iter().enumerate() {
        let ci = c.get(i, 0);
        if ci.is_zero() {
            continue;
        }
        acc = acc.add(&hm.scale(&ci));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// smash product and induction
// ---------------------------------------------------------------------------

/// The smash product A # H on the basis a_i (x) h_j (A-major pairing),
/// with product (a (x) h)(b (x) k) = sum a (h_(1) b) (x) h_(2) k.
pub fn smash_product(h: &HopfAlgebra, a: &AlgebraObject) -> Result<Arc<Algebra>> {
    let da = a.carrier.dim();
    let nh = h.dim();
    let field = h.field();
    let dim = da * nh;
    // left multiplication by mu with a fixed first argument
    let lmu: Vec<Mat> = (0..da)
        .map(|i| Mat::from_fn(field, da, da, |r, k| a.mu.get(r, i * da + k)))
        .collect();
    let mut left = Vec::with_capacity(dim);
    for i in 0..da {
        for j in 0..nh {
            let mut l = Mat::zeros(field, dim, dim);
            let col = h.comul.select_cols(&[j]);
            for st in 0..nh * nh {
                let c = col.get(st, 0);
                if c.is_zero() {
                    continue;
                }
                let (s, t) = (st / nh, st % nh);
                // A-part: a_i . (h_s . a_k); H-part: h_t h_l
                let apart = lmu[i].matmul(a.carrier.action(s));
                let hpart = h.algebra.left_mult(t);
                l = l.add(&apart.kron(hpart).scale(&c));
            }
            left.push(l);
        }
    }
    // unit: iota(1) (x) 1_H
    let unit = a.iota.transpose().kron(h.algebra.unit_row());
    Ok(Arc::new(Algebra::new(field, left, unit)?))
}

/// Everything needed to induce and restrict: the Hopf data, the algebra
/// object, and the cached smash product.
pub struct InductionContext {
    pub hopf: HopfAlgebra,
    pub algobj: AlgebraObject,
    pub smash: Arc<Algebra>,
}

impl InductionContext {
    pub fn new(hopf: HopfAlgebra, algobj: AlgebraObject) -> Result<InductionContext> {
        let smash = smash_product(&hopf, &algobj)?;
        Ok(InductionContext { hopf, algobj, smash })
    }

    /// Induce a module: the carrier is A (x) M (A-major) with the smash
    /// acting by (a (x) h) . (b (x) m) = a (h_(1) b) (x) h_(2) m.
    pub fn induce(&self, m: &ModuleRep) -> Result<ModuleRep> {
        if m.alg() != &self.hopf.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let da = self.algobj.carrier.dim();
        let nh = self.hopf.dim();
        let field = self.hopf.field();
        let lmu: Vec<Mat> = (0..da)
            .map(|i| Mat::from_fn(field, da, da, |r, k| self.algobj.mu.get(r, i * da + k)))
            .collect();
        let mut action = Vec::with_capacity(da * nh);
        for i in 0..da {
            for j in 0..nh {
                let mut acc = Mat::zeros(field, da * m.dim(), da * m.dim());
                let col = self.hopf.comul.select_cols(&[j]);
                for st in 0..nh * nh {
                    let c = col.get(st, 0);
                    if c.is_zero() {
                        continue;
                    }
                    let (s, t) = (st / nh, st % nh);
                    let apart = lmu[i].matmul(self.algobj.carrier.action(s));
                    acc = acc.add(&apart.kron(m.action(t)).scale(&c));
                }
                action.push(acc);
            }
        }
        ModuleRep::new(Arc::clone(&self.smash), action)
    }

    /// Functor on morphisms: id_A (x) f. The input must intertwine the
    /// Hopf-algebra actions.
    pub fn induce_morphism(&self, f: &Mat, from: &ModuleRep, to: &ModuleRep) -> Result<Mat> {
        if f.rows() != to.dim() || f.cols() != from.dim() {
            return Err(Error::DimMismatch("morphism shape mismatch".into()));
        }
        for &g in self.hopf.algebra.generator_indices() {
            if f.matmul(from.action(g)) != to.action(g).matmul(f) {
                return Err(Error::NotIntertwiner);
            }
        }
        let id_a = Mat::identity(self.hopf.field(), self.algobj.carrier.dim());
        Ok(id_a.kron(f))
    }

    /// Forget the algebra-object action: pull the module back along the
    /// embedding h -> iota(1) (x) h of the Hopf algebra into the smash.
    pub fn restrict(&self, n: &ModuleRep) -> Result<ModuleRep> {
        if n.alg() != &self.smash {
            return Err(Error::AlgebraMismatch);
        }
        let da = self.algobj.carrier.dim();
        let nh = self.hopf.dim();
        let field = self.hopf.field();
        let mut action = Vec::with_capacity(nh);
        for j in 0..nh {
            let mut acc = Mat::zeros(field, n.dim(), n.dim());
            for i in 0..da {
                let c = self.algobj.iota.get(i, 0);
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&n.action(i * nh + j).scale(&c));
            }
            action.push(acc);
        }
        ModuleRep::new(Arc::clone(&self.hopf.algebra), action)
    }

    /// Adjunction dimension pair: Hom over the smash from the induced
    /// module to n, and Hom over the Hopf algebra from m to the
    /// restriction of n. The two dimensions agree on all valid inputs.
    pub fn frobenius_dims(&self, m: &ModuleRep, n: &ModuleRep) -> Result<(usize, usize)> {
        let fm = self.induce(m)?;
        let d1 = fm.hom_space(n)?.len();
        let gn = self.restrict(n)?;
        let d2 = m.hom_space(&gn)?.len();
        Ok((d1, d2))
    }

    /// The induced subspace A (x) W inside A (x) M, as rows.
    pub fn induce_subspace(&self, w: &Mat) -> Mat {
        let id_a = Mat::identity(self.hopf.field(), self.algobj.carrier.dim());
        id_a.kron(w).row_space()
    }

    /// Induce an inclusion given by rows: id_A (x) f on row bases.
    pub fn induce_subspace_map(&self, incl_rows: &Mat) -> Mat {
        let id_a = Mat::identity(self.hopf.field(), self.algobj.carrier.dim());
        id_a.kron(incl_rows)
    }
}

// ---------------------------------------------------------------------------
// verification suite
// ---------------------------------------------------------------------------

/// Hypothesis checks for the preservation statement.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesesReport {
    /// The algebra object is simple as a module over itself (checked on
    /// the induced unit, whose carrier is the algebra object).
    pub regular_simple: bool,
    /// No non-unit summand fixes a declared simple.
    pub fixed_point_free: bool,
    /// Some summand is the monoidal unit.
    pub unit_summand: bool,
    /// Every summand is simple.
    pub summands_simple: bool,
    pub details: Vec<String>,
}

impl HypothesesReport {
    pub fn all_pass(&self) -> bool {
        self.regular_simple && self.fixed_point_free && self.unit_summand && self.summands_simple
    }
}

pub fn verify_hypotheses(
    ctx: &InductionContext,
    simples: &[ModuleRep],
    cfg: &SearchCfg,
) -> Result<HypothesesReport> {
    let mut details = Vec::new();
    let dec = match current_decomposition(&ctx.hopf, &ctx.algobj, cfg) {
        Ok(d) => Some(d),
        Err(e) => {
            details.push(format!("decomposition failed: {e}"));
            None
        }
    };
    let (unit_summand, summands_simple, family): (bool, bool, Vec<ModuleRep>) = match &dec {
        Some(d) => {
            let mut simple_ok = true;
            for (s, _, _) in &d.summands {
                if !s.is_simple(cfg)? {
                    simple_ok = false;
                    details.push(format!("summand of dim {} is not simple", s.dim()));
                }
            }
            (true, simple_ok, d.summands.iter().map(|(s, _, _)| s.clone()).collect())
        }
        None => (false, false, Vec::new()),
    };
    let fpf = if family.is_empty() {
        false
    } else {
        fixed_point_free(&ctx.hopf, &family, simples, cfg)?
    };
    if !fpf {
        details.push("a non-unit current fixes a declared simple".into());
    }
    // the algebra object as a module over itself: induce the unit object
    let reg = ctx.induce(&unit_object(&ctx.hopf))?;
    let regular_simple = reg.is_simple(cfg)?;
    if !regular_simple {
        details.push(format!(
            "the algebra object is not simple as a module over itself (dim {})",
            reg.dim()
        ));
    }
    Ok(HypothesesReport {
        regular_simple,
        fixed_point_free: fpf,
        unit_summand,
        summands_simple,
        details,
    })
}

/// One strong-exactness sample: does a submodule inclusion split on both
/// sides of induction in the same way?
#[derive(Debug, Clone, Serialize)]
pub struct ExactnessSample {
    pub sub_dim: usize,
    pub splits_before: bool,
    pub splits_after: bool,
}

/// Full preservation report for one module.
#[derive(Debug, Clone, Serialize)]
pub struct PreservationReport {
    pub module_dim: usize,
    pub kind: String,
    pub hypotheses: HypothesesReport,
    /// F(Soc M) = Soc(F M) as subspaces of the induced module.
    pub socle_preserved: bool,
    /// F(Rad M) = Rad(F M) as subspaces.
    pub radical_preserved: bool,
    /// Loewy lengths of M and F M agree.
    pub lengths_match: bool,
    /// F(term_k) = term_k(F M) for every term of the chosen series.
    pub filtration_preserved: bool,
    /// Diagrams match under the induced label map.
    pub diagrams_match: bool,
    pub exactness_samples: Vec<ExactnessSample>,
    /// Both sides of the simple-factor counting identity.
    pub hom_count_lhs: usize,
    pub hom_count_rhs: usize,
    pub details: Vec<String>,
}

impl PreservationReport {
    pub fn all_pass(&self) -> bool {
        self.hypotheses.all_pass()
            && self.socle_preserved
            && self.radical_preserved
            && self.lengths_match
            && self.filtration_preserved
            && self.diagrams_match
            && self
                .exactness_samples
                .iter()
                .all(|s| s.splits_before == s.splits_after)
            && self.hom_count_lhs == self.hom_count_rhs
    }
}

/// Run the whole preservation check list on one module.
pub fn verify_preservation(
    ctx: &InductionContext,
    m: &ModuleRep,
    kind: FiltrationKind,
    simples: &[ModuleRep],
    cfg: &SearchCfg,
) -> Result<PreservationReport> {
    let hypotheses = verify_hypotheses(ctx, simples, cfg)?;
    let mut details = Vec::new();
    let fm = ctx.induce(m)?;
    // socle and radical as subspaces
    let socle_preserved = subspace_eq(&ctx.induce_subspace(&m.socle()?), &fm.socle()?)?;
    let radical_preserved = subspace_eq(&ctx.induce_subspace(&m.radical()?), &fm.radical()?)?;
    if !socle_preserved {
        details.push("F(Soc M) differs from Soc(F M)".into());
    }
    if !radical_preserved {
        details.push("F(Rad M) differs from Rad(F M)".into());
    }
    // series term by term
    let (series_m, series_fm) = match kind {
        FiltrationKind::Socle => (m.socle_series()?, fm.socle_series()?),
        FiltrationKind::Radical => (m.radical_series()?, fm.radical_series()?),
    };
    let lengths_match = series_m.len() == series_fm.len();
    let mut filtration_preserved = lengths_match;
    if lengths_match {
        for k in 0..=series_m.len() {
            if !subspace_eq(&ctx.induce_subspace(series_m.term(k)), series_fm.term(k))? {
                filtration_preserved = false;
                details.push(format!("series term {k} is not preserved"));
            }
        }
    } else {
        details.push(format!(
            "Loewy lengths differ: {} vs {}",
            series_m.len(),
            series_fm.len()
        ));
    }
    // diagrams under the induced label map
    let mut reg_h = LabelRegistry::new(cfg.clone());
    let mut reg_s = LabelRegistry::new(cfg.clone());
    let d1 = loewy_diagram(m, kind, &mut reg_h, cfg)?;
    let d2 = loewy_diagram(&fm, kind, &mut reg_s, cfg)?;
    let mut label_map: BTreeMap<LabelId, LabelId> = BTreeMap::new();
    for &l in d1.layers.iter().flatten() {
        if label_map.contains_key(&l) {
            continue;
        }
        let induced = ctx.induce(&reg_h.rep(l).clone())?;
        let target = reg_s.label_of(&induced)?;
        label_map.insert(l, target);
    }
    let dmatch = diagrams_match(&d1, &d2, &label_map)?;
    if !dmatch {
        details.push("diagrams do not match under the induced label map".into());
    }
    // strong exactness samples: series terms plus seeded random spins
    let mut samples = Vec::new();
    let mut sampled: Vec<Mat> = Vec::new();
    for k in 1..series_m.chain.len().saturating_sub(1) {
        sampled.push(series_m.term(k).clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x65786163);
    let mut tries = 0;
    while sampled.len() < 8 && m.dim() > 0 && tries < 64 {
        tries += 1;
        let mut v = Mat::zeros(m.field(), 1, m.dim());
        for c in 0..m.dim() {
            let val = match m.field() {
                FieldSpec::Prime(p) => rng.gen_range(0..p) as i64,
                FieldSpec::Rational => rng.gen_range(-3..4),
            };
            v.set(0, c, Scalar::from_i64(m.field(), val));
        }
        let s = m.spin(&v);
        if s.rows() > 0 && s.rows() < m.dim() {
            sampled.push(s);
        }
    }
    for basis in &sampled {
        let (sub, incl) = m.submodule(basis)?;
        let before = splits(&incl, &sub, m)?;
        let fsub = ctx.induce(&sub)?;
        let fincl = ctx.induce_subspace_map(&incl);
        let after = splits(&fincl, &fsub, &fm)?;
        samples.push(ExactnessSample {
            sub_dim: sub.dim(),
            splits_before: before,
            splits_after: after,
        });
    }
    // simple-factor counting identity
    let (lhs, rhs) = hom_counting(ctx, m, simples, cfg)?;
    if lhs != rhs {
        details.push(format!("factor counting identity fails: {lhs} vs {rhs}"));
    }
    Ok(PreservationReport {
        module_dim: m.dim(),
        kind: kind.to_string(),
        hypotheses,
        socle_preserved,
        radical_preserved,
        lengths_match,
        filtration_preserved,
        diagrams_match: dmatch,
        exactness_samples: samples,
        hom_count_lhs: lhs,
        hom_count_rhs: rhs,
        details,
    })
}

/// Both sides of the counting identity: the sum over induced simple
/// classes of dim Hom(F(S), F(X)) equals the sum over declared simple
/// classes of dim Hom(S, X).
pub fn hom_counting(
    ctx: &InductionContext,
    x: &ModuleRep,
    simples: &[ModuleRep],
    cfg: &SearchCfg,
) -> Result<(usize, usize)> {
    // classes of induced simples, deduplicated by isomorphism
    let mut induced_classes: Vec<ModuleRep> = Vec::new();
    for s in simples {
        let fs = ctx.induce(s)?;
        let mut seen = false;
        for c in &induced_classes {
            if c.is_isomorphic(&fs, cfg)? {
                seen = true;
                break;
            }
        }
        if !seen {
            induced_classes.push(fs);
        }
    }
    let fx = ctx.induce(x)?;
    let mut lhs = 0;
    for c in &induced_classes {
        lhs += c.hom_space(&fx)?.len();
    }
    let mut rhs = 0;
    for s in simples {
        rhs += s.hom_space(x)?.len();
    }
    Ok((lhs, rhs))
}
