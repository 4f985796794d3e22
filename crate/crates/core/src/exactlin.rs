//! Dense exact linear algebra over prime fields `F_p` and the rationals.
//!
//! Everything downstream reduces to ranks, kernels and solves computed here,
//! so there is no floating point anywhere: split/non-split and isomorphism
//! questions are rank decisions, which approximate arithmetic cannot certify.
//!
//! Conventions fixed for the whole crate:
//!
//! * subspaces are given by their rows; the canonical basis of a subspace is
//!   the reduced row echelon form with zero rows dropped, so subspace
//!   equality is matrix equality of canonical bases;
//! * the tensor (Kronecker) index pairing is left-factor-major:
//!   `(a ⊗ b)[(i,k),(j,l)] = a[i,j] * b[k,l]` with row index `i*b.rows + k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::{Error, Result};

/// The exact coefficient field: `F_p` for a prime `p < 2^32`, or `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

fn is_prime_u64(n: u64) -> bool {
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

impl FieldSpec {
    /// Prime field constructor; rejects composites and primes >= 2^32
    /// (products of two residues must fit in u64).
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= (1 << 32) {
            return Err(Error::Invalid(format!("prime {p} too large (must be < 2^32)")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// One exact field element, tagged by representation. `Fp` values are
/// canonical residues `0 <= e < p`; rationals are in lowest terms with a
/// positive denominator (enforced by `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Fp(u64),
    Rat(BigRational),
}

impl Scalar {
    pub fn from_i64(field: FieldSpec, v: i64) -> Scalar {
        match field {
            FieldSpec::Prime(p) => Scalar::Fp(v.rem_euclid(p as i64) as u64),
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(v))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    /// Parse "5", "-3" or "2/3" in the given field. Prime-field values are
    /// reduced to canonical residues; a slash is only meaningful over `Q`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match field {
            FieldSpec::Prime(p) => {
                if s.contains('/') {
                    return Err(Error::Invalid(format!(
                        "fractional literal {s:?} is not a residue mod {p}"
                    )));
                }
                let v: i128 = s
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad field element {s:?}")))?;
                Ok(Scalar::Fp(v.rem_euclid(p as i128) as u64))
            }
            FieldSpec::Rational => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad numerator in {s:?}")))?;
                    let d: BigInt = d
                        .trim()
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad denominator in {s:?}")))?;
                    if d.is_zero() {
                        return Err(Error::Invalid(format!("zero denominator in {s:?}")));
                    }
                    BigRational::new(n, d)
                } else {
                    let n: BigInt = s
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad field element {s:?}")))?;
                    BigRational::from(n)
                };
                Ok(Scalar::Rat(r))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(v) => write!(f, "{v}"),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// field contexts: one shared generic engine, two instantiations
// ---------------------------------------------------------------------------

trait Ctx: Sync {
    type E: Clone + PartialEq + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

#[derive(Clone, Copy)]
struct FpCtx {
    p: u64,
}

impl FpCtx {
    #[inline]
    fn red(&self, v: u64) -> u64 {
        v % self.p
    }
}

impl Ctx for FpCtx {
    type E = u64;
    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i128) as u64
    }
}

struct RatCtx;

impl Ctx for RatCtx {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
}

// ---------------------------------------------------------------------------
// generic kernels
// ---------------------------------------------------------------------------

/// In-place reduced row echelon form; returns pivot columns.
fn rref_generic<C: Ctx>(ctx: &C, data: &mut [C::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ctx.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(r * cols + j, pr * cols + j);
            }
        }
        let pinv = ctx.inv(&data[r * cols + c].clone());
        for j in c..cols {
            data[r * cols + j] = ctx.mul(&data[r * cols + j], &pinv);
        }
        for i in 0..rows {
            if i == r || ctx.is_zero(&data[i * cols + c]) {
                continue;
            }
            let f = data[i * cols + c].clone();
            for j in c..cols {
                let t = ctx.mul(&f, &data[r * cols + j]);
                data[i * cols + j] = ctx.sub(&data[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn matmul_generic<C: Ctx>(
    ctx: &C,
    a: &[C::E],
    b: &[C::E],
    m: usize,
    n: usize,
    p: usize,
) -> Vec<C::E> {
    let mut out = vec![ctx.zero(); m * p];
    for i in 0..m {
        for k in 0..n {
            let aik = a[i * n + k].clone();
            if ctx.is_zero(&aik) {
                continue;
            }
            for j in 0..p {
                let t = ctx.mul(&aik, &b[k * p + j]);
                out[i * p + j] = ctx.add(&out[i * p + j], &t);
            }
        }
    }
    out
}

/// Fp matrix product with deferred reduction when the accumulator cannot
/// overflow; this is the hot path for structure-constant algebras.
fn matmul_fp(p: u64, a: &[u64], b: &[u64], m: usize, n: usize, cols: usize) -> Vec<u64> {
    let safe = n as u128 * ((p - 1) as u128 * (p - 1) as u128) < u64::MAX as u128;
    let mut out = vec![0u64; m * cols];
    if safe {
        for i in 0..m {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                let row = &b[k * cols..(k + 1) * cols];
                let orow = &mut out[i * cols..(i + 1) * cols];
                for j in 0..cols {
                    orow[j] += aik * row[j];
                }
            }
            for j in 0..cols {
                out[i * cols + j] %= p;
            }
        }
    } else {
        for i in 0..m {
            for k in 0..n {
                let aik = a[i * n + k] as u128;
                if aik == 0 {
                    continue;
                }
                for j in 0..cols {
                    let t = (aik * b[k * cols + j] as u128) % p as u128;
                    out[i * cols + j] = ((out[i * cols + j] as u128 + t) % p as u128) as u64;
                }
            }
        }
    }
    out
}

/// Characteristic polynomial of a square matrix via Hessenberg reduction,
/// valid over any field (no divisions except by pivots). Returns monic
/// coefficients `a_0..a_n` of `det(xI - M) = sum a_i x^i`.
fn charpoly_generic<C: Ctx>(ctx: &C, m: &[C::E], n: usize) -> Vec<C::E> {
    let mut h: Vec<C::E> = m.to_vec();
    let at = |h: &[C::E], i: usize, j: usize| h[i * n + j].clone();
    // reduce to upper Hessenberg by similarity
    for j in 0..n.saturating_sub(2) {
        let Some(pr) = ((j + 1)..n).find(|&i| !ctx.is_zero(&h[i * n + j])) else {
            continue;
        };
        if pr != j + 1 {
            for k in 0..n {
                h.swap(pr * n + k, (j + 1) * n + k);
            }
            for k in 0..n {
                h.swap(k * n + pr, k * n + (j + 1));
            }
        }
        let pinv = ctx.inv(&at(&h, j + 1, j));
        for i in (j + 2)..n {
            let f = ctx.mul(&at(&h, i, j), &pinv);
            if ctx.is_zero(&f) {
                continue;
            }
            // row_i -= f * row_{j+1}, then col_{j+1} += f * col_i
            for k in j..n {
                let t = ctx.mul(&f, &at(&h, j + 1, k));
                h[i * n + k] = ctx.sub(&at(&h, i, k), &t);
            }
            for k in 0..n {
                let t = ctx.mul(&f, &at(&h, k, i));
                h[k * n + (j + 1)] = ctx.add(&at(&h, k, j + 1), &t);
            }
        }
    }
    // p_m = (x - h[m-1][m-1]) p_{m-1} - sum_i h[i-1][m-1] (prod subdiag) p_{i-1}
    let mut polys: Vec<Vec<C::E>> = Vec::with_capacity(n + 1);
    polys.push(vec![ctx.one()]);
    for m in 1..=n {
        let mut pm = vec![ctx.zero(); m + 1];
        let prev = &polys[m - 1];
        // x * p_{m-1}
        for (i, c) in prev.iter().enumerate() {
            pm[i + 1] = ctx.add(&pm[i + 1], c);
        }
        // - h[m-1][m-1] * p_{m-1}
        let d = at(&h, m - 1, m - 1);
        for (i, c) in prev.iter().enumerate() {
            let t = ctx.mul(&d, c);
            pm[i] = ctx.sub(&pm[i], &t);
        }
        // subtract the subdiagonal chain terms
        let mut prod = ctx.one();
        for i in (1..m).rev() {
            prod = ctx.mul(&prod, &at(&h, i, i - 1));
            if ctx.is_zero(&prod) {
                break;
            }
            let him = at(&h, i - 1, m - 1);
            if ctx.is_zero(&him) {
                continue;
            }
            let f = ctx.mul(&him, &prod);
            for (k, c) in polys[i - 1].iter().enumerate() {
                let t = ctx.mul(&f, c);
                pm[k] = ctx.sub(&pm[k], &t);
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

// ---------------------------------------------------------------------------
// the matrix type
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
enum MatData {
    Fp(Vec<u64>),
    Rat(Vec<BigRational>),
}

/// Dense matrix over an exact field, row-major, entries always canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: MatData,
}

/// Result of `Mat::rref`.
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        let data = match field {
            FieldSpec::Prime(_) => MatData::Fp(vec![0; rows * cols]),
            FieldSpec::Rational => MatData::Rat(vec![BigRational::zero(); rows * cols]),
        };
        Mat { field, rows, cols, data }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::from_i64(field, 1));
        }
        m
    }

    /// Build from signed integers (reduced into the field); panics if the
    /// slice length does not match.
    pub fn from_ints(field: FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> Mat {
        assert_eq!(vals.len(), rows * cols, "entry count mismatch");
        let mut m = Mat::zeros(field, rows, cols);
        for (idx, v) in vals.iter().enumerate() {
            m.set(idx / cols, idx % cols, Scalar::from_i64(field, *v));
        }
        m
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.data {
            MatData::Fp(d) => Scalar::Fp(d[i * self.cols + j]),
            MatData::Rat(d) => Scalar::Rat(d[i * self.cols + j].clone()),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match (&mut self.data, v) {
            (MatData::Fp(d), Scalar::Fp(x)) => {
                let p = self.field.characteristic();
                d[i * self.cols + j] = x % p;
            }
            (MatData::Rat(d), Scalar::Rat(x)) => d[i * self.cols + j] = x,
            _ => panic!("scalar kind does not match matrix field"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            MatData::Fp(d) => d.iter().all(|v| *v == 0),
            MatData::Rat(d) => d.iter().all(|v| v.is_zero()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.field, self.rows)
    }

    fn same_field(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.same_field(other).unwrap();
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        match (&self.data, &other.data) {
            (MatData::Fp(a), MatData::Fp(b)) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                let d = a.iter().zip(b).map(|(x, y)| ctx.add(x, y)).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Fp(d) }
            }
            (MatData::Rat(a), MatData::Rat(b)) => {
                let d = a.iter().zip(b).map(|(x, y)| x + y).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Rat(d) }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.same_field(other).unwrap();
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        match (&self.data, &other.data) {
            (MatData::Fp(a), MatData::Fp(b)) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                let d = a.iter().zip(b).map(|(x, y)| ctx.sub(x, y)).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Fp(d) }
            }
            (MatData::Rat(a), MatData::Rat(b)) => {
                let d = a.iter().zip(b).map(|(x, y)| x - y).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Rat(d) }
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Mat {
        match &self.data {
            MatData::Fp(a) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                let d = a.iter().map(|x| ctx.neg(x)).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Fp(d) }
            }
            MatData::Rat(a) => {
                let d = a.iter().map(|x| -x).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Rat(d) }
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        match (&self.data, s) {
            (MatData::Fp(a), Scalar::Fp(v)) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                let v = ctx.red(*v);
                let d = a.iter().map(|x| ctx.mul(x, &v)).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Fp(d) }
            }
            (MatData::Rat(a), Scalar::Rat(v)) => {
                let d = a.iter().map(|x| x * v).collect();
                Mat { field: self.field, rows: self.rows, cols: self.cols, data: MatData::Rat(d) }
            }
            _ => panic!("scalar kind does not match matrix field"),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.field, self.cols, self.rows);
        match (&self.data, &mut out.data) {
            (MatData::Fp(a), MatData::Fp(o)) => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        o[j * self.rows + i] = a[i * self.cols + j];
                    }
                }
            }
            (MatData::Rat(a), MatData::Rat(o)) => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        o[j * self.rows + i] = a[i * self.cols + j].clone();
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        self.same_field(other).unwrap();
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let (m, n, p) = (self.rows, self.cols, other.cols);
        let data = match (&self.data, &other.data) {
            (MatData::Fp(a), MatData::Fp(b)) => {
                MatData::Fp(matmul_fp(self.field.characteristic(), a, b, m, n, p))
            }
            (MatData::Rat(a), MatData::Rat(b)) => {
                MatData::Rat(matmul_generic(&RatCtx, a, b, m, n, p))
            }
            _ => unreachable!(),
        };
        Mat { field: self.field, rows: m, cols: p, data }
    }

    /// Kronecker product with left-factor-major index pairing.
    pub fn kron(&self, other: &Mat) -> Mat {
        self.same_field(other).unwrap();
        let (ar, ac, br, bc) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Mat::zeros(self.field, ar * br, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        let v = match (&a, &b) {
                            (Scalar::Fp(x), Scalar::Fp(y)) => {
                                Scalar::Fp((x * y) % self.field.characteristic())
                            }
                            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
                            _ => unreachable!(),
                        };
                        out.set(i * br + k, j * bc + l, v);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of non-square matrix");
        match &self.data {
            MatData::Fp(a) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                let mut t = 0u64;
                for i in 0..self.rows {
                    t = ctx.add(&t, &a[i * self.cols + i]);
                }
                Scalar::Fp(t)
            }
            MatData::Rat(a) => {
                let mut t = BigRational::zero();
                for i in 0..self.rows {
                    t += &a[i * self.cols + i];
                }
                Scalar::Rat(t)
            }
        }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        self.same_field(other).unwrap();
        assert_eq!(self.rows, other.rows, "row count mismatch");
        Mat::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        Mat::vstack_all(self.field, self.cols, &[self, other])
    }

    pub fn vstack_all(field: FieldSpec, cols: usize, mats: &[&Mat]) -> Mat {
        let rows: usize = mats.iter().map(|m| m.rows).sum();
        match field {
            FieldSpec::Prime(_) => {
                let mut data = Vec::with_capacity(rows * cols);
                for m in mats {
                    assert_eq!(m.cols, cols, "column count mismatch");
                    match &m.data {
                        MatData::Fp(d) => data.extend_from_slice(d),
                        MatData::Rat(_) => panic!("field mismatch in vstack"),
                    }
                }
                Mat { field, rows, cols, data: MatData::Fp(data) }
            }
            FieldSpec::Rational => {
                let mut data = Vec::with_capacity(rows * cols);
                for m in mats {
                    assert_eq!(m.cols, cols, "column count mismatch");
                    match &m.data {
                        MatData::Rat(d) => data.extend_from_slice(d),
                        MatData::Fp(_) => panic!("field mismatch in vstack"),
                    }
                }
                Mat { field, rows, cols, data: MatData::Rat(data) }
            }
        }
    }

    pub fn select_rows(&self, sel: &[usize]) -> Mat {
        Mat::from_fn(self.field, sel.len(), self.cols, |i, j| self.get(sel[i], j))
    }

    pub fn select_cols(&self, sel: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, sel.len(), |i, j| self.get(i, sel[j]))
    }

    pub fn row(&self, i: usize) -> Mat {
        self.select_rows(&[i])
    }

    /// Reduced row echelon form with pivot columns and rank.
    pub fn rref(&self) -> Rref {
        let mut out = self.clone();
        let pivots = match &mut out.data {
            MatData::Fp(d) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                rref_generic(&ctx, d, self.rows, self.cols)
            }
            MatData::Rat(d) => rref_generic(&RatCtx, d, self.rows, self.cols),
        };
        let rank = pivots.len();
        Rref { mat: out, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of the row space: rref with zero rows dropped.
    pub fn row_space(&self) -> Mat {
        let rr = self.rref();
        rr.mat.select_rows(&(0..rr.rank).collect::<Vec<_>>())
    }

    /// Basis of `{v : self * v^T = 0}` as rows, canonicalized.
    /// `rank + kernel rows = cols` always holds.
    pub fn kernel(&self) -> Mat {
        let rr = self.rref();
        let pivots = &rr.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.field, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, Scalar::from_i64(self.field, 1));
            for (r, &pc) in pivots.iter().enumerate() {
                let v = rr.mat.get(r, f);
                let nv = match v {
                    Scalar::Fp(x) => {
                        let p = self.field.characteristic();
                        Scalar::Fp(if x == 0 { 0 } else { p - x })
                    }
                    Scalar::Rat(x) => Scalar::Rat(-x),
                };
                out.set(k, pc, nv);
            }
        }
        out.row_space()
    }

    /// Solve `self * x = b` for a matrix `x`; `None` when inconsistent.
    /// The returned solution is the one with all free variables zero, so the
    /// result is deterministic.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>> {
        self.same_field(b)?;
        if self.rows != b.rows {
            return Err(Error::DimMismatch(format!(
                "solve: {}x{} vs rhs {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let aug = self.hstack(b);
        let rr = aug.rref();
        // any pivot landing in the rhs block means inconsistency
        if rr.pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.field, self.cols, b.cols);
        for (r, &pc) in rr.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, rr.mat.get(r, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        if self.rank() != self.rows {
            return None;
        }
        self.solve(&Mat::identity(self.field, self.rows)).unwrap()
    }

    /// Monic characteristic polynomial `det(xI - M)`, coefficients low to
    /// high.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square(), "charpoly of non-square matrix");
        match &self.data {
            MatData::Fp(d) => {
                let ctx = FpCtx { p: self.field.characteristic() };
                charpoly_generic(&ctx, d, self.rows)
                    .into_iter()
                    .map(Scalar::Fp)
                    .collect()
            }
            MatData::Rat(d) => charpoly_generic(&RatCtx, d, self.rows)
                .into_iter()
                .map(Scalar::Rat)
                .collect(),
        }
    }

    /// Flatten row-major into a 1 x (rows*cols) row vector.
    pub fn vec_row(&self) -> Mat {
        Mat::from_fn(self.field, 1, self.rows * self.cols, |_, j| {
            self.get(j / self.cols, j % self.cols)
        })
    }

    /// Inverse of `vec_row`.
    pub fn from_vec_row(field: FieldSpec, rows: usize, cols: usize, v: &Mat) -> Mat {
        assert_eq!(v.rows, 1);
        assert_eq!(v.cols, rows * cols);
        Mat::from_fn(field, rows, cols, |i, j| v.get(0, i * cols + j))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// subspace operations (rows span the subspace; canonical basis = rref)
// ---------------------------------------------------------------------------

fn check_ambient(u: &Mat, v: &Mat) -> Result<()> {
    if u.field != v.field {
        return Err(Error::FieldMismatch(format!("{} vs {}", u.field, v.field)));
    }
    if u.cols != v.cols {
        return Err(Error::DimMismatch(format!(
            "ambient dimensions {} vs {}",
            u.cols, v.cols
        )));
    }
    Ok(())
}

/// Canonical basis of `rowspace(u) + rowspace(v)`.
pub fn subspace_sum(u: &Mat, v: &Mat) -> Result<Mat> {
    check_ambient(u, v)?;
    Ok(u.vstack(v).row_space())
}

/// Canonical basis of `rowspace(u) ∩ rowspace(v)` by the Zassenhaus trick:
/// rref the block matrix [[U U],[V 0]]; rows whose left half vanished have
/// right halves spanning the intersection.
pub fn subspace_intersect(u: &Mat, v: &Mat) -> Result<Mat> {
    check_ambient(u, v)?;
    let n = u.cols;
    let top = u.hstack(u);
    let bottom = v.hstack(&Mat::zeros(v.field, v.rows, n));
    let rr = top.vstack(&bottom).rref();
    let mut picked = Vec::new();
    for i in 0..rr.rank {
        let left_zero = (0..n).all(|j| rr.mat.get(i, j).is_zero());
        if left_zero {
            picked.push(i);
        }
    }
    let right = rr
        .mat
        .select_rows(&picked)
        .select_cols(&(n..2 * n).collect::<Vec<_>>());
    Ok(right.row_space())
}

/// True when `rowspace(v) ⊆ rowspace(u)`.
pub fn subspace_contains(u: &Mat, v: &Mat) -> Result<bool> {
    check_ambient(u, v)?;
    Ok(u.rank() == u.vstack(v).rank())
}

/// Subspace equality through canonical bases.
pub fn subspace_eq(u: &Mat, v: &Mat) -> Result<bool> {
    check_ambient(u, v)?;
    Ok(u.row_space() == v.row_space())
}

/// trace(a * b) without materializing the product.
pub fn trace_of_product(a: &Mat, b: &Mat) -> Scalar {
    assert_eq!(a.cols, b.rows);
    assert_eq!(b.cols, a.rows);
    match (&a.data, &b.data) {
        (MatData::Fp(x), MatData::Fp(y)) => {
            let p = a.field.characteristic();
            let safe = a.cols as u128 * ((p - 1) as u128 * (p - 1) as u128) < u64::MAX as u128;
            let mut t: u64 = 0;
            for i in 0..a.rows {
                let mut acc: u64 = 0;
                for j in 0..a.cols {
                    let prod = x[i * a.cols + j] * y[j * b.cols + i];
                    acc = if safe { acc + prod } else { (acc + prod % p) % p };
                }
                t = (t + acc % p) % p;
            }
            Scalar::Fp(t)
        }
        (MatData::Rat(x), MatData::Rat(y)) => {
            let mut t = BigRational::zero();
            for i in 0..a.rows {
                for j in 0..a.cols {
                    t += &x[i * a.cols + j] * &y[j * b.cols + i];
                }
            }
            Scalar::Rat(t)
        }
        _ => panic!("field mismatch in trace_of_product"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rref_identity() {
        let m = Mat::identity(f(5), 2);
        let rr = m.rref();
        assert_eq!(rr.mat, m);
        assert_eq!(rr.pivots, vec![0, 1]);
        assert_eq!(rr.rank, 2);
    }

    #[test]
    fn rref_zero() {
        let m = Mat::zeros(f(7), 3, 2);
        let rr = m.rref();
        assert_eq!(rr.mat, m);
        assert!(rr.pivots.is_empty());
        assert_eq!(rr.rank, 0);
    }

    #[test]
    fn rref_f2_rank_one() {
        // hand elimination: [[1,1],[1,1]] -> [[1,1],[0,0]]
        let m = Mat::from_ints(f(2), 2, 2, &[1, 1, 1, 1]);
        let rr = m.rref();
        assert_eq!(rr.mat, Mat::from_ints(f(2), 2, 2, &[1, 1, 0, 0]));
        assert_eq!(rr.pivots, vec![0]);
        assert_eq!(rr.rank, 1);
    }

    #[test]
    fn kernel_identity_empty() {
        let k = Mat::identity(f(3), 4).kernel();
        assert_eq!(k.rows(), 0);
        assert_eq!(k.cols(), 4);
    }

    #[test]
    fn kernel_zero_full() {
        let k = Mat::zeros(f(3), 2, 3).kernel();
        assert_eq!(k.rows(), 3);
        assert_eq!(k, Mat::identity(f(3), 3));
    }

    #[test]
    fn kernel_f3_line() {
        // 1*v0 + 2*v1 = 0 mod 3 has basis (1,1)
        let k = Mat::from_ints(f(3), 1, 2, &[1, 2]).kernel();
        assert_eq!(k, Mat::from_ints(f(3), 1, 2, &[1, 1]));
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = Mat::from_ints(f(5), 2, 1, &[3, 4]);
        let x = Mat::identity(f(5), 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_zero_inconsistent() {
        let a = Mat::zeros(f(5), 2, 2);
        let b = Mat::from_ints(f(5), 2, 1, &[1, 0]);
        assert!(a.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_rational_half() {
        let q = FieldSpec::Rational;
        let a = Mat::from_ints(q, 1, 1, &[2]);
        let b = Mat::from_ints(q, 1, 1, &[1]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x.get(0, 0), Scalar::parse(q, "1/2").unwrap());
    }

    #[test]
    fn solve_dim_mismatch_errors() {
        let a = Mat::zeros(f(5), 2, 2);
        let b = Mat::zeros(f(5), 3, 1);
        assert!(a.solve(&b).is_err());
    }

    #[test]
    fn kron_identities() {
        let a = Mat::identity(f(7), 2);
        let b = Mat::identity(f(7), 3);
        assert_eq!(a.kron(&b), Mat::identity(f(7), 6));
        let z = Mat::zeros(f(7), 2, 2);
        assert!(a.kron(&z).is_zero());
        let q = FieldSpec::Rational;
        let x = Mat::from_ints(q, 1, 1, &[2]);
        let y = Mat::from_ints(q, 1, 1, &[3]);
        assert_eq!(x.kron(&y), Mat::from_ints(q, 1, 1, &[6]));
    }

    #[test]
    fn subspace_sum_idempotent_and_full() {
        let u = Mat::from_ints(f(2), 1, 2, &[1, 0]);
        let v = Mat::from_ints(f(2), 1, 2, &[0, 1]);
        assert_eq!(subspace_sum(&u, &u).unwrap(), u.row_space());
        assert_eq!(subspace_sum(&u, &v).unwrap(), Mat::identity(f(2), 2));
    }

    #[test]
    fn subspace_intersect_with_ambient() {
        let u = Mat::from_ints(f(5), 1, 3, &[1, 2, 3]);
        let amb = Mat::identity(f(5), 3);
        assert_eq!(subspace_intersect(&u, &amb).unwrap(), u.row_space());
        assert_eq!(subspace_intersect(&amb, &u).unwrap(), u.row_space());
    }

    #[test]
    fn subspace_contains_works() {
        let u = Mat::from_ints(f(3), 2, 3, &[1, 0, 0, 0, 1, 0]);
        let v = Mat::from_ints(f(3), 1, 3, &[1, 2, 0]);
        assert!(subspace_contains(&u, &v).unwrap());
        let w = Mat::from_ints(f(3), 1, 3, &[0, 0, 1]);
        assert!(!subspace_contains(&u, &w).unwrap());
    }

    #[test]
    fn charpoly_companion() {
        // companion-ish check over Q: [[0,1],[-2,3]] has x^2 - 3x + 2
        let q = FieldSpec::Rational;
        let m = Mat::from_ints(q, 2, 2, &[0, 1, -2, 3]);
        let cp = m.charpoly();
        let want: Vec<Scalar> = [2, -3, 1]
            .iter()
            .map(|v| Scalar::from_i64(q, *v))
            .collect();
        assert_eq!(cp, want);
        // and over F_5 with a nilpotent jordan block: x^3
        let m = Mat::from_ints(f(5), 3, 3, &[0, 0, 0, 1, 0, 0, 0, 1, 0]);
        let cp = m.charpoly();
        assert_eq!(
            cp,
            vec![Scalar::Fp(0), Scalar::Fp(0), Scalar::Fp(0), Scalar::Fp(1)]
        );
    }

    #[test]
    fn scalar_parse_display_roundtrip() {
        let q = FieldSpec::Rational;
        for s in ["0", "5", "-7", "2/3", "-11/4"] {
            let v = Scalar::parse(q, s).unwrap();
            assert_eq!(Scalar::parse(q, &v.to_string()).unwrap(), v);
        }
        let p = f(7);
        assert_eq!(Scalar::parse(p, "-1").unwrap(), Scalar::Fp(6));
        assert_eq!(Scalar::parse(p, "9").unwrap(), Scalar::Fp(2));
        assert!(Scalar::parse(p, "1/2").is_err());
    }

    #[test]
    fn fieldspec_rejects_composite() {
        assert!(FieldSpec::prime(6).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(13).is_ok());
    }

    // strategies for property tests
    fn arb_field() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::Prime(2)),
            Just(FieldSpec::Prime(3)),
            Just(FieldSpec::Prime(5)),
            Just(FieldSpec::Prime(7)),
            Just(FieldSpec::Rational),
        ]
    }

    fn arb_mat(rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> impl Strategy<Value = Mat> {
        (arb_field(), rows, cols).prop_flat_map(|(fld, r, c)| {
            proptest::collection::vec(-4i64..5, r * c)
                .prop_map(move |vals| Mat::from_ints(fld, r, c, &vals))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

        #[test]
        fn rref_is_idempotent(m in arb_mat(0..5, 0..5)) {
            let r1 = m.rref().mat;
            let r2 = r1.rref().mat;
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn rank_nullity(m in arb_mat(0..5, 0..5)) {
            prop_assert_eq!(m.rank() + m.kernel().rows(), m.cols());
        }

        #[test]
        fn kernel_rows_annihilate(m in arb_mat(1..5, 1..5)) {
            let k = m.kernel();
            if k.rows() > 0 {
                prop_assert!(m.matmul(&k.transpose()).is_zero());
            }
        }

        #[test]
        fn solve_is_exact(m in arb_mat(1..4, 1..4), vals in proptest::collection::vec(-3i64..4, 9)) {
            let x = Mat::from_ints(m.field(), m.cols(), 1, &vals[..m.cols()]);
            let b = m.matmul(&x);
            // consistent by construction, so a solution must exist and solve exactly
            let s = m.solve(&b).unwrap().unwrap();
            prop_assert_eq!(m.matmul(&s), b);
        }

        #[test]
        fn kron_associative(a in arb_mat(1..3, 1..3), bc in proptest::collection::vec(-3i64..4, 8)) {
            let b = Mat::from_ints(a.field(), 2, 2, &bc[..4]);
            let c = Mat::from_ints(a.field(), 1, 2, &bc[4..6]);
            prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
        }

        #[test]
        fn charpoly_on_product_symmetric(vals in proptest::collection::vec(-3i64..4, 18)) {
            // char polys of xy and yx agree
            let fld = FieldSpec::Prime(5);
            let x = Mat::from_ints(fld, 3, 3, &vals[..9]);
            let y = Mat::from_ints(fld, 3, 3, &vals[9..]);
            prop_assert_eq!(x.matmul(&y).charpoly(), y.matmul(&x).charpoly());
        }

        #[test]
        fn charpoly_is_a_similarity_invariant(vals in proptest::collection::vec(-3i64..4, 9), c in -3i64..4) {
            let fld = FieldSpec::Prime(7);
            let m = Mat::from_ints(fld, 3, 3, &vals);
            // a shear is always invertible
            let mut p = Mat::identity(fld, 3);
            p.set(0, 2, Scalar::from_i64(fld, c));
            let pinv = p.inverse().unwrap();
            prop_assert_eq!(m.charpoly(), p.matmul(&m).matmul(&pinv).charpoly());
        }

        #[test]
        fn trace_of_product_matches_matmul(vals in proptest::collection::vec(-3i64..4, 24)) {
            let fld = FieldSpec::Prime(5);
            let a = Mat::from_ints(fld, 3, 4, &vals[..12]);
            let b = Mat::from_ints(fld, 4, 3, &vals[12..]);
            prop_assert_eq!(trace_of_product(&a, &b), a.matmul(&b).trace());
        }
    }
}
