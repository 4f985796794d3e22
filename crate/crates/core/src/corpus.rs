//! Named, parameterized generators for the shipped test families:
//!
//! * `nilpotent:n=..,p=..` -- truncated polynomial algebras k[x]/(x^n) over
//!   F_p; when n = p the algebra carries a Hopf structure with x primitive
//!   and the trivial current algebra, so induction is the identity functor;
//! * `modular-currents:p=..,m=..[,sub=..]` -- the group algebra of
//!   Z/p x Z/m over F_p (m dividing p-1), trivial braiding, current
//!   algebra spanned by the characters of the Z/m factor with index
//!   divisible by `sub`;
//! * `sweedler:q=..,lambda=..` -- the 4-dimensional g,x algebra over F_q
//!   (q odd) with its one-parameter family of triangular structures and
//!   the current algebra on 1 + sgn.

use std::sync::Arc;

use crate::algcore::Algebra;
use crate::braided::{AlgebraObject, HopfAlgebra, InductionContext};
use crate::exactlin::{FieldSpec, Mat, Scalar};
use crate::modth::ModuleRep;
use crate::{Error, Result};

fn unit_vec(n: usize) -> Vec<i64> {
    let mut u = vec![0i64; n];
    u[0] = 1;
    u
}

/// k[x]/(x^n) with basis 1, x, .., x^{n-1}.
pub fn truncated_poly_algebra(field: FieldSpec, n: usize) -> Result<Arc<Algebra>> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    Ok(Arc::new(Algebra::from_mul_table(field, n, &unit_vec(n), |i, j| {
        let mut v = vec![0i64; n];
        if i + j < n {
            v[i + j] = 1;
        }
        v
    })?))
}

/// The 4-dimensional algebra with basis 1, g, x, gx and relations
/// g^2 = 1, x^2 = 0, xg = -gx.
pub fn sweedler_algebra(field: FieldSpec) -> Result<Arc<Algebra>> {
    let table: [[[i64; 4]; 4]; 4] = [
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        [[0, 0, 1, 0], [0, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0]],
        [[0, 0, 0, 1], [0, 0, -1, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    ];
    Ok(Arc::new(Algebra::from_mul_table(field, 4, &[1, 0, 0, 0], |i, j| {
        table[i][j].to_vec()
    })?))
}

fn binom_mod(n: usize, k: usize, p: u64) -> i64 {
    // small n only; exact binomial then reduce
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    ((num / den) % p as u128) as i64
}

/// Hopf structure on k[x]/(x^p) over F_p: x primitive, trivial R.
pub fn nilpotent_hopf(p: u64) -> Result<HopfAlgebra> {
    let field = FieldSpec::prime(p)?;
    let n = p as usize;
    let alg = truncated_poly_algebra(field, n)?;
    let mut comul = Mat::zeros(field, n * n, n);
    for k in 0..n {
        // Delta(x^k) = sum_j C(k, j) x^j (x) x^{k-j}
        for j in 0..=k {
            comul.set(j * n + (k - j), k, Scalar::from_i64(field, binom_mod(k, j, p)));
        }
    }
    let mut counit = Mat::zeros(field, 1, n);
    counit.set(0, 0, Scalar::from_i64(field, 1));
    let mut antipode = Mat::zeros(field, n, n);
    for k in 0..n {
        antipode.set(k, k, Scalar::from_i64(field, if k % 2 == 0 { 1 } else { -1 }));
    }
    let mut rmatrix = Mat::zeros(field, n * n, 1);
    rmatrix.set(0, 0, Scalar::from_i64(field, 1));
    HopfAlgebra::new(alg, comul, counit, antipode, rmatrix)
}

/// Group algebra of Z/p x Z/m over F_p with the basis g^a h^b at index
/// a*m + b, group-like comultiplication and trivial R.
pub fn modular_hopf(p: u64, m: usize) -> Result<HopfAlgebra> {
    let field = FieldSpec::prime(p)?;
    if m == 0 || !(p as usize - 1).is_multiple_of(m) {
        return Err(Error::Invalid(format!("m = {m} must divide p - 1 = {}", p - 1)));
    }
    let pp = p as usize;
    let n = pp * m;
    let idx = |a: usize, b: usize| a * m + b;
    let alg = Arc::new(Algebra::from_mul_table(field, n, &unit_vec(n), |i, j| {
        let (a1, b1) = (i / m, i % m);
        let (a2, b2) = (j / m, j % m);
        let mut v = vec![0i64; n];
        v[idx((a1 + a2) % pp, (b1 + b2) % m)] = 1;
        v
    })?);
    let mut comul = Mat::zeros(field, n * n, n);
    let mut counit = Mat::zeros(field, 1, n);
    let mut antipode = Mat::zeros(field, n, n);
    for c in 0..n {
        comul.set(c * n + c, c, Scalar::from_i64(field, 1));
        counit.set(0, c, Scalar::from_i64(field, 1));
        let (a, b) = (c / m, c % m);
        antipode.set(idx((pp - a) % pp, (m - b) % m), c, Scalar::from_i64(field, 1));
    }
    let mut rmatrix = Mat::zeros(field, n * n, 1);
    rmatrix.set(0, 0, Scalar::from_i64(field, 1));
    HopfAlgebra::new(alg, comul, counit, antipode, rmatrix)
}

/// A primitive m-th root of unity mod p (m divides p-1).
fn primitive_root_of_unity(p: u64, m: usize) -> u64 {
    'outer: for g in 2..p {
        // is g a generator of the multiplicative group?
        let mut pow = 1u64;
        for _ in 0..(p - 2) {
            pow = pow * g % p;
            if pow == 1 {
                continue 'outer;
            }
        }
        // zeta = g^((p-1)/m)
        let e = (p - 1) / m as u64;
        let mut z = 1u64;
        for _ in 0..e {
            z = z * g % p;
        }
        return z;
    }
    1
}

/// The modular current instance: Hopf data, declared simples, current
/// algebra on the characters with index divisible by `sub`, and the cached
/// smash product.
pub struct ModularInstance {
    pub p: u64,
    pub m: usize,
    pub sub: usize,
    pub zeta: u64,
    pub ctx: InductionContext,
    /// The m characters chi_0..chi_{m-1}; chi_j sends h to zeta^j.
    pub simples: Vec<ModuleRep>,
    pub simple_names: Vec<String>,
}

impl ModularInstance {
    pub fn new(p: u64, m: usize, sub: usize) -> Result<ModularInstance> {
        let hopf = modular_hopf(p, m)?;
        if sub == 0 || !m.is_multiple_of(sub) {
            return Err(Error::Invalid(format!("sub = {sub} must divide m = {m}")));
        }
        let field = hopf.field();
        let zeta = primitive_root_of_unity(p, m);
        let pp = p as usize;
        // characters: chi_j acts by zeta^(j b) on basis g^a h^b
        let character = |j: usize| -> Result<ModuleRep> {
            let action = (0..pp * m)
                .map(|c| {
                    let b = c % m;
                    let mut z = 1u64;
                    for _ in 0..(j * b) % m {
                        z = z * zeta % p;
                    }
                    Mat::from_ints(field, 1, 1, &[z as i64])
                })
                .collect();
            ModuleRep::new(Arc::clone(&hopf.algebra), action)
        };
        let mut simples = Vec::with_capacity(m);
        let mut simple_names = Vec::with_capacity(m);
        for j in 0..m {
            simples.push(character(j)?);
            simple_names.push(format!("chi{j}"));
        }
        // the current algebra: carrier = sum of chi_{sub*k}
        let ms = m / sub;
        let mut carrier: Option<ModuleRep> = None;
        for k in 0..ms {
            let s = simples[(k * sub) % m].clone();
            carrier = Some(match carrier {
                None => s,
                Some(c) => c.direct_sum(&s)?,
            });
        }
        let carrier = carrier.unwrap();
        let mut mu = Mat::zeros(field, ms, ms * ms);
        for i in 0..ms {
            for j in 0..ms {
                mu.set((i + j) % ms, i * ms + j, Scalar::from_i64(field, 1));
            }
        }
        let mut iota = Mat::zeros(field, ms, 1);
        iota.set(0, 0, Scalar::from_i64(field, 1));
        let algobj = AlgebraObject { carrier, mu, iota };
        let ctx = InductionContext::new(hopf, algobj)?;
        Ok(ModularInstance { p, m, sub, zeta, ctx, simples, simple_names })
    }

    /// Basis index of the Z/p generator g.
    pub fn g_index(&self) -> usize {
        self.m
    }

    /// Basis index of the Z/m generator h.
    pub fn h_index(&self) -> usize {
        1
    }

    /// Uniserial module of length l twisted by the t-th character:
    /// g acts by a unipotent Jordan block, h by zeta^t.
    pub fn jordan_module(&self, l: usize, t: usize) -> Result<ModuleRep> {
        if l == 0 || l > self.p as usize {
            return Err(Error::Invalid(format!(
                "jordan length {l} out of range 1..={}",
                self.p
            )));
        }
        let field = self.ctx.hopf.field();
        let mut g = Mat::identity(field, l);
        for i in 1..l {
            g.set(i, i - 1, Scalar::from_i64(field, 1));
        }
        let mut zt = 1u64;
        for _ in 0..t % self.m {
            zt = zt * self.zeta % self.p;
        }
        let pp = self.p as usize;
        // action of g^a h^b is G^a zeta^(t b)
        let mut gpow = vec![Mat::identity(field, l)];
        for _ in 1..pp {
            gpow.push(gpow.last().unwrap().matmul(&g));
        }
        let mut action = Vec::with_capacity(pp * self.m);
        for c in 0..pp * self.m {
            let (a, b) = (c / self.m, c % self.m);
            let mut z = 1u64;
            for _ in 0..(b) {
                z = z * zt % self.p;
            }
            action.push(gpow[a].scale(&Scalar::from_i64(field, z as i64)));
        }
        ModuleRep::new(Arc::clone(&self.ctx.hopf.algebra), action)
    }

    pub fn regular_module(&self) -> ModuleRep {
        ModuleRep::regular(&self.ctx.hopf.algebra)
    }
}

/// Inverse of 2 mod q.
fn inv2(q: u64) -> i64 {
    q.div_ceil(2) as i64
}

/// The one-parameter family of triangular structures on the 4-dimensional
/// g,x algebra, with the coproduct sending x to x (x) g + 1 (x) x.
pub fn sweedler_hopf(q: u64, lambda: u64) -> Result<HopfAlgebra> {
    let field = FieldSpec::prime(q)?;
    if q == 2 {
        return Err(Error::Invalid("the field must have odd characteristic".into()));
    }
    let alg = sweedler_algebra(field)?;
    let n = 4usize;
    let mut comul = Mat::zeros(field, n * n, n);
    let one = Scalar::from_i64(field, 1);
    let pair = |a: usize, b: usize| a * n + b;
    // basis order 1, g, x, gx
    comul.set(pair(0, 0), 0, one.clone()); // 1 -> 1 (x) 1
    comul.set(pair(1, 1), 1, one.clone()); // g -> g (x) g
    comul.set(pair(2, 1), 2, one.clone()); // x -> x (x) g + 1 (x) x
    comul.set(pair(0, 2), 2, one.clone());
    comul.set(pair(3, 0), 3, one.clone()); // gx -> gx (x) 1 + g (x) gx
    comul.set(pair(1, 3), 3, one.clone());
    let counit = Mat::from_ints(field, 1, n, &[1, 1, 0, 0]);
    let mut antipode = Mat::zeros(field, n, n);
    antipode.set(0, 0, one.clone());
    antipode.set(1, 1, one.clone());
    antipode.set(3, 2, one.clone()); // S(x) = gx
    antipode.set(2, 3, Scalar::from_i64(field, -1)); // S(gx) = -x
    let i2 = inv2(q);
    let l = lambda as i64;
    let mut rmatrix = Mat::zeros(field, n * n, 1);
    let mut set = |i: usize, j: usize, v: i64| {
        rmatrix.set(i * n + j, 0, Scalar::from_i64(field, v));
    };
    set(0, 0, i2);
    set(0, 1, i2);
    set(1, 0, i2);
    set(1, 1, -i2);
    set(2, 2, l * i2);
    set(2, 3, l * i2);
    set(3, 2, -l * i2);
    set(3, 3, l * i2);
    HopfAlgebra::new(alg, comul, counit, antipode, rmatrix)
}

/// The braided testbed: H the 4-dimensional g,x algebra with R_lambda and
/// the current algebra on 1 + sgn. Commutativity with respect to the
/// braiding forces the sign part to square to zero.
pub struct SweedlerInstance {
    pub q: u64,
    pub lambda: u64,
    pub ctx: InductionContext,
    /// [trivial, sign].
    pub simples: Vec<ModuleRep>,
    pub simple_names: Vec<String>,
}

impl SweedlerInstance {
    pub fn new(q: u64, lambda: u64) -> Result<SweedlerInstance> {
        let hopf = sweedler_hopf(q, lambda)?;
        let field = hopf.field();
        let one_dim = |gval: i64| -> Result<ModuleRep> {
            let action = vec![
                Mat::from_ints(field, 1, 1, &[1]),
                Mat::from_ints(field, 1, 1, &[gval]),
                Mat::from_ints(field, 1, 1, &[0]),
                Mat::from_ints(field, 1, 1, &[0]),
            ];
            ModuleRep::new(Arc::clone(&hopf.algebra), action)
        };
        let triv = one_dim(1)?;
        let sgn = one_dim(-1)?;
        let carrier = triv.direct_sum(&sgn)?;
        let mut mu = Mat::zeros(field, 2, 4);
        mu.set(0, 0, Scalar::from_i64(field, 1)); // u0 u0 = u0
        mu.set(1, 1, Scalar::from_i64(field, 1)); // u0 u1 = u1
        mu.set(1, 2, Scalar::from_i64(field, 1)); // u1 u0 = u1
        // u1 u1 = 0: forced by commutativity, the braiding is -1 there
        let iota = Mat::from_ints(field, 2, 1, &[1, 0]);
        let algobj = AlgebraObject { carrier, mu, iota };
        let ctx = InductionContext::new(hopf, algobj)?;
        Ok(SweedlerInstance {
            q,
            lambda,
            ctx,
            simples: vec![triv, sgn],
            simple_names: vec!["triv".into(), "sgn".into()],
        })
    }

    /// The two projective indecomposables: index 0 has trivial top and
    /// sign socle, index 1 the other way around.
    pub fn projective(&self, i: usize) -> Result<ModuleRep> {
        if i > 1 {
            return Err(Error::Invalid("projective index must be 0 or 1".into()));
        }
        let field = self.ctx.hopf.field();
        let sgn = if i == 0 { 1 } else { -1 };
        let g = Mat::from_ints(field, 2, 2, &[sgn, 0, 0, -sgn]);
        let x = Mat::from_ints(field, 2, 2, &[0, 0, 1, 0]);
        let gx = g.matmul(&x);
        let action = vec![Mat::identity(field, 2), g, x, gx];
        ModuleRep::new(Arc::clone(&self.ctx.hopf.algebra), action)
    }

    pub fn regular_module(&self) -> ModuleRep {
        ModuleRep::regular(&self.ctx.hopf.algebra)
    }
}

/// Truncated polynomial generator with its Jordan-type module fixtures.
pub struct NilpotentGen {
    pub n: usize,
    pub p: u64,
    pub alg: Arc<Algebra>,
}

impl NilpotentGen {
    pub fn new(n: usize, p: u64) -> Result<NilpotentGen> {
        let field = FieldSpec::prime(p)?;
        Ok(NilpotentGen { n, p, alg: truncated_poly_algebra(field, n)? })
    }

    pub fn regular_module(&self) -> ModuleRep {
        ModuleRep::regular(&self.alg)
    }

    /// Direct sum of nilpotent Jordan blocks of the given sizes; each part
    /// must be at most n so the x-action is annihilated by x^n.
    pub fn jordan_type_module(&self, parts: &[usize]) -> Result<ModuleRep> {
        if parts.iter().any(|&l| l == 0 || l > self.n) {
            return Err(Error::Invalid(format!(
                "jordan parts must lie in 1..={}, got {parts:?}",
                self.n
            )));
        }
        let field = self.alg.field();
        let d: usize = parts.iter().sum();
        let mut x = Mat::zeros(field, d, d);
        let mut off = 0;
        for &l in parts {
            for i in 1..l {
                x.set(off + i, off + i - 1, Scalar::from_i64(field, 1));
            }
            off += l;
        }
        let mut action = vec![Mat::identity(field, d)];
        for _ in 1..self.n {
            action.push(action.last().unwrap().matmul(&x));
        }
        ModuleRep::new(Arc::clone(&self.alg), action)
    }

    /// All Jordan types of total dimension at most `maxdim` (partitions
    /// with parts at most n), the complete list of modules up to
    /// isomorphism in that range.
    pub fn jordan_types_up_to(&self, maxdim: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for d in 1..=maxdim {
            partitions_with_max_part(d, self.n.min(d), &mut Vec::new(), &mut out);
        }
        out
    }

    /// Hopf structure, available exactly when n = p.
    pub fn hopf(&self) -> Result<HopfAlgebra> {
        if self.n as u64 != self.p {
            return Err(Error::Invalid(format!(
                "a Hopf structure needs n = p, got n = {} over F_{}",
                self.n, self.p
            )));
        }
        nilpotent_hopf(self.p)
    }
}

fn partitions_with_max_part(
    d: usize,
    maxpart: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if d == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=maxpart.min(d)).rev() {
        prefix.push(part);
        partitions_with_max_part(d - part, part, prefix, out);
        prefix.pop();
    }
}

// ---------------------------------------------------------------------------
// generator and module selectors
// ---------------------------------------------------------------------------

/// Parsed `--gen` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Nilpotent { n: usize, p: u64 },
    ModularCurrents { p: u64, m: usize, sub: usize },
    Sweedler { q: u64, lambda: u64 },
}

/// Parse "name:k=v,k=v" generator descriptions, e.g.
/// "nilpotent:n=3,p=5", "modular-currents:p=5,m=2",
/// "sweedler:q=5,lambda=1".
pub fn parse_generator(s: &str) -> Result<GenSpec> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut kv = std::collections::BTreeMap::new();
    if !rest.is_empty() {
        for pair in rest.split(',') {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("bad generator parameter {pair:?}")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad number in {pair:?}")))?;
            kv.insert(k.trim().to_string(), v);
        }
    }
    let get = |k: &str| -> Result<u64> {
        kv.get(k)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("generator {name:?} needs parameter {k}")))
    };
    match name {
        "nilpotent" => Ok(GenSpec::Nilpotent { n: get("n")? as usize, p: get("p")? }),
        "modular-currents" => Ok(GenSpec::ModularCurrents {
            p: get("p")?,
            m: get("m")? as usize,
            sub: kv.get("sub").copied().unwrap_or(1) as usize,
        }),
        "sweedler" => Ok(GenSpec::Sweedler { q: get("q")?, lambda: get("lambda").unwrap_or(0) }),
        other => Err(Error::Invalid(format!("unknown generator {other:?}"))),
    }
}

/// Parsed `--module` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    Regular,
    /// Uniserial of length l twisted by character t (modular) or a single
    /// nilpotent block of size l (nilpotent).
    Jordan { l: usize, t: usize },
    /// Direct sum of twisted uniserial modules, "sum:2.0+3.1".
    Sum { parts: Vec<(usize, usize)> },
    /// A declared simple by index.
    Simple { index: usize },
    /// A projective indecomposable by index (sweedler).
    Projective { index: usize },
    /// Jordan type partition for the nilpotent generator, "type:2+1+1".
    JordanType { parts: Vec<usize> },
}

pub fn parse_module(s: &str) -> Result<ModuleSpec> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    match name {
        "regular" => Ok(ModuleSpec::Regular),
        "jordan" => {
            let mut l = None;
            let mut t = 0usize;
            for pair in rest.split(',') {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("bad module parameter {pair:?}")))?;
                let v: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad number in {pair:?}")))?;
                match k.trim() {
                    "l" => l = Some(v),
                    "t" => t = v,
                    other => {
                        return Err(Error::Invalid(format!("unknown module parameter {other:?}")))
                    }
                }
            }
            let l = l.ok_or_else(|| Error::Invalid("jordan module needs l=..".into()))?;
            Ok(ModuleSpec::Jordan { l, t })
        }
        "sum" => {
            let mut parts = Vec::new();
            for item in rest.split('+') {
                let (l, t) = item
                    .split_once('.')
                    .ok_or_else(|| Error::Invalid(format!("bad sum part {item:?}, want L.T")))?;
                let l: usize = l
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad length in {item:?}")))?;
                let t: usize = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad twist in {item:?}")))?;
                parts.push((l, t));
            }
            if parts.is_empty() {
                return Err(Error::Invalid("sum needs at least one part".into()));
            }
            Ok(ModuleSpec::Sum { parts })
        }
        "simple" => {
            let (_, v) = rest
                .split_once('=')
                .ok_or_else(|| Error::Invalid("simple needs j=..".into()))?;
            Ok(ModuleSpec::Simple {
                index: v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad index {v:?}")))?,
            })
        }
        "proj" => {
            let (_, v) = rest
                .split_once('=')
                .ok_or_else(|| Error::Invalid("proj needs i=..".into()))?;
            Ok(ModuleSpec::Projective {
                index: v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad index {v:?}")))?,
            })
        }
        "type" => {
            let mut parts = Vec::new();
            for item in rest.split('+') {
                parts.push(
                    item.trim()
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad part {item:?}")))?,
                );
            }
            Ok(ModuleSpec::JordanType { parts })
        }
        other => Err(Error::Invalid(format!("unknown module selector {other:?}"))),
    }
}

/// A realized corpus instance ready to answer CLI commands.
pub enum Instance {
    Nilpotent(NilpotentGen),
    Modular(ModularInstance),
    Sweedler(SweedlerInstance),
}

impl Instance {
    pub fn from_spec(spec: &GenSpec) -> Result<Instance> {
        match spec {
            GenSpec::Nilpotent { n, p } => Ok(Instance::Nilpotent(NilpotentGen::new(*n, *p)?)),
            GenSpec::ModularCurrents { p, m, sub } => {
                Ok(Instance::Modular(ModularInstance::new(*p, *m, *sub)?))
            }
            GenSpec::Sweedler { q, lambda } => {
                Ok(Instance::Sweedler(SweedlerInstance::new(*q, *lambda)?))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Instance::Nilpotent(g) => format!("nilpotent:n={},p={}", g.n, g.p),
            Instance::Modular(i) => format!(
                "modular-currents:p={},m={}{}",
                i.p,
                i.m,
                if i.sub != 1 { format!(",sub={}", i.sub) } else { String::new() }
            ),
            Instance::Sweedler(i) => format!("sweedler:q={},lambda={}", i.q, i.lambda),
        }
    }

    /// The algebra whose modules the diagram/series commands work over.
    pub fn algebra(&self) -> Arc<Algebra> {
        match self {
            Instance::Nilpotent(g) => Arc::clone(&g.alg),
            Instance::Modular(i) => Arc::clone(&i.ctx.hopf.algebra),
            Instance::Sweedler(i) => Arc::clone(&i.ctx.hopf.algebra),
        }
    }

    pub fn module(&self, spec: &ModuleSpec) -> Result<ModuleRep> {
        match (self, spec) {
            (Instance::Nilpotent(g), ModuleSpec::Regular) => Ok(g.regular_module()),
            (Instance::Nilpotent(g), ModuleSpec::Jordan { l, .. }) => {
                g.jordan_type_module(&[*l])
            }
            (Instance::Nilpotent(g), ModuleSpec::JordanType { parts }) => {
                g.jordan_type_module(parts)
            }
            (Instance::Modular(i), ModuleSpec::Regular) => Ok(i.regular_module()),
            (Instance::Modular(i), ModuleSpec::Jordan { l, t }) => i.jordan_module(*l, *t),
            (Instance::Modular(i), ModuleSpec::Sum { parts }) => {
                let mut acc: Option<ModuleRep> = None;
                for &(l, t) in parts {
                    let m = i.jordan_module(l, t)?;
                    acc = Some(match acc {
                        None => m,
                        Some(a) => a.direct_sum(&m)?,
                    });
                }
                Ok(acc.unwrap())
            }
            (Instance::Modular(i), ModuleSpec::Simple { index }) => i
                .simples
                .get(*index)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no simple with index {index}"))),
            (Instance::Sweedler(i), ModuleSpec::Regular) => Ok(i.regular_module()),
            (Instance::Sweedler(i), ModuleSpec::Projective { index }) => i.projective(*index),
            (Instance::Sweedler(i), ModuleSpec::Simple { index }) => i
                .simples
                .get(*index)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no simple with index {index}"))),
            _ => Err(Error::Invalid(format!(
                "module selector {spec:?} does not apply to {}",
                self.name()
            ))),
        }
    }

    /// Induction data for verification commands. The nilpotent generator
    /// supports this only at n = p, where the trivial current algebra
    /// makes induction the identity.
    pub fn induction_context(&self) -> Result<InductionContext> {
        match self {
            Instance::Nilpotent(g) => {
                let hopf = g.hopf()?;
                let algobj = crate::braided::unit_algebra_object(&hopf);
                InductionContext::new(hopf, algobj)
            }
            Instance::Modular(i) => {
                InductionContext::new(i.ctx.hopf.clone(), i.ctx.algobj.clone())
            }
            Instance::Sweedler(i) => {
                InductionContext::new(i.ctx.hopf.clone(), i.ctx.algobj.clone())
            }
        }
    }

    /// The declared list of simple modules with display names.
    pub fn declared_simples(&self) -> Result<Vec<(String, ModuleRep)>> {
        match self {
            Instance::Nilpotent(g) => {
                let hopf = g.hopf()?;
                Ok(vec![("triv".into(), crate::braided::unit_object(&hopf))])
            }
            Instance::Modular(i) => Ok(i
                .simple_names
                .iter()
                .cloned()
                .zip(i.simples.iter().cloned())
                .collect()),
            Instance::Sweedler(i) => Ok(i
                .simple_names
                .iter()
                .cloned()
                .zip(i.simples.iter().cloned())
                .collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modth::{LabelRegistry, SearchCfg};

    #[test]
    fn generator_parsing() {
        assert_eq!(
            parse_generator("nilpotent:n=3,p=5").unwrap(),
            GenSpec::Nilpotent { n: 3, p: 5 }
        );
        assert_eq!(
            parse_generator("modular-currents:p=5,m=2").unwrap(),
            GenSpec::ModularCurrents { p: 5, m: 2, sub: 1 }
        );
        assert_eq!(
            parse_generator("modular-currents:p=5,m=4,sub=2").unwrap(),
            GenSpec::ModularCurrents { p: 5, m: 4, sub: 2 }
        );
        assert_eq!(
            parse_generator("sweedler:q=7,lambda=1").unwrap(),
            GenSpec::Sweedler { q: 7, lambda: 1 }
        );
        assert!(parse_generator("unknown:a=1").is_err());
        assert!(parse_generator("nilpotent:n=3").is_err());
    }

    #[test]
    fn module_parsing() {
        assert_eq!(parse_module("regular").unwrap(), ModuleSpec::Regular);
        assert_eq!(
            parse_module("jordan:l=3,t=1").unwrap(),
            ModuleSpec::Jordan { l: 3, t: 1 }
        );
        assert_eq!(
            parse_module("sum:2.0+3.1").unwrap(),
            ModuleSpec::Sum { parts: vec![(2, 0), (3, 1)] }
        );
        assert_eq!(
            parse_module("type:2+1+1").unwrap(),
            ModuleSpec::JordanType { parts: vec![2, 1, 1] }
        );
        assert!(parse_module("jordan:t=1").is_err());
        assert!(parse_module("wat").is_err());
    }

    #[test]
    fn modular_instance_requires_divisibility() {
        assert!(ModularInstance::new(5, 3, 1).is_err());
        assert!(ModularInstance::new(5, 2, 1).is_ok());
        assert!(ModularInstance::new(5, 4, 3).is_err());
    }

    #[test]
    fn modular_simples_are_characters_with_primitive_root() {
        let inst = ModularInstance::new(7, 3, 1).unwrap();
        // zeta has exact order 3
        let z = inst.zeta;
        assert_ne!(z, 1);
        assert_eq!(z * z % 7 * z % 7, 1);
        // chi_1 on h is zeta
        let chi1 = &inst.simples[1];
        assert_eq!(
            chi1.action(inst.h_index()),
            &Mat::from_ints(chi1.field(), 1, 1, &[z as i64])
        );
        // every character passes the module relations
        for s in &inst.simples {
            s.check_action().unwrap();
        }
    }

    #[test]
    fn modular_declared_simples_are_complete() {
        // every composition factor of the regular module matches one of
        // the declared characters
        let cfg = SearchCfg::default();
        let inst = ModularInstance::new(5, 2, 1).unwrap();
        let mut reg = LabelRegistry::new(cfg.clone());
        let mut declared = Vec::new();
        for s in &inst.simples {
            declared.push(reg.label_of(s).unwrap());
        }
        let factors = inst
            .regular_module()
            .composition_factors(&mut reg, &cfg)
            .unwrap();
        for label in factors.keys() {
            assert!(declared.contains(label), "undeclared simple factor");
        }
        // and the regular module has p * m = 10 factors in total
        assert_eq!(factors.values().sum::<usize>(), 10);
    }

    #[test]
    fn jordan_modules_are_valid_and_uniserial() {
        let inst = ModularInstance::new(5, 2, 1).unwrap();
        for l in 1..=5 {
            for t in 0..2 {
                let m = inst.jordan_module(l, t).unwrap();
                m.check_action().unwrap();
                assert_eq!(m.loewy_length().unwrap(), l);
            }
        }
        assert!(inst.jordan_module(6, 0).is_err());
        assert!(inst.jordan_module(0, 0).is_err());
    }

    #[test]
    fn nilpotent_generator_fixture_list() {
        let g = NilpotentGen::new(2, 2).unwrap();
        let types = g.jordan_types_up_to(4);
        // partitions with parts <= 2 of 1..4: [1], [2], [1,1], [2,1],
        // [1,1,1], [2,2], [2,1,1], [1,1,1,1]
        assert_eq!(types.len(), 8);
        for t in &types {
            let m = g.jordan_type_module(t).unwrap();
            m.check_action().unwrap();
            assert_eq!(m.dim(), t.iter().sum::<usize>());
        }
        // hopf needs n = p
        assert!(g.hopf().is_ok());
        assert!(NilpotentGen::new(3, 2).unwrap().hopf().is_err());
    }

    #[test]
    fn sweedler_projectives_have_expected_structure() {
        let cfg = SearchCfg::default();
        let inst = SweedlerInstance::new(5, 1).unwrap();
        for i in 0..2 {
            let p = inst.projective(i).unwrap();
            p.check_action().unwrap();
            assert_eq!(p.loewy_length().unwrap(), 2);
            // socle and top are the two distinct characters
            let soc = p.socle().unwrap();
            assert_eq!(soc.rows(), 1);
            let (socmod, _) = p.submodule(&soc).unwrap();
            let expected_socle = &inst.simples[1 - i];
            assert!(socmod.is_isomorphic(expected_socle, &cfg).unwrap());
        }
        // the regular module is the sum of the two projectives
        let reg = inst.regular_module();
        let both = inst
            .projective(0)
            .unwrap()
            .direct_sum(&inst.projective(1).unwrap())
            .unwrap();
        assert!(reg.is_isomorphic(&both, &cfg).unwrap());
    }

    #[test]
    fn instances_build_from_specs() {
        for s in [
            "nilpotent:n=3,p=7",
            "modular-currents:p=3,m=2",
            "sweedler:q=5,lambda=0",
        ] {
            let spec = parse_generator(s).unwrap();
            let inst = Instance::from_spec(&spec).unwrap();
            let m = inst.module(&ModuleSpec::Regular).unwrap();
            assert!(m.dim() > 0);
        }
    }
}
