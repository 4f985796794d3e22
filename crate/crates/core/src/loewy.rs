//! Layered diagrams of a chosen Loewy series: the k-th layer carries the
//! simple factors of the k-th successive quotient, and a vertical arrow
//! from a factor in layer k to a factor in layer k-1 records a non-split
//! length-two subquotient between the two classes.
//!
//! Whether such a subquotient exists is decided by a rank criterion (see
//! [`non_split_ext_exists`]); the criterion is kept honest by the
//! brute-force detector in [`oracle`], which enumerates all submodule pairs
//! and is exact on small modules.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algcore::complement_projection;
use crate::exactlin::Mat;
use crate::modth::{
    splits, subquotient, FiltrationKind, LabelId, LabelRegistry, ModuleRep, SearchCfg,
};
use crate::{Error, Result};

/// Loewy diagram: layers bottom-to-top (layer 1 is the bottom), each a
/// sorted list of simple labels with repetitions, plus arrows between
/// adjacent layers. An arrow (k, i, j) points from the factor at position i
/// in layer k to the factor at position j in layer k-1; k is 1-based, so
/// arrows have k >= 2. A single arrow is recorded per ordered pair of
/// isomorphism classes, anchored at the first position of each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoewyDiagram {
    pub kind: FiltrationKind,
    pub layers: Vec<Vec<LabelId>>,
    pub arrows: BTreeSet<(usize, usize, usize)>,
}

impl LoewyDiagram {
    pub fn loewy_length(&self) -> usize {
        self.layers.len()
    }

    /// Arrows as (upper layer, upper class, lower class) label triples.
    pub fn arrows_as_labels(&self) -> BTreeSet<(usize, LabelId, LabelId)> {
        self.arrows
            .iter()
            .map(|&(k, i, j)| (k, self.layers[k - 1][i], self.layers[k - 2][j]))
            .collect()
    }
}

/// Does some subquotient of `n` realize a non-split extension of `s` (top)
/// by `s_prime` (bottom)? Requires Loewy length of `n` at most 2.
///
/// Criterion: let T be the semisimple top of n and T_S its S-isotypic
/// component; let N_S be the preimage of T_S in n. The radical of N_S
/// collects exactly the radicals of cyclic submodules with top in the
/// S-part, so the extension exists iff S' occurs among the simple factors
/// of J . N_S.
pub fn non_split_ext_exists(
    n: &ModuleRep,
    s: LabelId,
    s_prime: LabelId,
    registry: &mut LabelRegistry,
    cfg: &SearchCfg,
) -> Result<bool> {
    let len = n.loewy_length()?;
    if len > 2 {
        return Err(Error::LoewyLengthTooLarge(len));
    }
    if n.dim() == 0 {
        return Ok(false);
    }
    let rad = n.radical()?;
    if rad.rows() == 0 {
        // semisimple: every subquotient splits
        return Ok(false);
    }
    let (top, proj) = n.quotient(&rad)?;
    // S-isotypic component of the top: sum of images of Hom(S, top)
    let s_rep = registry.rep(s).clone();
    let homs = s_rep.hom_space(&top)?;
    let mut iso = Mat::zeros(n.field(), 0, top.dim());
    for h in &homs {
        iso = iso.vstack(&h.transpose());
    }
    let iso = iso.row_space();
    if iso.rows() == 0 {
        return Ok(false);
    }
    // preimage of the isotypic part in n
    let (t, _) = complement_projection(&iso, top.dim(), n.field());
    let n_s = t.matmul(&proj).kernel();
    let (sub, incl) = n.submodule(&n_s)?;
    let rad_in_sub = sub.radical()?;
    let jns = rad_in_sub.matmul(&incl).row_space();
    if jns.rows() == 0 {
        return Ok(false);
    }
    let (jns_mod, _) = n.submodule(&jns)?;
    // J N_S is semisimple because J (J n) = 0 at Loewy length <= 2
    let factors = jns_mod.decompose_semisimple(registry, cfg)?;
    Ok(factors.iter().any(|&(l, _)| l == s_prime))
}

/// Build the Loewy diagram of a module for the chosen filtration kind.
pub fn loewy_diagram(
    m: &ModuleRep,
    kind: FiltrationKind,
    registry: &mut LabelRegistry,
    cfg: &SearchCfg,
) -> Result<LoewyDiagram> {
    let series = match kind {
        FiltrationKind::Socle => m.socle_series()?,
        FiltrationKind::Radical => m.radical_series()?,
    };
    let n = series.len();
    let mut layers: Vec<Vec<LabelId>> = Vec::with_capacity(n);
    for k in 1..=n {
        let layer = series.layer_module(k)?;
        let mut labels = Vec::new();
        for (label, mult) in layer.decompose_semisimple(registry, cfg)? {
            for _ in 0..mult {
                labels.push(label);
            }
        }
        labels.sort();
        layers.push(labels);
    }
    let mut arrows = BTreeSet::new();
    for k in 2..=n {
        let section = series.section_quotient(k, k - 2)?;
        let upper: Vec<LabelId> = dedup_sorted(&layers[k - 1]);
        let lower: Vec<LabelId> = dedup_sorted(&layers[k - 2]);
        for &s in &upper {
            for &s_prime in &lower {
                if non_split_ext_exists(&section, s, s_prime, registry, cfg)? {
                    let i = layers[k - 1].iter().position(|&l| l == s).unwrap();
                    let j = layers[k - 2].iter().position(|&l| l == s_prime).unwrap();
                    arrows.insert((k, i, j));
                }
            }
        }
    }
    Ok(LoewyDiagram { kind, layers, arrows })
}

fn dedup_sorted(labels: &[LabelId]) -> Vec<LabelId> {
    let mut v = labels.to_vec();
    v.dedup();
    v
}

/// Directional diagram comparison: true iff the layer counts agree, every
/// mapped layer multiset of `d1` equals the corresponding layer of `d2`,
/// and every arrow of `d1` maps to an arrow of `d2`. The label map must be
/// total on the labels of `d1`.
pub fn diagrams_match(
    d1: &LoewyDiagram,
    d2: &LoewyDiagram,
    label_map: &BTreeMap<LabelId, LabelId>,
) -> Result<bool> {
    let map = |l: LabelId| -> Result<LabelId> {
        label_map
            .get(&l)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("label map is not total: missing S{}", l.0)))
    };
    if d1.layers.len() != d2.layers.len() {
        return Ok(false);
    }
    for (l1, l2) in d1.layers.iter().zip(&d2.layers) {
        let mut mapped: Vec<LabelId> = l1.iter().map(|&l| map(l)).collect::<Result<_>>()?;
        mapped.sort();
        if &mapped != l2 {
            return Ok(false);
        }
    }
    let target = d2.arrows_as_labels();
    for (k, up, lo) in d1.arrows_as_labels() {
        if !target.contains(&(k, map(up)?, map(lo)?)) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Dot,
    Ascii,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct DiagramJson {
    kind: String,
    layers: Vec<Vec<String>>,
    arrows: Vec<[usize; 3]>,
}

/// Deterministic text form of a diagram: DOT with one rank per layer,
/// a layered ascii rendering, or canonical JSON.
pub fn emit(d: &LoewyDiagram, format: EmitFormat, registry: &LabelRegistry) -> String {
    match format {
        EmitFormat::Json => {
            let dj = DiagramJson {
                kind: d.kind.to_string(),
                layers: d
                    .layers
                    .iter()
                    .map(|l| l.iter().map(|&id| registry.name(id).to_string()).collect())
                    .collect(),
                arrows: d.arrows.iter().map(|&(k, i, j)| [k, i, j]).collect(),
            };
            serde_json::to_string_pretty(&dj).expect("diagram serialization cannot fail")
        }
        EmitFormat::Dot => {
            let node = |k: usize, i: usize| {
                format!("\"{}:{}:{}\"", k, i, registry.name(d.layers[k - 1][i]))
            };
            let mut out = String::from("digraph loewy {\n");
            out.push_str(&format!("  // {} filtration\n", d.kind));
            for (k0, layer) in d.layers.iter().enumerate() {
                let k = k0 + 1;
                out.push_str("  { rank=same; ");
                for i in 0..layer.len() {
                    out.push_str(&node(k, i));
                    out.push_str("; ");
                }
                out.push_str("}\n");
            }
            for (k0, layer) in d.layers.iter().enumerate() {
                let k = k0 + 1;
                for i in 0..layer.len() {
                    out.push_str(&format!(
                        "  {} [label=\"{}\"];\n",
                        node(k, i),
                        registry.name(layer[i])
                    ));
                }
            }
            for &(k, i, j) in &d.arrows {
                out.push_str(&format!("  {} -> {};\n", node(k, i), node(k - 1, j)));
            }
            out.push_str("}\n");
            out
        }
        EmitFormat::Ascii => {
            let mut out = String::new();
            out.push_str(&format!(
                "{} series, {} layer(s)\n",
                d.kind,
                d.layers.len()
            ));
            for k in (1..=d.layers.len()).rev() {
                let names: Vec<&str> =
                    d.layers[k - 1].iter().map(|&l| registry.name(l)).collect();
                out.push_str(&format!("[{}] {}\n", k, names.join(" ")));
                if k > 1 {
                    let mut conns: Vec<String> = d
                        .arrows
                        .iter()
                        .filter(|&&(ak, _, _)| ak == k)
                        .map(|&(_, i, j)| {
                            format!(
                                "{} -> {}",
                                registry.name(d.layers[k - 1][i]),
                                registry.name(d.layers[k - 2][j])
                            )
                        })
                        .collect();
                    conns.sort();
                    if !conns.is_empty() {
                        out.push_str(&format!(" |  {}\n", conns.join(", ")));
                    }
                }
            }
            out
        }
    }
}

/// Parse the canonical JSON emitted by [`emit`], resolving label names in
/// the given registry.
pub fn parse_diagram(json: &str, registry: &LabelRegistry) -> Result<LoewyDiagram> {
    let dj: DiagramJson =
        serde_json::from_str(json).map_err(|e| Error::Json(e.to_string()))?;
    let kind = match dj.kind.as_str() {
        "socle" => FiltrationKind::Socle,
        "radical" => FiltrationKind::Radical,
        other => return Err(Error::Schema(format!("unknown filtration kind {other:?}"))),
    };
    let mut layers = Vec::with_capacity(dj.layers.len());
    for layer in &dj.layers {
        let mut ids = Vec::with_capacity(layer.len());
        for name in layer {
            let id = registry
                .id_by_name(name)
                .ok_or_else(|| Error::Schema(format!("unknown label name {name:?}")))?;
            ids.push(id);
        }
        layers.push(ids);
    }
    let mut arrows = BTreeSet::new();
    for [k, i, j] in dj.arrows {
        if k < 2 || k > layers.len() || i >= layers[k - 1].len() || j >= layers[k - 2].len() {
            return Err(Error::Schema(format!("arrow [{k},{i},{j}] out of range")));
        }
        arrows.insert((k, i, j));
    }
    Ok(LoewyDiagram { kind, layers, arrows })
}

// ---------------------------------------------------------------------------
// brute-force reference detector
// ---------------------------------------------------------------------------

/// Exhaustive machinery for small modules over small prime fields, used to
/// police the rank criterion.
pub mod oracle {
    use super::*;
    use crate::exactlin::{FieldSpec, Scalar};

    /// All submodules of `m`, found as sums of single-vector spins (every
    /// submodule is a sum of cyclic ones). Only feasible for small
    /// |F|^dim; `limit` caps the number of ambient vectors enumerated.
    pub fn enumerate_submodules(m: &ModuleRep, limit: u64) -> Result<Vec<Mat>> {
        let p = match m.field() {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => {
                return Err(Error::Invalid(
                    "submodule enumeration needs a finite field".into(),
                ))
            }
        };
        let d = m.dim() as u32;
        let total = p.checked_pow(d).filter(|&t| t <= limit).ok_or_else(|| {
            Error::Invalid(format!(
                "module too large for exhaustive enumeration: {p}^{d} vectors"
            ))
        })?;
        // atoms: spins of every nonzero vector
        let mut atoms: Vec<Mat> = Vec::new();
        let mut seen = BTreeSet::new();
        for code in 1..total {
            let mut v = Mat::zeros(m.field(), 1, m.dim());
            let mut c = code;
            for idx in 0..m.dim() {
                v.set(0, idx, Scalar::from_i64(m.field(), (c % p) as i64));
                c /= p;
            }
            let s = m.spin(&v);
            if seen.insert(key_of(&s)) {
                atoms.push(s);
            }
        }
        // close under sums
        let mut all: Vec<Mat> = vec![Mat::zeros(m.field(), 0, m.dim())];
        let mut keys = BTreeSet::new();
        keys.insert(key_of(&all[0]));
        let mut frontier = all.clone();
        while let Some(u) = frontier.pop() {
            for a in &atoms {
                let s = crate::exactlin::subspace_sum(&u, a)?;
                if keys.insert(key_of(&s)) {
                    all.push(s.clone());
                    frontier.push(s);
                }
            }
        }
        all.sort_by_key(key_of);
        Ok(all)
    }

    fn key_of(m: &Mat) -> String {
        let mut s = format!("{}x{}:", m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                s.push_str(&m.get(i, j).to_string());
                s.push(',');
            }
        }
        s
    }

    /// Brute-force arrow detector: enumerate all submodule pairs U <= V,
    /// form X = V/U, and look for a submodule Y of X with Y isomorphic to
    /// s', X/Y isomorphic to s, and the inclusion of Y non-split.
    pub fn non_split_ext_exists(
        n: &ModuleRep,
        s: LabelId,
        s_prime: LabelId,
        registry: &mut LabelRegistry,
        cfg: &SearchCfg,
        limit: u64,
    ) -> Result<bool> {
        let subs = enumerate_submodules(n, limit)?;
        let s_rep = registry.rep(s).clone();
        let sp_rep = registry.rep(s_prime).clone();
        let want = s_rep.dim() + sp_rep.dim();
        for upper in &subs {
            for lower in &subs {
                if lower.rows() + want != upper.rows() {
                    continue;
                }
                if !crate::exactlin::subspace_contains(upper, lower)? {
                    continue;
                }
                let (x, _) = subquotient(n, upper, lower)?;
                for y in enumerate_submodules(&x, limit)? {
                    if y.rows() != sp_rep.dim() {
                        continue;
                    }
                    let (ymod, incl) = x.submodule(&y)?;
                    if !ymod.is_isomorphic(&sp_rep, cfg)? {
                        continue;
                    }
                    let (q, _) = x.quotient(&y)?;
                    if !q.is_isomorphic(&s_rep, cfg)? {
                        continue;
                    }
                    if !splits(&incl, &ymod, &x)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// One detector-vs-oracle comparison row.
    #[derive(Debug, Clone, Serialize)]
    pub struct AgreementCase {
        pub module: String,
        pub upper: String,
        pub lower: String,
        pub detector: bool,
        pub oracle: bool,
    }

    /// Run the rank criterion against the brute-force detector for every
    /// ordered pair of simple classes on one module of Loewy length <= 2.
    pub fn agreement_cases(
        desc: &str,
        n: &ModuleRep,
        registry: &mut LabelRegistry,
        cfg: &SearchCfg,
        limit: u64,
    ) -> Result<Vec<AgreementCase>> {
        // collect the simple classes appearing in n
        let factors = n.composition_factors(registry, cfg)?;
        let labels: Vec<LabelId> = factors.keys().copied().collect();
        let mut out = Vec::new();
        for &s in &labels {
            for &sp in &labels {
                let detector = super::non_split_ext_exists(n, s, sp, registry, cfg)?;
                let oracle = non_split_ext_exists(n, s, sp, registry, cfg, limit)?;
                out.push(AgreementCase {
                    module: desc.to_string(),
                    upper: registry.name(s).to_string(),
                    lower: registry.name(sp).to_string(),
                    detector,
                    oracle,
                });
            }
        }
        Ok(out)
    }
}
