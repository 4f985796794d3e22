//! Command line front end: load JSON definitions or named corpus
//! generators, compute series and layered diagrams, induce modules along
//! the current algebra, run the verification suite, and compare the arrow
//! detector against the brute-force reference.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error,
//! 3 precondition violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use loewy_core::braided::{verify_preservation, HopfAlgebra, InductionContext};
use loewy_core::corpus::{self, Instance};
use loewy_core::jsonio;
use loewy_core::loewy::{emit, loewy_diagram, oracle, EmitFormat};
use loewy_core::modth::{FiltrationKind, LabelRegistry, ModuleRep, SearchCfg};
use loewy_core::{Error, Result};

#[derive(Parser)]
#[command(name = "loewy", version, about = "Exact socle/radical filtrations, layered module diagrams, and induction along simple currents")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Socle,
    Radical,
}

impl From<KindArg> for FiltrationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Socle => FiltrationKind::Socle,
            KindArg::Radical => FiltrationKind::Radical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Ascii,
    Json,
}

impl From<FormatArg> for EmitFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dot => EmitFormat::Dot,
            FormatArg::Ascii => EmitFormat::Ascii,
            FormatArg::Json => EmitFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Layered diagram of a module with non-split extension arrows.
    Diagram {
        /// Named generator, e.g. "nilpotent:n=3,p=5".
        #[arg(long, conflicts_with = "module_file")]
        gen: Option<String>,
        /// Module selector for the generator ("regular", "jordan:l=3,t=1",
        /// "sum:2.0+3.1", "simple:j=1", "proj:i=0", "type:2+1").
        #[arg(long, default_value = "regular")]
        module: String,
        /// JSON module file (carries its algebra inline).
        #[arg(long)]
        module_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "radical")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "ascii")]
        format: FormatArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Socle or radical series of a module as row bases.
    Series {
        #[arg(long, conflicts_with = "module_file")]
        gen: Option<String>,
        #[arg(long, default_value = "regular")]
        module: String,
        #[arg(long)]
        module_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "radical")]
        kind: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induce a module along the current algebra; prints the module over
    /// the smash product as JSON.
    Induce {
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, default_value = "regular")]
        module: String,
        /// Hopf data file (used with --algobj and --module-file).
        #[arg(long, requires = "algobj")]
        hopf: Option<PathBuf>,
        #[arg(long)]
        algobj: Option<PathBuf>,
        #[arg(long)]
        module_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the hypothesis and preservation checks; exit 1 on any failure.
    Verify {
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, default_value = "regular")]
        module: String,
        #[arg(long, requires = "algobj")]
        hopf: Option<PathBuf>,
        #[arg(long)]
        algobj: Option<PathBuf>,
        #[arg(long)]
        module_file: Option<PathBuf>,
        /// Restrict to one filtration kind; default checks both.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the arrow detector against brute-force enumeration on every
    /// small module of the generator; exit 1 on disagreement.
    Oracle {
        #[arg(long)]
        gen: String,
        /// Cap on module dimension (default: LOEWY_MAX_ORACLE_DIM or 4).
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write example JSON fixtures and list the named generators.
    Examples {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome { text, out, verified }) => {
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                }
                None => print!("{text}"),
            }
            if verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Json(_) | Error::Schema(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

struct Outcome {
    text: String,
    out: Option<PathBuf>,
    verified: bool,
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Diagram { gen, module, module_file, kind, format, seed, out } => {
            let m = load_module(gen.as_deref(), &module, module_file.as_deref())?;
            let cfg = SearchCfg { seed, ..SearchCfg::default() };
            let mut reg = LabelRegistry::new(cfg.clone());
            let d = loewy_diagram(&m, kind.into(), &mut reg, &cfg)?;
            let text = emit(&d, format.into(), &reg);
            Ok(Outcome { text, out, verified: true })
        }
        Cmd::Series { gen, module, module_file, kind, out } => {
            let m = load_module(gen.as_deref(), &module, module_file.as_deref())?;
            let series = match kind.into() {
                FiltrationKind::Socle => m.socle_series()?,
                FiltrationKind::Radical => m.radical_series()?,
            };
            let text = jsonio::to_json_pretty(&jsonio::filtration_to_dto(&series));
            Ok(Outcome { text: text + "\n", out, verified: true })
        }
        Cmd::Induce { gen, module, hopf, algobj, module_file, out } => {
            let (ctx, m) = load_induction(gen.as_deref(), &module, hopf.as_deref(), algobj.as_deref(), module_file.as_deref())?;
            let fm = ctx.induce(&m)?;
            let text = jsonio::to_json_pretty(&jsonio::module_to_dto(&fm));
            Ok(Outcome { text: text + "\n", out, verified: true })
        }
        Cmd::Verify { gen, module, hopf, algobj, module_file, kind, seed, out } => {
            let (ctx, m) = load_induction(gen.as_deref(), &module, hopf.as_deref(), algobj.as_deref(), module_file.as_deref())?;
            let simples = match gen.as_deref() {
                Some(g) => {
                    let inst = Instance::from_spec(&corpus::parse_generator(g)?)?;
                    inst.declared_simples()?.into_iter().map(|(_, m)| m).collect()
                }
                None => simples_from_regular(&ctx.hopf, seed)?,
            };
            let cfg = SearchCfg { seed, ..SearchCfg::default() };
            let kinds: Vec<FiltrationKind> = match kind {
                Some(k) => vec![k.into()],
                None => vec![FiltrationKind::Socle, FiltrationKind::Radical],
            };
            let mut reports = Vec::new();
            let mut all_pass = true;
            for k in kinds {
                let rep = verify_preservation(&ctx, &m, k, &simples, &cfg)?;
                all_pass &= rep.all_pass();
                reports.push(rep);
            }
            #[derive(Serialize)]
            struct VerifyOutput<'a> {
                module_dim: usize,
                seed: u64,
                all_pass: bool,
                reports: &'a [loewy_core::braided::PreservationReport],
            }
            let text = jsonio::to_json_pretty(&VerifyOutput {
                module_dim: m.dim(),
                seed,
                all_pass,
                reports: &reports,
            });
            Ok(Outcome { text: text + "\n", out, verified: all_pass })
        }
        Cmd::Oracle { gen, max_dim, seed, out } => {
            let max_dim = max_dim
                .or_else(|| {
                    std::env::var("LOEWY_MAX_ORACLE_DIM")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(4);
            let spec = corpus::parse_generator(&gen)?;
            let inst = Instance::from_spec(&spec)?;
            let cfg = SearchCfg { seed, ..SearchCfg::default() };
            let mut reg = LabelRegistry::new(cfg.clone());
            let mut rows = Vec::new();
            let mut skipped = Vec::new();
            for (desc, m) in oracle_module_menu(&inst, max_dim)? {
                if m.loewy_length()? > 2 {
                    skipped.push(format!("{desc}: loewy length > 2"));
                    continue;
                }
                let limit = 1u64 << 20;
                rows.extend(oracle::agreement_cases(&desc, &m, &mut reg, &cfg, limit)?);
            }
            let agree = rows.iter().all(|c| c.detector == c.oracle);
            #[derive(Serialize)]
            struct OracleOutput {
                generator: String,
                max_dim: usize,
                cases: Vec<oracle::AgreementCase>,
                skipped: Vec<String>,
                all_agree: bool,
            }
            let text = jsonio::to_json_pretty(&OracleOutput {
                generator: gen,
                max_dim,
                cases: rows,
                skipped,
                all_agree: agree,
            });
            Ok(Outcome { text: text + "\n", out, verified: agree })
        }
        Cmd::Examples { out } => {
            let dir = out.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
            std::fs::create_dir_all(&dir)
                .map_err(|e| Error::Invalid(format!("cannot create {}: {e}", dir.display())))?;
            let sw = corpus::SweedlerInstance::new(5, 1)?;
            write_fixture(&dir, "sweedler_hopf.json", &jsonio::hopf_to_dto(&sw.ctx.hopf))?;
            write_fixture(
                &dir,
                "sweedler_current_algebra.json",
                &jsonio::algebra_object_to_dto(&sw.ctx.algobj),
            )?;
            let mi = corpus::ModularInstance::new(3, 2, 1)?;
            write_fixture(&dir, "modular_hopf_p3_m2.json", &jsonio::hopf_to_dto(&mi.ctx.hopf))?;
            write_fixture(
                &dir,
                "modular_current_algebra_p3_m2.json",
                &jsonio::algebra_object_to_dto(&mi.ctx.algobj),
            )?;
            let j2 = mi.jordan_module(2, 1)?;
            write_fixture(&dir, "modular_jordan_l2_t1.json", &jsonio::module_to_dto(&j2))?;
            let ng = corpus::NilpotentGen::new(3, 7)?;
            write_fixture(
                &dir,
                "nilpotent_regular_n3_p7.json",
                &jsonio::module_to_dto(&ng.regular_module()),
            )?;
            let text = format!(
                "wrote fixtures to {}\n\ngenerators:\n  nilpotent:n=<size>,p=<prime>        truncated polynomial algebra (Hopf layer at n = p)\n  modular-currents:p=<prime>,m=<div>[,sub=<div of m>]  group algebra with character currents\n  sweedler:q=<odd prime>,lambda=<param>  the braided 4-dimensional testbed\n",
                dir.display()
            );
            Ok(Outcome { text, out: None, verified: true })
        }
    }
}

fn write_fixture<T: Serialize>(dir: &Path, name: &str, v: &T) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, jsonio::to_json_pretty(v))
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_module(gen: Option<&str>, module: &str, module_file: Option<&Path>) -> Result<ModuleRep> {
    match (gen, module_file) {
        (Some(g), None) => {
            let inst = Instance::from_spec(&corpus::parse_generator(g)?)?;
            inst.module(&corpus::parse_module(module)?)
        }
        (None, Some(path)) => {
            let dto: jsonio::ModuleDto = jsonio::from_json_str(&read_file(path)?)?;
            jsonio::module_from_dto(&dto)
        }
        _ => Err(Error::Invalid("provide exactly one of --gen or --module-file".into())),
    }
}

fn load_induction(
    gen: Option<&str>,
    module: &str,
    hopf: Option<&Path>,
    algobj: Option<&Path>,
    module_file: Option<&Path>,
) -> Result<(InductionContext, ModuleRep)> {
    match (gen, hopf, algobj) {
        (Some(g), None, None) => {
            let inst = Instance::from_spec(&corpus::parse_generator(g)?)?;
            let ctx = inst.induction_context()?;
            let m = inst.module(&corpus::parse_module(module)?)?;
            Ok((ctx, m))
        }
        (None, Some(hp), Some(ap)) => {
            let hdto: jsonio::HopfDto = jsonio::from_json_str(&read_file(hp)?)?;
            let h = jsonio::hopf_from_dto(&hdto)?;
            let adto: jsonio::AlgebraObjectDto = jsonio::from_json_str(&read_file(ap)?)?;
            let a = jsonio::algebra_object_from_dto(&adto, &h)?;
            let m = match module_file {
                Some(mp) => {
                    let mdto: jsonio::ModuleDto = jsonio::from_json_str(&read_file(mp)?)?;
                    let loaded = jsonio::module_from_dto(&mdto)?;
                    if loaded.alg().as_ref() != h.algebra.as_ref() {
                        return Err(Error::Schema(
                            "module file is over a different algebra than the Hopf data".into(),
                        ));
                    }
                    // rebind to the shared algebra instance
                    ModuleRep::new(
                        Arc::clone(&h.algebra),
                        (0..h.dim()).map(|i| loaded.action(i).clone()).collect(),
                    )?
                }
                None => ModuleRep::regular(&h.algebra),
            };
            let ctx = InductionContext::new(h, a)?;
            Ok((ctx, m))
        }
        _ => Err(Error::Invalid(
            "provide --gen, or --hopf together with --algobj".into(),
        )),
    }
}

/// Declared simples for file-based verification: the distinct composition
/// factors of the regular module, which exhaust the simple classes.
fn simples_from_regular(h: &HopfAlgebra, seed: u64) -> Result<Vec<ModuleRep>> {
    let cfg = SearchCfg { seed, ..SearchCfg::default() };
    let mut reg = LabelRegistry::new(cfg.clone());
    let reg_mod = ModuleRep::regular(&h.algebra);
    let factors = reg_mod.composition_factors(&mut reg, &cfg)?;
    Ok(factors.keys().map(|&l| reg.rep(l).clone()).collect())
}

/// Small-module menu for the oracle command.
fn oracle_module_menu(inst: &Instance, max_dim: usize) -> Result<Vec<(String, ModuleRep)>> {
    let mut out: Vec<(String, ModuleRep)> = Vec::new();
    match inst {
        Instance::Nilpotent(g) => {
            for parts in g.jordan_types_up_to(max_dim) {
                let desc = format!(
                    "type:{}",
                    parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+")
                );
                out.push((desc, g.jordan_type_module(&parts)?));
            }
        }
        Instance::Modular(i) => {
            for t in 0..i.m {
                for l in 1..=(i.p as usize).min(max_dim) {
                    out.push((format!("jordan:l={l},t={t}"), i.jordan_module(l, t)?));
                }
            }
            // a couple of two-block sums inside the cap
            if max_dim >= 3 {
                out.push((
                    "sum:2.0+1.1".into(),
                    i.jordan_module(2, 0)?.direct_sum(&i.jordan_module(1, 1)?)?,
                ));
            }
            if max_dim >= 4 {
                out.push((
                    "sum:2.0+2.1".into(),
                    i.jordan_module(2, 0)?.direct_sum(&i.jordan_module(2, 1)?)?,
                ));
            }
        }
        Instance::Sweedler(i) => {
            out.push(("simple:j=0".into(), i.simples[0].clone()));
            out.push(("simple:j=1".into(), i.simples[1].clone()));
            if max_dim >= 2 {
                out.push(("proj:i=0".into(), i.projective(0)?));
                out.push(("proj:i=1".into(), i.projective(1)?));
            }
            if max_dim >= 4 {
                out.push(("regular".into(), i.regular_module()));
            }
        }
    }
    out.retain(|(_, m)| m.dim() <= max_dim);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
