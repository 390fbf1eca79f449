//! Subcommand implementations and their text and JSON renderings.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use liesym::chevalley::{Sampling, StructureTable};
use liesym::classify::golden::{self, Engine, TableDocument, TABLE_IDS};
use liesym::classify::witness::{self, Witness};
use liesym::classify::{classify, Context, Descriptor};
use liesym::glie::{check_grading, gradation_from_partition, Partition};
use liesym::invol::commutation_type;
use liesym::labels::Label;
use liesym::linalg::{q_inverse, to_q};
use liesym::rootsys::{Coweight, RootSystem};
use liesym::torsion::TorsionAut;
use liesym::{LieError, Result};

use crate::Format;

/// Rendered output and whether every verification passed.
pub struct Outcome {
    pub text: String,
    pub verified: bool,
}

fn emit<T: Serialize>(value: &T, format: Format, text: impl FnOnce(&T) -> String, verified: bool) -> Result<Outcome> {
    let text = match format {
        Format::Text => text(value),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| LieError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    Ok(Outcome { text, verified })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Summary of a root system.
#[derive(Serialize)]
pub struct RootSystemSummary {
    pub ty: String,
    pub rank: usize,
    pub dim: usize,
    pub roots: usize,
    pub positive_roots: usize,
    pub highest_root: Vec<i64>,
    pub marks: Vec<i64>,
    pub cartan: Vec<Vec<i64>>,
    /// `coweights[j][i]` is the coefficient of the simple coroot `i + 1` in `K_{j+1}`.
    pub coweights: Vec<Vec<String>>,
}

pub fn rootsys(ty: &str, format: Format) -> Result<Outcome> {
    let rs = RootSystem::of(ty)?;
    let n = rs.rank();
    let inv = q_inverse(&to_q(&rs.cartan)).ok_or_else(|| LieError::Internal("singular Cartan matrix".into()))?;
    let summary = RootSystemSummary {
        ty: rs.ty.to_string(),
        rank: n,
        dim: rs.dim(),
        roots: rs.roots.len(),
        positive_roots: rs.n_pos,
        highest_root: rs.highest.clone(),
        marks: rs.marks(),
        cartan: rs.cartan.clone(),
        coweights: (0..n).map(|j| (0..n).map(|i| inv[i][j].to_string()).collect()).collect(),
    };
    emit(
        &summary,
        format,
        |s| {
            let mut out = String::new();
            let _ = writeln!(out, "type {}  rank {}  dim {}", s.ty, s.rank, s.dim);
            let _ = writeln!(out, "roots {}  positive {}", s.roots, s.positive_roots);
            let _ = writeln!(out, "highest root ({})", join(&s.highest_root));
            let _ = writeln!(out, "marks ({})", join(&s.marks));
            for (j, c) in s.coweights.iter().enumerate() {
                let _ = writeln!(out, "K{} = ({}) in simple coroots", j + 1, c.join(","));
            }
            out
        },
        true,
    )
}

/// Fixed subalgebra of `τ_H`.
#[derive(Serialize)]
pub struct FixReport {
    pub ty: String,
    pub h: String,
    pub order: u64,
    pub fixed: String,
    pub dim: usize,
    pub center_dim: usize,
    pub simple_roots: Vec<Vec<i64>>,
}

pub fn fix(ty: &str, h: &str, format: Format) -> Result<Outcome> {
    let rs = RootSystem::of(ty)?;
    let h = Coweight::parse(rs.rank(), h)?;
    let aut = TorsionAut::new(h.clone());
    let fixed = aut.fixed_subalgebra(&rs)?;
    let label = if fixed.dim == rs.dim() { rs.ty.to_string() } else { fixed.label() };
    let report = FixReport {
        ty: rs.ty.to_string(),
        h: if h.0.iter().all(|x| *x == num_traits::Zero::zero()) { "0".into() } else { h.to_string() },
        order: aut.order(&rs),
        fixed: label,
        dim: fixed.dim,
        center_dim: fixed.center_dim,
        simple_roots: fixed.base.clone(),
    };
    emit(
        &report,
        format,
        |r| {
            format!(
                "{} tau[{}]  order {}\nfixed {}  dim {}  dim z {}\n",
                r.ty, r.h, r.order, r.fixed, r.dim, r.center_dim
            )
        },
        true,
    )
}

/// Invariants of one involution for a pair.
#[derive(Serialize)]
pub struct InvolReport {
    pub ty: String,
    pub node: usize,
    pub h: String,
    pub dim_z: usize,
    pub descriptor: String,
    pub commutation: String,
    pub k: String,
    pub k_dim: usize,
    pub hk: String,
    pub hk_dim: usize,
    /// Whether the eigencount and the closed formula agree for both dimensions.
    pub dims_agree: bool,
    /// Row of the class among the engine classes, `None` for the identity class.
    pub class: Option<usize>,
    pub class_representative: Option<String>,
}

pub fn invol(ty: &str, node: usize, base: &str, twist: &str, format: Format) -> Result<Outcome> {
    let rs = RootSystem::of(ty)?;
    let ctx = Context::new(&rs.ty.to_string(), node)?;
    let d = Descriptor::parse(rs.rank(), base, twist)?;
    let inv = ctx.evaluate(&d)?;
    let (k, hk) = ctx.invariants(&inv)?;
    let rows = classify(&ctx)?;
    let class = ctx.row_of(&rows, &inv)?;
    let label = |r: &liesym::invol::FixedAlgebraReport| Label::new(r.types.clone(), r.abelian_dim).to_string();
    let report = InvolReport {
        ty: ctx.algebra.clone(),
        node,
        h: ctx.h.to_string(),
        dim_z: ctx.dim_z,
        descriptor: d.to_string(),
        commutation: commutation_type(&inv.aut.cmap, &ctx.sigma)?.to_string(),
        k: label(&k),
        k_dim: k.dim,
        hk: label(&hk),
        hk_dim: hk.dim,
        dims_agree: k.dim == k.dim_formula && hk.dim == hk.dim_formula,
        class,
        class_representative: class.map(|i| rows[i].descriptor.to_string()),
    };
    let verified = report.dims_agree;
    emit(
        &report,
        format,
        |r| {
            let mut out = String::new();
            let _ = writeln!(out, "{} sigma = tau[1/2*K{}]  h = {}  dim z = {}", r.ty, r.node, r.h, r.dim_z);
            let _ = writeln!(out, "involution {}  {}", r.descriptor, r.commutation);
            let _ = writeln!(out, "k {} (dim {})", r.k, r.k_dim);
            let _ = writeln!(out, "h cap k {} (dim {})", r.hk, r.hk_dim);
            match (&r.class, &r.class_representative) {
                (Some(i), Some(rep)) => {
                    let _ = writeln!(out, "class {i}: {rep}");
                }
                _ => {
                    let _ = writeln!(out, "class of the identity");
                }
            }
            out
        },
        verified,
    )
}

/// A partition gradation and its closure check.
#[derive(Serialize)]
pub struct GradeReport {
    pub ty: String,
    pub nodes: Vec<usize>,
    pub kind: i64,
    pub spectrum: Vec<i64>,
    pub grade_dims: BTreeMap<i64, usize>,
    pub pairs_checked: usize,
    pub sampled: bool,
    pub violations: Vec<String>,
    pub reversing: bool,
    pub balanced: bool,
}

pub fn grade(ty: &str, nodes: &[usize], samples: Option<usize>, seed: u64, format: Format) -> Result<Outcome> {
    let rs = RootSystem::of(ty)?;
    let n = rs.rank();
    let rest: Vec<usize> = (1..=n).filter(|j| !nodes.contains(j)).collect();
    let partition = Partition::new(n, vec![rest, nodes.to_vec()])?;
    let grad = gradation_from_partition(&rs, &partition);
    let table = StructureTable::new(&rs);
    let sampling = match samples {
        Some(samples) => Sampling::Random { samples, seed },
        None if n <= 4 => Sampling::Exhaustive,
        None => Sampling::Random { samples: 100_000, seed },
    };
    let sampled = matches!(sampling, Sampling::Random { .. });
    let check = check_grading(&rs, &table, &grad, sampling);
    let verified = check.ok();
    let report = GradeReport {
        ty: rs.ty.to_string(),
        nodes: nodes.to_vec(),
        kind: grad.kind,
        spectrum: grad.spectrum(),
        grade_dims: grad.grade_dims.clone(),
        pairs_checked: check.pairs,
        sampled,
        violations: check.violations,
        reversing: check.reversing,
        balanced: check.balanced,
    };
    emit(
        &report,
        format,
        |r| {
            let mut out = String::new();
            let _ = writeln!(out, "{} degree-one nodes ({})  kind {}", r.ty, join(&r.nodes), r.kind);
            let _ = writeln!(out, "spectrum {{{}}}", join(&r.spectrum));
            let dims: Vec<String> = r.grade_dims.iter().map(|(p, d)| format!("{p}:{d}")).collect();
            let _ = writeln!(out, "grade dims {}", dims.join(" "));
            let how = if r.sampled { "sampled" } else { "all" };
            let _ = writeln!(out, "closure {} on {} {how} pairs", if r.violations.is_empty() { "ok" } else { "FAILED" }, r.pairs_checked);
            for v in &r.violations {
                let _ = writeln!(out, "  {v}");
            }
            out
        },
        verified,
    )
}

pub fn tables(ids: &[u8], diff: bool, format: Format) -> Result<Outcome> {
    let ids: Vec<u8> = if ids.is_empty() { TABLE_IDS.to_vec() } else { ids.to_vec() };
    for id in &ids {
        golden::table_kind(*id)?;
    }
    let engine = Engine::build(&golden::pairs_for(&ids)?)?;
    let doc: TableDocument = golden::regenerate_tables(&engine, &ids)?;
    let lines = golden::diff(&doc);
    let verified = lines.is_empty();
    if diff {
        return emit(&lines, format, |l| l.iter().map(|s| format!("{s}\n")).collect(), verified);
    }
    emit(&doc, format, golden::render_text, verified)
}

/// Replay result of one witness line.
#[derive(Serialize)]
pub struct WitnessResult {
    pub witness: String,
    pub holds: bool,
}

pub fn witness(format: Format) -> Result<Outcome> {
    let mut contexts: HashMap<(String, usize), Context> = HashMap::new();
    let mut context = |alg: &str, node: usize| -> Result<Context> {
        if let Some(c) = contexts.get(&(alg.to_string(), node)) {
            return Ok(c.clone());
        }
        let c = Context::new(alg, node)?;
        contexts.insert((alg.to_string(), node), c.clone());
        Ok(c)
    };
    let mut results = Vec::new();
    for w in witness::witnesses()? {
        let w: Witness = w;
        let ctx = w.node.map(|n| context(&w.algebra, n)).transpose()?;
        results.push(WitnessResult { holds: witness::verify_witness(&w, ctx.as_ref())?, witness: w.text });
    }
    for s in witness::separations()? {
        let ctx = context(&s.algebra, s.node)?;
        results.push(WitnessResult { holds: witness::verify_separation(&s, &ctx)?, witness: s.text });
    }
    let verified = results.iter().all(|r| r.holds);
    emit(
        &results,
        format,
        |rs| rs.iter().map(|r| format!("{} {}\n", if r.holds { "ok  " } else { "FAIL" }, r.witness)).collect(),
        verified,
    )
}
