//! Golden classification tables: parsing, regeneration and comparison with the engine.
//!
//! The shipped file `data/tables.txt` holds every table with its labels exactly as
//! printed. Regeneration evaluates each printed row, locates its class, computes the
//! invariants independently and compares them with the printed labels after
//! canonicalization. Known printed-label discrepancies live in `data/errata.txt`; each
//! entry carries arguments that are checked mechanically, so an erratum is only
//! accepted when the corrected label equals the computed one and every argument holds.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, parse_bases, ClassRow, Context, Descriptor, PAIRS};
use crate::error::{LieError, Result};
use crate::glie::{lift_restricted_coweight, restricted_grading_filter, restricted_root_data, GradingVerdict, RestrictedRootData};
use crate::invol::{commutation_type, CartanMap, Commutation, Table1Type};
use crate::labels::Label;
use crate::linalg::identity;
use crate::rootsys::{eval, Coweight, SimpleType};

/// Version of the serialized [`TableDocument`] layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Identifiers of the shipped tables.
pub const TABLE_IDS: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

const TABLES_TXT: &str = include_str!("../../data/tables.txt");
const ERRATA_TXT: &str = include_str!("../../data/errata.txt");

/// How a table relates to the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableKind {
    /// Lattice maps preserving the simple system of `h`.
    Linear,
    /// Candidate involutions of one category; every class must be reached.
    Candidates,
    /// Final list of one category; rows and classes must correspond one to one.
    Final,
    /// Real forms with their restricted root systems.
    Restricted,
}

/// Kind of a table.
pub fn table_kind(id: u8) -> Result<TableKind> {
    match id {
        1 => Ok(TableKind::Linear),
        2..=4 => Ok(TableKind::Candidates),
        5 | 7 | 8 => Ok(TableKind::Final),
        6 => Ok(TableKind::Restricted),
        _ => Err(LieError::Unknown(format!("table {id}"))),
    }
}

/// The category `(dim z, commutation with σ)` covered by a table.
pub fn table_category(id: u8) -> Result<(usize, Commutation)> {
    use Commutation::{Anticommutes, Commutes};
    match id {
        1 | 2 | 5 => Ok((0, Anticommutes)),
        3 | 7 => Ok((0, Commutes)),
        4 | 8 => Ok((1, Commutes)),
        6 => Ok((1, Anticommutes)),
        _ => Err(LieError::Unknown(format!("table {id}"))),
    }
}

/// Short description of a table.
pub fn table_caption(id: u8) -> Result<&'static str> {
    Ok(match id {
        1 => "lattice maps preserving the simple system of h, dim z = 0",
        2 => "candidate involutions anticommuting with sigma, dim z = 0",
        3 => "candidate involutions commuting with sigma, dim z = 0",
        4 => "candidate involutions commuting with sigma, dim z = 1",
        5 => "involutions anticommuting with sigma, dim z = 0",
        6 => "real forms graded by a restricted simple root of mark three, dim z = 1",
        7 => "involutions commuting with sigma, dim z = 0",
        8 => "involutions commuting with sigma, dim z = 1",
        _ => return Err(LieError::Unknown(format!("table {id}"))),
    })
}

/// One data row of a golden table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    /// Line number in the source file.
    pub line: usize,
    pub fields: Vec<String>,
}

/// Rows of one pair `(g, σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenBlock {
    pub algebra: String,
    pub node: usize,
    /// The fixed algebra of `σ` as printed.
    pub h: Option<String>,
    pub rows: Vec<GoldenRow>,
}

/// A golden table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenTable {
    pub id: u8,
    pub blocks: Vec<GoldenBlock>,
}

fn field_count(id: u8) -> usize {
    match id {
        1 | 6 => 5,
        _ => 4,
    }
}

fn split_fields(line: &str) -> Vec<String> {
    line.split('|').map(|f| f.trim().to_string()).collect()
}

fn parse_pair(s: &str, line: usize) -> Result<(String, usize)> {
    let mut it = s.split_whitespace();
    match (it.next(), it.next().map(str::parse::<usize>), it.next()) {
        (Some(a), Some(Ok(n)), None) => Ok((a.to_string(), n)),
        _ => Err(LieError::Parse(format!("line {line}: expected `<algebra> <node>`, found `{s}`"))),
    }
}

/// Parses the golden table format.
pub fn parse_tables(text: &str) -> Result<Vec<GoldenTable>> {
    let mut tables: Vec<GoldenTable> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("table ") {
            let id: u8 = rest.trim().parse().map_err(|_| LieError::Parse(format!("line {line}: bad table id")))?;
            table_kind(id)?;
            if tables.iter().any(|t| t.id == id) {
                return Err(LieError::Parse(format!("line {line}: table {id} appears twice")));
            }
            tables.push(GoldenTable { id, blocks: Vec::new() });
            continue;
        }
        let table = tables.last_mut().ok_or_else(|| LieError::Parse(format!("line {line}: data before `table`")))?;
        if let Some(rest) = content.strip_prefix("block ") {
            let mut parts = rest.splitn(2, '|');
            let (algebra, node) = parse_pair(parts.next().unwrap_or(""), line)?;
            let h = parts.next().map(|s| s.trim().to_string());
            table.blocks.push(GoldenBlock { algebra, node, h, rows: Vec::new() });
            continue;
        }
        let fields = split_fields(content);
        if fields.len() != field_count(table.id) {
            return Err(LieError::Parse(format!(
                "line {line}: table {} rows have {} fields, found {}",
                table.id,
                field_count(table.id),
                fields.len()
            )));
        }
        let row = GoldenRow { line, fields };
        if table.id == 1 {
            let node: usize =
                row.fields[2].parse().map_err(|_| LieError::Parse(format!("line {line}: bad node")))?;
            let algebra = row.fields[1].clone();
            match table.blocks.iter_mut().find(|b| b.algebra == algebra && b.node == node) {
                Some(b) => b.rows.push(row),
                None => table.blocks.push(GoldenBlock { algebra, node, h: None, rows: vec![row] }),
            }
        } else {
            table
                .blocks
                .last_mut()
                .ok_or_else(|| LieError::Parse(format!("line {line}: row before `block`")))?
                .rows
                .push(row);
        }
    }
    Ok(tables)
}

/// The shipped golden tables.
pub fn golden_tables() -> Result<Vec<GoldenTable>> {
    parse_tables(TABLES_TXT)
}

/// A mechanically checkable reason for a printed label to be wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Argument {
    /// The printed label has the wrong dimension.
    Dimension,
    /// The same class is printed with the computed label in another table.
    CrossTable(u8),
    /// The printed label is not a well-formed algebra.
    Unparseable,
    /// The printed name is not in the shipped data while the corrected one is.
    NotInData,
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::Dimension => write!(f, "dimension"),
            Argument::CrossTable(t) => write!(f, "cross-table {t}"),
            Argument::Unparseable => write!(f, "unparseable"),
            Argument::NotInData => write!(f, "not-in-data"),
        }
    }
}

impl std::str::FromStr for Argument {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "dimension" => Ok(Argument::Dimension),
            "unparseable" => Ok(Argument::Unparseable),
            "not-in-data" => Ok(Argument::NotInData),
            _ => s
                .strip_prefix("cross-table ")
                .and_then(|t| t.trim().parse().ok())
                .map(Argument::CrossTable)
                .ok_or_else(|| LieError::Parse(format!("unknown erratum argument `{s}`"))),
        }
    }
}

/// A documented printed-label discrepancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub table: u8,
    pub algebra: String,
    pub node: usize,
    /// Base column of the row, or the printed real form in Table 6.
    pub base: String,
    /// Twist column of the row, `-` in Table 6.
    pub twist: String,
    /// Column name: `k`, `hk` or `form`.
    pub field: String,
    pub printed: String,
    pub corrected: String,
    pub arguments: Vec<Argument>,
}

impl fmt::Display for Erratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "table {} | {} {} | {} | {} | {}: printed {}, corrected {}",
            self.table, self.algebra, self.node, self.base, self.twist, self.field, self.printed, self.corrected
        )
    }
}

/// Parses the errata format.
pub fn parse_errata(text: &str) -> Result<Vec<Erratum>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let f = split_fields(content);
        if f.len() != 8 {
            return Err(LieError::Parse(format!("line {line}: errata rows have 8 fields, found {}", f.len())));
        }
        let table: u8 = f[0].parse().map_err(|_| LieError::Parse(format!("line {line}: bad table id")))?;
        table_kind(table)?;
        let (algebra, node) = parse_pair(&f[1], line)?;
        let arguments = f[7].split(';').map(str::parse).collect::<Result<Vec<Argument>>>()?;
        out.push(Erratum {
            table,
            algebra,
            node,
            base: f[2].clone(),
            twist: f[3].clone(),
            field: f[4].clone(),
            printed: f[5].clone(),
            corrected: f[6].clone(),
            arguments,
        });
    }
    Ok(out)
}

/// The shipped errata.
pub fn errata() -> Result<Vec<Erratum>> {
    parse_errata(ERRATA_TXT)
}

/// Comparison outcome of one column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Match,
    /// A documented discrepancy whose arguments were verified.
    Erratum { arguments: Vec<Argument> },
    Mismatch,
}

/// One compared column of a row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub computed: String,
    pub printed: Option<String>,
    pub verdict: Verdict,
}

impl Column {
    fn new(name: &str, computed: impl ToString, printed: Option<String>, ok: bool) -> Self {
        Column {
            name: name.into(),
            computed: computed.to_string(),
            printed,
            verdict: if ok { Verdict::Match } else { Verdict::Mismatch },
        }
    }
}

/// Outcome of a whole row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    Match,
    /// Matches once documented discrepancies are applied.
    Erratum,
    Mismatch,
    /// A printed row that could not be evaluated.
    Missing,
    /// A computed class that no printed row reaches.
    Extra,
    /// A printed row whose class the engine could not decide.
    Unresolved,
}

/// A regenerated row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRecord {
    pub name: String,
    /// Index of the class among the engine classes of the pair.
    pub class: Option<usize>,
    pub columns: Vec<Column>,
    pub status: RowStatus,
    pub note: Option<String>,
}

impl RowRecord {
    fn from_columns(name: String, class: Option<usize>, columns: Vec<Column>) -> Self {
        let status = if columns.iter().any(|c| c.verdict == Verdict::Mismatch) {
            RowStatus::Mismatch
        } else if columns.iter().any(|c| matches!(c.verdict, Verdict::Erratum { .. })) {
            RowStatus::Erratum
        } else {
            RowStatus::Match
        };
        RowRecord { name, class, columns, status, note: None }
    }

    fn missing(name: String, note: String) -> Self {
        RowRecord { name, class: None, columns: Vec::new(), status: RowStatus::Missing, note: Some(note) }
    }
}

/// Header and rows of one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub algebra: String,
    pub node: usize,
    pub sigma: String,
    pub h: Column,
    pub dim_z: Column,
    pub rows: Vec<RowRecord>,
}

/// A regenerated table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub id: u8,
    pub caption: String,
    pub kind: TableKind,
    pub blocks: Vec<BlockRecord>,
}

/// Engine version and conventions behind a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub engine: String,
    pub numbering: String,
    pub sign_convention: String,
    pub labels: String,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            engine: format!("liesym {}", env!("CARGO_PKG_VERSION")),
            numbering: "Bourbaki simple roots; alpha_0 = -delta; K_j dual to alpha_j".into(),
            sign_convention: "extraspecial pairs ordered by height, N(alpha, beta) > 0 on extraspecial pairs".into(),
            labels: "canonical: B1 = C1 = A1, C2 = B2, D1 = R, D2 = A1+A1, D3 = A3".into(),
        }
    }
}

/// Regenerated tables with their comparison against the golden files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub schema_version: u32,
    pub tables: Vec<TableRecord>,
    /// Errata for the requested tables that no row used.
    pub stale_errata: Vec<String>,
    pub provenance: Provenance,
}

/// Contexts and classifications of pairs, built once.
pub struct Engine {
    pairs: Vec<PairData>,
}

/// Context and classes of one pair.
pub struct PairData {
    pub ctx: Context,
    pub rows: Vec<ClassRow>,
}

impl Engine {
    /// Builds the given pairs in parallel.
    pub fn build(pairs: &[(String, usize)]) -> Result<Self> {
        let pairs = pairs
            .par_iter()
            .map(|(a, n)| {
                let ctx = Context::new(a, *n)?;
                let rows = classify(&ctx)?;
                Ok(PairData { ctx, rows })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Engine { pairs })
    }

    /// Builds every pair of the classification.
    pub fn all() -> Result<Self> {
        Self::build(&PAIRS.iter().map(|(a, n)| (a.to_string(), *n)).collect::<Vec<_>>())
    }

    /// Data of a pair.
    pub fn get(&self, algebra: &str, node: usize) -> Result<&PairData> {
        self.pairs
            .iter()
            .find(|p| p.ctx.algebra == algebra && p.ctx.node == node)
            .ok_or_else(|| LieError::OutOfScope(format!("pair ({algebra}, K{node})")))
    }
}

/// An evaluated class row of a golden table.
#[derive(Clone, Debug)]
struct Evaluated {
    descriptor: Descriptor,
    commutation: Commutation,
    k: Label,
    hk: Label,
    class: Option<usize>,
}

fn evaluate_row(pair: &PairData, base: &str, twist: &str) -> Result<Evaluated> {
    let ctx = &pair.ctx;
    let descriptor = Descriptor::parse(ctx.rs.rank(), base, twist)?;
    let inv = ctx.evaluate(&descriptor)?;
    let commutation = commutation_type(&inv.aut.cmap, &ctx.sigma)?;
    let (k, hk) = ctx.invariants(&inv)?;
    let class = ctx.row_of(&pair.rows, &inv)?;
    Ok(Evaluated { descriptor, commutation, k: k.label().parse()?, hk: hk.label().parse()?, class })
}

/// Printed labels of a class across tables.
#[derive(Default)]
struct CrossIndex {
    entries: HashMap<(String, usize, usize), Vec<(u8, String, String)>>,
}

impl CrossIndex {
    fn insert(&mut self, algebra: &str, node: usize, class: usize, table: u8, k: &str, hk: &str) {
        self.entries.entry((algebra.to_string(), node, class)).or_default().push((table, k.into(), hk.into()));
    }

    fn printed(&self, algebra: &str, node: usize, class: usize, table: u8, field: &str) -> Vec<&str> {
        self.entries
            .get(&(algebra.to_string(), node, class))
            .map(|v| {
                v.iter()
                    .filter(|(t, _, _)| *t == table)
                    .map(|(_, k, hk)| if field == "k" { k.as_str() } else { hk.as_str() })
                    .collect()
            })
            .unwrap_or_default()
    }
}

struct Regenerator<'a> {
    engine: &'a Engine,
    tables: Vec<GoldenTable>,
    errata: Vec<Erratum>,
    evaluated: HashMap<(u8, usize), Result<Evaluated>>,
    cross: CrossIndex,
    used: BTreeSet<usize>,
}

/// Identifies a row for erratum lookup.
struct RowKey<'a> {
    table: u8,
    algebra: &'a str,
    node: usize,
    base: &'a str,
    twist: &'a str,
    rank: usize,
}

impl RowKey<'_> {
    fn matches(&self, e: &Erratum) -> bool {
        if e.table != self.table || e.algebra != self.algebra || e.node != self.node {
            return false;
        }
        if self.table == 6 {
            return e.base == self.base;
        }
        let same_base = matches!((parse_bases(&e.base), parse_bases(self.base)), (Ok(a), Ok(b)) if a == b);
        let same_twist = matches!(
            (Coweight::parse(self.rank, &e.twist), Coweight::parse(self.rank, self.twist)),
            (Ok(a), Ok(b)) if a == b
        );
        same_base && same_twist
    }
}

impl<'a> Regenerator<'a> {
    fn new(engine: &'a Engine) -> Result<Self> {
        let tables = golden_tables()?;
        let errata = errata()?;
        let mut evaluated = HashMap::new();
        let mut cross = CrossIndex::default();
        for t in &tables {
            if !matches!(table_kind(t.id)?, TableKind::Candidates | TableKind::Final) {
                continue;
            }
            for b in &t.blocks {
                let Ok(pair) = engine.get(&b.algebra, b.node) else { continue };
                for r in &b.rows {
                    let ev = evaluate_row(pair, &r.fields[0], &r.fields[1]);
                    if let Ok(Evaluated { class: Some(c), .. }) = &ev {
                        cross.insert(&b.algebra, b.node, *c, t.id, &r.fields[2], &r.fields[3]);
                    }
                    evaluated.insert((t.id, r.line), ev);
                }
            }
        }
        let mut regen = Regenerator { engine, tables, errata, evaluated, cross, used: BTreeSet::new() };
        regen.index_table6()?;
        Ok(regen)
    }

    /// Adds the Table 6 rows to the cross index.
    fn index_table6(&mut self) -> Result<()> {
        let Some(t) = self.tables.iter().find(|t| t.id == 6) else { return Ok(()) };
        let mut found = Vec::new();
        for b in &t.blocks {
            let Ok(pair) = self.engine.get(&b.algebra, b.node) else { continue };
            for r in &b.rows {
                let Some(data) = self.real_form_of(b, r) else { continue };
                if let Some(c) = table6_class(pair, &data, &r.fields[4]) {
                    found.push((b.algebra.clone(), b.node, c, r.fields[3].clone(), r.fields[4].clone()));
                }
            }
        }
        for (a, n, c, k, hk) in found {
            self.cross.insert(&a, n, c, 6, &k, &hk);
        }
        Ok(())
    }

    /// Restricted-root data of a printed real form, directly or through a verified erratum.
    fn real_form_of(&self, b: &GoldenBlock, r: &GoldenRow) -> Option<RestrictedRootData> {
        let data = restricted_root_data().ok()?;
        let printed = &r.fields[2];
        if let Some(d) = data.iter().find(|d| d.label == *printed) {
            return Some(d.clone());
        }
        let e = self.errata.iter().find(|e| {
            e.table == 6 && e.algebra == b.algebra && e.node == b.node && e.field == "form" && e.printed == *printed
        })?;
        if e.arguments != [Argument::NotInData] {
            return None;
        }
        data.iter().find(|d| d.label == e.corrected).cloned()
    }

    fn find_erratum(&self, key: &RowKey, field: &str, printed: &str) -> Option<usize> {
        self.errata.iter().position(|e| key.matches(e) && e.field == field && e.printed == printed)
    }

    /// Compares a printed label with a computed one, consulting the errata.
    fn label_column(
        &mut self,
        key: &RowKey,
        field: &str,
        printed: &str,
        computed: &Label,
        class: Option<usize>,
    ) -> Column {
        let parsed: Option<Label> = printed.parse().ok();
        let mut col = Column::new(field, computed, Some(printed.to_string()), parsed.as_ref() == Some(computed));
        if col.verdict == Verdict::Match {
            return col;
        }
        let Some(ei) = self.find_erratum(key, field, printed) else { return col };
        let e = &self.errata[ei];
        let corrected_ok = e.corrected.parse::<Label>().ok().as_ref() == Some(computed);
        let args_ok = e.arguments.iter().all(|a| match a {
            Argument::Dimension => parsed.as_ref().is_some_and(|p| p.dim() != computed.dim()),
            Argument::Unparseable => parsed.is_none(),
            Argument::CrossTable(t) => class.is_some_and(|c| {
                self.cross
                    .printed(key.algebra, key.node, c, *t, field)
                    .iter()
                    .any(|s| s.parse::<Label>().ok().as_ref() == Some(computed))
            }),
            Argument::NotInData => false,
        });
        if corrected_ok && args_ok && !e.arguments.is_empty() {
            col.verdict = Verdict::Erratum { arguments: e.arguments.clone() };
            self.used.insert(ei);
        }
        col
    }

    fn block_header(&self, id: u8, b: &GoldenBlock, pair: &PairData) -> Result<(Column, Column)> {
        let ctx = &pair.ctx;
        let h = match &b.h {
            Some(p) => Column::new("h", &ctx.h, Some(p.clone()), p.parse::<Label>().ok().as_ref() == Some(&ctx.h)),
            None => Column::new("h", &ctx.h, None, true),
        };
        let (dz, _) = table_category(id)?;
        let dim_z = Column::new("dim z", ctx.dim_z, Some(dz.to_string()), ctx.dim_z == dz);
        Ok((h, dim_z))
    }

    fn table(&mut self, id: u8) -> Result<TableRecord> {
        let kind = table_kind(id)?;
        let golden = self
            .tables
            .iter()
            .find(|t| t.id == id)
            .cloned()
            .ok_or_else(|| LieError::Unknown(format!("table {id} is not in the golden file")))?;
        let mut blocks = Vec::new();
        for b in &golden.blocks {
            let pair = self.engine.get(&b.algebra, b.node)?;
            let (h, dim_z) = self.block_header(id, b, pair)?;
            let rows = match kind {
                TableKind::Linear => self.linear_rows(b, pair)?,
                TableKind::Candidates | TableKind::Final => self.class_rows(id, kind, b, pair)?,
                TableKind::Restricted => self.restricted_rows(b, pair)?,
            };
            blocks.push(BlockRecord {
                algebra: b.algebra.clone(),
                node: b.node,
                sigma: format!("tau[1/2*K{}]", b.node),
                h,
                dim_z,
                rows,
            });
        }
        Ok(TableRecord { id, caption: table_caption(id)?.into(), kind, blocks })
    }

    fn linear_rows(&mut self, b: &GoldenBlock, pair: &PairData) -> Result<Vec<RowRecord>> {
        let ctx = &pair.ctx;
        let rs = &ctx.rs;
        let nodes = rs.extended_base();
        let mut out = Vec::new();
        let mut hits = vec![0usize; ctx.linear.len()];
        for r in &b.rows {
            let name = r.fields[0].clone();
            let images = match parse_images(rs, &r.fields[3]) {
                Ok(v) => v,
                Err(e) => {
                    out.push(RowRecord::missing(name, e.to_string()));
                    continue;
                }
            };
            let all_roots = images.iter().all(|(_, v)| rs.is_root(v));
            let cmap = match CartanMap::from_node_images(rs, &images) {
                Ok(m) => m,
                Err(e) => {
                    out.push(RowRecord::missing(name, e.to_string()));
                    continue;
                }
            };
            let preserves = nodes
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != ctx.node)
                .all(|(_, v)| nodes.iter().enumerate().any(|(j, w)| j != ctx.node && cmap.apply(v) == *w));
            let engine_map = Table1Type::ALL
                .iter()
                .find(|t| t.to_string() == name)
                .map(|t| t.cartan_map(rs))
                .transpose()?;
            let commutation = commutation_type(&cmap, &ctx.sigma)?;
            let class = ctx.linear_class_of(&cmap.matrix).map(|(i, _)| i);
            if let Some(i) = class {
                hits[i] += 1;
            }
            let involution = cmap.is_involution() && preserves && all_roots;
            let mut columns = vec![
                Column::new(
                    "images",
                    render_images(rs, &cmap),
                    Some(r.fields[3].clone()),
                    engine_map.as_ref().is_some_and(|m| m.matrix == cmap.matrix),
                ),
                Column::new("delta-preserving involution", involution, None, involution),
                Column::new("commutation", commutation, Some(r.fields[4].clone()), commutation.to_string() == r.fields[4]),
            ];
            let nontrivial = cmap.matrix != identity(rs.rank());
            columns.push(Column::new(
                "linear class",
                class.map_or("none".into(), |i| format!("theta{i}")),
                None,
                class.is_some() && nontrivial,
            ));
            out.push(RowRecord::from_columns(name, class, columns));
        }
        for (i, lc) in ctx.linear.iter().enumerate() {
            let nontrivial = lc.base.aut.cmap.matrix != identity(rs.rank());
            if nontrivial && hits[i] != 1 {
                let status = if hits[i] == 0 { RowStatus::Extra } else { RowStatus::Mismatch };
                out.push(RowRecord {
                    name: format!("theta{i}"),
                    class: Some(i),
                    columns: vec![Column::new("images", render_images(rs, &lc.base.aut.cmap), None, false)],
                    status,
                    note: Some(format!("linear class reached by {} printed rows", hits[i])),
                });
            }
        }
        Ok(out)
    }

    fn class_rows(&mut self, id: u8, kind: TableKind, b: &GoldenBlock, pair: &PairData) -> Result<Vec<RowRecord>> {
        let ctx = &pair.ctx;
        let (dz, comm) = table_category(id)?;
        let mut out = Vec::new();
        let mut hits = vec![0usize; pair.rows.len()];
        for r in &b.rows {
            let fallback = format!("{} | {}", r.fields[0], r.fields[1]);
            let ev = match self.evaluated.get(&(id, r.line)) {
                Some(Ok(ev)) => ev.clone(),
                Some(Err(e)) => {
                    out.push(RowRecord::missing(fallback, e.to_string()));
                    continue;
                }
                None => {
                    out.push(RowRecord::missing(fallback, "row not evaluated".into()));
                    continue;
                }
            };
            let key = RowKey {
                table: id,
                algebra: &b.algebra,
                node: b.node,
                base: &r.fields[0],
                twist: &r.fields[1],
                rank: ctx.rs.rank(),
            };
            let mut columns = vec![
                self.label_column(&key, "k", &r.fields[2], &ev.k, ev.class),
                self.label_column(&key, "hk", &r.fields[3], &ev.hk, ev.class),
                Column::new("commutation", ev.commutation, Some(comm.to_string()), ev.commutation == comm),
            ];
            if let Some(c) = ev.class {
                hits[c] += 1;
                let row = &pair.rows[c];
                let agrees = row.k == ev.k && row.hk == ev.hk && row.dim_z == dz;
                columns.push(Column::new("class", format!("class {c}: {}", row.descriptor), None, agrees));
            } else {
                columns.push(Column::new("class", "none", None, false));
            }
            let mut rec = RowRecord::from_columns(ev.descriptor.to_string(), ev.class, columns);
            if ev.class.is_some_and(|c| pair.rows[c].unresolved) {
                rec.status = RowStatus::Unresolved;
            }
            if kind == TableKind::Final && ev.class.is_some_and(|c| hits[c] > 1) {
                rec.status = RowStatus::Mismatch;
                rec.note = Some("a previous row already gives this class".into());
            }
            out.push(rec);
        }
        for (c, row) in pair.rows.iter().enumerate() {
            if row.dim_z == dz && row.commutation == comm && hits[c] == 0 {
                out.push(extra_row(c, row));
            }
        }
        Ok(out)
    }

    fn restricted_rows(&mut self, b: &GoldenBlock, pair: &PairData) -> Result<Vec<RowRecord>> {
        let ctx = &pair.ctx;
        let rs = &ctx.rs;
        let (dz, comm) = table_category(6)?;
        let mut out = Vec::new();
        let mut hits = vec![0usize; pair.rows.len()];
        for r in &b.rows {
            let name = r.fields[2].clone();
            let Some(data) = self.real_form_of(b, r) else {
                out.push(RowRecord::missing(name, "real form is not in the restricted-root data".into()));
                continue;
            };
            let key = RowKey { table: 6, algebra: &b.algebra, node: b.node, base: &name, twist: "-", rank: rs.rank() };
            let mut columns = Vec::new();
            let mut form = Column::new("form", &data.label, Some(name.clone()), data.label == name);
            if let Some(ei) = self.find_erratum(&key, "form", &name) {
                if data.label == self.errata[ei].corrected {
                    form.verdict = Verdict::Erratum { arguments: self.errata[ei].arguments.clone() };
                    self.used.insert(ei);
                }
            }
            columns.push(form);
            let restricted_ok = r.fields[0].parse::<SimpleType>().ok() == Some(data.restricted_type);
            columns.push(Column::new("restricted type", data.restricted_type, Some(r.fields[0].clone()), restricted_ok));
            let h = Coweight::fundamental(rs.rank(), b.node);
            let verdict = restricted_grading_filter(rs, &h, &data)?;
            let grading = match &verdict {
                GradingVerdict::Accepted { p } => render_alpha_sum(&lift_restricted_coweight(&data, *p)?),
                v => format!("{v:?}"),
            };
            let grading_ok = grading == r.fields[1] && grading == format!("a{}", b.node);
            columns.push(Column::new("grading node", grading, Some(r.fields[1].clone()), grading_ok));
            let class = table6_class(pair, &data, &r.fields[4]);
            match class {
                Some(c) => {
                    hits[c] += 1;
                    let row = &pair.rows[c];
                    let in_category = row.dim_z == dz && row.commutation == comm && row.k == data.k;
                    columns.push(self.label_column(&key, "k", &r.fields[3], &row.k, Some(c)));
                    columns.push(self.label_column(&key, "hk", &r.fields[4], &row.hk, Some(c)));
                    columns.push(Column::new("class", format!("class {c}: {}", row.descriptor), None, in_category));
                    if data.is_split() {
                        let count = rs.roots[..rs.n_pos]
                            .iter()
                            .filter(|a| eval(a, &h).is_ok_and(|x| x.is_integer() && x.to_integer().rem_euclid(4) == 0))
                            .count();
                        columns.push(Column::new(
                            "dim hk by root count",
                            count,
                            Some(row.hk.dim().to_string()),
                            count == row.hk.dim(),
                        ));
                    }
                }
                None => columns.push(Column::new("class", "none", Some(data.k.to_string()), false)),
            }
            let mut rec = RowRecord::from_columns(name, class, columns);
            if class.is_some_and(|c| hits[c] > 1) {
                rec.status = RowStatus::Mismatch;
                rec.note = Some("a previous row already gives this class".into());
            }
            out.push(rec);
        }
        Ok(out)
    }

    fn stale(&self, ids: &[u8]) -> Vec<String> {
        self.errata
            .iter()
            .enumerate()
            .filter(|(i, e)| ids.contains(&e.table) && !self.used.contains(i))
            .map(|(_, e)| e.to_string())
            .collect()
    }
}

/// The class of a Table 6 row: the unique class of the category with the right `k`,
/// disambiguated by the printed `h ∩ k` when several classes share `k`.
fn table6_class(pair: &PairData, data: &RestrictedRootData, printed_hk: &str) -> Option<usize> {
    let (dz, comm) = table_category(6).ok()?;
    let cands: Vec<usize> = pair
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.dim_z == dz && r.commutation == comm && r.k == data.k)
        .map(|(i, _)| i)
        .collect();
    match cands.as_slice() {
        [c] => Some(*c),
        _ => {
            let hk: Label = printed_hk.parse().ok()?;
            let by_hk: Vec<usize> = cands.into_iter().filter(|&c| pair.rows[c].hk == hk).collect();
            (by_hk.len() == 1).then(|| by_hk[0])
        }
    }
}

fn extra_row(c: usize, row: &ClassRow) -> RowRecord {
    RowRecord {
        name: row.descriptor.to_string(),
        class: Some(c),
        columns: vec![Column::new("k", &row.k, None, false), Column::new("hk", &row.hk, None, false)],
        status: RowStatus::Extra,
        note: Some("computed class not reached by any printed row".into()),
    }
}

/// Parses Table 1 images `aJ>aK` or `aJ>c1,..,cn` into node images.
fn parse_images(rs: &crate::rootsys::RootSystem, s: &str) -> Result<Vec<(usize, Vec<i64>)>> {
    let rank = rs.rank();
    let nodes = rs.extended_base();
    let node = |t: &str| -> Result<usize> {
        t.strip_prefix('a')
            .and_then(|n| n.parse().ok())
            .filter(|&n| n <= rank)
            .ok_or_else(|| LieError::Parse(format!("bad node `{t}`")))
    };
    s.split_whitespace()
        .map(|tok| {
            let (src, dst) = tok.split_once('>').ok_or_else(|| LieError::Parse(format!("bad image `{tok}`")))?;
            let j = node(src)?;
            if dst.starts_with('a') {
                return Ok((j, nodes[node(dst)?].clone()));
            }
            let v = dst
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| LieError::Parse(format!("bad root `{dst}`"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != rank {
                return Err(LieError::RankMismatch { expected: rank, found: v.len() });
            }
            Ok((j, v))
        })
        .collect()
}

fn render_images(rs: &crate::rootsys::RootSystem, cmap: &CartanMap) -> String {
    let nodes = rs.extended_base();
    (1..=rs.rank())
        .map(|j| {
            let img = cmap.apply(&nodes[j]);
            match nodes.iter().position(|v| *v == img) {
                Some(k) => format!("a{j}>a{k}"),
                None => format!("a{j}>{}", img.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_alpha_sum(h: &Coweight) -> String {
    h.0.iter()
        .enumerate()
        .filter(|(_, x)| **x != num_traits::Zero::zero())
        .map(|(j, x)| if x.is_integer() && x.to_integer() == 1 { format!("a{}", j + 1) } else { format!("{x}*a{}", j + 1) })
        .collect::<Vec<_>>()
        .join("+")
}

/// Regenerates the requested tables and compares them with the golden files.
pub fn regenerate_tables(engine: &Engine, ids: &[u8]) -> Result<TableDocument> {
    for id in ids {
        table_kind(*id)?;
    }
    let mut regen = Regenerator::new(engine)?;
    let tables = ids.iter().map(|id| regen.table(*id)).collect::<Result<Vec<_>>>()?;
    Ok(TableDocument {
        schema_version: SCHEMA_VERSION,
        tables,
        stale_errata: regen.stale(ids),
        provenance: Provenance::default(),
    })
}

/// Pairs needed by the requested tables.
pub fn pairs_for(ids: &[u8]) -> Result<Vec<(String, usize)>> {
    let mut out: Vec<(String, usize)> = Vec::new();
    for t in golden_tables()? {
        for b in &t.blocks {
            let p = (b.algebra.clone(), b.node);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    for id in ids {
        table_kind(*id)?;
    }
    Ok(out)
}

fn describe(col: &Column) -> String {
    match &col.printed {
        Some(p) => format!("{}: computed {}, printed {}", col.name, col.computed, p),
        None => format!("{}: computed {}", col.name, col.computed),
    }
}

/// Lines describing every failed comparison; empty when the tables are reproduced.
pub fn diff(doc: &TableDocument) -> Vec<String> {
    let mut out = Vec::new();
    for t in &doc.tables {
        for b in &t.blocks {
            let head = format!("table {} | {} {}", t.id, b.algebra, b.node);
            for col in [&b.h, &b.dim_z] {
                if col.verdict == Verdict::Mismatch {
                    out.push(format!("{head} | header | {}", describe(col)));
                }
            }
            for r in &b.rows {
                match r.status {
                    RowStatus::Match | RowStatus::Erratum => {}
                    status => {
                        let mut parts: Vec<String> =
                            r.columns.iter().filter(|c| c.verdict == Verdict::Mismatch).map(describe).collect();
                        if let Some(n) = &r.note {
                            parts.push(n.clone());
                        }
                        out.push(format!("{head} | {} | {status:?} | {}", r.name, parts.join("; ")));
                    }
                }
            }
        }
    }
    out.extend(doc.stale_errata.iter().map(|e| format!("unused erratum | {e}")));
    out
}

/// Lines describing the documented discrepancies that were applied.
pub fn flagged(doc: &TableDocument) -> Vec<String> {
    let mut out = Vec::new();
    for t in &doc.tables {
        for b in &t.blocks {
            for r in &b.rows {
                for c in &r.columns {
                    if let Verdict::Erratum { arguments } = &c.verdict {
                        let args: Vec<String> = arguments.iter().map(|a| a.to_string()).collect();
                        out.push(format!(
                            "table {} | {} {} | {} | {} printed {}, computed {} ({})",
                            t.id,
                            b.algebra,
                            b.node,
                            r.name,
                            c.name,
                            c.printed.as_deref().unwrap_or("-"),
                            c.computed,
                            args.join("; ")
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Plain-text rendering of a document.
pub fn render_text(doc: &TableDocument) -> String {
    let mut s = String::new();
    for t in &doc.tables {
        s.push_str(&format!("Table {}: {}\n", t.id, t.caption));
        for b in &t.blocks {
            s.push_str(&format!("  {} sigma = {}  h = {}  dim z = {}\n", b.algebra, b.sigma, b.h.computed, b.dim_z.computed));
            for r in &b.rows {
                let cols: Vec<String> = r
                    .columns
                    .iter()
                    .filter(|c| c.name == "k" || c.name == "hk" || c.name == "images" || c.name == "form")
                    .map(|c| format!("{} = {}", c.name, c.computed))
                    .collect();
                s.push_str(&format!("    {:<40} {:<40} {:?}\n", r.name, cols.join("  "), r.status));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_file_parses() {
        let tables = golden_tables().unwrap();
        assert_eq!(tables.iter().map(|t| t.id).collect::<Vec<_>>(), TABLE_IDS.to_vec());
        let t1 = &tables[0];
        assert_eq!(t1.blocks.iter().map(|b| b.rows.len()).sum::<usize>(), 6);
        for t in &tables[1..] {
            for b in &t.blocks {
                assert!(b.h.is_some(), "table {} block {} {}", t.id, b.algebra, b.node);
                assert!(!b.rows.is_empty());
            }
        }
    }

    #[test]
    fn parser_rejects_malformed_input() {
        assert!(parse_tables("table 99\n").is_err());
        assert!(parse_tables("- | K1 | A1 | R\n").is_err());
        assert!(parse_tables("table 7\nblock E8 3\n- | K1 | A1\n").is_err());
        assert!(parse_tables("table 7\n- | K1 | A1 | R\n").is_err());
        assert!(parse_errata("3 | F4 3 | - | K1 | k | B3 | C3 | guess\n").is_err());
    }

    #[test]
    fn errata_parse() {
        let e = errata().unwrap();
        assert!(!e.is_empty());
        assert!(e.iter().all(|e| !e.arguments.is_empty()));
    }

    #[test]
    fn images_parse() {
        let rs = crate::rootsys::RootSystem::of("F4").unwrap();
        let v = parse_images(&rs, "a1>a1 a2>a0 a3>1,2,3,1").unwrap();
        assert_eq!(v[0], (1, vec![1, 0, 0, 0]));
        assert_eq!(v[1], (2, vec![-2, -3, -4, -2]));
        assert_eq!(v[2], (3, vec![1, 2, 3, 1]));
        assert!(parse_images(&rs, "a1>a9").is_err());
        assert!(parse_images(&rs, "a3>1,2").is_err());
    }

    #[test]
    fn argument_round_trip() {
        for a in [Argument::Dimension, Argument::CrossTable(7), Argument::Unparseable, Argument::NotInData] {
            assert_eq!(a.to_string().parse::<Argument>().unwrap(), a);
        }
    }
}
