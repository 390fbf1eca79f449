//! Acceptance runner: one pass/fail line per criterion, every check exact.
//!
//! Criteria that fail are reported as such. The process exits with a failure
//! status unless every failing criterion is listed in [`DOCUMENTED_FAILURES`],
//! whose entries are claims refuted by exhaustive computation.

use std::collections::HashSet;
use std::time::Instant;

use liesym::chevalley::{verify_jacobi, Sampling, StructureTable};
use liesym::classify::golden::{self, Engine, RowStatus, TableDocument, Verdict, TABLE_IDS};
use liesym::classify::witness::{self, Claim, Letter, WitnessKind};
use liesym::classify::{Context, Descriptor, Separation};
use liesym::glie::{check_grading, gradation_from_partition, Partition};
use liesym::invol::{commutation_type, Commutation, NamedMap, Table1Type};
use liesym::labels::Label;
use liesym::linalg::{qf, IMat};
use liesym::rootsys::{Coweight, RootSystem};
use liesym::torsion::{is_symmetric_or_3symmetric, SymmetryKind, TorsionAut};
use liesym::weyl::{congruent_mod2, coweight_action, enumerate_group, map_root};

/// Criteria whose stated claim is refuted by exhaustive computation.
const DOCUMENTED_FAILURES: &[u8] = &[8];

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cw(n: usize, s: &str) -> Coweight {
    Coweight::parse(n, s).expect("coweight")
}

/// Cartan matrices `A[i][j] = <α_i, α_j^∨>` written out by hand, Bourbaki numbering.
fn oracle_cartan(ty: &str) -> IMat {
    let e = |n: usize| -> IMat {
        let mut a = vec![vec![0i64; n]; n];
        let mut link = |i: usize, j: usize| {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        };
        link(1, 3);
        link(2, 4);
        link(3, 4);
        for i in 4..n {
            link(i, i + 1);
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        a
    };
    match ty {
        "E6" => e(6),
        "E7" => e(7),
        "E8" => e(8),
        "F4" => vec![vec![2, -1, 0, 0], vec![-1, 2, -2, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]],
        "G2" => vec![vec![2, -1], vec![-3, 2]],
        _ => unreachable!(),
    }
}

/// All roots by closing the simple roots under simple reflections.
fn oracle_roots(a: &IMat) -> HashSet<Vec<i64>> {
    let n = a.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut stack: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    while let Some(b) = stack.pop() {
        if !seen.insert(b.clone()) {
            continue;
        }
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| b[j] * a[j][i]).sum();
            let mut r = b.clone();
            r[i] -= pairing;
            if !seen.contains(&r) {
                stack.push(r);
            }
        }
    }
    seen
}

fn criterion1() -> Check {
    let expected = [("E8", 240), ("E7", 126), ("E6", 72), ("F4", 48), ("G2", 12)];
    for (ty, count) in expected {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let a = oracle_cartan(ty);
        ensure(rs.cartan == a, || format!("{ty}: Cartan matrix differs from the hand-written one"))?;
        let oracle = oracle_roots(&a);
        let engine: HashSet<Vec<i64>> = rs.roots.iter().cloned().collect();
        ensure(rs.roots.len() == count && oracle.len() == count, || {
            format!("{ty}: engine {} roots, closure {} roots, expected {count}", rs.roots.len(), oracle.len())
        })?;
        ensure(oracle == engine, || format!("{ty}: root sets differ"))?;
    }
    let e8 = RootSystem::of("E8").map_err(|e| e.to_string())?;
    ensure(e8.marks() == vec![2, 3, 4, 6, 5, 4, 3, 2], || format!("E8 marks {:?}", e8.marks()))?;
    Ok("240/126/72/48/12 roots agree with reflection closure; E8 marks (2,3,4,6,5,4,3,2)".into())
}

fn criterion2(doc: &TableDocument) -> Check {
    let pairs: [(&str, usize, &str, usize); 11] = [
        ("E7", 4, "A3+A3+A1", 0),
        ("E8", 3, "A7+A1", 0),
        ("E8", 6, "D5+A3", 0),
        ("F4", 3, "A3+A1", 0),
        ("E6", 4, "A2+A2+A1+R", 1),
        ("E7", 5, "A4+A2+R", 1),
        ("E7", 3, "A5+A1+R", 1),
        ("E8", 2, "A7+R", 1),
        ("E8", 7, "E6+A1+R", 1),
        ("F4", 2, "A2+A1+R", 1),
        ("G2", 1, "A1+R", 1),
    ];
    for (ty, node, label, dz) in pairs {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let f = TorsionAut::new(Coweight::fundamental(rs.rank(), node).scale(qf(1, 2)))
            .fixed_subalgebra(&rs)
            .map_err(|e| e.to_string())?;
        let computed = Label::new(f.types.clone(), f.center_dim).to_string();
        ensure(computed == label && f.center_dim == dz, || {
            format!("{ty} K{node}: computed {computed}, dim z {}; expected {label}, dim z {dz}", f.center_dim)
        })?;
        let mark = rs.marks()[node - 1];
        ensure((mark == 4 && dz == 0) || (mark == 3 && dz == 1), || format!("{ty} K{node}: mark {mark}, dim z {dz}"))?;
    }
    let mut headers = 0;
    for t in &doc.tables {
        for b in &t.blocks {
            headers += 1;
            ensure(b.h.verdict == Verdict::Match && b.dim_z.verdict == Verdict::Match, || {
                format!("table {} {} {}: header h {} dim z {}", t.id, b.algebra, b.node, b.h.computed, b.dim_z.computed)
            })?;
        }
    }
    Ok(format!("11 pairs match the printed (h, dim z); {headers} table headers agree"))
}

fn criterion3(doc: &TableDocument) -> Check {
    for ty in Table1Type::ALL {
        let (alg, node) = ty.pair();
        let rs = RootSystem::of(alg).map_err(|e| e.to_string())?;
        for img in ty.simple_images(&rs) {
            ensure(rs.is_root(&img), || format!("type {ty}: image {img:?} is not a root"))?;
        }
        let m = ty.cartan_map(&rs).map_err(|e| format!("type {ty}: {e}"))?;
        ensure(m.is_involution(), || format!("type {ty}: not an involution"))?;
        ensure((0..rs.roots.len()).all(|r| map_root(&rs, &m.matrix, r).is_some()), || {
            format!("type {ty}: does not preserve the roots")
        })?;
        let expected = if ty == Table1Type::I { Commutation::Commutes } else { Commutation::Anticommutes };
        let got = commutation_type(&m, &Coweight::fundamental(rs.rank(), node)).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("type {ty}: {got}, expected {expected}"))?;
    }
    let t1 = doc.tables.iter().find(|t| t.id == 1).ok_or("table 1 missing")?;
    for b in &t1.blocks {
        for r in &b.rows {
            ensure(r.status == RowStatus::Match, || format!("table 1 {} {}: {:?}", b.algebra, r.name, r.status))?;
        }
    }
    Ok("six maps send roots to roots, are involutions; I commutes, II-VI anticommute".into())
}

fn criterion4(engine: &Engine) -> Check {
    let cases: [(&str, usize, &str, &str, bool, usize, &str); 4] = [
        ("E8", 3, "tau1", "0", false, 29, ""),
        ("E7", 4, "tau3", "0", false, 13, ""),
        ("E8", 3, "tau1", "K6", true, 136, "E7+A1"),
        ("E7", 4, "phi", "0", true, 79, "E6+R"),
    ];
    let mut out = Vec::new();
    for (alg, node, base, twist, whole, dim, label) in cases {
        let ctx = &engine.get(alg, node).map_err(|e| e.to_string())?.ctx;
        let d = Descriptor::parse(ctx.rs.rank(), base, twist).map_err(|e| e.to_string())?;
        let inv = ctx.evaluate(&d).map_err(|e| e.to_string())?;
        let (k, hk) = ctx.invariants(&inv).map_err(|e| e.to_string())?;
        let r = if whole { &k } else { &hk };
        ensure(r.dim == dim && r.dim_formula == dim, || {
            format!("{alg} {d}: count {} formula {}, expected {dim}", r.dim, r.dim_formula)
        })?;
        if !label.is_empty() {
            let got = Label::new(r.types.clone(), r.abelian_dim).to_string();
            ensure(got == label, || format!("{alg} {d}: type {got}, expected {label}"))?;
        }
        out.push(dim.to_string());
    }
    Ok(format!("dims {} by formula and by eigencount", out.join("/")))
}

fn criterion5(doc: &TableDocument) -> Check {
    let lines = golden::diff(doc);
    ensure(lines.is_empty(), || format!("{} disagreements, first: {}", lines.len(), lines[0]))?;
    let mut rows = 0;
    let mut errata = 0;
    let mut split = 0;
    for t in &doc.tables {
        for b in &t.blocks {
            for r in &b.rows {
                rows += 1;
                ensure(matches!(r.status, RowStatus::Match | RowStatus::Erratum), || {
                    format!("table {} {} {}: {:?}", t.id, b.algebra, r.name, r.status)
                })?;
                errata += r.columns.iter().filter(|c| matches!(c.verdict, Verdict::Erratum { .. })).count();
                if let Some(c) = r.columns.iter().find(|c| c.name == "dim hk by root count") {
                    ensure(c.verdict == Verdict::Match, || format!("{} {}: root count {}", b.algebra, r.name, c.computed))?;
                    split += 1;
                }
            }
        }
    }
    let shipped = golden::errata().map_err(|e| e.to_string())?.len();
    ensure(doc.stale_errata.is_empty(), || format!("unused errata: {:?}", doc.stale_errata))?;
    let e8 = RootSystem::of("E8").map_err(|e| e.to_string())?;
    let count = e8.roots[..e8.n_pos].iter().filter(|a| a[1].rem_euclid(4) == 0).count();
    let t6 = doc.tables.iter().find(|t| t.id == 6).ok_or("table 6 missing")?;
    let row = t6
        .blocks
        .iter()
        .filter(|b| b.algebra == "E8" && b.node == 2)
        .flat_map(|b| &b.rows)
        .find(|r| r.name == "e8(8)")
        .ok_or("e8(8) row missing")?;
    let hk = row.columns.iter().find(|c| c.name == "hk").ok_or("hk column missing")?;
    ensure(count == 28 && hk.computed == "D4" && hk.printed.as_deref() == Some("so(8)"), || {
        format!("e8(8): {count} roots, hk {}", hk.computed)
    })?;
    Ok(format!(
        "{rows} rows reproduced, {errata} printed labels flagged as errata ({shipped} documented), {split} split-form root counts"
    ))
}

fn criterion6() -> Check {
    let ws = witness::witnesses().map_err(|e| e.to_string())?;
    let mut contexts: Vec<Context> = Vec::new();
    let mut failed = Vec::new();
    for w in &ws {
        let ctx = match w.node {
            Some(n) => {
                if !contexts.iter().any(|c| c.algebra == w.algebra && c.node == n) {
                    contexts.push(Context::new(&w.algebra, n).map_err(|e| e.to_string())?);
                }
                contexts.iter().find(|c| c.algebra == w.algebra && c.node == n)
            }
            None => None,
        };
        if !witness::verify_witness(w, ctx).map_err(|e| e.to_string())? {
            failed.push(w.text.clone());
        }
    }
    ensure(failed.is_empty(), || format!("failed witnesses: {failed:?}"))?;
    let has = |pred: &dyn Fn(&witness::Witness) -> bool, what: &str| -> Result<(), String> {
        ensure(ws.iter().any(pred), || format!("no witness for {what}"))
    };
    let image = |w: &witness::Witness, from: &str, to: &str| {
        let n = RootSystem::of(&w.algebra).map(|r| r.rank()).unwrap_or(0);
        matches!(&w.claim, Claim::CoweightImage { from: f, to: t, modulo2: false } if *f == cw(n, from) && *t == cw(n, to))
    };
    has(&|w| w.algebra == "E8" && w.map.letters.len() == 2 && image(w, "K6", "-3*K6 + 4*K7"), "t(b1) o t(a8)")?;
    has(&|w| w.algebra == "E8" && image(w, "K5", "-3*K2 + K5"), "nu inverse on K5")?;
    has(&|w| w.algebra == "E6" && w.map.letters == vec![Letter::Reflection(vec![0, 1, 0, 0, 0, 0])] && image(w, "K2", "-K2 + K4"), "t(a2) on K2")?;
    let mu_images = ws
        .iter()
        .filter(|w| w.kind == WitnessKind::NamedOuter && matches!(w.claim, Claim::RootImage { .. }))
        .count();
    ensure(mu_images == 6, || format!("{mu_images} root images of mu_1"))?;
    let seps = witness::separations().map_err(|e| e.to_string())?;
    for s in &seps {
        let ctx = Context::new(&s.algebra, s.node).map_err(|e| e.to_string())?;
        let a = ctx.evaluate(&s.a).map_err(|e| e.to_string())?;
        let b = ctx.evaluate(&s.b).map_err(|e| e.to_string())?;
        let verdict = liesym::classify::separate(&ctx, &a, &b).map_err(|e| e.to_string())?;
        ensure(verdict == Separation::Distinct("ideal membership in h".into()), || {
            format!("{}: {verdict:?}", s.text)
        })?;
    }
    ensure(seps.len() == 2, || format!("{} separations", seps.len()))?;
    Ok(format!("{} witnesses replay exactly; 2 separations found by ideal membership", ws.len()))
}

fn criterion7() -> Check {
    let mut sampled = 0usize;
    let mut exhaustive = 0usize;
    for ty in ["E6", "E7", "E8", "F4", "G2"] {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let table = StructureTable::new(&rs);
        let n = rs.rank();
        for node in 1..=n {
            let mark = rs.marks()[node - 1];
            let p = Partition::singleton(n, node).map_err(|e| e.to_string())?;
            let g = gradation_from_partition(&rs, &p);
            if mark == 3 {
                ensure(g.spectrum() == vec![-3, -2, -1, 0, 1, 2, 3], || format!("{ty} K{node}: spectrum {:?}", g.spectrum()))?;
            }
            if mark == 4 {
                ensure(g.kind == 4, || format!("{ty} K{node}: kind {}", g.kind))?;
            }
            let sampling = if n <= 4 {
                Sampling::Exhaustive
            } else if mark == 3 || mark == 4 {
                Sampling::Random { samples: 100_000, seed: node as u64 }
            } else {
                continue;
            };
            let report = check_grading(&rs, &table, &g, sampling);
            ensure(report.ok(), || format!("{ty} K{node}: {:?}", report.violations.first()))?;
            if n <= 4 {
                exhaustive += report.pairs;
            } else {
                ensure(report.pairs >= 100_000, || format!("{ty} K{node}: only {} pairs", report.pairs))?;
                sampled += report.pairs;
            }
        }
    }
    Ok(format!("spectra and kinds hold; closure on {exhaustive} pairs (F4, G2, all) and {sampled} sampled (E6-E8)"))
}

/// Fixed roots of `τ_{(1/2)h}` and of a comparison automorphism, as coefficient tests.
fn fixed_set_equalities() -> Result<usize, String> {
    let mut checked = 0;
    let types = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "D4", "D5", "D6", "D7", "B3", "C3", "E6", "E7", "E8", "F4", "G2"];
    for ty in types {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let n = rs.rank();
        let marks = rs.marks();
        let pos = &rs.roots[..rs.n_pos];
        let with = |m: i64| (1..=n).filter(|&j| marks[j - 1] == m).collect::<Vec<usize>>();
        let coef = |a: &[i64], h: &[(usize, i64)]| h.iter().map(|&(j, c)| c * a[j - 1]).sum::<i64>();
        let same = |h: &[(usize, i64)], test: &dyn Fn(&[i64]) -> bool| {
            pos.iter().all(|a| (coef(a, h).rem_euclid(4) == 0) == test(a))
        };
        for i in with(1) {
            let h = [(i, 1)];
            ensure(same(&h, &|a| coef(a, &h).rem_euclid(2) == 0), || format!("{ty} h4 = K{i}"))?;
            checked += 1;
        }
        for i in with(2) {
            let h = [(i, 1)];
            ensure(same(&h, &|a| coef(a, &h).rem_euclid(3) == 0), || format!("{ty} h5 = K{i}"))?;
            checked += 1;
        }
        let ones = with(1);
        for (x, &p) in ones.iter().enumerate() {
            for &q in &ones[x + 1..] {
                let h = [(p, 1), (q, 1)];
                ensure(same(&h, &|a| coef(a, &h).rem_euclid(3) == 0), || format!("{ty} h5 = K{p}+K{q}"))?;
                let h2 = [(p, 2), (q, 1)];
                ensure(same(&h2, &|a| coef(a, &h).rem_euclid(3) == 0), || format!("{ty} h5 = 2K{p}+K{q}"))?;
                checked += 2;
            }
        }
    }
    for (ty, h, kind) in [
        ("E7", "K7", SymmetryKind::Symmetric),
        ("E6", "K1", SymmetryKind::Symmetric),
        ("E6", "2K1 + K6", SymmetryKind::ThreeSymmetric),
        ("E6", "K1 + K6", SymmetryKind::ThreeSymmetric),
        ("E7", "K1", SymmetryKind::ThreeSymmetric),
    ] {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let got = is_symmetric_or_3symmetric(&rs, &cw(rs.rank(), h));
        ensure(got == kind, || format!("{ty} {h}: {got:?}"))?;
        checked += 1;
    }
    Ok(checked)
}

/// Involutions built anywhere in this run, checked for formula and eigencount agreement.
fn dimension_agreement(engine: &Engine) -> Result<usize, String> {
    let mut checked = 0;
    for (alg, node) in golden::pairs_for(&TABLE_IDS).map_err(|e| e.to_string())? {
        let pair = engine.get(&alg, node).map_err(|e| e.to_string())?;
        for row in &pair.rows {
            let inv = pair.ctx.evaluate(&row.descriptor).map_err(|e| e.to_string())?;
            let (k, hk) = pair.ctx.invariants(&inv).map_err(|e| e.to_string())?;
            ensure(k.dim == k.dim_formula && hk.dim == hk.dim_formula, || format!("{alg} {}", row.descriptor))?;
            checked += 2;
        }
    }
    for nm in NamedMap::ALL {
        let (alg, node) = nm.pair();
        let pair = engine.get(alg, node).map_err(|e| e.to_string())?;
        let inv = nm.build(&pair.ctx.rs, &pair.ctx.table).map_err(|e| e.to_string())?;
        let (k, hk) = pair.ctx.invariants(&inv).map_err(|e| e.to_string())?;
        ensure(k.dim == k.dim_formula && hk.dim == hk.dim_formula, || format!("{nm:?}"))?;
        checked += 2;
    }
    Ok(checked)
}

/// Brute force over the whole Weyl group: the coweight `K_i` of `A_n` meets `K_{n+1-i}`,
/// and for `D_4` the coweight `K_i` meets `K_{4-i}` for `i ≤ 2`, modulo the even lattice.
fn coweight_flips() -> Result<Vec<String>, String> {
    let mut refuted = Vec::new();
    let mut cases: Vec<(String, Vec<(usize, usize)>)> =
        (1..=5usize).map(|n| (format!("A{n}"), (1..=n).map(|i| (i, n + 1 - i)).collect())).collect();
    cases.push(("D4".into(), vec![(1, 3), (2, 2)]));
    for (ty, pairs) in cases {
        let rs = RootSystem::of(&ty).map_err(|e| e.to_string())?;
        let group = enumerate_group(&rs, 100_000).map_err(|e| e.to_string())?;
        let n = rs.rank();
        for (i, j) in pairs {
            let ki = Coweight::fundamental(n, i);
            let kj = Coweight::fundamental(n, j);
            if !group.iter().any(|m| congruent_mod2(&coweight_action(m, &ki), &kj)) {
                refuted.push(format!("{ty}: K{i} ~ K{j} fails on all {} Weyl elements", group.len()));
            }
        }
    }
    Ok(refuted)
}

fn criterion8(engine: &Engine) -> Check {
    let mut jacobi = 0;
    for ty in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2"] {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let r = verify_jacobi(&rs, &StructureTable::new(&rs), Sampling::Exhaustive);
        ensure(r.violations.is_empty(), || format!("Jacobi fails for {ty}"))?;
        jacobi += r.checked;
    }
    for (s, ty) in ["E6", "E7", "E8"].iter().enumerate() {
        let rs = RootSystem::of(ty).map_err(|e| e.to_string())?;
        let r = verify_jacobi(&rs, &StructureTable::new(&rs), Sampling::Random { samples: 100_000, seed: s as u64 });
        ensure(r.violations.is_empty(), || format!("Jacobi fails for {ty}"))?;
        jacobi += r.checked;
    }
    let dims = dimension_agreement(engine)?;
    let fixed_sets = fixed_set_equalities()?;
    let refuted = coweight_flips()?;
    let summary = format!("Jacobi on {jacobi} triples, {dims} dimension pairs agree, {fixed_sets} fixed-set equalities");
    if refuted.is_empty() {
        Ok(format!("{summary}, coweight flips confirmed"))
    } else {
        Err(format!("{summary}; coweight flip refuted: {}", refuted.join("; ")))
    }
}

fn main() {
    let start = Instant::now();
    let engine = Engine::all().expect("engine builds");
    let doc = golden::regenerate_tables(&engine, &TABLE_IDS).expect("tables regenerate");
    let results: Vec<(u8, Check)> = vec![
        (1, criterion1()),
        (2, criterion2(&doc)),
        (3, criterion3(&doc)),
        (4, criterion4(&engine)),
        (5, criterion5(&doc)),
        (6, criterion6()),
        (7, criterion7()),
        (8, criterion8(&engine)),
    ];
    let mut unexpected = Vec::new();
    for (id, r) in &results {
        match r {
            Ok(detail) => println!("criterion {id}: PASS {detail}"),
            Err(detail) => {
                println!("criterion {id}: FAIL {detail}");
                if !DOCUMENTED_FAILURES.contains(id) {
                    unexpected.push(*id);
                }
            }
        }
    }
    let passed = results.iter().filter(|(_, r)| r.is_ok()).count();
    println!("{passed}/{} criteria pass in {:.1}s", results.len(), start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("undocumented failures: {unexpected:?}");
        std::process::exit(1);
    }
}
