//! Classification of involutions of `g` preserving `h = g^σ`, up to `Aut_h(g)`.
//!
//! For `σ = τ_{(1/2)K_i}` the group of lattice maps preserving `Δ(h)` is
//! `G_h = W(h) ⋊ A`, where `A` is the stabilizer of the simple system of `h`.
//! Every involution preserving `h` and a Weyl chamber of `h` is `L_M ∘ τ_x` with
//! `M` an involution in `A`. Its conjugacy class is determined by the
//! `G_h`-conjugacy class of `M` and by the orbit of the centralizer of `M` on the
//! finite set of classes of `x` modulo torus conjugation and the even coweight
//! lattice. Both are enumerated exhaustively.

pub mod golden;
pub mod witness;

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::StructureTable;
use crate::error::{LieError, Result};
use crate::invol::{
    commutation_type, dim_fixed, dim_h_cap_fixed, h_members, h_simple_system, solve_involutions,
    stabilizer_of_h, Automorphism, CartanMap, Commutation, FixedAlgebraReport, Involution, NamedMap,
};
use crate::labels::Label;
use crate::linalg::{identity, mat_mul, mat_vec_q, q, q_solve, qf, transpose, F2Echelon, IMat, Q, QMat};
use crate::rootsys::{Coweight, Family, RootSystem, SimpleType};
use crate::torsion::TorsionAut;
use crate::weyl::{int_inverse, reflection_matrix};

/// The pairs `(g, i)` with `σ = τ_{(1/2)K_i}` of order four and `m_i ∈ {3, 4}`.
pub const PAIRS: [(&str, usize); 11] = [
    ("E8", 3),
    ("E8", 6),
    ("E7", 4),
    ("F4", 3),
    ("E8", 2),
    ("E8", 7),
    ("E7", 3),
    ("E7", 5),
    ("E6", 4),
    ("F4", 2),
    ("G2", 1),
];

/// A base involution of a class: a named map or an unnamed lattice class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseMap {
    Named(NamedMap),
    /// The first solved involution over the `k`-th linear class of the context.
    Lattice(usize),
}

impl fmt::Display for BaseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseMap::Named(m) => write!(f, "{}", named_token(*m)),
            BaseMap::Lattice(k) => write!(f, "theta{k}"),
        }
    }
}

/// Short token of a named map, as used in data files and on the command line.
pub fn named_token(m: NamedMap) -> &'static str {
    match m {
        NamedMap::Tau1 => "tau1",
        NamedMap::Tau2 => "tau2",
        NamedMap::Tau3 => "tau3",
        NamedMap::Tau4 => "tau4",
        NamedMap::Phi => "phi",
        NamedMap::Psi => "psi",
    }
}

/// Parses a composite base such as `tau3*phi`, `-` meaning the identity.
pub fn parse_bases(s: &str) -> Result<Vec<BaseMap>> {
    let s = s.trim();
    if s == "-" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('*')
        .map(|t| {
            let t = t.trim();
            if let Some(k) = t.strip_prefix("theta") {
                return k
                    .parse()
                    .map(BaseMap::Lattice)
                    .map_err(|_| LieError::Parse(format!("bad base `{t}`")));
            }
            NamedMap::ALL
                .iter()
                .find(|m| named_token(**m) == t)
                .map(|m| BaseMap::Named(*m))
                .ok_or_else(|| LieError::Parse(format!("unknown map `{t}`")))
        })
        .collect()
}

/// An involution written as a composite base map followed by `τ_H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Descriptor {
    pub bases: Vec<BaseMap>,
    pub twist: Coweight,
}

impl Descriptor {
    /// Parses the base and twist columns of a data file.
    pub fn parse(rank: usize, bases: &str, twist: &str) -> Result<Self> {
        Ok(Descriptor { bases: parse_bases(bases)?, twist: Coweight::parse(rank, twist)? })
    }

    /// The base column, `-` for the identity.
    pub fn base_token(&self) -> String {
        if self.bases.is_empty() {
            "-".into()
        } else {
            self.bases.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("*")
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.bases.iter().map(|b| b.to_string()).collect();
        if parts.is_empty() || self.twist.0.iter().any(|x| !x.is_zero()) {
            parts.push(format!("tau[{}]", self.twist));
        }
        write!(f, "{}", parts.join(" o "))
    }
}

/// One equivalence class of involutions for a pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub algebra: String,
    pub node: usize,
    pub h: Label,
    pub dim_z: usize,
    pub descriptor: Descriptor,
    pub k: Label,
    pub hk: Label,
    pub commutation: Commutation,
    /// Index of the `G_h`-class of the linear part within the context.
    pub linear_class: usize,
    /// Number of classes modulo torus conjugation merged into this row.
    pub merged: usize,
    /// Set when the row could be neither merged nor separated exactly.
    pub unresolved: bool,
    /// Class keys of the merged classes, as produced by [`Context::locate`].
    #[serde(skip)]
    pub keys: Vec<Vec<u8>>,
}

/// A conjugacy class of involutive linear parts together with its centralizer.
#[derive(Clone, Debug)]
pub struct LinearClass {
    pub bases: Vec<BaseMap>,
    pub base: Involution,
    /// Size of the `G_h`-conjugacy class of the linear part.
    pub orbit_size: usize,
    /// Generators of the centralizer of the linear part in `G_h`.
    pub centralizer: Vec<IMat>,
}

/// Everything attached to one pair `(g, σ)`.
#[derive(Clone, Debug)]
pub struct Context {
    pub algebra: String,
    pub node: usize,
    pub rs: RootSystem,
    pub table: StructureTable,
    /// `K_i`, so that `σ = τ_{(1/2)K_i}`.
    pub sigma: Coweight,
    pub h: Label,
    pub dim_z: usize,
    pub stab: Vec<CartanMap>,
    /// Generators of `G_h` as root-coordinate matrices.
    pub generators: Vec<IMat>,
    /// Order of `G_h`.
    pub group_order: u64,
    pub linear: Vec<LinearClass>,
}

/// Named base maps available for a pair, in the order they are tried.
pub fn named_bases(algebra: &str, node: usize) -> Vec<Vec<NamedMap>> {
    use NamedMap::*;
    match (algebra, node) {
        ("E8", 3) => vec![vec![Tau1]],
        ("E8", 6) => vec![vec![Tau2]],
        ("E7", 4) => vec![vec![Phi], vec![Tau3], vec![Tau3, Phi]],
        ("F4", 3) => vec![vec![Tau4]],
        ("E6", 4) => vec![vec![Psi]],
        _ => Vec::new(),
    }
}

fn weyl_order(t: SimpleType) -> u64 {
    let n = t.rank as u64;
    let fact = |k: u64| (1..=k).product::<u64>();
    match (t.family, t.rank) {
        (Family::A, _) => fact(n + 1),
        (Family::B | Family::C, _) => (1u64 << n) * fact(n),
        (Family::D, _) => (1u64 << (n - 1)) * fact(n),
        (Family::E, 6) => 51_840,
        (Family::E, 7) => 2_903_040,
        (Family::E, _) => 696_729_600,
        (Family::F, _) => 1152,
        (Family::G, _) => 12,
    }
}

fn flat(m: &IMat) -> Vec<i8> {
    m.iter().flatten().map(|&x| x as i8).collect()
}

fn unflat(v: &[i8], n: usize) -> IMat {
    v.chunks(n).map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

/// Breadth-first orbit of a matrix under conjugation, with a Schreier tree.
struct ConjOrbit {
    points: Vec<Vec<i8>>,
    parent: Vec<(usize, usize)>,
    index: HashMap<Vec<i8>, usize>,
}

impl ConjOrbit {
    fn new(gens: &[IMat], inverses: &[IMat], m: &IMat) -> Self {
        let n = m.len();
        let start = flat(m);
        let mut orbit = ConjOrbit { points: vec![start.clone()], parent: vec![(0, usize::MAX)], index: HashMap::new() };
        orbit.index.insert(start, 0);
        let mut head = 0;
        while head < orbit.points.len() {
            let cur = unflat(&orbit.points[head], n);
            for (k, (g, gi)) in gens.iter().zip(inverses).enumerate() {
                let img = flat(&mat_mul(&mat_mul(g, &cur), gi));
                if !orbit.index.contains_key(&img) {
                    orbit.index.insert(img.clone(), orbit.points.len());
                    orbit.points.push(img);
                    orbit.parent.push((head, k));
                }
            }
            head += 1;
        }
        orbit
    }

    /// An element `t` with `t M t^{−1}` equal to the `p`-th point.
    fn transversal(&self, gens: &[IMat], p: usize, n: usize) -> IMat {
        let mut t = identity(n);
        let mut cur = p;
        while self.parent[cur].1 != usize::MAX {
            let (prev, k) = self.parent[cur];
            t = mat_mul(&t, &gens[k]);
            cur = prev;
        }
        t
    }
}

fn closure(gens: &[IMat], n: usize, limit: usize) -> Result<HashSet<Vec<i8>>> {
    let mut seen: HashSet<Vec<i8>> = HashSet::new();
    let mut queue = vec![flat(&identity(n))];
    seen.insert(queue[0].clone());
    let mut head = 0;
    while head < queue.len() {
        let cur = unflat(&queue[head], n);
        head += 1;
        for g in gens {
            let img = flat(&mat_mul(g, &cur));
            if seen.insert(img.clone()) {
                if seen.len() > limit {
                    return Err(LieError::Internal("centralizer larger than expected".into()));
                }
                queue.push(img);
            }
        }
    }
    Ok(seen)
}

/// Generators of the centralizer of `m` in the group generated by `gens` of order `order`.
///
/// Schreier generators are added until the generated subgroup reaches the order
/// predicted by the orbit-stabilizer theorem. Returns the generators and the size
/// of the conjugacy class of `m`.
fn centralizer_generators(gens: &[IMat], order: u64, m: &IMat) -> Result<(Vec<IMat>, usize)> {
    let n = m.len();
    let inverses: Vec<IMat> = gens.iter().map(|g| int_inverse(g).expect("unimodular")).collect();
    let orbit = ConjOrbit::new(gens, &inverses, m);
    let len = orbit.points.len();
    if !order.is_multiple_of(len as u64) {
        return Err(LieError::Internal(format!("orbit of size {len} does not divide {order}")));
    }
    if len == 1 {
        return Ok((gens.to_vec(), 1));
    }
    let target = (order / len as u64) as usize;
    let mut out: Vec<IMat> = Vec::new();
    let mut group: HashSet<Vec<i8>> = closure(&out, n, target)?;
    'outer: for p in 0..len {
        if group.len() == target {
            break;
        }
        let tp = orbit.transversal(gens, p, n);
        let mp = unflat(&orbit.points[p], n);
        for (g, gi) in gens.iter().zip(&inverses) {
            let img = flat(&mat_mul(&mat_mul(g, &mp), gi));
            let qi = orbit.index[&img];
            let tq = orbit.transversal(gens, qi, n);
            let tq_inv = int_inverse(&tq).expect("unimodular");
            let s = mat_mul(&mat_mul(&tq_inv, g), &tp);
            if group.contains(&flat(&s)) {
                continue;
            }
            out.push(s);
            group = closure(&out, n, target)?;
            if group.len() == target {
                break 'outer;
            }
        }
    }
    if group.len() != target {
        return Err(LieError::Internal("Schreier generators do not reach the centralizer".into()));
    }
    if out.is_empty() {
        out.push(identity(n));
    }
    Ok((out, len))
}

impl Context {
    /// Builds the context of `σ = τ_{(1/2)K_node}` on the given algebra.
    pub fn new(algebra: &str, node: usize) -> Result<Self> {
        let rs = RootSystem::of(algebra)?;
        let n = rs.rank();
        if node == 0 || node > n {
            return Err(LieError::OutOfScope(format!("node {node} of {algebra}")));
        }
        let mark = rs.marks()[node - 1];
        if mark != 3 && mark != 4 {
            return Err(LieError::OutOfScope(format!("node {node} of {algebra} has mark {mark}, not 3 or 4")));
        }
        let table = StructureTable::new(&rs);
        let sigma = Coweight::fundamental(n, node);
        let fixed = TorsionAut::new(sigma.scale(qf(1, 2))).fixed_subalgebra(&rs)?;
        let h = Label::new(fixed.types.clone(), fixed.center_dim);
        let stab = stabilizer_of_h(&rs, node)?;
        let mut generators: Vec<IMat> =
            h_simple_system(&rs, node).iter().map(|a| reflection_matrix(&rs, a)).collect();
        generators.extend(stab.iter().skip(1).map(|c| c.matrix.clone()));
        let group_order = h.types.iter().map(|t| weyl_order(*t)).product::<u64>() * stab.len() as u64;
        let mut ctx = Context {
            algebra: algebra.to_string(),
            node,
            rs,
            table,
            sigma,
            h,
            dim_z: fixed.center_dim,
            stab,
            generators,
            group_order,
            linear: Vec::new(),
        };
        ctx.linear = ctx.linear_classes()?;
        Ok(ctx)
    }

    fn linear_classes(&self) -> Result<Vec<LinearClass>> {
        let rs = &self.rs;
        let n = rs.rank();
        let inverses: Vec<IMat> = self.generators.iter().map(|g| int_inverse(g).expect("unimodular")).collect();
        let mut out = vec![LinearClass {
            bases: Vec::new(),
            base: Involution::new(Automorphism::identity(rs))?,
            orbit_size: 1,
            centralizer: self.generators.clone(),
        }];
        let candidates: Vec<IMat> = self
            .stab
            .iter()
            .filter(|c| c.is_involution() && c.matrix != identity(n))
            .map(|c| c.matrix.clone())
            .collect();
        let mut covered: HashSet<Vec<i8>> = HashSet::new();
        let add = |bases: Vec<BaseMap>, base: Involution, out: &mut Vec<LinearClass>, covered: &mut HashSet<Vec<i8>>| -> Result<()> {
            let m = base.aut.cmap.matrix.clone();
            if covered.contains(&flat(&m)) {
                return Err(LieError::Internal(format!("base {bases:?} repeats a linear class")));
            }
            let orbit = ConjOrbit::new(&self.generators, &inverses, &m);
            covered.extend(orbit.points.iter().cloned());
            let (centralizer, orbit_size) = centralizer_generators(&self.generators, self.group_order, &m)?;
            out.push(LinearClass { bases, base, orbit_size, centralizer });
            Ok(())
        };
        for names in named_bases(&self.algebra, self.node) {
            let bases: Vec<BaseMap> = names.iter().map(|m| BaseMap::Named(*m)).collect();
            let base = self.base_involution(&bases, &out)?;
            add(bases, base, &mut out, &mut covered)?;
        }
        for m in candidates {
            if covered.contains(&flat(&m)) {
                continue;
            }
            let cmap = CartanMap::new(rs, m)?;
            let base = solve_involutions(rs, &self.table, &cmap, &[])?
                .into_iter()
                .next()
                .ok_or_else(|| LieError::Inconsistent("stabilizer involution without a lift".into()))?;
            let bases = vec![BaseMap::Lattice(out.len())];
            add(bases, base, &mut out, &mut covered)?;
        }
        Ok(out)
    }

    fn base_involution(&self, bases: &[BaseMap], linear: &[LinearClass]) -> Result<Involution> {
        let mut aut = Automorphism::identity(&self.rs);
        for b in bases {
            let next = match b {
                BaseMap::Named(m) => {
                    let (alg, node) = m.pair();
                    if alg != self.algebra || node != self.node {
                        return Err(LieError::OutOfScope(format!(
                            "{} belongs to ({alg}, K{node})",
                            named_token(*m)
                        )));
                    }
                    m.build(&self.rs, &self.table)?.aut
                }
                BaseMap::Lattice(k) => linear
                    .get(*k)
                    .ok_or_else(|| LieError::Unknown(format!("linear class {k}")))?
                    .base
                    .aut
                    .clone(),
            };
            aut = aut.compose(&next);
        }
        Involution::new(aut)
    }

    /// The involution described by a descriptor.
    pub fn evaluate(&self, d: &Descriptor) -> Result<Involution> {
        self.base_involution(&d.bases, &self.linear)?.twist(&self.rs, &d.twist)
    }

    /// Fixed algebras `g^τ` and `h ∩ g^τ`, each checked by two independent counts.
    pub fn invariants(&self, inv: &Involution) -> Result<(FixedAlgebraReport, FixedAlgebraReport)> {
        let k = dim_fixed(&self.rs, inv)?;
        let hk = dim_h_cap_fixed(&self.rs, inv, &self.sigma)?;
        for r in [&k, &hk] {
            if r.dim != r.dim_formula {
                return Err(LieError::Internal(format!("dimension counts disagree: {} vs {}", r.dim, r.dim_formula)));
            }
        }
        Ok((k, hk))
    }

    /// Index of the linear class whose `G_h`-orbit contains `m`, with `t` such that `t M t^{−1} = m`.
    pub fn linear_class_of(&self, m: &IMat) -> Option<(usize, IMat)> {
        let inverses: Vec<IMat> = self.generators.iter().map(|g| int_inverse(g).expect("unimodular")).collect();
        self.linear.iter().enumerate().find_map(|(i, lc)| {
            let orbit = ConjOrbit::new(&self.generators, &inverses, &lc.base.aut.cmap.matrix);
            let p = *orbit.index.get(&flat(m))?;
            Some((i, orbit.transversal(&self.generators, p, m.len())))
        })
    }

    /// Locates an involution: index of its linear class and its class key.
    pub fn locate(&self, inv: &Involution) -> Result<(usize, Vec<u8>)> {
        let m = &inv.aut.cmap.matrix;
        let (i, t) = self
            .linear_class_of(m)
            .ok_or_else(|| LieError::Inconsistent("the involution does not preserve the simple system of h".into()))?;
        let lt = Automorphism::lift(&self.rs, &self.table, &CartanMap::new(&self.rs, t)?, &vec![Q::zero(); m.len()])?;
        let back = inv.aut.conjugate_by(&lt.inverse());
        let space = ClassSpace::new(&self.rs, self.linear[i].base.clone())?;
        let key = space
            .key_of(&self.rs, &back)
            .ok_or_else(|| LieError::Internal("conjugated involution outside its class space".into()))?;
        Ok((i, key))
    }

    /// Index of the row of `rows` containing the class of `inv`.
    pub fn row_of(&self, rows: &[ClassRow], inv: &Involution) -> Result<Option<usize>> {
        let (li, key) = self.locate(inv)?;
        Ok(rows.iter().position(|r| r.linear_class == li && r.keys.contains(&key)))
    }
}

/// Classes of `L_M ∘ τ_x` modulo torus conjugation and the even coweight lattice.
///
/// With `u = (I + M^T) x` the class of `x` is determined by `u`, which lies in the
/// lattice `L1 = ker(M^T − I)`; changing `x` by the even lattice moves `u` by
/// `2 L2` with `L2 = (I + M^T) Zⁿ`. Keys are coordinates of `(u − u_0)/2` in a basis
/// of `L1`, reduced modulo 2 and modulo the image of `L2`.
#[derive(Clone, Debug)]
pub struct ClassSpace {
    pub base: Involution,
    plus: IMat,
    basis: QMat,
    dim: usize,
    l2: F2Echelon,
    pub x0: Coweight,
    u0: Vec<Q>,
}

impl ClassSpace {
    /// The class space of involutions sharing the linear part of `base`.
    pub fn new(rs: &RootSystem, base: Involution) -> Result<Self> {
        let n = rs.rank();
        let mt = transpose(&base.aut.cmap.matrix);
        let mut plus = mt.clone();
        let mut minus = mt;
        for i in 0..n {
            plus[i][i] += 1;
            minus[i][i] -= 1;
        }
        let kernel = crate::linalg::int_kernel(&minus, n);
        let dim = kernel.len();
        let basis: QMat = (0..n).map(|i| kernel.iter().map(|v| q(v[i])).collect()).collect();
        let x0 = base.aut.torus_part(rs);
        let u0 = mat_vec_q(&plus, &x0.0);
        let mut space = ClassSpace { base, plus, basis, dim, l2: F2Echelon::new(), x0, u0 };
        for j in 0..n {
            let col: Vec<Q> = (0..n).map(|i| q(space.plus[i][j])).collect();
            let c = space.coords(&col).ok_or_else(|| LieError::Internal("image of I + M^T outside the kernel".into()))?;
            space.l2.insert(&c);
        }
        Ok(space)
    }

    fn coords(&self, v: &[Q]) -> Option<Vec<u8>> {
        if self.dim == 0 {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let c = q_solve(&self.basis, v)?;
        c.iter()
            .map(|x| x.is_integer().then(|| x.to_integer().rem_euclid(2) as u8))
            .collect()
    }

    /// Key of `L_M ∘ τ_x`, or `None` when it is not an involution.
    pub fn key(&self, x: &Coweight) -> Option<Vec<u8>> {
        let u = mat_vec_q(&self.plus, &x.0);
        let w: Vec<Q> = u.iter().zip(&self.u0).map(|(a, b)| (a - b) / q(2)).collect();
        let c = self.coords(&w)?;
        Some(self.l2.reduce(&c))
    }

    /// Key of an automorphism with the same linear part as the base.
    pub fn key_of(&self, rs: &RootSystem, aut: &Automorphism) -> Option<Vec<u8>> {
        (aut.cmap == self.base.aut.cmap).then(|| self.key(&aut.torus_part(rs))).flatten()
    }

    /// Number of classes.
    pub fn size(&self) -> usize {
        1 << (self.dim - self.l2.dim())
    }

    /// One twist `t` per class, with `base ∘ τ_t` in the class.
    pub fn representatives(&self) -> Vec<(Vec<u8>, Coweight)> {
        let n = self.x0.rank();
        let mut out: Vec<(Vec<u8>, Coweight)> = Vec::new();
        let mut seen = HashSet::new();
        for bits in 0..1usize << self.dim {
            let t = Coweight(
                (0..n)
                    .map(|i| {
                        (0..self.dim)
                            .filter(|k| bits >> k & 1 == 1)
                            .fold(Q::zero(), |acc, k| acc + self.basis[i][k])
                    })
                    .collect(),
            );
            let x = self.x0.add(&t);
            if let Some(key) = self.key(&x) {
                if seen.insert(key.clone()) {
                    out.push((key, t));
                }
            }
        }
        out
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Orbits of the centralizer of a linear class on its class space.
pub fn class_orbits(ctx: &Context, lc: &LinearClass) -> Result<(ClassSpace, Vec<Vec<(Vec<u8>, Coweight)>>)> {
    let rs = &ctx.rs;
    let n = rs.rank();
    let space = ClassSpace::new(rs, lc.base.clone())?;
    let reps = space.representatives();
    let index: HashMap<Vec<u8>, usize> = reps.iter().enumerate().map(|(i, (k, _))| (k.clone(), i)).collect();
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    for g in &lc.centralizer {
        let lg = Automorphism::lift(rs, &ctx.table, &CartanMap::new(rs, g.clone())?, &vec![Q::zero(); n])?;
        let lg_inv = lg.inverse();
        for (i, (_, t)) in reps.iter().enumerate() {
            let theta = lc.base.aut.twist(rs, t);
            let img = lg.compose(&theta).compose(&lg_inv);
            let key = space
                .key_of(rs, &img)
                .ok_or_else(|| LieError::Internal("centralizer element leaves the class space".into()))?;
            let j = index[&key];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<(Vec<u8>, Coweight)>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..reps.len() {
        let r = find(&mut parent, i);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[s].push(reps[i].clone());
    }
    Ok((space, groups))
}

/// Preferred twist for a class: integral sums of few `K_j` first, then a `σ`-twist.
fn preferred_twist(ctx: &Context, space: &ClassSpace, keys: &HashSet<Vec<u8>>) -> Option<Coweight> {
    let n = ctx.rs.rank();
    let half = ctx.sigma.scale(qf(1, 2));
    let mut best: Option<((bool, usize, Vec<usize>), Coweight)> = None;
    for with_half in [false, true] {
        for bits in 0..1usize << n {
            let support: Vec<usize> = (0..n).filter(|i| bits >> i & 1 == 1).map(|i| i + 1).collect();
            let mut t = Coweight::from_terms(n, &support.iter().map(|&j| (j, Q::one())).collect::<Vec<_>>());
            if with_half {
                t = t.add(&half);
            }
            let Some(key) = space.key(&space.x0.add(&t)) else { continue };
            if !keys.contains(&key) {
                continue;
            }
            let score = (with_half, support.len(), support);
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, t));
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map(|(_, t)| t)
}

/// All classes of involutions for the pair, identity excluded, in canonical order.
pub fn classify(ctx: &Context) -> Result<Vec<ClassRow>> {
    let mut rows = Vec::new();
    for (li, lc) in ctx.linear.iter().enumerate() {
        let (space, orbits) = class_orbits(ctx, lc)?;
        let commutation = commutation_type(&lc.base.aut.cmap, &ctx.sigma)?;
        let mut block = Vec::new();
        for orbit in orbits {
            let keys: HashSet<Vec<u8>> = orbit.iter().map(|(k, _)| k.clone()).collect();
            if li == 0 && orbit.iter().any(|(k, _)| k.iter().all(|&b| b == 0)) {
                continue;
            }
            let twist = preferred_twist(ctx, &space, &keys).unwrap_or_else(|| orbit[0].1.clone());
            let descriptor = Descriptor { bases: lc.bases.clone(), twist };
            let inv = ctx.evaluate(&descriptor)?;
            let (k, hk) = ctx.invariants(&inv)?;
            block.push(ClassRow {
                algebra: ctx.algebra.clone(),
                node: ctx.node,
                h: ctx.h.clone(),
                dim_z: ctx.dim_z,
                descriptor,
                k: Label::new(k.types.clone(), k.abelian_dim),
                hk: Label::new(hk.types.clone(), hk.abelian_dim),
                commutation,
                linear_class: li,
                merged: orbit.len(),
                unresolved: false,
                keys: orbit.iter().map(|(k, _)| k.clone()).collect(),
            });
        }
        block.sort_by_key(|a| descriptor_order(&a.descriptor));
        rows.extend(block);
    }
    Ok(rows)
}

fn descriptor_order(d: &Descriptor) -> (bool, usize, Vec<(usize, Q)>) {
    let half = d.twist.0.iter().any(|x| !x.is_integer());
    let terms: Vec<(usize, Q)> =
        d.twist.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, *x)).collect();
    (half, terms.iter().filter(|(_, x)| x.is_integer()).count(), terms)
}

/// Whether each simple ideal of `g^τ` lies in `h`, for inner involutions `τ = τ_x`.
///
/// Returns pairs `(type, contained)` sorted, or `None` for involutions that are not inner.
pub fn ideal_membership(ctx: &Context, inv: &Involution) -> Option<Vec<(SimpleType, bool)>> {
    let rs = &ctx.rs;
    if inv.aut.cmap.matrix != identity(rs.rank()) {
        return None;
    }
    let members: Vec<bool> = (0..rs.roots.len()).map(|r| inv.aut.phase[r].is_zero()).collect();
    let base = rs.indecomposable(&members);
    let in_h = h_members(rs, &ctx.sigma);
    let mut comp: Vec<usize> = (0..base.len()).collect();
    for a in 0..base.len() {
        for b in 0..a {
            if !rs.inner(&base[a], &base[b]).is_zero() {
                let (x, y) = (find(&mut comp, a), find(&mut comp, b));
                comp[x.max(y)] = x.min(y);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Vec<i64>>> = HashMap::new();
    for (a, v) in base.iter().enumerate() {
        let r = find(&mut comp, a);
        groups.entry(r).or_default().push(v.clone());
    }
    let mut out: Vec<(SimpleType, bool)> = groups
        .values()
        .map(|g| {
            let ty = crate::rootsys::identify_type(g, |a, b| rs.inner(a, b)).expect("simple component")[0];
            let contained = g.iter().all(|v| in_h[rs.index_of(v).expect("root")]);
            (ty, contained)
        })
        .collect();
    out.sort_by_key(|(t, c)| (t.sort_key(), *c));
    Some(out)
}

/// Outcome of comparing two involutions by computable invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Separation {
    /// Distinct, with the name of the first invariant that differs.
    Distinct(String),
    Indistinguishable,
}

/// Compares two involutions of the same pair by invariants of their `Aut_h(g)`-classes.
pub fn separate(ctx: &Context, a: &Involution, b: &Involution) -> Result<Separation> {
    let (ka, hka) = ctx.invariants(a)?;
    let (kb, hkb) = ctx.invariants(b)?;
    let label = |r: &FixedAlgebraReport| Label::new(r.types.clone(), r.abelian_dim);
    if label(&ka) != label(&kb) {
        return Ok(Separation::Distinct("k".into()));
    }
    if label(&hka) != label(&hkb) {
        return Ok(Separation::Distinct("h∩k".into()));
    }
    if commutation_type(&a.aut.cmap, &ctx.sigma)? != commutation_type(&b.aut.cmap, &ctx.sigma)? {
        return Ok(Separation::Distinct("commutation".into()));
    }
    if ideal_membership(ctx, a) != ideal_membership(ctx, b) {
        return Ok(Separation::Distinct("ideal membership in h".into()));
    }
    Ok(Separation::Indistinguishable)
}

#[cfg(test)]
mod tests;
