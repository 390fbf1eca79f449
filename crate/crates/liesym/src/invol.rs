//! Automorphisms of `g` preserving the maximal torus, with involutions as the main case.
//!
//! An automorphism is stored as a lattice map `M` on root coordinates, the induced
//! permutation of roots, and phases: `θ(E_α) = e^{πi·phase(α)} E_{Mα}`. On coweights
//! it acts by `M^{−T}`. The zero-phase lift `L_M` of a root-system automorphism sends
//! every `E_{α_j}` to `E_{Mα_j}`; every automorphism with linear part `M` equals
//! `L_M ∘ τ_x` where `x_j` is the phase of `α_j`.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::StructureTable;
use crate::error::{LieError, Result};
use crate::linalg::{identity, mat_mul, mat_vec, mod2, q, q_rank, smith, to_q, transpose, IMat, Q, QMat};
use crate::rootsys::{identify_type, Coweight, RootSystem, SimpleType};
use crate::weyl::{int_inverse, reflection_matrix};

/// A lattice map on root coordinates that permutes the roots and preserves the form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanMap {
    /// Column `j` holds the image of `α_{j+1}`.
    pub matrix: IMat,
}

impl CartanMap {
    /// Validates a matrix as an automorphism of the root system.
    pub fn new(rs: &RootSystem, matrix: IMat) -> Result<Self> {
        let n = rs.rank();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(LieError::RankMismatch { expected: n, found: matrix.len() });
        }
        for r in &rs.roots {
            let img = mat_vec(&matrix, r);
            if !rs.is_root(&img) {
                return Err(LieError::NotARoot(img));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ci: Vec<i64> = matrix.iter().map(|row| row[i]).collect();
                let cj: Vec<i64> = matrix.iter().map(|row| row[j]).collect();
                if rs.inner(&ci, &cj) != rs.gram[i][j] {
                    return Err(LieError::Inconsistent("lattice map does not preserve the form".into()));
                }
            }
        }
        Ok(CartanMap { matrix })
    }

    /// Identity map.
    pub fn identity(rs: &RootSystem) -> Self {
        CartanMap { matrix: identity(rs.rank()) }
    }

    /// Builds the map from images of extended nodes (`0` is `α_0 = −δ`, `j` is `α_j`).
    ///
    /// Missing images are completed by assuming the map is an involution, so that an
    /// image `a ↦ b` between nodes also gives `b ↦ a`.
    pub fn from_node_images(rs: &RootSystem, images: &[(usize, Vec<i64>)]) -> Result<Self> {
        let nodes = rs.extended_base();
        let n = rs.rank();
        let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = images.iter().map(|(k, v)| (nodes[*k].clone(), v.clone())).collect();
        for (k, v) in images {
            if let Some(t) = nodes.iter().position(|x| x == v) {
                if !images.iter().any(|(s, _)| *s == t) {
                    pairs.push((v.clone(), nodes[*k].clone()));
                }
            }
        }
        // Solve M S = T column by column over the rationals.
        let s_rows: QMat = pairs.iter().map(|(s, _)| s.iter().map(|&x| q(x)).collect()).collect();
        if q_rank(&s_rows) < n {
            return Err(LieError::Inconsistent("node images do not determine the map".into()));
        }
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            let rhs: Vec<Q> = pairs.iter().map(|(_, t)| q(t[i])).collect();
            let row = crate::linalg::q_solve(&s_rows, &rhs)
                .ok_or_else(|| LieError::Inconsistent("node images are not linear".into()))?;
            for (j, x) in row.iter().enumerate() {
                if !x.is_integer() {
                    return Err(LieError::Inconsistent("node images are not integral".into()));
                }
                m[i][j] = x.to_integer();
            }
        }
        for (s, t) in &pairs {
            if mat_vec(&m, s) != *t {
                return Err(LieError::Inconsistent("node images are not linear".into()));
            }
        }
        CartanMap::new(rs, m)
    }

    /// Image of a vector in root coordinates.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, v)
    }

    /// Whether the map squares to the identity.
    pub fn is_involution(&self) -> bool {
        mat_mul(&self.matrix, &self.matrix) == identity(self.matrix.len())
    }

    /// Induced permutation of root indices.
    pub fn permutation(&self, rs: &RootSystem) -> Vec<usize> {
        rs.roots
            .iter()
            .map(|r| rs.index_of(&self.apply(r)).expect("validated map"))
            .collect()
    }

    /// Action on coweights, `H ↦ M^{−T} H`.
    pub fn on_coweight(&self, h: &Coweight) -> Coweight {
        crate::weyl::coweight_action(&self.matrix, h)
    }

    /// Dimension of the `+1` eigenspace on the torus.
    pub fn dim_plus(&self) -> usize {
        let n = self.matrix.len();
        let mut d = to_q(&self.matrix);
        for (i, row) in d.iter_mut().enumerate() {
            row[i] -= Q::one();
        }
        n - q_rank(&d)
    }
}

/// An automorphism preserving the torus, acting on root vectors by permutation with phases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub cmap: CartanMap,
    pub perm: Vec<usize>,
    /// Phases modulo 2, indexed like [`RootSystem::roots`].
    pub phase: Vec<Q>,
}

impl Automorphism {
    /// The identity automorphism.
    pub fn identity(rs: &RootSystem) -> Self {
        Automorphism {
            cmap: CartanMap::identity(rs),
            perm: (0..rs.roots.len()).collect(),
            phase: vec![Q::zero(); rs.roots.len()],
        }
    }

    /// The inner automorphism `τ_H`.
    pub fn torus(rs: &RootSystem, h: &Coweight) -> Self {
        Automorphism::identity(rs).twist(rs, h)
    }

    /// The automorphism with linear part `cmap` sending `E_{α_j}` to `e^{πi s_j} E_{Mα_j}`.
    pub fn lift(rs: &RootSystem, table: &StructureTable, cmap: &CartanMap, simple_phases: &[Q]) -> Result<Self> {
        let n = rs.rank();
        if simple_phases.len() != n {
            return Err(LieError::RankMismatch { expected: n, found: simple_phases.len() });
        }
        let perm = cmap.permutation(rs);
        let mut phase = vec![Q::zero(); rs.roots.len()];
        let mut done = vec![false; rs.roots.len()];
        for j in 1..=n {
            let s = rs.simple(j);
            phase[s] = mod2(simple_phases[j - 1]);
            done[s] = true;
        }
        for g in 0..rs.n_pos {
            if done[g] {
                continue;
            }
            let (b, j) = (1..=n)
                .find_map(|j| {
                    let mut v = rs.roots[g].clone();
                    v[j - 1] -= 1;
                    rs.index_of(&v).filter(|&b| rs.is_positive(b)).map(|b| (b, j))
                })
                .ok_or_else(|| LieError::Internal("positive root without predecessor".into()))?;
            let a = rs.simple(j);
            let num = table.n(perm[b], perm[a]);
            let den = table.n(b, a);
            if num.abs() != den.abs() || den == 0 {
                return Err(LieError::Inconsistent("structure constants do not match under the map".into()));
            }
            let sign = if num * den < 0 { Q::one() } else { Q::zero() };
            phase[g] = mod2(phase[b] + phase[a] + sign);
            done[g] = true;
        }
        for g in 0..rs.n_pos {
            phase[rs.neg(g)] = mod2(-phase[g]);
        }
        Ok(Automorphism { cmap: cmap.clone(), perm, phase })
    }

    /// The composition `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let perm: Vec<usize> = other.perm.iter().map(|&p| self.perm[p]).collect();
        let phase = other
            .perm
            .iter()
            .enumerate()
            .map(|(r, &p)| mod2(other.phase[r] + self.phase[p]))
            .collect();
        Automorphism {
            cmap: CartanMap { matrix: mat_mul(&self.cmap.matrix, &other.cmap.matrix) },
            perm,
            phase,
        }
    }

    /// The inverse automorphism.
    pub fn inverse(&self) -> Automorphism {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut phase = vec![Q::zero(); k];
        for r in 0..k {
            perm[self.perm[r]] = r;
            phase[self.perm[r]] = mod2(-self.phase[r]);
        }
        Automorphism {
            cmap: CartanMap { matrix: int_inverse(&self.cmap.matrix).expect("unimodular") },
            perm,
            phase,
        }
    }

    /// The conjugate `g ∘ self ∘ g^{−1}`.
    pub fn conjugate_by(&self, g: &Automorphism) -> Automorphism {
        g.compose(self).compose(&g.inverse())
    }

    /// The composition `self ∘ τ_H`.
    pub fn twist(&self, rs: &RootSystem, h: &Coweight) -> Automorphism {
        let mut out = self.clone();
        for (r, p) in out.phase.iter_mut().enumerate() {
            let v = crate::rootsys::eval(&rs.roots[r], h).expect("rank");
            *p = mod2(*p + v);
        }
        out
    }

    /// Phase of the simple roots, i.e. the coweight `x` with `self = L_M ∘ τ_x`.
    pub fn torus_part(&self, rs: &RootSystem) -> Coweight {
        Coweight((1..=rs.rank()).map(|j| self.phase[rs.simple(j)]).collect())
    }

    /// Whether the automorphism squares to the identity on every basis vector.
    pub fn is_involution(&self) -> bool {
        self.cmap.is_involution()
            && self
                .perm
                .iter()
                .enumerate()
                .all(|(r, &p)| mod2(self.phase[r] + self.phase[p]).is_zero())
    }

    /// Checks `θ[E_α, E_β] = [θE_α, θE_β]` for every pair of roots.
    ///
    /// Returns the number of pairs checked.
    pub fn check_bracket(&self, rs: &RootSystem, table: &StructureTable) -> Result<usize> {
        let k = rs.roots.len();
        let mut checked = 0;
        for a in 0..k {
            for b in 0..k {
                checked += 1;
                if b == rs.neg(a) {
                    if !mod2(self.phase[a] + self.phase[b]).is_zero() {
                        return Err(LieError::Inconsistent(format!(
                            "[E_a, E_-a] not preserved for {:?}",
                            rs.roots[a]
                        )));
                    }
                    continue;
                }
                let Some(c) = table.sum(a, b) else { continue };
                let num = table.n(self.perm[a], self.perm[b]);
                let den = table.n(a, b);
                if num.abs() != den.abs() || table.sum(self.perm[a], self.perm[b]) != Some(self.perm[c]) {
                    return Err(LieError::Inconsistent(format!(
                        "bracket support not preserved for {:?}, {:?}",
                        rs.roots[a], rs.roots[b]
                    )));
                }
                let sign = if num * den < 0 { Q::one() } else { Q::zero() };
                if !mod2(self.phase[a] + self.phase[b] + sign - self.phase[c]).is_zero() {
                    return Err(LieError::Inconsistent(format!(
                        "bracket not preserved for {:?}, {:?}",
                        rs.roots[a], rs.roots[b]
                    )));
                }
            }
        }
        Ok(checked)
    }
}

/// A verified involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Involution {
    pub aut: Automorphism,
}

impl Involution {
    /// Wraps an automorphism after checking that it squares to the identity.
    pub fn new(aut: Automorphism) -> Result<Self> {
        if !aut.is_involution() {
            return Err(LieError::Inconsistent("automorphism does not square to the identity".into()));
        }
        Ok(Involution { aut })
    }

    /// The composition with `τ_H`, checked to remain an involution.
    pub fn twist(&self, rs: &RootSystem, h: &Coweight) -> Result<Involution> {
        Involution::new(self.aut.twist(rs, h))
    }
}

/// Whether `τ` commutes with `σ = τ_{(1/2)H}` or inverts it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Commutation {
    Commutes,
    Anticommutes,
}

impl std::fmt::Display for Commutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Commutation::Commutes => write!(f, "commutes"),
            Commutation::Anticommutes => write!(f, "anticommutes"),
        }
    }
}

fn congruent_mod4(a: &Coweight, b: &Coweight) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| {
        let d = x - y;
        d.is_integer() && d.to_integer().rem_euclid(4) == 0
    })
}

/// Commutation type of an automorphism with linear part `cmap` and `σ = τ_{(1/2)H}`.
pub fn commutation_type(cmap: &CartanMap, h: &Coweight) -> Result<Commutation> {
    let img = cmap.on_coweight(h);
    if congruent_mod4(&img, h) {
        Ok(Commutation::Commutes)
    } else if congruent_mod4(&img, &h.scale(-Q::one())) {
        Ok(Commutation::Anticommutes)
    } else {
        Err(LieError::Inconsistent(format!("the map sends {h} to {img}, which is not ±{h} mod 4")))
    }
}

/// A prescribed phase on the root vector of `root`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prescription {
    pub root: Vec<i64>,
    pub phase: Q,
}

/// All involutions with linear part `cmap` satisfying the prescriptions.
///
/// Solutions are returned modulo the even coweight lattice, with every continuous
/// parameter (a torus conjugation) set to zero.
pub fn solve_involutions(
    rs: &RootSystem,
    table: &StructureTable,
    cmap: &CartanMap,
    prescriptions: &[Prescription],
) -> Result<Vec<Involution>> {
    if !cmap.is_involution() {
        return Err(LieError::Inconsistent("linear part is not an involution".into()));
    }
    let n = rs.rank();
    let lift = Automorphism::lift(rs, table, cmap, &vec![Q::zero(); n])?;
    let mt = transpose(&cmap.matrix);
    let mut rows: IMat = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for i in 0..n {
        let mut row = mt[i].clone();
        row[i] += 1;
        rows.push(row);
        let s = rs.simple(i + 1);
        rhs.push(-mod2(lift.phase[s] + lift.phase[lift.perm[s]]));
    }
    for p in prescriptions {
        let idx = rs.index_of(&p.root).ok_or_else(|| LieError::NotARoot(p.root.clone()))?;
        rows.push(p.root.clone());
        rhs.push(p.phase - lift.phase[idx]);
    }
    let snf = smith(&rows, n);
    let ub: Vec<Q> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(&rhs).fold(Q::zero(), |acc, (&a, b)| acc + b * a))
        .collect();
    let mut choices: Vec<Vec<Q>> = Vec::new();
    for (i, b) in ub.iter().enumerate() {
        let d = if i < snf.diag.len() { snf.diag[i] } else { 0 };
        if d == 0 {
            if !mod2(*b).is_zero() {
                return Ok(Vec::new());
            }
            if i < n {
                choices.push(vec![Q::zero()]);
            }
        } else {
            choices.push((0..d).map(|k| (b + q(2 * k)) / q(d)).collect());
        }
    }
    while choices.len() < n {
        choices.push(vec![Q::zero()]);
    }
    let total: usize = choices.iter().map(Vec::len).product();
    if total > 1 << 16 {
        return Err(LieError::OutOfScope(format!("{total} discrete solutions")));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for combo in itertools::Itertools::multi_cartesian_product(choices.iter().map(|c| c.iter().copied())) {
        let x: Vec<Q> = (0..n)
            .map(|i| (0..n).fold(Q::zero(), |acc, j| acc + combo[j] * snf.v[i][j]))
            .map(mod2)
            .collect();
        if !seen.insert(x.clone()) {
            continue;
        }
        let aut = lift.twist(rs, &Coweight(x));
        for p in prescriptions {
            let idx = rs.index_of(&p.root).expect("checked above");
            if !mod2(aut.phase[idx] - p.phase).is_zero() {
                return Err(LieError::Internal("prescription violated by solver output".into()));
            }
        }
        out.push(Involution::new(aut)?);
    }
    Ok(out)
}

/// Extends prescribed phases on extended nodes to an involution.
///
/// `node_phases` holds `(node, phase)` with node `0` standing for `α_0 = −δ`. The first
/// solution in the solver's order is returned.
pub fn extend_to_involution(
    rs: &RootSystem,
    table: &StructureTable,
    cmap: &CartanMap,
    node_phases: &[(usize, Q)],
) -> Result<Involution> {
    let nodes = rs.extended_base();
    let pres: Vec<Prescription> = node_phases
        .iter()
        .map(|(k, p)| Prescription { root: nodes[*k].clone(), phase: *p })
        .collect();
    solve_involutions(rs, table, cmap, &pres)?
        .into_iter()
        .next()
        .ok_or_else(|| LieError::Inconsistent("no phase assignment squares to the identity".into()))
}

/// Dimension and type of a fixed-point algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedAlgebraReport {
    /// Dimension by direct count of fixed vectors.
    pub dim: usize,
    /// Dimension by the closed formula in terms of positive roots.
    pub dim_formula: usize,
    /// Dimension of the `+1` eigenspace on the torus.
    pub rank_plus: usize,
    /// Rank of the fixed algebra.
    pub rank: usize,
    /// Simple roots of the fixed algebra, as doubled restrictions in root coordinates.
    pub restricted_base: Vec<Vec<i64>>,
    pub types: Vec<SimpleType>,
    pub abelian_dim: usize,
}

impl FixedAlgebraReport {
    /// Renders as `E7+A1` or `A5+R^2`.
    pub fn label(&self) -> String {
        crate::labels::render(&self.types, self.abelian_dim)
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn strongly_orthogonal(rs: &RootSystem, a: &[i64], b: &[i64]) -> bool {
    let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    rs.inner(a, b).is_zero() && !rs.is_root(&add(a, b)) && !rs.is_root(&diff)
}

/// Fixed-point algebra of an involution on the span of the torus and the roots in `members`.
///
/// `members` must be a closed symmetric set of roots stable under the involution.
pub fn fixed_algebra(rs: &RootSystem, inv: &Involution, members: &[bool]) -> Result<FixedAlgebraReport> {
    let theta = &inv.aut;
    let m = &theta.cmap.matrix;
    let rank_plus = theta.cmap.dim_plus();
    let mut moved = 0usize;
    let mut imaginary = 0usize;
    let mut fixed0 = 0usize;
    let (mut pos_fixed, mut pos_fixed0, mut pos_count) = (0usize, 0usize, 0usize);
    for r in 0..rs.roots.len() {
        if !members[r] {
            continue;
        }
        if !members[theta.perm[r]] {
            return Err(LieError::Inconsistent("member set is not stable".into()));
        }
        let p = theta.perm[r];
        let is_pos = rs.is_positive(r);
        if is_pos {
            pos_count += 1;
        }
        if p == r {
            if theta.phase[r].is_zero() {
                fixed0 += 1;
                if is_pos {
                    pos_fixed0 += 1;
                }
            }
            if is_pos {
                pos_fixed += 1;
            }
        } else if p == rs.neg(r) {
            imaginary += 1;
        } else {
            moved += 1;
        }
    }
    let dim = rank_plus + moved / 2 + imaginary / 2 + fixed0;
    let dim_formula = rank_plus + pos_count + 2 * pos_fixed0 - pos_fixed;

    // Cayley reduction: trade imaginary roots for a larger torus.
    let mut mp = m.clone();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    loop {
        let found = (0..rs.n_pos).find(|&r| {
            members[r] && {
                let img = mat_vec(&mp, &rs.roots[r]);
                img.iter().zip(&rs.roots[r]).all(|(a, b)| *a == -b)
            }
        });
        let Some(r) = found else { break };
        mp = mat_mul(&mp, &reflection_matrix(rs, &rs.roots[r]));
        chosen.push(rs.roots[r].clone());
    }
    let rank = CartanMap { matrix: mp.clone() }.dim_plus();
    let mut fixed_members = vec![false; rs.roots.len()];
    let mut orbit_vectors: Vec<Vec<i64>> = Vec::new();
    let mut moved_p = 0usize;
    for r in 0..rs.roots.len() {
        if !members[r] {
            continue;
        }
        let img = mat_vec(&mp, &rs.roots[r]);
        if img == rs.roots[r] {
            fixed_members[r] = true;
        } else {
            moved_p += 1;
            if rs.roots[r] < img {
                orbit_vectors.push(add(&rs.roots[r], &img));
            }
        }
    }
    let fbase = rs.indecomposable(&fixed_members);
    let coords = base_coordinates(rs, &fbase, &fixed_members)?;
    let mut known: Vec<(usize, Q)> = Vec::new();
    for r in 0..rs.n_pos {
        if fixed_members[r]
            && theta.perm[r] == r
            && chosen.iter().all(|b| strongly_orthogonal(rs, &rs.roots[r], b))
        {
            known.push((r, theta.phase[r]));
        }
    }
    let b = fbase.len();
    let mut results: BTreeSet<(Vec<SimpleType>, usize)> = BTreeSet::new();
    let mut last_base = Vec::new();
    for bits in 0u32..(1u32 << b) {
        let eps = |r: usize| -> i64 {
            coords[r].iter().enumerate().map(|(i, c)| c * i64::from((bits >> i) & 1)).sum::<i64>().rem_euclid(2)
        };
        if known.iter().any(|&(r, p)| q(eps(r)) != p) {
            continue;
        }
        let mut vectors = orbit_vectors.clone();
        for r in 0..rs.n_pos {
            if fixed_members[r] && eps(r) == 0 {
                let v: Vec<i64> = rs.roots[r].iter().map(|x| 2 * x).collect();
                vectors.push(v.iter().map(|x| -x).collect());
                vectors.push(v);
            }
        }
        let cand_dim = rank + moved_p / 2 + (vectors.len() - orbit_vectors.len());
        if cand_dim != dim {
            continue;
        }
        if let Some((types, base)) = root_system_type(rs, &vectors)? {
            let ss_rank: usize = types.iter().map(|t| t.rank).sum();
            if ss_rank > rank {
                continue;
            }
            results.insert((types, rank - ss_rank));
            last_base = base;
        }
    }
    if results.len() != 1 {
        return Err(LieError::Internal(format!(
            "fixed algebra type not determined ({} candidates)",
            results.len()
        )));
    }
    let (types, abelian_dim) = results.into_iter().next().expect("one result");
    if dim != dim_formula {
        return Err(LieError::Internal(format!("dimension count {dim} differs from formula {dim_formula}")));
    }
    Ok(FixedAlgebraReport {
        dim,
        dim_formula,
        rank_plus,
        rank,
        restricted_base: last_base,
        types,
        abelian_dim,
    })
}

/// Coordinates of every member positive root in terms of the base of the member set.
fn base_coordinates(rs: &RootSystem, base: &[Vec<i64>], members: &[bool]) -> Result<Vec<Vec<i64>>> {
    let n = rs.rank();
    let cols: QMat = (0..n).map(|i| base.iter().map(|b| q(b[i])).collect()).collect();
    let mut out = vec![Vec::new(); rs.roots.len()];
    for r in 0..rs.n_pos {
        if !members[r] {
            continue;
        }
        let rhs: Vec<Q> = rs.roots[r].iter().map(|&x| q(x)).collect();
        let sol = crate::linalg::q_solve(&cols, &rhs)
            .ok_or_else(|| LieError::Internal("root outside the span of its base".into()))?;
        out[r] = sol
            .iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(LieError::Internal("non-integral base coordinates".into()))
                }
            })
            .collect::<Result<Vec<i64>>>()?;
    }
    Ok(out)
}

/// Identifies the root system formed by `vectors`, or `None` if they do not form one.
fn root_system_type(rs: &RootSystem, vectors: &[Vec<i64>]) -> Result<Option<(Vec<SimpleType>, Vec<Vec<i64>>)>> {
    let set: HashSet<&Vec<i64>> = vectors.iter().collect();
    if set.len() != vectors.len() {
        return Ok(None);
    }
    let functional = |v: &[i64]| -> i128 {
        v.iter().rev().fold(0i128, |acc, &x| acc * 64 + i128::from(x))
    };
    let positive: Vec<&Vec<i64>> = vectors.iter().filter(|v| functional(v) > 0).collect();
    if positive.len() * 2 != vectors.len() {
        return Ok(None);
    }
    let simple: Vec<Vec<i64>> = positive
        .iter()
        .filter(|c| {
            !positive.iter().any(|a| {
                let d: Vec<i64> = c.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                set.contains(&d) && functional(&d) > 0
            })
        })
        .map(|v| (*v).clone())
        .collect();
    let types = match identify_type(&simple, |a, b| rs.inner(a, b)) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let rank: usize = types.iter().map(|t| t.rank).sum();
    let roots: usize = types.iter().map(|t| t.dim() - t.rank).sum();
    if rank != simple.len() || roots != vectors.len() {
        return Ok(None);
    }
    Ok(Some((types, simple)))
}

/// Fixed algebra `g^τ`.
pub fn dim_fixed(rs: &RootSystem, inv: &Involution) -> Result<FixedAlgebraReport> {
    fixed_algebra(rs, inv, &vec![true; rs.roots.len()])
}

/// Roots of `h = g^σ` for `σ = τ_{(1/2)H}`, i.e. `α(H) ≡ 0 mod 4`.
pub fn h_members(rs: &RootSystem, h: &Coweight) -> Vec<bool> {
    rs.roots
        .iter()
        .map(|r| {
            let v = crate::rootsys::eval(r, h).expect("rank");
            v.is_integer() && v.to_integer().rem_euclid(4) == 0
        })
        .collect()
}

/// Fixed algebra `h ∩ g^τ` for `σ = τ_{(1/2)H}`.
pub fn dim_h_cap_fixed(rs: &RootSystem, inv: &Involution, h: &Coweight) -> Result<FixedAlgebraReport> {
    let members = h_members(rs, h);
    for (r, &p) in inv.aut.perm.iter().enumerate() {
        if members[r] != members[p] {
            return Err(LieError::Inconsistent("the involution does not preserve h".into()));
        }
    }
    fixed_algebra(rs, inv, &members)
}

/// Nontrivial involutive lattice maps preserving the simple system of `h` up to conjugacy.
///
/// These are the possible restrictions to the torus of involutions preserving
/// `h = g^σ`, `σ = τ_{(1/2)K_i}`, other than the identity.
pub fn table1_candidates(rs: &RootSystem, node: usize) -> Result<Vec<CartanMap>> {
    let stab = stabilizer_of_h(rs, node)?;
    let involutions: Vec<&CartanMap> = stab.iter().filter(|c| c.is_involution() && **c != CartanMap::identity(rs)).collect();
    let mut reps: Vec<CartanMap> = Vec::new();
    let mut covered: HashSet<IMat> = HashSet::new();
    for c in involutions {
        if covered.contains(&c.matrix) {
            continue;
        }
        for a in &stab {
            let inv = int_inverse(&a.matrix).expect("unimodular");
            covered.insert(mat_mul(&mat_mul(&a.matrix, &c.matrix), &inv));
        }
        reps.push(c.clone());
    }
    Ok(reps)
}

/// Simple system of `h = g^σ` for `σ = τ_{(1/2)K_i}`: extended nodes with `α(K_i) ≡ 0 mod 4`.
pub fn h_simple_system(rs: &RootSystem, node: usize) -> Vec<Vec<i64>> {
    let h = Coweight::fundamental(rs.rank(), node);
    rs.extended_base()
        .into_iter()
        .filter(|v| {
            let x = crate::rootsys::eval(v, &h).expect("rank");
            x.to_integer().rem_euclid(4) == 0
        })
        .collect()
}

/// Automorphisms of the root system mapping the simple system of `h` onto itself.
pub fn stabilizer_of_h(rs: &RootSystem, node: usize) -> Result<Vec<CartanMap>> {
    let n = rs.rank();
    let nodes = h_simple_system(rs, node);
    let k = nodes.len();
    let cart: Vec<Vec<Q>> = (0..k)
        .map(|a| (0..k).map(|b| q(2) * rs.inner(&nodes[a], &nodes[b]) / rs.inner(&nodes[b], &nodes[b])).collect())
        .collect();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut used = vec![false; k];
    fn extend(
        cart: &[Vec<Q>],
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = cart.len();
        let i = current.len();
        if i == k {
            out.push(current.clone());
            return;
        }
        for t in 0..k {
            if used[t] {
                continue;
            }
            if (0..i).all(|j| cart[i][j] == cart[t][current[j]] && cart[j][i] == cart[current[j]][t]) {
                used[t] = true;
                current.push(t);
                extend(cart, current, used, out);
                current.pop();
                used[t] = false;
            }
        }
    }
    extend(&cart, &mut current, &mut used, &mut perms);
    // Choose n linearly independent nodes as a source basis; the rest of the map is
    // completed by an image of α_i when the nodes do not span.
    let node_rows: QMat = nodes.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
    let spans = q_rank(&node_rows) == n;
    let extra = crate::linalg::identity(n)[node - 1].clone();
    let mut out: Vec<CartanMap> = Vec::new();
    let mut seen: HashSet<IMat> = HashSet::new();
    for p in &perms {
        let mut images: Vec<(Vec<i64>, Vec<i64>)> = (0..k).map(|a| (nodes[a].clone(), nodes[p[a]].clone())).collect();
        let candidates: Vec<Option<Vec<i64>>> = if spans {
            vec![None]
        } else {
            rs.roots.iter().map(|r| Some(r.clone())).collect()
        };
        for cand in candidates {
            if let Some(c) = &cand {
                images.push((extra.clone(), c.clone()));
            }
            if let Some(m) = solve_linear_map(n, &images) {
                if !seen.contains(&m) {
                    if let Ok(cm) = CartanMap::new(rs, m.clone()) {
                        seen.insert(m);
                        out.push(cm);
                    }
                }
            }
            if cand.is_some() {
                images.pop();
            }
        }
    }
    out.sort_by(|a, b| a.matrix.cmp(&b.matrix));
    let id = CartanMap::identity(rs);
    if let Some(pos) = out.iter().position(|c| *c == id) {
        let c = out.remove(pos);
        out.insert(0, c);
    }
    Ok(out)
}

fn solve_linear_map(n: usize, pairs: &[(Vec<i64>, Vec<i64>)]) -> Option<IMat> {
    let s_rows: QMat = pairs.iter().map(|(s, _)| s.iter().map(|&x| q(x)).collect()).collect();
    if q_rank(&s_rows) < n {
        return None;
    }
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        let rhs: Vec<Q> = pairs.iter().map(|(_, t)| q(t[i])).collect();
        let row = crate::linalg::q_solve(&s_rows, &rhs)?;
        for (j, x) in row.iter().enumerate() {
            if !x.is_integer() {
                return None;
            }
            m[i][j] = x.to_integer();
        }
    }
    pairs.iter().all(|(s, t)| mat_vec(&m, s) == *t).then_some(m)
}

/// Coweights `v_j` dual to a subset of simple roots and orthogonal to the other directions.
///
/// For the factor with simple roots `{α_j : j ∈ nodes}` the result satisfies
/// `α_i(v_j) = δ_{ij}` for `i ∈ nodes` and `v_j` is orthogonal to every coroot
/// direction outside the factor, so that `v_j = K_j + Σ_{i ∉ nodes} c_i K_i` with the
/// coefficients `c_i` fixed by orthogonality to the coroots `α_i^∨`, `i ∈ nodes`
/// complement being replaced by the centre direction.
pub fn solve_coweight_basis(rs: &RootSystem, factor: &[Vec<i64>]) -> Result<Vec<Coweight>> {
    let n = rs.rank();
    // v lies in the span of the coroots of the factor; impose α(v) = δ on the factor.
    let coroots: Vec<Coweight> = factor.iter().map(|a| rs.coroot_vec(a)).collect();
    let k = factor.len();
    let mut out = Vec::new();
    for j in 0..k {
        let mat: QMat = (0..k)
            .map(|i| (0..k).map(|l| crate::rootsys::eval(&factor[i], &coroots[l]).expect("rank")).collect())
            .collect();
        let rhs: Vec<Q> = (0..k).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        let c = crate::linalg::q_solve(&mat, &rhs)
            .ok_or_else(|| LieError::Internal("singular factor".into()))?;
        let mut v = Coweight::zero(n);
        for (l, cl) in c.iter().enumerate() {
            v = v.add(&coroots[l].scale(*cl));
        }
        out.push(v);
    }
    Ok(out)
}

/// Representatives `h` of inner involutions `τ_h` commuting with `σ`, one per class.
///
/// Classes are taken under conjugation by the Weyl group of `h` together with
/// congruence modulo the even coweight lattice. Each representative is chosen with the
/// fewest fundamental coweights and then lexicographically smallest support.
pub fn enumerate_inner_classes(rs: &RootSystem, node: usize) -> Result<Vec<Coweight>> {
    let n = rs.rank();
    let gens: Vec<IMat> = h_simple_system(rs, node)
        .iter()
        .map(|a| transpose(&reflection_matrix(rs, a)))
        .collect();
    let gens2: Vec<Vec<Vec<u8>>> = gens
        .iter()
        .map(|g| g.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect())
        .collect();
    let orbits = f2_orbits(n, &gens2, &[]);
    let mut out = Vec::new();
    for orbit in orbits {
        let best = orbit
            .iter()
            .min_by_key(|v| {
                let support: Vec<usize> = (0..n).filter(|&i| v[i] == 1).collect();
                (support.len(), support)
            })
            .expect("nonempty orbit");
        if best.iter().all(|&b| b == 0) {
            continue;
        }
        let terms: Vec<(usize, Q)> = (0..n).filter(|&i| best[i] == 1).map(|i| (i + 1, Q::one())).collect();
        out.push(Coweight::from_terms(n, &terms));
    }
    out.sort_by_key(|c| {
        let support: Vec<usize> = (0..n).filter(|&i| !c.0[i].is_zero()).collect();
        (support.len(), support)
    });
    Ok(out)
}

/// Orbits on `F₂ⁿ` of the group generated by linear maps and affine maps.
pub(crate) fn f2_orbits(n: usize, linear: &[Vec<Vec<u8>>], affine: &[(Vec<Vec<u8>>, Vec<u8>)]) -> Vec<Vec<Vec<u8>>> {
    let size = 1usize << n;
    let to_vec = |x: usize| -> Vec<u8> { (0..n).map(|i| ((x >> i) & 1) as u8).collect() };
    let to_idx = |v: &[u8]| -> usize { v.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum() };
    let apply = |m: &Vec<Vec<u8>>, v: &[u8]| -> Vec<u8> {
        m.iter().map(|row| row.iter().zip(v).fold(0u8, |acc, (a, b)| acc ^ (a & b))).collect()
    };
    let mut comp = vec![usize::MAX; size];
    let mut orbits = Vec::new();
    for s in 0..size {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut head = 0;
        while head < members.len() {
            let v = to_vec(members[head]);
            head += 1;
            let mut imgs: Vec<Vec<u8>> = linear.iter().map(|m| apply(m, &v)).collect();
            for (m, t) in affine {
                let mut w = apply(m, &v);
                for (a, b) in w.iter_mut().zip(t) {
                    *a ^= b;
                }
                imgs.push(w);
            }
            for w in imgs {
                let i = to_idx(&w);
                if comp[i] == usize::MAX {
                    comp[i] = id;
                    members.push(i);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members.into_iter().map(to_vec).collect());
    }
    orbits
}

/// The six lattice maps of the possible restrictions `τ|_t ≠ Id` for `dim z = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Table1Type {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

/// Image of a simple root: an extended node (`0` is `α_0`) or an explicit root.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Image {
    Node(usize),
    Root(Vec<i64>),
}

const BETA1: [i64; 8] = [1, 2, 3, 4, 3, 2, 1, 0];
const BETA2: [i64; 8] = [1, 1, 2, 3, 3, 3, 2, 1];
const BETA3: [i64; 7] = [1, 1, 2, 3, 2, 1, 0];
const BETA4: [i64; 4] = [1, 2, 3, 1];

impl Table1Type {
    /// All six types in order.
    pub const ALL: [Table1Type; 6] =
        [Table1Type::I, Table1Type::II, Table1Type::III, Table1Type::IV, Table1Type::V, Table1Type::VI];

    /// Algebra and `σ` node of the type.
    pub fn pair(self) -> (&'static str, usize) {
        match self {
            Table1Type::I | Table1Type::II | Table1Type::III => ("E7", 4),
            Table1Type::IV => ("E8", 3),
            Table1Type::V => ("E8", 6),
            Table1Type::VI => ("F4", 3),
        }
    }

    fn images(self) -> Vec<Image> {
        use Image::{Node, Root};
        match self {
            Table1Type::I => vec![Node(6), Node(2), Node(5), Node(4), Node(3), Node(1), Node(0)],
            Table1Type::II => vec![Node(1), Node(2), Node(0), Root(BETA3.to_vec()), Node(7), Node(6), Node(5)],
            Table1Type::III => vec![Node(6), Node(2), Node(7), Root(BETA3.to_vec()), Node(0), Node(1), Node(3)],
            Table1Type::IV => {
                vec![Node(1), Node(0), Root(BETA1.to_vec()), Node(8), Node(7), Node(6), Node(5), Node(4)]
            }
            Table1Type::V => {
                vec![Node(1), Node(5), Node(3), Node(4), Node(2), Root(BETA2.to_vec()), Node(0), Node(8)]
            }
            Table1Type::VI => vec![Node(1), Node(0), Root(BETA4.to_vec()), Node(4)],
        }
    }

    /// Images of `α_1, …, α_n` in root coordinates.
    pub fn simple_images(self, rs: &RootSystem) -> Vec<Vec<i64>> {
        let nodes = rs.extended_base();
        self.images()
            .into_iter()
            .map(|im| match im {
                Image::Node(k) => nodes[k].clone(),
                Image::Root(v) => v,
            })
            .collect()
    }

    /// The lattice map, validated as an automorphism of the root system.
    pub fn cartan_map(self, rs: &RootSystem) -> Result<CartanMap> {
        let images: Vec<(usize, Vec<i64>)> =
            self.simple_images(rs).into_iter().enumerate().map(|(j, v)| (j + 1, v)).collect();
        CartanMap::from_node_images(rs, &images)
    }
}

impl std::fmt::Display for Table1Type {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Table1Type::I => "I",
            Table1Type::II => "II",
            Table1Type::III => "III",
            Table1Type::IV => "IV",
            Table1Type::V => "V",
            Table1Type::VI => "VI",
        };
        write!(f, "{s}")
    }
}

/// The named outer involutions used as base points of the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedMap {
    Tau1,
    Tau2,
    Tau3,
    Tau4,
    Phi,
    Psi,
}

impl NamedMap {
    /// All named maps.
    pub const ALL: [NamedMap; 6] =
        [NamedMap::Tau1, NamedMap::Tau2, NamedMap::Tau3, NamedMap::Tau4, NamedMap::Phi, NamedMap::Psi];

    /// Algebra and `σ` node the map belongs to.
    pub fn pair(self) -> (&'static str, usize) {
        match self {
            NamedMap::Tau1 => ("E8", 3),
            NamedMap::Tau2 => ("E8", 6),
            NamedMap::Tau3 | NamedMap::Phi => ("E7", 4),
            NamedMap::Tau4 => ("F4", 3),
            NamedMap::Psi => ("E6", 4),
        }
    }

    /// Lattice map of the involution.
    pub fn cartan_map(self, rs: &RootSystem) -> Result<CartanMap> {
        match self {
            NamedMap::Tau1 => Table1Type::IV.cartan_map(rs),
            NamedMap::Tau2 => Table1Type::V.cartan_map(rs),
            NamedMap::Tau3 => Table1Type::II.cartan_map(rs),
            NamedMap::Tau4 => Table1Type::VI.cartan_map(rs),
            NamedMap::Phi => Table1Type::I.cartan_map(rs),
            NamedMap::Psi => {
                let n = rs.rank();
                let unit = |j: usize| {
                    let mut v = vec![0; n];
                    v[j - 1] = 1;
                    v
                };
                CartanMap::from_node_images(
                    rs,
                    &[(1, unit(6)), (2, unit(2)), (3, unit(5)), (4, unit(4)), (5, unit(3)), (6, unit(1))],
                )
            }
        }
    }

    /// Prescribed phases `(node, phase)` on extended nodes, `0` standing for `α_0`.
    pub fn node_phases(self) -> Vec<(usize, Q)> {
        let p = |v: &[(usize, i64)]| v.iter().map(|&(k, x)| (k, q(x))).collect();
        match self {
            NamedMap::Tau1 => p(&[(1, 1), (2, 0), (4, 0), (5, 0), (6, 1)]),
            NamedMap::Tau2 => p(&[(1, 1), (2, 0), (3, 1), (4, 1), (7, 0), (8, 1)]),
            NamedMap::Tau3 => p(&[(1, 1), (2, 1), (3, 0), (5, 0), (6, 1)]),
            NamedMap::Tau4 => p(&[(1, 1), (2, 0), (4, 1)]),
            NamedMap::Phi => p(&[(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (6, 0), (7, 0), (0, 0)]),
            NamedMap::Psi => p(&[(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (6, 0)]),
        }
    }

    /// Extra prescription fixing the free constant, as a phase on a root fixed by the map.
    pub fn normalization(self) -> Option<Prescription> {
        let pres = |root: &[i64]| Some(Prescription { root: root.to_vec(), phase: Q::zero() });
        match self {
            NamedMap::Tau1 => pres(&[1, 1, 2, 2, 1, 0, 0, 0]),
            NamedMap::Tau2 => pres(&[0, 1, 1, 2, 2, 2, 1, 0]),
            NamedMap::Tau3 => pres(&[0, 1, 1, 2, 1, 0, 0]),
            NamedMap::Tau4 => pres(&[0, 1, 2, 0]),
            NamedMap::Phi | NamedMap::Psi => None,
        }
    }

    /// All involutions satisfying the prescribed phases, before normalization.
    pub fn solutions(self, rs: &RootSystem, table: &StructureTable) -> Result<Vec<Involution>> {
        let nodes = rs.extended_base();
        let cmap = self.cartan_map(rs)?;
        let pres: Vec<Prescription> = self
            .node_phases()
            .into_iter()
            .map(|(k, p)| Prescription { root: nodes[k].clone(), phase: p })
            .collect();
        solve_involutions(rs, table, &cmap, &pres)
    }

    /// The normalized involution.
    pub fn build(self, rs: &RootSystem, table: &StructureTable) -> Result<Involution> {
        let nodes = rs.extended_base();
        let cmap = self.cartan_map(rs)?;
        let mut pres: Vec<Prescription> = self
            .node_phases()
            .into_iter()
            .map(|(k, p)| Prescription { root: nodes[k].clone(), phase: p })
            .collect();
        pres.extend(self.normalization());
        solve_involutions(rs, table, &cmap, &pres)?
            .into_iter()
            .next()
            .ok_or_else(|| LieError::Inconsistent(format!("{self:?} has no consistent phases")))
    }
}
