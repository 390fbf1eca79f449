//! Chevalley basis structure constants and the Lie bracket.
//!
//! Signs are fixed by declaring `N_{r,s} = p + 1 > 0` on every extraspecial
//! pair, where roots are ordered as in [`RootSystem::roots`]. All remaining
//! constants follow from the standard identities between structure constants.
//! Cartan elements are written in the basis of fundamental coweights, and
//! `[E_α, E_{−α}] = H_α` is the coroot of `α`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LieError, Result};
use crate::linalg::{q, Q};
use crate::rootsys::RootSystem;

/// Dense table of structure constants `N_{α,β}` indexed by root indices.
#[derive(Clone, Debug)]
pub struct StructureTable {
    size: usize,
    n: Vec<i64>,
    sum: Vec<i32>,
}

impl StructureTable {
    /// Computes all structure constants of `rs`.
    pub fn new(rs: &RootSystem) -> Self {
        let size = rs.roots.len();
        let mut sum = vec![-1i32; size * size];
        for a in 0..size {
            for b in 0..size {
                let v: Vec<i64> = rs.roots[a].iter().zip(&rs.roots[b]).map(|(x, y)| x + y).collect();
                if let Some(c) = rs.index_of(&v) {
                    sum[a * size + b] = c as i32;
                }
            }
        }
        let mut builder = Builder {
            rs,
            size,
            sum: &sum,
            memo: vec![None; size * size],
            extraspecial: vec![None; size],
        };
        for xi in 0..rs.n_pos {
            builder.extraspecial[xi] = (0..rs.n_pos).find_map(|r| {
                let s = builder.sum_idx(xi, rs.neg(r))?;
                rs.is_positive(s).then_some((r, s))
            });
        }
        let mut n = vec![0i64; size * size];
        for a in 0..size {
            for b in 0..size {
                if sum[a * size + b] >= 0 {
                    n[a * size + b] = builder.get(a, b);
                }
            }
        }
        StructureTable { size, n, sum }
    }

    /// `N_{a,b}`, zero when `a + b` is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.n[a * self.size + b]
    }

    /// Index of the root `a + b`, if it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.sum[a * self.size + b];
        (s >= 0).then_some(s as usize)
    }

    /// Number of roots.
    pub fn size(&self) -> usize {
        self.size
    }
}

struct Builder<'a> {
    rs: &'a RootSystem,
    size: usize,
    sum: &'a [i32],
    memo: Vec<Option<i64>>,
    extraspecial: Vec<Option<(usize, usize)>>,
}

impl Builder<'_> {
    fn sum_idx(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.sum[a * self.size + b];
        (s >= 0).then_some(s as usize)
    }

    fn string_p(&self, r: usize, s: usize) -> i64 {
        let mut p = 0;
        let mut cur = s;
        while let Some(next) = self.sum_idx(cur, self.rs.neg(r)) {
            p += 1;
            cur = next;
        }
        p
    }

    fn get(&mut self, a: usize, b: usize) -> i64 {
        if self.sum_idx(a, b).is_none() {
            return 0;
        }
        if let Some(v) = self.memo[a * self.size + b] {
            return v;
        }
        let v = self.compute(a, b);
        self.memo[a * self.size + b] = Some(v);
        v
    }

    fn compute(&mut self, a: usize, b: usize) -> i64 {
        let rs = self.rs;
        let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
        if !pa && !pb {
            return -self.get(rs.neg(a), rs.neg(b));
        }
        if pa && pb {
            if b < a {
                return -self.get(b, a);
            }
            let xi = self.sum_idx(a, b).expect("sum is a root");
            let (r1, s1) = self.extraspecial[xi].expect("extraspecial pair");
            if (a, b) == (r1, s1) {
                return self.string_p(a, b) + 1;
            }
            let nx = rs.norm(xi);
            let mut total = Q::zero();
            let n_es = self.get(r1, s1);
            if self.sum_idx(b, rs.neg(r1)).is_some() {
                let d = self.sum_idx(b, rs.neg(r1)).unwrap();
                let t = self.get(b, rs.neg(r1)) * self.get(a, rs.neg(s1));
                total += q(t) / rs.norm(d);
            }
            if self.sum_idx(a, rs.neg(r1)).is_some() {
                let d = self.sum_idx(a, rs.neg(r1)).unwrap();
                let t = self.get(rs.neg(r1), a) * self.get(b, rs.neg(s1));
                total += q(t) / rs.norm(d);
            }
            let v = nx / q(n_es) * total;
            return v.to_integer();
        }
        if !pa {
            return -self.get(b, a);
        }
        let c = self.sum_idx(a, b).expect("sum is a root");
        if rs.is_positive(c) {
            let v = rs.norm(c) / rs.norm(a) * q(-self.get(rs.neg(b), c));
            v.to_integer()
        } else {
            let v = rs.norm(c) / rs.norm(b) * q(self.get(rs.neg(c), a));
            v.to_integer()
        }
    }
}

/// A basis element of the Chevalley basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisElement {
    /// `H_{α_i}` for the simple root `α_i` (0-based).
    Cartan(usize),
    /// `E_α` for the root with the given index.
    RootVec(usize),
}

/// A linear combination with a Cartan part in coweight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    /// Cartan component in the basis of fundamental coweights.
    pub h: Vec<Q>,
    /// Root-vector components.
    pub e: BTreeMap<usize, Q>,
}

impl Element {
    /// The zero element of an algebra of the given rank.
    pub fn zero(rank: usize) -> Self {
        Element {
            h: vec![Q::zero(); rank],
            e: BTreeMap::new(),
        }
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.h.iter().all(Zero::is_zero) && self.e.values().all(Zero::is_zero)
    }

    /// The element `E_α`.
    pub fn root(rank: usize, idx: usize) -> Self {
        let mut x = Element::zero(rank);
        x.e.insert(idx, q(1));
        x
    }

    /// The basis element as an element.
    pub fn basis(rs: &RootSystem, b: BasisElement) -> Self {
        match b {
            BasisElement::Cartan(i) => Element {
                h: rs.coroot(rs.simple(i + 1)).0,
                e: BTreeMap::new(),
            },
            BasisElement::RootVec(r) => Element::root(rs.rank(), r),
        }
    }

    /// `self + c · other`.
    pub fn axpy(&mut self, c: Q, other: &Element) {
        for (x, y) in self.h.iter_mut().zip(&other.h) {
            *x += c * y;
        }
        for (k, v) in &other.e {
            let entry = self.e.entry(*k).or_insert_with(Q::zero);
            *entry += c * v;
        }
        self.e.retain(|_, v| !v.is_zero());
    }
}

/// Lie bracket of two elements.
pub fn bracket(rs: &RootSystem, table: &StructureTable, x: &Element, y: &Element) -> Element {
    let mut out = Element::zero(rs.rank());
    for (&a, &ca) in &x.e {
        let ha: Q = rs.roots[a].iter().zip(&y.h).fold(Q::zero(), |s, (n, c)| s + c * n);
        if !ha.is_zero() {
            let e = out.e.entry(a).or_insert_with(Q::zero);
            *e -= ca * ha;
        }
    }
    for (&b, &cb) in &y.e {
        let hb: Q = rs.roots[b].iter().zip(&x.h).fold(Q::zero(), |s, (n, c)| s + c * n);
        if !hb.is_zero() {
            let e = out.e.entry(b).or_insert_with(Q::zero);
            *e += cb * hb;
        }
    }
    for (&a, &ca) in &x.e {
        for (&b, &cb) in &y.e {
            if b == rs.neg(a) {
                let cor = rs.coroot(a);
                for (h, c) in out.h.iter_mut().zip(&cor.0) {
                    *h += ca * cb * c;
                }
            } else if let Some(s) = table.sum(a, b) {
                let e = out.e.entry(s).or_insert_with(Q::zero);
                *e += ca * cb * q(table.n(a, b));
            }
        }
    }
    out.e.retain(|_, v| !v.is_zero());
    out
}

/// Bracket of two basis elements.
pub fn bracket_basis(rs: &RootSystem, table: &StructureTable, x: BasisElement, y: BasisElement) -> Element {
    bracket(rs, table, &Element::basis(rs, x), &Element::basis(rs, y))
}

/// How Jacobi triples are chosen.
#[derive(Clone, Copy, Debug)]
pub enum Sampling {
    /// Every ordered triple of basis elements.
    Exhaustive,
    /// The given number of triples drawn from a seeded generator.
    Random { samples: usize, seed: u64 },
}

/// Outcome of a Jacobi sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub checked: usize,
    pub violations: Vec<(BasisElement, BasisElement, BasisElement)>,
}

fn all_basis(rs: &RootSystem) -> Vec<BasisElement> {
    (0..rs.rank())
        .map(BasisElement::Cartan)
        .chain((0..rs.roots.len()).map(BasisElement::RootVec))
        .collect()
}

fn jacobi_holds(rs: &RootSystem, t: &StructureTable, x: &Element, y: &Element, z: &Element) -> bool {
    let mut s = bracket(rs, t, x, &bracket(rs, t, y, z));
    s.axpy(q(1), &bracket(rs, t, y, &bracket(rs, t, z, x)));
    s.axpy(q(1), &bracket(rs, t, z, &bracket(rs, t, x, y)));
    s.is_zero()
}

/// Checks the Jacobi identity on basis triples.
pub fn verify_jacobi(rs: &RootSystem, table: &StructureTable, sampling: Sampling) -> JacobiReport {
    let basis = all_basis(rs);
    let elems: Vec<Element> = basis.iter().map(|&b| Element::basis(rs, b)).collect();
    let mut report = JacobiReport {
        checked: 0,
        violations: Vec::new(),
    };
    let check = |i: usize, j: usize, k: usize, report: &mut JacobiReport| {
        report.checked += 1;
        if !jacobi_holds(rs, table, &elems[i], &elems[j], &elems[k]) {
            report.violations.push((basis[i], basis[j], basis[k]));
        }
    };
    match sampling {
        Sampling::Exhaustive => {
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    for k in 0..basis.len() {
                        check(i, j, k, &mut report);
                    }
                }
            }
        }
        Sampling::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (i, j, k) = (
                    rng.gen_range(0..basis.len()),
                    rng.gen_range(0..basis.len()),
                    rng.gen_range(0..basis.len()),
                );
                check(i, j, k, &mut report);
            }
        }
    }
    report
}

/// Checks antisymmetry, negation symmetry and the root-string law on all stored pairs.
pub fn verify_table(rs: &RootSystem, table: &StructureTable) -> Result<()> {
    for a in 0..rs.roots.len() {
        for b in 0..rs.roots.len() {
            if table.sum(a, b).is_none() {
                continue;
            }
            let n = table.n(a, b);
            if n != -table.n(b, a) || n != -table.n(rs.neg(a), rs.neg(b)) {
                return Err(LieError::Internal(format!("sign law fails at ({a},{b})")));
            }
            let mut p = 0;
            let mut cur: Vec<i64> = rs.roots[b].clone();
            loop {
                let next: Vec<i64> = cur.iter().zip(&rs.roots[a]).map(|(x, y)| x - y).collect();
                if rs.is_root(&next) {
                    p += 1;
                    cur = next;
                } else {
                    break;
                }
            }
            if n.abs() != p + 1 {
                return Err(LieError::Internal(format!("|N| = {n} but p + 1 = {} at ({a},{b})", p + 1)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(rs: &RootSystem, v: &[i64]) -> usize {
        rs.index_of(v).unwrap()
    }

    #[test]
    fn rank_two_magnitudes() {
        let a2 = RootSystem::of("A2").unwrap();
        let t = StructureTable::new(&a2);
        assert_eq!(t.n(idx(&a2, &[1, 0]), idx(&a2, &[0, 1])).abs(), 1);
        let g2 = RootSystem::of("G2").unwrap();
        let t = StructureTable::new(&g2);
        assert_eq!(t.n(idx(&g2, &[1, 0]), idx(&g2, &[0, 1])).abs(), 1);
        assert_eq!(t.n(idx(&g2, &[1, 0]), idx(&g2, &[1, 1])).abs(), 2);
        assert_eq!(t.n(idx(&g2, &[1, 0]), idx(&g2, &[2, 1])).abs(), 3);
    }

    #[test]
    fn table_laws_hold() {
        for s in ["A3", "B3", "C3", "G2", "F4", "D4", "E6", "E7", "E8"] {
            let rs = RootSystem::of(s).unwrap();
            let t = StructureTable::new(&rs);
            verify_table(&rs, &t).unwrap();
        }
    }

    #[test]
    fn extraspecial_pairs_positive() {
        let rs = RootSystem::of("F4").unwrap();
        let t = StructureTable::new(&rs);
        for xi in 0..rs.n_pos {
            if rs.height(xi) == 1 {
                continue;
            }
            let r = (0..rs.n_pos)
                .find(|&r| t.sum(xi, rs.neg(r)).is_some_and(|s| rs.is_positive(s)))
                .unwrap();
            let s = t.sum(xi, rs.neg(r)).unwrap();
            assert!(t.n(r, s) > 0);
        }
    }

    #[test]
    fn bracket_examples() {
        let rs = RootSystem::of("E8").unwrap();
        let t = StructureTable::new(&rs);
        let a = idx(&rs, &[0, 0, 1, 1, 1, 0, 0, 0]);
        let b = bracket(&rs, &t, &Element::root(8, a), &Element::root(8, rs.neg(a)));
        assert_eq!(b.h, rs.coroot(a).0);
        assert!(b.e.is_empty());
        let hb = bracket_basis(&rs, &t, BasisElement::Cartan(0), BasisElement::RootVec(rs.simple(3)));
        assert_eq!(hb.e.get(&rs.simple(3)).copied(), Some(q(rs.cartan[2][0])));
        let top = rs.n_pos - 1;
        assert!(bracket_basis(&rs, &t, BasisElement::RootVec(rs.simple(1)), BasisElement::RootVec(top)).is_zero());
    }

    #[test]
    fn jacobi_exhaustive_small() {
        for s in ["A2", "B2", "G2", "A3", "B3", "C3"] {
            let rs = RootSystem::of(s).unwrap();
            let t = StructureTable::new(&rs);
            let r = verify_jacobi(&rs, &t, Sampling::Exhaustive);
            assert!(r.violations.is_empty(), "{s}: {:?}", r.violations.first());
        }
    }

    #[test]
    fn jacobi_exhaustive_f4() {
        let rs = RootSystem::of("F4").unwrap();
        let t = StructureTable::new(&rs);
        let r = verify_jacobi(&rs, &t, Sampling::Exhaustive);
        assert_eq!(r.checked, 52 * 52 * 52);
        assert!(r.violations.is_empty());
    }
}
