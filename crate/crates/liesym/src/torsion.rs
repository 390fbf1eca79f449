//! Inner automorphisms of finite order `τ_H = Ad(exp π√−1 H)`.
//!
//! `τ_H` multiplies `E_α` by `e^{π√−1 α(H)}`, so it only depends on `H`
//! modulo the even coweight lattice. This module computes phases, orders,
//! fixed subalgebras and the normal forms for automorphisms of order two and
//! four.

use itertools::Itertools;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{mod2, q, qf, Q};
use crate::rootsys::{eval, identify_type, Coweight, RootSystem, SimpleType};
use crate::weyl::find_weyl_element;

pub use crate::weyl::congruent_mod2 as congruent_mod_2pi;

/// The inner automorphism `τ_H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionAut {
    pub h: Coweight,
}

/// Fixed subalgebra of a finite-order automorphism preserving the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSubalgebra {
    pub base: Vec<Vec<i64>>,
    pub types: Vec<SimpleType>,
    pub center_dim: usize,
    pub dim: usize,
}

impl FixedSubalgebra {
    /// Renders as `A7+A1` or `A7+R`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.types.iter().map(|t| t.to_string()).collect();
        match self.center_dim {
            0 => {}
            1 => parts.push("R".into()),
            k => parts.push(format!("R^{k}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl TorsionAut {
    /// `τ_H` for the given coweight.
    pub fn new(h: Coweight) -> Self {
        TorsionAut { h }
    }

    /// `α(H)` reduced into `[0, 2)`.
    pub fn phase(&self, root: &[i64]) -> Q {
        mod2(eval(root, &self.h).expect("rank"))
    }

    /// Least `k ≥ 1` with `τ_H^k = 1`, tested on all roots of `rs`.
    pub fn order(&self, rs: &RootSystem) -> u64 {
        let mut k: i64 = 1;
        for r in &rs.roots[..rs.n_pos] {
            let p = self.phase(r);
            let needed = if p.is_zero() {
                1
            } else {
                let t = p / q(2);
                *t.denom()
            };
            k = k.lcm(&needed);
        }
        k as u64
    }

    /// Whether `τ_H` fixes `E_α`.
    pub fn fixes(&self, root: &[i64]) -> bool {
        self.phase(root).is_zero()
    }

    /// The fixed subalgebra with its type and center.
    pub fn fixed_subalgebra(&self, rs: &RootSystem) -> Result<FixedSubalgebra> {
        let members: Vec<bool> = rs.roots.iter().map(|r| self.fixes(r)).collect();
        fixed_from_members(rs, &members)
    }
}

/// Fixed subalgebra spanned by the torus and the roots flagged in `members`.
pub fn fixed_from_members(rs: &RootSystem, members: &[bool]) -> Result<FixedSubalgebra> {
    let base = rs.indecomposable(members);
    let types = identify_type(&base, |a, b| rs.inner(a, b))?;
    let count = members.iter().filter(|&&m| m).count();
    Ok(FixedSubalgebra {
        center_dim: rs.rank() - base.len(),
        dim: rs.rank() + count,
        base,
        types,
    })
}

/// Normal forms `K_i` with `m_i ∈ {1, 2}` for inner automorphisms of order two.
pub fn order2_normal_forms(rs: &RootSystem) -> Vec<Coweight> {
    rs.marks()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m == 1 || m == 2)
        .map(|(j, _)| Coweight::fundamental(rs.rank(), j + 1))
        .collect()
}

/// Shape label of an order-four normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    H0,
    H1,
    H2,
    H3,
    H4,
    H5,
}

/// Candidate `h` with `σ = τ_{(1/2)h}` of order four, tagged by shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order4Form {
    pub h: Coweight,
    pub shape: Shape,
}

/// All normal forms of order-four inner automorphisms `τ_{(1/2)h}`, deduplicated.
///
/// Two forms are merged only when they have the same fixed type and a Weyl word
/// maps one half-coweight to the other modulo the even coweight lattice.
pub fn order4_normal_forms(rs: &RootSystem) -> Result<Vec<Order4Form>> {
    let n = rs.rank();
    let marks = rs.marks();
    let with = |m: i64| -> Vec<usize> { (1..=n).filter(|&j| marks[j - 1] == m).collect() };
    let k = |j: usize| Coweight::fundamental(n, j);
    let mut cands: Vec<Order4Form> = Vec::new();
    let mut push = |h: Coweight, shape: Shape| cands.push(Order4Form { h, shape });
    for i in with(4) {
        push(k(i), Shape::H0);
    }
    for i in with(3) {
        push(k(i), Shape::H1);
    }
    for (j, l) in with(2).into_iter().tuple_combinations() {
        push(k(j).add(&k(l)), Shape::H1);
    }
    for i in with(1) {
        for j in with(2) {
            push(k(i).add(&k(j)), Shape::H2);
        }
    }
    for (i, j, l) in with(1).into_iter().tuple_combinations() {
        push(k(i).add(&k(j)).add(&k(l)), Shape::H3);
    }
    for i in with(1) {
        push(k(i), Shape::H4);
    }
    for i in with(2) {
        push(k(i), Shape::H5);
    }
    for (j, l) in with(1).into_iter().tuple_combinations() {
        push(k(j).add(&k(l)), Shape::H5);
    }
    for p in with(1) {
        for qn in with(1) {
            if p != qn {
                push(k(p).scale(q(2)).add(&k(qn)), Shape::H5);
            }
        }
    }
    let mut out: Vec<(Order4Form, FixedSubalgebra)> = Vec::new();
    for c in cands {
        let sigma = TorsionAut::new(c.h.scale(qf(1, 2)));
        if sigma.order(rs) != 4 {
            continue;
        }
        let fixed = sigma.fixed_subalgebra(rs)?;
        let dup = out.iter().any(|(o, f)| {
            f.types == fixed.types
                && f.center_dim == fixed.center_dim
                && find_weyl_element(
                    rs,
                    &[(c.h.scale(qf(1, 2)), o.h.scale(qf(1, 2)))],
                    true,
                    64,
                )
                .is_some()
        });
        if !dup {
            out.push((c, fixed));
        }
    }
    Ok(out.into_iter().map(|(c, _)| c).collect())
}

/// Whether an order-four `σ = τ_{(1/2)h}` has the fixed algebra of an involution or of an order-three automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    Symmetric,
    ThreeSymmetric,
    GenuinelyFour,
}

fn fixed_set(rs: &RootSystem, x: &Coweight) -> Vec<bool> {
    let t = TorsionAut::new(x.clone());
    rs.roots[..rs.n_pos].iter().map(|r| t.fixes(r)).collect()
}

/// Compares the fixed root set of `τ_{(1/2)h}` with those of all torsion elements of order two and three.
pub fn is_symmetric_or_3symmetric(rs: &RootSystem, h: &Coweight) -> SymmetryKind {
    let n = rs.rank();
    let target = fixed_set(rs, &h.scale(qf(1, 2)));
    let exists = |modulus: i64, scale: Q| {
        (0..n)
            .map(|_| 0..modulus)
            .multi_cartesian_product()
            .filter(|c| c.iter().any(|&x| x != 0))
            .any(|c| {
                let x = Coweight(c.iter().map(|&v| q(v) * scale).collect());
                let t = TorsionAut::new(x.clone());
                t.order(rs) == modulus as u64 && fixed_set(rs, &x) == target
            })
    };
    if exists(2, q(1)) {
        SymmetryKind::Symmetric
    } else if exists(3, qf(2, 3)) {
        SymmetryKind::ThreeSymmetric
    } else {
        SymmetryKind::GenuinelyFour
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(n: usize, s: &str) -> Coweight {
        Coweight::parse(n, s).unwrap()
    }

    #[test]
    fn phases() {
        let e8 = RootSystem::of("E8").unwrap();
        let s = TorsionAut::new(cw(8, "1/2*K3"));
        assert_eq!(s.phase(&e8.highest), q(0));
        let g2 = RootSystem::of("G2").unwrap();
        let s = TorsionAut::new(cw(2, "1/2*K1"));
        assert_eq!(s.phase(&g2.roots[g2.simple(1)]), qf(1, 2));
        assert_eq!(TorsionAut::new(cw(8, "K1")).phase(&[0, 1, 0, 0, 0, 0, 0, 0]), q(0));
    }

    #[test]
    fn orders() {
        let e8 = RootSystem::of("E8").unwrap();
        assert_eq!(TorsionAut::new(cw(8, "1/2*K3")).order(&e8), 4);
        assert_eq!(TorsionAut::new(cw(8, "K1")).order(&e8), 2);
        let e6 = RootSystem::of("E6").unwrap();
        assert_eq!(TorsionAut::new(cw(6, "2/3*K1 + 2/3*K6")).order(&e6), 3);
    }

    #[test]
    fn congruence() {
        assert!(congruent_mod_2pi(&cw(8, "-K3"), &cw(8, "K3")));
        assert!(!congruent_mod_2pi(&cw(8, "K1"), &cw(8, "K2")));
    }

    #[test]
    fn fixed_subalgebras() {
        let e8 = RootSystem::of("E8").unwrap();
        let f = TorsionAut::new(cw(8, "1/2*K3")).fixed_subalgebra(&e8).unwrap();
        assert_eq!(f.label(), "A7+A1");
        assert_eq!(f.center_dim, 0);
        let f = TorsionAut::new(cw(8, "1/2*K2")).fixed_subalgebra(&e8).unwrap();
        assert_eq!(f.label(), "A7+R");
        let f = TorsionAut::new(cw(8, "0")).fixed_subalgebra(&e8).unwrap();
        assert_eq!(f.label(), "E8");
        assert_eq!(f.dim, 248);
    }

    #[test]
    fn fixed_dimension_matches_types() {
        for (s, h) in [("E8", "1/2*K6"), ("E7", "1/2*K3"), ("F4", "1/2*K3"), ("E6", "1/2*K4")] {
            let rs = RootSystem::of(s).unwrap();
            let f = TorsionAut::new(cw(rs.rank(), h)).fixed_subalgebra(&rs).unwrap();
            let d: usize = f.types.iter().map(|t| t.dim()).sum::<usize>() + f.center_dim;
            assert_eq!(d, f.dim);
        }
    }

    #[test]
    fn order2_forms() {
        let e8 = RootSystem::of("E8").unwrap();
        assert_eq!(order2_normal_forms(&e8), vec![cw(8, "K1"), cw(8, "K8")]);
        let g2 = RootSystem::of("G2").unwrap();
        assert_eq!(order2_normal_forms(&g2), vec![cw(2, "K2")]);
        let a3 = RootSystem::of("A3").unwrap();
        assert_eq!(order2_normal_forms(&a3).len(), 3);
    }

    #[test]
    fn order4_forms_contain_mark_nodes() {
        let e8 = RootSystem::of("E8").unwrap();
        let forms = order4_normal_forms(&e8).unwrap();
        assert!(forms.iter().any(|f| f.h == cw(8, "K3")));
        assert!(forms.iter().any(|f| f.h == cw(8, "K6")));
        for f in &forms {
            assert_eq!(TorsionAut::new(f.h.scale(qf(1, 2))).order(&e8), 4);
        }
        let e7 = RootSystem::of("E7").unwrap();
        let forms = order4_normal_forms(&e7).unwrap();
        assert!(forms.iter().any(|f| f.h == cw(7, "K3")));
        assert!(forms.iter().any(|f| f.h == cw(7, "K5")));
    }

    #[test]
    fn symmetry_kinds() {
        let e7 = RootSystem::of("E7").unwrap();
        assert_eq!(is_symmetric_or_3symmetric(&e7, &cw(7, "K7")), SymmetryKind::Symmetric);
        assert_eq!(is_symmetric_or_3symmetric(&e7, &cw(7, "K4")), SymmetryKind::GenuinelyFour);
        let e6 = RootSystem::of("E6").unwrap();
        assert_eq!(is_symmetric_or_3symmetric(&e6, &cw(6, "2K1 + K6")), SymmetryKind::ThreeSymmetric);
        let e8 = RootSystem::of("E8").unwrap();
        assert_eq!(is_symmetric_or_3symmetric(&e8, &cw(8, "K3")), SymmetryKind::GenuinelyFour);
    }
}
