//! Graded Lie algebras attached to partitions of a fundamental system.
//!
//! A partition `Π = Π_0 ∪ Π_1 ∪ ⋯ ∪ Π_ν'` defines the height function
//! `h_Π(α) = Σ_p p · Σ_{α_j ∈ Π_p} n_j` on roots `α = Σ n_j α_j`, realized by the
//! characteristic element `Z = Σ_p p · Σ_{α_j ∈ Π_p} K_j`. The grade of `E_α` is
//! `α(Z)` and the kind `ν` is the grade of the highest root.
//!
//! Restricted-root data of the real forms relevant to the classification is read
//! from a shipped table rather than derived.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chevalley::{bracket, BasisElement, Element, Sampling, StructureTable};
use crate::error::{LieError, Result};
use crate::labels::Label;
use crate::linalg::{q, qf, q_rank, Q, QMat};
use crate::rootsys::{eval, Coweight, RootSystem, SimpleType};
use crate::torsion::{is_symmetric_or_3symmetric, SymmetryKind, TorsionAut};

const SATAKE: &str = include_str!("../data/satake.txt");

/// A partition of the simple roots into blocks `Π_0, Π_1, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    /// `blocks[p]` lists the (1-based) nodes of `Π_p`.
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates a partition of the nodes `1..=rank`.
    pub fn new(rank: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; rank];
        for &j in blocks.iter().flatten() {
            if j == 0 || j > rank {
                return Err(LieError::RankMismatch { expected: rank, found: j });
            }
            if seen[j - 1] {
                return Err(LieError::Parse(format!("node {j} appears twice in the partition")));
            }
            seen[j - 1] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(LieError::Parse("partition does not cover every node".into()));
        }
        if blocks.len() < 2 || blocks[1].is_empty() || blocks.last().is_some_and(|b| b.is_empty()) {
            return Err(LieError::Parse("Π_1 and the last block must be nonempty".into()));
        }
        Ok(Partition { blocks })
    }

    /// The partition with `Π_1 = {α_node}` and every other node in `Π_0`.
    pub fn singleton(rank: usize, node: usize) -> Result<Self> {
        let rest: Vec<usize> = (1..=rank).filter(|&j| j != node).collect();
        Partition::new(rank, vec![rest, vec![node]])
    }

    /// Block index of a node.
    pub fn weight(&self, node: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&node)).unwrap_or(0)
    }
}

/// A `ℤ`-grading of `g` by the eigenvalues of `ad Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gradation {
    /// Characteristic element.
    pub z: Coweight,
    /// Kind `ν`: the grade of the highest root.
    pub kind: i64,
    /// Dimension of each nonzero grade space.
    pub grade_dims: BTreeMap<i64, usize>,
}

impl Gradation {
    /// Grades with a nonzero space, in increasing order.
    pub fn spectrum(&self) -> Vec<i64> {
        self.grade_dims.iter().filter(|(_, &d)| d > 0).map(|(&p, _)| p).collect()
    }

    /// Grade of a root given in simple-root coordinates.
    pub fn grade(&self, root: &[i64]) -> i64 {
        eval(root, &self.z).expect("rank").to_integer()
    }
}

/// The gradation defined by a partition.
pub fn gradation_from_partition(rs: &RootSystem, p: &Partition) -> Gradation {
    let n = rs.rank();
    let z = Coweight((1..=n).map(|j| q(p.weight(j) as i64)).collect());
    let mut grade_dims = BTreeMap::new();
    grade_dims.insert(0, n);
    for r in &rs.roots {
        let g = eval(r, &z).expect("rank").to_integer();
        *grade_dims.entry(g).or_insert(0) += 1;
    }
    let kind = eval(&rs.highest, &z).expect("rank").to_integer();
    Gradation { z, kind, grade_dims }
}

/// Outcome of a grading check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingReport {
    /// Number of basis pairs whose bracket was checked.
    pub pairs: usize,
    /// Basis pairs `(x, y)` whose bracket leaves `g_{p+q}`, as display strings.
    pub violations: Vec<String>,
    /// Whether negating roots negates grades, so that the split Cartan involution reverses the grading.
    pub reversing: bool,
    /// Whether the grade dimensions sum to `dim g` and are symmetric.
    pub balanced: bool,
}

impl GradingReport {
    /// Whether every check passed.
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.reversing && self.balanced
    }
}

fn basis_grade(rs: &RootSystem, grad: &Gradation, b: BasisElement) -> i64 {
    match b {
        BasisElement::Cartan(_) => 0,
        BasisElement::RootVec(r) => grad.grade(&rs.roots[r]),
    }
}

fn element_respects(rs: &RootSystem, grad: &Gradation, e: &Element, degree: i64) -> bool {
    let cartan_ok = degree == 0 || e.h.iter().all(Zero::is_zero);
    cartan_ok && e.e.keys().all(|&r| grad.grade(&rs.roots[r]) == degree)
}

/// Checks `[g_p, g_q] ⊂ g_{p+q}` on basis pairs and the grade reversal under `α ↦ −α`.
pub fn check_grading(rs: &RootSystem, table: &StructureTable, grad: &Gradation, sampling: Sampling) -> GradingReport {
    let basis: Vec<BasisElement> = (0..rs.rank())
        .map(BasisElement::Cartan)
        .chain((0..rs.roots.len()).map(BasisElement::RootVec))
        .collect();
    let elems: Vec<Element> = basis.iter().map(|&b| Element::basis(rs, b)).collect();
    let mut violations = Vec::new();
    let mut pairs = 0;
    let mut check = |i: usize, j: usize| {
        pairs += 1;
        let degree = basis_grade(rs, grad, basis[i]) + basis_grade(rs, grad, basis[j]);
        let br = bracket(rs, table, &elems[i], &elems[j]);
        if !element_respects(rs, grad, &br, degree) {
            violations.push(format!("{:?} {:?}", basis[i], basis[j]));
        }
    };
    match sampling {
        Sampling::Exhaustive => {
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    check(i, j);
                }
            }
        }
        Sampling::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let i = rng.gen_range(0..basis.len());
                let j = rng.gen_range(0..basis.len());
                check(i, j);
            }
        }
    }
    let reversing = (0..rs.roots.len()).all(|r| grad.grade(&rs.roots[rs.neg(r)]) == -grad.grade(&rs.roots[r]));
    let total: usize = grad.grade_dims.values().sum();
    let symmetric = grad.grade_dims.iter().all(|(p, d)| grad.grade_dims.get(&-p) == Some(d));
    GradingReport { pairs, violations, reversing, balanced: total == rs.dim() && symmetric }
}

/// Restricted-root data of a real form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedRootData {
    /// Name of the real form, e.g. `e8(-24)`.
    pub label: String,
    /// Complex type of the algebra.
    pub algebra: SimpleType,
    pub restricted_type: SimpleType,
    /// Image `λ_p` (1-based) of each simple root, `None` for roots restricting to zero.
    pub restriction: Vec<Option<usize>>,
    /// Multiplicities of the restricted simple roots.
    pub multiplicities: Vec<usize>,
    /// Maximal compact subalgebra.
    pub k: Label,
}

impl fmt::Display for RestrictedRootData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, restricted {})", self.label, self.k, self.restricted_type)
    }
}

impl RestrictedRootData {
    /// Whether the restriction is a bijection of simple systems.
    pub fn is_split(&self) -> bool {
        self.restricted_type == self.algebra
            && self.restriction.iter().enumerate().all(|(j, r)| *r == Some(j + 1))
    }

    /// Simple roots restricting to `λ_p`.
    pub fn preimage(&self, p: usize) -> Vec<usize> {
        (1..=self.restriction.len()).filter(|&j| self.restriction[j - 1] == Some(p)).collect()
    }

    /// Coefficients `n_p` of the restricted highest root, restricted from `δ`.
    pub fn restricted_marks(&self, rs: &RootSystem) -> Vec<i64> {
        let marks = rs.marks();
        (1..=self.restricted_type.rank).map(|p| self.preimage(p).iter().map(|&j| marks[j - 1]).sum()).collect()
    }

    /// Checks the data against the restricted type and the dimension of `p`.
    ///
    /// The restricted marks must be the highest-root marks of the restricted type,
    /// and `dim g − dim k` must equal `dim a` plus the sum of multiplicities of
    /// positive restricted roots.
    pub fn validate(&self) -> Result<()> {
        let rs = RootSystem::new(self.algebra)?;
        let restricted = RootSystem::new(self.restricted_type)?;
        if self.restricted_marks(&rs) != restricted.marks() {
            return Err(LieError::Inconsistent(format!("{}: restricted marks differ from those of {}", self.label, self.restricted_type)));
        }
        let norms: Vec<Q> = (0..restricted.rank()).map(|p| restricted.norm(restricted.simple(p + 1))).collect();
        let mut sum = restricted.rank();
        for r in 0..restricted.n_pos {
            let norm = restricted.norm(r);
            let p = norms.iter().position(|x| *x == norm).expect("root length of a simple root");
            sum += self.multiplicities[p];
        }
        if sum + self.k.dim() != rs.dim() {
            return Err(LieError::Inconsistent(format!("{}: dim p = {} but dim g - dim k = {}", self.label, sum, rs.dim() - self.k.dim())));
        }
        Ok(())
    }
}

fn parse_satake_row(line: &str) -> Result<RestrictedRootData> {
    let bad = |what: &str| LieError::Parse(format!("restricted-root data: {what} in `{line}`"));
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    if fields.len() != 6 {
        return Err(bad("expected six fields"));
    }
    let algebra: SimpleType = fields[1].parse()?;
    let restricted_type: SimpleType = fields[2].parse()?;
    let mut restriction = vec![None; algebra.rank];
    for item in fields[3].split_whitespace() {
        let (a, l) = item.split_once('>').ok_or_else(|| bad("restriction entry"))?;
        let j: usize = a.strip_prefix('a').and_then(|s| s.parse().ok()).ok_or_else(|| bad("simple root"))?;
        let p: usize = l.strip_prefix('l').and_then(|s| s.parse().ok()).ok_or_else(|| bad("restricted root"))?;
        if j == 0 || j > algebra.rank || p == 0 || p > restricted_type.rank {
            return Err(bad("index out of range"));
        }
        restriction[j - 1] = Some(p);
    }
    let multiplicities: Vec<usize> =
        fields[4].split_whitespace().map(|s| s.parse().map_err(|_| bad("multiplicity"))).collect::<Result<_>>()?;
    if multiplicities.len() != restricted_type.rank {
        return Err(bad("one multiplicity per restricted simple root"));
    }
    Ok(RestrictedRootData {
        label: fields[0].to_string(),
        algebra,
        restricted_type,
        restriction,
        multiplicities,
        k: fields[5].parse()?,
    })
}

/// Parses restricted-root data in the shipped tabular format.
pub fn parse_satake(text: &str) -> Result<Vec<RestrictedRootData>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_satake_row)
        .collect()
}

/// The shipped restricted-root data.
pub fn restricted_root_data() -> Result<Vec<RestrictedRootData>> {
    parse_satake(SATAKE)
}

/// Looks up a real form by name.
pub fn real_form(label: &str) -> Result<RestrictedRootData> {
    restricted_root_data()?
        .into_iter()
        .find(|d| d.label == label)
        .ok_or_else(|| LieError::Unknown(format!("real form {label}")))
}

/// Lift `h_p = Σ K_j` over the simple roots `α_j` restricting to `λ_p`.
pub fn lift_restricted_coweight(data: &RestrictedRootData, p: usize) -> Result<Coweight> {
    let pre = data.preimage(p);
    if p == 0 || p > data.restricted_type.rank || pre.is_empty() {
        return Err(LieError::Unknown(format!("restricted simple root λ_{p} of {}", data.label)));
    }
    let n = data.algebra.rank;
    Ok(Coweight::from_terms(n, &pre.iter().map(|&j| (j, q(1))).collect::<Vec<_>>()))
}

/// Fate of a candidate `h` for `σ = τ_{(1/2)h}` in the graded construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradingVerdict {
    /// `g^σ` is the fixed algebra of an involution.
    Symmetric,
    /// `g^σ` is the fixed algebra of an automorphism of order three.
    ThreeSymmetric,
    /// The centre of `g^σ` does not have dimension one.
    WrongCenterDim(usize),
    /// `g^σ` is strictly smaller than the centralizer of its centre.
    NotACentralizer,
    /// `h` is the lift of `λ_p` with `n_p = 3`.
    Accepted { p: usize },
    /// `h` passes every test but is not the lift of a restricted simple root with `n_p = 3`.
    NoRestrictedMatch,
}

/// Whether the fixed algebra of `τ_{(1/2)h}` equals the centralizer of its centre.
///
/// The centralizer of the centre consists of the torus and the roots lying in the
/// rational span of the fixed roots.
pub fn is_centralizer(rs: &RootSystem, h: &Coweight) -> bool {
    let sigma = TorsionAut::new(h.scale(qf(1, 2)));
    let fixed: Vec<bool> = rs.roots.iter().map(|r| sigma.fixes(r)).collect();
    let base = rs.indecomposable(&fixed);
    let span: QMat = base.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
    let rank = q_rank(&span);
    rs.roots.iter().zip(&fixed).all(|(r, &f)| {
        if f {
            return true;
        }
        let mut ext = span.clone();
        ext.push(r.iter().map(|&x| q(x)).collect());
        q_rank(&ext) > rank
    })
}

/// Runs the elimination tests in order and reports the first that applies.
pub fn restricted_grading_filter(rs: &RootSystem, h: &Coweight, data: &RestrictedRootData) -> Result<GradingVerdict> {
    match is_symmetric_or_3symmetric(rs, h) {
        SymmetryKind::Symmetric => return Ok(GradingVerdict::Symmetric),
        SymmetryKind::ThreeSymmetric => return Ok(GradingVerdict::ThreeSymmetric),
        SymmetryKind::GenuinelyFour => {}
    }
    let fixed = TorsionAut::new(h.scale(qf(1, 2))).fixed_subalgebra(rs)?;
    if fixed.center_dim != 1 {
        return Ok(GradingVerdict::WrongCenterDim(fixed.center_dim));
    }
    if !is_centralizer(rs, h) {
        return Ok(GradingVerdict::NotACentralizer);
    }
    let marks = data.restricted_marks(rs);
    for p in 1..=data.restricted_type.rank {
        if marks[p - 1] == 3 && lift_restricted_coweight(data, p)? == *h {
            return Ok(GradingVerdict::Accepted { p });
        }
    }
    Ok(GradingVerdict::NoRestrictedMatch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::order4_normal_forms;

    #[test]
    fn singleton_kind_equals_mark() {
        for name in ["E6", "E7", "E8", "F4", "G2"] {
            let rs = RootSystem::of(name).unwrap();
            for (j, &m) in rs.marks().iter().enumerate() {
                let g = gradation_from_partition(&rs, &Partition::singleton(rs.rank(), j + 1).unwrap());
                assert_eq!(g.kind, m);
                assert_eq!(g.spectrum(), (-m..=m).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn grade_dimensions_balance() {
        let rs = RootSystem::of("E8").unwrap();
        let p = Partition::new(8, vec![vec![1, 3, 4, 5, 6, 7, 8], vec![], vec![2]]).unwrap_err();
        assert!(matches!(p, LieError::Parse(_)));
        let p = Partition::new(8, vec![vec![1, 4, 5, 6, 7, 8], vec![2], vec![3]]).unwrap();
        let g = gradation_from_partition(&rs, &p);
        assert_eq!(g.kind, 3 + 2 * 4);
        assert_eq!(g.grade_dims.values().sum::<usize>(), 248);
        assert_eq!(g.grade_dims[&0] + 2 * g.grade_dims.range(1..).map(|(_, d)| d).sum::<usize>(), 248);
    }

    #[test]
    fn partition_rejects_bad_input() {
        assert!(Partition::new(2, vec![vec![1], vec![1]]).is_err());
        assert!(Partition::new(2, vec![vec![1], vec![]]).is_err());
        assert!(Partition::new(2, vec![vec![], vec![3]]).is_err());
    }

    #[test]
    fn g2_grading_exhaustive() {
        let rs = RootSystem::of("G2").unwrap();
        let t = StructureTable::new(&rs);
        let g = gradation_from_partition(&rs, &Partition::singleton(2, 1).unwrap());
        assert_eq!(g.kind, 3);
        let r = check_grading(&rs, &t, &g, Sampling::Exhaustive);
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.pairs, 14 * 14);
    }

    #[test]
    fn abelian_kind_one() {
        let rs = RootSystem::of("E7").unwrap();
        let t = StructureTable::new(&rs);
        let g = gradation_from_partition(&rs, &Partition::singleton(7, 7).unwrap());
        assert_eq!(g.kind, 1);
        assert!(check_grading(&rs, &t, &g, Sampling::Random { samples: 2000, seed: 3 }).ok());
        let plus: Vec<usize> = (0..rs.roots.len()).filter(|&r| g.grade(&rs.roots[r]) == 1).collect();
        for &a in &plus {
            for &b in &plus {
                assert!(t.sum(a, b).is_none());
            }
        }
    }

    #[test]
    fn satake_data_is_consistent() {
        let data = restricted_root_data().unwrap();
        assert_eq!(data.len(), 8);
        for d in &data {
            d.validate().unwrap();
        }
        assert_eq!(data.iter().filter(|d| d.is_split()).count(), 5);
    }

    #[test]
    fn corrupted_satake_data_is_rejected() {
        let mut d = real_form("e7(-5)").unwrap();
        d.multiplicities[2] = 2;
        assert!(d.validate().is_err());
        let mut d = real_form("e8(-24)").unwrap();
        d.restriction.swap(0, 6);
        assert!(d.validate().is_err());
        assert!(parse_satake("x | E8 | F4 | a1>l9 | 1 1 1 1 | so(16)").is_err());
    }

    #[test]
    fn lifts() {
        let d = real_form("e6(2)").unwrap();
        let rs = RootSystem::of("E6").unwrap();
        assert_eq!(lift_restricted_coweight(&d, 4).unwrap(), Coweight::parse(6, "K1 + K6").unwrap());
        assert_eq!(lift_restricted_coweight(&d, 2).unwrap(), Coweight::fundamental(6, 4));
        assert_eq!(d.restricted_marks(&rs), vec![2, 3, 4, 2]);
        let d = real_form("e8(-24)").unwrap();
        assert_eq!(lift_restricted_coweight(&d, 2).unwrap(), Coweight::fundamental(8, 7));
        assert!(lift_restricted_coweight(&d, 5).is_err());
        let d = real_form("f4(4)").unwrap();
        for p in 1..=4 {
            assert_eq!(lift_restricted_coweight(&d, p).unwrap(), Coweight::fundamental(4, p));
        }
    }

    #[test]
    fn filter_examples() {
        let rs = RootSystem::of("E6").unwrap();
        let d = real_form("e6(2)").unwrap();
        let h = Coweight::parse(6, "K3 + K5").unwrap();
        assert_eq!(restricted_grading_filter(&rs, &h, &d).unwrap(), GradingVerdict::NotACentralizer);
        assert_eq!(restricted_grading_filter(&rs, &Coweight::fundamental(6, 1), &d).unwrap(), GradingVerdict::Symmetric);
        assert_eq!(restricted_grading_filter(&rs, &Coweight::fundamental(6, 4), &d).unwrap(), GradingVerdict::Accepted { p: 2 });
        let rs = RootSystem::of("E8").unwrap();
        let d = real_form("e8(8)").unwrap();
        assert_eq!(restricted_grading_filter(&rs, &Coweight::fundamental(8, 3), &d).unwrap(), GradingVerdict::WrongCenterDim(0));
        assert_eq!(restricted_grading_filter(&rs, &Coweight::fundamental(8, 2), &d).unwrap(), GradingVerdict::Accepted { p: 2 });
    }

    #[test]
    fn accepted_candidates_have_mark_three() {
        for d in restricted_root_data().unwrap() {
            let rs = RootSystem::new(d.algebra).unwrap();
            for form in order4_normal_forms(&rs).unwrap() {
                if let GradingVerdict::Accepted { p } = restricted_grading_filter(&rs, &form.h, &d).unwrap() {
                    assert_eq!(d.restricted_marks(&rs)[p - 1], 3);
                    assert_eq!(TorsionAut::new(form.h.scale(qf(1, 2))).fixed_subalgebra(&rs).unwrap().center_dim, 1);
                }
            }
        }
    }
}
