//! Root systems of simple type, fundamental coweights and type recognition.
//!
//! Simple roots are numbered as in Bourbaki. For E8 the chain is
//! α1–α3–α4–α5–α6–α7–α8 with α2 attached to α4, and E6, E7 are the
//! corresponding initial subdiagrams. Long roots have squared length 2.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LieError, Result};
use crate::linalg::{q, qf, IMat, QMat, Q};

/// Family letter of a simple type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A simple type such as `E8` or `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    /// Validates the rank restrictions of the family.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(LieError::InvalidType(format!("{}{}", family.letter(), rank)))
        }
    }

    /// Dimension of the complex simple Lie algebra of this type.
    pub fn dim(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 2),
            Family::B | Family::C => n * (2 * n + 1),
            Family::D => n * (2 * n - 1),
            Family::E => match n {
                6 => 78,
                7 => 133,
                _ => 248,
            },
            Family::F => 52,
            Family::G => 14,
        }
    }

    /// Sort key: larger rank first, then exceptional before classical.
    pub fn sort_key(self) -> (std::cmp::Reverse<usize>, std::cmp::Reverse<Family>) {
        (std::cmp::Reverse(self.rank), std::cmp::Reverse(self.family))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| LieError::InvalidType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| LieError::InvalidType(s.to_string()))?;
        SimpleType::new(fam, rank)
    }
}

/// An element of the coweight space written in the basis of fundamental coweights `K_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coweight(pub Vec<Q>);

impl Coweight {
    /// The zero coweight of the given rank.
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![Q::zero(); rank])
    }

    /// The fundamental coweight `K_j` (1-based index).
    pub fn fundamental(rank: usize, j: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[j - 1] = q(1);
        c
    }

    /// Sum of fundamental coweights with integer coefficients, given as `(index, coefficient)`.
    pub fn from_terms(rank: usize, terms: &[(usize, Q)]) -> Self {
        let mut c = Self::zero(rank);
        for &(j, a) in terms {
            c.0[j - 1] += a;
        }
        c
    }

    /// Rank of the ambient system.
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference.
    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Q) -> Coweight {
        Coweight(self.0.iter().map(|a| a * s).collect())
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Parses expressions such as `1/2*K3 + K6 - 2K1` or `0`.
    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let bad = || LieError::Parse(format!("bad coweight expression `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = Coweight::zero(rank);
        if compact == "0" {
            return Ok(out);
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            let kpos = body.find('K').ok_or_else(bad)?;
            let coef_str = body[..kpos].trim_end_matches('*');
            let coef = if coef_str.is_empty() {
                q(1)
            } else if let Some((n, d)) = coef_str.split_once('/') {
                let n: i64 = n.parse().map_err(|_| bad())?;
                let d: i64 = d.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                qf(n, d)
            } else {
                q(coef_str.parse().map_err(|_| bad())?)
            };
            let idx: usize = body[kpos + 1..].parse().map_err(|_| bad())?;
            if idx == 0 || idx > rank {
                return Err(LieError::RankMismatch {
                    expected: rank,
                    found: idx,
                });
            }
            out.0[idx - 1] += coef * q(sign);
        }
        Ok(out)
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if abs != q(1) {
                write!(f, "{abs}")?;
                if !abs.is_integer() {
                    write!(f, "*")?;
                }
            }
            write!(f, "K{}", j + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Evaluates the root with coefficients `n` on the coweight `h`.
pub fn eval(n: &[i64], h: &Coweight) -> Result<Q> {
    if n.len() != h.rank() {
        return Err(LieError::RankMismatch {
            expected: n.len(),
            found: h.rank(),
        });
    }
    Ok(n.iter().zip(&h.0).fold(Q::zero(), |acc, (&a, b)| acc + b * a))
}

/// The finite root datum of a simple type.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub ty: SimpleType,
    /// Cartan matrix `A[i][j] = ⟨α_i, α_j^∨⟩`.
    pub cartan: IMat,
    /// Gram matrix of the simple roots.
    pub gram: QMat,
    /// Positive roots followed by their negatives, in simple-root coordinates.
    ///
    /// Positive roots are sorted by height and then by decreasing coefficient vector.
    pub roots: Vec<Vec<i64>>,
    /// Number of positive roots.
    pub n_pos: usize,
    index: HashMap<Vec<i64>, usize>,
    /// Highest root.
    pub highest: Vec<i64>,
    coroots: Vec<Vec<Q>>,
    norms: Vec<Q>,
}

fn diagram(ty: SimpleType) -> (Vec<Q>, Vec<(usize, usize, u8)>) {
    let n = ty.rank;
    let mut norms = vec![q(2); n];
    let mut edges = Vec::new();
    let chain = |edges: &mut Vec<(usize, usize, u8)>, upto: usize| {
        for i in 0..upto.saturating_sub(1) {
            edges.push((i, i + 1, 1));
        }
    };
    match ty.family {
        Family::A => chain(&mut edges, n),
        Family::B => {
            chain(&mut edges, n);
            if n >= 2 {
                edges.pop();
                edges.push((n - 2, n - 1, 2));
            }
            norms[n - 1] = q(1);
        }
        Family::C => {
            chain(&mut edges, n);
            if n >= 2 {
                edges.pop();
                edges.push((n - 2, n - 1, 2));
                for x in norms.iter_mut().take(n - 1) {
                    *x = q(1);
                }
            }
        }
        Family::D => {
            if n >= 3 {
                chain(&mut edges, n - 1);
                edges.push((n - 3, n - 1, 1));
            }
        }
        Family::E => {
            edges.push((0, 2, 1));
            edges.push((1, 3, 1));
            for i in 2..n - 1 {
                edges.push((i, i + 1, 1));
            }
        }
        Family::F => {
            edges.push((0, 1, 1));
            edges.push((1, 2, 2));
            edges.push((2, 3, 1));
            norms[2] = q(1);
            norms[3] = q(1);
        }
        Family::G => {
            edges.push((0, 1, 3));
            norms[0] = qf(2, 3);
        }
    }
    (norms, edges)
}

impl RootSystem {
    /// Builds the full root datum of a simple type.
    pub fn new(ty: SimpleType) -> Result<Self> {
        let ty = SimpleType::new(ty.family, ty.rank)?;
        let n = ty.rank;
        let (norms, edges) = diagram(ty);
        let mut gram = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            gram[i][i] = norms[i];
        }
        for &(i, j, m) in &edges {
            let v = if m == 1 { -norms[i] / q(2) } else { q(-1) };
            gram[i][j] = v;
            gram[j][i] = v;
        }
        let cartan: IMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = q(2) * gram[i][j] / gram[j][j];
                        x.to_integer()
                    })
                    .collect()
            })
            .collect();
        let positive = generate_positive_roots(&cartan);
        let n_pos = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let highest = positive.last().cloned().unwrap_or_default();
        let mut rs = RootSystem {
            ty,
            cartan,
            gram,
            roots,
            n_pos,
            index,
            highest,
            coroots: Vec::new(),
            norms: Vec::new(),
        };
        rs.norms = rs.roots.iter().map(|r| rs.inner(r, r)).collect();
        rs.coroots = rs.roots.iter().map(|r| rs.coroot_of(r)).collect();
        Ok(rs)
    }

    /// Convenience constructor from a type string such as `"E8"`.
    pub fn of(s: &str) -> Result<Self> {
        RootSystem::new(s.parse()?)
    }

    /// Rank of the system.
    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.rank() + self.roots.len()
    }

    /// Index of a root given by coefficients, if it is a root.
    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Whether the vector is a root.
    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    /// Index of the negative of root `i`.
    pub fn neg(&self, i: usize) -> usize {
        if i < self.n_pos {
            i + self.n_pos
        } else {
            i - self.n_pos
        }
    }

    /// Whether root `i` is positive.
    pub fn is_positive(&self, i: usize) -> bool {
        i < self.n_pos
    }

    /// Index of the simple root `α_j` (1-based).
    pub fn simple(&self, j: usize) -> usize {
        let mut v = vec![0; self.rank()];
        v[j - 1] = 1;
        self.index_of(&v).expect("simple root")
    }

    /// Height of a root.
    pub fn height(&self, i: usize) -> i64 {
        self.roots[i].iter().sum()
    }

    /// Inner product of two vectors in simple-root coordinates.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Q {
        let mut s = Q::zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    s += self.gram[i][j] * (x * y);
                }
            }
        }
        s
    }

    /// Squared length of root `i`.
    pub fn norm(&self, i: usize) -> Q {
        self.norms[i]
    }

    /// Cartan integer `⟨a, b^∨⟩ = 2(a,b)/(b,b)`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        (q(2) * self.inner(a, b) / self.inner(b, b)).to_integer()
    }

    fn coroot_of(&self, n: &[i64]) -> Vec<Q> {
        let nn = self.inner(n, n);
        (0..self.rank())
            .map(|j| {
                let gn: Q = (0..self.rank()).fold(Q::zero(), |acc, i| acc + self.gram[j][i] * n[i]);
                q(2) * gn / nn
            })
            .collect()
    }

    /// Coroot of root `i` in the basis of fundamental coweights.
    pub fn coroot(&self, i: usize) -> Coweight {
        Coweight(self.coroots[i].clone())
    }

    /// Coroot of an arbitrary nonzero vector in simple-root coordinates.
    pub fn coroot_vec(&self, n: &[i64]) -> Coweight {
        Coweight(self.coroot_of(n))
    }

    /// Marks `m_j` of the highest root.
    pub fn marks(&self) -> Vec<i64> {
        self.highest.clone()
    }

    /// The highest root as coefficients.
    pub fn highest_root(&self) -> Vec<i64> {
        self.highest.clone()
    }

    /// The extended base `{α_0 = −δ, α_1, …, α_n}`.
    pub fn extended_base(&self) -> Vec<Vec<i64>> {
        let mut out = vec![self.highest.iter().map(|x| -x).collect::<Vec<_>>()];
        for j in 1..=self.rank() {
            let mut v = vec![0; self.rank()];
            v[j - 1] = 1;
            out.push(v);
        }
        out
    }

    /// Base of the subsystem `{α : pred(α)}` consisting of its indecomposable positive roots.
    pub fn subsystem_base<F: Fn(&[i64]) -> bool>(&self, pred: F) -> Result<Vec<Vec<i64>>> {
        let members: Vec<bool> = self.roots.iter().map(|r| pred(r)).collect();
        for i in 0..self.n_pos {
            if members[i] != members[self.neg(i)] {
                return Err(LieError::NotSymmetric);
            }
        }
        Ok(self.indecomposable(&members))
    }

    /// Indecomposable positive elements of a closed symmetric set of roots.
    pub fn indecomposable(&self, members: &[bool]) -> Vec<Vec<i64>> {
        let pos: Vec<usize> = (0..self.n_pos).filter(|&i| members[i]).collect();
        let mut out = Vec::new();
        for &c in &pos {
            let decomposable = pos.iter().any(|&a| {
                let diff: Vec<i64> = self.roots[c]
                    .iter()
                    .zip(&self.roots[a])
                    .map(|(x, y)| x - y)
                    .collect();
                self.index_of(&diff)
                    .is_some_and(|b| self.is_positive(b) && members[b])
            });
            if !decomposable {
                out.push(self.roots[c].clone());
            }
        }
        out
    }

    /// Fundamental coweights as coweight vectors.
    pub fn fundamental_coweights(&self) -> Vec<Coweight> {
        (1..=self.rank())
            .map(|j| Coweight::fundamental(self.rank(), j))
            .collect()
    }
}

/// Generates positive roots height by height through root strings.
fn generate_positive_roots(cartan: &IMat) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut known: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut all = Vec::new();
    while !layer.is_empty() {
        for r in &layer {
            known.insert(r.clone(), ());
        }
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let qv = p - pair;
                if qv > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(layer);
        layer = next;
    }
    all.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    all
}

/// Identifies the simple components of the Dynkin diagram spanned by `base`.
///
/// The inner product is given by `form`; the result is sorted by decreasing rank.
pub fn identify_type<F: Fn(&[i64], &[i64]) -> Q>(base: &[Vec<i64>], form: F) -> Result<Vec<SimpleType>> {
    let k = base.len();
    let norms: Vec<Q> = base.iter().map(|b| form(b, b)).collect();
    let mut cart = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let x = q(2) * form(&base[i], &base[j]) / norms[j];
            if !x.is_integer() {
                return Err(LieError::InvalidBase(format!("non-integral Cartan entry {x}")));
            }
            let x = x.to_integer();
            if i == j {
                if x != 2 {
                    return Err(LieError::InvalidBase("diagonal entry".into()));
                }
            } else if !(-3..=0).contains(&x) {
                return Err(LieError::InvalidBase(format!("Cartan entry {x}")));
            }
            cart[i][j] = x;
        }
    }
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut head = 0;
        while head < comp.len() {
            let a = comp[head];
            head += 1;
            for b in 0..k {
                if !seen[b] && cart[a][b] != 0 {
                    seen[b] = true;
                    comp.push(b);
                }
            }
        }
        out.push(component_type(&comp, &cart, &norms)?);
    }
    out.sort_by_key(|t| t.sort_key());
    Ok(out)
}

fn component_type(comp: &[usize], cart: &IMat, norms: &[Q]) -> Result<SimpleType> {
    let k = comp.len();
    let adj = |a: usize, b: usize| cart[a][b] != 0 && a != b;
    let bond = |a: usize, b: usize| cart[a][b] * cart[b][a];
    let degree = |a: usize| comp.iter().filter(|&&b| adj(a, b)).count();
    let edges: Vec<(usize, usize)> = comp
        .iter()
        .tuple_combinations()
        .filter(|(&a, &b)| adj(a, b))
        .map(|(&a, &b)| (a, b))
        .collect();
    if edges.len() + 1 != k {
        return Err(LieError::InvalidBase("diagram is not a tree".into()));
    }
    if k == 1 {
        return SimpleType::new(Family::A, 1);
    }
    if edges.iter().any(|&(a, b)| bond(a, b) == 3) {
        return SimpleType::new(Family::G, 2);
    }
    let multi: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| bond(a, b) == 2).collect();
    if multi.len() > 1 || comp.iter().any(|&a| degree(a) > 3) {
        return Err(LieError::InvalidBase("not a finite-type diagram".into()));
    }
    if let Some(&(a, b)) = multi.first() {
        if comp.iter().any(|&x| degree(x) > 2) {
            return Err(LieError::InvalidBase("branched non-simply-laced diagram".into()));
        }
        if k == 2 {
            return SimpleType::new(Family::B, 2);
        }
        let end_a = degree(a) == 1;
        let end_b = degree(b) == 1;
        if !end_a && !end_b {
            if k == 4 {
                return SimpleType::new(Family::F, 4);
            }
            return Err(LieError::InvalidBase("double bond in the interior".into()));
        }
        let (end, other) = if end_a { (a, b) } else { (b, a) };
        if norms[end] < norms[other] {
            return SimpleType::new(Family::B, k);
        }
        return SimpleType::new(Family::C, k);
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&a| degree(a) == 3).collect();
    match branch.len() {
        0 => SimpleType::new(Family::A, k),
        1 => {
            let c = branch[0];
            let mut arms: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&b| adj(c, b))
                .map(|start| {
                    let mut len = 1;
                    let (mut prev, mut cur) = (c, start);
                    loop {
                        let nxt = comp.iter().copied().find(|&x| x != prev && adj(cur, x));
                        match nxt {
                            Some(x) => {
                                prev = cur;
                                cur = x;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => SimpleType::new(Family::D, k),
                [1, 2, 2] => SimpleType::new(Family::E, 6),
                [1, 2, 3] => SimpleType::new(Family::E, 7),
                [1, 2, 4] => SimpleType::new(Family::E, 8),
                _ => Err(LieError::InvalidBase(format!("unknown branched diagram {arms:?}"))),
            }
        }
        _ => Err(LieError::InvalidBase("two branch points".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent closure oracle: saturate the simple roots under simple reflections.
    fn closure_count(rs: &RootSystem) -> usize {
        let n = rs.rank();
        let mut set: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
        let mut stack: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        while let Some(v) = stack.pop() {
            if !set.insert(v.clone()) {
                continue;
            }
            for i in 0..n {
                let c: i64 = (0..n).map(|j| v[j] * rs.cartan[j][i]).sum();
                let mut w = v.clone();
                w[i] -= c;
                if !set.contains(&w) {
                    stack.push(w);
                }
            }
        }
        set.len()
    }

    #[test]
    fn root_counts_match_closure_oracle() {
        for (s, count) in [("E8", 240), ("E7", 126), ("E6", 72), ("F4", 48), ("G2", 12), ("A2", 6), ("B3", 18), ("C3", 18), ("D4", 24)] {
            let rs = RootSystem::of(s).unwrap();
            assert_eq!(rs.roots.len(), count, "{s}");
            assert_eq!(closure_count(&rs), count, "{s}");
            assert_eq!(rs.dim(), rs.ty.dim(), "{s}");
        }
    }

    #[test]
    fn a2_positive_roots() {
        let rs = RootSystem::of("A2").unwrap();
        assert_eq!(rs.roots[..3].to_vec(), vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn highest_roots() {
        assert_eq!(RootSystem::of("E8").unwrap().marks(), vec![2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(RootSystem::of("E7").unwrap().marks(), vec![2, 2, 3, 4, 3, 2, 1]);
        assert_eq!(RootSystem::of("E6").unwrap().marks(), vec![1, 2, 2, 3, 2, 1]);
        assert_eq!(RootSystem::of("F4").unwrap().marks(), vec![2, 3, 4, 2]);
        assert_eq!(RootSystem::of("G2").unwrap().marks(), vec![3, 2]);
        assert_eq!(RootSystem::of("A2").unwrap().marks(), vec![1, 1]);
    }

    #[test]
    fn highest_root_dominates() {
        let rs = RootSystem::of("E7").unwrap();
        for r in &rs.roots[..rs.n_pos] {
            assert!(r.iter().zip(&rs.highest).all(|(a, b)| a <= b));
        }
    }

    #[test]
    fn eval_examples() {
        let e8 = RootSystem::of("E8").unwrap();
        assert_eq!(eval(&e8.highest, &Coweight::fundamental(8, 3)).unwrap(), q(4));
        assert_eq!(eval(&[1, 0, 0, 0, 0, 0, 0, 0], &Coweight::fundamental(8, 2)).unwrap(), q(0));
        let g2 = RootSystem::of("G2").unwrap();
        assert_eq!(eval(&g2.highest, &Coweight::fundamental(2, 1)).unwrap(), q(3));
        assert!(eval(&[1, 0], &Coweight::fundamental(3, 1)).is_err());
    }

    #[test]
    fn invalid_types_rejected() {
        assert!("E9".parse::<SimpleType>().is_err());
        assert!("F3".parse::<SimpleType>().is_err());
        assert!("X9".parse::<SimpleType>().is_err());
        assert!("D1".parse::<SimpleType>().is_err());
    }

    #[test]
    fn identify_extended_e8_minus_nodes() {
        let rs = RootSystem::of("E8").unwrap();
        let ext = rs.extended_base();
        let form = |a: &[i64], b: &[i64]| rs.inner(a, b);
        let minus = |k: usize| -> Vec<Vec<i64>> {
            ext.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, v)| v.clone()).collect()
        };
        let t = identify_type(&minus(3), form).unwrap();
        assert_eq!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["A7", "A1"]);
        let t = identify_type(&minus(6), form).unwrap();
        assert_eq!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["D5", "A3"]);
        let t = identify_type(&[vec![1, 0, 0, 0, 0, 0, 0, 0]], form).unwrap();
        assert_eq!(t[0].to_string(), "A1");
    }

    #[test]
    fn f4_extended_minus_alpha3() {
        let rs = RootSystem::of("F4").unwrap();
        let ext = rs.extended_base();
        assert_eq!(ext.len(), 5);
        let base: Vec<Vec<i64>> = ext.iter().enumerate().filter(|&(i, _)| i != 3).map(|(_, v)| v.clone()).collect();
        let t = identify_type(&base, |a, b| rs.inner(a, b)).unwrap();
        assert_eq!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["A3", "A1"]);
    }

    #[test]
    fn subsystem_examples() {
        let rs = RootSystem::of("E8").unwrap();
        let k3 = Coweight::fundamental(8, 3);
        let b = rs
            .subsystem_base(|r| eval(r, &k3).unwrap().to_integer().rem_euclid(4) == 0)
            .unwrap();
        let t = identify_type(&b, |a, c| rs.inner(a, c)).unwrap();
        assert_eq!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["A7", "A1"]);
        let k1 = Coweight::fundamental(8, 1);
        let b = rs
            .subsystem_base(|r| eval(r, &k1).unwrap().to_integer().rem_euclid(2) == 0)
            .unwrap();
        let t = identify_type(&b, |a, c| rs.inner(a, c)).unwrap();
        assert_eq!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["D8"]);
        let b = rs.subsystem_base(|_| true).unwrap();
        assert_eq!(b, rs.extended_base()[1..].to_vec());
    }

    #[test]
    fn classical_identification() {
        for s in ["B4", "C4", "B2", "D5", "D4", "A6", "F4", "G2", "E6", "E7", "C3", "B3"] {
            let rs = RootSystem::of(s).unwrap();
            let t = identify_type(&rs.extended_base()[1..], |a, b| rs.inner(a, b)).unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].to_string(), s);
        }
    }

    #[test]
    fn root_strings_unbroken() {
        let rs = RootSystem::of("F4").unwrap();
        for a in 0..rs.roots.len() {
            for b in 0..rs.roots.len() {
                if a == b || a == rs.neg(b) {
                    continue;
                }
                let (al, be) = (&rs.roots[a], &rs.roots[b]);
                let step = |k: i64| -> Vec<i64> { be.iter().zip(al).map(|(x, y)| x + k * y).collect() };
                let mut p = 0;
                while rs.is_root(&step(-(p + 1))) {
                    p += 1;
                }
                let mut qq = 0;
                while rs.is_root(&step(qq + 1)) {
                    qq += 1;
                }
                for k in -p..=qq {
                    assert!(rs.is_root(&step(k)));
                }
                assert_eq!(p - qq, rs.pairing(be, al));
            }
        }
    }

    #[test]
    fn coweight_parse_and_display() {
        let h = Coweight::parse(8, "1/2*K3 + K6").unwrap();
        assert_eq!(h.0[2], qf(1, 2));
        assert_eq!(h.0[5], q(1));
        assert_eq!(h.to_string(), "1/2*K3 + K6");
        let h = Coweight::parse(8, "-K2+K4 - 3K7").unwrap();
        assert_eq!(h.to_string(), "-K2 + K4 - 3K7");
        assert!(Coweight::parse(8, "K9").is_err());
        assert_eq!(Coweight::parse(8, "0").unwrap(), Coweight::zero(8));
    }

    #[test]
    fn marks_evaluate_on_coweights() {
        for s in ["E6", "E7", "E8", "F4", "G2"] {
            let rs = RootSystem::of(s).unwrap();
            for (j, m) in rs.marks().iter().enumerate() {
                assert_eq!(eval(&rs.highest, &Coweight::fundamental(rs.rank(), j + 1)).unwrap(), q(*m));
            }
        }
    }
}
