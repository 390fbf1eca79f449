//! Weyl group actions on roots and coweights.
//!
//! A [`WeylWord`] with letters `[β_1, …, β_k]` denotes the composition
//! `t_{β_1} ∘ ⋯ ∘ t_{β_k}`, so the last letter acts first. Linear maps of the
//! root lattice are integer matrices whose columns are the images of the
//! simple roots; such a map acts on coweights through its inverse transpose.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{LieError, Result};
use crate::linalg::{identity, mat_mul, mat_vec, mat_vec_q, mod2, IMat, Q};
use crate::rootsys::{eval, Coweight, RootSystem};

/// A word in root reflections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylWord {
    pub letters: Vec<Vec<i64>>,
}

impl WeylWord {
    /// The empty word.
    pub fn identity() -> Self {
        Self::default()
    }

    /// A word from root coefficient vectors.
    pub fn new(letters: Vec<Vec<i64>>) -> Self {
        WeylWord { letters }
    }

    /// Checks that every letter is a root of `rs`.
    pub fn validate(&self, rs: &RootSystem) -> Result<()> {
        for l in &self.letters {
            if !rs.is_root(l) {
                return Err(LieError::NotARoot(l.clone()));
            }
        }
        Ok(())
    }

    /// Matrix of the word acting on simple-root coordinates.
    pub fn matrix(&self, rs: &RootSystem) -> Result<IMat> {
        self.validate(rs)?;
        let mut m = identity(rs.rank());
        for l in &self.letters {
            m = mat_mul(&m, &reflection_matrix(rs, l));
        }
        Ok(m)
    }
}

/// The reflection `t_α(β) = β − ⟨β, α^∨⟩ α`.
pub fn reflect_root(rs: &RootSystem, alpha: &[i64], beta: &[i64]) -> Result<Vec<i64>> {
    if alpha.iter().all(|&x| x == 0) || !rs.is_root(alpha) {
        return Err(LieError::NotARoot(alpha.to_vec()));
    }
    let c = rs.pairing(beta, alpha);
    Ok(beta.iter().zip(alpha).map(|(b, a)| b - c * a).collect())
}

/// The reflection `t_α(H) = H − α(H) α^∨` on coweights.
pub fn reflect_coweight(rs: &RootSystem, alpha: &[i64], h: &Coweight) -> Result<Coweight> {
    if !rs.is_root(alpha) {
        return Err(LieError::NotARoot(alpha.to_vec()));
    }
    let a = eval(alpha, h)?;
    Ok(h.sub(&rs.coroot_vec(alpha).scale(a)))
}

/// Matrix of `t_α` on simple-root coordinates.
pub fn reflection_matrix(rs: &RootSystem, alpha: &[i64]) -> IMat {
    let n = rs.rank();
    let mut m = identity(n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let c = rs.pairing(&e, alpha);
        for i in 0..n {
            m[i][j] -= c * alpha[i];
        }
    }
    m
}

/// Applies a word to a root.
pub fn apply_word_root(rs: &RootSystem, w: &WeylWord, x: &[i64]) -> Result<Vec<i64>> {
    let mut v = x.to_vec();
    for l in w.letters.iter().rev() {
        v = reflect_root(rs, l, &v)?;
    }
    Ok(v)
}

/// Applies a word to a coweight.
pub fn apply_word_coweight(rs: &RootSystem, w: &WeylWord, h: &Coweight) -> Result<Coweight> {
    let mut v = h.clone();
    for l in w.letters.iter().rev() {
        v = reflect_coweight(rs, l, &v)?;
    }
    Ok(v)
}

/// Inverse of a unimodular integer matrix computed through the rationals.
pub fn int_inverse(m: &IMat) -> Option<IMat> {
    let inv = crate::linalg::q_inverse(&crate::linalg::to_q(m))?;
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<Vec<i64>>>()
        })
        .collect()
}

/// Action on coweights of the lattice map with root-coordinate matrix `m`.
pub fn coweight_action(m: &IMat, h: &Coweight) -> Coweight {
    let inv = int_inverse(m).expect("unimodular");
    let t = crate::linalg::transpose(&inv);
    Coweight(mat_vec_q(&t, &h.0))
}

/// Whether two coweights are congruent modulo the even coweight lattice.
pub fn congruent_mod2(a: &Coweight, b: &Coweight) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| {
        let d = x - y;
        d.is_integer() && d.to_integer().rem_euclid(2) == 0
    })
}

fn key(h: &Coweight, modulo: bool) -> Vec<Q> {
    if modulo {
        h.0.iter().map(|x| mod2(*x)).collect()
    } else {
        h.0.clone()
    }
}

/// Bounded breadth-first search for a Weyl word sending each `goal.0` to `goal.1`.
///
/// With `modulo` set the images only need to agree modulo the even coweight
/// lattice. Letters are simple roots. Absence of a result is not a proof that no
/// element exists.
pub fn find_weyl_element(
    rs: &RootSystem,
    goal: &[(Coweight, Coweight)],
    modulo: bool,
    depth_cap: usize,
) -> Option<WeylWord> {
    let targets: Vec<Vec<Q>> = goal.iter().map(|(_, t)| key(t, modulo)).collect();
    let start: Vec<Coweight> = goal.iter().map(|(s, _)| s.clone()).collect();
    let done = |state: &[Coweight]| {
        state
            .iter()
            .zip(&targets)
            .all(|(s, t)| key(s, modulo) == *t)
    };
    if done(&start) {
        return Some(WeylWord::identity());
    }
    let n = rs.rank();
    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut seen: HashSet<Vec<Vec<Q>>> = HashSet::new();
    seen.insert(start.iter().map(|s| key(s, modulo)).collect());
    let mut queue: VecDeque<(Vec<Coweight>, Vec<usize>)> = VecDeque::new();
    queue.push_back((start, Vec::new()));
    while let Some((state, word)) = queue.pop_front() {
        if word.len() >= depth_cap {
            continue;
        }
        for (i, s) in simple.iter().enumerate() {
            let next: Vec<Coweight> = state
                .iter()
                .map(|h| reflect_coweight(rs, s, h).expect("simple root"))
                .collect();
            let k: Vec<Vec<Q>> = next.iter().map(|h| key(h, modulo)).collect();
            if !seen.insert(k) {
                continue;
            }
            let mut w = word.clone();
            w.push(i);
            if done(&next) {
                let letters = w.iter().rev().map(|&i| simple[i].clone()).collect();
                return Some(WeylWord::new(letters));
            }
            queue.push_back((next, w));
        }
    }
    None
}

/// Enumerates the whole Weyl group as root-coordinate matrices.
///
/// Intended for small groups; the search stops with an error above `limit` elements.
pub fn enumerate_group(rs: &RootSystem, limit: usize) -> Result<Vec<IMat>> {
    let gens: Vec<IMat> = (1..=rs.rank())
        .map(|j| reflection_matrix(rs, &rs.roots[rs.simple(j)]))
        .collect();
    enumerate_generated(&gens, rs.rank(), limit)
}

/// Closure of a set of integer matrices under multiplication.
pub fn enumerate_generated(gens: &[IMat], n: usize, limit: usize) -> Result<Vec<IMat>> {
    let mut seen: HashMap<IMat, ()> = HashMap::new();
    let mut out = vec![identity(n)];
    seen.insert(identity(n), ());
    let mut head = 0;
    while head < out.len() {
        let g = out[head].clone();
        head += 1;
        for s in gens {
            let h = mat_mul(s, &g);
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), ());
                out.push(h);
                if out.len() > limit {
                    return Err(LieError::OutOfScope(format!("group larger than {limit}")));
                }
            }
        }
    }
    Ok(out)
}

/// Image of a root index under a lattice map.
pub fn map_root(rs: &RootSystem, m: &IMat, r: usize) -> Option<usize> {
    rs.index_of(&mat_vec(m, &rs.roots[r]))
}
