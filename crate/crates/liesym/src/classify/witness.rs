//! Replayable witnesses.
//!
//! A witness is a word in root reflections `t_α`, lattice parts of named maps and
//! maps given by the images of the simple roots, together with a claim that is
//! checked by exact replay: an image of a coweight or of a root, a congruence
//! modulo the even coweight lattice, or a conjugacy `g ∘ τ_a ∘ g^{−1} ≈ τ_b` of
//! involutions up to conjugation by the maximal torus. The shipped witnesses live
//! in `data/witnesses.txt`; the same file lists pairs of involutions that must be
//! separated by the ideal-membership invariant.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::classify::{separate, ClassSpace, Context, Descriptor, Separation};
use crate::error::{LieError, Result};
use crate::invol::{commutation_type, Automorphism, CartanMap, NamedMap};
use crate::linalg::{identity, mat_mul, mat_vec, IMat, Q};
use crate::rootsys::{Coweight, RootSystem};
use crate::weyl::{congruent_mod2, coweight_action, int_inverse, reflection_matrix};

const WITNESSES_TXT: &str = include_str!("../../data/witnesses.txt");

/// What a witness demonstrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessKind {
    /// A word in root reflections.
    WeylWord,
    /// A conjugacy between involutions differing by a power of `σ`.
    SigmaPowerTwist,
    /// An identity holding modulo the even coweight lattice.
    Congruence,
    /// A word involving the lattice part of a named outer map.
    NamedOuter,
}

impl FromStr for WitnessKind {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "weyl_word" => Ok(WitnessKind::WeylWord),
            "sigma_power_twist" => Ok(WitnessKind::SigmaPowerTwist),
            "congruence" => Ok(WitnessKind::Congruence),
            "named_outer" => Ok(WitnessKind::NamedOuter),
            other => Err(LieError::Parse(format!("unknown witness kind `{other}`"))),
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WitnessKind::WeylWord => "weyl_word",
            WitnessKind::SigmaPowerTwist => "sigma_power_twist",
            WitnessKind::Congruence => "congruence",
            WitnessKind::NamedOuter => "named_outer",
        };
        write!(f, "{s}")
    }
}

/// One letter of a map word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    Identity,
    /// The root reflection `t_α`.
    Reflection(Vec<i64>),
    /// The lattice part of a named map.
    Named(NamedMap),
    /// The lattice map sending `α_j` to the `j`-th root.
    Images(Vec<Vec<i64>>),
}

/// A composite lattice map, letters applied right to left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapWord {
    pub letters: Vec<Letter>,
    /// Whether the word stands for the inverse of the composite.
    pub inverse: bool,
}

impl MapWord {
    /// Matrix of the map on simple-root coordinates.
    pub fn matrix(&self, rs: &RootSystem) -> Result<IMat> {
        let n = rs.rank();
        let mut m = identity(n);
        for l in &self.letters {
            let lm = match l {
                Letter::Identity => identity(n),
                Letter::Reflection(a) => {
                    if !rs.is_root(a) {
                        return Err(LieError::NotARoot(a.clone()));
                    }
                    reflection_matrix(rs, a)
                }
                Letter::Named(nm) => nm.cartan_map(rs)?.matrix,
                Letter::Images(cols) => {
                    if cols.len() != n {
                        return Err(LieError::RankMismatch { expected: n, found: cols.len() });
                    }
                    let m: IMat = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
                    CartanMap::new(rs, m)?.matrix
                }
            };
            m = mat_mul(&m, &lm);
        }
        if self.inverse {
            m = int_inverse(&m).ok_or_else(|| LieError::Inconsistent("map is not invertible".into()))?;
        }
        Ok(CartanMap::new(rs, m)?.matrix)
    }
}

/// The identity asserted by a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Claim {
    /// `g(from) = to`, or congruence modulo the even coweight lattice.
    CoweightImage { from: Coweight, to: Coweight, modulo2: bool },
    /// `g(from) = to` on roots.
    RootImage { from: Vec<i64>, to: Vec<i64> },
    /// `g ∘ τ_a ∘ g^{−1}` and `τ_b` are conjugate under the maximal torus.
    Conjugate { a: Descriptor, b: Descriptor },
}

/// A replayable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub algebra: String,
    /// `σ` node of the pair, required for conjugacy claims.
    pub node: Option<usize>,
    pub map: MapWord,
    pub claim: Claim,
    /// The witness as written in the data file.
    pub text: String,
}

/// A pair of involutions that must be told apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationClaim {
    pub algebra: String,
    pub node: usize,
    pub a: Descriptor,
    pub b: Descriptor,
    pub text: String,
}

/// Parses a root written as coordinates `2,3,4,6,5,4,2,1` or as `a1 + 2*a3 - a5`.
pub fn parse_root(rank: usize, s: &str) -> Result<Vec<i64>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || LieError::Parse(format!("bad root `{s}`"));
    if s.contains(',') || s.chars().all(|c| c.is_ascii_digit() || c == '-') {
        let v = s.split(',').map(|x| x.parse::<i64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        if v.len() != rank {
            return Err(LieError::RankMismatch { expected: rank, found: v.len() });
        }
        return Ok(v);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s.clone()),
    };
    let mut v = vec![0i64; rank];
    let mut sign = if neg { -1 } else { 1 };
    let mut term = String::new();
    let flush = |term: &str, sign: i64, v: &mut Vec<i64>| -> Result<()> {
        let (coef, var) = match term.split_once('*') {
            Some((c, r)) => (c.parse::<i64>().map_err(|_| bad())?, r),
            None => (1, term),
        };
        let j: usize = var.strip_prefix('a').and_then(|x| x.parse().ok()).filter(|&j| j >= 1 && j <= rank).ok_or_else(bad)?;
        v[j - 1] += sign * coef;
        Ok(())
    };
    for c in body.chars() {
        if c == '+' || c == '-' {
            flush(&term, sign, &mut v)?;
            term.clear();
            sign = if c == '-' { -1 } else { 1 };
        } else {
            term.push(c);
        }
    }
    flush(&term, sign, &mut v)?;
    Ok(v)
}

fn parse_letter(rank: usize, s: &str) -> Result<Letter> {
    let s = s.trim();
    if s == "id" {
        return Ok(Letter::Identity);
    }
    if let Some(inner) = s.strip_prefix("t(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Letter::Reflection(parse_root(rank, inner)?));
    }
    if let Some(inner) = s.strip_prefix("images(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Letter::Images(inner.split(';').map(|r| parse_root(rank, r)).collect::<Result<_>>()?));
    }
    NamedMap::ALL
        .iter()
        .find(|m| crate::classify::named_token(**m) == s)
        .map(|m| Letter::Named(*m))
        .ok_or_else(|| LieError::Parse(format!("bad map letter `{s}`")))
}

/// Parses a map word such as `inv t(a5+a6) o t(a2) o psi`.
pub fn parse_map(rank: usize, s: &str) -> Result<MapWord> {
    let s = s.trim();
    let (inverse, body) = match s.strip_prefix("inv ") {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let letters = body.split(" o ").map(|l| parse_letter(rank, l)).collect::<Result<Vec<_>>>()?;
    Ok(MapWord { letters, inverse })
}

fn parse_descriptor(rank: usize, s: &str) -> Result<Descriptor> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| LieError::Parse(format!("expected `[base | twist]`, found `{s}`")))?;
    let (base, twist) = inner.split_once(';').ok_or_else(|| LieError::Parse(format!("expected `[base; twist]` in `{s}`")))?;
    Descriptor::parse(rank, base, twist)
}

/// Parses a claim: `X -> Y`, `X -> Y mod 2`, `a1 -> -a5` or `[b; x] ~ [b; y]`.
pub fn parse_claim(rank: usize, s: &str) -> Result<Claim> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('~') {
        return Ok(Claim::Conjugate { a: parse_descriptor(rank, a)?, b: parse_descriptor(rank, b)? });
    }
    let (lhs, rhs) = s.split_once("->").ok_or_else(|| LieError::Parse(format!("bad claim `{s}`")))?;
    if lhs.contains('K') {
        let (rhs, modulo2) = match rhs.trim().strip_suffix("mod 2") {
            Some(r) => (r, true),
            None => (rhs, false),
        };
        return Ok(Claim::CoweightImage {
            from: Coweight::parse(rank, lhs)?,
            to: Coweight::parse(rank, rhs)?,
            modulo2,
        });
    }
    Ok(Claim::RootImage { from: parse_root(rank, lhs)?, to: parse_root(rank, rhs)? })
}

fn parse_pair(s: &str) -> Result<(String, Option<usize>)> {
    let mut it = s.split_whitespace();
    let algebra = it.next().ok_or_else(|| LieError::Parse(format!("bad pair `{s}`")))?.to_string();
    let node = match it.next() {
        None | Some("-") => None,
        Some(n) => Some(n.parse().map_err(|_| LieError::Parse(format!("bad node in `{s}`")))?),
    };
    Ok((algebra, node))
}

/// Parses the witness format.
pub fn parse_witnesses(text: &str) -> Result<(Vec<Witness>, Vec<SeparationClaim>)> {
    let mut witnesses = Vec::new();
    let mut separations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |e: LieError| LieError::Parse(format!("line {}: {e}", i + 1));
        let f: Vec<&str> = content.split('|').map(str::trim).collect();
        if f.len() != 4 {
            return Err(LieError::Parse(format!("line {}: expected 4 fields", i + 1)));
        }
        let (algebra, node) = parse_pair(f[1]).map_err(err)?;
        let rank = RootSystem::of(&algebra).map_err(err)?.rank();
        if f[0] == "separation" {
            let node = node.ok_or_else(|| LieError::Parse(format!("line {}: separation needs a pair", i + 1)))?;
            separations.push(SeparationClaim {
                algebra,
                node,
                a: parse_descriptor(rank, f[2]).map_err(err)?,
                b: parse_descriptor(rank, f[3]).map_err(err)?,
                text: content.to_string(),
            });
            continue;
        }
        let claim = parse_claim(rank, f[3]).map_err(err)?;
        if matches!(claim, Claim::Conjugate { .. }) && node.is_none() {
            return Err(LieError::Parse(format!("line {}: conjugacy claims need a pair", i + 1)));
        }
        witnesses.push(Witness {
            kind: f[0].parse().map_err(err)?,
            algebra,
            node,
            map: parse_map(rank, f[2]).map_err(err)?,
            claim,
            text: content.to_string(),
        });
    }
    Ok((witnesses, separations))
}

/// The shipped witnesses.
pub fn witnesses() -> Result<Vec<Witness>> {
    Ok(parse_witnesses(WITNESSES_TXT)?.0)
}

/// The shipped separation claims.
pub fn separations() -> Result<Vec<SeparationClaim>> {
    Ok(parse_witnesses(WITNESSES_TXT)?.1)
}

/// Replays a witness. Conjugacy claims need the context of the witness pair.
pub fn verify_witness(w: &Witness, ctx: Option<&Context>) -> Result<bool> {
    let rs_owned;
    let rs = match ctx {
        Some(c) => &c.rs,
        None => {
            rs_owned = RootSystem::of(&w.algebra)?;
            &rs_owned
        }
    };
    let m = w.map.matrix(rs)?;
    match &w.claim {
        Claim::CoweightImage { from, to, modulo2 } => {
            let img = coweight_action(&m, from);
            Ok(if *modulo2 { congruent_mod2(&img, to) } else { img == *to })
        }
        Claim::RootImage { from, to } => Ok(mat_vec(&m, from) == *to),
        Claim::Conjugate { a, b } => {
            let ctx = ctx.ok_or_else(|| LieError::Inconsistent("conjugacy claims need a pair context".into()))?;
            if ctx.algebra != w.algebra || Some(ctx.node) != w.node {
                return Err(LieError::Inconsistent(format!(
                    "witness for ({}, {:?}) replayed in ({}, K{})",
                    w.algebra, w.node, ctx.algebra, ctx.node
                )));
            }
            let cmap = CartanMap::new(rs, m)?;
            if commutation_type(&cmap, &ctx.sigma).is_err() {
                return Ok(false);
            }
            let g = Automorphism::lift(rs, &ctx.table, &cmap, &vec![Q::zero(); rs.rank()])?;
            let ia = ctx.evaluate(a)?;
            let ib = ctx.evaluate(b)?;
            let moved = ia.aut.conjugate_by(&g);
            if moved.cmap != ib.aut.cmap {
                return Ok(false);
            }
            let space = ClassSpace::new(rs, ib.clone())?;
            Ok(space.key_of(rs, &moved).is_some() && space.key_of(rs, &moved) == space.key_of(rs, &ib.aut))
        }
    }
}

/// Checks a separation claim: the pair shares `k`, `h ∩ k` and commutation type and is
/// told apart by whether the rank-one ideal of `g^τ` lies in `h`.
pub fn verify_separation(s: &SeparationClaim, ctx: &Context) -> Result<bool> {
    let a = ctx.evaluate(&s.a)?;
    let b = ctx.evaluate(&s.b)?;
    Ok(separate(ctx, &a, &b)? == Separation::Distinct("ideal membership in h".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_parse() {
        assert_eq!(parse_root(4, "1,2,3,1").unwrap(), vec![1, 2, 3, 1]);
        assert_eq!(parse_root(6, "a2 + a4 + a5 + a6").unwrap(), vec![0, 1, 0, 1, 1, 1]);
        assert_eq!(parse_root(6, "-a5").unwrap(), vec![0, 0, 0, 0, -1, 0]);
        assert_eq!(parse_root(4, "2*a3 - a1").unwrap(), vec![-1, 0, 2, 0]);
        assert!(parse_root(4, "a9").is_err());
        assert!(parse_root(4, "1,2").is_err());
    }

    #[test]
    fn maps_compose_right_to_left() {
        let rs = RootSystem::of("A2").unwrap();
        let w = parse_map(2, "t(a1) o t(a2)").unwrap();
        let m = w.matrix(&rs).unwrap();
        assert_eq!(mat_vec(&m, &[1, 0]), vec![0, 1]);
        let inv = parse_map(2, "inv t(a1) o t(a2)").unwrap().matrix(&rs).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
    }

    #[test]
    fn identity_witness_holds() {
        let (ws, _) = parse_witnesses("weyl_word | E8 - | id | K3 -> K3\n").unwrap();
        assert!(verify_witness(&ws[0], None).unwrap());
    }

    #[test]
    fn wrong_claim_fails() {
        let (ws, _) = parse_witnesses("weyl_word | E8 - | t(a1) | K1 -> K1\n").unwrap();
        assert!(!verify_witness(&ws[0], None).unwrap());
    }

    #[test]
    fn malformed_witnesses_are_rejected() {
        assert!(parse_witnesses("weyl_word | E8 - | t(a1)\n").is_err());
        assert!(parse_witnesses("guess | E8 - | t(a1) | K1 -> K1\n").is_err());
        assert!(parse_witnesses("weyl_word | E8 - | t(a1) | [-; K1] ~ [-; K1]\n").is_err());
        assert!(parse_witnesses("weyl_word | E8 - | s(a1) | K1 -> K1\n").is_err());
    }

    #[test]
    fn shipped_file_parses() {
        let (ws, ss) = parse_witnesses(WITNESSES_TXT).unwrap();
        assert!(ws.len() > 40);
        assert_eq!(ss.len(), 2);
    }
}
