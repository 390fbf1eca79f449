//! Isomorphism-type labels of reductive Lie algebras.
//!
//! A label is a multiset of simple types plus the dimension of the centre. Parsing
//! accepts Cartan notation (`D4+D1`, `B2B2B1B1`, `A5A1R^2`, `B1×5+R`) and compact
//! real-form notation (`so(8)+so(2)`, `e7+su2`, `s(u(4)+u(4))+su(2)`, `u(3)+u(5)`).
//! Low-rank coincidences such as `D3 = A3`, `B2 = C2`, `so(4) = A1+A1` and `D1 = R`
//! are resolved by [`Label::canonical`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LieError, Result};
use crate::rootsys::{Family, SimpleType};

/// A reductive Lie algebra up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub types: Vec<SimpleType>,
    pub abelian: usize,
}

impl Label {
    /// Builds a label and brings it to canonical form.
    pub fn new(types: Vec<SimpleType>, abelian: usize) -> Self {
        Label { types, abelian }.canonical()
    }

    /// Replaces every type by its canonical isomorphic type and sorts.
    pub fn canonical(&self) -> Label {
        let mut types = Vec::new();
        let mut abelian = self.abelian;
        for t in &self.types {
            match (t.family, t.rank) {
                (Family::B | Family::C, 1) => types.push(simple(Family::A, 1)),
                (Family::C, 2) => types.push(simple(Family::B, 2)),
                (Family::D, 1) => abelian += 1,
                (Family::D, 2) => {
                    types.push(simple(Family::A, 1));
                    types.push(simple(Family::A, 1));
                }
                (Family::D, 3) => types.push(simple(Family::A, 3)),
                _ => types.push(*t),
            }
        }
        types.sort_by_key(|t| t.sort_key());
        Label { types, abelian }
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.types.iter().map(|t| t.dim()).sum::<usize>() + self.abelian
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        self.types.iter().map(|t| t.rank).sum::<usize>() + self.abelian
    }
}

/// Renders simple types and a centre as `E7+A1` or `A5+R^2`.
pub fn render(types: &[SimpleType], abelian: usize) -> String {
    Label::new(types.to_vec(), abelian).to_string()
}

fn simple(family: Family, rank: usize) -> SimpleType {
    SimpleType { family, rank }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.types.iter().map(|t| t.to_string()).collect();
        match self.abelian {
            0 => {}
            1 => parts.push("R".into()),
            k => parts.push(format!("R^{k}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl FromStr for Label {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { chars: normalize(s).chars().collect(), pos: 0, src: s.to_string() };
        let label = p.sum()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(label.canonical())
    }
}

fn normalize(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '⊕' => out.push('+'),
            '²' => out.push_str("^2"),
            '³' => out.push_str("^3"),
            '⁴' => out.push_str("^4"),
            '⁵' => out.push_str("^5"),
            '×' | '*' => out.push('x'),
            '𝔰' => out.push('s'),
            c if c.is_whitespace() => {}
            c => out.push(c),
        }
    }
    out
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    src: String,
}

impl Parser {
    fn error(&self, what: &str) -> LieError {
        LieError::Parse(format!("{what} at position {} in label {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().map_err(|_| self.error("bad number"))
    }

    fn try_word(&mut self, w: &str) -> bool {
        let wc: Vec<char> = w.chars().collect();
        if self.chars[self.pos..].starts_with(&wc) {
            self.pos += wc.len();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Label> {
        let mut acc = Label { types: Vec::new(), abelian: 0 };
        loop {
            let term = self.product()?;
            acc.types.extend(term.types);
            acc.abelian += term.abelian;
            if !self.eat('+') {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Label> {
        let mut acc = Label { types: Vec::new(), abelian: 0 };
        let mut any = false;
        while let Some(c) = self.peek() {
            if c == '+' || c == ')' {
                break;
            }
            let atom = self.repeated()?;
            acc.types.extend(atom.types);
            acc.abelian += atom.abelian;
            any = true;
        }
        if !any {
            return Err(self.error("empty summand"));
        }
        Ok(acc)
    }

    fn repeated(&mut self) -> Result<Label> {
        let atom = self.atom()?;
        let times = if self.eat('^') || self.eat('x') {
            self.number()?
        } else {
            1
        };
        let mut out = Label { types: Vec::new(), abelian: atom.abelian * times };
        for _ in 0..times {
            out.types.extend(atom.types.iter().copied());
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Label> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end"))?;
        if c == '(' {
            self.pos += 1;
            let inner = self.sum()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if c == 'R' || c == 'ℝ' {
            self.pos += 1;
            return Ok(Label { types: Vec::new(), abelian: 1 });
        }
        if c == '0' {
            self.pos += 1;
            return Ok(Label { types: Vec::new(), abelian: 0 });
        }
        if c.is_ascii_uppercase() {
            let fam = match c {
                'A' => Family::A,
                'B' => Family::B,
                'C' => Family::C,
                'D' => Family::D,
                'E' => Family::E,
                'F' => Family::F,
                'G' => Family::G,
                _ => return Err(self.error("unknown family letter")),
            };
            self.pos += 1;
            let n = self.number()?;
            if fam == Family::D && n == 1 {
                return Ok(Label { types: Vec::new(), abelian: 1 });
            }
            let t = SimpleType::new(fam, n)?;
            return Ok(Label { types: vec![t], abelian: 0 });
        }
        if self.try_word("s(") {
            let inner = self.sum()?;
            self.expect(')')?;
            if inner.abelian == 0 {
                return Err(self.error("s(...) needs a centre"));
            }
            return Ok(Label { types: inner.types, abelian: inner.abelian - 1 });
        }
        for (word, kind) in [("so", 0u8), ("su", 1), ("sp", 2), ("u", 3)] {
            if self.try_word(word) {
                let n = self.argument()?;
                return compact(kind, n).map_err(|_| self.error("invalid compact algebra"));
            }
        }
        for (word, fam) in [("e", Family::E), ("f", Family::F), ("g", Family::G)] {
            if self.try_word(word) {
                let n = self.argument()?;
                let t = SimpleType::new(fam, n)?;
                return Ok(Label { types: vec![t], abelian: 0 });
            }
        }
        Err(self.error("unrecognized symbol"))
    }

    fn argument(&mut self) -> Result<usize> {
        if self.eat('(') {
            let n = self.number()?;
            self.expect(')')?;
            Ok(n)
        } else {
            self.eat('_');
            self.number()
        }
    }
}

/// `so(n)`, `su(n)`, `sp(n)` and `u(n)` as labels.
fn compact(kind: u8, n: usize) -> Result<Label> {
    let none = Label { types: Vec::new(), abelian: 0 };
    let one = |t: SimpleType| Label { types: vec![t], abelian: 0 };
    Ok(match kind {
        0 => match n {
            0 | 1 => none,
            2 => Label { types: Vec::new(), abelian: 1 },
            _ if n % 2 == 1 => one(SimpleType::new(Family::B, n / 2)?),
            _ => one(SimpleType::new(Family::D, n / 2)?),
        },
        1 => match n {
            0 | 1 => none,
            _ => one(SimpleType::new(Family::A, n - 1)?),
        },
        2 => one(SimpleType::new(Family::C, n)?),
        _ => match n {
            0 => none,
            1 => Label { types: Vec::new(), abelian: 1 },
            _ => Label { types: vec![SimpleType::new(Family::A, n - 1)?], abelian: 1 },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> String {
        s.parse::<Label>().unwrap().to_string()
    }

    #[test]
    fn cartan_notation() {
        assert_eq!(p("D4+D1"), "D4+R");
        assert_eq!(p("B2B2B1B1"), "B2+B2+A1+A1");
        assert_eq!(p("A5A1A1R"), "A5+A1+A1+R");
        assert_eq!(p("B1×5+R"), "A1+A1+A1+A1+A1+R");
        assert_eq!(p("A4A2R²"), "A4+A2+R^2");
        assert_eq!(p("D3D2A1R"), "A3+A1+A1+A1+R");
        assert_eq!(p("C2"), "B2");
        assert_eq!(p("E7+A1"), "E7+A1");
    }

    #[test]
    fn compact_notation() {
        assert_eq!(p("so(8)+so(2)"), "D4+R");
        assert_eq!(p("so16"), "D8");
        assert_eq!(p("e7+su2"), "E7+A1");
        assert_eq!(p("s(u(4)+u(4))+su(2)"), "A3+A3+A1+R");
        assert_eq!(p("u(3)+u(5)"), "A4+A2+R^2");
        assert_eq!(p("so(5)+so(3)"), "B2+A1");
        assert_eq!(p("sp(4)"), "C4");
        assert_eq!(p("so12su2"), "D6+A1");
        assert_eq!(p("s(u(2)+u(1))×2+so(2)+R"), "A1+A1+R^4");
        assert_eq!(p("so(4)"), "A1+A1");
        assert_eq!(p("so(6)+so(2)"), "A3+R");
    }

    #[test]
    fn dimensions() {
        let l: Label = "E7+A1".parse().unwrap();
        assert_eq!(l.dim(), 136);
        let l: Label = "E6+R".parse().unwrap();
        assert_eq!(l.dim(), 79);
        assert_eq!(l.rank(), 7);
    }

    #[test]
    fn rejects_garbage() {
        assert!("Q7".parse::<Label>().is_err());
        assert!("so(".parse::<Label>().is_err());
        assert!("A1+".parse::<Label>().is_err());
    }
}
