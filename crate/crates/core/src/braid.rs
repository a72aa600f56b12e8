//! Virtual braid words and the two representations of `VB_n`:
//! `phi_a` into `Aut(F_{n+1})` and `phi_m` into `Aut(F_n * Z^n)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Endo, GenId, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LetterKind {
    Sigma,
    Rho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    pub kind: LetterKind,
    /// 1-based, in `1..n`.
    pub index: u32,
    /// Nonzero; always `1` for `Rho`.
    pub exp: i64,
}

impl BraidLetter {
    pub fn sigma(index: u32, exp: i64) -> Self {
        BraidLetter { kind: LetterKind::Sigma, index, exp }
    }

    pub fn rho(index: u32) -> Self {
        BraidLetter { kind: LetterKind::Rho, index, exp: 1 }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            LetterKind::Sigma => 's',
            LetterKind::Rho => 'r',
        };
        if self.exp == 1 {
            write!(f, "{c}{}", self.index)
        } else {
            write!(f, "{c}{}^{}", self.index, self.exp)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Invalid("a braid needs at least one strand".into()));
        }
        let mut out = Vec::with_capacity(letters.len());
        for l in letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::Parse {
                    token: l.to_string(),
                    reason: format!("index out of range for {strands} strands"),
                });
            }
            if l.exp == 0 {
                return Err(Error::Parse { token: l.to_string(), reason: "zero exponent".into() });
            }
            match l.kind {
                LetterKind::Sigma => out.push(l),
                LetterKind::Rho => {
                    if l.exp.rem_euclid(2) == 1 {
                        out.push(BraidLetter::rho(l.index));
                    }
                }
            }
        }
        Ok(BraidWord { strands, letters: out })
    }

    /// Parses `s1^-2 r1 s2` style text.
    pub fn parse(text: &str, strands: u32) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let bad = |reason: &str| Error::Parse { token: token.to_string(), reason: reason.to_string() };
            let mut chars = token.chars();
            let kind = match chars.next() {
                Some('s') => LetterKind::Sigma,
                Some('r') => LetterKind::Rho,
                _ => return Err(bad("expected `s<i>` or `r<i>`")),
            };
            let rest = chars.as_str();
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|_| bad("exponent is not an integer"))?),
                None => (rest, 1),
            };
            let index = idx.parse::<u32>().map_err(|_| bad("missing or invalid index"))?;
            if exp == 0 {
                return Err(bad("zero exponent"));
            }
            letters.push(BraidLetter { kind, index, exp });
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    /// Reversed word with inverted `sigma` exponents.
    pub fn inverse(&self) -> BraidWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l.kind {
                LetterKind::Sigma => BraidLetter::sigma(l.index, -l.exp),
                LetterKind::Rho => *l,
            })
            .collect();
        BraidWord { strands: self.strands, letters }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Invalid("concatenating braids on different strand counts".into()));
        }
        let letters = self.letters.iter().chain(&other.letters).copied().collect();
        Ok(BraidWord { strands: self.strands, letters })
    }

    /// Underlying permutation: `perm[i]` is the final position of the strand starting at `i`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands as usize).collect();
        for l in &self.letters {
            if l.exp.rem_euclid(2) == 1 {
                let i = l.index as usize - 1;
                for p in at.iter_mut() {
                    if *p == i {
                        *p = i + 1;
                    } else if *p == i + 1 {
                        *p = i;
                    }
                }
            }
        }
        at
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rep {
    A,
    M,
}

impl FromStr for Rep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Rep::A),
            "M" | "m" => Ok(Rep::M),
            _ => Err(Error::Parse { token: s.to_string(), reason: "representation must be A or M".into() }),
        }
    }
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rep::A => write!(f, "A"),
            Rep::M => write!(f, "M"),
        }
    }
}

/// `x1..xn, y`.
pub fn alphabet_a(n: u32) -> Alphabet {
    Alphabet::free((1..=n).map(|i| format!("x{i}")).chain(std::iter::once("y".to_string())))
}

/// `y1..yn` free, `v1..vn` abelian.
pub fn alphabet_m(n: u32) -> Alphabet {
    Alphabet::free((1..=n).map(|i| format!("y{i}"))).with_block((1..=n).map(|i| format!("v{i}")))
}

fn x(i: u32) -> Word {
    Word::gen(GenId::Free(i - 1))
}

fn v(i: u32) -> Word {
    Word::gen(GenId::Abelian { block: 0, index: i - 1 })
}

// Generator-level images of phi_A. `i` is 1-based.
fn phi_a_letter(n: u32, kind: LetterKind, i: u32, inverse: bool) -> Endo {
    let y = Word::gen(GenId::Free(n));
    let (xi, xj) = (x(i), x(i + 1));
    let (img_i, img_j) = match (kind, inverse) {
        (LetterKind::Sigma, false) => (&(&xi * &xj) * &xi.inverse(), xi.clone()),
        (LetterKind::Sigma, true) => (xj.clone(), &(&xj.inverse() * &xi) * &xj),
        (LetterKind::Rho, _) => (xj.conjugate(&y.inverse()), xi.conjugate(&y)),
    };
    Endo::from_rule(alphabet_a(n), |g| match g {
        GenId::Free(k) if k == i - 1 => Some(img_i.clone()),
        GenId::Free(k) if k == i => Some(img_j.clone()),
        _ => None,
    })
    .expect("images lie in the alphabet")
}

fn phi_m_letter(n: u32, kind: LetterKind, i: u32, inverse: bool) -> Endo {
    let (yi, yj) = (x(i), x(i + 1));
    let (img_i, img_j) = match (kind, inverse) {
        (LetterKind::Sigma, false) => (&(&yi * &yj) * &yi.inverse(), yi.clone()),
        (LetterKind::Sigma, true) => (yj.clone(), &(&yj.inverse() * &yi) * &yj),
        (LetterKind::Rho, _) => (yj.conjugate(&v(i).inverse()), yi.conjugate(&v(i + 1))),
    };
    Endo::from_rule(alphabet_m(n), |g| match g {
        GenId::Free(k) if k == i - 1 => Some(img_i.clone()),
        GenId::Free(k) if k == i => Some(img_j.clone()),
        GenId::Abelian { index, .. } if index == i - 1 => Some(v(i + 1)),
        GenId::Abelian { index, .. } if index == i => Some(v(i)),
        _ => None,
    })
    .expect("images lie in the alphabet")
}

fn realize(b: &BraidWord, alphabet: Alphabet, letter: impl Fn(LetterKind, u32, bool) -> Endo) -> Endo {
    // The first letter acts first: its images are substituted into by the next one.
    let mut acc = Endo::identity(alphabet);
    for l in b.letters() {
        let gen = letter(l.kind, l.index, l.exp < 0);
        for _ in 0..l.exp.unsigned_abs() {
            acc = Endo::compose(&gen, &acc).expect("same alphabet");
        }
    }
    acc
}

pub fn phi_a(b: &BraidWord) -> Endo {
    let n = b.strands();
    realize(b, alphabet_a(n), |k, i, inv| phi_a_letter(n, k, i, inv))
}

pub fn phi_m(b: &BraidWord) -> Endo {
    let n = b.strands();
    realize(b, alphabet_m(n), |k, i, inv| phi_m_letter(n, k, i, inv))
}

pub fn represent(rep: Rep, b: &BraidWord) -> Endo {
    match rep {
        Rep::A => phi_a(b),
        Rep::M => phi_m(b),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationCheck {
    pub relation: String,
    pub lhs_word: String,
    pub rhs_word: String,
    pub pass: bool,
}

pub type RelationReport = Vec<RelationCheck>;

/// The defining relations of `VB_n` as `(family, lhs, rhs)` braid words.
pub fn defining_relations(n: u32) -> Vec<(&'static str, BraidWord, BraidWord)> {
    use BraidLetter as L;
    let mut out = Vec::new();
    let mk = |ls: Vec<BraidLetter>| BraidWord::new(n, ls).expect("indices in range");
    for i in 1..n {
        out.push(("rho involution", mk(vec![L::rho(i), L::rho(i)]), mk(vec![])));
        for j in (i + 2)..n {
            out.push(("sigma far commutation", mk(vec![L::sigma(i, 1), L::sigma(j, 1)]), mk(vec![L::sigma(j, 1), L::sigma(i, 1)])));
            out.push(("rho far commutation", mk(vec![L::rho(i), L::rho(j)]), mk(vec![L::rho(j), L::rho(i)])));
        }
        for j in 1..n {
            if i.abs_diff(j) >= 2 {
                out.push(("mixed far commutation", mk(vec![L::sigma(i, 1), L::rho(j)]), mk(vec![L::rho(j), L::sigma(i, 1)])));
            }
        }
        if i + 1 < n {
            let (s, t) = (L::sigma(i, 1), L::sigma(i + 1, 1));
            out.push(("sigma braid", mk(vec![s, t, s]), mk(vec![t, s, t])));
            let (r, q) = (L::rho(i), L::rho(i + 1));
            out.push(("rho braid", mk(vec![r, q, r]), mk(vec![q, r, q])));
            out.push(("mixed", mk(vec![r, q, s]), mk(vec![t, r, q])));
        }
    }
    out
}

/// Checks every defining relation of `VB_strands` under the chosen representation.
pub fn verify_representation(rep: Rep, strands: u32) -> Result<RelationReport> {
    if !(2..=6).contains(&strands) {
        return Err(Error::Invalid(format!("strand count {strands} outside 2..=6")));
    }
    Ok(defining_relations(strands)
        .into_iter()
        .map(|(family, lhs, rhs)| {
            let pass = represent(rep, &lhs) == represent(rep, &rhs);
            RelationCheck { relation: family.to_string(), lhs_word: lhs.to_string(), rhs_word: rhs.to_string(), pass }
        })
        .collect())
}
