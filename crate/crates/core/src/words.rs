//! Reduced words in a free group `F_n` or a free product `F_n * Z^k`,
//! together with endomorphisms given by generator images.
//!
//! Words do not carry their alphabet: the normal form depends only on the
//! generator ids. An [`Alphabet`] names generators, validates words and
//! converts between words and their text form (`x1 y^-1 x1^3`).

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A generator of `F_n` (`Free`) or of one of the free abelian factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenId {
    Free(u32),
    Abelian { block: u32, index: u32 },
}

impl GenId {
    pub fn block(&self) -> Option<u32> {
        match *self {
            GenId::Free(_) => None,
            GenId::Abelian { block, .. } => Some(block),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, GenId::Free(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub gen: GenId,
    pub exp: BigInt,
}

/// A word in normal form.
///
/// Adjacent syllables never share a generator, and every maximal run of
/// syllables from one abelian block is sorted by generator index.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

// Appends `gen^exp` to a word that is already in normal form.
fn push_syllable(stack: &mut Vec<Syllable>, gen: GenId, exp: BigInt) {
    if exp.is_zero() {
        return;
    }
    match gen.block() {
        None => {
            if let Some(top) = stack.last_mut() {
                if top.gen == gen {
                    top.exp += exp;
                    if top.exp.is_zero() {
                        stack.pop();
                    }
                    return;
                }
            }
            stack.push(Syllable { gen, exp });
        }
        Some(b) => {
            let mut start = stack.len();
            while start > 0 && stack[start - 1].gen.block() == Some(b) {
                start -= 1;
            }
            match stack[start..].binary_search_by(|s| s.gen.cmp(&gen)) {
                Ok(i) => {
                    let slot = &mut stack[start + i];
                    slot.exp += exp;
                    if slot.exp.is_zero() {
                        stack.remove(start + i);
                    }
                }
                Err(i) => stack.insert(start + i, Syllable { gen, exp }),
            }
        }
    }
}

/// Brings an arbitrary syllable sequence into normal form.
pub fn reduce<I, E>(raw: I) -> Word
where
    I: IntoIterator<Item = (GenId, E)>,
    E: Into<BigInt>,
{
    let mut stack = Vec::new();
    for (gen, exp) in raw {
        push_syllable(&mut stack, gen, exp.into());
    }
    Word { syllables: stack }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn gen(gen: GenId) -> Self {
        Word { syllables: vec![Syllable { gen, exp: BigInt::one() }] }
    }

    pub fn power_of(gen: GenId, exp: impl Into<BigInt>) -> Self {
        reduce([(gen, exp.into())])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn letter_len(&self) -> BigInt {
        self.syllables.iter().map(|s| s.exp.abs()).sum()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut stack = self.syllables.clone();
        for s in &other.syllables {
            push_syllable(&mut stack, s.gen, s.exp.clone());
        }
        Word { syllables: stack }
    }

    pub fn inverse(&self) -> Word {
        // Reversal keeps abelian runs contiguous, so re-reduce to restore order.
        reduce(self.syllables.iter().rev().map(|s| (s.gen, -&s.exp)))
    }

    pub fn pow(&self, n: &BigInt) -> Word {
        let base = if n.is_negative() { self.inverse() } else { self.clone() };
        let mag = n.magnitude();
        let mut acc = Word::identity();
        let mut sq = base;
        let bits = mag.bits();
        for i in 0..bits {
            if mag.bit(i) {
                acc = acc.multiply(&sq);
            }
            if i + 1 < bits {
                sq = sq.multiply(&sq);
            }
        }
        acc
    }

    /// `self^by = by^-1 self by`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.inverse().multiply(self).multiply(by)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().multiply(&b.inverse()).multiply(a).multiply(b)
    }

    /// `[b, _k a] = [[b, _{k-1} a], a]` with `[b, _1 a] = [b, a]`.
    pub fn left_normed_commutator(b: &Word, a: &Word, k: usize) -> Result<Word> {
        if k == 0 {
            return Err(Error::ZeroDepth);
        }
        let mut acc = b.clone();
        for _ in 0..k {
            acc = Word::commutator(&acc, a);
        }
        Ok(acc)
    }

    /// Left-normed commutator `[w1, w2, ..., wk]`.
    pub fn commutator_of(items: &[Word]) -> Word {
        let mut iter = items.iter();
        let Some(first) = iter.next() else { return Word::identity() };
        iter.fold(first.clone(), |acc, w| Word::commutator(&acc, w))
    }

    pub fn exponent_sum(&self, gen: GenId) -> BigInt {
        self.syllables.iter().filter(|s| s.gen == gen).map(|s| s.exp.clone()).sum()
    }

    /// Number of syllables carrying `gen`.
    pub fn occurrences(&self, gen: GenId) -> usize {
        self.syllables.iter().filter(|s| s.gen == gen).count()
    }

    pub fn generators_used(&self) -> Vec<GenId> {
        let mut gens: Vec<GenId> = self.syllables.iter().map(|s| s.gen).collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Substitutes `image(g)` for every generator `g`.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(GenId) -> Word,
    {
        let mut acc = Word::identity();
        for s in &self.syllables {
            acc = acc.multiply(&image(s.gen).pow(&s.exp));
        }
        acc
    }

    /// Conjugates away matching first/last syllables of a word in a free group.
    pub fn cyclically_reduce(&self) -> Word {
        let mut w = self.clone();
        while w.syllables.len() >= 2 {
            let first = &w.syllables[0];
            let last = &w.syllables[w.syllables.len() - 1];
            if first.gen != last.gen || first.gen.block().is_some() {
                break;
            }
            let mut syl = w.syllables.clone();
            let last = syl.pop().unwrap();
            w = reduce(std::iter::once((last.gen, last.exp)).chain(syl.into_iter().map(|s| (s.gen, s.exp))));
        }
        w
    }

    /// Rotations at syllable boundaries (the word itself first).
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.syllables.len();
        (0..n.max(1))
            .map(|i| {
                let rotated = self.syllables[i..].iter().chain(&self.syllables[..i]);
                reduce(rotated.map(|s| (s.gen, s.exp.clone())))
            })
            .collect()
    }

    /// Canonical representative of the cyclic word of `self` and its inverse:
    /// the least syllable-boundary rotation of either cyclic reduction.
    pub fn canonical_cyclic(&self) -> Word {
        let fwd = self.cyclically_reduce();
        let inv = fwd.inverse().cyclically_reduce();
        fwd.rotations()
            .into_iter()
            .chain(inv.rotations())
            .min()
            .unwrap_or_default()
    }

    /// Exponent-sum vector over the given generator order.
    pub fn abelianize(&self, gens: &[GenId]) -> Vec<BigInt> {
        gens.iter().map(|&g| self.exponent_sum(g)).collect()
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.multiply(&rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match s.gen {
                GenId::Free(k) => write!(f, "g{k}")?,
                GenId::Abelian { block, index } => write!(f, "a{block}_{index}")?,
            }
            if !s.exp.is_one() {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

/// Generator names for a free part plus any number of free abelian blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    free: Vec<String>,
    blocks: Vec<Vec<String>>,
}

impl Alphabet {
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet { free: names.into_iter().map(Into::into).collect(), blocks: Vec::new() }
    }

    pub fn with_block<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.blocks.push(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn is_free(&self) -> bool {
        self.blocks.iter().all(|b| b.is_empty())
    }

    /// Total number of generators.
    pub fn len(&self) -> usize {
        self.free.len() + self.blocks.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All generators: free ones first, then each block in order.
    pub fn generators(&self) -> Vec<GenId> {
        let mut out: Vec<GenId> = (0..self.free.len() as u32).map(GenId::Free).collect();
        for (b, names) in self.blocks.iter().enumerate() {
            out.extend((0..names.len() as u32).map(|i| GenId::Abelian { block: b as u32, index: i }));
        }
        out
    }

    pub fn position(&self, gen: GenId) -> Option<usize> {
        match gen {
            GenId::Free(i) => ((i as usize) < self.free.len()).then_some(i as usize),
            GenId::Abelian { block, index } => {
                let names = self.blocks.get(block as usize)?;
                if (index as usize) >= names.len() {
                    return None;
                }
                let before: usize = self.blocks[..block as usize].iter().map(Vec::len).sum();
                Some(self.free.len() + before + index as usize)
            }
        }
    }

    pub fn contains(&self, gen: GenId) -> bool {
        self.position(gen).is_some()
    }

    pub fn name(&self, gen: GenId) -> Option<&str> {
        match gen {
            GenId::Free(i) => self.free.get(i as usize).map(String::as_str),
            GenId::Abelian { block, index } => {
                self.blocks.get(block as usize)?.get(index as usize).map(String::as_str)
            }
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators().into_iter().filter_map(|g| self.name(g)).collect()
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.generators().into_iter().find(|&g| self.name(g) == Some(name))
    }

    pub fn validate(&self, w: &Word) -> Result<()> {
        for s in w.syllables() {
            if !self.contains(s.gen) {
                return Err(Error::AlphabetMismatch(format!(
                    "{:?} is outside an alphabet of {} generators",
                    s.gen,
                    self.len()
                )));
            }
        }
        Ok(())
    }

    /// Parses whitespace-separated `name` / `name^k` tokens; `1` is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let exp: BigInt = e.parse().map_err(|_| Error::Parse {
                        token: token.to_string(),
                        reason: "exponent is not an integer".into(),
                    })?;
                    (n, exp)
                }
                None => (token, BigInt::one()),
            };
            let gen = self.lookup(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            raw.push((gen, exp));
        }
        Ok(reduce(raw))
    }

    pub fn show(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.syllables()
            .iter()
            .map(|s| {
                let name = self.name(s.gen).map(str::to_string).unwrap_or_else(|| format!("{:?}", s.gen));
                if s.exp.is_one() {
                    name
                } else {
                    format!("{name}^{}", s.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// An endomorphism given by the images of all generators of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endo {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Endo {
    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.generators().into_iter().map(Word::gen).collect();
        Endo { alphabet, images }
    }

    /// Images are listed in [`Alphabet::generators`] order.
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} generators",
                images.len(),
                alphabet.len()
            )));
        }
        for w in &images {
            alphabet.validate(w)?;
        }
        Ok(Endo { alphabet, images })
    }

    /// Builds an endo from a rule; generators the rule leaves out are fixed.
    pub fn from_rule<F>(alphabet: Alphabet, mut rule: F) -> Result<Self>
    where
        F: FnMut(GenId) -> Option<Word>,
    {
        let images = alphabet.generators().into_iter().map(|g| rule(g).unwrap_or_else(|| Word::gen(g))).collect();
        Endo::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: GenId) -> Option<&Word> {
        self.alphabet.position(gen).map(|p| &self.images[p])
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.alphabet.validate(w)?;
        Ok(self.apply_valid(w))
    }

    pub(crate) fn apply_valid(&self, w: &Word) -> Word {
        w.substitute(|g| self.images[self.alphabet.position(g).expect("validated")].clone())
    }

    /// `outer ∘ inner`: applies `inner` first, then `outer`.
    pub fn compose(outer: &Endo, inner: &Endo) -> Result<Endo> {
        if outer.alphabet != inner.alphabet {
            return Err(Error::AlphabetMismatch("composing endos over different alphabets".into()));
        }
        let images = inner.images.iter().map(|w| outer.apply_valid(w)).collect();
        Ok(Endo { alphabet: outer.alphabet.clone(), images })
    }

    pub fn is_identity(&self) -> bool {
        self.alphabet.generators().into_iter().zip(&self.images).all(|(g, w)| *w == Word::gen(g))
    }

    pub fn is_mutually_inverse(a: &Endo, b: &Endo) -> Result<bool> {
        Ok(Endo::compose(a, b)?.is_identity() && Endo::compose(b, a)?.is_identity())
    }
}
