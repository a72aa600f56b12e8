//! Finitely presented groups: construction from virtual braids and from
//! labeled diagrams, Tietze simplification, abelianization and quotients.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::braid::{represent, BraidWord, Rep};
use crate::error::{Error, Result};
use crate::words::{Alphabet, GenId, Word};
use crate::zlattice::{cokernel, AbelianInvariants, IntMatrix};

/// Generators and relators of a finitely presented group.
///
/// Relators are stored cyclically reduced in a canonical rotation (least
/// among the rotations of the relator and its inverse); trivial and
/// duplicate relators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    provenance: String,
}

fn normalize(relators: impl IntoIterator<Item = Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        let c = r.canonical_cyclic();
        if !c.is_identity() && seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

impl Presentation {
    pub fn new<S: Into<String>>(
        generators: impl IntoIterator<Item = S>,
        relators: Vec<Word>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let names: Vec<String> = generators.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Invalid(format!("duplicate generator `{n}`")));
            }
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || c == '^') || n == "1" {
                return Err(Error::Invalid(format!("bad generator name `{n}`")));
            }
        }
        let alphabet = Alphabet::free(names);
        for r in &relators {
            alphabet.validate(r)?;
        }
        Ok(Presentation { alphabet, relators: normalize(relators), provenance: provenance.into() })
    }

    /// Relators in text form, e.g. `["x^-1 y^-1 x y"]`.
    pub fn parse<S: AsRef<str>>(generators: &[&str], relators: &[S], provenance: &str) -> Result<Self> {
        let alphabet = Alphabet::free(generators.iter().copied());
        let words = relators.iter().map(|r| alphabet.parse_word(r.as_ref())).collect::<Result<Vec<_>>>()?;
        Presentation::new(generators.iter().copied(), words, provenance)
    }

    pub fn free_group(rank: usize) -> Self {
        let names: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
        Presentation::new(names, vec![], format!("free group of rank {rank}")).expect("valid names")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> Vec<&str> {
        self.alphabet.names()
    }

    pub fn num_generators(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn generator(&self, name: &str) -> Result<GenId> {
        self.alphabet.lookup(name).ok_or_else(|| Error::MissingGenerator(name.to_string()))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse_word(text)
    }

    pub fn show(&self, w: &Word) -> String {
        self.alphabet.show(w)
    }

    pub fn relator_texts(&self) -> Vec<String> {
        self.relators.iter().map(|r| self.show(r)).collect()
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<Presentation> {
        self.generator(from)?;
        let names: Vec<String> =
            self.generators().into_iter().map(|n| if n == from { to.to_string() } else { n.to_string() }).collect();
        Presentation::new(names, self.relators.clone(), self.provenance.clone())
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let gens = self.alphabet.generators();
        if self.relators.is_empty() {
            return IntMatrix::zeros(0, gens.len());
        }
        let rows: Vec<Vec<BigInt>> = self.relators.iter().map(|r| r.abelianize(&gens)).collect();
        IntMatrix::from_rows(&rows)
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        let m = self.relation_matrix();
        if m.nrows() == 0 {
            return AbelianInvariants::free(self.num_generators());
        }
        cokernel(&m)
    }

    pub fn add_relators(&self, extra: &[Word]) -> Result<Presentation> {
        for w in extra {
            self.alphabet.validate(w)?;
        }
        let relators = self.relators.iter().chain(extra).cloned().collect();
        Presentation::new(self.generators(), relators, self.provenance.clone())
    }

    /// Kills the generator `y` and erases it from every relator.
    pub fn kauffman_quotient(&self) -> Result<Presentation> {
        self.delete_generator("y").map(|p| p.with_provenance(format!("{} / <<y>>", self.provenance)))
    }

    fn delete_generator(&self, name: &str) -> Result<Presentation> {
        let target = self.generator(name)?;
        self.eliminate(target, &Word::identity())
    }

    // Replaces `target` by `value` (a word in the other generators) and drops it.
    fn eliminate(&self, target: GenId, value: &Word) -> Result<Presentation> {
        let GenId::Free(t) = target else { return Err(Error::NotFree) };
        let renumber = |g: GenId| match g {
            GenId::Free(k) if k > t => GenId::Free(k - 1),
            other => other,
        };
        let value = value.substitute(|g| Word::gen(renumber(g)));
        let relators = self
            .relators
            .iter()
            .map(|r| r.substitute(|g| if g == target { value.clone() } else { Word::gen(renumber(g)) }))
            .collect();
        let names: Vec<&str> = self.generators().into_iter().enumerate().filter(|&(i, _)| i != t as usize).map(|(_, n)| n).collect();
        Presentation::new(names, relators, self.provenance.clone())
    }

    /// Deterministic Tietze simplification.
    ///
    /// Two moves are repeated until neither applies:
    /// - a relator `g^k` with `|k| >= 2` reduces every exponent of `g` in the
    ///   other relators into `[-|k|/2, |k|/2]` (a symmetric range, so that
    ///   the canonical form's choice between a relator and its inverse
    ///   cannot undo the move);
    /// - the shortest relator (ties broken by the canonical word order)
    ///   containing a generator exactly once with exponent ±1 is solved for
    ///   that generator (the last such in generator order), which is then
    ///   substituted everywhere.
    ///
    /// At most `budget` generators are eliminated.
    pub fn tietze_simplify(&self, budget: usize) -> TietzeOutcome {
        let mut current = self.reduce_powers();
        let mut eliminated = Vec::new();
        loop {
            let Some((gen, value)) = current.find_elimination() else {
                return TietzeOutcome { presentation: current, eliminated, complete: true };
            };
            if eliminated.len() == budget {
                return TietzeOutcome { presentation: current, eliminated, complete: false };
            }
            eliminated.push(current.alphabet.name(gen).unwrap_or_default().to_string());
            current = current.eliminate(gen, &value).expect("elimination stays in the alphabet").reduce_powers();
        }
    }

    // One power relator per pass, the smallest exponent first: reducing with
    // several at once could use a relator that the same pass already rewrote.
    fn reduce_powers(&self) -> Presentation {
        let mut current = self.clone();
        loop {
            let mut powers: Vec<(Word, GenId, BigInt)> = current
                .relators
                .iter()
                .filter_map(|r| match r.syllables() {
                    [s] if s.exp.abs() >= BigInt::from(2) => Some((r.clone(), s.gen, s.exp.abs())),
                    _ => None,
                })
                .collect();
            powers.sort_by(|a, b| a.2.cmp(&b.2).then_with(|| a.0.cmp(&b.0)));
            let next = powers.iter().find_map(|(power_rel, gen, k)| {
                let half = k / 2;
                let mut changed = false;
                let relators: Vec<Word> = current
                    .relators
                    .iter()
                    .map(|r| {
                        if r == power_rel || !r.syllables().iter().any(|s| s.gen == *gen && s.exp.abs() > half) {
                            return r.clone();
                        }
                        changed = true;
                        crate::words::reduce(r.syllables().iter().map(|s| {
                            if s.gen != *gen || s.exp.abs() <= half {
                                return (s.gen, s.exp.clone());
                            }
                            let mut e = s.exp.mod_floor(k);
                            if e > half {
                                e -= k;
                            }
                            (s.gen, e)
                        }))
                    })
                    .collect();
                changed.then(|| Presentation::new(current.generators(), relators, current.provenance.clone()).expect("same alphabet"))
            });
            match next {
                Some(p) => current = p,
                None => return current,
            }
        }
    }

    /// Splits off free factors: generators are grouped by the relators that
    /// join them, and each group with its relators is returned separately, in
    /// order of first generator.
    pub fn free_factors(&self) -> Vec<Presentation> {
        let n = self.num_generators();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let index = |g: GenId| self.alphabet.position(g).expect("validated");
        for r in &self.relators {
            let used = r.generators_used();
            for pair in used.windows(2) {
                let (a, b) = (find(&mut parent, index(pair[0])), find(&mut parent, index(pair[1])));
                parent[a.max(b)] = a.min(b);
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let names = self.generators();
        let mut out = Vec::new();
        for root in (0..n).filter(|&i| roots[i] == i) {
            let members: Vec<usize> = (0..n).filter(|&i| roots[i] == root).collect();
            let renumber = |g: GenId| {
                let i = members.iter().position(|&m| m == index(g)).expect("same component");
                Word::gen(GenId::Free(i as u32))
            };
            let relators = self
                .relators
                .iter()
                .filter(|r| r.generators_used().first().is_some_and(|&g| roots[index(g)] == root))
                .map(|r| r.substitute(renumber))
                .collect();
            let factor_names: Vec<&str> = members.iter().map(|&i| names[i]).collect();
            out.push(Presentation::new(factor_names, relators, self.provenance.clone()).expect("subset of names"));
        }
        out
    }

    fn find_elimination(&self) -> Option<(GenId, Word)> {
        let mut order: Vec<&Word> = self.relators.iter().collect();
        order.sort_by(|a, b| a.letter_len().cmp(&b.letter_len()).then_with(|| a.cmp(b)));
        for r in order {
            for gen in self.alphabet.generators().into_iter().rev() {
                let syl = r.syllables();
                let hits: Vec<usize> = (0..syl.len()).filter(|&i| syl[i].gen == gen).collect();
                if hits.len() != 1 || !syl[hits[0]].exp.abs().is_one() {
                    continue;
                }
                let i = hits[0];
                // rotate to g^e w
                let rest: Word = crate::words::reduce(
                    syl[i + 1..].iter().chain(&syl[..i]).map(|s| (s.gen, s.exp.clone())),
                );
                let value = if syl[i].exp.is_one() { rest.inverse() } else { rest };
                return Some((gen, value));
            }
        }
        None
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            generators: self.generators().into_iter().map(str::to_string).collect(),
            relators: self.relator_texts(),
        }
    }

    pub fn from_json(p: &PresentationJson) -> Result<Presentation> {
        let gens: Vec<&str> = p.generators.iter().map(String::as_str).collect();
        Presentation::parse(&gens, &p.relators, "json")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | {} >", self.generators().join(", "), self.relator_texts().join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TietzeOutcome {
    pub presentation: Presentation,
    /// Generators removed, in order.
    pub eliminated: Vec<String>,
    /// `false` when the budget ran out before a fixpoint.
    pub complete: bool,
}

/// `G_phi(beta) = < h_i | R, h_i = phi(beta)(h_i) >` with relators `h_i^-1 phi(beta)(h_i)`.
pub fn group_from_braid(rep: Rep, b: &BraidWord) -> Presentation {
    let endo = represent(rep, b);
    let alphabet = endo.alphabet().clone();
    let n = alphabet.free_rank() as u32;
    // presentation generators are all free; abelian block generators follow the free ones
    let flatten = |g: GenId| match g {
        GenId::Free(k) => GenId::Free(k),
        GenId::Abelian { index, .. } => GenId::Free(n + index),
    };
    let mut relators = Vec::new();
    for (g, img) in alphabet.generators().into_iter().zip(endo.images()) {
        let rel = Word::gen(g).inverse().multiply(img);
        relators.push(rel.substitute(|h| Word::gen(flatten(h))));
    }
    if rep == Rep::M {
        let k = alphabet.len() as u32 - n;
        for i in 0..k {
            for j in i + 1..k {
                relators.push(Word::commutator(&Word::gen(GenId::Free(n + i)), &Word::gen(GenId::Free(n + j))));
            }
        }
    }
    let names: Vec<&str> = alphabet.names();
    Presentation::new(names, relators, format!("G_{rep}({b}) on {} strands", b.strands())).expect("alphabet names are valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealCrossing {
    pub over: String,
    pub under_in: String,
    pub under_out: String,
    /// `+1`: `underOut = over^-1 underIn over`; `-1`: `underOut = over underIn over^-1`.
    pub sign: i32,
}

/// A virtual crossing. The `a` strand leaves as `aIn^y = y^-1 aIn y`, the
/// `b` strand as `bIn^(y^-1) = y bIn y^-1`, mirroring `x_{i+1} -> x_i^y`
/// and `x_i -> x_{i+1}^(y^-1)` of the `rho_i` images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VirtualCrossing {
    pub a_in: String,
    pub a_out: String,
    pub b_in: String,
    pub b_out: String,
}

/// A closed oriented virtual knot diagram cut into arcs at every crossing
/// endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub arcs: Vec<String>,
    #[serde(default)]
    pub real: Vec<RealCrossing>,
    #[serde(default, rename = "virtual")]
    pub virtual_crossings: Vec<VirtualCrossing>,
}

impl Diagram {
    pub fn from_json(text: &str) -> Result<Diagram> {
        serde_json::from_str(text).map_err(|e| Error::Diagram(e.to_string()))
    }

    /// Every arc must start at exactly one crossing and end at exactly one.
    pub fn validate(&self) -> Result<()> {
        let mut starts = vec![0usize; self.arcs.len()];
        let mut ends = vec![0usize; self.arcs.len()];
        let idx = |name: &str| {
            self.arcs.iter().position(|a| a == name).ok_or_else(|| Error::Diagram(format!("unknown arc `{name}`")))
        };
        let mut seen = HashSet::new();
        for a in &self.arcs {
            if a == "y" || !seen.insert(a) {
                return Err(Error::Diagram(format!("arc name `{a}` is reserved or duplicated")));
            }
        }
        for c in &self.real {
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::Diagram(format!("crossing sign {} is not ±1", c.sign)));
            }
            idx(&c.over)?;
            ends[idx(&c.under_in)?] += 1;
            starts[idx(&c.under_out)?] += 1;
        }
        for c in &self.virtual_crossings {
            ends[idx(&c.a_in)?] += 1;
            starts[idx(&c.a_out)?] += 1;
            ends[idx(&c.b_in)?] += 1;
            starts[idx(&c.b_out)?] += 1;
        }
        for (i, a) in self.arcs.iter().enumerate() {
            if starts[i] != 1 || ends[i] != 1 {
                return Err(Error::Diagram(format!(
                    "arc `{a}` starts at {} and ends at {} crossings",
                    starts[i], ends[i]
                )));
            }
        }
        Ok(())
    }
}

/// One generator per arc plus `y`; a conjugation relation per real crossing
/// and two `y`-conjugation relations per virtual crossing.
pub fn group_from_diagram(d: &Diagram) -> Result<Presentation> {
    d.validate()?;
    let mut names: Vec<&str> = d.arcs.iter().map(String::as_str).collect();
    names.push("y");
    let alphabet = Alphabet::free(names.iter().copied());
    let arc = |n: &str| Word::gen(alphabet.lookup(n).expect("validated arc"));
    let y = arc("y");
    let mut relators = Vec::new();
    for c in &d.real {
        let over = if c.sign == 1 { arc(&c.over) } else { arc(&c.over).inverse() };
        relators.push(arc(&c.under_out).inverse().multiply(&arc(&c.under_in).conjugate(&over)));
    }
    for c in &d.virtual_crossings {
        relators.push(arc(&c.a_out).inverse().multiply(&arc(&c.a_in).conjugate(&y)));
        relators.push(arc(&c.b_out).inverse().multiply(&arc(&c.b_in).conjugate(&y.inverse())));
    }
    Presentation::new(names, relators, "diagram")
}
