//! Rewriting one-relator presentations along their map to `Z`, detecting
//! free-by-cyclic structure and certifying residual nilpotence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GenId, Word};
use crate::zlattice::{find_congruence_pair, unipotency_exponent, IntMatrix};

/// A reduced word in the conjugates `g_k = s^-k t s^k`, `k` in `Z`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftedWord {
    syllables: Vec<(i64, BigInt)>,
}

/// Relators of the `Z`-cover are ordinary shifted words.
pub type ShiftedRelator = ShiftedWord;

impl ShiftedWord {
    pub fn new<E: Into<BigInt>>(raw: impl IntoIterator<Item = (i64, E)>) -> Self {
        let mut out: Vec<(i64, BigInt)> = Vec::new();
        for (k, e) in raw {
            let e = e.into();
            match out.last_mut() {
                Some((j, f)) if *j == k => {
                    *f += e;
                    if f.is_zero() {
                        out.pop();
                    }
                }
                _ if e.is_zero() => {}
                _ => out.push((k, e)),
            }
        }
        ShiftedWord { syllables: out }
    }

    pub fn syllables(&self) -> &[(i64, BigInt)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// `(min index, max index)`, `None` for the empty word.
    pub fn span(&self) -> Option<(i64, i64)> {
        let min = self.syllables.iter().map(|s| s.0).min()?;
        let max = self.syllables.iter().map(|s| s.0).max()?;
        Some((min, max))
    }

    pub fn inverse(&self) -> ShiftedWord {
        ShiftedWord { syllables: self.syllables.iter().rev().map(|(k, e)| (*k, -e)).collect() }
    }

    pub fn multiply(&self, other: &ShiftedWord) -> ShiftedWord {
        ShiftedWord::new(self.syllables.iter().chain(&other.syllables).cloned())
    }

    pub fn shift(&self, by: i64) -> ShiftedWord {
        ShiftedWord { syllables: self.syllables.iter().map(|(k, e)| (k + by, e.clone())).collect() }
    }

    /// Exponent sum per index over `lo..=hi`.
    pub fn exponent_vector(&self, lo: i64, hi: i64) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); (hi - lo + 1).max(0) as usize];
        for (k, e) in &self.syllables {
            if (lo..=hi).contains(k) {
                v[(k - lo) as usize] += e;
            }
        }
        v
    }

    fn cyclically_reduce(&self) -> ShiftedWord {
        let mut s = self.syllables.clone();
        while s.len() > 1 && s[0].0 == s[s.len() - 1].0 {
            let (_, e) = s.pop().expect("nonempty");
            s[0].1 += e;
            if s[0].1.is_zero() {
                s.remove(0);
            }
        }
        ShiftedWord { syllables: s }
    }

    fn rotated(&self, i: usize) -> ShiftedWord {
        let mut s = self.syllables[i..].to_vec();
        s.extend_from_slice(&self.syllables[..i]);
        ShiftedWord { syllables: s }
    }

    /// Least index translated to 0, then the least rotation of the word or
    /// its inverse.
    pub fn normalize(&self) -> ShiftedWord {
        let c = self.cyclically_reduce();
        let Some((lo, _)) = c.span() else { return c };
        let c = c.shift(-lo);
        let inv = c.inverse();
        (0..c.syllables.len())
            .flat_map(|i| [c.rotated(i), inv.rotated(i)])
            .min()
            .expect("nonempty")
    }

    pub fn occurrences(&self, k: i64) -> usize {
        self.syllables.iter().filter(|s| s.0 == k).count()
    }

    pub fn parse(text: &str) -> Result<ShiftedWord> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = |reason: &str| Error::Parse { token: tok.to_string(), reason: reason.to_string() };
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<BigInt>().map_err(|_| bad("bad exponent"))?),
                None => (tok, BigInt::one()),
            };
            let index = base
                .strip_prefix('g')
                .and_then(|i| i.parse::<i64>().ok())
                .ok_or_else(|| bad("expected g<index>"))?;
            raw.push((index, exp));
        }
        Ok(ShiftedWord::new(raw))
    }

    // Rotates so that the unique occurrence of index k comes first and solves
    // `g_k^e w = 1` for `g_k`.
    fn isolate(&self, k: i64) -> ShiftedWord {
        let i = self.syllables.iter().position(|s| s.0 == k).expect("index occurs");
        let r = self.rotated(i);
        let rest = ShiftedWord::new(r.syllables[1..].iter().cloned());
        if r.syllables[0].1.is_one() {
            rest.inverse()
        } else {
            rest
        }
    }
}

impl fmt::Display for ShiftedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(k, e)| if e.is_one() { format!("g{k}") } else { format!("g{k}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Relators of a two-generator presentation rewritten in the conjugates
/// `g_k = s^-k t s^k` of the non-stable generator `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZRewrite {
    pub stable: String,
    pub other: String,
    pub relators: Vec<ShiftedRelator>,
}

/// Each relator must have zero exponent sum in the stable generator `s`, so
/// that it lies in the kernel of `G -> Z`, `s -> 1`, `t -> 0`.
pub fn rewrite_along_z(p: &Presentation, stable: &str) -> Result<ZRewrite> {
    if p.num_generators() != 2 {
        return Err(Error::Unsupported(format!(
            "rewriting along Z needs exactly 2 generators, found {}",
            p.num_generators()
        )));
    }
    let s = p.generator(stable)?;
    let t = if s == GenId::Free(0) { GenId::Free(1) } else { GenId::Free(0) };
    let mut relators = Vec::new();
    for r in p.relators() {
        let sum = r.exponent_sum(s);
        if !sum.is_zero() {
            return Err(Error::NonzeroExponentSum { relator: p.show(r), sum });
        }
        relators.push(rewrite_word(r, s, t));
    }
    Ok(ZRewrite {
        stable: stable.to_string(),
        other: p.alphabet().name(t).expect("two generators").to_string(),
        relators,
    })
}

// s^p t^e s^-p = g_{-p}^e, with p the stable exponent sum of the prefix.
fn rewrite_word(w: &Word, s: GenId, t: GenId) -> ShiftedWord {
    let mut prefix = BigInt::zero();
    let mut raw = Vec::new();
    for syl in w.syllables() {
        if syl.gen == s {
            prefix += &syl.exp;
        } else {
            debug_assert_eq!(syl.gen, t);
            let k = (-&prefix).to_i64().expect("index fits in i64");
            raw.push((k, syl.exp.clone()));
        }
    }
    ShiftedWord::new(raw)
}

/// The kernel of `G -> Z` is free on `g_0..g_{r-1}` and the stable letter
/// acts by `g_i -> g_{i+1}`, `g_{r-1} -> top_rule`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FbcDecomposition {
    pub rank: usize,
    /// The normalized relator the decomposition was read from.
    pub relator: ShiftedRelator,
    /// `g_r` as a word in `g_0..g_{r-1}`.
    pub top_rule: ShiftedWord,
    /// `g_{-1}` as a word in `g_0..g_{r-1}`.
    pub bottom_rule: ShiftedWord,
    /// Row `i` is the abelianized image of `g_i`.
    pub action_matrix: IntMatrix,
}

impl FbcDecomposition {
    pub fn top_rule_text(&self) -> String {
        format!("g{} = {}", self.rank, self.top_rule)
    }

    /// `< s, g_0..g_{r-1} | g_i^s = g_{i+1}, g_{r-1}^s = top_rule >`.
    pub fn semidirect_presentation(&self, stable: &str) -> Presentation {
        let r = self.rank as u32;
        let mut names = vec![stable.to_string()];
        names.extend((0..r).map(|i| format!("g{i}")));
        let s = Word::gen(GenId::Free(0));
        let g = |k: i64| Word::gen(GenId::Free(k as u32 + 1));
        let to_word = |w: &ShiftedWord| {
            crate::words::reduce(w.syllables().iter().map(|(k, e)| (GenId::Free(*k as u32 + 1), e.clone())))
        };
        let mut relators = Vec::new();
        for i in 0..r as i64 {
            let image = if i + 1 < r as i64 { g(i + 1) } else { to_word(&self.top_rule) };
            relators.push(g(i).conjugate(&s).multiply(&image.inverse()));
        }
        Presentation::new(names, relators, format!("semidirect product F_{r} x| Z")).expect("fresh names")
    }
}

/// Succeeds when the extreme indices of the single relator each occur once
/// with exponent `±1`; `None` otherwise.
pub fn fbc_decompose(rels: &[ShiftedRelator]) -> Result<Option<FbcDecomposition>> {
    let rel = single_relator(rels)?;
    let Some((_, r)) = rel.span() else { return Ok(None) };
    if r == 0 {
        return Ok(None);
    }
    let unit_once = |k: i64| {
        rel.occurrences(k) == 1 && rel.syllables().iter().any(|(j, e)| *j == k && e.abs().is_one())
    };
    if !unit_once(0) || !unit_once(r) {
        return Ok(None);
    }
    let top_rule = rel.isolate(r);
    let bottom_rule = rel.isolate(0).shift(-1);
    let rank = r as usize;
    let mut rows = Vec::with_capacity(rank);
    for i in 0..rank {
        if i + 1 < rank {
            let mut e = vec![BigInt::zero(); rank];
            e[i + 1] = BigInt::one();
            rows.push(e);
        } else {
            rows.push(top_rule.exponent_vector(0, r - 1));
        }
    }
    Ok(Some(FbcDecomposition { rank, relator: rel, top_rule, bottom_rule, action_matrix: IntMatrix::from_rows(&rows) }))
}

fn single_relator(rels: &[ShiftedRelator]) -> Result<ShiftedRelator> {
    match rels {
        [] => Err(Error::EmptyRelators),
        [r] => Ok(r.normalize()),
        _ => Err(Error::Unsupported(format!("{} relators; only one-relator covers are handled", rels.len()))),
    }
}

pub const DEFAULT_M_MAX: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "certificate")]
pub enum Verdict {
    /// `(A - I)^exponent = 0`.
    ResiduallyNilpotent { exponent: usize },
    /// Every entry of `(A - I)^m` is divisible by `modulus`.
    LcsLengthAtMostOmegaSquared {
        m: usize,
        #[serde(with = "decimal")]
        modulus: BigInt,
    },
    Inconclusive { reason: String },
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ResiduallyNilpotent { exponent } => {
                write!(f, "residually nilpotent: (A - I)^{exponent} = 0")
            }
            Verdict::LcsLengthAtMostOmegaSquared { m, modulus } => {
                write!(f, "lower central series length at most omega^2: (A - I)^{m} = 0 mod {modulus}")
            }
            Verdict::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
        }
    }
}

pub fn residual_nilpotence_verdict(d: &FbcDecomposition, m_max: usize) -> Verdict {
    let a = &d.action_matrix;
    if let Some(k) = unipotency_exponent(a, d.rank).expect("square") {
        return Verdict::ResiduallyNilpotent { exponent: k };
    }
    match find_congruence_pair(a, m_max).expect("square") {
        Some((m, modulus)) => Verdict::LcsLengthAtMostOmegaSquared { m, modulus },
        None => Verdict::Inconclusive {
            reason: format!("A - I is not nilpotent and no power up to {m_max} has a common divisor"),
        },
    }
}

/// Re-derives a verdict's certificate from the action matrix.
pub fn verify_verdict(d: &FbcDecomposition, v: &Verdict) -> bool {
    let shifted = d.action_matrix.sub(&IntMatrix::identity(d.rank));
    match v {
        Verdict::ResiduallyNilpotent { exponent } => shifted.pow(*exponent as u32).is_zero(),
        Verdict::LcsLengthAtMostOmegaSquared { m, modulus } => {
            *modulus >= BigInt::from(2)
                && shifted.pow(*m as u32).to_rows().iter().flatten().all(|x| (x % modulus).is_zero())
        }
        Verdict::Inconclusive { .. } => true,
    }
}

/// One piece `A_k` of the kernel as an amalgamated product along free
/// rank-2 subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AmalgamReport {
    pub piece_generators: Vec<String>,
    pub piece_relator: String,
    /// The `k = 0` piece relator in `g0, g1, g2`.
    pub base_relator: String,
    /// `A_k ∩ A_{k+1}`.
    pub edge_generators: Vec<String>,
    pub edge_free_rank: usize,
    pub shift: String,
}

fn symbolic(w: &ShiftedWord) -> String {
    let name = |k: i64| if k == 0 { "g_k".to_string() } else { format!("g_{{k+{k}}}") };
    w.syllables()
        .iter()
        .map(|(k, e)| if e.is_one() { name(*k) } else { format!("{}^{e}", name(*k)) })
        .collect::<Vec<_>>()
        .join(" ")
}

/// The relator must use exactly the indices `k, k+1, k+2` after translation.
///
/// `A_k = < g_k, g_{k+1}, g_{k+2} | r_k >` and the kernel is the union of the
/// `A_k` amalgamated along `<g_{k+1}, g_{k+2}>`. That subgroup is free of rank
/// 2 because the cyclically reduced relator involves `g_k`.
pub fn amalgam_report(rels: &[ShiftedRelator]) -> Result<AmalgamReport> {
    let rel = match rels {
        [] => return Err(Error::EmptyRelators),
        [r] => r,
        _ => return Err(Error::Unsupported(format!("{} relators", rels.len()))),
    };
    let reduced = rel.cyclically_reduce();
    let Some((lo, hi)) = reduced.span() else {
        return Err(Error::Unsupported("trivial relator".into()));
    };
    if hi - lo != 2 || reduced.occurrences(lo + 1) == 0 {
        return Err(Error::Unsupported(format!("relator spans g{lo}..g{hi}; a piece needs exactly 3 consecutive indices")));
    }
    let piece = rel.shift(-lo);
    Ok(AmalgamReport {
        piece_generators: vec!["g_k".into(), "g_{k+1}".into(), "g_{k+2}".into()],
        piece_relator: symbolic(&piece),
        base_relator: piece.to_string(),
        edge_generators: vec!["g_{k+1}".into(), "g_{k+2}".into()],
        edge_free_rank: 2,
        shift: "g_k -> g_{k+1}".into(),
    })
}
