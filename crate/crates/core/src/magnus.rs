//! Truncated Magnus series, Lyndon bases of the free Lie ring and Lie
//! coordinates of leading terms.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::{GenId, Word};

/// An element of `Z<<X_1..X_n>>` modulo monomials of degree above `cutoff`.
///
/// Coefficients are stored densely per degree: `blocks[d]` holds the `n^d`
/// coefficients of degree-`d` monomials, a monomial `X_{i1}..X_{id}` sitting
/// at the base-`n` index `i1 i2 .. id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    n: usize,
    cutoff: usize,
    blocks: Vec<Vec<BigInt>>,
}

fn binomial(e: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= e - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

impl TruncSeries {
    pub fn zero(n: usize, cutoff: usize) -> Self {
        let blocks = (0..=cutoff).map(|d| vec![BigInt::zero(); n.pow(d as u32)]).collect();
        TruncSeries { n, cutoff, blocks }
    }

    pub fn one(n: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(n, cutoff);
        s.blocks[0][0] = BigInt::one();
        s
    }

    /// `(1 + X_i)^e`, truncated.
    pub fn generator_power(n: usize, cutoff: usize, i: usize, e: &BigInt) -> Self {
        let mut s = Self::zero(n, cutoff);
        for k in 0..=cutoff {
            s.blocks[k][repeat_index(n, i, k)] = binomial(e, k);
        }
        s
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn constant(&self) -> &BigInt {
        &self.blocks[0][0]
    }

    /// Homogeneous component of degree `d`.
    pub fn block(&self, d: usize) -> &[BigInt] {
        &self.blocks[d]
    }

    pub fn coeff(&self, monomial: &[usize]) -> BigInt {
        if monomial.len() > self.cutoff {
            return BigInt::zero();
        }
        self.blocks[monomial.len()][monomial_index(self.n, monomial)].clone()
    }

    /// Nonzero terms as `(monomial, coefficient)`, by degree then index.
    pub fn terms(&self) -> Vec<(Vec<usize>, BigInt)> {
        let mut out = Vec::new();
        for (d, block) in self.blocks.iter().enumerate() {
            for (idx, c) in block.iter().enumerate() {
                if !c.is_zero() {
                    out.push((index_monomial(self.n, d, idx), c.clone()));
                }
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.constant().is_one() && self.blocks[1..].iter().all(|b| b.iter().all(Zero::is_zero))
    }

    /// Lowest positive degree with a nonzero component.
    pub fn leading_degree(&self) -> Option<usize> {
        (1..=self.cutoff).find(|&d| self.blocks[d].iter().any(|c| !c.is_zero()))
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        debug_assert_eq!((self.n, self.cutoff), (other.n, other.cutoff));
        let mut out = Self::zero(self.n, self.cutoff);
        for a in 0..=self.cutoff {
            for (i, x) in self.blocks[a].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for b in 0..=self.cutoff - a {
                    let shift = i * self.n.pow(b as u32);
                    let target = &mut out.blocks[a + b];
                    for (j, y) in other.blocks[b].iter().enumerate() {
                        if !y.is_zero() {
                            target[shift + j] += x * y;
                        }
                    }
                }
            }
        }
        out
    }

    /// Right multiplication by `(1 + X_i)^e`.
    pub fn mul_generator_power(&self, i: usize, e: &BigInt) -> TruncSeries {
        let mut out = Self::zero(self.n, self.cutoff);
        let coeffs: Vec<BigInt> = (0..=self.cutoff).map(|k| binomial(e, k)).collect();
        for a in 0..=self.cutoff {
            for (idx, x) in self.blocks[a].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (k, c) in coeffs.iter().enumerate().take(self.cutoff - a + 1) {
                    if !c.is_zero() {
                        let j = idx * self.n.pow(k as u32) + repeat_index(self.n, i, k);
                        out.blocks[a + k][j] += x * c;
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term `±1`.
    pub fn inverse(&self) -> TruncSeries {
        let c = self.constant().clone();
        assert!(c.abs().is_one(), "series is not a unit");
        // B_0 = c, B_d = -c * sum_{a>=1} A_a B_{d-a}
        let mut inv = Self::zero(self.n, self.cutoff);
        inv.blocks[0][0] = c.clone();
        for d in 1..=self.cutoff {
            let mut acc = vec![BigInt::zero(); self.n.pow(d as u32)];
            for a in 1..=d {
                let b = d - a;
                let stride = self.n.pow(b as u32);
                for (i, x) in self.blocks[a].iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in inv.blocks[b].iter().enumerate() {
                        if !y.is_zero() {
                            acc[i * stride + j] += x * y;
                        }
                    }
                }
            }
            inv.blocks[d] = acc.into_iter().map(|v| -(&c * v)).collect();
        }
        inv
    }

    pub fn pow(&self, e: &BigInt) -> TruncSeries {
        let mut base = if e.is_negative() { self.inverse() } else { self.clone() };
        let mut k = e.abs();
        let mut acc = Self::one(self.n, self.cutoff);
        while !k.is_zero() {
            if k.is_odd() {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if !k.is_zero() {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if m.is_empty() {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            let mono: Vec<String> = m.iter().map(|i| format!("X{}", i + 1)).collect();
            write!(f, "{}", mono.join(""))?;
        }
        Ok(())
    }
}

fn repeat_index(n: usize, i: usize, k: usize) -> usize {
    (0..k).fold(0, |acc, _| acc * n + i)
}

fn monomial_index(n: usize, m: &[usize]) -> usize {
    m.iter().fold(0, |acc, &i| acc * n + i)
}

fn index_monomial(n: usize, d: usize, mut idx: usize) -> Vec<usize> {
    let mut m = vec![0; d];
    for slot in m.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    m
}

/// Magnus image of a word over `n` free generators: `x_i -> 1 + X_i`.
pub fn magnus(w: &Word, n: usize, cutoff: usize) -> Result<TruncSeries> {
    if cutoff == 0 {
        return Err(Error::ZeroCutoff);
    }
    let mut s = TruncSeries::one(n, cutoff);
    for syl in w.syllables() {
        match syl.gen {
            GenId::Free(i) if (i as usize) < n => s = s.mul_generator_power(i as usize, &syl.exp),
            GenId::Free(i) => return Err(Error::UnknownGenerator(format!("g{i}"))),
            GenId::Abelian { .. } => return Err(Error::NotFree),
        }
    }
    Ok(s)
}

fn mobius(mut k: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            k /= p;
            if k % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if k > 1 {
        result = -result;
    }
    result
}

/// Rank of the weight-`w` component of the free Lie ring on `n` generators.
pub fn witt_rank(n: usize, w: usize) -> BigInt {
    assert!(w >= 1, "weight starts at 1");
    let mut sum = BigInt::zero();
    for d in (1..=w).filter(|d| w % d == 0) {
        sum += BigInt::from(mobius(d)) * BigInt::from(n).pow((w / d) as u32);
    }
    sum / BigInt::from(w)
}

/// Lyndon words of length exactly `w` over `0..n`, in lexicographic order.
pub fn lyndon_words(n: usize, w: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || w == 0 {
        return out;
    }
    let mut word = vec![0usize];
    loop {
        if word.len() == w {
            out.push(word.clone());
        }
        let m = word.len();
        while word.len() < w {
            word.push(word[word.len() - m]);
        }
        while word.last() == Some(&(n - 1)) {
            word.pop();
        }
        match word.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

fn is_lyndon(s: &[usize]) -> bool {
    !s.is_empty() && (1..s.len()).all(|i| s < &s[i..])
}

/// Splits a Lyndon word of length > 1 as `u v` with `v` its longest proper
/// Lyndon suffix.
pub fn standard_factorization(s: &[usize]) -> (&[usize], &[usize]) {
    let i = (1..s.len()).find(|&i| is_lyndon(&s[i..])).expect("length at least 2");
    (&s[..i], &s[i..])
}

/// The weight-`w` Lyndon basis with each bracket expanded in `Z<X>`.
#[derive(Clone, Debug)]
pub struct LyndonBasis {
    n: usize,
    weight: usize,
    words: Vec<Vec<usize>>,
    expansions: Vec<Vec<BigInt>>,
}

impl LyndonBasis {
    pub fn new(n: usize, weight: usize) -> Self {
        let words = lyndon_words(n, weight);
        let mut memo = HashMap::new();
        let expansions = words.iter().map(|w| expand(n, w, &mut memo)).collect();
        LyndonBasis { n, weight, words, expansions }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    /// Dense degree-`weight` expansion of the `k`-th bracketed word.
    pub fn expansion(&self, k: usize) -> &[BigInt] {
        &self.expansions[k]
    }

    /// Standard bracketing of the `k`-th word, e.g. `[x,[x,y]]`.
    pub fn bracket(&self, k: usize, names: &[&str]) -> String {
        bracket_text(&self.words[k], names)
    }

    /// Coordinates of a homogeneous degree-`weight` element in this basis.
    ///
    /// Each bracket equals its Lyndon word plus lexicographically larger
    /// monomials, so the system is unitriangular in Lyndon order.
    pub fn coordinates(&self, block: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut residual = block.to_vec();
        let mut coords = Vec::with_capacity(self.words.len());
        for (w, e) in self.words.iter().zip(&self.expansions) {
            let c = residual[monomial_index(self.n, w)].clone();
            if !c.is_zero() {
                for (r, x) in residual.iter_mut().zip(e) {
                    if !x.is_zero() {
                        *r -= &c * x;
                    }
                }
            }
            coords.push(c);
        }
        if residual.iter().any(|r| !r.is_zero()) {
            return Err(Error::NotLie(self.weight));
        }
        Ok(coords)
    }
}

fn expand(n: usize, w: &[usize], memo: &mut HashMap<Vec<usize>, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(e) = memo.get(w) {
        return e.clone();
    }
    let e = if w.len() == 1 {
        let mut e = vec![BigInt::zero(); n];
        e[w[0]] = BigInt::one();
        e
    } else {
        let (u, v) = standard_factorization(w);
        let pu = expand(n, u, memo);
        let pv = expand(n, v, memo);
        let (su, sv) = (pu.len(), pv.len());
        let mut e = vec![BigInt::zero(); su * sv];
        for (i, a) in pu.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in pv.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                e[i * sv + j] += a * b;
                e[j * su + i] -= a * b;
            }
        }
        e
    };
    memo.insert(w.to_vec(), e.clone());
    e
}

fn bracket_text(w: &[usize], names: &[&str]) -> String {
    if w.len() == 1 {
        return names.get(w[0]).map_or_else(|| format!("X{}", w[0] + 1), |s| s.to_string());
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", bracket_text(u, names), bracket_text(v, names))
}

/// Coordinates of a weight-`w` Lie element over the Lyndon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieVector {
    pub weight: usize,
    pub coords: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeadingTerm {
    /// The element lies in `gamma_{cutoff+1}`.
    Trivial,
    Weight(LieVector),
}

impl LeadingTerm {
    pub fn weight(&self) -> Option<usize> {
        match self {
            LeadingTerm::Trivial => None,
            LeadingTerm::Weight(v) => Some(v.weight),
        }
    }
}

/// Lowest nonzero degree of `s - 1`, expressed in Lyndon coordinates.
pub fn series_leading_term(s: &TruncSeries) -> Result<LeadingTerm> {
    match s.leading_degree() {
        None => Ok(LeadingTerm::Trivial),
        Some(d) => {
            let basis = LyndonBasis::new(s.alphabet_size(), d);
            let coords = basis.coordinates(s.block(d))?;
            Ok(LeadingTerm::Weight(LieVector { weight: d, coords }))
        }
    }
}

pub fn leading_weight(w: &Word, n: usize, cutoff: usize) -> Result<LeadingTerm> {
    series_leading_term(&magnus(w, n, cutoff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use proptest::prelude::*;

    fn xy() -> Alphabet {
        Alphabet::free(["x", "y"])
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn magnus_examples() {
        let a = xy();
        assert!(magnus(&Word::identity(), 2, 5).unwrap().is_one());
        let c = magnus(&a.parse_word("x^-1 y^-1 x y").unwrap(), 2, 2).unwrap();
        assert_eq!(c.terms(), vec![(vec![], BigInt::one()), (vec![0, 1], BigInt::one()), (vec![1, 0], BigInt::from(-1))]);
        let sq = magnus(&a.parse_word("x^2").unwrap(), 2, 3).unwrap();
        assert_eq!(sq.to_string(), "1 + 2*X1 + X1X1");
        let inv = magnus(&a.parse_word("x^-1").unwrap(), 2, 3).unwrap();
        assert_eq!(inv.to_string(), "1 - X1 + X1X1 - X1X1X1");
        assert!(matches!(magnus(&Word::identity(), 2, 0), Err(Error::ZeroCutoff)));
    }

    #[test]
    fn witt_ranks() {
        let got: Vec<BigInt> = (1..=5).map(|w| witt_rank(2, w)).collect();
        assert_eq!(got, big(&[2, 1, 2, 3, 6]));
        assert_eq!(witt_rank(3, 2), BigInt::from(3));
        for n in 1..4 {
            for w in 1..7 {
                assert_eq!(BigInt::from(lyndon_words(n, w).len()), witt_rank(n, w));
            }
        }
    }

    #[test]
    fn lyndon_bracketing() {
        let names = ["x", "y"];
        let b2 = LyndonBasis::new(2, 2);
        assert_eq!(b2.len(), 1);
        assert_eq!(b2.bracket(0, &names), "[x,y]");
        let b4 = LyndonBasis::new(2, 4);
        let texts: Vec<String> = (0..b4.len()).map(|k| b4.bracket(k, &names)).collect();
        assert_eq!(texts, vec!["[x,[x,[x,y]]]", "[x,[[x,y],y]]", "[[[x,y],y],y]"]);
    }

    #[test]
    fn leading_weight_of_commutator() {
        let a = xy();
        let t = leading_weight(&a.parse_word("x^-1 y^-1 x y").unwrap(), 2, 5).unwrap();
        assert_eq!(t, LeadingTerm::Weight(LieVector { weight: 2, coords: big(&[1]) }));
        assert_eq!(leading_weight(&Word::identity(), 2, 5).unwrap(), LeadingTerm::Trivial);
        let x = a.parse_word("x^3 y").unwrap();
        assert_eq!(leading_weight(&x, 2, 4).unwrap(), LeadingTerm::Weight(LieVector { weight: 1, coords: big(&[3, 1]) }));
    }

    #[test]
    fn non_lie_component_is_rejected() {
        let mut block = vec![BigInt::zero(); 4];
        block[0] = BigInt::one(); // XX is not a Lie element
        assert!(matches!(LyndonBasis::new(2, 2).coordinates(&block), Err(Error::NotLie(2))));
    }

    #[test]
    fn series_inverse_and_power() {
        let a = xy();
        let w = a.parse_word("x^2 y^-1 x^-3 y^4").unwrap();
        let s = magnus(&w, 2, 5).unwrap();
        assert!(s.mul(&s.inverse()).is_one());
        assert_eq!(s.pow(&BigInt::from(-2)), magnus(&w.pow(&BigInt::from(-2)), 2, 5).unwrap());
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec((0u32..2, -3i64..=3), 0..8)
            .prop_map(|v| crate::words::reduce(v.into_iter().map(|(g, e)| (GenId::Free(g), e))))
    }

    proptest! {
        #[test]
        fn magnus_is_multiplicative(a in word_strategy(), b in word_strategy()) {
            let lhs = magnus(&a.multiply(&b), 2, 4).unwrap();
            let rhs = magnus(&a, 2, 4).unwrap().mul(&magnus(&b, 2, 4).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn left_normed_commutators_have_exact_weight(k in 1usize..5, a in 0u32..2) {
            let x = Word::gen(GenId::Free(a));
            let y = Word::gen(GenId::Free(1 - a));
            let c = Word::left_normed_commutator(&y, &x, k).unwrap();
            prop_assert_eq!(leading_weight(&c, 2, 5).unwrap().weight(), Some(k + 1));
        }

        #[test]
        fn products_of_deep_commutators_stay_deep(
            parts in prop::collection::vec((word_strategy(), word_strategy(), word_strategy()), 1..4)
        ) {
            // [[a,b],c] lies in gamma_3, and so does any product of such
            let mut w = Word::identity();
            for (a, b, c) in &parts {
                w = w.multiply(&Word::commutator(&Word::commutator(a, b), c));
            }
            let t = leading_weight(&w, 2, 5).unwrap();
            prop_assert!(t.weight().is_none_or(|d| d >= 3));
        }
    }
}
