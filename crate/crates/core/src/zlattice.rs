//! Exact integer matrices and lattices: Hermite and Smith normal forms,
//! characteristic polynomials, kernels of matrix powers and lattice quotients.
//!
//! Row vectors act on the right: the lattice spanned by a matrix is its row
//! span and `Ker(M)` is the left kernel `{v : v M = 0}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        assert!(self.is_square());
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Stacks the rows of `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        if self.rows == 0 {
            return other.clone();
        }
        if other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// Row-major arrays of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            for e in r {
                data.push(e.parse::<BigInt>().map_err(serde::de::Error::custom)?);
            }
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }
}

/// Row-style Hermite normal form `H = U M` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Nonzero rows come first with positive pivots in strictly increasing
/// columns; entries above each pivot are reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h[(i, c)].is_zero() && best.is_none_or(|b| h[(i, c)].abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Smith normal form `D = U M V` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries `d1 | d2 | ...`, all positive.
    pub invariants: Vec<BigInt>,
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero() && best.is_none_or(|(a, b)| d[(i, j)].abs() < d[(a, b)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        let mut clean = true;
        for i in t + 1..rows {
            let q = d[(i, t)].div_floor(&d[(t, t)]);
            if !q.is_zero() {
                let nq = -q;
                d.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
            }
            if !d[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = d[(t, j)].div_floor(&d[(t, t)]);
            if !q.is_zero() {
                let nq = -q;
                d.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
            }
            if !d[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| {
            !(&d[(i, j)] % &d[(t, t)]).is_zero()
        });
        if let Some((i, _)) = bad {
            let one = BigInt::one();
            d.add_row_multiple(t, i, &one);
            u.add_row_multiple(t, i, &one);
            continue;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..rows.min(cols)).map(|i| d[(i, i)].clone()).filter(|x| !x.is_zero()).collect();
    Snf { d, u, v, invariants }
}

/// Free rank plus torsion coefficients `d1 | d2 | ...`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "decimal_vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn new<T: Into<BigInt>>(free_rank: usize, torsion: impl IntoIterator<Item = T>) -> Self {
        AbelianInvariants { free_rank, torsion: torsion.into_iter().map(Into::into).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Exponent of `p` in the torsion part, listed per cyclic factor.
    pub fn p_part(&self, p: u64) -> Vec<u32> {
        let p = BigInt::from(p);
        self.torsion
            .iter()
            .filter_map(|d| {
                let mut d = d.clone();
                let mut k = 0;
                while (&d % &p).is_zero() {
                    d /= &p;
                    k += 1;
                }
                (k > 0).then_some(k)
            })
            .collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

/// `Z^cols / rowspan(m)`.
pub fn cokernel(m: &IntMatrix) -> AbelianInvariants {
    let s = snf(m);
    let rank = s.invariants.len();
    AbelianInvariants {
        free_rank: m.ncols() - rank,
        torsion: s.invariants.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// A sublattice of `Z^dim` stored by Hermite-reduced basis rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub dim: usize,
    pub basis: IntMatrix,
}

impl LatticeBasis {
    pub fn span(dim: usize, rows: &IntMatrix) -> Self {
        if rows.nrows() == 0 {
            return LatticeBasis { dim, basis: IntMatrix::zeros(0, dim) };
        }
        assert_eq!(rows.ncols(), dim);
        let h = hnf(rows);
        let basis = IntMatrix::from_rows(&(0..h.rank()).map(|i| h.h.row(i).to_vec()).collect::<Vec<_>>());
        let basis = if h.rank() == 0 { IntMatrix::zeros(0, dim) } else { basis };
        LatticeBasis { dim, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn sum(&self, other: &LatticeBasis) -> LatticeBasis {
        assert_eq!(self.dim, other.dim);
        LatticeBasis::span(self.dim, &self.basis.stack(&other.basis))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let extended = self.sum(&LatticeBasis::span(self.dim, &IntMatrix::from_rows(&[v.to_vec()])));
        extended == *self
    }
}

/// Saturated basis of the left kernel `{v : v M^power = 0}`.
pub fn kernel_lattice(m: &IntMatrix, power: u32) -> Result<LatticeBasis> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let p = m.pow(power);
    let h = hnf(&p);
    let kernel_rows: Vec<Vec<BigInt>> = (h.rank()..p.nrows()).map(|i| h.u.row(i).to_vec()).collect();
    let rows = if kernel_rows.is_empty() { IntMatrix::zeros(0, m.nrows()) } else { IntMatrix::from_rows(&kernel_rows) };
    Ok(LatticeBasis::span(m.nrows(), &rows))
}

pub fn lattice_quotient(sub: &LatticeBasis, ambient_rank: usize) -> AbelianInvariants {
    assert_eq!(sub.dim, ambient_rank);
    if sub.rank() == 0 {
        return AbelianInvariants::free(ambient_rank);
    }
    cokernel(&sub.basis)
}

/// Smallest `k <= bound` with `(M - I)^k = 0`.
pub fn unipotency_exponent(m: &IntMatrix, bound: usize) -> Result<Option<usize>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let n = IntMatrix::identity(m.nrows());
    let shifted = m.sub(&n);
    let mut acc = IntMatrix::identity(m.nrows());
    for k in 1..=bound {
        acc = acc.mul(&shifted);
        if acc.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn is_unipotent(m: &IntMatrix, bound: usize) -> Result<bool> {
    Ok(unipotency_exponent(m, bound)?.is_some())
}

/// First `m <= m_max` such that every entry of `(M - I)^m` shares a factor
/// `modulus >= 2`; `modulus` is the gcd of the entries.
pub fn find_congruence_pair(m: &IntMatrix, m_max: usize) -> Result<Option<(usize, BigInt)>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let shifted = m.sub(&IntMatrix::identity(m.nrows()));
    let mut acc = IntMatrix::identity(m.nrows());
    for k in 1..=m_max {
        acc = acc.mul(&shifted);
        if acc.is_zero() {
            // the zero map lands in every M A; report the smallest admissible M
            return Ok(Some((k, BigInt::from(2))));
        }
        let g = acc.content();
        if g >= BigInt::from(2) {
            return Ok(Some((k, g)));
        }
    }
    Ok(None)
}

/// Integer polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut p = IntPoly { coeffs: coeffs.into_iter().map(Into::into).collect() };
        p.trim();
        p
    }

    pub fn one() -> Self {
        IntPoly::new([1])
    }

    /// `λ - root`.
    pub fn linear(root: &BigInt) -> Self {
        IntPoly { coeffs: vec![-root.clone(), BigInt::one()] }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly { coeffs: vec![] };
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        (0..k).fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if !divisor.coeffs[dd].is_one() {
            return None;
        }
        let Some(n) = self.degree() else { return Some(self.clone()) };
        if n < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            q[k] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(q))
    }

    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        // Horner
        let n = m.nrows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&IntMatrix::identity(n).scale(c));
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "λ".to_string(),
                (1, false) => format!("{mag}λ"),
                (_, true) => format!("λ^{k}"),
                (_, false) => format!("{mag}λ^{k}"),
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

/// `det(λI - M)` via the Faddeev–LeVerrier recursion with exact division.
pub fn char_poly(m: &IntMatrix) -> Result<IntPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let n = m.nrows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut aux = IntMatrix::zeros(n, n);
    for k in 1..=n {
        aux = m.mul(&aux).add(&IntMatrix::identity(n).scale(&c[n - k + 1]));
        let am = m.mul(&aux);
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = q;
    }
    Ok(IntPoly::new(c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Distinct factors with multiplicity, linear factors first.
    pub factors: Vec<(IntPoly, u32)>,
    /// Part the trial divisions could not split; `1` when fully factored.
    pub rest: IntPoly,
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, k)| if *k == 1 { format!("({p})") } else { format!("({p})^{k}") })
            .collect();
        if !self.rest.is_one() {
            parts.push(format!("({})", self.rest));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join(" "))
    }
}

fn cyclotomic(n: u32) -> IntPoly {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut p = IntPoly::new(num);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic divisor");
        }
    }
    p
}

/// Splits a monic polynomial by trial division: integer roots first, then
/// cyclotomic factors up to the remaining degree.
pub fn factor_monic(p: &IntPoly) -> Factorization {
    let mut rest = p.clone();
    let mut factors = Vec::new();
    let mut strip = |rest: &mut IntPoly, f: IntPoly| {
        let mut k = 0;
        while rest.degree().unwrap_or(0) >= 1 {
            match rest.div_exact(&f) {
                Some(q) => {
                    *rest = q;
                    k += 1;
                }
                None => break,
            }
        }
        if k > 0 {
            factors.push((f, k));
        }
    };
    // integer roots divide the lowest nonzero coefficient
    while rest.degree().unwrap_or(0) >= 1 && rest.coeffs()[0].is_zero() {
        strip(&mut rest, IntPoly::linear(&BigInt::zero()));
    }
    if rest.degree().unwrap_or(0) >= 1 {
        let c0 = rest.coeffs()[0].abs();
        let mut roots: Vec<BigInt> = Vec::new();
        let bound = c0.sqrt();
        let mut d = BigInt::one();
        while d <= bound {
            if (&c0 % &d).is_zero() {
                roots.push(d.clone());
                let co = &c0 / &d;
                if co != d {
                    roots.push(co);
                }
            }
            d += 1;
        }
        roots.sort();
        for r in roots {
            for cand in [r.clone(), -r] {
                strip(&mut rest, IntPoly::linear(&cand));
            }
        }
    }
    let mut n = 3;
    while rest.degree().unwrap_or(0) >= 2 && n <= 64 {
        let phi = cyclotomic(n);
        if phi.degree() <= rest.degree() {
            strip(&mut rest, phi);
        }
        n += 1;
    }
    Factorization { factors, rest }
}
