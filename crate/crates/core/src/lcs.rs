//! Lower central quotients `gamma_w G / gamma_{w+1} G` of a finitely
//! presented group, computed inside `F / gamma_{c+1} F` through the Magnus
//! embedding.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::{magnus, witt_rank, LyndonBasis, TruncSeries};
use crate::presentation::Presentation;
use crate::zlattice::{cokernel, hnf, AbelianInvariants, IntMatrix};

/// Largest supported nilpotency class.
pub const MAX_CLASS: usize = 6;

// Rough ceiling on stored coefficients per series.
const MAX_SERIES_SIZE: usize = 1 << 21;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsQuotient {
    pub weight: usize,
    #[serde(flatten)]
    pub invariants: AbelianInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsReport {
    pub class: usize,
    pub quotients: Vec<LcsQuotient>,
}

impl LcsReport {
    pub fn at(&self, weight: usize) -> Option<&AbelianInvariants> {
        self.quotients.iter().find(|q| q.weight == weight).map(|q| &q.invariants)
    }
}

/// Hermite bases of the leading Lie parts of the relator normal closure,
/// one per weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLattice {
    pub generators: usize,
    /// `levels[w - 1]` has `witt_rank(generators, w)` columns.
    pub levels: Vec<IntMatrix>,
}

impl GradedLattice {
    pub fn class(&self) -> usize {
        self.levels.len()
    }

    pub fn quotients(&self) -> Vec<LcsQuotient> {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let invariants = if m.nrows() == 0 { AbelianInvariants::free(m.ncols()) } else { cokernel(m) };
                LcsQuotient { weight: k + 1, invariants }
            })
            .collect()
    }
}

struct Entry {
    pivot: usize,
    lead: Vec<BigInt>,
    elem: TruncSeries,
}

struct Saturation {
    n: usize,
    class: usize,
    bases: Vec<LyndonBasis>,
    gens: Vec<TruncSeries>,
    table: Vec<Vec<Entry>>,
    queue: VecDeque<TruncSeries>,
}

impl Saturation {
    fn new(n: usize, class: usize) -> Self {
        let bases = (1..=class).map(|w| LyndonBasis::new(n, w)).collect();
        let mut gens = Vec::new();
        for i in 0..n {
            let g = TruncSeries::generator_power(n, class, i, &BigInt::from(1));
            gens.push(g.inverse());
            gens.push(g);
        }
        Saturation { n, class, bases, gens, table: (0..class).map(|_| Vec::new()).collect(), queue: VecDeque::new() }
    }

    fn lead(&self, s: &TruncSeries) -> Result<Option<(usize, Vec<BigInt>)>> {
        match s.leading_degree() {
            None => Ok(None),
            Some(w) => Ok(Some((w, self.bases[w - 1].coordinates(s.block(w))?))),
        }
    }

    fn run(&mut self) -> Result<()> {
        while let Some(s) = self.queue.pop_front() {
            self.sift(s)?;
        }
        Ok(())
    }

    // Consequences owed by a new table element of weight w: its commutators
    // with every generator and every table element whose weights fit.
    fn obligations(&mut self, elem: &TruncSeries, w: usize) {
        if w < self.class {
            for g in &self.gens {
                self.queue.push_back(TruncSeries::commutator(elem, g));
            }
        }
        for (k, level) in self.table.iter().enumerate() {
            if w + k + 1 > self.class {
                break;
            }
            for e in level {
                self.queue.push_back(TruncSeries::commutator(elem, &e.elem));
            }
        }
    }

    fn sift(&mut self, mut elem: TruncSeries) -> Result<()> {
        loop {
            let Some((w, lead)) = self.lead(&elem)? else { return Ok(()) };
            let q = lead.iter().position(|c| !c.is_zero()).expect("nonzero leading part");
            let level = &self.table[w - 1];
            let pos = level.iter().position(|e| e.pivot >= q).unwrap_or(level.len());
            if pos == level.len() || level[pos].pivot != q {
                // inverting negates the leading part
                let (elem, lead) = if lead[q].is_negative() {
                    (elem.inverse(), lead.into_iter().map(|c| -c).collect())
                } else {
                    (elem, lead)
                };
                self.obligations(&elem, w);
                self.table[w - 1].insert(pos, Entry { pivot: q, lead, elem });
                return Ok(());
            }
            let a = level[pos].lead[q].clone();
            let b = lead[q].clone();
            if b.is_multiple_of(&a) {
                elem = elem.mul(&level[pos].elem.pow(&-(b / a)));
                continue;
            }
            let ext = a.extended_gcd(&b);
            let (d, s, t) = (ext.gcd, ext.x, ext.y);
            let old = level[pos].elem.clone();
            let replacement = old.pow(&s).mul(&elem.pow(&t));
            let rest = old.pow(&(&b / &d)).mul(&elem.pow(&-(&a / &d)));
            let (_, new_lead) = self.lead(&replacement)?.expect("gcd combination keeps weight");
            debug_assert!(new_lead[q] == d && new_lead[..q].iter().all(Zero::is_zero));
            self.obligations(&replacement, w);
            self.table[w - 1][pos] = Entry { pivot: q, lead: new_lead, elem: replacement };
            self.queue.push_back(old);
            elem = rest;
        }
    }

    fn lattice(&self) -> GradedLattice {
        let levels = self
            .table
            .iter()
            .enumerate()
            .map(|(k, level)| {
                let dim = self.bases[k].len();
                if level.is_empty() {
                    return IntMatrix::zeros(0, dim);
                }
                let rows: Vec<Vec<BigInt>> = level.iter().map(|e| e.lead.clone()).collect();
                let h = hnf(&IntMatrix::from_rows(&rows));
                let r = h.rank();
                IntMatrix::from_rows(&h.h.to_rows()[..r])
            })
            .collect();
        GradedLattice { generators: self.n, levels }
    }
}

fn check_class(class: usize) -> Result<()> {
    if class == 0 || class > MAX_CLASS {
        return Err(Error::ClassOutOfRange(class));
    }
    Ok(())
}

fn check_size(n: usize, class: usize) -> Result<()> {
    let size = (0..=class as u32).try_fold(0usize, |acc, d| n.checked_pow(d).and_then(|p| acc.checked_add(p)));
    match size {
        Some(s) if s <= MAX_SERIES_SIZE => Ok(()),
        _ => Err(Error::Invalid(format!("{n} generators at class {class} exceed the series size limit; simplify first"))),
    }
}

/// Leading-term lattices of the normal closure of the relators inside
/// `F / gamma_{class+1} F`.
pub fn relator_lattice(p: &Presentation, class: usize) -> Result<GradedLattice> {
    check_class(class)?;
    let n = p.num_generators();
    check_size(n, class)?;
    let mut sat = Saturation::new(n, class);
    for r in p.relators() {
        sat.queue.push_back(magnus(r, n, class)?);
    }
    sat.run()?;
    Ok(sat.lattice())
}

/// `gamma_w G / gamma_{w+1} G` for `w = 1..=class`.
pub fn lcs_quotients(p: &Presentation, class: usize) -> Result<LcsReport> {
    let lattice = relator_lattice(p, class)?;
    Ok(LcsReport { class, quotients: lattice.quotients() })
}

/// First weight at which the quotients differ from those of the free group
/// on the same generators, if any up to `class`.
pub fn compare_with_free(p: &Presentation, class: usize) -> Result<Option<usize>> {
    let report = lcs_quotients(p, class)?;
    let n = p.num_generators();
    Ok(report.quotients.iter().find_map(|q| {
        let rank = witt_rank(n, q.weight).to_usize().expect("small rank");
        (q.invariants != AbelianInvariants::free(rank)).then_some(q.weight)
    }))
}
