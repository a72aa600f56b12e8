//! Serializable reports for whole pipelines: input -> group -> simplification
//! -> quotients / free-by-cyclic structure. The CLI prints these verbatim.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::{verify_representation, BraidWord, RelationCheck, Rep};
use crate::catalog::{self, compare_groups, Comparison, KnotId};
use crate::error::{Error, Result};
use crate::fbc::{
    amalgam_report, fbc_decompose, residual_nilpotence_verdict, rewrite_along_z, AmalgamReport, Verdict,
};
use crate::lcs::{lcs_quotients, LcsQuotient};
use crate::presentation::{group_from_braid, group_from_diagram, Diagram, Presentation, PresentationJson};
use crate::zlattice::{AbelianInvariants, IntMatrix};

/// Where a group comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Knot(KnotId),
    Braid { text: String, strands: u32 },
    Diagram(Diagram),
    Presentation(Presentation),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Knot(id) => write!(f, "{id}"),
            Source::Braid { text, strands } => write!(f, "braid `{text}` on {strands} strands"),
            Source::Diagram(d) => write!(f, "diagram with {} arcs", d.arcs.len()),
            Source::Presentation(p) => write!(f, "presentation {p}"),
        }
    }
}

impl Source {
    pub fn braid(text: &str, strands: u32) -> Result<Source> {
        BraidWord::parse(text, strands)?;
        Ok(Source::Braid { text: text.to_string(), strands })
    }

    pub fn raw_group(&self, rep: Rep) -> Result<Presentation> {
        match self {
            Source::Knot(id) => catalog::raw_group(*id, rep),
            Source::Braid { text, strands } => {
                Ok(group_from_braid(rep, &BraidWord::parse(text, *strands)?).with_provenance(self.to_string()))
            }
            Source::Diagram(d) => {
                only_a(rep, "diagram")?;
                group_from_diagram(d)
            }
            Source::Presentation(p) => {
                only_a(rep, "explicit presentation")?;
                Ok(p.clone())
            }
        }
    }

    pub fn group(&self, rep: Rep, budget: usize) -> Result<GroupReport> {
        let raw = self.raw_group(rep)?;
        let (simplified, eliminated, complete, method) = match self {
            Source::Knot(id) if rep == Rep::A && catalog::stored_presentation(*id).is_some() => {
                (catalog::group(*id, rep, budget)?, Vec::new(), true, "stored one-relator form")
            }
            Source::Knot(id) => {
                let t = raw.tietze_simplify(budget);
                (catalog::group(*id, rep, budget)?, t.eliminated, t.complete, "tietze")
            }
            _ => {
                let t = raw.tietze_simplify(budget);
                (t.presentation, t.eliminated, t.complete, "tietze")
            }
        };
        Ok(GroupReport {
            source: self.to_string(),
            rep,
            raw: raw.to_json(),
            simplified: simplified.to_json(),
            method: method.to_string(),
            eliminated,
            complete,
        })
    }

    /// The simplified group as a presentation.
    pub fn simplified(&self, rep: Rep, budget: usize) -> Result<Presentation> {
        Presentation::from_json(&self.group(rep, budget)?.simplified)
    }
}

fn only_a(rep: Rep, what: &str) -> Result<()> {
    if rep == Rep::M {
        return Err(Error::Unsupported(format!("a {what} determines only the A group")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub source: String,
    pub rep: Rep,
    pub raw: PresentationJson,
    pub simplified: PresentationJson,
    /// `tietze` or `stored one-relator form`.
    pub method: String,
    pub eliminated: Vec<String>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub source: String,
    pub rep: Rep,
    pub class: usize,
    pub quotients: Vec<LcsQuotient>,
}

pub fn quotient_report(src: &Source, rep: Rep, class: usize, budget: usize) -> Result<QuotientReport> {
    let p = src.simplified(rep, budget)?;
    let r = lcs_quotients(&p, class)?;
    Ok(QuotientReport { source: src.to_string(), rep, class, quotients: r.quotients })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianReport {
    pub source: String,
    pub rep: Rep,
    pub invariants: AbelianInvariants,
}

pub fn abelian_report(src: &Source, rep: Rep) -> Result<AbelianReport> {
    Ok(AbelianReport { source: src.to_string(), rep, invariants: src.raw_group(rep)?.abelianization() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionReport {
    pub rank: usize,
    pub stable: String,
    pub action_matrix: IntMatrix,
    pub top_rule: String,
    pub bottom_rule: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FbcReport {
    pub source: String,
    pub presentation: PresentationJson,
    pub stable: String,
    pub shifted_relators: Vec<String>,
    pub normalized_relators: Vec<String>,
    pub decomposition: Option<DecompositionReport>,
    /// Only attempted when there is no decomposition.
    pub amalgam: Option<AmalgamReport>,
}

/// `stable` defaults to the catalog's choice for built-in knots.
pub fn fbc_report(src: &Source, stable: Option<&str>, budget: usize, m_max: usize) -> Result<FbcReport> {
    let stable = match (stable, src) {
        (Some(s), _) => s.to_string(),
        (None, Source::Knot(id)) => catalog::entry(*id)
            .stable
            .ok_or_else(|| Error::Invalid(format!("{id} has no default stable generator; pass one")))?
            .to_string(),
        (None, _) => return Err(Error::Invalid("a stable generator is required".into())),
    };
    let p = src.simplified(Rep::A, budget)?;
    let z = rewrite_along_z(&p, &stable)?;
    let decomposition = fbc_decompose(&z.relators)?.map(|d| DecompositionReport {
        rank: d.rank,
        stable: stable.clone(),
        verdict: residual_nilpotence_verdict(&d, m_max),
        top_rule: d.top_rule_text(),
        bottom_rule: format!("g-1 = {}", d.bottom_rule),
        action_matrix: d.action_matrix,
    });
    let amalgam = if decomposition.is_none() { amalgam_report(&z.relators).ok() } else { None };
    Ok(FbcReport {
        source: src.to_string(),
        presentation: p.to_json(),
        stable,
        shifted_relators: z.relators.iter().map(ToString::to_string).collect(),
        normalized_relators: z.relators.iter().map(|r| r.normalize().to_string()).collect(),
        decomposition,
        amalgam,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub rep: Rep,
    pub strands: u32,
    pub passed: bool,
    pub relations: Vec<RelationCheck>,
}

pub fn representation_report(rep: Rep, strands: u32) -> Result<RepresentationReport> {
    let relations = verify_representation(rep, strands)?;
    Ok(RepresentationReport { rep, strands, passed: relations.iter().all(|r| r.pass), relations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub left: String,
    pub right: String,
    #[serde(flatten)]
    pub comparison: Comparison,
}

/// Each side is a source together with the representation to build it with.
pub fn compare_report(
    left: (&Source, Rep),
    right: (&Source, Rep),
    class: usize,
    budget: usize,
) -> Result<CompareReport> {
    let a = left.0.simplified(left.1, budget)?;
    let b = right.0.simplified(right.1, budget)?;
    Ok(CompareReport {
        left: format!("G_{}({})", left.1, left.0),
        right: format!("G_{}({})", right.1, right.0),
        comparison: compare_groups(&a, &b, class)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_braid_group_is_free() {
        let g = Source::braid("", 1).unwrap().group(Rep::A, 100).unwrap();
        assert_eq!(g.simplified.generators, ["x1", "y"]);
        assert!(g.simplified.relators.is_empty());
    }

    #[test]
    fn hopf_comparison() {
        let s = Source::Knot(KnotId::Hopf);
        let r = compare_report((&s, Rep::A), (&s, Rep::M), 3, 100).unwrap();
        assert_eq!(r.comparison.verdict, "not isomorphic (distinct abelianizations)");
        assert_eq!(r.left, "G_A(HOPF)");
    }

    #[test]
    fn k1_fbc_report() {
        let r = fbc_report(&Source::Knot(KnotId::K1), None, 100, 32).unwrap();
        let d = r.decomposition.unwrap();
        assert_eq!(d.rank, 3);
        assert!(matches!(d.verdict, Verdict::ResiduallyNilpotent { exponent: 3 }));
        assert!(r.amalgam.is_none());
        let j = serde_json::to_value(&d).unwrap();
        assert_eq!(j["actionMatrix"][2], serde_json::json!(["1", "-3", "3"]));
        assert_eq!(j["verdict"]["kind"], "ResiduallyNilpotent");
    }

    #[test]
    fn k4_fbc_report_falls_back_to_amalgam() {
        let r = fbc_report(&Source::Knot(KnotId::K4), None, 100, 32).unwrap();
        assert!(r.decomposition.is_none());
        assert_eq!(r.amalgam.unwrap().edge_free_rank, 2);
    }

    #[test]
    fn diagram_rejects_m() {
        let d = Diagram::from_json(catalog::K4_DIAGRAM).unwrap();
        assert!(matches!(Source::Diagram(d).raw_group(Rep::M), Err(Error::Unsupported(_))));
    }
}
