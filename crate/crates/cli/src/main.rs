use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use vknot::catalog::{run_check, CheckReport};
use vknot::presentation::PresentationJson;
use vknot::report::{
    abelian_report, compare_report, fbc_report, quotient_report, representation_report, AbelianReport, CompareReport,
    FbcReport, GroupReport, QuotientReport, RepresentationReport,
};
use vknot::{Diagram, KnotId, Presentation, Rep, Settings, Source};

#[derive(Parser)]
#[command(name = "vknot", version, about = "Virtual knot groups, lower central quotients and free-by-cyclic structure")]
struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable summary.
    #[arg(long, global = true)]
    text: bool,
    /// TOML file with `class`, `tietze-budget` and `m-max`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Raw and simplified presentations.
    Group(InputArgs),
    /// Lower central quotients up to a class.
    Lcs {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Abelian invariants of the group.
    Abelianize(InputArgs),
    /// Rewrite along Z, decompose, and issue a residual-nilpotence verdict.
    Fbc {
        #[command(flatten)]
        input: InputArgs,
        /// Generator mapped to the Z factor.
        #[arg(long)]
        stable: Option<String>,
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Check the defining relations of VB_n under a representation.
    VerifyRep {
        #[arg(long)]
        strands: u32,
        #[arg(long, default_value = "A")]
        rep: Rep,
    },
    /// Run every catalog check; exits 1 on any mismatch.
    Check,
    /// Try to tell two groups of the same input apart.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "M")]
        other_rep: Rep,
        #[arg(long)]
        class: Option<usize>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Catalog entry: K1, K2, K3, K4 or HOPF.
    #[arg(long, conflicts_with_all = ["braid", "diagram", "presentation"])]
    knot: Option<KnotId>,
    /// Braid word such as `s1^-2 r1`.
    #[arg(long, requires = "strands", conflicts_with_all = ["diagram", "presentation"])]
    braid: Option<String>,
    #[arg(long)]
    strands: Option<u32>,
    /// Diagram JSON file.
    #[arg(long, conflicts_with = "presentation")]
    diagram: Option<PathBuf>,
    /// Presentation JSON file: `{"generators": [...], "relators": [...]}`.
    #[arg(long)]
    presentation: Option<PathBuf>,
    #[arg(long, default_value = "A")]
    rep: Rep,
}

impl InputArgs {
    fn source(&self) -> anyhow::Result<Source> {
        if let Some(id) = self.knot {
            return Ok(Source::Knot(id));
        }
        if let Some(text) = &self.braid {
            return Ok(Source::braid(text, self.strands.expect("clap requires strands"))?);
        }
        if let Some(path) = &self.diagram {
            return Ok(Source::Diagram(Diagram::from_json(&read(path)?)?));
        }
        if let Some(path) = &self.presentation {
            let raw: PresentationJson =
                serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            return Ok(Source::Presentation(Presentation::from_json(&raw)?));
        }
        bail!("one of --knot, --braid, --diagram or --presentation is required")
    }
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn settings(path: Option<&PathBuf>) -> anyhow::Result<Settings> {
    match path {
        None => Ok(Settings::default()),
        Some(p) => toml::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display())),
    }
}

trait Text {
    fn text(&self) -> String;
}

fn list(items: &[String]) -> String {
    items.join(", ")
}

fn presentation(p: &PresentationJson) -> String {
    format!("< {} | {} >", list(&p.generators), list(&p.relators))
}

impl Text for GroupReport {
    fn text(&self) -> String {
        let mut out = format!("{} ({})\nraw:        {}\n", self.source, self.rep, presentation(&self.raw));
        out += &format!("simplified: {}\n", presentation(&self.simplified));
        out += &format!("method: {}", self.method);
        if !self.eliminated.is_empty() {
            out += &format!("; eliminated {}", list(&self.eliminated));
        }
        if !self.complete {
            out += " (budget exhausted)";
        }
        out
    }
}

impl Text for QuotientReport {
    fn text(&self) -> String {
        let rows: Vec<String> = self
            .quotients
            .iter()
            .map(|q| format!("gamma{}/gamma{}: {}", q.weight, q.weight + 1, q.invariants))
            .collect();
        format!("{} ({}), class {}\n{}", self.source, self.rep, self.class, rows.join("\n"))
    }
}

impl Text for AbelianReport {
    fn text(&self) -> String {
        format!("{} ({}): {}", self.source, self.rep, self.invariants)
    }
}

impl Text for FbcReport {
    fn text(&self) -> String {
        let mut out = format!("{} with stable generator {}\n", self.source, self.stable);
        out += &format!("shifted relators: {}\nnormalized:       {}\n", list(&self.shifted_relators), list(&self.normalized_relators));
        match (&self.decomposition, &self.amalgam) {
            (Some(d), _) => {
                out += &format!("free of rank {} by cyclic\n{}\n{}\naction matrix:\n{}verdict: {}", d.rank, d.top_rule, d.bottom_rule, d.action_matrix, d.verdict);
            }
            (None, Some(a)) => {
                out += &format!(
                    "not free-by-cyclic; kernel amalgamates pieces < {} | {} > along free rank-{} subgroups < {} >, shift {}",
                    list(&a.piece_generators),
                    a.piece_relator,
                    a.edge_free_rank,
                    list(&a.edge_generators),
                    a.shift
                );
            }
            (None, None) => out += "no decomposition",
        }
        out
    }
}

impl Text for RepresentationReport {
    fn text(&self) -> String {
        let bad: Vec<String> =
            self.relations.iter().filter(|r| !r.pass).map(|r| format!("{} = {}", r.lhs_word, r.rhs_word)).collect();
        let status = if self.passed { "all hold".to_string() } else { format!("failing: {}", list(&bad)) };
        format!("{} relations of VB_{} under {}: {}", self.relations.len(), self.strands, self.rep, status)
    }
}

impl Text for CheckReport {
    fn text(&self) -> String {
        let mut out: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let mark = if r.pass { "ok  " } else { "FAIL" };
                format!("{mark} {:<5} {:<40} {}", r.knot, r.check, r.actual)
            })
            .collect();
        out.push(if self.passed { "all checks passed".into() } else { "some checks FAILED".into() });
        out.join("\n")
    }
}

impl Text for CompareReport {
    fn text(&self) -> String {
        format!(
            "{}: {}\n{}: {}\n{}",
            self.left, self.comparison.left, self.right, self.comparison.right, self.comparison.verdict
        )
    }
}

fn emit<T: Serialize + Text>(report: &T, text: bool) -> anyhow::Result<()> {
    let out = if text { report.text() } else { serde_json::to_string_pretty(report)? };
    match writeln!(std::io::stdout().lock(), "{out}") {
        // a closed pipe (`vknot ... | head`) is not an error
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// `Ok(false)` means the command ran but a check failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = settings(cli.config.as_ref())?;
    let text = cli.text;
    match cli.cmd {
        Cmd::Group(input) => emit(&input.source()?.group(input.rep, cfg.tietze_budget)?, text)?,
        Cmd::Lcs { input, class } => {
            let r = quotient_report(&input.source()?, input.rep, class.unwrap_or(cfg.class), cfg.tietze_budget)?;
            emit(&r, text)?
        }
        Cmd::Abelianize(input) => emit(&abelian_report(&input.source()?, input.rep)?, text)?,
        Cmd::Fbc { input, stable, m_max } => {
            let r = fbc_report(&input.source()?, stable.as_deref(), cfg.tietze_budget, m_max.unwrap_or(cfg.m_max))?;
            emit(&r, text)?
        }
        Cmd::VerifyRep { strands, rep } => {
            let r = representation_report(rep, strands)?;
            emit(&r, text)?;
            return Ok(r.passed);
        }
        Cmd::Check => {
            let r = run_check(&cfg);
            emit(&r, text)?;
            return Ok(r.passed);
        }
        Cmd::Compare { input, other_rep, class } => {
            let src = input.source()?;
            let r = compare_report((&src, input.rep), (&src, other_rep), class.unwrap_or(cfg.class), cfg.tietze_budget)?;
            emit(&r, text)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
