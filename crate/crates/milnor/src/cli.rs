//! Command-line front end.
//!
//! Every subcommand reads plain arguments or the text file formats of
//! this crate and writes a deterministic report to stdout, as text or as
//! JSON under `--format json`. Negative verdicts (an essential link, an
//! invalid certificate) are results, not failures: the process exits 0
//! for them, 1 for domain errors such as unparsable words or out-of-range
//! components, and 2 for command-line usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::engel::{engel_decompose, kinky_relation, parse_certificate, verify_certificate, EngelCertificate, EngelError};
use crate::lie::{quotient_report, LieError};
use crate::links::{
    build_gbr, index_label, parse_link, parse_tree, render_link, stabilize_and_trivialize,
    LinkError, LinkPresentation,
};
use crate::magnus::{expand, MagnusError};
use crate::milnor::MilnorContext;
use crate::parse::{parse_word, ParseError};

/// Errors that terminate a subcommand with exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Word(#[from] ParseError),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Engel(#[from] EngelError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "milnor",
    version,
    about = "Commutator calculus in Milnor groups: expansions, certificates, links"
)]
pub struct Cli {
    /// Output format for every subcommand.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a word into the truncated power-series ring.
    Expand {
        /// Word over generators x1, x2, ... (x y z w u v name x1..x6).
        #[arg(long)]
        word: String,
        /// Number of generators of the ambient free group.
        #[arg(long)]
        gens: u32,
        /// Truncation degree; defaults to the generator count.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Drop monomials with repeated variables.
        #[arg(long)]
        reduced: bool,
    },
    /// Evaluate one link-homotopy invariant of a link file.
    Mu {
        /// Path to a link file.
        #[arg(long)]
        link: PathBuf,
        /// Source components, comma separated, in order.
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<u32>,
        /// Target component whose longitude is expanded.
        #[arg(long)]
        target: u32,
    },
    /// Decide whether a link file is homotopically trivial.
    Trivial {
        #[arg(long)]
        link: PathBuf,
    },
    /// Decompose a word into elementary commutators.
    Certify {
        /// Word of lower-central degree at least 4 (or trivial).
        #[arg(long)]
        word: String,
        /// Number of generators of the ambient free group.
        #[arg(long)]
        gens: u32,
    },
    /// Check a certificate file against the Milnor group.
    VerifyCert {
        /// Path to a certificate in the `certify` text format.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Graded report on the quotient by n-Engel relations.
    LieReport {
        /// Number of generators.
        #[arg(long)]
        gens: u32,
        /// Highest graded degree to report, at most the generator count.
        #[arg(long)]
        max_degree: usize,
        /// Engel order of the imposed relations.
        #[arg(long, default_value_t = 2)]
        engel: u32,
    },
    /// Build a generalized Borromean link from two cabling trees.
    Gbr {
        /// Cabling tree for the first Hopf component, e.g. "(1 (1 2))".
        #[arg(long)]
        first: String,
        /// Cabling tree for the second Hopf component.
        #[arg(long)]
        second: String,
    },
    /// Band-sum a component of a link with an insert curve.
    BandSum {
        #[arg(long)]
        link: PathBuf,
        /// Component whose longitude receives the band.
        #[arg(long)]
        component: u32,
        /// Insert curve, a word avoiding the component's own meridian.
        #[arg(long)]
        insert: String,
        /// Band orientation.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i8,
    },
    /// Untie a link whose longitudes lie in the fourth lower-central term.
    Stabilize {
        #[arg(long)]
        link: PathBuf,
    },
    /// Meridian relation word of an order-k kinky handle.
    Kinky {
        /// Number of self-intersections of the kinky handle.
        #[arg(long)]
        order: u32,
    },
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
    s.push('\n');
    s
}

fn certificate_json(cert: &EngelCertificate) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = cert
        .terms()
        .iter()
        .map(|t| {
            json!({
                "type": t.term_type().expect("validated on construction").label().to_string(),
                "exponent": t.exponent(),
                "entries": t.entries().iter().map(|e| e.display_with("x")).collect::<Vec<_>>(),
            })
        })
        .collect();
    let counts = cert.type_counts();
    json!({
        "gens": cert.gens(),
        "target": cert.target().display_with("x"),
        "terms": terms,
        "type_counts": {
            "a": counts[&'a'],
            "b": counts[&'b'],
            "c": counts[&'c'],
        },
    })
}

fn counts_suffix(cert: &EngelCertificate) -> String {
    let counts = cert.type_counts();
    format!(
        "{} terms (a={} b={} c={})",
        cert.terms().len(),
        counts[&'a'],
        counts[&'b'],
        counts[&'c']
    )
}

fn run_expand(
    word: &str,
    gens: u32,
    max_degree: Option<usize>,
    reduced: bool,
    format: Format,
) -> Result<String, CliError> {
    let w = parse_word(word)?;
    let degree = max_degree.unwrap_or(gens as usize);
    let full = expand(&w, gens, degree)?;
    let (rendered, terms): (String, Vec<serde_json::Value>) = if reduced {
        let r = full.reduce();
        let terms = r
            .terms()
            .map(|(m, c)| json!({"monomial": m.to_string(), "coefficient": c.to_string()}))
            .collect();
        (r.to_string(), terms)
    } else {
        let terms = full
            .terms()
            .map(|(m, c)| json!({"monomial": m.to_string(), "coefficient": c.to_string()}))
            .collect();
        (full.to_string(), terms)
    };
    Ok(match format {
        Format::Text => format!("{rendered}\n"),
        Format::Json => json_line(json!({
            "word": w.display_with("x"),
            "gens": gens,
            "max_degree": if reduced { degree.min(gens as usize) } else { degree },
            "reduced": reduced,
            "series": rendered,
            "terms": terms,
        })),
    })
}

fn run_mu(link: &LinkPresentation, sources: &[u32], target: u32, format: Format) -> Result<String, CliError> {
    let mu = link.mu_bar(sources, target)?;
    Ok(match format {
        Format::Text => {
            let flag = if mu.well_defined {
                "well-defined"
            } else {
                "not well-defined"
            };
            format!(
                "mu({};{}) = {} ({flag})\n",
                index_label(sources),
                target,
                mu.value
            )
        }
        Format::Json => json_line(json!({
            "sources": sources,
            "target": target,
            "value": mu.value.to_string(),
            "well_defined": mu.well_defined,
        })),
    })
}

fn run_trivial(link: &LinkPresentation, format: Format) -> Result<String, CliError> {
    let witness = link.homotopically_trivial()?;
    Ok(match format {
        Format::Text => match witness {
            None => "TRIVIAL\n".to_string(),
            Some(w) => format!("ESSENTIAL witness {w}\n"),
        },
        Format::Json => match witness {
            None => json_line(json!({"trivial": true})),
            Some(w) => json_line(json!({
                "trivial": false,
                "witness": {
                    "sources": w.sources,
                    "target": w.target,
                    "value": w.value.to_string(),
                },
            })),
        },
    })
}

fn run_certify(word: &str, gens: u32, format: Format) -> Result<String, CliError> {
    let w = parse_word(word)?;
    let ctx = MilnorContext::new(gens);
    let cert = engel_decompose(&w, &ctx)?;
    Ok(match format {
        Format::Text => cert.to_text(),
        Format::Json => json_line(certificate_json(&cert)),
    })
}

fn run_verify_cert(text: &str, format: Format) -> Result<String, CliError> {
    let cert = parse_certificate(text)?;
    let ctx = MilnorContext::new(cert.gens());
    let valid = verify_certificate(&cert, &ctx)?;
    Ok(match format {
        Format::Text => {
            if valid {
                format!("VALID: {}\n", counts_suffix(&cert))
            } else {
                "INVALID: residual is non-trivial in the Milnor group\n".to_string()
            }
        }
        Format::Json => {
            let counts = cert.type_counts();
            json_line(json!({
                "valid": valid,
                "terms": cert.terms().len(),
                "type_counts": {
                    "a": counts[&'a'],
                    "b": counts[&'b'],
                    "c": counts[&'c'],
                },
            }))
        }
    })
}

fn run_lie_report(gens: u32, max_degree: usize, engel: u32, format: Format) -> Result<String, CliError> {
    let report = quotient_report(gens, max_degree, engel)?;
    Ok(match format {
        Format::Text => format!("{report}"),
        Format::Json => {
            let degrees: Vec<serde_json::Value> = report
                .degrees
                .iter()
                .map(|d| {
                    json!({
                        "degree": d.degree,
                        "basis_rank": d.basis_rank,
                        "relation_rows": d.relation_rows,
                        "invariant_factors": d.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "free_rank": d.free_rank,
                    })
                })
                .collect();
            json_line(json!({
                "gens": report.gens,
                "engel_order": report.engel_order,
                "max_degree": report.max_degree,
                "degrees": degrees,
            }))
        }
    })
}

fn run_gbr(first: &str, second: &str, format: Format) -> Result<String, CliError> {
    let spec = crate::links::GbrSpec {
        first: parse_tree(first)?,
        second: parse_tree(second)?,
    };
    let link = build_gbr(&spec)?;
    let level = link.filtration_level()?;
    Ok(match format {
        Format::Text => format!(
            "# gbr {} {}\n# filtration-level {}\n{}",
            spec.first,
            spec.second,
            level,
            render_link(&link)
        ),
        Format::Json => json_line(json!({
            "first": spec.first.to_string(),
            "second": spec.second.to_string(),
            "components": link.components(),
            "filtration_level": level,
            "link": render_link(&link),
        })),
    })
}

fn run_band_sum(
    link: &LinkPresentation,
    component: u32,
    insert: &str,
    sign: i8,
    format: Format,
) -> Result<String, CliError> {
    let insert = parse_word(insert)?;
    let summed = link.band_sum(component, &insert, sign)?;
    Ok(match format {
        Format::Text => render_link(&summed),
        Format::Json => json_line(json!({"link": render_link(&summed)})),
    })
}

fn run_stabilize(link: &LinkPresentation, format: Format) -> Result<String, CliError> {
    let plan = stabilize_and_trivialize(link)?;
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "certificates = {}", plan.certificates.len()).unwrap();
            for c in &plan.certificates {
                writeln!(
                    out,
                    "component {}: degree {}, {}",
                    c.component,
                    c.degree,
                    counts_suffix(&c.certificate)
                )
                .unwrap();
            }
            writeln!(out, "moves = {}", plan.moves.len()).unwrap();
            for m in &plan.moves {
                let sign = if m.sign > 0 { "+1" } else { "-1" };
                writeln!(out, "band {} {} {}", m.component, sign, m.insert).unwrap();
            }
            writeln!(out, "result:").unwrap();
            out.push_str(&render_link(&plan.result));
            writeln!(out, "verdict: TRIVIAL").unwrap();
            out
        }
        Format::Json => {
            let certificates: Vec<serde_json::Value> = plan
                .certificates
                .iter()
                .map(|c| {
                    json!({
                        "component": c.component,
                        "degree": c.degree,
                        "certificate": certificate_json(&c.certificate),
                    })
                })
                .collect();
            let moves: Vec<serde_json::Value> = plan
                .moves
                .iter()
                .map(|m| {
                    json!({
                        "component": m.component,
                        "sign": m.sign,
                        "insert": m.insert.display_with("x"),
                    })
                })
                .collect();
            json_line(json!({
                "certificates": certificates,
                "moves": moves,
                "result": render_link(&plan.result),
                "trivial": true,
            }))
        }
    })
}

fn run_kinky(order: u32, format: Format) -> Result<String, CliError> {
    let word = kinky_relation(order)?;
    // The expansion's lowest degree is the word's lower-central degree in
    // the free group; the full ring on two variables doubles per degree,
    // so only confirm it for small orders.
    let degree = if order <= 6 {
        expand(&word, 2, (2 * order + 2) as usize)?.lowest_degree()
    } else {
        None
    };
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "order {order} kinky relation").unwrap();
            writeln!(out, "word = {word}").unwrap();
            writeln!(out, "length = {}", word.len()).unwrap();
            if let Some(d) = degree {
                writeln!(out, "lower-central degree = {d}").unwrap();
            }
            out
        }
        Format::Json => json_line(json!({
            "order": order,
            "word": word.display_with("x"),
            "length": word.len(),
            "degree": degree,
        })),
    })
}

/// Parses the command line, runs the subcommand, prints its report.
pub fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let format = cli.format;
    let out = match &cli.command {
        Command::Expand {
            word,
            gens,
            max_degree,
            reduced,
        } => run_expand(word, *gens, *max_degree, *reduced, format)?,
        Command::Mu {
            link,
            sources,
            target,
        } => {
            let parsed = parse_link(&read_file(link)?)?;
            run_mu(&parsed, sources, *target, format)?
        }
        Command::Trivial { link } => {
            let parsed = parse_link(&read_file(link)?)?;
            run_trivial(&parsed, format)?
        }
        Command::Certify { word, gens } => run_certify(word, *gens, format)?,
        Command::VerifyCert { cert } => run_verify_cert(&read_file(cert)?, format)?,
        Command::LieReport {
            gens,
            max_degree,
            engel,
        } => run_lie_report(*gens, *max_degree, *engel, format)?,
        Command::Gbr { first, second } => run_gbr(first, second, format)?,
        Command::BandSum {
            link,
            component,
            insert,
            sign,
        } => {
            let parsed = parse_link(&read_file(link)?)?;
            run_band_sum(&parsed, *component, insert, *sign, format)?
        }
        Command::Stabilize { link } => {
            let parsed = parse_link(&read_file(link)?)?;
            run_stabilize(&parsed, format)?
        }
        Command::Kinky { order } => run_kinky(*order, format)?,
    };
    print!("{out}");
    Ok(())
}
