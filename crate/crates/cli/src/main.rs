use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use posrep::format::{operator_json, render_operator};
use posrep::moddouble::{
    build_modified, check_modified_relations, commutant_check, cross_parity_certificate, normalization_report,
    normalize_lambda, qtori_certificate, verify_weyl_pattern,
};
use posrep::qtorus::QOperator;
use posrep::repbuild::{
    bad_word_experiment, build_e, build_f, build_k, build_rep, classical_render, term_counts, DEFAULT_MAX_TERMS,
};
use posrep::rootdata::{build_cartan, CartanDatum, Family};
use posrep::transport::transport_with_stats;
use posrep::verify::{check_relations, exponent_parity, positivity_shadow, Report};
use posrep::words::{braid_path, good_word_with, parse_letters, Catalog, PrefixSpelling, ReducedWord};

#[derive(Parser)]
#[command(name = "posrep", about = "Positive representations of simply-laced quantum groups")]
struct Cli {
    /// Word catalog overriding the built-in good words (`TYPE RANK: i1,i2,...` per line).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spelling {
    Largest,
    Smallest,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print one generator's action.
    Construct {
        family: Family,
        rank: usize,
        /// `good`, `end:i`, `start:i` or an explicit list `i1,i2,...`.
        #[arg(long, default_value = "good")]
        word: String,
        /// E<i>, F<i> or K<i>.
        #[arg(long)]
        gen: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Per-generator term counts.
    Tables {
        family: Family,
        rank: usize,
        #[arg(long, default_value = "good")]
        word: String,
        /// Run the blown-up word experiment instead.
        #[arg(long)]
        badword: bool,
        #[arg(long, value_enum, default_value = "largest")]
        spelling: Spelling,
        /// Print the per-move monomial counts of the experiment.
        #[arg(long)]
        trace: bool,
    },
    /// Relation suite and structural certificates (JSON).
    Verify {
        family: Family,
        rank: usize,
        #[arg(long, default_value = "good")]
        word: String,
        /// Also check the modified generators (both bipartitions).
        #[arg(long)]
        modified: bool,
    },
    /// Transport a generator from one word to another.
    Transport {
        family: Family,
        rank: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        gen: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Langlands-dual commutant certificate.
    Commutant { family: Family, rank: usize },
    /// Shift the variables so that every K_i is free of lambda.
    NormalizeLambda {
        family: Family,
        rank: usize,
        #[arg(long, default_value = "good")]
        word: String,
    },
    /// Classical finite-difference reading of a generator.
    Classical {
        family: Family,
        rank: usize,
        #[arg(long, default_value = "good")]
        word: String,
        #[arg(long)]
        gen: String,
    },
    /// Weyl-action pattern check on lambda for one node.
    Weyl {
        family: Family,
        rank: usize,
        #[arg(long)]
        node: u8,
    },
}

fn datum(family: Family, rank: usize) -> Result<Arc<CartanDatum>> {
    Ok(Arc::new(build_cartan(family, rank)?))
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog> {
    match path {
        None => Ok(Catalog::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(Catalog::parse(&text)?)
        }
    }
}

fn resolve_word(d: &Arc<CartanDatum>, spec: &str, catalog: &Catalog) -> Result<ReducedWord> {
    let good = || good_word_with(d, catalog);
    Ok(match spec {
        "good" => good()?,
        s if s.starts_with("end:") => good()?.move_to_end(s[4..].parse()?)?.1,
        s if s.starts_with("start:") => good()?.move_to_front(s[6..].parse()?)?.1,
        s => ReducedWord::longest(d.clone(), parse_letters(s)?)?,
    })
}

fn parse_gen(s: &str) -> Result<(char, u8)> {
    let mut chars = s.chars();
    let kind = chars.next().map(|c| c.to_ascii_uppercase());
    match kind {
        Some(k @ ('E' | 'F' | 'K')) => Ok((k, chars.as_str().parse().with_context(|| format!("bad generator {s}"))?)),
        _ => bail!("generator must be E<i>, F<i> or K<i>, got {s}"),
    }
}

fn build_gen(word: &ReducedWord, gen: &str) -> Result<QOperator> {
    let (kind, label) = parse_gen(gen)?;
    Ok(match kind {
        'E' => build_e(word, label)?,
        'F' => build_f(word, label)?,
        _ => build_k(word, label)?,
    })
}

fn print_op(op: &QOperator, word: &ReducedWord, format: Format) -> Result<()> {
    match format {
        Format::Text => println!("{}", render_operator(op, word)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&operator_json(op, word))?),
    }
    Ok(())
}

fn emit(reports: &[Report]) -> Result<bool> {
    let all: Vec<Value> = reports.iter().map(Report::to_json).collect();
    println!("{}", serde_json::to_string_pretty(&all)?);
    Ok(reports.iter().all(Report::passed))
}

fn max_terms() -> Result<usize> {
    match std::env::var("POSREP_MAX_TERMS") {
        Ok(v) => v.parse().with_context(|| format!("POSREP_MAX_TERMS={v}")),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn counts_line(name: &str, counts: &[usize]) -> String {
    let list: Vec<String> = counts.iter().map(usize::to_string).collect();
    format!("{name}: ({}) total {}", list.join(","), counts.iter().sum::<usize>())
}

fn run(cli: Cli) -> Result<bool> {
    let catalog = load_catalog(&cli.catalog)?;
    match cli.cmd {
        Cmd::Construct {
            family,
            rank,
            word,
            gen,
            format,
        } => {
            let d = datum(family, rank)?;
            let w = resolve_word(&d, &word, &catalog)?;
            print_op(&build_gen(&w, &gen)?, &w, format)?;
            Ok(true)
        }
        Cmd::Tables {
            family,
            rank,
            word,
            badword,
            spelling,
            trace,
        } => {
            let d = datum(family, rank)?;
            if badword {
                let spelling = match spelling {
                    Spelling::Largest => PrefixSpelling::LargestDescent,
                    Spelling::Smallest => PrefixSpelling::SmallestDescent,
                };
                let run = bad_word_experiment(&d, spelling, max_terms()?)?;
                println!("word: {}", run.word);
                if trace {
                    for t in &run.trace {
                        println!("{} {} {} {}", t.step, t.mv, t.word, t.monomials);
                    }
                }
                match (run.count, run.aborted) {
                    (Some(c), _) => println!("E{}: {c}", run.label),
                    (None, Some(why)) => {
                        println!("E{}: aborted after {} moves ({why})", run.label, run.trace.len());
                        return Ok(false);
                    }
                    (None, None) => unreachable!("experiment neither finished nor aborted"),
                }
                return Ok(true);
            }
            let w = resolve_word(&d, &word, &catalog)?;
            let rep = build_rep(&d, &w)?;
            let counts = term_counts(&rep)?;
            println!("word: {w}");
            println!("nodes: {:?}", d.labels());
            println!("{}", counts_line("E", &counts.iter().map(|c| c.0).collect::<Vec<_>>()));
            println!("{}", counts_line("F", &counts.iter().map(|c| c.1).collect::<Vec<_>>()));
            Ok(true)
        }
        Cmd::Verify {
            family,
            rank,
            word,
            modified,
        } => {
            let d = datum(family, rank)?;
            let w = resolve_word(&d, &word, &catalog)?;
            let rep = build_rep(&d, &w)?;
            let mut reports = vec![check_relations(&rep)?, positivity_shadow(&rep), exponent_parity(&rep)];
            if modified {
                let base = d.bipartition().to_vec();
                let flipped: Vec<u8> = base.iter().map(|n| 1 - n).collect();
                for weights in [base, flipped] {
                    let m = build_modified(&rep, &weights)?;
                    reports.push(check_modified_relations(&m)?);
                    reports.push(cross_parity_certificate(&m).0);
                    reports.push(qtori_certificate(&m));
                }
            }
            emit(&reports)
        }
        Cmd::Transport {
            family,
            rank,
            from,
            to,
            gen,
            trace,
            format,
        } => {
            let d = datum(family, rank)?;
            let a = resolve_word(&d, &from, &catalog)?;
            let b = resolve_word(&d, &to, &catalog)?;
            let path = braid_path(&a, &b)?;
            let op = build_gen(&a, &gen)?;
            let (out, stats) = transport_with_stats(&op, &a, &path, |step, w, op| {
                if trace {
                    eprintln!("{} {} {} {}", step, path[step], w, op.len());
                }
                Ok(())
            })?;
            if trace {
                eprintln!("max |s| = {}, max monomials = {}", stats.max_pairing, stats.max_terms);
            }
            print_op(&out, &b, format)?;
            Ok(true)
        }
        Cmd::Commutant { family, rank } => {
            let d = datum(family, rank)?;
            let rep = build_rep(&d, &good_word_with(&d, &catalog)?)?;
            let m = build_modified(&rep, d.bipartition())?;
            let (report, lines) = commutant_check(&m);
            let out = json!({
                "report": report.to_json(),
                "b_vectors": lines.iter().map(|l| json!({
                    "k": l.k,
                    "b": l.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "pairings": l.pairings.iter().map(|(n, s)| json!({ "generator": n, "pairing": s.to_string() })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(report.passed())
        }
        Cmd::NormalizeLambda { family, rank, word } => {
            let d = datum(family, rank)?;
            let w = resolve_word(&d, &word, &catalog)?;
            let norm = normalize_lambda(&build_rep(&d, &w)?)?;
            let report = normalization_report(&norm)?;
            let names = posrep::format::variable_names(&w);
            let shifts: Vec<String> = norm
                .shifts
                .iter()
                .zip(&names)
                .map(|(s, n)| {
                    format!(
                        "u{n} -> u{n} - ({})",
                        posrep::format::linear_form(&vec![0; w.len()], s, &names, &d)
                    )
                })
                .collect();
            let ks: Vec<String> = d
                .labels()
                .iter()
                .map(|&l| format!("K{l} = {}", render_operator(norm.rep.k(l), &w)))
                .collect();
            let out = json!({
                "report": report.to_json(),
                "betas": norm.betas.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "shifts": shifts,
                "K": ks,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(report.passed())
        }
        Cmd::Classical {
            family,
            rank,
            word,
            gen,
        } => {
            let d = datum(family, rank)?;
            let w = resolve_word(&d, &word, &catalog)?;
            println!("{}", classical_render(&build_gen(&w, &gen)?, &w)?);
            Ok(true)
        }
        Cmd::Weyl { family, rank, node } => {
            let d = datum(family, rank)?;
            emit(&[verify_weyl_pattern(&d, node)?])
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
