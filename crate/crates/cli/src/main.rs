//! `splicelab` — build automata for semi-simple splicing systems, generate
//! lower-bound witnesses, sweep families, and cross-check constructions
//! against the bounded splicing closure.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;

use splicelab::constructions::{construct_raw, ConstructionPath};
use splicelab::format::{
    dfa_to_string, load_bundle, load_dfa, parse_marker_list, write_atomically, BundleMetadata,
    SystemBundle,
};
use splicelab::lab::{
    bound, cross_validate, emit_report, random_system, run_family, CrossValidation,
    LanguageClass, ReportFormat, RuleClass, Verdict,
};
use splicelab::{Error, FamilyId, ResourceLimits, Severity, SplicingSystem, Variant};

#[derive(Parser)]
#[command(name = "splicelab", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the DFA for the language generated by a splicing system.
    Construct {
        /// Rule variant: 13, 14, 23 or 24 (with --initial).
        #[arg(long)]
        variant: Option<String>,
        /// Initial-language DFA file (text or .json).
        #[arg(long)]
        initial: Option<PathBuf>,
        /// Markers as `first:second` pairs, comma separated.
        #[arg(long, default_value = "")]
        markers: String,
        /// System bundle (alternative to --variant/--initial/--markers).
        #[arg(long, conflicts_with_all = ["variant", "initial", "markers"])]
        system: Option<PathBuf>,
        /// Construction route.
        #[arg(long, value_parser = ["direct", "iterative"], default_value = "direct")]
        path: String,
        /// Emit the raw construction instead of the minimal DFA.
        #[arg(long)]
        no_minimize: bool,
        /// Output DFA file (text, or .json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a lower-bound witness system.
    Witness {
        /// Family: 24-finite, 23-regular, 23-semi-finite, 23-simple-finite,
        /// 14-regular or 14-semi-finite.
        #[arg(long)]
        family: String,
        #[arg(short = 'n', long)]
        n: usize,
        /// Extra enlargement parameter (families 14-regular, 14-semi-finite).
        #[arg(long, default_value_t = 0)]
        extra: usize,
        /// Output bundle path (.json).
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep a witness family and verify measured sizes against the bounds.
    Verify {
        #[arg(long)]
        family: String,
        /// Parameter range, e.g. `4..9` (inclusive) or a single value.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        /// Report file (.csv, .json or .md); printed to stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cross-validate a system's construction against the closure oracle.
    Compare {
        /// System bundle to check.
        #[arg(long, required_unless_present = "random")]
        system: Option<PathBuf>,
        /// Check this DFA file instead of the freshly built construction.
        #[arg(long)]
        dfa: Option<PathBuf>,
        /// Generate and check this many random systems instead.
        #[arg(long, conflicts_with = "system")]
        random: Option<usize>,
        /// Variant for --random.
        #[arg(long, default_value = "24")]
        variant: String,
        /// Seed for --random.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        intermediate: Option<usize>,
    },
    /// Print the closed-form bound for one table cell.
    Bounds {
        /// Variant: 13, 14, 23 or 24.
        #[arg(long)]
        variant: String,
        /// Class: regular, finite, finite-simple or regular-simple.
        #[arg(long)]
        class: String,
        #[arg(short = 'n', long)]
        n: usize,
        /// |M1| where the formula depends on it.
        #[arg(long, default_value_t = 1)]
        m1: usize,
    },
    /// Enumerate the bounded closure of a system (exploratory tool).
    Oracle {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        intermediate: Option<usize>,
        /// Write words here (text: one word per line; .json: token arrays).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = ResourceLimits::from_env();
    match run(cli.command, &limits) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceExceeded { .. } | Error::WordTooWide { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command, limits: &ResourceLimits) -> splicelab::Result<ExitCode> {
    match command {
        Command::Construct {
            variant,
            initial,
            markers,
            system,
            path,
            no_minimize,
            out,
        } => {
            let system = match system {
                Some(bundle) => load_bundle(&bundle)?,
                None => {
                    let (variant, initial) = match (variant, initial) {
                        (Some(v), Some(i)) => (v, i),
                        _ => {
                            return Err(Error::InvalidSystem(
                                "construct needs either --system or both --variant and --initial"
                                    .into(),
                            ))
                        }
                    };
                    let dfa = load_dfa(&initial)?;
                    let markers = parse_marker_list(dfa.alphabet(), &markers)?;
                    SplicingSystem::new(Variant::parse(&variant)?, dfa, markers)?
                }
            };
            report_diagnostics(&system);
            let route = if path == "iterative" {
                ConstructionPath::Iterative
            } else {
                ConstructionPath::Direct
            };
            let raw = construct_raw(&system, route, limits)?;
            let minimal = raw.minimize();
            println!("states={} minimal={}", raw.state_count(), minimal.state_count());
            if let Some(out) = out {
                let dfa = if no_minimize { &raw } else { &minimal };
                write_atomically(&out, &dfa_to_string(dfa, &out))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { family, n, extra, out } => {
            let family = FamilyId::parse(&family)?;
            let system = family.generate(n, extra)?;
            let bundle = SystemBundle::from_system(
                &system,
                Some(BundleMetadata {
                    family: family.code().to_owned(),
                    n,
                    extra,
                }),
            );
            let mut text = serde_json::to_string_pretty(&bundle)?;
            text.push('\n');
            write_atomically(&out, &text)?;
            println!(
                "family={} n={} alphabet={} markers={} -> {}",
                family.code(),
                n,
                system.alphabet().len(),
                system.markers().len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            family,
            n,
            extra,
            report,
        } => {
            let family = FamilyId::parse(&family)?;
            let range = parse_range(&n)?;
            let rows = run_family(family, range, extra, limits);
            let format = report
                .as_deref()
                .map(ReportFormat::from_path)
                .unwrap_or(ReportFormat::Csv);
            let rendered = emit_report(&rows, format);
            match &report {
                Some(path) => write_atomically(path, &rendered)?,
                None => print!("{rendered}"),
            }
            let mut aborted = false;
            let mut failed = false;
            for row in &rows {
                match &row.verdict {
                    Verdict::Match | Verdict::ConflictResolvedTo(_) => {}
                    Verdict::UpperBoundOnly => {
                        eprintln!(
                            "warning: {} n={} measured {} matches no candidate ({})",
                            row.family.code(),
                            row.n,
                            row.minimal_states.unwrap_or(0),
                            row.predicted.render()
                        );
                        failed = true;
                    }
                    Verdict::BoundExceeded => {
                        eprintln!(
                            "error: {} n={} exceeds its bound ({})",
                            row.family.code(),
                            row.n,
                            row.predicted.render()
                        );
                        failed = true;
                    }
                    Verdict::Aborted(reason) => {
                        eprintln!("warning: {} n={} aborted: {reason}", row.family.code(), row.n);
                        aborted = true;
                    }
                }
            }
            Ok(if failed {
                ExitCode::from(1)
            } else if aborted {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Compare {
            system,
            dfa,
            random,
            variant,
            seed,
            max_len,
            intermediate,
        } => {
            let intermediate = intermediate.unwrap_or(max_len + 4);
            if let Some(count) = random {
                let variant = Variant::parse(&variant)?;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut failures = 0usize;
                for i in 0..count {
                    let sys = random_system(&mut rng, variant, 5, &["a", "b", "c"], 0.3);
                    let verdict = cross_validate(&sys, max_len, intermediate, limits);
                    if !matches!(verdict, CrossValidation::Equal { .. }) {
                        eprintln!("system {i}: {verdict:?}");
                        failures += 1;
                    }
                }
                println!(
                    "checked {count} random ({},{}) systems: {failures} failures",
                    &variant.code()[..1],
                    &variant.code()[1..]
                );
                return Ok(if failures > 0 {
                    ExitCode::from(1)
                } else {
                    ExitCode::SUCCESS
                });
            }
            let system = load_bundle(&system.expect("clap enforces presence"))?;
            report_diagnostics(&system);
            let external = dfa.as_deref().map(load_dfa).transpose()?;
            let verdict = splicelab::lab::cross_validate_against(
                &system,
                external.as_ref(),
                max_len,
                intermediate,
                limits,
            );
            match verdict {
                CrossValidation::Equal { words } => {
                    println!("equal ({words} words up to length {max_len})");
                    Ok(ExitCode::SUCCESS)
                }
                CrossValidation::OracleMissingWords { examples } => {
                    println!("oracle-missing-words: {}", examples.join(", "));
                    Ok(ExitCode::from(1))
                }
                CrossValidation::ConstructionMissingWords { examples } => {
                    println!("construction-missing-words: {}", examples.join(", "));
                    Ok(ExitCode::from(1))
                }
                CrossValidation::Inconclusive { reason } => {
                    println!("inconclusive: {reason}");
                    Ok(ExitCode::from(3))
                }
            }
        }
        Command::Bounds { variant, class, n, m1 } => {
            let variant = Variant::parse(&variant)?;
            let (language, rules) = match class.as_str() {
                "regular" => (LanguageClass::Regular, RuleClass::SemiSimple),
                "regular-simple" => (LanguageClass::Regular, RuleClass::Simple),
                "finite" => (LanguageClass::Finite, RuleClass::SemiSimple),
                "finite-simple" => (LanguageClass::Finite, RuleClass::Simple),
                other => {
                    return Err(Error::InvalidSystem(format!(
                        "unknown class `{other}` (regular, regular-simple, finite, finite-simple)"
                    )))
                }
            };
            let b = bound(variant, language, rules, n, m1)?;
            println!("{}", b.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            system,
            max_len,
            intermediate,
            out,
        } => {
            let system = load_bundle(&system)?;
            report_diagnostics(&system);
            let intermediate = intermediate.unwrap_or(max_len + 4);
            let words = splicelab::closure_bounded(&system, max_len, intermediate, limits)?;
            println!(
                "{} words of length <= {max_len} (intermediate cap {intermediate})",
                words.len()
            );
            let alphabet = system.alphabet();
            match out {
                Some(path) if path.extension().is_some_and(|e| e == "json") => {
                    let items: Vec<Vec<&str>> = words
                        .iter()
                        .map(|w| w.iter().map(|s| alphabet.token(*s)).collect())
                        .collect();
                    let mut text = serde_json::to_string_pretty(&items)?;
                    text.push('\n');
                    write_atomically(&path, &text)?;
                }
                Some(path) => {
                    let mut text = String::new();
                    for w in words.iter() {
                        text.push_str(&alphabet.format_word(w));
                        text.push('\n');
                    }
                    write_atomically(&path, &text)?;
                }
                None => {
                    for w in words.iter() {
                        println!("{}", alphabet.format_word(w));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn report_diagnostics(system: &SplicingSystem) {
    for d in system.validate() {
        match d.severity {
            Severity::Error => eprintln!("error: {}", d.message),
            Severity::Warning => eprintln!("warning: {}", d.message),
            Severity::Info => eprintln!("note: {}", d.message),
        }
    }
}

/// Parses `lo..hi` (inclusive) or a single number.
fn parse_range(text: &str) -> splicelab::Result<Vec<usize>> {
    let bad = || Error::InvalidSystem(format!("bad range `{text}` (expected `lo..hi` or `n`)"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        let n: usize = text.trim().parse().map_err(|_| bad())?;
        Ok(vec![n])
    }
}
