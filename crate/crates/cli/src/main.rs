//! Batch front end: parameter management, word and element I/O, and one
//! subcommand per pipeline of the engine.
//!
//! Exit status: 0 on success, 1 on domain errors, 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use gfrac::chart::{self, Relation};
use gfrac::construction::{Params, RawParams};
use gfrac::freegroup::Word;
use gfrac::multiturn::{check_certificate, Certificate};
use gfrac::quotient::{
    derived_monomials, multiply_mod_i, semicanonical_reduce_safe, semicanonical_reduce_traced,
    Diagram, RingElement,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gfrac", about = "Symbolic rewriting over Z2F modulo 1 + v + vw")]
struct Cli {
    /// key=value configuration file (alphabet, w, alpha, beta, tau, lambda,
    /// w_exponent_bound); desk-scale defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// override the configured w_exponent_bound
    #[arg(long, global = true)]
    bound: Option<i64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Eq23,
    Safe,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Echo the validated constants (ε, τ, λ, |v|, …)
    Params,
    /// Print the chart of a word: members, measures, relations, N, K_τ
    Chart { word: String },
    /// Λ-measure of the word when it parses as one generalized fractional power
    Measure { word: String },
    /// Reduce an element file to λ-semicanonical form; writes the element and
    /// a certificate for (input + output) ∈ I
    Reduce {
        element: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "eq23")]
        mode: Mode,
    },
    /// Multiply two S̃_λ words; writes element, certificate and diagram
    Multiply {
        left: String,
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Check a certificate file against an element file
    Verify { element: PathBuf, certificate: PathBuf },
    /// Derived monomials of a word, each tagged with its f-characteristic
    Derived {
        word: String,
        #[arg(long, default_value = "50")]
        budget: usize,
    },
    /// Render a stored diagram file
    Diagram {
        diagram: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        emit: Emit,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_params(cli: &Cli) -> Result<Params, String> {
    let mut raw = match &cli.config {
        None => RawParams::desk_scale(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            RawParams::from_config(&text).map_err(|e| e.to_string())?
        }
    };
    if let Some(bound) = cli.bound {
        raw.w_exponent_bound = bound;
    }
    raw.validate().map_err(|e| e.to_string())
}

/// Expands the abbreviations v, V, w, W against the active parameters, then
/// parses.  Expansion only applies to letters outside the alphabet.
fn parse_word(text: &str, p: &Params) -> Result<Word, String> {
    let mut expanded = String::new();
    for c in text.chars() {
        let lower = c.to_ascii_lowercase();
        if p.alphabet.index_of(lower).is_some() {
            expanded.push(c);
            continue;
        }
        match c {
            'v' => expanded.push_str(&p.v_word().format(&p.alphabet)),
            'V' => expanded.push_str(&p.v_word().invert().format(&p.alphabet)),
            'w' => expanded.push_str(&p.w.format(&p.alphabet)),
            'W' => expanded.push_str(&p.w.invert().format(&p.alphabet)),
            _ => expanded.push(c),
        }
    }
    Word::parse(&expanded, &p.alphabet).map_err(|e| e.to_string())
}

fn read_element(path: &Path, p: &Params) -> Result<RingElement, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("bad JSON in {}: {e}", path.display()))?;
    let arr = value
        .as_array()
        .ok_or_else(|| format!("{}: element file must be a JSON array", path.display()))?;
    let mut element = RingElement::zero();
    for item in arr {
        let s = item
            .as_str()
            .ok_or_else(|| format!("{}: element entries must be strings", path.display()))?;
        element.toggle(parse_word(s, p)?);
    }
    Ok(element)
}

fn write_or_print(path: &Option<PathBuf>, contents: &str) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

fn run(cli: Cli) -> Result<(), String> {
    let p = load_params(&cli)?;
    match &cli.command {
        Command::Params => {
            println!("{p}");
            Ok(())
        }
        Command::Chart { word } => {
            let u = parse_word(word, &p)?;
            let chart = chart::chart_of(&u, &p);
            println!("word length {}", u.len());
            println!("members: {}", chart.members.len());
            for (i, m) in chart.members.iter().enumerate() {
                println!(
                    "  member {} span [{}, {}) measure {}",
                    i,
                    m.start,
                    m.end,
                    p.format_measure(m.ys())
                );
                if i + 1 < chart.members.len() {
                    let rel = match &chart.relations[i] {
                        Relation::Separated => "separated".to_string(),
                        Relation::Touch => "touch".to_string(),
                        Relation::Overlap(piece) => format!(
                            "overlap of measure {}",
                            p.format_measure(
                                piece.count_gen(gfrac::freegroup::Alphabet::Y)
                            )
                        ),
                    };
                    println!("  relation to next: {rel}");
                }
            }
            let stats = chart::cover_stats(&u, &p);
            println!("N = {}", stats.n_min);
            println!("K_tau = {}", stats.k_tau);
            println!("f = ({}, {})", stats.n_min, stats.k_tau);
            Ok(())
        }
        Command::Measure { word } => {
            let u = parse_word(word, &p)?;
            match gfrac::gfp::parse_gfp(&u, &p) {
                Some(path) => {
                    println!("{}", p.format_measure(path.ys(&p)));
                    Ok(())
                }
                None => Err("word is not a generalized fractional power".to_string()),
            }
        }
        Command::Reduce { element, out, mode } => {
            let e = read_element(element, &p)?;
            let (reduced, cert) = match mode {
                Mode::Eq23 => {
                    let (r, c, _) = semicanonical_reduce_traced(&e, &p);
                    (r, c)
                }
                Mode::Safe => semicanonical_reduce_safe(&e, &p).map_err(|e| e.to_string())?,
            };
            let element_json = serde_json::to_string_pretty(&reduced.to_json(&p)).unwrap();
            let cert_json = serde_json::to_string_pretty(&cert.to_json(&p)).unwrap();
            match out {
                Some(path) => {
                    write_or_print(&Some(path.clone()), &element_json)?;
                    write_or_print(&Some(sibling(path, ".cert.json")), &cert_json)?;
                    println!(
                        "reduced to {} monomials; certificate with {} pairs",
                        reduced.len(),
                        cert.pairs.len()
                    );
                }
                None => {
                    println!("{element_json}");
                    println!("{cert_json}");
                }
            }
            Ok(())
        }
        Command::Multiply { left, right, out, emit } => {
            let u1 = parse_word(left, &p)?;
            let u2 = parse_word(right, &p)?;
            let (element, diagram, cert) =
                multiply_mod_i(&u1, &u2, &p).map_err(|e| e.to_string())?;
            let element_json = serde_json::to_string_pretty(&element.to_json(&p)).unwrap();
            let cert_json = serde_json::to_string_pretty(&cert.to_json(&p)).unwrap();
            let diagram_out = match emit {
                Emit::Json => serde_json::to_string_pretty(&diagram.to_json(&p)).unwrap(),
                Emit::Dot => diagram.to_dot(&p),
            };
            match out {
                Some(path) => {
                    write_or_print(&Some(path.clone()), &element_json)?;
                    write_or_print(&Some(sibling(path, ".cert.json")), &cert_json)?;
                    let ext = match emit {
                        Emit::Json => ".diagram.json",
                        Emit::Dot => ".diagram.dot",
                    };
                    write_or_print(&Some(sibling(path, ext)), &diagram_out)?;
                    println!(
                        "product has {} monomials; {} lenses glued",
                        element.len(),
                        diagram.lenses.len()
                    );
                }
                None => {
                    println!("{element_json}");
                    println!("{cert_json}");
                    println!("{diagram_out}");
                }
            }
            Ok(())
        }
        Command::Verify { element, certificate } => {
            let e = read_element(element, &p)?;
            let text = std::fs::read_to_string(certificate)
                .map_err(|err| format!("cannot read {}: {err}", certificate.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|err| format!("bad JSON in {}: {err}", certificate.display()))?;
            let cert = Certificate::from_json(&value, &p)
                .ok_or_else(|| format!("{}: malformed certificate", certificate.display()))?;
            if check_certificate(e.monomials(), &cert, &p) {
                println!("PASS");
                Ok(())
            } else {
                let expansion = RingElement::from_words(cert.expand(&p));
                let diff = expansion.add(&e);
                println!("FAIL");
                println!(
                    "difference: {}",
                    serde_json::to_string(&diff.to_json(&p)).unwrap()
                );
                Err("certificate does not expand to the element".to_string())
            }
        }
        Command::Derived { word, budget } => {
            let u = parse_word(word, &p)?;
            let derived = derived_monomials(&u, &p, *budget);
            for (w, f) in &derived.words {
                println!("f={f} {}", w.format(&p.alphabet));
            }
            if derived.truncated {
                println!("… truncated at budget {budget}");
            }
            Ok(())
        }
        Command::Diagram { diagram, emit } => {
            let text = std::fs::read_to_string(diagram)
                .map_err(|e| format!("cannot read {}: {e}", diagram.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| format!("bad JSON in {}: {e}", diagram.display()))?;
            let d = Diagram::from_json(&value, &p)
                .ok_or_else(|| format!("{}: malformed diagram", diagram.display()))?;
            match emit {
                Emit::Dot => println!("{}", d.to_dot(&p)),
                Emit::Json => {
                    println!("{}", serde_json::to_string_pretty(&d.to_json(&p)).unwrap())
                }
            }
            Ok(())
        }
    }
}
