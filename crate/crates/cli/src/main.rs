//! Command-line front end for the ciliate gene assembly simulator.
//!
//! Exit codes: 0 success, 1 proven failure (no strategy exists), 2 input
//! error, 3 resource limit exceeded, 4 internal disagreement between the
//! memoized search and the brute-force oracle.

mod report;

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ciliate::strategy::search as strategy_search;
use ciliate::{
    assemble, enumerate_legal_strings, enumerate_strategies, format_gene, oracle_reduce,
    parse_gene, random_scrambled_gene, to_legal_string, LegalString, MicronuclearGene, SearchError,
    SearchPolicy,
};

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(name = "ciliate", version, about = "Ciliate gene assembly simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a descriptor and print its canonical form and legal string
    Parse(InputArgs),
    /// Search for an assembly strategy and report the molecular result
    Assemble {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Enumerate all successful assembly strategies
    Strategies {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Generate a reproducible corpus of random scrambled genes
    Random {
        /// Number of orthodox MDSs
        #[arg(long)]
        kappa: u32,
        /// Deterministic seed (seed + i is used for gene i)
        #[arg(long)]
        seed: u64,
        /// Per-MDS inversion probability
        #[arg(long, default_value_t = 0.0)]
        inversion_prob: f64,
        /// Number of genes to generate
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Compare search against the brute-force oracle over the full
    /// enumerated universe
    Verify {
        /// Pointer-alphabet size of the universe (at most 4)
        #[arg(long)]
        max_pointers: u32,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Inline descriptor (or legal string with --raw)
    inline: Option<String>,
    /// Input file, one gene per line, `#` comments ignored; `-` for stdin
    #[arg(short, long)]
    input: Option<String>,
    /// Treat input as a legal string, bypassing the descriptor layer
    #[arg(long)]
    raw: bool,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Args)]
struct LimitArgs {
    /// Distinct states the search may expand
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
    /// Successful traces enumeration may report
    #[arg(long, default_value_t = 10_000)]
    max_traces: usize,
}

impl LimitArgs {
    fn policy(&self) -> SearchPolicy {
        SearchPolicy {
            max_states: self.max_states,
            max_traces: self.max_traces,
            ..SearchPolicy::default()
        }
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Either a parsed gene or, with --raw, a bare legal string.
enum Entry {
    Gene(MicronuclearGene),
    Raw(LegalString),
}

fn read_entries(args: &InputArgs) -> Result<Vec<Entry>, String> {
    let lines: Vec<String> = if let Some(text) = &args.inline {
        vec![text.clone()]
    } else {
        let content = match args.input.as_deref() {
            Some("-") | None => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| format!("reading stdin: {e}"))?;
                buf
            }
            Some(path) => fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?,
        };
        content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    };
    if lines.is_empty() {
        return Err("no input genes".to_string());
    }
    lines
        .iter()
        .map(|line| {
            if args.raw {
                LegalString::parse(line).map(Entry::Raw).map_err(|e| format!("{line}: {e}"))
            } else {
                parse_gene(line).map(Entry::Gene).map_err(|e| format!("{line}: {e}"))
            }
        })
        .collect()
}

fn exit_for_search_error(err: &SearchError) -> u8 {
    match err {
        SearchError::StateLimitExceeded { .. } => EXIT_LIMIT,
        _ => EXIT_INPUT,
    }
}

fn cmd_parse(args: &InputArgs) -> u8 {
    let entries = match read_entries(args) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    for entry in &entries {
        match entry {
            Entry::Gene(gene) => {
                let legal = to_legal_string(gene);
                match args.format {
                    OutputFormat::Text => {
                        println!("descriptor: {}", format_gene(gene));
                        println!("legal-string: {legal}");
                        println!("kappa: {}  ies: {}", gene.kappa(), gene.ies_count());
                    }
                    OutputFormat::Json => println!("{}", report::parse_json(gene, &legal)),
                }
            }
            Entry::Raw(legal) => match args.format {
                OutputFormat::Text => println!("legal-string: {legal}"),
                OutputFormat::Json => {
                    println!("{}", serde_json::json!({ "legal_string": legal.to_string() }))
                }
            },
        }
    }
    EXIT_OK
}

fn cmd_assemble(args: &InputArgs, limits: &LimitArgs) -> u8 {
    let entries = match read_entries(args) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let policy = limits.policy();
    let mut worst = EXIT_OK;
    for entry in &entries {
        let code = match entry {
            Entry::Gene(gene) => match assemble(gene, &policy) {
                Ok(result) => {
                    match args.format {
                        OutputFormat::Text => {
                            println!("gene: {}", format_gene(gene));
                            println!("{result}");
                        }
                        OutputFormat::Json => println!("{}", report::assembly_json(gene, &result)),
                    }
                    if result.success {
                        EXIT_OK
                    } else {
                        EXIT_FAILURE
                    }
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    exit_for_search_error(&err)
                }
            },
            Entry::Raw(legal) => match strategy_search(legal, &policy) {
                Ok(outcome) => match outcome.trace {
                    Some(trace) => {
                        match args.format {
                            OutputFormat::Text => {
                                println!("reducible: true");
                                print!("{trace}");
                            }
                            OutputFormat::Json => {
                                println!("{}", report::trace_json(&trace))
                            }
                        }
                        EXIT_OK
                    }
                    None => {
                        match args.format {
                            OutputFormat::Text => {
                                println!("reducible: false");
                                print!("{}", outcome.deepest);
                            }
                            OutputFormat::Json => {
                                println!("{}", report::trace_json(&outcome.deepest))
                            }
                        }
                        EXIT_FAILURE
                    }
                },
                Err(err) => {
                    eprintln!("error: {err}");
                    exit_for_search_error(&err)
                }
            },
        };
        worst = worst.max(code);
    }
    worst
}

fn cmd_strategies(args: &InputArgs, limits: &LimitArgs) -> u8 {
    let entries = match read_entries(args) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let mut policy = limits.policy();
    policy.mode = ciliate::SearchMode::Exhaustive;
    let mut worst = EXIT_OK;
    for entry in &entries {
        let legal = match entry {
            Entry::Gene(gene) => to_legal_string(gene),
            Entry::Raw(legal) => legal.clone(),
        };
        match enumerate_strategies(&legal, &policy) {
            Ok(enumeration) => {
                match args.format {
                    OutputFormat::Text => {
                        println!(
                            "strategies: {}{}",
                            enumeration.traces.len(),
                            if enumeration.truncated { " (truncated)" } else { "" }
                        );
                        for (k, trace) in enumeration.traces.iter().enumerate() {
                            println!("strategy {}:", k + 1);
                            print!("{trace}");
                        }
                    }
                    OutputFormat::Json => {
                        println!("{}", report::strategies_json(&legal, &enumeration))
                    }
                }
                if enumeration.traces.is_empty() && !enumeration.truncated {
                    worst = worst.max(EXIT_FAILURE);
                }
            }
            Err(err) => {
                eprintln!("error: {err}");
                worst = worst.max(exit_for_search_error(&err));
            }
        }
    }
    worst
}

fn cmd_random(kappa: u32, seed: u64, inversion_prob: f64, count: u64) -> u8 {
    println!("# random scrambled genes: kappa={kappa} inversion_prob={inversion_prob} seed={seed}");
    for i in 0..count {
        match random_scrambled_gene(kappa, inversion_prob, seed + i) {
            Ok(gene) => println!("{}", format_gene(&gene)),
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_INPUT;
            }
        }
    }
    EXIT_OK
}

struct VerifyRow {
    string: String,
    reducible: bool,
    count: u64,
    disagreement: Option<String>,
}

fn cmd_verify(max_pointers: u32, limits: &LimitArgs, format: OutputFormat) -> u8 {
    let universe = match enumerate_legal_strings(max_pointers) {
        Ok(it) => it.collect::<Vec<_>>(),
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_INPUT;
        }
    };
    let mut policy = limits.policy();
    policy.mode = ciliate::SearchMode::Exhaustive;
    let rows: Result<Vec<VerifyRow>, SearchError> = universe
        .par_iter()
        .map(|s| {
            let (oracle_red, oracle_count) = oracle_reduce(s)?;
            let search_red = ciliate::is_reducible(s, &policy)?;
            let enumeration = enumerate_strategies(s, &policy)?;
            let count = enumeration.traces.len() as u64;
            let mut disagreement = None;
            if search_red != oracle_red {
                disagreement = Some(format!(
                    "search says reducible={search_red}, oracle says {oracle_red}"
                ));
            } else if !enumeration.truncated && count != oracle_count {
                disagreement =
                    Some(format!("search counts {count} strategies, oracle counts {oracle_count}"));
            }
            Ok(VerifyRow { string: s.to_string(), reducible: oracle_red, count, disagreement })
        })
        .collect();
    let rows = match rows {
        Ok(rows) => rows,
        Err(err) => {
            eprintln!("error: {err}");
            return exit_for_search_error(&err);
        }
    };
    let total = rows.len();
    let reducible = rows.iter().filter(|r| r.reducible).count();
    let mut histogram: std::collections::BTreeMap<u64, usize> = std::collections::BTreeMap::new();
    for row in &rows {
        *histogram.entry(row.count).or_insert(0) += 1;
    }
    // the universe is generated in canonical order, so the first
    // disagreement is the minimal counterexample
    let counterexample = rows.iter().find(|r| r.disagreement.is_some());
    match format {
        OutputFormat::Text => {
            println!(
                "max_pointers={max_pointers} total={total} reducible={reducible} ({:.1}%)",
                100.0 * reducible as f64 / total as f64
            );
            println!("strategy-count histogram:");
            for (count, strings) in &histogram {
                println!("  {count}: {strings}");
            }
            match counterexample {
                None => println!("agreement: search and oracle agree on all {total} strings"),
                Some(row) => println!(
                    "DISAGREEMENT on \"{}\": {}",
                    row.string,
                    row.disagreement.as_ref().unwrap()
                ),
            }
        }
        OutputFormat::Json => {
            println!(
                "{}",
                report::verify_json(max_pointers, total, reducible, &histogram, counterexample.map(
                    |r| (r.string.as_str(), r.disagreement.as_deref().unwrap_or(""))
                ))
            );
        }
    }
    if counterexample.is_some() {
        EXIT_DISAGREEMENT
    } else {
        EXIT_OK
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Parse(input) => cmd_parse(input),
        Command::Assemble { input, limits } => cmd_assemble(input, limits),
        Command::Strategies { input, limits } => cmd_strategies(input, limits),
        Command::Random { kappa, seed, inversion_prob, count } => {
            cmd_random(*kappa, *seed, *inversion_prob, *count)
        }
        Command::Verify { max_pointers, limits, format } => {
            cmd_verify(*max_pointers, limits, *format)
        }
    };
    ExitCode::from(code)
}
