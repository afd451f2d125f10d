//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library and writes to the
//! given streams. Exit codes: 0 on success, 1 on domain errors or failed
//! checks, 2 on usage errors.

pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::digraph::Digraph;
use crate::error::Result;
use crate::freegroup::{count_wpaths, enumerate_wpaths};
use crate::freeprob::{free_cumulant_ad, moment_via_cumulants};
use crate::moments::{star_moment_anc2, star_moment_formula, verify_equivalence};
use crate::partitions::{enumerate_anc, enumerate_anc2, skeleton, Partition};
use crate::randgraph::{
    convergence_experiment, sample, ExperimentRecord, Model, SamplerConfig, DEFAULT_MAX_ATTEMPTS,
    GENERATOR, SEED_SCHEME,
};
use crate::words::Word;

pub use verify::{verify_sweep, CheckTally, SweepReport};

pub const THREADS_ENV: &str = "STARMOMENTS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "starmoments",
    version,
    about = "Star moments of regular directed trees and digraphs"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: $STARMOMENTS_THREADS, else available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Anc2,
    Brute,
    Cumulant,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Cm,
    Uniform,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Cm => Model::Cm,
            ModelArg::Uniform => Model::Uniform,
        }
    }
}

fn word_arg(s: &str) -> std::result::Result<Word, String> {
    s.parse::<Word>().map_err(|e| e.to_string())
}

/// Comma-separated list of non-negative integers.
#[derive(Debug, Clone)]
struct IndexList(Vec<usize>);

fn list_arg(s: &str) -> std::result::Result<IndexList, String> {
    if s.is_empty() {
        return Ok(IndexList(Vec::new()));
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("not a non-negative integer: {x:?}"))
        })
        .collect::<std::result::Result<_, _>>()
        .map(IndexList)
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Star moment M(w) of the d-regular directed tree
    Mm {
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Closed w-paths i1,...,ik (brute force)
    Paths {
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Skeleton of a closed w-path
    Skel {
        #[arg(long, value_parser = word_arg)]
        word: Word,
        /// Comma-separated generator indices, 1-based
        #[arg(long, value_parser = list_arg)]
        path: IndexList,
        #[arg(long)]
        degree: usize,
    },
    /// Alternating non-crossing partitions of a word
    EnumerateAnc {
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long)]
        pairs_only: bool,
    },
    /// Free cumulant of a_d on a word
    Cumulant {
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long)]
        degree: usize,
    },
    /// Tr A^w for a graph file
    Trace {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = word_arg)]
        word: Word,
    },
    /// Plain-cycle counts c_1..c_K
    Cycles {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare A^w(v,v) with M(w) away from short cycles
    Treecheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        radius: usize,
    },
    /// Sample a random d-regular digraph
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
        model: ModelArg,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        /// Output file (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimates of Tr A^w / n over several sizes
    Converge {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_parser = word_arg)]
        word: Word,
        #[arg(long, value_parser = list_arg)]
        sizes: IndexList,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
        model: ModelArg,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
    },
    /// Run every cross-oracle identity over all short words
    Verify {
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_parser = list_arg, default_value = "2,3")]
        degrees: IndexList,
    },
}

/// Outcome of a command: the text to print and whether it counts as success.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn envelope(command: &str, parameters: Value, payload: impl Serialize) -> String {
    let v = json!({
        "format": "json",
        "metadata": {
            "tool": "starmoments",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "parameters": parameters,
        },
        "payload": payload,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn lines<I: IntoIterator<Item = T>, T: ToString>(items: I) -> String {
    let mut s = String::new();
    for item in items {
        s.push_str(&item.to_string());
        s.push('\n');
    }
    s
}

fn join_path(p: &[usize]) -> String {
    p.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok()
}

/// Runs the CLI with `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let threads = cli.threads.or_else(threads_from_env);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(output) => {
            let _ = out.write_all(output.text.as_bytes());
            if output.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let fmt = cli.format;
    match &cli.command {
        Command::Mm {
            word,
            degree,
            method,
        } => mm(fmt, word, *degree, *method),
        Command::Paths {
            word,
            degree,
            count_only,
        } => {
            let params = json!({ "word": word, "degree": degree, "count_only": count_only });
            if *count_only {
                let c = count_wpaths(word, *degree)?;
                Ok(Output::ok(match fmt {
                    Format::Json => envelope("paths", params, json!({ "count": c })),
                    _ => format!("{c}\n"),
                }))
            } else {
                let paths = enumerate_wpaths(word, *degree)?;
                Ok(Output::ok(match fmt {
                    Format::Json => envelope("paths", params, json!({ "paths": paths })),
                    _ => lines(paths.iter().map(|p| join_path(p))),
                }))
            }
        }
        Command::Skel {
            word,
            path: IndexList(path),
            degree,
        } => {
            let pi = skeleton(word, path, *degree)?;
            let params = json!({ "word": word, "path": path, "degree": degree });
            Ok(Output::ok(partitions_output(
                fmt,
                "skel",
                params,
                std::slice::from_ref(&pi),
            )))
        }
        Command::EnumerateAnc { word, pairs_only } => {
            let list = if *pairs_only {
                enumerate_anc2(word)
            } else {
                enumerate_anc(word)
            };
            let params = json!({ "word": word, "pairs_only": pairs_only });
            Ok(Output::ok(partitions_output(
                fmt,
                "enumerate-anc",
                params,
                &list,
            )))
        }
        Command::Cumulant { word, degree } => {
            let k = free_cumulant_ad(word, *degree)?;
            Ok(Output::ok(match fmt {
                Format::Json => envelope(
                    "cumulant",
                    json!({ "word": word, "degree": degree }),
                    json!({ "cumulant": k.to_string() }),
                ),
                _ => format!("{k}\n"),
            }))
        }
        Command::Trace { graph, word } => {
            let (g, _) = Digraph::read_file(graph)?;
            let tr = g.star_moment_trace(word)?;
            let normalized = tr as f64 / g.vertex_count() as f64;
            Ok(Output::ok(match fmt {
                Format::Json => envelope(
                    "trace",
                    json!({ "graph": graph, "word": word }),
                    json!({ "n": g.vertex_count(), "trace": tr.to_string(), "normalized": normalized }),
                ),
                _ => format!("{tr}\n"),
            }))
        }
        Command::Cycles { graph, max_len } => {
            let (g, _) = Digraph::read_file(graph)?;
            let counts = (1..=*max_len)
                .map(|j| g.plain_cycle_count(j))
                .collect::<Result<Vec<_>>>()?;
            Ok(Output::ok(match fmt {
                Format::Json => envelope(
                    "cycles",
                    json!({ "graph": graph, "max_len": max_len }),
                    counts
                        .iter()
                        .map(|c| json!({ "length": c.length, "count": c.count.to_string() }))
                        .collect::<Vec<_>>(),
                ),
                Format::Csv => {
                    let mut s = String::from("length,count\n");
                    s.push_str(&lines(
                        counts.iter().map(|c| format!("{},{}", c.length, c.count)),
                    ));
                    s
                }
                Format::Text => lines(counts.iter().map(|c| format!("{} {}", c.length, c.count))),
            }))
        }
        Command::Treecheck {
            graph,
            degree,
            radius,
        } => {
            let (g, _) = Digraph::read_file(graph)?;
            let report = g.tree_likeness_check(*degree, *radius)?;
            let ok = report.violations.is_empty();
            let text = match fmt {
                Format::Json => envelope(
                    "treecheck",
                    json!({ "graph": graph, "degree": degree, "radius": radius }),
                    &report,
                ),
                _ => {
                    let mut s = format!(
                        "n {}\nbad_vertices {}\nbad_fraction {}\nvertices_checked {}\nwords_checked {}\nviolations {}\n",
                        report.n,
                        report.bad_vertices,
                        report.bad_fraction,
                        report.vertices_checked,
                        report.words_checked,
                        report.violations.len()
                    );
                    for v in &report.violations {
                        s.push_str(&format!(
                            "violation vertex={} word={} observed={} expected={}\n",
                            v.vertex + 1,
                            v.word,
                            v.observed,
                            v.expected
                        ));
                    }
                    s
                }
            };
            Ok(Output { text, ok })
        }
        Command::Sample {
            n,
            degree,
            seed,
            model,
            max_attempts,
            out,
        } => {
            let cfg = SamplerConfig {
                n: *n,
                d: *degree,
                seed: *seed,
                max_attempts: *max_attempts,
            };
            let g = sample(&cfg, (*model).into())?;
            match out {
                Some(path) => {
                    g.write_file(path, *degree)?;
                    let params = json!({
                        "n": n, "degree": degree, "seed": seed, "model": Model::from(*model),
                        "generator": GENERATOR, "seed_scheme": SEED_SCHEME,
                    });
                    Ok(Output::ok(match fmt {
                        Format::Json => envelope(
                            "sample",
                            params,
                            json!({ "out": path, "arcs": g.arc_count(), "simple": g.is_simple() }),
                        ),
                        _ => format!("wrote {} arcs to {}\n", g.arc_count(), path.display()),
                    }))
                }
                None => Ok(Output::ok(g.to_text(*degree))),
            }
        }
        Command::Converge {
            degree,
            word,
            sizes: IndexList(sizes),
            trials,
            seed,
            model,
            max_attempts,
        } => {
            let records = convergence_experiment(
                *degree,
                word,
                sizes,
                *trials,
                *seed,
                (*model).into(),
                *max_attempts,
            )?;
            let params = json!({
                "degree": degree, "word": word, "sizes": sizes, "trials": trials,
                "seed": seed, "model": Model::from(*model),
                "generator": GENERATOR, "seed_scheme": SEED_SCHEME,
            });
            Ok(Output::ok(match fmt {
                Format::Json => envelope("converge", params, &records),
                _ => converge_csv(&records),
            }))
        }
        Command::Verify {
            max_len,
            degrees: IndexList(degrees),
        } => {
            let report = verify_sweep(*max_len, degrees)?;
            let ok = report.all_passed();
            let text = match fmt {
                Format::Json => envelope(
                    "verify",
                    json!({ "max_len": max_len, "degrees": degrees }),
                    &report,
                ),
                _ => {
                    let mut s = String::new();
                    for c in &report.checks {
                        s.push_str(&format!(
                            "{:<32} passed {:>7} failed {:>3}\n",
                            c.name, c.passed, c.failed
                        ));
                        for e in &c.examples {
                            s.push_str(&format!("  failure: {e}\n"));
                        }
                    }
                    s.push_str(if ok {
                        "all checks passed\n"
                    } else {
                        "CHECKS FAILED\n"
                    });
                    s
                }
            };
            Ok(Output { text, ok })
        }
    }
}

fn converge_csv(records: &[ExperimentRecord]) -> String {
    let mut s = String::from(ExperimentRecord::CSV_HEADER);
    s.push('\n');
    s.push_str(&lines(records.iter().map(|r| r.csv_row())));
    s
}

fn partitions_output(fmt: Format, command: &str, params: Value, list: &[Partition]) -> String {
    match fmt {
        Format::Json => envelope(command, params, list),
        _ => lines(list),
    }
}

fn mm(fmt: Format, word: &Word, degree: usize, method: Method) -> Result<Output> {
    let params =
        json!({ "word": word, "degree": degree, "method": format!("{method:?}").to_lowercase() });
    if method == Method::All {
        let r = verify_equivalence(word, degree)?;
        let text = match fmt {
            Format::Json => envelope("mm", params, &r),
            Format::Csv => format!(
                "method,value\nbrute,{}\nanc2,{}\nformula,{}\ncumulant,{}\n",
                r.brute_force, r.anc2, r.formula, r.cumulant
            ),
            Format::Text => format!(
                "method    value\nbrute     {}\nanc2      {}\nformula   {}\ncumulant  {}\nagree     {}\n",
                r.brute_force, r.anc2, r.formula, r.cumulant, r.matches
            ),
        };
        return Ok(Output {
            text,
            ok: r.matches,
        });
    }
    let value = match method {
        Method::Formula => star_moment_formula(word, degree)?.to_string(),
        Method::Anc2 => star_moment_anc2(word, degree)?.to_string(),
        Method::Brute => count_wpaths(word, degree)?.to_string(),
        Method::Cumulant => moment_via_cumulants(word, degree)?.to_string(),
        Method::All => unreachable!(),
    };
    Ok(Output::ok(match fmt {
        Format::Json => envelope("mm", params, json!({ "value": value })),
        _ => format!("{value}\n"),
    }))
}
