//! The `probconf` command line. [`run`] is the whole program minus process exit, so tests
//! can drive it in-process.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or input
//! error, 3 resource cap exceeded. Payload goes to standard output, diagnostics to
//! standard error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use confluence::{check, joinability, ConfluentSet, Notion};
use gen::{explore_reduced_with, explore_with, Exploration, GenError, GenStats, Mode, Options};
use lppe::{Limits, LppeError, Spec};
use pa_core::fixture::{parse_fixture, write_fixture};
use pa_core::Pa;
use serde::Serialize;

/// Environment variable that overrides the default cap on stored states.
pub const STATE_CAP_VAR: &str = "PROBCONF_STATE_CAP";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Verdict {
    fn ok(stdout: String) -> Self {
        Verdict { code: 0, stdout, stderr: String::new() }
    }

    fn negative(stdout: String) -> Self {
        Verdict { code: 1, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Verdict { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }

    fn cap(msg: impl std::fmt::Display) -> Self {
        Verdict { code: 3, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

#[derive(Parser, Debug)]
#[command(name = "probconf", version, about = "Confluence reduction for probabilistic automata and linear process equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a specification and print it back in normal form.
    Parse { file: String },
    /// Generate the state space of a specification and report its size.
    Generate {
        file: String,
        /// Apply confluence reduction (summands from --confluent, or detected).
        #[arg(long)]
        reduce: bool,
        /// Summands to treat as confluent, numbered from 1; implies --reduce.
        #[arg(long, value_delimiter = ',')]
        confluent: Option<Vec<usize>>,
        /// Store representatives only, with every target resolved.
        #[arg(long)]
        canonical: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// One header line and one row in the column order of the benchmark table.
        #[arg(long)]
        csv: bool,
        /// Write the generated automaton in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        state_cap: Option<usize>,
    },
    /// Detect confluent summands symbolically.
    Detect {
        file: String,
        /// Print every commutation obligation.
        #[arg(long)]
        obligations: bool,
        /// Print every obligation as an SMT-LIB script.
        #[arg(long)]
        smtlib: bool,
    },
    /// Check whether a set of transitions of an automaton is confluent.
    #[command(group(ArgGroup::new("marked").required(true).args(["set", "all_tau"])))]
    Check {
        pa: String,
        /// Transition numbers, from 0 in file order.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        /// Mark every tau transition with a Dirac target.
        #[arg(long)]
        all_tau: bool,
        #[arg(long, value_enum, default_value = "strong")]
        notion: NotionArg,
    },
    /// Decide branching probabilistic bisimilarity of two automata.
    Bisim { a: String, b: String },
    /// Quotient an automaton by joinability or by a representation map.
    #[command(group(ArgGroup::new("by").required(true).args(["by_joinability", "by_representatives"])))]
    #[command(group(ArgGroup::new("marked").required(true).args(["set", "all_tau"])))]
    Quotient {
        pa: String,
        #[arg(long)]
        by_joinability: bool,
        #[arg(long)]
        by_representatives: bool,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        #[arg(long)]
        all_tau: bool,
    },
    /// Generate every model of a directory (or the bundled ones) with and without
    /// reduction and print a CSV table.
    Bench {
        dir: Option<PathBuf>,
        #[arg(long)]
        state_cap: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NotionArg {
    Strong,
    Prob,
    Weak,
}

impl From<NotionArg> for Notion {
    fn from(n: NotionArg) -> Notion {
        match n {
            NotionArg::Strong => Notion::Strong,
            NotionArg::Prob => Notion::Plain,
            NotionArg::Weak => Notion::Weak,
        }
    }
}

pub fn run<I, T>(args: I) -> Verdict
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Verdict { code: 2, stdout: String::new(), stderr: text }
            } else {
                Verdict::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(v) | Err(v) => v,
    }
}

fn dispatch(command: Command) -> Result<Verdict, Verdict> {
    match command {
        Command::Parse { file } => Ok(Verdict::ok(lppe::render_spec(&load_spec(&file)?))),
        Command::Generate { file, reduce, confluent, canonical, json, csv, dot, state_cap } => {
            let spec = load_spec(&file)?;
            let options = Options {
                mode: if canonical { Mode::Canonical } else { Mode::ExpandViaRepresentative },
                limits: Limits { state_cap: state_cap_from(state_cap)?, ..Limits::default() },
                ..Options::default()
            };
            let confluent = match confluent {
                Some(list) => Some(summand_set(&spec, &list)?),
                None if reduce => Some(symdetect::detect(&spec)),
                None => None,
            };
            generate(&spec, &file, confluent, &options, json, csv, dot.as_deref())
        }
        Command::Detect { file, obligations, smtlib } => {
            let spec = load_spec(&file)?;
            let detection = symdetect::analyse(&spec);
            let mut out = detection.to_string();
            for &i in &detection.candidates {
                for j in 0..spec.summands.len() {
                    let ob = symdetect::obligation(&spec, i, j).expect("candidates have obligations");
                    if obligations {
                        out.push('\n');
                        out.push_str(&ob.display(&spec).to_string());
                    }
                    if smtlib {
                        out.push('\n');
                        out.push_str(&symdetect::smt::to_smtlib(&ob, &spec));
                    }
                }
            }
            Ok(Verdict::ok(out))
        }
        Command::Check { pa, set, all_tau, notion } => {
            let pa = load_pa(&pa)?;
            let c = marked(&pa, set, all_tau)?;
            let notion = Notion::from(notion);
            let name = match notion {
                Notion::Strong => "strongly confluent",
                Notion::Plain => "probabilistically confluent",
                Notion::Weak => "weakly confluent",
            };
            Ok(match check(&pa, &c, notion) {
                Ok(()) => Verdict::ok(format!("{name}\n")),
                Err(v) => Verdict::negative(format!("not {name}\n{}\n", v.render(&pa))),
            })
        }
        Command::Bisim { a, b } => {
            let (a, b) = (load_pa(&a)?, load_pa(&b)?);
            Ok(if sched_bisim::pa_bisimilar(&a, &b) {
                Verdict::ok("bisimilar\n".into())
            } else {
                Verdict::negative("not bisimilar\n".into())
            })
        }
        Command::Quotient { pa, by_joinability, set, all_tau, .. } => {
            let pa = load_pa(&pa)?;
            let c = marked(&pa, set, all_tau)?;
            if by_joinability {
                match joinability(&pa, &c).relation() {
                    Some(r) => Ok(Verdict::ok(write_fixture(&reduce::quotient(&pa, r)))),
                    None => Ok(Verdict::negative("joinability is not an equivalence for this set\n".into())),
                }
            } else {
                match reduce::quotient_by_representatives(&pa, &c) {
                    Ok(q) => Ok(Verdict::ok(write_fixture(&q))),
                    Err(e) => Ok(Verdict::negative(format!("{e}\n"))),
                }
            }
        }
        Command::Bench { dir, state_cap } => {
            let limits = Limits { state_cap: state_cap_from(state_cap)?, ..Limits::default() };
            bench(dir.as_deref(), &Options { limits, ..Options::default() })
        }
    }
}

fn read(path: &str) -> Option<Result<String, Verdict>> {
    Path::new(path)
        .is_file()
        .then(|| std::fs::read_to_string(path).map_err(|e| Verdict::usage(format!("cannot read {path}: {e}"))))
}

/// A file path, or the name of a bundled model.
fn load_spec(name: &str) -> Result<Spec, Verdict> {
    let text = match read(name) {
        Some(text) => text?,
        None => lppe::models::bundled(name)
            .ok_or_else(|| Verdict::usage(format!("{name} is neither a file nor a bundled model")))?
            .to_string(),
    };
    lppe::parse(&text).map_err(|e| Verdict::usage(format!("{name}: {e}")))
}

/// A file path, or the name of a bundled fixture.
fn load_pa(name: &str) -> Result<Pa, Verdict> {
    let text = match read(name) {
        Some(text) => text?,
        None => pa_core::fixture::bundled(name)
            .ok_or_else(|| Verdict::usage(format!("{name} is neither a file nor a bundled fixture")))?
            .to_string(),
    };
    parse_fixture(&text).map_err(|e| Verdict::usage(format!("{name}: {e}")))
}

fn marked(pa: &Pa, set: Option<Vec<usize>>, all_tau: bool) -> Result<ConfluentSet, Verdict> {
    if all_tau {
        return Ok(ConfluentSet::all_tau_dirac(pa));
    }
    ConfluentSet::new(pa, set.unwrap_or_default()).map_err(Verdict::usage)
}

fn summand_set(spec: &Spec, list: &[usize]) -> Result<BTreeSet<usize>, Verdict> {
    let n = spec.summands.len();
    list.iter()
        .map(|&k| {
            if (1..=n).contains(&k) {
                Ok(k - 1)
            } else {
                Err(Verdict::usage(format!("summand {k} does not exist; summands are numbered 1 to {n}")))
            }
        })
        .collect()
}

fn state_cap_from(flag: Option<usize>) -> Result<usize, Verdict> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(STATE_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Verdict::usage(format!("{STATE_CAP_VAR}={v} is not a number"))),
        Err(_) => Ok(Limits::default().state_cap),
    }
}

fn gen_failure(e: GenError) -> Verdict {
    match e {
        GenError::StateCap { .. } | GenError::Lppe(LppeError::EnumerationCap { .. } | LppeError::StateCap { .. }) => {
            Verdict::cap(e)
        }
        other => Verdict::usage(other),
    }
}

/// Field order is the machine interface.
#[derive(Serialize)]
struct StatsJson {
    states: usize,
    transitions: usize,
    visited_states: usize,
    visited_transitions: usize,
    wall_time_ms: u128,
}

impl From<&GenStats> for StatsJson {
    fn from(s: &GenStats) -> Self {
        StatsJson {
            states: s.states,
            transitions: s.transitions,
            visited_states: s.visited_states,
            visited_transitions: s.visited_transitions,
            wall_time_ms: s.wall_time.as_millis(),
        }
    }
}

pub const CSV_HEADER: &str = "model,original_states,original_transitions,reduced_states,reduced_transitions,visited_states,visited_transitions,runtime_before_s,runtime_after_s";

fn seconds(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64())
}

fn csv_row(model: &str, original: &GenStats, reduced: Option<&GenStats>) -> String {
    let mut row = format!("{model},{},{}", original.states, original.transitions);
    match reduced {
        Some(r) => write!(
            row,
            ",{},{},{},{},{},{}",
            r.states,
            r.transitions,
            r.visited_states,
            r.visited_transitions,
            seconds(original.wall_time),
            seconds(r.wall_time)
        ),
        None => write!(row, ",,,,,{},", seconds(original.wall_time)),
    }
    .unwrap();
    row
}

fn model_name(file: &str) -> String {
    let stem = Path::new(file).file_stem().map_or(file.into(), |s| s.to_string_lossy().into_owned());
    stem.replace(',', "_")
}

fn generate(
    spec: &Spec,
    file: &str,
    confluent: Option<BTreeSet<usize>>,
    options: &Options,
    json: bool,
    csv: bool,
    dot: Option<&Path>,
) -> Result<Verdict, Verdict> {
    let result: Exploration = match &confluent {
        Some(c) => explore_reduced_with(spec, c, options),
        None => explore_with(spec, options),
    }
    .map_err(gen_failure)?;
    if let Some(path) = dot {
        std::fs::write(path, pa_core::to_dot(&result.pa))
            .map_err(|e| Verdict::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let stats = &result.stats;
    let out = if json {
        serde_json::to_string(&StatsJson::from(stats)).expect("plain numbers") + "\n"
    } else if csv {
        let row = match &confluent {
            Some(_) => {
                let original = explore_with(spec, &Options { mode: Mode::ExpandViaRepresentative, ..options.clone() })
                    .map_err(gen_failure)?;
                csv_row(&model_name(file), &original.stats, Some(stats))
            }
            None => csv_row(&model_name(file), stats, None),
        };
        format!("{CSV_HEADER}\n{row}\n")
    } else {
        let mut text = String::new();
        if let Some(c) = &confluent {
            let list: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(text, "confluent summands: {{{}}}", list.join(", ")).unwrap();
        }
        write!(
            text,
            "states: {}\ntransitions: {}\nvisited states: {}\nvisited transitions: {}\nwall time: {} ms\n",
            stats.states,
            stats.transitions,
            stats.visited_states,
            stats.visited_transitions,
            stats.wall_time.as_millis()
        )
        .unwrap();
        text
    };
    Ok(Verdict::ok(out))
}

fn bench(dir: Option<&Path>, options: &Options) -> Result<Verdict, Verdict> {
    let models: Vec<(String, String)> = match dir {
        None => lppe::models::BUNDLED_NAMES
            .iter()
            .map(|n| (n.to_string(), lppe::models::bundled(n).unwrap().to_string()))
            .collect(),
        Some(dir) => {
            let entries = std::fs::read_dir(dir).map_err(|e| Verdict::usage(format!("cannot read {}: {e}", dir.display())))?;
            let mut paths: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "lppe"))
                .collect();
            paths.sort();
            let mut models = Vec::new();
            for p in paths {
                let text = std::fs::read_to_string(&p).map_err(|e| Verdict::usage(format!("cannot read {}: {e}", p.display())))?;
                models.push((model_name(&p.to_string_lossy()), text));
            }
            models
        }
    };
    let mut out = format!("{CSV_HEADER}\n");
    let mut stderr = String::new();
    let mut code = 0;
    for (name, text) in models {
        let spec = lppe::parse(&text).map_err(|e| Verdict::usage(format!("{name}: {e}")))?;
        let original = match explore_with(&spec, options) {
            Ok(e) => e,
            Err(e) => {
                let v = gen_failure(e);
                code = code.max(v.code);
                writeln!(stderr, "{name}: {}", v.stderr.trim_start_matches("error: ").trim_end()).unwrap();
                continue;
            }
        };
        let reduced = explore_reduced_with(&spec, &symdetect::detect(&spec), options).map_err(gen_failure)?;
        writeln!(out, "{}", csv_row(&name, &original.stats, Some(&reduced.stats))).unwrap();
    }
    Ok(Verdict { code, stdout: out, stderr })
}
