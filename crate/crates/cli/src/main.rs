//! `kaleido`: evaluate formulas and inspect boolean-valued universes from the
//! command line. Without `-w`, commands run against the built-in workspace.

use std::path::PathBuf;
use std::process::ExitCode;
use std::result::Result;

use clap::{Args, Parser, Subcommand};
use kaleido::demo::paper_example;
use kaleido::logic::DEFAULT_BUDGET;
use kaleido::scott::{MeasureAlgebra, Rational};
use kaleido::states::{restrict_set_shallow, star_profile};
use kaleido::textio::{bvset_to_text, parse_bvset, parse_element};
use kaleido::*;
use serde_json::json;

#[derive(Parser)]
#[command(name = "kaleido", version, about = "Boolean-valued models over finite Boolean algebras")]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Workspace file (.bvw); defaults to the built-in workspace.
    #[arg(short, long, value_name = "FILE")]
    workspace: Option<PathBuf>,
    /// Environment (or algebra) name.
    #[arg(short = 'a', long = "algebra", value_name = "NAME", default_value = "B0")]
    env: String,
}

#[derive(Subcommand)]
enum Command {
    /// Boolean value of a closed formula.
    Eval {
        #[command(flatten)]
        src: Source,
        formula: String,
        /// Largest universe stage a rank quantifier may enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Congruence laws of = and ∈ over a universe stage.
    Laws {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// List the sets of a universe stage.
    Enumerate {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The state of a set in a situation.
    Restrict {
        #[command(flatten)]
        src: Source,
        /// Set term, e.g. a name bound in the environment.
        set: String,
        /// Situation: a nonzero element such as `{a}` or `a`.
        #[arg(long)]
        at: String,
        /// Meet values with the situation but keep the parent algebra and
        /// inner sets unchanged.
        #[arg(long)]
        shallow: bool,
    },
    /// The state of a set in every nonzero situation.
    Star {
        #[command(flatten)]
        src: Source,
        set: String,
    },
    /// Mixture of pieces along a partition of unity.
    Mix {
        #[command(flatten)]
        src: Source,
        #[arg(long = "part", required = true)]
        parts: Vec<String>,
        #[arg(long = "piece", required = true)]
        pieces: Vec<String>,
    },
    /// Two-valued model obtained from an atom's ultrafilter.
    Quotient {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        atom: String,
        /// Carrier: a universe stage ...
        #[arg(long, default_value_t = 2, conflicts_with = "sets")]
        rank: usize,
        /// ... or an explicit list of set terms.
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Truth of a formula across a family of algebras.
    Kaleido {
        #[arg(short, long, value_name = "FILE")]
        workspace: Option<PathBuf>,
        #[arg(short, long)]
        family: String,
        formula: String,
    },
    /// Finite measure algebras and random reals.
    Scott {
        #[arg(short, long, value_name = "FILE")]
        workspace: Option<PathBuf>,
        #[arg(short, long, default_value = "coin")]
        space: String,
        #[command(subcommand)]
        op: ScottOp,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Subcommand)]
enum ScottOp {
    /// Worlds, weights, atoms of the measure algebra and declared reals.
    Show,
    /// Measure of an event given as world names.
    Measure { worlds: Vec<String> },
    /// [[xi = eta]].
    Compare { xi: String, eta: String },
    /// [[xi <= eta]].
    Leq { xi: String, eta: String },
    /// [[xi <= r]] for a rational constant.
    LeqConst {
        xi: String,
        #[arg(allow_hyphen_values = true)]
        r: String,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// The four-element algebra example: [[xi = eta]] by evaluator and by
    /// brute-force expansion.
    PaperExample,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{source}")]
    Workspace { path: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

/// What a command produced: text and JSON renderings plus an exit status.
struct Report {
    text: String,
    json: serde_json::Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Report { text, json, code: 0 }
    }
}

fn load(path: &Option<PathBuf>) -> Result<Workspace, CliError> {
    match path {
        None => prelude().map_err(|e| CliError::Workspace { path: "<prelude>".into(), source: e }),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io { path: p.clone(), source: e })?;
            parse_workspace(&text).map_err(|e| CliError::Workspace { path: p.display().to_string(), source: e })
        }
    }
}

fn environment(src: &Source) -> Result<Environment, CliError> {
    let ws = load(&src.workspace)?;
    Ok(ws.environment(&src.env)?.clone())
}

fn element_json(x: &BoolElement) -> serde_json::Value {
    json!({ "value": x.to_string(), "atoms": x.atom_names() })
}

fn rational(text: &str) -> Result<num_rational::BigRational, Error> {
    let bad = || Error::Syntax { line: 1, col: 1, msg: format!("not a rational number: `{text}`") };
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    let num: num_bigint::BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.trim().parse().map_err(|_| bad())?;
    if den == 0.into() {
        return Err(bad());
    }
    Ok(num_rational::BigRational::new(num, den))
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Eval { src, formula, budget } => {
            let env = environment(&src)?;
            let f = parse_formula(&formula)?;
            let value = Interpreter::new(&env).budget(budget).eval(&f)?;
            Ok(Report::ok(
                format!("{value}\nmodels: {}\n", value.is_one()),
                json!({ "value": value.to_string(), "atoms": value.atom_names(), "models": value.is_one() }),
            ))
        }
        Command::Laws { src, rank, budget, sequential } => {
            let env = environment(&src)?;
            let carrier = enumerate_universe(env.algebra(), rank, budget)?;
            let report = check_congruence_laws(&Evaluator::new(env.algebra()), &carrier, exec(sequential));
            let mut json = report.to_json();
            json["sets"] = carrier.len().into();
            Ok(Report { text: format!("{report}\n"), json, code: if report.all_pass() { 0 } else { 3 } })
        }
        Command::Enumerate { src, rank, budget } => {
            let env = environment(&src)?;
            let sets = enumerate_universe(env.algebra(), rank, budget)?;
            let lines: Vec<String> = sets.iter().map(bvset_to_text).collect();
            let text = format!("{} sets\n{}\n", sets.len(), lines.join("\n"));
            Ok(Report::ok(text, json!({ "count": sets.len(), "sets": lines })))
        }
        Command::Restrict { src, set, at, shallow } => {
            let env = environment(&src)?;
            let u = parse_bvset(&env, &set)?;
            let a = parse_element(env.algebra(), &at)?;
            let r = if shallow { restrict_set_shallow(&u, &a)? } else { restrict_set(&u, &a)? };
            let atoms = r.algebra().atom_names().join(" ");
            Ok(Report::ok(
                format!("{}\nover atoms: {atoms}\n", bvset_to_text(&r)),
                json!({ "set": bvset_to_text(&r), "atoms": r.algebra().atom_names(), "situation": a.to_string() }),
            ))
        }
        Command::Star { src, set } => {
            let env = environment(&src)?;
            let u = parse_bvset(&env, &set)?;
            let profile = star_profile(&u, Exec::default())?;
            let table = profile.table();
            let width = table.iter().map(|(a, _)| a.len()).max().unwrap_or(0);
            let text: String = table.iter().map(|(a, s)| format!("{a:<width$}  {s}\n")).collect();
            let json = table.iter().map(|(a, s)| json!({ "situation": a, "state": s })).collect::<Vec<_>>();
            Ok(Report::ok(text, json!({ "set": bvset_to_text(&u), "profile": json })))
        }
        Command::Mix { src, parts, pieces } => {
            let env = environment(&src)?;
            let alg = env.algebra();
            let parts = parts.iter().map(|p| parse_element(alg, p)).collect::<Result<Vec<_>, _>>()?;
            let pieces = pieces.iter().map(|p| parse_bvset(&env, p)).collect::<Result<Vec<_>, _>>()?;
            let partition = Partition::new(alg, parts.clone())?;
            let w = mix(&partition, &pieces)?;
            let mut text = format!("{}\n", bvset_to_text(&w));
            let mut agree = Vec::new();
            for (a, u) in parts.iter().zip(&pieces) {
                let e = bv_eq(&w, u)?;
                text += &format!("[[mix = {}]] = {e} (part {a})\n", bvset_to_text(u));
                agree.push(json!({ "part": a.to_string(), "piece": bvset_to_text(u), "eq": e.to_string() }));
            }
            Ok(Report::ok(text, json!({ "mix": bvset_to_text(&w), "pieces": agree })))
        }
        Command::Quotient { src, atom, rank, sets, budget } => {
            let env = environment(&src)?;
            let alg = env.algebra();
            let atom = parse_element(alg, &atom)?;
            let carrier = if sets.is_empty() {
                enumerate_universe(alg, rank, budget)?
            } else {
                sets.iter().map(|s| parse_bvset(&env, s)).collect::<Result<Vec<_>, _>>()?
            };
            let m = quotient_by_atom(&atom, &carrier, Exec::default())?;
            let mut text = format!("{} classes from {} sets at {atom}\n", m.len(), carrier.len());
            for (i, rep) in m.carrier.iter().enumerate() {
                text += &format!("[{i}] {}  members: {:?}\n", bvset_to_text(rep), m.members_of(i));
            }
            text += &format!(
                "well-defined: {}, extensional: {}, well-founded: {}\n",
                m.well_defined, m.extensional, m.well_founded
            );
            Ok(Report::ok(text, m.to_json()))
        }
        Command::Kaleido { workspace, family, formula } => {
            let ws = load(&workspace)?;
            let fam = ws.family(&family)?;
            let f = parse_formula(&formula)?;
            let report = kaleidoscopic_eval(fam, &f, Exec::default())?;
            let mut text = String::new();
            for m in &report.members {
                text += &format!("{}: {} ({})\n", m.member, m.value, if m.holds { "holds" } else { "fails" });
            }
            text += &format!("{family}: {}\n", if report.holds { "holds in every member" } else { "does not hold" });
            Ok(Report::ok(text, report.to_json()))
        }
        Command::Scott { workspace, space, op } => {
            let ws = load(&workspace)?;
            let decl = ws.space(&space)?;
            let ma = MeasureAlgebra::new(&decl.space);
            let real = |n: &str| decl.reals.get(n).ok_or_else(|| Error::Unbound(n.to_string()));
            let value = |x: BoolElement| -> Result<Report, CliError> {
                let m = ma.measure(&x)?;
                let text = format!("{x}\nmeasure: {}\n", Rational(&m));
                let mut json = element_json(&x);
                json["measure"] = Rational(&m).to_string().into();
                Ok(Report::ok(text, json))
            };
            match op {
                ScottOp::Show => {
                    let mut text = String::new();
                    for (w, p) in decl.space.worlds().iter().zip(decl.space.weights()) {
                        text += &format!("{w}: {}\n", Rational(p));
                    }
                    text += &format!("atoms: {}\n", ma.algebra().atom_names().join(" "));
                    for (n, rr) in &decl.reals {
                        let vals: Vec<String> = rr.values().iter().map(|v| Rational(v).to_string()).collect();
                        text += &format!("{n} = ({})\n", vals.join(", "));
                    }
                    let json = json!({
                        "worlds": decl.space.worlds(),
                        "weights": decl.space.weights().iter().map(|p| Rational(p).to_string()).collect::<Vec<_>>(),
                        "atoms": ma.algebra().atom_names(),
                        "reals": decl.reals.iter().map(|(n, rr)| (n.clone(),
                            rr.values().iter().map(|v| Rational(v).to_string()).collect::<Vec<_>>().into()))
                            .collect::<serde_json::Map<_, _>>(),
                    });
                    Ok(Report::ok(text, json))
                }
                ScottOp::Measure { worlds } => {
                    let idx = worlds
                        .iter()
                        .map(|w| decl.space.world_index(w).ok_or_else(|| Error::UnknownAtom(w.clone())))
                        .collect::<Result<Vec<_>, _>>()?;
                    value(ma.quotient(idx))
                }
                ScottOp::Compare { xi, eta } => value(ma.rr_eq(real(&xi)?, real(&eta)?)?),
                ScottOp::Leq { xi, eta } => value(ma.rr_leq(real(&xi)?, real(&eta)?)?),
                ScottOp::LeqConst { xi, r } => value(ma.rr_leq_const(real(&xi)?, &rational(&r)?)?),
            }
        }
        Command::Demo { which: Demo::PaperExample } => {
            let ex = paper_example()?;
            Ok(Report { text: ex.render(), json: ex.to_json(), code: if ex.agrees() { 0 } else { 1 } })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("JSON values serialize"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
