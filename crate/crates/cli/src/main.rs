//! Command-line front end for the belief engine.
//!
//! Exit codes: 0 affirmative/success, 1 negative verdict, 2 error.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use doxa_core::explain::{self, FormulaPool, PreferenceOrder};
use doxa_core::formula::{AgentId, Formula, Vocabulary};
use doxa_core::oracle::{
    verify_theorem1, verify_theorem2, verify_theorem3, verify_theorem4, verify_theorem5,
    TheoremBounds, TheoremReport,
};
use doxa_core::revision::{check_agm_postulates, RevisionOperator};
use doxa_core::scenario::Scenario;
use doxa_core::semantics::StateVector;

const DEFAULT_SCENARIO: &str = include_str!("../../../fixtures/wet_floor.scn");
const DEFAULT_INADEQUATE: &str = include_str!("../../../fixtures/wet_floor_inadequate_1.scn");

#[derive(Parser)]
#[command(
    name = "doxa",
    version,
    about = "Evaluate belief formulas, synthesize explanations, and audit agents' models of each other over scenario files"
)]
struct Cli {
    /// Output style for tables and reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an agent formula against a scenario; prints true/false.
    Check {
        scenario: String,
        /// Formula in the surface grammar, e.g. "B[mary] wetFloor".
        formula: String,
    },
    /// Rank candidate explanations of an explanandum for one explainee
    /// from one explainer's perspective.
    Explain {
        scenario: String,
        #[arg(long)]
        explainer: String,
        #[arg(long)]
        explainee: String,
        #[arg(long)]
        explanandum: String,
        #[command(flatten)]
        pool: PoolArgs,
        /// Ranking: "default", or a comma list drawn from
        /// truthful,letters,plausibility,semantic.
        #[arg(long, default_value = "default")]
        order: String,
        /// Keep only the first K rows.
        #[arg(long)]
        top: Option<usize>,
    },
    /// List beliefs of one agent whose negation the other believes.
    Discrepancies {
        scenario: String,
        /// The two agents, comma-separated: i,j.
        #[arg(long)]
        between: String,
        /// Judge from this agent's perspective instead of objectively.
        #[arg(long)]
        perspective: Option<String>,
        #[command(flatten)]
        pool: PoolArgs,
    },
    /// Check whether the explainer's model of the explainee licenses
    /// exactly the objectively valid explanations.
    Adequacy {
        scenario: String,
        #[arg(long)]
        explainer: String,
        #[arg(long)]
        explainee: String,
        #[arg(long)]
        explanandum: String,
        #[command(flatten)]
        pool: PoolArgs,
    },
    /// Exhaustively check the AGM postulates for a revision operator.
    Postulates {
        #[arg(long)]
        operator: String,
        /// Comma-separated proposition symbols, at most three.
        #[arg(long, default_value = "p,q")]
        vocab: String,
    },
    /// Run the bounded verification suite (five claims).
    VerifyTheorems {
        /// Scenario files for the scenario-bound suites; bundled
        /// defaults are used when omitted.
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
        /// Synthetic vocabulary size for the scenario-free suites.
        #[arg(long, default_value_t = 2)]
        vocab_size: usize,
        #[arg(long, default_value_t = 3)]
        max_literals: usize,
        #[arg(long, default_value_t = 2)]
        max_seq: usize,
    },
}

#[derive(Args)]
struct PoolArgs {
    /// Conjunction length bound for pool candidates.
    #[arg(long, default_value_t = 2)]
    pool_literals: usize,
    /// 0 = propositional candidates only; 1 adds belief literals.
    #[arg(long, default_value_t = 0)]
    modal_depth: u8,
}

impl PoolArgs {
    fn build(&self, sc: &Scenario) -> FormulaPool {
        if self.modal_depth == 0 {
            FormulaPool::propositional(&sc.vocab, self.pool_literals)
        } else {
            FormulaPool::with_modals(&sc.vocab, &sc.agents, self.pool_literals)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &str) -> doxa_core::Result<(Scenario, StateVector)> {
    let sc = Scenario::load(path)?;
    let (vector, warnings) = sc.build_vector()?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok((sc, vector))
}

fn agent(sc: &Scenario, name: &str) -> doxa_core::Result<AgentId> {
    let id = AgentId::new(name).map_err(|_| doxa_core::Error::UnknownAgent(name.into()))?;
    if sc.agents.contains(&id) {
        Ok(id)
    } else {
        Err(doxa_core::Error::UnknownAgent(name.into()))
    }
}

fn parse_order(text: &str) -> doxa_core::Result<PreferenceOrder> {
    if text == "default" {
        return Ok(PreferenceOrder::default());
    }
    let mut parts = Vec::new();
    for part in text.split(',') {
        parts.push(match part.trim() {
            "truthful" => PreferenceOrder::Truthful,
            "letters" => PreferenceOrder::MinLetters,
            "plausibility" => PreferenceOrder::Plausibility,
            "semantic" => PreferenceOrder::SemanticMinimality,
            other => {
                return Err(doxa_core::Error::ScenarioParse(format!(
                    "unknown order component `{other}`"
                )))
            }
        });
    }
    Ok(match parts.len() {
        1 => parts.pop().unwrap(),
        _ => PreferenceOrder::Lexicographic(parts),
    })
}

fn yn(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli) -> doxa_core::Result<ExitCode> {
    match cli.command {
        Command::Check { scenario, formula } => {
            let (sc, vector) = load(&scenario)?;
            let f = Formula::parse(&formula, &sc.vocab, &sc.agents)?;
            let verdict = vector.holds(&f)?;
            println!("{verdict}");
            Ok(ExitCode::from(if verdict { 0 } else { 1 }))
        }
        Command::Explain {
            scenario,
            explainer,
            explainee,
            explanandum,
            pool,
            order,
            top,
        } => {
            let (sc, vector) = load(&scenario)?;
            let explainer = agent(&sc, &explainer)?;
            let explainee = agent(&sc, &explainee)?;
            let beta = Formula::parse(&explanandum, &sc.vocab, &sc.agents)?;
            let order = parse_order(&order)?;
            let pool = pool.build(&sc);
            let mut results =
                explain::synthesize(&vector, &explainer, &explainee, &beta, &pool, &order)?;
            if let Some(k) = top {
                results.truncate(k);
            }
            match cli.format {
                Format::Plain => {
                    let width = results
                        .iter()
                        .map(|r| r.text.len())
                        .chain(["candidate".len()])
                        .max()
                        .unwrap();
                    println!(
                        "{:<5} {:<width$} {:<10} {:<9} {:<7} {:<12} truthful",
                        "rank", "candidate", "subjective", "objective", "letters", "plausibility",
                    );
                    for (i, r) in results.iter().enumerate() {
                        println!(
                            "{:<5} {:<width$} {:<10} {:<9} {:<7} {:<12} {}",
                            i + 1,
                            r.text,
                            yn(true),
                            yn(r.objective),
                            r.letters,
                            r.plausibility,
                            yn(r.truthful),
                        );
                    }
                }
                Format::Records => {
                    for (i, r) in results.iter().enumerate() {
                        println!(
                            "{}",
                            serde_json::json!({
                                "rank": i + 1,
                                "candidate": r.text,
                                "subjective": true,
                                "objective": r.objective,
                                "letters": r.letters,
                                "plausibility": r.plausibility,
                                "truthful": r.truthful,
                            })
                        );
                    }
                }
            }
            Ok(ExitCode::from(if results.is_empty() { 1 } else { 0 }))
        }
        Command::Discrepancies {
            scenario,
            between,
            perspective,
            pool,
        } => {
            let (sc, vector) = load(&scenario)?;
            let names: Vec<&str> = between.split(',').map(str::trim).collect();
            if names.len() != 2 {
                return Err(doxa_core::Error::ScenarioParse(
                    "--between expects exactly two agents: i,j".into(),
                ));
            }
            let left = agent(&sc, names[0])?;
            let right = agent(&sc, names[1])?;
            let perspective = perspective.map(|p| agent(&sc, &p)).transpose()?;
            let pool = pool.build(&sc);
            let found =
                explain::find_discrepancies(&vector, &left, &right, &pool, perspective.as_ref())?;
            match cli.format {
                Format::Plain => {
                    for f in &found {
                        println!("{}", f.render());
                    }
                    if found.is_empty() {
                        println!("(none)");
                    }
                }
                Format::Records => {
                    for f in &found {
                        println!("{}", serde_json::json!({ "discrepancy": f.render() }));
                    }
                }
            }
            Ok(ExitCode::from(if found.is_empty() { 1 } else { 0 }))
        }
        Command::Adequacy {
            scenario,
            explainer,
            explainee,
            explanandum,
            pool,
        } => {
            let (sc, vector) = load(&scenario)?;
            let explainer = agent(&sc, &explainer)?;
            let explainee = agent(&sc, &explainee)?;
            let beta = Formula::parse(&explanandum, &sc.vocab, &sc.agents)?;
            let pool = pool.build(&sc);
            let (adequate, witnesses) =
                explain::is_adequate(&vector, &explainer, &explainee, &beta, &pool)?;
            let mut rows = Vec::new();
            for w in &witnesses {
                let subjective =
                    explain::is_subjective_explanation(&vector, &explainer, &explainee, w, &beta)
                        .unwrap_or(false);
                let side = if subjective {
                    "subjective only"
                } else {
                    "objective only"
                };
                rows.push((w.render(), side));
            }
            match cli.format {
                Format::Plain => {
                    if adequate {
                        println!("adequate");
                    } else {
                        println!("inadequate: {} witness(es)", rows.len());
                        for (text, side) in &rows {
                            println!("  {text} ({side})");
                        }
                    }
                }
                Format::Records => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "adequate": adequate,
                            "witnesses": rows
                                .iter()
                                .map(|(text, side)| serde_json::json!({
                                    "candidate": text,
                                    "direction": side,
                                }))
                                .collect::<Vec<_>>(),
                        })
                    );
                }
            }
            Ok(ExitCode::from(if adequate { 0 } else { 1 }))
        }
        Command::Postulates { operator, vocab } => {
            let operator: RevisionOperator = operator.parse()?;
            let symbols: Vec<String> = vocab.split(',').map(|s| s.trim().to_string()).collect();
            if symbols.len() > 3 {
                return Err(doxa_core::Error::ScenarioParse(
                    "postulate harness accepts at most three symbols".into(),
                ));
            }
            let vocab = Vocabulary::new(symbols)?;
            let report = check_agm_postulates(operator, &vocab)?;
            match cli.format {
                Format::Plain => print!("{}", report.render_text()),
                Format::Records => println!("{}", serde_json::to_string(&report).unwrap()),
            }
            Ok(ExitCode::from(if report.all_pass() { 0 } else { 1 }))
        }
        Command::VerifyTheorems {
            scenarios,
            vocab_size,
            max_literals,
            max_seq,
        } => {
            let bounds = TheoremBounds {
                vocab_size,
                max_literals,
                max_seq_len: max_seq,
            };
            let named: Vec<Scenario> = if scenarios.is_empty() {
                vec![
                    Scenario::from_str(DEFAULT_SCENARIO)?,
                    Scenario::from_str(DEFAULT_INADEQUATE)?,
                ]
            } else {
                scenarios
                    .iter()
                    .map(Scenario::load)
                    .collect::<doxa_core::Result<_>>()?
            };
            let mut reports: Vec<TheoremReport> = vec![
                verify_theorem1(&bounds),
                verify_theorem2(&bounds),
                verify_theorem3(&bounds),
            ];
            reports.push(verify_theorem4(&named[0], &bounds)?);
            reports.push(verify_theorem5(&named, &bounds)?);
            let all_pass = reports.iter().all(|r| r.passed());
            match cli.format {
                Format::Plain => {
                    for r in &reports {
                        print!("{}", r.render_text());
                    }
                    println!(
                        "{}",
                        if all_pass {
                            "all claims verified"
                        } else {
                            "VIOLATIONS FOUND"
                        }
                    );
                }
                Format::Records => {
                    for r in &reports {
                        println!("{}", serde_json::to_string(r).unwrap());
                    }
                }
            }
            Ok(ExitCode::from(if all_pass { 0 } else { 1 }))
        }
    }
}
