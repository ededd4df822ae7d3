//! `sparqlneg`: evaluate, rewrite and compare graph patterns with negation.
//!
//! Exit codes: 0 success (or equivalent), 1 inequivalent, 2 parse or usage
//! error, 3 rewrite rejected.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use sparql_negation::lab::{check_equiv_with, run_axiom_matrix, summarize, LabError, NegOp};
use sparql_negation::rewrite::{
    normalize, pattern_to_algebra, rewrite_algebra_to_core_with, rewrite_diff_to_naf,
    rewrite_minus_to_diff, rewrite_nex_to_diff, rewrite_opt_to_diff, Applicability, CoreStrategy,
    NafScheme, RewriteResult,
};
use sparql_negation::syntax::{
    parse_dataset, parse_graph, parse_pattern_with, print_pattern_pretty, ParseDiagnostic,
    ParseOptions,
};
use sparql_negation::{
    eval_pattern, in_fragment_ex, run_table2, Dataset, ErrorMode, EvalContext, GraphSpace, Pattern,
    Semantics,
};

#[derive(Parser)]
#[command(
    name = "sparqlneg",
    version,
    about = "Negation operators of SPARQL under bag semantics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a pattern and print the solution multiset as JSON.
    Eval(EvalArgs),
    /// Apply a rewrite rule and print the resulting pattern.
    Rewrite(RewriteArgs),
    /// Decide equivalence of two patterns over a finite graph space.
    Equiv(EquivArgs),
    /// Run the set-theoretic axiom matrix for DIFF or MINUS.
    Axioms(AxiomArgs),
    /// Compare DIFF with its negation-as-failure encodings on corner cases.
    Table2,
    /// Report whether a pattern lies in the safe NOT-EXISTS fragment.
    Fragment(FragmentArgs),
}

#[derive(Args)]
struct PatternInput {
    #[arg(long)]
    pattern: PathBuf,
    /// Accept generated variables and the reserved graph, as found in rewriter output.
    #[arg(long)]
    allow_reserved: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DataInput {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataInput,
    #[command(flatten)]
    input: PatternInput,
    /// Collapse every cardinality to one.
    #[arg(long)]
    set: bool,
    /// Treat an erroring filter in W3C difference as false.
    #[arg(long, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    diff_error_as_false: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RuleArg {
    OptToDiff,
    MinusToDiff,
    NexToDiff,
    Normalize,
    W3cToCore,
    Naf(NafScheme),
}

impl FromStr for RuleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "opt2diff" => RuleArg::OptToDiff,
            "minus2diff" => RuleArg::MinusToDiff,
            "nex2diff" => RuleArg::NexToDiff,
            "normalize" => RuleArg::Normalize,
            "w3c2core" => RuleArg::W3cToCore,
            _ => match s.strip_prefix("naf:") {
                Some(scheme) => RuleArg::Naf(scheme.parse()?),
                None => {
                    return Err(format!(
                        "unknown rule {s:?} (expected opt2diff, minus2diff, nex2diff, normalize, \
                         w3c2core or naf:naive|perez|polleres|polleres-as-printed)"
                    ))
                }
            },
        })
    }
}

#[derive(Args)]
struct RewriteArgs {
    #[arg(long, value_parser = RuleArg::from_str)]
    rule: RuleArg,
    #[command(flatten)]
    input: PatternInput,
    /// w3c2core: apply the textbook constructions without splitting operands by domain.
    #[arg(long)]
    literal: bool,
    /// w3c2core: error mode the emitted difference filters must preserve.
    #[arg(long, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    diff_error_as_false: bool,
    /// Print on one line instead of indenting.
    #[arg(long)]
    compact: bool,
}

#[derive(Args)]
struct EquivArgs {
    p1: PathBuf,
    p2: PathBuf,
    /// `s=..;p=..;o=..;max=N`, optionally with `samples=N;seed=N` for random sampling.
    #[arg(long, default_value_t = GraphSpace::default())]
    space: GraphSpace,
    #[arg(long)]
    set: bool,
    #[arg(long, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    diff_error_as_false: bool,
    #[arg(long)]
    allow_reserved: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Diff,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Bag,
    Set,
}

#[derive(Args)]
struct AxiomArgs {
    #[arg(long, value_enum)]
    operator: OperatorArg,
    #[arg(long, value_enum, default_value = "bag")]
    semantics: SemanticsArg,
    /// List every case, not just the failing ones.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FragmentArgs {
    #[command(flatten)]
    input: PatternInput,
}

enum Failure {
    Usage(String),
    Rejected(String),
}

impl Failure {
    fn parse(diag: ParseDiagnostic, src: &str, file: &Path) -> Self {
        Failure::Usage(diag.render(src, &file.display().to_string()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Rejected(m) => f.write_str(m),
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_pattern(path: &Path, allow_reserved: bool) -> Result<Pattern, Failure> {
    let src = read(path)?;
    let opts = if allow_reserved {
        ParseOptions::lenient()
    } else {
        ParseOptions::strict()
    };
    parse_pattern_with(&src, opts).map_err(|d| Failure::parse(d, &src, path))
}

fn load_data(data: &DataInput) -> Result<Dataset, Failure> {
    match (&data.graph, &data.dataset) {
        (Some(path), _) => {
            let src = read(path)?;
            parse_graph(&src)
                .map(Dataset::new)
                .map_err(|d| Failure::parse(d, &src, path))
        }
        (None, Some(path)) => {
            let src = read(path)?;
            parse_dataset(&src).map_err(|d| Failure::parse(d, &src, path))
        }
        (None, None) => Err(Failure::Usage(
            "one of --graph or --dataset is required".into(),
        )),
    }
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn eval(args: EvalArgs) -> Outcome {
    let dataset = load_data(&args.data)?;
    let pattern = load_pattern(&args.input.pattern, args.input.allow_reserved)?;
    let ctx =
        EvalContext::new(&dataset).with_error_mode(ErrorMode::from_flag(args.diff_error_as_false));
    let mut out = eval_pattern(&pattern, &ctx).map_err(|e| Failure::Usage(e.to_string()))?;
    if args.set {
        out = out.distinct();
    }
    print_json(&out.to_json());
    Ok(ExitCode::SUCCESS)
}

fn rewrite(args: RewriteArgs) -> Outcome {
    let p = load_pattern(&args.input.pattern, args.input.allow_reserved)?;
    let show = |p: &Pattern| {
        if args.compact {
            p.to_string()
        } else {
            print_pattern_pretty(p, 80)
        }
    };
    let result: RewriteResult = match args.rule {
        RuleArg::OptToDiff => rewrite_opt_to_diff(&p),
        RuleArg::MinusToDiff => rewrite_minus_to_diff(&p),
        RuleArg::NexToDiff => rewrite_nex_to_diff(&p),
        RuleArg::Normalize => normalize(&p),
        RuleArg::Naf(scheme) => rewrite_diff_to_naf(&p, scheme)
            .map_err(|e| Failure::Rejected(format!("rejected: {e}")))?,
        RuleArg::W3cToCore => {
            let t = pattern_to_algebra(&p);
            let strategy = if args.literal {
                CoreStrategy::Literal
            } else {
                CoreStrategy::Partitioned
            };
            let mode = ErrorMode::from_flag(args.diff_error_as_false);
            let core = rewrite_algebra_to_core_with(&t.expr, mode, &t.schema, strategy);
            println!("{}", core.expr);
            let mut leaves: Vec<_> = t.leaves.iter().collect();
            leaves.sort_by_key(|(n, _)| n[1..].parse::<usize>().unwrap_or(usize::MAX));
            for (name, leaf) in leaves {
                println!("  {name} = {leaf}");
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    if let Applicability::Rejected(_) = &result.applicability {
        // the partially rewritten pattern still goes to stdout
        println!("{}", show(&result.output));
        return Err(Failure::Rejected(result.applicability.to_string()));
    }
    println!("{}", show(&result.output));
    if !result.fresh_vars.is_empty() {
        let names: Vec<String> = result.fresh_vars.iter().map(|v| v.to_string()).collect();
        eprintln!("fresh: {}", names.join(" "));
    }
    if result.applicability == Applicability::Inapplicable {
        eprintln!("{}: inapplicable, pattern unchanged", result.rule);
    }
    Ok(ExitCode::SUCCESS)
}

fn equiv(args: EquivArgs) -> Outcome {
    let p1 = load_pattern(&args.p1, args.allow_reserved)?;
    let p2 = load_pattern(&args.p2, args.allow_reserved)?;
    let semantics = if args.set {
        Semantics::Set
    } else {
        Semantics::Bag
    };
    let mode = ErrorMode::from_flag(args.diff_error_as_false);
    let report = check_equiv_with(&p1, &p2, &args.space, semantics, mode)?;
    if args.json {
        print_json(&report.to_json());
    } else {
        print!("{report}");
    }
    Ok(if report.is_equivalent() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn axioms(args: AxiomArgs) -> Outcome {
    let op = match args.operator {
        OperatorArg::Diff => NegOp::Diff,
        OperatorArg::Minus => NegOp::Minus,
    };
    let semantics = match args.semantics {
        SemanticsArg::Bag => Semantics::Bag,
        SemanticsArg::Set => Semantics::Set,
    };
    let cases = run_axiom_matrix(op, semantics);
    let shown = cases.iter().filter(|c| args.all || !c.holds);
    if args.json {
        let summary = summarize(op);
        let doc = serde_json::json!({
            "operator": op,
            "semantics": semantics,
            "summary": summary
                .iter()
                .map(|(ax, s)| (ax.letter().to_string(), serde_json::to_value(s).expect("summary serializes")))
                .collect::<serde_json::Map<_, _>>(),
            "cases": shown.map(|c| c.to_json()).collect::<Vec<_>>(),
        });
        print_json(&doc);
        return Ok(ExitCode::SUCCESS);
    }
    for c in shown {
        println!("{c}");
    }
    println!();
    println!("{op} under {semantics} semantics:");
    for (ax, s) in summarize(op) {
        let fails = match semantics {
            Semantics::Bag => s.fails_bag,
            Semantics::Set => s.fails_set,
        };
        let verdict = if fails == 0 { "holds" } else { "fails" };
        println!(
            "  {ax} {:<34} {verdict:<5} {fails:>3}/{} cases",
            ax.statement(),
            s.cases
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn table2() -> Outcome {
    print!("{}", run_table2()?);
    Ok(ExitCode::SUCCESS)
}

fn fragment(args: FragmentArgs) -> Outcome {
    let p = load_pattern(&args.input.pattern, args.input.allow_reserved)?;
    let (inside, violations) = in_fragment_ex(&p);
    if inside {
        println!("in fragment");
    } else {
        println!("not in fragment");
        for v in violations {
            println!("  {v}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Rewrite(a) => rewrite(a),
        Command::Equiv(a) => equiv(a),
        Command::Axioms(a) => axioms(a),
        Command::Table2 => table2(),
        Command::Fragment(a) => fragment(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("sparqlneg: {f}");
            match f {
                Failure::Usage(_) => ExitCode::from(2),
                Failure::Rejected(_) => ExitCode::from(3),
            }
        }
    }
}
