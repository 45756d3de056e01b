use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use codebruijn::instrument;
use codebruijn::lam::{
    db_app, db_lam, db_var, leaf_scope, naive_normalize, normalize, pretty_codebruijn,
    pretty_index, pretty_named, sort, syntax, NormalizeError,
};
use codebruijn::universe::{check_relevance, code, decode, validate_db, validate_r};
use codebruijn::{Relev, Scope, TermDB, TermR};

use codebruijn_cli::input::{load, Loaded};
use codebruijn_cli::sexp;

#[derive(Parser)]
#[command(
    name = "codebruijn",
    version,
    about = "Lambda terms in co-de-Bruijn form: display, reduce, validate"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print terms in one or more formats
    Show(ShowArgs),
    /// Reduce terms to normal form and report step counts
    Normalize(NormalizeArgs),
    /// Validate scoping and relevance annotations
    Check(CommonArgs),
    /// Reduce a generated workload on both engines and report counters
    Bench(BenchArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Term given inline instead of a file
    #[arg(short = 'e', long = "expr", value_name = "TERM")]
    expr: Option<String>,
    /// Input file: lambda terms one per line, or one s-expression;
    /// `#` comments
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
    /// Names for the free variables, oldest first
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    env: Vec<String>,
    /// Print instrumentation counters to stderr
    #[arg(long)]
    debug: bool,
}

#[derive(Args)]
struct ShowArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output format; repeat for several
    #[arg(long, value_enum, value_name = "FORMAT")]
    format: Vec<Format>,
}

#[derive(Args)]
struct NormalizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output format; repeat for several
    #[arg(long, value_enum, value_name = "FORMAT")]
    format: Vec<Format>,
    /// Maximum number of reduction steps
    #[arg(long, default_value_t = 1000)]
    fuel: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Doublings applied to the discarded argument
    #[arg(long, default_value_t = 10)]
    size: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Invented letters, `\a.a` style
    Named,
    /// Indices counting binders inside out
    Index,
    /// Thinnings, usage maps and covers spelled out
    Codebruijn,
    /// Machine-readable s-expression
    Sexp,
}

enum Failure {
    Input(String),
    Validation(String),
    Fuel(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Show(args) => run_show(args),
        Cmd::Normalize(args) => run_normalize(args),
        Cmd::Check(args) => run_check(args),
        Cmd::Bench(args) => run_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (1, m),
                Failure::Validation(m) => (2, m),
                Failure::Fuel(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_input(c: &CommonArgs) -> Result<String, Failure> {
    match (&c.expr, &c.file) {
        (Some(e), None) => Ok(e.clone()),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        (Some(_), Some(_)) => Err(Failure::Input(String::from(
            "give either -e or a file, not both",
        ))),
        (None, None) => Err(Failure::Input(String::from(
            "no input: give -e TERM or a file",
        ))),
    }
}

/// A term in both representations, fully validated.
struct Prepared {
    db: TermDB,
    r: Relev<TermR>,
    scope: Scope,
}

fn prepare(loaded: Loaded, env_len: usize) -> Result<Prepared, Failure> {
    let validation = |e: codebruijn::TermError| Failure::Validation(e.to_string());
    match loaded {
        Loaded::Db(t) => {
            let scope = leaf_scope(env_len);
            validate_db(&syntax(), &t, &scope, &sort()).map_err(validation)?;
            let r = code(&syntax(), &t, &scope, &sort()).map_err(validation)?;
            Ok(Prepared { db: t, r, scope })
        }
        Loaded::R(r) => {
            // A closed-over file may declare its own width; a nonempty
            // --env must agree with it.
            let width = if env_len == 0 {
                r.thinning().target().len()
            } else {
                env_len
            };
            let scope = leaf_scope(width);
            validate_r(&syntax(), &r, &scope, &sort()).map_err(validation)?;
            check_relevance(&r).map_err(validation)?;
            let db = decode(&syntax(), &r, &scope, &sort()).map_err(validation)?;
            Ok(Prepared { db, r, scope })
        }
    }
}

fn render(f: Format, p: &Prepared, env: &[String]) -> String {
    match f {
        Format::Named => pretty_named(&p.db, env),
        Format::Index => pretty_index(&p.db, p.scope.len()),
        Format::Codebruijn => pretty_codebruijn(&p.r),
        Format::Sexp => sexp::write_term(&p.r),
    }
}

fn formats_or_default(formats: Vec<Format>) -> Vec<Format> {
    if formats.is_empty() {
        vec![Format::Named]
    } else {
        formats
    }
}

fn report_counters(debug: bool) {
    if debug {
        eprintln!(
            "visits: {}  hereditary calls: {}  metric violations: {}",
            instrument::visits(),
            instrument::hered_calls(),
            instrument::metric_violations()
        );
    }
}

fn run_show(args: ShowArgs) -> Result<(), Failure> {
    let text = read_input(&args.common)?;
    let loaded = load(&text, &args.common.env).map_err(|e| Failure::Input(e.to_string()))?;
    let formats = formats_or_default(args.format);
    instrument::reset();
    for l in loaded {
        let p = prepare(l, args.common.env.len())?;
        for f in &formats {
            println!("{}", render(*f, &p, &args.common.env));
        }
    }
    report_counters(args.common.debug);
    Ok(())
}

fn run_normalize(args: NormalizeArgs) -> Result<(), Failure> {
    let text = read_input(&args.common)?;
    let loaded = load(&text, &args.common.env).map_err(|e| Failure::Input(e.to_string()))?;
    let formats = formats_or_default(args.format);
    instrument::reset();
    for l in loaded {
        let p = prepare(l, args.common.env.len())?;
        let print_result = |term: &Relev<TermR>, steps: u64| -> Result<(), Failure> {
            let db = decode(&syntax(), term, &p.scope, &sort())
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let shown = Prepared {
                db,
                r: term.clone(),
                scope: p.scope.clone(),
            };
            for f in &formats {
                println!("{}", render(*f, &shown, &args.common.env));
            }
            println!("steps: {steps}");
            Ok(())
        };
        match normalize(&p.r, &p.scope, args.fuel) {
            Ok(n) => print_result(&n.term, n.steps)?,
            Err(NormalizeError::OutOfFuel { partial, steps }) => {
                print_result(&partial, steps)?;
                report_counters(args.common.debug);
                return Err(Failure::Fuel(format!(
                    "out of fuel after {steps} steps; partial result printed"
                )));
            }
            Err(NormalizeError::Term(e)) => return Err(Failure::Validation(e.to_string())),
        }
    }
    report_counters(args.common.debug);
    Ok(())
}

fn run_check(args: CommonArgs) -> Result<(), Failure> {
    let text = read_input(&args)?;
    let loaded = load(&text, &args.env).map_err(|e| Failure::Input(e.to_string()))?;
    instrument::reset();
    for l in loaded {
        let p = prepare(l, args.env.len())?;
        // prepare validates whichever representation came in; cross-check
        // the coded side too so lambda input exercises the same battery.
        validate_r(&syntax(), &p.r, &p.scope, &sort())
            .map_err(|e| Failure::Validation(e.to_string()))?;
        check_relevance(&p.r).map_err(|e| Failure::Validation(e.to_string()))?;
        println!("ok");
    }
    report_counters(args.debug);
    Ok(())
}

fn church(n: u32) -> TermDB {
    // \f.\x. f (f ... (f x)); f is position 0, x position 1.
    let mut body = db_var(1);
    for _ in 0..n {
        body = db_app(db_var(0), body);
    }
    db_lam(db_lam(body))
}

fn church_add() -> TermDB {
    // \m.\n.\f.\x. m f (n f x)
    db_lam(db_lam(db_lam(db_lam(db_app(
        db_app(db_var(0), db_var(2)),
        db_app(db_app(db_var(1), db_var(2)), db_var(3)),
    )))))
}

fn bench_one(name: &str, t: &TermDB, fuel: u64) -> Result<(), Failure> {
    let scope = leaf_scope(0);
    let r = code(&syntax(), t, &scope, &sort()).map_err(|e| Failure::Validation(e.to_string()))?;

    let start = Instant::now();
    let (engine, engine_visits) = instrument::counting(|| normalize(&r, &scope, fuel));
    let engine_time = start.elapsed();
    let engine = engine.map_err(|e| Failure::Validation(e.to_string()))?;

    let start = Instant::now();
    let (naive, naive_visits) = instrument::counting(|| naive_normalize(t, 0, fuel));
    let naive_time = start.elapsed();
    let (naive_nf, naive_steps) =
        naive.map_err(|(_, s)| Failure::Validation(format!("oracle out of fuel at {s}")))?;

    let agree = decode(&syntax(), &engine.term, &scope, &sort())
        .map(|d| d == naive_nf && engine.steps == naive_steps)
        .unwrap_or(false);
    println!("workload: {name}");
    println!(
        "  engine: steps {:<6} visits {:<10} time {} µs",
        engine.steps,
        engine_visits,
        engine_time.as_micros()
    );
    println!(
        "  naive : steps {:<6} visits {:<10} time {} µs",
        naive_steps,
        naive_visits,
        naive_time.as_micros()
    );
    println!("  agree : {agree}");
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    // A vacuous binder throws away an argument that doubles `size` times:
    // the engine never looks at it, the oracle shifts every node of it.
    let mut big = db_lam(db_var(0));
    for _ in 0..args.size {
        big = db_app(big.clone(), big);
    }
    let discard = db_app(
        db_app(db_lam(db_lam(db_var(0))), db_lam(db_var(0))),
        big,
    );
    bench_one(
        &format!("discard (argument doubled {} times)", args.size),
        &discard,
        1 << 20,
    )?;

    let sum = db_app(db_app(church_add(), church(64)), church(64));
    bench_one("church (64 + 64)", &sum, 1 << 20)?;
    Ok(())
}
