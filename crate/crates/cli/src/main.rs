use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use slcterm::analyzer::{Analyzer, AnalyzerError, Verdict, Witness};
use slcterm::collatz::{self, CollatzError, GenCollatz, Mapping, OrbitOutcome, OrbitResult, Sign, WeakCollatz};
use slcterm::lattice::{LatticeError, DEFAULT_SCAN_LIMIT};
use slcterm::loopio::{self, ParseError, Report, ReportFlags};
use slcterm::oracle::{self, DEFAULT_BOUND, DEFAULT_TRACE_CAP};
use slcterm::poly2::{HPoly, Poly2Error};

/// Transitions a non-terminating verdict must survive under `oracle --compare`.
const COMPARE_TRACE_LEN: usize = 201;

#[derive(Parser)]
#[command(name = "slcterm", version, about = "Termination analysis for one-variable linear-constraint loops")]
struct Cli {
    /// Columns examined by a single integer-point search before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_SCAN_LIMIT)]
    scan_limit: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the loop terminates on every integer input.
    Decide {
        file: PathBuf,
        /// Treat conjecture-dependent cases as terminating.
        #[arg(long)]
        assume_reachability: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search for cycles of length one and two.
    Cycles { file: PathBuf },
    /// Print vertices, recession cone and generators.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a trace of a non-terminating loop.
    Witness {
        file: PathBuf,
        /// Number of states.
        #[arg(long, default_value_t = 20)]
        length: usize,
    },
    /// Brute-force search for cycles and escaping runs inside [-B, B].
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND, value_parser = clap::value_parser!(i64).range(0..=1_000_000))]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_TRACE_CAP)]
        trace_cap: usize,
        /// Cross-check against the decision procedure; exit 4 on disagreement.
        #[arg(long)]
        compare: bool,
        /// Print the bounded transition graph as an edge list.
        #[arg(long)]
        edges: bool,
    },
    /// Cross-check the decision procedure against the oracle on random loops.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = 6)]
        max_rows: usize,
        #[arg(long, default_value_t = 7)]
        coeff: i64,
    },
    /// Collatz-style mapping experiments.
    Collatz {
        #[command(subcommand)]
        command: CollatzCommand,
    },
}

#[derive(Subcommand)]
enum CollatzCommand {
    /// Iterate until a repeat, the step limit or the bound.
    Orbit {
        #[command(flatten)]
        mapping: MappingArgs,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        json: bool,
    },
    /// Iterate until m·x ≡ a (mod d) holds.
    Reach {
        #[command(flatten)]
        mapping: MappingArgs,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        json: bool,
    },
    /// Residues of the first `steps` orbit values modulo d^alpha.
    Hist {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        start: BigInt,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        alpha: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print the loop whose transitions follow the weak mapping.
    ToSlc {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, value_enum, allow_hyphen_values = true, default_value = "+")]
        sign: SignArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct MappingArgs {
    #[arg(long)]
    d: BigInt,
    /// Weak mapping multiplier.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["m_list", "r_list"])]
    m: Option<BigInt>,
    /// Weak mapping offset.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    a: BigInt,
    /// Per-residue multipliers of a generalized mapping.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "r_list")]
    m_list: Option<Vec<BigInt>>,
    /// Per-residue offsets of a generalized mapping.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "m_list")]
    r_list: Option<Vec<BigInt>>,
}

#[derive(Args)]
struct Limits {
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    start: BigInt,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value = "1000000000000")]
    abs_bound: BigInt,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

enum AnyMapping {
    Weak(WeakCollatz),
    Gen(GenCollatz),
}

impl MappingArgs {
    fn build(&self) -> Result<AnyMapping, CliError> {
        match (&self.m, &self.m_list, &self.r_list) {
            (Some(m), None, None) => Ok(AnyMapping::Weak(WeakCollatz::new(self.d.clone(), m.clone(), self.a.clone())?)),
            (None, Some(m), Some(r)) => Ok(AnyMapping::Gen(GenCollatz::new(self.d.clone(), m.clone(), r.clone())?)),
            _ => Err(CliError::Usage("give either --m (weak mapping) or --m-list with --r-list".into())),
        }
    }

    fn weak(&self) -> Result<WeakCollatz, CliError> {
        match self.build()? {
            AnyMapping::Weak(t) => Ok(t),
            AnyMapping::Gen(_) => Err(CliError::Usage("this subcommand needs a weak mapping (--m)".into())),
        }
    }
}

enum CliError {
    Usage(String),
    ScanLimit(u64),
    Mismatch(String),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::ScanLimit(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Mismatch(m) | CliError::Failed(m) => f.write_str(m),
            CliError::ScanLimit(n) => write!(f, "integer point search exceeded the scan limit of {n} columns"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CollatzError> for CliError {
    fn from(e: CollatzError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::ScanLimitExceeded { limit } => CliError::ScanLimit(limit),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<AnalyzerError> for CliError {
    fn from(e: AnalyzerError) -> Self {
        match e {
            AnalyzerError::Lattice(l) => l.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<Poly2Error> for CliError {
    fn from(e: Poly2Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slcterm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_loop(path: &PathBuf) -> Result<HPoly, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(loopio::parse_any(&text)?)
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<(), CliError> {
    let an = Analyzer::new(cli.scan_limit);
    match cli.command {
        Command::Decide { file, assume_reachability, json } => {
            let p = read_loop(&file)?;
            let v = an.decide(&p, assume_reachability)?;
            if json {
                let d = if p.is_empty() { None } else { Some(p.decompose()?) };
                let flags = ReportFlags { assume_reachability };
                println!("{}", Report::new(&v, d.as_ref(), flags).to_json());
            } else {
                println!("{v}");
                if let Verdict::NonTerminating { witness, .. } = &v {
                    let states = match witness {
                        Witness::Cycle(c) => c.states.clone(),
                        Witness::Trace(seed) => vec![seed.start.0.clone(), seed.start.1.clone()],
                    };
                    println!("witness {}: {}", loopio::witness_kind(witness), joined(&states));
                }
            }
        }
        Command::Cycles { file } => {
            let p = read_loop(&file)?;
            match an.cycle1(&p) {
                Some(s) => println!("cycle1: {s}"),
                None => println!("cycle1: none"),
            }
            match an.cycle2(&p)? {
                Some((a, b)) => println!("cycle2: {a} {b}"),
                None => println!("cycle2: none"),
            }
        }
        Command::Decompose { file, json } => {
            let p = read_loop(&file)?;
            if p.is_empty() {
                println!("{}", if json { "null".to_string() } else { "empty".to_string() });
                return Ok(());
            }
            let d = p.decompose()?;
            if json {
                println!("{}", loopio::emit_decomposition(&d));
            } else {
                println!("vertices: {}", joined(&d.vertices));
                println!("cone: {}", d.cone);
                println!("generators: {}", joined(&d.cone.generators()));
                println!("vertex bound: {}", d.vertex_bound);
            }
        }
        Command::Witness { file, length } => {
            let p = read_loop(&file)?;
            let v = an.decide(&p, false)?;
            if !matches!(v, Verdict::NonTerminating { .. }) {
                return Err(CliError::Usage(format!("no witness: verdict is {v}")));
            }
            println!("{}", joined(&an.witness_trace(&p, &v, length)?));
        }
        Command::Oracle { file, bound, trace_cap, compare, edges } => {
            let p = read_loop(&file)?;
            let g = oracle::build_graph(&p, bound);
            if edges {
                print!("{}", g.to_edge_list());
            }
            let cycle = oracle::find_cycle(&g);
            match &cycle {
                Some(c) => println!("cycle: {}", joined(c)),
                None => println!("cycle: none"),
            }
            match oracle::find_escape(&g, &p, trace_cap) {
                Some(t) => println!("escape: {}", joined(&t)),
                None => println!("escape: none"),
            }
            if compare {
                let v = an.decide(&p, false)?;
                println!("verdict: {v}");
                compare_with_oracle(&an, &p, &v, cycle.is_some())?;
                println!("compare: consistent");
            }
        }
        Command::Fuzz { count, seed, bound, max_rows, coeff } => {
            if max_rows == 0 || coeff < 0 {
                return Err(CliError::Usage("--max-rows must be positive and --coeff nonnegative".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut terminating, mut nonterminating, mut unknown) = (0, 0, 0);
            for i in 0..count {
                let p = oracle::random_slc(&mut rng, max_rows, coeff);
                let v = an.decide(&p, false)?;
                let cycle = oracle::find_cycle(&oracle::build_graph(&p, bound)).is_some();
                compare_with_oracle(&an, &p, &v, cycle)
                    .map_err(|e| CliError::Mismatch(format!("instance {i}: {e}\n{}", loopio::emit_text(&p))))?;
                match v {
                    Verdict::Terminating { .. } => terminating += 1,
                    Verdict::NonTerminating { .. } => nonterminating += 1,
                    Verdict::Unknown { .. } => unknown += 1,
                }
            }
            println!(
                "{count} instances consistent: {terminating} terminating, {nonterminating} non-terminating, {unknown} unknown"
            );
        }
        Command::Collatz { command } => run_collatz(command)?,
    }
    Ok(())
}

fn compare_with_oracle(an: &Analyzer, p: &HPoly, v: &Verdict, oracle_cycle: bool) -> Result<(), CliError> {
    if oracle_cycle && !an.has_cycle(p)? {
        return Err(CliError::Mismatch("oracle found a cycle that the cycle checks missed".into()));
    }
    match v {
        Verdict::Terminating { label } if oracle_cycle => {
            Err(CliError::Mismatch(format!("verdict terminating ({label}) but the oracle found a cycle")))
        }
        Verdict::NonTerminating { label, .. } => match an.witness_trace(p, v, COMPARE_TRACE_LEN) {
            Ok(_) => Ok(()),
            Err(AnalyzerError::Lattice(e)) => Err(e.into()),
            Err(e) => Err(CliError::Mismatch(format!("verdict non-terminating ({label}) but {e}"))),
        },
        _ => Ok(()),
    }
}

fn print_orbit(r: &OrbitResult, json: bool) {
    if json {
        println!("{}", loopio::emit_orbit(r));
        return;
    }
    match r.outcome {
        OrbitOutcome::ReachedTarget { step } => println!("{} step={step}", r.outcome.name()),
        OrbitOutcome::EnteredCycle { first_index, period } => {
            println!("{} first_index={first_index} period={period}", r.outcome.name())
        }
        _ => println!("{}", r.outcome.name()),
    }
    println!("{}", joined(&r.prefix));
}

fn run_collatz(command: CollatzCommand) -> Result<(), CliError> {
    match command {
        CollatzCommand::Orbit { mapping, limits, json } => {
            let r = match mapping.build()? {
                AnyMapping::Weak(t) => collatz::orbit(&t, &limits.start, limits.steps, &limits.abs_bound),
                AnyMapping::Gen(t) => collatz::orbit(&t, &limits.start, limits.steps, &limits.abs_bound),
            };
            print_orbit(&r, json);
        }
        CollatzCommand::Reach { mapping, limits, json } => {
            let t = mapping.weak()?;
            print_orbit(&collatz::reachability_scan(&t, &limits.start, limits.steps, &limits.abs_bound), json);
        }
        CollatzCommand::Hist { mapping, start, steps, alpha, json } => {
            let (modulus, hist) = match mapping.build()? {
                AnyMapping::Weak(t) => (t.modulus().pow(alpha), collatz::residue_histogram(&t, &start, steps, alpha)),
                AnyMapping::Gen(t) => (t.modulus().pow(alpha), collatz::residue_histogram(&t, &start, steps, alpha)),
            };
            if json {
                println!("{}", loopio::emit_histogram(&modulus, &hist));
            } else {
                println!("modulus {modulus}");
                for (residue, count) in &hist {
                    println!("{residue} {count}");
                }
            }
        }
        CollatzCommand::ToSlc { mapping, sign, json } => {
            let t = mapping.weak()?;
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            let p = collatz::to_slc(&t, sign)?;
            if json {
                println!("{}", loopio::emit_json(&p));
            } else {
                print!("{}", loopio::emit_text(&p));
            }
        }
    }
    Ok(())
}
