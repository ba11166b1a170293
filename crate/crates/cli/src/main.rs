mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use maxlin2::format::{self, ParseError};
use maxlin2::graphapps::{self, CutResult, LabeledGraph};
use maxlin2::linsystem::{lift_assignment, reduce, Assignment, LinearSystem};
use maxlin2::pseudobool::{self, FourierPolynomial};
use maxlin2::solver::{self, Answer, KernelOutcome, Regime, SolveOptions, SolveStats, Verdict};
use maxlin2::testkit::{self, GeneratorSpec};
use maxlin2::Weight;
use sha2::{Digest, Sha256};

use report::Report;

/// Weighted linear systems over F2: above-average decisions, kernels and
/// guaranteed assignments.
#[derive(Parser)]
#[command(name = "maxlin2", version)]
struct Cli {
    /// Print one JSON object instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
    /// Add the wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether some assignment has excess at least 2k (kernelize, then search).
    Solve {
        #[arg(long)]
        k: usize,
        /// Explore search-tree branches concurrently.
        #[arg(long)]
        parallel: bool,
        file: PathBuf,
    },
    /// Decide with the bounded search tree alone.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        parallel: bool,
        file: PathBuf,
    },
    /// Shrink an instance to a kernel or decide it outright.
    Kernelize {
        #[arg(long)]
        k: usize,
        /// Use the (2k-1)r-variable kernel for equations of at most R variables.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        parallel: bool,
        file: PathBuf,
        /// Write the kernel here when one is produced.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find an assignment with excess at least k times the minimum weight.
    Excess {
        #[arg(long)]
        k: usize,
        /// Arity bound; defaults to the largest equation after reduction.
        #[arg(long)]
        r: Option<usize>,
        file: PathBuf,
    },
    /// Lower-bound the maximum of a pseudo-boolean function.
    PbBound { file: PathBuf },
    /// Cut at least m/2 + (n-1)/4 edges of every component.
    Maxcut { file: PathBuf },
    /// Satisfy at least m/2 + (n-1)/4 labeled edges of every component.
    Balance { file: PathBuf },
    /// Maximum excess by exhaustive enumeration.
    Oracle {
        /// Also answer whether the maximum reaches 2k.
        #[arg(long)]
        k: Option<usize>,
        file: PathBuf,
    },
    /// Generate an instance in the .lin2 format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// kappa-1 blocks of r variables whose maximum excess is exactly kappa-1.
    Tight {
        #[arg(long)]
        kappa: usize,
        #[arg(long)]
        r: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// m distinct random equations of 1..=r variables.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Input(String),
    Precondition(String),
    /// A witness failed re-validation against the raw input.
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn precondition(e: impl std::fmt::Display) -> Self {
        CliError::Precondition(e.to_string())
    }
}

/// What a command prints on success.
enum Output {
    Report(Report, u8),
    Raw(String),
}

struct Input {
    path: PathBuf,
    text: String,
}

impl Input {
    fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Self {
            path: path.to_path_buf(),
            text,
        })
    }

    fn parse<T>(&self, parser: fn(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
        parser(&self.text).map_err(|e| CliError::Input(format!("{}: {e}", self.path.display())))
    }

    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command);
        r.text("input", self.path.display().to_string());
        r.text("input_sha256", format!("{:x}", Sha256::digest(self.text.as_bytes())));
        r
    }

    /// Recomputes the excess of `x` from the raw text.
    fn recheck_excess(&self, x: &Assignment, at_least: &Weight) -> Result<Weight, CliError> {
        let s = self.parse(format::parse_lin2)?;
        match s.excess(x) {
            Ok(e) if &e >= at_least => Ok(e),
            Ok(e) => Err(CliError::Internal(format!(
                "witness excess {e} is below the claimed {at_least}"
            ))),
            Err(e) => Err(CliError::Internal(e.to_string())),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(Output::Report(mut report, code)) => {
            if cli.timing {
                report.int("time_ms", start.elapsed().as_millis() as u64);
            }
            print!("{}", report.render(cli.json));
            ExitCode::from(code)
        }
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let message = match &e {
                CliError::Input(m) | CliError::Precondition(m) => m.clone(),
                CliError::Internal(m) => format!("internal error: {m}"),
            };
            eprintln!("error: {message}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Solve { k, parallel, file } => {
            let input = Input::read(&file)?;
            let s = input.parse(format::parse_lin2)?;
            let v = solver::solve_with(&s, k, &SolveOptions { parallel })
                .map_err(CliError::precondition)?;
            verdict_report(input.report("solve"), &input, &s, k, &v)
        }
        Command::Search { k, parallel, file } => {
            let input = Input::read(&file)?;
            let s = input.parse(format::parse_lin2)?;
            let v = solver::solve_search_tree_with(&s, k, &SolveOptions { parallel });
            verdict_report(input.report("search"), &input, &s, k, &v)
        }
        Command::Kernelize {
            k,
            r,
            parallel,
            file,
            output,
        } => kernelize(k, r, parallel, &file, output.as_deref()),
        Command::Excess { k, r, file } => excess(k, r, &file),
        Command::PbBound { file } => pb_bound(&file),
        Command::Maxcut { file } => graph("maxcut", &file, graphapps::max_cut_assignment),
        Command::Balance { file } => graph("balance", &file, graphapps::balanced_subgraph_assignment),
        Command::Oracle { k, file } => oracle(k, &file),
        Command::Gen { kind } => generate(kind),
    }
}

fn answer_name(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
    }
}

fn stats_fields(r: &mut Report, stats: &SolveStats) {
    r.text("regime", stats.regime.name())
        .int("vars_before", stats.vars_before as u64)
        .int("vars_after", stats.vars_after as u64)
        .int("reductions", stats.reductions as u64)
        .int("nodes", stats.nodes)
        .flag("witness_by_search", stats.witness_by_search);
}

fn verdict_report(
    mut r: Report,
    input: &Input,
    s: &LinearSystem,
    k: usize,
    v: &Verdict,
) -> Result<Output, CliError> {
    r.int("k", k as u64)
        .int("vars", s.n_vars() as u64)
        .int("equations", s.n_equations() as u64)
        .text("answer", answer_name(v.answer));
    stats_fields(&mut r, &v.stats);
    witness_fields(&mut r, input, s, k, v)?;
    Ok(Output::Report(r, if v.is_yes() { 0 } else { 1 }))
}

fn witness_fields(
    r: &mut Report,
    input: &Input,
    s: &LinearSystem,
    k: usize,
    v: &Verdict,
) -> Result<(), CliError> {
    if let Some(x) = &v.witness {
        let excess = input.recheck_excess(x, &Weight::from_integer((2 * k).into()))?;
        r.rational("excess", &excess).assignment("witness", s.var_names(), x);
    }
    Ok(())
}

/// Largest `n` accepted by the `4k² log₂(16k⁴)` kernel bound.
fn kernel_var_bound(k: usize) -> usize {
    let mut n = 0;
    while solver::within_kernel_bound(n + 1, k) {
        n += 1;
    }
    n
}

fn kernelize(
    k: usize,
    r: Option<usize>,
    parallel: bool,
    file: &Path,
    output: Option<&Path>,
) -> Result<Output, CliError> {
    let input = Input::read(file)?;
    let s = input.parse(format::parse_lin2)?;
    let outcome = match r {
        Some(r) => solver::kernelize_r(&s, k, r),
        None => solver::kernelize_with(&s, k, &SolveOptions { parallel }),
    }
    .map_err(CliError::precondition)?;

    let mut rep = input.report("kernelize");
    rep.int("k", k as u64);
    if let Some(r) = r {
        rep.int("r", r as u64);
    }
    rep.int("vars", s.n_vars() as u64)
        .int("equations", s.n_equations() as u64);
    match outcome {
        KernelOutcome::Solved(v) => {
            rep.text("outcome", "solved").text("answer", answer_name(v.answer));
            stats_fields(&mut rep, &v.stats);
            witness_fields(&mut rep, &input, &s, k, &v)?;
            Ok(Output::Report(rep, if v.is_yes() { 0 } else { 1 }))
        }
        KernelOutcome::Kernel {
            system, log, regime, ..
        } => {
            let bound = match (regime, r) {
                (Regime::ArityKernel, Some(r)) => (2 * k - 1) * r,
                (Regime::FewEquations, _) => 2 * k - 1,
                _ => kernel_var_bound(k),
            };
            rep.text("outcome", "kernel")
                .text("regime", regime.name())
                .int("kernel_vars", system.n_vars() as u64)
                .int("kernel_equations", system.n_equations() as u64)
                .int("kernel_var_bound", bound as u64)
                .int("reductions", log.reduction_count() as u64);
            if let Some(path) = output {
                fs::write(path, format::write_lin2(&system))
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                rep.text("output", path.display().to_string());
            }
            Ok(Output::Report(rep, 0))
        }
    }
}

fn excess(k: usize, r: Option<usize>, file: &Path) -> Result<Output, CliError> {
    let input = Input::read(file)?;
    let s = input.parse(format::parse_lin2)?;
    let (red, log) = reduce(&s);
    let y = solver::guaranteed_excess_assignment(&red, k, r).map_err(CliError::precondition)?;
    let x = lift_assignment(&log, &y).expect("reduction log matches the reduced system");
    let w_min = red.min_weight().expect("a nonempty reduced system");
    let guarantee = Weight::from_integer(k.into()) * &w_min;
    let achieved = input.recheck_excess(&x, &guarantee)?;

    let mut rep = input.report("excess");
    rep.int("k", k as u64)
        .int("r", r.unwrap_or_else(|| red.max_arity()) as u64)
        .int("vars", s.n_vars() as u64)
        .int("reduced_vars", red.n_vars() as u64)
        .rational("min_weight", &w_min)
        .rational("guarantee", &guarantee)
        .rational("excess", &achieved)
        .assignment("witness", s.var_names(), &x);
    Ok(Output::Report(rep, 0))
}

fn index_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn pb_bound(file: &Path) -> Result<Output, CliError> {
    let input = Input::read(file)?;
    let f: FourierPolynomial = input.parse(format::parse_pbf)?;
    let b = pseudobool::lower_bound(&f);
    let value = input
        .parse(format::parse_pbf)?
        .evaluate(&b.witness)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    if value < b.bound {
        return Err(CliError::Internal(format!(
            "witness value {value} is below the bound {}",
            b.bound
        )));
    }
    let min_coef = f.terms().map(|(_, c)| num_traits::Signed::abs(c)).min();

    let mut rep = input.report("pb-bound");
    rep.int("vars", f.n_vars() as u64)
        .int("terms", f.n_terms() as u64)
        .int("degree", f.degree() as u64)
        .rational("constant", f.constant())
        .int("rank", b.rank_used as u64)
        .int("k_star", b.k_star as u64);
    if let Some(c) = &min_coef {
        rep.rational("min_coefficient", c);
    }
    rep.rational("bound", &b.bound)
        .rational("value", &value)
        .assignment("witness", &index_names("x", f.n_vars()), &b.witness);
    Ok(Output::Report(rep, 0))
}

fn graph(
    command: &str,
    file: &Path,
    pipeline: fn(&LabeledGraph) -> Result<CutResult, graphapps::GraphError>,
) -> Result<Output, CliError> {
    let input = Input::read(file)?;
    let g = input.parse(format::parse_graph)?;
    let res = pipeline(&g).map_err(CliError::precondition)?;
    let recount = input
        .parse(format::parse_graph)?
        .satisfied_count(&res.coloring)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    if recount != res.satisfied || recount < res.guaranteed_count() {
        return Err(CliError::Internal(format!(
            "coloring satisfies {recount} edges, reported {} with guarantee {}",
            res.satisfied, res.guarantee
        )));
    }

    let mut rep = input.report(command);
    rep.int("vertices", g.n_vertices() as u64)
        .int("edges", g.n_edges() as u64)
        .int("components", g.n_components() as u64)
        .int(if command == "maxcut" { "cut" } else { "satisfied" }, recount as u64)
        .rational("guarantee", &res.guarantee)
        .int("guaranteed", res.guaranteed_count() as u64)
        .signs(
            "coloring",
            index_names("v", g.n_vertices()).iter().map(String::as_str),
            &res.coloring,
        );
    Ok(Output::Report(rep, 0))
}

fn oracle(k: Option<usize>, file: &Path) -> Result<Output, CliError> {
    let input = Input::read(file)?;
    let s = input.parse(format::parse_lin2)?;
    let (best, x) = testkit::brute_force_max_excess(&s).map_err(CliError::precondition)?;
    let achieved = input.recheck_excess(&x, &best)?;

    let mut rep = input.report("oracle");
    rep.int("vars", s.n_vars() as u64)
        .int("equations", s.n_equations() as u64)
        .rational("max_excess", &achieved)
        .assignment("witness", s.var_names(), &x);
    let mut code = 0;
    if let Some(k) = k {
        let yes = achieved >= Weight::from_integer((2 * k).into());
        rep.int("k", k as u64).text("answer", if yes { "yes" } else { "no" });
        code = if yes { 0 } else { 1 };
    }
    Ok(Output::Report(rep, code))
}

fn generate(kind: GenKind) -> Result<Output, CliError> {
    let (spec, output, header) = match kind {
        GenKind::Tight { kappa, r, output } => (
            GeneratorSpec::Tight { kappa, r },
            output,
            format!("c tight instance kappa={kappa} r={r}\n"),
        ),
        GenKind::Random {
            n,
            m,
            r,
            max_weight,
            seed,
            output,
        } => (
            GeneratorSpec::Random {
                n,
                m,
                r,
                max_weight,
                seed,
            },
            output,
            format!("c random instance n={n} m={m} r={r} max_weight={max_weight} seed={seed}\n"),
        ),
    };
    let s = testkit::generate(&spec).map_err(CliError::precondition)?;
    let text = header + &format::write_lin2(&s);
    match output {
        None => Ok(Output::Raw(text)),
        Some(path) => {
            fs::write(&path, &text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let mut rep = Report::new("gen");
            rep.text("output", path.display().to_string())
                .int("vars", s.n_vars() as u64)
                .int("equations", s.n_equations() as u64)
                .text("output_sha256", format!("{:x}", Sha256::digest(text.as_bytes())));
            Ok(Output::Report(rep, 0))
        }
    }
}
