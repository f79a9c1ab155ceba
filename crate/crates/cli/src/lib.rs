//! Command-line front end: enumeration, connectivity, verification, oracles,
//! reductions and instrumentation runs over text-format instances.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperpath_core::enumerator::enumerate_hyperpaths;
use hyperpath_core::families::{self, Family};
use hyperpath_core::io::{parse_cnf, parse_dhg, parse_hg, serialize_dhg, Metadata};
use hyperpath_core::oracles::{
    oracle_hyperpaths, oracle_induced_hyperpaths, oracle_minimal_separators,
    oracle_minimal_transversals, OracleError,
};
use hyperpath_core::reductions::{
    reduce_sat_induced, reduce_sat_separator, reduce_transversal, transversal_from_hyperpath,
};
use hyperpath_core::{
    b_connected_set, diagnose_hyperpath, ArcId, DirectedHypergraph, EnumerationError,
    EnumerationStats, HyperpathInstance, UndirectedHypergraph, Vertex, DEFAULT_CAP,
};

#[derive(Parser, Debug)]
#[command(name = "hyperpath", version, about = "Enumerate hyperpaths in directed hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stream every S-T hyperpath of a B-hypergraph, one line of arc ids each.
    Enumerate(EnumerateArgs),
    /// Print the vertices B-connected from the sources.
    Connect(ConnectArgs),
    /// Check whether an arc set is an S-T hyperpath.
    Check(CheckArgs),
    /// Run a brute-force oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Build a hardness-construction instance and its metadata sidecar.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Minimal transversals of a hypergraph via hyperpaths of its BF encoding.
    Transversals(TransversalsArgs),
    /// Enumerate on a generated family and emit per-solution CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct Terminals {
    /// Source vertices, comma-separated.
    #[arg(long = "source", value_delimiter = ',', required = true)]
    sources: Vec<String>,
    /// Target vertices, comma-separated.
    #[arg(long = "target", value_delimiter = ',', required = true)]
    targets: Vec<String>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    terminals: Terminals,
    /// `.dhg` file, or `-` for standard input.
    file: PathBuf,
    /// Stop after this many solutions.
    #[arg(long)]
    limit: Option<u64>,
    /// Append run counters to standard error as key=value lines.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct ConnectArgs {
    #[arg(long = "source", value_delimiter = ',', required = true)]
    sources: Vec<String>,
    file: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    terminals: Terminals,
    /// Arc ids, comma-separated; an empty value checks the empty set.
    #[arg(long, value_delimiter = ',', num_args = 0..=1, default_value = "")]
    arcs: Vec<String>,
    file: PathBuf,
}

#[derive(Args, Debug)]
struct CapArg {
    /// Element cap for the exhaustive scan.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    source: String,
    #[arg(long)]
    target: String,
    file: PathBuf,
    #[command(flatten)]
    cap: CapArg,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// All S-T hyperpaths (any hypergraph class).
    Hyperpaths {
        #[command(flatten)]
        terminals: Terminals,
        file: PathBuf,
        #[command(flatten)]
        cap: CapArg,
    },
    /// All induced s-t hyperpaths, as vertex names.
    Induced(PairArgs),
    /// All minimal s-t separators, as vertex names.
    Separators(PairArgs),
    /// All minimal transversals of a `.hg` hypergraph.
    Transversals {
        file: PathBuf,
        #[command(flatten)]
        cap: CapArg,
    },
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Replace wide arcs by binary trees so every tail has at most two vertices.
    #[arg(long)]
    bounded_tail: bool,
    input: PathBuf,
    /// Output `.dhg` path; the sidecar goes to OUTPUT.meta. `-` writes the
    /// instance to standard output and the sidecar to standard error.
    output: PathBuf,
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// DIMACS 3-CNF to an induced-hyperpath instance.
    SatInduced(ReduceArgs),
    /// DIMACS 3-CNF to a minimal-separator instance.
    SatSeparator(ReduceArgs),
    /// `.hg` hypergraph to its BF-hypergraph encoding.
    Transversal {
        input: PathBuf,
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct TransversalsArgs {
    file: PathBuf,
    #[command(flatten)]
    cap: CapArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyKind {
    Diamond,
    Layered,
    Random,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    limit: Option<u64>,
}

/// Failure classes, mapped to exit statuses.
#[derive(Debug)]
enum CliError {
    /// Bad input files or arguments: status 2.
    Input(String),
    /// Well-formed input the operation cannot handle: status 1.
    Domain(String),
}

impl CliError {
    fn status(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(format!("io error: {e}"))
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Hypergraph(h) => CliError::Input(h.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

type VertexOracle =
    fn(&DirectedHypergraph, Vertex, Vertex, usize) -> std::result::Result<Vec<Vec<Vertex>>, OracleError>;

/// Runs one invocation and returns its exit status.
///
/// `stdin` is consulted only for `-` input paths.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let mut ctx = Context { stdin, stdout, stderr };
    let outcome = ctx.dispatch(cli.command).and_then(|()| Ok(ctx.stdout.flush()?));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {}", e.message());
            e.status()
        }
    }
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn read(&mut self, path: &Path) -> Result<String> {
        if path == Path::new("-") {
            let mut text = String::new();
            self.stdin.read_to_string(&mut text)?;
            Ok(text)
        } else {
            fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
        }
    }

    fn read_dhg(&mut self, path: &Path) -> Result<DirectedHypergraph> {
        let text = self.read(path)?;
        parse_dhg(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    fn read_hg(&mut self, path: &Path) -> Result<UndirectedHypergraph> {
        let text = self.read(path)?;
        parse_hg(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    fn dispatch(&mut self, command: Command) -> Result<()> {
        match command {
            Command::Enumerate(args) => self.enumerate(args),
            Command::Connect(args) => self.connect(args),
            Command::Check(args) => self.check(args),
            Command::Oracle(cmd) => self.oracle(cmd),
            Command::Reduce(cmd) => self.reduce(cmd),
            Command::Transversals(args) => self.transversals(args),
            Command::Bench(args) => self.bench(args),
        }
    }

    fn enumerate(&mut self, args: EnumerateArgs) -> Result<()> {
        let graph = self.read_dhg(&args.file)?;
        let inst = instance(&graph, &args.terminals)?;
        let limit = args.limit.unwrap_or(u64::MAX);
        let mut write_error = None;
        let stats = if limit == 0 {
            EnumerationStats::default()
        } else {
            let out = &mut *self.stdout;
            enumerate_hyperpaths(&inst, |e| {
                if let Err(err) = writeln!(out, "{}", join_ids(e.arcs)) {
                    write_error = Some(err);
                    return ControlFlow::Break(());
                }
                if e.index + 1 >= limit {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .map_err(enumeration_error)?
        };
        if let Some(err) = write_error {
            return Err(err.into());
        }
        if args.stats {
            write_stats(self.stderr, &stats)?;
        }
        Ok(())
    }

    fn connect(&mut self, args: ConnectArgs) -> Result<()> {
        let graph = self.read_dhg(&args.file)?;
        let sources = resolve(&graph, &args.sources)?;
        let reached = b_connected_set(&graph, &sources).map_err(|e| CliError::Input(e.to_string()))?;
        let mut names: Vec<&str> = graph.names_of(&reached).collect();
        names.sort_unstable();
        writeln!(self.stdout, "{}", names.join(" "))?;
        Ok(())
    }

    fn check(&mut self, args: CheckArgs) -> Result<()> {
        let graph = self.read_dhg(&args.file)?;
        let inst = instance(&graph, &args.terminals)?;
        let arcs = args
            .arcs
            .iter()
            .filter(|a| !a.trim().is_empty())
            .map(|a| {
                a.trim()
                    .parse::<ArcId>()
                    .map_err(|_| CliError::Input(format!("invalid arc id {a:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match diagnose_hyperpath(&inst, &arcs) {
            Ok(()) => writeln!(self.stdout, "valid")?,
            Err(defect) => writeln!(self.stdout, "invalid: {}", defect.describe(&graph))?,
        }
        Ok(())
    }

    fn oracle(&mut self, cmd: OracleCommand) -> Result<()> {
        match cmd {
            OracleCommand::Hyperpaths { terminals, file, cap } => {
                let graph = self.read_dhg(&file)?;
                let inst = instance(&graph, &terminals)?;
                for p in oracle_hyperpaths(&inst, cap.cap)? {
                    writeln!(self.stdout, "{}", join_ids(&p))?;
                }
            }
            OracleCommand::Induced(args) => self.vertex_oracle(args, oracle_induced_hyperpaths)?,
            OracleCommand::Separators(args) => self.vertex_oracle(args, oracle_minimal_separators)?,
            OracleCommand::Transversals { file, cap } => {
                let h = self.read_hg(&file)?;
                for tr in oracle_minimal_transversals(&h, cap.cap)? {
                    writeln!(self.stdout, "{}", h_names(&h, &tr))?;
                }
            }
        }
        Ok(())
    }

    fn vertex_oracle(
        &mut self,
        args: PairArgs,
        oracle: VertexOracle,
    ) -> Result<()> {
        let graph = self.read_dhg(&args.file)?;
        let s = resolve(&graph, std::slice::from_ref(&args.source))?[0];
        let t = resolve(&graph, std::slice::from_ref(&args.target))?[0];
        for set in oracle(&graph, s, t, args.cap.cap)? {
            writeln!(self.stdout, "{}", graph.names_of(&set).collect::<Vec<_>>().join(" "))?;
        }
        Ok(())
    }

    fn reduce(&mut self, cmd: ReduceCommand) -> Result<()> {
        let (graph, meta, output) = match cmd {
            ReduceCommand::SatInduced(args) => {
                let phi = self.read_cnf(&args.input)?;
                let inst = reduce_sat_induced(&phi, args.bounded_tail).map_err(domain)?;
                (inst.graph().clone(), inst.metadata(), args.output)
            }
            ReduceCommand::SatSeparator(args) => {
                let phi = self.read_cnf(&args.input)?;
                let inst = reduce_sat_separator(&phi, args.bounded_tail).map_err(domain)?;
                (inst.graph().clone(), inst.metadata(), args.output)
            }
            ReduceCommand::Transversal { input, output } => {
                let h = self.read_hg(&input)?;
                let map = reduce_transversal(&h).map_err(domain)?;
                (map.graph().clone(), map.metadata(), output)
            }
        };
        self.write_instance(&graph, &meta, &output)
    }

    fn read_cnf(&mut self, path: &Path) -> Result<hyperpath_core::CnfFormula> {
        let text = self.read(path)?;
        parse_cnf(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    fn write_instance(&mut self, graph: &DirectedHypergraph, meta: &Metadata, output: &Path) -> Result<()> {
        let text = serialize_dhg(graph);
        if output == Path::new("-") {
            self.stdout.write_all(text.as_bytes())?;
            self.stderr.write_all(meta.to_string().as_bytes())?;
            return Ok(());
        }
        let mut meta_path = output.as_os_str().to_owned();
        meta_path.push(".meta");
        fs::write(output, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", output.display())))?;
        fs::write(&meta_path, meta.to_string()).map_err(|e| {
            CliError::Input(format!("cannot write {}: {e}", Path::new(&meta_path).display()))
        })?;
        Ok(())
    }

    fn transversals(&mut self, args: TransversalsArgs) -> Result<()> {
        let h = self.read_hg(&args.file)?;
        let map = reduce_transversal(&h).map_err(domain)?;
        let inst = HyperpathInstance::new(map.graph(), &[map.source()], &[map.target()])
            .expect("terminals of a fresh reduction are valid");
        let mut found = oracle_hyperpaths(&inst, args.cap.cap)?
            .iter()
            .map(|p| transversal_from_hyperpath(&map, p).map_err(domain))
            .collect::<Result<Vec<_>>>()?;
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for tr in found {
            writeln!(self.stdout, "{}", h_names(&h, &tr))?;
        }
        Ok(())
    }

    fn bench(&mut self, args: BenchArgs) -> Result<()> {
        let family: Family = match args.family {
            FamilyKind::Diamond => families::diamond_chain(args.size),
            FamilyKind::Layered => families::layered(args.size),
            FamilyKind::Random => families::random_b(args.size, args.seed),
        };
        let inst = family.instance();
        let limit = args.limit.unwrap_or(u64::MAX);
        writeln!(self.stdout, "solution_index,checks_since_last,depth")?;
        if limit == 0 {
            return Ok(());
        }
        let out = &mut *self.stdout;
        let mut write_error = None;
        enumerate_hyperpaths(&inst, |e| {
            if let Err(err) = writeln!(out, "{},{},{}", e.index, e.checks_since_last, e.depth) {
                write_error = Some(err);
                return ControlFlow::Break(());
            }
            if e.index + 1 >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .map_err(enumeration_error)?;
        match write_error {
            Some(err) => Err(err.into()),
            None => Ok(()),
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn enumeration_error(e: EnumerationError) -> CliError {
    match e {
        EnumerationError::Hypergraph(h) => CliError::Input(h.to_string()),
        other => CliError::Domain(other.to_string()),
    }
}

fn resolve(graph: &DirectedHypergraph, names: &[String]) -> Result<Vec<Vertex>> {
    graph
        .resolve(names.iter().map(|n| n.trim()))
        .map_err(|e| CliError::Input(e.to_string()))
}

fn instance<'g>(graph: &'g DirectedHypergraph, terminals: &Terminals) -> Result<HyperpathInstance<'g>> {
    let sources = resolve(graph, &terminals.sources)?;
    let targets = resolve(graph, &terminals.targets)?;
    HyperpathInstance::new(graph, &sources, &targets).map_err(|e| CliError::Input(e.to_string()))
}

fn join_ids(ids: &[ArcId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn h_names(h: &UndirectedHypergraph, set: &[usize]) -> String {
    set.iter().map(|&v| h.name(v).as_str()).collect::<Vec<_>>().join(" ")
}

fn write_stats(out: &mut dyn Write, stats: &EnumerationStats) -> io::Result<()> {
    writeln!(out, "solutions_emitted={}", stats.solutions_emitted)?;
    writeln!(out, "recursion_nodes={}", stats.recursion_nodes)?;
    writeln!(out, "max_depth={}", stats.max_depth)?;
    writeln!(out, "connectivity_checks={}", stats.connectivity_checks)?;
    writeln!(out, "max_checks_between_outputs={}", stats.max_checks_between_outputs)?;
    writeln!(out, "peak_live_size={}", stats.peak_live_size)
}
