//! `grig`: command-line front end for the Grigorchuk family, the universal
//! group on the 6-ary tree, growth balls, marked-group distances and
//! stabilizer IRS sampling.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grig_core::enumerate::{
    enumerate_ball, equal_in, rist_witness, schreier, BallOptions, ContextGroup, GroupContext, TreeVertex,
    DEFAULT_ELEMENT_CAP, DEFAULT_HASH_LEVEL,
};
use grig_core::gomega::Order;
use grig_core::irs::{
    conj_invariance, cylinder_irs, lifted_separation, sample_irs, separate_stabilizers, DEFAULT_DEPTH_CAP,
};
use grig_core::marked::{agreement, MarkedPoint};
use grig_core::universal::{psi_agrees, verify_branch_identities};
use grig_core::{BinVertex, Error, GrigorchukGroup, HexVertex, Letter, OmegaSeq, Ray, UniversalGroup, Word};

#[derive(Parser, Debug)]
#[command(name = "grig", version, about = "Tree-automorphism calculus for G_omega and the universal group U")]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// key=value file; each line becomes `--key value` and overrides the
    /// same flag given on the command line.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Word problem: is the word trivial in the context group?
    ///
    /// Exercises the contracting word-problem solution in G_omega and U
    /// (for example BCD = 1 in U).
    Word(WordArgs),
    /// Growth function: gamma(k) = size of the ball of radius k, k = 0..n.
    ///
    /// Exercises the growth sandwich for diagonal groups over Lambda families.
    Growth(GrowthArgs),
    /// Run a verification suite; exit 1 naming the first failing identity.
    Verify(VerifyArgs),
    /// Stabilizer IRS of boundary rays in G_omega.
    Irs(IrsArgs),
    /// Schreier graph of a tree level (DOT or JSON).
    ///
    /// Exercises level transitivity of G_omega on the binary tree.
    Schreier(SchreierArgs),
    /// Relator agreement radius and distance 2^-m between two marked groups.
    ///
    /// Exercises convergence of G_omega in the space of marked groups.
    Marked(MarkedArgs),
    /// Search for an element of the rigid stabilizer of a vertex.
    ///
    /// Exercises the branch property: nontrivial elements supported below
    /// a vertex.
    Rist(RistArgs),
}

#[derive(Args, Debug)]
struct WordArgs {
    /// omega:<prefix>|<period>, universal, diag:<seq>,<seq>,… or lambda:r1,r2,…
    ctx: String,
    /// Word over a, b, c, d; `e` for the empty word.
    word: String,
    /// Compare with this word instead of testing triviality.
    #[arg(long)]
    equal: Option<String>,
    /// Also report the element order, searching multiples up to this cap.
    #[arg(long, value_name = "CAP")]
    order: Option<u64>,
}

#[derive(Args, Debug)]
struct GrowthArgs {
    ctx: String,
    /// Ball radius.
    n: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tree level used for action fingerprints.
    #[arg(long, default_value_t = DEFAULT_HASH_LEVEL)]
    hash_level: usize,
    /// Stop after this many distinct elements.
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    element_cap: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Sequence used by the psi and schreier suites.
    #[arg(long, default_value = "|012")]
    omega: String,
    /// Tree depth for the psi suite, number of levels for the schreier suite.
    #[arg(long, default_value_t = 8)]
    depth: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    /// Involutions a^2 = b^2 = c^2 = d^2 = 1 and bcd = 1 in U and G_omega.
    Relations,
    /// Nine commutator identities whose sections carry t, v or w on one coordinate of U.
    Branch,
    /// The map from U onto G_omega sends each generator to its namesake on the tree.
    Psi,
    /// G_omega acts transitively on each level of the binary tree.
    Schreier,
}

#[derive(Args, Debug)]
struct IrsArgs {
    #[command(subcommand)]
    command: IrsCommand,
}

#[derive(Subcommand, Debug)]
enum IrsCommand {
    /// Sample rays, fingerprint their stabilizers, write JSON lines.
    ///
    /// Empirical version of the stabilizer IRS, the pushforward of the
    /// uniform measure on the boundary.
    Sample(SampleArgs),
    /// Total variation between the IRS and its conjugate by a word.
    ///
    /// Exercises conjugation invariance of the stabilizer IRS.
    Invariance(InvarianceArgs),
    /// Find a word in exactly one of two stabilizers.
    ///
    /// With --eta, the rays live over two sequences and the search
    /// exercises distinctness of the IRS for non-equivalent sequences;
    /// otherwise it exercises injectivity of the stabilizer map.
    Separate(SeparateArgs),
}

#[derive(Args, Debug)]
struct FingerprintOpts {
    /// Sequence defining G_omega.
    #[arg(long, default_value = "|012")]
    omega: String,
    /// Random prefix length of each ray; the tail is 1 repeated.
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Longest word in the fingerprint.
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    opts: FingerprintOpts,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InvarianceArgs {
    #[command(flatten)]
    opts: FingerprintOpts,
    /// Conjugating word.
    #[arg(long, default_value = "a")]
    g: String,
    /// Required unless --cylinder is given.
    #[arg(long, required_unless_present = "cylinder")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Enumerate every prefix of length --depth instead of sampling.
    #[arg(long)]
    cylinder: bool,
}

#[derive(Args, Debug)]
struct SeparateArgs {
    #[arg(long, default_value = "|012")]
    omega: String,
    /// Second sequence; its ray is --rho.
    #[arg(long)]
    eta: Option<String>,
    /// Ray over omega, as <prefix>|<period>.
    #[arg(long, default_value = "|1")]
    xi: String,
    #[arg(long, default_value = "|1")]
    rho: String,
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Args, Debug)]
struct SchreierArgs {
    ctx: String,
    level: usize,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MarkedArgs {
    first: String,
    second: String,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    /// Write the per-length CSV here; the summary line still goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RistArgs {
    /// omega:… or universal.
    ctx: String,
    /// Binary path like 01, or 6-ary path like 00.12 (<bit><trit> per letter).
    vertex: String,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    #[arg(long, default_value_t = 10)]
    depth_cap: usize,
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match with_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Appends the `--config` file's entries as flags so that they win over
/// earlier occurrences.
fn with_config(mut argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, arg) in argv.iter().enumerate() {
        let Some(s) = arg.to_str() else { continue };
        if s == "--" {
            break;
        }
        if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        } else if s == "--config" {
            path = argv.get(i + 1).map(PathBuf::from);
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got {line:?}", n + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match value {
            "true" => argv.push(format!("--{key}").into()),
            "false" => {}
            _ => argv.push(format!("--{key}={value}").into()),
        }
    }
    Ok(argv)
}

fn run(command: Command) -> Run {
    match command {
        Command::Word(a) => cmd_word(a),
        Command::Growth(a) => cmd_growth(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Irs(a) => match a.command {
            IrsCommand::Sample(a) => cmd_irs_sample(a),
            IrsCommand::Invariance(a) => cmd_irs_invariance(a),
            IrsCommand::Separate(a) => cmd_irs_separate(a),
        },
        Command::Schreier(a) => cmd_schreier(a),
        Command::Marked(a) => cmd_marked(a),
        Command::Rist(a) => cmd_rist(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Run {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_word(a: WordArgs) -> Run {
    let ctx = GroupContext::parse(&a.ctx)?;
    let w = Word::parse(&a.word)?;
    match &a.equal {
        Some(other) => {
            let v = Word::parse(other)?;
            println!("{}", if equal_in(&ctx, &w, &v) { "equal" } else { "not equal" });
        }
        None => {
            let trivial = ContextGroup::new(ctx.clone()).is_trivial(&w);
            println!("{}", if trivial { "trivial" } else { "nontrivial" });
        }
    }
    if let Some(cap) = a.order {
        let GroupContext::Single(omega) = &ctx else {
            return Err(Failure::Input(format!("--order needs an omega: context, got {}", a.ctx)));
        };
        match GrigorchukGroup::new(omega.clone()).order(&w, cap) {
            Order::Finite(n) => println!("order {n}"),
            Order::Unknown => println!("order unknown (cap {cap})"),
        }
    }
    Ok(())
}

fn cmd_growth(a: GrowthArgs) -> Run {
    let ctx = GroupContext::parse(&a.ctx)?;
    let opts = BallOptions {
        hash_level: a.hash_level,
        element_cap: a.element_cap,
    };
    let ball = enumerate_ball(&ContextGroup::new(ctx), a.n, opts);
    emit(a.out.as_deref(), &ball.table.to_csv())
}

fn cmd_verify(a: VerifyArgs) -> Run {
    match a.suite {
        Suite::Relations => verify_relations(&a.omega),
        Suite::Branch => {
            let report = verify_branch_identities();
            for c in &report.checks {
                println!("{} {} {}", c.name, c.formula, if c.failure.is_none() { "pass" } else { "FAIL" });
            }
            println!("{}/{} pass", report.passed_count(), report.checks.len());
            match report.first_failure() {
                None => Ok(()),
                Some(c) => Err(Failure::Verify(format!(
                    "{} {}: {}",
                    c.name,
                    c.formula,
                    c.failure.clone().unwrap_or_default()
                ))),
            }
        }
        Suite::Psi => {
            let omega = OmegaSeq::parse(&a.omega)?;
            let mut agree = 0;
            let mut first = None;
            for x in Letter::ALL {
                if psi_agrees(x, &omega, a.depth) {
                    agree += 1;
                } else if first.is_none() {
                    first = Some(x);
                }
            }
            println!("{agree}/4 generators agree (omega {omega}, depth {})", a.depth);
            match first {
                None => Ok(()),
                Some(x) => Err(Failure::Verify(format!("generator {} disagrees", x.to_char()))),
            }
        }
        Suite::Schreier => {
            let ctx = GroupContext::Single(OmegaSeq::parse(&a.omega)?);
            for level in 1..=a.depth {
                let components = schreier(&ctx, level).components;
                println!("level {level}: {components} component(s)");
                if components != 1 {
                    return Err(Failure::Verify(format!("level {level} is not transitive")));
                }
            }
            Ok(())
        }
    }
}

fn verify_relations(omega: &str) -> Run {
    let omega = OmegaSeq::parse(omega)?;
    let g = GrigorchukGroup::new(omega.clone());
    let u = UniversalGroup::new();
    // Unreduced, so the solver sees the relator itself.
    let raw = |s: &str| Word::reduce(s.chars().filter_map(Letter::from_char));
    let mut count = 0;
    for rel in ["aa", "bb", "cc", "dd", "bcd"] {
        for (name, trivial) in [("U", u.is_trivial(&raw(rel))), ("G_omega", g.is_trivial(&raw(rel)))] {
            if !trivial {
                return Err(Failure::Verify(format!("{rel} = 1 fails in {name}")));
            }
            count += 1;
        }
    }
    for gen in ["a", "b", "c", "d"] {
        if u.is_trivial(&raw(gen)) {
            return Err(Failure::Verify(format!("{gen} is trivial in U")));
        }
    }
    println!("{count}/10 relations hold (omega {omega}); generators nontrivial in U");
    Ok(())
}

fn parse_ray(text: &str) -> Result<Ray, Failure> {
    Ok(Ray::parse(text)?)
}

fn cmd_irs_sample(a: SampleArgs) -> Run {
    let omega = OmegaSeq::parse(&a.opts.omega)?;
    let irs = sample_irs(&omega, a.samples, a.opts.depth, a.opts.max_len, a.opts.depth_cap, a.seed)?;
    emit(a.out.as_deref(), &irs.to_json_lines())?;
    if a.out.is_some() {
        println!(
            "samples={} undecided_fraction={} decided_within_prefix={}",
            irs.samples.len(),
            irs.undecided_fraction(),
            irs.decided_within_prefix()
        );
    }
    Ok(())
}

fn cmd_irs_invariance(a: InvarianceArgs) -> Run {
    let omega = OmegaSeq::parse(&a.opts.omega)?;
    let g = Word::parse(&a.g)?;
    let irs = if a.cylinder {
        cylinder_irs(&omega, a.opts.depth, a.opts.max_len, a.opts.depth_cap)
    } else {
        // clap enforces the seed when --cylinder is absent.
        let seed = a.seed.unwrap_or_default();
        sample_irs(&omega, a.samples, a.opts.depth, a.opts.max_len, a.opts.depth_cap, seed)?
    };
    let r = conj_invariance(&irs, &g);
    println!(
        "g={} tv={} coordinates_used={} coordinates_masked={}",
        g, r.tv, r.coordinates_used, r.coordinates_masked
    );
    Ok(())
}

fn cmd_irs_separate(a: SeparateArgs) -> Run {
    let omega = OmegaSeq::parse(&a.omega)?;
    let xi = parse_ray(&a.xi)?;
    let rho = parse_ray(&a.rho)?;
    let found = match &a.eta {
        Some(eta) => {
            let eta = OmegaSeq::parse(eta)?;
            lifted_separation(&omega, &eta, &xi, &rho, a.max_len, a.depth_cap)?
        }
        None => separate_stabilizers(&omega, &xi, &rho, a.max_len, a.depth_cap)?,
    };
    match found {
        Some(w) => {
            println!("witness {w}");
            Ok(())
        }
        None => Err(Failure::Verify(format!("no separating word up to length {}", a.max_len))),
    }
}

fn cmd_schreier(a: SchreierArgs) -> Run {
    let ctx = GroupContext::parse(&a.ctx)?;
    let graph = schreier(&ctx, a.level);
    let text = match a.format {
        GraphFormat::Dot => graph.to_dot(),
        GraphFormat::Json => graph.to_json(),
    };
    emit(a.out.as_deref(), &text)
}

fn cmd_marked(a: MarkedArgs) -> Run {
    let p = MarkedPoint::new(GroupContext::parse(&a.first)?);
    let q = MarkedPoint::new(GroupContext::parse(&a.second)?);
    let agr = agreement(&p, &q, a.max_len);
    match &a.out {
        Some(path) => emit(Some(path), &agr.to_csv())?,
        None => print!("{}", agr.to_csv()),
    }
    match &agr.witness {
        Some(w) => println!("{} witness={w}", agr.summary()),
        None => println!("{}", agr.summary()),
    }
    Ok(())
}

fn cmd_rist(a: RistArgs) -> Run {
    let ctx = GroupContext::parse(&a.ctx)?;
    let vertex = match &ctx {
        GroupContext::Universal => TreeVertex::Hex(HexVertex::parse(&a.vertex)?),
        _ => TreeVertex::Bin(BinVertex::parse(&a.vertex)?),
    };
    match rist_witness(&ctx, &vertex, a.max_len, a.depth_cap)? {
        Some(w) => println!("witness {w}"),
        None => println!("no witness up to length {}", a.max_len),
    }
    Ok(())
}
