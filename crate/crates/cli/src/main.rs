use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use twostruct::corpus::{first_prime_subset, random_prime_instances, synth_instance, synthesized_corpus, sweep, Regime};
use twostruct::format::{graph_to_g, parse_vertex_list, parse_with_limit, to_2s, vertex_list};
use twostruct::halfgraph::build_h2n;
use twostruct::modular::is_prime;
use twostruct::outside::{epsilon_sets, Caps, OutsideReport};
use twostruct::synth::{build_partially_critical, random_prime, ComponentSpec, SynthSpec};
use twostruct::theorems::{describe_instance, reconstruct, run_check, Instance, TheoremReport, CHECK_NAMES};
use twostruct::{TwoStructure, VertexSet};

#[derive(Parser)]
#[command(name = "twostruct", version, about = "Analyze and verify finite 2-structures around a prime substructure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest ε subset size to enumerate.
    #[arg(long, global = true, default_value_t = 6)]
    max_eps: usize,
    /// Largest accepted vertex count.
    #[arg(long, global = true, default_value_t = 24)]
    max_n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to PATH, or to stdout with `-`.
    #[arg(long, global = true, value_name = "PATH|-")]
    json: Option<String>,
    /// Suppress the text summary.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Args)]
struct InputArgs {
    /// Structure file in `.2s`, `.g` or `.t` format.
    #[arg(long)]
    input: PathBuf,
    /// X as a comma list, or `@file` holding one.
    #[arg(long)]
    x: String,
}

#[derive(Subcommand)]
enum Command {
    /// Outside partition, outside graph, components and ε sets.
    Analyze(InputArgs),
    /// Run one named check, or `all`.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CHECK_NAMES))]
        theorem: String,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Write a structure and a designated X.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        /// Structure output path; stdout when omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// Where to write X as a comma list.
        #[arg(long, global = true)]
        x_out: Option<PathBuf>,
    },
    /// Describe σ and rebuild it from the description.
    Roundtrip(InputArgs),
    /// Run every check over a generated corpus.
    Sweep {
        /// Synthesized instances per regime.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Random prime instances.
        #[arg(long, default_value_t = 100)]
        primes: usize,
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// The half graph H_2n.
    HalfGraph {
        #[arg(long)]
        n: usize,
    },
    /// Synthesize from a JSON spec whose `base` is a structure file path.
    PartialCritical {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Rejection-sampled prime structure.
    RandomPrime {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        max_tries: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Graph,
    Tournament,
    Mixed,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Graph => Regime::Graph,
            RegimeArg::Tournament => Regime::Tournament,
            RegimeArg::Mixed => Regime::Mixed,
        }
    }
}

#[derive(Deserialize)]
struct SpecFile {
    base: PathBuf,
    k: usize,
    components: Vec<ComponentSpec>,
}

struct Output {
    report: Value,
    summary: String,
    code: u8,
}

fn read_structure(path: &Path, max_n: usize) -> Result<TwoStructure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_with_limit(&text, max_n).with_context(|| format!("parsing {}", path.display()))
}

fn read_x(spec: &str, n: usize) -> Result<VertexSet> {
    let text = match spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => spec.to_string(),
    };
    let x = parse_vertex_list(&text)?;
    if let Some(v) = x.max().filter(|&v| v >= n) {
        bail!("vertex {v} of X is out of range for {n} vertices");
    }
    Ok(x)
}

fn load(input: &InputArgs, max_n: usize) -> Result<(TwoStructure, VertexSet)> {
    let s = read_structure(&input.input, max_n)?;
    let x = read_x(&input.x, s.n())?;
    Ok((s, x))
}

fn caps(cli: &Cli) -> Caps {
    Caps { max_eps: cli.max_eps, ..Caps::default() }
}

fn verdict_code(reports: &[TheoremReport]) -> u8 {
    if reports.iter().all(|r| r.is_consistent()) {
        0
    } else {
        2
    }
}

fn analyze(cli: &Cli, input: &InputArgs) -> Result<Output> {
    let (s, x) = load(input, cli.max_n)?;
    let inst = Instance::with_caps(&s, x, caps(cli))?;
    let comps = inst.components()?.to_vec();
    let outside = OutsideReport::new(inst.partition(), inst.gamma(), comps);
    let max_size = cli.max_eps.min(inst.outside.len());
    let eps = epsilon_sets(&s, x, max_size, &inst.caps)?;
    let summary = format!(
        "n={} |X|={} prime={} ext={} blocks={} Γ edges={} components={} ε sets (size <= {max_size})={}",
        s.n(),
        x.len(),
        inst.sigma_prime(),
        outside.ext,
        outside.blocks.len(),
        outside.gamma_edges.len(),
        outside.components.len(),
        eps.len()
    );
    let report = json!({
        "n": s.n(),
        "k": s.k(),
        "x": x,
        "sigma_prime": inst.sigma_prime(),
        "x_critical": inst.x_critical(),
        "outside": outside,
        "epsilon": { "max_size": max_size, "sets": eps },
    });
    Ok(Output { report, summary, code: 0 })
}

fn verify(cli: &Cli, theorem: &str, input: &InputArgs) -> Result<Output> {
    let (s, x) = load(input, cli.max_n)?;
    let inst = Instance::with_caps(&s, x, caps(cli))?;
    let reports = run_check(&inst, theorem)?;
    let summary = reports
        .iter()
        .map(|r| format!("{}: {}", r.theorem, json!(r.verdict).as_str().unwrap_or_default()))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output { code: verdict_code(&reports), report: json!({ "reports": reports }), summary })
}

fn roundtrip(cli: &Cli, input: &InputArgs) -> Result<Output> {
    let (s, x) = load(input, cli.max_n)?;
    let inst = Instance::with_caps(&s, x, caps(cli))?;
    let bundle = describe_instance(&inst)?;
    let rebuilt = reconstruct(&bundle)?;
    let same = rebuilt == s;
    let summary = if same { "identical" } else { "different" }.to_string();
    Ok(Output { report: json!({ "identical": same, "bundle": bundle }), summary, code: if same { 0 } else { 2 } })
}

/// The least proper prime subset, or all of V when none exists and σ is prime.
fn default_x(s: &TwoStructure) -> Result<VertexSet> {
    match first_prime_subset(s) {
        Some(x) => Ok(x),
        None if is_prime(s) => Ok(s.vertices()),
        None => bail!("the generated structure has no prime substructure"),
    }
}

fn generate(cli: &Cli, kind: &GenerateKind, out: Option<&Path>, x_out: Option<&Path>) -> Result<Output> {
    let (s, x, text) = match kind {
        GenerateKind::HalfGraph { n } => {
            let g = build_h2n(*n);
            let s = g.to_two_structure();
            let x = default_x(&s)?;
            (s, x, graph_to_g(&g))
        }
        GenerateKind::PartialCritical { spec } => {
            let raw = fs::read_to_string(spec).with_context(|| format!("reading {}", spec.display()))?;
            let file: SpecFile = serde_json::from_str(&raw).with_context(|| format!("parsing {}", spec.display()))?;
            let base_path = spec.parent().unwrap_or(Path::new(".")).join(&file.base);
            let base = read_structure(&base_path, cli.max_n)?;
            let built = build_partially_critical(&SynthSpec { base, k: file.k, components: file.components })?;
            let text = to_2s(&built.sigma);
            (built.sigma, built.x, text)
        }
        GenerateKind::RandomPrime { n, k, max_tries } => {
            let s = random_prime(*n, *k, cli.seed, *max_tries)?;
            let x = default_x(&s)?;
            let text = to_2s(&s);
            (s, x, text)
        }
    };
    if s.n() > cli.max_n {
        bail!("generated structure has {} vertices, above --max-n {}", s.n(), cli.max_n);
    }
    match out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None if cli.json.as_deref() != Some("-") => print!("{text}"),
        None => {}
    }
    if let Some(path) = x_out {
        fs::write(path, format!("{}\n", vertex_list(x))).with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = format!("n={} k={} x={}", s.n(), s.k(), vertex_list(x));
    Ok(Output { report: json!({ "n": s.n(), "k": s.k(), "x": x, "structure": s }), summary, code: 0 })
}

fn run_sweep(cli: &Cli, count: usize, primes: usize, regime: Option<RegimeArg>) -> Result<Output> {
    let regimes: Vec<Regime> = match regime {
        Some(r) => vec![r.into()],
        None => Regime::ALL.to_vec(),
    };
    let mut instances = Vec::new();
    let mut stats = Vec::new();
    for (i, &r) in regimes.iter().enumerate() {
        let (built, st) = synthesized_corpus(r, count, cli.seed.wrapping_add(1_000_000 * i as u64));
        stats.push(json!({ "regime": r, "stats": st }));
        instances.extend(built.iter().enumerate().map(|(j, (_, pc))| synth_instance(format!("{r:?}-{j}").to_lowercase(), pc)));
    }
    instances.extend(random_prime_instances(primes, cli.seed));
    let c = caps(cli);
    let rows = sweep(&instances, |inst| {
        let reports = Instance::with_caps(&inst.sigma, inst.x, c).and_then(|i| run_check(&i, "all"));
        match reports {
            Ok(rs) => {
                let bad: Vec<&str> = rs.iter().filter(|r| !r.is_consistent()).map(|r| r.theorem.as_str()).collect();
                json!({ "id": inst.name, "n": inst.sigma.n(), "checks": rs.len(), "counterexamples": bad })
            }
            Err(e) => json!({ "id": inst.name, "n": inst.sigma.n(), "error": e.to_string() }),
        }
    });
    let cex = rows.iter().filter(|r| r["counterexamples"].as_array().is_some_and(|a| !a.is_empty())).count();
    let errors = rows.iter().filter(|r| r.get("error").is_some()).count();
    let summary = format!("{} instances, {cex} with counterexamples, {errors} errors", rows.len());
    let code = if cex > 0 {
        2
    } else if errors > 0 {
        1
    } else {
        0
    };
    Ok(Output { report: json!({ "corpus": stats, "instances": rows }), summary, code })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Analyze(input) => analyze(cli, input),
        Command::Verify { theorem, input } => verify(cli, theorem, input),
        Command::Roundtrip(input) => roundtrip(cli, input),
        Command::Generate { kind, out, x_out } => generate(cli, kind, out.as_deref(), x_out.as_deref()),
        Command::Sweep { count, primes, regime } => run_sweep(cli, *count, *primes, *regime),
    }
}

fn emit(cli: &Cli, out: &Output) -> Result<()> {
    if let Some(target) = &cli.json {
        let text = serde_json::to_string_pretty(&out.report)? + "\n";
        if target == "-" {
            std::io::stdout().write_all(text.as_bytes())?;
        } else {
            fs::write(target, text).with_context(|| format!("writing {target}"))?;
        }
    }
    if !cli.quiet && cli.json.as_deref() != Some("-") {
        println!("{}", out.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| emit(&cli, &out).map(|_| out.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let post = e
                .downcast_ref::<twostruct::Error>()
                .is_some_and(|e| matches!(e, twostruct::Error::PostVerificationFailed(_)));
            ExitCode::from(if post { 2 } else { 1 })
        }
    }
}
