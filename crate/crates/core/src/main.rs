use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use coopdss::bounds::{self, Constraint, Point};
use coopdss::codes::{wire, NodeContent, Scheme, SchemeKind, SchemeParams};
use coopdss::field::{Elem, ExtField, Field};
use coopdss::precode::SecretMessage;
use coopdss::secrecy::{self, SecrecyVerdict};
use coopdss::sim::{self, FailurePlan, HelperMode, SimConfig, SimTrace};

#[derive(Parser, Debug)]
#[command(name = "coopdss", version, about = "Secure cooperative regenerating codes")]
struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trade-off point, file size, secure size bound and NRBW.
    Bounds {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        l1: Option<usize>,
        #[arg(long)]
        l2: Option<usize>,
        #[arg(long)]
        point: Option<Point>,
    },
    /// NRBW table as CSV.
    Table {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        /// `eq` for d+t=n, `le` for d+t<=n.
        #[arg(long, default_value = "eq")]
        constraint: Constraint,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a secret file into one file per node.
    Encode {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        secret: PathBuf,
        #[arg(long, env = "COOPDSS_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the secret from node files given as `id:path`.
    Reconstruct {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, num_args = 1.., required = true)]
        nodes: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate failed nodes from the surviving node files.
    Repair {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, num_args = 1.., required = true)]
        nodes: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        failed: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        helpers: Option<Vec<usize>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run repair rounds and write the trace.
    Simulate {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, value_delimiter = ',')]
        e1: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        e2: Option<Vec<usize>>,
        #[arg(long, env = "COOPDSS_SEED")]
        seed: Option<u64>,
        /// Trace destination; stdout when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Measure what E1 and E2 learn about the secret.
    VerifySecrecy {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Take the scheme, eavesdroppers and repair history from a trace.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Failure rounds as `1,2;3,4`. By default every E2 node fails once
        /// together with its successors.
        #[arg(long)]
        plan: Option<String>,
        #[arg(long, value_delimiter = ',')]
        e1: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        e2: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Mode::Rank)]
        mode: Mode,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Rank,
    Bruteforce,
    Both,
}

#[derive(Args, Debug, Default)]
struct SchemeArgs {
    #[arg(long)]
    scheme: Option<SchemeKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    l1: Option<usize>,
    #[arg(long)]
    l2: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct SimArgs {
    #[arg(long)]
    rounds: Option<usize>,
    /// Failure rounds as `1,2;3,4`.
    #[arg(long)]
    plan: Option<String>,
    /// Draw failure sets at random instead of using a plan.
    #[arg(long)]
    plan_seed: Option<u64>,
    /// Draw helpers at random instead of the lowest ids.
    #[arg(long)]
    helper_seed: Option<u64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    #[serde(default)]
    scheme: SchemeSection,
    #[serde(default)]
    eavesdropper: EavesdropperSection,
    #[serde(default)]
    simulate: SimulateSection,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct SchemeSection {
    kind: Option<String>,
    point: Option<String>,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<usize>,
    t: Option<usize>,
    l1: Option<usize>,
    l2: Option<usize>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct EavesdropperSection {
    e1: Option<Vec<usize>>,
    e2: Option<Vec<usize>>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct SimulateSection {
    rounds: Option<usize>,
    plan: Option<Vec<Vec<usize>>>,
    plan_seed: Option<u64>,
    helper_seed: Option<u64>,
    trace: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

fn usage(msg: impl ToString) -> Failure {
    Failure::Usage(msg.to_string())
}

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Bounds { n, k, d, t, l1, l2, point } => cmd_bounds(&cfg, n, k, d, t, l1, l2, point),
        Command::Table { max_n, constraint, out } => cmd_table(max_n, constraint, out),
        Command::Encode { scheme, secret, seed, out } => cmd_encode(&cfg, &scheme, &secret, seed, &out),
        Command::Reconstruct { scheme, nodes, out } => cmd_reconstruct(&cfg, &scheme, &nodes, out),
        Command::Repair { scheme, nodes, failed, helpers, out } => {
            cmd_repair(&cfg, &scheme, &nodes, &failed, helpers, &out)
        }
        Command::Simulate { scheme, sim, e1, e2, seed, trace } => cmd_simulate(&cfg, &scheme, &sim, e1, e2, seed, trace),
        Command::VerifySecrecy { scheme, trace, plan, e1, e2, mode } => {
            cmd_verify(&cfg, &scheme, trace, plan, e1, e2, mode)
        }
    }
}

fn pick<T: Clone>(flag: Option<T>, file: &Option<T>, name: &str) -> Result<T, Failure> {
    flag.or_else(|| file.clone()).ok_or_else(|| usage(format!("missing --{name}")))
}

fn params(cfg: &FileConfig, a: &SchemeArgs) -> Result<SchemeParams, Failure> {
    let s = &cfg.scheme;
    let kind = match (a.scheme, &s.kind) {
        (Some(k), _) => k,
        (None, Some(name)) => name.parse().map_err(usage)?,
        (None, None) => return Err(usage("missing --scheme")),
    };
    Ok(SchemeParams::new(
        kind,
        pick(a.n, &s.n, "n")?,
        pick(a.k, &s.k, "k")?,
        pick(a.d, &s.d, "d")?,
        pick(a.t, &s.t, "t")?,
        a.l1.or(s.l1).unwrap_or(0),
        a.l2.or(s.l2).unwrap_or(0),
    ))
}

fn any_scheme_flag(a: &SchemeArgs) -> bool {
    a.scheme.is_some() || a.n.is_some() || a.k.is_some() || a.d.is_some() || a.t.is_some() || a.l1.is_some() || a.l2.is_some()
}

fn build(p: SchemeParams) -> Result<Scheme, Failure> {
    Scheme::new(p).map_err(usage)
}

/// `width` big-endian bytes per symbol, where `width` is the smallest byte
/// count holding every field element. Values outside the field are rejected.
fn pack(field: &ExtField, bytes: &[u8]) -> Result<Vec<Elem>, Failure> {
    let width = field.symbol_bytes();
    if bytes.len() % width != 0 {
        return Err(usage(format!("{} bytes is not a whole number of {width}-byte symbols", bytes.len())));
    }
    bytes
        .chunks(width)
        .map(|c| {
            let v = c.iter().fold(0u64, |acc, &b| (acc << 8) | b as u64);
            if field.contains(Elem(v)) {
                Ok(Elem(v))
            } else {
                Err(usage(format!("byte value {v:#x} is not a symbol of {field}")))
            }
        })
        .collect()
}

fn unpack(field: &ExtField, symbols: &[Elem]) -> Vec<u8> {
    let width = field.symbol_bytes();
    symbols.iter().flat_map(|s| s.0.to_be_bytes()[8 - width..].to_vec()).collect()
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn node_path(dir: &Path, id: usize) -> PathBuf {
    dir.join(format!("node_{id}.bin"))
}

fn write_nodes(scheme: &Scheme, dir: &Path, nodes: &[NodeContent]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for c in nodes {
        write(&node_path(dir, c.node_id), &wire::encode(scheme, std::slice::from_ref(c)))?;
    }
    Ok(())
}

/// Loads `id:path` node files. The scheme comes from the file headers and
/// must agree with any scheme flags given.
fn load_nodes(cfg: &FileConfig, a: &SchemeArgs, specs: &[String]) -> Result<(Scheme, Vec<NodeContent>), Failure> {
    let expected = if any_scheme_flag(a) || cfg.scheme.kind.is_some() { Some(params(cfg, a)?) } else { None };
    let mut scheme: Option<Scheme> = None;
    let mut nodes = Vec::new();
    for spec in specs {
        let (id, path) = spec.split_once(':').ok_or_else(|| usage(format!("expected id:path, got `{spec}`")))?;
        let id: usize = id.parse().map_err(|_| usage(format!("bad node id in `{spec}`")))?;
        let path = Path::new(path);
        let (s, contents) = wire::decode(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let [c]: [NodeContent; 1] =
            contents.try_into().map_err(|_| usage(format!("{}: expected exactly one node", path.display())))?;
        if c.node_id != id {
            return Err(usage(format!("{} holds node {}, not {id}", path.display(), c.node_id)));
        }
        if let Some(p) = expected {
            if *s.params() != p {
                return Err(usage(format!("{} was written for {}, not {p}", path.display(), s.params())));
            }
        }
        match &scheme {
            Some(prev) if prev.params() != s.params() => {
                return Err(usage(format!("{} was written for {}, others for {}", path.display(), s.params(), prev.params())))
            }
            Some(_) => {}
            None => scheme = Some(s),
        }
        nodes.push(c);
    }
    let scheme = match (scheme, expected) {
        (Some(s), _) => s,
        (None, Some(p)) => build(p)?,
        (None, None) => return Err(usage("no node files given")),
    };
    Ok((scheme, nodes))
}

fn parse_plan(s: &str) -> Result<Vec<Vec<usize>>, Failure> {
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split(',').map(|v| v.trim().parse().map_err(|_| usage(format!("bad failure plan `{s}`")))).collect())
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    cfg: &FileConfig,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<usize>,
    t: Option<usize>,
    l1: Option<usize>,
    l2: Option<usize>,
    point: Option<Point>,
) -> Outcome {
    let s = &cfg.scheme;
    let point = match (point, &s.point) {
        (Some(p), _) => p,
        (None, Some(p)) => p.parse().map_err(usage)?,
        (None, None) => Point::Mbcr,
    };
    let k = pick(k, &s.k, "k")? as i64;
    let d = pick(d, &s.d, "d")? as i64;
    let t = pick(t, &s.t, "t")? as i64;
    let l1 = l1.or(s.l1).unwrap_or(0) as i64;
    let l2 = l2.or(s.l2).unwrap_or(0) as i64;
    if let Some(n) = n.or(s.n) {
        if d + t > n as i64 {
            return Err(usage(format!("need d+t <= n, got d={d} t={t} n={n}")));
        }
    }
    if l1 + l2 >= k {
        return Err(usage(format!("need l1+l2 < k, got l1={l1} l2={l2} k={k}")));
    }
    if point == Point::Mbcr && l2 > 0 {
        return Err(usage("at the MBCR point every eavesdropper counts towards l1; pass l1=l1+l2"));
    }
    let p = bounds::point(point, k, d, t, true).map_err(usage)?;
    let ms = match point {
        Point::Mbcr => bounds::mbcr_secure_bound(k, d, t, l1),
        Point::Mscr => bounds::mscr_secure_bound(k, d, t, l1, l2),
    };
    let mut out = String::new();
    out.push_str(&format!(
        "point={} alpha={} beta={} beta_prime={} gamma={}\n",
        match point {
            Point::Mbcr => "mbcr",
            Point::Mscr => "mscr",
        },
        p.alpha,
        p.beta,
        p.beta_prime,
        p.gamma
    ));
    out.push_str(&format!("M={}\nMs={ms}\n", p.m));
    if ms > 0 {
        out.push_str(&format!("NRBW={}\n", bounds::render(p.gamma / bounds::Q::from_integer(ms), 4)));
    } else {
        out.push_str("NRBW=undefined\n");
    }
    print!("{out}");
    Ok(0)
}

fn cmd_table(max_n: usize, constraint: Constraint, out: Option<PathBuf>) -> Outcome {
    if max_n < 4 {
        return Err(usage("--max-n must be at least 4"));
    }
    let csv = bounds::nrbw_csv(&bounds::nrbw_table(max_n as i64, constraint));
    match out {
        Some(path) => write(&path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_encode(cfg: &FileConfig, a: &SchemeArgs, secret: &Path, seed: Option<u64>, out: &Path) -> Outcome {
    let scheme = build(params(cfg, a)?)?;
    let u = pack(scheme.field(), &read(secret)?)?;
    if u.len() != scheme.secret_len() {
        return Err(usage(format!("secret has {} symbols, the scheme stores {}", u.len(), scheme.secret_len())));
    }
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let nodes = scheme.encode_seeded(&SecretMessage(u), seed).map_err(usage)?;
    write_nodes(&scheme, out, &nodes)?;
    println!(
        "{}: wrote {} node files of {} symbols over {} to {}",
        scheme.params(),
        nodes.len(),
        scheme.alpha(),
        scheme.field(),
        out.display()
    );
    Ok(0)
}

fn cmd_reconstruct(cfg: &FileConfig, a: &SchemeArgs, specs: &[String], out: Option<PathBuf>) -> Outcome {
    let (scheme, nodes) = load_nodes(cfg, a, specs)?;
    let u = scheme.reconstruct(&nodes).map_err(usage)?;
    let bytes = unpack(scheme.field(), &u.0);
    match out {
        Some(path) => write(&path, &bytes)?,
        None => io::stdout().write_all(&bytes).map_err(|e| Failure::Io(format!("stdout: {e}")))?,
    }
    Ok(0)
}

fn cmd_repair(
    cfg: &FileConfig,
    a: &SchemeArgs,
    specs: &[String],
    failed: &[usize],
    helpers: Option<Vec<usize>>,
    out: &Path,
) -> Outcome {
    let (scheme, nodes) = load_nodes(cfg, a, specs)?;
    let survivors: Vec<NodeContent> = nodes.into_iter().filter(|c| !failed.contains(&c.node_id)).collect();
    let tr = match helpers {
        Some(h) => scheme.repair_with_helpers(failed, &h, &survivors),
        None => scheme.repair(failed, &survivors),
    }
    .map_err(usage)?;
    write_nodes(&scheme, out, &tr.results)?;
    let ids: Vec<String> = tr.failed.iter().map(|i| i.to_string()).collect();
    let hs: Vec<String> = tr.helpers.iter().map(|i| i.to_string()).collect();
    println!("repaired={} helpers={} bandwidth={}", ids.join(","), hs.join(","), tr.total_bandwidth());
    for &f in &tr.failed {
        println!("download node={f} symbols={}", tr.download(f));
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cfg: &FileConfig,
    a: &SchemeArgs,
    s: &SimArgs,
    e1: Option<Vec<usize>>,
    e2: Option<Vec<usize>>,
    seed: Option<u64>,
    trace: Option<PathBuf>,
) -> Outcome {
    let p = params(cfg, a)?;
    let fs_cfg = &cfg.simulate;
    let explicit = match &s.plan {
        Some(text) => Some(parse_plan(text)?),
        None => fs_cfg.plan.clone(),
    };
    let plan_seed = s.plan_seed.or(fs_cfg.plan_seed);
    let (plan, rounds) = match (explicit, plan_seed) {
        (Some(_), Some(_)) if s.plan.is_some() && s.plan_seed.is_some() => {
            return Err(usage("--plan and --plan-seed are mutually exclusive"))
        }
        (Some(sets), _) if s.plan_seed.is_none() => {
            let rounds = s.rounds.or(fs_cfg.rounds).unwrap_or(sets.len());
            (FailurePlan::Explicit(sets), rounds)
        }
        (_, Some(seed)) => (FailurePlan::Random { seed }, pick(s.rounds, &fs_cfg.rounds, "rounds")?),
        _ => return Err(usage("missing --plan or --plan-seed")),
    };
    let helpers = match s.helper_seed.or(fs_cfg.helper_seed) {
        Some(seed) => HelperMode::Random { seed },
        None => HelperMode::Lowest,
    };
    let config = SimConfig {
        params: p,
        rounds,
        plan,
        e1: e1.or_else(|| cfg.eavesdropper.e1.clone()).unwrap_or_default(),
        e2: e2.or_else(|| cfg.eavesdropper.e2.clone()).unwrap_or_default(),
        helpers,
        data_seed: seed.or(cfg.seed).unwrap_or(0),
        secret: None,
    };
    let scheme = build(p)?;
    let result = sim::run_with(&scheme, &config).map_err(usage)?;
    let text = result.to_text(scheme.field().symbol_bytes());
    let replay = sim::replay_check_with(&scheme, &result);
    let verdict = secrecy::rank_leakage(scheme.field(), &result.observation);
    let summary = format!(
        "rounds={} bandwidth={} final_equals_initial={} replay={} observed_rows={} leakage={}",
        result.rounds.len(),
        result.bandwidth.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        result.final_nodes == result.initial,
        if replay.ok() { "ok" } else { "mismatch" },
        result.observation.rows(),
        verdict.leakage_qunits
    );
    match trace.or_else(|| fs_cfg.trace.clone()) {
        Some(path) => {
            write(&path, text.as_bytes())?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(if replay.ok() { 0 } else { 1 })
}

/// One round per E2 node: the node and its `t-1` cyclic successors.
fn default_plan(n: usize, t: usize, e2: &[usize]) -> Vec<Vec<usize>> {
    e2.iter().map(|&e| (0..t).map(|j| (e - 1 + j) % n + 1).collect()).collect()
}

fn report(v: &SecrecyVerdict) -> String {
    format!(
        "method={} leakage={} lemma_cond_entropy={} lemma_recoverable={}",
        v.method, v.leakage_qunits, v.lemma_cond_entropy_ok, v.lemma_recoverable_ok
    )
}

fn cmd_verify(
    cfg: &FileConfig,
    a: &SchemeArgs,
    trace: Option<PathBuf>,
    plan: Option<String>,
    e1: Option<Vec<usize>>,
    e2: Option<Vec<usize>>,
    mode: Mode,
) -> Outcome {
    let (scheme, e1, e2, history) = match trace {
        Some(path) => {
            if any_scheme_flag(a) || plan.is_some() {
                return Err(usage("--trace carries the scheme and repair history; drop the scheme and plan flags"));
            }
            let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
            let (scheme, tr): (Scheme, SimTrace) = SimTrace::parse(&text).map_err(usage)?;
            let history = tr.history();
            (scheme, e1.unwrap_or(tr.e1), e2.unwrap_or(tr.e2), history)
        }
        None => {
            let scheme = build(params(cfg, a)?)?;
            let e1 = e1.or_else(|| cfg.eavesdropper.e1.clone()).unwrap_or_default();
            let e2 = e2.or_else(|| cfg.eavesdropper.e2.clone()).unwrap_or_default();
            let p = scheme.params();
            if let Some(&bad) = e2.iter().find(|&&i| i == 0 || i > p.n) {
                return Err(usage(format!("node id {bad} is out of range")));
            }
            let history: Vec<(Vec<usize>, Vec<usize>)> = match plan.map(|s| parse_plan(&s)).transpose()? {
                Some(sets) => sets.into_iter().map(|f| (f.clone(), scheme.default_helpers(&f))).collect(),
                None => default_plan(p.n, p.t, &e2).into_iter().map(|f| (f.clone(), scheme.default_helpers(&f))).collect(),
            };
            (scheme, e1, e2, history)
        }
    };
    let rounds = history.len();
    let history = if e2.is_empty() { vec![] } else { history };
    let mut verdicts = Vec::new();
    if matches!(mode, Mode::Rank | Mode::Both) {
        let obs = scheme.observation_from_history(&e1, &e2, &history).map_err(usage)?;
        verdicts.push(secrecy::rank_leakage(scheme.field(), &obs));
    }
    if matches!(mode, Mode::Bruteforce | Mode::Both) {
        verdicts.push(secrecy::brute_force_leakage(&scheme, &e1, &e2, &history).map_err(usage)?);
    }
    println!("scheme={} e1={:?} e2={:?} rounds={}", scheme.params(), e1, e2, rounds);
    for v in &verdicts {
        println!("{}", report(v));
    }
    let agree = verdicts.windows(2).all(|w| w[0].leakage_qunits == w[1].leakage_qunits);
    if !agree {
        println!("verdict=disagreement");
        return Ok(1);
    }
    let secure = verdicts.iter().all(SecrecyVerdict::is_secure);
    println!("verdict={}", if secure { "secure" } else { "leak" });
    Ok(if secure { 0 } else { 1 })
}
