//! Command-line front end. [`run`] parses arguments, dispatches one verb and
//! returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::correlation::{best_correlated, find_correlated, EventFamily, SearchMode};
use crate::extraction::{
    brute_force_subgrid, extract_per_level, proof_hypotheses, split_and_extract, ExtractMode,
};
use crate::family::{brute_force_common_witness, common_witness, enumerate_family, rank_report};
use crate::workbench::{
    bound_report, gen_planted, gen_random_levels, read_instance, read_witness, write_witness,
    Encoding, Instance, WitnessFile,
};
use crate::{
    BigNatural, Bounds, Budget, Error, ExactRational, GridShape, LogBase, PointSet, Result,
};

#[derive(Parser, Debug)]
#[command(
    name = "product-density",
    version,
    about = "Exact bounds and subgrid search for dense sets in finite products"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for parallel scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Search-node budget.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Bit-length budget for big numbers.
    #[arg(long, global = true)]
    max_bits: Option<u64>,
    /// Cell budget for grids.
    #[arg(long, global = true)]
    max_cells: Option<u64>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Evaluate the threshold functions exactly.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Generate a random or planted instance file.
    Gen(GenArgs),
    /// Extract a subgrid from one level.
    Extract(ExtractArgs),
    /// Extract a subgrid from every level independently.
    PerLevel(PerLevelArgs),
    /// Cut the levels at a coordinate and stabilize a prefix pattern.
    Split(SplitArgs),
    /// Find one subgrid shared by at least t levels.
    Witness(WitnessArgs),
    /// Enumerate the family of jointly extractable level sets and print its rank.
    Rank(RankArgs),
    /// Check a witness file against an instance.
    Verify(VerifyArgs),
    /// Tower and T-bound comparison tables.
    Report(ReportArgs),
    /// Brute-force counterparts of the search verbs.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

fn rational(s: &str) -> std::result::Result<ExactRational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn natural(s: &str) -> std::result::Result<BigNatural, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not a natural number"))
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// Σ(θ, ε, k).
    Sigma {
        #[arg(long, value_parser = rational)]
        theta: ExactRational,
        #[arg(long, value_parser = rational)]
        eps: ExactRational,
        #[arg(long)]
        k: u64,
    },
    /// T_ε(m_0..m_k).
    T {
        #[arg(long, value_parser = rational)]
        eps: ExactRational,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
    },
    /// Q^r_{θ,ε}(m_0..m_k).
    Q {
        #[arg(long, value_parser = rational)]
        theta: ExactRational,
        #[arg(long, value_parser = rational)]
        eps: ExactRational,
        #[arg(long, value_parser = natural)]
        r: BigNatural,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
    },
    /// V_δ(m_0..m_k; n_0..n_{k−1}).
    V {
        #[arg(long, value_parser = rational)]
        delta: ExactRational,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = natural)]
        sizes: Vec<BigNatural>,
        /// Evaluate every dyadic pair instead of the dominating one.
        #[arg(long)]
        no_prune: bool,
    },
    /// The chain f_0, f_1, ….
    F {
        #[arg(long, value_parser = rational)]
        delta: ExactRational,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
    },
    /// A_n(x).
    Ackermann {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = natural)]
        x: BigNatural,
    },
    /// s_δ, the least s with 2^(1−s) ≤ δ.
    SDelta {
        #[arg(long, value_parser = rational)]
        delta: ExactRational,
    },
    /// p_ε = ⌈log(1/ε)⌉.
    PEps {
        #[arg(long, value_parser = rational)]
        eps: ExactRational,
        #[arg(long, value_enum, default_value_t = Base::Two)]
        log_base: Base,
    },
    /// ε′ for the given targets.
    EpsPrime {
        #[arg(long, value_parser = rational)]
        eps: ExactRational,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Base {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    Natural,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    k0: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Defaults to 2 for every coordinate.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<usize>,
    /// Density of random levels.
    #[arg(long, value_parser = rational, default_value = "1/2")]
    delta: ExactRational,
    /// Level indices; defaults to every level.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<usize>,
    /// Plant a common subgrid in every level.
    #[arg(long)]
    planted: bool,
    /// Noise density added around the planted subgrid.
    #[arg(long, value_parser = rational, default_value = "0")]
    noise: ExactRational,
    /// Where to write the planted witness.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EncodingArg::Auto)]
    encoding: EncodingArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EncodingArg {
    Auto,
    Points,
    Bitset,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Proof,
    Exhaustive,
}

impl From<ModeArg> for ExtractMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Proof => ExtractMode::Proof,
            ModeArg::Exhaustive => ExtractMode::Exhaustive,
        }
    }
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Overrides the instance's targets (one per coordinate from k0).
    #[arg(long, value_delimiter = ',')]
    targets: Vec<usize>,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Level to extract from; defaults to the largest.
    #[arg(long)]
    level: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Proof)]
    mode: ModeArg,
    /// Density to assume; defaults to the instance's delta.
    #[arg(long, value_parser = rational)]
    eps: Option<ExactRational>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PerLevelArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Proof)]
    mode: ModeArg,
    #[arg(long, value_parser = rational)]
    eps: Option<ExactRational>,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    cut: usize,
    #[arg(long, value_parser = rational)]
    theta: ExactRational,
    #[arg(long, value_parser = rational)]
    eps: Option<ExactRational>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Write the witness of the largest kept level that succeeded.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Cut coordinate i; defaults to k0.
    #[arg(long)]
    cut: Option<usize>,
    /// Indices of Γ over [k0, cut); defaults to the full prefix.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<usize>>,
    /// Largest member size to enumerate; defaults to the number of levels.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    witness: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, value_parser = rational)]
    delta: ExactRational,
    #[arg(long, value_delimiter = ',', required = true)]
    targets: Vec<u64>,
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Lexicographically least subgrid of one level by enumeration.
    Subgrid {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Largest set of levels sharing a subgrid, by enumeration.
    Common {
        #[command(flatten)]
        input: InstanceArgs,
    },
    /// Best k-fold intersection among the fibers of one level over its first coordinate.
    Correlation {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rational)]
        theta: ExactRational,
    },
}

/// Result of one verb: human text, machine JSON and an exit code.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Output {
            text: text.into(),
            json,
            code: 0,
        }
    }
}

/// Runs one command and returns its exit code: 0 success, 2 not found,
/// 3 invalid input, 4 budget exceeded.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_with(argv, &mut stdout, &mut stderr)
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // A pool already installed by an earlier call in this process is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let mut budget = Budget::default();
    if let Some(n) = cli.max_nodes {
        budget = budget.with_nodes(n);
    }
    if let Some(n) = cli.max_bits {
        budget = budget.with_bits(n);
    }
    if let Some(n) = cli.max_cells {
        budget = budget.with_cells(n);
    }
    match dispatch(cli.verb, &budget) {
        Ok(o) => {
            let _ = match cli.format {
                Format::Text => writeln!(out, "{}", o.text.trim_end()),
                Format::Json => writeln!(out, "{}", o.json),
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if cli.format == Format::Json {
                let kind = match e {
                    Error::NotFound(_) => "not_found",
                    Error::BudgetExceeded(_) => "budget_exceeded",
                    _ => "invalid_input",
                };
                let _ = writeln!(out, "{}", json!({"error": kind, "message": e.to_string()}));
            }
            e.exit_code()
        }
    }
}

fn dispatch(verb: Verb, budget: &Budget) -> Result<Output> {
    match verb {
        Verb::Bounds(cmd) => bounds(cmd, budget),
        Verb::Gen(a) => gen(a, budget),
        Verb::Extract(a) => extract(a, budget),
        Verb::PerLevel(a) => per_level(a, budget),
        Verb::Split(a) => split(a, budget),
        Verb::Witness(a) => witness(a, budget),
        Verb::Rank(a) => rank(a, budget),
        Verb::Verify(a) => verify(a),
        Verb::Report(a) => {
            let r = bound_report(&a.delta, &a.targets, budget)?;
            let json = serde_json::to_value(&r).expect("report serializes");
            let mut json = json;
            json["passes"] = json!(r.passes());
            json["log_base_matters"] = json!(r.log_base_matters());
            Ok(Output::ok(r.to_table(), json))
        }
        Verb::Oracle(cmd) => oracle(cmd, budget),
    }
}

fn value(verb: &str, v: impl ToString) -> Output {
    let s = v.to_string();
    Output::ok(s.clone(), json!({ "verb": verb, "value": s }))
}

fn bounds(cmd: BoundsCmd, budget: &Budget) -> Result<Output> {
    let b = Bounds::with_budget(*budget);
    Ok(match cmd {
        BoundsCmd::Sigma { theta, eps, k } => value("sigma", b.sigma(&theta, &eps, k)?),
        BoundsCmd::T { eps, targets } => value("t", b.t_bound(&eps, &targets)?),
        BoundsCmd::Q {
            theta,
            eps,
            r,
            targets,
        } => value("q", b.q_bound(&theta, &eps, &r, &targets)?),
        BoundsCmd::V {
            delta,
            targets,
            sizes,
            no_prune,
        } => {
            let b = Bounds {
                prune: !no_prune,
                ..b
            };
            value("v", b.v_delta(&delta, &targets, &sizes)?)
        }
        BoundsCmd::F { delta, targets } => {
            let fs: Vec<String> = b
                .f_chain(&delta, &targets)?
                .iter()
                .map(|f| f.to_string())
                .collect();
            Output::ok(fs.join("\n"), json!({ "verb": "f", "values": fs }))
        }
        BoundsCmd::Ackermann { n, x } => value("ackermann", b.ackermann(n, &x)?),
        BoundsCmd::SDelta { delta } => value("s-delta", crate::bounds::s_delta(&delta)?),
        BoundsCmd::PEps { eps, log_base } => {
            let log_base = match log_base {
                Base::Two => LogBase::Two,
                Base::Natural => LogBase::Natural,
            };
            value("p-eps", Bounds { log_base, ..b }.p_eps(&eps)?)
        }
        BoundsCmd::EpsPrime { eps, targets } => value("eps-prime", b.eps_prime(&eps, &targets)?),
    })
}

fn load(input: &InstanceArgs) -> Result<(Instance, Vec<usize>)> {
    let inst = read_instance(&input.instance)?;
    let mut targets = inst.absolute_targets();
    if !input.targets.is_empty() {
        if input.targets.len() != inst.targets.len() {
            return Err(Error::domain(format!(
                "--targets needs {} entries, got {}",
                inst.targets.len(),
                input.targets.len()
            )));
        }
        targets[inst.k0()..].copy_from_slice(&input.targets);
    }
    Ok((inst, targets))
}

fn pick_level(inst: &Instance, level: Option<usize>) -> Result<(usize, &PointSet)> {
    let k = match level {
        Some(k) => k,
        None => *inst
            .levels
            .levels()
            .keys()
            .last()
            .ok_or_else(|| Error::domain("instance has no levels"))?,
    };
    let d = inst
        .levels
        .get(k)
        .ok_or_else(|| Error::domain(format!("level {k} is not in the instance")))?;
    Ok((k, d))
}

fn witness_text(file: &WitnessFile) -> String {
    let mut s = format!("levels {:?}\n", file.levels);
    if let Some(g) = &file.gamma_points {
        s += &format!("gamma {g:?}\n");
    }
    for (j, i) in file.subsets.iter().enumerate() {
        s += &format!("I_{} = {:?}\n", file.cut + j, i);
    }
    s
}

fn emit_witness(file: &WitnessFile, out: Option<&Path>, extra: Value) -> Result<Output> {
    if let Some(path) = out {
        write_witness(file, path)?;
    }
    let mut json = serde_json::to_value(file).expect("witness serializes");
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Ok(Output::ok(witness_text(file), json))
}

fn gen(a: GenArgs, budget: &Budget) -> Result<Output> {
    let base = GridShape::new(a.k0, a.sizes)?;
    let targets = if a.targets.is_empty() {
        vec![2; base.dims()]
    } else {
        a.targets
    };
    let keys = if a.levels.is_empty() {
        (base.start() + 1..=base.end()).collect()
    } else {
        a.levels
    };
    let encoding = match a.encoding {
        EncodingArg::Auto => Encoding::Auto,
        EncodingArg::Points => Encoding::Points,
        EncodingArg::Bitset => Encoding::Bitset,
    };
    let (inst, planted) = if a.planted {
        let (inst, w) = gen_planted(a.seed, &base, &targets, &a.noise, &keys, budget)?;
        (inst, Some(w))
    } else {
        (
            gen_random_levels(a.seed, &base, &targets, &a.delta, &keys, budget)?,
            None,
        )
    };
    std::fs::write(&a.out, inst.to_json(encoding) + "\n")?;
    if let (Some(w), Some(path)) = (&planted, &a.witness_out) {
        write_witness(&WitnessFile::new(w, None, inst.levels.keys()), path)?;
    }
    let densities: Vec<Value> = inst
        .densities()
        .iter()
        .map(|(k, d)| json!({"k": k, "density": d}))
        .collect();
    let text = inst
        .densities()
        .iter()
        .map(|(k, d)| format!("level {k}: density {d}"))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::ok(
        format!("wrote {}\n{text}", a.out.display()),
        json!({"out": a.out, "delta": inst.delta, "levels": densities}),
    ))
}

fn extract(a: ExtractArgs, budget: &Budget) -> Result<Output> {
    let (inst, targets) = load(&a.input)?;
    let (k, d) = pick_level(&inst, a.level)?;
    let eps = a.eps.unwrap_or_else(|| inst.delta.clone());
    let targets = &targets[inst.k0()..k];
    let mode: ExtractMode = a.mode.into();
    let mut notes = Vec::new();
    if mode == ExtractMode::Proof {
        let h = proof_hypotheses(d, targets, &eps, budget)?;
        if !h.density_ok {
            notes.push(format!("level density {} is below eps {eps}", d.density()));
        }
        if !h.below_bound.is_empty() {
            notes.push(format!(
                "coordinates {:?} are below the size bound",
                h.below_bound
            ));
        }
    }
    let w = crate::extraction::extract_subgrid(d, targets, &eps, mode, budget)?;
    let file = WitnessFile::new(&w, None, vec![k]);
    let mut o = emit_witness(&file, a.out.as_deref(), json!({"notes": notes}))?;
    for n in notes {
        o.text += &format!("note: {n}\n");
    }
    Ok(o)
}

fn per_level(a: PerLevelArgs, budget: &Budget) -> Result<Output> {
    let (inst, targets) = load(&a.input)?;
    let eps = a.eps.unwrap_or_else(|| inst.delta.clone());
    let results = extract_per_level(&inst.levels, &targets, &eps, a.mode.into(), budget);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut code = 0;
    for (k, r) in &results {
        match r {
            Ok(w) => {
                text += &format!("level {k}: {:?}\n", w.subsets);
                rows.push(json!({"k": k, "I": w.subsets}));
            }
            Err(e) => {
                code = code.max(e.exit_code());
                text += &format!("level {k}: {e}\n");
                rows.push(json!({"k": k, "error": e.to_string()}));
            }
        }
    }
    Ok(Output {
        text,
        json: json!({ "levels": rows }),
        code,
    })
}

fn split(a: SplitArgs, budget: &Budget) -> Result<Output> {
    let (inst, targets) = load(&a.input)?;
    let eps = a.eps.unwrap_or_else(|| inst.delta.clone());
    let levels = inst.levels.above(a.cut);
    let skipped: Vec<usize> = inst
        .levels
        .keys()
        .into_iter()
        .filter(|&k| k <= a.cut)
        .collect();
    let res = split_and_extract(
        &levels,
        a.cut,
        &a.theta,
        &eps,
        &targets,
        a.mode.into(),
        budget,
    )?;
    let gamma: Vec<usize> = res.split.gamma.indices().collect();
    let mut text = String::new();
    if !skipped.is_empty() {
        text += &format!("levels {skipped:?} do not extend past the cut and were left out\n");
    }
    text += &format!(
        "gamma {:?} (density {})\nkept levels {:?}\n",
        gamma,
        res.split.gamma.density(),
        res.split.kept
    );
    let mut rows = Vec::new();
    let mut best = None;
    for (k, r) in &res.witnesses {
        match r {
            Ok(w) => {
                text += &format!("level {k}: {:?}\n", w.subsets);
                rows.push(json!({"k": k, "I": w.subsets}));
                best = Some((k, w));
            }
            Err(e) => {
                text += &format!("level {k}: {e}\n");
                rows.push(json!({"k": k, "error": e.to_string()}));
            }
        }
    }
    let Some((&k, w)) = best else {
        return Err(Error::not_found(
            "no kept level admits a subgrid after the split",
        ));
    };
    if let Some(path) = &a.out {
        write_witness(&WitnessFile::new(w, Some(&res.split.gamma), vec![k]), path)?;
    }
    Ok(Output::ok(
        text,
        json!({"cut": a.cut, "gamma_points": gamma, "kept": res.split.kept, "skipped": skipped, "levels": rows}),
    ))
}

fn witness(a: WitnessArgs, budget: &Budget) -> Result<Output> {
    let (inst, targets) = load(&a.input)?;
    let cw = common_witness(&inst.levels, &targets, &inst.delta, a.t, budget)?;
    let file = WitnessFile::new(&cw.witness, None, cw.kept.clone());
    emit_witness(
        &file,
        a.out.as_deref(),
        json!({"delta_dense": cw.delta_dense}),
    )
}

fn rank(a: RankArgs, budget: &Budget) -> Result<Output> {
    let (inst, targets) = load(&a.input)?;
    let base = inst.levels.base();
    let cut = a.cut.unwrap_or(base.start());
    let prefix = base.slice(base.start(), cut)?;
    let gamma = match a.gamma {
        Some(points) => PointSet::from_indices(prefix, points)?,
        None => PointSet::full(prefix),
    };
    let cap = a.cap.unwrap_or(inst.levels.levels().len());
    let fam = enumerate_family(cut, &gamma, &inst.levels, &targets, cap, budget)?;
    let r = rank_report(&fam)?;
    let mut text = format!("members {}\nrank {}\n", fam.len(), r.end_extension);
    if r.differ() {
        text += &format!("rank under inclusion {}\n", r.inclusion);
    }
    let members: Vec<&Vec<usize>> = fam.members().collect();
    Ok(Output::ok(
        text,
        json!({
            "rank": r.end_extension,
            "rank_inclusion": r.inclusion,
            "hereditary": fam.is_hereditary(),
            "members": members,
        }),
    ))
}

fn verify(a: VerifyArgs) -> Result<Output> {
    let inst = read_instance(&a.instance)?;
    let w = read_witness(&a.witness)?;
    let ok = w.verify(&inst)?;
    Ok(Output {
        text: if ok { "valid" } else { "invalid" }.to_string(),
        json: json!({ "valid": ok }),
        code: if ok { 0 } else { 2 },
    })
}

fn oracle(cmd: OracleCmd, budget: &Budget) -> Result<Output> {
    match cmd {
        OracleCmd::Subgrid { input, level } => {
            let (inst, targets) = load(&input)?;
            let (k, d) = pick_level(&inst, level)?;
            let w = brute_force_subgrid(d, &targets[inst.k0()..k], budget)?.ok_or_else(|| {
                Error::not_found("no subgrid of the requested sizes lies inside the level")
            })?;
            emit_witness(&WitnessFile::new(&w, None, vec![k]), None, json!({}))
        }
        OracleCmd::Common { input } => {
            let (inst, targets) = load(&input)?;
            let (w, kept) = brute_force_common_witness(&inst.levels, &targets, budget)?
                .ok_or_else(|| Error::not_found("no level admits a subgrid"))?;
            let w = w.truncated(*kept.last().expect("nonempty"));
            emit_witness(&WitnessFile::new(&w, None, kept), None, json!({}))
        }
        OracleCmd::Correlation {
            input,
            level,
            k,
            theta,
        } => {
            let (inst, _) = load(&input)?;
            let (_, d) = pick_level(&inst, level)?;
            let fibers = crate::extraction::fibers(d);
            let fam = EventFamily::from_point_sets(fibers.iter())?;
            let (best, measure) = best_correlated(&fam, k, budget)?;
            let found = find_correlated(&fam, k, &theta, SearchMode::Exhaustive, budget);
            let threshold = theta.pow_checked(&(k as u64).into(), budget)?;
            let agree = found.is_ok() == (measure >= threshold);
            Ok(Output::ok(
                format!("best {best:?} with measure {measure}\nthreshold {threshold}\nsearch agrees: {agree}"),
                json!({"best": best, "measure": measure, "threshold": threshold, "agree": agree}),
            ))
        }
    }
}
