use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use czcp::czcp::{czcs_width, is_gcp};
use czcp::data::{example3, example5, example6, table1_expected, table1_pair};
use czcp::simulator::{noise_variance, MatrixSource, MsePoint};
use czcp::training::{baseline_matrix, parse_matrix_csv, proposed_matrix, verify_optimal, BaselineKind, BaselineSpec};
use czcp::{
    construction1, construction2, czcp_width, czcs_check, czcs_from_czcp, davis_jedwab_pair, run_sweep, search_max_z,
    ChannelModel, Construction1Variant, CzcpCertificate, DjParams, Error, ExactComplex, Gbf, MseReport, QarySequence,
    Scalar, SearchTask, SeedVariant, SequencePair, SimConfig, TrainingMatrix,
};

use crate::output::Report;
use crate::DEFAULT_SEED;

/// Violations listed in a result document; the full count is always given.
const MAX_LISTED_VIOLATIONS: usize = 16;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Non-blank lines not starting with `#`, parsed as sequences.
fn parse_sequences(text: &str) -> czcp::Result<Vec<QarySequence>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(QarySequence::parse_line(line, i + 1)?);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no sequences in file".into(),
        });
    }
    Ok(out)
}

fn read_sequences(path: &Path) -> Result<Vec<QarySequence>> {
    parse_sequences(&read(path)?).with_context(|| path.display().to_string())
}

fn pair_json(p: &SequencePair) -> Value {
    json!({ "a": p.a.to_string(), "b": p.b.to_string() })
}

fn certificate_json(c: &CzcpCertificate) -> Value {
    json!({
        "n": c.n,
        "z": c.z,
        "perfect": c.perfect,
        "a": c.a.to_string(),
        "b": c.b.to_string(),
        "aac_sum_squared": c.aac_sum_squared(),
        "acc_sum_squared": c.acc_sum_squared(),
        "aac_sum_profile": c.aac_sum_profile,
        "acc_sum_profile": c.acc_sum_profile,
    })
}

/// One way of naming a pair on the command line.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Two-line sequence file (`+-+-` or `q=4:0,1,...` per line)
    #[arg(long)]
    pair: Option<PathBuf>,
    /// Packaged table pair of this length
    #[arg(long)]
    table: Option<usize>,
    /// Packaged worked example
    #[arg(long, value_parser = ["3", "5", "6"])]
    example: Option<String>,
    /// First sequence, given inline together with --b
    #[arg(long, requires = "b", allow_hyphen_values = true)]
    a: Option<String>,
    /// Second sequence
    #[arg(long, requires = "a", allow_hyphen_values = true)]
    b: Option<String>,
}

impl PairArgs {
    fn given(&self) -> usize {
        [
            self.pair.is_some(),
            self.table.is_some(),
            self.example.is_some(),
            self.a.is_some(),
        ]
        .iter()
        .filter(|&&g| g)
        .count()
    }

    fn params(&self) -> Value {
        json!({
            "pair": self.pair.as_ref().map(|p| p.display().to_string()),
            "table": self.table,
            "example": self.example,
            "a": self.a,
            "b": self.b,
        })
    }

    fn resolve(&self) -> Result<SequencePair> {
        if self.given() != 1 {
            bail!("give exactly one of --pair, --table, --example or --a/--b");
        }
        if let Some(path) = &self.pair {
            let seqs = read_sequences(path)?;
            if seqs.len() != 2 {
                bail!("{}: expected two sequences, found {}", path.display(), seqs.len());
            }
            return Ok(SequencePair::new(seqs[0].clone(), seqs[1].clone())?);
        }
        if let Some(n) = self.table {
            return table1_pair(n).ok_or_else(|| anyhow!("no packaged table pair of length {n}"));
        }
        if let Some(e) = &self.example {
            return Ok(match e.as_str() {
                "3" => example3().pair,
                "5" => example5().pair,
                _ => example6().pair,
            });
        }
        let (a, b) = (self.a.as_deref().unwrap_or(""), self.b.as_deref().unwrap_or(""));
        Ok(SequencePair::parse(a, b)?)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|_| anyhow!("invalid list entry '{t}'")))
        .collect()
}

// ---- construct ----

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(subcommand)]
    method: Method,
}

#[derive(Subcommand, Debug)]
enum Method {
    /// Perfect pair of length 2^mu from Golay-function parameters with pi(1) = mu
    Construction2(DjArgs),
    /// Perfect pair of length 2M from a Golay pair (e, f) of length M
    Construction1(C1Args),
    /// Golay complementary pair from Golay-function parameters
    Gcp(DjArgs),
    /// Phase sequence of a generalized Boolean function
    Gbf {
        /// `q=<q> mu=<mu> quad=(i,j,c);... lin=c1,...,cmu const=c`
        spec: String,
    },
}

#[derive(Args, Debug)]
struct DjArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    mu: usize,
    /// Permutation of 1..=mu, comma separated [default: mu,1,2,...,mu-1]
    #[arg(long)]
    pi: Option<String>,
    /// Linear coefficients w_1..w_mu [default: all zero]
    #[arg(long)]
    w: Option<String>,
    #[arg(long, default_value_t = 0)]
    w0: u32,
    /// Offset of the second sequence
    #[arg(long, default_value_t = 0)]
    w_prime: u32,
}

impl DjArgs {
    fn params(&self) -> Result<DjParams> {
        let pi = match &self.pi {
            Some(s) => parse_list(s)?,
            None => std::iter::once(self.mu).chain(1..self.mu).collect(),
        };
        let w = match &self.w {
            Some(s) => parse_list(s)?,
            None => vec![0; self.mu],
        };
        Ok(DjParams {
            q: self.q,
            mu: self.mu,
            pi,
            w,
            w0: self.w0,
            w_prime: self.w_prime,
        })
    }
}

#[derive(Args, Debug)]
struct C1Args {
    /// First seed sequence
    #[arg(long, allow_hyphen_values = true)]
    e: String,
    /// Second seed sequence
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, default_value_t = 0)]
    u1: u32,
    #[arg(long, default_value_t = 0)]
    u2: u32,
    #[arg(long, default_value_t = 0)]
    u: u32,
    /// Concatenation pattern 1..=4
    #[arg(long, default_value_t = 1)]
    variant: u8,
}

fn constructed(mut report: Report, pair: &SequencePair, want_perfect: bool) -> Report {
    let cert = czcp_width(pair);
    let gcp = is_gcp(pair);
    report.note(format!("a = {}", pair.a));
    report.note(format!("b = {}", pair.b));
    if want_perfect {
        report.check(
            "perfect",
            cert.perfect,
            format!("N={} Z={} (N/2 = {})", cert.n, cert.z, cert.n / 2),
        );
    } else {
        report.check("golay", gcp, format!("N={} Z={}", cert.n, cert.z));
    }
    report.result = json!({ "pair": pair_json(pair), "gcp": gcp, "certificate": certificate_json(&cert) });
    report
}

pub fn construct(args: ConstructArgs) -> Result<Report> {
    match args.method {
        Method::Construction2(d) => {
            let p = d.params()?;
            let report = Report::new("construct", json!({ "method": "construction2", "dj": p }));
            let pair = construction2(&p)?;
            Ok(constructed(report, &pair, true))
        }
        Method::Gcp(d) => {
            let p = d.params()?;
            let report = Report::new("construct", json!({ "method": "gcp", "dj": p }));
            let pair = davis_jedwab_pair(&p)?;
            Ok(constructed(report, &pair, false))
        }
        Method::Construction1(c) => {
            let report = Report::new(
                "construct",
                json!({ "method": "construction1", "e": c.e, "f": c.f, "u1": c.u1, "u2": c.u2, "u": c.u, "variant": c.variant }),
            );
            let e: QarySequence = c.e.parse()?;
            let f: QarySequence = c.f.parse()?;
            let pair = construction1(&e, &f, c.u1, c.u2, c.u, Construction1Variant::from_index(c.variant)?)?;
            Ok(constructed(report, &pair, true))
        }
        Method::Gbf { spec } => {
            let mut report = Report::new("construct", json!({ "method": "gbf", "spec": spec }));
            let g: Gbf = spec.parse()?;
            let s = g.phase_sequence();
            report.note(format!("sequence = {s}"));
            report.result =
                json!({ "q": g.q(), "mu": g.mu(), "truth_table": g.truth_table(), "sequence": s.to_string() });
            Ok(report)
        }
    }
}

// ---- search ----

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Sequence length (even)
    #[arg(long)]
    n: usize,
    /// Start the descent from this width [default: N/2]
    #[arg(long)]
    z: Option<usize>,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Leading bits fixed per parallel subtask
    #[arg(long, default_value_t = 8)]
    split_depth: usize,
    /// Enumerate all 2^(2N) pairs instead of canonical classes (N <= 12)
    #[arg(long)]
    naive: bool,
    /// Number of witnesses to report
    #[arg(long, default_value_t = 1)]
    witnesses: usize,
}

pub fn search(args: SearchArgs) -> Result<Report> {
    let mut task = SearchTask::new(args.n);
    task.target_z = args.z;
    task.workers = args.workers;
    task.split_depth = args.split_depth;
    task.symmetry_reduction = !args.naive;
    task.witness_limit = args.witnesses;
    let mut report = Report::new("search", serde_json::to_value(&task)?);
    let res = search_max_z(&task)?;
    report.note(format!("N={} z_max={} ({} nodes)", res.n, res.z_max, res.explored));
    for w in &res.witnesses {
        report.note(format!("witness {} {}", w.a, w.b));
    }
    if args.z.is_none() {
        if let Some(&(_, z)) = table1_expected().iter().find(|r| r.0 == args.n) {
            report.check(
                "table",
                res.z_max == z,
                format!("expected z_max={z}, found {}", res.z_max),
            );
        }
    }
    let witness_ok = res.witnesses.iter().all(|w| czcp_width(w).z == res.z_max);
    report.check("witnesses", witness_ok, format!("{} re-certified", res.witnesses.len()));
    report.result = json!({
        "n": res.n,
        "z_max": res.z_max,
        "witnesses": res.witnesses.iter().map(pair_json).collect::<Vec<_>>(),
        "explored": res.explored,
    });
    Ok(report)
}

// ---- verify ----

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Sequence files (two lines: a pair, more: a set) or matrix CSV exports
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Expected width; a file passes only if its width equals it
    #[arg(long)]
    z: Option<usize>,
    /// Channel memory for matrix files [default: the value in the metadata, else 0]
    #[arg(long)]
    lambda: Option<usize>,
}

/// `X^H X = E I` summary for one matrix.
fn optimality<T: Scalar>(m: &TrainingMatrix<T>, lambda: usize) -> Result<Value> {
    let r = verify_optimal(m, lambda)?;
    Ok(json!({
        "lambda": lambda,
        "exact": T::EXACT,
        "optimal": r.optimal,
        "pcc_optimal": r.pcc_optimal,
        "energy": r.energy,
        "violation_count": r.violations.len(),
        "violations": &r.violations[..r.violations.len().min(MAX_LISTED_VIOLATIONS)],
    }))
}

/// The same matrix with Gaussian-integer entries, when every entry is one.
fn exact_copy(m: &TrainingMatrix<f64>) -> Option<TrainingMatrix<i64>> {
    let integral = |x: f64| x.fract() == 0.0 && x.abs() < 1e15;
    let rows: Option<Vec<Vec<ExactComplex>>> = m
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| (integral(v.re) && integral(v.im)).then(|| ExactComplex::new(v.re as i64, v.im as i64)))
                .collect()
        })
        .collect();
    TrainingMatrix::from_rows(rows?, m.layout.clone()).ok()
}

fn verify_matrix(path: &Path, text: &str, lambda: Option<usize>, report: &mut Report) -> Result<Value> {
    let (m, meta) = parse_matrix_csv(text).with_context(|| path.display().to_string())?;
    let lambda = lambda.or(meta.lambda).unwrap_or(0);
    let opt = match exact_copy(&m) {
        Some(exact) => optimality(&exact, lambda)?,
        None => optimality(&m, lambda)?,
    };
    let ok = opt["optimal"] == json!(true);
    report.check(
        &path.display().to_string(),
        ok,
        format!(
            "{}x{} matrix, E={}, lambda={lambda}: {} ({} violations)",
            m.n_t(),
            m.l(),
            opt["energy"],
            if ok { "optimal" } else { "not optimal" },
            opt["violation_count"]
        ),
    );
    Ok(json!({ "file": path.display().to_string(), "type": "matrix", "meta": meta, "optimality": opt }))
}

fn verify_sequences(path: &Path, text: &str, z: Option<usize>, report: &mut Report) -> Result<Value> {
    let seqs = parse_sequences(text).with_context(|| path.display().to_string())?;
    let name = path.display().to_string();
    match seqs.len() {
        1 => bail!("{name}: a single sequence has no pair or set width"),
        2 => {
            let pair = SequencePair::new(seqs[0].clone(), seqs[1].clone()).with_context(|| name.clone())?;
            let cert = czcp_width(&pair);
            let ok = z.map_or(cert.is_czcp(), |z| cert.z == z);
            let expect = z.map(|z| format!(", expected {z}")).unwrap_or_default();
            report.check(
                &name,
                ok,
                format!(
                    "pair N={} Z={}{expect}{}",
                    cert.n,
                    cert.z,
                    if cert.perfect { " (perfect)" } else { "" }
                ),
            );
            Ok(json!({ "file": name, "type": "pair", "certificate": certificate_json(&cert) }))
        }
        m => {
            let width = czcs_width(&seqs).with_context(|| name.clone())?;
            let ok = z.map_or(width >= 1, |z| width == z);
            let expect = z.map(|z| format!(", expected {z}")).unwrap_or_default();
            report.check(&name, ok, format!("set of {m}, N={} Z={width}{expect}", seqs[0].len()));
            Ok(json!({
                "file": name,
                "type": "set",
                "members": seqs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "z": width,
            }))
        }
    }
}

pub fn verify(args: VerifyArgs) -> Result<Report> {
    let files: Vec<String> = args.files.iter().map(|f| f.display().to_string()).collect();
    let mut report = Report::new("verify", json!({ "files": files, "z": args.z, "lambda": args.lambda }));
    let mut results = Vec::new();
    for path in &args.files {
        let text = read(path)?;
        let entry = if text.trim_start().starts_with("# {") {
            verify_matrix(path, &text, args.lambda, &mut report)?
        } else {
            verify_sequences(path, &text, args.z, &mut report)?
        };
        results.push(entry);
    }
    report.result = json!({ "files": results });
    Ok(report)
}

// ---- czcs ----

#[derive(Args, Debug)]
pub struct CzcsArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Set size (even)
    #[arg(long, default_value_t = 4)]
    m: usize,
}

pub fn czcs(args: CzcsArgs) -> Result<Report> {
    let mut report = Report::new("czcs", json!({ "source": args.pair.params(), "m": args.m }));
    let pair = args.pair.resolve()?;
    let set = czcs_from_czcp(&pair, args.m)?;
    let holds = czcs_check(&set)?;
    let width = czcs_width(&set.members)?;
    report.check(
        "set",
        holds && width == set.z,
        format!("M={} N={} pair Z={} set Z={width}", args.m, pair.len(), set.z),
    );
    report.result = json!({
        "members": set.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "pair_z": set.z,
        "set_z": width,
        "holds": holds,
    });
    Ok(report)
}

// ---- train-matrix ----

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Baseline matrix instead of a pair: gcp16, mseq31, barker13, gold31, zc32, random, random-block
    #[arg(long)]
    baseline: Option<String>,
    /// Seed characteristic matrix
    #[arg(long, default_value = "psi1")]
    variant: String,
    /// Transmit antennas
    #[arg(long, default_value_t = 4)]
    n_t: usize,
    /// Sub-blocks per row
    #[arg(long, default_value_t = 2)]
    j: usize,
    /// Non-zeros per row of the random baselines
    #[arg(long, default_value_t = 32)]
    q_len: usize,
    /// Row energy the baselines are normalized to
    #[arg(long, default_value_t = 32.0)]
    energy: f64,
}

impl MatrixArgs {
    fn params(&self) -> Value {
        json!({
            "source": self.pair.params(),
            "baseline": self.baseline,
            "variant": self.variant,
            "n_t": self.n_t,
            "j": self.j,
            "q_len": self.q_len,
            "energy": self.energy,
        })
    }

    fn spec(&self, kind: BaselineKind) -> BaselineSpec {
        BaselineSpec {
            kind,
            n_t: self.n_t,
            q_len: self.q_len,
            energy: Some(self.energy),
        }
    }

    fn baseline_kind(&self) -> Result<Option<BaselineKind>> {
        if self.baseline.is_some() && self.pair.given() > 0 {
            bail!("--baseline cannot be combined with a pair source");
        }
        Ok(match &self.baseline {
            Some(b) => Some(b.parse()?),
            None => None,
        })
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Channel memory to certify the matrix for
    #[arg(long)]
    lambda: Option<usize>,
    /// Seed for the random baselines
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn export<T: Scalar>(
    m: &TrainingMatrix<T>,
    lambda: Option<usize>,
    report: &mut Report,
    certify: bool,
) -> Result<Value> {
    report.csv = Some(m.to_csv(lambda));
    let opt = match lambda {
        Some(l) => {
            let o = optimality(m, l)?;
            let ok = o["optimal"] == json!(true);
            let detail = format!(
                "lambda={l}: {} ({} violations)",
                if ok { "optimal" } else { "not optimal" },
                o["violation_count"]
            );
            if certify {
                report.check("gram", ok, detail);
            } else {
                report.note(format!("gram {detail}"));
            }
            o
        }
        None => Value::Null,
    };
    report.note(format!(
        "{}x{} matrix ({}), row energy {}",
        m.n_t(),
        m.l(),
        m.layout.seed_kind,
        m.row_energy(0).to_f64()
    ));
    Ok(json!({ "layout": m.layout, "optimality": opt }))
}

pub fn train_matrix(args: TrainArgs) -> Result<Report> {
    let mut params = args.matrix.params();
    params["lambda"] = json!(args.lambda);
    params["seed"] = json!(args.seed);
    let mut report = Report::new("train-matrix", params);
    report.result = match args.matrix.baseline_kind()? {
        Some(kind) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let m = baseline_matrix(&args.matrix.spec(kind), &mut rng)?;
            export(&m, args.lambda, &mut report, false)?
        }
        None => {
            let pair = args.matrix.pair.resolve()?;
            let variant: SeedVariant = args.matrix.variant.parse()?;
            if 4 % pair.q() == 0 {
                let m = proposed_matrix::<i64>(&pair, variant, args.matrix.n_t, args.matrix.j)?;
                export(&m, args.lambda, &mut report, true)?
            } else {
                let m = proposed_matrix::<f64>(&pair, variant, args.matrix.n_t, args.matrix.j)?;
                export(&m, args.lambda, &mut report, true)?
            }
        }
    };
    Ok(report)
}

// ---- simulate ----

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Matrix CSV export instead of a pair or baseline
    #[arg(long)]
    matrix_file: Option<PathBuf>,
    /// `key=value` file with ebno_grid, trials, rng_seed, n_r, workers
    #[arg(long)]
    config: Option<PathBuf>,
    /// EbNo grid in dB: a comma list or start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    ebno: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Random seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    /// Receive antennas
    #[arg(long)]
    n_r: Option<usize>,
    /// Worker threads; 0 uses every core
    #[arg(long)]
    workers: Option<usize>,
    /// Channel path counts: a comma list or start:stop
    #[arg(long, default_value = "1")]
    paths: String,
}

fn parse_paths(s: &str) -> Result<Vec<usize>> {
    let v = match s.split_once(':') {
        Some((a, b)) => {
            let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
            (a..=b).collect()
        }
        None => parse_list(s)?,
    };
    if v.is_empty() || v.contains(&0) {
        bail!("path counts must be positive, got '{s}'");
    }
    Ok(v)
}

fn sim_config(args: &SimulateArgs) -> Result<SimConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = read(path)?;
            text.parse::<SimConfig>().with_context(|| path.display().to_string())?
        }
        None => SimConfig {
            rng_seed: DEFAULT_SEED,
            ..SimConfig::default()
        },
    };
    if let Some(g) = &args.ebno {
        cfg.set("ebno_grid", g)?;
    }
    cfg.trials = args.trials.unwrap_or(cfg.trials);
    cfg.rng_seed = args.seed.unwrap_or(cfg.rng_seed);
    cfg.n_r = args.n_r.unwrap_or(cfg.n_r);
    cfg.workers = args.workers.unwrap_or(cfg.workers);
    cfg.validate()?;
    Ok(cfg)
}

/// Runs each path count; a fixed matrix that cannot resolve a count yields failed points.
pub fn sweep_paths(
    source: &MatrixSource,
    name: &str,
    n_t: usize,
    paths: &[usize],
    cfg: &SimConfig,
) -> Result<MseReport> {
    let energy = match source {
        MatrixSource::Fixed(m) => m.row_energy(0),
        MatrixSource::Random(s) => s.energy.unwrap_or(s.q_len as f64),
    };
    let mut out = MseReport::default();
    for &p in paths {
        let model = ChannelModel::new(n_t, p - 1)?;
        match run_sweep(source, name, &model, cfg) {
            Ok(r) => out.points.extend(r.points),
            Err(Error::IllConditioned { .. }) => out.points.extend(
                cfg.ebno_grid
                    .iter()
                    .map(|&db| MsePoint::failed(db, p, name, noise_variance(db) / energy, cfg.trials)),
            ),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

pub fn simulate(args: SimulateArgs) -> Result<Report> {
    let cfg = sim_config(&args)?;
    let paths = parse_paths(&args.paths)?;
    let mut params = args.matrix.params();
    params["matrix_file"] = json!(args.matrix_file.as_ref().map(|p| p.display().to_string()));
    params["paths"] = json!(paths);
    params["config"] = serde_json::to_value(&cfg)?;
    let mut report = Report::new("simulate", params);

    let (name, n_t, source) = if let Some(path) = &args.matrix_file {
        if args.matrix.pair.given() > 0 || args.matrix.baseline.is_some() {
            bail!("--matrix-file cannot be combined with another matrix source");
        }
        let (m, meta) = parse_matrix_csv(&read(path)?).with_context(|| path.display().to_string())?;
        (meta.seed_kind.clone(), m.n_t(), MatrixSource::Fixed(m))
    } else {
        match args.matrix.baseline_kind()? {
            Some(kind) if kind.is_random() => (
                kind.name().to_string(),
                args.matrix.n_t,
                MatrixSource::Random(args.matrix.spec(kind)),
            ),
            Some(kind) => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
                let m = baseline_matrix(&args.matrix.spec(kind), &mut rng)?;
                (kind.name().to_string(), m.n_t(), MatrixSource::Fixed(m))
            }
            None => {
                let pair = args.matrix.pair.resolve()?;
                let variant: SeedVariant = args.matrix.variant.parse()?;
                let m = proposed_matrix::<f64>(&pair, variant, args.matrix.n_t, args.matrix.j)?;
                ("proposed".to_string(), m.n_t(), MatrixSource::Fixed(m))
            }
        }
    };

    let mse = sweep_paths(&source, &name, n_t, &paths, &cfg)?;
    for p in &mse.points {
        if p.is_failed() {
            report.check(
                &format!("{} paths={} ebno={}", p.matrix, p.paths, p.ebno_db),
                false,
                "normal matrix singular, no estimate",
            );
        } else {
            report.note(format!(
                "{} paths={} ebno={} dB: mse {:.4e}, minimum {:.4e}, gap {:.3} dB",
                p.matrix, p.paths, p.ebno_db, p.mse_empirical, p.mse_min, p.gap_db
            ));
        }
    }
    report.csv = Some(mse.to_csv());
    report.result = serde_json::to_value(&mse)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sequence_file_is_a_parse_error() {
        assert!(matches!(
            parse_sequences("\n  \n# note\n"),
            Err(Error::Parse { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_sequences("++\n+x\n"),
            Err(Error::Parse { line: 2, column: 2, .. })
        ));
        assert_eq!(parse_sequences("# pair\n+-\n++\n").unwrap().len(), 2);
    }

    #[test]
    fn path_lists() {
        assert_eq!(parse_paths("1:4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_paths("2,5").unwrap(), vec![2, 5]);
        assert!(parse_paths("0:3").is_err());
    }

    #[test]
    fn default_permutation_starts_with_mu() {
        let d = DjArgs {
            q: 2,
            mu: 3,
            pi: None,
            w: None,
            w0: 0,
            w_prime: 0,
        };
        let p = d.params().unwrap();
        assert_eq!((p.pi, p.w), (vec![3, 1, 2], vec![0, 0, 0]));
    }
}
