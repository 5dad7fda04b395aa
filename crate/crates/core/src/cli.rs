//! The `bpp` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{fmt_rational, parse_rational, Poly};
use crate::biasimir::reduce;
use crate::lr_process::{
    biane_identity_report, bpp_power_sum, isotypic_measure_capped, lln_experiment, lr_coefficients_capped,
    perelomov_popov_report, sample, signature_to_config, weyl_dim, LlnInput, ParticleConfig, Signature,
    DEFAULT_SIZE_CAP,
};
use crate::moments::{
    classical_expansion, evaluate, free_moment, free_moment_oracle, limit_at_infinity, tau_decomposition_capped,
    two_point_decomposition_capped, Assignment, Decomposition, MomentSequence, WordSpec,
};
use crate::monotone_walks::{count_monotone_walks, enumerate_monotone_walks, DEFAULT_ENUMERATION_CAP};
use crate::permutations::{ExponentFunction, Permutation};
use crate::weingarten::{class_representative, laurent_coefficients, wg_class, wg_series};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bpp", version, about = "Exact mixed moments of quantum random matrices")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Largest permutation degree for Weingarten tables.
    #[arg(long, default_value_t = 7, global = true)]
    pub cap_d: usize,
    /// Largest N for tensor product decompositions.
    #[arg(long, default_value_t = 5, global = true)]
    pub cap_n: usize,
    /// Seed for sampling.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Weingarten function of a conjugacy class.
    Wg(WgArgs),
    /// Count or list monotone walks.
    Walks(WalksArgs),
    /// Reduce a Biasimir to Casimirs.
    Biasimir(BiasimirArgs),
    /// Classical/quantum decomposition of a mixed moment.
    Tau(TauArgs),
    /// Decomposition of a two-point function.
    Tau2(Tau2Args),
    /// Genus expansion and free limit of the classical part.
    Free(FreeArgs),
    /// Tensor product multiplicities.
    Lr(PairArgs),
    /// Isotypic measure, optionally with samples.
    Measure(MeasureArgs),
    /// Deformed power sums of a particle configuration.
    Bpp(BppArgs),
    /// Verify Biane's identity in explicit irreps.
    CheckBiane(CheckBianeArgs),
    /// Verify that traces of powers of Z act as the predicted scalars.
    CheckPp(CheckPpArgs),
    /// Exact mean and variance table along a family of signatures.
    Lln(LlnArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct WgArgs {
    #[arg(long)]
    pub d: usize,
    /// Cycle type, e.g. 2,1.
    #[arg(long, value_delimiter = ',')]
    pub class: Vec<usize>,
    /// Also list walk-count coefficients for genus 0..=order.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct WalksArgs {
    #[arg(long)]
    pub pi1: String,
    #[arg(long)]
    pub pi2: String,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub steps: usize,
    /// List the walks instead of only counting them.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BiasimirArgs {
    #[arg(long)]
    pub perm: String,
    #[arg(long, value_delimiter = ',')]
    pub exp: Vec<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Evaluate at this N.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, default_value = "1")]
    pub hbar: String,
    /// Moments a_1, a_2, ...
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<String>,
    /// Moments b_1, b_2, ...
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct TauArgs {
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u32>,
    /// Report the N -> infinity limit.
    #[arg(long)]
    pub limit: bool,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct Tau2Args {
    #[arg(long, value_delimiter = ',')]
    pub p1: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub q1: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub p2: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub q2: Vec<u32>,
    #[arg(long)]
    pub limit: bool,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FreeArgs {
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub k_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PairArgs {
    #[arg(long)]
    pub lambda: String,
    #[arg(long)]
    pub mu: String,
}

#[derive(Debug, Args, Serialize)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Number of samples to draw.
    #[arg(long, default_value_t = 0)]
    pub count: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BppArgs {
    /// Signature; converted to particles with c_i = hbar (lambda_i + N - i).
    #[arg(long, conflicts_with = "c")]
    pub lambda: Option<String>,
    /// Explicit particle positions.
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<String>,
    #[arg(long, default_value = "1")]
    pub hbar: String,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<u32>,
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckBianeArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<u32>,
    #[arg(long, default_value = "1")]
    pub hbar: String,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckPpArgs {
    #[arg(long)]
    pub lambda: String,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    pub k: Vec<u32>,
    #[arg(long, default_value = "1")]
    pub hbar: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuFamily {
    /// mu_N = (0, ..., 0)
    Trivial,
    /// mu_N = (1, 0, ..., 0)
    Vector,
}

#[derive(Debug, Args, Serialize)]
pub struct LlnArgs {
    /// Values of N; lambda_N = (1, 0, ..., 0).
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = MuFamily::Vector)]
    pub mu: MuFamily,
    /// hbar_N = scale / N.
    #[arg(long, default_value = "1")]
    pub scale: String,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    result: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

impl Report {
    fn new(result: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report { result, header, rows, ok: true }
    }
}

type CmdResult = Result<Report, String>;

fn err<E: Display>(e: E) -> String {
    e.to_string()
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

fn rationals(v: &[String]) -> Result<Vec<BigRational>, String> {
    v.iter().map(|s| rational(s)).collect()
}

fn signature(s: &str) -> Result<Signature, String> {
    Signature::parse(s)
}

fn poly_map<V: Ord + Clone + Display, C: crate::algebra::Coeff + Display>(p: &Poly<V, C>) -> BTreeMap<String, String> {
    p.terms().map(|(m, c)| (m.to_string(), c.to_string())).collect()
}

fn limit_map<V: Ord + Clone + Display>(p: &Poly<V, BigRational>) -> BTreeMap<String, String> {
    p.terms().map(|(m, c)| (m.to_string(), fmt_rational(c))).collect()
}

fn map_rows(part: &str, m: &BTreeMap<String, String>) -> Vec<Vec<String>> {
    m.iter().map(|(k, v)| vec![part.to_string(), k.clone(), v.clone()]).collect()
}

fn run_wg(a: &WgArgs, cap: usize) -> CmdResult {
    if a.class.iter().sum::<usize>() != a.d || a.class.contains(&0) {
        return Err(format!("class {:?} is not a partition of {}", a.class, a.d));
    }
    let mut class = a.class.clone();
    class.sort_unstable_by(|x, y| y.cmp(x));
    let f = wg_class(&class, cap).map_err(err)?;
    let mut result = json!({ "class": class, "value": f.to_string() });
    let mut rows = vec![vec!["value".into(), f.to_string()]];
    if let Some(order) = a.order {
        let rep = class_representative(&class);
        let id = Permutation::identity(a.d);
        let walks = wg_series(&id, &rep, order).map_err(err)?;
        let base = (a.d + rep.word_norm()) as i64;
        let laurent = laurent_coefficients(&f, (0..=order as i64).map(|g| base + 2 * g));
        let series: Vec<Value> = walks
            .iter()
            .zip(&laurent)
            .enumerate()
            .map(|(g, (w, l))| json!({ "genus": g, "power": -(base + 2 * g as i64), "walks": w.to_string(), "laurent": fmt_rational(l) }))
            .collect();
        for (g, (w, l)) in walks.iter().zip(&laurent).enumerate() {
            rows.push(vec![format!("genus{g}"), format!("{w};{}", fmt_rational(l))]);
        }
        result["series"] = Value::Array(series);
    }
    Ok(Report::new(result, vec!["field", "value"], rows))
}

fn run_walks(a: &WalksArgs) -> CmdResult {
    let p1 = Permutation::parse(&a.pi1, a.d).map_err(err)?;
    let p2 = Permutation::parse(&a.pi2, a.d.or(Some(p1.d()))).map_err(err)?;
    let count = count_monotone_walks(&p1, &p2, a.steps).map_err(err)?;
    let mut result = json!({ "count": count.to_string() });
    let mut rows = vec![vec!["count".into(), count.to_string()]];
    if a.list {
        let walks = enumerate_monotone_walks(&p1, &p2, a.steps, DEFAULT_ENUMERATION_CAP).map_err(err)?;
        let shown: Vec<String> = walks
            .iter()
            .map(|w| w.iter().map(|(s, t)| format!("({s} {t})")).collect::<Vec<_>>().join(""))
            .collect();
        rows.extend(shown.iter().map(|w| vec!["walk".into(), w.clone()]));
        result["walks"] = json!(shown);
    }
    Ok(Report::new(result, vec!["field", "value"], rows))
}

fn run_biasimir(a: &BiasimirArgs) -> CmdResult {
    let pi = Permutation::parse(&a.perm, Some(a.exp.len())).map_err(err)?;
    let red = reduce(&pi, &ExponentFunction::new(a.exp.clone())).map_err(err)?;
    let cl = poly_map(&red.classical);
    let qu = poly_map(&red.quantum);
    let mut rows = map_rows("classical", &cl);
    rows.extend(map_rows("quantum", &qu));
    Ok(Report::new(
        json!({ "permutation": pi.cycle_string(), "classical": cl, "quantum": qu }),
        vec!["part", "monomial", "coefficient"],
        rows,
    ))
}

fn moment_sequence(v: &[String]) -> Result<MomentSequence, String> {
    Ok(MomentSequence(rationals(v)?))
}

fn decomposition_report(dec: &Decomposition, limit: bool, eval: &EvalArgs, d: usize) -> CmdResult {
    let cl = poly_map(&dec.classical);
    let qu = poly_map(&dec.quantum);
    let mut rows = map_rows("classical", &cl);
    rows.extend(map_rows("quantum", &qu));
    let mut result = json!({ "classical": cl, "quantum": qu });
    if limit {
        let lc = limit_at_infinity(&dec.classical).map_err(err)?;
        let lq = limit_at_infinity(&dec.quantum).map_err(err)?;
        let lt = limit_at_infinity(&dec.total()).map_err(err)?;
        let hbar_terms = lt.terms().filter(|(m, _)| m.exponent(&crate::moments::MomentVar::Hbar) > 0).count();
        rows.extend(map_rows("limit", &limit_map(&lt)));
        result["limit"] = json!({
            "classical": limit_map(&lc),
            "quantum": limit_map(&lq),
            "total": limit_map(&lt),
            "monomials": lt.len(),
            "classical_monomials": lt.len() - hbar_terms,
            "quantum_monomials": hbar_terms,
        });
    }
    if let Some(n) = &eval.n {
        let n = rational(n)?;
        if n < BigRational::from_integer(BigInt::from(d)) {
            return Err(format!("N = {n} is below d = {d}"));
        }
        let at = Assignment { n, hbar: rational(&eval.hbar)?, a: moment_sequence(&eval.a)?, b: moment_sequence(&eval.b)? };
        let c = evaluate(&dec.classical, &at).map_err(err)?;
        let q = evaluate(&dec.quantum, &at).map_err(err)?;
        let total = &c + &at.hbar * &q;
        for (k, v) in [("classical", &c), ("quantum", &q), ("total", &total)] {
            rows.push(vec!["value".into(), k.into(), fmt_rational(v)]);
        }
        result["value"] = json!({ "classical": fmt_rational(&c), "quantum": fmt_rational(&q), "total": fmt_rational(&total) });
    }
    Ok(Report::new(result, vec!["part", "monomial", "coefficient"], rows))
}

fn run_tau(a: &TauArgs, cap: usize) -> CmdResult {
    let w = WordSpec::new(a.p.clone(), a.q.clone()).map_err(err)?;
    let dec = tau_decomposition_capped(&w, cap).map_err(err)?;
    decomposition_report(&dec, a.limit, &a.eval, w.d())
}

fn run_tau2(a: &Tau2Args, cap: usize) -> CmdResult {
    let w1 = WordSpec::new(a.p1.clone(), a.q1.clone()).map_err(err)?;
    let w2 = WordSpec::new(a.p2.clone(), a.q2.clone()).map_err(err)?;
    let dec = two_point_decomposition_capped(&w1, &w2, cap).map_err(err)?;
    decomposition_report(&dec, a.limit, &a.eval, w1.d() + w2.d())
}

fn run_free(a: &FreeArgs) -> CmdResult {
    let w = WordSpec::new(a.p.clone(), a.q.clone()).map_err(err)?;
    let ma = moment_sequence(&a.a)?;
    let mb = moment_sequence(&a.b)?;
    let e = classical_expansion(&w, a.k_max, &ma, &mb).map_err(err)?;
    let fm = free_moment(&w, &ma, &mb).map_err(err)?;
    let oracle = free_moment_oracle(&w, &ma, &mb).map_err(err)?;
    let agree = e[0] == fm && fm == oracle;
    let mut rows: Vec<Vec<String>> = e.iter().enumerate().map(|(k, v)| vec![format!("e{k}"), fmt_rational(v)]).collect();
    rows.push(vec!["free_moment".into(), fmt_rational(&fm)]);
    rows.push(vec!["cumulant_oracle".into(), fmt_rational(&oracle)]);
    rows.push(vec!["agree".into(), agree.to_string()]);
    let mut r = Report::new(
        json!({
            "expansion": e.iter().map(fmt_rational).collect::<Vec<_>>(),
            "free_moment": fmt_rational(&fm),
            "cumulant_oracle": fmt_rational(&oracle),
            "agree": agree,
        }),
        vec!["field", "value"],
        rows,
    );
    r.ok = agree;
    Ok(r)
}

fn run_lr(a: &PairArgs, cap_n: usize) -> CmdResult {
    let l = signature(&a.lambda)?;
    let m = signature(&a.mu)?;
    let lr = lr_coefficients_capped(&l, &m, cap_n, DEFAULT_SIZE_CAP).map_err(err)?;
    let rows: Vec<Vec<String>> = lr
        .iter()
        .map(|(s, c)| vec![s.to_string(), c.to_string(), weyl_dim(s).to_string()])
        .collect();
    let entries: Vec<Value> = lr
        .iter()
        .map(|(s, c)| json!({ "nu": s, "multiplicity": c, "dim": weyl_dim(s).to_string() }))
        .collect();
    let check: BigInt = lr.iter().map(|(s, c)| BigInt::from(*c) * BigInt::from(weyl_dim(s))).sum();
    let want = BigInt::from(weyl_dim(&l) * weyl_dim(&m));
    let mut r = Report::new(
        json!({ "decomposition": entries, "dim_lambda_times_mu": want.to_string(), "dimension_check": check == want }),
        vec!["nu", "multiplicity", "dim"],
        rows,
    );
    r.ok = check == want;
    Ok(r)
}

fn run_measure(a: &MeasureArgs, cap_n: usize, seed: u64) -> CmdResult {
    let l = signature(&a.pair.lambda)?;
    let m = signature(&a.pair.mu)?;
    let measure = isotypic_measure_capped(&l, &m, cap_n, DEFAULT_SIZE_CAP).map_err(err)?;
    let mut rows: Vec<Vec<String>> =
        measure.weights.iter().map(|(s, p)| vec!["probability".into(), s.to_string(), fmt_rational(p)]).collect();
    let probs: BTreeMap<String, String> = measure.weights.iter().map(|(s, p)| (s.to_string(), fmt_rational(p))).collect();
    let total = measure.total();
    let mut result = json!({ "measure": probs, "total": fmt_rational(&total) });
    if a.count > 0 {
        let draws = sample(&measure, seed, a.count).map_err(err)?;
        let mut freq: BTreeMap<String, usize> = BTreeMap::new();
        for s in &draws {
            *freq.entry(s.to_string()).or_default() += 1;
        }
        rows.extend(freq.iter().map(|(s, c)| vec!["count".into(), s.clone(), c.to_string()]));
        result["samples"] = json!(freq);
    }
    let mut r = Report::new(result, vec!["kind", "nu", "value"], rows);
    r.ok = total.is_one();
    Ok(r)
}

fn run_bpp(a: &BppArgs) -> CmdResult {
    let hbar = rational(&a.hbar)?;
    let cfg = match &a.lambda {
        Some(l) => signature_to_config(&signature(l)?, &hbar),
        None => ParticleConfig::new(rationals(&a.c)?, hbar).map_err(err)?,
    };
    if cfg.c.is_empty() {
        return Err("give --lambda or --c".into());
    }
    let values: Vec<(u32, BigRational)> = a.k.iter().map(|&k| (k, bpp_power_sum(&cfg, k, a.normalized))).collect();
    let rows = values.iter().map(|(k, v)| vec![k.to_string(), fmt_rational(v)]).collect();
    Ok(Report::new(
        json!({
            "particles": cfg.c.iter().map(fmt_rational).collect::<Vec<_>>(),
            "values": values.iter().map(|(k, v)| json!({ "k": k, "value": fmt_rational(v) })).collect::<Vec<_>>(),
        }),
        vec!["k", "value"],
        rows,
    ))
}

fn run_check_biane(a: &CheckBianeArgs) -> CmdResult {
    let l = signature(&a.pair.lambda)?;
    let m = signature(&a.pair.mu)?;
    let rep = biane_identity_report(&l, &m, &a.k, &rational(&a.hbar)?).map_err(err)?;
    let rows = vec![vec![rep.lhs.clone(), rep.rhs.clone(), rep.holds.to_string()]];
    let mut r = Report::new(serde_json::to_value(&rep).map_err(err)?, vec!["lhs", "rhs", "holds"], rows);
    r.ok = rep.holds;
    Ok(r)
}

fn run_check_pp(a: &CheckPpArgs) -> CmdResult {
    let l = signature(&a.lambda)?;
    let hbar = rational(&a.hbar)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut ok = true;
    for &k in &a.k {
        let rep = perelomov_popov_report(&l, k, &hbar).map_err(err)?;
        ok &= rep.holds;
        rows.push(vec![k.to_string(), rep.scalar.clone().unwrap_or_else(|| "not scalar".into()), rep.expected.clone(), rep.holds.to_string()]);
        checks.push(json!({ "k": k, "report": rep }));
    }
    let mut r = Report::new(json!({ "checks": checks, "holds": ok }), vec!["k", "trace", "expected", "holds"], rows);
    r.ok = ok;
    Ok(r)
}

fn run_lln(a: &LlnArgs) -> CmdResult {
    let scale = rational(&a.scale)?;
    let family = a
        .n
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err("N must be positive".to_string());
            }
            let mut v = vec![0; n];
            v[0] = 1;
            let mu = match a.mu {
                MuFamily::Trivial => Signature::trivial(n),
                MuFamily::Vector => Signature::new(v.clone()).map_err(err)?,
            };
            Ok(LlnInput {
                lambda: Signature::new(v).map_err(err)?,
                mu,
                hbar: &scale / BigRational::from_integer(BigInt::from(n)),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table = lln_experiment(&family, a.k).map_err(err)?;
    let rows = table
        .iter()
        .map(|r| vec![r.n.to_string(), fmt_rational(&r.mean), fmt_rational(&r.variance)])
        .collect();
    let json_rows: Vec<Value> = table
        .iter()
        .map(|r| json!({ "N": r.n, "mean": fmt_rational(&r.mean), "variance": fmt_rational(&r.variance) }))
        .collect();
    Ok(Report::new(json!({ "table": json_rows }), vec!["N", "mean", "variance"], rows))
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Wg(a) => run_wg(a, cli.cap_d),
        Command::Walks(a) => run_walks(a),
        Command::Biasimir(a) => run_biasimir(a),
        Command::Tau(a) => run_tau(a, cli.cap_d),
        Command::Tau2(a) => run_tau2(a, cli.cap_d),
        Command::Free(a) => run_free(a),
        Command::Lr(a) => run_lr(a, cli.cap_n),
        Command::Measure(a) => run_measure(a, cli.cap_n, cli.seed),
        Command::Bpp(a) => run_bpp(a),
        Command::CheckBiane(a) => run_check_biane(a),
        Command::CheckPp(a) => run_check_pp(a),
        Command::Lln(a) => run_lln(a),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Wg(_) => "wg",
        Command::Walks(_) => "walks",
        Command::Biasimir(_) => "biasimir",
        Command::Tau(_) => "tau",
        Command::Tau2(_) => "tau2",
        Command::Free(_) => "free",
        Command::Lr(_) => "lr",
        Command::Measure(_) => "measure",
        Command::Bpp(_) => "bpp",
        Command::CheckBiane(_) => "check-biane",
        Command::CheckPp(_) => "check-pp",
        Command::Lln(_) => "lln",
    }
}

fn render(cli: &Cli, report: &Report) -> Result<String, String> {
    match cli.format {
        Format::Json => {
            let config = json!({
                "command": command_name(&cli.command),
                "args": serde_json::to_value(&cli.command).map_err(err)?
                    .as_object()
                    .and_then(|o| o.values().next().cloned())
                    .unwrap_or(Value::Null),
                "format": cli.format,
                "cap_d": cli.cap_d,
                "cap_n": cli.cap_n,
                "seed": cli.seed,
            });
            let doc = json!({ "schema_version": SCHEMA_VERSION, "config": config, "result": report.result, "ok": report.ok });
            serde_json::to_string_pretty(&doc).map(|s| s + "\n").map_err(err)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.header).map_err(err)?;
            for row in &report.rows {
                w.write_record(row).map_err(err)?;
            }
            String::from_utf8(w.into_inner().map_err(err)?).map_err(err)
        }
    }
}

/// Parse and run; exit code 0 on success, 1 when a check fails, 2 on bad input.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if cli.cap_d == 0 || cli.cap_n == 0 {
        return Outcome { code: 2, stdout: String::new(), stderr: "error: caps must be positive\n".into() };
    }
    match dispatch(&cli).and_then(|r| render(&cli, &r).map(|s| (s, r.ok))) {
        Ok((stdout, ok)) => Outcome { code: if ok { 0 } else { 1 }, stdout, stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
