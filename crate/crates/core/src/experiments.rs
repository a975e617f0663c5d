//! Regime sweeps along n-grids, Monte Carlo comparisons against the exact
//! moments, oracle verification, and report emission.

use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    self, prob_distinct_colors, prob_fixed_colors, ClassSpec, ColoringError, Composition,
};
use crate::exact::{frac, int, to_f64, Rational};
use crate::graph::{EdgeListError, Family, Graph, GraphError, ThresholdStep};
use crate::moments::{self, full_report, MomentReport, MomentsError};
use crate::oracle::{self, OracleError};
use crate::randgraph::{self, ModelTemplate, RandGraphError};
use crate::seed;
use crate::stats::{power_law_exponent, IntMoments, SampleSummary};

const REGIME_GRAPH_STREAM: u64 = 0x4752_4150;
const REGIME_TRIAL_STREAM: u64 = 0x5452_4941;
const COMPARE_STREAM: u64 = 0x434f_4d50;
const CORPUS_STREAM: u64 = 0x434f_5250;

pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    EdgeList(#[from] EdgeListError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Moments(#[from] MomentsError),
    #[error(transparent)]
    RandGraph(#[from] RandGraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot parse {what} {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("grid must be strictly increasing with every n >= 4, got {0:?}")]
    Grid(Vec<usize>),
    #[error("{family} has no edges at n = {n}")]
    Degenerate { family: String, n: usize },
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { got: usize, min: usize },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn parse_err(what: &'static str, input: &str) -> ExperimentError {
    ExperimentError::Parse {
        what,
        input: input.to_string(),
    }
}

/// A graph for every n: a deterministic generator or a random model template.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Complete,
    Star,
    Path,
    Cycle,
    Circulant { d: usize },
    Random(ModelTemplate),
}

impl GraphFamily {
    /// `complete`, `star`, `path`, `cycle`, `circulant:d=4`, or any random
    /// model template such as `gnp:p=4/n`.
    pub fn parse(s: &str) -> Result<Self, ExperimentError> {
        let s = s.trim();
        Ok(match s {
            "complete" => GraphFamily::Complete,
            "star" => GraphFamily::Star,
            "path" => GraphFamily::Path,
            "cycle" => GraphFamily::Cycle,
            _ => {
                if let Some(d) = s.strip_prefix("circulant:d=") {
                    GraphFamily::Circulant {
                        d: d.parse().map_err(|_| parse_err("family", s))?,
                    }
                } else {
                    GraphFamily::Random(ModelTemplate::parse(s)?)
                }
            }
        })
    }

    pub fn is_random(&self) -> bool {
        matches!(self, GraphFamily::Random(_))
    }

    /// The graph at `n`; random families draw it from `rng`.
    pub fn graph<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Graph, ExperimentError> {
        let family = match self {
            GraphFamily::Complete => Family::Complete(n),
            GraphFamily::Star => Family::Star(n),
            GraphFamily::Path => Family::Path(n),
            GraphFamily::Cycle => Family::Cycle(n),
            GraphFamily::Circulant { d } => Family::RegularCirculant { n, d: *d },
            GraphFamily::Random(t) => return Ok(randgraph::generate(&t.at(n)?, rng)?.graph),
        };
        Ok(family.generate()?)
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Complete => f.write_str("complete"),
            GraphFamily::Star => f.write_str("star"),
            GraphFamily::Path => f.write_str("path"),
            GraphFamily::Cycle => f.write_str("cycle"),
            GraphFamily::Circulant { d } => write!(f, "circulant:d={d}"),
            GraphFamily::Random(t) => write!(f, "{t}"),
        }
    }
}

/// A single graph: an edge-list file, or `complete:n`, `star:n`, `path:n`,
/// `cycle:n`, `circulant:n:d`, `threshold:IDID…`.
pub fn parse_graph(s: &str) -> Result<Graph, ExperimentError> {
    let s = s.trim();
    let path = Path::new(s);
    if path.is_file() {
        return Ok(Graph::load_edge_list(path)?);
    }
    let (kind, rest) = s.split_once(':').ok_or_else(|| parse_err("graph", s))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| parse_err("graph", s));
    let family = match kind {
        "complete" => Family::Complete(num(rest)?),
        "star" => Family::Star(num(rest)?),
        "path" => Family::Path(num(rest)?),
        "cycle" => Family::Cycle(num(rest)?),
        "circulant" => {
            let (n, d) = rest.split_once(':').ok_or_else(|| parse_err("graph", s))?;
            Family::RegularCirculant { n: num(n)?, d: num(d)? }
        }
        "threshold" => Family::Threshold(ThresholdStep::parse_sequence(rest)?),
        _ => return Err(parse_err("graph", s)),
    };
    Ok(family.generate()?)
}

/// `40,80,160` or `start..end*factor` (geometric, end inclusive when hit).
pub fn parse_grid(s: &str) -> Result<Vec<usize>, ExperimentError> {
    let s = s.trim();
    let grid: Vec<usize> = if let Some((range, factor)) = s.split_once('*') {
        let (a, b) = range.split_once("..").ok_or_else(|| parse_err("grid", s))?;
        let (a, b, f): (usize, usize, usize) = (
            a.parse().map_err(|_| parse_err("grid", s))?,
            b.parse().map_err(|_| parse_err("grid", s))?,
            factor.parse().map_err(|_| parse_err("grid", s))?,
        );
        if a == 0 || f < 2 {
            return Err(parse_err("grid", s));
        }
        std::iter::successors(Some(a), |&x| x.checked_mul(f))
            .take_while(|&x| x <= b)
            .collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| parse_err("grid", s)))
            .collect::<Result<_, _>>()?
    };
    check_grid(&grid)?;
    Ok(grid)
}

fn check_grid(grid: &[usize]) -> Result<(), ExperimentError> {
    if grid.is_empty() || grid[0] < 4 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::Grid(grid.to_vec()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: GraphFamily,
    pub classes: ClassSpec,
    pub grid: Vec<usize>,
}

/// Finite-n stand-ins for the limit conditions of the dichotomy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// ζ² at the largest n must exceed this …
    pub zeta_sq: f64,
    /// … and its fitted exponent along the grid must be at least this.
    pub zeta_exponent: f64,
    /// imbalance_sq must exceed this at every grid point.
    pub imbalance_sq: f64,
    #[serde(with = "crate::exact::wire")]
    pub theta: Rational,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            zeta_sq: 0.2,
            zeta_exponent: -0.1,
            imbalance_sq: 1e-3,
            theta: frac(1, 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Concentration,
    AntiConcentration,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Concentration => "concentration",
            Regime::AntiConcentration => "anti_concentration",
        })
    }
}

/// One grid point of a regime sweep. Exact columns come from the closed
/// forms; empirical columns are present when trials > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub n: usize,
    pub m: usize,
    pub classes: Vec<usize>,
    #[serde(with = "crate::exact::wire")]
    pub zeta_sq: Rational,
    #[serde(with = "crate::exact::wire")]
    pub rho: Rational,
    #[serde(with = "crate::exact::wire")]
    pub imbalance_sq: Rational,
    /// σ²/m².
    #[serde(with = "crate::exact::wire")]
    pub normalized_var: Rational,
    #[serde(with = "crate::exact::wire")]
    pub rho_zeta_product: Rational,
    /// Paley–Zygmund lower bound on P((L − E L)² > θσ²).
    #[serde(with = "crate::exact::wire")]
    pub pz_bound: Rational,
    pub empirical_mean: Option<f64>,
    pub empirical_mean_se: Option<f64>,
    pub empirical_var: Option<f64>,
    pub empirical_var_se: Option<f64>,
    /// Observed frequency of (M − E M)² > θσ², the event bounded by pz_bound.
    pub empirical_deviation_freq: Option<f64>,
    pub predicted_regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub family: String,
    pub classes: String,
    pub trials: usize,
    pub seed: u64,
    pub thresholds: RegimeThresholds,
    pub zeta_exponent: Option<f64>,
    pub normalized_var_exponent: Option<f64>,
    pub predicted_regime: Regime,
    pub rows: Vec<RegimeRow>,
}

/// Exact report per grid point, plus empirical moments of M when
/// `trials > 0`. Random families are evaluated exactly on one realization
/// per n; their empirical columns redraw the graph every trial.
pub fn run_regime(
    spec: &FamilySpec,
    trials: usize,
    master: u64,
    th: &RegimeThresholds,
) -> Result<RegimeReport, ExperimentError> {
    check_grid(&spec.grid)?;
    let mut rows = Vec::with_capacity(spec.grid.len());
    for &n in &spec.grid {
        let c = spec.classes.resolve(n)?;
        let g = spec
            .family
            .graph(n, &mut seed::stream(master, &[REGIME_GRAPH_STREAM, n as u64]))?;
        if g.m() == 0 {
            return Err(ExperimentError::Degenerate {
                family: spec.family.to_string(),
                n,
            });
        }
        let report = full_report(&g, &c)?;
        let mut row = RegimeRow {
            n,
            m: report.m,
            classes: report.classes.clone(),
            rho_zeta_product: report.rho_zeta_product(),
            pz_bound: report.pz_bound(&th.theta),
            zeta_sq: report.zeta_sq.clone(),
            rho: report.rho.clone(),
            imbalance_sq: report.imbalance_sq.clone(),
            normalized_var: report.normalized_var.clone(),
            empirical_mean: None,
            empirical_mean_se: None,
            empirical_var: None,
            empirical_var_se: None,
            empirical_deviation_freq: None,
            predicted_regime: Regime::Concentration,
        };
        if trials > 0 {
            let draws = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = seed::stream(master, &[REGIME_TRIAL_STREAM, n as u64, t as u64]);
                    let graph = if spec.family.is_random() {
                        spec.family.graph(n, &mut rng)?
                    } else {
                        g.clone()
                    };
                    let colors = coloring::sample(&c, &mut rng).colors;
                    Ok(coloring::count_mono(&graph, &colors))
                })
                .collect::<Result<Vec<u64>, ExperimentError>>()?;
            let summary = summarize(&draws);
            let threshold = &th.theta * &report.var_common;
            let deviating = draws
                .iter()
                .filter(|&&x| {
                    let d = int(x) - &report.mean_M;
                    &d * &d > threshold
                })
                .count();
            row.empirical_mean = Some(summary.mean);
            row.empirical_mean_se = Some(summary.se_mean);
            row.empirical_var = Some(summary.variance);
            row.empirical_var_se = Some(summary.se_variance);
            row.empirical_deviation_freq = Some(deviating as f64 / trials as f64);
        }
        rows.push(row);
    }

    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let zetas: Vec<f64> = rows.iter().map(|r| to_f64(&r.zeta_sq)).collect();
    let nvars: Vec<f64> = rows.iter().map(|r| to_f64(&r.normalized_var)).collect();
    let zeta_exponent = power_law_exponent(&ns, &zetas);
    let normalized_var_exponent = power_law_exponent(&ns, &nvars);
    let zeta_persistent = zetas.last().is_some_and(|&z| z > th.zeta_sq)
        && zeta_exponent.is_none_or(|e| e >= th.zeta_exponent);
    let imbalance_persistent = rows.iter().all(|r| to_f64(&r.imbalance_sq) > th.imbalance_sq);
    let predicted_regime = if zeta_persistent && imbalance_persistent {
        Regime::AntiConcentration
    } else {
        Regime::Concentration
    };
    for r in &mut rows {
        r.predicted_regime = predicted_regime;
    }
    Ok(RegimeReport {
        family: spec.family.to_string(),
        classes: class_spec_label(&spec.classes),
        trials,
        seed: master,
        thresholds: th.clone(),
        zeta_exponent,
        normalized_var_exponent,
        predicted_regime,
        rows,
    })
}

fn class_spec_label(c: &ClassSpec) -> String {
    match c {
        ClassSpec::Fixed(c) => c.classes().iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        ClassSpec::Balanced(s) => format!("balanced:{s}"),
        ClassSpec::Ratios(r) => format!(
            "ratios:{}",
            r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        ),
    }
}

fn summarize(draws: &[u64]) -> SampleSummary {
    let mut acc = IntMoments::default();
    for &x in draws {
        acc.push(x as i64);
    }
    acc.summary()
}

/// Empirical M (and L = m − M) against the exact mean and variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub n: usize,
    pub m: usize,
    pub classes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(with = "crate::exact::wire")]
    pub exact_mean: Rational,
    #[serde(with = "crate::exact::wire")]
    pub exact_var: Rational,
    pub empirical: SampleSummary,
    pub min_m: u64,
    pub max_m: u64,
    /// Within 4 standard errors (exact equality when the SE is 0).
    pub mean_pass: bool,
    pub var_pass: bool,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.mean_pass && self.var_pass
    }
}

pub const MIN_COMPARISON_TRIALS: usize = 100;

pub fn run_comparison(g: &Graph, c: &Composition, trials: usize, master: u64) -> Result<Comparison, ExperimentError> {
    if trials < MIN_COMPARISON_TRIALS {
        return Err(ExperimentError::TooFewTrials {
            got: trials,
            min: MIN_COMPARISON_TRIALS,
        });
    }
    let stats = g.stats();
    let (_, exact_mean) = moments::mean_m_l(g.m(), c)?;
    if stats.n != c.n() {
        return Err(MomentsError::SizeMismatch { graph: stats.n, classes: c.n() }.into());
    }
    let exact_var = moments::var_common(&stats, c)?;
    let draws: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::stream(master, &[COMPARE_STREAM, t as u64]);
            coloring::count_mono(g, &coloring::sample(c, &mut rng).colors)
        })
        .collect();
    let empirical = summarize(&draws);
    let within = |observed: f64, exact: &Rational, se: f64| {
        if se == 0.0 {
            Rational::from_float(observed).is_some_and(|o| &o == exact)
        } else {
            (observed - to_f64(exact)).abs() <= 4.0 * se
        }
    };
    Ok(Comparison {
        n: g.n(),
        m: g.m(),
        classes: c.classes().to_vec(),
        trials,
        seed: master,
        mean_pass: within(empirical.mean, &exact_mean, empirical.se_mean),
        var_pass: within(empirical.variance, &exact_var, empirical.se_variance),
        min_m: draws.iter().copied().min().unwrap_or(0),
        max_m: draws.iter().copied().max().unwrap_or(0),
        exact_mean,
        exact_var,
        empirical,
    })
}

/// Column order of [`rows_to_csv`]. Exact quantities appear as floats.
pub const CSV_HEADER: [&str; 15] = [
    "n",
    "m",
    "classes",
    "zeta_sq",
    "rho",
    "imbalance_sq",
    "normalized_var",
    "rho_zeta_product",
    "pz_bound",
    "empirical_mean",
    "empirical_mean_se",
    "empirical_var",
    "empirical_var_se",
    "empirical_deviation_freq",
    "predicted_regime",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// CSV for a `.csv` extension, JSON otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

pub fn rows_to_json(rows: &[RegimeRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn rows_from_json(text: &str) -> Result<Vec<RegimeRow>, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn rows_to_csv(rows: &[RegimeRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        let classes: Vec<String> = r.classes.iter().map(ToString::to_string).collect();
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            classes.join(";"),
            to_f64(&r.zeta_sq).to_string(),
            to_f64(&r.rho).to_string(),
            to_f64(&r.imbalance_sq).to_string(),
            to_f64(&r.normalized_var).to_string(),
            to_f64(&r.rho_zeta_product).to_string(),
            to_f64(&r.pz_bound).to_string(),
            opt(r.empirical_mean),
            opt(r.empirical_mean_se),
            opt(r.empirical_var),
            opt(r.empirical_var_se),
            opt(r.empirical_deviation_freq),
            r.predicted_regime.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii")
}

pub fn emit(rows: &[RegimeRow], format: Format, path: &Path) -> Result<(), ExperimentError> {
    let text = match format {
        Format::Json => rows_to_json(rows),
        Format::Csv => rows_to_csv(rows),
    };
    write_file(path, &text)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), ExperimentError> {
    std::fs::write(path, text).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One-row CSV of a moment report.
pub fn moment_report_csv(r: &MomentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "n", "m", "sigma2", "classes", "mean_M", "mean_L", "var_common", "a_c", "b_c", "rho",
        "zeta_sq", "imbalance_sq", "normalized_var",
    ];
    w.write_record(header).expect("in-memory write");
    let classes: Vec<String> = r.classes.iter().map(ToString::to_string).collect();
    w.write_record([
        r.n.to_string(),
        r.m.to_string(),
        r.sigma2.to_string(),
        classes.join(";"),
        r.mean_M.to_string(),
        r.mean_L.to_string(),
        r.var_common.to_string(),
        r.a_c.to_string(),
        r.b_c.to_string(),
        r.rho.to_string(),
        r.zeta_sq.to_string(),
        r.imbalance_sq.to_string(),
        r.normalized_var.to_string(),
    ])
    .expect("in-memory write");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii")
}

/// Outcome of checking every closed form against enumeration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub graphs: usize,
    pub compositions: usize,
    pub checks: u64,
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Paths, cycles and stars on 4..=max_n vertices, K₄…K₆, the threshold
/// graph IDID and `random` seeded G(n, 1/2) graphs, each with its name.
pub fn oracle_corpus(max_n: usize, random: usize) -> Vec<(String, Graph)> {
    let mut corpus = Vec::new();
    for n in 4..=max_n {
        corpus.push((format!("path:{n}"), Family::Path(n)));
        corpus.push((format!("cycle:{n}"), Family::Cycle(n)));
        corpus.push((format!("star:{n}"), Family::Star(n)));
    }
    for n in 4..=max_n.min(6) {
        corpus.push((format!("complete:{n}"), Family::Complete(n)));
    }
    let mut out: Vec<(String, Graph)> = corpus
        .into_iter()
        .map(|(name, f)| (name, f.generate().expect("corpus families are valid")))
        .collect();
    if max_n >= 4 {
        out.push((
            "threshold:IDID".into(),
            Family::Threshold(ThresholdStep::parse_sequence("IDID").expect("valid"))
                .generate()
                .expect("valid"),
        ));
        for i in 0..random {
            let mut rng = seed::stream(0, &[CORPUS_STREAM, i as u64]);
            let n = 4 + i % (max_n - 3);
            let spec = randgraph::ModelSpec::Gnp { n, p: frac(1, 2) };
            let g = randgraph::generate(&spec, &mut rng).expect("valid").graph;
            out.push((format!("gnp:{n}#{i}"), g));
        }
    }
    out
}

/// Every composition of n into exactly s positive parts.
pub fn compositions(n: usize, s: usize) -> Vec<Composition> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if parts == 1 {
            if left > 0 {
                cur.push(left);
                out.push(Composition::new(cur.clone()).expect("positive parts"));
                cur.pop();
            }
            return;
        }
        for first in 1..left {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, s, &mut Vec::new(), &mut out);
    out
}

/// Size tuples (a₁, …, a_k), k ≤ max_k, every aⱼ ≥ 1 and Σa ≤ n.
fn event_shapes(n: usize, max_k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_k {
        let mut next = Vec::new();
        for shape in &frontier {
            let used: usize = shape.iter().sum();
            for a in 1..=n.saturating_sub(used) {
                let mut s: Vec<usize> = shape.clone();
                s.push(a);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.retain(|s| !s.is_empty());
    out
}

fn injections(s: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &out {
            for i in (0..s).filter(|i| !p.contains(i)) {
                let mut q = p.clone();
                q.push(i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Compares every closed form with exhaustive enumeration on the corpus,
/// for all compositions with s ∈ {2, 3}. Event probabilities are checked
/// for every shape with at most s+1 sets (at most s for fixed colors).
pub fn oracle_verify(max_n: usize, random_graphs: usize, budget: u64) -> Result<VerifyReport, ExperimentError> {
    let corpus = oracle_corpus(max_n, random_graphs);
    let mut report = VerifyReport {
        graphs: corpus.len(),
        ..VerifyReport::default()
    };
    let check = |report: &mut VerifyReport, label: String, formula: &Rational, truth: &Rational| {
        report.checks += 1;
        if formula != truth {
            report.mismatches.push(format!("{label}: formula {formula}, enumeration {truth}"));
        }
    };
    for n in 4..=max_n {
        for s in [2, 3] {
            for c in compositions(n, s) {
                report.compositions += 1;
                for sizes in event_shapes(n, s + 1) {
                    let truth = oracle::event_frequency(&c, &sizes, None, budget)?;
                    let formula = prob_distinct_colors(&c, &sizes)?;
                    check(&mut report, format!("{c} distinct {sizes:?}"), &formula, &truth);
                    if sizes.len() <= s {
                        for iota in injections(s, sizes.len()) {
                            let truth = oracle::event_frequency(&c, &sizes, Some(&iota), budget)?;
                            let formula = prob_fixed_colors(&c, &sizes, &iota)?;
                            check(&mut report, format!("{c} fixed {sizes:?} -> {iota:?}"), &formula, &truth);
                        }
                    }
                }
                for (name, g) in corpus.iter().filter(|(_, g)| g.n() == n) {
                    let truth = oracle::exact_moments(&oracle::enumerate(g, &c, budget)?);
                    let stats = g.stats();
                    for i in 0..s {
                        let mean = moments::mean_mi(g.m(), n, c.classes()[i])?;
                        check(&mut report, format!("{name} {c} mean M{i}"), &mean, &truth.mean_per_color[i]);
                        let var = moments::var_mi(&stats, &c, i)?;
                        check(&mut report, format!("{name} {c} var M{i}"), &var, &truth.var_per_color[i]);
                    }
                    let (mean_l, mean_m) = moments::mean_m_l(g.m(), &c)?;
                    check(&mut report, format!("{name} {c} mean L"), &mean_l, &truth.mean_l);
                    check(&mut report, format!("{name} {c} mean M"), &mean_m, &truth.mean_m);
                    let var = moments::var_common(&stats, &c)?;
                    check(&mut report, format!("{name} {c} var M"), &var, &truth.var_m);
                    check(&mut report, format!("{name} {c} var L"), &var, &truth.var_l);
                }
            }
        }
    }
    Ok(report)
}

/// Closed-form ratio sweep, plus Monte Carlo ratio and edge-count
/// concentration when trials > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdCheck {
    pub closed_form: randgraph::RatioSweep,
    pub monte_carlo: Option<randgraph::RatioSweep>,
    pub assumption: Option<randgraph::StarCheck>,
}

pub fn rdcheck(
    template: &ModelTemplate,
    grid: &[usize],
    trials: usize,
    master: u64,
    th: &randgraph::VerdictThresholds,
) -> Result<RdCheck, ExperimentError> {
    let closed_form = randgraph::ratio_sweep(template, grid, None, master, th)?;
    let (monte_carlo, assumption) = if trials > 0 {
        (
            Some(randgraph::ratio_sweep(template, grid, Some(trials), master, th)?),
            Some(randgraph::assumption_star_check(template, grid, trials, master, th)?),
        )
    } else {
        (None, None)
    };
    Ok(RdCheck {
        closed_form,
        monte_carlo,
        assumption,
    })
}

impl RegimeReport {
    /// Normalised variance is non-increasing along the grid.
    pub fn normalized_var_non_increasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].normalized_var <= w[0].normalized_var)
    }

    /// Smallest exact pz bound over the grid.
    pub fn min_pz_bound(&self) -> Rational {
        self.rows
            .iter()
            .map(|r| r.pz_bound.clone())
            .min()
            .unwrap_or_else(Rational::one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn spec(family: &str, classes: &str, grid: &[usize]) -> FamilySpec {
        FamilySpec {
            family: GraphFamily::parse(family).unwrap(),
            classes: classes.parse().unwrap(),
            grid: grid.to_vec(),
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("40,80,160").unwrap(), vec![40, 80, 160]);
        assert_eq!(parse_grid("50..3200*2").unwrap(), vec![50, 100, 200, 400, 800, 1600, 3200]);
        assert!(parse_grid("3,8").is_err());
        assert!(parse_grid("8,8").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn graph_parsing() {
        assert_eq!(parse_graph("path:4").unwrap().m(), 3);
        assert_eq!(parse_graph("circulant:10:4").unwrap().m(), 20);
        assert_eq!(parse_graph("threshold:IDID").unwrap().m(), 3 + 1);
        assert!(parse_graph("wheel:5").is_err());
        assert_eq!(GraphFamily::parse("gnp:p=4/n").unwrap().to_string(), "gnp:n=n,p=4/n");
    }

    #[test]
    fn star_imbalanced_is_anti_concentrated() {
        let r = run_regime(&spec("star", "ratios:3/4,1/4", &[40, 400, 4000]), 0, 1, &RegimeThresholds::default()).unwrap();
        assert_eq!(r.predicted_regime, Regime::AntiConcentration);
        let last = r.rows.last().unwrap();
        let target = frac(3, 64) * frac(4000, 3999);
        let rel = (to_f64(&last.normalized_var) - to_f64(&target)).abs() / to_f64(&target);
        assert!(rel < 0.1, "{rel}");
        assert!(r.rows.iter().all(|row| to_f64(&row.pz_bound) >= 0.01));
    }

    #[test]
    fn balanced_star_has_no_variance() {
        let r = run_regime(&spec("star", "balanced:2", &[8, 16, 64]), 0, 1, &RegimeThresholds::default()).unwrap();
        assert_eq!(r.predicted_regime, Regime::Concentration);
        for row in &r.rows {
            assert!(row.normalized_var.is_zero());
            assert!(row.imbalance_sq.is_zero());
        }
    }

    #[test]
    fn cycle_concentrates() {
        let r = run_regime(&spec("cycle", "ratios:3/4,1/4", &[50, 100, 200, 400]), 0, 1, &RegimeThresholds::default()).unwrap();
        assert_eq!(r.predicted_regime, Regime::Concentration);
        assert!(r.normalized_var_non_increasing());
        let e = r.normalized_var_exponent.unwrap();
        assert!((-1.3..=-0.7).contains(&e), "{e}");
    }

    #[test]
    fn empirical_columns_and_determinism() {
        let s = spec("star", "ratios:3/4,1/4", &[40, 80]);
        let a = run_regime(&s, 2000, 5, &RegimeThresholds::default()).unwrap();
        let b = run_regime(&s, 2000, 5, &RegimeThresholds::default()).unwrap();
        assert_eq!(rows_to_json(&a.rows), rows_to_json(&b.rows));
        for row in &a.rows {
            let freq = row.empirical_deviation_freq.unwrap();
            assert!(freq >= to_f64(&row.pz_bound), "{freq}");
            let exact_mean = to_f64(&frac(row.m as u64, 1)) - 0.0;
            assert!(row.empirical_mean.unwrap() < exact_mean);
        }
    }

    #[test]
    fn degenerate_family_errors() {
        let r = run_regime(&spec("gnp:p=0", "balanced:2", &[10]), 0, 1, &RegimeThresholds::default());
        assert!(matches!(r, Err(ExperimentError::Degenerate { n: 10, .. })));
    }

    #[test]
    fn comparison_examples() {
        let c = Composition::new(vec![2, 2]).unwrap();
        let p4 = Family::Path(4).generate().unwrap();
        let cmp = run_comparison(&p4, &c, 100_000, 3).unwrap();
        assert!(cmp.passed(), "{cmp:?}");
        assert_eq!(cmp.exact_var, frac(2, 3));

        let k6 = Family::Complete(6).generate().unwrap();
        let cmp = run_comparison(&k6, &Composition::new(vec![3, 3]).unwrap(), 500, 3).unwrap();
        assert!(cmp.passed());
        assert_eq!((cmp.min_m, cmp.max_m), (6, 6));

        let star = Family::Star(8).generate().unwrap();
        let cmp = run_comparison(&star, &Composition::new(vec![4, 4]).unwrap(), 10_000, 3).unwrap();
        assert_eq!((cmp.m as u64 - cmp.max_m, cmp.m as u64 - cmp.min_m), (4, 4));
        assert!(cmp.passed());

        assert!(matches!(
            run_comparison(&p4, &c, 99, 0),
            Err(ExperimentError::TooFewTrials { got: 99, min: 100 })
        ));
    }

    #[test]
    fn emission() {
        assert_eq!(rows_to_csv(&[]), CSV_HEADER.join(",") + "\n");
        let r = run_regime(&spec("cycle", "ratios:2/3,1/3", &[6, 12]), 300, 2, &RegimeThresholds::default()).unwrap();
        let back = rows_from_json(&rows_to_json(&r.rows)).unwrap();
        assert_eq!(back, r.rows);
        let csv = rows_to_csv(&r.rows);
        let first = csv.lines().next().unwrap();
        assert_eq!(first, CSV_HEADER.join(","));
        assert_eq!(csv.lines().count(), 3);
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("missing").join("out.csv");
        let err = emit(&r.rows, Format::Csv, &bad).unwrap_err();
        assert!(err.to_string().contains("out.csv"));
    }

    #[test]
    fn composition_enumeration() {
        assert_eq!(compositions(5, 2).len(), 4);
        assert_eq!(compositions(8, 3).len(), 21);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn oracle_verify_small() {
        let r = oracle_verify(5, 2, oracle::DEFAULT_BUDGET).unwrap();
        assert!(r.passed(), "{:?}", &r.mismatches[..r.mismatches.len().min(5)]);
        assert!(r.checks > 100);
    }
}
