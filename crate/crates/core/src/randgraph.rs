//! Random graph models and the E[Σ₂]/[E m]² concentration criterion.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Geometric;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, parse_rational, to_f64, Rational};
use crate::graph::Graph;
use crate::seed;
use crate::stats::{covariance, mean_var, power_law_exponent, IntMoments};

/// Stream tags so different harnesses never share random numbers.
const RATIO_STREAM: u64 = 0x5241_5449;
const STAR_STREAM: u64 = 0x5354_4152;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandGraphError {
    #[error("cannot parse model {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error("invalid {model} model: {reason}")]
    Invalid { model: &'static str, reason: String },
    #[error("degree law puts all of its mass on 0")]
    DegenerateLaw,
    #[error("cannot read weights from {path}: {reason}")]
    Weights { path: PathBuf, reason: String },
    #[error("{0} needs a vertex count (n=…) or a grid")]
    NeedsN(&'static str),
    #[error("at least 2 trials are needed, got {0}")]
    TooFewTrials(usize),
}

fn invalid(model: &'static str, reason: impl Into<String>) -> RandGraphError {
    RandGraphError::Invalid {
        model,
        reason: reason.into(),
    }
}

/// Finite-support degree law with exact probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLaw {
    support: Vec<(u64, Rational)>,
}

impl DegreeLaw {
    pub fn new(pairs: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self, RandGraphError> {
        let mut merged: BTreeMap<u64, Rational> = BTreeMap::new();
        for (v, p) in pairs {
            if p < Rational::zero() || p > Rational::one() {
                return Err(invalid("config", format!("probability {p} of degree {v}")));
            }
            *merged.entry(v).or_insert_with(Rational::zero) += p;
        }
        merged.retain(|_, p| !p.is_zero());
        let total: Rational = merged.values().sum();
        if total != Rational::one() {
            return Err(invalid("config", format!("probabilities sum to {total}, not 1")));
        }
        if merged.keys().all(|&v| v == 0) {
            return Err(RandGraphError::DegenerateLaw);
        }
        Ok(DegreeLaw {
            support: merged.into_iter().collect(),
        })
    }

    /// δ_d: every vertex gets degree d.
    pub fn point(d: u64) -> Result<Self, RandGraphError> {
        DegreeLaw::new([(d, Rational::one())])
    }

    /// `v1:p1,v2:p2,…` with probabilities as decimals or fractions.
    pub fn parse(s: &str) -> Result<Self, RandGraphError> {
        let err = |reason: &str| RandGraphError::Parse {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let pairs = s
            .split(',')
            .map(|tok| {
                let (v, p) = tok.split_once(':').ok_or_else(|| err("expected value:probability"))?;
                let v = v.trim().parse::<u64>().map_err(|_| err("degree must be a non-negative integer"))?;
                let p = parse_rational(p).ok_or_else(|| err("bad probability"))?;
                Ok((v, p))
            })
            .collect::<Result<Vec<_>, RandGraphError>>()?;
        DegreeLaw::new(pairs)
    }

    pub fn support(&self) -> &[(u64, Rational)] {
        &self.support
    }

    /// E[D^k].
    pub fn moment(&self, k: u32) -> Rational {
        self.support
            .iter()
            .map(|(v, p)| int(*v).pow(k as i32) * p)
            .sum()
    }

    pub fn mu1(&self) -> Rational {
        self.moment(1)
    }

    pub fn mu2(&self) -> Rational {
        self.moment(2)
    }
}

impl fmt::Display for DegreeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|(v, p)| format!("{v}:{p}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// A scalar parameter as a function of n: `c`, `n^e`, `c*n^e` or `c/n^e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamExpr {
    coef: Rational,
    exponent: f64,
    text: String,
}

impl ParamExpr {
    pub fn constant(x: Rational) -> Self {
        ParamExpr {
            text: x.to_string(),
            coef: x,
            exponent: 0.0,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(i) = text.find('n') else {
            return Some(ParamExpr {
                coef: parse_rational(&text)?,
                exponent: 0.0,
                text,
            });
        };
        let (pre, post) = (&text[..i], &text[i + 1..]);
        let mut exponent = match post.strip_prefix('^') {
            Some(e) => {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                to_f64(&parse_rational(e)?)
            }
            None if post.is_empty() => 1.0,
            None => return None,
        };
        let coef = if pre.is_empty() {
            Rational::one()
        } else if let Some(c) = pre.strip_suffix('*') {
            parse_rational(c)?
        } else if let Some(c) = pre.strip_suffix('/') {
            exponent = -exponent;
            parse_rational(c)?
        } else {
            return None;
        };
        exponent.is_finite().then_some(ParamExpr {
            coef,
            exponent,
            text,
        })
    }

    pub fn eval(&self, n: usize) -> f64 {
        to_f64(&self.coef) * (n as f64).powf(self.exponent)
    }

    /// Exact value when the exponent is an integer, otherwise the rational
    /// nearest to [`ParamExpr::eval`].
    pub fn eval_rational(&self, n: usize) -> Rational {
        if self.exponent.fract() == 0.0 && self.exponent.abs() < 64.0 {
            &self.coef * int(n).pow(self.exponent as i32)
        } else {
            Rational::from_float(self.eval(n)).unwrap_or_else(Rational::zero)
        }
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A concrete random graph model on a fixed number of vertices.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Gnp { n: usize, p: Rational },
    /// Erased configuration model with i.i.d. degrees.
    Config { n: usize, law: DegreeLaw },
    /// Points uniform on the unit torus, joined when within distance r.
    GeometricTorus { n: usize, r: f64 },
    /// Independent edges with probability min(1, wᵢwⱼ/Σw).
    ChungLu { weights: Vec<Rational> },
    /// Chung–Lu with one hub of weight n and all other weights 1.
    StarLike { n: usize },
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match self {
            ModelSpec::Gnp { n, .. }
            | ModelSpec::Config { n, .. }
            | ModelSpec::GeometricTorus { n, .. }
            | ModelSpec::StarLike { n } => *n,
            ModelSpec::ChungLu { weights } => weights.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Gnp { .. } => "gnp",
            ModelSpec::Config { .. } => "config",
            ModelSpec::GeometricTorus { .. } => "geo",
            ModelSpec::ChungLu { .. } => "cl",
            ModelSpec::StarLike { .. } => "starlike",
        }
    }

    pub fn validate(&self) -> Result<(), RandGraphError> {
        match self {
            ModelSpec::Gnp { p, .. } => {
                if *p < Rational::zero() || *p > Rational::one() {
                    return Err(invalid("gnp", format!("p = {p} is outside [0, 1]")));
                }
            }
            ModelSpec::GeometricTorus { r, .. } => {
                if !(*r > 0.0 && *r <= 0.5) {
                    return Err(invalid("geo", format!("r = {r} is outside (0, 1/2]")));
                }
            }
            ModelSpec::ChungLu { weights } => {
                if weights.is_empty() {
                    return Err(invalid("cl", "no weights"));
                }
                if let Some(w) = weights.iter().find(|w| **w <= Rational::zero()) {
                    return Err(invalid("cl", format!("weight {w} is not positive")));
                }
            }
            ModelSpec::Config { n, .. } | ModelSpec::StarLike { n } => {
                if *n == 0 {
                    return Err(invalid(self.kind(), "needs at least one vertex"));
                }
            }
        }
        Ok(())
    }

    /// The Chung–Lu weights a star-like model expands to.
    pub fn star_like_weights(n: usize) -> Vec<Rational> {
        let mut w = vec![Rational::one(); n];
        if let Some(hub) = w.first_mut() {
            *hub = int(n);
        }
        w
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Gnp { n, p } => write!(f, "gnp:n={n},p={p}"),
            ModelSpec::Config { n, law } => write!(f, "config:n={n},law={law}"),
            ModelSpec::GeometricTorus { n, r } => write!(f, "geo:n={n},r={r}"),
            ModelSpec::ChungLu { weights } => write!(f, "cl:n={}", weights.len()),
            ModelSpec::StarLike { n } => write!(f, "starlike:n={n}"),
        }
    }
}

/// A model whose vertex count, and possibly parameters, are left as
/// functions of n, e.g. `gnp:p=4/n` or `geo:n=500,r=0.1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelTemplate {
    Gnp { n: Option<usize>, p: ParamExpr },
    Config { n: Option<usize>, law: DegreeLaw },
    GeometricTorus { n: Option<usize>, r: ParamExpr },
    ChungLu { weights: Vec<Rational> },
    StarLike { n: Option<usize> },
}

impl ModelTemplate {
    /// Parses `kind:key=value,…`. Chung–Lu weights are read from the file
    /// named by `w=`, whitespace separated.
    pub fn parse(s: &str) -> Result<Self, RandGraphError> {
        let err = |reason: String| RandGraphError::Parse {
            spec: s.to_string(),
            reason,
        };
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        // A token without '=' continues the previous value (degree laws
        // contain commas themselves).
        let mut params: Vec<(String, String)> = Vec::new();
        for tok in rest.split(',').filter(|t| !t.trim().is_empty()) {
            match tok.split_once('=') {
                Some((k, v)) => params.push((k.trim().to_string(), v.trim().to_string())),
                None => match params.last_mut() {
                    Some((_, v)) => {
                        v.push(',');
                        v.push_str(tok.trim());
                    }
                    None => return Err(err(format!("expected key=value, got {tok:?}"))),
                },
            }
        }
        let allowed: &[&str] = match kind {
            "gnp" => &["n", "p"],
            "config" => &["n", "law"],
            "geo" => &["n", "r"],
            "cl" => &["n", "w"],
            "starlike" => &["n"],
            _ => return Err(err(format!("unknown model kind {kind:?}"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(err(format!("unknown parameter {k:?} for {kind}")));
        }
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let n = match get("n") {
            Some("n") | None => None,
            Some(v) => Some(v.parse::<usize>().map_err(|_| err(format!("bad n {v:?}")))?),
        };
        let expr = |key: &str| -> Result<ParamExpr, RandGraphError> {
            let v = get(key).ok_or_else(|| err(format!("missing {key}=")))?;
            ParamExpr::parse(v).ok_or_else(|| err(format!("bad expression {v:?} for {key}")))
        };
        let template = match kind {
            "gnp" => ModelTemplate::Gnp { n, p: expr("p")? },
            "config" => ModelTemplate::Config {
                n,
                law: DegreeLaw::parse(get("law").ok_or_else(|| err("missing law=".into()))?)?,
            },
            "geo" => ModelTemplate::GeometricTorus { n, r: expr("r")? },
            "cl" => {
                let path = get("w").ok_or_else(|| err("missing w=<file>".into()))?;
                let weights = read_weights(Path::new(path))?;
                if n.is_some_and(|n| n != weights.len()) {
                    return Err(err(format!("n does not match the {} weights", weights.len())));
                }
                ModelTemplate::ChungLu { weights }
            }
            _ => ModelTemplate::StarLike { n },
        };
        Ok(template)
    }

    pub fn fixed_n(&self) -> Option<usize> {
        match self {
            ModelTemplate::Gnp { n, .. }
            | ModelTemplate::Config { n, .. }
            | ModelTemplate::GeometricTorus { n, .. }
            | ModelTemplate::StarLike { n } => *n,
            ModelTemplate::ChungLu { weights } => Some(weights.len()),
        }
    }

    /// The model on `n` vertices.
    pub fn at(&self, n: usize) -> Result<ModelSpec, RandGraphError> {
        let spec = match self {
            ModelTemplate::Gnp { p, .. } => ModelSpec::Gnp {
                n,
                p: p.eval_rational(n),
            },
            ModelTemplate::Config { law, .. } => ModelSpec::Config {
                n,
                law: law.clone(),
            },
            ModelTemplate::GeometricTorus { r, .. } => ModelSpec::GeometricTorus { n, r: r.eval(n) },
            ModelTemplate::ChungLu { weights } => {
                if weights.len() != n {
                    return Err(invalid("cl", format!("{} weights cannot give n = {n}", weights.len())));
                }
                ModelSpec::ChungLu {
                    weights: weights.clone(),
                }
            }
            ModelTemplate::StarLike { .. } => ModelSpec::StarLike { n },
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The model at its own `n=`.
    pub fn spec(&self) -> Result<ModelSpec, RandGraphError> {
        let n = self.fixed_n().ok_or(RandGraphError::NeedsN(self.kind()))?;
        self.at(n)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelTemplate::Gnp { .. } => "gnp",
            ModelTemplate::Config { .. } => "config",
            ModelTemplate::GeometricTorus { .. } => "geo",
            ModelTemplate::ChungLu { .. } => "cl",
            ModelTemplate::StarLike { .. } => "starlike",
        }
    }
}

impl fmt::Display for ModelTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |n: &Option<usize>| n.map_or("n".to_string(), |n| n.to_string());
        match self {
            ModelTemplate::Gnp { n: k, p } => write!(f, "gnp:n={},p={p}", n(k)),
            ModelTemplate::Config { n: k, law } => write!(f, "config:n={},law={law}", n(k)),
            ModelTemplate::GeometricTorus { n: k, r } => write!(f, "geo:n={},r={r}", n(k)),
            ModelTemplate::ChungLu { weights } => write!(f, "cl:n={}", weights.len()),
            ModelTemplate::StarLike { n: k } => write!(f, "starlike:n={}", n(k)),
        }
    }
}

fn read_weights(path: &Path) -> Result<Vec<Rational>, RandGraphError> {
    let fail = |reason: String| RandGraphError::Weights {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    text.split_whitespace()
        .map(|tok| parse_rational(tok).ok_or_else(|| fail(format!("bad weight {tok:?}"))))
        .collect()
}

/// Degree statistics of the configuration multigraph before erasure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreErasure {
    pub m: u64,
    pub sigma2: u128,
    pub loops: u64,
    pub parallel: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub graph: Graph,
    pub pre_erasure: Option<PreErasure>,
}

pub fn generate<R: Rng + ?Sized>(spec: &ModelSpec, rng: &mut R) -> Result<Sample, RandGraphError> {
    spec.validate()?;
    let n = spec.n();
    let mut pre_erasure = None;
    let edges = match spec {
        ModelSpec::Gnp { p, .. } => gnp_edges(n, to_f64(p), rng),
        ModelSpec::GeometricTorus { r, .. } => torus_edges(n, *r, rng),
        ModelSpec::ChungLu { weights } => {
            let w: Vec<f64> = weights.iter().map(to_f64).collect();
            chung_lu_edges(&w, rng)
        }
        ModelSpec::StarLike { n } => {
            let mut w = vec![1.0; *n];
            w[0] = *n as f64;
            chung_lu_edges(&w, rng)
        }
        ModelSpec::Config { law, .. } => {
            let (edges, pre) = config_edges(n, law, rng);
            pre_erasure = Some(pre);
            edges
        }
    };
    Ok(Sample {
        graph: Graph::from_canonical(n, edges),
        pre_erasure,
    })
}

/// Pairs in canonical sorted order, skipping geometrically between edges.
fn gnp_edges<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    if n < 2 || p <= 0.0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    }
    let skip = Geometric::new(p).expect("0 < p < 1");
    let total = (n as u64) * (n as u64 - 1) / 2;
    let mut edges = Vec::new();
    // Linear index k enumerates (0,1), (0,2), …, (0,n−1), (1,2), …
    let mut k = skip.sample(rng);
    let (mut u, mut row_start) = (0u64, 0u64);
    while k < total {
        while k >= row_start + (n as u64 - 1 - u) {
            row_start += n as u64 - 1 - u;
            u += 1;
        }
        let v = u + 1 + (k - row_start);
        edges.push((u as usize, v as usize));
        k = k.saturating_add(1).saturating_add(skip.sample(rng));
    }
    edges
}

fn torus_edges<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let wrap = |a: f64, b: f64| {
        let d = (a - b).abs();
        d.min(1.0 - d)
    };
    let mut edges = Vec::new();
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        for (j, &(xj, yj)) in pts.iter().enumerate().skip(i + 1) {
            let (dx, dy) = (wrap(xi, xj), wrap(yi, yj));
            if dx * dx + dy * dy <= r * r {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn chung_lu_edges<R: Rng + ?Sized>(w: &[f64], rng: &mut R) -> Vec<(usize, usize)> {
    let total: f64 = w.iter().sum();
    let mut edges = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let p = (w[i] * w[j] / total).min(1.0);
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn config_edges<R: Rng + ?Sized>(
    n: usize,
    law: &DegreeLaw,
    rng: &mut R,
) -> (Vec<(usize, usize)>, PreErasure) {
    let probs: Vec<f64> = law.support().iter().map(|(_, p)| to_f64(p)).collect();
    let pick = WeightedIndex::new(&probs).expect("law has positive mass");
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| law.support()[pick.sample(rng)].0 as usize)
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        degrees[rng.random_range(0..n)] += 1;
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    stubs.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = stubs
        .chunks_exact(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    let before = pairs.len();
    pairs.retain(|(u, v)| u != v);
    let loops = (before - pairs.len()) as u64;
    pairs.sort_unstable();
    let kept = {
        pairs.dedup();
        pairs.len()
    };
    let pre = PreErasure {
        m: before as u64,
        sigma2: degrees.iter().map(|&d| (d as u128) * (d as u128)).sum(),
        loops,
        parallel: (before as u64 - loops) - kept as u64,
    };
    (pairs, pre)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioMode {
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Concentrates,
    AntiConcentrates,
    Inconclusive,
}

/// E[Σ₂]/[E m]² for one model; M concentrates iff this tends to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCriterion {
    pub model: String,
    pub n: usize,
    pub mode: RatioMode,
    pub trials: usize,
    /// E[Σ₂].
    pub numerator: f64,
    /// [E m]².
    pub denominator: f64,
    /// `None` when every graph is edgeless.
    pub ratio: Option<f64>,
    /// Delta-method standard error (Monte Carlo only).
    pub ratio_se: Option<f64>,
    #[serde(with = "crate::exact::wire_opt")]
    pub exact_ratio: Option<Rational>,
    /// Same ratio on the configuration multigraph before erasure.
    pub pre_erasure_ratio: Option<f64>,
    pub verdict: Verdict,
}

/// Closed-form E[Σ₂] and [E m]² for G(n, p).
fn gnp_closed(n: usize, p: &Rational) -> (Rational, Rational) {
    let nm1 = int(n as u64 - 1);
    let e_d2 = &nm1 * p * (Rational::one() - p) + (&nm1 * p) * (&nm1 * p);
    let e_m = int(n as u64 * (n as u64 - 1) / 2) * p;
    (int(n) * e_d2, &e_m * &e_m)
}

/// Closed-form E[Σ₂] and [E m]² for Chung–Lu, summing over groups of equal
/// weight so that star-like models stay cheap.
fn chung_lu_closed(weights: &[Rational]) -> (Rational, Rational) {
    let total: Rational = weights.iter().sum();
    let mut groups: BTreeMap<&Rational, u64> = BTreeMap::new();
    for w in weights {
        *groups.entry(w).or_default() += 1;
    }
    let (mut e_sigma2, mut e_deg_sum) = (Rational::zero(), Rational::zero());
    for (&wa, &na) in &groups {
        let (mut s1, mut s2) = (Rational::zero(), Rational::zero());
        for (&wb, &nb) in &groups {
            let others = int(nb - u64::from(wa == wb));
            let p = (wa * wb / &total).min(Rational::one());
            s2 += &others * &p * (Rational::one() - &p);
            s1 += others * p;
        }
        e_sigma2 += int(na) * (s2 + &s1 * &s1);
        e_deg_sum += int(na) * s1;
    }
    let e_m = e_deg_sum / int(2);
    (e_sigma2, &e_m * &e_m)
}

pub fn ratio_closed_form(spec: &ModelSpec) -> Result<RatioCriterion, RandGraphError> {
    spec.validate()?;
    let n = spec.n();
    let (num, den, exact) = match spec {
        ModelSpec::Gnp { p, .. } => {
            let (num, den) = gnp_closed(n, p);
            (num, den, true)
        }
        ModelSpec::GeometricTorus { r, .. } => {
            let p = Rational::from_float(std::f64::consts::PI * r * r).expect("finite");
            let (num, den) = gnp_closed(n, &p);
            (num, den, false)
        }
        ModelSpec::Config { law, .. } => {
            // Pre-erasure i.i.d. degrees: E Σ₂ = nμ₂, E m = nμ₁/2.
            let e_m = int(n) * law.mu1() / int(2);
            (int(n) * law.mu2(), &e_m * &e_m, true)
        }
        ModelSpec::ChungLu { weights } => {
            let (num, den) = chung_lu_closed(weights);
            (num, den, true)
        }
        ModelSpec::StarLike { n } => {
            let (num, den) = chung_lu_closed(&ModelSpec::star_like_weights(*n));
            (num, den, true)
        }
    };
    let ratio = (!den.is_zero()).then(|| &num / &den);
    Ok(RatioCriterion {
        model: spec.to_string(),
        n,
        mode: RatioMode::ClosedForm,
        trials: 0,
        numerator: to_f64(&num),
        denominator: to_f64(&den),
        ratio: ratio.as_ref().map(to_f64),
        ratio_se: None,
        exact_ratio: if exact { ratio } else { None },
        pre_erasure_ratio: None,
        verdict: Verdict::Inconclusive,
    })
}

#[derive(Debug, Clone, Copy)]
struct TrialStats {
    m: u64,
    sigma2: u128,
    pre: Option<PreErasure>,
}

fn sample_stats(spec: &ModelSpec, trials: usize, master: u64, tag: u64) -> Result<Vec<TrialStats>, RandGraphError> {
    spec.validate()?;
    let n = spec.n() as u64;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::stream(master, &[tag, n, t as u64]);
            let sample = generate(spec, &mut rng)?;
            Ok(TrialStats {
                m: sample.graph.m() as u64,
                sigma2: sample.graph.stats().sigma2,
                pre: sample.pre_erasure,
            })
        })
        .collect()
}

/// Ŝ/m̂² with a first-order error estimate.
fn ratio_estimate(sig: &[f64], ms: &[f64]) -> (f64, f64, Option<f64>, Option<f64>) {
    let t = ms.len() as f64;
    let (mean_s, var_s, _) = mean_var(sig);
    let (mean_m, var_m, _) = mean_var(ms);
    let den = mean_m * mean_m;
    if mean_m == 0.0 {
        return (mean_s, den, None, None);
    }
    let r = mean_s / den;
    let cov = covariance(sig, ms);
    let rel = var_s / (t * mean_s * mean_s) + 4.0 * var_m / (t * den) - 4.0 * cov / (t * mean_s * mean_m);
    (mean_s, den, Some(r), Some(r * rel.max(0.0).sqrt()))
}

pub fn ratio_monte_carlo(spec: &ModelSpec, trials: usize, master: u64) -> Result<RatioCriterion, RandGraphError> {
    if trials < 2 {
        return Err(RandGraphError::TooFewTrials(trials));
    }
    let samples = sample_stats(spec, trials, master, RATIO_STREAM)?;
    let ms: Vec<f64> = samples.iter().map(|s| s.m as f64).collect();
    let sig: Vec<f64> = samples.iter().map(|s| s.sigma2 as f64).collect();
    let (numerator, denominator, ratio, ratio_se) = ratio_estimate(&sig, &ms);
    let pre_erasure_ratio = if samples.iter().all(|s| s.pre.is_some()) && !samples.is_empty() {
        let pm: Vec<f64> = samples.iter().map(|s| s.pre.expect("checked").m as f64).collect();
        let ps: Vec<f64> = samples.iter().map(|s| s.pre.expect("checked").sigma2 as f64).collect();
        ratio_estimate(&ps, &pm).2
    } else {
        None
    };
    Ok(RatioCriterion {
        model: spec.to_string(),
        n: spec.n(),
        mode: RatioMode::MonteCarlo,
        trials,
        numerator,
        denominator,
        ratio,
        ratio_se,
        exact_ratio: None,
        pre_erasure_ratio,
        verdict: Verdict::Inconclusive,
    })
}

/// Finite-grid cutoffs for reading a limit off a handful of n values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictThresholds {
    /// "Tends to 0" needs a fitted power-law exponent at most this.
    pub decay_exponent: f64,
    /// Values below this count as small; all values above it as bounded away.
    pub small: f64,
    /// "No trend" means |exponent| below this.
    pub flat_exponent: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds {
            decay_exponent: -0.5,
            small: 0.05,
            flat_exponent: 0.1,
        }
    }
}

/// Fitted exponent and verdict for a ratio sequence along an n-grid.
pub fn classify(ns: &[usize], ratios: &[Option<f64>], th: &VerdictThresholds) -> (Option<f64>, Verdict) {
    let Some(values) = ratios.iter().copied().collect::<Option<Vec<f64>>>() else {
        return (None, Verdict::Inconclusive);
    };
    if values.len() < 2 {
        return (None, Verdict::Inconclusive);
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let Some(exponent) = power_law_exponent(&xs, &values) else {
        return (None, Verdict::Inconclusive);
    };
    let last = values[values.len() - 1];
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = if exponent <= th.decay_exponent && last < th.small {
        Verdict::Concentrates
    } else if min > th.small && exponent.abs() < th.flat_exponent {
        Verdict::AntiConcentrates
    } else {
        Verdict::Inconclusive
    };
    (Some(exponent), verdict)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSweep {
    pub model: String,
    pub mode: RatioMode,
    pub points: Vec<RatioCriterion>,
    pub exponent: Option<f64>,
    pub verdict: Verdict,
    pub thresholds: VerdictThresholds,
}

/// The ratio along an n-grid; closed form when `trials` is `None`.
pub fn ratio_sweep(
    template: &ModelTemplate,
    grid: &[usize],
    trials: Option<usize>,
    master: u64,
    th: &VerdictThresholds,
) -> Result<RatioSweep, RandGraphError> {
    let mut points = grid
        .iter()
        .map(|&n| {
            let spec = template.at(n)?;
            match trials {
                None => ratio_closed_form(&spec),
                Some(t) => ratio_monte_carlo(&spec, t, master),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ratios: Vec<Option<f64>> = points.iter().map(|p| p.ratio).collect();
    let (exponent, verdict) = classify(grid, &ratios, th);
    for p in &mut points {
        p.verdict = verdict;
    }
    Ok(RatioSweep {
        model: template.to_string(),
        mode: if trials.is_some() {
            RatioMode::MonteCarlo
        } else {
            RatioMode::ClosedForm
        },
        points,
        exponent,
        verdict,
        thresholds: *th,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarPoint {
    pub n: usize,
    pub trials: usize,
    pub mean_m: f64,
    pub var_m: f64,
    pub var_m_over_mean_sq: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarCheck {
    pub model: String,
    pub points: Vec<StarPoint>,
    pub exponent: Option<f64>,
    /// Var(m)/[E m]² is identically 0 or decays at least like n^decay_exponent.
    pub holds: bool,
}

/// Estimates Var(m)/[E m]² along the grid to see whether m/E m → 1 in
/// quadratic mean.
pub fn assumption_star_check(
    template: &ModelTemplate,
    grid: &[usize],
    trials: usize,
    master: u64,
    th: &VerdictThresholds,
) -> Result<StarCheck, RandGraphError> {
    if trials < 2 {
        return Err(RandGraphError::TooFewTrials(trials));
    }
    let points = grid
        .iter()
        .map(|&n| {
            let samples = sample_stats(&template.at(n)?, trials, master, STAR_STREAM)?;
            let mut acc = IntMoments::default();
            for s in &samples {
                acc.push(s.m as i64);
            }
            let sum = acc.summary();
            let sq = sum.mean * sum.mean;
            let (q, se) = if sq > 0.0 {
                (sum.variance / sq, sum.se_variance / sq)
            } else {
                (0.0, 0.0)
            };
            Ok(StarPoint {
                n,
                trials,
                mean_m: sum.mean,
                var_m: sum.variance,
                var_m_over_mean_sq: q,
                se,
            })
        })
        .collect::<Result<Vec<_>, RandGraphError>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.var_m_over_mean_sq).collect();
    let exponent = power_law_exponent(&xs, &ys);
    let holds = ys.iter().all(|&y| y == 0.0) || exponent.is_some_and(|e| e <= th.decay_exponent);
    Ok(StarCheck {
        model: template.to_string(),
        points,
        exponent,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(s: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(s)
    }

    fn spec(s: &str) -> ModelSpec {
        ModelTemplate::parse(s).unwrap().spec().unwrap()
    }

    #[test]
    fn parses_model_strings() {
        assert_eq!(spec("gnp:n=500,p=0.1"), ModelSpec::Gnp { n: 500, p: frac(1, 10) });
        assert_eq!(
            spec("config:n=500,law=3:1.0"),
            ModelSpec::Config { n: 500, law: DegreeLaw::point(3).unwrap() }
        );
        assert_eq!(spec("geo:n=500,r=0.1"), ModelSpec::GeometricTorus { n: 500, r: 0.1 });
        assert_eq!(spec("starlike:n=500"), ModelSpec::StarLike { n: 500 });
        let mixed = spec("config:n=10,law=1:1/2,3:0.5");
        let ModelSpec::Config { law, .. } = mixed else { panic!() };
        assert_eq!(law.mu1(), int(2));
        assert_eq!(law.mu2(), int(5));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        std::fs::write(&path, "1 2\n3.5\n").unwrap();
        let cl = spec(&format!("cl:w={}", path.display()));
        assert_eq!(cl, ModelSpec::ChungLu { weights: vec![int(1), int(2), frac(7, 2)] });
    }

    #[test]
    fn rejects_bad_models() {
        for bad in [
            "gnp:n=5",
            "gnp:n=5,p=1.5",
            "geo:n=5,r=0.6",
            "geo:n=5,r=0",
            "config:n=5,law=0:1",
            "config:n=5,law=1:0.5",
            "config:n=5,law=x:1",
            "cl:w=/nonexistent/weights",
            "bogus:n=3",
            "gnp:n=5,q=0.1",
        ] {
            let r = ModelTemplate::parse(bad).and_then(|t| t.spec());
            assert!(r.is_err(), "{bad} should be rejected");
        }
        assert_eq!(
            ModelTemplate::parse("config:n=3,law=0:1").unwrap_err(),
            RandGraphError::DegenerateLaw
        );
        assert!(matches!(
            ModelTemplate::parse("gnp:p=4/n").unwrap().spec(),
            Err(RandGraphError::NeedsN("gnp"))
        ));
    }

    #[test]
    fn parameter_expressions() {
        let e = ParamExpr::parse("4/n").unwrap();
        assert_eq!(e.eval_rational(100), frac(1, 25));
        let e = ParamExpr::parse("n^-0.5").unwrap();
        assert!((e.eval(400) - 0.05).abs() < 1e-15);
        let e = ParamExpr::parse("0.5*n^(-1)").unwrap();
        assert_eq!(e.eval_rational(10), frac(1, 20));
        assert_eq!(ParamExpr::parse("3/4").unwrap().eval_rational(7), frac(3, 4));
        assert!(ParamExpr::parse("4n").is_none());
        assert!(ParamExpr::parse("n^x").is_none());
    }

    #[test]
    fn gnp_extremes() {
        let empty = generate(&ModelSpec::Gnp { n: 30, p: int(0) }, &mut rng(1)).unwrap();
        assert_eq!(empty.graph.m(), 0);
        let full = generate(&ModelSpec::Gnp { n: 30, p: int(1) }, &mut rng(1)).unwrap();
        assert_eq!(full.graph, crate::graph::Family::Complete(30).generate().unwrap());
    }

    #[test]
    fn gnp_edge_count_is_binomial() {
        let spec = ModelSpec::Gnp { n: 100, p: frac(3, 10) };
        let ms: Vec<f64> = (0..2000)
            .map(|t| generate(&spec, &mut seed::stream(7, &[t])).unwrap().graph.m() as f64)
            .collect();
        let (mean, _, se) = mean_var(&ms);
        assert!((mean - 1485.0).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn gnp_mean_squared_degree() {
        for p in [frac(1, 20), frac(3, 10)] {
            let n = 200usize;
            let spec = ModelSpec::Gnp { n, p: p.clone() };
            let per_trial: Vec<f64> = (0..500)
                .map(|t| {
                    let g = generate(&spec, &mut seed::stream(11, &[t])).unwrap().graph;
                    g.stats().sigma2 as f64 / n as f64
                })
                .collect();
            let (mean, _, se) = mean_var(&per_trial);
            let p = to_f64(&p);
            let expect = (n as f64 - 1.0) * p * (1.0 - p) + ((n as f64 - 1.0) * p).powi(2);
            assert!((mean - expect).abs() < 4.0 * se, "p {p}: {mean} vs {expect} (se {se})");
        }
    }

    #[test]
    fn torus_edge_density() {
        let (n, r) = (60usize, 0.15);
        let spec = ModelSpec::GeometricTorus { n, r };
        let pairs = (n * (n - 1) / 2) as f64;
        let dens: Vec<f64> = (0..500)
            .map(|t| generate(&spec, &mut seed::stream(3, &[t])).unwrap().graph.m() as f64 / pairs)
            .collect();
        let (mean, _, se) = mean_var(&dens);
        let p = std::f64::consts::PI * r * r;
        assert!((mean - p).abs() < 4.0 * se, "{mean} vs {p} (se {se})");
    }

    #[test]
    fn uniform_chung_lu_is_gnp() {
        let weights = vec![int(5); 50];
        let cl = ratio_closed_form(&ModelSpec::ChungLu { weights }).unwrap();
        let gnp = ratio_closed_form(&ModelSpec::Gnp { n: 50, p: frac(1, 10) }).unwrap();
        assert!(cl.exact_ratio.is_some());
        assert_eq!(cl.exact_ratio, gnp.exact_ratio);
    }

    #[test]
    fn config_degree_sum_is_even() {
        let spec = spec("config:n=101,law=1:1/2,2:1/2");
        for t in 0..200 {
            let s = generate(&spec, &mut seed::stream(5, &[t])).unwrap();
            let pre = s.pre_erasure.unwrap();
            assert!(pre.m >= s.graph.m() as u64);
            assert_eq!(pre.m - pre.loops - pre.parallel, s.graph.m() as u64);
        }
    }

    #[test]
    fn config_closed_form() {
        for (d, n) in [(3u64, 500usize), (1, 10), (7, 64)] {
            let r = ratio_closed_form(&ModelSpec::Config { n, law: DegreeLaw::point(d).unwrap() }).unwrap();
            assert_eq!(r.exact_ratio, Some(frac(4, n as u64)));
        }
        let law = DegreeLaw::parse("1:1/2,3:1/2").unwrap();
        let r = ratio_closed_form(&ModelSpec::Config { n: 100, law }).unwrap();
        // 4·5/(2²)/100
        assert_eq!(r.exact_ratio, Some(frac(1, 20)));
    }

    #[test]
    fn star_like_stays_bounded_away() {
        let t = ModelTemplate::parse("starlike").unwrap();
        let sweep = ratio_sweep(&t, &[200, 400, 800, 1600], None, 0, &VerdictThresholds::default()).unwrap();
        for p in &sweep.points {
            let r = p.ratio.unwrap();
            assert!(r > 0.1 && (r - 4.0 / 9.0).abs() < 0.05, "{r}");
        }
        assert_eq!(sweep.verdict, Verdict::AntiConcentrates);
    }

    #[test]
    fn dense_gnp_concentrates() {
        let t = ModelTemplate::parse("gnp:p=n^-0.5").unwrap();
        let sweep = ratio_sweep(&t, &[100, 400, 1600, 6400], None, 0, &VerdictThresholds::default()).unwrap();
        assert!(sweep.exponent.unwrap() <= -0.5);
        assert_eq!(sweep.verdict, Verdict::Concentrates);
        let ratios: Vec<f64> = sweep.points.iter().map(|p| p.ratio.unwrap()).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn monte_carlo_matches_closed_form() {
        for s in ["gnp:n=500,p=0.1", "config:n=500,law=3:1"] {
            let spec = spec(s);
            let exact = ratio_closed_form(&spec).unwrap().ratio.unwrap();
            let mc = ratio_monte_carlo(&spec, 200, 42).unwrap();
            let r = mc.ratio.unwrap();
            assert!((r - exact).abs() < 0.05 * exact, "{s}: {r} vs {exact}");
        }
        let star = ratio_monte_carlo(&ModelSpec::StarLike { n: 400 }, 200, 42).unwrap();
        assert!(star.ratio.unwrap() > 0.1);
    }

    #[test]
    fn monte_carlo_edge_cases() {
        let spec = ModelSpec::Gnp { n: 20, p: int(0) };
        let mc = ratio_monte_carlo(&spec, 5, 1).unwrap();
        assert_eq!(mc.ratio, None);
        assert_eq!(mc.verdict, Verdict::Inconclusive);
        assert_eq!(ratio_monte_carlo(&spec, 1, 1), Err(RandGraphError::TooFewTrials(1)));
        let a = ratio_monte_carlo(&ModelSpec::Gnp { n: 60, p: frac(1, 5) }, 50, 9).unwrap();
        let b = ratio_monte_carlo(&ModelSpec::Gnp { n: 60, p: frac(1, 5) }, 50, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sparse_gnp_edge_count_concentrates() {
        let t = ModelTemplate::parse("gnp:p=4/n").unwrap();
        let check = assumption_star_check(&t, &[250, 500, 1000, 2000], 300, 8, &VerdictThresholds::default()).unwrap();
        let e = check.exponent.unwrap();
        assert!((-1.3..=-0.7).contains(&e), "{e}");
        assert!(check.holds);
    }

    #[test]
    fn deterministic_model_has_no_edge_count_variance() {
        let t = ModelTemplate::parse("gnp:p=1").unwrap();
        let check = assumption_star_check(&t, &[10, 20], 5, 0, &VerdictThresholds::default()).unwrap();
        assert!(check.points.iter().all(|p| p.var_m_over_mean_sq == 0.0));
        assert!(check.holds);
    }

    #[test]
    fn classification_edges() {
        let th = VerdictThresholds::default();
        assert_eq!(classify(&[10], &[Some(0.01)], &th), (None, Verdict::Inconclusive));
        assert_eq!(classify(&[10, 20], &[Some(0.1), None], &th).1, Verdict::Inconclusive);
        assert_eq!(classify(&[10, 100], &[Some(0.3), Some(0.03)], &th).1, Verdict::Concentrates);
        assert_eq!(classify(&[10, 100], &[Some(0.3), Some(0.3)], &th).1, Verdict::AntiConcentrates);
        assert_eq!(classify(&[10, 100], &[Some(0.3), Some(0.1)], &th).1, Verdict::Inconclusive);
    }
}
