//! Closed-form first and second moments of Mᵢ, M and L under a uniform
//! c-coloring, the pair-event coefficients a(c), b(c), the imbalance
//! functional ρ, and the Paley–Zygmund lower bound.
//!
//! All exact routines work on rationals. Variances need n ≥ 4 because
//! kn(n,3) and kn(n,4) appear as denominators; smaller graphs should go
//! through [`crate::oracle`], which is exact at any n.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Composition;
use crate::exact::{frac, int, Rational};
use crate::graph::{Graph, GraphStats};
use crate::symfun::falling_factorial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentsError {
    #[error("means need n >= 2, got n = {0}")]
    TooSmallForMean(usize),
    #[error("variance formulas need n >= 4 (got n = {0}); use the enumeration oracle for smaller graphs")]
    TooSmallForVariance(usize),
    #[error("graph has {graph} vertices but the composition covers {classes}")]
    SizeMismatch { graph: usize, classes: usize },
    #[error("color index {index} out of range for s = {s}")]
    ColorIndex { index: usize, s: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("theta must lie in [0, 1), got {0}")]
    Theta(String),
}

fn kn(a: usize, b: usize) -> BigInt {
    falling_factorial(a as u64, b as u64)
}

/// kn(a,b)/kn(n,b): the probability that b fixed vertices all get one class
/// of size a.
fn falling_ratio(a: usize, n: usize, b: usize) -> Rational {
    Rational::new(kn(a, b), kn(n, b))
}

fn need_mean(n: usize) -> Result<(), MomentsError> {
    if n < 2 {
        Err(MomentsError::TooSmallForMean(n))
    } else {
        Ok(())
    }
}

fn need_variance(n: usize) -> Result<(), MomentsError> {
    if n < 4 {
        Err(MomentsError::TooSmallForVariance(n))
    } else {
        Ok(())
    }
}

fn same_size(stats: &GraphStats, c: &Composition) -> Result<(), MomentsError> {
    if stats.n != c.n() {
        return Err(MomentsError::SizeMismatch {
            graph: stats.n,
            classes: c.n(),
        });
    }
    Ok(())
}

/// E[Mᵢ] = m·kn(cᵢ,2)/kn(n,2).
pub fn mean_mi(m: usize, n: usize, ci: usize) -> Result<Rational, MomentsError> {
    need_mean(n)?;
    Ok(int(m) * falling_ratio(ci, n, 2))
}

/// Var(Mᵢ) from Σ₂, m and the class size cᵢ.
pub fn var_mi(stats: &GraphStats, c: &Composition, i: usize) -> Result<Rational, MomentsError> {
    same_size(stats, c)?;
    let n = c.n();
    need_variance(n)?;
    let ci = *c.classes().get(i).ok_or(MomentsError::ColorIndex { index: i, s: c.s() })?;
    let r2 = falling_ratio(ci, n, 2);
    let r3 = falling_ratio(ci, n, 3);
    let r4 = falling_ratio(ci, n, 4);
    let m = int(stats.m);
    let sigma2 = int(stats.sigma2);
    let adjacent = Rational::new(kn(ci, 3) * BigInt::from(n - ci), kn(n, 4));
    Ok(adjacent * sigma2 - (&r2 * &r2 - &r4) * &m * &m + (r2 - int(2) * r3 + r4) * m)
}

/// a(c) and b(c): the probabilities that two adjacent, respectively two
/// disjoint, edges are both bichromatic.
pub fn coefficients_ab(c: &Composition) -> Result<(Rational, Rational), MomentsError> {
    let n = c.n();
    need_variance(n)?;
    let e = c.elementary(3);
    let a = Rational::new(e[2].clone(), kn(n, 2)) + Rational::new(BigInt::from(3) * &e[3], kn(n, 3));
    let inner = &e[2] * &e[2] - BigInt::from(n - 1) * &e[2] - BigInt::from(3) * &e[3];
    let b = Rational::new(BigInt::from(4) * inner, kn(n, 4));
    Ok((a, b))
}

/// (E[L], E[M]) = (2m·e₂/kn(n,2), m·Σ kn(cᵢ,2)/kn(n,2)).
pub fn mean_m_l(m: usize, c: &Composition) -> Result<(Rational, Rational), MomentsError> {
    let n = c.n();
    need_mean(n)?;
    let e2 = c.elementary(2).swap_remove(2);
    let mean_l = Rational::new(BigInt::from(2 * m) * e2, kn(n, 2));
    let same: BigInt = c.classes().iter().map(|&ci| kn(ci, 2)).sum();
    let mean_m = Rational::new(BigInt::from(m) * same, kn(n, 2));
    Ok((mean_l, mean_m))
}

/// σ², the common variance of M and L.
pub fn var_common(stats: &GraphStats, c: &Composition) -> Result<Rational, MomentsError> {
    same_size(stats, c)?;
    let n = c.n();
    let (a, b) = coefficients_ab(c)?;
    let e2 = c.elementary(2).swap_remove(2);
    let p_bi = Rational::new(e2, kn(n, 2));
    let m = int(stats.m);
    let sigma2 = int(stats.sigma2);
    Ok((&a - &b) * sigma2
        + &m * &m * (&b - int(4) * &p_bi * &p_bi)
        + m * (int(2) * p_bi - int(2) * a + b))
}

/// ρ = p₃(γ) − p₂(γ)², zero exactly at the balanced composition.
pub fn rho(c: &Composition) -> Rational {
    let gamma = c.distribution();
    let p2 = gamma.power_sum(2);
    gamma.power_sum(3) - &p2 * &p2
}

/// (1−θ)²·var/m², a lower bound on P(|X − EX| > θ·E|X − EX|) for 0 ≤ X ≤ m.
pub fn pz_lower_bound(theta: &Rational, var: &Rational, m: usize) -> Result<Rational, MomentsError> {
    if theta.is_negative() || *theta >= Rational::one() {
        return Err(MomentsError::Theta(theta.to_string()));
    }
    if m == 0 {
        return Err(MomentsError::NoEdges);
    }
    let slack = Rational::one() - theta;
    Ok(&slack * &slack * var / int(m * m))
}

/// Every exact first/second-moment quantity of one (graph, composition) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct MomentReport {
    pub n: usize,
    pub m: usize,
    pub sigma2: u128,
    pub classes: Vec<usize>,
    #[serde(with = "crate::exact::wire_vec")]
    pub per_color_mean: Vec<Rational>,
    #[serde(with = "crate::exact::wire_vec")]
    pub per_color_var: Vec<Rational>,
    #[serde(with = "crate::exact::wire")]
    pub mean_M: Rational,
    #[serde(with = "crate::exact::wire")]
    pub mean_L: Rational,
    #[serde(with = "crate::exact::wire")]
    pub var_common: Rational,
    #[serde(with = "crate::exact::wire")]
    pub a_c: Rational,
    #[serde(with = "crate::exact::wire")]
    pub b_c: Rational,
    #[serde(with = "crate::exact::wire")]
    pub rho: Rational,
    #[serde(with = "crate::exact::wire")]
    pub zeta_sq: Rational,
    #[serde(with = "crate::exact::wire")]
    pub imbalance_sq: Rational,
    #[serde(with = "crate::exact::wire")]
    pub normalized_var: Rational,
}

impl MomentReport {
    /// ρ·ζ², the leading term of σ²/m².
    pub fn rho_zeta_product(&self) -> Rational {
        &self.rho * &self.zeta_sq
    }

    pub fn pz_bound(&self, theta: &Rational) -> Rational {
        pz_lower_bound(theta, &self.var_common, self.m).expect("report has m >= 1")
    }
}

pub fn full_report(g: &Graph, c: &Composition) -> Result<MomentReport, MomentsError> {
    let stats = g.stats();
    same_size(&stats, c)?;
    need_variance(c.n())?;
    if stats.m == 0 {
        return Err(MomentsError::NoEdges);
    }
    let per_color_mean = c
        .classes()
        .iter()
        .map(|&ci| mean_mi(stats.m, c.n(), ci))
        .collect::<Result<Vec<_>, _>>()?;
    let per_color_var = (0..c.s())
        .map(|i| var_mi(&stats, c, i))
        .collect::<Result<Vec<_>, _>>()?;
    let (mean_l, mean_m) = mean_m_l(stats.m, c)?;
    let var = var_common(&stats, c)?;
    let (a, b) = coefficients_ab(c)?;
    let zeta_sq = frac(stats.sigma2, (stats.m as u128) * (stats.m as u128));
    Ok(MomentReport {
        n: stats.n,
        m: stats.m,
        sigma2: stats.sigma2,
        classes: c.classes().to_vec(),
        per_color_mean,
        per_color_var,
        mean_M: mean_m,
        mean_L: mean_l,
        normalized_var: &var / int(stats.m * stats.m),
        var_common: var,
        a_c: a,
        b_c: b,
        rho: rho(c),
        zeta_sq,
        imbalance_sq: crate::coloring::imbalance(c),
    })
}

/// 64-bit mirrors of the exact formulas for large-n sweeps.
pub mod float {
    /// kn(a,b)/kn(n,b) as a product of b factors (a−j)/(n−j).
    pub fn falling_ratio(a: f64, n: f64, b: u32) -> f64 {
        (0..b).map(|j| (a - j as f64) / (n - j as f64)).map(|x| x.max(0.0)).product()
    }

    fn kn(a: f64, b: u32) -> f64 {
        (0..b).map(|j| a - j as f64).product()
    }

    pub fn mean_mi(m: f64, n: f64, ci: f64) -> f64 {
        m * falling_ratio(ci, n, 2)
    }

    pub fn var_mi(n: f64, m: f64, sigma2: f64, ci: f64) -> f64 {
        let r2 = falling_ratio(ci, n, 2);
        let r3 = falling_ratio(ci, n, 3);
        let r4 = falling_ratio(ci, n, 4);
        let adjacent = r3 * (n - ci) / (n - 3.0);
        adjacent * sigma2 - (r2 * r2 - r4) * m * m + (r2 - 2.0 * r3 + r4) * m
    }

    /// (e₂, e₃) of the class sizes.
    fn e2_e3(classes: &[f64]) -> (f64, f64) {
        let mut e = [1.0, 0.0, 0.0, 0.0];
        for &x in classes {
            for k in (1..=3).rev() {
                e[k] += e[k - 1] * x;
            }
        }
        (e[2], e[3])
    }

    pub fn coefficients_ab(classes: &[f64]) -> (f64, f64) {
        let n: f64 = classes.iter().sum();
        let (e2, e3) = e2_e3(classes);
        let a = e2 / kn(n, 2) + 3.0 * e3 / kn(n, 3);
        let p = e2 / kn(n, 2);
        // 4(e₂² − (n−1)e₂ − 3e₃)/kn(n,4), arranged to avoid overflow
        let tail = (n - 2.0) * (n - 3.0);
        let b = 4.0 * (p * p * n * (n - 1.0) / tail - p * (n - 1.0) / tail - 3.0 * e3 / kn(n, 4));
        (a, b)
    }

    pub fn mean_m_l(m: f64, classes: &[f64]) -> (f64, f64) {
        let n: f64 = classes.iter().sum();
        let (e2, _) = e2_e3(classes);
        let same: f64 = classes.iter().map(|&c| falling_ratio(c, n, 2)).sum();
        (2.0 * m * e2 / kn(n, 2), m * same)
    }

    pub fn var_common(m: f64, sigma2: f64, classes: &[f64]) -> f64 {
        let n: f64 = classes.iter().sum();
        let (a, b) = coefficients_ab(classes);
        let (e2, _) = e2_e3(classes);
        let p = e2 / kn(n, 2);
        (a - b) * sigma2 + m * m * (b - 4.0 * p * p) + m * (2.0 * p - 2.0 * a + b)
    }

    pub fn rho(classes: &[f64]) -> f64 {
        let n: f64 = classes.iter().sum();
        let p2: f64 = classes.iter().map(|c| (c / n).powi(2)).sum();
        let p3: f64 = classes.iter().map(|c| (c / n).powi(3)).sum();
        p3 - p2 * p2
    }
}
