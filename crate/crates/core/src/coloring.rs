//! Compositions, uniform c-colorings, monochromatic edge counts, and the exact
//! probabilities of "sets receive prescribed / distinct colors" events.
//!
//! Colors are 0-based indices `0..s` throughout the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{frac, int, Rational};
use crate::graph::Graph;
use crate::symfun::{elementary_symmetric_all, falling_factorial, IntVector};

/// Injection enumeration is refused above this many colors.
pub const MAX_COLORS_FOR_INJECTIONS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("a composition needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("class {index} is empty; every class needs at least one vertex")]
    EmptyClass { index: usize },
    #[error("cannot split n = {n} into {s} non-empty classes")]
    TooFewVertices { n: usize, s: usize },
    #[error("coloring has {colors} entries but the graph has {n} vertices")]
    LengthMismatch { colors: usize, n: usize },
    #[error("event needs between 1 and s = {s} sets, got {k}")]
    EventArity { k: usize, s: usize },
    #[error("event set sizes must be positive")]
    EmptyEventSet,
    #[error("event sets hold {total} vertices but n = {n}")]
    EventTooLarge { total: usize, n: usize },
    #[error("color map is not an injection into 0..{s}: {iota:?}")]
    NotInjective { iota: Vec<usize>, s: usize },
    #[error(
        "irregular event sizes need injection enumeration, limited to s <= {MAX_COLORS_FOR_INJECTIONS} (got s = {0}); use equal sizes or the (2,1,...,1) shape"
    )]
    TooManyColors(usize),
    #[error("invalid class ratios: {0}")]
    InvalidRatios(String),
    #[error("cannot parse classes {0:?}; expected e.g. 50,30,20 or balanced:3")]
    Parse(String),
}

/// Color class sizes (c₁, …, c_s) of a composition of n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    classes: Vec<usize>,
    n: usize,
}

impl Composition {
    pub fn new(classes: Vec<usize>) -> Result<Self, ColoringError> {
        if classes.len() < 2 {
            return Err(ColoringError::TooFewClasses(classes.len()));
        }
        if let Some(index) = classes.iter().position(|&c| c == 0) {
            return Err(ColoringError::EmptyClass { index });
        }
        let n = classes.iter().sum();
        Ok(Composition { classes, n })
    }

    /// Splits n as evenly as possible, larger parts first.
    pub fn balanced(n: usize, s: usize) -> Result<Self, ColoringError> {
        if s > n {
            return Err(ColoringError::TooFewVertices { n, s });
        }
        if s < 2 {
            return Err(ColoringError::TooFewClasses(s));
        }
        let (q, r) = (n / s, n % s);
        Self::new((0..s).map(|i| q + usize::from(i < r)).collect())
    }

    /// Largest-remainder apportionment of n by the given positive weights
    /// (normalised to sum 1). Ties go to the lowest index.
    pub fn from_ratios(n: usize, ratios: &[Rational]) -> Result<Self, ColoringError> {
        if ratios.len() < 2 {
            return Err(ColoringError::TooFewClasses(ratios.len()));
        }
        if ratios.iter().any(|r| *r <= Rational::zero()) {
            return Err(ColoringError::InvalidRatios("ratios must be positive".into()));
        }
        let total: Rational = ratios.iter().sum();
        let quotas: Vec<Rational> = ratios.iter().map(|r| r / &total * int(n)).collect();
        let mut classes: Vec<usize> = quotas
            .iter()
            .map(|q| q.floor().to_integer().try_into().unwrap_or(0))
            .collect();
        let assigned: usize = classes.iter().sum();
        let mut order: Vec<usize> = (0..ratios.len()).collect();
        // stable sort keeps lower indices first among equal remainders
        order.sort_by(|&a, &b| quotas[b].fract().cmp(&quotas[a].fract()));
        for &i in order.iter().take(n - assigned) {
            classes[i] += 1;
        }
        Self::new(classes).map_err(|e| match e {
            ColoringError::EmptyClass { .. } => ColoringError::TooFewVertices {
                n,
                s: ratios.len(),
            },
            other => other,
        })
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.classes.len()
    }

    pub fn as_int_vector(&self) -> IntVector {
        IntVector::new(self.classes.iter().map(|&c| BigInt::from(c)).collect())
            .expect("composition classes are non-empty and non-negative")
    }

    /// e_0, …, e_{max_k} evaluated at the class sizes.
    pub fn elementary(&self, max_k: usize) -> Vec<BigInt> {
        elementary_symmetric_all(&self.as_int_vector(), max_k)
    }

    /// γ = c / n.
    pub fn distribution(&self) -> ColorDistribution {
        ColorDistribution {
            gamma: self.classes.iter().map(|&c| frac(c, self.n)).collect(),
        }
    }

    /// Number of distinct c-colorings, n!/(c₁!···c_s!).
    pub fn multinomial(&self) -> BigInt {
        let mut remaining = self.n as u64;
        let mut acc = BigInt::one();
        for &c in &self.classes {
            // C(remaining, c)
            acc *= falling_factorial(remaining, c as u64) / falling_factorial(c as u64, c as u64);
            remaining -= c as u64;
        }
        acc
    }

    /// The color multiset 0^{c₀} 1^{c₁} … in non-decreasing order.
    pub fn color_multiset(&self) -> Vec<u16> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i as u16, c))
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = ColoringError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.classes
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// How class sizes are chosen for a given n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSpec {
    Fixed(Composition),
    Balanced(usize),
    Ratios(Vec<Rational>),
}

impl ClassSpec {
    pub fn resolve(&self, n: usize) -> Result<Composition, ColoringError> {
        match self {
            ClassSpec::Fixed(c) => Ok(c.clone()),
            ClassSpec::Balanced(s) => Composition::balanced(n, *s),
            ClassSpec::Ratios(r) => Composition::from_ratios(n, r),
        }
    }

    pub fn is_balanced(&self) -> bool {
        matches!(self, ClassSpec::Balanced(_))
    }
}

impl FromStr for ClassSpec {
    type Err = ColoringError;

    /// `50,30,20`, `balanced:3` or `ratios:3/4,1/4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ColoringError::Parse(s.to_string());
        if let Some(rest) = s.strip_prefix("balanced:") {
            return Ok(ClassSpec::Balanced(rest.trim().parse().map_err(|_| err())?));
        }
        if let Some(rest) = s.strip_prefix("ratios:") {
            let ratios = rest
                .split(',')
                .map(|t| crate::exact::parse_rational(t).ok_or_else(err))
                .collect::<Result<Vec<_>, _>>()?;
            if ratios.len() < 2 || ratios.iter().any(|r| *r <= Rational::zero()) {
                return Err(ColoringError::InvalidRatios(rest.to_string()));
            }
            return Ok(ClassSpec::Ratios(ratios));
        }
        let classes = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| err()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ClassSpec::Fixed(Composition::new(classes)?))
    }
}

/// γ = c/n as exact rationals; a point of the open simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorDistribution {
    pub gamma: Vec<Rational>,
}

impl ColorDistribution {
    pub fn power_sum(&self, k: i32) -> Rational {
        self.gamma.iter().map(|g| num_traits::pow(g.clone(), k as usize)).sum()
    }
}

/// A c-coloring as a dense color sequence indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorAssignment {
    pub colors: Vec<u16>,
}

/// Draws a uniformly random c-coloring by shuffling the color multiset.
pub fn sample<R: Rng + ?Sized>(c: &Composition, rng: &mut R) -> ColorAssignment {
    let mut colors = c.color_multiset();
    colors.shuffle(rng);
    ColorAssignment { colors }
}

/// Reshuffles `buf` in place; `buf` must hold a permutation of the multiset.
pub fn resample_into<R: Rng + ?Sized>(buf: &mut [u16], rng: &mut R) {
    buf.shuffle(rng);
}

/// Per-color monochromatic counts, their total M, and L = m − M.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub per_color: Vec<u64>,
    pub mono: u64,
    pub bi: u64,
}

pub fn count(g: &Graph, s: usize, colors: &[u16]) -> Result<EdgeCounts, ColoringError> {
    if colors.len() != g.n() {
        return Err(ColoringError::LengthMismatch {
            colors: colors.len(),
            n: g.n(),
        });
    }
    let mut per_color = vec![0u64; s];
    for &(u, v) in g.edges() {
        let cu = colors[u];
        if cu == colors[v] {
            per_color[cu as usize] += 1;
        }
    }
    let mono = per_color.iter().sum();
    Ok(EdgeCounts {
        per_color,
        mono,
        bi: g.m() as u64 - mono,
    })
}

/// Monochromatic edge total only; the hot path of the samplers.
pub fn count_mono(g: &Graph, colors: &[u16]) -> u64 {
    g.edges()
        .iter()
        .filter(|&&(u, v)| colors[u] == colors[v])
        .count() as u64
}

fn check_event(c: &Composition, sizes: &[usize]) -> Result<usize, ColoringError> {
    let k = sizes.len();
    if k == 0 || k > c.s() {
        return Err(ColoringError::EventArity { k, s: c.s() });
    }
    if sizes.contains(&0) {
        return Err(ColoringError::EmptyEventSet);
    }
    let total: usize = sizes.iter().sum();
    if total > c.n() {
        return Err(ColoringError::EventTooLarge { total, n: c.n() });
    }
    Ok(total)
}

/// P(every vertex of the j-th set gets color iota[j]) for disjoint sets of
/// the given sizes: Π_j kn(c_{ι(j)}, a_j) / kn(n, Σa).
pub fn prob_fixed_colors(
    c: &Composition,
    sizes: &[usize],
    iota: &[usize],
) -> Result<Rational, ColoringError> {
    let total = check_event(c, sizes)?;
    let s = c.s();
    let mut seen = vec![false; s];
    if iota.len() != sizes.len()
        || iota.iter().any(|&i| i >= s || std::mem::replace(&mut seen[i], true))
    {
        return Err(ColoringError::NotInjective {
            iota: iota.to_vec(),
            s,
        });
    }
    let num: BigInt = sizes
        .iter()
        .zip(iota)
        .map(|(&a, &i)| falling_factorial(c.classes()[i] as u64, a as u64))
        .product();
    Ok(Rational::new(num, falling_factorial(c.n() as u64, total as u64)))
}

/// P(each set is monochromatic and the sets get pairwise distinct colors).
///
/// Equal sizes and the (2,1,…,1) shape use closed forms in the e_k; other
/// shapes sum over all injections.
pub fn prob_distinct_colors(c: &Composition, sizes: &[usize]) -> Result<Rational, ColoringError> {
    if sizes.len() > c.s() && !sizes.is_empty() && !sizes.contains(&0) {
        return Ok(Rational::zero());
    }
    check_event(c, sizes)?;
    let k = sizes.len();
    if sizes.iter().all(|&a| a == sizes[0]) {
        return Ok(prob_distinct_equal_sizes(c, k, sizes[0]));
    }
    if sizes.iter().filter(|&&a| a == 2).count() == 1 && sizes.iter().filter(|&&a| a == 1).count() == k - 1 {
        return Ok(prob_distinct_one_pair(c, k));
    }
    prob_distinct_by_injections(c, sizes)
}

/// k!·E_k(kn(c₁,b), …, kn(c_s,b)) / kn(n, kb).
pub fn prob_distinct_equal_sizes(c: &Composition, k: usize, b: usize) -> Rational {
    if k > c.s() || k * b > c.n() {
        return Rational::zero();
    }
    let lifted = c
        .as_int_vector()
        .map(|ci| crate::symfun::falling_factorial_big(ci, b as u64));
    let ek = crate::symfun::elementary_symmetric(&lifted, k);
    Rational::new(
        falling_factorial(k as u64, k as u64) * ek,
        falling_factorial(c.n() as u64, (k * b) as u64),
    )
}

/// Sizes (2,1,…,1) with k sets: (k−1)!·[(n−k)e_k − (k+1)e_{k+1}] / kn(n,k+1).
pub fn prob_distinct_one_pair(c: &Composition, k: usize) -> Rational {
    let n = c.n();
    if k > c.s() || k + 1 > n {
        return Rational::zero();
    }
    let e = c.elementary(k + 1);
    let num = falling_factorial(k as u64 - 1, k as u64 - 1)
        * (BigInt::from(n - k) * &e[k] - BigInt::from(k + 1) * &e[k + 1]);
    Rational::new(num, falling_factorial(n as u64, k as u64 + 1))
}

/// Direct sum over all injections [k] → [s]; cost s!/(s−k)!.
pub fn prob_distinct_by_injections(
    c: &Composition,
    sizes: &[usize],
) -> Result<Rational, ColoringError> {
    let s = c.s();
    if sizes.len() > s {
        return Ok(Rational::zero());
    }
    let total = check_event(c, sizes)?;
    if s > MAX_COLORS_FOR_INJECTIONS {
        return Err(ColoringError::TooManyColors(s));
    }
    let lifted: Vec<Vec<BigInt>> = sizes
        .iter()
        .map(|&a| {
            c.classes()
                .iter()
                .map(|&ci| falling_factorial(ci as u64, a as u64))
                .collect()
        })
        .collect();
    let mut used = vec![false; s];
    let num = sum_injections(&lifted, 0, &mut used);
    Ok(Rational::new(num, falling_factorial(c.n() as u64, total as u64)))
}

fn sum_injections(lifted: &[Vec<BigInt>], j: usize, used: &mut [bool]) -> BigInt {
    if j == lifted.len() {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for i in 0..used.len() {
        if used[i] || lifted[j][i].is_zero() {
            continue;
        }
        used[i] = true;
        acc += &lifted[j][i] * sum_injections(lifted, j + 1, used);
        used[i] = false;
    }
    acc
}

/// ‖γ − υ_s‖² = Σ (γᵢ − 1/s)².
pub fn imbalance(c: &Composition) -> Rational {
    let centre = frac(1, c.s());
    c.distribution()
        .gamma
        .iter()
        .map(|g| {
            let d = g - &centre;
            &d * &d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::seed;

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn composition_invariants() {
        assert_eq!(Composition::new(vec![5]), Err(ColoringError::TooFewClasses(1)));
        assert_eq!(
            Composition::new(vec![2, 0]),
            Err(ColoringError::EmptyClass { index: 1 })
        );
        assert_eq!(Composition::balanced(10, 3).unwrap().classes(), &[4, 3, 3]);
        assert_eq!(Composition::balanced(9, 3).unwrap().classes(), &[3, 3, 3]);
        assert!(Composition::balanced(2, 3).is_err());
        assert_eq!(comp(&[2, 2]).multinomial(), BigInt::from(6));
        assert_eq!(comp(&[3, 3, 2]).multinomial(), BigInt::from(560));
    }

    #[test]
    fn ratio_rounding() {
        let r = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| frac(a, b)).collect::<Vec<_>>();
        let c = Composition::from_ratios(40, &r(&[(3, 4), (1, 4)])).unwrap();
        assert_eq!(c.classes(), &[30, 10]);
        let c = Composition::from_ratios(42, &r(&[(3, 4), (1, 4)])).unwrap();
        // quotas 31.5, 10.5: tie broken towards index 0
        assert_eq!(c.classes(), &[32, 10]);
        let c = Composition::from_ratios(10, &r(&[(1, 3), (1, 3), (1, 3)])).unwrap();
        assert_eq!(c.classes(), &[4, 3, 3]);
        let c = Composition::from_ratios(7, &r(&[(1, 2), (3, 10), (1, 5)])).unwrap();
        assert_eq!(c.n(), 7);
        assert_eq!(c.classes(), &[4, 2, 1]);
        assert!(Composition::from_ratios(3, &r(&[(98, 100), (1, 100), (1, 100)])).is_err());
    }

    #[test]
    fn class_spec_parsing() {
        assert_eq!(
            "50,30,20".parse::<ClassSpec>().unwrap(),
            ClassSpec::Fixed(comp(&[50, 30, 20]))
        );
        assert_eq!("balanced:3".parse::<ClassSpec>().unwrap(), ClassSpec::Balanced(3));
        assert_eq!(
            "ratios:3/4,0.25".parse::<ClassSpec>().unwrap(),
            ClassSpec::Ratios(vec![frac(3, 4), frac(1, 4)])
        );
        assert!("7".parse::<ClassSpec>().is_err());
        assert!("a,b".parse::<ClassSpec>().is_err());
    }

    #[test]
    fn count_examples() {
        let p3 = Family::Path(3).generate().unwrap();
        let c = count(&p3, 2, &[0, 1, 0]).unwrap();
        assert_eq!((c.per_color.clone(), c.mono, c.bi), (vec![0, 0], 0, 2));
        let c = count(&p3, 2, &[1, 0, 0]).unwrap();
        assert_eq!((c.per_color.clone(), c.bi), (vec![1, 0], 1));
        assert_eq!(
            count(&p3, 2, &[0, 1]),
            Err(ColoringError::LengthMismatch { colors: 2, n: 3 })
        );
        let k4 = Family::Complete(4).generate().unwrap();
        for colors in [[0, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]] {
            let c = count(&k4, 2, &colors).unwrap();
            assert_eq!((c.mono, c.bi), (2, 4));
        }
    }

    #[test]
    fn sample_respects_classes_and_seed() {
        let c = comp(&[3, 1, 2]);
        let a = sample(&c, &mut seed::stream(1, &[0]));
        let b = sample(&c, &mut seed::stream(1, &[0]));
        assert_eq!(a, b);
        let mut counts = [0usize; 3];
        a.colors.iter().for_each(|&x| counts[x as usize] += 1);
        assert_eq!(counts, [3, 1, 2]);
        let singletons = comp(&[1, 1, 1, 1]);
        let mut p = sample(&singletons, &mut seed::stream(5, &[])).colors;
        p.sort_unstable();
        assert_eq!(p, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sample_is_uniform_on_two_one() {
        // three colorings of c = (2,1): the singleton color sits at position 0, 1 or 2
        let c = comp(&[2, 1]);
        let mut rng = seed::stream(42, &[]);
        let trials = 30_000usize;
        let mut freq = [0usize; 3];
        for _ in 0..trials {
            let f = sample(&c, &mut rng);
            freq[f.colors.iter().position(|&x| x == 1).unwrap()] += 1;
        }
        let p = 1.0 / 3.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        for f in freq {
            assert!((f as f64 / trials as f64 - p).abs() < 4.0 * se, "{freq:?}");
        }
    }

    #[test]
    fn fixed_color_examples() {
        let c = comp(&[2, 2]);
        assert_eq!(prob_fixed_colors(&c, &[2], &[0]).unwrap(), frac(1, 6));
        assert_eq!(prob_fixed_colors(&c, &[3], &[0]).unwrap(), int(0));
        let c3 = comp(&[3, 1, 2]);
        for i in 0..3 {
            assert_eq!(prob_fixed_colors(&c3, &[1], &[i]).unwrap(), frac(c3.classes()[i], 6));
        }
        assert!(matches!(
            prob_fixed_colors(&c3, &[1, 1], &[0, 0]),
            Err(ColoringError::NotInjective { .. })
        ));
        assert!(matches!(
            prob_fixed_colors(&c3, &[1, 1, 1, 1], &[0, 1, 2, 3]),
            Err(ColoringError::EventArity { k: 4, s: 3 })
        ));
        assert!(matches!(
            prob_fixed_colors(&c3, &[7], &[0]),
            Err(ColoringError::EventTooLarge { .. })
        ));
    }

    #[test]
    fn distinct_color_examples() {
        let c = comp(&[2, 2]);
        assert_eq!(prob_distinct_colors(&c, &[1, 1]).unwrap(), frac(2, 3));
        assert_eq!(prob_distinct_colors(&c, &[2, 2]).unwrap(), frac(1, 3));
        assert_eq!(prob_distinct_colors(&c, &[2, 1]).unwrap(), frac(1, 3));
        assert_eq!(prob_distinct_colors(&c, &[1, 1, 1]).unwrap(), int(0));
        // the k = 2, b = 2 specialisation written in e₁…e₄
        let e = [4i64, 4, 0, 0];
        let special = frac(
            2 * (e[1] * (e[1] - e[0] + 1) - e[2] * (2 * e[0] - 3) + 2 * e[3]),
            24,
        );
        assert_eq!(prob_distinct_colors(&c, &[2, 2]).unwrap(), special);
    }

    #[test]
    fn closed_forms_match_injection_sums() {
        for classes in [vec![2, 2], vec![3, 1, 2], vec![4, 4, 1, 3], vec![1, 1, 1, 1, 1]] {
            let c = comp(&classes);
            let s = c.s();
            for k in 1..=s {
                for b in 1..=3 {
                    let sizes = vec![b; k];
                    if k * b > c.n() {
                        continue;
                    }
                    assert_eq!(
                        prob_distinct_equal_sizes(&c, k, b),
                        prob_distinct_by_injections(&c, &sizes).unwrap()
                    );
                }
                if k >= 2 && k < c.n() {
                    let mut sizes = vec![1; k];
                    sizes[0] = 2;
                    assert_eq!(
                        prob_distinct_one_pair(&c, k),
                        prob_distinct_by_injections(&c, &sizes).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn fixed_colors_sum_to_distinct() {
        let c = comp(&[3, 2, 2]);
        let sizes = [2usize, 1];
        let mut total = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    total += prob_fixed_colors(&c, &sizes, &[i, j]).unwrap();
                }
            }
        }
        assert_eq!(total, prob_distinct_colors(&c, &sizes).unwrap());
    }

    #[test]
    fn injection_limit() {
        let c = Composition::new(vec![2; 13]).unwrap();
        assert_eq!(
            prob_distinct_colors(&c, &[2, 1, 3]),
            Err(ColoringError::TooManyColors(13))
        );
        // equal sizes still work through the closed form
        assert!(prob_distinct_colors(&c, &[2, 2, 2]).is_ok());
    }

    #[test]
    fn imbalance_examples() {
        assert_eq!(imbalance(&comp(&[4, 4, 4])), int(0));
        assert_eq!(imbalance(&comp(&[3, 1])), frac(1, 8));
        for classes in [vec![1, 9], vec![5, 1, 1, 1], vec![2, 3, 7]] {
            let c = comp(&classes);
            let v = imbalance(&c);
            assert!(v >= int(0) && v < int(1) - frac(1, c.s()));
        }
    }
}
