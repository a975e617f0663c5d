//! Brute-force ground truth: enumerate every c-coloring of a small graph and
//! read exact moments and event frequencies off the resulting law.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::coloring::{count, ColoringError, Composition};
use crate::exact::{frac, int, Rational};
use crate::graph::Graph;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{count} colorings exceed the enumeration budget of {budget}")]
    Budget { count: BigInt, budget: u64 },
    #[error("graph has {graph} vertices but the composition covers {classes}")]
    SizeMismatch { graph: usize, classes: usize },
    #[error("event sets must be non-empty, pairwise disjoint and inside 0..{n}")]
    BadSets { n: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Rearranges `v` into its lexicographic successor; false once `v` is the
/// last (non-increasing) arrangement. Equal entries are never swapped with
/// each other, so each distinct arrangement is visited once.
pub fn next_multiset_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Visits every c-coloring in lexicographic order.
pub fn for_each_coloring(
    c: &Composition,
    budget: u64,
    mut visit: impl FnMut(&[u16]),
) -> Result<u64, OracleError> {
    let total = c.multinomial();
    if total > BigInt::from(budget) {
        return Err(OracleError::Budget {
            count: total,
            budget,
        });
    }
    let mut colors = c.color_multiset();
    let mut visited = 0u64;
    loop {
        visit(&colors);
        visited += 1;
        if !next_multiset_permutation(&mut colors) {
            break;
        }
    }
    debug_assert_eq!(BigInt::from(visited), total);
    Ok(visited)
}

/// Exact joint law of (M₁, …, M_s) under the uniform c-coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    /// Number of colorings producing each per-color count tuple.
    counts: BTreeMap<Vec<u64>, u64>,
    total_colorings: u64,
    m: u64,
}

impl ExactDistribution {
    pub fn total_colorings(&self) -> u64 {
        self.total_colorings
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn probability(&self, per_color: &[u64]) -> Rational {
        let k = self.counts.get(per_color).copied().unwrap_or(0);
        frac(k, self.total_colorings)
    }

    /// (M₁, …, M_s) ↦ probability, in lexicographic order of the tuples.
    pub fn support(&self) -> impl Iterator<Item = (&[u64], Rational)> + '_ {
        self.counts
            .iter()
            .map(|(k, &v)| (k.as_slice(), frac(v, self.total_colorings)))
    }

    /// Exact law of M.
    pub fn mono_law(&self) -> BTreeMap<u64, Rational> {
        let mut law: BTreeMap<u64, u64> = BTreeMap::new();
        for (key, &v) in &self.counts {
            *law.entry(key.iter().sum()).or_default() += v;
        }
        law.into_iter()
            .map(|(k, v)| (k, frac(v, self.total_colorings)))
            .collect()
    }
}

pub fn enumerate(g: &Graph, c: &Composition, budget: u64) -> Result<ExactDistribution, OracleError> {
    if g.n() != c.n() {
        return Err(OracleError::SizeMismatch {
            graph: g.n(),
            classes: c.n(),
        });
    }
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let total = for_each_coloring(c, budget, |colors| {
        let ec = count(g, c.s(), colors).expect("lengths agree");
        *counts.entry(ec.per_color).or_default() += 1;
    })?;
    Ok(ExactDistribution {
        counts,
        total_colorings: total,
        m: g.m() as u64,
    })
}

/// Exact moments of the monochromatic counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMoments {
    pub mean_per_color: Vec<Rational>,
    pub var_per_color: Vec<Rational>,
    /// Cov(Mᵢ, Mⱼ).
    pub covariance: Vec<Vec<Rational>>,
    pub mean_m: Rational,
    pub var_m: Rational,
    pub mean_l: Rational,
    pub var_l: Rational,
}

pub fn exact_moments(d: &ExactDistribution) -> OracleMoments {
    let s = d.counts.keys().next().map_or(0, Vec::len);
    let total = int(d.total_colorings);
    let mut sum = vec![BigInt::zero(); s];
    let mut cross = vec![vec![BigInt::zero(); s]; s];
    let (mut sum_m, mut sum_m2) = (BigInt::zero(), BigInt::zero());
    let (mut sum_l, mut sum_l2) = (BigInt::zero(), BigInt::zero());
    for (key, &weight) in &d.counts {
        let w = BigInt::from(weight);
        for i in 0..s {
            sum[i] += &w * key[i];
            for j in 0..s {
                cross[i][j] += &w * key[i] * key[j];
            }
        }
        let mono: u64 = key.iter().sum();
        let bi = d.m - mono;
        sum_m += &w * mono;
        sum_m2 += &w * mono * mono;
        sum_l += &w * bi;
        sum_l2 += &w * bi * bi;
    }
    let mean_per_color: Vec<Rational> = sum
        .into_iter()
        .map(|x| Rational::from_integer(x) / &total)
        .collect();
    let covariance: Vec<Vec<Rational>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    Rational::from_integer(cross[i][j].clone()) / &total
                        - &mean_per_color[i] * &mean_per_color[j]
                })
                .collect()
        })
        .collect();
    let moment = |s1: BigInt, s2: BigInt| {
        let mean = Rational::from_integer(s1) / &total;
        let var = Rational::from_integer(s2) / &total - &mean * &mean;
        (mean, var)
    };
    let (mean_m, var_m) = moment(sum_m, sum_m2);
    let (mean_l, var_l) = moment(sum_l, sum_l2);
    OracleMoments {
        var_per_color: (0..s).map(|i| covariance[i][i].clone()).collect(),
        mean_per_color,
        covariance,
        mean_m,
        var_m,
        mean_l,
        var_l,
    }
}

/// Exact frequency, over all c-colorings, of the event that every vertex of
/// `sets[j]` gets color `iota[j]` (when given), or that each set is
/// monochromatic with pairwise distinct colors (when `iota` is `None`).
pub fn event_frequency_on_sets(
    c: &Composition,
    sets: &[Vec<usize>],
    iota: Option<&[usize]>,
    budget: u64,
) -> Result<Rational, OracleError> {
    let n = c.n();
    let mut seen = vec![false; n];
    for set in sets {
        if set.is_empty() {
            return Err(OracleError::BadSets { n });
        }
        for &v in set {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(OracleError::BadSets { n });
            }
        }
    }
    if let Some(iota) = iota {
        if iota.len() != sets.len() {
            return Err(OracleError::BadSets { n });
        }
    }
    let mut hits = 0u64;
    let mut own = Vec::with_capacity(sets.len());
    let total = for_each_coloring(c, budget, |colors| {
        own.clear();
        for set in sets {
            let first = colors[set[0]];
            if set.iter().any(|&v| colors[v] != first) {
                return;
            }
            own.push(first as usize);
        }
        let ok = match iota {
            Some(iota) => own.iter().zip(iota).all(|(a, b)| a == b),
            None => {
                let mut sorted = own.clone();
                sorted.sort_unstable();
                sorted.windows(2).all(|w| w[0] != w[1])
            }
        };
        if ok {
            hits += 1;
        }
    })?;
    Ok(frac(hits, total))
}

/// [`event_frequency_on_sets`] with the sets laid out as consecutive vertex
/// blocks of the given sizes.
pub fn event_frequency(
    c: &Composition,
    sizes: &[usize],
    iota: Option<&[usize]>,
    budget: u64,
) -> Result<Rational, OracleError> {
    let mut next = 0usize;
    let sets: Vec<Vec<usize>> = sizes
        .iter()
        .map(|&a| {
            let set = (next..next + a).collect();
            next += a;
            set
        })
        .collect();
    if next > c.n() {
        return Err(OracleError::BadSets { n: c.n() });
    }
    event_frequency_on_sets(c, &sets, iota, budget)
}

/// Multinomial n!/(c₁!···c_s!) as u64 when it fits.
pub fn coloring_count(c: &Composition) -> Option<u64> {
    c.multinomial().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn successor_visits_each_arrangement_once() {
        let mut v = vec![0u8, 0, 1, 1, 2];
        let mut seen = std::collections::HashSet::new();
        seen.insert(v.clone());
        while next_multiset_permutation(&mut v) {
            assert!(seen.insert(v.clone()));
        }
        assert_eq!(seen.len(), 30);
        assert_eq!(v, vec![2, 1, 1, 0, 0]);
        assert!(!next_multiset_permutation(&mut [1u8]));
    }

    #[test]
    fn counts_match_multinomial() {
        for classes in [vec![2, 2], vec![3, 2, 1], vec![1, 1, 1, 1], vec![4, 3, 1]] {
            let c = comp(&classes);
            let visited = for_each_coloring(&c, DEFAULT_BUDGET, |_| {}).unwrap();
            assert_eq!(BigInt::from(visited), c.multinomial());
        }
    }

    #[test]
    fn budget_guard() {
        let c = comp(&[5, 5, 5]);
        let err = for_each_coloring(&c, 1000, |_| {}).unwrap_err();
        assert_eq!(
            err,
            OracleError::Budget {
                count: BigInt::from(756756),
                budget: 1000
            }
        );
    }

    #[test]
    fn enumerate_examples() {
        let p3 = Family::Path(3).generate().unwrap();
        let d = enumerate(&p3, &comp(&[2, 1]), DEFAULT_BUDGET).unwrap();
        assert_eq!(d.total_colorings(), 3);
        assert_eq!(d.probability(&[0, 0]), frac(1, 3));
        assert_eq!(d.probability(&[1, 0]), frac(2, 3));

        let k4 = Family::Complete(4).generate().unwrap();
        let d = enumerate(&k4, &comp(&[2, 2]), DEFAULT_BUDGET).unwrap();
        assert_eq!(d.mono_law().get(&2), Some(&int(1)));

        let empty = Graph::empty(5);
        let d = enumerate(&empty, &comp(&[2, 3]), DEFAULT_BUDGET).unwrap();
        assert_eq!(d.mono_law().get(&0), Some(&int(1)));
        let mass: Rational = d.support().map(|(_, p)| p).sum();
        assert_eq!(mass, int(1));

        assert!(matches!(
            enumerate(&p3, &comp(&[2, 2]), DEFAULT_BUDGET),
            Err(OracleError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn moment_examples() {
        let p4 = Family::Path(4).generate().unwrap();
        let mo = exact_moments(&enumerate(&p4, &comp(&[2, 2]), DEFAULT_BUDGET).unwrap());
        assert_eq!(mo.var_m, frac(2, 3));
        assert_eq!(mo.var_l, mo.var_m);
        assert_eq!(mo.mean_m, int(1));
        assert_eq!(mo.var_per_color[0], frac(1, 4));

        let p3 = Family::Path(3).generate().unwrap();
        let mo = exact_moments(&enumerate(&p3, &comp(&[2, 1]), DEFAULT_BUDGET).unwrap());
        assert_eq!(mo.mean_per_color[0], frac(2, 3));
        assert_eq!(mo.var_per_color[0], frac(2, 9));
        let total: Rational = mo.mean_per_color.iter().sum::<Rational>() + &mo.mean_l;
        assert_eq!(total, int(2));
    }

    #[test]
    fn event_examples() {
        let c = comp(&[2, 2]);
        assert_eq!(event_frequency(&c, &[2], Some(&[0]), DEFAULT_BUDGET).unwrap(), frac(1, 6));
        assert_eq!(event_frequency(&c, &[1, 1], None, DEFAULT_BUDGET).unwrap(), frac(2, 3));
        assert_eq!(event_frequency(&c, &[2, 2], None, DEFAULT_BUDGET).unwrap(), frac(1, 3));
    }

    #[test]
    fn event_frequency_ignores_which_sets() {
        let c = comp(&[3, 2, 2]);
        let reference = event_frequency(&c, &[2, 1], None, DEFAULT_BUDGET).unwrap();
        for sets in [
            vec![vec![0, 1], vec![2]],
            vec![vec![6, 3], vec![0]],
            vec![vec![2, 5], vec![4]],
        ] {
            assert_eq!(
                event_frequency_on_sets(&c, &sets, None, DEFAULT_BUDGET).unwrap(),
                reference
            );
        }
        assert!(event_frequency_on_sets(&c, &[vec![0, 1], vec![1]], None, DEFAULT_BUDGET).is_err());
    }
}
