//! Occurrence counting of a target tensor and the counting-lemma lower bounds.
//!
//! Two counters with different units:
//!
//! * structured: one index chosen inside every slab of a grid partition, with
//!   the target's entry at grid position `β` read from block `β`;
//! * unstructured: index subsets (one per axis, sized like the target) whose
//!   induced sub-tensor equals the target after some permutation of each axis.
//!   Each subset tuple is counted once; the number of (subsets, permutations)
//!   pairs is reported alongside as placements.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use num_integer::binomial;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::BlockPartition;
use crate::patterns::{check_pattern, check_pattern_relative, PatternCertificate, PatternConfig, PatternVerdict};
use crate::rational::{int, serde_rational, Delta, Epsilon, Rational};
use crate::regularity::{check_regularity, CheckConfig, RegularityCertificate};
use crate::tensor::{BlockRef, Tensor};

/// Default enumeration budget, in visited nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Target entries as host symbol indices; `None` if the target uses a symbol
/// the host alphabet lacks.
fn target_indices(a: &Tensor, c: &Tensor) -> Option<Vec<u8>> {
    c.data()
        .iter()
        .map(|&x| a.alphabet().index_of(c.alphabet().symbol(x)).ok())
        .collect()
}

fn check_budget(nodes: u128, budget: u64) -> Result<()> {
    if nodes > budget as u128 {
        Err(Error::ScaleTooLarge(format!("{nodes} enumeration nodes exceed the budget {budget}")))
    } else {
        Ok(())
    }
}

/// Row-major multi-indices of a box with the given sizes.
fn multi_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    if sizes.is_empty() {
        return vec![Vec::new()];
    }
    sizes.iter().map(|&s| 0..s).multi_cartesian_product().collect()
}

/// Grid slabs of an all-ordinary partition, checked against the target shape.
fn grid_of(a: &Tensor, p: &BlockPartition, c: &Tensor) -> Result<Vec<Vec<Vec<usize>>>> {
    if p.dims() != a.dims() {
        return Err(Error::Dimension(format!("partition dims {:?} vs tensor dims {:?}", p.dims(), a.dims())));
    }
    if p.blocks().iter().any(|b| !b.is_ordinary()) {
        return Err(Error::Partition("structured counting needs an all-ordinary grid".into()));
    }
    let slabs = p
        .grid_slabs()
        .ok_or_else(|| Error::Partition("blocks do not form a product grid".into()))?;
    let shape: Vec<usize> = slabs.iter().map(Vec::len).collect();
    if shape != c.dims() {
        return Err(Error::Dimension(format!("grid shape {shape:?} vs target dims {:?}", c.dims())));
    }
    Ok(slabs)
}

/// Index tuples picking one index per slab per axis such that the entry at the
/// picked indices of grid position `β` equals `c_β` for every `β`.
pub fn count_structured(a: &Tensor, p: &BlockPartition, c: &Tensor) -> Result<u128> {
    count_structured_with_budget(a, p, c, DEFAULT_BUDGET)
}

pub fn count_structured_with_budget(a: &Tensor, p: &BlockPartition, c: &Tensor, budget: u64) -> Result<u128> {
    let slabs = grid_of(a, p, c)?;
    let Some(target) = target_indices(a, c) else { return Ok(0) };
    let d = a.ndim();
    let strides = a.strides();
    let last = &slabs[d - 1];
    // slots: one per (prefix axis, slab); the last axis is counted per slab
    let slots: Vec<(usize, &Vec<usize>)> =
        slabs[..d - 1].iter().enumerate().flat_map(|(j, s)| s.iter().map(move |slab| (j, slab))).collect();
    let prefix_tuples: u128 = slots.iter().map(|(_, s)| s.len() as u128).product();
    check_budget(prefix_tuples.saturating_mul(a.dims()[d - 1] as u128), budget)?;

    let prefix_shape = &c.dims()[..d - 1];
    let positions = multi_indices(prefix_shape);
    let t_last = c.dims()[d - 1];
    let slot_base: Vec<usize> = (0..d - 1).scan(0, |acc, j| {
        let b = *acc;
        *acc += slabs[j].len();
        Some(b)
    }).collect();
    let data = a.data();

    let count_for = |choice: &[usize]| -> u128 {
        let offsets: Vec<usize> = positions
            .iter()
            .map(|g| g.iter().enumerate().map(|(j, &gj)| choice[slot_base[j] + gj] * strides[j]).sum())
            .collect();
        let mut product: u128 = 1;
        for (k, slab) in last.iter().enumerate() {
            let hits = slab
                .iter()
                .filter(|&&x| {
                    offsets.iter().enumerate().all(|(gi, &off)| data[off + x * strides[d - 1]] == target[gi * t_last + k])
                })
                .count() as u128;
            product *= hits;
            if product == 0 {
                break;
            }
        }
        product
    };

    if slots.is_empty() {
        return Ok(count_for(&[]));
    }
    let choices: Vec<Vec<usize>> = slots.iter().map(|(_, s)| (*s).clone()).collect();
    Ok(choices[0]
        .par_iter()
        .map(|&first| {
            let mut total = 0u128;
            let rest = &choices[1..];
            let mut choice = vec![first];
            if rest.is_empty() {
                return count_for(&choice);
            }
            for tail in rest.iter().map(|s| s.iter().copied()).multi_cartesian_product() {
                choice.truncate(1);
                choice.extend(tail);
                total += count_for(&choice);
            }
            total
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnstructuredCount {
    /// Index-subset tuples matching under some permutation tuple.
    pub distinct_locations: u128,
    /// Matching (subset tuple, permutation tuple) pairs.
    pub placements: u128,
}

/// Number of distinct subset tuples inducing `c` up to per-axis permutations.
pub fn count_unstructured(a: &Tensor, c: &Tensor) -> Result<u128> {
    Ok(count_unstructured_detailed(a, c, DEFAULT_BUDGET)?.distinct_locations)
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// For every prefix subset tuple (all axes but the last) and every prefix
/// permutation tuple, the last-axis indices are grouped by their fiber; the
/// matching last-axis subsets are exactly those whose fiber multiset equals
/// the target's, so they are counted by binomials.
pub fn count_unstructured_detailed(a: &Tensor, c: &Tensor, budget: u64) -> Result<UnstructuredCount> {
    let d = a.ndim();
    if c.ndim() != d {
        return Err(Error::Dimension(format!("target has {} axes, host has {d}", c.ndim())));
    }
    if c.dims().iter().zip(a.dims()).any(|(t, n)| t > n) {
        return Err(Error::Dimension(format!("target dims {:?} exceed host dims {:?}", c.dims(), a.dims())));
    }
    let zero = UnstructuredCount { distinct_locations: 0, placements: 0 };
    let Some(target) = target_indices(a, c) else { return Ok(zero) };
    let tdims = c.dims();
    let prefix_shape = &tdims[..d - 1];
    let t_last = tdims[d - 1];
    let n_last = a.dims()[d - 1];

    let subset_tuples: u128 =
        (0..d - 1).map(|j| binomial(a.dims()[j] as u128, tdims[j] as u128)).product();
    let perm_tuples: u128 = prefix_shape.iter().map(|&t| factorial(t)).product();
    check_budget(subset_tuples.saturating_mul(perm_tuples).saturating_mul(n_last as u128), budget)?;

    let positions = multi_indices(prefix_shape);
    let strides = a.strides();
    let c_strides = c.strides();
    // target fibers for every prefix permutation tuple, as a sorted multiset
    let perms: Vec<Vec<Vec<usize>>> = prefix_shape
        .iter()
        .map(|&t| (0..t).permutations(t).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect::<Vec<_>>();
    let perms = if d == 1 { vec![Vec::new()] } else { perms };
    let multisets: Vec<Vec<(Vec<u8>, usize)>> = perms
        .iter()
        .map(|pi| {
            let fibers = (0..t_last).map(|k| {
                positions
                    .iter()
                    .map(|g| {
                        let off: usize =
                            g.iter().enumerate().map(|(j, &gj)| pi[j][gj] * c_strides[j]).sum::<usize>() + k * c_strides[d - 1];
                        target[off]
                    })
                    .collect::<Vec<u8>>()
            });
            let mut counts: HashMap<Vec<u8>, usize> = HashMap::new();
            for f in fibers {
                *counts.entry(f).or_default() += 1;
            }
            let mut v: Vec<(Vec<u8>, usize)> = counts.into_iter().collect();
            v.sort();
            v
        })
        .collect();
    let distinct_multisets: Vec<&Vec<(Vec<u8>, usize)>> = multisets.iter().collect::<HashSet<_>>().into_iter().collect();

    let subsets: Vec<Vec<Vec<usize>>> = (0..d - 1)
        .map(|j| (0..a.dims()[j]).combinations(tdims[j]).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect();
    let subsets = if d == 1 { vec![Vec::new()] } else { subsets };
    let data = a.data();

    let (distinct, placements) = subsets
        .par_iter()
        .map(|s| {
            let offsets: Vec<usize> = positions
                .iter()
                .map(|g| g.iter().enumerate().map(|(j, &gj)| s[j][gj] * strides[j]).sum())
                .collect();
            let mut classes: HashMap<Vec<u8>, u128> = HashMap::new();
            for x in 0..n_last {
                let fiber: Vec<u8> = offsets.iter().map(|&o| data[o + x * strides[d - 1]]).collect();
                *classes.entry(fiber).or_default() += 1;
            }
            let ways = |m: &Vec<(Vec<u8>, usize)>| -> (u128, u128) {
                let mut subsets = 1u128;
                let mut orders = 1u128;
                for (f, k) in m {
                    let class = classes.get(f).copied().unwrap_or(0);
                    subsets *= binomial(class, *k as u128);
                    orders *= factorial(*k);
                }
                (subsets, subsets * orders)
            };
            let distinct: u128 = distinct_multisets.iter().map(|m| ways(m).0).sum();
            let placements: u128 = multisets.iter().map(|m| ways(m).1).sum();
            (distinct, placements)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(UnstructuredCount { distinct_locations: distinct, placements })
}

/// `(1−δ)·∏ slab sizes·∏_β ρ_β`, with `densities` row-major over the grid.
pub fn bound_multi(sizes: &[Vec<u64>], densities: &[Rational], delta: Delta) -> Result<Rational> {
    let cells: usize = sizes.iter().map(Vec::len).product();
    if densities.len() != cells {
        return Err(Error::Dimension(format!("{} densities for a grid of {cells} blocks", densities.len())));
    }
    if sizes.iter().flatten().any(|&s| s == 0) {
        return Err(Error::Config("slab sizes must be positive".into()));
    }
    for r in densities {
        if r.is_zero() || r < &Rational::zero() || r > &Rational::one() {
            return Err(Error::Config(format!("density {r} outside (0, 1]")));
        }
    }
    let size_product: Rational = sizes.iter().flatten().map(|&s| int(s)).product();
    let density_product: Rational = densities.iter().cloned().product();
    Ok(delta.complement() * size_product * density_product)
}

/// Two-dimensional case: `(1−δ)·∏ m_i·∏ n_j·∏ ρ_{i,j}`.
pub fn bound_2d(rows: &[u64], cols: &[u64], densities: &[Vec<Rational>], delta: Delta) -> Result<Rational> {
    if densities.len() != rows.len() || densities.iter().any(|r| r.len() != cols.len()) {
        return Err(Error::Dimension("density matrix must be rows × cols".into()));
    }
    let flat: Vec<Rational> = densities.iter().flatten().cloned().collect();
    bound_multi(&[rows.to_vec(), cols.to_vec()], &flat, delta)
}

/// Block hypothesis of the counting bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Every block ε-regular (the bound is only claimed for `d = 2`).
    Regular(CheckConfig),
    /// Every block an ε-regular pattern.
    Pattern(PatternConfig),
    /// Pattern check with probes taken from the grid's own blocks.
    RelativePattern(PatternConfig),
}

impl Hypothesis {
    fn name(&self) -> &'static str {
        match self {
            Hypothesis::Regular(_) => "regular",
            Hypothesis::Pattern(_) => "pattern",
            Hypothesis::RelativePattern(_) => "relative-pattern",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HypothesisCertificate {
    Regularity(RegularityCertificate),
    Pattern(PatternCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockHypothesis {
    pub position: Vec<usize>,
    pub block: BlockRef,
    pub symbol: String,
    #[serde(with = "serde_rational")]
    pub density: Rational,
    pub holds: bool,
    /// Whether the verdict is a proof rather than a sampled or partial check.
    pub certified: bool,
    pub certificate: HypothesisCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub hypothesis: &'static str,
    pub eps: Epsilon,
    pub delta: Delta,
    pub grid: Vec<usize>,
    pub structured_count: u128,
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    /// `structured_count − bound`.
    #[serde(with = "serde_rational")]
    pub margin: Rational,
    pub satisfied: bool,
    pub blocks: Vec<BlockHypothesis>,
    pub hypotheses_hold: bool,
    /// Some hypothesis verdict is not a proof.
    pub advisory: bool,
    /// Some required symbol has density 0 in its block; the bound is then 0.
    pub zero_density: bool,
    /// Hypotheses hold, densities are positive, and the hypothesis kind is one
    /// the bound is claimed for at this dimension.
    pub applicable: bool,
}

/// Certifies each block, computes the bound from the blocks' actual densities
/// and compares it with the structured count.
pub fn verify_counting(
    a: &Tensor,
    p: &BlockPartition,
    c: &Tensor,
    delta: Delta,
    hypothesis: &Hypothesis,
    eps: Epsilon,
) -> Result<CountReport> {
    let slabs = grid_of(a, p, c)?;
    let positions = multi_indices(c.dims());
    let blocks: Vec<BlockHypothesis> = positions
        .par_iter()
        .map(|g| -> Result<BlockHypothesis> {
            let block = BlockRef::new(g.iter().enumerate().map(|(j, &k)| slabs[j][k].clone()).collect())?;
            let sub = a.extract(&block)?;
            let symbol = c.alphabet().symbol(c.get(g)).to_string();
            let density = match a.alphabet().index_of(&symbol) {
                Ok(_) => a.density(&block, &symbol)?.to_rational(),
                Err(_) => Rational::zero(),
            };
            let (holds, certified, certificate) = match hypothesis {
                Hypothesis::Regular(cfg) => {
                    let cert = check_regularity(&sub, eps, cfg)?;
                    (cert.is_regular(), cert.is_certified(), HypothesisCertificate::Regularity(cert))
                }
                Hypothesis::Pattern(cfg) | Hypothesis::RelativePattern(cfg) => {
                    let cert = match hypothesis {
                        Hypothesis::Pattern(_) => check_pattern(&sub, eps, cfg)?,
                        _ => check_pattern_relative(&sub, eps, a, p, cfg)?,
                    };
                    let certified = match cert.verdict {
                        PatternVerdict::Pattern => true,
                        PatternVerdict::NotPattern => cert.failures.iter().all(|f| f.probe_certified),
                        PatternVerdict::NonRefuted => false,
                    };
                    (cert.passes(), certified, HypothesisCertificate::Pattern(cert))
                }
            };
            Ok(BlockHypothesis { position: g.clone(), block, symbol, density, holds, certified, certificate })
        })
        .collect::<Result<_>>()?;

    let sizes: Vec<Vec<u64>> = slabs.iter().map(|s| s.iter().map(|x| x.len() as u64).collect()).collect();
    let densities: Vec<Rational> = blocks.iter().map(|b| b.density.clone()).collect();
    let zero_density = densities.iter().any(Zero::is_zero);
    let bound = if zero_density { Rational::zero() } else { bound_multi(&sizes, &densities, delta)? };
    let structured_count = count_structured(a, p, c)?;
    let margin = int(structured_count) - &bound;
    let hypotheses_hold = blocks.iter().all(|b| b.holds);
    let advisory = blocks.iter().any(|b| !b.certified);
    let claimed = !matches!(hypothesis, Hypothesis::Regular(_)) || a.ndim() == 2;
    Ok(CountReport {
        hypothesis: hypothesis.name(),
        eps,
        delta,
        grid: c.dims().to_vec(),
        structured_count,
        satisfied: margin >= Rational::zero(),
        margin,
        bound,
        blocks,
        hypotheses_hold,
        advisory,
        zero_density,
        applicable: hypotheses_hold && !zero_density && claimed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{build_counterexample, hadamard_regular_matrix, random_tensor, HadamardVariant};
    use crate::rational::rat;
    use crate::tensor::Alphabet;

    fn ones(dims: Vec<usize>) -> Tensor {
        Tensor::constant(dims, Alphabet::binary(), 1).unwrap()
    }

    fn half() -> Vec<Rational> {
        vec![rat(1, 2), rat(1, 2)]
    }

    /// Enumerates every full tuple of per-slab indices.
    fn naive_structured(a: &Tensor, slabs: &[Vec<Vec<usize>>], c: &Tensor) -> u128 {
        let slots: Vec<(usize, usize)> =
            slabs.iter().enumerate().flat_map(|(j, s)| (0..s.len()).map(move |k| (j, k))).collect();
        let mut count = 0;
        for pick in slots.iter().map(|&(j, k)| slabs[j][k].iter().copied()).multi_cartesian_product() {
            let chosen = |j: usize, k: usize| pick[slots.iter().position(|&s| s == (j, k)).unwrap()];
            let ok = multi_indices(c.dims()).iter().all(|g| {
                let idx: Vec<usize> = g.iter().enumerate().map(|(j, &k)| chosen(j, k)).collect();
                a.alphabet().symbol(a.get(&idx)) == c.alphabet().symbol(c.get(g))
            });
            count += ok as u128;
        }
        count
    }

    /// Enumerates every subset tuple and every permutation tuple.
    fn naive_unstructured(a: &Tensor, c: &Tensor) -> (u128, u128) {
        let d = a.ndim();
        let subsets: Vec<Vec<Vec<usize>>> =
            (0..d).map(|j| (0..a.dims()[j]).combinations(c.dims()[j]).collect::<Vec<_>>()).multi_cartesian_product().collect();
        let perms: Vec<Vec<Vec<usize>>> =
            (0..d).map(|j| (0..c.dims()[j]).permutations(c.dims()[j]).collect::<Vec<_>>()).multi_cartesian_product().collect();
        let (mut distinct, mut placements) = (0, 0);
        for s in &subsets {
            let matches = perms
                .iter()
                .filter(|pi| {
                    multi_indices(c.dims()).iter().all(|g| {
                        let idx: Vec<usize> = (0..d).map(|j| s[j][pi[j][g[j]]]).collect();
                        a.alphabet().symbol(a.get(&idx)) == c.alphabet().symbol(c.get(g))
                    })
                })
                .count() as u128;
            distinct += (matches > 0) as u128;
            placements += matches;
        }
        (distinct, placements)
    }

    #[test]
    fn structured_examples() {
        let grid = BlockPartition::interval_grid(&[vec![2, 2], vec![2, 2]]).unwrap();
        assert_eq!(count_structured(&ones(vec![4, 4]), &grid, &ones(vec![2, 2])).unwrap(), 16);
        let foreign = Tensor::new(vec![2, 2], Alphabet::new(["1", "x"]).unwrap(), vec![0, 1, 0, 0]).unwrap();
        assert_eq!(count_structured(&ones(vec![4, 4]), &grid, &foreign).unwrap(), 0);
        assert!(count_structured(&ones(vec![4, 4]), &grid, &ones(vec![2, 3])).is_err());
    }

    #[test]
    fn structured_matches_naive() {
        for seed in 0..12 {
            let a = random_tensor(&[6, 6], &Alphabet::binary(), &half(), seed).unwrap();
            let c = random_tensor(&[2, 3], &Alphabet::binary(), &half(), seed + 100).unwrap();
            let p = BlockPartition::interval_grid(&[vec![3, 3], vec![2, 2, 2]]).unwrap();
            let slabs = p.grid_slabs().unwrap();
            assert_eq!(count_structured(&a, &p, &c).unwrap(), naive_structured(&a, &slabs, &c));
        }
        let a = random_tensor(&[4, 4, 4], &Alphabet::binary(), &half(), 5).unwrap();
        let c = random_tensor(&[2, 2, 2], &Alphabet::binary(), &half(), 6).unwrap();
        let p = BlockPartition::interval_grid(&[vec![2, 2], vec![2, 2], vec![2, 2]]).unwrap();
        assert_eq!(count_structured(&a, &p, &c).unwrap(), naive_structured(&a, &p.grid_slabs().unwrap(), &c));
    }

    #[test]
    fn unstructured_examples() {
        assert_eq!(count_unstructured(&ones(vec![3, 3]), &ones(vec![2, 2])).unwrap(), 9);
        assert!(count_unstructured(&ones(vec![3, 3]), &ones(vec![4, 2])).is_err());
        let line = Tensor::binary(vec![5], vec![1, 0, 1, 1, 0]).unwrap();
        let target = Tensor::binary(vec![3], vec![0, 1, 1]).unwrap();
        // subsets of size 3 with exactly two ones: C(3,2)·C(2,1)
        assert_eq!(count_unstructured(&line, &target).unwrap(), 6);
    }

    #[test]
    fn unstructured_matches_naive() {
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        let third = vec![rat(1, 3), rat(1, 3), rat(1, 3)];
        for seed in 0..10 {
            let a = random_tensor(&[5, 4], &Alphabet::binary(), &half(), seed).unwrap();
            let c = random_tensor(&[2, 3], &Alphabet::binary(), &half(), seed + 50).unwrap();
            let got = count_unstructured_detailed(&a, &c, DEFAULT_BUDGET).unwrap();
            assert_eq!((got.distinct_locations, got.placements), naive_unstructured(&a, &c));
            let a = random_tensor(&[3, 3, 4], &abc, &third, seed).unwrap();
            let c = random_tensor(&[2, 1, 2], &abc, &third, seed + 7).unwrap();
            let got = count_unstructured_detailed(&a, &c, DEFAULT_BUDGET).unwrap();
            assert_eq!((got.distinct_locations, got.placements), naive_unstructured(&a, &c));
        }
    }

    #[test]
    fn bounds() {
        let delta = Delta::new(1, 2).unwrap();
        assert_eq!(bound_2d(&[4], &[4], &[vec![rat(1, 2)]], delta).unwrap(), int(4));
        assert_eq!(bound_2d(&[2, 3], &[5], &[vec![int(1)], vec![int(1)]], delta).unwrap(), int(15));
        assert!(bound_2d(&[4], &[4], &[vec![int(0)]], delta).is_err());
        let sizes = vec![vec![2, 2]; 3];
        let got = bound_multi(&sizes, &vec![rat(1, 2); 8], Delta::new(1, 4).unwrap()).unwrap();
        assert_eq!(got, rat(3, 16));
        let rows = vec![3, 1];
        let cols = vec![2, 5, 1];
        let dens = vec![vec![rat(1, 3), rat(2, 3), int(1)], vec![rat(1, 7), rat(1, 2), rat(5, 6)]];
        let flat: Vec<Rational> = dens.iter().flatten().cloned().collect();
        assert_eq!(
            bound_2d(&rows, &cols, &dens, delta).unwrap(),
            bound_multi(&[rows.clone(), cols.clone()], &flat, delta).unwrap()
        );
    }

    #[test]
    fn counterexample_counts() {
        let h = hadamard_regular_matrix(2, HadamardVariant::Balanced, None).unwrap().tensor;
        let ce = build_counterexample(&h).unwrap();
        assert_eq!(count_unstructured(&ce.tensor, &ce.target).unwrap(), 0);
        let report = verify_counting(
            &ce.tensor,
            &ce.partition,
            &ce.target,
            Delta::new(1, 2).unwrap(),
            &Hypothesis::Regular(CheckConfig::subsets()),
            Epsilon::new(1, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(report.structured_count, 0);
        assert!(report.hypotheses_hold && !report.advisory);
        assert!(!report.applicable && !report.satisfied);
    }

    #[test]
    fn constant_matrix_report() {
        let a = ones(vec![6, 6]);
        let p = BlockPartition::interval_grid(&[vec![2, 4], vec![3, 3]]).unwrap();
        let hyp = Hypothesis::Regular(CheckConfig::subsets());
        let r = verify_counting(&a, &p, &ones(vec![2, 2]), Delta::new(1, 4).unwrap(), &hyp, Epsilon::new(1, 3).unwrap())
            .unwrap();
        assert_eq!(r.structured_count, 2 * 4 * 3 * 3);
        assert!(r.satisfied && r.applicable);
        assert_eq!(r.bound, rat(3, 4) * int(72));
    }
}
