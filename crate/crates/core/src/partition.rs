//! Block partitions, their ordinary/exceptional classes, and the energy
//! functions.
//!
//! For an ordinary block the energy is `Σ_σ ρ_σ(B)²·|B|`; for an exceptional
//! block it is `Σ_σ w_σ(B) = |B|`. The partition energy `φ̃` sums the block
//! energies. Refinement never lowers `φ̃`, and `φ̃ ≤ |A|` with equality on
//! the singleton partition.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, serde_rational, serde_rational_vec, Epsilon, Rational};
use crate::regularity::{check_regularity, CheckConfig, RegularityCertificate};
use crate::tensor::{sum_sq_over_volume, BlockRef, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockClass {
    Ordinary,
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartitionBlock {
    pub axes: BlockRef,
    pub class: BlockClass,
}

impl PartitionBlock {
    pub fn new(axes: BlockRef, class: BlockClass) -> Self {
        PartitionBlock { axes, class }
    }

    pub fn ordinary(axes: BlockRef) -> Self {
        PartitionBlock::new(axes, BlockClass::Ordinary)
    }

    pub fn exceptional(axes: BlockRef) -> Self {
        PartitionBlock::new(axes, BlockClass::Exceptional)
    }

    pub fn is_ordinary(&self) -> bool {
        self.class == BlockClass::Ordinary
    }
}

/// Disjoint boxes covering the host, each labeled ordinary or exceptional.
///
/// Blocks are kept sorted lexicographically by their axis subsets, so block
/// ids (indices into [`BlockPartition::blocks`]) are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    dims: Vec<usize>,
    blocks: Vec<PartitionBlock>,
}

#[derive(Deserialize)]
struct PartitionFile {
    dims: Vec<usize>,
    blocks: Vec<PartitionBlock>,
}

impl<'de> Deserialize<'de> for BlockPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = PartitionFile::deserialize(d)?;
        BlockPartition::new(f.dims, f.blocks).map_err(serde::de::Error::custom)
    }
}

impl BlockPartition {
    pub fn new(dims: Vec<usize>, mut blocks: Vec<PartitionBlock>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Partition(format!("invalid host dims {dims:?}")));
        }
        let total: usize = dims.iter().product();
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut seen = vec![false; total];
        for b in &blocks {
            b.axes.validate(&dims)?;
            let mut clash = false;
            b.axes.for_each_offset(&strides, |o| clash |= std::mem::replace(&mut seen[o], true));
            if clash {
                return Err(Error::Partition(format!("block {} overlaps another block", b.axes)));
            }
        }
        if seen.iter().any(|&x| !x) {
            return Err(Error::Partition("blocks do not cover the host".into()));
        }
        blocks.sort();
        let p = BlockPartition { dims, blocks };
        if p.ordinary_region().is_err() {
            return Err(Error::Partition("ordinary blocks do not compose a box".into()));
        }
        Ok(p)
    }

    /// Every cell its own ordinary block.
    pub fn singletons(dims: &[usize]) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut idx = vec![0usize; dims.len()];
        let total: usize = dims.iter().product();
        for _ in 0..total {
            blocks.push(PartitionBlock::ordinary(BlockRef::singleton(&idx)));
            for i in (0..dims.len()).rev() {
                idx[i] += 1;
                if idx[i] < dims[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
        BlockPartition::new(dims.to_vec(), blocks)
    }

    /// One block covering the whole host.
    pub fn whole(dims: &[usize], class: BlockClass) -> Result<Self> {
        BlockPartition::new(dims.to_vec(), vec![PartitionBlock::new(BlockRef::full(dims), class)])
    }

    /// All-ordinary product grid from per-axis slabs.
    pub fn grid(dims: &[usize], slabs: &[Vec<Vec<usize>>]) -> Result<Self> {
        if slabs.len() != dims.len() {
            return Err(Error::Dimension("one slab list per axis required".into()));
        }
        let mut blocks = Vec::new();
        let mut choice = vec![0usize; dims.len()];
        'outer: loop {
            let axes = choice.iter().enumerate().map(|(i, &c)| slabs[i][c].clone()).collect();
            blocks.push(PartitionBlock::ordinary(BlockRef::from_sets(axes)?));
            for i in (0..dims.len()).rev() {
                choice[i] += 1;
                if choice[i] < slabs[i].len() {
                    continue 'outer;
                }
                choice[i] = 0;
            }
            break;
        }
        BlockPartition::new(dims.to_vec(), blocks)
    }

    /// Grid of contiguous slabs with the given per-axis sizes.
    pub fn interval_grid(sizes: &[Vec<usize>]) -> Result<Self> {
        let dims: Vec<usize> = sizes.iter().map(|s| s.iter().sum()).collect();
        let slabs: Vec<Vec<Vec<usize>>> = sizes
            .iter()
            .map(|s| {
                let mut start = 0;
                s.iter()
                    .map(|&len| {
                        let r = (start..start + len).collect();
                        start += len;
                        r
                    })
                    .collect()
            })
            .collect();
        BlockPartition::grid(&dims, &slabs)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn blocks(&self) -> &[PartitionBlock] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &PartitionBlock {
        &self.blocks[id]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn volume(&self) -> u64 {
        self.dims.iter().map(|&n| n as u64).product()
    }

    /// Number of ordinary blocks.
    pub fn cardinality(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_ordinary()).count()
    }

    pub fn ordinary_ids(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&i| self.blocks[i].is_ordinary()).collect()
    }

    pub fn exceptional_volume(&self) -> u64 {
        self.blocks.iter().filter(|b| !b.is_ordinary()).map(|b| b.axes.volume()).sum()
    }

    /// The box composed by the ordinary blocks; `None` when there are none.
    pub fn ordinary_region(&self) -> Result<Option<BlockRef>> {
        let ord: Vec<&PartitionBlock> = self.blocks.iter().filter(|b| b.is_ordinary()).collect();
        if ord.is_empty() {
            return Ok(None);
        }
        let d = self.dims.len();
        let axes: Vec<Vec<usize>> = (0..d)
            .map(|i| {
                let mut v: Vec<usize> = ord.iter().flat_map(|b| b.axes.axis(i).iter().copied()).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let region = BlockRef::new(axes)?;
        let vol: u64 = ord.iter().map(|b| b.axes.volume()).sum();
        // blocks are disjoint and lie inside the box, so equal volume means equal sets
        if vol != region.volume() {
            return Err(Error::Partition("ordinary blocks do not compose a box".into()));
        }
        Ok(Some(region))
    }

    /// Per-axis slabs when the ordinary blocks form a product grid, sorted by
    /// smallest index.
    pub fn grid_slabs(&self) -> Option<Vec<Vec<Vec<usize>>>> {
        let ord: Vec<&PartitionBlock> = self.blocks.iter().filter(|b| b.is_ordinary()).collect();
        if ord.is_empty() {
            return None;
        }
        let d = self.dims.len();
        let mut slabs = Vec::with_capacity(d);
        for i in 0..d {
            let mut s: Vec<Vec<usize>> = ord.iter().map(|b| b.axes.axis(i).to_vec()).collect();
            s.sort();
            s.dedup();
            // slabs on one axis must be pairwise disjoint
            let mut all: Vec<usize> = s.iter().flatten().copied().collect();
            let n = all.len();
            all.sort_unstable();
            all.dedup();
            if all.len() != n {
                return None;
            }
            slabs.push(s);
        }
        let count: usize = slabs.iter().map(Vec::len).product();
        (count == ord.len()).then_some(slabs)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// Same blocks, with the given block reclassified.
    pub fn reclassify(&self, id: usize, class: BlockClass) -> Result<Self> {
        let mut blocks = self.blocks.clone();
        blocks
            .get_mut(id)
            .ok_or_else(|| Error::OutOfRange(format!("block id {id}")))?
            .class = class;
        BlockPartition::new(self.dims.clone(), blocks)
    }

    /// For every host cell, the id of the block holding it.
    fn owners(&self) -> Vec<usize> {
        let total: usize = self.dims.iter().product();
        let strides = strides(&self.dims);
        let mut owner = vec![0; total];
        for (id, b) in self.blocks.iter().enumerate() {
            b.axes.for_each_offset(&strides, |o| owner[o] = id);
        }
        owner
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn first_offset(b: &BlockRef, strides: &[usize]) -> usize {
    b.axes().iter().zip(strides).map(|(a, s)| a[0] * s).sum()
}

/// Energy of a single block.
pub fn energy_block(t: &Tensor, b: &BlockRef, class: BlockClass) -> Result<Rational> {
    match class {
        BlockClass::Ordinary => Ok(sum_sq_over_volume(&t.weights(b)?, b.volume())),
        BlockClass::Exceptional => {
            b.validate(t.dims())?;
            Ok(int(b.volume()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyReport {
    #[serde(with = "serde_rational_vec")]
    pub per_block: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub total: Rational,
    pub exceptional_volume: u64,
    pub volume: u64,
}

pub fn energy(t: &Tensor, p: &BlockPartition) -> Result<EnergyReport> {
    if t.dims() != p.dims() {
        return Err(Error::Dimension(format!(
            "tensor dims {:?} vs partition dims {:?}",
            t.dims(),
            p.dims()
        )));
    }
    let per_block = p
        .blocks()
        .iter()
        .map(|b| energy_block(t, &b.axes, b.class))
        .collect::<Result<Vec<_>>>()?;
    let total = per_block.iter().fold(int(0), |acc, x| acc + x);
    Ok(EnergyReport {
        per_block,
        total,
        exceptional_volume: p.exceptional_volume(),
        volume: t.total_volume(),
    })
}

fn refinement_holds(c: &BlockPartition, b: &BlockPartition, allow_demotion: bool) -> bool {
    if c.dims() != b.dims() {
        return false;
    }
    let owner = b.owners();
    let strides = strides(b.dims());
    c.blocks().iter().all(|cb| {
        let host = &b.blocks()[owner[first_offset(&cb.axes, &strides)]];
        let class_ok = cb.class == host.class
            || (allow_demotion && host.class == BlockClass::Ordinary && cb.class == BlockClass::Exceptional);
        class_ok && host.axes.contains(&cb.axes)
    })
}

/// Whether `c` refines `b`: every block of `c` lies inside one block of `b`
/// (so the blocks of `c` inside each block of `b` partition it), with classes
/// inherited.
pub fn is_refinement(c: &BlockPartition, b: &BlockPartition) -> bool {
    refinement_holds(c, b, false)
}

/// Like [`is_refinement`], but ordinary blocks of `b` may also be split into
/// exceptional pieces. Rebalancing rounds demote residue this way.
pub fn is_refinement_with_demotion(c: &BlockPartition, b: &BlockPartition) -> bool {
    refinement_holds(c, b, true)
}

/// Replaces block `beta` by `sub`, which must partition it with inherited classes.
pub fn refine_block(p: &BlockPartition, beta: usize, sub: Vec<PartitionBlock>) -> Result<BlockPartition> {
    let host = p
        .blocks()
        .get(beta)
        .ok_or_else(|| Error::OutOfRange(format!("block id {beta}")))?
        .clone();
    let mut vol = 0;
    for (i, s) in sub.iter().enumerate() {
        if s.class != host.class {
            return Err(Error::Partition(format!("sub-block {} changes class", s.axes)));
        }
        if !host.axes.contains(&s.axes) {
            return Err(Error::Partition(format!("sub-block {} leaves block {}", s.axes, host.axes)));
        }
        if sub[..i].iter().any(|o| !o.axes.is_disjoint(&s.axes)) {
            return Err(Error::Partition(format!("sub-block {} overlaps a sibling", s.axes)));
        }
        vol += s.axes.volume();
    }
    if vol != host.axes.volume() {
        return Err(Error::Partition(format!("sub-blocks do not cover block {}", host.axes)));
    }
    let mut blocks: Vec<PartitionBlock> =
        p.blocks().iter().enumerate().filter(|&(i, _)| i != beta).map(|(_, b)| b.clone()).collect();
    blocks.extend(sub);
    BlockPartition::new(p.dims().to_vec(), blocks)
}

/// A partition whose `t^d` ordinary blocks all have order `m` and compose a
/// box of order `t·m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedPartition {
    partition: BlockPartition,
    order: usize,
    block_order: usize,
}

impl BalancedPartition {
    pub fn new(partition: BlockPartition) -> Result<Self> {
        let d = partition.dims().len() as u32;
        let ord: Vec<&PartitionBlock> = partition.blocks().iter().filter(|b| b.is_ordinary()).collect();
        let first = ord
            .first()
            .ok_or_else(|| Error::Partition("balanced partition needs ordinary blocks".into()))?;
        let m = first.axes.sizes()[0];
        if ord.iter().any(|b| b.axes.sizes().iter().any(|&s| s != m)) {
            return Err(Error::Partition("ordinary blocks do not share a common order".into()));
        }
        let region = partition.ordinary_region()?.expect("nonempty");
        let side = region.sizes()[0];
        if region.sizes().iter().any(|&s| s != side) || side % m != 0 {
            return Err(Error::Partition("ordinary region is not a cube of order t·m".into()));
        }
        let t = side / m;
        if ord.len() != t.pow(d) {
            return Err(Error::Partition("cardinality differs from t^d".into()));
        }
        Ok(BalancedPartition { partition, order: t, block_order: m })
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn into_partition(self) -> BlockPartition {
        self.partition
    }

    /// `t`: ordinary blocks per axis.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `m`: side of every ordinary block.
    pub fn block_order(&self) -> usize {
        self.block_order
    }
}

/// Regularity check of one ordinary block, with the witness mapped back to host
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    pub id: usize,
    /// Certificate in the block's local coordinates.
    pub certificate: RegularityCertificate,
    pub witness_in_host: Option<BlockRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionRegularity {
    pub regular: bool,
    pub exceptional_volume: u64,
    pub volume: u64,
    pub cardinality: usize,
    /// Checks for every ordinary block, in id order.
    pub checks: Vec<BlockCheck>,
    /// Ids of ordinary blocks judged ε-irregular.
    pub irregular: Vec<usize>,
    /// Whether every verdict is a proof (subset mode, or an irregular witness).
    pub certified: bool,
}

impl PartitionRegularity {
    pub fn irregular_checks(&self) -> impl Iterator<Item = &BlockCheck> {
        self.checks.iter().filter(|c| !c.certificate.is_regular())
    }
}

/// Seed used for the check of block `id`.
pub fn block_seed(seed: u64, id: usize) -> u64 {
    seed ^ (id as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Exceptional volume at most `ε·|A|` and at most `ε·|𝓑|` ordinary blocks
/// ε-irregular in the configured mode.
pub fn is_eps_regular_partition(
    t: &Tensor,
    p: &BalancedPartition,
    eps: Epsilon,
    cfg: &CheckConfig,
) -> Result<PartitionRegularity> {
    let part = p.partition();
    if t.dims() != part.dims() {
        return Err(Error::Dimension("tensor and partition dims differ".into()));
    }
    let ids = part.ordinary_ids();
    let checks = ids
        .par_iter()
        .map(|&id| {
            let b = &part.block(id).axes;
            let sub = t.extract(b)?;
            let certificate = check_regularity(&sub, eps, &cfg.with_seed(block_seed(cfg.seed, id)))?;
            let witness_in_host = match &certificate.witness {
                Some(w) => Some(b.compose(&w.block)?),
                None => None,
            };
            Ok(BlockCheck { id, certificate, witness_in_host })
        })
        .collect::<Result<Vec<_>>>()?;
    let irregular: Vec<usize> = checks.iter().filter(|c| !c.certificate.is_regular()).map(|c| c.id).collect();
    let exceptional_volume = part.exceptional_volume();
    let volume = t.total_volume();
    let cardinality = ids.len();
    let exceptional_ok = eps.at_most_fraction(exceptional_volume as usize, volume as usize);
    let blocks_ok = eps.at_most_fraction(irregular.len(), cardinality);
    let certified = checks.iter().all(|c| c.certificate.is_certified());
    Ok(PartitionRegularity {
        regular: exceptional_ok && blocks_ok,
        exceptional_volume,
        volume,
        cardinality,
        checks,
        irregular,
        certified,
    })
}
