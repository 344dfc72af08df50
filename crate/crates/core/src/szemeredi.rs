//! Energy-increment regularity decomposition of cubical tensors.
//!
//! Starting from a balanced grid of order `t₀`, each round splits every
//! ε-irregular ordinary block along its witness, then rebalances the split
//! structure to a common block order `l`, demoting leftover cells to the
//! exceptional class. Each round is audited against three inequalities:
//!
//! * `φ̃(C) ≥ φ̃(B) + ε^{d+3}(1−ε)·|A|`,
//! * exceptional volume `≤ V + d/2^{dt}·|A|`,
//! * cardinality `≤ 8^{d²t}·|𝓑|`.
//!
//! Since `φ̃ ≤ |A|`, at most `⌈ε^{−d−3}(1−ε)^{−1}⌉` rounds can happen.
//!
//! The worst-case sub-block order `n/(t·4^{dt})` vanishes at any practical
//! size, so the rebalancing picks the largest `l` for which the audited
//! inequalities hold and the order grows. Choosing `l` as the gcd of all atom
//! sizes leaves no residue, so a valid choice always exists.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{
    energy, is_eps_regular_partition, is_refinement_with_demotion, BalancedPartition, BlockPartition,
    PartitionBlock, PartitionRegularity,
};
use crate::rational::{ceil_to_u64, int, rat, serde_rational, Epsilon, Rational};
use crate::regularity::CheckConfig;
use crate::tensor::{sorted_difference, sorted_intersection, BlockRef, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecompositionConfig {
    pub eps: Epsilon,
    /// Order `t₀` of the initial balanced grid.
    pub initial_order: usize,
    pub check: CheckConfig,
    pub max_rounds: u64,
}

impl DecompositionConfig {
    /// Smallest valid initial order and the theoretical round bound, with
    /// interval-mode checks.
    pub fn new(eps: Epsilon, d: usize) -> Result<Self> {
        check_eps(eps)?;
        let initial_order = (1..=64)
            .find(|&t| headroom(eps, d, t) > int(0))
            .ok_or_else(|| Error::Config(format!("no initial order gives positive headroom for ε = {eps}")))?;
        Ok(DecompositionConfig {
            eps,
            initial_order,
            check: CheckConfig::intervals(),
            max_rounds: round_bound(eps, d),
        })
    }

    pub fn with_check(self, check: CheckConfig) -> Self {
        DecompositionConfig { check, ..self }
    }

    pub fn with_initial_order(self, initial_order: usize) -> Self {
        DecompositionConfig { initial_order, ..self }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        check_eps(self.eps)?;
        if self.initial_order == 0 {
            return Err(Error::Config("initial order must be positive".into()));
        }
        if headroom(self.eps, d, self.initial_order) <= int(0) {
            return Err(Error::Config(format!(
                "ε − 2d/2^(d·t₀) must be positive (ε = {}, d = {d}, t₀ = {})",
                self.eps, self.initial_order
            )));
        }
        let bound = round_bound(self.eps, d);
        if self.max_rounds < bound {
            return Err(Error::Config(format!("max_rounds {} below the bound {bound}", self.max_rounds)));
        }
        Ok(())
    }
}

fn check_eps(eps: Epsilon) -> Result<()> {
    if eps.value() >= rat(1, 2) {
        Err(Error::Config(format!("ε must be below 1/2, got {eps}")))
    } else {
        Ok(())
    }
}

fn pow2(exp: usize) -> Rational {
    Rational::from_integer(BigUint::from(2u8).pow(exp).into())
}

/// `ε − 2d/2^{d·t}`.
pub fn headroom(eps: Epsilon, d: usize, t: usize) -> Rational {
    eps.value() - int(2 * d as u64) / pow2(d * t)
}

/// `⌈ε^{−d−3}(1−ε)^{−1}⌉`.
pub fn round_bound(eps: Epsilon, d: usize) -> u64 {
    let e = eps.value();
    let denom = Pow::pow(&e, (d + 3) as u32) * eps.complement();
    ceil_to_u64(&(Rational::one() / denom))
}

/// `ε^{d+3}(1−ε)·|A|`.
pub fn required_increment(eps: Epsilon, d: usize, volume: u64) -> Rational {
    Pow::pow(&eps.value(), (d + 3) as u32) * eps.complement() * int(volume)
}

/// `8^{d²t}`.
pub fn cardinality_factor(d: usize, t: usize) -> BigUint {
    BigUint::from(8u8).pow(d * d * t)
}

/// Balanced grid of `t₀^d` ordinary blocks of order `⌊n/t₀⌋` on the leading
/// corner, with the remaining shell split into `d` exceptional boxes.
pub fn initial_partition(t: &Tensor, cfg: &DecompositionConfig) -> Result<BalancedPartition> {
    let d = t.ndim();
    cfg.validate(d)?;
    let n = t
        .order()
        .ok_or_else(|| Error::Dimension(format!("decomposition needs a cubical tensor, got {:?}", t.dims())))?;
    let t0 = cfg.initial_order;
    if n < t0 {
        return Err(Error::Config(format!("order {n} below initial order {t0}")));
    }
    let works = |n: usize| {
        let m = n / t0;
        let full = (n as u64).pow(d as u32);
        let v = full - ((t0 * m) as u64).pow(d as u32);
        int(v) < headroom(cfg.eps, d, t0) * int(full)
    };
    if !works(n) {
        let next = (n..).find(|&k| works(k)).expect("multiples of t₀ always work");
        return Err(Error::Config(format!(
            "exceptional shell too large at order {n}; smallest order ≥ {n} that works is {next}"
        )));
    }
    let m = n / t0;
    let side = t0 * m;
    let slabs: Vec<Vec<usize>> = (0..t0).map(|k| (k * m..(k + 1) * m).collect()).collect();
    let mut blocks = grid_blocks(&vec![slabs; d])?;
    if side < n {
        for i in 0..d {
            let axes = (0..d)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => (0..side).collect(),
                    std::cmp::Ordering::Equal => (side..n).collect(),
                    std::cmp::Ordering::Greater => (0..n).collect(),
                })
                .collect();
            blocks.push(PartitionBlock::exceptional(BlockRef::new(axes)?));
        }
    }
    BalancedPartition::new(BlockPartition::new(t.dims().to_vec(), blocks)?)
}

fn grid_blocks(slabs: &[Vec<Vec<usize>>]) -> Result<Vec<PartitionBlock>> {
    let d = slabs.len();
    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    loop {
        let axes = (0..d).map(|i| slabs[i][choice[i]].clone()).collect();
        out.push(PartitionBlock::ordinary(BlockRef::new(axes)?));
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < slabs[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Post-hoc audit of one refinement round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundAudit {
    pub refined_blocks: usize,
    /// Common block order chosen when rebalancing.
    pub block_order: usize,
    #[serde(with = "serde_rational")]
    pub energy_before: Rational,
    /// Energy after the witness splits, before rebalancing.
    #[serde(with = "serde_rational")]
    pub energy_split: Rational,
    #[serde(with = "serde_rational")]
    pub energy_after: Rational,
    #[serde(with = "serde_rational")]
    pub required_increment: Rational,
    pub exceptional_before: u64,
    pub exceptional_after: u64,
    #[serde(with = "serde_rational")]
    pub exceptional_allowance: Rational,
    pub cardinality_before: usize,
    pub cardinality_after: usize,
    #[serde(serialize_with = "ser_biguint")]
    pub cardinality_bound: BigUint,
    pub is_refinement: bool,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl RoundAudit {
    pub fn increment_ok(&self) -> bool {
        self.energy_after >= &self.energy_before + &self.required_increment
    }

    pub fn exceptional_ok(&self) -> bool {
        int(self.exceptional_after) <= self.exceptional_allowance
    }

    pub fn cardinality_ok(&self) -> bool {
        BigUint::from(self.cardinality_after) <= self.cardinality_bound
    }

    pub fn all_hold(&self) -> bool {
        self.increment_ok() && self.exceptional_ok() && self.cardinality_ok() && self.is_refinement
    }
}

#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub partition: BalancedPartition,
    pub audit: RoundAudit,
}

/// One refinement round; fails with [`Error::NotIrregular`] when the
/// partition is already ε-regular in the configured mode.
pub fn refinement_round(t: &Tensor, p: &BalancedPartition, cfg: &DecompositionConfig) -> Result<RoundOutcome> {
    check_eps(cfg.eps)?;
    let verdict = is_eps_regular_partition(t, p, cfg.eps, &cfg.check)?;
    refine_with(t, p, &verdict, cfg)
}

/// Atoms of one slab: classes of indices with equal membership in every cut.
fn atoms(slab: &[usize], cuts: &[&[usize]]) -> Vec<Vec<usize>> {
    let mut groups: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    for &x in slab {
        let sig: Vec<bool> = cuts.iter().map(|c| c.binary_search(&x).is_ok()).collect();
        match groups.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, v)) => v.push(x),
            None => groups.push((sig, vec![x])),
        }
    }
    groups.into_iter().map(|(_, v)| v).collect()
}

struct Candidate {
    partition: BlockPartition,
    order: usize,
    exceptional: u64,
}

/// Chops every atom into runs of `l` indices, keeps the first `t'` runs on
/// every axis (`t'` = smallest run count) and demotes the rest.
fn rebalance(
    p: &BlockPartition,
    slabs: &[Vec<Vec<usize>>],
    axis_atoms: &[Vec<Vec<usize>>],
    l: usize,
) -> Result<Option<Candidate>> {
    let d = slabs.len();
    let chunks: Vec<Vec<Vec<usize>>> = axis_atoms
        .iter()
        .map(|atoms| atoms.iter().flat_map(|a| a.chunks_exact(l).map(<[usize]>::to_vec)).collect())
        .collect();
    let order = chunks.iter().map(Vec::len).min().unwrap_or(0);
    if order == 0 {
        return Ok(None);
    }
    let kept: Vec<Vec<Vec<usize>>> = chunks.iter().map(|c| c[..order].to_vec()).collect();
    let mut blocks = grid_blocks(&kept)?;
    blocks.extend(p.blocks().iter().filter(|b| !b.is_ordinary()).cloned());

    let old: Vec<Vec<usize>> = slabs.iter().map(|s| sorted_union(s)).collect();
    let new: Vec<Vec<usize>> = kept.iter().map(|s| sorted_union(s)).collect();
    let mut exceptional = p.exceptional_volume();
    for i in 0..d {
        let dropped = sorted_difference(&old[i], &new[i]);
        if dropped.is_empty() {
            continue;
        }
        let shell: Vec<Vec<usize>> = (0..d)
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => new[j].clone(),
                std::cmp::Ordering::Equal => dropped.clone(),
                std::cmp::Ordering::Greater => old[j].clone(),
            })
            .collect();
        // keep every residue piece inside one block of the previous grid
        let pieces: Vec<Vec<Vec<usize>>> = shell
            .iter()
            .zip(slabs)
            .map(|(set, axis_slabs)| {
                axis_slabs
                    .iter()
                    .map(|s| sorted_intersection(set, s))
                    .filter(|v| !v.is_empty())
                    .collect()
            })
            .collect();
        if pieces.iter().any(Vec::is_empty) {
            continue;
        }
        for b in grid_blocks(&pieces)? {
            exceptional += b.axes.volume();
            blocks.push(PartitionBlock::exceptional(b.axes));
        }
    }
    let partition = BlockPartition::new(p.dims().to_vec(), blocks)?;
    Ok(Some(Candidate { partition, order, exceptional }))
}

fn sorted_union(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut v: Vec<usize> = sets.iter().flatten().copied().collect();
    v.sort_unstable();
    v
}

/// Refines `p` given an already computed irregular verdict.
pub fn refine_with(
    t: &Tensor,
    p: &BalancedPartition,
    verdict: &PartitionRegularity,
    cfg: &DecompositionConfig,
) -> Result<RoundOutcome> {
    if verdict.regular {
        return Err(Error::NotIrregular("partition is already ε-regular in this mode".into()));
    }
    let part = p.partition();
    let volume = t.total_volume();
    let v_before = part.exceptional_volume();
    if !cfg.eps.at_most_fraction(v_before as usize, volume as usize) {
        return Err(Error::Config("exceptional volume exceeds ε|A|; refinement cannot help".into()));
    }
    let slabs = part
        .grid_slabs()
        .ok_or_else(|| Error::Partition("ordinary blocks do not form a product grid".into()))?;
    let d = t.ndim();

    // witness cuts per (axis, slab)
    let mut cuts: Vec<Vec<Vec<Vec<usize>>>> = slabs.iter().map(|s| vec![Vec::new(); s.len()]).collect();
    let mut split_blocks = Vec::new();
    for check in verdict.irregular_checks() {
        let block = &part.block(check.id).axes;
        let w = check.witness_in_host.as_ref().expect("irregular checks carry witnesses");
        for i in 0..d {
            let k = slabs[i].iter().position(|s| s.as_slice() == block.axis(i)).expect("grid slab");
            cuts[i][k].push(w.axis(i).to_vec());
        }
        split_blocks.push(check.id);
    }
    let axis_atoms: Vec<Vec<Vec<usize>>> = (0..d)
        .map(|i| {
            slabs[i]
                .iter()
                .zip(&cuts[i])
                .flat_map(|(slab, cs)| {
                    let refs: Vec<&[usize]> = cs.iter().map(Vec::as_slice).collect();
                    atoms(slab, &refs)
                })
                .collect()
        })
        .collect();

    let before = energy(t, part)?.total;
    let split = {
        let mut blocks = grid_blocks(&axis_atoms)?;
        blocks.extend(part.blocks().iter().filter(|b| !b.is_ordinary()).cloned());
        BlockPartition::new(part.dims().to_vec(), blocks)?
    };
    let energy_split = energy(t, &split)?.total;

    let order = p.order();
    let allowance = int(v_before) + int(d as u64) * int(volume) / pow2(d * order);
    let eps_cap = cfg.eps.value() * int(volume);
    let card_bound = cardinality_factor(d, order) * BigUint::from(part.cardinality());
    let needed = required_increment(cfg.eps, d, volume);

    for l in (1..=p.block_order()).rev() {
        let Some(c) = rebalance(part, &slabs, &axis_atoms, l)? else { continue };
        if c.order <= order
            || int(c.exceptional) > allowance
            || int(c.exceptional) > eps_cap
            || BigUint::from(c.order).pow(d) > card_bound
        {
            continue;
        }
        let after = energy(t, &c.partition)?.total;
        if after < &before + &needed {
            continue;
        }
        let audit = RoundAudit {
            refined_blocks: split_blocks.len(),
            block_order: l,
            energy_before: before,
            energy_split,
            energy_after: after,
            required_increment: needed,
            exceptional_before: v_before,
            exceptional_after: c.exceptional,
            exceptional_allowance: allowance,
            cardinality_before: part.cardinality(),
            cardinality_after: c.partition.cardinality(),
            cardinality_bound: card_bound,
            is_refinement: is_refinement_with_demotion(&c.partition, part),
        };
        if !audit.all_hold() {
            return Err(Error::Invariant(format!("round audit failed: {audit:?}")));
        }
        return Ok(RoundOutcome { partition: BalancedPartition::new(c.partition)?, audit });
    }
    Err(Error::Invariant(
        "no rebalancing order satisfies the round guarantees; the witness splits did not raise the energy enough"
            .into(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: u64,
    #[serde(with = "serde_rational")]
    pub energy: Rational,
    pub exceptional_volume: u64,
    pub cardinality: usize,
    pub order: usize,
    pub block_order: usize,
    pub irregular_blocks: usize,
    /// Audit of the round that produced this partition; absent for round 0.
    pub audit: Option<RoundAudit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionTrace {
    pub records: Vec<RoundRecord>,
    pub round_bound: u64,
    pub volume: u64,
}

impl DecompositionTrace {
    /// Number of refinement rounds performed.
    pub fn rounds(&self) -> u64 {
        self.records.len() as u64 - 1
    }

    /// JSON lines, one record per round.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub partition: BalancedPartition,
    pub trace: DecompositionTrace,
    /// Per-block certificates of the final partition.
    pub final_check: PartitionRegularity,
    /// False when the checks were sampled: the result is then a non-refuted
    /// rather than a certified decomposition.
    pub certified: bool,
}

/// Refines from [`initial_partition`] until the partition is ε-regular.
pub fn decompose(t: &Tensor, cfg: &DecompositionConfig) -> Result<Decomposition> {
    let d = t.ndim();
    let mut p = initial_partition(t, cfg)?;
    let mut records = Vec::new();
    let mut audit = None;
    for round in 0.. {
        let verdict = is_eps_regular_partition(t, &p, cfg.eps, &cfg.check)?;
        records.push(RoundRecord {
            round,
            energy: energy(t, p.partition())?.total,
            exceptional_volume: p.partition().exceptional_volume(),
            cardinality: p.partition().cardinality(),
            order: p.order(),
            block_order: p.block_order(),
            irregular_blocks: verdict.irregular.len(),
            audit: audit.take(),
        });
        if verdict.regular {
            let trace = DecompositionTrace { records, round_bound: round_bound(cfg.eps, d), volume: t.total_volume() };
            let certified = cfg.check.mode != crate::regularity::CheckMode::Sampled;
            return Ok(Decomposition { partition: p, trace, final_check: verdict, certified });
        }
        if round >= cfg.max_rounds {
            return Err(Error::Invariant(format!(
                "decomposition exceeded {} rounds, contradicting the energy bound",
                cfg.max_rounds
            )));
        }
        let outcome = refine_with(t, &p, &verdict, cfg)?;
        p = outcome.partition;
        audit = Some(outcome.audit);
    }
    unreachable!()
}
