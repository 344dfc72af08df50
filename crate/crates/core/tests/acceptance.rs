//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with tolerances
//! and runtime limits pinned below. Runs as a plain binary so the lines are
//! always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use itertools::Itertools;
use mdreg::counting::{
    count_structured, count_unstructured, count_unstructured_detailed, verify_counting, Hypothesis, DEFAULT_BUDGET,
};
use mdreg::partition::{
    energy, is_refinement, BlockClass, BlockPartition, PartitionBlock,
};
use mdreg::patterns::{
    build_counterexample, check_pattern, check_pattern_with_probes, hadamard_regular_matrix, random_balanced_binary,
    random_tensor, HadamardVariant, PatternConfig, PatternVerdict,
};
use mdreg::rational::{int, rat};
use mdreg::regularity::{check_line_density, witness_split, LineDirection};
use mdreg::szemeredi::{decompose, required_increment, round_bound, DecompositionConfig};
use mdreg::{check_regularity, Alphabet, BlockRef, CheckConfig, Delta, Epsilon, Rational, Tensor};
use num_traits::Pow;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENERGY_CORPUS: u64 = 500;
const ENERGY_LIMIT: Duration = Duration::from_secs(60);
const SPLIT_LIMIT: Duration = Duration::from_secs(60);
const DECOMPOSE_MATRICES: u64 = 50;
const DECOMPOSE_LIMIT: Duration = Duration::from_secs(300);
const REGULAR_LINE_TENSORS: usize = 100;
const COUNTING_INSTANCES: u64 = 200;
const COUNTING_PERMUTATIONS: usize = 20;
const NAIVE_TUPLE_LIMIT: u128 = 1_000_000;
const COUNTEREXAMPLE_LIMIT: Duration = Duration::from_secs(120);
const BOUND_RUNS: u64 = 20;
const BOUND_MIN_NONNEGATIVE: usize = 18;
const MONOTONICITY_CASES: u64 = 100;
const PROP2_MATRICES: u64 = 100;
const PROP2_PROBES: usize = 50;
const PROP2_MIN_NON_REFUTED: usize = 90;
/// Mixed into the matrix seed so probes draw from an independent stream.
const PROBE_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eps(n: u64, d: u64) -> Epsilon {
    Epsilon::new(n, d).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))
}

fn alphabet(k: usize) -> Alphabet {
    match k {
        1 => Alphabet::new(["a"]).unwrap(),
        2 => Alphabet::binary(),
        _ => Alphabet::new(["a", "b", "c"]).unwrap(),
    }
}

fn uniform(k: usize) -> Vec<Rational> {
    vec![rat(1, k as i64); k]
}

/// Random split of `set` into nonempty parts.
fn random_parts(rng: &mut ChaCha8Rng, set: &[usize]) -> Vec<Vec<usize>> {
    let mut shuffled = set.to_vec();
    shuffled.shuffle(rng);
    let k = rng.random_range(1..=set.len());
    let mut parts = vec![Vec::new(); k];
    for (i, &x) in shuffled.iter().enumerate() {
        let slot = if i < k { i } else { rng.random_range(0..k) };
        parts[slot].push(x);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts
}

fn product_blocks(parts: &[Vec<Vec<usize>>], class: BlockClass) -> Vec<PartitionBlock> {
    parts
        .iter()
        .map(|v| v.iter().cloned())
        .multi_cartesian_product()
        .map(|axes| PartitionBlock::new(BlockRef::new(axes).unwrap(), class))
        .collect()
}

/// A random grid partition (possibly with an exceptional outer slab) and a
/// random refinement splitting every block into a sub-grid of subsets.
fn energy_triple(seed: u64) -> (Tensor, BlockPartition, BlockPartition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(1..=3);
    let max_n = [8, 8, 5][d - 1];
    let dims: Vec<usize> = (0..d).map(|_| rng.random_range(1..=max_n)).collect();
    let k = rng.random_range(1..=3);
    let t = random_tensor(&dims, &alphabet(k), &uniform(k), seed).unwrap();
    let slabs: Vec<Vec<Vec<usize>>> = dims.iter().map(|&n| random_parts(&mut rng, &(0..n).collect::<Vec<_>>())).collect();
    let exceptional_slab = slabs[0].len() > 1 && rng.random_bool(0.5);
    let mut coarse = Vec::new();
    let mut fine = Vec::new();
    for axes in slabs.iter().map(|v| v.iter().cloned()).multi_cartesian_product() {
        let class = if exceptional_slab && axes[0] == *slabs[0].last().unwrap() {
            BlockClass::Exceptional
        } else {
            BlockClass::Ordinary
        };
        let sub: Vec<Vec<Vec<usize>>> = axes.iter().map(|a| random_parts(&mut rng, a)).collect();
        fine.extend(product_blocks(&sub, class));
        coarse.push(PartitionBlock::new(BlockRef::new(axes).unwrap(), class));
    }
    let coarse = BlockPartition::new(dims.clone(), coarse).unwrap();
    let fine = BlockPartition::new(dims, fine).unwrap();
    (t, coarse, fine)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for seed in 0..ENERGY_CORPUS {
        let (t, coarse, fine) = energy_triple(seed);
        ensure(is_refinement(&fine, &coarse), || format!("seed {seed}: not a refinement"))?;
        let (eb, ec) = (energy(&t, &coarse).unwrap().total, energy(&t, &fine).unwrap().total);
        ensure(ec >= eb, || format!("seed {seed}: energy fell from {eb} to {ec}"))?;
    }
    within(start, ENERGY_LIMIT)?;
    Ok(format!("{ENERGY_CORPUS} triples, d in 1..=3, energy never decreases"))
}

fn criterion_2() -> Outcome {
    for seed in 0..ENERGY_CORPUS {
        let (t, coarse, fine) = energy_triple(seed);
        let vol = int(t.total_volume());
        for p in [&coarse, &fine] {
            let e = energy(&t, p).unwrap().total;
            ensure(e <= vol, || format!("seed {seed}: energy {e} above volume {vol}"))?;
        }
        let single = BlockPartition::singletons(t.dims()).unwrap();
        let e = energy(&t, &single).unwrap().total;
        ensure(e == vol, || format!("seed {seed}: singleton energy {e} != {vol}"))?;
    }
    Ok(format!("{ENERGY_CORPUS} triples, energy <= |A|, singletons equal |A|"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut irregular = [0usize; 2];
    let epsilons = [eps(1, 3), eps(1, 4), eps(2, 5)];
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
        let d = if seed % 3 == 0 { 3 } else { 2 };
        let n = if d == 2 { rng.random_range(2..=6) } else { rng.random_range(2..=4) };
        let k = rng.random_range(2..=3);
        let t = random_tensor(&vec![n; d], &alphabet(k), &uniform(k), seed).unwrap();
        let e = epsilons[(seed / 3 % 3) as usize];
        let cert = check_regularity(&t, e, &CheckConfig::subsets()).unwrap();
        if cert.is_regular() {
            continue;
        }
        irregular[d - 2] += 1;
        let whole = BlockPartition::whole(t.dims(), BlockClass::Ordinary).unwrap();
        let pieces = witness_split(&t, &cert).unwrap();
        ensure(pieces.len() <= 1 << d, || format!("seed {seed}: {} pieces", pieces.len()))?;
        let split = BlockPartition::new(
            t.dims().to_vec(),
            pieces.into_iter().map(PartitionBlock::ordinary).collect(),
        )
        .unwrap();
        let gain = energy(&t, &split).unwrap().total - energy(&t, &whole).unwrap().total;
        let need = Pow::pow(&e.value(), (d + 2) as u32) * int(t.total_volume());
        ensure(gain >= need, || format!("seed {seed}: gain {gain} below {need}"))?;
    }
    ensure(irregular[0] >= 50 && irregular[1] >= 20, || format!("too few irregular tensors: {irregular:?}"))?;
    within(start, SPLIT_LIMIT)?;
    Ok(format!("{} irregular 2D and {} irregular 3D tensors, split gain >= eps^(d+2)|B|", irregular[0], irregular[1]))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let e = eps(9, 20);
    let bound = round_bound(e, 2);
    ensure(bound == 99, || format!("round bound {bound}"))?;
    let cfg = DecompositionConfig::new(e, 2).unwrap();
    let mut max_rounds = 0;
    for seed in 0..DECOMPOSE_MATRICES {
        let t = random_tensor(&[12, 12], &Alphabet::binary(), &uniform(2), seed).unwrap();
        let dec = decompose(&t, &cfg).map_err(|err| format!("seed {seed}: {err}"))?;
        ensure(dec.final_check.regular, || format!("seed {seed}: final partition irregular"))?;
        ensure(dec.trace.rounds() <= bound, || format!("seed {seed}: {} rounds", dec.trace.rounds()))?;
        for r in &dec.trace.records[1..] {
            let a = r.audit.as_ref().unwrap();
            ensure(a.all_hold(), || format!("seed {seed} round {}: audit failed", r.round))?;
            ensure(a.energy_after >= &a.energy_before + required_increment(e, 2, 144), || {
                format!("seed {seed} round {}: increment too small", r.round)
            })?;
        }
        max_rounds = max_rounds.max(dec.trace.rounds());
    }
    within(start, DECOMPOSE_LIMIT)?;
    Ok(format!("{DECOMPOSE_MATRICES} matrices regular after at most {max_rounds} rounds (bound {bound})"))
}

fn criterion_5() -> Outcome {
    let mut found = 0;
    let mut checked_blocks = 0usize;
    let epsilons = [eps(2, 5), eps(1, 3), eps(3, 7), eps(1, 2)];
    for seed in 0.. {
        if found == REGULAR_LINE_TENSORS {
            break;
        }
        ensure(seed < 20_000, || format!("only {found} regular tensors found"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + seed);
        let (m, n) = (rng.random_range(3..=8), rng.random_range(3..=8));
        let k = rng.random_range(2..=3);
        let t = random_tensor(&[m, n], &alphabet(k), &uniform(k), seed).unwrap();
        let e = epsilons[rng.random_range(0..epsilons.len())];
        if !check_regularity(&t, e, &CheckConfig::subsets()).unwrap().is_regular() {
            continue;
        }
        found += 1;
        for (dir, host, other) in [(LineDirection::V, m, n), (LineDirection::H, n, m)] {
            for along in (0..host).powerset().filter(|s| s.len() >= e.ceil_mul(host)) {
                let axes = match dir {
                    LineDirection::V => vec![along.clone(), (0..other).collect()],
                    LineDirection::H => vec![(0..other).collect(), along.clone()],
                };
                let block = BlockRef::new(axes).unwrap();
                for sym in t.alphabet().symbols() {
                    let r = check_line_density(&t, e, dir, &block, sym).unwrap();
                    checked_blocks += 1;
                    ensure(r.bad_count < r.bound, || format!("seed {seed}: {} bad lines, bound {}", r.bad_count, r.bound))?;
                }
            }
        }
    }
    Ok(format!("{found} certified regular tensors, {checked_blocks} line blocks under the bound"))
}

/// Full tuples of per-slab indices.
fn naive_structured(a: &Tensor, slabs: &[Vec<Vec<usize>>], c: &Tensor) -> u128 {
    let slots: Vec<(usize, usize)> =
        slabs.iter().enumerate().flat_map(|(j, s)| (0..s.len()).map(move |k| (j, k))).collect();
    let cells: Vec<Vec<usize>> = c.dims().iter().map(|&s| 0..s).multi_cartesian_product().collect();
    let mut count = 0;
    for pick in slots.iter().map(|&(j, k)| slabs[j][k].iter().copied()).multi_cartesian_product() {
        let ok = cells.iter().all(|g| {
            let idx: Vec<usize> =
                g.iter().enumerate().map(|(j, &k)| pick[slots.iter().position(|&s| s == (j, k)).unwrap()]).collect();
            a.alphabet().symbol(a.get(&idx)) == c.alphabet().symbol(c.get(g))
        });
        count += ok as u128;
    }
    count
}

/// Every subset tuple against every permutation tuple.
fn naive_unstructured(a: &Tensor, c: &Tensor) -> (u128, u128) {
    let d = a.ndim();
    let cells: Vec<Vec<usize>> = c.dims().iter().map(|&s| 0..s).multi_cartesian_product().collect();
    let perms: Vec<Vec<Vec<usize>>> = (0..d)
        .map(|j| (0..c.dims()[j]).permutations(c.dims()[j]).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect();
    let (mut distinct, mut placements) = (0, 0);
    for s in (0..d).map(|j| (0..a.dims()[j]).combinations(c.dims()[j]).collect::<Vec<_>>()).multi_cartesian_product() {
        let hits = perms
            .iter()
            .filter(|pi| {
                cells.iter().all(|g| {
                    let idx: Vec<usize> = (0..d).map(|j| s[j][pi[j][g[j]]]).collect();
                    a.alphabet().symbol(a.get(&idx)) == c.alphabet().symbol(c.get(g))
                })
            })
            .count() as u128;
        distinct += (hits > 0) as u128;
        placements += hits;
    }
    (distinct, placements)
}

fn binom(n: usize, k: usize) -> u128 {
    num_integer::binomial(n as u128, k as u128)
}

fn random_perms(rng: &mut ChaCha8Rng, dims: &[usize]) -> Vec<Vec<usize>> {
    dims.iter()
        .map(|&n| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut largest = 0u128;
    for seed in 0..COUNTING_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(30_000 + seed);
        let d = rng.random_range(1..=3);
        let max_n = [7, 6, 4][d - 1];
        let dims: Vec<usize> = (0..d).map(|_| rng.random_range(2..=max_n)).collect();
        let tdims: Vec<usize> = dims.iter().map(|&n| rng.random_range(1..=n.min(3))).collect();
        let k = rng.random_range(2..=3);
        let a = random_tensor(&dims, &alphabet(k), &uniform(k), seed).unwrap();
        let c = random_tensor(&tdims, &alphabet(k), &uniform(k), seed + 1).unwrap();

        let tuples: u128 = (0..d)
            .map(|j| binom(dims[j], tdims[j]) * (1..=tdims[j] as u128).product::<u128>())
            .product();
        ensure(tuples <= NAIVE_TUPLE_LIMIT, || format!("seed {seed}: {tuples} candidate tuples"))?;
        largest = largest.max(tuples);
        let got = count_unstructured_detailed(&a, &c, DEFAULT_BUDGET).unwrap();
        let want = naive_unstructured(&a, &c);
        ensure((got.distinct_locations, got.placements) == want, || {
            format!("seed {seed}: unstructured {got:?} vs naive {want:?}")
        })?;
        for _ in 0..COUNTING_PERMUTATIONS {
            let b = a.permute_axes(&random_perms(&mut rng, &dims)).unwrap();
            let n = count_unstructured(&b, &c).unwrap();
            ensure(n == got.distinct_locations, || format!("seed {seed}: permuted count {n}"))?;
        }

        // structured: random grid with one slab per target index on each axis
        let slabs: Vec<Vec<Vec<usize>>> = dims
            .iter()
            .zip(&tdims)
            .map(|(&n, &t)| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(&mut rng);
                let mut parts = vec![Vec::new(); t];
                for (i, x) in idx.into_iter().enumerate() {
                    let slot = if i < t { i } else { rng.random_range(0..t) };
                    parts[slot].push(x);
                }
                parts.iter_mut().for_each(|p| p.sort_unstable());
                parts.sort();
                parts
            })
            .collect();
        let p = BlockPartition::grid(&dims, &slabs).unwrap();
        let ordered = p.grid_slabs().unwrap();
        let structured_tuples: u128 = ordered.iter().flatten().map(|s| s.len() as u128).product();
        ensure(structured_tuples <= NAIVE_TUPLE_LIMIT, || format!("seed {seed}: {structured_tuples} structured tuples"))?;
        let got = count_structured(&a, &p, &c).unwrap();
        let want = naive_structured(&a, &ordered, &c);
        ensure(got == want, || format!("seed {seed}: structured {got} vs naive {want}"))?;
    }
    Ok(format!(
        "{COUNTING_INSTANCES} instances match naive enumeration (up to {largest} tuples), {COUNTING_PERMUTATIONS} permutations each"
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let target_perms: Vec<Vec<Vec<usize>>> =
        (0..3).map(|_| vec![vec![0, 1], vec![1, 0]]).multi_cartesian_product().collect();
    for k in [2u32, 3] {
        let h = hadamard_regular_matrix(k, HadamardVariant::Balanced, None).unwrap().tensor;
        let ce = build_counterexample(&h).unwrap();
        for b in ce.partition.blocks() {
            let rho = ce.tensor.density(&b.axes, "1").unwrap().to_rational();
            ensure(rho == rat(1, 2), || format!("k = {k}: block {} density {rho}", b.axes))?;
        }
        for perm in &target_perms {
            let u = ce.target.permute_axes(perm).unwrap();
            let n = count_unstructured(&ce.tensor, &u).unwrap();
            ensure(n == 0, || format!("k = {k}: {n} occurrences of a permuted target"))?;
        }
        if k == 2 {
            for b in ce.partition.blocks() {
                let sub = ce.tensor.extract(&b.axes).unwrap();
                let cert = check_regularity(&sub, eps(1, 2), &CheckConfig::subsets()).unwrap();
                ensure(cert.is_regular(), || format!("block {} is 1/2-irregular", b.axes))?;
            }
        }
    }
    within(start, COUNTEREXAMPLE_LIMIT)?;
    Ok("n = 4, 8: block densities 1/2, no permuted target occurs, n = 4 blocks 1/2-regular".into())
}

fn criterion_8() -> Outcome {
    let hyp = Hypothesis::Regular(CheckConfig::intervals());
    let mut rng = ChaCha8Rng::seed_from_u64(40_000);
    for _ in 0..10 {
        let (m, n) = (rng.random_range(2..=9), rng.random_range(2..=9));
        let a = Tensor::constant(vec![m, n], Alphabet::binary(), 1).unwrap();
        let rows = random_parts(&mut rng, &(0..m).collect::<Vec<_>>());
        let cols = random_parts(&mut rng, &(0..n).collect::<Vec<_>>());
        let p = BlockPartition::grid(&[m, n], &[rows.clone(), cols.clone()]).unwrap();
        let c = Tensor::constant(vec![rows.len(), cols.len()], Alphabet::binary(), 1).unwrap();
        for delta in [Delta::new(1, 4).unwrap(), Delta::new(1, 2).unwrap()] {
            let r = verify_counting(&a, &p, &c, delta, &hyp, eps(1, 3)).unwrap();
            ensure(r.satisfied && r.hypotheses_hold, || format!("constant {m}x{n}: not satisfied"))?;
        }
    }
    let grid = BlockPartition::interval_grid(&[vec![6, 6], vec![6, 6]]).unwrap();
    let mut nonnegative = 0;
    let mut margins = Vec::new();
    for seed in 0..BOUND_RUNS {
        let a = random_tensor(&[12, 12], &Alphabet::binary(), &uniform(2), 41_000 + seed).unwrap();
        let c = random_tensor(&[2, 2], &Alphabet::binary(), &uniform(2), 42_000 + seed).unwrap();
        let r = verify_counting(&a, &grid, &c, Delta::new(9, 10).unwrap(), &hyp, eps(3, 10)).unwrap();
        if r.margin >= int(0) {
            nonnegative += 1;
        }
        margins.push(mdreg::rational::to_f64(&r.margin));
    }
    let min = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(nonnegative >= BOUND_MIN_NONNEGATIVE, || format!("{nonnegative}/{BOUND_RUNS} margins non-negative"))?;
    Ok(format!("constant grids satisfied; {nonnegative}/{BOUND_RUNS} random margins >= 0 (min {min:.2})"))
}

fn criterion_9() -> Outcome {
    let exhaustive = PatternConfig::exhaustive();
    let epsilons = [eps(1, 100), eps(1, 4), eps(1, 2), eps(3, 4), eps(99, 100)];
    for seed in 0..20 {
        let k = 2 + (seed % 2) as usize;
        let t = random_tensor(&[1 + seed as usize % 8], &alphabet(k), &uniform(k), seed).unwrap();
        for cfg in [exhaustive, PatternConfig::sampled(3, seed)] {
            let v = check_pattern(&t, eps(1, 3), &cfg).unwrap().verdict;
            ensure(v == PatternVerdict::Pattern, || format!("1D seed {seed}: {v:?}"))?;
        }
    }
    for d in 1..=3usize {
        for n in [2usize, 5, 8] {
            let t = Tensor::constant(vec![n; d], Alphabet::binary(), 1).unwrap();
            for e in epsilons {
                let (cfg, want) = if d <= 2 {
                    (exhaustive, PatternVerdict::Pattern)
                } else {
                    (PatternConfig::sampled(4, 7), PatternVerdict::NonRefuted)
                };
                let v = check_pattern(&t, e, &cfg).unwrap().verdict;
                ensure(v == want, || format!("all-ones d = {d}, n = {n}, eps = {e}: {v:?}"))?;
            }
        }
    }
    for n in 1..=8 {
        let t = Tensor::constant(vec![n, n], Alphabet::binary(), 0).unwrap();
        for e in epsilons {
            let v = check_pattern(&t, e, &exhaustive).unwrap().verdict;
            ensure(v == PatternVerdict::Pattern, || format!("all-zeros n = {n}, eps = {e}: {v:?}"))?;
        }
    }
    let mut full_passes = 0;
    for seed in 0..MONOTONICITY_CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(50_000 + seed);
        let n = rng.random_range(3..=7);
        let e = [eps(1, 4), eps(1, 3), eps(1, 2)][rng.random_range(0..3)];
        let t = random_tensor(&[n, n], &Alphabet::binary(), &uniform(2), seed).unwrap();
        let min_ones = e.ceil_mul(n);
        let probes: Vec<Tensor> = (0..12)
            .map(|_| {
                let ones = rng.random_range(min_ones..=n);
                let mut v = vec![0u8; n];
                v[..ones].fill(1);
                v.shuffle(&mut rng);
                Tensor::binary(vec![n], v).unwrap()
            })
            .collect();
        let subset: Vec<Tensor> = probes.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        let full = check_pattern_with_probes(&t, e, &probes, &exhaustive).unwrap();
        let part = check_pattern_with_probes(&t, e, &subset, &exhaustive).unwrap();
        let exact = check_pattern(&t, e, &exhaustive).unwrap();
        if full.passes() {
            full_passes += 1;
            ensure(part.passes(), || format!("seed {seed}: probe subset flipped the verdict"))?;
        }
        if exact.verdict == PatternVerdict::Pattern {
            ensure(full.passes(), || format!("seed {seed}: explicit probes refute an exhaustive pattern"))?;
        }
    }
    Ok(format!("1D, all-ones, all-zeros ground truths hold; monotone on {MONOTONICITY_CASES} cases ({full_passes} passing)"))
}

fn criterion_10() -> Outcome {
    let mut non_refuted = 0;
    for seed in 0..PROP2_MATRICES {
        let t = random_balanced_binary(&[32, 32], seed).unwrap();
        let cert = check_pattern(&t, eps(1, 4), &PatternConfig::sampled(PROP2_PROBES, seed ^ PROBE_SEED_MIX)).unwrap();
        if cert.verdict == PatternVerdict::NonRefuted {
            non_refuted += 1;
        }
    }
    let line = format!("{non_refuted}/{PROP2_MATRICES} random balanced 32x32 matrices non-refuted (need {PROP2_MIN_NON_REFUTED})");
    ensure(non_refuted >= PROP2_MIN_NON_REFUTED, || line.clone())?;
    Ok(line)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("energy monotonicity", criterion_1),
        ("energy bound", criterion_2),
        ("witness-split increment", criterion_3),
        ("decomposition termination", criterion_4),
        ("line lemma", criterion_5),
        ("counting oracle equivalence", criterion_6),
        ("counterexample", criterion_7),
        ("counting bound sanity", criterion_8),
        ("pattern ground truths", criterion_9),
        ("random pattern regression", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(msg) => println!("PASS criterion {id:>2} {name}: {msg} [{took:.1?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {msg} [{took:.1?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
