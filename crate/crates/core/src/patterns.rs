//! ε-regular patterns, random and Hadamard generators, and a 3D matrix whose
//! blocks are all regular but which avoids a fixed 2×2×2 target.
//!
//! A tensor `A` of order `n` is an ε-regular pattern when for every binary
//! `(d−1)`-dimensional probe `P` of order `n` that is itself a pattern of
//! density `ρ′ ≥ ε`, and every direction, at least `(1−ε)n` hyperplanes `H`
//! satisfy: `H ⊙ P` is a `(d−1)`-dimensional pattern whose density of every
//! symbol `σ` is at least `ρ_σ·ρ′·(1−ε)`. Every 1-dimensional matrix is a
//! pattern.
//!
//! Exhaustive certification is only feasible for `d = 2` (probes are binary
//! vectors). Higher dimensions are checked against seeded random probes and
//! yield at best a non-refuted verdict.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::BlockPartition;
use crate::rational::{int, rat, ratio, serde_rational, Epsilon, Rational};
use crate::regularity::{check_regularity, CheckConfig, RegularityCertificate};
use crate::tensor::{Alphabet, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternMode {
    Exhaustive,
    Sampled,
}

impl std::str::FromStr for PatternMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(PatternMode::Exhaustive),
            "sampled" => Ok(PatternMode::Sampled),
            _ => Err(Error::Config(format!("unknown pattern mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternConfig {
    pub mode: PatternMode,
    /// Number of probes in sampled mode.
    pub probes: usize,
    /// Probes per nested check of a `(d−1)`-dimensional product.
    pub inner_probes: usize,
    pub seed: u64,
    /// Largest probe set accepted in exhaustive mode.
    pub cap: usize,
    /// Failing hyperplane positions kept per failing probe and direction.
    pub transcript_cap: usize,
}

impl PatternConfig {
    pub const DEFAULT_CAP: usize = 1 << 16;
    pub const DEFAULT_SEED: u64 = 0x5eed;

    pub fn exhaustive() -> Self {
        PatternConfig {
            mode: PatternMode::Exhaustive,
            probes: 0,
            inner_probes: 8,
            seed: Self::DEFAULT_SEED,
            cap: Self::DEFAULT_CAP,
            transcript_cap: 16,
        }
    }

    pub fn sampled(probes: usize, seed: u64) -> Self {
        PatternConfig { mode: PatternMode::Sampled, probes, seed, ..Self::exhaustive() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternVerdict {
    Pattern,
    NotPattern,
    NonRefuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbeSet {
    /// Every binary vector of order `n` with at least `⌈εn⌉` ones.
    Exhaustive { count: usize },
    Sampled { count: usize, seed: u64, discarded: usize },
    Explicit { count: usize },
    /// Binarized hyperplanes of the blocks of a host partition.
    Relative { count: usize, blocks: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolDensity {
    pub symbol: String,
    #[serde(with = "serde_rational")]
    pub density: Rational,
}

/// A probe and direction with more than `ε·n` failing hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingProbe {
    pub probe_index: usize,
    pub direction: usize,
    pub passing: usize,
    pub failing: usize,
    /// First failing hyperplane positions, up to the transcript cap.
    pub failing_positions: Vec<usize>,
    /// Probe entries, row-major.
    pub probe: Vec<u8>,
    #[serde(with = "serde_rational")]
    pub probe_density: Rational,
    /// True when the probe is a proven pattern (always for 1-dimensional probes).
    pub probe_certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternCertificate {
    pub verdict: PatternVerdict,
    pub eps: Epsilon,
    pub dims: Vec<usize>,
    pub densities: Vec<SymbolDensity>,
    pub probes: ProbeSet,
    /// Passing hyperplane counts, `[probe][direction]`.
    pub pass_counts: Vec<Vec<usize>>,
    /// Required passing count per probe and direction.
    pub required: usize,
    pub failures: Vec<FailingProbe>,
}

impl PatternCertificate {
    /// Pattern or non-refuted.
    pub fn passes(&self) -> bool {
        self.verdict != PatternVerdict::NotPattern
    }

    fn trivial(t: &Tensor, eps: Epsilon, probes: ProbeSet) -> Self {
        PatternCertificate {
            verdict: PatternVerdict::Pattern,
            eps,
            dims: t.dims().to_vec(),
            densities: densities(t),
            probes,
            pass_counts: Vec::new(),
            required: 0,
            failures: Vec::new(),
        }
    }
}

fn densities(t: &Tensor) -> Vec<SymbolDensity> {
    let total = t.total_volume();
    t.alphabet()
        .symbols()
        .iter()
        .zip(t.total_weights())
        .map(|(s, w)| SymbolDensity { symbol: s.clone(), density: ratio(w, total) })
        .collect()
}

fn cubical_order(t: &Tensor) -> Result<usize> {
    t.order()
        .ok_or_else(|| Error::Dimension(format!("pattern checks need a cubical tensor, got {:?}", t.dims())))
}

fn binary_density(p: &Tensor) -> Rational {
    let ones = p.data().iter().filter(|&&x| x == 1).count() as u64;
    ratio(ones, p.total_volume())
}

/// Seed of a nested check, derived from the checked tensor's content so that
/// equal tensors always receive equal verdicts.
fn content_seed(seed: u64, t: &Tensor) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    for &n in t.dims() {
        for b in (n as u64).to_le_bytes() {
            eat(b);
        }
    }
    for &x in t.data() {
        for b in t.alphabet().symbol(x).bytes() {
            eat(b);
        }
        eat(0xff);
    }
    h
}

/// Nested check of a `(d−1)`-dimensional product: every 1-dimensional matrix
/// is a pattern; higher dimensions are checked against sampled probes.
fn nested_passes(q: &Tensor, eps: Epsilon, cfg: &PatternConfig) -> Result<bool> {
    if q.ndim() <= 1 {
        return Ok(true);
    }
    let inner = PatternConfig { probes: cfg.inner_probes, seed: content_seed(cfg.seed, q), ..*cfg };
    let (probes, _) = sample_probes(cubical_order(q)?, q.ndim() - 1, eps, &inner)?;
    Ok(evaluate(q, eps, &probes, &inner, false)?.0)
}

/// Does hyperplane `h` pass against probe `p` of density `rho_p`?
fn hyperplane_passes(
    h: &Tensor,
    p: &Tensor,
    rho_p: &Rational,
    floors: &[(String, Rational)],
    eps: Epsilon,
    cfg: &PatternConfig,
) -> Result<bool> {
    let q = h.entrywise_product(p)?;
    let vol = q.total_volume();
    let weights = q.total_weights();
    for (sym, rho) in floors {
        let w = weights[q.alphabet().index_of(sym)? as usize];
        if ratio(w, vol) < rho * rho_p * eps.complement() {
            return Ok(false);
        }
    }
    nested_passes(&q, eps, cfg)
}

/// Runs every probe in every direction. Returns whether all passed, the pass
/// counts and the failure transcripts.
fn evaluate(
    t: &Tensor,
    eps: Epsilon,
    probes: &[Tensor],
    cfg: &PatternConfig,
    transcripts: bool,
) -> Result<(bool, Vec<Vec<usize>>, Vec<FailingProbe>)> {
    let n = cubical_order(t)?;
    let d = t.ndim();
    let floors: Vec<(String, Rational)> = densities(t)
        .into_iter()
        .filter(|s| !s.density.is_zero())
        .map(|s| (s.symbol, s.density))
        .collect();
    let hyperplanes: Vec<Vec<Tensor>> = (0..d)
        .map(|dir| (0..n).map(|x| t.hyperplane(dir, x)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let results: Vec<Result<Vec<Vec<bool>>>> = probes
        .par_iter()
        .map(|p| {
            let rho_p = binary_density(p);
            hyperplanes
                .iter()
                .map(|hs| hs.iter().map(|h| hyperplane_passes(h, p, &rho_p, &floors, eps, cfg)).collect())
                .collect()
        })
        .collect();
    let mut all = true;
    let mut counts = Vec::with_capacity(probes.len());
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        let per_dir = r?;
        let mut row = Vec::with_capacity(d);
        for (dir, passes) in per_dir.iter().enumerate() {
            let passing = passes.iter().filter(|&&b| b).count();
            let failing = n - passing;
            row.push(passing);
            if !eps.at_most_fraction(failing, n) {
                all = false;
                if transcripts {
                    failures.push(FailingProbe {
                        probe_index: i,
                        direction: dir,
                        passing,
                        failing,
                        failing_positions: (0..n).filter(|&x| !passes[x]).take(cfg.transcript_cap).collect(),
                        probe: probes[i].data().to_vec(),
                        probe_density: binary_density(&probes[i]),
                        probe_certified: probes[i].ndim() == 1,
                    });
                }
            }
        }
        counts.push(row);
    }
    Ok((all, counts, failures))
}

/// Smallest passing count `⌈(1−ε)n⌉`.
fn required_passing(eps: Epsilon, n: usize) -> usize {
    n - ((eps.num() as u128 * n as u128) / eps.den() as u128) as usize
}

/// Random binary probes of order `n` in `k` dimensions with `⌈max(1/2, ε)·N⌉`
/// ones; probes of dimension ≥ 2 must pass their own sampled check. Returns
/// the probes and the number discarded.
fn sample_probes(n: usize, k: usize, eps: Epsilon, cfg: &PatternConfig) -> Result<(Vec<Tensor>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = n.pow(k as u32);
    let frac = eps.value().max(rat(1, 2));
    let ones = crate::rational::ceil_to_u64(&(frac * int(total as u64))) as usize;
    let mut probes = Vec::with_capacity(cfg.probes);
    let mut discarded = 0;
    let attempts = 20 * cfg.probes.max(1);
    for _ in 0..attempts {
        if probes.len() == cfg.probes {
            break;
        }
        let p = random_binary_with_ones(vec![n; k], ones, &mut rng)?;
        if k >= 2 && !nested_passes(&p, eps, cfg)? {
            discarded += 1;
            continue;
        }
        probes.push(p);
    }
    Ok((probes, discarded))
}

/// Every binary vector of length `n` with at least `⌈εn⌉` ones, in increasing
/// bitmask order.
fn exhaustive_probes(n: usize, eps: Epsilon, cap: usize) -> Result<Vec<Tensor>> {
    let min_ones = eps.ceil_mul(n) as u32;
    if n >= 63 || (1usize << n) > cap {
        return Err(Error::ScaleTooLarge(format!("2^{n} candidate probes exceed the cap {cap}")));
    }
    (0u64..1 << n)
        .filter(|m| m.count_ones() >= min_ones)
        .map(|m| Tensor::binary(vec![n], (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect()))
        .collect()
}

fn certificate(
    t: &Tensor,
    eps: Epsilon,
    probes: &[Tensor],
    set: ProbeSet,
    cfg: &PatternConfig,
    proof: bool,
) -> Result<PatternCertificate> {
    let n = cubical_order(t)?;
    let (all, pass_counts, failures) = evaluate(t, eps, probes, cfg, true)?;
    let verdict = match (all, proof) {
        (false, _) => PatternVerdict::NotPattern,
        (true, true) => PatternVerdict::Pattern,
        (true, false) => PatternVerdict::NonRefuted,
    };
    Ok(PatternCertificate {
        verdict,
        eps,
        dims: t.dims().to_vec(),
        densities: densities(t),
        probes: set,
        pass_counts,
        required: required_passing(eps, n),
        failures,
    })
}

/// Certifies `t` as an ε-regular pattern.
pub fn check_pattern(t: &Tensor, eps: Epsilon, cfg: &PatternConfig) -> Result<PatternCertificate> {
    let n = cubical_order(t)?;
    let d = t.ndim();
    match cfg.mode {
        PatternMode::Exhaustive => {
            if d == 1 {
                return Ok(PatternCertificate::trivial(t, eps, ProbeSet::Exhaustive { count: 0 }));
            }
            if d > 2 {
                return Err(Error::ScaleTooLarge(format!(
                    "exhaustive pattern certification is limited to dimension 2, got {d}"
                )));
            }
            let probes = exhaustive_probes(n, eps, cfg.cap)?;
            let set = ProbeSet::Exhaustive { count: probes.len() };
            certificate(t, eps, &probes, set, cfg, true)
        }
        PatternMode::Sampled => {
            if d == 1 {
                return Ok(PatternCertificate::trivial(t, eps, ProbeSet::Sampled { count: 0, seed: cfg.seed, discarded: 0 }));
            }
            if cfg.probes == 0 {
                return Err(Error::Config("sampled mode needs at least one probe".into()));
            }
            let (probes, discarded) = sample_probes(n, d - 1, eps, cfg)?;
            let set = ProbeSet::Sampled { count: probes.len(), seed: cfg.seed, discarded };
            certificate(t, eps, &probes, set, cfg, false)
        }
    }
}

fn validate_probe(p: &Tensor, n: usize, d: usize, eps: Epsilon) -> Result<()> {
    if !p.alphabet().is_binary() || p.dims() != vec![n; d - 1].as_slice() {
        return Err(Error::Dimension(format!(
            "probes must be binary of dims {:?}, got {:?}",
            vec![n; d - 1],
            p.dims()
        )));
    }
    if binary_density(p) < eps.value() {
        return Err(Error::Config("probe density below ε".into()));
    }
    Ok(())
}

/// Checks `t` against an explicit probe list. The verdict is at best
/// non-refuted since the list need not exhaust the probe space.
pub fn check_pattern_with_probes(
    t: &Tensor,
    eps: Epsilon,
    probes: &[Tensor],
    cfg: &PatternConfig,
) -> Result<PatternCertificate> {
    let n = cubical_order(t)?;
    let d = t.ndim();
    if d == 1 {
        return Ok(PatternCertificate::trivial(t, eps, ProbeSet::Explicit { count: 0 }));
    }
    for p in probes {
        validate_probe(p, n, d, eps)?;
    }
    certificate(t, eps, probes, ProbeSet::Explicit { count: probes.len() }, cfg, false)
}

/// Probes taken from the blocks of `partition` over `source`: every hyperplane
/// of every cubical block of order `n`, binarized per symbol and kept when its
/// density is at least ε. Duplicates are dropped.
pub fn relative_probes(source: &Tensor, partition: &BlockPartition, n: usize, eps: Epsilon) -> Result<Vec<Tensor>> {
    if source.dims() != partition.dims() {
        return Err(Error::Dimension("probe source and partition dims differ".into()));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for b in partition.blocks() {
        let block = source.extract(&b.axes)?;
        if block.order() != Some(n) || block.ndim() < 2 {
            continue;
        }
        for dir in 0..block.ndim() {
            for x in 0..n {
                let h = block.hyperplane(dir, x)?;
                for s in 0..h.alphabet().len() as u8 {
                    let data: Vec<u8> = h.data().iter().map(|&v| (v == s) as u8).collect();
                    let p = Tensor::binary(h.dims().to_vec(), data)?;
                    if binary_density(&p) >= eps.value() && seen.insert(p.data().to_vec()) {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Pattern check quantifying only over probes found in the blocks of a host
/// partition. Weaker than [`check_pattern`]; the verdict is at best non-refuted.
pub fn check_pattern_relative(
    t: &Tensor,
    eps: Epsilon,
    source: &Tensor,
    partition: &BlockPartition,
    cfg: &PatternConfig,
) -> Result<PatternCertificate> {
    let n = cubical_order(t)?;
    let d = t.ndim();
    let set = |count| ProbeSet::Relative { count, blocks: partition.len() };
    if d == 1 {
        return Ok(PatternCertificate::trivial(t, eps, set(0)));
    }
    let probes = relative_probes(source, partition, n, eps)?;
    let probes: Vec<Tensor> = probes.into_iter().filter(|p| p.ndim() == d - 1).collect();
    certificate(t, eps, &probes, set(probes.len()), cfg, false)
}

/// I.i.d. entries with the exact distribution `densities` (one per symbol).
pub fn random_tensor(dims: &[usize], alphabet: &Alphabet, densities: &[Rational], seed: u64) -> Result<Tensor> {
    if densities.len() != alphabet.len() {
        return Err(Error::Distribution(format!(
            "{} densities for {} symbols",
            densities.len(),
            alphabet.len()
        )));
    }
    if densities.iter().any(|r| r < &int(0)) {
        return Err(Error::Distribution("negative density".into()));
    }
    if densities.iter().sum::<Rational>() != int(1) {
        return Err(Error::Distribution("densities must sum to 1".into()));
    }
    let lcm = densities.iter().fold(num_bigint::BigInt::from(1), |acc, r| acc.lcm(r.denom()));
    let scale = lcm
        .to_u64()
        .ok_or_else(|| Error::Distribution("common denominator exceeds 64 bits".into()))?;
    let mut cumulative = Vec::with_capacity(densities.len());
    let mut acc = 0u64;
    for r in densities {
        acc += (r * int(scale)).to_integer().to_u64().expect("bounded by scale");
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Tensor::from_fn(dims.to_vec(), alphabet.clone(), |_| {
        let r = rng.random_range(0..scale);
        cumulative.iter().position(|&c| r < c).expect("cumulative ends at scale") as u8
    })
}

fn random_binary_with_ones(dims: Vec<usize>, ones: usize, rng: &mut impl Rng) -> Result<Tensor> {
    let total: usize = dims.iter().product();
    let mut data = vec![0u8; total];
    data[..ones.min(total)].fill(1);
    data.shuffle(rng);
    Tensor::binary(dims, data)
}

/// Uniformly random binary tensor with exactly `⌊N/2⌋` ones.
pub fn random_balanced_binary(dims: &[usize], seed: u64) -> Result<Tensor> {
    let total: usize = dims.iter().product();
    random_binary_with_ones(dims.to_vec(), total / 2, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HadamardVariant {
    /// Sylvester matrix with −1 written as 0.
    Raw,
    /// Raw matrix with its all-ones first row replaced by `0,1,0,1,…`.
    Balanced,
}

impl std::str::FromStr for HadamardVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(HadamardVariant::Raw),
            "balanced" => Ok(HadamardVariant::Balanced),
            _ => Err(Error::Config(format!("unknown Hadamard variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HadamardMatrix {
    #[serde(skip)]
    pub tensor: Tensor,
    pub k: u32,
    pub variant: HadamardVariant,
    #[serde(with = "serde_rational")]
    pub density: Rational,
    /// Interval-mode regularity report, when an ε was supplied.
    pub regularity: Option<RegularityCertificate>,
}

/// Binary Sylvester–Hadamard matrix of order `2^k`.
pub fn hadamard_regular_matrix(k: u32, variant: HadamardVariant, eps: Option<Epsilon>) -> Result<HadamardMatrix> {
    if k == 0 || k > 12 {
        return Err(Error::Config(format!("exponent must be in 1..=12, got {k}")));
    }
    let n = 1usize << k;
    let tensor = Tensor::from_fn(vec![n, n], Alphabet::binary(), |i| {
        if variant == HadamardVariant::Balanced && i[0] == 0 {
            (i[1] % 2) as u8
        } else {
            ((i[0] & i[1]).count_ones() % 2 == 0) as u8
        }
    })?;
    let density = binary_density(&tensor);
    let regularity = eps.map(|e| check_regularity(&tensor, e, &CheckConfig::intervals())).transpose()?;
    Ok(HadamardMatrix { tensor, k, variant, density, regularity })
}

/// The 3D construction together with its block grid and the avoided target.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub tensor: Tensor,
    /// Eight ordinary blocks of order `n`.
    pub partition: BlockPartition,
    pub target: Tensor,
}

/// The fixed 2×2×2 target: entries `000`, `001`, `110` are 1, `111` is 0 and
/// the remaining four are 0.
pub fn counterexample_target() -> Tensor {
    Tensor::from_fn(vec![2, 2, 2], Alphabet::binary(), |i| {
        matches!((i[0], i[1], i[2]), (0, 0, 0) | (0, 0, 1) | (1, 1, 0)) as u8
    })
    .expect("valid target")
}

/// Order-`2n` tensor whose block `β` holds `h` when `β₁+β₂+β₃` is even and its
/// complement otherwise, constant along the third axis inside each block.
pub fn build_counterexample(h: &Tensor) -> Result<Counterexample> {
    if h.ndim() != 2 || h.order().is_none() || !h.alphabet().is_binary() {
        return Err(Error::Tensor("seed must be a square binary matrix".into()));
    }
    let n = h.dims()[0];
    let tensor = Tensor::from_fn(vec![2 * n; 3], Alphabet::binary(), |i| {
        let v = h.get(&[i[0] % n, i[1] % n]);
        let parity = (i[0] / n + i[1] / n + i[2] / n) % 2;
        if parity == 0 {
            v
        } else {
            1 - v
        }
    })?;
    let partition = BlockPartition::interval_grid(&[vec![n, n], vec![n, n], vec![n, n]])?;
    let rho = binary_density(h);
    for b in partition.blocks() {
        let even = b.axes.axes().iter().map(|a| a[0] / n).sum::<usize>() % 2 == 0;
        let expected = if even { rho.clone() } else { int(1) - &rho };
        if tensor.density(&b.axes, "1")?.to_rational() != expected {
            return Err(Error::Invariant(format!("block {} has the wrong density", b.axes)));
        }
    }
    Ok(Counterexample { tensor, partition, target: counterexample_target() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(n: u64, d: u64) -> Epsilon {
        Epsilon::new(n, d).unwrap()
    }

    #[test]
    fn one_dimensional_is_pattern() {
        let t = Tensor::binary(vec![5], vec![1, 0, 0, 1, 0]).unwrap();
        for cfg in [PatternConfig::exhaustive(), PatternConfig::sampled(5, 1)] {
            assert_eq!(check_pattern(&t, eps(1, 3), &cfg).unwrap().verdict, PatternVerdict::Pattern);
        }
    }

    #[test]
    fn all_ones_and_all_zeros() {
        for n in [2, 5, 8] {
            let ones = Tensor::constant(vec![n, n], Alphabet::binary(), 1).unwrap();
            let zeros = Tensor::constant(vec![n, n], Alphabet::binary(), 0).unwrap();
            for e in [eps(1, 10), eps(1, 2), eps(9, 10)] {
                let c = check_pattern(&ones, e, &PatternConfig::exhaustive()).unwrap();
                assert_eq!(c.verdict, PatternVerdict::Pattern);
                let c = check_pattern(&zeros, e, &PatternConfig::exhaustive()).unwrap();
                assert_eq!(c.verdict, PatternVerdict::Pattern);
            }
        }
        let cube = Tensor::constant(vec![4, 4, 4], Alphabet::binary(), 1).unwrap();
        let c = check_pattern(&cube, eps(1, 4), &PatternConfig::sampled(6, 2)).unwrap();
        assert_eq!(c.verdict, PatternVerdict::NonRefuted);
        assert!(check_pattern(&cube, eps(1, 4), &PatternConfig::exhaustive()).is_err());
    }

    #[test]
    fn identity_matrix_is_refuted() {
        // a probe covering half the columns meets most rows in zero ones
        let t = Tensor::from_fn(vec![8, 8], Alphabet::binary(), |i| (i[0] == i[1]) as u8).unwrap();
        let c = check_pattern(&t, eps(1, 4), &PatternConfig::exhaustive()).unwrap();
        assert_eq!(c.verdict, PatternVerdict::NotPattern);
        let f = &c.failures[0];
        assert!(f.failing * 4 > 8 && f.probe_certified);
    }

    #[test]
    fn required_passing_is_ceiling() {
        assert_eq!(required_passing(eps(1, 4), 32), 24);
        assert_eq!(required_passing(eps(1, 3), 8), 6);
    }

    #[test]
    fn random_tensor_contract() {
        let a = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = random_tensor(&[4, 4], &a, &[int(1), int(0), int(0)], 9).unwrap();
        assert!(t.data().iter().all(|&x| x == 0));
        let d = [rat(1, 3), rat(1, 3), rat(1, 3)];
        assert_eq!(random_tensor(&[6, 6], &a, &d, 4).unwrap(), random_tensor(&[6, 6], &a, &d, 4).unwrap());
        assert!(random_tensor(&[2], &a, &[rat(1, 2), rat(1, 3), rat(1, 3)], 0).is_err());
        assert!(random_tensor(&[2], &a, &[rat(1, 2), rat(1, 2)], 0).is_err());
        let b = random_balanced_binary(&[6, 6], 3).unwrap();
        assert_eq!(b.total_weights(), vec![18, 18]);
    }

    #[test]
    fn hadamard_densities() {
        let raw = hadamard_regular_matrix(2, HadamardVariant::Raw, None).unwrap();
        assert_eq!(raw.density, rat(5, 8));
        assert_eq!(raw.tensor.get(&[3, 3]), 1);
        assert_eq!(raw.tensor.get(&[1, 1]), 0);
        let bal = hadamard_regular_matrix(2, HadamardVariant::Balanced, Some(eps(1, 2))).unwrap();
        assert_eq!(bal.density, rat(1, 2));
        assert!(bal.regularity.unwrap().is_regular());
        for k in 1..6 {
            let raw = hadamard_regular_matrix(k, HadamardVariant::Raw, None).unwrap();
            assert_eq!(raw.density, rat(1, 2) + rat(1, 1 << (k + 1)));
        }
    }

    #[test]
    fn counterexample_structure() {
        let h = hadamard_regular_matrix(2, HadamardVariant::Balanced, None).unwrap().tensor;
        let ce = build_counterexample(&h).unwrap();
        assert_eq!(ce.tensor.dims(), &[8, 8, 8]);
        for b in ce.partition.blocks() {
            assert_eq!(ce.tensor.density(&b.axes, "1").unwrap().to_rational(), rat(1, 2));
        }
        // constant along the third axis within a block's parity class
        assert_eq!(ce.tensor.get(&[1, 2, 0]), ce.tensor.get(&[1, 2, 3]));
        assert_ne!(ce.tensor.get(&[1, 2, 0]), ce.tensor.get(&[1, 2, 4]));
        assert!(build_counterexample(&Tensor::binary(vec![2, 3], vec![0; 6]).unwrap()).is_err());
    }

    #[test]
    fn relative_probes_from_all_ones_block() {
        let ones = Tensor::constant(vec![4, 4], Alphabet::binary(), 1).unwrap();
        let p = BlockPartition::whole(&[4, 4], crate::partition::BlockClass::Ordinary).unwrap();
        let probes = relative_probes(&ones, &p, 4, eps(1, 4)).unwrap();
        assert_eq!(probes.len(), 1);
        assert!(probes[0].data().iter().all(|&x| x == 1));
    }

    #[test]
    fn counterexample_blocks_fail_relative_check() {
        let h = hadamard_regular_matrix(2, HadamardVariant::Balanced, None).unwrap().tensor;
        let ce = build_counterexample(&h).unwrap();
        let block = ce.tensor.extract(&ce.partition.blocks()[0].axes).unwrap();
        let cfg = PatternConfig::sampled(4, 1);
        let c = check_pattern_relative(&block, eps(1, 4), &ce.tensor, &ce.partition, &cfg).unwrap();
        assert_eq!(c.verdict, PatternVerdict::NotPattern);
        assert!(!c.failures.is_empty());
    }
}
