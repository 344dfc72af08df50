//! ε-regularity checks with verified witnesses.
//!
//! A tensor `A` is ε-regular when every box `B` whose side on each axis
//! is at least `⌈ε·n^i⌉` has `|ρ_σ(B) − ρ_σ(A)| ≤ ε` for every symbol σ.
//! Three block families are supported:
//!
//! * [`CheckMode::ExhaustiveSubsets`]: every combinatorial box. This is the
//!   definition itself and is only feasible for tiny tensors.
//! * [`CheckMode::ExhaustiveIntervals`]: every box of contiguous ranges.
//! * [`CheckMode::Sampled`]: `budget` random boxes drawn from a seed.
//!
//! An irregular verdict always carries a concrete witness that has been
//! re-verified against exact densities. A regular verdict is a proof only
//! in subset mode.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_rational, Epsilon, Rational};
use crate::tensor::{sorted_difference, BlockRef, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    ExhaustiveSubsets,
    ExhaustiveIntervals,
    Sampled,
}

impl std::str::FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive-subsets" | "subsets" => Ok(CheckMode::ExhaustiveSubsets),
            "exhaustive-intervals" | "intervals" => Ok(CheckMode::ExhaustiveIntervals),
            "sampled" => Ok(CheckMode::Sampled),
            other => Err(Error::Config(format!("unknown check mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub mode: CheckMode,
    /// Number of random boxes in sampled mode.
    pub budget: u64,
    pub seed: u64,
    /// Largest candidate-box count the exhaustive modes will enumerate.
    pub cap: u64,
}

impl CheckConfig {
    pub const DEFAULT_CAP: u64 = 1 << 24;
    pub const DEFAULT_SEED: u64 = 0x5eed;

    pub fn subsets() -> Self {
        CheckConfig {
            mode: CheckMode::ExhaustiveSubsets,
            budget: 0,
            seed: Self::DEFAULT_SEED,
            cap: Self::DEFAULT_CAP,
        }
    }

    pub fn intervals() -> Self {
        CheckConfig { mode: CheckMode::ExhaustiveIntervals, ..Self::subsets() }
    }

    pub fn sampled(budget: u64, seed: u64) -> Self {
        CheckConfig { mode: CheckMode::Sampled, budget, seed, cap: Self::DEFAULT_CAP }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        CheckConfig { seed, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Regular,
    Irregular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub block: BlockRef,
    pub symbol: String,
    #[serde(with = "serde_rational")]
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub verdict: Verdict,
    pub mode: CheckMode,
    pub eps: Epsilon,
    pub witness: Option<Witness>,
    /// Candidate boxes covered before the verdict was reached.
    pub probes_examined: u64,
    pub seed: Option<u64>,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        self.verdict == Verdict::Regular
    }

    /// Whether the verdict is a proof rather than a non-refutation.
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Irregular || self.mode == CheckMode::ExhaustiveSubsets
    }
}

/// Cross-multiplied deviation test against the host densities.
struct Deviation {
    total: u128,
    host_weights: Vec<u128>,
    num: u128,
    den: u128,
    order: Vec<usize>,
}

impl Deviation {
    fn new(t: &Tensor, eps: Epsilon) -> Self {
        Deviation {
            total: t.total_volume() as u128,
            host_weights: t.total_weights().into_iter().map(u128::from).collect(),
            num: eps.num() as u128,
            den: eps.den() as u128,
            order: symbol_order(t),
        }
    }

    /// `|w/v − W/N| > ε`.
    #[inline]
    fn exceeds(&self, sigma: usize, w: u64, v: u64) -> bool {
        let a = w as u128 * self.total;
        let b = self.host_weights[sigma] * v as u128;
        let diff = a.abs_diff(b);
        diff * self.den > self.num * self.total * v as u128
    }

    fn first_violating(&self, weights: &[u64], v: u64) -> Option<usize> {
        self.order.iter().copied().find(|&s| self.exceeds(s, weights[s], v))
    }
}

/// Order in which symbols are tried for a witness: `"1"` first on binary
/// tensors (binary densities conventionally mean the density of 1), alphabet
/// order otherwise.
fn symbol_order(t: &Tensor) -> Vec<usize> {
    if t.alphabet().is_binary() {
        vec![1, 0]
    } else {
        (0..t.alphabet().len()).collect()
    }
}

/// Minimum qualifying size on every axis.
pub fn min_sizes(dims: &[usize], eps: Epsilon) -> Vec<usize> {
    dims.iter().map(|&n| eps.ceil_mul(n).max(1)).collect()
}

pub fn check_regularity(t: &Tensor, eps: Epsilon, cfg: &CheckConfig) -> Result<RegularityCertificate> {
    let found = match cfg.mode {
        CheckMode::ExhaustiveSubsets => scan_subsets(t, eps, cfg.cap)?,
        CheckMode::ExhaustiveIntervals => scan_intervals(t, eps, cfg.cap)?,
        CheckMode::Sampled => {
            if cfg.budget == 0 {
                return Err(Error::Config("sampled mode needs a positive budget".into()));
            }
            scan_sampled(t, eps, cfg.budget, cfg.seed)?
        }
    };
    let (hit, probes_examined) = found;
    let witness = match hit {
        Some((block, sigma)) => {
            let w = make_witness(t, block, sigma)?;
            if !verify_witness(t, eps, &w)? {
                return Err(Error::Invariant(format!("witness {} failed re-verification", w.block)));
            }
            Some(w)
        }
        None => None,
    };
    Ok(RegularityCertificate {
        verdict: if witness.is_some() { Verdict::Irregular } else { Verdict::Regular },
        mode: cfg.mode,
        eps,
        witness,
        probes_examined,
        seed: (cfg.mode == CheckMode::Sampled).then_some(cfg.seed),
    })
}

fn make_witness(t: &Tensor, block: BlockRef, sigma: usize) -> Result<Witness> {
    let symbol = t.alphabet().symbol(sigma as u8).to_string();
    let local = t.density(&block, &symbol)?.to_rational();
    let host = t.total_density(&symbol)?.to_rational();
    let deviation = num_traits::Signed::abs(&(local - host));
    Ok(Witness { block, symbol, deviation })
}

/// Re-checks a witness through plain densities: size floor on every axis and
/// deviation strictly above ε.
pub fn verify_witness(t: &Tensor, eps: Epsilon, w: &Witness) -> Result<bool> {
    w.block.validate(t.dims())?;
    let sizes_ok = w
        .block
        .sizes()
        .iter()
        .zip(min_sizes(t.dims(), eps))
        .all(|(&m, k)| m >= k);
    let local = t.density(&w.block, &w.symbol)?.to_rational();
    let host = t.total_density(&w.symbol)?.to_rational();
    let dev = num_traits::Signed::abs(&(local - host));
    Ok(sizes_ok && dev == w.deviation && dev > eps.value())
}

fn binom(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Masks over `n` bits with at least `k` bits set, in increasing numeric order.
fn qualifying_masks(n: usize, k: usize) -> Vec<u64> {
    (1u64..1u64 << n).filter(|m| m.count_ones() as usize >= k).collect()
}

type Scan = (Option<(BlockRef, usize)>, u64);

/// Enumerates every combinatorial box. Boxes are visited in increasing order
/// of their per-axis bitmasks (axis 0 most significant), so the first
/// violating box is the lexicographically smallest one under that order.
fn scan_subsets(t: &Tensor, eps: Epsilon, cap: u64) -> Result<Scan> {
    let dims = t.dims();
    let d = dims.len();
    let exponent: usize = dims.iter().sum();
    if dims.iter().any(|&n| n > 62) || exponent >= 128 || (1u128 << exponent) > cap as u128 {
        return Err(Error::ScaleTooLarge(format!(
            "subset enumeration over dims {dims:?} needs 2^{exponent} boxes, cap is {cap}"
        )));
    }
    let k = min_sizes(dims, eps);
    let dev = Deviation::new(t, eps);
    let sigma_count = t.alphabet().len();
    let last = d - 1;
    let n_last = dims[last];
    let last_count: u64 = (k[last]..=n_last).map(|s| binom(n_last, s) as u64).sum();

    let prefix_masks: Vec<Vec<u64>> = (0..last).map(|i| qualifying_masks(dims[i], k[i])).collect();
    let last_masks = qualifying_masks(n_last, k[last]);
    let strides = t.strides();
    let data = t.data();

    let mut examined = 0u64;
    let mut choice = vec![0usize; last];
    // proj[σ][j]: weight of σ in the prefix box restricted to last index j.
    let mut proj = vec![vec![0u64; n_last]; sigma_count];
    let mut sorted = vec![0u64; n_last];
    loop {
        let prefix: Vec<Vec<usize>> =
            (0..last).map(|i| mask_to_indices(prefix_masks[i][choice[i]])).collect();
        let vp: u64 = prefix.iter().map(|a| a.len() as u64).product();
        for row in proj.iter_mut() {
            row.iter_mut().for_each(|x| *x = 0);
        }
        if last == 0 {
            for j in 0..n_last {
                proj[data[j] as usize][j] += 1;
            }
        } else {
            let pb = BlockRef::new(prefix.clone())?;
            let sub_strides = &strides[..last];
            pb.for_each_offset(sub_strides, |o| {
                for j in 0..n_last {
                    proj[data[o + j] as usize][j] += 1;
                }
            });
        }

        // Extreme weights for each size decide whether any last-axis subset can violate.
        let mut possible = false;
        'sigma: for (s, row) in proj.iter().enumerate() {
            sorted.copy_from_slice(row);
            sorted.sort_unstable();
            let mut lo = 0u64;
            let mut hi = 0u64;
            for size in 1..=n_last {
                lo += sorted[size - 1];
                hi += sorted[n_last - size];
                if size >= k[last] {
                    let v = vp * size as u64;
                    if dev.exceeds(s, lo, v) || dev.exceeds(s, hi, v) {
                        possible = true;
                        break 'sigma;
                    }
                }
            }
        }

        if possible {
            let mut w = vec![0u64; sigma_count];
            for (idx, &m) in last_masks.iter().enumerate() {
                w.iter_mut().for_each(|x| *x = 0);
                let mut bits = m;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    for (s, row) in proj.iter().enumerate() {
                        w[s] += row[j];
                    }
                    bits &= bits - 1;
                }
                let v = vp * m.count_ones() as u64;
                if let Some(s) = dev.first_violating(&w, v) {
                    let mut axes = prefix;
                    axes.push(mask_to_indices(m));
                    return Ok((Some((BlockRef::new(axes)?, s)), examined + idx as u64 + 1));
                }
            }
        }
        examined += last_count;

        // advance the prefix odometer, last prefix axis fastest
        let mut i = last;
        loop {
            if i == 0 {
                return Ok((None, examined));
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < prefix_masks[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Per-symbol inclusive prefix sums over a `(n_0+1) × … × (n_{d-1}+1)` grid.
struct PrefixSums {
    ext_strides: Vec<usize>,
    sums: Vec<Vec<u64>>,
}

impl PrefixSums {
    fn new(t: &Tensor) -> Self {
        let dims = t.dims();
        let d = dims.len();
        let ext: Vec<usize> = dims.iter().map(|&n| n + 1).collect();
        let mut ext_strides = vec![1; d];
        for i in (0..d - 1).rev() {
            ext_strides[i] = ext_strides[i + 1] * ext[i + 1];
        }
        let len: usize = ext.iter().product();
        let mut sums = vec![vec![0u64; len]; t.alphabet().len()];
        let strides = t.strides();
        for (s, grid) in sums.iter_mut().enumerate() {
            // place indicator values at shifted positions
            for (off, &x) in t.data().iter().enumerate() {
                if x as usize == s {
                    let mut rem = off;
                    let mut e = 0;
                    for i in 0..d {
                        let c = rem / strides[i];
                        rem %= strides[i];
                        e += (c + 1) * ext_strides[i];
                    }
                    grid[e] = 1;
                }
            }
            // cumulative sum along each axis
            for i in 0..d {
                for e in 0..len {
                    if !(e / ext_strides[i]).is_multiple_of(ext[i]) {
                        grid[e] += grid[e - ext_strides[i]];
                    }
                }
            }
        }
        PrefixSums { ext_strides, sums }
    }

    /// Weight of symbol `s` in the half-open box `[lo_i, hi_i)`.
    fn weight(&self, s: usize, lo: &[usize], hi: &[usize]) -> u64 {
        let d = lo.len();
        let grid = &self.sums[s];
        let mut acc: i64 = 0;
        for corner in 0..1usize << d {
            let mut e = 0;
            let mut sign = 1i64;
            for i in 0..d {
                if corner >> i & 1 == 1 {
                    e += lo[i] * self.ext_strides[i];
                    sign = -sign;
                } else {
                    e += hi[i] * self.ext_strides[i];
                }
            }
            acc += sign * grid[e] as i64;
        }
        acc as u64
    }
}

fn interval_count(n: usize, k: usize) -> u128 {
    // pairs (a, b) with b - a >= k
    (k..=n).map(|len| (n - len + 1) as u128).sum()
}

/// Enumerates contiguous boxes in lexicographic order of `(a_0, b_0, a_1, b_1, …)`.
fn scan_intervals(t: &Tensor, eps: Epsilon, cap: u64) -> Result<Scan> {
    let dims = t.dims();
    let d = dims.len();
    let k = min_sizes(dims, eps);
    let total: u128 = dims.iter().zip(&k).map(|(&n, &m)| interval_count(n, m)).product();
    if total > cap as u128 {
        return Err(Error::ScaleTooLarge(format!(
            "interval enumeration over dims {dims:?} needs {total} boxes, cap is {cap}"
        )));
    }
    let ranges: Vec<Vec<(usize, usize)>> = dims
        .iter()
        .zip(&k)
        .map(|(&n, &m)| {
            let mut v = Vec::new();
            for a in 0..n {
                for b in a + m..=n {
                    v.push((a, b));
                }
            }
            v
        })
        .collect();
    let ps = PrefixSums::new(t);
    let dev = Deviation::new(t, eps);
    let mut choice = vec![0usize; d];
    let mut lo = vec![0usize; d];
    let mut hi = vec![0usize; d];
    let mut examined = 0u64;
    loop {
        let mut v = 1u64;
        for i in 0..d {
            let (a, b) = ranges[i][choice[i]];
            lo[i] = a;
            hi[i] = b;
            v *= (b - a) as u64;
        }
        examined += 1;
        for &s in &dev.order {
            if dev.exceeds(s, ps.weight(s, &lo, &hi), v) {
                let axes = lo.iter().zip(&hi).map(|(&a, &b)| (a..b).collect()).collect();
                return Ok((Some((BlockRef::new(axes)?, s)), examined));
            }
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok((None, examined));
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < ranges[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Draws one qualifying box: per axis a size uniform in `[⌈ε·n⌉, n]`, then a
/// uniform subset of that size.
pub fn sample_box(rng: &mut impl Rng, dims: &[usize], min: &[usize]) -> BlockRef {
    let axes = dims
        .iter()
        .zip(min)
        .map(|(&n, &k)| {
            let size = rng.random_range(k..=n);
            let mut idx = sample(rng, n, size).into_vec();
            idx.sort_unstable();
            idx
        })
        .collect();
    BlockRef::new(axes).expect("sampled axes are nonempty and sorted")
}

fn scan_sampled(t: &Tensor, eps: Epsilon, budget: u64, seed: u64) -> Result<Scan> {
    let k = min_sizes(t.dims(), eps);
    let dev = Deviation::new(t, eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..budget {
        let b = sample_box(&mut rng, t.dims(), &k);
        let w = t.weights(&b)?;
        if let Some(s) = dev.first_violating(&w, b.volume()) {
            return Ok((Some((b, s)), i + 1));
        }
    }
    Ok((None, budget))
}

/// All nonempty boxes `∏ X_i` with `X_i` either the witness axis or its
/// complement, sorted lexicographically. They partition the full index set.
pub fn split_by_box(dims: &[usize], witness: &BlockRef) -> Result<Vec<BlockRef>> {
    witness.validate(dims)?;
    let choices: Vec<[Vec<usize>; 2]> = dims
        .iter()
        .zip(witness.axes())
        .map(|(&n, s)| [s.clone(), sorted_difference(&(0..n).collect::<Vec<_>>(), s)])
        .collect();
    let d = dims.len();
    let mut out = Vec::with_capacity(1 << d);
    for code in 0..1usize << d {
        let axes: Vec<Vec<usize>> = (0..d).map(|i| choices[i][code >> i & 1].clone()).collect();
        if axes.iter().all(|a| !a.is_empty()) {
            out.push(BlockRef::new(axes)?);
        }
    }
    out.sort();
    Ok(out)
}

/// The 2^d split of `t` induced by the witness of an irregular certificate.
pub fn witness_split(t: &Tensor, cert: &RegularityCertificate) -> Result<Vec<BlockRef>> {
    match (&cert.verdict, &cert.witness) {
        (Verdict::Irregular, Some(w)) => split_by_box(t.dims(), &w.block),
        _ => Err(Error::NotIrregular("certificate carries no witness".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineDirection {
    /// Vertical lines: one column of the line block each.
    V,
    /// Horizontal lines: one row of the line block each.
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineDensityReport {
    /// Lines whose density of σ is strictly below `ρ_σ − ε`.
    pub bad_count: usize,
    /// `⌈ε·n⌉` for v-lines, `⌈ε·m⌉` for h-lines.
    pub bound: usize,
    pub lines: usize,
}

/// Counts the lines of a line block that fall below the host density by more than ε.
pub fn check_line_density(
    t: &Tensor,
    eps: Epsilon,
    direction: LineDirection,
    lines: &BlockRef,
    sigma: &str,
) -> Result<LineDensityReport> {
    if t.ndim() != 2 {
        return Err(Error::Dimension(format!("line checks need a 2D matrix, got {}D", t.ndim())));
    }
    lines.validate(t.dims())?;
    let (m, n) = (t.dims()[0], t.dims()[1]);
    let (along, across, host_len, other_len) = match direction {
        LineDirection::V => (lines.axis(0), lines.axis(1), m, n),
        LineDirection::H => (lines.axis(1), lines.axis(0), n, m),
    };
    let l = along.len();
    if l < eps.ceil_mul(host_len) {
        return Err(Error::Block(format!(
            "lines of length {l} are shorter than ⌈ε·{host_len}⌉ = {}",
            eps.ceil_mul(host_len)
        )));
    }
    let s = t.symbol_index(sigma)?;
    let total = t.total_volume() as i128;
    let host_w = t.total_weights()[s as usize] as i128;
    let (num, den) = (eps.num() as i128, eps.den() as i128);
    let mut bad = 0;
    for &c in across {
        let w = along
            .iter()
            .filter(|&&r| {
                let idx = match direction {
                    LineDirection::V => [r, c],
                    LineDirection::H => [c, r],
                };
                t.get(&idx) == s
            })
            .count() as i128;
        // w/l < W/N − ε
        if w * total * den < host_w * l as i128 * den - num * total * l as i128 {
            bad += 1;
        }
    }
    Ok(LineDensityReport { bad_count: bad, bound: eps.ceil_mul(other_len), lines: across.len() })
}
