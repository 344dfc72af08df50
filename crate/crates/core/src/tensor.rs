//! Dense d-dimensional matrices over finite alphabets.
//!
//! Entries are stored as symbol indices in row-major order with the last
//! axis fastest. Weights, volumes and densities are exact integers and
//! reduced fractions.

use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Ordered list of distinct symbol labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub const MAX_SIZE: usize = 256;

    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Alphabet("alphabet must contain at least one symbol".into()));
        }
        if symbols.len() > Self::MAX_SIZE {
            return Err(Error::Alphabet(format!(
                "at most {} symbols supported, got {}",
                Self::MAX_SIZE,
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Alphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The distinguished binary alphabet `["0", "1"]`.
    pub fn binary() -> Self {
        Alphabet { symbols: vec!["0".into(), "1".into()] }
    }

    pub fn is_binary(&self) -> bool {
        self.symbols == ["0", "1"]
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: u8) -> &str {
        &self.symbols[index as usize]
    }

    pub fn index_of(&self, symbol: &str) -> Result<u8> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .map(|i| i as u8)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Returns this alphabet with `symbol` appended if it is absent.
    pub fn with_symbol(&self, symbol: &str) -> Alphabet {
        let mut out = self.clone();
        if !out.symbols.iter().any(|s| s == symbol) {
            out.symbols.push(symbol.to_string());
        }
        out
    }
}

/// Exact density `w / |B|` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Density(Ratio<u64>);

impl Density {
    pub fn new(weight: u64, volume: u64) -> Self {
        Density(Ratio::new(weight, volume))
    }

    pub fn numerator(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.numerator().into(), self.denominator().into())
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

impl Serialize for Density {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A combinatorial box: one strictly increasing, nonempty index subset per axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct BlockRef {
    axes: Vec<Vec<usize>>,
}

impl TryFrom<Vec<Vec<usize>>> for BlockRef {
    type Error = Error;

    fn try_from(axes: Vec<Vec<usize>>) -> Result<Self> {
        BlockRef::new(axes)
    }
}

impl From<BlockRef> for Vec<Vec<usize>> {
    fn from(b: BlockRef) -> Self {
        b.axes
    }
}

impl BlockRef {
    pub fn new(axes: Vec<Vec<usize>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Block("a block needs at least one axis".into()));
        }
        for (i, ax) in axes.iter().enumerate() {
            if ax.is_empty() {
                return Err(Error::Block(format!("axis {i} has an empty index set")));
            }
            if ax.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Block(format!("axis {i} indices are not strictly increasing")));
            }
        }
        Ok(BlockRef { axes })
    }

    /// Builds a block from arbitrary index collections, sorting and deduplicating.
    pub fn from_sets(axes: Vec<Vec<usize>>) -> Result<Self> {
        let axes = axes
            .into_iter()
            .map(|mut a| {
                a.sort_unstable();
                a.dedup();
                a
            })
            .collect();
        BlockRef::new(axes)
    }

    pub fn full(dims: &[usize]) -> Self {
        BlockRef { axes: dims.iter().map(|&n| (0..n).collect()).collect() }
    }

    /// Contiguous box `[start_i, end_i)` on every axis.
    pub fn interval(ranges: &[(usize, usize)]) -> Result<Self> {
        BlockRef::new(ranges.iter().map(|&(a, b)| (a..b).collect()).collect())
    }

    pub fn singleton(index: &[usize]) -> Self {
        BlockRef { axes: index.iter().map(|&i| vec![i]).collect() }
    }

    pub fn axes(&self) -> &[Vec<usize>] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &[usize] {
        &self.axes[i]
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn volume(&self) -> u64 {
        self.axes.iter().map(|a| a.len() as u64).product()
    }

    pub fn validate(&self, dims: &[usize]) -> Result<()> {
        if dims.len() != self.axes.len() {
            return Err(Error::Dimension(format!(
                "block has {} axes, host has {}",
                self.axes.len(),
                dims.len()
            )));
        }
        for (i, (ax, &n)) in self.axes.iter().zip(dims).enumerate() {
            if let Some(&last) = ax.last() {
                if last >= n {
                    return Err(Error::OutOfRange(format!(
                        "axis {i} index {last} exceeds size {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether `other` lies inside `self`.
    pub fn contains(&self, other: &BlockRef) -> bool {
        self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| is_sorted_subset(b, a))
    }

    pub fn is_disjoint(&self, other: &BlockRef) -> bool {
        self.axes.iter().zip(&other.axes).any(|(a, b)| sorted_intersection(a, b).is_empty())
    }

    pub fn intersection(&self, other: &BlockRef) -> Option<BlockRef> {
        let axes: Vec<Vec<usize>> =
            self.axes.iter().zip(&other.axes).map(|(a, b)| sorted_intersection(a, b)).collect();
        if axes.iter().any(Vec::is_empty) {
            None
        } else {
            Some(BlockRef { axes })
        }
    }

    /// Maps a block expressed in the local coordinates of `self` back to host coordinates.
    pub fn compose(&self, local: &BlockRef) -> Result<BlockRef> {
        local.validate(&self.sizes())?;
        Ok(BlockRef {
            axes: self
                .axes
                .iter()
                .zip(&local.axes)
                .map(|(host, loc)| loc.iter().map(|&k| host[k]).collect())
                .collect(),
        })
    }

    /// Visits the flat offsets of every cell, in row-major order.
    pub fn for_each_offset(&self, strides: &[usize], mut f: impl FnMut(usize)) {
        let d = self.axes.len();
        let mut pos = vec![0usize; d];
        let mut base: Vec<usize> = vec![0; d + 1];
        for i in 0..d {
            base[i + 1] = base[i] + self.axes[i][0] * strides[i];
        }
        loop {
            f(base[d]);
            let mut i = d;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                pos[i] += 1;
                if pos[i] < self.axes[i].len() {
                    break;
                }
                pos[i] = 0;
            }
            for k in i..d {
                base[k + 1] = base[k] + self.axes[k][pos[k]] * strides[k];
            }
        }
    }
}

impl fmt::Display for BlockRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .axes
            .iter()
            .map(|a| {
                let s: Vec<String> = a.iter().map(usize::to_string).collect();
                format!("{{{}}}", s.join(","))
            })
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

pub(crate) fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn sorted_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

/// A dense d-dimensional matrix over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    dims: Vec<usize>,
    alphabet: Alphabet,
    data: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    dims: Vec<usize>,
    alphabet: Vec<String>,
    data: Vec<u8>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, alphabet: Alphabet, data: Vec<u8>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Tensor("dimension must be at least 1".into()));
        }
        if let Some(i) = dims.iter().position(|&n| n == 0) {
            return Err(Error::Tensor(format!("size of axis {i} is zero")));
        }
        let len = dims.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
        match len {
            Some(len) if len == data.len() => {}
            Some(len) => {
                return Err(Error::Tensor(format!(
                    "expected {len} entries for dims {dims:?}, got {}",
                    data.len()
                )))
            }
            None => return Err(Error::Tensor("volume overflows".into())),
        }
        if let Some(&bad) = data.iter().find(|&&x| x as usize >= alphabet.len()) {
            return Err(Error::Tensor(format!(
                "entry {bad} outside alphabet of size {}",
                alphabet.len()
            )));
        }
        Ok(Tensor { dims, alphabet, data })
    }

    pub fn binary(dims: Vec<usize>, data: Vec<u8>) -> Result<Self> {
        Tensor::new(dims, Alphabet::binary(), data)
    }

    pub fn from_fn(dims: Vec<usize>, alphabet: Alphabet, mut f: impl FnMut(&[usize]) -> u8) -> Result<Self> {
        let len: usize = dims.iter().product();
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..len {
            data.push(f(&idx));
            for i in (0..dims.len()).rev() {
                idx[i] += 1;
                if idx[i] < dims[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
        Tensor::new(dims, alphabet, data)
    }

    pub fn constant(dims: Vec<usize>, alphabet: Alphabet, symbol: u8) -> Result<Self> {
        let len = dims.iter().product();
        Tensor::new(dims, alphabet, vec![symbol; len])
    }

    /// Builds a binary 2D tensor from rows of 0/1 values.
    pub fn binary_matrix(rows: &[&[u8]]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Tensor("ragged rows".into()));
        }
        Tensor::binary(vec![m, n], rows.concat())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn total_volume(&self) -> u64 {
        self.data.len() as u64
    }

    /// `Some(n)` when every axis has size `n`.
    pub fn order(&self) -> Option<usize> {
        let n = self.dims[0];
        self.dims.iter().all(|&m| m == n).then_some(n)
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        let mut off = 0;
        for (i, &x) in index.iter().enumerate() {
            off = off * self.dims[i] + x;
        }
        off
    }

    pub fn get(&self, index: &[usize]) -> u8 {
        self.data[self.offset(index)]
    }

    pub fn full_block(&self) -> BlockRef {
        BlockRef::full(&self.dims)
    }

    pub fn symbol_index(&self, symbol: &str) -> Result<u8> {
        self.alphabet.index_of(symbol)
    }

    /// Weights of every symbol inside `b`, indexed by symbol.
    pub fn weights(&self, b: &BlockRef) -> Result<Vec<u64>> {
        b.validate(&self.dims)?;
        let mut w = vec![0u64; self.alphabet.len()];
        b.for_each_offset(&self.strides(), |o| w[self.data[o] as usize] += 1);
        Ok(w)
    }

    /// Weights of every symbol over the whole tensor.
    pub fn total_weights(&self) -> Vec<u64> {
        let mut w = vec![0u64; self.alphabet.len()];
        for &x in &self.data {
            w[x as usize] += 1;
        }
        w
    }

    pub fn weight(&self, b: &BlockRef, sigma: &str) -> Result<u64> {
        let s = self.symbol_index(sigma)?;
        b.validate(&self.dims)?;
        let mut w = 0;
        b.for_each_offset(&self.strides(), |o| w += u64::from(self.data[o] == s));
        Ok(w)
    }

    pub fn density(&self, b: &BlockRef, sigma: &str) -> Result<Density> {
        let w = self.weight(b, sigma)?;
        Ok(Density::new(w, b.volume()))
    }

    /// Density of `sigma` over the whole tensor.
    pub fn total_density(&self, sigma: &str) -> Result<Density> {
        self.density(&self.full_block(), sigma)
    }

    pub fn extract(&self, b: &BlockRef) -> Result<Tensor> {
        b.validate(&self.dims)?;
        let mut data = Vec::with_capacity(b.volume() as usize);
        b.for_each_offset(&self.strides(), |o| data.push(self.data[o]));
        Ok(Tensor { dims: b.sizes(), alphabet: self.alphabet.clone(), data })
    }

    /// Keeps entries where the binary mask `p` is 1 and writes `"0"` elsewhere.
    pub fn entrywise_product(&self, p: &Tensor) -> Result<Tensor> {
        if !p.alphabet.is_binary() {
            return Err(Error::Alphabet("mask must be binary".into()));
        }
        if p.dims != self.dims {
            return Err(Error::Dimension(format!(
                "dims {:?} vs mask dims {:?}",
                self.dims, p.dims
            )));
        }
        let alphabet = self.alphabet.with_symbol("0");
        let zero = alphabet.index_of("0")?;
        let data = self
            .data
            .iter()
            .zip(&p.data)
            .map(|(&x, &m)| if m == 1 { x } else { zero })
            .collect();
        Ok(Tensor { dims: self.dims.clone(), alphabet, data })
    }

    /// The `(d-1)`-dimensional slice with axis `direction` fixed at `position`.
    pub fn hyperplane(&self, direction: usize, position: usize) -> Result<Tensor> {
        let d = self.ndim();
        if d < 2 {
            return Err(Error::Dimension("hyperplanes need dimension at least 2".into()));
        }
        if direction >= d {
            return Err(Error::OutOfRange(format!("direction {direction} with dimension {d}")));
        }
        if position >= self.dims[direction] {
            return Err(Error::OutOfRange(format!(
                "position {position} on axis of size {}",
                self.dims[direction]
            )));
        }
        let mut axes: Vec<Vec<usize>> = self.dims.iter().map(|&n| (0..n).collect()).collect();
        axes[direction] = vec![position];
        let slab = self.extract(&BlockRef { axes })?;
        let mut dims = self.dims.clone();
        dims.remove(direction);
        Ok(Tensor { dims, alphabet: self.alphabet.clone(), data: slab.data })
    }

    /// Reindexes every axis: entry `(i_0, ..)` of the result is entry
    /// `(perms[0][i_0], ..)` of `self`.
    pub fn permute_axes(&self, perms: &[Vec<usize>]) -> Result<Tensor> {
        if perms.len() != self.ndim() {
            return Err(Error::Dimension("one permutation per axis required".into()));
        }
        for (p, &n) in perms.iter().zip(&self.dims) {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Block("not a permutation".into()));
            }
        }
        let mut idx = vec![0; self.ndim()];
        Tensor::from_fn(self.dims.clone(), self.alphabet.clone(), |i| {
            for (k, &x) in i.iter().enumerate() {
                idx[k] = perms[k][x];
            }
            self.get(&idx)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TensorFile {
            dims: self.dims.clone(),
            alphabet: self.alphabet.symbols.clone(),
            data: self.data.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Tensor> {
        let file: TensorFile = serde_json::from_str(s)?;
        Tensor::new(file.dims, Alphabet::new(file.alphabet)?, file.data)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Tensor> {
        Tensor::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// Sum over σ of squared weights divided by the volume: the ordinary-block energy.
pub(crate) fn sum_sq_over_volume(weights: &[u64], volume: u64) -> Rational {
    let s: u128 = weights.iter().map(|&w| w as u128 * w as u128).sum();
    Rational::new(s.into(), volume.into())
}
