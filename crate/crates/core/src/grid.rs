//! Product spaces `∏_{q=start}^{end−1} H_q`, their points and subsets.
//!
//! Each `H_q` is represented only by its size `n_q`; its elements are
//! `0..n_q`. Points are encoded in mixed radix with the first coordinate
//! least significant, so for a cut at coordinate `i` the point `x⌢y` has
//! index `index(x) + |prefix|·index(y)`. Fibers over a prefix point are
//! strided gathers and sections over a suffix point are contiguous ranges.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::{Budget, Error, ExactRational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridShape {
    start: usize,
    sizes: Vec<usize>,
    #[serde(skip)]
    cells: usize,
}

impl GridShape {
    pub fn new(start: usize, sizes: Vec<usize>) -> Result<Self> {
        if let Some(q) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::domain(format!(
                "coordinate {} has size 0",
                start + q
            )));
        }
        let cells = sizes
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::budget("grid cardinality overflows usize"))?;
        Ok(GridShape {
            start,
            sizes,
            cells,
        })
    }

    /// The product over no coordinates: a single empty point.
    pub fn unit(start: usize) -> Self {
        GridShape {
            start,
            sizes: Vec::new(),
            cells: 1,
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// One past the last coordinate.
    pub fn end(&self) -> usize {
        self.start + self.sizes.len()
    }

    pub fn dims(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size of absolute coordinate `q`.
    pub fn size_at(&self, q: usize) -> Option<usize> {
        q.checked_sub(self.start)
            .and_then(|i| self.sizes.get(i).copied())
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn ensure_within(&self, budget: &Budget) -> Result<()> {
        if self.cells as u64 > budget.max_cells {
            return Err(Error::budget(format!(
                "grid with {} cells exceeds the {}-cell budget",
                self.cells, budget.max_cells
            )));
        }
        Ok(())
    }

    /// Sub-product over absolute coordinates `[from, to)`.
    pub fn slice(&self, from: usize, to: usize) -> Result<GridShape> {
        if from < self.start || to > self.end() || from > to {
            return Err(Error::domain(format!(
                "coordinates [{from}, {to}) are not inside [{}, {})",
                self.start,
                self.end()
            )));
        }
        GridShape::new(
            from,
            self.sizes[from - self.start..to - self.start].to_vec(),
        )
    }

    /// Product over `[self.start, other.end)`; the ranges must be contiguous.
    pub fn concat(&self, other: &GridShape) -> Result<GridShape> {
        if self.end() != other.start {
            return Err(Error::domain(format!(
                "non-contiguous ranges [{}, {}) and [{}, {})",
                self.start,
                self.end(),
                other.start,
                other.end()
            )));
        }
        let mut sizes = self.sizes.clone();
        sizes.extend_from_slice(&other.sizes);
        GridShape::new(self.start, sizes)
    }

    pub fn index_of(&self, p: &Point) -> Result<usize> {
        if p.start != self.start || p.coords.len() != self.sizes.len() {
            return Err(Error::domain(format!(
                "point over [{}, {}) does not match shape over [{}, {})",
                p.start,
                p.end(),
                self.start,
                self.end()
            )));
        }
        let mut index = 0;
        let mut stride = 1;
        for (q, (&x, &n)) in p.coords.iter().zip(&self.sizes).enumerate() {
            if x >= n {
                return Err(Error::domain(format!(
                    "coordinate {} value {x} out of range 0..{n}",
                    self.start + q
                )));
            }
            index += x * stride;
            stride *= n;
        }
        Ok(index)
    }

    pub fn point_of(&self, index: usize) -> Result<Point> {
        if index >= self.cells {
            return Err(Error::domain(format!(
                "index {index} out of range for {} cells",
                self.cells
            )));
        }
        let mut rest = index;
        let coords = self
            .sizes
            .iter()
            .map(|&n| {
                let x = rest % n;
                rest /= n;
                x
            })
            .collect();
        Ok(Point {
            start: self.start,
            coords,
        })
    }
}

/// A point of a product space, tagged with its first coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub start: usize,
    pub coords: Vec<usize>,
}

impl Point {
    pub fn new(start: usize, coords: Vec<usize>) -> Self {
        Point { start, coords }
    }

    pub fn end(&self) -> usize {
        self.start + self.coords.len()
    }

    /// Initial segment `x↾c` over `[start, c)`.
    pub fn restrict(&self, c: usize) -> Result<Point> {
        if c <= self.start || c > self.end() {
            return Err(Error::domain(format!(
                "cannot restrict a point over [{}, {}) to {c}",
                self.start,
                self.end()
            )));
        }
        Ok(Point {
            start: self.start,
            coords: self.coords[..c - self.start].to_vec(),
        })
    }

    /// Concatenation `self⌢other`.
    pub fn concat(&self, other: &Point) -> Result<Point> {
        if self.end() != other.start {
            return Err(Error::domain("points over non-contiguous ranges"));
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Point {
            start: self.start,
            coords,
        })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Fixed-length bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn full(len: usize) -> Self {
        let mut b = BitSet {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        b.trim();
        b
    }

    fn trim(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn and(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.len, other.len);
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub(crate) fn and_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub(crate) fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// 64 bits starting at bit `pos`, zero-padded past the end.
    #[inline]
    fn word_at(&self, pos: usize) -> u64 {
        let (wi, off) = (pos / 64, pos % 64);
        let lo = self.words.get(wi).copied().unwrap_or(0) >> off;
        if off == 0 {
            lo
        } else {
            lo | self.words.get(wi + 1).copied().unwrap_or(0) << (64 - off)
        }
    }

    /// Bits `[start, start + len)` as a new bitset.
    pub(crate) fn range(&self, start: usize, len: usize) -> BitSet {
        let mut out = BitSet {
            words: (0..len.div_ceil(64))
                .map(|w| self.word_at(start + 64 * w))
                .collect(),
            len,
        };
        out.trim();
        out
    }

    /// Bits `offset, offset + stride, …` (`count` of them) as a new bitset.
    pub(crate) fn gather(&self, offset: usize, stride: usize, count: usize) -> BitSet {
        if stride == 1 {
            return self.range(offset, count);
        }
        let mut out = BitSet::new(count);
        let mut pos = offset;
        for (wi, word) in out.words.iter_mut().enumerate() {
            let n = (count - wi * 64).min(64);
            let mut w = 0u64;
            for b in 0..n {
                w |= ((self.words[pos / 64] >> (pos % 64)) & 1) << b;
                pos += stride;
            }
            *word = w;
        }
        out
    }

    pub(crate) fn to_le_bytes(&self) -> Vec<u8> {
        let mut bytes: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        bytes.truncate(self.len.div_ceil(8));
        bytes
    }

    pub(crate) fn from_le_bytes(bytes: &[u8], len: usize) -> Result<BitSet> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::domain(format!(
                "expected {} bytes for {len} bits, got {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, &b) in bytes.iter().enumerate() {
            words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        let out = BitSet { words, len };
        let mut trimmed = out.clone();
        trimmed.trim();
        if trimmed != out {
            return Err(Error::domain("bits set past the end of the grid"));
        }
        Ok(out)
    }
}

/// An immutable subset of a product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    shape: GridShape,
    bits: BitSet,
}

impl PointSet {
    pub fn empty(shape: GridShape) -> Self {
        let bits = BitSet::new(shape.cells());
        PointSet { shape, bits }
    }

    pub fn full(shape: GridShape) -> Self {
        let bits = BitSet::full(shape.cells());
        PointSet { shape, bits }
    }

    pub fn from_indices(
        shape: GridShape,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut bits = BitSet::new(shape.cells());
        for i in indices {
            if i >= shape.cells() {
                return Err(Error::domain(format!(
                    "index {i} out of range for {} cells",
                    shape.cells()
                )));
            }
            bits.set(i);
        }
        Ok(PointSet { shape, bits })
    }

    pub fn from_points<'a>(
        shape: GridShape,
        points: impl IntoIterator<Item = &'a Point>,
    ) -> Result<Self> {
        let indices = points
            .into_iter()
            .map(|p| shape.index_of(p))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(shape, indices)
    }

    /// Members are the points whose coordinates satisfy `pred`.
    pub fn from_fn(shape: GridShape, mut pred: impl FnMut(&[usize]) -> bool) -> Self {
        let mut bits = BitSet::new(shape.cells());
        let mut coords = vec![0usize; shape.dims()];
        for i in 0..shape.cells() {
            if pred(&coords) {
                bits.set(i);
            }
            for (c, &n) in coords.iter_mut().zip(shape.sizes()) {
                *c += 1;
                if *c < n {
                    break;
                }
                *c = 0;
            }
        }
        PointSet { shape, bits }
    }

    pub(crate) fn from_bits(shape: GridShape, bits: BitSet) -> Self {
        debug_assert_eq!(shape.cells(), bits.len());
        PointSet { shape, bits }
    }

    pub(crate) fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn cells(&self) -> usize {
        self.shape.cells()
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.words.iter().all(|&w| w == 0)
    }

    pub fn contains_index(&self, i: usize) -> bool {
        i < self.cells() && self.bits.get(i)
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(self.bits.get(self.shape.index_of(p)?))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.indices()
            .map(|i| self.shape.point_of(i).expect("member index in range"))
    }

    /// `|D| / |∏ H_q|`.
    pub fn density(&self) -> ExactRational {
        ExactRational::new(self.count() as u64, self.cells() as u64).expect("cells >= 1")
    }

    /// `{y : x⌢y ∈ D}` for a prefix point `x` starting at the set's first coordinate.
    pub fn fiber(&self, x: &Point) -> Result<PointSet> {
        if x.start != self.shape.start || x.end() > self.shape.end() {
            return Err(Error::domain(format!(
                "prefix over [{}, {}) does not start the set's range [{}, {})",
                x.start,
                x.end(),
                self.shape.start,
                self.shape.end()
            )));
        }
        let prefix = self.shape.slice(x.start, x.end())?;
        let suffix = self.shape.slice(x.end(), self.shape.end())?;
        let offset = prefix.index_of(x)?;
        Ok(self.fiber_at(offset, prefix.cells(), suffix))
    }

    pub(crate) fn fiber_at(&self, offset: usize, stride: usize, suffix: GridShape) -> PointSet {
        let bits = self.bits.gather(offset, stride, suffix.cells());
        PointSet {
            shape: suffix,
            bits,
        }
    }

    /// `{x : x⌢y ∈ D}` for a suffix point `y` ending at the set's last coordinate.
    pub fn section(&self, y: &Point) -> Result<PointSet> {
        if y.end() != self.shape.end() || y.start < self.shape.start {
            return Err(Error::domain("suffix point does not end the set's range"));
        }
        let prefix = self.shape.slice(self.shape.start, y.start)?;
        let suffix = self.shape.slice(y.start, self.shape.end())?;
        let j = suffix.index_of(y)?;
        Ok(self.section_at(j, prefix))
    }

    pub(crate) fn section_at(&self, suffix_index: usize, prefix: GridShape) -> PointSet {
        let len = prefix.cells();
        let bits = self.bits.range(suffix_index * len, len);
        PointSet {
            shape: prefix,
            bits,
        }
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.same_shape(other)?;
        Ok(PointSet {
            shape: self.shape.clone(),
            bits: self.bits.and(&other.bits),
        })
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    fn same_shape(&self, other: &PointSet) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::domain("point sets over different shapes"));
        }
        Ok(())
    }

    /// Little-endian bytes, bit `i` is point index `i`, padded to whole bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits.to_le_bytes()
    }

    pub fn from_bytes(shape: GridShape, bytes: &[u8]) -> Result<Self> {
        let bits = BitSet::from_le_bytes(bytes, shape.cells())?;
        Ok(PointSet { shape, bits })
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointSet {
    /// Shape first, then the sorted member lists lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape
            .cmp(&other.shape)
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

/// `A⌢B = {x⌢y : x ∈ A, y ∈ B}`.
pub fn concat_sets(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    let shape = a.shape.concat(&b.shape)?;
    let stride = a.cells();
    let mut bits = BitSet::new(shape.cells());
    for y in b.indices() {
        for x in a.indices() {
            bits.set(x + stride * y);
        }
    }
    Ok(PointSet { shape, bits })
}

/// A sequence `(I_q)` of sorted coordinate subsets starting at coordinate `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubgridWitness {
    pub start: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl SubgridWitness {
    pub fn new(start: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        for (q, s) in subsets.iter().enumerate() {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::domain(format!(
                    "I_{} must be strictly increasing",
                    start + q
                )));
            }
        }
        Ok(SubgridWitness { start, subsets })
    }

    pub fn end(&self) -> usize {
        self.start + self.subsets.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.subsets.iter().map(Vec::len).collect()
    }

    /// Keeps `I_q` for `q < end` only.
    pub fn truncated(&self, end: usize) -> SubgridWitness {
        let n = end.saturating_sub(self.start).min(self.subsets.len());
        SubgridWitness {
            start: self.start,
            subsets: self.subsets[..n].to_vec(),
        }
    }

    /// Whether `|I_q| = targets[q − start]` and every `I_q ⊆ 0..n_q` for `shape`.
    pub fn fits(&self, shape: &GridShape, targets: &[usize]) -> bool {
        self.subsets.len() == targets.len()
            && self.subsets.iter().enumerate().all(|(j, s)| {
                s.len() == targets[j]
                    && shape
                        .size_at(self.start + j)
                        .is_some_and(|n| s.iter().all(|&x| x < n))
            })
    }

    /// `∏ I_q` as a point set over its own coordinates.
    pub fn product_set(&self, shape: &GridShape) -> Result<PointSet> {
        let sub = shape.slice(self.start, self.end())?;
        for (j, s) in self.subsets.iter().enumerate() {
            if s.iter().any(|&x| x >= sub.sizes()[j]) {
                return Err(Error::domain(format!(
                    "I_{} has a value outside H_{}",
                    self.start + j,
                    self.start + j
                )));
            }
        }
        Ok(PointSet::from_fn(sub, |c| {
            c.iter()
                .zip(&self.subsets)
                .all(|(x, s)| s.binary_search(x).is_ok())
        }))
    }
}

/// Whether `(Γ⌢)∏ I_q ⊆ D`. Without a prefix the witness must start where `D` starts.
pub fn contains_product(
    d: &PointSet,
    w: &SubgridWitness,
    prefix: Option<&PointSet>,
) -> Result<bool> {
    let shape = d.shape();
    let prefix_shape = shape.slice(shape.start(), w.start)?;
    match prefix {
        Some(g) if g.shape() != &prefix_shape => {
            return Err(Error::domain("prefix set does not match the witness cut"))
        }
        None if w.start != shape.start() => {
            return Err(Error::domain(
                "witness does not start at the set's first coordinate",
            ))
        }
        _ => {}
    }
    if w.end() != shape.end() {
        return Err(Error::domain(format!(
            "witness over [{}, {}) does not end at {}",
            w.start,
            w.end(),
            shape.end()
        )));
    }
    let product = w.product_set(shape)?;
    let full_prefix;
    let prefix = match prefix {
        Some(g) => g,
        None => {
            full_prefix = PointSet::full(prefix_shape);
            &full_prefix
        }
    };
    let stride = prefix.cells();
    let inside = product
        .indices()
        .all(|y| prefix.indices().all(|x| d.bits.get(x + stride * y)));
    Ok(inside)
}
