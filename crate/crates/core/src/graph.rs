//! Hypercube-family graphs on integer vertex ids.
//!
//! A vertex `x_n x_{n-1} ... x_1` is stored as the integer `sum x_i 2^(i-1)`,
//! so coordinate `x_i` lives in bit `i - 1`. With this convention the
//! lexicographic segment `L_m^n` is the integer interval `[0, m)`.

use std::collections::VecDeque;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest dimension accepted by formula-only code paths.
pub const MAX_FORMULA_DIM: u32 = 62;
/// Largest dimension for which vertex sets and traversals are materialized.
pub const MAX_MATERIALIZED_DIM: u32 = 30;
/// Largest dimension for which a full adjacency bitmap is produced.
pub const MAX_BITMAP_DIM: u32 = 13;

/// Selects a member of the hypercube family: `Q_n` when `k` is `None`,
/// the folded hypercube `FQ_n` when `k == Some(1)`, otherwise `Q_{n,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphSpec {
    n: u32,
    k: Option<u32>,
}

impl GraphSpec {
    pub fn new(n: u32, k: Option<u32>) -> Result<Self> {
        if n == 0 || n > MAX_FORMULA_DIM {
            return domain(format!("dimension n = {n} outside 1..={MAX_FORMULA_DIM}"));
        }
        if let Some(k) = k {
            if k == 0 || k >= n {
                return domain(format!("k = {k} outside 1..={} for n = {n}", n - 1));
            }
        }
        Ok(Self { n, k })
    }

    pub fn hypercube(n: u32) -> Result<Self> {
        Self::new(n, None)
    }

    pub fn folded(n: u32) -> Result<Self> {
        Self::new(n, Some(1))
    }

    pub fn enhanced(n: u32, k: u32) -> Result<Self> {
        Self::new(n, Some(k))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> Option<u32> {
        self.k
    }

    pub fn vertex_count(&self) -> u64 {
        1u64 << self.n
    }

    /// Common degree of every vertex.
    pub fn regularity(&self) -> u32 {
        match self.k {
            Some(_) => self.n + 1,
            None => self.n,
        }
    }

    /// XOR mask of the complementary edge: flips coordinates `x_1 ..= x_{n-k+1}`.
    pub fn complement_mask(&self) -> Option<u64> {
        self.k.map(|k| (1u64 << (self.n - k + 1)) - 1)
    }

    fn check_vertex(&self, v: u64) -> Result<()> {
        if v >= self.vertex_count() {
            return domain(format!("vertex {v} outside 0..{}", self.vertex_count()));
        }
        Ok(())
    }

    fn check_materializable(&self) -> Result<()> {
        if self.n > MAX_MATERIALIZED_DIM {
            return Err(Error::Resource(format!(
                "n = {} exceeds the materialization cap {MAX_MATERIALIZED_DIM}",
                self.n
            )));
        }
        Ok(())
    }

    fn check_set(&self, set: &VertexSet) -> Result<()> {
        if set.n() != self.n {
            return domain(format!(
                "vertex set lives in dimension {}, graph has n = {}",
                set.n(),
                self.n
            ));
        }
        Ok(())
    }

    /// Neighbor ids of `v` without validation; dimension neighbors first.
    pub(crate) fn neighbor_ids(&self, v: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.n)
            .map(move |j| v ^ (1u64 << j))
            .chain(self.complement_mask().map(|mask| v ^ mask))
    }

    /// All neighbors of `v`.
    pub fn neighbors(&self, v: u64) -> Result<VertexSet> {
        self.check_materializable()?;
        self.check_vertex(v)?;
        let mut out = VertexSet::empty(self.n)?;
        for u in self.neighbor_ids(v) {
            out.insert(u);
        }
        Ok(out)
    }

    /// Total number of edges, `d * 2^(n-1)`.
    pub fn edge_count(&self) -> u128 {
        u128::from(self.regularity()) << (self.n - 1)
    }

    /// `2 |E(G[X])|`.
    pub fn induced_double_edge_count(&self, set: &VertexSet) -> Result<u64> {
        self.check_set(set)?;
        Ok(set
            .iter()
            .map(|v| self.neighbor_ids(v).filter(|&u| set.contains(u)).count() as u64)
            .sum())
    }

    /// `|[X, X̄]|`, the number of edges with exactly one end in `X`.
    pub fn boundary_size(&self, set: &VertexSet) -> Result<u64> {
        self.check_set(set)?;
        if set.is_empty() || set.len() == self.vertex_count() {
            return domain("boundary is only defined for proper nonempty subsets");
        }
        let double = self.induced_double_edge_count(set)?;
        Ok(u64::from(self.regularity()) * set.len() - double)
    }

    /// Whether `G[X]` is connected. The empty set counts as connected.
    pub fn is_connected_subset(&self, set: &VertexSet) -> Result<bool> {
        self.check_set(set)?;
        let Some(start) = set.iter().next() else {
            return Ok(true);
        };
        let mut seen = VertexSet::empty(self.n)?;
        seen.insert(start);
        let mut reached = 1u64;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbor_ids(v) {
                if set.contains(u) && !seen.contains(u) {
                    seen.insert(u);
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        Ok(reached == set.len())
    }

    /// Full adjacency matrix as a bit matrix indexed by vertex id on both axes.
    pub fn adjacency_bitmap(&self) -> Result<Bitmap> {
        if self.n > MAX_BITMAP_DIM {
            return Err(Error::Resource(format!(
                "bitmap for n = {} would be {0}x{0}; cap is n <= {MAX_BITMAP_DIM}",
                self.n
            )));
        }
        let size = self.vertex_count() as usize;
        let mut bitmap = Bitmap::new(size);
        for v in 0..self.vertex_count() {
            for u in self.neighbor_ids(v) {
                bitmap.set(v as usize, u as usize);
            }
        }
        Ok(bitmap)
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            None => write!(f, "Q_{}", self.n),
            Some(1) => write!(f, "FQ_{}", self.n),
            Some(k) => write!(f, "Q_{{{},{}}}", self.n, k),
        }
    }
}

/// `L_m^n = {0, 1, ..., m-1}`.
pub fn lexicographic_set(n: u32, m: u64) -> Result<VertexSet> {
    let mut set = VertexSet::empty(n)?;
    if m == 0 || m > set.capacity() {
        return domain(format!("m = {m} outside 1..={}", set.capacity()));
    }
    set.insert_range(m);
    Ok(set)
}

/// A subset of the vertices of an `n`-dimensional family member.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: u32,
    words: Vec<u64>,
    len: u64,
}

impl VertexSet {
    pub fn empty(n: u32) -> Result<Self> {
        if n > MAX_MATERIALIZED_DIM {
            return Err(Error::Resource(format!(
                "vertex sets are limited to n <= {MAX_MATERIALIZED_DIM}"
            )));
        }
        let words = ((1u64 << n) as usize).div_ceil(64);
        Ok(Self {
            n,
            words: vec![0; words],
            len: 0,
        })
    }

    pub fn from_ids(n: u32, ids: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for id in ids {
            if id >= set.capacity() {
                return domain(format!("vertex {id} outside 0..{}", set.capacity()));
            }
            set.insert(id);
        }
        Ok(set)
    }

    /// Builds a set from a bitmask over ids `0..64`.
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        let mut set = Self::empty(n)?;
        if n < 6 && mask >> (1u64 << n) != 0 {
            return domain(format!("mask {mask:#x} has ids beyond 2^{n}"));
        }
        set.words[0] = mask;
        set.len = u64::from(mask.count_ones());
        Ok(set)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of vertices in the ambient graph.
    pub fn capacity(&self) -> u64 {
        1u64 << self.n
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: u64) -> bool {
        v < self.capacity() && self.words[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    /// Inserts `v`; returns whether it was newly added. Panics if `v` is out
    /// of range.
    pub fn insert(&mut self, v: u64) -> bool {
        assert!(
            v < self.capacity(),
            "vertex {v} out of range for n = {}",
            self.n
        );
        let word = &mut self.words[(v >> 6) as usize];
        let bit = 1u64 << (v & 63);
        let fresh = *word & bit == 0;
        *word |= bit;
        self.len += u64::from(fresh);
        fresh
    }

    pub fn remove(&mut self, v: u64) -> bool {
        if !self.contains(v) {
            return false;
        }
        self.words[(v >> 6) as usize] &= !(1u64 << (v & 63));
        self.len -= 1;
        true
    }

    fn insert_range(&mut self, m: u64) {
        for v in 0..m {
            self.insert(v);
        }
    }

    /// `V \ X`.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if self.n < 6 {
            words[0] &= (1u64 << (1u64 << self.n)) - 1;
        }
        Self {
            n: self.n,
            words,
            len: self.capacity() - self.len,
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = u64::from(w.trailing_zeros());
                w &= w - 1;
                Some(((i as u64) << 6) | bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet(n={}, ", self.n)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

/// Square bit matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Bitmap {
    size: usize,
    row_words: usize,
    bits: Vec<u64>,
}

impl Bitmap {
    pub fn new(size: usize) -> Self {
        let row_words = size.div_ceil(64);
        Self {
            size,
            row_words,
            bits: vec![0; row_words * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.row_words + col / 64] >> (col % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.row_words + col / 64] |= 1u64 << (col % 64);
    }

    pub fn row_sum(&self, row: usize) -> u32 {
        self.bits[row * self.row_words..(row + 1) * self.row_words]
            .iter()
            .map(|w| w.count_ones())
            .sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|r| (r + 1..self.size).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Writes the plain portable bitmap (`P1`) encoding. Pixel `(x, y)` is
    /// column `x` of row `y`.
    pub fn write_pbm<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "P1")?;
        writeln!(out, "{} {}", self.size, self.size)?;
        let mut line = String::with_capacity(self.size * 2);
        for y in 0..self.size {
            line.clear();
            for x in 0..self.size {
                if x > 0 {
                    line.push(' ');
                }
                line.push(if self.get(y, x) { '1' } else { '0' });
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitmap({0}x{0})", self.size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(n: u32) -> GraphSpec {
        GraphSpec::enhanced(n, 2).unwrap()
    }

    #[test]
    fn neighbors_of_origin() {
        let got = q2(3).neighbors(0).unwrap().to_vec();
        assert_eq!(got, vec![0b001, 0b010, 0b011, 0b100]);
        let got = GraphSpec::hypercube(4)
            .unwrap()
            .neighbors(0)
            .unwrap()
            .to_vec();
        assert_eq!(got, vec![1, 2, 4, 8]);
    }

    #[test]
    fn enhanced_degree_is_n_plus_one() {
        let g = q2(4);
        for v in 0..16 {
            assert_eq!(g.neighbors(v).unwrap().len(), 5);
        }
    }

    #[test]
    fn neighbors_rejects_bad_vertex() {
        assert!(matches!(q2(4).neighbors(16), Err(Error::Domain(_))));
    }

    #[test]
    fn spec_validation() {
        assert!(GraphSpec::enhanced(4, 4).is_err());
        assert!(GraphSpec::enhanced(4, 0).is_err());
        assert!(GraphSpec::hypercube(0).is_err());
        assert!(GraphSpec::hypercube(63).is_err());
        assert_eq!(GraphSpec::folded(3).unwrap().complement_mask(), Some(0b111));
        assert_eq!(q2(5).complement_mask(), Some(0b1111));
    }

    #[test]
    fn edge_counts() {
        assert_eq!(q2(4).edge_count(), 40);
        assert_eq!(GraphSpec::hypercube(3).unwrap().edge_count(), 12);
        assert_eq!(q2(5).edge_count(), 96);
    }

    #[test]
    fn lexicographic_sets() {
        assert_eq!(lexicographic_set(4, 4).unwrap().to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(lexicographic_set(4, 1).unwrap().to_vec(), vec![0]);
        assert_eq!(
            lexicographic_set(4, 8).unwrap().to_vec(),
            (0..8).collect::<Vec<_>>()
        );
        assert!(lexicographic_set(4, 0).is_err());
        assert!(lexicographic_set(4, 17).is_err());
    }

    #[test]
    fn worked_example_edge_counts() {
        let g = q2(4);
        assert_eq!(
            g.induced_double_edge_count(&lexicographic_set(4, 4).unwrap())
                .unwrap(),
            8
        );
        assert_eq!(
            g.induced_double_edge_count(&lexicographic_set(4, 8).unwrap())
                .unwrap(),
            32
        );
        let single = VertexSet::from_ids(4, [9]).unwrap();
        assert_eq!(g.induced_double_edge_count(&single).unwrap(), 0);
    }

    #[test]
    fn boundaries() {
        assert_eq!(
            q2(4)
                .boundary_size(&lexicographic_set(4, 4).unwrap())
                .unwrap(),
            12
        );
        assert_eq!(
            q2(4)
                .boundary_size(&lexicographic_set(4, 8).unwrap())
                .unwrap(),
            8
        );
        assert_eq!(
            q2(5)
                .boundary_size(&lexicographic_set(5, 6).unwrap())
                .unwrap(),
            22
        );
    }

    #[test]
    fn boundary_rejects_degenerate_sets() {
        let g = q2(4);
        assert!(g.boundary_size(&VertexSet::empty(4).unwrap()).is_err());
        assert!(g.boundary_size(&lexicographic_set(4, 16).unwrap()).is_err());
        assert!(g.boundary_size(&lexicographic_set(5, 3).unwrap()).is_err());
    }

    #[test]
    fn connectivity() {
        let g = q2(4);
        assert!(g
            .is_connected_subset(&lexicographic_set(4, 6).unwrap())
            .unwrap());
        assert!(g
            .is_connected_subset(&lexicographic_set(4, 4).unwrap().complement())
            .unwrap());
        let pair = VertexSet::from_ids(4, [0, 3]).unwrap();
        assert!(!GraphSpec::hypercube(4)
            .unwrap()
            .is_connected_subset(&pair)
            .unwrap());
        // 0 and 3 are joined by the complementary edge of Q_{4,3}.
        assert!(GraphSpec::enhanced(4, 3)
            .unwrap()
            .is_connected_subset(&pair)
            .unwrap());
        assert!(g
            .is_connected_subset(&VertexSet::empty(4).unwrap())
            .unwrap());
    }

    #[test]
    fn complement_and_len() {
        let set = VertexSet::from_ids(3, [0, 5, 7]).unwrap();
        let comp = set.complement();
        assert_eq!(comp.to_vec(), vec![1, 2, 3, 4, 6]);
        assert_eq!(comp.len(), 5);
        let big = lexicographic_set(8, 100).unwrap().complement();
        assert_eq!(big.len(), 156);
        assert_eq!(big.iter().next(), Some(100));
    }

    #[test]
    fn bitmap_rows_and_diagonal() {
        let b = q2(4).adjacency_bitmap().unwrap();
        assert_eq!(b.size(), 16);
        for r in 0..16 {
            assert_eq!(b.row_sum(r), 5);
            assert!(!b.get(r, r));
        }
        assert!(q2(5).adjacency_bitmap().unwrap().is_symmetric());
        assert!(matches!(q2(14).adjacency_bitmap(), Err(Error::Resource(_))));
    }

    #[test]
    fn pbm_encoding() {
        let b = GraphSpec::hypercube(1).unwrap().adjacency_bitmap().unwrap();
        let mut out = Vec::new();
        b.write_pbm(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "P1\n2 2\n0 1\n1 0\n");
    }
}
