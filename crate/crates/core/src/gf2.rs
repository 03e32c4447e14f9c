//! Sparse linear algebra over GF(2).
//!
//! Vectors are sorted lists of the indices of their nonzero coordinates.
//! Elimination always pivots on the lowest nonzero column, so echelon forms
//! (and hence every representative derived from them) depend only on the
//! order of the basis, never on hashing or thread scheduling.

/// A GF(2) vector given by its support, sorted ascending.
pub type SparseVec = Vec<u32>;

/// Symmetric difference of two sorted supports.
pub fn xor(a: &[u32], b: &[u32]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Turns an unsorted list of indices with repetitions into a support,
/// cancelling pairs.
pub fn from_indices(mut idx: Vec<u32>) -> SparseVec {
    idx.sort_unstable();
    let mut out = Vec::with_capacity(idx.len());
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j < idx.len() && idx[j] == idx[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(idx[i]);
        }
        i = j;
    }
    out
}

/// Largest packed copy for which `rank` and `kernel` switch to bit-packed rows.
const DENSE_LIMIT: u64 = 64 << 20;

fn pack(support: &[u32], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for &c in support {
        out[c as usize / 64] |= 1 << (c % 64);
    }
    out
}

fn unpack(bits: &[u64]) -> SparseVec {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            out.push((w * 64) as u32 + x.trailing_zeros());
            x &= x - 1;
        }
    }
    out
}

fn lowest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn xor_words(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// A linear map `GF(2)^rows -> GF(2)^cols` stored row-wise: row `i` is the
/// image of the `i`-th source basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Block {
    cols: usize,
    rows: Vec<SparseVec>,
}

impl Gf2Block {
    pub fn new(cols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0] < w[1]) && r.iter().all(|&c| (c as usize) < cols)));
        Gf2Block { cols, rows }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Gf2Block {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Image of a source vector.
    pub fn apply(&self, v: &[u32]) -> SparseVec {
        v.iter()
            .fold(Vec::new(), |acc, &i| xor(&acc, &self.rows[i as usize]))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Gf2Block) -> Gf2Block {
        assert_eq!(self.cols, other.num_rows(), "incompatible blocks");
        Gf2Block {
            cols: other.cols,
            rows: self.rows.iter().map(|r| other.apply(r)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        if self.prefers_dense() {
            return self.kernel_dense(false).0;
        }
        self.rank_sparse()
    }

    fn rank_sparse(&self) -> usize {
        let mut sub = Subspace::new(self.cols);
        self.rows.iter().filter(|r| sub.insert(r.to_vec())).count()
    }

    /// Echelon basis of the image (row space).
    pub fn image(&self) -> Subspace {
        let mut sub = Subspace::new(self.cols);
        for r in &self.rows {
            sub.insert(r.clone());
        }
        sub
    }

    /// A basis of the kernel, in source coordinates.
    pub fn kernel(&self) -> Vec<SparseVec> {
        if self.prefers_dense() {
            return self.kernel_dense(true).1;
        }
        self.kernel_sparse()
    }

    fn kernel_sparse(&self) -> Vec<SparseVec> {
        // Eliminate rows while tracking which source vectors were combined.
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.cols];
        let mut reduced: Vec<(SparseVec, SparseVec)> = Vec::new();
        let mut kernel = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut v = row.clone();
            let mut combo = vec![i as u32];
            while let Some(p) = v.first().and_then(|&lead| pivot_of_col[lead as usize]) {
                v = xor(&v, &reduced[p].0);
                combo = xor(&combo, &reduced[p].1);
            }
            match v.first() {
                Some(&lead) => {
                    pivot_of_col[lead as usize] = Some(reduced.len());
                    reduced.push((v, combo));
                }
                None => kernel.push(combo),
            }
        }
        kernel
    }

    /// Bit-packed elimination pays off once rows fill in; it is used when
    /// the packed copy (with the row-combination record) is small.
    fn prefers_dense(&self) -> bool {
        let rows = self.rows.len();
        rows >= 64 && Self::dense_bytes(rows, self.cols + rows) <= DENSE_LIMIT
    }

    /// Rank and (when `track` is set) kernel by the same lowest-pivot
    /// elimination as the sparse path, on bit-packed rows.
    fn kernel_dense(&self, track: bool) -> (usize, Vec<SparseVec>) {
        let words = self.cols.div_ceil(64);
        let combo_words = if track {
            self.rows.len().div_ceil(64)
        } else {
            0
        };
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.cols];
        let mut reduced: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        let mut kernel = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut v = pack(row, words);
            let mut combo = vec![0u64; combo_words];
            if track {
                combo[i / 64] |= 1 << (i % 64);
            }
            while let Some(lead) = lowest_bit(&v) {
                let Some(p) = pivot_of_col[lead] else { break };
                xor_words(&mut v, &reduced[p].0);
                if track {
                    xor_words(&mut combo, &reduced[p].1);
                }
            }
            match lowest_bit(&v) {
                Some(lead) => {
                    pivot_of_col[lead] = Some(reduced.len());
                    reduced.push((v, combo));
                }
                None if track => kernel.push(unpack(&combo)),
                None => {}
            }
        }
        (reduced.len(), kernel)
    }

    /// Estimated bytes for a dense bit-packed copy of this block; used for
    /// budget checks.
    pub fn dense_bytes(rows: usize, cols: usize) -> u64 {
        rows as u64 * (cols as u64).div_ceil(64) * 8
    }
}

/// A subspace of `GF(2)^ambient` held in echelon form. Each stored row has a
/// distinct leading (lowest) index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    pivot_of_col: Vec<Option<u32>>,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            pivot_of_col: vec![None; ambient],
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Subspace::new(ambient);
        for i in 0..ambient {
            s.insert(vec![i as u32]);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Reduces `v` against the echelon rows; the result is zero iff `v` lies
    /// in the subspace.
    pub fn reduce(&self, v: &[u32]) -> SparseVec {
        let mut v = v.to_vec();
        let mut start = 0;
        while start < v.len() {
            let col = v[start];
            match self.pivot_of_col[col as usize] {
                Some(p) => {
                    // Pivot rows only touch columns >= col, so everything
                    // before `start` is final.
                    let tail = xor(&v[start..], &self.rows[p as usize]);
                    v.truncate(start);
                    v.extend(tail);
                }
                None => start += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = v;
        loop {
            let Some(&lead) = v.first() else { return false };
            match self.pivot_of_col[lead as usize] {
                Some(p) => v = xor(&v, &self.rows[p as usize]),
                None => {
                    self.pivot_of_col[lead as usize] = Some(self.rows.len() as u32);
                    self.rows.push(v);
                    return true;
                }
            }
        }
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0])
    }

    /// Vectors from `candidates` extending `self` to a basis of their joint
    /// span. Each returned vector is reduced against `self` and the earlier
    /// ones, so leading indices are distinct and avoid the pivots of `self`.
    pub fn complement_in(&self, candidates: &[SparseVec]) -> Vec<SparseVec> {
        let mut joint = self.clone();
        let mut out = Vec::new();
        for c in candidates {
            let r = joint.reduce(c);
            if !r.is_empty() {
                joint.insert(r.clone());
                out.push(r);
            }
        }
        out.sort();
        out
    }
}
