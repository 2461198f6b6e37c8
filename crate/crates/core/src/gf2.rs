//! Bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices pack bits into `u64` words so that row operations
//! inside Monte Carlo loops reduce to word-wide XORs. The row-vector
//! convention is used throughout: codewords are `message * generator`.

use crate::{Error, Result};
use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A vector over GF(2); addition is coordinatewise XOR.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries.
    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        let bits: Vec<u8> = bits.into_iter().collect();
        let mut v = BitVector::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b & 1 == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// XOR-accumulates `other` into `self`. Lengths must match.
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_u8_vec(&self) -> Vec<u8> {
        self.iter_bits().map(u8::from).collect()
    }

    /// Coordinates holding a 1, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// True iff every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// Outcome of solving `A x = b` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// Exactly one solution.
    Unique(BitVector),
    /// The system is contradictory.
    Inconsistent,
    /// A particular solution together with a basis of the nullspace of `A`.
    Underdetermined {
        particular: BitVector,
        nullspace: Vec<BitVector>,
    },
}

/// A dense matrix over GF(2) with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    row_words: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let row_words = words_for(cols);
        GF2Matrix {
            rows,
            cols,
            row_words,
            data: vec![0; rows * row_words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GF2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries; all rows must share a length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = GF2Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                m.set(i, j, *b & 1 == 1);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.row_words + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.row_words + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.data[r * self.row_words..(r + 1) * self.row_words].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVector) {
        debug_assert_eq!(v.len(), self.cols);
        self.data[r * self.row_words..(r + 1) * self.row_words].copy_from_slice(v.words());
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            v.set(r, self.get(r, c));
        }
        v
    }

    fn row_slice(&self, r: usize) -> &[u64] {
        &self.data[r * self.row_words..(r + 1) * self.row_words]
    }

    fn xor_row_into(&mut self, dst: usize, src: usize) {
        let (a, b) = (dst.min(src), dst.max(src));
        let (first, second) = self.data.split_at_mut(b * self.row_words);
        let src_slice;
        let dst_slice;
        if dst < src {
            dst_slice = &mut first[a * self.row_words..(a + 1) * self.row_words];
            src_slice = &second[..self.row_words];
        } else {
            src_slice = &first[a * self.row_words..(a + 1) * self.row_words];
            dst_slice = &mut second[..self.row_words];
        }
        for (d, s) in dst_slice.iter_mut().zip(src_slice) {
            *d ^= s;
        }
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Stacks `self` on top of `other`; column counts must match.
    pub fn stack(&self, other: &GF2Matrix) -> Result<GF2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stack: {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut m = GF2Matrix::zeros(self.rows + other.rows, self.cols);
        for r in 0..self.rows {
            m.set_row(r, &self.row(r));
        }
        for r in 0..other.rows {
            m.set_row(self.rows + r, &other.row(r));
        }
        Ok(m)
    }

    /// Row rank via Gaussian elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut scratch = self.clone();
        scratch.eliminate()
    }

    /// In-place forward elimination; returns the rank.
    fn eliminate(&mut self) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            if r != pivot_row {
                // swap rows r and pivot_row
                for w in 0..self.row_words {
                    self.data
                        .swap(r * self.row_words + w, pivot_row * self.row_words + w);
                }
            }
            for r2 in 0..self.rows {
                if r2 != pivot_row && self.get(r2, col) {
                    self.xor_row_into(r2, pivot_row);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Row-vector by matrix product: `result_j = sum_i v_i * M[i][j]` over GF(2).
pub fn mat_vec_mul(m: &GF2Matrix, v: &BitVector) -> Result<BitVector> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} vs {} matrix rows",
            v.len(),
            m.rows()
        )));
    }
    let mut out = BitVector::zeros(m.cols());
    for i in 0..m.rows() {
        if v.get(i) {
            for (o, w) in out.words.iter_mut().zip(m.row_slice(i)) {
                *o ^= w;
            }
        }
    }
    Ok(out)
}

/// Matrix product `A * B` over GF(2).
pub fn mat_mul(a: &GF2Matrix, b: &GF2Matrix) -> Result<GF2Matrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut out = GF2Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        let mut acc = vec![0u64; b.row_words];
        for k in 0..a.cols() {
            if a.get(i, k) {
                for (o, w) in acc.iter_mut().zip(b.row_slice(k)) {
                    *o ^= w;
                }
            }
        }
        out.data[i * out.row_words..(i + 1) * out.row_words].copy_from_slice(&acc);
    }
    Ok(out)
}

/// Rank of the row rank; alias kept for call-site readability.
pub fn rank(m: &GF2Matrix) -> usize {
    m.rank()
}

/// Solves `A x = b` and classifies the solution set.
///
/// In the `Underdetermined` case the particular solution sets every free
/// variable to zero and the nullspace basis has one vector per free variable.
pub fn solve_system(a: &GF2Matrix, b: &BitVector) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} vs {} equations",
            b.len(),
            a.rows()
        )));
    }
    // Augmented elimination: [A | b].
    let mut aug = GF2Matrix::zeros(a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) {
                aug.set(r, c, true);
            }
        }
        if b.get(r) {
            aug.set(r, a.cols(), true);
        }
    }
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0;
    for col in 0..a.cols() {
        if pivot_row == aug.rows {
            break;
        }
        let Some(r) = (pivot_row..aug.rows).find(|&r| aug.get(r, col)) else {
            continue;
        };
        if r != pivot_row {
            for w in 0..aug.row_words {
                aug.data
                    .swap(r * aug.row_words + w, pivot_row * aug.row_words + w);
            }
        }
        for r2 in 0..aug.rows {
            if r2 != pivot_row && aug.get(r2, col) {
                aug.xor_row_into(r2, pivot_row);
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    // Any all-zero coefficient row with rhs 1 is a contradiction.
    for r in pivot_row..aug.rows {
        if aug.get(r, a.cols()) {
            return Ok(Solution::Inconsistent);
        }
    }
    let mut particular = BitVector::zeros(a.cols());
    for (rank_row, &col) in pivot_cols.iter().enumerate() {
        if aug.get(rank_row, a.cols()) {
            particular.set(col, true);
        }
    }
    if pivot_cols.len() == a.cols() {
        return Ok(Solution::Unique(particular));
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; a.cols()];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut nullspace = Vec::new();
    for free in (0..a.cols()).filter(|&c| !is_pivot[c]) {
        let mut vec = BitVector::zeros(a.cols());
        vec.set(free, true);
        for (rank_row, &col) in pivot_cols.iter().enumerate() {
            if aug.get(rank_row, free) {
                vec.set(col, true);
            }
        }
        nullspace.push(vec);
    }
    Ok(Solution::Underdetermined {
        particular,
        nullspace,
    })
}

/// True iff the row spaces of `A` and `B` coincide.
pub fn row_space_equal(a: &GF2Matrix, b: &GF2Matrix) -> Result<bool> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "row spaces over {} vs {} columns",
            a.cols(),
            b.cols()
        )));
    }
    let ra = a.rank();
    let rb = b.rank();
    if ra != rb {
        return Ok(false);
    }
    Ok(a.stack(b)?.rank() == ra)
}

/// Plain-text matrix format: first line `rows cols`, then rows of 0/1
/// characters.
pub fn parse_matrix_text(text: &str) -> Result<GF2Matrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut parts = header.split_whitespace();
    let rows: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad row count".into()))?;
    let cols: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad column count".into()))?;
    let mut m = GF2Matrix::zeros(rows, cols);
    for r in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
        let bits: Vec<char> = line.trim().chars().filter(|c| !c.is_whitespace()).collect();
        if bits.len() != cols {
            return Err(Error::Parse(format!(
                "row {r} has {} entries, expected {cols}",
                bits.len()
            )));
        }
        for (c, ch) in bits.iter().enumerate() {
            match ch {
                '0' => {}
                '1' => m.set(r, c, true),
                _ => return Err(Error::Parse(format!("bad character {ch:?} in row {r}"))),
            }
        }
    }
    Ok(m)
}

/// Inverse of [`parse_matrix_text`].
pub fn format_matrix_text(m: &GF2Matrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(if m.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix_file(path: &std::path::Path) -> Result<GF2Matrix> {
    parse_matrix_text(&std::fs::read_to_string(path)?)
}

pub fn write_matrix_file(path: &std::path::Path, m: &GF2Matrix) -> Result<()> {
    std::fs::write(path, format_matrix_text(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits.iter().copied())
    }

    #[test]
    fn mat_vec_identity() {
        let m = GF2Matrix::identity(3);
        let v = bv(&[1, 0, 1]);
        assert_eq!(mat_vec_mul(&m, &v).unwrap(), v);
    }

    #[test]
    fn mat_vec_small() {
        let m = GF2Matrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let v = bv(&[1, 1]);
        assert_eq!(mat_vec_mul(&m, &v).unwrap(), bv(&[1, 0]));
    }

    #[test]
    fn mat_vec_zero_matrix() {
        let m = GF2Matrix::zeros(4, 3);
        let v = bv(&[1, 1, 0, 1]);
        assert_eq!(mat_vec_mul(&m, &v).unwrap(), bv(&[0, 0, 0]));
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let m = GF2Matrix::identity(3);
        assert!(mat_vec_mul(&m, &bv(&[1, 0])).is_err());
    }

    #[test]
    fn rank_identity_and_dependent_rows() {
        assert_eq!(GF2Matrix::identity(5).rank(), 5);
        let m = GF2Matrix::from_rows(&[vec![1, 0, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_unique() {
        let a = GF2Matrix::identity(2);
        let b = bv(&[1, 0]);
        assert_eq!(solve_system(&a, &b).unwrap(), Solution::Unique(bv(&[1, 0])));
    }

    #[test]
    fn solve_underdetermined() {
        let a = GF2Matrix::from_rows(&[vec![1, 1]]).unwrap();
        let b = bv(&[1]);
        match solve_system(&a, &b).unwrap() {
            Solution::Underdetermined {
                particular,
                nullspace,
            } => {
                assert_eq!(nullspace.len(), 1);
                // Both solutions of x1 + x2 = 1 are reachable.
                let mut other = particular.clone();
                other.xor_assign(&nullspace[0]);
                let sols = [particular, other];
                assert!(sols.contains(&bv(&[1, 0])));
                assert!(sols.contains(&bv(&[0, 1])));
            }
            s => panic!("expected underdetermined, got {s:?}"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let a = GF2Matrix::from_rows(&[vec![1], vec![1]]).unwrap();
        let b = bv(&[1, 0]);
        assert_eq!(solve_system(&a, &b).unwrap(), Solution::Inconsistent);
    }

    #[test]
    fn row_space_checks() {
        let a = GF2Matrix::identity(2);
        let b = GF2Matrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(row_space_equal(&a, &b).unwrap());
        assert!(row_space_equal(&a, &a).unwrap());
        let c = GF2Matrix::from_rows(&[vec![1, 0]]).unwrap();
        let d = GF2Matrix::from_rows(&[vec![0, 1]]).unwrap();
        assert!(!row_space_equal(&c, &d).unwrap());
    }

    #[test]
    fn text_format_round_trip() {
        let m = GF2Matrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let text = format_matrix_text(&m);
        assert_eq!(text, "2 3\n101\n011\n");
        assert_eq!(parse_matrix_text(&text).unwrap(), m);
    }

    prop_compose! {
        fn arb_matrix(max_rows: usize, max_cols: usize)
            (rows in 1..=max_rows, cols in 1..=max_cols)
            (bits in prop::collection::vec(any::<bool>(), rows * cols),
             rows in Just(rows), cols in Just(cols))
            -> GF2Matrix
        {
            let mut m = GF2Matrix::zeros(rows, cols);
            for (i, b) in bits.into_iter().enumerate() {
                m.set(i / cols, i % cols, b);
            }
            m
        }
    }

    proptest! {
        #[test]
        fn unique_solutions_round_trip(m in arb_matrix(8, 8), xs in prop::collection::vec(any::<bool>(), 8)) {
            let x = BitVector::from_bits(xs.iter().take(m.cols()).map(|&b| u8::from(b)));
            let b = mat_vec_mul(&m.transpose(), &x).unwrap();
            // b = M x viewed column-style: solve and re-check.
            match solve_system(&m, &b).unwrap() {
                Solution::Unique(sol) => {
                    let back = mat_vec_mul(&m.transpose(), &sol).unwrap();
                    prop_assert_eq!(back, b);
                }
                Solution::Underdetermined { particular, .. } => {
                    let back = mat_vec_mul(&m.transpose(), &particular).unwrap();
                    prop_assert_eq!(back, b);
                }
                Solution::Inconsistent => prop_assert!(false, "constructed system must be consistent"),
            }
        }

        #[test]
        fn rank_invariant_under_row_ops(m in arb_matrix(8, 8), i in 0usize..8, j in 0usize..8) {
            let r = m.rank();
            let (i, j) = (i % m.rows(), j % m.rows());
            // Row swap.
            let mut swapped = m.clone();
            let (ri, rj) = (m.row(i), m.row(j));
            swapped.set_row(i, &rj);
            swapped.set_row(j, &ri);
            prop_assert_eq!(swapped.rank(), r);
            // Row addition (into a distinct row).
            if i != j {
                let mut added = m.clone();
                let mut sum = m.row(i);
                sum.xor_assign(&m.row(j));
                added.set_row(i, &sum);
                prop_assert_eq!(added.rank(), r);
            }
        }

        #[test]
        fn multiplication_is_linear(m in arb_matrix(8, 8), us in prop::collection::vec(any::<bool>(), 8), vs in prop::collection::vec(any::<bool>(), 8)) {
            let u = BitVector::from_bits(us.iter().take(m.rows()).map(|&b| u8::from(b)));
            let v = BitVector::from_bits(vs.iter().take(m.rows()).map(|&b| u8::from(b)));
            let mut uv = u.clone();
            uv.xor_assign(&v);
            let mut rhs = mat_vec_mul(&m, &u).unwrap();
            rhs.xor_assign(&mat_vec_mul(&m, &v).unwrap());
            prop_assert_eq!(mat_vec_mul(&m, &uv).unwrap(), rhs);
        }
    }
}
