//! Bit-MAP and block-MAP decoding of binary linear codes over the erasure
//! channel, with the exhaustive pattern oracle used to pin the linear-algebra
//! fast path.
//!
//! An erased bit is recoverable exactly when its generator column lies in the
//! span of the unerased columns; the decoders run one elimination per
//! received word and reuse it across all coordinates.

use crate::gf2::{BitVector, GF2Matrix};
use crate::{Error, Result};

/// Cap on `2^K` for the exhaustive codeword-support oracle.
const EXHAUSTIVE_SUPPORT_CAP: u32 = 20;

/// A binary linear code given by a full-row-rank generator.
#[derive(Clone, Debug)]
pub struct BinaryLinearCode {
    generator: GF2Matrix,
}

impl BinaryLinearCode {
    pub fn new(generator: GF2Matrix) -> Result<Self> {
        if generator.rows() == 0 || generator.cols() == 0 {
            return Err(Error::InvalidParameter("empty generator".into()));
        }
        if generator.rank() != generator.rows() {
            return Err(Error::InvalidParameter(
                "generator must have full row rank".into(),
            ));
        }
        Ok(BinaryLinearCode { generator })
    }

    pub fn generator(&self) -> &GF2Matrix {
        &self.generator
    }

    pub fn block_length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        crate::gf2::mat_vec_mul(&self.generator, message)
    }

    /// Exhaustive minimum distance; needs `2^K` within the oracle cap.
    pub fn min_distance_exhaustive(&self) -> Result<usize> {
        let k = self.dimension();
        if k as u32 > EXHAUSTIVE_SUPPORT_CAP {
            return Err(Error::ResourceLimit(format!(
                "exhaustive enumeration capped at 2^{EXHAUSTIVE_SUPPORT_CAP} codewords"
            )));
        }
        let mut best = self.block_length();
        for msg in 1u64..1 << k {
            let m = BitVector::from_bits((0..k).map(|i| (msg >> i & 1) as u8));
            best = best.min(self.encode(&m)?.weight());
        }
        Ok(best)
    }
}

/// A subset of coordinate indices marking erased positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasurePattern {
    erased: Vec<usize>,
}

impl ErasurePattern {
    /// Sorted, deduplicated pattern.
    pub fn new(mut erased: Vec<usize>) -> Self {
        erased.sort_unstable();
        erased.dedup();
        ErasurePattern { erased }
    }

    pub fn empty() -> Self {
        ErasurePattern { erased: Vec::new() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.erased
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.erased.binary_search(&i).is_ok()
    }
}

/// One received symbol: a bit or an erasure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RxSymbol {
    Zero,
    One,
    Erased,
}

impl RxSymbol {
    pub fn from_bit(b: bool) -> Self {
        if b {
            RxSymbol::One
        } else {
            RxSymbol::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            RxSymbol::Zero => Some(false),
            RxSymbol::One => Some(true),
            RxSymbol::Erased => None,
        }
    }
}

/// A length-`N` erasure-channel output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedWord {
    symbols: Vec<RxSymbol>,
}

impl ReceivedWord {
    pub fn new(symbols: Vec<RxSymbol>) -> Self {
        ReceivedWord { symbols }
    }

    /// Erases the given pattern out of a codeword.
    pub fn from_codeword(codeword: &BitVector, pattern: &ErasurePattern) -> Self {
        let symbols = (0..codeword.len())
            .map(|i| {
                if pattern.contains(i) {
                    RxSymbol::Erased
                } else {
                    RxSymbol::from_bit(codeword.get(i))
                }
            })
            .collect();
        ReceivedWord { symbols }
    }

    pub fn symbols(&self) -> &[RxSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Result of block-MAP decoding: the unique consistent codeword or an
/// erasure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockMapResult {
    Codeword(BitVector),
    Erased,
}

/// Columns of the generator packed as `K`-bit words.
pub(crate) fn generator_columns(code: &BinaryLinearCode) -> Vec<Vec<u64>> {
    let k = code.dimension();
    let words = k.div_ceil(64);
    let mut cols = vec![vec![0u64; words]; code.block_length()];
    for r in 0..k {
        for (c, col) in cols.iter_mut().enumerate() {
            if code.generator().get(r, c) {
                col[r / 64] |= 1u64 << (r % 64);
            }
        }
    }
    cols
}

/// Incremental reduced basis over packed columns, with optional tracking of
/// the right-hand-side bit attached to each constraint. Rows live in one
/// flat buffer and a reusable scratch word vector keeps the hot paths
/// allocation-free.
pub(crate) struct SpanBasis {
    words: usize,
    data: Vec<u64>,
    pivots: Vec<usize>,
    values: Vec<bool>,
    scratch: Vec<u64>,
}

#[inline]
fn word_get(v: &[u64], bit: usize) -> bool {
    v[bit / 64] >> (bit % 64) & 1 == 1
}

fn highest_bit(v: &[u64]) -> Option<usize> {
    for (w, word) in v.iter().enumerate().rev() {
        if *word != 0 {
            return Some(w * 64 + 63 - word.leading_zeros() as usize);
        }
    }
    None
}

impl SpanBasis {
    pub(crate) fn new() -> Self {
        SpanBasis {
            words: 0,
            data: Vec::new(),
            pivots: Vec::new(),
            values: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub(crate) fn clear(&mut self) {
        self.data.clear();
        self.pivots.clear();
        self.values.clear();
    }

    #[inline]
    fn row(&self, idx: usize) -> &[u64] {
        &self.data[idx * self.words..(idx + 1) * self.words]
    }

    /// Reduces `col` into the scratch buffer; returns the accumulated value.
    fn reduce_into_scratch(&mut self, col: &[u64]) -> bool {
        self.words = col.len();
        self.scratch.clear();
        self.scratch.extend_from_slice(col);
        let mut value = false;
        for idx in 0..self.pivots.len() {
            if word_get(&self.scratch, self.pivots[idx]) {
                let base = idx * self.words;
                for w in 0..self.words {
                    self.scratch[w] ^= self.data[base + w];
                }
                value ^= self.values[idx];
            }
        }
        value
    }

    /// Inserts the constraint `m . col = value`; reports whether it
    /// contradicts the constraints already present.
    pub(crate) fn insert(&mut self, col: &[u64], value: bool) -> Result<()> {
        let value = value ^ self.reduce_into_scratch(col);
        match highest_bit(&self.scratch) {
            None => {
                if value {
                    Err(Error::InconsistentReceived(
                        "unerased symbols contradict the code".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            Some(pivot) => {
                // Keep the basis mutually reduced so one pass suffices.
                for idx in 0..self.pivots.len() {
                    if word_get(self.row(idx), pivot) {
                        let base = idx * self.words;
                        for w in 0..self.words {
                            self.data[base + w] ^= self.scratch[w];
                        }
                        self.values[idx] ^= value;
                    }
                }
                self.pivots.push(pivot);
                let words = self.words;
                self.data.extend_from_slice(&self.scratch[..words]);
                self.values.push(value);
                Ok(())
            }
        }
    }

    /// If `col` lies in the span of inserted constraints, returns the
    /// determined value of `m . col`; otherwise `None`.
    pub(crate) fn resolve(&mut self, col: &[u64]) -> Option<bool> {
        let value = self.reduce_into_scratch(col);
        if highest_bit(&self.scratch).is_none() {
            Some(value)
        } else {
            None
        }
    }

    pub(crate) fn contains(&mut self, col: &[u64]) -> bool {
        self.resolve(col).is_some()
    }
}

/// Bit-MAP erasure decoding: each erased position is filled in when every
/// codeword consistent with the unerased symbols agrees on it, and left `*`
/// otherwise. Unerased positions echo their received value.
///
/// An inconsistent received word signals a caller bug, because the erasure
/// channel never flips bits, and is reported as an error.
pub fn bit_map_decode(code: &BinaryLinearCode, received: &ReceivedWord) -> Result<Vec<RxSymbol>> {
    if received.len() != code.block_length() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} vs block length {}",
            received.len(),
            code.block_length()
        )));
    }
    let columns = generator_columns(code);
    let mut basis = SpanBasis::new();
    for (i, sym) in received.symbols().iter().enumerate() {
        if let Some(bit) = sym.bit() {
            basis.insert(&columns[i], bit)?;
        }
    }
    Ok(received
        .symbols()
        .iter()
        .enumerate()
        .map(|(i, sym)| match sym {
            RxSymbol::Erased => match basis.resolve(&columns[i]) {
                Some(bit) => RxSymbol::from_bit(bit),
                None => RxSymbol::Erased,
            },
            known => *known,
        })
        .collect())
}

/// Block-MAP erasure decoding: the unique consistent codeword when one
/// exists, an erasure otherwise.
pub fn block_map_decode(code: &BinaryLinearCode, received: &ReceivedWord) -> Result<BlockMapResult> {
    let bits = bit_map_decode(code, received)?;
    let mut word = BitVector::zeros(bits.len());
    for (i, sym) in bits.iter().enumerate() {
        match sym.bit() {
            Some(b) => word.set(i, b),
            None => return Ok(BlockMapResult::Erased),
        }
    }
    Ok(BlockMapResult::Codeword(word))
}

fn check_omega_inputs(code: &BinaryLinearCode, i: usize, pattern: &ErasurePattern) -> Result<()> {
    let n = code.block_length();
    if i >= n {
        return Err(Error::InvalidParameter(format!(
            "bit index {i} outside 0..{n}"
        )));
    }
    if pattern.contains(i) {
        return Err(Error::InvalidParameter(format!(
            "pattern must exclude bit {i}"
        )));
    }
    if pattern.indices().iter().any(|&j| j >= n) {
        return Err(Error::InvalidParameter(
            "pattern index outside the block".into(),
        ));
    }
    Ok(())
}

/// Membership of `pattern` in the bad-pattern set of bit `i`, decided by
/// linear algebra: bit `i` is not recoverable when the erased set is
/// `pattern + {i}`.
pub fn omega_membership(
    code: &BinaryLinearCode,
    i: usize,
    pattern: &ErasurePattern,
) -> Result<bool> {
    check_omega_inputs(code, i, pattern)?;
    let columns = generator_columns(code);
    let mut basis = SpanBasis::new();
    for (j, col) in columns.iter().enumerate() {
        if j != i && !pattern.contains(j) {
            basis.insert(col, false)?;
        }
    }
    Ok(!basis.contains(&columns[i]))
}

/// Membership decided by the definition: some nonzero codeword's support is
/// contained in `pattern + {i}` and includes `i`. Exhaustive over `2^K`
/// codewords.
pub fn omega_membership_exhaustive(
    code: &BinaryLinearCode,
    i: usize,
    pattern: &ErasurePattern,
) -> Result<bool> {
    check_omega_inputs(code, i, pattern)?;
    let k = code.dimension();
    if k as u32 > EXHAUSTIVE_SUPPORT_CAP {
        return Err(Error::ResourceLimit(format!(
            "exhaustive membership capped at 2^{EXHAUSTIVE_SUPPORT_CAP} codewords; \
             use the linear-algebra variant"
        )));
    }
    let mut allowed = BitVector::zeros(code.block_length());
    allowed.set(i, true);
    for &j in pattern.indices() {
        allowed.set(j, true);
    }
    for msg in 1u64..1 << k {
        let m = BitVector::from_bits((0..k).map(|b| (msg >> b & 1) as u8));
        let codeword = code.encode(&m)?;
        if codeword.get(i) && codeword.is_subset_of(&allowed) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spc() -> BinaryLinearCode {
        BinaryLinearCode::new(
            GF2Matrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
        )
        .unwrap()
    }

    fn repetition(n: usize) -> BinaryLinearCode {
        BinaryLinearCode::new(GF2Matrix::from_rows(&[vec![1; n]]).unwrap()).unwrap()
    }

    fn rx(symbols: &[i8]) -> ReceivedWord {
        ReceivedWord::new(
            symbols
                .iter()
                .map(|&s| match s {
                    0 => RxSymbol::Zero,
                    1 => RxSymbol::One,
                    _ => RxSymbol::Erased,
                })
                .collect(),
        )
    }

    #[test]
    fn full_rank_enforced() {
        let dependent = GF2Matrix::from_rows(&[vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
        assert!(BinaryLinearCode::new(dependent).is_err());
    }

    #[test]
    fn bit_map_fills_parity() {
        let decoded = bit_map_decode(&spc(), &rx(&[1, 0, -1])).unwrap();
        assert_eq!(decoded, vec![RxSymbol::One, RxSymbol::Zero, RxSymbol::One]);
    }

    #[test]
    fn bit_map_leaves_ambiguity() {
        let decoded = bit_map_decode(&spc(), &rx(&[1, -1, -1])).unwrap();
        assert_eq!(
            decoded,
            vec![RxSymbol::One, RxSymbol::Erased, RxSymbol::Erased]
        );
    }

    #[test]
    fn bit_map_echoes_unerased() {
        let decoded = bit_map_decode(&spc(), &rx(&[1, 1, 0])).unwrap();
        assert_eq!(decoded, vec![RxSymbol::One, RxSymbol::One, RxSymbol::Zero]);
    }

    #[test]
    fn inconsistent_word_is_an_error() {
        // (1, 1, 1) is not a single-parity-check codeword.
        assert!(matches!(
            bit_map_decode(&spc(), &rx(&[1, 1, 1])),
            Err(Error::InconsistentReceived(_))
        ));
    }

    #[test]
    fn block_map_examples() {
        let rep = repetition(3);
        assert_eq!(
            block_map_decode(&rep, &rx(&[-1, -1, 1])).unwrap(),
            BlockMapResult::Codeword(BitVector::from_bits([1, 1, 1]))
        );
        assert_eq!(
            block_map_decode(&rep, &rx(&[-1, -1, -1])).unwrap(),
            BlockMapResult::Erased
        );
        assert_eq!(
            block_map_decode(&spc(), &rx(&[1, 1, 0])).unwrap(),
            BlockMapResult::Codeword(BitVector::from_bits([1, 1, 0]))
        );
    }

    #[test]
    fn omega_membership_repetition() {
        let rep = repetition(3);
        assert!(omega_membership(&rep, 0, &ErasurePattern::new(vec![1, 2])).unwrap());
        assert!(!omega_membership(&rep, 0, &ErasurePattern::new(vec![1])).unwrap());
        assert!(
            omega_membership_exhaustive(&rep, 0, &ErasurePattern::new(vec![1, 2])).unwrap()
        );
    }

    #[test]
    fn omega_membership_spc() {
        // Codeword supports are {0,2}, {1,2}, {0,1}: every nonempty pattern
        // over the other two coordinates contains one of bit 0's partners.
        let code = spc();
        assert!(!omega_membership(&code, 0, &ErasurePattern::empty()).unwrap());
        assert!(omega_membership(&code, 0, &ErasurePattern::new(vec![1])).unwrap());
        assert!(omega_membership(&code, 0, &ErasurePattern::new(vec![2])).unwrap());
        assert!(omega_membership(&code, 0, &ErasurePattern::new(vec![1, 2])).unwrap());
    }

    #[test]
    fn empty_pattern_safe_when_distance_at_least_two() {
        for code in [repetition(3), spc()] {
            for i in 0..code.block_length() {
                assert!(!omega_membership(&code, i, &ErasurePattern::empty()).unwrap());
                assert!(!omega_membership_exhaustive(&code, i, &ErasurePattern::empty()).unwrap());
            }
        }
    }

    #[test]
    fn omega_rejects_bad_inputs() {
        let code = spc();
        assert!(omega_membership(&code, 0, &ErasurePattern::new(vec![0])).is_err());
        assert!(omega_membership(&code, 5, &ErasurePattern::empty()).is_err());
    }

    #[test]
    fn oracle_chain_small_codes() {
        // Exhaustive-support membership, linear-algebra membership, and the
        // bit-MAP erasure indicator agree on every pattern.
        let codes = [repetition(3), spc(), repetition(5)];
        for code in &codes {
            let n = code.block_length();
            let zero = BitVector::zeros(code.dimension());
            let zero_word = code.encode(&zero).unwrap();
            for i in 0..n {
                let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                for mask in 0u32..1 << (n - 1) {
                    let pattern = ErasurePattern::new(
                        others
                            .iter()
                            .enumerate()
                            .filter(|(slot, _)| mask >> slot & 1 == 1)
                            .map(|(_, &j)| j)
                            .collect(),
                    );
                    let by_support = omega_membership_exhaustive(code, i, &pattern).unwrap();
                    let by_algebra = omega_membership(code, i, &pattern).unwrap();
                    let mut erased = pattern.indices().to_vec();
                    erased.push(i);
                    let word =
                        ReceivedWord::from_codeword(&zero_word, &ErasurePattern::new(erased));
                    let by_decoder =
                        bit_map_decode(code, &word).unwrap()[i] == RxSymbol::Erased;
                    assert_eq!(by_support, by_algebra);
                    assert_eq!(by_algebra, by_decoder);
                }
            }
        }
    }

    #[test]
    fn bad_pattern_sets_are_monotone() {
        // Adding erasures never makes a bad pattern good; exhaustive over
        // every pattern and every single-coordinate extension.
        let mut rng = crate::cli::SplitMix64::new(404);
        let mut random83 = GF2Matrix::zeros(3, 8);
        loop {
            for r in 0..3 {
                for c in 0..8 {
                    random83.set(r, c, rng.next_bit());
                }
            }
            if random83.rank() == 3 {
                break;
            }
        }
        let codes = [
            repetition(3),
            spc(),
            repetition(5),
            BinaryLinearCode::new(random83).unwrap(),
        ];
        for code in &codes {
            let n = code.block_length();
            for i in 0..n {
                let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                for mask in 0u32..1 << (n - 1) {
                    let pattern: Vec<usize> = others
                        .iter()
                        .enumerate()
                        .filter(|(slot, _)| mask >> slot & 1 == 1)
                        .map(|(_, &j)| j)
                        .collect();
                    if !omega_membership(code, i, &ErasurePattern::new(pattern.clone())).unwrap()
                    {
                        continue;
                    }
                    for &extra in &others {
                        let mut bigger = pattern.clone();
                        bigger.push(extra);
                        assert!(
                            omega_membership(code, i, &ErasurePattern::new(bigger)).unwrap(),
                            "monotonicity violated at bit {i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn block_bit_consistency() {
        let code = spc();
        let mut rng = crate::cli::SplitMix64::new(31);
        for _ in 0..200 {
            let msg = BitVector::from_bits((0..2).map(|_| rng.next_bit() as u8));
            let codeword = code.encode(&msg).unwrap();
            let pattern = ErasurePattern::new(
                (0..3).filter(|_| rng.next_f64() < 0.5).collect(),
            );
            let word = ReceivedWord::from_codeword(&codeword, &pattern);
            let bits = bit_map_decode(&code, &word).unwrap();
            let block = block_map_decode(&code, &word).unwrap();
            let all_resolved = bits.iter().all(|s| s.bit().is_some());
            match block {
                BlockMapResult::Codeword(w) => {
                    assert!(all_resolved);
                    assert_eq!(w, codeword);
                }
                BlockMapResult::Erased => assert!(!all_resolved),
            }
        }
    }
}
