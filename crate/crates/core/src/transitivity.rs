//! Coordinate permutations, automorphism checks, and constructive
//! 1-/2-transitivity witnesses for the code families in the laboratory.
//!
//! A permutation `π` is an automorphism of a code when relabeling every
//! codeword's coordinates by `π` lands back in the code; equivalently, the
//! column-permuted generator spans the same row space. Witnesses for
//! Reed-Muller codes come from the affine group of the evaluation domain and
//! are verified, never assumed; exhaustive search provides ground truth at
//! small block lengths.

use crate::field::RsCode;
use crate::gf2::{mat_mul, row_space_equal, BitVector, GF2Matrix};
use crate::map_erasure::BinaryLinearCode;
use crate::{Error, Result};

/// Block-length cap for exhaustive permutation search.
pub const EXHAUSTIVE_SEARCH_MAX_BLOCK: usize = 8;

/// A bijection on coordinate indices `0..N`; the permuted word takes value
/// `y[π(j)]` at position `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinatePermutation {
    mapping: Vec<usize>,
}

impl CoordinatePermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n || seen[v] {
                return Err(Error::InvalidParameter(
                    "mapping is not a bijection on 0..N".into(),
                ));
            }
            seen[v] = true;
        }
        Ok(CoordinatePermutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        CoordinatePermutation {
            mapping: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }

    #[inline]
    pub fn apply(&self, j: usize) -> usize {
        self.mapping[j]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// `self` after `other`: `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &CoordinatePermutation) -> Result<CoordinatePermutation> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(
                "composing permutations of different sizes".into(),
            ));
        }
        Ok(CoordinatePermutation {
            mapping: (0..self.len()).map(|j| self.apply(other.apply(j))).collect(),
        })
    }

    pub fn inverse(&self) -> CoordinatePermutation {
        let mut mapping = vec![0; self.len()];
        for (j, &v) in self.mapping.iter().enumerate() {
            mapping[v] = j;
        }
        CoordinatePermutation { mapping }
    }

    /// Relabels a word: output position `j` holds `word[π(j)]`.
    pub fn permute_word(&self, word: &BitVector) -> Result<BitVector> {
        if word.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "word length {} vs permutation on {}",
                word.len(),
                self.len()
            )));
        }
        let mut out = BitVector::zeros(word.len());
        for j in 0..word.len() {
            out.set(j, word.get(self.apply(j)));
        }
        Ok(out)
    }

    /// Cycle notation with 1-based indices, fixed points omitted; the
    /// identity prints as `()`.
    pub fn to_cycle_notation(&self) -> String {
        let mut seen = vec![false; self.len()];
        let mut out = String::new();
        for start in 0..self.len() {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut j = start;
            loop {
                seen[j] = true;
                out.push_str(&(j + 1).to_string());
                j = self.apply(j);
                if j == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4)`; indices may be
    /// separated by spaces or commas. `n` is the block length.
    pub fn from_cycle_notation(text: &str, n: usize) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..n).collect();
        let body = text.trim();
        if body.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let mut rest = body;
        while !rest.is_empty() {
            let Some(open) = rest.find('(') else {
                if rest.trim().is_empty() {
                    break;
                }
                return Err(Error::Parse(format!("expected '(' in {rest:?}")));
            };
            let Some(close) = rest[open..].find(')') else {
                return Err(Error::Parse("unclosed cycle".into()));
            };
            let inner = &rest[open + 1..open + close];
            rest = &rest[open + close + 1..];
            let indices: Vec<usize> = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad index {s:?}")))
                })
                .collect::<Result<_>>()?;
            for &i in &indices {
                if i == 0 || i > n {
                    return Err(Error::Parse(format!("index {i} outside 1..={n}")));
                }
            }
            for w in 0..indices.len() {
                let from = indices[w] - 1;
                let to = indices[(w + 1) % indices.len()] - 1;
                mapping[from] = to;
            }
        }
        CoordinatePermutation::new(mapping)
    }
}

/// True iff relabeling coordinates by `perm` preserves the code: the
/// column-permuted generator spans the same row space.
pub fn is_automorphism(code: &BinaryLinearCode, perm: &CoordinatePermutation) -> Result<bool> {
    let g = code.generator();
    if perm.len() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "permutation on {} vs block length {}",
            perm.len(),
            g.cols()
        )));
    }
    let mut permuted = GF2Matrix::zeros(g.rows(), g.cols());
    for r in 0..g.rows() {
        for j in 0..g.cols() {
            if g.get(r, perm.apply(j)) {
                permuted.set(r, j, true);
            }
        }
    }
    row_space_equal(g, &permuted)
}

/// An invertible affine map `x -> x A + c` on `F_2^m` (row-vector
/// convention); it induces a coordinate permutation of the Reed-Muller
/// evaluation order.
#[derive(Clone, Debug)]
pub struct AffineMap {
    m: u32,
    linear: GF2Matrix,
    shift: BitVector,
}

impl AffineMap {
    pub fn new(m: u32, linear: GF2Matrix, shift: BitVector) -> Result<Self> {
        let dim = m as usize;
        if linear.rows() != dim || linear.cols() != dim || shift.len() != dim {
            return Err(Error::DimensionMismatch("affine map shapes".into()));
        }
        if linear.rank() != dim {
            return Err(Error::InvalidParameter(
                "linear part must be invertible".into(),
            ));
        }
        Ok(AffineMap { m, linear, shift })
    }

    pub fn apply(&self, point: &BitVector) -> Result<BitVector> {
        let mut image = crate::gf2::mat_vec_mul(&self.linear, point)?;
        image.xor_assign(&self.shift);
        Ok(image)
    }

    /// The induced permutation of evaluation-order indices:
    /// `π(j) = index(apply(point(j)))`.
    pub fn coordinate_permutation(&self) -> Result<CoordinatePermutation> {
        let m = self.m as usize;
        let block = 1usize << m;
        let mut mapping = vec![0usize; block];
        for (j, slot) in mapping.iter_mut().enumerate() {
            let image = self.apply(&point_bits(j, m))?;
            *slot = point_index(&image);
        }
        CoordinatePermutation::new(mapping)
    }
}

/// The `j`-th point of `F_2^m` in counting order: the first variable is the
/// most significant bit of `j`.
fn point_bits(j: usize, m: usize) -> BitVector {
    BitVector::from_bits((0..m).map(|v| (j >> (m - 1 - v) & 1) as u8))
}

fn point_index(point: &BitVector) -> usize {
    (0..point.len()).fold(0, |acc, v| acc << 1 | usize::from(point.get(v)))
}

/// Completes the nonzero vector `first` to an invertible matrix whose first
/// row is `first`, greedily appending standard basis vectors in index order.
fn complete_basis(first: &BitVector) -> GF2Matrix {
    let m = first.len();
    let mut rows: Vec<BitVector> = vec![first.clone()];
    for v in 0..m {
        if rows.len() == m {
            break;
        }
        let mut candidate = BitVector::zeros(m);
        candidate.set(v, true);
        let mut trial = GF2Matrix::zeros(rows.len() + 1, m);
        for (r, row) in rows.iter().enumerate() {
            trial.set_row(r, row);
        }
        trial.set_row(rows.len(), &candidate);
        if trial.rank() == rows.len() + 1 {
            rows.push(candidate);
        }
    }
    let mut out = GF2Matrix::zeros(m, m);
    for (r, row) in rows.iter().enumerate() {
        out.set_row(r, row);
    }
    out
}

/// Inverse of an invertible square matrix over GF(2).
fn invert_matrix(m: &GF2Matrix) -> Result<GF2Matrix> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch("inverting a non-square matrix".into()));
    }
    // Augmented elimination [M | I].
    let mut aug = GF2Matrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            if m.get(r, c) {
                aug.set(r, c, true);
            }
        }
        aug.set(r, n + r, true);
    }
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| aug.get(r, col)) else {
            return Err(Error::InvalidParameter("matrix is singular".into()));
        };
        if pivot != col {
            let (a, b) = (aug.row(pivot), aug.row(col));
            aug.set_row(col, &a);
            aug.set_row(pivot, &b);
        }
        for r in 0..n {
            if r != col && aug.get(r, col) {
                let mut sum = aug.row(r);
                sum.xor_assign(&aug.row(col));
                aug.set_row(r, &sum);
            }
        }
    }
    let mut inv = GF2Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            if aug.get(r, n + c) {
                inv.set(r, c, true);
            }
        }
    }
    Ok(inv)
}

/// Constructs the affine permutation of `F_2^m` sending evaluation point
/// `j1 -> j3` and `j2 -> j4` (0-based indices): the shift aligns `j1` with
/// `j3` and the linear part extends `point(j2) - point(j1) ->
/// point(j4) - point(j3)` to an invertible map by deterministic basis
/// completion. The result is an automorphism of every `RM(2, m, r)`.
pub fn rm_affine_witness(
    m: u32,
    (j1, j2): (usize, usize),
    (j3, j4): (usize, usize),
) -> Result<CoordinatePermutation> {
    let block = 1usize << m;
    for &j in &[j1, j2, j3, j4] {
        if j >= block {
            return Err(Error::InvalidParameter(format!(
                "point index {j} outside 0..{block}"
            )));
        }
    }
    if j1 == j2 || j3 == j4 {
        return Err(Error::InvalidParameter(
            "pinned pairs must consist of distinct points".into(),
        ));
    }
    let dim = m as usize;
    let p1 = point_bits(j1, dim);
    let p2 = point_bits(j2, dim);
    let p3 = point_bits(j3, dim);
    let p4 = point_bits(j4, dim);
    let mut d1 = p2.clone();
    d1.xor_assign(&p1);
    let mut d2 = p4.clone();
    d2.xor_assign(&p3);
    let basis_from = complete_basis(&d1);
    let basis_to = complete_basis(&d2);
    let linear = mat_mul(&invert_matrix(&basis_from)?, &basis_to)?;
    let mut shift = crate::gf2::mat_vec_mul(&linear, &p1)?;
    shift.xor_assign(&p3);
    let map = AffineMap::new(m, linear, shift)?;
    let perm = map.coordinate_permutation()?;
    debug_assert_eq!(perm.apply(j1), j3);
    debug_assert_eq!(perm.apply(j2), j4);
    Ok(perm)
}

/// Result of searching for a pinned automorphism.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(CoordinatePermutation),
    /// Exhaustive search proved no witness exists.
    NoneExhaustive,
    /// Randomized search ran out of budget without a witness.
    Inconclusive,
}

/// Searches for an automorphism with `π(j1) = j3` and `π(j2) = j4`:
/// exhaustive (definitive) for block lengths up to
/// [`EXHAUSTIVE_SEARCH_MAX_BLOCK`], randomized within `budget` attempts
/// beyond that.
pub fn two_transitive_search(
    code: &BinaryLinearCode,
    (j1, j2): (usize, usize),
    (j3, j4): (usize, usize),
    budget: u64,
) -> Result<SearchOutcome> {
    let n = code.block_length();
    for &j in &[j1, j2, j3, j4] {
        if j >= n {
            return Err(Error::InvalidParameter(format!(
                "coordinate {j} outside 0..{n}"
            )));
        }
    }
    if j1 == j2 || j3 == j4 {
        return Err(Error::InvalidParameter(
            "pinned pairs must consist of distinct coordinates".into(),
        ));
    }
    // Positions other than j1, j2 map onto values other than j3, j4.
    let free_slots: Vec<usize> = (0..n).filter(|&j| j != j1 && j != j2).collect();
    let free_values: Vec<usize> = (0..n).filter(|&v| v != j3 && v != j4).collect();
    let mut mapping = vec![0usize; n];
    mapping[j1] = j3;
    mapping[j2] = j4;

    if n <= EXHAUSTIVE_SEARCH_MAX_BLOCK {
        let mut values = free_values;
        if let Some(perm) =
            search_assignments(code, &free_slots, &mut values, 0, &mut mapping)?
        {
            return Ok(SearchOutcome::Found(perm));
        }
        return Ok(SearchOutcome::NoneExhaustive);
    }

    let mut rng = crate::cli::seed_stream(0xC0DE5, (j1 ^ j2 << 8 ^ j3 << 16 ^ j4 << 24) as u64);
    let mut values = free_values;
    for _ in 0..budget {
        // Fisher-Yates on the free values.
        for t in (1..values.len()).rev() {
            let s = (rng.next_u64() % (t as u64 + 1)) as usize;
            values.swap(t, s);
        }
        for (slot, &v) in free_slots.iter().zip(&values) {
            mapping[*slot] = v;
        }
        let perm = CoordinatePermutation::new(mapping.clone())?;
        if is_automorphism(code, &perm)? {
            return Ok(SearchOutcome::Found(perm));
        }
    }
    Ok(SearchOutcome::Inconclusive)
}

fn search_assignments(
    code: &BinaryLinearCode,
    slots: &[usize],
    values: &mut Vec<usize>,
    depth: usize,
    mapping: &mut Vec<usize>,
) -> Result<Option<CoordinatePermutation>> {
    if depth == slots.len() {
        let perm = CoordinatePermutation::new(mapping.clone())?;
        if is_automorphism(code, &perm)? {
            return Ok(Some(perm));
        }
        return Ok(None);
    }
    for t in depth..values.len() {
        values.swap(depth, t);
        mapping[slots[depth]] = values[depth];
        if let Some(found) = search_assignments(code, slots, values, depth + 1, mapping)? {
            return Ok(Some(found));
        }
        values.swap(depth, t);
    }
    Ok(None)
}

/// The coordinate permutation of a full-support Reed-Solomon code induced by
/// the affine point map `x -> a x + b`, `a != 0`: position `j` of the
/// permuted word holds the evaluation at `a alpha_j + b`.
pub fn rs_affine_coordinate_permutation(
    code: &RsCode,
    a: u64,
    b: u64,
) -> Result<CoordinatePermutation> {
    let field = code.field();
    if a.is_multiple_of(field.modulus()) {
        return Err(Error::InvalidParameter(
            "affine point maps need a != 0".into(),
        ));
    }
    let position_of: std::collections::HashMap<u64, usize> = code
        .points()
        .iter()
        .enumerate()
        .map(|(idx, &alpha)| (alpha, idx))
        .collect();
    let mapping = code
        .points()
        .iter()
        .map(|&alpha| {
            let image = field.add(field.mul(a, alpha), b);
            position_of.get(&image).copied().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "image point {image} is not an evaluation point; \
                     the point set is not affine-closed"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CoordinatePermutation::new(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rm_generator, rs_encode, RmCode};
    use crate::field::PrimeField;

    fn rm_code(m: u32, r: u32) -> BinaryLinearCode {
        BinaryLinearCode::new(rm_generator(&RmCode::new(2, m, r).unwrap()).unwrap()).unwrap()
    }

    fn spc3() -> BinaryLinearCode {
        BinaryLinearCode::new(
            GF2Matrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_always_an_automorphism() {
        for code in [spc3(), rm_code(3, 1)] {
            let id = CoordinatePermutation::identity(code.block_length());
            assert!(is_automorphism(&code, &id).unwrap());
        }
    }

    #[test]
    fn variable_swap_preserves_rm() {
        // Swapping X1 and X2 permutes the four points as (01 10).
        let perm = CoordinatePermutation::new(vec![0, 2, 1, 3]).unwrap();
        assert!(is_automorphism(&rm_code(2, 1), &perm).unwrap());
    }

    #[test]
    fn transposition_examples() {
        let swap = CoordinatePermutation::from_cycle_notation("(1 2)", 3).unwrap();
        assert!(is_automorphism(&spc3(), &swap).unwrap());
        let line = BinaryLinearCode::new(GF2Matrix::from_rows(&[vec![1, 0]]).unwrap()).unwrap();
        let swap2 = CoordinatePermutation::from_cycle_notation("(1 2)", 2).unwrap();
        assert!(!is_automorphism(&line, &swap2).unwrap());
    }

    #[test]
    fn cycle_notation_round_trip() {
        let perm = CoordinatePermutation::new(vec![1, 0, 3, 2, 4]).unwrap();
        let text = perm.to_cycle_notation();
        assert_eq!(text, "(1 2)(3 4)");
        assert_eq!(
            CoordinatePermutation::from_cycle_notation(&text, 5).unwrap(),
            perm
        );
        assert_eq!(
            CoordinatePermutation::identity(3).to_cycle_notation(),
            "()"
        );
    }

    #[test]
    fn affine_witness_identity_case() {
        let perm = rm_affine_witness(2, (0, 1), (0, 1)).unwrap();
        assert!(perm.is_identity());
    }

    #[test]
    fn affine_witness_pure_shift() {
        // Points 00,01 -> 11,10: both pairs differ by 01, so the linear part
        // is the identity and the shift is 11.
        let perm = rm_affine_witness(2, (0, 1), (3, 2)).unwrap();
        assert_eq!(perm.mapping(), &[3, 2, 1, 0]);
        assert_eq!(perm.to_cycle_notation(), "(1 4)(2 3)");
    }

    #[test]
    fn affine_witness_property_sweep() {
        let codes = [rm_code(3, 1), rm_code(3, 2)];
        let mut rng = crate::cli::SplitMix64::new(101);
        for _ in 0..100 {
            let j1 = (rng.next_u64() % 8) as usize;
            let j2 = loop {
                let c = (rng.next_u64() % 8) as usize;
                if c != j1 {
                    break c;
                }
            };
            let j3 = (rng.next_u64() % 8) as usize;
            let j4 = loop {
                let c = (rng.next_u64() % 8) as usize;
                if c != j3 {
                    break c;
                }
            };
            let perm = rm_affine_witness(3, (j1, j2), (j3, j4)).unwrap();
            assert_eq!(perm.apply(j1), j3);
            assert_eq!(perm.apply(j2), j4);
            for code in &codes {
                assert!(is_automorphism(code, &perm).unwrap());
            }
        }
    }

    #[test]
    fn exhaustive_search_agrees_with_affine_witness() {
        let code = rm_code(3, 1);
        match two_transitive_search(&code, (0, 1), (2, 5), 0).unwrap() {
            SearchOutcome::Found(perm) => {
                assert_eq!(perm.apply(0), 2);
                assert_eq!(perm.apply(1), 5);
                assert!(is_automorphism(&code, &perm).unwrap());
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_search_proves_absence() {
        // The only nonzero codeword is 100...; nothing can move coordinate 1.
        let code =
            BinaryLinearCode::new(GF2Matrix::from_rows(&[vec![1, 0, 0]]).unwrap()).unwrap();
        assert!(matches!(
            two_transitive_search(&code, (0, 1), (1, 2), 0).unwrap(),
            SearchOutcome::NoneExhaustive
        ));
    }

    #[test]
    fn search_returns_identity_when_pins_allow_it() {
        let code = spc3();
        match two_transitive_search(&code, (0, 1), (0, 1), 0).unwrap() {
            SearchOutcome::Found(perm) => assert!(perm.is_identity()),
            other => panic!("expected identity, got {other:?}"),
        }
    }

    #[test]
    fn rs_affine_permutations_preserve_codewords() {
        // Over GF(5) with all five evaluation points, each permuted codeword
        // is re-encodable.
        let field = PrimeField::new(5).unwrap();
        let code = RsCode::with_consecutive_points(field, 5, 2).unwrap();
        for a in 1..5u64 {
            for b in 0..5u64 {
                let perm = rs_affine_coordinate_permutation(&code, a, b).unwrap();
                for m0 in 0..5u64 {
                    for m1 in 0..5u64 {
                        let word = rs_encode(&code, &[m0, m1]).unwrap();
                        let permuted: Vec<u64> =
                            (0..5).map(|j| word[perm.apply(j)]).collect();
                        // Degree-<2 interpolation through the first two
                        // points must match everywhere.
                        let interp = crate::field::Polynomial::interpolate(
                            field,
                            &[(0, permuted[0]), (1, permuted[1])],
                        )
                        .unwrap();
                        for (alpha, &value) in code.points().iter().zip(&permuted) {
                            assert_eq!(interp.eval(*alpha), value);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn omega_transfer_through_witnesses() {
        // For a 2-transitive code, witnesses carry bad patterns of bit i to
        // bad patterns of bit π⁻¹(i)… checked in the forward direction for
        // every pattern at block length 8.
        use crate::map_erasure::{omega_membership, ErasurePattern};
        let code = rm_code(3, 1);
        let witnesses = [
            rm_affine_witness(3, (0, 1), (3, 6)).unwrap(),
            rm_affine_witness(3, (2, 5), (7, 1)).unwrap(),
        ];
        for perm in &witnesses {
            assert!(is_automorphism(&code, perm).unwrap());
            let inverse = perm.inverse();
            for i in 0..8 {
                let others: Vec<usize> = (0..8).filter(|&j| j != i).collect();
                for mask in 0u32..1 << 7 {
                    let pattern: Vec<usize> = others
                        .iter()
                        .enumerate()
                        .filter(|(slot, _)| mask >> slot & 1 == 1)
                        .map(|(_, &j)| j)
                        .collect();
                    let member =
                        omega_membership(&code, i, &ErasurePattern::new(pattern.clone()))
                            .unwrap();
                    // Relabeling by the inverse sends coordinate j of the
                    // original to coordinate π⁻¹(j) of the image word.
                    let image_i = inverse.apply(i);
                    let image_pattern: Vec<usize> =
                        pattern.iter().map(|&j| inverse.apply(j)).collect();
                    let image_member = omega_membership(
                        &code,
                        image_i,
                        &ErasurePattern::new(image_pattern),
                    )
                    .unwrap();
                    assert_eq!(member, image_member);
                }
            }
        }
    }
}
