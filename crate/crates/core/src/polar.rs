//! Polar codes: construction, `O(N log N)` encoding, successive-cancellation
//! decoding, and polarization experiments on the binary erasure channel.
//!
//! The combining map sends `u` to `s` with `s_{2i} = u_{2i} ^ u_{2i+1}`,
//! `s_{2i+1} = u_{2i+1}` (0-based), applies the reverse shuffle that collects
//! even positions before odd ones, and recurses on the two halves. The
//! resulting generator equals the bit-reversal permutation composed with the
//! n-fold Kronecker power of `[[1,0],[1,1]]`, which is what the in-place
//! butterfly encoder computes. Decisions are indexed in natural order
//! `0..N`; the decoder bit-reverses the received block so that decision `i`
//! sees the synthesized channel whose minus/plus path is the binary expansion
//! of `i`, most significant bit first. `split_channel_bruteforce` pins this
//! layout exhaustively at `N <= 4`.

use crate::channels::DiscreteMemorylessChannel;
use crate::gf2::{mat_mul, BitVector, GF2Matrix};
use crate::{Error, Result};

/// Depth cap for materialized generator matrices.
pub const MAX_MATRIX_DEPTH: u32 = 20;

/// Depth cap for Bhattacharyya profiles.
pub const MAX_PROFILE_DEPTH: u32 = 25;

/// Tolerance for likelihood ties; a ratio within this slack of 1 decodes to 0.
pub const DECISION_TIE_TOLERANCE: f64 = 1e-12;

/// A `(N, K, A, u_{A^c})` coset code: recursion depth, information set and
/// frozen-bit assignment.
#[derive(Clone, Debug)]
pub struct PolarCode {
    n: u32,
    info_set: Vec<usize>,
    is_info: Vec<bool>,
    frozen_values: BitVector,
}

impl PolarCode {
    /// Code with all-zero frozen bits (the default assignment).
    pub fn new(n: u32, info_set: Vec<usize>) -> Result<Self> {
        let frozen = BitVector::zeros(1usize << n);
        Self::with_frozen_values(n, info_set, frozen)
    }

    /// Code with an explicit frozen-bit assignment; bits at information
    /// positions are ignored and stored as zero.
    pub fn with_frozen_values(n: u32, info_set: Vec<usize>, frozen: BitVector) -> Result<Self> {
        let block = 1usize << n;
        if frozen.len() != block {
            return Err(Error::DimensionMismatch(format!(
                "frozen assignment length {} vs block length {block}",
                frozen.len()
            )));
        }
        let mut is_info = vec![false; block];
        let mut prev = None;
        for &i in &info_set {
            if i >= block {
                return Err(Error::InvalidParameter(format!(
                    "information index {i} outside 0..{block}"
                )));
            }
            if prev.is_some_and(|p| p >= i) {
                return Err(Error::InvalidParameter(
                    "information set must be strictly increasing".into(),
                ));
            }
            prev = Some(i);
            is_info[i] = true;
        }
        let mut frozen_values = frozen;
        for &i in &info_set {
            frozen_values.set(i, false);
        }
        Ok(PolarCode {
            n,
            info_set,
            is_info,
            frozen_values,
        })
    }

    pub fn depth(&self) -> u32 {
        self.n
    }

    pub fn block_length(&self) -> usize {
        1usize << self.n
    }

    pub fn dimension(&self) -> usize {
        self.info_set.len()
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    #[inline]
    pub fn is_frozen(&self, i: usize) -> bool {
        !self.is_info[i]
    }

    #[inline]
    pub fn frozen_bit(&self, i: usize) -> bool {
        self.frozen_values.get(i)
    }

    /// Expands information bits (in information-set order) into a full input
    /// block, filling frozen positions from the stored assignment.
    pub fn assemble_input(&self, info_bits: &BitVector) -> Result<BitVector> {
        if info_bits.len() != self.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "{} information bits vs dimension {}",
                info_bits.len(),
                self.dimension()
            )));
        }
        let mut u = self.frozen_values.clone();
        for (slot, &i) in self.info_set.iter().enumerate() {
            u.set(i, info_bits.get(slot));
        }
        Ok(u)
    }

    /// The rows of the full transform indexed by the information set: the
    /// generator of the code as a plain binary linear code (all-zero frozen
    /// bits assumed).
    pub fn generator_rows(&self) -> GF2Matrix {
        let block = self.block_length();
        let mut g = GF2Matrix::zeros(self.dimension(), block);
        for (r, &i) in self.info_set.iter().enumerate() {
            let mut row = vec![0u8; block];
            row[i] = 1;
            encode_in_place(&mut row);
            for (c, bit) in row.iter().enumerate() {
                if *bit == 1 {
                    g.set(r, c, true);
                }
            }
        }
        g
    }
}

/// Bhattacharyya and capacity values of the `N` synthesized channels, in
/// decision order.
#[derive(Clone, Debug)]
pub struct SynthesizedChannelProfile {
    n: u32,
    z: Vec<f64>,
    i_cap: Vec<f64>,
}

impl SynthesizedChannelProfile {
    pub fn depth(&self) -> u32 {
        self.n
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn capacities(&self) -> &[f64] {
        &self.i_cap
    }
}

/// One received symbol of the binary erasure channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BecSymbol {
    Zero,
    One,
    Erasure,
}

impl BecSymbol {
    pub fn from_bit(b: bool) -> Self {
        if b {
            BecSymbol::One
        } else {
            BecSymbol::Zero
        }
    }

    /// Output index in the three-symbol channel built by
    /// [`crate::channels::ChannelKind::Bec`].
    pub fn output_index(self) -> usize {
        match self {
            BecSymbol::Zero => 0,
            BecSymbol::One => 1,
            BecSymbol::Erasure => 2,
        }
    }
}

#[inline]
fn bit_reverse(value: usize, bits: u32) -> usize {
    if bits == 0 {
        return 0;
    }
    ((value as u64).reverse_bits() >> (64 - bits)) as usize
}

/// In-place polar transform of a 0/1 block whose length is a power of two.
pub(crate) fn encode_in_place(bits: &mut [u8]) {
    let block = bits.len();
    debug_assert!(block.is_power_of_two());
    let n = block.trailing_zeros();
    for j in 0..block {
        let r = bit_reverse(j, n);
        if j < r {
            bits.swap(j, r);
        }
    }
    let mut half = block / 2;
    while half >= 1 {
        let mut start = 0;
        while start < block {
            for j in start..start + half {
                bits[j] ^= bits[j + half];
            }
            start += 2 * half;
        }
        half /= 2;
    }
}

/// Polar encoding `x = u G_N` as an in-place butterfly; no matrix is
/// materialized.
pub fn encode(n: u32, u: &BitVector) -> Result<BitVector> {
    let block = 1usize << n;
    if u.len() != block {
        return Err(Error::DimensionMismatch(format!(
            "input length {} vs block length {block}",
            u.len()
        )));
    }
    let mut bits = u.to_u8_vec();
    encode_in_place(&mut bits);
    Ok(BitVector::from_bits(bits))
}

/// The `N x N` transform built by composing, level by level, the pairwise-XOR
/// map, the reverse shuffle, and two copies of the half-size transform.
///
/// This is a deliberately independent construction from [`encode`]; the two
/// must agree on every input.
pub fn generator_matrix(n: u32) -> Result<GF2Matrix> {
    if n > MAX_MATRIX_DEPTH {
        return Err(Error::ResourceLimit(format!(
            "generator matrices capped at depth {MAX_MATRIX_DEPTH}, got {n}"
        )));
    }
    let mut g = GF2Matrix::identity(1);
    for level in 1..=n {
        let m = 1usize << level;
        let combined = mat_mul(&pairwise_xor_matrix(m), &reverse_shuffle_matrix(m))?;
        g = mat_mul(&combined, &block_diagonal(&g))?;
    }
    Ok(g)
}

/// `s = u S`: `s_{2i} = u_{2i} ^ u_{2i+1}`, `s_{2i+1} = u_{2i+1}`.
fn pairwise_xor_matrix(m: usize) -> GF2Matrix {
    let mut s = GF2Matrix::zeros(m, m);
    for j in 0..m {
        s.set(j, j, true);
    }
    for i in 0..m / 2 {
        s.set(2 * i + 1, 2 * i, true);
    }
    s
}

/// `v = s R`: even-position symbols first, then odd-position symbols.
fn reverse_shuffle_matrix(m: usize) -> GF2Matrix {
    let mut r = GF2Matrix::zeros(m, m);
    for j in 0..m / 2 {
        r.set(2 * j, j, true);
        r.set(2 * j + 1, m / 2 + j, true);
    }
    r
}

fn block_diagonal(g: &GF2Matrix) -> GF2Matrix {
    let m = g.rows();
    let mut d = GF2Matrix::zeros(2 * m, 2 * m);
    for r in 0..m {
        for c in 0..m {
            if g.get(r, c) {
                d.set(r, c, true);
                d.set(m + r, m + c, true);
            }
        }
    }
    d
}

/// Exact Bhattacharyya recursion for `BEC(eps)`: each level maps `z` to
/// `(2z - z^2, z^2)`, children stored at `2i` and `2i+1`.
pub fn bec_profile(eps: f64, n: u32) -> Result<SynthesizedChannelProfile> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "erasure probability {eps} outside [0,1]"
        )));
    }
    if n > MAX_PROFILE_DEPTH {
        return Err(Error::ResourceLimit(format!(
            "profiles capped at depth {MAX_PROFILE_DEPTH}, got {n}"
        )));
    }
    let mut z = vec![eps];
    for _ in 0..n {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &zi in &z {
            next.push(2.0 * zi - zi * zi);
            next.push(zi * zi);
        }
        z = next;
    }
    let i_cap = z.iter().map(|zi| 1.0 - zi).collect();
    Ok(SynthesizedChannelProfile { n, z, i_cap })
}

/// Information set for `BEC(eps)`: the `k` indices of smallest Bhattacharyya
/// value, ties broken toward the smaller index. Frozen bits default to zero.
pub fn construct_bec(eps: f64, n: u32, k: usize) -> Result<PolarCode> {
    let block = 1usize << n;
    if k > block {
        return Err(Error::InvalidParameter(format!(
            "dimension {k} exceeds block length {block}"
        )));
    }
    let profile = bec_profile(eps, n)?;
    let mut order: Vec<usize> = (0..block).collect();
    // Stable sort keeps smaller indices first among equal z values.
    order.sort_by(|&a, &b| profile.z[a].partial_cmp(&profile.z[b]).unwrap());
    let mut info: Vec<usize> = order.into_iter().take(k).collect();
    info.sort_unstable();
    PolarCode::new(n, info)
}

/// Union bound on block error: `sum of z over the information set`.
pub fn union_bound(profile: &SynthesizedChannelProfile, info_set: &[usize]) -> f64 {
    info_set.iter().map(|&i| profile.z[i]).sum()
}

/// Fractions of synthesized channels with capacity above `1 - delta` and
/// below `delta`.
pub fn polarization_fraction(eps: f64, n: u32, delta: f64) -> Result<(f64, f64)> {
    if !(0.0..0.5).contains(&delta) || delta == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} outside (0, 0.5)"
        )));
    }
    let profile = bec_profile(eps, n)?;
    let total = profile.i_cap.len() as f64;
    let good = profile.i_cap.iter().filter(|&&c| c > 1.0 - delta).count() as f64;
    let bad = profile.i_cap.iter().filter(|&&c| c < delta).count() as f64;
    Ok((good / total, bad / total))
}

/// Likelihood decision shared by every decoder and oracle in this module:
/// decide 0 unless the evidence for 1 exceeds the evidence for 0 beyond the
/// tie tolerance (a ratio of exactly 1 decodes to 0).
pub fn likelihood_decision(w0: f64, w1: f64) -> bool {
    let sum = w0 + w1;
    if sum <= 0.0 {
        return false;
    }
    w1 / sum > w0 / sum + DECISION_TIE_TOLERANCE
}

/// Message algebra shared by the successive-cancellation decoders.
trait ScMessage: Copy + Default {
    fn minus(left: Self, right: Self) -> Self;
    fn plus(left: Self, right: Self, xhat: bool) -> Self;
    /// Information-bit decision; ties go to 0 (`false`).
    fn decide(self) -> bool;
}

/// Erasure-channel message. `Contradiction` marks evidence pairs that no
/// input explains; it is absorbing, mirroring an all-zero probability pair,
/// and arises only downstream of a wrong tie-broken guess.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
enum ErasureMsg {
    Known(bool),
    #[default]
    Erased,
    Contradiction,
}

impl ScMessage for ErasureMsg {
    fn minus(left: Self, right: Self) -> Self {
        use ErasureMsg::*;
        match (left, right) {
            (Contradiction, _) | (_, Contradiction) => Contradiction,
            (Erased, _) | (_, Erased) => Erased,
            (Known(a), Known(b)) => Known(a ^ b),
        }
    }

    fn plus(left: Self, right: Self, xhat: bool) -> Self {
        use ErasureMsg::*;
        if matches!(left, Contradiction) || matches!(right, Contradiction) {
            return Contradiction;
        }
        let from_left = match left {
            Known(v) => Some(v ^ xhat),
            _ => None,
        };
        let from_right = match right {
            Known(v) => Some(v),
            _ => None,
        };
        match (from_left, from_right) {
            (Some(a), Some(b)) if a == b => Known(a),
            (Some(_), Some(_)) => Contradiction,
            (Some(a), None) | (None, Some(a)) => Known(a),
            (None, None) => Erased,
        }
    }

    fn decide(self) -> bool {
        match self {
            ErasureMsg::Known(v) => v,
            // Residual erasure: likelihood ratio 1, decode to 0. A
            // contradiction is an all-zero pair: also 0.
            ErasureMsg::Erased | ErasureMsg::Contradiction => false,
        }
    }
}

/// Probability-pair message `(W(..|0), W(..|1))`, renormalized at every node.
#[derive(Clone, Copy, Debug, Default)]
struct ProbPair(f64, f64);

impl ProbPair {
    fn normalized(p0: f64, p1: f64) -> Self {
        let sum = p0 + p1;
        if sum > 0.0 {
            ProbPair(p0 / sum, p1 / sum)
        } else {
            ProbPair(0.0, 0.0)
        }
    }
}

impl ScMessage for ProbPair {
    fn minus(left: Self, right: Self) -> Self {
        ProbPair::normalized(
            0.5 * (left.0 * right.0 + left.1 * right.1),
            0.5 * (left.0 * right.1 + left.1 * right.0),
        )
    }

    fn plus(left: Self, right: Self, xhat: bool) -> Self {
        let (l_for_0, l_for_1) = if xhat {
            (left.1, left.0)
        } else {
            (left.0, left.1)
        };
        ProbPair::normalized(0.5 * l_for_0 * right.0, 0.5 * l_for_1 * right.1)
    }

    fn decide(self) -> bool {
        likelihood_decision(self.0, self.1)
    }
}

struct ScContext<'a> {
    code: &'a PolarCode,
    cursor: usize,
    decisions: BitVector,
}

/// One block of the recursion: `msgs` carry channel-side evidence about the
/// block's transformed bits; decisions are appended in natural order and the
/// block's re-encoded bits are written into `out_x`.
fn sc_recurse<M: ScMessage>(
    msgs: &[M],
    levels: &mut [Vec<M>],
    out_x: &mut [u8],
    ctx: &mut ScContext<'_>,
) {
    let block = msgs.len();
    if block == 1 {
        let i = ctx.cursor;
        ctx.cursor += 1;
        let bit = if ctx.code.is_frozen(i) {
            ctx.code.frozen_bit(i)
        } else {
            msgs[0].decide()
        };
        ctx.decisions.set(i, bit);
        out_x[0] = u8::from(bit);
        return;
    }
    let half = block / 2;
    let (scratch, deeper) = levels.split_first_mut().expect("level buffer missing");
    for j in 0..half {
        scratch[j] = M::minus(msgs[j], msgs[j + half]);
    }
    let (xa, xb) = out_x.split_at_mut(half);
    sc_recurse(&scratch[..half], deeper, xa, ctx);
    for j in 0..half {
        scratch[j] = M::plus(msgs[j], msgs[j + half], xa[j] == 1);
    }
    sc_recurse(&scratch[..half], deeper, xb, ctx);
    for j in 0..half {
        xa[j] ^= xb[j];
    }
}

fn sc_decode<M: ScMessage>(code: &PolarCode, channel_msgs: &[M]) -> BitVector {
    let block = code.block_length();
    let n = code.depth();
    // The transform is the bit-reversal permutation followed by the butterfly,
    // so the butterfly-ordered decoder reads the block bit-reversed.
    let mut msgs = vec![M::default(); block];
    for (j, slot) in msgs.iter_mut().enumerate() {
        *slot = channel_msgs[bit_reverse(j, n)];
    }
    let mut levels: Vec<Vec<M>> = (1..=n)
        .map(|d| vec![M::default(); block >> d])
        .collect();
    let mut out_x = vec![0u8; block];
    let mut ctx = ScContext {
        code,
        cursor: 0,
        decisions: BitVector::zeros(block),
    };
    sc_recurse(&msgs, &mut levels, &mut out_x, &mut ctx);
    ctx.decisions
}

/// Successive-cancellation decoding over the erasure algebra: minus steps
/// erase unless both children are known, plus steps resolve from whichever
/// child is known, and a residual erasure at an information index decodes
/// to 0. Runs in `O(N log N)`.
pub fn sc_decode_bec(code: &PolarCode, received: &[BecSymbol]) -> Result<BitVector> {
    if received.len() != code.block_length() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} vs block length {}",
            received.len(),
            code.block_length()
        )));
    }
    let msgs: Vec<ErasureMsg> = received
        .iter()
        .map(|s| match s {
            BecSymbol::Zero => ErasureMsg::Known(false),
            BecSymbol::One => ErasureMsg::Known(true),
            BecSymbol::Erasure => ErasureMsg::Erased,
        })
        .collect();
    Ok(sc_decode(code, &msgs))
}

/// Successive-cancellation decoding for an arbitrary binary-input channel,
/// working in probability pairs normalized at every node. `received` holds
/// output-symbol indices.
pub fn sc_decode_general(
    code: &PolarCode,
    channel: &DiscreteMemorylessChannel,
    received: &[usize],
) -> Result<BitVector> {
    if received.len() != code.block_length() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} vs block length {}",
            received.len(),
            code.block_length()
        )));
    }
    let alphabet = channel.output_alphabet_size();
    let msgs = received
        .iter()
        .map(|&y| {
            if y >= alphabet {
                return Err(Error::InvalidParameter(format!(
                    "output symbol {y} outside alphabet of size {alphabet}"
                )));
            }
            Ok(ProbPair::normalized(channel.prob(y, 0), channel.prob(y, 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sc_decode(code, &msgs))
}

/// Exhaustive-summation oracle for the synthesized channel `W_N^(i)` over the
/// output alphabet `Y^N x {0,1}^i` (prefix bits of decisions before `i`).
///
/// Output indexing: `y_flat * 2^i + prefix_flat`, where `y_flat` reads
/// `y_0..y_{N-1}` as base-`|Y|` digits with `y_0` most significant, and
/// `prefix_flat` reads `u_0..u_{i-1}` with `u_0` most significant. Test
/// oracle only; `N <= 4`.
pub fn split_channel_bruteforce(
    channel: &DiscreteMemorylessChannel,
    n: u32,
    i: usize,
) -> Result<DiscreteMemorylessChannel> {
    let block = 1usize << n;
    if block > 4 {
        return Err(Error::ResourceLimit(format!(
            "brute-force splitting capped at block length 4, got {block}"
        )));
    }
    if i >= block {
        return Err(Error::InvalidParameter(format!(
            "bit index {i} outside 0..{block}"
        )));
    }
    let alphabet = channel.output_alphabet_size();
    let y_count = alphabet.pow(block as u32);
    let out_size = y_count << i;
    if out_size > 1 << 20 {
        return Err(Error::ResourceLimit(format!(
            "split table with {out_size} outputs exceeds the oracle bound"
        )));
    }
    let weight = 0.5f64.powi(block as i32 - 1);
    let mut table = [vec![0.0; out_size], vec![0.0; out_size]];
    let mut x = vec![0u8; block];
    for u in 0..1usize << block {
        for (j, slot) in x.iter_mut().enumerate() {
            *slot = (u >> (block - 1 - j) & 1) as u8;
        }
        let prefix: usize = (0..i).fold(0, |acc, t| acc << 1 | (u >> (block - 1 - t) & 1));
        let ui = u >> (block - 1 - i) & 1;
        encode_in_place(&mut x);
        for y_flat in 0..y_count {
            let mut p = weight;
            let mut rest = y_flat;
            for j in (0..block).rev() {
                let yj = rest % alphabet;
                rest /= alphabet;
                p *= channel.prob(yj, x[j] as usize);
                if p == 0.0 {
                    break;
                }
            }
            if p > 0.0 {
                table[ui][(y_flat << i) | prefix] += p;
            }
        }
    }
    DiscreteMemorylessChannel::from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        bhattacharyya, make_channel, symmetric_capacity, ChannelKind,
    };
    use crate::gf2::mat_vec_mul;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits.iter().copied())
    }

    #[test]
    fn generator_depth_zero_and_one() {
        let g0 = generator_matrix(0).unwrap();
        assert_eq!((g0.rows(), g0.cols()), (1, 1));
        assert!(g0.get(0, 0));
        let g1 = generator_matrix(1).unwrap();
        let expected = GF2Matrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(g1, expected);
    }

    #[test]
    fn generator_depth_two_matches_hand_composition() {
        // Pairwise XOR, reverse shuffle, then two depth-one blocks, composed
        // by hand on each basis vector.
        let g2 = generator_matrix(2).unwrap();
        let expected = GF2Matrix::from_rows(&[
            vec![1, 0, 0, 0],
            vec![1, 0, 1, 0],
            vec![1, 1, 0, 0],
            vec![1, 1, 1, 1],
        ])
        .unwrap();
        assert_eq!(g2, expected);
    }

    #[test]
    fn generator_depth_cap() {
        assert!(generator_matrix(21).is_err());
    }

    #[test]
    fn encode_depth_one() {
        assert_eq!(encode(1, &bv(&[1, 0])).unwrap(), bv(&[1, 0]));
        assert_eq!(encode(1, &bv(&[0, 1])).unwrap(), bv(&[1, 1]));
    }

    #[test]
    fn encode_zero_is_zero() {
        for n in 0..6 {
            let u = BitVector::zeros(1 << n);
            assert!(encode(n, &u).unwrap().is_zero());
        }
    }

    #[test]
    fn encode_rejects_bad_length() {
        assert!(encode(2, &bv(&[1, 0, 1])).is_err());
    }

    #[test]
    fn encode_matches_generator_matrix() {
        let mut rng = crate::cli::SplitMix64::new(11);
        for n in 0..=8u32 {
            let g = generator_matrix(n).unwrap();
            for _ in 0..20 {
                let u = BitVector::from_bits((0..1usize << n).map(|_| rng.next_bit() as u8));
                assert_eq!(encode(n, &u).unwrap(), mat_vec_mul(&g, &u).unwrap());
            }
        }
    }

    #[test]
    fn transform_is_involutory() {
        // G_N squared is the identity; checked by explicit GF(2)
        // multiplication at each depth.
        let mut rng = crate::cli::SplitMix64::new(7);
        for n in 0..=6u32 {
            let g = generator_matrix(n).unwrap();
            assert_eq!(mat_mul(&g, &g).unwrap(), GF2Matrix::identity(1 << n));
            for _ in 0..10 {
                let u = BitVector::from_bits((0..1usize << n).map(|_| rng.next_bit() as u8));
                let twice = encode(n, &encode(n, &u).unwrap()).unwrap();
                assert_eq!(twice, u);
            }
        }
    }

    #[test]
    fn profile_examples() {
        let p = bec_profile(0.5, 1).unwrap();
        assert_eq!(p.z(), &[0.75, 0.25]);
        assert_eq!(p.capacities(), &[0.25, 0.75]);
        let p2 = bec_profile(0.5, 2).unwrap();
        assert_eq!(p2.z(), &[0.9375, 0.5625, 0.4375, 0.0625]);
        let perfect = bec_profile(0.0, 5).unwrap();
        assert!(perfect.z().iter().all(|&z| z == 0.0));
    }

    #[test]
    fn profile_capacity_mean_is_conserved() {
        for &eps in &[0.2, 0.5, 0.77] {
            for n in 1..=10u32 {
                let p = bec_profile(eps, n).unwrap();
                let mean = p.capacities().iter().sum::<f64>() / p.capacities().len() as f64;
                assert!(
                    (mean - (1.0 - eps)).abs() < 1e-9,
                    "mean {mean} vs {}",
                    1.0 - eps
                );
            }
        }
    }

    #[test]
    fn construct_examples() {
        assert_eq!(construct_bec(0.5, 1, 1).unwrap().info_set(), &[1]);
        assert_eq!(construct_bec(0.5, 2, 1).unwrap().info_set(), &[3]);
        let full = construct_bec(0.3, 3, 8).unwrap();
        assert_eq!(full.info_set(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert!(construct_bec(0.5, 2, 5).is_err());
    }

    #[test]
    fn union_bound_examples() {
        let p = bec_profile(0.5, 2).unwrap();
        assert_eq!(union_bound(&p, &[]), 0.0);
        assert_eq!(union_bound(&p, &[3]), 0.0625);
        assert_eq!(union_bound(&p, &[2, 3]), 0.5);
    }

    #[test]
    fn polarization_extremes() {
        assert_eq!(polarization_fraction(0.0, 8, 0.01).unwrap(), (1.0, 0.0));
        assert_eq!(polarization_fraction(1.0, 8, 0.01).unwrap(), (0.0, 1.0));
        assert!(polarization_fraction(0.5, 8, 0.7).is_err());
    }

    #[test]
    fn sc_bec_noiseless_recovery() {
        let mut rng = crate::cli::SplitMix64::new(3);
        for n in 1..=6u32 {
            let code = construct_bec(0.4, n, (1usize << n) / 2).unwrap();
            for _ in 0..25 {
                let info = BitVector::from_bits(
                    (0..code.dimension()).map(|_| rng.next_bit() as u8),
                );
                let u = code.assemble_input(&info).unwrap();
                let x = encode(n, &u).unwrap();
                let y: Vec<BecSymbol> = x.iter_bits().map(BecSymbol::from_bit).collect();
                assert_eq!(sc_decode_bec(&code, &y).unwrap(), u);
            }
        }
    }

    #[test]
    fn sc_bec_plus_step_resolution() {
        // N=2, information bit at index 1, frozen u_0 = 0.
        let code = PolarCode::new(1, vec![1]).unwrap();
        let decoded = sc_decode_bec(&code, &[BecSymbol::Erasure, BecSymbol::One]).unwrap();
        assert_eq!(decoded, bv(&[0, 1]));
        // Residual erasure at the information index: tie rule gives 0.
        let decoded = sc_decode_bec(&code, &[BecSymbol::Erasure, BecSymbol::Erasure]).unwrap();
        assert_eq!(decoded, bv(&[0, 0]));
    }

    #[test]
    fn sc_general_hand_example() {
        // N=2 over BSC(0.3), frozen u_0 = 0, received (0,0): the four-term
        // splitting sum favors u_1 = 0.
        let code = PolarCode::new(1, vec![1]).unwrap();
        let bsc = make_channel(ChannelKind::Bsc(0.3)).unwrap();
        let decoded = sc_decode_general(&code, &bsc, &[0, 0]).unwrap();
        assert_eq!(decoded, bv(&[0, 0]));
    }

    #[test]
    fn sc_general_noiseless_recovery() {
        let perfect = make_channel(ChannelKind::Noiseless).unwrap();
        let mut rng = crate::cli::SplitMix64::new(5);
        for n in 1..=5u32 {
            let code = construct_bec(0.4, n, (1usize << n) / 2).unwrap();
            for _ in 0..10 {
                let info = BitVector::from_bits(
                    (0..code.dimension()).map(|_| rng.next_bit() as u8),
                );
                let u = code.assemble_input(&info).unwrap();
                let x = encode(n, &u).unwrap();
                let y: Vec<usize> = x.iter_bits().map(usize::from).collect();
                assert_eq!(sc_decode_general(&code, &perfect, &y).unwrap(), u);
            }
        }
    }

    #[test]
    fn decoders_reject_wrong_lengths() {
        let code = PolarCode::new(2, vec![2, 3]).unwrap();
        assert!(sc_decode_bec(&code, &[BecSymbol::Zero; 3]).is_err());
        let bsc = make_channel(ChannelKind::Bsc(0.2)).unwrap();
        assert!(sc_decode_general(&code, &bsc, &[0, 1]).is_err());
        assert!(sc_decode_general(&code, &bsc, &[0, 1, 2, 0]).is_err());
    }

    #[test]
    fn split_oracle_bound_enforced() {
        let bsc = make_channel(ChannelKind::Bsc(0.2)).unwrap();
        assert!(split_channel_bruteforce(&bsc, 3, 0).is_err());
    }

    #[test]
    fn split_depth_zero_returns_input() {
        let bsc = make_channel(ChannelKind::Bsc(0.2)).unwrap();
        let split = split_channel_bruteforce(&bsc, 0, 0).unwrap();
        assert_eq!(split, bsc);
    }

    #[test]
    fn split_bec_tracks_exact_recursion() {
        for &eps in &[0.1, 0.5, 0.8] {
            let bec = make_channel(ChannelKind::Bec(eps)).unwrap();
            let minus = split_channel_bruteforce(&bec, 1, 0).unwrap();
            let plus = split_channel_bruteforce(&bec, 1, 1).unwrap();
            assert!((bhattacharyya(&minus) - (2.0 * eps - eps * eps)).abs() < 1e-12);
            assert!((bhattacharyya(&plus) - eps * eps).abs() < 1e-12);
        }
    }

    #[test]
    fn split_matches_profile_order_at_depth_two() {
        // The decision-order profile and the brute-force synthesized channels
        // agree index by index.
        let eps = 0.35;
        let bec = make_channel(ChannelKind::Bec(eps)).unwrap();
        let profile = bec_profile(eps, 2).unwrap();
        for i in 0..4 {
            let split = split_channel_bruteforce(&bec, 2, i).unwrap();
            assert!(
                (bhattacharyya(&split) - profile.z()[i]).abs() < 1e-10,
                "index {i}"
            );
        }
    }

    #[test]
    fn local_transform_invariants_on_random_channels() {
        let mut rng = crate::cli::SplitMix64::new(99);
        for _ in 0..25 {
            let ch = crate::channels::random_channel(2 + (rng.next_u64() % 4) as usize, &mut rng);
            let minus = split_channel_bruteforce(&ch, 1, 0).unwrap();
            let plus = split_channel_bruteforce(&ch, 1, 1).unwrap();
            let (i0, im, ip) = (
                symmetric_capacity(&ch),
                symmetric_capacity(&minus),
                symmetric_capacity(&plus),
            );
            let (z0, zm, zp) = (
                bhattacharyya(&ch),
                bhattacharyya(&minus),
                bhattacharyya(&plus),
            );
            assert!((im + ip - 2.0 * i0).abs() < 1e-9);
            assert!(im <= i0 + 1e-9 && i0 <= ip + 1e-9);
            assert!(zm + 1e-9 >= z0 && z0 + 1e-9 >= zp);
            assert!((zp - z0 * z0).abs() < 1e-9);
            assert!(zm <= 2.0 * z0 - z0 * z0 + 1e-9);
            assert!(zm + zp <= 2.0 * z0 + 1e-9);
        }
    }

    #[test]
    fn bec_and_general_decoders_agree() {
        // Cross-implementation equivalence on honest erasure trials,
        // including rate-1 codes where tie-broken guesses can later produce
        // contradictory evidence.
        let mut rng = crate::cli::SplitMix64::new(2024);
        for &(n, k) in &[(3u32, 4usize), (3, 8), (4, 8), (6, 32), (6, 64)] {
            let code = construct_bec(0.5, n, k).unwrap();
            let bec = make_channel(ChannelKind::Bec(0.5)).unwrap();
            let block = code.block_length();
            for _ in 0..200 {
                let info = BitVector::from_bits(
                    (0..code.dimension()).map(|_| rng.next_bit() as u8),
                );
                let u = code.assemble_input(&info).unwrap();
                let x = encode(n, &u).unwrap();
                let y: Vec<BecSymbol> = (0..block)
                    .map(|j| {
                        if rng.next_f64() < 0.5 {
                            BecSymbol::Erasure
                        } else {
                            BecSymbol::from_bit(x.get(j))
                        }
                    })
                    .collect();
                let via_erasure = sc_decode_bec(&code, &y).unwrap();
                let indices: Vec<usize> = y.iter().map(|s| s.output_index()).collect();
                let via_pairs = sc_decode_general(&code, &bec, &indices).unwrap();
                assert_eq!(via_erasure, via_pairs);
            }
        }
    }

    #[test]
    fn decoders_agree_on_contradictory_evidence() {
        // Honest channel output that drives the decoder into contradictory
        // evidence: a guessed tie at an erased information bit later clashes
        // with an unerased symbol through a frozen-bit constraint. Both
        // decoders must resolve the clash identically (the probability pair
        // collapses to all-zero and absorbs; the erasure algebra mirrors it).
        let code = construct_bec(0.5, 3, 4).unwrap();
        let info = BitVector::from_bits([1, 0, 0, 0]);
        let u = code.assemble_input(&info).unwrap();
        let x = encode(3, &u).unwrap();
        let erased = [1usize, 2, 4, 6];
        let y: Vec<BecSymbol> = (0..8)
            .map(|j| {
                if erased.contains(&j) {
                    BecSymbol::Erasure
                } else {
                    BecSymbol::from_bit(x.get(j))
                }
            })
            .collect();
        let via_erasure = sc_decode_bec(&code, &y).unwrap();
        let bec = make_channel(ChannelKind::Bec(0.5)).unwrap();
        let indices: Vec<usize> = y.iter().map(|s| s.output_index()).collect();
        let via_pairs = sc_decode_general(&code, &bec, &indices).unwrap();
        assert_eq!(via_erasure, via_pairs);
        // The pattern is genuinely ambiguous, so the decode is a (wrong)
        // guess here; block success is what the union bound prices in.
        assert_ne!(via_erasure, u);
    }

    #[test]
    fn polar_generator_rows_match_encode() {
        let code = construct_bec(0.5, 3, 4).unwrap();
        let rows = code.generator_rows();
        assert_eq!((rows.rows(), rows.cols()), (4, 8));
        let mut rng = crate::cli::SplitMix64::new(17);
        for _ in 0..20 {
            let info = BitVector::from_bits((0..4).map(|_| rng.next_bit() as u8));
            let direct = mat_vec_mul(&rows, &info).unwrap();
            let u = code.assemble_input(&info).unwrap();
            assert_eq!(direct, encode(3, &u).unwrap());
        }
    }
}
