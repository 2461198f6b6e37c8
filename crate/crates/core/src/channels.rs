//! Binary-input discrete memoryless channels and their information-theoretic
//! functionals.
//!
//! A channel is a 2-row table of transition probabilities `W(y|x)`,
//! `x ∈ {0,1}`. Capacities are reported in bits (base-2 logarithms) and the
//! `0·log 0 := 0` convention applies to all entropy sums.

use crate::{Error, Result};

/// Row-sum and entry validity tolerance for transition tables.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Output-alphabet cap for the brute-force symmetry search.
pub const SYMMETRY_SEARCH_MAX_ALPHABET: usize = 12;

/// Output symbol index of the erasure in channels built by [`ChannelKind::Bec`].
pub const BEC_ERASURE_SYMBOL: usize = 2;

/// A binary-input channel as a table of transition probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMemorylessChannel {
    transition: [Vec<f64>; 2],
}

/// The channel families used throughout the laboratory.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelKind {
    /// Binary erasure channel with erasure probability `ε`; outputs `{0,1,e}`
    /// with the erasure at index [`BEC_ERASURE_SYMBOL`].
    Bec(f64),
    /// Binary symmetric channel with flip-over probability `p`.
    Bsc(f64),
    /// The perfect channel: identity on `{0,1}`.
    Noiseless,
    /// An arbitrary table, one row per input.
    Generic([Vec<f64>; 2]),
}

impl DiscreteMemorylessChannel {
    /// Validates and wraps a transition table.
    pub fn from_table(transition: [Vec<f64>; 2]) -> Result<Self> {
        let size = transition[0].len();
        if size == 0 || transition[1].len() != size {
            return Err(Error::DimensionMismatch(
                "transition rows must be nonempty and equally long".into(),
            ));
        }
        for row in &transition {
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidParameter(
                    "transition entries must lie in [0,1]".into(),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
                return Err(Error::InvalidParameter(format!(
                    "transition row sums to {sum}, expected 1"
                )));
            }
        }
        Ok(DiscreteMemorylessChannel { transition })
    }

    pub fn output_alphabet_size(&self) -> usize {
        self.transition[0].len()
    }

    /// `W(y|x)`.
    #[inline]
    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.transition[x][y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.transition[x]
    }
}

/// Builds the transition table for a channel family.
pub fn make_channel(kind: ChannelKind) -> Result<DiscreteMemorylessChannel> {
    match kind {
        ChannelKind::Noiseless => {
            DiscreteMemorylessChannel::from_table([vec![1.0, 0.0], vec![0.0, 1.0]])
        }
        ChannelKind::Bec(eps) => {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::InvalidParameter(format!(
                    "erasure probability {eps} outside [0,1]"
                )));
            }
            DiscreteMemorylessChannel::from_table([
                vec![1.0 - eps, 0.0, eps],
                vec![0.0, 1.0 - eps, eps],
            ])
        }
        ChannelKind::Bsc(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "flip probability {p} outside [0,1]"
                )));
            }
            DiscreteMemorylessChannel::from_table([vec![1.0 - p, p], vec![p, 1.0 - p]])
        }
        ChannelKind::Generic(table) => DiscreteMemorylessChannel::from_table(table),
    }
}

/// Bhattacharyya parameter `Z(W) = Σ_y sqrt(W(y|0) W(y|1))`.
pub fn bhattacharyya(ch: &DiscreteMemorylessChannel) -> f64 {
    (0..ch.output_alphabet_size())
        .map(|y| (ch.prob(y, 0) * ch.prob(y, 1)).sqrt())
        .sum()
}

/// Symmetric capacity `I(W)` in bits: mutual information with a uniform
/// binary input.
pub fn symmetric_capacity(ch: &DiscreteMemorylessChannel) -> f64 {
    let mut total = 0.0;
    for y in 0..ch.output_alphabet_size() {
        let marginal = 0.5 * (ch.prob(y, 0) + ch.prob(y, 1));
        for x in 0..2 {
            let w = ch.prob(y, x);
            if w > 0.0 {
                total += 0.5 * w * (w / marginal).log2();
            }
        }
    }
    total
}

/// Searches for an involution `π` of the output alphabet with
/// `W(y|1) = W(π(y)|0)` for all `y`, the witness that the channel is
/// symmetric.
///
/// Brute force over all involutions; alphabets larger than
/// [`SYMMETRY_SEARCH_MAX_ALPHABET`] are rejected.
pub fn find_symmetry_involution(ch: &DiscreteMemorylessChannel) -> Result<Option<Vec<usize>>> {
    let size = ch.output_alphabet_size();
    if size > SYMMETRY_SEARCH_MAX_ALPHABET {
        return Err(Error::Unsupported(format!(
            "symmetry search capped at alphabet size {SYMMETRY_SEARCH_MAX_ALPHABET}, got {size}"
        )));
    }
    let mut perm: Vec<Option<usize>> = vec![None; size];
    if search_involution(ch, &mut perm) {
        Ok(Some(perm.into_iter().map(Option::unwrap).collect()))
    } else {
        Ok(None)
    }
}

fn involution_consistent(ch: &DiscreteMemorylessChannel, y: usize, image: usize) -> bool {
    // Pairing y <-> image requires W(y|1) = W(image|0) and W(image|1) = W(y|0).
    (ch.prob(y, 1) - ch.prob(image, 0)).abs() <= PROBABILITY_TOLERANCE
        && (ch.prob(image, 1) - ch.prob(y, 0)).abs() <= PROBABILITY_TOLERANCE
}

fn search_involution(ch: &DiscreteMemorylessChannel, perm: &mut Vec<Option<usize>>) -> bool {
    let Some(y) = perm.iter().position(Option::is_none) else {
        return true;
    };
    // Fixed point first, then pairings in increasing order: deterministic
    // witness choice.
    if involution_consistent(ch, y, y) {
        perm[y] = Some(y);
        if search_involution(ch, perm) {
            return true;
        }
        perm[y] = None;
    }
    for z in y + 1..perm.len() {
        if perm[z].is_none() && involution_consistent(ch, y, z) {
            perm[y] = Some(z);
            perm[z] = Some(y);
            if search_involution(ch, perm) {
                return true;
            }
            perm[y] = None;
            perm[z] = None;
        }
    }
    false
}

/// Parses the CLI channel grammar: `bec:0.5`, `bsc:0.11`, `noiseless`,
/// `generic:<path>` where the path names a plain-text matrix file with one
/// row of whitespace-separated probabilities per input.
pub fn parse_channel_spec(spec: &str) -> Result<DiscreteMemorylessChannel> {
    if spec == "noiseless" {
        return make_channel(ChannelKind::Noiseless);
    }
    if let Some(rest) = spec.strip_prefix("bec:") {
        let eps: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad erasure probability {rest:?}")))?;
        return make_channel(ChannelKind::Bec(eps));
    }
    if let Some(rest) = spec.strip_prefix("bsc:") {
        let p: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad flip probability {p:?}", p = rest)))?;
        return make_channel(ChannelKind::Bsc(p));
    }
    if let Some(path) = spec.strip_prefix("generic:") {
        let text = std::fs::read_to_string(path)?;
        let mut rows = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let row: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|_| Error::Parse(format!("bad probability in {line:?}")))?);
        }
        if rows.len() != 2 {
            return Err(Error::Parse(format!(
                "generic channel file must have 2 rows, found {}",
                rows.len()
            )));
        }
        let table = [rows[0].clone(), rows[1].clone()];
        return make_channel(ChannelKind::Generic(table));
    }
    Err(Error::Parse(format!(
        "unrecognized channel spec {spec:?}; expected bec:<p>, bsc:<p>, noiseless or generic:<path>"
    )))
}

/// Random valid channel with the given output alphabet size; test use only.
#[cfg(test)]
pub(crate) fn random_channel(
    size: usize,
    rng: &mut crate::cli::SplitMix64,
) -> DiscreteMemorylessChannel {
    let mut table = [vec![0.0; size], vec![0.0; size]];
    for row in table.iter_mut() {
        let mut sum = 0.0;
        for p in row.iter_mut() {
            *p = rng.next_f64() + 1e-3;
            sum += *p;
        }
        for p in row.iter_mut() {
            *p /= sum;
        }
        // Force the row to sum to 1 within the validity tolerance.
        let correction: f64 = 1.0 - row.iter().sum::<f64>();
        row[0] += correction;
    }
    DiscreteMemorylessChannel::from_table(table).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn noiseless_table() {
        let ch = make_channel(ChannelKind::Noiseless).unwrap();
        assert_eq!(ch.row(0), &[1.0, 0.0]);
        assert_eq!(ch.row(1), &[0.0, 1.0]);
    }

    #[test]
    fn bec_zero_is_identity_with_dead_erasure_column() {
        let ch = make_channel(ChannelKind::Bec(0.0)).unwrap();
        assert_eq!(ch.row(0), &[1.0, 0.0, 0.0]);
        assert_eq!(ch.row(1), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn bsc_table() {
        let ch = make_channel(ChannelKind::Bsc(0.3)).unwrap();
        assert_eq!(ch.row(0), &[0.7, 0.3]);
        assert_eq!(ch.row(1), &[0.3, 0.7]);
    }

    #[test]
    fn parameter_out_of_range_is_rejected() {
        assert!(make_channel(ChannelKind::Bec(1.5)).is_err());
        assert!(make_channel(ChannelKind::Bsc(-0.1)).is_err());
    }

    #[test]
    fn bhattacharyya_values() {
        let bec = make_channel(ChannelKind::Bec(0.3)).unwrap();
        assert!((bhattacharyya(&bec) - 0.3).abs() < 1e-15);
        let perfect = make_channel(ChannelKind::Noiseless).unwrap();
        assert_eq!(bhattacharyya(&perfect), 0.0);
        // Direct summation over the two output symbols.
        let bsc = make_channel(ChannelKind::Bsc(0.11)).unwrap();
        let expected = 2.0 * (0.11f64 * 0.89).sqrt();
        assert!((bhattacharyya(&bsc) - expected).abs() < 1e-15);
    }

    #[test]
    fn symmetric_capacity_values() {
        let bec = make_channel(ChannelKind::Bec(0.3)).unwrap();
        assert!((symmetric_capacity(&bec) - 0.7).abs() < 1e-12);
        let useless = make_channel(ChannelKind::Bsc(0.5)).unwrap();
        assert!(symmetric_capacity(&useless).abs() < 1e-12);
        // Direct evaluation of the mutual-information sum.
        let bsc = make_channel(ChannelKind::Bsc(0.11)).unwrap();
        let binary_entropy = -0.11f64 * 0.11f64.log2() - 0.89 * 0.89f64.log2();
        assert!((symmetric_capacity(&bsc) - (1.0 - binary_entropy)).abs() < 1e-12);
    }

    #[test]
    fn involution_witnesses() {
        let bsc = make_channel(ChannelKind::Bsc(0.3)).unwrap();
        assert_eq!(find_symmetry_involution(&bsc).unwrap(), Some(vec![1, 0]));
        let bec = make_channel(ChannelKind::Bec(0.3)).unwrap();
        assert_eq!(
            find_symmetry_involution(&bec).unwrap(),
            Some(vec![1, 0, 2])
        );
        let z_channel =
            DiscreteMemorylessChannel::from_table([vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(find_symmetry_involution(&z_channel).unwrap(), None);
    }

    #[test]
    fn involution_exists_for_every_bec_bsc() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let bec = make_channel(ChannelKind::Bec(p)).unwrap();
            assert!(find_symmetry_involution(&bec).unwrap().is_some());
            let bsc = make_channel(ChannelKind::Bsc(p)).unwrap();
            assert!(find_symmetry_involution(&bsc).unwrap().is_some());
        }
    }

    #[test]
    fn alphabet_cap_enforced() {
        let row = vec![1.0 / 13.0; 13];
        let ch = DiscreteMemorylessChannel::from_table([row.clone(), row]).unwrap();
        assert!(find_symmetry_involution(&ch).is_err());
    }

    #[test]
    fn channel_spec_grammar() {
        let ch = parse_channel_spec("bsc:0.11").unwrap();
        assert_eq!(ch.row(0), &[0.89, 0.11]);
        assert!(parse_channel_spec("bec:1.2").is_err());
        assert!(parse_channel_spec("nonsense").is_err());
    }

    proptest! {
        #[test]
        fn capacity_bhattacharyya_bounds(seed in any::<u64>(), size in 2usize..=6) {
            let mut rng = crate::cli::SplitMix64::new(seed);
            let ch = random_channel(size, &mut rng);
            let z = bhattacharyya(&ch);
            let i = symmetric_capacity(&ch);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&z));
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&i));
            prop_assert!(i >= (2.0 / (1.0 + z)).log2() - 1e-9);
            prop_assert!(i <= (1.0 - z * z).max(0.0).sqrt() + 1e-9);
        }
    }
}
