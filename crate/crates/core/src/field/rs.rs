//! Reed-Solomon codes over prime fields with Berlekamp-Welch decoding.

use super::{homogeneous_kernel_vector, Polynomial, PrimeField};
use crate::{Error, Result};

/// Cap on `p^k` for exhaustive codeword enumeration.
const EXHAUSTIVE_CODEWORD_CAP: u64 = 1_000_000;

/// `RS(F, S, n, k)`: evaluations of degree-`< k` polynomials at `n` distinct
/// points.
#[derive(Clone, Debug)]
pub struct RsCode {
    field: PrimeField,
    points: Vec<u64>,
    k: usize,
}

impl RsCode {
    pub fn new(field: PrimeField, points: Vec<u64>, k: usize) -> Result<Self> {
        let n = points.len();
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "message length {k} outside 1..={n}"
            )));
        }
        if n as u64 > field.modulus() {
            return Err(Error::InvalidParameter(format!(
                "{n} evaluation points in a field of {} elements",
                field.modulus()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &a in &points {
            if a >= field.modulus() {
                return Err(Error::InvalidParameter(format!(
                    "evaluation point {a} outside the field"
                )));
            }
            if !seen.insert(a) {
                return Err(Error::InvalidParameter(format!(
                    "evaluation point {a} repeated"
                )));
            }
        }
        Ok(RsCode { field, points, k })
    }

    /// Full-support code: evaluation points `0..n`.
    pub fn with_consecutive_points(field: PrimeField, n: usize, k: usize) -> Result<Self> {
        RsCode::new(field, (0..n as u64).collect(), k)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn block_length(&self) -> usize {
        self.points.len()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn message_polynomial(&self, message: &[u64]) -> Result<Polynomial> {
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message length {} vs dimension {}",
                message.len(),
                self.k
            )));
        }
        Ok(Polynomial::new(self.field, message.to_vec()))
    }
}

/// Encodes a message as the evaluations of its coefficient polynomial.
pub fn rs_encode(code: &RsCode, message: &[u64]) -> Result<Vec<u64>> {
    let poly = code.message_polynomial(message)?;
    Ok(code.points().iter().map(|&a| poly.eval(a)).collect())
}

/// The `k x n` Vandermonde generator: entry `(i, j)` is `alpha_j^i`.
pub fn vandermonde(code: &RsCode) -> Vec<Vec<u64>> {
    (0..code.dimension())
        .map(|i| {
            code.points()
                .iter()
                .map(|&a| code.field().pow(a, i as u64))
                .collect()
        })
        .collect()
}

/// Exhaustive minimum Hamming weight over all nonzero codewords.
pub fn rs_min_distance_exhaustive(code: &RsCode) -> Result<usize> {
    let p = code.field().modulus();
    let total = p
        .checked_pow(code.dimension() as u32)
        .filter(|&t| t <= EXHAUSTIVE_CODEWORD_CAP)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "exhaustive distance needs p^k <= {EXHAUSTIVE_CODEWORD_CAP}"
            ))
        })?;
    let mut best = code.block_length();
    let mut message = vec![0u64; code.dimension()];
    for idx in 1..total {
        let mut rest = idx;
        for slot in message.iter_mut() {
            *slot = rest % p;
            rest /= p;
        }
        let weight = rs_encode(code, &message)?
            .iter()
            .filter(|&&y| y != 0)
            .count();
        best = best.min(weight);
    }
    Ok(best)
}

/// Berlekamp-Welch unique decoding with error budget `e`.
///
/// Step 1 returns the interpolant when the received word is already a
/// codeword. Step 2 solves the homogeneous system `N(a_i) = E(a_i) y_i` with
/// `deg E <= e`, `deg N <= e + k - 1`, pinning one free variable to 1, and
/// returns `N / E` when the division is exact, the quotient has degree `< k`,
/// and it disagrees with the received word in at most `e` positions.
pub fn berlekamp_welch(code: &RsCode, received: &[u64], e: usize) -> Result<Polynomial> {
    let n = code.block_length();
    let k = code.dimension();
    let field = code.field();
    if received.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "received length {} vs block length {n}",
            received.len()
        )));
    }
    if received.iter().any(|&y| y >= field.modulus()) {
        return Err(Error::InvalidParameter(
            "received symbol outside the field".into(),
        ));
    }
    if 2 * e > n - k {
        return Err(Error::InvalidBudget(format!(
            "budget {e} violates 2e <= n - k = {}",
            n - k
        )));
    }

    // Step 1: an error-free word is the unique degree-<k interpolant.
    let head: Vec<(u64, u64)> = code.points()[..k]
        .iter()
        .copied()
        .zip(received[..k].iter().copied())
        .collect();
    let candidate = Polynomial::interpolate(field, &head)?;
    if code
        .points()
        .iter()
        .zip(received)
        .all(|(&a, &y)| candidate.eval(a) == y)
    {
        return Ok(candidate);
    }

    // Step 2: N has e + k unknown coefficients, E has e + 1.
    let n_terms = e + k;
    let e_terms = e + 1;
    let rows: Vec<Vec<u64>> = code
        .points()
        .iter()
        .zip(received)
        .map(|(&a, &y)| {
            let mut row = Vec::with_capacity(n_terms + e_terms);
            let mut power = 1u64;
            for _ in 0..n_terms {
                row.push(power);
                power = field.mul(power, a);
            }
            let mut power = 1u64;
            for _ in 0..e_terms {
                row.push(field.neg(field.mul(y, power)));
                power = field.mul(power, a);
            }
            row
        })
        .collect();
    let solution = homogeneous_kernel_vector(field, rows, n_terms + e_terms)
        .ok_or_else(|| Error::DecodeFailure("no nonzero (N, E) solution".into()))?;
    let numerator = Polynomial::new(field, solution[..n_terms].to_vec());
    let locator = Polynomial::new(field, solution[n_terms..].to_vec());
    if locator.is_zero() {
        return Err(Error::DecodeFailure("error locator vanished".into()));
    }
    let (quotient, remainder) = numerator.div_rem(&locator)?;
    if !remainder.is_zero() {
        return Err(Error::DecodeFailure(
            "error locator does not divide the numerator".into(),
        ));
    }
    if quotient.degree().is_some_and(|d| d >= k) {
        return Err(Error::DecodeFailure("quotient degree too large".into()));
    }
    let disagreements = code
        .points()
        .iter()
        .zip(received)
        .filter(|&(&a, &y)| quotient.eval(a) != y)
        .count();
    if disagreements > e {
        return Err(Error::DecodeFailure(format!(
            "{disagreements} disagreements exceed budget {e}"
        )));
    }
    Ok(quotient)
}
