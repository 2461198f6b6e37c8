//! EXIT functions on the erasure channel: exact pattern enumeration, Monte
//! Carlo estimation, the area theorem in exact rational arithmetic,
//! influences of coordinates, the Margulis-Russo identity, and
//! sharp-threshold measurements.
//!
//! The exact machinery works with the bad-pattern set of a bit: the monotone
//! family of erasure patterns (excluding the bit itself) from which the
//! bit-MAP decoder cannot recover the bit indirectly. Its measure under the
//! product-`p` distribution is the bit's EXIT value `h_i(p)`.

use crate::cli::{seed_stream, SplitMix64};
use crate::map_erasure::{generator_columns, BinaryLinearCode, SpanBasis};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Cap on block length for exhaustive pattern enumeration (`2^(N-1)`
/// patterns).
pub const EXACT_ENUMERATION_MAX_BLOCK: usize = 22;

/// Bisection tolerance for quantiles of exact EXIT polynomials.
pub const QUANTILE_BISECTION_TOLERANCE: f64 = 1e-10;

/// Exact representation of `h_i(p)` over the basis `p^w (1-p)^(N-1-w)`:
/// `weight_counts[w]` is the number of bad patterns of size `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitPolynomial {
    block_length: usize,
    bit: usize,
    weight_counts: Vec<u64>,
}

impl ExitPolynomial {
    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn bit(&self) -> usize {
        self.bit
    }

    /// `weight_counts[w]` for `w = 0..N-1`.
    pub fn weight_counts(&self) -> &[u64] {
        &self.weight_counts
    }

    /// `h_i(p) = sum_w c_w p^w (1-p)^(N-1-w)`.
    pub fn eval(&self, p: f64) -> f64 {
        let coords = self.block_length - 1;
        self.weight_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| c as f64 * p.powi(w as i32) * (1.0 - p).powi((coords - w) as i32))
            .sum()
    }

    /// Symbolic derivative of [`ExitPolynomial::eval`].
    pub fn derivative(&self, p: f64) -> f64 {
        let coords = self.block_length - 1;
        let mut total = 0.0;
        for (w, &c) in self.weight_counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as f64;
            if w > 0 {
                total += c * w as f64 * p.powi(w as i32 - 1) * (1.0 - p).powi((coords - w) as i32);
            }
            if w < coords {
                total -=
                    c * (coords - w) as f64 * p.powi(w as i32) * (1.0 - p).powi((coords - w) as i32 - 1);
            }
        }
        total
    }
}

/// A sampled EXIT curve with per-point standard errors.
#[derive(Clone, Debug)]
pub struct ExitCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    stderr: Vec<f64>,
}

impl ExitCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() != stderr.len() {
            return Err(Error::DimensionMismatch(
                "grid, values and stderr lengths differ".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "grid must be nondecreasing".into(),
            ));
        }
        if values.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::InvalidParameter("values must lie in [0,1]".into()));
        }
        if stderr.iter().any(|s| *s < 0.0) {
            return Err(Error::InvalidParameter("stderr must be nonnegative".into()));
        }
        Ok(ExitCurve {
            grid,
            values,
            stderr,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn stderr(&self) -> &[f64] {
        &self.stderr
    }
}

/// The measure of the pivotal set of coordinate `j` for bit `i` at erasure
/// probability `p`.
#[derive(Clone, Debug)]
pub struct InfluenceReport {
    pub bit: usize,
    pub coordinate: usize,
    pub p: f64,
    pub influence: f64,
}

fn check_exact_bounds(code: &BinaryLinearCode, i: usize) -> Result<()> {
    let n = code.block_length();
    if i >= n {
        return Err(Error::InvalidParameter(format!(
            "bit index {i} outside 0..{n}"
        )));
    }
    if n > EXACT_ENUMERATION_MAX_BLOCK {
        return Err(Error::ResourceLimit(format!(
            "exact enumeration capped at block length {EXACT_ENUMERATION_MAX_BLOCK}; \
             use the Monte Carlo estimator"
        )));
    }
    Ok(())
}

/// Single-word reduced basis keyed by pivot position, supporting O(1) undo.
struct SmallBasis {
    slots: [u64; 64],
}

impl SmallBasis {
    fn new() -> Self {
        SmallBasis { slots: [0; 64] }
    }

    fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let pivot = 63 - v.leading_zeros() as usize;
            if self.slots[pivot] == 0 {
                break;
            }
            v ^= self.slots[pivot];
        }
        v
    }

    fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Inserts `v`; returns the occupied pivot slot, or `None` when `v` was
    /// already in the span.
    fn insert(&mut self, v: u64) -> Option<usize> {
        let reduced = self.reduce(v);
        if reduced == 0 {
            return None;
        }
        let pivot = 63 - reduced.leading_zeros() as usize;
        self.slots[pivot] = reduced;
        Some(pivot)
    }

    fn remove(&mut self, pivot: usize) {
        self.slots[pivot] = 0;
    }
}

fn small_columns(code: &BinaryLinearCode) -> Vec<u64> {
    generator_columns(code)
        .into_iter()
        .map(|words| words[0])
        .collect()
}

/// Depth-first enumeration of erasure patterns over `others`, pruning whole
/// subtrees once the target column is spanned by the chosen unerased columns
/// (every completion is then recoverable).
fn count_bad_patterns(
    others: &[u64],
    target: u64,
    basis: &mut SmallBasis,
    depth: usize,
    erased: usize,
    counts: &mut [u64],
) {
    if basis.contains(target) {
        return;
    }
    if depth == others.len() {
        counts[erased] += 1;
        return;
    }
    count_bad_patterns(others, target, basis, depth + 1, erased + 1, counts);
    let slot = basis.insert(others[depth]);
    count_bad_patterns(others, target, basis, depth + 1, erased, counts);
    if let Some(pivot) = slot {
        basis.remove(pivot);
    }
}

/// Exact EXIT polynomial of bit `i`, by enumeration of all `2^(N-1)` erasure
/// patterns over the other coordinates.
pub fn exit_exact(code: &BinaryLinearCode, i: usize) -> Result<ExitPolynomial> {
    check_exact_bounds(code, i)?;
    let n = code.block_length();
    let columns = small_columns(code);
    let others: Vec<u64> = (0..n).filter(|&j| j != i).map(|j| columns[j]).collect();
    let mut counts = vec![0u64; n];
    let mut basis = SmallBasis::new();
    count_bad_patterns(&others, columns[i], &mut basis, 0, 0, &mut counts);
    Ok(ExitPolynomial {
        block_length: n,
        bit: i,
        weight_counts: counts,
    })
}

/// Exact EXIT polynomials for every bit of the code.
pub fn exit_exact_all(code: &BinaryLinearCode) -> Result<Vec<ExitPolynomial>> {
    (0..code.block_length()).map(|i| exit_exact(code, i)).collect()
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::from(1);
    for t in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// `∫_0^1 h_i(p) dp` in exact rational arithmetic:
/// `sum_w c_w / (N * C(N-1, w))`.
pub fn area(poly: &ExitPolynomial) -> BigRational {
    let n = poly.block_length;
    let mut total = BigRational::zero();
    for (w, &c) in poly.weight_counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let denom = BigInt::from(n as u64) * binomial_big(n - 1, w);
        total += BigRational::new(BigInt::from(c), denom);
    }
    total
}

/// Exact average of per-bit areas; equals `K/N` by the area theorem.
pub fn average_area(polys: &[ExitPolynomial]) -> BigRational {
    let mut total = BigRational::zero();
    for poly in polys {
        total += area(poly);
    }
    total / BigRational::from(BigInt::from(polys.len() as u64))
}

/// What a Monte Carlo run estimates: one bit's EXIT value or the average over
/// all bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitTarget {
    Bit(usize),
    Average,
}

/// Monte Carlo EXIT curve. Each trial erases every coordinate independently
/// with probability `p` (the tracked bit's own coordinate is ignored) and
/// records whether indirect recovery fails. `stderr = sqrt(v(1-v)/trials)`.
pub fn exit_mc(
    code: &BinaryLinearCode,
    target: ExitTarget,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<ExitCurve> {
    exit_mc_sharded(code, target, grid, trials, seed, 1)
}

/// Worker-sharded variant of [`exit_mc`]: trial `t` of every grid point is
/// processed by worker `t mod workers`, each worker drawing from its own
/// seeded stream, and partial sums merge in worker order. Fixed `workers`
/// makes the estimate bit-reproducible.
pub fn exit_mc_sharded(
    code: &BinaryLinearCode,
    target: ExitTarget,
    grid: &[f64],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<ExitCurve> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if workers == 0 {
        return Err(Error::InvalidParameter("need at least one worker".into()));
    }
    if let ExitTarget::Bit(i) = target {
        if i >= code.block_length() {
            return Err(Error::InvalidParameter(format!(
                "bit index {i} outside 0..{}",
                code.block_length()
            )));
        }
    }
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidParameter("grid values outside [0,1]".into()));
    }
    let columns = generator_columns(code);
    let worker_sums: Vec<Vec<f64>> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let columns = &columns;
            handles.push(scope.spawn(move || {
                let mut rng = seed_stream(seed, w as u64);
                let mut sums = vec![0.0f64; grid.len()];
                let trial_count = (w as u64..trials).step_by(workers).count();
                for (g, &p) in grid.iter().enumerate() {
                    let mut acc = 0.0;
                    for _ in 0..trial_count {
                        acc += sample_indicator(code, columns, target, p, &mut rng);
                    }
                    sums[g] = acc;
                }
                sums
            }));
        }
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut values = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    for g in 0..grid.len() {
        let total: f64 = worker_sums.iter().map(|s| s[g]).sum();
        let v = total / trials as f64;
        values.push(v.clamp(0.0, 1.0));
        stderr.push((v.clamp(0.0, 1.0) * (1.0 - v.clamp(0.0, 1.0)) / trials as f64).sqrt());
    }
    ExitCurve::new(grid.to_vec(), values, stderr)
}

/// One sampled indicator: 1.0 when bit recovery fails (averaged over bits in
/// `Average` mode). Always draws exactly `N` uniforms.
fn sample_indicator(
    code: &BinaryLinearCode,
    columns: &[Vec<u64>],
    target: ExitTarget,
    p: f64,
    rng: &mut SplitMix64,
) -> f64 {
    let n = code.block_length();
    let mut erased = vec![false; n];
    for flag in erased.iter_mut() {
        *flag = rng.next_f64() < p;
    }
    match target {
        ExitTarget::Bit(i) => {
            let mut basis = SpanBasis::new();
            for j in 0..n {
                if j != i && !erased[j] {
                    let _ = basis.insert(&columns[j], false);
                }
            }
            f64::from(u8::from(!basis.contains(&columns[i])))
        }
        ExitTarget::Average => {
            let mut shared = SpanBasis::new();
            for j in 0..n {
                if !erased[j] {
                    let _ = shared.insert(&columns[j], false);
                }
            }
            let mut failures = 0usize;
            let mut scratch = SpanBasis::new();
            for i in 0..n {
                let unrecoverable = if erased[i] {
                    !shared.contains(&columns[i])
                } else {
                    scratch.clear();
                    for j in 0..n {
                        if j != i && !erased[j] {
                            let _ = scratch.insert(&columns[j], false);
                        }
                    }
                    !scratch.contains(&columns[i])
                };
                if unrecoverable {
                    failures += 1;
                }
            }
            failures as f64 / n as f64
        }
    }
}

/// Number of pivotal patterns of each size: entry `w` counts sets
/// `B ⊆ [N] \ {i,j}` of size `w` for which toggling `j` toggles membership
/// of the pattern in the bad set of `i`.
pub(crate) fn pivotal_weight_counts(
    code: &BinaryLinearCode,
    i: usize,
    j: usize,
) -> Result<Vec<u64>> {
    check_exact_bounds(code, i)?;
    let n = code.block_length();
    if j == i || j >= n {
        return Err(Error::InvalidParameter(format!(
            "coordinate {j} must differ from bit {i} and lie in 0..{n}"
        )));
    }
    let columns = small_columns(code);
    let rest: Vec<u64> = (0..n)
        .filter(|&t| t != i && t != j)
        .map(|t| columns[t])
        .collect();
    let mut counts = vec![0u64; n.max(2) - 1];
    // Enumerate B over the remaining coordinates; membership with and
    // without j erased differs exactly on the pivotal sets.
    for mask in 0u32..1 << rest.len() {
        let mut with_j = SmallBasis::new();
        let mut without_j = SmallBasis::new();
        for (slot, &col) in rest.iter().enumerate() {
            if mask >> slot & 1 == 0 {
                // Unerased in both worlds.
                with_j.insert(col);
                without_j.insert(col);
            }
        }
        // "without j erased" additionally sees column j.
        without_j.insert(columns[j]);
        let member_with_j_erased = !with_j.contains(columns[i]);
        let member_without_j_erased = !without_j.contains(columns[i]);
        if member_with_j_erased != member_without_j_erased {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

fn pivotal_measure(counts: &[u64], coords: usize, p: f64) -> f64 {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| c as f64 * p.powi(w as i32) * (1.0 - p).powi((coords - 1 - w) as i32))
        .sum()
}

/// Influence of coordinate `j` on the recovery of bit `i` at erasure
/// probability `p`: the measure of the pivotal set.
pub fn influence(code: &BinaryLinearCode, i: usize, j: usize, p: f64) -> Result<InfluenceReport> {
    let counts = pivotal_weight_counts(code, i, j)?;
    let coords = code.block_length() - 1;
    Ok(InfluenceReport {
        bit: i,
        coordinate: j,
        p,
        influence: pivotal_measure(&counts, coords, p),
    })
}

/// Residuals of the Margulis-Russo identity at `(i, p)`.
#[derive(Clone, Debug)]
pub struct RussoReport {
    /// `|d/dp h_i(p) - total influence|`.
    pub residual: f64,
    /// Largest coordinatewise gap `|∂h_i/∂p_j - influence_j|`.
    pub coordinate_residual: f64,
}

/// Checks `d/dp h_i(p) = sum_j influence_j` with the derivative taken
/// symbolically from the weight counts, and cross-checks the partial
/// derivative formula coordinate by coordinate at the uniform point.
pub fn russo_check(code: &BinaryLinearCode, i: usize, p: f64) -> Result<RussoReport> {
    check_exact_bounds(code, i)?;
    let n = code.block_length();
    let coords = n - 1;
    let poly = exit_exact(code, i)?;

    // Per-coordinate pattern counts of the bad set, split on whether the
    // coordinate is erased: the partial derivative in p_j follows directly.
    let columns = small_columns(code);
    let others: Vec<usize> = (0..n).filter(|&t| t != i).collect();
    let mut with_j = vec![vec![0u64; n]; n];
    let mut without_j = vec![vec![0u64; n]; n];
    for mask in 0u32..1 << coords {
        let mut basis = SmallBasis::new();
        for (slot, &t) in others.iter().enumerate() {
            if mask >> slot & 1 == 0 {
                basis.insert(columns[t]);
            }
        }
        if basis.contains(columns[i]) {
            continue;
        }
        let size = mask.count_ones() as usize;
        for (slot, &t) in others.iter().enumerate() {
            if mask >> slot & 1 == 1 {
                with_j[t][size] += 1;
            } else {
                without_j[t][size] += 1;
            }
        }
    }

    let mut total_influence = 0.0;
    let mut coordinate_residual: f64 = 0.0;
    for &j in &others {
        let inf = pivotal_measure(&pivotal_weight_counts(code, i, j)?, coords, p);
        total_influence += inf;
        let mut partial = 0.0;
        for w in 0..n {
            if with_j[j][w] > 0 {
                partial += with_j[j][w] as f64
                    * p.powi(w as i32 - 1)
                    * (1.0 - p).powi((coords - w) as i32);
            }
            if without_j[j][w] > 0 && coords > w {
                partial -= without_j[j][w] as f64
                    * p.powi(w as i32)
                    * (1.0 - p).powi((coords - 1 - w) as i32);
            }
        }
        coordinate_residual = coordinate_residual.max((partial - inf).abs());
    }
    Ok(RussoReport {
        residual: (poly.derivative(p) - total_influence).abs(),
        coordinate_residual,
    })
}

/// A pair of quantiles of the EXIT transition and their gap.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdReport {
    pub p_low: f64,
    pub p_high: f64,
    pub width: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&eps) || eps == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon {eps} outside (0, 0.5]"
        )));
    }
    Ok(())
}

/// Quantiles `p_eps` and `p_(1-eps)` of the average of exact EXIT
/// polynomials, by bisection on the monotone function.
pub fn threshold_width_exact(polys: &[ExitPolynomial], eps: f64) -> Result<ThresholdReport> {
    check_eps(eps)?;
    if polys.is_empty() {
        return Err(Error::InvalidParameter("no polynomials given".into()));
    }
    let h = |p: f64| polys.iter().map(|poly| poly.eval(p)).sum::<f64>() / polys.len() as f64;
    let quantile = |t: f64| -> Result<f64> {
        if h(1.0) < t {
            return Err(Error::UndefinedQuantile(format!(
                "curve peaks at {} below level {t}",
                h(1.0)
            )));
        }
        if h(0.0) >= t {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > QUANTILE_BISECTION_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if h(mid) >= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    };
    let p_low = quantile(eps)?;
    let p_high = quantile(1.0 - eps)?;
    Ok(ThresholdReport {
        p_low,
        p_high,
        width: p_high - p_low,
    })
}

/// Quantiles of a sampled curve by monotone interpolation: values are made
/// nondecreasing with a running maximum and the first crossing of each level
/// is located linearly (a zero-length grid segment yields an exact step).
pub fn threshold_width_curve(curve: &ExitCurve, eps: f64) -> Result<ThresholdReport> {
    check_eps(eps)?;
    let monotone: Vec<f64> = curve
        .values
        .iter()
        .scan(0.0f64, |acc, &v| {
            *acc = acc.max(v);
            Some(*acc)
        })
        .collect();
    let quantile = |t: f64| -> Result<f64> {
        let s = monotone
            .iter()
            .position(|&v| v >= t)
            .ok_or_else(|| Error::UndefinedQuantile(format!("curve never reaches {t}")))?;
        if s == 0 || curve.grid[s] == curve.grid[s - 1] {
            return Ok(curve.grid[s]);
        }
        let (g0, g1) = (curve.grid[s - 1], curve.grid[s]);
        let (v0, v1) = (monotone[s - 1], monotone[s]);
        Ok(g0 + (t - v0) * (g1 - g0) / (v1 - v0))
    };
    let p_low = quantile(eps)?;
    let p_high = quantile(1.0 - eps)?;
    Ok(ThresholdReport {
        p_low,
        p_high,
        width: p_high - p_low,
    })
}

/// Outcome of probing the sharp-threshold inequality
/// `h'(p) >= C log2(N) h(p)(1 - h(p))` on a grid.
#[derive(Clone, Debug)]
pub enum SharpThresholdReport {
    /// The equal-influence hypothesis fails; two witnessing coordinates.
    NotApplicable { coordinates: (usize, usize) },
    /// Largest constant satisfying the inequality across the grid.
    Feasible { constant: f64 },
    /// No positive constant works.
    Infeasible,
}

/// Verifies the equal-influence hypothesis exactly (pivotal counts must
/// coincide for every coordinate) and reports the largest feasible constant
/// across the grid, skipping points where `h(1-h)` vanishes.
pub fn sharp_threshold_inequality_check(
    code: &BinaryLinearCode,
    i: usize,
    p_grid: &[f64],
) -> Result<SharpThresholdReport> {
    check_exact_bounds(code, i)?;
    let n = code.block_length();
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let reference = pivotal_weight_counts(code, i, others[0])?;
    for &j in &others[1..] {
        if pivotal_weight_counts(code, i, j)? != reference {
            return Ok(SharpThresholdReport::NotApplicable {
                coordinates: (others[0], j),
            });
        }
    }
    let poly = exit_exact(code, i)?;
    let log_n = (n as f64).log2();
    let mut best: Option<f64> = None;
    for &p in p_grid {
        let h = poly.eval(p);
        let spread = h * (1.0 - h);
        if spread <= 1e-15 {
            continue;
        }
        let ratio = poly.derivative(p) / (log_n * spread);
        if ratio <= 0.0 {
            return Ok(SharpThresholdReport::Infeasible);
        }
        best = Some(best.map_or(ratio, |b: f64| b.min(ratio)));
    }
    match best {
        Some(constant) => Ok(SharpThresholdReport::Feasible { constant }),
        None => Ok(SharpThresholdReport::Feasible {
            constant: f64::INFINITY,
        }),
    }
}
