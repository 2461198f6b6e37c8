//! Reed-Muller codes: evaluations of bounded-degree multivariate polynomials
//! over all of `F_q^m`.

use super::PrimeField;
use crate::gf2::GF2Matrix;
use crate::{Error, Result};

/// `RM(q, m, r)` with the evaluation order fixed to integer counting over
/// `F_q^m`, the first variable being the most significant digit.
#[derive(Clone, Debug)]
pub struct RmCode {
    field: PrimeField,
    m: u32,
    r: u32,
}

impl RmCode {
    pub fn new(q: u64, m: u32, r: u32) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if m == 0 {
            return Err(Error::InvalidParameter("need at least one variable".into()));
        }
        let block = (q as f64).powi(m as i32);
        if block > 1e7 {
            return Err(Error::ResourceLimit(format!(
                "block length q^m = {block} too large"
            )));
        }
        Ok(RmCode { field, m, r })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn variables(&self) -> u32 {
        self.m
    }

    pub fn degree_bound(&self) -> u32 {
        self.r
    }

    pub fn block_length(&self) -> usize {
        (self.field.modulus() as usize).pow(self.m)
    }

    /// The `t`-th point of `F_q^m` in evaluation order.
    pub fn point(&self, t: usize) -> Vec<u64> {
        let q = self.field.modulus() as usize;
        let mut digits = vec![0u64; self.m as usize];
        let mut rest = t;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % q) as u64;
            rest /= q;
        }
        digits
    }

    /// Index of a point in evaluation order; inverse of [`RmCode::point`].
    pub fn point_index(&self, coords: &[u64]) -> usize {
        let q = self.field.modulus() as usize;
        coords
            .iter()
            .fold(0usize, |acc, &d| acc * q + d as usize)
    }
}

/// Evaluates a polynomial given as `(exponent vector, coefficient)` terms at
/// every point of `F_q^m` in evaluation order.
///
/// Every term must have total degree at most `r`; for `q = 2` the exponents
/// must be multilinear (`X^2 = X` on `F_2`, so canonical representatives keep
/// the rows distinct).
pub fn rm_encode(code: &RmCode, terms: &[(Vec<u32>, u64)]) -> Result<Vec<u64>> {
    let field = code.field();
    for (exponents, _) in terms {
        if exponents.len() != code.variables() as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} variables",
                exponents.len(),
                code.variables()
            )));
        }
        let total: u32 = exponents.iter().sum();
        if total > code.degree_bound() {
            return Err(Error::InvalidParameter(format!(
                "total degree {total} exceeds bound {}",
                code.degree_bound()
            )));
        }
        if field.modulus() == 2 && exponents.iter().any(|&e| e > 1) {
            return Err(Error::InvalidParameter(
                "exponents over F_2 must be multilinear".into(),
            ));
        }
    }
    let mut output = Vec::with_capacity(code.block_length());
    for t in 0..code.block_length() {
        let coords = code.point(t);
        let mut value = 0u64;
        for (exponents, coeff) in terms {
            let mut term = field.reduce(*coeff);
            for (x, &e) in coords.iter().zip(exponents) {
                if e > 0 {
                    term = field.mul(term, field.pow(*x, e as u64));
                }
            }
            value = field.add(value, term);
        }
        output.push(value);
    }
    Ok(output)
}

/// Multilinear monomials of total degree at most `r` over `m` variables,
/// ordered by degree and then lexicographically; each monomial is the sorted
/// list of participating variable indices.
pub fn rm_monomials(m: u32, r: u32) -> Vec<Vec<usize>> {
    let m = m as usize;
    let mut monomials = Vec::new();
    for degree in 0..=(r as usize).min(m) {
        let mut combo: Vec<usize> = (0..degree).collect();
        loop {
            monomials.push(combo.clone());
            // Rightmost position that can still advance.
            let Some(i) = (0..degree).rev().find(|&i| combo[i] < m - degree + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..degree {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    monomials
}

/// Generator of `RM(2, m, r)`: one row per multilinear monomial of degree at
/// most `r`, in `rm_monomials` order.
pub fn rm_generator(code: &RmCode) -> Result<GF2Matrix> {
    if code.field().modulus() != 2 {
        return Err(Error::Unsupported(
            "binary generator matrices require q = 2".into(),
        ));
    }
    let monomials = rm_monomials(code.variables(), code.degree_bound());
    let block = code.block_length();
    let mut g = GF2Matrix::zeros(monomials.len(), block);
    for (row, monomial) in monomials.iter().enumerate() {
        let mut exponents = vec![0u32; code.variables() as usize];
        for &v in monomial {
            exponents[v] = 1;
        }
        let values = rm_encode(code, &[(exponents, 1)])?;
        for (col, &v) in values.iter().enumerate() {
            if v == 1 {
                g.set(row, col, true);
            }
        }
    }
    Ok(g)
}
