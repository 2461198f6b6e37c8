//! Prime-field arithmetic, polynomials, and the Reed-Solomon / Reed-Muller
//! codecs.
//!
//! Field elements are canonical `u64` representatives `0..p-1`; only prime
//! fields are supported, with `q = 2` carrying all of the binary-code
//! experiments.

mod rm;
mod rs;

pub use rm::{rm_encode, rm_generator, rm_monomials, RmCode};
pub use rs::{berlekamp_welch, rs_encode, rs_min_distance_exhaustive, vandermonde, RsCode};

use crate::{Error, Result};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=1 << 31).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "modulus {p} outside 2..=2^31"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("modulus {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p fits in 31 bits, so the product fits in u64 without overflow.
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::InvalidParameter("inverse of zero".into()));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A univariate polynomial with ascending coefficients and no trailing zero
/// coefficient (the zero polynomial has an empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c = field.reduce(*c);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients without trailing zeros.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coefficient(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add(self.field.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.field.add(self.coefficient(i), other.coefficient(i)))
            .collect();
        Polynomial::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.field.sub(self.coefficient(i), other.coefficient(i)))
            .collect();
        Polynomial::new(self.field, coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.field.add(coeffs[i + j], self.field.mul(a, b));
            }
        }
        Polynomial::new(self.field, coeffs)
    }

    pub fn scale(&self, s: u64) -> Polynomial {
        Polynomial::new(
            self.field,
            self.coeffs.iter().map(|&c| self.field.mul(c, s)).collect(),
        )
    }

    /// Quotient and remainder of division by `divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if divisor.is_zero() {
            return Err(Error::InvalidParameter("division by zero polynomial".into()));
        }
        let d_deg = divisor.degree().unwrap();
        let d_lead_inv = self.field.inv(divisor.coeffs[d_deg])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(d_deg)];
        while rem.len() > d_deg {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - d_deg;
            let factor = self.field.mul(lead, d_lead_inv);
            quot[shift] = factor;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = self.field.sub(rem[shift + i], self.field.mul(factor, dc));
            }
            // The top coefficient cancels exactly, so the length shrinks.
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        Ok((
            Polynomial::new(self.field, quot),
            Polynomial::new(self.field, rem),
        ))
    }

    /// Unique interpolant of degree `< points.len()` through the given
    /// `(x, y)` pairs with pairwise distinct `x`.
    pub fn interpolate(field: PrimeField, points: &[(u64, u64)]) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(field);
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut basis = Polynomial::new(field, vec![1]);
            let mut denom = 1u64;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                if xi == xj {
                    return Err(Error::InvalidParameter(
                        "interpolation points must be distinct".into(),
                    ));
                }
                basis = basis.mul(&Polynomial::new(field, vec![field.neg(xj), 1]));
                denom = field.mul(denom, field.sub(xi, xj));
            }
            acc = acc.add(&basis.scale(field.mul(yi, field.inv(denom)?)));
        }
        Ok(acc)
    }
}

/// Reduced row echelon solver for homogeneous systems over `F_p`; returns
/// one nonzero kernel vector (first free variable set to 1) or `None` when
/// the kernel is trivial.
pub(crate) fn homogeneous_kernel_vector(
    field: PrimeField,
    mut rows: Vec<Vec<u64>>,
    unknowns: usize,
) -> Option<Vec<u64>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; unknowns];
    let mut pivot_row = 0;
    for col in 0..unknowns {
        if pivot_row == rows.len() {
            break;
        }
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = field.inv(rows[pivot_row][col]).expect("nonzero pivot");
        for cell in rows[pivot_row].iter_mut() {
            *cell = field.mul(*cell, inv);
        }
        let pivot_values = rows[pivot_row].clone();
        for (r2, row) in rows.iter_mut().enumerate() {
            if r2 != pivot_row && row[col] != 0 {
                let factor = row[col];
                for (cell, &pv) in row.iter_mut().zip(&pivot_values) {
                    *cell = field.sub(*cell, field.mul(factor, pv));
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
    }
    let free = (0..unknowns).find(|&c| pivot_of_col[c].is_none())?;
    let mut solution = vec![0u64; unknowns];
    solution[free] = 1;
    for col in 0..unknowns {
        if let Some(r) = pivot_of_col[col] {
            solution[col] = field.neg(rows[r][free]);
        }
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primality_screening() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn polynomial_normalization() {
        let f = PrimeField::new(5).unwrap();
        let p = Polynomial::new(f, vec![1, 2, 0, 0]);
        assert_eq!(p.coefficients(), &[1, 2]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::new(f, vec![0, 0]).is_zero());
    }

    #[test]
    fn division_round_trip() {
        let f = PrimeField::new(7).unwrap();
        let a = Polynomial::new(f, vec![3, 0, 2, 5]);
        let b = Polynomial::new(f, vec![6, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn interpolation_recovers() {
        let f = PrimeField::new(7).unwrap();
        let p = Polynomial::new(f, vec![1, 1]);
        let points: Vec<(u64, u64)> = (0..2).map(|x| (x, p.eval(x))).collect();
        assert_eq!(Polynomial::interpolate(f, &points).unwrap(), p);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..7, b in 0u64..7, c in 0u64..7) {
            let f = PrimeField::new(7).unwrap();
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            if a != 0 {
                let inv = f.inv(a).unwrap();
                prop_assert_eq!(f.mul(a, inv), 1);
            }
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
