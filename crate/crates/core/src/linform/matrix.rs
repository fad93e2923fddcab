use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::charpoly::{inv_mod, mul_mod, reduce_mod};
use super::{format_rational, Rational};
use crate::error::{Error, Result};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        (0..self.cols)
            .map(|c| (0..self.rows).fold(Rational::zero(), |a, r| a + self.get(r, c)))
            .collect()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.rows)
            .map(|r| (0..self.cols).fold(Rational::zero(), |a, c| a + self.get(r, c)))
            .collect()
    }

    /// Clear denominators: returns `(A, D)` with `A = D·self` integral and
    /// `D` the least common denominator.
    pub fn to_integer(&self) -> (IntMatrix, BigInt) {
        let d = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let data = self
            .data
            .iter()
            .map(|x| x.numer() * (&d / x.denom()))
            .collect();
        (
            IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            d,
        )
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format_rational(self.get(r, c)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub(crate) fn reduced(&self, p: u64) -> Vec<u64> {
        self.data.iter().map(|x| reduce_mod(x, p)).collect()
    }

    /// `log2` of a bound on the absolute value of every coefficient of the
    /// characteristic polynomial: `n + Σ_j log2 max(1, ‖column_j‖₂)`.
    /// Follows from Hadamard's inequality applied to principal minors.
    pub(crate) fn charpoly_coeff_bits(&self) -> f64 {
        let mut bits = self.rows as f64;
        for c in 0..self.cols {
            let mut sq = BigInt::zero();
            for r in 0..self.rows {
                let x = self.get(r, c);
                sq += x * x;
            }
            if sq > BigInt::one() {
                bits += 0.5 * bigint_log2(&sq);
            }
        }
        bits
    }

    /// Largest absolute row sum, a bound on every eigenvalue's modulus.
    pub fn max_abs_row_sum(&self) -> BigInt {
        (0..self.rows)
            .map(|r| (0..self.cols).fold(BigInt::zero(), |a, c| a + self.get(r, c).abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

fn bigint_log2(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 52;
    let top: BigInt = x >> shift;
    (top.iter_u64_digits().next().unwrap_or(0) as f64).log2() + shift as f64
}

/// Rank of an integer matrix modulo the prime `p`. Never exceeds the
/// rank over the rationals.
pub fn rank_mod_prime(m: &IntMatrix, p: u64) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.reduced(p);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        for k in 0..cols {
            a.swap(piv * cols + k, rank * cols + k);
        }
        let inv = inv_mod(a[rank * cols + c], p);
        for r in (rank + 1)..rows {
            let f = mul_mod(a[r * cols + c], inv, p);
            if f == 0 {
                continue;
            }
            for k in c..cols {
                let sub = mul_mod(f, a[rank * cols + k], p);
                a[r * cols + k] = (a[r * cols + k] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The right null vector of a rank-deficient-by-one square matrix,
/// normalized so its first nonzero entry is 1.
///
/// Fraction-free (Bareiss) elimination on the integer-scaled matrix, then
/// exact back substitution.
pub fn kernel_vector(m: &RatMatrix) -> Result<Vec<Rational>> {
    let (a0, _) = m.to_integer();
    let (rows, cols) = (a0.rows, a0.cols);
    let mut a = a0.data;
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            for k in 0..cols {
                a.swap(piv * cols + k, r * cols + k);
            }
        }
        let p = a[r * cols + c].clone();
        for i in (r + 1)..rows {
            let lead = a[i * cols + c].clone();
            for j in (c + 1)..cols {
                let v = &p * &a[i * cols + j] - &lead * &a[r * cols + j];
                a[i * cols + j] = v / &prev;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    let nullity = cols - pivots.len();
    if nullity != 1 {
        return Err(Error::KernelDimension(nullity));
    }
    let free = (0..cols)
        .find(|c| !pivots.contains(c))
        .expect("one free column");
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::one();
    for (k, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::zero();
        for j in (c + 1)..cols {
            let coef = &a[k * cols + j];
            if !coef.is_zero() && !x[j].is_zero() {
                acc += Rational::from_integer(coef.clone()) * &x[j];
            }
        }
        x[c] = -acc / Rational::from_integer(a[k * cols + c].clone());
    }
    let lead = x
        .iter()
        .find(|v| !v.is_zero())
        .cloned()
        .expect("kernel vector is nonzero");
    Ok(x.into_iter().map(|v| v / &lead).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> Rational {
        Rational::from_integer(BigInt::from(a))
    }

    #[test]
    fn kernel_of_zero_1x1() {
        let m = RatMatrix::from_vec(1, 1, vec![q(0)]);
        assert_eq!(kernel_vector(&m).unwrap(), vec![q(1)]);
    }

    #[test]
    fn kernel_of_generator() {
        // Column sums zero, kernel (a, b) with -a·2 + b·3 = 0.
        let m = RatMatrix::from_vec(2, 2, vec![q(-2), q(3), q(2), q(-3)]);
        let k = kernel_vector(&m).unwrap();
        assert_eq!(
            k,
            vec![q(1), Rational::new(BigInt::from(2), BigInt::from(3))]
        );
        assert!(m.mul_vec(&k).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn kernel_dimension_errors() {
        assert_eq!(
            kernel_vector(&RatMatrix::identity(3)).unwrap_err(),
            Error::KernelDimension(0)
        );
        assert_eq!(
            kernel_vector(&RatMatrix::zeros(2, 2)).unwrap_err(),
            Error::KernelDimension(2)
        );
    }

    #[test]
    fn modular_rank() {
        let m = RatMatrix::from_vec(
            3,
            3,
            vec![q(1), q(2), q(3), q(2), q(4), q(6), q(0), q(1), q(5)],
        );
        let (a, _) = m.to_integer();
        assert_eq!(rank_mod_prime(&a, 1_000_000_007), 2);
    }
}
