//! Exact arithmetic backbone: integer linear forms in `x_1 … x_n`, matrices
//! of forms, rational assignments, characteristic polynomials and kernels.
//!
//! No floating point is used for any claim. Characteristic polynomials use
//! the convention `det(M − λ·Id)`, so the leading coefficient is `(−1)^dim`.

mod charpoly;
mod matrix;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::LabelSet;

pub use charpoly::{char_poly, char_poly_integer, integer_roots};
pub use matrix::{kernel_vector, rank_mod_prime, IntMatrix, RatMatrix};
pub use poly::Poly;

pub type Rational = BigRational;

/// Parse `"3"`, `"-2/7"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Render as `p/q` in lowest terms, or `p` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `Σ c_i x_i` with integer coefficients and no constant term.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![0; n] }
    }

    /// The variable `x_i` (1-based).
    pub fn var(n: usize, i: usize) -> Self {
        let mut f = LinearForm::zero(n);
        f.coeffs[i - 1] = 1;
        f
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        LinearForm { coeffs }
    }

    /// `x_S = Σ_{i∈S} x_i`.
    pub fn of_set(n: usize, s: LabelSet) -> Self {
        let mut f = LinearForm::zero(n);
        for l in s.labels() {
            f.coeffs[l - 1] = 1;
        }
        f
    }

    /// `x_1 + ⋯ + x_n`.
    pub fn total(n: usize) -> Self {
        LinearForm { coeffs: vec![1; n] }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_var(&mut self, i: usize, c: i64) {
        self.coeffs[i - 1] += c;
    }

    pub fn add_assign(&mut self, other: &LinearForm) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &LinearForm) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    /// Exact `Σ c_i v_i`.
    pub fn evaluate(&self, v: &RationalAssignment) -> Result<Rational> {
        if v.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: v.len(),
            });
        }
        let mut acc = Rational::zero();
        for (c, x) in self.coeffs.iter().zip(v.values()) {
            if *c != 0 {
                acc += x * Rational::from_integer(BigInt::from(*c));
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for LinearForm {
    /// `x1+x4`, `-x1-x3`, `2x1+x2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Square matrix of linear forms, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    dim: usize,
    nvars: usize,
    entries: Vec<LinearForm>,
}

impl FormMatrix {
    pub fn zeros(dim: usize, nvars: usize) -> Self {
        FormMatrix {
            dim,
            nvars,
            entries: vec![LinearForm::zero(nvars); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, row: usize, col: usize) -> &LinearForm {
        &self.entries[row * self.dim + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut LinearForm {
        &mut self.entries[row * self.dim + col]
    }

    pub fn column_sum(&self, col: usize) -> LinearForm {
        let mut s = LinearForm::zero(self.nvars);
        for r in 0..self.dim {
            s.add_assign(self.get(r, col));
        }
        s
    }

    pub fn row_sum(&self, row: usize) -> LinearForm {
        let mut s = LinearForm::zero(self.nvars);
        for c in 0..self.dim {
            s.add_assign(self.get(row, c));
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// `self + f·Id`.
    pub fn shift_diagonal(&self, f: &LinearForm) -> FormMatrix {
        let mut out = self.clone();
        for k in 0..self.dim {
            out.get_mut(k, k).add_assign(f);
        }
        out
    }

    pub fn evaluate(&self, v: &RationalAssignment) -> Result<RatMatrix> {
        let data = self
            .entries
            .iter()
            .map(|f| f.evaluate(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix::from_vec(self.dim, self.dim, data))
    }

    /// Entry strings in row-major order.
    pub fn rendered(&self) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c).to_string()).collect())
            .collect()
    }

    /// CSV with entries like `-x1-x3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rendered() {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON: `{"dim": d, "nvars": n, "entries": [[[c1..cn], ...], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<Vec<i64>>> = (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.get(r, c).coeffs().to_vec())
                    .collect()
            })
            .collect();
        serde_json::json!({ "dim": self.dim, "nvars": self.nvars, "entries": rows })
    }
}

impl fmt::Debug for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rendered() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Strictly positive exact values for `x_1 … x_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalAssignment {
    values: Vec<Rational>,
}

impl RationalAssignment {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::NonPositiveAssignment);
        }
        Ok(RationalAssignment { values })
    }

    /// Parse `"1/10,2/10,3/10,4/10"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        RationalAssignment::new(values)
    }

    pub fn ones(n: usize) -> Self {
        RationalAssignment {
            values: vec![Rational::one(); n],
        }
    }

    /// `x_i = 1/n` for every `i`.
    pub fn uniform_probabilities(n: usize) -> Self {
        RationalAssignment {
            values: vec![Rational::new(BigInt::one(), BigInt::from(n)); n],
        }
    }

    /// Distinct values `a/b` with small numerators and denominators, drawn
    /// from a seeded generator so identity tests can be replayed.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<Rational> = Vec::with_capacity(n);
        while values.len() < n {
            let a: i64 = rng.gen_range(1..=29);
            let b: i64 = rng.gen_range(1..=9);
            let r = Rational::new(BigInt::from(a), BigInt::from(b));
            if !values.contains(&r) {
                values.push(r);
            }
        }
        RationalAssignment { values }
    }

    /// Random distinct values rescaled to sum to 1.
    pub fn random_probabilities(n: usize, seed: u64) -> Self {
        let raw = RationalAssignment::random(n, seed);
        let total = raw.sum();
        RationalAssignment {
            values: raw.values.into_iter().map(|v| v / &total).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `x_i` (1-based).
    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i - 1]
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn sums_to_one(&self) -> bool {
        self.sum().is_one()
    }
}

impl fmt::Display for RationalAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Multiset of eigenvalues given as linear forms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Spectrum {
    pub entries: Vec<(LinearForm, usize)>,
}

impl Spectrum {
    pub fn new(entries: Vec<(LinearForm, usize)>) -> Self {
        Spectrum { entries }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Multiplicity of an eigenvalue form (zero if absent).
    pub fn multiplicity(&self, form: &LinearForm) -> usize {
        self.entries
            .iter()
            .filter(|(f, _)| f == form)
            .map(|(_, m)| m)
            .sum()
    }

    /// Entries with positive multiplicity, merged by form and sorted.
    pub fn normalized(&self) -> Spectrum {
        let mut merged: Vec<(LinearForm, usize)> = Vec::new();
        for (f, m) in &self.entries {
            if *m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(g, _)| g == f) {
                Some(e) => e.1 += m,
                None => merged.push((f.clone(), *m)),
            }
        }
        merged.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
        Spectrum { entries: merged }
    }

    /// Add `f` to every eigenvalue.
    pub fn shifted(&self, f: &LinearForm) -> Spectrum {
        Spectrum {
            entries: self.entries.iter().map(|(g, m)| (g.plus(f), *m)).collect(),
        }
    }

    /// `(−1)^d ∏ (λ − e(v))^m`, the predicted `det(M − λ·Id)`.
    pub fn char_poly_at(&self, v: &RationalAssignment) -> Result<Poly> {
        let mut p = Poly::constant(Rational::one());
        for (f, m) in &self.entries {
            let root = f.evaluate(v)?;
            let lin = Poly::from_coeffs(vec![-root, Rational::one()]);
            for _ in 0..*m {
                p = p.mul(&lin);
            }
        }
        if self.total_multiplicity() % 2 == 1 {
            p = p.neg();
        }
        Ok(p)
    }
}

/// `true` iff `char_poly(m)` equals the polynomial predicted by `predicted`
/// at the assignment `v`.
pub fn spectrum_matches(
    m: &RatMatrix,
    predicted: &Spectrum,
    v: &RationalAssignment,
) -> Result<bool> {
    if predicted.total_multiplicity() != m.rows() {
        return Ok(false);
    }
    Ok(char_poly(m) == predicted.char_poly_at(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn evaluate_examples() {
        let v = RationalAssignment::new(vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        let f = LinearForm::var(3, 1).plus(&LinearForm::var(3, 2));
        assert_eq!(f.evaluate(&v).unwrap(), q(5, 6));
        assert_eq!(LinearForm::zero(3).evaluate(&v).unwrap(), q(0, 1));
        let g = LinearForm::from_coeffs(vec![-1, 0, -1, 0]);
        assert_eq!(g.evaluate(&RationalAssignment::ones(4)).unwrap(), q(-2, 1));
        assert!(matches!(
            g.evaluate(&v),
            Err(Error::DimensionMismatch {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(
            LinearForm::from_coeffs(vec![-1, 0, -1, 0]).to_string(),
            "-x1-x3"
        );
        assert_eq!(
            LinearForm::from_coeffs(vec![0, 1, 1, 0]).to_string(),
            "x2+x3"
        );
        assert_eq!(
            LinearForm::from_coeffs(vec![-2, -1, 0, 1]).to_string(),
            "-2x1-x2+x4"
        );
        assert_eq!(LinearForm::zero(2).to_string(), "0");
    }

    #[test]
    fn assignment_parsing() {
        let v = RationalAssignment::parse("1/10,2/10,3/10,4/10").unwrap();
        assert_eq!(v.get(2), &q(1, 5));
        assert!(v.sums_to_one());
        assert_eq!(v.to_string(), "1/10,1/5,3/10,2/5");
        assert!(RationalAssignment::parse("1,0").is_err());
        assert!(RationalAssignment::parse("1,x").is_err());
        assert!(RationalAssignment::parse("1/0").is_err());
    }

    #[test]
    fn random_assignments_are_distinct_and_reproducible() {
        let a = RationalAssignment::random(8, 7);
        let b = RationalAssignment::random(8, 7);
        assert_eq!(a, b);
        for i in 0..8 {
            for j in 0..i {
                assert_ne!(a.values()[i], a.values()[j]);
            }
        }
        assert!(RationalAssignment::random_probabilities(5, 3).sums_to_one());
    }

    #[test]
    fn spectrum_comparator() {
        // 1×1: trivially its own eigenvalue.
        let m = RatMatrix::from_vec(1, 1, vec![q(3, 2)]);
        let v = RationalAssignment::new(vec![q(3, 2)]).unwrap();
        let s = Spectrum::new(vec![(LinearForm::var(1, 1), 1)]);
        assert!(spectrum_matches(&m, &s, &v).unwrap());
        let bad = Spectrum::new(vec![(LinearForm::var(1, 1), 2)]);
        assert!(!spectrum_matches(&m, &bad, &v).unwrap());
    }
}
