//! Dense matrices with Novikov-series entries.

use crate::error::{Error, Result};
use crate::novikov::{Complex, NovikovSeries};
use crate::rat::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    data: Vec<NovikovSeries>,
}

impl SeriesMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SeriesMatrix { rows, cols, data: vec![NovikovSeries::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { NovikovSeries::one() } else { NovikovSeries::zero() })
    }

    pub fn scalar(s: NovikovSeries) -> Self {
        SeriesMatrix { rows: 1, cols: 1, data: vec![s] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NovikovSeries) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SeriesMatrix { rows, cols, data }
    }

    /// Matrix with the given constant complex entries, row-major.
    pub fn from_complex(rows: usize, cols: usize, entries: &[Complex]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| NovikovSeries::constant(entries[i * cols + j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NovikovSeries {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: NovikovSeries) {
        self.data[i * self.cols + j] = s;
    }

    pub fn entries(&self) -> &[NovikovSeries] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(NovikovSeries::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Mismatch(format!(
                "shapes {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Ok(SeriesMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(NovikovSeries::neg)
    }

    pub fn map(&self, f: impl Fn(&NovikovSeries) -> NovikovSeries) -> Self {
        SeriesMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &NovikovSeries) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn truncate(&self, cutoff: Rational) -> Self {
        self.map(|x| x.truncate(cutoff))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = NovikovSeries::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.is_zero() && a.cutoff().is_none() || b.is_zero() && b.cutoff().is_none() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        }))
    }

    pub fn max_coeff_below(&self, bound: Rational) -> f64 {
        self.data.iter().map(|s| s.max_coeff_below(bound)).fold(0.0, f64::max)
    }

    /// Minimum over entries of the guaranteed valuation; `None` if every entry is exactly zero.
    pub fn valuation_lower_bound(&self) -> Option<Rational> {
        self.data.iter().filter_map(NovikovSeries::valuation_lower_bound).min()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }
}
