use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Spin;

/// Values closer than this are treated as one alphabet letter.
pub const ALPHABET_TOLERANCE: f64 = 1e-12;

/// Finite update alphabet: the sorted achievable cumulative values
/// `0 <= a_1 < ... < a_m = 1` with weights `a_i - a_{i-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlphabet {
    values: Vec<f64>,
    weights: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl FiniteAlphabet {
    /// Deduplicates (within [`ALPHABET_TOLERANCE`]) and sorts; `1` is always included.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(0.0..=1.0).contains(v) || v.is_nan()) {
            return Err(Error::Parameter("alphabet values must lie in [0, 1]".into()));
        }
        values.push(1.0);
        values.sort_by(f64::total_cmp);
        let mut merged: Vec<f64> = Vec::with_capacity(values.len());
        for v in values {
            match merged.last_mut() {
                Some(last) if v - *last <= ALPHABET_TOLERANCE => *last = last.max(v),
                _ => merged.push(v),
            }
        }
        if let Some(last) = merged.last_mut() {
            *last = 1.0;
        }
        Ok(Self::with_weights(merged, None))
    }

    /// Exact alphabet from rational values.
    pub fn from_rationals(mut values: Vec<BigRational>) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if values.iter().any(|v| *v < zero || *v > one) {
            return Err(Error::Parameter("alphabet values must lie in [0, 1]".into()));
        }
        values.push(one);
        values.sort();
        values.dedup();
        let floats = values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        Ok(Self::with_weights(floats, Some(values)))
    }

    fn with_weights(values: Vec<f64>, exact: Option<Vec<BigRational>>) -> Self {
        let mut prev = 0.0;
        let weights = values
            .iter()
            .map(|&v| {
                let w = v - prev;
                prev = v;
                w
            })
            .collect();
        Self { values, weights, exact }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `pi({a_i}) = a_i - a_{i-1}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_values(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// Exact weights, when the alphabet is rational.
    pub fn exact_weights(&self) -> Option<Vec<BigRational>> {
        let vals = self.exact.as_ref()?;
        let mut prev = BigRational::zero();
        Some(
            vals.iter()
                .map(|v| {
                    let w = v - &prev;
                    prev = v.clone();
                    w
                })
                .collect(),
        )
    }

    /// Index of the letter within tolerance of `value`.
    pub fn index_of(&self, value: f64) -> Option<usize> {
        let i = self.values.partition_point(|&a| a < value - ALPHABET_TOLERANCE);
        (i < self.values.len() && (self.values[i] - value).abs() <= ALPHABET_TOLERANCE).then_some(i)
    }

    /// Letter drawn from `pi` by a uniform `u` in `(0, 1]`: the smallest `a_i >= u`.
    pub fn draw(&self, u: f64) -> usize {
        self.values
            .partition_point(|&a| a < u)
            .min(self.values.len() - 1)
    }
}

fn nearest_index(alphabet: &FiniteAlphabet, value: f64) -> usize {
    let vals = alphabet.values();
    let i = vals.partition_point(|&a| a < value);
    if i == 0 {
        return 0;
    }
    if i == vals.len() {
        return vals.len() - 1;
    }
    if (vals[i] - value) <= (value - vals[i - 1]) {
        i
    } else {
        i - 1
    }
}

/// `min { s : cdf[s] >= a_index }`, comparing through alphabet indices so that
/// floating-point noise in `cdf` cannot reorder letters.
pub fn finite_update_f(alphabet: &FiniteAlphabet, cdf: &[f64], index: usize) -> Result<Spin> {
    if index >= alphabet.len() {
        return Err(Error::NotInAlphabet(index as f64));
    }
    let s = cdf
        .iter()
        .position(|&c| nearest_index(alphabet, c) >= index)
        .unwrap_or(cdf.len() - 1);
    Ok(s as Spin)
}

impl FiniteAlphabet {
    /// [`finite_update_f`] taking the letter by value; rejects non-members.
    pub fn update(&self, cdf: &[f64], letter: f64) -> Result<Spin> {
        let idx = self.index_of(letter).ok_or(Error::NotInAlphabet(letter))?;
        finite_update_f(self, cdf, idx)
    }
}
