//! Monotone single-site specifications and the update functions built on them.
//!
//! A [`Specification`] answers one question: given a window, a configuration
//! that agrees with the window's extreme boundary outside, and an interior
//! site, what is the cumulative law `a*(s) = P(spin <= s | rest)`? Everything
//! else (heat-bath updates, the finite alphabet, exact enumeration) is built
//! from that.

mod alphabet;
mod ising;
mod random_cluster;

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lattice::{BoundaryMode, Site, SiteGraph, Spin, Window};

pub use alphabet::{finite_update_f, FiniteAlphabet, ALPHABET_TOLERANCE};
pub use ising::{Ising, LongRangeIsing};
pub(crate) use ising::lattice_sphere_size;
pub use random_cluster::RandomCluster;

/// Cumulative conditional law; `cdf[s] = P(spin <= s)`, last entry is 1.
pub type Cdf = SmallVec<[f64; 4]>;

/// Spins `0..size`, ordered; `0` is the minimal (`-`) and `size - 1` the maximal (`+`) spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinSpace {
    size: usize,
}

impl SpinSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::Parameter(format!("spin space needs at least 2 values, got {size}")));
        }
        if size > usize::from(Spin::MAX) + 1 {
            return Err(Error::Parameter(format!("spin space of size {size} is too large")));
        }
        Ok(Self { size })
    }

    pub const fn binary() -> Self {
        Self { size: 2 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn min(&self) -> Spin {
        0
    }

    pub fn max(&self) -> Spin {
        (self.size - 1) as Spin
    }

    pub fn extreme(&self, mode: BoundaryMode) -> Spin {
        match mode {
            BoundaryMode::Plus => self.max(),
            BoundaryMode::Minus => self.min(),
        }
    }
}

/// Spins on every site of the ambient graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration(Vec<Spin>);

impl Configuration {
    pub fn constant(len: usize, spin: Spin) -> Self {
        Self(vec![spin; len])
    }

    pub fn from_spins(spins: Vec<Spin>) -> Self {
        Self(spins)
    }

    /// `interior` on the window, the window's extreme spin elsewhere.
    pub fn for_window(window: &Window, space: SpinSpace, interior: Spin) -> Self {
        let mut c = Self::constant(window.ambient().len(), space.extreme(window.mode()));
        for &s in window.interior() {
            c.0[s] = interior;
        }
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.0
    }

    pub fn get(&self, s: Site) -> Spin {
        self.0[s]
    }

    pub fn set(&mut self, s: Site, spin: Spin) {
        self.0[s] = spin;
    }

    pub fn into_inner(self) -> Vec<Spin> {
        self.0
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Pointwise `self <= other` on the listed sites.
    pub fn le_on(&self, other: &Self, sites: &[Site]) -> bool {
        sites.iter().all(|&s| self.0[s] <= other.0[s])
    }

    pub fn agrees_on(&self, other: &Self, sites: &[Site]) -> bool {
        sites.iter().all(|&s| self.0[s] == other.0[s])
    }

    /// Restriction to the window interior, in interior order.
    pub fn restrict(&self, window: &Window) -> Vec<Spin> {
        window.interior().iter().map(|&s| self.0[s]).collect()
    }

    /// Resets every site outside the window to its extreme spin.
    pub fn project(&mut self, window: &Window, space: SpinSpace) {
        let ext = space.extreme(window.mode());
        for (s, spin) in self.0.iter_mut().enumerate() {
            if !window.contains(s) {
                *spin = ext;
            }
        }
    }
}

/// Model parameters, as plain numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    RandomCluster { p: f64, q: f64 },
    Ising { beta: f64 },
    LongRangeIsing { beta: f64, alpha: f64, trunc: usize },
}

/// Rational parameters, when the model was built from them.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactParams {
    RandomCluster { p: BigRational, q: BigRational },
    /// `weight = exp(2 beta)`.
    Ising { weight: BigRational },
}

/// Monotone upwards-downwards specification on a fixed ambient graph.
pub trait Specification: Send + Sync {
    fn graph(&self) -> &Arc<SiteGraph>;

    fn spin_space(&self) -> SpinSpace;

    fn params(&self) -> ModelParams;

    fn exact_params(&self) -> Option<ExactParams> {
        None
    }

    /// Conditional law at interior site `site`, with everything outside the
    /// window at the extreme of `window.mode()`. Values of `config` outside the
    /// window are ignored.
    fn conditional_cdf(&self, window: &Window, config: &Configuration, site: Site) -> Cdf;

    /// Same law in exact arithmetic, when the parameters are rational.
    fn conditional_cdf_exact(&self, _window: &Window, _config: &Configuration, _site: Site) -> Option<Vec<BigRational>> {
        None
    }

    /// Every cumulative value the conditional law can take, in closed form.
    fn finite_alphabet(&self) -> Result<FiniteAlphabet>;
}

/// Inverse-CDF spin: the smallest `s` with `cdf[s] >= a`.
pub fn update_f(cdf: &[f64], a: f64) -> Spin {
    cdf.iter()
        .position(|&c| c >= a)
        .unwrap_or(cdf.len() - 1) as Spin
}

/// Heat-bath update of `site` driven by the uniform value `a`.
pub fn heat_bath_update<S: Specification + ?Sized>(
    spec: &S,
    window: &Window,
    config: &Configuration,
    site: Site,
    a: f64,
) -> Result<Spin> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Parameter(format!("update value {a} outside [0, 1]")));
    }
    Ok(update_f(&spec.conditional_cdf(window, config, site), a))
}

/// Probability of each spin under a cumulative law.
pub fn cdf_to_pmf(cdf: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    cdf.iter()
        .map(|&c| {
            let m = c - prev;
            prev = c;
            m
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_cdf_examples() {
        let cdf = [1.0 / 3.0, 1.0];
        assert_eq!(update_f(&cdf, 0.2), 0);
        assert_eq!(update_f(&cdf, 0.9), 1);
        assert_eq!(update_f(&cdf, 1.0), 1);
        assert_eq!(update_f(&cdf, 0.0), 0);
    }

    #[test]
    fn spin_space_bounds() {
        assert!(SpinSpace::new(1).is_err());
        let s = SpinSpace::new(3).unwrap();
        assert_eq!((s.min(), s.max()), (0, 2));
        assert_eq!(s.extreme(BoundaryMode::Plus), 2);
    }

    #[test]
    fn pmf_from_cdf() {
        let p = cdf_to_pmf(&[0.25, 0.5, 1.0]);
        assert_eq!(p, vec![0.25, 0.25, 0.5]);
    }
}
