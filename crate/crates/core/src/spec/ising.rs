use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use smallvec::smallvec;

use super::{Cdf, Configuration, ExactParams, FiniteAlphabet, ModelParams, Specification, SpinSpace};
use crate::error::{Error, Result};
use crate::lattice::{BoundaryMode, Site, SiteGraph, Window};

fn sign(spin: u8) -> i64 {
    if spin == 0 {
        -1
    } else {
        1
    }
}

fn mode_sign(mode: BoundaryMode) -> i64 {
    match mode {
        BoundaryMode::Plus => 1,
        BoundaryMode::Minus => -1,
    }
}

/// `P(-)` for local field `h` (coupling already folded in).
fn minus_probability(h: f64) -> f64 {
    1.0 / (1.0 + (2.0 * h).exp())
}

/// Nearest-neighbour Ising model, spins `0 = -1`, `1 = +1`,
/// `P(+ | rest) = 1 / (1 + exp(-2 beta h))` with `h` the neighbour spin sum.
/// Neighbours lost to the box truncation count as exterior.
#[derive(Debug, Clone)]
pub struct Ising {
    graph: Arc<SiteGraph>,
    beta: f64,
    weight: Option<BigRational>,
}

impl Ising {
    pub fn new(graph: Arc<SiteGraph>, beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 || beta.is_infinite() {
            return Err(Error::Parameter(format!("beta = {beta} must be finite and >= 0")));
        }
        Ok(Self { graph, beta, weight: None })
    }

    /// Exact model from the rational pair weight `w = exp(2 beta) >= 1`.
    pub fn from_weight(graph: Arc<SiteGraph>, weight: BigRational) -> Result<Self> {
        if weight < BigRational::one() {
            return Err(Error::Parameter("exp(2 beta) must be at least 1".into()));
        }
        let beta = 0.5 * weight.to_f64().unwrap_or(f64::NAN).ln();
        let mut m = Self::new(graph, beta)?;
        m.weight = Some(weight);
        Ok(m)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn field(&self, window: &Window, config: &Configuration, site: Site) -> i64 {
        let ext = mode_sign(window.mode());
        let mut h = ext * self.graph.missing_neighbors(site) as i64;
        for &u in self.graph.neighbors(site) {
            h += if window.contains(u) { sign(config.get(u)) } else { ext };
        }
        h
    }
}

impl Specification for Ising {
    fn graph(&self) -> &Arc<SiteGraph> {
        &self.graph
    }

    fn spin_space(&self) -> SpinSpace {
        SpinSpace::binary()
    }

    fn params(&self) -> ModelParams {
        ModelParams::Ising { beta: self.beta }
    }

    fn exact_params(&self) -> Option<ExactParams> {
        self.weight.clone().map(|weight| ExactParams::Ising { weight })
    }

    fn conditional_cdf(&self, window: &Window, config: &Configuration, site: Site) -> Cdf {
        let h = self.field(window, config, site);
        smallvec![minus_probability(self.beta * h as f64), 1.0]
    }

    fn conditional_cdf_exact(&self, window: &Window, config: &Configuration, site: Site) -> Option<Vec<BigRational>> {
        let w = self.weight.as_ref()?;
        let h = self.field(window, config, site);
        let one = BigRational::one();
        Some(vec![&one / (&one + rational_pow(w, h)), one])
    }

    fn finite_alphabet(&self) -> Result<FiniteAlphabet> {
        let mut degrees: Vec<usize> = (0..self.graph.len()).map(|v| self.graph.full_degree(v)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let fields = degrees
            .iter()
            .flat_map(|&k| (0..=k).map(move |plus| 2 * plus as i64 - k as i64));
        if let Some(w) = &self.weight {
            let one = BigRational::one();
            let vals = fields
                .map(|h| &one / (&one + rational_pow(w, h)))
                .collect();
            return FiniteAlphabet::from_rationals(vals);
        }
        FiniteAlphabet::from_values(fields.map(|h| minus_probability(self.beta * h as f64)).collect())
    }
}

/// Number of points of `Z^d` at `l1` distance exactly `k` from the origin.
pub(crate) fn lattice_sphere_size(d: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let binom = |n: usize, r: usize| -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
    };
    (1..=d.min(k))
        .map(|i| (1usize << i) * binom(d, i) * binom(k - 1, i - 1))
        .sum()
}

/// Ising model with pair couplings `J(u, v) = beta * dist(u, v)^(-alpha)` for
/// `1 <= dist <= trunc`.
#[derive(Debug, Clone)]
pub struct LongRangeIsing {
    graph: Arc<SiteGraph>,
    beta: f64,
    alpha: f64,
    trunc: usize,
    couplings: Vec<f64>,
    /// Per site: sites within range and their coupling.
    reach: Vec<Vec<(Site, f64)>>,
    /// Per site: total coupling to lattice points cut off by the box.
    cut_off: Vec<f64>,
}

impl LongRangeIsing {
    pub fn new(graph: Arc<SiteGraph>, beta: f64, alpha: f64, trunc: usize) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 || beta.is_infinite() {
            return Err(Error::Parameter(format!("beta = {beta} must be finite and >= 0")));
        }
        if alpha.is_nan() {
            return Err(Error::Parameter("alpha is NaN".into()));
        }
        if graph.is_line_graph() {
            return Err(Error::InvalidGraph("long-range Ising lives on a vertex graph".into()));
        }
        let couplings: Vec<f64> = (0..=trunc)
            .map(|k| if k == 0 { 0.0 } else { beta * (k as f64).powf(-alpha) })
            .collect();
        let dim = graph.dimension();
        let mut reach = Vec::with_capacity(graph.len());
        let mut cut_off = Vec::with_capacity(graph.len());
        for v in 0..graph.len() {
            let layers = graph.bfs_layers(v, trunc);
            let mut r = Vec::new();
            let mut cut = 0.0;
            for k in 1..=trunc {
                let layer = layers.get(k).map(Vec::as_slice).unwrap_or(&[]);
                r.extend(layer.iter().map(|&u| (u, couplings[k])));
                if let Some(d) = dim {
                    cut += couplings[k] * (lattice_sphere_size(d, k) - layer.len()) as f64;
                }
            }
            reach.push(r);
            cut_off.push(cut);
        }
        Ok(Self {
            graph,
            beta,
            alpha,
            trunc,
            couplings,
            reach,
            cut_off,
        })
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    fn field(&self, window: &Window, config: &Configuration, site: Site) -> f64 {
        let ext = mode_sign(window.mode()) as f64;
        let mut h = ext * self.cut_off[site];
        for &(u, j) in &self.reach[site] {
            h += j * if window.contains(u) { sign(config.get(u)) as f64 } else { ext };
        }
        h
    }
}

/// Upper bound on the number of distinct fields enumerated for the alphabet.
const MAX_FIELD_COMBINATIONS: usize = 5_000_000;

impl Specification for LongRangeIsing {
    fn graph(&self) -> &Arc<SiteGraph> {
        &self.graph
    }

    fn spin_space(&self) -> SpinSpace {
        SpinSpace::binary()
    }

    fn params(&self) -> ModelParams {
        ModelParams::LongRangeIsing {
            beta: self.beta,
            alpha: self.alpha,
            trunc: self.trunc,
        }
    }

    fn conditional_cdf(&self, window: &Window, config: &Configuration, site: Site) -> Cdf {
        smallvec![minus_probability(self.field(window, config, site)), 1.0]
    }

    fn finite_alphabet(&self) -> Result<FiniteAlphabet> {
        // Sites at distance k contribute J_k * (N_k - 2m) for m minus spins among N_k.
        let counts: Vec<usize> = match self.graph.dimension() {
            Some(d) => (1..=self.trunc).map(|k| lattice_sphere_size(d, k)).collect(),
            None => {
                return Err(Error::AlphabetUnavailable(
                    "long-range alphabet needs a lattice box".into(),
                ))
            }
        };
        let combos = counts
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n + 1))
            .filter(|&c| c <= MAX_FIELD_COMBINATIONS)
            .ok_or_else(|| Error::AlphabetUnavailable(format!("field takes too many values for trunc {}", self.trunc)))?;
        let mut fields = vec![0.0f64];
        fields.reserve(combos);
        for (k, &n) in counts.iter().enumerate() {
            let j = self.couplings[k + 1];
            fields = fields
                .iter()
                .flat_map(|&h| (0..=n).map(move |m| h + j * (n as f64 - 2.0 * m as f64)))
                .collect();
        }
        FiniteAlphabet::from_values(fields.into_iter().map(minus_probability).collect())
    }
}

/// `w^h` for integer `h`.
pub(crate) fn rational_pow(w: &BigRational, h: i64) -> BigRational {
    if h >= 0 {
        Pow::pow(w, h as u32)
    } else {
        BigRational::from_integer(BigInt::one()) / Pow::pow(w, (-h) as u32)
    }
}
