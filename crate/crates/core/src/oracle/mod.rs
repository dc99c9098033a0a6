//! Brute-force ground truth: exact window distributions by enumeration,
//! total variation, and exact checks of the single-site conditionals.

mod potts;
mod weights;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Site, Spin, Window};
use crate::rng::{Stream, SweepRandomness};
use crate::spec::{finite_update_f, Configuration, Specification};

pub use potts::{potts_window, PottsWindow};
use weights::WeightModel;

/// Default state-space cap, `2^20` configurations.
pub const DEFAULT_CAP_BITS: u32 = 20;

/// Largest state space enumerated in rational arithmetic.
pub const EXACT_CAP_BITS: u32 = 16;

/// Float comparisons inside the oracle use this tolerance.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Refuse state spaces larger than `2^cap_bits`.
    pub cap_bits: u32,
    /// Also compute rational masses when the parameters are rational and the
    /// state space is at most `2^EXACT_CAP_BITS`.
    pub exact: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            cap_bits: DEFAULT_CAP_BITS,
            exact: true,
        }
    }
}

impl EnumerationOptions {
    pub fn with_cap_bits(mut self, cap_bits: u32) -> Self {
        self.cap_bits = cap_bits;
        self
    }

    pub fn float_only(mut self) -> Self {
        self.exact = false;
        self
    }
}

fn state_count(spins: usize, sites: usize, cap_bits: u32) -> Result<usize> {
    let states = (spins as f64).powi(sites as i32);
    if states > 2f64.powi(cap_bits as i32) {
        return Err(Error::EnumerationCap { states, cap_bits });
    }
    Ok(states as usize)
}

/// Spins of configuration `index`; position `k` is digit `k` in base `spins`.
pub fn decode(index: usize, spins: usize, sites: usize, out: &mut [Spin]) {
    let mut i = index;
    for slot in out.iter_mut().take(sites) {
        *slot = (i % spins) as Spin;
        i /= spins;
    }
}

/// Index of interior `config` under [`decode`].
pub fn encode(config: &[Spin], spins: usize) -> usize {
    config.iter().rev().fold(0, |acc, &s| acc * spins + s as usize)
}

/// Probability of every configuration of a window interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    sites: Vec<Site>,
    spins: usize,
    mass: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl ExactDistribution {
    /// Builds a distribution from masses over [`decode`]d configurations.
    pub fn from_masses(sites: Vec<Site>, spins: usize, mass: Vec<f64>) -> Result<Self> {
        let expected = spins.pow(sites.len() as u32);
        if mass.len() != expected {
            return Err(Error::UniverseMismatch(mass.len(), expected));
        }
        if mass.iter().any(|&m| m < 0.0 || m.is_nan()) {
            return Err(Error::Parameter("negative or undefined mass".into()));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("masses sum to {total}")));
        }
        Ok(Self {
            sites,
            spins,
            mass,
            exact: None,
        })
    }

    /// Interior sites in configuration-position order.
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn spin_count(&self) -> usize {
        self.spins
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn exact_mass(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn config(&self, index: usize) -> Vec<Spin> {
        let mut out = vec![0; self.sites.len()];
        decode(index, self.spins, self.sites.len(), &mut out);
        out
    }

    fn position(&self, site: Site) -> Result<usize> {
        self.sites
            .iter()
            .position(|&s| s == site)
            .ok_or(Error::UnknownSite {
                site,
                len: self.sites.len(),
            })
    }

    /// Law of the spin at `site`.
    pub fn marginal(&self, site: Site) -> Result<Vec<f64>> {
        let k = self.position(site)?;
        let stride = self.spins.pow(k as u32);
        let mut out = vec![0.0; self.spins];
        for (i, &m) in self.mass.iter().enumerate() {
            out[(i / stride) % self.spins] += m;
        }
        Ok(out)
    }

    pub fn marginal_exact(&self, site: Site) -> Result<Option<Vec<BigRational>>> {
        let k = self.position(site)?;
        let Some(exact) = &self.exact else { return Ok(None) };
        let stride = self.spins.pow(k as u32);
        let mut out = vec![BigRational::zero(); self.spins];
        for (i, m) in exact.iter().enumerate() {
            out[(i / stride) % self.spins] += m;
        }
        Ok(Some(out))
    }

    /// Configuration index drawn by inverse CDF from a uniform `u` in `(0, 1]`.
    pub fn sample_index(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, &m) in self.mass.iter().enumerate() {
            acc += m;
            if u <= acc {
                return i;
            }
        }
        self.mass.iter().rposition(|&m| m > 0.0).unwrap_or(0)
    }

    /// Cumulative table for repeated sampling.
    pub fn sampler(&self) -> Sampler {
        let mut acc = 0.0;
        let cumulative = self
            .mass
            .iter()
            .map(|&m| {
                acc += m;
                acc
            })
            .collect();
        Sampler { cumulative }
    }

    /// Probability of the configurations selected by `event`.
    pub fn probability(&self, mut event: impl FnMut(&[Spin]) -> bool) -> f64 {
        let mut buf = vec![0; self.sites.len()];
        let mut total = 0.0;
        for (i, &m) in self.mass.iter().enumerate() {
            decode(i, self.spins, self.sites.len(), &mut buf);
            if event(&buf) {
                total += m;
            }
        }
        total
    }
}

/// Inverse-CDF sampler over configuration indices.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn sample(&self, u: f64) -> usize {
        let last = self.cumulative.len() - 1;
        let u = u * self.cumulative[last];
        self.cumulative.partition_point(|&c| c < u).min(last)
    }
}

/// Exact Gibbs distribution of the window interior under the window's boundary mode.
pub fn enumerate_gibbs<S: Specification + ?Sized>(
    spec: &S,
    window: &Window,
    options: EnumerationOptions,
) -> Result<ExactDistribution> {
    let spins = spec.spin_space().size();
    let m = window.len();
    let states = state_count(spins, m, options.cap_bits)?;
    let model = WeightModel::new(spec, window)?;
    let logw: Vec<f64> = (0..states)
        .into_par_iter()
        .map_init(
            || vec![0; m],
            |buf, i| {
                decode(i, spins, m, buf);
                model.log_weight(buf)
            },
        )
        .collect();
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Parameter("every configuration has zero weight".into()));
    }
    let mut mass: Vec<f64> = logw.iter().map(|&l| (l - max).exp()).collect();
    let z: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|x| *x /= z);

    let exact = if options.exact && model.has_exact() && (spins as f64).powi(m as i32) <= 2f64.powi(EXACT_CAP_BITS as i32) {
        let mut buf = vec![0; m];
        let w: Vec<BigRational> = (0..states)
            .map(|i| {
                decode(i, spins, m, &mut buf);
                model.exact_weight(&buf).expect("exact parameters")
            })
            .collect();
        let z: BigRational = w.iter().fold(BigRational::zero(), |a, b| a + b);
        Some(w.into_iter().map(|x| x / &z).collect())
    } else {
        None
    };
    Ok(ExactDistribution {
        sites: window.interior().to_vec(),
        spins,
        mass,
        exact,
    })
}

/// Law of the spin at `site` without storing the full distribution; the cap
/// in `options` may be raised beyond what [`enumerate_gibbs`] would hold.
pub fn site_marginal<S: Specification + ?Sized>(
    spec: &S,
    window: &Window,
    site: Site,
    options: EnumerationOptions,
) -> Result<Vec<f64>> {
    let spins = spec.spin_space().size();
    let m = window.len();
    let pos = window.position(site).ok_or(Error::UnknownSite { site, len: m })?;
    let states = state_count(spins, m, options.cap_bits)?;
    let model = WeightModel::new(spec, window)?;
    let stride = spins.pow(pos as u32);
    let chunk = 1 << 14;
    let partials: Vec<(f64, Vec<f64>)> = (0..states.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut buf = vec![0; m];
            let mut top = f64::NEG_INFINITY;
            let mut sums = vec![0.0; spins];
            for i in c * chunk..((c + 1) * chunk).min(states) {
                decode(i, spins, m, &mut buf);
                let l = model.log_weight(&buf);
                if l == f64::NEG_INFINITY {
                    continue;
                }
                if l > top {
                    let scale = (top - l).exp();
                    sums.iter_mut().for_each(|s| *s *= scale);
                    top = l;
                }
                sums[(i / stride) % spins] += (l - top).exp();
            }
            (top, sums)
        })
        .collect();
    let top = partials.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Parameter("every configuration has zero weight".into()));
    }
    let mut out = vec![0.0; spins];
    for (t, sums) in partials {
        if t.is_finite() {
            let scale = (t - top).exp();
            for (o, s) in out.iter_mut().zip(sums) {
                *o += s * scale;
            }
        }
    }
    let z: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= z);
    Ok(out)
}

/// `1/2 sum |a - b|`.
pub fn exact_tv(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::UniverseMismatch(a.len(), b.len()));
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

pub fn exact_tv_rational(a: &[BigRational], b: &[BigRational]) -> Result<BigRational> {
    if a.len() != b.len() {
        return Err(Error::UniverseMismatch(a.len(), b.len()));
    }
    let sum = a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + (x - y).abs());
    Ok(sum / BigRational::from_integer(2.into()))
}

/// Outcome of [`check_conditional`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalReport {
    /// Largest `|cdf_spec - cdf_oracle|` over configurations, sites and spins.
    pub max_discrepancy: f64,
    /// Same in rational arithmetic, when both sides are exact (`0` means identical).
    pub exact_discrepancy: Option<f64>,
    /// Largest change of any mass after one heat-bath sweep in interior order.
    pub stationarity_error: f64,
    pub configurations: usize,
    pub checks: usize,
}

fn configuration_for(window: &Window, spins: &[Spin], ext: Spin) -> Configuration {
    let mut c = Configuration::constant(window.ambient().len(), ext);
    for (&s, &v) in window.interior().iter().zip(spins) {
        c.set(s, v);
    }
    c
}

/// Compares the model's conditionals with conditionals of the enumerated
/// distribution, and checks that one sweep leaves that distribution invariant.
pub fn check_conditional<S: Specification + ?Sized>(
    spec: &S,
    window: &Window,
    options: EnumerationOptions,
) -> Result<ConditionalReport> {
    let dist = enumerate_gibbs(spec, window, options)?;
    let spins = dist.spins;
    let m = window.len();
    let ext = spec.spin_space().extreme(window.mode());
    let mut buf = vec![0; m];
    let mut max_disc: f64 = 0.0;
    let mut exact_disc: Option<BigRational> = dist.exact.as_ref().map(|_| BigRational::zero());
    let mut checks = 0;
    for i in 0..dist.len() {
        decode(i, spins, m, &mut buf);
        let config = configuration_for(window, &buf, ext);
        for (k, &site) in window.interior().iter().enumerate() {
            let stride = spins.pow(k as u32);
            let base = i - stride * buf[k] as usize;
            if buf[k] != 0 {
                continue;
            }
            let masses: Vec<f64> = (0..spins).map(|s| dist.mass[base + s * stride]).collect();
            let total: f64 = masses.iter().sum();
            if total <= 0.0 {
                continue;
            }
            let cdf = spec.conditional_cdf(window, &config, site);
            let mut acc = 0.0;
            for s in 0..spins {
                acc += masses[s] / total;
                max_disc = max_disc.max((acc - cdf[s]).abs());
            }
            checks += 1;
            if let (Some(exact), Some(disc)) = (&dist.exact, exact_disc.as_mut()) {
                match spec.conditional_cdf_exact(window, &config, site) {
                    Some(cdf_exact) => {
                        let em: Vec<&BigRational> = (0..spins).map(|s| &exact[base + s * stride]).collect();
                        let total = em.iter().fold(BigRational::zero(), |a, b| a + *b);
                        if total.is_zero() {
                            continue;
                        }
                        let mut acc = BigRational::zero();
                        for s in 0..spins {
                            acc += em[s] / &total;
                            let d = (&acc - &cdf_exact[s]).abs();
                            if d > *disc {
                                *disc = d;
                            }
                        }
                    }
                    None => exact_disc = None,
                }
            }
        }
    }
    let stationarity_error = stationarity(spec, window, &dist)?;
    Ok(ConditionalReport {
        max_discrepancy: max_disc,
        exact_discrepancy: exact_disc.map(|d| d.to_f64().unwrap_or(f64::NAN)),
        stationarity_error,
        configurations: dist.len(),
        checks,
    })
}

/// Applies the heat-bath kernel of every interior site, in interior order, to
/// `dist` and returns the largest change of any mass.
pub fn stationarity<S: Specification + ?Sized>(spec: &S, window: &Window, dist: &ExactDistribution) -> Result<f64> {
    let spins = dist.spins;
    let m = window.len();
    let ext = spec.spin_space().extreme(window.mode());
    let mut current = dist.mass.clone();
    let mut buf = vec![0; m];
    for (k, &site) in window.interior().iter().enumerate() {
        let stride = spins.pow(k as u32);
        let mut next = vec![0.0; current.len()];
        for i in 0..current.len() {
            decode(i, spins, m, &mut buf);
            if buf[k] != 0 {
                continue;
            }
            let config = configuration_for(window, &buf, ext);
            let cdf = spec.conditional_cdf(window, &config, site);
            let block: f64 = (0..spins).map(|s| current[i + s * stride]).sum();
            let mut prev = 0.0;
            for s in 0..spins {
                next[i + s * stride] = block * (cdf[s] - prev);
                prev = cdf[s];
            }
        }
        current = next;
    }
    Ok(current
        .iter()
        .zip(&dist.mass)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Largest `P_lower(E) - P_upper(E)` over `events` random increasing events.
///
/// Each event is the up-set generated by one to four random configurations.
pub fn check_domination(lower: &ExactDistribution, upper: &ExactDistribution, events: usize, seed: u64) -> Result<f64> {
    if lower.len() != upper.len() || lower.sites != upper.sites {
        return Err(Error::UniverseMismatch(lower.len(), upper.len()));
    }
    let rnd = SweepRandomness::new(seed);
    let m = lower.sites.len();
    let spins = lower.spins as u32;
    let mut worst = f64::NEG_INFINITY;
    for e in 0..events {
        let generators = 1 + rnd.below(e, 0, Stream::Payload, 4) as usize;
        let gens: Vec<Vec<Spin>> = (0..generators)
            .map(|g| {
                (0..m)
                    .map(|k| rnd.below(e, ((g * m + k) + 1) as u64, Stream::Payload, spins) as Spin)
                    .collect()
            })
            .collect();
        let event = |c: &[Spin]| gens.iter().any(|g| g.iter().zip(c).all(|(a, b)| a <= b));
        worst = worst.max(lower.probability(event) - upper.probability(event));
    }
    Ok(worst)
}

/// Disagreement probability of the quantile coupling of two laws on a totally
/// ordered space.
pub fn monotone_coupling_disagreement(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::UniverseMismatch(a.len(), b.len()));
    }
    let cum = |v: &[f64]| {
        let mut acc = 0.0;
        v.iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect::<Vec<f64>>()
    };
    let (ca, cb) = (cum(a), cum(b));
    let mut cuts: Vec<f64> = ca.iter().chain(&cb).copied().collect();
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    let quantile = |c: &[f64], u: f64| c.iter().position(|&x| x >= u).unwrap_or(c.len() - 1);
    let mut disagree = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1].min(1.0));
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        if quantile(&ca, mid) != quantile(&cb, mid) {
            disagree += hi - lo;
        }
    }
    Ok(disagree)
}

/// Outcome of [`finite_alphabet_fidelity`].
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub checks: usize,
    /// Conditional values missing from the alphabet, or laws that differ.
    pub mismatches: usize,
    /// Largest difference between the `pi`-weighted law of the finite update
    /// and the conditional law, in rational arithmetic.
    pub max_discrepancy: f64,
}

/// Checks, in rational arithmetic, that the finite update driven by a letter
/// drawn from `pi` reproduces the conditional law, for every interior
/// configuration and site of `window`.
pub fn finite_alphabet_fidelity<S: Specification + ?Sized>(
    spec: &S,
    window: &Window,
    options: EnumerationOptions,
) -> Result<FidelityReport> {
    let alphabet = spec.finite_alphabet()?;
    let letters = alphabet
        .exact_values()
        .ok_or_else(|| Error::AlphabetUnavailable("model parameters are not rational".into()))?
        .to_vec();
    let weights = alphabet.exact_weights().expect("exact values present");
    let spins = spec.spin_space().size();
    let m = window.len();
    let states = state_count(spins, m, options.cap_bits.min(EXACT_CAP_BITS))?;
    let ext = spec.spin_space().extreme(window.mode());
    let mut buf = vec![0; m];
    let mut report = FidelityReport {
        checks: 0,
        mismatches: 0,
        max_discrepancy: 0.0,
    };
    let mut worst = BigRational::zero();
    for i in 0..states {
        decode(i, spins, m, &mut buf);
        let config = configuration_for(window, &buf, ext);
        for &site in window.interior() {
            let exact = spec
                .conditional_cdf_exact(window, &config, site)
                .ok_or_else(|| Error::AlphabetUnavailable("no exact conditional".into()))?;
            let float = spec.conditional_cdf(window, &config, site);
            report.checks += 1;
            if !exact.iter().all(|c| letters.contains(c)) {
                report.mismatches += 1;
                continue;
            }
            let mut law = vec![BigRational::zero(); spins];
            for (idx, w) in weights.iter().enumerate() {
                let s = finite_update_f(&alphabet, &float, idx)?;
                law[s as usize] += w;
            }
            let mut acc = BigRational::zero();
            let mut differs = false;
            for s in 0..spins {
                acc += &law[s];
                let d = (&acc - &exact[s]).abs();
                if !d.is_zero() {
                    differs = true;
                }
                if d > worst {
                    worst = d;
                }
            }
            report.mismatches += usize::from(differs);
        }
    }
    report.max_discrepancy = worst.to_f64().unwrap_or(f64::NAN);
    Ok(report)
}
