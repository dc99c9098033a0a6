//! Unnormalised window weights, written from the Gibbs formulas directly and
//! never from the single-site conditionals they are used to check.

use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::lattice::{BoundaryMode, EdgeFrame, Spin, UnionFind, Window};
use crate::spec::{lattice_sphere_size, ExactParams, ModelParams, Specification};

/// `n * ln(x)` with `0 * ln(0) = 0`.
fn xlog(n: usize, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * x.ln()
    }
}

fn spin_sign(s: Spin) -> f64 {
    if s == 0 {
        -1.0
    } else {
        1.0
    }
}

pub(crate) enum WeightModel {
    RandomCluster {
        p: f64,
        q: f64,
        exact: Option<(BigRational, BigRational)>,
        frame: EdgeFrame,
        wired: bool,
    },
    /// Pairs and boundary counts by interior position.
    Ising {
        beta: f64,
        weight: Option<BigRational>,
        pairs: Vec<(usize, usize)>,
        boundary: Vec<usize>,
        ext: Spin,
    },
    LongRange {
        pairs: Vec<(usize, usize, f64)>,
        /// `sum_u J(u, w) * ext` over exterior `w`, per interior position.
        field: Vec<f64>,
    },
}

impl WeightModel {
    pub(crate) fn new<S: Specification + ?Sized>(spec: &S, window: &Window) -> Result<Self> {
        let graph = spec.graph();
        if graph.len() != window.ambient().len() {
            return Err(Error::InvalidGraph("window lives on a different graph".into()));
        }
        let interior = window.interior();
        let ext_spin = spec.spin_space().extreme(window.mode());
        match spec.params() {
            ModelParams::RandomCluster { p, q } => {
                let frame = window
                    .edge_frame()
                    .ok_or_else(|| Error::InvalidGraph("random-cluster window must live on a line graph".into()))?
                    .clone();
                let exact = match spec.exact_params() {
                    Some(ExactParams::RandomCluster { p, q }) => Some((p, q)),
                    _ => None,
                };
                Ok(WeightModel::RandomCluster {
                    p,
                    q,
                    exact,
                    frame,
                    wired: window.mode() == BoundaryMode::Plus,
                })
            }
            ModelParams::Ising { beta } => {
                let mut pairs = Vec::new();
                let mut boundary = Vec::with_capacity(interior.len());
                for (i, &u) in interior.iter().enumerate() {
                    let mut b = graph.missing_neighbors(u);
                    for &w in graph.neighbors(u) {
                        match window.position(w) {
                            Some(j) if j > i => pairs.push((i, j)),
                            Some(_) => {}
                            None => b += 1,
                        }
                    }
                    boundary.push(b);
                }
                let weight = match spec.exact_params() {
                    Some(ExactParams::Ising { weight }) => Some(weight),
                    _ => None,
                };
                Ok(WeightModel::Ising {
                    beta,
                    weight,
                    pairs,
                    boundary,
                    ext: ext_spin,
                })
            }
            ModelParams::LongRangeIsing { beta, alpha, trunc } => {
                let d = graph
                    .dimension()
                    .ok_or_else(|| Error::InvalidGraph("long-range model needs a box".into()))?;
                let ext = spin_sign(ext_spin);
                let coupling = |k: usize| beta * (k as f64).powf(-alpha);
                let mut pairs = Vec::new();
                let mut field = Vec::with_capacity(interior.len());
                for (i, &u) in interior.iter().enumerate() {
                    let mut h = 0.0;
                    for (k, layer) in graph.bfs_layers(u, trunc).iter().enumerate().skip(1) {
                        let j = coupling(k);
                        for &w in layer {
                            match window.position(w) {
                                Some(pos) if pos > i => pairs.push((i, pos, j)),
                                Some(_) => {}
                                None => h += j * ext,
                            }
                        }
                        h += j * ext * (lattice_sphere_size(d, k) - layer.len()) as f64;
                    }
                    // distances whose shells are empty inside the box
                    let reached = graph.bfs_layers(u, trunc).len();
                    for k in reached.max(1)..=trunc {
                        h += coupling(k) * ext * lattice_sphere_size(d, k) as f64;
                    }
                    field.push(h);
                }
                Ok(WeightModel::LongRange { pairs, field })
            }
        }
    }

    pub(crate) fn has_exact(&self) -> bool {
        match self {
            WeightModel::RandomCluster { exact, .. } => exact.is_some(),
            WeightModel::Ising { weight, .. } => weight.is_some(),
            WeightModel::LongRange { .. } => false,
        }
    }

    /// Open and closed edge counts plus the number of counted clusters.
    fn rc_counts(frame: &EdgeFrame, wired: bool, spins: &[Spin]) -> (usize, usize, usize) {
        let n = frame.vertex_count();
        let mut uf = UnionFind::new(n + 1);
        let mut open = 0;
        for (&(a, b), &s) in frame.ends.iter().zip(spins) {
            if s != 0 {
                open += 1;
                uf.union(a as usize, b as usize);
            }
        }
        if wired {
            for (v, &t) in frame.touches_exterior.iter().enumerate() {
                if t {
                    uf.union(v, n);
                }
            }
        }
        let ghost_root = wired.then(|| uf.find(n));
        let roots = (0..n).filter(|&v| uf.find(v) == v && Some(v) != ghost_root).count();
        (open, spins.len() - open, roots)
    }

    /// Natural log of the unnormalised weight of interior `spins`.
    pub(crate) fn log_weight(&self, spins: &[Spin]) -> f64 {
        match self {
            WeightModel::RandomCluster { p, q, frame, wired, .. } => {
                let (o, c, k) = Self::rc_counts(frame, *wired, spins);
                xlog(o, *p) + xlog(c, 1.0 - p) + xlog(k, *q)
            }
            WeightModel::Ising {
                beta,
                pairs,
                boundary,
                ext,
                ..
            } => {
                let e = spin_sign(*ext);
                let mut h = 0.0;
                for &(i, j) in pairs {
                    h += spin_sign(spins[i]) * spin_sign(spins[j]);
                }
                for (i, &b) in boundary.iter().enumerate() {
                    h += b as f64 * spin_sign(spins[i]) * e;
                }
                beta * h
            }
            WeightModel::LongRange { pairs, field } => {
                let mut h = 0.0;
                for &(i, j, jv) in pairs {
                    h += jv * spin_sign(spins[i]) * spin_sign(spins[j]);
                }
                for (i, &f) in field.iter().enumerate() {
                    h += f * spin_sign(spins[i]);
                }
                h
            }
        }
    }

    /// Exact unnormalised weight, up to a factor common to all configurations.
    pub(crate) fn exact_weight(&self, spins: &[Spin]) -> Option<BigRational> {
        match self {
            WeightModel::RandomCluster { exact, frame, wired, .. } => {
                let (p, q) = exact.as_ref()?;
                let (o, c, k) = Self::rc_counts(frame, *wired, spins);
                let one = BigRational::one();
                Some(Pow::pow(p, o as u32) * Pow::pow(&one - p, c as u32) * Pow::pow(q, k as u32))
            }
            WeightModel::Ising {
                weight,
                pairs,
                boundary,
                ext,
                ..
            } => {
                let x = weight.as_ref()?;
                let mut agree = 0usize;
                for &(i, j) in pairs {
                    agree += usize::from(spins[i] == spins[j]);
                }
                for (i, &b) in boundary.iter().enumerate() {
                    if spins[i] == *ext {
                        agree += b;
                    }
                }
                Some(Pow::pow(x, agree as u32))
            }
            WeightModel::LongRange { .. } => None,
        }
    }
}
