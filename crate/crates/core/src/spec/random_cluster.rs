use std::cell::RefCell;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use smallvec::smallvec;

use super::{Cdf, Configuration, ExactParams, FiniteAlphabet, ModelParams, Specification, SpinSpace};
use crate::error::{Error, Result};
use crate::lattice::{BoundaryMode, Site, SiteGraph, Window};

/// Random-cluster model on the edges of a base graph, living on its line graph.
///
/// Spin `1` is an open edge. Plus mode is the wired boundary (exterior edges
/// open), Minus mode the free boundary (exterior edges closed). The
/// single-edge conditional is `p` when the endpoints are joined by other open
/// edges (through the exterior, in Plus mode) and `p / (p + (1 - p) q)` otherwise.
#[derive(Debug, Clone)]
pub struct RandomCluster {
    graph: Arc<SiteGraph>,
    p: f64,
    q: f64,
    exact: Option<(BigRational, BigRational)>,
}

impl RandomCluster {
    pub fn new(graph: Arc<SiteGraph>, p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("p = {p} outside [0, 1]")));
        }
        if q.is_nan() || q < 1.0 {
            return Err(Error::Parameter(format!("q = {q} below 1")));
        }
        if !graph.is_line_graph() {
            return Err(Error::InvalidGraph("random-cluster model lives on a line graph".into()));
        }
        Ok(Self { graph, p, q, exact: None })
    }

    /// Same model with exact rational parameters.
    pub fn new_rational(graph: Arc<SiteGraph>, p: BigRational, q: BigRational) -> Result<Self> {
        let pf = p.to_f64().unwrap_or(f64::NAN);
        let qf = q.to_f64().unwrap_or(f64::NAN);
        let mut m = Self::new(graph, pf, qf)?;
        m.exact = Some((p, q));
        Ok(m)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn isolated_open(&self) -> f64 {
        self.p / (self.p + (1.0 - self.p) * self.q)
    }

    /// Whether the endpoints of `site` are joined without using `site` itself.
    pub fn endpoints_connected(&self, window: &Window, config: &Configuration, site: Site) -> bool {
        let frame = window.edge_frame().expect("line-graph window");
        let pos = window.position(site).expect("site inside window");
        let (a, b) = frame.ends[pos];
        let wired = window.mode() == BoundaryMode::Plus;
        SCRATCH.with(|cell| {
            let mut scratch = cell.borrow_mut();
            let scratch = &mut *scratch;
            scratch.reset(frame.vertex_count());
            let interior = window.interior();
            let is_open = |p: u32| p as usize != pos && config.get(interior[p as usize]) != 0;
            let (found, a_ghost) = scratch.explore(frame, a, Some(b), &is_open);
            if found {
                return true;
            }
            if !wired || !a_ghost {
                return false;
            }
            let (_, b_ghost) = scratch.explore(frame, b, None, &is_open);
            b_ghost
        })
    }
}

struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<u32>,
}

impl Scratch {
    fn reset(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Depth-first search over open edges from `start`. Returns whether `target`
    /// was reached and whether the explored cluster touches the exterior.
    fn explore(
        &mut self,
        frame: &crate::lattice::EdgeFrame,
        start: u32,
        target: Option<u32>,
        is_open: &dyn Fn(u32) -> bool,
    ) -> (bool, bool) {
        if self.stamp[start as usize] == self.epoch {
            // already explored from the other endpoint in this epoch
            return (false, false);
        }
        self.stack.clear();
        self.stack.push(start);
        self.stamp[start as usize] = self.epoch;
        let mut touches = false;
        while let Some(v) = self.stack.pop() {
            touches |= frame.touches_exterior[v as usize];
            for &(edge, w) in &frame.incidence[v as usize] {
                if self.stamp[w as usize] == self.epoch || !is_open(edge) {
                    continue;
                }
                if Some(w) == target {
                    return (true, true);
                }
                self.stamp[w as usize] = self.epoch;
                self.stack.push(w);
            }
        }
        (false, touches)
    }
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = const { RefCell::new(Scratch { stamp: Vec::new(), epoch: 0, stack: Vec::new() }) };
}

impl Specification for RandomCluster {
    fn graph(&self) -> &Arc<SiteGraph> {
        &self.graph
    }

    fn spin_space(&self) -> SpinSpace {
        SpinSpace::binary()
    }

    fn params(&self) -> ModelParams {
        ModelParams::RandomCluster { p: self.p, q: self.q }
    }

    fn exact_params(&self) -> Option<ExactParams> {
        self.exact
            .as_ref()
            .map(|(p, q)| ExactParams::RandomCluster { p: p.clone(), q: q.clone() })
    }

    fn conditional_cdf(&self, window: &Window, config: &Configuration, site: Site) -> Cdf {
        let open = if self.endpoints_connected(window, config, site) {
            self.p
        } else {
            self.isolated_open()
        };
        debug_assert!(self.p == 0.0 || self.p == 1.0 || (open > 0.0 && open < 1.0));
        smallvec![1.0 - open, 1.0]
    }

    fn conditional_cdf_exact(&self, window: &Window, config: &Configuration, site: Site) -> Option<Vec<BigRational>> {
        let (p, q) = self.exact.as_ref()?;
        let one = BigRational::one();
        let open = if self.endpoints_connected(window, config, site) {
            p.clone()
        } else {
            p / (p + (&one - p) * q)
        };
        Some(vec![&one - open, one])
    }

    fn finite_alphabet(&self) -> Result<FiniteAlphabet> {
        if let Some((p, q)) = &self.exact {
            let one = BigRational::one();
            let connected = &one - p;
            let isolated = (&one - p) * q / (p + (&one - p) * q);
            return FiniteAlphabet::from_rationals(vec![connected, isolated]);
        }
        FiniteAlphabet::from_values(vec![1.0 - self.p, 1.0 - self.isolated_open()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ball, build_grid, clusters, line_graph};
    use crate::spec::Configuration;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn setup(extent: usize) -> Arc<SiteGraph> {
        let base = Arc::new(build_grid(&[extent, extent]).unwrap());
        Arc::new(line_graph(&base).unwrap())
    }

    #[test]
    fn parameter_domain() {
        let lg = setup(3);
        assert!(RandomCluster::new(lg.clone(), 1.5, 2.0).is_err());
        assert!(RandomCluster::new(lg.clone(), 0.5, 0.5).is_err());
        let base = Arc::new(build_grid(&[3, 3]).unwrap());
        assert!(RandomCluster::new(base, 0.5, 2.0).is_err());
    }

    #[test]
    fn isolated_edge_open_probability() {
        let lg = setup(9);
        let e = lg.center().unwrap();
        let m = RandomCluster::new(lg.clone(), 0.5, 2.0).unwrap();
        let w = ball(&lg, e, 1, BoundaryMode::Minus).unwrap();
        let cfg = Configuration::for_window(&w, SpinSpace::binary(), 0);
        let cdf = m.conditional_cdf(&w, &cfg, e);
        assert!((cdf[1] - cdf[0] - 1.0 / 3.0).abs() < 1e-15);

        let exact = RandomCluster::new_rational(lg.clone(), r(1, 2), r(2, 1)).unwrap();
        let cdf = exact.conditional_cdf_exact(&w, &cfg, e).unwrap();
        assert_eq!(cdf[0], r(2, 3));
    }

    #[test]
    fn q_one_decouples() {
        let lg = setup(7);
        let e = lg.center().unwrap();
        let m = RandomCluster::new(lg.clone(), 0.3, 1.0).unwrap();
        for mode in [BoundaryMode::Plus, BoundaryMode::Minus] {
            let w = ball(&lg, e, 2, mode).unwrap();
            for fill in [0, 1] {
                let cfg = Configuration::for_window(&w, SpinSpace::binary(), fill);
                for &s in w.interior() {
                    let cdf = m.conditional_cdf(&w, &cfg, s);
                    assert!((cdf[0] - 0.7).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn connectivity_matches_union_find() {
        use rand::{Rng, SeedableRng};
        let lg = setup(8);
        let e = lg.center().unwrap();
        let m = RandomCluster::new(lg.clone(), 0.5, 2.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for mode in [BoundaryMode::Plus, BoundaryMode::Minus] {
            let w = ball(&lg, e, 2, mode).unwrap();
            let frame = w.edge_frame().unwrap().clone();
            for _ in 0..300 {
                let mut cfg = Configuration::for_window(&w, SpinSpace::binary(), 0);
                for &s in w.interior() {
                    cfg.set(s, rng.gen_range(0..2));
                }
                for (pos, &s) in w.interior().iter().enumerate() {
                    let mut without = cfg.clone();
                    without.set(s, 0);
                    let labels = clusters(without.spins(), &w, mode == BoundaryMode::Plus).unwrap();
                    let (a, b) = frame.ends[pos];
                    let expected = labels.same_cluster(a as usize, b as usize);
                    assert_eq!(m.endpoints_connected(&w, &cfg, s), expected);
                }
            }
        }
    }
}
