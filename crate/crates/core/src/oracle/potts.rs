use super::{decode, state_count, EnumerationOptions, ExactDistribution};
use crate::error::{Error, Result};
use crate::lattice::{Site, SiteGraph};

/// Exact Potts measure on a set of base vertices.
///
/// Spin `s` stands for colour `s + 1`.
#[derive(Debug, Clone)]
pub struct PottsWindow {
    pub q: usize,
    pub beta: f64,
    pub boundary: Option<u32>,
    pub distribution: ExactDistribution,
}

impl PottsWindow {
    /// Colour law at vertex `v`, indexed by colour minus one.
    pub fn marginal(&self, v: Site) -> Result<Vec<f64>> {
        self.distribution.marginal(v)
    }
}

/// Potts measure `exp(beta * #monochromatic edges)` on `vertices`, counting
/// every edge with at least one endpoint inside. With `boundary = Some(c)`
/// outside endpoints (and missing lattice neighbours) carry colour `c`; with
/// `None` edges leaving the set are dropped.
pub fn potts_window(
    graph: &SiteGraph,
    vertices: &[Site],
    q: usize,
    beta: f64,
    boundary: Option<u32>,
    options: EnumerationOptions,
) -> Result<PottsWindow> {
    if q < 2 {
        return Err(Error::Parameter(format!("Potts model needs q >= 2, got {q}")));
    }
    if let Some(c) = boundary {
        if c == 0 || c as usize > q {
            return Err(Error::Parameter(format!("boundary colour {c} outside 1..={q}")));
        }
    }
    let mut sites = vertices.to_vec();
    sites.sort_unstable();
    sites.dedup();
    for &v in &sites {
        graph.check_site(v)?;
    }
    let m = sites.len();
    let states = state_count(q, m, options.cap_bits)?;
    let pos = |v: Site| sites.binary_search(&v).ok();
    let mut pairs = Vec::new();
    let mut outside = vec![0usize; m];
    for (i, &v) in sites.iter().enumerate() {
        for &w in graph.neighbors(v) {
            match pos(w) {
                Some(j) if j > i => pairs.push((i, j)),
                Some(_) => {}
                None => outside[i] += 1,
            }
        }
        outside[i] += graph.missing_neighbors(v);
    }
    let mut buf = vec![0; m];
    let mut mass: Vec<f64> = (0..states)
        .map(|i| {
            decode(i, q, m, &mut buf);
            let mut mono = pairs.iter().filter(|&&(a, b)| buf[a] == buf[b]).count();
            if let Some(c) = boundary {
                mono += (0..m)
                    .filter(|&k| u32::from(buf[k]) + 1 == c)
                    .map(|k| outside[k])
                    .sum::<usize>();
            }
            beta * mono as f64
        })
        .collect();
    let top = mass.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    mass.iter_mut().for_each(|x| *x = (*x - top).exp());
    let z: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|x| *x /= z);
    Ok(PottsWindow {
        q,
        beta,
        boundary,
        distribution: ExactDistribution::from_masses(sites, q, mass)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_grid;

    #[test]
    fn single_vertex_with_boundary() {
        let g = build_grid(&[5, 5]).unwrap();
        let p = potts_window(&g, &[12], 3, 0.5, Some(2), EnumerationOptions::default()).unwrap();
        let m = p.marginal(12).unwrap();
        let favoured = 2.0f64.exp();
        let z = favoured + 2.0;
        assert!((m[1] - favoured / z).abs() < 1e-15);
        assert!((m[0] - 1.0 / z).abs() < 1e-15);
    }

    #[test]
    fn free_pair_is_uniform_per_vertex() {
        let g = build_grid(&[4]).unwrap();
        let p = potts_window(&g, &[1, 2], 2, 1.0, None, EnumerationOptions::default()).unwrap();
        let m = p.marginal(1).unwrap();
        assert!((m[0] - 0.5).abs() < 1e-15);
    }
}
