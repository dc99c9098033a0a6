//! Edwards-Sokal colouring of exact random-cluster samples, against the Potts oracle.

use std::sync::Arc;

use cftp_lab::cftp::{Dynamics, SweepRandomness};
use cftp_lab::escoupling::{es_color, ColorSources, ColorVariant};
use cftp_lab::experiment::{centre_block, edges_touching};
use cftp_lab::lattice::{build_grid, line_graph, BoundaryMode};
use cftp_lab::oracle::{potts_window, EnumerationOptions};
use cftp_lab::spec::RandomCluster;

fn main() -> cftp_lab::Result<()> {
    let (p, q) = (0.5, 3u32);
    let base = Arc::new(build_grid(&[6, 6])?);
    let edges = Arc::new(line_graph(&base)?);
    let spec = RandomCluster::new(edges.clone(), p, f64::from(q))?;
    let block = centre_block(&base, 2)?;
    let window = edges_touching(&edges, &block, BoundaryMode::Plus)?;
    let dynamics = Dynamics::new(&spec, SweepRandomness::new(6));

    let draws = 20_000;
    let mut counts = vec![[0u32; 3]; block.len()];
    for i in 0..draws {
        let rnd = SweepRandomness::new(6).replica(i);
        let sample = dynamics.with_randomness(rnd).cftp_window_sample(&window)?;
        let sources = ColorSources::draw(&rnd, base.len(), q, 0);
        for (v, c) in es_color(sample.config.spins(), &window, &sources, ColorVariant::ArgminZ, 1)? {
            if let Some(k) = block.iter().position(|&b| b == v) {
                counts[k][(c - 1) as usize] += 1;
            }
        }
    }
    let oracle = potts_window(&base, &block, q as usize, -(1.0 - p).ln(), Some(1), EnumerationOptions::default())?;
    for (k, &v) in block.iter().enumerate() {
        let freq: Vec<String> = counts[k].iter().map(|&c| format!("{:.3}", f64::from(c) / draws as f64)).collect();
        let exact: Vec<String> = oracle.marginal(v)?.iter().map(|x| format!("{x:.3}")).collect();
        println!("vertex {v}: sampled [{}], exact [{}]", freq.join(", "), exact.join(", "));
    }
    Ok(())
}
