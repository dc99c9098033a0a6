//! Coding radius of the random-cluster model at an edge deep inside a box.

use std::sync::Arc;

use cftp_lab::cftp::{Dynamics, SweepRandomness, WindowLadder};
use cftp_lab::experiment::SurvivalCurve;
use cftp_lab::lattice::{build_grid, line_graph};
use cftp_lab::spec::RandomCluster;

fn main() -> cftp_lab::Result<()> {
    let edges = Arc::new(line_graph(&Arc::new(build_grid(&[41, 41])?))?);
    let spec = RandomCluster::new(edges.clone(), 0.3, 2.0)?;
    let ladder = WindowLadder::new(&edges, edges.center().unwrap())?;
    let dynamics = Dynamics::new(&spec, SweepRandomness::new(2));

    let transcript = dynamics.coding_radius(&ladder)?;
    for step in &transcript.steps {
        println!("{step:?}");
    }

    let radii: Vec<usize> = (0..5000)
        .map(|i| dynamics.with_randomness(SweepRandomness::new(2).replica(i)).coding_radius(&ladder).map(|t| t.r_tilde))
        .collect::<cftp_lab::Result<_>>()?;
    for p in SurvivalCurve::from_values(&radii, 5).points {
        println!("Pr(R > {}) = {:.4} +- {:.4}", p.x, p.survival, p.stderr);
    }
    Ok(())
}
