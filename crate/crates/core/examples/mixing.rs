//! Disagreement probability of the plus and minus chains on the diagonal.

use std::sync::Arc;

use cftp_lab::cftp::{Dynamics, SweepRandomness, WindowLadder};
use cftp_lab::lattice::{build_grid, line_graph};
use cftp_lab::spec::RandomCluster;

fn main() -> cftp_lab::Result<()> {
    let edges = Arc::new(line_graph(&Arc::new(build_grid(&[41, 41])?))?);
    let spec = RandomCluster::new(edges.clone(), 0.3, 2.0)?;
    let ladder = WindowLadder::new(&edges, edges.center().unwrap())?;
    let dynamics = Dynamics::new(&spec, SweepRandomness::new(5));

    for n in 0..=4u64 {
        let e = dynamics.estimate_phi(&ladder, n, n as usize, 20_000)?;
        println!("phi({n},{n}) = {:.5} +- {:.5}", e.phi, e.stderr);
    }
    Ok(())
}
