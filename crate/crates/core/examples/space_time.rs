//! Space-time coding radius with digit order labels and the finite update.

use std::sync::Arc;

use cftp_lab::cftp::{Dynamics, SweepRandomness, WindowLadder};
use cftp_lab::lattice::{build_grid, line_graph};
use cftp_lab::order::OrderKind;
use cftp_lab::spec::RandomCluster;

fn main() -> cftp_lab::Result<()> {
    let edges = Arc::new(line_graph(&Arc::new(build_grid(&[41, 41])?))?);
    let spec = RandomCluster::new(edges.clone(), 0.3, 2.0)?;
    let ladder = WindowLadder::new(&edges, edges.center().unwrap())?;
    let dynamics = Dynamics::new(&spec, SweepRandomness::new(4))
        .with_order(OrderKind::default_digits(&edges))
        .with_finite_alphabet()?;

    let mut histogram = [0u32; 12];
    for i in 0..2000 {
        let report = dynamics.with_randomness(SweepRandomness::new(4).replica(i)).space_time_t(&ladder)?;
        histogram[report.t_star.min(11)] += 1;
    }
    for (t, count) in histogram.iter().enumerate().filter(|x| *x.1 > 0) {
        println!("T* = {t}: {count}");
    }
    Ok(())
}
