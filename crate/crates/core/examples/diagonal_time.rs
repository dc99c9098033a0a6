//! Diagonal coalescence time and its tail fit.

use std::sync::Arc;

use cftp_lab::cftp::{Dynamics, SweepRandomness, WindowLadder};
use cftp_lab::experiment::{fit_tail, SurvivalCurve};
use cftp_lab::lattice::{build_grid, line_graph};
use cftp_lab::spec::RandomCluster;

fn main() -> cftp_lab::Result<()> {
    let edges = Arc::new(line_graph(&Arc::new(build_grid(&[41, 41])?))?);
    let spec = RandomCluster::new(edges.clone(), 0.3, 2.0)?;
    let ladder = WindowLadder::new(&edges, edges.center().unwrap())?;
    let dynamics = Dynamics::new(&spec, SweepRandomness::new(3));

    let times: Vec<usize> = (0..20_000)
        .map(|i| dynamics.with_randomness(SweepRandomness::new(3).replica(i)).diagonal_t(&ladder).map(|r| r.t))
        .collect::<cftp_lab::Result<_>>()?;
    let curve = SurvivalCurve::from_values_from(&times, 1, 6);
    for p in &curve.points {
        println!("Pr(T > {}) = {:.5}", p.x, p.survival);
    }
    match fit_tail(&curve) {
        Ok(fit) => println!("rate {:.3}, R^2 {:.4}", fit.rate, fit.r_squared),
        Err(e) => println!("too few points to fit ({})", e.usable_points),
    }
    Ok(())
}
