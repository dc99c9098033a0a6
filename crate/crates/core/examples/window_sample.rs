//! Exact samples of a plus-boundary Ising window by monotone CFTP.

use std::sync::Arc;

use cftp_lab::cftp::{Dynamics, SweepRandomness};
use cftp_lab::lattice::{build_grid, BoundaryMode, Window};
use cftp_lab::spec::Ising;

fn main() -> cftp_lab::Result<()> {
    let grid = Arc::new(build_grid(&[9, 9])?);
    let spec = Ising::new(grid.clone(), 0.35)?;
    let window = Window::ball(&grid, grid.center().unwrap(), 3, BoundaryMode::Plus)?;
    let dynamics = Dynamics::new(&spec, SweepRandomness::new(1));

    let mut magnetisation = 0.0;
    let draws = 500;
    for i in 0..draws {
        let sample = dynamics.with_randomness(SweepRandomness::new(1).replica(i)).cftp_window_sample(&window)?;
        let plus = window.interior().iter().filter(|&&s| sample.config.get(s) == 1).count();
        magnetisation += (2.0 * plus as f64 - window.len() as f64) / window.len() as f64;
        if i < 3 {
            println!("draw {i}: coalesced at horizon {}, {} sweeps", sample.horizon, sample.stats.sweeps);
        }
    }
    println!("mean magnetisation over {draws} exact draws: {:.4}", magnetisation / draws as f64);
    Ok(())
}
