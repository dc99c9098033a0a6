//! Digit order labels: how far out two neighbours must look to be ordered.

use cftp_lab::cftp::SweepRandomness;
use cftp_lab::experiment::SurvivalCurve;
use cftp_lab::lattice::build_grid;
use cftp_lab::order::{order_radius, OrderKind, OrderLabels};

fn main() -> cftp_lab::Result<()> {
    let grid = build_grid(&[31, 31])?;
    let u = grid.center().unwrap();
    let v = grid.translate(u, &[1, 0]).unwrap();
    let d = 4;
    let radii: Vec<usize> = (0..50_000)
        .map(|i| {
            let labels = OrderLabels::derived(OrderKind::Digits { d }, SweepRandomness::new(7).replica(i), 0)?;
            Ok(order_radius(&grid, &labels, u, v).unwrap_or(usize::MAX))
        })
        .collect::<cftp_lab::Result<_>>()?;
    for p in SurvivalCurve::from_values(&radii, 5).points {
        println!("Pr(R > {}) = {:.2e}   D^-r = {:.2e}", p.x, p.survival, f64::from(d).powi(-(p.x as i32)));
    }
    Ok(())
}
