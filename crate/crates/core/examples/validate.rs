//! Exact-enumeration checks of the random-cluster specification on the 2x2 box.

use std::sync::Arc;

use num_rational::BigRational;

use cftp_lab::lattice::{build_grid, line_graph, BoundaryMode, Site, Window};
use cftp_lab::oracle::{self, EnumerationOptions};
use cftp_lab::spec::RandomCluster;

fn main() -> cftp_lab::Result<()> {
    let edges = Arc::new(line_graph(&Arc::new(build_grid(&[2, 2])?))?);
    let half = BigRational::new(1.into(), 2.into());
    let spec = RandomCluster::new_rational(edges.clone(), half, BigRational::from_integer(2.into()))?;
    let sites: Vec<Site> = (0..edges.len()).collect();
    for mode in [BoundaryMode::Plus, BoundaryMode::Minus] {
        let window = Window::from_sites(&edges, &sites, mode)?;
        let report = oracle::check_conditional(&spec, &window, EnumerationOptions::default())?;
        let fidelity = oracle::finite_alphabet_fidelity(&spec, &window, EnumerationOptions::default())?;
        println!(
            "{mode}: conditional discrepancy {:.2e}, exact {:?}, stationarity {:.2e}, finite-alphabet mismatches {}",
            report.max_discrepancy, report.exact_discrepancy, report.stationarity_error, fidelity.mismatches
        );
    }
    Ok(())
}
