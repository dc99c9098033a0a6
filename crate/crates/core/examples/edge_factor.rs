//! Handing every edge one payload slot of one endpoint.

use cftp_lab::cftp::SweepRandomness;
use cftp_lab::escoupling::{edge_factor_psi, PsiVariant};
use cftp_lab::lattice::build_grid;
use cftp_lab::rng::Stream;

fn main() -> cftp_lab::Result<()> {
    let grid = build_grid(&[3, 3])?;
    let rnd = SweepRandomness::new(8);
    let z: Vec<f64> = (0..grid.len()).map(|v| rnd.uniform(v, 0, Stream::ColorRank)).collect();
    let y: Vec<Vec<u64>> = (0..grid.len()).map(|v| (0..4).map(|k| rnd.bits(v, k, Stream::Payload)).collect()).collect();
    for variant in [PsiVariant::OrderBased, PsiVariant::Direction] {
        println!("{variant:?}");
        for p in edge_factor_psi(&grid, &y, &z, variant)? {
            println!("  edge {:?} <- vertex {} slot {}", p.edge, p.source, p.slot);
        }
    }
    Ok(())
}
