//! Euler samples of the Lorenz system on a voxel complex. Pass a voxel side
//! as the first argument to change the resolution.

use combdyn::datagen::{gen_lorenz_trajectory, Preset, LORENZ_DESK_SIDE, LORENZ_X0};
use combdyn::pipeline::{run_pipeline, ComplexKind, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let side = match std::env::args().nth(1) {
        Some(s) => s.parse()?,
        None => LORENZ_DESK_SIDE,
    };

    // the step used in the literature leaves the attractor within a few steps
    let coarse = gen_lorenz_trajectory(LORENZ_X0, 0.2, 1000)?;
    println!(
        "dt = 0.2: {} finite points, truncated = {}",
        coarse.sample.len(),
        coarse.truncated
    );

    let config = PipelineConfig {
        complex: ComplexKind::Voxel,
        side: Some(side),
        ..Default::default()
    };
    let a = run_pipeline(&config, &Preset::LorenzDesk.sample(), None)?;
    println!("side {side}: {} cells {:?}", a.complex.len(), a.complex.counts_by_dim());
    println!("critical census {:?}", a.report.census);
    for s in a.report.multi_cell() {
        println!(
            "{}-cycle: {} cells of dims {:?}, {} self-intersections",
            s.d, s.size, s.dims, s.self_intersections
        );
    }
    Ok(())
}
