//! A sink sampled at six points: without subdivision the equilibrium has no
//! vertex to sit on; one round of barycentric subdivision gives it one.

use combdyn::datagen::Preset;
use combdyn::pipeline::{run_pipeline, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample = Preset::Sink.sample();
    for subdivide in [0, 1] {
        let config = PipelineConfig {
            alpha: 0.9,
            subdivide,
            ..Default::default()
        };
        let a = run_pipeline(&config, &sample, None)?;
        println!(
            "subdivide {subdivide}: {} cells {:?}, euler {}",
            a.complex.len(),
            a.complex.counts_by_dim(),
            a.complex.euler_characteristic()
        );
        for &c in &a.matching.critical {
            println!(
                "  critical {}-cell at {:?}",
                a.complex.dim_of(c),
                a.complex.barycenter(c)
            );
        }
    }
    Ok(())
}
