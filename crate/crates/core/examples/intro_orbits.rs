//! A planar field with a repelling equilibrium, an attracting orbit of
//! radius 1 and a repelling orbit of radius 2, sampled on a 16×16 grid and
//! analysed on the cubical complex.

use combdyn::datagen::Preset;
use combdyn::pipeline::{run_pipeline, ComplexKind, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = PipelineConfig {
        complex: ComplexKind::Cubical,
        alpha: 0.9,
        side: Some(0.44),
        ..Default::default()
    };
    let a = run_pipeline(&config, &Preset::Intro.sample(), None)?;
    println!("{} cells {:?}", a.complex.len(), a.complex.counts_by_dim());
    println!("critical cells per dimension: {:?}", a.report.census);

    let radius = |c: usize| a.complex.barycenter(c).iter().map(|x| x * x).sum::<f64>().sqrt();
    for s in a.report.multi_cell() {
        let mean = s.cells.iter().map(|&c| radius(c)).sum::<f64>() / s.size as f64;
        println!(
            "{}-cycle: {} cells, mean radius {mean:.2}, {} self-intersections",
            s.d, s.size, s.self_intersections
        );
    }
    for &c in a.matching.critical.iter().filter(|&&c| a.complex.dim_of(c) == 2) {
        println!("critical square at {:?}", a.complex.barycenter(c));
    }
    Ok(())
}
