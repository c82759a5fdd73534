//! Dowker complex on a few landmarks, vectors averaged over witnesses.

use combdyn::builders::{dowker_complex, DowkerRelation};
use combdyn::datagen::{gen_grid_field, GridSpec, PlanarModel};
use combdyn::pipeline::{run_pipeline, ComplexKind, DowkerInput, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec {
        start: [-1.5, -1.5],
        step: 0.25,
        counts: [13, 13],
    };
    let sample = gen_grid_field(PlanarModel::Sink, &grid)?;
    let landmarks: Vec<Vec<f64>> = (-1..=1)
        .flat_map(|i| (-1..=1).map(move |j| vec![f64::from(i), f64::from(j)]))
        .collect();

    let d = dowker_complex(&DowkerRelation {
        data: sample.points.clone(),
        landmarks: landmarks.clone(),
        radius: 0.8,
    })?;
    for c in d.complex.cells().iter().filter(|c| c.dim == 2) {
        println!(
            "triangle {:?} witnessed by {} points",
            c.vertices,
            d.witnesses[c.id].len()
        );
    }

    let config = PipelineConfig {
        complex: ComplexKind::Dowker,
        radius: Some(0.8),
        alpha: 0.9,
        ..Default::default()
    };
    let input = DowkerInput {
        landmarks,
        relation: None,
    };
    let a = run_pipeline(&config, &sample, Some(&input))?;
    println!("{} cells, critical census {:?}", a.complex.len(), a.report.census);
    for &c in &a.matching.critical {
        println!("critical {:?}", a.complex.cells()[c].vertices);
    }
    Ok(())
}
