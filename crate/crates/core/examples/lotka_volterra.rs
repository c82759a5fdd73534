//! Predator-prey field on a 9×9 grid, Delaunay complex, alpha = 0.95.

use combdyn::datagen::Preset;
use combdyn::io::export_arrows;
use combdyn::pipeline::{run_pipeline, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = PipelineConfig {
        alpha: 0.95,
        ..Default::default()
    };
    let a = run_pipeline(&config, &Preset::LotkaVolterra.sample(), None)?;
    println!(
        "{} cells {:?}, {} admissible pairs",
        a.complex.len(),
        a.complex.counts_by_dim(),
        a.model.pairs().len()
    );
    println!("critical census {:?}", a.report.census);
    for s in a.report.multi_cell() {
        println!("{}-cycle of {} cells", s.d, s.size);
    }
    // plot data: one segment per matched pair
    let arrows = export_arrows(&a);
    for line in arrows.lines().take(4) {
        println!("{line}");
    }
    println!("... {} arrows", arrows.lines().count() - 1);
    Ok(())
}
