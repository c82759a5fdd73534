//! Three points, one triangle: the cost matrix, the optimal matching and
//! the multi-flow it induces.

use combdyn::cost::build_cost_model;
use combdyn::datagen::Preset;
use combdyn::dynamics::analyze;
use combdyn::pipeline::{build_complex, PipelineConfig};
use combdyn::solver::{build_problem, objective_decomposition, solve_exact};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = PipelineConfig::default();
    let (complex, vectors) = build_complex(&config, &Preset::Toy.sample(), None)?;
    let model = build_cost_model(&complex, &vectors, config.alpha)?;

    println!("cost matrix (alpha = {}):", config.alpha);
    for row in model.full_matrix() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:5.2}")).collect();
        println!("  {}", cells.join(" "));
    }

    let matching = solve_exact(&build_problem(&model));
    for p in &matching.pairs {
        println!(
            "V({:?}) = {:?}",
            complex.cells()[p.lower].vertices,
            complex.cells()[p.upper].vertices
        );
    }
    println!("critical: {:?}", matching.critical);
    let d = objective_decomposition(&matching, &model);
    println!(
        "objective {:.4} = {} - {:.4} + {} x {}",
        d.total(),
        d.matched,
        d.cosine_sum,
        d.critical,
        d.alpha
    );

    let (flow, report) = analyze(&complex, &matching).map_err(|v| format!("invalid matching: {v:?}"))?;
    for c in 0..complex.len() {
        println!("Pi({c}) = {:?}", flow.successors(c));
    }
    for s in report.multi_cell() {
        println!("{}-cycle through cells {:?}", s.d, s.cells);
    }
    Ok(())
}
