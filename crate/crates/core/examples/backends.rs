//! The assignment solver and branch and bound return the same optimum.

use std::time::Instant;

use combdyn::cost::build_cost_model;
use combdyn::datagen::Preset;
use combdyn::pipeline::{build_complex, PipelineConfig};
use combdyn::solver::{build_problem, solve_with, Backend};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (preset, alpha) in [(Preset::Toy, 0.75), (Preset::Sink, 0.9), (Preset::GradientToy, 0.15)] {
        let (complex, vectors) = build_complex(&PipelineConfig::default(), &preset.sample(), None)?;
        let problem = build_problem(&build_cost_model(&complex, &vectors, alpha)?);
        for backend in [Backend::Assignment, Backend::BranchAndBound] {
            let t = Instant::now();
            let m = solve_with(&problem, backend)?;
            println!(
                "{preset:>12} {backend:?}: objective {:.6}, {} pairs, {:.2?}",
                m.objective,
                m.pairs.len(),
                t.elapsed()
            );
        }
    }
    Ok(())
}
