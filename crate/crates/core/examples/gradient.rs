//! Two ways to a gradient field on the tilted toy: lower alpha until the
//! optimum is acyclic, or forbid its cycles with constraints.

use combdyn::cost::build_cost_model;
use combdyn::datagen::Preset;
use combdyn::gradient::{
    all_critical_threshold, alpha_sweep, default_alpha_grid, enumerate_potential_cycles, is_gradient,
    solve_gradient_constrained,
};
use combdyn::pipeline::{build_complex, PipelineConfig};
use combdyn::solver::{build_problem, solve_exact};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (complex, vectors) = build_complex(&PipelineConfig::default(), &Preset::GradientToy.sample(), None)?;
    let model = build_cost_model(&complex, &vectors, 0.15)?;
    let problem = build_problem(&model);

    let m = solve_exact(&problem);
    let (gradient, cycle) = is_gradient(&complex, &m);
    println!("alpha 0.15: objective {:.6}, gradient {gradient}", m.objective);
    if let Some(c) = cycle {
        println!("  cycle {:?}", c.pairs);
    }

    let grid: Vec<f64> = default_alpha_grid().into_iter().filter(|&a| a <= 0.15).collect();
    let sweep = alpha_sweep(&complex, &vectors, &grid)?;
    println!(
        "sweep: alpha {} after {} solves, {} critical",
        sweep.alpha,
        sweep.tried,
        sweep.matching.critical.len()
    );

    let constrained = solve_gradient_constrained(&problem, &complex, 1_000_000)?;
    println!(
        "constraints: {} generated, objective {:.6}, {} critical",
        constrained.constraints.len(),
        constrained.matching.objective,
        constrained.matching.critical.len()
    );
    println!(
        "cycles a matching could close: {}",
        enumerate_potential_cycles(&complex).len()
    );
    println!(
        "below alpha {:.4} every cell is critical",
        all_critical_threshold(&model).value
    );
    Ok(())
}
