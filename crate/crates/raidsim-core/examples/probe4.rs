//! Scratch probe: trace one heuristic-generator walk step by step.

use raidsim_core::content::benchmark_scenario;
use raidsim_core::generator::{
    pcg_hr_decide, sample_initial_skill, Evaluator, GenConfig, SimEvaluator,
};
use raidsim_core::rng::{derive_key, RngStream};

fn main() {
    let target: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.4);
    let sample: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let cfg = GenConfig::benchmark();
    let mut eval = SimEvaluator::new(benchmark_scenario(13.0), 50, derive_key(&[4242, 0, 1]));
    eval.begin_sample(sample);
    let master = RngStream::new(derive_key(&[4242, 0]));
    let mut rng = master.fork(sample);
    let mut skill = sample_initial_skill(&cfg.template, &cfg.bounds, &mut rng);
    println!(
        "start: cool={:.2} range={:.2} coeff={:.3} cast={:.3}",
        skill.cool_time, skill.range, skill.coefficient, skill.cast_time
    );
    for step in 0..30 {
        let w = eval.win_rate(&skill);
        let next = pcg_hr_decide(w, target, &skill, &cfg.bounds, &mut rng);
        println!(
            "step {step:>2}: W={w:.2} (target {target})  ->  cool={:.2} range={:.2} coeff={:.3} cast={:.3}",
            next.cool_time, next.range, next.coefficient, next.cast_time
        );
        skill = next;
    }
    let w = eval.win_rate(&skill);
    println!("final W (50 eps) = {w:.2}");
}
