//! Scratch probe: controllability error for both generators at a few targets.

use raidsim_core::agents::PtHr;
use raidsim_core::content::benchmark_scenario;
use raidsim_core::generator::{
    sample_skills, GenConfig, HeuristicGenerator, RandomGenerator, SimEvaluator,
};
use raidsim_core::metrics::estimate_win_rate;
use raidsim_core::rng::{derive_key, RngStream};

fn main() {
    let samples: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let rollout: u32 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let gen_eps: u32 = std::env::args()
        .nth(3)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let master_seed: u64 = 4242;
    let cfg = GenConfig::benchmark();
    let eval_scenario = benchmark_scenario(13.0);

    for method in ["hr", "rd"] {
        let mut total_err = 0.0;
        let mut count = 0;
        let start = std::time::Instant::now();
        for (ti, target) in [0.1, 0.4, 0.7].iter().enumerate() {
            let master = RngStream::new(derive_key(&[master_seed, ti as u64]));
            let skills = if method == "hr" {
                let mut eval = SimEvaluator::new(
                    eval_scenario.clone(),
                    gen_eps,
                    derive_key(&[master_seed, ti as u64, 1]),
                );
                let mut g = HeuristicGenerator { evaluator: &mut eval };
                sample_skills(&mut g, *target, samples, rollout, &master, &cfg)
            } else {
                let mut g = RandomGenerator::default();
                sample_skills(&mut g, *target, samples, rollout, &master, &cfg)
            };
            for (s, skill) in skills.iter().enumerate() {
                let mut sc = eval_scenario.clone();
                for p in &mut sc.players {
                    p.skills[0] = skill.clone();
                }
                let base = derive_key(&[master_seed, ti as u64, 2, s as u64]);
                let est = estimate_win_rate(&sc, &mut PtHr::default(), 100, base);
                total_err += (est.mean - target).abs();
                count += 1;
            }
        }
        println!(
            "{method}: mean |err| = {:.4} over {count} samples  ({:.1}s)",
            total_err / count as f64,
            start.elapsed().as_secs_f64()
        );
    }
}
