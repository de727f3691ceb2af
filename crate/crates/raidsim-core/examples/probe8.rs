//! Scratch probe: full-scale acceptance rehearsal for gradient + controllability.

use raidsim_core::agents::{PtHr, PtRd};
use raidsim_core::content::benchmark_scenario;
use raidsim_core::generator::{
    sample_skills, GenConfig, HeuristicGenerator, RandomGenerator, SimEvaluator,
};
use raidsim_core::metrics::estimate_win_rate;
use raidsim_core::rng::{derive_key, RngStream};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let samples: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let gen_eps: u32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100);
    let steps: u32 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(50);

    for seeds in [1000u64, 77777] {
        print!("gradient(500 eps, seed base {seeds}): ");
        for range in [5.0, 9.0, 13.0, 17.0] {
            let sc = benchmark_scenario(range);
            let hr = estimate_win_rate(&sc, &mut PtHr::default(), 500, seeds);
            print!("{:.3} ", hr.mean);
        }
        let rd5 = estimate_win_rate(&benchmark_scenario(5.0), &mut PtRd, 500, seeds);
        let rd17 = estimate_win_rate(&benchmark_scenario(17.0), &mut PtRd, 500, seeds);
        println!(" rd5 {:.3} rd17 {:.3}", rd5.mean, rd17.mean);
    }

    let eval_scenario = benchmark_scenario(13.0);
    let mut cfg = GenConfig::benchmark();
    cfg.template = eval_scenario.players[0].skills[0].clone();
    let targets = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];
    for method in ["hr", "rd"] {
        let start = std::time::Instant::now();
        let mut per_target = Vec::new();
        let mut total_err = 0.0;
        let mut count = 0usize;
        for (ti, target) in targets.iter().enumerate() {
            let master = RngStream::new(derive_key(&[4242, ti as u64]));
            let skills = if method == "hr" {
                let mut eval = SimEvaluator::new(
                    eval_scenario.clone(),
                    gen_eps,
                    derive_key(&[4242, ti as u64, 1]),
                );
                let mut g = HeuristicGenerator { evaluator: &mut eval };
                sample_skills(&mut g, *target, samples, steps, &master, &cfg)
            } else {
                let mut g = RandomGenerator::default();
                sample_skills(&mut g, *target, samples, steps, &master, &cfg)
            };
            let mut t_err = 0.0;
            for (sidx, skill) in skills.iter().enumerate() {
                let mut sc = eval_scenario.clone();
                for p in &mut sc.players {
                    p.skills[0] = skill.clone();
                }
                let base = derive_key(&[4242, ti as u64, 2, sidx as u64]);
                let est = estimate_win_rate(&sc, &mut PtHr::default(), 100, base);
                t_err += (est.mean - target).abs();
                total_err += (est.mean - target).abs();
                count += 1;
            }
            per_target.push((t_err / skills.len() as f64 * 1000.0).round() / 1000.0);
        }
        println!(
            "{method}: |err| {:.4} per-target {:?} ({:.0}s)",
            total_err / count as f64,
            per_target,
            start.elapsed().as_secs_f64()
        );
    }
}
