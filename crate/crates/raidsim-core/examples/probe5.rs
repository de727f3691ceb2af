//! Scratch probe: criterion-2/3 gradient and criterion-4 proxy vs boss HP.

use raidsim_core::agents::{PtHr, PtRd};
use raidsim_core::content::benchmark_scenario;
use raidsim_core::generator::{
    sample_skills, GenConfig, HeuristicGenerator, RandomGenerator, SimEvaluator,
};
use raidsim_core::metrics::estimate_win_rate;
use raidsim_core::rng::{derive_key, RngStream};

fn main() {
    let mult: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8.0);
    let samples: usize = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);

    // Criterion 2/3 proxy: gradient at 200 episodes.
    print!("mult {mult:>5}: gradient ");
    for range in [5.0, 9.0, 13.0, 17.0] {
        let mut sc = benchmark_scenario(range);
        sc.boss_hp_multiplier = mult;
        let hr = estimate_win_rate(&sc, &mut PtHr::default(), 200, 1000);
        print!("{:.3} ", hr.mean);
    }
    let mut sc5 = benchmark_scenario(5.0);
    sc5.boss_hp_multiplier = mult;
    let rd5 = estimate_win_rate(&sc5, &mut PtRd, 200, 1000);
    println!(" rd5 {:.3}", rd5.mean);

    // Criterion 4 proxy: HR vs RD controllability error.
    let mut cfg = GenConfig::benchmark();
    cfg.template = {
        let mut sc = benchmark_scenario(13.0);
        sc.boss_hp_multiplier = mult;
        sc.players[0].skills[0].clone()
    };
    let mut eval_scenario = benchmark_scenario(13.0);
    eval_scenario.boss_hp_multiplier = mult;

    for method in ["hr", "rd"] {
        let mut total_err = 0.0;
        let mut count = 0;
        let start = std::time::Instant::now();
        for (ti, target) in [0.1, 0.3, 0.5, 0.7].iter().enumerate() {
            let master = RngStream::new(derive_key(&[4242, ti as u64]));
            let skills = if method == "hr" {
                let mut eval = SimEvaluator::new(
                    eval_scenario.clone(),
                    50,
                    derive_key(&[4242, ti as u64, 1]),
                );
                let mut g = HeuristicGenerator { evaluator: &mut eval };
                sample_skills(&mut g, *target, samples, 30, &master, &cfg)
            } else {
                let mut g = RandomGenerator::default();
                sample_skills(&mut g, *target, samples, 30, &master, &cfg)
            };
            for (s, skill) in skills.iter().enumerate() {
                let mut sc = eval_scenario.clone();
                for p in &mut sc.players {
                    p.skills[0] = skill.clone();
                }
                let base = derive_key(&[4242, ti as u64, 2, s as u64]);
                let est = estimate_win_rate(&sc, &mut PtHr::default(), 100, base);
                total_err += (est.mean - target).abs();
                count += 1;
            }
        }
        println!(
            "  {method}: mean |err| = {:.4} over {count} samples  ({:.1}s)",
            total_err / count as f64,
            start.elapsed().as_secs_f64()
        );
    }
}
