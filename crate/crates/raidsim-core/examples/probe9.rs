//! Scratch probe: time-resolved generator walk trajectories.

use raidsim_core::content::benchmark_scenario;
use raidsim_core::generator::{
    gen_env_reset, pcg_hr_decide, Evaluator, GenConfig, SimEvaluator,
};
use raidsim_core::rng::{derive_key, RngStream};

fn main() {
    let a: Vec<f64> = std::env::args().skip(1).flat_map(|s| s.parse()).collect();
    let target = a.first().copied().unwrap_or(0.4);
    let walks = a.get(1).copied().unwrap_or(12.0) as u64;
    let steps = a.get(2).copied().unwrap_or(50.0) as usize;

    let mut sc = benchmark_scenario(13.0);
    if let Some(&m) = a.get(3) {
        sc.boss_hp_multiplier = m;
    }
    let mut cfg = GenConfig::benchmark();
    cfg.template = sc.players[0].skills[0].clone();

    for w in 0..walks {
        let mut eval = SimEvaluator::new(sc.clone(), 100, derive_key(&[909, w, 1]));
        let mut rng = RngStream::new(derive_key(&[909, w, 2]));
        let ep = gen_env_reset(&cfg, target, &mut rng, &mut eval);
        let mut skill = ep.skill.clone();
        let mut w_c = ep.win_rate;
        print!("w{w:02} {:4.2}", w_c);
        for _ in 0..steps {
            skill = pcg_hr_decide(w_c, target, &skill, &cfg.bounds, &mut rng);
            w_c = eval.win_rate(&skill);
            print!(" {:3.0}", w_c * 100.0);
        }
        println!(
            "  | end cool {:5.2} rng {:5.2} cf {:4.2} cast {:4.2}",
            skill.cool_time, skill.range, skill.coefficient, skill.cast_time
        );
    }
}
