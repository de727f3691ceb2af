//! Scratch probe: scenario-shape search over boss speed / hp / damage profile.

use raidsim_core::agents::{PtHr, PtRd};
use raidsim_core::content::{benchmark_scenario, ScenarioConfig};
use raidsim_core::generator::{
    sample_skills, GenConfig, HeuristicGenerator, RandomGenerator, SimEvaluator,
};
use raidsim_core::metrics::estimate_win_rate;
use raidsim_core::rng::{derive_key, RngStream};

struct Shape {
    boss_speed: f64,
    mult: f64,
    crush_coeff: f64,
    crush_cool: f64,
    shock_coeff: f64,
    shock_cool: f64,
    evasion: i64,
    player_coeff: f64,
    time_limit: f64,
    boss_crit: i64,
    crush_range: f64,
    shock_range: f64,
    arena: f64,
    move_cast: bool,
    player_cast: f64,
    player_cool: f64,
    boss_evasion: i64,
    player_crit: i64,
}

fn shaped(range: f64, s: &Shape) -> ScenarioConfig {
    let mut sc = benchmark_scenario(range);
    sc.episode_time_limit = s.time_limit;
    sc.boss_hp_multiplier = s.mult;
    sc.boss.stats.movement_speed = s.boss_speed;
    sc.boss.stats.critical = s.boss_crit;
    sc.boss.stats.evasion = s.boss_evasion;
    sc.boss.skills[0].coefficient = s.crush_coeff;
    sc.boss.skills[0].cool_time = s.crush_cool;
    sc.boss.skills[1].coefficient = s.shock_coeff;
    sc.boss.skills[1].cool_time = s.shock_cool;
    sc.boss.skills[0].range = s.crush_range;
    sc.boss.skills[1].range = s.shock_range;
    sc.arena_radius = s.arena;
    for p in &mut sc.players {
        p.stats.evasion = s.evasion;
        p.stats.critical = s.player_crit;
        p.skills[0].coefficient = s.player_coeff;
        p.skills[0].cast_on_moving = s.move_cast;
        p.skills[0].cast_time = s.player_cast;
        p.skills[0].cool_time = s.player_cool;
    }
    sc
}

fn main() {
    let a: Vec<f64> = std::env::args().skip(1).flat_map(|s| s.parse()).collect();
    let s = Shape {
        boss_speed: a.first().copied().unwrap_or(2.0),
        mult: a.get(1).copied().unwrap_or(10.0),
        crush_coeff: a.get(2).copied().unwrap_or(0.5),
        crush_cool: a.get(3).copied().unwrap_or(3.0),
        shock_coeff: a.get(4).copied().unwrap_or(0.5),
        shock_cool: a.get(5).copied().unwrap_or(8.0),
        evasion: a.get(6).copied().unwrap_or(0.0) as i64,
        player_coeff: a.get(7).copied().unwrap_or(0.8),
        time_limit: a.get(9).copied().unwrap_or(60.0),
        boss_crit: a.get(10).copied().unwrap_or(0.0) as i64,
        crush_range: a.get(11).copied().unwrap_or(6.0),
        shock_range: a.get(12).copied().unwrap_or(12.0),
        arena: a.get(13).copied().unwrap_or(20.0),
        move_cast: a.get(14).copied().unwrap_or(0.0) > 0.5,
        player_cast: a.get(15).copied().unwrap_or(1.0),
        player_cool: a.get(16).copied().unwrap_or(3.0),
        boss_evasion: a.get(17).copied().unwrap_or(0.0) as i64,
        player_crit: a.get(18).copied().unwrap_or(0.0) as i64,
    };
    let verbose = a.get(8).copied().unwrap_or(0.0) > 0.5;
    print!(
        "spd {} mult {} crush {}/{} shock {}/{} ev {} pc {}: ",
        s.boss_speed,
        s.mult,
        s.crush_coeff,
        s.crush_cool,
        s.shock_coeff,
        s.shock_cool,
        s.evasion,
        s.player_coeff
    );
    print!(
        "tl {} bc {} br {}/{} ar {}: ",
        s.time_limit, s.boss_crit, s.crush_range, s.shock_range, s.arena
    );
    print!("mc {} pcast {} pcool {} bev {} pcrit {}: ", s.move_cast, s.player_cast, s.player_cool, s.boss_evasion, s.player_crit);
    for range in [5.0, 9.0, 13.0, 17.0] {
        let sc = shaped(range, &s);
        let hr = estimate_win_rate(&sc, &mut PtHr::default(), 200, 1000);
        print!("{:.3} ", hr.mean);
    }
    let rd5 = estimate_win_rate(&shaped(5.0, &s), &mut PtRd, 200, 1000);
    let rd17 = estimate_win_rate(&shaped(17.0, &s), &mut PtRd, 200, 1000);
    println!(" rd5 {:.3} rd17 {:.3}", rd5.mean, rd17.mean);

    let mut cfg = GenConfig::benchmark();
    cfg.template = shaped(13.0, &s).players[0].skills[0].clone();
    let eval_scenario = shaped(13.0, &s);
    for method in ["hr", "rd"] {
        let mut total_err = 0.0;
        let mut count = 0;
        let start = std::time::Instant::now();
        let mut per_target = Vec::new();
        for (ti, target) in [0.1, 0.25, 0.4, 0.55, 0.7].iter().enumerate() {
            let master = RngStream::new(derive_key(&[4242, ti as u64]));
            let skills = if method == "hr" {
                let mut eval = SimEvaluator::new(
                    eval_scenario.clone(),
                    100,
                    derive_key(&[4242, ti as u64, 1]),
                );
                let mut g = HeuristicGenerator { evaluator: &mut eval };
                sample_skills(&mut g, *target, 12, 50, &master, &cfg)
            } else {
                let mut g = RandomGenerator::default();
                sample_skills(&mut g, *target, 12, 50, &master, &cfg)
            };
            let mut t_err = 0.0;
            for (sidx, skill) in skills.iter().enumerate() {
                let mut sc = eval_scenario.clone();
                for p in &mut sc.players {
                    p.skills[0] = skill.clone();
                }
                let base = derive_key(&[4242, ti as u64, 2, sidx as u64]);
                let est = estimate_win_rate(&sc, &mut PtHr::default(), 100, base);
                if verbose && method == "hr" {
                    println!(
                        "    t {target} end cool {:5.2} rng {:5.2} cf {:4.2} cast {:4.2} -> W {:.2}",
                        skill.cool_time, skill.range, skill.coefficient, skill.cast_time, est.mean
                    );
                }
                t_err += (est.mean - target).abs();
                total_err += (est.mean - target).abs();
                count += 1;
            }
            per_target.push(t_err / skills.len() as f64);
        }
        println!(
            "  {method}: |err| {:.3} per-target {:?} ({:.0}s)",
            total_err / count as f64,
            per_target
                .iter()
                .map(|e| (e * 1000.0).round() / 1000.0)
                .collect::<Vec<f64>>(),
            start.elapsed().as_secs_f64()
        );
    }
}
