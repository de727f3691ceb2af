//! Grid sweep of win rate over the generated-skill parameter box.

use raidsim_core::agents::PtHr;
use raidsim_core::content::benchmark_scenario;
use raidsim_core::metrics::estimate_win_rate;
use raidsim_core::rng::derive_key;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let boss_speed: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let mult: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let crush_coeff: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let crush_cool: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let shock_coeff: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let shock_cool: f64 = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(8.0);
    let evasion: i64 = args.get(7).and_then(|s| s.parse().ok()).unwrap_or(0);
    let eps: u32 = args.get(8).and_then(|s| s.parse().ok()).unwrap_or(60);
    let boss_evasion: i64 = args.get(9).and_then(|s| s.parse().ok()).unwrap_or(0);
    let time_limit: f64 = args.get(10).and_then(|s| s.parse().ok()).unwrap_or(60.0);
    let boss_crit: i64 = args.get(11).and_then(|s| s.parse().ok()).unwrap_or(0);

    let cools = [0.5, 3.0, 5.5, 10.5, 15.5, 20.5, 30.5, 40.5];
    let ranges = [2.0, 5.0, 8.0, 11.0, 14.0, 17.0, 20.0];
    let coeffs = [0.5, 0.75, 1.0];
    let casts = [0.5, 1.0, 1.5];

    let mut live = 0usize;
    let mut total = 0usize;
    for &coeff in &coeffs {
        for &cast in &casts {
            println!("coeff {coeff} cast {cast}  (rows=cool, cols=range {ranges:?})");
            for &cool in &cools {
                let mut row = String::new();
                for &range in &ranges {
                    let mut sc = benchmark_scenario(range);
                    sc.boss.stats.movement_speed = boss_speed;
                    sc.boss.stats.evasion = boss_evasion;
                    sc.boss.stats.critical = boss_crit;
                    sc.episode_time_limit = time_limit;
                    sc.boss_hp_multiplier = mult;
                    sc.boss.skills[0].coefficient = crush_coeff;
                    sc.boss.skills[0].cool_time = crush_cool;
                    sc.boss.skills[1].coefficient = shock_coeff;
                    sc.boss.skills[1].cool_time = shock_cool;
                    for p in &mut sc.players {
                        p.stats.evasion = evasion;
                        p.skills[0].cool_time = cool;
                        p.skills[0].cast_time = cast;
                        p.skills[0].coefficient = coeff;
                    }
                    let key = derive_key(&[
                        7000,
                        (cool * 10.0) as u64,
                        (range * 10.0) as u64,
                        (coeff * 100.0) as u64,
                        (cast * 100.0) as u64,
                    ]);
                    let est = estimate_win_rate(&sc, &mut PtHr::default(), eps, key);
                    total += 1;
                    if est.mean > 0.02 && est.mean < 0.98 {
                        live += 1;
                    }
                    row.push_str(&format!(" {:4.2}", est.mean));
                }
                println!("  cool {cool:4}: {row}");
            }
        }
    }
    println!(
        "live cells (0.02<W<0.98): {live}/{total} = {:.2}",
        live as f64 / total as f64
    );
}
