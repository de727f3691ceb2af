//! Scratch probe: per-episode event breakdown at one range.

use raidsim_core::agents::PtHr;
use raidsim_core::content::benchmark_scenario;
use raidsim_core::engine::{run_episode, PlayerPolicy};
use raidsim_core::log::EventKind;

fn main() {
    let range: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(9.0);
    let seed: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(9001);
    let mut sc = benchmark_scenario(range);
    // Optional player-skill overrides: cool, coeff, cast.
    let over: Vec<f64> = std::env::args()
        .skip(3)
        .flat_map(|s| s.parse())
        .collect();
    for p in &mut sc.players {
        if let Some(&c) = over.first() {
            p.skills[0].cool_time = c;
        }
        if let Some(&c) = over.get(1) {
            p.skills[0].coefficient = c;
        }
        if let Some(&c) = over.get(2) {
            p.skills[0].cast_time = c;
        }
    }
    let mut policy = PtHr::default();
    let log = run_episode(&sc, &mut policy as &mut dyn PlayerPolicy, seed, true);
    let o = &log.outcome;
    println!(
        "win={} ticks={} dmg={:?}",
        o.win, o.duration_ticks, o.total_damage_by_agent
    );
    let mut hits = [0u32; 4];
    let mut whiffs = [0u32; 4];
    let mut boss_skill_hits = [0u32; 2];
    let mut deaths = Vec::new();
    for e in &log.events {
        let a = e.actor.max(0) as usize;
        match e.kind {
            EventKind::Hit | EventKind::BackAttackHit => {
                if e.value == 0.0 {
                    whiffs[a] += 1;
                } else {
                    hits[a] += 1;
                    if a == 3 {
                        boss_skill_hits[e.skill.max(0) as usize] += 1;
                    }
                }
            }
            EventKind::Death => deaths.push((e.tick, e.actor)),
            _ => {}
        }
    }
    println!("landed by actor={hits:?} whiffed={whiffs:?} deaths={deaths:?}");
    println!("boss hits by skill (crush, shockwave) = {boss_skill_hits:?}");
    // Trace rows are per tick: print each agent's position every 4 seconds.
    for (t, row) in o.position_trace.iter().enumerate() {
        if t % 80 != 0 {
            continue;
        }
        let pts: Vec<String> = row
            .iter()
            .map(|p| format!("({:>5.1},{:>5.1},{})", p.x, p.y, u8::from(p.alive)))
            .collect();
        println!("t={:>5.1}s  {}", t as f64 * sc.tick_dt, pts.join(" "));
    }
}
