//! Observation encoding, scripted baseline policies, and per-tick reward
//! bookkeeping.
//!
//! The observation is a fixed-length vector per agent (layout documented on
//! [`observe`] and in `docs/observation_spec.md`); the two built-in policies
//! are a range-keeping heuristic and a uniform-random action sampler.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::content::{ParamBounds, RewardCoefficients, ScenarioConfig, TargetType, TriggerType};
use crate::engine::{wrap_angle, ActionCommand, Character, CombatState, PlayerPolicy};
use crate::log::{Event, EventKind};
use crate::rng::RngStream;

/// Schema upper bound of projectile_speed, used to normalize the speed
/// component of projectile observation slots.
const PROJECTILE_SPEED_MAX: f64 = 50.0;

/// Number of projectile slots in every observation; when more projectiles
/// are live, the oldest are dropped.
pub const PROJECTILE_SLOTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentError {
    DeadAgent(usize),
}

impl core::fmt::Display for AgentError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AgentError::DeadAgent(i) => write!(f, "agent {i} is dead"),
        }
    }
}

/// Observation length for a scenario: one character block per player and for
/// the boss (4 + 1 + skill count each), 4 components per projectile slot,
/// and 3 scaled parameters per skill of the observing player's class.
///
/// All players share one length only when their skill counts match; the
/// per-agent length is what this returns.
pub fn observation_len(scenario: &ScenarioConfig, agent: usize) -> usize {
    let mut n = 0;
    for class in &scenario.players {
        n += 5 + class.skills.len();
    }
    n += 5 + scenario.boss.skills.len();
    n += PROJECTILE_SLOTS * 4;
    n += scenario.players[agent].skills.len() * 3;
    n
}

fn push_character_block(out: &mut Vec<f64>, ch: &Character, observer: Option<&Character>, radius: f64) {
    if !ch.alive {
        out.extend(core::iter::repeat(0.0).take(5 + ch.skills.len()));
        return;
    }
    match observer {
        // Self slot: absolute position relative to the arena center.
        None => {
            out.push(ch.pos.x / radius);
            out.push(ch.pos.y / radius);
        }
        // Other slots: offset from the observer, clamped to the unit box.
        Some(me) => {
            out.push(((ch.pos.x - me.pos.x) / radius).clamp(-1.0, 1.0));
            out.push(((ch.pos.y - me.pos.y) / radius).clamp(-1.0, 1.0));
        }
    }
    let ms = ch.stats.movement_speed;
    out.push(ch.velocity.x / ms);
    out.push(ch.velocity.y / ms);
    out.push(ch.hp / ch.max_hp);
    for (k, skill) in ch.skills.iter().enumerate() {
        if skill.cool_time > 0.0 {
            out.push(ch.cooldowns[k] / skill.cool_time);
        } else {
            out.push(0.0);
        }
    }
}

/// Encodes the world as seen by one agent. Layout, in order:
///
/// 1. self block: position / arena_radius (center-relative), velocity /
///    movement_speed, hp / max_hp, per-skill cooldown_remaining / cool_time
/// 2. one block per teammate in ascending id (self skipped): the same
///    fields, with position replaced by the offset from the observer
///    (clamped to [−1, 1])
/// 3. the boss, same block shape as a teammate
/// 4. eight projectile slots in spawn order, newest kept on overflow:
///    offset / arena_radius (clamped), speed / 50, live flag
/// 5. the observer's own skill parameters, per skill: range, damage
///    coefficient, cast time — min-max scaled by the standard parameter
///    bounds and clamped to [0, 1]
///
/// Dead characters and empty projectile slots are zero-filled, so the
/// length is constant per scenario and every component lies in [−1, 1].
pub fn observe(
    state: &CombatState,
    agent: usize,
    scenario: &ScenarioConfig,
) -> Result<Vec<f64>, AgentError> {
    let me = &state.chars[agent];
    if !me.alive {
        return Err(AgentError::DeadAgent(agent));
    }
    let radius = state.arena_radius;
    let mut out = Vec::with_capacity(observation_len(scenario, agent));

    push_character_block(&mut out, me, None, radius);
    for i in 0..state.player_count() {
        if i != agent {
            push_character_block(&mut out, &state.chars[i], Some(me), radius);
        }
    }
    push_character_block(&mut out, state.boss(), Some(me), radius);

    let live = &state.projectiles;
    let skip = live.len().saturating_sub(PROJECTILE_SLOTS);
    for slot in 0..PROJECTILE_SLOTS {
        if let Some(p) = live.get(skip + slot) {
            out.push(((p.pos.x - me.pos.x) / radius).clamp(-1.0, 1.0));
            out.push(((p.pos.y - me.pos.y) / radius).clamp(-1.0, 1.0));
            out.push(p.speed / PROJECTILE_SPEED_MAX);
            out.push(1.0);
        } else {
            out.extend([0.0; 4]);
        }
    }

    let bounds = ParamBounds::default();
    for skill in &me.skills {
        let r = bounds.range;
        out.push(((skill.range - r.min) / r.span()).clamp(0.0, 1.0));
        let d = bounds.damage_coefficient;
        out.push(((skill.coefficient - d.min) / d.span()).clamp(0.0, 1.0));
        let c = bounds.cast_time;
        out.push(((skill.cast_time - c.min) / c.span()).clamp(0.0, 1.0));
    }
    debug_assert_eq!(out.len(), observation_len(scenario, agent));
    Ok(out)
}

/// Half-width of the angular gate: the heuristic turns in place until the
/// boss is within this bearing before it commits to radial movement.
const FACING_GATE: f64 = 15.0 * core::f64::consts::PI / 180.0;

fn usable(ch: &Character, k: usize) -> bool {
    let s = &ch.skills[k];
    s.trigger_type == TriggerType::Active
        && s.target_type == TargetType::Target
        && s.affect_enemy
        && ch.skill_ready(k)
        && ch.mp >= s.cost
}

/// Range-keeping heuristic decision with the orbit direction supplied by the
/// caller. Priorities: hold an in-progress cast (stay); cast the first
/// usable in-range skill once stationary (staying one tick to settle if the
/// agent just moved); otherwise face the boss, close to the longest owned
/// skill range, back off when inside it, and strafe along the ring when the
/// distance is already within one step of the standoff ring.
fn pt_hr_with_orbit(state: &CombatState, agent: usize, orbit_left: bool) -> ActionCommand {
    let me = &state.chars[agent];
    let boss = state.boss();
    if !boss.alive {
        return ActionCommand::Stay;
    }
    if me.casting.is_some() {
        return ActionCommand::Stay;
    }
    let to_boss = boss.pos - me.pos;
    let dist = to_boss.norm();

    let in_range_usable = (0..me.skills.len())
        .find(|&k| usable(me, k) && dist <= me.skills[k].range);
    if let Some(k) = in_range_usable {
        if me.moving {
            return ActionCommand::Stay; // settle so the cast is legal next tick
        }
        return ActionCommand::ExecuteSkill(k as u8);
    }

    let bearing = wrap_angle(libm::atan2(to_boss.y, to_boss.x) - me.facing);
    if bearing.abs() > FACING_GATE {
        return if bearing > 0.0 { ActionCommand::TurnLeft } else { ActionCommand::TurnRight };
    }
    let standoff = me.max_skill_range();
    // radial intent dominates; inside the one-step band just under the
    // standoff ring the intents tie and the orbit direction picks the strafe
    let band = me.stats.movement_speed * state.dt;
    if dist > standoff {
        ActionCommand::MoveForward
    } else if dist < standoff - band {
        ActionCommand::MoveBackward
    } else if orbit_left {
        ActionCommand::MoveLeft
    } else {
        ActionCommand::MoveRight
    }
}

/// Range-keeping heuristic ("keep maximum skill range"): approach the boss
/// to the longest owned skill range, orbit it, and fire whenever a skill is
/// ready. The orbit direction is re-drawn from the stream on every call —
/// before any branching, so stream positions never depend on game state.
pub fn pt_hr_decide(state: &CombatState, agent: usize, rng: &mut RngStream) -> ActionCommand {
    let orbit_left = rng.next_u64() & 1 == 0;
    pt_hr_with_orbit(state, agent, orbit_left)
}

/// Uniform draw over the whole discrete action set (7 locomotion commands
/// plus one execute per skill).
pub fn pt_rd_decide(rng: &mut RngStream, action_count: usize) -> ActionCommand {
    debug_assert!(action_count >= 1);
    let i = rng.next_index(action_count);
    ActionCommand::from_index(i, action_count.saturating_sub(crate::engine::LOCOMOTION_ACTIONS))
        .expect("index within the declared action count")
}

/// When the orbit direction is re-drawn: every decision tick (the default)
/// or once per episode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrbitMode {
    #[default]
    PerTick,
    PerEpisode,
}

/// The range-keeping heuristic as a stateful policy. In per-episode mode the
/// tick-0 draw is cached per agent; one parity draw is still consumed on
/// every call so both modes advance the stream identically.
#[derive(Clone, Debug, Default)]
pub struct PtHr {
    pub mode: OrbitMode,
    cached_orbit: BTreeMap<usize, bool>,
}

impl PtHr {
    pub fn per_episode() -> PtHr {
        PtHr { mode: OrbitMode::PerEpisode, cached_orbit: BTreeMap::new() }
    }
}

impl PlayerPolicy for PtHr {
    fn decide(&mut self, state: &CombatState, agent: usize, rng: &mut RngStream) -> ActionCommand {
        let parity = rng.next_u64() & 1 == 0;
        let orbit_left = match self.mode {
            OrbitMode::PerTick => parity,
            OrbitMode::PerEpisode => {
                if state.tick == 0 {
                    self.cached_orbit.insert(agent, parity);
                }
                *self.cached_orbit.get(&agent).unwrap_or(&parity)
            }
        };
        pt_hr_with_orbit(state, agent, orbit_left)
    }
}

/// Uniform-random policy over each agent's own action set.
#[derive(Clone, Debug, Default)]
pub struct PtRd;

impl PlayerPolicy for PtRd {
    fn decide(&mut self, state: &CombatState, agent: usize, rng: &mut RngStream) -> ActionCommand {
        let n = crate::engine::LOCOMOTION_ACTIONS + state.chars[agent].skills.len();
        pt_rd_decide(rng, n)
    }
}

/// Per-tick reward attribution recomputed from an event batch. Keys are
/// actor ids as they appear in the events; an agent that dealt no damage
/// this tick is simply absent.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RewardLedger {
    pub damage_reward: BTreeMap<usize, f64>,
    pub back_attack_reward: BTreeMap<usize, f64>,
    pub group_reward: f64,
}

impl RewardLedger {
    /// Combined scalar reward for one agent this tick (group share excluded).
    pub fn agent_reward(&self, agent: usize) -> f64 {
        self.damage_reward.get(&agent).copied().unwrap_or(0.0)
            + self.back_attack_reward.get(&agent).copied().unwrap_or(0.0)
    }
}

/// Recomputes one tick's rewards from its event batch with explicit
/// coefficients: normal damage earns the damage rate, back-attack damage the
/// back-attack rate, and the group reward lands once on the winning tick.
/// Sums accumulate in event order per agent, mirroring the engine's own
/// bookkeeping operation for operation, so the results agree bitwise.
pub fn compute_rewards_scaled(
    events: &[Event],
    done: bool,
    win: bool,
    coef: &RewardCoefficients,
) -> RewardLedger {
    let mut normal: BTreeMap<usize, f64> = BTreeMap::new();
    let mut back: BTreeMap<usize, f64> = BTreeMap::new();
    for e in events {
        match e.kind {
            EventKind::Hit => *normal.entry(e.actor as usize).or_insert(0.0) += e.value,
            EventKind::BackAttackHit => *back.entry(e.actor as usize).or_insert(0.0) += e.value,
            _ => {}
        }
    }
    RewardLedger {
        damage_reward: normal.into_iter().map(|(k, v)| (k, coef.damage * v)).collect(),
        back_attack_reward: back.into_iter().map(|(k, v)| (k, coef.back_attack * v)).collect(),
        group_reward: if done && win { coef.group_win } else { 0.0 },
    }
}

/// [`compute_rewards_scaled`] with the standard coefficients (0.01 per
/// normal damage point, 0.012 per back-attack damage point, 1 for the win).
pub fn compute_rewards(events: &[Event], done: bool, win: bool) -> RewardLedger {
    compute_rewards_scaled(events, done, win, &RewardCoefficients::default())
}
