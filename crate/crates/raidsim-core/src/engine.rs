//! Deterministic tick-based 2D boss-raid combat.
//!
//! One `step` advances exactly one tick through a fixed pipeline:
//!
//! 1. termination pre-check (handles a boss that is already dead at entry)
//! 2. boss decision via `boss_policy` on the entry state
//! 3. command interpretation, players in id order then the boss: turns are
//!    applied, translation velocities set, skill casts started (legality is
//!    checked against the entry state; illegal requests become stay and log a
//!    rejected_action event)
//! 4. translation integration (movement_speed·dt, clamped to the arena disc);
//!    moving cancels an in-progress cast unless the skill allows it
//! 5. casting progress; completed casts consume a charge, start the cooldown,
//!    and either resolve instantly (projectile_speed 0) or spawn a homing
//!    projectile
//! 6. projectile advance and impact resolution, in spawn order
//! 7. cooldown / charge-recharge decrement
//! 8. termination check (boss dead → win; all players dead or time limit →
//!    loss)
//!
//! Damage rolls consume the episode's combat stream in a fixed order
//! (evasion, parry, crit — three draws per resolution, resolutions in
//! pipeline order), so an episode is fully determined by (scenario, player
//! policies, seed).

use alloc::vec;
use alloc::vec::Vec;

use crate::content::{GenParam, ScenarioConfig, SkillSpec, StatBlock, TargetType, TriggerType};
use crate::log::{
    Event, EventKind, EpisodeLog, EpisodeOutcome, RejectReason, TracePoint, FLAG_CRIT,
    FLAG_EVADED, FLAG_PARRIED,
};
use crate::rng::RngStream;

pub const PI: f64 = core::f64::consts::PI;
pub const TAU: f64 = core::f64::consts::TAU;

/// Fixed turn rate for the turn_left / turn_right commands, degrees per
/// second of simulated time.
pub const TURN_RATE_DEG_PER_SEC: f64 = 120.0;

/// Slack used when a decremented timer is compared against zero.
const EPS_TIME: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        libm::sqrt(self.x * self.x + self.y * self.y)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn scaled(self, k: f64) -> Vec2 {
        Vec2 { x: self.x * k, y: self.y * k }
    }
}

impl core::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl core::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2 { x: self.x - o.x, y: self.y - o.y }
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

/// Discrete per-tick command: 7 locomotion values plus one execute value per
/// owned skill. Index order (for flat action spaces and the env protocol):
/// 0 stay, 1 move_forward, 2 move_backward, 3 turn_right, 4 turn_left,
/// 5 move_left, 6 move_right, 7+k execute_skill(k).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionCommand {
    Stay,
    MoveForward,
    MoveBackward,
    TurnRight,
    TurnLeft,
    MoveLeft,
    MoveRight,
    ExecuteSkill(u8),
}

pub const LOCOMOTION_ACTIONS: usize = 7;

impl ActionCommand {
    pub fn to_index(self) -> usize {
        match self {
            ActionCommand::Stay => 0,
            ActionCommand::MoveForward => 1,
            ActionCommand::MoveBackward => 2,
            ActionCommand::TurnRight => 3,
            ActionCommand::TurnLeft => 4,
            ActionCommand::MoveLeft => 5,
            ActionCommand::MoveRight => 6,
            ActionCommand::ExecuteSkill(k) => LOCOMOTION_ACTIONS + k as usize,
        }
    }

    pub fn from_index(i: usize, skill_count: usize) -> Option<Self> {
        match i {
            0 => Some(ActionCommand::Stay),
            1 => Some(ActionCommand::MoveForward),
            2 => Some(ActionCommand::MoveBackward),
            3 => Some(ActionCommand::TurnRight),
            4 => Some(ActionCommand::TurnLeft),
            5 => Some(ActionCommand::MoveLeft),
            6 => Some(ActionCommand::MoveRight),
            _ if i < LOCOMOTION_ACTIONS + skill_count => {
                Some(ActionCommand::ExecuteSkill((i - LOCOMOTION_ACTIONS) as u8))
            }
            _ => None,
        }
    }
}

/// In-progress cast: skill index, seconds left, target locked at cast start.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Casting {
    pub skill: usize,
    pub remaining: f64,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Character {
    pub pos: Vec2,
    pub facing: f64,
    pub velocity: Vec2,
    pub hp: f64,
    pub max_hp: f64,
    pub mp: f64,
    pub alive: bool,
    /// Whether the character translated during the previous tick.
    pub moving: bool,
    pub cooldowns: Vec<f64>,
    pub charges: Vec<u8>,
    pub casting: Option<Casting>,
    pub stats: StatBlock,
    pub skills: Vec<SkillSpec>,
    pub is_boss: bool,
}

impl Character {
    /// Longest range over owned skills (the heuristic's standoff distance).
    pub fn max_skill_range(&self) -> f64 {
        self.skills.iter().map(|s| s.range).fold(0.0, f64::max)
    }

    pub fn skill_ready(&self, k: usize) -> bool {
        self.charges.get(k).map(|&c| c >= 1).unwrap_or(false)
    }
}

/// Damage parameters snapshotted from the attacker at launch time.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DamagePayload {
    pub base: f64,
    pub crit_percent: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Projectile {
    pub source: usize,
    pub target: usize,
    pub skill: usize,
    pub pos: Vec2,
    pub speed: f64,
    pub payload: DamagePayload,
}

/// Full mutable world state of one episode.
#[derive(Clone, Debug)]
pub struct CombatState {
    pub tick: u32,
    pub arena_radius: f64,
    /// Tick length in seconds, fixed for the episode.
    pub dt: f64,
    /// Players 0..P-1, boss at index P.
    pub chars: Vec<Character>,
    /// Live projectiles in spawn order.
    pub projectiles: Vec<Projectile>,
    rng: RngStream,
}

impl CombatState {
    pub fn boss_index(&self) -> usize {
        self.chars.len() - 1
    }

    pub fn player_count(&self) -> usize {
        self.chars.len() - 1
    }

    pub fn boss(&self) -> &Character {
        &self.chars[self.boss_index()]
    }

    pub fn living_players(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.player_count()).filter(|&i| self.chars[i].alive)
    }
}

/// Immutable per-episode parameters derived from the scenario.
#[derive(Clone, Debug)]
pub struct EncounterSetup {
    pub dt: f64,
    pub max_ticks: u32,
    pub arena_radius: f64,
    /// Radians turned by one turn command.
    pub turn_step: f64,
    pub reward: crate::content::RewardCoefficients,
    pub player_count: usize,
}

/// Result of one engine tick. Per-agent rewards are read from
/// `Encounter::last_rewards`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResult {
    pub done: bool,
    pub win: bool,
    pub group_reward: f64,
    /// Index into `Encounter::events` where this tick's batch starts.
    pub batch_start: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DamageOutcome {
    pub damage: f64,
    pub evaded: bool,
    pub parried: bool,
    pub crit: bool,
}

/// Rolls the damage pipeline: evasion, then parry, then base = payload with
/// an optional crit doubling, then the defender's armor multiplier. Exactly
/// three uniform draws are consumed in that order on every call.
pub fn resolve_damage(
    payload: &DamagePayload,
    defender: &StatBlock,
    rng: &mut RngStream,
) -> DamageOutcome {
    let u_evade = rng.next_f64();
    let u_parry = rng.next_f64();
    let u_crit = rng.next_f64();
    let evaded = u_evade < defender.evasion as f64 / 100.0;
    let parried = !evaded && u_parry < defender.parry / 100.0;
    let crit = u_crit < payload.crit_percent / 100.0;
    let damage = if evaded || parried {
        0.0
    } else {
        let base = payload.base * if crit { 2.0 } else { 1.0 };
        base * (1.0 - defender.armor as f64 / 100.0)
    };
    DamageOutcome { damage, evaded, parried, crit }
}

/// Skill damage roll from full attacker/defender stat blocks.
pub fn compute_damage(
    attacker: &StatBlock,
    skill: &SkillSpec,
    defender: &StatBlock,
    rng: &mut RngStream,
) -> DamageOutcome {
    let payload = DamagePayload {
        base: skill.coefficient * attacker.spell_power as f64,
        crit_percent: attacker.critical as f64,
    };
    resolve_damage(&payload, defender, rng)
}

/// True iff the attacker stands inside the boss's rear cone: the angle
/// between (attacker − boss) and −facing is at most 60° (closed boundary).
/// An attacker exactly on the boss counts as inside.
pub fn is_back_attack(attacker_pos: Vec2, boss_pos: Vec2, boss_facing: f64) -> bool {
    let to_attacker = attacker_pos - boss_pos;
    let rear = Vec2::new(-libm::cos(boss_facing), -libm::sin(boss_facing));
    // dot ≥ cos(60°)·|to_attacker| without normalizing, epsilon-closed.
    to_attacker.dot(rear) >= 0.5 * to_attacker.norm() - 1e-12
}

/// Nearest living player to the boss; ties go to the lowest id.
pub fn boss_target(state: &CombatState) -> Option<usize> {
    let boss = state.boss();
    let mut best: Option<(usize, f64)> = None;
    for i in state.living_players() {
        let d = (state.chars[i].pos - boss.pos).norm();
        if best.map(|(_, bd)| d < bd).unwrap_or(true) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Built-in boss behavior: target the nearest living player; if any skill is
/// ready with the target in range, execute the longest-range such skill
/// (ties to the lowest index); otherwise turn toward the target (one turn
/// step at a time) and walk forward once roughly facing it.
pub fn boss_policy(state: &CombatState, turn_step: f64) -> ActionCommand {
    let Some(target) = boss_target(state) else {
        return ActionCommand::Stay;
    };
    let boss = state.boss();
    let dist = (state.chars[target].pos - boss.pos).norm();
    let mut pick: Option<(usize, f64)> = None;
    for (k, skill) in boss.skills.iter().enumerate() {
        if boss.skill_ready(k) && dist <= skill.range {
            if pick.map(|(_, r)| skill.range > r).unwrap_or(true) {
                pick = Some((k, skill.range));
            }
        }
    }
    if let Some((k, _)) = pick {
        return ActionCommand::ExecuteSkill(k as u8);
    }
    let to_target = state.chars[target].pos - boss.pos;
    let bearing = wrap_angle(libm::atan2(to_target.y, to_target.x) - boss.facing);
    if bearing.abs() <= turn_step {
        ActionCommand::MoveForward
    } else if bearing > 0.0 {
        ActionCommand::TurnLeft
    } else {
        ActionCommand::TurnRight
    }
}

/// A per-player decision function. Policies may keep internal configuration
/// but draw all randomness from the stream they are handed, which the episode
/// runner derives per (episode, agent).
pub trait PlayerPolicy {
    fn decide(&mut self, state: &CombatState, agent: usize, rng: &mut RngStream) -> ActionCommand;
}

/// One running episode: world state plus ledgers and the optional recorder.
pub struct Encounter {
    setup: EncounterSetup,
    state: CombatState,
    events: Vec<Event>,
    record: bool,
    done: bool,
    win: bool,
    total_damage: Vec<f64>,
    back_damage: Vec<f64>,
    tick_normal: Vec<f64>,
    tick_back: Vec<f64>,
    last_rewards: Vec<f64>,
    trace: Vec<Vec<TracePoint>>,
}

impl Encounter {
    /// Places the boss at the arena center facing +x and the players evenly
    /// spaced on a circle of radius 0.75·arena_radius facing the boss, player
    /// 0 at 90°. If the scenario lists content_sampling sets, each listed
    /// parameter is drawn uniformly (canonical parameter order) from the
    /// episode's content stream and applied to all player skills.
    pub fn new(scenario: &ScenarioConfig, seed: u64, record: bool) -> Encounter {
        debug_assert!(scenario.check().is_empty(), "scenario must be validated");
        let seed_stream = RngStream::new(seed);
        let mut content_rng = seed_stream.fork(1);
        let combat_rng = seed_stream.fork(2);

        let player_count = scenario.players.len();
        let mut chars = Vec::with_capacity(player_count + 1);

        // Per-episode content sampling, drawn in canonical parameter order.
        let mut sampled: Vec<(GenParam, f64)> = Vec::new();
        for p in GenParam::ALL {
            if let Some(values) = scenario.content_sampling.get(&p) {
                let v = values[content_rng.next_index(values.len())];
                sampled.push((p, v));
            }
        }

        let spawn_radius = 0.75 * scenario.arena_radius;
        for (i, class) in scenario.players.iter().enumerate() {
            let angle = PI / 2.0 + i as f64 * TAU / player_count as f64;
            let pos = Vec2::new(spawn_radius * libm::cos(angle), spawn_radius * libm::sin(angle));
            let mut skills = class.skills.clone();
            for skill in &mut skills {
                for &(p, v) in &sampled {
                    p.set(skill, v);
                }
            }
            chars.push(Character {
                pos,
                facing: wrap_angle(angle + PI),
                velocity: Vec2::ZERO,
                hp: class.stats.health_point as f64,
                max_hp: class.stats.health_point as f64,
                mp: class.stats.mana_point as f64,
                alive: class.stats.health_point > 0,
                moving: false,
                cooldowns: vec![0.0; skills.len()],
                charges: skills.iter().map(|s| s.charge as u8).collect(),
                casting: None,
                stats: class.stats.clone(),
                skills,
                is_boss: false,
            });
        }

        let boss_hp =
            scenario.players[0].stats.health_point as f64 * scenario.boss_hp_multiplier;
        chars.push(Character {
            pos: Vec2::ZERO,
            facing: 0.0,
            velocity: Vec2::ZERO,
            hp: boss_hp,
            max_hp: boss_hp,
            mp: scenario.boss.stats.mana_point as f64,
            alive: boss_hp > 0.0,
            moving: false,
            cooldowns: vec![0.0; scenario.boss.skills.len()],
            charges: scenario.boss.skills.iter().map(|s| s.charge as u8).collect(),
            casting: None,
            stats: scenario.boss.stats.clone(),
            skills: scenario.boss.skills.clone(),
            is_boss: true,
        });

        let n = chars.len();
        Encounter {
            setup: EncounterSetup {
                dt: scenario.tick_dt,
                max_ticks: scenario.max_ticks(),
                arena_radius: scenario.arena_radius,
                turn_step: TURN_RATE_DEG_PER_SEC.to_radians() * scenario.tick_dt,
                reward: scenario.reward_coefficients,
                player_count,
            },
            state: CombatState {
                tick: 0,
                arena_radius: scenario.arena_radius,
                dt: scenario.tick_dt,
                chars,
                projectiles: Vec::new(),
                rng: combat_rng,
            },
            events: Vec::new(),
            record,
            done: false,
            win: false,
            total_damage: vec![0.0; n],
            back_damage: vec![0.0; n],
            tick_normal: vec![0.0; n],
            tick_back: vec![0.0; n],
            last_rewards: vec![0.0; player_count],
            trace: Vec::new(),
        }
    }

    pub fn setup(&self) -> &EncounterSetup {
        &self.setup
    }

    pub fn state(&self) -> &CombatState {
        &self.state
    }

    /// Direct state surgery for unit tests that need synthetic positions.
    #[cfg(test)]
    pub(crate) fn state_mut(&mut self) -> &mut CombatState {
        &mut self.state
    }

    pub fn done(&self) -> bool {
        self.done
    }

    pub fn win(&self) -> bool {
        self.win
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Per-player rewards of the most recent step.
    pub fn last_rewards(&self) -> &[f64] {
        &self.last_rewards
    }

    fn push_event(&mut self, e: Event) {
        if self.record {
            self.events.push(e);
        }
    }

    /// Rolls and applies one damage resolution: updates HP (clamped so a
    /// kill lands exactly on zero), the damage ledgers, and — when recording
    /// — the hit / back_attack_hit and death events.
    fn apply_hit(
        &mut self,
        source: usize,
        target: usize,
        skill: usize,
        payload: &DamagePayload,
        source_pos: Vec2,
        tick: u32,
    ) {
        let boss_index = self.state.boss_index();
        let outcome = {
            let defender = &self.state.chars[target].stats;
            resolve_damage(payload, defender, &mut self.state.rng)
        };
        let applied = outcome.damage.min(self.state.chars[target].hp);
        let back = source < boss_index
            && target == boss_index
            && is_back_attack(source_pos, self.state.chars[target].pos, self.state.chars[target].facing);
        self.state.chars[target].hp -= applied;
        self.total_damage[source] += applied;
        if back {
            self.back_damage[source] += applied;
            self.tick_back[source] += applied;
        } else {
            self.tick_normal[source] += applied;
        }
        if self.record {
            let mut e = Event::new(
                tick,
                if back { EventKind::BackAttackHit } else { EventKind::Hit },
                source as i32,
            );
            e.subject = target as i32;
            e.skill = skill as i32;
            e.value = applied;
            e.x = self.state.chars[target].pos.x;
            e.y = self.state.chars[target].pos.y;
            e.flags = (outcome.crit as u8 * FLAG_CRIT)
                | (outcome.evaded as u8 * FLAG_EVADED)
                | (outcome.parried as u8 * FLAG_PARRIED);
            self.events.push(e);
        }
        if self.state.chars[target].hp == 0.0 && self.state.chars[target].alive {
            self.state.chars[target].alive = false;
            self.state.chars[target].casting = None;
            self.state.chars[target].velocity = Vec2::ZERO;
            self.state.chars[target].moving = false;
            self.push_event(Event::new(tick, EventKind::Death, target as i32));
        }
    }

    fn reject(&mut self, agent: usize, skill: i32, reason: RejectReason, tick: u32) {
        if self.record {
            let mut e = Event::new(tick, EventKind::RejectedAction, agent as i32);
            e.skill = skill;
            e.value = reason as i32 as f64;
            self.events.push(e);
        }
    }

    fn finish(&mut self, win: bool, tick: u32) {
        self.done = true;
        self.win = win;
        if self.record {
            let mut e = Event::new(tick, EventKind::EpisodeEnd, -1);
            e.value = if win { 1.0 } else { 0.0 };
            e.x = self.state.tick as f64;
            self.events.push(e);
        }
    }

    fn interpret(&mut self, agent: usize, action: ActionCommand, tick: u32) {
        let turn_step = self.setup.turn_step;
        let boss_index = self.state.boss_index();
        let ch = &self.state.chars[agent];
        if !ch.alive {
            return;
        }
        match action {
            ActionCommand::Stay => self.state.chars[agent].velocity = Vec2::ZERO,
            ActionCommand::TurnLeft => {
                let ch = &mut self.state.chars[agent];
                ch.velocity = Vec2::ZERO;
                ch.facing = wrap_angle(ch.facing + turn_step);
            }
            ActionCommand::TurnRight => {
                let ch = &mut self.state.chars[agent];
                ch.velocity = Vec2::ZERO;
                ch.facing = wrap_angle(ch.facing - turn_step);
            }
            ActionCommand::MoveForward
            | ActionCommand::MoveBackward
            | ActionCommand::MoveLeft
            | ActionCommand::MoveRight => {
                let ch = &mut self.state.chars[agent];
                let heading = match action {
                    ActionCommand::MoveForward => ch.facing,
                    ActionCommand::MoveBackward => ch.facing + PI,
                    ActionCommand::MoveLeft => ch.facing + PI / 2.0,
                    ActionCommand::MoveRight => ch.facing - PI / 2.0,
                    _ => unreachable!(),
                };
                let speed = ch.stats.movement_speed;
                ch.velocity = Vec2::new(speed * libm::cos(heading), speed * libm::sin(heading));
            }
            ActionCommand::ExecuteSkill(k) => {
                let k = k as usize;
                self.state.chars[agent].velocity = Vec2::ZERO;
                let ch = &self.state.chars[agent];
                let Some(skill) = ch.skills.get(k) else {
                    self.reject(agent, k as i32, RejectReason::BadIndex, tick);
                    return;
                };
                if skill.trigger_type != TriggerType::Active
                    || skill.target_type != TargetType::Target
                    || !skill.affect_enemy
                {
                    self.reject(agent, k as i32, RejectReason::Unsupported, tick);
                    return;
                }
                if !ch.skill_ready(k) {
                    self.reject(agent, k as i32, RejectReason::Cooldown, tick);
                    return;
                }
                if ch.casting.is_some() && !skill.cast_on_casting {
                    self.reject(agent, k as i32, RejectReason::Casting, tick);
                    return;
                }
                if ch.moving && !skill.cast_on_moving {
                    self.reject(agent, k as i32, RejectReason::Moving, tick);
                    return;
                }
                if ch.mp < skill.cost {
                    self.reject(agent, k as i32, RejectReason::Mana, tick);
                    return;
                }
                let target = if agent == boss_index {
                    match boss_target(&self.state) {
                        Some(t) => t,
                        None => {
                            self.reject(agent, k as i32, RejectReason::NoTarget, tick);
                            return;
                        }
                    }
                } else {
                    boss_index
                };
                if !self.state.chars[target].alive {
                    self.reject(agent, k as i32, RejectReason::NoTarget, tick);
                    return;
                }
                let dist = (self.state.chars[target].pos - self.state.chars[agent].pos).norm();
                if dist > self.state.chars[agent].skills[k].range {
                    self.reject(agent, k as i32, RejectReason::Range, tick);
                    return;
                }
                let cost = self.state.chars[agent].skills[k].cost;
                let cast_time = self.state.chars[agent].skills[k].cast_time;
                let ch = &mut self.state.chars[agent];
                ch.mp -= cost;
                ch.casting = Some(Casting { skill: k, remaining: cast_time, target });
                let mut e = Event::new(tick, EventKind::CastStart, agent as i32);
                e.skill = k as i32;
                self.push_event(e);
            }
        }
    }

    /// Advances one tick. `actions` holds one command per player (dead
    /// players' entries are ignored); the boss acts via `boss_policy`.
    pub fn step(&mut self, actions: &[ActionCommand]) -> StepResult {
        let batch_start = self.events.len();
        for r in &mut self.last_rewards {
            *r = 0.0;
        }
        if self.done {
            return StepResult { done: true, win: self.win, group_reward: 0.0, batch_start };
        }
        debug_assert_eq!(actions.len(), self.setup.player_count);
        let tick = self.state.tick;
        for d in self.tick_normal.iter_mut().chain(self.tick_back.iter_mut()) {
            *d = 0.0;
        }

        // 1. termination pre-check (covers boss dead before any step runs)
        let boss_index = self.state.boss_index();
        if !self.state.chars[boss_index].alive {
            self.finish(true, tick);
            let g = self.setup.reward.group_win;
            return StepResult { done: true, win: true, group_reward: g, batch_start };
        }
        if self.state.living_players().next().is_none() {
            self.finish(false, tick);
            return StepResult { done: true, win: false, group_reward: 0.0, batch_start };
        }

        // 2. boss decision on the entry state
        let boss_action = boss_policy(&self.state, self.setup.turn_step);

        // 3. command interpretation: players in id order, then the boss
        for (i, &a) in actions.iter().enumerate() {
            self.interpret(i, a, tick);
        }
        self.interpret(boss_index, boss_action, tick);

        // 4. translations, arena clamp, cast cancellation on movement
        for i in 0..self.state.chars.len() {
            let alive = self.state.chars[i].alive;
            if !alive {
                continue;
            }
            let v = self.state.chars[i].velocity;
            let moved = v.x != 0.0 || v.y != 0.0;
            if moved {
                let dt = self.setup.dt;
                let radius = self.setup.arena_radius;
                let ch = &mut self.state.chars[i];
                let mut p = ch.pos + v.scaled(dt);
                let n = p.norm();
                if n > radius {
                    p = p.scaled(radius / n);
                }
                ch.pos = p;
                if let Some(c) = ch.casting {
                    if !ch.skills[c.skill].cast_on_moving {
                        ch.casting = None; // cancelled; no cooldown, no refund
                    }
                }
                if self.record {
                    let mut e = Event::new(tick, EventKind::Move, i as i32);
                    e.x = p.x;
                    e.y = p.y;
                    self.events.push(e);
                }
            }
            self.state.chars[i].moving = moved;
        }

        // 5. casting progress and completion
        for i in 0..self.state.chars.len() {
            if !self.state.chars[i].alive {
                continue;
            }
            let Some(mut c) = self.state.chars[i].casting else {
                continue;
            };
            c.remaining -= self.setup.dt;
            if c.remaining > EPS_TIME {
                self.state.chars[i].casting = Some(c);
                continue;
            }
            self.state.chars[i].casting = None;
            let skill = self.state.chars[i].skills[c.skill].clone();
            let mut e = Event::new(tick, EventKind::CastComplete, i as i32);
            e.skill = c.skill as i32;
            self.push_event(e);
            // consume a charge; the recharge timer runs while below max
            {
                let ch = &mut self.state.chars[i];
                if skill.cool_time > 0.0 {
                    ch.charges[c.skill] -= 1;
                    if ch.cooldowns[c.skill] == 0.0 {
                        ch.cooldowns[c.skill] = skill.cool_time;
                    }
                }
            }
            if !self.state.chars[c.target].alive {
                continue; // target died mid-cast: the cast fizzles
            }
            let payload = DamagePayload {
                base: skill.coefficient * self.state.chars[i].stats.spell_power as f64,
                crit_percent: self.state.chars[i].stats.critical as f64,
            };
            if skill.projectile_speed == 0.0 {
                let source_pos = self.state.chars[i].pos;
                self.apply_hit(i, c.target, c.skill, &payload, source_pos, tick);
            } else {
                let pos = self.state.chars[i].pos;
                self.state.projectiles.push(Projectile {
                    source: i,
                    target: c.target,
                    skill: c.skill,
                    pos,
                    speed: skill.projectile_speed,
                    payload,
                });
                if self.record {
                    let mut e = Event::new(tick, EventKind::ProjectileSpawn, i as i32);
                    e.subject = c.target as i32;
                    e.skill = c.skill as i32;
                    e.x = pos.x;
                    e.y = pos.y;
                    self.events.push(e);
                }
            }
        }

        // 6. projectile advance and impacts, in spawn order
        let mut p_idx = 0;
        while p_idx < self.state.projectiles.len() {
            let pr = self.state.projectiles[p_idx].clone();
            if !self.state.chars[pr.target].alive {
                self.state.projectiles.remove(p_idx);
                continue;
            }
            let to_target = self.state.chars[pr.target].pos - pr.pos;
            let dist = to_target.norm();
            let step_len = pr.speed * self.setup.dt;
            if dist <= step_len {
                self.state.projectiles.remove(p_idx);
                // back-attack geometry uses the source's current position
                // while it lives, else the projectile's own.
                let source_pos = if self.state.chars[pr.source].alive {
                    self.state.chars[pr.source].pos
                } else {
                    pr.pos
                };
                self.apply_hit(pr.source, pr.target, pr.skill, &pr.payload, source_pos, tick);
                continue;
            }
            let dir = to_target.scaled(1.0 / dist);
            self.state.projectiles[p_idx].pos = pr.pos + dir.scaled(step_len);
            p_idx += 1;
        }

        // 7. cooldown / recharge decrement
        for ch in &mut self.state.chars {
            if !ch.alive {
                continue;
            }
            for k in 0..ch.cooldowns.len() {
                if ch.cooldowns[k] > 0.0 {
                    let next = ch.cooldowns[k] - self.setup.dt;
                    ch.cooldowns[k] = if next > EPS_TIME { next } else { 0.0 };
                    if ch.cooldowns[k] == 0.0 {
                        let max_charges = ch.skills[k].charge as u8;
                        if ch.charges[k] < max_charges {
                            ch.charges[k] += 1;
                            if ch.charges[k] < max_charges {
                                ch.cooldowns[k] = ch.skills[k].cool_time;
                            }
                        }
                    }
                }
            }
        }

        // 8. termination, tick advance, trace, rewards
        self.state.tick += 1;
        if self.record {
            let row: Vec<TracePoint> = (0..self.setup.player_count)
                .map(|i| {
                    let ch = &self.state.chars[i];
                    TracePoint { x: ch.pos.x, y: ch.pos.y, alive: ch.alive }
                })
                .collect();
            self.trace.push(row);
        }
        let boss_dead = !self.state.chars[boss_index].alive;
        let players_dead = self.state.living_players().next().is_none();
        let timeout = self.state.tick >= self.setup.max_ticks;
        let mut group = 0.0;
        if boss_dead {
            self.finish(true, tick);
            group = self.setup.reward.group_win;
        } else if players_dead || timeout {
            self.finish(false, tick);
        }
        // Back-attack damage earns the back-attack rate instead of (not on
        // top of) the normal-damage rate.
        for i in 0..self.setup.player_count {
            self.last_rewards[i] = self.setup.reward.damage * self.tick_normal[i]
                + self.setup.reward.back_attack * self.tick_back[i];
        }
        StepResult { done: self.done, win: self.win, group_reward: group, batch_start }
    }

    pub fn into_log(self) -> EpisodeLog {
        EpisodeLog {
            events: self.events,
            outcome: EpisodeOutcome {
                win: self.win,
                duration_ticks: self.state.tick,
                total_damage_by_agent: self.total_damage,
                back_attack_damage_by_agent: self.back_damage,
                position_trace: self.trace,
            },
        }
    }

    pub fn outcome(&self) -> EpisodeOutcome {
        EpisodeOutcome {
            win: self.win,
            duration_ticks: self.state.tick,
            total_damage_by_agent: self.total_damage.clone(),
            back_attack_damage_by_agent: self.back_damage.clone(),
            position_trace: self.trace.clone(),
        }
    }
}

/// Derives the per-agent policy streams for an episode seed. Stream tags:
/// 1 = content sampling, 2 = combat rolls, 16 + agent = that agent's policy.
pub fn policy_stream(seed: u64, agent: usize) -> RngStream {
    RngStream::new(seed).fork(16 + agent as u64)
}

/// Runs one full episode with a single policy object steering every player
/// (each agent still draws from its own stream). Records events and the
/// position trace only when `record` is set.
pub fn run_episode(
    scenario: &ScenarioConfig,
    policy: &mut dyn PlayerPolicy,
    seed: u64,
    record: bool,
) -> EpisodeLog {
    let mut enc = Encounter::new(scenario, seed, record);
    let players = enc.setup().player_count;
    let mut streams: Vec<RngStream> = (0..players).map(|i| policy_stream(seed, i)).collect();
    let mut actions = vec![ActionCommand::Stay; players];
    while !enc.done() {
        for i in 0..players {
            if enc.state().chars[i].alive {
                actions[i] = policy.decide(enc.state(), i, &mut streams[i]);
            } else {
                actions[i] = ActionCommand::Stay;
            }
        }
        enc.step(&actions);
    }
    enc.into_log()
}

/// Outcome-only episode run (no event recording), for win-rate estimation.
pub fn run_episode_outcome(
    scenario: &ScenarioConfig,
    policy: &mut dyn PlayerPolicy,
    seed: u64,
) -> EpisodeOutcome {
    let mut enc = Encounter::new(scenario, seed, false);
    let players = enc.setup().player_count;
    let mut streams: Vec<RngStream> = (0..players).map(|i| policy_stream(seed, i)).collect();
    let mut actions = vec![ActionCommand::Stay; players];
    while !enc.done() {
        for i in 0..players {
            if enc.state().chars[i].alive {
                actions[i] = policy.decide(enc.state(), i, &mut streams[i]);
            } else {
                actions[i] = ActionCommand::Stay;
            }
        }
        enc.step(&actions);
    }
    enc.outcome()
}
