//! Episode event stream and outcome ledger.
//!
//! Every state change the engine makes is represented by an ordered event, so
//! a recorded log fully determines the HP/reward evolution of an episode and
//! can be replayed for conservation checks or exported byte-for-byte.

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EventKind {
    Move,
    CastStart,
    CastComplete,
    ProjectileSpawn,
    Hit,
    BackAttackHit,
    Death,
    RejectedAction,
    EpisodeEnd,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Move => "move",
            EventKind::CastStart => "cast_start",
            EventKind::CastComplete => "cast_complete",
            EventKind::ProjectileSpawn => "projectile_spawn",
            EventKind::Hit => "hit",
            EventKind::BackAttackHit => "back_attack_hit",
            EventKind::Death => "death",
            EventKind::RejectedAction => "rejected_action",
            EventKind::EpisodeEnd => "episode_end",
        }
    }
}

/// Why an execute_skill request was converted into stay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    Cooldown = 1,
    Mana = 2,
    Casting = 3,
    Moving = 4,
    Range = 5,
    NoTarget = 6,
    BadIndex = 7,
    Unsupported = 8,
}

/// Damage outcome flag bits stored in `Event::flags`.
pub const FLAG_CRIT: u8 = 1;
pub const FLAG_EVADED: u8 = 2;
pub const FLAG_PARRIED: u8 = 4;

/// One engine event. Field use by kind:
/// - move: actor, (x, y) = position after the move
/// - cast_start / cast_complete: actor, skill
/// - projectile_spawn: actor, subject = target, skill, (x, y) = spawn point
/// - hit / back_attack_hit: actor = source, subject = target, skill,
///   value = applied damage, flags, (x, y) = impact point
/// - death: actor
/// - rejected_action: actor, skill = requested index (or -1),
///   value = reject reason code
/// - episode_end: value = 1 win / 0 loss, x = duration in ticks
///
/// Unused numeric fields are 0; unused id fields are -1.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Event {
    pub tick: u32,
    pub kind: EventKind,
    pub actor: i32,
    pub subject: i32,
    pub skill: i32,
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub flags: u8,
}

impl Event {
    pub fn new(tick: u32, kind: EventKind, actor: i32) -> Self {
        Event { tick, kind, actor, subject: -1, skill: -1, x: 0.0, y: 0.0, value: 0.0, flags: 0 }
    }
}

/// Per-tick positions of the player characters (boss excluded), used by the
/// occupancy metric.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TracePoint {
    pub x: f64,
    pub y: f64,
    pub alive: bool,
}

/// Final ledger of one episode. Damage vectors are indexed by character id
/// (players 0..P-1, boss = P); back-attack damage is a subset of total damage.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeOutcome {
    pub win: bool,
    pub duration_ticks: u32,
    pub total_damage_by_agent: Vec<f64>,
    pub back_attack_damage_by_agent: Vec<f64>,
    /// position_trace[tick][player] — empty unless the episode was recorded.
    pub position_trace: Vec<Vec<TracePoint>>,
}

/// Recorded episode: ordered event stream plus the outcome ledger.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeLog {
    pub events: Vec<Event>,
    pub outcome: EpisodeOutcome,
}
