//! Balanceable content data model: character statistics, skills, classes,
//! scenarios, plus range validation and the min-max scaling used by the
//! skill generator's unit-interval state space.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Loosely-typed field value, the input side of validation.
#[derive(Clone, Debug, PartialEq)]
pub enum RawValue {
    Number(f64),
    Text(String),
    Flag(bool),
}

pub type RawMap = BTreeMap<String, RawValue>;

/// One validation finding; validation is total and collects all of them.
#[derive(Clone, Debug, PartialEq)]
pub enum ValidationIssue {
    OutOfRange { field: String, value: f64, min: f64, max: f64 },
    UnknownField { field: String },
    InvalidEnum { field: String, value: String },
    WrongType { field: String, expected: &'static str },
    NotInteger { field: String, value: f64 },
    InvalidLength { field: String, len: usize, min: usize, max: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::OutOfRange { field, value, min, max } => {
                write!(f, "{field}: value {value} outside [{min}, {max}]")
            }
            ValidationIssue::UnknownField { field } => write!(f, "unknown field `{field}`"),
            ValidationIssue::InvalidEnum { field, value } => {
                write!(f, "{field}: `{value}` is not a recognized label")
            }
            ValidationIssue::WrongType { field, expected } => {
                write!(f, "{field}: expected {expected}")
            }
            ValidationIssue::NotInteger { field, value } => {
                write!(f, "{field}: {value} is not an integer")
            }
            ValidationIssue::InvalidLength { field, len, min, max } => {
                write!(f, "{field}: length {len} outside [{min}, {max}]")
            }
        }
    }
}

/// The 17 character statistics. Integer stats are stored as i64, the three
/// real-valued ones (movement_speed, attack_speed, parry) as f64.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StatBlock {
    pub health_point: i64,
    pub mana_point: i64,
    pub spell_power: i64,
    pub movement_speed: f64,
    pub attack_power: i64,
    pub attack_range: i64,
    pub attack_speed: f64,
    pub armor: i64,
    pub evasion: i64,
    pub parry: f64,
    pub strength: i64,
    pub agility: i64,
    pub intelligence: i64,
    pub critical: i64,
    pub haste: i64,
    pub versatility: i64,
    pub mastery: i64,
}

impl Default for StatBlock {
    fn default() -> Self {
        StatBlock {
            health_point: 100,
            mana_point: 100,
            spell_power: 50,
            movement_speed: 2.0,
            attack_power: 50,
            attack_range: 1,
            attack_speed: 1.0,
            armor: 0,
            evasion: 0,
            parry: 0.0,
            strength: 50,
            agility: 50,
            intelligence: 50,
            critical: 0,
            haste: 0,
            versatility: 0,
            mastery: 0,
        }
    }
}

// (field name, min, max, integer?) — the authoritative stat ranges.
const STAT_FIELDS: [(&str, f64, f64, bool); 17] = [
    ("health_point", 0.0, 1000.0, true),
    ("mana_point", 0.0, 100.0, true),
    ("spell_power", 0.0, 100.0, true),
    ("movement_speed", 1.0, 2.0, false),
    ("attack_power", 0.0, 100.0, true),
    ("attack_range", 1.0, 10.0, true),
    ("attack_speed", 1.0, 2.0, false),
    ("armor", 0.0, 100.0, true),
    ("evasion", 0.0, 100.0, true),
    ("parry", 0.0, 100.0, false),
    ("strength", 1.0, 100.0, true),
    ("agility", 1.0, 100.0, true),
    ("intelligence", 1.0, 100.0, true),
    ("critical", 0.0, 100.0, true),
    ("haste", 0.0, 100.0, true),
    ("versatility", 0.0, 100.0, true),
    ("mastery", 0.0, 100.0, true),
];

impl StatBlock {
    fn get_f64(&self, field: &str) -> f64 {
        match field {
            "health_point" => self.health_point as f64,
            "mana_point" => self.mana_point as f64,
            "spell_power" => self.spell_power as f64,
            "movement_speed" => self.movement_speed,
            "attack_power" => self.attack_power as f64,
            "attack_range" => self.attack_range as f64,
            "attack_speed" => self.attack_speed,
            "armor" => self.armor as f64,
            "evasion" => self.evasion as f64,
            "parry" => self.parry,
            "strength" => self.strength as f64,
            "agility" => self.agility as f64,
            "intelligence" => self.intelligence as f64,
            "critical" => self.critical as f64,
            "haste" => self.haste as f64,
            "versatility" => self.versatility as f64,
            "mastery" => self.mastery as f64,
            _ => unreachable!("unknown stat field"),
        }
    }

    fn set_f64(&mut self, field: &str, v: f64) {
        match field {
            "health_point" => self.health_point = v as i64,
            "mana_point" => self.mana_point = v as i64,
            "spell_power" => self.spell_power = v as i64,
            "movement_speed" => self.movement_speed = v,
            "attack_power" => self.attack_power = v as i64,
            "attack_range" => self.attack_range = v as i64,
            "attack_speed" => self.attack_speed = v,
            "armor" => self.armor = v as i64,
            "evasion" => self.evasion = v as i64,
            "parry" => self.parry = v,
            "strength" => self.strength = v as i64,
            "agility" => self.agility = v as i64,
            "intelligence" => self.intelligence = v as i64,
            "critical" => self.critical = v as i64,
            "haste" => self.haste = v as i64,
            "versatility" => self.versatility = v as i64,
            "mastery" => self.mastery = v as i64,
            _ => unreachable!("unknown stat field"),
        }
    }

    /// Range-checks every field of an already-typed block.
    pub fn check_ranges(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for &(name, min, max, _) in &STAT_FIELDS {
            let v = self.get_f64(name);
            if !(min..=max).contains(&v) {
                issues.push(ValidationIssue::OutOfRange { field: name.to_string(), value: v, min, max });
            }
        }
        issues
    }
}

/// Builds a StatBlock from raw fields: every value range-checked, unknown
/// fields rejected, missing fields filled from the documented defaults.
pub fn validate_stat_block(raw: &RawMap) -> Result<StatBlock, Vec<ValidationIssue>> {
    let mut out = StatBlock::default();
    let mut issues = Vec::new();
    for (field, value) in raw {
        let Some(&(name, min, max, integer)) = STAT_FIELDS.iter().find(|f| f.0 == field.as_str())
        else {
            issues.push(ValidationIssue::UnknownField { field: field.clone() });
            continue;
        };
        let v = match value {
            RawValue::Number(v) => *v,
            _ => {
                issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "number" });
                continue;
            }
        };
        if !(min..=max).contains(&v) {
            issues.push(ValidationIssue::OutOfRange { field: field.clone(), value: v, min, max });
            continue;
        }
        if integer && libm::trunc(v) != v {
            issues.push(ValidationIssue::NotInteger { field: field.clone(), value: v });
            continue;
        }
        out.set_f64(name, v);
    }
    if issues.is_empty() { Ok(out) } else { Err(issues) }
}

macro_rules! label_enum {
    ($name:ident { $($variant:ident = $label:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
        #[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $label),+ }
            }
            pub fn parse(s: &str) -> Option<Self> {
                match s { $($label => Some($name::$variant),)+ _ => None }
            }
        }
    };
}

label_enum!(TriggerType { Active = "active", Passive = "passive" });
label_enum!(HitType { Melee = "melee", Skill = "skill" });
label_enum!(TargetType { Target = "target", NonTarget = "non_target", Region = "region" });

// The 10 magic schools, index order 0..=9 (cosmetic in the benchmark engine).
label_enum!(MagicSchool {
    Arcane = "arcane",
    Fire = "fire",
    Frost = "frost",
    Nature = "nature",
    Shadow = "shadow",
    Holy = "holy",
    Storm = "storm",
    Earth = "earth",
    Water = "water",
    Wind = "wind",
});

impl MagicSchool {
    pub const ALL: [MagicSchool; 10] = [
        MagicSchool::Arcane,
        MagicSchool::Fire,
        MagicSchool::Frost,
        MagicSchool::Nature,
        MagicSchool::Shadow,
        MagicSchool::Holy,
        MagicSchool::Storm,
        MagicSchool::Earth,
        MagicSchool::Water,
        MagicSchool::Wind,
    ];

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(i as usize).copied()
    }
}

/// The 17 skill parameters.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SkillSpec {
    pub name: String,
    pub trigger_type: TriggerType,
    pub magic_school: MagicSchool,
    pub hit_type: HitType,
    pub target_type: TargetType,
    pub projectile_speed: f64,
    pub affect_ally: bool,
    pub affect_enemy: bool,
    pub cool_time: f64,
    pub cast_time: f64,
    pub cost: f64,
    pub range: f64,
    pub charge: i64,
    pub cast_on_moving: bool,
    pub cast_on_casting: bool,
    pub cast_on_channeling: bool,
    pub coefficient: f64,
}

impl Default for SkillSpec {
    fn default() -> Self {
        SkillSpec {
            name: "skill".to_string(),
            trigger_type: TriggerType::Active,
            magic_school: MagicSchool::Arcane,
            hit_type: HitType::Skill,
            target_type: TargetType::Target,
            projectile_speed: 0.0,
            affect_ally: false,
            affect_enemy: true,
            cool_time: 3.0,
            cast_time: 1.0,
            cost: 0.0,
            range: 10.0,
            charge: 1,
            cast_on_moving: false,
            cast_on_casting: false,
            cast_on_channeling: false,
            coefficient: 1.0,
        }
    }
}

// Numeric skill fields: (name, min, max, integer?).
const SKILL_NUM_FIELDS: [(&str, f64, f64, bool); 6] = [
    ("projectile_speed", 0.0, 50.0, false),
    ("cool_time", 0.0, 60.0, false),
    ("cast_time", 0.0, 2.0, false),
    ("cost", 0.0, 100.0, false),
    ("range", 1.0, 20.0, false),
    ("charge", 1.0, 3.0, true),
];

const SKILL_FLAG_FIELDS: [&str; 5] = [
    "affect_ally",
    "affect_enemy",
    "cast_on_moving",
    "cast_on_casting",
    "cast_on_channeling",
];

impl SkillSpec {
    fn num_get(&self, field: &str) -> f64 {
        match field {
            "projectile_speed" => self.projectile_speed,
            "cool_time" => self.cool_time,
            "cast_time" => self.cast_time,
            "cost" => self.cost,
            "range" => self.range,
            "charge" => self.charge as f64,
            "coefficient" => self.coefficient,
            _ => unreachable!(),
        }
    }

    fn num_set(&mut self, field: &str, v: f64) {
        match field {
            "projectile_speed" => self.projectile_speed = v,
            "cool_time" => self.cool_time = v,
            "cast_time" => self.cast_time = v,
            "cost" => self.cost = v,
            "range" => self.range = v,
            "charge" => self.charge = v as i64,
            "coefficient" => self.coefficient = v,
            _ => unreachable!(),
        }
    }

    /// Range-checks every field of an already-typed skill.
    pub fn check_ranges(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let mut check = |field: &str, min: f64, max: f64, v: f64| {
            if !(min..=max).contains(&v) {
                issues.push(ValidationIssue::OutOfRange { field: field.to_string(), value: v, min, max });
            }
        };
        for &(name, min, max, _) in &SKILL_NUM_FIELDS {
            check(name, min, max, self.num_get(name));
        }
        check("coefficient", 0.0, 2.0, self.coefficient);
        issues
    }
}

/// Builds a SkillSpec from raw fields, same contract as validate_stat_block.
/// Enumerations accept their snake_case label; magic_school also accepts the
/// numeric index 0..=9.
pub fn validate_skill(raw: &RawMap) -> Result<SkillSpec, Vec<ValidationIssue>> {
    let mut out = SkillSpec::default();
    let mut issues = Vec::new();
    for (field, value) in raw {
        match field.as_str() {
            "name" => match value {
                RawValue::Text(s) => out.name = s.clone(),
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "text" }),
            },
            "trigger_type" => match value {
                RawValue::Text(s) => match TriggerType::parse(s) {
                    Some(v) => out.trigger_type = v,
                    None => issues.push(ValidationIssue::InvalidEnum { field: field.clone(), value: s.clone() }),
                },
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "text" }),
            },
            "hit_type" => match value {
                RawValue::Text(s) => match HitType::parse(s) {
                    Some(v) => out.hit_type = v,
                    None => issues.push(ValidationIssue::InvalidEnum { field: field.clone(), value: s.clone() }),
                },
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "text" }),
            },
            "target_type" => match value {
                RawValue::Text(s) => match TargetType::parse(s) {
                    Some(v) => out.target_type = v,
                    None => issues.push(ValidationIssue::InvalidEnum { field: field.clone(), value: s.clone() }),
                },
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "text" }),
            },
            "magic_school" => match value {
                RawValue::Text(s) => match MagicSchool::parse(s) {
                    Some(v) => out.magic_school = v,
                    None => issues.push(ValidationIssue::InvalidEnum { field: field.clone(), value: s.clone() }),
                },
                RawValue::Number(v) => {
                    if libm::trunc(*v) != *v || !(0.0..=9.0).contains(v) {
                        issues.push(ValidationIssue::InvalidEnum { field: field.clone(), value: v.to_string() });
                    } else {
                        out.magic_school = MagicSchool::from_index(*v as u8).unwrap();
                    }
                }
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "text or index" }),
            },
            "coefficient" => match value {
                RawValue::Number(v) => {
                    if !(0.0..=2.0).contains(v) {
                        issues.push(ValidationIssue::OutOfRange { field: field.clone(), value: *v, min: 0.0, max: 2.0 });
                    } else {
                        out.coefficient = *v;
                    }
                }
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "number" }),
            },
            _ if SKILL_FLAG_FIELDS.contains(&field.as_str()) => match value {
                RawValue::Flag(b) => match field.as_str() {
                    "affect_ally" => out.affect_ally = *b,
                    "affect_enemy" => out.affect_enemy = *b,
                    "cast_on_moving" => out.cast_on_moving = *b,
                    "cast_on_casting" => out.cast_on_casting = *b,
                    "cast_on_channeling" => out.cast_on_channeling = *b,
                    _ => unreachable!(),
                },
                _ => issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "flag" }),
            },
            _ => {
                let Some(&(name, min, max, integer)) =
                    SKILL_NUM_FIELDS.iter().find(|f| f.0 == field.as_str())
                else {
                    issues.push(ValidationIssue::UnknownField { field: field.clone() });
                    continue;
                };
                let v = match value {
                    RawValue::Number(v) => *v,
                    _ => {
                        issues.push(ValidationIssue::WrongType { field: field.clone(), expected: "number" });
                        continue;
                    }
                };
                if !(min..=max).contains(&v) {
                    issues.push(ValidationIssue::OutOfRange { field: field.clone(), value: v, min, max });
                    continue;
                }
                if integer && libm::trunc(v) != v {
                    issues.push(ValidationIssue::NotInteger { field: field.clone(), value: v });
                    continue;
                }
                out.num_set(name, v);
            }
        }
    }
    if issues.is_empty() { Ok(out) } else { Err(issues) }
}

/// A character class: one stat block plus 1–3 skills.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassSpec {
    pub stats: StatBlock,
    pub skills: Vec<SkillSpec>,
}

impl ClassSpec {
    pub fn check(&self) -> Vec<ValidationIssue> {
        let mut issues = self.stats.check_ranges();
        if !(1..=3).contains(&self.skills.len()) {
            issues.push(ValidationIssue::InvalidLength {
                field: "skills".to_string(),
                len: self.skills.len(),
                min: 1,
                max: 3,
            });
        }
        for s in &self.skills {
            issues.extend(s.check_ranges());
        }
        issues
    }
}

/// The four generated skill parameters, in canonical component order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GenParam {
    CoolTime,
    Range,
    DamageCoefficient,
    CastTime,
}

impl GenParam {
    pub const ALL: [GenParam; 4] = [
        GenParam::CoolTime,
        GenParam::Range,
        GenParam::DamageCoefficient,
        GenParam::CastTime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GenParam::CoolTime => "cool_time",
            GenParam::Range => "range",
            GenParam::DamageCoefficient => "damage_coefficient",
            GenParam::CastTime => "cast_time",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.as_str() == s)
    }

    pub fn get(self, skill: &SkillSpec) -> f64 {
        match self {
            GenParam::CoolTime => skill.cool_time,
            GenParam::Range => skill.range,
            GenParam::DamageCoefficient => skill.coefficient,
            GenParam::CastTime => skill.cast_time,
        }
    }

    pub fn set(self, skill: &mut SkillSpec, v: f64) {
        match self {
            GenParam::CoolTime => skill.cool_time = v,
            GenParam::Range => skill.range = v,
            GenParam::DamageCoefficient => skill.coefficient = v,
            GenParam::CastTime => skill.cast_time = v,
        }
    }

    /// Outermost admissible range for this parameter (the content schema's).
    pub fn schema_range(self) -> (f64, f64) {
        match self {
            GenParam::CoolTime => (0.0, 60.0),
            GenParam::Range => (1.0, 20.0),
            GenParam::DamageCoefficient => (0.0, 2.0),
            GenParam::CastTime => (0.0, 2.0),
        }
    }
}

/// Closed [min, max] interval.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.max(self.min).min(self.max)
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.min..=self.max).contains(&v)
    }
}

/// Min/max bounds for the four generated parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamBounds {
    pub cool_time: Bounds,
    pub range: Bounds,
    pub damage_coefficient: Bounds,
    pub cast_time: Bounds,
}

impl Default for ParamBounds {
    fn default() -> Self {
        ParamBounds {
            cool_time: Bounds { min: 0.5, max: 60.0 },
            range: Bounds { min: 1.0, max: 20.0 },
            damage_coefficient: Bounds { min: 0.5, max: 1.0 },
            cast_time: Bounds { min: 0.5, max: 1.5 },
        }
    }
}

impl ParamBounds {
    pub fn get(&self, p: GenParam) -> Bounds {
        match p {
            GenParam::CoolTime => self.cool_time,
            GenParam::Range => self.range,
            GenParam::DamageCoefficient => self.damage_coefficient,
            GenParam::CastTime => self.cast_time,
        }
    }

    pub fn check(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for p in GenParam::ALL {
            let b = self.get(p);
            let (lo, hi) = p.schema_range();
            if !(b.min < b.max) || b.min < lo || b.max > hi {
                issues.push(ValidationIssue::OutOfRange {
                    field: p.as_str().to_string(),
                    value: b.min,
                    min: lo,
                    max: hi,
                });
            }
        }
        issues
    }

    /// True when all four generated parameters of the skill lie inside
    /// these bounds.
    pub fn contains_skill(&self, skill: &SkillSpec) -> bool {
        GenParam::ALL.iter().all(|p| self.get(*p).contains(p.get(skill)))
    }
}

/// Generator state: the four parameters min-max-scaled into [0,1],
/// component order (cool_time, range, damage_coefficient, cast_time).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenState(pub [f64; 4]);

#[derive(Clone, Debug, PartialEq)]
pub enum ParamError {
    OutOfBounds(GenParam),
    OutOfUnitInterval(GenParam),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::OutOfBounds(p) => write!(f, "{} outside its configured bounds", p.as_str()),
            ParamError::OutOfUnitInterval(p) => {
                write!(f, "scaled {} outside the unit interval", p.as_str())
            }
        }
    }
}

/// Scales the four generated parameters to [0,1] componentwise.
pub fn scale_params(skill: &SkillSpec, bounds: &ParamBounds) -> Result<GenState, ParamError> {
    let mut out = [0.0; 4];
    for (i, p) in GenParam::ALL.iter().enumerate() {
        let b = bounds.get(*p);
        let v = p.get(skill);
        if !b.contains(v) {
            return Err(ParamError::OutOfBounds(*p));
        }
        out[i] = (v - b.min) / b.span();
    }
    Ok(GenState(out))
}

/// Inverse of scale_params; returns raw values in canonical component order.
pub fn unscale_params(state: &GenState, bounds: &ParamBounds) -> Result<[f64; 4], ParamError> {
    let mut out = [0.0; 4];
    for (i, p) in GenParam::ALL.iter().enumerate() {
        let s = state.0[i];
        if !(0.0..=1.0).contains(&s) {
            return Err(ParamError::OutOfUnitInterval(*p));
        }
        let b = bounds.get(*p);
        out[i] = b.min + s * b.span();
    }
    Ok(out)
}

/// Reward accounting coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RewardCoefficients {
    pub damage: f64,
    pub back_attack: f64,
    pub group_win: f64,
}

impl Default for RewardCoefficients {
    fn default() -> Self {
        RewardCoefficients { damage: 0.01, back_attack: 0.012, group_win: 1.0 }
    }
}

/// A complete encounter description: arena, timing, boss, players, optional
/// per-episode content sampling, and reward coefficients.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioConfig {
    pub arena_radius: f64,
    pub tick_dt: f64,
    pub episode_time_limit: f64,
    pub boss: ClassSpec,
    pub boss_hp_multiplier: f64,
    pub players: Vec<ClassSpec>,
    /// Parameter name → finite value set, drawn uniformly at episode reset
    /// and applied to all player skills. Empty map = no sampling.
    pub content_sampling: BTreeMap<GenParam, Vec<f64>>,
    pub reward_coefficients: RewardCoefficients,
}

impl ScenarioConfig {
    pub fn check(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        if self.players.is_empty() {
            issues.push(ValidationIssue::InvalidLength {
                field: "players".to_string(),
                len: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        let mut positive = |field: &str, v: f64| {
            if !(v > 0.0) {
                issues.push(ValidationIssue::OutOfRange {
                    field: field.to_string(),
                    value: v,
                    min: f64::MIN_POSITIVE,
                    max: f64::INFINITY,
                });
            }
        };
        positive("arena_radius", self.arena_radius);
        positive("tick_dt", self.tick_dt);
        positive("episode_time_limit", self.episode_time_limit);
        if !(self.boss_hp_multiplier >= 0.0) {
            issues.push(ValidationIssue::OutOfRange {
                field: "boss_hp_multiplier".to_string(),
                value: self.boss_hp_multiplier,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        issues.extend(self.boss.check());
        for p in &self.players {
            issues.extend(p.check());
        }
        for (param, values) in &self.content_sampling {
            if values.is_empty() {
                issues.push(ValidationIssue::InvalidLength {
                    field: param.as_str().to_string(),
                    len: 0,
                    min: 1,
                    max: usize::MAX,
                });
            }
            let (lo, hi) = param.schema_range();
            for &v in values {
                if !(lo..=hi).contains(&v) {
                    issues.push(ValidationIssue::OutOfRange {
                        field: param.as_str().to_string(),
                        value: v,
                        min: lo,
                        max: hi,
                    });
                }
            }
        }
        issues
    }

    pub fn max_ticks(&self) -> u32 {
        libm::ceil(self.episode_time_limit / self.tick_dt) as u32
    }
}

/// The benchmark encounter: three identical damage-dealer players with one
/// skill each against a boss with a short-range fast skill and a long-range
/// slow one. `player_skill_range` is the one knob the difficulty experiments
/// sweep.
pub fn benchmark_scenario(player_skill_range: f64) -> ScenarioConfig {
    let player_skill = SkillSpec {
        name: "strike".to_string(),
        projectile_speed: 30.0,
        cool_time: 3.0,
        cast_time: 1.0,
        range: player_skill_range,
        coefficient: 0.8,
        ..SkillSpec::default()
    };
    let player = ClassSpec {
        stats: StatBlock::default(),
        skills: alloc::vec![player_skill],
    };
    let boss_skill = |name: &str, range: f64, cool: f64| SkillSpec {
        name: name.to_string(),
        projectile_speed: 0.0,
        cool_time: cool,
        cast_time: 0.0,
        range,
        coefficient: 0.5,
        cast_on_moving: true,
        ..SkillSpec::default()
    };
    let boss = ClassSpec {
        stats: StatBlock { health_point: 1000, ..StatBlock::default() },
        skills: alloc::vec![boss_skill("crush", 6.0, 3.0), boss_skill("shockwave", 12.0, 8.0)],
    };
    ScenarioConfig {
        arena_radius: 20.0,
        tick_dt: 0.05,
        episode_time_limit: 60.0,
        boss,
        boss_hp_multiplier: 10.0,
        players: alloc::vec![player.clone(), player.clone(), player],
        content_sampling: BTreeMap::new(),
        reward_coefficients: RewardCoefficients::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(v: f64) -> RawValue {
        RawValue::Number(v)
    }

    #[test]
    fn default_stat_block_is_in_range() {
        assert!(StatBlock::default().check_ranges().is_empty());
    }

    #[test]
    fn stat_block_accepts_in_range_value() {
        let mut raw = RawMap::new();
        raw.insert("health_point".into(), num(100.0));
        let sb = validate_stat_block(&raw).unwrap();
        assert_eq!(sb.health_point, 100);
        assert_eq!(sb.spell_power, 50); // default fills the rest
    }

    #[test]
    fn stat_block_rejects_out_of_range() {
        let mut raw = RawMap::new();
        raw.insert("health_point".into(), num(2000.0));
        let issues = validate_stat_block(&raw).unwrap_err();
        assert_eq!(
            issues,
            alloc::vec![ValidationIssue::OutOfRange {
                field: "health_point".into(),
                value: 2000.0,
                min: 0.0,
                max: 1000.0
            }]
        );
    }

    #[test]
    fn stat_block_boundary_is_inclusive() {
        let mut raw = RawMap::new();
        raw.insert("movement_speed".into(), num(1.0));
        let sb = validate_stat_block(&raw).unwrap();
        assert_eq!(sb.movement_speed, 1.0);
    }

    #[test]
    fn stat_block_rejects_unknown_field() {
        let mut raw = RawMap::new();
        raw.insert("stamina".into(), num(5.0));
        let issues = validate_stat_block(&raw).unwrap_err();
        assert_eq!(issues, alloc::vec![ValidationIssue::UnknownField { field: "stamina".into() }]);
    }

    #[test]
    fn stat_block_collects_all_issues() {
        let mut raw = RawMap::new();
        raw.insert("health_point".into(), num(-1.0));
        raw.insert("armor".into(), num(12.5));
        raw.insert("bogus".into(), num(1.0));
        let issues = validate_stat_block(&raw).unwrap_err();
        assert_eq!(issues.len(), 3);
    }

    #[test]
    fn skill_accepts_boundaries() {
        let mut raw = RawMap::new();
        raw.insert("range".into(), num(20.0));
        raw.insert("cool_time".into(), num(0.0));
        let sk = validate_skill(&raw).unwrap();
        assert_eq!(sk.range, 20.0);
        assert_eq!(sk.cool_time, 0.0);
    }

    #[test]
    fn skill_rejects_out_of_range_values() {
        let mut raw = RawMap::new();
        raw.insert("range".into(), num(25.0));
        let issues = validate_skill(&raw).unwrap_err();
        assert_eq!(
            issues,
            alloc::vec![ValidationIssue::OutOfRange {
                field: "range".into(),
                value: 25.0,
                min: 1.0,
                max: 20.0
            }]
        );

        let mut raw = RawMap::new();
        raw.insert("charge".into(), num(0.0));
        let issues = validate_skill(&raw).unwrap_err();
        assert_eq!(
            issues,
            alloc::vec![ValidationIssue::OutOfRange {
                field: "charge".into(),
                value: 0.0,
                min: 1.0,
                max: 3.0
            }]
        );
    }

    #[test]
    fn skill_enum_labels_parse() {
        let mut raw = RawMap::new();
        raw.insert("trigger_type".into(), RawValue::Text("passive".into()));
        raw.insert("hit_type".into(), RawValue::Text("melee".into()));
        raw.insert("target_type".into(), RawValue::Text("region".into()));
        raw.insert("magic_school".into(), num(2.0));
        let sk = validate_skill(&raw).unwrap();
        assert_eq!(sk.trigger_type, TriggerType::Passive);
        assert_eq!(sk.hit_type, HitType::Melee);
        assert_eq!(sk.target_type, TargetType::Region);
        assert_eq!(sk.magic_school, MagicSchool::Frost);
    }

    #[test]
    fn skill_rejects_bad_enum_label() {
        let mut raw = RawMap::new();
        raw.insert("trigger_type".into(), RawValue::Text("sometimes".into()));
        let issues = validate_skill(&raw).unwrap_err();
        assert!(matches!(issues[0], ValidationIssue::InvalidEnum { .. }));
    }

    #[test]
    fn scale_matches_hand_values() {
        let bounds = ParamBounds::default();
        let mut skill = SkillSpec { range: 10.5, coefficient: 0.75, ..SkillSpec::default() };
        let s = scale_params(&skill, &bounds).unwrap();
        assert_eq!(s.0[1], 0.5); // range midpoint of [1,20]
        assert_eq!(s.0[2], 0.5); // damage midpoint of [0.5,1]

        skill.range = 1.0;
        assert_eq!(scale_params(&skill, &bounds).unwrap().0[1], 0.0);
        skill.range = 20.0;
        assert_eq!(scale_params(&skill, &bounds).unwrap().0[1], 1.0);
    }

    #[test]
    fn scale_rejects_out_of_bounds_param() {
        let bounds = ParamBounds::default();
        let skill = SkillSpec { coefficient: 1.5, ..SkillSpec::default() };
        assert_eq!(
            scale_params(&skill, &bounds),
            Err(ParamError::OutOfBounds(GenParam::DamageCoefficient))
        );
    }

    #[test]
    fn unscale_endpoints() {
        let bounds = ParamBounds::default();
        let lo = unscale_params(&GenState([0.0; 4]), &bounds).unwrap();
        assert_eq!(lo, [0.5, 1.0, 0.5, 0.5]);
        let hi = unscale_params(&GenState([1.0; 4]), &bounds).unwrap();
        assert_eq!(hi, [60.0, 20.0, 1.0, 1.5]);
    }

    proptest! {
        #[test]
        fn scale_unscale_roundtrip(c in 0.5f64..=60.0, r in 1.0f64..=20.0,
                                   d in 0.5f64..=1.0, t in 0.5f64..=1.5) {
            let bounds = ParamBounds::default();
            let skill = SkillSpec {
                cool_time: c, range: r, coefficient: d, cast_time: t,
                ..SkillSpec::default()
            };
            let state = scale_params(&skill, &bounds).unwrap();
            let raw = unscale_params(&state, &bounds).unwrap();
            prop_assert!((raw[0] - c).abs() < 1e-9);
            prop_assert!((raw[1] - r).abs() < 1e-9);
            prop_assert!((raw[2] - d).abs() < 1e-9);
            prop_assert!((raw[3] - t).abs() < 1e-9);
        }

        #[test]
        fn unscale_scale_roundtrip(s in proptest::array::uniform4(0.0f64..=1.0)) {
            let bounds = ParamBounds::default();
            let raw = unscale_params(&GenState(s), &bounds).unwrap();
            let mut skill = SkillSpec::default();
            for (i, p) in GenParam::ALL.iter().enumerate() {
                p.set(&mut skill, raw[i]);
            }
            let back = scale_params(&skill, &bounds).unwrap();
            for i in 0..4 {
                prop_assert!((back.0[i] - s[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn benchmark_scenario_self_validates() {
        let sc = benchmark_scenario(13.0);
        assert!(sc.check().is_empty(), "{:?}", sc.check());
        assert_eq!(sc.players.len(), 3);
        assert_eq!(sc.boss_hp_multiplier, 10.0);
        let ranges: Vec<f64> = sc.boss.skills.iter().map(|s| s.range).collect();
        assert_eq!(ranges, alloc::vec![6.0, 12.0]);
    }

    #[test]
    fn scenario_check_flags_empty_players_and_bad_sampling() {
        let mut sc = benchmark_scenario(13.0);
        sc.players.clear();
        sc.content_sampling.insert(GenParam::Range, alloc::vec![25.0]);
        let issues = sc.check();
        assert!(issues.iter().any(|i| matches!(i, ValidationIssue::InvalidLength { field, .. } if field == "players")));
        assert!(issues.iter().any(|i| matches!(i, ValidationIssue::OutOfRange { field, .. } if field == "range")));
    }

    #[test]
    fn param_bounds_default_passes_check() {
        assert!(ParamBounds::default().check().is_empty());
    }
}
