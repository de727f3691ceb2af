//! Deterministic boss-raid combat with automated content balancing.
//!
//! The crate is `no_std` + `alloc` and fully deterministic: every episode is
//! a pure function of (scenario, policies, seed). It contains
//!
//! * [`content`] — validated character/skill schemas, scenario configuration,
//!   and the four tunable balancing parameters with their bounds
//! * [`engine`] — the tick-based 2D combat simulation
//! * [`agents`] — observation encoding and the scripted playtest policies
//! * [`generator`] — the skill-balancing decision process and generator
//!   policies
//! * [`metrics`] — win-rate estimation, controllability and diversity
//!   reports, occupancy grids
//! * [`rng`] — counter-based splittable random streams
//!
//! File formats, parallel execution, the command-line interface, and the
//! wire protocol live in the companion `raidsim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod agents;
pub mod content;
pub mod engine;
pub mod generator;
pub mod log;
pub mod metrics;
pub mod rng;
