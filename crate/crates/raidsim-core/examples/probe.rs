//! Scratch probe: win rates by player skill range for both scripted policies.

use raidsim_core::agents::{PtHr, PtRd};
use raidsim_core::content::benchmark_scenario;
use raidsim_core::metrics::estimate_win_rate;

fn main() {
    let episodes: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let base: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(9000);
    for range in [5.0, 9.0, 13.0, 17.0] {
        let sc = benchmark_scenario(range);
        let hr = estimate_win_rate(&sc, &mut PtHr::default(), episodes, base);
        let rd = estimate_win_rate(&sc, &mut PtRd, episodes, base);
        println!(
            "range {:>4}  PT-HR {:.3}  PT-RD {:.3}",
            range, hr.mean, rd.mean
        );
    }
}
