//! Evaluation mathematics: win-rate estimation, the difficulty-adjusted
//! score, controllability error, filtered diversity statistics with a
//! principal-component reduction, and arena occupancy grids.

use alloc::vec;
use alloc::vec::Vec;

use crate::content::{GenParam, ParamBounds, ScenarioConfig, SkillSpec};
use crate::engine::{run_episode_outcome, PlayerPolicy};
use crate::log::{EpisodeLog, TracePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricsError {
    EmptyInput,
    ZeroPopulationMean,
    EmptyAfterFilter,
}

impl core::fmt::Display for MetricsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MetricsError::EmptyInput => write!(f, "empty input"),
            MetricsError::ZeroPopulationMean => write!(f, "population mean is not positive"),
            MetricsError::EmptyAfterFilter => write!(f, "no samples survive the error filter"),
        }
    }
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than two
/// samples.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    libm::sqrt(ss / (n - 1.0))
}

/// A measured win rate with its seed provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WinRateEstimate {
    pub mean: f64,
    /// Binomial sample SD, √(p(1−p)·n/(n−1)); 0 when n = 1.
    pub sample_sd: f64,
    pub wins: u32,
    pub n: u32,
    pub base_seed: u64,
}

/// Runs `n` episodes with seeds `base_seed..base_seed+n` and reports the
/// exact win fraction. The per-episode results depend only on (scenario,
/// policy, seed), so any batch runner that computes the same seeds — in any
/// order — reproduces this estimate.
pub fn estimate_win_rate(
    scenario: &ScenarioConfig,
    policy: &mut dyn PlayerPolicy,
    n: u32,
    base_seed: u64,
) -> WinRateEstimate {
    debug_assert!(n >= 1);
    let mut wins = 0u32;
    for e in 0..n {
        let outcome = run_episode_outcome(scenario, policy, base_seed.wrapping_add(e as u64));
        if outcome.win {
            wins += 1;
        }
    }
    win_rate_from_wins(wins, n, base_seed)
}

/// Folds a win count into the estimate; shared by the sequential path above
/// and parallel batch runners so both produce identical numbers.
pub fn win_rate_from_wins(wins: u32, n: u32, base_seed: u64) -> WinRateEstimate {
    let nf = n as f64;
    let mean = wins as f64 / nf;
    let sample_sd = if n >= 2 {
        libm::sqrt(mean * (1.0 - mean) * nf / (nf - 1.0))
    } else {
        0.0
    };
    WinRateEstimate { mean, sample_sd, wins, n, base_seed }
}

/// Score of a policy on unseen content relative to the mean score of a
/// reference population on the same content.
pub fn adjusted_score(score_unseen: f64, population_scores: &[f64]) -> Result<f64, MetricsError> {
    if population_scores.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mean = population_scores.iter().sum::<f64>() / population_scores.len() as f64;
    if mean <= 0.0 {
        return Err(MetricsError::ZeroPopulationMean);
    }
    Ok(score_unseen / mean)
}

/// One generated skill with its target and measured win rates.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ControllabilitySample {
    pub target: f64,
    pub measured: f64,
    pub skill: SkillSpec,
}

impl ControllabilitySample {
    pub fn error(&self) -> f64 {
        (self.target - self.measured).abs()
    }
}

/// Controllability error over a sample set: per-sample |target − measured|,
/// their mean and sample SD, plus the raw sum for transparency.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WinrateErrorReport {
    pub mean_abs_error: f64,
    pub sd: f64,
    pub sum_abs_error: f64,
    pub errors: Vec<f64>,
}

pub fn winrate_error(samples: &[ControllabilitySample]) -> Result<WinrateErrorReport, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let errors: Vec<f64> = samples.iter().map(|s| s.error()).collect();
    let sum_abs_error = errors.iter().sum::<f64>();
    Ok(WinrateErrorReport {
        mean_abs_error: sum_abs_error / errors.len() as f64,
        sd: sample_sd(&errors),
        sum_abs_error,
        errors,
    })
}

/// Result of a principal-component extraction on an n×4 matrix.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PcaResult {
    /// Top-k unit eigenvectors of the sample covariance, descending by
    /// eigenvalue; within each, the first component over 1e-12 in magnitude
    /// is made positive.
    pub components: Vec<[f64; 4]>,
    /// Per-component projections of the mean-centered rows.
    pub projections: Vec<Vec<f64>>,
    /// Covariance eigenvalues for the kept components (variance explained).
    pub explained: Vec<f64>,
    /// Set when the covariance was exactly zero: the result degenerates to
    /// the first coordinate axis with zero projections and zero variance.
    pub degenerate: bool,
}

/// Cyclic Jacobi eigendecomposition of a symmetric 4×4 matrix: returns
/// (eigenvalues, eigenvectors as columns), unsorted.
fn jacobi_eigen(mut a: [[f64; 4]; 4]) -> ([f64; 4], [[f64; 4]; 4]) {
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-32 {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                let tau = s / (1.0 + c);
                let apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..4 {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = arp - s * (arq + tau * arp);
                        a[p][r] = a[r][p];
                        a[r][q] = arq + s * (arp - tau * arq);
                        a[q][r] = a[r][q];
                    }
                }
                for row in &mut v {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = vp - s * (vq + tau * vp);
                    row[q] = vq + s * (vp - tau * vq);
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}

/// Principal components of an n×4 matrix (n ≥ 2): mean-center the columns,
/// eigendecompose the n−1-normalized covariance, and keep the top k
/// components. Column order follows the canonical parameter order
/// (cool_time, range, damage_coefficient, cast_time) when the rows are
/// scaled parameter vectors.
pub fn pca_project(matrix: &[[f64; 4]], k: usize) -> PcaResult {
    debug_assert!(matrix.len() >= 2);
    debug_assert!((1..=4).contains(&k));
    let n = matrix.len() as f64;
    let mut mean = [0.0; 4];
    for row in matrix {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let centered: Vec<[f64; 4]> = matrix
        .iter()
        .map(|row| [row[0] - mean[0], row[1] - mean[1], row[2] - mean[2], row[3] - mean[3]])
        .collect();

    let mut cov = [[0.0; 4]; 4];
    for row in &centered {
        for i in 0..4 {
            for j in 0..4 {
                cov[i][j] += row[i] * row[j];
            }
        }
    }
    let denom = n - 1.0;
    for row in &mut cov {
        for x in row.iter_mut() {
            *x /= denom;
        }
    }

    if cov.iter().flatten().all(|&x| x == 0.0) {
        return PcaResult {
            components: vec![[1.0, 0.0, 0.0, 0.0]; k],
            projections: vec![vec![0.0; matrix.len()]; k],
            explained: vec![0.0; k],
            degenerate: true,
        };
    }

    let (values, vectors) = jacobi_eigen(cov);
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).expect("finite eigenvalues"));

    let mut components = Vec::with_capacity(k);
    let mut projections = Vec::with_capacity(k);
    let mut explained = Vec::with_capacity(k);
    for &col in order.iter().take(k) {
        let mut comp = [vectors[0][col], vectors[1][col], vectors[2][col], vectors[3][col]];
        if let Some(first) = comp.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                for x in &mut comp {
                    *x = -*x;
                }
            }
        }
        projections.push(
            centered
                .iter()
                .map(|row| row.iter().zip(&comp).map(|(a, b)| a * b).sum())
                .collect(),
        );
        explained.push(values[col]);
        components.push(comp);
    }
    PcaResult { components, projections, explained, degenerate: false }
}

/// Diversity of a generated skill set after discarding inaccurate samples.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiversityReport {
    pub retained: usize,
    /// Sample SDs of the min-max-scaled parameters.
    pub range_sd: f64,
    pub cool_sd: f64,
    pub cast_sd: f64,
    pub damage_sd: f64,
    /// Sample SD of the projections on the top principal component.
    pub pca_sd: f64,
    /// Unit 4-vector in canonical parameter order.
    pub pca_component: [f64; 4],
    /// The scaled retained parameter matrix, for external visualization.
    pub scaled_matrix: Vec<[f64; 4]>,
}

/// Keeps samples whose |target − measured| lies strictly below `threshold`,
/// min-max-scales their four parameters via `bounds` (clamped to [0,1]),
/// and reports per-parameter SDs plus the top principal component and the
/// SD along it.
pub fn diversity_report(
    samples: &[ControllabilitySample],
    bounds: &ParamBounds,
    threshold: f64,
) -> Result<DiversityReport, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let retained: Vec<&ControllabilitySample> =
        samples.iter().filter(|s| s.error() < threshold).collect();
    if retained.is_empty() {
        return Err(MetricsError::EmptyAfterFilter);
    }
    let scaled: Vec<[f64; 4]> = retained
        .iter()
        .map(|s| {
            let mut row = [0.0; 4];
            for (i, p) in GenParam::ALL.iter().enumerate() {
                let b = bounds.get(*p);
                row[i] = ((p.get(&s.skill) - b.min) / b.span()).clamp(0.0, 1.0);
            }
            row
        })
        .collect();

    let column = |i: usize| scaled.iter().map(|r| r[i]).collect::<Vec<f64>>();
    let cool_sd = sample_sd(&column(0));
    let range_sd = sample_sd(&column(1));
    let damage_sd = sample_sd(&column(2));
    let cast_sd = sample_sd(&column(3));

    let (pca_sd, pca_component) = if scaled.len() >= 2 {
        let pca = pca_project(&scaled, 1);
        (sample_sd(&pca.projections[0]), pca.components[0])
    } else {
        (0.0, [1.0, 0.0, 0.0, 0.0])
    };

    Ok(DiversityReport {
        retained: retained.len(),
        range_sd,
        cool_sd,
        cast_sd,
        damage_sd,
        pca_sd,
        pca_component,
        scaled_matrix: scaled,
    })
}

/// Streaming occupancy counter. Feeding it the position traces of a batch of
/// episodes and then averaging is exactly the batch [`occupancy_grid`]
/// computation, so a parallel runner can merge per-worker accumulators (in
/// worker order) without changing the result.
#[derive(Clone, Debug)]
pub struct OccupancyAccumulator {
    resolution: usize,
    radius: f64,
    counts: Vec<f64>,
    episodes: u64,
}

impl OccupancyAccumulator {
    pub fn new(resolution: usize, radius: f64) -> OccupancyAccumulator {
        debug_assert!(resolution >= 1);
        OccupancyAccumulator {
            resolution,
            radius,
            counts: vec![0.0; resolution * resolution],
            episodes: 0,
        }
    }

    fn cell(&self, x: f64, y: f64) -> usize {
        let res = self.resolution;
        let scale = res as f64 / (2.0 * self.radius);
        let col = (((x + self.radius) * scale) as usize).min(res - 1);
        let row = (((y + self.radius) * scale) as usize).min(res - 1);
        row * res + col
    }

    /// Counts every living player's cell per trace row (one row per tick).
    pub fn add_episode(&mut self, trace: &[Vec<TracePoint>]) {
        for row in trace {
            for p in row {
                if p.alive {
                    let cell = self.cell(p.x, p.y);
                    self.counts[cell] += 1.0;
                }
            }
        }
        self.episodes += 1;
    }

    /// Adds the counts and episodes of another accumulator of the same shape.
    pub fn merge(&mut self, other: &OccupancyAccumulator) {
        debug_assert_eq!(self.resolution, other.resolution);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.episodes += other.episodes;
    }

    /// Grid of per-cell mean tick counts (rows indexed by y from −radius,
    /// columns by x from −radius). With no episodes the grid is all zero.
    pub fn finish(&self) -> Vec<Vec<f64>> {
        let res = self.resolution;
        let mut grid = vec![vec![0.0; res]; res];
        if self.episodes == 0 {
            return grid;
        }
        let e = self.episodes as f64;
        for r in 0..res {
            for c in 0..res {
                grid[r][c] = self.counts[r * res + c] / e;
            }
        }
        grid
    }

    pub fn episodes(&self) -> u64 {
        self.episodes
    }
}

/// Mean per-episode tick counts of living-player presence over a
/// resolution×resolution grid spanning the arena's bounding square
/// [−radius, radius]². An empty log set yields an all-zero grid; callers
/// that care should warn on it.
pub fn occupancy_grid(logs: &[EpisodeLog], resolution: usize, radius: f64) -> Vec<Vec<f64>> {
    let mut acc = OccupancyAccumulator::new(resolution, radius);
    for log in logs {
        acc.add_episode(&log.outcome.position_trace);
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{PtHr, PtRd};
    use crate::content::benchmark_scenario;
    use crate::log::EpisodeOutcome;
    use crate::rng::RngStream;
    use alloc::vec;

    #[test]
    fn boss_dead_at_start_gives_mean_one() {
        let mut sc = benchmark_scenario(13.0);
        sc.boss_hp_multiplier = 0.0;
        let mut p = PtHr::default();
        let est = estimate_win_rate(&sc, &mut p, 10, 1);
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.wins, 10);
        assert_eq!(est.sample_sd, 0.0);
    }

    #[test]
    fn zero_damage_players_never_win() {
        let mut sc = benchmark_scenario(13.0);
        sc.episode_time_limit = 5.0; // keep the futile episodes short
        for class in &mut sc.players {
            class.skills[0].coefficient = 0.0;
        }
        let mut p = PtHr::default();
        let est = estimate_win_rate(&sc, &mut p, 10, 1);
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn estimates_are_reproducible_and_seed_sensitive() {
        let mut sc = benchmark_scenario(9.0);
        sc.episode_time_limit = 20.0;
        let mut p = PtRd::default();
        let a = estimate_win_rate(&sc, &mut p, 12, 100);
        let b = estimate_win_rate(&sc, &mut p, 12, 100);
        assert_eq!(a, b);
        assert_eq!(a.n, 12);
        assert_eq!(a.base_seed, 100);
    }

    #[test]
    fn sample_sd_matches_the_binomial_formula() {
        let est = win_rate_from_wins(3, 10, 0);
        let p = 0.3;
        let expect = libm::sqrt(p * (1.0 - p) * 10.0 / 9.0);
        assert!((est.sample_sd - expect).abs() < 1e-15);
        assert_eq!(win_rate_from_wins(1, 1, 0).sample_sd, 0.0);
    }

    #[test]
    fn adjusted_score_examples() {
        assert_eq!(adjusted_score(0.5, &[0.5; 5]).unwrap(), 1.0);
        assert_eq!(adjusted_score(0.3, &[0.6; 5]).unwrap(), 0.5);
        // scores above 1 are legitimate
        assert!(adjusted_score(0.7, &[0.6; 5]).unwrap() > 1.0);
        for x in [0.25, 0.5, 1.0] {
            assert_eq!(adjusted_score(x, &[x]).unwrap(), 1.0);
        }
        assert_eq!(adjusted_score(0.5, &[]), Err(MetricsError::EmptyInput));
        assert_eq!(adjusted_score(0.5, &[0.0, 0.0]), Err(MetricsError::ZeroPopulationMean));
    }

    fn sample(target: f64, measured: f64) -> ControllabilitySample {
        ControllabilitySample { target, measured, skill: SkillSpec::default() }
    }

    #[test]
    fn winrate_error_examples() {
        let r = winrate_error(&[sample(0.3, 0.3)]).unwrap();
        assert_eq!(r.mean_abs_error, 0.0);
        let r = winrate_error(&[sample(0.1, 0.2), sample(0.5, 0.3)]).unwrap();
        assert!((r.mean_abs_error - 0.15).abs() < 1e-12);
        assert!((r.sum_abs_error - 0.30).abs() < 1e-12);
        assert_eq!(r.errors.len(), 2);
        assert_eq!(winrate_error(&[]), Err(MetricsError::EmptyInput));
    }

    #[test]
    fn winrate_error_is_zero_only_on_exact_matches() {
        let exact = [sample(0.1, 0.1), sample(0.9, 0.9)];
        assert_eq!(winrate_error(&exact).unwrap().mean_abs_error, 0.0);
        let off = [sample(0.1, 0.1), sample(0.9, 0.90001)];
        assert!(winrate_error(&off).unwrap().mean_abs_error > 0.0);
    }

    fn skill_with(cool: f64, range: f64, damage: f64, cast: f64) -> SkillSpec {
        let mut s = SkillSpec::default();
        GenParam::CoolTime.set(&mut s, cool);
        GenParam::Range.set(&mut s, range);
        GenParam::DamageCoefficient.set(&mut s, damage);
        GenParam::CastTime.set(&mut s, cast);
        s
    }

    #[test]
    fn diversity_filter_is_strict() {
        let bounds = ParamBounds::default();
        let samples = vec![
            ControllabilitySample { target: 0.5, measured: 0.45, skill: skill_with(10.0, 5.0, 0.8, 1.0) },
            // error exactly at the threshold: must be dropped
            ControllabilitySample { target: 0.0, measured: 0.1, skill: skill_with(20.0, 9.0, 0.9, 1.2) },
            ControllabilitySample { target: 0.5, measured: 0.48, skill: skill_with(30.0, 13.0, 0.7, 0.8) },
            ControllabilitySample { target: 0.3, measured: 0.55, skill: skill_with(40.0, 17.0, 0.6, 0.6) },
        ];
        // sanity: sample 1's error is exactly 0.1 in floating point
        assert_eq!(samples[1].error(), 0.1);
        let report = diversity_report(&samples, &bounds, 0.1).unwrap();
        assert_eq!(report.retained, 2);
        let none = diversity_report(&samples[1..2], &bounds, 0.1);
        assert_eq!(none.unwrap_err(), MetricsError::EmptyAfterFilter);
    }

    #[test]
    fn identical_samples_have_zero_spread() {
        let bounds = ParamBounds::default();
        let s = ControllabilitySample { target: 0.5, measured: 0.5, skill: skill_with(30.25, 10.5, 0.75, 1.0) };
        let samples = vec![s.clone(), s.clone(), s.clone(), s];
        let report = diversity_report(&samples, &bounds, 0.1).unwrap();
        assert_eq!(report.retained, 4);
        assert_eq!(report.range_sd, 0.0);
        assert_eq!(report.cool_sd, 0.0);
        assert_eq!(report.cast_sd, 0.0);
        assert_eq!(report.damage_sd, 0.0);
        assert_eq!(report.pca_sd, 0.0);
    }

    #[test]
    fn single_axis_variation_aligns_the_component_with_that_axis() {
        let bounds = ParamBounds::default();
        let samples: Vec<ControllabilitySample> = [5.0, 9.0, 13.0, 17.0, 11.0]
            .iter()
            .map(|&r| ControllabilitySample {
                target: 0.5,
                measured: 0.5,
                skill: skill_with(30.0, r, 0.75, 1.0),
            })
            .collect();
        let report = diversity_report(&samples, &bounds, 0.1).unwrap();
        // canonical order (cool, range, damage, cast): range is component 1
        assert!((report.pca_component[1] - 1.0).abs() < 1e-9);
        for i in [0usize, 2, 3] {
            assert!(report.pca_component[i].abs() < 1e-9);
        }
        assert!((report.pca_sd - report.range_sd).abs() < 1e-12);
    }

    #[test]
    fn collinear_diagonal_data_recovers_the_diagonal() {
        let rows: Vec<[f64; 4]> = (0..10)
            .map(|i| {
                let t = i as f64 / 10.0;
                [t, t, 0.0, 0.0]
            })
            .collect();
        let pca = pca_project(&rows, 1);
        let inv_sqrt2 = 1.0 / libm::sqrt(2.0);
        assert!((pca.components[0][0] - inv_sqrt2).abs() < 1e-9);
        assert!((pca.components[0][1] - inv_sqrt2).abs() < 1e-9);
        assert!(pca.components[0][2].abs() < 1e-9);
        assert!(pca.components[0][3].abs() < 1e-9);
    }

    #[test]
    fn two_symmetric_points_project_to_half_distance_scaled() {
        // points a fixed distance d apart: projections ±d/2, so the n−1
        // sample SD is d/√2
        let rows = [[0.2, 0.2, 0.0, 0.0], [0.8, 0.8, 0.0, 0.0]];
        let d = libm::sqrt(0.6 * 0.6 * 2.0);
        let pca = pca_project(&rows, 1);
        let sd = sample_sd(&pca.projections[0]);
        assert!((sd - d / libm::sqrt(2.0)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_data_yields_the_documented_fallback() {
        let rows = [[0.5, 0.25, 0.75, 0.5]; 4];
        let pca = pca_project(&rows, 1);
        assert!(pca.degenerate);
        assert_eq!(pca.components[0], [1.0, 0.0, 0.0, 0.0]);
        assert!(pca.projections[0].iter().all(|&p| p == 0.0));
        assert_eq!(pca.explained[0], 0.0);
    }

    #[test]
    fn jacobi_matches_a_dense_eigensolver_on_random_matrices() {
        use nalgebra::{Matrix4, SymmetricEigen};
        let mut rng = RngStream::new(2718);
        for round in 0..5 {
            let rows: Vec<[f64; 4]> =
                (0..300).map(|_| [0.0; 4].map(|_| rng.next_f64())).collect();
            let pca = pca_project(&rows, 4);

            // oracle: dense symmetric eigendecomposition of the same covariance
            let n = rows.len() as f64;
            let mut mean = [0.0; 4];
            for r in &rows {
                for (m, x) in mean.iter_mut().zip(r) {
                    *m += x / n;
                }
            }
            let mut cov = Matrix4::zeros();
            for r in &rows {
                for i in 0..4 {
                    for j in 0..4 {
                        cov[(i, j)] += (r[i] - mean[i]) * (r[j] - mean[j]) / (n - 1.0);
                    }
                }
            }
            let eig = SymmetricEigen::new(cov);
            let mut oracle: Vec<(f64, [f64; 4])> = (0..4)
                .map(|c| {
                    let v = eig.eigenvectors.column(c);
                    (eig.eigenvalues[c], [v[0], v[1], v[2], v[3]])
                })
                .collect();
            oracle.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

            for c in 0..4 {
                assert!(
                    (pca.explained[c] - oracle[c].0).abs() < 1e-8,
                    "round {round}: eigenvalue {c}"
                );
                let dot: f64 =
                    pca.components[c].iter().zip(&oracle[c].1).map(|(a, b)| a * b).sum();
                assert!(dot.abs() > 1.0 - 1e-8, "round {round}: eigenvector {c}, dot {dot}");
            }
        }
    }

    fn trace_of(points: &[(f64, f64)]) -> Vec<Vec<TracePoint>> {
        points
            .iter()
            .map(|&(x, y)| vec![TracePoint { x, y, alive: true }])
            .collect()
    }

    fn log_with_trace(trace: Vec<Vec<TracePoint>>) -> EpisodeLog {
        EpisodeLog {
            events: vec![],
            outcome: EpisodeOutcome {
                win: false,
                duration_ticks: trace.len() as u32,
                total_damage_by_agent: vec![],
                back_attack_damage_by_agent: vec![],
                position_trace: trace,
            },
        }
    }

    #[test]
    fn stationary_agent_accumulates_its_cell() {
        let log = log_with_trace(trace_of(&[(3.0, -4.0); 10]));
        let grid = occupancy_grid(&[log], 16, 20.0);
        let total: f64 = grid.iter().flatten().sum();
        assert_eq!(total, 10.0);
        // (3, −4) with radius 20, res 16: col = (23/40·16) = 9, row = (16/40·16) = 6
        assert_eq!(grid[6][9], 10.0);
    }

    #[test]
    fn empty_log_set_maps_to_a_zero_grid() {
        let grid = occupancy_grid(&[], 8, 20.0);
        assert_eq!(grid.len(), 8);
        assert!(grid.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn grid_mass_is_mean_living_ticks_per_episode() {
        let a = log_with_trace(trace_of(&[(0.0, 0.0); 6]));
        let mut dead_trace = trace_of(&[(5.0, 5.0); 4]);
        dead_trace[3][0].alive = false; // one dead tick must not count
        let b = log_with_trace(dead_trace);
        let grid = occupancy_grid(&[a, b], 4, 20.0);
        let total: f64 = grid.iter().flatten().sum();
        assert_eq!(total, (6.0 + 3.0) / 2.0);
    }

    #[test]
    fn boundary_positions_clamp_into_the_grid() {
        let log = log_with_trace(trace_of(&[(20.0, 20.0), (-20.0, -20.0)]));
        let grid = occupancy_grid(&[log], 8, 20.0);
        assert_eq!(grid[7][7], 1.0);
        assert_eq!(grid[0][0], 1.0);
    }

    #[test]
    fn accumulator_merge_equals_batch_computation() {
        let logs: Vec<EpisodeLog> = (0..6)
            .map(|i| {
                let x = -15.0 + 5.0 * i as f64;
                log_with_trace(trace_of(&[(x, 0.0), (x, 1.0), (x, 2.0)]))
            })
            .collect();
        let batch = occupancy_grid(&logs, 10, 20.0);
        let mut left = OccupancyAccumulator::new(10, 20.0);
        let mut right = OccupancyAccumulator::new(10, 20.0);
        for (i, log) in logs.iter().enumerate() {
            if i < 3 {
                left.add_episode(&log.outcome.position_trace);
            } else {
                right.add_episode(&log.outcome.position_trace);
            }
        }
        left.merge(&right);
        assert_eq!(left.finish(), batch);
        assert_eq!(left.episodes(), 6);
    }

    #[test]
    fn real_episode_occupancy_forms_a_ring() {
        // qualitative: the heuristic orbits at its skill range, so mass
        // should concentrate in an annulus around the boss
        let sc = benchmark_scenario(13.0);
        let mut p = PtHr::default();
        let logs: Vec<EpisodeLog> =
            (0..3).map(|s| crate::engine::run_episode(&sc, &mut p, 600 + s, true)).collect();
        let res = 20usize;
        let grid = occupancy_grid(&logs, res, 20.0);
        let cell_w = 40.0 / res as f64;
        let mut near = 0.0; // r < 4 around the center
        let mut ring = 0.0; // 8 < r < 18
        for (r, row) in grid.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let x = -20.0 + (c as f64 + 0.5) * cell_w;
                let y = -20.0 + (r as f64 + 0.5) * cell_w;
                let dist = libm::sqrt(x * x + y * y);
                if dist < 4.0 {
                    near += v;
                } else if (8.0..18.0).contains(&dist) {
                    ring += v;
                }
            }
        }
        assert!(ring > near, "ring {ring} vs near {near}");
    }
}
