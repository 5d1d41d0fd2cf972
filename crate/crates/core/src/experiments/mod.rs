//! Seeded parameter sweeps over game instances, derived metrics, and CSV
//! output.
//!
//! ```
//! use tullock_genai::experiments::{run_sweep, SweepKind, SweepParam, SweepSpec};
//!
//! let spec = SweepSpec::new(SweepKind::Q1Exclusive).axis(SweepParam::Alpha, &[0.1, 10.0]);
//! let rows = run_sweep(&spec, 1)?;
//! assert_eq!(rows.len(), 2 * spec.seeds.len());
//! assert!(rows.iter().all(|r| r.verified));
//! # Ok::<(), tullock_genai::Error>(())
//! ```

mod metrics;
mod output;
mod sweep;

pub use metrics::{mean_std_err, occupation_ratio, per_topic_gain, sample_costs, OccupationMetric};
pub use output::{fmt_float, row_header, write_groups, write_rows, write_summary, write_welfare_split};
pub use sweep::{
    adoption_by_group, preset, run_sweep, seed_range, BaseParams, GridAxis, SweepKind, SweepParam,
    SweepRow, SweepSpec, TopicOverride, TopicStats, DEFAULT_BASE_SEED, PRESETS, VERIFY_TOL,
};
