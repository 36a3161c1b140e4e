//! Evaluation of every sweep point, in parallel, with per-row failures.

use rayon::prelude::*;
use rpif_core::interference::{decompose_with, BeamPair, InterferenceBreakdown};
use rpif_core::lattice::extrapolated_propagator;
use rpif_core::{validate_scenario, Beam, Mode, RawScenario, Scenario};

use crate::config::{Config, ModeSelection, UnitSystem};

/// Largest |I_k(paper-literal) - I_k(derived)| tolerated by `--strict-modes`.
pub const MODE_AGREEMENT: f64 = 1e-8;

/// Numbers of one successfully evaluated row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues {
    /// |U_a + U_b|², in inverse squared length units of the configuration.
    pub intensity: f64,
    pub reduced_i: f64,
    /// I1..I5 in units of ħ.
    pub terms: [f64; 5],
    /// (S_a - S_b)/ħ
    pub phase_difference: f64,
    pub residual: f64,
}

impl RowValues {
    fn from_breakdown(b: &InterferenceBreakdown, intensity_scale: f64) -> Self {
        Self {
            intensity: b.intensity * intensity_scale,
            reduced_i: b.reduced_i,
            terms: b.terms(),
            phase_difference: b.phase_difference,
            residual: b.residual,
        }
    }
}

/// One output row: a sweep point evaluated in one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub swept_value: f64,
    pub mode: Mode,
    /// Absent when the point could not be evaluated.
    pub values: Option<RowValues>,
    /// max over beams of |U_closed - U_lattice| / |U_lattice|.
    pub oracle_dev: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Run-time choices that may override the configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub mode: Option<ModeSelection>,
    pub oracle: Option<Vec<usize>>,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Also evaluate the mode not requested and record the largest gap.
    pub strict_modes: bool,
}

/// Rows in grid order (modes in literal, derived order within a point).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    /// Largest per-term gap between the two modes, when requested.
    pub mode_gap: Option<f64>,
}

impl SweepOutcome {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(ResultRow::failed)
    }
}

struct PointResult {
    rows: Vec<ResultRow>,
    gap: Option<f64>,
}

/// The scenario the numerics run on, and the factor that converts intensity
/// back to configuration units.
pub fn working_scenario(
    raw: &RawScenario,
    units: UnitSystem,
) -> rpif_core::Result<(Scenario, f64)> {
    let s = validate_scenario(raw)?;
    match units {
        UnitSystem::Natural => Ok((s, 1.0)),
        UnitSystem::Si => {
            let (scaled, u) = s.nondimensionalized()?;
            Ok((scaled, 1.0 / (u.length * u.length)))
        }
    }
}

fn oracle_deviation(s: &Scenario, pair: &BeamPair, levels: &[usize]) -> rpif_core::Result<f64> {
    let mut worst: f64 = 0.0;
    for (which, closed) in [(Beam::A, pair.a.amplitude), (Beam::B, pair.b.amplitude)] {
        let lattice = extrapolated_propagator(s, which, levels)?.value;
        worst = worst.max((closed - lattice).norm() / lattice.norm());
    }
    Ok(worst)
}

fn evaluate_point(
    value: f64,
    raw: &RawScenario,
    units: UnitSystem,
    modes: &[Mode],
    oracle: Option<&[usize]>,
    strict: bool,
) -> PointResult {
    let fail = |message: String| PointResult {
        rows: modes
            .iter()
            .map(|&mode| ResultRow {
                swept_value: value,
                mode,
                values: None,
                oracle_dev: None,
                error: Some(message.clone()),
            })
            .collect(),
        gap: strict.then_some(f64::INFINITY),
    };
    let (s, intensity_scale) = match working_scenario(raw, units) {
        Ok(x) => x,
        Err(e) => return fail(e.to_string()),
    };
    let pair = match BeamPair::compute(&s) {
        Ok(p) => p,
        Err(e) => return fail(e.to_string()),
    };
    let (oracle_dev, oracle_error) = match oracle {
        None => (None, None),
        Some(levels) => match oracle_deviation(&s, &pair, levels) {
            Ok(d) => (Some(d), None),
            Err(e) => (None, Some(format!("oracle: {e}"))),
        },
    };

    let wanted: &[Mode] = if strict { &Mode::ALL } else { modes };
    let breakdowns: Vec<(Mode, Result<InterferenceBreakdown, String>)> = wanted
        .iter()
        .map(|&m| (m, decompose_with(&s, m, &pair).map_err(|e| e.to_string())))
        .collect();

    let gap = strict.then(|| match (&breakdowns[0].1, &breakdowns[1].1) {
        (Ok(l), Ok(d)) => l
            .terms()
            .iter()
            .zip(d.terms())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    });

    let rows = modes
        .iter()
        .map(|&mode| {
            let result = &breakdowns
                .iter()
                .find(|(m, _)| *m == mode)
                .expect("every requested mode is evaluated")
                .1;
            match result {
                Ok(b) => ResultRow {
                    swept_value: value,
                    mode,
                    values: Some(RowValues::from_breakdown(b, intensity_scale)),
                    oracle_dev,
                    error: oracle_error.clone(),
                },
                Err(e) => ResultRow {
                    swept_value: value,
                    mode,
                    values: None,
                    oracle_dev,
                    error: Some(e.clone()),
                },
            }
        })
        .collect();
    PointResult { rows, gap }
}

/// Evaluates every sweep point. Failures stay in their rows; the row order
/// does not depend on how the points were scheduled.
pub fn run_sweep(
    config: &Config,
    options: &RunOptions,
) -> Result<SweepOutcome, rayon::ThreadPoolBuildError> {
    let modes = options.mode.unwrap_or(config.sweep.mode).modes();
    let oracle = options
        .oracle
        .clone()
        .or_else(|| config.sweep.oracle.clone());
    let points = config.points();
    let work = || -> Vec<PointResult> {
        points
            .par_iter()
            .map(|(v, raw)| {
                evaluate_point(
                    *v,
                    raw,
                    config.units,
                    modes,
                    oracle.as_deref(),
                    options.strict_modes,
                )
            })
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = options.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let results = builder.build()?.install(work);

    let mode_gap = options
        .strict_modes
        .then(|| results.iter().filter_map(|r| r.gap).fold(0.0, f64::max));
    Ok(SweepOutcome {
        rows: results.into_iter().flat_map(|r| r.rows).collect(),
        mode_gap,
    })
}
