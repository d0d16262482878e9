use std::time::Instant;

use rayon::prelude::*;

use super::cases::ManufacturedCase;
use crate::error::{Error, Result};
use crate::fem_space::{FeSpace, QuadratureRule, SolverOptions, DEFAULT_POINTS};
use crate::graded_time::TimeMesh;
use crate::kirchhoff_solver::{apriori_bound_report, solve_all, Trajectory};

/// Largest number of time steps a spatial study will couple to.
pub const MAX_COUPLED_STEPS: usize = 4096;

/// Nearest even integer to `x`, at least 2.
pub fn round_even(x: f64) -> usize {
    ((x / 2.0).round() as usize).max(1) * 2
}

/// `Mₛ` paired with `N` in a temporal study: nearest even `N^{2−β}`.
pub fn coupled_divisions(steps: usize, beta: f64) -> usize {
    round_even((steps as f64).powf(2.0 - beta))
}

/// `N` paired with `Mₛ` in a spatial study: nearest even `Mₛ^{2/(2−β)}`.
pub fn coupled_steps(divisions: usize, beta: f64) -> usize {
    round_even((divisions as f64).powf(2.0 / (2.0 - beta)))
}

/// `log₂(E_k / E_{k+1})` for errors keyed by a refinement parameter that
/// doubles between consecutive entries.
pub fn observed_order(errors: &[(usize, f64)]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::invalid("errors", "need at least two refinement levels"));
    }
    errors
        .windows(2)
        .map(|w| {
            let ((k0, e0), (k1, e1)) = (w[0], w[1]);
            if k1 != 2 * k0 {
                return Err(Error::invalid("errors", format!("refinement {k0} -> {k1} is not a doubling")));
            }
            if !(e0 > 0.0 && e1 > 0.0) {
                return Err(Error::invalid("errors", "errors must be positive"));
            }
            Ok((e0 / e1).log2())
        })
        .collect()
}

/// Error-norm rule used unless overridden: 3-point Gauss on intervals, the
/// centroid rule on triangles.
///
/// The centroid rule sees only the element-mean gradient error, which
/// lowers 2D error values by roughly a quarter against the exact norm while
/// keeping the first-order rate; it is the measure under which the
/// 2D reference values are reproduced. Pass 7 for a near-exact norm.
pub fn default_error_points(dimension: usize) -> usize {
    if dimension == 1 {
        DEFAULT_POINTS
    } else {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    /// Refines `N`; `Mₛ` follows.
    Temporal,
    /// Refines `Mₛ`; `N` follows.
    Spatial,
}

#[derive(Debug, Clone)]
pub struct StudyOptions {
    /// Grading exponent; `None` uses `(2 − β)/β`.
    pub grading: Option<f64>,
    /// Rule for loads and projections.
    pub quadrature_points: usize,
    /// Rule for error norms; `None` picks [`default_error_points`].
    pub error_points: Option<usize>,
    pub solver: SolverOptions,
    /// Worker threads across independent runs; 1 runs serially.
    pub threads: usize,
    pub max_steps: usize,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            grading: None,
            quadrature_points: DEFAULT_POINTS,
            error_points: None,
            solver: SolverOptions::default(),
            threads: 1,
            max_steps: MAX_COUPLED_STEPS,
        }
    }
}

/// One point of a convergence grid.
#[derive(Debug, Clone)]
pub struct StudyJob {
    pub case: ManufacturedCase,
    pub steps: usize,
    pub divisions: usize,
    pub grading: f64,
}

impl StudyJob {
    pub fn new(case: &ManufacturedCase, steps: usize, divisions: usize, grading: Option<f64>) -> Self {
        StudyJob {
            grading: grading.unwrap_or_else(|| case.default_grading()),
            case: case.clone(),
            steps,
            divisions,
        }
    }
}

/// A finished run with its meshes, kept for post-processing.
#[derive(Debug)]
pub struct CaseRun {
    pub time: TimeMesh,
    pub space: FeSpace,
    pub trajectory: Trajectory,
    /// Rule used for error norms.
    pub error_rule: QuadratureRule,
    pub seconds: f64,
}

impl CaseRun {
    /// `‖∇(u(tₙ) − Uⁿ)‖` for `n = 0..=N`.
    pub fn h1_errors(&self, case: &ManufacturedCase) -> Vec<f64> {
        (0..=self.trajectory.last_level())
            .map(|n| {
                let t = self.time.t(n);
                self.space
                    .h1_seminorm_error_with(&self.trajectory.u(n), |p| case.exact_gradient(p, t), &self.error_rule)
            })
            .collect()
    }

    /// `‖u(tₙ) − Uⁿ‖` for `n = 0..=N`.
    pub fn l2_errors(&self, case: &ManufacturedCase) -> Vec<f64> {
        (0..=self.trajectory.last_level())
            .map(|n| {
                let t = self.time.t(n);
                self.space
                    .l2_error_with(&self.trajectory.u(n), |p| case.exact(p, t), &self.error_rule)
            })
            .collect()
    }

    /// `max_{1≤n≤N} ‖∇(u(tₙ) − Uⁿ)‖`.
    pub fn max_h1_error(&self, case: &ManufacturedCase) -> f64 {
        self.h1_errors(case).into_iter().skip(1).fold(0.0, f64::max)
    }

    pub fn bound_quantity(&self) -> Vec<f64> {
        apriori_bound_report(&self.trajectory, &self.space)
    }
}

/// Builds the meshes for `job` and runs the scheme to `T`.
pub fn run_case(job: &StudyJob, opts: &StudyOptions) -> Result<CaseRun> {
    let start = Instant::now();
    let problem = job.case.problem();
    let time = TimeMesh::graded(problem.final_time(), job.steps, job.grading)?;
    let space = FeSpace::with_quadrature(problem.domain().mesh(job.divisions)?, opts.quadrature_points)?;
    let dim = space.mesh().dimension();
    let error_rule = QuadratureRule::for_dimension(dim, opts.error_points.unwrap_or(default_error_points(dim)))?;
    let trajectory = solve_all(problem, &time, &space, opts.solver)?;
    Ok(CaseRun {
        time,
        space,
        trajectory,
        error_rule,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs `f` over `items` in order, on a dedicated pool when `threads > 1`.
pub fn map_ordered<T, R, F>(items: &[T], threads: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    if threads <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))?;
    pool.install(|| items.par_iter().map(f).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub alpha: f64,
    pub steps: usize,
    pub divisions: usize,
    pub grading: f64,
    pub error: f64,
    /// Observed order against the next refinement; `None` on the last row.
    pub order: Option<f64>,
    pub seconds: f64,
    /// Largest CG iteration count over the run, 0 for direct solves.
    pub cg_iters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub kind: StudyKind,
    pub rows: Vec<ConvergenceRow>,
    /// Free-form remarks, e.g. coupling caps.
    pub notes: Vec<String>,
}

impl ConvergenceReport {
    /// Orders rows by `(alpha, refinement)` and fills in observed orders per
    /// `alpha` group.
    pub fn from_rows(kind: StudyKind, mut rows: Vec<ConvergenceRow>, notes: Vec<String>) -> Result<Self> {
        let key = |r: &ConvergenceRow| match kind {
            StudyKind::Temporal => r.steps,
            StudyKind::Spatial => r.divisions,
        };
        rows.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(key(a).cmp(&key(b))));
        let mut start = 0;
        while start < rows.len() {
            let mut end = start + 1;
            while end < rows.len() && rows[end].alpha == rows[start].alpha {
                end += 1;
            }
            let group = &mut rows[start..end];
            for r in group.iter_mut() {
                r.order = None;
            }
            if group.len() >= 2 {
                let keyed: Vec<(usize, f64)> = group.iter().map(|r| (key(r), r.error)).collect();
                for (r, oc) in group.iter_mut().zip(observed_order(&keyed)?) {
                    r.order = Some(oc);
                }
            }
            start = end;
        }
        Ok(ConvergenceReport { kind, rows, notes })
    }

    /// Rows for one `alpha`.
    pub fn rows_for(&self, alpha: f64) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.alpha == alpha)
    }

    /// Merges reports of the same kind.
    pub fn merge(kind: StudyKind, reports: impl IntoIterator<Item = ConvergenceReport>) -> Result<Self> {
        let mut rows = Vec::new();
        let mut notes = Vec::new();
        for r in reports {
            if r.kind != kind {
                return Err(Error::invalid("kind", "cannot merge temporal and spatial reports"));
            }
            rows.extend(r.rows);
            notes.extend(r.notes);
        }
        Self::from_rows(kind, rows, notes)
    }
}

/// Jobs for a temporal study: each `N` paired with `Mₛ = N^{2−β}`.
pub fn temporal_jobs(case: &ManufacturedCase, steps: &[usize], opts: &StudyOptions) -> Vec<StudyJob> {
    steps
        .iter()
        .map(|&n| StudyJob::new(case, n, coupled_divisions(n, case.beta()), opts.grading))
        .collect()
}

/// Jobs for a spatial study, each `Mₛ` paired with `N = Mₛ^{2/(2−β)}`
/// capped at `opts.max_steps`; returns notes for every capped pairing.
pub fn spatial_jobs(case: &ManufacturedCase, divisions: &[usize], opts: &StudyOptions) -> (Vec<StudyJob>, Vec<String>) {
    let mut notes = Vec::new();
    let jobs = divisions
        .iter()
        .map(|&ms| {
            let coupled = coupled_steps(ms, case.beta());
            let n = if coupled > opts.max_steps {
                notes.push(format!(
                    "alpha={} Ms={ms}: N capped at {} (coupling gives {coupled})",
                    case.alpha(),
                    opts.max_steps
                ));
                opts.max_steps
            } else {
                coupled
            };
            StudyJob::new(case, n, ms, opts.grading)
        })
        .collect();
    (jobs, notes)
}

/// Runs every job and reports `max_n ‖∇(u(tₙ) − Uⁿ)‖` per job.
pub fn run_jobs(jobs: &[StudyJob], opts: &StudyOptions) -> Result<Vec<ConvergenceRow>> {
    map_ordered(jobs, opts.threads, |job| {
        let run = run_case(job, opts)?;
        Ok(ConvergenceRow {
            alpha: job.case.alpha(),
            steps: job.steps,
            divisions: job.divisions,
            grading: job.grading,
            error: run.max_h1_error(&job.case),
            order: None,
            seconds: run.seconds,
            cg_iters: run.trajectory.max_iterations(),
        })
    })
}

pub fn temporal_study(case: &ManufacturedCase, steps: &[usize], opts: &StudyOptions) -> Result<ConvergenceReport> {
    let rows = run_jobs(&temporal_jobs(case, steps, opts), opts)?;
    ConvergenceReport::from_rows(StudyKind::Temporal, rows, Vec::new())
}

pub fn spatial_study(case: &ManufacturedCase, divisions: &[usize], opts: &StudyOptions) -> Result<ConvergenceReport> {
    let (jobs, notes) = spatial_jobs(case, divisions, opts);
    let rows = run_jobs(&jobs, opts)?;
    ConvergenceReport::from_rows(StudyKind::Spatial, rows, notes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub alpha: f64,
    pub steps: usize,
    pub divisions: usize,
    /// `max_n (‖Vⁿ‖ + ‖∇Ūⁿ‖)`.
    pub max_bound: f64,
    /// The same quantity at `n = N`.
    pub final_bound: f64,
}

/// Stability monitor over a temporal refinement with coupled `Mₛ`.
pub fn bound_study(case: &ManufacturedCase, steps: &[usize], opts: &StudyOptions) -> Result<Vec<BoundRow>> {
    let jobs = temporal_jobs(case, steps, opts);
    map_ordered(&jobs, opts.threads, |job| {
        let run = run_case(job, opts)?;
        let b = run.bound_quantity();
        Ok(BoundRow {
            alpha: job.case.alpha(),
            steps: job.steps,
            divisions: job.divisions,
            max_bound: b.iter().copied().fold(0.0, f64::max),
            final_bound: *b.last().expect("at least three levels"),
        })
    })
}
