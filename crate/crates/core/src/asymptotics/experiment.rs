use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::measure::{
    bound_rhs, free_measure, random_measure, x_statistic, AtomicMeasure, MeasureMethod, TestFunction,
};
use crate::model::{Cube, DisorderLaw, PotentialProfile, SiteField};

/// ε(η) = ⌊η^{−a}⌋ with 0 < a < 1/2, so ε → ∞ while ε²η → 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleFunction {
    pub exponent: f64,
    /// Cube half-width used at η = 0, where the formula diverges.
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    4
}

impl ScaleFunction {
    pub fn new(exponent: f64) -> Result<Self> {
        let s = ScaleFunction {
            exponent,
            cap: default_cap(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.exponent > 0.0 && 2.0 * self.exponent < 1.0) {
            return Err(Error::Config(format!(
                "scale exponent a = {} must satisfy 0 < a < 1/2",
                self.exponent
            )));
        }
        if self.cap == 0 {
            return Err(Error::Config("scale cap must be ≥ 1".into()));
        }
        Ok(())
    }

    /// The cube half-width at coupling η (at least 1).
    pub fn eval(&self, eta: f64) -> usize {
        if eta == 0.0 {
            return self.cap;
        }
        // The relative nudge keeps exact powers such as 0.001^{−1/3} = 10
        // from rounding down.
        let v = (eta.powf(-self.exponent) * (1.0 + 1e-12)).floor();
        (v as usize).max(1)
    }
}

/// Seeds `master, master + 1, …, master + count − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRange {
    pub master: u64,
    pub count: u64,
}

impl SeedRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> + Clone {
        let master = self.master;
        (0..self.count).map(move |i| master.wrapping_add(i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub experiment: &'static str,
    pub dim: usize,
    /// L for decay rows, η for weak-coupling rows.
    pub parameter: f64,
    pub half_width: usize,
    pub seed: u64,
    pub energy: f64,
    pub window: f64,
    pub x: Option<f64>,
    pub x_error: Option<f64>,
    pub bound: Option<f64>,
    pub theorem_bound: Option<f64>,
    pub method: MeasureMethod,
    pub wall_ms: Option<f64>,
    /// `None` on success, otherwise the error message.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub rows: Vec<ExperimentRow>,
}

pub const EXPERIMENT_CSV_HEADER: &str =
    "experiment,d,L_or_eta,seed,E,K,X,bound,method,wall_ms,L,x_error,theorem_bound,status";

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), fmt_num)
}

fn method_label(m: &MeasureMethod) -> String {
    match m {
        MeasureMethod::Dense => "dense".into(),
        MeasureMethod::Counting { cells, inertia } => {
            format!(
                "counting-{cells}-{}",
                serde_json::to_value(inertia).unwrap().as_str().unwrap_or("?")
            )
        }
    }
}

impl ExperimentRecord {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failure.is_some()).count()
    }

    /// (parameter, median |X|) in first-seen parameter order, over
    /// successful rows.
    pub fn medians(&self) -> Vec<(f64, f64)> {
        let mut order: Vec<f64> = Vec::new();
        let mut groups: HashMap<u64, Vec<f64>> = HashMap::new();
        for row in &self.rows {
            let Some(x) = row.x else { continue };
            let key = row.parameter.to_bits();
            if !groups.contains_key(&key) {
                order.push(row.parameter);
            }
            groups.entry(key).or_default().push(x.abs());
        }
        order
            .into_iter()
            .map(|p| (p, median(groups.remove(&p.to_bits()).unwrap())))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(EXPERIMENT_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let status = match &r.failure {
                None => "ok".to_string(),
                Some(msg) => format!("error: {}", msg.replace([',', '\n', '\r'], ";")),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.experiment,
                r.dim,
                fmt_num(r.parameter),
                r.seed,
                fmt_num(r.energy),
                fmt_num(r.window),
                opt(r.x),
                opt(r.bound),
                method_label(&r.method),
                opt(r.wall_ms),
                r.half_width,
                opt(r.x_error),
                opt(r.theorem_bound),
                status
            )
            .unwrap();
        }
        out
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Inputs shared by both drivers.
#[derive(Debug, Clone)]
pub struct Setup {
    pub dim: usize,
    pub energy: f64,
    pub law: DisorderLaw,
    pub f: TestFunction,
    pub seeds: SeedRange,
    pub method: MeasureMethod,
    /// Record wall-clock time per row (makes the CSV run-dependent).
    pub timing: bool,
}

impl Setup {
    fn validate(&self) -> Result<()> {
        self.law.validate()?;
        let edge = 2.0 * self.dim as f64;
        if self.dim == 0 || !(self.energy.abs() <= edge) {
            return Err(Error::Config(format!(
                "E = {} outside [−2d, 2d] for d = {}",
                self.energy, self.dim
            )));
        }
        Ok(())
    }

    /// The symmetric window that covers the support of f.
    fn window(&self) -> f64 {
        let (lo, hi) = self.f.support();
        lo.abs().max(hi.abs())
    }
}

struct Job {
    parameter: f64,
    half_width: usize,
    profile: PotentialProfile,
    seed: u64,
}

struct Outcome {
    x: f64,
    x_error: f64,
    bound: f64,
    raw_abs_sum: f64,
}

fn run_job(setup: &Setup, free: &AtomicMeasure, job: &Job) -> Result<Outcome> {
    let cube = Cube::new(setup.dim, job.half_width)?;
    let field = SiteField::sample(cube, &job.profile, &setup.law, job.seed);
    let random = random_measure(&field, setup.energy, free.meta.window, &setup.method)?;
    let x = x_statistic(free, &random, &setup.f)?;
    Ok(Outcome {
        x: x.value,
        x_error: x.error_bound,
        bound: bound_rhs(&setup.f, &field)?,
        raw_abs_sum: field.raw().iter().map(|q| q.abs()).sum(),
    })
}

fn run_jobs<B>(experiment: &'static str, setup: &Setup, jobs: Vec<Job>, theorem_bound: B) -> Result<ExperimentRecord>
where
    B: Fn(&Job, &Outcome) -> Option<f64> + Sync,
{
    setup.validate()?;
    // Fail early on a test function whose norm cannot be computed.
    setup.f.fourier_norm()?;
    let window = setup.window();
    let mut free = HashMap::new();
    for job in &jobs {
        if let std::collections::hash_map::Entry::Vacant(e) = free.entry(job.half_width) {
            e.insert(free_measure(setup.dim, job.half_width, setup.energy, window));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let result = match &free[&job.half_width] {
                Ok(m) => run_job(setup, m, job),
                Err(e) => Err(e.clone()),
            };
            let wall_ms = setup.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            let mut row = ExperimentRow {
                experiment,
                dim: setup.dim,
                parameter: job.parameter,
                half_width: job.half_width,
                seed: job.seed,
                energy: setup.energy,
                window,
                x: None,
                x_error: None,
                bound: None,
                theorem_bound: None,
                method: setup.method,
                wall_ms,
                failure: None,
            };
            match result {
                Ok(o) => {
                    row.theorem_bound = theorem_bound(job, &o);
                    row.x = Some(o.x);
                    row.x_error = Some(o.x_error);
                    row.bound = Some(o.bound);
                }
                Err(e) => row.failure = Some(e.to_string()),
            }
            row
        })
        .collect();
    Ok(ExperimentRecord { rows })
}

/// X_L against its trace-norm bound for a decaying potential, one row per
/// (L, seed).
pub fn decay_experiment(setup: &Setup, half_widths: &[usize], profile: &PotentialProfile) -> Result<ExperimentRecord> {
    if !matches!(profile, PotentialProfile::Decaying { .. }) {
        return Err(Error::Config("decay experiment needs a decaying profile".into()));
    }
    if setup.dim < 3 {
        warn!(
            "decay experiment at d = {} < 3, outside the theorem's regime",
            setup.dim
        );
    }
    per_cube("decay", setup, half_widths, profile)
}

/// As [`decay_experiment`] for any profile.
pub fn compare_experiment(
    setup: &Setup,
    half_widths: &[usize],
    profile: &PotentialProfile,
) -> Result<ExperimentRecord> {
    per_cube("compare", setup, half_widths, profile)
}

fn per_cube(
    label: &'static str,
    setup: &Setup,
    half_widths: &[usize],
    profile: &PotentialProfile,
) -> Result<ExperimentRecord> {
    profile.validate()?;
    let jobs = half_widths
        .iter()
        .flat_map(|&l| {
            setup.seeds.iter().map(move |seed| Job {
                parameter: l as f64,
                half_width: l,
                profile: *profile,
                seed,
            })
        })
        .collect();
    run_jobs(label, setup, jobs, |_, _| None)
}

/// X at L = ε(η) with the constant coupling η, plus the explicit bound
/// ‖(i+ξ)f̂‖₁ · ε²η · ε^{−d} Σ|q_n|.
pub fn weak_coupling_experiment(setup: &Setup, etas: &[f64], scale: &ScaleFunction) -> Result<ExperimentRecord> {
    scale.validate()?;
    if let Some(eta) = etas.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
        return Err(Error::Config(format!("coupling η = {eta} must be finite and ≥ 0")));
    }
    let jobs = etas
        .iter()
        .flat_map(|&eta| {
            setup.seeds.iter().map(move |seed| Job {
                parameter: eta,
                half_width: scale.eval(eta),
                profile: PotentialProfile::Constant { eta },
                seed,
            })
        })
        .collect();
    let norm = setup.f.fourier_norm()?.value;
    let dim = setup.dim as i32;
    run_jobs("weak-coupling", setup, jobs, move |job, o| {
        let eps = job.half_width as f64;
        Some(norm * eps * eps * job.parameter * eps.powi(-dim) * o.raw_abs_sum)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(dim: usize, energy: f64) -> Setup {
        Setup {
            dim,
            energy,
            law: DisorderLaw::UniformSym { half_width: 1.0 },
            f: TestFunction::bump(0.0, 2.0).unwrap(),
            seeds: SeedRange { master: 5, count: 3 },
            method: MeasureMethod::Dense,
            timing: false,
        }
    }

    #[test]
    fn scale_examples() {
        let s = ScaleFunction::new(1.0 / 3.0).unwrap();
        assert_eq!(s.eval(1e-3), 10);
        let eps = s.eval(1e-3) as f64;
        assert!((eps * eps * 1e-3 - 0.1).abs() < 1e-15);
        assert_eq!(s.eval(0.1), 2);
        assert_eq!(s.eval(0.03), 3);
        assert_eq!(s.eval(0.01), 4);
        assert!(ScaleFunction::new(0.5).is_err());
        assert!(ScaleFunction::new(0.0).is_err());
    }

    #[test]
    fn zero_amplitude_gives_zero_rows() {
        let profile = PotentialProfile::Decaying {
            amplitude: 0.0,
            epsilon: 0.5,
        };
        let rec = decay_experiment(&setup(3, 1.0), &[2, 3], &profile).unwrap();
        assert_eq!(rec.rows.len(), 6);
        assert!(rec.rows.iter().all(|r| r.x == Some(0.0) && r.bound == Some(0.0)));
    }

    #[test]
    fn zero_coupling_gives_zero_rows() {
        let rec = weak_coupling_experiment(&setup(2, 0.5), &[0.0], &ScaleFunction::new(0.25).unwrap()).unwrap();
        assert!(rec.rows.iter().all(|r| r.x == Some(0.0) && r.half_width == 4));
    }

    #[test]
    fn rows_respect_bound_and_order() {
        let profile = PotentialProfile::Decaying {
            amplitude: 1.0,
            epsilon: 0.5,
        };
        let rec = decay_experiment(&setup(2, 1.0), &[2, 3], &profile).unwrap();
        let keys: Vec<(usize, u64)> = rec.rows.iter().map(|r| (r.half_width, r.seed)).collect();
        assert_eq!(keys, vec![(2, 5), (2, 6), (2, 7), (3, 5), (3, 6), (3, 7)]);
        for r in &rec.rows {
            let (x, b) = (r.x.unwrap(), r.bound.unwrap());
            assert!(x.abs() <= b + 1e-6 * (1.0 + b), "{r:?}");
        }
        assert_eq!(rec.medians().len(), 2);
    }

    #[test]
    fn rows_are_reproducible() {
        let rec =
            weak_coupling_experiment(&setup(2, 0.5), &[0.1, 0.03], &ScaleFunction::new(1.0 / 3.0).unwrap()).unwrap();
        let again =
            weak_coupling_experiment(&setup(2, 0.5), &[0.1, 0.03], &ScaleFunction::new(1.0 / 3.0).unwrap()).unwrap();
        assert_eq!(rec.to_csv(), again.to_csv());
        assert!(rec.rows.iter().all(|r| r.theorem_bound.unwrap() > 0.0));
    }

    #[test]
    fn failures_are_recorded_per_row() {
        let mut s = setup(3, 1.0);
        s.seeds.count = 1;
        let profile = PotentialProfile::Decaying {
            amplitude: 1.0,
            epsilon: 0.5,
        };
        // L = 8 exceeds the dense cap; L = 2 still succeeds.
        let rec = decay_experiment(&s, &[2, 8], &profile).unwrap();
        assert_eq!(rec.failures(), 1);
        assert!(rec.rows[0].failure.is_none());
        assert!(rec.to_csv().lines().nth(2).unwrap().contains("error: "));
    }

    #[test]
    fn rejects_constant_profile_for_decay() {
        let profile = PotentialProfile::Constant { eta: 0.1 };
        assert!(decay_experiment(&setup(3, 1.0), &[2], &profile).is_err());
    }
}
