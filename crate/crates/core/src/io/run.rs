use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{parse_config, ExperimentKind, RunConfig};
use super::format::fmt_num;
use crate::asymptotics::{
    compare_experiment, lemma2_diagnostic, martingale_trace, positivity_check, weak_coupling_experiment,
    ExperimentRecord, Setup,
};
use crate::dos::{conjecture_comparison, dos_grid, fourier_decay_check, log_grid};
use crate::error::{Error, Result};
use crate::measure::{free_measure, random_measure, MeasureMeta, TestFunction};
use crate::model::{Cube, SiteField};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub file: String,
    pub row: String,
    pub error: String,
}

/// Written last, after every artifact; enough to rerun the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub config_hash: String,
    /// The configuration document exactly as given.
    pub config: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub rows: usize,
    pub failed_rows: usize,
    pub failures: Vec<RowFailure>,
    pub notes: Vec<String>,
    pub outputs: Vec<OutputFile>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: not a run manifest: {e}", path.display())))
    }

    pub fn succeeded(&self) -> bool {
        self.failed_rows == 0
    }
}

/// Artifacts of one run before they are written.
struct Artifacts {
    files: Vec<(String, String)>,
    rows: usize,
    failures: Vec<RowFailure>,
    notes: Vec<String>,
}

impl Artifacts {
    fn new() -> Self {
        Artifacts {
            files: Vec::new(),
            rows: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn add(&mut self, name: impl Into<String>, content: String) {
        self.files.push((name.into(), content));
    }

    fn record(&mut self, name: &str, rec: &ExperimentRecord) {
        self.rows += rec.rows.len();
        for r in &rec.rows {
            if let Some(e) = &r.failure {
                self.failures.push(RowFailure {
                    file: name.to_string(),
                    row: format!("L_or_eta={} seed={}", fmt_num(r.parameter), r.seed),
                    error: e.clone(),
                });
            }
        }
        self.add(name, rec.to_csv());
    }
}

fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Write via a temporary sibling and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, content).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config_hash: &'a str,
    #[serde(flatten)]
    meta: &'a MeasureMeta,
}

fn window(config: &RunConfig) -> f64 {
    match (config.window, &config.test_function) {
        (Some(k), _) => k,
        (None, Some(f)) => {
            let (lo, hi) = f.support();
            lo.abs().max(hi.abs())
        }
        (None, None) => unreachable!("validated: K or a test function"),
    }
}

fn setup(config: &RunConfig) -> Setup {
    Setup {
        dim: config.dim,
        energy: config.energy,
        law: config.law.expect("validated"),
        f: config.test_function.clone().expect("validated"),
        seeds: config.seeds,
        method: config.method,
        timing: config.timing,
    }
}

fn sidecar(config: &RunConfig, meta: &MeasureMeta) -> String {
    let mut s = serde_json::to_string_pretty(&Sidecar {
        config_hash: &config.hash,
        meta,
    })
    .unwrap();
    s.push('\n');
    s
}

fn produce(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let name = config.experiment.as_str();
    match config.experiment {
        ExperimentKind::FreeMeasure => {
            let m = free_measure(config.dim, config.half_widths[0], config.energy, window(config))?;
            out.rows += m.atoms().len();
            out.add(format!("{name}.csv"), m.to_csv());
            out.add(format!("{name}.meta.json"), sidecar(config, &m.meta));
        }
        ExperimentKind::RandomMeasure => {
            let cube = Cube::new(config.dim, config.half_widths[0])?;
            let field = SiteField::sample(
                cube,
                &config.profile.unwrap(),
                &config.law.unwrap(),
                config.seeds.master,
            );
            let m = random_measure(&field, config.energy, window(config), &config.method)?;
            out.rows += 1;
            out.add(format!("{name}.csv"), m.to_csv());
            out.add(format!("{name}.meta.json"), sidecar(config, m.meta()));
        }
        ExperimentKind::Compare => {
            let rec = compare_experiment(&setup(config), &config.half_widths, &config.profile.unwrap())?;
            out.record(&format!("{name}.csv"), &rec);
        }
        ExperimentKind::WeakCoupling => {
            let rec = weak_coupling_experiment(&setup(config), &config.etas, &config.scale.unwrap())?;
            out.record(&format!("{name}.csv"), &rec);
        }
        ExperimentKind::Martingale => {
            let p = config.martingale.as_ref().unwrap();
            let law = config.law.unwrap();
            let seeds: Vec<u64> = config.seeds.iter().collect();
            let traces = seeds
                .par_iter()
                .map(|&s| martingale_trace(config.dim, p.epsilon, &law, s, p.half_width_max))
                .collect::<Result<Vec<_>>>()?;
            let mut csv = String::from("seed,L,M,normalized\n");
            for t in &traces {
                for l in 1..=t.half_width_max() {
                    writeln!(
                        csv,
                        "{},{l},{},{}",
                        t.seed,
                        fmt_num(t.values[l]),
                        fmt_num(t.normalized(l))
                    )
                    .unwrap();
                    out.rows += 1;
                }
            }
            out.add(format!("{name}.csv"), csv);
        }
        ExperimentKind::Lemma2 => {
            let p = config.lemma2.as_ref().unwrap();
            let t = lemma2_diagnostic(
                config.dim,
                config.energy,
                config.test_function.as_ref().unwrap(),
                &config.half_widths,
                &p.gammas,
                &p.edge_half_widths,
                p.allow_outside,
            )?;
            out.rows += t.integrals.len() + t.edge_sums.len();
            out.add(format!("{name}.csv"), t.integrals_csv());
            out.add(format!("{name}-edge.csv"), t.edge_sums_csv());
            if let Some(s) = t.spread() {
                out.notes.push(format!("max/median of integrals: {}", fmt_num(s)));
            }
        }
        ExperimentKind::Positivity => {
            let p = config.positivity.as_ref().unwrap();
            let mut csv = String::from("L,integral,reference,ratio,status\n");
            for &l in &config.half_widths {
                out.rows += 1;
                match positivity_check(config.dim, config.energy, p.plateau, p.ramp, l) {
                    Ok(r) => writeln!(
                        csv,
                        "{l},{},{},{},ok",
                        fmt_num(r.integral),
                        fmt_num(r.reference),
                        fmt_num(r.ratio)
                    )
                    .unwrap(),
                    Err(e) => {
                        let msg = e.to_string();
                        writeln!(csv, "{l},,,,error: {}", msg.replace([',', '\n'], ";")).unwrap();
                        out.failures.push(RowFailure {
                            file: format!("{name}.csv"),
                            row: format!("L={l}"),
                            error: msg,
                        });
                    }
                }
            }
            out.add(format!("{name}.csv"), csv);
        }
        ExperimentKind::Dos => {
            let p = config.dos.as_ref().unwrap();
            let t_grid = log_grid(p.t_min, p.t_max, p.t_count);
            let mut summary = String::from("r,normalization,grid_integral,symmetry_error,sup_scaled\n");
            for &r in &p.dims {
                let g = dos_grid(r, p.grid_size)?;
                let d = fourier_decay_check(r, &t_grid)?;
                writeln!(
                    summary,
                    "{r},{},{},{},{}",
                    fmt_num(g.normalization),
                    fmt_num(g.grid_integral),
                    fmt_num(g.symmetry_error),
                    fmt_num(d.sup_scaled)
                )
                .unwrap();
                out.rows += 1;
                out.add(format!("{name}-r{r}.csv"), g.to_csv());
                out.add(format!("{name}-decay-r{r}.csv"), d.to_csv());
            }
            out.add(format!("{name}-summary.csv"), summary);
        }
        ExperimentKind::Conjecture => {
            let spec = config.conjecture.as_ref().unwrap();
            let f: &TestFunction = config.test_function.as_ref().unwrap();
            let table = conjecture_comparison(spec, f, &config.half_widths)?;
            out.rows += table.rows.len();
            out.add(format!("{name}.csv"), table.to_csv());
        }
    }
    Ok(())
}

/// Run one configured experiment, writing its CSVs and then the manifest
/// into `out_dir`. Row-level failures are recorded in the manifest; an
/// error is returned only when the run as a whole cannot proceed.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunManifest> {
    let started = now_unix();
    for note in &config.notes {
        warn!("{note}");
    }
    info!("running {} (config {})", config.experiment, &config.hash[..12]);
    let work = || -> Result<Artifacts> {
        let mut a = Artifacts::new();
        produce(config, &mut a)?;
        Ok(a)
    };
    let artifacts = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut outputs = Vec::new();
    for (name, content) in &artifacts.files {
        let path = out_dir.join(name);
        write_atomic(&path, content.as_bytes())?;
        info!("wrote {}", path.display());
        outputs.push(OutputFile {
            name: name.clone(),
            sha256: hex::encode(Sha256::digest(content.as_bytes())),
        });
    }
    let mut notes = config.notes.clone();
    notes.extend(artifacts.notes);
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: config.experiment.as_str().to_string(),
        config_hash: config.hash.clone(),
        config: config.source.clone(),
        started_unix: started,
        finished_unix: now_unix(),
        rows: artifacts.rows,
        failed_rows: artifacts.failures.len(),
        failures: artifacts.failures,
        notes,
        outputs,
    };
    let mut json = serde_json::to_string_pretty(&manifest).unwrap();
    json.push('\n');
    write_atomic(&out_dir.join(MANIFEST_NAME), json.as_bytes())?;
    Ok(manifest)
}

/// Rerun the configuration stored in a manifest into `out_dir`.
pub fn rerun(manifest: &Path, out_dir: &Path) -> Result<RunManifest> {
    let m = RunManifest::load(manifest)?;
    let config = parse_config(&m.config)?;
    if config.hash != m.config_hash {
        return Err(Error::MetadataMismatch(format!(
            "stored config hashes to {}, manifest says {}",
            config.hash, m.config_hash
        )));
    }
    run(&config, out_dir)
}

/// Where outputs go: the explicit directory, else the config's, else `out`.
pub fn resolve_out_dir(config: &RunConfig, explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(text: &str) -> (tempfile::TempDir, RunManifest) {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config(text).unwrap();
        let m = run(&c, dir.path()).unwrap();
        (dir, m)
    }

    #[test]
    fn free_measure_three_atoms() {
        let (dir, m) = run_text("experiment = \"free-measure\"\n[model]\nd = 1\nL = 1\nE = 0\nK = 10\n");
        let csv = fs::read_to_string(dir.path().join("free-measure.csv")).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(m.succeeded());
        assert!(dir.path().join("free-measure.meta.json").exists());
        assert!(dir.path().join(MANIFEST_NAME).exists());
    }

    #[test]
    fn compare_with_zero_profile() {
        let (dir, m) = run_text(
            "experiment = \"compare\"\n[model]\nd = 2\nL = [2, 3]\nE = 0.5\n\
             [profile]\nkind = \"decaying\"\namplitude = 0\nepsilon = 0.5\n\
             [law]\nkind = \"uniform-sym\"\n[test_function]\nkind = \"bump\"\nhalf_width = 2\n[seeds]\nmaster = 3\ncount = 2\n",
        );
        let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.split(',').nth(6) == Some("0")), "{csv}");
        assert_eq!(m.rows, 4);
    }

    #[test]
    fn martingale_bernoulli_rows_zero() {
        let (dir, _) = run_text(
            "experiment = \"martingale\"\n[model]\nd = 2\n[law]\nkind = \"bernoulli\"\n\
             [martingale]\nepsilon = 1\nL_max = 5\n[seeds]\ncount = 3\n",
        );
        let csv = fs::read_to_string(dir.path().join("martingale.csv")).unwrap();
        assert_eq!(csv.lines().count(), 16);
        assert!(csv.lines().skip(1).all(|r| r.split(',').nth(2) == Some("0")));
    }

    #[test]
    fn rerun_is_byte_identical() {
        let (dir, m) = run_text(
            "experiment = \"weak-coupling\"\n[model]\nd = 2\nE = 0.5\n[law]\nkind = \"gaussian\"\n\
             [test_function]\nkind = \"bump\"\nhalf_width = 2\n[weak_coupling]\netas = [0.1, 0.03]\nexponent = 0.3333333333333333\n\
             [seeds]\nmaster = 9\ncount = 2\n",
        );
        let again = tempfile::tempdir().unwrap();
        let m2 = rerun(&dir.path().join(MANIFEST_NAME), again.path()).unwrap();
        assert_eq!(m.outputs, m2.outputs);
        for o in &m.outputs {
            assert_eq!(
                fs::read(dir.path().join(&o.name)).unwrap(),
                fs::read(again.path().join(&o.name)).unwrap()
            );
        }
    }

    #[test]
    fn row_failures_counted() {
        let (_, m) = run_text(
            "experiment = \"compare\"\n[model]\nd = 3\nL = [2, 8]\nE = 0.5\n\
             [profile]\nkind = \"decaying\"\namplitude = 1\nepsilon = 0.5\n\
             [law]\nkind = \"uniform01\"\n[test_function]\nkind = \"bump\"\nhalf_width = 1\n",
        );
        assert_eq!(m.failed_rows, 1);
        assert!(!m.succeeded());
    }
}
