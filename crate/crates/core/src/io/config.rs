use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::asymptotics::{default_gamma_grid, ScaleFunction, SeedRange};
use crate::dos::ConjectureSpec;
use crate::eigen::InertiaMethod;
use crate::error::Error;
use crate::measure::{MeasureMethod, Shape, TestFunction, DEFAULT_COUNTING_CELLS};
use crate::model::{DisorderLaw, PotentialProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    FreeMeasure,
    RandomMeasure,
    Compare,
    Martingale,
    WeakCoupling,
    Lemma2,
    Positivity,
    Dos,
    Conjecture,
}

impl ExperimentKind {
    const ALL: [ExperimentKind; 9] = [
        ExperimentKind::FreeMeasure,
        ExperimentKind::RandomMeasure,
        ExperimentKind::Compare,
        ExperimentKind::Martingale,
        ExperimentKind::WeakCoupling,
        ExperimentKind::Lemma2,
        ExperimentKind::Positivity,
        ExperimentKind::Dos,
        ExperimentKind::Conjecture,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::FreeMeasure => "free-measure",
            ExperimentKind::RandomMeasure => "random-measure",
            ExperimentKind::Compare => "compare",
            ExperimentKind::Martingale => "martingale",
            ExperimentKind::WeakCoupling => "weak-coupling",
            ExperimentKind::Lemma2 => "lemma2",
            ExperimentKind::Positivity => "positivity",
            ExperimentKind::Dos => "dos",
            ExperimentKind::Conjecture => "conjecture",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleParams {
    pub epsilon: f64,
    pub half_width_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Params {
    pub gammas: Vec<f64>,
    pub edge_half_widths: Vec<usize>,
    pub allow_outside: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityParams {
    pub plateau: f64,
    pub ramp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DosParams {
    pub dims: Vec<usize>,
    pub grid_size: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
}

/// A validated run description. Fields irrelevant to the chosen experiment
/// keep their defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub dim: usize,
    pub half_widths: Vec<usize>,
    pub energy: f64,
    /// Measure window; defaults to the reach of the test function.
    pub window: Option<f64>,
    pub profile: Option<PotentialProfile>,
    pub law: Option<DisorderLaw>,
    pub test_function: Option<TestFunction>,
    pub seeds: SeedRange,
    pub method: MeasureMethod,
    pub etas: Vec<f64>,
    pub scale: Option<ScaleFunction>,
    pub martingale: Option<MartingaleParams>,
    pub lemma2: Option<Lemma2Params>,
    pub positivity: Option<PositivityParams>,
    pub dos: Option<DosParams>,
    pub conjecture: Option<ConjectureSpec>,
    pub out_dir: Option<PathBuf>,
    pub timing: bool,
    pub threads: Option<usize>,
    /// Non-fatal regime warnings.
    pub notes: Vec<String>,
    /// The document as given, and sha256 of its canonical JSON form.
    pub source: String,
    pub hash: String,
}

/// Every problem found in a document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl From<ConfigErrors> for Error {
    fn from(e: ConfigErrors) -> Self {
        Error::Config(e.0.join("; "))
    }
}

const SECTIONS: [(&str, &[&str]); 14] = [
    ("model", &["d", "L", "E", "K"]),
    ("profile", &["kind", "amplitude", "epsilon", "eta"]),
    ("law", &["kind", "half_width", "p", "sigma"]),
    ("test_function", &["kind", "center", "half_width", "ramp", "amplitude"]),
    ("seeds", &["master", "count"]),
    ("method", &["kind", "cells", "inertia"]),
    ("weak_coupling", &["etas", "exponent", "cap"]),
    ("martingale", &["epsilon", "L_max"]),
    ("lemma2", &["gammas", "edge_L", "allow_outside"]),
    ("positivity", &["K", "delta"]),
    ("dos", &["r", "grid_size", "t_min", "t_max", "t_count"]),
    (
        "conjecture",
        &["k_max", "theta_tol", "table_nodes", "target", "max_refinements"],
    ),
    ("output", &["dir", "timing"]),
    ("run", &["threads"]),
];

struct Ctx {
    errors: Vec<String>,
    notes: Vec<String>,
}

impl Ctx {
    fn err(&mut self, msg: String) {
        self.errors.push(msg);
    }
}

struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::String(_) => "string",
        Value::Integer(_) => "integer",
        Value::Float(_) => "float",
        Value::Boolean(_) => "boolean",
        Value::Datetime(_) => "datetime",
        Value::Array(_) => "array",
        Value::Table(_) => "table",
    }
}

impl<'a> Section<'a> {
    fn present(&self) -> bool {
        self.table.is_some()
    }

    fn raw(&self, key: &str) -> Option<&'a Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn f64(&self, key: &str, ctx: &mut Ctx) -> Option<f64> {
        match self.raw(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            v => {
                ctx.err(format!("{}: expected a number, found {}", self.path(key), type_name(v)));
                None
            }
        }
    }

    fn u64(&self, key: &str, ctx: &mut Ctx) -> Option<u64> {
        match self.raw(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            v => {
                ctx.err(format!(
                    "{}: expected a non-negative integer, found {v}",
                    self.path(key)
                ));
                None
            }
        }
    }

    fn usize(&self, key: &str, ctx: &mut Ctx) -> Option<usize> {
        self.u64(key, ctx).map(|v| v as usize)
    }

    fn bool(&self, key: &str, ctx: &mut Ctx) -> Option<bool> {
        match self.raw(key)? {
            Value::Boolean(b) => Some(*b),
            v => {
                ctx.err(format!(
                    "{}: expected a boolean, found {}",
                    self.path(key),
                    type_name(v)
                ));
                None
            }
        }
    }

    fn str(&self, key: &str, ctx: &mut Ctx) -> Option<&'a str> {
        match self.raw(key)? {
            Value::String(s) => Some(s),
            v => {
                ctx.err(format!("{}: expected a string, found {}", self.path(key), type_name(v)));
                None
            }
        }
    }

    /// A number or an array of numbers.
    fn f64_list(&self, key: &str, ctx: &mut Ctx) -> Option<Vec<f64>> {
        let as_f64 = |v: &Value| match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        match self.raw(key)? {
            Value::Array(items) => {
                let out: Option<Vec<f64>> = items.iter().map(as_f64).collect();
                if out.is_none() {
                    ctx.err(format!("{}: expected numbers", self.path(key)));
                }
                out
            }
            v => {
                let out = as_f64(v).map(|x| vec![x]);
                if out.is_none() {
                    ctx.err(format!("{}: expected a number or array of numbers", self.path(key)));
                }
                out
            }
        }
    }

    /// An integer or an array of integers.
    fn usize_list(&self, key: &str, ctx: &mut Ctx) -> Option<Vec<usize>> {
        let as_usize = |v: &Value| match v {
            Value::Integer(i) if *i >= 0 => Some(*i as usize),
            _ => None,
        };
        match self.raw(key)? {
            Value::Array(items) => {
                let out: Option<Vec<usize>> = items.iter().map(as_usize).collect();
                if out.is_none() {
                    ctx.err(format!("{}: expected non-negative integers", self.path(key)));
                }
                out
            }
            v => {
                let out = as_usize(v).map(|x| vec![x]);
                if out.is_none() {
                    ctx.err(format!("{}: expected an integer or array of integers", self.path(key)));
                }
                out
            }
        }
    }

    fn require<T>(&self, value: Option<T>, key: &str, ctx: &mut Ctx) -> Option<T> {
        if value.is_none() && self.raw(key).is_none() {
            ctx.err(format!("{}: required", self.path(key)));
        }
        value
    }
}

fn sections<'a>(root: &'a Table, ctx: &mut Ctx) -> Vec<Section<'a>> {
    for (key, value) in root {
        if key == "experiment" {
            continue;
        }
        match SECTIONS.iter().find(|(name, _)| name == key) {
            None => ctx.err(format!("{key}: unknown key")),
            Some((name, allowed)) => match value {
                Value::Table(t) => {
                    for k in t.keys() {
                        if !allowed.contains(&k.as_str()) {
                            ctx.err(format!("{name}.{k}: unknown key"));
                        }
                    }
                }
                v => ctx.err(format!("{name}: expected a table, found {}", type_name(v))),
            },
        }
    }
    SECTIONS
        .iter()
        .map(|(name, _)| Section {
            name,
            table: root.get(*name).and_then(Value::as_table),
        })
        .collect()
}

fn profile(s: &Section, ctx: &mut Ctx) -> Option<PotentialProfile> {
    let kind = s.require(s.str("kind", ctx), "kind", ctx)?;
    let p = match kind {
        "decaying" => PotentialProfile::Decaying {
            amplitude: s.require(s.f64("amplitude", ctx), "amplitude", ctx)?,
            epsilon: s.require(s.f64("epsilon", ctx), "epsilon", ctx)?,
        },
        "constant" => PotentialProfile::Constant {
            eta: s.require(s.f64("eta", ctx), "eta", ctx)?,
        },
        other => {
            ctx.err(format!("profile.kind: unknown profile `{other}` (decaying | constant)"));
            return None;
        }
    };
    if let Err(e) = p.validate() {
        ctx.err(format!("profile: {e}"));
        return None;
    }
    Some(p)
}

fn law(s: &Section, ctx: &mut Ctx) -> Option<DisorderLaw> {
    let kind = s.require(s.str("kind", ctx), "kind", ctx)?;
    let l = match kind {
        "uniform-sym" => DisorderLaw::UniformSym {
            half_width: s.f64("half_width", ctx).unwrap_or(1.0),
        },
        "uniform01" => DisorderLaw::Uniform01,
        "bernoulli" => DisorderLaw::Bernoulli {
            p: s.f64("p", ctx).unwrap_or(0.5),
        },
        "gaussian" => DisorderLaw::Gaussian {
            sigma: s.f64("sigma", ctx).unwrap_or(1.0),
        },
        other => {
            ctx.err(format!(
                "law.kind: unknown law `{other}` (uniform-sym | uniform01 | bernoulli | gaussian)"
            ));
            return None;
        }
    };
    if let Err(e) = l.validate() {
        ctx.err(format!("law: {e}"));
        return None;
    }
    Some(l)
}

fn test_function(s: &Section, ctx: &mut Ctx) -> Option<TestFunction> {
    let kind = s.require(s.str("kind", ctx), "kind", ctx)?;
    let half_width = s.require(s.f64("half_width", ctx), "half_width", ctx);
    let shape = match kind {
        "bump" => Shape::Bump {
            center: s.f64("center", ctx).unwrap_or(0.0),
            half_width: half_width?,
        },
        "raised-cosine2" => Shape::RaisedCosine2 {
            half_width: half_width?,
        },
        "plateau" => Shape::Plateau {
            half_width: half_width?,
            ramp: s.require(s.f64("ramp", ctx), "ramp", ctx)?,
        },
        other => {
            ctx.err(format!(
                "test_function.kind: unknown shape `{other}` (bump | raised-cosine2 | plateau)"
            ));
            return None;
        }
    };
    let f = TestFunction::new(shape).and_then(|f| match s.f64("amplitude", ctx) {
        Some(a) => f.with_amplitude(a),
        None => Ok(f),
    });
    match f {
        Ok(f) => Some(f),
        Err(e) => {
            ctx.err(format!("test_function: {e}"));
            None
        }
    }
}

fn method(s: &Section, ctx: &mut Ctx) -> MeasureMethod {
    if !s.present() {
        return MeasureMethod::Dense;
    }
    match s.str("kind", ctx).unwrap_or("dense") {
        "dense" => MeasureMethod::Dense,
        "counting" => {
            let cells = s.usize("cells", ctx).unwrap_or(DEFAULT_COUNTING_CELLS);
            if cells == 0 {
                ctx.err("method.cells: must be ≥ 1".into());
            }
            let inertia = match s.str("inertia", ctx).unwrap_or("sturm") {
                "sturm" => InertiaMethod::Sturm,
                "banded-ldl" => InertiaMethod::BandedLdl,
                other => {
                    ctx.err(format!("method.inertia: unknown method `{other}` (sturm | banded-ldl)"));
                    InertiaMethod::Sturm
                }
            };
            MeasureMethod::Counting { cells, inertia }
        }
        other => {
            ctx.err(format!("method.kind: unknown method `{other}` (dense | counting)"));
            MeasureMethod::Dense
        }
    }
}

/// sha256 of the canonical JSON form (sorted keys, no whitespace).
pub fn config_hash(root: &Table) -> String {
    let json = serde_json::to_value(root).expect("TOML values map to JSON");
    hex::encode(Sha256::digest(json.to_string().as_bytes()))
}

/// Parse and validate a TOML run description, reporting every problem.
pub fn parse_config(text: &str) -> std::result::Result<RunConfig, ConfigErrors> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigErrors(vec![e.message().to_string()]))?;
    let mut ctx = Ctx {
        errors: Vec::new(),
        notes: Vec::new(),
    };
    let experiment = match root.get("experiment") {
        Some(Value::String(s)) => {
            let k = ExperimentKind::parse(s);
            if k.is_none() {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.as_str()).collect();
                ctx.err(format!("experiment: unknown kind `{s}` ({})", names.join(" | ")));
            }
            k
        }
        Some(v) => {
            ctx.err(format!("experiment: expected a string, found {}", type_name(v)));
            None
        }
        None => {
            ctx.err("experiment: required".into());
            None
        }
    };
    let secs = sections(&root, &mut ctx);
    let sec = |name: &str| secs.iter().find(|s| s.name == name).unwrap();
    let (model, out, run) = (sec("model"), sec("output"), sec("run"));

    use ExperimentKind as K;
    let needs = |kinds: &[ExperimentKind]| experiment.is_some_and(|e| kinds.contains(&e));

    let dim = if needs(&[K::Dos]) {
        model.usize("d", &mut ctx).unwrap_or(0)
    } else {
        model.require(model.usize("d", &mut ctx), "d", &mut ctx).unwrap_or(0)
    };
    if dim == 0 && experiment.is_some() && !needs(&[K::Dos]) && model.raw("d").is_some() {
        ctx.err("model.d: must be ≥ 1".into());
    }
    let needs_energy = needs(&[
        K::FreeMeasure,
        K::RandomMeasure,
        K::Compare,
        K::WeakCoupling,
        K::Lemma2,
        K::Positivity,
        K::Conjecture,
    ]);
    let energy = if needs_energy {
        model.require(model.f64("E", &mut ctx), "E", &mut ctx).unwrap_or(0.0)
    } else {
        model.f64("E", &mut ctx).unwrap_or(0.0)
    };
    if dim > 0 && !(energy.abs() <= 2.0 * dim as f64) {
        ctx.err(format!(
            "model.E: E = {energy} outside [−2d, 2d] = [−{0}, {0}]",
            2 * dim
        ));
    }
    let half_widths = if needs(&[K::FreeMeasure, K::RandomMeasure, K::Compare, K::Lemma2, K::Positivity]) {
        model
            .require(model.usize_list("L", &mut ctx), "L", &mut ctx)
            .unwrap_or_default()
    } else {
        model.usize_list("L", &mut ctx).unwrap_or_default()
    };
    if half_widths.contains(&0) {
        ctx.err("model.L: every L must be ≥ 1".into());
    }
    if needs(&[K::FreeMeasure, K::RandomMeasure]) && half_widths.len() > 1 {
        ctx.err("model.L: measure experiments take a single L".into());
    }
    let window = model.f64("K", &mut ctx);
    if window.is_some_and(|k| !(k > 0.0 && k.is_finite())) {
        ctx.err("model.K: must be finite and > 0".into());
    }

    let profile = if sec("profile").present() {
        profile(sec("profile"), &mut ctx)
    } else {
        if needs(&[K::RandomMeasure, K::Compare]) {
            ctx.err("profile: required".into());
        }
        None
    };
    let law = if sec("law").present() {
        law(sec("law"), &mut ctx)
    } else {
        if needs(&[K::RandomMeasure, K::Compare, K::WeakCoupling, K::Martingale]) {
            ctx.err("law: required".into());
        }
        None
    };
    let test_function = if sec("test_function").present() {
        test_function(sec("test_function"), &mut ctx)
    } else {
        if needs(&[K::Compare, K::WeakCoupling, K::Lemma2, K::Conjecture]) {
            ctx.err("test_function: required".into());
        }
        None
    };
    if needs(&[K::FreeMeasure, K::RandomMeasure]) && window.is_none() && test_function.is_none() {
        ctx.err("model.K: required when no test_function is given".into());
    }

    let seeds_sec = sec("seeds");
    let seeds = SeedRange {
        master: seeds_sec.u64("master", &mut ctx).unwrap_or(0),
        count: seeds_sec.u64("count", &mut ctx).unwrap_or(1),
    };
    if seeds.count == 0 {
        ctx.err("seeds.count: must be ≥ 1".into());
    }
    let method = method(sec("method"), &mut ctx);

    let wc = sec("weak_coupling");
    let mut etas = Vec::new();
    let mut scale = None;
    if needs(&[K::WeakCoupling]) {
        etas = wc
            .require(wc.f64_list("etas", &mut ctx), "etas", &mut ctx)
            .unwrap_or_default();
        if etas.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
            ctx.err("weak_coupling.etas: every η must be finite and ≥ 0".into());
        }
        if let Some(exponent) = wc.require(wc.f64("exponent", &mut ctx), "exponent", &mut ctx) {
            let s = ScaleFunction {
                exponent,
                cap: wc.usize("cap", &mut ctx).unwrap_or(4),
            };
            match s.validate() {
                Ok(()) => scale = Some(s),
                Err(e) => ctx.err(format!("weak_coupling: {e}")),
            }
        }
    }

    let mut martingale = None;
    if needs(&[K::Martingale]) {
        let m = sec("martingale");
        let epsilon = m.require(m.f64("epsilon", &mut ctx), "epsilon", &mut ctx);
        let l_max = m.require(m.usize("L_max", &mut ctx), "L_max", &mut ctx);
        if epsilon.is_some_and(|e| !(e > 0.0 && e.is_finite())) {
            ctx.err("martingale.epsilon: must be finite and > 0".into());
        }
        if let (Some(epsilon), Some(half_width_max)) = (epsilon, l_max) {
            martingale = Some(MartingaleParams {
                epsilon,
                half_width_max,
            });
        }
    }

    let mut lemma2 = None;
    if needs(&[K::Lemma2]) {
        let s = sec("lemma2");
        let gammas = s.f64_list("gammas", &mut ctx).unwrap_or_else(|| default_gamma_grid(10));
        if gammas.iter().any(|g| !(g.abs() < 1.0)) {
            ctx.err("lemma2.gammas: every γ must satisfy |γ| < 1".into());
        }
        let allow_outside = s.bool("allow_outside", &mut ctx).unwrap_or(false);
        if !allow_outside && dim > 0 {
            let e = energy.abs();
            if !(e > 2.0 * dim as f64 - 2.0 && e < 2.0 * dim as f64) {
                ctx.err(format!(
                    "model.E: E = {energy} outside the band edge {} < |E| < {} (set lemma2.allow_outside to override)",
                    2 * dim - 2,
                    2 * dim
                ));
            }
        }
        lemma2 = Some(Lemma2Params {
            gammas,
            edge_half_widths: s.usize_list("edge_L", &mut ctx).unwrap_or_else(|| vec![1000, 2000]),
            allow_outside,
        });
    }

    let mut positivity = None;
    if needs(&[K::Positivity]) {
        let s = sec("positivity");
        let plateau = s.require(s.f64("K", &mut ctx), "K", &mut ctx);
        let ramp = s.require(s.f64("delta", &mut ctx), "delta", &mut ctx);
        if plateau.is_some_and(|k| !(k > 0.0)) {
            ctx.err("positivity.K: must be > 0".into());
        }
        if ramp.is_some_and(|d| !(d > 0.0 && d < 1.0)) {
            ctx.err("positivity.delta: must lie in (0, 1)".into());
        }
        if let (Some(plateau), Some(ramp)) = (plateau, ramp) {
            positivity = Some(PositivityParams { plateau, ramp });
        }
    }

    let mut dos = None;
    if needs(&[K::Dos]) {
        let s = sec("dos");
        let dims = s.usize_list("r", &mut ctx).unwrap_or_else(|| vec![1, 2, 3, 4]);
        if dims.is_empty() || dims.contains(&0) {
            ctx.err("dos.r: every r must be ≥ 1".into());
        }
        let p = DosParams {
            dims,
            grid_size: s.usize("grid_size", &mut ctx).unwrap_or(2001),
            t_min: s.f64("t_min", &mut ctx).unwrap_or(10.0),
            t_max: s.f64("t_max", &mut ctx).unwrap_or(1000.0),
            t_count: s.usize("t_count", &mut ctx).unwrap_or(200),
        };
        if p.grid_size < 2 {
            ctx.err("dos.grid_size: must be ≥ 2".into());
        }
        if !(p.t_min > 0.0 && p.t_min < p.t_max && p.t_max.is_finite()) {
            ctx.err("dos.t_min, dos.t_max: need 0 < t_min < t_max < ∞".into());
        }
        dos = Some(p);
    }

    let mut conjecture = None;
    if needs(&[K::Conjecture]) {
        let s = sec("conjecture");
        let mut spec = ConjectureSpec::new(dim, energy);
        if let Some(v) = s.usize("k_max", &mut ctx) {
            spec.k_max = v;
        }
        if let Some(v) = s.f64("theta_tol", &mut ctx) {
            spec.theta_tol = v;
        }
        if let Some(v) = s.usize("table_nodes", &mut ctx) {
            spec.table_nodes = v;
        }
        if let Some(v) = s.f64("target", &mut ctx) {
            spec.target = v;
        }
        if let Some(v) = s.usize("max_refinements", &mut ctx) {
            spec.max_refinements = v;
        }
        if dim < 2 {
            ctx.err("model.d: the conjecture needs d ≥ 2".into());
        } else if dim < 4 {
            ctx.notes.push(format!("conjecture evaluated at d = {dim} < 4"));
        }
        conjecture = Some(spec);
    }

    if needs(&[K::Compare]) && dim < 3 && matches!(profile, Some(PotentialProfile::Decaying { .. })) {
        ctx.notes.push(format!(
            "decaying profile at d = {dim} < 3, outside the theorem's regime"
        ));
    }

    let out_dir = out.str("dir", &mut ctx).map(PathBuf::from);
    let timing = out.bool("timing", &mut ctx).unwrap_or(false);
    let threads = run.usize("threads", &mut ctx);
    if threads == Some(0) {
        ctx.err("run.threads: must be ≥ 1".into());
    }

    if !ctx.errors.is_empty() {
        return Err(ConfigErrors(ctx.errors));
    }
    Ok(RunConfig {
        experiment: experiment.expect("checked above"),
        dim,
        half_widths,
        energy,
        window,
        profile,
        law,
        test_function,
        seeds,
        method,
        etas,
        scale,
        martingale,
        lemma2,
        positivity,
        dos,
        conjecture,
        out_dir,
        timing,
        threads,
        notes: ctx.notes,
        source: text.to_string(),
        hash: config_hash(&root),
    })
}
