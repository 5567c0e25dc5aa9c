//! Parameter sweeps over up to three axes, written as CSV.
//!
//! A sweep is described by a [`SweepSpec`], usually parsed from a TOML
//! config:
//!
//! ```toml
//! model = "both"                 # fq | sc | both
//! outputs = ["T12", "T21", "R", "L_eff"]
//! # profile_points = 257         # optional: one row per intracavity grid point
//!
//! [fixed]                        # any SystemParams field, the rest default
//! delta1 = 0.12
//! delta2 = 0.0
//! distance = 0.982
//!
//! [[axis]]                       # outermost axis first
//! param = "p_inc"                # delta1 | delta2 | distance | p_inc
//! min = 1e-3
//! max = 1.0
//! points = 60
//! spacing = "log"                # linear | log
//!
//! [[axis]]
//! param = "delta1"
//! values = [-0.1, 0.0, 0.12]     # explicit list instead of min/max/points
//! ```
//!
//! Rows are emitted in lexicographic order of the axis indices (first axis
//! outermost), then by model (`fq` before `sc`), then by profile position.
//! Floating-point values are printed with 17 significant digits, so equal
//! specs give byte-identical output regardless of the worker count.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::generator::{rotating_frame_generator, SOperator};
use crate::model::{Direction, SystemParams};
use crate::observables::{
    atom_site_intensities, intracavity, reflectance, transmission_coefficient, transmittance, FieldSources, Model,
    RectificationResult, DEFAULT_GRID,
};
use crate::semiclassical::mean_field_steady;
use crate::steady_state::solve_steady;
use crate::C64;

pub const MAX_AXES: usize = 3;
pub const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    Delta1,
    Delta2,
    Distance,
    PInc,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::Delta1 => "delta1",
            AxisParam::Delta2 => "delta2",
            AxisParam::Distance => "distance",
            AxisParam::PInc => "p_inc",
        }
    }

    fn set(self, params: &mut SystemParams, value: f64) {
        match self {
            AxisParam::Delta1 => params.delta1 = value,
            AxisParam::Delta2 => params.delta2 = value,
            AxisParam::Distance => params.distance = value,
            AxisParam::PInc => params.p_inc = value,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisGrid {
    Range {
        min: f64,
        max: f64,
        points: usize,
        spacing: Spacing,
    },
    Values(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub grid: AxisGrid,
}

impl Axis {
    pub fn linear(param: AxisParam, min: f64, max: f64, points: usize) -> Self {
        Self {
            param,
            grid: AxisGrid::Range {
                min,
                max,
                points,
                spacing: Spacing::Linear,
            },
        }
    }

    pub fn log(param: AxisParam, min: f64, max: f64, points: usize) -> Self {
        Self {
            param,
            grid: AxisGrid::Range {
                min,
                max,
                points,
                spacing: Spacing::Log,
            },
        }
    }

    pub fn values(param: AxisParam, values: Vec<f64>) -> Self {
        Self {
            param,
            grid: AxisGrid::Values(values),
        }
    }

    pub fn len(&self) -> usize {
        match &self.grid {
            AxisGrid::Range { points, .. } => *points,
            AxisGrid::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, index: usize) -> f64 {
        match &self.grid {
            AxisGrid::Values(v) => v[index],
            AxisGrid::Range {
                min,
                max,
                points,
                spacing,
            } => {
                if index == 0 {
                    return *min;
                }
                if index + 1 == *points {
                    return *max;
                }
                let frac = index as f64 / (*points - 1) as f64;
                match spacing {
                    Spacing::Linear => min + (max - min) * frac,
                    Spacing::Log => (min.ln() + (max.ln() - min.ln()) * frac).exp(),
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let name = self.param.name();
        match &self.grid {
            AxisGrid::Range {
                min,
                max,
                points,
                spacing,
            } => {
                if *points < 1 {
                    return Err(Error::Config(format!("axis {name}: points must be at least 1")));
                }
                if !(min.is_finite() && max.is_finite()) {
                    return Err(Error::Config(format!("axis {name}: bounds must be finite")));
                }
                if *spacing == Spacing::Log && (*min <= 0.0 || *max <= 0.0) {
                    return Err(Error::Config(format!("axis {name}: log spacing needs positive bounds")));
                }
            }
            AxisGrid::Values(v) => {
                if v.is_empty() {
                    return Err(Error::Config(format!("axis {name}: empty value list")));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config(format!("axis {name}: values must be finite")));
                }
            }
        }
        Ok(())
    }
}

/// Quantities that can be requested per grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
pub enum Output {
    T12,
    T21,
    R,
    #[serde(rename = "L_eff")]
    LEff,
    #[serde(rename = "t_k")]
    TK,
    #[serde(rename = "R_B")]
    RB,
    #[serde(rename = "p_bar_intr")]
    PBarIntr,
    #[serde(rename = "p1")]
    P1,
    #[serde(rename = "p2")]
    P2,
    #[serde(rename = "s_expectations")]
    SExpectations,
}

impl Output {
    pub const ALL: [Output; 10] = [
        Output::T12,
        Output::T21,
        Output::R,
        Output::LEff,
        Output::TK,
        Output::RB,
        Output::PBarIntr,
        Output::P1,
        Output::P2,
        Output::SExpectations,
    ];

    /// CSV column names, one per value.
    pub fn columns(self) -> Vec<String> {
        match self {
            Output::T12 => vec!["T12".into()],
            Output::T21 => vec!["T21".into()],
            Output::R => vec!["R".into()],
            Output::LEff => vec!["L_eff".into()],
            Output::TK => vec!["t_k_re".into(), "t_k_im".into()],
            Output::RB => vec!["R_B".into()],
            Output::PBarIntr => vec!["p_bar_intr".into()],
            Output::P1 => vec!["p1".into()],
            Output::P2 => vec!["p2".into()],
            Output::SExpectations => SOperator::ALL
                .iter()
                .flat_map(|op| [format!("{}_re", op.label()), format!("{}_im", op.label())])
                .collect(),
        }
    }

    fn needs_reverse(self) -> bool {
        matches!(self, Output::T21 | Output::R | Output::LEff)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
pub enum ModelChoice {
    #[default]
    #[serde(rename = "fq")]
    FullQuantum,
    #[serde(rename = "sc")]
    SemiClassical,
    #[serde(rename = "both")]
    Both,
}

impl ModelChoice {
    pub fn models(self) -> &'static [Model] {
        match self {
            ModelChoice::FullQuantum => &[Model::FullQuantum],
            ModelChoice::SemiClassical => &[Model::SemiClassical],
            ModelChoice::Both => &[Model::FullQuantum, Model::SemiClassical],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fq" => Ok(ModelChoice::FullQuantum),
            "sc" => Ok(ModelChoice::SemiClassical),
            "both" => Ok(ModelChoice::Both),
            other => Err(Error::Config(format!(
                "unknown model `{other}` (expected fq, sc or both)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    pub fixed: SystemParams,
    pub outputs: Vec<Output>,
    pub model: ModelChoice,
    /// When set, every grid point expands into this many rows carrying the
    /// intracavity profile `z, p_intr`.
    pub profile_points: Option<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            axes: Vec::new(),
            fixed: SystemParams::default(),
            outputs: vec![Output::T12],
            model: ModelChoice::FullQuantum,
            profile_points: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    param: AxisParam,
    min: Option<f64>,
    max: Option<f64>,
    points: Option<usize>,
    #[serde(default)]
    spacing: Spacing,
    values: Option<Vec<f64>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFixed {
    delta1: Option<f64>,
    delta2: Option<f64>,
    distance: Option<f64>,
    p_inc: Option<f64>,
    gamma: Option<f64>,
    gamma_bg: Option<f64>,
    beta: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    model: ModelChoice,
    outputs: Vec<Output>,
    profile_points: Option<usize>,
    #[serde(default)]
    fixed: RawFixed,
    #[serde(default)]
    axis: Vec<RawAxis>,
}

impl SweepSpec {
    /// Parse a TOML sweep description (schema in the module docs).
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let defaults = SystemParams::default();
        let f = raw.fixed;
        let fixed = SystemParams {
            delta1: f.delta1.unwrap_or(defaults.delta1),
            delta2: f.delta2.unwrap_or(defaults.delta2),
            distance: f.distance.unwrap_or(defaults.distance),
            p_inc: f.p_inc.unwrap_or(defaults.p_inc),
            gamma: f.gamma.unwrap_or(defaults.gamma),
            gamma_bg: f.gamma_bg.unwrap_or(defaults.gamma_bg),
            beta: f.beta.unwrap_or(defaults.beta),
            direction: Direction::OneToTwo,
        };
        let mut axes = Vec::with_capacity(raw.axis.len());
        for a in raw.axis {
            let grid = match (a.values, a.min, a.max, a.points) {
                (Some(values), None, None, None) => AxisGrid::Values(values),
                (None, Some(min), Some(max), Some(points)) => AxisGrid::Range {
                    min,
                    max,
                    points,
                    spacing: a.spacing,
                },
                _ => {
                    return Err(Error::Config(format!(
                        "axis {}: give either `values` or all of `min`, `max`, `points`",
                        a.param.name()
                    )))
                }
            };
            axes.push(Axis { param: a.param, grid });
        }
        let spec = SweepSpec {
            axes,
            fixed,
            outputs: raw.outputs,
            model: raw.model,
            profile_points: raw.profile_points,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > MAX_AXES {
            return Err(Error::Config(format!(
                "at most {MAX_AXES} axes, got {}",
                self.axes.len()
            )));
        }
        for (i, a) in self.axes.iter().enumerate() {
            a.validate()?;
            if self.axes[..i].iter().any(|b| b.param == a.param) {
                return Err(Error::Config(format!("axis {} given twice", a.param.name())));
            }
        }
        self.fixed.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.outputs.is_empty() && self.profile_points.is_none() {
            return Err(Error::Config("no outputs requested".into()));
        }
        if let Some(n) = self.profile_points {
            if n < crate::observables::MIN_GRID {
                return Err(Error::Config(format!(
                    "profile_points must be at least {}",
                    crate::observables::MIN_GRID
                )));
            }
        }
        let total = self.grid_size();
        if total > MAX_GRID_POINTS {
            return Err(Error::Config(format!(
                "{total} grid points exceed the limit of {MAX_GRID_POINTS}"
            )));
        }
        Ok(())
    }

    /// Number of parameter points (before model and profile expansion).
    pub fn grid_size(&self) -> usize {
        self.axes.iter().fold(1usize, |acc, a| acc.saturating_mul(a.len()))
    }

    fn point(&self, flat: usize) -> (Vec<usize>, SystemParams) {
        let mut indices = vec![0; self.axes.len()];
        let mut rest = flat;
        for (k, axis) in self.axes.iter().enumerate().rev() {
            indices[k] = rest % axis.len();
            rest /= axis.len();
        }
        let mut params = self.fixed;
        for (axis, &i) in self.axes.iter().zip(&indices) {
            axis.param.set(&mut params, axis.value(i));
        }
        (indices, params)
    }

    fn sorted_outputs(&self) -> Vec<Output> {
        let mut outs = self.outputs.clone();
        outs.sort();
        outs.dedup();
        outs
    }
}

/// Values computed at one parameter point for one model.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointValues {
    pub values: BTreeMap<Output, Vec<f64>>,
    /// Largest solver residual among the solves of this point.
    pub residual: f64,
    /// `(z, p_intr)` pairs when a profile was requested.
    pub profile: Vec<(f64, f64)>,
}

/// One grid point evaluated under one model.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub indices: Vec<usize>,
    pub params: SystemParams,
    pub model: Model,
    pub outcome: std::result::Result<PointValues, Error>,
}

fn solve_point(params: &SystemParams, model: Model) -> Result<(FieldSources, f64, [C64; 9])> {
    match model {
        Model::FullQuantum => {
            let ss = solve_steady(&rotating_frame_generator(params)?)?;
            let ex = SOperator::ALL.map(|op| ss.expectation(op));
            Ok((ss.sources(), ss.residual, ex))
        }
        Model::SemiClassical => {
            let mf = mean_field_steady(params)?;
            let ex = SOperator::ALL.map(|op| mf.state.expectation(op));
            Ok((mf.sources(), mf.residual, ex))
        }
    }
}

/// Evaluate the requested outputs at a single point.
pub fn evaluate_point(
    params: &SystemParams,
    model: Model,
    outputs: &[Output],
    profile_points: Option<usize>,
) -> Result<PointValues> {
    params.validate()?;
    let forward = params.with_direction(Direction::OneToTwo);
    let (sources, mut residual, expectations) = solve_point(&forward, model)?;
    let mut out = PointValues::default();

    let needs_t12 = outputs
        .iter()
        .any(|o| matches!(o, Output::T12 | Output::R | Output::LEff));
    let t12 = if needs_t12 {
        Some(transmittance(&sources, &forward)?)
    } else {
        None
    };
    let rect = if outputs.iter().any(|o| o.needs_reverse()) {
        let backward = params.with_direction(Direction::TwoToOne);
        let (back_sources, back_residual, _) = solve_point(&backward, model)?;
        residual = residual.max(back_residual);
        let t21 = transmittance(&back_sources, &backward)?;
        Some(RectificationResult::from_transmittances(t12.unwrap_or(f64::NAN), t21))
    } else {
        None
    };

    for &o in outputs {
        let v = match o {
            Output::T12 => vec![t12.expect("computed above")],
            Output::T21 => vec![rect.expect("computed above").t21],
            Output::R => vec![rect.expect("computed above").r],
            Output::LEff => vec![rect.expect("computed above").l_eff],
            Output::TK => {
                let t = transmission_coefficient(&sources, &forward)?;
                vec![t.re, t.im]
            }
            Output::RB => vec![reflectance(&sources, &forward)?],
            Output::PBarIntr => vec![intracavity(&sources, &forward, DEFAULT_GRID)?.average],
            Output::P1 => vec![atom_site_intensities(&sources, &forward).0],
            Output::P2 => vec![atom_site_intensities(&sources, &forward).1],
            Output::SExpectations => expectations.iter().flat_map(|z| [z.re, z.im]).collect(),
        };
        out.values.insert(o, v);
    }
    if let Some(n) = profile_points {
        let profile = intracavity(&sources, &forward, n)?;
        out.profile = profile.grid.into_iter().zip(profile.values).collect();
    }
    out.residual = residual;
    Ok(out)
}

/// Evaluate every grid point of `spec` (in parallel on the current rayon
/// pool) and return the rows in deterministic order. Per-point failures are
/// recorded in the row instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let outputs = spec.sorted_outputs();
    let models = spec.model.models();
    let jobs: Vec<(usize, Model)> = (0..spec.grid_size())
        .flat_map(|i| models.iter().map(move |m| (i, *m)))
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(flat, model)| {
            let (indices, params) = spec.point(flat);
            let outcome = evaluate_point(&params, model, &outputs, spec.profile_points);
            ResultRow {
                indices,
                params,
                model,
                outcome,
            }
        })
        .collect())
}

/// Like [`run_sweep`] but on a dedicated pool with `workers` threads.
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<Vec<ResultRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(spec))
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header(spec: &SweepSpec) -> Vec<String> {
    let mut cols: Vec<String> = [
        "delta1", "delta2", "distance", "p_inc", "gamma", "gamma_bg", "beta", "model",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if spec.profile_points.is_some() {
        cols.push("z".into());
        cols.push("p_intr".into());
    }
    for o in spec.sorted_outputs() {
        cols.extend(o.columns());
    }
    cols.push("residual".into());
    cols.push("status".into());
    cols
}

/// Write the rows of a sweep as CSV (header first).
pub fn write_csv<W: Write>(spec: &SweepSpec, rows: &[ResultRow], mut sink: W) -> std::io::Result<()> {
    let outputs = spec.sorted_outputs();
    writeln!(sink, "{}", csv_header(spec).join(","))?;
    for row in rows {
        let p = &row.params;
        let mut prefix: Vec<String> = [p.delta1, p.delta2, p.distance, p.p_inc, p.gamma, p.gamma_bg, p.beta]
            .iter()
            .map(|x| fmt_f64(*x))
            .collect();
        prefix.push(row.model.tag().into());

        match &row.outcome {
            Ok(values) => {
                let mut tail = Vec::new();
                for o in &outputs {
                    tail.extend(values.values[o].iter().map(|x| fmt_f64(*x)));
                }
                tail.push(fmt_f64(values.residual));
                tail.push("ok".into());
                if spec.profile_points.is_some() {
                    for (z, v) in &values.profile {
                        writeln!(
                            sink,
                            "{},{},{},{}",
                            prefix.join(","),
                            fmt_f64(*z),
                            fmt_f64(*v),
                            tail.join(",")
                        )?;
                    }
                } else {
                    writeln!(sink, "{},{}", prefix.join(","), tail.join(","))?;
                }
            }
            Err(e) => {
                let blanks = outputs.iter().map(|o| o.columns().len()).sum::<usize>()
                    + if spec.profile_points.is_some() { 2 } else { 0 }
                    + 1;
                let status = format!("error: {e}").replace([',', '\n'], ";");
                writeln!(sink, "{},{}{}", prefix.join(","), ",".repeat(blanks), status)?;
            }
        }
    }
    Ok(())
}

/// Named sweeps reproducing the figure data.
pub fn presets() -> BTreeMap<&'static str, SweepSpec> {
    let resonant = |distance: f64, p_inc: f64| SystemParams::new(0.0, 0.0, distance, p_inc);
    let mut map = BTreeMap::new();
    map.insert(
        "fig2a",
        SweepSpec {
            axes: vec![Axis::log(AxisParam::PInc, 1e-3, 10.0, 61)],
            fixed: resonant(1.0, 0.1),
            outputs: vec![Output::PBarIntr],
            model: ModelChoice::Both,
            profile_points: None,
        },
    );
    map.insert(
        "fig2b",
        SweepSpec {
            axes: Vec::new(),
            fixed: resonant(1.0, 0.1),
            outputs: Vec::new(),
            model: ModelChoice::Both,
            profile_points: Some(257),
        },
    );
    map.insert(
        "fig2cd",
        SweepSpec {
            axes: vec![Axis::linear(AxisParam::Distance, 0.0, 1.0, 201)],
            fixed: resonant(1.0, 0.1),
            outputs: vec![Output::P1, Output::P2],
            model: ModelChoice::Both,
            profile_points: None,
        },
    );
    map.insert(
        "fig3",
        SweepSpec {
            axes: vec![
                Axis::values(AxisParam::PInc, vec![0.003, 0.01, 0.03, 0.1, 0.3]),
                Axis::linear(AxisParam::Delta1, -1.0, 1.0, 81),
                Axis::linear(AxisParam::Distance, 0.9, 1.0, 81),
            ],
            fixed: SystemParams::new(0.0, 0.0, 1.0, 0.1),
            outputs: vec![Output::T12, Output::T21, Output::R, Output::LEff],
            model: ModelChoice::FullQuantum,
            profile_points: None,
        },
    );
    map.insert(
        "fig4",
        SweepSpec {
            axes: vec![Axis::log(AxisParam::PInc, 1e-3, 1.0, 60)],
            fixed: SystemParams::new(0.12, 0.0, 0.982, 0.1),
            outputs: vec![Output::T12, Output::T21, Output::R, Output::LEff],
            model: ModelChoice::Both,
            profile_points: None,
        },
    );
    map
}
