//! Field observables built from emitter expectation values.
//!
//! All fields are normalized to the incident amplitude. Emitter `j` radiates
//! an amplitude `(gamma/Omega) S_j-` into each direction; the forward wave it
//! emits carries the same propagation phase as the input, the backward wave
//! picks up an extra round-trip phase `exp(2 i k z_j)`. Intensities are
//! normally ordered, so incoherent fluorescence enters through
//! `<S_{i+} S_{j-}>`. Multiplying a normalized intensity by `p_inc` gives
//! photons per lifetime.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::rotating_frame_generator;
use crate::model::{rabi_amplitude, Direction, SystemParams};
use crate::semiclassical::mean_field_steady;
use crate::steady_state::solve_steady;
use crate::C64;

/// Minimum number of grid points for [`intracavity`].
pub const MIN_GRID: usize = 64;
/// Default number of grid points for intracavity profiles.
pub const DEFAULT_GRID: usize = 256;
/// `T12 + T21` below this makes the rectifying factor undefined.
pub const OPAQUE_THRESHOLD: f64 = 1e-12;

/// Emitter coherences `<S_j->` and normally ordered correlators
/// `correlators[i][j] = <S_{i+} S_{j-}>`; everything a field observable needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSources {
    pub coherences: [C64; 2],
    pub correlators: [[C64; 2]; 2],
}

impl FieldSources {
    /// No emitter response at all (empty waveguide).
    pub fn silent() -> Self {
        Self {
            coherences: [C64::from(0.0); 2],
            correlators: [[C64::from(0.0); 2]; 2],
        }
    }
}

/// Which description of the emitters produced the expectation values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[default]
    FullQuantum,
    SemiClassical,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::FullQuantum => "fq",
            Model::SemiClassical => "sc",
        }
    }
}

/// Field sources for `params` under `model`, together with the solver
/// residual (Liouvillian residual or mean-field derivative norm).
pub fn solve_sources(params: &SystemParams, model: Model) -> Result<(FieldSources, f64)> {
    match model {
        Model::FullQuantum => {
            let ss = solve_steady(&rotating_frame_generator(params)?)?;
            Ok((ss.sources(), ss.residual))
        }
        Model::SemiClassical => {
            let mf = mean_field_steady(params)?;
            Ok((mf.sources(), mf.residual))
        }
    }
}

/// Normalized intensity of `a + sum_j c_j (gamma/Omega) S_j-`.
fn normalized_intensity(sources: &FieldSources, scale: f64, a: C64, c: [C64; 2]) -> f64 {
    let mut coherent = C64::from(0.0);
    let mut incoherent = C64::from(0.0);
    for i in 0..2 {
        coherent += c[i] * sources.coherences[i];
        for j in 0..2 {
            incoherent += c[i].conj() * c[j] * sources.correlators[i][j];
        }
    }
    a.norm_sqr() + 2.0 * scale * (a.conj() * coherent).re + scale * scale * incoherent.re
}

/// `gamma / Omega`, the emitter field amplitude relative to the input.
fn field_scale(params: &SystemParams) -> Result<f64> {
    let omega = rabi_amplitude(params);
    if omega == 0.0 {
        return Err(Error::ZeroDrive);
    }
    Ok(params.gamma / omega)
}

fn emitter_positions(params: &SystemParams) -> [f64; 2] {
    [0.0, params.distance]
}

fn wave(kz: f64) -> C64 {
    C64::from_polar(1.0, kz)
}

/// Weights of the input and of each emitter in the total field at `z`
/// (in wavelengths), with strict step functions: an emitter contributes to
/// the forward wave only for `z > z_j` and to the backward wave only for
/// `z < z_j`.
fn field_weights(params: &SystemParams, z: f64) -> (C64, [C64; 2]) {
    let k = 2.0 * PI;
    let mut c = [C64::from(0.0); 2];
    for (j, zj) in emitter_positions(params).into_iter().enumerate() {
        if z > zj {
            c[j] += wave(k * z);
        }
        if z < zj {
            c[j] += wave(-k * z + 2.0 * k * zj);
        }
    }
    (wave(k * z), c)
}

/// Total normalized intensity `<|E_F(z) + E_B(z)|^2> / (gamma p_inc)` at a
/// point of the waveguide, with the conventions of [`field_weights`].
pub fn field_intensity(sources: &FieldSources, params: &SystemParams, z: f64) -> Result<f64> {
    let p = params.oriented();
    let scale = field_scale(&p)?;
    let (a, c) = field_weights(&p, z);
    Ok(normalized_intensity(sources, scale, a, c))
}

/// Forward-only normalized intensity at `z`.
pub fn forward_intensity(sources: &FieldSources, params: &SystemParams, z: f64) -> Result<f64> {
    let p = params.oriented();
    let scale = field_scale(&p)?;
    let k = 2.0 * PI;
    let mut c = [C64::from(0.0); 2];
    for (j, zj) in emitter_positions(&p).into_iter().enumerate() {
        if z > zj {
            c[j] = wave(k * z);
        }
    }
    Ok(normalized_intensity(sources, scale, wave(k * z), c))
}

/// Coherent forward amplitude behind the pair relative to the input,
/// `1 + gamma (<S_1-> + <S_2->) / Omega`.
pub fn transmission_coefficient(sources: &FieldSources, params: &SystemParams) -> Result<C64> {
    let scale = field_scale(&params.oriented())?;
    Ok(1.0 + scale * (sources.coherences[0] + sources.coherences[1]))
}

/// Transmitted fraction of the incident photon flux.
pub fn transmittance(sources: &FieldSources, params: &SystemParams) -> Result<f64> {
    let scale = field_scale(&params.oriented())?;
    let one = C64::from(1.0);
    Ok(normalized_intensity(sources, scale, one, [one, one]))
}

/// Reflected fraction of the incident photon flux.
pub fn reflectance(sources: &FieldSources, params: &SystemParams) -> Result<f64> {
    let p = params.oriented();
    let scale = field_scale(&p)?;
    let chi = [C64::from(1.0), wave(2.0 * p.phase())];
    Ok(normalized_intensity(sources, scale, C64::from(0.0), chi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportResult {
    pub t_k: C64,
    pub transmittance: f64,
    pub reflectance: f64,
    /// Flux leaving the guide, `1 - T - R_B`.
    pub loss: f64,
}

pub fn transport(sources: &FieldSources, params: &SystemParams) -> Result<TransportResult> {
    let transmittance = transmittance(sources, params)?;
    let reflectance = reflectance(sources, params)?;
    Ok(TransportResult {
        t_k: transmission_coefficient(sources, params)?,
        transmittance,
        reflectance,
        loss: 1.0 - transmittance - reflectance,
    })
}

/// Standing-wave intensity between the emitters.
#[derive(Clone, Debug, PartialEq)]
pub struct IntracavityProfile {
    /// Positions in wavelengths, `0..=distance`.
    pub grid: Vec<f64>,
    /// Photons per lifetime.
    pub values: Vec<f64>,
    /// Trapezoid-rule mean over the cavity.
    pub average: f64,
}

/// Intensity profile of the field between the emitters.
///
/// The grid spans the closed interval `[0, distance]`; the end points are the
/// limits taken from inside the cavity (forward wave includes emitter 1,
/// backward wave includes emitter 2).
pub fn intracavity(sources: &FieldSources, params: &SystemParams, n_grid: usize) -> Result<IntracavityProfile> {
    if n_grid < MIN_GRID {
        return Err(Error::GridTooCoarse {
            got: n_grid,
            min: MIN_GRID,
        });
    }
    let p = params.oriented();
    if p.distance <= 0.0 {
        return Err(Error::EmptyCavity);
    }
    let length = p.distance;
    let grid: Vec<f64> = (0..n_grid).map(|i| length * i as f64 / (n_grid - 1) as f64).collect();
    if p.p_inc == 0.0 {
        return Ok(IntracavityProfile {
            values: vec![0.0; n_grid],
            grid,
            average: 0.0,
        });
    }
    let scale = field_scale(&p)?;
    let k = 2.0 * PI;
    let round_trip = wave(2.0 * p.phase());
    let values: Vec<f64> = grid
        .iter()
        .map(|&z| {
            let c = [wave(k * z), wave(-k * z) * round_trip];
            p.p_inc * normalized_intensity(sources, scale, wave(k * z), c)
        })
        .collect();
    let integral: f64 = grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(z, v)| 0.5 * (z[1] - z[0]) * (v[0] + v[1]))
        .sum();
    Ok(IntracavityProfile {
        grid,
        values,
        average: integral / length,
    })
}

/// Intensities impinging on the emitters, in photons per lifetime.
///
/// `p1` combines the input arriving at `z = 0` with emitter 2's backward
/// radiation; `p2` is the forward intensity just before emitter 2.
pub fn atom_site_intensities(sources: &FieldSources, params: &SystemParams) -> (f64, f64) {
    let p = params.oriented();
    if p.p_inc == 0.0 {
        return (0.0, 0.0);
    }
    let scale = p.gamma / rabi_amplitude(&p);
    let zero = C64::from(0.0);
    let one = C64::from(1.0);
    let p1 = normalized_intensity(sources, scale, one, [zero, wave(2.0 * p.phase())]);
    let p2 = normalized_intensity(sources, scale, one, [one, zero]);
    (p.p_inc * p1, p.p_inc * p2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectificationResult {
    pub t12: f64,
    pub t21: f64,
    /// Rectifying factor `|T12 - T21| / (T12 + T21)`.
    pub r: f64,
    /// Rectification efficiency `T12 * R`.
    pub l_eff: f64,
    /// Set when `T12 + T21` is too small for `R` to be defined; `R` is then 0.
    pub opaque: bool,
}

impl RectificationResult {
    pub fn from_transmittances(t12: f64, t21: f64) -> Self {
        let sum = t12 + t21;
        if sum < OPAQUE_THRESHOLD {
            return Self {
                t12,
                t21,
                r: 0.0,
                l_eff: 0.0,
                opaque: true,
            };
        }
        let r = (t12 - t21).abs() / sum;
        Self {
            t12,
            t21,
            r,
            l_eff: t12 * r,
            opaque: false,
        }
    }
}

/// Transmittance for both injection directions and the diode figures built
/// from them.
pub fn rectification(params: &SystemParams, model: Model) -> Result<RectificationResult> {
    if params.p_inc <= 0.0 {
        return Err(Error::ZeroDrive);
    }
    let forward = params.with_direction(Direction::OneToTwo);
    let backward = params.with_direction(Direction::TwoToOne);
    let (s12, _) = solve_sources(&forward, model)?;
    let (s21, _) = solve_sources(&backward, model)?;
    Ok(RectificationResult::from_transmittances(
        transmittance(&s12, &forward)?,
        transmittance(&s21, &backward)?,
    ))
}
