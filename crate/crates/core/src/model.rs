//! Physical parameters of the emitter pair and the collective couplings they
//! induce through the waveguide.
//!
//! Rates and detunings are measured in units of the emitter decay rate `gamma`;
//! the emitter separation is measured in photon wavelengths, so the only place
//! the carrier frequency and the speed of light enter is the propagation phase
//! `phi = 2*pi*distance`. Emitter 1 sits at `z = 0`, emitter 2 at `z = distance`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default background (non-guided) decay rate.
pub const DEFAULT_GAMMA_BG: f64 = 1e-4;

/// Which end of the waveguide the light is injected from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Light travels from emitter 1 towards emitter 2.
    #[default]
    OneToTwo,
    /// Light travels from emitter 2 towards emitter 1.
    TwoToOne,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::OneToTwo => Direction::TwoToOne,
            Direction::TwoToOne => Direction::OneToTwo,
        }
    }
}

/// All physical inputs of a single simulation point.
///
/// `delta1`/`delta2` always refer to the physical emitters 1 and 2. When
/// `direction` is [`Direction::TwoToOne`] the solver works in the mirrored
/// geometry, see [`SystemParams::oriented`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub delta1: f64,
    pub delta2: f64,
    /// Emitter separation in units of the photon wavelength.
    pub distance: f64,
    /// Incident flux in photons per atomic lifetime.
    pub p_inc: f64,
    pub gamma: f64,
    pub gamma_bg: f64,
    /// Fraction of the emission that goes into the guided mode.
    pub beta: f64,
    pub direction: Direction,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            delta1: 0.0,
            delta2: 0.0,
            distance: 1.0,
            p_inc: 0.1,
            gamma: 1.0,
            gamma_bg: DEFAULT_GAMMA_BG,
            beta: 1.0,
            direction: Direction::OneToTwo,
        }
    }
}

impl SystemParams {
    /// Parameters with the given detunings, separation and power; every other
    /// field takes its default.
    pub fn new(delta1: f64, delta2: f64, distance: f64, p_inc: f64) -> Self {
        Self {
            delta1,
            delta2,
            distance,
            p_inc,
            ..Self::default()
        }
    }

    pub fn with_gamma_bg(mut self, gamma_bg: f64) -> Self {
        self.gamma_bg = gamma_bg;
        self
    }

    pub fn with_p_inc(mut self, p_inc: f64) -> Self {
        self.p_inc = p_inc;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&str, f64, bool); 6] = [
            ("delta1", self.delta1, self.delta1.is_finite()),
            ("delta2", self.delta2, self.delta2.is_finite()),
            (
                "distance",
                self.distance,
                self.distance >= 0.0 && self.distance.is_finite(),
            ),
            ("p_inc", self.p_inc, self.p_inc >= 0.0 && self.p_inc.is_finite()),
            ("gamma", self.gamma, self.gamma > 0.0 && self.gamma.is_finite()),
            (
                "gamma_bg",
                self.gamma_bg,
                self.gamma_bg >= 0.0 && self.gamma_bg.is_finite(),
            ),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: self.beta,
            });
        }
        Ok(())
    }

    /// Propagation phase between the emitters, in radians.
    pub fn phase(&self) -> f64 {
        2.0 * PI * self.distance
    }

    /// The same physical point expressed in the frame where light always
    /// enters next to the first emitter: for [`Direction::TwoToOne`] the
    /// detunings are exchanged and the direction reset.
    pub fn oriented(&self) -> Self {
        match self.direction {
            Direction::OneToTwo => *self,
            Direction::TwoToOne => Self {
                delta1: self.delta2,
                delta2: self.delta1,
                direction: Direction::OneToTwo,
                ..*self
            },
        }
    }
}

/// Collective decay rates and the dipole-dipole exchange shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollectiveRates {
    pub gamma11: f64,
    pub gamma22: f64,
    pub gamma12: f64,
    pub d12: f64,
    pub phi: f64,
}

pub fn collective_rates(params: &SystemParams) -> CollectiveRates {
    let phi = params.phase();
    let self_rate = params.gamma + params.gamma_bg;
    CollectiveRates {
        gamma11: self_rate,
        gamma22: self_rate,
        gamma12: params.gamma * phi.cos(),
        // |z1 - z2| enters the sine, so this is d21 as well
        d12: 0.5 * params.gamma * phi.abs().sin(),
        phi,
    }
}

/// Classical Rabi amplitude of the coherent drive, `gamma*sqrt(2*p_inc*beta)`.
pub fn rabi_amplitude(params: &SystemParams) -> f64 {
    params.gamma * (2.0 * params.p_inc * params.beta).sqrt()
}

/// Mirror image of the configuration: light now reaches the emitters in the
/// opposite order, which amounts to exchanging the two detunings.
pub fn swap_direction(params: &SystemParams) -> SystemParams {
    SystemParams {
        delta1: params.delta2,
        delta2: params.delta1,
        ..*params
    }
}
