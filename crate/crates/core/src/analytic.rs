//! Closed-form weak-drive (first order in the Rabi amplitude) solutions.
//!
//! These hold in the ideal limit without background loss and serve as
//! oracles for the full solver at vanishing power.

use crate::error::{Error, Result};
use crate::model::{rabi_amplitude, SystemParams};
use crate::C64;

/// Denominators smaller than this are treated as poles.
pub const POLE_TOL: f64 = 1e-12;
pub const TRANSMISSION_POLE_TOL: f64 = 1e-14;

/// Coefficients of the linear response equations of the two coherences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstOrderCoefficients {
    /// `gamma/2 - i delta_j`
    pub alpha1: C64,
    pub alpha2: C64,
    /// Exchange couplings `exp(-i k (z_j - z_other)) (gamma12/2 + i D12)`.
    pub b1: C64,
    pub b2: C64,
}

pub fn first_order_coefficients(params: &SystemParams) -> FirstOrderCoefficients {
    let p = params.oriented();
    let phi = p.phase();
    let exchange = C64::new(0.5 * p.gamma * phi.cos(), 0.5 * p.gamma * phi.sin());
    FirstOrderCoefficients {
        alpha1: C64::new(0.5 * p.gamma, -p.delta1),
        alpha2: C64::new(0.5 * p.gamma, -p.delta2),
        b1: C64::from_polar(1.0, phi) * exchange,
        b2: C64::from_polar(1.0, -phi) * exchange,
    }
}

/// `(<S_1->, <S_2->)` to first order in the drive.
pub fn first_order_coherences(params: &SystemParams) -> Result<(C64, C64)> {
    let c = first_order_coefficients(params);
    let det = c.alpha1 * c.alpha2 - c.b1 * c.b2;
    if det.norm() < POLE_TOL {
        return Err(Error::SingularDenominator(det.norm()));
    }
    let half_omega = 0.5 * rabi_amplitude(&params.oriented());
    let s1 = -half_omega * (c.alpha2 - c.b1) / det;
    let s2 = -half_omega * (c.alpha1 - c.b2) / det;
    Ok((s1, s2))
}

/// Single-photon (vanishing power) transmission amplitude of the pair,
///
/// `d1 d2 / [(d1 + i g/2)(d2 + i g/2) + (g^2/4) exp(2 i phi)]`.
///
/// This is `1 + gamma (s1 + s2) / Omega` evaluated with
/// [`first_order_coherences`] at zero background loss.
pub fn first_order_transmission(params: &SystemParams) -> Result<C64> {
    let p = params.oriented();
    let half_gamma = 0.5 * p.gamma;
    let den = C64::new(p.delta1, half_gamma) * C64::new(p.delta2, half_gamma)
        + half_gamma * half_gamma * C64::from_polar(1.0, 2.0 * p.phase());
    let num = p.delta1 * p.delta2;
    // t = 0 whenever one emitter is resonant, including the 0/0 point
    if num == 0.0 {
        return Ok(C64::from(0.0));
    }
    if den.norm() < TRANSMISSION_POLE_TOL {
        return Err(Error::SingularDenominator(den.norm()));
    }
    Ok(C64::from(num) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn resonant_quarter_wave_coherences() {
        let params = SystemParams::new(0.0, 0.0, 0.25, 0.125);
        let c = first_order_coefficients(&params);
        assert_abs_diff_eq!(c.alpha1.re, 0.5);
        assert_abs_diff_eq!(c.b1.re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.b1.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.b2.re, 0.5, epsilon = 1e-15);
        let omega = rabi_amplitude(&params);
        let (s1, s2) = first_order_coherences(&params).unwrap();
        assert!((s1 + omega).norm() < 1e-14);
        assert!(s2.norm() < 1e-14);
    }

    #[test]
    fn no_drive_no_coherence() {
        let (s1, s2) = first_order_coherences(&SystemParams::new(0.3, 0.1, 0.4, 0.0)).unwrap();
        assert_eq!((s1, s2), (C64::from(0.0), C64::from(0.0)));
    }

    #[test]
    fn symmetric_point_has_equal_coherences() {
        // b1 = b2 requires exp(2 i phi) = 1
        let params = SystemParams::new(0.7, 0.7, 0.5, 0.01);
        let (s1, s2) = first_order_coherences(&params).unwrap();
        assert!((s1 - s2).norm() < 1e-14);
    }

    #[test]
    fn transmission_values() {
        for dist in [0.0, 0.13, 0.5, 0.9, 1.0] {
            let t = first_order_transmission(&SystemParams::new(0.0, 0.0, dist, 0.1)).unwrap();
            assert_eq!(t.norm(), 0.0);
        }
        let t = first_order_transmission(&SystemParams::new(0.0, 0.7, 0.5, 0.1)).unwrap();
        assert_eq!(t.norm(), 0.0);
        // exp(2 i phi) = -1, denominator (0.5 + 0.5i)^2 - 0.25 = -0.25 + 0.5i
        let t = first_order_transmission(&SystemParams::new(0.5, 0.5, 0.25, 0.1)).unwrap();
        assert_abs_diff_eq!(t.re, -0.2, epsilon = 1e-14);
        assert_abs_diff_eq!(t.im, -0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(t.norm_sqr(), 0.2, epsilon = 1e-14);

        let t = first_order_transmission(&SystemParams::new(1e3, 1e3, 0.37, 0.1)).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn co_located_pair_acts_as_one_superradiant_emitter() {
        // at zero separation the pair is a single emitter with doubled width
        let delta = 0.8;
        let t = first_order_transmission(&SystemParams::new(delta, delta, 0.0, 0.1)).unwrap();
        let single = C64::from(delta) / C64::new(delta, 1.0);
        assert!((t - single).norm() < 1e-14);
    }

    #[test]
    fn coherences_reproduce_transmission() {
        let params = SystemParams::new(-1.3, 0.6, 0.71, 0.02).with_gamma_bg(0.0);
        let (s1, s2) = first_order_coherences(&params).unwrap();
        let via_coherences = 1.0 + params.gamma * (s1 + s2) / rabi_amplitude(&params);
        let direct = first_order_transmission(&params).unwrap();
        assert!((via_coherences - direct).norm() < 1e-12);
    }
}
