//! Mean-field (semi-classical) treatment of the emitter pair.
//!
//! The equations of motion for `<S_1->`, `<S_1z>`, `<S_2->`, `<S_2z>` are
//! taken from the full rotating-frame generator evaluated on a product state
//! `rho_1 ⊗ rho_2`, which is exactly the closure `<A B> -> <A><B>` for
//! operators on different emitters. Observables use the factorized
//! correlators `<S_{i+} S_{j-}> -> conj(s_i) s_j` for `i != j` and the exact
//! single-emitter identity `<S_{j+} S_{j-}> = (1 + s_jz) / 2`.

use nalgebra::{Matrix2, Matrix6, SVector};

use crate::error::{Error, Result};
use crate::generator::{atomic_operators, rotating_frame_generator, Liouvillian, SOperator, TwoQubitOperator};
use crate::model::{rabi_amplitude, SystemParams};
use crate::observables::FieldSources;
use crate::C64;

/// Derivative norm at which the integration is considered stationary.
pub const STEADY_TOL: f64 = 1e-10;
/// Largest derivative norm accepted at the end of the time budget.
pub const ACCEPT_TOL: f64 = 1e-8;
/// Integration time budget in units of `1/gamma`.
pub const MAX_TIME: f64 = 1e4;
/// Derivative norm below which Newton polishing is attempted.
const NEWTON_START: f64 = 1e-4;

type State6 = SVector<f64, 6>;

/// Factorized single-emitter expectation values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanFieldState {
    pub s1_minus: C64,
    pub s2_minus: C64,
    pub s1_z: f64,
    pub s2_z: f64,
}

/// Time derivative of a [`MeanFieldState`]; same layout.
pub type MeanFieldDerivative = MeanFieldState;

impl MeanFieldState {
    pub fn ground() -> Self {
        Self {
            s1_minus: C64::from(0.0),
            s2_minus: C64::from(0.0),
            s1_z: -1.0,
            s2_z: -1.0,
        }
    }

    fn to_vector(self) -> State6 {
        State6::from([
            self.s1_minus.re,
            self.s1_minus.im,
            self.s1_z,
            self.s2_minus.re,
            self.s2_minus.im,
            self.s2_z,
        ])
    }

    fn from_vector(v: &State6) -> Self {
        Self {
            s1_minus: C64::new(v[0], v[1]),
            s1_z: v[2],
            s2_minus: C64::new(v[3], v[4]),
            s2_z: v[5],
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_vector().norm()
    }

    /// How far the state sits outside the Bloch ball (negative when inside).
    pub fn bloch_excess(&self) -> f64 {
        let excess = |s: C64, z: f64| s.norm_sqr() - 0.25 * (1.0 - z * z);
        excess(self.s1_minus, self.s1_z)
            .max(excess(self.s2_minus, self.s2_z))
            .max(self.s1_z.abs() - 1.0)
            .max(self.s2_z.abs() - 1.0)
    }

    /// Single-emitter density matrix in the `|g>, |e>` basis.
    fn emitter_density(s: C64, z: f64) -> Matrix2<C64> {
        Matrix2::new(C64::from(0.5 * (1.0 - z)), s.conj(), s, C64::from(0.5 * (1.0 + z)))
    }

    pub fn product_density(&self) -> TwoQubitOperator {
        TwoQubitOperator::product(
            &Self::emitter_density(self.s1_minus, self.s1_z),
            &Self::emitter_density(self.s2_minus, self.s2_z),
        )
    }

    /// Factorized expectation of one of the nine S-operators.
    pub fn expectation(&self, op: SOperator) -> C64 {
        let (s1, s2) = (self.s1_minus, self.s2_minus);
        let (z1, z2) = (C64::from(self.s1_z), C64::from(self.s2_z));
        match op {
            SOperator::S1Minus => s1,
            SOperator::S1Z => z1,
            SOperator::S2Minus => s2,
            SOperator::S2Z => z2,
            SOperator::S1MinusS2Z => s1 * z2,
            SOperator::S1MinusS2Minus => s1 * s2,
            SOperator::S1ZS2Minus => z1 * s2,
            SOperator::S1ZS2Z => z1 * z2,
            SOperator::S1MinusS2Plus => s1 * s2.conj(),
        }
    }

    pub fn sources(&self) -> FieldSources {
        let s = [self.s1_minus, self.s2_minus];
        let z = [self.s1_z, self.s2_z];
        let mut correlators = [[C64::from(0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                correlators[i][j] = if i == j {
                    C64::from(0.5 * (1.0 + z[i]))
                } else {
                    s[i].conj() * s[j]
                };
            }
        }
        FieldSources {
            coherences: s,
            correlators,
        }
    }
}

/// Mean-field equations for one parameter point.
#[derive(Clone, Debug)]
pub struct MeanFieldSystem {
    generator: Liouvillian,
    observed: [TwoQubitOperator; 4],
    step: f64,
}

impl MeanFieldSystem {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let generator = rotating_frame_generator(params)?;
        let ops = atomic_operators();
        let p = params.oriented();
        let fastest = [1.0, rabi_amplitude(&p), p.delta1.abs(), p.delta2.abs(), p.gamma]
            .into_iter()
            .fold(0.0, f64::max);
        Ok(Self {
            generator,
            observed: [ops.s1_minus, ops.s1_z, ops.s2_minus, ops.s2_z],
            step: (0.5 / fastest).min(0.05),
        })
    }

    pub fn derivative(&self, state: &MeanFieldState) -> MeanFieldDerivative {
        let rho = state.product_density();
        let drho = self.generator.apply(rho.matrix());
        let ex = |op: &TwoQubitOperator| (drho * op.matrix()).trace();
        MeanFieldState {
            s1_minus: ex(&self.observed[0]),
            s1_z: ex(&self.observed[1]).re,
            s2_minus: ex(&self.observed[2]),
            s2_z: ex(&self.observed[3]).re,
        }
    }

    fn rhs(&self, v: &State6) -> State6 {
        self.derivative(&MeanFieldState::from_vector(v)).to_vector()
    }

    fn rk4_step(&self, v: &State6, dt: f64) -> State6 {
        let k1 = self.rhs(v);
        let k2 = self.rhs(&(v + k1 * (0.5 * dt)));
        let k3 = self.rhs(&(v + k2 * (0.5 * dt)));
        let k4 = self.rhs(&(v + k3 * dt));
        v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
    }

    /// Fixed-step RK4 trajectory from `start`, sampled after every step.
    pub fn trajectory(&self, start: &MeanFieldState, t_final: f64) -> Vec<MeanFieldState> {
        let n = (t_final / self.step).ceil().max(1.0) as usize;
        let dt = t_final / n as f64;
        let mut v = start.to_vector();
        let mut out = Vec::with_capacity(n + 1);
        out.push(*start);
        for _ in 0..n {
            v = self.rk4_step(&v, dt);
            out.push(MeanFieldState::from_vector(&v));
        }
        out
    }

    fn jacobian(&self, v: &State6) -> Matrix6<f64> {
        let mut jac = Matrix6::zeros();
        for k in 0..6 {
            let h = 1e-7 * (1.0 + v[k].abs());
            let mut up = *v;
            let mut down = *v;
            up[k] += h;
            down[k] -= h;
            jac.set_column(k, &((self.rhs(&up) - self.rhs(&down)) / (2.0 * h)));
        }
        jac
    }

    /// Damped Newton iteration on `f(v) = 0`; `None` if it leaves the
    /// neighbourhood of `v0` or fails to converge.
    fn newton(&self, v0: &State6) -> Option<State6> {
        let mut v = *v0;
        let mut f = self.rhs(&v);
        for _ in 0..30 {
            if f.norm() < STEADY_TOL {
                return Some(v);
            }
            let delta = self.jacobian(&v).lu().solve(&(-f))?;
            let mut damping = 1.0;
            loop {
                let trial = v + delta * damping;
                let ft = self.rhs(&trial);
                if ft.norm() < f.norm() {
                    v = trial;
                    f = ft;
                    break;
                }
                damping *= 0.5;
                if damping < 1e-4 {
                    return None;
                }
            }
            if (v - v0).norm() > 1e-2 {
                return None;
            }
        }
        (f.norm() < STEADY_TOL).then_some(v)
    }
}

/// Result of [`mean_field_steady`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanFieldSteady {
    pub state: MeanFieldState,
    /// Norm of the time derivative at the reported state.
    pub residual: f64,
    /// Integration time spent before convergence.
    pub time: f64,
}

impl MeanFieldSteady {
    pub fn sources(&self) -> FieldSources {
        self.state.sources()
    }
}

/// Time derivative of the mean-field variables.
pub fn mean_field_rhs(state: &MeanFieldState, params: &SystemParams) -> Result<MeanFieldDerivative> {
    Ok(MeanFieldSystem::new(params)?.derivative(state))
}

/// Stationary mean-field state reached from both emitters in the ground
/// state, polished by Newton iteration once the flow has nearly settled.
pub fn mean_field_steady(params: &SystemParams) -> Result<MeanFieldSteady> {
    let system = MeanFieldSystem::new(params)?;
    let dt = system.step;
    let check_every = ((1.0 / dt).ceil() as usize).max(1);
    let mut v = MeanFieldState::ground().to_vector();
    let mut time = 0.0;
    let mut residual = system.rhs(&v).norm();

    while time < MAX_TIME {
        if residual < STEADY_TOL {
            break;
        }
        if residual < NEWTON_START {
            if let Some(polished) = system.newton(&v) {
                let state = MeanFieldState::from_vector(&polished);
                if state.bloch_excess() <= 1e-9 {
                    v = polished;
                    residual = system.rhs(&v).norm();
                    break;
                }
            }
        }
        for _ in 0..check_every {
            v = system.rk4_step(&v, dt);
        }
        time += check_every as f64 * dt;
        residual = system.rhs(&v).norm();
    }

    if residual.is_nan() || residual > ACCEPT_TOL {
        return Err(Error::NoConvergence { residual, time });
    }
    Ok(MeanFieldSteady {
        state: MeanFieldState::from_vector(&v),
        residual,
        time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::first_order_coherences;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ground_state_is_fixed_without_drive() {
        let params = SystemParams::new(0.3, -0.4, 0.7, 0.0);
        let d = mean_field_rhs(&MeanFieldState::ground(), &params).unwrap();
        assert!(d.norm() < 1e-15);
        let ss = mean_field_steady(&params).unwrap();
        assert_eq!(ss.state, MeanFieldState::ground());
    }

    #[test]
    fn isolated_emitter_follows_bloch_equations() {
        // emitter 2 far off resonance barely responds, so emitter 1 sees the bare drive
        let params = SystemParams::new(0.4, 1e3, 0.3, 0.2).with_gamma_bg(0.0);
        let omega = rabi_amplitude(&params);
        let state = MeanFieldState {
            s1_minus: C64::new(0.1, -0.2),
            s1_z: -0.3,
            s2_minus: C64::from(0.0),
            s2_z: -1.0,
        };
        let d = mean_field_rhs(&state, &params).unwrap();
        let expected = -C64::new(0.5, -0.4) * state.s1_minus + 0.5 * omega * state.s1_z;
        let expected_z = -(1.0 + state.s1_z) - 2.0 * omega * state.s1_minus.re;
        // emitter 2 is in its ground state, so it only feeds emitter 1 via its zero coherence
        assert_abs_diff_eq!(d.s1_minus.re, expected.re, epsilon = 1e-12);
        assert_abs_diff_eq!(d.s1_minus.im, expected.im, epsilon = 1e-12);
        assert_abs_diff_eq!(d.s1_z, expected_z, epsilon = 1e-12);
    }

    #[test]
    fn weak_drive_matches_linear_response() {
        let params = SystemParams::new(0.7, -0.4, 0.33, 1e-6).with_gamma_bg(0.0);
        let ss = mean_field_steady(&params).unwrap();
        let (s1, s2) = first_order_coherences(&params).unwrap();
        assert!((ss.state.s1_minus - s1).norm() < 1e-3 * s1.norm());
        assert!((ss.state.s2_minus - s2).norm() < 1e-3 * s2.norm());
    }

    #[test]
    fn trajectory_stays_in_bloch_ball() {
        let params = SystemParams::new(0.12, 0.0, 0.982, 0.5);
        let system = MeanFieldSystem::new(&params).unwrap();
        for state in system.trajectory(&MeanFieldState::ground(), 40.0) {
            assert!(state.bloch_excess() <= 1e-9, "{state:?}");
        }
    }

    #[test]
    fn factorized_correlators() {
        let state = MeanFieldState {
            s1_minus: C64::new(0.1, 0.2),
            s2_minus: C64::new(-0.3, 0.05),
            s1_z: -0.5,
            s2_z: 0.2,
        };
        let src = state.sources();
        assert_eq!(src.correlators[0][0], C64::from(0.25));
        assert_eq!(src.correlators[0][1], state.s1_minus.conj() * state.s2_minus);
        assert_eq!(src.correlators[1][0], src.correlators[0][1].conj());
        assert_eq!(
            state.expectation(SOperator::S1MinusS2Plus),
            state.s1_minus * state.s2_minus.conj()
        );
    }
}
