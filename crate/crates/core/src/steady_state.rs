//! Steady state of the two-emitter master equation, plus a fixed-step
//! fourth-order time integrator used to cross-check it.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::generator::{atomic_operators, unvectorize, vectorize, Liouvillian, Mat16, SOperator, TwoQubitOperator};
use crate::observables::FieldSources;
use crate::C64;

/// Relative singular-value threshold below which a direction counts as part
/// of the generator's null space.
pub const NULL_SPACE_TOL: f64 = 1e-8;
/// Above this condition number the row-replacement system is abandoned in
/// favour of the SVD null vector.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest residual `|L vec(rho)|` accepted from a solve.
pub const MAX_RESIDUAL: f64 = 1e-8;
/// Largest trace drift tolerated by [`evolve`].
pub const MAX_TRACE_DRIFT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(pub Matrix4<C64>);

/// How far a matrix is from being a valid density matrix.
#[derive(Clone, Copy, Debug)]
pub struct AxiomReport {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl AxiomReport {
    pub fn holds(&self, trace_tol: f64, herm_tol: f64, eig_floor: f64) -> bool {
        self.trace_error <= trace_tol && self.hermiticity_error <= herm_tol && self.min_eigenvalue >= eig_floor
    }
}

impl DensityMatrix {
    /// Both emitters in their ground state.
    pub fn ground() -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = C64::from(1.0);
        Self(m)
    }

    /// Projector onto a basis state (index `2*e1 + e2`).
    pub fn basis_projector(index: usize) -> Self {
        let mut m = Matrix4::zeros();
        m[(index, index)] = C64::from(1.0);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn expectation(&self, op: &TwoQubitOperator) -> C64 {
        (self.0 * op.0).trace()
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0[(index, index)].re
    }

    pub fn axioms(&self) -> AxiomReport {
        let herm = (self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let hermitian_part = (self.0 + self.0.adjoint()) * C64::from(0.5);
        let min_eigenvalue = hermitian_part
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        AxiomReport {
            trace_error: (self.trace() - C64::from(1.0)).norm(),
            hermiticity_error: herm,
            min_eigenvalue,
        }
    }

    fn symmetrized(m: Matrix4<C64>) -> Self {
        let h = (m + m.adjoint()) * C64::from(0.5);
        let tr = h.trace();
        Self(h / tr)
    }
}

/// Steady-state density matrix with cached expectation values.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    expectations: [C64; 9],
    /// `correlators[i][j] = <S_{i+} S_{j-}>`
    correlators: [[C64; 2]; 2],
    /// `|L vec(rho)|`
    pub residual: f64,
}

impl SteadyState {
    pub fn from_density(rho: DensityMatrix, residual: f64) -> Self {
        let mut expectations = [C64::from(0.0); 9];
        for op in SOperator::ALL {
            expectations[op.index()] = rho.expectation(&op.matrix());
        }
        let ops = atomic_operators();
        let mut correlators = [[C64::from(0.0); 2]; 2];
        for (i, row) in correlators.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = rho.expectation(&(ops.lowering(i).adjoint() * ops.lowering(j)));
            }
        }
        Self {
            rho,
            expectations,
            correlators,
            residual,
        }
    }

    pub fn expectation(&self, op: SOperator) -> C64 {
        self.expectations[op.index()]
    }

    /// Expectation of the adjoint of `op`.
    pub fn expectation_adjoint(&self, op: SOperator) -> C64 {
        self.expectations[op.index()].conj()
    }

    /// `<S_{i+} S_{j-}>` for emitters `i, j` in `0..2`.
    pub fn correlator(&self, i: usize, j: usize) -> C64 {
        self.correlators[i][j]
    }

    pub fn sources(&self) -> FieldSources {
        FieldSources {
            coherences: [
                self.expectation(SOperator::S1Minus),
                self.expectation(SOperator::S2Minus),
            ],
            correlators: self.correlators,
        }
    }
}

fn null_vector(svd: &nalgebra::SVD<C64, nalgebra::U16, nalgebra::U16>) -> Result<nalgebra::SVector<C64, 16>> {
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::SolverFailure("SVD did not return right singular vectors".into()))?;
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("16 singular values");
    Ok(v_t.row(k).adjoint())
}

/// Unique steady state of `gen`.
///
/// Solves `L vec(rho) = 0` with the first equation replaced by `tr(rho) = 1`;
/// falls back to the SVD null vector when that system is ill-conditioned.
pub fn solve_steady(gen: &Liouvillian) -> Result<SteadyState> {
    let l = gen.matrix();
    let svd = l.svd(false, true);
    let scale = svd.singular_values.max().max(1.0);
    let null_dim = svd
        .singular_values
        .iter()
        .filter(|s| **s < NULL_SPACE_TOL * scale)
        .count();
    if null_dim > 1 {
        return Err(Error::DegenerateSteadyState { null_dim });
    }

    let trace_row = vectorize(&Matrix4::identity()).transpose();
    let mut system: Mat16 = *l;
    system.set_row(0, &trace_row);
    let mut rhs = nalgebra::SVector::<C64, 16>::zeros();
    rhs[0] = C64::from(1.0);

    let sv = system.singular_values();
    let cond = sv.max() / sv.min();
    let vec_rho = match system.lu().solve(&rhs) {
        Some(v) if cond.is_finite() && cond <= MAX_CONDITION => v,
        _ => null_vector(&svd)?,
    };

    let rho = DensityMatrix::symmetrized(unvectorize(&vec_rho));
    let residual = (l * vectorize(&rho.0)).norm();
    if !residual.is_finite() || residual > MAX_RESIDUAL {
        return Err(Error::SolverFailure(format!("residual {residual:e} after solve")));
    }
    Ok(SteadyState::from_density(rho, residual))
}

/// One step of the classical fourth-order Runge-Kutta method for the linear
/// system `x' = L x`, collapsed into a single propagator matrix.
fn rk4_propagator(l: &Mat16, dt: f64) -> Mat16 {
    let a = l * C64::from(dt);
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    Mat16::identity() + a + a2 * C64::from(0.5) + a3 * C64::from(1.0 / 6.0) + a4 * C64::from(1.0 / 24.0)
}

/// Integrate `d vec(rho)/dt = L vec(rho)` from `rho0` up to `t_final` with
/// fixed-step RK4 (the last step is shortened to land on `t_final`).
pub fn evolve(gen: &Liouvillian, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter { name: "dt", value: dt });
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            value: t_final,
        });
    }
    let full_steps = (t_final / dt).floor() as u64;
    let remainder = t_final - full_steps as f64 * dt;
    let step = rk4_propagator(gen.matrix(), dt);

    let initial_trace = rho0.trace();
    let mut x = vectorize(&rho0.0);
    for _ in 0..full_steps {
        x = step * x;
    }
    if remainder > 1e-12 * dt {
        x = rk4_propagator(gen.matrix(), remainder) * x;
    }
    let rho = unvectorize(&x);
    let drift = (rho.trace() - initial_trace).norm();
    if drift.is_nan() || drift > MAX_TRACE_DRIFT {
        return Err(Error::StepTooLarge { dt, drift });
    }
    Ok(DensityMatrix(rho))
}
