//! Two-emitter operator algebra and the time-independent Liouvillian.
//!
//! Basis ordering is `|g1 g2>, |g1 e2>, |e1 g2>, |e1 e2>`, i.e. the index of a
//! product state is `2 * (emitter 1 excited) + (emitter 2 excited)`. Density
//! matrices are vectorized by stacking columns, so that
//! `vec(A rho B) = (B^T ⊗ A) vec(rho)`.
//!
//! The generator is written for the slowly varying operators `S_j`, obtained
//! from the lab-frame ladder operators by `sigma_j- -> eta_j S_j-` with
//! `eta_1 = 1`, `eta_2 = exp(i phi)`. All propagation phases of the atomic
//! operators live in [`frame_phases`]; nothing else in the crate adds them.

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, SVector};

use crate::error::Result;
use crate::model::{collective_rates, rabi_amplitude, SystemParams};
use crate::C64;

pub type Vec16 = SVector<C64, 16>;
pub type Mat16 = SMatrix<C64, 16, 16>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Operator on the four-dimensional two-emitter Hilbert space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitOperator(pub Matrix4<C64>);

impl TwoQubitOperator {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    /// `a ⊗ b` with `a` acting on emitter 1.
    pub fn product(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Self {
        Self(a.kronecker(b))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn basis_state(index: usize) -> nalgebra::Vector4<C64> {
        let mut v = nalgebra::Vector4::zeros();
        v[index] = ONE;
        v
    }
}

impl std::ops::Mul for TwoQubitOperator {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl std::ops::Add for TwoQubitOperator {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::ops::Sub for TwoQubitOperator {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl std::ops::Mul<TwoQubitOperator> for C64 {
    type Output = TwoQubitOperator;
    fn mul(self, rhs: TwoQubitOperator) -> TwoQubitOperator {
        TwoQubitOperator(rhs.0 * self)
    }
}

fn lowering2() -> Matrix2<C64> {
    // |g><e| with g = 0, e = 1
    Matrix2::new(ZERO, ONE, ZERO, ZERO)
}

fn inversion2() -> Matrix2<C64> {
    Matrix2::new(-ONE, ZERO, ZERO, ONE)
}

/// Single-emitter and identity building blocks on the two-emitter space.
#[derive(Clone, Copy, Debug)]
pub struct AtomicOperators {
    pub s1_minus: TwoQubitOperator,
    pub s2_minus: TwoQubitOperator,
    pub s1_plus: TwoQubitOperator,
    pub s2_plus: TwoQubitOperator,
    pub s1_z: TwoQubitOperator,
    pub s2_z: TwoQubitOperator,
    pub identity: TwoQubitOperator,
}

impl AtomicOperators {
    pub fn lowering(&self, emitter: usize) -> TwoQubitOperator {
        match emitter {
            0 => self.s1_minus,
            1 => self.s2_minus,
            _ => panic!("emitter index {emitter} out of range"),
        }
    }
}

pub fn atomic_operators() -> AtomicOperators {
    let id = Matrix2::identity();
    let s1_minus = TwoQubitOperator::product(&lowering2(), &id);
    let s2_minus = TwoQubitOperator::product(&id, &lowering2());
    AtomicOperators {
        s1_minus,
        s2_minus,
        s1_plus: s1_minus.adjoint(),
        s2_plus: s2_minus.adjoint(),
        s1_z: TwoQubitOperator::product(&inversion2(), &id),
        s2_z: TwoQubitOperator::product(&id, &inversion2()),
        identity: TwoQubitOperator::identity(),
    }
}

/// The nine independent slowly varying operators whose expectation values
/// fix the two-emitter steady state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SOperator {
    S1Minus,
    S1Z,
    S2Minus,
    S2Z,
    S1MinusS2Z,
    S1MinusS2Minus,
    S1ZS2Minus,
    S1ZS2Z,
    S1MinusS2Plus,
}

impl SOperator {
    pub const ALL: [SOperator; 9] = [
        SOperator::S1Minus,
        SOperator::S1Z,
        SOperator::S2Minus,
        SOperator::S2Z,
        SOperator::S1MinusS2Z,
        SOperator::S1MinusS2Minus,
        SOperator::S1ZS2Minus,
        SOperator::S1ZS2Z,
        SOperator::S1MinusS2Plus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            SOperator::S1Minus => "s1_minus",
            SOperator::S1Z => "s1_z",
            SOperator::S2Minus => "s2_minus",
            SOperator::S2Z => "s2_z",
            SOperator::S1MinusS2Z => "s1_minus_s2_z",
            SOperator::S1MinusS2Minus => "s1_minus_s2_minus",
            SOperator::S1ZS2Minus => "s1_z_s2_minus",
            SOperator::S1ZS2Z => "s1_z_s2_z",
            SOperator::S1MinusS2Plus => "s1_minus_s2_plus",
        }
    }

    pub fn matrix(self) -> TwoQubitOperator {
        let ops = atomic_operators();
        match self {
            SOperator::S1Minus => ops.s1_minus,
            SOperator::S1Z => ops.s1_z,
            SOperator::S2Minus => ops.s2_minus,
            SOperator::S2Z => ops.s2_z,
            SOperator::S1MinusS2Z => ops.s1_minus * ops.s2_z,
            SOperator::S1MinusS2Minus => ops.s1_minus * ops.s2_minus,
            SOperator::S1ZS2Minus => ops.s1_z * ops.s2_minus,
            SOperator::S1ZS2Z => ops.s1_z * ops.s2_z,
            SOperator::S1MinusS2Plus => ops.s1_minus * ops.s2_plus,
        }
    }
}

/// Rotating-frame phase factors `eta_j` relating lab-frame lowering operators
/// to the slowly varying ones: `sigma_j- = eta_j S_j-`.
pub fn frame_phases(phi: f64) -> [C64; 2] {
    [ONE, C64::from_polar(1.0, phi)]
}

pub fn vectorize(m: &Matrix4<C64>) -> Vec16 {
    Vec16::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &Vec16) -> Matrix4<C64> {
    Matrix4::from_column_slice(v.as_slice())
}

/// Liouvillian superoperator acting on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Liouvillian(pub Mat16);

impl Liouvillian {
    pub fn matrix(&self) -> &Mat16 {
        &self.0
    }

    /// `d rho / dt` for the given state.
    pub fn apply(&self, rho: &Matrix4<C64>) -> Matrix4<C64> {
        unvectorize(&(self.0 * vectorize(rho)))
    }
}

/// Generic Lindblad generator on a `dim`-dimensional space.
///
/// `coupling[(i, j)]` multiplies `S_i rho S_j^† - {S_j^† S_i, rho}/2` and must
/// be Hermitian.
fn lindblad_superoperator(hamiltonian: &DMatrix<C64>, jumps: &[DMatrix<C64>], coupling: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = hamiltonian.nrows();
    let id = DMatrix::<C64>::identity(dim, dim);
    let left = |a: &DMatrix<C64>| id.kronecker(a);
    let right = |b: &DMatrix<C64>| b.transpose().kronecker(&id);

    let mut gen = (left(hamiltonian) - right(hamiltonian)) * C64::new(0.0, -1.0);
    for (i, si) in jumps.iter().enumerate() {
        for (j, sj) in jumps.iter().enumerate() {
            let g = coupling[(i, j)];
            if g == ZERO {
                continue;
            }
            let sj_dag = sj.adjoint();
            let number = &sj_dag * si;
            gen += (left(si) * right(&sj_dag)) * g;
            gen -= (left(&number) + right(&number)) * (g * 0.5);
        }
    }
    gen
}

/// Rotating-frame Hamiltonian of the driven pair (light entering at emitter 1
/// of `params.oriented()`).
pub fn hamiltonian(params: &SystemParams) -> TwoQubitOperator {
    let p = params.oriented();
    let ops = atomic_operators();
    let rates = collective_rates(&p);
    let omega = rabi_amplitude(&p);
    let eta = frame_phases(rates.phi);
    let drive = C64::new(0.0, -0.5 * omega);

    let mut h = TwoQubitOperator::zero();
    for (j, delta) in [p.delta1, p.delta2].into_iter().enumerate() {
        let lower = ops.lowering(j);
        let raise = lower.adjoint();
        h = h + C64::from(-delta) * (raise * lower) + drive * (raise - lower);
    }
    let exchange =
        eta[0] * eta[1].conj() * (ops.s1_minus * ops.s2_plus) + eta[0].conj() * eta[1] * (ops.s1_plus * ops.s2_minus);
    h + C64::from(rates.d12) * exchange
}

/// Time-independent generator of the master equation for the slowly varying
/// operators.
pub fn rotating_frame_generator(params: &SystemParams) -> Result<Liouvillian> {
    params.validate()?;
    let p = params.oriented();
    let rates = collective_rates(&p);
    let eta = frame_phases(rates.phi);
    let ops = atomic_operators();

    let h = hamiltonian(&p);
    let to_dyn = |m: &TwoQubitOperator| DMatrix::from_column_slice(4, 4, m.0.as_slice());
    let jumps = [to_dyn(&ops.s1_minus), to_dyn(&ops.s2_minus)];
    let cross = C64::from(rates.gamma12);
    let coupling = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::from(rates.gamma11),
            cross * eta[0] * eta[1].conj(),
            cross * eta[1] * eta[0].conj(),
            C64::from(rates.gamma22),
        ],
    );
    let gen = lindblad_superoperator(&to_dyn(&h), &jumps, &coupling);
    Ok(Liouvillian(Mat16::from_column_slice(gen.as_slice())))
}

/// Optical Bloch generator of a single emitter in the guide (4x4, acting on
/// column-stacked 2x2 density matrices in the `|g>, |e>` basis).
pub fn single_emitter_generator(delta: f64, omega: f64, decay: f64) -> SMatrix<C64, 4, 4> {
    let lower = DMatrix::from_column_slice(2, 2, lowering2().as_slice());
    let raise = lower.adjoint();
    let h = (&raise * &lower) * C64::from(-delta) + (&raise - &lower) * C64::new(0.0, -0.5 * omega);
    let coupling = DMatrix::from_element(1, 1, C64::from(decay));
    let gen = lindblad_superoperator(&h, &[lower], &coupling);
    SMatrix::<C64, 4, 4>::from_column_slice(gen.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs(m: &Matrix4<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn random_hermitian(rng: &mut ChaCha8Rng) -> Matrix4<C64> {
        let a = Matrix4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        a + a.adjoint()
    }

    #[test]
    fn ladder_action_on_basis_states() {
        let ops = atomic_operators();
        // |e1 g2> has index 2
        let out = ops.s1_minus.0 * TwoQubitOperator::basis_state(2);
        assert_eq!(out, TwoQubitOperator::basis_state(0));
        let out = ops.s1_minus.0 * TwoQubitOperator::basis_state(0);
        assert_eq!(out, nalgebra::Vector4::zeros());
        let zz = SOperator::S1ZS2Z.matrix();
        let out = zz.0 * TwoQubitOperator::basis_state(2);
        assert_eq!(out, -TwoQubitOperator::basis_state(2));
    }

    #[test]
    fn operator_algebra_identities() {
        let ops = atomic_operators();
        let zero = TwoQubitOperator::zero();
        for j in 0..2 {
            let l = ops.lowering(j);
            assert_eq!(l * l, zero);
            assert_eq!(l.adjoint() * l.adjoint(), zero);
        }
        assert_eq!(ops.s1_minus * ops.s2_minus, ops.s2_minus * ops.s1_minus);
        assert_eq!(ops.s1_plus * ops.s2_plus, ops.s2_plus * ops.s1_plus);
        assert_eq!(ops.s1_minus * ops.s2_plus, ops.s2_plus * ops.s1_minus);
        let two = C64::from(2.0);
        assert_eq!(ops.s1_z, two * (ops.s1_plus * ops.s1_minus) - ops.identity);
        assert_eq!(ops.s2_z, two * (ops.s2_plus * ops.s2_minus) - ops.identity);
    }

    #[test]
    fn vectorization_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(&mut rng) + Matrix4::identity() * C64::new(0.0, 0.3);
        let b = random_hermitian(&mut rng);
        let rho = random_hermitian(&mut rng);
        let lhs = vectorize(&(a * rho * b));
        let rhs = b.transpose().kronecker(&a) * vectorize(&rho);
        assert!((lhs - rhs).norm() < 1e-12);
        assert_eq!(unvectorize(&vectorize(&rho)), rho);
    }

    #[test]
    fn undriven_ground_state_is_stationary() {
        let params = SystemParams::new(0.4, -0.7, 0.31, 0.0).with_gamma_bg(0.0);
        let gen = rotating_frame_generator(&params).unwrap();
        let mut ground = Matrix4::zeros();
        ground[(0, 0)] = ONE;
        assert!(max_abs(&gen.apply(&ground)) < 1e-15);
    }

    #[test]
    fn trace_and_hermiticity_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trace_row = vectorize(&Matrix4::identity()).adjoint();
        for _ in 0..20 {
            let params = SystemParams::new(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..5.0),
            )
            .with_gamma_bg(rng.gen_range(0.0..0.1));
            let gen = rotating_frame_generator(&params).unwrap();
            let row = trace_row * gen.matrix();
            assert!(row.norm() < 1e-13, "trace row {}", row.norm());

            let rho = random_hermitian(&mut rng);
            let out = gen.apply(&rho);
            assert!(max_abs(&(out - out.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn spectrum_has_single_zero_mode() {
        let params = SystemParams::new(0.12, 0.0, 0.982, 0.05);
        let gen = rotating_frame_generator(&params).unwrap();
        let eig = gen.matrix().schur().eigenvalues().expect("schur eigenvalues");
        let mut zero_modes = 0;
        for ev in eig.iter() {
            assert!(ev.re < 1e-10, "eigenvalue {ev}");
            if ev.norm() < 1e-9 {
                zero_modes += 1;
            }
        }
        assert_eq!(zero_modes, 1);
    }

    #[test]
    fn single_emitter_generator_is_optical_bloch() {
        // textbook Bloch equations: d<s->/dt = -(g/2 - i d)<s-> + (Omega/2)<s_z>
        let (delta, omega, decay) = (0.3, 0.8, 1.0);
        let gen = single_emitter_generator(delta, omega, decay);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = nalgebra::Matrix2::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rho = a * a.adjoint();
        let rho = rho / rho.trace();
        let v = SVector::<C64, 4>::from_column_slice(rho.as_slice());
        let drho = nalgebra::Matrix2::from_column_slice((gen * v).as_slice());
        let s = rho[(1, 0)];
        let sz = (rho[(1, 1)] - rho[(0, 0)]).re;
        let ds = drho[(1, 0)];
        let expected = -C64::new(0.5 * decay, -delta) * s + C64::from(0.5 * omega * sz);
        assert_abs_diff_eq!(ds.re, expected.re, epsilon = 1e-12);
        assert_abs_diff_eq!(ds.im, expected.im, epsilon = 1e-12);
        let dz = (drho[(1, 1)] - drho[(0, 0)]).re;
        let expected_z = -decay * (1.0 + sz) - 2.0 * omega * s.re;
        assert_abs_diff_eq!(dz, expected_z, epsilon = 1e-12);
    }

    #[test]
    fn direction_reversal_swaps_detunings() {
        let p = SystemParams::new(0.12, -0.5, 0.982, 0.05);
        let a = rotating_frame_generator(&p.with_direction(crate::model::Direction::TwoToOne)).unwrap();
        let b = rotating_frame_generator(&crate::model::swap_direction(&p)).unwrap();
        assert_eq!(a, b);
    }
}
