//! Bob's mutually anticommuting observables, Alice's optimal observables,
//! the maximally entangled state, and the states Alice steers to Bob.
//!
//! On `|phi> = sum_k |kk> / sqrt(d)` one has `<A (x) B> = tr(A B^T) / d`.
//! Alice's observables are therefore assembled from the transposes
//! `B_y^T = conj(B_y)` of Bob's observables:
//!
//! ```text
//! A_i = (1/sqrt(n)) * sum_y (-1)^{x^i_y} conj(B_y)
//! ```
//!
//! With this choice the Bell operator reaches `2^{n-1} sqrt(n)`, every steered
//! state points along `sum_y (-1)^{x_y} B_y`, and the odd-parity constraints
//! on Alice's observables hold exactly.

use num_complex::Complex;

use crate::combinatorics::{enumerate_inputs, nontrivial_parities, parity_bit, parity_set};
use crate::error::{Error, Result};
use crate::matrix::{frobenius_distance, kron, partial_trace_first, Matrix};
use crate::scalar::Scalar;

/// Largest bit count handled by the matrix layer (local dimension 16).
pub const MAX_MATRIX_BITS: usize = 8;

pub mod pauli {
    use super::*;

    pub fn x<T: Scalar>() -> Matrix<T> {
        Matrix::from_pairs(2, 2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)]).expect("2x2")
    }

    pub fn y<T: Scalar>() -> Matrix<T> {
        Matrix::from_pairs(2, 2, &[(0., 0.), (0., -1.), (0., 1.), (0., 0.)]).expect("2x2")
    }

    pub fn z<T: Scalar>() -> Matrix<T> {
        Matrix::from_pairs(2, 2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]).expect("2x2")
    }
}

/// Local Hilbert-space dimension `2^{floor(n/2)}`.
#[inline]
pub fn local_dim(n: usize) -> usize {
    1 << (n / 2)
}

fn check_matrix_bits(n: usize, cap: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("bit count n = {n} must be at least 2")));
    }
    if n > cap {
        return Err(Error::SizeLimit {
            what: "bit count n (matrix layer)",
            value: n,
            limit: cap,
        });
    }
    Ok(())
}

/// Bob's `n` observables, built by the even/odd recursion from the `n = 2`
/// pair `(X, Y)` and the `n = 3` triple `(X, Y, Z)`.
pub fn bob_observables<T: Scalar>(n: usize) -> Result<Vec<Matrix<T>>> {
    bob_observables_with_cap(n, MAX_MATRIX_BITS)
}

pub fn bob_observables_with_cap<T: Scalar>(n: usize, cap: usize) -> Result<Vec<Matrix<T>>> {
    check_matrix_bits(n, cap)?;
    Ok(bob_recursion(n))
}

fn bob_recursion<T: Scalar>(n: usize) -> Vec<Matrix<T>> {
    match n {
        2 => vec![pauli::x(), pauli::y()],
        3 => vec![pauli::x(), pauli::y(), pauli::z()],
        _ => {
            let inner = if n.is_multiple_of(2) { n - 1 } else { n - 2 };
            let prev = bob_recursion::<T>(inner);
            let id = Matrix::identity(prev[0].rows());
            let x = pauli::x();
            let mut out: Vec<Matrix<T>> = prev
                .iter()
                .map(|b| kron(&x, b).expect("within cap"))
                .collect();
            out.push(kron(&pauli::y(), &id).expect("within cap"));
            if n % 2 == 1 {
                out.push(kron(&pauli::z(), &id).expect("within cap"));
            }
            out
        }
    }
}

fn combine_alice<T: Scalar>(bob: &[Matrix<T>], x: &crate::combinatorics::BitString) -> Matrix<T> {
    let n = bob.len();
    let norm = T::one() / T::from_usize_lossy(n).sqrt();
    let mut a = Matrix::zeros(bob[0].rows(), bob[0].cols());
    for (y, b) in bob.iter().enumerate() {
        let s = T::lit(f64::from(x.sign(y + 1)));
        a.add_scaled(&b.conj(), s * norm).expect("same shape");
    }
    a
}

/// Alice's observable `A_{n,i}` for `1 <= i <= 2^{n-1}`.
pub fn alice_observable<T: Scalar>(n: usize, i: usize) -> Result<Matrix<T>> {
    let bob = bob_observables::<T>(n)?;
    let inputs = enumerate_inputs(n)?;
    let half = inputs.len() / 2;
    if i == 0 || i > half {
        return Err(Error::IndexOutOfRange { index: i, max: half });
    }
    Ok(combine_alice(&bob, &inputs.get(i)?))
}

/// Both parties' observables for one bit count.
#[derive(Debug, Clone)]
pub struct Observables<T> {
    pub n: usize,
    pub dim: usize,
    pub bob: Vec<Matrix<T>>,
    pub alice: Vec<Matrix<T>>,
}

impl<T: Scalar> Observables<T> {
    pub fn new(n: usize) -> Result<Self> {
        let bob = bob_observables::<T>(n)?;
        let inputs = enumerate_inputs(n)?;
        let alice = inputs
            .first_half()
            .iter()
            .map(|x| combine_alice(&bob, x))
            .collect();
        Ok(Self {
            n,
            dim: local_dim(n),
            bob,
            alice,
        })
    }

    /// `sum_i (-1)^{x^i_y} A_i` for 1-based `y`.
    pub fn signed_alice_sum(&self, y: usize) -> Matrix<T> {
        let inputs = enumerate_inputs(self.n).expect("n validated");
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (a, x) in self.alice.iter().zip(inputs.first_half()) {
            acc.add_scaled(a, T::lit(f64::from(x.sign(y))))
                .expect("same shape");
        }
        acc
    }

    /// Largest Frobenius norm of `{B_y, B_y'}` over `y != y'`.
    pub fn max_anticommutator(&self) -> T {
        let mut worst = T::zero();
        for (y, a) in self.bob.iter().enumerate() {
            for b in &self.bob[y + 1..] {
                worst = worst.max(a.anticommutator(b).expect("same shape").frobenius_norm());
            }
        }
        worst
    }

    /// Largest `||A_i^2 - I||`.
    pub fn max_alice_square_residual(&self) -> T {
        let id = Matrix::identity(self.dim);
        self.alice
            .iter()
            .map(|a| frobenius_distance(&(a * a), &id).expect("same shape"))
            .fold(T::zero(), T::max)
    }

    /// Largest deviation of `sum_i (-1)^{x^i_y} A_i` from
    /// `(2^{n-1}/sqrt(n)) B_y^T` over all `y`.
    pub fn optimality_residual(&self) -> T {
        let scale = T::lit(2f64.powi(self.n as i32 - 1)) / T::from_usize_lossy(self.n).sqrt();
        (1..=self.n)
            .map(|y| {
                let target = self.bob[y - 1].transpose().scale(scale);
                frobenius_distance(&self.signed_alice_sum(y), &target).expect("same shape")
            })
            .fold(T::zero(), T::max)
    }
}

/// The maximally entangled two-party state of local dimension `dim`.
#[derive(Debug, Clone)]
pub struct EntangledState<T> {
    pub n: usize,
    pub dim: usize,
    pub rho: Matrix<T>,
}

/// `|phi> = sum_k |k>|k> / sqrt(d)`, `d = 2^{floor(n/2)}`, as a density matrix.
pub fn max_entangled_state<T: Scalar>(n: usize) -> Result<EntangledState<T>> {
    check_matrix_bits(n, MAX_MATRIX_BITS)?;
    let dim = local_dim(n);
    let amp = T::one() / T::from_usize_lossy(dim).sqrt();
    let mut psi = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for k in 0..dim {
        psi[k * dim + k] = Complex::new(amp, T::zero());
    }
    Ok(EntangledState {
        n,
        dim,
        rho: Matrix::outer(&psi),
    })
}

fn steer<T: Scalar>(rho_ab: &Matrix<T>, a_obs: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let d = a_obs.rows();
    let id = Matrix::identity(d);
    let half = T::lit(0.5);
    let p = (&id + a_obs).scale(half);
    let q = &id - &p;
    let id_b = Matrix::identity(rho_ab.rows() / d);
    let two = T::lit(2.0);
    let plus = partial_trace_first(&(&kron(&p, &id_b)? * rho_ab), d)?.scale(two);
    let minus = partial_trace_first(&(&kron(&q, &id_b)? * rho_ab), d)?.scale(two);
    Ok((plus, minus))
}

/// States `(rho_{x^i}, rho_{x^l})` prepared for Bob when Alice measures
/// `A_{n,i}` and obtains the outcome `+1` or `-1`, normalised to unit trace.
pub fn steered_states<T: Scalar>(n: usize, i: usize) -> Result<(Matrix<T>, Matrix<T>)> {
    let a = alice_observable::<T>(n, i)?;
    let state = max_entangled_state::<T>(n)?;
    steer(&state.rho, &a)
}

/// All `2^n` steered states indexed by `delta - 1`.
pub fn all_steered_states<T: Scalar>(n: usize) -> Result<Vec<Matrix<T>>> {
    let obs = Observables::<T>::new(n)?;
    let state = max_entangled_state::<T>(n)?;
    let total = 1usize << n;
    let mut out = vec![Matrix::zeros(obs.dim, obs.dim); total];
    for (idx, a) in obs.alice.iter().enumerate() {
        let (plus, minus) = steer(&state.rho, a)?;
        out[idx] = plus;
        out[total - 1 - idx] = minus;
    }
    Ok(out)
}

/// Largest Frobenius norm of `sum_i (-1)^{s.x^i} A_i` over the odd-parity
/// strings `s`. Returns [`Error::NoConstraints`] for `n = 2`.
pub fn verify_alice_constraints<T: Scalar>(n: usize) -> Result<T> {
    let constraints = nontrivial_parities(n)?;
    if constraints.is_empty() {
        return Err(Error::NoConstraints(n));
    }
    let obs = Observables::<T>::new(n)?;
    let inputs = enumerate_inputs(n)?;
    let mut worst = T::zero();
    for s in &constraints {
        let mut acc = Matrix::zeros(obs.dim, obs.dim);
        for (a, x) in obs.alice.iter().zip(inputs.first_half()) {
            let sign = if parity_bit(s, x)? == 0 { T::one() } else { -T::one() };
            acc.add_scaled(a, sign)?;
        }
        worst = worst.max(acc.frobenius_norm());
    }
    Ok(worst)
}

/// Largest distance between the even- and odd-parity mixtures of steered
/// states over every `s` in the parity set.
pub fn verify_parity_obliviousness<T: Scalar>(n: usize) -> Result<T> {
    let states = all_steered_states::<T>(n)?;
    let inputs = enumerate_inputs(n)?;
    let dim = local_dim(n);
    let weight = T::one() / T::lit(2f64.powi(n as i32 - 1));
    let mut worst = T::zero();
    for s in parity_set(n)? {
        let mut even = Matrix::zeros(dim, dim);
        let mut odd = Matrix::zeros(dim, dim);
        for (x, rho) in inputs.iter().zip(&states) {
            if parity_bit(&s, x)? == 0 {
                even.add_scaled(rho, weight)?;
            } else {
                odd.add_scaled(rho, weight)?;
            }
        }
        worst = worst.max(frobenius_distance(&even, &odd)?);
    }
    Ok(worst)
}
