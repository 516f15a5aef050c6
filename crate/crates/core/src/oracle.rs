//! Brute-force classical bounds and a direct matrix check of the quantum
//! maximum.
//!
//! The classical oracles enumerate deterministic sign assignments with exact
//! integer arithmetic. For fixed Alice signs the best Bob sign for setting
//! `y` is the sign of its coefficient, so only Alice's `2^{2^{n-1}}`
//! assignments are enumerated.

use crate::combinatorics::{enumerate_inputs, nontrivial_parities, parity_bit, BitString};
use crate::error::{Error, Result};
use crate::matrix::{expectation, kron, Matrix};
use crate::observables::{max_entangled_state, Observables};
use crate::scalar::Scalar;

/// Largest bit count for the classical enumeration.
pub const MAX_ORACLE_BITS: usize = 5;

/// Values `+1`/`-1` assigned to each of Alice's and Bob's observables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub alice_signs: Vec<i8>,
    pub bob_signs: Vec<i8>,
}

impl DeterministicStrategy {
    pub fn new(n: usize, alice_signs: Vec<i8>, bob_signs: Vec<i8>) -> Result<Self> {
        let expected = 1usize << (n - 1);
        if alice_signs.len() != expected {
            return Err(Error::LengthMismatch {
                left: alice_signs.len(),
                right: expected,
            });
        }
        if bob_signs.len() != n {
            return Err(Error::LengthMismatch {
                left: bob_signs.len(),
                right: n,
            });
        }
        if alice_signs.iter().chain(&bob_signs).any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain("signs must be +1 or -1".into()));
        }
        Ok(Self {
            alice_signs,
            bob_signs,
        })
    }

    /// `sum_y sum_i (-1)^{x^i_y} a_i b_y`.
    pub fn value(&self) -> i64 {
        let n = self.bob_signs.len();
        let half = alice_labels(n);
        coefficients(&half, &self.alice_signs)
            .iter()
            .zip(&self.bob_signs)
            .map(|(&c, &b)| c * i64::from(b))
            .sum()
    }
}

fn check_oracle_bits(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("bit count n = {n} must be at least 2")));
    }
    if n > MAX_ORACLE_BITS {
        return Err(Error::SizeLimit {
            what: "bit count n (brute force)",
            value: n,
            limit: MAX_ORACLE_BITS,
        });
    }
    Ok(())
}

fn alice_labels(n: usize) -> Vec<BitString> {
    enumerate_inputs(n).expect("n validated").first_half().to_vec()
}

fn signs_from_mask(mask: u64, len: usize) -> Vec<i8> {
    (0..len).map(|i| if mask >> i & 1 == 0 { 1 } else { -1 }).collect()
}

/// Coefficient `c_y = sum_i (-1)^{x^i_y} a_i` of Bob's value `b_y`.
fn coefficients(labels: &[BitString], alice: &[i8]) -> Vec<i64> {
    let n = labels[0].len();
    (1..=n)
        .map(|y| {
            labels
                .iter()
                .zip(alice)
                .map(|(x, &a)| i64::from(x.sign(y)) * i64::from(a))
                .sum()
        })
        .collect()
}

fn satisfies_constraints(labels: &[BitString], constraints: &[BitString], alice: &[i8]) -> bool {
    constraints.iter().all(|s| {
        labels
            .iter()
            .zip(alice)
            .map(|(x, &a)| {
                let sign = if parity_bit(s, x).expect("equal lengths") == 0 { 1 } else { -1 };
                sign * i64::from(a)
            })
            .sum::<i64>()
            == 0
    })
}

/// Maximum over deterministic strategies, optionally restricted to Alice
/// assignments obeying the odd-parity constraints. Returns an optimal
/// strategy alongside the value.
pub fn best_strategy(n: usize, constrained: bool) -> Result<(i64, DeterministicStrategy)> {
    check_oracle_bits(n)?;
    let labels = alice_labels(n);
    let constraints = if constrained { nontrivial_parities(n)? } else { Vec::new() };
    let m = labels.len();
    let mut best: Option<(i64, DeterministicStrategy)> = None;
    for mask in 0..(1u64 << m) {
        let alice = signs_from_mask(mask, m);
        if !satisfies_constraints(&labels, &constraints, &alice) {
            continue;
        }
        let coeffs = coefficients(&labels, &alice);
        let value: i64 = coeffs.iter().map(|c| c.abs()).sum();
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            let bob = coeffs.iter().map(|&c| if c >= 0 { 1 } else { -1 }).collect();
            best = Some((
                value,
                DeterministicStrategy {
                    alice_signs: alice,
                    bob_signs: bob,
                },
            ));
        }
    }
    best.ok_or(Error::NoFeasibleAssignment(n))
}

/// Local bound by enumeration, `2 <= n <= 5`.
pub fn local_bound_bruteforce(n: usize) -> Result<i64> {
    Ok(best_strategy(n, false)?.0)
}

/// Bound under the odd-parity constraints, `2 <= n <= 5` (no constraints
/// exist for `n = 2`).
pub fn pnc_bound_bruteforce(n: usize) -> Result<i64> {
    Ok(best_strategy(n, true)?.0)
}

/// Enumerates Bob's signs too, without the per-coefficient shortcut.
/// Limited to `n <= 4` (`2^{12}` strategies).
pub fn local_bound_full_enumeration(n: usize) -> Result<i64> {
    check_oracle_bits(n)?;
    if n > 4 {
        return Err(Error::SizeLimit {
            what: "bit count n (full enumeration)",
            value: n,
            limit: 4,
        });
    }
    let m = 1usize << (n - 1);
    let mut best = i64::MIN;
    for am in 0..(1u64 << m) {
        for bm in 0..(1u64 << n) {
            let s = DeterministicStrategy {
                alice_signs: signs_from_mask(am, m),
                bob_signs: signs_from_mask(bm, n),
            };
            best = best.max(s.value());
        }
    }
    Ok(best)
}

/// The full Bell operator `sum_y sum_i (-1)^{x^i_y} A_i (x) B_y`.
pub fn bell_operator<T: Scalar>(obs: &Observables<T>) -> Result<Matrix<T>> {
    let labels = alice_labels(obs.n);
    let d2 = obs.dim * obs.dim;
    let mut op = Matrix::zeros(d2, d2);
    for (y, b) in obs.bob.iter().enumerate() {
        for (a, x) in obs.alice.iter().zip(&labels) {
            op.add_scaled(&kron(a, b)?, T::lit(f64::from(x.sign(y + 1))))?;
        }
    }
    Ok(op)
}

/// `<phi| B_n |phi>` with sharp measurements, evaluated from the full
/// operator; equals `2^{n-1} sqrt(n)`.
pub fn quantum_max_check<T: Scalar>(n: usize) -> Result<T> {
    let obs = Observables::<T>::new(n)?;
    let state = max_entangled_state::<T>(n)?;
    expectation(&state.rho, &bell_operator(&obs)?)
}
