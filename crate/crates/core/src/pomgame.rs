//! The `n`-bit parity-oblivious multiplexing game.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (crate
//! `rand_chacha`). Each trial draws, in order: Alice's measurement index
//! `i` uniform in `0..2^{n-1}`, a uniform `f64` deciding her outcome by the
//! Born rule, Bob's setting `y` uniform in `0..n`, and a uniform `f64`
//! deciding Bob's outcome. Identical seeds give identical records.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::tsirelson_value;
use crate::combinatorics::{enumerate_inputs, parity_bit, parity_set, BitString};
use crate::error::{Error, Result};
use crate::matrix::{expectation, kron, Matrix};
use crate::measurement::{effects, Povm};
use crate::observables::{all_steered_states, max_entangled_state, Observables};
use crate::scalar::Scalar;

/// `1/2 + bell_value / (2^n n)`.
pub fn success_probability<T: Scalar>(n: usize, bell_value: T) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("bit count n = {n} must be at least 2")));
    }
    let denom = T::lit(2.0).powi(n as i32) * T::from_usize_lossy(n);
    Ok(T::lit(0.5) + bell_value / denom)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord<T> {
    pub n: usize,
    pub trials: u64,
    pub successes: u64,
    pub empirical_p: T,
    pub analytic_p: T,
    /// `tallies[(delta - 1) * n + (y - 1)][b]` counts Bob's outcome `b`.
    pub tallies: Vec<[u64; 2]>,
}

impl<T: Scalar> GameRecord<T> {
    /// Difference between `P(b = 0 | s.x = 0)` and `P(b = 0 | s.x = 1)`,
    /// with Bob's outcome pooled over his settings.
    pub fn parity_leakage(&self, s: &BitString) -> Result<T> {
        let inputs = enumerate_inputs(self.n)?;
        let mut zeros = [0u64; 2];
        let mut totals = [0u64; 2];
        for (d, x) in inputs.iter().enumerate() {
            let class = usize::from(parity_bit(s, x)?);
            for y in 0..self.n {
                let [b0, b1] = self.tallies[d * self.n + y];
                zeros[class] += b0;
                totals[class] += b0 + b1;
            }
        }
        if totals.contains(&0) {
            return Ok(T::zero());
        }
        let f = |c: usize| T::lit(zeros[c] as f64 / totals[c] as f64);
        Ok((f(0) - f(1)).abs())
    }

    /// Largest leakage over the whole parity set.
    pub fn max_parity_leakage(&self) -> Result<T> {
        parity_set(self.n)?
            .iter()
            .map(|s| self.parity_leakage(s))
            .try_fold(T::zero(), |acc, v| Ok(acc.max(v?)))
    }
}

/// Plays the game `trials` times. Bob measures with `povm` (sharp when
/// `None`) and reports `b = 0` on the `+1` effect.
pub fn simulate_game<T: Scalar>(
    n: usize,
    trials: u64,
    seed: u64,
    povm: Option<Povm<T>>,
) -> Result<GameRecord<T>> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let povm = povm.unwrap_or_else(Povm::sharp);
    let obs = Observables::<T>::new(n)?;
    let rho_ab = max_entangled_state::<T>(n)?.rho;
    let states = all_steered_states::<T>(n)?;
    let total = states.len();
    let half = total / 2;

    let id = Matrix::identity(obs.dim);
    let alice_plus: Vec<f64> = obs
        .alice
        .iter()
        .map(|a| {
            let p = (&id + a).scale(T::lit(0.5));
            expectation(&rho_ab, &kron(&p, &id)?).map(Scalar::as_f64)
        })
        .collect::<Result<_>>()?;
    let bob_effects = obs
        .bob
        .iter()
        .map(|b| effects(&povm, b))
        .collect::<Result<Vec<_>>>()?;
    let mut bob_zero = vec![0.0f64; total * n];
    for (d, rho) in states.iter().enumerate() {
        for (y, e) in bob_effects.iter().enumerate() {
            bob_zero[d * n + y] = expectation(rho, &e.plus)?.as_f64();
        }
    }

    let inputs = enumerate_inputs(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = vec![[0u64; 2]; total * n];
    let mut successes = 0u64;
    for _ in 0..trials {
        let i = rng.gen_range(0..half);
        let plus = rng.gen::<f64>() < alice_plus[i];
        let d = if plus { i } else { total - 1 - i };
        let y = rng.gen_range(0..n);
        let b = u8::from(rng.gen::<f64>() >= bob_zero[d * n + y]);
        tallies[d * n + y][usize::from(b)] += 1;
        if b == inputs.as_slice()[d].bit(y + 1) {
            successes += 1;
        }
    }

    let bell = tsirelson_value::<T>(n)? * povm.eta();
    Ok(GameRecord {
        n,
        trials,
        successes,
        empirical_p: T::lit(successes as f64 / trials as f64),
        analytic_p: success_probability(n, bell)?,
        tallies,
    })
}
