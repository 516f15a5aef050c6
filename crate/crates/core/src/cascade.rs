//! Density-matrix simulation of Alice plus a chain of sequential Bobs.
//!
//! Every Bob measures one of the `n` observables with the Lüders
//! instrument of his POVM; the next Bob receives the unselected
//! post-measurement state. Setting choices are either uniform and
//! independent, or correlated: from the second Bob on, Bob `j` repeats the
//! setting of Bob `j-1` with probability `p` and picks each other setting with
//! probability `(1-p)/(n-1)`. Correlated choices are handled exactly by
//! carrying one branch state per previous setting.

use crate::error::{Error, Result};
use crate::matrix::{expectation, kron, Matrix};
use crate::measurement::{effects, luders_update, Effects, Povm};
use crate::observables::{max_entangled_state, Observables};
use crate::scalar::Scalar;

/// Weighted setting-conditioned states and the per-Bob state history.
type Branches<T> = (Vec<Matrix<T>>, Vec<Matrix<T>>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SettingsBias<T> {
    /// Each Bob picks every setting with probability `1/n`, independently.
    Unbiased,
    /// Bob `j >= 2` repeats his predecessor's setting with probability `p`.
    Repeat(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cascade<T> {
    pub n: usize,
    pub bobs: Vec<Povm<T>>,
    pub bias: SettingsBias<T>,
    /// Retain the state each Bob receives.
    pub keep_states: bool,
}

impl<T: Scalar> Cascade<T> {
    pub fn new(n: usize, bobs: Vec<Povm<T>>) -> Result<Self> {
        Self::with_bias(n, bobs, SettingsBias::Unbiased)
    }

    pub fn with_bias(n: usize, bobs: Vec<Povm<T>>, bias: SettingsBias<T>) -> Result<Self> {
        if bobs.is_empty() {
            return Err(Error::Domain("at least one Bob is required".into()));
        }
        if let SettingsBias::Repeat(p) = bias {
            if !(T::zero()..=T::one()).contains(&p) {
                return Err(Error::Domain(format!("setting bias p = {p} outside [0, 1]")));
            }
        }
        Ok(Self {
            n,
            bobs,
            bias,
            keep_states: false,
        })
    }

    pub fn keep_states(mut self, keep: bool) -> Self {
        self.keep_states = keep;
        self
    }

    /// Probability that a Bob picks `to` given his predecessor picked `from`.
    fn transition(&self, from: usize, to: usize) -> T {
        let n = T::from_usize_lossy(self.n);
        match self.bias {
            SettingsBias::Unbiased => T::one() / n,
            SettingsBias::Repeat(p) if from == to => p,
            SettingsBias::Repeat(p) => (T::one() - p) / (n - T::one()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CascadeResult<T> {
    pub bell_value: T,
    /// States received by Bobs `1..=k`, when requested.
    pub per_bob_states: Option<Vec<Matrix<T>>>,
    /// Marginal distribution of the last Bob's setting.
    pub settings_weights: Vec<T>,
}

struct Engine<T> {
    obs: Observables<T>,
    rho0: Matrix<T>,
    /// `effects[j][y]` for Bob `j` (0-based) and setting `y` (0-based).
    effects: Vec<Vec<Effects<T>>>,
}

impl<T: Scalar> Engine<T> {
    fn new(config: &Cascade<T>) -> Result<Self> {
        let obs = Observables::<T>::new(config.n)?;
        let rho0 = max_entangled_state::<T>(config.n)?.rho;
        let effects = config
            .bobs
            .iter()
            .map(|p| obs.bob.iter().map(|b| effects(p, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { obs, rho0, effects })
    }

    fn update(&self, rho: &Matrix<T>, bob: usize, y: usize) -> Result<Matrix<T>> {
        luders_update(rho, &self.effects[bob][y], self.obs.dim)
    }

    /// Setting-conditioned states for the Bob at index `upto` (0-based),
    /// each weighted by the probability of that setting, together with the
    /// states received by earlier Bobs.
    fn branches(&self, config: &Cascade<T>, upto: usize) -> Result<Branches<T>> {
        let n = config.n;
        let uniform = T::one() / T::from_usize_lossy(n);
        let mut history = vec![self.rho0.clone()];
        // weighted post-measurement states of the previous Bob, by his setting
        let mut prev: Option<Vec<Matrix<T>>> = None;
        for bob in 0..=upto {
            let incoming: Vec<Matrix<T>> = match &prev {
                None => vec![self.rho0.scale(uniform); n],
                Some(post) => (0..n)
                    .map(|y| {
                        let mut acc = Matrix::zeros(self.rho0.rows(), self.rho0.cols());
                        for (from, w) in post.iter().enumerate() {
                            acc.add_scaled(w, config.transition(from, y))?;
                        }
                        Ok(acc)
                    })
                    .collect::<Result<_>>()?,
            };
            if bob == upto {
                return Ok((incoming, history));
            }
            let post: Vec<Matrix<T>> = incoming
                .iter()
                .enumerate()
                .map(|(y, w)| self.update(w, bob, y))
                .collect::<Result<_>>()?;
            let mut total = Matrix::zeros(self.rho0.rows(), self.rho0.cols());
            for w in &post {
                total.add_scaled(w, T::one())?;
            }
            history.push(total);
            prev = Some(post);
        }
        unreachable!("loop returns at bob == upto")
    }

    /// Unbiased route: a single state updated by the setting-averaged map.
    fn averaged_states(&self, upto: usize) -> Result<Vec<Matrix<T>>> {
        let n = self.obs.n;
        let w = T::one() / T::from_usize_lossy(n);
        let mut states = vec![self.rho0.clone()];
        for bob in 0..upto {
            let rho = states.last().expect("non-empty");
            let mut next = Matrix::zeros(rho.rows(), rho.cols());
            for y in 0..n {
                next.add_scaled(&self.update(rho, bob, y)?, w)?;
            }
            states.push(next);
        }
        Ok(states)
    }

    /// `sum_i (-1)^{x^i_y} <A_i (x) (E^+ - E^-)>` on `rho` for the last Bob.
    fn correlator(&self, rho: &Matrix<T>, bob: usize, y: usize) -> Result<T> {
        let op = kron(&self.obs.signed_alice_sum(y + 1), &self.effects[bob][y].difference())?;
        expectation(rho, &op)
    }
}

fn check_upto<T>(config: &Cascade<T>, upto: usize) -> Result<()> {
    if upto == 0 || upto > config.bobs.len() {
        return Err(Error::IndexOutOfRange {
            index: upto,
            max: config.bobs.len(),
        });
    }
    Ok(())
}

/// The state received by Bob `upto` (1-based), averaged over all earlier
/// setting choices.
pub fn sequential_state<T: Scalar>(config: &Cascade<T>, upto: usize) -> Result<Matrix<T>> {
    check_upto(config, upto)?;
    let engine = Engine::new(config)?;
    match config.bias {
        SettingsBias::Unbiased => Ok(engine
            .averaged_states(upto - 1)?
            .pop()
            .expect("non-empty")),
        SettingsBias::Repeat(_) => {
            let (_, mut history) = engine.branches(config, upto - 1)?;
            Ok(history.pop().expect("non-empty"))
        }
    }
}

/// Runs the cascade and evaluates the Bell expression for the last Bob.
pub fn run<T: Scalar>(config: &Cascade<T>) -> Result<CascadeResult<T>> {
    let engine = Engine::new(config)?;
    let n = config.n;
    let last = config.bobs.len() - 1;
    let (conditioned, history) = match config.bias {
        SettingsBias::Unbiased => {
            let states = engine.averaged_states(last)?;
            let w = T::one() / T::from_usize_lossy(n);
            let rho = states.last().expect("non-empty").scale(w);
            (vec![rho; n], states)
        }
        SettingsBias::Repeat(_) => engine.branches(config, last)?,
    };
    let mut bell_value = T::zero();
    let mut settings_weights = Vec::with_capacity(n);
    for (y, weighted) in conditioned.iter().enumerate() {
        let weight = weighted.trace().re;
        settings_weights.push(weight);
        if weight <= T::zero() {
            continue;
        }
        bell_value = bell_value + engine.correlator(&weighted.scale(T::one() / weight), last, y)?;
    }
    Ok(CascadeResult {
        bell_value,
        per_bob_states: config.keep_states.then_some(history),
        settings_weights,
    })
}

/// Bell value for the last Bob with uniform, independent setting choices.
pub fn bell_value_numeric<T: Scalar>(config: &Cascade<T>) -> Result<T> {
    if config.bias != SettingsBias::Unbiased {
        return Err(Error::Domain("use bell_value_numeric_biased for correlated settings".into()));
    }
    Ok(run(config)?.bell_value)
}

/// Bell value for the last Bob under correlated setting choices.
pub fn bell_value_numeric_biased<T: Scalar>(config: &Cascade<T>) -> Result<T> {
    if !matches!(config.bias, SettingsBias::Repeat(_)) {
        return Err(Error::Domain("configuration has no setting bias".into()));
    }
    Ok(run(config)?.bell_value)
}
