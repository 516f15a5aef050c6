//! Closed-form bounds, sequential Bell values and critical-sharpness chains.
//!
//! A chain is evaluated with every predecessor at its own critical
//! sharpness: `eta*_1 = bound / tsirelson`, `eta*_k = eta*_{k-1} / gamma_{k-1}`,
//! where `gamma_{k-1}` uses the family's biasedness at `eta*_{k-1}`. A Bob
//! shares the correlation iff `eta*_k < 1`, so the final Bob may measure
//! sharply.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::measurement::{gamma, Povm};
use crate::scalar::Scalar;

/// Largest bit count accepted by the analytic layer.
pub const MAX_ANALYTIC_BITS: usize = 1000;

/// Safety cap on chain length when running until the threshold leaves `(0, 1)`.
pub const MAX_CHAIN_LEN: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Local,
    Pnc,
    Tsirelson,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Local => "local",
            BoundKind::Pnc => "pnc",
            BoundKind::Tsirelson => "tsirelson",
        })
    }
}

/// How each Bob's biasedness is tied to his sharpness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    /// `alpha = 0`.
    OneParam,
    /// `|alpha| = 1 - eta`.
    SumToOne,
    /// `alpha = alpha0` for every Bob.
    FixedAlpha(T),
}

impl<T: Scalar> Family<T> {
    pub fn alpha_for(&self, eta: T) -> T {
        match *self {
            Family::OneParam => T::zero(),
            Family::SumToOne => T::one() - eta,
            Family::FixedAlpha(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::OneParam => "one-param",
            Family::SumToOne => "sum-to-one",
            Family::FixedAlpha(_) => "fixed-alpha",
        }
    }

    /// Human-readable alpha rule, e.g. `alpha=0`, `alpha=1-eta`, `alpha=0.08`.
    pub fn alpha_rule(&self) -> String {
        match self {
            Family::OneParam => "alpha=0".to_string(),
            Family::SumToOne => "alpha=1-eta".to_string(),
            Family::FixedAlpha(a) => format!("alpha={a}"),
        }
    }
}

fn check_bits(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("bit count n = {n} must be at least 2")));
    }
    if n > MAX_ANALYTIC_BITS {
        return Err(Error::SizeLimit {
            what: "bit count n (analytic layer)",
            value: n,
            limit: MAX_ANALYTIC_BITS,
        });
    }
    Ok(())
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// `n * C(n-1, floor((n-1)/2))`.
pub fn local_bound(n: usize) -> Result<BigUint> {
    check_bits(n)?;
    Ok(BigUint::from(n) * binomial(n - 1, (n - 1) / 2))
}

/// `2^{n-1}`.
pub fn pnc_bound(n: usize) -> Result<BigUint> {
    check_bits(n)?;
    Ok(BigUint::one() << (n - 1))
}

/// `2^{n-1} sqrt(n)`.
pub fn tsirelson_value<T: Scalar>(n: usize) -> Result<T> {
    check_bits(n)?;
    Ok(T::lit(2.0).powi(n as i32 - 1) * T::from_usize_lossy(n).sqrt())
}

/// Classical bound as a float (may overflow to infinity for huge `n` in
/// single precision).
pub fn bound_value<T: Scalar>(n: usize, kind: BoundKind) -> Result<T> {
    match kind {
        BoundKind::Local => Ok(T::lit(big_to_f64(&local_bound(n)?))),
        BoundKind::Pnc => Ok(T::lit(2.0).powi(n as i32 - 1)),
        BoundKind::Tsirelson => tsirelson_value(n),
    }
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `x / 2^shift` without overflowing the intermediate.
fn big_over_pow2(x: &BigUint, shift: usize) -> f64 {
    let bits = x.bits() as usize;
    let drop = bits.saturating_sub(60);
    let mantissa = (x >> drop).to_f64().expect("60-bit value fits");
    mantissa * 2f64.powi(drop as i32 - shift as i32)
}

/// `bound / (2^{n-1} sqrt(n))`: the first Bob's critical sharpness.
pub fn bound_ratio<T: Scalar>(n: usize, kind: BoundKind) -> Result<T> {
    check_bits(n)?;
    let sqrt_n = T::from_usize_lossy(n).sqrt();
    match kind {
        BoundKind::Local => {
            let c = binomial(n - 1, (n - 1) / 2);
            Ok(sqrt_n * T::lit(big_over_pow2(&c, n - 1)))
        }
        BoundKind::Pnc => Ok(T::one() / sqrt_n),
        BoundKind::Tsirelson => Ok(T::one()),
    }
}

/// Bell value seen by the last Bob in `params`:
/// `2^{n-1} sqrt(n) eta_k prod_{j<k} gamma_j`.
pub fn bell_value_closed<T: Scalar>(n: usize, params: &[Povm<T>]) -> Result<T> {
    let (last, prior) = params
        .split_last()
        .ok_or_else(|| Error::Domain("at least one Bob is required".into()))?;
    let mut value = tsirelson_value::<T>(n)? * last.eta();
    for p in prior {
        value = value * gamma(n, p)?;
    }
    Ok(value)
}

/// Closed form for correlated setting choices with `alpha = 0`:
/// `2^{n-1} sqrt(n) eta_k prod_{j<k} [p_j + (1 - p_j) sqrt(1 - eta_j^2)]`.
/// `ps` holds one entry per prior Bob.
pub fn bell_value_biased_closed<T: Scalar>(n: usize, etas: &[T], ps: &[T]) -> Result<T> {
    let (last, prior) = etas
        .split_last()
        .ok_or_else(|| Error::Domain("at least one Bob is required".into()))?;
    if ps.len() != prior.len() {
        return Err(Error::LengthMismatch {
            left: ps.len(),
            right: prior.len(),
        });
    }
    Povm::unbiased(*last)?;
    let mut value = tsirelson_value::<T>(n)? * *last;
    for (&eta, &p) in prior.iter().zip(ps) {
        Povm::unbiased(eta)?;
        if !(T::zero()..=T::one()).contains(&p) {
            return Err(Error::Domain(format!("setting bias p = {p} outside [0, 1]")));
        }
        value = value * (p + (T::one() - p) * (T::one() - eta * eta).sqrt());
    }
    Ok(value)
}

/// Critical sharpness values for successive Bobs.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<T> {
    pub n: usize,
    pub kind: BoundKind,
    pub family: Family<T>,
    pub criticals: Vec<T>,
    pub shared_count: usize,
}

impl<T: Scalar> Chain<T> {
    /// POVM parameters of Bob `k` (1-based) at his critical sharpness.
    pub fn params_at(&self, k: usize) -> Result<Povm<T>> {
        let eta = *self.criticals.get(k.wrapping_sub(1)).ok_or(Error::IndexOutOfRange {
            index: k,
            max: self.criticals.len(),
        })?;
        Povm::new(eta, self.family.alpha_for(eta))
    }

    /// Bell value for Bob `k` when every predecessor sits at his critical
    /// sharpness and Bob `k` measures sharply.
    pub fn quantum_value(&self, k: usize) -> Result<T> {
        let mut params = (1..k).map(|j| self.params_at(j)).collect::<Result<Vec<_>>>()?;
        params.push(Povm::sharp());
        bell_value_closed(self.n, &params)
    }
}

/// Builds the critical-sharpness chain, stopping after `k_max` Bobs or at
/// the first threshold `>= 1` (which is included).
pub fn threshold_chain<T: Scalar>(
    n: usize,
    kind: BoundKind,
    family: Family<T>,
    k_max: usize,
) -> Result<Chain<T>> {
    if kind == BoundKind::Tsirelson {
        return Err(Error::Domain("thresholds are defined for the local and pnc bounds".into()));
    }
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    if let Family::FixedAlpha(a) = family {
        if !a.is_finite() || a.abs() >= T::one() {
            return Err(Error::Domain(format!("fixed alpha {a} must satisfy |alpha| < 1")));
        }
    }
    let mut eta = bound_ratio::<T>(n, kind)?;
    let mut criticals = vec![eta];
    while eta < T::one() && criticals.len() < k_max {
        let alpha = family.alpha_for(eta);
        if alpha.abs() + eta > T::one() + T::consistency_tol() {
            return Err(Error::InfeasibleFamily {
                step: criticals.len(),
                alpha: alpha.as_f64(),
                eta: eta.as_f64(),
            });
        }
        eta = eta / gamma(n, &Povm::new(eta, alpha)?)?;
        criticals.push(eta);
    }
    let shared_count = criticals.iter().filter(|&&e| e < T::one()).count();
    Ok(Chain {
        n,
        kind,
        family,
        criticals,
        shared_count,
    })
}

/// Largest `k` with `eta*_k < 1`.
pub fn max_sequential_bobs<T: Scalar>(n: usize, kind: BoundKind, family: Family<T>) -> Result<usize> {
    let chain = threshold_chain(n, kind, family, MAX_CHAIN_LEN)?;
    if chain.criticals.last().is_some_and(|&e| e < T::one()) {
        return Err(Error::SizeLimit {
            what: "chain length",
            value: chain.criticals.len(),
            limit: MAX_CHAIN_LEN,
        });
    }
    Ok(chain.shared_count)
}

/// Large-`n` estimate `1 / sqrt(n - k + 1)` of the one-parameter
/// contextuality threshold for Bob `k`.
pub fn approx_threshold<T: Scalar>(n: usize, k: usize) -> Result<T> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(T::one() / T::from_usize_lossy(n - k + 1).sqrt())
}

/// Smallest `n` with `n >= k - 1 + 1/eta_final^2`.
pub fn min_n_for_k<T: Scalar>(k: usize, eta_final: T) -> Result<usize> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if !(eta_final > T::zero() && eta_final <= T::one()) {
        return Err(Error::Domain(format!("final sharpness {eta_final} outside (0, 1]")));
    }
    let bound = T::from_usize_lossy(k - 1) + T::one() / (eta_final * eta_final);
    // absorb rounding in 1/eta^2 so exact integers are not bumped up
    let slack = T::epsilon() * T::lit(64.0) * bound;
    Ok((bound - slack).ceil().to_usize().expect("finite positive bound"))
}

/// Which upper estimate of the chain step to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepApprox {
    /// `eta / sqrt(1 - eta^2)`, bounding the one-parameter step.
    OneParam,
    /// `eta / sqrt(1 - eta)`, bounding the sum-to-one step.
    SumToOne,
}

pub fn case_i_recursion<T: Scalar>(eta_prev: T, variant: StepApprox) -> Result<T> {
    if !(eta_prev > T::zero() && eta_prev < T::one()) {
        return Err(Error::Domain(format!("previous sharpness {eta_prev} outside (0, 1)")));
    }
    Ok(match variant {
        StepApprox::OneParam => eta_prev / (T::one() - eta_prev * eta_prev).sqrt(),
        StepApprox::SumToOne => eta_prev / (T::one() - eta_prev).sqrt(),
    })
}

/// The chained sum-to-one expression in the form it is usually quoted:
///
/// ```text
/// [ eta_2^{2^{k-1}} ( (1-eta_k)(1-eta_{k-1})^2 (1-eta_{k-2})^4 ... (1-eta_2)^{2^{k-2}} )^{-1} ]^{-1/2}
/// ```
///
/// `etas[j]` holds `eta_{j+1}`; requires `3 <= k <= min(etas.len(), 30)`.
/// It does not agree with iterating [`case_i_recursion`]; see
/// [`sum_to_one_iterated`].
pub fn sum_to_one_quoted_bound<T: Scalar>(etas: &[T], k: usize) -> Result<T> {
    if k < 3 || k > etas.len() || k > 30 {
        return Err(Error::Domain(format!("need 3 <= k <= {} (and k <= 30)", etas.len())));
    }
    let eta2 = etas[1];
    let mut denom = T::one();
    for m in 0..=(k - 2) {
        denom = denom * (T::one() - etas[k - 1 - m]).powi(1 << m);
    }
    let inner = eta2.powi(1 << (k - 1)) / denom;
    Ok(inner.powf(T::lit(-0.5)))
}

/// Iterates `eta_{j+1} = eta_j / sqrt(1 - eta_j)` from `eta_2` and returns the
/// closed form `eta_k = eta_2 / sqrt(prod_{j=2}^{k-1} (1 - eta_j))` together
/// with the iterated value, for `k >= 2`.
pub fn sum_to_one_iterated<T: Scalar>(eta2: T, k: usize) -> Result<(T, T)> {
    if k < 2 {
        return Err(Error::Domain("k must be at least 2".into()));
    }
    let mut etas = vec![eta2];
    while etas.len() < k - 1 {
        let last = *etas.last().expect("non-empty");
        etas.push(case_i_recursion(last, StepApprox::SumToOne)?);
    }
    let prod = etas[..k - 2].iter().fold(T::one(), |acc, &e| acc * (T::one() - e));
    let closed = eta2 / prod.sqrt();
    let iterated = etas[k - 2];
    Ok((closed, iterated))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize, kind: BoundKind, family: Family<f64>) -> Vec<f64> {
        threshold_chain(n, kind, family, 1000).unwrap().criticals
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn bounds() {
        let l: Vec<u64> = (2..=5).map(|n| local_bound(n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(l, [2, 6, 12, 30]);
        let p: Vec<u64> = [2, 3, 5].iter().map(|&n| pnc_bound(n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(p, [2, 4, 16]);
        assert_eq!(local_bound(2).unwrap(), pnc_bound(2).unwrap());
        for n in 3..=100 {
            assert!(local_bound(n).unwrap() > pnc_bound(n).unwrap());
        }
        assert!(local_bound(1).is_err());
        assert!(local_bound(1001).is_err());
        // 100 * C(99, 49)
        assert_eq!(
            local_bound(100).unwrap().to_string(),
            (BigUint::from(100u32) * binomial(99, 49)).to_string()
        );
        assert_eq!(binomial(99, 49).to_string(), "50445672272782096667406248628");
    }

    #[test]
    fn tsirelson_values() {
        assert!((tsirelson_value::<f64>(2).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((tsirelson_value::<f64>(3).unwrap() - 4.0 * 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(tsirelson_value::<f64>(4).unwrap(), 16.0);
    }

    #[test]
    fn bound_ratio_matches_direct_division() {
        for n in 2..=60 {
            let direct = bound_value::<f64>(n, BoundKind::Local).unwrap() / tsirelson_value::<f64>(n).unwrap();
            let ratio = bound_ratio::<f64>(n, BoundKind::Local).unwrap();
            assert!((direct - ratio).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn closed_bell_values() {
        let s = Povm::<f64>::sharp();
        assert!((bell_value_closed(2, &[s]).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let e = Povm::unbiased(0.6).unwrap();
        for n in 2..8 {
            let want = tsirelson_value::<f64>(n).unwrap() * 0.6;
            assert!((bell_value_closed(n, &[e]).unwrap() - want).abs() < 1e-12);
        }
        let h = Povm::unbiased(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let v = bell_value_closed(2, &[h, s]).unwrap();
        assert!((v - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(bell_value_closed::<f64>(2, &[]).is_err());
    }

    #[test]
    fn biased_closed_form() {
        let r2 = 2f64.sqrt();
        let v = bell_value_biased_closed(2, &[0.8, 0.8, 0.8], &[1.0, 1.0]).unwrap();
        assert!((v - 2.0 * r2 * 0.8).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = bell_value_biased_closed(2, &[h, h], &[0.0]).unwrap();
        assert!((v - r2).abs() < 1e-12);
        assert!(bell_value_biased_closed(2, &[h, h], &[]).is_err());
        assert!(bell_value_biased_closed(2, &[h, h], &[1.5]).is_err());
    }

    #[test]
    fn biased_at_uniform_reduces_to_unbiased() {
        for n in 2..=10 {
            let etas = [0.61, 0.72, 0.83, 0.94, 0.55];
            for k in 1..=5 {
                let ps = vec![1.0 / n as f64; k - 1];
                let params: Vec<_> = etas[..k].iter().map(|&e| Povm::unbiased(e).unwrap()).collect();
                let a = bell_value_biased_closed(n, &etas[..k], &ps).unwrap();
                let b = bell_value_closed(n, &params).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.max(1.0), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn chsh_nonlocality_chains() {
        let one = chain(2, BoundKind::Local, Family::OneParam);
        assert_close(&one, &[std::f64::consts::FRAC_1_SQRT_2, 0.828_427_1, 1.062_020_1], 1e-6);
        let sum = chain(2, BoundKind::Local, Family::SumToOne);
        assert_close(&sum, &[std::f64::consts::FRAC_1_SQRT_2, 0.917_607_8, 1.425_919_2], 1e-6);
        let c = threshold_chain::<f64>(2, BoundKind::Local, Family::OneParam, 10).unwrap();
        assert_eq!(c.shared_count, 2);
        assert!((c.quantum_value(1).unwrap() - 2.828_427).abs() < 1e-6);
        assert!((c.quantum_value(2).unwrap() - 2.414_214).abs() < 1e-6);
    }

    #[test]
    fn gisin_nonlocality_chain() {
        let c = chain(3, BoundKind::Local, Family::OneParam);
        assert_close(&c, &[0.866_025_4, 1.299_038_1], 1e-6);
        for n in 3..=20 {
            assert_eq!(max_sequential_bobs::<f64>(n, BoundKind::Local, Family::OneParam).unwrap(), 1);
        }
    }

    #[test]
    fn contextuality_chains() {
        assert_close(
            &chain(3, BoundKind::Pnc, Family::OneParam),
            &[0.577_350_3, 0.657_825_8, 0.787_394_0, 1.057_898_7],
            1e-6,
        );
        assert_close(
            &chain(4, BoundKind::Pnc, Family::OneParam),
            &[0.5, 0.555_852_6, 0.636_379_7, 0.768_081_0, 1.051_784_5],
            1e-6,
        );
        assert_close(
            &chain(3, BoundKind::Pnc, Family::SumToOne),
            &[0.577_350_3, 0.752_990_2, 1.132_882_9],
            1e-6,
        );
        assert_close(
            &chain(3, BoundKind::Pnc, Family::FixedAlpha(0.18)),
            &[0.577_350_3, 0.663_264_2, 0.809_479_6, 1.220_627_1],
            1e-6,
        );
        assert_eq!(max_sequential_bobs::<f64>(4, BoundKind::Pnc, Family::OneParam).unwrap(), 4);
        assert_eq!(max_sequential_bobs::<f64>(100, BoundKind::Pnc, Family::SumToOne).unwrap(), 18);
    }

    #[test]
    fn chain_respects_k_max() {
        let c = threshold_chain::<f64>(4, BoundKind::Pnc, Family::OneParam, 2).unwrap();
        assert_eq!(c.criticals.len(), 2);
        assert_eq!(c.shared_count, 2);
        assert!(threshold_chain::<f64>(4, BoundKind::Pnc, Family::OneParam, 0).is_err());
        assert!(threshold_chain::<f64>(4, BoundKind::Tsirelson, Family::OneParam, 3).is_err());
    }

    #[test]
    fn fixed_alpha_infeasibility_reports_step() {
        // eta*_1 = 1/sqrt(3) = 0.577, so alpha = 0.5 breaks the first prior Bob
        let err = threshold_chain::<f64>(3, BoundKind::Pnc, Family::FixedAlpha(0.5), 10).unwrap_err();
        assert!(matches!(err, Error::InfeasibleFamily { step: 1, .. }), "{err:?}");
        // 0.577, 0.680, 0.886: the third Bob's sharpness is out of reach
        let err = threshold_chain::<f64>(3, BoundKind::Pnc, Family::FixedAlpha(0.3), 10).unwrap_err();
        assert!(matches!(err, Error::InfeasibleFamily { step: 3, .. }), "{err:?}");
        assert!(threshold_chain::<f64>(3, BoundKind::Pnc, Family::FixedAlpha(1.0), 10).is_err());
    }

    #[test]
    fn chain_steps_are_increasing_and_recomputable() {
        for n in 2..=100 {
            for family in [Family::OneParam, Family::SumToOne] {
                for kind in [BoundKind::Local, BoundKind::Pnc] {
                    let c = threshold_chain::<f64>(n, kind, family, 1000).unwrap();
                    for w in c.criticals.windows(2) {
                        assert!(w[1] > w[0]);
                        let alpha = family.alpha_for(w[0]);
                        let g = gamma(n, &Povm::new(w[0], alpha).unwrap()).unwrap();
                        assert!((w[1] - w[0] / g).abs() < 1e-12);
                    }
                    // the direct product form agrees with the step form
                    let last = c.criticals.len();
                    let prior: Vec<_> = (1..last).map(|j| c.params_at(j).unwrap()).collect();
                    let prod: f64 = prior.iter().map(|p| gamma(n, p).unwrap()).product();
                    let direct = bound_ratio::<f64>(n, kind).unwrap() / prod;
                    assert!((direct - c.criticals[last - 1]).abs() < 1e-9 * direct);
                }
            }
        }
    }

    #[test]
    fn n2_local_and_pnc_chains_coincide() {
        for family in [Family::OneParam, Family::SumToOne, Family::FixedAlpha(0.1)] {
            let l = chain(2, BoundKind::Local, family);
            assert_close(&l, &chain(2, BoundKind::Pnc, family), 1e-12);
        }
    }

    #[test]
    fn fixed_alpha_tends_to_one_param() {
        let base = chain(6, BoundKind::Pnc, Family::OneParam);
        let near = chain(6, BoundKind::Pnc, Family::FixedAlpha(1e-6));
        assert_close(&near, &base, 1e-9);
    }

    #[test]
    fn first_bob_local_threshold_plateau() {
        for n in 50..=100 {
            let t = bound_ratio::<f64>(n, BoundKind::Local).unwrap();
            assert!((0.78..=0.84).contains(&t), "n = {n}: {t}");
        }
        let far = bound_ratio::<f64>(1000, BoundKind::Local).unwrap();
        assert!((far - (2.0 / std::f64::consts::PI).sqrt()).abs() < 2e-3);
    }

    #[test]
    fn approximation_examples() {
        let n = 7;
        assert!((approx_threshold::<f64>(n, 1).unwrap() - 1.0 / 7f64.sqrt()).abs() < 1e-15);
        assert_eq!(approx_threshold::<f64>(n, n).unwrap(), 1.0);
        let a = approx_threshold::<f64>(4, 2).unwrap();
        let exact = chain(4, BoundKind::Pnc, Family::OneParam)[1];
        assert!((a - 0.577_350_3).abs() < 1e-7 && (exact - 0.555_852_6).abs() < 1e-7);
        assert!(a > exact);
        assert!(approx_threshold::<f64>(3, 4).is_err());
        assert!(approx_threshold::<f64>(3, 0).is_err());
    }

    #[test]
    fn approximation_dominates_exact_chain() {
        for n in 2..=20 {
            let c = threshold_chain::<f64>(n, BoundKind::Pnc, Family::OneParam, n).unwrap();
            for (k, &exact) in c.criticals.iter().enumerate() {
                let k = k + 1;
                assert!(approx_threshold::<f64>(n, k).unwrap() >= exact - 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn min_n_examples() {
        for k in 1..=50 {
            assert_eq!(min_n_for_k(k, 1.0f64).unwrap(), k);
        }
        assert_eq!(min_n_for_k(1, 1.0 / 3f64.sqrt()).unwrap(), 3);
        assert_eq!(min_n_for_k(5, 0.9f64).unwrap(), 6);
        assert!(min_n_for_k(5, 0.0f64).is_err());
        assert!(min_n_for_k(0, 0.5f64).is_err());
    }

    #[test]
    fn recursion_variants() {
        for n in 2..30 {
            let eta = 1.0 / (n as f64).sqrt();
            let next = case_i_recursion(eta, StepApprox::OneParam).unwrap();
            if n > 1 {
                assert!((next - 1.0 / ((n - 1) as f64).sqrt()).abs() < 1e-12);
            }
        }
        let v = case_i_recursion(0.5f64, StepApprox::SumToOne).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(case_i_recursion(1.0f64, StepApprox::OneParam).is_err());
    }

    #[test]
    fn recursion_variants_dominate_exact_steps() {
        for n in 2..40 {
            for i in 1..100 {
                let eta = i as f64 / 100.0;
                let exact_one = eta / gamma(n, &Povm::unbiased(eta).unwrap()).unwrap();
                assert!(case_i_recursion(eta, StepApprox::OneParam).unwrap() >= exact_one);
                let exact_sum = eta / gamma(n, &Povm::sum_to_one(eta).unwrap()).unwrap();
                assert!(case_i_recursion(eta, StepApprox::SumToOne).unwrap() >= exact_sum);
            }
        }
    }

    #[test]
    fn iterated_sum_to_one_closed_form_is_consistent() {
        for k in 2..=5 {
            let (closed, iterated) = sum_to_one_iterated(0.2f64, k).unwrap();
            assert!((closed - iterated).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn quoted_sum_to_one_form_disagrees_with_recursion() {
        let mut etas = vec![0.1f64, 0.2];
        for _ in 0..3 {
            let last = *etas.last().unwrap();
            etas.push(case_i_recursion(last, StepApprox::SumToOne).unwrap());
        }
        for k in 3..=5 {
            let quoted = sum_to_one_quoted_bound(&etas, k).unwrap();
            assert!((quoted - etas[k - 1]).abs() > 1e-3, "k = {k}");
        }
        assert!(sum_to_one_quoted_bound(&etas, 2).is_err());
    }

    #[test]
    fn single_precision_chain() {
        let c = threshold_chain::<f32>(3, BoundKind::Pnc, Family::OneParam, 10).unwrap();
        assert_eq!(c.shared_count, 3);
        assert!((c.criticals[1] - 0.657_825_8).abs() < 1e-5);
    }
}
