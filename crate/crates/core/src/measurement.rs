//! Two-parameter dichotomic POVMs and their Lüders instrument.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Sharpness `eta` in `(0, 1]` and signed biasedness `alpha`, with
/// `|alpha| + eta <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Povm<T> {
    eta: T,
    alpha: T,
}

impl<T: Scalar> Povm<T> {
    pub fn new(eta: T, alpha: T) -> Result<Self> {
        let err = |reason| Error::InvalidParams {
            eta: eta.as_f64(),
            alpha: alpha.as_f64(),
            reason,
        };
        let slack = T::consistency_tol();
        if !eta.is_finite() || !alpha.is_finite() {
            return Err(err("non-finite value"));
        }
        if eta <= T::zero() || eta > T::one() + slack {
            return Err(err("sharpness must lie in (0, 1]"));
        }
        if alpha.abs() + eta > T::one() + slack {
            return Err(err("|alpha| + eta must not exceed 1"));
        }
        Ok(Self { eta, alpha })
    }

    /// Projective measurement, `eta = 1`, `alpha = 0`.
    pub fn sharp() -> Self {
        Self {
            eta: T::one(),
            alpha: T::zero(),
        }
    }

    /// One-parameter family, `alpha = 0`.
    pub fn unbiased(eta: T) -> Result<Self> {
        Self::new(eta, T::zero())
    }

    /// Boundary family `alpha = 1 - eta`.
    pub fn sum_to_one(eta: T) -> Result<Self> {
        Self::new(eta, T::one() - eta)
    }

    #[inline]
    pub fn eta(&self) -> T {
        self.eta
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Coefficients `(c+, d+, c-, d-)` of `E^± = c± Pi^+ + d± Pi^-`.
    fn coefficients(&self) -> Result<[T; 4]> {
        let half = T::lit(0.5);
        let (a, e) = (self.alpha, self.eta);
        let one = T::one();
        let raw = [
            (one + a + e) * half,
            (one + a - e) * half,
            (one - a - e) * half,
            (one - a + e) * half,
        ];
        let mut out = raw;
        for c in &mut out {
            if *c < -T::consistency_tol() {
                return Err(Error::InvalidParams {
                    eta: e.as_f64(),
                    alpha: a.as_f64(),
                    reason: "negative effect coefficient",
                });
            }
            *c = c.max(T::zero());
        }
        Ok(out)
    }
}

/// The effects `E^+`, `E^-` and their Kraus square roots.
#[derive(Debug, Clone)]
pub struct Effects<T> {
    pub plus: Matrix<T>,
    pub minus: Matrix<T>,
    pub sqrt_plus: Matrix<T>,
    pub sqrt_minus: Matrix<T>,
}

impl<T: Scalar> Effects<T> {
    /// `E^+ - E^-`, which equals `alpha I + eta B`.
    pub fn difference(&self) -> Matrix<T> {
        &self.plus - &self.minus
    }
}

/// Builds the POVM effects for an observable with spectrum `{+1, -1}`.
/// The square roots use the scalar coefficients on the spectral projectors.
pub fn effects<T: Scalar>(params: &Povm<T>, b_obs: &Matrix<T>) -> Result<Effects<T>> {
    let tol = T::consistency_tol();
    if !b_obs.is_hermitian(tol) {
        return Err(Error::Domain("observable is not Hermitian".into()));
    }
    let id = Matrix::identity(b_obs.rows());
    if crate::matrix::frobenius_distance(&(b_obs * b_obs), &id)? > tol {
        return Err(Error::Domain("observable does not square to identity".into()));
    }
    let half = T::lit(0.5);
    let pi_plus = (&id + b_obs).scale(half);
    let pi_minus = (&id - b_obs).scale(half);
    let [cp, dp, cm, dm] = params.coefficients()?;
    let combine = |c: T, d: T| &pi_plus.scale(c) + &pi_minus.scale(d);
    Ok(Effects {
        plus: combine(cp, dp),
        minus: combine(cm, dm),
        sqrt_plus: combine(cp.sqrt(), dp.sqrt()),
        sqrt_minus: combine(cm.sqrt(), dm.sqrt()),
    })
}

fn checked_root<T: Scalar>(radicand: T, params: &Povm<T>) -> Result<T> {
    if radicand < -T::consistency_tol() {
        return Err(Error::InvalidParams {
            eta: params.eta.as_f64(),
            alpha: params.alpha.as_f64(),
            reason: "negative radicand",
        });
    }
    Ok(radicand.max(T::zero()).sqrt())
}

/// Coherence retained by one unsharp measurement:
/// `(sqrt((1+a)^2 - e^2) + sqrt((1-a)^2 - e^2)) / 2`.
pub fn xi<T: Scalar>(params: &Povm<T>) -> Result<T> {
    let (a, e) = (params.alpha, params.eta);
    let one = T::one();
    let r1 = checked_root((one + a - e) * (one + a + e), params)?;
    let r2 = checked_root((one - a - e) * (one - a + e), params)?;
    Ok((r1 + r2) * T::lit(0.5))
}

/// Setting-averaged damping of a Bob observable: `(1 + (n-1) xi) / n`.
pub fn gamma<T: Scalar>(n: usize, params: &Povm<T>) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("bit count n = {n} must be at least 2")));
    }
    let nf = T::from_usize_lossy(n);
    Ok((T::one() + (nf - T::one()) * xi(params)?) / nf)
}

/// Unselective Lüders update on the second factor:
/// `sum_b (I (x) sqrt(E^b)) rho (I (x) sqrt(E^b))`.
pub fn luders_update<T: Scalar>(rho: &Matrix<T>, pair: &Effects<T>, dim_a: usize) -> Result<Matrix<T>> {
    let plus = rho.conjugate_second_factor(&pair.sqrt_plus, dim_a)?;
    let minus = rho.conjugate_second_factor(&pair.sqrt_minus, dim_a)?;
    plus.try_add(&minus)
}
