//! The two entire functions underlying both surface families, their
//! derivatives, and the surfaces themselves.
//!
//! With w = sqrt(x),
//!
//! ```text
//! s(x) = sin(w)/w          c(x) = cos(w)
//! ```
//!
//! Both are entire in x (even in w, so the branch of the square root cancels)
//! and satisfy
//!
//! ```text
//! x*s(x)^2 + c(x)^2 = 1,    s'(x) = (c(x) - s(x))/(2x),    c'(x) = -s(x)/2.
//! ```
//!
//! Near the origin the closed trigonometric forms lose accuracy to
//! cancellation, so inside |x| < 0.25 evaluation switches to the power series
//! in x; the two regimes agree to 1e-13 at the seam (tested). The infinite
//! products over the zero sets converge only like 1/N and are kept solely as
//! a slow cross-check oracle for the test suite.
//!
//! The surfaces:
//!
//! ```text
//! f_A(x, y) = x*s(x)^2 - y^2     = 1 - c(x)^2 - y^2
//! f_D(x, y) = x*s(x)^2 - x*y^2   = 1 - c(x)^2 - x*y^2
//! ```
//!
//! Each is evaluated in both forms; agreement to 1e-12 is the internal
//! consistency check.

use crate::quiver::Family;
use crate::{Cplx, Error, Result};
use num_complex::Complex;
use num_traits::Float;

/// Closed-form / series crossover radius for |x|.
pub const SERIES_RADIUS: f64 = 0.25;

fn two<T: Float>() -> T {
    T::from(2.0).unwrap()
}

/// s(x) = sin(sqrt(x))/sqrt(x) for real x of any float width.
pub fn s<T: Float>(x: T) -> T {
    if x.abs() < T::from(SERIES_RADIUS).unwrap() {
        return s_series(x);
    }
    if x > T::zero() {
        let w = x.sqrt();
        w.sin() / w
    } else {
        // sin(i r)/(i r) = sinh(r)/r on the negative axis
        let r = (-x).sqrt();
        r.sinh() / r
    }
}

/// c(x) = cos(sqrt(x)) for real x of any float width.
pub fn c<T: Float>(x: T) -> T {
    if x.abs() < T::from(SERIES_RADIUS).unwrap() {
        return c_series(x);
    }
    if x > T::zero() {
        x.sqrt().cos()
    } else {
        (-x).sqrt().cosh()
    }
}

/// s'(x), via the series near 0 and (c - s)/(2x) elsewhere.
pub fn s_prime<T: Float>(x: T) -> T {
    if x.abs() < T::from(SERIES_RADIUS).unwrap() {
        return s_prime_series(x);
    }
    (c(x) - s(x)) / (two::<T>() * x)
}

/// c'(x) = -s(x)/2, exact at every x.
pub fn c_prime<T: Float>(x: T) -> T {
    -s(x) / two::<T>()
}

fn s_series<T: Float>(x: T) -> T {
    // sum_k (-x)^k / (2k+1)!
    let mut term = T::one();
    let mut sum = term;
    let mut k = T::one();
    loop {
        term = term * (-x) / ((two::<T>() * k) * (two::<T>() * k + T::one()));
        let next = sum + term;
        if next == sum {
            return sum;
        }
        sum = next;
        k = k + T::one();
    }
}

fn c_series<T: Float>(x: T) -> T {
    // sum_k (-x)^k / (2k)!
    let mut term = T::one();
    let mut sum = term;
    let mut k = T::one();
    loop {
        term = term * (-x) / ((two::<T>() * k - T::one()) * (two::<T>() * k));
        let next = sum + term;
        if next == sum {
            return sum;
        }
        sum = next;
        k = k + T::one();
    }
}

fn s_prime_series<T: Float>(x: T) -> T {
    // sum_k (-1)^(k+1) (k+1) x^k / (2k+3)!,  k >= 0
    let six = T::from(6.0).unwrap();
    let mut term = -T::one() / six;
    let mut sum = term;
    let mut k = T::one();
    loop {
        let ratio = -(k + T::one()) * x
            / (k * (two::<T>() * k + two::<T>()) * (two::<T>() * k + T::one() + two::<T>()));
        term = term * ratio;
        let next = sum + term;
        if next == sum {
            return sum;
        }
        sum = next;
        k = k + T::one();
    }
}

fn check_finite(context: &'static str, z: Cplx) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            context,
            value: if z.re.is_finite() { z.im } else { z.re },
        })
    }
}

/// s at a complex argument. The branch of the square root cancels.
pub fn eval_s(x: Cplx) -> Result<Cplx> {
    check_finite("eval_s", x)?;
    Ok(eval_s_unchecked(x))
}

/// c at a complex argument.
pub fn eval_c(x: Cplx) -> Result<Cplx> {
    check_finite("eval_c", x)?;
    Ok(eval_c_unchecked(x))
}

fn eval_s_unchecked(x: Cplx) -> Cplx {
    if x.norm_sqr() < SERIES_RADIUS * SERIES_RADIUS {
        return complex_series(x, |k| (2.0 * k) * (2.0 * k + 1.0));
    }
    let w = x.sqrt();
    w.sin() / w
}

fn eval_c_unchecked(x: Cplx) -> Cplx {
    if x.norm_sqr() < SERIES_RADIUS * SERIES_RADIUS {
        return complex_series(x, |k| (2.0 * k - 1.0) * (2.0 * k));
    }
    x.sqrt().cos()
}

fn complex_series(x: Cplx, denom: impl Fn(f64) -> f64) -> Cplx {
    let mut term = Cplx::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term = term * (-x) / Complex::from(denom(k));
        let next = sum + term;
        if next == sum {
            return sum;
        }
        sum = next;
        k += 1.0;
    }
}

/// The surface of the requested family at a complex point, in its primary
/// form. `eval_f_forms` exposes both algebraic forms for consistency checks.
pub fn eval_f(family: Family, x: Cplx, y: Cplx) -> Result<Cplx> {
    Ok(eval_f_forms(family, x, y)?.0)
}

/// Both forms of the surface value: (x*s^2-based, 1 - c^2-based).
pub fn eval_f_forms(family: Family, x: Cplx, y: Cplx) -> Result<(Cplx, Cplx)> {
    check_finite("eval_f", x)?;
    check_finite("eval_f", y)?;
    let sv = eval_s_unchecked(x);
    let cv = eval_c_unchecked(x);
    let one = Cplx::new(1.0, 0.0);
    let (primary, alternate) = match family {
        Family::A => (x * sv * sv - y * y, one - cv * cv - y * y),
        Family::D => (x * sv * sv - x * y * y, one - cv * cv - x * y * y),
    };
    Ok((primary, alternate))
}

/// Real-axis surface value, primary form.
pub fn f_real(family: Family, x: f64, y: f64) -> f64 {
    let sv = s(x);
    match family {
        Family::A => x * sv * sv - y * y,
        Family::D => x * sv * sv - x * y * y,
    }
}

/// Truncated product over the zero set of s. Converges like 1/terms; kept as
/// a slow cross-check oracle only.
pub fn product_s(x: f64, terms: usize) -> f64 {
    let mut p = 1.0;
    for n in 1..=terms {
        let zero = (n as f64 * std::f64::consts::PI).powi(2);
        p *= 1.0 - x / zero;
    }
    p
}

/// Truncated product over the zero set of c. Same caveats as [`product_s`].
pub fn product_c(x: f64, terms: usize) -> f64 {
    let mut p = 1.0;
    for n in 1..=terms {
        let zero = ((n as f64 - 0.5) * std::f64::consts::PI).powi(2);
        p *= 1.0 - x / zero;
    }
    p
}
