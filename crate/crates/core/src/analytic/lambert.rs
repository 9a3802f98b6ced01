use crate::error::{Error, Result};
use crate::real::Real;

/// Principal branch of the Lambert W function for `x >= 0`.
pub fn lambert_w<T: Real>(x: T) -> Result<T> {
    if !(x >= T::zero()) || x.is_infinite() {
        return Err(Error::domain("lambert_w", format!("need finite x >= 0, got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let one = T::one();
    let two = T::lit(2.0);
    let mut w = if x < T::lit(0.25) {
        // W(x) = x - x^2 + 3/2 x^3 - 8/3 x^4 + ...
        x * (one - x * (one - x * (T::lit(1.5) - x * T::lit(8.0 / 3.0))))
    } else if x <= T::E() {
        // Winitzki's approximation
        let l = x.ln_1p();
        l * (one - l.ln_1p() / (two + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    let tol = T::lit(1e-13).max(T::lit(4.0) * T::epsilon());
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        let step = f / (ew * wp1 - (w + two) * f / (two * wp1));
        w = w - step;
        if step.abs() <= tol * (one + w.abs()) {
            break;
        }
    }
    Ok(w)
}
