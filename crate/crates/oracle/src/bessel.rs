use std::f64::consts::PI;

use crate::{OracleError, Result};

const PANELS: usize = 4096;

/// `J_m(x) = (1/pi) int_0^pi cos(m t - x sin t) dt` by the composite
/// trapezoidal rule. The integrand extends to an even, 2 pi periodic analytic
/// function, so the rule converges geometrically.
pub fn bessel_quadrature(m: i32, x: f64) -> Result<f64> {
    if m.unsigned_abs() > 60 {
        return Err(OracleError::Domain {
            name: "order",
            value: f64::from(m),
            domain: "|m| <= 60",
        });
    }
    if x.is_nan() || x.abs() > 50.0 {
        return Err(OracleError::Domain {
            name: "argument",
            value: x,
            domain: "|x| <= 50",
        });
    }
    let h = PI / PANELS as f64;
    let m = f64::from(m);
    let f = |t: f64| (m * t - x * t.sin()).cos();
    let interior: f64 = (1..PANELS).map(|i| f(i as f64 * h)).sum();
    Ok(h * (interior + 0.5 * (f(0.0) + f(PI))) / PI)
}
