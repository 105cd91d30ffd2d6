//! Integer-order Bessel functions of the first kind.
//!
//! All orders `J_0 .. J_N` are produced by one downward (Miller) recurrence
//! started well above both `N` and `|x|`, then normalized with
//! `J_0 + 2 sum_k J_{2k} = 1`.

use crate::{Result, WalkError};

/// Largest `|x|` for which accuracy of 1e-12 is validated.
pub const MAX_ARGUMENT: f64 = 50.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

/// `J_m(x)` for any integer order.
pub fn bessel_j(m: i32, x: f64) -> Result<f64> {
    let order = m.unsigned_abs() as usize;
    let value = bessel_j_orders(order, x)?[order];
    Ok(if m < 0 && order % 2 == 1 {
        -value
    } else {
        value
    })
}

/// `[J_0(x), J_1(x), ..., J_{max_order}(x)]`.
pub fn bessel_j_orders(max_order: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(WalkError::Domain {
            name: "bessel argument",
            value: x,
            domain: "|x| <= 50",
        });
    }
    let mut out = vec![0.0; max_order + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }

    let ax = x.abs();
    let top = max_order.max(ax.ceil() as usize) + 60;
    let start = top + top % 2;

    let mut next = 0.0;
    let mut current = 1.0;
    let mut even_sum = 0.0;
    for n in (1..=start).rev() {
        if n <= max_order {
            out[n] = current;
        }
        if n % 2 == 0 {
            even_sum += current;
        }
        let previous = (2.0 * n as f64 / ax) * current - next;
        next = current;
        current = previous;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_FACTOR;
            next *= RESCALE_FACTOR;
            even_sum *= RESCALE_FACTOR;
            out.iter_mut().for_each(|v| *v *= RESCALE_FACTOR);
        }
    }
    out[0] = current;

    let norm = current + 2.0 * even_sum;
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    Ok(out)
}
