//! Truncated lattice sums for theta functions with characteristics.
//!
//! `theta[a, 0](w, T) = sum_r exp(pi i (r+a)^2 T + 2 pi i (r+a) w)`. The
//! modulus of a term is a Gaussian in `x = r + a` centred at
//! `-Im(w) / Im(T)`; only indices inside the window around that centre are
//! summed.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ThetaError, ThetaValues, MAX_EXPONENT};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub(super) fn elliptic(
    tau: Complex64,
    m: u32,
    window: f64,
    z: Complex64,
) -> Result<ThetaValues, ThetaError> {
    let mf = f64::from(m);
    let big_t = tau * mf;
    let w = z * mf;
    let t = big_t.im;
    let centre = -w.im / t;
    let peak_exponent = PI * w.im * w.im / t;
    if peak_exponent > MAX_EXPONENT {
        return Err(ThetaError::OutOfRange(peak_exponent));
    }

    let mut values = Vec::with_capacity(m as usize);
    let mut derivatives = Vec::with_capacity(m as usize);
    for j in 0..m {
        let a = f64::from(j) / mf;
        let lo = (centre - a - window).ceil() as i64;
        let hi = (centre - a + window).floor() as i64;
        let mut value = Complex64::new(0.0, 0.0);
        let mut derivative = Complex64::new(0.0, 0.0);
        for r in lo..=hi {
            let x = r as f64 + a;
            let term = (I * PI * x * x * big_t + 2.0 * I * PI * x * w).exp();
            value += term;
            // d/dz of exp(2 pi i x m z)
            derivative += 2.0 * I * PI * x * mf * term;
        }
        values.push(value);
        derivatives.push(derivative);
    }
    Ok(ThetaValues {
        values,
        derivatives,
    })
}

pub(super) fn surface(
    omega: &[[Complex64; 2]; 2],
    d: u32,
    window: f64,
    radius: u32,
    z: &[Complex64; 2],
    direction: [Complex64; 2],
) -> Result<ThetaValues, ThetaError> {
    let y = [
        [omega[0][0].im, omega[0][1].im],
        [omega[1][0].im, omega[1][1].im],
    ];
    let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
    let b = [z[0].im, z[1].im];
    // centre = -Y^{-1} Im z
    let centre = [
        -(y[1][1] * b[0] - y[0][1] * b[1]) / det,
        -(-y[1][0] * b[0] + y[0][0] * b[1]) / det,
    ];
    let quad = |v: [f64; 2]| {
        v[0] * (y[0][0] * v[0] + y[0][1] * v[1]) + v[1] * (y[1][0] * v[0] + y[1][1] * v[1])
    };
    let peak_exponent = PI * quad(centre);
    if peak_exponent > MAX_EXPONENT {
        return Err(ThetaError::OutOfRange(peak_exponent));
    }

    let bound = window * window;
    let r = f64::from(radius);
    let df = f64::from(d);
    let mut values = Vec::with_capacity(d as usize);
    let mut derivatives = Vec::with_capacity(d as usize);
    for j in 0..d {
        let ch = [0.0, f64::from(j) / df];
        let mut value = Complex64::new(0.0, 0.0);
        let mut derivative = Complex64::new(0.0, 0.0);
        let lo0 = (centre[0] - ch[0] - r).ceil() as i64;
        let hi0 = (centre[0] - ch[0] + r).floor() as i64;
        let lo1 = (centre[1] - ch[1] - r).ceil() as i64;
        let hi1 = (centre[1] - ch[1] + r).floor() as i64;
        for n0 in lo0..=hi0 {
            for n1 in lo1..=hi1 {
                let x = [n0 as f64 + ch[0], n1 as f64 + ch[1]];
                if quad([x[0] - centre[0], x[1] - centre[1]]) > bound {
                    continue;
                }
                let form = omega[0][0] * (x[0] * x[0])
                    + (omega[0][1] + omega[1][0]) * (x[0] * x[1])
                    + omega[1][1] * (x[1] * x[1]);
                let linear = z[0] * x[0] + z[1] * x[1];
                let term = (I * PI * form + 2.0 * I * PI * linear).exp();
                value += term;
                derivative += 2.0 * I * PI * (direction[0] * x[0] + direction[1] * x[1]) * term;
            }
        }
        values.push(value);
        derivatives.push(derivative);
    }
    Ok(ThetaValues {
        values,
        derivatives,
    })
}
