//! Torsion points, lattice coordinates and finite subgroups of the torus.

use num_complex::Complex64;
use num_integer::Integer;

use super::{Period, ThetaEmbedding, ThetaError, TorusPoint};

/// Tolerance, in lattice coordinates, for identifying two torus points.
pub const LATTICE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionPoint {
    pub point: TorusPoint,
    /// Requested order.
    pub order: u32,
    /// Order of the point after cancelling common factors.
    pub actual_order: u32,
}

impl TorsionPoint {
    /// True when the point generates a group of the requested order. The
    /// identity never counts, even for `order = 1`.
    pub fn has_exact_order(&self) -> bool {
        self.order > 1 && self.actual_order == self.order
    }
}

/// The point `(a + b tau) / order` on a curve, or `(D a + Omega b) / order`
/// on a surface with `D = diag(1, d)`. `a` and `b` have one entry per
/// complex dimension.
pub fn torsion_point(
    emb: &ThetaEmbedding,
    a: &[i64],
    b: &[i64],
    order: u32,
) -> Result<TorsionPoint, ThetaError> {
    if order == 0 {
        return Err(ThetaError::ZeroOrder);
    }
    let g = usize::from(emb.genus());
    if a.len() != g || b.len() != g {
        return Err(ThetaError::GenusMismatch {
            point: a.len().max(b.len()) as u8,
            embedding: emb.genus(),
        });
    }
    let common = a
        .iter()
        .chain(b)
        .fold(i64::from(order), |acc, &x| acc.gcd(&x));
    let actual_order = (i64::from(order) / common) as u32;
    let inv = 1.0 / f64::from(order);
    let point = match emb.period() {
        Period::Elliptic(tau) => TorusPoint::Elliptic((a[0] as f64 + tau * b[0] as f64) * inv),
        Period::Surface(omega) => {
            let d = f64::from(emb.degree());
            let p0 = a[0] as f64 + omega[0][0] * b[0] as f64 + omega[0][1] * b[1] as f64;
            let p1 = d * a[1] as f64 + omega[1][0] * b[0] as f64 + omega[1][1] * b[1] as f64;
            TorusPoint::Surface([p0 * inv, p1 * inv])
        }
    };
    Ok(TorsionPoint {
        point,
        order,
        actual_order,
    })
}

/// `{0, g, 2g, ...}` for the actual order of `g`.
pub fn cyclic_subgroup(generator: &TorsionPoint) -> Vec<TorusPoint> {
    let zero = match generator.point {
        TorusPoint::Elliptic(_) => TorusPoint::Elliptic(Complex64::new(0.0, 0.0)),
        TorusPoint::Surface(_) => TorusPoint::Surface([Complex64::new(0.0, 0.0); 2]),
    };
    let mut out = vec![zero];
    for i in 1..generator.actual_order {
        let next = out[i as usize - 1].add(&generator.point);
        out.push(next);
    }
    out
}

/// Real coordinates of `z` in the lattice basis: `(u, v)` with
/// `z = u + v tau`, or `(u0, u1, v0, v1)` with `z = D u + Omega v`.
pub fn lattice_coordinates(emb: &ThetaEmbedding, z: &TorusPoint) -> Vec<f64> {
    match (emb.period(), z) {
        (Period::Elliptic(tau), TorusPoint::Elliptic(z)) => {
            let v = z.im / tau.im;
            vec![z.re - v * tau.re, v]
        }
        (Period::Surface(omega), TorusPoint::Surface(z)) => {
            let y = [
                [omega[0][0].im, omega[0][1].im],
                [omega[1][0].im, omega[1][1].im],
            ];
            let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
            let v0 = (y[1][1] * z[0].im - y[0][1] * z[1].im) / det;
            let v1 = (-y[1][0] * z[0].im + y[0][0] * z[1].im) / det;
            let u0 = z[0].re - omega[0][0].re * v0 - omega[0][1].re * v1;
            let u1 =
                (z[1].re - omega[1][0].re * v0 - omega[1][1].re * v1) / f64::from(emb.degree());
            vec![u0, u1, v0, v1]
        }
        _ => panic!("genus mismatch between embedding and point"),
    }
}

/// Point with the given lattice coordinates.
pub fn from_lattice_coordinates(emb: &ThetaEmbedding, coords: &[f64]) -> TorusPoint {
    match emb.period() {
        Period::Elliptic(tau) => TorusPoint::Elliptic(coords[0] + tau * coords[1]),
        Period::Surface(omega) => {
            let d = f64::from(emb.degree());
            let (u0, u1, v0, v1) = (coords[0], coords[1], coords[2], coords[3]);
            TorusPoint::Surface([
                u0 + omega[0][0] * v0 + omega[0][1] * v1,
                d * u1 + omega[1][0] * v0 + omega[1][1] * v1,
            ])
        }
    }
}

/// Representative of `z` in the half-open fundamental parallelogram.
pub fn reduce(emb: &ThetaEmbedding, z: &TorusPoint) -> TorusPoint {
    let coords: Vec<f64> = lattice_coordinates(emb, z)
        .into_iter()
        .map(|x| x - x.floor())
        .collect();
    from_lattice_coordinates(emb, &coords)
}

/// Distance on `R^n / Z^n` between lattice coordinates (max norm).
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(1.0);
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

/// Whether `points` is closed under addition modulo the lattice.
pub fn is_subgroup(emb: &ThetaEmbedding, points: &[TorusPoint]) -> bool {
    if points.is_empty() {
        return false;
    }
    let coords: Vec<Vec<f64>> = points.iter().map(|p| lattice_coordinates(emb, p)).collect();
    for p in points {
        for q in points {
            let s = lattice_coordinates(emb, &p.add(q));
            if !coords.iter().any(|c| torus_distance(c, &s) <= LATTICE_TOL) {
                return false;
            }
        }
    }
    true
}
