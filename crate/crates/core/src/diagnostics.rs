//! Error norms against exact solutions and scalar diagnostics of soliton
//! fields.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::grid::{Field, UniformGrid};
use crate::spline::WeightSet;
use crate::ssprk::SolverState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub time: f64,
    pub dt: Option<f64>,
    pub nx: usize,
    pub ny: usize,
    pub l_inf: f64,
    pub rms: f64,
}

impl ErrorReport {
    pub fn at(mut self, time: f64, dt: f64) -> Self {
        self.time = time;
        self.dt = Some(dt);
        self
    }
}

/// Maximum and root-mean-square nodal difference.
pub fn error_norms(numerical: &Field, exact: &Field) -> Result<ErrorReport> {
    let g = numerical.grid();
    if g != exact.grid() {
        return Err(Error::InvalidGrid(
            "error norms need fields on the same grid".into(),
        ));
    }
    let mut l_inf: f64 = 0.0;
    let mut sum_sq = 0.0;
    for (p, q) in numerical.values().iter().zip(exact.values().iter()) {
        let e = (p - q).abs();
        l_inf = l_inf.max(e);
        sum_sq += e * e;
    }
    Ok(ErrorReport {
        time: 0.0,
        dt: None,
        nx: g.nx,
        ny: g.ny,
        l_inf,
        rms: (sum_sq / g.len() as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDiagnostic {
    pub time: f64,
    /// x coordinate of the peak of `|sin(u/2)|`.
    pub radius: f64,
    pub amplitude: f64,
    /// Set when the scanned line carries no signal at all.
    pub degenerate: bool,
}

/// Index of the grid line `y = y_j` closest to `y = 0`; ties go to the
/// lower line.
fn line_nearest_zero(grid: &UniformGrid) -> usize {
    (0..grid.ny)
        .min_by(|&p, &q| grid.y(p).abs().total_cmp(&grid.y(q).abs()))
        .expect("grid has nodes")
}

/// Locates the ring front: the `x > 0` node on the grid line nearest
/// `y = 0` where `|sin(u/2)|` is largest. Ties go to the smaller `x`.
pub fn ring_radius(u: &Field) -> RingDiagnostic {
    let g = u.grid();
    let j = line_nearest_zero(g);
    let mut best: Option<(f64, f64)> = None;
    for i in (0..g.nx).filter(|&i| g.x(i) > 0.0) {
        let amp = (0.5 * u.get(i, j)).sin().abs();
        if best.is_none_or(|(_, a)| amp > a) {
            best = Some((g.x(i), amp));
        }
    }
    let (radius, amplitude) = best.unwrap_or((0.0, 0.0));
    RingDiagnostic {
        time: 0.0,
        radius,
        amplitude,
        degenerate: amplitude == 0.0,
    }
}

/// Diagonal through the origin to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    /// The line `y = x`.
    Main,
    /// The line `y = -x`.
    Anti,
}

/// Distance from the origin of the `|sin(u/2)|` peak along a diagonal,
/// scanning nodes with `x > 0`. Needs a square grid centred on the origin
/// so that the diagonal passes through nodes.
pub fn diagonal_radius(u: &Field, diagonal: Diagonal) -> Result<f64> {
    let g = u.grid();
    let centred = (g.a + g.b).abs() < 1e-12 && (g.c + g.d).abs() < 1e-12;
    if g.nx != g.ny || (g.dx - g.dy).abs() > 1e-12 || !centred {
        return Err(Error::InvalidGrid(
            "diagonal scans need a square grid centred on the origin".into(),
        ));
    }
    let n = g.nx;
    let mut best = (0.0, -1.0);
    for i in (0..n).filter(|&i| g.x(i) > 0.0) {
        let j = match diagonal {
            Diagonal::Main => i,
            Diagonal::Anti => n - 1 - i,
        };
        let amp = (0.5 * u.get(i, j)).sin().abs();
        if amp > best.1 {
            best = (g.x(i).hypot(g.y(j)), amp);
        }
    }
    Ok(best.0)
}

/// `|r(y = x) / r(y = -x) - 1|`; zero for a circular front.
pub fn eccentricity_proxy(u: &Field) -> Result<f64> {
    let main = diagonal_radius(u, Diagonal::Main)?;
    let anti = diagonal_radius(u, Diagonal::Anti)?;
    if anti == 0.0 {
        return Err(Error::InvalidParameter {
            key: "u".into(),
            msg: "no front found along y = -x".into(),
        });
    }
    Ok((main / anti - 1.0).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDiagnostic {
    pub time: f64,
    pub energy: f64,
}

/// Trapezoid weights of a 1-D grid of `n` nodes, unit spacing.
fn trapezoid(n: usize) -> Vec<f64> {
    let mut w = vec![1.0; n];
    w[0] = 0.5;
    w[n - 1] = 0.5;
    w
}

/// `E = int v^2/2 + |grad u|^2/2 + phi (1 - cos u) dx dy` by the trapezoid
/// rule, with gradients from the first-order weights.
pub fn discrete_energy(
    state: &SolverState,
    weights: &WeightSet,
    phi: impl Fn(f64, f64) -> f64,
) -> Result<EnergyDiagnostic> {
    let g = *state.u.grid();
    if weights.nx() != g.nx || weights.ny() != g.ny {
        return Err(Error::DimensionMismatch {
            expected: g.nx,
            found: weights.nx(),
        });
    }
    let u = state.u.values();
    let ux: Array2<f64> = weights.w1x.dot(u);
    let uy: Array2<f64> = u.dot(&weights.w1y.t());
    let wx = trapezoid(g.nx);
    let wy = trapezoid(g.ny);
    let mut total = 0.0;
    for i in 0..g.nx {
        for j in 0..g.ny {
            let v = state.v.get(i, j);
            let density = 0.5 * v * v
                + 0.5 * (ux[[i, j]].powi(2) + uy[[i, j]].powi(2))
                + phi(g.x(i), g.y(j)) * (1.0 - u[[i, j]].cos());
            total += wx[i] * wy[j] * density;
        }
    }
    let energy = total * g.dx * g.dy;
    if !energy.is_finite() {
        return Err(Error::NonFinite { i: 0, j: 0 });
    }
    Ok(EnergyDiagnostic {
        time: state.t,
        energy,
    })
}
