//! Semi-discrete sine-Gordon operator and the Neumann boundary closure.
//!
//! With `v = u_t` the system is
//!
//! ```text
//! u_t = v
//! v_t = W2x u + u W2y^T - phi sin(u) - beta v
//! ```
//!
//! Boundary values of `u` are not integrated: before every evaluation they
//! are recovered from the discrete normal-derivative conditions by solving
//! a 2x2 system per grid line.

use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2, ArrayViewMut2, Zip};

use crate::error::{Error, Result};
use crate::grid::{check_finite, Field, UniformGrid};
use crate::spline::{laplacian_into, WeightSet, PIVOT_TOLERANCE};

/// A real function of the two space coordinates.
pub type SpaceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Boundary flux `(s, t) -> g`, where `s` is the coordinate along the face.
pub type FluxFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct PdeParams {
    pub beta: f64,
    pub phi: SpaceFn,
}

impl PdeParams {
    pub fn new(beta: f64, phi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::param(
                "beta",
                format!("must be finite and >= 0, got {beta}"),
            ));
        }
        Ok(Self {
            beta,
            phi: Arc::new(phi),
        })
    }

    pub fn constant(beta: f64, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::param("phi", "must be finite"));
        }
        Self::new(beta, move |_, _| phi)
    }
}

impl fmt::Debug for PdeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PdeParams")
            .field("beta", &self.beta)
            .finish_non_exhaustive()
    }
}

/// Prescribed `du/dx` on the faces `x = a` (left) and `x = b` (right), and
/// `du/dy` on `y = c` (bottom) and `y = d` (top). `None` means zero flux.
#[derive(Clone, Default)]
pub struct BoundaryData {
    pub left: Option<FluxFn>,
    pub right: Option<FluxFn>,
    pub bottom: Option<FluxFn>,
    pub top: Option<FluxFn>,
}

impl BoundaryData {
    pub fn homogeneous() -> Self {
        Self::default()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.left.is_none() && self.right.is_none() && self.bottom.is_none() && self.top.is_none()
    }
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = |g: &Option<FluxFn>| if g.is_some() { "fn" } else { "0" };
        f.debug_struct("BoundaryData")
            .field("left", &tag(&self.left))
            .field("right", &tag(&self.right))
            .field("bottom", &tag(&self.bottom))
            .field("top", &tag(&self.top))
            .finish()
    }
}

#[inline]
fn flux(g: &Option<FluxFn>, s: f64, t: f64) -> f64 {
    g.as_ref().map_or(0.0, |g| g(s, t))
}

/// Precomputed 2x2 eliminations for both axes.
#[derive(Debug, Clone)]
struct AxisClosure {
    first_row: Vec<f64>,
    last_row: Vec<f64>,
    w11: f64,
    w1n: f64,
    wn1: f64,
    wnn: f64,
    det: f64,
}

impl AxisClosure {
    fn new(w1: &Array2<f64>, axis: char) -> Result<Self> {
        let n = w1.nrows();
        let w11 = w1[[0, 0]];
        let w1n = w1[[0, n - 1]];
        let wn1 = w1[[n - 1, 0]];
        let wnn = w1[[n - 1, n - 1]];
        let det = w1n * wn1 - w11 * wnn;
        if det.is_nan() || det.abs() < PIVOT_TOLERANCE {
            return Err(Error::SingularBoundary { axis, det });
        }
        Ok(Self {
            first_row: w1.row(0).to_vec(),
            last_row: w1.row(n - 1).to_vec(),
            w11,
            w1n,
            wn1,
            wnn,
            det,
        })
    }

    /// Boundary pair `(u_first, u_last)` for one grid line, given the line's
    /// values (boundary entries ignored) and the two fluxes.
    #[inline]
    fn solve(&self, line: impl Fn(usize) -> f64, g_first: f64, g_last: f64) -> (f64, f64) {
        let n = self.first_row.len();
        let (mut s1, mut s2) = (0.0, 0.0);
        for k in 1..n - 1 {
            let u = line(k);
            s1 += self.first_row[k] * u;
            s2 += self.last_row[k] * u;
        }
        let r1 = g_first - s1;
        let r2 = g_last - s2;
        let first = (self.w1n * r2 - self.wnn * r1) / self.det;
        let last = (self.wn1 * r1 - self.w11 * r2) / self.det;
        (first, last)
    }
}

/// The Neumann closure for one grid: x-faces for every `j`, then y-faces for
/// every `i`, so corner values come from the y pass.
#[derive(Debug, Clone)]
pub struct NeumannClosure {
    grid: UniformGrid,
    x: AxisClosure,
    y: AxisClosure,
}

impl NeumannClosure {
    pub fn new(grid: &UniformGrid, weights: &WeightSet) -> Result<Self> {
        check_weights(grid, weights)?;
        Ok(Self {
            grid: *grid,
            x: AxisClosure::new(&weights.w1x, 'x')?,
            y: AxisClosure::new(&weights.w1y, 'y')?,
        })
    }

    pub fn apply(&self, u: &mut ArrayViewMut2<f64>, bd: &BoundaryData, t: f64) {
        let g = &self.grid;
        let (nx, ny) = (g.nx, g.ny);
        for j in 0..ny {
            let y = g.y(j);
            let (first, last) =
                self.x
                    .solve(|k| u[[k, j]], flux(&bd.left, y, t), flux(&bd.right, y, t));
            u[[0, j]] = first;
            u[[nx - 1, j]] = last;
        }
        for i in 0..nx {
            let x = g.x(i);
            let (first, last) =
                self.y
                    .solve(|k| u[[i, k]], flux(&bd.bottom, x, t), flux(&bd.top, x, t));
            u[[i, 0]] = first;
            u[[i, ny - 1]] = last;
        }
    }
}

fn check_weights(grid: &UniformGrid, weights: &WeightSet) -> Result<()> {
    if weights.nx() != grid.nx {
        return Err(Error::DimensionMismatch {
            expected: grid.nx,
            found: weights.nx(),
        });
    }
    if weights.ny() != grid.ny {
        return Err(Error::DimensionMismatch {
            expected: grid.ny,
            found: weights.ny(),
        });
    }
    Ok(())
}

/// Replaces the boundary values of `u` by the Neumann closure at time `t`.
pub fn enforce_neumann(u: &Field, weights: &WeightSet, bd: &BoundaryData, t: f64) -> Result<Field> {
    let closure = NeumannClosure::new(u.grid(), weights)?;
    let mut out = u.clone();
    closure.apply(&mut out.values_mut().view_mut(), bd, t);
    check_finite(out.values())?;
    Ok(out)
}

/// Both time derivatives of the first-order system, without touching the
/// boundary values of `u`.
pub fn evaluate_rhs(
    u: &Field,
    v: &Field,
    params: &PdeParams,
    weights: &WeightSet,
) -> Result<(Field, Field)> {
    let grid = *u.grid();
    if v.grid() != &grid {
        return Err(Error::InvalidGrid("u and v live on different grids".into()));
    }
    check_weights(&grid, weights)?;
    let phi = Field::sample(&grid, |x, y| (params.phi)(x, y))?;
    let mut dv = Array2::zeros((grid.nx, grid.ny));
    accel_into(
        weights,
        phi.values(),
        params.beta,
        &u.values().view(),
        &v.values().view(),
        &mut dv.view_mut(),
    );
    check_finite(&dv)?;
    Ok((v.clone(), Field::from_values_unchecked(&grid, dv)))
}

fn accel_into(
    weights: &WeightSet,
    phi: &Array2<f64>,
    beta: f64,
    u: &ArrayView2<f64>,
    v: &ArrayView2<f64>,
    dv: &mut ArrayViewMut2<f64>,
) {
    laplacian_into(weights, u, dv);
    Zip::from(dv)
        .and(u)
        .and(v)
        .and(phi)
        .for_each(|a, &u, &v, &p| *a -= p * u.sin() + beta * v);
}

/// The complete semi-discrete problem: grid, weights, coefficients and
/// boundary data, ready to be integrated in time.
///
/// The state vector is flat: all `u` values followed by all `v` values,
/// each in row-major `[i, j]` order.
#[derive(Debug, Clone)]
pub struct SineGordonSystem {
    grid: UniformGrid,
    weights: WeightSet,
    closure: NeumannClosure,
    phi: Array2<f64>,
    beta: f64,
    boundary: BoundaryData,
}

impl SineGordonSystem {
    pub fn new(
        grid: &UniformGrid,
        weights: WeightSet,
        params: &PdeParams,
        boundary: BoundaryData,
    ) -> Result<Self> {
        let closure = NeumannClosure::new(grid, &weights)?;
        let phi = Field::sample(grid, |x, y| (params.phi)(x, y))?.into_values();
        Ok(Self {
            grid: *grid,
            weights,
            closure,
            phi,
            beta: params.beta,
            boundary,
        })
    }

    /// Builds the weights for `grid` as well.
    pub fn on_grid(grid: &UniformGrid, params: &PdeParams, boundary: BoundaryData) -> Result<Self> {
        Self::new(grid, WeightSet::build(grid)?, params, boundary)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> &Array2<f64> {
        &self.phi
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    pub fn state_len(&self) -> usize {
        2 * self.grid.len()
    }

    fn shape(&self) -> (usize, usize) {
        (self.grid.nx, self.grid.ny)
    }

    pub(crate) fn split<'a>(&self, y: &'a [f64]) -> (ArrayView2<'a, f64>, ArrayView2<'a, f64>) {
        let (u, v) = y.split_at(self.grid.len());
        (
            ArrayView2::from_shape(self.shape(), u).expect("state layout"),
            ArrayView2::from_shape(self.shape(), v).expect("state layout"),
        )
    }

    pub(crate) fn split_mut<'a>(
        &self,
        y: &'a mut [f64],
    ) -> (ArrayViewMut2<'a, f64>, ArrayViewMut2<'a, f64>) {
        let (u, v) = y.split_at_mut(self.grid.len());
        (
            ArrayViewMut2::from_shape(self.shape(), u).expect("state layout"),
            ArrayViewMut2::from_shape(self.shape(), v).expect("state layout"),
        )
    }

    /// Applies the boundary closure at time `t` to the `u` part of `y`.
    pub fn close(&self, t: f64, y: &mut [f64]) {
        let (mut u, _) = self.split_mut(y);
        self.closure.apply(&mut u, &self.boundary, t);
    }

    /// Time derivative of the flat state.
    pub fn derivative(&self, y: &[f64], dy: &mut [f64]) {
        let (u, v) = self.split(y);
        let (mut du, mut dv) = self.split_mut(dy);
        du.assign(&v);
        accel_into(&self.weights, &self.phi, self.beta, &u, &v, &mut dv);
    }

    pub fn pack(&self, u: &Field, v: &Field) -> Result<Vec<f64>> {
        for f in [u, v] {
            if f.grid() != &self.grid {
                return Err(Error::InvalidGrid(
                    "field does not match the system grid".into(),
                ));
            }
        }
        let mut y = Vec::with_capacity(self.state_len());
        y.extend(u.values().iter());
        y.extend(v.values().iter());
        Ok(y)
    }

    pub fn unpack(&self, y: &[f64]) -> Result<(Field, Field)> {
        let (u, v) = self.split(y);
        Ok((
            Field::from_values(&self.grid, u.to_owned())?,
            Field::from_values(&self.grid, v.to_owned())?,
        ))
    }
}
