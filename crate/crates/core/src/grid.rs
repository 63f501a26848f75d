//! Uniform tensor-product grids and scalar fields sampled on them.
//!
//! Node indices are zero-based: `x(0) == a` and `x(nx - 1) == b`.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Smallest admissible node count per axis. The Neumann closure needs at
/// least two interior lines between the two boundary lines.
pub const MIN_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, c: f64, d: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if b <= a || d <= c {
            return Err(Error::InvalidGrid(format!(
                "degenerate bounds [{a}, {b}] x [{c}, {d}]"
            )));
        }
        if nx < MIN_NODES || ny < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes per axis, got {nx} x {ny}"
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            nx,
            ny,
            dx: (b - a) / (nx - 1) as f64,
            dy: (d - c) / (ny - 1) as f64,
        })
    }

    /// Builds a grid from target spacings. The spacings must divide the
    /// domain into a whole number of cells.
    pub fn with_spacing(a: f64, b: f64, c: f64, d: f64, dx: f64, dy: f64) -> Result<Self> {
        let nx = cells(b - a, dx, "dx")? + 1;
        let ny = cells(d - c, dy, "dy")? + 1;
        Self::new(a, b, c, d, nx, ny)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.b
        } else {
            self.a + i as f64 * self.dx
        }
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.d
        } else {
            self.c + j as f64 * self.dy
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn cells(length: f64, h: f64, key: &str) -> Result<usize> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::param(
            key,
            format!("spacing must be positive, got {h}"),
        ));
    }
    let ratio = length / h;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::param(
            key,
            format!("spacing {h} does not divide the interval length {length}"),
        ));
    }
    Ok(n as usize)
}

/// Values on a [`UniformGrid`], indexed `[i, j]` for the node `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: UniformGrid,
    values: Array2<f64>,
}

impl Field {
    pub fn zeros(grid: &UniformGrid) -> Self {
        Self {
            grid: *grid,
            values: Array2::zeros((grid.nx, grid.ny)),
        }
    }

    pub fn constant(grid: &UniformGrid, value: f64) -> Self {
        Self {
            grid: *grid,
            values: Array2::from_elem((grid.nx, grid.ny), value),
        }
    }

    /// Evaluates `f` at every node.
    pub fn sample(grid: &UniformGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = Array2::from_shape_fn((grid.nx, grid.ny), |(i, j)| f(grid.x(i), grid.y(j)));
        Self::from_values(grid, values)
    }

    pub fn from_values(grid: &UniformGrid, values: Array2<f64>) -> Result<Self> {
        if values.nrows() != grid.nx {
            return Err(Error::DimensionMismatch {
                expected: grid.nx,
                found: values.nrows(),
            });
        }
        if values.ncols() != grid.ny {
            return Err(Error::DimensionMismatch {
                expected: grid.ny,
                found: values.ncols(),
            });
        }
        check_finite(&values)?;
        Ok(Self {
            grid: *grid,
            values,
        })
    }

    pub(crate) fn from_values_unchecked(grid: &UniformGrid, values: Array2<f64>) -> Self {
        debug_assert_eq!(values.dim(), (grid.nx, grid.ny));
        Self {
            grid: *grid,
            values,
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    /// Applies `f` pointwise, failing if the result is not finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values(&self.grid, self.values.mapv(f))
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .fold(0.0, |m, (p, q)| m.max((p - q).abs()))
    }
}

pub(crate) fn check_finite(values: &Array2<f64>) -> Result<()> {
    match values.indexed_iter().find(|(_, v)| !v.is_finite()) {
        Some(((i, j), _)) => Err(Error::NonFinite { i, j }),
        None => Ok(()),
    }
}
