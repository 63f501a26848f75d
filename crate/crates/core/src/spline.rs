//! Differential quadrature weights from a modified cubic B-spline basis.
//!
//! First-order weights come from collocating the basis: for every node `x_i`
//! the weights `w_i` satisfy `sum_k w_ik psi_m(x_k) = psi_m'(x_i)` for all
//! basis members `m`. The node-value matrix `B[m][k] = psi_m(x_k)` is
//! tridiagonal, so each right-hand side costs one Thomas sweep against a
//! single factorization. Second-order weights follow from Shu's recurrence.

use ndarray::{linalg::general_mat_mul, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::grid::{Field, UniformGrid, MIN_NODES};

/// Pivots smaller than this in magnitude are treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Nodal values of a uniform cubic B-spline `phi_m` and its first two
/// derivatives, indexed by the node offset `k - m` in `-2..=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineTable {
    pub h: f64,
}

impl SplineTable {
    pub fn new(h: f64) -> Self {
        Self { h }
    }

    pub fn value(&self, offset: isize) -> f64 {
        match offset {
            0 => 4.0,
            -1 | 1 => 1.0,
            _ => 0.0,
        }
    }

    pub fn first(&self, offset: isize) -> f64 {
        match offset {
            -1 => 3.0 / self.h,
            1 => -3.0 / self.h,
            _ => 0.0,
        }
    }

    pub fn second(&self, offset: isize) -> f64 {
        let h2 = self.h * self.h;
        match offset {
            0 => -12.0 / h2,
            -1 | 1 => 6.0 / h2,
            _ => 0.0,
        }
    }
}

/// Evaluates the cubic B-spline centred at `center` with knot spacing `h`,
/// scaled so that its value at the centre is 4.
pub fn cubic_bspline(center: f64, h: f64, x: f64) -> f64 {
    let s = (x - center) / h;
    let r = s.abs();
    if r >= 2.0 {
        0.0
    } else if r >= 1.0 {
        (2.0 - r).powi(3)
    } else {
        (2.0 - r).powi(3) - 4.0 * (1.0 - r).powi(3)
    }
}

/// One modified basis member as a combination of ordinary B-splines
/// `sum coeff * phi_p`, with `p` the (possibly out-of-range) centre index.
#[derive(Debug, Clone)]
struct Combination(Vec<(isize, f64)>);

fn modified_member(m: usize, n: usize) -> Combination {
    let m = m as isize;
    let last = n as isize - 1;
    Combination(if m == 0 {
        vec![(0, 1.0), (-1, 2.0)]
    } else if m == 1 {
        vec![(1, 1.0), (-1, -1.0)]
    } else if m == last - 1 {
        vec![(last - 1, 1.0), (last + 1, -1.0)]
    } else if m == last {
        vec![(last, 1.0), (last + 1, 2.0)]
    } else {
        vec![(m, 1.0)]
    })
}

/// A tridiagonal matrix. `lower[0]` and `upper[n - 1]` are unused and kept
/// at zero so every row has the same shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.len();
        let mut a = Array2::zeros((n, n));
        for r in 0..n {
            a[[r, r]] = self.diag[r];
            if r > 0 {
                a[[r, r - 1]] = self.lower[r];
            }
            if r + 1 < n {
                a[[r, r + 1]] = self.upper[r];
            }
        }
        a
    }

    pub fn factor(&self) -> Result<ThomasFactors> {
        ThomasFactors::new(self)
    }
}

/// Forward-elimination factors of a tridiagonal matrix, reusable across
/// right-hand sides.
#[derive(Debug, Clone)]
pub struct ThomasFactors {
    lower: Vec<f64>,
    // reciprocal of the eliminated pivots
    inv_pivot: Vec<f64>,
    // upper diagonal scaled by the pivot of its row
    upper: Vec<f64>,
}

impl ThomasFactors {
    fn new(m: &Tridiagonal) -> Result<Self> {
        let n = m.len();
        if m.lower.len() != n || m.upper.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.lower.len().min(m.upper.len()),
            });
        }
        let mut inv_pivot = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut prev = 0.0;
        for r in 0..n {
            let pivot = if r == 0 {
                m.diag[0]
            } else {
                m.diag[r] - m.lower[r] * prev
            };
            if pivot.is_nan() || pivot.abs() < PIVOT_TOLERANCE {
                return Err(Error::SingularPivot { row: r, pivot });
            }
            inv_pivot[r] = 1.0 / pivot;
            upper[r] = if r + 1 < n { m.upper[r] / pivot } else { 0.0 };
            prev = upper[r];
        }
        Ok(Self {
            lower: m.lower.clone(),
            inv_pivot,
            upper,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Solves in place: `x` holds the right-hand side on entry.
    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        x[0] *= self.inv_pivot[0];
        for r in 1..n {
            x[r] = (x[r] - self.lower[r] * x[r - 1]) * self.inv_pivot[r];
        }
        for r in (0..n - 1).rev() {
            x[r] -= self.upper[r] * x[r + 1];
        }
        Ok(())
    }
}

/// Solves a tridiagonal system with the Thomas algorithm. `lower` and
/// `upper` hold the `n - 1` sub- and super-diagonal entries.
pub fn thomas_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    for len in [lower.len(), upper.len()] {
        if len != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                found: len,
            });
        }
    }
    let mut full_lower = Vec::with_capacity(n);
    full_lower.push(0.0);
    full_lower.extend_from_slice(lower);
    let mut full_upper = upper.to_vec();
    full_upper.push(0.0);
    let m = Tridiagonal {
        lower: full_lower,
        diag: diag.to_vec(),
        upper: full_upper,
    };
    let mut x = rhs.to_vec();
    m.factor()?.solve_in_place(&mut x)?;
    Ok(x)
}

/// The modified cubic B-spline basis on `n` uniformly spaced nodes.
#[derive(Debug, Clone)]
pub struct ModifiedBasis {
    pub h: f64,
    /// `values[m][k] = psi_m(x_k)`, tridiagonal.
    pub values: Tridiagonal,
    /// `derivs[[m, i]] = psi_m'(x_i)`.
    pub derivs: Array2<f64>,
}

impl ModifiedBasis {
    /// Dense copy of the node-value matrix.
    pub fn value_matrix(&self) -> Array2<f64> {
        self.values.to_dense()
    }
}

pub fn modified_basis_matrix(n: usize, h: f64) -> Result<ModifiedBasis> {
    if n < MIN_NODES {
        return Err(Error::InvalidGrid(format!(
            "need at least {MIN_NODES} nodes, got {n}"
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "spacing must be positive, got {h}"
        )));
    }
    let table = SplineTable::new(h);
    let members: Vec<_> = (0..n).map(|m| modified_member(m, n)).collect();
    let eval = |m: usize, k: usize, f: &dyn Fn(isize) -> f64| -> f64 {
        members[m]
            .0
            .iter()
            .map(|&(p, coeff)| coeff * f(k as isize - p))
            .sum()
    };

    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut derivs = Array2::zeros((n, n));
    for m in 0..n {
        diag[m] = eval(m, m, &|o| table.value(o));
        if m > 0 {
            lower[m] = eval(m, m - 1, &|o| table.value(o));
        }
        if m + 1 < n {
            upper[m] = eval(m, m + 1, &|o| table.value(o));
        }
        for i in m.saturating_sub(2)..(m + 3).min(n) {
            derivs[[m, i]] = eval(m, i, &|o| table.first(o));
        }
    }
    Ok(ModifiedBasis {
        h,
        values: Tridiagonal { lower, diag, upper },
        derivs,
    })
}

/// First-order weights on `n` nodes of spacing `h`; row `i` differentiates
/// at node `i`.
pub fn first_order_weights(n: usize, h: f64) -> Result<Array2<f64>> {
    let basis = modified_basis_matrix(n, h)?;
    first_order_weights_from(&basis)
}

fn first_order_weights_from(basis: &ModifiedBasis) -> Result<Array2<f64>> {
    let n = basis.values.len();
    let factors = basis.values.factor()?;
    let mut w = Array2::zeros((n, n));
    let mut col = vec![0.0; n];
    for i in 0..n {
        for (m, c) in col.iter_mut().enumerate() {
            *c = basis.derivs[[m, i]];
        }
        factors.solve_in_place(&mut col)?;
        for (k, &c) in col.iter().enumerate() {
            w[[i, k]] = c;
        }
    }
    Ok(w)
}

/// Largest violation of the collocation conditions
/// `sum_k w[i][k] psi_m(x_k) = psi_m'(x_i)` over all `i` and `m`.
pub fn defining_residual(w1: &Array2<f64>, basis: &ModifiedBasis) -> f64 {
    let b = basis.value_matrix();
    // (W1 B^T)[i][m] = sum_k w[i][k] psi_m(x_k)
    let lhs = w1.dot(&b.t());
    let mut worst: f64 = 0.0;
    for ((i, m), v) in lhs.indexed_iter() {
        worst = worst.max((v - basis.derivs[[m, i]]).abs());
    }
    worst
}

/// Shu's recurrence for order `r` weights from first-order weights and the
/// order `r - 1` weights. Diagonal entries are the negated off-diagonal
/// row sums.
pub fn shu_recurrence(
    w1: &Array2<f64>,
    prev: &Array2<f64>,
    nodes: &[f64],
    r: usize,
) -> Result<Array2<f64>> {
    let n = nodes.len();
    for m in [w1, prev] {
        if m.dim() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.nrows(),
            });
        }
    }
    for i in 1..n {
        if nodes[i] == nodes[i - 1] {
            return Err(Error::RepeatedNode(i - 1, i));
        }
    }
    let order = r as f64;
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let dx = nodes[i] - nodes[j];
            if dx == 0.0 {
                return Err(Error::RepeatedNode(i.min(j), i.max(j)));
            }
            let v = order * (w1[[i, j]] * prev[[i, i]] - prev[[i, j]] / dx);
            out[[i, j]] = v;
            row_sum += v;
        }
        out[[i, i]] = -row_sum;
    }
    Ok(out)
}

pub fn shu_second_order(w1: &Array2<f64>, nodes: &[f64]) -> Result<Array2<f64>> {
    shu_recurrence(w1, w1, nodes, 2)
}

/// The four weight matrices for a grid.
#[derive(Debug, Clone)]
pub struct WeightSet {
    pub w1x: Array2<f64>,
    pub w2x: Array2<f64>,
    pub w1y: Array2<f64>,
    pub w2y: Array2<f64>,
}

impl WeightSet {
    pub fn build(grid: &UniformGrid) -> Result<Self> {
        let (w1x, w2x) = axis_weights(grid.nx, grid.dx, &grid.xs())?;
        let (w1y, w2y) = axis_weights(grid.ny, grid.dy, &grid.ys())?;
        Ok(Self { w1x, w2x, w1y, w2y })
    }

    pub fn nx(&self) -> usize {
        self.w1x.nrows()
    }

    pub fn ny(&self) -> usize {
        self.w1y.nrows()
    }
}

fn axis_weights(n: usize, h: f64, nodes: &[f64]) -> Result<(Array2<f64>, Array2<f64>)> {
    let w1 = first_order_weights(n, h)?;
    let w2 = shu_second_order(&w1, nodes)?;
    Ok((w1, w2))
}

pub fn build_weight_set(grid: &UniformGrid) -> Result<WeightSet> {
    WeightSet::build(grid)
}

/// `out[i][j] = sum_k w[i][k] f[k][j]`.
pub fn apply_weights_x(w: &Array2<f64>, f: &Field) -> Result<Field> {
    let g = *f.grid();
    if w.dim() != (g.nx, g.nx) {
        return Err(Error::DimensionMismatch {
            expected: g.nx,
            found: w.nrows(),
        });
    }
    Field::from_values(&g, w.dot(f.values()))
}

/// `out[i][j] = sum_k w[j][k] f[i][k]`.
pub fn apply_weights_y(w: &Array2<f64>, f: &Field) -> Result<Field> {
    let g = *f.grid();
    if w.dim() != (g.ny, g.ny) {
        return Err(Error::DimensionMismatch {
            expected: g.ny,
            found: w.nrows(),
        });
    }
    Field::from_values(&g, f.values().dot(&w.t()))
}

/// `out = wx * u + u * wy^T`, overwriting `out`.
pub(crate) fn laplacian_into(
    weights: &WeightSet,
    u: &ArrayView2<f64>,
    out: &mut ndarray::ArrayViewMut2<f64>,
) {
    general_mat_mul(1.0, &weights.w2x, u, 0.0, out);
    general_mat_mul(1.0, u, &weights.w2y.t(), 1.0, out);
}

/// Row sums of a weight matrix.
pub fn row_sums(w: &Array2<f64>) -> Vec<f64> {
    w.sum_axis(Axis(1)).to_vec()
}
