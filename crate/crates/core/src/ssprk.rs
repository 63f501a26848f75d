//! Five-stage, fourth-order strong-stability-preserving Runge-Kutta.
//!
//! The scheme is stored in Shu-Osher form: stage `s` is a convex combination
//! of earlier stage states, each plus a nonnegative multiple of
//! `dt * F(stage)`. Coefficients are the optimal SSPRK(5,4) values of
//! Spiteri and Ruuth.

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::rhs::SineGordonSystem;

pub const STAGES: usize = 5;

/// Shu-Osher coefficients. Row `s` builds stage state `s + 1` from the
/// states `0..=s` (state 0 is the step's starting value).
#[derive(Debug, Clone, PartialEq)]
pub struct RkTableau {
    pub name: &'static str,
    /// `alpha[s][k]`: weight on state `k` in stage state `s + 1`.
    pub alpha: [[f64; STAGES]; STAGES],
    /// `beta[s][k]`: weight on `dt * F(state k)` in stage state `s + 1`.
    pub beta: [[f64; STAGES]; STAGES],
}

pub const SSPRK54: RkTableau = RkTableau {
    name: "ssprk54-spiteri-ruuth",
    alpha: [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.444370493651235, 0.555629506348765, 0.0, 0.0, 0.0],
        [0.620101851488403, 0.0, 0.379898148511597, 0.0, 0.0],
        [0.178079954393132, 0.0, 0.0, 0.821920045606868, 0.0],
        [
            0.0,
            0.0,
            0.517231671970585,
            0.096059710526147,
            0.386708617503269,
        ],
    ],
    beta: [
        [0.391752226571890, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.368410593050371, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.251891774271694, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.544974750228521, 0.0],
        [0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906],
    ],
};

impl RkTableau {
    /// Equivalent Butcher coefficients `(a, b)`: state `s` equals
    /// `y0 + dt * sum_j a[s][j] F(state j)` and the step result uses `b`.
    pub fn butcher(&self) -> ([[f64; STAGES]; STAGES], [f64; STAGES]) {
        // gamma[s] expresses state s in terms of the F evaluations
        let mut gamma = [[0.0; STAGES]; STAGES + 1];
        for s in 0..STAGES {
            let mut row = self.beta[s];
            for (k, prev) in gamma.iter().enumerate().take(s + 1) {
                for (r, g) in row.iter_mut().zip(prev.iter()) {
                    *r += self.alpha[s][k] * g;
                }
            }
            gamma[s + 1] = row;
        }
        let mut a = [[0.0; STAGES]; STAGES];
        a.copy_from_slice(&gamma[..STAGES]);
        (a, gamma[STAGES])
    }

    /// Time offsets (as fractions of `dt`) at which each stage's `F` is
    /// evaluated.
    pub fn abscissae(&self) -> [f64; STAGES] {
        let (a, _) = self.butcher();
        let mut c = [0.0; STAGES];
        for (ci, row) in c.iter_mut().zip(a.iter()) {
            *ci = row.iter().sum();
        }
        c
    }
}

/// A first-order system `y' = F(t, y)` with an algebraic constraint that is
/// imposed before every evaluation of `F`.
pub trait RkSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);

    fn constrain(&self, _t: f64, _y: &mut [f64]) {}
}

impl RkSystem for SineGordonSystem {
    fn dim(&self) -> usize {
        self.state_len()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        self.derivative(y, dy)
    }

    fn constrain(&self, t: f64, y: &mut [f64]) {
        self.close(t, y)
    }
}

/// Stage storage for repeated steps of one system size.
#[derive(Debug, Clone)]
pub struct Ssprk54 {
    tableau: RkTableau,
    abscissae: [f64; STAGES],
    states: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

impl Default for Ssprk54 {
    fn default() -> Self {
        Self::new()
    }
}

impl Ssprk54 {
    pub fn new() -> Self {
        Self {
            abscissae: SSPRK54.abscissae(),
            tableau: SSPRK54,
            states: Vec::new(),
            derivs: Vec::new(),
        }
    }

    pub fn tableau(&self) -> &RkTableau {
        &self.tableau
    }

    fn ensure(&mut self, n: usize) {
        if self.states.len() != STAGES || self.states[0].len() != n {
            self.states = vec![vec![0.0; n]; STAGES];
            self.derivs = vec![vec![0.0; n]; STAGES];
        }
    }

    /// Advances `y` from `t` to `t + dt` in place. The constraint is applied
    /// to every stage state at its own time before `F` sees it, and to the
    /// result at `t + dt`.
    pub fn step<S: RkSystem + ?Sized>(
        &mut self,
        sys: &S,
        t: f64,
        dt: f64,
        y: &mut [f64],
    ) -> Result<()> {
        let n = sys.dim();
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.len(),
            });
        }
        self.ensure(n);
        self.states[0].copy_from_slice(y);

        for s in 0..STAGES {
            let ts = t + self.abscissae[s] * dt;
            sys.constrain(ts, &mut self.states[s]);
            sys.rhs(ts, &self.states[s], &mut self.derivs[s]);

            let alpha = &self.tableau.alpha[s];
            let beta = &self.tableau.beta[s];
            let target: &mut [f64] = if s + 1 < STAGES {
                // stage s + 1 only reads states/derivs 0..=s
                let (done, rest) = self.states.split_at_mut(s + 1);
                combine(&mut rest[0], done, &self.derivs[..=s], alpha, beta, dt);
                &mut rest[0]
            } else {
                combine(y, &self.states, &self.derivs, alpha, beta, dt);
                y
            };
            if target.iter().any(|v| !v.is_finite()) {
                return Err(Error::Unstable { t, stage: s + 1 });
            }
        }
        sys.constrain(t + dt, y);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unstable { t, stage: STAGES });
        }
        Ok(())
    }
}

fn combine(
    out: &mut [f64],
    states: &[Vec<f64>],
    derivs: &[Vec<f64>],
    alpha: &[f64; STAGES],
    beta: &[f64; STAGES],
    dt: f64,
) {
    out.fill(0.0);
    for k in 0..states.len().min(derivs.len()) {
        if alpha[k] != 0.0 {
            for (o, s) in out.iter_mut().zip(&states[k]) {
                *o += alpha[k] * s;
            }
        }
        if beta[k] != 0.0 {
            let w = beta[k] * dt;
            for (o, d) in out.iter_mut().zip(&derivs[k]) {
                *o += w * d;
            }
        }
    }
}

/// Time, displacement `u` and velocity `v = u_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub u: Field,
    pub v: Field,
}

impl SolverState {
    /// Initial state with the boundary closure applied to `u` at `t`.
    pub fn initial(sys: &SineGordonSystem, t: f64, u: Field, v: Field) -> Result<Self> {
        let mut y = sys.pack(&u, &v)?;
        sys.close(t, &mut y);
        let (u, v) = sys.unpack(&y)?;
        Ok(Self { t, u, v })
    }
}

/// One SSPRK(5,4) step of the sine-Gordon system.
pub fn step(sys: &SineGordonSystem, state: &SolverState, dt: f64) -> Result<SolverState> {
    check_dt(dt)?;
    let mut y = sys.pack(&state.u, &state.v)?;
    Ssprk54::new().step(sys, state.t, dt, &mut y)?;
    let (u, v) = sys.unpack(&y)?;
    Ok(SolverState {
        t: state.t + dt,
        u,
        v,
    })
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    Ok(())
}

/// Number of `dt` steps spanning `span`, which must be a whole multiple.
pub fn steps_for(span: f64, dt: f64, key: &str) -> Result<u64> {
    let ratio = span / dt;
    let n = ratio.round();
    if n < 0.0 || (ratio - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::param(
            key,
            format!("{span} is not a nonnegative integer multiple of dt={dt}"),
        ));
    }
    Ok(n as u64)
}

/// Integrates from `state0` to `t_end`, capturing the state at each of
/// `snapshot_times`. Snapshot times are whole multiples of `dt` after
/// `state0.t`; stored states carry the requested time exactly.
pub fn integrate(
    sys: &SineGordonSystem,
    state0: &SolverState,
    dt: f64,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<(SolverState, Vec<SolverState>)> {
    integrate_with(sys, state0, dt, t_end, snapshot_times, |_| {})
}

/// As [`integrate`], reporting each snapshot to `observe` as it is taken.
pub fn integrate_with(
    sys: &SineGordonSystem,
    state0: &SolverState,
    dt: f64,
    t_end: f64,
    snapshot_times: &[f64],
    mut observe: impl FnMut(&SolverState),
) -> Result<(SolverState, Vec<SolverState>)> {
    check_dt(dt)?;
    if t_end.is_nan() || t_end < state0.t {
        return Err(Error::param(
            "t_end",
            format!("{t_end} precedes the start time {}", state0.t),
        ));
    }
    let total = steps_for(t_end - state0.t, dt, "t_end")?;
    let mut marks = Vec::with_capacity(snapshot_times.len());
    for (n, &ts) in snapshot_times.iter().enumerate() {
        // compared in whole steps so that accumulated rounding in the
        // requested times does not matter
        let mark = steps_for(ts - state0.t, dt, "snapshots")
            .ok()
            .filter(|&m| m <= total && ts > state0.t - dt);
        let Some(mark) = mark else {
            return Err(Error::param(
                "snapshots",
                format!("{ts} is not a step time in [{}, {t_end}]", state0.t),
            ));
        };
        if n > 0 && ts < snapshot_times[n - 1] {
            return Err(Error::param("snapshots", "times must be sorted"));
        }
        marks.push(mark);
    }

    let t0 = state0.t;
    let mut y = sys.pack(&state0.u, &state0.v)?;
    let mut rk = Ssprk54::new();
    let mut snaps = Vec::with_capacity(marks.len());
    let mut next = 0;
    let mut take =
        |n: u64, y: &[f64], snaps: &mut Vec<SolverState>, next: &mut usize| -> Result<()> {
            while *next < marks.len() && marks[*next] == n {
                let (u, v) = sys.unpack(y)?;
                let s = SolverState {
                    t: snapshot_times[*next],
                    u,
                    v,
                };
                observe(&s);
                snaps.push(s);
                *next += 1;
            }
            Ok(())
        };
    take(0, &y, &mut snaps, &mut next)?;
    for n in 0..total {
        let t = t0 + n as f64 * dt;
        rk.step(sys, t, dt, &mut y)?;
        take(n + 1, &y, &mut snaps, &mut next)?;
    }
    let (u, v) = sys.unpack(&y)?;
    let t = if total == 0 { t0 } else { t_end };
    Ok((SolverState { t, u, v }, snaps))
}
