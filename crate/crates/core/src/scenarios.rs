//! Built-in sine-Gordon experiments: line and ring solitons, a breather and
//! damped line solitons, each with its default discretisation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Field, UniformGrid};
use crate::rhs::{BoundaryData, FluxFn, PdeParams, SineGordonSystem, SpaceFn};
use crate::ssprk::SolverState;

/// Exact solution `(x, y, t) -> u`.
pub type ExactFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// How a `u` field is shown when exported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Raw,
    /// `sin(u / 2)`, which peaks at kink centres.
    HalfSine,
}

impl Transform {
    pub fn name(self) -> &'static str {
        match self {
            Transform::Raw => "raw",
            Transform::HalfSine => "half-sine",
        }
    }

    pub fn apply(self, u: f64) -> f64 {
        match self {
            Transform::Raw => u,
            Transform::HalfSine => (0.5 * u).sin(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(Transform::Raw),
            "half-sine" => Some(Transform::HalfSine),
            _ => None,
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone)]
pub struct ScenarioSpec {
    pub name: &'static str,
    pub title: &'static str,
    pub bounds: [f64; 4],
    pub beta: f64,
    /// Constant coefficient of `sin(u)`.
    pub phi: f64,
    pub f1: SpaceFn,
    pub f2: SpaceFn,
    pub boundary: BoundaryData,
    pub exact: Option<ExactFn>,
    pub dt: f64,
    pub dx: f64,
    pub dy: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub display: Transform,
    /// Human-readable formulas, one per line.
    pub formulas: &'static [&'static str],
}

impl fmt::Debug for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScenarioSpec")
            .field("name", &self.name)
            .field("bounds", &self.bounds)
            .field("beta", &self.beta)
            .field("phi", &self.phi)
            .field("dt", &self.dt)
            .field("dx", &self.dx)
            .field("dy", &self.dy)
            .field("t_end", &self.t_end)
            .field("snapshot_times", &self.snapshot_times)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

pub const SCENARIO_NAMES: [&str; 6] = [
    "line-soliton-exact",
    "circular-ring",
    "elliptical-ring",
    "elliptical-breather",
    "orthogonal-lines",
    "inhomogeneous-line",
];

fn space(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> SpaceFn {
    Arc::new(f)
}

fn flux(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Option<FluxFn> {
    Some(Arc::new(f))
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// `4 atan(exp(z))`, the sine-Gordon kink profile.
pub fn kink(z: f64) -> f64 {
    4.0 * z.exp().atan()
}

/// Distance used by the elliptical scenarios.
fn ellipse_radius(x: f64, y: f64) -> f64 {
    ((x - y).powi(2) / 3.0 + (x + y).powi(2) / 2.0).sqrt()
}

pub fn builtin_scenario(name: &str) -> Result<ScenarioSpec> {
    let spec = match name {
        "line-soliton-exact" => {
            // u = 4 atan(exp(x + y - t)); both coordinate derivatives equal
            // 4 e^z / (1 + e^{2z}) with z = x + y - t
            let slope = |z: f64| 4.0 * z.exp() / (1.0 + (2.0 * z).exp());
            let (lo, hi) = (-7.0, 7.0);
            ScenarioSpec {
                name: "line-soliton-exact",
                title: "Line soliton with exact solution",
                bounds: [lo, hi, lo, hi],
                beta: 0.0,
                phi: 1.0,
                f1: space(|x, y| kink(x + y)),
                f2: space(move |x, y| -slope(x + y)),
                boundary: BoundaryData {
                    left: flux(move |y, t| slope(lo + y - t)),
                    right: flux(move |y, t| slope(hi + y - t)),
                    bottom: flux(move |x, t| slope(x + lo - t)),
                    top: flux(move |x, t| slope(x + hi - t)),
                },
                exact: Some(Arc::new(|x, y, t| kink(x + y - t))),
                dt: 0.001,
                dx: 0.25,
                dy: 0.25,
                t_end: 7.0,
                snapshot_times: vec![1.0, 3.0, 5.0, 7.0],
                display: Transform::Raw,
                formulas: &[
                    "u(x,y,0)   = 4 atan(exp(x + y))",
                    "u_t(x,y,0) = -4 exp(x + y) / (1 + exp(2x + 2y))",
                    "u_x on x=a,b and u_y on y=c,d = 4 exp(x + y + t) / (exp(2t) + exp(2x + 2y))",
                    "exact      = 4 atan(exp(x + y - t))",
                ],
            }
        }
        "circular-ring" => ring(
            "circular-ring",
            "Circular ring soliton",
            space(|x, y| kink(3.0 - x.hypot(y))),
            vec![2.8, 5.6, 8.4, 11.2, 12.6],
            &[
                "u(x,y,0)   = 4 atan(exp(3 - sqrt(x^2 + y^2)))",
                "u_t(x,y,0) = 0",
                "u_x = u_y = 0 on the boundary",
            ],
        ),
        "elliptical-ring" => ring(
            "elliptical-ring",
            "Elliptical ring soliton",
            space(|x, y| kink(3.0 - ellipse_radius(x, y))),
            vec![1.6, 3.2, 4.8, 6.4, 8.0, 9.6, 11.2],
            &[
                "u(x,y,0)   = 4 atan(exp(3 - sqrt((x - y)^2/3 + (x + y)^2/2)))",
                "u_t(x,y,0) = 0",
                "u_x = u_y = 0 on the boundary",
            ],
        ),
        "elliptical-breather" => ring(
            "elliptical-breather",
            "Elliptical breather",
            space(|x, y| 4.0 * (2.0 * sech(0.866 * ellipse_radius(x, y))).atan()),
            vec![1.6, 8.0, 9.6, 11.2, 12.8, 14.8, 15.2],
            &[
                "u(x,y,0)   = 4 atan(2.0 sech(0.866 sqrt((x - y)^2/3 + (x + y)^2/2)))",
                "u_t(x,y,0) = 0",
                "u_x = u_y = 0 on the boundary",
            ],
        ),
        "orthogonal-lines" => ScenarioSpec {
            name: "orthogonal-lines",
            title: "Superposition of two orthogonal line solitons",
            bounds: [-6.0, 6.0, -6.0, 6.0],
            beta: 0.05,
            phi: 1.0,
            f1: space(|x, y| 4.0 * (x.exp() + y.exp()).atan()),
            f2: space(|_, _| 0.0),
            boundary: BoundaryData::homogeneous(),
            exact: None,
            dt: 0.001,
            dx: 0.4,
            dy: 0.4,
            t_end: 20.0,
            snapshot_times: vec![1.0, 3.0, 7.0, 10.0, 15.0, 20.0],
            display: Transform::Raw,
            formulas: &[
                "u(x,y,0)   = 4 atan(exp(x) + exp(y))",
                "u_t(x,y,0) = 0",
                "u_x = u_y = 0 on the boundary",
            ],
        },
        "inhomogeneous-line" => ScenarioSpec {
            name: "inhomogeneous-line",
            title: "Line soliton in an inhomogeneous medium",
            bounds: [-7.0, 7.0, -7.0, 7.0],
            beta: 0.05,
            phi: 1.0,
            f1: space(|x, _| kink((x - 3.5) / 0.954)),
            f2: space(|x, _| 0.629 * sech(((x - 3.5) / 0.954).exp())),
            boundary: BoundaryData::homogeneous(),
            exact: None,
            dt: 0.001,
            dx: 14.0 / 30.0,
            dy: 14.0 / 30.0,
            t_end: 18.0,
            snapshot_times: vec![6.0, 12.0, 18.0],
            display: Transform::Raw,
            formulas: &[
                "u(x,y,0)   = 4 atan(exp((x - 3.5)/0.954))",
                "u_t(x,y,0) = 0.629 sech(exp((x - 3.5)/0.954))",
                "u_x = u_y = 0 on the boundary",
            ],
        },
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(spec)
}

fn ring(
    name: &'static str,
    title: &'static str,
    f1: SpaceFn,
    snapshot_times: Vec<f64>,
    formulas: &'static [&'static str],
) -> ScenarioSpec {
    let t_end = *snapshot_times
        .last()
        .expect("ring scenarios have snapshots");
    ScenarioSpec {
        name,
        title,
        bounds: [-7.0, 7.0, -7.0, 7.0],
        beta: 0.0,
        phi: 1.0,
        f1,
        f2: space(|_, _| 0.0),
        boundary: BoundaryData::homogeneous(),
        exact: None,
        dt: 0.2,
        dx: 0.4,
        dy: 0.4,
        t_end,
        snapshot_times,
        display: Transform::HalfSine,
        formulas,
    }
}

impl ScenarioSpec {
    pub fn grid(&self) -> Result<UniformGrid> {
        let [a, b, c, d] = self.bounds;
        UniformGrid::with_spacing(a, b, c, d, self.dx, self.dy)
    }

    pub fn params(&self) -> Result<PdeParams> {
        PdeParams::constant(self.beta, self.phi)
    }

    pub fn system(&self, grid: &UniformGrid) -> Result<SineGordonSystem> {
        SineGordonSystem::on_grid(grid, &self.params()?, self.boundary.clone())
    }

    /// Sampled initial data at `t = 0`, before the boundary closure.
    pub fn initial_fields(&self, grid: &UniformGrid) -> Result<(Field, Field)> {
        Ok((
            Field::sample(grid, |x, y| (self.f1)(x, y))?,
            Field::sample(grid, |x, y| (self.f2)(x, y))?,
        ))
    }

    /// Initial solver state. When an exact solution exists the sampled
    /// data is used verbatim, otherwise the boundary closure is applied.
    pub fn initial_state(&self, sys: &SineGordonSystem) -> Result<SolverState> {
        let (u, v) = self.initial_fields(sys.grid())?;
        if self.exact.is_some() {
            Ok(SolverState { t: 0.0, u, v })
        } else {
            SolverState::initial(sys, 0.0, u, v)
        }
    }

    pub fn exact_field(&self, grid: &UniformGrid, t: f64) -> Option<Result<Field>> {
        self.exact
            .as_ref()
            .map(|e| Field::sample(grid, |x, y| e(x, y, t)))
    }

    /// Validates user overrides against the scenario constraints.
    pub fn validate(&self) -> Result<()> {
        for (key, v) in [("dt", self.dt), ("dx", self.dx), ("dy", self.dy)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(key, format!("must be positive, got {v}")));
            }
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::param(
                "t_end",
                format!("must be >= 0, got {}", self.t_end),
            ));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::param(
                "beta",
                format!("must be >= 0, got {}", self.beta),
            ));
        }
        if !self.phi.is_finite() {
            return Err(Error::param("phi", "must be finite"));
        }
        for (n, &t) in self.snapshot_times.iter().enumerate() {
            if !(0.0..=self.t_end).contains(&t) {
                return Err(Error::param(
                    "snapshots",
                    format!("{t} lies outside [0, {}]", self.t_end),
                ));
            }
            if n > 0 && t <= self.snapshot_times[n - 1] {
                return Err(Error::param(
                    "snapshots",
                    "times must be strictly increasing",
                ));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let [a, b, c, d] = self.bounds;
        let mut s = format!("{} ({})\n", self.title, self.name);
        s.push_str("  u_tt + beta u_t = u_xx + u_yy - phi sin(u)\n");
        for f in self.formulas {
            s.push_str("  ");
            s.push_str(f);
            s.push('\n');
        }
        s.push_str(&format!("  domain     = [{a}, {b}] x [{c}, {d}]\n"));
        s.push_str(&format!(
            "  beta       = {}\n  phi        = {}\n",
            self.beta, self.phi
        ));
        s.push_str(&format!(
            "  dt = {}, dx = {}, dy = {}, t_end = {}\n",
            self.dt, self.dx, self.dy, self.t_end
        ));
        let times: Vec<String> = self.snapshot_times.iter().map(|t| t.to_string()).collect();
        s.push_str(&format!("  snapshots  = {}\n", times.join(", ")));
        s.push_str(&format!("  display    = {}\n", self.display));
        s.push_str(&format!(
            "  exact solution: {}\n",
            if self.exact.is_some() { "yes" } else { "no" }
        ));
        s
    }
}

/// `sin(u/2)` at the centre of the circular ring initial profile.
pub fn circular_ring_center_half_sine() -> f64 {
    (0.5 * kink(3.0)).sin()
}
