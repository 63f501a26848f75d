//! Browser bindings: step a built-in scenario, read its field and
//! diagnostics, and probe derivative-weight accuracy.

use wasm_bindgen::prelude::*;

use sinegordon::diagnostics::{discrete_energy, error_norms, ring_radius};
use sinegordon::grid::{Field, UniformGrid};
use sinegordon::rhs::SineGordonSystem;
use sinegordon::scenarios::{builtin_scenario, ScenarioSpec, SCENARIO_NAMES};
use sinegordon::spline::{apply_weights_x, WeightSet};
use sinegordon::ssprk::{SolverState, Ssprk54};

fn msg(e: sinegordon::Error) -> String {
    e.to_string()
}

/// Names of the built-in scenarios, newline separated.
#[wasm_bindgen]
pub fn scenario_names() -> String {
    SCENARIO_NAMES.join("\n")
}

#[wasm_bindgen]
pub fn describe(name: &str) -> Result<String, String> {
    Ok(builtin_scenario(name).map_err(msg)?.describe())
}

#[wasm_bindgen]
pub struct Simulation {
    spec: ScenarioSpec,
    sys: SineGordonSystem,
    rk: Ssprk54,
    y: Vec<f64>,
    t: f64,
    dt: f64,
}

#[wasm_bindgen]
impl Simulation {
    /// `dx` or `dt` that are not positive fall back to the scenario
    /// defaults.
    #[wasm_bindgen(constructor)]
    pub fn new(name: &str, dx: f64, dt: f64) -> Result<Simulation, String> {
        let mut spec = builtin_scenario(name).map_err(msg)?;
        if dx > 0.0 {
            spec.dx = dx;
            spec.dy = dx;
        }
        if dt > 0.0 {
            spec.dt = dt;
        }
        spec.validate().map_err(msg)?;
        let grid = spec.grid().map_err(msg)?;
        let sys = spec.system(&grid).map_err(msg)?;
        let s0 = spec.initial_state(&sys).map_err(msg)?;
        let y = sys.pack(&s0.u, &s0.v).map_err(msg)?;
        Ok(Simulation {
            dt: spec.dt,
            spec,
            sys,
            rk: Ssprk54::new(),
            y,
            t: 0.0,
        })
    }

    /// Takes `steps` time steps; returns the new time.
    pub fn advance(&mut self, steps: u32) -> Result<f64, String> {
        for _ in 0..steps {
            self.rk
                .step(&self.sys, self.t, self.dt, &mut self.y)
                .map_err(msg)?;
            self.t += self.dt;
        }
        Ok(self.t)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nx(&self) -> usize {
        self.sys.grid().nx
    }

    pub fn ny(&self) -> usize {
        self.sys.grid().ny
    }

    /// `sin(u/2)` row by row (`y` fixed, `x` varying), bottom row first.
    pub fn half_sine(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx(), self.ny());
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                out.push((0.5 * self.y[i * ny + j]).sin());
            }
        }
        out
    }

    pub fn energy(&self) -> Result<f64, String> {
        let s = self.state()?;
        let phi = self.spec.phi;
        Ok(discrete_energy(&s, self.sys.weights(), |_, _| phi)
            .map_err(msg)?
            .energy)
    }

    pub fn ring_radius(&self) -> Result<f64, String> {
        Ok(ring_radius(&self.state()?.u).radius)
    }

    /// Max-norm distance to the exact solution, or NaN when the scenario
    /// has none.
    pub fn exact_error(&self) -> Result<f64, String> {
        let s = self.state()?;
        match self.spec.exact_field(self.sys.grid(), self.t) {
            Some(exact) => Ok(error_norms(&s.u, &exact.map_err(msg)?).map_err(msg)?.l_inf),
            None => Ok(f64::NAN),
        }
    }
}

impl Simulation {
    fn state(&self) -> Result<SolverState, String> {
        let (u, v) = self.sys.unpack(&self.y).map_err(msg)?;
        Ok(SolverState { t: self.t, u, v })
    }
}

/// Max error of the first-derivative weights applied to `sin(k x)` on `n`
/// nodes over `[-7, 7]`, split as `[all nodes, nodes at least 8 from the
/// boundary]` (the second entry is NaN when the grid is too small).
#[wasm_bindgen]
pub fn derivative_error(n: usize, k: f64) -> Result<Vec<f64>, String> {
    let g = UniformGrid::new(-7.0, 7.0, -7.0, 7.0, n, 5).map_err(msg)?;
    let w = WeightSet::build(&g).map_err(msg)?;
    let f = Field::sample(&g, |x, _| (k * x).sin()).map_err(msg)?;
    let d = apply_weights_x(&w.w1x, &f).map_err(msg)?;
    let err = |i: usize| (d.get(i, 0) - k * (k * g.x(i)).cos()).abs();
    let all = (0..n).map(err).fold(0.0, f64::max);
    let deep = if n > 16 {
        (8..n - 8).map(err).fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    Ok(vec![all, deep])
}
