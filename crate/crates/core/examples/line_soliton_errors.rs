//! Errors of the line-soliton run against its exact solution.
//!
//! `cargo run --release -p sinegordon --example line_soliton_errors [dx]`

use sinegordon::prelude::*;

fn main() -> sinegordon::Result<()> {
    let mut spec = builtin_scenario("line-soliton-exact")?;
    if let Some(h) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        spec.dx = h;
        spec.dy = h;
    }
    let grid = spec.grid()?;
    let sys = spec.system(&grid)?;
    let state0 = spec.initial_state(&sys)?;
    let start = std::time::Instant::now();
    let (_, snaps) = integrate(&sys, &state0, spec.dt, spec.t_end, &spec.snapshot_times)?;
    println!("grid {}x{}, dt {}", grid.nx, grid.ny, spec.dt);
    println!("{:>4} {:>12} {:>12}", "t", "L_inf", "RMS");
    for s in &snaps {
        let exact = spec.exact_field(&grid, s.t).expect("has exact solution")?;
        let r = error_norms(&s.u, &exact)?;
        println!("{:>4} {:>12.4e} {:>12.4e}", s.t, r.l_inf, r.rms);
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
