//! Time integration of the radial cubic equation.

use ballnls_core::eigenbasis::{sobolev_norm, SpectralField};
use ballnls_core::solver::{Scheme, Solver, SolverConfig};
use ballnls_core::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::config::{ModeSpec, Params, SchemeName};
use crate::error::{invalid, CliResult};
use crate::report::{Artifacts, Cell, Table};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const TRAJECTORY_HEADER: [&str; 8] = [
    "time", "mass", "energy", "h1_norm", "abs_c1", "abs_c2", "abs_c3", "abs_c4",
];

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSettings {
    pub k: usize,
    pub grid: usize,
    pub dt: f64,
    pub t_final: f64,
    pub scheme: SchemeName,
    pub focusing: bool,
    pub output_every: usize,
    pub modes: Vec<ModeSpec>,
}

impl SimulateSettings {
    pub fn resolve(p: &Params) -> CliResult<Self> {
        let k = p.k.unwrap_or(64);
        let modes = p.modes.clone().unwrap_or_else(|| {
            vec![
                ModeSpec {
                    k: 1,
                    re: 0.5,
                    im: 0.0,
                },
                ModeSpec {
                    k: 2,
                    re: 0.3,
                    im: 0.0,
                },
            ]
        });
        if let Some(m) = modes.iter().find(|m| m.k == 0 || m.k > k) {
            return Err(invalid!("mode {} lies outside 1..={k}", m.k));
        }
        Ok(Self {
            k,
            grid: p.grid.unwrap_or(4 * k),
            dt: p.dt.unwrap_or(1e-3),
            t_final: p.t_final.unwrap_or(1.0),
            scheme: p.scheme.unwrap_or(SchemeName::Strang),
            focusing: p.focusing.unwrap_or(false),
            output_every: p.output_every.unwrap_or(1),
            modes,
        })
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cutoff: self.k,
            grid_size: self.grid,
            dt: self.dt,
            t_final: self.t_final,
            scheme: match self.scheme {
                SchemeName::Strang => Scheme::Strang,
                SchemeName::Yoshida4 => Scheme::Yoshida4,
            },
            focusing: self.focusing,
            output_every: self.output_every,
        }
    }

    pub fn initial_field(&self) -> CliResult<SpectralField> {
        let modes: Vec<(usize, Complex64)> = self
            .modes
            .iter()
            .map(|m| (m.k, Complex64::new(m.re, m.im)))
            .collect();
        Ok(SpectralField::from_modes(self.k, &modes)?)
    }
}

pub fn run(s: &SimulateSettings) -> CliResult<Artifacts> {
    let solver = Solver::new(s.solver_config())?;
    let traj = solver.evolve(&s.initial_field()?)?;
    let mut table = Table::new(TRAJECTORY_FILE, &TRAJECTORY_HEADER);
    for st in &traj.states {
        let mut row: Vec<Cell> = vec![st.time.into(), st.mass.into(), st.energy.into()];
        row.push(sobolev_norm(&st.field, 1.0)?.into());
        row.extend((1..=4).map(|k| Cell::Real(st.field.coeff(k).norm())));
        table.push(row);
    }
    let last = traj.last();
    let results = json!({
        "steps": s.solver_config().steps(),
        "final_time": last.time,
        "initial_mass": traj.states[0].mass,
        "initial_energy": traj.states[0].energy,
        "mass_drift": traj.mass_drift,
        "energy_drift": traj.energy_drift,
    });
    Ok(Artifacts {
        tables: vec![table],
        documents: Vec::new(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_mode_bounds() {
        let s = SimulateSettings::resolve(&Params::default()).unwrap();
        assert_eq!((s.k, s.grid, s.dt, s.t_final), (64, 256, 1e-3, 1.0));
        let bad = Params {
            k: Some(4),
            modes: Some(vec![ModeSpec {
                k: 5,
                re: 1.0,
                im: 0.0,
            }]),
            ..Params::default()
        };
        assert!(SimulateSettings::resolve(&bad).is_err());
    }

    #[test]
    fn short_run_writes_one_row_per_recorded_state() {
        let p = Params {
            k: Some(8),
            dt: Some(1e-2),
            t_final: Some(0.05),
            ..Params::default()
        };
        let a = run(&SimulateSettings::resolve(&p).unwrap()).unwrap();
        assert_eq!(a.tables[0].rows.len(), 6);
        assert!(a.results["mass_drift"].as_f64().unwrap() < 1e-12);
    }
}
