//! Experiment dispatch. Every experiment yields named output files whose
//! bytes depend only on the configuration.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use softguide::analysis::{
    bound_state, closing_sweep, count_discrete, critical_sweep, essential_threshold,
    sgamma_spectrum, square_well_levels, strong_ess_check, Level,
};
use softguide::eigensolve::lowest_k;
use softguide::geometry::Curve;
use softguide::operator2d::export::{write_csv, write_sgw1};
use softguide::operator2d::{assemble_masked_strip, BoundaryCondition, Grid2D};
use softguide::transverse1d::{
    converged_ground, delta_ground, double_delta_ground, solve_double_well, solve_line,
    solve_single_well, EndCondition, LineGrid, LinePotential, ProfileKind, Sampling,
    TransverseProfile, REFINEMENT,
};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;

/// Output of one experiment.
pub struct Outcome {
    /// `(file name, bytes)`, written in this order.
    pub files: Vec<(String, Vec<u8>)>,
    /// Convergence diagnostics copied into the run record.
    pub diagnostics: Value,
}

/// A CSV table with a mandatory header; floats as 17 significant digits.
pub struct Table {
    text: String,
}

pub enum Cell {
    Int(i64),
    Float(f64),
    Text(&'static str),
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            text: format!("{}\n", columns.join(",")),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let parts: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => format!("{:.16e}", v + 0.0),
                Cell::Text(s) => s.to_string(),
            })
            .collect();
        self.text.push_str(&parts.join(","));
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("result serializes");
    out.push(b'\n');
    out
}

fn profile(cfg: &ExperimentConfig) -> Result<TransverseProfile, CliError> {
    cfg.profile()
        .ok_or_else(|| CliError::Validation("profile: cannot be constructed".into()))
}

fn curve(cfg: &ExperimentConfig) -> Result<Curve, CliError> {
    let g = cfg
        .geometry
        .as_ref()
        .ok_or_else(|| CliError::Validation("geometry: required".into()))?;
    Ok(Curve::bookcover(g.rho, g.beta, g.tail_length)?)
}

fn sweep(cfg: &ExperimentConfig) -> &crate::config::SweepConfig {
    cfg.sweep.as_ref().expect("validated")
}

fn bc_name(bc: BoundaryCondition) -> &'static str {
    match bc {
        BoundaryCondition::Dirichlet => "dirichlet",
        BoundaryCondition::Neumann => "neumann",
    }
}

pub fn run(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    match cfg.experiment {
        Experiment::Solve1d => solve1d(cfg, hash),
        Experiment::Solve2d => solve2d(cfg, hash),
        Experiment::Critical => critical(cfg, hash),
        Experiment::SweepBeta => sweep_beta(cfg, hash),
        Experiment::SweepWidth => sweep_width(cfg, hash),
        Experiment::StrongEss => strong_ess(cfg, hash),
        Experiment::DirichletStrip => dirichlet_strip(cfg, hash),
        Experiment::Sgamma => sgamma(cfg, hash),
    }
}

fn eigen_table(rows: &[(f64, f64)]) -> Vec<u8> {
    let mut t = Table::new(&["index", "eigenvalue", "residual"]);
    for (i, (e, r)) in rows.iter().enumerate() {
        t.row(&[Cell::Int(i as i64), Cell::Float(*e), Cell::Float(*r)]);
    }
    t.into_bytes()
}

fn solve1d(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let double = cfg
        .geometry
        .as_ref()
        .filter(|g| g.beta == 0.0)
        .map(|g| g.rho);
    let k = cfg.numeric.k;
    let (energy, rows, extra) = if p.kind() == ProfileKind::DeltaPoint {
        let e = match double {
            Some(rho) => double_delta_ground(p.depth(), rho)?,
            None => delta_ground(p.depth())?,
        };
        (e, vec![(e, 0.0)], json!({"method": "closed_form"}))
    } else if let (Some(n), Some(l)) = (cfg.numeric.n, cfg.numeric.half_length) {
        let s = match double {
            Some(rho) => solve_double_well(&p, rho, l, n, k)?,
            None => solve_single_well(&p, l, n, k)?,
        };
        let rows: Vec<(f64, f64)> = s.iter().map(|e| (e.energy, e.residual)).collect();
        (
            rows[0].0,
            rows,
            json!({"method": "single_grid", "n": n, "half_length": l}),
        )
    } else {
        let pot = match double {
            Some(rho) => LinePotential::double(p, rho)?,
            None => LinePotential::single(p)?,
        };
        let level = converged_ground(&pot)?;
        let finest = LineGrid::symmetric(level.half_length, REFINEMENT[2], EndCondition::Dirichlet);
        let s = solve_line(&pot, &finest, Sampling::HatAverage, k)?;
        let rows = s.iter().map(|e| (e.energy, e.residual)).collect();
        let extra = json!({
            "method": "richardson",
            "runs": level.runs,
            "order": level.order,
            "half_length": level.half_length,
            "eta": level.eta,
            "dn_gap": level.dn_gap,
        });
        (level.energy, rows, extra)
    };
    let result = json!({
        "experiment": "solve1d",
        "config_hash": hash,
        "energy": energy,
        "eigenvalues": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        "details": extra,
    });
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("eigenvalues.csv".into(), eigen_table(&rows)),
        ],
        diagnostics: json!({"max_residual": worst, "dn_gap": extra.get("dn_gap")}),
    })
}

fn solve2d(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let (c, p) = (curve(cfg)?, profile(cfg)?);
    let spec = cfg.grid_spec();
    let depth = p.depth();
    let count = count_discrete(&c, &p, depth, &spec, Level::Threshold, None)?;
    let state = bound_state(&c, &p, depth, &spec, BoundaryCondition::Dirichlet)?;
    let mut spectrum = Table::new(&["bc", "index", "eigenvalue"]);
    for (bc, values) in [
        (BoundaryCondition::Dirichlet, &count.dirichlet),
        (BoundaryCondition::Neumann, &count.neumann),
    ] {
        for (i, e) in values.iter().enumerate() {
            spectrum.row(&[
                Cell::Text(bc_name(bc)),
                Cell::Int(i as i64),
                Cell::Float(*e),
            ]);
        }
    }
    let mut sgw = Vec::new();
    write_sgw1(&mut sgw, &state.grid, &state.values)?;
    let mut csv = Vec::new();
    write_csv(&mut csv, &state.grid, &state.values)?;
    let result = json!({
        "experiment": "solve2d",
        "config_hash": hash,
        "threshold": count.threshold,
        "count_lower": count.count_lower,
        "count_upper": count.count_upper,
        "margin": count.margin,
        "level_dirichlet": count.level_dirichlet,
        "level_neumann": count.level_neumann,
        "lowest_dirichlet": state.eigenvalue,
        "below_threshold": state.eigenvalue < count.level_dirichlet - count.margin,
        "peak": state.peak,
        "grid": state.grid,
        "pad": count.pad,
    });
    let dn_gap = match (count.dirichlet.first(), count.neumann.first()) {
        (Some(d), Some(n)) => d - n,
        _ => f64::NAN,
    };
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("spectrum.csv".into(), spectrum.into_bytes()),
            ("eigenfunction.sgw1".into(), sgw),
            ("eigenfunction.csv".into(), csv),
        ],
        diagnostics: json!({"max_residual": count.max_residual.max(state.residual), "dn_gap": dn_gap}),
    })
}

fn critical(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let s = sweep(cfg);
    let a = cfg.profile.as_ref().and_then(|p| p.a).expect("validated");
    let tail = cfg.geometry.as_ref().map_or(3.0, |g| g.tail_length);
    let mut cases = Vec::new();
    for &e in &s.exponents {
        for &r in &s.a_over_rho {
            cases.push((r, e));
        }
    }
    let [lo, hi] = s.strength_bracket.expect("validated");
    let entries = critical_sweep(
        a,
        &cases,
        (lo, hi),
        s.rel_tol.expect("validated"),
        tail,
        &cfg.grid_spec(),
    )?;
    let mut t = Table::new(&[
        "a_over_rho",
        "exponent",
        "critical_depth",
        "sqrt_depth_times_A",
        "dn_gap",
    ]);
    let mut worst_band: f64 = 0.0;
    for e in &entries {
        worst_band = worst_band.max(e.report.band);
        t.row(&[
            Cell::Float(e.a_over_rho),
            Cell::Int(e.exponent as i64),
            Cell::Float(e.report.critical_depth),
            Cell::Float(e.report.dimensionless),
            Cell::Float(e.report.band),
        ]);
    }
    let result = json!({"experiment": "critical", "config_hash": hash, "entries": entries});
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("critical.csv".into(), t.into_bytes()),
        ],
        diagnostics: json!({"dn_gap": worst_band}),
    })
}

fn sweep_beta(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let g = cfg.geometry.as_ref().expect("validated");
    let s = sweep(cfg);
    let depth = p.depth();
    let nu = match (s.nu, s.nu_fraction) {
        (Some(nu), _) => nu,
        (None, Some(f)) => {
            // any beta > 0 yields the single-well level
            let open = essential_threshold(&p, depth, g.rho, 0.1)?.threshold;
            let closed = essential_threshold(&p, depth, g.rho, 0.0)?.threshold;
            closed + f * (open - closed)
        }
        _ => unreachable!("validated"),
    };
    let sw = closing_sweep(
        &p,
        depth,
        g.rho,
        g.tail_length,
        &s.betas,
        nu,
        &cfg.grid_spec(),
    )?;
    let mut t = Table::new(&[
        "beta",
        "nu",
        "count_lower",
        "count_upper",
        "variational_n_nu",
    ]);
    let mut worst: f64 = 0.0;
    for e in &sw.entries {
        worst = worst.max(e.count.max_residual);
        t.row(&[
            Cell::Float(e.beta),
            Cell::Float(nu),
            Cell::Int(e.count.count_lower as i64),
            Cell::Int(e.count.count_upper as i64),
            Cell::Int(e.bound.n_nu as i64),
        ]);
    }
    let result = json!({"experiment": "sweep_beta", "config_hash": hash, "nu": nu, "sweep": sw});
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("beta_sweep.csv".into(), t.into_bytes()),
        ],
        diagnostics: json!({"max_residual": worst}),
    })
}

fn sweep_width(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let depth = p.depth();
    let rhos = &sweep(cfg).rhos;
    let single = essential_threshold(&p, depth, rhos[0], 0.5)?;
    let mut t = Table::new(&["rho", "eps_rho", "eps_single", "gap", "eta"]);
    let mut rows = Vec::new();
    for &rho in rhos {
        let r = essential_threshold(&p, depth, rho, 0.0)?;
        t.row(&[
            Cell::Float(rho),
            Cell::Float(r.threshold),
            Cell::Float(single.threshold),
            Cell::Float(single.threshold - r.threshold),
            Cell::Float(r.eta),
        ]);
        rows.push(r);
    }
    let worst = rows.iter().map(|r| r.tolerance).fold(0.0, f64::max);
    let result =
        json!({"experiment": "sweep_width", "config_hash": hash, "single": single, "double": rows});
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("width_sweep.csv".into(), t.into_bytes()),
        ],
        diagnostics: json!({"richardson_spread": worst}),
    })
}

fn strong_ess(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let rho = cfg.geometry.as_ref().expect("validated").rho;
    let rows = strong_ess_check(&p, p.depth(), rho, &sweep(cfg).lambdas)?;
    let mut t = Table::new(&["lambda", "energy", "delta"]);
    for r in &rows {
        t.row(&[
            Cell::Float(r.lambda),
            Cell::Float(r.energy),
            Cell::Float(r.delta),
        ]);
    }
    let result = json!({"experiment": "strong_ess", "config_hash": hash, "rows": rows});
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("strong_ess.csv".into(), t.into_bytes()),
        ],
        diagnostics: json!({}),
    })
}

fn dirichlet_strip(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let (c, p) = (curve(cfg)?, profile(cfg)?);
    let a = p.a();
    let target = (PI / (2.0 * a)).powi(2);
    let (sin_half, cos_half) = (0.5 * c.beta()).sin_cos();
    let (xmax, ymax) = (
        c.tail_length() * cos_half,
        c.rho() + c.tail_length() * sin_half + a,
    );
    let mut t = Table::new(&["h", "eigenvalue", "free_strip_threshold"]);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &h in &cfg.numeric.h_list {
        let g = Grid2D::with_spacing(
            c.leftmost_x() - a - 2.0 * h,
            xmax,
            -ymax - 2.0 * h,
            ymax + 2.0 * h,
            h,
        )?;
        let op = assemble_masked_strip(&c, &p, p.depth(), &g)?;
        let r = lowest_k(
            op.matrix(),
            1,
            cfg.numeric.tol * op.matrix().norm_inf(),
            20_000,
        )?;
        worst = worst.max(r.max_residual());
        t.row(&[
            Cell::Float(h),
            Cell::Float(r.eigenvalues[0]),
            Cell::Float(target),
        ]);
        rows.push(json!({"h": h, "eigenvalue": r.eigenvalues[0], "dim": op.dim()}));
    }
    let result = json!({"experiment": "dirichlet_strip", "config_hash": hash, "target": target, "rows": rows});
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("dirichlet_strip.csv".into(), t.into_bytes()),
        ],
        diagnostics: json!({"max_residual": worst}),
    })
}

fn sgamma(cfg: &ExperimentConfig, hash: &str) -> Result<Outcome, CliError> {
    let c = curve(cfg)?;
    let e = sgamma_spectrum(&c, cfg.numeric.k)?;
    let r = c.arc_radius();
    let oracle = square_well_levels(c.s0(), 0.25 / (r * r))?;
    let mut t = Table::new(&["index", "eigenvalue", "oracle"]);
    for (i, v) in e.iter().enumerate() {
        t.row(&[
            Cell::Int(i as i64),
            Cell::Float(*v),
            Cell::Float(oracle.get(i).copied().unwrap_or(f64::NAN)),
        ]);
    }
    let deviation = e
        .iter()
        .zip(&oracle)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let result =
        json!({"experiment": "sgamma", "config_hash": hash, "eigenvalues": e, "oracle": oracle});
    Ok(Outcome {
        files: vec![
            ("result.json".into(), json_bytes(&result)),
            ("sgamma.csv".into(), t.into_bytes()),
        ],
        diagnostics: json!({"oracle_deviation": deviation}),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_format() {
        let mut t = Table::new(&["index", "eigenvalue"]);
        t.row(&[Cell::Int(0), Cell::Float(-1.0)]);
        assert_eq!(
            String::from_utf8(t.into_bytes()).unwrap(),
            "index,eigenvalue\n0,-1.0000000000000000e0\n"
        );
    }

    #[test]
    fn delta_solve() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "solve1d", "profile": {"kind": "delta_point", "depth": 2.0}}"#,
        )
        .unwrap();
        let out = run(&cfg, "h").unwrap();
        let v: Value = serde_json::from_slice(&out.files[0].1).unwrap();
        assert_eq!(v["energy"], json!(-1.0));
    }
}
