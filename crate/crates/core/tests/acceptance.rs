//! Acceptance suite: one PASS/FAIL line per criterion. Arguments that parse
//! as criterion numbers restrict the run to those criteria.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use softguide::analysis::{
    bound_state, closing_sweep, count_discrete, critical_sweep, linear_fit, square_well_levels,
    strong_ess_check, weak_coupling_slope, GridSpec, Level,
};
use softguide::eigensolve::{dense_lowest_k, lowest_k, SymTridiagonal};
use softguide::geometry::Curve;
use softguide::operator2d::{
    assemble, assemble_masked_strip, sample_potential, BoundaryCondition, Grid2D, StraightLine,
};
use softguide::sparse::SymCsr;
use softguide::transverse1d::{
    delta_ground, double_delta_ground, double_well_ground, single_well_ground, TransverseProfile,
};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn book_profile() -> TransverseProfile {
    TransverseProfile::poly_well(2, 0.1, 225.0).unwrap()
}

fn delta_closed_forms() -> Outcome {
    for (alpha, e) in [(0.5, -0.0625), (1.0, -0.25), (2.0, -1.0), (4.0, -4.0)] {
        let got = delta_ground(alpha).map_err(|e| e.to_string())?;
        check(got == e, || {
            format!("delta_ground({alpha}) = {got}, expected {e}")
        })?;
    }
    let d = double_delta_ground(2.0, 50.0).map_err(|e| e.to_string())?;
    check((d + 1.0).abs() <= 1e-10, || {
        format!("double_delta_ground(2, 50) = {d}")
    })?;
    Ok(format!("double_delta_ground(2, 50) + 1 = {:.1e}", d + 1.0))
}

fn square_well_oracle() -> Outcome {
    let p = TransverseProfile::square_well(1.0, 1.0).unwrap();
    let c = single_well_ground(&p).map_err(|e| e.to_string())?;
    let exact = square_well_levels(1.0, 1.0).map_err(|e| e.to_string())?[0];
    let err = (c.energy - exact).abs();
    check(err <= 1e-6, || {
        format!("energy {} vs root {exact}", c.energy)
    })?;
    Ok(format!(
        "energy {:.12} root {exact:.12} error {err:.1e} order {:.2}",
        c.energy, c.order
    ))
}

fn threshold_monotonicity() -> Outcome {
    let p = book_profile();
    let single = single_well_ground(&p).map_err(|e| e.to_string())?.energy;
    let rhos = [0.15, 0.2, 0.25, 0.35, 0.5, 1.0];
    let e: Vec<f64> = rhos
        .iter()
        .map(|&r| double_well_ground(&p, r).map(|c| c.energy))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(e.windows(2).all(|w| w[0] < w[1]), || {
        format!("not increasing: {e:?}")
    })?;
    check(e.iter().all(|&x| x < single), || {
        format!("not below single {single}: {e:?}")
    })?;
    let gaps: Vec<f64> = e.iter().map(|x| single - x).collect();
    check(gaps.windows(2).all(|w| w[1] < w[0]), || {
        format!("gaps not shrinking: {gaps:?}")
    })?;
    Ok(format!(
        "eps_rho from {:.6} to {:.6}, single {single:.6}",
        e[0], e[5]
    ))
}

fn closed_book_bound_state() -> Outcome {
    let c = Curve::bookcover(0.25, 0.0, 2.0).unwrap();
    let p = book_profile();
    let spec = GridSpec::new(0.1 / 8.0);
    let r =
        count_discrete(&c, &p, 225.0, &spec, Level::Threshold, None).map_err(|e| e.to_string())?;
    check(r.count_lower == r.count_upper && r.count_lower >= 1, || {
        format!("counts {}/{}", r.count_lower, r.count_upper)
    })?;
    check(r.dirichlet[0] < r.level_dirichlet - r.margin, || {
        format!(
            "lowest Dirichlet {} vs level {}",
            r.dirichlet[0], r.level_dirichlet
        )
    })?;
    let b = bound_state(&c, &p, 225.0, &spec, BoundaryCondition::Dirichlet)
        .map_err(|e| e.to_string())?;
    check(b.peak.x < 0.0, || format!("peak at {:?}", b.peak))?;
    Ok(format!(
        "count {}/{}, eps1(D) {:.6} below level {:.6} by {:.4}, peak at ({:.4}, {:.4})",
        r.count_lower,
        r.count_upper,
        r.dirichlet[0],
        r.level_dirichlet,
        r.level_dirichlet - r.dirichlet[0],
        b.peak.x,
        b.peak.y
    ))
}

fn dn_bracketing() -> Outcome {
    let p = book_profile();
    let mut gaps = Vec::new();
    // padding doubles on every truncated side, the tails included
    for (tail, pad) in [(2.0, 0.5), (4.0, 1.0)] {
        let c = Curve::bookcover(0.25, 0.0, tail).unwrap();
        let spec = GridSpec::new(0.1 / 8.0).with_pad(pad);
        let r = count_discrete(&c, &p, 225.0, &spec, Level::Threshold, None)
            .map_err(|e| e.to_string())?;
        let (d, n) = (r.dirichlet[0], r.neumann[0]);
        check(n <= d, || format!("eps1(N) {n} > eps1(D) {d}"))?;
        gaps.push(d - n);
    }
    check(gaps[1] * 2.0 <= gaps[0], || format!("gaps {gaps:?}"))?;
    Ok(format!(
        "gap {:.3e} -> {:.3e} (x{:.1})",
        gaps[0],
        gaps[1],
        gaps[0] / gaps[1]
    ))
}

/// Neumann-onset critical `sqrt(depth) A` frozen from the first converged
/// sweep (a = 0.1, tail 3, h = a/6), per exponent over
/// `a/rho = 0.2 ..= 0.6`.
const CRITICAL_RATIOS: [f64; 5] = [0.2, 0.3, 0.4, 0.5, 0.6];
const CRITICAL_FROZEN: [(u32, [f64; 5]); 2] = [
    (2, [0.34497, 0.44509, 0.54132, 0.64367, 0.75665]),
    (8, [0.34497, 0.44509, 0.55574, 0.67174, 0.80396]),
];

fn critical_strength_curve() -> Outcome {
    let mut cases = Vec::new();
    for (e, _) in CRITICAL_FROZEN {
        for r in CRITICAL_RATIOS {
            cases.push((r, e));
        }
    }
    let spec = GridSpec::new(0.1 / 6.0);
    let entries =
        critical_sweep(0.1, &cases, (0.3, 1.2), 0.01, 3.0, &spec).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for (e, frozen) in CRITICAL_FROZEN {
        let p = TransverseProfile::poly_well(e, 0.1, 1.0).unwrap();
        let row: Vec<_> = entries.iter().filter(|x| x.exponent == e).collect();
        let s: Vec<f64> = row.iter().map(|x| x.report.dimensionless).collect();
        // the plotted ordinate is -sqrt(lambda*) A
        check(s.windows(2).all(|w| -w[1] < -w[0]), || {
            format!("exp {e}: -sqrt(lambda*)A not decreasing: {s:?}")
        })?;
        for (x, f) in row.iter().zip(frozen) {
            let band = x.report.dimensionless_band(&p).map_err(|e| e.to_string())?;
            check(
                (x.report.dimensionless - f).abs() <= band.max(0.0) + 0.01 * f,
                || {
                    format!(
                        "exp {e}, a/rho {}: {} vs frozen {f} (band {band})",
                        x.a_over_rho, x.report.dimensionless
                    )
                },
            )?;
        }
        lines.push(format!(
            "exp {e}: {}",
            s.iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    Ok(lines.join("; "))
}

fn closing_the_book() -> Outcome {
    let p = book_profile();
    let rho = 0.15;
    let eps_v = single_well_ground(&p).map_err(|e| e.to_string())?.energy;
    let eps_rho = double_well_ground(&p, rho)
        .map_err(|e| e.to_string())?
        .energy;
    let nu = eps_rho + 0.9 * (eps_v - eps_rho);
    let betas = [0.4, 0.2, 0.1];
    let sweep = closing_sweep(&p, 225.0, rho, 4.0, &betas, nu, &GridSpec::new(0.1 / 8.0))
        .map_err(|e| e.to_string())?;
    let counts: Vec<(usize, usize)> = sweep
        .entries
        .iter()
        .map(|e| (e.count.count_lower, e.count.count_upper))
        .collect();
    let lower: Vec<usize> = counts.iter().map(|c| c.0).collect();
    check(lower.windows(2).all(|w| w[1] >= w[0]), || {
        format!("counts {counts:?}")
    })?;
    check(lower[2] >= 2 * counts[0].1, || {
        format!("count(0.1) < 2 count(0.4): {counts:?}")
    })?;
    for e in &sweep.entries {
        check(e.bound.n_nu <= e.count.count_upper, || {
            format!(
                "beta {}: n_nu {} > count_upper {}",
                e.beta, e.bound.n_nu, e.count.count_upper
            )
        })?;
    }
    check(lower == [1, 1, 2], || {
        format!("frozen counts [1, 1, 2], got {lower:?}")
    })?;
    let n: Vec<usize> = sweep.entries.iter().map(|e| e.bound.n_nu).collect();
    Ok(format!(
        "nu {nu:.4}, counts {counts:?} at beta {betas:?}, n_nu {n:?}"
    ))
}

fn weak_coupling() -> Outcome {
    let c = Curve::bookcover(0.25, 0.0, 8.0).unwrap();
    let p = book_profile();
    let r = count_discrete(
        &c,
        &p,
        0.02 * 225.0,
        &GridSpec::new(0.05),
        Level::Threshold,
        None,
    )
    .map_err(|e| e.to_string())?;
    check(r.count_lower == 0 && r.count_upper == 0, || {
        format!("counts {}/{}", r.count_lower, r.count_upper)
    })?;
    let mut detail = format!(
        "depth 4.5: counts 0/0, eps1(N) - level {:.4}",
        r.neumann[0] - r.level_neumann
    );
    for w in [TransverseProfile::square_well(1.0, 1.0).unwrap(), p] {
        let s = weak_coupling_slope(&w, &[1e-2]).map_err(|e| e.to_string())?[0];
        check(s.relative_error <= 0.1, || format!("{w:?}: {s:?}"))?;
        detail.push_str(&format!(", slope error {:.2e}", s.relative_error));
    }
    Ok(detail)
}

fn strong_ditch() -> Outcome {
    let lambdas = [50.0, 100.0, 200.0, 400.0];
    let rows =
        strong_ess_check(&book_profile(), 225.0, 0.25, &lambdas).map_err(|e| e.to_string())?;
    let d: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    check(d.windows(2).all(|w| w[1] < w[0]), || {
        format!("Delta not decreasing: {d:?}")
    })?;
    let x: Vec<f64> = lambdas.iter().map(|l: &f64| l.sqrt()).collect();
    let y: Vec<f64> = d.iter().map(|v| v.ln()).collect();
    let fit = linear_fit(&x, &y).map_err(|e| e.to_string())?;
    check(fit.slope < 0.0, || format!("slope {}", fit.slope))?;
    Ok(format!(
        "Delta {:.4e} -> {:.4e}, log-slope {:.4}",
        d[0], d[3], fit.slope
    ))
}

fn dirichlet_strip() -> Outcome {
    let a = 0.1;
    let c = Curve::bookcover(0.25, 0.0, 1.0).unwrap();
    let free = TransverseProfile::square_well(a, 0.0).unwrap();
    let mut e = Vec::new();
    for div in [10.0, 20.0, 40.0] {
        let h = a / div;
        let g = Grid2D::with_spacing(c.leftmost_x() - a - 0.05, 1.0, -0.4, 0.4, h).unwrap();
        let op = assemble_masked_strip(&c, &free, 0.0, &g).map_err(|e| e.to_string())?;
        let r = lowest_k(op.matrix(), 1, 1e-11 * op.matrix().norm_inf(), 20_000)
            .map_err(|e| e.to_string())?;
        e.push(r.eigenvalues[0]);
    }
    let target = (PI / (2.0 * a)).powi(2);
    let drift = (e[2] - e[1]).abs();
    check(target - e[2] > drift, || {
        format!("eigenvalues {e:?}, (pi/2a)^2 = {target}")
    })?;
    Ok(format!(
        "eps1 {:.4} below (pi/2a)^2 = {target:.4} by {:.4}, drift {drift:.4}",
        e[2],
        target - e[2]
    ))
}

fn eigensolver_oracle() -> Outcome {
    let mut ops: Vec<(&str, SymCsr)> = Vec::new();
    let n = 1000;
    let h = 1.0 / n as f64;
    ops.push((
        "1D chain",
        SymTridiagonal::new(vec![2.0 / (h * h); n - 1], vec![-1.0 / (h * h); n - 2])
            .map(|t| SymCsr::tridiagonal(t.diag(), t.off()))
            .unwrap(),
    ));
    let p = book_profile();
    let c = Curve::bookcover(0.25, 0.0, 0.5).unwrap();
    let g = Grid2D::with_spacing(-0.6, 0.5, -0.6, 0.6, 0.04).unwrap();
    let f = sample_potential(&c, &p, 225.0, &g).unwrap();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        ops.push(("bookcover well", assemble(&f, bc).unwrap().matrix().clone()));
    }
    let gs = Grid2D::with_spacing(0.0, 1.0, -0.5, 0.5, 0.04).unwrap();
    let fs = sample_potential(&StraightLine { y0: 0.0 }, &p, 225.0, &gs).unwrap();
    ops.push((
        "straight well",
        assemble(&fs, BoundaryCondition::Neumann)
            .unwrap()
            .matrix()
            .clone(),
    ));
    let free = TransverseProfile::square_well(0.1, 0.0).unwrap();
    let gm = Grid2D::with_spacing(-0.4, 0.5, -0.4, 0.4, 0.1 / 6.0).unwrap();
    ops.push((
        "masked strip",
        assemble_masked_strip(&c, &free, 0.0, &gm)
            .unwrap()
            .matrix()
            .clone(),
    ));

    let mut worst: f64 = 0.0;
    for (name, a) in &ops {
        check(a.dim() <= 4000, || format!("{name}: dimension {}", a.dim()))?;
        let tol = 1e-10 * a.norm_inf();
        let k = 6;
        let it = lowest_k(a, k, tol, 20_000).map_err(|e| format!("{name}: {e}"))?;
        let de = dense_lowest_k(a, k).map_err(|e| format!("{name}: {e}"))?;
        for (x, y) in it.eigenvalues.iter().zip(&de.eigenvalues) {
            worst = worst.max((x - y).abs());
            check((x - y).abs() <= 1e-8, || {
                format!("{name} (dim {}): {x} vs {y}", a.dim())
            })?;
        }
        check(it.max_residual() <= tol, || {
            format!("{name}: residual {} > {tol}", it.max_residual())
        })?;
    }
    Ok(format!(
        "{} operators, worst deviation {worst:.1e}",
        ops.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "delta closed forms", delta_closed_forms),
        (2, "1D oracle match", square_well_oracle),
        (3, "threshold monotonicity", threshold_monotonicity),
        (4, "closed-book bound state", closed_book_bound_state),
        (5, "D/N bracketing", dn_bracketing),
        (6, "critical strength curve", critical_strength_curve),
        (7, "closing the book", closing_the_book),
        (8, "weak coupling", weak_coupling),
        (9, "strong ditch", strong_ditch),
        (10, "Dirichlet strip", dirichlet_strip),
        (11, "eigensolver oracle", eigensolver_oracle),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
