use proptest::prelude::*;

use softguide::analysis::{
    count_discrete, essential_threshold, r_nu, strength_factor, GridSpec, Level,
};
use softguide::eigensolve::{dense_lowest_k, lowest_k, SymTridiagonal};
use softguide::geometry::{Curve, Point2};
use softguide::operator2d::export::{read_sgw1, write_sgw1};
use softguide::operator2d::{assemble, sample_potential, BoundaryCondition, Grid2D};
use softguide::sparse::SymCsr;
use softguide::transverse1d::{double_well_ground, single_well_ground, TransverseProfile};

fn curve() -> impl Strategy<Value = Curve> {
    (0.2f64..2.0, 0.0f64..1.5, 0.5f64..5.0)
        .prop_map(|(rho, beta, tail)| Curve::bookcover(rho, beta, tail).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fermi_round_trip(c in curve(), t in -1.0f64..1.0, w in -0.95f64..0.95) {
        let total = c.s0() + c.tail_length();
        let (s, u) = (t * total, w * c.rho());
        let p = c.point_at(s, u);
        let (f, _) = c.nearest(p);
        prop_assert!((f.s - s).abs() < 1e-9 * (1.0 + total), "s {} vs {}", f.s, s);
        prop_assert!((f.u - u).abs() < 1e-9 * (1.0 + total), "u {} vs {}", f.u, u);
    }

    #[test]
    fn unit_speed(c in curve(), t in -1.0f64..1.0) {
        let s = t * (c.s0() + c.tail_length());
        let tan = c.tangent(s);
        prop_assert!((tan.x.hypot(tan.y) - 1.0).abs() < 1e-14);
        let d = 1e-6;
        let (a, b) = (c.point_at(s - d, 0.0), c.point_at(s + d, 0.0));
        prop_assert!((a.dist(b) / (2.0 * d) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn normal_offset_is_distance(c in curve(), t in -1.0f64..1.0, w in -0.95f64..0.95) {
        let s = t * (c.s0() + c.tail_length());
        let u = w * c.rho();
        let p = c.point_at(s, u);
        prop_assert!((p.dist(c.point_at(s, 0.0)) - u.abs()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tridiagonal_count_brackets_eigenvalues(
        diag in prop::collection::vec(-5.0f64..5.0, 2..40),
        seed in 0u64..1000,
    ) {
        let n = diag.len();
        let off: Vec<f64> = (0..n - 1).map(|i| ((i as u64 * 7919 + seed) % 97) as f64 / 50.0 - 1.0).collect();
        let t = SymTridiagonal::new(diag, off).unwrap();
        let ev = t.lowest(n).unwrap();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        for (i, &e) in ev.iter().enumerate() {
            prop_assert!(t.count_below(e - 1e-9) <= i);
            prop_assert!(t.count_below(e + 1e-9) > i);
        }
    }

    #[test]
    fn lanczos_matches_dense(n in 30usize..120, seed in 0u64..10_000) {
        // random sparse symmetric matrix with a banded pattern
        let mut trip = Vec::new();
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            trip.push((i, i, 4.0 + next()));
            for d in [1, 3, 7] {
                if i + d < n {
                    let v = next();
                    trip.push((i, i + d, v));
                    trip.push((i + d, i, v));
                }
            }
        }
        let a = SymCsr::from_triplets(n, &trip).unwrap();
        let k = 5;
        let it = lowest_k(&a, k, 1e-10, 20_000).unwrap();
        let de = dense_lowest_k(&a, k).unwrap();
        for (x, y) in it.eigenvalues.iter().zip(&de.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
        prop_assert!(it.max_residual() <= 1e-10);
    }

    #[test]
    fn sgw1_round_trip(nx in 2usize..20, ny in 2usize..20, scale in -1e3f64..1e3) {
        let g = Grid2D::new(-1.0, 2.0, 0.0, 3.0, nx, ny).unwrap();
        let v: Vec<f64> = (0..g.len()).map(|i| scale * (i as f64).sin()).collect();
        let mut buf = Vec::new();
        write_sgw1(&mut buf, &g, &v).unwrap();
        let (g2, v2) = read_sgw1(buf.as_slice()).unwrap();
        prop_assert_eq!(g2, g);
        prop_assert_eq!(v2, v);
    }

    #[test]
    fn strength_factor_between_poly2_and_square(e in 1u32..20, a in 0.01f64..2.0) {
        let p = TransverseProfile::poly_well(2 * e, a, 1.0).unwrap();
        let s = strength_factor(&p).unwrap();
        prop_assert!(s >= a / 2.0 - 1e-15);
        prop_assert!(s < 2.0 * a / std::f64::consts::PI);
    }

    #[test]
    fn r_nu_nonpositive_when_level_below_double_well(
        eps in -10.0f64..-1.0, gap in 0.0f64..1.0, eta in 0.01f64..2.0, l in 1e-3f64..100.0, beta in 0.01f64..1.0,
    ) {
        prop_assert!(r_nu(eps - gap, eps, eta, l, beta) <= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn double_well_lies_below_single_and_rises_with_rho(
        e in 1u32..5, depth in 50.0f64..400.0, r1 in 0.12f64..0.5, dr in 0.02f64..0.3,
    ) {
        let p = TransverseProfile::poly_well(2 * e, 0.1, depth).unwrap();
        let single = single_well_ground(&p).unwrap().energy;
        let a = double_well_ground(&p, r1).unwrap().energy;
        let b = double_well_ground(&p, r1 + dr).unwrap().energy;
        // separated wells are degenerate up to the extrapolation error
        let tol = 1e-8 * single.abs();
        prop_assert!(a < b + tol, "{a} {b}");
        prop_assert!(b < single + tol, "{b} {single}");
        let closed = essential_threshold(&p, depth, r1, 0.0).unwrap();
        let open = essential_threshold(&p, depth, r1, 0.1).unwrap();
        prop_assert!(closed.threshold < open.threshold);
    }

    #[test]
    fn neumann_spectrum_below_dirichlet(
        rho in 0.15f64..0.4, beta in 0.0f64..0.6, depth in 20.0f64..300.0,
    ) {
        let c = Curve::bookcover(rho, beta, 0.6).unwrap();
        let p = TransverseProfile::poly_well(2, 0.1, depth).unwrap();
        let g = Grid2D::with_spacing(c.leftmost_x() - 0.3, 0.6, -rho - 0.5, rho + 0.5, 0.05).unwrap();
        let f = sample_potential(&c, &p, depth, &g).unwrap();
        let d = lowest_k(assemble(&f, BoundaryCondition::Dirichlet).unwrap().matrix(), 4, 1e-7, 20_000).unwrap();
        let n = lowest_k(assemble(&f, BoundaryCondition::Neumann).unwrap().matrix(), 4, 1e-7, 20_000).unwrap();
        for (x, y) in n.eigenvalues.iter().zip(&d.eigenvalues) {
            prop_assert!(x <= &(y + 1e-7), "N {x} > D {y}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn count_lower_never_exceeds_count_upper(rho in 0.15f64..0.35, depth in 150.0f64..400.0) {
        let c = Curve::bookcover(rho, 0.0, 1.5).unwrap();
        let p = TransverseProfile::poly_well(2, 0.1, 1.0).unwrap();
        let spec = GridSpec::new(0.025).with_pad(0.5);
        match count_discrete(&c, &p, depth, &spec, Level::Threshold, None) {
            Ok(r) => prop_assert!(r.count_lower <= r.count_upper),
            Err(softguide::Error::Inconclusive(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn point_far_outside_projects_onto_nearest_piece() {
    let c = Curve::bookcover(1.0, 0.4, 3.0).unwrap();
    let (f, _) = c.nearest(Point2::new(-5.0, 0.0));
    assert!(f.s.abs() < 1e-12);
    assert!((f.u - (5.0 + c.leftmost_x())).abs() < 1e-12);
}
