mod common;

use common::{c, expm, pauli, scale};
use fcl_core::linalg::CMatrix;
use fcl_core::momentum::{
    build_grid, diagonalize_mode, mode_data, winding_closed_form, winding_number, Sector,
};
use fcl_core::{Complex64, ModelParams};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn params(j: f64, b: f64) -> ModelParams {
    ModelParams::new(j, b, 8).unwrap()
}

fn two_by_two(m: [[Complex64; 2]; 2]) -> CMatrix {
    CMatrix::from_rows(2, vec![m[0][0], m[0][1], m[1][0], m[1][1]]).unwrap()
}

/// Per-mode Floquet rotation by series exponentials, then its angle and axis.
fn mode_from_matrix_exponentials(k: f64, j: f64, b: f64) -> (f64, [f64; 3]) {
    let (x, z) = (two_by_two(pauli('X')), two_by_two(pauli('Z')));
    let kick = common::add(&scale(&z, c((2.0 * k).cos(), 0.0)), &scale(&x, c((2.0 * k).sin(), 0.0)));
    let u = expm(&scale(&kick, c(0.0, j))).matmul(&expm(&scale(&z, c(0.0, b)))).unwrap();
    // u = cos(eps) + i sin(eps) n.sigma
    let cos_eps = (u.trace() * 0.5).re;
    let eps = cos_eps.clamp(-1.0, 1.0).acos();
    let a = (u[(0, 1)] + u[(1, 0)]) * 0.5; // i sin(eps) n_x
    let bb = (u[(1, 0)] - u[(0, 1)]) * 0.5; // -sin(eps) n_y
    let d = (u[(0, 0)] - u[(1, 1)]) * 0.5; // i sin(eps) n_z
    (eps, [a.im, -bb.re, d.im])
}

#[test]
fn dispersion_matches_matrix_exponential_oracle() {
    for (k, j, b) in [(PI / 4.0, 0.6, 0.2), (0.3, 1.1, -0.4), (2.0, -0.8, 0.9), (-1.2, 0.25, 2.5)] {
        let mode = mode_data(k, &ModelParams::new(j, b, 8).unwrap());
        let (eps, m) = mode_from_matrix_exponentials(k, j, b);
        assert!((mode.epsilon - eps).abs() < 1e-10, "eps {} vs {}", mode.epsilon, eps);
        for i in 0..3 {
            assert!((mode.m[i] - m[i]).abs() < 1e-12, "m[{i}] {} vs {}", mode.m[i], m[i]);
        }
    }
}

#[test]
fn gap_closes_on_both_critical_lines() {
    for b in [0.3, 0.7 * FRAC_PI_2, 1.2] {
        // J = B: eps = 0 at k = +-pi/2.
        for k in [FRAC_PI_2, -FRAC_PI_2] {
            let mode = mode_data(k, &params(b, b));
            assert!(mode.epsilon.abs() < 1e-12 && mode.singular);
        }
        // J = pi - B: eps = pi at k = 0 and k = pi.
        for k in [0.0, PI] {
            let mode = mode_data(k, &params(PI - b, b));
            assert!((mode.epsilon - PI).abs() < 1e-7 && mode.singular);
        }
    }
    let mode = mode_data(0.0, &params(FRAC_PI_2, FRAC_PI_2));
    assert!((mode.epsilon - PI).abs() < 1e-12);
}

fn hermitian_oracle_eigen(h: [[Complex64; 2]; 2]) -> (f64, f64) {
    let m = nalgebra::Matrix2::new(h[0][0], h[0][1], h[1][0], h[1][1]);
    let e = m.symmetric_eigenvalues();
    let (a, b) = (e[0], e[1]);
    (a.min(b), a.max(b))
}

#[test]
fn bogoliubov_rotation_diagonalizes() {
    for (k, j, b) in [(PI / 4.0, 0.5, 0.3), (PI / 8.0, 1.0, 0.2), (0.9, -0.7, 1.9), (-2.4, 2.2, 0.1)] {
        let p = ModelParams::new(j, b, 8).unwrap();
        let mode = mode_data(k, &p);
        let d = diagonalize_mode(k, &p).unwrap();
        let n = mode.unit_axis().unwrap();
        let eps = mode.epsilon;
        let h = [
            [c(eps * n[2], 0.0), c(eps * n[0], -eps * n[1])],
            [c(eps * n[0], eps * n[1]), c(-eps * n[2], 0.0)],
        ];
        let (lo, hi) = hermitian_oracle_eigen(h);
        assert!((lo + eps).abs() < 1e-10 && (hi - eps).abs() < 1e-10);

        let r = two_by_two(d.r);
        let unit = r.adjoint().matmul(&r).unwrap();
        assert!(unit.max_abs_diff(&CMatrix::identity(2)) < 1e-12);
        let diag = r.adjoint().matmul(&two_by_two(h)).unwrap().matmul(&r).unwrap();
        assert!((diag[(0, 0)].re + eps).abs() < 1e-10);
        assert!((diag[(1, 1)].re - eps).abs() < 1e-10);
        assert!(diag[(0, 1)].norm() < 1e-10 && diag[(1, 0)].norm() < 1e-10);
    }
}

#[test]
fn winding_phase_diagram_agrees_with_closed_form() {
    let n = 50;
    for a in 0..n {
        for bidx in 0..n {
            let j = (a as f64 + 0.5) / n as f64 * FRAC_PI_2;
            let b = (bidx as f64 + 0.5) / n as f64 * FRAC_PI_2;
            if a == bidx {
                continue;
            }
            let p = params(j, b);
            let numeric = winding_number(&p, 128).unwrap();
            assert_eq!(numeric, winding_closed_form(&p).unwrap(), "J = {j}, B = {b}");
            assert!(numeric == 0 || numeric == 2);
        }
    }
}

#[test]
fn four_pi_phase_in_topological_phase() {
    // Accumulated phase of g over the grid sweep: 4 pi for J > B.
    let p = params(0.9 * FRAC_PI_2, 0.7 * FRAC_PI_2);
    let grid = build_grid(400, Sector::Even).unwrap().values;
    let mut total = 0.0;
    let mut prev = fcl_core::momentum::chiral_g(grid[grid.len() - 1] - 2.0 * PI, &p);
    for &k in &grid {
        let g = fcl_core::momentum::chiral_g(k, &p);
        total += (g * prev.conj()).arg();
        prev = g;
    }
    assert!((total - 4.0 * PI).abs() < 1e-9);
}

proptest! {
    #[test]
    fn dispersion_invariants(k in -PI..PI, j in -3.0f64..3.0, b in -3.0f64..3.0) {
        let p = params(j, b);
        let mode = mode_data(k, &p);
        let cos_expr = j.cos() * b.cos() - j.sin() * b.sin() * (2.0 * k).cos();
        prop_assert!((mode.epsilon.cos() - cos_expr).abs() < 1e-12);
        prop_assert!((0.0..=PI).contains(&mode.epsilon));
        prop_assert!((mode_data(-k, &p).epsilon - mode.epsilon).abs() < 1e-12);
        // m . A(B) = 0
        let dot = mode.m[0] * b.sin() - mode.m[1] * b.cos();
        prop_assert!(dot.abs() < 1e-10);
        if !mode.singular {
            prop_assert!((mode.axis_norm() - mode.epsilon.sin().abs()).abs() < 1e-10);
            let n = mode.unit_axis().unwrap();
            prop_assert!(((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn winding_stable_under_refinement(j in 0.05f64..1.5, b in 0.05f64..1.5, res in 64usize..300) {
        prop_assume!((j - b).abs() > 0.02);
        let p = params(j, b);
        let coarse = winding_number(&p, res).unwrap();
        prop_assert_eq!(coarse, winding_number(&p, 2 * res).unwrap());
        prop_assert_eq!(coarse, winding_closed_form(&p).unwrap());
    }

    #[test]
    fn winding_matches_closed_form_anywhere(j in -3.0f64..3.0, b in -3.0f64..3.0) {
        let p = params(j, b);
        let margin = ((j.sin() * b.cos()).abs() - (j.cos() * b.sin()).abs()).abs();
        prop_assume!(margin > 1e-3);
        prop_assert_eq!(winding_number(&p, 64).unwrap(), winding_closed_form(&p).unwrap());
    }

    #[test]
    fn rotation_unitary(k in -PI..PI, j in -3.0f64..3.0, b in -3.0f64..3.0) {
        let p = params(j, b);
        prop_assume!(!mode_data(k, &p).singular);
        let r = two_by_two(diagonalize_mode(k, &p).unwrap().r);
        let unit = r.adjoint().matmul(&r).unwrap();
        prop_assert!(unit.max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }
}
