//! Eigensolver validation on shapes with known spectra.

use std::f64::consts::PI;

use spiral_fd::{assemble_laplacian, lowest_eigenvalues, GridDomain, Oracle, SolverOptions};

/// First zero of the Bessel function J₀ by Newton iteration on its power series.
fn bessel_j0_first_zero() -> f64 {
    let j0 = |x: f64| {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..60 {
            term *= -(x * x) / (4.0 * (k * k) as f64);
            sum += term;
        }
        sum
    };
    let j1 = |x: f64| {
        let (mut term, mut sum) = (x / 2.0, x / 2.0);
        for k in 1..60 {
            term *= -(x * x) / (4.0 * (k * (k + 1)) as f64);
            sum += term;
        }
        sum
    };
    let mut x = 2.4;
    for _ in 0..20 {
        x += j0(x) / j1(x);
    }
    x
}

fn square_lambda1(h: f64) -> f64 {
    let op = assemble_laplacian(&GridDomain::unit_square(h).unwrap());
    lowest_eigenvalues(&op, 1, &SolverOptions::default()).unwrap().eigenvalues[0]
}

#[test]
fn unit_square_ground_state() {
    let exact = 2.0 * PI * PI;
    let l = square_lambda1(1.0 / 64.0);
    assert!((l / exact - 1.0).abs() < 5e-3, "λ₁ = {l}");
    // The five-point eigenvalue is known in closed form.
    let h = 1.0 / 64.0;
    let discrete = 8.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
    assert!((l - discrete).abs() < 1e-9 * discrete);
}

#[test]
fn richardson_extrapolation_on_square() {
    let exact = 2.0 * PI * PI;
    let coarse = square_lambda1(1.0 / 32.0);
    let fine = square_lambda1(1.0 / 64.0);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    assert!((extrapolated / exact - 1.0).abs() < 5e-4, "{extrapolated}");
    assert!((extrapolated - exact).abs() < (fine - exact).abs());
}

#[test]
fn unit_disk_ground_state() {
    let j = bessel_j0_first_zero();
    assert!((j - 2.404_825_557_695_773).abs() < 1e-12);
    let op = assemble_laplacian(&GridDomain::disk(1.0 / 128.0, 1.0).unwrap());
    let l = lowest_eigenvalues(&op, 1, &SolverOptions::default()).unwrap().eigenvalues[0];
    assert!((l / (j * j) - 1.0).abs() < 1e-2, "λ₁ = {l}");
}

#[test]
fn square_spectrum_is_ordered_with_small_residuals() {
    let op = assemble_laplacian(&GridDomain::unit_square(1.0 / 32.0).unwrap());
    let r = lowest_eigenvalues(&op, 6, &SolverOptions::default()).unwrap();
    assert_eq!(r.eigenvalues.len(), 6);
    assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!(r.residuals.iter().all(|&x| x <= 1e-8));
    // Separable spectrum π²(m² + n²) with multiplicities 1, 2, 1, 2.
    let h = 1.0 / 32.0;
    let mode = |m: f64| 4.0 / (h * h) * (m * PI * h / 2.0).sin().powi(2);
    let expected = [
        2.0 * mode(1.0),
        mode(1.0) + mode(2.0),
        mode(1.0) + mode(2.0),
        2.0 * mode(2.0),
        mode(1.0) + mode(3.0),
        mode(1.0) + mode(3.0),
    ];
    for (got, want) in r.eigenvalues.iter().zip(expected) {
        assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
    }
}

#[test]
fn inertia_counts_eigenvalues_below_a_shift() {
    let op = assemble_laplacian(&GridDomain::unit_square(1.0 / 32.0).unwrap());
    let oracle = Oracle::new(&op);
    let h = 1.0 / 32.0;
    let mode = |m: f64| 4.0 / (h * h) * (m * PI * h / 2.0).sin().powi(2);
    assert_eq!(oracle.count_below(2.0 * mode(1.0) - 1.0).unwrap(), 0);
    assert_eq!(oracle.count_below(2.0 * mode(1.0) + 1.0).unwrap(), 1);
    assert_eq!(oracle.count_below(mode(1.0) + mode(2.0) + 1.0).unwrap(), 3);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let op = assemble_laplacian(&GridDomain::disk(1.0 / 48.0, 1.0).unwrap());
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| lowest_eigenvalues(&op, 3, &SolverOptions::default()).unwrap())
    };
    let a = run(1);
    let b = run(3);
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() <= 1e-12 * x);
    }
    assert_eq!(run(1), a);
}
