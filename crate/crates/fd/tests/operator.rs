//! Properties of the assembled five-point operator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spiral_core::SpiralSpec;
use spiral_fd::lanczos::{largest_eigenpairs, LanczosOptions};
use spiral_fd::laplacian::dot;
use spiral_fd::{assemble_laplacian, build_grid, GridDomain};

fn spiral_operator() -> spiral_fd::Laplacian {
    let spec = SpiralSpec::pure(1.0).unwrap();
    assemble_laplacian(&build_grid(&spec, 1.0 / 8.0, 26.0).unwrap())
}

#[test]
fn constant_vector_is_annihilated_away_from_the_boundary() {
    let grid = GridDomain::unit_square(1.0 / 16.0).unwrap();
    let op = assemble_laplacian(&grid);
    let ones = vec![1.0; op.dim()];
    let mut y = vec![0.0; op.dim()];
    op.apply(&ones, &mut y);
    let mut checked = 0;
    for (k, nb) in op.neighbors.iter().enumerate() {
        if nb.iter().all(|&n| n != spiral_fd::laplacian::NO_NEIGHBOR) {
            assert!(y[k].abs() <= 16.0 * f64::EPSILON * op.inv_h2());
            checked += 1;
        } else {
            assert!(y[k] > 0.0);
        }
    }
    assert_eq!(checked, 13 * 13);
}

#[test]
fn operator_is_symmetric() {
    let op = spiral_operator();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = op.dim();
    let (mut ax, mut ay) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..100 {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        op.apply(&x, &mut ax);
        op.apply(&y, &mut ay);
        let (l, r) = (dot(&ax, &y), dot(&x, &ay));
        assert!((l - r).abs() <= 1e-12 * l.abs().max(r.abs()));
    }
}

#[test]
fn spectrum_lies_below_gershgorin_bound() {
    let op = assemble_laplacian(&GridDomain::disk(1.0 / 16.0, 1.0).unwrap());
    let bound = op.gershgorin_bound();
    assert_eq!(bound, 8.0 * 256.0);
    let top = largest_eigenpairs(op.dim(), |x, y| op.apply(x, y), |_, _| true, LanczosOptions::new(1, 3)).unwrap();
    assert!(top.values[0] <= bound && top.values[0] > 0.5 * bound);
}

#[test]
fn matvec_is_positive_definite_on_random_vectors() {
    let op = spiral_operator();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ax = vec![0.0; op.dim()];
    for _ in 0..10 {
        let x: Vec<f64> = (0..op.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        op.apply(&x, &mut ax);
        assert!(dot(&x, &ax) > 0.0);
    }
}
