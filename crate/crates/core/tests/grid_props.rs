use proptest::prelude::*;
use solverlab_core::grid::{fill_ghosts, init_cell_averages, lengths_from_edges, remap_to_reference, shifted_edges, Profile};
use solverlab_core::{BoundaryCondition, GridSpec};

fn field(values: &[f64]) -> Vec<[f64; 1]> {
    values.iter().map(|&v| [v]).collect()
}

proptest! {
    #[test]
    fn periodic_remap_conserves(values in prop::collection::vec(-5.0f64..5.0, 4..40), frac in -0.99f64..0.99) {
        let n = values.len();
        let grid = GridSpec::new(0.0, 1.0, n).unwrap();
        let f = field(&values);
        let out = remap_to_reference(&f, &grid, frac * grid.dx, BoundaryCondition::Periodic).unwrap();
        let (a, b): (f64, f64) = (values.iter().sum(), out.iter().map(|u| u[0]).sum());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn remap_keeps_constants(c in -3.0f64..3.0, n in 3usize..30, frac in -0.99f64..0.99) {
        let grid = GridSpec::new(-1.0, 2.0, n).unwrap();
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::transmissive(), BoundaryCondition::walls()] {
            let out = remap_to_reference(&vec![[c]; n], &grid, frac * grid.dx, bc).unwrap();
            prop_assert!(out.iter().all(|u| (u[0] - c).abs() <= 1e-13 * (1.0 + c.abs())));
        }
    }

    #[test]
    fn walls_keep_the_domain(n in 2usize..50, frac in -0.99f64..0.99) {
        let grid = GridSpec::new(0.0, 3.0, n).unwrap();
        let edges = shifted_edges(&grid, frac * grid.dx, BoundaryCondition::walls());
        prop_assert_eq!(edges[0], 0.0);
        prop_assert_eq!(edges[n], 3.0);
        let total: f64 = lengths_from_edges(&edges).iter().sum();
        prop_assert!((total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn piecewise_constant_averages_are_exact(x0 in 0.01f64..0.99, l in -2.0f64..2.0, r in -2.0f64..2.0) {
        let grid = GridSpec::new(0.0, 1.0, 37).unwrap();
        let profile = Profile::piecewise_constant(vec![x0], vec![[l], [r]]).unwrap();
        let cells = init_cell_averages(&profile, &grid.edges());
        let mass: f64 = cells.iter().map(|u| u[0] * grid.dx).sum();
        prop_assert!((mass - (l * x0 + r * (1.0 - x0))).abs() < 1e-13);
    }
}

#[test]
fn ghost_patterns() {
    let cells = [1, 2, 3];
    assert_eq!(fill_ghosts(&cells, BoundaryCondition::Periodic, 2, |u| *u, None), vec![2, 3, 1, 2, 3, 1, 2]);
    assert_eq!(fill_ghosts(&cells, BoundaryCondition::walls(), 2, |u| -u, None), vec![-2, -1, 1, 2, 3, -3, -2]);
    assert_eq!(fill_ghosts(&cells, BoundaryCondition::transmissive(), 2, |u| -u, None), vec![1, 1, 1, 2, 3, 3, 3]);
    assert_eq!(fill_ghosts(&cells, BoundaryCondition::far_field(), 1, |u| *u, Some(&(7, 9))), vec![7, 1, 2, 3, 9]);
}
