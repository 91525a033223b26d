//! Scalar convex conservation laws (Burgers as the concrete flux).

use crate::error::Result;
use crate::grid::{BoundaryCondition, GridSpec};
use crate::model::{mixture_distance, Decision, Model, RecOptions, Wave};
use crate::real::Real;
use crate::recon::{crossing_flux, moving_step, Fallback, MeshStep, MovingScheme};

/// A convex flux `f` with derivative `f'`.
pub trait ConvexFlux<T: Real>: Clone + Send + Sync {
    fn f(&self, u: T) -> T;
    fn df(&self, u: T) -> T;
    /// Point where `f'` vanishes (minimum of `f`).
    fn sonic_point(&self) -> T;
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Burgers;

impl<T: Real> ConvexFlux<T> for Burgers {
    #[inline]
    fn f(&self, u: T) -> T {
        T::half() * u * u
    }
    #[inline]
    fn df(&self, u: T) -> T {
        u
    }
    fn sonic_point(&self) -> T {
        T::zero()
    }
}

pub fn burgers_flux<T: Real>(u: T) -> T {
    Burgers.f(u)
}

/// Rankine-Hugoniot speed, falling back to `f'` for coincident states.
pub fn shock_speed<T: Real, F: ConvexFlux<T>>(flux: &F, ul: T, ur: T) -> T {
    if ul == ur {
        flux.df(ul)
    } else {
        (flux.f(ul) - flux.f(ur)) / (ul - ur)
    }
}

/// In-cell reconstruction of the middle value of a triplet.
pub fn reconstruct_scalar<T: Real, F: ConvexFlux<T>>(prev: T, mid: T, next: T, dx: T, flux: &F) -> Decision<T, 1> {
    let d = mixture_distance(prev, mid, next, dx);
    match d {
        Some(d) if d > T::zero() && d < dx && prev > next => Decision {
            wave: Wave::Shock,
            accepted: true,
            left: [prev],
            right: [next],
            sigma: shock_speed(flux, prev, next),
            dist: [Some(d)],
        },
        _ => Decision::rejected([mid], flux.df(mid)),
    }
}

/// Time-averaged flux through the interface crossed by the reconstruction.
pub fn scalar_interface_flux<T: Real, F: ConvexFlux<T>>(dec: &Decision<T, 1>, v_mesh: T, dt: T, dx: T, flux: &F) -> T {
    crossing_flux(|u| [flux.f(u[0])], dec, v_mesh, dt, dx)[0]
}

/// Exact Riemann flux at `x/t = 0` for a convex flux.
pub fn godunov_scalar_flux<T: Real, F: ConvexFlux<T>>(ul: T, ur: T, flux: &F) -> T {
    if ul <= ur {
        let s = flux.sonic_point();
        if ul <= s && s <= ur {
            flux.f(s)
        } else {
            flux.f(ul).min(flux.f(ur))
        }
    } else {
        flux.f(ul).max(flux.f(ur))
    }
}

/// Exact solution of the isentropic compression test.
pub fn exact_compression<T: Real>(t: T, x: T) -> T {
    let three = T::lit(3.0);
    if t < T::one() {
        let head = -three + three * t;
        let tail = -T::one() + t;
        if x <= head {
            three
        } else if x >= tail {
            T::one()
        } else {
            three - (x - head) / (T::one() - t)
        }
    } else if x <= T::two() * (t - T::one()) {
        three
    } else {
        T::one()
    }
}

/// Scalar conservation law `u_t + f(u)_x = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScalarLaw<F> {
    pub flux: F,
}

impl<F> ScalarLaw<F> {
    pub fn new(flux: F) -> Self {
        Self { flux }
    }
}

pub type BurgersModel = ScalarLaw<Burgers>;

impl<T: Real, F: ConvexFlux<T>> Model<T, 1> for ScalarLaw<F> {
    #[inline]
    fn flux(&self, u: &[T; 1]) -> [T; 1] {
        [self.flux.f(u[0])]
    }

    fn wave_speeds(&self, u: &[T; 1]) -> (T, T) {
        let s = self.flux.df(u[0]);
        (s, s)
    }

    fn check(&self, cell: usize, u: &[T; 1]) -> Result<()> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err(crate::error::SolverError::Positivity { cell, rho: u[0].as_f64(), e: f64::NAN })
        }
    }

    fn mirror(&self, u: &[T; 1]) -> [T; 1] {
        [-u[0]]
    }

    fn godunov_flux(&self, left: &[T; 1], right: &[T; 1]) -> Result<[T; 1]> {
        Ok([godunov_scalar_flux(left[0], right[0], &self.flux)])
    }

    fn reconstruct(&self, prev: &[T; 1], mid: &[T; 1], next: &[T; 1], h: T, opts: &RecOptions<T>) -> Result<Decision<T, 1>> {
        if !opts.enabled {
            return Ok(Decision::rejected(*mid, self.flux.df(mid[0])));
        }
        Ok(reconstruct_scalar(prev[0], mid[0], next[0], h, &self.flux))
    }

    fn entropy(&self, u: &[T; 1]) -> T {
        T::half() * u[0] * u[0]
    }

    fn to_primitive(&self, u: &[T; 1]) -> [T; 1] {
        *u
    }

    fn from_primitive(&self, w: &[T; 1]) -> [T; 1] {
        *w
    }
}

/// One reconstruction step (Lax-Friedrichs fallback) on the reference grid.
pub fn scalar_step<T: Real, F: ConvexFlux<T>>(
    field: &[T],
    dt: T,
    dx: T,
    v_mesh: T,
    flux: &F,
    bc: BoundaryCondition,
) -> Result<Vec<T>> {
    let n = field.len();
    let grid = GridSpec::new(T::zero(), dx * T::from_usize(n).unwrap(), n)?;
    let grid = GridSpec { dx, ..grid };
    let cells: Vec<[T; 1]> = field.iter().map(|&u| [u]).collect();
    let scheme = MovingScheme { rec: Some(RecOptions::new(Default::default(), T::lit(0.5))), fallback: Fallback::Lxf };
    let mesh = MeshStep { offset: T::zero(), v_mesh, dt };
    let (out, _) = moving_step(&ScalarLaw::new(flux.clone()), &cells, &grid, bc, None, mesh, &scheme)?;
    Ok(out.into_iter().map(|u| u[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn burgers_values() {
        assert_eq!(burgers_flux(0.0), 0.0);
        assert_eq!(burgers_flux(3.0), 4.5);
        assert_eq!(burgers_flux(-2.0), 2.0);
    }

    #[test]
    fn reconstruction_examples() {
        let d = reconstruct_scalar(3.0, 2.0, 1.0, 1.0, &Burgers);
        assert!(d.accepted);
        assert_eq!(d.dist[0], Some(0.5));
        assert_eq!((d.left[0], d.right[0], d.sigma), (3.0, 1.0, 2.0));

        let d = reconstruct_scalar(1.0, 2.0, 3.0, 1.0, &Burgers);
        assert!(!d.accepted);
        assert_eq!(d.sigma, 2.0);

        assert!(!reconstruct_scalar(2.0, 2.0, 2.0, 1.0, &Burgers).accepted);

        let d = reconstruct_scalar(3.0, 2.5, 1.0, 1.0, &Burgers);
        assert!(d.accepted);
        assert_eq!(d.dist[0], Some(0.75));
        assert_eq!(d.sigma, 2.0);
    }

    #[test]
    fn interface_flux_examples() {
        let dec = reconstruct_scalar(3.0, 2.0, 1.0, 1.0, &Burgers);
        let f = scalar_interface_flux(&dec, -3.0, 0.3, 1.0, &Burgers);
        assert_relative_eq!(f, (0.1 * 3.5 + 0.2 * 13.5) / 0.3, epsilon = 1e-13);

        // Crossing time 0.5 / 5 = 0.1 > dt: near state only.
        let f = scalar_interface_flux(&dec, -3.0, 0.05, 1.0, &Burgers);
        assert_eq!(f, 0.5 + 3.0);

        let rej = reconstruct_scalar(1.0, 2.0, 3.0, 1.0, &Burgers);
        assert_eq!(scalar_interface_flux(&rej, 2.5, 0.1, 1.0, &Burgers), 2.0 - 2.5 * 2.0);

        // Shock riding the interface.
        let f = scalar_interface_flux(&dec, 2.0, 0.3, 1.0, &Burgers);
        assert_eq!(f, 4.5 - 2.0 * 3.0);
    }

    #[test]
    fn godunov_examples() {
        assert_eq!(godunov_scalar_flux(2.0, 2.0, &Burgers), 2.0);
        assert_eq!(godunov_scalar_flux(3.0, 1.0, &Burgers), 4.5);
        assert_eq!(godunov_scalar_flux(-1.0, 1.0, &Burgers), 0.0);
        assert_eq!(godunov_scalar_flux(-1.0, -3.0, &Burgers), 4.5);
    }

    #[test]
    fn compression_examples() {
        assert_eq!(exact_compression(0.0, -5.0), 3.0);
        assert_eq!(exact_compression(1.0, 0.5), 1.0);
        assert_eq!(exact_compression(1.0, -0.5), 3.0);
        assert_relative_eq!(exact_compression(0.5, -1.0), 2.0, epsilon = 1e-15);
        assert_eq!(exact_compression(0.5, -2.0), 3.0);
    }

    #[test]
    fn uniform_field_is_steady() {
        let out = scalar_step(&[1.5; 8], 0.05, 0.25, -1.5, &Burgers, BoundaryCondition::Periodic).unwrap();
        assert!(out.iter().all(|&u| u == 1.5));
    }
}
