//! Isothermal Euler equations `p = c^2 rho` and their in-cell reconstruction.

use crate::error::{Result, SolverError};
use crate::model::{mixture_distance, strictly_inside, Decision, Model, RecOptions, Variant, Wave};
use crate::real::Real;
use crate::recon::crossing_flux;
use crate::riemann::{iso_star, sample_iso, IsoState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isothermal<T> {
    /// Sound speed.
    pub c: T,
}

impl<T: Real> Isothermal<T> {
    pub fn new(c: T) -> Self {
        Self { c }
    }
}

/// Wave family to reconstruct between two neighbours.
///
/// Density ties with decreasing velocity count as a 2-shock.
pub fn detect_wave_iso<T: Real>(left: IsoState<T>, right: IsoState<T>) -> Wave {
    if left.u > right.u {
        if left.rho < right.rho {
            Wave::Shock1
        } else {
            Wave::Shock2
        }
    } else {
        Wave::None
    }
}

/// Candidate states and shock speed for the cell between `prev` and `next`.
pub fn candidates_iso<T: Real>(
    prev: IsoState<T>,
    mid: IsoState<T>,
    next: IsoState<T>,
    c: T,
) -> Result<(Wave, IsoState<T>, IsoState<T>, T)> {
    let wave = detect_wave_iso(prev, next);
    if wave == Wave::None {
        return Ok((wave, mid, mid, T::zero()));
    }
    let star = iso_star(prev, next, c)?;
    let s = IsoState::new(star.rho_star, star.u_star);
    Ok(match wave {
        Wave::Shock1 => (wave, prev, s, prev.u - c * (star.rho_star / prev.rho).sqrt()),
        _ => (wave, s, next, next.u + c * (star.rho_star / next.rho).sqrt()),
    })
}

/// Density and momentum distances from the cell's left edge.
pub fn distances_iso<T: Real>(bar_l: IsoState<T>, mid: IsoState<T>, bar_r: IsoState<T>, dx: T) -> (Option<T>, Option<T>) {
    let (l, m, r) = (bar_l.conserved(), mid.conserved(), bar_r.conserved());
    (mixture_distance(l[0], m[0], r[0], dx), mixture_distance(l[1], m[1], r[1], dx))
}

pub fn accept_iso<T: Real>(variant: Variant, d_rho: Option<T>, d_q: Option<T>, dx: T) -> bool {
    strictly_inside(d_rho, dx) && (variant == Variant::Half || strictly_inside(d_q, dx))
}

/// Full reconstruction decision for one cell.
pub fn decide_iso<T: Real>(
    prev: &[T; 2],
    mid: &[T; 2],
    next: &[T; 2],
    h: T,
    c: T,
    variant: Variant,
) -> Result<Decision<T, 2>> {
    let (p, m, n) = (IsoState::from_conserved(prev), IsoState::from_conserved(mid), IsoState::from_conserved(next));
    let (wave, bl, br, sigma) = candidates_iso(p, m, n, c)?;
    if wave == Wave::None {
        return Ok(Decision::rejected(*mid, sigma));
    }
    let (d_rho, d_q) = distances_iso(bl, m, br, h);
    if !accept_iso(variant, d_rho, d_q, h) {
        return Ok(Decision { wave, ..Decision::rejected(*mid, sigma) });
    }
    Ok(Decision { wave, accepted: true, left: bl.conserved(), right: br.conserved(), sigma, dist: [d_rho, d_q] })
}

/// Two-component time-averaged flux at the crossed interface.
pub fn iso_interface_flux<T: Real>(dec: &Decision<T, 2>, v_mesh: T, dt: T, dx: T, c: T) -> [T; 2] {
    let model = Isothermal::new(c);
    crossing_flux(|u| model.flux(u), dec, v_mesh, dt, dx)
}

impl<T: Real> Model<T, 2> for Isothermal<T> {
    #[inline]
    fn flux(&self, u: &[T; 2]) -> [T; 2] {
        let q = u[1];
        [q, q * q / u[0] + self.c * self.c * u[0]]
    }

    fn wave_speeds(&self, u: &[T; 2]) -> (T, T) {
        let v = u[1] / u[0];
        (v - self.c, v + self.c)
    }

    fn check(&self, cell: usize, u: &[T; 2]) -> Result<()> {
        if u[0] > T::zero() && u[1].is_finite() {
            Ok(())
        } else {
            Err(SolverError::Positivity { cell, rho: u[0].as_f64(), e: f64::NAN })
        }
    }

    fn mirror(&self, u: &[T; 2]) -> [T; 2] {
        [u[0], -u[1]]
    }

    fn godunov_flux(&self, left: &[T; 2], right: &[T; 2]) -> Result<[T; 2]> {
        let (l, r) = (IsoState::from_conserved(left), IsoState::from_conserved(right));
        let star = iso_star(l, r, self.c)?;
        Ok(self.flux(&sample_iso(l, r, &star, self.c, T::zero()).conserved()))
    }

    fn reconstruct(&self, prev: &[T; 2], mid: &[T; 2], next: &[T; 2], h: T, opts: &RecOptions<T>) -> Result<Decision<T, 2>> {
        if !opts.enabled {
            return Ok(Decision::rejected(*mid, T::zero()));
        }
        decide_iso(prev, mid, next, h, self.c, opts.variant)
    }

    /// `rho u^2 / 2 + c^2 rho ln rho`.
    fn entropy(&self, u: &[T; 2]) -> T {
        T::half() * u[1] * u[1] / u[0] + self.c * self.c * u[0] * u[0].ln()
    }

    fn to_primitive(&self, u: &[T; 2]) -> [T; 2] {
        [u[0], u[1] / u[0]]
    }

    fn from_primitive(&self, w: &[T; 2]) -> [T; 2] {
        [w[0], w[0] * w[1]]
    }
}
