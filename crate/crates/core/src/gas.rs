//! Ideal-gas Euler equations and their prospective in-cell reconstruction.

use crate::error::{Result, SolverError};
use crate::model::{mixture_distance, strictly_inside, Decision, Model, RecOptions, Selection, Variant, Wave};
use crate::real::Real;
use crate::recon::crossing_flux;
use crate::riemann::{gas_star, sample_gas, GasState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGas<T> {
    pub gamma: T,
}

impl<T: Real> IdealGas<T> {
    pub fn new(gamma: T) -> Self {
        Self { gamma }
    }

    #[inline]
    pub fn pressure(&self, u: &[T; 3]) -> T {
        (self.gamma - T::one()) * (u[2] - T::half() * u[1] * u[1] / u[0])
    }

    /// Specific internal energy `E / rho - u^2 / 2`.
    #[inline]
    pub fn internal_energy(&self, u: &[T; 3]) -> T {
        (u[2] - T::half() * u[1] * u[1] / u[0]) / u[0]
    }

    pub fn state(&self, u: &[T; 3]) -> GasState<T> {
        GasState::from_conserved(u, self.gamma)
    }
}

fn rh_speed<T: Real>(l: &[T; 3], r: &[T; 3], fallback: T) -> T {
    let den = r[0] - l[0];
    if den == T::zero() {
        fallback
    } else {
        (r[1] - l[1]) / den
    }
}

/// Shock candidates from the sign pattern of `(u, rho, p)` between the
/// neighbours.
fn shock_pattern<T: Real>(prev: &GasState<T>, next: &GasState<T>) -> (bool, bool) {
    let compressive = prev.u >= next.u;
    (
        compressive && prev.rho <= next.rho && prev.p <= next.p,
        compressive && prev.rho >= next.rho && prev.p >= next.p,
    )
}

fn star_sides<T: Real>(prev: GasState<T>, next: GasState<T>, gamma: T) -> Result<(GasState<T>, GasState<T>)> {
    let st = gas_star(prev, next, gamma)?;
    Ok((
        GasState::new(st.rho_star_l, st.u_star, st.p_star),
        GasState::new(st.rho_star_r, st.u_star, st.p_star),
    ))
}

/// One-shot wave selection with the strength criterion.
pub fn select_wave_full<T: Real>(
    prev: GasState<T>,
    next: GasState<T>,
    c_cfl: T,
    gamma: T,
) -> Result<(Wave, GasState<T>, GasState<T>, T)> {
    let (sl, sr) = star_sides(prev, next, gamma)?;
    let jump_1 = (prev.rho - sl.rho).abs();
    let jump_2 = (sl.rho - sr.rho).abs();
    let jump_3 = (sr.rho - next.rho).abs();
    let (one, three) = shock_pattern(&prev, &next);
    let shock = |bl: GasState<T>, br: GasState<T>, wave| {
        let sigma = rh_speed(&bl.conserved(gamma), &br.conserved(gamma), sl.u);
        (wave, bl, br, sigma)
    };
    Ok(if one && jump_1 > c_cfl * jump_2.max(jump_3) {
        shock(prev, sl, Wave::Shock1)
    } else if three && jump_3 > c_cfl * jump_2.max(jump_1) {
        shock(sr, next, Wave::Shock3)
    } else if jump_2 > c_cfl * jump_1.max(jump_3) {
        (Wave::Contact, sl, sr, sl.u)
    } else {
        (Wave::None, prev, next, T::zero())
    })
}

/// Mass, momentum and energy distances from the cell's left edge.
pub fn distances_full<T: Real>(bar_l: &GasState<T>, mid: &[T; 3], bar_r: &GasState<T>, dx: T, gamma: T) -> [Option<T>; 3] {
    let (l, r) = (bar_l.conserved(gamma), bar_r.conserved(gamma));
    std::array::from_fn(|k| mixture_distance(l[k], mid[k], r[k], dx))
}

/// Monotonicity up to roundoff, so that equal neighbours (a contact's
/// velocity) do not reject a middle value computed from a star state.
fn monotone<T: Real>(a: T, b: T, c: T) -> bool {
    let tol = T::lit(64.0) * T::epsilon() * (a.abs() + b.abs() + c.abs());
    (a <= b + tol && b <= c + tol) || (a + tol >= b && b + tol >= c)
}

/// Acceptance tests: distances in range, monotone density and velocity
/// triplets, positive internal energy on every piece of the cell.
#[allow(clippy::too_many_arguments)]
pub fn accept_full<T: Real>(
    prev: &[T; 3],
    mid: &[T; 3],
    next: &[T; 3],
    left: &[T; 3],
    right: &[T; 3],
    dist: &[Option<T>; 3],
    dx: T,
    variant: Variant,
) -> bool {
    let [d_rho, d_q, d_e] = *dist;
    if !(strictly_inside(d_rho, dx) && strictly_inside(d_e, dx)) {
        return false;
    }
    if variant == Variant::Full && !strictly_inside(d_q, dx) {
        return false;
    }
    if !monotone(prev[0], mid[0], next[0]) {
        return false;
    }
    let d_u = if strictly_inside(d_q, dx) { d_q.unwrap() } else { d_rho.unwrap() };
    let u_rec = (d_u * left[1] / left[0] + (dx - d_u) * right[1] / right[0]) / dx;
    if !monotone(prev[1] / prev[0], u_rec, next[1] / next[0]) {
        return false;
    }
    let clamp = |d: Option<T>| d.map(|d| d.max(T::zero()).min(dx));
    let mut cuts: Vec<T> = dist.iter().filter_map(|&d| clamp(d)).collect();
    cuts.push(T::zero());
    cuts.push(dx);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Slivers from distances that agree up to roundoff carry no mass.
    let sliver = T::lit(64.0) * T::epsilon() * dx;
    cuts.windows(2).filter(|w| w[1] - w[0] > sliver).all(|w| {
        let x = T::half() * (w[0] + w[1]);
        let s: [T; 3] = std::array::from_fn(|k| match clamp(dist[k]) {
            Some(d) if x >= d => right[k],
            _ => left[k],
        });
        s[0] > T::zero() && s[2] - T::half() * s[1] * s[1] / s[0] > T::zero()
    })
}

/// Reconstruction decision for one gas cell.
pub fn decide_full<T: Real>(
    prev: &[T; 3],
    mid: &[T; 3],
    next: &[T; 3],
    h: T,
    gamma: T,
    opts: &RecOptions<T>,
) -> Result<Decision<T, 3>> {
    let (p, n) = (GasState::from_conserved(prev, gamma), GasState::from_conserved(next, gamma));
    let (wave, bl, br, sigma) = match opts.selection {
        Selection::OneShot => select_wave_full(p, n, opts.c_cfl, gamma)?,
        Selection::TwoShot => {
            let (sl, sr) = star_sides(p, n, gamma)?;
            let d = distances_full(&sl, mid, &sr, h, gamma);
            if strictly_inside(d[0], h) && strictly_inside(d[2], h) {
                (Wave::Contact, sl, sr, sl.u)
            } else {
                let (one, three) = shock_pattern(&p, &n);
                if one {
                    (Wave::Shock1, p, sl, rh_speed(prev, &sl.conserved(gamma), sl.u))
                } else if three {
                    (Wave::Shock3, sr, n, rh_speed(&sr.conserved(gamma), next, sl.u))
                } else {
                    (Wave::None, p, n, T::zero())
                }
            }
        }
    };
    if wave == Wave::None {
        return Ok(Decision::rejected(*mid, sigma));
    }
    let (left, right) = (bl.conserved(gamma), br.conserved(gamma));
    let dist = distances_full(&bl, mid, &br, h, gamma);
    if !accept_full(prev, mid, next, &left, &right, &dist, h, opts.variant) {
        return Ok(Decision { wave, ..Decision::rejected(*mid, sigma) });
    }
    Ok(Decision { wave, accepted: true, left, right, sigma, dist })
}

/// Three-component time-averaged flux at the crossed interface.
pub fn full_interface_flux<T: Real>(dec: &Decision<T, 3>, v_mesh: T, dt: T, dx: T, gamma: T) -> [T; 3] {
    let model = IdealGas::new(gamma);
    crossing_flux(|u| model.flux(u), dec, v_mesh, dt, dx)
}

impl<T: Real> Model<T, 3> for IdealGas<T> {
    #[inline]
    fn flux(&self, u: &[T; 3]) -> [T; 3] {
        let v = u[1] / u[0];
        let p = (self.gamma - T::one()) * (u[2] - T::half() * u[1] * v);
        [u[1], u[1] * v + p, v * (u[2] + p)]
    }

    fn wave_speeds(&self, u: &[T; 3]) -> (T, T) {
        let v = u[1] / u[0];
        let c = (self.gamma * self.pressure(u).max(T::zero()) / u[0]).sqrt();
        (v - c, v + c)
    }

    fn check(&self, cell: usize, u: &[T; 3]) -> Result<()> {
        let e = self.internal_energy(u);
        if u[0] > T::zero() && e > T::zero() && e.is_finite() {
            Ok(())
        } else {
            Err(SolverError::Positivity { cell, rho: u[0].as_f64(), e: e.as_f64() })
        }
    }

    fn mirror(&self, u: &[T; 3]) -> [T; 3] {
        [u[0], -u[1], u[2]]
    }

    fn godunov_flux(&self, left: &[T; 3], right: &[T; 3]) -> Result<[T; 3]> {
        let (l, r) = (self.state(left), self.state(right));
        let star = gas_star(l, r, self.gamma)?;
        Ok(self.flux(&sample_gas(l, r, &star, self.gamma, T::zero()).conserved(self.gamma)))
    }

    fn reconstruct(&self, prev: &[T; 3], mid: &[T; 3], next: &[T; 3], h: T, opts: &RecOptions<T>) -> Result<Decision<T, 3>> {
        if !opts.enabled {
            return Ok(Decision::rejected(*mid, T::zero()));
        }
        decide_full(prev, mid, next, h, self.gamma, opts)
    }

    /// `-rho s / (gamma - 1)` with `s = ln(p / rho^gamma)`.
    fn entropy(&self, u: &[T; 3]) -> T {
        let p = self.pressure(u);
        -u[0] * (p / u[0].powf(self.gamma)).ln() / (self.gamma - T::one())
    }

    fn to_primitive(&self, u: &[T; 3]) -> [T; 3] {
        [u[0], u[1] / u[0], self.pressure(u)]
    }

    fn from_primitive(&self, w: &[T; 3]) -> [T; 3] {
        GasState::new(w[0], w[1], w[2]).conserved(self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_states_select_nothing() {
        let s = GasState::new(1.0, 0.5, 1.0);
        assert_eq!(select_wave_full(s, s, 0.4, 1.4).unwrap().0, Wave::None);
    }

    #[test]
    fn contact_pair_selects_contact() {
        let (l, r) = (GasState::new(2.0f64, 0.3, 1.0), GasState::new(1.0, 0.3, 1.0));
        let (w, bl, br, sigma) = select_wave_full(l, r, 0.4, 1.4).unwrap();
        assert_eq!(w, Wave::Contact);
        assert!((sigma - 0.3).abs() < 1e-12);
        assert!((bl.rho - 2.0).abs() < 1e-10 && (br.rho - 1.0).abs() < 1e-10);
    }

    #[test]
    fn simple_rejections() {
        let l = [1.0, 0.0, 2.5];
        let r = [2.0, 0.0, 2.5];
        let dist = [Some(0.5), None, Some(0.5)];
        assert!(!accept_full(&[1.0, 0.0, 2.5], &[3.0, 0.0, 2.5], &[2.0, 0.0, 2.5], &l, &r, &dist, 1.0, Variant::Half));
        let dist = [Some(0.5), None, Some(1.4)];
        assert!(!accept_full(&l, &[1.5, 0.0, 2.5], &r, &l, &r, &dist, 1.0, Variant::Half));
    }
}
