//! Exact Riemann solvers for isothermal and ideal-gas Euler equations.

use crate::error::{Result, SolverError};
use crate::model::Model;
use crate::real::Real;

const MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoState<T> {
    pub rho: T,
    pub u: T,
}

impl<T: Real> IsoState<T> {
    pub fn new(rho: T, u: T) -> Self {
        Self { rho, u }
    }

    pub fn from_conserved(c: &[T; 2]) -> Self {
        Self { rho: c[0], u: c[1] / c[0] }
    }

    pub fn conserved(&self) -> [T; 2] {
        [self.rho, self.rho * self.u]
    }
}

/// Intermediate state of an isothermal Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoStar<T> {
    pub rho_star: T,
    pub u_star: T,
    /// The 1-wave is a shock (otherwise a rarefaction).
    pub shock_1: bool,
    /// The 2-wave is a shock.
    pub shock_2: bool,
}

/// Velocity change across the isothermal wave curve from density `rk` to `rho`.
fn iso_curve<T: Real>(rho: T, rk: T, c: T) -> (T, T) {
    // Returns the curve value and its derivative with respect to ln(rho).
    if rho > rk {
        let r = (rho / rk).sqrt();
        (c * (r - r.recip()), T::half() * c * (r + r.recip()))
    } else {
        (c * (rho / rk).ln(), c)
    }
}

/// Solves the isothermal Riemann problem for the star state.
pub fn iso_star<T: Real>(left: IsoState<T>, right: IsoState<T>, c: T) -> Result<IsoStar<T>> {
    if !(c > T::zero()) || !(left.rho > T::zero()) || !(right.rho > T::zero()) {
        return Err(SolverError::InvalidInput(format!(
            "isothermal Riemann data {left:?} {right:?} c = {c}"
        )));
    }
    let du = right.u - left.u;
    let phi = |x: T| {
        let rho = x.exp();
        let (fl, dl) = iso_curve(rho, left.rho, c);
        let (fr, dr) = iso_curve(rho, right.rho, c);
        (fl + fr + du, dl + dr)
    };
    let tol = T::lit(1e-13) * (T::one() + c + left.u.abs() + right.u.abs());
    let mut x = T::half() * (left.rho.ln() + right.rho.ln()) - du / (T::two() * c);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let (f, df) = phi(x);
        if f.abs() <= tol {
            converged = true;
            break;
        }
        let step = f / df;
        x = x - step;
        if !x.is_finite() {
            break;
        }
        if step.abs() <= T::epsilon() * (T::one() + x.abs()) {
            converged = phi(x).0.abs() <= tol * T::lit(1e3);
            break;
        }
    }
    if !converged {
        // phi is increasing in ln(rho): bracket and bisect.
        let (mut lo, mut hi) = (T::zero(), T::zero());
        let mut span = T::one();
        while phi(lo).0 > T::zero() {
            lo = lo - span;
            span = span * T::two();
            if span > T::lit(1e4) {
                return Err(no_convergence("iso", &left, &right));
            }
        }
        span = T::one();
        while phi(hi).0 < T::zero() {
            hi = hi + span;
            span = span * T::two();
            if span > T::lit(1e4) {
                return Err(no_convergence("iso", &left, &right));
            }
        }
        for _ in 0..400 {
            let mid = T::half() * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if phi(mid).0 < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        x = T::half() * (lo + hi);
    }
    let rho_star = x.exp();
    let u_star = left.u - iso_curve(rho_star, left.rho, c).0;
    Ok(IsoStar { rho_star, u_star, shock_1: rho_star > left.rho, shock_2: rho_star > right.rho })
}

fn no_convergence<S: std::fmt::Debug>(kind: &str, left: &S, right: &S) -> SolverError {
    SolverError::NoConvergence { detail: format!("{kind}: left {left:?}, right {right:?}") }
}

/// Speed of an isothermal shock with upstream state `ahead` and downstream
/// density `rho_star`. Family 1 has `ahead` on the left, family 2 on the right.
pub fn iso_shock_speed<T: Real>(family: u8, ahead: IsoState<T>, rho_star: T, c: T) -> Result<T> {
    if !(rho_star > T::zero()) || !(ahead.rho > T::zero()) {
        return Err(SolverError::InvalidInput(format!("shock density {rho_star}")));
    }
    let r = (rho_star / ahead.rho).sqrt();
    match family {
        1 => Ok(ahead.u - c * r),
        2 => Ok(ahead.u + c * r),
        _ => Err(SolverError::InvalidInput(format!("isothermal family {family}"))),
    }
}

/// Self-similar isothermal solution at `xi = x / t`.
pub fn sample_iso<T: Real>(left: IsoState<T>, right: IsoState<T>, star: &IsoStar<T>, c: T, xi: T) -> IsoState<T> {
    let inner = IsoState::new(star.rho_star, star.u_star);
    if xi <= star.u_star {
        if star.shock_1 {
            let s = left.u - c * (star.rho_star / left.rho).sqrt();
            if xi < s { left } else { inner }
        } else if xi <= left.u - c {
            left
        } else if xi >= star.u_star - c {
            inner
        } else {
            let u = xi + c;
            IsoState::new(((left.u - u) / c + left.rho.ln()).exp(), u)
        }
    } else if star.shock_2 {
        let s = right.u + c * (star.rho_star / right.rho).sqrt();
        if xi > s { right } else { inner }
    } else if xi >= right.u + c {
        right
    } else if xi <= star.u_star + c {
        inner
    } else {
        let u = xi - c;
        IsoState::new(((u - right.u) / c + right.rho.ln()).exp(), u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasState<T> {
    pub rho: T,
    pub u: T,
    pub p: T,
}

impl<T: Real> GasState<T> {
    pub fn new(rho: T, u: T, p: T) -> Self {
        Self { rho, u, p }
    }

    pub fn from_conserved(c: &[T; 3], gamma: T) -> Self {
        let u = c[1] / c[0];
        let p = (gamma - T::one()) * (c[2] - T::half() * c[1] * u);
        Self { rho: c[0], u, p }
    }

    pub fn conserved(&self, gamma: T) -> [T; 3] {
        let q = self.rho * self.u;
        [self.rho, q, self.p / (gamma - T::one()) + T::half() * q * self.u]
    }

    pub fn sound_speed(&self, gamma: T) -> T {
        (gamma * self.p / self.rho).sqrt()
    }

    /// Specific internal energy.
    pub fn e(&self, gamma: T) -> T {
        self.p / ((gamma - T::one()) * self.rho)
    }
}

/// Star region of an ideal-gas Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasStar<T> {
    pub p_star: T,
    pub u_star: T,
    pub rho_star_l: T,
    pub rho_star_r: T,
}

/// Pressure function of one side and its derivative.
fn pressure_fn<T: Real>(p: T, k: &GasState<T>, gamma: T) -> (T, T) {
    let g1 = gamma - T::one();
    let gp = gamma + T::one();
    if p > k.p {
        let a = T::two() / (gp * k.rho);
        let b = g1 / gp * k.p;
        let s = (a / (p + b)).sqrt();
        let f = (p - k.p) * s;
        (f, s * (T::one() - T::half() * (p - k.p) / (p + b)))
    } else {
        let ck = k.sound_speed(gamma);
        let z = g1 / (T::two() * gamma);
        let ratio = p / k.p;
        let f = T::two() * ck / g1 * (ratio.powf(z) - T::one());
        (f, ratio.powf(-(gamma + T::one()) / (T::two() * gamma)) / (k.rho * ck))
    }
}

fn star_density<T: Real>(p: T, k: &GasState<T>, gamma: T) -> T {
    let g1 = gamma - T::one();
    let gp = gamma + T::one();
    if p > k.p {
        let r = p / k.p;
        k.rho * (r + g1 / gp) / (g1 / gp * r + T::one())
    } else {
        k.rho * (p / k.p).powf(gamma.recip())
    }
}

/// Exact ideal-gas Riemann solver (pressure-function Newton iteration with a
/// bisection fallback).
pub fn gas_star<T: Real>(left: GasState<T>, right: GasState<T>, gamma: T) -> Result<GasStar<T>> {
    for s in [&left, &right] {
        if !(s.rho > T::zero()) || !(s.p > T::zero()) || !s.u.is_finite() {
            return Err(SolverError::InvalidInput(format!("gas Riemann state {s:?}")));
        }
    }
    let g1 = gamma - T::one();
    let (cl, cr) = (left.sound_speed(gamma), right.sound_speed(gamma));
    let du = right.u - left.u;
    if T::two() / g1 * (cl + cr) <= du {
        return Err(SolverError::Vacuum { detail: format!("left {left:?}, right {right:?}") });
    }
    let f = |p: T| {
        let (fl, dl) = pressure_fn(p, &left, gamma);
        let (fr, dr) = pressure_fn(p, &right, gamma);
        (fl + fr + du, dl + dr)
    };
    let z = g1 / (T::two() * gamma);
    let guess = ((cl + cr - T::half() * g1 * du) / (cl / left.p.powf(z) + cr / right.p.powf(z))).powf(z.recip());
    let scale = cl + cr + left.u.abs() + right.u.abs();
    let tol = T::lit(1e-12) * scale;

    let mut p = guess;
    let mut converged = false;
    if p.is_finite() && p > T::zero() {
        for _ in 0..MAX_ITER {
            let (fp, dp) = f(p);
            let next = p - fp / dp;
            if !(next > T::zero()) || !next.is_finite() {
                break;
            }
            let change = (next - p).abs() / (T::half() * (next + p));
            p = next;
            if change <= T::lit(1e-15) || f(p).0.abs() <= tol * T::lit(1e-3) {
                converged = f(p).0.abs() <= tol;
                break;
            }
        }
    }
    if !converged {
        let floor = T::lit(1e-12) * left.p.min(right.p);
        let mut lo = floor;
        if f(lo).0 > T::zero() {
            return Err(no_convergence("gas (pressure floor)", &left, &right));
        }
        let mut hi = left.p.max(right.p).max(guess.abs());
        let mut grow = 0;
        while f(hi).0 < T::zero() {
            hi = hi * T::lit(4.0);
            grow += 1;
            if grow > 200 {
                return Err(no_convergence("gas", &left, &right));
            }
        }
        for _ in 0..500 {
            let mid = T::half() * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid).0 < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p = T::half() * (lo + hi);
        if f(p).0.abs() > tol * T::lit(10.0) {
            return Err(no_convergence("gas (bisection)", &left, &right));
        }
    }
    let (fl, _) = pressure_fn(p, &left, gamma);
    let (fr, _) = pressure_fn(p, &right, gamma);
    let u_star = T::half() * (left.u + right.u) + T::half() * (fr - fl);
    Ok(GasStar {
        p_star: p,
        u_star,
        rho_star_l: star_density(p, &left, gamma),
        rho_star_r: star_density(p, &right, gamma),
    })
}

/// Self-similar ideal-gas solution at `xi = x / t`.
pub fn sample_gas<T: Real>(left: GasState<T>, right: GasState<T>, star: &GasStar<T>, gamma: T, xi: T) -> GasState<T> {
    let g1 = gamma - T::one();
    let gp = gamma + T::one();
    let ps = star.p_star;
    if xi <= star.u_star {
        let cl = left.sound_speed(gamma);
        let inner = GasState::new(star.rho_star_l, star.u_star, ps);
        if ps > left.p {
            let s = left.u - cl * (gp / (T::two() * gamma) * ps / left.p + g1 / (T::two() * gamma)).sqrt();
            if xi < s { left } else { inner }
        } else {
            let head = left.u - cl;
            let tail = star.u_star - cl * (ps / left.p).powf(g1 / (T::two() * gamma));
            if xi <= head {
                left
            } else if xi >= tail {
                inner
            } else {
                let base = T::two() / gp + g1 / (gp * cl) * (left.u - xi);
                let rho = left.rho * base.powf(T::two() / g1);
                let u = T::two() / gp * (cl + T::half() * g1 * left.u + xi);
                let p = left.p * base.powf(T::two() * gamma / g1);
                GasState::new(rho, u, p)
            }
        }
    } else {
        let cr = right.sound_speed(gamma);
        let inner = GasState::new(star.rho_star_r, star.u_star, ps);
        if ps > right.p {
            let s = right.u + cr * (gp / (T::two() * gamma) * ps / right.p + g1 / (T::two() * gamma)).sqrt();
            if xi > s { right } else { inner }
        } else {
            let head = right.u + cr;
            let tail = star.u_star + cr * (ps / right.p).powf(g1 / (T::two() * gamma));
            if xi >= head {
                right
            } else if xi <= tail {
                inner
            } else {
                let base = T::two() / gp - g1 / (gp * cr) * (right.u - xi);
                let rho = right.rho * base.powf(T::two() / g1);
                let u = T::two() / gp * (-cr + T::half() * g1 * right.u + xi);
                let p = right.p * base.powf(T::two() * gamma / g1);
                GasState::new(rho, u, p)
            }
        }
    }
}

/// Rankine-Hugoniot residual `|sigma [U] - [F(U)]|` per conservation law,
/// for conserved states of any model.
pub fn rh_residual<T: Real, M: Model<T, N>, const N: usize>(
    model: &M,
    upstream: &[T; N],
    downstream: &[T; N],
    sigma: T,
) -> [T; N] {
    let fa = model.flux(upstream);
    let fb = model.flux(downstream);
    std::array::from_fn(|k| (sigma * (downstream[k] - upstream[k]) - (fb[k] - fa[k])).abs())
}
