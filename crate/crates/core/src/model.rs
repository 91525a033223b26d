//! The interface shared by every conservation law in the crate.

use crate::error::Result;
use crate::real::Real;

/// Per-cell conserved averages.
pub type Field<T, const N: usize> = Vec<[T; N]>;

/// Which conserved components must be placed exactly by the in-cell
/// reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Only the density (or the scalar) constrains acceptance.
    #[default]
    Half,
    /// Density and momentum both have to fit inside the cell.
    Full,
}

/// Wave selection strategy of the full Euler reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    OneShot,
    TwoShot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecOptions<T> {
    pub variant: Variant,
    pub selection: Selection,
    /// Strength threshold of the full Euler wave selection (the run's CFL).
    pub c_cfl: T,
    /// When false every reconstruction is rejected.
    pub enabled: bool,
}

impl<T: Real> RecOptions<T> {
    pub fn new(variant: Variant, c_cfl: T) -> Self {
        Self { variant, selection: Selection::OneShot, c_cfl, enabled: true }
    }
}

/// Wave family picked for an in-cell reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    None,
    /// Scalar shock.
    Shock,
    Shock1,
    Shock2,
    Shock3,
    Contact,
}

/// Outcome of reconstructing one cell.
///
/// `left`/`right` are conserved states; `dist[k]` is the distance from the
/// cell's left edge at which component `k` jumps (None when its two states
/// coincide).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision<T, const N: usize> {
    pub wave: Wave,
    pub accepted: bool,
    pub left: [T; N],
    pub right: [T; N],
    pub sigma: T,
    pub dist: [Option<T>; N],
}

impl<T: Real, const N: usize> Decision<T, N> {
    /// No reconstruction: the cell stays constant.
    pub fn rejected(mid: [T; N], sigma: T) -> Self {
        Self { wave: Wave::None, accepted: false, left: mid, right: mid, sigma, dist: [None; N] }
    }
}

/// Mixture distance `h (r - m) / (r - l)`; None on a zero denominator.
pub fn mixture_distance<T: Real>(l: T, m: T, r: T, h: T) -> Option<T> {
    let den = r - l;
    if den == T::zero() {
        None
    } else {
        Some(h * (r - m) / den)
    }
}

pub fn strictly_inside<T: Real>(d: Option<T>, h: T) -> bool {
    matches!(d, Some(d) if d > T::zero() && d < h)
}

/// A hyperbolic system with `N` conserved components.
pub trait Model<T: Real, const N: usize>: Clone + Send + Sync {
    /// Physical flux.
    fn flux(&self, u: &[T; N]) -> [T; N];

    /// Smallest and largest characteristic speeds.
    fn wave_speeds(&self, u: &[T; N]) -> (T, T);

    fn max_wave_speed(&self, u: &[T; N]) -> T {
        let (lo, hi) = self.wave_speeds(u);
        lo.abs().max(hi.abs())
    }

    /// Rejects non-physical states (reported against `cell`).
    fn check(&self, _cell: usize, _u: &[T; N]) -> Result<()> {
        Ok(())
    }

    /// Ghost state behind a reflecting wall.
    fn mirror(&self, u: &[T; N]) -> [T; N];

    /// Exact Riemann flux at `x/t = 0`.
    fn godunov_flux(&self, left: &[T; N], right: &[T; N]) -> Result<[T; N]>;

    /// In-cell shock reconstruction of the middle cell of a triplet.
    fn reconstruct(
        &self,
        prev: &[T; N],
        mid: &[T; N],
        next: &[T; N],
        h: T,
        opts: &RecOptions<T>,
    ) -> Result<Decision<T, N>>;

    /// Convex mathematical entropy (for diagnostics).
    fn entropy(&self, u: &[T; N]) -> T;

    fn to_primitive(&self, u: &[T; N]) -> [T; N];

    fn from_primitive(&self, w: &[T; N]) -> [T; N];
}

/// Extracts component `k` of every cell.
pub fn component<T: Copy, const N: usize>(cells: &[[T; N]], k: usize) -> Vec<T> {
    cells.iter().map(|c| c[k]).collect()
}

/// Sum of each component over the cells.
pub fn totals<T: Real, const N: usize>(cells: &[[T; N]]) -> [T; N] {
    let mut acc = [T::zero(); N];
    for c in cells {
        for k in 0..N {
            acc[k] = acc[k] + c[k];
        }
    }
    acc
}
