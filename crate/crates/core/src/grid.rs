//! Uniform 1D grid, alternating moving-mesh bookkeeping, time-step control,
//! ghost cells and initial cell averaging.
//!
//! The moving mesh is represented as a fixed reference grid plus a scalar
//! offset applied to every interface that is free to move. Interfaces that sit
//! on a reflecting wall never move, so the two wall-adjacent cells change
//! length while the offset is nonzero.

use crate::error::{Result, SolverError};
use crate::real::Real;

/// Uniform partition of `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub n_cells: usize,
    pub dx: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(x_min: T, x_max: T, n_cells: usize) -> Result<Self> {
        if n_cells == 0 || !(x_max > x_min) {
            return Err(SolverError::InvalidInput(format!(
                "grid [{x_min}, {x_max}] with {n_cells} cells"
            )));
        }
        let dx = (x_max - x_min) / T::from_usize(n_cells).unwrap();
        Ok(Self { x_min, x_max, n_cells, dx })
    }

    /// Center of reference cell `j`.
    pub fn center(&self, j: usize) -> T {
        self.x_min + (T::from_usize(j).unwrap() + T::half()) * self.dx
    }

    /// Reference interface `k` (k = 0 is `x_min`, k = n_cells is `x_max`).
    pub fn interface(&self, k: usize) -> T {
        if k == self.n_cells {
            self.x_max
        } else {
            self.x_min + T::from_usize(k).unwrap() * self.dx
        }
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.n_cells).map(|j| self.center(j)).collect()
    }

    pub fn edges(&self) -> Vec<T> {
        (0..=self.n_cells).map(|k| self.interface(k)).collect()
    }
}

/// Behaviour of one end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Zero-gradient outflow; the boundary interface moves with the mesh.
    Transmissive,
    /// Solid wall: mirrored ghosts, the boundary interface stays fixed.
    Wall,
    /// Ghosts frozen to the states supplied by the caller (usually the
    /// initial edge states).
    FarField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    Sides { left: Side, right: Side },
}

impl BoundaryCondition {
    pub const fn transmissive() -> Self {
        Self::Sides { left: Side::Transmissive, right: Side::Transmissive }
    }

    pub const fn reflective_left() -> Self {
        Self::Sides { left: Side::Wall, right: Side::Transmissive }
    }

    pub const fn reflective_right() -> Self {
        Self::Sides { left: Side::Transmissive, right: Side::Wall }
    }

    pub const fn walls() -> Self {
        Self::Sides { left: Side::Wall, right: Side::Wall }
    }

    pub const fn far_field() -> Self {
        Self::Sides { left: Side::FarField, right: Side::FarField }
    }

    pub fn left_wall(&self) -> bool {
        matches!(self, Self::Sides { left: Side::Wall, .. })
    }

    pub fn right_wall(&self) -> bool {
        matches!(self, Self::Sides { right: Side::Wall, .. })
    }

    pub fn has_wall(&self) -> bool {
        self.left_wall() || self.right_wall()
    }
}

/// Signed mesh speed of the current step plus accumulated interface offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshMotion<T> {
    pub v_mesh: T,
    pub parity: usize,
    pub net_offset: T,
}

impl<T: Real> Default for MeshMotion<T> {
    fn default() -> Self {
        Self { v_mesh: T::zero(), parity: 0, net_offset: T::zero() }
    }
}

impl<T: Real> MeshMotion<T> {
    /// Moves the free interfaces by `v_mesh * dt` and flips the parity.
    pub fn advance(&mut self, v_mesh: T, dt: T) {
        self.v_mesh = v_mesh;
        self.net_offset = self.net_offset + v_mesh * dt;
        self.parity ^= 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimClock<T> {
    pub t: T,
    pub step_index: usize,
    pub dt: T,
}

impl<T: Real> Default for SimClock<T> {
    fn default() -> Self {
        Self { t: T::zero(), step_index: 0, dt: T::zero() }
    }
}

impl<T: Real> SimClock<T> {
    pub fn tick(&mut self, dt: T) {
        debug_assert!(dt > T::zero());
        self.dt = dt;
        self.t = self.t + dt;
        self.step_index += 1;
    }
}

/// Alternating mesh speed: positive on even steps, negative on odd ones.
pub fn mesh_speed_for_step<T: Real>(step_index: usize, v_waves: T, safety: T) -> T {
    let magnitude = safety * v_waves;
    if step_index % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Largest stable step on the moving mesh: `cfl * dx / (|v_mesh| + v_waves)`.
pub fn stable_dt<T: Real>(v_mesh: T, v_waves: T, dx: T, cfl: T) -> Result<T> {
    let denom = v_mesh.abs() + v_waves;
    if !(denom > T::zero()) {
        return Err(SolverError::StaticField);
    }
    Ok(cfl * dx / denom)
}

/// Cell edges of the current (possibly shifted) mesh.
///
/// Free interfaces are displaced by `offset`; interfaces on walls stay put.
pub fn shifted_edges<T: Real>(grid: &GridSpec<T>, offset: T, bc: BoundaryCondition) -> Vec<T> {
    let n = grid.n_cells;
    let mut edges: Vec<T> = (0..=n).map(|k| grid.interface(k) + offset).collect();
    if bc.left_wall() {
        edges[0] = grid.x_min;
    }
    if bc.right_wall() {
        edges[n] = grid.x_max;
    }
    edges
}

pub fn lengths_from_edges<T: Real>(edges: &[T]) -> Vec<T> {
    edges.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Pads `cells` with `width` ghosts on each side.
///
/// `mirror` produces the reflected state used next to walls; `far` supplies
/// frozen `(left, right)` ghost states for [`Side::FarField`] (falls back to
/// copying when absent).
pub fn fill_ghosts<S: Copy>(
    cells: &[S],
    bc: BoundaryCondition,
    width: usize,
    mirror: impl Fn(&S) -> S,
    far: Option<&(S, S)>,
) -> Vec<S> {
    let n = cells.len();
    assert!(n > 0, "cannot pad an empty field");
    let mut out = Vec::with_capacity(n + 2 * width);
    match bc {
        BoundaryCondition::Periodic => {
            for g in 0..width {
                let k = (n * (width / n + 1) + g - width) % n;
                out.push(cells[k]);
            }
            out.extend_from_slice(cells);
            for g in 0..width {
                out.push(cells[g % n]);
            }
        }
        BoundaryCondition::Sides { left, right } => {
            for g in (0..width).rev() {
                out.push(match left {
                    Side::Transmissive => cells[0],
                    Side::Wall => mirror(&cells[g.min(n - 1)]),
                    Side::FarField => far.map_or(cells[0], |f| f.0),
                });
            }
            out.extend_from_slice(cells);
            for g in 0..width {
                out.push(match right {
                    Side::Transmissive => cells[n - 1],
                    Side::Wall => mirror(&cells[n - 1 - g.min(n - 1)]),
                    Side::FarField => far.map_or(cells[n - 1], |f| f.1),
                });
            }
        }
    }
    out
}

/// Conservative overlap remap of cell averages from `src_edges` to
/// `dst_edges`. Parts of a destination cell not covered by the source are
/// filled with `left_fill` / `right_fill`.
pub fn remap_between<T: Real, const N: usize>(
    values: &[[T; N]],
    src_edges: &[T],
    dst_edges: &[T],
    left_fill: [T; N],
    right_fill: [T; N],
) -> Vec<[T; N]> {
    assert_eq!(values.len() + 1, src_edges.len());
    let n_dst = dst_edges.len() - 1;
    let mut out = vec![[T::zero(); N]; n_dst];
    let src_lo = src_edges[0];
    let src_hi = src_edges[values.len()];
    let mut i = 0usize;
    for (j, slot) in out.iter_mut().enumerate() {
        let (a, b) = (dst_edges[j], dst_edges[j + 1]);
        let mut acc = [T::zero(); N];
        let mut add = |w: T, v: &[T; N]| {
            if w > T::zero() {
                for k in 0..N {
                    acc[k] = acc[k] + w * v[k];
                }
            }
        };
        add(src_lo.min(b) - a, &left_fill);
        add(b - src_hi.max(a), &right_fill);
        while i > 0 && src_edges[i] > a {
            i -= 1;
        }
        while i < values.len() && src_edges[i + 1] <= a {
            i += 1;
        }
        let mut m = i;
        while m < values.len() && src_edges[m] < b {
            let lo = src_edges[m].max(a);
            let hi = src_edges[m + 1].min(b);
            add(hi - lo, &values[m]);
            m += 1;
        }
        let len = b - a;
        for k in 0..N {
            slot[k] = acc[k] / len;
        }
    }
    out
}

/// Redistributes a field living on the mesh shifted by `net_offset` back onto
/// the reference grid.
pub fn remap_to_reference<T: Real, const N: usize>(
    field: &[[T; N]],
    grid: &GridSpec<T>,
    net_offset: T,
    bc: BoundaryCondition,
) -> Result<Vec<[T; N]>> {
    if net_offset.abs() >= grid.dx {
        return Err(SolverError::OffsetTooLarge { offset: net_offset.as_f64(), dx: grid.dx.as_f64() });
    }
    if field.len() != grid.n_cells {
        return Err(SolverError::LengthMismatch { left: field.len(), right: grid.n_cells });
    }
    if net_offset == T::zero() {
        return Ok(field.to_vec());
    }
    let src = shifted_edges(grid, net_offset, bc);
    let dst = grid.edges();
    let n = field.len();
    let out = match bc {
        BoundaryCondition::Periodic => {
            // Wrap one cell on each side so the uncovered sliver is filled
            // from the opposite end.
            let mut vals = Vec::with_capacity(n + 2);
            vals.push(field[n - 1]);
            vals.extend_from_slice(field);
            vals.push(field[0]);
            let mut e = Vec::with_capacity(n + 3);
            e.push(src[0] - grid.dx);
            e.extend_from_slice(&src);
            e.push(src[n] + grid.dx);
            remap_between(&vals, &e, &dst, field[n - 1], field[0])
        }
        BoundaryCondition::Sides { .. } => remap_between(field, &src, &dst, field[0], field[n - 1]),
    };
    Ok(out)
}

/// One piece of an initial profile.
pub enum Piece<T, const N: usize> {
    Constant([T; N]),
    Function(Box<dyn Fn(T) -> [T; N] + Send + Sync>),
}

impl<T: Real, const N: usize> Piece<T, N> {
    pub fn function(f: impl Fn(T) -> [T; N] + Send + Sync + 'static) -> Self {
        Self::Function(Box::new(f))
    }

    fn integrate(&self, a: T, b: T) -> [T; N] {
        match self {
            Piece::Constant(v) => v.map(|c| c * (b - a)),
            Piece::Function(f) => gauss_legendre5(|x| f(x), a, b),
        }
    }
}

/// Initial datum described piecewise: `pieces[i]` covers
/// `[breaks[i-1], breaks[i])`, with unbounded first and last pieces.
pub struct Profile<T, const N: usize> {
    breaks: Vec<T>,
    pieces: Vec<Piece<T, N>>,
}

impl<T: Real, const N: usize> Profile<T, N> {
    pub fn new(breaks: Vec<T>, pieces: Vec<Piece<T, N>>) -> Result<Self> {
        if pieces.len() != breaks.len() + 1 {
            return Err(SolverError::InvalidInput(format!(
                "{} pieces for {} breaks",
                pieces.len(),
                breaks.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SolverError::InvalidInput("profile breaks must increase".into()));
        }
        Ok(Self { breaks, pieces })
    }

    pub fn piecewise_constant(breaks: Vec<T>, values: Vec<[T; N]>) -> Result<Self> {
        Self::new(breaks, values.into_iter().map(Piece::Constant).collect())
    }

    pub fn smooth(f: impl Fn(T) -> [T; N] + Send + Sync + 'static) -> Self {
        Self { breaks: Vec::new(), pieces: vec![Piece::function(f)] }
    }

    fn piece_index(&self, x: T) -> usize {
        self.breaks.iter().take_while(|&&b| b <= x).count()
    }

    /// Pointwise value (right-continuous at breaks).
    pub fn value(&self, x: T) -> [T; N] {
        match &self.pieces[self.piece_index(x)] {
            Piece::Constant(v) => *v,
            Piece::Function(f) => f(x),
        }
    }

    /// Exact-for-constants average over `[a, b]`.
    pub fn average(&self, a: T, b: T) -> [T; N] {
        let first = self.piece_index(a);
        let inner: Vec<T> = self.breaks.iter().copied().filter(|&x| x > a && x < b).collect();
        if inner.is_empty() {
            if let Piece::Constant(v) = &self.pieces[first] {
                return *v;
            }
        }
        let mut acc = [T::zero(); N];
        let mut lo = a;
        let mut idx = first;
        for &x in inner.iter().chain(std::iter::once(&b)) {
            let part = self.pieces[idx].integrate(lo, x);
            for k in 0..N {
                acc[k] = acc[k] + part[k];
            }
            lo = x;
            idx += 1;
        }
        acc.map(|s| s / (b - a))
    }
}

/// Cell averages of `profile` over the cells delimited by `edges`.
pub fn init_cell_averages<T: Real, const N: usize>(profile: &Profile<T, N>, edges: &[T]) -> Vec<[T; N]> {
    edges.windows(2).map(|w| profile.average(w[0], w[1])).collect()
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Five-point Gauss-Legendre integral of `f` over `[a, b]`.
pub fn gauss_legendre5<T: Real, const N: usize>(f: impl Fn(T) -> [T; N], a: T, b: T) -> [T; N] {
    let mid = T::half() * (a + b);
    let half = T::half() * (b - a);
    let mut acc = [T::zero(); N];
    for (node, weight) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
        let v = f(mid + half * T::lit(*node));
        for k in 0..N {
            acc[k] = acc[k] + T::lit(*weight) * v[k];
        }
    }
    acc.map(|s| s * half)
}
