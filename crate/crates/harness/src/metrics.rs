//! Error norms, convergence slopes and diagnostics.

use solverlab_core::BoundaryCondition;

use crate::error::{HarnessError, Result};
use crate::models::{CaseModel, FieldData};

/// `dx * sum |a_j - b_j|`.
pub fn l1_error(a: &[f64], b: &[f64], dx: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(HarnessError::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(dx * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// L1 error of every conserved component.
pub fn l1_fields(a: &FieldData, b: &FieldData, dx: f64) -> Result<Vec<f64>> {
    if a.kind() != b.kind() {
        return Err(HarnessError::BadReference(format!(
            "comparing a {} field with a {} field",
            a.kind().as_str(),
            b.kind().as_str()
        )));
    }
    (0..a.n_components()).map(|k| l1_error(&a.component(k), &b.component(k), dx)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Slope(f64),
    /// Every error vanished: nothing to fit.
    Exact,
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Slope(s) => write!(f, "{s}"),
            Order::Exact => f.write_str("exact"),
        }
    }
}

/// Least-squares slope of `log(error)` against `log(dx)`, with `dx` taken
/// proportional to `1 / cells`.
pub fn convergence_order(cells: &[usize], errors: &[f64]) -> Result<Order> {
    if cells.len() != errors.len() {
        return Err(HarnessError::LengthMismatch { left: cells.len(), right: errors.len() });
    }
    if errors.iter().all(|&e| e == 0.0) && !errors.is_empty() {
        return Ok(Order::Exact);
    }
    if cells.len() < 3 || errors.iter().any(|&e| !(e > 0.0)) {
        return Err(HarnessError::TooFewPoints);
    }
    let xs: Vec<f64> = cells.iter().map(|&n| -(n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(Order::Slope(sxy / sxx))
}

/// How far `q` leaves the range spanned by the values the exact solution
/// takes (plateaus and intermediate states).
pub fn overshoot_metric(q: &[f64], expected: &[f64]) -> f64 {
    let hi = expected.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = expected.iter().copied().fold(f64::INFINITY, f64::min);
    let q_hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let q_lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    (q_hi - hi).max(0.0) + (lo - q_lo).max(0.0)
}

/// Change of the total entropy over one step on a grid of spacing `dx`,
/// plus the entropy flux leaving through open boundaries (evaluated at the
/// edge cells before the step). Zero or negative for an entropy-stable
/// step.
pub fn entropy_budget<M: CaseModel<N>, const N: usize>(
    model: &M,
    before: &[[f64; N]],
    after: &[[f64; N]],
    dt: f64,
    dx: f64,
    bc: BoundaryCondition,
) -> f64 {
    let total = |f: &[[f64; N]]| dx * f.iter().map(|u| model.entropy(u)).sum::<f64>();
    let mut budget = total(after) - total(before);
    if let BoundaryCondition::Sides { left, right } = bc {
        use solverlab_core::Side;
        if left != Side::Wall {
            budget -= dt * model.entropy_flux(&before[0]);
        }
        if right != Side::Wall {
            budget += dt * model.entropy_flux(&before[before.len() - 1]);
        }
    }
    budget
}
