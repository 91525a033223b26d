use solverlab_core::model::Decision;
use solverlab_core::recon::crossing_flux;
use solverlab_core::{Isothermal, Model, Wave};

fn decision(d_rho: f64, d_q: f64) -> Decision<f64, 2> {
    Decision { wave: Wave::Shock1, accepted: true, left: [1.0, 2.0], right: [3.0, 1.0], sigma: 0.5, dist: [Some(d_rho), Some(d_q)] }
}

fn g(u: [f64; 2], v: f64) -> [f64; 2] {
    let f = Isothermal::new(1.0).flux(&u);
    [f[0] - v * u[0], f[1] - v * u[1]]
}

#[test]
fn per_component_crossing_times() {
    let m = Isothermal::new(1.0);
    let (h, dt, v) = (0.1, 0.01, -2.0);
    // Right crossing: the right state flows until the shock reaches the edge.
    let dec = decision(0.08, 0.095);
    let out = crossing_flux(|u| m.flux(u), &dec, v, dt, h);
    let (gl, gr) = (g(dec.left, v), g(dec.right, v));
    for (k, d) in [0.08, 0.095].into_iter().enumerate() {
        let tc = (h - d) / (dec.sigma - v);
        let want = (tc * gr[k] + (dt - tc) * gl[k]) / dt;
        assert!((out[k] - want).abs() < 1e-13);
    }
}

#[test]
fn out_of_range_distance_extrapolates() {
    let m = Isothermal::new(1.0);
    let (h, dt) = (0.1, 0.01);
    for (v, d_q) in [(-2.0, 0.13), (2.0, -0.02)] {
        let dec = decision(0.05, d_q);
        let out = crossing_flux(|u| m.flux(u), &dec, v, dt, h);
        let (near, far) = if v < 0.0 { (g(dec.right, v), g(dec.left, v)) } else { (g(dec.left, v), g(dec.right, v)) };
        let tc = if v < 0.0 { (h - d_q) / (dec.sigma - v) } else { d_q / (v - dec.sigma) };
        assert!(tc < 0.0);
        let want = (tc * near[1] + (dt - tc) * far[1]) / dt;
        assert!((out[1] - want).abs() < 1e-13, "v = {v}");
    }
    // A crossing time beyond the step keeps the near state throughout.
    let dec = decision(0.05, -0.5);
    let out = crossing_flux(|u| m.flux(u), &dec, -2.0, dt, h);
    assert!((out[1] - g(dec.right, -2.0)[1]).abs() < 1e-13);
}
