use std::f64::consts::PI;

use ::biphoton::{
    classical_curve, default_delta_grid, idler_spectrum, integrate, quantum_comb, signal_spectrum,
    sum_rules, BiphotonModel, FrequencyGrid, ModulatorSpec, DEFAULT_TRUNCATION_TOL,
};

/// Sine integral by composite Simpson on `sin t / t`.
fn si(x: f64) -> f64 {
    let n = 2 * ((x * 2000.0).ceil() as usize).max(1000);
    let h = x / n as f64;
    let f = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    let mut s = f(0.0) + f(x);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    s * h / 3.0
}

/// `int_{-w}^{w} sinc^2(omega/2) domega` in closed form.
fn sinc2_window(w: f64) -> f64 {
    4.0 * (si(w) - 2.0 * (0.5 * w).sin().powi(2) / w)
}

fn sinc2_on(grid: &FrequencyGrid) -> f64 {
    let v: Vec<f64> = grid
        .points()
        .iter()
        .map(|&w| {
            let x = 0.5 * w;
            if x == 0.0 {
                1.0
            } else {
                (x.sin() / x).powi(2)
            }
        })
        .collect();
    integrate(&v, grid).unwrap()
}

fn rect(half_width: f64, n: usize) -> BiphotonModel {
    BiphotonModel::rectangular(0.0, FrequencyGrid::symmetric(half_width, n).unwrap()).unwrap()
}

#[test]
fn oracle_reproduces_full_line() {
    assert!((sinc2_window(4000.0) - 2.0 * PI).abs() < 2e-3);
}

#[test]
fn sinc_squared_integral_converges_to_two_pi() {
    let g = FrequencyGrid::symmetric(800.0, 32001).unwrap();
    assert!((sinc2_on(&g) - 2.0 * PI).abs() <= 1e-2);
}

#[test]
fn quadrature_error_drops_with_refinement() {
    let w = 200.0;
    let exact = sinc2_window(w);
    let coarse = (sinc2_on(&FrequencyGrid::symmetric(w, 8001).unwrap()) - exact).abs();
    let fine = (sinc2_on(&FrequencyGrid::symmetric(w, 16001).unwrap()) - exact).abs();
    assert!(coarse > 1e-12);
    assert!(coarse / fine >= 2.0, "coarse {coarse:e} fine {fine:e}");
}

#[test]
fn pair_rate_error_halves_when_window_doubles() {
    let e1 = (rect(200.0, 16001).pair_rate() - 1.0).abs();
    let e2 = (rect(400.0, 32001).pair_rate() - 1.0).abs();
    assert!(e1 <= 1e-2);
    let ratio = e1 / e2;
    assert!((1.9..=2.1).contains(&ratio), "ratio {ratio}");
}

#[test]
fn gaussian_pair_rate() {
    let g = FrequencyGrid::symmetric(40.0, 8001).unwrap();
    let m = BiphotonModel::gaussian_delayed(1.0, 8.0, g).unwrap();
    assert!((m.pair_rate() - 1.0 / (2.0 * PI).sqrt()).abs() <= 1e-3);
}

#[test]
fn phase_modulation_conserves_counts() {
    let m = rect(2000.0, 16001);
    let rt = m.pair_rate();
    for &wm in &[0.1, 10.0] {
        for &d in &[0.0, 1.0, 2.0, 4.0] {
            let ph = ModulatorSpec::phase(d, wm, DEFAULT_TRUNCATION_TOL).unwrap();
            let s = signal_spectrum(&m, &ph, 1.0).unwrap();
            let i = idler_spectrum(&m, &ph, 1.0).unwrap();
            assert!(
                (s.total_counts / rt - 1.0).abs() <= 1e-6,
                "signal d={d} wm={wm}"
            );
            assert!(
                (i.total_counts / rt - 1.0).abs() <= 1e-6,
                "idler d={d} wm={wm}"
            );
        }
    }
}

#[test]
fn sum_rules_hold_for_mixed_depths() {
    let m = rect(2000.0, 16001);
    let dg = default_delta_grid(m.grid()).unwrap();
    let t = 0.5;
    for &(ds, di, wm) in &[(2.0, -2.0, 0.1), (4.0, 1.0, 10.0)] {
        let s = ModulatorSpec::phase(ds, wm, DEFAULT_TRUNCATION_TOL).unwrap();
        let i = ModulatorSpec::phase(di, wm, DEFAULT_TRUNCATION_TOL).unwrap();
        let comb = quantum_comb(&m, &s, &i, t).unwrap();
        let curve = classical_curve(&m, &s, &i, t, &dg).unwrap();
        let rep = sum_rules(&comb, &curve, &m).unwrap();
        assert!(rep.quantum_deviation.abs() <= 1e-6, "{rep:?}");
        assert!(rep.classical_deviation.abs() <= 1e-4, "{rep:?}");
    }
}
