use std::process::Command;

use hfcav::app::{run_shift, run_sweep};
use hfcav::atom::Isotope;
use hfcav::config::RunConfig;
use hfcav::constants::{HBAR, H_PLANCK, K_B};
use hfcav::dipole::magnetic::GroundManifold;
use hfcav::engine::clock_pair;

fn greens_at_hfs() -> [(f64, f64); 2] {
    let out = Command::new(env!("CARGO_BIN_EXE_hfcav")).arg("greens").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let part = |name: &str| {
        let l = text.lines().find(|l| l.starts_with(name)).unwrap();
        let v: Vec<f64> = l.split_whitespace().skip(1).take(2).map(|s| s.trim_end_matches('i').parse().unwrap()).collect();
        (v[0], v[1])
    };
    [part("H_xx"), part("H_yy")]
}

#[test]
fn greens_output_recombines_into_resonant_shift() {
    // Only the hyperfine-frequency couplings matter: the Zeeman lines sit
    // five decades lower in frequency, where the real part is negligible.
    let [hxx, hyy] = greens_at_hfs();
    let iso = Isotope::HYDROGEN;
    let m = GroundManifold::new(&iso, 0.01);
    let (u, l) = clock_pair(&iso);
    let kt = K_B * 300.0;
    let level = |s| {
        let a = m.index(&s).unwrap();
        let mut e = 0.0;
        for b in 0..m.len() {
            let w = m.omega(a, b);
            if w.abs() < 1e9 {
                continue;
            }
            let mu = m.mu_sq(a, b);
            let re = hxx.0 * mu[0] + hyy.0 * (mu[1] + mu[2]);
            let n = 1.0 / ((HBAR * w.abs() / kt).exp() - 1.0);
            e += if w > 0.0 { re * n } else { -re * (n + 1.0) };
        }
        e
    };
    let recombined = (level(u) - level(l)) / H_PLANCK;
    let direct = run_shift(&RunConfig::default()).unwrap().res_h;
    assert!((recombined / direct - 1.0).abs() < 1e-3, "{recombined} {direct}");
    assert!((recombined / 7.44 - 1.0).abs() < 0.05);
    // the width follows from the imaginary parts the same way
    assert!(hxx.1 > 0.0 && hyy.1 > 0.0);
}

#[test]
fn silver_near_wall_at_seventy_kelvin_reaches_tens_of_hertz() {
    let cfg = RunConfig::from_text("cavity.metal = Ag\ncavity.x_um = 0.1\ntemperature_K = 70").unwrap();
    let r = run_shift(&cfg).unwrap();
    assert!(r.delta_nu > 45.0 && r.delta_nu < 180.0, "{}", r.delta_nu);
}

#[test]
fn sweeps_stay_finite_over_working_ranges() {
    let sweeps = [
        "cavity.metal = Ag\nsweep.variable = x\nsweep.from = 0.05\nsweep.to = 0.95\nsweep.points = 7",
        "cavity.metal = Pt\ntemperature_K = 70\nsweep.variable = x\nsweep.from = 0.05\nsweep.to = 0.5\nsweep.points = 4",
        "cavity.metal = Al\ntemperature_K = 70\ncavity.x_um = 0.1\nsweep.variable = RRR\nsweep.from = 1\nsweep.to = 100\nsweep.points = 4",
        "sweep.variable = w\nsweep.from = 0.2\nsweep.to = 20\nsweep.points = 5",
        "sweep.variable = T\nsweep.from = 20\nsweep.to = 400\nsweep.points = 4",
    ];
    for text in sweeps {
        let rows = run_sweep(&RunConfig::from_text(text).unwrap()).unwrap();
        for r in rows {
            let v = [r.delta_nu, r.half_width_khz, r.res_h, r.nonres_h, r.nonres_e];
            assert!(v.iter().all(|x| x.is_finite()), "{text}: {r:?}");
            assert!(r.half_width_khz > 0.0);
        }
    }
}

#[test]
fn thin_layers_shift_less() {
    let text = "sweep.variable = w\nsweep.from = 0.25\nsweep.to = 10\nsweep.points = 5";
    let rows = run_sweep(&RunConfig::from_text(text).unwrap()).unwrap();
    for p in rows.windows(2) {
        assert!(p[1].res_h >= p[0].res_h * 0.98, "{:?}", p);
    }
    let last = rows.len() - 1;
    assert!((rows[last].res_h / rows[last - 1].res_h - 1.0).abs() < 0.02);
}
