use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_oner");

fn manifest_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn oner(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Writes a scenario with the given two-level section and extra tables.
fn scenario(dir: &TempDir, two_level: &str, rest: &str) -> String {
    let text = format!(
        "nucleus = \"Be9\"\nb0_tesla = 1.0\ntheta = 0.7853981633974483\n\n[two_level]\n{two_level}\n\n{rest}\n"
    );
    let path = dir.path().join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Blocks of a multi-table CSV, each as rows of fields (header first).
fn blocks(text: &str) -> Vec<Vec<Vec<String>>> {
    text.split("\n\n")
        .map(|b| {
            b.lines()
                .map(|l| l.split(',').map(str::to_string).collect())
                .collect()
        })
        .collect()
}

fn float(s: &str) -> f64 {
    s.parse().unwrap()
}

fn column(block: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = block[0].iter().position(|h| h == name).unwrap();
    block[1..].iter().map(|r| float(&r[i])).collect()
}

fn summary(block: &[Vec<String>], key: &str) -> String {
    block
        .iter()
        .find(|r| r[0] == key)
        .map(|r| r[1].clone())
        .unwrap()
}

const DEFAULT: &str = "scenarios/be9_default.toml";

#[test]
fn default_steady_state_is_25_over_54() {
    let out = stdout(&oner(&[
        "steady-state",
        "--scenario",
        manifest_path(DEFAULT).to_str().unwrap(),
    ]));
    let b = blocks(&out);
    assert!((column(&b[0], "rho_ee")[0] - 25.0 / 54.0).abs() < 1e-12);
    assert!(out.contains("4.629629629629"));
}

#[test]
fn undriven_steady_state_is_empty() {
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, "rabi_hz = 0.0\ndecay_hz = 1.0e6", "");
    let b = blocks(&stdout(&oner(&["steady-state", "--scenario", &s])));
    assert_eq!(column(&b[0], "rho_ee")[0], 0.0);
}

#[test]
fn detuning_equal_to_coherence_decay_gives_one_sixth() {
    // γ⊥ = Γ/2 with no extra dephasing; Ω² = γ⊥ Γ and Δ = γ⊥.
    let gamma: f64 = 1.0e6;
    let perp = gamma / 2.0;
    let tl = format!(
        "rabi_hz = {:e}\ndecay_hz = {gamma:e}\ndetuning_hz = {perp:e}",
        (perp * gamma).sqrt()
    );
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, &tl, "");
    let b = blocks(&stdout(&oner(&["steady-state", "--scenario", &s])));
    assert!((column(&b[0], "rho_ee")[0] - 1.0 / 6.0).abs() < 1e-12);
}

fn pulse_run(gamma_tau: f64, samples: usize) -> Vec<Vec<Vec<String>>> {
    let (omega, gamma) = (1.0e6, 0.4e6);
    let rate = 2.0 * PI * gamma / gamma_tau;
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        &format!("rabi_hz = {omega:e}\ndecay_hz = {gamma:e}"),
        &format!(
            "[pulse]\nrepetition_rate_hz = {rate:e}\nperiods = 3\nsamples_per_period = {samples}"
        ),
    );
    blocks(&stdout(&oner(&["pulse", "--scenario", &s])))
}

#[test]
fn long_pulses_give_square_wave_harmonic_ratio() {
    let b = pulse_run(500.0, 2000);
    let (a, bn) = (column(&b[1], "a_n"), column(&b[1], "b_n"));
    let ratio = bn[1] / a[0];
    assert!((ratio / (2.0 / PI) - 1.0).abs() < 0.03, "b1/a0 = {ratio}");
    assert_eq!(b[1].len(), 12);
}

#[test]
fn moderate_pulses_ring_about_omega_tau_over_4pi_times() {
    let b = pulse_run(5.0, 4000);
    let rho = column(&b[0], "rho_ee");
    let on = &rho[..2000];
    let maxima = (1..on.len() - 1)
        .filter(|&k| on[k] > on[k - 1] && on[k] >= on[k + 1])
        .count();
    // Ωτ/4π with Ω and τ from the run above.
    let omega_tau = 1.0e6 / 0.4e6 * 5.0;
    let expected = (omega_tau / (4.0 * PI)).round() as usize;
    assert_eq!(maxima, expected);
}

#[test]
fn undriven_pulse_series_is_flat_zero() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "rabi_hz = 0.0\ndecay_hz = 0.0",
        "[pulse]\nrepetition_rate_hz = 1.0e3\nperiods = 2\nsamples_per_period = 50",
    );
    let b = blocks(&stdout(&oner(&["pulse", "--scenario", &s])));
    assert!(column(&b[0], "rho_ee").iter().all(|&v| v == 0.0));
    assert_eq!(b[0].len(), 1 + 101);
}

#[test]
fn spectrum_mirror_pairs_and_zeeman_column() {
    let b = blocks(&stdout(&oner(&[
        "spectrum",
        "--scenario",
        manifest_path(DEFAULT).to_str().unwrap(),
    ])));
    let rows = &b[0];
    let corr = |label: &str| float(&rows.iter().find(|r| r[0] == label).unwrap()[2]);
    let top = corr("3/2->1/2");
    assert!(top != 0.0);
    assert!((top + corr("-1/2->-3/2")).abs() < 1e-9 * top.abs());
    assert_eq!(corr("1/2->-1/2"), 0.0);
    for r in &rows[1..6] {
        let dm1 = r[0] == "3/2->1/2" || r[0] == "1/2->-1/2" || r[0] == "-1/2->-3/2";
        if dm1 {
            assert!((float(&r[1]).abs() - 8.9755e6).abs() < 1e-6);
        }
    }

    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "rabi_hz = 1.0e9\ndecay_hz = 4.0e8",
        "[nqi]\nground_khz = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]\nexcited_khz = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]",
    );
    let b = blocks(&stdout(&oner(&["spectrum", "--scenario", &s])));
    assert!(column(&b[0], "quadrupole_correction_hz")
        .iter()
        .all(|&v| v == 0.0));
}

fn table_scenario(dir: &TempDir, sweep_field_max: f64) -> String {
    let table = manifest_path("data/synthetic_efg.csv");
    scenario(
        dir,
        "rabi_hz = 1.0e9\ndecay_hz = 4.0e8",
        &format!(
            "[nqi]\ntable = \"{}\"\nfield_au = 0.01\nground_state = \"ground\"\nexcited_state = \"excited\"\n\n\
             [sweep]\ntheta = {{ min = 0.0, max = 1.5707963267948966, count = 9 }}\n\
             field_au = {{ min = 0.0, max = {sweep_field_max:e}, count = 3 }}",
            table.display()
        ),
    )
}

#[test]
fn rabi_map_angular_shapes() {
    let dir = TempDir::new().unwrap();
    let s = table_scenario(&dir, 0.02);
    let b = blocks(&stdout(&oner(&["rabi-map", "--scenario", &s])));
    let rows = &b[0][1..];
    assert_eq!(rows.len(), 9 * 3 * 5);
    for field_index in 0..3 {
        let slice = |tr: &str| -> Vec<(f64, f64)> {
            rows.iter()
                .filter(|r| r[2] == tr)
                .skip(field_index)
                .step_by(3)
                .map(|r| (float(&r[0]), float(&r[3])))
                .collect()
        };
        let dm1 = slice("3/2->1/2");
        let peak = dm1.iter().map(|p| p.1).fold(0.0, f64::max);
        assert!(peak > 0.0);
        assert!(dm1[0].1 <= 1e-3 * peak && dm1[8].1 <= 1e-3 * peak);
        assert_eq!(dm1[4].1, peak, "maximum at pi/4");
        assert!((dm1[4].0 - PI / 4.0).abs() < 1e-12);
        assert_eq!(slice("3/2->-1/2")[0].1, 0.0);
        assert!(slice("1/2->-1/2").iter().all(|p| p.1 == 0.0));
    }
    let thetas: Vec<f64> = rows.iter().map(|r| float(&r[0])).collect();
    assert!(
        thetas.windows(2).all(|w| w[1] >= w[0]),
        "rows ordered by theta"
    );
}

#[test]
fn rabi_map_refuses_extrapolation() {
    let dir = TempDir::new().unwrap();
    let s = table_scenario(&dir, 0.03);
    let o = oner(&["rabi-map", "--scenario", &s]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0.03"));
}

#[test]
fn outputs_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let s = table_scenario(&dir, 0.02);
    let a = oner(&["rabi-map", "--scenario", &s]).stdout;
    let b = oner(&["rabi-map", "--scenario", &s]).stdout;
    assert_eq!(a, b);
    let default = manifest_path(DEFAULT);
    let d = default.to_str().unwrap();
    let (p, q) = (dir.path().join("p.csv"), dir.path().join("q.csv"));
    for path in [&p, &q] {
        assert!(
            oner(&["pulse", "--scenario", d, "--out", path.to_str().unwrap()])
                .status
                .success()
        );
    }
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
}

#[test]
fn coupled_run_matches_prediction_and_effective_model() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(manifest_path(DEFAULT))
        .unwrap()
        .replace("rabi_periods = 2.0", "rabi_periods = 1.0");
    let s = dir.path().join("short.toml");
    std::fs::write(&s, text).unwrap();
    let s = s.to_str().unwrap();
    let coupled = blocks(&stdout(&oner(&["coupled", "--scenario", s])));
    let effective = blocks(&stdout(&oner(&[
        "coupled",
        "--model",
        "effective",
        "--scenario",
        s,
    ])));
    let dev: f64 = float(&summary(&coupled[1], "relative_deviation"));
    assert!(dev.abs() <= 0.10, "deviation {dev}");
    assert_eq!(coupled[0].len(), effective[0].len());
    for name in ["p_3/2", "p_1/2", "p_-1/2", "p_-3/2"] {
        let (a, b) = (column(&coupled[0], name), column(&effective[0], name));
        let worst = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.05, "{name}: {worst}");
    }
}

#[test]
fn decoupled_spin_stays_put() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(manifest_path(DEFAULT))
        .unwrap()
        .replace(
            "[-50.0, -50.0, 100.0, 0.0, 0.0, 0.0]",
            "[0.0, 0.0, 0.0, 0.0, 0.0, 0.0]",
        )
        .replace("dark_periods = 10", "dark_periods = 3");
    let s = dir.path().join("dark.toml");
    std::fs::write(&s, text).unwrap();
    let o = oner(&["coupled", "--scenario", s.to_str().unwrap()]);
    let b = blocks(&stdout(&o));
    assert_eq!(b[0][0][0], "t_pulse_periods");
    assert!(column(&b[0], "p_3/2")
        .iter()
        .all(|&v| (v - 1.0).abs() < 1e-12));
    assert_eq!(summary(&b[1], "fit_rabi_hz"), "none");
    assert!(String::from_utf8_lossy(&o.stderr).contains("not driven"));
}

fn eta_note(preset: &str) -> f64 {
    let o = oner(&[
        "efg-mesh",
        "--preset",
        preset,
        "--n-theta",
        "9",
        "--n-phi",
        "8",
    ]);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    let v = err.split("eta = ").nth(1).unwrap().trim();
    float(v)
}

#[test]
fn mesh_presets_report_their_asymmetry() {
    assert!((eta_note("eta-one") - 1.0).abs() < 1e-12);
    assert!(eta_note("eta-zero").abs() < 1e-12);
    assert!((eta_note("eta-third") - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn isotropic_mesh_radius_is_the_scale() {
    let out = stdout(&oner(&[
        "efg-mesh",
        "--preset",
        "isotropic",
        "--scale",
        "2.5",
        "--n-theta",
        "9",
        "--n-phi",
        "12",
    ]));
    let b = blocks(&out);
    assert_eq!(b[0].len(), 1 + 9 * 12);
    assert!(column(&b[0], "radius")
        .iter()
        .all(|&r| (r - 2.5).abs() < 1e-15));
    assert!(column(&b[0], "sign").iter().all(|&s| s == 1.0));
}

#[test]
fn mesh_from_explicit_tensor() {
    let out = stdout(&oner(&[
        "efg-mesh",
        "--tensor",
        "-1,-1,2,0,0,0",
        "--n-theta",
        "9",
        "--n-phi",
        "8",
    ]));
    let b = blocks(&out);
    assert_eq!(b[0][1][3], "1", "positive at the pole");
}

#[test]
fn zero_resolution_is_a_config_error() {
    let o = oner(&["efg-mesh", "--preset", "isotropic", "--n-theta", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ingest_check_accepts_the_shipped_table() {
    let out = stdout(&oner(&[
        "ingest-check",
        manifest_path("data/synthetic_efg.csv").to_str().unwrap(),
    ]));
    assert!(out.starts_with("state,rows,field_min_au,field_max_au\nexcited,5,"));
}

#[test]
fn ingest_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let header = "field_au,state_label,Qxx_kHz,Qyy_kHz,Qzz_kHz,Qxy_kHz,Qxz_kHz,Qyz_kHz\n";
    let cases = [
        (
            "malformed.csv",
            format!("{header}0.0,g,-1,-1,2,0,0,0\n0.1,g,abc,-1,2,0,0,0\n"),
            "line 3",
        ),
        (
            "trace.csv",
            format!("{header}0.0,g,-1,-1,2,0,0,0\n0.1,g,-1,-1,2,0,0,0\n0.2,g,1,1,2,0,0,0\n"),
            "line 4",
        ),
    ];
    for (name, text, line) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let o = oner(&["ingest-check", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(4), "{name}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(line), "{name}: {err}");
    }
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(oner(&["steady-state"]).status.code(), Some(2));
    assert_eq!(
        oner(&["steady-state", "--scenario", "/nonexistent/scenario.toml"])
            .status
            .code(),
        Some(2)
    );
    let s = scenario(&dir, "rabi_hz = 1.0\ndecay_hz = -1.0", "");
    assert_eq!(
        oner(&["steady-state", "--scenario", &s]).status.code(),
        Some(2)
    );
    let s = scenario(&dir, "rabi_hz = 1.0\ndecay_hz = 1.0\nbogus = 3", "");
    assert_eq!(
        oner(&["steady-state", "--scenario", &s]).status.code(),
        Some(2)
    );
    let s = scenario(&dir, "rabi_hz = 1.0\ndecay_hz = 1.0", "[nqi]\ntable = \"missing.csv\"\nfield_au = 0.0\nground_state = \"g\"\nexcited_state = \"e\"");
    assert_eq!(
        oner(&["steady-state", "--scenario", &s]).status.code(),
        Some(2)
    );
}

#[test]
fn hierarchy_violations_are_reported_on_stderr() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "rabi_hz = 1.0e3\ndecay_hz = 4.0e2",
        "[pulse]\nrepetition_rate_hz = 1.0e3\nperiods = 1\nsamples_per_period = 20",
    );
    let o = oner(&["pulse", "--scenario", &s]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("will not follow the pulse envelope"));
}
