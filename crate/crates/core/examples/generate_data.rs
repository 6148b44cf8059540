//! Writes the ready-to-run demo inputs under `data/` at the workspace root.
//!
//! ```text
//! cargo run -p sigcert --example generate_data [-- OUT_DIR]
//! ```

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sigcert::{PiecewiseLinearPath, SampledPath};

fn write_csv(dir: &Path, name: &str, a: f64, b: f64, n: usize, f: impl Fn(f64) -> Vec<f64>) {
    let path = SampledPath::from_fn(a, b, n, f).unwrap();
    write_sampled(dir, name, &path);
}

fn write_sampled(dir: &Path, name: &str, path: &SampledPath) {
    let file = fs::File::create(dir.join(name)).unwrap();
    path.write_csv(file).unwrap();
}

fn write_json(dir: &Path, name: &str, value: Value) {
    let mut text = serde_json::to_string_pretty(&value).unwrap();
    text.push('\n');
    fs::write(dir.join(name), text).unwrap();
}

/// `x² + x'² = 2t − t²` with `x(0) = 0`, stepped with RK4 in `s = √t`.
fn sphere_ode(n: usize) -> SampledPath {
    let rhs = |s: f64, x: f64| {
        let u = if s == 0.0 { 0.0 } else { x / s };
        2.0 * s * s * (2.0 - s * s - u * u).max(0.0).sqrt()
    };
    let mut x = 0.0;
    let mut s_prev = 0.0;
    let mut values = vec![vec![0.0, 0.0, 0.0]];
    for k in 1..=n {
        let t = k as f64 / n as f64;
        let s_next = t.sqrt();
        let h = (s_next - s_prev) / 16.0;
        for j in 0..16 {
            let s = s_prev + j as f64 * h;
            let k1 = rhs(s, x);
            let k2 = rhs(s + h / 2.0, x + h / 2.0 * k1);
            let k3 = rhs(s + h / 2.0, x + h / 2.0 * k2);
            let k4 = rhs(s + h, x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        s_prev = s_next;
        values.push(vec![t, x, (2.0 * t - t * t - x * x).max(0.0).sqrt()]);
    }
    let times = (0..=n).map(|k| k as f64 / n as f64).collect();
    SampledPath::new(times, values).unwrap()
}

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    fs::create_dir_all(&dir).unwrap();
    let dir = dir.canonicalize().unwrap();

    let on_paraboloid = |t: f64| {
        let (x, y) = (t.sin(), 0.5 * t - t * t);
        vec![x, y, 2.0 * x * x - y * y]
    };
    write_csv(&dir, "paraboloid.csv", 0.0, 1.0, 1000, on_paraboloid);
    write_csv(&dir, "paraboloid_perturbed.csv", 0.0, 1.0, 1000, |t| {
        let mut p = on_paraboloid(t);
        p[2] += 0.1 * t;
        p
    });
    write_json(
        &dir,
        "paraboloid.problem.json",
        json!({ "polynomials": ["2*x1^2 - x2^2 - x3"], "anchored": true }),
    );

    write_csv(&dir, "circle.csv", 0.0, 2.0 * PI, 2000, |t| {
        vec![t.cos(), t.sin()]
    });
    write_json(
        &dir,
        "circle.problem.json",
        json!({ "polynomials": ["x1^2 + x2^2 - 1"], "anchored": true }),
    );

    write_csv(&dir, "cylinder.csv", 0.0, 3.0 * PI, 2000, |t| {
        vec![t.cos(), 0.5 * (t.sin() * t.cos() - t) + 0.5, t.sin()]
    });
    write_json(
        &dir,
        "cylinder.problem.json",
        json!({ "polynomials": ["x3^2 + x1^2 - 1"], "r": 1, "l": 1, "anchored": true }),
    );

    write_sampled(&dir, "sphere_ode.csv", &sphere_ode(2000));
    write_json(
        &dir,
        "sphere_ode.problem.json",
        json!({
            "polynomials": ["(x1 - 1)^2 + x2^2 + x3^2 - 1"],
            "r": 1,
            "l": 1,
            "init": { "values": [[0.0]] }
        }),
    );

    write_csv(&dir, "rotation.csv", 0.0, 2.0, 2000, |t| {
        vec![t, t.cos(), t.sin(), -t.sin(), t.cos()]
    });
    write_csv(&dir, "rotation_flipped.csv", 0.0, 2.0, 2000, |t| {
        vec![t, t.cos(), -t.sin(), -t.sin(), -t.cos()]
    });
    write_json(
        &dir,
        "rotation.problem.json",
        json!({ "matrixA": [[0.0, -1.0], [1.0, 0.0]], "init": { "p": [1.0, 0.0] } }),
    );

    write_csv(&dir, "hamiltonian.csv", 0.0, 2.0, 1000, |t| {
        vec![t, -t * t / 2.0, -t, -t, -1.0]
    });
    write_csv(&dir, "hamiltonian_perturbed.csv", 0.0, 2.0, 1000, |t| {
        vec![t, -t * t / 2.0, -t, -t, -1.0 + 0.05 * t]
    });
    write_json(
        &dir,
        "hamiltonian.problem.json",
        json!({
            "matrixA": [[1.0]],
            "vectorV": [1.0],
            "init": { "x0": [0.0], "p0": [0.0] }
        }),
    );

    write_csv(&dir, "monomial.csv", 0.0, 1.0, 2000, |t| vec![t, t * t]);
    let segment = PiecewiseLinearPath::new(vec![vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
    fs::write(dir.join("segment.json"), segment.to_json_string() + "\n").unwrap();

    println!("wrote demo inputs to {}", dir.display());
}
