//! Piecewise-linear and sampled paths in `R^d`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, ParseError, Result};

/// Default endpoint tolerance for [`concat_paths`].
pub const TAU_JOIN: f64 = 1e-9;

const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearPath {
    dim: usize,
    points: Vec<Vec<f64>>,
    times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    dim: usize,
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathModel {
    PiecewiseLinear(PiecewiseLinearPath),
    Sampled(SampledPath),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FdScheme {
    /// Second-order central differences, second-order one-sided at the ends.
    #[default]
    Central2,
    /// Fourth-order central differences, fourth-order one-sided near the ends.
    Central4,
}

/// Order and stencil for [`jet_extend`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpec {
    pub l: usize,
    pub scheme: FdScheme,
}

impl JetSpec {
    pub fn extend(&self, f: &SampledPath) -> Result<SampledPath> {
        jet_extend(f, self.l, self.scheme)
    }
}

fn check_points(points: &[Vec<f64>], what: &str) -> Result<usize> {
    if points.len() < 2 {
        return Err(Error::usage(format!("a {what} needs at least two points")));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(Error::usage("path dimension must be positive"));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::usage(format!(
                "point {i} has dimension {}, expected {dim}",
                p.len()
            )));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("point {i} has a non-finite entry")));
        }
    }
    Ok(dim)
}

fn check_times(times: &[f64], n: usize) -> Result<()> {
    if times.len() != n {
        return Err(Error::usage(format!(
            "{} times for {n} points",
            times.len()
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("non-finite time"));
    }
    if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::domain(format!(
            "times not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

fn uniform_times(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut times: Vec<f64> = (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect();
    times[n - 1] = b;
    times
}

fn interpolate(times: &[f64], values: &[Vec<f64>], t: f64) -> Result<Vec<f64>> {
    let (a, b) = (times[0], times[times.len() - 1]);
    if !(a..=b).contains(&t) {
        return Err(Error::domain(format!("time {t} outside [{a}, {b}]")));
    }
    let k = match times.partition_point(|&s| s <= t) {
        0 => 0,
        k if k >= times.len() => times.len() - 2,
        k => k - 1,
    };
    let s = (t - times[k]) / (times[k + 1] - times[k]);
    Ok(values[k]
        .iter()
        .zip(&values[k + 1])
        .map(|(x, y)| x + s * (y - x))
        .collect())
}

impl PiecewiseLinearPath {
    /// Vertices at uniform times on `[0, 1]`.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        check_points(&points, "piecewise-linear path")?;
        let times = uniform_times(0.0, 1.0, points.len());
        Self::with_times(points, times)
    }

    pub fn with_times(points: Vec<Vec<f64>>, times: Vec<f64>) -> Result<Self> {
        let dim = check_points(&points, "piecewise-linear path")?;
        check_times(&times, points.len())?;
        Ok(PiecewiseLinearPath { dim, points, times })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    /// Segment increments `p_{k+1} - p_k`.
    pub fn increments(&self) -> Vec<Vec<f64>> {
        self.points
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
            .collect()
    }

    /// Drops consecutive duplicate vertices. A path that collapses to a
    /// single point is kept as two equal vertices spanning the domain.
    pub fn normalize(&self) -> PiecewiseLinearPath {
        let (_, b) = self.domain();
        let mut points: Vec<Vec<f64>> = vec![self.points[0].clone()];
        let mut times = vec![self.times[0]];
        for (p, &t) in self.points.iter().zip(&self.times).skip(1) {
            if p != points.last().expect("non-empty") {
                points.push(p.clone());
                times.push(t);
            }
        }
        finish_vertices(&mut points, &mut times, b);
        PiecewiseLinearPath {
            dim: self.dim,
            points,
            times,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: PlJson = serde_json::from_str(text).map_err(json_error)?;
        let path = match raw.times {
            Some(times) => Self::with_times(raw.points, times)?,
            None => Self::new(raw.points)?,
        };
        if path.dim != raw.dimension {
            return Err(Error::usage(format!(
                "declared dimension {} but points have dimension {}",
                raw.dimension, path.dim
            )));
        }
        Ok(path)
    }

    pub fn to_json_string(&self) -> String {
        let raw = PlJson {
            dimension: self.dim,
            points: self.points.clone(),
            times: Some(self.times.clone()),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

fn finish_vertices(points: &mut Vec<Vec<f64>>, times: &mut Vec<f64>, b: f64) {
    if points.len() == 1 {
        points.push(points[0].clone());
        times.push(b);
    } else {
        *times.last_mut().expect("non-empty") = b;
    }
}

fn json_error(e: serde_json::Error) -> Error {
    if e.line() > 0 {
        ParseError {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        }
        .into()
    } else {
        ParseError::general(e.to_string()).into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlJson {
    dimension: usize,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    times: Option<Vec<f64>>,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let dim = check_points(&values, "sampled path")?;
        check_times(&times, values.len())?;
        Ok(SampledPath { dim, times, values })
    }

    /// Samples `f` at `n + 1` uniform times on `[a, b]`.
    pub fn from_fn<F>(a: f64, b: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64>,
    {
        if n == 0 {
            return Err(Error::usage("need at least one interval"));
        }
        let times = uniform_times(a, b, n + 1);
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(times, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    /// Keeps every `step`-th sample, always including the last one.
    pub fn subsample(&self, step: usize) -> SampledPath {
        assert!(step > 0, "step must be positive");
        let last = self.times.len() - 1;
        let mut idx: Vec<usize> = (0..=last).step_by(step).collect();
        if *idx.last().expect("non-empty") != last {
            idx.push(last);
        }
        SampledPath {
            dim: self.dim,
            times: idx.iter().map(|&i| self.times[i]).collect(),
            values: idx.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }

    /// Whether the time grid is uniform to relative accuracy `1e-8`.
    pub fn is_uniform(&self) -> bool {
        let (a, b) = self.domain();
        let h = (b - a) / (self.times.len() - 1) as f64;
        self.times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-8 * h)
    }

    /// Reads the `t,x1,...,xd` CSV format.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| ParseError::at_line(1, e.to_string()))?
            .clone();
        let names: Vec<&str> = headers.iter().collect();
        if names.len() < 2 || names[0] != "t" {
            return Err(ParseError::at_line(1, "header must be t,x1,...,xd").into());
        }
        for (i, name) in names.iter().enumerate().skip(1) {
            if *name != format!("x{i}") {
                return Err(ParseError::at_line(
                    1,
                    format!("header column {} must be x{i}, found '{name}'", i + 1),
                )
                .into());
            }
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let line = row + 2;
            let record = record.map_err(|e| ParseError::at_line(line, e.to_string()))?;
            if record.len() != names.len() {
                return Err(ParseError::at_line(
                    line,
                    format!("expected {} fields, found {}", names.len(), record.len()),
                )
                .into());
            }
            let mut nums = Vec::with_capacity(record.len());
            for field in record.iter() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| ParseError::at_line(line, format!("invalid number '{field}'")))?;
                nums.push(v);
            }
            times.push(nums[0]);
            values.push(nums[1..].to_vec());
        }
        if times.len() < 2 {
            return Err(ParseError::general("a sampled path needs at least two rows").into());
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(ParseError::at_line(i + 3, "times must be strictly increasing").into());
        }
        Self::new(times, values)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.dim).map(|i| format!("x{i}")));
        wtr.write_record(&header).map_err(csv_io)?;
        for (t, v) in self.times.iter().zip(&self.values) {
            let row = std::iter::once(t).chain(v).map(|x| format!("{x:?}"));
            wtr.write_record(row).map_err(csv_io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

impl From<PiecewiseLinearPath> for PathModel {
    fn from(p: PiecewiseLinearPath) -> Self {
        PathModel::PiecewiseLinear(p)
    }
}

impl From<SampledPath> for PathModel {
    fn from(p: SampledPath) -> Self {
        PathModel::Sampled(p)
    }
}

impl PathModel {
    pub fn dim(&self) -> usize {
        match self {
            PathModel::PiecewiseLinear(p) => p.dim,
            PathModel::Sampled(p) => p.dim,
        }
    }

    pub fn times(&self) -> &[f64] {
        match self {
            PathModel::PiecewiseLinear(p) => &p.times,
            PathModel::Sampled(p) => &p.times,
        }
    }

    /// Vertices of a piecewise-linear path or samples of a sampled one.
    pub fn nodes(&self) -> &[Vec<f64>] {
        match self {
            PathModel::PiecewiseLinear(p) => &p.points,
            PathModel::Sampled(p) => &p.values,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        let t = self.times();
        (t[0], t[t.len() - 1])
    }

    pub fn start(&self) -> &[f64] {
        &self.nodes()[0]
    }

    pub fn end(&self) -> &[f64] {
        let n = self.nodes();
        &n[n.len() - 1]
    }

    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self, PathModel::PiecewiseLinear(_))
    }

    /// Value at time `t`, linear between nodes.
    pub fn eval_at(&self, t: f64) -> Result<Vec<f64>> {
        interpolate(self.times(), self.nodes(), t)
    }

    /// Nodes and times as a sampled path; exact for piecewise-linear input.
    pub fn to_sampled(&self) -> SampledPath {
        match self {
            PathModel::Sampled(p) => p.clone(),
            PathModel::PiecewiseLinear(p) => SampledPath {
                dim: p.dim,
                times: p.times.clone(),
                values: p.points.clone(),
            },
        }
    }

    /// SHA-256 over the kind, dimension, times and node values.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(if self.is_piecewise_linear() {
            b"PL"
        } else {
            b"SP"
        });
        h.update((self.dim() as u64).to_le_bytes());
        h.update((self.times().len() as u64).to_le_bytes());
        for t in self.times() {
            h.update(t.to_le_bytes());
        }
        for v in self.nodes().iter().flatten() {
            h.update(v.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Loads a `.csv` sampled path or a `.json` piecewise-linear path.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("csv") => Ok(SampledPath::read_csv(std::fs::File::open(path)?)?.into()),
            Some("json") => {
                let text = std::fs::read_to_string(path)?;
                Ok(PiecewiseLinearPath::from_json_str(&text)?.into())
            }
            _ => Err(Error::usage(format!(
                "cannot infer path format of {}: expected .csv or .json",
                path.display()
            ))),
        }
    }
}

/// Time reversal on the same domain: `t -> a + b - t`.
pub fn inverse(x: &PathModel) -> PathModel {
    let (a, b) = x.domain();
    let mut times: Vec<f64> = x.times().iter().rev().map(|&t| a + b - t).collect();
    let nodes: Vec<Vec<f64>> = x.nodes().iter().rev().cloned().collect();
    let n = times.len();
    times[0] = a;
    times[n - 1] = b;
    match x {
        PathModel::PiecewiseLinear(p) => PathModel::PiecewiseLinear(PiecewiseLinearPath {
            dim: p.dim,
            points: nodes,
            times,
        }),
        PathModel::Sampled(p) => PathModel::Sampled(SampledPath {
            dim: p.dim,
            times,
            values: nodes,
        }),
    }
}

/// `X` followed by `Y`, with `Y` shifted in time to start where `X` ends.
/// Two piecewise-linear paths splice into a normalized piecewise-linear
/// path; any other combination yields a sampled path.
pub fn concat_paths(x: &PathModel, y: &PathModel) -> Result<PathModel> {
    concat_paths_with_tolerance(x, y, TAU_JOIN)
}

pub fn concat_paths_with_tolerance(x: &PathModel, y: &PathModel, tau: f64) -> Result<PathModel> {
    if x.dim() != y.dim() {
        return Err(Error::usage(format!(
            "dimension mismatch: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    let gap = x
        .end()
        .iter()
        .zip(y.start())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    if gap > tau {
        return Err(Error::domain(format!(
            "end of first path and start of second differ by {gap:e} (tolerance {tau:e})"
        )));
    }
    let (_, xb) = x.domain();
    let (ya, _) = y.domain();
    let mut times = x.times().to_vec();
    let mut nodes = x.nodes().to_vec();
    times.extend(y.times().iter().skip(1).map(|&t| t - ya + xb));
    nodes.extend(y.nodes().iter().skip(1).cloned());
    let dim = x.dim();
    match (x, y) {
        (PathModel::PiecewiseLinear(_), PathModel::PiecewiseLinear(_)) => {
            let path = PiecewiseLinearPath {
                dim,
                points: nodes,
                times,
            };
            Ok(PathModel::PiecewiseLinear(path.normalize()))
        }
        _ => Ok(PathModel::Sampled(SampledPath {
            dim,
            times,
            values: nodes,
        })),
    }
}

/// Removes collinear backtracking: whenever a segment runs back along the
/// previous one, the overlap cancels. Repeats until no segment reverses its
/// predecessor. Surviving vertices keep their times; the last time is `b`.
pub fn backtrack_reduce(x: &PiecewiseLinearPath) -> PiecewiseLinearPath {
    let (_, b) = x.domain();
    let mut stack: Vec<(Vec<f64>, f64)> = vec![(x.points[0].clone(), x.times[0])];
    for (p, &t) in x.points.iter().zip(&x.times).skip(1) {
        let p = p.clone();
        loop {
            let top = &stack[stack.len() - 1].0;
            if p == *top {
                break;
            }
            if stack.len() < 2 {
                stack.push((p, t));
                break;
            }
            let prev = &stack[stack.len() - 2].0;
            let u: Vec<f64> = top.iter().zip(prev).map(|(a, b)| a - b).collect();
            let v: Vec<f64> = p.iter().zip(top).map(|(a, b)| a - b).collect();
            let (nu, nv) = (norm(&u), norm(&v));
            if !reverses(&u, &v, nu, nv) {
                stack.push((p, t));
                break;
            }
            if (nv - nu).abs() <= COLLINEAR_TOL * nu.max(nv) {
                // Exact return to the previous vertex.
                stack.pop();
                break;
            } else if nv < nu {
                let last = stack.len() - 1;
                stack[last] = (p, t);
                break;
            } else {
                stack.pop();
                // Overshoot: `p` continues backwards from the new top.
            }
        }
    }
    let (mut points, mut times): (Vec<_>, Vec<_>) = stack.into_iter().unzip();
    finish_vertices(&mut points, &mut times, b);
    PiecewiseLinearPath {
        dim: x.dim,
        points,
        times,
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `v` points exactly opposite to `u`, up to relative rounding.
fn reverses(u: &[f64], v: &[f64], nu: f64, nv: f64) -> bool {
    if nu == 0.0 || nv == 0.0 {
        return false;
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    if dot >= 0.0 {
        return false;
    }
    let s = dot / (nu * nu);
    let off: f64 = v
        .iter()
        .zip(u)
        .map(|(vi, ui)| (vi - s * ui).powi(2))
        .sum::<f64>()
        .sqrt();
    off <= COLLINEAR_TOL * nv
}

/// Coordinate selection with 1-based `indices`, in the order given.
pub fn project(x: &PathModel, indices: &[usize]) -> Result<PathModel> {
    let d = x.dim();
    if indices.is_empty() {
        return Err(Error::usage("projection needs at least one index"));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > d) {
        return Err(Error::usage(format!("index {bad} outside 1..={d}")));
    }
    let nodes: Vec<Vec<f64>> = x
        .nodes()
        .iter()
        .map(|p| indices.iter().map(|&i| p[i - 1]).collect())
        .collect();
    let times = x.times().to_vec();
    let dim = indices.len();
    Ok(match x {
        PathModel::PiecewiseLinear(_) => PathModel::PiecewiseLinear(PiecewiseLinearPath {
            dim,
            points: nodes,
            times,
        }),
        PathModel::Sampled(_) => PathModel::Sampled(SampledPath {
            dim,
            times,
            values: nodes,
        }),
    })
}

/// Builds `(t, f, f', ..., f^(l))` from samples of `f: [a, b] -> R^r` by
/// repeated finite differencing. Channels are laid out in blocks of `r`.
pub fn jet_extend(f: &SampledPath, l: usize, scheme: FdScheme) -> Result<SampledPath> {
    let n = f.len();
    if l > 0 {
        let needed = match scheme {
            FdScheme::Central2 => 3,
            FdScheme::Central4 => 5,
        };
        if n < needed {
            return Err(Error::domain(format!(
                "{scheme:?} differences need at least {needed} samples, got {n}"
            )));
        }
        if !f.is_uniform() {
            return Err(Error::domain("finite differences need a uniform time grid"));
        }
    }
    let (a, b) = f.domain();
    let h = (b - a) / (n - 1) as f64;
    let r = f.dim;
    let mut channels: Vec<Vec<f64>> = (0..r)
        .map(|c| f.values.iter().map(|v| v[c]).collect())
        .collect();
    let mut blocks = vec![channels.clone()];
    for _ in 0..l {
        channels = channels
            .iter()
            .map(|ch| differentiate(ch, h, scheme))
            .collect();
        blocks.push(channels.clone());
    }
    let values = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(1 + r * (l + 1));
            row.push(f.times[i]);
            for block in &blocks {
                row.extend(block.iter().map(|ch| ch[i]));
            }
            row
        })
        .collect();
    Ok(SampledPath {
        dim: 1 + r * (l + 1),
        times: f.times.clone(),
        values,
    })
}

fn differentiate(f: &[f64], h: f64, scheme: FdScheme) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    match scheme {
        FdScheme::Central2 => {
            out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
            out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
            for i in 1..n - 1 {
                out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
            }
        }
        FdScheme::Central4 => {
            let d = 12.0 * h;
            out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d;
            out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d;
            out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
                + 3.0 * f[n - 5])
                / d;
            out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4]
                - f[n - 5])
                / d;
            for i in 2..n - 2 {
                out[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / d;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(points: &[&[f64]]) -> PiecewiseLinearPath {
        PiecewiseLinearPath::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let x: PathModel = pl(&[&[0.0, 0.0], &[1.0, 1.0]]).into();
        let inv = inverse(&x);
        assert_eq!(inv.nodes(), &[vec![1.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(inverse(&inv), x);

        let s =
            SampledPath::new(vec![0.0, 0.5, 2.0], vec![vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let inv = inverse(&s.clone().into());
        assert_eq!(inv.times(), &[0.0, 1.5, 2.0]);
        assert_eq!(inv.nodes(), &[vec![3.0], vec![2.0], vec![1.0]]);

        let c: PathModel = pl(&[&[2.0], &[2.0]]).into();
        assert_eq!(inverse(&c), c);
    }

    #[test]
    fn concat_examples() {
        let x: PathModel = pl(&[&[0.0, 0.0], &[1.0, 0.0]]).into();
        let y: PathModel = pl(&[&[1.0, 0.0], &[1.0, 1.0]]).into();
        let xy = concat_paths(&x, &y).unwrap();
        assert_eq!(
            xy.nodes(),
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
        assert_eq!(xy.times(), &[0.0, 1.0, 2.0]);

        let tail: PathModel = pl(&[&[1.0, 0.0], &[1.0, 0.0]]).into();
        let xt = concat_paths(&x, &tail).unwrap();
        assert_eq!(xt.nodes(), x.nodes());
        assert_eq!(xt.domain(), (0.0, 2.0));

        let far: PathModel = pl(&[&[1.0, 1e-6], &[2.0, 0.0]]).into();
        assert!(matches!(concat_paths(&x, &far), Err(Error::Domain(_))));

        let s: PathModel = SampledPath::from_fn(0.0, 1.0, 2, |t| vec![1.0, t])
            .unwrap()
            .into();
        assert!(!concat_paths(&x, &s).unwrap().is_piecewise_linear());
    }

    #[test]
    fn backtrack_examples() {
        let full = pl(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(
            backtrack_reduce(&full).points(),
            &[vec![0.0, 0.0], vec![0.0, 1.0]]
        );

        let clean = pl(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(backtrack_reduce(&clean), clean);

        let partial = pl(&[&[0.0, 0.0], &[2.0, 0.0], &[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(
            backtrack_reduce(&partial).points(),
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
    }

    #[test]
    fn backtrack_overshoot_and_collapse() {
        let over = pl(&[&[0.0], &[1.0], &[3.0], &[-1.0]]);
        assert_eq!(backtrack_reduce(&over).points(), &[vec![0.0], vec![-1.0]]);

        let there_and_back = pl(&[&[0.0, 0.0], &[1.0, 2.0], &[0.0, 0.0]]);
        let red = backtrack_reduce(&there_and_back);
        assert_eq!(red.points(), &[vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(red.domain(), (0.0, 1.0));
    }

    #[test]
    fn project_examples() {
        let x: PathModel = pl(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]).into();
        assert_eq!(project(&x, &[1, 2, 3]).unwrap(), x);
        assert_eq!(project(&x, &[2]).unwrap().nodes(), &[vec![2.0], vec![5.0]]);
        assert_eq!(
            project(&x, &[3, 1]).unwrap().nodes(),
            &[vec![3.0, 1.0], vec![6.0, 4.0]]
        );
        assert!(project(&x, &[4]).is_err());
        assert!(project(&x, &[0]).is_err());
    }

    #[test]
    fn jet_of_half_square() {
        let n = 100;
        let f = SampledPath::from_fn(0.0, 1.0, n, |t| vec![t * t / 2.0]).unwrap();
        let jet = jet_extend(&f, 1, FdScheme::Central2).unwrap();
        assert_eq!(jet.dim(), 3);
        for (t, v) in jet.times().iter().zip(jet.values()) {
            assert_eq!(v[0], *t);
            assert_eq!(v[1], t * t / 2.0);
            // Second-order stencils are exact on quadratics.
            assert!((v[2] - t).abs() < 1e-12, "t={t}: {}", v[2]);
        }
    }

    #[test]
    fn jet_derivative_error_is_second_order() {
        let err = |n: usize| {
            let f = SampledPath::from_fn(0.0, 1.0, n, |t| vec![t.sin()]).unwrap();
            let jet = jet_extend(&f, 1, FdScheme::Central2).unwrap();
            jet.values()
                .iter()
                .map(|v| (v[2] - v[0].cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(100) / err(200);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        let f = SampledPath::from_fn(0.0, 1.0, 100, |t| vec![t.sin()]).unwrap();
        let jet4 = jet_extend(&f, 1, FdScheme::Central4).unwrap();
        let e4 = jet4
            .values()
            .iter()
            .map(|v| (v[2] - v[0].cos()).abs())
            .fold(0.0, f64::max);
        assert!(e4 < 1e-7, "{e4}");
    }

    #[test]
    fn jet_order_zero_and_constant() {
        let f = SampledPath::from_fn(0.0, 2.0, 4, |t| vec![t.exp(), 1.0]).unwrap();
        let graph = jet_extend(&f, 0, FdScheme::Central2).unwrap();
        assert_eq!(graph.dim(), 3);
        assert_eq!(graph.values()[2], vec![1.0, 1f64.exp(), 1.0]);

        let c = SampledPath::from_fn(0.0, 1.0, 10, |_| vec![4.0]).unwrap();
        let jet = jet_extend(&c, 3, FdScheme::Central2).unwrap();
        assert_eq!(jet.dim(), 5);
        assert!(jet
            .values()
            .iter()
            .all(|v| v[2..].iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn jet_needs_enough_uniform_samples() {
        let f = SampledPath::from_fn(0.0, 1.0, 1, |t| vec![t]).unwrap();
        assert!(matches!(
            jet_extend(&f, 1, FdScheme::Central2),
            Err(Error::Domain(_))
        ));
        assert!(jet_extend(&f, 0, FdScheme::Central2).is_ok());
        let g = SampledPath::new(
            vec![0.0, 0.1, 0.5, 1.0],
            vec![vec![0.0], vec![0.1], vec![0.5], vec![1.0]],
        )
        .unwrap();
        assert!(jet_extend(&g, 1, FdScheme::Central2).is_err());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let s = SampledPath::from_fn(0.0, 1.0, 3, |t| vec![t, 1.0 / 3.0]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x1,x2\n"));
        assert_eq!(SampledPath::read_csv(text.as_bytes()).unwrap(), s);

        let bad_header = "time,x1\n0,1\n1,2\n";
        assert!(matches!(
            SampledPath::read_csv(bad_header.as_bytes()),
            Err(Error::Parse(ParseError { line: Some(1), .. }))
        ));
        let bad_num = "t,x1\n0,1\n1,abc\n";
        assert!(matches!(
            SampledPath::read_csv(bad_num.as_bytes()),
            Err(Error::Parse(ParseError { line: Some(3), .. }))
        ));
        let unsorted = "t,x1\n0,1\n0,2\n";
        assert!(SampledPath::read_csv(unsorted.as_bytes()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"dimension": 2, "points": [[0, 0], [1, 0], [1, 1]]}"#;
        let p = PiecewiseLinearPath::from_json_str(text).unwrap();
        assert_eq!(p.times(), &[0.0, 0.5, 1.0]);
        assert_eq!(
            PiecewiseLinearPath::from_json_str(&p.to_json_string()).unwrap(),
            p
        );
        let wrong = r#"{"dimension": 3, "points": [[0, 0], [1, 0]]}"#;
        assert!(PiecewiseLinearPath::from_json_str(wrong).is_err());
        assert!(matches!(
            PiecewiseLinearPath::from_json_str("{\"dimension\": 2,"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn eval_and_digest() {
        let x: PathModel = pl(&[&[0.0, 0.0], &[2.0, 4.0]]).into();
        assert_eq!(x.eval_at(0.25).unwrap(), vec![0.5, 1.0]);
        assert_eq!(x.eval_at(1.0).unwrap(), vec![2.0, 4.0]);
        assert!(x.eval_at(1.5).is_err());
        let d = x.digest();
        assert_eq!(d.len(), 64);
        assert_eq!(d, x.clone().digest());
        assert_ne!(d, inverse(&x).digest());
    }

    #[test]
    fn normalize_drops_duplicates() {
        let p = pl(&[&[0.0], &[0.0], &[1.0], &[1.0]]);
        let n = p.normalize();
        assert_eq!(n.points(), &[vec![0.0], vec![1.0]]);
        assert_eq!(n.domain(), p.domain());
    }
}
