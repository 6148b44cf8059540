//! Residual reports for the signature certificates.
//!
//! Every condition is a family of linear identities `⟨σ(X), e·w⟩ = 0`
//! indexed by words `w`. Only words up to a finite length `L` are checked,
//! so a PASS means "consistent up to length L", never a proof.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::PathModel;
use crate::poly::MultiPoly;
use crate::pushforward::GraphMap;
use crate::signature::{pair, signature, SignatureMethod, TruncSig};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// PASS at or below `tol_pass`, FAIL at or above `tol_fail` (or NaN),
    /// INCONCLUSIVE in between.
    pub fn from_residual(max_abs: f64, tol_pass: f64, tol_fail: f64) -> Self {
        if max_abs.is_nan() || max_abs >= tol_fail {
            Verdict::Fail
        } else if max_abs <= tol_pass {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Status of the reducedness hypothesis carried into the report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reducedness {
    #[default]
    Unverified,
    UserAsserted,
    BacktrackReduced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    /// Signature truncation level `K`.
    pub trunc: usize,
    /// Longest word `w` in the checked families, `L`.
    pub word_len: usize,
    pub tol_pass: f64,
    pub tol_fail: f64,
    /// Approximation used for sampled paths.
    pub method: SignatureMethod,
    /// Hamiltonian checks compare the initial y block with `A·x0`
    /// instead of `A·p0`.
    pub strict_paper: bool,
    pub reducedness: Reducedness,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig::sampled(5, 2)
    }
}

impl CheckConfig {
    /// Thresholds `1e-5 / 1e-3` with the extrapolated chordal signature.
    pub fn sampled(trunc: usize, word_len: usize) -> Self {
        CheckConfig {
            trunc,
            word_len,
            tol_pass: 1e-5,
            tol_fail: 1e-3,
            method: SignatureMethod::Richardson,
            strict_paper: false,
            reducedness: Reducedness::Unverified,
        }
    }

    /// Thresholds `1e-9 / 1e-6` for exact piecewise-linear signatures.
    pub fn piecewise_linear(trunc: usize, word_len: usize) -> Self {
        CheckConfig {
            tol_pass: 1e-9,
            tol_fail: 1e-6,
            ..CheckConfig::sampled(trunc, word_len)
        }
    }

    pub fn for_path(path: &PathModel, trunc: usize, word_len: usize) -> Self {
        if path.is_piecewise_linear() {
            Self::piecewise_linear(trunc, word_len)
        } else {
            Self::sampled(trunc, word_len)
        }
    }

    pub fn with_tolerances(mut self, tol_pass: f64, tol_fail: f64) -> Self {
        self.tol_pass = tol_pass;
        self.tol_fail = tol_fail;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trunc == 0 {
            return Err(Error::Config("truncation level K must be positive".into()));
        }
        if self.word_len == 0 {
            return Err(Error::Config("word length L must be positive".into()));
        }
        if !(self.tol_pass >= 0.0 && self.tol_pass < self.tol_fail) {
            return Err(Error::Config(format!(
                "need 0 <= tol_pass < tol_fail, got {} and {}",
                self.tol_pass, self.tol_fail
            )));
        }
        Ok(())
    }

    fn require_depth(&self, overhead: usize, what: &str) -> Result<()> {
        let needed = self.word_len + overhead;
        if self.trunc < needed {
            return Err(Error::Config(format!(
                "{what} pairs words of length up to L + {overhead} = {needed}, \
                 but the truncation level is K = {}",
                self.trunc
            )));
        }
        Ok(())
    }

    fn verdict(&self, max_abs: f64) -> Verdict {
        Verdict::from_residual(max_abs, self.tol_pass, self.tol_fail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub label: String,
    pub word: String,
    pub residual: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub pass: f64,
    pub fail: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReportMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature_method: Option<String>,
    pub reducedness: Reducedness,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectableReport {
    pub projectable: bool,
    pub max_deviation: f64,
    pub tol: f64,
    /// `"solution"` or `"generalized solution"` inside Cauchy reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub condition: String,
    #[serde(rename = "K")]
    pub trunc: usize,
    #[serde(rename = "L")]
    pub word_len: usize,
    pub tolerances: Tolerances,
    pub rows: Vec<ResidualRow>,
    pub max_abs_residual: f64,
    pub verdict: Verdict,
    pub metadata: ReportMetadata,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subreports: Vec<ResidualReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projectable: Option<ProjectableReport>,
}

impl ResidualReport {
    fn new(condition: &str, cfg: &CheckConfig, rows: Vec<ResidualRow>) -> Self {
        let max = max_abs(rows.iter().map(|r| r.residual));
        ResidualReport {
            condition: condition.to_string(),
            trunc: cfg.trunc,
            word_len: cfg.word_len,
            tolerances: Tolerances {
                pass: cfg.tol_pass,
                fail: cfg.tol_fail,
            },
            rows,
            max_abs_residual: max,
            verdict: cfg.verdict(max),
            metadata: ReportMetadata {
                reducedness: cfg.reducedness,
                ..Default::default()
            },
            subreports: Vec::new(),
            projectable: None,
        }
    }

    /// A report whose verdict is the conjunction of its parts.
    fn composite(condition: &str, cfg: &CheckConfig, parts: Vec<ResidualReport>) -> Self {
        let mut report = ResidualReport::new(condition, cfg, Vec::new());
        report.max_abs_residual = max_abs(parts.iter().map(|p| p.max_abs_residual));
        report.verdict = parts
            .iter()
            .map(|p| p.verdict)
            .max()
            .unwrap_or(Verdict::Pass);
        report.subreports = parts;
        report
    }

    fn annotate(mut self, ctx: &Context) -> Self {
        self.metadata.path_digest = Some(ctx.path.digest());
        self.metadata.signature_method = Some(ctx.method_name());
        self.metadata.notes.push(format!(
            "PASS means consistent for all words up to length L = {}",
            ctx.cfg.word_len
        ));
        self
    }

    /// Rows of this report and all subreports, depth first.
    pub fn all_rows(&self) -> Vec<&ResidualRow> {
        let mut out: Vec<&ResidualRow> = self.rows.iter().collect();
        for sub in &self.subreports {
            out.extend(sub.all_rows());
        }
        out
    }

    pub fn subreport(&self, condition: &str) -> Option<&ResidualReport> {
        self.subreports.iter().find(|s| s.condition == condition)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v.abs())
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarietySpec {
    pub polys: Vec<MultiPoly>,
    /// Also require `g_i(X(a)) = 0`.
    pub anchored: bool,
}

impl VarietySpec {
    pub fn new(polys: Vec<MultiPoly>, anchored: bool) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::usage("a variety needs at least one polynomial"));
        }
        let d = polys[0].num_vars();
        if polys.iter().any(|p| p.num_vars() != d) {
            return Err(Error::usage(
                "all polynomials must share the same variables",
            ));
        }
        Ok(VarietySpec { polys, anchored })
    }

    pub fn num_vars(&self) -> usize {
        self.polys[0].num_vars()
    }
}

/// `F_1 = ... = F_m = 0` in jet coordinates `(t, f, f', ..., f^(l))` with
/// initial data `f^(k)(0) = v_k` for `k < l`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyProblem {
    pub r: usize,
    pub l: usize,
    pub polys: Vec<MultiPoly>,
    pub init: Vec<Vec<f64>>,
}

impl CauchyProblem {
    pub fn new(r: usize, l: usize, polys: Vec<MultiPoly>, init: Vec<Vec<f64>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::usage("r must be positive"));
        }
        if polys.is_empty() {
            return Err(Error::usage("a Cauchy problem needs at least one equation"));
        }
        let d = 1 + r * (l + 1);
        if let Some(p) = polys.iter().find(|p| p.num_vars() != d) {
            return Err(Error::usage(format!(
                "equations must use d = 1 + r(l+1) = {d} variables, found {}",
                p.num_vars()
            )));
        }
        if init.len() != l {
            return Err(Error::usage(format!(
                "expected {l} initial vectors v_0..v_{{l-1}}, got {}",
                init.len()
            )));
        }
        if let Some(v) = init.iter().find(|v| v.len() != r) {
            return Err(Error::usage(format!(
                "initial vectors must have length r = {r}, found {}",
                v.len()
            )));
        }
        Ok(CauchyProblem { r, l, polys, init })
    }

    pub fn dim(&self) -> usize {
        1 + self.r * (self.l + 1)
    }
}

/// `f' = A f` with `f(0) = p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearField {
    pub a: Vec<Vec<f64>>,
    pub p: Vec<f64>,
}

impl LinearField {
    pub fn new(a: Vec<Vec<f64>>, p: Vec<f64>) -> Result<Self> {
        let r = p.len();
        if r == 0 {
            return Err(Error::usage("the state dimension must be positive"));
        }
        check_square(&a, r, "A")?;
        Ok(LinearField { a, p })
    }
}

/// Hamiltonian `H = v·x + p·A p / 2`: `x' = A p`, `p' = -v`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSystem {
    pub a: Vec<Vec<f64>>,
    pub v: Vec<f64>,
    pub x0: Vec<f64>,
    pub p0: Vec<f64>,
}

impl HamiltonianSystem {
    pub fn new(a: Vec<Vec<f64>>, v: Vec<f64>, x0: Vec<f64>, p0: Vec<f64>) -> Result<Self> {
        let s = v.len();
        if s == 0 {
            return Err(Error::usage("the position dimension must be positive"));
        }
        check_square(&a, s, "A")?;
        if x0.len() != s || p0.len() != s {
            return Err(Error::usage(format!("x0 and p0 must have length s = {s}")));
        }
        for (i, row) in a.iter().enumerate() {
            for (j, &x) in row.iter().enumerate().take(i) {
                let y = a[j][i];
                if (x - y).abs() > 1e-12 * (1.0 + x.abs().max(y.abs())) {
                    return Err(Error::usage(format!(
                        "A is not symmetric: a[{}][{}] = {x} but a[{}][{}] = {y}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(HamiltonianSystem { a, v, x0, p0 })
    }

    pub fn s(&self) -> usize {
        self.v.len()
    }
}

fn check_square(a: &[Vec<f64>], n: usize, name: &str) -> Result<()> {
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::usage(format!("{name} must be a {n}x{n} matrix")));
    }
    Ok(())
}

fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// A path, its signature and the configuration shared by sub-checks.
struct Context<'a> {
    path: &'a PathModel,
    cfg: &'a CheckConfig,
    sig: TruncSig,
    start: Vec<f64>,
}

impl<'a> Context<'a> {
    fn new(path: &'a PathModel, cfg: &'a CheckConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Context {
            path,
            cfg,
            sig: signature(path, cfg.trunc, cfg.method),
            start: path.start().to_vec(),
        })
    }

    fn d(&self) -> usize {
        self.path.dim()
    }

    fn method_name(&self) -> String {
        if self.path.is_piecewise_linear() {
            "exact piecewise-linear".into()
        } else {
            match self.cfg.method {
                SignatureMethod::Chordal => "chordal".into(),
                SignatureMethod::Richardson => "chordal with Richardson extrapolation".into(),
            }
        }
    }

    fn words(&self) -> Vec<Word> {
        Word::all_up_to(self.d(), self.cfg.word_len).collect()
    }

    fn scale_for(&self, w: &Word) -> f64 {
        1.0 + self.sig.level_max_abs((w.len() + 2).min(self.cfg.trunc))
    }

    fn entry(&self, prefix: &[usize], w: &Word) -> f64 {
        let head = Word::new(self.d(), prefix.to_vec()).expect("letters in range");
        self.sig
            .entry(&head.concat(w).expect("same alphabet"))
            .expect("depth validated")
    }

    /// Evaluates `residual(label, w)` for every `(label, w)` in parallel,
    /// keeping the input order.
    fn rows<F>(&self, labels: &[String], residual: F) -> Vec<ResidualRow>
    where
        F: Fn(usize, &Word) -> f64 + Sync,
    {
        let words = self.words();
        let jobs: Vec<(usize, &Word)> = (0..labels.len())
            .flat_map(|k| words.iter().map(move |w| (k, w)))
            .collect();
        jobs.par_iter()
            .map(|&(k, w)| {
                let r = residual(k, w);
                ResidualRow {
                    label: labels[k].clone(),
                    word: w.to_string(),
                    residual: r,
                    normalized: r / self.scale_for(w),
                }
            })
            .collect()
    }

    fn point_at_zero(&self, what: &str) -> Result<Vec<f64>> {
        let (a, b) = self.path.domain();
        if !(a <= 0.0 && 0.0 <= b) {
            return Err(Error::usage(format!(
                "{what} needs t = 0 inside the time domain [{a}, {b}]"
            )));
        }
        self.path.eval_at(0.0)
    }

    fn initial_rows(&self, actual: &[f64], expected: &[f64], names: &[String]) -> Vec<ResidualRow> {
        actual
            .iter()
            .zip(expected)
            .zip(names)
            .map(|((x, e), name)| {
                let r = (x - e).abs();
                ResidualRow {
                    label: format!("{name}(0)"),
                    word: String::new(),
                    residual: r,
                    normalized: r / (1.0 + e.abs()),
                }
            })
            .collect()
    }

    fn variety(&self, spec: &VarietySpec, condition: &str) -> Result<ResidualReport> {
        let d = self.d();
        if spec.num_vars() != d {
            return Err(Error::usage(format!(
                "polynomials in {} variables for a path in R^{d}",
                spec.num_vars()
            )));
        }
        let max_deg = spec
            .polys
            .iter()
            .map(|p| p.degree() as usize)
            .max()
            .unwrap_or(0);
        self.cfg
            .require_depth(max_deg.max(1), "the variety condition")?;
        let images = spec
            .polys
            .iter()
            .map(|g| {
                GraphMap::with_f64_anchor(g.clone(), &self.start).map(|m| m.first_letter_image())
            })
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<String> = (1..=spec.polys.len()).map(|i| format!("g{i}")).collect();
        let mut rows = self.rows(&labels, |k, w| {
            let e = images[k].concat_word(w).expect("same alphabet");
            pair(&self.sig, &e).expect("depth validated")
        });
        if spec.anchored {
            for (i, g) in spec.polys.iter().enumerate() {
                let v = g.eval(&self.start)?.abs();
                rows.push(ResidualRow {
                    label: format!("g{}(X(a))", i + 1),
                    word: String::new(),
                    residual: v,
                    normalized: v,
                });
            }
        }
        Ok(ResidualReport::new(condition, self.cfg, rows))
    }

    fn holonomy(&self, r: usize, l: usize, condition: &str) -> Result<ResidualReport> {
        let d = self.d();
        if r == 0 || d != 1 + r * (l + 1) {
            return Err(Error::usage(format!(
                "(r, l) = ({r}, {l}) needs a path in R^{}, got R^{d}",
                1 + r * (l + 1)
            )));
        }
        if l == 0 {
            let mut report = ResidualReport::new(condition, self.cfg, Vec::new());
            report
                .metadata
                .notes
                .push("vacuous: every path is (r, 0)-holonomic".into());
            return Ok(report);
        }
        self.cfg.require_depth(2, "the holonomy condition")?;
        let indices: Vec<usize> = (2..=r * l + 1).collect();
        let labels: Vec<String> = indices.iter().map(|i| format!("i={i}")).collect();
        let rows = self.rows(&labels, |k, w| {
            let i = indices[k];
            self.entry(&[i + r, 1], w) - self.entry(&[i], w)
                + self.start[i + r - 1] * self.entry(&[1], w)
        });
        Ok(ResidualReport::new(condition, self.cfg, rows))
    }
}

/// Membership in `{g_1 = ... = g_t = 0}` (translated to `X(a)`), for all
/// words up to length `L`. Anchored specs also report `|g_i(X(a))|`.
pub fn variety_check(
    x: &PathModel,
    spec: &VarietySpec,
    cfg: &CheckConfig,
) -> Result<ResidualReport> {
    let ctx = Context::new(x, cfg)?;
    Ok(ctx.variety(spec, "variety")?.annotate(&ctx))
}

/// `Ẋ_i = Ẋ_1 X_{i+r}` for `2 <= i <= rl + 1`.
pub fn holonomy_check(
    x: &PathModel,
    r: usize,
    l: usize,
    cfg: &CheckConfig,
) -> Result<ResidualReport> {
    let ctx = Context::new(x, cfg)?;
    Ok(ctx.holonomy(r, l, "holonomic")?.annotate(&ctx))
}

/// `Ẋ_1 X_3 = Ẋ_2` in `R^3`; the `(1, 1)`-holonomic condition.
pub fn legendrian_check(x: &PathModel, cfg: &CheckConfig) -> Result<ResidualReport> {
    if x.dim() != 3 {
        return Err(Error::usage(format!(
            "Legendrian paths live in R^3, got R^{}",
            x.dim()
        )));
    }
    let ctx = Context::new(x, cfg)?;
    Ok(ctx.holonomy(1, 1, "legendrian")?.annotate(&ctx))
}

/// Whether `X_1(t) = t` on the path's own time grid.
pub fn projectable_check(x: &PathModel, tol: f64) -> ProjectableReport {
    let dev = x
        .times()
        .iter()
        .zip(x.nodes())
        .map(|(t, v)| (v[0] - t).abs())
        .fold(0.0, f64::max);
    ProjectableReport {
        projectable: dev <= tol,
        max_deviation: dev,
        tol,
        classification: None,
    }
}

/// Initial data, holonomy and the (unanchored) variety condition, joined.
/// Projectability is reported separately as solution vs generalized
/// solution.
pub fn cauchy_check(
    x: &PathModel,
    prob: &CauchyProblem,
    cfg: &CheckConfig,
) -> Result<ResidualReport> {
    let d = prob.dim();
    if x.dim() != d {
        return Err(Error::usage(format!(
            "problem with (r, l) = ({}, {}) needs a path in R^{d}, got R^{}",
            prob.r,
            prob.l,
            x.dim()
        )));
    }
    let ctx = Context::new(x, cfg)?;
    let x0 = ctx.point_at_zero("a Cauchy check")?;

    let mut expected = vec![0.0];
    for v in &prob.init {
        expected.extend_from_slice(v);
    }
    let names: Vec<String> = (1..=expected.len()).map(|k| format!("X{k}")).collect();
    let initial = ResidualReport::new(
        "initial-data",
        cfg,
        ctx.initial_rows(&x0[..expected.len()], &expected, &names),
    );
    let holonomy = ctx.holonomy(prob.r, prob.l, "holonomic")?;
    let spec = VarietySpec::new(prob.polys.clone(), false)?;
    let mut variety = ctx.variety(&spec, "variety")?;
    for (i, f) in prob.polys.iter().enumerate() {
        variety
            .metadata
            .notes
            .push(format!("F{}(X(0)) = {:e}", i + 1, f.eval(&x0)?));
    }

    let mut report = ResidualReport::composite("cauchy", cfg, vec![initial, holonomy, variety]);
    let (a, _) = x.domain();
    if prob.l >= 2 && a == 0.0 {
        report
            .metadata
            .warnings
            .push("l >= 2 and the path starts at t = 0: the characterization needs a < 0".into());
    }
    let mut proj = projectable_check(x, cfg.tol_pass);
    proj.classification = Some(
        if proj.projectable {
            "solution"
        } else {
            "generalized solution"
        }
        .into(),
    );
    report.projectable = Some(proj);
    Ok(report.annotate(&ctx))
}

/// `f' = A f`, `f(0) = p` for `X = (t, f, f')`: initial point `(0, p, A p)`,
/// `Σ_j a_ij dX_{1+j} = dX_{1+r+i}`, and `(r, 1)`-holonomy.
pub fn linear_vf_check(
    x: &PathModel,
    field: &LinearField,
    cfg: &CheckConfig,
) -> Result<ResidualReport> {
    let r = field.p.len();
    if x.dim() != 1 + 2 * r {
        return Err(Error::usage(format!(
            "a linear field on R^{r} needs a path in R^{}, got R^{}",
            1 + 2 * r,
            x.dim()
        )));
    }
    let ctx = Context::new(x, cfg)?;
    cfg.require_depth(2, "the linear vector field check")?;
    let x0 = ctx.point_at_zero("a linear vector field check")?;

    let mut expected = vec![0.0];
    expected.extend_from_slice(&field.p);
    expected.extend(mat_vec(&field.a, &field.p));
    let names: Vec<String> = (1..=expected.len()).map(|k| format!("X{k}")).collect();
    let initial = ResidualReport::new(
        "initial-data",
        cfg,
        ctx.initial_rows(&x0, &expected, &names),
    );

    let labels: Vec<String> = (1..=r).map(|i| format!("i={i}")).collect();
    let rows = ctx.rows(&labels, |k, w| {
        let i = k + 1;
        let lhs: f64 = (1..=r)
            .map(|j| field.a[i - 1][j - 1] * ctx.entry(&[1 + j], w))
            .sum();
        lhs - ctx.entry(&[1 + r + i], w)
    });
    let flow = ResidualReport::new("vector-field", cfg, rows);
    let holonomy = ctx.holonomy(r, 1, "holonomic")?;
    Ok(ResidualReport::composite("linear-vf", cfg, vec![initial, flow, holonomy]).annotate(&ctx))
}

/// Hamilton's equations for `H = v·x + p·A p / 2` on the layout
/// `(t, x, p, y, q)` with `y = x'` and `q = p'`.
pub fn hamiltonian_check(
    x: &PathModel,
    sys: &HamiltonianSystem,
    cfg: &CheckConfig,
) -> Result<ResidualReport> {
    let s = sys.s();
    if x.dim() != 1 + 4 * s {
        return Err(Error::usage(format!(
            "a Hamiltonian system with s = {s} needs a path in R^{}, got R^{}",
            1 + 4 * s,
            x.dim()
        )));
    }
    let ctx = Context::new(x, cfg)?;
    cfg.require_depth(2, "the Hamiltonian check")?;
    let x0 = ctx.point_at_zero("a Hamiltonian check")?;

    let y0 = if cfg.strict_paper {
        mat_vec(&sys.a, &sys.x0)
    } else {
        mat_vec(&sys.a, &sys.p0)
    };
    let mut expected = vec![0.0];
    expected.extend_from_slice(&sys.x0);
    expected.extend_from_slice(&sys.p0);
    expected.extend(y0);
    expected.extend(sys.v.iter().map(|v| -v));
    let mut names = vec!["t".to_string()];
    for block in ["x", "p", "y", "q"] {
        names.extend((1..=s).map(|i| format!("{block}{i}")));
    }
    let initial = ResidualReport::new(
        "initial-data",
        cfg,
        ctx.initial_rows(&x0, &expected, &names),
    );

    let labels: Vec<String> = (1..=s).map(|i| format!("i={i}")).collect();
    let velocity = ResidualReport::new(
        "position-flow",
        cfg,
        ctx.rows(&labels, |k, w| {
            let i = k + 1;
            let lhs: f64 = (1..=s)
                .map(|h| sys.a[i - 1][h - 1] * ctx.entry(&[1 + s + h], w))
                .sum();
            lhs - ctx.entry(&[1 + 2 * s + i], w)
        }),
    );
    let force = ResidualReport::new(
        "momentum-flow",
        cfg,
        ctx.rows(&labels, |k, w| ctx.entry(&[1 + 3 * s + k + 1], w)),
    );
    let holonomy = ctx.holonomy(2 * s, 1, "holonomic")?;
    let mut report =
        ResidualReport::composite("hamiltonian", cfg, vec![initial, velocity, force, holonomy]);
    if cfg.strict_paper {
        report.metadata.warnings.push(
            "strict mode: the initial y block is compared with A·x0; \
             the dynamics x' = A p give A·p0"
                .into(),
        );
    } else {
        report.metadata.notes.push(
            "initial y block compared with A·p0, as forced by x' = A p; \
             the A·x0 form is available in strict mode"
                .into(),
        );
    }
    Ok(report.annotate(&ctx))
}

/// Necessary condition for staying on the sphere `|x|^2 = |X(a)|^2`.
pub fn sphere_invariant_check(x: &PathModel, cfg: &CheckConfig) -> Result<ResidualReport> {
    let d = x.dim();
    let mut g = MultiPoly::zero(d);
    for i in 1..=d {
        g = &g + &MultiPoly::var(d, i)?.pow(2);
    }
    let radius2: f64 = x.start().iter().map(|v| v * v).sum();
    g = &g - &MultiPoly::constant(d, crate::poly::exact_rational(radius2)?);
    let spec = VarietySpec::new(vec![g], true)?;
    let ctx = Context::new(x, cfg)?;
    let mut report = ctx.variety(&spec, "sphere")?.annotate(&ctx);
    report
        .metadata
        .notes
        .push("necessary condition only: not every path on a sphere is a rotation".into());
    Ok(report)
}
