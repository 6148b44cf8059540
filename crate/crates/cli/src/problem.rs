//! Problem files: the data a check needs beyond the path itself.

use serde::Deserialize;
use sigcert::{CauchyProblem, HamiltonianSystem, LinearField, MultiPoly, ParseError, VarietySpec};

use crate::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ProblemFile {
    #[serde(default)]
    pub polynomials: Vec<String>,
    pub r: Option<usize>,
    pub l: Option<usize>,
    pub matrix_a: Option<Vec<Vec<f64>>>,
    pub vector_v: Option<Vec<f64>>,
    #[serde(default)]
    pub init: InitData,
    #[serde(default)]
    pub anchored: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitData {
    /// `v_0, ..., v_{l-1}` for Cauchy problems.
    pub values: Option<Vec<Vec<f64>>>,
    pub p: Option<Vec<f64>>,
    pub x0: Option<Vec<f64>>,
    pub p0: Option<Vec<f64>>,
}

impl ProblemFile {
    pub fn from_json_str(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| {
            Failure::Parse(
                ParseError {
                    line: Some(e.line()),
                    column: Some(e.column()),
                    message: format!("problem file: {e}"),
                }
                .to_string(),
            )
        })
    }

    fn polys(&self, num_vars: usize) -> Result<Vec<MultiPoly>, Failure> {
        if self.polynomials.is_empty() {
            return Err(Failure::Usage("problem file lists no polynomials".into()));
        }
        self.polynomials
            .iter()
            .enumerate()
            .map(|(k, text)| {
                MultiPoly::parse(text, num_vars)
                    .map_err(|e| Failure::Parse(format!("polynomial {} ({text:?}): {e}", k + 1)))
            })
            .collect()
    }

    fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
        field
            .as_ref()
            .ok_or_else(|| Failure::Usage(format!("problem file needs `{name}`")))
    }

    pub fn variety(&self, num_vars: usize) -> Result<VarietySpec, Failure> {
        Ok(VarietySpec::new(self.polys(num_vars)?, self.anchored)?)
    }

    pub fn holonomy(&self) -> Result<(usize, usize), Failure> {
        Ok((*Self::require(&self.r, "r")?, *Self::require(&self.l, "l")?))
    }

    pub fn cauchy(&self) -> Result<CauchyProblem, Failure> {
        let (r, l) = self.holonomy()?;
        let polys = self.polys(1 + r * (l + 1))?;
        let init = self.init.values.clone().unwrap_or_default();
        Ok(CauchyProblem::new(r, l, polys, init)?)
    }

    pub fn linear_field(&self) -> Result<LinearField, Failure> {
        Ok(LinearField::new(
            Self::require(&self.matrix_a, "matrixA")?.clone(),
            Self::require(&self.init.p, "init.p")?.clone(),
        )?)
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianSystem, Failure> {
        Ok(HamiltonianSystem::new(
            Self::require(&self.matrix_a, "matrixA")?.clone(),
            Self::require(&self.vector_v, "vectorV")?.clone(),
            Self::require(&self.init.x0, "init.x0")?.clone(),
            Self::require(&self.init.p0, "init.p0")?.clone(),
        )?)
    }
}
