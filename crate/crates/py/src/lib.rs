use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use engine::cbengine::{derive_full, is_scattered, rank_of_point, stage_contains};
use engine::classify::{homeomorphic as homeo, ms_characteristic, pairwise_distinct, Selector};
use engine::families::{generate, FamilyParams, Variant};
use engine::invariants::{default_kappas, psi as psi_of, signature as signature_of, singular_union};
use engine::oracle::check_expr;
use engine::ordinal::{CardinalSym, Ordinal, Regularity};
use engine::spaces::{parse_expr, PointName, SpaceExpr};
use engine::ultrametric::{prop1_order, read_json, verify_interval_property};

create_exception!(scattered, ScatteredError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    ScatteredError::new_err(e.to_string())
}

fn parsed<T: std::str::FromStr>(s: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(err)
}

/// Converts through JSON text so results arrive as plain dicts and lists.
fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn kappas(ks: Option<Vec<String>>) -> PyResult<Vec<CardinalSym>> {
    match ks {
        None => Ok(default_kappas()),
        Some(v) => v.iter().map(|k| parsed(k)).collect(),
    }
}

/// A space expression in the textual DSL, e.g. `prod(z,ord[w^2])`.
#[pyclass(frozen, eq, from_py_object, module = "scattered")]
#[derive(Clone, PartialEq)]
struct Space {
    expr: SpaceExpr,
}

#[pymethods]
impl Space {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Space { expr: parse_expr(text).map_err(err)? })
    }

    fn __str__(&self) -> String {
        self.expr.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Space('{}')", self.expr)
    }

    /// Derivative stages up to the height.
    fn derive<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &derive_full(&self.expr).map_err(err)?)
    }

    fn rank(&self, point: &str) -> PyResult<String> {
        let p: PointName = parsed(point)?;
        Ok(rank_of_point(&self.expr, &p).map_err(err)?.to_string())
    }

    fn in_stage(&self, point: &str, stage: &str) -> PyResult<bool> {
        let (p, g): (PointName, Ordinal) = (parsed(point)?, parsed(stage)?);
        stage_contains(&self.expr, &p, &g).map_err(err)
    }

    /// `(scattered, height)`.
    fn scattered(&self) -> PyResult<(bool, String)> {
        let (s, h) = is_scattered(&self.expr).map_err(err)?;
        Ok((s, h.to_string()))
    }

    /// `(alpha, n)` for compact countable spaces.
    fn characteristic(&self) -> PyResult<(String, u64)> {
        let c = ms_characteristic(&self.expr).map_err(err)?;
        Ok((c.alpha.to_string(), c.n))
    }

    #[pyo3(signature = (kappas=None))]
    fn signature<'py>(&self, py: Python<'py>, kappas: Option<Vec<String>>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &signature_of(&self.expr, &self::kappas(kappas)?).map_err(err)?)
    }

    /// Psi for a regular cardinal, the singular union otherwise.
    fn psi(&self, kappa: &str) -> PyResult<Vec<String>> {
        let k: CardinalSym = parsed(kappa)?;
        let v = if k.regularity() == Regularity::Singular {
            singular_union(&self.expr, &k)
        } else {
            psi_of(&self.expr, &k)
        }
        .map_err(err)?;
        Ok(v.iter().map(|o| o.to_string()).collect())
    }

    #[pyo3(signature = (depth=3))]
    fn oracle_check<'py>(&self, py: Python<'py>, depth: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &check_expr(&self.expr, depth).map_err(err)?)
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, kappas=None))]
fn homeomorphic<'py>(py: Python<'py>, a: &Space, b: &Space, kappas: Option<Vec<String>>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &homeo(&a.expr, &b.expr, &self::kappas(kappas)?).map_err(err)?)
}

/// Builds one member of a named family.
#[pyfunction]
#[pyo3(signature = (variant, set=Vec::new(), kappa=None, alpha=None))]
fn family(variant: &str, set: Vec<String>, kappa: Option<String>, alpha: Option<String>) -> PyResult<Space> {
    let params = FamilyParams {
        variant: parsed::<Variant>(variant)?,
        set: set.iter().map(|s| parsed(s)).collect::<PyResult<_>>()?,
        kappa: kappa.as_deref().map(parsed).transpose()?,
        alpha: alpha.as_deref().map(parsed).transpose()?,
    };
    Ok(Space { expr: generate(&params).map_err(err)?.expr })
}

#[pyfunction]
#[pyo3(signature = (spaces, kappas=None, select="all"))]
fn pairwise<'py>(py: Python<'py>, spaces: Vec<Space>, kappas: Option<Vec<String>>, select: &str) -> PyResult<Bound<'py, PyAny>> {
    let xs: Vec<SpaceExpr> = spaces.into_iter().map(|s| s.expr).collect();
    let sel: Selector = parsed(select)?;
    to_py(py, &pairwise_distinct(&xs, &self::kappas(kappas)?, sel).map_err(err)?)
}

/// Ball-tree order of a finite ultrametric given as `{"points": [...], "dist": [[...]]}`.
#[pyfunction]
fn ultra_order<'py>(py: Python<'py>, doc: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let text: String = match doc.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (doc,))?.extract()?,
    };
    let u = read_json(&text).map_err(err)?;
    let r = prop1_order(&u);
    let report = verify_interval_property(&u, &r).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("order", &report.order)?;
    out.set_item("intervals", to_py(py, &report.blocks)?)?;
    Ok(out)
}

#[pymodule]
fn scattered(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(homeomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise, m)?)?;
    m.add_function(wrap_pyfunction!(ultra_order, m)?)?;
    m.add("ScatteredError", m.py().get_type::<ScatteredError>())?;
    Ok(())
}
