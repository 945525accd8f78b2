//! Python bindings. Reports cross the boundary as plain dicts and lists
//! decoded from the same JSON the command line prints.

use lindim::{ContainmentPolicy, OracleConfig as CoreConfig};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

fn err(e: lindim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn policy(name: &str) -> PyResult<ContainmentPolicy> {
    name.parse().map_err(err)
}

#[pyclass(module = "pylindim", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    inner: lindim::LinearSystem,
}

#[pymethods]
impl LinearSystem {
    #[new]
    #[pyo3(signature = (n, d, mults = Vec::new()))]
    fn new(n: i64, d: i64, mults: Vec<i64>) -> PyResult<Self> {
        Ok(LinearSystem {
            inner: lindim::canonicalize(n, d, &mults).map_err(err)?,
        })
    }

    /// Multiplicities in the `5x3,4,3,2` shorthand.
    #[staticmethod]
    fn parse(n: u32, d: u32, mults: &str) -> PyResult<Self> {
        Ok(LinearSystem {
            inner: lindim::LinearSystem::parse(n, d, mults).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d()
    }

    #[getter]
    fn mults(&self) -> Vec<u32> {
        self.inner.mults().to_vec()
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s()
    }

    fn vdim(&self) -> BigInt {
        lindim::virtual_dimension(&self.inner)
    }

    fn lvdim(&self) -> BigInt {
        lindim::linear_virtual_dimension(&self.inner)
    }

    #[pyo3(signature = (policy = "point-deletion"))]
    fn ldim(&self, policy: &str) -> PyResult<BigInt> {
        Ok(lindim::linear_expected_dimension(
            &self.inner,
            self::policy(policy)?,
        ))
    }

    fn effectivity(&self) -> String {
        format!("{:?}", lindim::effectivity(&self.inner)).to_lowercase()
    }

    fn is_cremona_reduced(&self) -> bool {
        lindim::is_cremona_reduced(&self.inner)
    }

    fn base_locus<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &lindim::enumerate_base_cycles(&self.inner))
    }

    fn cohomology<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &lindim::cohomology_table(&self.inner).map_err(err)?)
    }

    fn cremona_reduce<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &lindim::cremona_reduce(&lindim::PicardClass::from_system(&self.inner)),
        )
    }

    fn froberg(&self) -> PyResult<BigInt> {
        lindim::froberg_prediction(&self.inner).map_err(err)
    }

    /// Dimension report; `actual` is the measured dimension if known.
    #[pyo3(signature = (actual = None, policy = "point-deletion"))]
    fn report<'py>(
        &self,
        py: Python<'py>,
        actual: Option<i64>,
        policy: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &lindim::DimensionReport::new(&self.inner, self::policy(policy)?, actual),
        )
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "LinearSystem({}, {}, {:?})",
            self.inner.n(),
            self.inner.d(),
            self.inner.mults()
        )
    }
}

#[pyclass(module = "pylindim", frozen, from_py_object)]
#[derive(Clone)]
pub struct OracleConfig {
    inner: CoreConfig,
}

#[pymethods]
impl OracleConfig {
    #[new]
    #[pyo3(signature = (prime_bits = 62, trials = 3, seed = lindim::oracle::DEFAULT_SEED))]
    fn new(prime_bits: u32, trials: u32, seed: u64) -> Self {
        OracleConfig {
            inner: CoreConfig {
                prime_bits,
                trials,
                seed,
            },
        }
    }

    #[getter]
    fn prime_bits(&self) -> u32 {
        self.inner.prime_bits
    }

    #[getter]
    fn trials(&self) -> u32 {
        self.inner.trials
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }
}

fn config(cfg: Option<OracleConfig>) -> CoreConfig {
    cfg.map(|c| c.inner).unwrap_or_default()
}

#[pyfunction]
#[pyo3(signature = (system, config = None))]
fn interpolation_dimension<'py>(
    py: Python<'py>,
    system: &LinearSystem,
    config: Option<OracleConfig>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = self::config(config);
    let r = py
        .detach(|| lindim::interpolation_dimension(&system.inner, &cfg))
        .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (system, config = None))]
fn apolarity_dimension<'py>(
    py: Python<'py>,
    system: &LinearSystem,
    config: Option<OracleConfig>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = self::config(config);
    let r = py
        .detach(|| lindim::apolarity_dimension(&system.inner, &cfg))
        .map_err(err)?;
    to_py(py, &r)
}

/// Vanishing order along the span of the points with these 1-based labels.
#[pyfunction]
#[pyo3(signature = (system, labels, config = None))]
fn cycle_multiplicity_probe(
    system: &LinearSystem,
    labels: Vec<usize>,
    config: Option<OracleConfig>,
) -> PyResult<u32> {
    let idx = lindim::MultiIndex::from_labels(&labels, system.inner.s()).map_err(err)?;
    lindim::cycle_multiplicity_probe(&system.inner, &idx, &self::config(config)).map_err(err)
}

#[pyfunction]
fn truncated_series<'py>(
    py: Python<'py>,
    n: u32,
    degrees: Vec<u32>,
    top: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &lindim::truncated_series(n, &degrees, top))
}

#[pyfunction]
fn cones_h0(n: u32, d: u32, s: u32) -> PyResult<BigInt> {
    lindim::cones_h0(n, d, s).map_err(err)
}

#[pyfunction]
fn cones_h1(n: u32, d: u32, s: u32) -> PyResult<BigInt> {
    lindim::cones_h1(n, d, s).map_err(err)
}

#[pymodule]
mod pylindim {
    #[pymodule_export]
    use super::{
        apolarity_dimension, cones_h0, cones_h1, cycle_multiplicity_probe, interpolation_dimension,
        truncated_series, LinearSystem, OracleConfig,
    };
}
