//! Python bindings. Exact rationals cross the boundary as `fractions.Fraction`.

use homogeneous_moments as hm;
use hm::hypergeometric::{PFQParams, DEFAULT_MAX_TERMS};
use hm::sphere_oracle::UnitVector;
use hm::vortex_gas::{DEFAULT_MAX_M, DEFAULT_SERIES_TOL};
use hm::{BigRational, Error};
use pyo3::exceptions::{PyArithmeticError, PyOverflowError, PyValueError};
use pyo3::prelude::*;

fn to_py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Domain(_) | Error::PiPowerMismatch { .. } => PyValueError::new_err(msg),
        Error::Overflow(_) => PyOverflowError::new_err(msg),
        Error::SeriesNonConvergence { .. } | Error::QuadratureNonConvergence { .. } => {
            PyArithmeticError::new_err(msg)
        }
    }
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    hm::exact_core::parse_rational(&value.str()?.to_cow()?).map_err(to_py_err)
}

fn direction(v: Vec<f64>) -> PyResult<UnitVector> {
    UnitVector::normalized(v).map_err(to_py_err)
}

/// Exact I(m, n) from the Gamma-function form.
#[pyfunction]
fn i_mn<'py>(py: Python<'py>, m: u64, n: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &hm::i_mn(m, n).map_err(to_py_err)?)
}

/// Exact I(m, n) from the even/odd factorial closed forms.
#[pyfunction]
fn i_mn_closed<'py>(py: Python<'py>, m: u64, n: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &hm::i_mn_closed(m, n).map_err(to_py_err)?)
}

/// Exact I(m, n) by multinomial expansion over the mixed moments.
#[pyfunction]
fn i_mn_expand<'py>(py: Python<'py>, m: u64, n: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &hm::i_mn_expand(m, n).map_err(to_py_err)?)
}

/// Exact normalized mixed moment for the exponent vector `r`.
#[pyfunction]
fn mixed_moment<'py>(py: Python<'py>, r: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
    let r = hm::MultiIndex::new(r).map_err(to_py_err)?;
    fraction(py, &hm::mixed_moment(&r).map_err(to_py_err)?)
}

/// Gamma(twice / 2) as `(coefficient, power)` meaning `coefficient · π^(power/2)`.
#[pyfunction]
fn gamma_half<'py>(py: Python<'py>, twice: i64) -> PyResult<(Bound<'py, PyAny>, i32)> {
    let g = hm::gamma_half(hm::HalfInteger::from_twice(twice)).map_err(to_py_err)?;
    Ok((fraction(py, g.coeff())?, g.half_pi_power()))
}

/// Surface volume of the unit sphere S^(n-1).
#[pyfunction]
fn sphere_volume(n: u64) -> PyResult<f64> {
    Ok(hm::sphere_oracle::sphere_volume(n).map_err(to_py_err)?.to_f64())
}

/// Closed-form integral of x_n^(2m) over S^(n-1).
#[pyfunction]
fn axis_moment(n: u64, m: u64) -> PyResult<f64> {
    Ok(hm::sphere_oracle::axis_moment(n, m).map_err(to_py_err)?.to_f64())
}

/// Generalized hypergeometric series; parameters may be ints, Fractions or "p/q" strings.
#[pyfunction]
#[pyo3(signature = (upper, lower, z, rel_tol = 1e-15, max_terms = DEFAULT_MAX_TERMS))]
fn pfq(
    upper: Vec<Bound<'_, PyAny>>,
    lower: Vec<Bound<'_, PyAny>>,
    z: f64,
    rel_tol: f64,
    max_terms: usize,
) -> PyResult<f64> {
    let upper = upper.iter().map(rational).collect::<PyResult<_>>()?;
    let lower = lower.iter().map(rational).collect::<PyResult<_>>()?;
    let params = PFQParams::new(upper, lower, z).map_err(to_py_err)?;
    hm::hypergeometric::pfq(&params, rel_tol, max_terms).map_err(to_py_err)
}

/// Returns `(lhs, rhs, pass)` for the 2F1 evaluation of I(m, n).
#[pyfunction]
#[pyo3(signature = (m, n, rel_tol = 1e-10))]
fn check_2f1_identity(m: u64, n: u64, rel_tol: f64) -> PyResult<(f64, f64, bool)> {
    let c = hm::hypergeometric::check_2f1_identity(m, n, rel_tol).map_err(to_py_err)?;
    Ok((c.lhs, c.rhs, c.pass))
}

/// Localization coefficient `c` and power `p` with `∫ J₃^(2m) = c · Ã^p`.
#[pyfunction]
fn dh_moment_coeff<'py>(py: Python<'py>, n: u32, m: u32) -> PyResult<(Bound<'py, PyAny>, u64)> {
    let c = hm::vortex_gas::dh_moment_coeff(n, m).map_err(to_py_err)?;
    Ok((fraction(py, &c.coeff)?, c.power))
}

/// Sign convention: `pfaffian(J) = J12 J34 − J13 J24 + J14 J23`.
#[pyfunction]
fn pfaffian(components: [f64; 6]) -> f64 {
    hm::so4_orbit::pfaffian(&components)
}

#[pyclass(name = "MCEstimate", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyMCEstimate {
    mean: f64,
    std_error: f64,
    n_samples: usize,
    seed: u64,
}

impl From<hm::MCEstimate> for PyMCEstimate {
    fn from(e: hm::MCEstimate) -> Self {
        Self {
            mean: e.mean,
            std_error: e.std_error,
            n_samples: e.n_samples,
            seed: e.seed,
        }
    }
}

#[pymethods]
impl PyMCEstimate {
    /// |mean − target| in standard errors.
    fn sigma_distance(&self, target: f64) -> f64 {
        self.inner().sigma_distance(target)
    }

    #[pyo3(signature = (target, k = 3.0))]
    fn within_sigma(&self, target: f64, k: f64) -> bool {
        self.inner().within_sigma(target, k)
    }

    fn __repr__(&self) -> String {
        format!(
            "MCEstimate(mean={}, std_error={}, n_samples={}, seed={})",
            self.mean, self.std_error, self.n_samples, self.seed
        )
    }
}

impl PyMCEstimate {
    fn inner(&self) -> hm::MCEstimate {
        hm::MCEstimate {
            mean: self.mean,
            std_error: self.std_error,
            n_samples: self.n_samples,
            seed: self.seed,
        }
    }
}

/// Monte Carlo estimate of E[⟨v, x⟩^(2m)] for x uniform on S^(n-1); `v` is normalized.
#[pyfunction]
#[pyo3(signature = (v, m, n_samples = 1_000_000, seed = hm::DEFAULT_SEED))]
fn mc_projected_moment(py: Python<'_>, v: Vec<f64>, m: u32, n_samples: usize, seed: u64) -> PyResult<PyMCEstimate> {
    let v = direction(v)?;
    let n = v.dim();
    py.detach(|| hm::sphere_oracle::mc_projected_moment(n, m, &v, n_samples, seed))
        .map(Into::into)
        .map_err(to_py_err)
}

/// Monte Carlo estimate of ∫ J12 J34 over the orbit of unit simple 2-vectors.
#[pyfunction]
#[pyo3(signature = (n_samples = 1_000_000, seed = hm::DEFAULT_SEED))]
fn mc_orthogonality(py: Python<'_>, n_samples: usize, seed: u64) -> PyResult<PyMCEstimate> {
    py.detach(|| hm::so4_orbit::mc_orthogonality(n_samples, seed))
        .map(Into::into)
        .map_err(to_py_err)
}

/// Monte Carlo estimate of ∫ ⟨v, J⟩^(2m) over the orbit; `v` has 6 components.
#[pyfunction]
#[pyo3(signature = (m, v, n_samples = 1_000_000, seed = hm::DEFAULT_SEED))]
fn mc_orbit_hypothesis(py: Python<'_>, m: u32, v: Vec<f64>, n_samples: usize, seed: u64) -> PyResult<PyMCEstimate> {
    let v = direction(v)?;
    py.detach(|| hm::so4_orbit::mc_orbit_hypothesis(m, &v, n_samples, seed))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyclass(name = "VortexParams", frozen)]
struct PyVortexParams(hm::vortex_gas::VortexParams);

#[pymethods]
impl PyVortexParams {
    #[new]
    #[pyo3(signature = (n, r2, mu2, t = 1.0, hbar = 1.0))]
    fn new(n: u32, r2: f64, mu2: f64, t: f64, hbar: f64) -> PyResult<Self> {
        hm::vortex_gas::VortexParams::new(n, r2, mu2, t, hbar)
            .map(Self)
            .map_err(to_py_err)
    }

    /// Builds the parameters from the dimensionless coupling μ²Ã²/T.
    #[staticmethod]
    #[pyo3(signature = (n, r2, coupling, t = 1.0, hbar = 1.0))]
    fn with_coupling(n: u32, r2: f64, coupling: f64, t: f64, hbar: f64) -> PyResult<Self> {
        hm::vortex_gas::VortexParams::with_coupling(n, r2, coupling, t, hbar)
            .map(Self)
            .map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn r2(&self) -> f64 {
        self.0.r2()
    }

    #[getter]
    fn mu2(&self) -> f64 {
        self.0.mu2()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.0.area()
    }

    #[getter]
    fn coupling(&self) -> f64 {
        self.0.coupling()
    }

    fn __repr__(&self) -> String {
        format!(
            "VortexParams(n={}, r2={}, mu2={}, t={}, hbar={})",
            self.0.n(),
            self.0.r2(),
            self.0.mu2(),
            self.0.t(),
            self.0.hbar()
        )
    }
}

/// Partition function by its moment series.
#[pyfunction]
#[pyo3(signature = (params, rel_tol = DEFAULT_SERIES_TOL, max_m = DEFAULT_MAX_M))]
fn z_series(params: &PyVortexParams, rel_tol: f64, max_m: u32) -> PyResult<f64> {
    hm::vortex_gas::z_series(&params.0, rel_tol, max_m).map_err(to_py_err)
}

/// Partition function by its closed hypergeometric form.
#[pyfunction]
#[pyo3(signature = (params, rel_tol = DEFAULT_SERIES_TOL))]
fn z_closed(params: &PyVortexParams, rel_tol: f64) -> PyResult<f64> {
    hm::vortex_gas::z_closed(&params.0, rel_tol).map_err(to_py_err)
}

#[pymodule]
fn hmoments(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", hm::DEFAULT_SEED)?;
    m.add_class::<PyMCEstimate>()?;
    m.add_class::<PyVortexParams>()?;
    m.add_function(wrap_pyfunction!(i_mn, m)?)?;
    m.add_function(wrap_pyfunction!(i_mn_closed, m)?)?;
    m.add_function(wrap_pyfunction!(i_mn_expand, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_moment, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_half, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_volume, m)?)?;
    m.add_function(wrap_pyfunction!(axis_moment, m)?)?;
    m.add_function(wrap_pyfunction!(pfq, m)?)?;
    m.add_function(wrap_pyfunction!(check_2f1_identity, m)?)?;
    m.add_function(wrap_pyfunction!(dh_moment_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(pfaffian, m)?)?;
    m.add_function(wrap_pyfunction!(mc_projected_moment, m)?)?;
    m.add_function(wrap_pyfunction!(mc_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(mc_orbit_hypothesis, m)?)?;
    m.add_function(wrap_pyfunction!(z_series, m)?)?;
    m.add_function(wrap_pyfunction!(z_closed, m)?)?;
    Ok(())
}
