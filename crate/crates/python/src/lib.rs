use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use warpsample::basis::{biorthogonality as biortho, gamma_value as gamma_at, y_function, BasisIndex};
use warpsample::bench::{self, Metric, SweepOpts};
use warpsample::signals::{make, Signal, SignalName, SignalParams};
use warpsample::synth::gamma_hat;
use warpsample::transform::{self, analyze_closed_formula, analyze_fourier, Expansion, IndexOrder};
use warpsample::warpcore::WarpProfile;
use warpsample::wks::{CutoffConvention, WksMode};

fn err(e: warpsample::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn metric(name: &str) -> PyResult<Metric> {
    match name {
        "linf" => Ok(Metric::Linf),
        "l2" => Ok(Metric::L2),
        "h1" => Ok(Metric::H1),
        other => Err(PyValueError::new_err(format!("metric must be linf, l2 or h1, got {other:?}"))),
    }
}

fn order(name: &str) -> PyResult<IndexOrder> {
    match name {
        "symmetric" => Ok(IndexOrder::Symmetric),
        "causal" => Ok(IndexOrder::Causal),
        other => Err(PyValueError::new_err(format!("order must be symmetric or causal, got {other:?}"))),
    }
}

/// Warping profile psi for (alpha, beta).
#[pyclass(name = "WarpProfile", frozen)]
struct PyWarpProfile {
    inner: WarpProfile,
}

#[pymethods]
impl PyWarpProfile {
    #[new]
    #[pyo3(signature = (alpha, beta = 1.0))]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(PyWarpProfile { inner: WarpProfile::new(alpha, beta).map_err(err)? })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    fn psi(&self, omega: f64) -> f64 {
        self.inner.psi(omega)
    }

    fn phi(&self, u: f64) -> PyResult<f64> {
        self.inner.phi(u).map_err(err)
    }

    fn chi(&self, u: f64) -> PyResult<f64> {
        self.inner.chi(u).map_err(err)
    }

    fn weight(&self, omega: f64) -> f64 {
        self.inner.weight(omega)
    }

    /// Basis spectrum at `omega` as `(re, im)`.
    fn gamma_hat(&self, n: f64, omega: f64) -> (f64, f64) {
        let z = gamma_hat(&self.inner, n, omega);
        (z.re, z.im)
    }

    fn __repr__(&self) -> String {
        format!("WarpProfile(alpha={}, beta={})", self.inner.alpha(), self.inner.beta())
    }
}

/// A corpus signal on [0, 10].
#[pyclass(name = "Signal", frozen)]
struct PySignal {
    inner: Signal,
}

#[pymethods]
impl PySignal {
    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn value(&self, t: f64) -> f64 {
        self.inner.value(t)
    }

    fn values(&self, times: Vec<f64>) -> Vec<f64> {
        times.iter().map(|&t| self.inner.value(t)).collect()
    }

    /// Samples on the 100001-point grid of [0, 10].
    fn dense_samples(&self) -> Vec<f64> {
        self.inner.dense_samples().to_vec()
    }

    fn jet_at_zero(&self, order: usize) -> PyResult<Vec<f64>> {
        self.inner.jet_at_zero(order).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Signal({:?})", self.inner.name())
    }
}

#[pyfunction]
#[pyo3(signature = (name, s = None, h = None, lambda_ = None, sigma = None))]
fn make_signal(name: &str, s: Option<f64>, h: Option<f64>, lambda_: Option<f64>, sigma: Option<f64>) -> PyResult<PySignal> {
    let params = SignalParams { s, h, lambda: lambda_, sigma, ..Default::default() };
    Ok(PySignal { inner: make(SignalName::parse(name).map_err(err)?, &params).map_err(err)? })
}

/// gamma_n(t) from the closed form (integer alpha, beta = 1).
#[pyfunction]
fn gamma_value(alpha: i64, n: f64, t: f64) -> PyResult<f64> {
    Ok(gamma_at(BasisIndex::new(alpha, n).map_err(err)?, t))
}

#[pyfunction]
fn y_value(alpha: u32, j: u32, t: f64) -> PyResult<f64> {
    Ok(y_function(alpha, j).map_err(err)?.value(t))
}

/// `2 pi <dual gamma_m, gamma_n>`.
#[pyfunction]
fn biorthogonality(alpha: i64, m: f64, n: f64) -> PyResult<f64> {
    Ok(biortho(BasisIndex::new(alpha, m).map_err(err)?, BasisIndex::new(alpha, n).map_err(err)?))
}

/// Warping expansion of a signal.
#[pyclass(name = "Expansion", frozen)]
struct PyExpansion {
    inner: Expansion,
}

#[pymethods]
impl PyExpansion {
    #[getter]
    fn jet(&self) -> Vec<f64> {
        self.inner.jet.clone()
    }

    /// `(n, a_n)` pairs in increasing n.
    #[getter]
    fn coeffs(&self) -> Vec<(f64, f64)> {
        self.inner.iter().collect()
    }

    #[getter]
    fn terms(&self) -> usize {
        self.inner.terms()
    }

    #[pyo3(signature = (count, order = "symmetric"))]
    fn truncated(&self, count: usize, order: &str) -> PyResult<PyExpansion> {
        Ok(PyExpansion { inner: self.inner.truncated(count, self::order(order)?) })
    }

    /// Partial sum at `times` (integer alpha, beta = 1).
    fn reconstruct(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        transform::reconstruct(&self.inner, &times).map_err(err)
    }
}

/// Coefficients up to |n| <= n_max; closed path for integer alpha and beta = 1.
#[pyfunction]
#[pyo3(signature = (signal, n_max, alpha = 1.0, beta = 1.0))]
fn decompose(signal: &PySignal, n_max: f64, alpha: f64, beta: f64) -> PyResult<PyExpansion> {
    let inner = if beta == 1.0 && alpha.fract() == 0.0 && alpha >= 0.0 {
        analyze_closed_formula(&signal.inner, alpha as u32, n_max).map_err(err)?
    } else {
        let p = WarpProfile::new(alpha, beta).map_err(err)?;
        let grid = signal.inner.spectrum_grid(2048.0, (1 << 17) + 1).map_err(err)?;
        analyze_fourier(&grid, &p, n_max).map_err(err)?
    };
    Ok(PyExpansion { inner })
}

/// Warping against WKS for each N; returns CSV text.
#[pyfunction]
#[pyo3(signature = (signal, ns, alpha = 1.0, beta = 1.0, convention = "pi-n", order = "symmetric"))]
fn compare(py: Python<'_>, signal: &PySignal, ns: Vec<usize>, alpha: f64, beta: f64, convention: &str, order: &str) -> PyResult<String> {
    let convention: CutoffConvention = convention.parse().map_err(err)?;
    let opts = SweepOpts { alpha, beta, convention, order: self::order(order)?, wks_mode: WksMode::Auto };
    let sig = signal.inner.clone();
    let (w, s) = py.detach(|| bench::run_sweep(&sig, &ns, opts)).map_err(err)?;
    Ok(bench::to_csv(&[&w, &s]))
}

#[pyfunction]
#[pyo3(signature = (x, xt, h, metric = "l2"))]
fn rel_error(x: Vec<f64>, xt: Vec<f64>, h: f64, metric: &str) -> PyResult<f64> {
    bench::rel_error(&x, &xt, h, self::metric(metric)?).map_err(err)
}

#[pyfunction]
fn kappa(alpha: f64, beta: f64, m: f64, mu: f64) -> PyResult<f64> {
    bench::kappa(alpha, beta, m, mu).map_err(err)
}

/// `(ratio, all hypotheses hold)`.
#[pyfunction]
#[pyo3(signature = (n, alpha, beta, m, mu, metric = "l2"))]
fn worst_case_ratio(n: f64, alpha: f64, beta: f64, m: f64, mu: f64, metric: &str) -> PyResult<(f64, bool)> {
    let (r, h) = bench::worst_case_ratio(n, alpha, beta, m, mu, self::metric(metric)?).map_err(err)?;
    Ok((r, h.all()))
}

#[pymodule]
fn warpsample_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWarpProfile>()?;
    m.add_class::<PySignal>()?;
    m.add_class::<PyExpansion>()?;
    m.add_function(wrap_pyfunction!(make_signal, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_value, m)?)?;
    m.add_function(wrap_pyfunction!(y_value, m)?)?;
    m.add_function(wrap_pyfunction!(biorthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(rel_error, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(worst_case_ratio, m)?)?;
    Ok(())
}
