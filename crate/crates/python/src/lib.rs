//! Python bindings: `import twisted_qp`.
//!
//! Rationals cross the boundary as `fractions.Fraction` on the way out and
//! as `int`, `Fraction` or `"p/q"` strings on the way in.

use num_bigint::BigInt;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

use twisted_qp::characters::{para_conformal_energy, CharacterObject, CharacterRequest, Method};
use twisted_qp::fixtures::{paper_example as fixture, PaperExample};
use twisted_qp::json::{self, SeriesMeta};
use twisted_qp::quasiparticle::{enumerate_basis as enumerate, BasisKind, ChargeCap, QPMonomial};
use twisted_qp::rational::{format_rational, parse_rational, Q};
use twisted_qp::verification::{Check, CheckStatus};
use twisted_qp::{Error, GradedSeries, RectangularWeight, RootSeries, TwistedRootDatum};

type PyTerm<'py> = (Bound<'py, PyAny>, Bound<'py, PyTuple>, BigInt);
type PyWitness<'py> = (Bound<'py, PyAny>, Bound<'py, PyTuple>, BigInt, BigInt);

fn err(e: Error) -> PyErr {
    match e {
        Error::UnknownExample(_) => PyKeyError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, x: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*x.numer(), *x.denom()))
}

fn fractions<'py>(py: Python<'py>, v: &[Q]) -> PyResult<Bound<'py, PyTuple>> {
    let items = v.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyTuple::new(py, items)
}

/// Accepts `int`, `Fraction` or a `"p/q"` string.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Q> {
    let text: String = obj.str()?.extract()?;
    parse_rational(text.trim()).map_err(err)
}

fn build(series: &str, rank: usize) -> PyResult<TwistedRootDatum> {
    let s: RootSeries = series.parse().map_err(err)?;
    TwistedRootDatum::build(s, rank).map_err(err)
}

/// Folded root datum of `A_{2l-1}^(2)` (series "A") or `D_{l+1}^(2)` ("D").
#[pyclass(name = "RootDatum", frozen)]
struct PyRootDatum {
    inner: TwistedRootDatum,
}

#[pymethods]
impl PyRootDatum {
    #[new]
    fn new(series: &str, rank: usize) -> PyResult<Self> {
        Ok(Self { inner: build(series, rank)? })
    }

    #[getter]
    fn series(&self) -> String {
        self.inner.series.to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.l
    }

    /// 1-based special node.
    #[getter]
    fn j_node(&self) -> usize {
        self.inner.j_node()
    }

    #[getter]
    fn mu<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        fractions(py, &self.inner.mu)
    }

    #[getter]
    fn gram0<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self.inner.gram0.iter().map(|r| fractions(py, r)).collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    /// `[(a, halfnorm), ...]`, one entry per orbit of positive roots.
    fn orbit_projections<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<i64>, Bound<'py, PyAny>)>> {
        self.inner.orbit_projections().iter().map(|o| Ok((o.a.clone(), fraction(py, &o.halfnorm)?))).collect()
    }

    /// Integer points `v` with `(level/2) v^T G v + v . linear <= qmax`.
    fn lattice_ball(&self, level: u32, linear: Vec<Bound<'_, PyAny>>, qmax: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<i64>>> {
        let linear = linear.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        if linear.len() != self.inner.l {
            return Err(PyValueError::new_err(format!("linear term needs {} entries", self.inner.l)));
        }
        Ok(self.inner.lattice_ball(level, &linear, rational(qmax)?))
    }

    fn to_json(&self) -> String {
        json::datum_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("RootDatum('{}', {})", self.inner.series, self.inner.l)
    }
}

/// Truncated series in `q` with color variables `y_i`.
#[pyclass(name = "Series", frozen)]
struct PySeries {
    inner: GradedSeries,
    meta: SeriesMeta,
}

#[pymethods]
impl PySeries {
    #[getter]
    fn qmax<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.qmax())
    }

    #[getter]
    fn denominator(&self) -> i64 {
        self.inner.denominator()
    }

    #[getter]
    fn ncolors(&self) -> usize {
        self.inner.ncolors()
    }

    /// `[(q, (y_1, ..., y_l), c), ...]` in term order.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<PyTerm<'py>>> {
        self.inner.iter().map(|(e, c)| Ok((fraction(py, &e.q)?, fractions(py, &e.y)?, c.clone()))).collect()
    }

    /// `{q: c}` with the colors summed out.
    fn q_coefficients<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (q, c) in self.inner.q_coefficients() {
            d.set_item(fraction(py, &q)?, c)?;
        }
        Ok(d)
    }

    fn coefficient(&self, q: &Bound<'_, PyAny>, y: Vec<Bound<'_, PyAny>>) -> PyResult<BigInt> {
        let y = y.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        Ok(self.inner.coefficient(rational(q)?, &y))
    }

    /// Compares with `other` up to `qbound`; returns `None` when equal,
    /// otherwise the first differing `(q, y, mine, theirs)`.
    fn first_difference<'py>(
        &self,
        py: Python<'py>,
        other: &PySeries,
        qbound: &Bound<'_, PyAny>,
    ) -> PyResult<Option<PyWitness<'py>>> {
        let cmp = self.inner.equal_to_order(&other.inner, rational(qbound)?).map_err(err)?;
        match cmp.witness {
            None => Ok(None),
            Some(w) => Ok(Some((fraction(py, &w.exponent.q)?, fractions(py, &w.exponent.y)?, w.left, w.right))),
        }
    }

    fn to_json(&self) -> String {
        json::series_to_json(&self.inner, self.meta.clone())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Series({}{} {} k0={} kj={}, qmax={}, {} terms)",
            self.meta.series,
            self.meta.rank,
            self.meta.object,
            self.meta.k0,
            self.meta.kj,
            self.meta.qmax,
            self.inner.len()
        )
    }
}

/// Evaluates a character: object is one of psp-std, psp-verma, product,
/// std, vacuum, para.
#[pyfunction]
#[pyo3(signature = (object, series, rank, qmax, k0=1, kj=0, method="formula", track_colors=false))]
#[allow(clippy::too_many_arguments)]
fn character(
    object: &str,
    series: &str,
    rank: usize,
    qmax: &Bound<'_, PyAny>,
    k0: u32,
    kj: u32,
    method: &str,
    track_colors: bool,
) -> PyResult<PySeries> {
    let object: CharacterObject = object.parse().map_err(err)?;
    let datum = build(series, rank)?;
    let weight = RectangularWeight::new(k0, kj).map_err(err)?;
    let qmax = rational(qmax)?;
    let mut req = CharacterRequest::new(datum, weight, object, qmax);
    req.method = method.parse::<Method>().map_err(err)?;
    req.track_colors = track_colors;
    let inner = py_allow(|| req.evaluate())?;
    let meta = SeriesMeta {
        series: req.datum.series.to_string(),
        rank,
        k0,
        kj,
        object: object.name().to_string(),
        qmax: format_rational(&qmax),
        denominator: inner.denominator(),
    };
    Ok(PySeries { inner, meta })
}

fn py_allow<T>(f: impl FnOnce() -> twisted_qp::Result<T>) -> PyResult<T> {
    f().map_err(err)
}

/// One of the hand-coded example series, e.g. "A5_L1" or "D3_para_L0L2".
#[pyfunction]
fn paper_example(name: &str, qmax: &Bound<'_, PyAny>) -> PyResult<PySeries> {
    let example: PaperExample = name.parse().map_err(err)?;
    let qmax = rational(qmax)?;
    let inner = fixture(example, qmax).map_err(err)?;
    let (s, rank, k0, kj) = example.parameters();
    let meta = SeriesMeta {
        series: s.to_string(),
        rank,
        k0,
        kj,
        object: example.name().to_string(),
        qmax: format_rational(&qmax),
        denominator: inner.denominator(),
    };
    Ok(PySeries { inner, meta })
}

fn monomial_dict<'py>(py: Python<'py>, m: &QPMonomial) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let l = m.ncolors();
    let particles = (0..l)
        .map(|i| m.color(i).iter().map(|p| Ok((p.charge, fraction(py, &p.mode)?))).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("particles", particles)?;
    d.set_item("charge_type", (0..l).map(|i| m.charge_type(i)).collect::<Vec<_>>())?;
    d.set_item("dual_charge_type", (0..l).map(|i| m.dual_charge_type(i)).collect::<Vec<_>>())?;
    d.set_item("color_type", m.color_type())?;
    d.set_item("total_energy", fraction(py, &m.total_energy())?)?;
    Ok(d)
}

/// Basis monomials with total energy at most `qmax`. `kind` is "standard" or
/// "verma"; `cap` an integer or None for no charge bound.
#[pyfunction]
#[pyo3(signature = (kind, series, rank, qmax, cap=None, k0=1, kj=0))]
#[allow(clippy::too_many_arguments)]
fn enumerate_basis<'py>(
    py: Python<'py>,
    kind: &str,
    series: &str,
    rank: usize,
    qmax: &Bound<'_, PyAny>,
    cap: Option<u32>,
    k0: u32,
    kj: u32,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let kind = match kind {
        "standard" => BasisKind::Standard,
        "verma" => BasisKind::Verma,
        other => return Err(PyValueError::new_err(format!("unknown basis kind `{other}`"))),
    };
    let datum = build(series, rank)?;
    let weight = RectangularWeight::new(k0, kj).map_err(err)?;
    let cap = cap.map_or(ChargeCap::Unbounded, ChargeCap::Finite);
    enumerate(&datum, &weight, kind, cap, rational(qmax)?).iter().map(|m| monomial_dict(py, m)).collect()
}

/// Conformal energy of a parafermionic basis monomial given as per-color
/// lists of `(charge, mode)` in canonical order.
#[pyfunction]
#[pyo3(signature = (series, rank, colors, k0=1, kj=0))]
fn conformal_energy<'py>(
    py: Python<'py>,
    series: &str,
    rank: usize,
    colors: Vec<Vec<(u32, Bound<'_, PyAny>)>>,
    k0: u32,
    kj: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let datum = build(series, rank)?;
    let weight = RectangularWeight::new(k0, kj).map_err(err)?;
    let colors = colors
        .iter()
        .map(|c| c.iter().map(|(n, m)| Ok((*n, rational(m)?))).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    let m = QPMonomial::new(colors).map_err(err)?;
    fraction(py, &para_conformal_energy(&datum, &weight, &m).map_err(err)?)
}

/// Runs one named check with explicit parameters and returns its report as a
/// dict. Names: corollary, corollary-all-roots, psp, verma, para,
/// para-examples, std-examples, level-one, minsum.
#[pyfunction]
#[pyo3(signature = (check, series="A", rank=2, qmax=None, k0=1, kj=0, seed=42, trials=500))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    check: &str,
    series: &str,
    rank: usize,
    qmax: Option<Bound<'_, PyAny>>,
    k0: u32,
    kj: u32,
    seed: u64,
    trials: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s: RootSeries = series.parse().map_err(err)?;
    let q = match &qmax {
        Some(obj) => rational(obj)?,
        None => Q::from_integer(3),
    };
    let weight = RectangularWeight::new(k0, kj).map_err(err)?;
    let c = match check {
        "corollary" => Check::Corollary { series: s, rank, qmax: q },
        "corollary-all-roots" => Check::CorollaryAllRoots { series: s, rank, qmax: q },
        "psp" => Check::Psp { series: s, rank, weight, qmax: q },
        "verma" => Check::Verma { series: s, rank, qmax: q },
        "para" => Check::Para { series: s, rank, weight, qmax: q },
        "para-examples" => Check::ParaExamples { qmax: q },
        "std-examples" => Check::StandardExamples { qmax: q },
        "level-one" => Check::LevelOne { qmax: q },
        "minsum" => Check::Minsum { seed, trials },
        other => return Err(PyValueError::new_err(format!("unknown check `{other}`"))),
    };
    let r = c.run().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("check", &r.check_name)?;
    d.set_item(
        "status",
        match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::InsufficientPrecision => "insufficient-precision",
        },
    )?;
    d.set_item("terms_compared", r.terms_compared)?;
    d.set_item("elapsed", r.elapsed.as_secs_f64())?;
    match r.witness {
        None => d.set_item("witness", py.None())?,
        Some(w) => d.set_item("witness", (fraction(py, &w.exponent.q)?, fractions(py, &w.exponent.y)?, w.left, w.right))?,
    }
    Ok(d)
}

#[pymodule]
#[pyo3(name = "twisted_qp")]
fn twisted_qp_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootDatum>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(paper_example, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_basis, m)?)?;
    m.add_function(wrap_pyfunction!(conformal_energy, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
