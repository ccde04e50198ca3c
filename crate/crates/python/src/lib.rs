//! Python bindings. Complex numbers cross the boundary as Python `complex`,
//! the point at infinity as `None`, and every library error as
//! `ProjconnError(kind, detail)`.

use num_complex::Complex64;
use projconn::bidifferential as bd;
use projconn::moebius::ExtendedComplex;
use projconn::schwarzian as sz;
use projconn::surfaces as sf;
use projconn::torsor as ts;
use projconn::{
    BidiffGerm, IsotropyElement, Jet, MoebiusMap, QuadDiffGerm, Surface, TorsorElement,
    TorusModulus,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    projconn,
    ProjconnError,
    PyValueError,
    "A domain error raised by the projconn library."
);

fn err(e: projconn::Error) -> PyErr {
    ProjconnError::new_err((e.kind(), e.to_string()))
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for projconn::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_ext(z: Option<Complex64>) -> ExtendedComplex {
    z.map_or(ExtendedComplex::INFINITY, ExtendedComplex::Finite)
}

/// A truncated power series around a basepoint.
#[pyclass(name = "Jet", module = "projconn", frozen)]
pub struct PyJet(pub Jet);

#[pymethods]
impl PyJet {
    #[new]
    fn new(basepoint: Complex64, coeffs: Vec<Complex64>) -> PyResult<Self> {
        if coeffs.is_empty() {
            return Err(PyValueError::new_err(
                "a jet needs at least one coefficient",
            ));
        }
        Ok(PyJet(Jet::new(basepoint, coeffs)))
    }

    #[staticmethod]
    fn identity(basepoint: Complex64, order: usize) -> Self {
        PyJet(Jet::identity(basepoint, order))
    }

    #[staticmethod]
    fn local_coordinate(basepoint: Complex64, order: usize) -> Self {
        PyJet(Jet::local_coordinate(basepoint, order))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyJet).map_err(json_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("jets serialize")
    }

    #[getter]
    fn basepoint(&self) -> Complex64 {
        self.0.basepoint()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn value(&self) -> Complex64 {
        self.0.value()
    }

    fn coeff(&self, k: usize) -> Complex64 {
        self.0.coeff(k)
    }

    fn truncate(&self, order: usize) -> Self {
        PyJet(self.0.truncate(order))
    }

    fn derivative(&self) -> PyResult<Self> {
        self.0.derivative().map(PyJet).or_raise()
    }

    fn compose(&self, inner: PyRef<'_, PyJet>) -> PyResult<Self> {
        self.0.compose(&inner.0).map(PyJet).or_raise()
    }

    fn comp_inverse(&self) -> PyResult<Self> {
        self.0.comp_inverse().map(PyJet).or_raise()
    }

    fn recip(&self) -> PyResult<Self> {
        self.0.recip().map(PyJet).or_raise()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.eval(z)
    }

    fn max_abs_diff(&self, other: PyRef<'_, PyJet>) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    fn __add__(&self, other: PyRef<'_, PyJet>) -> PyResult<Self> {
        self.0.add(&other.0).map(PyJet).or_raise()
    }

    fn __sub__(&self, other: PyRef<'_, PyJet>) -> PyResult<Self> {
        self.0.sub(&other.0).map(PyJet).or_raise()
    }

    fn __mul__(&self, other: PyRef<'_, PyJet>) -> PyResult<Self> {
        self.0.mul(&other.0).map(PyJet).or_raise()
    }

    fn __truediv__(&self, other: PyRef<'_, PyJet>) -> PyResult<Self> {
        self.0.div(&other.0).map(PyJet).or_raise()
    }

    fn __neg__(&self) -> Self {
        PyJet(self.0.neg())
    }

    fn __eq__(&self, other: PyRef<'_, PyJet>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Jet({})", self.to_json())
    }
}

/// An element of PSL(2, C), stored with `ad - bc = 1`.
#[pyclass(name = "MoebiusMap", module = "projconn", frozen)]
pub struct PyMoebius(pub MoebiusMap);

#[pymethods]
impl PyMoebius {
    #[new]
    fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> PyResult<Self> {
        MoebiusMap::new(a, b, c, d).map(PyMoebius).or_raise()
    }

    #[staticmethod]
    fn identity() -> Self {
        PyMoebius(MoebiusMap::identity())
    }

    /// Best Möbius map through the value and first two derivatives of `jet`,
    /// returned with the residual on the remaining coefficients.
    #[staticmethod]
    fn fit_jet(jet: PyRef<'_, PyJet>) -> PyResult<(Self, f64)> {
        let (m, residual) = MoebiusMap::fit_jet(&jet.0).or_raise()?;
        Ok((PyMoebius(m), residual))
    }

    #[getter]
    fn coefficients(&self) -> [Complex64; 4] {
        self.0.coefficients()
    }

    fn compose(&self, other: PyRef<'_, PyMoebius>) -> Self {
        PyMoebius(self.0.compose(&other.0))
    }

    fn inverse(&self) -> Self {
        PyMoebius(self.0.inverse())
    }

    fn apply(&self, z: Option<Complex64>) -> Option<Complex64> {
        self.0.apply(to_ext(z)).finite()
    }

    fn to_jet(&self, basepoint: Complex64, order: usize) -> PyResult<PyJet> {
        self.0.to_jet(basepoint, order).map(PyJet).or_raise()
    }

    fn distance(&self, other: PyRef<'_, PyMoebius>) -> f64 {
        self.0.distance(&other.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "MoebiusMap({})",
            serde_json::to_string(&self.0).expect("maps serialize")
        )
    }
}

/// A Möbius map fixing 0: `z ↦ αz / (γz + δ)` with `αδ = 1`.
#[pyclass(name = "IsotropyElement", module = "projconn", frozen)]
pub struct PyIsotropy(pub IsotropyElement);

#[pymethods]
impl PyIsotropy {
    #[new]
    fn new(alpha: Complex64, gamma: Complex64, delta: Complex64) -> PyResult<Self> {
        IsotropyElement::new(alpha, gamma, delta)
            .map(PyIsotropy)
            .or_raise()
    }

    #[staticmethod]
    fn fit(two_jet: PyRef<'_, PyJet>) -> PyResult<Self> {
        IsotropyElement::fit(&two_jet.0).map(PyIsotropy).or_raise()
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.0.alpha
    }

    #[getter]
    fn gamma(&self) -> Complex64 {
        self.0.gamma
    }

    #[getter]
    fn delta(&self) -> Complex64 {
        self.0.delta
    }

    fn inverse(&self) -> Self {
        PyIsotropy(self.0.inverse())
    }

    fn to_map(&self) -> PyMoebius {
        PyMoebius(self.0.to_map())
    }

    fn to_jet(&self, order: usize) -> PyJet {
        PyJet(self.0.to_jet(order))
    }

    fn act(&self, f: PyRef<'_, PyJet>) -> PyResult<PyJet> {
        self.0.act(&f.0).map(PyJet).or_raise()
    }
}

/// A germ `1/(z-w)^2 + Σ W[j][k] (z-u₀)^j (w-u₀)^k` at the diagonal.
#[pyclass(name = "BidiffGerm", module = "projconn", frozen)]
pub struct PyBidiff(pub BidiffGerm);

#[pymethods]
impl PyBidiff {
    #[new]
    fn new(basepoint: Complex64, w: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let n = w.len();
        if n == 0 || w.iter().any(|row| row.len() != n) {
            return Err(PyValueError::new_err("W must be a non-empty square array"));
        }
        Ok(PyBidiff(BidiffGerm::new(basepoint, w)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyBidiff).map_err(json_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("germs serialize")
    }

    #[getter]
    fn basepoint(&self) -> Complex64 {
        self.0.basepoint()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter(W)]
    fn w(&self) -> Vec<Vec<Complex64>> {
        self.0.w().to_vec()
    }

    fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.0.entry(j, k)
    }

    fn symmetry_defect(&self) -> f64 {
        self.0.symmetry_defect()
    }

    fn __repr__(&self) -> String {
        format!("BidiffGerm({})", self.to_json())
    }
}

/// An invertible 3-jet modulo the isotropy group of 0.
#[pyclass(name = "TorsorElement", module = "projconn", frozen)]
pub struct PyTorsor(pub TorsorElement);

#[pymethods]
impl PyTorsor {
    #[getter]
    fn representative(&self) -> PyJet {
        PyJet(self.0.representative.clone())
    }

    #[getter]
    fn canonical_c(&self) -> Complex64 {
        self.0.canonical_c
    }

    fn normal_form(&self) -> PyJet {
        PyJet(self.0.normal_form())
    }

    fn __repr__(&self) -> String {
        format!(
            "TorsorElement({})",
            serde_json::to_string(&self.0).expect("torsor elements serialize")
        )
    }
}

/// A torus `C / (Z + τZ)` with its series truncation controls.
#[pyclass(name = "TorusModulus", module = "projconn", frozen)]
pub struct PyModulus(pub TorusModulus);

#[pymethods]
impl PyModulus {
    #[new]
    #[pyo3(signature = (tau, theta_terms = sf::DEFAULT_THETA_TERMS, lattice_bound = sf::DEFAULT_LATTICE_BOUND))]
    fn new(tau: Complex64, theta_terms: usize, lattice_bound: usize) -> PyResult<Self> {
        TorusModulus::with_bounds(tau, theta_terms, lattice_bound)
            .map(PyModulus)
            .or_raise()
    }

    #[getter]
    fn tau(&self) -> Complex64 {
        self.0.tau()
    }

    #[getter]
    fn theta_terms(&self) -> usize {
        self.0.theta_terms()
    }

    #[getter]
    fn lattice_bound(&self) -> usize {
        self.0.lattice_bound()
    }

    fn __repr__(&self) -> String {
        format!("TorusModulus(tau={})", self.0.tau())
    }
}

#[pyfunction]
fn schwarzian(f: PyRef<'_, PyJet>) -> PyResult<PyJet> {
    sz::schwarzian(&f.0).map(PyJet).or_raise()
}

#[pyfunction]
fn cocycle_defect(f: PyRef<'_, PyJet>, g: PyRef<'_, PyJet>) -> PyResult<PyJet> {
    sz::cocycle_defect(&f.0, &g.0).map(PyJet).or_raise()
}

/// Solves `S(w) = h` to `order` with `w = z + a2 z² + …`.
#[pyfunction]
#[pyo3(signature = (h, order, a2 = Complex64::new(0.0, 0.0)))]
fn solve(h: PyRef<'_, PyJet>, order: usize, a2: Complex64) -> PyResult<PyJet> {
    sz::solve_with_gauge(&QuadDiffGerm::new(h.0.clone()), order, a2)
        .map(PyJet)
        .or_raise()
}

#[pyfunction]
#[pyo3(signature = (w1, w2, tol = sz::IDENTITY_TOL))]
fn solution_ambiguity(
    w1: PyRef<'_, PyJet>,
    w2: PyRef<'_, PyJet>,
    tol: f64,
) -> PyResult<(PyMoebius, f64)> {
    let fit = sz::solution_ambiguity(&w1.0, &w2.0, tol).or_raise()?;
    Ok((PyMoebius(fit.map), fit.residual))
}

#[pyfunction]
#[pyo3(signature = (u0, order = bd::DEFAULT_BIDIFF_ORDER))]
fn flat(u0: Complex64, order: usize) -> PyBidiff {
    PyBidiff(bd::flat(u0, order))
}

#[pyfunction]
fn pullback(b: PyRef<'_, PyBidiff>, f: PyRef<'_, PyJet>) -> PyResult<PyBidiff> {
    bd::pullback(&b.0, &f.0).map(PyBidiff).or_raise()
}

/// The normal-form report as a dict with keys `pass`, `symmetry_defect`,
/// `normal_defect` and `max_defect`.
#[pyfunction]
fn canonical_2delta_check<'py>(
    py: Python<'py>,
    b: PyRef<'_, PyBidiff>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = bd::canonical_2delta_check(&b.0);
    let d = PyDict::new(py);
    d.set_item("pass", r.pass)?;
    d.set_item("symmetry_defect", r.symmetry_defect)?;
    d.set_item("normal_defect", r.normal_defect)?;
    d.set_item("max_defect", r.max_defect)?;
    Ok(d)
}

#[pyfunction]
fn proj_connection(b: PyRef<'_, PyBidiff>) -> PyResult<PyJet> {
    bd::proj_connection(&b.0).map(|p| PyJet(p.p)).or_raise()
}

#[pyfunction]
fn shift_trivialisation(b: PyRef<'_, PyBidiff>, h: PyRef<'_, PyJet>) -> PyResult<PyBidiff> {
    bd::shift_trivialisation(&b.0, &QuadDiffGerm::new(h.0.clone()))
        .map(PyBidiff)
        .or_raise()
}

#[pyfunction]
fn canonical_form(f: PyRef<'_, PyJet>) -> PyResult<PyTorsor> {
    ts::canonical_form(&f.0).map(PyTorsor).or_raise()
}

#[pyfunction]
fn act_quadratic(t: PyRef<'_, PyTorsor>, v: Complex64) -> PyResult<PyTorsor> {
    ts::act_quadratic(&t.0, v).map(PyTorsor).or_raise()
}

#[pyfunction]
fn to_projective_structure_scalar(t: PyRef<'_, PyTorsor>) -> Complex64 {
    ts::to_projective_structure_scalar(&t.0)
}

#[pyfunction]
fn coordinate_change_defect(w: PyRef<'_, PyJet>, z_chart: PyRef<'_, PyJet>) -> PyResult<Complex64> {
    ts::coordinate_change_defect(&w.0, &z_chart.0).or_raise()
}

#[pyfunction]
fn theta1(z: Complex64, m: PyRef<'_, PyModulus>) -> Complex64 {
    sf::theta1(z, &m.0)
}

#[pyfunction]
fn weierstrass_p(z: Complex64, m: PyRef<'_, PyModulus>) -> PyResult<Complex64> {
    sf::weierstrass_p(z, &m.0).or_raise()
}

#[pyfunction]
fn weierstrass_p_theta(z: Complex64, m: PyRef<'_, PyModulus>) -> PyResult<Complex64> {
    sf::weierstrass_p_theta(z, &m.0).or_raise()
}

#[pyfunction]
fn weierstrass_p_prime(z: Complex64, m: PyRef<'_, PyModulus>) -> PyResult<Complex64> {
    sf::weierstrass_p_prime(z, &m.0).or_raise()
}

/// `(g2, g3)` of the lattice `Z + τZ`.
#[pyfunction]
fn eisenstein_invariants(m: PyRef<'_, PyModulus>) -> (Complex64, Complex64) {
    sf::eisenstein_invariants(&m.0)
}

#[pyfunction]
fn prime_form_g1(x: Complex64, y: Complex64, m: PyRef<'_, PyModulus>) -> Complex64 {
    sf::prime_form_g1(x, y, &m.0)
}

#[pyfunction]
fn omega_b_g1(x: Complex64, y: Complex64, m: PyRef<'_, PyModulus>) -> PyResult<Complex64> {
    sf::omega_b_g1(x, y, &m.0).or_raise()
}

#[pyfunction]
fn torus_proj_connection(m: PyRef<'_, PyModulus>) -> Complex64 {
    sf::torus_proj_connection(&m.0)
}

#[pyfunction]
#[pyo3(signature = (m, u0, order = bd::DEFAULT_BIDIFF_ORDER))]
fn omega_b_germ(m: PyRef<'_, PyModulus>, u0: Complex64, order: usize) -> PyResult<PyBidiff> {
    sf::omega_b_germ(&m.0, u0, order).map(PyBidiff).or_raise()
}

/// Cross ratio on the sphere; `None` stands for the point at infinity.
#[pyfunction]
fn cross_ratio_g0(
    z1: Option<Complex64>,
    z2: Option<Complex64>,
    z3: Option<Complex64>,
    z4: Option<Complex64>,
) -> PyResult<Complex64> {
    sf::cross_ratio_g0([z1, z2, z3, z4].map(to_ext)).or_raise()
}

#[pyfunction]
fn cross_ratio_g1(
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
    z4: Complex64,
    m: PyRef<'_, PyModulus>,
) -> PyResult<Complex64> {
    sf::cross_ratio_g1([z1, z2, z3, z4], &m.0).or_raise()
}

/// Coalescing limit of the cross ratio, on the torus `m` or on the sphere
/// when `m` is `None`.
#[pyfunction]
#[pyo3(signature = (z1, z2, m = None))]
fn coalesce(z1: Complex64, z2: Complex64, m: Option<PyRef<'_, PyModulus>>) -> PyResult<Complex64> {
    let surface = m.map_or(Surface::Sphere, |m| Surface::Torus(m.0));
    surface.coalesce(z1, z2).or_raise()
}

#[pymodule(name = "projconn")]
pub fn projconn_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ProjconnError", m.py().get_type::<ProjconnError>())?;
    m.add_class::<PyJet>()?;
    m.add_class::<PyMoebius>()?;
    m.add_class::<PyIsotropy>()?;
    m.add_class::<PyBidiff>()?;
    m.add_class::<PyTorsor>()?;
    m.add_class::<PyModulus>()?;
    m.add_function(wrap_pyfunction!(schwarzian, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle_defect, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solution_ambiguity, m)?)?;
    m.add_function(wrap_pyfunction!(flat, m)?)?;
    m.add_function(wrap_pyfunction!(pullback, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_2delta_check, m)?)?;
    m.add_function(wrap_pyfunction!(proj_connection, m)?)?;
    m.add_function(wrap_pyfunction!(shift_trivialisation, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(act_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(to_projective_structure_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(coordinate_change_defect, m)?)?;
    m.add_function(wrap_pyfunction!(theta1, m)?)?;
    m.add_function(wrap_pyfunction!(weierstrass_p, m)?)?;
    m.add_function(wrap_pyfunction!(weierstrass_p_theta, m)?)?;
    m.add_function(wrap_pyfunction!(weierstrass_p_prime, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(prime_form_g1, m)?)?;
    m.add_function(wrap_pyfunction!(omega_b_g1, m)?)?;
    m.add_function(wrap_pyfunction!(torus_proj_connection, m)?)?;
    m.add_function(wrap_pyfunction!(omega_b_germ, m)?)?;
    m.add_function(wrap_pyfunction!(cross_ratio_g0, m)?)?;
    m.add_function(wrap_pyfunction!(cross_ratio_g1, m)?)?;
    m.add_function(wrap_pyfunction!(coalesce, m)?)?;
    Ok(())
}
