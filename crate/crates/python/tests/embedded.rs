use std::ffi::CString;

use projconn_py::projconn_module;
use pyo3::prelude::*;
use pyo3::types::PyModule;

const SMOKE: &str = include_str!("../../../python/smoke_test.py");

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyModule>) -> PyResult<R>) -> R {
    Python::attach(|py| {
        let m = PyModule::new(py, "projconn")?;
        projconn_module(&m)?;
        py.import("sys")?
            .getattr("modules")?
            .set_item("projconn", &m)?;
        f(py, &m)
    })
    .unwrap_or_else(|e: PyErr| panic!("python error: {e}"))
}

#[test]
fn smoke_script_runs_against_the_module() {
    with_module(|py, _| {
        let code = CString::new(SMOKE.to_string() + "\nmain()\n").unwrap();
        py.run(&code, None, None)
    });
}

#[test]
fn errors_carry_the_library_kind() {
    with_module(|py, m| {
        let jet = m.getattr("Jet")?.call1((0.0, vec![0.0, 0.0, 1.0, 1.0]))?;
        let e = m.getattr("schwarzian")?.call1((jet,)).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let kind: String = e.value(py).getattr("args")?.get_item(0)?.extract()?;
        assert_eq!(kind, "CriticalPoint");
        Ok(())
    });
}
