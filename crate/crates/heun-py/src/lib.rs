use pyo3::prelude::*;

#[pymodule]
fn heun_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
