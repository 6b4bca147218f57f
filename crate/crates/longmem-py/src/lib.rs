use pyo3::prelude::*;

#[pymodule]
fn longmem_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
