//! Python bindings: `import flatlex`.
//!
//! Symbols are Unicode code points, so Python strings map directly onto
//! input words. Alphabets are given as `"ascii"`, `"unicode"` or a
//! `(min, max)` pair of code points.

use flatlex::prelude::*;
use flatlex::render::{self, Template};
use flatlex::tokenspec::parse_regex;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(flatlex, FlatlexError, PyException);

fn err(e: flatlex::Error) -> PyErr {
    FlatlexError::new_err(e.to_string())
}

fn alphabet(spec: &Bound<'_, PyAny>) -> PyResult<Alphabet> {
    if let Ok(name) = spec.extract::<String>() {
        return match name.as_str() {
            "ascii" => Ok(Alphabet::ascii()),
            "unicode" => Ok(Alphabet::unicode()),
            other => Err(PyValueError::new_err(format!("unknown alphabet `{other}`"))),
        };
    }
    let (min, max): (u32, u32) = spec.extract()?;
    Alphabet::new(min, max).map_err(err)
}

fn class(name: &str) -> PyResult<TokenClass> {
    TokenClass::new(name).map_err(err)
}

#[pyclass(name = "Acceptor", module = "flatlex", frozen)]
struct PyAcceptor(Acceptor);

#[pymethods]
impl PyAcceptor {
    /// Acceptor for the language of a regular expression in token-rule syntax.
    #[staticmethod]
    #[pyo3(signature = (pattern, alphabet = None))]
    fn regex(pattern: &str, alphabet: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = alphabet.map(self::alphabet).transpose()?.unwrap_or_else(Alphabet::ascii);
        let re = parse_regex(pattern, a).map_err(err)?;
        Ok(PyAcceptor(re.to_acceptor(a).map_err(err)?))
    }

    #[staticmethod]
    #[pyo3(signature = (text, alphabet = None))]
    fn literal(text: &str, alphabet: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = alphabet.map(self::alphabet).transpose()?.unwrap_or_else(Alphabet::ascii);
        Ok(PyAcceptor(Acceptor::literal(a, &word(text)).map_err(err)?))
    }

    fn concat(&self, other: &PyAcceptor) -> PyResult<Self> {
        Ok(PyAcceptor(self.0.concat(&other.0).map_err(err)?))
    }

    fn union(&self, other: &PyAcceptor) -> PyResult<Self> {
        Ok(PyAcceptor(self.0.union(&other.0).map_err(err)?))
    }

    fn star(&self) -> Self {
        PyAcceptor(self.0.star())
    }

    fn plus(&self) -> Self {
        PyAcceptor(self.0.plus())
    }

    fn optional(&self) -> Self {
        PyAcceptor(self.0.optional())
    }

    fn accepts(&self, text: &str) -> bool {
        self.0.accepts(&word(text))
    }

    fn render(&self) -> String {
        render::print_acceptor(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &PyAcceptor) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("<flatlex.Acceptor with {} states>", self.0.len())
    }
}

#[pyclass(name = "Classifier", module = "flatlex", frozen)]
struct PyClassifier(Classifier);

#[pymethods]
impl PyClassifier {
    /// The one-state classifier that assigns every input to `error`.
    #[staticmethod]
    #[pyo3(signature = (error, alphabet = None))]
    fn error(error: &str, alphabet: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = alphabet.map(self::alphabet).transpose()?.unwrap_or_else(Alphabet::ascii);
        Ok(PyClassifier(Classifier::error_classifier(a, class(error)?)))
    }

    #[staticmethod]
    fn loads(text: &str) -> PyResult<Self> {
        Ok(PyClassifier(render::read_classifier(text).map_err(err)?))
    }

    fn add_token(&self, name: &str, acceptor: &PyAcceptor) -> PyResult<Self> {
        Ok(PyClassifier(self.0.add_token(&class(name)?, &acceptor.0).map_err(err)?))
    }

    fn determinize(&self) -> PyResult<Self> {
        Ok(PyClassifier(determinize(&self.0).map_err(err)?))
    }

    #[pyo3(signature = (init = "by_reachability"))]
    fn minimize(&self, init: &str) -> PyResult<Self> {
        let strategy: InitStrategy = init.parse().map_err(PyValueError::new_err)?;
        Ok(PyClassifier(minimize(&self.0, strategy).map_err(err)?))
    }

    /// Longest classified prefix of `text` as `(class, length)`.
    fn classify(&self, text: &str) -> PyResult<(String, usize)> {
        let w = word(text);
        let r = if self.0.is_deterministic() { self.0.classify_dfa(&w) } else { self.0.classify_nfa(&w) };
        let r = r.map_err(err)?;
        Ok((r.class.to_string(), r.len))
    }

    /// Splits `text` into `(class, start, lexeme)` triples; offsets count
    /// code points. Requires a deterministic classifier.
    fn tokenize(&self, text: &str) -> PyResult<Vec<(String, usize, String)>> {
        let dfa = Dfa::new(&self.0).map_err(err)?;
        let chars: Vec<char> = text.chars().collect();
        let symbols = word(text);
        Ok(dfa
            .tokenize(&symbols)
            .into_iter()
            .map(|t| (t.class.to_string(), t.start, chars[t.start..t.start + t.len].iter().collect()))
            .collect())
    }

    fn render(&self) -> String {
        render::print_classifier(&self.0)
    }

    fn dumps(&self) -> String {
        render::write_classifier(&self.0)
    }

    #[pyo3(signature = (template = "rust"))]
    fn emit(&self, template: &str) -> PyResult<String> {
        let t: Template = template.parse().map_err(err)?;
        render::emit_scanner(&self.0, t).map_err(err)
    }

    #[getter]
    fn error_class(&self) -> String {
        self.0.error_class().to_string()
    }

    #[getter]
    fn is_deterministic(&self) -> bool {
        self.0.is_deterministic()
    }

    #[getter]
    fn well_formed(&self) -> bool {
        self.0.well_formed()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &PyClassifier) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("<flatlex.Classifier with {} states, error class {}>", self.0.len(), self.0.error_class())
    }
}

/// Compiles token-spec source text into a (nondeterministic) classifier.
#[pyfunction]
fn compile_spec(text: &str) -> PyResult<PyClassifier> {
    let spec = TokenSpec::parse(text).map_err(err)?;
    Ok(PyClassifier(spec.build_classifier().map_err(err)?))
}

/// Spec compiled, determinized and minimized in one step.
#[pyfunction]
#[pyo3(signature = (text, init = "by_reachability"))]
fn build(text: &str, init: &str) -> PyResult<PyClassifier> {
    compile_spec(text)?.determinize()?.minimize(init)
}

#[pymodule]
#[pyo3(name = "flatlex")]
fn flatlex_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAcceptor>()?;
    m.add_class::<PyClassifier>()?;
    m.add_function(wrap_pyfunction!(compile_spec, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add("FlatlexError", m.py().get_type::<FlatlexError>())?;
    Ok(())
}
