//! Python bindings: trees, grammars, CFGs, automata and the recognizer.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use regtag::automaton::compile_with;
use regtag::oracle::is_completed;
use regtag::spine::CycleWitness;
use regtag::text::{render_automaton, render_cfg};
use regtag::{
    build_spine_graph, cfg_to_regular_tag, check_regular_form, close_substitution, eliminate_improper,
    enumerate_accepted, enumerate_derived, enumerate_regular, extend_to_regular_form, language_up_to,
    parse_cfg_file, parse_grammar_file, parse_tree, render_grammar, to_dot, CompileOptions, DerivationBudget,
    ExpansionStrategy, TokenString,
};

create_exception!(regtag, RegtagError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    RegtagError::new_err(e.to_string())
}

/// An ordered labeled tree, written `(S a (S b S*))`.
#[pyclass(name = "Tree", frozen, eq, hash, ord, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PyTree(regtag::Tree);

#[pymethods]
impl PyTree {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_tree(text).map(PyTree).map_err(err)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label.name().to_string()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn is_auxiliary(&self) -> bool {
        self.0.has_foot()
    }

    /// Frontier terminals, left to right.
    fn tokens(&self) -> Vec<String> {
        self.0.yield_symbols().iter().filter(|s| s.is_terminal()).map(|s| s.name().to_string()).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Tree('{}')", self.0)
    }
}

fn trees(v: impl IntoIterator<Item = regtag::Tree>) -> Vec<PyTree> {
    regtag::tree::canonical_order(v).into_iter().map(PyTree).collect()
}

/// One simple cycle of the spine graph and its verdict.
#[pyclass(name = "Cycle", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCycle {
    edges: Vec<String>,
    vertices: Vec<String>,
    tree: PyTree,
    equivalent: Option<bool>,
    line: String,
}

impl From<&CycleWitness> for PyCycle {
    fn from(w: &CycleWitness) -> Self {
        PyCycle {
            edges: w.edges.iter().map(|&e| regtag::SpineGraph::edge_name(e)).collect(),
            vertices: w.vertex_sequence.iter().map(|v| v.name().to_string()).collect(),
            tree: PyTree(w.cycle_tree.clone()),
            equivalent: w.wfc_equivalent,
            line: w.report_line(),
        }
    }
}

#[pymethods]
impl PyCycle {
    fn __repr__(&self) -> String {
        self.line.clone()
    }
}

/// A tree adjoining grammar.
#[pyclass(name = "Grammar", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGrammar(regtag::TagGrammar);

#[pymethods]
impl PyGrammar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_grammar_file(text).map(PyGrammar).map_err(err)
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(err)?;
        Self::new(&text)
    }

    #[getter]
    fn start(&self) -> String {
        self.0.start.name().to_string()
    }

    #[getter]
    fn terminals(&self) -> Vec<String> {
        self.0.terminals.iter().map(|s| s.name().to_string()).collect()
    }

    #[getter]
    fn initial(&self) -> Vec<(String, PyTree)> {
        self.0.initial.iter().map(|n| (n.name.clone(), PyTree(n.tree.clone()))).collect()
    }

    #[getter]
    fn auxiliary(&self) -> Vec<(String, PyTree)> {
        self.0.auxiliary.iter().map(|n| (n.name.clone(), PyTree(n.tree.clone()))).collect()
    }

    fn is_regular(&self) -> PyResult<bool> {
        Ok(check_regular_form(&self.0).map_err(err)?.is_regular)
    }

    /// Simple cycles of the spine graph with their wfc verdicts.
    fn cycles(&self) -> PyResult<Vec<PyCycle>> {
        Ok(check_regular_form(&self.0).map_err(err)?.witnesses.iter().map(PyCycle::from).collect())
    }

    /// The extended grammar and the trees that were added.
    fn extend(&self) -> PyResult<(PyGrammar, Vec<PyTree>)> {
        let (g, added) = extend_to_regular_form(&self.0).map_err(err)?;
        Ok((PyGrammar(g), added.into_iter().map(PyTree).collect()))
    }

    fn eliminate_improper(&self) -> PyResult<PyGrammar> {
        Ok(PyGrammar(eliminate_improper(&self.0).map_err(err)?.0))
    }

    #[pyo3(signature = (max_nodes = 12, completed_only = false, regular_only = false, max_depth = None, max_steps = DerivationBudget::DEFAULT_MAX_STEPS))]
    fn enumerate(
        &self,
        max_nodes: usize,
        completed_only: bool,
        regular_only: bool,
        max_depth: Option<usize>,
        max_steps: usize,
    ) -> PyResult<Vec<PyTree>> {
        let b = DerivationBudget { max_nodes, max_steps, max_depth };
        let out = if regular_only {
            enumerate_regular(&self.0, b, completed_only)
        } else {
            enumerate_derived(&self.0, b, completed_only)
        }
        .map_err(err)?;
        if !out.complete {
            return Err(err(format!("step budget of {max_steps} exhausted")));
        }
        Ok(trees(out.trees))
    }

    fn is_completed(&self, t: &PyTree) -> bool {
        is_completed(&self.0, &t.0)
    }

    /// Every string of the language up to `max_len` tokens.
    fn language(&self, max_len: usize) -> PyResult<Vec<String>> {
        Ok(language_up_to(&self.0, max_len).map_err(err)?.iter().map(|w| w.to_string()).collect())
    }

    #[pyo3(signature = (state_cap = 100_000))]
    fn compile(&self, state_cap: usize) -> PyResult<PyAutomaton> {
        let opts = CompileOptions { state_cap, ..CompileOptions::default() };
        Ok(PyAutomaton(compile_with(&self.0, opts).map_err(err)?.0))
    }

    fn recognizer(&self) -> PyResult<PyRecognizer> {
        regtag::Recognizer::for_grammar(&self.0).map(PyRecognizer).map_err(err)
    }

    /// Whether the whitespace-separated token string is in the language.
    fn recognize(&self, text: &str) -> PyResult<bool> {
        regtag::recognize(&self.0, &TokenString::parse(text)).map_err(err)
    }

    fn spine_dot(&self) -> PyResult<String> {
        Ok(to_dot(&build_spine_graph(&self.0).map_err(err)?))
    }

    fn close_substitution(&self) -> PyResult<PyGrammar> {
        close_substitution(&self.0).map(PyGrammar).map_err(err)
    }

    fn __str__(&self) -> String {
        render_grammar(&self.0)
    }
}

/// A bottom-up tree automaton.
#[pyclass(name = "Automaton", frozen, skip_from_py_object)]
pub struct PyAutomaton(regtag::TreeAutomaton);

#[pymethods]
impl PyAutomaton {
    #[getter]
    fn num_states(&self) -> usize {
        self.0.num_states()
    }

    #[getter]
    fn num_transitions(&self) -> usize {
        self.0.num_transitions()
    }

    fn accepts(&self, t: &PyTree) -> PyResult<bool> {
        regtag::accepts(&self.0, &t.0).map_err(err)
    }

    fn enumerate(&self, max_nodes: usize) -> Vec<PyTree> {
        enumerate_accepted(&self.0, max_nodes).into_iter().map(PyTree).collect()
    }

    fn __str__(&self) -> String {
        render_automaton(&self.0)
    }
}

/// A prepared cubic-time recognizer.
#[pyclass(name = "Recognizer", frozen, skip_from_py_object)]
pub struct PyRecognizer(regtag::Recognizer);

#[pymethods]
impl PyRecognizer {
    fn recognize(&self, text: &str) -> PyResult<bool> {
        self.0.recognize(&TokenString::parse(text)).map_err(err)
    }

    /// Chart cells `(i, j, symbols)`.
    fn chart(&self, text: &str) -> PyResult<Vec<(usize, usize, Vec<String>)>> {
        self.0.chart(&TokenString::parse(text)).map_err(err)
    }
}

/// A context-free grammar, one `X -> a Y b` production per line.
#[pyclass(name = "Cfg", frozen, skip_from_py_object)]
pub struct PyCfg(regtag::Cfg);

#[pymethods]
impl PyCfg {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_cfg_file(text).map(PyCfg).map_err(err)
    }

    /// The equivalent regular-form TAG. `strategy` is `leftmost` or
    /// `rightmost`.
    #[pyo3(signature = (strategy = "leftmost", lexicalized = true))]
    fn lexicalize(&self, strategy: &str, lexicalized: bool) -> PyResult<PyGrammar> {
        let s = ExpansionStrategy::parse(strategy).ok_or_else(|| err(format!("unknown strategy {strategy}")))?;
        cfg_to_regular_tag(&self.0, &s, lexicalized).map(PyGrammar).map_err(err)
    }

    fn derivation_trees(&self, max_depth: usize) -> Vec<PyTree> {
        trees(regtag::lexicalizer::cfg_derivation_trees(&self.0, max_depth))
    }

    fn __str__(&self) -> String {
        render_cfg(&self.0)
    }
}

/// Runs the command line with `argv` (without the program name) and
/// returns `(exit_code, report)`.
#[pyfunction]
fn run_cli(argv: Vec<String>) -> (i32, String) {
    let r = regtag::cli::run_command(std::iter::once("regtag".to_string()).chain(argv));
    (r.exit_code, r.report)
}

#[pymodule]
#[pyo3(name = "regtag")]
pub fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_class::<PyCycle>()?;
    m.add_class::<PyGrammar>()?;
    m.add_class::<PyAutomaton>()?;
    m.add_class::<PyRecognizer>()?;
    m.add_class::<PyCfg>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("RegtagError", m.py().get_type::<RegtagError>())?;
    Ok(())
}
