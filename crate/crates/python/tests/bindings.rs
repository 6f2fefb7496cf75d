use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "regtag").unwrap();
        regtag_py::init(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("regtag", m).unwrap();
        py.run(code, Some(&globals), None).unwrap_or_else(|e| panic!("{e}"));
    });
}

#[test]
fn trees_and_grammars() {
    with_module(
        c"
t = regtag.Tree('(S a (S b S*))')
assert t.size() == 5 and t.depth() == 3 and t.is_auxiliary()
assert t.tokens() == ['a', 'b']
assert t == regtag.Tree('(S a (S b S*))') and hash(t) == hash(regtag.Tree('(S a (S b S*))'))
g = regtag.Grammar('start: S\\ninit: (S a)\\naux: (S a S*)\\n')
assert g.is_regular() and g.start == 'S' and g.terminals == ['a']
assert len(g.enumerate(9, completed_only=True)) == 4
assert g.recognize('a a')
assert g.spine_dot().startswith('digraph{')
",
    );
}

#[test]
fn errors_become_exceptions() {
    with_module(
        c"
for bad in ['(S a', '']:
    try:
        regtag.Tree(bad)
    except regtag.RegtagError:
        pass
    else:
        raise AssertionError(bad)
g1 = regtag.Grammar('start: S\\ninit: (S (A (B b) a))\\naux: (A (B A* b))\\naux: (B (A B* a))\\n')
try:
    g1.compile()
except regtag.RegtagError as e:
    assert 'regular form' in str(e)
else:
    raise AssertionError('compiled a non-regular grammar')
",
    );
}

#[test]
fn lexicalization() {
    with_module(
        c"
c = regtag.Cfg('S -> S a\\nS -> b\\n')
g = c.lexicalize('rightmost')
assert g.is_regular()
assert all(str(t).count('@') == 1 for _, t in g.initial + g.auxiliary)
assert [t for t in g.enumerate(12, completed_only=True) if t.depth() <= 4] == c.derivation_trees(4)
code, _ = regtag.run_cli(['frobnicate'])
assert code == 2
",
    );
}
