"""Smoke test for the regtag Python module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/regtag-*.whl
"""

from pathlib import Path

import regtag

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def main():
    g0 = regtag.Grammar.from_file(str(FIXTURES / "tag" / "G0.tag"))
    assert g0.is_regular()
    assert [str(t) for t in g0.enumerate(7, completed_only=True)] == [
        "(S a)",
        "(S a (S a))",
        "(S a (S a (S a)))",
    ]
    assert g0.recognize("a a a")
    assert not g0.recognize("")

    g1 = regtag.Grammar.from_file(str(FIXTURES / "tag" / "G1.tag"))
    assert not g1.is_regular()
    cycles = g1.cycles()
    assert len(cycles) == 8
    bad = [c for c in cycles if c.equivalent is False]
    assert any(str(c.tree) == "(A (B A*))" for c in bad)
    extended, added = g1.extend()
    assert extended.is_regular() and len(added) == 6
    assert set(g1.language(6)) <= set(extended.language(6))

    a = g0.compile()
    assert a.accepts(regtag.Tree("(S a (S a))"))
    assert not a.accepts(regtag.Tree("(S a S*)"))
    assert a.enumerate(7) == g0.enumerate(7, completed_only=True)

    cfg = regtag.Cfg((FIXTURES / "cfg" / "GCFG1.cfg").read_text())
    lex = cfg.lexicalize("leftmost", lexicalized=True)
    assert lex.is_regular()
    assert [str(t) for _, t in lex.initial] == ["(S @b)"]
    deep = [t for t in lex.enumerate(12, completed_only=True) if t.depth() <= 4]
    assert deep == cfg.derivation_trees(4)

    r = lex.recognizer()
    assert r.recognize("b a a") and not r.recognize("a b")

    try:
        g0.recognize("a z")
    except regtag.RegtagError as e:
        assert "z" in str(e)
    else:
        raise AssertionError("unknown token accepted")

    code, report = regtag.run_cli(["check", str(FIXTURES / "tag" / "G1.tag")])
    assert code == 1 and "regular form: no" in report

    print("smoke test ok")


if __name__ == "__main__":
    main()
