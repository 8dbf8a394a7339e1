from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esdp.extractor import KEYWORDS, UnparsableSource, dump_items, extract_items
from esdp.items import ItemKind, normalize_item

FIG_311 = """
public class SearchTest
{
    private ASTParser parser;
    private compilationUnit cu;

    protected CompilationUnit parse (ICompilationUnit lwUnit)
    {
        Parse = ASTParser.newParser(AST.JLS3);
        parser.setKind (ASTParser.K_COMPILATION_UNIT);
        parser.setSource (lwUnit);
        parser.setResolveBindings (true);
        cu = (CompilationUnit)parser.createAST(null);
        return cu;
    }
}
"""

FIG_311_BODY_ITEMS = [
    ("MI", "ASTParser.newParser(int)"),
    ("MI", "aSTParser.setKind(int)"),
    ("MI", "aSTParser.setSource(ICompilationUnit)"),
    ("MI", "aSTParser.setResolveBindings(boolean)"),
    ("MI", "aSTParser.createAST(null)"),
    ("RT", "CompilationUnit"),
]


def method_items(items, suffix=".parse()"):
    return [it.identity for it in items if it.enclosing.endswith(suffix)]


def test_field_declaration_abstracts_to_type_at_line():
    source = "package com;\n\npublic class Test {\n\n    private Connection conn;\n}\n"
    items, _ = extract_items(source, "Test.java")
    fd = [it for it in items if it.kind is ItemKind.FD]
    assert len(fd) == 1
    assert fd[0].name == "Connection"
    assert fd[0].enclosing == "com.Test"
    assert fd[0].line == 5


def test_empty_source_yields_nothing():
    assert extract_items("", "x.java") == ([], [])
    assert extract_items("   \n\t\n", "x.java") == ([], [])


def test_method_body_item_stream_in_order():
    items, _ = extract_items(FIG_311, "SearchTest.java")
    assert method_items(items) == FIG_311_BODY_ITEMS


def test_items_sorted_by_line():
    items, _ = extract_items(FIG_311, "SearchTest.java")
    lines = [it.line for it in items]
    assert lines == sorted(lines)


def _rename(source: str, **renames: str) -> str:
    for old, new in renames.items():
        source = re.sub(rf"\b{old}\b", new, source)
    return source


def test_alpha_renaming_leaves_identities_unchanged():
    renamed = _rename(FIG_311, parser="q", cu="zz", lwUnit="input0", Parse="w")
    base, _ = extract_items(FIG_311, "a.java")
    other, _ = extract_items(renamed, "a.java")
    assert sorted(it.identity for it in base) == sorted(it.identity for it in other)


@given(name=st.from_regex(r"[a-z][a-zA-Z0-9]{2,8}", fullmatch=True).filter(
    lambda s: s not in KEYWORDS))
@settings(max_examples=30, deadline=None)
def test_local_variable_name_never_in_identity(name):
    source = f"class C {{ void m() {{ Connection {name}; {name}.close(); }} }}"
    items, _ = extract_items(source, "c.java")
    idents = [it.identity for it in items]
    reference, _ = extract_items(
        "class C { void m() { Connection v0; v0.close(); } }", "c.java")
    assert idents == [it.identity for it in reference]


SEVENTEEN_KINDS = """package foo.biz;
import java.io.File;

public class Example_Class extends SuperClass implements Runnable {
    private Connection conn;

    public File method (String s) {
        String t;
        File f = new File("x");
        Enumeration e = new Enumeration () { };
        int[] arr = new int[5];
        arr[0] = 1;
        obj.field_A = 2;
        f.open(t);
        return f;
    }

    public Example_Class(String s) {
        this(s);
        super(s);
    }
}
"""


def test_exactly_seventeen_item_kinds():
    assert len(ItemKind) == 17


def test_all_seventeen_kinds_covered():
    items, _ = extract_items(SEVENTEEN_KINDS, "e.java")
    kinds = {it.kind for it in items}
    assert kinds == set(ItemKind), f"missing: {set(ItemKind) - kinds}"


def test_import_resolution_uses_last_package_segment():
    source = ("package p;\nimport org.eclipse.jdt.core.dom.ASTParser;\n"
              "class C { private ASTParser x; }")
    items, _ = extract_items(source, "c.java")
    assert ("FD", "dom.ASTParser") in [it.identity for it in items]


def test_ambiguous_import_keeps_simple_name():
    source = ("import a.b.Widget;\nimport c.d.Widget;\n"
              "class C { private Widget w; }")
    items, _ = extract_items(source, "c.java")
    assert ("FD", "Widget") in [it.identity for it in items]


def test_unresolvable_receiver_renders_unknown():
    source = "class C { void m() { mystery.poke(1); } }"
    items, _ = extract_items(source, "c.java")
    assert ("MI", "unknown.poke(int)") in [it.identity for it in items]


def test_unrecognized_statements_skipped_without_error():
    source = """class C {
    void m() {
        try { risky(); } catch (Exception e) { }
        switch (x) { case 1: break; }
        conn.close();
    }
}
"""
    items, _ = extract_items(source, "c.java")
    assert ("MI", "unknown.close()") in [it.identity for it in items]


def test_unbalanced_braces_raise_with_position():
    with pytest.raises(UnparsableSource) as err:
        extract_items("class C {\n void m() {\n}\n", "c.java")
    assert err.value.line >= 1 and err.value.column >= 1


def test_illegal_character_raises():
    with pytest.raises(UnparsableSource):
        extract_items("class C { void m() { int x = `bad`; } }", "c.java")


def test_unterminated_string_raises():
    with pytest.raises(UnparsableSource):
        extract_items('class C { String s = "oops; }', "c.java")


def test_control_markers_nest():
    source = """class C {
    void m() {
        if (a) {
            while (b) {
                c.run();
            }
        }
    }
}
"""
    _, markers = extract_items(source, "c.java")
    order = [m.kind.value for m in markers]
    assert order == ["IF_BEGIN", "LOOP_BEGIN", "LOOP_END", "IF_END"]


def test_normalize_item_examples():
    assert normalize_item(ItemKind.FD, "Connection connection") == "Connection"
    assert normalize_item(ItemKind.FD, "Connection conn") == "Connection"
    assert normalize_item(ItemKind.MI, "setKind(int)", "ASTParser") == "aSTParser.setKind(int)"


def test_normalize_item_total_on_odd_input():
    assert normalize_item(ItemKind.FD, "") == ""
    assert normalize_item(ItemKind.MI, "m()", "") == "m()"


def test_dump_format():
    items, _ = extract_items("package p;\nclass C { private X x; }", "c.java")
    lines = dump_items(items).splitlines()
    assert lines[0] == "PD\tp\tc.java\t1"
    assert all(len(line.split("\t")) == 4 for line in lines)


def test_duplicate_invocations_both_emitted():
    source = "class C { void m() { x.tick(); x.tick(); } }"
    items, _ = extract_items(source, "c.java")
    ticks = [it for it in items if it.kind is ItemKind.MI]
    assert len(ticks) == 2
