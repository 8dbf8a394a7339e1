"""Lex and parse a Java-syntax subset into the abstracted item stream.

The grammar subset covers declarations, statements and expressions enough
to produce all 17 item kinds plus if/loop control markers. Anything else
(try/switch/throw/...) is skipped without error. Name resolution is an
import-table lookup only: a simple type name imported as ``a.b.c.D`` is
rendered ``c.D``; unknown names are kept as written.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .items import (
    ControlMarker,
    ItemKind,
    MarkerKind,
    SourceItem,
    lower_camel,
    simple_name,
)


class UnparsableSource(Exception):
    """Lexical failure or unbalanced braces; never raised for merely
    unrecognized statement forms."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at {line}:{column}")
        self.line = line
        self.column = column


KEYWORDS = frozenset(
    """package import class interface enum extends implements
    public private protected static final abstract native transient
    volatile strictfp synchronized if else for while do return new this
    super try catch finally switch case default break continue throw
    throws void int long short byte char boolean float double null true
    false instanceof assert goto const""".split()
)

MODIFIERS = frozenset(
    """public private protected static final abstract native transient
    volatile strictfp synchronized""".split()
)

PRIMITIVE_TYPES = frozenset(
    "void int long short byte char boolean float double".split()
)

# statement-leading keywords outside the supported subset; skipped whole
_SKIP_STMT_KEYWORDS = frozenset(
    "try catch finally switch case default throw break continue assert synchronized".split()
)

_MULTI_PUNCT = (
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "::",
)

_CONST_NAME_RE = re.compile(r"^[A-Z][A-Z0-9_]*$")
_TYPE_START_RE = re.compile(r"^[A-Za-z_$]")


@dataclass
class Token:
    kind: str  # ident | kw | num | str | char | punct | eof
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def bump(text: str) -> None:
        nonlocal line, col
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)

    while i < n:
        c = source[i]
        if c in " \t\r\n":
            bump(c)
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            j = n if j < 0 else j
            bump(source[i:j])
            i = j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise UnparsableSource("unterminated comment", line, col)
            bump(source[i : j + 2])
            i = j + 2
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] != '"':
                j += 2 if source[j] == "\\" else 1
            if j >= n:
                raise UnparsableSource("unterminated string literal", line, col)
            text = source[i : j + 1]
            toks.append(Token("str", text, line, col))
            bump(text)
            i = j + 1
            continue
        if c == "'":
            j = i + 1
            while j < n and source[j] != "'":
                j += 2 if source[j] == "\\" else 1
            if j >= n:
                raise UnparsableSource("unterminated char literal", line, col)
            text = source[i : j + 1]
            toks.append(Token("char", text, line, col))
            bump(text)
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._xX"):
                # stop a trailing dot that starts a qualified name: 1..x never occurs
                if source[j] == "." and not (j + 1 < n and source[j + 1].isdigit()):
                    break
                j += 1
            text = source[i:j]
            toks.append(Token("num", text, line, col))
            bump(text)
            i = j
            continue
        if c.isalpha() or c in "_$":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            text = source[i:j]
            toks.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
            bump(text)
            i = j
            continue
        for op in _MULTI_PUNCT:
            if source.startswith(op, i):
                toks.append(Token("punct", op, line, col))
                bump(op)
                i += len(op)
                break
        else:
            if c in "{}()[];,.<>=+-*/%!&|^?:@~":
                toks.append(Token("punct", c, line, col))
                bump(c)
                i += 1
            else:
                raise UnparsableSource(f"illegal character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


def _check_braces(toks: list[Token]) -> None:
    stack: list[Token] = []
    for t in toks:
        if t.kind != "punct":
            continue
        if t.text == "{":
            stack.append(t)
        elif t.text == "}":
            if not stack:
                raise UnparsableSource("unbalanced '}'", t.line, t.col)
            stack.pop()
    if stack:
        t = stack[-1]
        raise UnparsableSource("unbalanced '{'", t.line, t.col)


class _Extractor:
    def __init__(self, tokens: list[Token], file_label: str,
                 context_vars: dict[str, str] | None = None):
        self.toks = tokens
        self.i = 0
        self.file_label = file_label or "<memory>"
        self.package = ""
        self.imports: dict[str, str] = {}       # simple name -> "seg.Class"
        self._import_seen: set[str] = set()     # simple names, incl. ambiguous
        self.scopes: list[dict[str, str]] = [dict(context_vars or {})]
        self.class_stack: list[str] = []
        self.return_types: list[str] = []
        self.out: list[tuple[int, int, SourceItem]] = []
        self.markers: list[ControlMarker] = []

    # --- token cursor -----------------------------------------------------

    def cur(self) -> Token:
        return self.toks[self.i]

    def la(self, k: int = 1) -> Token:
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def at(self, text: str) -> bool:
        t = self.cur()
        return t.kind in ("punct", "kw") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def advance(self) -> Token:
        t = self.cur()
        if t.kind != "eof":
            self.i += 1
        return t

    def prev_line(self) -> int:
        return self.toks[max(self.i - 1, 0)].line

    # --- emit helpers -----------------------------------------------------

    def emit(self, kind: ItemKind, name: str, enclosing: str, line: int, col: int) -> None:
        self.out.append((line, col, SourceItem(kind, name, enclosing or self.file_label, line)))

    def mark(self, kind: MarkerKind, enclosing: str, line: int) -> None:
        self.markers.append(ControlMarker(kind, enclosing, line))

    # --- scope / resolution -----------------------------------------------

    def push_scope(self) -> None:
        self.scopes.append({})

    def pop_scope(self) -> None:
        self.scopes.pop()

    def bind(self, name: str, type_text: str) -> None:
        self.scopes[-1][name] = type_text

    def lookup(self, name: str) -> str | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def resolve_type(self, written: str) -> str:
        """Import-table lookup for simple names; qualified names kept as written."""
        base, suffix = written, ""
        while base.endswith("[]"):
            base, suffix = base[:-2], suffix + "[]"
        if "." not in base and base in self.imports:
            return self.imports[base] + suffix
        return written

    def is_type_name(self, name: str) -> bool:
        if name in self.imports or name in self.class_stack:
            return True
        return bool(name) and name[0].isupper() and self.lookup(name) is None

    def current_class(self) -> str:
        return self.class_stack[-1] if self.class_stack else "unknown"

    # --- compilation unit ---------------------------------------------------

    def parse_unit(self) -> None:
        if self.cur().kind == "kw" and self.cur().text == "package":
            t = self.advance()
            qname = self.parse_qualified_name()
            self.accept(";")
            self.package = qname
            self.emit(ItemKind.PD, qname, self.file_label, t.line, t.col)
        while self.cur().kind == "kw" and self.cur().text == "import":
            t = self.advance()
            self.accept("static")
            qname = self.parse_qualified_name()
            wildcard = False
            if self.accept("*"):
                wildcard = True
            self.accept(";")
            display = qname + (".*" if wildcard else "")
            self.emit(ItemKind.ID, display, self.package or self.file_label, t.line, t.col)
            if not wildcard:
                parts = qname.split(".")
                simple = parts[-1]
                if simple in self._import_seen:
                    self.imports.pop(simple, None)  # ambiguous: keep as written
                else:
                    self._import_seen.add(simple)
                    self.imports[simple] = ".".join(parts[-2:]) if len(parts) >= 2 else simple
        while self.cur().kind != "eof":
            self.skip_modifiers()
            t = self.cur()
            if t.kind == "kw" and t.text in ("class", "interface", "enum"):
                self.parse_type_decl(self.package or self.file_label)
            else:
                self.advance()  # stray top-level token: skip

    def parse_qualified_name(self) -> str:
        parts = []
        while self.cur().kind in ("ident", "kw") and self.cur().kind != "eof":
            if self.cur().kind == "kw" and self.cur().text not in PRIMITIVE_TYPES:
                break
            parts.append(self.advance().text)
            if not (self.at(".") and self.la().kind in ("ident", "kw")):
                break
            self.advance()  # '.'
        return ".".join(parts)

    def skip_modifiers(self) -> None:
        while True:
            t = self.cur()
            if t.kind == "kw" and t.text in MODIFIERS:
                self.advance()
            elif self.at("@"):
                self.advance()
                if self.cur().kind in ("ident", "kw"):
                    self.advance()
                    while self.accept(".") and self.cur().kind == "ident":
                        self.advance()
                if self.at("("):
                    self.skip_balanced("(", ")")
            else:
                return

    # --- type declarations --------------------------------------------------

    def parse_type_decl(self, outer_path: str) -> None:
        decl_tok = self.advance()  # class | interface | enum
        is_interface = decl_tok.text == "interface"
        name_tok = self.cur()
        if name_tok.kind != "ident":
            self.skip_to_statement_end()
            return
        name = self.advance().text
        self.emit(ItemKind.TD, name, outer_path, name_tok.line, name_tok.col)
        class_path = f"{outer_path}.{name}" if outer_path else name
        self.skip_generics()
        if self.accept("extends"):
            while True:
                t = self.cur()
                sup = self.parse_type_text()
                if sup:
                    kind = ItemKind.II if is_interface else ItemKind.SC
                    self.emit(kind, self.resolve_type(sup), class_path, t.line, t.col)
                if not self.accept(","):
                    break
        if self.accept("implements"):
            while True:
                t = self.cur()
                iface = self.parse_type_text()
                if iface:
                    self.emit(ItemKind.II, self.resolve_type(iface), class_path, t.line, t.col)
                if not self.accept(","):
                    break
        self.class_stack.append(name)
        self.push_scope()
        if self.accept("{"):
            while not self.at("}") and self.cur().kind != "eof":
                self.parse_member(class_path)
            self.accept("}")
        self.pop_scope()
        self.class_stack.pop()

    def parse_member(self, class_path: str) -> None:
        self.skip_modifiers()
        t = self.cur()
        if t.kind == "eof":
            return
        if t.kind == "kw" and t.text in ("class", "interface", "enum"):
            self.parse_type_decl(class_path)
            return
        if self.at("{"):  # instance/static initializer
            self.skip_balanced("{", "}")
            return
        if self.accept(";"):
            return
        # constructor: ClassName(
        if (t.kind == "ident" and t.text == self.current_class()
                and self.la().kind == "punct" and self.la().text == "("):
            name_tok = self.advance()
            self.parse_method_rest(class_path, name_tok.text, "", name_tok, ctor=True)
            return
        type_text = self.parse_type_text()
        if not type_text:
            self.skip_to_statement_end()
            return
        if self.cur().kind != "ident":
            self.skip_to_statement_end()
            return
        name_tok = self.advance()
        if self.at("("):
            self.parse_method_rest(class_path, name_tok.text, type_text, t)
            return
        # field declaration: one item per statement, all declarators registered
        rtype = self.resolve_type(type_text)
        self.emit(ItemKind.FD, rtype, class_path, t.line, t.col)
        self.parse_declarators(name_tok.text, rtype, class_path)

    def parse_declarators(self, first_name: str, rtype: str, enclosing: str) -> None:
        name = first_name
        while True:
            while self.accept("["):  # C-style array suffix on declarator
                self.accept("]")
                rtype = rtype + "[]" if not rtype.endswith("[]") else rtype
            self.bind(name, rtype)
            if self.accept("="):
                self.scan_expression(enclosing, (",", ";"))
            if self.accept(","):
                if self.cur().kind == "ident":
                    name = self.advance().text
                    continue
            break
        self.accept(";")

    def parse_method_rest(self, class_path: str, name: str, return_type: str,
                          start: Token, ctor: bool = False) -> None:
        method_path = f"{class_path}.{name}()"
        self.push_scope()
        param_types = self.parse_params()
        rtype = self.resolve_type(return_type) if return_type else ""
        if ctor:
            md_name = f"{name}({','.join(param_types)})"
        else:
            md_name = f"{name}({','.join(param_types)}):{rtype}"
        self.emit(ItemKind.MD, md_name, class_path, start.line, start.col)
        while self.cur().kind == "kw" and self.cur().text == "throws":
            self.advance()
            self.parse_qualified_name()
            while self.accept(","):
                self.parse_qualified_name()
        self.return_types.append(rtype if rtype else "void")
        if self.at("{"):
            self.parse_block(method_path)
        else:
            self.accept(";")  # abstract/interface method
        self.return_types.pop()
        self.pop_scope()

    def parse_params(self) -> list[str]:
        types: list[str] = []
        if not self.accept("("):
            return types
        while not self.at(")") and self.cur().kind != "eof":
            self.skip_modifiers()
            type_text = self.parse_type_text()
            if not type_text:
                self.advance()
                continue
            while self.accept(".") and self.at("."):  # varargs '...'
                self.advance()
            rtype = self.resolve_type(type_text)
            if self.cur().kind == "ident":
                pname = self.advance().text
                while self.accept("["):
                    self.accept("]")
                    rtype += "[]"
                self.bind(pname, rtype)
            types.append(rtype)
            if not self.accept(","):
                break
        self.accept(")")
        return types

    # --- statements -----------------------------------------------------------

    def parse_block(self, enclosing: str) -> None:
        self.accept("{")
        self.push_scope()
        while not self.at("}") and self.cur().kind != "eof":
            self.parse_statement(enclosing)
        self.accept("}")
        self.pop_scope()

    def parse_statement(self, enclosing: str) -> None:
        t = self.cur()
        if t.kind == "punct":
            if t.text == "{":
                self.parse_block(enclosing)
                return
            if t.text == ";":
                self.advance()
                return
        if t.kind == "kw":
            if t.text == "if":
                self.mark(MarkerKind.IF_BEGIN, enclosing, t.line)
                self.advance()
                if self.accept("("):
                    self.scan_expression(enclosing, (")",))
                    self.accept(")")
                self.parse_statement(enclosing)
                if self.accept("else"):
                    self.parse_statement(enclosing)
                self.mark(MarkerKind.IF_END, enclosing, self.prev_line())
                return
            if t.text == "while":
                self.mark(MarkerKind.LOOP_BEGIN, enclosing, t.line)
                self.advance()
                if self.accept("("):
                    self.scan_expression(enclosing, (")",))
                    self.accept(")")
                self.parse_statement(enclosing)
                self.mark(MarkerKind.LOOP_END, enclosing, self.prev_line())
                return
            if t.text == "do":
                self.mark(MarkerKind.LOOP_BEGIN, enclosing, t.line)
                self.advance()
                self.parse_statement(enclosing)
                if self.accept("while") and self.accept("("):
                    self.scan_expression(enclosing, (")",))
                    self.accept(")")
                self.accept(";")
                self.mark(MarkerKind.LOOP_END, enclosing, self.prev_line())
                return
            if t.text == "for":
                self.mark(MarkerKind.LOOP_BEGIN, enclosing, t.line)
                self.advance()
                if self.accept("("):
                    self.parse_for_control(enclosing)
                self.parse_statement(enclosing)
                self.mark(MarkerKind.LOOP_END, enclosing, self.prev_line())
                return
            if t.text == "return":
                rt = self.return_types[-1] if self.return_types else "void"
                self.emit(ItemKind.RT, rt, enclosing, t.line, t.col)
                self.advance()
                if not self.at(";"):
                    self.scan_expression(enclosing, (";",))
                self.accept(";")
                return
            if t.text == "this" and self.la().text == "(":
                self.advance()
                args = self.parse_args(enclosing)
                self.emit(ItemKind.CTI, f"this({','.join(args)})", enclosing, t.line, t.col)
                self.accept(";")
                return
            if t.text == "super" and self.la().text == "(":
                self.advance()
                args = self.parse_args(enclosing)
                self.emit(ItemKind.SCI, f"super({','.join(args)})", enclosing, t.line, t.col)
                self.accept(";")
                return
            if t.text in _SKIP_STMT_KEYWORDS:
                self.skip_to_statement_end()
                return
            if t.text in ("class", "interface", "enum"):
                self.parse_type_decl(enclosing)
                return
            if t.text in MODIFIERS:  # e.g. "final X x = ..."
                self.skip_modifiers()
                self.parse_statement(enclosing)
                return
        if self.looks_like_local_decl():
            start = self.cur()
            type_text = self.parse_type_text()
            rtype = self.resolve_type(type_text)
            self.emit(ItemKind.VD, rtype, enclosing, start.line, start.col)
            if self.cur().kind == "ident":
                name = self.advance().text
                self.parse_declarators(name, rtype, enclosing)
            else:
                self.skip_to_statement_end()
            return
        self.scan_expression(enclosing, (";",))
        if not self.accept(";"):
            if self.cur().kind != "eof" and not self.at("}"):
                self.advance()  # ensure progress on malformed input

    def parse_for_control(self, enclosing: str) -> None:
        # classic "init; cond; update" or enhanced "Type v : iterable"
        if self.looks_like_local_decl():
            start = self.cur()
            type_text = self.parse_type_text()
            rtype = self.resolve_type(type_text)
            self.emit(ItemKind.VD, rtype, enclosing, start.line, start.col)
            if self.cur().kind == "ident":
                self.bind(self.advance().text, rtype)
            if self.accept(":"):  # for-each
                self.scan_expression(enclosing, (")",))
                self.accept(")")
                return
            if self.accept("="):
                self.scan_expression(enclosing, (";", ")"))
        self.scan_expression(enclosing, (";", ")"))
        while self.accept(";"):
            self.scan_expression(enclosing, (";", ")"))
        self.accept(")")

    # --- declaration lookahead --------------------------------------------

    def looks_like_local_decl(self) -> bool:
        t = self.cur()
        if t.kind == "kw" and t.text in PRIMITIVE_TYPES and t.text != "void":
            return True
        if t.kind != "ident":
            return False
        save = self.i
        try:
            type_text = self.parse_type_text()
            ok = bool(type_text) and self.cur().kind == "ident" and self.la().text in (";", "=", ",", ":", "[")
        finally:
            self.i = save
        return ok

    def parse_type_text(self) -> str:
        """Parse a type reference; returns '' (cursor restored) when absent."""
        save = self.i
        t = self.cur()
        if t.kind == "kw" and t.text in PRIMITIVE_TYPES:
            base = self.advance().text
        elif t.kind == "ident":
            base = self.advance().text
            while self.at(".") and self.la().kind == "ident":
                self.advance()
                base += "." + self.advance().text
        else:
            return ""
        self.skip_generics()
        while self.at("[") and self.la().text == "]":
            self.advance()
            self.advance()
            base += "[]"
        if not _TYPE_START_RE.match(base):
            self.i = save
            return ""
        return base

    def skip_generics(self) -> None:
        if not self.at("<"):
            return
        save = self.i
        depth = 0
        while self.cur().kind != "eof":
            t = self.cur()
            if t.kind == "punct" and t.text == "<":
                depth += 1
            elif t.kind == "punct" and t.text == ">":
                depth -= 1
                if depth == 0:
                    self.advance()
                    return
            elif t.kind not in ("ident", "kw") and t.text not in (",", ".", "?", "[", "]"):
                self.i = save  # not a generic group ('<' as comparison)
                return
            self.advance()
        self.i = save

    # --- expressions --------------------------------------------------------

    def scan_expression(self, enclosing: str, terminators: tuple[str, ...]) -> str:
        """Emit items from an expression, consuming up to (not including) a
        terminator at this nesting level. Returns the classification of the
        first primary for argument typing."""
        first: str | None = None
        while True:
            t = self.cur()
            if t.kind == "eof":
                break
            if t.kind == "punct" and t.text in terminators:
                break
            if t.kind == "punct" and t.text in (")", "]", "}"):
                break  # let the caller consume the closer
            ty = self.parse_chain(enclosing)
            if ty is not None:
                if first is None:
                    first = ty
                continue
            self.advance()  # operator or other glue
        return first or "unknown"

    def parse_chain(self, enclosing: str) -> str | None:
        """Parse one primary and its postfix chain, emitting items.
        Returns a classification string, or None if the cursor does not
        start a primary."""
        t = self.cur()
        if t.kind == "num":
            self.advance()
            return "double" if ("." in t.text or t.text.rstrip("dDfF") != t.text) else "int"
        if t.kind == "str":
            self.advance()
            return "String"
        if t.kind == "char":
            self.advance()
            return "char"
        if t.kind == "kw":
            if t.text in ("true", "false"):
                self.advance()
                return "boolean"
            if t.text == "null":
                self.advance()
                return "null"
            if t.text == "new":
                return self.parse_creation(enclosing)
            if t.text == "this":
                return self.parse_this_or_super_chain(enclosing, self.current_class())
            if t.text == "super":
                return self.parse_this_or_super_chain(enclosing, "super")
            return None
        if t.kind == "punct" and t.text == "(":
            cast = self.try_parse_cast()
            if cast is not None:
                self.parse_chain(enclosing)
                return cast
            self.advance()
            inner_ty = self.scan_expression(enclosing, (")",))
            self.accept(")")
            return self.parse_postfix(enclosing, inner_ty)
        if t.kind == "ident":
            return self.parse_name_chain(enclosing)
        return None

    def try_parse_cast(self) -> str | None:
        # '(' Type ')' followed by a primary start
        save = self.i
        if not self.accept("("):
            return None
        type_text = self.parse_type_text()
        if type_text and self.accept(")"):
            nxt = self.cur()
            primary_start = (
                nxt.kind in ("ident", "num", "str", "char")
                or (nxt.kind == "kw" and nxt.text in ("new", "this", "super", "null", "true", "false"))
                or (nxt.kind == "punct" and nxt.text == "(")
            )
            if primary_start:
                return self.resolve_type(type_text)
        self.i = save
        return None

    def parse_creation(self, enclosing: str) -> str:
        start = self.advance()  # 'new'
        type_text = self.parse_type_text()
        rtype = self.resolve_type(type_text) if type_text else "unknown"
        if self.at("["):
            base = rtype if rtype.endswith("[]") else rtype + "[]"
            while self.accept("["):
                if not self.at("]"):
                    self.scan_expression(enclosing, ("]",))
                self.accept("]")
            self.emit(ItemKind.AC, base, enclosing, start.line, start.col)
            if self.at("{"):
                self.scan_braced_init(enclosing)
            return base
        args = self.parse_args(enclosing) if self.at("(") else []
        if self.at("{"):
            self.emit(ItemKind.ACD, rtype, enclosing, start.line, start.col)
            self.skip_balanced("{", "}")
            return rtype
        self.emit(ItemKind.CI, f"{rtype}({','.join(args)})", enclosing, start.line, start.col)
        return rtype

    def parse_this_or_super_chain(self, enclosing: str, receiver_type: str) -> str:
        start = self.advance()  # 'this' | 'super'
        if not self.at("."):
            return receiver_type
        while self.accept("."):
            if self.cur().kind != "ident":
                break
            member = self.advance().text
            if self.at("("):
                args = self.parse_args(enclosing)
                recv = "super" if receiver_type == "super" else lower_camel(simple_name(receiver_type))
                self.emit(ItemKind.MI, f"{recv}.{member}({','.join(args)})",
                          enclosing, start.line, start.col)
                return self.parse_postfix(enclosing, "unknown") or "unknown"
            if self.at("="):
                recv = "super" if receiver_type == "super" else lower_camel(simple_name(receiver_type))
                self.emit(ItemKind.FA, f"{recv}.{member}", enclosing, start.line, start.col)
                self.advance()
                self.scan_expression(enclosing, (";", ",", ")"))
                return "unknown"
        return "unknown"

    def parse_name_chain(self, enclosing: str) -> str:
        start = self.cur()
        segments = [self.advance().text]
        while self.at(".") and self.la().kind == "ident" and self.la(2).text != "(":
            self.advance()
            segments.append(self.advance().text)
        # method call segment?
        if self.at(".") and self.la().kind == "ident" and self.la(2).text == "(":
            self.advance()
            method = self.advance().text
            args = self.parse_args(enclosing)
            recv = self.render_receiver(segments)
            self.emit(ItemKind.MI, f"{recv}.{method}({','.join(args)})",
                      enclosing, start.line, start.col)
            return self.parse_postfix(enclosing, "unknown") or "unknown"
        if len(segments) == 1 and self.at("("):
            # unqualified call: instance method of the enclosing class
            args = self.parse_args(enclosing)
            recv = lower_camel(self.current_class())
            self.emit(ItemKind.MI, f"{recv}.{segments[0]}({','.join(args)})",
                      enclosing, start.line, start.col)
            return self.parse_postfix(enclosing, "unknown") or "unknown"
        if self.at("["):
            arr_type = self.lookup(segments[0]) if len(segments) == 1 else None
            name = arr_type if arr_type else "unknown[]"
            self.emit(ItemKind.AA, name, enclosing, start.line, start.col)
            while self.accept("["):
                if not self.at("]"):
                    self.scan_expression(enclosing, ("]",))
                self.accept("]")
            elem = arr_type[:-2] if arr_type and arr_type.endswith("[]") else "unknown"
            return self.parse_postfix(enclosing, elem) or elem
        if len(segments) > 1 and self.at("=") :
            # dotted assignment target -> field access (write)
            recv = self.render_receiver(segments[:-1])
            self.emit(ItemKind.FA, f"{recv}.{segments[-1]}", enclosing, start.line, start.col)
            self.advance()
            self.scan_expression(enclosing, (";", ",", ")"))
            return "unknown"
        return self.classify_name(segments)

    def parse_postfix(self, enclosing: str, current: str) -> str | None:
        # chained invocations on an unknown intermediate value
        while self.at(".") and self.la().kind == "ident":
            if self.la(2).text == "(":
                tok = self.cur()
                self.advance()
                method = self.advance().text
                args = self.parse_args(enclosing)
                self.emit(ItemKind.MI, f"unknown.{method}({','.join(args)})",
                          enclosing, tok.line, tok.col)
                current = "unknown"
            else:
                self.advance()
                self.advance()
                current = "unknown"
        return current

    def render_receiver(self, segments: list[str]) -> str:
        """Receiver rendering for invocations/field writes.

        A declared variable renders as its type in lower camel; a known type
        name renders as the (resolved) type for static access; anything else
        is the deterministic fallback ``unknown``.
        """
        if len(segments) == 1:
            name = segments[0]
            var_type = self.lookup(name)
            if var_type is not None:
                return lower_camel(simple_name(var_type))
            if self.is_type_name(name):
                return self.resolve_type(name)
            return "unknown"
        first_is_var = self.lookup(segments[0]) is not None
        if not first_is_var:
            path = ".".join(segments)
            if segments[0][0].isupper() or any(s[0].isupper() for s in segments):
                return self.resolve_type(path) if "." not in path else path
        return "unknown"

    def classify_name(self, segments: list[str]) -> str:
        if len(segments) == 1:
            var_type = self.lookup(segments[0])
            if var_type is not None:
                return var_type
            if _CONST_NAME_RE.match(segments[0]):
                return "int"
            return "unknown"
        # Type.CONSTANT convention: reads as an int-valued API constant
        if _CONST_NAME_RE.match(segments[-1]):
            return "int"
        return "unknown"

    def parse_args(self, enclosing: str) -> list[str]:
        types: list[str] = []
        if not self.accept("("):
            return types
        while not self.at(")") and self.cur().kind != "eof":
            types.append(self.scan_expression(enclosing, (",", ")")))
            if not self.accept(","):
                break
        self.accept(")")
        return types

    def scan_braced_init(self, enclosing: str) -> None:
        self.accept("{")
        while not self.at("}") and self.cur().kind != "eof":
            if self.at("{"):
                self.scan_braced_init(enclosing)
                continue
            self.scan_expression(enclosing, (",", "}"))
            if not self.accept(","):
                break
        self.accept("}")

    # --- recovery -----------------------------------------------------------

    def skip_balanced(self, opener: str, closer: str) -> None:
        if not self.accept(opener):
            return
        depth = 1
        while depth and self.cur().kind != "eof":
            if self.at(opener):
                depth += 1
            elif self.at(closer):
                depth -= 1
            self.advance()

    def skip_to_statement_end(self) -> None:
        """Skip an unsupported construct: up to ';' or over one balanced block."""
        while self.cur().kind != "eof":
            if self.at(";"):
                self.advance()
                return
            if self.at("{"):
                self.skip_balanced("{", "}")
                return
            if self.at("}"):
                return
            self.advance()


def extract_items(source: str, file_label: str = "<memory>",
                  context_vars: dict[str, str] | None = None,
                  ) -> tuple[list[SourceItem], list[ControlMarker]]:
    """Abstract one source text into items plus control markers.

    Items come back sorted by (line, column of occurrence). ``context_vars``
    injects ambient variable->type bindings (used when abstracting a lone
    statement or a rendered skeleton outside its original file).
    """
    if not source.strip():
        return [], []
    tokens = tokenize(source)
    _check_braces(tokens)
    ex = _Extractor(tokens, file_label, context_vars)
    ex.parse_unit()
    ex.out.sort(key=lambda rec: (rec[0], rec[1]))
    return [item for _, _, item in ex.out], list(ex.markers)


# --- corpus walking ----------------------------------------------------------

def iter_source_files(corpus_dirs: Iterable[str | Path], ext: str = ".java") -> Iterator[Path]:
    """Recursively discover source files under the corpus directories,
    in deterministic sorted order."""
    for root in corpus_dirs:
        root = Path(root)
        if root.is_file():
            if root.suffix == ext:
                yield root
            continue
        yield from sorted(p for p in root.rglob(f"*{ext}") if p.is_file())


def extract_corpus(corpus_dirs: Iterable[str | Path], ext: str = ".java",
                   ) -> tuple[list[SourceItem], list[ControlMarker]]:
    """Extract every file in the corpus; per-file failures abort (corpus
    files must lex); item order is (file, line, column)."""
    items: list[SourceItem] = []
    markers: list[ControlMarker] = []
    for path in iter_source_files(corpus_dirs, ext):
        file_items, file_markers = extract_items(
            path.read_text(encoding="utf-8"), file_label=str(path))
        items.extend(file_items)
        markers.extend(file_markers)
    return items, markers


def dump_items(items: Iterable[SourceItem]) -> str:
    """Line-oriented debug dump: KIND<TAB>name<TAB>enclosing<TAB>line."""
    return "\n".join(
        f"{it.kind.value}\t{it.name}\t{it.enclosing}\t{it.line}" for it in items
    )
