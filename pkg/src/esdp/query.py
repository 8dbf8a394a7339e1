"""Statement queries against a mined repository: abstraction into the
corpus item space, tiered search, and code skeleton rendering.

Skeletons render the pattern elements after the matched position as
statements; placeholder arguments are chosen so that re-extracting the
skeleton (under the query's variable context) recovers exactly the same
item sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .extractor import UnparsableSource, extract_items
from .items import ItemKind, lower_camel, simple_name
from .mining import SequentialPattern
from .repository import MinedRepository

_FIELD_MODIFIERS = ("private", "public", "protected", "static", "final")


class UnparsableQuery(Exception):
    pass


@dataclass
class QueryContext:
    class_name: str = "Query"
    method_name: str = "query"
    variables: dict[str, str] = field(default_factory=dict)  # name -> type
    imports: list[str] = field(default_factory=list)


@dataclass
class UserQuery:
    raw_statement: str
    item: tuple[str, str]
    context: QueryContext


@dataclass
class Recommendation:
    pattern: SequentialPattern
    match_offset: int

    @property
    def score(self) -> Fraction:
        return self.pattern.ranking


def abstract_query(statement: str, context: QueryContext | None = None) -> UserQuery:
    """Abstract one typed statement with the same normalization the corpus
    extraction uses, so query and corpus share one identity space."""
    context = context or QueryContext()
    text = statement.strip()
    if not text:
        raise UnparsableQuery("empty query statement")
    if not text.endswith((";", "}")):
        text += ";"
    import_lines = "".join(f"import {imp};\n" for imp in context.imports)
    first_word = text.split(None, 1)[0] if text.split() else ""
    if first_word in _FIELD_MODIFIERS:
        # field-style statement: abstract at class level
        source = f"{import_lines}class {context.class_name} {{\n{text}\n}}\n"
    else:
        source = (f"{import_lines}class {context.class_name} {{\n"
                  f"void {context.method_name}() {{\n{text}\n}}\n}}\n")
    try:
        items, _ = extract_items(source, "<query>", context_vars=context.variables)
    except UnparsableSource as exc:
        raise UnparsableQuery(str(exc)) from None
    wrapper = {ItemKind.TD, ItemKind.MD, ItemKind.ID, ItemKind.PD}
    content = [it for it in items if it.kind not in wrapper]
    if not content:
        raise UnparsableQuery(f"no abstractable construct in {statement!r}")
    return UserQuery(statement, content[0].identity, context)


def search(q: UserQuery, repo: MinedRepository, top_n: int) -> list[Recommendation]:
    """Tiered retrieval: patterns led by the query item, then patterns
    containing it anywhere, then substring matches on the name with the
    argument list stripped (so differently resolved argument types still
    meet); each tier keeps the repository's ranking order."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    _, name = q.item
    base = name.split("(", 1)[0]
    chosen: list[Recommendation] = []
    seen: set[tuple] = set()

    def take(rec: Recommendation) -> None:
        if rec.pattern.elements not in seen:
            seen.add(rec.pattern.elements)
            chosen.append(rec)

    for p in repo.patterns:
        if p.elements[0] == q.item:
            take(Recommendation(p, 0))
    if len(chosen) < top_n:
        for p in repo.patterns:
            if q.item in p.elements:
                take(Recommendation(p, p.elements.index(q.item)))
    if len(chosen) < top_n:
        for p in repo.patterns:
            for offset, (_, ename) in enumerate(p.elements):
                ebase = ename.split("(", 1)[0]
                if base in ebase or ebase in base:
                    take(Recommendation(p, offset))
                    break
    return chosen[:top_n]


# --- skeleton rendering -------------------------------------------------------------

_PLACEHOLDERS = {
    "int": "0",
    "long": "0",
    "short": "0",
    "byte": "0",
    "double": "0.0",
    "float": "0.0",
    "boolean": "true",
    "char": "'a'",
    "String": '""',
    "null": "null",
}


def _placeholder(arg_type: str) -> str:
    if arg_type in _PLACEHOLDERS:
        return _PLACEHOLDERS[arg_type]
    # reference type: cast-null keeps the type recoverable on re-extraction
    return f"({arg_type}) null"


def _split_call(name: str) -> tuple[str, str, list[str]]:
    """'recv.m(a,b)' -> (recv, m, [a, b]); receiver may be dotted."""
    head, _, args_part = name.partition("(")
    args_text = args_part[:-1] if args_part.endswith(")") else args_part
    args = [a for a in args_text.split(",") if a] if args_text else []
    if "." in head:
        recv, method = head.rsplit(".", 1)
    else:
        recv, method = "", head
    return recv, method, args


def _is_instance_receiver(recv: str) -> bool:
    return bool(recv) and "." not in recv and recv[0].islower() and recv != "unknown"


def derive_bindings(elements: tuple[tuple[str, str], ...]) -> dict[str, str]:
    """Default variable->type bindings implied by a pattern's elements:
    every instance receiver binds to its upper-first type, every array
    access to a synthetic array variable."""
    bindings: dict[str, str] = {}
    for kind, name in elements:
        if kind == "MI":
            recv, _, _ = _split_call(name)
        elif kind == "FA":
            recv = name.rsplit(".", 1)[0] if "." in name else ""
        elif kind == "AA" and name.endswith("[]") and not name.startswith("unknown"):
            element_type = name[:-2]
            var = lower_camel(simple_name(element_type)) + "Array"
            bindings.setdefault(var, name)
            continue
        else:
            continue
        if _is_instance_receiver(recv):
            bindings.setdefault(recv, recv[0].upper() + recv[1:])
    return bindings


def _receiver_var(recv: str, context: QueryContext, defaults: dict[str, str]) -> str:
    """Pick the context variable bound to the receiver type, else the
    lower-camel default name."""
    if not _is_instance_receiver(recv):
        return recv  # static receiver (type path) or unknown
    want = recv[0].upper() + recv[1:]
    for var, vtype in context.variables.items():
        if simple_name(vtype) == want:
            return var
    return recv


def render_skeleton(rec: Recommendation, q: UserQuery) -> str:
    """Statements for the pattern elements after the matched position."""
    tail = rec.pattern.elements[rec.match_offset + 1:]
    defaults = derive_bindings(rec.pattern.elements)
    lines: list[str] = []
    opened_method = False
    declared: dict[str, str] = dict(q.context.variables)

    def var_of_type(type_name: str) -> str | None:
        want = simple_name(type_name)
        for var, vtype in declared.items():
            if simple_name(vtype) == want:
                return var
        return None

    for idx, (kind, name) in enumerate(tail):
        indent = "    " if opened_method else ""
        if kind == "MD":
            head, _, rtype = name.partition(":")
            mname, _, params_part = head.partition("(")
            params_text = params_part[:-1] if params_part.endswith(")") else params_part
            params = [p for p in params_text.split(",") if p]
            rendered = ", ".join(f"{t} p{i}" for i, t in enumerate(params))
            lines.append(f"{rtype or 'void'} {mname}({rendered}) {{")
            for i, t in enumerate(params):
                declared[f"p{i}"] = t
            opened_method = True
            continue
        if kind == "MI":
            recv, method, args = _split_call(name)
            target = _receiver_var(recv, q.context, defaults)
            rendered = ", ".join(_placeholder(a) for a in args)
            lines.append(f"{indent}{target}.{method}({rendered});")
        elif kind in ("FD", "VD"):
            var = lower_camel(simple_name(name.replace("[]", "")))
            lines.append(f"{indent}{name} {var};")
            declared[var] = name
        elif kind == "CI":
            type_part, _, args_part = name.partition("(")
            args_text = args_part[:-1] if args_part.endswith(")") else args_part
            args = [a for a in args_text.split(",") if a]
            rendered = ", ".join(_placeholder(a) for a in args)
            lines.append(f"{indent}new {type_part}({rendered});")
        elif kind == "ACD":
            lines.append(f"{indent}new {name}() {{ }};")
        elif kind == "AC":
            lines.append(f"{indent}new {name.replace('[]', '')}[0];")
        elif kind == "AA":
            var = var_of_type(name) or next(
                (v for v, t in defaults.items() if t == name), "unknownArray")
            lines.append(f"{indent}{var}[0] = {_placeholder(name[:-2] if name.endswith('[]') else 'int')};")
        elif kind == "FA":
            recv, fname = name.rsplit(".", 1)
            target = _receiver_var(recv, q.context, defaults)
            lines.append(f"{indent}{target}.{fname} = 0;")
        elif kind == "CTI":
            _, _, args = _split_call(name)
            rendered = ", ".join(_placeholder(a) for a in args)
            lines.append(f"{indent}this({rendered});")
        elif kind == "SCI":
            _, _, args = _split_call(name)
            rendered = ", ".join(_placeholder(a) for a in args)
            lines.append(f"{indent}super({rendered});")
        elif kind == "RT":
            var = var_of_type(name)
            lines.append(f"{indent}return {var if var else 'null'};")
        elif kind == "PD":
            lines.append(f"package {name};")
        elif kind == "ID":
            lines.append(f"import {name};")
        else:
            # class-level kinds never reach mined method sequences
            lines.append(f"{indent}// {kind} {name}")
    if opened_method:
        lines.append("}")
    return "\n".join(lines)


def extract_skeleton_items(skeleton: str, rec: Recommendation, q: UserQuery,
                           ) -> list[tuple[str, str]]:
    """Re-extract a rendered skeleton under the query's context; the result
    should equal the pattern elements after the match (the round-trip check)."""
    tail = rec.pattern.elements[rec.match_offset + 1:]
    if not skeleton.strip():
        return []
    bindings = dict(derive_bindings(rec.pattern.elements))
    bindings.update(q.context.variables)
    if tail and tail[0][0] == "MD":
        source = f"class W {{\n{skeleton}\n}}\n"
    else:
        rtype = next((name for kind, name in tail if kind == "RT"), "void")
        source = f"class W {{\n{rtype} wrap() {{\n{skeleton}\n}}\n}}\n"
    items, _ = extract_items(source, "<skeleton>", context_vars=bindings)
    skip = {ItemKind.TD}
    result = [it.identity for it in items if it.kind not in skip]
    if not (tail and tail[0][0] == "MD"):
        # drop the synthetic wrapper method's own MD item
        result = [ident for ident in result if not (
            ident[0] == "MD" and ident[1].startswith("wrap("))]
    return result
