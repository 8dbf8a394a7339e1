"""The mined pattern repository: a client-side XML file, canonically
serialized so identical repositories produce identical bytes.

Numbers display at two decimals (half-up) while exact rational num/den
attributes make the round trip lossless. The parser is strict: any
deviation from the schema grammar is a SchemaViolation naming the element
path.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable

from .items import ItemKind
from .mining import SequentialPattern, pattern_sort_key


class SchemaViolation(Exception):
    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True)
class MinedRepository:
    patterns: tuple[SequentialPattern, ...]
    corpus_label: str = ""
    created_at: str = "1970-01-01T00:00:00Z"
    min_support_used: int = 1

    def __len__(self) -> int:
        return len(self.patterns)


def make_repository(patterns: Iterable[SequentialPattern], corpus_label: str = "",
                    created_at: str = "1970-01-01T00:00:00Z",
                    min_support_used: int = 1) -> MinedRepository:
    """Sort by ranking (desc, with tie-breaks) and drop duplicate element-lists."""
    seen: set[tuple] = set()
    unique: list[SequentialPattern] = []
    for p in sorted(patterns, key=pattern_sort_key):
        if p.elements not in seen:
            seen.add(p.elements)
            unique.append(p)
    return MinedRepository(tuple(unique), corpus_label, created_at, min_support_used)


# --- rendering -----------------------------------------------------------------

def _two_dp(value: Fraction) -> str:
    d = Decimal(value.numerator) / Decimal(value.denominator)
    return str(d.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def _esc_attr(text: str) -> str:
    return _esc(text).replace('"', "&quot;")


def _rational_parts(p: SequentialPattern) -> tuple[int, int, int, int]:
    """Unreduced (support num, den, confidence num, den) recovered from the
    exact fields; num is always the raw support count."""
    count = p.support_count
    db_size = count * p.support_ratio.denominator // p.support_ratio.numerator
    if p.k == 1 or p.confidence == 0:
        prefix_count = count
    else:
        prefix_count = count * p.confidence.denominator // p.confidence.numerator
    return count, db_size, count, prefix_count


def serialize(repo: MinedRepository) -> bytes:
    """Canonical document bytes: UTF-8, LF, 2-space indent, fixed attribute order."""
    out: list[str] = []
    out.append(
        f'<esdp-repository version="1" corpus="{_esc_attr(repo.corpus_label)}"'
        f' created="{_esc_attr(repo.created_at)}"'
        f' min-support="{repo.min_support_used}">'
    )
    if not repo.patterns:
        out.append("  <patterns/>")
    else:
        out.append("  <patterns>")
        for p in repo.patterns:
            num, den, cnum, cden = _rational_parts(p)
            out.append(f'    <pattern kind="{p.kind}" k="{p.k}">')
            out.append(f'      <support num="{num}" den="{den}">{_two_dp(p.support_ratio)}</support>')
            out.append(f'      <confidence num="{cnum}" den="{cden}">{_two_dp(p.confidence)}</confidence>')
            out.append(f"      <ranking>{_two_dp(p.ranking)}</ranking>")
            out.append("      <sequence>")
            for i, (kind, name) in enumerate(p.elements, start=1):
                out.append(f'        <s i="{i}" kind="{kind}">{_esc(name)}</s>')
            out.append("      </sequence>")
            out.append("    </pattern>")
        out.append("  </patterns>")
    out.append("</esdp-repository>")
    out.append("")
    return "\n".join(out).encode("utf-8")


# --- parsing -------------------------------------------------------------------

_VALID_KINDS = {k.value for k in ItemKind}


def _require(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise SchemaViolation(message, path)


def _int_attr(el: ET.Element, name: str, path: str) -> int:
    raw = el.get(name)
    _require(raw is not None, f"missing attribute {name!r}", path)
    _require(raw.isdigit(), f"non-numeric attribute {name}={raw!r}", path)
    return int(raw)


def _check_attrs(el: ET.Element, allowed: set[str], path: str) -> None:
    extra = set(el.attrib) - allowed
    _require(not extra, f"unknown attribute(s) {sorted(extra)}", path)


def _no_stray_text(el: ET.Element, path: str) -> None:
    _require(not (el.text or "").strip(), "unexpected text content", path)
    for child in el:
        _require(not (child.tail or "").strip(), "unexpected trailing text", path)


def _parse_ratio_element(el: ET.Element, path: str) -> tuple[int, int]:
    _check_attrs(el, {"num", "den"}, path)
    num = _int_attr(el, "num", path)
    den = _int_attr(el, "den", path)
    _require(den >= 1, "den must be >= 1", path)
    _require(1 <= num <= den, "num must be within 1..den", path)
    text = (el.text or "").strip()
    _require(text == _two_dp(Fraction(num, den)),
             f"display value {text!r} inconsistent with {num}/{den}", path)
    return num, den


def parse(data: bytes) -> MinedRepository:
    """Parse canonical repository bytes; SchemaViolation on any deviation."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SchemaViolation(f"not well-formed XML: {exc}") from None
    path = "/esdp-repository"
    _require(root.tag == "esdp-repository", f"unexpected root element {root.tag!r}", path)
    _check_attrs(root, {"version", "corpus", "created", "min-support"}, path)
    _require(root.get("version") == "1", f"unsupported version {root.get('version')!r}", path)
    _require(root.get("corpus") is not None, "missing attribute 'corpus'", path)
    _require(root.get("created") is not None, "missing attribute 'created'", path)
    min_support = _int_attr(root, "min-support", path)
    _require(min_support >= 1, "min-support must be >= 1", path)
    _no_stray_text(root, path)

    children = list(root)
    _require(len(children) == 1 and children[0].tag == "patterns",
             "expected exactly one <patterns> element", path)
    patterns_el = children[0]
    ppath = path + "/patterns"
    _check_attrs(patterns_el, set(), ppath)
    _no_stray_text(patterns_el, ppath)

    patterns: list[SequentialPattern] = []
    seen: set[tuple] = set()
    for idx, pat_el in enumerate(patterns_el, start=1):
        epath = f"{ppath}/pattern[{idx}]"
        _require(pat_el.tag == "pattern", f"unknown element {pat_el.tag!r}", epath)
        _check_attrs(pat_el, {"kind", "k"}, epath)
        kind = pat_el.get("kind")
        _require(kind in _VALID_KINDS, f"unknown item kind {kind!r}", epath)
        k = _int_attr(pat_el, "k", epath)
        _require(k >= 1, "k must be >= 1", epath)
        _no_stray_text(pat_el, epath)

        sub = list(pat_el)
        _require([c.tag for c in sub] == ["support", "confidence", "ranking", "sequence"],
                 "expected children support, confidence, ranking, sequence", epath)
        support_el, conf_el, ranking_el, seq_el = sub

        num, den = _parse_ratio_element(support_el, epath + "/support")
        cnum, cden = _parse_ratio_element(conf_el, epath + "/confidence")
        _require(cnum == num, "confidence numerator must equal the support count",
                 epath + "/confidence")

        _check_attrs(ranking_el, set(), epath + "/ranking")
        ranking = k * Fraction(num, den)
        rtext = (ranking_el.text or "").strip()
        _require(rtext == _two_dp(ranking),
                 f"ranking {rtext!r} inconsistent with k * support", epath + "/ranking")

        _check_attrs(seq_el, set(), epath + "/sequence")
        _no_stray_text(seq_el, epath + "/sequence")
        s_children = list(seq_el)
        _require(len(s_children) == k, f"sequence holds {len(s_children)} items, k={k}",
                 epath + "/sequence")
        elements: list[tuple[str, str]] = []
        for pos, s_el in enumerate(s_children, start=1):
            spath = f"{epath}/sequence/s[{pos}]"
            _require(s_el.tag == "s", f"unknown element {s_el.tag!r}", spath)
            _check_attrs(s_el, {"i", "kind"}, spath)
            _require(_int_attr(s_el, "i", spath) == pos, "position index out of order", spath)
            s_kind = s_el.get("kind")
            _require(s_kind in _VALID_KINDS, f"unknown item kind {s_kind!r}", spath)
            name = (s_el.text or "").strip()
            _require(bool(name), "empty item name", spath)
            _require(len(s_el) == 0, "unexpected nested element", spath)
            elements.append((s_kind, name))
        _require(elements[0][0] == kind, "pattern kind must match its first item", epath)
        key = tuple(elements)
        _require(key not in seen, "duplicate pattern element-list", epath)
        seen.add(key)

        patterns.append(SequentialPattern(
            elements=key,
            support_count=num,
            support_ratio=Fraction(num, den),
            confidence=Fraction(cnum, cden),
            ranking=ranking,
        ))

    return MinedRepository(
        patterns=tuple(patterns),
        corpus_label=root.get("corpus", ""),
        created_at=root.get("created", ""),
        min_support_used=min_support,
    )


# --- transaction documents ---------------------------------------------------------
# Same schema family as the pattern repository, with <transaction> elements.

def serialize_transactions(records, corpus_label: str = "",
                           created_at: str = "1970-01-01T00:00:00Z") -> bytes:
    """Canonical bytes for a transaction database; items sorted for
    set-determinism."""
    out = [
        f'<esdp-transactions version="1" corpus="{_esc_attr(corpus_label)}"'
        f' created="{_esc_attr(created_at)}">'
    ]
    records = list(records)
    if not records:
        out.append("  <transactions/>")
    else:
        out.append("  <transactions>")
        for rec in records:
            items = sorted(rec.items)
            out.append(f'    <transaction block="{_esc_attr(rec.block_id)}" '
                       f'n="{len(items)}">')
            for i, (kind, name) in enumerate(items, start=1):
                out.append(f'      <s i="{i}" kind="{kind}">{_esc(name)}</s>')
            out.append("    </transaction>")
        out.append("  </transactions>")
    out.append("</esdp-transactions>")
    out.append("")
    return "\n".join(out).encode("utf-8")


def parse_transactions(data: bytes):
    """Parse canonical transaction bytes; SchemaViolation on any deviation."""
    from .transactions import TransactionRecord

    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SchemaViolation(f"not well-formed XML: {exc}") from None
    path = "/esdp-transactions"
    _require(root.tag == "esdp-transactions", f"unexpected root element {root.tag!r}", path)
    _check_attrs(root, {"version", "corpus", "created"}, path)
    _require(root.get("version") == "1", f"unsupported version {root.get('version')!r}", path)
    _no_stray_text(root, path)
    children = list(root)
    _require(len(children) == 1 and children[0].tag == "transactions",
             "expected exactly one <transactions> element", path)
    records = []
    seen_blocks: set[str] = set()
    for idx, el in enumerate(children[0], start=1):
        epath = f"{path}/transactions/transaction[{idx}]"
        _require(el.tag == "transaction", f"unknown element {el.tag!r}", epath)
        _check_attrs(el, {"block", "n"}, epath)
        block = el.get("block")
        _require(bool(block), "missing attribute 'block'", epath)
        _require(block not in seen_blocks, f"duplicate block {block!r}", epath)
        seen_blocks.add(block)
        n = _int_attr(el, "n", epath)
        s_children = list(el)
        _require(len(s_children) == n, f"transaction holds {len(s_children)} items, n={n}",
                 epath)
        _require(n >= 1, "empty transaction", epath)
        items = set()
        for pos, s_el in enumerate(s_children, start=1):
            spath = f"{epath}/s[{pos}]"
            _require(s_el.tag == "s", f"unknown element {s_el.tag!r}", spath)
            _check_attrs(s_el, {"i", "kind"}, spath)
            _require(_int_attr(s_el, "i", spath) == pos, "position index out of order", spath)
            kind = s_el.get("kind")
            _require(kind in _VALID_KINDS, f"unknown item kind {kind!r}", spath)
            name = (s_el.text or "").strip()
            _require(bool(name), "empty item name", spath)
            items.add((kind, name))
        _require(len(items) == n, "duplicate items in transaction", epath)
        records.append(TransactionRecord(block, frozenset(items)))
    return records


# --- incremental update ----------------------------------------------------------

def merge_update(existing: MinedRepository, fresh: Iterable[SequentialPattern],
                 full_replacement: bool = False, corpus_label: str | None = None,
                 created_at: str | None = None,
                 min_support_used: int | None = None) -> MinedRepository:
    """Fold freshly mined patterns into a repository.

    Patterns with identical element-lists take the fresh scores; new ones
    are inserted; nothing is deleted unless full_replacement is set. The
    result is re-sorted and carries updated metadata where given.
    """
    fresh = list(fresh)
    if full_replacement:
        merged: dict[tuple, SequentialPattern] = {}
    else:
        merged = {p.elements: p for p in existing.patterns}
    for p in fresh:
        merged[p.elements] = p
    return make_repository(
        merged.values(),
        corpus_label=existing.corpus_label if corpus_label is None else corpus_label,
        created_at=existing.created_at if created_at is None else created_at,
        min_support_used=existing.min_support_used if min_support_used is None else min_support_used,
    )
