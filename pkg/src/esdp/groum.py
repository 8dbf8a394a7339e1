"""Graph-based object usage models and frequent induced-subgraph mining.

A groum is a labeled DAG built from one method's action items (calls,
creations, field writes) and control regions. Mining grows patterns one
node at a time by extending every stored occurrence with an adjacent node
of a frequent label, groups the candidates into isomorphism classes
(structural vector prefilter, exact backtracking check), and keeps classes
whose independent-occurrence frequency reaches the threshold.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from .items import ControlMarker, ItemKind, MarkerKind, SourceItem, simple_name


class MalformedControlNesting(Exception):
    pass


class InvalidThreshold(Exception):
    pass


_ACTION_KINDS = frozenset(
    {ItemKind.CI, ItemKind.MI, ItemKind.FA, ItemKind.CTI, ItemKind.SCI}
)

# exact independent-set search above this many occurrences is replaced by a
# greedy lower bound
EXACT_OCCURRENCE_LIMIT = 20


@dataclass(frozen=True)
class GroumNode:
    id: int
    label: str
    role: str  # "action" | "control"


@dataclass(frozen=True)
class Groum:
    nodes: tuple[GroumNode, ...]
    edges: frozenset[tuple[int, int]]
    origin: str = ""

    def __len__(self) -> int:
        return len(self.nodes)

    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nodes)


@dataclass
class GroumPattern:
    representative: Groum
    occurrences: dict[int, list[frozenset[int]]]  # graph index -> node sets
    frequency: int
    size: int
    frequency_is_exact: bool = True


def _upper_first(text: str) -> str:
    return text[:1].upper() + text[1:] if text else text


def _action_label(item: SourceItem) -> str:
    """Action node label: Type.method, Type.field or Type.<init>."""
    name = item.name
    if item.kind is ItemKind.CI:
        type_part = name.split("(", 1)[0]
        return f"{simple_name(type_part)}.<init>"
    if item.kind is ItemKind.CTI:
        # enclosing "pkg.Cls.m()" -> its class
        cls = item.enclosing.rsplit(".", 2)[-2] if item.enclosing.count(".") >= 2 \
            else item.enclosing.split(".")[0]
        return f"{cls}.<init>"
    if item.kind is ItemKind.SCI:
        return "super.<init>"
    head = name.split("(", 1)[0]
    if "." in head:
        receiver, member = head.rsplit(".", 1)
        return f"{_upper_first(simple_name(receiver))}.{member}"
    return head


def _receiver_tag(item: SourceItem) -> str | None:
    """Object identity proxy for data-dependency edges: the lower-camel
    receiver/created-type tag, or None when nothing shareable."""
    from .items import lower_camel

    name = item.name
    if item.kind is ItemKind.CI:
        return lower_camel(simple_name(name.split("(", 1)[0]))
    if item.kind is ItemKind.CTI:
        return "this"
    if item.kind is ItemKind.SCI:
        return "super"
    head = name.split("(", 1)[0]
    if "." not in head:
        return None
    receiver = head.rsplit(".", 1)[0]
    if receiver == "unknown":
        return None
    return lower_camel(simple_name(receiver))


def build_groum(items: Sequence[SourceItem], markers: Sequence[ControlMarker] = (),
                origin: str = "") -> Groum:
    """DAG over one method's action items and control regions.

    Edge a->b when a precedes b and either they share a receiver tag with no
    use between (data dependency) or b immediately follows a (usage order);
    transitive edges are omitted.
    """
    _check_nesting(markers)
    entries: list[tuple[tuple[int, int, int], str, str, str | None]] = []
    for it in items:
        if it.kind in _ACTION_KINDS:
            entries.append(((it.line, 1, 0), _action_label(it), "action", _receiver_tag(it)))
    for m in markers:
        if m.kind is MarkerKind.IF_BEGIN:
            entries.append(((m.line, 0, 0), "IF", "control", None))
        elif m.kind is MarkerKind.LOOP_BEGIN:
            entries.append(((m.line, 0, 0), "LOOP", "control", None))
    entries.sort(key=lambda e: e[0])

    nodes = tuple(GroumNode(i, label, role) for i, (_, label, role, _) in enumerate(entries))
    edges: set[tuple[int, int]] = set()
    for i in range(len(entries) - 1):
        edges.add((i, i + 1))
    last_use: dict[str, int] = {}
    for i, (_, _, _, tag) in enumerate(entries):
        if tag is None:
            continue
        if tag in last_use:
            edges.add((last_use[tag], i))
        last_use[tag] = i
    return Groum(nodes, frozenset(edges), origin=origin or (items[0].enclosing if items else ""))


def _check_nesting(markers: Sequence[ControlMarker]) -> None:
    stack: list[MarkerKind] = []
    pairs = {MarkerKind.IF_END: MarkerKind.IF_BEGIN, MarkerKind.LOOP_END: MarkerKind.LOOP_BEGIN}
    for m in markers:
        if m.kind in (MarkerKind.IF_BEGIN, MarkerKind.LOOP_BEGIN):
            stack.append(m.kind)
        else:
            if not stack or stack[-1] is not pairs[m.kind]:
                raise MalformedControlNesting(f"unmatched {m.kind.value} at line {m.line}")
            stack.pop()
    if stack:
        raise MalformedControlNesting(f"unclosed {stack[-1].value}")


def build_groums_for_methods(items: Sequence[SourceItem],
                             markers: Sequence[ControlMarker]) -> list[Groum]:
    """One groum per method block that holds at least one action item."""
    by_method: dict[str, list[SourceItem]] = {}
    marks: dict[str, list[ControlMarker]] = {}
    for it in items:
        if it.enclosing.endswith("()"):
            by_method.setdefault(it.enclosing, []).append(it)
    for m in markers:
        marks.setdefault(m.enclosing, []).append(m)
    groums = []
    for path in sorted(by_method):
        g = build_groum(by_method[path], marks.get(path, ()), origin=path)
        if g.nodes:
            groums.append(g)
    return groums


# --- structural vectors and isomorphism ------------------------------------------

def exas_vector(g: Groum, node_ids: Iterable[int] | None = None) -> Counter:
    """Multiset of label paths of length <= 2: single labels plus the
    (from,to) label pair of every edge. Equal vectors are necessary for
    label-isomorphism."""
    if node_ids is None:
        labels = {n.id: n.label for n in g.nodes}
        edges = g.edges
    else:
        keep = set(node_ids)
        labels = {n.id: n.label for n in g.nodes if n.id in keep}
        edges = {(a, b) for a, b in g.edges if a in keep and b in keep}
    vec: Counter = Counter()
    for label in labels.values():
        vec[(label,)] += 1
    for a, b in edges:
        vec[(labels[a], labels[b])] += 1
    return vec


def induced_subgraph(g: Groum, node_ids: Iterable[int]) -> Groum:
    keep = sorted(set(node_ids))
    remap = {old: new for new, old in enumerate(keep)}
    by_id = {n.id: n for n in g.nodes}
    nodes = tuple(GroumNode(remap[i], by_id[i].label, by_id[i].role) for i in keep)
    edges = frozenset((remap[a], remap[b]) for a, b in g.edges
                      if a in remap and b in remap)
    return Groum(nodes, edges, origin=g.origin)


def label_isomorphic(g1: Groum, g2: Groum) -> bool:
    """Exact check: some node bijection preserves labels and edges both ways.
    The structural vector is only a prefilter."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return False
    if exas_vector(g1) != exas_vector(g2):
        return False
    n = len(g1.nodes)
    adj1 = {(a, b) for a, b in g1.edges}
    adj2 = {(a, b) for a, b in g2.edges}
    deg1 = _degree_profile(g1)
    deg2 = _degree_profile(g2)
    candidates = [
        [m.id for m in g2.nodes if m.label == node.label and deg2[m.id] == deg1[node.id]]
        for node in g1.nodes
    ]
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(i: int) -> bool:
        if i == n:
            return True
        a = g1.nodes[i].id
        for b in candidates[i]:
            if b in used:
                continue
            ok = True
            for a2, b2 in mapping.items():
                if ((a, a2) in adj1) != ((b, b2) in adj2) or \
                   ((a2, a) in adj1) != ((b2, b) in adj2):
                    ok = False
                    break
            if ok:
                mapping[a] = b
                used.add(b)
                if backtrack(i + 1):
                    return True
                del mapping[a]
                used.discard(b)
        return False

    return backtrack(0)


def _degree_profile(g: Groum) -> dict[int, tuple[int, int]]:
    indeg = Counter(b for _, b in g.edges)
    outdeg = Counter(a for a, _ in g.edges)
    return {n.id: (indeg[n.id], outdeg[n.id]) for n in g.nodes}


def canonical_form(g: Groum) -> tuple:
    """Order-independent encoding: equal forms iff label-isomorphic.

    Nodes are partitioned by (label, in-degree, out-degree); the minimum
    serialized adjacency over permutations within the partition cells is
    the canonical key. Cells stay tiny for desk-scale patterns.
    """
    deg = _degree_profile(g)
    keyed = sorted(g.nodes, key=lambda n: (n.label, deg[n.id]))
    cells: list[list[int]] = []
    for node in keyed:
        key = (node.label, deg[node.id])
        if cells and _cell_key(g, cells[-1][0], deg) == key:
            cells[-1].append(node.id)
        else:
            cells.append([node.id])
    best: tuple | None = None
    for ordering in _cell_orderings(cells):
        remap = {old: new for new, old in enumerate(ordering)}
        edges = tuple(sorted((remap[a], remap[b]) for a, b in g.edges))
        if best is None or edges < best:
            best = edges
    labels = tuple(sorted((n.label, deg[n.id]) for n in g.nodes))
    return (labels, best)


def _cell_key(g: Groum, node_id: int, deg) -> tuple:
    node = next(n for n in g.nodes if n.id == node_id)
    return (node.label, deg[node_id])


def _cell_orderings(cells: list[list[int]]):
    if not cells:
        yield []
        return
    head, rest = cells[0], cells[1:]
    for perm in permutations(head):
        for tail in _cell_orderings(rest):
            yield list(perm) + tail


# --- frequency: maximum independent occurrences ----------------------------------

def independent_occurrence_count(occurrences: Sequence[frozenset[int]],
                                 ) -> tuple[int, bool]:
    """Maximum number of pairwise node-disjoint occurrences.

    Exact (branch and bound) up to EXACT_OCCURRENCE_LIMIT occurrences;
    greedy in first-seen order beyond that, flagged as a lower bound.
    """
    occs = list(occurrences)
    n = len(occs)
    if n == 0:
        return 0, True
    if n > EXACT_OCCURRENCE_LIMIT:
        taken: list[frozenset[int]] = []
        used: set[int] = set()
        for occ in occs:
            if not (occ & used):
                taken.append(occ)
                used |= occ
        return len(taken), False
    conflict = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if occs[i] & occs[j]:
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i

    def mis(remaining: int) -> int:
        if remaining == 0:
            return 0
        v = (remaining & -remaining).bit_length() - 1
        without = mis(remaining & ~(1 << v))
        with_v = 1 + mis(remaining & ~(conflict[v] | (1 << v)))
        return max(without, with_v)

    return mis((1 << n) - 1), True


def frequency(occurrences_per_graph: dict[int, Sequence[frozenset[int]]],
              ) -> tuple[int, bool]:
    """Dataset frequency: sum of per-graph independent occurrence counts."""
    total = 0
    exact = True
    for occs in occurrences_per_graph.values():
        f_i, is_exact = independent_occurrence_count(occs)
        total += f_i
        exact = exact and is_exact
    return total, exact


# --- pattern exploration -----------------------------------------------------------

def patt_explorer(dataset: Sequence[Groum], sigma: int) -> list[GroumPattern]:
    """All frequent induced-subgraph patterns of the dataset.

    Growth is seeded with the frequent single-label patterns; each pattern's
    full occurrence set is extended by every adjacent node carrying a
    frequent label, candidates are partitioned into isomorphism classes and
    classes meeting the threshold recurse. Output is deduplicated by
    canonical form and ordered by (size, canonical form).
    """
    if sigma < 1:
        raise InvalidThreshold(f"sigma must be >= 1, got {sigma}")
    dataset = list(dataset)
    if not dataset:
        return []

    neighbors: list[dict[int, set[int]]] = []
    for g in dataset:
        adj: dict[int, set[int]] = {n.id: set() for n in g.nodes}
        for a, b in g.edges:
            adj[a].add(b)
            adj[b].add(a)
        neighbors.append(adj)

    # size-1 patterns: distinct single nodes are always disjoint
    unit_occs: dict[str, dict[int, list[frozenset[int]]]] = {}
    for gi, g in enumerate(dataset):
        for node in g.nodes:
            unit_occs.setdefault(node.label, {}).setdefault(gi, []).append(
                frozenset([node.id]))
    frequent_labels: dict[str, dict[int, list[frozenset[int]]]] = {}
    results: list[GroumPattern] = []
    explored: dict[tuple, GroumPattern] = {}
    for label in sorted(unit_occs):
        occs = unit_occs[label]
        freq = sum(len(v) for v in occs.values())
        if freq >= sigma:
            gi = min(occs)
            rep = induced_subgraph(dataset[gi], next(iter(occs[gi])))
            pattern = GroumPattern(rep, occs, freq, 1, True)
            frequent_labels[label] = occs
            explored[canonical_form(rep)] = pattern
            results.append(pattern)

    def explore(pattern: GroumPattern) -> None:
        for label in sorted(frequent_labels):
            # P (+) U: every occurrence X extended by an adjacent node Y of
            # the unit label, with all connecting edges (induced extension)
            candidates: dict[int, set[frozenset[int]]] = {}
            for gi, occs in pattern.occurrences.items():
                g = dataset[gi]
                node_labels = {n.id: n.label for n in g.nodes}
                for occ in occs:
                    adjacent: set[int] = set()
                    for v in occ:
                        adjacent |= neighbors[gi][v]
                    for y in adjacent - occ:
                        if node_labels[y] == label:
                            candidates.setdefault(gi, set()).add(occ | {y})
            if not candidates:
                continue
            for cls in _isomorphism_classes(dataset, candidates):
                freq, exact = frequency(cls.occurrences)
                if freq < sigma:
                    continue
                cls.frequency = freq
                cls.frequency_is_exact = exact
                key = canonical_form(cls.representative)
                if key in explored:
                    continue
                explored[key] = cls
                results.append(cls)
                explore(cls)

    for pattern in list(results):
        explore(pattern)

    results.sort(key=lambda p: (p.size, canonical_form(p.representative)))
    return results


def _isomorphism_classes(dataset: Sequence[Groum],
                         candidates: dict[int, set[frozenset[int]]],
                         ) -> list[GroumPattern]:
    """Partition candidate subgraphs into label-isomorphism classes."""
    classes: list[tuple[Counter, Groum, dict[int, list[frozenset[int]]]]] = []
    for gi in sorted(candidates):
        for occ in sorted(candidates[gi], key=sorted):
            sub = induced_subgraph(dataset[gi], occ)
            vec = exas_vector(sub)
            for cvec, crep, coccs in classes:
                if cvec == vec and label_isomorphic(crep, sub):
                    coccs.setdefault(gi, []).append(occ)
                    break
            else:
                classes.append((vec, sub, {gi: [occ]}))
    return [
        GroumPattern(rep, occs, 0, len(rep.nodes), True)
        for _, rep, occs in classes
    ]


# --- reporting -----------------------------------------------------------------

def dump_groum(g: Groum) -> str:
    """Line-oriented text form: node/edge lines."""
    lines = [f"node {n.id} {n.label}" for n in g.nodes]
    lines += [f"edge {a} {b}" for a, b in sorted(g.edges)]
    return "\n".join(lines)
