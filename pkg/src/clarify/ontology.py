"""Domain ontology: a rooted is-a DAG of concepts with definitions.

The ontology is loaded once, validated, and then treated as immutable, so it
is safe to share across threads. Depth, ancestor sets, and the derived
taxonomic similarity are precomputed or cached at load time.

Conventions:
  * depth counts nodes on the shortest upward path to the root (root = 1);
  * the least common subsumer is the deepest shared ancestor, ties broken
    by lexicographically smallest concept id;
  * concept similarity is the Wu-Palmer ratio 2*d(lcs) / (d(a)+d(b)), with
    the shared-depth term capped at min(d(a), d(b)) so that redundant
    shortcut edges (which can make an ancestor deeper than its descendant
    under shortest-path depth) cannot push the score above 1.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field

from .errors import ParseError, UnknownConcept, ValidationError

CONCEPT_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

# Root synthesized when a document has several parentless concepts.
SYNTHETIC_ROOT_ID = "THING"
SYNTHETIC_ROOT_DEFINITION = "top concept"

_TOP_LEVEL_KEYS = {"root", "concepts", "relations"}
_CONCEPT_KEYS = {"id", "label", "definition", "parents"}
_RELATION_KEYS = {"kind", "source", "target"}


@dataclass(frozen=True)
class Concept:
    id: str
    label: str
    definition: str
    parents: frozenset[str] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Relation:
    """Auxiliary typed edge (e.g. part-of); stored and displayed, never scored."""

    kind: str
    source: str
    target: str


class Ontology:
    """Validated concept hierarchy with taxonomic queries.

    Instances are only created by :func:`load_ontology` (or tests building
    documents and loading them); all invariants hold by construction.
    """

    def __init__(self, concepts: dict[str, Concept], relations: tuple[Relation, ...], root: str):
        self._concepts = concepts
        self.relations = relations
        self.root = root
        self._depths = _compute_depths(concepts, root)
        self._ancestors = _compute_ancestors(concepts)

    # -- lookups ------------------------------------------------------------

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self._concepts

    def __len__(self) -> int:
        return len(self._concepts)

    def concept_ids(self) -> list[str]:
        return sorted(self._concepts)

    def concept(self, concept_id: str) -> Concept:
        try:
            return self._concepts[concept_id]
        except KeyError:
            raise UnknownConcept(concept_id) from None

    def definition_of(self, concept_id: str) -> str:
        return self.concept(concept_id).definition

    # -- taxonomy -----------------------------------------------------------

    def depth(self, concept_id: str) -> int:
        self.concept(concept_id)
        return self._depths[concept_id]

    def ancestors(self, concept_id: str) -> frozenset[str]:
        """Reflexive-transitive is-a closure of ``concept_id``."""
        self.concept(concept_id)
        return self._ancestors[concept_id]

    def least_common_subsumer(self, a: str, b: str) -> str:
        common = self.ancestors(a) & self.ancestors(b)
        # Root subsumes everything, so the intersection is never empty.
        return min(common, key=lambda c: (-self._depths[c], c))

    def wu_palmer(self, a: str, b: str) -> float:
        lcs = self.least_common_subsumer(a, b)
        da, db = self._depths[a], self._depths[b]
        shared = min(self._depths[lcs], da, db)
        return 2 * shared / (da + db)

    # -- equality (structural, for round-trip laws) -------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self._concepts == other._concepts
            and self.relations == other.relations
            and self.root == other.root
        )

    def __repr__(self) -> str:
        return f"Ontology({len(self._concepts)} concepts, root={self.root!r})"


# ---------------------------------------------------------------------------
# Loading and validation
# ---------------------------------------------------------------------------


def load_ontology(document: str) -> Ontology:
    """Parse and validate an ontology document (UTF-8 JSON text).

    Raises ParseError for structural problems and ValidationError for
    semantic ones (duplicate ids, dangling parents, cycles, empty
    definitions, unreachable concepts). Loading is deterministic.
    """
    data = _loads_strict(document)
    if not isinstance(data, dict):
        raise ParseError("ontology document must be a JSON object")
    _reject_unknown_keys(data, _TOP_LEVEL_KEYS, "ontology")
    if "concepts" not in data:
        raise ParseError("missing required key", field="concepts")

    concepts = _parse_concepts(data["concepts"])
    relations = _parse_relations(data.get("relations", []), concepts)
    declared_root = data.get("root")
    if declared_root is not None and not isinstance(declared_root, str):
        raise ParseError("root must be a string", field="root")

    _check_definitions(concepts)
    _check_parents(concepts)
    _check_acyclic(concepts)
    concepts, root = _resolve_root(concepts, declared_root)
    return Ontology(concepts, relations, root)


def ontology_to_document(ontology: Ontology) -> dict:
    """Wire/file form of an ontology; concepts sorted by id for stable output."""
    return {
        "root": ontology.root,
        "concepts": [
            {
                "id": c.id,
                "label": c.label,
                "definition": c.definition,
                "parents": sorted(c.parents),
            }
            for c in (ontology.concept(cid) for cid in ontology.concept_ids())
        ],
        "relations": [
            {"kind": r.kind, "source": r.source, "target": r.target} for r in ontology.relations
        ],
    }


def save_ontology(ontology: Ontology) -> str:
    """Serialize; ``load_ontology(save_ontology(o)) == o`` and output is byte-stable."""
    return json.dumps(ontology_to_document(ontology), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Internals
# ---------------------------------------------------------------------------


def _loads_strict(text: str):
    def _reject_constant(name: str):
        raise ParseError(f"non-finite number {name} is not allowed")

    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


def _reject_unknown_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r} in {where}", field=unknown[0])


def _parse_concepts(raw) -> dict[str, Concept]:
    if not isinstance(raw, list):
        raise ParseError("concepts must be a list", field="concepts")
    concepts: dict[str, Concept] = {}
    for i, entry in enumerate(raw):
        where = f"concepts[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("concept must be an object", field=where)
        _reject_unknown_keys(entry, _CONCEPT_KEYS, where)
        cid = entry.get("id")
        if not isinstance(cid, str) or not CONCEPT_ID_RE.match(cid):
            raise ParseError("concept id must match [A-Za-z0-9_.-]+", field=f"{where}.id")
        definition = entry.get("definition")
        if not isinstance(definition, str):
            raise ParseError("definition must be a string", field=f"{where}.definition")
        label = entry.get("label", cid)
        if not isinstance(label, str):
            raise ParseError("label must be a string", field=f"{where}.label")
        parents_raw = entry.get("parents", [])
        if not isinstance(parents_raw, list) or not all(isinstance(p, str) for p in parents_raw):
            raise ParseError("parents must be a list of concept ids", field=f"{where}.parents")
        if cid in concepts:
            raise ValidationError(f"duplicate concept id {cid!r}")
        concepts[cid] = Concept(cid, label, definition, frozenset(parents_raw))
    if not concepts:
        raise ValidationError("ontology must contain at least one concept")
    return concepts


def _parse_relations(raw, concepts: dict[str, Concept]) -> tuple[Relation, ...]:
    if not isinstance(raw, list):
        raise ParseError("relations must be a list", field="relations")
    relations = []
    for i, entry in enumerate(raw):
        where = f"relations[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("relation must be an object", field=where)
        _reject_unknown_keys(entry, _RELATION_KEYS, where)
        try:
            kind, source, target = entry["kind"], entry["source"], entry["target"]
        except KeyError as exc:
            raise ParseError("missing relation key", field=f"{where}.{exc.args[0]}") from None
        if not (isinstance(kind, str) and kind):
            raise ParseError("relation kind must be a non-empty string", field=f"{where}.kind")
        if not isinstance(source, str) or not isinstance(target, str):
            raise ParseError("relation endpoints must be concept ids", field=where)
        if source == target:
            raise ValidationError(f"relation {kind!r} relates {source!r} to itself")
        for endpoint in (source, target):
            if endpoint not in concepts:
                raise ValidationError(f"relation {kind!r} references unknown concept {endpoint!r}")
        relations.append(Relation(kind, source, target))
    return tuple(relations)


def _check_definitions(concepts: dict[str, Concept]) -> None:
    for cid in sorted(concepts):
        if not concepts[cid].definition.strip():
            raise ValidationError(f"concept {cid!r} has an empty definition")


def _check_parents(concepts: dict[str, Concept]) -> None:
    for cid in sorted(concepts):
        for parent in sorted(concepts[cid].parents):
            if parent not in concepts:
                raise ValidationError(f"concept {cid!r} has dangling parent {parent!r}")


def _check_acyclic(concepts: dict[str, Concept]) -> None:
    """Iterative three-color DFS; reports one cycle's node sequence."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {cid: WHITE for cid in concepts}
    for start in sorted(concepts):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, list[str]]] = [(start, sorted(concepts[start].parents))]
        color[start] = GRAY
        path = [start]
        while stack:
            node, pending = stack[-1]
            if pending:
                nxt = pending.pop(0)
                if color[nxt] == GRAY:
                    cycle = path[path.index(nxt):] + [nxt]
                    raise _cycle_error(cycle)
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, sorted(concepts[nxt].parents)))
            else:
                color[node] = BLACK
                path.pop()
                stack.pop()


def _cycle_error(cycle: list[str]) -> ValidationError:
    err = ValidationError("is-a cycle detected: " + " -> ".join(cycle))
    err.cycle = cycle[:-1]
    return err


def _resolve_root(concepts: dict[str, Concept], declared: str | None) -> tuple[dict[str, Concept], str]:
    parentless = sorted(cid for cid, c in concepts.items() if not c.parents)
    if declared is not None:
        if declared not in concepts:
            raise ValidationError(f"declared root {declared!r} is not a concept")
        stray = [cid for cid in parentless if cid != declared]
        if concepts[declared].parents or stray:
            offender = stray[0] if stray else declared
            raise ValidationError(
                f"concept {offender!r} is not reachable from declared root {declared!r}"
            )
        return concepts, declared
    if len(parentless) == 1:
        return concepts, parentless[0]
    # Several top concepts: attach them all under a synthetic root so that
    # depth and the least common subsumer stay total.
    if SYNTHETIC_ROOT_ID in concepts:
        raise ValidationError(
            f"cannot synthesize root: concept id {SYNTHETIC_ROOT_ID!r} is already taken"
        )
    merged = dict(concepts)
    merged[SYNTHETIC_ROOT_ID] = Concept(
        SYNTHETIC_ROOT_ID, "Thing", SYNTHETIC_ROOT_DEFINITION, frozenset()
    )
    for cid in parentless:
        c = merged[cid]
        merged[cid] = Concept(c.id, c.label, c.definition, frozenset({SYNTHETIC_ROOT_ID}))
    return merged, SYNTHETIC_ROOT_ID


def _compute_depths(concepts: dict[str, Concept], root: str) -> dict[str, int]:
    children: dict[str, list[str]] = {cid: [] for cid in concepts}
    for cid, concept in concepts.items():
        for parent in concept.parents:
            children[parent].append(cid)
    depths = {root: 1}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for child in children[node]:
            if child not in depths:
                depths[child] = depths[node] + 1
                queue.append(child)
    return depths


def _compute_ancestors(concepts: dict[str, Concept]) -> dict[str, frozenset[str]]:
    """Reflexive-transitive closure, iterative to survive deep chains."""
    closed: dict[str, frozenset[str]] = {}
    for start in concepts:
        if start in closed:
            continue
        stack = [start]
        while stack:
            node = stack[-1]
            if node in closed:
                stack.pop()
                continue
            missing = [p for p in concepts[node].parents if p not in closed]
            if missing:
                stack.extend(missing)
                continue
            acc = {node}
            for p in concepts[node].parents:
                acc.update(closed[p])
            closed[node] = frozenset(acc)
            stack.pop()
    return closed
