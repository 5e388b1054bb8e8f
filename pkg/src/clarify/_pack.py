"""Packed column layout for the retrieval scan.

``CaseBaseIndex`` turns a case base into flat typed arrays once; each query
is then planned into per-column scalars (weights, query values, symbolic
lookup tables) and scored by the compiled kernel, or by ``scan_py`` when the
extension is unavailable.

The fast path is only an accelerator: whenever a query cannot be planned
exactly (mixed-kind column, differing numeric ranges, unknown query concept,
and so on) planning returns None and the caller falls back to the pairwise
definition in ``similarity``, which also produces the precise error.

Accumulation order equals the pairwise path: merged column names are
iterated in lexicographic order, and features absent from both sides of a
pair contribute nothing. Totals are therefore bit-identical to
``compute_similarity(...).total``.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from .casebase import Case, CaseBase, FlagValue, NumericValue, SymbolicValue, TextValue
from .errors import ClarifyError
from .ontology import Ontology
from .similarity import MISSING_PENALIZE, SimilarityConfig

KIND_NUMERIC = 0
KIND_SYMBOLIC = 1
KIND_FLAG = 2
KIND_TEXT = 3

_KIND_OF = {
    NumericValue: KIND_NUMERIC,
    SymbolicValue: KIND_SYMBOLIC,
    FlagValue: KIND_FLAG,
    TextValue: KIND_TEXT,
}

_UNSET = -1
_INVALID = -2


def _zeros(typecode: str, count: int) -> array:
    return array(typecode, [0]) * count if typecode == "i" else array(typecode, [0.0]) * count


@dataclass
class _Column:
    name: str
    offset: int
    kind: int | None = None  # None -> mixed kinds or inconsistent ranges
    lo: float = 0.0
    hi: float = 0.0
    vocab: dict | None = None  # concept/text -> code, for symbolic/text columns


class CaseBaseIndex:
    """Immutable packed view of one case base snapshot."""

    def __init__(self, base: CaseBase):
        self.n = len(base.entries)
        names = sorted({name for case, _ in base.entries for name in case.features})
        total = len(names) * self.n
        self.presence = array("B", bytes(total))
        self.values = _zeros("d", total)
        self.codes = _zeros("i", total)
        self.columns: dict[str, _Column] = {}

        for j, name in enumerate(names):
            col = _Column(name, offset=j * self.n)
            vocab: dict = {}
            state = _UNSET
            range_set = False
            for i, (case, _) in enumerate(base.entries):
                fv = case.features.get(name)
                if fv is None:
                    continue
                self.presence[col.offset + i] = 1
                kind = _KIND_OF[type(fv)]
                if state == _UNSET:
                    state = kind
                elif state != kind:
                    state = _INVALID
                if state == _INVALID:
                    continue
                if kind == KIND_NUMERIC:
                    if not range_set:
                        col.lo, col.hi = fv.lo, fv.hi
                        range_set = True
                    elif (fv.lo, fv.hi) != (col.lo, col.hi):
                        state = _INVALID
                        continue
                    self.values[col.offset + i] = fv.value
                elif kind == KIND_FLAG:
                    self.values[col.offset + i] = 1.0 if fv.value else 0.0
                else:
                    key = fv.concept if kind == KIND_SYMBOLIC else fv.value
                    self.codes[col.offset + i] = vocab.setdefault(key, len(vocab))
            col.kind = state if state >= 0 else None
            if col.kind in (KIND_SYMBOLIC, KIND_TEXT):
                col.vocab = vocab
            self.columns[name] = col

    def plan(self, query: Case, config: SimilarityConfig, ontology: Ontology):
        """Build kernel inputs for one query, or None to force the fallback."""
        try:
            return self._plan(query, config, ontology)
        except ClarifyError:
            return None

    def _plan(self, query: Case, config: SimilarityConfig, ontology: Ontology):
        merged = sorted(set(self.columns) | set(query.features))
        m = len(merged)
        kinds = _zeros("i", m)
        weights = _zeros("d", m)
        q_present = array("B", bytes(m))
        q_vals = _zeros("d", m)
        q_codes = _zeros("i", m)
        spans = array("d", [1.0]) * m
        col_offsets = array("q", [-1]) * m
        lut_offsets = _zeros("i", m)
        luts = array("d")

        for j, name in enumerate(merged):
            weights[j] = config.weight_for(name)
            col = self.columns.get(name)
            qf = query.features.get(name)
            if col is not None:
                col_offsets[j] = col.offset
            if qf is None:
                continue
            q_present[j] = 1
            if col is None:
                continue  # query-only feature: presence alone drives the math
            if col.kind is None:
                return None  # irregular column faced with a present query value
            kind = _KIND_OF[type(qf)]
            if kind != col.kind:
                return None
            kinds[j] = kind
            if kind == KIND_NUMERIC:
                if (qf.lo, qf.hi) != (col.lo, col.hi) or not col.lo < col.hi:
                    return None
                q_vals[j] = qf.value
                spans[j] = col.hi - col.lo
            elif kind == KIND_FLAG:
                q_vals[j] = 1.0 if qf.value else 0.0
            elif kind == KIND_SYMBOLIC:
                lut_offsets[j] = len(luts)
                for concept, _code in sorted(col.vocab.items(), key=lambda kv: kv[1]):
                    luts.append(ontology.wu_palmer(qf.concept, concept))
            else:
                q_codes[j] = col.vocab.get(qf.value, -1)
        if not luts:
            luts.append(0.0)  # memoryview buffers must be non-empty
        return _Plan(
            kinds,
            weights,
            q_present,
            q_vals,
            q_codes,
            spans,
            col_offsets,
            lut_offsets,
            luts,
            config.missing_policy == MISSING_PENALIZE,
        )


@dataclass
class _Plan:
    kinds: array
    weights: array
    q_present: array
    q_vals: array
    q_codes: array
    spans: array
    col_offsets: array
    lut_offsets: array
    luts: array
    penalize: bool


def scan_py(index: CaseBaseIndex, plan: _Plan) -> tuple[array, array]:
    """Python mirror of the compiled kernel; identical operation order."""
    n = index.n
    totals = _zeros("d", n)
    ok = array("B", bytes(n))
    m = len(plan.kinds)
    presence, values, codes = index.presence, index.values, index.codes
    for i in range(n):
        num = 0.0
        den = 0.0
        for j in range(m):
            off = plan.col_offsets[j]
            p = presence[off + i] if off >= 0 else 0
            qp = plan.q_present[j]
            if qp and p:
                kind = plan.kinds[j]
                w = plan.weights[j]
                if kind == KIND_NUMERIC:
                    s = 1.0 - abs(plan.q_vals[j] - values[off + i]) / plan.spans[j]
                elif kind == KIND_SYMBOLIC:
                    s = plan.luts[plan.lut_offsets[j] + codes[off + i]]
                elif kind == KIND_FLAG:
                    s = 1.0 if values[off + i] == plan.q_vals[j] else 0.0
                else:
                    s = 1.0 if codes[off + i] == plan.q_codes[j] else 0.0
                num += w * s
                den += w
            elif (qp or p) and plan.penalize:
                w = plan.weights[j]
                num += w * 0.0
                den += w
        if den == 0.0:
            ok[i] = 0
            totals[i] = 0.0
        else:
            ok[i] = 1
            totals[i] = num / den
    return totals, ok


def run_scan(index: CaseBaseIndex, plan: _Plan, kernel) -> tuple[array, array]:
    if kernel is None or index.n == 0 or not len(plan.kinds):
        return scan_py(index, plan)
    totals = _zeros("d", index.n)
    ok = array("B", bytes(index.n))
    kernel(
        totals,
        ok,
        index.n,
        plan.kinds,
        plan.weights,
        plan.q_present,
        plan.q_vals,
        plan.q_codes,
        plan.spans,
        plan.col_offsets,
        plan.lut_offsets,
        index.presence,
        index.values,
        index.codes,
        plan.luts,
        plan.penalize,
    )
    return totals, ok
