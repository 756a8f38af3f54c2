"""Scoring against gold: precision/recall/F per top-level category, bruit/silence
error lists, and a deterministic 75/25 corpus split.

Metrics are kept as exact rationals; printing rounds half-up to 2 decimals.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import semmap
from .annotator import SpatialAnnotation
from .textnorm import normalize

TOP = semmap.TOP_LEVEL


class MatchMode(str, enum.Enum):
    TRIGGER_EXACT = "trigger-exact"   # trigger spans equal + top-level category equal
    SPAN_OVERLAP = "span-overlap"     # spans overlap + top-level category equal


@dataclass
class CategoryCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> Fraction:
        return Fraction(self.tp, self.tp + self.fp) if self.tp + self.fp else Fraction(0)

    @property
    def recall(self) -> Fraction:
        return Fraction(self.tp, self.tp + self.fn) if self.tp + self.fn else Fraction(0)

    @property
    def f_measure(self) -> Fraction:
        return f_measure(self.precision, self.recall)


@dataclass(frozen=True)
class BruitRecord:
    doc_id: str
    annotation: SpatialAnnotation
    trigger_text: str
    rule: str | None
    reason: str | None = None


@dataclass(frozen=True)
class SilenceRecord:
    doc_id: str
    annotation: SpatialAnnotation
    trigger_text: str


@dataclass
class EvalReport:
    mode: MatchMode
    categories: dict[str, CategoryCounts] = field(default_factory=dict)
    bruit: list[BruitRecord] = field(default_factory=list)
    silence: list[SilenceRecord] = field(default_factory=list)

    def totals(self) -> CategoryCounts:
        total = CategoryCounts()
        for counts in self.categories.values():
            total.tp += counts.tp
            total.fp += counts.fp
            total.fn += counts.fn
        return total


def precision(tp: int, fp: int) -> Fraction:
    return Fraction(tp, tp + fp) if tp + fp else Fraction(0)


def recall(tp: int, fn: int) -> Fraction:
    return Fraction(tp, tp + fn) if tp + fn else Fraction(0)


def f_measure(p, r) -> Fraction:
    """Harmonic mean 2pr/(p+r); 0 when p+r = 0."""
    p, r = Fraction(p), Fraction(r)
    if not 0 <= p <= 1 or not 0 <= r <= 1:
        raise ValueError("precision and recall must lie in [0, 1]")
    if p + r == 0:
        return Fraction(0)
    return 2 * p * r / (p + r)


def round2(x) -> str:
    """Round half-up to two decimals, printed as 0.XX."""
    scaled = Fraction(x) * 100 + Fraction(1, 2)
    q = scaled.numerator // scaled.denominator
    return f"{q // 100}.{q % 100:02d}"


def _matches(mode: MatchMode, system: SpatialAnnotation, gold: SpatialAnnotation) -> bool:
    if mode is MatchMode.TRIGGER_EXACT:
        return system.trigger == gold.trigger
    return system.span.overlaps(gold.span)


def score(gold_docs, system_docs, mode: MatchMode) -> EvalReport:
    """Greedy one-to-one system-to-gold alignment per document.

    Matching compares top-level categories: the annotation layer keeps leaf
    categories, but scoring happens at topological/projective/directional
    granularity. Unmatched system annotations are bruit (fp), unmatched gold
    annotations are silence (fn).
    """
    mode = MatchMode(mode)
    smap = semmap.default_map()
    gold_by_id = {d.doc_id: d for d in gold_docs}
    sys_by_id = {d.doc_id: d for d in system_docs}
    if set(gold_by_id) != set(sys_by_id):
        missing = sorted(set(gold_by_id) ^ set(sys_by_id))
        raise ValueError(f"document sets differ; unmatched ids: {', '.join(missing)}")
    report = EvalReport(mode=mode, categories={c: CategoryCounts() for c in TOP})
    for doc_id in sorted(gold_by_id):
        gold_doc, sys_doc = gold_by_id[doc_id], sys_by_id[doc_id]
        if gold_doc.text != sys_doc.text:
            raise ValueError(f"document {doc_id}: gold and system texts differ")
        taken: set[int] = set()
        sys_anns = sorted(sys_doc.annotations, key=lambda a: (a.trigger.start, a.span.start))
        gold_anns = list(gold_doc.annotations)
        for ann in sys_anns:
            cat = semmap.top_level(smap, ann.category)
            candidates = [
                (g.span.start, g.trigger.start, idx)
                for idx, g in enumerate(gold_anns)
                if idx not in taken
                and semmap.top_level(smap, g.category) == cat
                and _matches(mode, ann, g)
            ]
            if candidates:
                taken.add(min(candidates)[2])
                report.categories[cat].tp += 1
            else:
                report.categories[cat].fp += 1
                report.bruit.append(
                    BruitRecord(
                        doc_id=doc_id,
                        annotation=ann,
                        trigger_text=normalize(ann.trigger.slice(sys_doc.text))[0],
                        rule=ann.rule,
                        reason="no unmatched gold annotation with this trigger and category",
                    )
                )
        for idx, g in enumerate(gold_anns):
            if idx not in taken:
                cat = semmap.top_level(smap, g.category)
                report.categories[cat].fn += 1
                report.silence.append(
                    SilenceRecord(
                        doc_id=doc_id,
                        annotation=g,
                        trigger_text=normalize(g.trigger.slice(gold_doc.text))[0],
                    )
                )
    return report


def split(doc_ids, seed: int) -> tuple[list, list]:
    """Deterministic shuffle by seed; first ceil(0.75*n) to work, rest to eval."""
    ids = list(doc_ids)
    if not ids:
        raise ValueError("cannot split an empty document list")
    rng = random.Random(seed)
    rng.shuffle(ids)
    k = math.ceil(0.75 * len(ids))
    return ids[:k], ids[k:]


def error_report(report: EvalReport) -> dict:
    """Bruit grouped by (rule, trigger lemma); silence grouped by gold category."""
    bruit_groups: dict[tuple[str, str], int] = {}
    for rec in report.bruit:
        key = (rec.rule or "?", rec.trigger_text)
        bruit_groups[key] = bruit_groups.get(key, 0) + 1
    smap = semmap.default_map()
    silence_groups: dict[str, int] = {}
    for rec in report.silence:
        cat = semmap.top_level(smap, rec.annotation.category)
        silence_groups[cat] = silence_groups.get(cat, 0) + 1
    return {
        "bruit": [
            {"rule": rule, "lemma": lemma, "count": count}
            for (rule, lemma), count in sorted(bruit_groups.items())
        ],
        "silence": [
            {"category": cat, "count": count} for cat, count in sorted(silence_groups.items())
        ],
    }


def format_table(report: EvalReport) -> str:
    """Human-readable table: category, R, P, F to two decimals."""
    lines = [f"{'':<14}{'R':>8}{'P':>8}{'F':>8}"]
    for cat in TOP:
        c = report.categories[cat]
        lines.append(f"{cat:<14}{round2(c.recall):>8}{round2(c.precision):>8}{round2(c.f_measure):>8}")
    t = report.totals()
    lines.append(f"{'OVERALL':<14}{round2(t.recall):>8}{round2(t.precision):>8}{round2(t.f_measure):>8}")
    return "\n".join(lines)


def report_to_json(report: EvalReport) -> dict:
    """Machine-readable report with raw counts and error lists."""
    return {
        "mode": report.mode.value,
        "categories": {
            cat: {
                "tp": c.tp,
                "fp": c.fp,
                "fn": c.fn,
                "precision": round2(c.precision),
                "recall": round2(c.recall),
                "f_measure": round2(c.f_measure),
            }
            for cat, c in report.categories.items()
        },
        "bruit": [
            {
                "doc_id": r.doc_id,
                "trigger": r.trigger_text,
                "category": r.annotation.category,
                "rule": r.rule,
                "reason": r.reason,
                "start": r.annotation.span.start,
                "end": r.annotation.span.end,
            }
            for r in report.bruit
        ],
        "silence": [
            {
                "doc_id": r.doc_id,
                "trigger": r.trigger_text,
                "category": r.annotation.category,
                "start": r.annotation.span.start,
                "end": r.annotation.span.end,
            }
            for r in report.silence
        ],
        "error_groups": error_report(report),
    }
