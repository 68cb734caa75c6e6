"""Corpus-to-dataset pipeline: eligibility filters, split assignment,
example construction, and corpus statistics.

Every candidate examined is accounted for exactly once per task run: it
either becomes an example or lands in the rejection map under one primary
reason code. Candidates are pages (page description), sections (section
summarization), or images (image captioning); a record that cannot be parsed
at all is one candidate rejected as parse_error.

Pages may be processed in parallel (PREFIX_GLOBAL_THREADS, default 1).
Per-page work is independent and results are merged in page order, so output
bytes are identical at any thread count.
"""

from __future__ import annotations

import hashlib
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

from .page import MalformedRecord, Page, SectionClass, is_content_section
from .sequence import (
    REASON_LIST_HEAVY,
    REASON_MISSING_DESCRIPTION,
    REASON_PARSE_ERROR,
    REASON_TOO_FEW_CONTENT_SECTIONS,
    PageDescPrefix,
    Task,
    TaskExample,
    build_image_caption_input,
    build_page_description_input,
    build_section_summarization_input,
    check_image_caption,
    check_section_summarization,
)

DEFAULT_CONTENT_SECTION_THRESHOLD = 2
THREADS_ENV_VAR = "PREFIX_GLOBAL_THREADS"

TRAIN_CUT = 0.90
VAL_CUT = 0.95


def assign_split(url: str) -> str:
    """Deterministic page-level split from a stable 64-bit hash of the URL:
    [0, 0.90) train, [0.90, 0.95) val, rest test."""
    if not url:
        raise ValueError("url must be nonempty")
    digest = hashlib.sha256(url.encode("utf-8")).digest()
    x = int.from_bytes(digest[:8], "big") / 2**64
    if x < TRAIN_CUT:
        return "train"
    if x < VAL_CUT:
        return "val"
    return "test"


def filter_page_description(
    page: Page, threshold: int = DEFAULT_CONTENT_SECTION_THRESHOLD
) -> tuple[bool, str | None]:
    """Page eligibility for the description task. Checks run in a fixed
    order and the first failure is the reason: list_of URL, missing
    description, then fewer than `threshold` content sections."""
    if "list_of" in page.url.lower():
        return False, REASON_LIST_HEAVY
    if not page.raw_description:
        return False, REASON_MISSING_DESCRIPTION
    if len(page.content_sections()) < threshold:
        return False, REASON_TOO_FEW_CONTENT_SECTIONS
    return True, None


def filter_section_summarization(page: Page, idx: int) -> tuple[bool, str | None]:
    """Section eligibility: not the root, no table/list, >= 5 sentences."""
    reason = check_section_summarization(page, idx)
    return reason is None, reason


def filter_image_caption(img) -> tuple[bool, str | None]:
    """Image eligibility: quality-set member, jpeg/png, >= 3-word reference."""
    reason = check_image_caption(img)
    return reason is None, reason


@dataclass
class FilterReport:
    task: Task
    pages_in: int = 0
    candidates: int = 0
    examples_out: int = 0
    rejections: dict = field(default_factory=dict)
    splits: dict = field(default_factory=lambda: {"train": 0, "val": 0, "test": 0})

    def reject(self, reason: str) -> None:
        self.rejections[reason] = self.rejections.get(reason, 0) + 1

    def accounted(self) -> bool:
        return self.examples_out + sum(self.rejections.values()) == self.candidates

    def to_dict(self) -> dict:
        return {
            "task": self.task.value,
            "pages_in": self.pages_in,
            "candidates": self.candidates,
            "examples_out": self.examples_out,
            "rejections": {k: self.rejections[k] for k in sorted(self.rejections)},
            "splits": dict(self.splits),
        }


class RoutedExample(NamedTuple):
    split: str
    example: TaskExample


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _page_outcomes(item, task, threshold, variant):
    """One page's (examples, rejection reasons, candidate count)."""
    if isinstance(item, MalformedRecord):
        return [], [REASON_PARSE_ERROR], 1, False
    page = item
    if task is Task.PAGE_DESCRIPTION:
        ok, reason = filter_page_description(page, threshold)
        if not ok:
            return [], [reason], 1, True
        example = build_page_description_input(page, variant=variant)
        return [RoutedExample(page.split, example)], [], 1, True
    if task is Task.SECTION_SUMMARIZATION:
        examples, reasons = [], []
        for idx in range(len(page.sections)):
            ok, reason = filter_section_summarization(page, idx)
            if ok:
                examples.append(RoutedExample(page.split, build_section_summarization_input(page, idx)))
            else:
                reasons.append(reason)
        return examples, reasons, len(page.sections), True
    examples, reasons = [], []
    n_images = 0
    for sec in page.sections:
        for pos, img in enumerate(sec.images):
            n_images += 1
            ok, reason = filter_image_caption(img)
            if ok:
                examples.append(RoutedExample(page.split, build_image_caption_input(page, sec.index, pos)))
            else:
                reasons.append(reason)
    return examples, reasons, n_images, True


def build_dataset(
    source,
    task: Task,
    threshold: int = DEFAULT_CONTENT_SECTION_THRESHOLD,
    variant: PageDescPrefix = PageDescPrefix.TITLES_AND_FIRST_SENTENCES,
) -> tuple[list[RoutedExample], FilterReport]:
    """Run one task over a stream of Page | MalformedRecord items.

    Returns routed examples in canonical order (page order, then section or
    image order within a page) and an accounting report. Worker threads come
    from PREFIX_GLOBAL_THREADS; results are merged in input order either way.
    """
    report = FilterReport(task=task)
    items = list(source)
    workers = worker_count()
    job = lambda item: _page_outcomes(item, task, threshold, variant)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(job, items))
    else:
        outcomes = [job(item) for item in items]
    routed = []
    for examples, reasons, candidates, parsed in outcomes:
        report.pages_in += 1 if parsed else 0
        report.candidates += candidates
        for reason in reasons:
            report.reject(reason)
        for r in examples:
            report.examples_out += 1
            report.splits[r.split] += 1
            routed.append(r)
    return routed, report


def nearest_rank(values, pct: float):
    """Nearest-rank percentile: the value at rank ceil(pct/100 * n)."""
    data = sorted(values)
    if not data:
        return 0
    rank = -(-(pct * len(data)) // 100)  # ceil without floats
    return data[int(rank) - 1]


def _distribution(values) -> dict:
    data = list(values)
    if not data:
        return {"median": 0, "mean": 0.0, "max": 0, "p90": 0}
    return {
        "median": statistics.median(data),
        "mean": sum(data) / len(data),
        "max": max(data),
        "p90": nearest_rank(data, 90),
    }


def corpus_stats(pages) -> dict:
    """Taxonomy counts, image counts, and per-page distributions."""
    class_counts = {c.value: 0 for c in SectionClass}
    sections_per_page, content_per_page, images_per_page = [], [], []
    images_per_section = []
    unique_images = set()
    total_images = 0
    n_pages = 0
    for page in pages:
        n_pages += 1
        sections_per_page.append(len(page.sections))
        content_per_page.append(len(page.content_sections()))
        page_images = 0
        for sec in page.sections:
            class_counts[page.section_class(sec.index).value] += 1
            images_per_section.append(len(sec.images))
            page_images += len(sec.images)
            for img in sec.images:
                unique_images.add(img.url)
        total_images += page_images
        images_per_page.append(page_images)
    return {
        "pages": n_pages,
        "sections": {**class_counts, "total": sum(class_counts.values())},
        "images": {"total": total_images, "unique": len(unique_images)},
        "per_page": {
            "sections": _distribution(sections_per_page),
            "content_sections": _distribution(content_per_page),
            "images": _distribution(images_per_page),
        },
        "per_section": {"images": _distribution(images_per_section)},
    }
