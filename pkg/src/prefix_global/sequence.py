"""Task input builders: webpage structure to one ordered slot sequence.

Each builder lays out a page as token slots (single text tokens or single
image slots) and designates the first prefix_len of them as the global
prefix; everything after is local context. The prefix budget is 512 slots,
an image costs exactly 1 slot, and truncation is slot-granular. Material
that overflows the budget is not dropped: it stays in the sequence as local
context, only the global designation is capped.

Section material always renders in a fixed order: index marker, title, body
text, captions. The marker is a single dedicated token "[S<i>]". Captions are
the reference descriptions of a section's images. Only content sections
(text or images, no table/list) contribute input material.

Targets are never rendered into slots: the page description field, a target
section's first sentence, and a target image's reference and attribution
descriptions are all withheld from the input side of their own example.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .page import Page, Section, count_sentences, tokenize

PREFIX_BUDGET = 512
PAGE_DESC_MAX_IMAGES = 6
SECTION_SUMM_MAX_IMAGES = 1
IMAGE_SLOT_COST = 1  # slots charged per image against the prefix budget

# reason codes shared by builder errors and the pipeline filters
REASON_LIST_HEAVY = "list_heavy"
REASON_MISSING_DESCRIPTION = "missing_description"
REASON_TOO_FEW_CONTENT_SECTIONS = "too_few_content_sections"
REASON_ROOT = "root"
REASON_TABLE_OR_LIST = "table_or_list"
REASON_TOO_SHORT = "too_short"
REASON_NOT_IN_QUALITY_SET = "not_in_quality_set"
REASON_MIME = "mime"
REASON_SHORT_REFERENCE = "short_reference"
REASON_PARSE_ERROR = "parse_error"

MIN_SECTION_SENTENCES = 5
MIN_REFERENCE_WORDS = 3


class IneligibleExampleError(ValueError):
    """The requested example fails its task's eligibility rule."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class Task(str, Enum):
    PAGE_DESCRIPTION = "page_description"
    SECTION_SUMMARIZATION = "section_summarization"
    IMAGE_CAPTIONING = "image_captioning"


class Origin(str, Enum):
    PAGE_URL = "page_url"
    PAGE_TITLE = "page_title"
    SECTION_INDEX = "section_index"
    SECTION_TITLE = "section_title"
    SECTION_FIRST_SENTENCE = "section_first_sentence"
    SECTION_BODY = "section_body"
    CAPTION = "caption"
    TARGET_IMAGE = "target_image"
    CONTEXT_IMAGE = "context_image"


class PageDescPrefix(str, Enum):
    """Alternative page-description prefix layouts, ablation variants."""

    TITLES_AND_FIRST_SENTENCES = "titles-first-sentences"  # default
    TITLES_ONLY = "titles-only"
    IN_ORDER = "in-order"  # one flattened stream, prefix = first 512 slots


@dataclass(frozen=True)
class TokenSlot:
    kind: str  # "text" | "image"
    origin: Origin
    text_token: str | None = None
    image: str | None = None

    def __post_init__(self):
        if self.kind == "text":
            if not isinstance(self.text_token, str) or self.image is not None:
                raise ValueError("text slot must carry text_token only")
        elif self.kind == "image":
            if not isinstance(self.image, str) or self.text_token is not None:
                raise ValueError("image slot must carry image only")
        else:
            raise ValueError(f"unknown slot kind {self.kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "text":
            return {"kind": "text", "token": self.text_token, "origin": self.origin.value}
        return {"kind": "image", "image": self.image, "origin": self.origin.value}


def text_slots(text: str, origin: Origin) -> list:
    return [TokenSlot("text", origin, text_token=t) for t in tokenize(text)]


def image_slot(embedding_id: str, origin: Origin) -> TokenSlot:
    return TokenSlot("image", origin, image=embedding_id)


def marker_slot(index: int) -> TokenSlot:
    return TokenSlot("text", Origin.SECTION_INDEX, text_token=f"[S{index}]")


def caption_slots(section: Section, skip_image_pos: int | None = None) -> list:
    out = []
    for pos, img in enumerate(section.images):
        if pos == skip_image_pos or not img.reference_desc:
            continue
        out.extend(text_slots(img.reference_desc, Origin.CAPTION))
    return out


@dataclass(frozen=True)
class TaskExample:
    task: Task
    slots: tuple
    prefix_len: int
    target_text: str
    source_page_url: str

    def __post_init__(self):
        if not 0 <= self.prefix_len <= min(PREFIX_BUDGET, len(self.slots)):
            raise ValueError(f"prefix_len {self.prefix_len} outside [0, min(512, {len(self.slots)})]")

    @property
    def prefix(self) -> tuple:
        return self.slots[: self.prefix_len]

    @property
    def context(self) -> tuple:
        return self.slots[self.prefix_len :]

    def to_dict(self) -> dict:
        return {
            "task": self.task.value,
            "page_url": self.source_page_url,
            "prefix": [s.to_dict() for s in self.prefix],
            "context": [s.to_dict() for s in self.context],
            "target": self.target_text,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))


def _assemble(task: Task, page: Page, prefix_material: list, context_material: list, target: str) -> TaskExample:
    slots = tuple(prefix_material + context_material)
    return TaskExample(
        task=task,
        slots=slots,
        prefix_len=min(PREFIX_BUDGET, len(prefix_material)),
        target_text=target,
        source_page_url=page.url,
    )


def _section_context(section: Section, include_title: bool = True, body_text: str | None = None) -> list:
    """marker -> title -> body -> captions, the canonical section layout."""
    out = [marker_slot(section.index)]
    if include_title:
        out.extend(text_slots(section.title, Origin.SECTION_TITLE))
    body = section.body_text if body_text is None else body_text
    out.extend(text_slots(body, Origin.SECTION_BODY))
    out.extend(caption_slots(section))
    return out


def build_page_description_input(
    page: Page,
    max_images: int = PAGE_DESC_MAX_IMAGES,
    variant: PageDescPrefix = PageDescPrefix.TITLES_AND_FIRST_SENTENCES,
) -> TaskExample:
    """Global prefix: up to max_images page images, URL, title, then each
    content section's title and first sentence. Local context: each content
    section's index marker, remaining body text, and captions. The raw page
    description is the target and never enters the slots."""
    if not page.raw_description:
        raise IneligibleExampleError(REASON_MISSING_DESCRIPTION)
    content = page.content_sections()
    images = [img for sec in content for img in sec.images][:max_images]
    head = [image_slot(i.embedding_id, Origin.CONTEXT_IMAGE) for i in images]
    head += text_slots(page.url, Origin.PAGE_URL)
    head += text_slots(page.title, Origin.PAGE_TITLE)

    if variant is PageDescPrefix.IN_ORDER:
        stream = list(head)
        for sec in content:
            stream.extend(_section_context(sec))
        return _assemble(Task.PAGE_DESCRIPTION, page, stream, [], page.raw_description)

    prefix = list(head)
    context = []
    for sec in content:
        prefix.extend(text_slots(sec.title, Origin.SECTION_TITLE))
        if variant is PageDescPrefix.TITLES_AND_FIRST_SENTENCES:
            prefix.extend(text_slots(sec.first_sentence, Origin.SECTION_FIRST_SENTENCE))
            context.append(marker_slot(sec.index))
            context.extend(text_slots(sec.rest_sentences, Origin.SECTION_BODY))
            context.extend(caption_slots(sec))
        else:  # TITLES_ONLY: whole body stays local
            context.extend(_section_context(sec, include_title=False))
    return _assemble(Task.PAGE_DESCRIPTION, page, prefix, context, page.raw_description)


def check_section_summarization(page: Page, target_index: int) -> str | None:
    """Reason the section cannot be a summarization target, or None."""
    section = page.sections[target_index]
    if target_index == 0:
        return REASON_ROOT
    if section.has_table_or_list:
        return REASON_TABLE_OR_LIST
    if count_sentences(section.body_text) < MIN_SECTION_SENTENCES:
        return REASON_TOO_SHORT
    return None


def build_section_summarization_input(
    page: Page, target_index: int, max_images: int = SECTION_SUMM_MAX_IMAGES
) -> TaskExample:
    """Global prefix: up to max_images of the target section's images, its
    index marker, title, body text with the first sentence removed, and its
    captions. Local context: page URL, page title, then every other content
    section in page order. Target: the removed first sentence."""
    if not 0 <= target_index < len(page.sections):
        raise IndexError(f"target_index {target_index} out of range")
    reason = check_section_summarization(page, target_index)
    if reason is not None:
        raise IneligibleExampleError(reason)
    target = page.sections[target_index]
    prefix = [image_slot(i.embedding_id, Origin.CONTEXT_IMAGE) for i in target.images[:max_images]]
    prefix.append(marker_slot(target.index))
    prefix.extend(text_slots(target.title, Origin.SECTION_TITLE))
    prefix.extend(text_slots(target.rest_sentences, Origin.SECTION_BODY))
    prefix.extend(caption_slots(target))
    context = text_slots(page.url, Origin.PAGE_URL)
    context += text_slots(page.title, Origin.PAGE_TITLE)
    for sec in page.content_sections():
        if sec.index == target.index:
            continue
        context.extend(_section_context(sec))
    return _assemble(Task.SECTION_SUMMARIZATION, page, prefix, context, target.first_sentence)


def check_image_caption(img) -> str | None:
    """Reason the image cannot be a captioning target, or None."""
    if not img.in_quality_set:
        return REASON_NOT_IN_QUALITY_SET
    if img.mime.value not in ("jpeg", "png"):
        return REASON_MIME
    if len(img.reference_desc.split()) < MIN_REFERENCE_WORDS:
        return REASON_SHORT_REFERENCE
    return None


def build_image_caption_input(page: Page, section_index: int, image_pos: int) -> TaskExample:
    """Global prefix: the target image slot, then its section's index marker,
    title, full body text, and the captions of the section's OTHER images.
    The target's reference and attribution descriptions are both withheld.
    Local context: page URL, page title, then the other content sections."""
    if not 0 <= section_index < len(page.sections):
        raise IndexError(f"section_index {section_index} out of range")
    section = page.sections[section_index]
    if not 0 <= image_pos < len(section.images):
        raise IndexError(f"image_pos {image_pos} out of range")
    img = section.images[image_pos]
    reason = check_image_caption(img)
    if reason is not None:
        raise IneligibleExampleError(reason)
    prefix = [image_slot(img.embedding_id, Origin.TARGET_IMAGE)]
    prefix.append(marker_slot(section.index))
    prefix.extend(text_slots(section.title, Origin.SECTION_TITLE))
    prefix.extend(text_slots(section.body_text, Origin.SECTION_BODY))
    prefix.extend(caption_slots(section, skip_image_pos=image_pos))
    context = text_slots(page.url, Origin.PAGE_URL)
    context += text_slots(page.title, Origin.PAGE_TITLE)
    for sec in page.content_sections():
        if sec.index == section_index:
            continue
        context.extend(_section_context(sec))
    return _assemble(Task.IMAGE_CAPTIONING, page, prefix, context, img.reference_desc)


def leaks_target(example: TaskExample) -> bool:
    """True if the target's token sequence occurs contiguously in the input
    slots. Image slots break contiguity; empty targets cannot leak."""
    needle = tokenize(example.target_text)
    if not needle:
        return False
    stream = [s.text_token if s.kind == "text" else None for s in example.slots]
    n = len(needle)
    for start in range(len(stream) - n + 1):
        if stream[start : start + n] == needle:
            return True
    return False
