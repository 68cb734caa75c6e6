"""Structured attention toolkit: masks, block-sparse kernels, cost accounting,
and webpage-to-sequence dataset construction.
"""

__version__ = "0.1.0"

from .cost import CostReport, accounted_pairs, compare, mask_nnz, render_table, report
from .demo import demo_corpus_path, write_demo_corpus
from .kernel import KernelStats, block_average, sparse_attention, tglobal_attention
from .numcore import (
    MASKED,
    DegenerateRowError,
    ShapeError,
    dense_attention,
    row_softmax,
)
from .page import (
    CorpusError,
    ImageRef,
    MalformedRecord,
    Page,
    Section,
    SectionClass,
    iter_corpus,
    parse_page,
    read_corpus,
)
from .patterns import (
    DEFAULT_BLOCK,
    DEFAULT_PREFIX,
    DEFAULT_RADIUS,
    AttentionMask,
    AttentionPattern,
    PatternError,
    PatternKind,
    build_mask,
    full,
    local,
    prefix_global,
    render_csv,
    render_pgm,
    tglobal,
)
from .pipeline import (
    FilterReport,
    RoutedExample,
    assign_split,
    build_dataset,
    corpus_stats,
)
from .sequence import (
    IneligibleExampleError,
    Origin,
    PageDescPrefix,
    Task,
    TaskExample,
    TokenSlot,
    build_image_caption_input,
    build_page_description_input,
    build_section_summarization_input,
    leaks_target,
)

__all__ = [
    "__version__",
    # patterns
    "AttentionMask", "AttentionPattern", "PatternError", "PatternKind",
    "DEFAULT_BLOCK", "DEFAULT_PREFIX", "DEFAULT_RADIUS",
    "build_mask", "full", "local", "prefix_global", "tglobal",
    "render_csv", "render_pgm",
    # cost
    "CostReport", "accounted_pairs", "mask_nnz", "report", "compare", "render_table",
    # numerics
    "MASKED", "ShapeError", "DegenerateRowError", "row_softmax", "dense_attention",
    # kernels
    "KernelStats", "sparse_attention", "tglobal_attention", "block_average",
    # page model
    "CorpusError", "MalformedRecord", "Page", "Section", "ImageRef", "SectionClass",
    "parse_page", "iter_corpus", "read_corpus",
    # sequences
    "Task", "Origin", "PageDescPrefix", "TokenSlot", "TaskExample",
    "IneligibleExampleError", "build_page_description_input",
    "build_section_summarization_input", "build_image_caption_input", "leaks_target",
    # pipeline
    "FilterReport", "RoutedExample", "assign_split", "build_dataset", "corpus_stats",
    # bundled corpus
    "demo_corpus_path", "write_demo_corpus",
]
