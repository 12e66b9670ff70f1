"""Corpus-statistics-driven extractive summarization of data-oriented XML."""

try:
    from ._xmlsumm import (  # type: ignore[attr-defined]
        CorpusStats,
        Document,
        Error,
        Summary,
        SummaryConfig,
        build_stats,
        load_stats,
        parse_document,
        parse_file,
        summarize,
        tag_importance,
    )
except ImportError:  # running against a build tree with _xmlsumm on sys.path
    from _xmlsumm import (
        CorpusStats,
        Document,
        Error,
        Summary,
        SummaryConfig,
        build_stats,
        load_stats,
        parse_document,
        parse_file,
        summarize,
        tag_importance,
    )

__all__ = [
    "CorpusStats",
    "Document",
    "Error",
    "Summary",
    "SummaryConfig",
    "build_stats",
    "load_stats",
    "parse_document",
    "parse_file",
    "summarize",
    "tag_importance",
]
