"""MetaGlyph symbolic instruction toolkit."""

try:
    from ._metaglyph import (
        brute_force,
        canonical,
        compile_triplet,
        compression_ratio,
        generate,
        gold,
        operator_counts,
        render_markdown,
        score,
        to_control,
        token_count,
        tree,
    )
except ImportError:  # in-tree build: the module sits next to the package
    from _metaglyph import (
        brute_force,
        canonical,
        compile_triplet,
        compression_ratio,
        generate,
        gold,
        operator_counts,
        render_markdown,
        score,
        to_control,
        token_count,
        tree,
    )

__all__ = [
    "brute_force",
    "canonical",
    "compile_triplet",
    "compression_ratio",
    "generate",
    "gold",
    "operator_counts",
    "render_markdown",
    "score",
    "to_control",
    "token_count",
    "tree",
]
