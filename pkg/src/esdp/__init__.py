"""esdp: mine API usage patterns from source corpora and answer
single-statement queries with ranked sequences and code skeletons."""

__version__ = "0.1.0"
