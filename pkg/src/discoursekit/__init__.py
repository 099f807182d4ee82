"""discoursekit: corpus discourse-analysis workbench.

Pipeline: corpus ingestion and filtering, LDA topic modeling with
coherence-driven model selection, two-stage LLM topic interpretation, and
corpus-phraseology analysis (KWIC, collocations, slot patterns, semantic
prosody) with CLI and HTTP front ends.
"""

__version__ = "0.1.0"
