"""Bundled lexicons, homoglyph table, annotated corpus and trained model."""
