"""Generalized Baumslag-Solitar groups from labeled graphs."""
