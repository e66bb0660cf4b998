"""Exact cyclic homology toolkit."""
