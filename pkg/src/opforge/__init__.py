"""Exact computations with operads, right modules and bar complexes."""
