"""Algebraic tools for languages built from prefix codes of bounded synchronization delay."""
