"""Desk-scale computations around Brauer-Siegel type estimates.

Submodules: sym_chars (symmetric group characters), quad_arith (quadratic
field invariants), lfunc (Dirichlet/Dedekind series), family_sweep (family
statistics), regions (zero-free region widths) and cli.
"""

__version__ = "0.1.0"
