"""Fermionic-mode quantum information under the parity superselection rule."""
