"""Finite join-semilattice workbench."""
