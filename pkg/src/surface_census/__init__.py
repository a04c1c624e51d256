"""Automorphism groups of Riemann surfaces of genus p+1."""
