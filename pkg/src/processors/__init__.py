"""Thinning and homology verification."""
