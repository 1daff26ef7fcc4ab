"""Stable polynomials over finite fields: tower arithmetic, iterate
irreducibility certification and the degree 2-4 stable families."""

from __future__ import annotations

__version__ = "0.1.0"

# Seed for the property-test generators, recorded in every manifest.
PROPERTY_SEED = 20240917
