"""Exact n-angulated category constructions over graded F_p-vector spaces."""

__version__ = "0.1.0"
