"""Exact computational engine for gluing hypercubes of dg categories over a
field, with a filtered-algebra laboratory generating test geometries."""

__version__ = "0.1.0"
