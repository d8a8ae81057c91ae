"""Support bounds and vertex enumeration for integer hulls of {Ax = b, x >= 0}."""

from .bounds import BoundReport, full_report
from .certify import KernelWitness, NoWitness, kernel_certificate
from .enumeration import HullResult, enumerate_vertices
from .instances import FamilySpec, gen
from .model import HPReal, Instance, IntMatrix, IntPoint
from .oracle import enumerate_lattice, hull_vertices_oracle

__all__ = [
    "BoundReport", "FamilySpec", "HPReal", "HullResult", "Instance", "IntMatrix", "IntPoint",
    "KernelWitness", "NoWitness", "enumerate_lattice", "enumerate_vertices", "full_report", "gen",
    "hull_vertices_oracle", "kernel_certificate",
]
