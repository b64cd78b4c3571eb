"""Fidelity benchmarks for quantum-dot spin-photon interface protocols.

Library layout:

- ``params``     physical parameters and Overhauser-field sampling
- ``kraus``      emitter Kraus operators and the collision unitary
- ``amplitudes`` closed-form emission/scattering coefficients and overlaps
- ``protocols``  the three protocol fidelities and their averages
- ``averaging``  Gaussian noise averaging (quadrature and Monte Carlo)
- ``oracle``     brute-force time-bin collision simulator (ground truth)
- ``cli``        parameter sweeps, CSV output and figure rendering
"""

from .params import (
    BlochQubit,
    MagneticSample,
    OverhauserDistribution,
    PhysicalConfig,
    sample_magnetic,
)

__all__ = [
    "BlochQubit",
    "MagneticSample",
    "OverhauserDistribution",
    "PhysicalConfig",
    "sample_magnetic",
]

__version__ = "0.1.0"
