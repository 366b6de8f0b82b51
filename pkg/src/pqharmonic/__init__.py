"""Vertical (p,q)-energies and harmonic-section residuals for tangent vector
fields on round spheres and flat tori.

Submodule attributes are loaded lazily (PEP 562) so the command line can
configure threading before the numerics are imported.
"""

__version__ = "0.1.0"

_EXPORTS = {
    "MetricParams": "energy",
    "ManifoldSpec": "geometry",
    "QuadratureSet": "geometry",
    "make_quadrature": "geometry",
    "sphere": "geometry",
    "torus": "geometry",
    "AxisLinear": "sections",
    "ConformalGradient": "sections",
    "Constant": "sections",
    "ConstantTorus": "sections",
    "Hopf": "sections",
    "LinearAmbient": "sections",
    "Rescaled": "sections",
    "Zero": "sections",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name):
    if name in _EXPORTS:
        import importlib

        module = importlib.import_module(f".{_EXPORTS[name]}", __name__)
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
