"""Surface observables for unitary braided fusion categories."""

__version__ = "0.1.0"
