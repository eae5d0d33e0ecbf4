"""dblcat: a symbolic engine for finite double-category calculus."""

__version__ = "0.1.0"
