"""ecgraph - existentially closed quadratic unitary Cayley graphs"""

__version__ = "0.1.0"
