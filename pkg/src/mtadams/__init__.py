"""Adams E2-charts and homotopy-group verification for the Thom spectra
MT(d, r) of tangential structures over O, SO, and Spin."""

__all__ = [
    "charrings",
    "charts",
    "f2",
    "mtmod",
    "pipeline",
    "resolution",
    "steenrod",
    "tables",
]

__version__ = "0.1.0"
