"""Time-frequency transforms, twisted convolution and Weyl calculus on sampled grids."""
__version__ = "0.1.0"
