"""Lower bounds for the domination number of cylinders P_m x C_n."""

__version__ = "0.1.0"
