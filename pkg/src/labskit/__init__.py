"""labskit: low-autocorrelation binary sequence solvers and benchmarks."""

__version__ = "0.1.0"
