"""Figure rendering for labskit benchmark report bundles."""

__version__ = "0.1.0"

# Major version of the labskit artifact schema this package understands.
SUPPORTED_SCHEMA_MAJOR = 0
