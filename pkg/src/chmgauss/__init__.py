"""Index and nullity of the Gauss map of Costa-Hoffman-Meeks surfaces, computed numerically."""

__version__ = "0.1.0"
