"""
mapsplit - exact enumeration and ReCom sampling of two-district plans
"""

from mapsplit.config import PROJECT_VERSION as __version__

__all__ = ["__version__"]
