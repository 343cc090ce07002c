"""Backstepping trajectory tracking for an underactuated vessel with a CBF-QP safety filter"""

from .config import settings

__version__ = settings.VERSION
