"""
Tools module for forest complexity and concentration bound workflows.
"""

from .forest_tools import ForestConcTools, GraphFile

__all__ = ["ForestConcTools", "GraphFile"]
