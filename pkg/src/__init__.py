# src/__init__.py
"""
Community Detection Evaluation Toolkit (commeval)
"""

__version__ = "1.0.0"
__tool__ = "commeval"
