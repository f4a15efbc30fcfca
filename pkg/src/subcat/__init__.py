"""Learning verb subcategorization frames from dependency treebanks."""

__version__ = "0.1.0"
