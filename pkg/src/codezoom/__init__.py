"""codezoom: edit code through grammar-checked, semantically zoomable pseudocode."""

__version__ = "0.1.0"
