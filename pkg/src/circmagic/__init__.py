"""Distance magic labelings of 6-valent circulants.

Decide, construct and verify distance magic labelings of Circ(n; {±a, ±b, ±c}).
"""

__version__ = "0.1.0"
