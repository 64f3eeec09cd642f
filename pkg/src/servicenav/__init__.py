"""Community-service navigation engine.

Natural-language questions about food, shelter, libraries, mental health,
and Social Security offices in Philadelphia are parsed into a structured
query, compiled to a transparent graph-query text, executed against an
embedded spatial-temporal knowledge graph, and rendered as ranked,
explainable service cards.
"""

__version__ = "0.1.0"
