"""texthist: dataset-specific entity histograms for text corpora.

The pipeline extracts noun/number entities, clusters their embeddings at
several cutoffs, labels the clusters through a generation provider, and
counts per-entity example coverage into histograms. A FastAPI service
exposes browsing, search, and live histogram creation over the result.
"""

__version__ = "0.1.0"
