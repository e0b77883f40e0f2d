"""Questionnaire-based autism screening toolkit.

Library surface: schema and ingestion (``schema``, ``data``), scaling
(``preprocessing``), selector-vote feature reduction (``selection``),
eleven classifier families (``classifiers``), cross-validated grid search
(``model_selection``), metrics (``evaluation``), the binary model artifact
(``artifact``), the training pipeline (``pipeline``), and the screening
HTTP service (``service``).
"""

__version__ = "0.1.0"
