"""arsg: attributed rhetorical structure grammars for domain text
summarization - knowledge base, grammar learning, precedence parsing,
nucleus-first summarization, evaluation and model transfer."""

__version__ = "0.1.0"
