"""Error types for figure rendering."""


class FigureInputError(Exception):
    """An input file is missing, malformed, or inconsistent with its format."""


class JobError(Exception):
    """The requested job cannot be carried out (bad kind, bad selection)."""
