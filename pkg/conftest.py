"""Skip the figures test tree when that package is not installed."""

collect_ignore_glob: list[str] = []
try:
    import figures  # noqa: F401
except ImportError:
    collect_ignore_glob.append("figures/*")
