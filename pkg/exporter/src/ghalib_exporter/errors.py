class ExporterError(Exception):
    """Base for everything this package raises on purpose."""


class CorpusError(ExporterError):
    pass


class ExportError(ExporterError):
    pass
