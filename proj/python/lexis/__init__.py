"""Corpus-linguistic analysis of news text: topics, collocations, concordances, metaphors."""

import json

from ._errors import LexisError, QueryError
from ._lexis import __version__
from ._lexis import Session as _Session
from ._lexis import run as _run

__all__ = ["LexisError", "QueryError", "Session", "run", "__version__"]


def run(*args):
    """Run the command-line tool in-process. Returns (exit_code, stdout, stderr)."""
    return _run([str(a) for a in args])


class Session:
    """Read-only view over a corpus and optional model, answering the same
    queries as the HTTP service."""

    def __init__(self, corpus, model=None, lexicon=None):
        self._s = _Session(str(corpus), None if model is None else str(model),
                           None if lexicon is None else str(lexicon))

    @property
    def documents(self):
        return self._s.documents

    @property
    def has_model(self):
        return self._s.has_model

    def raw(self, path, **params):
        """(status, body) exactly as the service would send them."""
        return self._s.handle(path, [(k, str(v)) for k, v in params.items()])

    def query(self, path, **params):
        status, body = self.raw(path, **params)
        data = json.loads(body)
        if status != 200:
            err = data["error"]
            raise QueryError(status, err["code"], err["message"])
        return data
