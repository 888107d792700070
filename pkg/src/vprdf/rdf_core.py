"""
RDF terms, triples and graphs, with an N-Triples reader and a canonical writer.

Graphs are sets: duplicates collapse, and serialization always emits the triples sorted on the N-Triples forms of
(subject, predicate, object), so equal graphs produce byte-identical documents.
"""
import logging
import re
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, root_validator

from src.vprdf.exceptions import LiteralSubjectError, NTriplesSyntaxError, RelativeIriError
from src.vprdf.utils import has_scheme, local_part, normalize_label

log = logging.getLogger(__name__)

DEFAULT_NAMESPACE = 'http://ex.org/'

_BLANK_LABEL = re.compile(r'[A-Za-z0-9_]+')
_LANGUAGE_TAG = re.compile(r'[A-Za-z]+(-[A-Za-z0-9]+)*')
_IRI_FORBIDDEN = set('<>"{}|^`\\')
_ESCAPES = {'\\': '\\\\', '"': '\\"', '\n': '\\n', '\r': '\\r', '\t': '\\t'}
_UNESCAPES = {'\\': '\\', '"': '"', 'n': '\n', 'r': '\r', 't': '\t'}


class TermKind(str, Enum):
    iri = 'iri'
    blank = 'blank'
    literal = 'literal'


def _iri_char_allowed(ch: str) -> bool:
    return ord(ch) > 0x20 and ch not in _IRI_FORBIDDEN


def _escape_literal(text: str) -> str:
    escaped = []
    for ch in text:
        if ch in _ESCAPES:
            escaped.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ch == '\x7f':
            escaped.append(f'\\u{ord(ch):04X}')
        else:
            escaped.append(ch)
    return ''.join(escaped)


class Term(BaseModel):
    """
    An RDF node: an IRI, a blank node or a literal.

    `value` holds the IRI string, the blank node label or the literal's lexical form. Only literals carry a
    `datatype` or a `language`, and never both.
    """
    kind: TermKind
    value: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    class Config:
        frozen = True
        copy_on_model_validation = False

    @root_validator(skip_on_failure=True)
    def check_kind(cls, values):
        kind, value = values['kind'], values['value']
        datatype, language = values.get('datatype'), values.get('language')
        if kind != TermKind.literal and (datatype is not None or language is not None):
            raise ValueError('only literals carry a datatype or a language')
        if kind == TermKind.iri:
            if not has_scheme(value):
                raise ValueError(f'IRI {value!r} is not absolute')
            if not all(_iri_char_allowed(ch) for ch in value):
                raise ValueError(f'IRI {value!r} contains characters N-Triples cannot carry')
        elif kind == TermKind.blank:
            if not _BLANK_LABEL.fullmatch(value):
                raise ValueError(f'blank node label {value!r} must match [A-Za-z0-9_]+')
        else:
            if datatype is not None and language is not None:
                raise ValueError('a literal has either a datatype or a language, not both')
            if datatype is not None and (not has_scheme(datatype)
                                         or not all(_iri_char_allowed(ch) for ch in datatype)):
                raise ValueError(f'datatype {datatype!r} is not an absolute IRI')
            if language is not None and not _LANGUAGE_TAG.fullmatch(language):
                raise ValueError(f'language tag {language!r} is malformed')
        return values

    @classmethod
    def iri(cls, value: str) -> 'Term':
        return cls(kind=TermKind.iri, value=value)

    @classmethod
    def blank(cls, label: str) -> 'Term':
        return cls(kind=TermKind.blank, value=label)

    @classmethod
    def literal(cls, lexical: str, datatype: str = None, language: str = None) -> 'Term':
        return cls(kind=TermKind.literal, value=lexical, datatype=datatype, language=language)

    @property
    def is_iri(self) -> bool:
        return self.kind == TermKind.iri

    @property
    def is_blank(self) -> bool:
        return self.kind == TermKind.blank

    @property
    def is_literal(self) -> bool:
        return self.kind == TermKind.literal

    def n3(self) -> str:
        """
        :return: the N-Triples form of the term.
        """
        if self.kind == TermKind.iri:
            return f'<{self.value}>'
        if self.kind == TermKind.blank:
            return f'_:{self.value}'
        suffix = ''
        if self.language is not None:
            suffix = f'@{self.language}'
        elif self.datatype is not None:
            suffix = f'^^<{self.datatype}>'
        return f'"{_escape_literal(self.value)}"{suffix}'

    def __str__(self):
        return self.n3()


class Triple(BaseModel):
    subject: Term
    predicate: Term
    object: Term

    class Config:
        frozen = True
        copy_on_model_validation = False

    @root_validator(skip_on_failure=True)
    def check_positions(cls, values):
        if values['predicate'].kind != TermKind.iri:
            raise ValueError('the predicate of a triple must be an IRI')
        if values['subject'].kind == TermKind.literal:
            raise ValueError('the subject of a triple cannot be a literal')
        return values

    @classmethod
    def of(cls, subject: Term, predicate: Term, object: Term) -> 'Triple':
        return cls(subject=subject, predicate=predicate, object=object)

    def sort_key(self) -> Tuple[str, str, str]:
        return self.subject.n3(), self.predicate.n3(), self.object.n3()

    def n3(self) -> str:
        return f'{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} .'

    def __repr__(self):
        return f'Triple({self.n3()})'


class Graph(BaseModel):
    """
    A finite set of triples.
    """
    triples: FrozenSet[Triple] = frozenset()

    class Config:
        frozen = True

    @classmethod
    def from_triples(cls, triples: Iterable[Triple]) -> 'Graph':
        return cls(triples=frozenset(triples))

    def sorted_triples(self) -> List[Triple]:
        return sorted(self.triples, key=Triple.sort_key)

    def union(self, other: 'Graph') -> 'Graph':
        return Graph(triples=self.triples | other.triples)

    def __len__(self):
        return len(self.triples)

    def __contains__(self, triple: Triple):
        return triple in self.triples

    # BaseModel compares .dict() forms, which cannot hold a set of triples
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.triples == other.triples

    def __hash__(self):
        return hash(self.triples)

    def __repr__(self):
        return f'Graph({len(self.triples)} triples)'


def expand(name: str, namespace: str = DEFAULT_NAMESPACE) -> Term:
    """
    Expands a bare name such as `Rich_Tenant` into an IRI term under `namespace`.
    """
    return Term.iri(namespace + name)


def local_name(term: Term) -> Optional[str]:
    """
    Extracts the normalized label of a term: the part of an IRI after its last '#' (else '/'), or a literal's
    lexical form, lowercased with '-' turned into '_'.
    :return: the label, or None for blank nodes and IRIs with an empty local part.
    """
    if term.kind == TermKind.blank:
        return None
    raw = local_part(term.value) if term.kind == TermKind.iri else term.value
    if raw is None:
        return None
    label = normalize_label(raw)
    return label or None


class _LineParser:
    """Parses one N-Triples line. Columns are 1-based."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.line_no = line_no
        self.pos = 0

    def error(self, expected: str, pos: int = None) -> NTriplesSyntaxError:
        pos = self.pos if pos is None else pos
        found = self.text[pos] if pos < len(self.text) else 'end of line'
        return NTriplesSyntaxError(self.line_no, pos + 1, expected, found)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in ' \t':
            self.pos += 1

    def expect(self, token: str):
        if not self.text.startswith(token, self.pos):
            raise self.error(f"'{token}'")
        self.pos += len(token)

    def parse(self) -> Optional[Triple]:
        self.skip_ws()
        if self.at_end() or self.peek() == '#':
            return None
        subject = self.subject()
        self.skip_ws()
        predicate = self.predicate()
        self.skip_ws()
        obj = self.object()
        self.skip_ws()
        self.expect('.')
        self.skip_ws()
        if not self.at_end() and self.peek() != '#':
            raise self.error('end of line or comment')
        return Triple(subject=subject, predicate=predicate, object=obj)

    def subject(self) -> Term:
        ch = self.peek()
        if ch == '<':
            return self.iri()
        if ch == '_':
            return self.blank()
        if ch == '"':
            raise LiteralSubjectError(self.line_no, self.pos + 1)
        raise self.error('an IRI or blank node as subject')

    def predicate(self) -> Term:
        if self.peek() != '<':
            raise self.error('an IRI as predicate')
        return self.iri()

    def object(self) -> Term:
        ch = self.peek()
        if ch == '<':
            return self.iri()
        if ch == '_':
            return self.blank()
        if ch == '"':
            return self.literal()
        raise self.error('an IRI, blank node or literal as object')

    def iri_text(self) -> str:
        start = self.pos
        self.expect('<')
        chars = []
        while True:
            if self.at_end():
                raise self.error("'>'")
            ch = self.text[self.pos]
            if ch == '>':
                self.pos += 1
                break
            if ch == '\\':
                chars.append(self.unicode_escape())
                continue
            if not _iri_char_allowed(ch):
                raise self.error("an IRI character or '>'")
            chars.append(ch)
            self.pos += 1
        iri = ''.join(chars)
        if not has_scheme(iri):
            raise RelativeIriError(self.line_no, start + 1, iri)
        if not all(_iri_char_allowed(ch) for ch in iri):
            raise self.error('an escaped character allowed in IRIs', start)
        return iri

    def iri(self) -> Term:
        return Term(kind=TermKind.iri, value=self.iri_text())

    def blank(self) -> Term:
        self.expect('_:')
        match = _BLANK_LABEL.match(self.text, self.pos)
        if match is None:
            raise self.error('a blank node label')
        self.pos = match.end()
        return Term(kind=TermKind.blank, value=match.group())

    def literal(self) -> Term:
        self.expect('"')
        chars = []
        while True:
            if self.at_end():
                raise self.error("'\"'")
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                break
            if ch == '\\':
                nxt = self.text[self.pos + 1:self.pos + 2]
                if nxt in _UNESCAPES:
                    chars.append(_UNESCAPES[nxt])
                    self.pos += 2
                else:
                    chars.append(self.unicode_escape())
                continue
            if ch == '\r':
                raise self.error('an escaped carriage return')
            chars.append(ch)
            self.pos += 1
        lexical = ''.join(chars)
        if self.peek() == '@':
            self.pos += 1
            match = _LANGUAGE_TAG.match(self.text, self.pos)
            if match is None:
                raise self.error('a language tag')
            self.pos = match.end()
            return Term(kind=TermKind.literal, value=lexical, language=match.group())
        if self.text.startswith('^^', self.pos):
            self.pos += 2
            if self.peek() != '<':
                raise self.error('a datatype IRI')
            return Term(kind=TermKind.literal, value=lexical, datatype=self.iri_text())
        return Term(kind=TermKind.literal, value=lexical)

    def unicode_escape(self) -> str:
        start = self.pos
        marker = self.text[self.pos + 1:self.pos + 2]
        width = {'u': 4, 'U': 8}.get(marker)
        if width is None:
            raise self.error('a valid escape sequence', start)
        digits = self.text[self.pos + 2:self.pos + 2 + width]
        if len(digits) != width or not all(c in '0123456789abcdefABCDEF' for c in digits):
            raise self.error(f'{width} hexadecimal digits', start)
        code = int(digits, 16)
        if code > 0x10FFFF or 0xD800 <= code <= 0xDFFF:
            raise self.error('a Unicode scalar value', start)
        self.pos += 2 + width
        return chr(code)


def _decode(document: Union[str, bytes]) -> str:
    if isinstance(document, str):
        return document
    try:
        return document.decode('utf-8')
    except UnicodeDecodeError as err:
        line = document.count(b'\n', 0, err.start) + 1
        column = err.start - (document.rfind(b'\n', 0, err.start) + 1) + 1
        raise NTriplesSyntaxError(line, column, 'UTF-8 text') from err


def parse_ntriples(document: Union[str, bytes]) -> Graph:
    """
    Parses an N-Triples document into a graph.
    :param document: The document, as text or UTF-8 bytes. LF and CRLF line endings are accepted; blank lines and
        '#' comments are skipped.
    :return: The set of triples of the document.
    :raises NTriplesSyntaxError: with the line and column of the first fault. No partial graph is returned.
    """
    text = _decode(document)
    if text.startswith('\ufeff'):
        text = text[1:]
    triples = set()
    for line_no, line in enumerate(text.split('\n'), start=1):
        if line.endswith('\r'):
            line = line[:-1]
        triple = _LineParser(line, line_no).parse()
        if triple is not None:
            triples.add(triple)
    log.debug('parsed %d distinct triples', len(triples))
    return Graph(triples=frozenset(triples))


def serialize_ntriples(graph: Graph) -> str:
    """
    Serializes a graph as N-Triples, one triple per line in canonical order, LF line endings.
    """
    return ''.join(triple.n3() + '\n' for triple in graph.sorted_triples())
