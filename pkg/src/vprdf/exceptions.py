from typing import Optional


class VprdfError(Exception):
    """Base class for exceptions in this module."""
    pass


class NTriplesSyntaxError(VprdfError):
    """Exception raised when an N-Triples document cannot be parsed. Carries the 1-based position of the fault."""

    def __init__(self, line: int, column: int, expected: str, found: str = None,
                 message="line {0}, column {1}: expected {2}{3}"):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        found_part = '' if found is None else f", found {found!r}"
        self.message = f"{message.format(self.line, self.column, self.expected, found_part)}"
        super().__init__(self.message)


class RelativeIriError(NTriplesSyntaxError):
    """Exception raised when an IRI without a scheme is found in a document."""

    def __init__(self, line: int, column: int, iri: str):
        self.iri = iri
        super().__init__(line, column, 'an absolute IRI', found=iri)


class LiteralSubjectError(NTriplesSyntaxError):
    """Exception raised when a literal stands in the subject position of a triple."""

    def __init__(self, line: int, column: int):
        super().__init__(line, column, 'an IRI or blank node as subject', found='literal')


class MvoParseError(VprdfError):
    """Exception raised when a multi-viewpoints ontology document is not well-formed."""

    def __init__(self, reason: str, line: Optional[int] = None, column: Optional[int] = None,
                 message="Malformed ontology document{0}: {1}"):
        self.reason = reason
        self.line = line
        self.column = column
        position = '' if line is None else f" (line {line}, column {column})"
        self.message = f"{message.format(position, self.reason)}"
        super().__init__(self.message)


class MvoValidationError(VprdfError):
    """Exception raised when an ontology breaks one of the structural rules of multi-viewpoints ontologies."""

    def __init__(self, reason: str, message="Invalid ontology: {0}"):
        self.reason = reason
        self.message = f"{message.format(self.reason)}"
        super().__init__(self.message)


class MvoSchemaError(MvoValidationError):
    """Exception raised when a well-formed document does not follow the ontology document schema."""

    def __init__(self, reason: str, message="Ontology document does not follow the schema: {0}"):
        super().__init__(reason, message)


class DanglingReferenceError(MvoValidationError):
    def __init__(self, owner: str, field: str, target: str):
        self.owner = owner
        self.field = field
        self.target = target
        super().__init__(f"'{owner}' references unknown {field} '{target}'")


class DuplicateMembershipError(MvoValidationError):
    def __init__(self, individual: str, viewpoint: str):
        self.individual = individual
        self.viewpoint = viewpoint
        super().__init__(f"individual '{individual}' is an instance of more than one local concept "
                         f"under viewpoint '{viewpoint}'")


class EmptyViewpointSetError(MvoValidationError):
    def __init__(self, owner: str):
        self.owner = owner
        super().__init__(f"local element '{owner}' is not linked to any viewpoint")


class DuplicateDeclarationError(MvoValidationError):
    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"{kind} '{name}' is declared more than once")


class HierarchyCycleError(MvoValidationError):
    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"{kind} hierarchy has a cycle through '{name}'")


class EmptyTrainingSetError(VprdfError):
    """Exception raised when a model is trained without any ontology."""

    def __init__(self, message="At least one instantiated ontology is required for training."):
        self.message = message
        super().__init__(self.message)


class ModelVersionError(VprdfError):
    """Exception raised when a model document was written with another format version."""

    def __init__(self, found, expected, message="Model format version '{0}' is not supported, expected '{1}'"):
        self.found = found
        self.expected = expected
        self.message = f"{message.format(self.found, self.expected)}"
        super().__init__(self.message)


class ModelFormatError(VprdfError):
    """Exception raised when a model document cannot be read."""

    def __init__(self, reason: str, message="Malformed model document: {0}"):
        self.reason = reason
        self.message = f"{message.format(self.reason)}"
        super().__init__(self.message)


class GoldFormatError(VprdfError):
    """Exception raised when a gold labels document cannot be read."""

    def __init__(self, reason: str, message="Malformed gold labels document: {0}"):
        self.reason = reason
        self.message = f"{message.format(self.reason)}"
        super().__init__(self.message)


class ConfigError(VprdfError):
    """Exception raised for invalid configuration files or flag combinations."""

    def __init__(self, reason: str, message="Invalid configuration: {0}"):
        self.reason = reason
        self.message = f"{message.format(self.reason)}"
        super().__init__(self.message)
