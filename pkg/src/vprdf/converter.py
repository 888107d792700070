"""
Converts RDF graphs into VP-RDF graphs.

Every input triple is kept. A triple whose subject, object or predicate the viewpoint model links to viewpoints
gains link statements: directly as (resource, link predicate, viewpoint) triples, or reified as VP-RDF statement
nodes. A linked predicate is represented by a minted class `Class_<p>` that carries the triple's object through a
minted `<p>_value` property and is linked to the viewpoints itself.
"""
import hashlib
import json
import logging
from collections import Counter
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union
from urllib.parse import quote, unquote

from pydantic import BaseModel, Extra, ValidationError, confloat, conint, root_validator
from rdflib import Namespace
from rdflib.namespace import RDF, RDFS
from toolz import unique

from src.vprdf.exceptions import ConfigError
from src.vprdf.rdf_core import Graph, Term, Triple, local_name
from src.vprdf.utils import has_scheme, normalize_label, split_iri
from src.vprdf.vp_model import Prediction, ViewpointModel, predict_predicate, predict_term

log = logging.getLogger(__name__)

DEFAULT_VP_NAMESPACE = 'http://vprdf.example/vocab#'
DEFAULT_LINK_LOCAL_NAME = 'linked_to_viewpoint'

RDF_TYPE = Term.iri(str(RDF.type))
RDFS_SUBCLASS_OF = Term.iri(str(RDFS.subClassOf))
RDFS_DOMAIN = Term.iri(str(RDFS.domain))
RDFS_RANGE = Term.iri(str(RDFS.range))
RDFS_RESOURCE = Term.iri(str(RDFS.Resource))
RDF_PROPERTY = Term.iri(str(RDF.Property))
RDF_STATEMENT = Term.iri(str(RDF.Statement))

PASSTHROUGH = 'passthrough'


class VpVocabulary(BaseModel):
    """
    The VP-RDF classes and properties, plus the canonical predicate linking a resource to a viewpoint.
    """
    namespace: str
    class_viewpoint: str
    class_pred_with_vp: str
    class_statement: str
    prop_subject_stmt: str
    prop_predicate_stmt: str
    prop_object_stmt: str
    link_predicate: str

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def share_namespace(cls, values):
        namespace = values['namespace']
        if not has_scheme(namespace):
            raise ValueError(f'namespace {namespace!r} is not an absolute IRI')
        iris = [value for key, value in values.items() if key != 'namespace']
        for iri in iris:
            if not iri.startswith(namespace) or iri == namespace:
                raise ValueError(f'{iri!r} is not a term of namespace {namespace!r}')
        if len(set(iris)) != len(iris):
            raise ValueError('vocabulary IRIs must be pairwise distinct')
        return values

    @classmethod
    def from_namespace(cls, namespace: str = DEFAULT_VP_NAMESPACE,
                       link_local_name: str = DEFAULT_LINK_LOCAL_NAME) -> 'VpVocabulary':
        vp = Namespace(namespace)
        return cls(namespace=namespace,
                   class_viewpoint=str(vp['Viewpoint']),
                   class_pred_with_vp=str(vp['Predicate_with_Viewpoint']),
                   class_statement=str(vp['Statement']),
                   prop_subject_stmt=str(vp['Subject_Statement']),
                   prop_predicate_stmt=str(vp['Predicate_Statement']),
                   prop_object_stmt=str(vp['Object_Statement']),
                   link_predicate=str(vp[link_local_name]))

    def term(self, field: str) -> Term:
        return Term.iri(getattr(self, field))

    def viewpoint_iri(self, viewpoint: str) -> Term:
        """Mints the IRI of a viewpoint; characters IRIs cannot carry are percent-encoded."""
        return Term.iri(self.namespace + quote(normalize_label(viewpoint), safe=''))

    def viewpoint_name(self, term: Term) -> Optional[str]:
        """
        :return: the viewpoint name of a minted viewpoint IRI, or None for any other term.
        """
        if not term.is_iri or not term.value.startswith(self.namespace):
            return None
        return unquote(term.value[len(self.namespace):]) or None

    def in_namespace(self, term: Term) -> bool:
        return term.is_iri and term.value.startswith(self.namespace)


class ConversionConfig(BaseModel):
    vocabulary: VpVocabulary = VpVocabulary.from_namespace()
    emit_schema: bool = False
    reified: bool = False
    theta: Optional[confloat(ge=0.0, le=1.0)] = None
    min_support: Optional[conint(ge=1)] = None
    predicate_concept_fallback: bool = False

    class Config:
        frozen = True
        extra = Extra.forbid

    @classmethod
    def from_file(cls, document: Union[str, bytes]) -> 'ConversionConfig':
        """
        Reads a JSON conversion config. `namespace` and `link_local_name` keys build the vocabulary.
        """
        try:
            raw = json.loads(document)
            if not isinstance(raw, dict):
                raise ConfigError('the config must be a JSON object')
            namespace = raw.pop('namespace', DEFAULT_VP_NAMESPACE)
            link = raw.pop('link_local_name', DEFAULT_LINK_LOCAL_NAME)
            return cls(vocabulary=VpVocabulary.from_namespace(namespace, link), **raw)
        except json.JSONDecodeError as err:
            raise ConfigError(f'{err.msg} (line {err.lineno}, column {err.colno})') from err
        except (ValidationError, TypeError) as err:
            raise ConfigError(str(err)) from err


class CaseLabel(BaseModel):
    """
    Which components of a triple are linked to viewpoints. Predicate links combine freely with the others.
    """
    subject_linked: bool = False
    object_linked: bool = False
    predicate_linked: bool = False

    class Config:
        frozen = True

    @property
    def base(self) -> str:
        if self.subject_linked and self.object_linked:
            return 'both_linked'
        if self.subject_linked:
            return 'subject_linked'
        if self.object_linked:
            return 'object_linked'
        return 'none'

    @property
    def name(self) -> str:
        if not self.predicate_linked:
            return self.base
        if self.base == 'none':
            return 'predicate_linked'
        return f'{self.base}+predicate_linked'


class Classification(BaseModel):
    case: CaseLabel
    subject_predictions: Tuple[Prediction, ...] = ()
    object_predictions: Tuple[Prediction, ...] = ()
    predicate_predictions: Tuple[Prediction, ...] = ()

    class Config:
        frozen = True


class ConversionReport(BaseModel):
    case_counts: Dict[str, int] = {}
    input_triple_count: int = 0
    emitted_statement_count: int = 0
    minted_class_count: int = 0
    unmatched_labels: FrozenSet[str] = frozenset()
    viewpoints_used: FrozenSet[str] = frozenset()

    def to_table(self) -> str:
        """
        :return: the report as a plain-text table.
        """
        rows = [('case', 'triples')] + sorted(self.case_counts.items())
        rows += [('input triples', self.input_triple_count),
                 ('emitted statements', self.emitted_statement_count),
                 ('minted classes', self.minted_class_count),
                 ('viewpoints used', ', '.join(sorted(self.viewpoints_used)) or '-'),
                 ('unmatched labels', len(self.unmatched_labels))]
        width = max(len(str(key)) for key, _ in rows)
        lines = [f'{key:<{width}}  {value}' for key, value in rows]
        lines.insert(1, '-' * (width + 9))
        if self.unmatched_labels:
            lines.append('')
            lines.append('unmatched: ' + ' '.join(sorted(self.unmatched_labels)))
        return '\n'.join(lines) + '\n'


def minted_class(predicate: Term) -> Term:
    namespace, _ = split_iri(predicate.value)
    return Term.iri(f'{namespace}Class_{local_name(predicate)}')


def minted_value_property(predicate: Term) -> Term:
    namespace, _ = split_iri(predicate.value)
    return Term.iri(f'{namespace}{local_name(predicate)}_value')


def is_helper_triple(triple: Triple) -> bool:
    """
    Tells whether a triple is a minted (Class_X, X_value, object) triple.
    """
    if not triple.subject.is_iri:
        return False
    subject_ns, subject_local = split_iri(triple.subject.value)
    predicate_ns, predicate_local = split_iri(triple.predicate.value)
    return (subject_ns == predicate_ns and subject_local.startswith('Class_')
            and predicate_local.endswith('_value')
            and subject_local[len('Class_'):] == predicate_local[:-len('_value')])


def is_vp_statement(triple: Triple, vocabulary: VpVocabulary) -> bool:
    """
    Tells whether a triple belongs to the VP-RDF layer of a graph: link, typing, schema, reified-statement and
    minted predicate-class triples. These pass through conversion unclassified.
    """
    return (vocabulary.in_namespace(triple.predicate) or vocabulary.in_namespace(triple.subject)
            or is_helper_triple(triple))


def schema_triples(vocabulary: VpVocabulary) -> List[Triple]:
    """
    The VP-RDF class axioms (subclasses of rdfs:Resource, rdf:Property and rdf:Statement) and the domain and range
    of the three statement properties.
    """
    v = vocabulary.term
    return [
        Triple.of(v('class_viewpoint'), RDFS_SUBCLASS_OF, RDFS_RESOURCE),
        Triple.of(v('class_pred_with_vp'), RDFS_SUBCLASS_OF, RDF_PROPERTY),
        Triple.of(v('class_statement'), RDFS_SUBCLASS_OF, RDF_STATEMENT),
        Triple.of(v('prop_subject_stmt'), RDFS_DOMAIN, v('class_statement')),
        Triple.of(v('prop_subject_stmt'), RDFS_RANGE, RDFS_RESOURCE),
        Triple.of(v('prop_predicate_stmt'), RDFS_DOMAIN, v('class_statement')),
        Triple.of(v('prop_predicate_stmt'), RDFS_RANGE, v('class_pred_with_vp')),
        Triple.of(v('prop_object_stmt'), RDFS_DOMAIN, v('class_statement')),
        Triple.of(v('prop_object_stmt'), RDFS_RANGE, v('class_viewpoint')),
    ]


class _Predictor:
    """Memoizes predictions per label for one conversion."""

    def __init__(self, model: ViewpointModel, config: ConversionConfig):
        self.model = model
        self.config = config
        self.terms: Dict[str, Tuple[Prediction, ...]] = {}
        self.predicates: Dict[str, Tuple[Prediction, ...]] = {}

    def term(self, label: Optional[str]) -> Tuple[Prediction, ...]:
        if label is None:
            return ()
        if label not in self.terms:
            self.terms[label] = tuple(predict_term(self.model, label, self.config.theta, self.config.min_support))
        return self.terms[label]

    def predicate(self, label: Optional[str]) -> Tuple[Prediction, ...]:
        if label is None:
            return ()
        if label not in self.predicates:
            self.predicates[label] = tuple(predict_predicate(self.model, label, self.config.theta,
                                                             self.config.min_support,
                                                             self.config.predicate_concept_fallback))
        return self.predicates[label]


def _classify(triple: Triple, predictor: _Predictor) -> Classification:
    subject = predictor.term(local_name(triple.subject))
    obj = predictor.term(local_name(triple.object))
    predicate = predictor.predicate(local_name(triple.predicate))
    case = CaseLabel(subject_linked=bool(subject), object_linked=bool(obj), predicate_linked=bool(predicate))
    return Classification(case=case, subject_predictions=subject, object_predictions=obj,
                          predicate_predictions=predicate)


def classify_triple(triple: Triple, model: ViewpointModel, config: ConversionConfig = None) -> Classification:
    """
    Predicts the viewpoints of the subject, object and predicate of a triple. Blank nodes never match; literal
    objects match on their normalized lexical form.
    """
    return _classify(triple, _Predictor(model, config or ConversionConfig()))


def statement_node(resource: Term, viewpoint: str, vocabulary: VpVocabulary) -> Term:
    digest = hashlib.sha256(f'{resource.n3()}|{viewpoint}'.encode('utf-8')).hexdigest()[:16]
    return Term.iri(f'{vocabulary.namespace}stmt_{digest}')


def link_statements(resource: Term, viewpoint: str, config: ConversionConfig) -> List[Triple]:
    """
    The triples stating that `resource` is linked to `viewpoint`, with the typing they need.
    """
    vocabulary = config.vocabulary
    link = vocabulary.term('link_predicate')
    target = vocabulary.viewpoint_iri(viewpoint)
    typing = [Triple.of(target, RDF_TYPE, vocabulary.term('class_viewpoint')),
              Triple.of(link, RDF_TYPE, vocabulary.term('class_pred_with_vp'))]
    if not config.reified:
        return [Triple.of(resource, link, target)] + typing
    node = statement_node(resource, normalize_label(viewpoint), vocabulary)
    return [
        Triple.of(node, RDF_TYPE, vocabulary.term('class_statement')),
        Triple.of(node, vocabulary.term('prop_subject_stmt'), resource),
        Triple.of(node, vocabulary.term('prop_predicate_stmt'), link),
        Triple.of(node, vocabulary.term('prop_object_stmt'), target),
    ] + typing


def convert_triple(triple: Triple, classification: Classification, config: ConversionConfig = None) -> List[Triple]:
    """
    Rewrites one triple into VP-RDF. The triple itself always comes first; each applicable case then adds its
    statements, and the result is deduplicated in order.
    """
    config = config or ConversionConfig()
    output = [triple]
    if not triple.subject.is_blank:
        for prediction in classification.subject_predictions:
            output += link_statements(triple.subject, prediction.viewpoint, config)
    if triple.object.is_iri:
        for prediction in classification.object_predictions:
            output += link_statements(triple.object, prediction.viewpoint, config)
    if classification.predicate_predictions:
        predicate_class = minted_class(triple.predicate)
        output.append(Triple.of(predicate_class, minted_value_property(triple.predicate), triple.object))
        for prediction in classification.predicate_predictions:
            output += link_statements(predicate_class, prediction.viewpoint, config)
    return list(unique(output))


def convert_graph(graph: Graph, model: ViewpointModel,
                  config: ConversionConfig = None) -> Tuple[Graph, ConversionReport]:
    """
    Converts an RDF graph into a VP-RDF graph.
    :param graph: The input graph. Triples already in the VP-RDF layer pass through unchanged.
    :param model: The viewpoint model predictions come from.
    :param config: Vocabulary, output form (direct or reified) and threshold overrides.
    :return: The converted graph, a superset of the input, and a report of what was done.
    """
    config = config or ConversionConfig()
    predictor = _Predictor(model, config)
    output: Set[Triple] = set(graph.triples)
    cases = Counter()
    unmatched: Set[str] = set()
    viewpoints: Set[str] = set()
    minted: Set[Term] = set()

    for triple in graph.sorted_triples():
        if is_vp_statement(triple, config.vocabulary):
            cases[PASSTHROUGH] += 1
            continue
        classification = _classify(triple, predictor)
        cases[classification.case.name] += 1
        for term, predictions in ((triple.subject, classification.subject_predictions),
                                  (triple.object, classification.object_predictions)):
            label = local_name(term)
            if label is not None and not predictions:
                unmatched.add(label)
        predicate_label = local_name(triple.predicate)
        if predicate_label is not None and not classification.predicate_predictions:
            unmatched.add(predicate_label)
        for predictions in (classification.subject_predictions, classification.object_predictions,
                            classification.predicate_predictions):
            viewpoints.update(p.viewpoint for p in predictions)
        if classification.case.predicate_linked:
            minted.add(minted_class(triple.predicate))
        output.update(convert_triple(triple, classification, config))

    if config.emit_schema:
        output.update(schema_triples(config.vocabulary))
    converted = Graph(triples=frozenset(output))
    report = ConversionReport(case_counts=dict(cases), input_triple_count=len(graph),
                              emitted_statement_count=len(converted) - len(graph),
                              minted_class_count=len(minted), unmatched_labels=frozenset(unmatched),
                              viewpoints_used=frozenset(viewpoints))
    log.info('converted %d triples into %d (%s)', len(graph), len(converted), dict(cases))
    return converted, report
