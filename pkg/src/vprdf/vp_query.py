"""
Viewpoint-scoped retrieval over VP-RDF graphs, and relevance measurement against gold labels.

A triple of the original (non VP-RDF) portion of a graph is relevant to a viewpoint when its subject or object is
linked to that viewpoint, or when the class minted for its predicate is. Direct link triples and reified
statements are read alike.
"""
import json
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Union

from pydantic import BaseModel, ValidationError
from toolz import concat

from src.vprdf.converter import ConversionConfig, VpVocabulary, is_vp_statement, minted_class
from src.vprdf.exceptions import GoldFormatError, NTriplesSyntaxError
from src.vprdf.rdf_core import Graph, Term, Triple, local_name, parse_ntriples
from src.vprdf.utils import normalize_label

log = logging.getLogger(__name__)


class QueryResult(BaseModel):
    triples: Graph
    viewpoint: Optional[str] = None
    matched_resources: FrozenSet[str] = frozenset()

    @property
    def consensual(self) -> bool:
        return self.viewpoint is None


class GoldLabels(BaseModel):
    """
    The viewpoints each original triple is relevant to. An empty set marks a consensual triple.
    """
    labels: Dict[Triple, FrozenSet[str]] = {}

    def viewpoints(self) -> List[str]:
        return sorted(set(concat(self.labels.values())))

    def relevant(self, viewpoint: str) -> FrozenSet[Triple]:
        return frozenset(t for t, viewpoints in self.labels.items() if viewpoint in viewpoints)


class RelevanceScore(BaseModel):
    viewpoint: Optional[str] = None
    precision: float
    recall: float
    returned_count: int
    relevant_count: int
    hit_count: int

    def __str__(self):
        return (f'precision {self.precision:.1%} recall {self.recall:.1%} '
                f'(returned {self.returned_count}, relevant {self.relevant_count}, hits {self.hit_count})')


class EvaluationReport(BaseModel):
    scores: Dict[str, RelevanceScore] = {}
    micro_precision: float = 1.0
    micro_recall: float = 1.0

    def to_table(self) -> str:
        width = max([len('viewpoint')] + [len(v) for v in self.scores])
        lines = [f"{'viewpoint':<{width}}  {'precision':>9}  {'recall':>7}  {'returned':>8}  {'relevant':>8}",
                 '-' * (width + 42)]
        for viewpoint, score in sorted(self.scores.items()):
            lines.append(f'{viewpoint:<{width}}  {score.precision:>9.1%}  {score.recall:>7.1%}  '
                         f'{score.returned_count:>8}  {score.relevant_count:>8}')
        lines.append('-' * (width + 42))
        lines.append(f"{'all':<{width}}  {self.micro_precision:>9.1%}  {self.micro_recall:>7.1%}")
        return '\n'.join(lines) + '\n'

    def to_json(self) -> str:
        return json.dumps(self.dict(), indent=2, sort_keys=True) + '\n'


def linked_resources(graph: Graph, vocabulary: VpVocabulary) -> Dict[str, FrozenSet[Term]]:
    """
    Indexes the resources a VP-RDF graph links to each viewpoint, from direct link triples and reified statements.
    """
    link = vocabulary.link_predicate
    links: Dict[str, Set[Term]] = defaultdict(set)
    statements: Dict[Term, Dict[str, Set[Term]]] = defaultdict(lambda: defaultdict(set))
    statement_props = {vocabulary.prop_subject_stmt, vocabulary.prop_predicate_stmt, vocabulary.prop_object_stmt}

    for triple in graph.triples:
        predicate = triple.predicate.value
        if predicate == link:
            viewpoint = vocabulary.viewpoint_name(triple.object)
            if viewpoint is not None:
                links[viewpoint].add(triple.subject)
        elif predicate in statement_props:
            statements[triple.subject][predicate].add(triple.object)

    for parts in statements.values():
        if Term.iri(link) not in parts[vocabulary.prop_predicate_stmt]:
            continue
        for target in parts[vocabulary.prop_object_stmt]:
            viewpoint = vocabulary.viewpoint_name(target)
            if viewpoint is not None:
                links[viewpoint].update(parts[vocabulary.prop_subject_stmt])
    return {viewpoint: frozenset(resources) for viewpoint, resources in links.items()}


def original_triples(graph: Graph, vocabulary: VpVocabulary) -> List[Triple]:
    return [t for t in graph.sorted_triples() if not is_vp_statement(t, vocabulary)]


def _matches(triple: Triple, resources: FrozenSet[Term]) -> Set[str]:
    labels = set()
    for term in (triple.subject, triple.object):
        if term in resources:
            labels.add(local_name(term) or term.value)
    predicate_label = local_name(triple.predicate)
    if predicate_label is not None and minted_class(triple.predicate) in resources:
        labels.add(predicate_label)
    return labels


def viewpoint_filter(graph: Graph, viewpoint: str, config: ConversionConfig = None) -> QueryResult:
    """
    Selects the original triples relevant to one viewpoint.
    :param graph: A graph produced by `convert_graph`, in direct or reified form.
    :param viewpoint: The viewpoint name. A viewpoint the graph never mentions yields an empty result.
    :param config: Supplies the VP-RDF vocabulary the graph was written with.
    """
    config = config or ConversionConfig()
    viewpoint = normalize_label(viewpoint)
    resources = linked_resources(graph, config.vocabulary).get(viewpoint, frozenset())
    hits, matched = [], set()
    if resources:
        for triple in original_triples(graph, config.vocabulary):
            labels = _matches(triple, resources)
            if labels:
                hits.append(triple)
                matched |= labels
    log.debug('viewpoint %s: %d resources, %d triples', viewpoint, len(resources), len(hits))
    return QueryResult(triples=Graph.from_triples(hits), viewpoint=viewpoint, matched_resources=frozenset(matched))


def consensual_filter(graph: Graph, config: ConversionConfig = None) -> QueryResult:
    """
    Selects the original triples none of whose resources is linked to any viewpoint.
    """
    config = config or ConversionConfig()
    linked = frozenset(concat(linked_resources(graph, config.vocabulary).values()))
    hits = [t for t in original_triples(graph, config.vocabulary) if not _matches(t, linked)]
    return QueryResult(triples=Graph.from_triples(hits), viewpoint=None)


def _ratio(numerator: int, denominator: int) -> float:
    return float(Fraction(numerator, denominator)) if denominator else 1.0


def evaluate(result: QueryResult, gold: GoldLabels, viewpoint: str) -> RelevanceScore:
    """
    Scores a query result against gold labels. Precision over an empty result, and recall against an empty gold
    set, are 1.0.
    """
    viewpoint = normalize_label(viewpoint)
    returned = result.triples.triples
    relevant = gold.relevant(viewpoint)
    hits = len(returned & relevant)
    return RelevanceScore(viewpoint=viewpoint, precision=_ratio(hits, len(returned)),
                          recall=_ratio(hits, len(relevant)), returned_count=len(returned),
                          relevant_count=len(relevant), hit_count=hits)


def evaluate_viewpoints(graph: Graph, gold: GoldLabels, config: ConversionConfig = None,
                        viewpoints: Iterable[str] = None) -> EvaluationReport:
    """
    Evaluates the viewpoint filter for several viewpoints, all gold viewpoints by default, with micro-averaged
    precision and recall over all of them.
    """
    viewpoints = gold.viewpoints() if viewpoints is None else sorted({normalize_label(v) for v in viewpoints})
    scores = {v: evaluate(viewpoint_filter(graph, v, config), gold, v) for v in viewpoints}
    returned = sum(s.returned_count for s in scores.values())
    relevant = sum(s.relevant_count for s in scores.values())
    hits = sum(s.hit_count for s in scores.values())
    return EvaluationReport(scores=scores, micro_precision=_ratio(hits, returned), micro_recall=_ratio(hits, relevant))


def load_gold(document: Union[str, bytes]) -> GoldLabels:
    """
    Reads a gold labels document: a JSON object mapping N-Triples lines to lists of viewpoint names.
    """
    try:
        raw = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise GoldFormatError(str(err)) from err
    if not isinstance(raw, dict):
        raise GoldFormatError('the document must be a JSON object')
    labels = {}
    for line, viewpoints in raw.items():
        try:
            triples = parse_ntriples(line).triples
        except NTriplesSyntaxError as err:
            raise GoldFormatError(f'{line!r}: {err}') from err
        if len(triples) != 1:
            raise GoldFormatError(f'{line!r} is not exactly one triple')
        if not isinstance(viewpoints, list) or not all(isinstance(v, str) for v in viewpoints):
            raise GoldFormatError(f'{line!r} must map to a list of viewpoint names')
        labels[next(iter(triples))] = frozenset(normalize_label(v) for v in viewpoints)
    try:
        return GoldLabels(labels=labels)
    except ValidationError as err:
        raise GoldFormatError(str(err)) from err


def dump_gold(gold: GoldLabels) -> str:
    document = {triple.n3(): sorted(viewpoints) for triple, viewpoints in gold.labels.items()}
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + '\n'
