import random
from pathlib import Path
from typing import List, Sequence

import pytest

from src.vprdf.mvo import (GlobalConcept, Individual, LocalConcept, Membership, MvpOntology, Role, Viewpoint,
                           extract_links, load_mvo)
from src.vprdf.rdf_core import Graph, Term, Triple
from src.vprdf.vp_model import PREDICATE_KINDS, Prediction

FIXTURES = Path(__file__).parent / 'fixtures'

# lexical forms the writer has to escape, plus characters beyond the basic multilingual plane
AWKWARD_TEXT = ['line\nbreak', 'carriage\rreturn', 'tab\t', 'say "hi"', 'back\\slash', 'bell\x07', 'del\x7f',
                'caf\u00e9', '\u00a0', 'house \U0001F3E0', '\u4e2d\u6587', ' ']
DATATYPES = ['http://www.w3.org/2001/XMLSchema#integer', 'http://www.w3.org/2001/XMLSchema#string',
             'http://ex.org/units#metre']


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding='utf-8')


def load_fixture(name: str) -> MvpOntology:
    return load_mvo(fixture_text(name))


@pytest.fixture(scope="session")
def real_estate() -> MvpOntology:
    return load_fixture('real_estate.json')


@pytest.fixture(scope="session")
def real_estate_2() -> MvpOntology:
    return load_fixture('real_estate_2.json')


@pytest.fixture(scope="session")
def education() -> MvpOntology:
    return load_fixture('education.json')


def brute_force_predict(ontologies: Sequence[MvpOntology], label: str, theta: float, min_support: int,
                        predicate: bool = False) -> List[Prediction]:
    """Recounts support and containment from the ontologies on every call."""
    per_ontology = [extract_links(o) for o in ontologies]
    if predicate and not any(l.label == label and l.kind.value in PREDICATE_KINDS
                             for links in per_ontology for l in links):
        return []
    containment = sum(1 for links in per_ontology if any(l.label == label for l in links))
    if containment == 0:
        return []
    viewpoints = {l.viewpoint for links in per_ontology for l in links if l.label == label}
    predictions = []
    for viewpoint in viewpoints:
        support = sum(1 for links in per_ontology
                      if any(l.label == label and l.viewpoint == viewpoint for l in links))
        if support >= min_support and support / containment >= theta:
            predictions.append(Prediction(viewpoint=viewpoint, confidence=support / containment))
    return sorted(predictions, key=lambda p: (-p.confidence, p.viewpoint))


def random_ontology(rng: random.Random, max_labels: int = 30) -> MvpOntology:
    """A small valid ontology over a shared vocabulary, so that labels recur across ontologies."""
    viewpoints = ['vp_a', 'vp_b', 'vp_c']
    globals_ = {'thing': GlobalConcept(name='thing', local_attributes={
        f'attr_{i}': frozenset(rng.sample(viewpoints, rng.randint(1, 2)))
        for i in range(rng.randint(0, max_labels // 6))})}
    locals_ = {}
    for i in rng.sample(range(max_labels // 3), rng.randint(1, max_labels // 3)):
        locals_[f'concept_{i}'] = LocalConcept(name=f'concept_{i}', subsumer='thing',
                                               viewpoints=frozenset(rng.sample(viewpoints, rng.randint(1, 2))))
    roles = {f'role_{i}': Role(name=f'role_{i}', domain='thing', range='thing',
                               viewpoints=frozenset(rng.sample(viewpoints, rng.randint(0, 2))))
             for i in range(rng.randint(0, max_labels // 6))}
    individuals = {}
    for i in range(rng.randint(0, max_labels // 6)):
        memberships = set()
        for viewpoint in viewpoints:
            candidates = sorted(c for c, concept in locals_.items() if viewpoint in concept.viewpoints)
            if candidates and rng.random() < 0.5:
                memberships.add(Membership(local_concept=rng.choice(candidates), viewpoint=viewpoint))
        individuals[f'ind_{i}'] = Individual(name=f'ind_{i}', global_concept='thing',
                                             local_memberships=frozenset(memberships))
    return MvpOntology(domain_name='random', viewpoints={v: Viewpoint(name=v) for v in viewpoints},
                       global_concepts=globals_, local_concepts=locals_, roles=roles, individuals=individuals)


def random_graph(rng: random.Random, max_triples: int = 1000, namespace: str = 'http://ex.org/') -> Graph:
    """Triples over the labels `random_ontology` uses, plus unknown names, blank nodes and literals."""
    names = ([f'concept_{i}' for i in range(10)] + [f'ind_{i}' for i in range(5)] + ['thing', 'unknown', 'Other'])
    predicates = [f'attr_{i}' for i in range(5)] + [f'role_{i}' for i in range(5)] + ['related_to']

    def node() -> Term:
        if rng.random() < 0.1:
            return Term.blank(f'b{rng.randint(0, 5)}')
        return Term.iri(namespace + rng.choice(names))

    def value() -> Term:
        draw = rng.random()
        if draw < 0.2:
            return Term.literal(rng.choice(names))
        if draw < 0.3:
            return Term.literal(str(rng.randint(0, 99)), language=rng.choice(['en', 'fr', 'en-GB']))
        if draw < 0.4:
            return Term.literal(''.join(rng.choice(AWKWARD_TEXT) for _ in range(rng.randint(0, 4))))
        if draw < 0.5:
            datatype = rng.choice(DATATYPES)
            return Term.literal(str(rng.randint(-50, 50)) if datatype.endswith('integer') else rng.choice(names),
                                datatype=datatype)
        return node()

    triples = [Triple.of(node(), Term.iri(namespace + rng.choice(predicates)), value())
               for _ in range(rng.randint(0, max_triples))]
    return Graph.from_triples(triples)
