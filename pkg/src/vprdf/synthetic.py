"""
Seeded synthetic corpora for desk-scale relevance experiments: a generating ontology, noisy copies of it to train
on, an RDF graph over its individuals, and gold labels derived from the generating ontology.
"""
import logging
import random
from typing import Dict, List, Set, Tuple

from rdflib.namespace import XSD

from src.vprdf.converter import RDF_TYPE
from src.vprdf.mvo import (GlobalConcept, Individual, LocalConcept, Membership, MvpOntology, Role, Viewpoint,
                           extract_links, validate_ontology)
from src.vprdf.rdf_core import Graph, Term, Triple, local_name
from src.vprdf.vp_query import GoldLabels

log = logging.getLogger(__name__)

SYNTHETIC_NAMESPACE = 'http://ex.org/synth/'
SYNTHETIC_DOMAIN = 'synthetic'
MEMBERSHIP_RATE = 0.5
LOCAL_ROLES_PER_VIEWPOINT = 2
GLOBAL_ROLES = 3


def _check_parameters(n_viewpoints, n_concepts, n_individuals, n_triples, noise_rate, n_ontologies):
    for name, value in (('n_viewpoints', n_viewpoints), ('n_concepts', n_concepts),
                        ('n_individuals', n_individuals), ('n_triples', n_triples), ('n_ontologies', n_ontologies)):
        if value < 1:
            raise ValueError(f'{name} must be positive, got {value}')
    if not 0.0 <= noise_rate <= 1.0:
        raise ValueError(f'noise_rate must lie in [0, 1], got {noise_rate}')


def _generating_ontology(rng: random.Random, n_viewpoints: int, n_concepts: int, n_individuals: int) -> MvpOntology:
    viewpoints = [f'vp_{i}' for i in range(n_viewpoints)]
    n_globals = max(1, n_concepts // 4)
    global_concepts = {}
    for i in range(n_globals):
        name = f'gc_{i}'
        global_concepts[name] = GlobalConcept(
            name=name,
            global_attributes=frozenset({f'gattr_{i}'}),
            local_attributes={f'lattr_{i}_{j}': frozenset({v}) for j, v in enumerate(viewpoints)},
        )
    global_names = sorted(global_concepts)

    local_concepts = {}
    for i in range(n_concepts):
        name = f'lc_{i}'
        local_concepts[name] = LocalConcept(name=name, viewpoints=frozenset({viewpoints[i % n_viewpoints]}),
                                            subsumer=rng.choice(global_names))

    roles = {}
    for j, viewpoint in enumerate(viewpoints):
        for k in range(LOCAL_ROLES_PER_VIEWPOINT):
            name = f'lrole_{j}_{k}'
            roles[name] = Role(name=name, domain=rng.choice(global_names), range=rng.choice(global_names),
                               viewpoints=frozenset({viewpoint}))
    for k in range(GLOBAL_ROLES):
        name = f'grole_{k}'
        roles[name] = Role(name=name, domain=rng.choice(global_names), range=rng.choice(global_names))

    by_viewpoint: Dict[str, List[str]] = {v: sorted(c.name for c in local_concepts.values() if v in c.viewpoints)
                                          for v in viewpoints}
    individuals = {}
    for i in range(n_individuals):
        name = f'ind_{i}'
        memberships = frozenset(Membership(local_concept=rng.choice(by_viewpoint[v]), viewpoint=v)
                                for v in viewpoints
                                if by_viewpoint[v] and rng.random() < MEMBERSHIP_RATE)
        individuals[name] = Individual(name=name, global_concept=rng.choice(global_names),
                                       local_memberships=memberships)

    return validate_ontology(MvpOntology(
        domain_name=SYNTHETIC_DOMAIN,
        viewpoints={v: Viewpoint(name=v) for v in viewpoints},
        global_concepts=global_concepts, local_concepts=local_concepts, roles=roles, individuals=individuals))


def _flip(rng: random.Random, current: str, choices: List[str]) -> str:
    others = [v for v in choices if v != current]
    return rng.choice(others) if others else current


def _noisy_copy(rng: random.Random, truth: MvpOntology, noise_rate: float) -> MvpOntology:
    """
    Copies the generating ontology, moving each local concept, local attribute, local role and individual
    membership to another viewpoint with probability `noise_rate`. A membership whose concept left its viewpoint
    is re-pointed to a concept still under that viewpoint, or dropped when none is left.
    """
    viewpoints = sorted(truth.viewpoints)

    local_concepts = {}
    for name, concept in sorted(truth.local_concepts.items()):
        if rng.random() < noise_rate:
            concept = concept.copy(update={'viewpoints': frozenset({_flip(rng, min(concept.viewpoints), viewpoints)})})
        local_concepts[name] = concept
    by_viewpoint = {v: sorted(c.name for c in local_concepts.values() if v in c.viewpoints) for v in viewpoints}

    global_concepts = {}
    for name, concept in sorted(truth.global_concepts.items()):
        local_attributes = {}
        for attribute, attribute_viewpoints in sorted(concept.local_attributes.items()):
            current = min(attribute_viewpoints)
            noisy = rng.random() < noise_rate
            local_attributes[attribute] = frozenset({_flip(rng, current, viewpoints)}) if noisy else attribute_viewpoints
        global_concepts[name] = concept.copy(update={'local_attributes': local_attributes})

    roles = {}
    for name, role in sorted(truth.roles.items()):
        if role.is_local and rng.random() < noise_rate:
            role = role.copy(update={'viewpoints': frozenset({_flip(rng, min(role.viewpoints), viewpoints)})})
        roles[name] = role

    individuals = {}
    for name, individual in sorted(truth.individuals.items()):
        memberships: Dict[str, str] = {}
        for membership in sorted(individual.local_memberships, key=lambda m: m.viewpoint):
            target = membership.viewpoint
            if rng.random() < noise_rate:
                taken = {m.viewpoint for m in individual.local_memberships} | set(memberships)
                free = [v for v in viewpoints if v not in taken and by_viewpoint[v]]
                if free:
                    target = rng.choice(free)
            if target in memberships or not by_viewpoint[target]:
                continue
            kept = target == membership.viewpoint and target in local_concepts[membership.local_concept].viewpoints
            memberships[target] = membership.local_concept if kept else rng.choice(by_viewpoint[target])
        individuals[name] = individual.copy(update={'local_memberships': frozenset(
            Membership(local_concept=c, viewpoint=v) for v, c in memberships.items())})

    return validate_ontology(truth.copy(update={'local_concepts': local_concepts, 'global_concepts': global_concepts,
                                                'roles': roles, 'individuals': individuals}))


def _truth_links(truth: MvpOntology) -> Dict[str, Set[str]]:
    links: Dict[str, Set[str]] = {}
    for observation in extract_links(truth):
        links.setdefault(observation.label, set()).add(observation.viewpoint)
    return links


def _graph(rng: random.Random, truth: MvpOntology, n_triples: int, namespace: str) -> List[Triple]:
    def iri(label: str) -> Term:
        return Term.iri(namespace + label)

    individuals = sorted(truth.individuals)
    roles = sorted(truth.roles)
    attributes = sorted({a for c in truth.global_concepts.values()
                         for a in c.global_attributes | set(c.local_attributes)})
    triples: Set[Triple] = set()
    ordered: List[Triple] = []
    attempts = 0
    while len(triples) < n_triples and attempts < n_triples * 20:
        attempts += 1
        subject = rng.choice(individuals)
        draw = rng.random()
        if draw < 0.15:
            individual = truth.individuals[subject]
            types = sorted([individual.global_concept] + [m.local_concept for m in individual.local_memberships])
            triple = Triple.of(iri(subject), RDF_TYPE, iri(rng.choice(types)))
        elif draw < 0.6:
            triple = Triple.of(iri(subject), iri(rng.choice(roles)), iri(rng.choice(individuals)))
        else:
            value = Term.literal(str(rng.randint(1, 500)), datatype=str(XSD.integer))
            triple = Triple.of(iri(subject), iri(rng.choice(attributes)), value)
        if triple not in triples:
            triples.add(triple)
            ordered.append(triple)
    if len(triples) < n_triples:
        log.warning('only %d distinct triples could be drawn out of %d requested', len(triples), n_triples)
    return ordered


def gold_for(triples: List[Triple], links: Dict[str, Set[str]], predicate_labels: Set[str]) -> GoldLabels:
    """
    Labels each triple with the viewpoints of its subject, its IRI object, and its predicate when that predicate is
    a role or attribute.
    """
    labels = {}
    for triple in triples:
        viewpoints = set(links.get(local_name(triple.subject), ()))
        if triple.object.is_iri:
            viewpoints |= links.get(local_name(triple.object), set())
        predicate = local_name(triple.predicate)
        if predicate in predicate_labels:
            viewpoints |= links.get(predicate, set())
        labels[triple] = frozenset(viewpoints)
    return GoldLabels(labels=labels)


def generate_synthetic(seed: int,
                       n_viewpoints: int = 3,
                       n_concepts: int = 20,
                       n_individuals: int = 50,
                       n_triples: int = 2000,
                       noise_rate: float = 0.0,
                       n_ontologies: int = 7,
                       namespace: str = SYNTHETIC_NAMESPACE) -> Tuple[List[MvpOntology], Graph, GoldLabels]:
    """
    Generates a reproducible corpus.
    :param seed: Seed of the generator; equal seeds and parameters give equal corpora.
    :param noise_rate: Fraction of the links of each training ontology moved to another viewpoint.
    :param n_ontologies: Number of noisy training ontologies.
    :return: The training ontologies, the RDF graph and its gold labels.
    """
    _check_parameters(n_viewpoints, n_concepts, n_individuals, n_triples, noise_rate, n_ontologies)
    rng = random.Random(seed)
    truth = _generating_ontology(rng, n_viewpoints, n_concepts, n_individuals)
    ontologies = [_noisy_copy(rng, truth, noise_rate) for _ in range(n_ontologies)]
    triples = _graph(rng, truth, n_triples, namespace)

    predicate_labels = {r for r in truth.roles} | {a for c in truth.global_concepts.values()
                                                   for a in c.local_attributes}
    gold = gold_for(triples, _truth_links(truth), predicate_labels)
    log.info('synthetic corpus: %d ontologies, %d triples, seed %d', len(ontologies), len(triples), seed)
    return ontologies, Graph.from_triples(triples), gold
