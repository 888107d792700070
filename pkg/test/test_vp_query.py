import json
import random
import warnings
from fractions import Fraction

import pytest
from toolz import concat

from src.vprdf.converter import ConversionConfig, VpVocabulary, convert_graph
from src.vprdf.exceptions import GoldFormatError
from src.vprdf.rdf_core import Graph, Term, Triple, expand, parse_ntriples
from src.vprdf.vp_model import train
from src.vprdf.vp_query import (GoldLabels, QueryResult, consensual_filter, dump_gold, evaluate, evaluate_viewpoints,
                                linked_resources, load_gold, original_triples, viewpoint_filter)
from .conftest import FIXTURES, random_graph, random_ontology

VOCAB = VpVocabulary.from_namespace()


def triple(s: str, p: str, o: str) -> Triple:
    return Triple.of(expand(s), expand(p), expand(o))


@pytest.fixture(scope="module")
def tenants_vprdf() -> Graph:
    return parse_ntriples((FIXTURES / 'tenants_vprdf.nt').read_bytes())


@pytest.fixture(scope="module")
def apartment(real_estate) -> Graph:
    graph = parse_ntriples((FIXTURES / 'apartment_size.nt').read_bytes())
    return convert_graph(graph, train([real_estate]))[0]


def test_finance_query(tenants_vprdf):
    result = viewpoint_filter(tenants_vprdf, 'finance')
    assert result.triples.triples == {
        triple('Rich_Tenant', 'lives_in', 'Constantine'),
        triple('Rich_Tenant', 'lives_in', 'Large_Apartment'),
        triple('John', 'rent', 'apartment3'),
    }
    assert result.matched_resources == {'rich_tenant', 'rent'}
    assert not result.consensual


def test_size_and_education_queries(tenants_vprdf):
    assert viewpoint_filter(tenants_vprdf, 'size').triples.triples == {
        triple('Rich_Tenant', 'lives_in', 'Large_Apartment')}
    assert viewpoint_filter(tenants_vprdf, 'University-Education').triples.triples == {
        triple('John', 'is', 'Professor')}


def test_unknown_viewpoint_is_empty(tenants_vprdf):
    assert len(viewpoint_filter(tenants_vprdf, 'comfort').triples) == 0


def test_attributes_linked_to_size(apartment):
    predicates = {t.predicate.value for t in viewpoint_filter(apartment, 'size').triples.triples}
    assert predicates == {'http://ex.org/surface', 'http://ex.org/height', 'http://ex.org/number_of_rooms'}
    predicates = {t.predicate.value for t in viewpoint_filter(apartment, 'finance').triples.triples}
    assert predicates == {'http://ex.org/price', 'http://ex.org/rent_price'}


def test_consensual_query(apartment, tenants_vprdf):
    remainder = consensual_filter(apartment)
    assert {t.predicate.value for t in remainder.triples.triples} == {'http://ex.org/address'}
    assert remainder.consensual
    assert len(consensual_filter(Graph()).triples) == 0
    # every triple of the tenants graph has a linked resource
    assert consensual_filter(tenants_vprdf).triples.triples == frozenset()


def test_filters_cover_every_original_triple(tenants_vprdf):
    originals = set(original_triples(tenants_vprdf, VOCAB))
    viewpoints = linked_resources(tenants_vprdf, VOCAB)
    covered = set(concat(viewpoint_filter(tenants_vprdf, v).triples.triples for v in viewpoints))
    assert covered | consensual_filter(tenants_vprdf).triples.triples == originals


def test_adding_a_link_never_shrinks_a_result(tenants_vprdf):
    before = viewpoint_filter(tenants_vprdf, 'finance').triples.triples
    extra = Triple.of(expand('John'), Term.iri(VOCAB.link_predicate), VOCAB.viewpoint_iri('finance'))
    after = viewpoint_filter(tenants_vprdf.union(Graph.from_triples([extra])), 'finance').triples.triples
    assert before <= after
    assert triple('John', 'is', 'Professor') in after


def test_reified_and_direct_agree(real_estate, education):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        model = train([real_estate, education])
    rng = random.Random(11)
    graphs = [parse_ntriples((FIXTURES / name).read_bytes()) for name in ('tenants.nt', 'apartment_size.nt')]
    random_model = train([random_ontology(rng) for _ in range(4)])
    cases = [(g, model) for g in graphs] + [(random_graph(rng, max_triples=150), random_model) for _ in range(50)]
    for graph, m in cases:
        direct, _ = convert_graph(graph, m, ConversionConfig())
        reified, _ = convert_graph(graph, m, ConversionConfig(reified=True))
        viewpoints = set(linked_resources(direct, VOCAB)) | set(linked_resources(reified, VOCAB))
        for viewpoint in viewpoints:
            assert (viewpoint_filter(direct, viewpoint).triples == viewpoint_filter(reified, viewpoint).triples)
        assert consensual_filter(direct).triples == consensual_filter(reified).triples


def test_evaluate_exact_match():
    triples = [triple('a', 'p', f'o{i}') for i in range(10)]
    gold = GoldLabels(labels={t: frozenset({'size'}) for t in triples})
    score = evaluate(QueryResult(triples=Graph.from_triples(triples), viewpoint='size'), gold, 'size')
    assert (score.precision, score.recall) == (1.0, 1.0)
    assert str(score).startswith('precision 100.0% recall 100.0%')


def test_evaluate_with_one_extra():
    relevant = [triple('a', 'p', f'o{i}') for i in range(9)]
    extra = triple('b', 'p', 'o')
    gold = GoldLabels(labels={**{t: frozenset({'size'}) for t in relevant}, extra: frozenset()})
    score = evaluate(QueryResult(triples=Graph.from_triples(relevant + [extra])), gold, 'size')
    assert score.precision == 0.9
    assert score.recall == 1.0
    assert (score.returned_count, score.relevant_count, score.hit_count) == (10, 9, 9)


def test_evaluate_empty_sides():
    score = evaluate(QueryResult(triples=Graph()), GoldLabels(), 'size')
    assert (score.precision, score.recall) == (1.0, 1.0)
    gold = GoldLabels(labels={triple('a', 'p', 'b'): frozenset({'size'})})
    score = evaluate(QueryResult(triples=Graph()), gold, 'size')
    assert (score.precision, score.recall) == (1.0, 0.0)


def test_evaluate_matches_recount():
    rng = random.Random(3)
    universe = [triple('s', 'p', f'o{i}') for i in range(100)]
    for _ in range(20):
        returned = set(rng.sample(universe, rng.randint(0, 100)))
        relevant = set(rng.sample(universe, rng.randint(0, 100)))
        gold = GoldLabels(labels={t: frozenset({'v'} if t in relevant else ()) for t in universe})
        score = evaluate(QueryResult(triples=Graph.from_triples(returned)), gold, 'v')
        hits = len(returned & relevant)
        assert score.precision == (float(Fraction(hits, len(returned))) if returned else 1.0)
        assert score.recall == (float(Fraction(hits, len(relevant))) if relevant else 1.0)


def test_evaluate_viewpoints(tenants_vprdf):
    gold = GoldLabels(labels={
        triple('Rich_Tenant', 'lives_in', 'Constantine'): frozenset({'finance'}),
        triple('Rich_Tenant', 'lives_in', 'Large_Apartment'): frozenset({'finance', 'size'}),
        triple('John', 'rent', 'apartment3'): frozenset({'finance'}),
        triple('John', 'is', 'Professor'): frozenset(),
    })
    report = evaluate_viewpoints(tenants_vprdf, gold)
    assert sorted(report.scores) == ['finance', 'size']
    assert report.scores['finance'].precision == 1.0
    assert report.scores['size'].recall == 1.0
    assert report.micro_precision == 1.0
    assert report.micro_recall == 1.0
    assert json.loads(report.to_json())['scores']['finance']['hit_count'] == 3
    assert 'finance' in report.to_table()


def test_gold_file_round_trip(tenants_vprdf):
    gold = GoldLabels(labels={t: frozenset({'finance'}) for t in original_triples(tenants_vprdf, VOCAB)})
    text = dump_gold(gold)
    assert load_gold(text) == gold
    assert dump_gold(load_gold(text)) == text


def test_gold_file_errors():
    with pytest.raises(GoldFormatError):
        load_gold('[]')
    with pytest.raises(GoldFormatError):
        load_gold('{"<a> <b> <c> .": ["size"]}')
    with pytest.raises(GoldFormatError):
        load_gold('{"<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .": "size"}')
