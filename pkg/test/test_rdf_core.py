import random

import pytest
import rdflib
from pydantic import ValidationError

from src.vprdf.exceptions import LiteralSubjectError, NTriplesSyntaxError, RelativeIriError
from src.vprdf.rdf_core import Graph, Term, Triple, expand, local_name, parse_ntriples, serialize_ntriples
from .conftest import FIXTURES, random_graph

XSD_INTEGER = 'http://www.w3.org/2001/XMLSchema#integer'


def test_parse_single_triple():
    graph = parse_ntriples('<http://ex.org/Rich_Tenant> <http://ex.org/lives_in> <http://ex.org/Constantine> .')
    assert len(graph) == 1
    triple = graph.sorted_triples()[0]
    assert local_name(triple.subject) == 'rich_tenant'
    assert triple.object == expand('Constantine')


def test_parse_skips_blank_lines_and_comments():
    document = '# header\n\n<http://ex.org/a> <http://ex.org/p> "x" . # trailing\r\n   \n'
    graph = parse_ntriples(document)
    assert graph.sorted_triples() == [Triple.of(expand('a'), expand('p'), Term.literal('x'))]


def test_parse_literals_and_blank_nodes():
    document = ('_:b1 <http://ex.org/p> "1"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
                '_:b1 <http://ex.org/q> "chat"@fr .\n'
                '_:b1 <http://ex.org/r> "a \\"quoted\\" line\\nbreak \\u00e9" .\n'
                '_:b1 <http://ex.org/s> "home \\U0001F3E0" .\n')
    objects = {t.predicate.value: t.object for t in parse_ntriples(document).triples}
    assert objects['http://ex.org/p'] == Term.literal('1', datatype=XSD_INTEGER)
    assert objects['http://ex.org/q'] == Term.literal('chat', language='fr')
    assert objects['http://ex.org/r'].value == 'a "quoted" line\nbreak é'
    assert objects['http://ex.org/s'].value == 'home \U0001F3E0'


def test_duplicates_collapse():
    line = '<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n'
    assert len(parse_ntriples(line * 3)) == 1


def test_empty_document():
    assert len(parse_ntriples('')) == 0
    assert serialize_ntriples(Graph()) == ''


def test_byte_order_mark_is_ignored():
    document = '\ufeff<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n'.encode('utf-8')
    assert len(parse_ntriples(document)) == 1


def test_syntax_error_names_line():
    document = ('<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n'
                '<http://ex.org/a> <http://ex.org/p> <http://ex.org/c> .\n'
                '<http://ex.org/a> <http://ex.org/p> <http://ex.org/d>\n')
    with pytest.raises(NTriplesSyntaxError) as err:
        parse_ntriples(document)
    assert err.value.line == 3
    assert 'line 3' in str(err.value)


def test_relative_iri_is_rejected():
    with pytest.raises(RelativeIriError) as err:
        parse_ntriples('<Rich_Tenant> <http://ex.org/p> <http://ex.org/b> .')
    assert err.value.line == 1
    assert err.value.column == 1


def test_literal_subject_is_rejected():
    with pytest.raises(LiteralSubjectError):
        parse_ntriples('"x" <http://ex.org/p> <http://ex.org/b> .')


def test_invalid_utf8_is_a_syntax_error():
    with pytest.raises(NTriplesSyntaxError) as err:
        parse_ntriples(b'<http://ex.org/a> <http://ex.org/p> "\xff" .\n')
    assert err.value.line == 1


def test_term_invariants():
    with pytest.raises(ValidationError):
        Term.iri('Rich_Tenant')
    with pytest.raises(ValidationError):
        Term.blank('not-allowed')
    with pytest.raises(ValidationError):
        Term.literal('x', datatype=XSD_INTEGER, language='en')
    with pytest.raises(ValidationError):
        Triple.of(expand('a'), Term.literal('p'), expand('b'))


def test_local_name():
    assert local_name(Term.iri('http://ex.org/estate#Large-Apartment')) == 'large_apartment'
    assert local_name(Term.iri('http://ex.org/Rich_Tenant')) == 'rich_tenant'
    assert local_name(Term.iri('urn:isbn:Thing')) == 'thing'
    assert local_name(Term.iri('http://ex.org/')) is None
    assert local_name(Term.blank('b0')) is None
    assert local_name(Term.literal(' Finance ')) == 'finance'


def test_serialization_is_canonical():
    graph = Graph.from_triples([
        Triple.of(expand('b'), expand('p'), Term.literal('tab\there')),
        Triple.of(expand('a'), expand('q'), expand('c')),
        Triple.of(expand('a'), expand('p'), Term.literal('1', datatype=XSD_INTEGER)),
    ])
    assert serialize_ntriples(graph) == (
        '<http://ex.org/a> <http://ex.org/p> "1"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
        '<http://ex.org/a> <http://ex.org/q> <http://ex.org/c> .\n'
        '<http://ex.org/b> <http://ex.org/p> "tab\\there" .\n'
    )


def test_control_characters_are_escaped():
    graph = Graph.from_triples([Triple.of(expand('a'), expand('p'), Term.literal('bell\x07'))])
    assert serialize_ntriples(graph) == '<http://ex.org/a> <http://ex.org/p> "bell\\u0007" .\n'
    assert parse_ntriples(serialize_ntriples(graph)) == graph


@pytest.mark.parametrize('name', ['tenants.nt', 'tenants_vprdf.nt', 'apartment_size.nt'])
def test_fixture_round_trip(name):
    graph = parse_ntriples((FIXTURES / name).read_bytes())
    document = serialize_ntriples(graph)
    assert parse_ntriples(document) == graph
    assert serialize_ntriples(parse_ntriples(document)) == document


@pytest.mark.parametrize("seed", range(4))
def test_random_round_trip(seed):
    rng = random.Random(seed)
    for _ in range(25):
        graph = random_graph(rng, max_triples=100)
        again = parse_ntriples(serialize_ntriples(graph))
        assert again == graph
        assert parse_ntriples(serialize_ntriples(again)) == again


def test_rdflib_reads_serializer_output():
    graph = random_graph(random.Random(8), max_triples=200)
    other = rdflib.Graph().parse(data=serialize_ntriples(graph), format='nt')
    assert len(other) == len(graph)
    ours = {(t.subject.value, t.predicate.value, t.object.value) for t in graph.triples
            if t.subject.is_iri and t.object.is_iri}
    theirs = {(str(s), str(p), str(o)) for s, p, o in other
              if isinstance(s, rdflib.URIRef) and isinstance(o, rdflib.URIRef)}
    assert ours == theirs
