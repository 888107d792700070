from src.vprdf.converter import (ConversionConfig, ConversionReport, VpVocabulary, classify_triple, convert_graph,
                                 convert_triple)
from src.vprdf.exceptions import *
from src.vprdf.mvo import MvpOntology, dump_mvo, extract_links, load_mvo, validate_ontology
from src.vprdf.rdf_core import Graph, Term, Triple, expand, local_name, parse_ntriples, serialize_ntriples
from src.vprdf.synthetic import generate_synthetic
from src.vprdf.vp_model import ViewpointModel, load_model, predict_predicate, predict_term, save_model, train
from src.vprdf.vp_query import (EvaluationReport, GoldLabels, QueryResult, RelevanceScore, consensual_filter,
                                dump_gold, evaluate, evaluate_viewpoints, load_gold, viewpoint_filter)
from pkg_resources import get_distribution, DistributionNotFound

try:
    # Change here if project is renamed and does not equal the package name
    dist_name = "vp-rdf"
    __version__ = get_distribution(dist_name).version
except DistributionNotFound:
    __version__ = "unknown"
finally:
    del get_distribution, DistributionNotFound
