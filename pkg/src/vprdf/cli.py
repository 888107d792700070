"""
Command-line frontend: train a viewpoint model, convert RDF to VP-RDF, predict labels, query and evaluate.

Exit codes: 0 on success, 1 on I/O or parse failures, 2 on usage or validation failures.
"""
import logging
import warnings
from collections import Counter
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

import typer

from src.vprdf.config import CliConfig
from src.vprdf.converter import convert_graph
from src.vprdf.exceptions import (ConfigError, EmptyTrainingSetError, GoldFormatError, ModelFormatError,
                                  ModelVersionError, MvoParseError, MvoValidationError, NTriplesSyntaxError)
from src.vprdf.mvo import dump_mvo, load_mvo
from src.vprdf.rdf_core import parse_ntriples, serialize_ntriples
from src.vprdf.synthetic import generate_synthetic
from src.vprdf.utils import normalize_label, write_atomic
from src.vprdf.vp_model import ViewpointModel, load_model, predict_predicate, predict_term, save_model, train
from src.vprdf.vp_query import (consensual_filter, dump_gold, evaluate_viewpoints, load_gold, viewpoint_filter)

log = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2

app = typer.Typer(help='Learn term-to-viewpoint links from multi-viewpoints ontologies and rewrite RDF as VP-RDF.')


@app.callback()
def main(verbose: bool = typer.Option(False, '--verbose', '-v', help='Log debug messages to standard error.')):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', force=True)


@contextmanager
def exit_codes():
    """Turns library errors into a message on standard error and the matching exit code."""
    try:
        yield
    except (ConfigError, MvoValidationError, EmptyTrainingSetError) as err:
        log.debug('usage error', exc_info=True)
        typer.echo(f'Error: {err}', err=True)
        raise typer.Exit(EXIT_USAGE)
    except (NTriplesSyntaxError, MvoParseError, ModelVersionError, ModelFormatError, GoldFormatError) as err:
        log.debug('input error', exc_info=True)
        typer.echo(f'Error: {err}', err=True)
        raise typer.Exit(EXIT_FAILURE)
    except OSError as err:
        typer.echo(f'Error: {err.filename or ""}: {err.strerror or err}', err=True)
        raise typer.Exit(EXIT_FAILURE)


def _read(path: Path) -> str:
    return path.read_text(encoding='utf-8')


def _model(config: CliConfig) -> ViewpointModel:
    if config.model_path is None:
        raise ConfigError('no model given: pass --model or set VPRDF_MODEL_PATH')
    return load_model(_read(config.model_path))


@app.command('train')
def cmd_train(ontology_paths: List[Path] = typer.Argument(..., help='Instantiated multi-viewpoints ontology files.'),
              out: Optional[Path] = typer.Option(None, '--out', '-o', help='Where to write the model.'),
              theta: Optional[float] = typer.Option(None, min=0.0, max=1.0, help='Confidence threshold.'),
              min_support: Optional[int] = typer.Option(None, min=1, help='Minimum supporting ontologies.'),
              config_file: Optional[Path] = typer.Option(None, '--config', help='JSON config file.')):
    """Train a viewpoint model from ontology files."""
    with exit_codes():
        config = CliConfig.resolve(config_file, output=out, theta=theta, min_support=min_support)
        if config.output is None:
            raise ConfigError('no output path given: pass --out')
        for path, count in sorted(Counter(ontology_paths).items()):
            if count > 1:
                warnings.warn(f'{path} is listed {count} times and will be counted {count} times')
        ontologies = [load_mvo(_read(path)) for path in ontology_paths]
        kwargs = {k: v for k, v in (('theta', config.theta), ('min_support', config.min_support)) if v is not None}
        model = train(ontologies, **kwargs)
        write_atomic(config.output, save_model(model))
    summary = model.summary()
    typer.echo(f"trained on {len(ontologies)} ontologies: {summary['labels']} labels, "
               f"{summary['viewpoints']} viewpoints ({', '.join(model.viewpoints()) or '-'}), "
               f"{summary['links']} links")
    typer.echo(f'model written to {config.output}')


@app.command('convert')
def cmd_convert(input_path: Path = typer.Argument(..., help='N-Triples document to convert.'),
                model: Optional[Path] = typer.Option(None, '--model', '-m', help='Model file.'),
                out: Optional[Path] = typer.Option(None, '--out', '-o', help='Where to write the VP-RDF document.'),
                reified: Optional[bool] = typer.Option(None, '--reified/--direct',
                                                       help='Emit reified or direct VP-RDF statements.'),
                emit_schema: Optional[bool] = typer.Option(None, '--emit-schema/--no-schema',
                                                         help='Include the VP-RDF schema axioms.'),
                namespace: Optional[str] = typer.Option(None, '--namespace', help='VP-RDF namespace IRI.'),
                theta: Optional[float] = typer.Option(None, min=0.0, max=1.0, help='Override the model theta.'),
                min_support: Optional[int] = typer.Option(None, min=1, help='Override the model min_support.'),
                config_file: Optional[Path] = typer.Option(None, '--config', help='JSON config file.')):
    """Convert an RDF document into a VP-RDF document."""
    with exit_codes():
        config = CliConfig.resolve(config_file, model_path=model, output=out, reified=reified,
                                   emit_schema=emit_schema, namespace=namespace, theta=theta,
                                   min_support=min_support)
        if config.output is None:
            raise ConfigError('no output path given: pass --out')
        conversion = config.conversion_config()
        viewpoint_model = _model(config)
        graph = parse_ntriples(input_path.read_bytes())
        converted, report = convert_graph(graph, viewpoint_model, conversion)
        write_atomic(config.output, serialize_ntriples(converted))
    typer.echo(report.to_table(), nl=False)


@app.command('predict')
def cmd_predict(labels: List[str] = typer.Argument(..., help='Labels to predict viewpoints for.'),
                model: Optional[Path] = typer.Option(None, '--model', '-m', help='Model file.'),
                predicate: bool = typer.Option(False, '--predicate', help='Predict as predicates, not terms.'),
                concept_fallback: Optional[bool] = typer.Option(
                    None, '--concept-fallback/--no-concept-fallback',
                    help='With --predicate, fall back to concept and individual counts.'),
                theta: Optional[float] = typer.Option(None, min=0.0, max=1.0, help='Override the model theta.'),
                min_support: Optional[int] = typer.Option(None, min=1, help='Override the model min_support.'),
                config_file: Optional[Path] = typer.Option(None, '--config', help='JSON config file.')):
    """Print the predicted viewpoints of each label."""
    with exit_codes():
        config = CliConfig.resolve(config_file, model_path=model, theta=theta, min_support=min_support,
                                   predicate_concept_fallback=concept_fallback)
        viewpoint_model = _model(config)
    for raw in labels:
        label = normalize_label(raw)
        if predicate:
            predictions = predict_predicate(viewpoint_model, label, config.theta, config.min_support,
                                            config.predicate_concept_fallback)
        else:
            predictions = predict_term(viewpoint_model, label, config.theta, config.min_support)
        typer.echo(f"{label}: {', '.join(str(p) for p in predictions) or '(none)'}")


@app.command('query')
def cmd_query(graph_path: Path = typer.Argument(..., help='VP-RDF N-Triples document.'),
              viewpoint: Optional[str] = typer.Option(None, '--viewpoint', help='Viewpoint to filter on.'),
              consensual: bool = typer.Option(False, '--consensual', help='Select triples linked to no viewpoint.'),
              namespace: Optional[str] = typer.Option(None, '--namespace', help='VP-RDF namespace IRI.'),
              config_file: Optional[Path] = typer.Option(None, '--config', help='JSON config file.')):
    """Print the triples relevant to a viewpoint, or the consensual ones."""
    with exit_codes():
        if (viewpoint is None) == (not consensual):
            raise ConfigError('pass exactly one of --viewpoint and --consensual')
        config = CliConfig.resolve(config_file, namespace=namespace)
        conversion = config.conversion_config()
        graph = parse_ntriples(graph_path.read_bytes())
        if consensual:
            result = consensual_filter(graph, conversion)
        else:
            result = viewpoint_filter(graph, viewpoint, conversion)
    typer.echo(serialize_ntriples(result.triples), nl=False)


@app.command('eval')
def cmd_eval(graph_path: Path = typer.Argument(..., help='VP-RDF N-Triples document.'),
             gold_path: Path = typer.Argument(..., help='Gold labels file.'),
             viewpoint: Optional[str] = typer.Option(None, '--viewpoint', help='Evaluate one viewpoint only.'),
             report_out: Optional[Path] = typer.Option(None, '--report-out', help='Write the JSON report here.'),
             namespace: Optional[str] = typer.Option(None, '--namespace', help='VP-RDF namespace IRI.'),
             config_file: Optional[Path] = typer.Option(None, '--config', help='JSON config file.')):
    """Measure the precision and recall of viewpoint queries against gold labels."""
    with exit_codes():
        config = CliConfig.resolve(config_file, namespace=namespace)
        conversion = config.conversion_config()
        graph = parse_ntriples(graph_path.read_bytes())
        gold = load_gold(_read(gold_path))
        report = evaluate_viewpoints(graph, gold, conversion, None if viewpoint is None else [viewpoint])
        if report_out is not None:
            write_atomic(report_out, report.to_json())
    for name, score in sorted(report.scores.items()):
        typer.echo(f'{name}: {score}')
    typer.echo('')
    typer.echo(report.to_table(), nl=False)


@app.command('synth')
def cmd_synth(out_dir: Path = typer.Option(..., '--out-dir', help='Directory to write the corpus into.'),
              seed: Optional[int] = typer.Option(None, help='Generator seed.'),
              viewpoints: Optional[int] = typer.Option(None, '--viewpoints', min=1),
              concepts: Optional[int] = typer.Option(None, '--concepts', min=1),
              individuals: Optional[int] = typer.Option(None, '--individuals', min=1),
              triples: Optional[int] = typer.Option(None, '--triples', min=1),
              ontologies: Optional[int] = typer.Option(None, '--ontologies', min=1),
              noise: Optional[float] = typer.Option(None, '--noise', min=0.0, max=1.0),
              config_file: Optional[Path] = typer.Option(None, '--config', help='JSON config file.')):
    """Write a seeded synthetic corpus: training ontologies, an RDF graph and its gold labels."""
    with exit_codes():
        config = CliConfig.resolve(config_file, seed=seed, n_viewpoints=viewpoints, n_concepts=concepts,
                                   n_individuals=individuals, n_triples=triples, n_ontologies=ontologies,
                                   noise_rate=noise)
        corpus_ontologies, graph, gold = generate_synthetic(
            config.seed, n_viewpoints=config.n_viewpoints, n_concepts=config.n_concepts,
            n_individuals=config.n_individuals, n_triples=config.n_triples, noise_rate=config.noise_rate,
            n_ontologies=config.n_ontologies, namespace=config.default_namespace + 'synth/')
        documents = {f'ontology_{i:02d}.json': dump_mvo(o) for i, o in enumerate(corpus_ontologies)}
        documents['graph.nt'] = serialize_ntriples(graph)
        documents['gold.json'] = dump_gold(gold)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, content in documents.items():
            write_atomic(out_dir / name, content)
    typer.echo(f'wrote {len(corpus_ontologies)} ontologies, {len(graph)} triples and gold labels to {out_dir}')
