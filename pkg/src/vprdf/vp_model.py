"""
Learns which viewpoints a term or relation is linked to by counting, over many instantiated multi-viewpoints
ontologies of a domain, how many ontologies link a label to each viewpoint.

Counts are per ontology (presence, not occurrences). The confidence of a (label, viewpoint) link is its support
divided by the number of ontologies in which the label is a local element at all.
"""
import json
import logging
import warnings
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, confloat, conint, root_validator
from toolz import concat, frequencies, groupby

from src.vprdf.exceptions import EmptyTrainingSetError, ModelFormatError, ModelVersionError
from src.vprdf.mvo import ElementKind, MvpOntology, extract_links
from src.vprdf.utils import NORMALIZATION_SCHEME

log = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = '1'
DEFAULT_THETA = 0.5
DEFAULT_MIN_SUPPORT = 1

PREDICATE_KINDS = frozenset({ElementKind.role.value, ElementKind.attribute.value})


class Prediction(BaseModel):
    viewpoint: str
    confidence: float

    class Config:
        frozen = True

    def __str__(self):
        return f'{self.viewpoint} {self.confidence:.3f}'


class ViewpointModel(BaseModel):
    """
    Per-(label, viewpoint) support counts and per-label containment counts, with the thresholds predictions use.

    `kinds` keeps, for each label, the element kinds it was observed as, once per training ontology and kind.
    """
    version: str = Field(MODEL_FORMAT_VERSION, alias='format_version')
    normalization: str = NORMALIZATION_SCHEME
    theta: confloat(ge=0.0, le=1.0) = DEFAULT_THETA
    min_support: conint(ge=1) = DEFAULT_MIN_SUPPORT
    containment: Dict[str, conint(ge=1)] = {}
    support: Dict[str, Dict[str, conint(ge=1)]] = {}
    kinds: Dict[str, List[ElementKind]] = {}

    class Config:
        allow_mutation = False
        allow_population_by_field_name = True
        use_enum_values = True

    @root_validator(skip_on_failure=True)
    def support_within_containment(cls, values):
        containment = values['containment']
        for label, per_viewpoint in values['support'].items():
            if label not in containment:
                raise ValueError(f"label '{label}' has support but no containment count")
            for viewpoint, count in per_viewpoint.items():
                if count > containment[label]:
                    raise ValueError(f"support of ('{label}', '{viewpoint}') exceeds the containment of '{label}'")
        return values

    def __repr__(self):
        return f'ViewpointModel({len(self.containment)} labels, theta={self.theta}, min_support={self.min_support})'

    def labels(self) -> List[str]:
        return sorted(self.containment)

    def viewpoints(self) -> List[str]:
        return sorted(set(concat(self.support.values())))

    def summary(self) -> Dict[str, int]:
        return {'labels': len(self.containment), 'viewpoints': len(self.viewpoints()),
                'links': sum(len(v) for v in self.support.values())}


def train(ontologies: Sequence[MvpOntology],
          theta: float = DEFAULT_THETA,
          min_support: int = DEFAULT_MIN_SUPPORT) -> ViewpointModel:
    """
    Builds a viewpoint model from instantiated multi-viewpoints ontologies of one domain.
    :param ontologies: Training ontologies. A list with the same ontology twice counts it twice.
    :param theta: Minimum confidence of a returned prediction.
    :param min_support: Minimum number of ontologies supporting a returned prediction.
    :raises EmptyTrainingSetError: if no ontology is given.
    """
    if not ontologies:
        raise EmptyTrainingSetError()
    domains = sorted({o.domain_name for o in ontologies})
    if len(domains) > 1:
        warnings.warn(f'Training ontologies come from several domains: {", ".join(domains)}')

    per_ontology = [extract_links(o) for o in ontologies]
    support_counts = frequencies(concat({(l.label, l.viewpoint) for l in links} for links in per_ontology))
    containment = frequencies(concat({l.label for l in links} for links in per_ontology))
    kind_counts = frequencies(concat({(l.label, l.kind.value) for l in links} for links in per_ontology))

    support: Dict[str, Dict[str, int]] = {}
    for (label, viewpoint), count in sorted(support_counts.items()):
        support.setdefault(label, {})[viewpoint] = count
    kinds = {label: sorted(concat([kind] * count for (_, kind), count in pairs))
             for label, pairs in groupby(lambda item: item[0][0], sorted(kind_counts.items())).items()}

    model = ViewpointModel(theta=theta, min_support=min_support, containment=dict(sorted(containment.items())),
                           support=support, kinds=kinds)
    log.info('trained on %d ontologies: %s', len(ontologies), model.summary())
    return model


def predict_term(model: ViewpointModel, label: str,
                 theta: Optional[float] = None,
                 min_support: Optional[int] = None) -> List[Prediction]:
    """
    Predicts the viewpoints a subject or object label is linked to.
    :param label: An already normalized label.
    :param theta: Overrides the model's confidence threshold.
    :param min_support: Overrides the model's minimum support.
    :return: Predictions by descending confidence, then viewpoint name. Unknown labels predict nothing.
    """
    theta = model.theta if theta is None else theta
    min_support = model.min_support if min_support is None else min_support
    containment = model.containment.get(label)
    if not containment:
        return []
    predictions = [Prediction(viewpoint=viewpoint, confidence=count / containment)
                   for viewpoint, count in model.support.get(label, {}).items()
                   if count >= min_support and count / containment >= theta]
    return sorted(predictions, key=lambda p: (-p.confidence, p.viewpoint))


def predict_predicate(model: ViewpointModel, label: str,
                      theta: Optional[float] = None,
                      min_support: Optional[int] = None,
                      concept_fallback: bool = False) -> List[Prediction]:
    """
    Predicts the viewpoints a predicate label is linked to. Only labels observed as a role or an attribute in some
    training ontology are considered, unless `concept_fallback` lets concept and individual labels through too.
    """
    observed = set(model.kinds.get(label, ()))
    if not observed & PREDICATE_KINDS and not concept_fallback:
        return []
    return predict_term(model, label, theta=theta, min_support=min_support)


def save_model(model: ViewpointModel) -> str:
    """
    :return: the model as a JSON document with sorted keys, so equal models produce identical bytes.
    """
    return json.dumps(model.dict(by_alias=True), indent=2, sort_keys=True) + '\n'


def load_model(document: str) -> ViewpointModel:
    """
    Reads a model written by `save_model`.
    :raises ModelVersionError: if the document has another format version.
    :raises ModelFormatError: if the document is not a valid model.
    """
    try:
        raw = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise ModelFormatError(str(err)) from err
    if not isinstance(raw, dict):
        raise ModelFormatError('the document must be a JSON object')
    version = raw.get('format_version')
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(version, MODEL_FORMAT_VERSION)
    if raw.get('normalization') != NORMALIZATION_SCHEME:
        raise ModelFormatError(f"unknown label normalization {raw.get('normalization')!r}")
    try:
        return ViewpointModel.parse_obj(raw)
    except ValidationError as err:
        raise ModelFormatError('; '.join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in err.errors())) from err

